"""Line-delimited JSON record transport with id-based demultiplexing.

Both the synonym-provider protocol and the external-transformer protocol run
over this layer: one UTF-8 JSON record per line, requests and responses
correlated by an integer ``id``. Transports are either a child process's
stdin/stdout or a TCP connection; the record format is identical.
"""

from __future__ import annotations

import itertools
import json
import socket
import subprocess
import threading

from .errors import ProtocolError, ProviderError


class SubprocessChannel:
    """Spawn a command and exchange records over its standard streams."""

    def __init__(self, argv: list[str]):
        self._proc = subprocess.Popen(
            argv,
            stdin=subprocess.PIPE,
            stdout=subprocess.PIPE,
            text=True,
            encoding="utf-8",
            bufsize=1,
        )

    def send(self, line: str) -> None:
        assert self._proc.stdin is not None
        self._proc.stdin.write(line + "\n")
        self._proc.stdin.flush()

    def readline(self) -> str:
        assert self._proc.stdout is not None
        return self._proc.stdout.readline()

    def close(self) -> None:
        try:
            if self._proc.stdin:
                self._proc.stdin.close()
            self._proc.terminate()
            self._proc.wait(timeout=5)
        except Exception:
            self._proc.kill()


class TcpChannel:
    def __init__(self, host: str, port: int, connect_timeout: float = 10.0):
        self._sock = socket.create_connection((host, port), timeout=connect_timeout)
        self._sock.settimeout(None)
        self._rfile = self._sock.makefile("r", encoding="utf-8", newline="\n")
        self._wfile = self._sock.makefile("w", encoding="utf-8", newline="\n")

    def send(self, line: str) -> None:
        self._wfile.write(line + "\n")
        self._wfile.flush()

    def readline(self) -> str:
        return self._rfile.readline()

    def close(self) -> None:
        try:
            self._rfile.close()
            self._wfile.close()
        finally:
            self._sock.close()


class RecordClient:
    """Correlates request and response records by id.

    Writes are serialized; a background reader demultiplexes responses, so
    callers on different threads may have requests in flight concurrently.
    Any record that cannot be attributed to a pending request poisons the
    connection with a ProtocolError.
    """

    def __init__(self, channel, timeout: float = 30.0):
        self._channel = channel
        self._timeout = timeout
        self._ids = itertools.count(1)
        self._write_lock = threading.Lock()
        self._cond = threading.Condition()
        self._pending: set[int] = set()
        self._responses: dict[int, dict] = {}
        self._fatal: Exception | None = None
        self._reader: threading.Thread | None = None

    def _ensure_reader(self) -> None:
        if self._reader is None:
            self._reader = threading.Thread(target=self._read_loop, daemon=True)
            self._reader.start()

    def _read_loop(self) -> None:
        while True:
            try:
                line = self._channel.readline()
            except Exception as exc:
                self._poison(ProviderError(f"transport read failed: {exc}"))
                return
            if line == "":
                self._poison(ProviderError("peer closed the connection"))
                return
            line = line.strip()
            if not line:
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError:
                self._poison(ProtocolError(f"malformed record: {line[:120]!r}"))
                return
            if not isinstance(record, dict) or not isinstance(record.get("id"), int):
                self._poison(ProtocolError("record missing integer id"))
                return
            rid = record["id"]
            with self._cond:
                if rid not in self._pending:
                    self._fatal = ProtocolError(f"response id {rid} matches no request")
                    self._cond.notify_all()
                    return
                self._pending.discard(rid)
                self._responses[rid] = record
                self._cond.notify_all()

    def _poison(self, exc: Exception) -> None:
        with self._cond:
            self._fatal = exc
            self._cond.notify_all()

    def request(self, record: dict, timeout: float | None = None) -> dict:
        """Send one record and return the response with the same id."""
        limit = self._timeout if timeout is None else timeout
        rid = next(self._ids)
        record = dict(record, id=rid)
        with self._cond:
            if self._fatal is not None:
                raise self._fatal
            self._pending.add(rid)
        self._ensure_reader()
        try:
            with self._write_lock:
                self._channel.send(json.dumps(record, ensure_ascii=False))
        except Exception as exc:
            with self._cond:
                self._pending.discard(rid)
            raise ProviderError(f"transport write failed: {exc}") from exc
        with self._cond:
            self._cond.wait_for(
                lambda: rid in self._responses or self._fatal is not None,
                timeout=limit,
            )
            if rid in self._responses:
                response = self._responses.pop(rid)
            elif self._fatal is not None:
                raise self._fatal
            else:
                self._pending.discard(rid)
                raise ProviderError(f"request {rid} timed out after {limit:g}s")
        if "error" in response:
            raise ProviderError(str(response["error"]))
        return response

    def close(self) -> None:
        self._channel.close()


def open_endpoint(endpoint: str, timeout: float = 30.0) -> RecordClient:
    """Open a record client for ``host:port`` or a command line."""
    host, sep, port = endpoint.rpartition(":")
    if sep and host and port.isdigit() and "/" not in host and " " not in host:
        return RecordClient(TcpChannel(host, int(port)), timeout=timeout)
    import shlex

    return RecordClient(SubprocessChannel(shlex.split(endpoint)), timeout=timeout)
