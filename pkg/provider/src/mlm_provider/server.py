"""Protocol loop: newline-delimited JSON records over stdio or TCP.

Requests are ``{"id", "op": "candidates", "tokens", "index", "k", ...}`` or
``{"id", "op": "ping"}``; every response carries the originating id. The
optional ``seed`` field makes candidate generation deterministic so a
detector can reconstruct injection-time candidate scopes.
"""

from __future__ import annotations

import argparse
import json
import socket
import sys

from .generation import generate_candidates
from .scoring import contextual_scores, global_score, sentence_scores
from .session import LoadedSession, ProviderSession


def answer_candidates(ls: LoadedSession, request: dict) -> dict:
    tokens = request["tokens"]
    index = int(request["index"])
    if not isinstance(tokens, list) or not all(isinstance(t, str) for t in tokens):
        raise ValueError("tokens must be a list of strings")
    if not 0 <= index < len(tokens):
        raise ValueError("index out of range")
    k = int(request.get("k", 32))
    seed = request.get("seed", ls.config.seed)
    generated = generate_candidates(ls, tokens, index, k, seed)
    if generated is None:
        return {"id": request["id"], "candidates": []}
    surfaces, position = generated
    if not surfaces:
        return {"id": request["id"], "candidates": []}

    s_context = contextual_scores(ls, tokens, index, surfaces, position)
    s_sent = sentence_scores(ls, tokens, index, surfaces)
    entries = []
    for surface, ctx, sent in zip(surfaces, s_context, s_sent):
        entry = {"surface": surface, "s_context": ctx, "s_sent": sent}
        sg = global_score(ls, tokens[index], surface)
        if sg is not None:
            entry["s_global"] = sg
        entries.append(entry)
    return {"id": request["id"], "candidates": entries}


def handle_line(ls: LoadedSession, line: str) -> dict | None:
    line = line.strip()
    if not line:
        return None
    try:
        request = json.loads(line)
    except json.JSONDecodeError:
        return {"id": -1, "error": "unparseable record"}
    if not isinstance(request, dict) or not isinstance(request.get("id"), int):
        return {"id": -1, "error": "record missing integer id"}
    op = request.get("op")
    try:
        if op == "ping":
            return {"id": request["id"], "ok": True}
        if op == "candidates":
            return answer_candidates(ls, request)
        return {"id": request["id"], "error": f"unknown op {op!r}"}
    except Exception as exc:  # per-request isolation: one bad request, one error record
        return {"id": request["id"], "error": f"{type(exc).__name__}: {exc}"}


def serve_stream(ls: LoadedSession, rin, rout) -> None:
    for line in rin:
        response = handle_line(ls, line)
        if response is not None:
            rout.write(json.dumps(response, ensure_ascii=False) + "\n")
            rout.flush()


def serve_load_failure(reason: str, rin, rout) -> None:
    """Answer every request with an error record when models failed to load."""
    for line in rin:
        line = line.strip()
        if not line:
            continue
        try:
            rid = json.loads(line).get("id", -1)
            if not isinstance(rid, int):
                rid = -1
        except (json.JSONDecodeError, AttributeError):
            rid = -1
        rout.write(json.dumps({"id": rid, "error": reason}) + "\n")
        rout.flush()


def serve_tcp(ls: LoadedSession, host: str, port: int, ready_out=None) -> None:
    server = socket.create_server((host, port))
    if ready_out is not None:
        actual = server.getsockname()[1]
        ready_out.write(f"listening {actual}\n")
        ready_out.flush()
    while True:
        conn, _addr = server.accept()
        with conn:
            rin = conn.makefile("r", encoding="utf-8", newline="\n")
            rout = conn.makefile("w", encoding="utf-8", newline="\n")
            serve_stream(ls, rin, rout)


def main(argv: list[str] | None = None) -> None:
    parser = argparse.ArgumentParser(
        description="Masked-language-model synonym provider."
    )
    parser.add_argument("--mlm-model", required=True,
                        help="model path or hub id for candidate generation")
    parser.add_argument("--sentence-model",
                        help="model for sentence embeddings (default: MLM model)")
    parser.add_argument("--vectors", help="plain-text word-vector table")
    parser.add_argument("--dropout", type=float, default=0.3)
    parser.add_argument("--layers", type=int, default=8)
    parser.add_argument("--seed", type=int,
                        help="session-wide seed; per-request seeds override")
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int,
                        help="serve one TCP client at a time instead of stdio")
    args = parser.parse_args(argv)

    session = ProviderSession(
        mlm_model=args.mlm_model,
        sentence_model=args.sentence_model,
        vectors_path=args.vectors,
        dropout_rate=args.dropout,
        layers=args.layers,
        seed=args.seed,
    )
    try:
        loaded = session.load()
    except Exception as exc:
        reason = f"model load failed: {type(exc).__name__}: {exc}"
        print(reason, file=sys.stderr)
        serve_load_failure(reason, sys.stdin, sys.stdout)
        return
    if args.port is not None:
        serve_tcp(loaded, args.host, args.port, ready_out=sys.stderr)
    else:
        serve_stream(loaded, sys.stdin, sys.stdout)


if __name__ == "__main__":
    main()
