"""Attack simulators for robustness evaluation.

Word deletion and synonym substitution run natively and are deterministic per
seed. Re-translation and polishing delegate to an external text transformer
behind a client interface; a tape client replays recorded request/response
pairs so those attacks stay testable offline.
"""

from __future__ import annotations

import json
import logging
import random
from dataclasses import dataclass, replace as dc_replace

from . import wire
from .config import WatermarkConfig
from .errors import AttackAborted, ProtocolError, ProviderError
from .providers import candidates
from .textmodel import Document, _casing_of, rebuild, tokenize

log = logging.getLogger(__name__)

_KINDS = ("delete", "synonym", "retranslate", "polish")


@dataclass
class AttackSpec:
    kind: str
    p: float
    rng_seed: int = 0
    client: "TransformerClient | TapeTransformer | None" = None

    def __post_init__(self) -> None:
        if self.kind not in _KINDS:
            raise ValueError(f"unknown attack kind {self.kind!r}")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError("attack probability must lie in [0, 1]")
        if self.kind in ("retranslate", "polish") and self.client is None:
            raise ValueError(f"{self.kind} attack requires a transformer client")


def attack_delete(doc: Document, spec: AttackSpec) -> Document:
    """Drop each token (symbols included) independently with probability p."""
    if spec.kind != "delete":
        raise ValueError("spec.kind must be 'delete'")
    rng = random.Random(spec.rng_seed)
    drop = [rng.random() < spec.p for _ in doc.tokens]
    if not any(drop):
        return doc
    data = doc.text.encode("utf-8")
    parts: list[str] = []
    prev_end = 0
    for tok, gone in zip(doc.tokens, drop):
        start, end = tok.span
        if not gone:
            parts.append(data[prev_end:start].decode("utf-8"))
            parts.append(tok.surface)
        prev_end = end
    return tokenize("".join(parts).strip())


def attack_synonym(doc: Document, spec: AttackSpec,
                   cfg: WatermarkConfig) -> Document:
    """Rewrite eligible words with their best synonym, ignoring bits.

    Each eligible token is attacked independently with probability p; a token
    whose filtered candidate set is empty is left alone.
    """
    if spec.kind != "synonym":
        raise ValueError("spec.kind must be 'synonym'")
    rng = random.Random(spec.rng_seed)
    tokens = list(doc.tokens)
    work = doc
    changed = False
    for i, tok in enumerate(doc.tokens):
        if not tok.eligible:
            continue
        if rng.random() >= spec.p:
            continue
        cset = candidates(work, i, cfg)
        if not cset.filtered:
            continue
        best = cset.filtered[0]
        tokens[i] = dc_replace(tokens[i], surface=best.surface,
                               casing=_casing_of(best.surface))
        work = dc_replace(work, tokens=tuple(tokens))
        changed = True
    if not changed:
        return doc
    return rebuild(doc, [t.surface for t in tokens])


def attack_external(doc: Document, spec: AttackSpec) -> Document:
    """Send each sentence, with probability p, through the external client.

    A failed sentence transform is logged and the sentence kept; a client
    that cannot be reached at all aborts the attack.
    """
    if spec.kind not in ("retranslate", "polish"):
        raise ValueError("spec.kind must be 'retranslate' or 'polish'")
    assert spec.client is not None
    rng = random.Random(spec.rng_seed)
    chosen = [rng.random() < spec.p for _ in doc.sentences]
    if not any(chosen):
        return doc

    data = doc.text.encode("utf-8")
    pieces: list[str] = []
    prev_end = 0
    failures = 0
    attempted = 0
    succeeded = 0
    for (lo, hi), hit in zip(doc.sentences, chosen):
        start = doc.tokens[lo].span[0]
        end = doc.tokens[hi - 1].span[1]
        pieces.append(data[prev_end:start].decode("utf-8"))
        sentence = data[start:end].decode("utf-8")
        if hit:
            attempted += 1
            try:
                sentence = spec.client.transform(sentence)
                succeeded += 1
            except (ProviderError, ProtocolError) as exc:
                failures += 1
                log.warning("attack transform failed, sentence kept: %s", exc)
        pieces.append(sentence)
        prev_end = end
    pieces.append(data[prev_end:].decode("utf-8"))
    if attempted and not succeeded:
        raise AttackAborted(f"transformer client failed all {attempted} requests")
    if failures:
        log.warning("attack completed with %d/%d failed sentences", failures, attempted)
    return tokenize("".join(pieces))


@dataclass
class ExternalTransformerHandle:
    """Where an external re-translator or polisher lives."""

    endpoint: str
    prompt_or_route: str = ""
    timeout: float = 30.0


class TransformerClient:
    """Line-record client for the transform protocol.

    Requests are ``{"id", "op": "transform", "text", "route"}`` answered by
    ``{"id", "text"}`` over stdio or TCP, exactly like the provider protocol.
    """

    def __init__(self, handle: ExternalTransformerHandle):
        self.handle = handle
        try:
            self._client = wire.open_endpoint(handle.endpoint, timeout=handle.timeout)
        except OSError as exc:
            raise AttackAborted(
                f"transformer endpoint {handle.endpoint!r} unavailable: {exc}"
            ) from exc

    def transform(self, text: str) -> str:
        response = self._client.request(
            {"op": "transform", "text": text, "route": self.handle.prompt_or_route}
        )
        out = response.get("text")
        if not isinstance(out, str):
            raise ProtocolError(f"transform response lacks text: {response!r}")
        return out

    def close(self) -> None:
        self._client.close()


class TapeTransformer:
    """Replays a recorded fixture tape of request/response record pairs.

    The tape is a line-record file holding alternating request and response
    records; playback is strictly sequential and each request must match the
    recorded one.
    """

    def __init__(self, path):
        records = []
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if line:
                    records.append(json.loads(line))
        if len(records) % 2 != 0:
            raise ProtocolError("tape holds an odd number of records")
        self._pairs = [(records[i], records[i + 1]) for i in range(0, len(records), 2)]
        self._cursor = 0

    def transform(self, text: str) -> str:
        if self._cursor >= len(self._pairs):
            raise ProviderError("tape exhausted")
        request, response = self._pairs[self._cursor]
        self._cursor += 1
        if request.get("op") != "transform" or request.get("text") != text:
            raise ProtocolError(
                f"tape mismatch at pair {self._cursor}: expected "
                f"{request.get('text')!r}, got {text!r}"
            )
        out = response.get("text")
        if not isinstance(out, str):
            raise ProtocolError(f"tape response lacks text: {response!r}")
        return out

    def close(self) -> None:
        pass


class RecordingTransformer:
    """Wraps a live client and writes the exchange as a fixture tape."""

    def __init__(self, inner: TransformerClient, path):
        self._inner = inner
        self._fh = open(path, "w", encoding="utf-8")

    def transform(self, text: str) -> str:
        out = self._inner.transform(text)
        route = self._inner.handle.prompt_or_route
        self._fh.write(json.dumps({"op": "transform", "text": text, "route": route},
                                  ensure_ascii=False) + "\n")
        self._fh.write(json.dumps({"text": out}, ensure_ascii=False) + "\n")
        self._fh.flush()
        return out

    def close(self) -> None:
        self._fh.close()
        self._inner.close()


def run_attack(doc: Document, spec: AttackSpec,
               cfg: WatermarkConfig | None = None) -> Document:
    """Dispatch on the attack kind."""
    if spec.kind == "delete":
        return attack_delete(doc, spec)
    if spec.kind == "synonym":
        if cfg is None:
            raise ValueError("synonym attack needs a watermark config")
        return attack_synonym(doc, spec, cfg)
    return attack_external(doc, spec)
