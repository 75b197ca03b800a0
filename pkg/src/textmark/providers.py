"""Synonym providers: candidate generation plus the similarity scores.

Two providers ship here. ``LexiconProvider`` is self-contained: synonyms come
from a word list and all similarity scores are word-vector cosines, with the
contextual score approximated by the mean vector of a window around the
target and the sentence score by mean-of-vectors sentence embeddings.
``RemoteProvider`` is a client for an external process (typically a masked
language model) speaking the line-record protocol; it trusts the provider's
contextual and sentence scores and blends the word score locally.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from . import wire
from .config import WatermarkConfig
from .errors import ProtocolError, ProviderError
from .textmodel import Document, recase

log = logging.getLogger(__name__)

_CONTEXT_WINDOW = 5


@dataclass(frozen=True)
class Candidate:
    """One scored substitute; its surface is already recased for insertion."""

    surface: str
    s_global: float
    s_context: float
    s_word: float
    s_sent: float


@dataclass(frozen=True)
class CandidateSet:
    token_index: int
    raw: tuple[Candidate, ...]
    filtered: tuple[Candidate, ...]


class Lexicon:
    """A synonym map backed by a shared word-vector table.

    Every synonym-map key must have a vector and all vectors share one
    dimension. Lookups are case-insensitive.
    """

    def __init__(self, synonym_map: dict[str, list[str]],
                 vectors: dict[str, np.ndarray]):
        self.synonym_map = {k.casefold(): tuple(v) for k, v in synonym_map.items()}
        self.vectors = {k.casefold(): np.asarray(v, dtype=np.float64)
                        for k, v in vectors.items()}
        dims = {v.shape for v in self.vectors.values()}
        if len(dims) > 1:
            raise ValueError(f"vectors have mixed shapes: {sorted(dims)}")
        for key in self.synonym_map:
            if key not in self.vectors:
                raise ValueError(f"synonym-map key {key!r} has no vector")

    def vector(self, word: str) -> np.ndarray | None:
        return self.vectors.get(word.casefold())

    def synonyms(self, word: str) -> tuple[str, ...]:
        return self.synonym_map.get(word.casefold(), ())

    @classmethod
    def load(cls, synonyms_path, vectors_path) -> "Lexicon":
        """Read a tab-separated synonym file and a plain-text vector table.

        Synonyms: ``word<TAB>syn1<TAB>syn2...`` per line. Vectors: a word
        followed by its space-separated components per line. Entries without
        vectors are dropped with a warning.
        """
        vectors: dict[str, np.ndarray] = {}
        with open(vectors_path, encoding="utf-8") as fh:
            for line in fh:
                parts = line.split()
                if len(parts) < 2:
                    continue
                vectors[parts[0].casefold()] = np.array(parts[1:], dtype=np.float64)
        synonym_map: dict[str, list[str]] = {}
        dropped = 0
        with open(synonyms_path, encoding="utf-8") as fh:
            for line in fh:
                parts = [p.strip() for p in line.rstrip("\n").split("\t") if p.strip()]
                if len(parts) < 2:
                    continue
                head = parts[0].casefold()
                if head not in vectors:
                    dropped += 1
                    continue
                synonym_map[head] = parts[1:]
        if dropped:
            log.warning("dropped %d synonym entries lacking vectors", dropped)
        return cls(synonym_map, vectors)


def cosine(a: np.ndarray, b: np.ndarray) -> float:
    na = float(np.linalg.norm(a))
    nb = float(np.linalg.norm(b))
    if na == 0.0 or nb == 0.0:
        return 0.0
    return float(np.clip(np.dot(a, b) / (na * nb), -1.0, 1.0))


class _ScoreContext:
    """Shared per-position state for scoring many candidates at one token.

    Precomputes the window mean and the sentence vector sum so each candidate
    costs one or two cosines. ``lexicon_scores`` delegates here, so the fast
    path and the public scoring operation cannot drift apart.
    """

    def __init__(self, doc: Document, token_index: int, lex: Lexicon,
                 window: int = _CONTEXT_WINDOW):
        self.lex = lex
        tok = doc.tokens[token_index]
        self.v_orig = lex.vector(tok.surface)
        if self.v_orig is None:
            raise ValueError(f"no vector for original word {tok.surface!r}")

        lo = max(0, token_index - window)
        hi = min(len(doc.tokens), token_index + window + 1)
        window_vecs = []
        for j in range(lo, hi):
            if j == token_index:
                continue
            v = lex.vector(doc.tokens[j].surface)
            if v is not None:
                window_vecs.append(v)
        self.window_mean = np.mean(window_vecs, axis=0) if window_vecs else None

        s_lo, s_hi = doc.sentence_of(token_index)
        sent_vecs = []
        for j in range(s_lo, s_hi):
            if j == token_index:
                continue
            v = lex.vector(doc.tokens[j].surface)
            if v is not None:
                sent_vecs.append(v)
        self.sent_other_sum = (
            np.sum(sent_vecs, axis=0) if sent_vecs else np.zeros_like(self.v_orig)
        )

    def score(self, v_cand: np.ndarray, lam: float) -> tuple[float, float, float, float]:
        s_global = cosine(self.v_orig, v_cand)
        if self.window_mean is not None:
            s_context = cosine(v_cand, self.window_mean)
        else:
            # Nothing around the target has a vector; the contextual score
            # degenerates to the global one so the blend stays meaningful.
            s_context = s_global
        s_sent = cosine(self.sent_other_sum + self.v_orig,
                        self.sent_other_sum + v_cand)
        s_word = lam * s_context + (1.0 - lam) * s_global
        return s_global, s_context, s_word, s_sent


def lexicon_scores(original: str, candidate: str, doc: Document, token_index: int,
                   lex: Lexicon, lam: float) -> tuple[float, float, float, float]:
    """Score one candidate against the original word at a position.

    Returns ``(s_global, s_context, s_word, s_sent)``.
    """
    v_cand = lex.vector(candidate)
    if v_cand is None:
        raise ValueError(f"no vector for candidate {candidate!r}")
    ctx = _ScoreContext(doc, token_index, lex)
    return ctx.score(v_cand, lam)


class LexiconProvider:
    """Deterministic in-process provider over a loaded lexicon."""

    def __init__(self, lexicon: Lexicon, window: int = _CONTEXT_WINDOW):
        self.lexicon = lexicon
        self.window = window

    def generate(self, doc: Document, token_index: int,
                 cfg: WatermarkConfig) -> list[Candidate]:
        tok = doc.tokens[token_index]
        synonyms = self.lexicon.synonyms(tok.surface)
        if not synonyms or self.lexicon.vector(tok.surface) is None:
            return []
        ctx = _ScoreContext(doc, token_index, self.lexicon, self.window)
        out: list[Candidate] = []
        seen: set[str] = set()
        for syn in synonyms:
            if not syn or any(c.isspace() for c in syn):
                continue
            surface = recase(tok, syn)
            if surface == tok.surface or surface in seen:
                continue
            v = self.lexicon.vector(syn)
            if v is None:
                continue
            seen.add(surface)
            s_global, s_context, s_word, s_sent = ctx.score(v, cfg.lam)
            out.append(Candidate(surface, s_global, s_context, s_word, s_sent))
        return out

    def close(self) -> None:
        pass


class RemoteProvider:
    """Client for an external synonym provider over stdio or TCP.

    The provider computes contextual and sentence scores; the global score is
    recomputed from a local lexicon when one is configured (falling back to
    the provider's value), and the word score is always blended locally.
    """

    def __init__(self, client: wire.RecordClient, lexicon: Lexicon | None = None,
                 seed: int | None = None):
        self._client = client
        self.lexicon = lexicon
        self.seed = seed

    @classmethod
    def connect(cls, endpoint: str, lexicon: Lexicon | None = None,
                timeout: float = 30.0, seed: int | None = None) -> "RemoteProvider":
        """Open ``host:port`` or spawn a provider command."""
        try:
            client = wire.open_endpoint(endpoint, timeout=timeout)
        except OSError as exc:
            raise ProviderError(f"cannot reach provider at {endpoint!r}: {exc}") from exc
        return cls(client, lexicon=lexicon, seed=seed)

    def ping(self) -> bool:
        response = self._client.request({"op": "ping"})
        if response.get("ok") is not True:
            raise ProtocolError(f"bad ping response: {response!r}")
        return True

    def generate(self, doc: Document, token_index: int,
                 cfg: WatermarkConfig) -> list[Candidate]:
        tok = doc.tokens[token_index]
        request = {
            "op": "candidates",
            "tokens": [t.surface for t in doc.tokens],
            "index": token_index,
            "k": cfg.k,
            "tau_sent": cfg.tau_sent,
            "tau_word": cfg.tau_word,
            "lambda": cfg.lam,
        }
        if self.seed is not None:
            request["seed"] = self.seed
        response = self._client.request(request)
        entries = response.get("candidates")
        if not isinstance(entries, list):
            raise ProtocolError("response lacks a candidates list")

        v_orig = self.lexicon.vector(tok.surface) if self.lexicon else None
        out: list[Candidate] = []
        seen: set[str] = set()
        for entry in entries:
            if not isinstance(entry, dict) or not isinstance(entry.get("surface"), str):
                raise ProtocolError(f"malformed candidate entry: {entry!r}")
            raw_surface = entry["surface"].strip()
            if not raw_surface or any(c.isspace() for c in raw_surface):
                continue
            try:
                s_context = float(entry["s_context"])
                s_sent = float(entry["s_sent"])
            except (KeyError, TypeError, ValueError):
                raise ProtocolError(f"candidate scores missing or non-numeric: {entry!r}")
            surface = recase(tok, raw_surface)
            if surface == tok.surface or surface in seen:
                continue
            s_global = None
            if v_orig is not None and self.lexicon is not None:
                v_cand = self.lexicon.vector(raw_surface)
                if v_cand is not None:
                    s_global = cosine(v_orig, v_cand)
            if s_global is None:
                if "s_global" in entry:
                    try:
                        s_global = float(entry["s_global"])
                    except (TypeError, ValueError):
                        raise ProtocolError(f"non-numeric s_global: {entry!r}")
                elif cfg.lam == 1.0:
                    s_global = 0.0  # blend weight zero; value never enters s_word
                else:
                    continue  # a required score has no source at all
            seen.add(surface)
            s_context = float(np.clip(s_context, -1.0, 1.0))
            s_sent = float(np.clip(s_sent, -1.0, 1.0))
            s_global = float(np.clip(s_global, -1.0, 1.0))
            s_word = cfg.lam * s_context + (1.0 - cfg.lam) * s_global
            out.append(Candidate(surface, s_global, s_context, s_word, s_sent))
        return out

    def close(self) -> None:
        self._client.close()

    def __enter__(self) -> "RemoteProvider":
        return self

    def __exit__(self, *exc) -> None:
        self.close()


def candidates(doc: Document, token_index: int, cfg: WatermarkConfig,
               provider=None) -> CandidateSet:
    """Fetch, rank, and threshold the substitutes for one eligible token.

    The raw set holds at most ``cfg.k`` candidates ordered by descending word
    score with a lexicographic tiebreak; the filtered set keeps those clearing
    both similarity floors.
    """
    if provider is None:
        provider = cfg.provider
    if provider is None:
        raise ValueError("no synonym provider configured")
    tok = doc.tokens[token_index]
    if not tok.eligible:
        raise ValueError(f"token {token_index} ({tok.surface!r}) is not eligible")
    try:
        scored = provider.generate(doc, token_index, cfg)
    except ProviderError as exc:
        raise ProviderError(
            f"token {token_index} ({tok.surface!r}): {exc}"
        ) from exc
    scored.sort(key=lambda c: (-c.s_word, c.surface))
    raw = tuple(scored[: cfg.k])
    filtered = tuple(
        c for c in raw if c.s_sent >= cfg.tau_sent and c.s_word >= cfg.tau_word
    )
    return CandidateSet(token_index=token_index, raw=raw, filtered=filtered)
