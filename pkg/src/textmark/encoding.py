"""Deterministic word-pair binary encoding.

Every word occurrence carries a pseudorandom bit derived from its own hash
XORed with its predecessor's hash. The constructions here are normative for
this artifact and frozen in the golden-bit conformance fixture:

* a word hash is the big-endian value of the first 8 bytes of SHA-256 over
  the NFC-normalized UTF-8 surface form;
* the bit for a 64-bit seed is the least significant bit of the first byte
  of SHA-256 over the seed's 8-byte big-endian encoding.
"""

from __future__ import annotations

import hashlib
import unicodedata
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

from .textmodel import Document

_U64 = 1 << 64


@dataclass(frozen=True)
class WordHash:
    value: int


@dataclass(frozen=True)
class EncodedToken:
    """A token position together with its bit and the seed that produced it."""

    token_index: int
    bit: int
    seed: int


@lru_cache(maxsize=1 << 16)
def _hash_u64(surface: str) -> int:
    data = unicodedata.normalize("NFC", surface).encode("utf-8")
    return int.from_bytes(hashlib.sha256(data).digest()[:8], "big")


def hash_word(surface: str) -> WordHash:
    """Hash a word surface to a stable unsigned 64-bit value."""
    if not surface:
        raise ValueError("cannot hash an empty surface")
    return WordHash(_hash_u64(surface))


def random_binary(seed: int) -> int:
    """Derive a deterministic bit from a 64-bit seed."""
    if not 0 <= seed < _U64:
        raise ValueError("seed must be an unsigned 64-bit integer")
    return hashlib.sha256(seed.to_bytes(8, "big")).digest()[0] & 1


def pair_seed(prev_surface: str, cur_surface: str) -> int:
    return _hash_u64(cur_surface) ^ _hash_u64(prev_surface)


def encode_pair(prev_surface: str, cur_surface: str) -> int:
    """The bit carried by ``cur_surface`` when preceded by ``prev_surface``."""
    if not prev_surface or not cur_surface:
        raise ValueError("cannot hash an empty surface")
    return random_binary(pair_seed(prev_surface, cur_surface))


def encode_stream(doc: Document, scope: Iterable[int]) -> list[EncodedToken]:
    """Encode the tokens at the given indices against their predecessors.

    The predecessor is always the immediately preceding token in the document,
    eligible or not. Index 0 has no predecessor and is rejected.
    """
    n = len(doc.tokens)
    out: list[EncodedToken] = []
    for i in sorted(set(scope)):
        if not 1 <= i < n:
            raise ValueError(f"scope index {i} outside valid range 1..{n - 1}")
        seed = pair_seed(doc.tokens[i - 1].surface, doc.tokens[i].surface)
        out.append(EncodedToken(token_index=i, bit=random_binary(seed), seed=seed))
    return out
