"""Shared builders for corpora and documents with controlled bit patterns."""

from __future__ import annotations

import json
import random

from textmark.encoding import encode_pair
from textmark.textmodel import Document, ExclusionList, analyze


def chain_with_bits(vocab: list[str], bits: list[int], seed: int = 0) -> list[str]:
    """Build a word sequence whose eligible-token bits match ``bits``.

    Returns ``len(bits) + 1`` words; the bit of word i+1 against word i equals
    ``bits[i]`` by construction, making the sequence an independent oracle for
    anything that recomputes bits downstream.
    """
    rng = random.Random(seed)
    words = [rng.choice(vocab)]
    for want in bits:
        for _ in range(10_000):
            cand = rng.choice(vocab)
            if cand != words[-1] and encode_pair(words[-1], cand) == want:
                words.append(cand)
                break
        else:
            raise RuntimeError("could not extend bit chain; vocabulary too small")
    return words


def doc_from_words(words: list[str], excl: ExclusionList) -> Document:
    return analyze(" ".join(words), excl)


def write_corpus(path, texts, ids=None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for i, text in enumerate(texts):
            doc_id = ids[i] if ids else f"doc-{i:04d}"
            fh.write(json.dumps({"id": doc_id, "text": text}) + "\n")


def read_jsonl(path) -> list[dict]:
    with open(path, encoding="utf-8") as fh:
        return [json.loads(line) for line in fh if line.strip()]
