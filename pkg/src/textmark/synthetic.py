"""Synthetic corpora and lexicons for experiments, tests, and demos.

Synthetic lexicons assign every covered word a fixed group of variant
surfaces that all share one embedding vector, so candidate filtering passes
at any threshold up to 1 and injection behavior is fully controlled by the
hash bits. Corpora are plain random-word documents drawn from the bundled
word list with a seeded generator.
"""

from __future__ import annotations

import random
from importlib import resources

import numpy as np

from .providers import Lexicon
from .textmodel import ExclusionList, analyze

_VARIANT_SUFFIXES = ("aq", "eq", "iq", "oq", "uq")


def load_wordlist() -> list[str]:
    """The bundled list of common English words, one per line, deduplicated."""
    text = resources.files("textmark.data").joinpath("wordlist.txt").read_text("utf-8")
    seen: set[str] = set()
    out: list[str] = []
    for line in text.splitlines():
        w = line.strip()
        if w and w not in seen:
            seen.add(w)
            out.append(w)
    return out


def content_words(words: list[str], excl: ExclusionList) -> list[str]:
    """Keep only words the filter would leave eligible mid-sentence."""
    out = []
    excluded = {s.casefold() for s in excl.excluded_surfaces}
    for w in words:
        doc = analyze(f"pad {w}", excl)
        if len(doc.tokens) == 2 and doc.tokens[1].eligible and w.casefold() not in excluded:
            out.append(w)
    return out


def make_corpus(words: list[str], n_docs: int, doc_len: int, seed: int,
                sentence_len: int = 0) -> list[str]:
    """Random-word documents; ``sentence_len`` > 0 adds a period every so many words."""
    rng = random.Random(seed)
    docs = []
    for _ in range(n_docs):
        chosen = [rng.choice(words) for _ in range(doc_len)]
        if sentence_len > 0:
            parts = []
            for i, w in enumerate(chosen, start=1):
                parts.append(w)
                if i % sentence_len == 0:
                    parts[-1] = w + "."
            docs.append(" ".join(parts))
        else:
            docs.append(" ".join(chosen))
    return docs


def make_lexicon(words: list[str], synonyms_per_word: int = 3,
                 coverage: float = 1.0, seed: int = 0, dim: int = 8) -> Lexicon:
    """Build a synonym lexicon where each covered word gets a variant group.

    A covered word ``w`` maps to ``synonyms_per_word`` variant surfaces
    (``waq``, ``weq``, ...); each variant maps back to the rest of its group,
    so substituted words still have candidates at detection time. All vectors
    are identical, which makes every similarity score exactly 1.
    """
    if synonyms_per_word > len(_VARIANT_SUFFIXES):
        raise ValueError(f"at most {len(_VARIANT_SUFFIXES)} synonyms per word")
    rng = random.Random(seed)
    covered = [w for w in words if coverage >= 1.0 or rng.random() < coverage]
    vec = np.ones(dim, dtype=np.float64)
    existing = {w.casefold() for w in words}
    synonym_map: dict[str, list[str]] = {}
    vectors: dict[str, np.ndarray] = {w: vec for w in words}
    for w in covered:
        group = [w]
        for suffix in _VARIANT_SUFFIXES[:synonyms_per_word]:
            variant = w + suffix
            while variant.casefold() in existing:
                variant += "z"
            existing.add(variant.casefold())
            group.append(variant)
        for member in group:
            vectors[member] = vec
            synonym_map[member] = [m for m in group if m != member]
    return Lexicon(synonym_map, vectors)


def dump_lexicon(lex: Lexicon, synonyms_path, vectors_path) -> None:
    """Write a lexicon in the loadable on-disk formats."""
    with open(synonyms_path, "w", encoding="utf-8") as fh:
        for word, syns in sorted(lex.synonym_map.items()):
            fh.write("\t".join([word, *syns]) + "\n")
    with open(vectors_path, "w", encoding="utf-8") as fh:
        for word, vec in sorted(lex.vectors.items()):
            fh.write(word + " " + " ".join(f"{x:.8g}" for x in vec) + "\n")


def noisy_lexicon(words: list[str], synonyms_per_word: int = 3, seed: int = 0,
                  dim: int = 16, noise: float = 0.15) -> Lexicon:
    """Variant groups with per-word random unit vectors plus in-group noise.

    Closer in spirit to real embeddings: synonyms score high against their
    head word but context windows are uncorrelated, so this suits demos with
    a low blend weight rather than the default profile.
    """
    rng = np.random.default_rng(seed)
    existing = {w.casefold() for w in words}
    synonym_map: dict[str, list[str]] = {}
    vectors: dict[str, np.ndarray] = {}
    for w in words:
        v = rng.standard_normal(dim)
        vectors[w] = v / np.linalg.norm(v)
    for w in words:
        group = [w]
        for suffix in _VARIANT_SUFFIXES[:synonyms_per_word]:
            variant = w + suffix
            while variant.casefold() in existing:
                variant += "z"
            existing.add(variant.casefold())
            group.append(variant)
            delta = rng.standard_normal(dim) * noise
            v = vectors[w] + delta
            vectors[variant] = v / np.linalg.norm(v)
        for member in group:
            synonym_map[member] = [m for m in group if m != member]
    return Lexicon(synonym_map, vectors)
