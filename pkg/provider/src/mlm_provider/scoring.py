"""Similarity scores: contextual (hidden-layer), sentence, and word-vector."""

from __future__ import annotations

import numpy as np
import torch

from .session import LoadedSession


def _cos(a: torch.Tensor, b: torch.Tensor) -> float:
    value = torch.nn.functional.cosine_similarity(a, b, dim=-1)
    return float(value.clamp(-1.0, 1.0))


def contextual_scores(ls: LoadedSession, tokens: list[str], index: int,
                      candidates: list[str], position: int) -> list[float]:
    """Mean cosine over the last L hidden layers between the original word in
    its context and each candidate in the substituted context.

    ``position`` is the target's subword position in the encoded sequence;
    all candidates are single-piece, so positions line up across variants.
    """
    variants = [tokens]
    for cand in candidates:
        edited = list(tokens)
        edited[index] = cand
        variants.append(edited)
    enc = ls.tokenizer(variants, is_split_into_words=True, return_tensors="pt",
                       padding=True, truncation=True)
    with torch.no_grad():
        out = ls.mlm(**enc, output_hidden_states=True)
    layer_count = min(ls.config.layers, len(out.hidden_states) - 1)
    layers = out.hidden_states[-layer_count:]
    scores = []
    for row in range(1, len(variants)):
        per_layer = [
            _cos(layer[0, position], layer[row, position]) for layer in layers
        ]
        scores.append(float(np.mean(per_layer)))
    return scores


def sentence_embedding(ls: LoadedSession, text: str) -> torch.Tensor:
    """Mean-pooled final hidden state over non-padding tokens."""
    enc = ls.sent_tokenizer(text, return_tensors="pt", truncation=True)
    with torch.no_grad():
        out = ls.sent_encoder(**enc)
    hidden = out.last_hidden_state[0]
    mask = enc["attention_mask"][0].unsqueeze(-1).to(hidden.dtype)
    return (hidden * mask).sum(dim=0) / mask.sum()


def sentence_scores(ls: LoadedSession, tokens: list[str], index: int,
                    candidates: list[str]) -> list[float]:
    original = sentence_embedding(ls, " ".join(tokens))
    scores = []
    for cand in candidates:
        edited = list(tokens)
        edited[index] = cand
        scores.append(_cos(original, sentence_embedding(ls, " ".join(edited))))
    return scores


def global_score(ls: LoadedSession, original: str, candidate: str) -> float | None:
    """Word-vector cosine; None when either word is out of vocabulary."""
    a = ls.vectors.get(original.casefold())
    b = ls.vectors.get(candidate.casefold())
    if a is None or b is None:
        return None
    na = float(np.linalg.norm(a))
    nb = float(np.linalg.norm(b))
    if na == 0.0 or nb == 0.0:
        return None
    return float(np.clip(np.dot(a, b) / (na * nb), -1.0, 1.0))
