"""Partial-mask candidate generation with the masked language model."""

from __future__ import annotations

import torch

from .session import LoadedSession


def target_position(ls: LoadedSession, enc, index: int) -> int | None:
    """Subword position of word ``index``, or None when unsupported.

    Targets that the tokenizer cannot represent as a single known piece
    (out-of-vocabulary or multi-piece words) are unsupported: their embedding
    cannot be partially masked faithfully, and the caller answers with an
    empty candidate list.
    """
    positions = [
        i for i, word in enumerate(enc.word_ids()) if word == index
    ]
    if len(positions) != 1:
        return None
    if int(enc["input_ids"][0, positions[0]]) == ls.tokenizer.unk_token_id:
        return None
    return positions[0]


def generate_candidates(ls: LoadedSession, tokens: list[str], index: int,
                        k: int, seed: int | None) -> tuple[list[str], int] | None:
    """Top-k predictions for the partially-masked target word.

    Returns the surviving candidate surfaces and the target's subword
    position, or None when the target is unsupported. The original surface,
    special tokens, and subword pieces are dropped after the top-k cut, so at
    most k candidates come back.
    """
    enc = ls.tokenizer([tokens], is_split_into_words=True, return_tensors="pt",
                       truncation=True)
    position = target_position(ls, enc, index)
    if position is None:
        return None

    embedder = ls.mlm.get_input_embeddings()
    embeddings = embedder(enc["input_ids"]).detach().clone()
    mask = ls.dropout_mask(embeddings.shape[-1], seed)
    embeddings[0, position] = embeddings[0, position] * mask
    with torch.no_grad():
        logits = ls.mlm(
            inputs_embeds=embeddings, attention_mask=enc["attention_mask"]
        ).logits[0, position]
    top = torch.topk(logits, min(k, logits.shape[-1])).indices.tolist()

    original = tokens[index].casefold()
    special_ids = set(ls.tokenizer.all_special_ids)
    out = []
    for token_id in top:
        if token_id in special_ids:
            continue
        piece = ls.tokenizer.convert_ids_to_tokens(token_id)
        if piece.startswith("##") or not piece:
            continue
        if not any(ch.isalpha() for ch in piece):
            continue
        if piece.casefold() == original:
            continue
        out.append(piece)
    return out, position
