"""Watermark injection: sequential bit-0 replacement with bit-1 synonyms.

The scan walks the document left to right starting at the second token. Each
eligible token's bit is computed against its current predecessor, which may
itself already have been replaced; a token encoding bit 0 is swapped for the
highest-scoring filtered candidate that encodes bit 1, if any exists.
"""

from __future__ import annotations

from dataclasses import dataclass, replace as dc_replace

from .config import WatermarkConfig
from .encoding import encode_pair
from .providers import candidates
from .textmodel import Document, _casing_of, rebuild

# Re-exported: WatermarkConfig lives in config but belongs to this surface.
__all__ = ["WatermarkConfig", "InjectionReport", "inject"]


@dataclass(frozen=True)
class InjectionReport:
    """What the injection pass did to one document.

    ``visited`` counts eligible tokens seen carrying bit 0;
    ``replaced + skipped_no_candidate == visited`` always holds.
    """

    doc_out: Document
    replacements: tuple[tuple[int, str, str], ...]
    visited: int
    replaced: int
    skipped_no_candidate: int


def inject(doc: Document, cfg: WatermarkConfig) -> InjectionReport:
    """Inject the watermark into a tokenized, tagged, filtered document."""
    if not doc.tokens:
        return InjectionReport(doc_out=doc, replacements=(), visited=0,
                               replaced=0, skipped_no_candidate=0)

    tokens = list(doc.tokens)
    work = dc_replace(doc, tokens=tuple(tokens))
    replacements: list[tuple[int, str, str]] = []
    visited = 0
    skipped = 0

    for i in range(1, len(tokens)):
        tok = tokens[i]
        if not tok.eligible:
            continue
        prev_surface = tokens[i - 1].surface
        if encode_pair(prev_surface, tok.surface) == 1:
            continue
        visited += 1
        cset = candidates(work, i, cfg)
        chosen = None
        for cand in cset.filtered:  # ordered by s_word desc, surface asc
            if encode_pair(prev_surface, cand.surface) == 1:
                chosen = cand
                break
        if chosen is None:
            skipped += 1
            continue
        replacements.append((i, tok.surface, chosen.surface))
        tokens[i] = dc_replace(tok, surface=chosen.surface,
                               casing=_casing_of(chosen.surface))
        work = dc_replace(work, tokens=tuple(tokens))

    if replacements:
        doc_out = rebuild(doc, [t.surface for t in tokens])
    else:
        doc_out = doc
    return InjectionReport(
        doc_out=doc_out,
        replacements=tuple(replacements),
        visited=visited,
        replaced=len(replacements),
        skipped_no_candidate=skipped,
    )
