"""Tokenization, sentence segmentation, POS tagging, and the substitution filter.

All functions are pure: they return new ``Document`` values and never mutate
their inputs, so documents are safe to share across threads.
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass, replace
from enum import Enum
from importlib import resources
from typing import Callable, Iterable

from .errors import ConfigError


class Pos(Enum):
    NOUN = "NOUN"
    VERB = "VERB"
    ADJ = "ADJ"
    ADV = "ADV"
    PRON = "PRON"
    PREP = "PREP"
    CONJ = "CONJ"
    DET = "DET"
    NUM = "NUM"
    PROPN = "PROPN"
    PUNCT = "PUNCT"
    SYM = "SYM"
    OTHER = "OTHER"


class Casing(Enum):
    LOWER = "lower"
    CAPITALIZED = "Capitalized"
    UPPER = "UPPER"
    MIXED = "mixed"


@dataclass(frozen=True)
class Token:
    """One word occurrence.

    ``span`` holds byte offsets (start, end) into the UTF-8 encoding of the
    NFC-normalized document text; ``surface`` always equals that slice.
    ``eligible`` means the token passed the POS filter and may be substituted.
    """

    surface: str
    span: tuple[int, int]
    pos: Pos = Pos.OTHER
    eligible: bool = False
    casing: Casing = Casing.LOWER


@dataclass(frozen=True)
class Document:
    """NFC-normalized text plus its token sequence and sentence ranges.

    ``sentences`` is a list of half-open token-index ranges; concatenated in
    order they cover every token exactly once.
    """

    text: str
    tokens: tuple[Token, ...]
    sentences: tuple[tuple[int, int], ...]

    def sentence_of(self, token_index: int) -> tuple[int, int]:
        for lo, hi in self.sentences:
            if lo <= token_index < hi:
                return (lo, hi)
        raise IndexError(f"token index {token_index} not inside any sentence")

    def surfaces(self) -> list[str]:
        return [t.surface for t in self.tokens]


@dataclass(frozen=True)
class ExclusionList:
    """Which word classes and literal forms are never substituted or counted."""

    language: str = "en"
    excluded_pos: frozenset[Pos] = frozenset()
    excluded_surfaces: frozenset[str] = frozenset()


_SENTENCE_ENDERS = {".", "!", "?", "。", "！", "？"}

_WORD_RE = re.compile(r"\S+")


def _is_punct_char(ch: str) -> bool:
    return unicodedata.category(ch).startswith("P")


def _casing_of(surface: str) -> Casing:
    letters = [c for c in surface if c.isalpha()]
    if not letters:
        return Casing.LOWER
    if all(c.islower() for c in letters):
        return Casing.LOWER
    if all(c.isupper() for c in letters):
        return Casing.UPPER if len(letters) > 1 else Casing.CAPITALIZED
    if surface[0].isupper() and all(c.islower() for c in letters[1:]):
        return Casing.CAPITALIZED
    return Casing.MIXED


def _split_chunk(chunk: str) -> list[tuple[int, str]]:
    """Split one whitespace-delimited chunk into (offset, piece) parts.

    Leading and trailing punctuation characters become their own pieces;
    interior punctuation (hyphens, apostrophes) stays attached.
    """
    left = 0
    right = len(chunk)
    head: list[tuple[int, str]] = []
    tail: list[tuple[int, str]] = []
    while left < right and _is_punct_char(chunk[left]):
        head.append((left, chunk[left]))
        left += 1
    while right > left and _is_punct_char(chunk[right - 1]):
        tail.append((right - 1, chunk[right - 1]))
        right -= 1
    parts = head
    if left < right:
        parts.append((left, chunk[left:right]))
    parts.extend(reversed(tail))
    return parts


def tokenize(text: str) -> Document:
    """Split NFC-normalized text on whitespace, peeling edge punctuation.

    Sentence boundaries fall after ``. ! ? 。 ！ ？`` tokens that are followed
    by whitespace or end of text. Empty input yields an empty document.
    """
    text = unicodedata.normalize("NFC", text)
    tokens: list[Token] = []
    char_ends: list[int] = []

    byte_pos = 0
    char_pos = 0
    for m in _WORD_RE.finditer(text):
        for off, piece in _split_chunk(m.group()):
            start_c = m.start() + off
            byte_pos += len(text[char_pos:start_c].encode("utf-8"))
            char_pos = start_c
            piece_bytes = len(piece.encode("utf-8"))
            pos = Pos.PUNCT if all(_is_punct_char(c) for c in piece) else Pos.OTHER
            tokens.append(
                Token(
                    surface=piece,
                    span=(byte_pos, byte_pos + piece_bytes),
                    pos=pos,
                    casing=_casing_of(piece),
                )
            )
            char_ends.append(start_c + len(piece))
            byte_pos += piece_bytes
            char_pos += len(piece)

    sentences: list[tuple[int, int]] = []
    sent_start = 0
    for i, tok in enumerate(tokens):
        if tok.surface in _SENTENCE_ENDERS:
            end_c = char_ends[i]
            if end_c >= len(text) or text[end_c].isspace():
                sentences.append((sent_start, i + 1))
                sent_start = i + 1
    if sent_start < len(tokens):
        sentences.append((sent_start, len(tokens)))

    return Document(text=text, tokens=tuple(tokens), sentences=tuple(sentences))


# Closed-class lexicon used by the bundled rule tagger. Each word lives in
# exactly one set; ambiguous words were assigned their most common class.
_PRONOUNS = frozenset(
    """i you he she it we they me him her us them my your his its our their
    mine yours hers ours theirs myself yourself himself herself itself
    ourselves yourselves themselves this that these those who whom whose which
    what someone anyone everyone somebody anybody everybody nobody something
    anything everything nothing none""".split()
)
_PREPOSITIONS = frozenset(
    """about above across after against along amid among around at before
    behind below beneath beside besides between beyond by despite down during
    except for from in inside into like near of off on onto out outside over
    past per since through throughout till to toward towards under underneath
    until unto up upon via with within without versus regarding concerning""".split()
)
_CONJUNCTIONS = frozenset(
    """and or but nor so yet although though because if unless while whereas
    whether than as once when whenever where wherever""".split()
)
_DETERMINERS = frozenset(
    """the a an some any no every each either neither both all several many
    few much more most less least enough such another other""".split()
)
_NUMBER_WORDS = frozenset(
    """zero one two three four five six seven eight nine ten eleven twelve
    dozen hundred thousand million billion""".split()
)

_CLOSED_CLASS: dict[str, Pos] = {}
for _words, _tag in (
    (_PRONOUNS, Pos.PRON),
    (_PREPOSITIONS, Pos.PREP),
    (_CONJUNCTIONS, Pos.CONJ),
    (_DETERMINERS, Pos.DET),
    (_NUMBER_WORDS, Pos.NUM),
):
    for _w in _words:
        _CLOSED_CLASS.setdefault(_w, _tag)


def _rule_tag(surface: str, sentence_initial: bool) -> Pos:
    if all(_is_punct_char(c) for c in surface):
        return Pos.PUNCT
    if all(unicodedata.category(c).startswith("S") for c in surface):
        return Pos.SYM
    first_alnum = next((c for c in surface if c.isalnum()), "")
    if first_alnum.isdigit():
        return Pos.NUM
    folded = surface.casefold()
    if folded in _CLOSED_CLASS:
        return _CLOSED_CLASS[folded]
    if folded.endswith("ly"):
        return Pos.ADV
    if folded.endswith(("tion", "ness")):
        return Pos.NOUN
    if folded.endswith(("ed", "ing")):
        return Pos.VERB
    if not sentence_initial and surface[:1].isupper():
        return Pos.PROPN
    return Pos.NOUN


def _default_tagger(doc: Document) -> list[Pos]:
    starts = {lo for lo, _hi in doc.sentences}
    return [
        _rule_tag(tok.surface, sentence_initial=(i in starts))
        for i, tok in enumerate(doc.tokens)
    ]


TaggerFn = Callable[[Document], list[Pos]]

_TAGGERS: dict[str, TaggerFn] = {"default": _default_tagger}


def register_tagger(name: str, fn: TaggerFn) -> None:
    _TAGGERS[name] = fn


def pos_tag(doc: Document, tagger: str | TaggerFn = "default") -> Document:
    """Assign a POS tag to every token using the named or given tagger."""
    if callable(tagger):
        fn = tagger
    else:
        try:
            fn = _TAGGERS[tagger]
        except KeyError:
            raise ConfigError(f"unknown tagger handle: {tagger!r}") from None
    tags = fn(doc)
    if len(tags) != len(doc.tokens):
        raise ConfigError("tagger returned a tag sequence of the wrong length")
    tokens = tuple(replace(t, pos=tag) for t, tag in zip(doc.tokens, tags))
    return replace(doc, tokens=tokens)


def apply_filter(doc: Document, excl: ExclusionList) -> Document:
    """Mark which tokens may carry watermark bits.

    The first token of the document is always ineligible: both injection and
    detection start at the second word.
    """
    folded = frozenset(s.casefold() for s in excl.excluded_surfaces)
    tokens = []
    for i, t in enumerate(doc.tokens):
        ok = (
            i > 0
            and t.pos not in excl.excluded_pos
            and t.surface.casefold() not in folded
        )
        tokens.append(replace(t, eligible=ok))
    return replace(doc, tokens=tuple(tokens))


def recase(original: Token, replacement_surface: str) -> str:
    """Transfer the original token's casing pattern onto a replacement."""
    if not replacement_surface:
        raise ValueError("replacement surface must be nonempty")
    if original.casing is Casing.CAPITALIZED:
        return replacement_surface[0].upper() + replacement_surface[1:]
    if original.casing is Casing.UPPER:
        return replacement_surface.upper()
    return replacement_surface


def render(doc: Document, surfaces: Iterable[str] | None = None) -> str:
    """Rebuild text from tokens plus the original inter-token whitespace.

    With ``surfaces`` given, each token's surface is substituted positionally;
    the gaps between tokens still come from the source document.
    """
    data = doc.text.encode("utf-8")
    new = list(surfaces) if surfaces is not None else None
    if new is not None and len(new) != len(doc.tokens):
        raise ValueError("surface list length must match token count")
    out: list[str] = []
    prev_end = 0
    for i, tok in enumerate(doc.tokens):
        start, end = tok.span
        out.append(data[prev_end:start].decode("utf-8"))
        out.append(new[i] if new is not None else tok.surface)
        prev_end = end
    out.append(data[prev_end:].decode("utf-8"))
    return "".join(out)


def rebuild(doc: Document, surfaces: list[str]) -> Document:
    """Substitute token surfaces and recompute spans, keeping structure.

    Token count, sentence ranges, POS tags, and eligibility flags carry over;
    only surfaces, spans, and the rendered text change.
    """
    text = render(doc, surfaces)
    data = doc.text.encode("utf-8")
    tokens: list[Token] = []
    byte_pos = 0
    prev_end = 0
    for tok, surf in zip(doc.tokens, surfaces):
        start, end = tok.span
        byte_pos += start - prev_end
        nbytes = len(surf.encode("utf-8"))
        tokens.append(
            replace(tok, surface=surf, span=(byte_pos, byte_pos + nbytes),
                    casing=_casing_of(surf))
        )
        byte_pos += nbytes
        prev_end = end
    return Document(text=text, tokens=tuple(tokens), sentences=doc.sentences)


def load_exclusions(path_or_text, language: str = "en") -> ExclusionList:
    """Load an exclusion list from a UTF-8 config file.

    One section per language; ``excluded_pos`` is a comma-separated tag list
    and ``excluded_surfaces`` is a block with one word per line.
    """
    import configparser
    import os

    parser = configparser.ConfigParser()
    if isinstance(path_or_text, (str, os.PathLike)) and os.path.exists(path_or_text):
        with open(path_or_text, encoding="utf-8") as fh:
            parser.read_file(fh)
    else:
        parser.read_string(str(path_or_text))
    if not parser.has_section(language):
        raise ConfigError(f"no exclusion section for language {language!r}")
    sec = parser[language]
    pos_field = sec.get("excluded_pos", "")
    try:
        pos_set = frozenset(
            Pos(p.strip()) for p in pos_field.split(",") if p.strip()
        )
    except ValueError as exc:
        raise ConfigError(f"bad POS tag in exclusion list: {exc}") from None
    surfaces = frozenset(
        w.strip() for w in sec.get("excluded_surfaces", "").splitlines() if w.strip()
    )
    return ExclusionList(language=language, excluded_pos=pos_set,
                         excluded_surfaces=surfaces)


def bundled_exclusions(language: str = "en") -> ExclusionList:
    """The exclusion preset shipped with the package."""
    text = resources.files("textmark.data").joinpath("exclusions.ini").read_text("utf-8")
    return load_exclusions(text, language=language)


def analyze(text: str, excl: ExclusionList | None = None,
            tagger: str | TaggerFn = "default") -> Document:
    """Tokenize, tag, and filter in one step."""
    if excl is None:
        excl = bundled_exclusions("en")
    return apply_filter(pos_tag(tokenize(text), tagger), excl)
