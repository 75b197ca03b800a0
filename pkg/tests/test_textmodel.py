import unicodedata

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from textmark.errors import ConfigError
from textmark.textmodel import (
    Casing,
    ExclusionList,
    Pos,
    Token,
    analyze,
    apply_filter,
    bundled_exclusions,
    load_exclusions,
    pos_tag,
    recase,
    rebuild,
    register_tagger,
    render,
    tokenize,
)


class TestTokenize:
    def test_simple_sentence(self):
        doc = tokenize("Flocking is coordinated.")
        assert doc.surfaces() == ["Flocking", "is", "coordinated", "."]
        assert doc.sentences == ((0, 4),)

    def test_empty(self):
        doc = tokenize("")
        assert doc.tokens == ()
        assert doc.sentences == ()

    def test_two_sentences_of_three_tokens(self):
        # Hand trace: "A b. C d." -> [A, b, .] [C, d, .]
        doc = tokenize("A b. C d.")
        assert doc.surfaces() == ["A", "b", ".", "C", "d", "."]
        assert doc.sentences == ((0, 3), (3, 6))

    def test_edge_punctuation_split(self):
        doc = tokenize('"hello," she said...')
        assert doc.surfaces() == ['"', "hello", ",", '"', "she", "said", ".", ".", "."]
        for surface, pos in zip(doc.surfaces(), [t.pos for t in doc.tokens]):
            if not surface.isalpha():
                assert pos is Pos.PUNCT

    def test_interior_punctuation_kept(self):
        doc = tokenize("it's a well-known fact")
        assert "it's" in doc.surfaces()
        assert "well-known" in doc.surfaces()

    def test_decimal_number_not_a_boundary(self):
        doc = tokenize("pi is 3.14 roughly")
        assert "3.14" in doc.surfaces()
        assert len(doc.sentences) == 1

    def test_cjk_enders_end_sentences_when_spaced(self):
        doc = tokenize("你好 。 再见")
        assert len(doc.sentences) == 2

    def test_spans_monotonic_and_surfaces_match_slices(self):
        text = "Café life, olé! Nice."
        doc = tokenize(text)
        data = doc.text.encode("utf-8")
        prev_end = 0
        for tok in doc.tokens:
            start, end = tok.span
            assert start >= prev_end
            assert data[start:end].decode("utf-8") == tok.surface
            prev_end = end

    def test_nfd_input_is_normalized(self):
        nfd = unicodedata.normalize("NFD", "café time")
        doc = tokenize(nfd)
        assert doc.surfaces()[0] == "café"

    @given(st.text(max_size=200))
    @settings(max_examples=200)
    def test_roundtrip_reproduces_nfc_input(self, text):
        doc = tokenize(text)
        assert render(doc) == unicodedata.normalize("NFC", text)

    @given(st.text(max_size=200))
    @settings(max_examples=100)
    def test_sentences_partition_tokens(self, text):
        doc = tokenize(text)
        covered = [i for lo, hi in doc.sentences for i in range(lo, hi)]
        assert covered == list(range(len(doc.tokens)))


class TestPosTag:
    def tag_of(self, text, word):
        doc = pos_tag(tokenize(text))
        return doc.tokens[doc.surfaces().index(word)].pos

    def test_closed_class_lexicon(self):
        assert self.tag_of("see the garden", "the") is Pos.DET
        assert self.tag_of("walk with me", "with") is Pos.PREP
        assert self.tag_of("tea and cake", "and") is Pos.CONJ
        assert self.tag_of("give them time", "them") is Pos.PRON

    def test_suffix_rules(self):
        # Hand trace of the suffix rules.
        assert self.tag_of("works efficiently today", "efficiently") is Pos.ADV
        assert self.tag_of("a fine illustration here", "illustration") is Pos.NOUN
        assert self.tag_of("great happiness follows", "happiness") is Pos.NOUN
        assert self.tag_of("she was running fast", "running") is Pos.VERB
        assert self.tag_of("it exhibited strength", "exhibited") is Pos.VERB

    def test_mid_sentence_capital_is_propn(self):
        assert self.tag_of("we met Carey yesterday", "Carey") is Pos.PROPN

    def test_sentence_initial_capital_is_not_propn(self):
        doc = pos_tag(tokenize("Carey met us. Flocking happens."))
        assert doc.tokens[0].pos is not Pos.PROPN
        flocking = doc.surfaces().index("Flocking")
        assert doc.tokens[flocking].pos is not Pos.PROPN

    def test_digits_and_symbols(self):
        assert self.tag_of("pay 42 dollars", "42") is Pos.NUM
        assert self.tag_of("price in $ only", "$") is Pos.SYM

    def test_fallback_noun(self):
        assert self.tag_of("the blorp sat", "blorp") is Pos.NOUN

    def test_unknown_handle_raises(self):
        with pytest.raises(ConfigError):
            pos_tag(tokenize("a b"), "no-such-tagger")

    def test_registered_tagger_used(self):
        register_tagger("all-verbs", lambda doc: [Pos.VERB] * len(doc.tokens))
        doc = pos_tag(tokenize("one two three"), "all-verbs")
        assert all(t.pos is Pos.VERB for t in doc.tokens)

    def test_deterministic(self):
        text = "The quick brown fox jumps over the lazy dog."
        a = pos_tag(tokenize(text))
        b = pos_tag(tokenize(text))
        assert [t.pos for t in a.tokens] == [t.pos for t in b.tokens]


class TestApplyFilter:
    def test_punct_excluded_by_preset(self, excl):
        doc = analyze("a garden grows here .", excl)
        punct = doc.tokens[-1]
        assert punct.pos is Pos.PUNCT and not punct.eligible

    def test_plain_noun_eligible(self, excl):
        doc = analyze("the garden grows", excl)
        garden = doc.tokens[doc.surfaces().index("garden")]
        assert garden.pos is Pos.NOUN and garden.eligible

    def test_first_token_always_ineligible(self, excl):
        doc = analyze("garden paths wander", excl)
        assert doc.tokens[0].pos is Pos.NOUN
        assert not doc.tokens[0].eligible
        assert doc.tokens[1].eligible

    def test_excluded_surface(self, excl):
        doc = analyze("it is fine", excl)
        token_is = doc.tokens[doc.surfaces().index("is")]
        assert not token_is.eligible

    def test_growing_exclusions_never_add_eligibles(self, excl):
        doc = pos_tag(tokenize("the garden quickly grows near flowing water today"))
        base = apply_filter(doc, excl)
        wider = apply_filter(
            doc,
            ExclusionList(
                language=excl.language,
                excluded_pos=frozenset(excl.excluded_pos | {Pos.NOUN}),
                excluded_surfaces=excl.excluded_surfaces,
            ),
        )
        n_base = sum(t.eligible for t in base.tokens)
        n_wider = sum(t.eligible for t in wider.tokens)
        assert n_wider <= n_base

    @given(st.sets(st.sampled_from(list(Pos))))
    @settings(max_examples=50)
    def test_filter_matches_predicate(self, excl, excluded):
        doc = pos_tag(tokenize("The quick brown fox jumps over the lazy dog ."))
        out = apply_filter(doc, ExclusionList(excluded_pos=frozenset(excluded)))
        for i, t in enumerate(out.tokens):
            assert t.eligible == (i > 0 and t.pos not in excluded)


class TestRecase:
    def test_capitalized(self):
        tok = Token(surface="Type", span=(0, 4), casing=Casing.CAPITALIZED)
        assert recase(tok, "kind") == "Kind"

    def test_lower(self):
        tok = Token(surface="type", span=(0, 4), casing=Casing.LOWER)
        assert recase(tok, "kind") == "kind"

    def test_upper(self):
        tok = Token(surface="TYPE", span=(0, 4), casing=Casing.UPPER)
        assert recase(tok, "kind") == "KIND"

    def test_empty_replacement_rejected(self):
        tok = Token(surface="x", span=(0, 1))
        with pytest.raises(ValueError):
            recase(tok, "")


class TestRebuild:
    def test_substitution_preserves_gaps_and_structure(self):
        doc = analyze('He said: "my type, exactly."')
        surfaces = doc.surfaces()
        surfaces[surfaces.index("type")] = "kind"
        out = rebuild(doc, surfaces)
        assert out.text == 'He said: "my kind, exactly."'
        assert len(out.tokens) == len(doc.tokens)
        assert out.sentences == doc.sentences
        data = out.text.encode("utf-8")
        for tok in out.tokens:
            assert data[tok.span[0]:tok.span[1]].decode("utf-8") == tok.surface


class TestExclusionConfig:
    def test_load_from_file(self, tmp_path):
        path = tmp_path / "excl.ini"
        path.write_text(
            "[en]\nexcluded_pos = PUNCT, NUM\nexcluded_surfaces =\n  alpha\n  beta\n",
            encoding="utf-8",
        )
        excl = load_exclusions(path, "en")
        assert excl.excluded_pos == frozenset({Pos.PUNCT, Pos.NUM})
        assert excl.excluded_surfaces == frozenset({"alpha", "beta"})

    def test_missing_language_section(self, tmp_path):
        path = tmp_path / "excl.ini"
        path.write_text("[en]\nexcluded_pos = PUNCT\n", encoding="utf-8")
        with pytest.raises(ConfigError):
            load_exclusions(path, "fr")

    def test_bad_pos_tag(self):
        with pytest.raises(ConfigError):
            load_exclusions("[en]\nexcluded_pos = NOT_A_TAG\n", "en")

    def test_bundled_presets_nonempty(self):
        for language in ("en", "zh"):
            preset = bundled_exclusions(language)
            assert preset.excluded_pos
