from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cskg_qa.text import (
    StopwordList,
    content_words,
    jaccard,
    similarity,
    split_sentences,
    tokenize,
)


def surfaces(text):
    return [t.surface for t in tokenize(text)]


class TestTokenize:
    def test_simple_sentence(self):
        assert surfaces("The color of snow is white.") == [
            "the",
            "color",
            "of",
            "snow",
            "is",
            "white",
        ]

    def test_empty(self):
        assert tokenize("") == []

    def test_punctuation_splits(self):
        assert surfaces("a-b") == ["a", "b"]

    def test_offsets_reproduce_surfaces(self):
        text = "The top of Mount Fuji is covered with snow."
        for tok in tokenize(text):
            assert text[tok.char_start : tok.char_end].lower() == tok.surface

    def test_tokens_ordered_and_nonempty(self):
        toks = tokenize("Snow, ice and 42 degrees!")
        assert all(t.surface for t in toks)
        starts = [t.char_start for t in toks]
        assert starts == sorted(starts)
        assert all(t.char_start < t.char_end for t in toks)

    def test_unicode_letters(self):
        assert surfaces("Fuji-san 富士山") == ["fuji", "san", "富士山"]

    @given(st.text(max_size=80))
    def test_retokenizing_surfaces_is_stable(self, text):
        once = surfaces(text)
        again = surfaces(" ".join(once))
        assert once == again


class TestJaccard:
    def test_identity(self):
        assert jaccard({"a", "b"}, {"a", "b"}) == 1.0

    def test_disjoint(self):
        assert jaccard({"a"}, {"b"}) == 0.0

    def test_partial_overlap(self):
        # {a,b} vs {b,c}: |{b}| / |{a,b,c}|
        assert jaccard({"a", "b"}, {"b", "c"}) == pytest.approx(1 / 3)

    def test_both_empty(self):
        assert jaccard(set(), set()) == 0.0

    @given(
        st.sets(st.text(alphabet="abcdef", min_size=1, max_size=3), max_size=8),
        st.sets(st.text(alphabet="abcdef", min_size=1, max_size=3), max_size=8),
    )
    def test_symmetric_and_bounded(self, a, b):
        assert jaccard(a, b) == jaccard(b, a)
        assert 0.0 <= jaccard(a, b) <= 1.0
        if a:
            assert jaccard(a, a) == 1.0


class TestSimilaritySwitch:
    def test_cosine_available(self):
        assert similarity(["a", "a", "b"], ["a", "b"], method="cosine") > 0

    def test_default_is_jaccard(self):
        assert similarity({"a"}, {"a", "b"}) == pytest.approx(0.5)

    def test_unknown_method(self):
        with pytest.raises(ValueError):
            similarity({"a"}, {"a"}, method="euclid")


class TestSplitSentences:
    def test_two_sentences(self):
        assert [s for s, _ in split_sentences("A. B.")] == ["A.", "B."]

    def test_single_sentence_fixture(self):
        result = split_sentences("The top of Mount Fuji is covered with snow.")
        assert len(result) == 1
        assert result[0][0] == "The top of Mount Fuji is covered with snow."

    def test_no_terminator(self):
        text = "No terminator"
        assert split_sentences(text) == [(text, (0, len(text)))]

    def test_question_and_exclamation(self):
        parts = [s for s, _ in split_sentences("Really? Yes! Fine.")]
        assert parts == ["Really?", "Yes!", "Fine."]

    def test_ranges_cover_non_whitespace(self):
        text = "One two. Three four!  Five. "
        spans = [rng for _, rng in split_sentences(text)]
        assert spans == sorted(spans)
        covered = set()
        for s, e in spans:
            assert not set(range(s, e)) & covered, "overlapping ranges"
            covered.update(range(s, e))
        for i, ch in enumerate(text):
            if not ch.isspace():
                assert i in covered

    def test_slice_matches_sentence(self):
        text = "Alpha beta. Gamma delta?"
        for sentence, (s, e) in split_sentences(text):
            assert text[s:e] == sentence

    def test_abbreviation_is_out_of_scope_mid_token(self):
        # Periods not followed by whitespace do not split.
        assert [s for s, _ in split_sentences("pi is 3.14 exactly")] == ["pi is 3.14 exactly"]


class TestContentWords:
    def test_stopword_removal(self):
        assert [t.surface for t in content_words("the color of snow")] == ["color", "snow"]

    def test_all_stopwords(self):
        assert content_words("the of a an is") == []

    def test_definition_fragment(self):
        got = [t.surface for t in content_words("White is the lightest color")]
        assert got == ["white", "lightest", "color"]

    def test_subset_of_tokenize(self):
        text = "Why did Henry buy a new laptop for programming?"
        kept = content_words(text)
        all_tokens = tokenize(text)
        assert set(kept) <= set(all_tokens)

    def test_custom_stopwords(self):
        sw = StopwordList(["snow"])
        assert [t.surface for t in content_words("the snow fell", sw)] == ["the", "fell"]


class TestStopwordList:
    def test_required_words_present(self):
        sw = StopwordList.default()
        for word in ("a", "an", "the", "of", "is", "with", "does"):
            assert word in sw

    def test_reasonable_size(self):
        assert len(StopwordList.default()) >= 120

    def test_override_file(self, tmp_path):
        path = tmp_path / "stop.txt"
        path.write_text("# comment line\nfoo\nBar  \n\n", encoding="utf-8")
        sw = StopwordList.from_file(path)
        assert "foo" in sw and "bar" in sw
        assert "comment" not in sw
