import pytest

from cbvr import (
    EmptyQueryError,
    UnknownIdError,
    confirm,
    match_concepts,
    normalize,
)
from cbvr.query import ConceptCandidate, ConceptQueryVector
from cbvr.textnorm import Language, normalize_arabic, normalize_term


class TestNormalize:
    def test_single_english_term(self):
        query = normalize("news")
        assert query.language is Language.ENGLISH
        assert query.tokens == ("news",)
        assert query.term_weights == {"news": 1.0}

    def test_case_folding_and_stopwords(self):
        query = normalize("The News STUDIO")
        assert query.tokens == ("news", "studio")
        assert query.term_weights["news"] == pytest.approx(0.5)

    def test_arabic_three_tokens(self):
        query = normalize("أحداث ثورة الكرامة")
        assert query.language is Language.ARABIC
        assert len(query.tokens) == 3
        for weight in query.term_weights.values():
            assert weight == pytest.approx(1 / 3)
        assert sum(query.term_weights.values()) == pytest.approx(1.0, abs=1e-9)

    def test_stopword_only_query_rejected(self):
        with pytest.raises(EmptyQueryError):
            normalize("The the")

    def test_empty_text_rejected(self):
        with pytest.raises(EmptyQueryError):
            normalize("   ")

    def test_weights_sum_to_one_with_repeats(self):
        query = normalize("dog dog cat")
        assert query.tokens == ("dog", "dog", "cat")
        assert query.term_weights["dog"] == pytest.approx(2 / 3)
        assert sum(query.term_weights.values()) == pytest.approx(1.0, abs=1e-9)

    def test_language_hint_overrides_detection(self):
        assert normalize("news", language_hint="ar").language is Language.ARABIC
        assert normalize("news", language_hint=Language.ENGLISH).language is Language.ENGLISH

    def test_idempotent_on_own_tokens(self):
        for text in ("Dogs and Cats", "أحداث ثورة الكرامة", "news studio news"):
            query = normalize(text)
            again = normalize(" ".join(query.tokens))
            assert sorted(again.tokens) == sorted(query.tokens)

    def test_custom_stopwords(self):
        table = {Language.ENGLISH: frozenset({"news"}), Language.ARABIC: frozenset()}
        query = normalize("news studio", stopwords=table)
        assert query.tokens == ("studio",)


class TestArabicNormalization:
    def test_alef_variants_unified(self):
        assert normalize_arabic("أخبار") == "اخبار"
        assert normalize_arabic("إخبار") == "اخبار"
        assert normalize_arabic("آخبار") == "اخبار"

    def test_ta_marbuta_and_tatweel(self):
        assert normalize_arabic("قطة") == "قطه"
        assert normalize_arabic("قـطـة") == "قطه"

    def test_diacritics_stripped(self):
        assert normalize_arabic("ثَوْرَة") == "ثوره"

    def test_involution(self):
        samples = ["أحداث", "ثورة", "الكرامة", "قـطّـة", "مُباراة"]
        for text in samples:
            once = normalize_arabic(text)
            assert normalize_arabic(once) == once

    def test_normalize_term_routes_by_script(self):
        assert normalize_term("NEWS") == "news"
        assert normalize_term("أخبار") == "اخبار"


class TestMatchConcepts:
    def test_bundled_lexicon_scores(self, demo_index, demo_lexicon):
        candidates = match_concepts(normalize("news"), demo_lexicon, demo_index)
        names = [(c.name, c.score) for c in candidates]
        assert names == [("News_Studio", 1.0), ("Anchorperson", 0.8), ("Reporters", 0.7)]
        # Informational boost: highest membership weight across contexts.
        boosts = {c.name: c.context_boost for c in candidates}
        assert boosts == {"News_Studio": 0.8, "Anchorperson": 0.9, "Reporters": 1.0}

    def test_unmatched_term(self, demo_index, demo_lexicon):
        assert match_concepts(normalize("zebra"), demo_lexicon, demo_index) == []

    def test_two_terms_hitting_same_concept_rank_higher(self, demo_index, demo_lexicon):
        candidates = match_concepts(normalize("soccer crowd"), demo_lexicon, demo_index)
        scores = {c.name: c.score for c in candidates}
        assert scores["Soccer_Match"] == pytest.approx(0.5)
        assert scores["Crowd"] == pytest.approx(0.5)
        candidates = match_concepts(normalize("soccer match"), demo_lexicon, demo_index)
        scores = {c.name: c.score for c in candidates}
        # Both terms describe the same concept: the weighted sum adds up.
        assert scores["Soccer_Match"] == pytest.approx(0.5 * 1.0 + 0.5 * 0.8)
        assert candidates[0].name == "Soccer_Match"

    def test_mixed_script_query_merges_languages(self, demo_index, demo_lexicon):
        candidates = match_concepts(normalize("dog كلب"), demo_lexicon, demo_index)
        assert candidates[0].name == "Dogs"
        assert candidates[0].score == pytest.approx(1.0)
        assert len(candidates[0].matched_terms) == 2

    def test_score_linear_in_term_weights(self, demo_index, demo_lexicon):
        query = normalize("news dog")
        scaled = type(query)(
            original=query.original,
            language=query.language,
            tokens=query.tokens,
            term_weights={t: w * 7.0 for t, w in query.term_weights.items()},
        )
        base = match_concepts(query, demo_lexicon, demo_index)
        boosted = match_concepts(scaled, demo_lexicon, demo_index)
        assert [c.concept_id for c in base] == [c.concept_id for c in boosted]
        for a, b in zip(base, boosted):
            assert b.score == pytest.approx(7.0 * a.score, rel=1e-12)

    def test_ordering_breaks_ties_by_id(self, demo_index):
        from cbvr.ingest import Lexicon, LexiconEntry

        lexicon = Lexicon(
            [
                LexiconEntry("tie", Language.ENGLISH, 5, 0.5),
                LexiconEntry("tie", Language.ENGLISH, 2, 0.5),
            ]
        )
        candidates = match_concepts(normalize("tie"), lexicon, demo_index)
        assert [c.concept_id for c in candidates] == [2, 5]


class TestConfirm:
    def _candidates(self):
        return [
            ConceptCandidate(2, "News_Studio", 1.0, ("news",), 0.8),
            ConceptCandidate(1, "Anchorperson", 0.8, ("news",), 0.9),
            ConceptCandidate(3, "Reporters", 0.7, ("news",), 1.0),
        ]

    def test_single_choice_gets_weight_one(self):
        vector = confirm(self._candidates(), {2})
        assert vector.weights == {2: 1.0}

    def test_two_choices_renormalized(self):
        vector = confirm(self._candidates(), {2, 3})
        assert vector.weight(2) == pytest.approx(1.0 / 1.7)
        assert vector.weight(3) == pytest.approx(0.7 / 1.7)
        assert vector.weight(2) == pytest.approx(0.5882352941176471)
        assert vector.weight(3) == pytest.approx(0.4117647058823529)

    def test_all_choices_proportional_to_scores(self):
        vector = confirm(self._candidates(), {1, 2, 3})
        total = 1.0 + 0.8 + 0.7
        assert vector.weight(2) == pytest.approx(1.0 / total)
        assert vector.weight(1) == pytest.approx(0.8 / total)
        assert sum(vector.weights.values()) == pytest.approx(1.0, abs=1e-9)

    def test_empty_choice_rejected(self):
        with pytest.raises(EmptyQueryError):
            confirm(self._candidates(), set())

    def test_non_candidate_choice_named(self):
        with pytest.raises(UnknownIdError, match="42"):
            confirm(self._candidates(), {2, 42})


def test_query_vector_dense_view():
    vector = ConceptQueryVector({3: 0.5, 1: 0.25})
    assert list(vector.to_dense([1, 2, 3])) == [0.25, 0.0, 0.5]
    assert vector.support() == (1, 3)
    assert vector.weight(2) == 0.0
