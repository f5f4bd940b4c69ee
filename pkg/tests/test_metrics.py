import pytest
from hypothesis import given
from hypothesis import strategies as st

from townhall.evaluation import bleu_n, rouge_n


class TestRouge:
    def test_identity(self):
        score = rouge_n("the cat sat", "the cat sat", 1)
        assert (score.precision, score.recall, score.f1) == (1.0, 1.0, 1.0)

    def test_unigram_example(self):
        score = rouge_n("the cat sat", "the cat ran", 1)
        assert score.precision == pytest.approx(2 / 3, abs=1e-12)
        assert score.recall == pytest.approx(2 / 3, abs=1e-12)
        assert score.f1 == pytest.approx(0.6667, abs=1e-4)

    def test_disjoint(self):
        score = rouge_n("alpha beta", "gamma delta", 1)
        assert score.f1 == 0.0
        assert not score.degenerate

    def test_degenerate_flag(self):
        assert rouge_n("", "the cat", 1).degenerate
        assert rouge_n("the cat", "", 1).degenerate
        assert rouge_n("one", "one two", 2).degenerate  # no bigrams on candidate side

    def test_bigram_clipping(self):
        score = rouge_n("a b a b", "a b", 2)
        # candidate bigrams: ab, ba, ab; ref: ab -> clipped match 1
        assert score.precision == pytest.approx(1 / 3, abs=1e-12)
        assert score.recall == pytest.approx(1.0, abs=1e-12)

    def test_tokenization_keeps_stopwords_and_case(self):
        assert rouge_n("The CAT!", "the cat", 1).f1 == 1.0


class TestBleu:
    def test_identity(self):
        for n in (1, 2, 3, 4):
            score = bleu_n("the cat sat on the mat", "the cat sat on the mat", n)
            assert score.cumulative == 1.0
            assert score.brevity_penalty == 1.0

    def test_clipping_example(self):
        score = bleu_n("the the the", "the cat", 1)
        assert score.brevity_penalty == 1.0  # candidate longer than reference
        assert score.cumulative == pytest.approx(0.3333, abs=1e-4)

    def test_empty_candidate_flagged(self):
        assert bleu_n("", "the cat", 1).degenerate

    def test_short_candidate_flagged(self):
        assert bleu_n("one two", "one two three", 3).degenerate

    def test_zero_precision_zeroes_score(self):
        score = bleu_n("alpha beta", "gamma delta", 1)
        assert score.cumulative == 0.0
        assert not score.degenerate

    def test_brevity_penalty_applies(self):
        # candidate 2 tokens vs reference 4: BP = exp(1 - 4/2) = e^-1
        score = bleu_n("the cat", "the cat sat down", 1)
        assert score.brevity_penalty == pytest.approx(0.36787944117144233, abs=1e-12)
        assert score.cumulative == pytest.approx(0.36787944117144233, abs=1e-9)


texts = st.lists(
    st.sampled_from("the cat sat mat dog ran fast slow blue red".split()),
    min_size=1,
    max_size=12,
).map(" ".join)


class TestMetricProperties:
    @given(texts)
    def test_rouge_identity_property(self, text):
        assert rouge_n(text, text, 1).f1 == 1.0

    @given(texts)
    def test_bleu_identity_property(self, text):
        n = min(2, len(text.split()))
        assert bleu_n(text, text, n).cumulative == 1.0

    @given(texts, texts)
    def test_bounds_and_f1_relation(self, cand, ref):
        for n in (1, 2):
            score = rouge_n(cand, ref, n)
            assert 0.0 <= score.precision <= 1.0
            assert 0.0 <= score.recall <= 1.0
            assert 0.0 <= score.f1 <= max(score.precision, score.recall) + 1e-12
            bscore = bleu_n(cand, ref, n)
            assert 0.0 <= bscore.cumulative <= 1.0
            assert 0.0 < bscore.brevity_penalty <= 1.0
