import itertools

import pytest

from reaction_miner.emoclass import scores_from_vector
from reaction_miner.emotions import EMOTION_INDEX, Emotion
from reaction_miner.errors import ConfigError, NoSignalError
from reaction_miner.sarcasm import (
    DEFAULT_PROFILES, SarcasmThresholds, distance_ratio, is_candidate,
    label_sarcasm, load_thresholds, save_thresholds, score_ratios,
)


def scores(s_angry=0.0, s_haha=0.0, s_wow=0.0, s_sad=0.0, s_love=0.0):
    vec = [0.0] * 5
    vec[EMOTION_INDEX[Emotion.ANGRY]] = s_angry
    vec[EMOTION_INDEX[Emotion.HAHA]] = s_haha
    vec[EMOTION_INDEX[Emotion.WOW]] = s_wow
    vec[EMOTION_INDEX[Emotion.SAD]] = s_sad
    vec[EMOTION_INDEX[Emotion.LOVE]] = s_love
    return scores_from_vector(vec)


class TestCandidate:
    def test_angry_haha(self):
        assert is_candidate((Emotion.ANGRY, Emotion.HAHA), SarcasmThresholds())

    def test_unordered(self):
        assert is_candidate((Emotion.HAHA, Emotion.ANGRY), SarcasmThresholds())

    def test_sad_love_not_default(self):
        assert not is_candidate((Emotion.SAD, Emotion.LOVE), SarcasmThresholds())

    def test_angry_wow(self):
        assert is_candidate((Emotion.ANGRY, Emotion.WOW), SarcasmThresholds())


class TestDistanceRatio:
    def test_direct(self):
        assert distance_ratio(scores(10, 6, 2)) == pytest.approx(1.0)

    def test_zero_denominator_undefined(self):
        assert distance_ratio(scores(10, 10, 2)) is None

    def test_zero_numerator(self):
        assert distance_ratio(scores(10, 6, 6)) == 0.0

    def test_nosignal_raises(self):
        with pytest.raises(NoSignalError):
            distance_ratio(scores())


class TestScoreRatios:
    def test_direct(self):
        r23, r12 = score_ratios(scores(10, 6, 2))
        assert r23 == pytest.approx(2 / 6)
        assert r12 == pytest.approx(0.6)

    def test_all_equal(self):
        assert score_ratios(scores(10, 10, 10)) == (1.0, 1.0)

    def test_zero_divisor_undefined(self):
        assert score_ratios(scores(10, 0, 0)) is None

    def test_nosignal_raises(self):
        with pytest.raises(NoSignalError):
            score_ratios(scores())


class TestLabelSarcasm:
    thresholds = SarcasmThresholds(x1=0.5, x2=10, y1=0.1, y2=0.5)

    def test_reference_composition(self):
        v = label_sarcasm(scores(s_angry=10, s_haha=9, s_wow=2), self.thresholds)
        assert v.candidate
        assert v.distance_ratio == pytest.approx(7.0)
        assert v.r23 == pytest.approx(2 / 9)
        assert v.r12 == pytest.approx(0.9)
        assert v.sarcastic

    def test_non_candidate_short_circuits(self):
        v = label_sarcasm(scores(s_sad=10, s_love=9, s_wow=2), self.thresholds)
        assert not v.candidate and not v.sarcastic
        assert v.reason == "not-candidate"

    def test_degenerate_tie_fails(self):
        v = label_sarcasm(scores(s_angry=5, s_wow=5, s_haha=1), self.thresholds)
        assert v.candidate and not v.sarcastic
        assert v.reason == "DegenerateScores"

    def test_scale_invariance(self):
        base = (10.0, 9.0, 2.0)
        for c in (0.5, 3.0, 100.0):
            a = label_sarcasm(scores(*base), self.thresholds)
            b = label_sarcasm(scores(*(c * s for s in base)), self.thresholds)
            assert a.sarcastic == b.sarcastic and a.reason == b.reason

    def test_widening_monotone(self):
        grid = [(s1, s2, s3)
                for s1, s2, s3 in itertools.product(range(0, 12, 3), repeat=3)
                if s1 >= s2 >= s3 and s1 > 0]
        narrow = SarcasmThresholds(x1=1.0, x2=5.0, y1=0.3, y2=0.6)
        wide = SarcasmThresholds(x1=0.5, x2=50.0, y1=0.1, y2=0.3)
        for s in grid:
            if label_sarcasm(scores(*s), narrow).sarcastic:
                assert label_sarcasm(scores(*s), wide).sarcastic

    def test_sarcastic_implies_combo(self):
        for s1, s2, s3 in itertools.product(range(0, 10, 2), repeat=3):
            if not (s1 >= s2 >= s3):
                continue
            sc = scores(s_sad=s1, s_love=s2, s_wow=s3)
            if sc.nosignal:
                continue
            assert not label_sarcasm(sc, self.thresholds).sarcastic

    def test_nosignal_raises(self):
        with pytest.raises(NoSignalError):
            label_sarcasm(scores(), self.thresholds)


class TestThresholdValidation:
    def test_x_order(self):
        with pytest.raises(ConfigError):
            SarcasmThresholds(x1=5, x2=1)

    def test_y_range(self):
        with pytest.raises(ConfigError):
            SarcasmThresholds(y1=0.0)
        with pytest.raises(ConfigError):
            SarcasmThresholds(y2=1.5)

    def test_combos_nonempty(self):
        with pytest.raises(ConfigError):
            SarcasmThresholds(combos=frozenset())


def test_threshold_config_roundtrip(tmp_path):
    path = tmp_path / "thresholds.cfg"
    save_thresholds(DEFAULT_PROFILES, path)
    en = load_thresholds(path, "en")
    zh = load_thresholds(path, "zh")
    assert en == DEFAULT_PROFILES["en"]
    assert zh == DEFAULT_PROFILES["zh"]
    with pytest.raises(ConfigError):
        load_thresholds(path, "fr")
