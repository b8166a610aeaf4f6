import math
import random

import pytest

from reaction_miner.coocgraph import build_graph, reduce_graph, CoocGraph
from reaction_miner.emotions import CANONICAL_ORDER, Emotion
from reaction_miner.patterns import (
    EmotionModel, MiningParams, PatternStats, build_model, div, ed,
    extract_patterns, ief, load_model, match, pf, save_model,
)
from reaction_miner.textproc import TokenSeq, is_symbol


def seq(text, sid="s"):
    return TokenSeq(sid, text.split())


def stats(freqs, n_fillers):
    return PatternStats({e: freqs.get(e, 0) for e in CANONICAL_ORDER},
                        None, n_fillers)


def reduced_over(seqs):
    """Reduced graph with nothing removed (empty objective corpus)."""
    return reduce_graph(build_graph(seqs), CoocGraph(), 0.5)


class TestFactors:
    def test_pf_zero(self):
        assert pf(stats({}, 3), Emotion.ANGRY) == 0.0

    def test_pf_inverse_of_ln(self):
        st = PatternStats({Emotion.ANGRY: math.e - 1}, None, 3)
        assert pf(st, Emotion.ANGRY) == pytest.approx(1.0, abs=1e-9)

    def test_pf_direct(self):
        assert pf(stats({Emotion.SAD: 99}, 3), Emotion.SAD) == pytest.approx(
            math.log(100), abs=1e-12)

    def test_ief_single_emotion(self):
        assert ief(stats({Emotion.WOW: 4}, 3)) == 5.0

    def test_ief_all_emotions(self):
        assert ief(stats({e: 1 for e in CANONICAL_ORDER}, 3)) == 1.0

    def test_ief_two_emotions(self):
        assert ief(stats({Emotion.ANGRY: 1, Emotion.HAHA: 2}, 3)) == 2.5

    def test_ief_all_zero_rejected(self):
        with pytest.raises(ValueError):
            ief(stats({}, 3))

    def test_div_single_filler_zero(self):
        assert div(stats({Emotion.SAD: 1}, 1)) == 0.0

    def test_div_direct(self):
        assert div(stats({Emotion.SAD: 1}, 3)) == pytest.approx(math.log(3), abs=1e-12)
        assert div(stats({Emotion.SAD: 1}, 10)) == pytest.approx(math.log(10), abs=1e-12)

    def test_ed_zero_propagation(self):
        st = stats({Emotion.HAHA: 5}, 4)
        assert ed(st, Emotion.ANGRY) == 0.0  # PF factor

    def test_ed_product(self):
        st = stats({Emotion.ANGRY: 99}, 10)
        expected = math.log(100) * 5.0 * math.log(10)
        assert ed(st, Emotion.ANGRY) == pytest.approx(expected, abs=1e-9)
        assert expected == pytest.approx(53.019, abs=1e-3)

    def test_ed_single_filler_zero_everywhere(self):
        st = stats({e: 7 for e in CANONICAL_ORDER}, 1)
        for e in CANONICAL_ORDER:
            assert ed(st, e) == 0.0


class TestExtract:
    def test_people_are_wildcard(self):
        comments = [(seq(f"people are {w}"), Emotion.ANGRY)
                    for w in ("dumb", "stupid", "evil")]
        reduced = reduced_over([s for s, _ in comments])
        pats, sts = extract_patterns(reduced, comments,
                                     MiningParams(min_pattern_freq=3, min_fillers=3))
        target = ("people", "are", "*")
        assert target in pats
        st = sts[pats.index(target)]
        assert st.freq[Emotion.ANGRY] == 3
        assert st.fillers == {"dumb", "stupid", "evil"}

    def test_min_fillers_threshold(self):
        comments = [(seq(f"people are {w}"), Emotion.ANGRY)
                    for w in ("dumb", "dumb", "stupid")]
        reduced = reduced_over([s for s, _ in comments])
        pats, _ = extract_patterns(reduced, comments,
                                   MiningParams(min_pattern_freq=1, min_fillers=3))
        assert ("people", "are", "*") not in pats

    def test_reduced_filler_does_not_count(self):
        comments = [(seq(f"people are {w}"), Emotion.ANGRY)
                    for w in ("dumb", "stupid", "evil")]
        subj = build_graph([s for s, _ in comments])
        # "evil" dominant in the objective corpus -> removed
        obj = build_graph([seq("evil evil evil")])
        reduced = reduce_graph(subj, obj, 0.5)
        assert "evil" in reduced.removed
        pats, sts = extract_patterns(reduced, comments,
                                     MiningParams(min_pattern_freq=1, min_fillers=1))
        st = sts[pats.index(("people", "are", "*"))]
        assert st.fillers == {"dumb", "stupid"}
        assert st.freq[Emotion.ANGRY] == 2

    def test_window_with_removed_element_skipped(self):
        comments = [(seq("noise people are dumb"), Emotion.ANGRY)]
        subj = build_graph([s for s, _ in comments])
        obj = build_graph([seq("noise noise")])
        reduced = reduce_graph(subj, obj, 0.5)
        pats, _ = extract_patterns(reduced, comments,
                                   MiningParams(min_pattern_freq=1, min_fillers=1))
        for p in pats:
            assert "noise" not in p

    def test_empty_output_allowed(self):
        pats, sts = extract_patterns(reduced_over([]), [], MiningParams())
        assert pats == [] and sts == []

    def test_miner_matches_bruteforce_recount(self):
        rng = random.Random(13)
        vocab = ["alpha", "beta", "gamma", "delta", "eps", "!!"]
        comments = []
        for i in range(200):
            n = rng.randint(2, 6)
            comments.append((
                TokenSeq(f"c{i}", [rng.choice(vocab) for _ in range(n)]),
                rng.choice(CANONICAL_ORDER)))
        reduced = reduced_over([s for s, _ in comments])
        params = MiningParams(min_pattern_freq=2, min_fillers=2)
        pats, sts = extract_patterns(reduced, comments, params)
        assert pats
        oracle = _oracle_mine(reduced, comments, params)
        got = {p: (st.freq, st.fillers) for p, st in zip(pats, sts)}
        assert got == oracle


def _oracle_mine(reduced, comments, params):
    """Sliding-window recount, one occurrence at a time."""
    freq = {}
    fillers = {}
    for tokens, emo in comments:
        toks = tokens.tokens
        for length in (2, 3):
            for start in range(len(toks) - length + 1):
                window = tuple(toks[start:start + length])
                if not all(t in reduced.nodes or is_symbol(t) for t in window):
                    continue
                for pos in range(length):
                    tok = window[pos]
                    if is_symbol(tok) or tok not in reduced.nodes:
                        continue
                    pattern = window[:pos] + ("*",) + window[pos + 1:]
                    freq.setdefault(pattern, {e: 0 for e in CANONICAL_ORDER})
                    freq[pattern][emo] += 1
                    fillers.setdefault(pattern, set()).add(tok)
    return {
        p: (f, fillers[p]) for p, f in freq.items()
        if len(fillers[p]) >= params.min_fillers
        and sum(f.values()) >= params.min_pattern_freq
    }


class TestModel:
    def test_rank_sorting(self):
        pats = [("a", "*"), ("b", "*")]
        sts = [stats({Emotion.ANGRY: 10}, 5), stats({Emotion.ANGRY: 2}, 5)]
        model = build_model(pats, sts)
        assert model.rank[Emotion.ANGRY] == [0, 1]

    def test_rank_tie_by_index(self):
        pats = [("a", "*"), ("b", "*")]
        sts = [stats({Emotion.SAD: 3}, 4), stats({Emotion.SAD: 3}, 4)]
        model = build_model(pats, sts)
        assert model.rank[Emotion.SAD] == [0, 1]

    def test_empty_model(self):
        model = build_model([], [])
        assert len(model) == 0

    def test_rank_is_permutation(self):
        rng = random.Random(2)
        pats, sts = [], []
        for i in range(12):
            pats.append((f"w{i}", "*"))
            sts.append(stats({e: rng.randint(0, 5) for e in CANONICAL_ORDER}
                             | {Emotion.ANGRY: rng.randint(1, 5)},
                             rng.randint(1, 6)))
        model = build_model(pats, sts)
        for e in CANONICAL_ORDER:
            assert sorted(model.rank[e]) == list(range(12))

    def test_invariant_bounds(self):
        rng = random.Random(8)
        for _ in range(50):
            st = stats({e: rng.randint(0, 9) for e in CANONICAL_ORDER}
                       | {Emotion.WOW: rng.randint(1, 9)}, rng.randint(1, 9))
            assert 1.0 <= ief(st) <= 5.0
            assert div(st) >= 0
            for e in CANONICAL_ORDER:
                assert pf(st, e) >= 0
                assert ed(st, e) >= 0
                zero = st.freq[e] == 0 or st.n_fillers == 1
                assert (ed(st, e) == 0) == zero


class TestMatch:
    def model_of(self, *pats):
        sts = [stats({Emotion.ANGRY: 1}, 3) for _ in pats]
        return build_model(list(pats), sts)

    def test_wildcard_alignment(self):
        model = self.model_of(("*", "so", "sad"))
        counts = match(seq("i am so sad"), model)
        assert counts == {0: 1}

    def test_window_underflow(self):
        model = self.model_of(("*", "so", "sad"))
        assert match(seq("so sad"), model) == {}

    def test_overlapping_occurrences(self):
        model = self.model_of(("people", "are", "*"))
        counts = match(seq("people are dumb people are evil"), model)
        assert counts == {0: 2}

    def test_wildcard_rejects_symbol(self):
        model = self.model_of(("people", "are", "*"))
        assert match(seq("people are !!"), model) == {}

    def test_locality_under_concatenation(self):
        model = self.model_of(("people", "are", "*"), ("so", "*"))
        a, b = "people are dumb", "so sad today"
        ca = match(seq(a), model)
        cb = match(seq(b), model)
        # windows never span comment boundaries: matching per comment is
        # the unit; concatenated unrelated comments add a seam window
        combined = {}
        for c in (ca, cb):
            for k, v in c.items():
                combined[k] = combined.get(k, 0) + v
        assert sum(ca.values()) + sum(cb.values()) == sum(combined.values())


def test_model_roundtrip(tmp_path):
    comments = [(seq(f"people are {w}"), Emotion.ANGRY)
                for w in ("dumb", "stupid", "evil")]
    comments += [(seq(f"that looks {w}"), Emotion.HAHA)
                 for w in ("funny", "silly", "goofy")]
    reduced = reduced_over([s for s, _ in comments])
    pats, sts = extract_patterns(reduced, comments,
                                 MiningParams(min_pattern_freq=1, min_fillers=2))
    model = build_model(pats, sts)
    path = tmp_path / "model.tsv"
    save_model(model, path)
    loaded = load_model(path)
    assert loaded.patterns == model.patterns
    assert [st.freq for st in loaded.stats] == [st.freq for st in model.stats]
    assert [st.n_fillers for st in loaded.stats] == [st.n_fillers for st in model.stats]
    assert (loaded.ed == model.ed).all()
    assert loaded.rank == model.rank
