from collections import Counter
from itertools import permutations

import numpy as np
import pytest
from scipy import stats

from irsassoc.assignment import validate
from irsassoc.association import associate, pseudo_rate_id_matrix, pseudo_rate_si_matrix, solve_p1
from irsassoc.baselines import (
    _random_conflict_rounds,
    es_candidate_count,
    exhaustive_search,
    greedy,
    partial_exhaustive,
    partial_random,
    random_assignment,
)
from irsassoc.channel import LinkEvaluator
from irsassoc.errors import CapExceededError, InfeasibleError
from irsassoc.matching import match_scores
from irsassoc.propagation import IrsPanel, RadioConfig, Scenario

from conftest import small_scenario

PITCH = 0.4 * RadioConfig().wavelength


def _panel(i, x, dims=(4, 4)):
    return IrsPanel.facing(i, (x, 0, 2.5), (0, 1, 0), dims, PITCH)


class TestExhaustive:
    @pytest.mark.parametrize("n,count", [(2, 4), (3, 12)])
    def test_candidate_count(self, n, count):
        sc = small_scenario(k=2, n=n, l=2, m=4, seed=0)
        assert es_candidate_count(2, n, 2) == count
        assert exhaustive_search(sc).candidates == count

    def test_single_source_picks_better_irs(self):
        # the second panel is closer and larger
        sc = Scenario([[4, 2, 1.5]], [[5, 2, 1.5]], [_panel(0, -6), _panel(1, 4.5, (8, 8))])
        ev = LinkEvaluator(sc)
        r = exhaustive_search(sc, ev)
        assert r.association.triples == ((0, 1, 0),)
        assert r.sum_rate == ev.sum_rate([(0, 1, 0)]) > ev.sum_rate([(0, 0, 0)])

    def test_cap(self):
        sc = small_scenario(k=3, n=4, l=3, m=4)
        with pytest.raises(CapExceededError) as info:
            exhaustive_search(sc, cap=100)
        assert info.value.count == 144

    def test_infeasible(self):
        sc = Scenario([[0, 3, 1.5], [1, 3, 1.5]], [[2, 3, 1.5], [3, 3, 1.5]], [_panel(0, 0)])
        with pytest.raises(InfeasibleError):
            exhaustive_search(sc)

    def test_dominates_every_scheme(self):
        for seed in range(15):
            sc = small_scenario(k=2, n=3, l=2, m=16, seed=seed)
            ev = LinkEvaluator(sc)
            best = exhaustive_search(sc, ev).sum_rate
            rng = np.random.default_rng(seed)
            others = [
                ev.sum_rate(associate(sc, ev).association.triples),
                partial_exhaustive(sc, ev).sum_rate,
                greedy(sc, rng, ev).sum_rate,
                random_assignment(sc, rng, ev).sum_rate,
                partial_random(sc, rng, ev).sum_rate,
            ]
            assert all(v <= best for v in others)

    def test_matches_direct_enumeration(self):
        sc = small_scenario(k=2, n=3, l=2, m=16, seed=6)
        ev = LinkEvaluator(sc)
        values = {}
        for irs in permutations(range(3), 2):
            for dst in permutations(range(2)):
                t = tuple((k, irs[k], dst[k]) for k in range(2))
                values[t] = ev.sum_rate(t)
        assert len(values) == 12
        r = exhaustive_search(sc, ev)
        assert r.sum_rate == max(values.values())
        assert values[r.association.triples] == r.sum_rate

    def test_parallel_equals_serial(self):
        sc = small_scenario(k=2, n=4, l=2, m=16, seed=3)
        a = exhaustive_search(sc)
        b = exhaustive_search(sc, workers=2)
        assert a == b


class TestPartialExhaustive:
    def test_single_irs_equals_es(self):
        sc = Scenario([[0, 3, 1.5]], [[2, 4, 1.5], [-3, 1, 1.5], [1, 8, 1.5]], [_panel(0, 0)])
        assert partial_exhaustive(sc).association == exhaustive_search(sc).association

    def test_bounded_by_es(self):
        for seed in range(15):
            sc = small_scenario(k=2, n=3, l=2, m=16, seed=seed)
            ev = LinkEvaluator(sc)
            assert partial_exhaustive(sc, ev).sum_rate <= exhaustive_search(sc, ev).sum_rate

    def test_two_stage_oracle(self):
        sc = small_scenario(k=2, n=3, l=2, m=16, seed=11)
        ev = LinkEvaluator(sc)
        pseudo = pseudo_rate_si_matrix(sc)
        irs = max(permutations(range(3), 2), key=lambda p: pseudo[0, p[0]] + pseudo[1, p[1]])
        triples = max((tuple((k, irs[k], d[k]) for k in range(2)) for d in permutations(range(2))),
                      key=ev.sum_rate)
        r = partial_exhaustive(sc, ev)
        assert r.association.triples == triples
        assert r.candidates == 6 + 2


class TestGreedy:
    def test_conflict_free_rounds_equal_matching(self):
        scores = np.array([[0.9, 0.1, 0.2], [0.3, 0.8, 0.1]])
        partner, proposals = _random_conflict_rounds(scores, np.random.default_rng(0))
        assert partner.tolist() == match_scores(scores).partner.tolist()
        assert proposals == 2

    def test_conflict_free_scenario_equals_pipeline(self):
        checked = 0
        for seed in range(60):
            sc = small_scenario(k=2, n=3, l=2, m=16, seed=seed)
            ev = LinkEvaluator(sc)
            p1 = solve_p1(pseudo_rate_si_matrix(sc))
            top_irs = pseudo_rate_si_matrix(sc).argmax(axis=1)
            top_pair = pseudo_rate_id_matrix(p1, ev).argmax(axis=0)
            if len(set(top_irs)) < 2 or len(set(top_pair)) < 2:
                continue
            checked += 1
            assert greedy(sc, seed, ev).association == associate(sc, ev).association
        assert checked >= 5

    def test_contested_winner_uniform(self):
        scores = np.array([[1.0, 0.5], [1.0, 0.3]])
        wins = Counter(int(np.flatnonzero(_random_conflict_rounds(scores, np.random.default_rng(s))[0] == 0)[0])
                       for s in range(1000))
        assert stats.chisquare([wins[0], wins[1]]).pvalue > 1e-3
        # loser retries on its next choice
        partner, _ = _random_conflict_rounds(scores, np.random.default_rng(1))
        assert sorted(partner.tolist()) == [0, 1]

    def test_outputs_validate(self):
        for seed in range(20):
            sc = small_scenario(k=3, n=4, l=3, m=16, seed=seed)
            assert validate(greedy(sc, seed).association, 3, 4, 3)[0]


def _freq(fn, sc, draws):
    ev = LinkEvaluator(sc)
    return Counter(fn(sc, np.random.default_rng(s), ev).association.triples for s in range(draws))


class TestRandom:
    def test_single_triple(self):
        sc = small_scenario(k=1, n=1, l=1, m=4)
        assert random_assignment(sc, 0).association.triples == ((0, 0, 0),)
        assert partial_random(sc, 0).association.triples == ((0, 0, 0),)

    def test_ra_uniform(self):
        counts = _freq(random_assignment, small_scenario(k=2, n=2, l=2, m=4), 4000)
        assert len(counts) == 4
        assert stats.chisquare(list(counts.values())).pvalue > 1e-3

    def test_pra_matches_ra(self):
        sc = small_scenario(k=2, n=3, l=2, m=4)
        ra = _freq(random_assignment, sc, 3000)
        pra = _freq(partial_random, sc, 3000)
        keys = sorted(set(ra) | set(pra))
        assert len(keys) == 12
        table = np.array([[ra[k] for k in keys], [pra[k] for k in keys]])
        assert stats.chi2_contingency(table).pvalue > 1e-3

    @pytest.mark.parametrize("fn", [random_assignment, partial_random])
    def test_reproducible_and_valid(self, fn):
        sc = small_scenario(k=3, n=4, l=3, m=4, seed=2)
        a = fn(sc, 123)
        assert a == fn(sc, 123)
        assert validate(a.association, 3, 4, 3)[0]
