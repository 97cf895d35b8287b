"""Reference association schemes: exhaustive, partial exhaustive, greedy and random."""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import permutations
from typing import Optional

import numpy as np

from .assignment import Association3D
from .association import pseudo_rate_id_matrix, pseudo_rate_si_matrix
from .channel import LinkEvaluator
from .errors import CapExceededError, InfeasibleError
from .matching import Matching

DEFAULT_CAP = 10**6


@dataclass(frozen=True)
class BaselineResult:
    algorithm: str
    association: Association3D
    sum_rate: float
    candidates: int = 0
    proposals: int = 0


def _check_sizes(ev: LinkEvaluator):
    if ev.K > ev.N or ev.K > ev.L:
        raise InfeasibleError(f"need K <= N and K <= L, got K={ev.K}, N={ev.N}, L={ev.L}")


def _rng(seed) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def es_candidate_count(K: int, N: int, L: int) -> int:
    return math.perm(N, K) * math.perm(L, K)


def _best_over(ev: LinkEvaluator, irs_choices):
    """Best (value, triples, count) over all destination orders for the given IRS tuples."""
    best_val, best_key, count = -math.inf, None, 0
    K = ev.K
    for irs in irs_choices:
        for dst in permutations(range(ev.L), K):
            triples = tuple((k, irs[k], dst[k]) for k in range(K))
            val = ev.sum_rate(triples)
            count += 1
            if val > best_val or (val == best_val and triples < best_key):
                best_val, best_key = val, triples
    return best_val, best_key, count


def _es_chunk(args):
    ev, chunk = args
    return _best_over(ev, chunk)


def exhaustive_search(scenario, evaluator: Optional[LinkEvaluator] = None,
                      cap: int = DEFAULT_CAP, workers: int = 1) -> BaselineResult:
    """Enumerate every one-to-one association and keep the best true sum rate.

    Ties go to the lexicographically smallest triple list, so fanning the
    enumeration out over ``workers`` processes yields the same answer.
    """
    ev = evaluator if evaluator is not None else LinkEvaluator(scenario)
    _check_sizes(ev)
    total = es_candidate_count(ev.K, ev.N, ev.L)
    if total > cap:
        raise CapExceededError(total, cap)
    irs_all = list(permutations(range(ev.N), ev.K))
    if workers <= 1:
        parts = [_best_over(ev, irs_all)]
    else:
        chunks = [irs_all[i::workers] for i in range(workers)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_es_chunk, [(ev, c) for c in chunks if c]))
    best_val, best_key, count = -math.inf, None, 0
    for val, key, c in parts:
        count += c
        if key is not None and (val > best_val or (val == best_val and key < best_key)):
            best_val, best_key = val, key
    return BaselineResult("es", Association3D(best_key), best_val, count)


def partial_exhaustive(scenario, evaluator: Optional[LinkEvaluator] = None,
                       cap: int = DEFAULT_CAP) -> BaselineResult:
    """Best S-I injection by total pseudo rate, then best destination order by true sum rate."""
    ev = evaluator if evaluator is not None else LinkEvaluator(scenario)
    _check_sizes(ev)
    n1, n2 = math.perm(ev.N, ev.K), math.perm(ev.L, ev.K)
    if max(n1, n2) > cap:
        raise CapExceededError(max(n1, n2), cap)
    pseudo = pseudo_rate_si_matrix(ev.scenario)
    rows = np.arange(ev.K)
    best_irs, best_score = None, -math.inf
    for irs in permutations(range(ev.N), ev.K):
        score = pseudo[rows, list(irs)].sum()
        if score > best_score:  # first hit is lexicographically smallest
            best_irs, best_score = irs, score
    val, key, _ = _best_over(ev, [best_irs])
    return BaselineResult("pes", Association3D(key), val, n1 + n2)


def _random_conflict_rounds(scores: np.ndarray, rng: np.random.Generator):
    """Each free proposer bids for its best untaken responder; clashes are settled by a fair coin.

    Returns (partner, proposals).
    """
    P, R = scores.shape
    partner = np.full(P, -1, dtype=np.int64)
    taken = np.zeros(R, dtype=bool)
    proposals = 0
    while np.any(partner < 0) and not taken.all():
        bids = {}
        for p in np.flatnonzero(partner < 0):
            masked = np.where(taken, -np.inf, scores[p])
            r = int(np.argmax(masked))
            bids.setdefault(r, []).append(int(p))
            proposals += 1
        for r in sorted(bids):
            who = bids[r]
            winner = who[int(rng.integers(len(who)))] if len(who) > 1 else who[0]
            partner[winner] = r
            taken[r] = True
    return partner, proposals


def greedy(scenario, rng=None, evaluator: Optional[LinkEvaluator] = None) -> BaselineResult:
    """Greedy selection: everyone bids for the best available counterpart by pseudo rate."""
    ev = evaluator if evaluator is not None else LinkEvaluator(scenario)
    _check_sizes(ev)
    rng = _rng(rng)
    pseudo_si = pseudo_rate_si_matrix(ev.scenario)
    partner, n_prop1 = _random_conflict_rounds(pseudo_si, rng)
    p1 = Matching(partner, ev.N, n_prop1)
    pseudo_id = pseudo_rate_id_matrix(p1, ev)
    dest_pick, n_prop2 = _random_conflict_rounds(pseudo_id.T, rng)
    pairs = p1.pairs
    triples = [(pairs[q][0], pairs[q][1], l) for l, q in enumerate(dest_pick) if q >= 0]
    a = Association3D(triples)
    return BaselineResult("gs", a, ev.sum_rate(a.triples), 0, n_prop1 + n_prop2)


def random_assignment(scenario, rng=None, evaluator: Optional[LinkEvaluator] = None) -> BaselineResult:
    """Uniform draw over all one-to-one associations."""
    ev = evaluator if evaluator is not None else LinkEvaluator(scenario)
    _check_sizes(ev)
    rng = _rng(rng)
    irs = rng.permutation(ev.N)[: ev.K]
    dst = rng.permutation(ev.L)[: ev.K]
    a = Association3D(zip(range(ev.K), irs, dst))
    return BaselineResult("ra", a, ev.sum_rate(a.triples), 1)


def partial_random(scenario, rng=None, evaluator: Optional[LinkEvaluator] = None) -> BaselineResult:
    """Random S-I association first, then a random destination for each pair."""
    ev = evaluator if evaluator is not None else LinkEvaluator(scenario)
    _check_sizes(ev)
    rng = _rng(rng)
    free_irs = list(range(ev.N))
    pairs = []
    for k in range(ev.K):
        pairs.append((k, free_irs.pop(int(rng.integers(len(free_irs))))))
    free_dst = list(range(ev.L))
    triples = [(k, n, free_dst.pop(int(rng.integers(len(free_dst))))) for k, n in pairs]
    a = Association3D(triples)
    return BaselineResult("pra", a, ev.sum_rate(a.triples), 1)
