"""Two-phase source-IRS-destination association by deferred acceptance.

Phase 1 matches sources (proposers) to IRSs (responders) on a CSI-derived
source-to-IRS pseudo rate.  Phase 2 matches destinations (proposers) to the
phase-1 (source, IRS) pairs (responders) on a pseudo rate computed from the
full end-to-end SINR.  Both score matrices are shared by the two sides, i.e.
responders rank proposers by the transposed matrix.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .assignment import Association3D, validate
from .channel import LinkEvaluator, noise_power, rate
from .errors import ContractError, InfeasibleError
from .matching import Matching, match_scores
from .propagation import Scenario, incident_loss


def pseudo_rate_si_matrix(scenario: Scenario) -> np.ndarray:
    """(K, N) matrix of source-to-IRS pseudo rates.

    The proxy SNR is the coherent single-hop capture
    P_k G_S (sum_m sqrt(l1[k, n, m]))^2 / sigma^2, with no interference since
    an IRS is not a receiver.
    """
    sigma2 = noise_power(scenario.radio)
    kappa = scenario.kappa_abs
    power = scenario.tx_power * scenario.radio.source_gain
    out = np.empty((scenario.K, scenario.N))
    for n, panel in enumerate(scenario.panels):
        coherent = np.sqrt(incident_loss(panel, scenario.sources, scenario.radio, kappa)).sum(axis=1)
        out[:, n] = rate(power * coherent ** 2 / sigma2)
    return out


def pseudo_rate_si(k: int, n: int, scenario: Scenario) -> float:
    return float(pseudo_rate_si_matrix(scenario)[k, n])


def solve_p1(pseudo: np.ndarray) -> Matching:
    """Sources propose to IRSs; IRSs rank sources by the same pseudo rates."""
    pseudo = np.asarray(pseudo, dtype=float)
    K, N = pseudo.shape
    if K > N:
        raise InfeasibleError(f"{K} sources cannot be matched one-to-one to {N} IRSs")
    return match_scores(pseudo)


def pseudo_rate_id_matrix(p1: Matching, evaluator: LinkEvaluator) -> np.ndarray:
    """(pairs, L) matrix of pair-to-destination pseudo rates.

    Row ``q`` corresponds to ``p1.pairs[q]``.  Entry ``[q, l]`` is the rate of
    the triple (k*, n*, l) when every phase-1 pair is active and each pair's
    IRS is cophased toward ``l``, the destination under evaluation.
    """
    pairs = p1.pairs
    out = np.empty((len(pairs), evaluator.L))
    for l in range(evaluator.L):
        triples = [(k, n, l) for k, n in pairs]
        out[:, l] = rate(evaluator.sinrs(triples))
    return out


def pseudo_rate_id(k_star: int, n_star: int, l: int, p1: Matching,
                   evaluator: LinkEvaluator) -> float:
    if (k_star, n_star) not in p1.pairs:
        raise ContractError(f"({k_star}, {n_star}) is not a phase-1 pair")
    q = p1.pairs.index((k_star, n_star))
    return float(pseudo_rate_id_matrix(p1, evaluator)[q, l])


def solve_p2(pseudo_id: np.ndarray, p1: Matching) -> Matching:
    """Destinations propose to phase-1 pairs; returns a destination -> pair-index matching."""
    pseudo_id = np.asarray(pseudo_id, dtype=float)
    n_pairs, L = pseudo_id.shape
    if n_pairs != len(p1.pairs) or L != n_pairs:
        raise InfeasibleError(
            f"phase 2 needs as many destinations as phase-1 pairs ({len(p1.pairs)}), got {L}"
        )
    return match_scores(pseudo_id.T, pseudo_id)


def assemble(p1: Matching, p2: Matching, K: Optional[int] = None, N: Optional[int] = None,
             L: Optional[int] = None) -> Association3D:
    pairs = p1.pairs
    triples = [(pairs[q][0], pairs[q][1], l) for l, q in p2.pairs]
    a = Association3D(triples)
    K = p1.n_proposers if K is None else K
    N = p1.n_responders if N is None else N
    L = p2.n_proposers if L is None else L
    ok, violations = validate(a, K, N, L)
    if not ok:
        raise RuntimeError("assembled association is invalid: " + "; ".join(violations))
    return a


@dataclass(frozen=True)
class ProposedResult:
    association: Association3D
    p1: Matching
    p2: Matching
    pseudo_si: np.ndarray
    pseudo_id: np.ndarray

    @property
    def proposals(self) -> int:
        return self.p1.proposals + self.p2.proposals


def associate(scenario: Scenario, evaluator: Optional[LinkEvaluator] = None) -> ProposedResult:
    """Run both matching phases and return the assembled association."""
    if scenario.K != scenario.L:
        raise InfeasibleError("the two-phase scheme needs as many destinations as sources")
    ev = evaluator if evaluator is not None else LinkEvaluator(scenario)
    pseudo_si = pseudo_rate_si_matrix(scenario)
    p1 = solve_p1(pseudo_si)
    pseudo_id = pseudo_rate_id_matrix(p1, ev)
    p2 = solve_p2(pseudo_id, p1)
    a = assemble(p1, p2, scenario.K, scenario.N, scenario.L)
    return ProposedResult(a, p1, p2, pseudo_si, pseudo_id)
