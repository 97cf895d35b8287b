"""One-to-one proposer/responder deferred acceptance with stability auditing."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import InvalidInputError


def build_priorities(scores) -> np.ndarray:
    """Order each row of ``scores`` best-first.

    Ties keep ascending column index, so equal rows give the identity order.

    >>> build_priorities([[0.2, 0.9, 0.5]]).tolist()
    [[1, 2, 0]]
    """
    scores = np.asarray(scores, dtype=float)
    if scores.ndim != 2:
        raise InvalidInputError("score matrix must be two-dimensional")
    if not np.all(np.isfinite(scores)):
        raise InvalidInputError("score matrix has non-finite entries")
    return np.argsort(-scores, axis=1, kind="stable").astype(np.int64)


def _check_priorities(prio, n_cols, label):
    prio = np.ascontiguousarray(prio, dtype=np.int64)
    if prio.ndim != 2 or prio.shape[1] != n_cols:
        raise InvalidInputError(f"{label} priorities must have {n_cols} columns")
    expected = np.arange(n_cols)
    if prio.size and not np.array_equal(np.sort(prio, axis=1), np.broadcast_to(expected, prio.shape)):
        raise InvalidInputError(f"every {label} priority row must be a permutation")
    return prio


def priority_ranks(prio) -> np.ndarray:
    """Inverse permutation per row: ``ranks[a, b]`` is the position of ``b`` in ``prio[a]``."""
    prio = np.asarray(prio, dtype=np.int64)
    ranks = np.empty_like(prio)
    rows = np.arange(prio.shape[0])[:, None]
    ranks[rows, prio] = np.arange(prio.shape[1])
    return ranks


@dataclass(frozen=True)
class Matching:
    """Partial injective map from proposers to responders.

    ``partner[p]`` is the responder held by proposer ``p`` or -1.
    """

    partner: np.ndarray
    n_responders: int
    proposals: int = 0

    @property
    def n_proposers(self) -> int:
        return len(self.partner)

    @property
    def pairs(self) -> list[tuple[int, int]]:
        return [(p, int(r)) for p, r in enumerate(self.partner) if r >= 0]

    def responder_partner(self) -> np.ndarray:
        out = np.full(self.n_responders, -1, dtype=np.int64)
        for p, r in self.pairs:
            out[r] = p
        return out

    def is_injective(self) -> bool:
        held = self.partner[self.partner >= 0]
        return len(np.unique(held)) == len(held)


def deferred_acceptance(prio_p, prio_r) -> Matching:
    """Proposer-proposing deferred acceptance.

    ``prio_p`` is (P, R): each proposer's responders best-first; ``prio_r`` is
    (R, P) likewise for responders.  Every free proposer proposes to its best
    responder not yet tried; a held responder trades up only if it ranks the
    newcomer strictly higher.  Runs until each proposer is held or has been
    turned down by every responder.
    """
    prio_p = np.asarray(prio_p, dtype=np.int64)
    prio_r = np.asarray(prio_r, dtype=np.int64)
    if prio_p.ndim != 2 or prio_r.ndim != 2:
        raise InvalidInputError("priority matrices must be two-dimensional")
    P, R = prio_p.shape
    if prio_r.shape != (R, P):
        raise InvalidInputError(f"responder priorities must be ({R}, {P}), got {prio_r.shape}")
    if P == 0 or R == 0:
        return Matching(np.full(P, -1, dtype=np.int64), R, 0)
    prio_p = _check_priorities(prio_p, R, "proposer")
    prio_r = _check_priorities(prio_r, P, "responder")
    partner, proposals = kernels.deferred_acceptance(prio_p, priority_ranks(prio_r))
    return Matching(np.asarray(partner, dtype=np.int64), R, int(proposals))


def match_scores(scores_p, scores_r=None) -> Matching:
    """Run deferred acceptance straight from score matrices (higher is better).

    ``scores_r`` is (R, P) and defaults to ``scores_p.T`` (shared link quality).
    """
    scores_p = np.asarray(scores_p, dtype=float)
    scores_r = scores_p.T if scores_r is None else np.asarray(scores_r, dtype=float)
    return deferred_acceptance(build_priorities(scores_p), build_priorities(scores_r))


def is_stable(m: Matching, scores_p, scores_r):
    """Audit ``m`` for blocking pairs under strict score preferences.

    Being unmatched is worse than any partner.  Returns ``(stable, blocking)``
    where ``blocking`` lists every ``(p, r)`` that strictly prefer each other.
    """
    scores_p = np.asarray(scores_p, dtype=float)
    scores_r = np.asarray(scores_r, dtype=float)
    P, R = scores_p.shape
    if scores_r.shape != (R, P):
        raise InvalidInputError("responder scores must be the (R, P) counterpart")
    if not m.is_injective():
        raise InvalidInputError("matching is not injective")
    held_by = m.responder_partner()
    cur_p = np.array([scores_p[p, r] if r >= 0 else -np.inf for p, r in enumerate(m.partner)])
    cur_r = np.array([scores_r[r, q] if q >= 0 else -np.inf for r, q in enumerate(held_by)])
    wants = (scores_p > cur_p[:, None]) & (scores_r.T > cur_r[None, :])
    blocking = [(int(p), int(r)) for p, r in zip(*np.nonzero(wants))]
    return not blocking, blocking


def proposal_bound_check(m: Matching, n_proposers: int, n_responders: int) -> bool:
    """True iff the proposal count respects the P x R bound."""
    return m.proposals <= n_proposers * n_responders
