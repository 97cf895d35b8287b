"""The one-to-one source-IRS-destination association and its validator."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np


@dataclass(frozen=True)
class Association3D:
    """A set of ``(source, irs, destination)`` triples, 0-based, sorted by source."""

    triples: tuple

    def __init__(self, triples: Iterable):
        object.__setattr__(
            self, "triples", tuple(sorted((int(k), int(n), int(l)) for k, n, l in triples))
        )

    def __iter__(self):
        return iter(self.triples)

    def __len__(self):
        return len(self.triples)

    def irs_of(self, k):
        for kk, n, _ in self.triples:
            if kk == k:
                return n
        return None

    def as_tensor(self, K, N, L) -> np.ndarray:
        omega = np.zeros((K, N, L), dtype=np.int8)
        for k, n, l in self.triples:
            omega[k, n, l] = 1
        return omega

    @classmethod
    def from_tensor(cls, omega) -> "Association3D":
        return cls(zip(*np.nonzero(np.asarray(omega))))


def validate(a: Association3D, K: int, N: int, L: int):
    """Check one-to-one-ness on every axis.

    A full association has exactly ``min(K, N, L)`` triples, so the smallest
    side is fully covered and the others are used at most once.  Returns
    ``(ok, violations)`` with human-readable, 1-based violation messages.
    """
    violations = []
    sizes = {"source": K, "IRS": N, "destination": L}
    for axis, (name, size) in enumerate(sizes.items()):
        used = [t[axis] for t in a.triples]
        for idx in used:
            if not 0 <= idx < size:
                violations.append(f"{name} {idx + 1} out of range 1..{size}")
        for idx in sorted({i for i in used if used.count(i) > 1}):
            violations.append(f"{name} {idx + 1} reused {used.count(idx)} times")
    need = min(K, N, L)
    if len(a.triples) != need:
        violations.append(f"expected {need} triples, found {len(a.triples)}")
        for axis, (name, size) in enumerate(sizes.items()):
            if size == need:
                used = {t[axis] for t in a.triples}
                violations.extend(f"{name} {i + 1} unpaired" for i in range(size) if i not in used)
    return not violations, violations
