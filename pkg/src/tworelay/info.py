"""Entropy and conditional mutual information on assembled joints.

All quantities are in bits (log base 2) unless a caller converts afterward.
Conditional mutual information is computed from entropies of marginals,
I(L;R|G) = H(LG) + H(RG) - H(LRG) - H(G), so the two argument sets travel the
same computation path and exact symmetry holds.  Results within 1e-10 of zero
are clamped to exactly 0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .prob import JointPmf, ValidationError, canonical_sorted, marginalize

ZERO_CLAMP = 1e-10


@dataclass(frozen=True)
class InfoQuery:
    """A conditional mutual information I(left; right | given).

    Sets are stored canonically sorted.  ``given`` may be empty.  The left and
    right sets must be disjoint from each other and from ``given``; overlap
    would silently change the meaning of the query.
    """

    left: tuple[str, ...]
    right: tuple[str, ...]
    given: tuple[str, ...] = ()

    def __post_init__(self):
        left = canonical_sorted(self.left)
        right = canonical_sorted(self.right)
        given = canonical_sorted(self.given)
        if not left or not right:
            raise ValidationError("InfoQuery: left and right must be nonempty")
        if set(left) & set(right) or set(left) & set(given) or set(right) & set(given):
            raise ValidationError(f"InfoQuery: overlapping sets {left} ; {right} | {given}")
        object.__setattr__(self, "left", left)
        object.__setattr__(self, "right", right)
        object.__setattr__(self, "given", given)

    def __str__(self) -> str:
        body = f"{','.join(self.left)};{','.join(self.right)}"
        if self.given:
            body += f"|{','.join(self.given)}"
        return f"I({body})"


def entropy(pmf: JointPmf) -> float:
    """Shannon entropy of a joint pmf in bits."""
    p = pmf.mass.reshape(-1)
    nz = p[p > 0.0]
    h = float(-(nz * np.log2(nz)).sum())
    return 0.0 if abs(h) <= ZERO_CLAMP else h


class _EntropyCache:
    """Entropies of marginals of one joint, keyed by the variable subset."""

    def __init__(self, joint: JointPmf):
        self.joint = joint
        self._cache: dict[tuple[str, ...], float] = {}

    def h(self, ids: tuple[str, ...]) -> float:
        if not ids:
            return 0.0
        key = canonical_sorted(ids)
        if key not in self._cache:
            self._cache[key] = entropy(marginalize(self.joint, key))
        return self._cache[key]


def mutual_info(joint: JointPmf, query: InfoQuery, cache: _EntropyCache | None = None) -> float:
    """Conditional mutual information of ``query`` under ``joint``, in bits."""
    have = set(joint.ids)
    need = set(query.left) | set(query.right) | set(query.given)
    missing = sorted(need - have, key=lambda v: v)
    if missing:
        raise ValidationError(f"query {query} references {missing}, absent from joint {joint.ids}")
    c = cache if cache is not None and cache.joint is joint else _EntropyCache(joint)
    lg = c.h(query.left + query.given)
    rg = c.h(query.right + query.given)
    lrg = c.h(query.left + query.right + query.given)
    g = c.h(query.given)
    value = lg + rg - lrg - g
    if value < -ZERO_CLAMP:
        raise ValidationError(f"mutual information {value} below -{ZERO_CLAMP} for {query}")
    return 0.0 if abs(value) <= ZERO_CLAMP else value


def binary_entropy(p: float) -> float:
    """h2(p) in bits; vanishes at the endpoints."""
    if p <= 0.0 or p >= 1.0:
        return 0.0
    return float(-p * np.log2(p) - (1.0 - p) * np.log2(1.0 - p))
