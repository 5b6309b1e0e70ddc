"""Explicit Lipschitz retraction from card-<=n subsets of R to card-<=(n-1).

For a set A = {a_1 < ... < a_n} of full cardinality n the retraction
collapses the minimal consecutive gap delta(A) = min_j (a_j - a_{j-1})
by sliding each element toward 0:

    a_j' = min(0, a_j + (n-j) delta)   if a_j <= 0
    a_j' = max(0, a_j - j delta)       if a_j >  0

The slid values are nondecreasing, the pair realizing the minimal gap
lands on a common value, and every a_j' lies between 0 and a_j, so the
image of a connected set containing 0 stays inside it.  Sets of
cardinality below n are fixed pointwise (delta = 0 by convention).
The map is (6n+1)-Lipschitz for the Hausdorff metric; iterating over
capacities n, n-1, ..., k+1 retracts onto card-<=k sets.

The 0 used as the attractor is the ambient origin: callers working in a
proper subinterval X of R translate so 0 lies in X first.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import BadRangeError, CapacityExceededError, DimensionMismatchError
from .pointset import FinitePointSet, from_values


@dataclass(frozen=True)
class GapProfile:
    """Minimal consecutive gap of a sorted dim-1 set at capacity n.

    ``gap_index`` is the 0-based index of the right endpoint of the first
    minimal gap (points[gap_index] - points[gap_index - 1] == delta), or
    None when the set has fewer than n points and delta is 0 by
    convention.
    """

    delta: float
    gap_index: int | None


def _require_line_set(a: FinitePointSet, n: int) -> None:
    if a.dim != 1:
        raise DimensionMismatchError(f"retraction operates on dim-1 sets, got dim {a.dim}")
    if len(a) > n:
        raise CapacityExceededError(f"set has {len(a)} points, capacity is {n}")


def min_gap(a: FinitePointSet, n: int) -> GapProfile:
    """Minimal consecutive gap delta(A); zero when |A| < n."""
    if n < 1:
        raise BadRangeError(f"capacity must be >= 1, got {n}")
    _require_line_set(a, n)
    if len(a) < n or n == 1:
        return GapProfile(delta=0.0, gap_index=None)
    vals = a.values()
    gaps = vals[1:] - vals[:-1]
    idx = int(gaps.argmin())
    return GapProfile(delta=float(gaps[idx]), gap_index=idx + 1)


def retract_once(a: FinitePointSet, n: int) -> FinitePointSet:
    """One retraction step: card-<=n sets to card-<=(n-1) sets.

    Returns ``a`` itself (exactly) when |a| < n, so the target subspace
    is fixed pointwise.
    """
    if n < 2:
        raise BadRangeError(f"retract_once needs capacity >= 2, got {n}")
    _require_line_set(a, n)
    if len(a) < n:
        return a
    profile = min_gap(a, n)
    delta = profile.delta
    moved = []
    for j, v in enumerate(a.values(), start=1):
        if v <= 0.0:
            moved.append(min(0.0, v + (n - j) * delta))
        else:
            moved.append(max(0.0, v - j * delta))
    # the pair realizing the minimal gap lands on one value in exact
    # arithmetic; enforce the identity so rounding cannot keep the slid
    # endpoints one ulp apart and the cardinality provably drops
    moved[profile.gap_index] = moved[profile.gap_index - 1]
    return from_values(moved)


def retract_to(a: FinitePointSet, n: int, k: int) -> FinitePointSet:
    """Iterated retraction from capacity n down to capacity k (1 <= k < n)."""
    if not 1 <= k < n:
        raise BadRangeError(f"need 1 <= k < n, got k={k}, n={n}")
    _require_line_set(a, n)
    result = a
    for cap in range(n, k, -1):
        result = retract_once(result, cap)
    return result
