"""Metric cones over bounded spaces and the Euclidean cone lift.

A cone point is a pair (t, x) with t >= 0 over a metric space X of
diameter at most 2; all points with t = 0 are identified (the apex).
Two cone metrics are provided: the additive one

    d_c((t1,x1),(t2,x2)) = |t1 - t2| + min(t1,t2) * d(x1,x2)

used throughout the toolkit, and the classical law-of-cosines metric
sqrt(t1^2 + t2^2 - 2 t1 t2 cos d(x1,x2)).

For X a bounded subset of R^m containing the origin, the lift
(t, x) |-> t*x + (1-t)*e0 realizes the cone inside R^{m+1}.  The induced
Euclidean metric rho is equivalent to d_c with explicit constants:
rho <= 10 d_c and d_c <= 12 rho.  check_cone_comparison measures the
ratio rho/d_c on seeded random pairs and reports whether both bounds
held on every pair.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Any, Callable, Sequence

import numpy as np

from .errors import DiameterViolationError, NegativeParameterError

#: cone parameters at or below this are treated as the apex exactly
APEX_EPS = 1e-15

#: slack for the diameter-2 contract of the underlying space
DIAMETER_EPS = 1e-9


@dataclass(frozen=True)
class ConePoint:
    """A point (t, x) of the cone over a metric space; apex at t = 0."""

    t: float
    x: Any

    def __post_init__(self) -> None:
        if self.t < 0:
            raise NegativeParameterError(f"cone parameter must be >= 0, got {self.t}")

    @property
    def is_apex(self) -> bool:
        return self.t <= APEX_EPS


def cone_distance(p: ConePoint, q: ConePoint, metric: Callable[[Any, Any], float]) -> float:
    """Additive cone metric |t1-t2| + min(t1,t2) d(x1,x2)."""
    m = min(p.t, q.t)
    if m <= APEX_EPS:
        return abs(p.t - q.t)
    return abs(p.t - q.t) + m * metric(p.x, q.x)


def cone_distance_classic(p: ConePoint, q: ConePoint, metric: Callable[[Any, Any], float]) -> float:
    """Law-of-cosines cone metric sqrt(t1^2 + t2^2 - 2 t1 t2 cos d).

    Requires d(x1,x2) <= 2 so the cosine argument stays in [0, 2].
    """
    d = metric(p.x, q.x)
    if d > 2.0 + DIAMETER_EPS:
        raise DiameterViolationError(f"underlying distance {d} exceeds the diameter-2 contract")
    val = p.t * p.t + q.t * q.t - 2.0 * p.t * q.t * math.cos(d)
    return math.sqrt(max(val, 0.0))


def euclidean_cone_lift(p: ConePoint, embed_x: Sequence[float]) -> np.ndarray:
    """Lift (t, x) to t*embed_x + (1-t)*e0 in R^{m+1}.

    ``embed_x`` is the image of p.x under a base embedding whose image
    contains 0 and has diameter <= 2.  The output coordinates are
    (t*embed_x, 1-t); the apex maps to e0.
    """
    if p.t < 0:
        raise NegativeParameterError(f"cone parameter must be >= 0, got {p.t}")
    v = np.asarray(embed_x, dtype=float)
    return np.append(p.t * v, 1.0 - p.t)


@dataclass(frozen=True)
class ConeComparisonReport:
    """Observed rho/d_c ratio range for the Euclidean lift metric."""

    max_ratio: float
    min_ratio: float
    pairs_tested: int
    bound_10_ok: bool
    bound_12_ok: bool
    seed: int

    def to_dict(self) -> dict:
        return asdict(self)


def _sample_parameter(rng: np.random.Generator) -> float:
    # ~10% exact apices, remainder log-uniform over two decades
    if rng.random() < 0.1:
        return 0.0
    return float(10.0 ** rng.uniform(-2.0, 0.7))


def check_cone_comparison(
    space_sample: Sequence[Sequence[float]],
    pair_count: int,
    seed: int,
    origin_index: int = 0,
) -> ConeComparisonReport:
    """Compare the lift metric rho against d_c on random cone-point pairs.

    ``space_sample`` is a finite subset of R^m presented as coordinate
    vectors; the point at ``origin_index`` is translated to 0 (the lift
    normalization) and the translated sample must have diameter <= 2.
    Reports max and min of rho/d_c and whether rho <= 10 d_c and
    d_c <= 12 rho held on every sampled pair.
    """
    pts = np.asarray(space_sample, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    pts = pts - pts[origin_index]
    diff = pts[:, None, :] - pts[None, :, :]
    dmat = np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))
    if dmat.max() > 2.0 + DIAMETER_EPS:
        raise DiameterViolationError(f"sample diameter {dmat.max()} exceeds 2")

    rng = np.random.default_rng(np.random.SeedSequence(seed))
    n_pts = len(pts)
    max_ratio, min_ratio = -math.inf, math.inf
    tested = 0
    for _ in range(pair_count):
        i, j = int(rng.integers(n_pts)), int(rng.integers(n_pts))
        t1, t2 = _sample_parameter(rng), _sample_parameter(rng)
        dc = abs(t1 - t2) + min(t1, t2) * float(dmat[i, j])
        if dc <= 1e-15:
            continue
        lift1 = euclidean_cone_lift(ConePoint(t1, i), pts[i])
        lift2 = euclidean_cone_lift(ConePoint(t2, j), pts[j])
        rho = float(np.linalg.norm(lift1 - lift2))
        ratio = rho / dc
        max_ratio = max(max_ratio, ratio)
        min_ratio = min(min_ratio, ratio)
        tested += 1
    return ConeComparisonReport(
        max_ratio=max_ratio,
        min_ratio=min_ratio,
        pairs_tested=tested,
        bound_10_ok=bool(max_ratio <= 10.0),
        bound_12_ok=bool(min_ratio >= 1.0 / 12.0),
        seed=seed,
    )
