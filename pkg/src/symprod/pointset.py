"""Finite point sets in R^d, the Hausdorff metric, and seeded samplers.

The basic object is a canonical finite point set: a nonempty tuple of
coordinate vectors, strictly increasing in lexicographic order, with exact
duplicates removed.  Such sets are the elements of the symmetric product
X^(n) (nonempty subsets of X with at most n points) carrying the Hausdorff
metric, and every other module consumes them.

Canonicalization is multiplicity-blind by design: building a set from a
list with repeated points yields the same object as building it without
the repeats.  Only exact duplicates are merged; near-duplicates are kept,
which keeps canonicalization idempotent and order-independent.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterator, Sequence

import numpy as np

from .errors import (
    BadRangeError,
    DimensionMismatchError,
    EmptyInputError,
    NonFiniteCoordinateError,
    SchemaError,
)

Vector = tuple[float, ...]


@dataclass(frozen=True)
class FinitePointSet:
    """A canonical nonempty finite subset of R^dim.

    Do not call the constructor with raw data; use :func:`canonicalize`
    (or :func:`from_values` for dim 1), which sorts, deduplicates and
    validates.  Instances are immutable and hashable.
    """

    dim: int
    points: tuple[Vector, ...]

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self) -> Iterator[Vector]:
        return iter(self.points)

    @cached_property
    def array(self) -> np.ndarray:
        """(len, dim) float64 view of the points; treat as read-only."""
        return np.array(self.points, dtype=float).reshape(len(self.points), self.dim)

    def values(self) -> np.ndarray:
        """1-d coordinate array; only meaningful for dim == 1."""
        if self.dim != 1:
            raise DimensionMismatchError("values() requires a dim-1 point set")
        return self.array[:, 0]

    def min_value(self) -> float:
        if self.dim != 1:
            raise DimensionMismatchError("min_value() requires a dim-1 point set")
        return self.points[0][0]

    def max_value(self) -> float:
        if self.dim != 1:
            raise DimensionMismatchError("max_value() requires a dim-1 point set")
        return self.points[-1][0]

    def translate(self, offset: Sequence[float] | float) -> "FinitePointSet":
        off = np.broadcast_to(np.asarray(offset, dtype=float), (self.dim,))
        return canonicalize(self.array + off, self.dim)

    def scale(self, factor: float) -> "FinitePointSet":
        return canonicalize(self.array * float(factor), self.dim)

    def to_doc(self) -> dict:
        """JSON document form: {"dim": d, "points": [[x1,...,xd], ...]}."""
        return {"dim": self.dim, "points": [list(p) for p in self.points]}


def canonicalize(raw_points: Sequence[Sequence[float]] | np.ndarray, dim: int) -> FinitePointSet:
    """Build a canonical point set from raw vectors.

    Sorts lexicographically (plain numeric order for dim 1), removes exact
    duplicates, and normalizes -0.0 to 0.0 so equal sets have identical
    canonical forms.  Raises EmptyInputError, DimensionMismatchError or
    NonFiniteCoordinateError on bad input.
    """
    if not isinstance(dim, int) or dim < 1:
        raise BadRangeError(f"dim must be a positive integer, got {dim!r}")
    rows = list(raw_points)
    if not rows:
        raise EmptyInputError("a point set must contain at least one point")
    cleaned: list[Vector] = []
    for row in rows:
        vec = tuple(float(c) for c in np.atleast_1d(np.asarray(row, dtype=float)))
        if len(vec) != dim:
            raise DimensionMismatchError(f"point {vec} has length {len(vec)}, expected {dim}")
        if not all(math.isfinite(c) for c in vec):
            raise NonFiniteCoordinateError(f"point {vec} has a non-finite coordinate")
        # +0.0 folds -0.0 into 0.0 so byte-level serialization is unique
        cleaned.append(tuple(c + 0.0 for c in vec))
    cleaned.sort()
    deduped = [cleaned[0]]
    for vec in cleaned[1:]:
        if vec != deduped[-1]:
            deduped.append(vec)
    return FinitePointSet(dim=dim, points=tuple(deduped))


def from_values(values: Sequence[float]) -> FinitePointSet:
    """Convenience constructor for dim-1 sets from a flat list of reals."""
    return canonicalize([[v] for v in values], 1)


def union(a: FinitePointSet, b: FinitePointSet) -> FinitePointSet:
    if a.dim != b.dim:
        raise DimensionMismatchError(f"cannot union dim {a.dim} with dim {b.dim}")
    return canonicalize(list(a.points) + list(b.points), a.dim)


def hausdorff_distance(a: FinitePointSet, b: FinitePointSet) -> float:
    """Hausdorff distance max(sup_a dist(a,B), sup_b dist(b,A)), Euclidean norm.

    Brute force over all point pairs; adequate at toolkit scale (<= 8
    points).  Pairwise differences are rescaled before squaring so the
    distance is 0 exactly when the canonical sets coincide, even at
    subnormal coordinate scales.
    """
    if a.dim != b.dim:
        raise DimensionMismatchError(f"dim {a.dim} vs {b.dim}")
    diff = a.array[:, None, :] - b.array[None, :, :]
    if a.dim == 1:
        dmat = np.abs(diff[..., 0])
    else:
        scale = np.abs(diff).max(axis=-1)
        safe = np.where(scale == 0.0, 1.0, scale)
        unit = diff / safe[..., None]
        dmat = safe * np.sqrt(np.einsum("ijk,ijk->ij", unit, unit))
    return float(max(dmat.min(axis=1).max(), dmat.min(axis=0).max()))


def product_distance(pair1: Sequence, pair2: Sequence, metrics: Sequence[Callable]) -> float:
    """Euclidean product metric sqrt(sum_i d_i(x_i, y_i)^2).

    ``pair1`` and ``pair2`` are tuples of component points; ``metrics``
    supplies one distance function per component.
    """
    if not (len(pair1) == len(pair2) == len(metrics)):
        raise DimensionMismatchError("pair1, pair2 and metrics must have equal length")
    return math.sqrt(sum(m(x, y) ** 2 for m, x, y in zip(metrics, pair1, pair2)))


def pointset_from_doc(doc: dict) -> FinitePointSet:
    """Parse the JSON document form, raising SchemaError on malformed input."""
    if not isinstance(doc, dict) or "dim" not in doc or "points" not in doc:
        raise SchemaError("point-set document must be {'dim': d, 'points': [[...], ...]}")
    dim = doc["dim"]
    pts = doc["points"]
    if not isinstance(dim, int) or not isinstance(pts, list):
        raise SchemaError("'dim' must be an integer and 'points' a list")
    try:
        return canonicalize(pts, dim)
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"malformed point list: {exc}") from exc


@dataclass(frozen=True)
class MetricSampler:
    """Seeded generator of canonical point sets and pairs.

    ``low``/``high`` bound the box the set centers are drawn from; set
    diameters are stratified over ``10**scale_decades`` so that samples
    cover mixed scales (distortion extremes of cone-type maps live near
    the apex and at small diameters).  ``pinned`` restricts dim-1 samples
    to subsets of [0,1] containing both endpoints.

    Identical seeds produce identical streams; every generator method
    creates a fresh RNG from the stored seed.
    """

    seed: int
    dim: int
    capacity: int
    low: float = -1.0
    high: float = 1.0
    pinned: bool = False
    scale_decades: tuple[float, float] = (-2.0, 2.0)

    def __post_init__(self) -> None:
        if self.capacity < 1:
            raise BadRangeError("capacity must be >= 1")
        if self.dim < 1:
            raise BadRangeError("dim must be >= 1")
        if self.pinned and (self.dim != 1 or self.capacity < 2):
            raise BadRangeError("pinned sampling requires dim 1 and capacity >= 2")

    def rng(self) -> np.random.Generator:
        return np.random.default_rng(np.random.SeedSequence(self.seed))

    def sets(self, count: int) -> Iterator[FinitePointSet]:
        rng = self.rng()
        for _ in range(count):
            yield self._one(rng)

    def pairs(self, count: int) -> Iterator[tuple[FinitePointSet, FinitePointSet]]:
        rng = self.rng()
        for _ in range(count):
            yield self._pair(rng)

    def _one(self, rng: np.random.Generator, cardinality: int | None = None) -> FinitePointSet:
        if self.pinned:
            return self._one_pinned(rng, cardinality)
        k = cardinality or int(rng.integers(1, self.capacity + 1))
        scale = 10.0 ** rng.uniform(*self.scale_decades)
        center = rng.uniform(self.low, self.high, self.dim)
        pts = center + scale * rng.uniform(-0.5, 0.5, (k, self.dim))
        return canonicalize(pts, self.dim)

    def _one_pinned(self, rng: np.random.Generator, cardinality: int | None = None) -> FinitePointSet:
        k = cardinality or int(rng.integers(2, self.capacity + 1))
        interior = rng.uniform(0.0, 1.0, max(k - 2, 0))
        return from_values([0.0, 1.0, *interior])

    def _pair(self, rng: np.random.Generator) -> tuple[FinitePointSet, FinitePointSet]:
        first = self._one(rng)
        if rng.integers(2) == 0:
            return first, self._one(rng)
        # close pair: jitter the first set at a fraction of its scale
        spread = max(float(np.ptp(first.array)), 1e-3)
        sigma = spread * 10.0 ** rng.uniform(-3.0, 0.0)
        jitter = rng.normal(0.0, sigma, first.array.shape)
        if self.pinned:
            # endpoints stay pinned; only interior points move
            interior = first.array[1:-1, 0] + jitter[1:-1, 0]
            return first, from_values([0.0, 1.0, *np.clip(interior, 0.0, 1.0)])
        return first, canonicalize(first.array + jitter, self.dim)
