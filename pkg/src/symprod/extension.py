"""Lipschitz decomposition of set-valued maps and sphere-to-ball extension.

A :class:`SampledMap` is an L-Lipschitz map from a finite metric sample
(domain points with the Euclidean oracle) into card-<=n subsets of R,
validated against its declared constant at construction.

decompose_map splits such a map f whose value at a base point x0 has
diameter above 3*L*D*(n-1) (D the domain diameter) into two maps with
values of cardinality <= n-1 whose pointwise union recovers f.  The
split grows a cluster E inside f(x0) that cannot absorb any further
point without violating diam E < 3*L*D*(|E|-1); at the fixpoint every
remaining point of f(x0) is more than 3*L*D away from E, so the L*D
neighborhoods G of E and H of the rest are disjoint and every value
f(x), being within Hausdorff distance L*D of f(x0), splits cleanly as
(f(x) & G) union (f(x) & H).  Singletons are admitted into the cluster
family so a maximal cluster always exists.

radial_extension extends a map on the unit sphere to the ball by
f~(r*x) = r*f(x) (after translating a value of f(x0) to 0), exact on the
boundary shell.  If R is the largest image magnitude and L_b the
boundary constant, the extension is sqrt(R^2 + L_b^2)-Lipschitz on the
whole ball: with r1 >= r2,

    d_H(r1 f(x), r2 f(y)) <= |r1-r2|*R + r2*L_b*|x-y|,

while |r1 x - r2 y|^2 = (r1-r2)^2 + r1 r2 |x-y|^2, and Cauchy-Schwarz
bounds the ratio.  ball_extension recurses: values of large diameter
are decomposed, both halves extended at capacity n-1, reunited, and
retracted from capacity 2n-2 back to n (the retraction fixes card-<=n
sets pointwise, so boundary agreement stays exact); small-diameter
values take the radial route.

Measured grid constants are reported over a deterministic pair
protocol: all pairs within each spherical shell, all pairs along each
ray through the grid, and a seeded batch of random cross pairs.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    CapacityExceededError,
    DecompositionError,
    DimensionMismatchError,
    InvariantViolationError,
    PreconditionError,
)
from .pointset import FinitePointSet, canonicalize, from_values, hausdorff_distance, union
from .retraction import retract_to

#: exhaustive Lipschitz validation up to this many domain points
_VALIDATE_EXHAUSTIVE = 1024

#: sampled validation / cross-pair budget for large grids
_VALIDATE_SAMPLES = 200_000

_REL_SLACK = 1e-9


# ---------------------------------------------------------------------------
# batched Hausdorff distances for families of dim-1 sets


def _pad_values(images: Sequence[FinitePointSet]) -> np.ndarray:
    """(N, w) array of image coordinates, each row padded by repetition.

    Padding with an existing point leaves Hausdorff distances unchanged.
    Only dim-1 images are supported here.
    """
    if any(im.dim != 1 for im in images):
        raise DimensionMismatchError("batched Hausdorff supports dim-1 images only")
    width = max(len(im) for im in images)
    out = np.empty((len(images), width))
    for i, im in enumerate(images):
        vals = im.values()
        out[i, : len(vals)] = vals
        out[i, len(vals):] = vals[-1]
    return out


def _batch_hausdorff(padded: np.ndarray, idx_a: np.ndarray, idx_b: np.ndarray) -> np.ndarray:
    diff = np.abs(padded[idx_a][:, :, None] - padded[idx_b][:, None, :])
    return np.maximum(diff.min(axis=2).max(axis=1), diff.min(axis=1).max(axis=1))


def _chunked_pairs(idx_a: np.ndarray, idx_b: np.ndarray, chunk: int = 200_000):
    for start in range(0, len(idx_a), chunk):
        yield idx_a[start : start + chunk], idx_b[start : start + chunk]


# ---------------------------------------------------------------------------
# sampled maps


@dataclass(frozen=True, eq=False)
class SampledMap:
    """A finite table of (domain point, image set) pairs with a declared
    Lipschitz constant L and domain diameter D."""

    domain_points: np.ndarray
    images: tuple[FinitePointSet, ...]
    L: float
    D: float

    def __len__(self) -> int:
        return len(self.images)

    def image_dim(self) -> int:
        return self.images[0].dim


def _domain_diameter(points: np.ndarray) -> float:
    best = 0.0
    for start in range(0, len(points), 512):
        block = points[start : start + 512]
        diff = block[:, None, :] - points[None, :, :]
        best = max(best, float(np.sqrt(np.einsum("ijk,ijk->ij", diff, diff)).max()))
    return best


def _max_ratio(points: np.ndarray, padded: np.ndarray, idx_a, idx_b) -> float:
    worst = 0.0
    for ia, ib in _chunked_pairs(idx_a, idx_b):
        dists = np.linalg.norm(points[ia] - points[ib], axis=1)
        keep = dists > 1e-12
        if not keep.any():
            continue
        hvals = _batch_hausdorff(padded, ia[keep], ib[keep])
        worst = max(worst, float((hvals / dists[keep]).max()))
    return worst


def make_sampled_map(
    domain_points: Sequence[Sequence[float]] | np.ndarray,
    images: Sequence[FinitePointSet],
    L: float,
    D: float | None = None,
    validate: bool = True,
    seed: int = 0,
) -> SampledMap:
    """Build and (by default) validate a sampled map.

    Validation checks d_H(images[i], images[j]) <= L * |p_i - p_j| over
    all pairs when the domain is small, or over a seeded random pair
    sample for large grids.  Raises InvariantViolationError when the
    declared constant fails (beyond 1e-9 relative slack).
    """
    pts = np.asarray(domain_points, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    if len(pts) != len(images):
        raise DimensionMismatchError("domain and image tables differ in length")
    if len({im.dim for im in images}) != 1:
        raise DimensionMismatchError("all image sets must share one dimension")
    diameter = _domain_diameter(pts) if D is None else float(D)
    smap = SampledMap(domain_points=pts, images=tuple(images), L=float(L), D=diameter)
    if validate:
        _validate_lipschitz(smap, seed)
    return smap


def _validation_indices(count: int, seed: int) -> tuple[np.ndarray, np.ndarray]:
    if count <= _VALIDATE_EXHAUSTIVE:
        return np.triu_indices(count, k=1)
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    idx_a = rng.integers(count, size=_VALIDATE_SAMPLES)
    idx_b = rng.integers(count, size=_VALIDATE_SAMPLES)
    return idx_a, idx_b


def _validate_lipschitz(smap: SampledMap, seed: int) -> None:
    idx_a, idx_b = _validation_indices(len(smap), seed)
    bound = smap.L * (1.0 + _REL_SLACK)
    if smap.image_dim() == 1:
        padded = _pad_values(smap.images)
        for ia, ib in _chunked_pairs(idx_a, idx_b):
            dists = np.linalg.norm(smap.domain_points[ia] - smap.domain_points[ib], axis=1)
            hvals = _batch_hausdorff(padded, ia, ib)
            bad = hvals > bound * dists + 1e-12
            if bad.any():
                where = int(np.flatnonzero(bad)[0])
                raise InvariantViolationError(
                    f"declared constant {smap.L} violated: pair ({ia[where]}, {ib[where]}) "
                    f"has image distance {hvals[where]} over domain distance {dists[where]}"
                )
        return
    for i, j in zip(idx_a, idx_b):
        dist = float(np.linalg.norm(smap.domain_points[i] - smap.domain_points[j]))
        h = hausdorff_distance(smap.images[i], smap.images[j])
        if h > bound * dist + 1e-12:
            raise InvariantViolationError(
                f"declared constant {smap.L} violated at pair ({i}, {j})"
            )


# ---------------------------------------------------------------------------
# decomposition


def _set_distance(value: float, anchor: Iterable[float]) -> float:
    return min(abs(value - a) for a in anchor)


def decompose_map(f: SampledMap, n: int, x0_index: int = 0) -> tuple[SampledMap, SampledMap]:
    """Split f into g, h with card-<=(n-1) values and g(x) + h(x) = f(x).

    Requires diam f(x0) > 3*L*D*(n-1) and image cardinalities <= n.
    Both returned maps carry the same declared constant L and are
    validated; failures of the construction (empty side, union mismatch,
    Lipschitz violation) raise DecompositionError.
    """
    if any(len(im) > n for im in f.images):
        raise CapacityExceededError(f"an image exceeds cardinality {n}")
    if f.image_dim() != 1:
        raise DimensionMismatchError("decompose_map expects dim-1 image sets")
    base = list(f.images[x0_index].values())
    spread = max(base) - min(base)
    threshold = 3.0 * f.L * f.D * (n - 1)
    if not spread > threshold:
        raise PreconditionError(
            f"diam f(x0) = {spread} must exceed 3*L*D*(n-1) = {threshold}"
        )

    # grow a maximal cluster from the point nearest the origin
    seed_pt = min(base, key=lambda v: (abs(v), v))
    cluster = [seed_pt]
    margin = 3.0 * f.L * f.D
    changed = True
    while changed:
        changed = False
        for y in base:
            if y in cluster:
                continue
            grown = cluster + [y]
            if max(grown) - min(grown) < margin * (len(grown) - 1):
                cluster.append(y)
                changed = True
    rest = [y for y in base if y not in cluster]
    if not rest:
        raise DecompositionError("cluster swallowed f(x0); diameter hypothesis too weak")
    if min(_set_distance(y, cluster) for y in rest) <= margin:
        raise DecompositionError("cluster fixpoint violates the separation dichotomy")

    reach = f.L * f.D
    g_images, h_images = [], []
    for idx, im in enumerate(f.images):
        vals = im.values()
        g_vals = [v for v in vals if _set_distance(v, cluster) <= reach]
        h_vals = [v for v in vals if _set_distance(v, rest) <= reach]
        if not g_vals or not h_vals:
            raise DecompositionError(f"empty split at domain index {idx}")
        if len(g_vals) > n - 1 or len(h_vals) > n - 1:
            raise DecompositionError(f"split cardinality exceeds {n - 1} at index {idx}")
        if set(g_vals) | set(h_vals) != set(vals):
            raise DecompositionError(f"union does not recover f at index {idx}")
        g_images.append(from_values(g_vals))
        h_images.append(from_values(h_vals))
    try:
        g = make_sampled_map(f.domain_points, g_images, f.L, D=f.D)
        h = make_sampled_map(f.domain_points, h_images, f.L, D=f.D)
    except InvariantViolationError as exc:
        raise DecompositionError(f"split failed Lipschitz validation: {exc}") from exc
    return g, h


# ---------------------------------------------------------------------------
# grids


def circle_grid(angular_resolution: float = math.pi / 64.0) -> np.ndarray:
    """Unit-circle grid with the given angular spacing (N = 2*pi / spacing)."""
    count = int(round(2.0 * math.pi / angular_resolution))
    theta = 2.0 * math.pi * np.arange(count) / count
    return np.stack([np.cos(theta), np.sin(theta)], axis=1)


@dataclass(frozen=True, eq=False)
class BallGrid:
    """Radial grid {r_i * x_j} over a sphere grid, with the origin at index 0."""

    sphere_points: np.ndarray
    radii: np.ndarray

    @property
    def points(self) -> np.ndarray:
        shells = [np.zeros((1, self.sphere_points.shape[1]))]
        for r in self.radii[1:]:
            shells.append(r * self.sphere_points)
        return np.concatenate(shells, axis=0)

    def index(self, shell: int, ray: int) -> int:
        """Flat index of radius shell >= 1 and sphere point ray."""
        return 1 + (shell - 1) * len(self.sphere_points) + ray

    @property
    def shells(self) -> int:
        return len(self.radii) - 1


def make_ball_grid(sphere_points: np.ndarray, radial_steps: int = 64) -> BallGrid:
    radii = np.linspace(0.0, 1.0, radial_steps + 1)
    return BallGrid(sphere_points=np.asarray(sphere_points, dtype=float), radii=radii)


# ---------------------------------------------------------------------------
# measured grid constants


def _protocol_pairs(grid: BallGrid, cross_pairs: int, seed: int):
    """Deterministic pair batches: per-shell, per-ray, and random cross."""
    n_sphere = len(grid.sphere_points)
    for shell in range(1, grid.shells + 1):
        local_a, local_b = np.triu_indices(n_sphere, k=1)
        base = 1 + (shell - 1) * n_sphere
        yield base + local_a, base + local_b
    total = 1 + grid.shells * n_sphere
    for ray in range(n_sphere):
        ray_idx = np.array([0] + [grid.index(s, ray) for s in range(1, grid.shells + 1)])
        la, lb = np.triu_indices(len(ray_idx), k=1)
        yield ray_idx[la], ray_idx[lb]
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    yield rng.integers(total, size=cross_pairs), rng.integers(total, size=cross_pairs)


def measured_grid_constant(
    smap: SampledMap, grid: BallGrid, cross_pairs: int = _VALIDATE_SAMPLES, seed: int = 0
) -> float:
    """Max observed d_H / distance ratio over the deterministic pair protocol."""
    padded = _pad_values(smap.images)
    pts = smap.domain_points
    worst = 0.0
    for idx_a, idx_b in _protocol_pairs(grid, cross_pairs, seed):
        worst = max(worst, _max_ratio(pts, padded, idx_a, idx_b))
    return worst


# ---------------------------------------------------------------------------
# radial extension


@dataclass(frozen=True, eq=False)
class RadialExtensionResult:
    """Radial extension of a sphere map, with its measured and certified constants."""

    map: SampledMap
    grid: BallGrid
    translation: float
    boundary_constant: float
    radial_constant: float
    lipschitz_bound: float
    measured_constant: float
    seed: int


def _check_unit_sphere(points: np.ndarray) -> None:
    norms = np.linalg.norm(points, axis=1)
    if np.any(np.abs(norms - 1.0) > 1e-9):
        raise PreconditionError("domain points must lie on the unit sphere")


def _boundary_constant(f: SampledMap) -> float:
    padded = _pad_values(f.images)
    idx_a, idx_b = np.triu_indices(len(f), k=1)
    return _max_ratio(f.domain_points, padded, idx_a, idx_b)


def radial_extension(
    f: SampledMap,
    n: int,
    radial_steps: int = 64,
    x0_index: int = 0,
    cross_pairs: int = _VALIDATE_SAMPLES,
    seed: int = 0,
) -> RadialExtensionResult:
    """Extend a small-diameter sphere map to the ball by f~(r x) = r f(x).

    Requires diam f(x0) <= 6*L*(n-1) once a point of f(x0) is translated
    to the origin (the point nearest 0 is used; the translation is undone
    in the output).  The boundary shell copies f exactly.  The returned
    map's declared constant is the provable sqrt(R^2 + L_b^2) bound with
    R the largest translated image magnitude and L_b the measured
    boundary constant.
    """
    _check_unit_sphere(f.domain_points)
    if f.image_dim() != 1:
        raise DimensionMismatchError("radial extension expects dim-1 image sets")
    base_vals = f.images[x0_index].values()
    y0 = float(min(base_vals, key=lambda v: (abs(v), v)))
    spread = float(base_vals.max() - base_vals.min())
    limit = 6.0 * f.L * (n - 1)
    if spread > limit * (1.0 + _REL_SLACK) + 1e-12:
        raise PreconditionError(
            f"diam f(x0) = {spread} exceeds 6*L*(n-1) = {limit}; decompose first"
        )

    grid = make_ball_grid(f.domain_points, radial_steps)
    translated = [im.values() - y0 for im in f.images]
    radial_constant = max(float(np.abs(v).max()) for v in translated)

    images: list[FinitePointSet] = [from_values([y0])]
    for shell in range(1, grid.shells + 1):
        r = grid.radii[shell]
        if shell == grid.shells:
            images.extend(f.images)  # boundary agreement is exact by construction
        else:
            images.extend(from_values(r * v + y0) for v in translated)

    boundary_constant = _boundary_constant(f)
    bound = math.hypot(radial_constant, boundary_constant)
    smap = make_sampled_map(grid.points, images, L=bound, D=2.0, seed=seed)
    measured = measured_grid_constant(smap, grid, cross_pairs, seed)
    return RadialExtensionResult(
        map=smap,
        grid=grid,
        translation=y0,
        boundary_constant=boundary_constant,
        radial_constant=radial_constant,
        lipschitz_bound=bound,
        measured_constant=measured,
        seed=seed,
    )


def sphere_constant(result: RadialExtensionResult | "BallExtensionResult", shell: int) -> float:
    """Max d_H ratio within one shell, against unit-sphere parameter distance.

    Scales as r * (boundary constant) for the radial construction.
    """
    grid, smap = result.grid, result.map
    n_sphere = len(grid.sphere_points)
    idx_a, idx_b = np.triu_indices(n_sphere, k=1)
    base = 1 + (shell - 1) * n_sphere
    padded = _pad_values(smap.images[base : base + n_sphere])
    return _max_ratio(grid.sphere_points, padded, idx_a, idx_b)


def ray_constant(result: RadialExtensionResult | "BallExtensionResult", ray: int) -> float:
    """Max d_H ratio along one ray (including the origin)."""
    grid, smap = result.grid, result.map
    indices = [0] + [grid.index(s, ray) for s in range(1, grid.shells + 1)]
    padded = _pad_values([smap.images[i] for i in indices])
    pts = smap.domain_points[indices]
    idx_a, idx_b = np.triu_indices(len(indices), k=1)
    return _max_ratio(pts, padded, idx_a, idx_b)


# ---------------------------------------------------------------------------
# ball extension


@dataclass(frozen=True, eq=False)
class BallExtensionResult:
    """Recursive sphere-to-ball extension with constant bookkeeping."""

    map: SampledMap
    grid: BallGrid
    case: str
    lipschitz_bound: float
    measured_constant: float
    factor_over_L: float
    boundary_exact: bool
    seed: int


def _boundary_matches(smap: SampledMap, grid: BallGrid, f: SampledMap) -> bool:
    n_sphere = len(grid.sphere_points)
    base = 1 + (grid.shells - 1) * n_sphere
    return all(smap.images[base + j].points == f.images[j].points for j in range(n_sphere))


def ball_extension(
    f: SampledMap,
    n: int,
    radial_steps: int = 64,
    x0_index: int = 0,
    cross_pairs: int = _VALIDATE_SAMPLES,
    seed: int = 0,
) -> BallExtensionResult:
    """Extend an L-Lipschitz sphere map into card-<=n sets over the ball.

    Values of diameter above 6*L*(n-1) at the base point are decomposed,
    both halves extended at capacity n-1, reunited pointwise and
    retracted from capacity 2n-2 down to n (a no-op on card-<=n sets, so
    the boundary stays exact).  Otherwise the radial construction
    applies directly.  The reported bound multiplies the recursive
    bounds by the certified retraction factor prod(6c+1).
    """
    _check_unit_sphere(f.domain_points)
    base_vals = f.images[x0_index].values()
    spread = float(base_vals.max() - base_vals.min())
    if spread > 6.0 * f.L * (n - 1):
        g, h = decompose_map(f, n, x0_index)
        res_g = ball_extension(g, n - 1, radial_steps, x0_index, cross_pairs, seed)
        res_h = ball_extension(h, n - 1, radial_steps, x0_index, cross_pairs, seed)
        grid = res_g.grid
        merged = [union(a, b) for a, b in zip(res_g.map.images, res_h.map.images)]
        retract_factor = 1.0
        if 2 * n - 2 > n:
            merged = [retract_to(im, 2 * n - 2, n) for im in merged]
            for cap in range(n + 1, 2 * n - 1):
                retract_factor *= 6.0 * cap + 1.0
        bound = retract_factor * max(res_g.lipschitz_bound, res_h.lipschitz_bound)
        smap = make_sampled_map(grid.points, merged, L=bound, D=2.0, seed=seed)
        measured = measured_grid_constant(smap, grid, cross_pairs, seed)
        return BallExtensionResult(
            map=smap,
            grid=grid,
            case="decompose",
            lipschitz_bound=bound,
            measured_constant=measured,
            factor_over_L=bound / f.L,
            boundary_exact=_boundary_matches(smap, grid, f),
            seed=seed,
        )
    radial = radial_extension(f, n, radial_steps, x0_index, cross_pairs, seed)
    return BallExtensionResult(
        map=radial.map,
        grid=radial.grid,
        case="radial",
        lipschitz_bound=radial.lipschitz_bound,
        measured_constant=radial.measured_constant,
        factor_over_L=radial.lipschitz_bound / f.L,
        boundary_exact=_boundary_matches(radial.map, radial.grid, f),
        seed=seed,
    )
