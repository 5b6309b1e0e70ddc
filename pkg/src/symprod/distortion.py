"""Empirical bi-Lipschitz distortion bracketing for toolkit maps.

estimate_distortion evaluates image-distance / domain-distance ratios on
seeded random pairs and brackets a map's distortion between the smallest
and largest observed ratio, keeping the extremal witness pairs.
adversarial_search then perturbs those witnesses with annealed Gaussian
steps, accepting only moves that worsen the bracket (lower minimum,
higher maximum), so the reported interval can only widen.  Both are
bit-reproducible for a fixed seed.

Maps carry optional certified constants.  Upper constants come from the
pipeline's certified stage products (the cone comparison contributes 10
on the upper side and 1/12 on the lower side where certified), from the
retraction bound 6n+1, or from projection-family certificates (upper
sqrt(q+1), lower 1/M).  A certified upper constant is checked against
every observed ratio; exceeding it raises InvariantViolationError
because it signals a real bug, not noise.

Note the lower ratio of a report may legitimately be 0 for non-injective
maps (retractions collapse distinct sets); strict positivity is an
invariant of embeddings only and is asserted where injectivity is
claimed.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Callable

import numpy as np

from .errors import BadRangeError, DegenerateSampleError, InvariantViolationError
from .pointset import (
    FinitePointSet,
    MetricSampler,
    canonicalize,
    from_values,
    hausdorff_distance,
)
from .pipeline import EmbeddingPipeline, PinnedSet, build_pipeline, circle_map, embed
from .retraction import retract_once
from .tomography import SeparationCertificate, family_distance, project_family

_MIN_DOMAIN_DISTANCE = 1e-12

#: annealing schedule: multiplicative step decay per accepted move and the
#: rejection count that triggers a restart from the best witness
_STEP_DECAY = 0.995
_RESTART_AFTER = 1000


@dataclass(frozen=True)
class MapUnderTest:
    """A map packaged with its domain/image metrics and a perturbation rule."""

    map_id: str
    apply: Callable[[Any], Any]
    domain_distance: Callable[[Any, Any], float]
    image_distance: Callable[[Any, Any], float]
    perturb: Callable[[Any, np.random.Generator, float], Any]
    certified_lower: float | None = None
    certified_upper: float | None = None


@dataclass(frozen=True)
class DistortionReport:
    """Bracketing interval [lower_ratio, upper_ratio] with witness pairs."""

    map_id: str
    samples: int
    lower_ratio: float
    upper_ratio: float
    witness_low: tuple[Any, Any]
    witness_high: tuple[Any, Any]
    certified_upper: float | None
    seed: int

    def __post_init__(self) -> None:
        if not 0.0 <= self.lower_ratio <= self.upper_ratio:
            raise InvariantViolationError(
                f"ratio bracket out of order: [{self.lower_ratio}, {self.upper_ratio}]"
            )
        if self.certified_upper is not None and self.upper_ratio > self.certified_upper * (1 + 1e-9):
            raise InvariantViolationError(
                f"observed ratio {self.upper_ratio} exceeds certified bound {self.certified_upper}"
            )

    def to_dict(self) -> dict:
        def _as_doc(obj):
            return obj.to_doc() if isinstance(obj, FinitePointSet) else repr(obj)

        return {
            "map_id": self.map_id,
            "samples": self.samples,
            "lower_ratio": self.lower_ratio,
            "upper_ratio": self.upper_ratio,
            "witness_low": [_as_doc(w) for w in self.witness_low],
            "witness_high": [_as_doc(w) for w in self.witness_high],
            "certified_upper": self.certified_upper,
            "seed": self.seed,
        }


def estimate_distortion(
    map_under_test: MapUnderTest,
    sampler: MetricSampler,
    count: int,
) -> DistortionReport:
    """Bracket the distortion over ``count`` usable random pairs.

    Pairs closer than 1e-12 in the domain are discarded (0/0 guard) and
    redrawn, up to a bounded number of attempts.  Deterministic for a
    fixed sampler seed.
    """
    if count < 2:
        raise BadRangeError("count must be >= 2")
    lower, upper = math.inf, -math.inf
    wit_low = wit_high = None
    used = 0
    for a, b in sampler.pairs(20 * count):
        dd = map_under_test.domain_distance(a, b)
        if dd <= _MIN_DOMAIN_DISTANCE:
            continue
        ratio = map_under_test.image_distance(map_under_test.apply(a), map_under_test.apply(b)) / dd
        if ratio < lower:
            lower, wit_low = ratio, (a, b)
        if ratio > upper:
            upper, wit_high = ratio, (a, b)
        used += 1
        if used >= count:
            break
    if used == 0:
        raise DegenerateSampleError("no pair with positive domain distance was drawn")
    return DistortionReport(
        map_id=map_under_test.map_id,
        samples=used,
        lower_ratio=lower,
        upper_ratio=upper,
        witness_low=wit_low,
        witness_high=wit_high,
        certified_upper=map_under_test.certified_upper,
        seed=sampler.seed,
    )


def _ratio(map_under_test: MapUnderTest, pair: tuple[Any, Any]) -> float:
    dd = map_under_test.domain_distance(*pair)
    if dd <= _MIN_DOMAIN_DISTANCE:
        return math.nan
    a_img = map_under_test.apply(pair[0])
    b_img = map_under_test.apply(pair[1])
    return map_under_test.image_distance(a_img, b_img) / dd


def _search_witness(
    map_under_test: MapUnderTest,
    pair: tuple[Any, Any],
    start_ratio: float,
    iterations: int,
    step: float,
    rng: np.random.Generator,
    minimize: bool,
) -> tuple[float, tuple[Any, Any]]:
    best_ratio, best_pair = start_ratio, pair
    current = pair
    current_ratio = start_ratio
    step_size = step
    rejections = 0
    for _ in range(iterations):
        side = int(rng.integers(2))
        candidate = list(current)
        candidate[side] = map_under_test.perturb(current[side], rng, step_size)
        candidate = tuple(candidate)
        ratio = _ratio(map_under_test, candidate)
        better = (not math.isnan(ratio)) and (
            ratio < current_ratio if minimize else ratio > current_ratio
        )
        if better:
            current, current_ratio = candidate, ratio
            step_size *= _STEP_DECAY
            rejections = 0
            if (minimize and ratio < best_ratio) or (not minimize and ratio > best_ratio):
                best_ratio, best_pair = ratio, candidate
        else:
            rejections += 1
            if rejections >= _RESTART_AFTER:
                current, current_ratio = best_pair, best_ratio
                step_size = step
                rejections = 0
    return best_ratio, best_pair


def adversarial_search(
    map_under_test: MapUnderTest,
    start: DistortionReport,
    iterations: int,
    step: float,
) -> DistortionReport:
    """Worsen a distortion bracket by local search around the witnesses.

    Runs ``iterations`` Gaussian perturbation steps per witness (first
    minimizing the lower ratio, then maximizing the upper), annealing the
    step by 0.995 per accepted move and restarting from the best witness
    after 1000 consecutive rejections.  The returned bracket contains the
    starting one.  The RNG stream is derived from the start report's seed.
    """
    lower_ratio, wit_low = _search_witness(
        map_under_test,
        start.witness_low,
        start.lower_ratio,
        iterations,
        step,
        np.random.default_rng(np.random.SeedSequence([start.seed, 0])),
        minimize=True,
    )
    upper_ratio, wit_high = _search_witness(
        map_under_test,
        start.witness_high,
        start.upper_ratio,
        iterations,
        step,
        np.random.default_rng(np.random.SeedSequence([start.seed, 1])),
        minimize=False,
    )
    return DistortionReport(
        map_id=start.map_id,
        samples=start.samples,
        lower_ratio=lower_ratio,
        upper_ratio=upper_ratio,
        witness_low=wit_low,
        witness_high=wit_high,
        certified_upper=start.certified_upper,
        seed=start.seed,
    )


def collect_ratio_pairs(
    map_under_test: MapUnderTest, sampler: MetricSampler, count: int
) -> list[tuple[float, float]]:
    """(domain distance, image distance) pairs for external plotting/CSV."""
    rows = []
    for a, b in sampler.pairs(count):
        dd = map_under_test.domain_distance(a, b)
        if dd <= _MIN_DOMAIN_DISTANCE:
            continue
        rows.append(
            (dd, map_under_test.image_distance(map_under_test.apply(a), map_under_test.apply(b)))
        )
    return rows


def certified_bounds(pipeline: EmbeddingPipeline) -> tuple[float | None, float]:
    """(certified lower or None, certified upper) for a built pipeline.

    The lower constant is None whenever any stage's lower constant is
    flagged empirical, which is the case for every capacity >= 2.
    """
    return pipeline.certified_lower, pipeline.certified_upper


# ---------------------------------------------------------------------------
# map constructors


def _perturb_pointset(a: FinitePointSet, rng: np.random.Generator, step: float) -> FinitePointSet:
    spread = max(float(np.ptp(a.array)), 1e-3)
    jitter = rng.normal(0.0, step * spread, a.array.shape)
    return canonicalize(a.array + jitter, a.dim)


def _perturb_pinned(a: FinitePointSet, rng: np.random.Generator, step: float) -> FinitePointSet:
    interior = a.array[1:-1, 0] + rng.normal(0.0, step, max(len(a) - 2, 0))
    return from_values([0.0, 1.0, *np.clip(interior, 0.0, 1.0)])


def identity_map(map_id: str = "identity") -> MapUnderTest:
    return MapUnderTest(
        map_id=map_id,
        apply=lambda a: a,
        domain_distance=hausdorff_distance,
        image_distance=hausdorff_distance,
        perturb=_perturb_pointset,
        certified_lower=1.0,
        certified_upper=1.0,
    )


def scaling_map(factor: float) -> MapUnderTest:
    return MapUnderTest(
        map_id=f"scale-{factor}",
        apply=lambda a: a.scale(factor),
        domain_distance=hausdorff_distance,
        image_distance=hausdorff_distance,
        perturb=_perturb_pointset,
        certified_lower=abs(factor),
        certified_upper=abs(factor),
    )


def embedding_map(pipeline: EmbeddingPipeline) -> MapUnderTest:
    lower, upper = certified_bounds(pipeline)
    return MapUnderTest(
        map_id=f"embed-n{pipeline.n}",
        apply=lambda a: embed(a, pipeline),
        domain_distance=hausdorff_distance,
        image_distance=lambda u, v: float(np.linalg.norm(u - v)),
        perturb=_perturb_pointset,
        certified_lower=lower,
        certified_upper=upper,
    )


def retraction_map(n: int) -> MapUnderTest:
    """retract_once at capacity n; certified upper 6n+1, no lower (not injective)."""
    return MapUnderTest(
        map_id=f"retract-n{n}",
        apply=lambda a: retract_once(a, n),
        domain_distance=hausdorff_distance,
        image_distance=hausdorff_distance,
        perturb=_perturb_pointset,
        certified_lower=None,
        certified_upper=6.0 * n + 1.0,
    )


def tomography_map(cert: SeparationCertificate) -> MapUnderTest:
    """Projection-family map with certified bounds (1/M, sqrt(q+1))."""
    family = cert.family
    return MapUnderTest(
        map_id=f"tomo-q{family.capacity}-d{family.dim}",
        apply=lambda a: project_family(a, family),
        domain_distance=hausdorff_distance,
        image_distance=family_distance,
        perturb=_perturb_pointset,
        certified_lower=1.0 / cert.M,
        certified_upper=math.sqrt(family.capacity + 1),
    )


def circle_pinned_map(n: int) -> MapUnderTest:
    """Circle map on pinned sets; upper 2*pi certified, lower empirical."""
    return MapUnderTest(
        map_id=f"circle-n{n}",
        apply=lambda a: circle_map(PinnedSet(a, n)),
        domain_distance=hausdorff_distance,
        image_distance=hausdorff_distance,
        perturb=_perturb_pinned,
        certified_lower=None,
        certified_upper=2.0 * math.pi,
    )


def sampler_for(map_under_test: MapUnderTest, n: int, seed: int, dim: int = 1) -> MetricSampler:
    """Default sampler matched to a map's domain."""
    pinned = map_under_test.map_id.startswith("circle")
    return MetricSampler(seed=seed, dim=dim, capacity=n, pinned=pinned)
