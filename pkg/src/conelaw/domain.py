"""Open orthant cones, constrained subregions and seeded samplers over them.

Points are handled as numpy arrays of shape ``(n, d)``; a single point may be
passed as a length-``d`` sequence wherever a batch is accepted.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from conelaw.errors import ContractError, RegionTooThinError

# Points drawn per sub-seeded batch. Fixed so that a larger request reproduces
# a smaller one as its prefix, whatever the caller's chunking.
BATCH_SIZE = 8192
MIN_ACCEPTANCE = 1e-3
# Share of closed-interval draws placed on each endpoint.
ENDPOINT_WEIGHT = 0.05

Constraint = Callable[[np.ndarray], np.ndarray]


def as_points(p, dimension: int) -> np.ndarray:
    arr = np.asarray(p, dtype=float)
    if arr.ndim == 1:
        arr = arr[None, :]
    if arr.ndim != 2 or arr.shape[1] != dimension:
        raise ContractError(
            f"expected points of dimension {dimension}, got array of shape {np.shape(p)}"
        )
    return arr


@dataclass(frozen=True)
class OrthantCone:
    """Open orthant ``{x : sign_i * x_i > 0 for all i}``."""

    dimension: int
    axis_signs: tuple[int, ...] = ()

    def __post_init__(self):
        if self.dimension < 1:
            raise ContractError("cone dimension must be positive")
        signs = tuple(int(s) for s in self.axis_signs) or (1,) * self.dimension
        if len(signs) != self.dimension or any(s not in (1, -1) for s in signs):
            raise ContractError(f"axis_signs must be {self.dimension} entries of +1/-1")
        object.__setattr__(self, "axis_signs", signs)

    @property
    def signs(self) -> np.ndarray:
        return np.asarray(self.axis_signs, dtype=float)

    def contains(self, points: np.ndarray) -> np.ndarray:
        pts = as_points(points, self.dimension)
        with np.errstate(invalid="ignore"):
            return np.all(pts * self.signs > 0, axis=1) & np.all(np.isfinite(pts), axis=1)


@dataclass(frozen=True)
class Region:
    """An orthant cone, optionally cut down by a constraint predicate.

    ``constraint`` takes an ``(n, d)`` array of cone members and returns a
    boolean mask. ``constraint_name`` is the tag written to reports.
    """

    cone: OrthantCone
    constraint: Optional[Constraint] = field(default=None, compare=False)
    additively_closed: bool = True
    constraint_name: Optional[str] = None

    @property
    def dimension(self) -> int:
        return self.cone.dimension

    @property
    def is_cone(self) -> bool:
        return self.constraint is None

    # The theorem is stated for open cones; constrained subregions of a cone are
    # still treated as admissible (the black-hole region is used this way).
    satisfies_assumption_a = True

    def contains(self, points) -> np.ndarray:
        pts = as_points(points, self.dimension)
        inside = self.cone.contains(pts)
        if self.constraint is not None and inside.any():
            extra = np.zeros(len(pts), dtype=bool)
            extra[inside] = np.asarray(self.constraint(pts[inside]), dtype=bool)
            inside = extra
        return inside

    def describe(self) -> dict:
        return {
            "dimension": self.dimension,
            "axis_signs": list(self.cone.axis_signs),
            "constraint": self.constraint_name,
        }

    def draw(self, rng: np.random.Generator, n: int, cfg: "SampleConfig") -> np.ndarray:
        r_min, r_max = cfg.coord_range
        shape = (n, self.dimension)
        if cfg.scale_distribution == "LogUniform":
            mags = np.exp(rng.uniform(np.log(r_min), np.log(r_max), size=shape))
        else:
            mags = rng.uniform(r_min, r_max, size=shape)
        return mags * self.cone.signs


@dataclass(frozen=True)
class ClosedInterval:
    """The closed interval [lo, hi] in one dimension.

    Not a cone; exists for fixtures that show why open domains are needed.
    """

    lo: float = 0.0
    hi: float = 1.0
    dimension: int = 1
    additively_closed: bool = False
    is_cone = False
    satisfies_assumption_a = False

    def contains(self, points) -> np.ndarray:
        pts = as_points(points, 1)[:, 0]
        return (pts >= self.lo) & (pts <= self.hi)

    def describe(self) -> dict:
        return {"dimension": 1, "axis_signs": None, "constraint": f"closed[{self.lo},{self.hi}]"}

    def draw(self, rng: np.random.Generator, n: int, cfg: "SampleConfig") -> np.ndarray:
        # Endpoints have probability zero under a uniform law but are members
        # here, and they are where the interesting behaviour sits.
        pts = rng.uniform(self.lo, self.hi, size=(n, 1))
        pick = rng.uniform(size=n)
        pts[pick < ENDPOINT_WEIGHT, 0] = self.lo
        pts[pick > 1 - ENDPOINT_WEIGHT, 0] = self.hi
        return pts


SCALE_DISTRIBUTIONS = ("LogUniform", "Uniform")


@dataclass(frozen=True)
class SampleConfig:
    seed: int = 0
    count: int = 10_000
    coord_range: tuple[float, float] = (1e-3, 1e3)
    scale_distribution: str = "LogUniform"

    def __post_init__(self):
        r_min, r_max = (float(v) for v in self.coord_range)
        if not (0 < r_min < r_max < np.inf):
            raise ContractError(f"coord_range must satisfy 0 < r_min < r_max, got {self.coord_range}")
        if self.count < 0:
            raise ContractError("count must be nonnegative")
        if not 0 <= self.seed < 2**64:
            raise ContractError("seed must be a 64-bit unsigned integer")
        if self.scale_distribution not in SCALE_DISTRIBUTIONS:
            raise ContractError(f"scale_distribution must be one of {SCALE_DISTRIBUTIONS}")
        object.__setattr__(self, "coord_range", (r_min, r_max))

    def with_count(self, count: int) -> "SampleConfig":
        return SampleConfig(self.seed, count, self.coord_range, self.scale_distribution)

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "count": self.count,
            "coord_range": list(self.coord_range),
            "scale_distribution": self.scale_distribution,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SampleConfig":
        return cls(int(d["seed"]), int(d["count"]), tuple(d["coord_range"]), d["scale_distribution"])


def batch_rng(seed: int, batch: int, stream: int = 0) -> np.random.Generator:
    """Independent generator for one batch; lets batches be drawn in any order."""
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(stream, batch)))


def membership(region, p) -> bool:
    """Whether the single point ``p`` lies in ``region`` (strict inequalities)."""
    arr = np.asarray(p, dtype=float)
    if arr.ndim != 1 or arr.shape[0] != region.dimension:
        raise ContractError(
            f"point has dimension {arr.shape[-1] if arr.ndim else 0}, region has {region.dimension}"
        )
    return bool(region.contains(arr)[0])


def _rejection_loop(cfg: SampleConfig, count: int, stream: int, draw_batch) -> list:
    """Pull accepted rows from successive batches until ``count`` are collected."""
    chunks, total, batch = [], 0, 0
    while total < count:
        accepted, proposed = draw_batch(batch_rng(cfg.seed, batch, stream))
        if batch == 0 and len(accepted) < MIN_ACCEPTANCE * proposed:
            raise RegionTooThinError(
                f"acceptance rate {len(accepted) / proposed:.2e} below {MIN_ACCEPTANCE:g} "
                f"within coord_range {cfg.coord_range}"
            )
        chunks.append(accepted)
        total += len(accepted)
        batch += 1
    return chunks


def sample_region(region, cfg: SampleConfig, stream: int = 0) -> np.ndarray:
    """Return ``cfg.count`` members of ``region`` as an ``(n, d)`` array.

    ``stream`` selects an independent sequence for the same seed, so callers
    needing several unrelated point sets can draw them from one config.
    """
    if cfg.count == 0:
        return np.empty((0, region.dimension))

    def draw_batch(rng):
        pts = region.draw(rng, BATCH_SIZE, cfg)
        return pts[region.contains(pts)], BATCH_SIZE

    chunks = _rejection_loop(cfg, cfg.count, stream, draw_batch)
    return np.concatenate(chunks)[: cfg.count]


def sample_pairs_additive(region, cfg: SampleConfig, stream: int = 1) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(x1, x2)`` arrays of ``cfg.count`` pairs with x1, x2 and x1+x2 in the region.

    Membership of the sum is always verified, even for regions declared
    additively closed.
    """
    d = region.dimension
    if cfg.count == 0:
        empty = np.empty((0, d))
        return empty, empty.copy()

    def draw_batch(rng):
        x1 = region.draw(rng, BATCH_SIZE, cfg)
        x2 = region.draw(rng, BATCH_SIZE, cfg)
        ok = region.contains(x1) & region.contains(x2) & region.contains(x1 + x2)
        return np.stack([x1[ok], x2[ok]], axis=1), BATCH_SIZE

    pairs = np.concatenate(_rejection_loop(cfg, cfg.count, stream, draw_batch))[: cfg.count]
    return pairs[:, 0, :], pairs[:, 1, :]


def kerr_newman_constraint(Q: float) -> Constraint:
    """Mask for ``M^2 > (J/M)^2 + Q^2`` on points ``(M, J)`` with ``M > 0``."""

    def physical(pts: np.ndarray) -> np.ndarray:
        M, J = pts[:, 0], pts[:, 1]
        return M**4 - J**2 - Q**2 * M**2 > 0

    return physical


def kerr_newman_region(Q: float = 0.0) -> Region:
    # Closure under addition is only established for Q = 0; pair samplers
    # filter sums in every case anyway.
    return Region(
        OrthantCone(2, (1, 1)),
        kerr_newman_constraint(Q),
        additively_closed=(Q == 0),
        constraint_name=f"kerr-newman(Q={Q!r})",
    )


def orthant(dimension: int, signs: Sequence[int] = ()) -> Region:
    return Region(OrthantCone(dimension, tuple(signs)))
