"""Sampling checks for homogeneity, superadditivity, concavity and the apex liminf.

Every check compares a slack (``margin``, nonnegative when the inequality
holds) against ``tol * scale`` where ``scale = 1 + max |values involved|``.
A check is Falsified as soon as one sample misses by more than that; the
witness kept is the sample with the largest violation relative to its scale.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from conelaw.cf import convergents
from conelaw.domain import Region, SampleConfig, as_points, batch_rng, sample_pairs_additive, sample_region
from conelaw.errors import ContractError
from conelaw.fields import ScalarField
from conelaw.verdicts import LiminfClass, LiminfEstimate, Status, Verdict, Witness

DEFAULT_TOL = 1e-9
DEFAULT_H_LAMBDAS = (0.1, 0.5, 2.0, 3.0, 10.0)
DEFAULT_CC_LAMBDAS = (0.1, 0.25, 0.5, 0.75, 0.9)
DEFAULT_RADII = tuple(10.0**-k for k in range(1, 7))
FD_STEP = 1e-5
HESSIAN_FD_STEP = 1e-4
DET_TOL = 1e-6
MAX_SKIP_FRACTION = 0.5
# Strict superadditivity: share of sampled pairs moved onto a common ray.
RAY_EVERY = 8

# Liminf trend classification, applied to the last LIMINF_TAIL shell infima.
LIMINF_TAIL = 3
DIVERGENCE_FLOOR = -1.0
DECREMENT_RATIO = 0.5

EPS = np.finfo(float).eps


def _abs_finite(a: np.ndarray) -> np.ndarray:
    a = np.abs(np.asarray(a, dtype=float))
    return np.where(np.isfinite(a), a, 0.0)


def _scale(*arrays) -> np.ndarray:
    return 1.0 + np.max(np.stack([_abs_finite(a) for a in arrays]), axis=0)


def _lower_margin(lhs: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """``lhs - rhs`` with a -inf right-hand side counting as satisfied."""
    with np.errstate(invalid="ignore"):
        m = lhs - rhs
    return np.where(np.isneginf(rhs), np.inf, np.where(np.isnan(m), 0.0, m))


def _chunked(fn: Callable[[slice], tuple], n: int, threads: int = 1, chunk: int = 16384):
    """Apply ``fn`` to consecutive slices and concatenate in index order."""
    slices = [slice(i, min(i + chunk, n)) for i in range(0, n, chunk)] or [slice(0, 0)]
    if threads > 1 and len(slices) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(fn, slices))
    else:
        parts = [fn(s) for s in slices]
    return tuple(np.concatenate(p) for p in zip(*parts))


# ---------------------------------------------------------------------------
# violation functionals (batched)
# ---------------------------------------------------------------------------

def homogeneity_terms(f: ScalarField, x: np.ndarray, lam: np.ndarray):
    fx = f(x)
    flx = f(lam[:, None] * x)
    with np.errstate(invalid="ignore"):
        gap = np.abs(flx - lam * fx)
    gap = np.where(np.isnan(gap), 0.0, gap)
    return -gap, _scale(lam * fx), flx, fx


def superadditivity_terms(f: ScalarField, x1: np.ndarray, x2: np.ndarray):
    f1, f2, f12 = f(x1), f(x2), f(x1 + x2)
    with np.errstate(invalid="ignore"):
        rhs = f1 + f2
    return _lower_margin(f12, rhs), _scale(f1, f2, f12), f1, f2, f12


def concavity_terms(f: ScalarField, x: np.ndarray, y: np.ndarray, lam: np.ndarray):
    z = lam[:, None] * x + (1 - lam)[:, None] * y
    fx, fy, fz = f(x), f(y), f(z)
    with np.errstate(invalid="ignore"):
        rhs = lam * fx + (1 - lam) * fy
    return _lower_margin(fz, rhs), _scale(fx, fy, fz), fx, fy, fz


def chain23_terms(f: ScalarField, x: np.ndarray, lam: np.ndarray):
    fx, flx = f(x), f(lam[:, None] * x)
    with np.errstate(invalid="ignore"):
        rhs = lam * fx
    return _lower_margin(flx, rhs), _scale(flx, rhs), flx, fx


def chain27_terms(f: ScalarField, w: np.ndarray, n: np.ndarray):
    fw, fwn = f(w), f(w / n[:, None])
    with np.errstate(invalid="ignore"):
        gap = np.abs(fw - n * fwn)
    gap = np.where(np.isnan(gap), 0.0, gap)
    return -gap, _scale(fw, n * fwn), fw, fwn


# ---------------------------------------------------------------------------
# verdict assembly
# ---------------------------------------------------------------------------

def _verdict(prop: str, margins: np.ndarray, scale: np.ndarray, tol: float,
             make_witness: Callable[[int, float, float], Witness], *, skipped: int = 0,
             total: Optional[int] = None, strict: bool = False, method: str = "sampling",
             diagnostics: Optional[dict] = None) -> Verdict:
    n = len(margins)
    total = n + skipped if total is None else total
    diagnostics = dict(diagnostics or {})
    if n == 0:
        return Verdict(prop, Status.INCONCLUSIVE, 0, 0.0, None, skipped, method, diagnostics)
    thr = tol * scale
    finite = np.isfinite(margins)
    diagnostics.setdefault(
        "max_abs_scaled_margin", float(np.max(np.abs(margins[finite]) / scale[finite])) if finite.any() else 0.0
    )
    worst = float(np.min(margins))
    if strict:
        failing = margins < thr
        rank = (thr - margins) / scale
    else:
        failing = -margins > thr
        rank = -margins / scale
    if failing.any():
        i = int(np.argmax(np.where(failing, rank, -np.inf)))
        if strict:
            w = make_witness(i, float(-margins[i]), float(-thr[i]))
        else:
            w = make_witness(i, float(-margins[i]), float(thr[i]))
        return Verdict(prop, Status.FALSIFIED, n, worst, w, skipped, method, diagnostics)
    if total and skipped > MAX_SKIP_FRACTION * total:
        return Verdict(prop, Status.INCONCLUSIVE, n, worst, None, skipped, method, diagnostics)
    return Verdict(prop, Status.SATISFIED, n, worst, None, skipped, method, diagnostics)


def _pt(a: np.ndarray) -> tuple:
    return tuple(float(v) for v in a)


def check_homogeneity(f: ScalarField, cfg: SampleConfig, lambdas: Sequence[float] = DEFAULT_H_LAMBDAS,
                      tol: float = DEFAULT_TOL, *, points=None, lams=None, threads: int = 1) -> Verdict:
    """Test ``f(lam x) == lam f(x)``; pairs whose scaled point leaves the region are skipped."""
    if points is None:
        x = sample_region(f.region, cfg)
        lam = np.resize(np.asarray(lambdas, dtype=float), len(x))
    else:
        x = as_points(points, f.dimension)
        lam = np.broadcast_to(np.asarray(lams if lams is not None else lambdas, dtype=float), (len(x),)).copy()
    if np.any(lam <= 0):
        raise ContractError("homogeneity factors must be positive")
    keep = f.region.contains(lam[:, None] * x)
    skipped = int((~keep).sum())
    x, lam = x[keep], lam[keep]
    margins, scale, flx, fx = _chunked(lambda s: homogeneity_terms(f, x[s], lam[s]), len(x), threads)

    def witness(i, violation, thr):
        return Witness("H", (_pt(x[i]),), (float(flx[i]), float(fx[i])), violation, thr, float(lam[i]))

    return _verdict("H", margins, scale, tol, witness, skipped=skipped)


def _onto_rays(region, x1: np.ndarray, x2: np.ndarray) -> np.ndarray:
    """Replace every RAY_EVERY-th ``x2`` by the multiple of ``x1`` with the same norm.

    Homogeneous fields are additive along rays, so that is where strict
    superadditivity breaks; random pairs essentially never land there.
    """
    out = x2.copy()
    idx = np.arange(0, len(x1), RAY_EVERY)
    t = np.linalg.norm(x2[idx], axis=1) / np.linalg.norm(x1[idx], axis=1)
    ray = t[:, None] * x1[idx]
    ok = region.contains(ray) & region.contains(x1[idx] + ray)
    out[idx[ok]] = ray[ok]
    return out


def check_superadditivity(f: ScalarField, cfg: SampleConfig, tol: float = DEFAULT_TOL, strict: bool = False,
                          *, pairs=None, threads: int = 1) -> Verdict:
    """Test ``f(x1 + x2) >= f(x1) + f(x2)``; ``strict`` demands a margin above ``tol * scale`` everywhere.

    In strict mode with sampled pairs, one pair in ``RAY_EVERY`` is put on a
    common ray (see ``_onto_rays``).
    """
    if pairs is None:
        x1, x2 = sample_pairs_additive(f.region, cfg)
        if strict:
            x2 = _onto_rays(f.region, x1, x2)
        skipped = 0
    else:
        x1, x2 = (as_points(p, f.dimension) for p in pairs)
        keep = f.region.contains(x1) & f.region.contains(x2) & f.region.contains(x1 + x2)
        skipped = int((~keep).sum())
        x1, x2 = x1[keep], x2[keep]
    margins, scale, f1, f2, f12 = _chunked(lambda s: superadditivity_terms(f, x1[s], x2[s]), len(x1), threads)
    prop = "SpStrict" if strict else "Sp"

    def witness(i, violation, thr):
        return Witness(prop, (_pt(x1[i]), _pt(x2[i])), (float(f1[i]), float(f2[i]), float(f12[i])), violation, thr)

    diagnostics = {"min_margin": float(np.min(margins))} if len(margins) else {}
    return _verdict(prop, margins, scale, tol, witness, skipped=skipped, strict=strict, diagnostics=diagnostics)


def _concavity_samples(f: ScalarField, cfg: SampleConfig, lambdas: Sequence[float]):
    x = sample_region(f.region, cfg, stream=2)
    y = sample_region(f.region, cfg, stream=3)
    n = len(x)
    lam = np.empty(n)
    fixed = np.resize(np.asarray(lambdas, dtype=float), (n + 1) // 2)
    lam[0::2] = fixed
    lam[1::2] = batch_rng(cfg.seed, 0, stream=4).uniform(0.0, 1.0, size=n // 2)
    return x, y, lam


def check_concavity(f: ScalarField, cfg: SampleConfig, lambdas: Sequence[float] = DEFAULT_CC_LAMBDAS,
                    tol: float = DEFAULT_TOL, *, triples=None, threads: int = 1) -> Verdict:
    """Test ``f(lam x + (1-lam) y) >= lam f(x) + (1-lam) f(y)``.

    Half the triples cycle through ``lambdas``, the other half draw ``lam``
    uniformly. Triples whose combination leaves a non-convex region are skipped.
    """
    if any(not 0 < v < 1 for v in lambdas):
        raise ContractError("concavity weights must lie in (0, 1)")
    if triples is None:
        x, y, lam = _concavity_samples(f, cfg, lambdas)
    else:
        x, y = as_points(triples[0], f.dimension), as_points(triples[1], f.dimension)
        lam = np.broadcast_to(np.asarray(triples[2], dtype=float), (len(x),)).copy()
    keep = f.region.contains(x) & f.region.contains(y) & f.region.contains(lam[:, None] * x + (1 - lam)[:, None] * y)
    skipped = int((~keep).sum())
    x, y, lam = x[keep], y[keep], lam[keep]
    margins, scale, fx, fy, fz = _chunked(lambda s: concavity_terms(f, x[s], y[s], lam[s]), len(x), threads)

    def witness(i, violation, thr):
        return Witness("Cc", (_pt(x[i]), _pt(y[i])), (float(fx[i]), float(fy[i]), float(fz[i])),
                       violation, thr, float(lam[i]))

    return _verdict("Cc", margins, scale, tol, witness, skipped=skipped)


# ---------------------------------------------------------------------------
# finite-difference diagnostics
# ---------------------------------------------------------------------------

def fd_steps(x: np.ndarray, fd_step: float) -> np.ndarray:
    return fd_step * np.maximum(1.0, np.abs(x))


def _second_along(f: ScalarField, x: np.ndarray, step: np.ndarray) -> float:
    pts = np.stack([x + step, x, x - step])
    v = f(pts)
    return float((v[0] - 2 * v[1] + v[2]) / np.dot(step, step))


def _mixed(f: ScalarField, x: np.ndarray, hi: np.ndarray, hj: np.ndarray) -> float:
    v = f(np.stack([x + hi + hj, x + hi - hj, x - hi + hj, x - hi - hj]))
    return float((v[0] - v[1] - v[2] + v[3]) / (4 * np.linalg.norm(hi) * np.linalg.norm(hj)))


@dataclass
class HessianDiagnostics:
    """Per-point central-difference second derivatives.

    ``second`` holds NaN for axes skipped for lack of clearance. For d = 2
    ``determinant`` is ``f_01**2 - f_00 * f_11`` (zero for a degenerate
    Hessian) and ``normalized_determinant`` divides it by
    ``f_01**2 + |f_00 * f_11|``.
    """

    points: np.ndarray
    second: np.ndarray
    mixed: Optional[np.ndarray] = None
    determinant: Optional[np.ndarray] = None
    normalized_determinant: Optional[np.ndarray] = None
    skipped: int = 0
    strict: Optional[Verdict] = None


def check_concavity_hessian(f: ScalarField, points, fd_step: float = HESSIAN_FD_STEP, tol: float = DEFAULT_TOL,
                            axes: Optional[Sequence[int]] = None,
                            det_tol: float = DET_TOL) -> tuple[Verdict, HessianDiagnostics]:
    """Check the necessary condition ``d^2 f / dx_i^2 <= 0`` at each point.

    The allowance added to ``tol * scale`` is the rounding bound of the
    three-point stencil, ``16 eps (1 + |f|) / h^2``. An axis is skipped at a
    point unless ``x +- 2h`` along it stays in the region.
    """
    pts = as_points(points, f.dimension)
    d = f.dimension
    axes = tuple(range(d)) if axes is None else tuple(axes)
    second = np.full((len(pts), d), np.nan)
    skipped = 0
    for k, x in enumerate(pts):
        h = fd_steps(x, fd_step)
        for i in axes:
            e = np.zeros(d)
            e[i] = h[i]
            if not f.region.contains(np.stack([x + 2 * e, x - 2 * e])).all():
                skipped += 1
                continue
            second[k, i] = _second_along(f, x, e)
    fvals = f(pts)
    sel = second[:, list(axes)]
    rows, cols = np.nonzero(np.isfinite(sel))
    if len(rows) == 0:
        verdict = Verdict("Cc", Status.INCONCLUSIVE, 0, 0.0, None, skipped, "hessian")
        return verdict, HessianDiagnostics(pts, second, skipped=skipped)
    vals = sel[rows, cols]
    hs = np.array([fd_steps(pts[r], fd_step)[axes[c]] for r, c in zip(rows, cols)])
    allowance = 16 * EPS * (1 + np.abs(fvals[rows])) / hs**2
    margins = -vals
    scale = (1 + np.abs(fvals[rows])) + allowance / tol

    def witness(i, violation, thr):
        r, c = rows[i], axes[cols[i]]
        step = np.zeros(d)
        step[c] = hs[i]
        return Witness("CcHessian", (_pt(pts[r]), _pt(step)), (float(vals[i]),), violation, thr)

    verdict = _verdict("Cc", margins, scale, tol, witness, skipped=skipped,
                       total=len(rows) + skipped, method="hessian")
    diag = HessianDiagnostics(pts, second, skipped=skipped)
    if d == 2 and set(axes) == {0, 1}:
        _fill_determinant(f, pts, second, fd_step, diag, det_tol)
    return verdict, diag


def _fill_determinant(f, pts, second, fd_step, diag, det_tol):
    mixed = np.full(len(pts), np.nan)
    for k, x in enumerate(pts):
        if np.all(np.isfinite(second[k])):
            h = fd_steps(x, fd_step)
            mixed[k] = _mixed(f, x, np.array([h[0], 0.0]), np.array([0.0, h[1]]))
    det = mixed**2 - second[:, 0] * second[:, 1]
    norm = mixed**2 + np.abs(second[:, 0] * second[:, 1])
    with np.errstate(invalid="ignore", divide="ignore"):
        ndet = np.where(norm > 0, det / norm, 0.0)
    diag.mixed, diag.determinant, diag.normalized_determinant = mixed, det, ndet
    ok = np.isfinite(ndet)
    # Negative definiteness needs f_00 < 0 and f_00 f_11 - f_01^2 > 0, i.e. the
    # normalized determinant bounded away from zero on the negative side.
    definite = np.where(second[:, 0] < 0, -ndet, -np.inf)[ok]
    idx = np.nonzero(ok)[0]

    def witness(i, violation, thr):
        k = idx[i]
        return Witness("CcStrict", (_pt(pts[k]),), (float(second[k, 0]), float(second[k, 1]), float(mixed[k]),
                                                     float(det[k])), violation, thr)

    diag.strict = _verdict("CcStrict", definite, np.ones_like(definite), det_tol, witness, strict=True,
                           method="hessian")


def check_support_line_1d(f: ScalarField, x0: float, cfg: SampleConfig, tol: float = DEFAULT_TOL,
                          fd_step: float = FD_STEP, *, xs=None) -> Verdict:
    """Check that the line through ``(x0, f(x0))`` with the central-difference slope dominates ``f``."""
    if f.dimension != 1:
        raise ContractError("support-line check needs a one-dimensional field")
    h = fd_step * max(1.0, abs(x0))
    stencil = np.array([[x0 + h], [x0], [x0 - h]])
    if not f.region.contains(stencil).all():
        raise ContractError(f"x0={x0} too close to the region boundary for step {h}")
    fp, f0, fm = f(stencil)
    slope = (fp - fm) / (2 * h)
    if not math.isfinite(slope):
        return Verdict("Cc", Status.INCONCLUSIVE, 0, 0.0, None, 0, "support-line")
    pts = sample_region(f.region, cfg) if xs is None else as_points(np.asarray(xs, dtype=float).reshape(-1, 1), 1)
    fx = f(pts)
    line = f0 + slope * (pts[:, 0] - x0)
    margins = _lower_margin(line, fx)
    scale = _scale(fx, line)

    def witness(i, violation, thr):
        return Witness("SupportLine", ((float(x0),), _pt(pts[i])), (float(f0), float(fx[i])), violation, thr,
                       float(slope))

    return _verdict("Cc", margins, scale, tol, witness, method="support-line", diagnostics={"slope": float(slope)})


# ---------------------------------------------------------------------------
# apex liminf
# ---------------------------------------------------------------------------

def _shell_points(region, radius: float, n: int, rng: np.random.Generator, inner_ratio: float,
                  direction_floor: float) -> np.ndarray:
    d = region.dimension
    # Per-coordinate magnitudes spread over many decades so that directions
    # hugging the cone's faces are represented.
    mags = np.exp(rng.uniform(math.log(direction_floor), 0.0, size=(n, d)))
    dirs = mags / np.linalg.norm(mags, axis=1, keepdims=True)
    r = radius * (inner_ratio + (1 - inner_ratio) * rng.uniform(0.0, 1.0, size=n)) if inner_ratio < 1 else radius
    pts = np.asarray(r).reshape(-1, 1) * dirs * region.cone.signs
    return pts[region.contains(pts)]


def classify_liminf(infima: Sequence[Optional[float]], tol: float = DEFAULT_TOL) -> LiminfClass:
    """Classify a sequence of shell infima taken at decreasing radii.

    * every infimum >= -tol                          -> BoundedBelowByZero
    * tail strictly decreasing, last below -1, and
      decrements not shrinking by more than half     -> DivergesToNegInfinity
    * tail decrements contracting, Aitken limit < -tol -> NegativeFinite
    * anything else                                   -> Inconclusive
    """
    if not infima or any(v is None for v in infima):
        return LiminfClass.INCONCLUSIVE
    m = np.asarray(infima, dtype=float)
    if np.all(m >= -tol):
        return LiminfClass.BOUNDED_BELOW_BY_ZERO
    if len(m) < LIMINF_TAIL:
        return LiminfClass.INCONCLUSIVE
    tail = m[-LIMINF_TAIL:]
    dec = tail[:-1] - tail[1:]
    if np.all(dec > 0) and tail[-1] < DIVERGENCE_FLOOR and dec[-1] > DECREMENT_RATIO * dec[-2]:
        return LiminfClass.DIVERGES
    if abs(dec[-1]) < DECREMENT_RATIO * abs(dec[-2]):
        denom = dec[-2] - dec[-1]
        limit = tail[-1] - dec[-1] ** 2 / denom if denom != 0 else tail[-1]
        if limit < -tol:
            return LiminfClass.NEGATIVE_FINITE
    return LiminfClass.INCONCLUSIVE


def estimate_apex_liminf(f: ScalarField, radii: Sequence[float] = DEFAULT_RADII, samples_per_shell: int = 1000,
                         seed: int = 0, tol: float = DEFAULT_TOL, inner_ratio: float = 1.0,
                         direction_floor: float = 1e-12) -> LiminfEstimate:
    """Record the least sampled value of ``f`` on shells ``inner_ratio*r <= |x| <= r`` around the apex.

    The default ``inner_ratio=1`` samples the spheres ``|x| = r`` themselves.
    A shell with no admissible sample is retried once with ten times the
    samples before being recorded as empty.
    """
    radii = tuple(float(r) for r in radii)
    if not radii or any(r <= 0 for r in radii) or any(a <= b for a, b in zip(radii, radii[1:])):
        raise ContractError("radii must be positive and strictly decreasing")
    if not isinstance(f.region, Region):
        raise ContractError("apex liminf needs a cone-based region")
    if not 0 < inner_ratio <= 1:
        raise ContractError("inner_ratio must lie in (0, 1]")
    infima: list[Optional[float]] = []
    for k, r in enumerate(radii):
        pts = _shell_points(f.region, r, samples_per_shell, batch_rng(seed, k, stream=5), inner_ratio,
                            direction_floor)
        if len(pts) == 0:
            pts = _shell_points(f.region, r, 10 * samples_per_shell, batch_rng(seed, k, stream=6), inner_ratio,
                                direction_floor)
        infima.append(float(np.min(f(pts))) if len(pts) else None)
    return LiminfEstimate(radii, tuple(infima), classify_liminf(infima, tol), tol)


# ---------------------------------------------------------------------------
# proof chain and rational/irrational scaling
# ---------------------------------------------------------------------------

def coprime_pairs(n_max: int) -> list[tuple[int, int]]:
    return [(m, n) for n in range(1, n_max + 1) for m in range(1, n_max + 1) if math.gcd(m, n) == 1]


def check_homogeneity_chain(f: ScalarField, cfg: SampleConfig, n_max: int = 12,
                            tol: float = DEFAULT_TOL) -> list[Verdict]:
    """Run the three links from concavity + superadditivity to homogeneity.

    * Chain23: ``f(lam x) >= lam f(x)`` for ``lam`` drawn from (0, 1]
    * Chain27: ``f(w) == n f(w/n)`` for ``n = 2..n_max``
    * Chain28: ``f((m/n) u) == (m/n) f(u)`` for coprime ``m, n <= n_max``
    """
    region = f.region
    x = sample_region(region, cfg, stream=7)
    lam = 1.0 - batch_rng(cfg.seed, 0, stream=8).uniform(0.0, 1.0, size=len(x))
    keep = region.contains(lam[:, None] * x)
    skipped = int((~keep).sum())
    xk, lk = x[keep], lam[keep]
    m23, s23, flx, fx = chain23_terms(f, xk, lk)
    v23 = _verdict("Chain23", m23, s23, tol,
                   lambda i, v, t: Witness("Chain23", (_pt(xk[i]),), (float(flx[i]), float(fx[i])), v, t,
                                           float(lk[i])),
                   skipped=skipped)

    ns = np.arange(2, n_max + 1, dtype=float)
    w = np.repeat(x, len(ns), axis=0)
    n = np.tile(ns, len(x))
    keep = region.contains(w / n[:, None])
    skipped = int((~keep).sum())
    wk, nk = w[keep], n[keep]
    m27, s27, fw, fwn = chain27_terms(f, wk, nk)
    v27 = _verdict("Chain27", m27, s27, tol,
                   lambda i, v, t: Witness("Chain27", (_pt(wk[i]),), (float(fw[i]), float(fwn[i])), v, t,
                                           float(nk[i])),
                   skipped=skipped)

    ratios = np.array([m / q for m, q in coprime_pairs(n_max)])
    u = np.repeat(x, len(ratios), axis=0)
    r = np.tile(ratios, len(x))
    keep = region.contains(r[:, None] * u)
    skipped = int((~keep).sum())
    uk, rk = u[keep], r[keep]
    m28, s28, fru, fu = homogeneity_terms(f, uk, rk)
    v28 = _verdict("Chain28", m28, s28, tol,
                   lambda i, v, t: Witness("Chain28", (_pt(uk[i]),), (float(fru[i]), float(fu[i])), v, t,
                                           float(rk[i])),
                   skipped=skipped)
    return [v23, v27, v28]


@dataclass
class ScalingTable:
    """Convergent-by-convergent comparison of ``f(r u)`` with ``r f(u)`` and ``f(lam u)``."""

    lam: float
    u: tuple[float, ...]
    rows: list[dict] = field(default_factory=list)
    converges: bool = False
    skipped: int = 0


def check_irrational_scaling(f: ScalarField, lam: float, u, k_max: int = 10, tol: float = 1e-3) -> ScalingTable:
    """Approach ``f(lam u)`` through ``f((p_k/q_k) u)``.

    ``converges`` is set when the distance to ``f(lam u)`` strictly decreases
    over the table and ends below ``tol``.
    """
    u = np.asarray(u, dtype=float)
    if not (f.region.contains(u)[0] and f.region.contains(lam * u)[0]):
        raise ContractError("u and lam*u must both lie in the region")
    target = f(lam * u)
    fu = f(u)
    table = ScalingTable(float(lam), _pt(u))
    for conv in convergents(lam, k_max):
        ratio = conv.p / conv.q
        if ratio <= 0 or not f.region.contains(ratio * u)[0]:
            table.skipped += 1
            continue
        fr = f(ratio * u)
        table.rows.append({
            "k": conv.k,
            "p": conv.p,
            "q": conv.q,
            "ratio": ratio,
            "homogeneity_gap": abs(fr - ratio * fu),
            "approach_gap": abs(fr - target),
        })
    gaps = [row["approach_gap"] for row in table.rows]
    table.converges = bool(gaps) and all(a > b for a, b in zip(gaps, gaps[1:])) and gaps[-1] < tol
    return table


def check_ratio_constancy_1d(f: ScalarField, grid: Sequence[float], tol: float = DEFAULT_TOL) -> Verdict:
    """Test whether ``f(x)/x`` is constant on ``grid``; report monotonicity fractions."""
    if f.dimension != 1:
        raise ContractError("ratio test needs a one-dimensional field")
    xs = np.sort(np.asarray(grid, dtype=float))
    keep = f.region.contains(xs[:, None])
    skipped = int((~keep).sum())
    xs = xs[keep]
    if len(xs) == 0:
        return Verdict("RatioConstant", Status.INCONCLUSIVE, 0, 0.0, None, skipped, "ratio")
    h = f(xs[:, None]) / xs
    steps = np.diff(h)
    diag = {
        "nondecreasing_fraction": float(np.mean(steps >= 0)) if len(steps) else 1.0,
        "nonincreasing_fraction": float(np.mean(steps <= 0)) if len(steps) else 1.0,
        "mean_ratio": float(np.mean(h)),
    }
    spread = float(np.max(h) - np.min(h))
    thr = tol * (1 + abs(diag["mean_ratio"]))
    lo, hi = int(np.argmin(h)), int(np.argmax(h))
    status = Status.FALSIFIED if spread > thr else Status.SATISFIED
    witness = None
    if status is Status.FALSIFIED:
        witness = Witness("RatioConstant", ((float(xs[lo]),), (float(xs[hi]),)), (float(h[lo]), float(h[hi])),
                          spread, thr)
    return Verdict("RatioConstant", status, len(xs), -spread, witness, skipped, "ratio", diag)


# ---------------------------------------------------------------------------
# independent re-evaluation of witnesses
# ---------------------------------------------------------------------------

def revalidate(f: ScalarField, w: Witness) -> float:
    """Recompute a witness's violation from its points alone, one scalar evaluation at a time."""
    pts = [np.asarray(p, dtype=float) for p in w.points]
    prop = w.property
    if prop in ("H", "Chain28"):
        return abs(f(w.lam * pts[0]) - w.lam * f(pts[0]))
    if prop == "Chain23":
        return w.lam * f(pts[0]) - f(w.lam * pts[0])
    if prop == "Chain27":
        return abs(f(pts[0]) - w.lam * f(pts[0] / w.lam))
    if prop in ("Sp", "SpStrict"):
        return f(pts[0]) + f(pts[1]) - f(pts[0] + pts[1])
    if prop == "Cc":
        lam = w.lam
        return lam * f(pts[0]) + (1 - lam) * f(pts[1]) - f(lam * pts[0] + (1 - lam) * pts[1])
    if prop == "SupportLine":
        x0, x = pts[0][0], pts[1][0]
        return f(pts[1]) - (f(pts[0]) + w.lam * (x - x0))
    if prop == "CcHessian":
        return _second_along(f, pts[0], pts[1])
    if prop == "RatioConstant":
        return abs(f(pts[1]) / pts[1][0] - f(pts[0]) / pts[0][0])
    if prop == "CcStrict":
        x = pts[0]
        h = fd_steps(x, HESSIAN_FD_STEP)
        s00 = _second_along(f, x, np.array([h[0], 0.0]))
        s11 = _second_along(f, x, np.array([0.0, h[1]]))
        s01 = _mixed(f, x, np.array([h[0], 0.0]), np.array([0.0, h[1]]))
        norm = s01**2 + abs(s00 * s11)
        ndet = (s01**2 - s00 * s11) / norm if norm > 0 else 0.0
        return ndet if s00 < 0 else math.inf
    raise ContractError(f"cannot revalidate witness for property {prop!r}")


def witness_holds(f: ScalarField, w: Witness, rtol: float = 1e-9) -> bool:
    """True when re-evaluation confirms the witness violates by more than its tolerance."""
    v = revalidate(f, w)
    if math.isinf(v) or math.isinf(w.violation):
        return v == w.violation and v > w.tolerance
    return v > w.tolerance and abs(v - w.violation) <= rtol * max(1.0, abs(w.violation))
