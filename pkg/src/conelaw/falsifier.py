"""Witness search: seeded random probing, then derivative-free pattern search.

The search variable packs the points of a property's inequality and, where
the property has one, its scalar weight:

* ``H``:  ``(x, lam)`` with ``lam > 0``
* ``Sp``: ``(x1, x2)``
* ``Cc``: ``(x, y, lam)`` with ``lam`` clamped to ``[0.01, 0.99]``

The objective is the raw violation of the inequality (positive when it
fails). Steps that leave the region are rejected.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from conelaw.checkers import (
    DEFAULT_TOL,
    concavity_terms,
    homogeneity_terms,
    superadditivity_terms,
    witness_holds,
)
from conelaw.domain import SampleConfig, batch_rng, sample_pairs_additive, sample_region
from conelaw.errors import ContractError
from conelaw.fields import ScalarField
from conelaw.verdicts import Status, Verdict, Witness

SEARCHABLE = ("H", "Sp", "Cc")
CC_LAMBDA_RANGE = (0.01, 0.99)
H_LAMBDA_RANGE = (0.1, 10.0)
MIN_STEP = 1e-12


@dataclass(frozen=True)
class SearchBudget:
    random_probes: int = 4096
    refine_iterations: int = 300
    refine_shrink: float = 0.5
    seed: int = 0
    initial_step: float = 0.25
    coord_range: tuple[float, float] = (1e-3, 1e3)

    def __post_init__(self):
        if self.random_probes < 1 or self.refine_iterations < 1:
            raise ContractError("search budget counts must be positive")
        if not 0 < self.refine_shrink < 1:
            raise ContractError("refine_shrink must lie in (0, 1)")
        if not 0 < self.initial_step < 1:
            raise ContractError("initial_step must lie in (0, 1)")


def _split(prop: str, theta: np.ndarray, d: int):
    if prop == "H":
        return theta[:d], None, theta[d]
    if prop == "Sp":
        return theta[:d], theta[d:2 * d], None
    return theta[:d], theta[d:2 * d], theta[2 * d]


def _batch_terms(f: ScalarField, prop: str, a, b, lam):
    """Violation, scale and values for batches; rows outside the region get -inf violation."""
    region = f.region
    if prop == "H":
        ok = region.contains(a) & (lam > 0) & region.contains(lam[:, None] * a)
    elif prop == "Sp":
        ok = region.contains(a) & region.contains(b) & region.contains(a + b)
    else:
        ok = (region.contains(a) & region.contains(b)
              & region.contains(lam[:, None] * a + (1 - lam)[:, None] * b))
    n = len(a)
    violation = np.full(n, -np.inf)
    scale = np.ones(n)
    values = [np.full(n, np.nan) for _ in range(2 if prop == "H" else 3)]
    if ok.any():
        if prop == "H":
            margin, sc, *vals = homogeneity_terms(f, a[ok], lam[ok])
        elif prop == "Sp":
            margin, sc, *vals = superadditivity_terms(f, a[ok], b[ok])
        else:
            margin, sc, *vals = concavity_terms(f, a[ok], b[ok], lam[ok])
        violation[ok] = -margin
        scale[ok] = sc
        for dst, src in zip(values, vals):
            dst[ok] = src
    return violation, scale, values


def _evaluate(f: ScalarField, prop: str, theta: np.ndarray):
    d = f.dimension
    a, b, lam = _split(prop, theta, d)
    v, s, vals = _batch_terms(
        f, prop, a[None, :], None if b is None else b[None, :], None if lam is None else np.array([lam])
    )
    return float(v[0]), float(s[0]), tuple(float(x[0]) for x in vals)


def _to_witness(prop: str, theta: np.ndarray, d: int, violation: float, scale: float, values, tol: float) -> Witness:
    a, b, lam = _split(prop, theta, d)
    points = (tuple(map(float, a)),) if b is None else (tuple(map(float, a)), tuple(map(float, b)))
    return Witness(prop, points, values, violation, tol * scale, None if lam is None else float(lam))


def _from_witness(w: Witness, d: int) -> np.ndarray:
    parts = [np.asarray(p, dtype=float) for p in w.points[: 1 if w.property == "H" else 2]]
    if any(len(p) != d for p in parts):
        raise ContractError("witness points do not match the field's dimension")
    theta = np.concatenate(parts)
    if w.property in ("H", "Cc"):
        if w.lam is None:
            raise ContractError(f"{w.property} witness needs lambda")
        theta = np.append(theta, w.lam)
    return theta


def _perturb(prop: str, theta: np.ndarray, i: int, sign: int, step: float, d: int) -> np.ndarray:
    out = theta.copy()
    is_lambda = prop in ("H", "Cc") and i == len(theta) - 1
    if is_lambda and prop == "Cc":
        lo, hi = CC_LAMBDA_RANGE
        out[i] = min(hi, max(lo, out[i] + sign * step * 0.5))
    else:
        # relative moves keep every coordinate on its side of zero
        out[i] = out[i] * (1 + sign * step)
    return out


def _in_box(prop: str, theta: np.ndarray, d: int, budget: SearchBudget) -> bool:
    a, b, lam = _split(prop, theta, d)
    lo, hi = budget.coord_range
    mags = np.abs(a if b is None else np.concatenate([a, b]))
    if np.any(mags < lo) or np.any(mags > hi):
        return False
    return prop != "H" or H_LAMBDA_RANGE[0] <= lam <= H_LAMBDA_RANGE[1]


def _pattern_search(f: ScalarField, prop: str, theta: np.ndarray, budget: SearchBudget):
    # Trial points are confined to the sampling box; the raw violation is
    # otherwise unbounded for most fields and the search would just run off.
    d = f.dimension
    best, _, _ = _evaluate(f, prop, theta)
    step = budget.initial_step
    for _ in range(budget.refine_iterations):
        improved = False
        for i in range(len(theta)):
            for sign in (1, -1):
                trial = _perturb(prop, theta, i, sign, step, d)
                if not _in_box(prop, trial, d, budget):
                    continue
                v, _, _ = _evaluate(f, prop, trial)
                if v > best:
                    theta, best, improved = trial, v, True
        if not improved:
            step *= budget.refine_shrink
            if step < MIN_STEP:
                break
    return theta


def refine_witness(f: ScalarField, prop: str, w: Witness, budget: SearchBudget, tol: float = DEFAULT_TOL) -> Witness:
    """Improve ``w`` by pattern search; the returned violation is never smaller than the input's."""
    if prop not in SEARCHABLE or w.property != prop:
        raise ContractError(f"cannot refine a {w.property!r} witness as {prop!r}")
    d = f.dimension
    theta = _from_witness(w, d)
    v0, s0, vals0 = _evaluate(f, prop, theta)
    if v0 == -np.inf:
        raise ContractError("witness lies outside the field's region")
    theta = _pattern_search(f, prop, theta, budget)
    v, s, vals = _evaluate(f, prop, theta)
    return _to_witness(prop, theta, d, v, s, vals, tol)


def _probes(f: ScalarField, prop: str, budget: SearchBudget) -> np.ndarray:
    cfg = SampleConfig(budget.seed, budget.random_probes, budget.coord_range)
    rng = batch_rng(budget.seed, 0, stream=11)
    if prop == "H":
        x = sample_region(f.region, cfg, stream=9)
        lo, hi = H_LAMBDA_RANGE
        lam = np.exp(rng.uniform(np.log(lo), np.log(hi), size=len(x)))
        return np.column_stack([x, lam])
    if prop == "Sp":
        x1, x2 = sample_pairs_additive(f.region, cfg, stream=10)
        return np.column_stack([x1, x2])
    x = sample_region(f.region, cfg, stream=9)
    y = sample_region(f.region, cfg, stream=10)
    lam = rng.uniform(*CC_LAMBDA_RANGE, size=len(x))
    return np.column_stack([x, y, lam])


def falsify(f: ScalarField, prop: str, budget: SearchBudget = SearchBudget(), tol: float = DEFAULT_TOL) -> Verdict:
    """Search for a violation of ``prop``; Falsified only with a re-validated witness."""
    if prop not in SEARCHABLE:
        raise ContractError(f"property must be one of {SEARCHABLE}, got {prop!r}")
    d = f.dimension
    thetas = _probes(f, prop, budget)
    a, b, lam = _split(prop, thetas.T, d)
    violation, scale, _ = _batch_terms(f, prop, a.T, None if b is None else b.T, lam)
    # Pick the start by violation relative to scale so huge-magnitude probes do not dominate.
    start = thetas[int(np.argmax(violation / scale))]
    theta = _pattern_search(f, prop, start, budget)
    v, s, vals = _evaluate(f, prop, theta)
    w = _to_witness(prop, theta, d, v, s, vals, tol)
    if v > w.tolerance and witness_holds(f, w):
        return Verdict(prop, Status.FALSIFIED, len(thetas), -v, w, 0, "falsifier")
    return Verdict(prop, Status.SATISFIED_UP_TO_BUDGET, len(thetas), -v, None, 0, "falsifier",
                   {"best_violation": v})
