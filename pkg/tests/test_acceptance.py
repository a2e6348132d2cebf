"""Acceptance criteria 1-8, each run at its stated tolerance.

Every criterion prints one PASS/FAIL line (collected into the pytest
terminal summary by conftest.py). Sub-checks that cannot be met are kept
at their stated tolerance and marked ``xfail(strict=True)`` so they stay
visibly red without breaking the suite.

Run standalone with ``python3 tests/test_acceptance.py``.
"""

from __future__ import annotations

import math
import os
import subprocess
import sys
from fractions import Fraction

import numpy as np
import pytest

from conelaw import (
    convergents,
    make_bh_entropy,
    make_f0,
    make_f0_multi,
    make_linear,
    make_photon_entropy,
    make_power,
)
from conelaw.checkers import (
    check_concavity,
    check_concavity_hessian,
    check_homogeneity,
    check_homogeneity_chain,
    check_irrational_scaling,
    check_ratio_constancy_1d,
    check_superadditivity,
    estimate_apex_liminf,
    witness_holds,
)
from conelaw.deduction import Rule, deduce_third_property
from conelaw.domain import SampleConfig, sample_pairs_additive, sample_region
from conelaw.falsifier import falsify
from conelaw.report import RunConfig, report_json, resolve_field, run_suite
from conelaw.verdicts import LiminfClass, Status

RESULTS: dict[str, tuple[bool, str]] = {}

LOG2 = math.log(2)
BIG = SampleConfig(seed=0, count=100_000)
MID = SampleConfig(seed=0, count=10_000)


def record(name: str, checks: dict[str, bool]) -> bool:
    failed = [k for k, ok in checks.items() if not ok]
    ok = not failed
    RESULTS[name] = (ok, "all sub-checks passed" if ok else "failed: " + ", ".join(failed))
    print(f"{name}: {'PASS' if ok else 'FAIL'} ({RESULTS[name][1]})")
    return ok


def _second_m(f, x, h=1e-4):
    x = np.asarray(x, dtype=float)
    step = np.array([h * max(1.0, abs(x[0])), 0.0])
    return (f(x + step) - 2 * f(x) + f(x - step)) / step[0] ** 2


# ---------------------------------------------------------------------------
# 1. counterexample certification
# ---------------------------------------------------------------------------

def _regime_counts(c, x1, x2):
    cut = 2 / c
    a, b = x1[:, 0], x2[:, 0]
    small = a + b <= cut
    both_large = (a > cut) & (b > cut)
    mixed = (a + b > cut) & ((a <= cut) ^ (b <= cut))
    return int(small.sum()), int(mixed.sum()), int(both_large.sum())


def criterion_1() -> dict[str, bool]:
    checks = {}
    for c in (0.5, 1.0, 2.0):
        f = make_f0(c)
        sp = check_superadditivity(f, BIG)
        cc = check_concavity(f, BIG)
        checks[f"Sp c={c}"] = sp.status is Status.SATISFIED and sp.samples_checked == BIG.count
        checks[f"Cc c={c}"] = cc.status is Status.SATISFIED and cc.samples_checked == BIG.count
        x1, x2 = sample_pairs_additive(f.region, BIG)
        checks[f"regimes >= 1e4 c={c}"] = min(_regime_counts(c, x1, x2)) >= 10_000
    f = make_f0(1.0)
    h = check_homogeneity(f, MID)
    checks["H falsified c=1"] = h.status is Status.FALSIFIED and h.witness.violation >= LOG2 - 1e-6
    # the textbook witness x = 1, lam = 2 has violation exactly log 2
    h1 = check_homogeneity(f, MID, points=[[1.0]], lams=[2.0])
    checks["H witness (1, 2) = log 2"] = h1.status is Status.FALSIFIED and abs(h1.witness.violation - LOG2) < 1e-12
    est = estimate_apex_liminf(f)
    i5 = est.radii.index(1e-5)
    checks["liminf diverges"] = est.classification is LiminfClass.DIVERGES
    checks["shell 1e-5 near -11.51"] = abs(est.shell_infima[i5] - (-11.51)) <= 0.5
    g = make_f0_multi(1.0, 2)
    checks["sum field Sp"] = check_superadditivity(g, BIG).status is Status.SATISFIED
    checks["sum field Cc"] = check_concavity(g, BIG).status is Status.SATISFIED
    checks["sum field not H"] = check_homogeneity(g, MID).status is Status.FALSIFIED
    checks["sum field liminf diverges"] = estimate_apex_liminf(g).classification is LiminfClass.DIVERGES
    return checks


def test_criterion_1_counterexample():
    assert record("criterion 1", criterion_1())


# ---------------------------------------------------------------------------
# 2. slope-mode fidelity
# ---------------------------------------------------------------------------

def criterion_2() -> dict[str, bool]:
    f = make_f0(3.0, "PaperSquared")
    x0, h = 2 / 3, 1e-6
    right = (f([x0 + h]) - f([x0])) / h
    left = (f([x0]) - f([x0 - h])) / h
    w = falsify(f, "Cc")
    return {
        "jump 0.75": abs(abs(right - left) - 0.75) <= 1e-3,
        "slope increases": right > left,
        "PaperSquared Cc witness": w.status is Status.FALSIFIED and witness_holds(f, w.witness),
        "Tangent c=3 Cc": check_concavity(make_f0(3.0), BIG).status is Status.SATISFIED,
    }


def test_criterion_2_slope_modes():
    assert record("criterion 2", criterion_2())


# ---------------------------------------------------------------------------
# 3. Bekenstein-Hawking
# ---------------------------------------------------------------------------

def criterion_3_attainable() -> dict[str, bool]:
    f = make_bh_entropy(0.0)
    pts = sample_region(f.region, MID)[:1000]
    M, J = pts[:, 0], pts[:, 1]
    ref = math.pi * (2 * M**2 + 2 * M * np.sqrt(M**2 - (J / M) ** 2))
    rel = np.max(np.abs(f(pts) - ref) / np.abs(ref))
    sp = check_superadditivity(f, BIG, strict=True)
    cc = falsify(f, "Cc")
    h = check_homogeneity(f, MID)
    est = estimate_apex_liminf(f)
    ded = deduce_third_property(sp, h, est)
    return {
        "formula 1e-12 rel": rel <= 1e-12,
        "strict Sp on 1e5, min margin > 0": sp.status is Status.SATISFIED and sp.diagnostics["min_margin"] > 0
        and sp.samples_checked == BIG.count,
        "d2S/dM2 at (1, 1e-6) = 8 pi": abs(_second_m(f, [1.0, 1e-6]) - 8 * math.pi) <= 0.01,
        "Cc witness verified": cc.status is Status.FALSIFIED and witness_holds(f, cc.witness),
        "H fails": h.status is Status.FALSIFIED,
        "liminf OK": est.ok,
        "deduces not-Cc": ded.rule is Rule.SP_NOTH_LIMINF_IMPLIES_NOTCC and ded.deduced == ("Cc", False),
    }


def criterion_3_unattainable() -> dict[str, bool]:
    # Stated literally; see the decisions ledger for why neither can hold.
    f = make_bh_entropy(0.0)
    pts = sample_region(f.region, SampleConfig(seed=0, count=100))
    d2 = np.array([_second_m(f, x) for x in pts])
    return {
        "S(1, 0.5) = 11.72439 +- 1e-4": abs(f([1.0, 0.5]) - 11.72439) <= 1e-4,
        "d2S/dM2 >= 4 at 100 sampled points": bool(np.all(d2 >= 4 * (1 - 1e-3))),
    }


def criterion_3() -> dict[str, bool]:
    return {**criterion_3_attainable(), **criterion_3_unattainable()}


def test_criterion_3_attainable_parts():
    checks = criterion_3_attainable()
    assert all(checks.values()), checks


@pytest.mark.xfail(strict=True, reason="stated value 11.72439 and the bound d2S/dM2 >= 4 are both false")
def test_criterion_3_bekenstein_hawking():
    assert record("criterion 3", criterion_3())


# ---------------------------------------------------------------------------
# 4. photon gas
# ---------------------------------------------------------------------------

def criterion_4() -> dict[str, bool]:
    f = make_photon_entropy()
    x = sample_region(f.region, MID)
    lam = np.exp(np.random.default_rng(4).uniform(math.log(1e-3), math.log(1e3), size=len(x)))
    fx = f(x)
    rel = np.max(np.abs(f(lam[:, None] * x) - lam * fx) / np.abs(lam * fx))
    cc = check_concavity(f, BIG)
    pts = sample_region(f.region, SampleConfig(seed=0, count=100, coord_range=(0.1, 10.0)))
    _, diag = check_concavity_hessian(f, pts)
    h = check_homogeneity(f, MID)
    ded = deduce_third_property(h, cc, estimate_apex_liminf(f))
    sp = check_superadditivity(f, BIG)
    eq = sample_region(f.region, MID)
    strict = check_superadditivity(f, None, strict=True, pairs=(eq, eq))
    return {
        "H 1e-12 rel on 1e4": rel <= 1e-12,
        "Cc": cc.status is Status.SATISFIED,
        "|det| <= 1e-6 at 100 points": bool(np.all(np.abs(diag.determinant) <= 1e-6)),
        "deduces Sp": ded.rule is Rule.HCC_IMPLIES_SP and ded.deduced == ("Sp", True),
        "Sp on 1e5": sp.status is Status.SATISFIED and sp.samples_checked == BIG.count,
        "strict Sp fails on x1 = x2": strict.status is Status.FALSIFIED and abs(strict.worst_margin) <= 1e-9 * 1e3,
    }


def test_criterion_4_photon():
    assert record("criterion 4", criterion_4())


# ---------------------------------------------------------------------------
# 5. one-dimensional triviality
# ---------------------------------------------------------------------------

def criterion_5() -> dict[str, bool]:
    grid = np.geomspace(1e-3, 1e3, 200)
    checks = {}
    for coeff in (3.0, -2.0, 0.5):
        f = make_linear([coeff])
        for v in (check_homogeneity(f, MID), check_superadditivity(f, MID), check_concavity(f, MID)):
            checks[f"{v.property} linear {coeff}"] = (
                v.status is Status.SATISFIED and v.diagnostics["max_abs_scaled_margin"] <= 1e-12
            )
        checks[f"ratio linear {coeff}"] = check_ratio_constancy_1d(f, grid).status is Status.SATISFIED
    sq = check_ratio_constancy_1d(make_power(0.5), grid)
    checks["sqrt fails ratio, 100% nonincreasing"] = (
        sq.status is Status.FALSIFIED and sq.diagnostics["nonincreasing_fraction"] == 1.0
    )
    checks["f0 fails ratio"] = check_ratio_constancy_1d(make_f0(1.0), grid).status is Status.FALSIFIED
    return checks


def test_criterion_5_one_dimension():
    assert record("criterion 5", criterion_5())


# ---------------------------------------------------------------------------
# 6. proof chain
# ---------------------------------------------------------------------------

def criterion_6() -> dict[str, bool]:
    f = make_photon_entropy()
    chain = check_homogeneity_chain(f, MID, n_max=12)
    checks = {
        f"{v.property}": v.status is Status.SATISFIED and v.diagnostics["max_abs_scaled_margin"] <= 1e-9
        for v in chain
    }
    checks["Chain23 on 1e4"] = chain[0].samples_checked == MID.count
    table = check_irrational_scaling(f, math.sqrt(2), (1.0, 1.0))
    gaps = [row["approach_gap"] for row in table.rows]
    expected = [0.414, 0.0858, 0.0142, 0.00245, 0.000420]
    checks["gaps match"] = all(abs(g - e) <= 1e-3 for g, e in zip(gaps, expected)) and len(gaps) >= 5
    checks["gaps strictly decreasing"] = all(a > b for a, b in zip(gaps, gaps[1:]))
    return checks


def test_criterion_6_chain():
    assert record("criterion 6", criterion_6())


# ---------------------------------------------------------------------------
# 7. continued fractions
# ---------------------------------------------------------------------------

def criterion_7() -> dict[str, bool]:
    checks = {"sqrt2 first five": [(c.p, c.q) for c in convergents(math.sqrt(2), 5)]
              == [(1, 1), (3, 2), (7, 5), (17, 12), (41, 29)]}
    for name, lam in (("sqrt2", math.sqrt(2)), ("golden", (1 + math.sqrt(5)) / 2), ("pi", math.pi)):
        cs = [c for c in convergents(lam, 60) if c.q <= 10**6]
        det = all(b.p * a.q - a.p * b.q == (-1) ** (b.k - 1) for a, b in zip(cs, cs[1:]))
        # even-indexed convergents sit below lam, odd-indexed above
        exact = Fraction(lam)
        enclose = all((c.fraction < exact) if c.k % 2 == 0 else (c.fraction > exact) for c in cs)
        checks[f"{name} determinant"] = det and len(cs) > 5
        checks[f"{name} enclosure"] = enclose
    return checks


def test_criterion_7_continued_fractions():
    assert record("criterion 7", criterion_7())


# ---------------------------------------------------------------------------
# 8. tooling determinism
# ---------------------------------------------------------------------------

def _cli(*args, env=None):
    return subprocess.run([sys.executable, "-m", "conelaw", *args], capture_output=True, text=True,
                          env={**os.environ, **(env or {})}).returncode


def criterion_8() -> dict[str, bool]:
    cfg = RunConfig("bekenstein", {"Q": 0.0}, ["Sp", "H", "Cc", "liminf"], SampleConfig(0, 5000),
                    deduce=True, falsify=["Cc"])
    a, b = run_suite(cfg), run_suite(cfg)
    witnesses = []
    for name, params in (("bekenstein", {"Q": 0.0}), ("f0", {"c": 3.0, "slope_mode": "PaperSquared"}),
                         ("photon", {})):
        r = run_suite(RunConfig(name, params, sample=SampleConfig(0, 5000), falsify=["H", "Sp", "Cc"]))
        f = resolve_field(r.config)
        witnesses += [(f, v.witness) for v in r.verdicts if v.status is Status.FALSIFIED]
    return {
        "byte-identical JSON": report_json(a, timing=False) == report_json(b, timing=False),
        "witnesses re-validate": bool(witnesses) and all(witness_holds(f, w) for f, w in witnesses),
        "photon exits 0": _cli("--field", "photon") == 0,
        "wrong expectation exits 1": _cli("--field", "photon", "--expect", "H=false") == 1,
        "bad flag exits 2": _cli("--field", "photon", "--no-such-flag") == 2,
    }


def test_criterion_8_determinism():
    assert record("criterion 8", criterion_8())


ALL = (criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7, criterion_8)

if __name__ == "__main__":
    for i, fn in enumerate(ALL, 1):
        record(f"criterion {i}", fn())
