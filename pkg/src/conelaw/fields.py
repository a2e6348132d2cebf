"""Scalar fields on regions, and the catalog of concrete fields."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping, Optional, Sequence

import numpy as np

from conelaw.domain import ClosedInterval, Region, as_points, kerr_newman_region, orthant
from conelaw.errors import ContractError, DomainError

SLOPE_MODES = ("Tangent", "PaperSquared")


@dataclass(frozen=True)
class ScalarField:
    """A named real-valued function on a region.

    ``func`` and ``grad`` are vectorized: they take an ``(n, d)`` array of
    region members and return ``(n,)`` values or ``(n, d)`` gradients.
    Calling the field checks membership first and raises ``DomainError``
    for points outside the region.
    """

    name: str
    region: object
    func: Callable[[np.ndarray], np.ndarray] = field(compare=False, repr=False)
    grad: Optional[Callable[[np.ndarray], np.ndarray]] = field(default=None, compare=False, repr=False)
    declared_properties: Mapping[str, bool] = field(default_factory=dict)
    params: Mapping[str, object] = field(default_factory=dict)

    @property
    def dimension(self) -> int:
        return self.region.dimension

    def __call__(self, points):
        single = np.ndim(points) == 1
        pts = as_points(points, self.dimension)
        inside = self.region.contains(pts)
        if not inside.all():
            bad = pts[~inside][0]
            raise DomainError(f"{self.name}: point {bad.tolist()} outside region")
        values = np.asarray(self.func(pts), dtype=float)
        return float(values[0]) if single else values

    def gradient(self, points):
        if self.grad is None:
            raise ContractError(f"{self.name} has no closed-form gradient")
        single = np.ndim(points) == 1
        pts = as_points(points, self.dimension)
        if not self.region.contains(pts).all():
            raise DomainError(f"{self.name}: gradient requested outside region")
        g = np.asarray(self.grad(pts), dtype=float)
        return g[0] if single else g


def negate(f: ScalarField) -> ScalarField:
    """The field ``-f``: superadditivity/concavity checks on it test sub-additivity/convexity of ``f``."""
    dual = {"Sp": "S", "Cc": "Cv", "S": "Sp", "Cv": "Cc", "SpStrict": "SStrict", "CcStrict": "CvStrict"}
    declared = {}
    for key, val in f.declared_properties.items():
        if key in dual:
            declared[dual[key]] = val
        elif key == "H":
            declared[key] = val
    grad = None if f.grad is None else (lambda pts, g=f.grad: -g(pts))
    return ScalarField(
        name=f"-{f.name}",
        region=f.region,
        func=lambda pts, fn=f.func: -fn(pts),
        grad=grad,
        declared_properties=declared,
        params=dict(f.params),
    )


def _f0_slope(c: float, slope_mode: str) -> float:
    if slope_mode == "Tangent":
        return c / 2
    if slope_mode == "PaperSquared":
        return (c / 2) ** 2
    raise ContractError(f"slope_mode must be one of {SLOPE_MODES}, got {slope_mode!r}")


def _f0_scalar_parts(c: float, slope: float):
    knot = 2.0 / c

    def value(x: np.ndarray) -> np.ndarray:
        out = np.empty_like(x)
        left = x <= knot
        out[left] = np.log(c * x[left])
        out[~left] = math.log(2.0) + slope * (x[~left] - knot)
        return out

    def deriv(x: np.ndarray) -> np.ndarray:
        return np.where(x <= knot, 1.0 / x, slope)

    return value, deriv


def make_f0(c: float, slope_mode: str = "Tangent") -> ScalarField:
    """Log branch on ``(0, 2/c]`` joined to a straight line on ``(2/c, inf)``.

    ``Tangent`` uses slope ``c/2`` (the tangent of the log at the knot, giving
    a C^1, concave, superadditive function). ``PaperSquared`` uses ``(c/2)**2``.
    """
    if not (isinstance(c, (int, float)) and 0 < c < math.inf):
        raise ContractError(f"c must be a positive finite real, got {c!r}")
    c = float(c)
    slope = _f0_slope(c, slope_mode)
    value, deriv = _f0_scalar_parts(c, slope)
    if slope_mode == "Tangent":
        declared = {"Sp": True, "Cc": True, "H": False, "LiminfOK": False, "RatioConstant": False}
    else:
        # The knot is concave iff the line is no steeper than the log there;
        # the ratio f/x is nondecreasing (so f superadditive) iff c/2 >= log 2.
        declared = {
            "Cc": slope <= c / 2,
            "Sp": c / 2 >= math.log(2.0),
            "H": False,
            "LiminfOK": False,
            "RatioConstant": False,
        }
    return ScalarField(
        name="f0",
        region=orthant(1),
        func=lambda pts: value(pts[:, 0]),
        grad=lambda pts: deriv(pts[:, 0])[:, None],
        declared_properties=declared,
        params={"c": c, "slope_mode": slope_mode},
    )


def make_f0_multi(c: float, d: int) -> ScalarField:
    """Coordinate-wise sum of the tangent-mode f0 on the positive orthant of R^d."""
    if not (isinstance(d, int) and d >= 1):
        raise ContractError(f"d must be a positive integer, got {d!r}")
    base = make_f0(c, "Tangent")
    value, deriv = _f0_scalar_parts(float(c), float(c) / 2)
    declared = {k: v for k, v in base.declared_properties.items() if k != "RatioConstant"}
    return ScalarField(
        name="f0-multi",
        region=orthant(d),
        func=lambda pts: value(pts.ravel()).reshape(pts.shape).sum(axis=1),
        grad=lambda pts: deriv(pts.ravel()).reshape(pts.shape),
        declared_properties=declared,
        params={"c": float(c), "dim": d},
    )


def make_bh_entropy(Q: float = 0.0, on_cone: bool = False) -> ScalarField:
    """Kerr-Newman entropy ``pi(2M^2 + 2M sqrt(M^2 - (J/M)^2 - Q^2) - Q^2)`` of ``(M, J)``.

    By default the region is the physical one, ``M^2 > (J/M)^2 + Q^2``.
    With ``on_cone=True`` the region is the whole positive quadrant; the
    formula is still only real on the physical part, and evaluation outside
    it raises ``DomainError``.
    """
    if not (isinstance(Q, (int, float)) and 0 <= Q < math.inf):
        raise ContractError(f"Q must be a nonnegative finite real, got {Q!r}")
    Q = float(Q)

    def radicand(pts):
        M, J = pts[:, 0], pts[:, 1]
        return M**2 - (J / M) ** 2 - Q**2

    def value(pts):
        rad = radicand(pts)
        if np.any(rad <= 0):
            bad = pts[rad <= 0][0]
            raise DomainError(f"bekenstein: M^2 <= (J/M)^2 + Q^2 at {bad.tolist()}")
        M = pts[:, 0]
        return np.pi * (2 * M**2 + 2 * M * np.sqrt(rad) - Q**2)

    def grad(pts):
        M, J = pts[:, 0], pts[:, 1]
        root = np.sqrt(radicand(pts))
        dM = np.pi * (4 * M + 2 * root + M * (2 * M + 2 * J**2 / M**3) / root)
        dJ = -2 * np.pi * J / (M * root)
        return np.stack([dM, dJ], axis=1)

    region = orthant(2) if on_cone else kerr_newman_region(Q)
    return ScalarField(
        name="bekenstein",
        region=region,
        func=value,
        grad=grad,
        declared_properties={"Sp": True, "SpStrict": True, "H": False, "Cc": False, "LiminfOK": True},
        params={"Q": Q, "on_cone": on_cone},
    )


def make_photon_entropy() -> ScalarField:
    """``E^(3/4) V^(1/4)`` on the positive quadrant."""

    def value(pts):
        E, V = pts[:, 0], pts[:, 1]
        return E**0.75 * V**0.25

    def grad(pts):
        E, V = pts[:, 0], pts[:, 1]
        s = E**0.75 * V**0.25
        return np.stack([0.75 * s / E, 0.25 * s / V], axis=1)

    return ScalarField(
        name="photon",
        region=orthant(2),
        func=value,
        grad=grad,
        declared_properties={
            "H": True,
            "Sp": True,
            "Cc": True,
            "LiminfOK": True,
            "SpStrict": False,
            "CcStrict": False,
        },
    )


def make_linear(coeffs: Sequence[float], signs: Sequence[int] = ()) -> ScalarField:
    """``sum_i coeffs[i] * x[i]`` on an orthant (positive by default)."""
    c = np.asarray(coeffs, dtype=float)
    if c.ndim != 1 or len(c) < 1 or not np.all(np.isfinite(c)):
        raise ContractError(f"coeffs must be a nonempty list of finite reals, got {coeffs!r}")
    region = orthant(len(c), signs)
    declared = {
        "H": True,
        "Sp": True,
        "Cc": True,
        "LiminfOK": True,
        "SpStrict": False,
        "CcStrict": False,
    }
    if len(c) == 1:
        declared["RatioConstant"] = True
    return ScalarField(
        name="linear",
        region=region,
        func=lambda pts: pts @ c,
        grad=lambda pts: np.broadcast_to(c, pts.shape).copy(),
        declared_properties=declared,
        params={"coeffs": c.tolist(), "signs": list(region.cone.axis_signs)},
    )


def make_boundary_phi() -> ScalarField:
    """Zero on [0, 1), one at x = 1: convex on the closed interval, discontinuous at 1."""
    return ScalarField(
        name="boundary-phi",
        region=ClosedInterval(0.0, 1.0),
        func=lambda pts: np.where(pts[:, 0] == 1.0, 1.0, 0.0),
        declared_properties={"Cv": True, "Cc": False, "Continuous": False},
    )


def make_power(exponent: float, coeff: float = 1.0) -> ScalarField:
    """``coeff * x**exponent`` on the positive half-line."""
    return ScalarField(
        name="power",
        region=orthant(1),
        func=lambda pts: coeff * pts[:, 0] ** exponent,
        grad=lambda pts: (coeff * exponent * pts[:, 0] ** (exponent - 1))[:, None],
        declared_properties={"H": exponent == 1},
        params={"exponent": exponent, "coeff": coeff},
    )


CATALOG = ("f0", "f0-multi", "bekenstein", "photon", "linear", "boundary-phi")


def build_field(name: str, c: float = 1.0, slope_mode: str = "Tangent", dim: int = 2,
                Q: float = 0.0, coeffs: Optional[Sequence[float]] = None) -> ScalarField:
    """Resolve a catalog name and its parameters to a field."""
    if name == "f0":
        return make_f0(c, slope_mode)
    if name == "f0-multi":
        return make_f0_multi(c, dim)
    if name == "bekenstein":
        return make_bh_entropy(Q)
    if name == "photon":
        return make_photon_entropy()
    if name == "linear":
        return make_linear(coeffs if coeffs is not None else [1.0])
    if name == "boundary-phi":
        return make_boundary_phi()
    raise ContractError(f"unknown field {name!r}; valid fields: {', '.join(CATALOG)}")
