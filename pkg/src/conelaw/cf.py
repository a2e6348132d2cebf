"""Continued-fraction convergents in exact integer arithmetic."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational, Real

from conelaw.errors import ContractError

Q_CAP = 10**8


@dataclass(frozen=True)
class Convergent:
    k: int
    p: int
    q: int

    @property
    def value(self) -> float:
        return self.p / self.q

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.p, self.q)


def partial_quotients(lam, k_max: int, q_cap: int = Q_CAP) -> list[int]:
    return [_a for _a, _ in _expand(lam, k_max, q_cap)]


def _expand(lam, k_max: int, q_cap: int):
    # The float is converted to the exact rational it represents, so the
    # expansion below is exact; q_cap marks where it stops saying anything
    # about the real number the float approximates.
    x = lam if isinstance(lam, Rational) else Fraction(float(lam))
    p_prev2, p_prev = 0, 1
    q_prev2, q_prev = 1, 0
    for _ in range(k_max):
        a = math.floor(x)
        p, q = a * p_prev + p_prev2, a * q_prev + q_prev2
        if q > q_cap:
            return
        yield a, (p, q)
        p_prev2, p_prev = p_prev, p
        q_prev2, q_prev = q_prev, q
        frac = x - a
        if frac == 0:
            return
        x = 1 / frac


def convergents(lam, k_max: int, q_cap: int = Q_CAP) -> list[Convergent]:
    """Convergents ``p_k/q_k`` of ``lam``, for ``k = 0, 1, ...`` up to ``k_max`` of them.

    Floats are expanded as the exact binary rational they hold; ``Fraction``
    and ``int`` inputs are expanded exactly. The expansion stops early when
    the remainder vanishes or ``q_k`` would exceed ``q_cap``.
    """
    if isinstance(lam, bool) or not isinstance(lam, Real):
        raise ContractError(f"lambda must be a real number, got {lam!r}")
    if not isinstance(lam, Rational) and not math.isfinite(float(lam)):
        raise ContractError("lambda must be finite")
    if lam <= 0:
        raise ContractError("lambda must be positive")
    if k_max < 1:
        raise ContractError("k_max must be at least 1")
    return [Convergent(k, p, q) for k, (_, (p, q)) in enumerate(_expand(lam, k_max, q_cap))]
