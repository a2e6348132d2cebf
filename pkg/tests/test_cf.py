import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conelaw.cf import Convergent, convergents, partial_quotients
from conelaw.errors import ContractError

GOLDEN = (1 + math.sqrt(5)) / 2


def euclid_quotients(p: int, q: int) -> list[int]:
    out = []
    while q:
        out.append(p // q)
        p, q = q, p % q
    return out


def brute_convergents(lam: float, k: int) -> list[tuple[int, int]]:
    # independent oracle: evaluate each truncated expansion bottom-up
    out, x = [], Fraction(lam)
    quotients = []
    for _ in range(k):
        a = math.floor(x)
        quotients.append(a)
        value = Fraction(quotients[-1])
        for b in reversed(quotients[:-1]):
            value = b + 1 / value
        out.append((value.numerator, value.denominator))
        if x == a:
            break
        x = 1 / (x - a)
    return out


def test_sqrt2_first_five():
    got = [(c.p, c.q) for c in convergents(math.sqrt(2), 5)]
    assert got == [(1, 1), (3, 2), (7, 5), (17, 12), (41, 29)]
    assert got == brute_convergents(math.sqrt(2), 5)


def test_integer_terminates():
    assert convergents(2.0, 10) == [Convergent(0, 2, 1)]
    assert convergents(2, 10) == [Convergent(0, 2, 1)]


def test_rational_terminates_at_value():
    cs = convergents(Fraction(3, 7), 10)
    assert cs[-1].fraction == Fraction(3, 7)
    assert partial_quotients(Fraction(3, 7), 10) == euclid_quotients(3, 7)


def test_float_three_sevenths_matches_euclid():
    exact = Fraction(3 / 7)
    cs = convergents(3 / 7, 60, q_cap=10**30)
    assert cs[-1].fraction == exact
    assert [a for a in partial_quotients(3 / 7, 60, 10**30)] == euclid_quotients(exact.numerator, exact.denominator)


def test_q_cap_truncates():
    cs = convergents(math.pi, 100)
    assert all(c.q <= 10**8 for c in cs)
    assert len(cs) < 100


@pytest.mark.parametrize("bad", [0, -1.0, math.inf, math.nan, True, "2", 1 + 1j])
def test_bad_lambda(bad):
    with pytest.raises(ContractError):
        convergents(bad, 3)


def test_bad_kmax():
    with pytest.raises(ContractError):
        convergents(1.5, 0)


@pytest.mark.parametrize("lam", [math.sqrt(2), GOLDEN, math.pi])
def test_classical_invariants(lam):
    cs = convergents(lam, 40)
    exact = Fraction(lam)
    for c in cs:
        assert math.gcd(c.p, c.q) == 1
    for a, b in zip(cs, cs[1:]):
        assert b.p * a.q - a.p * b.q == (-1) ** (b.k - 1)
        assert abs(exact - a.fraction) < Fraction(1, a.q * b.q)
    for c in cs[:-1]:
        assert (c.fraction < exact) if c.k % 2 == 0 else (c.fraction > exact)


def test_golden_ratio_fibonacci():
    cs = convergents(GOLDEN, 10)
    assert [c.p for c in cs] == [1, 2, 3, 5, 8, 13, 21, 34, 55, 89]


@settings(max_examples=100)
@given(p=st.integers(1, 10**6), q=st.integers(1, 10**6))
def test_fraction_round_trip(p, q):
    cs = convergents(Fraction(p, q), 100, q_cap=10**12)
    assert cs[-1].fraction == Fraction(p, q)
    assert partial_quotients(Fraction(p, q), 100, 10**12) == euclid_quotients(*Fraction(p, q).as_integer_ratio())


@settings(max_examples=100)
@given(lam=st.floats(1e-6, 1e6, allow_nan=False, allow_infinity=False))
def test_determinant_identity_for_floats(lam):
    cs = convergents(lam, 30)
    for a, b in zip(cs, cs[1:]):
        assert b.p * a.q - a.p * b.q == (-1) ** (b.k - 1)
    assert cs[0].p == math.floor(lam) and cs[0].q == 1
