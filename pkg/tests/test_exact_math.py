from fractions import Fraction
from math import gcd

import pytest
import sympy
from hypothesis import assume, given
from hypothesis import strategies as st

from siegel_lab.exact_math import (
    DiscriminantError,
    ParityError,
    bernoulli,
    congruent_mod,
    divisor_power_sum,
    factor_integer,
    fundamental_decomposition,
    generalized_bernoulli,
    is_fundamental,
    is_prime,
    kronecker,
    l_value_neg,
    moebius,
    valuation,
    zeta_neg,
)


@pytest.mark.parametrize("d, m, expected", [(1, 11, 1), (-4, 7, -1), (12, 35, 1), (5, 2, -1), (-3, 2, -1), (8, 3, -1)])
def test_kronecker_values(d, m, expected):
    assert kronecker(d, m) == expected


@given(st.integers(-400, 400), st.integers(1, 300).filter(lambda m: m % 2))
def test_kronecker_matches_jacobi_for_odd_modulus(d, m):
    assert kronecker(d, m) == sympy.jacobi_symbol(d, m)


@given(st.integers(-200, 200).filter(lambda d: d % 4 in (0, 1)), st.integers(1, 100), st.integers(1, 100))
def test_kronecker_multiplicative_in_modulus(d, m, n):
    assert kronecker(d, m * n) == kronecker(d, m) * kronecker(d, n)


def test_moebius_and_sigma():
    assert moebius(6) == 1
    assert moebius(12) == 0
    assert moebius(30) == -1
    assert divisor_power_sum(2, 11) == 2049


@given(st.integers(1, 2000))
def test_moebius_matches_sympy(n):
    assert moebius(n) == sympy.mobius(n)


@pytest.mark.parametrize("D, d, f", [(121, 1, 11), (-48, -3, 4), (-4, -4, 1), (-16, -4, 2), (5, 5, 1), (-44, -11, 2)])
def test_fundamental_decomposition(D, d, f):
    dec = fundamental_decomposition(D)
    assert (dec.fundamental, dec.conductor) == (d, f)
    assert is_fundamental(d)


def test_bad_discriminant_rejected():
    with pytest.raises(DiscriminantError):
        fundamental_decomposition(7)


@given(st.integers(-3000, 3000).filter(lambda D: D != 0 and D % 4 in (0, 1)))
def test_decomposition_reassembles(D):
    dec = fundamental_decomposition(D)
    assert dec.fundamental * dec.conductor**2 == D


def test_bernoulli_and_l_values():
    assert bernoulli(12) == Fraction(-691, 2730)
    assert generalized_bernoulli(2, 5) == Fraction(4, 5)
    assert zeta_neg(12) == Fraction(691, 32760)
    assert zeta_neg(4) == Fraction(1, 120)
    assert l_value_neg(2, 5) == Fraction(-2, 5)


@pytest.mark.parametrize("k", [2, 4, 10, 20, 32])
def test_bernoulli_matches_sympy(k):
    assert bernoulli(k) == Fraction(str(sympy.bernoulli(k)))


def _gen_bernoulli_oracle(k, d):
    # B_{k,chi} = f^(k-1) sum_a chi(a) B_k(a/f)
    f = abs(d)
    x = sympy.Symbol("x")
    total = sum(kronecker(d, a) * sympy.bernoulli(k, x).subs(x, sympy.Rational(a, f)) for a in range(1, f + 1))
    return Fraction(str(sympy.nsimplify(total * f ** (k - 1))))


@pytest.mark.parametrize("k, d", [(2, 5), (4, 5), (1, -3), (3, -4), (2, 8), (2, 12), (1, -23)])
def test_generalized_bernoulli_oracle(k, d):
    assert generalized_bernoulli(k, d) == _gen_bernoulli_oracle(k, d)


def test_l_value_parity():
    with pytest.raises(ParityError):
        zeta_neg(11)


def test_euler_factor_removal():
    # removing the factor at p multiplies by 1 - chi(p) p^(k-1)
    assert zeta_neg(12, 11) == zeta_neg(12) * (1 - 11**11)
    assert l_value_neg(2, 5, 3) == l_value_neg(2, 5) * (1 - kronecker(5, 3) * 3)


def test_primality():
    assert is_prime(35058959130397)
    assert not is_prime(35058959130397 * 7)
    assert not is_prime(1)
    assert is_prime(2)


@given(st.integers(1, 10**6))
def test_primality_matches_sympy(n):
    assert is_prime(n) == sympy.isprime(n)


@given(st.integers(2, 10**12))
def test_factorization_reassembles(n):
    fac = factor_integer(n)
    assert fac.value() == n
    assert all(is_prime(p) for p in fac.factors)


def test_valuation_and_congruence():
    assert valuation(11**5 * 3, 11) == 5
    assert congruent_mod(Fraction(1, 3), Fraction(8, 3), 7, 1)
    assert not congruent_mod(Fraction(1, 3), Fraction(8, 3), 7, 2)


@given(st.integers(1, 500), st.integers(1, 500))
def test_sigma_multiplicative(m, n):
    assume(gcd(m, n) == 1)
    assert divisor_power_sum(m * n, 3) == divisor_power_sum(m, 3) * divisor_power_sum(n, 3)
