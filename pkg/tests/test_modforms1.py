from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given
from hypothesis import strategies as st

from siegel_lab.exact_math import divisor_power_sum, primes_up_to, zeta_neg
from siegel_lab.modforms1 import (
    cusp_basis,
    cusp_form_dimension,
    delta_qexp,
    eisenstein_p_stabilize,
    eisenstein_qexp,
    hecke_Tm,
    is_ordinary,
    ordinary_p_stabilize,
    ramanujan_tau,
)
from siegel_lab.acceptance import F32_COEFFS, F32_FIELD


def _delta_product(prec):
    # q * prod (1 - q^n)^24, multiplied out factor by factor
    out = [0] * (prec + 1)
    out[1] = 1
    for n in range(1, prec + 1):
        for _ in range(24):
            for i in range(prec, n - 1, -1):
                out[i] -= out[i - n]
    return out


DELTA = _delta_product(40)


def test_tau_against_product_expansion():
    assert [ramanujan_tau(m) for m in range(1, 41)] == DELTA[1:]
    assert (ramanujan_tau(2), ramanujan_tau(3), ramanujan_tau(11)) == (-24, 252, 534612)
    assert list(delta_qexp(40).coeffs) == DELTA


def test_eisenstein_qexp():
    E4 = eisenstein_qexp(4, 6)
    assert E4[0] == Fraction(1, 240)
    assert E4[1] == 1
    assert eisenstein_qexp(12, 3)[2] == 2049
    with pytest.raises(ValueError):
        eisenstein_qexp(5, 3)


def test_dimensions():
    assert cusp_form_dimension(12) == 1
    assert cusp_form_dimension(32) == 2
    assert cusp_form_dimension(10) == 0
    assert [len(cusp_basis(w, 6)) for w in (12, 24, 32)] == [1, 2, 2]


def test_hecke_on_delta():
    D = delta_qexp(60)
    T2 = hecke_Tm(D, 2)
    assert all(T2[n] == -24 * D[n] for n in range(1, T2.prec + 1))
    assert hecke_Tm(D, 1).coeffs[1:] == D.coeffs[1:]
    T2T3 = hecke_Tm(hecke_Tm(D, 3), 2)
    T6 = hecke_Tm(D, 6)
    assert T2T3.coeffs[1:] == T6.coeffs[1: T2T3.prec + 1]


def test_f32_field_and_coefficients(f32):
    assert f32.field.poly_str() == F32_FIELD
    x = f32.field.gen
    for m, (a, b) in F32_COEFFS.items():
        assert f32.coeff(m) == x * a + b


def test_eigenform_congruence_mod_11(f12, f32):
    for m in range(1, 12):
        diff = f32.field(f12.coeff(m).to_rational()) - f32.coeff(m)
        assert diff.norm() % 11 == 0


@pytest.mark.parametrize("weight", [12, 18, 32])
def test_hecke_relations(weight):
    from siegel_lab.acceptance import eigenform

    f = eigenform(weight)
    for m in range(1, f.prec + 1):
        for n in range(1, f.prec // m + 1):
            if gcd(m, n) == 1:
                assert f.coeff(m * n) == f.coeff(m) * f.coeff(n)
    for p in primes_up_to(5):
        assert f.coeff(p**2) == f.coeff(p) ** 2 - Fraction(p) ** (weight - 1)


def test_ordinarity(f12):
    assert is_ordinary(f12, 11)
    assert not is_ordinary(f12, 7)  # tau(7) = -16744 = 0 mod 7
    assert ramanujan_tau(2411) % 2411 == 0


def test_ordinary_stabilization(f12):
    ring, fs = ordinary_p_stabilize(f12, 11)
    assert fs[1] == ring.one
    assert fs[11] == ring.alpha
    assert fs[2] == ring.scalar(-24)
    for m in range(1, fs.prec // 11 + 1):
        assert fs[11 * m] == ring.alpha * fs[m]


def test_eisenstein_stabilization():
    p, w = 11, 12
    E = eisenstein_p_stabilize(w, p, 40)
    assert E[0] == zeta_neg(w) * (1 - p ** (w - 1)) / 2
    assert E[1] == 1
    assert E[p] == 1
    # alpha = 1, beta = p^(2k-1) in the ordinary recipe
    for m in range(1, 41):
        expected = divisor_power_sum(m, w - 1) - (p ** (w - 1) * divisor_power_sum(m // p, w - 1) if m % p == 0 else 0)
        assert E[m] == expected


@given(st.integers(1, 5), st.sampled_from([5, 7, 13]))
def test_eisenstein_stabilization_is_up_eigen(m, p):
    E = eisenstein_p_stabilize(12, p, 70)
    assert E[p * m] == E[m]
