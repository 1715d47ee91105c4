from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from siegel_lab.exact_math import is_fundamental, l_value_neg
from siegel_lab.kohnen_plus import (
    PlusTableError,
    UnsupportedDiscriminant,
    builtin_table,
    cohen_eisenstein_coeff,
    hecke_l2_sides,
    ingest_plus_table,
    parse_plus_table,
    plus_support,
    propagate_eq2,
)
from siegel_lab.stabilize import synthetic_plus


@pytest.fixture(scope="module")
def h13(f12):
    return builtin_table("h13_2", f12)


@pytest.fixture(scope="module")
def h33(f32):
    return builtin_table("h33_2", f32)


def test_plus_support():
    assert plus_support(6, 5)
    assert not plus_support(6, 2)
    assert plus_support(9, 3)
    assert not plus_support(9, 1)


def test_h13_listing(h13):
    listed = {1: 1, 4: -56, 5: 120, 8: -240, 9: 9, 12: 1440}
    assert {m: h13.coefficient(m).to_rational() for m in listed} == listed
    assert propagate_eq2(h13, 2).is_zero()


def test_h33_listing(h33, f32):
    x = f32.field.gen
    listed = {
        1: f32.field.one,
        4: x - 32768,
        5: x * 2 - 65568,
        8: x * 218 - 7116672,
        9: x * 432 - 14298687,
        12: -(x * 2916 - 103037184),
    }
    for m, v in listed.items():
        assert h33.coefficient(m) == v


def test_fundamental_index_is_stored(h13):
    for m in (1, 5, 8, 12):
        assert propagate_eq2(h13, m) == h13.coeffs[m]


def test_unsupported_discriminant(h13):
    with pytest.raises(UnsupportedDiscriminant):
        h13.coefficient(13)


def test_cohen_eisenstein():
    assert cohen_eisenstein_coeff(2, 5) == Fraction(-2, 5)
    assert cohen_eisenstein_coeff(6, 1) == Fraction(-1, 252)
    assert cohen_eisenstein_coeff(2, 4) == Fraction(-7, 12)


@given(st.integers(1, 300), st.sampled_from([2, 4, 6]))
def test_cohen_eisenstein_fundamental_is_l_value(m, k):
    d = (-1) ** k * m
    if not is_fundamental(d):
        return
    assert cohen_eisenstein_coeff(k, m) == l_value_neg(k, d)


@pytest.mark.parametrize("l", [2, 3, 5, 7])
def test_h13_hecke_compatible(h13, l):
    synthetic = synthetic_plus(6, h13.field, h13.eigenform, seed=7)
    for m in range(1, 101):
        if not plus_support(6, m) or m * l * l > 100 * l * l:
            continue
        for h in (h13, synthetic):
            try:
                lhs, rhs = hecke_l2_sides(h, m, l)
            except UnsupportedDiscriminant:
                continue
            assert lhs == rhs, (m, l)


def test_ingest_round_trip(tmp_path, f12):
    path = tmp_path / "h.txt"
    path.write_text("k: 6\n1 1\n5 120\n8 -240\n12 1440\n")
    h = ingest_plus_table(path, f12)
    assert h.coefficient(8).to_rational() == -240
    assert h.coefficient(4).to_rational() == -56


def test_h33_parse(h33, f32):
    assert h33.coeffs[5] == f32.field.gen * 2 - 65568


@pytest.mark.parametrize(
    "text",
    ["", "# only a comment\n", "1 1\n", "k: 6\n3 7\n", "k: 6\nfive 1\n", "k: 7\n1 1\n", "k: 6\nbogus: 3\n1 1\n"],
)
def test_bad_tables(text):
    with pytest.raises(PlusTableError):
        parse_plus_table(text)


def test_weight_mismatch(f32):
    with pytest.raises(PlusTableError):
        parse_plus_table("k: 6\n1 1\n", f32)
