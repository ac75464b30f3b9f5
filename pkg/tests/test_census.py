from fractions import Fraction

import pytest

from gspcensus.census import (
    CensusParams,
    abvar_leading,
    eigen_census,
    eigen_proportion,
    eigenone_deviation,
    psitow_bounds,
    s_count,
    t_count,
    t_table,
    tau,
)
from gspcensus.charpolys import PropertyTag, has_property
from gspcensus.errors import DomainError
from gspcensus.poly import Poly
from gspcensus.symplectic import sp_order


def test_s_count_examples():
    assert s_count(1, 1, 3) == 9
    assert s_count(1, 2, 3) == 12
    assert s_count(2, 2, 3) == 9720


@pytest.mark.parametrize("g,ell,gamma", [(1, 3, 1), (1, 3, 2), (1, 5, 1), (1, 5, 4), (2, 3, 1), (2, 3, 2)])
def test_s_count_is_delta_of_the_eigenvalue_block(g, ell, gamma, get_histogram):
    # S(g, gamma) counts elements with charpoly (x-1)^g (x-gamma)^g (unipotents for gamma = 1)
    f = Poly.from_roots([1] * g + [gamma] * g, ell)
    assert get_histogram(g, ell, gamma)[f] == s_count(g, gamma, ell)


def test_t_count_examples():
    assert t_count(1, 2, 3) == 12
    assert t_count(1, 1, 3) == 9
    assert t_count(2, 2, 3) == 22680


def test_t_base_case_paths_agree():
    for ell in (3, 5, 7):
        for gamma in range(1, ell):
            assert t_table(1, gamma, ell)[1] == s_count(1, gamma, ell)


def test_eigen_proportion_examples():
    assert eigen_proportion(2, 2, 3) == Fraction(7, 16)
    assert eigen_proportion(1, 2, 3) == Fraction(1, 2)
    assert eigen_proportion(1, 1, 3) == Fraction(3, 8)


def test_tau_examples():
    assert tau(2, 3) == Fraction(1, 2)
    assert tau(1, 3) == Fraction(3, 8)
    assert tau(1, 5) == Fraction(5, 24)


def test_eigenone_deviation_examples():
    for ell in (3, 5, 7, 11):
        assert eigenone_deviation(1, 2, ell) == 0
    assert eigenone_deviation(2, 2, 3) == Fraction(1, 2)
    assert eigenone_deviation(2, 2, 5) == Fraction(2, 3)


def test_psitow_bounds_examples():
    assert psitow_bounds(1, 1, 3) == (Fraction(9, 64), Fraction(9, 8))
    assert psitow_bounds(0, 2, 7) == (0, 0)
    assert psitow_bounds(3, 1, 3) == (Fraction(27, 64), Fraction(27, 8))
    with pytest.raises(DomainError):
        psitow_bounds(4, 1, 3)


def test_abvar_leading():
    assert abvar_leading(3) == Fraction(3, 8)
    assert abvar_leading(5) == Fraction(5, 24)
    assert abvar_leading(2) == Fraction(2, 3)
    for ell in (3, 5, 7, 11):
        assert abvar_leading(ell) == tau(1, ell)


@pytest.mark.parametrize("ell", [3, 5, 7, 11, 13, 17, 19])
def test_g2_closed_form(ell):
    for gamma in range(2, ell):
        assert eigen_proportion(2, gamma, ell) == Fraction(ell * ell - 2, (ell - 1) ** 2 * (ell + 1))


@pytest.mark.parametrize("g", [1, 2, 3, 4, 5])
@pytest.mark.parametrize("ell", [2, 3, 5, 7, 31])
def test_t_count_range_and_gamma_independence(g, ell):
    values = {gamma: t_count(g, gamma, ell) for gamma in range(1, ell)}
    for v in values.values():
        assert 0 <= v <= sp_order(g, ell)
        assert abs(Fraction(v, sp_order(g, ell)) - tau(1 if ell == 2 else 2, ell)) <= 1
    assert len({v for gm, v in values.items() if gm != 1}) <= 1


@pytest.mark.parametrize("g,ell", [(1, 3), (1, 5), (1, 7), (2, 3)])
def test_t_count_is_sum_of_delta_over_psi_e(g, ell, get_histogram):
    for gamma in range(1, ell):
        hist = get_histogram(g, ell, gamma)
        assert sum(n for f, n in hist.items() if has_property(f, gamma, PropertyTag.E)) == t_count(g, gamma, ell)


def test_eigen_census_record():
    ec = eigen_census(2, 2, 3)
    assert ec.s_values == {1: 12, 2: 9720}
    assert ec.t_value == 22680 and ec.proportion == Fraction(7, 16)
    assert ec.deviation_constant == Fraction(1, 2)


def test_census_params_validation():
    with pytest.raises(DomainError):
        CensusParams(0, 3, 1)
    with pytest.raises(DomainError):
        CensusParams(1, 4, 1)
    with pytest.raises(DomainError):
        CensusParams(1, 5, 5)
