import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gspcensus.errors import DomainError
from gspcensus.field import check_prime, field_inv, is_prime
from gspcensus.poly import (
    Poly,
    derivative,
    poly_divmod,
    poly_eval,
    poly_gcd,
    poly_mul,
    reverse,
    root_multiplicity,
)

SMALL_PRIMES = [2, 3, 5, 7, 11, 13]


def P(high, ell):
    return Poly.from_high(high, ell)


@pytest.mark.parametrize("ell,a,expected", [(3, 2, 2), (7, 3, 5), (5, 1, 1)])
def test_field_inv_examples(ell, a, expected):
    assert field_inv(a, ell) == expected


@pytest.mark.parametrize("ell", SMALL_PRIMES)
def test_field_inv_all(ell):
    for a in range(1, ell):
        assert a * field_inv(a, ell) % ell == 1


def test_field_inv_zero():
    with pytest.raises(DomainError):
        field_inv(0, 7)


def test_prime_validation():
    assert [n for n in range(30) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    with pytest.raises(DomainError):
        check_prime(9)


@pytest.mark.parametrize(
    "ell,high,x,expected",
    [(3, [1, 1, 2], 1, 1), (3, [1, 0, 2], 1, 0), (5, [1, -2, 5], 0, 0)],
)
def test_poly_eval_examples(ell, high, x, expected):
    assert poly_eval(P(high, ell), x) == expected


def test_root_multiplicity_examples():
    assert root_multiplicity(P([1, 2, 1], 3), -1) == 2
    assert root_multiplicity(P([1, 1, 2], 3), 1) == 0
    assert root_multiplicity(P([1, 0, 2], 3), 1) == 1


def test_root_multiplicity_beyond_characteristic():
    # (x - 1)^5 over F_3: derivative tests would misreport this
    f = Poly.from_roots([1] * 5, 3)
    assert root_multiplicity(f, 1) == 5
    # the third formal derivative vanishes identically (60 = 0 mod 3)
    assert derivative(derivative(derivative(f))).is_zero()


def test_root_multiplicity_zero_poly():
    with pytest.raises(DomainError):
        root_multiplicity(Poly((), 3), 1)


def test_gcd_examples():
    f = P([1, 0, 2], 3)
    assert reverse(f) == f
    assert poly_gcd(f, reverse(f)) == f
    assert poly_gcd(P([1, 1, 2], 3), P([1, 2, 2], 3)) == Poly((1,), 3)


def test_gcd_example_by_roots_oracle():
    # x^2+x+2 and x^2+2x+2 have no roots in F_3, so both are irreducible; being
    # distinct monic irreducibles they are coprime
    for high in ([1, 1, 2], [1, 2, 2]):
        assert all(poly_eval(P(high, 3), x) for x in range(3))


def test_gcd_idempotent():
    f = P([2, 1, 0, 1], 5)
    g = poly_gcd(f, f)
    assert g.is_monic() and poly_divmod(f, g)[1].is_zero() and g.degree == f.degree


def test_str():
    assert str(P([1, 1, 2], 3)) == "x^2 + x + 2"
    assert str(Poly((), 3)) == "0"


@st.composite
def polys(draw, ell=None, max_deg=6):
    ell = ell or draw(st.sampled_from([3, 5, 7]))
    c = draw(st.lists(st.integers(0, ell - 1), min_size=1, max_size=max_deg + 1))
    return Poly(tuple(c), ell)


@given(st.sampled_from([3, 5, 7]).flatmap(lambda ell: st.tuples(polys(ell), polys(ell))))
@settings(max_examples=200)
def test_divmod_identity(pair):
    f, h = pair
    if h.is_zero():
        return
    q, r = poly_divmod(f, h)
    assert r.degree < h.degree
    back = poly_mul(q, h)
    ell = f.ell
    n = max(len(back.coeffs), len(r.coeffs))
    summed = [((back.coeffs + (0,) * n)[i] + (r.coeffs + (0,) * n)[i]) % ell for i in range(n)]
    assert Poly(tuple(summed), ell) == f


@given(st.sampled_from([3, 5, 7]).flatmap(lambda ell: st.tuples(polys(ell), polys(ell))))
@settings(max_examples=200)
def test_gcd_divides_and_has_common_roots(pair):
    f, h = pair
    if f.is_zero() and h.is_zero():
        return
    g = poly_gcd(f, h)
    assert g.is_monic()
    for p in (f, h):
        assert poly_divmod(p, g)[1].is_zero()
    for x in range(f.ell):
        common = poly_eval(f, x) == 0 and poly_eval(h, x) == 0
        assert common == (poly_eval(g, x) == 0)


@given(polys())
@settings(max_examples=200)
def test_multiplicities_bounded_by_degree(f):
    if f.is_zero():
        return
    assert sum(root_multiplicity(f, a) for a in range(f.ell)) <= f.degree


@pytest.mark.parametrize("ell", [3, 5])
def test_root_multiplicity_matches_construction(ell):
    for roots in itertools.combinations_with_replacement(range(ell), 4):
        f = Poly.from_roots(roots, ell)
        for a in range(ell):
            assert root_multiplicity(f, a) == roots.count(a)
