"""The affine space of characteristic polynomials of a multiplier coset.

A monic degree-2g polynomial is the characteristic polynomial of some element
of GSp^gamma_2g(F_l) iff its coefficients satisfy c_i = gamma^(g-i) c_(2g-i).
The g coefficients c_(2g-1), ..., c_g are therefore free coordinates.
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .errors import DomainError
from .field import check_multiplier, check_prime
from .poly import Poly, _derivative, _divmod, _eval, _gcd, _reverse_monic, _root_mult
from .symplectic import sp_order


class PropertyTag(str, enum.Enum):
    E = "E"
    N = "N"
    R_LITERAL = "R"
    R_PROOF = "Rproof"


@dataclass(frozen=True)
class XiPoint:
    free_coeffs: tuple[int, ...]  # c_(2g-1), ..., c_g
    gamma: int
    g: int
    ell: int


def expand_coeffs(free: Sequence[int], gamma: int, g: int, ell: int) -> list[int]:
    c = [0] * (2 * g + 1)
    c[2 * g] = 1
    for k, v in enumerate(free):
        c[2 * g - 1 - k] = v % ell
    for i in range(g):
        c[i] = pow(gamma, g - i, ell) * c[2 * g - i] % ell
    return c


def expand(p: XiPoint) -> Poly:
    if len(p.free_coeffs) != p.g:
        raise DomainError(f"expected {p.g} free coefficients, got {len(p.free_coeffs)}")
    return Poly(tuple(expand_coeffs(p.free_coeffs, p.gamma, p.g, p.ell)), p.ell)


def satisfies_functional_equation(f: Poly, gamma: int) -> bool:
    if not f.is_monic() or f.degree % 2:
        return False
    g = f.degree // 2
    c = f.coeffs
    return all(c[i] == pow(gamma, g - i, f.ell) * c[2 * g - i] % f.ell for i in range(g + 1))


def xi_enumerate(g: int, gamma: int, ell: int) -> Iterator[Poly]:
    """All l^g polynomials of the coset, in lexicographic order of (c_(2g-1), ..., c_g)."""
    for free in itertools.product(range(ell), repeat=g):
        yield Poly(tuple(expand_coeffs(free, gamma, g, ell)), ell)


def _r_literal(c: list[int], ell: int) -> bool:
    if _root_mult(c, ell - 1, ell) > 1 or _root_mult(c, 1, ell) > 2:
        return False
    h = _gcd(c, _reverse_monic(c, ell), ell)
    # strip the self-paired roots +1 and -1; anything left is a pair lambda, 1/lambda
    for lin in ([ell - 1, 1], [1, 1]):
        while len(h) > 1:
            q, r = _divmod(h, lin, ell)
            if r:
                break
            h = q
    return len(h) <= 1


def _r_proof(c: list[int], ell: int) -> bool:
    if len(_gcd(c, _reverse_monic(c, ell), ell)) > 1:
        return False
    d1 = _derivative(c, ell)
    d2 = _derivative(d1, ell)
    m1 = ell - 1
    if _eval(c, m1, ell) == 0 and _eval(d1, m1, ell) == 0:
        return False
    if _eval(c, 1, ell) == 0 and _eval(d1, 1, ell) == 0 and _eval(d2, 1, ell) == 0:
        return False
    return True


def has_property(f: Poly, gamma: int, tag: PropertyTag | str) -> bool:
    """Evaluate (E), (N) or one of the two readings of (R) on f.

    R_LITERAL: no two distinct roots multiply to 1, at most a simple root at
    -1, at most a double root at 1.  R_PROOF: f(x) and f(1/x) share no root,
    plus the derivative conditions at -1 and 1; it implies R_LITERAL.
    """
    tag = PropertyTag(tag)
    ell = f.ell
    c = list(f.coeffs)
    if tag is PropertyTag.E:
        return _eval(c, 1, ell) == 0
    if tag is PropertyTag.N:
        return _eval(c, 1, ell) != 0
    if ell == 2:
        raise DomainError("(R) is not defined for ell = 2")
    if tag is PropertyTag.R_LITERAL:
        return _r_literal(c, ell)
    return _r_proof(c, ell)


def psi_count(g: int, gamma: int, ell: int, tag: PropertyTag | str, raw: bool = False) -> int:
    """Number of coset characteristic polynomials with the property.

    For gamma = 1 the R_LITERAL count is reported as 0 (no element of Sp has
    (R)); pass ``raw=True`` to get the literal predicate's count instead.
    """
    check_prime(ell)
    check_multiplier(gamma, ell)
    tag = PropertyTag(tag)
    if tag is PropertyTag.R_LITERAL and gamma == 1 and not raw:
        return 0
    return sum(1 for f in xi_enumerate(g, gamma, ell) if has_property(f, gamma, tag))


def psi_count_union(g: int, gamma: int, ell: int, tags: Sequence[PropertyTag | str]) -> int:
    tags = [PropertyTag(t) for t in tags]
    return sum(
        1 for f in xi_enumerate(g, gamma, ell) if any(has_property(f, gamma, t) for t in tags)
    )


def eigenweird_constant(g: int, gamma: int, ell: int) -> Fraction:
    """(l^g - #Psi_R) / l^(g-1), the constant implied at this (g, gamma, l)."""
    if gamma % ell == 1:
        raise DomainError("eigenweird constant needs gamma != 1")
    if ell < 3:
        raise DomainError("eigenweird constant needs ell >= 3")
    return Fraction(ell**g - psi_count(g, gamma, ell, PropertyTag.R_LITERAL), ell ** (g - 1))


def codim_two_constant(g: int, gamma: int, ell: int) -> Fraction:
    """(l^g - #Psi_(N or R)) / l^(g-2): how far the (N)-or-(R) set is from codimension two."""
    bad = ell**g - psi_count_union(g, gamma, ell, [PropertyTag.N, PropertyTag.R_LITERAL])
    return Fraction(bad) / Fraction(ell) ** (g - 2)


def delta_bounds(g: int, ell: int) -> tuple[Fraction, Fraction]:
    """Bounds valid for the number of coset elements with any one characteristic polynomial."""
    if g < 1:
        raise DomainError("g must be >= 1")
    dim = 2 * g * g + g
    top = ell ** (2 * g * g) * sp_order(g, ell)
    return Fraction(top, (ell + 1) ** dim), Fraction(top, (ell - 1) ** dim)
