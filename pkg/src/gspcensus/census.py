"""Exact counts of similitudes with eigenvalue one.

All arithmetic is in Python integers and ``fractions.Fraction``; every division
that the counting argument says is exact is checked and raises
:class:`ConsistencyError` otherwise.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ConsistencyError, DomainError
from .field import check_multiplier, check_prime
from .symplectic import gl_order, sp_order


def _exact_div(num: int, den: int, what: str) -> int:
    q, r = divmod(num, den)
    if r:
        raise ConsistencyError(f"{what}: {num} not divisible by {den}")
    return q


@dataclass(frozen=True)
class CensusParams:
    g: int
    ell: int
    gamma: int

    def __post_init__(self):
        if not isinstance(self.g, int) or self.g < 1:
            raise DomainError(f"g must be a positive integer, got {self.g!r}")
        check_prime(self.ell)
        check_multiplier(self.gamma, self.ell)


@dataclass(frozen=True)
class EigenCensus:
    params: CensusParams
    s_values: dict[int, int]
    t_value: int
    proportion: Fraction
    tau: Fraction
    deviation_constant: Fraction = field(default=Fraction(0))


def s_count(r: int, gamma: int, ell: int) -> int:
    """Elements of GSp^gamma_2r with characteristic polynomial (x-1)^r (x-gamma)^r.

    For gamma = 1 this is the number of unipotent elements of Sp_2r.
    """
    if r < 1:
        raise DomainError(f"r must be >= 1, got {r}")
    if gamma % ell == 1:
        return ell ** (2 * r * r)
    return _exact_div(ell ** (r * r - r) * sp_order(r, ell), gl_order(r, ell), "S")


def t_table(g: int, gamma: int, ell: int) -> list[int]:
    """[T(0), T(1), ..., T(g)] built bottom-up with T(0) = 0."""
    T = [0]
    sp = [sp_order(s, ell) for s in range(g + 1)]
    S = [0] + [s_count(r, gamma, ell) for r in range(1, g + 1)]
    for n in range(1, g + 1):
        total = 0
        for r in range(1, n + 1):
            s = n - r
            decompositions = _exact_div(sp[n], sp[r] * sp[s], "decomposition count")
            total += decompositions * S[r] * (sp[s] - T[s])
        T.append(total)
    if g >= 1 and T[1] != S[1]:
        raise ConsistencyError("T(1) != S(1)")
    return T


def t_count(g: int, gamma: int, ell: int) -> int:
    """Number of elements of GSp^gamma_2g(F_l) having 1 as an eigenvalue."""
    if g < 1:
        raise DomainError(f"g must be >= 1, got {g}")
    T = t_table(g, gamma, ell)
    if not 0 <= T[g] <= sp_order(g, ell):
        raise ConsistencyError(f"T({g}) = {T[g]} out of range")
    return T[g]


def eigen_proportion(g: int, gamma: int, ell: int) -> Fraction:
    return Fraction(t_count(g, gamma, ell), sp_order(g, ell))


def tau(gamma: int, ell: int) -> Fraction:
    """Leading-order eigenvalue-one proportion; independent of g."""
    if gamma % ell == 1:
        return Fraction(ell, ell * ell - 1)
    if ell < 3:
        raise DomainError("gamma != 1 needs ell >= 3")
    return Fraction(1, ell - 1)


def eigenone_deviation(g: int, gamma: int, ell: int) -> Fraction:
    """|T/#Sp - tau| / tau^3: the constant implied at this (g, gamma, ell)."""
    t = tau(gamma, ell)
    return abs(eigen_proportion(g, gamma, ell) - t) / t**3


def fitted_eigenone_constant(g: int, ells, gamma_one: bool = False) -> Fraction:
    """Supremum of eigenone_deviation over the given primes.

    gamma != 1 values are gamma-independent, so gamma = 2 stands for all of them.
    """
    return max(eigenone_deviation(g, 1 if gamma_one else 2, ell) for ell in ells)


def psitow_bounds(psi_count: int, g: int, ell: int) -> tuple[Fraction, Fraction]:
    """Bounds on #W/#Sp given #Psi, with #Xi = l^g and dim Sp_2g = 2g^2 + g."""
    if not 0 <= psi_count <= ell**g:
        raise DomainError(f"psi_count must lie in [0, {ell**g}]")
    dim = 2 * g * g + g
    base = Fraction(psi_count, ell**g)
    return Fraction(ell, ell + 1) ** dim * base, Fraction(ell, ell - 1) ** dim * base


def abvar_leading(ell: int) -> Fraction:
    """Limiting share of abelian varieties with a rational l-torsion point (#k = 1 mod l)."""
    if ell < 2:
        raise DomainError("ell must be >= 2")
    return Fraction(ell, ell * ell - 1)


def eigen_census(g: int, gamma: int, ell: int) -> EigenCensus:
    params = CensusParams(g, ell, gamma)
    S = {r: s_count(r, gamma, ell) for r in range(1, g + 1)}
    T = t_count(g, gamma, ell)
    prop = Fraction(T, sp_order(g, ell))
    t = tau(gamma, ell)
    return EigenCensus(params, S, T, prop, t, abs(prop - t) / t**3)
