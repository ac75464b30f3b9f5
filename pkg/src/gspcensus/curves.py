"""Frobenius statistics of the family of all short Weierstrass curves over F_q.

The family is every pair (a, b) in F_q^2 with 4a^3 + 27b^2 != 0; curves are
not identified up to isomorphism.  The Frobenius multiplier on l-torsion is
q mod l (Weil pairing), so a scan over F_q is compared with the gamma = q mod l
coset of GSp_2(F_l).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .brute import count_brute
from .charpolys import PropertyTag, has_property
from .errors import DomainError
from .field import check_prime, is_prime
from .poly import Poly
from .symplectic import sp_order

SCAN_TAGS = (PropertyTag.E, PropertyTag.N, PropertyTag.R_LITERAL)


def _check_q(q: int) -> None:
    if not isinstance(q, int) or q < 3 or not is_prime(q):
        raise DomainError(f"q must be an odd prime, got {q!r}")


def quadratic_character_table(q: int) -> np.ndarray:
    chi = -np.ones(q, dtype=np.int64)
    chi[0] = 0
    chi[(np.arange(1, q, dtype=np.int64) ** 2) % q] = 1
    return chi


def is_singular(a: int, b: int, q: int) -> bool:
    return (4 * a**3 + 27 * b**2) % q == 0


def point_count(a: int, b: int, q: int) -> tuple[int, int]:
    """(#E(F_q), trace of Frobenius) for y^2 = x^3 + a x + b."""
    _check_q(q)
    if is_singular(a, b, q):
        raise DomainError(f"singular curve a={a}, b={b} over F_{q}")
    chi = quadratic_character_table(q)
    x = np.arange(q, dtype=np.int64)
    count = q + 1 + int(chi[(x**3 + a * x + b) % q].sum())
    t = q + 1 - count
    assert t * t <= 4 * q, "Hasse bound violated"
    return count, t


def frob_charpoly_mod(t: int, q: int, ell: int) -> Poly:
    """x^2 - t x + q reduced mod l."""
    if q % ell == 0:
        raise DomainError(f"ell = {ell} divides q = {q}")
    return Poly((q % ell, -t % ell, 1), ell)


def count_table(q: int) -> tuple[np.ndarray, np.ndarray]:
    """#E(F_q) for every (a, b), and the nonsingular mask, both shape (q, q)."""
    _check_q(q)
    chi = quadratic_character_table(q)
    x = np.arange(q, dtype=np.int64)
    a = np.arange(q, dtype=np.int64)
    # cube_plus[a, v] = #{x : x^3 + a x = v}
    vals = (x[None, :] ** 3 + a[:, None] * x[None, :]) % q
    hist = np.zeros((q, q), dtype=np.int64)
    np.add.at(hist, (np.repeat(a, q), vals.reshape(-1)), 1)
    # shifted[v, b] = chi(v + b)
    shifted = chi[(x[:, None] + x[None, :]) % q]
    counts = q + 1 + hist @ shifted
    b = np.arange(q, dtype=np.int64)
    nonsingular = (4 * a[:, None] ** 3 + 27 * b[None, :] ** 2) % q != 0
    return counts, nonsingular


@dataclass
class ScanReport:
    q: int
    ell: int
    gamma: int
    n_curves: int
    n_singular: int
    hits: dict[str, int]
    frequencies: dict[str, float]
    targets: dict[str, Fraction]
    deviations: dict[str, float] = field(default_factory=dict)


def exact_targets(ell: int, gamma: int) -> dict[str, Fraction]:
    """#W^gamma_tag / #Sp_2(F_l) for the scan tags, by enumeration of the coset."""
    _, hist = count_brute(1, ell, gamma, PropertyTag.E)
    sp = sp_order(1, ell)
    out = {}
    for tag in SCAN_TAGS:
        n = sum(c for f, c in hist.items() if has_property(f, gamma, tag))
        out[tag.value] = Fraction(n, sp)
    return out


def scan(q: int, ell: int) -> ScanReport:
    _check_q(q)
    check_prime(ell)
    gamma = q % ell
    if gamma == 0:
        raise DomainError(f"ell = {ell} divides q = {q}")
    counts, ok = count_table(q)
    n_curves = int(ok.sum())
    t = (q + 1 - counts[ok]) % ell
    hits: dict[str, int] = {}
    # one predicate evaluation per residue of the trace
    for tag in SCAN_TAGS:
        flag = np.array(
            [has_property(frob_charpoly_mod(tr, q, ell), gamma, tag) for tr in range(ell)], dtype=bool
        )
        hits[tag.value] = int(flag[t].sum())
    divisible = int(np.count_nonzero(counts[ok] % ell == 0))
    if divisible != hits["E"]:
        raise AssertionError("f(1) = 0 mod l disagrees with l | #E")
    targets = exact_targets(ell, gamma)
    freqs = {k: v / n_curves for k, v in hits.items()}
    devs = {k: abs(freqs[k] - float(targets[k])) for k in hits}
    return ScanReport(q, ell, gamma, n_curves, q * q - n_curves, hits, freqs, targets, devs)


def primes_in_progression(ell: int, gamma: int, q_max: int, q_min: int = 5) -> list[int]:
    return [q for q in range(max(q_min, 3), q_max + 1) if is_prime(q) and q % ell == gamma % ell]


def envelope(ell: int, gamma: int, q_list: Sequence[int], tag: str = "E") -> list[tuple[int, float]]:
    """[(q, deviation * sqrt(q))] for each scan."""
    if not q_list:
        raise DomainError("empty q list")
    out = []
    for q in q_list:
        if q % ell != gamma % ell:
            raise DomainError(f"q = {q} is not {gamma} mod {ell}")
        rep = scan(q, ell)
        out.append((q, rep.deviations[tag] * math.sqrt(q)))
    return out


def envelope_fit(ell: int, gamma: int, q_list: Sequence[int], tag: str = "E") -> float:
    """Fitted equidistribution constant: max over q of deviation * sqrt(q)."""
    return max(v for _, v in envelope(ell, gamma, q_list, tag))
