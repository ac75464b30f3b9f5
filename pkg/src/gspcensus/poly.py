"""Dense univariate polynomials over F_l.

Coefficients are stored lowest degree first.  The zero polynomial has an empty
coefficient tuple and degree -1.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import DomainError
from .field import field_inv


def _trim(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


@dataclass(frozen=True)
class Poly:
    coeffs: tuple[int, ...]
    ell: int

    def __post_init__(self):
        c = _trim([int(x) % self.ell for x in self.coeffs])
        object.__setattr__(self, "coeffs", tuple(c))

    @classmethod
    def from_high(cls, coeffs: Iterable[int], ell: int) -> "Poly":
        """Build from coefficients listed highest degree first."""
        return cls(tuple(reversed(list(coeffs))), ell)

    @classmethod
    def from_roots(cls, roots: Iterable[int], ell: int) -> "Poly":
        c = [1]
        for r in roots:
            c = _mul(c, [-r % ell, 1], ell)
        return cls(tuple(c), ell)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def __call__(self, x: int) -> int:
        return poly_eval(self, x)

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if not mono:
                terms.append(str(c))
            elif c == 1:
                terms.append(mono)
            else:
                terms.append(f"{c}*{mono}")
        return " + ".join(terms)


# -- list-level kernels (hot paths call these directly) ----------------------

def _eval(c: Sequence[int], x: int, ell: int) -> int:
    acc = 0
    for a in reversed(c):
        acc = (acc * x + a) % ell
    return acc


def _mul(a: Sequence[int], b: Sequence[int], ell: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % ell
    return out


def _divmod(a: Sequence[int], b: Sequence[int], ell: int) -> tuple[list[int], list[int]]:
    if not b:
        raise DomainError("polynomial division by zero")
    r = list(a)
    db = len(b) - 1
    inv = field_inv(b[-1], ell)
    if len(r) - 1 < db:
        return [], _trim(r)
    q = [0] * (len(r) - db)
    for k in range(len(r) - 1 - db, -1, -1):
        coef = r[k + db] * inv % ell
        q[k] = coef
        if coef:
            for j in range(db + 1):
                r[k + j] = (r[k + j] - coef * b[j]) % ell
    return _trim(q), _trim(r[:db])


def _monic(c: Sequence[int], ell: int) -> list[int]:
    if not c:
        return []
    inv = field_inv(c[-1], ell)
    return [x * inv % ell for x in c]


def _gcd(a: Sequence[int], b: Sequence[int], ell: int) -> list[int]:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _divmod(a, b, ell)[1]
    return _monic(a, ell)


def _root_mult(c: Sequence[int], a: int, ell: int) -> int:
    c = list(c)
    m = 0
    lin = [-a % ell, 1]
    while len(c) > 1:
        q, r = _divmod(c, lin, ell)
        if r:
            break
        c = q
        m += 1
    return m


def _derivative(c: Sequence[int], ell: int) -> list[int]:
    return _trim([i * c[i] % ell for i in range(1, len(c))])


def _reverse_monic(c: Sequence[int], ell: int) -> list[int]:
    # x^deg * f(1/x), scaled monic; requires a nonzero constant term
    assert c and c[0] % ell, "reverse of a polynomial vanishing at 0"
    return _monic(list(reversed(c)), ell)


# -- public API ---------------------------------------------------------------

def poly_eval(f: Poly, x: int) -> int:
    return _eval(f.coeffs, x % f.ell, f.ell)


def poly_mul(f: Poly, h: Poly) -> Poly:
    return Poly(tuple(_mul(f.coeffs, h.coeffs, f.ell)), f.ell)


def poly_divmod(f: Poly, h: Poly) -> tuple[Poly, Poly]:
    q, r = _divmod(f.coeffs, h.coeffs, f.ell)
    return Poly(tuple(q), f.ell), Poly(tuple(r), f.ell)


def poly_gcd(f: Poly, h: Poly) -> Poly:
    """Monic gcd.  ``gcd(0, 0)`` is the zero polynomial."""
    return Poly(tuple(_gcd(f.coeffs, h.coeffs, f.ell)), f.ell)


def root_multiplicity(f: Poly, a: int) -> int:
    """Largest m such that (x - a)^m divides f, found by repeated exact division."""
    if f.is_zero():
        raise DomainError("root multiplicity of the zero polynomial")
    return _root_mult(f.coeffs, a % f.ell, f.ell)


def derivative(f: Poly) -> Poly:
    return Poly(tuple(_derivative(f.coeffs, f.ell)), f.ell)


def reverse(f: Poly) -> Poly:
    """x^deg(f) * f(1/x), normalized monic."""
    return Poly(tuple(_reverse_monic(f.coeffs, f.ell)), f.ell)
