"""Prime-field scalars.

Field elements are plain ``int`` residues in ``[0, ell)``; the modulus travels
alongside as an explicit argument so that one process can sweep many primes.
"""
from __future__ import annotations

from functools import lru_cache

from .errors import DomainError


@lru_cache(maxsize=None)
def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def check_prime(ell: int) -> int:
    if not isinstance(ell, int) or not is_prime(ell):
        raise DomainError(f"modulus must be prime, got {ell!r}")
    return ell


def primes_between(lo: int, hi: int) -> list[int]:
    return [p for p in range(max(lo, 2), hi + 1) if is_prime(p)]


def field_inv(a: int, ell: int) -> int:
    a %= ell
    if a == 0:
        raise DomainError("zero has no inverse")
    return pow(a, ell - 2, ell)


@lru_cache(maxsize=64)
def inverse_table(ell: int) -> tuple[int, ...]:
    # entry 0 is a placeholder; callers never look it up
    return (0,) + tuple(pow(a, ell - 2, ell) for a in range(1, ell))


def check_multiplier(gamma: int, ell: int) -> int:
    if not isinstance(gamma, int) or not 1 <= gamma <= ell - 1:
        raise DomainError(f"multiplier must lie in 1..{ell - 1}, got {gamma!r}")
    return gamma
