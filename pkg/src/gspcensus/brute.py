"""Ground truth by exhaustion and exact uniform sampling.

Elements of Sp_2g(F_l) are built column by column as symplectic bases
(e_1, f_1, e_2, f_2, ...): each new column solves the linear system
``<c, new> = J[c, new]`` against the columns already chosen.  The solution
set is an affine space whose points are addressed by free-coordinate digits,
so enumeration (all digits) and sampling (uniform digits) share one engine.
Right-multiplying by diag(I_g, gamma I_g) moves Sp onto the gamma coset.

Everything is vectorized over a batch of partial bases; enumeration shards by
the image of e_1 and Monte Carlo shards by sample-index ranges with per-shard
seeds, so results never depend on the worker count.
"""
from __future__ import annotations

import itertools
import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterator, Optional

import numpy as np

from .census import CensusParams
from .charpolys import PropertyTag, has_property
from .errors import BudgetExceeded, DomainError
from .field import check_multiplier, check_prime, inverse_table
from .poly import Poly
from .symplectic import charpoly_batch, form_matrix, similitude_multiplier, sp_order

DEFAULT_BUDGET = 10**8
SHARD_SIZE = 1 << 16


# -- basis completion engine ---------------------------------------------------

def _column_order(g: int) -> list[int]:
    """Matrix column filled at each step: e_1, f_1, e_2, f_2, ..."""
    return [c for k in range(g) for c in (k, g + k)]


def _pair_rows(cols: np.ndarray, g: int, ell: int) -> np.ndarray:
    """Rows r with r . w = <c, w> for each column c; shape (N, m, 2g)."""
    return np.concatenate([(-cols[..., g:]) % ell, cols[..., :g]], axis=-1)


def _rref(R: np.ndarray, b: np.ndarray, ell: int):
    """Batched reduced row echelon form of full-row-rank systems R x = b over F_l."""
    N, m, n = R.shape
    R = R.copy()
    b = b.copy()
    inv = np.array(inverse_table(ell), dtype=np.int64)
    cur = np.zeros(N, dtype=np.int64)
    pivot = np.zeros((N, n), dtype=bool)
    rows = np.arange(m)
    for c in range(n):
        if m == 0:
            break
        cand = (R[:, :, c] != 0) & (rows[None, :] >= cur[:, None])
        has = cand.any(axis=1) & (cur < m)
        idx = np.nonzero(has)[0]
        if idx.size == 0:
            continue
        i = np.argmax(cand[idx], axis=1)
        k = cur[idx]
        Ri, Rk = R[idx, i].copy(), R[idx, k].copy()
        R[idx, i], R[idx, k] = Rk, Ri
        bi, bk = b[idx, i].copy(), b[idx, k].copy()
        b[idx, i], b[idx, k] = bk, bi
        p = inv[R[idx, k, c]]
        R[idx, k] = R[idx, k] * p[:, None] % ell
        b[idx, k] = b[idx, k] * p % ell
        f = R[idx, :, c].copy()
        f[np.arange(idx.size), k] = 0
        R[idx] = (R[idx] - f[:, :, None] * R[idx, k][:, None, :]) % ell
        b[idx] = (b[idx] - f * b[idx, k][:, None]) % ell
        pivot[idx, c] = True
        cur[idx] += 1
    if np.any(cur != m):
        raise AssertionError("constraint system is rank deficient")
    return R, b, pivot


def _solutions(R, b, pivot, digits, ell):
    """Affine solutions addressed by digits on the free coordinates."""
    N, m, n = R.shape
    order = np.argsort(pivot, axis=1, kind="stable")
    free, piv = order[:, : n - m], order[:, n - m :]
    x = np.zeros((N, n), dtype=np.int64)
    ar = np.arange(N)[:, None]
    x[ar, free] = digits
    if m:
        x[ar, piv] = (b - np.einsum("imn,in->im", R, x)) % ell
    return x


def _constraints(cols: np.ndarray, step: int, g: int, ell: int):
    order = _column_order(g)
    J = form_matrix(g, ell)
    N = cols.shape[0]
    prior = cols[:, order[:step]]  # shape (N, step, 2g), stored as vectors
    R = _pair_rows(prior, g, ell)
    target = np.array([J[order[i], order[step]] for i in range(step)], dtype=np.int64)
    return R, np.broadcast_to(target, (N, step)).copy()


def _all_digits(n: int, ell: int, nonzero: bool) -> np.ndarray:
    d = np.array(list(itertools.product(range(ell), repeat=n)), dtype=np.int64).reshape(-1, n)
    return d[1:] if nonzero else d


def _extend_all(cols: np.ndarray, step: int, g: int, ell: int) -> np.ndarray:
    """Every one-column extension of every partial basis, partial-major order."""
    R, b, pivot = _rref(*_constraints(cols, step, g, ell), ell)
    n = 2 * g
    digits = _all_digits(n - step, ell, nonzero=(step % 2 == 0))
    K = digits.shape[0]
    N = cols.shape[0]
    x = _solutions(
        np.repeat(R, K, axis=0), np.repeat(b, K, axis=0), np.repeat(pivot, K, axis=0),
        np.tile(digits, (N, 1)), ell,
    )
    out = np.repeat(cols, K, axis=0)
    out[:, _column_order(g)[step]] = x
    return out


def _to_matrices(cols: np.ndarray, gamma: int, ell: int) -> np.ndarray:
    # cols[k] is column k; transpose into (N, row, col) and apply diag(I, gamma I)
    A = np.transpose(cols, (0, 2, 1)).copy()
    g = A.shape[1] // 2
    A[:, :, g:] = A[:, :, g:] * gamma % ell
    return A


def _check_budget(what: str, cost: int, budget: Optional[int]) -> None:
    budget = DEFAULT_BUDGET if budget is None else budget
    if cost > budget:
        raise BudgetExceeded(what, cost, budget)


def _validate(g: int, ell: int, gamma: int) -> None:
    if not isinstance(g, int) or g < 1:
        raise DomainError(f"g must be a positive integer, got {g!r}")
    check_prime(ell)
    check_multiplier(gamma, ell)


def enumerate_coset_shards(g: int, ell: int, gamma: int, budget: Optional[int] = None) -> Iterator[np.ndarray]:
    """Yield GSp^gamma_2g(F_l) as arrays of shape (N, 2g, 2g), one per image of e_1."""
    _validate(g, ell, gamma)
    _check_budget(f"enumerate GSp^{gamma}_{2 * g}(F_{ell})", sp_order(g, ell), budget)
    n = 2 * g
    for v in _all_digits(n, ell, nonzero=True):
        cols = np.zeros((1, n, n), dtype=np.int64)
        cols[0, 0] = v
        for step in range(1, n):
            cols = _extend_all(cols, step, g, ell)
        yield _to_matrices(cols, gamma, ell)


def enumerate_coset(g: int, ell: int, gamma: int, budget: Optional[int] = None) -> Iterator[np.ndarray]:
    """Each element of GSp^gamma_2g(F_l) exactly once, in a fixed order."""
    for shard in enumerate_coset_shards(g, ell, gamma, budget):
        yield from shard


def enumerate_naive(g: int, ell: int, budget: Optional[int] = None) -> Iterator[tuple[np.ndarray, int]]:
    """Filter all 2g x 2g matrices for the similitude condition.

    Column pairings come from a table of <u, v> over all vectors, so the test
    A^T J A = gamma J is a handful of lookups per matrix.  Matrices are visited
    in lexicographic order of their column index tuples.
    """
    if not isinstance(g, int) or g < 1:
        raise DomainError(f"g must be a positive integer, got {g!r}")
    check_prime(ell)
    n = 2 * g
    _check_budget(f"naive scan of {n}x{n} matrices over F_{ell}", ell ** (n * n), budget)
    V = _all_digits(n, ell, nonzero=False)
    M = V.shape[0]
    P = (V @ form_matrix(g, ell) @ V.T) % ell
    J = form_matrix(g, ell)
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    rest = np.array(list(itertools.product(range(M), repeat=n - 1)), dtype=np.int64).reshape(-1, n - 1)
    for c0 in range(M):
        idx = np.concatenate([np.full((rest.shape[0], 1), c0, dtype=np.int64), rest], axis=1)
        gamma = P[idx[:, 0], idx[:, g]]
        ok = gamma != 0
        for i, j in pairs:
            ok &= P[idx[:, i], idx[:, j]] == gamma * J[i, j] % ell
        for row, gm in zip(idx[ok], gamma[ok]):
            yield V[row].T.copy(), int(gm)


# -- sampling ------------------------------------------------------------------

def make_rng(seed: int, shard: int = 0) -> np.random.Generator:
    """Counter-based Philox stream for (seed, shard)."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, shard])))


def _uniform_digits(rng: np.random.Generator, N: int, n: int, ell: int, nonzero: bool) -> np.ndarray:
    d = rng.integers(0, ell, size=(N, n), dtype=np.int64)
    if nonzero:
        bad = ~d.any(axis=1)
        while bad.any():
            d[bad] = rng.integers(0, ell, size=(int(bad.sum()), n), dtype=np.int64)
            bad = ~d.any(axis=1)
    return d


def sample_batch(g: int, ell: int, gamma: int, rng: np.random.Generator, size: int) -> np.ndarray:
    """``size`` independent, exactly uniform elements of GSp^gamma_2g(F_l)."""
    n = 2 * g
    cols = np.zeros((size, n, n), dtype=np.int64)
    order = _column_order(g)
    for step in range(n):
        digits = _uniform_digits(rng, size, n - step, ell, nonzero=(step % 2 == 0))
        R, b, pivot = _rref(*_constraints(cols, step, g, ell), ell)
        cols[:, order[step]] = _solutions(R, b, pivot, digits, ell)
    return _to_matrices(cols, gamma, ell)


def sample_uniform(g: int, ell: int, gamma: int, seed: int, size: Optional[int] = None) -> np.ndarray:
    _validate(g, ell, gamma)
    out = sample_batch(g, ell, gamma, make_rng(seed), 1 if size is None else size)
    return out[0] if size is None else out


# -- counting ------------------------------------------------------------------

def _poly_rows_to_counter(coeffs: np.ndarray, ell: int, counter: Counter) -> None:
    keys, counts = np.unique(coeffs, axis=0, return_counts=True)
    for k, c in zip(keys, counts):
        counter[Poly(tuple(int(x) for x in k), ell)] += int(c)


def delta_histogram(g: int, ell: int, gamma: int, budget: Optional[int] = None) -> Counter:
    """Map from characteristic polynomial to the number of coset elements having it."""
    hist: Counter = Counter()
    for shard in enumerate_coset_shards(g, ell, gamma, budget):
        _poly_rows_to_counter(charpoly_batch(shard, ell), ell, hist)
    return hist


def count_from_histogram(hist: Counter, gamma: int, tag) -> int:
    tag = PropertyTag(tag)
    return sum(n for f, n in hist.items() if has_property(f, gamma, tag))


def count_brute(g: int, ell: int, gamma: int, tag, budget: Optional[int] = None) -> tuple[int, Counter]:
    """Exact #W^gamma_tag by enumeration, plus the full Delta histogram.

    The literal reading of the tag is used; no gamma = 1 override for (R).
    """
    hist = delta_histogram(g, ell, gamma, budget)
    return count_from_histogram(hist, gamma, tag), hist


@dataclass(frozen=True)
class SampleReport:
    params: CensusParams
    tag: str
    n_samples: int
    hits: int
    seed: int

    @property
    def estimate(self) -> float:
        return self.hits / self.n_samples

    @property
    def stderr(self) -> float:
        p = self.estimate
        return math.sqrt(p * (1 - p) / self.n_samples)

    def interval(self, z: float = 1.959963984540054) -> tuple[float, float]:
        return self.estimate - z * self.stderr, self.estimate + z * self.stderr


def _shard_hits(args) -> int:
    g, ell, gamma, tag, seed, shard, size = args
    A = sample_batch(g, ell, gamma, make_rng(seed, shard), size)
    cp = charpoly_batch(A, ell)
    tag = PropertyTag(tag)
    if tag in (PropertyTag.E, PropertyTag.N):
        at_one = cp.sum(axis=1) % ell
        return int(np.count_nonzero(at_one == 0 if tag is PropertyTag.E else at_one != 0))
    keys, inverse = np.unique(cp, axis=0, return_inverse=True)
    flags = np.array(
        [has_property(Poly(tuple(int(x) for x in k), ell), gamma, tag) for k in keys], dtype=bool
    )
    return int(np.count_nonzero(flags[inverse.reshape(-1)]))


def montecarlo(
    g: int,
    ell: int,
    gamma: int,
    tag,
    n: int,
    seed: int,
    workers: int = 1,
    shard_size: int = SHARD_SIZE,
) -> SampleReport:
    """Estimate #W^gamma_tag / #Sp_2g from n uniform samples.

    Shard k draws samples [k * shard_size, (k+1) * shard_size) from its own
    Philox stream, so the result is fixed by (seed, shard_size) alone.
    """
    params = CensusParams(g, ell, gamma)
    tag = PropertyTag("E" if tag == "eigen1" else tag)
    if n < 1:
        raise DomainError("n must be >= 1")
    jobs = [
        (g, ell, gamma, tag.value, seed, k, min(shard_size, n - k * shard_size))
        for k in range(-(-n // shard_size))
    ]
    if workers <= 1 or len(jobs) == 1:
        hits = sum(map(_shard_hits, jobs))
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            hits = sum(pool.map(_shard_hits, jobs))
    return SampleReport(params, tag.value, n, hits, seed)
