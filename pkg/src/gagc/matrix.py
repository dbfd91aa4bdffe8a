"""Dense exact linear algebra over GF(q).

Echelon forms run in the log domain through the compiled kernels.  Products
use a different route: each operand is split into its h coordinate planes
over GF(p), the planes are multiplied as polynomials in x with Karatsuba and
BLAS floating-point products (exact while every partial sum stays below the
mantissa limit), and the result is reduced modulo p and the field modulus.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from gagc import _kernels
from gagc.gf import FieldCtx, frobenius

SUBSET_BUDGET = 10**6
DEFAULT_SAMPLES = 1000


class BudgetExceeded(RuntimeError):
    """An exhaustive check would exceed its enumeration budget."""


@dataclass(frozen=True, eq=False)
class GfMatrix:
    ctx: FieldCtx
    data: np.ndarray

    def __post_init__(self) -> None:
        data = np.array(self.data, dtype=np.int64, copy=True)
        if data.ndim != 2:
            data = data.reshape(-1, data.shape[-1] if data.ndim else 0)
        if data.size and (data.min() < 0 or data.max() >= self.ctx.q):
            raise ValueError("matrix entries must be field elements in [0, q)")
        data.setflags(write=False)
        object.__setattr__(self, "data", data)

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GfMatrix):
            return NotImplemented
        return self.ctx is other.ctx and np.array_equal(self.data, other.data)

    def __matmul__(self, other: "GfMatrix") -> "GfMatrix":
        return matmul(self, other)

    @property
    def T(self) -> "GfMatrix":
        return GfMatrix(self.ctx, self.data.T)

    def frobenius(self, e: int) -> "GfMatrix":
        return GfMatrix(self.ctx, frobenius(self.ctx, self.data, e))

    def scale(self, c: int) -> "GfMatrix":
        return GfMatrix(self.ctx, self.ctx.mul(self.data, c))

    def is_zero(self) -> bool:
        return not np.any(self.data)

    def columns(self, idx: Sequence[int]) -> "GfMatrix":
        return GfMatrix(self.ctx, self.data[:, np.asarray(idx, dtype=np.int64)])

    @classmethod
    def zeros(cls, ctx: FieldCtx, rows: int, cols: int) -> "GfMatrix":
        return cls(ctx, np.zeros((rows, cols), dtype=np.int64))

    @classmethod
    def identity(cls, ctx: FieldCtx, n: int) -> "GfMatrix":
        return cls(ctx, np.eye(n, dtype=np.int64))


def vstack(blocks: Iterable[GfMatrix]) -> GfMatrix:
    blocks = list(blocks)
    return GfMatrix(blocks[0].ctx, np.vstack([b.data for b in blocks]))


# -- products ------------------------------------------------------------------


def _reduction_table(ctx: FieldCtx) -> np.ndarray:
    """Row d holds the coordinates of x**d mod the modulus, d < 2h - 1."""
    h, p = ctx.h, ctx.p
    rows = np.zeros((2 * h - 1, h), dtype=np.int64)
    cur = np.zeros(h, dtype=np.int64)
    cur[0] = 1
    low = np.array(ctx.modulus[:h], dtype=np.int64)
    for d in range(2 * h - 1):
        rows[d] = cur
        top = cur[-1]
        cur = np.concatenate([[0], cur[:-1]])
        cur = (cur - top * low) % p
    return rows


def _karatsuba(a: list[np.ndarray], b: list[np.ndarray]) -> list[np.ndarray]:
    n = len(a)
    if n == 1:
        return [a[0] @ b[0]]
    m = n // 2
    lo = _karatsuba(a[:m], b[:m])
    hi = _karatsuba(a[m:], b[m:])
    a_sum = [a[m + i] + a[i] if i < m else a[m + i] for i in range(n - m)]
    b_sum = [b[m + i] + b[i] if i < m else b[m + i] for i in range(n - m)]
    mid = _karatsuba(a_sum, b_sum)
    for i, c in enumerate(lo):
        mid[i] = mid[i] - c
    for i, c in enumerate(hi):
        mid[i] = mid[i] - c
    out = [None] * (2 * n - 1)
    for i, c in enumerate(lo):
        out[i] = c
    for i, c in enumerate(hi):
        out[2 * m + i] = c
    for i, c in enumerate(mid):
        out[m + i] = c if out[m + i] is None else out[m + i] + c
    return out


def _inner_chunk(ctx: FieldCtx, dtype: type) -> int:
    """Largest inner dimension for which a float product stays exact."""
    limit = 2**24 if dtype is np.float32 else 2**53
    bound = ctx.h * (ctx.h * (ctx.p - 1)) ** 2
    return max(1, (limit - 1) // bound)


def matmul(a: GfMatrix, b: GfMatrix) -> GfMatrix:
    """Exact product a @ b over GF(q)."""
    ctx = a.ctx
    if a.cols != b.rows:
        raise ValueError(f"shape mismatch {a.shape} @ {b.shape}")
    m, inner, r = a.rows, a.cols, b.cols
    if m == 0 or r == 0 or inner == 0:
        return GfMatrix.zeros(ctx, m, r)
    h, p = ctx.h, ctx.p
    dtype = np.float32 if _inner_chunk(ctx, np.float32) >= min(inner, 256) else np.float64
    chunk = _inner_chunk(ctx, dtype)
    coeffs = np.zeros((2 * h - 1, m, r), dtype=np.int64)
    powers = [p**i for i in range(h)]
    for start in range(0, inner, chunk):
        stop = min(inner, start + chunk)
        ablk = a.data[:, start:stop]
        bblk = b.data[start:stop, :]
        a_planes = [((ablk // s) % p).astype(dtype) for s in powers]
        b_planes = [((bblk // s) % p).astype(dtype) for s in powers]
        for d, c in enumerate(_karatsuba(a_planes, b_planes)):
            coeffs[d] += c.astype(np.int64)
        coeffs %= p
    red = _reduction_table(ctx)
    digits = np.einsum("dmr,dj->mrj", coeffs, red) % p
    return GfMatrix(ctx, digits @ np.array(powers, dtype=np.int64))


def naive_matmul(a: GfMatrix, b: GfMatrix) -> GfMatrix:
    """Row-by-column product with table arithmetic; reference for tests."""
    ctx = a.ctx
    out = np.zeros((a.rows, b.cols), dtype=np.int64)
    for i in range(a.rows):
        for j in range(b.cols):
            out[i, j] = ctx.sum(ctx.mul(a.data[i], b.data[:, j]))
    return GfMatrix(ctx, out)


# -- echelon forms ---------------------------------------------------------------


def _log_copy(m: GfMatrix) -> np.ndarray:
    return np.ascontiguousarray(m.ctx.log[m.data])


def _eliminate(m: GfMatrix, reduced: bool, col_limit: Optional[int] = None):
    ctx = m.ctx
    work = _log_copy(m)
    limit = m.cols if col_limit is None else col_limit
    rank, pivots, _ = _kernels.eliminate(work, ctx.zech, ctx.order, ctx.half, reduced, limit)
    return work, rank, pivots


def rref(m: GfMatrix) -> tuple[GfMatrix, int, list[int]]:
    """Reduced row echelon form, rank and pivot columns."""
    if m.rows == 0 or m.cols == 0:
        return m, 0, []
    work, rank, pivots = _eliminate(m, reduced=True)
    return GfMatrix(m.ctx, m.ctx.from_log(work)), int(rank), [int(c) for c in pivots]


def rank(m: GfMatrix) -> int:
    if m.rows == 0 or m.cols == 0:
        return 0
    # Most generator matrices have full row rank within their first few
    # columns; try a narrow window before paying for the whole width.
    window = m.rows + 16
    if window < m.cols:
        sub = GfMatrix(m.ctx, m.data[:, :window])
        _, r, _ = _eliminate(sub, reduced=False)
        if r == m.rows:
            return int(r)
    _, r, _ = _eliminate(m, reduced=False)
    return int(r)


def null_space(m: GfMatrix) -> GfMatrix:
    """Basis of {x : m x^T = 0}, one vector per row."""
    ctx = m.ctx
    n = m.cols
    if m.rows == 0:
        return GfMatrix.identity(ctx, n)
    r, rk, pivots = rref(m)
    free = [c for c in range(n) if c not in set(pivots)]
    basis = np.zeros((len(free), n), dtype=np.int64)
    for row, f in enumerate(free):
        basis[row, f] = 1
        basis[row, pivots] = ctx.neg(r.data[:rk, f])
    return GfMatrix(ctx, basis.reshape(len(free), n))


def row_space_equal(a: GfMatrix, b: GfMatrix) -> bool:
    if a.cols != b.cols or a.ctx is not b.ctx:
        raise ValueError("row spaces of different ambient spaces")
    ra, ka, _ = rref(a)
    rb, kb, _ = rref(b)
    return ka == kb and np.array_equal(ra.data[:ka], rb.data[:kb])


def contains(big: GfMatrix, small: GfMatrix) -> bool:
    """Whether the row space of ``small`` lies inside that of ``big``."""
    return rank(vstack([big, small])) == rank(big)


def det(m: GfMatrix) -> int:
    if m.rows != m.cols:
        raise ValueError("determinant of a non-square matrix")
    if m.rows == 0:
        return 1
    ctx = m.ctx
    s = _kernels.det_log(_log_copy(m), ctx.zech, ctx.order, ctx.half)
    return int(ctx.from_log(s))


# -- k-subset nonsingularity --------------------------------------------------------


def seeded_subsets(n: int, k: int, count: int, seed: int) -> np.ndarray:
    """``count`` sorted k-subsets of range(n), reproducible from ``seed``."""
    rng = np.random.default_rng(seed)
    out = np.empty((count, k), dtype=np.int64)
    for i in range(count):
        out[i] = np.sort(rng.choice(n, size=k, replace=False))
    return out


def _all_subsets(n: int, k: int, batch: int = 4096):
    """All k-subsets of range(n) in lexicographic order, in batches."""
    idx = list(range(k))
    buf = []
    while True:
        buf.append(list(idx))
        if len(buf) == batch:
            yield np.array(buf, dtype=np.int64)
            buf = []
        i = k - 1
        while i >= 0 and idx[i] == n - k + i:
            i -= 1
        if i < 0:
            break
        idx[i] += 1
        for j in range(i + 1, k):
            idx[j] = idx[j - 1] + 1
    if buf:
        yield np.array(buf, dtype=np.int64)


def subset_dets(m: GfMatrix, subsets: np.ndarray) -> np.ndarray:
    """det of m[:, s] for every row s of ``subsets`` (field elements)."""
    ctx = m.ctx
    logs = _kernels.subset_dets(_log_copy(m), subsets, ctx.zech, ctx.order, ctx.half)
    return ctx.from_log(logs)


def all_k_subsets_nonsingular(
    m: GfMatrix,
    mode: str = "exhaustive",
    count: int = DEFAULT_SAMPLES,
    seed: int = 0,
) -> bool:
    """Whether every k x k column submatrix is invertible.

    ``mode="sampled"`` checks ``count`` seeded random subsets only, which is a
    one-sided certificate.
    """
    k, n = m.shape
    if k > n:
        return False
    if k == 0:
        return True
    ctx = m.ctx
    glog = _log_copy(m)
    if mode == "exhaustive":
        total = math.comb(n, k)
        if total > SUBSET_BUDGET:
            raise BudgetExceeded(f"C({n},{k}) = {total} subsets exceeds {SUBSET_BUDGET}")
        batches = _all_subsets(n, k)
    elif mode == "sampled":
        batches = [seeded_subsets(n, k, count, seed)]
    else:
        raise ValueError(f"unknown mode {mode!r}")
    for subsets in batches:
        logs = _kernels.subset_dets(glog, subsets, ctx.zech, ctx.order, ctx.half)
        if np.any(logs < 0):
            return False
    return True
