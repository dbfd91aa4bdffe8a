"""Table-backed arithmetic in GF(p^h).

Elements are plain integers: the polynomial c_0 + c_1 x + ... + c_{h-1} x^(h-1)
over GF(p) is encoded as c_0 + c_1 p + ... + c_{h-1} p^(h-1).  Every function
accepts either a Python int or a numpy integer array and returns the same
kind, so whole generator matrices go through the same code path as scalars.
"""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from gagc import _kernels

Q_CAP = 1 << 24

ArrayLike = Union[int, np.ndarray]


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for d in range(2, math.isqrt(n) + 1):
        if n % d == 0:
            return False
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# Dense polynomials over GF(p) as coefficient lists, lowest degree first.

def _poly_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: list[int], f: list[int], p: int) -> list[int]:
    a = _poly_trim(list(a))
    inv_lead = pow(f[-1], p - 2, p)
    df = len(f) - 1
    while len(a) - 1 >= df:
        coef = a[-1] * inv_lead % p
        shift = len(a) - 1 - df
        for i, fi in enumerate(f):
            a[shift + i] = (a[shift + i] - coef * fi) % p
        _poly_trim(a)
    return a


def _poly_mulmod(a: list[int], b: list[int], f: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    prod = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] = (prod[i + j] + ai * bj) % p
    return _poly_mod(prod, f, p)


def _poly_powmod(a: list[int], n: int, f: list[int], p: int) -> list[int]:
    result = [1]
    base = _poly_mod(a, f, p)
    while n:
        if n & 1:
            result = _poly_mulmod(result, base, f, p)
        base = _poly_mulmod(base, base, f, p)
        n >>= 1
    return result


def _poly_sub(a: list[int], b: list[int], p: int) -> list[int]:
    out = [0] * max(len(a), len(b))
    for i, c in enumerate(a):
        out[i] = c
    for i, c in enumerate(b):
        out[i] = (out[i] - c) % p
    return _poly_trim(out)


def _poly_gcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _poly_trim(list(a)), _poly_trim(list(b))
    while b:
        a, b = b, _poly_mod(a, b, p)
    return a


def is_irreducible(f: list[int], p: int) -> bool:
    """Rabin's test for a monic polynomial over GF(p)."""
    h = len(f) - 1
    if h < 1:
        return False
    x = _poly_mod([0, 1], f, p)
    if _poly_sub(_poly_powmod(x, p**h, f, p), x, p):
        return False
    for r in prime_factors(h):
        g = _poly_gcd(f, _poly_sub(_poly_powmod(x, p ** (h // r), f, p), x, p), p)
        if len(g) > 1:
            return False
    return True


def _x_is_primitive(f: list[int], p: int) -> bool:
    h = len(f) - 1
    q1 = p**h - 1
    x = [0, 1]
    if _poly_powmod(x, q1, f, p) != [1]:
        return False
    return all(_poly_powmod(x, q1 // r, f, p) != [1] for r in prime_factors(q1))


def _search_modulus(p: int, h: int) -> tuple[tuple[int, ...], bool]:
    """Smallest monic modulus, comparing (c_0, ..., c_{h-1}) lexicographically.

    Returns the modulus and whether x is primitive for it.  Prefers moduli
    with x primitive; falls back to the smallest irreducible one.
    """
    first_irreducible = None
    for low in itertools.product(range(p), repeat=h):
        f = list(low) + [1]
        if low[0] == 0 and h > 1:
            continue
        if not is_irreducible(f, p):
            continue
        if first_irreducible is None:
            first_irreducible = tuple(f)
        if _x_is_primitive(f, p):
            return tuple(f), True
    assert first_irreducible is not None
    return first_irreducible, False


@dataclass(frozen=True, eq=False)
class FieldCtx:
    """GF(p^h) with its modulus, primitive element and log tables.

    ``exp`` has length 2(q-1) so that a sum of two logs can index it without a
    reduction; ``log[0]`` is -1.  ``zech[d]`` is the log of 1 + w**d.
    """

    p: int
    h: int
    modulus: tuple[int, ...]
    primitive: int
    exp: np.ndarray
    log: np.ndarray
    zech: np.ndarray

    @property
    def q(self) -> int:
        return self.p**self.h

    @property
    def order(self) -> int:
        """Size of the multiplicative group, q - 1."""
        return self.q - 1

    @property
    def half(self) -> int:
        """Log of -1 (0 in characteristic 2)."""
        return 0 if self.p == 2 else (self.q - 1) // 2

    def __repr__(self) -> str:
        return f"FieldCtx(GF({self.p}^{self.h}), modulus={list(self.modulus)})"

    # -- element conversions -------------------------------------------------

    def digits(self, a: ArrayLike) -> np.ndarray:
        """Coordinate vectors, shape (..., h)."""
        a = np.asarray(a, dtype=np.int64)
        powers = self.p ** np.arange(self.h, dtype=np.int64)
        return (a[..., None] // powers) % self.p

    def from_digits(self, d: np.ndarray) -> np.ndarray:
        powers = self.p ** np.arange(self.h, dtype=np.int64)
        return (np.asarray(d, dtype=np.int64) % self.p) @ powers

    def to_log(self, a: ArrayLike) -> np.ndarray:
        return self.log[np.asarray(a, dtype=np.int64)]

    def from_log(self, s: ArrayLike) -> np.ndarray:
        s = np.asarray(s, dtype=np.int64)
        return np.where(s < 0, 0, self.exp[np.where(s < 0, 0, s % self.order)])

    def element(self, s: int) -> int:
        """w**s."""
        return int(self.exp[s % self.order])

    def elements(self) -> np.ndarray:
        return np.arange(self.q, dtype=np.int64)

    # -- arithmetic ----------------------------------------------------------

    def add(self, a: ArrayLike, b: ArrayLike) -> ArrayLike:
        if self.p == 2:
            return _like(a, b, np.bitwise_xor(np.asarray(a, np.int64), np.asarray(b, np.int64)))
        a_arr = np.asarray(a, dtype=np.int64)
        b_arr = np.asarray(b, dtype=np.int64)
        la, lb = self.log[a_arr], self.log[b_arr]
        d = (lb - la) % self.order
        z = self.zech[d]
        s = self.exp[np.where(z < 0, 0, la + z)]
        out = np.where(z < 0, 0, s)
        out = np.where(a_arr == 0, b_arr, np.where(b_arr == 0, a_arr, out))
        return _like(a, b, out)

    def neg(self, a: ArrayLike) -> ArrayLike:
        if self.p == 2:
            return a
        a_arr = np.asarray(a, dtype=np.int64)
        out = np.where(a_arr == 0, 0, self.exp[self.log[a_arr] + self.half])
        return _like(a, a, out)

    def sub(self, a: ArrayLike, b: ArrayLike) -> ArrayLike:
        return self.add(a, self.neg(b))

    def mul(self, a: ArrayLike, b: ArrayLike) -> ArrayLike:
        a_arr = np.asarray(a, dtype=np.int64)
        b_arr = np.asarray(b, dtype=np.int64)
        s = self.exp[self.log[a_arr] + self.log[b_arr]]
        out = np.where((a_arr == 0) | (b_arr == 0), 0, s)
        return _like(a, b, out)

    def inv(self, a: ArrayLike) -> ArrayLike:
        a_arr = np.asarray(a, dtype=np.int64)
        if np.any(a_arr == 0):
            raise ZeroDivisionError("inverse of zero")
        return _like(a, a, self.exp[(-self.log[a_arr]) % self.order])

    def div(self, a: ArrayLike, b: ArrayLike) -> ArrayLike:
        return self.mul(a, self.inv(b))

    def power(self, a: ArrayLike, n: int) -> ArrayLike:
        a_arr = np.asarray(a, dtype=np.int64)
        s = self.exp[(self.log[a_arr] * (n % self.order)) % self.order]
        if n == 0:
            out = np.ones_like(a_arr)
        else:
            out = np.where(a_arr == 0, 0, s)
        return _like(a, a, out)

    def sum(self, a: np.ndarray) -> int:
        """Sum of all entries of a."""
        a = np.asarray(a, dtype=np.int64).ravel()
        if self.p == 2:
            return int(np.bitwise_xor.reduce(a)) if a.size else 0
        return int(self.from_digits(self.digits(a).sum(axis=0)))

    def digit_add(self, a: ArrayLike, b: ArrayLike) -> ArrayLike:
        """Addition by coordinates, independent of the log tables."""
        return _like(a, b, self.from_digits(self.digits(a) + self.digits(b)))


def _like(a: ArrayLike, b: ArrayLike, out: np.ndarray) -> ArrayLike:
    if np.ndim(a) == 0 and np.ndim(b) == 0:
        return int(out)
    return out


@functools.lru_cache(maxsize=None)
def make_field(p: int, h: int) -> FieldCtx:
    """The deterministic field GF(p^h).

    The modulus is the lexicographically smallest monic irreducible polynomial
    (coefficients c_0, c_1, ... compared in that order) for which x is
    primitive; x is then the primitive element.
    """
    if not is_prime(p):
        raise ValueError(f"characteristic {p} is not prime")
    if h < 1:
        raise ValueError(f"extension degree {h} must be positive")
    q = p**h
    if q > Q_CAP:
        raise ValueError(f"field order {p}^{h} exceeds the table cap {Q_CAP}")
    modulus, x_primitive = _search_modulus(p, h)
    low = np.array(modulus[:h], dtype=np.int64)
    powers_of_x = _kernels.build_exp_table(p, h, low)
    if x_primitive:
        primitive = p if h > 1 else int(powers_of_x[1]) if q > 2 else 1
        exp_once = powers_of_x
    else:
        # Unreachable for prime fields and their extensions in practice, kept
        # for completeness: pick the smallest element of full order.
        primitive, exp_once = _smallest_primitive(p, h, modulus)
    q1 = q - 1
    log = np.full(q, -1, dtype=np.int64)
    log[exp_once] = np.arange(q1, dtype=np.int64)
    exp = np.concatenate([exp_once, exp_once]).astype(np.int64)
    # 1 + w**d only touches the constant coordinate.
    c0 = exp_once % p
    one_plus = exp_once - c0 + (c0 + 1) % p
    zech = log[one_plus]
    for arr in (exp, log, zech):
        arr.setflags(write=False)
    ctx = FieldCtx(p, h, modulus, primitive, exp, log, zech)
    _check_tables(ctx)
    return ctx


def _smallest_primitive(p: int, h: int, modulus: tuple[int, ...]) -> tuple[int, np.ndarray]:
    q1 = p**h - 1
    f = list(modulus)
    factors = prime_factors(q1)
    for g in range(2, p**h):
        poly = [(g // p**i) % p for i in range(h)]
        if _poly_powmod(poly, q1, f, p) != [1]:
            continue
        if all(_poly_powmod(poly, q1 // r, f, p) != [1] for r in factors):
            table = np.empty(q1, dtype=np.int64)
            cur = [1]
            for i in range(q1):
                cur = _poly_trim(cur)
                table[i] = sum(c * p**j for j, c in enumerate(cur))
                cur = _poly_mulmod(cur, poly, f, p)
            return g, table
    raise AssertionError("no primitive element")


def _check_tables(ctx: FieldCtx) -> None:
    if not is_irreducible(list(ctx.modulus), ctx.p):
        raise AssertionError("modulus is reducible")
    q1 = ctx.order
    nonzero = np.arange(1, ctx.q)
    if len(np.unique(ctx.exp[:q1])) != q1 or np.any(ctx.exp[ctx.log[nonzero]] != nonzero):
        raise AssertionError("primitive element does not have order q-1")


# -- Frobenius, trace, norm and power residues ---------------------------------


def frobenius(ctx: FieldCtx, a: ArrayLike, e: int) -> ArrayLike:
    """a ** (p ** e); e is taken modulo h."""
    e %= ctx.h
    if e == 0:
        return a
    return ctx.power(a, pow(ctx.p, e, ctx.order) if ctx.order > 1 else 1)


def trace_to_prime(ctx: FieldCtx, a: ArrayLike) -> ArrayLike:
    """Absolute trace a + a^p + ... + a^(p^(h-1)), an element of GF(p)."""
    return relative_trace(ctx, a, 1)


def relative_trace(ctx: FieldCtx, a: ArrayLike, e: int) -> ArrayLike:
    """Trace from GF(p^h) down to its subfield GF(p^e)."""
    if e <= 0 or ctx.h % e:
        raise ValueError(f"GF({ctx.p}^{e}) is not a subfield of GF({ctx.p}^{ctx.h})")
    acc = a
    for i in range(1, ctx.h // e):
        acc = ctx.add(acc, frobenius(ctx, a, i * e))
    return acc


def relative_norm(ctx: FieldCtx, a: ArrayLike, e: int) -> ArrayLike:
    """a ** ((q-1)/(p^e-1)).  Scalars reject zero; arrays map 0 to 0."""
    sub = ctx.p**e - 1
    if e <= 0 or ctx.order % sub:
        raise ValueError(f"p^e - 1 = {sub} does not divide q - 1 = {ctx.order}")
    if np.ndim(a) == 0 and int(a) == 0:
        raise ValueError("norm of zero is degenerate")
    return ctx.power(a, ctx.order // sub)


def dlog(ctx: FieldCtx, a: ArrayLike) -> ArrayLike:
    a_arr = np.asarray(a, dtype=np.int64)
    if np.any(a_arr == 0):
        raise ValueError("discrete log of zero")
    out = ctx.log[a_arr]
    return int(out) if np.ndim(a) == 0 else out


def residue_modulus(ctx: FieldCtx, e: int) -> int:
    """gcd(p^e + 1, q - 1): E is the set of w**s with this modulus dividing s."""
    return math.gcd(ctx.p**e + 1, ctx.order)


def is_power_residue(ctx: FieldCtx, a: ArrayLike, e: int) -> ArrayLike:
    """Whether a is a (p^e + 1)-th power of a nonzero element."""
    s = dlog(ctx, a)
    out = np.asarray(s) % residue_modulus(ctx, e) == 0
    return bool(out) if np.ndim(a) == 0 else out


def root_pe1(ctx: FieldCtx, a: ArrayLike, e: int) -> ArrayLike:
    """The (p^e + 1)-th root of a with the smallest discrete log."""
    s = np.asarray(dlog(ctx, a), dtype=np.int64)
    m = ctx.p**e + 1
    g = residue_modulus(ctx, e)
    if np.any(s % g):
        raise ValueError(f"not a (p^e+1)-th power for e={e}")
    mod = ctx.order // g
    if mod == 1:
        root = np.zeros_like(s)
    else:
        root = (s // g) * pow(m // g, -1, mod) % mod
    out = ctx.from_log(root)
    return int(out) if np.ndim(a) == 0 else out
