"""Plane curves with a single point at infinity, their rational points and
one-point evaluation codes."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from gagc.codes import GrsSpec, LinearCode
from gagc.gf import FieldCtx, trace_to_prime
from gagc.matrix import GfMatrix

FAMILIES = ("line", "elliptic", "hyper_elliptic", "hermitian")


def _sqrt_q(ctx: FieldCtx) -> int:
    if ctx.h % 2:
        raise ValueError(f"GF({ctx.p}^{ctx.h}) has odd degree; sqrt(q) is not an integer")
    return ctx.p ** (ctx.h // 2)


@dataclass(frozen=True, eq=False)
class CurveModel:
    """A curve y-equation over GF(q) with its affine points.

    ``points`` is an (N, 2) array of (x, y) sorted by x then y in canonical
    encoding; the line stores y = 0.  ``pole_orders`` are the pole orders of
    x and y at infinity (y is None on the line) and ``y_degree`` is the degree
    of the equation in y, which bounds the exponent of y in a basis monomial.
    """

    family: str
    ctx: FieldCtx
    genus: int
    pole_orders: tuple[int, Optional[int]]
    y_degree: int
    points: np.ndarray
    params: tuple[int, ...] = field(default=())

    @property
    def j_max(self) -> int:
        return self.y_degree - 1

    def lhs(self, y: np.ndarray) -> np.ndarray:
        ctx = self.ctx
        if self.family == "elliptic":
            a = self.params[0]
            return ctx.add(ctx.mul(y, y), ctx.mul(y, a))
        if self.family == "hyper_elliptic":
            return ctx.add(ctx.mul(y, y), y)
        if self.family == "hermitian":
            return ctx.add(ctx.power(y, _sqrt_q(ctx)), y)
        raise ValueError("the line has no y-equation")

    def rhs(self, x: np.ndarray) -> np.ndarray:
        ctx = self.ctx
        if self.family == "elliptic":
            _, b, c = self.params
            return ctx.add(ctx.add(ctx.power(x, 3), ctx.mul(x, b)), c)
        return ctx.power(x, _sqrt_q(ctx) + 1)

    def on_curve(self, pts: np.ndarray) -> np.ndarray:
        pts = np.asarray(pts, dtype=np.int64).reshape(-1, 2)
        if self.family == "line":
            return pts[:, 1] == 0
        return self.lhs(pts[:, 1]) == self.rhs(pts[:, 0])

    def fiber(self, x: int) -> np.ndarray:
        """Points with first coordinate x, sorted by y."""
        lo, hi = np.searchsorted(self.points[:, 0], [x, x + 1])
        return self.points[lo:hi]


def _solve_fibers(ctx: FieldCtx, lhs: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """All (x, y) with lhs[y] == rhs[x], sorted by x then y."""
    order = np.argsort(lhs, kind="stable")
    sorted_lhs = lhs[order]
    lo = np.searchsorted(sorted_lhs, rhs, side="left")
    hi = np.searchsorted(sorted_lhs, rhs, side="right")
    counts = hi - lo
    xs = np.repeat(np.arange(ctx.q, dtype=np.int64), counts)
    starts = np.repeat(lo, counts)
    within = np.arange(len(xs)) - np.repeat(np.cumsum(counts) - counts, counts)
    ys = order[starts + within]
    return np.stack([xs, ys], axis=1)


def enumerate_points(family: str, ctx: FieldCtx, params: Sequence[int] = ()) -> CurveModel:
    """Build the curve model and all its affine rational points.

    Families: ``line``; ``elliptic`` y^2 + a y = x^3 + b x + c with
    params (a, b, c), a != 0, in characteristic 2; ``hyper_elliptic``
    y^2 + y = x^(sqrt(q)+1) in characteristic 2; ``hermitian``
    y^sqrt(q) + y = x^(sqrt(q)+1).
    """
    q = ctx.q
    if family == "line":
        xs = np.arange(q, dtype=np.int64)
        pts = np.stack([xs, np.zeros_like(xs)], axis=1)
        return CurveModel("line", ctx, 0, (1, None), 1, pts)
    if family == "elliptic":
        if ctx.p != 2:
            raise ValueError("elliptic family requires characteristic 2")
        if len(params) != 3:
            raise ValueError("elliptic family takes parameters (a, b, c)")
        a, b, c = (int(t) for t in params)
        if a == 0 or not all(0 <= t < q for t in (a, b, c)):
            raise ValueError("elliptic parameters must be field elements with a != 0")
        model = CurveModel("elliptic", ctx, 1, (2, 3), 2, np.empty((0, 2), np.int64), (a, b, c))
    elif family == "hyper_elliptic":
        if ctx.p != 2:
            raise ValueError("hyper-elliptic family requires characteristic 2")
        s = _sqrt_q(ctx)
        model = CurveModel("hyper_elliptic", ctx, s // 2, (2, s + 1), 2, np.empty((0, 2), np.int64))
    elif family == "hermitian":
        s = _sqrt_q(ctx)
        model = CurveModel("hermitian", ctx, (q - s) // 2, (s, s + 1), s, np.empty((0, 2), np.int64))
    else:
        raise ValueError(f"unknown curve family {family!r}")
    all_elems = ctx.elements()
    pts = _solve_fibers(ctx, model.lhs(all_elems), model.rhs(all_elems))
    model = CurveModel(model.family, ctx, model.genus, model.pole_orders, model.y_degree, pts, model.params)
    _check_points(model)
    return model


def _check_points(model: CurveModel) -> None:
    ctx = model.ctx
    pts = model.points
    if not np.all(model.on_curve(pts)):
        raise AssertionError("enumerated point off the curve")
    counts = np.bincount(pts[:, 0], minlength=ctx.q)
    if model.family == "hermitian":
        if np.any(counts != model.y_degree):
            raise AssertionError("Hermitian fiber of the wrong size")
        return
    if np.any((counts != 0) & (counts != 2)):
        raise AssertionError("Artin-Schreier fiber of the wrong size")
    # y^2 + a y = r  <=>  (y/a)^2 + (y/a) = r/a^2, solvable iff Tr(r/a^2) = 0.
    a = model.params[0] if model.family == "elliptic" else 1
    target = ctx.div(model.rhs(ctx.elements()), ctx.mul(a, a))
    solvable = np.asarray(trace_to_prime(ctx, target)) == 0
    if not np.array_equal(solvable, counts == 2):
        raise AssertionError("fiber sizes disagree with the trace criterion")


def rr_basis(model: CurveModel, m: int) -> list[tuple[int, int]]:
    """Monomials x^i y^j with pole order <= m, sorted by pole order."""
    if m < 0:
        return []
    ox, oy = model.pole_orders
    out = []
    for j in range(model.j_max + 1):
        rest = m - j * (oy or 0)
        if rest < 0:
            break
        out.extend((i, j) for i in range(rest // ox + 1))
    return sorted(out, key=lambda ij: (ij[0] * ox + ij[1] * (oy or 0), ij[1]))


def evaluate_code(
    model: CurveModel, points: np.ndarray, m: int, v: Sequence[int]
) -> LinearCode:
    """Generator rows (v_t x_t^i y_t^j)_t for (i, j) in rr_basis(model, m)."""
    ctx = model.ctx
    pts = np.asarray(points, dtype=np.int64).reshape(-1, 2)
    v = np.asarray(v, dtype=np.int64)
    if len(v) != len(pts):
        raise ValueError("one multiplier per point is required")
    if np.any(v == 0):
        raise ValueError("multipliers must be nonzero")
    if len(np.unique(pts[:, 0] * ctx.q + pts[:, 1])) != len(pts):
        raise ValueError("evaluation points must be distinct")
    if not np.all(model.on_curve(pts)):
        raise ValueError("evaluation point not on the curve")
    xs, ys = pts[:, 0], pts[:, 1]
    basis = rr_basis(model, m)
    rows = np.empty((len(basis), len(pts)), dtype=np.int64)
    for r, (i, j) in enumerate(basis):
        rows[r] = ctx.mul(ctx.mul(ctx.power(xs, i), ctx.power(ys, j)), v)
    gen = GfMatrix(ctx, rows)
    if model.family == "line" and 1 <= len(basis) <= len(pts):
        return LinearCode(gen, grs=GrsSpec(ctx, xs, v, len(basis)))
    return LinearCode(gen)


def expected_dimension(model: CurveModel, m: int, n: int) -> Optional[int]:
    """m + 1 - g inside the window 2g - 2 < m < n, else None."""
    g = model.genus
    if 2 * g - 2 < m < n:
        return m + 1 - g
    return None


def point_count(model: CurveModel) -> int:
    """Number of rational points including the one at infinity."""
    return len(model.points) + 1
