"""Invariant suites behind ``gagc selftest``.

Each suite returns (ok, detail).  Products that would otherwise go through
the log tables are recomputed here by schoolbook polynomial multiplication
on coordinate vectors, so table errors cannot hide behind themselves.
"""

from __future__ import annotations

import itertools
import math
import sys
import time
from dataclasses import dataclass
from typing import Callable, Optional, TextIO

import numpy as np

from gagc.codes import GrsSpec, LinearCode, galois_dual, galois_ip, grs_dual_multiplier, grs_matrix
from gagc.constructions import (
    construct_hermitian,
    construct_hyper_elliptic,
    construct_line,
    eval_set_t3,
    eval_sets_t7,
    nested,
)
from gagc.curves import enumerate_points, evaluate_code, point_count, rr_basis
from gagc.gf import (
    FieldCtx,
    frobenius,
    is_power_residue,
    is_prime,
    make_field,
    trace_to_prime,
)
from gagc.matrix import GfMatrix, _reduction_table, contains, null_space, rank, row_space_equal


@dataclass(frozen=True)
class SuiteResult:
    name: str
    ok: bool
    detail: str
    seconds: float


# -- oracles ------------------------------------------------------------------------


def schoolbook_mul(ctx: FieldCtx, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Product by coordinate convolution and reduction, no log tables."""
    da, db = ctx.digits(a), ctx.digits(b)
    da, db = np.broadcast_arrays(da, db)
    h = ctx.h
    conv = np.zeros(da.shape[:-1] + (2 * h - 1,), dtype=np.int64)
    for i in range(h):
        for j in range(h):
            conv[..., i + j] += da[..., i] * db[..., j]
    return ctx.from_digits((conv % ctx.p) @ _reduction_table(ctx) % ctx.p)


def schoolbook_pow(ctx: FieldCtx, a: np.ndarray, n: int) -> np.ndarray:
    out = np.ones_like(np.asarray(a, dtype=np.int64))
    base = np.asarray(a, dtype=np.int64)
    while n:
        if n & 1:
            out = schoolbook_mul(ctx, out, base)
        base = schoolbook_mul(ctx, base, base)
        n >>= 1
    return out


def trace_by_matrix(ctx: FieldCtx, a: np.ndarray) -> np.ndarray:
    """Absolute trace as the trace of x -> a x on the basis 1, x, ..., x^(h-1)."""
    basis = np.array([ctx.p**j for j in range(ctx.h)], dtype=np.int64)
    images = schoolbook_mul(ctx, np.asarray(a)[..., None], basis)
    diag = np.stack([ctx.digits(images[..., j])[..., j] for j in range(ctx.h)], axis=-1)
    return diag.sum(axis=-1) % ctx.p


def fields_up_to(q_max: int, p_filter: Optional[Callable[[int], bool]] = None) -> list[FieldCtx]:
    out = []
    for p in range(2, q_max + 1):
        if not is_prime(p) or (p_filter and not p_filter(p)):
            continue
        h = 1
        while p**h <= q_max:
            out.append(make_field(p, h))
            h += 1
    return out


def subfield(ctx: FieldCtx, e: int) -> np.ndarray:
    """Fixed points of a -> a^(p^e), found by scanning every element."""
    allel = ctx.elements()
    return allel[schoolbook_pow(ctx, allel, ctx.p**e) == allel]


def _fail(bad: list, what: str) -> tuple[bool, str]:
    head = ", ".join(map(str, bad[:4]))
    return False, f"{len(bad)} {what}; first: {head}"


# -- gf --------------------------------------------------------------------------------


def suite_frobenius_laws(full: bool, seed: int) -> tuple[bool, str]:
    rng = np.random.default_rng(seed)
    bad, checked = [], 0
    for ctx in fields_up_to(6561 if full else 81):
        if ctx.h == 1:
            continue
        if ctx.q <= 81:
            a, b = (g.ravel() for g in np.meshgrid(ctx.elements(), ctx.elements()))
        else:
            a, b = rng.integers(0, ctx.q, size=(2, 10_000))
        for e in range(1, ctx.h):
            fa, fb = frobenius(ctx, a, e), frobenius(ctx, b, e)
            add_ok = np.array_equal(frobenius(ctx, ctx.digit_add(a, b), e), ctx.digit_add(fa, fb))
            mul_ok = np.array_equal(frobenius(ctx, schoolbook_mul(ctx, a, b), e),
                                    schoolbook_mul(ctx, fa, fb))
            checked += len(a)
            if not (add_ok and mul_ok):
                bad.append((ctx.p, ctx.h, e))
    if bad:
        return _fail(bad, "(p, h, e) break additivity or multiplicativity")
    return True, f"{checked} pairs"


def suite_frobenius_period(full: bool, seed: int) -> tuple[bool, str]:
    bad = []
    fields = fields_up_to(6561 if full else 81)
    for ctx in fields:
        a = ctx.elements()
        b = a
        for _ in range(ctx.h):
            b = schoolbook_pow(ctx, b, ctx.p)
        if not np.array_equal(a, b) or not np.array_equal(frobenius(ctx, a, ctx.h), a):
            bad.append(ctx.q)
    if bad:
        return _fail(bad, "fields where a^(p^h) != a")
    return True, f"{len(fields)} fields exhaustively"


def suite_trace(full: bool, seed: int) -> tuple[bool, str]:
    bad = []
    fields = fields_up_to(256 if full else 81)
    for ctx in fields:
        a = ctx.elements()
        tr = np.asarray(trace_to_prime(ctx, a))
        fibers = np.bincount(tr, minlength=ctx.p)
        linear = np.array_equal(np.asarray(trace_to_prime(ctx, ctx.mul(a, 2 % ctx.p))),
                                (2 % ctx.p) * tr % ctx.p)
        b = np.roll(a, 1)
        additive = np.array_equal(np.asarray(trace_to_prime(ctx, ctx.digit_add(a, b))),
                                  (tr + np.asarray(trace_to_prime(ctx, b))) % ctx.p)
        ok = (
            len(fibers) == ctx.p
            and np.all(fibers == ctx.q // ctx.p)
            and np.array_equal(tr, trace_by_matrix(ctx, a))
            and linear
            and additive
        )
        if not ok:
            bad.append(ctx.q)
    if bad:
        return _fail(bad, "fields with a bad trace")
    return True, f"{len(fields)} fields, fibers q/p, matches the multiplication-matrix trace"


def _l2_rows(full: bool, odd: bool) -> list[tuple[int, int, int, bool, bool]]:
    rows = []
    fields = fields_up_to(6561 if full else 81, (lambda p: p > 2) if odd else (lambda p: p == 2))
    for ctx in fields:
        for e in range(1, ctx.h):
            if ctx.h % e:
                continue
            sub = subfield(ctx, e)
            contained = bool(np.all(is_power_residue(ctx, sub[sub != 0], e)))
            rows.append((ctx.p, ctx.h, e, contained, ctx.h % (2 * e) == 0))
    return rows


def suite_l2_odd(full: bool, seed: int) -> tuple[bool, str]:
    rows = _l2_rows(full, odd=True)
    bad = [(p, h, e) for p, h, e, got, want in rows if got != want]
    if bad:
        return _fail(bad, "(p, h, e) contradict the biconditional")
    return True, f"{len(rows)} (p, h, e) with e | h, odd p"


def suite_l2_char2(full: bool, seed: int) -> tuple[bool, str]:
    rows = _l2_rows(full, odd=False)
    if_fail = [(p, h, e) for p, h, e, got, want in rows if want and not got]
    only_if_fail = [(p, h, e) for p, h, e, got, want in rows if got and not want]
    if if_fail or only_if_fail:
        return False, (
            f"'if' direction fails on {len(if_fail)}, 'only if' fails on {len(only_if_fail)} "
            f"of {len(rows)} (p, h, e); e.g. {(only_if_fail or if_fail)[:3]}: "
            f"gcd(2^e+1, 2^h-1) = 1 when h/e is odd, so E is all of GF(q)*"
        )
    return True, f"{len(rows)} (p, h, e) with e | h, p = 2"


def suite_l4(full: bool, seed: int) -> tuple[bool, str]:
    bad = []
    fields = fields_up_to(256 if full else 81)
    for ctx in fields:
        y = ctx.elements()
        image = np.zeros(ctx.q, dtype=bool)
        image[ctx.sub(schoolbook_pow(ctx, y, ctx.p), y)] = True
        if not np.array_equal(image, np.asarray(trace_to_prime(ctx, y)) == 0):
            bad.append(ctx.q)
    if bad:
        return _fail(bad, "fields where solvability != zero trace")
    return True, f"{len(fields)} fields exhaustively"


def suite_l5(full: bool, seed: int) -> tuple[bool, str]:
    sizes = (16, 64, 256) if full else (16, 64)
    for q in sizes:
        ctx = make_field(2, q.bit_length() - 1)
        sub = subfield(ctx, ctx.h // 2)
        if len(sub) != math.isqrt(q):
            return False, f"GF({q}) subfield of size {len(sub)}"
        t1 = np.asarray(trace_to_prime(ctx, sub))
        t2 = np.asarray(trace_to_prime(ctx, ctx.add(schoolbook_pow(ctx, sub, 3), sub)))
        if np.any(t1) or np.any(t2):
            return False, f"nonzero trace in GF({q})"
    return True, f"q in {sizes}"


def suite_l3(full: bool, seed: int) -> tuple[bool, str]:
    ctx = make_field(3, 8)
    e = 1
    big_n = ctx.order // (ctx.p**e + 1)
    rng = np.random.default_rng(seed)
    pairs = 100_000 if full else 1_000
    i = rng.integers(0, ctx.order, size=pairs)
    j = rng.integers(0, ctx.order - 1, size=pairs)
    j = np.where(j >= i, j + 1, j)
    ai, aj = ctx.exp[i], ctx.exp[j]
    diff = ctx.sub(schoolbook_pow(ctx, ai, big_n), schoolbook_pow(ctx, aj, big_n))
    nz = diff != 0
    fails = int(np.sum(~np.asarray(is_power_residue(ctx, diff[nz], e))))
    if fails:
        return False, f"{fails} of {int(nz.sum())} nonzero differences outside E"
    return True, f"{pairs} pairs at GF(3^8), {int(nz.sum())} nonzero differences, 0 failures"


# -- codes --------------------------------------------------------------------------


def _random_codes(ctx: FieldCtx, count: int, rng: np.random.Generator):
    for _ in range(count):
        n = int(rng.integers(2, 11))
        k = int(rng.integers(1, n))
        yield LinearCode(GfMatrix(ctx, rng.integers(0, ctx.q, size=(k, n))))


def suite_galois_duals(full: bool, seed: int) -> tuple[bool, str]:
    """Both dual formulas agree, are orthogonal by definition and have dimension n - k."""
    rng = np.random.default_rng(seed)
    count = 100 if full else 20
    bad, checked = [], 0
    for p, h in ((2, 2), (3, 2), (2, 4), (3, 4)):
        ctx = make_field(p, h)
        for code in _random_codes(ctx, count, rng):
            for e in range(h):
                via_image = galois_dual(code, e)
                via_dual = null_space(code.gen).frobenius((h - e) % h)
                ips_zero = all(
                    galois_ip(ctx, c, x, e) == 0
                    for c in code.gen.data for x in via_image.gen.data
                )
                ok = (
                    row_space_equal(via_image.gen, via_dual)
                    and via_image.k == code.n - code.k
                    and ips_zero
                )
                checked += 1
                if not ok:
                    bad.append((ctx.q, code.n, code.k, e))
    if bad:
        return _fail(bad, "(q, n, k, e) disagree")
    return True, f"{checked} (code, e) pairs over GF(4), GF(9), GF(16), GF(81)"


def suite_grs_dual(full: bool, seed: int) -> tuple[bool, str]:
    rng = np.random.default_rng(seed)
    checked = 0
    for p, h in ((2, 2), (3, 2)):
        ctx = make_field(p, h)
        nonzero = ctx.exp[: ctx.order]
        for n in range(2, min(8, ctx.q) + 1):
            for nodes in itertools.combinations(range(ctx.q), n):
                alpha = np.array(nodes, dtype=np.int64)
                u = grs_dual_multiplier(ctx, alpha)
                for v in (np.ones(n, dtype=np.int64), rng.choice(nonzero, size=n)):
                    for k in range(1, n):
                        g = grs_matrix(GrsSpec(ctx, alpha, v, k))
                        dual = grs_matrix(GrsSpec(ctx, alpha, ctx.div(u, v), n - k))
                        checked += 1
                        if not row_space_equal(null_space(g), dual):
                            return False, f"GF({ctx.q}) nodes {nodes} k={k}"
    return True, f"{checked} (nodes, v, k) over GF(4), GF(9)"


# -- curves ---------------------------------------------------------------------------


def _curve_models(full: bool):
    yield enumerate_points("line", make_field(3, 2))
    yield enumerate_points("elliptic", make_field(2, 2), (1, 0, 0))
    yield enumerate_points("elliptic", make_field(2, 4), (1, 1, 0))
    yield enumerate_points("hyper_elliptic", make_field(2, 2))
    yield enumerate_points("hyper_elliptic", make_field(2, 4))
    yield enumerate_points("hermitian", make_field(2, 2))
    yield enumerate_points("hermitian", make_field(3, 2))
    if full:
        yield enumerate_points("line", make_field(2, 4))
        yield enumerate_points("elliptic", make_field(2, 6), (1, 0, 1))
        yield enumerate_points("hyper_elliptic", make_field(2, 6))
        yield enumerate_points("hermitian", make_field(2, 4))
        yield enumerate_points("hermitian", make_field(5, 2))


def suite_rr_dimension(full: bool, seed: int) -> tuple[bool, str]:
    checked = 0
    for model in _curve_models(full):
        g, n = model.genus, len(model.points)
        ones = np.ones(n, dtype=np.int64)
        for m in range(max(0, 2 * g - 1), min(4 * g + 10, n - 1) + 1):
            size = len(rr_basis(model, m))
            r = rank(evaluate_code(model, model.points, m, ones).gen)
            checked += 1
            if size != m + 1 - g or r != m + 1 - g:
                return False, (f"{model.family} GF({model.ctx.q}) m={m}: basis {size}, "
                               f"rank {r}, expected {m + 1 - g}")
    return True, f"{checked} (curve, m) pairs"


def suite_point_counts(full: bool, seed: int) -> tuple[bool, str]:
    q_max = 6561 if full else 81
    checked = 0
    for ctx in fields_up_to(q_max):
        if ctx.h % 2:
            continue
        s = math.isqrt(ctx.q)
        herm = point_count(enumerate_points("hermitian", ctx))
        checked += 1
        if herm != s**3 + 1:
            return False, f"Hermitian GF({ctx.q}): {herm} points, expected {s**3 + 1}"
        if ctx.p == 2:
            hyp = point_count(enumerate_points("hyper_elliptic", ctx))
            checked += 1
            if hyp != 2 * ctx.q + 1:
                return False, f"hyper-elliptic GF({ctx.q}): {hyp} points, expected {2 * ctx.q + 1}"
    rng = np.random.default_rng(seed)
    for h in (2, 4, 6) if full else (2, 4):
        ctx = make_field(2, h)
        for _ in range(4):
            a = int(rng.integers(1, ctx.q))
            b, c = (int(t) for t in rng.integers(0, ctx.q, size=2))
            model = enumerate_points("elliptic", ctx, (a, b, c))
            # brute force: every (x, y) pair
            x, y = (g.ravel() for g in np.meshgrid(ctx.elements(), ctx.elements(), indexing="ij"))
            on = model.lhs(y) == model.rhs(x)
            solvable_x = len(np.unique(x[on]))
            checked += 1
            if point_count(model) != 2 * solvable_x + 1 or int(on.sum()) != 2 * solvable_x:
                return False, f"elliptic {(a, b, c)} over GF({ctx.q})"
    return True, f"{checked} curves up to q = {q_max}"


def suite_nesting(full: bool, seed: int) -> tuple[bool, str]:
    checked = 0
    for model in _curve_models(full):
        n = len(model.points)
        ones = np.ones(n, dtype=np.int64)
        prev = None
        for m in range(0, min(4 * model.genus + 10, n - 1) + 1):
            code = evaluate_code(model, model.points, m, ones)
            if prev is not None and not contains(code.gen, prev.gen):
                return False, f"{model.family} GF({model.ctx.q}) m={m - 1} not inside m={m}"
            prev = code
            checked += 1
    ctx9, ctx16 = make_field(3, 2), make_field(2, 4)
    es = eval_sets_t7(ctx9, 1, 2, t=3)
    pairs = [
        (construct_hermitian(ctx9, 1, es, 7, seed=seed)[0], construct_hermitian(ctx9, 1, es, 8, seed=seed)[0]),
        (construct_hyper_elliptic(ctx16, 1, 16, 5, seed=seed)[0],
         construct_hyper_elliptic(ctx16, 1, 16, 6, seed=seed)[0]),
    ]
    if full:
        ctx = make_field(3, 8)
        line = eval_set_t3(ctx, 1, 0)
        for k in (1, 10, 409):
            pairs.append((construct_line(ctx, line, k, 1, "sampled", seed)[0],
                          construct_line(ctx, line, k + 1, 1, "sampled", seed)[0]))
    for small, large in pairs:
        checked += 1
        if not nested(small, large):
            return False, f"[{small.n},{small.k}] not inside [{large.n},{large.k}]"
    return True, f"{checked} consecutive pairs"


SUITES: list[tuple[str, Callable[[bool, int], tuple[bool, str]]]] = [
    ("gf.frobenius_laws", suite_frobenius_laws),
    ("gf.frobenius_period", suite_frobenius_period),
    ("gf.trace_fibers", suite_trace),
    ("gf.subfield_in_residues.odd_p", suite_l2_odd),
    ("gf.subfield_in_residues.p2", suite_l2_char2),
    ("gf.artin_schreier_trace", suite_l4),
    ("gf.half_field_traces", suite_l5),
    ("gf.root_differences_in_residues", suite_l3),
    ("codes.galois_dual_identities", suite_galois_duals),
    ("codes.grs_dual_multiplier", suite_grs_dual),
    ("curves.rr_dimension", suite_rr_dimension),
    ("curves.point_counts", suite_point_counts),
    ("codes.nesting", suite_nesting),
]

QUICK_SKIP = {"gf.root_differences_in_residues"}


def run(level: str = "quick", seed: int = 0, stream: Optional[TextIO] = None) -> list[SuiteResult]:
    full = level == "full"
    results = []
    for name, fn in SUITES:
        if not full and name in QUICK_SKIP:
            continue
        start = time.perf_counter()
        try:
            ok, detail = fn(full, seed)
        except Exception as exc:  # a crash is a failure, not an abort
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        res = SuiteResult(name, ok, detail, time.perf_counter() - start)
        results.append(res)
        if stream is not None:
            stream.write(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}  ({res.seconds:.1f}s)\n")
            stream.flush()
    if stream is not None:
        passed = sum(r.ok for r in results)
        total = sum(r.seconds for r in results)
        stream.write(f"selftest {level}: {passed}/{len(results)} suites passed in {total:.1f}s\n")
    return results


if __name__ == "__main__":
    sys.exit(0 if all(r.ok for r in run(sys.argv[1] if len(sys.argv) > 1 else "quick", 0, sys.stdout)) else 1)
