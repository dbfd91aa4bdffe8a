"""Plain-text matrix files that carry their field along.

    GFMAT p=3 h=2 poly=2,1,1 n=4 k=2 e=1 theorem=t3 alpha=1,3,7,0 v=...
    1 1 1 1
    0 3 2 5

The first six header fields are mandatory and come in this order.  Any
further ``key=value`` fields are kept verbatim and in order, so emitting a
parsed file reproduces it byte for byte.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from gagc.gf import FieldCtx, make_field
from gagc.matrix import GfMatrix

MAGIC = "GFMAT"
REQUIRED = ("p", "h", "poly", "n", "k", "e")


class MatrixFileError(ValueError):
    """The text is not a well-formed matrix file."""


@dataclass(frozen=True, eq=False)
class MatrixFile:
    matrix: GfMatrix
    e: int
    extras: dict[str, str] = field(default_factory=dict)

    @property
    def ctx(self) -> FieldCtx:
        return self.matrix.ctx

    def ints(self, key: str) -> Optional[list[int]]:
        """A comma-separated integer list from the extras, or None."""
        if key not in self.extras:
            return None
        raw = self.extras[key]
        try:
            return [int(tok) for tok in raw.split(",")] if raw else []
        except ValueError:
            raise MatrixFileError(f"{key}= is not a comma-separated integer list") from None

    def int(self, key: str) -> Optional[int]:
        vals = self.ints(key)
        if vals is None:
            return None
        if len(vals) != 1:
            raise MatrixFileError(f"{key}= must be a single integer")
        return vals[0]


def join_ints(vals) -> str:
    return ",".join(str(int(v)) for v in vals)


def emit(mf: MatrixFile) -> str:
    ctx = mf.ctx
    k, n = mf.matrix.shape
    head = [MAGIC, f"p={ctx.p}", f"h={ctx.h}", f"poly={join_ints(ctx.modulus)}",
            f"n={n}", f"k={k}", f"e={mf.e}"]
    for key, val in mf.extras.items():
        if not key or "=" in key or any(c.isspace() for c in key + val):
            raise ValueError(f"extra header field {key!r} cannot be written")
        head.append(f"{key}={val}")
    lines = [" ".join(head)]
    lines.extend(" ".join(map(str, row)) for row in mf.matrix.data.tolist())
    return "\n".join(lines) + "\n"


def parse(text: str) -> MatrixFile:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise MatrixFileError("empty file")
    tokens = lines[0].split(" ")
    if tokens[0] != MAGIC:
        raise MatrixFileError(f"header must start with {MAGIC}")
    fields: dict[str, str] = {}
    for tok in tokens[1:]:
        key, sep, val = tok.partition("=")
        if not sep or not key:
            raise MatrixFileError(f"bad header token {tok!r}")
        if key in fields:
            raise MatrixFileError(f"duplicate header field {key}")
        fields[key] = val
    if list(fields)[: len(REQUIRED)] != list(REQUIRED):
        raise MatrixFileError(f"header must begin with fields {' '.join(REQUIRED)} in order")
    try:
        p, h, n, k, e = (int(fields[key]) for key in ("p", "h", "n", "k", "e"))
        poly = tuple(int(c) for c in fields["poly"].split(","))
    except ValueError:
        raise MatrixFileError("non-integer value in the mandatory header fields") from None
    try:
        ctx = make_field(p, h)
    except ValueError as exc:
        raise MatrixFileError(str(exc)) from None
    if poly != ctx.modulus:
        raise MatrixFileError(f"poly={fields['poly']} is not the modulus {join_ints(ctx.modulus)} of GF({p}^{h})")
    if not 0 <= e < h:
        raise MatrixFileError(f"e={e} outside 0..{h - 1}")
    body = lines[1:]
    if len(body) != k:
        raise MatrixFileError(f"expected {k} matrix rows, found {len(body)}")
    rows = [line.split(" ") for line in body]
    if any(len(r) != n for r in rows):
        bad = next(i for i, r in enumerate(rows) if len(r) != n)
        raise MatrixFileError(f"row {bad} does not have {n} entries")
    try:
        data = np.array(rows, dtype=np.int64).reshape(k, n)
    except ValueError:
        raise MatrixFileError("non-integer matrix entry") from None
    if data.size and (data.min() < 0 or data.max() >= ctx.q):
        raise MatrixFileError(f"matrix entry outside [0, {ctx.q})")
    extras = {key: val for key, val in fields.items() if key not in REQUIRED}
    return MatrixFile(GfMatrix(ctx, data), e, extras)


def read(path: str) -> MatrixFile:
    with open(path, encoding="ascii") as fh:
        return parse(fh.read())


def write(path: str, mf: MatrixFile) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(emit(mf))
