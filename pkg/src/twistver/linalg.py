"""Exact dense linear algebra over a Field.

Matrices are small (a few hundred rows/columns at most) and dense; entries
are integer element encodings stored in a numpy array.  Elimination uses a
first-nonzero pivot scan, which is fully general over an exact field, and
all results are deterministic.

The subset-independence workhorse is IncrementalElim: a stack of
column-reduced copies of a fixed matrix that lets a subset-enumeration
loop push/pop one column at a time and test span membership of every
remaining column with a single vectorized scan.  This is the
performance-critical path; everything else favours clarity.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .ff import Field


@dataclass
class Matrix:
    field: Field
    data: np.ndarray  # 2D, integer element encodings

    def __post_init__(self):
        self.data = np.asarray(self.data, dtype=np.int64)
        if self.data.ndim != 2:
            raise ValueError("matrix data must be 2-dimensional")
        if self.data.size and (self.data.min() < 0 or self.data.max() >= self.field.order):
            raise ValueError("matrix entries out of range for the field")

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @classmethod
    def from_rows(cls, field: Field, rows: Iterable[Sequence[int]]) -> "Matrix":
        return cls(field, np.array([list(r) for r in rows], dtype=np.int64))

    @classmethod
    def identity(cls, field: Field, n: int) -> "Matrix":
        return cls(field, np.eye(n, dtype=np.int64))

    @classmethod
    def zeros(cls, field: Field, rows: int, cols: int) -> "Matrix":
        return cls(field, np.zeros((rows, cols), dtype=np.int64))

    def transpose(self) -> "Matrix":
        return Matrix(self.field, self.data.T.copy())

    def submatrix_cols(self, cols: Sequence[int]) -> "Matrix":
        return Matrix(self.field, self.data[:, list(cols)].copy())

    # -- interchange ---------------------------------------------------------

    def to_json(self) -> dict:
        f = self.field
        return {"p": f.p, "e": f.e, "t": f.t, "rows": self.rows,
                "cols": self.cols, "data": self.data.tolist()}

    @classmethod
    def from_json(cls, obj: dict) -> "Matrix":
        f = Field(obj["p"], obj["e"] * obj["t"], e=obj["e"])
        data = np.array(obj["data"], dtype=np.int64)
        if data.shape != (obj["rows"], obj["cols"]):
            raise ValueError("matrix shape does not match declared rows/cols")
        return cls(f, data)

    def write_json(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_json(), fh)

    @classmethod
    def read_json(cls, path) -> "Matrix":
        with open(path, encoding="utf-8") as fh:
            return cls.from_json(json.load(fh))

    def write_csv(self, path) -> None:
        # entries are the canonical integer encodings sum(c_i * p^i)
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh)
            for row in self.data.tolist():
                w.writerow(row)

    @classmethod
    def read_csv(cls, field: Field, path) -> "Matrix":
        with open(path, newline="", encoding="utf-8") as fh:
            data = [[int(x) for x in row] for row in csv.reader(fh) if row]
        return cls(field, np.array(data, dtype=np.int64))


# ---------------------------------------------------------------------------
# Elimination
# ---------------------------------------------------------------------------

def _row_echelon(field: Field, a: np.ndarray) -> list[tuple[int, int]]:
    """In-place reduced row echelon; returns [(pivot_row, pivot_col), ...].

    Deterministic: columns scanned left to right, pivot is the first row
    with a nonzero entry at or below the current one.
    """
    t = field.tables
    rows, cols = a.shape
    pivots: list[tuple[int, int]] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        pr = r + int(nz[0])
        if pr != r:
            a[[r, pr]] = a[[pr, r]]
        piv = int(a[r, c])
        if t is not None:
            if piv != 1:
                a[r] = t.div[a[r], piv]
            nzrows = np.nonzero(a[:, c])[0]
            for i in nzrows.tolist():
                if i != r:
                    a[i] = t.sub[a[i], t.mul[int(a[i, c])][a[r]]]
        else:
            inv = field.inv(piv)
            if piv != 1:
                a[r] = [field.mul(inv, int(x)) for x in a[r]]
            for i in range(rows):
                if i != r and a[i, c]:
                    f = int(a[i, c])
                    a[i] = [field.sub(int(x), field.mul(f, int(y)))
                            for x, y in zip(a[i], a[r])]
        pivots.append((r, c))
        r += 1
    return pivots


def rank(m: Matrix) -> int:
    a = m.data.copy()
    return len(_row_echelon(m.field, a))


def kernel_basis(m: Matrix) -> list[np.ndarray]:
    """Basis of {v : M v = 0}, in reduced echelon form.

    One basis vector per free column, free columns ascending; vector k has
    entry 1 at its free column and the negated reduced coefficients at the
    pivot columns.
    """
    f = m.field
    a = m.data.copy()
    pivots = _row_echelon(f, a)
    pivot_cols = [c for _, c in pivots]
    free_cols = [c for c in range(m.cols) if c not in pivot_cols]
    basis = []
    for fc in free_cols:
        v = np.zeros(m.cols, dtype=np.int64)
        v[fc] = 1
        for r, c in pivots:
            v[c] = f.neg(int(a[r, fc]))
        basis.append(v)
    return basis


def mat_vec(m: Matrix, v: Sequence[int]) -> list[int]:
    f = m.field
    out = []
    for i in range(m.rows):
        acc = 0
        for j in range(m.cols):
            acc = f.add(acc, f.mul(int(m.data[i, j]), int(v[j])))
        out.append(acc)
    return out


def is_independent(m: Matrix, column_subset: Sequence[int]) -> bool:
    """True iff the selected columns have rank equal to the subset size."""
    cols = list(column_subset)
    if len(set(cols)) != len(cols):
        raise ValueError("duplicate column indices")
    for c in cols:
        if not 0 <= c < m.cols:
            raise ValueError(f"column index {c} out of range")
    if m.field.tables is not None:
        elim = IncrementalElim(m.field, m.data)
        for c in sorted(cols):
            if not elim.push(c):
                return False
        return True
    return rank(m.submatrix_cols(cols)) == len(cols)


def det(m: Matrix) -> int:
    """Determinant of a square matrix by fraction-free-style elimination."""
    f = m.field
    if m.rows != m.cols:
        raise ValueError("determinant of a non-square matrix")
    a = m.data.copy()
    n = m.rows
    sign_flips = 0
    acc = 1
    for c in range(n):
        nz = np.nonzero(a[c:, c])[0]
        if nz.size == 0:
            return 0
        pr = c + int(nz[0])
        if pr != c:
            a[[c, pr]] = a[[pr, c]]
            sign_flips += 1
        piv = int(a[c, c])
        acc = f.mul(acc, piv)
        inv = f.inv(piv)
        for i in range(c + 1, n):
            if a[i, c]:
                fac = f.mul(int(a[i, c]), inv)
                a[i] = [f.sub(int(x), f.mul(fac, int(y)))
                        for x, y in zip(a[i], a[c])]
    if sign_flips % 2 and f.p != 2:
        acc = f.neg(acc)
    return acc


class IncrementalElim:
    """Incremental column elimination against a fixed matrix.

    The matrix columns are candidate vectors; push(c) adds column c to the
    current independent set (or reports that it lies in the current span),
    pop() backtracks, and split_extensions() classifies every column to
    the right of the last push as in-span / independent in one vectorized
    scan.  Each stack level keeps its own reduced copy, so pop is O(1) and
    a worker owns its state exclusively.
    """

    def __init__(self, field: Field, columns: np.ndarray):
        t = field.tables
        if t is None:
            raise ValueError(
                "IncrementalElim requires pairwise-table mode "
                f"(field order <= {1 << 10})")
        self._sub = t.sub
        self._div = t.div
        self._mul = t.mul
        base = np.ascontiguousarray(columns, dtype=t.sub.dtype)
        self.ncols = base.shape[1]
        self._stack: list[tuple[int, np.ndarray]] = [(-1, base)]

    @property
    def depth(self) -> int:
        return len(self._stack) - 1

    @property
    def last_col(self) -> int:
        return self._stack[-1][0]

    def reset(self) -> None:
        del self._stack[1:]

    def push(self, c: int) -> bool:
        """Add column c; False (state unchanged) if it is in the span."""
        _, r = self._stack[-1]
        col = r[:, c]
        nz = np.nonzero(col)[0]
        if nz.size == 0:
            return False
        prow = int(nz[0])
        tail = r[:, c + 1:]
        coef = self._div[tail[prow], int(col[prow])]
        # columns left of c are never revisited (ascending pushes), so the
        # child only carries the reduced tail
        child = np.empty_like(r)
        child[:, c + 1:] = self._sub[tail, self._mul[col[:, None], coef[None, :]]]
        self._stack.append((c, child))
        return True

    def pop(self) -> None:
        if len(self._stack) == 1:
            raise IndexError("pop from empty elimination stack")
        self._stack.pop()

    def split_extensions(self) -> tuple[np.ndarray, np.ndarray]:
        """(in_span, independent) column indices right of the last push."""
        c, r = self._stack[-1]
        tail = r[:, c + 1:]
        alive = tail.any(axis=0)
        idx = np.arange(c + 1, self.ncols)
        return idx[~alive], idx[alive]

    def pair_groups(self) -> tuple[np.ndarray, list[np.ndarray]]:
        """Classify all 2-extensions of the current independent set at once.

        {pushed} + {c, c'} is dependent exactly when the reduced columns
        c and c' are proportional, i.e. when their canonical forms (scaled
        so the first nonzero entry is 1) coincide.  Returns
        (in_span_columns, groups): columns right of the last push that are
        already in the span, and the maximal groups (>= 2, ascending) of
        mutually proportional remaining columns.
        """
        c, r = self._stack[-1]
        tail = r[:, c + 1:]
        width = tail.shape[1]
        if width < 2:
            dead = ~tail.any(axis=0)
            return np.nonzero(dead)[0] + (c + 1), []
        nz = tail != 0
        dead = ~nz.any(axis=0)
        if dead.any():
            return np.nonzero(dead)[0] + (c + 1), []
        lead = tail[nz.argmax(axis=0), np.arange(width)]
        canon = np.ascontiguousarray(self._div[tail, lead[None, :]].T)
        order = np.lexsort(canon.T[::-1])
        srt = canon[order]
        change = np.nonzero(np.any(srt[1:] != srt[:-1], axis=1))[0]
        starts = np.concatenate(([0], change + 1, [width]))
        groups = []
        for i in range(starts.size - 1):
            a, b = starts[i], starts[i + 1]
            if b - a >= 2:
                groups.append(np.sort(order[a:b]) + (c + 1))
        groups.sort(key=lambda g: int(g[0]))
        return np.empty(0, dtype=np.int64), groups

    def in_span(self, c: int) -> bool:
        _, r = self._stack[-1]
        return not r[:, c].any()
