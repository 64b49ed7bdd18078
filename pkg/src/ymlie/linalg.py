"""Exact rational linear algebra: rref, rank and nullspace."""

from __future__ import annotations

import heapq
from fractions import Fraction
from typing import Dict, Iterable, List, Sequence, Tuple

from .symkernel import Scalar, scalar


def _q(x):
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else x


class RationalMatrix:
    """Dense matrix of exact rationals (ints or Fractions in lowest terms)."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries: Sequence[Sequence], cols: int | None = None):
        self.entries: List[List[Scalar]] = [[scalar(v) for v in row] for row in entries]
        self.rows = len(self.entries)
        if cols is None:
            cols = len(self.entries[0]) if self.entries else 0
        self.cols = cols
        if any(len(r) != cols for r in self.entries):
            raise ValueError("ragged matrix")

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RationalMatrix":
        return cls([[0] * cols for _ in range(rows)], cols)

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)], n)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def __eq__(self, other):
        return isinstance(other, RationalMatrix) and self.entries == other.entries \
            and self.cols == other.cols

    def __repr__(self):
        return f"RationalMatrix({self.entries!r})"

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix([list(c) for c in zip(*self.entries)] if self.rows else [],
                              self.rows)

    def __matmul__(self, other):
        if isinstance(other, RationalMatrix):
            cols = list(zip(*other.entries))
            return RationalMatrix([[sum(a * b for a, b in zip(row, c)) for c in cols]
                                   for row in self.entries], other.cols)
        return [scalar(sum(a * b for a, b in zip(row, other))) for row in self.entries]

    def __add__(self, other):
        return RationalMatrix([[a + b for a, b in zip(r, s)]
                               for r, s in zip(self.entries, other.entries)], self.cols)

    def __neg__(self):
        return RationalMatrix([[-a for a in r] for r in self.entries], self.cols)

    def is_zero(self) -> bool:
        return all(v == 0 for r in self.entries for v in r)

    def flat(self) -> List[Scalar]:
        return [v for r in self.entries for v in r]


def rref(m: RationalMatrix) -> Tuple[RationalMatrix, int, List[int]]:
    """Reduced row echelon form by Gauss-Jordan elimination.

    Returns ``(reduced, rank, pivot_columns)``.  The first nonzero entry in a
    column is taken as pivot; exact arithmetic needs no magnitude pivoting.
    """
    a = [[Fraction(v) for v in row] for row in m.entries]
    rows, cols = m.rows, m.cols
    pivots: List[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        p = next((i for i in range(r, rows) if a[i][c]), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        piv = a[r][c]
        if piv != 1:
            a[r] = [v / piv for v in a[r]]
        prow = a[r]
        for i in range(rows):
            if i != r and a[i][c]:
                f = a[i][c]
                row = a[i]
                for j in range(c, cols):
                    if prow[j]:
                        row[j] -= f * prow[j]
        pivots.append(c)
        r += 1
    return RationalMatrix([[_q(v) for v in row] for row in a], cols), r, pivots


def rank(m: RationalMatrix) -> int:
    return rref(m)[1]


def nullspace(m: RationalMatrix) -> List[List[Scalar]]:
    """Basis of ``{v : m v = 0}``, one vector per free column in ascending order."""
    red, rk, pivots = rref(m)
    pivset = set(pivots)
    basis = []
    for free in range(m.cols):
        if free in pivset:
            continue
        v = [0] * m.cols
        v[free] = 1
        for i, pc in enumerate(pivots):
            v[pc] = scalar(-red.entries[i][free])
        basis.append(v)
    return basis


def in_row_space(m: RationalMatrix, v: Sequence) -> bool:
    """True when ``v`` is a rational combination of the rows of ``m``."""
    return rank(RationalMatrix(m.entries + [list(v)], m.cols)) == rank(m)


class SparseEchelon:
    """Incremental exact row reduction over sparse rows ``{column: value}``.

    Rows are reduced against the current pivots as they arrive, so memory
    holds only the independent rows.  Each pivot row has its pivot in its
    smallest column with coefficient 1; :meth:`reduced` back-substitutes to
    the reduced row echelon form of everything added.
    """

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.pivots: Dict[int, Dict[int, Scalar]] = {}
        self._seen: set = set()

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def _reduce(self, row: Dict[int, Scalar]) -> Dict[int, Scalar]:
        pivots = self.pivots
        heap = [c for c in row if c in pivots]
        heapq.heapify(heap)
        while heap:
            c = heapq.heappop(heap)
            f = row.get(c)
            if not f:
                continue
            for j, v in pivots[c].items():
                old = row.get(j, 0)
                nv = old - f * v
                if nv:
                    row[j] = nv
                    if not old and j in pivots:
                        heapq.heappush(heap, j)
                else:
                    del row[j]
        return row

    def add_row(self, row: Dict[int, Scalar]) -> bool:
        """Add a row; returns True when it raised the rank."""
        row = {c: v for c, v in row.items() if v}
        if not row:
            return False
        key = _row_key(row)
        if key in self._seen:
            return False
        self._seen.add(key)
        row = self._reduce(row)
        if not row:
            return False
        pc = min(row)
        f = Fraction(row[pc])
        self.pivots[pc] = {j: _q(v / f) for j, v in row.items()}
        return True

    def reduced(self) -> Dict[int, Dict[int, Scalar]]:
        """Pivot rows with every other pivot column eliminated."""
        done: Dict[int, Dict[int, Scalar]] = {}
        for pc in sorted(self.pivots, reverse=True):
            row = dict(self.pivots[pc])
            for j in sorted(c for c in row if c != pc and c in done):
                f = row.get(j)
                if not f:
                    continue
                for k, v in done[j].items():
                    nv = row.get(k, 0) - f * v
                    if nv:
                        row[k] = _q(nv)
                    else:
                        row.pop(k, None)
            done[pc] = row
        return done

    def nullspace(self) -> List[Dict[int, Scalar]]:
        """Nullspace basis as sparse vectors, one per free column ascending."""
        red = self.reduced()
        free = [c for c in range(self.ncols) if c not in red]
        dependents: Dict[int, List[Tuple[int, Scalar]]] = {c: [] for c in free}
        for pc, row in red.items():
            for j, v in row.items():
                if j != pc:
                    dependents[j].append((pc, v))
        basis = []
        for c in free:
            vec = {c: 1}
            for pc, v in dependents[c]:
                vec[pc] = scalar(-v)
            basis.append(vec)
        return basis


def _row_key(row: Dict[int, Scalar]):
    items = sorted((c, v) for c, v in row.items() if v)
    if not items:
        return ()
    f = Fraction(items[0][1])
    return tuple((c, Fraction(v) / f) for c, v in items)


def dense_rows(rows: Iterable[Dict[int, Scalar]], ncols: int) -> RationalMatrix:
    out = []
    for r in rows:
        v = [0] * ncols
        for c, x in r.items():
            v[c] = x
        out.append(v)
    return RationalMatrix(out, ncols)
