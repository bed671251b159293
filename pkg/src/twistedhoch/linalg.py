"""Sparse exact linear algebra over a session field.

Matrices are column-indexed sparse maps; all elimination is plain Gaussian
elimination with the pivot row chosen by sparsity (fewest nonzeros).  No
floating point, no modular tricks: sizes here are desk scale.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .fields import check_same_field


@dataclass
class SparseMatrix:
    """A rows x cols matrix; entries maps (row, col) -> nonzero scalar."""

    rows: int
    cols: int
    field: object
    entries: dict = dc_field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for (r, c), v in self.entries.items():
            if not (0 <= r < self.rows and 0 <= c < self.cols):
                raise ValueError(f"entry ({r},{c}) outside {self.rows}x{self.cols}")
            v = self.field.of(v)
            if not self.field.is_zero(v):
                clean[(r, c)] = v
        self.entries = clean

    @classmethod
    def from_rows(cls, rows_data, field):
        rows = len(rows_data)
        cols = len(rows_data[0]) if rows else 0
        entries = {}
        for r, row in enumerate(rows_data):
            for c, v in enumerate(row):
                v = field.of(v)
                if not field.is_zero(v):
                    entries[(r, c)] = v
        return cls(rows, cols, field, entries)

    @classmethod
    def identity(cls, n, field):
        return cls(n, n, field, {(i, i): field.one for i in range(n)})

    def entry(self, r, c):
        return self.entries.get((r, c), self.field.zero)

    def is_zero(self):
        return not self.entries

    def column(self, c):
        f = self.field
        return {r: v for (r, cc), v in self.entries.items() if cc == c and not f.is_zero(v)}

    def matmul(self, other: "SparseMatrix") -> "SparseMatrix":
        check_same_field(self.field, other.field)
        if self.cols != other.rows:
            raise ValueError("shape mismatch in matrix product")
        f = self.field
        by_row = {}
        for (r, k), v in self.entries.items():
            by_row.setdefault(k, []).append((r, v))
        out = {}
        for (k, c), w in other.entries.items():
            for r, v in by_row.get(k, ()):
                key = (r, c)
                acc = f.add(out.get(key, f.zero), f.mul(v, w))
                if f.is_zero(acc):
                    out.pop(key, None)
                else:
                    out[key] = acc
        return SparseMatrix(self.rows, other.cols, f, out)

    def apply(self, vec: dict) -> dict:
        """Apply to a sparse column vector {col index: scalar}."""
        f = self.field
        out = {}
        for (r, c), v in self.entries.items():
            x = vec.get(c)
            if x is None:
                continue
            acc = f.add(out.get(r, f.zero), f.mul(v, x))
            if f.is_zero(acc):
                out.pop(r, None)
            else:
                out[r] = acc
        return out


def _row_reduce(rows, ncols, field):
    """In-place RREF of a list of sparse row dicts.

    Returns the list of pivot columns, one per surviving row, in order.
    Pivot row choice: fewest nonzeros first (ties by row order).
    """
    f = field
    pivots = []
    used = [False] * len(rows)
    for col in range(ncols):
        best = None
        for i, row in enumerate(rows):
            if used[i]:
                continue
            v = row.get(col)
            if v is not None and not f.is_zero(v):
                if best is None or len(row) < len(rows[best]):
                    best = i
        if best is None:
            continue
        used[best] = True
        piv = rows[best]
        inv = f.inv(piv[col])
        for c in list(piv.keys()):
            piv[c] = f.mul(piv[c], inv)
        for i, row in enumerate(rows):
            if i == best:
                continue
            v = row.get(col)
            if v is None or f.is_zero(v):
                continue
            for c, w in piv.items():
                acc = f.sub(row.get(c, f.zero), f.mul(v, w))
                if f.is_zero(acc):
                    row.pop(c, None)
                else:
                    row[c] = acc
        pivots.append((best, col))
    pivots.sort(key=lambda t: t[1])
    return pivots


def rank_kernel_image(m: SparseMatrix):
    """Rank, a kernel basis, and an image basis, all exact.

    Kernel vectors are sparse dicts {col: scalar}; the image basis consists
    of the original matrix columns at pivot positions (sparse {row: scalar}),
    so its vectors are literally in the column span.
    """
    f = m.field
    rows = [dict() for _ in range(m.rows)]
    for (r, c), v in m.entries.items():
        rows[r][c] = v
    pivots = _row_reduce(rows, m.cols, f)
    pivot_cols = [c for (_, c) in pivots]
    rank = len(pivot_cols)

    pivot_set = set(pivot_cols)
    kernel = []
    row_of_pivot = {c: r for (r, c) in pivots}
    for c in range(m.cols):
        if c in pivot_set:
            continue
        vec = {c: f.one}
        for pc in pivot_cols:
            v = rows[row_of_pivot[pc]].get(c)
            if v is not None and not f.is_zero(v):
                vec[pc] = f.neg(v)
        kernel.append(vec)

    image = [m.column(c) for c in pivot_cols]
    return rank, kernel, image


class SpanTracker:
    """Incremental row echelon over a fixed coordinate set.

    Feed vectors (sparse dicts); each is reduced against the current span and
    either absorbed (extends the span) or reported dependent.
    """

    def __init__(self, field):
        self.field = field
        self.rows = []  # list of (pivot key, normalized sparse dict)

    def _reduce(self, vec):
        f = self.field
        v = dict(vec)
        for key, row in self.rows:
            c = v.get(key)
            if c is None or f.is_zero(c):
                continue
            for k, w in row.items():
                acc = f.sub(v.get(k, f.zero), f.mul(c, w))
                if f.is_zero(acc):
                    v.pop(k, None)
                else:
                    v[k] = acc
        return {k: c for k, c in v.items() if not f.is_zero(c)}

    def add(self, vec) -> bool:
        """Insert vec; True if it enlarged the span."""
        f = self.field
        v = self._reduce(vec)
        if not v:
            return False
        key = min(v.keys())
        inv = f.inv(v[key])
        v = {k: f.mul(c, inv) for k, c in v.items()}
        self.rows.append((key, v))
        self.rows.sort(key=lambda t: t[0])
        return True

    def contains(self, vec) -> bool:
        return not self._reduce(vec)

    @property
    def dim(self):
        return len(self.rows)


def extend_basis(base_vectors, candidates, field):
    """Indices of candidates that extend span(base_vectors), greedily."""
    tracker = SpanTracker(field)
    for v in base_vectors:
        tracker.add(v)
    chosen = []
    for i, v in enumerate(candidates):
        if tracker.add(v):
            chosen.append(i)
    return chosen
