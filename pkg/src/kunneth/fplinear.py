"""Exact linear algebra over the prime field F_p.

Matrices are stored as sorted (row, col, value) triplets with values in
[1, p-1].  Row reduction works on rows held as ``{col: value}`` dicts, which
behaves well for both the very sparse Koszul differentials and the denser
systems produced by the lifting code.  Pivots are always taken left to right,
so every basis returned here is reproducible.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

from .errors import CompositionNotZero, KunnethError

Vector = tuple  # tuple of ints in [0, p)


def _check_prime(p: int) -> None:
    if p < 2 or any(p % q == 0 for q in range(2, int(p**0.5) + 1)):
        raise ValueError(f"{p} is not prime")


@dataclass(frozen=True)
class FpMatrix:
    p: int
    rows: int
    cols: int
    entries: tuple = ()

    def __post_init__(self):
        _check_prime(self.p)
        if self.rows < 0 or self.cols < 0:
            raise ValueError("negative shape")
        cleaned = {}
        for r, c, v in self.entries:
            if not (0 <= r < self.rows and 0 <= c < self.cols):
                raise IndexError(f"entry ({r}, {c}) outside {self.rows}x{self.cols}")
            if (r, c) in cleaned:
                raise ValueError(f"duplicate entry ({r}, {c})")
            v %= self.p
            cleaned[(r, c)] = v
        object.__setattr__(
            self, "entries",
            tuple(sorted((r, c, v) for (r, c), v in cleaned.items() if v)))

    # -- constructors -----------------------------------------------------
    @classmethod
    def zero(cls, p: int, rows: int, cols: int) -> "FpMatrix":
        return cls(p, rows, cols)

    @classmethod
    def identity(cls, p: int, n: int) -> "FpMatrix":
        return cls(p, n, n, tuple((i, i, 1) for i in range(n)))

    @classmethod
    def from_dense(cls, p: int, rows: Sequence[Sequence[int]], cols: int | None = None) -> "FpMatrix":
        nrows = len(rows)
        ncols = len(rows[0]) if rows else (cols or 0)
        entries = tuple((i, j, v) for i, row in enumerate(rows)
                        for j, v in enumerate(row) if v % p)
        return cls(p, nrows, ncols, entries)

    @classmethod
    def from_columns(cls, p: int, rows: int, columns: Sequence[Sequence[int]]) -> "FpMatrix":
        entries = tuple((i, j, v) for j, col in enumerate(columns)
                        for i, v in enumerate(col) if v % p)
        return cls(p, rows, len(columns), entries)

    @classmethod
    def from_dict(cls, p: int, rows: int, cols: int, data: dict) -> "FpMatrix":
        return cls(p, rows, cols, tuple((r, c, v) for (r, c), v in data.items()))

    # -- views ------------------------------------------------------------
    def to_dense(self) -> list[list[int]]:
        out = [[0] * self.cols for _ in range(self.rows)]
        for r, c, v in self.entries:
            out[r][c] = v
        return out

    def as_dict(self) -> dict:
        return {(r, c): v for r, c, v in self.entries}

    def row_dicts(self) -> list[dict]:
        out = [dict() for _ in range(self.rows)]
        for r, c, v in self.entries:
            out[r][c] = v
        return out

    def column(self, j: int) -> Vector:
        col = [0] * self.rows
        for r, c, v in self.entries:
            if c == j:
                col[r] = v
        return tuple(col)

    def columns(self) -> list[Vector]:
        cols = [[0] * self.rows for _ in range(self.cols)]
        for r, c, v in self.entries:
            cols[c][r] = v
        return [tuple(c) for c in cols]

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def density(self) -> float:
        size = self.rows * self.cols
        return len(self.entries) / size if size else 0.0

    def is_zero(self) -> bool:
        return not self.entries

    # -- arithmetic -------------------------------------------------------
    def _same_p(self, other: "FpMatrix") -> None:
        if other.p != self.p:
            raise KunnethError(f"cannot combine matrices over F_{self.p} and F_{other.p}")

    def __matmul__(self, other: "FpMatrix") -> "FpMatrix":
        self._same_p(other)
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        by_row: dict[int, list] = {}
        for r, c, v in other.entries:
            by_row.setdefault(r, []).append((c, v))
        acc: dict = {}
        p = self.p
        for r, k, v in self.entries:
            for c, w in by_row.get(k, ()):
                acc[(r, c)] = (acc.get((r, c), 0) + v * w) % p
        return FpMatrix.from_dict(p, self.rows, other.cols, acc)

    def __add__(self, other: "FpMatrix") -> "FpMatrix":
        self._same_p(other)
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        acc = self.as_dict()
        for r, c, v in other.entries:
            acc[(r, c)] = (acc.get((r, c), 0) + v) % self.p
        return FpMatrix.from_dict(self.p, self.rows, self.cols, acc)

    def __neg__(self) -> "FpMatrix":
        return FpMatrix(self.p, self.rows, self.cols,
                        tuple((r, c, -v) for r, c, v in self.entries))

    def __sub__(self, other: "FpMatrix") -> "FpMatrix":
        return self + (-other)

    def transpose(self) -> "FpMatrix":
        return FpMatrix(self.p, self.cols, self.rows,
                        tuple((c, r, v) for r, c, v in self.entries))

    def apply(self, vec: Sequence[int]) -> Vector:
        if len(vec) != self.cols:
            raise ValueError("vector length does not match column count")
        out = [0] * self.rows
        for r, c, v in self.entries:
            if vec[c]:
                out[r] = (out[r] + v * vec[c]) % self.p
        return tuple(out)


class RowReduction(NamedTuple):
    rank: int
    pivot_columns: tuple
    reduced: FpMatrix


def _reduce_rows(p: int, rows: list[dict], ncols: int) -> tuple[list[dict], list[int]]:
    """Full Gauss-Jordan elimination on dict rows.  Returns (pivot rows, pivots)."""
    rows = [dict(r) for r in rows if r]
    pivot_rows: list[dict] = []
    pivots: list[int] = []
    for col in range(ncols):
        idx = next((i for i, r in enumerate(rows) if r.get(col)), None)
        if idx is None:
            continue
        prow = rows.pop(idx)
        inv = pow(prow[col], -1, p)
        prow = {c: v * inv % p for c, v in prow.items()}
        for others in (rows, pivot_rows):
            for i, r in enumerate(others):
                f = r.get(col)
                if f:
                    new = dict(r)
                    for c, v in prow.items():
                        w = (new.get(c, 0) - f * v) % p
                        if w:
                            new[c] = w
                        else:
                            new.pop(c, None)
                    others[i] = new
        rows = [r for r in rows if r]
        pivot_rows.append(prow)
        pivots.append(col)
        if not rows:
            break
    return pivot_rows, pivots


def rref(m: FpMatrix) -> RowReduction:
    pivot_rows, pivots = _reduce_rows(m.p, m.row_dicts(), m.cols)
    entries = tuple((i, c, v) for i, r in enumerate(pivot_rows) for c, v in r.items())
    return RowReduction(len(pivots), tuple(pivots), FpMatrix(m.p, m.rows, m.cols, entries))


def rank(m: FpMatrix) -> int:
    return rref(m).rank


def kernel_basis(m: FpMatrix) -> list[Vector]:
    """Basis of {v : m v = 0}, one vector per free column (left to right)."""
    pivot_rows, pivots = _reduce_rows(m.p, m.row_dicts(), m.cols)
    pivot_set = set(pivots)
    basis = []
    for free in range(m.cols):
        if free in pivot_set:
            continue
        v = [0] * m.cols
        v[free] = 1
        for prow, pc in zip(pivot_rows, pivots):
            coeff = prow.get(free)
            if coeff:
                v[pc] = -coeff % m.p
        basis.append(tuple(v))
    return basis


def independent_subset(p: int, vectors: Iterable[Sequence[int]]) -> list[Vector]:
    """Greedy left-to-right choice of a maximal independent subfamily."""
    ech = Echelon(p)
    return [tuple(v) for v in vectors if ech.add(v)]


def image_basis(m: FpMatrix) -> list[Vector]:
    return independent_subset(m.p, m.columns())


def solve(m: FpMatrix, b: Sequence[int]) -> Vector | None:
    """A solution x of m x = b with all free variables zero, or None."""
    if len(b) != m.rows:
        raise ValueError("right-hand side has wrong length")
    p = m.p
    rows = m.row_dicts()
    for i, bi in enumerate(b):
        if bi % p:
            rows[i][m.cols] = bi % p
    pivot_rows, pivots = _reduce_rows(p, rows, m.cols + 1)
    if m.cols in pivots:
        return None
    x = [0] * m.cols
    for prow, pc in zip(pivot_rows, pivots):
        x[pc] = prow.get(m.cols, 0)
    return tuple(x)


class Echelon:
    """Incrementally maintained echelon basis, used for span membership tests."""

    def __init__(self, p: int):
        self.p = p
        self._rows: dict[int, dict] = {}  # pivot column -> row with leading 1

    def __len__(self):
        return len(self._rows)

    def reduce(self, v: Sequence[int]) -> dict:
        p = self.p
        r = {i: x % p for i, x in enumerate(v) if x % p}
        changed = True
        while changed and r:
            changed = False
            for col in sorted(r):
                prow = self._rows.get(col)
                if prow is None:
                    continue
                f = r[col]
                for c, w in prow.items():
                    nv = (r.get(c, 0) - f * w) % p
                    if nv:
                        r[c] = nv
                    else:
                        r.pop(c, None)
                changed = True
                break
        return r

    def add(self, v: Sequence[int]) -> bool:
        r = self.reduce(v)
        if not r:
            return False
        lead = min(r)
        inv = pow(r[lead], -1, self.p)
        self._rows[lead] = {c: w * inv % self.p for c, w in r.items()}
        return True

    def contains(self, v: Sequence[int]) -> bool:
        return not self.reduce(v)


@dataclass(frozen=True)
class SubquotientBasis:
    p: int
    ambient_dim: int
    cycle_basis: tuple
    boundary_basis: tuple
    homology_reps: tuple
    _cycle_matrix: FpMatrix | None = field(default=None, compare=False, repr=False)

    @property
    def dim(self) -> int:
        return len(self.homology_reps)

    def coordinates(self, v: Sequence[int]) -> Vector:
        """Coefficients of the class of the cycle ``v`` on ``homology_reps``."""
        cols = list(self.homology_reps) + list(self.boundary_basis)
        m = FpMatrix.from_columns(self.p, self.ambient_dim, cols)
        x = solve(m, v)
        if x is None:
            raise KunnethError("vector is not a cycle")
        return x[:len(self.homology_reps)]

    def is_boundary(self, v: Sequence[int]) -> bool:
        return not any(self.coordinates(v))


def homology(d_in: FpMatrix, d_out: FpMatrix) -> SubquotientBasis:
    """Homology ker(d_out) / im(d_in) at the middle term of C' -> C -> C''."""
    if d_in.p != d_out.p:
        raise KunnethError("differentials over different primes")
    if d_in.rows != d_out.cols:
        raise ValueError(f"d_in lands in dimension {d_in.rows}, d_out starts at {d_out.cols}")
    if not (d_out @ d_in).is_zero():
        raise CompositionNotZero("d_out . d_in != 0")
    p = d_in.p
    cycles = kernel_basis(d_out)
    boundaries = image_basis(d_in)
    ech = Echelon(p)
    for b in boundaries:
        ech.add(b)
    reps = [c for c in cycles if ech.add(c)]
    return SubquotientBasis(p, d_in.rows, tuple(cycles), tuple(boundaries), tuple(reps))
