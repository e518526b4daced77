"""Exact integer linear algebra: Smith normal form and chain-complex homology.

Matrices here are tiny (differentials between handfuls of cells), so the
Smith reduction pivots on minimal-absolute-value entries to keep coefficient
growth tame and nothing fancier is needed.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import CompositionNonzero, DimensionMismatch
from .grading import GradedModule, INTEGRAL, RATIONAL, Torsion


@dataclass(frozen=True)
class IntegerMatrix:
    rows: int
    cols: int
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("negative dimensions")
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise ValueError("entry grid does not match declared dimensions")
        object.__setattr__(
            self, "entries", tuple(tuple(int(x) for x in r) for r in self.entries)
        )

    @staticmethod
    def from_rows(rows: list[list[int]]) -> "IntegerMatrix":
        r = len(rows)
        c = len(rows[0]) if rows else 0
        return IntegerMatrix(r, c, tuple(tuple(row) for row in rows))

    @staticmethod
    def zero(rows: int, cols: int) -> "IntegerMatrix":
        return IntegerMatrix(rows, cols, tuple(tuple(0 for _ in range(cols)) for _ in range(rows)))

    def compose(self, other: "IntegerMatrix") -> "IntegerMatrix":
        """self @ other."""
        if self.cols != other.rows:
            raise DimensionMismatch(f"{self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        prod = [
            [sum(self.entries[i][k] * other.entries[k][j] for k in range(self.cols))
             for j in range(other.cols)]
            for i in range(self.rows)
        ]
        return IntegerMatrix.from_rows(prod) if prod else IntegerMatrix.zero(self.rows, other.cols)

    def is_zero(self) -> bool:
        return all(x == 0 for row in self.entries for x in row)


def smith_normal_form(m: IntegerMatrix) -> list[int]:
    """Invariant factors d_1 | d_2 | ... | d_r of an integer matrix."""
    a = [list(row) for row in m.entries]
    rows, cols = m.rows, m.cols
    invariants = []
    top = 0
    while True:
        pivot = None
        best = None
        for i in range(top, rows):
            for j in range(top, cols):
                v = abs(a[i][j])
                if v and (best is None or v < best):
                    best = v
                    pivot = (i, j)
        if pivot is None:
            break
        pi, pj = pivot
        a[top], a[pi] = a[pi], a[top]
        for row in a:
            row[top], row[pj] = row[pj], row[top]
        # clear the pivot row and column; restart if a smaller remainder shows up
        while True:
            p = a[top][top]
            dirty = False
            for i in range(top + 1, rows):
                q = a[i][top] // p
                if q:
                    for j in range(top, cols):
                        a[i][j] -= q * a[top][j]
                if a[i][top]:
                    a[top], a[i] = a[i], a[top]
                    dirty = True
                    break
            if dirty:
                continue
            for j in range(top + 1, cols):
                q = a[top][j] // p
                if q:
                    for i in range(top, rows):
                        a[i][j] -= q * a[i][top]
                if a[top][j]:
                    for i in range(top, rows):
                        a[i][top], a[i][j] = a[i][j], a[i][top]
                    dirty = True
                    break
            if not dirty:
                break
        # force divisibility d_k | entries of the remaining block
        p = a[top][top]
        fixed = True
        for i in range(top + 1, rows):
            for j in range(top + 1, cols):
                if a[i][j] % p:
                    for jj in range(top, cols):
                        a[top][jj] += a[i][jj]
                    fixed = False
                    break
            if not fixed:
                break
        if not fixed:
            continue
        invariants.append(abs(p))
        top += 1
        if top >= rows or top >= cols:
            break
    return invariants


def rank(m: IntegerMatrix) -> int:
    return len(smith_normal_form(m))


def _torsion_from_invariants(invariants: list[int]) -> tuple[Torsion, ...]:
    tor: dict[tuple[int, int], int] = {}
    for d in invariants:
        if d in (0, 1):
            continue
        rest = d
        p = 2
        while p * p <= rest:
            if rest % p == 0:
                e = 0
                while rest % p == 0:
                    rest //= p
                    e += 1
                tor[(p, e)] = tor.get((p, e), 0) + 1
            p += 1
        if rest > 1:
            tor[(rest, 1)] = tor.get((rest, 1), 0) + 1
    return tuple((p, e, m) for (p, e), m in sorted(tor.items()))


def homology_of_complex(boundaries: list[IntegerMatrix], mode: str = RATIONAL) -> GradedModule:
    """Homology of a finite chain complex C_0 <- C_1 <- ... <- C_n.

    boundaries[i] is the map C_{i+1} -> C_i, so its shape is
    (dim C_i) x (dim C_{i+1}).  Consecutive maps must compose to zero.
    """
    if not boundaries:
        return GradedModule.zero(mode)
    dims = [boundaries[0].rows] + [b.cols for b in boundaries]
    for i in range(len(boundaries) - 1):
        if boundaries[i].cols != boundaries[i + 1].rows:
            raise DimensionMismatch(
                f"boundary {i + 1} has {boundaries[i + 1].rows} rows, expected {boundaries[i].cols}"
            )
        if not boundaries[i].compose(boundaries[i + 1]).is_zero():
            raise CompositionNonzero(f"d_{i + 1} o d_{i + 2} != 0")
    snfs = [smith_normal_form(b) for b in boundaries]
    ranks = [len(s) for s in snfs]
    entries = {}
    n = len(dims) - 1
    for i in range(n + 1):
        out_rank = ranks[i - 1] if i >= 1 else 0     # rank of d_i : C_i -> C_{i-1}
        in_rank = ranks[i] if i < n else 0           # rank of d_{i+1}
        free = dims[i] - out_rank - in_rank
        if free < 0:
            raise DimensionMismatch(f"negative rank at degree {i}")
        torsion: tuple[Torsion, ...] = ()
        if mode == INTEGRAL and i < n:
            torsion = _torsion_from_invariants(snfs[i])
        if mode == RATIONAL:
            torsion = ()
        if free or torsion:
            entries[i] = (free, torsion)
    return GradedModule(entries, mode)
