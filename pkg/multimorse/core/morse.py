"""Lefschetz complexes over F2, Morse complex extraction and homology."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np
from dagster import get_dagster_logger
from joblib import Parallel, delayed

from ..errors import BoundaryError, GradientCycleError
from .complex import Multigrade, MultiFiltration, Simplex, SimplicialComplex, facets, precedes
from .gradient import DiscreteGradient

log = get_dagster_logger(__name__)


@dataclass(frozen=True)
class Cell:
    key: Simplex
    dim: int
    grade: Multigrade


def _canonical(cell: Cell):
    return (cell.dim, cell.grade, cell.key)


@dataclass
class LefschetzComplex:
    """Cells in canonical order (dimension, grade, key); `facets[i]` lists the
    ids j with κ(i, j) = 1."""

    cells: list[Cell]
    facets: list[tuple[int, ...]]
    _ids: dict = field(default=None, repr=False)

    def __post_init__(self):
        if self._ids is None:
            self._ids = {cell.key: i for i, cell in enumerate(self.cells)}

    @classmethod
    def from_cells(cls, cells: Iterable[Cell], incidences: Mapping[Simplex, Iterable[Simplex]]) -> "LefschetzComplex":
        ordered = sorted(cells, key=_canonical)
        ids = {cell.key: i for i, cell in enumerate(ordered)}
        boundary = [tuple(sorted(ids[f] for f in incidences.get(cell.key, ()))) for cell in ordered]
        return cls(cells=ordered, facets=boundary, _ids=ids)

    def __len__(self) -> int:
        return len(self.cells)

    @property
    def dim(self) -> int:
        return max((cell.dim for cell in self.cells), default=-1)

    @property
    def n_params(self) -> int:
        return len(self.cells[0].grade) if self.cells else 0

    def id_of(self, key: Simplex) -> int:
        return self._ids[key]

    def cells_of_dim(self, k: int) -> list[int]:
        return [i for i, cell in enumerate(self.cells) if cell.dim == k]

    def grade_array(self) -> np.ndarray:
        if not self.cells:
            return np.zeros((0, 0))
        return np.asarray([cell.grade for cell in self.cells], dtype=float)

    def check_boundary(self) -> None:
        """Raises BoundaryError unless ∂∘∂ = 0 and κ only drops dimension by one."""
        for i, cell in enumerate(self.cells):
            acc: set[int] = set()
            for j in self.facets[i]:
                if self.cells[j].dim != cell.dim - 1:
                    raise BoundaryError(f"incidence {cell.key} -> {self.cells[j].key} does not drop dimension by one")
                acc.symmetric_difference_update(self.facets[j])
            if acc:
                raise BoundaryError(f"boundary of boundary of {cell.key} is nonzero")

    def grades_monotone(self) -> bool:
        return all(
            precedes(self.cells[j].grade, cell.grade)
            for i, cell in enumerate(self.cells)
            for j in self.facets[i]
        )


@dataclass
class F2Matrix:
    data: np.ndarray
    rows: list[int]
    cols: list[int]

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape


def simplicial_lefschetz(c: SimplicialComplex, mf: MultiFiltration) -> LefschetzComplex:
    cells = [Cell(key=s, dim=len(s) - 1, grade=mf.grade(s)) for s in c]
    return LefschetzComplex.from_cells(cells, {s: facets(s) for s in c})


def _separatrix_targets(start: Simplex, g: DiscreteGradient, memo: dict) -> frozenset:
    """Critical cells reached an odd number of times by V-paths leaving `start`."""
    if start in memo:
        return memo[start]

    def successors(node: Simplex) -> list[Simplex]:
        if g.is_critical(node):
            return []
        up = g.upper(node)
        if up is None:
            return []
        return [f for f in facets(up) if f != node]

    on_path = {start}
    stack = [[start, successors(start), 0]]
    while stack:
        frame = stack[-1]
        node, succ, i = frame
        if i < len(succ):
            frame[2] += 1
            nxt = succ[i]
            if nxt in memo:
                continue
            if nxt in on_path:
                raise GradientCycleError(f"closed V-path through {nxt}; the gradient was not verified")
            on_path.add(nxt)
            stack.append([nxt, successors(nxt), 0])
            continue

        if g.is_critical(node):
            memo[node] = frozenset((node,))
        else:
            acc: set[Simplex] = set()
            for s in succ:
                acc.symmetric_difference_update(memo[s])
            memo[node] = frozenset(acc)
        on_path.discard(node)
        stack.pop()
    return memo[start]


def _incidences_for_dim(g: DiscreteGradient, critical_cells: Sequence[Simplex]) -> dict[Simplex, list[Simplex]]:
    memo: dict = {}
    incidences = {}
    for tau in critical_cells:
        acc: set[Simplex] = set()
        for face in facets(tau):
            acc.symmetric_difference_update(_separatrix_targets(face, g, memo))
        incidences[tau] = sorted(acc)
    return incidences


def extract_morse_complex(
    g: DiscreteGradient, c: SimplicialComplex, mf: MultiFiltration, workers: int = 1
) -> LefschetzComplex:
    by_dim: dict[int, list[Simplex]] = {}
    for s in g.critical_list():
        by_dim.setdefault(len(s) - 1, []).append(s)
    upper_dims = [k for k in sorted(by_dim) if k > 0]

    if workers > 1 and len(upper_dims) > 1:
        parts = Parallel(n_jobs=workers, prefer="threads")(
            delayed(_incidences_for_dim)(g, by_dim[k]) for k in upper_dims
        )
    else:
        parts = [_incidences_for_dim(g, by_dim[k]) for k in upper_dims]

    incidences: dict[Simplex, list[Simplex]] = {}
    for part in parts:
        incidences.update(part)

    cells = [Cell(key=s, dim=len(s) - 1, grade=mf.grade(s)) for s in g.criticals]
    morse = LefschetzComplex.from_cells(cells, incidences)
    morse.check_boundary()
    log.info(f"Morse complex: {len(morse)} cells, {sum(len(f) for f in morse.facets)} incidences")
    return morse


def boundary_matrix(m: LefschetzComplex, k: int) -> F2Matrix:
    """Rows are the (k-1)-cells, columns the k-cells, both in canonical order."""
    rows = m.cells_of_dim(k - 1)
    cols = m.cells_of_dim(k)
    position = {cell_id: r for r, cell_id in enumerate(rows)}
    data = np.zeros((len(rows), len(cols)), dtype=np.uint8)
    for c_pos, cell_id in enumerate(cols):
        for face in m.facets[cell_id]:
            data[position[face], c_pos] = 1
    return F2Matrix(data=data, rows=rows, cols=cols)


def _column_rank(columns: Iterable[Iterable[int]]) -> int:
    pivots: dict[int, set[int]] = {}
    rank = 0
    for column in columns:
        col = set(column)
        while col:
            low = max(col)
            if low not in pivots:
                pivots[low] = col
                rank += 1
                break
            col ^= pivots[low]
    return rank


def betti_numbers_f2(m: LefschetzComplex, top_dim: int | None = None) -> list[int]:
    m.check_boundary()
    top = m.dim if top_dim is None else max(top_dim, m.dim)
    counts = [len(m.cells_of_dim(k)) for k in range(top + 2)]
    ranks = [0] + [_column_rank(m.facets[i] for i in m.cells_of_dim(k)) for k in range(1, top + 2)]
    return [counts[k] - ranks[k] - ranks[k + 1] for k in range(top + 1)]


def _gf2_rref(matrix) -> tuple[np.ndarray, list[int]]:
    reduced = (np.asarray(matrix, dtype=np.uint8) % 2).copy()
    n_rows, n_cols = reduced.shape
    pivot_cols: list[int] = []
    row = 0
    for col in range(n_cols):
        if row == n_rows:
            break
        hits = np.nonzero(reduced[row:, col])[0]
        if hits.size == 0:
            continue
        found = row + int(hits[0])
        if found != row:
            reduced[[row, found]] = reduced[[found, row]]
        mask = reduced[:, col].astype(bool)
        mask[row] = False
        reduced[mask] ^= reduced[row]
        pivot_cols.append(col)
        row += 1
    return reduced, pivot_cols


def gf2_rank(matrix) -> int:
    matrix = np.asarray(matrix)
    if matrix.size == 0:
        return 0
    return len(_gf2_rref(matrix)[1])


def gf2_nullspace(matrix) -> np.ndarray:
    """Basis of the kernel as columns of an (n_cols x nullity) 0/1 matrix."""
    matrix = np.asarray(matrix, dtype=np.uint8)
    n_cols = matrix.shape[1]
    if matrix.shape[0] == 0:
        return np.eye(n_cols, dtype=np.uint8)
    reduced, pivot_cols = _gf2_rref(matrix)
    free = [j for j in range(n_cols) if j not in set(pivot_cols)]
    basis = np.zeros((n_cols, len(free)), dtype=np.uint8)
    for b, j in enumerate(free):
        basis[j, b] = 1
        for r, p in enumerate(pivot_cols):
            basis[p, b] = reduced[r, j]
    return basis


def format_morse_dump(m: LefschetzComplex) -> list[str]:
    lines = []
    for i, cell in enumerate(m.cells):
        grade = ",".join(repr(float(x)) for x in cell.grade)
        lines.append(f"CELL {i} dim={cell.dim} grade={grade}")
    for i, faces in enumerate(m.facets):
        lines.extend(f"INC {i} {j}" for j in faces)
    return lines
