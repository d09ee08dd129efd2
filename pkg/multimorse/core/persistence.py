"""One-parameter persistent homology over F2 by standard column reduction."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, NamedTuple, Optional, Sequence

import numpy as np
import pandas as pd

from ..errors import BoundaryError, NonMonotoneFilterError
from .morse import LefschetzComplex

if TYPE_CHECKING:
    from .foliation import Slice

DIAGRAM_COLUMNS = ["dim", "birth", "death", "lambda", "b1", "b2"]
MONOTONE_SLACK = 1e-12


class PersistencePair(NamedTuple):
    dim: int
    birth: float
    death: float

    def is_positive(self, rel_tol: float = 1e-9, abs_tol: float = 1e-12) -> bool:
        return self.death > self.birth and not math.isclose(self.birth, self.death, rel_tol=rel_tol, abs_tol=abs_tol)


@dataclass
class PersistenceDiagram:
    pairs: list[PersistencePair] = field(default_factory=list)
    slice: Optional["Slice"] = None

    def __len__(self) -> int:
        return len(self.pairs)

    def positive(self) -> list[PersistencePair]:
        """Pairs with positive persistence, zero-length bars dropped."""
        return [p for p in self.pairs if p.is_positive()]

    def essential_counts(self) -> list[int]:
        counts: list[int] = []
        for p in self.pairs:
            if math.isinf(p.death):
                while len(counts) <= p.dim:
                    counts.append(0)
                counts[p.dim] += 1
        return counts

    def to_frame(self) -> pd.DataFrame:
        if self.slice is None:
            lam, b1, b2 = None, None, None
        else:
            lam, (b1, b2) = self.slice.lam, self.slice.b
        rows = [(p.dim, p.birth, p.death, lam, b1, b2) for p in self.pairs]
        df = pd.DataFrame(rows, columns=DIAGRAM_COLUMNS)
        return df.astype({"dim": "int64", "birth": "float64", "death": "float64",
                          "lambda": "float64", "b1": "float64", "b2": "float64"})


@dataclass
class FilteredBoundary:
    """Boundary matrix with rows and columns permuted into filtration order.

    `columns[j]` holds the positions (not cell ids) of the facets of the j-th cell.
    """

    order: list[int]
    values: list[float]
    dims: list[int]
    columns: list[set[int]]


def _filter_values(m: LefschetzComplex, phi) -> np.ndarray:
    values = np.asarray(phi, dtype=float)
    if values.shape != (len(m),):
        raise ValueError(f"filter has shape {values.shape}, complex has {len(m)} cells")
    if not np.isfinite(values).all():
        raise NonMonotoneFilterError("filter has non-finite values")
    return values


def filtration_order(m: LefschetzComplex, phi: Sequence[float]) -> list[int]:
    """Cell ids sorted by (filter value, dimension, key)."""
    values = _filter_values(m, phi)
    for i, faces in enumerate(m.facets):
        for j in faces:
            if values[j] > values[i] + MONOTONE_SLACK:
                raise NonMonotoneFilterError(
                    f"filter decreases from {m.cells[j].key} ({values[j]}) to its cofacet {m.cells[i].key} ({values[i]})"
                )
    return sorted(range(len(m)), key=lambda i: (values[i], m.cells[i].dim, m.cells[i].key))


def filtered_boundary(m: LefschetzComplex, order: Sequence[int], phi: Sequence[float]) -> FilteredBoundary:
    values = _filter_values(m, phi)
    position = {cell_id: p for p, cell_id in enumerate(order)}
    columns = []
    for cell_id in order:
        faces = {position[j] for j in m.facets[cell_id]}
        if any(f > position[cell_id] for f in faces):
            raise BoundaryError(f"facet of {m.cells[cell_id].key} enters after it")
        columns.append(faces)
    return FilteredBoundary(
        order=list(order),
        values=[float(values[i]) for i in order],
        dims=[m.cells[i].dim for i in order],
        columns=columns,
    )


def reduce_and_pair(fb: FilteredBoundary) -> PersistenceDiagram:
    pivot_of: dict[int, int] = {}
    reduced: list[set[int]] = []
    for j, column in enumerate(fb.columns):
        col = set(column)
        while col:
            low = max(col)
            other = pivot_of.get(low)
            if other is None:
                break
            col ^= reduced[other]
        if col:
            pivot_of[max(col)] = j
        reduced.append(col)

    lows = [max(col) for col in reduced if col]
    assert len(lows) == len(set(lows)), "reduced matrix has repeated lowest ones"

    killers = set(pivot_of.values())
    pairs = [PersistencePair(fb.dims[i], fb.values[i], fb.values[j]) for i, j in pivot_of.items()]
    pairs.extend(
        PersistencePair(fb.dims[i], fb.values[i], math.inf)
        for i in range(len(fb.columns))
        if i not in pivot_of and i not in killers
    )
    pairs.sort()
    return PersistenceDiagram(pairs=pairs)


def persistence_diagram(m: LefschetzComplex, phi: Sequence[float]) -> PersistenceDiagram:
    order = filtration_order(m, phi)
    return reduce_and_pair(filtered_boundary(m, order, phi))


def _close(a: float, b: float, rel_tol: float, abs_tol: float) -> bool:
    if math.isinf(a) or math.isinf(b):
        return a == b
    return math.isclose(a, b, rel_tol=rel_tol, abs_tol=abs_tol)


def same_positive_persistence(
    a: PersistenceDiagram, b: PersistenceDiagram, rel_tol: float = 1e-9, abs_tol: float = 1e-12
) -> bool:
    left, right = sorted(a.positive()), sorted(b.positive())
    if len(left) != len(right):
        return False
    return all(
        p.dim == q.dim and _close(p.birth, q.birth, rel_tol, abs_tol) and _close(p.death, q.death, rel_tol, abs_tol)
        for p, q in zip(left, right)
    )
