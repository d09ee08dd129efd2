"""Synthetic meshes and the compression / scaling experiments."""
from __future__ import annotations

import time
import tracemalloc
from typing import Iterable, Mapping, Sequence

import numpy as np
import pandas as pd
from dagster import get_dagster_logger

from .core.complex import MultiFiltration, SimplicialComplex, build_complex, extend_filtration
from .core.gradient import compute_discrete_gradient
from .core.oracle import MATCHING_GUARD, build_global_indexing, matching_global

log = get_dagster_logger(__name__)

COMPRESSION_COLUMNS = ["n_u", "n_v", "vertices", "cells", "criticals", "compression", "grades_original", "grades_reduced"]
SCALING_COLUMNS = ["n_u", "n_v", "cells", "local_seconds", "local_peak_mb", "matching_seconds", "matching_peak_mb"]


class PeakMemory:
    """Peak traced heap, in MB, allocated inside the block.

    Only the calling process is traced; work done in joblib worker processes
    is not counted. `mb` stays NaN when disabled.
    """

    def __init__(self, enabled: bool = True):
        self.enabled = enabled
        self.mb = float("nan")
        self._owner = False

    def __enter__(self) -> "PeakMemory":
        if self.enabled:
            self._owner = not tracemalloc.is_tracing()
            if self._owner:
                tracemalloc.start()
            tracemalloc.reset_peak()
        return self

    def __exit__(self, *exc) -> None:
        if self.enabled:
            self.mb = tracemalloc.get_traced_memory()[1] / 2**20
            if self._owner:
                tracemalloc.stop()


def torus_mesh(
    n_u: int,
    n_v: int,
    major: float = 3.0,
    minor: float = 1.0,
    tilt: float = 0.35,
    jitter: float = 1e-7,
    seed: int = 0,
) -> tuple[np.ndarray, list[tuple[int, int, int]]]:
    """Triangulated torus, rotated about the x axis by `tilt` radians.

    Each grid quad is split along the same diagonal. A seeded jitter well below
    the grid spacing keeps every coordinate injective.
    """
    if n_u < 3 or n_v < 3:
        raise ValueError(f"torus grid needs at least 3x3 vertices, got {n_u}x{n_v}")
    u = 2 * np.pi * np.arange(n_u) / n_u
    v = 2 * np.pi * np.arange(n_v) / n_v
    uu, vv = np.meshgrid(u, v, indexing="ij")
    ring = major + minor * np.cos(vv)
    points = np.stack([ring * np.cos(uu), ring * np.sin(uu), minor * np.sin(vv)], axis=-1).reshape(-1, 3)

    cos_t, sin_t = np.cos(tilt), np.sin(tilt)
    rotation = np.array([[1.0, 0.0, 0.0], [0.0, cos_t, -sin_t], [0.0, sin_t, cos_t]])
    points = points @ rotation.T
    if jitter:
        points = points + np.random.default_rng(seed).uniform(-jitter, jitter, size=points.shape)

    def vid(i: int, j: int) -> int:
        return (i % n_u) * n_v + (j % n_v)

    triangles = []
    for i in range(n_u):
        for j in range(n_v):
            a, b, c, d = vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1)
            triangles.append((a, b, c))
            triangles.append((a, c, d))
    return points, triangles


def torus_complex(n_u: int, n_v: int, coords: Sequence[int] = (0, 1), **kwargs) -> tuple[SimplicialComplex, MultiFiltration]:
    points, triangles = torus_mesh(n_u, n_v, **kwargs)
    c = build_complex(len(points), triangles)
    return c, extend_filtration(c, points[:, list(coords)])


def grade_grid(grades: np.ndarray) -> str:
    """Distinct values per parameter, e.g. `30x30`."""
    return "x".join(str(len(np.unique(grades[:, i]))) for i in range(grades.shape[1]))


def compression_table(meshes: Iterable[Mapping], workers: int = 1) -> pd.DataFrame:
    """One row per torus parameter set: size, critical count, compression factor and grade grid."""
    rows = []
    for params in meshes:
        params = dict(params)
        c, mf = torus_complex(**params)
        g = compute_discrete_gradient(c, mf, workers=workers)
        original = np.array([mf.grade(s) for s in c], dtype=float).reshape(len(c), mf.n_params)
        reduced = np.array([mf.grade(s) for s in g.critical_list()], dtype=float).reshape(-1, mf.n_params)
        rows.append({
            "n_u": params["n_u"],
            "n_v": params["n_v"],
            "vertices": c.vertex_count,
            "cells": len(c),
            "criticals": len(g.criticals),
            "compression": len(c) / len(g.criticals) if g.criticals else float("nan"),
            "grades_original": grade_grid(original),
            "grades_reduced": grade_grid(reduced),
        })
        log.info(f"Torus {params['n_u']}x{params['n_v']}: {len(c)} cells, {len(g.criticals)} critical")
    return pd.DataFrame(rows, columns=COMPRESSION_COLUMNS)


def scaling_benchmark(
    sizes: Sequence[tuple[int, int]], workers: int = 1, compare_matching: bool = False
) -> pd.DataFrame:
    """Wall time and peak traced memory of the local gradient per torus size; optionally of the global matching too."""
    rows = []
    for n_u, n_v in sizes:
        c, mf = torus_complex(n_u, n_v)
        with PeakMemory() as local_peak:
            start = time.perf_counter()
            compute_discrete_gradient(c, mf, workers=workers)
            local = time.perf_counter() - start

        matching, matching_peak = float("nan"), PeakMemory(enabled=False)
        if compare_matching and len(c) <= MATCHING_GUARD:
            with PeakMemory() as matching_peak:
                start = time.perf_counter()
                matching_global(c, mf, build_global_indexing(c, mf))
                matching = time.perf_counter() - start
        elif compare_matching:
            log.warning(f"Skipping global matching on {len(c)} cells (guard {MATCHING_GUARD})")

        rows.append({
            "n_u": n_u,
            "n_v": n_v,
            "cells": len(c),
            "local_seconds": local,
            "local_peak_mb": local_peak.mb,
            "matching_seconds": matching,
            "matching_peak_mb": matching_peak.mb,
        })
    return pd.DataFrame(rows, columns=SCALING_COLUMNS)
