"""Exact 1-skeleton diameter and the cell/band census of a reduced diagram."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from numba import njit
from scipy.sparse import coo_matrix

from ..core import RelatorId
from .bands import LetterClass, trace_bands
from .dcel import Diagram
from .reduce import is_reduced


class NotReduced(ValueError):
    """Raised when a census is requested for a diagram with a mirror pair."""


def skeleton(d: Diagram):
    """Sparse adjacency matrix of the 1-skeleton (both directions of every edge)."""
    src = np.asarray(d.origin, dtype=np.int32)
    dst = src[np.asarray(d.twin, dtype=np.int32)] if d.twin else src
    n = d.num_vertices
    return coo_matrix((np.ones(len(src), dtype=np.int8), (src, dst)), shape=(n, n)).tocsr()


@njit(cache=True)
def bfs_distances(indptr, indices, srcs):
    """Unweighted distances from each source; -1 marks unreachable vertices."""
    n = len(indptr) - 1
    out = np.empty((len(srcs), n), dtype=np.int64)
    queue = np.empty(n, dtype=np.int64)
    for r in range(len(srcs)):
        dist = out[r]
        dist[:] = -1
        dist[srcs[r]] = 0
        queue[0] = srcs[r]
        head, tail = 0, 1
        while head < tail:
            v = queue[head]
            head += 1
            for p in range(indptr[v], indptr[v + 1]):
                w = indices[p]
                if dist[w] < 0:
                    dist[w] = dist[v] + 1
                    queue[tail] = w
                    tail += 1
    return out


def eccentricity_bounds(graph, batch: int = 8) -> tuple[int, int, int]:
    """Exact diameter by iteratively tightening eccentricity bounds.

    Each round runs BFS from a batch of candidate vertices, half with the
    largest upper bounds and half with the smallest lower bounds, and discards
    vertices that can no longer change the answer.  Returns
    (diameter, number of BFS runs, number of vertices).
    """
    n = graph.shape[0]
    lo = np.zeros(n, dtype=np.int64)
    hi = np.full(n, np.iinfo(np.int64).max // 4, dtype=np.int64)
    cand = np.ones(n, dtype=bool)
    degree = np.diff(graph.indptr).astype(np.int64)
    d_lo, d_hi = 0, int(hi[0])
    runs = 0
    size = 1
    while d_lo < d_hi and cand.any():
        idx = np.flatnonzero(cand)
        if len(idx) <= size:
            srcs = idx.copy()
        else:
            h = max(1, size // 2)
            top = idx[np.argpartition(-(hi[idx] * (n + 1) + degree[idx]), h - 1)[:h]]
            bottom = idx[np.argpartition(lo[idx] * (n + 1) - degree[idx], size - h - 1)[: size - h]] if size > h else idx[:0]
            srcs = np.unique(np.concatenate([top, bottom]))
        dist = bfs_distances(graph.indptr, graph.indices, srcs.astype(np.int64))
        if (dist < 0).any():
            raise ValueError("1-skeleton is disconnected")
        runs += len(srcs)
        for row in dist:
            ecc = int(row.max())
            np.maximum(lo, np.maximum(row, ecc - row), out=lo)
            np.minimum(hi, ecc + row, out=hi)
            d_lo = max(d_lo, ecc)
            d_hi = min(d_hi, 2 * ecc)
        cand[srcs] = False
        if cand.any():
            d_hi = min(d_hi, int(hi[cand].max()))
        else:
            d_hi = d_lo
        cand &= ~(((hi <= d_lo) & (2 * lo >= d_hi)) | (lo == hi))
        # start with single probes, widen once the cheap pruning is exhausted
        size = min(batch, size * 2)
    return d_lo, runs, n


def diameter(d: Diagram) -> int:
    """Largest graph distance between two vertices of the 1-skeleton."""
    if d.num_vertices <= 1:
        return 0
    return eccentricity_bounds(skeleton(d))[0]


@dataclass(frozen=True)
class BoundCheck:
    name: str
    bound: Fraction
    observed: int

    @property
    def ok(self) -> bool:
        return self.observed <= self.bound

    def to_dict(self) -> dict:
        return {"name": self.name, "bound": float(self.bound), "observed": self.observed, "pass": self.ok}


@dataclass(frozen=True)
class CountReport:
    perimeter: int
    k_cells: int
    a_cells_non_k: int
    total_cells: int
    max_theta_bands: int
    max_k_bands: int
    max_a_bands: int
    diameter: int
    bound_checks: tuple[BoundCheck, ...] = field(default=())

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.bound_checks)

    def failures(self) -> list[BoundCheck]:
        return [c for c in self.bound_checks if not c.ok]

    def to_dict(self) -> dict:
        return {
            "perimeter": self.perimeter,
            "k_cells": self.k_cells,
            "a_cells_non_k": self.a_cells_non_k,
            "total_cells": self.total_cells,
            "max_theta_bands": self.max_theta_bands,
            "max_k_bands": self.max_k_bands,
            "max_a_bands": self.max_a_bands,
            "diameter": self.diameter,
            "bound_checks": [c.to_dict() for c in self.bound_checks],
            "ok": self.ok,
        }


def bound_checks(n: int, k_cells: int, a_bands: int, a_cells: int, total: int, diam: int) -> tuple[BoundCheck, ...]:
    n = Fraction(n)
    return (
        BoundCheck("k_cells <= n^2/4", n**2 / 4, k_cells),
        BoundCheck("max_a_bands <= n^2/8 + n/2", n**2 / 8 + n / 2, a_bands),
        BoundCheck("a_cells_non_k <= n^3/16 + n^2/4", n**3 / 16 + n**2 / 4, a_cells),
        BoundCheck("total_cells <= n^3/16 + n^2/2", n**3 / 16 + n**2 / 2, total),
        BoundCheck("diameter <= 5n/2", 5 * n / 2, diam),
    )


def count_report(d: Diagram, check_reduced: bool = True) -> CountReport:
    if check_reduced and not is_reduced(d):
        raise NotReduced("census bounds hold only for reduced diagrams; run reduce_diagram first")
    k_cells = sum(1 for c in d.cells if c.relator in (RelatorId.R_K1, RelatorId.R_K2))
    total = len(d.cells)
    theta = len(trace_bands(d, LetterClass.THETA))
    kb = len(trace_bands(d, LetterClass.K))
    ab = len(trace_bands(d, LetterClass.A))
    diam = diameter(d)
    n = d.perimeter
    return CountReport(
        perimeter=n,
        k_cells=k_cells,
        a_cells_non_k=total - k_cells,
        total_cells=total,
        max_theta_bands=theta,
        max_k_bands=kb,
        max_a_bands=ab,
        diameter=diam,
        bound_checks=bound_checks(n, k_cells, ab, total - k_cells, total, diam),
    )
