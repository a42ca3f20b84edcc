"""Theta-, k- and a-bands, and annulus detection.

A band is represented combinatorially by its cell sequence together with the
entry and exit half-edge of each cell; this carries the same information as a
median curve through the cells.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cached_property

from ..core import A, K, RelatorId
from .dcel import Diagram


class LetterClass(enum.Enum):
    THETA = "theta"
    K = "k"
    A = "a"

    def matches(self, x: int) -> bool:
        ax = abs(x)
        if self is LetterClass.THETA:
            return ax <= 2
        return ax == (K if self is LetterClass.K else A)

    def takes(self, rid: RelatorId) -> bool:
        if self is LetterClass.THETA:
            return True
        is_k = rid in (RelatorId.R_K1, RelatorId.R_K2)
        return is_k if self is LetterClass.K else not is_k


@dataclass(frozen=True)
class Band:
    letter_class: LetterClass
    cells: tuple[int, ...]
    entries: tuple[int, ...]  # per cell: half-edge (in the cell) crossed on entry
    exits: tuple[int, ...]
    closed: bool
    side_top: tuple[int, ...] = ()  # band half-edges, start to end
    side_bottom: tuple[int, ...] = ()  # outward half-edges along the other side, start to end

    def __len__(self) -> int:
        return len(self.cells)

    @property
    def start_edge(self) -> int | None:
        return None if self.closed else self.entries[0]

    @property
    def end_edge(self) -> int | None:
        return None if self.closed else self.exits[-1]

    def reversed(self, d: Diagram) -> "Band":
        return _with_sides(d, Band(self.letter_class, self.cells[::-1], self.exits[::-1], self.entries[::-1], self.closed))


def _arc(d: Diagram, frm: int, to: int) -> list[int]:
    """Half-edges strictly between ``frm`` and ``to`` along a cell orbit."""
    out = []
    x = d.next[frm]
    while x != to:
        out.append(x)
        x = d.next[x]
    return out


def band_sides(d: Diagram, band: Band) -> tuple[list[int], list[int]]:
    """The two sides of an open band as half-edge paths from the start edge to the end edge.

    The first side starts at the target of the start edge and consists of band
    half-edges; the second starts at its origin and consists of the twins of band
    half-edges (the half-edges read along the side from outside the band).
    """
    side_a: list[int] = []
    b_arcs: list[list[int]] = []
    for e_in, e_out in zip(band.entries, band.exits):
        side_a.extend(_arc(d, e_in, e_out))
        b_arcs.append(_arc(d, e_out, e_in))
    side_b = [d.twin[h] for arc in b_arcs for h in reversed(arc)]
    return side_a, side_b


def _with_sides(d: Diagram, band: Band) -> Band:
    top, bottom = band_sides(d, band)
    return Band(band.letter_class, band.cells, band.entries, band.exits, band.closed, tuple(top), tuple(bottom))


def trace_bands(d: Diagram, cls: LetterClass) -> list[Band]:
    """Partition the cells of the given class into maximal bands."""
    cof = d.cell_of_half_edge
    members = [i for i, c in enumerate(d.cells) if cls.takes(c.relator)]
    member_set = set(members)
    xedges: dict[int, list[int]] = {}
    for i in members:
        xedges[i] = [h for h in d.cell_orbit(i) if cls.matches(d.label[h])]

    def across(h: int) -> int:
        c = cof[d.twin[h]]
        return c if c in member_set else -1

    def walk(cell: int, exit_h: int) -> tuple[list[int], list[int], list[int], bool]:
        """Follow the band from ``cell`` leaving through ``exit_h``."""
        cells, ins, outs = [], [], []
        cur, out_h = cell, exit_h
        while True:
            nxt = across(out_h)
            if nxt < 0:
                return cells, ins, outs, False
            in_h = d.twin[out_h]
            if nxt == cell and in_h in xedges[cell]:
                return cells, ins, outs, True
            others = [h for h in xedges[nxt] if h != in_h]
            cells.append(nxt)
            ins.append(in_h)
            outs.append(others[0] if others else in_h)
            cur, out_h = nxt, outs[-1]
            if len(cells) > len(members):
                raise RuntimeError("band walk did not terminate")

    seen: set[int] = set()
    bands = []
    for i in members:
        if i in seen:
            continue
        e0, e1 = xedges[i][0], xedges[i][1] if len(xedges[i]) > 1 else xedges[i][0]
        fwd_cells, fwd_in, fwd_out, closed = walk(i, e1)
        if closed:
            cells = [i] + fwd_cells
            ins = [e0] + fwd_in
            outs = [e1] + fwd_out
        else:
            back_cells, back_in, back_out, _ = walk(i, e0)
            # reverse the backward walk: its entries become exits
            cells = back_cells[::-1] + [i] + fwd_cells
            ins = back_out[::-1] + [e0] + fwd_in
            outs = back_in[::-1] + [e1] + fwd_out
        seen.update(cells)
        bands.append(_with_sides(d, Band(cls, tuple(cells), tuple(ins), tuple(outs), closed)))
    return bands


def band_containing(d: Diagram, cls: LetterClass, cell: int) -> Band:
    for band in trace_bands(d, cls):
        if cell in band.cells:
            return band
    raise KeyError(cell)


# -- annuli -----------------------------------------------------------------


@dataclass(frozen=True)
class Annulus:
    kind: str  # "theta", "k", "a", "k-theta", "a-theta"
    cells: tuple[int, ...]
    first: int | None = None
    last: int | None = None

    def to_dict(self) -> dict:
        out = {"kind": self.kind, "cells": list(self.cells)}
        if self.first is not None:
            out["first"] = self.first
            out["last"] = self.last
        return out


class _Composite:
    """Helpers to find (x, theta)-annuli between two maximal bands."""

    def __init__(self, d: Diagram):
        self.d = d

    @cached_property
    def dual(self) -> list[list[tuple[int, int]]]:
        # face adjacency: (neighbour face, half-edge crossed)
        d = self.d
        adj: list[list[tuple[int, int]]] = [[] for _ in range(d.num_faces)]
        for h in range(d.num_half_edges):
            adj[d.face_of[h]].append((d.face_of[d.twin[h]], h))
        return adj

    def inside(self, curve_faces: set[int], crossed: set[int]) -> set[int]:
        """Faces enclosed by the closed median through ``curve_faces``."""
        d = self.d
        outer = d.outer_face
        comp: dict[int, int] = {}
        for f0 in range(d.num_faces):
            if f0 in curve_faces or f0 in comp:
                continue
            comp[f0] = f0
            stack = [f0]
            while stack:
                f = stack.pop()
                for g, h in self.dual[f]:
                    if g in curve_faces or g in comp or h in crossed:
                        continue
                    comp[g] = f0
                    stack.append(g)
        if outer in curve_faces:
            return set()
        outer_root = comp[outer]
        return {f for f, r in comp.items() if r != outer_root}


def _segment(band: Band, i: int, j: int) -> tuple[int, ...]:
    lo, hi = min(i, j), max(i, j)
    return band.cells[lo:hi + 1]


def detect_annuli(d: Diagram) -> list[Annulus]:
    """Closed theta-, k- and a-bands and composite (k,theta)- and (a,theta)-annuli."""
    found: list[Annulus] = []
    by_class = {cls: trace_bands(d, cls) for cls in LetterClass}
    for cls, bands in by_class.items():
        for b in bands:
            if b.closed:
                found.append(Annulus(cls.value, b.cells))
    comp = _Composite(d)
    for cls in (LetterClass.K, LetterClass.A):
        for xb in by_class[cls]:
            if xb.closed:
                continue
            pos_x = {c: i for i, c in enumerate(xb.cells)}
            for tb in by_class[LetterClass.THETA]:
                if tb.closed:
                    continue
                shared = [(pos_x[c], i) for i, c in enumerate(tb.cells) if c in pos_x]
                if len(shared) < 2:
                    continue
                ann = _best_composite(d, comp, xb, tb, shared, cls)
                if ann is not None:
                    found.append(ann)
    return found


def _best_composite(d, comp, xb: Band, tb: Band, shared, cls: LetterClass) -> Annulus | None:
    # the pair of shared cells with the shortest total segment length always
    # has segments meeting only at their ends
    pairs = sorted(
        ((abs(a[0] - b[0]) + abs(a[1] - b[1]), a, b) for ia, a in enumerate(shared) for b in shared[ia + 1:]),
        key=lambda t: t[0],
    )
    for _, p, q in pairs:
        xs = _segment(xb, p[0], q[0])
        ts = _segment(tb, p[1], q[1])
        if set(xs) & set(ts) != {xb.cells[p[0]], xb.cells[q[0]]}:
            continue
        # half-edges crossed by the closed median
        crossed = set()
        lo, hi = min(p[0], q[0]), max(p[0], q[0])
        for i in range(lo, hi):
            crossed.add(xb.exits[i])
            crossed.add(d.twin[xb.exits[i]])
        lo, hi = min(p[1], q[1]), max(p[1], q[1])
        for i in range(lo, hi):
            crossed.add(tb.exits[i])
            crossed.add(d.twin[tb.exits[i]])
        curve_faces = {d.cells[c].face for c in xs + ts}
        inner = comp.inside(curve_faces, crossed)
        # the free x- and theta-edges of the two corner cells must not point inward
        ok = True
        for c in (xb.cells[p[0]], xb.cells[q[0]]):
            for h in d.cell_orbit(c):
                if (cls.matches(d.label[h]) or LetterClass.THETA.matches(d.label[h])) and h not in crossed:
                    if d.face_of[d.twin[h]] in inner:
                        ok = False
        if ok:
            first, last = xb.cells[p[0]], xb.cells[q[0]]
            return Annulus(f"{cls.value}-theta", tuple(sorted(set(xs) | set(ts))), first, last)
    return None
