"""Mirror-pair detection and cancellation."""

from __future__ import annotations

from collections import deque

from .dcel import Builder, Diagram


def _mirror_partner(b: Builder, h: int) -> list[int] | None:
    """If the cells on both sides of ``h`` are mirror images, return the two
    orbits (read from ``h`` and from ``twin(h)``) concatenated; else None."""
    c1 = b.cell_of.get(h)
    t = b.twin[h]
    c2 = b.cell_of.get(t)
    if c1 is None or c2 is None or c1 == c2:
        return None
    o1 = b.orbit(h)
    o2 = b.orbit(t)
    n = len(o1)
    if len(o2) != n:
        return None
    lab = b.label
    for q in range(1, n):
        if lab[o2[q]] != -lab[o1[n - q]]:
            return None
    return o1 + o2


def _cancel(b: Builder, o1: list[int], o2: list[int]) -> list[int]:
    """Remove two mirror cells sharing ``o1[0] / o2[0]`` and zip their boundaries."""
    n = len(o1)
    partner = {}
    for q in range(1, n):
        partner[o1[q]] = o2[n - q]
        partner[o2[n - q]] = o1[q]
    removed = set(o1) | set(o2)
    new_twin = {}
    for x in removed:
        ext = b.twin[x]
        if ext in removed or ext in new_twin:
            continue
        cur = x
        while True:
            nxt = b.twin[partner[cur]]
            if nxt not in removed:
                break
            cur = nxt
        new_twin[ext] = nxt
        new_twin[nxt] = ext
    b.remove_cell(b.cell_of[o1[0]])
    b.remove_cell(b.cell_of[o2[0]])
    for x in removed:
        b._drop(x)
    for x, y in new_twin.items():
        b.twin[x] = y
    return sorted(new_twin)


def find_mirror_pairs(d: Diagram) -> list[tuple[int, int]]:
    """All (cell, cell) index pairs that share an edge and are mirror images."""
    out = set()
    cof = d.cell_of_half_edge
    for h in range(d.num_half_edges):
        c1, c2 = cof[h], cof[d.twin[h]]
        if c1 < 0 or c2 < 0 or c1 >= c2:
            continue
        o1 = d.cell_orbit(c1, h)
        o2 = d.cell_orbit(c2, d.twin[h])
        n = len(o1)
        if len(o2) == n and all(d.label[o2[q]] == -d.label[o1[n - q]] for q in range(1, n)):
            out.add((c1, c2))
    return sorted(out)


def is_reduced(d: Diagram) -> bool:
    return not find_mirror_pairs(d)


def reduce_builder(b: Builder) -> int:
    """Cancel mirror pairs in place until none remain; returns the number cancelled."""
    work = deque(sorted(b.cell_of))
    cancelled = 0
    while work:
        h = work.popleft()
        if h not in b.twin:
            continue
        orbits = _mirror_partner(b, h)
        if orbits is None:
            continue
        n = len(orbits) // 2
        touched = _cancel(b, orbits[:n], orbits[n:])
        cancelled += 1
        for x in touched:
            work.append(x)
            work.append(b.twin[x])
    return cancelled


def reduce_diagram(d: Diagram) -> Diagram:
    """Cancel mirror pairs to a fixpoint.

    The outer face is never touched, so the boundary word is preserved letter
    for letter; spherical components split off by a cancellation are dropped.
    """
    b = d.thaw()
    if reduce_builder(b) == 0:
        return d
    start = d.outer_orbit()[0] if d.twin else None
    return b.freeze(outer_start=start)
