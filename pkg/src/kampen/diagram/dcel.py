"""Half-edge maps for van Kampen diagrams over G.

A map is determined by two permutations of the half-edges: ``twin`` (a
fixed-point-free involution) and ``next`` (the successor along the face on the
left).  Faces are the orbits of ``next`` and vertices are the orbits of
``h -> next(twin(h))`` (the outgoing half-edges at a vertex).  Keeping only
these two permutations makes folding and cell cancellation pure re-twinning
operations; vertex identities fall out at :meth:`Builder.freeze` time.

Face numbering is normative for the JSON format: faces are numbered
0, 1, 2, ... in order of the smallest half-edge id they contain.  Frozen
diagrams always place the outer face first, so ``outer_face == 0`` and the
boundary is read from half-edge 0 when the basepoint is its origin.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from ..core import (
    RELATORS,
    RelatorId,
    Word,
    char_to_letter,
    is_theta,
    letter_to_char,
    match_relator,
)

JSON_SCHEMA_VERSION = 1


class DiagramError(ValueError):
    pass


@dataclass(frozen=True)
class Cell:
    face: int
    relator: RelatorId
    rotation: int


@dataclass(frozen=True, eq=False)
class Diagram:
    """A frozen planar map with relator-labelled bounded faces."""

    twin: tuple[int, ...]
    next: tuple[int, ...]
    origin: tuple[int, ...]
    label: tuple[int, ...]
    num_vertices: int
    cells: tuple[Cell, ...]
    outer_face: int = 0
    basepoint: int = 0

    def _fields(self) -> tuple:
        return (self.twin, self.next, self.origin, self.label, self.num_vertices, self.cells,
                self.outer_face, self.basepoint)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Diagram):
            return NotImplemented
        return self is other or self._fields() == other._fields()

    def __hash__(self) -> int:
        return hash((len(self.twin), self.label[:64], self.num_vertices, len(self.cells)))

    # -- derived structure (computed lazily, never mutated) ---------------

    @property
    def num_half_edges(self) -> int:
        return len(self.twin)

    @property
    def num_edges(self) -> int:
        return len(self.twin) // 2

    @property
    def area(self) -> int:
        return len(self.cells)

    @cached_property
    def prev(self) -> tuple[int, ...]:
        p = [0] * len(self.next)
        for h, n in enumerate(self.next):
            p[n] = h
        return tuple(p)

    @cached_property
    def face_of(self) -> tuple[int, ...]:
        face = [-1] * len(self.next)
        f = 0
        for h in range(len(self.next)):
            if face[h] >= 0:
                continue
            x = h
            while face[x] < 0:
                face[x] = f
                x = self.next[x]
            f += 1
        return tuple(face)

    @cached_property
    def faces(self) -> tuple[tuple[int, ...], ...]:
        orbits: list[list[int]] = []
        seen = [False] * len(self.next)
        for h in range(len(self.next)):
            if seen[h]:
                continue
            orbit = []
            x = h
            while not seen[x]:
                seen[x] = True
                orbit.append(x)
                x = self.next[x]
            orbits.append(orbit)
        if not orbits:
            return ((),)
        return tuple(tuple(o) for o in orbits)

    @property
    def num_faces(self) -> int:
        return len(self.faces)

    @cached_property
    def cell_of_face(self) -> dict[int, int]:
        return {c.face: i for i, c in enumerate(self.cells)}

    @cached_property
    def cell_of_half_edge(self) -> tuple[int, ...]:
        """Cell index owning each half-edge, or -1 for the outer face."""
        cof = self.cell_of_face
        return tuple(cof.get(f, -1) for f in self.face_of)

    def cell_orbit(self, i: int, start: int | None = None) -> list[int]:
        h = self.cells[i].rotation if start is None else start
        out = [h]
        x = self.next[h]
        while x != h:
            out.append(x)
            x = self.next[x]
        return out

    def target(self, h: int) -> int:
        return self.origin[self.twin[h]]

    def outer_orbit(self) -> list[int]:
        """Outer-face half-edges in order, starting at the basepoint."""
        if not self.twin:
            return []
        start = min(h for h in self.faces[self.outer_face] if self.origin[h] == self.basepoint)
        out = [start]
        x = self.next[start]
        while x != start:
            out.append(x)
            x = self.next[x]
        return out

    @property
    def perimeter(self) -> int:
        return len(self.faces[self.outer_face]) if self.twin else 0

    # -- conversion ---------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "schema_version": JSON_SCHEMA_VERSION,
            "vertices": list(range(self.num_vertices)),
            "half_edges": [
                {
                    "id": h,
                    "twin": self.twin[h],
                    "next": self.next[h],
                    "origin": self.origin[h],
                    "label": letter_to_char(self.label[h]),
                }
                for h in range(len(self.twin))
            ],
            "cells": [
                {"face": c.face, "relator": c.relator.value, "rotation": c.rotation} for c in self.cells
            ],
            "outer_face": self.outer_face,
            "basepoint": self.basepoint,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), separators=(",", ":"))

    @classmethod
    def from_json(cls, data: dict) -> "Diagram":
        try:
            hes = sorted(data["half_edges"], key=lambda e: e["id"])
            if [e["id"] for e in hes] != list(range(len(hes))):
                raise DiagramError("half-edge ids must be 0..N-1")
            vertices = list(data["vertices"])
            if sorted(vertices) != list(range(len(vertices))):
                raise DiagramError("vertex ids must be 0..V-1")
            cells = tuple(
                Cell(int(c["face"]), RelatorId(c["relator"]), int(c["rotation"])) for c in data["cells"]
            )
            return cls(
                twin=tuple(int(e["twin"]) for e in hes),
                next=tuple(int(e["next"]) for e in hes),
                origin=tuple(int(e["origin"]) for e in hes),
                label=tuple(char_to_letter(e["label"]) for e in hes),
                num_vertices=len(vertices),
                cells=cells,
                outer_face=int(data["outer_face"]),
                basepoint=int(data["basepoint"]),
            )
        except (KeyError, TypeError) as exc:
            raise DiagramError(f"malformed diagram JSON: {exc}") from exc

    @classmethod
    def loads(cls, text: str) -> "Diagram":
        return cls.from_json(json.loads(text))

    def thaw(self) -> "Builder":
        b = Builder()
        for h in range(len(self.twin)):
            b.twin[h] = self.twin[h]
            b.next[h] = self.next[h]
            b.prev[self.next[h]] = h
            b.label[h] = self.label[h]
        b._ids = itertools.count(len(self.twin))
        for c in self.cells:
            b.add_cell(c.rotation, c.relator)
        if self.twin:
            b.outer = self.outer_orbit()[0]
        return b


def empty_diagram() -> Diagram:
    return Diagram((), (), (), (), 1, ())


# -- mutable construction ---------------------------------------------------


class Builder:
    """Mutable half-edge map used while constructing or rewriting a diagram."""

    def __init__(self):
        self.twin: dict[int, int] = {}
        self.next: dict[int, int] = {}
        self.prev: dict[int, int] = {}
        self.label: dict[int, int] = {}
        self.cells: dict[int, tuple[int, RelatorId]] = {}
        self.cell_of: dict[int, int] = {}
        self.outer: int | None = None
        self._ids = itertools.count()
        self._cell_ids = itertools.count()

    # primitives

    def new_edge(self, label: int) -> tuple[int, int]:
        h, t = next(self._ids), next(self._ids)
        self.twin[h], self.twin[t] = t, h
        self.label[h], self.label[t] = label, -label
        return h, t

    def link(self, a: int, b: int):
        self.next[a] = b
        self.prev[b] = a

    def link_cycle(self, hs: Sequence[int]):
        for a, b in zip(hs, hs[1:]):
            self.link(a, b)
        self.link(hs[-1], hs[0])

    def orbit(self, h: int) -> list[int]:
        out = [h]
        x = self.next[h]
        while x != h:
            out.append(x)
            x = self.next[x]
        return out

    def labels(self, hs: Iterable[int]) -> tuple[int, ...]:
        return tuple(self.label[h] for h in hs)

    def add_cell(self, marker: int, relator: RelatorId | None = None) -> int:
        orbit = self.orbit(marker)
        rid = match_relator(self.labels(orbit))
        if rid is None or (relator is not None and rid != relator):
            raise DiagramError(f"face reads {Word(self.labels(orbit))}, not a relator conjugate")
        key = next(self._cell_ids)
        self.cells[key] = (marker, rid)
        for h in orbit:
            self.cell_of[h] = key
        return key

    def _drop(self, h: int):
        del self.twin[h], self.next[h], self.label[h]
        self.prev.pop(h, None)
        self.cell_of.pop(h, None)

    # constructions

    def path(self, letters: Sequence[int]) -> list[int]:
        """Start a tree diagram that is a path reading ``letters``.

        Returns the forward half-edges; both sides lie on the outer face, whose
        orbit reads ``letters`` followed by their inverse.
        """
        if self.twin:
            raise DiagramError("path() needs an empty builder")
        if not letters:
            return []
        fwd, back = zip(*(self.new_edge(x) for x in letters))
        self.link_cycle(list(fwd) + list(reversed(back)))
        self.outer = fwd[0]
        return list(fwd)

    def fold(self, g1: int, g2: int):
        """Identify two consecutive half-edges ``g1, g2`` of one face with inverse labels."""
        if self.next[g1] != g2 or self.label[g2] != -self.label[g1]:
            raise DiagramError("fold needs consecutive half-edges with inverse labels")
        if g1 in self.cell_of or g2 in self.cell_of:
            raise DiagramError("cannot fold inside a cell")
        p, n = self.prev[g1], self.next[g2]
        if g2 == self.twin[g1]:
            # spur: remove the dangling edge
            if n == g1:
                self._drop(g1)
                self._drop(g2)
                self.outer = None
                return
            self.link(p, n)
        else:
            a, b = self.twin[g1], self.twin[g2]
            self.twin[a], self.twin[b] = b, a
            if n == g1:
                if self.outer in (g1, g2):
                    raise DiagramError("fold would close the outer face")
            else:
                self.link(p, n)
        if self.outer in (g1, g2):
            self.outer = n
        self._drop(g1)
        self._drop(g2)

    def fold_path(self, c: list[int]) -> list[int]:
        """Freely reduce a path of consecutive outer half-edges by folding."""
        stack: list[int] = []
        for h in c:
            if stack and self.label[stack[-1]] == -self.label[h]:
                self.fold(stack.pop(), h)
            else:
                stack.append(h)
        return stack

    def unfold(self, before: int, path: list[int], letters: Sequence[int]) -> list[int]:
        """Re-route the outer path ``path`` (which follows ``before``) so that it
        reads ``letters``, a word freely equal to it, by inserting spurs."""
        stack: list[int] = []
        closing: dict[int, int] = {}
        for q, x in enumerate(letters):
            if stack and letters[stack[-1]] == -x:
                closing[stack.pop()] = q
            else:
                stack.append(q)
        if tuple(self.label[h] for h in path) != tuple(letters[q] for q in stack):
            raise DiagramError("unfold target is not freely equal to the path")
        out = []
        cur = before
        survivors = iter(path)
        pending: dict[int, int] = {}
        for q, x in enumerate(letters):
            if q in pending:
                cur = pending.pop(q)
            elif q in closing:
                s, s2 = self.new_edge(x)
                n = self.next[cur]
                self.link(cur, s)
                self.link(s, s2)
                self.link(s2, n)
                pending[closing[q]] = s2
                cur = s
            else:
                cur = next(survivors)
            out.append(cur)
        return out

    def glue_strip(self, c: list[int], i: int, j: int, pieces: Sequence[tuple[int, tuple[int, ...]]]) -> list[int]:
        """Glue a theta-band to the left of the outer path ``c`` over ``c[i..j]``.

        ``c[i]`` and ``c[j]`` are the theta-edges of the band; ``pieces`` lists,
        cell by cell, how many half-edges of ``c[i+1:j]`` the cell consumes and
        the letters of the new boundary path it contributes.  Returns the new
        path with ``c[i..j]`` replaced.
        """
        up, down = c[i], c[j]
        theta_down = self.label[down]
        if not (is_theta(theta_down) and self.label[up] == -theta_down):
            raise DiagramError("band must be bounded by inverse theta letters")
        if sum(m for m, _ in pieces) != j - i - 1:
            raise DiagramError("pieces do not cover the band segment")
        p_out, n_out = self.prev[up], self.next[down]
        # new boundary edges: fwd on the outer side, back inside the cells
        new_fwd: list[list[int]] = []
        new_back: list[list[int]] = []
        for _, letters in pieces:
            pairs = [self.new_edge(x) for x in letters]
            new_fwd.append([f for f, _ in pairs])
            new_back.append([b for _, b in pairs])
        rungs = [self.new_edge(theta_down) for _ in range(len(pieces) - 1)]
        pos = i + 1
        orbits = []
        for m, (count, _) in enumerate(pieces):
            existing = c[pos:pos + count]
            pos += count
            down_edge = rungs[m][0] if m < len(pieces) - 1 else down
            up_edge = rungs[m - 1][1] if m > 0 else up
            orbits.append(existing + [down_edge] + list(reversed(new_back[m])) + [up_edge])
        flat = [f for fs in new_fwd for f in fs]
        for orbit in orbits:
            self.link_cycle(orbit)
        self.link_cycle_path(p_out, flat, n_out)
        for orbit in orbits:
            self.add_cell(orbit[0])
        if self.outer in (up, down) or self.outer in c[i + 1:j]:
            self.outer = flat[0]
        return c[:i] + flat + c[j + 1:]

    def link_cycle_path(self, before: int, hs: Sequence[int], after: int):
        self.link(before, hs[0])
        for a, b in zip(hs, hs[1:]):
            self.link(a, b)
        self.link(hs[-1], after)

    def attach_cell(self, g: int, labels: Sequence[int]) -> int:
        """Attach a new cell along outer half-edge ``g``; its orbit is ``g`` followed
        by new half-edges reading ``labels``."""
        if g in self.cell_of:
            raise DiagramError("attach_cell needs an outer half-edge")
        p, n = self.prev[g], self.next[g]
        pairs = [self.new_edge(x) for x in labels]
        inner = [a for a, _ in pairs]
        outer = [b for _, b in reversed(pairs)]
        self.link_cycle([g] + inner)
        self.link_cycle_path(p, outer, n)
        if self.outer == g:
            self.outer = outer[0]
        return self.add_cell(g)

    def insert_bubble(self, h: int, relator_letters: Sequence[int]) -> tuple[int, int]:
        """Slit edge ``h`` open and fill the slit with a cell and its mirror image.

        ``relator_letters`` is a cyclic conjugate of a relator (or its inverse)
        starting with ``label(twin(h))``.  Boundary word and all other faces are
        unchanged; area grows by two.
        """
        t = self.twin[h]
        r = tuple(relator_letters)
        if r[0] != self.label[t]:
            raise DiagramError("bubble word must start with the label of twin(h)")
        n = len(r)
        pi = [next(self._ids) for _ in range(n)]
        pj = [next(self._ids) for _ in range(n)]
        for q, x in enumerate(r):
            self.label[pi[q]] = x
        self.label[pj[0]] = -r[0]
        for q in range(1, n):
            self.label[pj[q]] = -r[n - q]
        self.twin[pi[0]], self.twin[h] = h, pi[0]
        self.twin[pj[0]], self.twin[t] = t, pj[0]
        for q in range(1, n):
            self.twin[pi[q]] = pj[n - q]
            self.twin[pj[n - q]] = pi[q]
        self.link_cycle(pi)
        self.link_cycle(pj)
        return self.add_cell(pi[0]), self.add_cell(pj[0])

    def remove_cell(self, key: int):
        marker, _ = self.cells.pop(key)
        for h in self.orbit(marker):
            self.cell_of.pop(h, None)

    def mirror(self):
        """Reflect the map: every face is traversed in the opposite direction."""
        nxt = {h: self.twin[self.prev[self.twin[h]]] for h in self.next}
        self.next = nxt
        self.prev = {b: a for a, b in nxt.items()}
        cells = dict(self.cells)
        self.cells.clear()
        self.cell_of.clear()
        for key, (marker, rid) in cells.items():
            m = self.twin[marker]
            self.cells[key] = (m, match_relator(self.labels(self.orbit(m))))
            for x in self.orbit(m):
                self.cell_of[x] = key
        if self.outer is not None:
            self.outer = self.twin[self.outer]

    # finishing

    def freeze(self, outer_start: int | None = None) -> Diagram:
        """Compact ids and derive vertices; components not containing the outer
        face are spherical and are discarded."""
        if self.outer is None or not self.twin:
            return empty_diagram()
        start = self.outer if outer_start is None else outer_start
        if start in self.cell_of:
            raise DiagramError("outer_start is not on the outer face")
        keep = {start}
        stack = [start]
        while stack:
            x = stack.pop()
            for y in (self.twin[x], self.next[x], self.prev[x]):
                if y not in keep:
                    keep.add(y)
                    stack.append(y)
        order = self.orbit(start)
        seen = set(order)
        order += sorted(h for h in keep if h not in seen)
        new = {h: i for i, h in enumerate(order)}
        twin = tuple(new[self.twin[h]] for h in order)
        nxt = tuple(new[self.next[h]] for h in order)
        label = tuple(self.label[h] for h in order)
        origin = [-1] * len(order)
        v = 0
        for h in range(len(order)):
            if origin[h] >= 0:
                continue
            x = h
            while origin[x] < 0:
                origin[x] = v
                x = nxt[twin[x]]
            v += 1
        proto = Diagram(twin, nxt, tuple(origin), label, v, ())
        face_of = proto.face_of
        cells = []
        for marker, rid in self.cells.values():
            if marker in new:
                cells.append(Cell(face_of[new[marker]], rid, new[marker]))
        cells.sort(key=lambda c: c.face)
        return Diagram(twin, nxt, tuple(origin), label, v, tuple(cells), 0, origin[0])


# -- validation ---------------------------------------------------------------


@dataclass
class ValidationReport:
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok

    def to_dict(self) -> dict:
        return {"valid": self.ok, "violations": list(self.violations)}


def validate(d: Diagram) -> ValidationReport:
    rep = ValidationReport()
    bad = rep.violations
    N = len(d.twin)
    if not (len(d.next) == len(d.origin) == len(d.label) == N):
        bad.append("half-edge arrays have different lengths")
        return rep
    if N == 0:
        if d.num_vertices != 1:
            bad.append(f"edgeless diagram must have exactly one vertex, has {d.num_vertices}")
        if d.cells:
            bad.append("edgeless diagram cannot carry cells")
        return rep
    for h in range(N):
        t = d.twin[h]
        if not 0 <= t < N or d.twin[t] != h or t == h:
            bad.append(f"half-edge {h}: twin is not a fixed-point-free involution")
        elif d.label[t] != -d.label[h]:
            bad.append(f"half-edge {h}: twin label is not the inverse")
        if not 0 <= d.next[h] < N:
            bad.append(f"half-edge {h}: next out of range")
        if not 0 <= d.origin[h] < d.num_vertices:
            bad.append(f"half-edge {h}: origin out of range")
    if bad:
        return rep
    if sorted(d.next) != list(range(N)):
        bad.append("next is not a permutation")
        return rep
    for h in range(N):
        if d.origin[d.next[h]] != d.origin[d.twin[h]]:
            bad.append(f"half-edge {h}: next does not start at its target")
    # each vertex's outgoing half-edges form one rotation cycle
    out: dict[int, set[int]] = {}
    for h in range(N):
        out.setdefault(d.origin[h], set()).add(h)
    for v in range(d.num_vertices):
        hs = out.get(v)
        if not hs:
            bad.append(f"vertex {v}: isolated")
            continue
        h0 = min(hs)
        cyc = {h0}
        x = d.next[d.twin[h0]]
        while x != h0 and x not in cyc:
            cyc.add(x)
            x = d.next[d.twin[x]]
        if cyc != hs:
            bad.append(f"vertex {v}: outgoing half-edges do not form a single rotation")
    # connectivity
    seen = {0}
    stack = [0]
    while stack:
        x = stack.pop()
        for y in (d.twin[x], d.next[x]):
            if y not in seen:
                seen.add(y)
                stack.append(y)
    if len(seen) != N:
        bad.append("map is not connected")
    F = d.num_faces
    euler = d.num_vertices - N // 2 + F
    if euler != 2:
        bad.append(f"Euler characteristic V-E+F = {euler}, not 2 (not planar)")
    if not 0 <= d.outer_face < F:
        bad.append("outer_face out of range")
        return rep
    counts = [0] * F
    for i, c in enumerate(d.cells):
        if not 0 <= c.face < F or not 0 <= c.rotation < N:
            bad.append(f"cell {i}: face or rotation out of range")
            continue
        counts[c.face] += 1
        if d.face_of[c.rotation] != c.face:
            bad.append(f"cell {i}: rotation half-edge {c.rotation} not on face {c.face}")
            continue
        labels = tuple(d.label[h] for h in d.cell_orbit(i))
        rid = match_relator(labels)
        if rid is None:
            bad.append(f"face {c.face}: face label not a relator conjugate (cell {i})")
        elif rid != c.relator:
            bad.append(f"face {c.face}: reads relator {rid.value}, cell says {c.relator.value}")
    for f in range(F):
        if f == d.outer_face:
            if counts[f]:
                bad.append(f"outer face {f} carries a cell")
        elif counts[f] != 1:
            bad.append(f"face {f}: carries {counts[f]} cells, expected 1")
    if not any(d.origin[h] == d.basepoint for h in d.faces[d.outer_face]):
        bad.append(f"basepoint {d.basepoint} is not on the outer face")
    return rep


def boundary_word(d: Diagram) -> Word:
    rep = validate(d)
    if not rep.ok:
        raise DiagramError("invalid diagram: " + "; ".join(rep.violations[:3]))
    return Word(tuple(d.label[h] for h in d.outer_orbit()))


def single_cell(relator: RelatorId) -> Diagram:
    """A one-cell diagram whose boundary reads the relator word."""
    b = Builder()
    letters = RELATORS[relator].word.letters
    fwd, back = zip(*(b.new_edge(x) for x in letters))
    b.link_cycle(list(reversed(back)))  # cell side
    b.link_cycle(list(fwd))  # outer side
    b.outer = fwd[0]
    b.add_cell(back[-1], relator)
    return b.freeze()
