"""Small hand-built diagrams, including unreduced ones with planted annuli."""

from __future__ import annotations

from ..core import RELATORS, RelatorId
from .dcel import Builder, Diagram, DiagramError


def _cell_builder(relator: RelatorId) -> tuple[Builder, list[int]]:
    """Builder holding one cell; returns the cell-side half-edges reading the relator."""
    b = Builder()
    letters = RELATORS[relator].word.letters
    fwd, back = zip(*(b.new_edge(x) for x in letters))
    b.link_cycle(list(fwd))
    b.link_cycle(list(reversed(back)))
    b.outer = back[0]
    b.add_cell(fwd[0], relator)
    return b, list(fwd)


def mirror_pair(relator: RelatorId, glued: set[int]) -> Diagram:
    """A cell and its mirror image glued along the edges at positions ``glued``
    of the relator word (at least one, and not all of them)."""
    b, o1 = _cell_builder(relator)
    n = len(o1)
    glued = set(glued)
    if not glued or len(glued) >= n or not glued <= set(range(n)):
        raise DiagramError("glue a proper non-empty set of edge positions")
    s = min(glued)
    o1 = o1[s:] + o1[:s]
    pos = {h: (q + s) % n for q, h in enumerate(o1)}
    g = b.twin[o1[0]]
    b.attach_cell(g, [-b.label[o1[n - q]] for q in range(1, n)])
    c1 = b.cell_of[o1[0]]

    def mirrored_twin(x: int) -> int | None:
        # position in the relator of the cell-1 edge behind outer half-edge x
        h = b.twin[x]
        return pos[h] if b.cell_of.get(h) == c1 else None

    todo = glued - {s}
    while todo:
        for x in b.orbit(b.outer):
            y = b.next[x]
            if b.label[y] != -b.label[x]:
                continue
            p = mirrored_twin(x)
            if p is None:
                p = mirrored_twin(y)
            if p in todo and (mirrored_twin(x) is None) != (mirrored_twin(y) is None):
                b.fold(x, y)
                todo.discard(p)
                break
        else:
            raise DiagramError(f"edges {sorted(todo)} cannot be glued without leaving the disc")
    return b.freeze()


def annulus_fixtures() -> dict[str, tuple[Diagram, str]]:
    """Unreduced diagrams, each with the annulus kind it is built to contain."""
    A1, K1 = RelatorId.R_A1, RelatorId.R_K1
    # relator positions: R_a = T a t A, R_k = T k t A K
    return {
        "a-annulus": (mirror_pair(A1, {1, 2, 3}), "a"),
        "theta-annulus": (mirror_pair(A1, {0, 1, 2}), "theta"),
        "k-annulus": (mirror_pair(K1, {0, 1, 4}), "k"),
        "k-theta-annulus": (mirror_pair(K1, {0, 1}), "k-theta"),
        "a-theta-annulus": (mirror_pair(A1, {0, 1}), "a-theta"),
    }
