"""Filling identity words with van Kampen diagrams by stacking theta-bands.

The working state is a diagram whose outer boundary reads ``c * w^-1`` where
``w`` is the (freely reduced) input and ``c`` is the current word, carried as
a path of outer half-edges.  Each step picks the leftmost innermost theta-pair
``t^e u t^-e`` of ``c`` and glues a band over it, replacing the subword by
``phi^-e(u)``; the new path is then freely reduced by folding.  When ``c`` is
empty the boundary reads ``w^-1``; the map is reflected so it reads ``w``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import K, T1, T2, Word, format_word, free_reduce, is_theta, u_word
from .diagram import Builder, CountReport, Diagram, count_report, empty_diagram, reduce_diagram
from .wordproblem import DomainError, NormalForm, _phi_letters, normal_form, phi_letterwise


class NotNullHomotopic(DomainError):
    def __init__(self, nf: NormalForm):
        super().__init__(f"word is not trivial in G; normal form {nf}")
        self.normal_form = nf


def innermost_theta_pair(labels) -> tuple[int, int] | None:
    """Leftmost pair of consecutive theta letters ``t^e ... t^-e`` with only a/k between."""
    last = None
    for pos, x in enumerate(labels):
        if is_theta(x):
            if last is not None and labels[last] == -x:
                return last, pos
            last = pos
    return None


def _band_pieces(b: Builder, c: list[int], i: int, j: int) -> tuple[list[int], list]:
    """Prepare ``c[i..j] = t^e u t^-e`` for a band and return (path, pieces).

    A k-cell joins its short side k to its long side ka with theta pointing
    from short to long, so the orientation is forced: for e = -1 the existing
    ``u`` is the short side; for e = +1 it is the long side phi(v) with
    v = phi^-1(u), and the path is first unfolded to read phi(v) letter by letter.
    """
    labels = tuple(b.label[h] for h in c[i + 1:j])
    if b.label[c[i]] < 0:
        return c, [(1, phi_letterwise(Word((y,)), 1).letters) for y in labels]
    v = tuple(_phi_letters(labels, -1))
    chunks = [phi_letterwise(Word((y,)), 1).letters for y in v]
    long_side = tuple(x for ch in chunks for x in ch)
    if long_side != labels:
        c = c[:i + 1] + b.unfold(c[i], c[i + 1:j], long_side) + c[j:]
    return c, [(len(ch), (y,)) for y, ch in zip(v, chunks)]


def _stack_bands(b: Builder, c: list[int], limit: int | None = None) -> tuple[list[int], int]:
    steps = 0
    while limit is None or steps < limit:
        pair = innermost_theta_pair([b.label[h] for h in c])
        if pair is None:
            break
        i, _ = pair
        c, pieces = _band_pieces(b, c, *pair)
        j = i + 1 + sum(m for m, _ in pieces)
        c = b.glue_strip(c, i, j, pieces)
        c = b.fold_path(c)
        steps += 1
    return c, steps


def build_band(bottom: Word, theta: int, epsilon: int) -> Diagram:
    """A single theta-band with bottom side ``bottom`` and theta-edges reading
    ``theta^epsilon`` from bottom to top; boundary ``t^-e bottom t^e top^-1``.

    For epsilon = +1 the bottom is the short side: one cell per letter and the
    top reads phi(bottom) letter by letter.  For epsilon = -1 the top is the
    short side ``phi^-1(bottom)`` (freely reduced) with one cell per letter.
    """
    if theta not in (T1, T2) or epsilon not in (1, -1):
        raise DomainError("theta must be T1 or T2 and epsilon +-1")
    if any(is_theta(x) for x in bottom):
        raise DomainError("band bottom must be a word over a, k")
    if not bottom.reduced:
        raise DomainError("band bottom must be freely reduced")
    b = Builder()
    c = b.path((-theta * epsilon,) + bottom.letters + (theta * epsilon,))
    w_side = b.twin[c[0]]
    if bottom:
        c, pieces = _band_pieces(b, c, 0, len(c) - 1)
        b.glue_strip(c, 0, len(c) - 1, pieces)
    else:
        b.fold_path(c)
    b.mirror()
    return b.freeze(outer_start=b.twin[w_side])


def build_trapezium(n: int) -> Diagram:
    """The 2n-band trapezium filling ``[k^n, t^n U^n]``; boundary read from the
    basepoint is exactly that commutator."""
    if n < 1:
        raise DomainError("trapezium needs n >= 1")
    b = Builder()
    c = b.path((T2,) * n + (-T1,) * n + (K,) * n + (T1,) * n + (-T2,) * n)
    c, steps = _stack_bands(b, c)
    assert steps == 2 * n and [b.label[h] for h in c] == [K] * n
    b.mirror()
    return b.freeze(outer_start=b.twin[c[-1]])


def _fill_raw(w: Word) -> tuple[Diagram, int]:
    nf = normal_form(w)
    if not nf.is_identity:
        raise NotNullHomotopic(nf)
    r = free_reduce(w)
    if not r:
        return empty_diagram(), 0
    b = Builder()
    c = b.path(r.letters)
    w_side = b.twin[c[0]]
    c, steps = _stack_bands(b, c)
    c = b.fold_path(c)
    if c:
        raise AssertionError(f"band stacking left {format_word([b.label[h] for h in c])}")
    b.mirror()
    return b.freeze(outer_start=b.twin[w_side]), steps


def fill(w: Word, reduce: bool = True) -> Diagram:
    """A van Kampen diagram with boundary ``free_reduce(w)``.

    With ``reduce=False`` the raw band stack is returned (debugging aid).
    """
    d, _ = _fill_raw(w)
    return reduce_diagram(d) if reduce else d


@dataclass
class FillReport:
    input_word: Word
    perimeter: int
    area: int
    raw_area: int
    diameter: int
    theta_steps: int
    reduced: bool
    census: CountReport | None = None

    def to_dict(self) -> dict:
        return {
            "input_word": format_word(self.input_word),
            "perimeter": self.perimeter,
            "area": self.area,
            "raw_area": self.raw_area,
            "diameter": self.diameter,
            "theta_steps": self.theta_steps,
            "reduced": self.reduced,
            "census": self.census.to_dict() if self.census else None,
        }


def fill_report(w: Word) -> tuple[FillReport, Diagram]:
    raw, steps = _fill_raw(w)
    d = reduce_diagram(raw)
    census = count_report(d)  # raises if d were not reduced
    rep = FillReport(
        input_word=w,
        perimeter=d.perimeter,
        area=d.area,
        raw_area=raw.area,
        diameter=census.diameter,
        theta_steps=steps,
        reduced=True,
        census=census,
    )
    return rep, d


def trapezium_area(n: int) -> int:
    return n ** 3 + n ** 2


__all__ = [
    "NotNullHomotopic",
    "build_band",
    "build_trapezium",
    "fill",
    "fill_report",
    "FillReport",
    "innermost_theta_pair",
    "u_word",
]
