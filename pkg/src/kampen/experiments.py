"""Desk-scale experiments: area and diameter curves, band sides, geodesics and
subdisc partitions of trapezium diagrams."""

from __future__ import annotations

import csv
import io
import math
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components, dijkstra

from .core import A, K, LETTERS, RELATORS, T1, Word, free_reduce, reduce_letters, u_word
from .diagram import Diagram, LetterClass, diameter, trace_bands
from .fill import build_trapezium, fill, trapezium_area
from .wordproblem import geodesic_distance, phi_power

CURVE_COLUMNS = ("n", "perimeter", "trapezium_area", "fill_area", "diameter", "diameter_over_n")


# -- area / diameter curve ----------------------------------------------------


@dataclass(frozen=True)
class CurvePoint:
    n: int
    perimeter: int
    trapezium_area: int
    fill_area: int | None
    diameter: int | None
    wallclock: float

    def row(self, timing: bool = False) -> dict:
        out = {
            "n": self.n,
            "perimeter": self.perimeter,
            "trapezium_area": self.trapezium_area,
            "fill_area": self.fill_area,
            "diameter": self.diameter,
            "diameter_over_n": None if self.diameter is None else round(self.diameter / self.n, 6),
        }
        if timing:
            out["wallclock"] = round(self.wallclock, 4)
        return out


def curve_point(n: int, with_fill: bool = True, with_diameter: bool = True) -> CurvePoint:
    t0 = time.perf_counter()
    d = build_trapezium(n)
    fa = fill(u_word(n)).area if with_fill else None
    diam = diameter(d) if with_diameter else None
    return CurvePoint(n, d.perimeter, d.area, fa, diam, time.perf_counter() - t0)


def _curve_point_args(args):
    return curve_point(*args)


def dehn_curve(
    n_max: int, n_min: int = 1, with_fill: bool = True, with_diameter: bool = True, workers: int = 1
) -> list[CurvePoint]:
    if n_max < 1 or n_min < 1:
        raise ValueError("n_max must be >= 1")
    jobs = [(n, with_fill, with_diameter) for n in range(n_min, n_max + 1)]
    if workers <= 1:
        return [curve_point(*j) for j in jobs]
    with ProcessPoolExecutor(workers) as ex:
        # map preserves job order, so the result does not depend on scheduling
        return list(ex.map(_curve_point_args, jobs))


def curve_csv(points: list[CurvePoint], timing: bool = False) -> str:
    cols = CURVE_COLUMNS + (("wallclock",) if timing else ())
    buf = io.StringIO()
    wr = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
    wr.writeheader()
    for p in points:
        wr.writerow({k: ("" if v is None else v) for k, v in p.row(timing).items()})
    return buf.getvalue()


def loglog_slope(points: list[CurvePoint], n_lo: int = 4, n_hi: int = 32) -> float:
    """Least-squares slope of log(area) against log(perimeter)."""
    sel = [p for p in points if n_lo <= p.n <= n_hi]
    if len(sel) < 2:
        raise ValueError("need at least two points in range")
    x = np.log([p.perimeter for p in sel])
    y = np.log([p.trapezium_area for p in sel])
    return float(np.polyfit(x, y, 1)[0])


# -- band sides -----------------------------------------------------------------


def _read(d: Diagram, path) -> Word:
    return Word(tuple(d.label[h] for h in path))


def band_top_side(d: Diagram, band) -> Word:
    """Label of the side at the heads of the band's theta-edges, read so that its
    k-letters are positive."""
    h = band.start_edge
    side = band.side_top if d.label[h] > 0 else band.side_bottom
    w = free_reduce(_read(d, side))
    if any(x == -K for x in w.letters):
        w = w.inverse()
    return w


def widest_theta1_band(d: Diagram, n: int):
    for band in trace_bands(d, LetterClass.THETA):
        if len(band) == n * n and abs(d.label[band.start_edge]) == T1:
            return band
    raise LookupError(f"no theta_1-band with {n * n} cells")


def band_side_identity(n: int) -> Word:
    """Top label of the n-th theta_1-band of the trapezium for u_n."""
    if n < 1:
        raise ValueError("n must be >= 1")
    d = build_trapezium(n)
    return band_top_side(d, widest_theta1_band(d, n))


def expected_band_side(n: int) -> Word:
    return phi_power(Word((K,) * n), n)


# -- geodesics --------------------------------------------------------------------


@dataclass(frozen=True)
class GeodesicRow:
    m: int
    distance: int | None  # None: beyond the search cap
    half_m: float
    passed: bool | None

    def to_dict(self) -> dict:
        return asdict(self)


def geodesic_experiment(m_max: int, cap: int = 10) -> list[GeodesicRow]:
    """Exact |k a^m k| for m = 0..m_max, and whether it exceeds m/2."""
    rows = []
    for m in range(m_max + 1):
        dist = geodesic_distance(Word((K,) + (A,) * m + (K,)), cap=cap)
        rows.append(GeodesicRow(m, dist, m / 2, None if dist is None else dist > m / 2))
    return rows


# -- random identity words ------------------------------------------------------


def random_identity_word(rng: random.Random, max_len: int, max_factors: int = 4, max_conj: int = 5) -> Word:
    """A freely reduced, non-empty product of conjugated relators of length <= max_len."""
    rels = [r.word.letters for r in RELATORS.values()]
    for _ in range(10_000):
        w: tuple[int, ...] = ()
        for _ in range(rng.randint(1, max_factors)):
            x = tuple(rng.choice(LETTERS) for _ in range(rng.randint(0, max_conj)))
            r = rng.choice(rels)
            if rng.random() < 0.5:
                r = tuple(-y for y in reversed(r))
            w += x + r + tuple(-y for y in reversed(x))
        w = reduce_letters(w)
        if 0 < len(w) <= max_len:
            return Word(w)
    raise RuntimeError("could not draw an identity word of the requested length")


# -- partitions -------------------------------------------------------------------


class PartitionError(ValueError):
    pass


@dataclass(frozen=True)
class PartitionVerdict:
    piece_count: int
    piece_perimeters: tuple[int, ...]
    constraint_ok: bool
    reason: str
    witness: dict | None = None

    @property
    def max_piece_perimeter(self) -> int:
        return max(self.piece_perimeters, default=0)

    def to_dict(self) -> dict:
        return {
            "piece_count": self.piece_count,
            "max_piece_perimeter": self.max_piece_perimeter,
            "piece_perimeters": list(self.piece_perimeters),
            "constraint_ok": self.constraint_ok,
            "reason": self.reason,
            "witness": self.witness,
        }


class CellGraph:
    """Cell adjacency of a diagram with per-half-edge cell ids as arrays."""

    def __init__(self, d: Diagram):
        self.d = d
        self.cell = np.asarray(d.cell_of_half_edge, dtype=np.int64)
        twin = np.asarray(d.twin, dtype=np.int64)
        self.twin_cell = self.cell[twin] if len(twin) else self.cell
        inner = (self.cell >= 0) & (self.twin_cell >= 0) & (self.cell < self.twin_cell)
        self.src = self.cell[inner]
        self.dst = self.twin_cell[inner]
        self.num_cells = len(d.cells)

    def matrix(self, weights=None):
        w = np.ones(len(self.src)) if weights is None else weights
        n = self.num_cells
        return coo_matrix((w, (self.src, self.dst)), shape=(n, n)).tocsr()

    def perimeters(self, piece: np.ndarray, count: int) -> np.ndarray:
        """Boundary half-edges of each piece; edges between pieces count for both."""
        own = self.cell >= 0
        pc = piece[self.cell[own]]
        tc = self.twin_cell[own]
        other = np.where(tc >= 0, piece[np.maximum(tc, 0)], -1)
        return np.bincount(pc[pc != other], minlength=count)


def _witness(d: Diagram, n: int, piece: np.ndarray, perims: np.ndarray) -> dict:
    """Look for a k a^n k stretch of the top side of the n-th theta_1-band lying
    inside one piece; such a piece must carry all n a-bands starting there."""
    band = widest_theta1_band(d, n)
    h0 = band.start_edge
    side = list(band.side_top if d.label[h0] > 0 else band.side_bottom)
    if any(d.label[h] == -K for h in side):
        side = [d.twin[h] for h in reversed(side)]
    cof = d.cell_of_half_edge
    ks = [i for i, h in enumerate(side) if d.label[h] == K]
    for s, e in zip(ks, ks[1:]):
        stretch = side[s:e + 1]
        owners = {int(piece[c]) for h in stretch for c in (cof[h], cof[d.twin[h]]) if c >= 0}
        if len(owners) == 1:
            p = owners.pop()
            a_edges = sum(1 for h in stretch if abs(d.label[h]) == A)
            return {
                "located": True,
                "piece": p,
                "side_offset": s,
                "a_edges": a_edges,
                "piece_perimeter": int(perims[p]),
                "contradiction": a_edges > int(perims[p]) - 2,
            }
    return {"located": False, "reason": "every k a^n k stretch meets two pieces"}


def check_partition(
    d: Diagram, pieces, n: int | None = None, *, max_pieces: int | None = None, perimeter_budget: int | None = None
) -> PartitionVerdict:
    """Check a partition of the cells of a filling of u_n into pieces.

    ``pieces`` gives a piece index for every cell.  ``n`` defaults to a sixth of
    the perimeter; the thresholds default to sqrt(n) pieces and perimeter n and
    can be overridden to exercise the witness search.
    """
    piece = np.asarray(pieces, dtype=np.int64)
    if piece.shape != (len(d.cells),):
        raise PartitionError(f"need one piece index per cell ({len(d.cells)}), got {piece.shape}")
    if len(piece) == 0:
        raise PartitionError("diagram has no cells")
    if piece.min() < 0:
        raise PartitionError("piece indices must be non-negative")
    labels, piece = np.unique(piece, return_inverse=True)
    count = len(labels)
    g = CellGraph(d)
    same = piece[g.src] == piece[g.dst]
    m = coo_matrix((np.ones(int(same.sum())), (g.src[same], g.dst[same])), shape=(len(piece),) * 2)
    ncomp, _ = connected_components(m, directed=False)
    if ncomp != count:
        raise PartitionError("every piece must be edge-connected")
    if n is None:
        n = d.perimeter // 6
    max_pieces = math.isqrt(n) if max_pieces is None else max_pieces
    budget = n if perimeter_budget is None else perimeter_budget
    perims = g.perimeters(piece, count)
    as_tuple = tuple(int(x) for x in perims)
    if count > max_pieces:
        return PartitionVerdict(count, as_tuple, False, "piece count")
    if perims.max() > budget:
        return PartitionVerdict(count, as_tuple, False, "piece perimeter")
    return PartitionVerdict(count, as_tuple, True, "constraints hold", _witness(d, n, piece, perims))


@dataclass
class SearchResult:
    n: int
    max_pieces: int
    trials: int
    seed: int
    counterexamples: int = 0
    best_max_perimeter: int | None = None
    best_trial: int | None = None
    piece_count_histogram: dict[int, int] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)


def _grow_partition(g: CellGraph, rng: np.random.Generator, max_pieces: int) -> tuple[np.ndarray, int]:
    """Random connected partition by multi-source shortest paths with random weights."""
    count = int(rng.integers(1, max_pieces + 1))
    seeds = rng.choice(g.num_cells, size=min(count, g.num_cells), replace=False)
    # low noise grows compact, nearly metric balls; high noise grows ragged ones
    noise = float(rng.uniform(0.0, 2.0))
    w = 1.0 + noise * rng.random(len(g.src))
    _, _, sources = dijkstra(g.matrix(w), directed=False, indices=seeds, min_only=True, return_predecessors=True)
    lookup = np.full(g.num_cells, -1, dtype=np.int64)
    lookup[seeds] = np.arange(len(seeds))
    return lookup[sources], len(seeds)


def _search_chunk(args) -> list[tuple[int, int, int, bool]]:
    n, max_pieces, seed, lo, hi = args
    d = build_trapezium(n)
    g = CellGraph(d)
    out = []
    root = np.random.SeedSequence(seed)
    for i in range(lo, hi):
        rng = np.random.default_rng(np.random.SeedSequence(root.entropy, spawn_key=(i,)))
        piece, count = _grow_partition(g, rng, max_pieces)
        perims = g.perimeters(piece, count)
        mx = int(perims.max())
        out.append((i, count, mx, count <= math.isqrt(n) and mx <= n))
    return out


def partition_search(n: int, max_pieces: int, trials: int, seed: int = 0, workers: int = 1) -> SearchResult:
    """Randomized search for a partition of trapezium(n) into at most ``max_pieces``
    connected pieces, each of perimeter at most n."""
    if n < 1 or max_pieces < 1 or trials < 0:
        raise ValueError("need n >= 1, max_pieces >= 1, trials >= 0")
    chunk = max(1, math.ceil(trials / max(1, workers * 4)))
    jobs = [(n, max_pieces, seed, lo, min(trials, lo + chunk)) for lo in range(0, trials, chunk)]
    if workers <= 1:
        parts = [_search_chunk(j) for j in jobs]
    else:
        with ProcessPoolExecutor(workers) as ex:
            parts = list(ex.map(_search_chunk, jobs))
    res = SearchResult(n, max_pieces, trials, seed)
    hist: dict[int, int] = {}
    for i, count, mx, ok in sorted(r for part in parts for r in part):
        hist[count] = hist.get(count, 0) + 1
        res.counterexamples += ok
        if res.best_max_perimeter is None or mx < res.best_max_perimeter:
            res.best_max_perimeter, res.best_trial = mx, i
    res.piece_count_histogram = dict(sorted(hist.items()))
    return res
