"""Word problem for G via the split extension F(a,k) ⋊ F(t,u).

Both stable letters act on F(a,k) by the same automorphism

    phi:  a -> a,   k -> k a,       with   t^-1 x t = phi(x).

The normal form of an element is the pair (theta_part, ak_part) with the
element equal to theta_part * ak_part.  It is computed by a left-to-right
scan; see :func:`nf_step`.

The Cayley-graph oracle (:class:`BallIndex`) deliberately uses the opposite
representation ``ak_part' * theta_part``, in which right multiplication by an
a/k letter is twisted by phi^(-exponent sum of theta_part).  The two routes
share only free reduction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .core import A, EMPTY, K, LETTERS, Word, format_word, is_theta, reduce_letters

DEFAULT_CAP = 10


class DomainError(ValueError):
    pass


def _phi_letters(letters: Iterable[int], m: int) -> list[int]:
    """Apply phi^m letterwise and reduce on the fly."""
    ap = (A if m > 0 else -A,) * abs(m)
    am = tuple(-x for x in ap)
    out: list[int] = []
    for x in letters:
        if x == K:
            seq = (K,) + ap
        elif x == -K:
            seq = am + (-K,)
        elif x == A or x == -A:
            seq = (x,)
        else:
            raise DomainError(f"theta letter {format_word((x,))} in a word over a,k")
        for y in seq:
            if out and out[-1] == -y:
                out.pop()
            else:
                out.append(y)
    return out


def phi_letterwise(w: Word, m: int) -> Word:
    """phi^m applied letter by letter, *without* free reduction (band tops)."""
    out: list[int] = []
    for x in w:
        if is_theta(x):
            raise DomainError("theta letter in a word over a,k")
        if x == K:
            out.extend((K,) + (A if m > 0 else -A,) * abs(m))
        elif x == -K:
            out.extend((-A if m > 0 else A,) * abs(m) + (-K,))
        else:
            out.append(x)
    return Word(tuple(out))


def phi_power(w: Word, m: int) -> Word:
    """The freely reduced image of ``w`` (over a, k) under phi^m."""
    return Word(tuple(_phi_letters(w, m)))


@dataclass(frozen=True)
class NormalForm:
    theta_part: Word = EMPTY
    ak_part: Word = EMPTY

    @property
    def is_identity(self) -> bool:
        return not self.theta_part and not self.ak_part

    def key(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        return (self.theta_part.letters, self.ak_part.letters)

    def to_dict(self) -> dict:
        return {"theta_part": format_word(self.theta_part), "ak_part": format_word(self.ak_part)}

    def __str__(self) -> str:
        return f"({format_word(self.theta_part, True)}, {format_word(self.ak_part, True)})"


NFState = tuple[tuple[int, ...], tuple[int, ...]]
IDENTITY_STATE: NFState = ((), ())


def nf_step(state: NFState, x: int) -> NFState:
    """Right-multiply a normal-form state ``(T, W)`` by one letter."""
    T, W = state
    if is_theta(x):
        if T and T[-1] == -x:
            T = T[:-1]
        else:
            T = T + (x,)
        return T, tuple(_phi_letters(W, 1 if x > 0 else -1))
    if W and W[-1] == -x:
        return T, W[:-1]
    return T, W + (x,)


def normal_form(w: Word) -> NormalForm:
    state = IDENTITY_STATE
    for x in w:
        state = nf_step(state, x)
    return NormalForm(Word(state[0]), Word(state[1]))


def is_identity(w: Word) -> bool:
    return normal_form(w).is_identity


def nf_multiply(x: NormalForm, y: NormalForm) -> NormalForm:
    """Product of two normal forms, by continuing the scan over ``y``'s letters."""
    state = x.key()
    for letter in y.theta_part + y.ak_part:
        state = nf_step(state, letter)
    return NormalForm(Word(state[0]), Word(state[1]))


# -- Cayley-graph oracle ----------------------------------------------------

# oracle element: (ak_left, theta_right, exponent sum of theta_right)
OracleKey = tuple[tuple[int, ...], tuple[int, ...], int]
ORACLE_IDENTITY: OracleKey = ((), (), 0)


def oracle_step(e: OracleKey, x: int) -> OracleKey:
    W, T, s = e
    if is_theta(x):
        if T and T[-1] == -x:
            T = T[:-1]
        else:
            T = T + (x,)
        return W, T, s + (1 if x > 0 else -1)
    # W T x = W (T x T^-1) T = W phi^(-s)(x) T
    return tuple(_phi_letters_onto(W, x, -s)), T, s


def _phi_letters_onto(W: tuple[int, ...], x: int, m: int) -> list[int]:
    out = list(W)
    if x == K:
        seq = (K,) + (A if m > 0 else -A,) * abs(m)
    elif x == -K:
        seq = (-A if m > 0 else A,) * abs(m) + (-K,)
    else:
        seq = (x,)
    for y in seq:
        if out and out[-1] == -y:
            out.pop()
        else:
            out.append(y)
    return out


def oracle_element(w: Iterable[int]) -> OracleKey:
    e = ORACLE_IDENTITY
    for x in w:
        e = oracle_step(e, x)
    return e


def oracle_multiply(e: OracleKey, f: OracleKey) -> OracleKey:
    W1, T1, s1 = e
    W2, T2, s2 = f
    W = list(W1)
    for y in W2:
        for z in _phi_letters((y,), -s1):
            if W and W[-1] == -z:
                W.pop()
            else:
                W.append(z)
    return tuple(W), reduce_letters(T1 + T2), s1 + s2


def oracle_inverse(e: OracleKey) -> OracleKey:
    # (W T)^-1 = T^-1 W^-1 = phi^s(W^-1) T^-1
    W, T, s = e
    Winv = tuple(-x for x in reversed(W))
    return tuple(_phi_letters(Winv, s)), tuple(-x for x in reversed(T)), -s


def oracle_to_nf(e: OracleKey) -> NormalForm:
    # W T = T (T^-1 W T) = T phi^s(W)
    W, T, s = e
    return NormalForm(Word(T), Word(tuple(_phi_letters(W, s))))


def nf_to_oracle(nf: NormalForm) -> OracleKey:
    T = nf.theta_part.letters
    s = sum(1 if x > 0 else -1 for x in T)
    return tuple(_phi_letters(nf.ak_part, -s)), T, s


class BallTooLarge(RuntimeError):
    pass


# observed growth rate of the 8-letter sphere sizes, used only for the refusal message
_GROWTH = 4.4


def estimate_ball_size(radius: int) -> int:
    return int(9 * _GROWTH ** max(radius - 1, 0)) if radius else 1


@dataclass
class BallIndex:
    """All elements within ``radius`` of the identity with exact word-metric distances."""

    radius: int
    _dist: dict[OracleKey, int] = field(repr=False, default_factory=dict)

    def __len__(self) -> int:
        return len(self._dist)

    def __contains__(self, nf: NormalForm) -> bool:
        return nf_to_oracle(nf) in self._dist

    def distance(self, nf: NormalForm) -> int | None:
        return self._dist.get(nf_to_oracle(nf))

    def oracle_distance(self, e: OracleKey) -> int | None:
        return self._dist.get(e)

    @property
    def elements(self) -> Mapping[NormalForm, int]:
        return {oracle_to_nf(e): d for e, d in self._dist.items()}

    def sphere_sizes(self) -> list[int]:
        sizes = [0] * (self.radius + 1)
        for d in self._dist.values():
            sizes[d] += 1
        return sizes


def build_ball(radius: int, cap: int = DEFAULT_CAP) -> BallIndex:
    """Breadth-first enumeration of the radius-``radius`` ball of the Cayley graph."""
    if radius < 0:
        raise ValueError("radius must be non-negative")
    if radius > cap:
        raise BallTooLarge(
            f"radius {radius} exceeds cap {cap} (about {estimate_ball_size(radius):.3g} elements)"
        )
    dist = {ORACLE_IDENTITY: 0}
    frontier = [ORACLE_IDENTITY]
    for r in range(1, radius + 1):
        nxt = []
        for e in frontier:
            for x in LETTERS:
                f = oracle_step(e, x)
                if f not in dist:
                    dist[f] = r
                    nxt.append(f)
        frontier = nxt
    return BallIndex(radius, dist)


_BALL_CACHE: dict[int, BallIndex] = {}


def cached_ball(radius: int, cap: int = DEFAULT_CAP) -> BallIndex:
    if radius not in _BALL_CACHE:
        _BALL_CACHE[radius] = build_ball(radius, cap=cap)
    return _BALL_CACHE[radius]


def geodesic_distance(w: Word, cap: int = DEFAULT_CAP) -> int | None:
    """Exact distance from 1 to the element of ``w`` if it is at most ``cap``, else None.

    Uses one ball of radius ceil(cap/2): a geodesic of length <= cap splits as
    h * (h^-1 g) with |h| <= ceil(cap/2) and |h^-1 g| <= floor(cap/2).
    """
    if cap < 0:
        raise ValueError("cap must be non-negative")
    g = oracle_element(w)
    half = math.ceil(cap / 2)
    ball = cached_ball(half, cap=max(half, DEFAULT_CAP))
    d = ball.oracle_distance(g)
    if d is not None:
        return d if d <= cap else None
    best = None
    rest = cap - half
    for h, dh in ball._dist.items():
        dr = ball.oracle_distance(oracle_multiply(oracle_inverse(h), g))
        if dr is not None and dr <= rest:
            if best is None or dh + dr < best:
                best = dh + dr
    return best
