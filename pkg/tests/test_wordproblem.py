import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from kampen.core import A, EMPTY, K, LETTERS, T1, T2, Word, free_reduce, parse_word, u_word
from kampen.wordproblem import (
    BallTooLarge, DomainError, IDENTITY_STATE, NormalForm, build_ball, geodesic_distance, is_identity,
    nf_multiply, nf_step, nf_to_oracle, normal_form, oracle_element, oracle_to_nf, phi_power,
)

from conftest import ak_words, words


def w(text):
    return parse_word(text)


def nf(theta, ak):
    return NormalForm(w(theta), w(ak))


# -- phi ----------------------------------------------------------------------


def test_phi_power_examples():
    for n in range(0, 6):
        assert phi_power(w("k"), n) == Word((K,) + (A,) * n)
        assert phi_power(Word((K,) * n), n) == Word(((K,) + (A,) * n) * n)
    assert phi_power(w("aaaaa"), 17) == w("aaaaa")
    assert phi_power(w("k"), -2) == w("kAA")


def test_phi_power_rejects_theta():
    with pytest.raises(DomainError):
        phi_power(w("kt"), 1)


@given(ak_words, st.integers(-6, 6))
def test_phi_power_is_invertible(x, m):
    assert phi_power(phi_power(x, m), -m) == free_reduce(x)


@given(ak_words, ak_words, st.integers(-6, 6))
def test_phi_power_is_a_homomorphism(x, y, m):
    assert phi_power(x + y, m) == free_reduce(phi_power(x, m) + phi_power(y, m))
    assert phi_power(x, m).reduced
    assert len(phi_power(x, m)) <= len(x) + abs(m) * sum(1 for c in x if abs(c) == K)


def test_phi_power_substitutes_letterwise():
    # independent oracle: substitute k -> k a^m, K -> A^m K, then reduce
    for text in ("kaK", "KKa", "kAkkA"):
        for m in (-3, 1, 4):
            sub = []
            for c in w(text):
                if c == K:
                    sub += [K] + [A if m > 0 else -A] * abs(m)
                elif c == -K:
                    sub += [-A if m > 0 else A] * abs(m) + [-K]
                else:
                    sub.append(c)
            assert phi_power(w(text), m) == free_reduce(Word(tuple(sub)))


# -- normal form -----------------------------------------------------------------


@pytest.mark.parametrize(
    "text, theta, ak",
    [("Tkt", "", "ka"), ("Tat", "", "a"), ("tU", "tU", ""), ("TkT", "TT", "kA"), ("", "", "")],
)
def test_normal_form_examples(text, theta, ak):
    assert normal_form(w(text)) == nf(theta, ak)


def test_identity_examples():
    for n in range(1, 12):
        assert is_identity(u_word(n))
    assert is_identity(EMPTY)
    assert is_identity(w("KTktA"))
    assert not is_identity(w("tU"))


@given(words)
def test_normal_form_agrees_with_oracle(x):
    assert oracle_to_nf(oracle_element(x)) == normal_form(x)
    assert nf_to_oracle(normal_form(x)) == oracle_element(x)


@given(words, words)
def test_normal_form_is_a_homomorphism(x, y):
    assert normal_form(x + y) == nf_multiply(normal_form(x), normal_form(y))


@given(words)
def test_normal_form_parts(x):
    f = normal_form(x)
    assert all(abs(c) <= 2 for c in f.theta_part) and all(abs(c) > 2 for c in f.ak_part)
    assert f.theta_part.reduced and f.ak_part.reduced
    assert is_identity(x + x.inverse())
    # the element is theta_part . ak_part
    assert normal_form(f.theta_part + f.ak_part) == f


def test_normal_form_matches_oracle_exhaustively_to_length_6():
    checked = 0

    def rec(prefix, state, last):
        nonlocal checked
        got = NormalForm(Word(state[0]), Word(state[1]))
        assert got == oracle_to_nf(oracle_element(prefix)), prefix
        checked += 1
        if len(prefix) == 6:
            return
        for x in LETTERS:
            if x != -last:
                rec(prefix + (x,), nf_step(state, x), x)

    rec((), IDENTITY_STATE, 0)
    assert checked == 1 + sum(8 * 7 ** (n - 1) for n in range(1, 7))


# -- ball and distances -------------------------------------------------------------


def nf_ball_sphere_sizes(radius):
    """Sphere sizes computed by BFS over normal forms, not over the oracle."""
    seen = {IDENTITY_STATE}
    frontier = [IDENTITY_STATE]
    sizes = [1]
    for _ in range(radius):
        nxt = []
        for s in frontier:
            for x in LETTERS:
                t = nf_step(s, x)
                if t not in seen:
                    seen.add(t)
                    nxt.append(t)
        sizes.append(len(nxt))
        frontier = nxt
    return sizes


def test_ball_small_radii():
    b0 = build_ball(0)
    assert len(b0) == 1 and b0.distance(NormalForm()) == 0
    b1 = build_ball(1)
    assert b1.sphere_sizes() == [1, 8]


def test_ball_sphere_sizes_match_normal_form_bfs():
    assert build_ball(5).sphere_sizes() == nf_ball_sphere_sizes(5)


def test_ball_every_element_has_a_parent():
    ball = build_ball(4)
    dist = ball._dist
    from kampen.wordproblem import oracle_step

    for e, d in dist.items():
        if d == 0:
            assert e == oracle_element(())
            continue
        assert any(dist.get(oracle_step(e, x)) == d - 1 for x in LETTERS)


def test_ball_ka():
    ball = build_ball(4)
    assert ball.distance(nf("", "ka")) == 2
    assert normal_form(w("Tkt")) == nf("", "ka")


def test_ball_refuses_beyond_cap():
    with pytest.raises(BallTooLarge, match="elements"):
        build_ball(11)


def test_geodesic_examples():
    assert geodesic_distance(w("kak")) == 3
    assert geodesic_distance(EMPTY) == 0
    assert geodesic_distance(u_word(3)) == 0
    for m in range(0, 7):
        d = geodesic_distance(Word((K,) + (A,) * m + (K,)))
        assert d is not None and d > m / 2


def test_geodesic_beyond_cap_is_unknown():
    assert geodesic_distance(w("k") * 5, cap=4) is None
    assert geodesic_distance(w("k") * 4, cap=4) == 4


def test_geodesic_distance_matches_exhaustive_search():
    # brute force over all words of length <= 3 using only the normal form
    best = {}
    for n in range(4):
        for letters in itertools.product(LETTERS, repeat=n):
            key = normal_form(Word(letters)).key()
            best.setdefault(key, n)
    for key, n in list(best.items())[:400]:
        assert geodesic_distance(Word(key[0] + key[1])) == n
