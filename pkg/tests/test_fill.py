import random

import pytest
from hypothesis import given, settings

from kampen.core import A, K, T1, T2, RelatorId, Word, format_word, free_reduce, parse_word, u_word
from kampen.diagram import (
    LetterClass, boundary_word, count_report, diameter, is_reduced, trace_bands, validate,
)
from kampen.experiments import random_identity_word
from kampen.fill import (
    NotNullHomotopic, build_band, build_trapezium, fill, fill_report, innermost_theta_pair, trapezium_area,
)
from kampen.wordproblem import DomainError, NormalForm, normal_form, phi_letterwise, phi_power

from conftest import identity_words, trapezium


def w(text):
    return parse_word(text)


def rotations(x: Word):
    return {x.letters[i:] + x.letters[:i] for i in range(max(1, len(x)))}


# -- single bands -------------------------------------------------------------------


def test_band_k_theta1_plus():
    d = build_band(w("k"), T1, 1)
    assert validate(d).ok and d.area == 1
    assert d.cells[0].relator is RelatorId.R_K1
    assert format_word(boundary_word(d)) == "TktAK"


def test_band_empty_bottom_folds():
    d = build_band(Word(), T1, 1)
    assert d.area == 0 and format_word(boundary_word(d)) == "Tt"


def test_band_kaka_theta2_plus():
    d = build_band(w("kaka"), T2, 1)
    assert d.area == 4 and validate(d).ok
    (band,) = trace_bands(d, LetterClass.THETA)
    sides = {format_word(Word(tuple(d.label[h] for h in s))) for s in (band.side_top, band.side_bottom)}
    assert sides == {"kaka", "kaakaa"}


@pytest.mark.parametrize("bottom", ["k", "kA", "KAkak", "aaK", "kkk"])
@pytest.mark.parametrize("theta", [T1, T2])
@pytest.mark.parametrize("eps", [1, -1])
def test_band_boundary_word(bottom, theta, eps):
    b = w(bottom)
    d = build_band(b, theta, eps)
    assert validate(d).ok
    t = Word((theta * eps,))
    # the top is the letterwise image for eps = +1 (short bottom), and the
    # reduced preimage for eps = -1 (long bottom)
    top = phi_letterwise(b, 1) if eps == 1 else phi_power(b, -1)
    assert boundary_word(d) == t.inverse() + b + t + top.inverse()
    assert free_reduce(boundary_word(d)) == free_reduce(t.inverse() + b + t + phi_power(b, eps).inverse())
    # one cell per letter of the short side
    assert d.area == len(b if eps == 1 else top)


def test_band_rejects_theta_letters():
    with pytest.raises(DomainError):
        build_band(w("kt"), T1, 1)


# -- trapezia -----------------------------------------------------------------------------


def test_trapezium_one():
    d = trapezium(1)
    assert sorted(c.relator.value for c in d.cells) == ["R_k1", "R_k2"]
    assert boundary_word(d) == u_word(1) and d.perimeter == 6


@pytest.mark.parametrize("n", range(1, 9))
def test_trapezium_exact(n):
    d = trapezium(n)
    assert validate(d).ok
    assert boundary_word(d) == u_word(n)
    assert d.perimeter == 6 * n
    # row sum: layer j on each side has n*j cells
    assert d.area == 2 * sum(n * j for j in range(1, n + 1)) == trapezium_area(n) == n**3 + n**2
    assert is_reduced(d)


def test_trapezium_layers_transform_rows():
    n = 4
    d = trapezium(n)
    tops = set()
    for band in trace_bands(d, LetterClass.THETA):
        for side in (band.side_top, band.side_bottom):
            x = free_reduce(Word(tuple(d.label[h] for h in side)))
            if any(c == -K for c in x):
                x = x.inverse()
            tops.add(x)
    assert tops == {phi_power(Word((K,) * n), j) for j in range(0, n + 1)}


def test_trapezium_rejects_zero():
    with pytest.raises(DomainError):
        build_trapezium(0)


# -- fill ----------------------------------------------------------------------------------


def test_fill_single_relator():
    d = fill(w("TatA"))
    assert d.area == 1 and format_word(boundary_word(d)) == "TatA"


@pytest.mark.parametrize("n", [1, 2, 3, 6, 10])
def test_fill_u_n_matches_trapezium(n):
    d = fill(u_word(n))
    assert boundary_word(d) == u_word(n)
    assert d.area <= n**3 + n**2
    assert d.area == trapezium(n).area if n <= 8 else d.area == n**3 + n**2


def test_fill_rejects_non_identity():
    with pytest.raises(NotNullHomotopic) as e:
        fill(w("tU"))
    assert e.value.normal_form == NormalForm(w("tU"), Word())


def test_fill_free_words_are_trees():
    d = fill(w("kaAK"))
    assert d.area == 0 and d.num_half_edges == 0
    d = fill(w("ktTK"))
    assert d.area == 0


def test_innermost_pair_is_leftmost():
    assert innermost_theta_pair(w("tkTuaU").letters) == (0, 2)
    assert innermost_theta_pair(w("tuKUT").letters) == (1, 3)
    assert innermost_theta_pair(w("kak").letters) is None


@given(identity_words(max_len=40))
@settings(max_examples=150)
def test_fill_invariants(x):
    rep, d = fill_report(x)
    assert validate(d).ok and is_reduced(d)
    r = free_reduce(x)
    assert boundary_word(d).letters in rotations(r)
    assert d.area <= max(1, len(x)) ** 3
    assert rep.diameter <= 5 * len(r) / 2
    assert rep.theta_steps <= sum(1 for c in r if abs(c) <= 2) // 2
    assert rep.census.ok


def test_fill_random_length_24_corpus():
    rng = random.Random(11)
    for _ in range(200):
        x = random_identity_word(rng, 24)
        d = fill(x)
        assert boundary_word(d) == free_reduce(x)
        assert count_report(d).ok


def test_fill_report_examples():
    rep, _ = fill_report(u_word(2))
    assert rep.perimeter == 12 and rep.area <= 12 and rep.reduced
    rep, _ = fill_report(w("TatA"))
    assert (rep.perimeter, rep.area) == (4, 1)
    data = rep.to_dict()
    assert data["census"]["ok"] and data["input_word"] == "TatA"


def test_raw_fill_is_available():
    x = w("tkTtKT")  # freely reduces, exercised through the debug path
    raw = fill(x, reduce=False)
    assert validate(raw).ok
