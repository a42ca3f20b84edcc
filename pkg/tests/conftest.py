import sys
import random
from functools import lru_cache

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from kampen.core import LETTERS, Word
from kampen.experiments import random_identity_word
from kampen.fill import build_trapezium

settings.register_profile(
    "repo", deadline=None, max_examples=150, derandomize=True, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("repo")

letters = st.sampled_from(LETTERS)
words = st.lists(letters, max_size=24).map(lambda xs: Word(tuple(xs)))
ak_words = st.lists(st.sampled_from((3, -3, 4, -4)), max_size=16).map(lambda xs: Word(tuple(xs)))


@st.composite
def identity_words(draw, max_len=24):
    seed = draw(st.integers(0, 2**32 - 1))
    return random_identity_word(random.Random(seed), max_len)


@lru_cache(maxsize=None)
def trapezium(n):
    return build_trapezium(n)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not getattr(mod, "RESULTS", None):
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
