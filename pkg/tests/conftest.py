import sys
import random

import pytest
from hypothesis import strategies as st

from hyperdual.census import enumerate_hypermaps
from hyperdual.core import FlagStructure, parse_hmap

TRIANGLES = "vertex: a.1+ b.1+ c.1+ a.2+ b.2+ c.2+ a.3+ b.3+ c.3+"


def H(*curves):
    """Hypermap from curve strings, e.g. H("a.1+ b.1+", "a.2+")."""
    return parse_hmap("\n".join(f"vertex: {c}" for c in curves))


def interleaved(i):
    """Two degree-i hyperedges e, f alternating around one vertex."""
    return H(" ".join(f"e.{j}+ f.{j}+" for j in range(1, i + 1)))


def _matching(rng, n):
    pts = list(range(n))
    rng.shuffle(pts)
    p = [0] * n
    for a, b in zip(pts[::2], pts[1::2]):
        p[a], p[b] = b, a
    return p


@st.composite
def flag_structures(draw, max_d=5, max_isolated=2):
    d = draw(st.integers(1, max_d))
    rng = random.Random(draw(st.integers(0, 2**32 - 1)))
    n = 2 * d
    return FlagStructure(_matching(rng, n), _matching(rng, n), _matching(rng, n), draw(st.integers(0, max_isolated)))


@pytest.fixture(scope="session")
def census8():
    return list(enumerate_hypermaps(8))


@pytest.fixture(scope="session")
def census6():
    return list(enumerate_hypermaps(6))


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if not mod or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
