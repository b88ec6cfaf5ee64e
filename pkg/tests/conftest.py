"""Shared fixtures, brute-force oracles, and hypothesis strategies.

The oracles restate the definitions directly with nested loops and
itertools enumeration, independent of the package's optimized paths, so
the tests compare two routes to the same answer.
"""

from __future__ import annotations

import itertools
import random
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from mopls import KPartialSquare
from mopls.maximality import candidate_tuples

DATA = Path(__file__).parent / "data"

settings.register_profile(
    "suite",
    deadline=None,
    max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")


# -- oracles -----------------------------------------------------------------


def oracle_agreements(a, b) -> int:
    return sum(x == y for x, y in zip(a, b))


def oracle_valid_words(words, n: int, k: int) -> bool:
    """Definition check: words in range, distinct cells, pairwise agreement <= 1."""
    words = list(words)
    for w in words:
        if len(w) != k + 2 or any(not 0 <= x < n for x in w):
            return False
    for a, b in itertools.combinations(words, 2):
        if oracle_agreements(a, b) > 1:
            return False
    return True


def oracle_valid(square: KPartialSquare) -> bool:
    return oracle_valid_words(square.words(), square.n, square.k)


def oracle_candidates(square: KPartialSquare, cell) -> list[tuple]:
    """All entry tuples insertable at an empty cell, by brute enumeration."""
    r, c = cell
    words = square.words()
    found = []
    for entries in itertools.product(range(square.n), repeat=square.k):
        w = (r, c) + entries
        if all(oracle_agreements(w, other) <= 1 for other in words):
            found.append(entries)
    return found


def oracle_is_maximal(square: KPartialSquare) -> bool:
    return all(not oracle_candidates(square, cell) for cell in square.empty_cells())


def oracle_min_distance(words) -> int:
    return min(
        sum(x != y for x, y in zip(a, b)) for a, b in itertools.combinations(words, 2)
    )


def oracle_covering_radius(words, alphabet_size: int, length: int) -> int:
    return max(
        min(sum(x != y for x, y in zip(w, c)) for c in words)
        for w in itertools.product(range(alphabet_size), repeat=length)
    )


def oracle_max_empty_transversal(square: KPartialSquare, rows, cols) -> int:
    """Largest set of empty cells in the region, no two sharing a row or column."""
    rows = list(rows)
    cols = list(cols)
    empties = [
        (i, j) for i in rows for j in cols if not square.is_filled((i, j))
    ]

    def grow(remaining, used_rows, used_cols):
        best = 0
        for idx, (i, j) in enumerate(remaining):
            if i in used_rows or j in used_cols:
                continue
            best = max(
                best,
                1
                + grow(remaining[idx + 1 :], used_rows | {i}, used_cols | {j}),
            )
        return best

    return grow(empties, frozenset(), frozenset())


# -- strategies ----------------------------------------------------------------


@st.composite
def partial_squares(draw, min_n=1, max_n=6, ks=(1, 2, 3), allow_empty=True):
    """Random valid squares grown by seeded random insertion."""
    n = draw(st.integers(min_n, max_n))
    k = draw(st.sampled_from(ks))
    seed = draw(st.integers(0, 2**32 - 1))
    fill_goal = draw(st.floats(0.0 if allow_empty else 0.05, 1.0))
    rng = random.Random(seed)
    square = KPartialSquare.empty(n, k)
    cells = [(r, c) for r in range(n) for c in range(n)]
    rng.shuffle(cells)
    for cell in cells:
        if square.filled_count >= fill_goal * n * n:
            break
        options = candidate_tuples(square, cell)
        if options:
            square = square.insert(cell, rng.choice(options))
    return square


@st.composite
def square_with_empty_cell(draw, **kwargs):
    square = draw(partial_squares(**kwargs))
    empties = list(square.empty_cells())
    if not empties:
        square = square.remove(next(iter(square.cells)))
        empties = list(square.empty_cells())
    return square, empties[draw(st.integers(0, len(empties) - 1))]


# -- fixtures ------------------------------------------------------------------


@pytest.fixture(scope="session")
def golden():
    from mopls import from_text_grid

    return {
        name: from_text_grid((DATA / f"{name}.txt").read_text())
        for name in ("mpls_6", "mpls_7", "mopls_9", "mopls3_16")
    }
