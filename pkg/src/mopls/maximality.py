"""Extension candidates, maximality testing, and greedy completion.

A square is maximal when no empty cell admits any entry tuple, i.e.
every insertion attempt would violate a Latin or word-agreement
constraint.  The candidate test at an empty cell (r, c) factors into

* per layer j, the symbol must be unused in row r and column c of that
  layer (rules out a second agreement with any word sharing the row or
  the column), and
* for each layer pair i < j, the ordered pair (e_i, e_j) must not occur
  at any filled cell (rules out two agreements with words sharing
  neither row nor column).

The pair sets also contain pairs coming from cells in the same row or
column, but those can never reject a tuple that passed the Latin
filters: matching such a pair would need e_i equal to a symbol already
used in this row or column at layer i.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from math import ceil

from .core import Cell, EntryTuple, KPartialSquare, SquareError


@dataclass(frozen=True)
class ExtensionWitness:
    """A legal insertion proving a square is not maximal."""

    cell: Cell
    entries: EntryTuple


class _Constraints:
    """Incremental row/column/pair occupancy for candidate queries."""

    __slots__ = ("n", "k", "full", "row_free", "col_free", "pairs")

    def __init__(self, square: KPartialSquare):
        self.n = square.n
        self.k = square.k
        self.full = (1 << square.n) - 1
        # free-symbol bitmask per (row, layer) and (col, layer)
        self.row_free = [[self.full] * square.k for _ in range(square.n)]
        self.col_free = [[self.full] * square.k for _ in range(square.n)]
        self.pairs: dict[tuple[int, int], set[tuple[int, int]]] = {
            (i, j): set() for i in range(square.k) for j in range(i + 1, square.k)
        }
        for cell, entries in square.cells.items():
            self.add(cell, entries)

    def add(self, cell: Cell, entries: EntryTuple) -> None:
        r, c = cell
        for j, e in enumerate(entries):
            bit = 1 << e
            self.row_free[r][j] &= ~bit
            self.col_free[c][j] &= ~bit
        for i in range(self.k):
            for j in range(i + 1, self.k):
                self.pairs[(i, j)].add((entries[i], entries[j]))

    def candidates(self, cell: Cell) -> list[EntryTuple]:
        """All entry tuples legal at an empty cell, lexicographically sorted."""
        r, c = cell
        allowed: list[list[int]] = []
        for j in range(self.k):
            mask = self.row_free[r][j] & self.col_free[c][j]
            if mask == 0:
                return []
            allowed.append([s for s in range(self.n) if (mask >> s) & 1])
        out: list[EntryTuple] = []
        prefix: list[int] = []

        def extend(j: int) -> None:
            if j == self.k:
                out.append(tuple(prefix))
                return
            for s in allowed[j]:
                if all((prefix[i], s) not in self.pairs[(i, j)] for i in range(j)):
                    prefix.append(s)
                    extend(j + 1)
                    prefix.pop()

        extend(0)
        return out


def candidate_tuples(square: KPartialSquare, cell: Cell) -> list[EntryTuple]:
    """Entry tuples insertable at ``cell`` without breaking any constraint."""
    if square.is_filled(cell):
        raise SquareError(f"cell {cell} is filled, candidates are undefined")
    return _Constraints(square).candidates(cell)


def find_extension(square: KPartialSquare) -> ExtensionWitness | None:
    """First legal insertion in row-major cell order, lex-least tuple.

    Returns None exactly when the square is maximal.  Deterministic, so
    repeated calls name the same witness.
    """
    state = _Constraints(square)
    for cell in square.empty_cells():
        cands = state.candidates(cell)
        if cands:
            return ExtensionWitness(cell, cands[0])
    return None


def is_maximal(square: KPartialSquare) -> bool:
    return find_extension(square) is None


def maximalize(
    square: KPartialSquare, policy: str = "lex", seed: int | None = None
) -> KPartialSquare:
    """Extend to a maximal square by greedy insertion.

    ``policy="lex"`` visits empty cells in row-major order and inserts the
    lexicographically least candidate tuple; ``policy="random"`` shuffles
    the cell order and picks candidates uniformly, driven by ``seed``.

    A single pass suffices: insertions only shrink the candidate sets of
    other cells, so a cell seen with no candidates stays uninsertable for
    the rest of the pass.  Already-maximal squares come back unchanged.
    """
    if policy not in ("lex", "random"):
        raise ValueError(f"unknown policy {policy!r}")
    rng = random.Random(seed) if policy == "random" else None
    state = _Constraints(square)
    order = list(square.empty_cells())
    if rng is not None:
        rng.shuffle(order)
    cells = dict(square.cells)
    for cell in order:
        cands = state.candidates(cell)
        if not cands:
            continue
        choice = cands[0] if rng is None else rng.choice(cands)
        cells[cell] = choice
        state.add(cell, choice)
    result = KPartialSquare(square.n, square.k, cells)
    # any maximal pair of orthogonal partial Latin squares fills at least
    # a third of the grid; a failure here means a bug, not bad input
    if square.k == 2:
        assert result.filled_count >= ceil(square.n * square.n / 3)
    return result


def maximalize_many(
    square: KPartialSquare, runs: int, seed: int
) -> list[KPartialSquare]:
    """Independent randomized completions with per-run derived seeds."""
    base = random.Random(seed)
    return [
        maximalize(square, policy="random", seed=base.randrange(2**63))
        for _ in range(runs)
    ]
