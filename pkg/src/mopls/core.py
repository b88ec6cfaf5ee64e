"""Core types for k-layer orthogonal partial Latin squares.

A partial Latin square (PLS) of order n is an n x n array over the symbol
set {0, ..., n-1} in which each symbol occurs at most once in every row
and at most once in every column; cells may be empty.  Superimposing k
partial Latin squares that share the same filled cells gives a k-layer
square: each filled cell holds an ordered k-tuple of entries, and any two
filled cells, read as (row, column, entry_1, ..., entry_k) word tuples,
must agree in at most one coordinate position.

For k = 2 the word condition is exactly classical orthogonality (no
ordered entry pair occurs in two cells) together with per-layer
Latin-ness; for k = 1 it degenerates to plain Latin-ness.  Because the
layers are stored superimposed, the "same filled cells" requirement of
the two-square presentation holds by construction.

Squares are value-like: ``insert`` and ``remove`` return new squares and
never mutate their input, so instances can be shared freely across
threads or worker processes.

Indices and symbols are 0-based throughout the API.  The text-grid format
in :mod:`mopls.formats` is 1-based, matching the usual printed form.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

Cell = tuple[int, int]
EntryTuple = tuple[int, ...]
#: A filled cell flattened to (row, col, entry_1, ..., entry_k).
Word = tuple[int, ...]


class SquareError(ValueError):
    """An invalid square, or an edit that would make one."""


class CellOccupiedError(SquareError):
    """Insertion into a cell that is already filled."""


class LatinConflictError(SquareError):
    """A symbol would repeat within a row or column of some layer."""


class OrthogonalityConflictError(SquareError):
    """Two words would agree in two or more coordinate positions."""


def agreement_positions(a: Word, b: Word) -> tuple[int, ...]:
    """Coordinate positions where two equal-length words agree."""
    return tuple(i for i, (x, y) in enumerate(zip(a, b)) if x == y)


@dataclass(frozen=True)
class Violation:
    """One violated pairwise constraint, naming the offending cells.

    ``kind`` is one of ``latin-row``, ``latin-col``, ``orthogonality`` or
    ``range``; ``coords`` lists the agreeing word coordinates (empty for
    range violations).
    """

    kind: str
    cells: tuple[Cell, ...]
    coords: tuple[int, ...]
    message: str


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    violations: tuple[Violation, ...]

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class FrequencyProfile:
    """Fill counts of a square.

    ``filled`` is the total number of filled cells; ``row_counts`` and
    ``col_counts`` give filled cells per row/column; ``layer_counts[j][s]``
    counts occurrences of symbol ``s`` in layer ``j``; ``minimum`` is the
    least value over all k+2 frequency families.  The minimum never
    exceeds the mean ``filled / n``.
    """

    filled: int
    row_counts: tuple[int, ...]
    col_counts: tuple[int, ...]
    layer_counts: tuple[tuple[int, ...], ...]
    minimum: int


def _classify(w1: Word, w2: Word, c1: Cell, c2: Cell, coords: tuple[int, ...]) -> Violation:
    # coords has >= 2 entries; cells are distinct so 0 and 1 cannot both agree
    if 0 in coords:
        layers = [i - 1 for i in coords if i >= 2]
        return Violation(
            "latin-row", (c1, c2), coords,
            f"row {w1[0]}: layer {layers[0] + 1} repeats symbol {w1[coords[-1]]} "
            f"in cells {c1} and {c2}",
        )
    if 1 in coords:
        layers = [i - 1 for i in coords if i >= 2]
        return Violation(
            "latin-col", (c1, c2), coords,
            f"column {w1[1]}: layer {layers[0] + 1} repeats symbol {w1[coords[-1]]} "
            f"in cells {c1} and {c2}",
        )
    return Violation(
        "orthogonality", (c1, c2), coords,
        f"cells {c1} and {c2} agree in entry coordinates {coords}",
    )


class KPartialSquare:
    """An order-n array whose filled cells hold k-tuples of entries.

    Invariants (checked by :meth:`validate`, preserved by :meth:`insert`):

    * per layer, every symbol occurs at most once in each row and column;
    * any two filled cells' (row, col, entries...) words agree in at most
      one coordinate position.
    """

    __slots__ = ("n", "k", "_cells")

    def __init__(self, n: int, k: int, cells: Mapping[Cell, EntryTuple] | None = None):
        if n < 1:
            raise SquareError(f"order must be positive, got n={n}")
        if k < 1:
            raise SquareError(f"layer count must be positive, got k={k}")
        self.n = n
        self.k = k
        self._cells: dict[Cell, EntryTuple] = dict(cells) if cells else {}

    # -- construction ------------------------------------------------

    @classmethod
    def empty(cls, n: int, k: int) -> "KPartialSquare":
        return cls(n, k)

    @classmethod
    def from_cells(cls, n: int, k: int, cells: Mapping[Cell, EntryTuple]) -> "KPartialSquare":
        """Build and validate a square from a cell map; raises on invalid input."""
        square = cls(n, k, {tuple(c): tuple(e) for c, e in cells.items()})
        report = square.validate()
        if not report.ok:
            first = report.violations[0]
            exc = {
                "latin-row": LatinConflictError,
                "latin-col": LatinConflictError,
                "orthogonality": OrthogonalityConflictError,
            }.get(first.kind, SquareError)
            raise exc(first.message)
        return square

    @classmethod
    def from_words(cls, n: int, k: int, words: Iterable[Word]) -> "KPartialSquare":
        """Build and validate a square from (row, col, entries...) words."""
        cells: dict[Cell, EntryTuple] = {}
        for w in words:
            w = tuple(w)
            if len(w) != k + 2:
                raise SquareError(f"word {w} has length {len(w)}, expected {k + 2}")
            cell = (w[0], w[1])
            if cell in cells:
                raise SquareError(f"two words share cell {cell}")
            cells[cell] = w[2:]
        return cls.from_cells(n, k, cells)

    # -- read access -------------------------------------------------

    @property
    def cells(self) -> Mapping[Cell, EntryTuple]:
        """The filled-cell map.  Treat as read-only."""
        return self._cells

    @property
    def filled_count(self) -> int:
        return len(self._cells)

    def entries_at(self, cell: Cell) -> EntryTuple | None:
        return self._cells.get(cell)

    def is_filled(self, cell: Cell) -> bool:
        return cell in self._cells

    def empty_cells(self) -> Iterator[Cell]:
        """Empty cells in row-major order."""
        for r in range(self.n):
            for c in range(self.n):
                if (r, c) not in self._cells:
                    yield (r, c)

    def words(self) -> tuple[Word, ...]:
        """All filled cells as sorted (row, col, entries...) words."""
        return tuple(sorted((r, c) + e for (r, c), e in self._cells.items()))

    def word_at(self, cell: Cell) -> Word:
        entries = self._cells.get(cell)
        if entries is None:
            raise SquareError(f"cell {cell} is empty, it has no word")
        return cell + entries

    # -- edits (value-like: return new squares) ------------------------

    def insert(self, cell: Cell, entries: EntryTuple) -> "KPartialSquare":
        """Return a new square with ``entries`` placed at ``cell``.

        Raises :class:`CellOccupiedError`, :class:`LatinConflictError` or
        :class:`OrthogonalityConflictError` when the insertion would break
        an invariant.
        """
        cell = (int(cell[0]), int(cell[1]))
        entries = tuple(int(e) for e in entries)
        self._check_cell(cell)
        self._check_entries(entries)
        if cell in self._cells:
            raise CellOccupiedError(f"cell {cell} is already filled")
        new_word = cell + entries
        for other_cell, other_entries in self._cells.items():
            other = other_cell + other_entries
            coords = agreement_positions(new_word, other)
            if len(coords) >= 2:
                v = _classify(new_word, other, cell, other_cell, coords)
                exc = LatinConflictError if v.kind.startswith("latin") else OrthogonalityConflictError
                raise exc(v.message)
        updated = dict(self._cells)
        updated[cell] = entries
        return KPartialSquare(self.n, self.k, updated)

    def remove(self, cell: Cell) -> "KPartialSquare":
        """Return a new square with ``cell`` emptied (inverse of insert)."""
        if cell not in self._cells:
            raise SquareError(f"cell {cell} is empty, nothing to remove")
        updated = dict(self._cells)
        del updated[cell]
        return KPartialSquare(self.n, self.k, updated)

    def relabel(
        self,
        row_perm: "list[int] | tuple[int, ...] | None" = None,
        col_perm: "list[int] | tuple[int, ...] | None" = None,
        layer_perms: "list[list[int] | tuple[int, ...]] | None" = None,
    ) -> "KPartialSquare":
        """Permute rows, columns, and symbols independently per layer.

        Each permutation maps old index to new (``perm[old] == new``);
        None leaves that family unchanged.  These relabelings preserve
        both invariants and maximality, so the result skips revalidation.
        """
        n, k = self.n, self.k
        ident = tuple(range(n))
        rp = tuple(row_perm) if row_perm is not None else ident
        cp = tuple(col_perm) if col_perm is not None else ident
        if layer_perms is None:
            lps = [ident] * k
        else:
            if len(layer_perms) != k:
                raise SquareError(f"need {k} layer permutations, got {len(layer_perms)}")
            lps = [tuple(p) for p in layer_perms]
        for p in (rp, cp, *lps):
            if sorted(p) != list(range(n)):
                raise SquareError(f"{p} is not a permutation of 0..{n - 1}")
        cells = {
            (rp[r], cp[c]): tuple(lps[j][e] for j, e in enumerate(entries))
            for (r, c), entries in self._cells.items()
        }
        return KPartialSquare(n, k, cells)

    def conjugate(self, coord_order: tuple[int, ...]) -> "KPartialSquare":
        """Permute the k+2 coordinate roles of every word.

        ``coord_order[i]`` names the old coordinate that becomes new
        coordinate ``i``.  Rows, columns and entry layers have equal
        status under the word-agreement condition, so any conjugate of a
        valid square is valid (and maximality is preserved).
        """
        if sorted(coord_order) != list(range(self.k + 2)):
            raise SquareError(f"coord_order must permute 0..{self.k + 1}, got {coord_order}")
        cells: dict[Cell, EntryTuple] = {}
        for w in self.words():
            new = tuple(w[i] for i in coord_order)
            cell = (new[0], new[1])
            if cell in cells:
                # two words mapping to one cell means the input was invalid
                raise SquareError(f"conjugate collapses two words onto cell {cell}")
            cells[cell] = new[2:]
        return KPartialSquare(self.n, self.k, cells)

    # -- validation and accounting -------------------------------------

    def _check_cell(self, cell: Cell) -> None:
        r, c = cell
        if not (0 <= r < self.n and 0 <= c < self.n):
            raise SquareError(f"cell {cell} outside [0, {self.n}) x [0, {self.n})")

    def _check_entries(self, entries: EntryTuple) -> None:
        if len(entries) != self.k:
            raise SquareError(f"entry tuple {entries} has length {len(entries)}, expected k={self.k}")
        for e in entries:
            if not (0 <= e < self.n):
                raise SquareError(f"entry {e} outside symbol range [0, {self.n})")

    def validate(self) -> ValidationReport:
        """Check both invariants; report-valued, never raises."""
        violations: list[Violation] = []
        for (r, c), entries in self._cells.items():
            if not (0 <= r < self.n and 0 <= c < self.n) or len(entries) != self.k or any(
                not (0 <= e < self.n) for e in entries
            ):
                violations.append(
                    Violation("range", ((r, c),), (), f"cell ({r}, {c}) -> {entries} out of range")
                )
        words = [(cell + e, cell) for cell, e in self._cells.items()]
        words.sort()
        for i in range(len(words)):
            wi, ci = words[i]
            for j in range(i + 1, len(words)):
                wj, cj = words[j]
                coords = agreement_positions(wi, wj)
                if len(coords) >= 2:
                    violations.append(_classify(wi, wj, ci, cj, coords))
        return ValidationReport(ok=not violations, violations=tuple(violations))

    def frequencies(self) -> FrequencyProfile:
        """Row, column and per-layer symbol frequencies with their minimum."""
        n, k = self.n, self.k
        row_counts = [0] * n
        col_counts = [0] * n
        layer_counts = [[0] * n for _ in range(k)]
        for (r, c), entries in self._cells.items():
            row_counts[r] += 1
            col_counts[c] += 1
            for j, e in enumerate(entries):
                layer_counts[j][e] += 1
        minimum = min(
            min(row_counts), min(col_counts), min(min(lc) for lc in layer_counts)
        )
        return FrequencyProfile(
            filled=len(self._cells),
            row_counts=tuple(row_counts),
            col_counts=tuple(col_counts),
            layer_counts=tuple(tuple(lc) for lc in layer_counts),
            minimum=minimum,
        )

    # -- dunder plumbing ----------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, KPartialSquare):
            return NotImplemented
        return (self.n, self.k, self._cells) == (other.n, other.k, other._cells)

    def __hash__(self) -> int:
        return hash((self.n, self.k, frozenset(self._cells.items())))

    def __repr__(self) -> str:
        return f"KPartialSquare(n={self.n}, k={self.k}, filled={len(self._cells)})"


def new_empty(n: int, k: int) -> KPartialSquare:
    """Order-n square with k entry layers and no filled cells."""
    return KPartialSquare.empty(n, k)
