"""Counting bounds, empty-cell transversals, and structure recovery.

The central fact checked here: a maximal two-layer square with F filled
cells, minimum frequency m (over rows, columns and both entry layers),
and a largest empty-cell transversal of size t in the region avoiding
the minimum-frequency coordinate satisfies

    F >= ceil((n-m-t)^2 / 2 + (n-3m)^2 / 6 + n^2 / 3),

which in particular forces F >= ceil(n^2 / 3).  The verifiers locate m
and t for a concrete square and evaluate the inequality; the structure
verifiers check that squares attaining ceil(n^2 / 3) (respectively
ceil(n^2 / 2) for one layer) decompose into full diagonal blocks of the
predicted near-equal orders.

Maximality is not re-tested inside the structure verifiers: once a
square is confirmed to consist of B complete blocks on disjoint index
ranges covering all rows, columns and symbols, every cross-block cell is
blocked whenever B <= k + 1, which holds for both verified shapes.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import ceil

from .core import Cell, KPartialSquare, SquareError
from .maximality import is_maximal


def lower_bound(n: int) -> int:
    """Least possible fill of a maximal two-layer square of order n."""
    return ceil(n * n / 3)


def inequality_rhs(n: int, m: int, t: int) -> int:
    """Fill forced by minimum frequency m and empty-transversal size t.

    Requires 0 <= m <= n and 0 <= t <= n - m (the transversal lives in
    an (n-m) x (n-m) region).
    """
    if not 0 <= m <= n:
        raise ValueError(f"minimum frequency m={m} outside 0..{n}")
    if not 0 <= t <= n - m:
        raise ValueError(f"transversal size t={t} outside 0..{n - m}")
    return ceil((3 * (n - m - t) ** 2 + (n - 3 * m) ** 2 + 2 * n * n) / 6)


# -- bipartite matching on empty cells -----------------------------------------


def _max_matching(adj: list[list[int]], n_right: int) -> tuple[list[int], list[int]]:
    """Augmenting-path matching; returns (match_left, match_right), -1 if free."""
    match_left = [-1] * len(adj)
    match_right = [-1] * n_right

    def augment(u: int, visited: list[bool]) -> bool:
        for v in adj[u]:
            if visited[v]:
                continue
            visited[v] = True
            if match_right[v] == -1 or augment(match_right[v], visited):
                match_left[u] = v
                match_right[v] = u
                return True
        return False

    for u in range(len(adj)):
        augment(u, [False] * n_right)
    return match_left, match_right


def _min_cover(
    adj: list[list[int]], match_left: list[int], match_right: list[int]
) -> tuple[list[int], list[int]]:
    """Minimum vertex cover from a maximum matching.

    Alternating reachability from unmatched left vertices; the cover is
    the unreached left side plus the reached right side, and its size
    equals the matching size, certifying both as optimal.
    """
    visited_left = [False] * len(adj)
    visited_right = [False] * len(match_right)
    stack = [u for u in range(len(adj)) if match_left[u] == -1]
    for u in stack:
        visited_left[u] = True
    while stack:
        u = stack.pop()
        for v in adj[u]:
            if visited_right[v]:
                continue
            visited_right[v] = True
            w = match_right[v]
            if w != -1 and not visited_left[w]:
                visited_left[w] = True
                stack.append(w)
    cover_left = [u for u in range(len(adj)) if not visited_left[u]]
    cover_right = [v for v in range(len(match_right)) if visited_right[v]]
    return cover_left, cover_right


@dataclass(frozen=True)
class TransversalReport:
    """A maximum empty-cell transversal with a matching-size cover certificate.

    ``matching`` lists t empty cells, no two sharing a row or column;
    every empty cell of the region touches ``cover_rows`` or
    ``cover_cols``, and the cover has exactly t vertices, so no larger
    transversal exists.  All indices are absolute (square coordinates).
    """

    rows: tuple[int, ...]
    cols: tuple[int, ...]
    size: int
    matching: tuple[Cell, ...]
    cover_rows: tuple[int, ...]
    cover_cols: tuple[int, ...]


def max_empty_transversal(
    square: KPartialSquare, rows: "list[int] | tuple[int, ...]", cols: "list[int] | tuple[int, ...]"
) -> TransversalReport:
    """Largest set of empty cells in rows x cols, one per row and column."""
    rows = tuple(rows)
    cols = tuple(cols)
    if len(rows) != len(cols):
        raise ValueError(f"region must be square, got {len(rows)} rows x {len(cols)} cols")
    for idx in (*rows, *cols):
        if not 0 <= idx < square.n:
            raise ValueError(f"index {idx} outside 0..{square.n - 1}")
    if len(set(rows)) != len(rows) or len(set(cols)) != len(cols):
        raise ValueError("region rows and cols must be distinct")
    d = len(rows)
    adj = [
        [cj for cj, c in enumerate(cols) if not square.is_filled((r, c))]
        for r in rows
    ]
    match_left, match_right = _max_matching(adj, d)
    cover_left, cover_right = _min_cover(adj, match_left, match_right)
    matching = tuple(
        (rows[u], cols[v]) for u, v in enumerate(match_left) if v != -1
    )
    assert len(cover_left) + len(cover_right) == len(matching)
    cover_l, cover_r = set(cover_left), set(cover_right)
    for u in range(d):
        for v in adj[u]:
            # every empty cell must touch the cover, sealing optimality
            assert u in cover_l or v in cover_r
    return TransversalReport(
        rows=rows,
        cols=cols,
        size=len(matching),
        matching=matching,
        cover_rows=tuple(rows[u] for u in cover_left),
        cover_cols=tuple(cols[v] for v in cover_right),
    )


@dataclass(frozen=True)
class Lemma2Report:
    """Diagonalized view of a region and its forced-fill consequences.

    After reordering so the maximum empty transversal occupies the first
    t diagonal positions: ``residual_filled`` says positions t..d-1 form
    a fully filled subarray, and ``freq_ok`` says every residual (i, j)
    has in-region row plus column fill at least 2d - t.
    """

    ok: bool
    d: int
    t: int
    row_order: tuple[int, ...]
    col_order: tuple[int, ...]
    residual_filled: bool
    freq_ok: bool


def check_lemma2(
    square: KPartialSquare, rows: "list[int] | tuple[int, ...]", cols: "list[int] | tuple[int, ...]"
) -> Lemma2Report:
    """Check the forced-fill property of a d x d region of any square.

    This holds for every array whatsoever, so a False result indicates a
    bug in the matching code rather than an interesting input.
    """
    report = max_empty_transversal(square, rows, cols)
    t, d = report.size, len(report.rows)
    matched_rows = [r for r, _ in report.matching]
    matched_cols = [c for _, c in report.matching]
    row_order = tuple(matched_rows + [r for r in report.rows if r not in set(matched_rows)])
    col_order = tuple(matched_cols + [c for c in report.cols if c not in set(matched_cols)])
    col_set = set(report.cols)
    row_set = set(report.rows)
    f_row = {
        r: sum(1 for c in col_set if square.is_filled((r, c))) for r in report.rows
    }
    f_col = {
        c: sum(1 for r in row_set if square.is_filled((r, c))) for c in report.cols
    }
    residual_filled = all(
        square.is_filled((row_order[i], col_order[j]))
        for i in range(t, d)
        for j in range(t, d)
    )
    freq_ok = all(
        f_row[row_order[i]] + f_col[col_order[j]] >= 2 * d - t
        for i in range(t, d)
        for j in range(t, d)
    )
    return Lemma2Report(
        ok=residual_filled and freq_ok,
        d=d,
        t=t,
        row_order=row_order,
        col_order=col_order,
        residual_filled=residual_filled,
        freq_ok=freq_ok,
    )


# -- the fill inequality on concrete squares --------------------------------------


def _family_name(coord: int, k: int) -> str:
    if coord == 0:
        return "row"
    if coord == 1:
        return "col"
    return f"layer{coord - 1}"


def locate_min_frequency(square: KPartialSquare) -> tuple[int, int, int]:
    """(coordinate family, index, count) of the least-frequent coordinate.

    Families are scanned in word order (row, col, then entry layers) and
    ties go to the earliest family, then the least index.
    """
    freq = square.frequencies()
    families = [freq.row_counts, freq.col_counts, *freq.layer_counts]
    best = (0, 0, families[0][0])
    for fam, counts in enumerate(families):
        for idx, count in enumerate(counts):
            if count < best[2]:
                best = (fam, idx, count)
    return best


@dataclass(frozen=True)
class BoundReport:
    """Evaluation of the fill inequality on one maximal square."""

    n: int
    filled: int
    min_frequency: int
    family: str
    index: int
    transversal: int
    required: int
    ok: bool
    tight: bool
    attains_lower_bound: bool


def verify_bound(square: KPartialSquare) -> BoundReport:
    """Locate (m, t) for a maximal two-layer square and check the inequality.

    The minimum frequency may sit in any of the four coordinate families;
    the square is conjugated so that family plays the first-entry role,
    which changes nothing about validity, maximality or fill.  The region
    searched for the empty transversal is the complement of the rows and
    columns containing the minimum-frequency first entry.
    """
    if square.k != 2:
        raise SquareError(f"fill inequality applies to two layers, got k={square.k}")
    if not is_maximal(square):
        raise SquareError("fill inequality applies to maximal squares only")
    n = square.n
    fam, idx, m = locate_min_frequency(square)
    swap_to_first_entry = {
        0: (2, 1, 0, 3),
        1: (0, 2, 1, 3),
        2: (0, 1, 2, 3),
        3: (0, 1, 3, 2),
    }[fam]
    conj = square.conjugate(swap_to_first_entry)
    rows_with = {r for (r, _), entries in conj.cells.items() if entries[0] == idx}
    cols_with = {c for (_, c), entries in conj.cells.items() if entries[0] == idx}
    assert len(rows_with) == len(cols_with) == m
    region_rows = sorted(set(range(n)) - rows_with)
    region_cols = sorted(set(range(n)) - cols_with)
    t = max_empty_transversal(conj, region_rows, region_cols).size
    required = inequality_rhs(n, m, t)
    filled = square.filled_count
    return BoundReport(
        n=n,
        filled=filled,
        min_frequency=m,
        family=_family_name(fam, square.k),
        index=idx,
        transversal=t,
        required=required,
        ok=filled >= required,
        tight=filled == required,
        attains_lower_bound=filled == lower_bound(n),
    )


# -- block structure recovery ------------------------------------------------------


@dataclass(frozen=True)
class StructureReport:
    """Result of recovering a full block-diagonal decomposition.

    When ok, ``canonical`` is the relabeled square whose blocks occupy
    consecutive diagonal ranges in ascending size order, and the three
    permutation fields map original indices to canonical ones.
    """

    ok: bool
    reason: str | None
    n: int
    k: int
    block_orders: tuple[int, ...] | None
    row_perm: tuple[int, ...] | None
    col_perm: tuple[int, ...] | None
    layer_perms: tuple[tuple[int, ...], ...] | None
    canonical: KPartialSquare | None
    note: str | None = None


def _fail(square: KPartialSquare, reason: str, note: str | None = None) -> StructureReport:
    return StructureReport(
        ok=False, reason=reason, n=square.n, k=square.k,
        block_orders=None, row_perm=None, col_perm=None, layer_perms=None,
        canonical=None, note=note,
    )


def _recover_blocks(square: KPartialSquare) -> list[set[int]]:
    """Row classes under 'shares a symbol in some layer', via union-find."""
    n = square.n
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x: int, y: int) -> None:
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[rx] = ry

    seen: dict[tuple[int, int], int] = {}
    for (r, _), entries in square.cells.items():
        for j, e in enumerate(entries):
            key = (j, e)
            if key in seen:
                union(seen[key], r)
            else:
                seen[key] = r
    groups: dict[int, set[int]] = {}
    for r in range(n):
        if any(square.is_filled((r, c)) for c in range(n)):
            groups.setdefault(find(r), set()).add(r)
    return sorted(groups.values(), key=lambda g: (len(g), min(g)))


def _verify_block_structure(
    square: KPartialSquare, expected_orders: tuple[int, ...], note: str | None
) -> StructureReport:
    n, k = square.n, square.k
    blocks = _recover_blocks(square)
    if len(blocks) != len(expected_orders):
        return _fail(
            square,
            f"expected {len(expected_orders)} blocks, found {len(blocks)} row classes",
            note,
        )
    row_sets = blocks
    col_sets: list[set[int]] = []
    sym_sets: list[list[set[int]]] = []  # per block, per layer
    for rows in row_sets:
        cols: set[int] = set()
        syms: list[set[int]] = [set() for _ in range(k)]
        count = 0
        for (r, c), entries in square.cells.items():
            if r in rows:
                cols.add(c)
                count += 1
                for j, e in enumerate(entries):
                    syms[j].add(e)
        m = len(rows)
        if len(cols) != m or any(len(s) != m for s in syms):
            return _fail(
                square,
                f"block with rows {sorted(rows)} touches {len(cols)} cols and "
                f"{[len(s) for s in syms]} symbols per layer, expected {m} each",
                note,
            )
        if count != m * m:
            return _fail(
                square,
                f"block with rows {sorted(rows)} has {count} filled cells, expected {m * m}",
                note,
            )
        col_sets.append(cols)
        sym_sets.append(syms)
    orders = tuple(len(rows) for rows in row_sets)
    if sorted(orders) != sorted(expected_orders):
        return _fail(square, f"block orders {orders} do not match expected {expected_orders}", note)
    if sum(orders) != n:
        return _fail(square, f"block orders {orders} do not cover all {n} rows", note)
    for family_sets in (col_sets, *[[s[j] for s in sym_sets] for j in range(k)]):
        combined: set[int] = set()
        for s in family_sets:
            if combined & s:
                return _fail(square, "blocks overlap in columns or symbols", note)
            combined |= s
    # build canonical relabeling: ascending blocks onto consecutive ranges
    row_perm = [0] * n
    col_perm = [0] * n
    layer_perms = [[0] * n for _ in range(k)]
    offset = 0
    for b, rows in enumerate(row_sets):
        for pos, r in enumerate(sorted(rows)):
            row_perm[r] = offset + pos
        for pos, c in enumerate(sorted(col_sets[b])):
            col_perm[c] = offset + pos
        for j in range(k):
            for pos, s in enumerate(sorted(sym_sets[b][j])):
                layer_perms[j][s] = offset + pos
        offset += len(rows)
    canonical = square.relabel(row_perm, col_perm, [tuple(p) for p in layer_perms])
    # exhaustive recheck in canonical coordinates
    offset = 0
    for m in orders:
        for r in range(offset, offset + m):
            for c in range(offset, offset + m):
                entries = canonical.entries_at((r, c))
                if entries is None or any(not offset <= e < offset + m for e in entries):
                    return _fail(square, "canonical form fails the diagonal block recheck", note)
        offset += m
    assert canonical.filled_count == sum(m * m for m in orders) == square.filled_count
    return StructureReport(
        ok=True,
        reason=None,
        n=n,
        k=k,
        block_orders=orders,
        row_perm=tuple(row_perm),
        col_perm=tuple(col_perm),
        layer_perms=tuple(tuple(p) for p in layer_perms),
        canonical=canonical,
        note=note,
    )


def verify_hr_structure(square: KPartialSquare) -> StructureReport:
    """Check that a minimum-fill maximal one-layer square splits into two blocks.

    Expects F = ceil(n^2 / 2); the blocks must be complete Latin squares
    of orders floor(n/2) and ceil(n/2) on disjoint rows, columns and
    symbols.
    """
    if square.k != 1:
        raise SquareError(f"this structure check applies to one layer, got k={square.k}")
    n = square.n
    target = ceil(n * n / 2)
    if square.filled_count != target:
        return _fail(square, f"filled={square.filled_count}, minimum squares have {target}")
    expected = (n // 2, n - n // 2) if n > 1 else (1,)
    expected = tuple(m for m in expected if m > 0)
    return _verify_block_structure(square, expected, note=None)


def verify_min_structure(square: KPartialSquare) -> StructureReport:
    """Check that a minimum-fill maximal two-layer square splits into three blocks.

    Expects F = ceil(n^2 / 3); the blocks must be complete orthogonal
    pairs with orders floor(n/3) or floor(n/3) + 1 summing to n, on
    disjoint rows, columns and per-layer symbols.  For n < 21 squares
    this structure is still verified when present, but such small
    maximal squares are not guaranteed to attain the minimum fill, so a
    note is attached.
    """
    if square.k != 2:
        raise SquareError(f"this structure check applies to two layers, got k={square.k}")
    n = square.n
    note = None if n >= 21 else (
        f"n={n} < 21: minimality of fill ceil(n^2/3) is not guaranteed at this order"
    )
    if square.filled_count != lower_bound(n):
        return _fail(
            square,
            f"filled={square.filled_count}, minimum squares have {lower_bound(n)}",
            note,
        )
    s, r = divmod(n, 3)
    expected = {0: (s, s, s), 1: (s, s, s + 1), 2: (s, s + 1, s + 1)}[r]
    expected = tuple(m for m in expected if m > 0)
    return _verify_block_structure(square, expected, note)
