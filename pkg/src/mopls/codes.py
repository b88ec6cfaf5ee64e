"""The filled cells of a square as a code over an n-letter alphabet.

Each filled cell reads as a word (row, col, entry_1, ..., entry_k) of
length k + 2.  Two distinct filled cells agree in at most one coordinate,
so the code has minimum Hamming distance at least k + 1.  A word is a
legal insertion exactly when it is at distance at least k + 1 from every
codeword, so the square is maximal precisely when no such word exists,
i.e. when the covering radius is at most k.

For two layers and n > 3 this sharpens to a biconditional used as the
third independent maximality checker: maximal if and only if the minimum
distance is exactly 3 and the covering radius exactly 2.  (Distance 4
needs every row, column and symbol to appear at most once, and covering
radius 1 forces the unique 9-word perfect configuration at n = 3.)
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .core import KPartialSquare, Word
from .maximality import is_maximal

#: Exhaustive covering-radius scans are limited to this many words.
WORD_SPACE_LIMIT = 10**7


@dataclass(frozen=True)
class Code:
    """A set of equal-length words over {0, ..., alphabet_size - 1}."""

    alphabet_size: int
    length: int
    words: tuple[Word, ...]  # sorted lexicographically

    def __post_init__(self) -> None:
        for w in self.words:
            if len(w) != self.length:
                raise ValueError(f"word {w} has length {len(w)}, expected {self.length}")
            if any(not 0 <= x < self.alphabet_size for x in w):
                raise ValueError(f"word {w} outside alphabet of size {self.alphabet_size}")
        if len(set(self.words)) != len(self.words):
            raise ValueError("duplicate codewords")


def to_code(square: KPartialSquare) -> Code:
    return Code(
        alphabet_size=square.n, length=square.k + 2, words=square.words()
    )


def min_distance(code: Code) -> int:
    """Least Hamming distance between distinct codewords; needs two of them."""
    if len(code.words) < 2:
        raise ValueError(f"minimum distance needs at least 2 codewords, have {len(code.words)}")
    words = np.asarray(code.words, dtype=np.int16)
    total = len(words)
    best = code.length
    for start in range(0, total, 512):
        block = words[start : start + 512]
        dists = (block[:, None, :] != words[None, :, :]).sum(axis=2)
        for offset in range(len(block)):
            dists[offset, start + offset] = code.length + 1  # ignore self
        best = min(best, int(dists.min()))
    return best


def covering_radius(code: Code) -> int:
    """Greatest distance from any word of the full space to the code.

    Exhaustive over all alphabet_size ** length words, computed as a
    Hamming distance transform: starting from 0 at codewords, repeatedly
    relax each coordinate axis (one substitution costs 1) until no cell
    improves.  One ascending pass already reaches the fixpoint because
    substitutions can be applied in axis order; extra passes just verify.
    """
    if not code.words:
        raise ValueError("covering radius of an empty code is undefined")
    n, length = code.alphabet_size, code.length
    space = n**length
    if space > WORD_SPACE_LIMIT:
        raise ValueError(
            f"word space {n}^{length} = {space} exceeds the scan limit {WORD_SPACE_LIMIT}"
        )
    unreached = length + 1  # larger than any true distance
    dist = np.full((n,) * length, unreached, dtype=np.int16)
    index = tuple(np.fromiter((w[p] for w in code.words), dtype=np.int64) for p in range(length))
    dist[index] = 0
    for _ in range(length + 1):
        changed = False
        for axis in range(length):
            relaxed = dist.min(axis=axis, keepdims=True) + np.int16(1)
            improved = relaxed < dist
            if improved.any():
                changed = True
                dist = np.where(improved, np.broadcast_to(relaxed, dist.shape), dist)
        if not changed:
            break
    else:
        raise AssertionError("distance transform failed to converge")
    radius = int(dist.max())
    assert radius <= length
    return radius


def radius_within(code: Code, limit: int) -> bool:
    return covering_radius(code) <= limit


@dataclass(frozen=True)
class CodeReport:
    """Code parameters of a square next to its directly computed maximality.

    ``consistent`` applies the rule matching the square's shape: for two
    layers above order 3, maximality must coincide with (distance 3,
    radius 2); otherwise maximality must imply radius at most k.
    """

    n: int
    k: int
    size: int
    length: int
    min_distance: int | None
    covering_radius: int
    maximal: bool
    rule: str
    consistent: bool


def check_code_equivalence(square: KPartialSquare) -> CodeReport:
    code = to_code(square)
    maximal = is_maximal(square)
    md = min_distance(code) if len(code.words) >= 2 else None
    radius = covering_radius(code)
    if square.k == 2 and square.n > 3:
        rule = "maximal iff distance 3 and radius 2"
        consistent = maximal == (md == 3 and radius == 2)
    else:
        rule = f"maximal implies radius <= {square.k}"
        consistent = (not maximal) or radius <= square.k
    return CodeReport(
        n=square.n,
        k=square.k,
        size=len(code.words),
        length=code.length,
        min_distance=md,
        covering_radius=radius,
        maximal=maximal,
        rule=rule,
        consistent=consistent,
    )


def code_to_json(code: Code) -> str:
    doc = {
        "format": "code",
        "version": 1,
        "alphabet_size": code.alphabet_size,
        "length": code.length,
        "size": len(code.words),
        "words": [list(w) for w in code.words],
    }
    return json.dumps(doc, indent=2) + "\n"
