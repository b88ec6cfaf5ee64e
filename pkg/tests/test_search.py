"""Tests for canonical forms and the exhaustive minimum-size search."""

import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import oracle_is_maximal, partial_squares
from mopls.core import KPartialSquare, SquareError
from mopls.maximality import is_maximal
from mopls.search import (
    canonical_form,
    is_canonical,
    min_maximal,
    verify_bound_exhaustive,
)


# -- canonical forms ----------------------------------------------------------------


def test_empty_word_list_is_canonical():
    assert is_canonical([]) is True
    assert canonical_form([]) == ()


def test_single_word_canonicalizes_to_zeros():
    assert canonical_form([(1, 1, 1, 1)]) == ((0, 0, 0, 0),)
    assert is_canonical([(1, 1, 1, 1)]) is False
    assert is_canonical([(0, 0, 0, 0)]) is True


@settings(max_examples=25)
@given(partial_squares(min_n=1, max_n=4, ks=(1, 2)))
def test_canonical_form_is_a_fixed_point(square):
    canon = canonical_form(square.words())
    assert is_canonical(canon)
    assert canonical_form(canon) == canon
    assert len(canon) == square.filled_count
    assert list(canon) == sorted(canon)
    if canon:
        assert canon[0] == (0,) * (square.k + 2)


@settings(max_examples=25)
@given(partial_squares(min_n=2, max_n=4, ks=(1, 2)), st.data())
def test_canonical_form_is_relabel_invariant(square, data):
    n = square.n
    perms = [
        data.draw(st.permutations(list(range(n))))
        for _ in range(square.k + 2)
    ]
    shuffled = square.relabel(perms[0], perms[1], perms[2:])
    assert canonical_form(shuffled.words()) == canonical_form(square.words())


def test_canonical_square_stays_canonical_after_largest_word_removed():
    result = verify_bound_exhaustive(3, 2)
    for witness in result.minimum_witnesses:
        words = list(witness.words())
        assert is_canonical(words)
        assert is_canonical(words[:-1])


# -- minimum maximal size -----------------------------------------------------------


def test_min_maximal_order_two():
    result = min_maximal(2)
    assert result.min_size == 2
    assert result.exact is True
    assert result.no_maximal_below == 2
    assert result.levels_completed == 2
    assert result.nodes == 6
    assert result.witness.filled_count == 2
    assert is_maximal(result.witness)


def test_min_maximal_order_three():
    result = min_maximal(3)
    assert result.min_size == 3
    assert result.exact is True
    assert result.nodes == 25
    assert is_maximal(result.witness)
    assert is_canonical(result.witness.words())


def test_min_maximal_single_layer():
    result = min_maximal(2, k=1)
    assert result.min_size == 2
    assert result.nodes == 5


def test_budget_interrupt_reports_partial_progress():
    result = min_maximal(3, budget=4)
    assert result.exhausted_budget is True
    assert result.exact is False
    assert result.min_size is None and result.witness is None
    assert result.no_maximal_below == result.levels_completed + 1
    assert result.budget == 4


def test_zero_budget_proves_nothing():
    result = min_maximal(3, budget=0)
    assert result.exhausted_budget is True
    assert result.levels_completed == 0
    assert result.no_maximal_below == 1


def test_generous_budget_matches_unbudgeted_run():
    capped = min_maximal(3, budget=10**6)
    free = min_maximal(3)
    assert capped.exhausted_budget is False
    assert (capped.min_size, capped.nodes, capped.levels_completed) == (
        free.min_size,
        free.nodes,
        free.levels_completed,
    )


def test_checkpoint_resume_completes_an_interrupted_run(tmp_path):
    cp = tmp_path / "level.json"
    partial = min_maximal(3, budget=4, checkpoint=cp)
    assert partial.exhausted_budget and cp.exists()
    resumed = min_maximal(3, checkpoint=cp, resume=True)
    fresh = min_maximal(3)
    assert resumed.min_size == fresh.min_size == 3
    assert resumed.nodes == fresh.nodes
    assert resumed.levels_completed == fresh.levels_completed
    assert is_maximal(resumed.witness)


def test_resume_requires_an_existing_checkpoint(tmp_path):
    with pytest.raises(SquareError):
        min_maximal(3, checkpoint=tmp_path / "missing.json", resume=True)
    with pytest.raises(SquareError):
        min_maximal(3, resume=True)


def test_resume_rejects_mismatched_checkpoint(tmp_path):
    cp = tmp_path / "level.json"
    min_maximal(3, budget=4, checkpoint=cp)
    with pytest.raises(SquareError):
        min_maximal(2, checkpoint=cp, resume=True)


def test_resume_rejects_unknown_checkpoint_version(tmp_path):
    cp = tmp_path / "level.json"
    min_maximal(3, budget=4, checkpoint=cp)
    doc = json.loads(cp.read_text())
    doc["version"] = 99
    cp.write_text(json.dumps(doc))
    with pytest.raises(SquareError):
        min_maximal(3, checkpoint=cp, resume=True)


# -- exhaustive census --------------------------------------------------------------


def test_census_order_two():
    report = verify_bound_exhaustive(2, 2)
    assert report.histogram == {2: 5}
    assert report.min_size == 2
    assert len(report.minimum_witnesses) == 5
    assert report.all_satisfy_bound is True
    assert report.tight_uniform_frequency is None
    assert report.nodes == 6


def test_census_order_three():
    report = verify_bound_exhaustive(3, 2)
    assert report.histogram == {3: 1, 6: 5, 9: 1}
    assert report.min_size == 3
    assert len(report.minimum_witnesses) == 1
    assert report.all_satisfy_bound is True
    assert report.tight_uniform_frequency is True
    assert report.nodes == 113


def test_census_single_layer_order_two():
    report = verify_bound_exhaustive(2, 1)
    assert report.histogram == {2: 1, 4: 1}
    assert report.min_size == 2
    assert report.tight_uniform_frequency is None


def test_census_witnesses_are_canonical_maximal_and_distinct():
    report = verify_bound_exhaustive(3, 2)
    seen = set()
    for witness in report.minimum_witnesses:
        assert witness.filled_count == report.min_size
        assert oracle_is_maximal(witness)
        assert is_canonical(witness.words())
        assert witness.words() not in seen
        seen.add(witness.words())


def test_census_minimum_agrees_with_the_ascending_search():
    for n in (2, 3):
        assert verify_bound_exhaustive(n, 2).min_size == min_maximal(n, 2).min_size


def test_census_triple_witness_is_a_diagonal_of_singletons():
    report = verify_bound_exhaustive(3, 2)
    witness = report.minimum_witnesses[0]
    freq = witness.frequencies()
    assert set(freq.row_counts) == {1}
    assert set(freq.col_counts) == {1}
    assert all(set(counts) == {1} for counts in freq.layer_counts)
