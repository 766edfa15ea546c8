import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import grid, perms, squares
from latincanon.latin_core import (
    CONJUGATES,
    DimensionMismatch,
    DuplicateInColumn,
    DuplicateInRow,
    LatinError,
    Order,
    OutOfRange,
    PartialLabelling,
    PartialPermutation,
    ParseError,
    SizeMismatch,
    all_latin_squares,
    apply_isotopism,
    apply_labelling,
    compact,
    conjugate,
    inverse_conjugate,
    lex_compare,
    parse,
    parse_compact,
    serialize,
    validate,
)


def test_validate_accepts_z3(z3):
    assert validate([[1, 2, 3], [2, 3, 1], [3, 1, 2]]) == z3


def test_validate_pinpoints_first_violation():
    with pytest.raises(DuplicateInRow) as e:
        validate([[1, 1], [2, 2]])
    assert e.value.row == 1
    with pytest.raises(DuplicateInColumn) as e:
        validate([[1, 2], [1, 2]])
    assert e.value.col == 1
    with pytest.raises(OutOfRange) as e:
        validate([[1, 2], [2, 3]])
    assert (e.value.row, e.value.col) == (2, 2)


def test_validate_all_2x2_candidates():
    accepted = 0
    for vals in itertools.product(range(1, 4), repeat=4):
        try:
            validate(np.array(vals).reshape(2, 2))
        except LatinError:
            continue
        accepted += 1
    assert accepted == 2


def test_inverse_tables(z4):
    for r, c, s in z4.triples():
        assert z4.row_pos(r, s) == c
        assert z4.col_pos(c, s) == r


def test_apply_labelling_identity_and_empty(z3):
    arr = apply_labelling(z3, PartialLabelling.identity(3))
    assert arr.tolist() == z3.rows() and not arr.has_star()
    empty = apply_labelling(z3, PartialLabelling.empty(3))
    assert empty.k == 0 and empty.cells.shape == (0, 0)


def test_apply_labelling_intercalate(k4):
    a = PartialPermutation((1, 2, 5, 5))
    arr = apply_labelling(k4, PartialLabelling(a, a, a))
    assert arr.tolist() == [[1, 2], [2, 1]]
    assert not arr.has_star()


def test_apply_labelling_marks_unlabelled_symbols(z3):
    a = PartialPermutation((1, 4, 4))
    g = PartialPermutation((4, 1, 4))
    arr = apply_labelling(z3, PartialLabelling(a, a, g))
    # L[1][1] = 1 has no label
    assert arr.tolist() == [[4]]


def test_apply_labelling_size_mismatch(z3):
    phi = PartialLabelling(PartialPermutation.identity(3), PartialPermutation.empty(3),
                           PartialPermutation.identity(3))
    with pytest.raises(SizeMismatch):
        apply_labelling(z3, phi)


def test_lex_compare_examples(z3, z4, k4):
    assert lex_compare(z3, z3) is Order.EQ
    assert lex_compare([[1, 3]], [[1, 2]]) is Order.GT  # 3 is ★ for n = 2
    assert lex_compare(z4, k4) is Order.GT
    with pytest.raises(DimensionMismatch):
        lex_compare(z3, z4)


@given(st.lists(st.lists(st.integers(1, 4), min_size=4, max_size=4), min_size=3, max_size=3))
def test_lex_compare_total_order(words):
    a, b, c = (np.array(w).reshape(2, 2) for w in words)
    assert lex_compare(a, b) == -lex_compare(b, a)
    assert (lex_compare(a, b) is Order.EQ) == bool((a == b).all())
    if lex_compare(a, b) <= 0 and lex_compare(b, c) <= 0:
        assert lex_compare(a, c) <= 0


def test_conjugate_examples(z3, z4, k4):
    assert conjugate(z3, "rcs") == z3
    for sigma in CONJUGATES:
        assert conjugate(k4, sigma) == k4
    # swapping rows and symbols: entry (s, c) is the row holding s in column c
    S = conjugate(z4, "scr")
    for r, c, s in z4.triples():
        assert S[s, c] == r


@given(squares(2, 8))
def test_conjugate_inverse(L):
    for sigma in CONJUGATES:
        assert conjugate(conjugate(L, sigma), inverse_conjugate(sigma)) == L


@given(squares(2, 8), st.data())
def test_full_isotopism_gives_latin_square(L, data):
    n = L.n
    a, b, c = data.draw(perms(n)), data.draw(perms(n)), data.draw(perms(n))
    arr = apply_labelling(L, PartialLabelling.from_perms(a, b, c))
    assert arr.to_latin() == apply_isotopism(L, a, b, c)


def test_parse_serialize():
    L = parse("1 2\n2 1\n")
    assert L.n == 2
    assert serialize(L) == "1 2\n2 1\n"
    with pytest.raises(ParseError) as e:
        parse("1 2\n2 x\n")
    assert e.value.line == 2


@given(squares(2, 12))
def test_text_round_trips(L):
    assert parse(serialize(L)) == L
    assert parse_compact(compact(L)) == L
    assert parse(compact(L)) == L


def test_all_latin_squares_counts():
    assert sum(1 for _ in all_latin_squares(3)) == 12
    assert sum(1 for _ in all_latin_squares(4)) == 576


def test_partial_permutation_rejects_repeats():
    with pytest.raises(ValueError):
        PartialPermutation((1, 1, 4))


def test_grid_helper_roundtrip(z3):
    assert grid(z3.rows()) == z3
