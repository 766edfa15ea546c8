import numpy as np
import pytest
from hypothesis import given

from _checks import in_R
from conftest import square_and_isotope, squares
from latincanon.canonical import (
    AlreadyLabelled,
    OrderMismatch,
    SearchState,
    branch,
    canonical_form,
    canonical_labelling,
    extend,
    label_row_cycle,
    same_isotopism_class,
    species_canonical,
    succ,
)
from latincanon.cycles import cycle_length_table
from latincanon.latin_core import (
    CONJUGATES,
    apply_isotopism,
    apply_labelling,
    conjugate,
    cyclic_square,
    random_isotopism,
)


def test_succ_examples():
    assert succ(1, 1) == (1, 2)
    assert succ(1, 2) == (2, 2)
    assert succ(2, 2) == (2, 1)
    assert succ(2, 1) == (1, 3)


def test_succ_fills_each_corner_first():
    cell = (1, 1)
    seen = [cell]
    for _ in range(99):
        cell = succ(*cell)
        seen.append(cell)
    for k in range(1, 11):
        assert {c for c in seen[: k * k]} == {(x, y) for x in range(1, k + 1) for y in range(1, k + 1)}


def test_label_z3_from_symbol_1(z3):
    st = SearchState.start(z3, 1, 2)
    assert st.curt == 0
    label_row_cycle(st, 1)
    lab = st.labelling
    assert st.curt == 3
    assert lab.alpha.image == lab.beta.image == lab.gamma.image == (1, 2, 3)


def test_label_z3_from_symbol_2(z3):
    st = SearchState.start(z3, 1, 2)
    label_row_cycle(st, 2)
    lab = st.labelling
    assert lab.alpha.image == (1, 2, 3)
    assert lab.beta.image == (3, 1, 2)
    assert lab.gamma.image == (3, 1, 2)
    arr = apply_labelling(z3, lab)
    assert arr.tolist()[:2] == [[1, 2, 3], [2, 3, 1]]


def test_label_k4_intercalate(k4):
    st = SearchState.start(k4, 1, 2)
    assert st.P[2] == 1
    label_row_cycle(st, 1)
    assert st.curt == 2
    assert st.P[2] == 3
    assert st.c1 == 1 and st.labelling.alpha(1) == 1
    with pytest.raises(AlreadyLabelled):
        label_row_cycle(st, 2)


def test_extend_examples(z3, z4, k4):
    st = SearchState.start(z4, 1, 2)
    label_row_cycle(st, 1)
    extend(st)
    assert st.curt == 4
    st = SearchState.start(k4, 1, 2)
    label_row_cycle(st, 1)
    extend(st)
    assert st.curt == 2
    assert not apply_labelling(k4, st.labelling).has_star()
    st = SearchState.start(z3, 1, 2)
    label_row_cycle(st, 3)
    extend(st)
    assert st.curt == 3 and st.labelling.is_isotopism()


def test_branch_leaf_counts(z3, z4, k4):
    assert branch(SearchState.start(k4, 1, 2)).leaves == 8
    assert branch(SearchState.start(z4, 1, 2)).leaves == 4
    res = branch(SearchState.start(z3, 1, 2))
    assert res.leaves == 3 and res.form == z3


def test_branch_restores_state(k4):
    st = SearchState.start(k4, 1, 2)
    label_row_cycle(st, 1)
    extend(st)
    before = (st.curt, st.P.tolist(), st.T_alpha, st.labelling)
    branch(st)
    assert (st.curt, st.P.tolist(), st.T_alpha, st.labelling) == before


def test_checkpoint_restore(k4):
    st = SearchState.start(k4, 1, 2)
    cp = st.checkpoint()
    label_row_cycle(st, 3)
    extend(st)
    st.restore(cp)
    assert st.curt == 0 and st.c1 is None and st.labelling.size == 0
    assert st.P.tolist() == SearchState.start(k4, 1, 2).P.tolist()


def test_canonical_small_examples(z3, z4, k4):
    assert canonical_form(z3) == z3
    assert canonical_form(k4) != canonical_form(z4)
    assert same_isotopism_class(z3, apply_isotopism(z3, [2, 3, 1], [1, 2, 3], [1, 2, 3]))
    assert not same_isotopism_class(z4, k4)
    assert same_isotopism_class(k4, k4)
    with pytest.raises(OrderMismatch):
        same_isotopism_class(z3, z4)
    assert canonical_form(cyclic_square(1)) == cyclic_square(1)


def test_canonical_z4_invariant_100():
    z4 = cyclic_square(4)
    f = canonical_form(z4)
    rng = np.random.default_rng(4)
    for _ in range(100):
        assert canonical_form(apply_isotopism(z4, *random_isotopism(4, rng))) == f


def test_canonical_labelling_reproduces_form():
    rng = np.random.default_rng(0)
    from latincanon.sampler import jm_sample

    L = jm_sample(9, 11)
    res = canonical_labelling(L)
    assert apply_labelling(L, res.labelling).to_latin() == res.form
    L2 = apply_isotopism(L, *random_isotopism(9, rng))
    assert canonical_form(L2) == res.form


@given(square_and_isotope(2, 14))
def test_invariance_property(pair):
    L, M = pair
    assert canonical_form(L) == canonical_form(M)


@given(squares(2, 14))
def test_idempotent_and_in_R(L):
    res = canonical_labelling(L)
    assert canonical_form(res.form) == res.form
    ok, why = in_R(res.form.rows(), L.rows())
    assert ok, why
    assert res.stats["doubling_violations"] == 0
    assert res.stats["p_violations"] == 0


@given(squares(3, 14))
def test_work_scales_with_leaves(L):
    st = canonical_labelling(L).stats
    assert st["scans"] <= 2 * L.n ** 2 * st["leaves"]
    assert st["label_calls"] <= L.n * st["leaves"]


@given(squares(3, 10))
def test_search_state_invariants(L):
    t = cycle_length_table(L)
    i, j = t.r_max[0]
    st = SearchState.start(L, i, j, table=t)
    init = st.P.tolist()
    s = min(x for x in range(1, L.n + 1) if t.ell(i, j, x) == t.max_gamma[0])
    label_row_cycle(st, s)
    extend(st)
    lab = st.labelling
    assert lab.size == st.curt
    assert lab.beta(st.c1) == 1
    assert lab.alpha(i) == 1
    # T-lists hold each labelled element once, in labelling order
    for T, perm in ((st.T_alpha, lab.alpha), (st.T_beta, lab.beta), (st.T_gamma, lab.gamma)):
        assert len(T) == len(set(T)) == st.curt
        assert sorted(perm(x) for x in T) == list(range(1, st.curt + 1))
    P = st.P
    for k in range(2, L.n + 1):
        assert P[k] <= init[k - 2]


def test_species_examples(z3):
    assert species_canonical(z3) == z3
    from latincanon.sampler import jm_sample

    L = jm_sample(7, 5)
    s = species_canonical(L)
    for sigma in CONJUGATES:
        assert species_canonical(conjugate(L, sigma)) == s
    rng = np.random.default_rng(2)
    assert species_canonical(apply_isotopism(L, *random_isotopism(7, rng))) == s
