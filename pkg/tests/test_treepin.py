"""Tree-PIN models: analysis, reduction, omniscience LP."""

from fractions import Fraction

import numpy as np
import pytest

from secomni import (
    Edge,
    EntropyValue,
    InvalidArgumentError,
    MatrixGF,
    ResourceLimitError,
    TreePinModel,
    analyze,
    compile_model,
    constrained_capacity,
    gf_context,
    irreducible_check,
    rank,
    rco_lp,
    reduce_model,
)


def path_model():
    """Four users on a path; the wiretapper sees the sum of the edge bits."""
    ctx = gf_context(2)
    edges = [Edge(0, 1, 1), Edge(1, 2, 1), Edge(2, 3, 1)]
    w = MatrixGF(ctx, [[1], [1], [1]])
    return TreePinModel(4, edges, ctx, w)


def test_model_validation():
    ctx = gf_context(2)
    with pytest.raises(InvalidArgumentError):
        TreePinModel(3, [Edge(0, 1, 1)], ctx, MatrixGF.zeros(ctx, 1, 0))  # not a tree
    with pytest.raises(InvalidArgumentError):
        TreePinModel(2, [Edge(0, 0, 1)], ctx, MatrixGF.zeros(ctx, 1, 0))  # self loop
    with pytest.raises(InvalidArgumentError):
        TreePinModel(
            3, [Edge(0, 1, 1), Edge(0, 2, 1)], ctx, MatrixGF.zeros(ctx, 3, 0)
        )  # W rows != total multiplicity
    ext = gf_context(2, 2)
    with pytest.raises(InvalidArgumentError):
        TreePinModel(2, [Edge(0, 1, 1)], ext, MatrixGF.zeros(ext, 1, 0))


def test_structure_helpers():
    model = path_model()
    assert model.l == 3 and model.n_w == 1
    assert model.leaves() == (0, 3)
    assert model.root() == 0
    assert model.block_range(1) == (1, 2)
    assert model.incident_edges(1) == (0, 1)
    assert model.degree(2) == 2
    parents = model.parent_edges()
    # rooted at vertex 0: each non-root vertex's parent edge leads toward 0
    assert parents[1] == 0 and parents[2] == 1 and parents[3] == 2


def test_compile_model():
    model = path_model()
    fls = compile_model(model)
    assert fls.num_users == 4
    assert [m.cols for m in fls.user_mats] == [1, 2, 2, 1]
    # vertex 1 observes edge blocks 0 and 1
    assert fls.user_mats[1].to_lists() == [[1, 0], [0, 1], [0, 0]]


def test_analyze_path_example():
    rep = analyze(path_model())
    assert rep.q == 2 and rep.irreducible and not rep.single_edge
    assert rep.per_edge == (
        EntropyValue(1, 2),
        EntropyValue(1, 2),
        EntropyValue(1, 2),
    )
    assert rep.c_w.bits == 1.0
    assert rep.c_s.bits == 1.0
    assert rep.r_l.bits == 1.0
    assert rep.r_co.bits == 2.0
    assert (Fraction(1, 4), Fraction(1, 8)) in rep.cw_curve
    assert (Fraction(1, 2), Fraction(1, 4)) in rep.cw_curve
    assert rep.cw_curve[0] == (Fraction(0), Fraction(0))
    assert rep.cw_curve[-1] == (Fraction(4), Fraction(1))


def test_constrained_capacity_points():
    model = path_model()
    assert constrained_capacity(model, 2) == 1
    assert constrained_capacity(model, 1) == Fraction(1, 2)
    assert constrained_capacity(model, Fraction(1, 3)) == Fraction(1, 6)
    with pytest.raises(InvalidArgumentError):
        constrained_capacity(model, -1)


def test_single_edge_capacity_ignores_budget():
    ctx = gf_context(3)
    model = TreePinModel(2, [Edge(0, 1, 2)], ctx, MatrixGF(ctx, [[1], [0]]))
    rep = analyze(model)
    assert rep.single_edge
    assert constrained_capacity(model, 0) == rep.c_w.numerator == 1


def test_irreducible_check_witness():
    ctx = gf_context(2)
    edges = [Edge(0, 1, 2), Edge(1, 2, 1)]
    # second wiretap column lies inside edge 0's block
    w = MatrixGF(ctx, [[1, 1], [0, 1], [1, 0]])
    ok, witness = irreducible_check(TreePinModel(3, edges, ctx, w))
    assert not ok
    idx, vec = witness
    assert idx == 0
    arr = vec.a.ravel()
    assert arr[2] == 0 and arr[:2].any()
    # witness really is a wiretapper observation
    assert rank(w) == rank(MatrixGF(ctx, np.hstack([w.a, vec.a])))


def test_reduce_identity_block_drops_edge_to_zero():
    ctx = gf_context(2)
    edges = [Edge(0, 1, 1), Edge(1, 2, 1)]
    w = MatrixGF(ctx, [[1], [0]])  # wiretapper sees edge 0 entirely
    red, steps = reduce_model(TreePinModel(3, edges, ctx, w))
    assert [e.n_e for e in red.edges] == [0, 1]
    assert red.n_w == 0
    assert len(steps) == 1 and steps[0].edge_index == 0 and steps[0].removed_dim == 1


def test_reduce_noop_on_irreducible():
    model = path_model()
    red, steps = reduce_model(model)
    assert steps == ()
    assert [e.n_e for e in red.edges] == [1, 1, 1]


def test_reduce_preserves_wiretap_analysis(reducible_suite):
    for model in reducible_suite[:25]:
        red, steps = reduce_model(model)
        assert steps
        ok, _ = irreducible_check(red)
        assert ok
        before, after = analyze(model), analyze(red)
        assert before.per_edge == after.per_edge
        assert before.c_w == after.c_w
        assert before.r_l == after.r_l
        assert before.cw_curve == after.cw_curve
        # reduced multiplicities are the conditional per-edge entropies
        assert tuple(e.n_e for e in red.edges) == tuple(
            v.numerator for v in before.per_edge
        )


def test_rco_lp_path_example():
    res = rco_lp(path_model())
    assert res.value == EntropyValue(2, 2)
    assert res.rates == (Fraction(0), Fraction(1), Fraction(1), Fraction(0))
    assert res.dual == {frozenset({0, 1}): 1, frozenset({2, 3}): 1}


def test_rco_lp_closed_form(irreducible_suite):
    for model in irreducible_suite[:20]:
        total = sum(e.n_e for e in model.edges)
        low = min(e.n_e for e in model.edges)
        res = rco_lp(model)
        assert res.value.numerator == total - low
        assert sum(res.rates) == total - low
        # dual weights form an exact fractional partition
        for i in range(model.num_vertices):
            assert sum(v for b, v in res.dual.items() if i in b) == 1


def test_rco_lp_limits():
    ctx = gf_context(2)
    edges = [Edge(i, i + 1, 1) for i in range(11)]
    big = TreePinModel(12, edges, ctx, MatrixGF.zeros(ctx, 11, 0))
    with pytest.raises(ResourceLimitError):
        rco_lp(big)
