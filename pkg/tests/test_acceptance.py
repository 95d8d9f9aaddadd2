"""Acceptance gate: every frozen deliverable property at its stated tolerance.

One criterion per test; each prints a single PASS/FAIL line so the gate can
be read off the run log directly.
"""

import math
import time
from fractions import Fraction
from pathlib import Path

import numpy as np

import secomni
from secomni import (
    Edge,
    EntropyValue,
    MatrixGF,
    TreePinModel,
    analyze,
    binary_entropy,
    block_swap_search,
    brute_force_entropy,
    build_general_scheme,
    build_unit_scheme,
    communication_rate,
    compile_model,
    constrained_capacity,
    corner_point_scheme,
    default_block_length,
    dsbe,
    delta_threshold,
    extract_key,
    fls_entropy,
    gf_context,
    hstack,
    io,
    irreducible_check,
    JointPMF,
    leakage_rate,
    mcf,
    more_capable_check,
    not_less_noisy_check,
    oneway_capacity_lb,
    oneway_leakage_report,
    pmf_entropy,
    positivity_condition_check,
    positivity_search,
    rank,
    rank_entropy,
    rank_mutual_information,
    rco_lp,
    reduce_model,
    sample_alignment_rows,
    two_msg_report,
    two_user_analyze,
    verify_alignment,
    verify_noninteractive,
    verify_omniscience,
)
from secomni.schemes import CommScheme

DATA = Path(secomni.__file__).parent / "data"


def _gate(capsys, num, label, fn):
    try:
        fn()
    except BaseException:
        with capsys.disabled():
            print(f"ACCEPTANCE {num:02d} {label}: FAIL")
        raise
    with capsys.disabled():
        print(f"ACCEPTANCE {num:02d} {label}: PASS")


def test_criterion_01_bundled_example(capsys):
    def run():
        start = time.perf_counter()
        model = io.load_model(DATA / "motivating_example.json")
        scheme = io.load_scheme(DATA / "motivating_example_scheme.json")
        rep = analyze(model)
        assert rep.c_w == EntropyValue(1, 2) and rep.c_w.bits == 1.0
        assert rep.r_l == EntropyValue(1, 2) and rep.r_l.bits == 1.0
        assert scheme.n == 2
        assert verify_noninteractive(model, scheme)
        assert verify_omniscience(model, scheme)
        assert verify_alignment(model, scheme)
        assert leakage_rate(model, scheme) == EntropyValue(1, 2)
        assert time.perf_counter() - start < 1.0

    _gate(capsys, 1, "bundled example", run)


def test_criterion_02_tree_pin_suite(capsys, irreducible_suite):
    def run():
        start = time.perf_counter()
        for model in irreducible_suite:
            total = sum(e.n_e for e in model.edges)
            s = min(e.n_e for e in model.edges)
            scheme = build_general_scheme(model)
            assert scheme.n == default_block_length(model)
            assert scheme.meta["attempts_used"] <= 64
            leak = leakage_rate(model, scheme)
            assert leak.numerator == total - model.n_w - s
            assert leak.q == model.ctx.q
            report = extract_key(model, scheme)
            assert report["rate_logq"] == s
            assert report["uniform"] and report["recoverable"] and report["secret"]
        assert time.perf_counter() - start < 120.0

    _gate(capsys, 2, "tree-PIN scheme suite", run)


def test_criterion_03_reduction_invariance(capsys, reducible_suite):
    def run():
        for model in reducible_suite:
            reduced, steps = reduce_model(model)
            assert steps
            ok, _ = irreducible_check(reduced)
            assert ok
            before = analyze(model)
            after = analyze(reduced)
            assert tuple(e.n_e for e in reduced.edges) == tuple(
                v.numerator for v in before.per_edge
            )
            assert before.per_edge == after.per_edge
            assert before.c_w == after.c_w
            assert before.r_l == after.r_l
            assert before.cw_curve == after.cw_curve

    _gate(capsys, 3, "reduction invariance", run)


def test_criterion_04_rank_entropy_oracle(capsys, brute_force_suite):
    def run():
        rng = np.random.default_rng(20240805)
        for model in brute_force_suite:
            nu = model.num_users
            for _ in range(20):
                users = tuple(i for i in range(nu) if rng.random() < 0.5)
                include_w = bool(rng.random() < 0.3)
                if not users and not include_w:
                    users = (int(rng.integers(nu)),)
                given = tuple(i for i in range(nu) if rng.random() < 0.3)
                given_w = bool(rng.random() < 0.3)
                exact = fls_entropy(
                    model,
                    users,
                    include_w=include_w,
                    given_users=given,
                    given_w=given_w,
                )
                approx = brute_force_entropy(
                    model,
                    users,
                    include_w=include_w,
                    given_users=given,
                    given_w=given_w,
                )
                assert abs(exact.bits - approx) <= 1e-9

    _gate(capsys, 4, "rank entropy vs brute force", run)


def test_criterion_05_rco_lp_closed_form(capsys, irreducible_suite):
    def run():
        for model in irreducible_suite:
            ctx = model.ctx
            blind = TreePinModel(
                model.num_vertices,
                list(model.edges),
                ctx,
                MatrixGF.zeros(ctx, model.l, 0),
            )
            total = sum(e.n_e for e in blind.edges)
            s = min(e.n_e for e in blind.edges)
            res = rco_lp(blind)
            assert res.value.numerator == total - s
            assert sum(res.rates) == total - s
            # dual fractional partition re-priced independently
            fls = compile_model(blind)
            dual_value = Fraction(0)
            for subset, weight in res.dual.items():
                a = hstack(*[fls.user_mats[i] for i in sorted(subset)])
                comp = [
                    fls.user_mats[i]
                    for i in range(fls.num_users)
                    if i not in subset
                ]
                b = hstack(*comp)
                dual_value += Fraction(weight) * rank_entropy(a, b)
            assert dual_value == total - s
            for i in range(blind.num_vertices):
                assert sum(w for b, w in res.dual.items() if i in b) == 1

    _gate(capsys, 5, "omniscience LP closed form", run)


def test_criterion_06_two_user_models(capsys, two_user_suite):
    def run():
        for model in two_user_suite:
            rep = two_user_analyze(model)
            m1, m2 = model.user_mats
            w = model.W
            g1 = mcf(w, m1).G
            g2 = mcf(w, m2).G
            vals = [
                rank_mutual_information(m1, m2, g if g.cols else None)
                for g in (g1, g2, hstack(g1, g2))
            ]
            assert vals[0] == vals[1] == vals[2] == rep.c_w.numerator
            f = hstack(rep.f1, rep.f2)
            cond = f if f.cols else None
            assert rank_mutual_information(hstack(m1, m2), w, cond) == 0
            assert rank_mutual_information(m1, m2, cond) == rep.c_w.numerator
            h_joint = rank_entropy(hstack(m1, m2), w if w.cols else None)
            assert rep.c_w.numerator + rep.r_l.numerator == h_joint

    _gate(capsys, 6, "two-user exact analysis", run)


def test_criterion_07_pair_erasure_source(capsys):
    def run():
        src = dsbe(0.1, 0.4)
        mc = more_capable_check(src, "x", "y")
        assert mc["grid_size"] == 1001 and mc["ok"] and mc["min_gap"] >= -1e-9
        nln = not_less_noisy_check(src, "x", "y")
        assert nln["ok"] and nln["gap"] > 1e-6
        leak = oneway_leakage_report(src, "x", "y")
        assert abs(leak["value"] - 0.4) <= 1e-3
        assert leak["value"] == pmf_entropy(src, ("x",), ("w",))
        cap = oneway_capacity_lb(src, "x", "y")
        assert cap["value"] > 1e-4
        rep = two_msg_report(0.1, 0.4)
        assert rep["verdict"] == "duality-fails"
        h_pair = pmf_entropy(src, ("x", "y"), ("w",))
        assert abs(rep["two_msg_leakage_lb"] - h_pair) <= 1e-9
        assert abs(h_pair - 0.4 * (1 + binary_entropy(0.1))) <= 1e-12
        assert not not_less_noisy_check(dsbe(0.1, 0.2), "x", "y")["ok"]
        assert not more_capable_check(dsbe(0.1, 0.6), "x", "y")["ok"]

    _gate(capsys, 7, "pair-erasure certificates", run)


def test_criterion_08_positivity(capsys):
    def run():
        d1 = delta_threshold(2)
        assert abs(16 * d1 * d1 - 12 * d1 + 1) < 1e-12
        assert 0.0954 < d1 < 0.0956
        correlated = JointPMF(
            ("x", "y", "w"), np.array([[[0.45], [0.05]], [[0.05], [0.45]]])
        )
        best = positivity_search(correlated)
        assert best is not None and best["ok"]
        independent = JointPMF(("x", "y", "w"), np.full((2, 2, 1), 0.25))
        assert positivity_search(independent) is None
        parts = {"x": ((0,), (1,)), "y": ((0,), (1,))}
        cert = positivity_condition_check(correlated, parts)
        assert cert["ok"] and cert["margin"] >= 0.1
        rows, first = block_swap_search(correlated, parts, n_max=40)
        assert first is not None and first <= 40 and first % 2 == 0
        crossing = next(r for r in rows if r["n"] == first)
        assert crossing["lhs"] > crossing["rhs"]

    _gate(capsys, 8, "positivity certificates", run)


def test_criterion_09_randomized_draw_calibration(capsys):
    def run():
        model = io.load_model(DATA / "motivating_example.json")
        s = min(e.n_e for e in model.edges)
        total = sum(e.n_e for e in model.edges)
        n = default_block_length(model)
        q = model.ctx.q
        assert n == math.ceil(math.log(total, q)) + 1
        fails = 0
        for seed in range(1000):
            _, ok = sample_alignment_rows(model, n=n, seed=seed)
            fails += not ok
        assert fails / 1000 <= 1.5 * s * total / q**n

    _gate(capsys, 9, "alignment draw failure rate", run)


def test_criterion_10_corner_points(capsys, irreducible_suite):
    def run():
        for model in irreducible_suite:
            num_edges = len(model.edges)
            s = min(e.n_e for e in model.edges)
            scheme = corner_point_scheme(model)
            assert scheme.meta["comm_rate_logq"] == s * (num_edges - 1)
            assert scheme.meta["key_rate_logq"] == s
            assert communication_rate(scheme).numerator == s * (num_edges - 1)
            key = scheme.meta["key"]
            assert key["rate_logq"] == s
            assert key["uniform"] and key["recoverable"] and key["secret"]
            top = Fraction(2 * (num_edges - 1) * s)
            for j in range(20):
                r = top * j / 19
                expect = min(r / (num_edges - 1), Fraction(s))
                assert constrained_capacity(model, r) == expect

    _gate(capsys, 10, "corner point and capacity curve", run)


def _blockify(f, ext):
    """Base-field presentation of an extension-field matrix.

    Entry (r, c) becomes the k-by-k block whose row i holds the coefficients
    of F_rc times the i-th basis element.
    """
    k = ext.k
    basis = ext.basis()
    out = np.zeros((f.rows * k, f.cols * k), dtype=np.int64)
    for r in range(f.rows):
        for c in range(f.cols):
            e = ext.element(int(f.a[r, c]))
            for i in range(k):
                out[r * k + i, c * k : (c + 1) * k] = ext.coeffs(e * basis[i])
    return out


def test_criterion_11_unit_scheme_companion_form(capsys):
    def run():
        model = io.load_model(DATA / "motivating_example.json")
        scheme = build_unit_scheme(model)
        assert scheme.n == 2
        again = build_unit_scheme(model)
        assert again.F.to_lists() == scheme.F.to_lists()
        assert again.owners == scheme.owners and again.ext is scheme.ext

        ctx = gf_context(2)
        blocks = _blockify(scheme.F, scheme.ext)
        m = np.array([[1, 1], [1, 0]])
        eye = np.eye(2, dtype=np.int64)
        zero = np.zeros((2, 2), dtype=np.int64)
        companion = np.block([[eye, zero], [m, eye], [zero, m]])
        assert np.array_equal(blocks, companion)
        # doubled source: each edge carries two binary symbols
        doubled = TreePinModel(
            4,
            [Edge(0, 1, 2), Edge(1, 2, 2), Edge(2, 3, 2)],
            ctx,
            MatrixGF(ctx, np.kron(model.W.a, np.eye(2, dtype=np.int64))),
        )
        comp_scheme = CommScheme(
            base_ctx=ctx,
            ext=ctx,
            n=1,
            F=MatrixGF(ctx, companion),
            owners=(1, 1, 2, 2),
            target=MatrixGF(ctx, np.eye(6, dtype=np.int64)),
        )
        assert verify_noninteractive(doubled, comp_scheme)
        assert verify_omniscience(doubled, comp_scheme)
        assert verify_alignment(doubled, comp_scheme)
        # two base symbols over two realizations: one bit per realization
        assert leakage_rate(doubled, comp_scheme).numerator == 2
        # same column space over the base field
        a = MatrixGF(ctx, blocks)
        b = MatrixGF(ctx, companion)
        assert rank(a) == rank(b) == rank(MatrixGF(ctx, np.hstack([blocks, companion])))

    _gate(capsys, 11, "unit scheme companion equivalence", run)
