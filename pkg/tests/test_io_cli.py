"""File formats, digests, figures, and the command-line interface."""

import json

import numpy as np
import pytest

from secomni import (
    Edge,
    FLSModel,
    InvalidArgumentError,
    JointPMF,
    MatrixGF,
    TreePinModel,
    build_unit_scheme,
    cli,
    corner_point_scheme,
    extract_key,
    gf_context,
    io,
    verify_alignment,
    verify_omniscience,
)

DATA = "src/secomni/data"


def path_model():
    ctx = gf_context(2)
    edges = [Edge(0, 1, 1), Edge(1, 2, 1), Edge(2, 3, 1)]
    return TreePinModel(4, edges, ctx, MatrixGF(ctx, [[1], [1], [1]]))


def wedge_model():
    ctx = gf_context(3)
    edges = [Edge(0, 1, 2), Edge(1, 2, 1)]
    return TreePinModel(3, edges, ctx, MatrixGF(ctx, [[1], [2], [1]]))


def correlated_pmf():
    return JointPMF(("x", "y", "w"), np.array([[[0.45], [0.05]], [[0.05], [0.45]]]))


def test_tree_model_round_trip(tmp_path):
    model = wedge_model()
    p = tmp_path / "m.json"
    io.save_model(model, p)
    back = io.load_model(p)
    assert isinstance(back, TreePinModel)
    assert back.ctx is model.ctx
    assert back.edges == model.edges
    assert back.W.to_lists() == model.W.to_lists()


def test_fls_model_round_trip(tmp_path):
    ctx = gf_context(2)
    model = FLSModel(
        ctx,
        [MatrixGF(ctx, [[1], [0]]), MatrixGF(ctx, [[0], [1]])],
        MatrixGF(ctx, [[1], [1]]),
    )
    p = tmp_path / "m.json"
    io.save_model(model, p)
    back = io.load_model(p)
    assert isinstance(back, FLSModel)
    assert [m.to_lists() for m in back.user_mats] == [
        m.to_lists() for m in model.user_mats
    ]


def test_pmf_round_trip(tmp_path):
    pmf = correlated_pmf()
    p = tmp_path / "m.json"
    io.save_model(pmf, p)
    back = io.load_model(p)
    assert isinstance(back, JointPMF)
    assert back.axes == pmf.axes
    assert np.allclose(back.table, pmf.table)


def test_scheme_round_trip_with_key(tmp_path):
    model = path_model()
    scheme = build_unit_scheme(model)
    extract_key(model, scheme)
    p = tmp_path / "s.json"
    io.save_scheme(scheme, p)
    back = io.load_scheme(p)
    assert back.n == scheme.n and back.ext is scheme.ext
    assert back.F.to_lists() == scheme.F.to_lists()
    assert back.owners == scheme.owners
    assert back.key_map.to_lists() == scheme.key_map.to_lists()
    assert back.key_edge == 0
    assert verify_omniscience(model, back) and verify_alignment(model, back)


def test_scheme_round_trip_rates(tmp_path):
    model = wedge_model()
    scheme = corner_point_scheme(model, seed=0)
    p = tmp_path / "s.json"
    io.save_scheme(scheme, p)
    back = io.load_scheme(p)
    assert back.meta["comm_rate_logq"] == 1
    assert back.meta["key_rate_logq"] == 1


def test_scheme_modulus_is_checked(tmp_path):
    model = path_model()
    scheme = build_unit_scheme(model)
    p = tmp_path / "s.json"
    io.save_scheme(scheme, p)
    doc = json.loads(p.read_text())
    doc["modulus"] = [1, 0, 1]  # not the canonical F_4 modulus
    p.write_text(json.dumps(doc))
    with pytest.raises(InvalidArgumentError):
        io.load_scheme(p)


def test_report_digest_and_tamper(tmp_path):
    p = tmp_path / "r.json"
    io.save_report("demo", {"a": 1, "b": [1, 2]}, p)
    doc = io.load_report(p)
    assert doc["kind"] == "demo" and doc["payload"]["a"] == 1
    raw = json.loads(p.read_text())
    raw["payload"]["a"] = 2
    p.write_text(json.dumps(raw))
    with pytest.raises(InvalidArgumentError):
        io.load_report(p)


def test_header_checks(tmp_path):
    p = tmp_path / "x.json"
    p.write_text(json.dumps({"format": "other", "version": 1}))
    with pytest.raises(InvalidArgumentError):
        io.load_model(p)
    io.save_model(path_model(), p)
    doc = json.loads(p.read_text())
    doc["version"] = 99
    p.write_text(json.dumps(doc))
    with pytest.raises(InvalidArgumentError):
        io.load_model(p)


def test_write_csv_formatting(tmp_path):
    p = tmp_path / "t.csv"
    io.write_csv(p, ("a", "b"), [(1, 0.5), (2, 1 / 3)])
    lines = p.read_text().splitlines()
    assert lines[0] == "a,b"
    assert lines[1] == "1,0.5"
    assert lines[2] == "2,0.333333333333"


def test_render_curve(tmp_path):
    p = tmp_path / "c.png"
    io.render_curve(p, [0, 1, 2], [("f", [0.0, 1.0, 4.0])], "x", "y", "t")
    assert p.stat().st_size > 0


def test_bundled_example_files():
    model = io.load_model(f"{DATA}/motivating_example.json")
    scheme = io.load_scheme(f"{DATA}/motivating_example_scheme.json")
    assert isinstance(model, TreePinModel) and model.num_vertices == 4
    assert scheme.n == 2
    assert verify_omniscience(model, scheme)
    assert verify_alignment(model, scheme)


# -- CLI --------------------------------------------------------------------


def test_cli_analyze_deterministic(tmp_path):
    model_path = tmp_path / "m.json"
    io.save_model(path_model(), model_path)
    out1, out2 = tmp_path / "a", tmp_path / "b"
    for out in (out1, out2):
        assert cli.main(["analyze", str(model_path), "--out-dir", str(out)]) == 0
    for name in ("analyze.json", "cw_curve.csv", "cw_curve.png"):
        assert (out1 / name).read_bytes() == (out2 / name).read_bytes()
    doc = io.load_report(out1 / "analyze.json")
    assert doc["payload"]["wiretap_capacity"]["numerator"] == 1
    assert doc["payload"]["minimum_leakage"]["numerator"] == 1


def test_cli_analyze_fls(tmp_path):
    ctx = gf_context(2)
    model = FLSModel(
        ctx,
        [MatrixGF(ctx, [[1], [0]]), MatrixGF(ctx, [[1], [1]])],
        MatrixGF(ctx, [[0], [1]]),
    )
    model_path = tmp_path / "m.json"
    io.save_model(model, model_path)
    assert cli.main(["analyze", str(model_path), "--out-dir", str(tmp_path)]) == 0
    doc = io.load_report(tmp_path / "analyze.json")
    assert doc["payload"]["kind"] == "fls-two-user"


def test_cli_reduce(tmp_path):
    ctx = gf_context(2)
    model = TreePinModel(
        3, [Edge(0, 1, 2), Edge(1, 2, 1)], ctx, MatrixGF(ctx, [[1], [0], [0]])
    )
    model_path, out_path = tmp_path / "m.json", tmp_path / "r.json"
    io.save_model(model, model_path)
    assert cli.main(["reduce", str(model_path), "--out", str(out_path)]) == 0
    red = io.load_model(out_path)
    assert [e.n_e for e in red.edges] == [1, 1]
    assert red.n_w == 0


def test_cli_build_verify_simulate(tmp_path):
    model_path = tmp_path / "m.json"
    scheme_path = tmp_path / "s.json"
    io.save_model(path_model(), model_path)
    # all multiplicities are 1: the deterministic unit builder is dispatched
    assert (
        cli.main(
            ["build-scheme", str(model_path), "--out", str(scheme_path)]
        )
        == 0
    )
    scheme = io.load_scheme(scheme_path)
    assert scheme.n == 2 and scheme.key_map is not None
    verify_out = tmp_path / "verify.json"
    assert (
        cli.main(
            ["verify", str(model_path), str(scheme_path), "--out", str(verify_out)]
        )
        == 0
    )
    doc = io.load_report(verify_out)
    assert doc["payload"]["checks"] == {
        "noninteractive": True,
        "omniscience": True,
        "alignment": True,
        "key": True,
    }
    sim_out = tmp_path / "sim.json"
    assert (
        cli.main(
            [
                "simulate",
                str(model_path),
                str(scheme_path),
                "--samples",
                "200",
                "--out",
                str(sim_out),
            ]
        )
        == 0
    )
    sim = io.load_report(sim_out)
    assert sim["payload"]["all_recovered"]
    assert sim["payload"]["key_space"] == 4
    assert sim["payload"]["distinct_keys"] == 4


def test_cli_build_corner_and_general(tmp_path):
    model_path = tmp_path / "m.json"
    io.save_model(wedge_model(), model_path)
    corner = tmp_path / "corner.json"
    assert (
        cli.main(
            ["build-scheme", str(model_path), "--out", str(corner), "--corner"]
        )
        == 0
    )
    assert io.load_scheme(corner).meta["key_rate_logq"] == 1
    general = tmp_path / "general.json"
    assert (
        cli.main(
            ["build-scheme", str(model_path), "--out", str(general), "--seed", "4"]
        )
        == 0
    )
    scheme = io.load_scheme(general)
    assert verify_omniscience(wedge_model(), scheme)


def test_cli_build_scheme_fls(tmp_path):
    ctx = gf_context(2)
    model = FLSModel(
        ctx,
        [MatrixGF(ctx, [[1, 0], [0, 1], [0, 0]]), MatrixGF(ctx, [[1, 0], [0, 0], [0, 1]])],
        MatrixGF(ctx, [[1], [1], [0]]),
    )
    model_path, out = tmp_path / "m.json", tmp_path / "s.json"
    io.save_model(model, model_path)
    assert cli.main(["build-scheme", str(model_path), "--out", str(out)]) == 0
    scheme = io.load_scheme(out)
    assert verify_omniscience(model, scheme)


def test_cli_verify_rejects_tampered_scheme(tmp_path):
    model_path = tmp_path / "m.json"
    scheme_path = tmp_path / "s.json"
    io.save_model(path_model(), model_path)
    scheme = build_unit_scheme(path_model())
    io.save_scheme(scheme, scheme_path)
    doc = json.loads(scheme_path.read_text())
    doc["columns"][0][1] = [1, 0]  # edit one entry: alignment breaks
    scheme_path.write_text(json.dumps(doc))
    out = tmp_path / "v.json"
    code = cli.main(
        ["verify", str(model_path), str(scheme_path), "--out", str(out)]
    )
    assert code == 2


def test_cli_exit_codes(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{}")
    assert cli.main(["analyze", str(bad), "--out-dir", str(tmp_path)]) == 2
    model_path = tmp_path / "m.json"
    io.save_model(wedge_model(), model_path)
    out = tmp_path / "s.json"
    code = cli.main(
        [
            "build-scheme",
            str(model_path),
            "--out",
            str(out),
            "--attempts",
            "0",
            "--n",
            "2",
        ]
    )
    assert code == 3


def test_cli_classical_dsbe(tmp_path):
    assert (
        cli.main(
            [
                "classical",
                "dsbe",
                "--p",
                "0.1",
                "--eps",
                "0.4",
                "--grid",
                "101",
                "--out-dir",
                str(tmp_path),
            ]
        )
        == 0
    )
    for name in ("dsbe.json", "f_curve.csv", "f_curve.png"):
        assert (tmp_path / name).exists()
    doc = io.load_report(tmp_path / "dsbe.json")
    assert doc["payload"]["more_capable"]["ok"]


def test_cli_classical_oneway(tmp_path):
    assert (
        cli.main(
            [
                "classical",
                "oneway",
                "--p",
                "0.1",
                "--eps",
                "0.4",
                "--out-dir",
                str(tmp_path),
            ]
        )
        == 0
    )
    doc = io.load_report(tmp_path / "oneway.json")
    assert doc["payload"]["capacity_lb_grid"]["value"] > 1e-4


def test_cli_classical_positivity(tmp_path):
    good = tmp_path / "good.json"
    io.save_model(correlated_pmf(), good)
    assert (
        cli.main(["classical", "positivity", str(good), "--out-dir", str(tmp_path)])
        == 0
    )
    doc = io.load_report(tmp_path / "positivity.json")
    assert doc["payload"]["found"]
    flat = tmp_path / "flat.json"
    io.save_model(JointPMF(("x", "y", "w"), np.full((2, 2, 1), 0.25)), flat)
    assert (
        cli.main(["classical", "positivity", str(flat), "--out-dir", str(tmp_path)])
        == 3
    )


def test_cli_classical_block_swap(tmp_path):
    pmf_path = tmp_path / "p.json"
    io.save_model(correlated_pmf(), pmf_path)
    parts = json.dumps({"x": [[0], [1]], "y": [[0], [1]]})
    assert (
        cli.main(
            [
                "classical",
                "block-swap",
                str(pmf_path),
                "--parts",
                parts,
                "--n-max",
                "6",
                "--out-dir",
                str(tmp_path),
            ]
        )
        == 0
    )
    doc = io.load_report(tmp_path / "block_swap.json")
    assert doc["payload"]["first_crossing"] == 2
    for name in ("block_swap.csv", "block_swap.png"):
        assert (tmp_path / name).exists()


def test_cli_block_swap_bad_parts(tmp_path):
    pmf_path = tmp_path / "p.json"
    io.save_model(correlated_pmf(), pmf_path)
    assert (
        cli.main(
            [
                "classical",
                "block-swap",
                str(pmf_path),
                "--parts",
                "not json",
                "--out-dir",
                str(tmp_path),
            ]
        )
        == 2
    )
