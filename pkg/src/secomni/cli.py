"""Command-line interface.

Subcommands:
    analyze      exact capacities and leakage for a model file
    reduce       remove wiretapper-resolvable edge components
    build-scheme construct and verify a communication scheme
    verify       re-verify a saved scheme against a model
    simulate     Monte-Carlo transmission check of a saved scheme
    classical    pmf-based analyses (dsbe, oneway, two-msg, positivity,
                 block-swap)

Exit codes: 0 success, 2 invalid input or failed verification, 3 randomized
search exhausted.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import io as io_mod
from .classical import (
    JointPMF,
    block_swap_search,
    dsbe,
    f_curve,
    more_capable_check,
    not_less_noisy_check,
    oneway_capacity_lb,
    oneway_capacity_search,
    oneway_leakage_report,
    pmf_entropy,
    positivity_search,
    two_msg_report,
)
from .errors import InvalidArgumentError, ResourceLimitError, SchemeSearchError
from .fls import FLSModel, fls_entropy, two_user_analyze
from .schemes import (
    build_general_scheme,
    build_unit_scheme,
    corner_point_scheme,
    extract_key,
    leakage_rate,
    two_user_scheme,
    verify_alignment,
    verify_noninteractive,
    verify_omniscience,
)
from .treepin import TreePinModel, analyze, constrained_capacity, reduce_model

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_SEARCH = 3


def _out_dir(args):
    d = Path(args.out_dir)
    d.mkdir(parents=True, exist_ok=True)
    return d


def _analyze_tree(model, out):
    rep = analyze(model)
    payload = {
        "kind": "tree-pin",
        "q": model.ctx.q,
        "num_vertices": model.num_vertices,
        "edges": [[e.u, e.v, e.n_e] for e in model.edges],
        "irreducible": rep.irreducible,
        "per_edge_logq": rep.per_edge,
        "wiretap_capacity": rep.c_w,
        "secrecy_capacity": rep.c_s,
        "minimum_leakage": rep.r_l,
        "omniscience_rate": rep.r_co,
        "single_edge": rep.single_edge,
    }
    doc = io_mod.save_report("analyze", payload, out / "analyze.json")
    rows = [(float(r), float(v), str(v)) for r, v in rep.cw_curve]
    io_mod.write_csv(out / "cw_curve.csv", ("R", "C_W(R)", "exact"), rows)
    io_mod.render_curve(
        out / "cw_curve.png",
        [r[0] for r in rows],
        [("constrained capacity", [r[1] for r in rows])],
        "communication rate R (bits)",
        "key rate (bits)",
        f"rate-limited capacity, q={model.ctx.q}",
    )
    print(f"wiretap secret-key capacity: {rep.c_w}")
    print(f"secrecy capacity:            {rep.c_s}")
    print(f"minimum leakage:             {rep.r_l}")
    print(f"omniscience rate:            {rep.r_co}")
    print(f"report digest {doc['digest']}")
    return EXIT_OK


def _analyze_fls(model, out):
    if model.num_users != 2:
        raise InvalidArgumentError("analysis of linear models needs exactly two users")
    rep = two_user_analyze(model)
    payload = {
        "kind": "fls-two-user",
        "q": model.ctx.q,
        "wiretap_capacity": rep.c_w,
        "minimum_leakage": rep.r_l,
        "common_part_1": rep.g1,
        "common_part_2": rep.g2,
        "discussion_1": rep.f1,
        "discussion_2": rep.f2,
        "joint_entropy_given_w": fls_entropy(model, (0, 1), given_w=True),
    }
    doc = io_mod.save_report("analyze", payload, out / "analyze.json")
    print(f"wiretap secret-key capacity: {rep.c_w}")
    print(f"minimum leakage:             {rep.r_l}")
    print(f"report digest {doc['digest']}")
    return EXIT_OK


def cmd_analyze(args):
    model = io_mod.load_model(args.model)
    out = _out_dir(args)
    if isinstance(model, TreePinModel):
        return _analyze_tree(model, out)
    if isinstance(model, FLSModel):
        return _analyze_fls(model, out)
    raise InvalidArgumentError("analyze expects a tree-pin or fls model file")


def cmd_reduce(args):
    model = io_mod.load_model(args.model)
    if not isinstance(model, TreePinModel):
        raise InvalidArgumentError("reduce expects a tree-pin model file")
    reduced, steps = reduce_model(model)
    io_mod.save_model(reduced, args.out)
    before = [e.n_e for e in model.edges]
    after = [e.n_e for e in reduced.edges]
    print(f"edges before: {before}")
    print(f"edges after:  {after}")
    print(f"wiretap columns: {model.n_w} -> {reduced.n_w}")
    print(f"steps: {len(steps)}")
    return EXIT_OK


def cmd_build_scheme(args):
    model = io_mod.load_model(args.model)
    if isinstance(model, TreePinModel):
        if args.corner:
            scheme = corner_point_scheme(
                model, seed=args.seed, attempts=args.attempts, n=args.n
            )
        elif all(e.n_e == 1 for e in model.edges) and args.n is None:
            scheme = build_unit_scheme(model)
            extract_key(model, scheme)
        else:
            scheme = build_general_scheme(
                model, seed=args.seed, attempts=args.attempts, n=args.n
            )
            extract_key(model, scheme)
        leak = leakage_rate(model, scheme)
        io_mod.save_scheme(scheme, args.out)
        key = scheme.meta.get("key", {})
        print(f"block length n = {scheme.n}, columns = {scheme.F.cols}")
        print(f"leakage: {leak}")
        print(f"key: rate {key.get('rate_logq')} log2(q), secret={key.get('secret')}")
        return EXIT_OK
    if isinstance(model, FLSModel):
        scheme = two_user_scheme(
            model, n_max=args.n or 4, seed=args.seed, attempts=args.attempts
        )
        io_mod.save_scheme(scheme, args.out)
        print(
            "leakage achieved/target (log2 q units): "
            f"{scheme.meta['achieved_leakage_logq']}/"
            f"{scheme.meta['target_leakage_logq']}"
        )
        return EXIT_OK
    raise InvalidArgumentError("build-scheme expects a tree-pin or fls model file")


def cmd_verify(args):
    model = io_mod.load_model(args.model)
    scheme = io_mod.load_scheme(args.scheme)
    checks = {
        "noninteractive": verify_noninteractive(model, scheme),
        "omniscience": verify_omniscience(model, scheme),
        "alignment": verify_alignment(model, scheme),
    }
    leak = leakage_rate(model, scheme)
    payload = {"checks": checks, "leakage": leak, "n": scheme.n, "columns": scheme.F.cols}
    if scheme.key_map is not None and isinstance(model, TreePinModel):
        key_report = extract_key(model, scheme)
        payload["key"] = key_report
        checks["key"] = all(
            key_report[k] is True for k in ("uniform", "recoverable", "secret")
        )
    io_mod.save_report("verify", payload, args.out)
    for name, ok in checks.items():
        print(f"{name}: {'ok' if ok else 'FAILED'}")
    print(f"leakage: {leak}")
    if all(checks.values()):
        return EXIT_OK
    return EXIT_INVALID


def cmd_simulate(args):
    model = io_mod.load_model(args.model)
    scheme = io_mod.load_scheme(args.scheme)
    if not verify_omniscience(model, scheme):
        print("scheme fails omniscience; nothing to simulate", file=sys.stderr)
        return EXIT_INVALID
    rng = np.random.default_rng(args.seed)
    ext = scheme.ext
    from .gfmatrix import hstack, random_matrix

    if isinstance(model, TreePinModel):
        from .treepin import compile_model

        fls = compile_model(model)
    else:
        fls = model
    mats = [m.embed_into(ext) for m in fls.user_mats]
    target = scheme.target.embed_into(ext)
    key_counts = {}
    recovered = 0
    for _ in range(args.samples):
        x = random_matrix(1, fls.l, ext, rng)
        comm = x @ scheme.F
        want = x @ target
        ok = True
        for i, mi in enumerate(mats):
            seen = hstack(x @ mi, comm)
            got = seen @ scheme.recovery[i]
            ok = ok and got == want
        recovered += ok
        if scheme.key_map is not None:
            key = tuple((x @ scheme.key_map).a[0].tolist())
            key_counts[key] = key_counts.get(key, 0) + 1
    payload = {
        "samples": args.samples,
        "seed": args.seed,
        "all_recovered": recovered == args.samples,
        "recovered": recovered,
        "distinct_keys": len(key_counts),
        "key_space": ext.q ** (scheme.key_map.cols if scheme.key_map is not None else 0),
    }
    io_mod.save_report("simulate", payload, args.out)
    print(f"recovered {recovered}/{args.samples} samples")
    if scheme.key_map is not None:
        print(f"distinct keys observed: {len(key_counts)} of {payload['key_space']}")
    return EXIT_OK if payload["all_recovered"] else EXIT_INVALID


def cmd_classical_dsbe(args):
    src = dsbe(args.p, args.eps)
    out = _out_dir(args)
    qs, f = f_curve(args.p, args.eps, grid_size=args.grid)
    io_mod.write_csv(out / "f_curve.csv", ("q", "f"), list(zip(qs, f)))
    io_mod.render_curve(
        out / "f_curve.png",
        qs,
        [("wiretapper advantage f(q)", f)],
        "input bias q",
        "bits",
        f"p={args.p}, eps={args.eps}",
    )
    payload = {
        "p": args.p,
        "eps": args.eps,
        "h_x_given_w": pmf_entropy(src, ("x",), ("w",)),
        "h_pair_given_w": pmf_entropy(src, ("x", "y"), ("w",)),
        "more_capable": more_capable_check(src, "x", "y", grid_size=args.grid),
        "not_less_noisy": not_less_noisy_check(src, "x", "y"),
    }
    doc = io_mod.save_report("classical-dsbe", payload, out / "dsbe.json")
    mc = payload["more_capable"]["ok"]
    nln = payload["not_less_noisy"]["ok"]
    print(f"more capable: {mc}   not less noisy witness: {nln}")
    print(f"report digest {doc['digest']}")
    return EXIT_OK


def cmd_classical_oneway(args):
    src = dsbe(args.p, args.eps)
    out = _out_dir(args)
    payload = {
        "p": args.p,
        "eps": args.eps,
        "capacity_lb_grid": oneway_capacity_lb(src, "x", "y"),
        "capacity_lb_search": oneway_capacity_search(src, "x", "y"),
        "leakage": oneway_leakage_report(src, "x", "y"),
    }
    doc = io_mod.save_report("classical-oneway", payload, out / "oneway.json")
    print(f"one-way capacity lower bound: {payload['capacity_lb_search']['value']:.6g}")
    print(f"one-way leakage: {payload['leakage']['value']:.6g}")
    print(f"report digest {doc['digest']}")
    return EXIT_OK


def cmd_classical_two_msg(args):
    out = _out_dir(args)
    payload = two_msg_report(args.p, args.eps)
    doc = io_mod.save_report("classical-two-msg", payload, out / "two_msg.json")
    print(f"verdict: {payload['verdict']}")
    print(
        "two-message leakage lower bound: "
        f"{payload['two_msg_leakage_lb']}"
    )
    print(f"two-message capacity lower bound: {payload['two_msg_capacity_lb']:.6g}")
    print(f"report digest {doc['digest']}")
    return EXIT_OK


def _load_pmf(path):
    model = io_mod.load_model(path)
    if not isinstance(model, JointPMF):
        raise InvalidArgumentError("expected a pmf model file")
    return model


def cmd_classical_positivity(args):
    src = _load_pmf(args.model)
    out = _out_dir(args)
    best = positivity_search(src, budget=args.budget)
    payload = {"found": best is not None, "certificate": best}
    doc = io_mod.save_report("classical-positivity", payload, out / "positivity.json")
    if best is None:
        print("no partition certificate")
    else:
        print(f"certificate margin: {best['margin']:.6g} bits")
        print(f"parts: {best['parts']}")
    print(f"report digest {doc['digest']}")
    return EXIT_OK if best is not None else EXIT_SEARCH


def _parse_parts(text):
    try:
        raw = json.loads(text)
        return {k: (tuple(v[0]), tuple(v[1])) for k, v in raw.items()}
    except (json.JSONDecodeError, TypeError, IndexError, KeyError) as exc:
        raise InvalidArgumentError(f"bad --parts value: {exc}") from exc


def cmd_classical_block_swap(args):
    src = _load_pmf(args.model)
    out = _out_dir(args)
    if args.parts:
        parts = _parse_parts(args.parts)
    else:
        best = positivity_search(src)
        if best is None:
            print("no partition certificate to refine", file=sys.stderr)
            return EXIT_SEARCH
        parts = best["parts"]
    rows, first = block_swap_search(src, parts, n_max=args.n_max)
    io_mod.write_csv(
        out / "block_swap.csv",
        ("n", "lhs", "rhs", "q1"),
        [(r["n"], r["lhs"], r["rhs"], r["q1"]) for r in rows],
    )
    io_mod.render_curve(
        out / "block_swap.png",
        [r["n"] for r in rows],
        [
            ("pattern equivocation given wiretapper (lhs)", [r["lhs"] for r in rows]),
            ("communication cost bound (rhs)", [r["rhs"] for r in rows]),
        ],
        "block length n",
        "bits",
        "block-swap positivity certificate",
    )
    payload = {"parts": parts, "rows": rows, "first_crossing": first}
    doc = io_mod.save_report("classical-block-swap", payload, out / "block_swap.json")
    if first is None:
        print(f"no crossing for even n <= {args.n_max}")
    else:
        print(f"first crossing at n = {first}")
    print(f"report digest {doc['digest']}")
    return EXIT_OK if first is not None else EXIT_SEARCH


def build_parser():
    ap = argparse.ArgumentParser(
        prog="secomni",
        description="exact secure-omniscience and wiretap key-agreement toolkit",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="exact capacities and leakage")
    p.add_argument("model")
    p.add_argument("--out-dir", default=".")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("reduce", help="strip wiretapper-resolvable components")
    p.add_argument("model")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("build-scheme", help="construct and verify a scheme")
    p.add_argument("model")
    p.add_argument("--out", required=True)
    p.add_argument("--n", type=int, default=None, help="block length override")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--attempts", type=int, default=64)
    p.add_argument(
        "--corner",
        action="store_true",
        help="build the minimum-communication corner point instead",
    )
    p.set_defaults(func=cmd_build_scheme)

    p = sub.add_parser("verify", help="re-verify a saved scheme")
    p.add_argument("model")
    p.add_argument("scheme")
    p.add_argument("--out", default="verify.json")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("simulate", help="Monte-Carlo transmission check")
    p.add_argument("model")
    p.add_argument("scheme")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="simulate.json")
    p.set_defaults(func=cmd_simulate)

    c = sub.add_parser("classical", help="pmf-based analyses")
    csub = c.add_subparsers(dest="classical_command", required=True)

    p = csub.add_parser("dsbe", help="pair-erasure source certificates")
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--grid", type=int, default=1001)
    p.add_argument("--out-dir", default=".")
    p.set_defaults(func=cmd_classical_dsbe)

    p = csub.add_parser("oneway", help="one-way capacity and leakage bounds")
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--out-dir", default=".")
    p.set_defaults(func=cmd_classical_oneway)

    p = csub.add_parser("two-msg", help="two-message duality verdict")
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--out-dir", default=".")
    p.set_defaults(func=cmd_classical_two_msg)

    p = csub.add_parser("positivity", help="partition certificate search")
    p.add_argument("model")
    p.add_argument("--budget", type=int, default=10_000_000)
    p.add_argument("--out-dir", default=".")
    p.set_defaults(func=cmd_classical_positivity)

    p = csub.add_parser("block-swap", help="block-length certificate refinement")
    p.add_argument("model")
    p.add_argument("--parts", default=None, help='JSON like {"z1": [[0],[1]], ...}')
    p.add_argument("--n-max", type=int, default=40)
    p.add_argument("--out-dir", default=".")
    p.set_defaults(func=cmd_classical_block_swap)

    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except (InvalidArgumentError, ResourceLimitError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except SchemeSearchError as exc:
        print(f"search exhausted: {exc}", file=sys.stderr)
        return EXIT_SEARCH


if __name__ == "__main__":
    sys.exit(main())
