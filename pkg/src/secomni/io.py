"""File formats: JSON models, schemes and reports, CSV tables, PNG figures.

All writers are deterministic: rerunning a command on the same inputs
produces byte-identical files.  Exact quantities are serialized as
numerator/base pairs next to their float rendering.
"""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction
from pathlib import Path

import matplotlib
import numpy as np

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .classical import JointPMF  # noqa: E402
from .errors import InvalidArgumentError  # noqa: E402
from .fls import EntropyValue, FLSModel  # noqa: E402
from .gf import gf_context  # noqa: E402
from .gfmatrix import MatrixGF  # noqa: E402
from .schemes import CommScheme  # noqa: E402
from .treepin import Edge, TreePinModel  # noqa: E402

MODEL_FORMAT = "secomni-model"
SCHEME_FORMAT = "secomni-scheme"
REPORT_FORMAT = "secomni-report"
FORMAT_VERSION = 1


def _jsonify(obj):
    """Recursively convert exact and numpy-valued objects to JSON types."""
    if isinstance(obj, EntropyValue):
        return {
            "numerator": _jsonify(obj.numerator),
            "q": obj.q,
            "bits": float(obj.bits),
        }
    if isinstance(obj, Fraction):
        return {"fraction": [obj.numerator, obj.denominator]}
    if isinstance(obj, MatrixGF):
        return obj.to_lists()
    if isinstance(obj, dict):
        return {str(k): _jsonify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonify(v) for v in obj]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return _jsonify(obj.tolist())
    if isinstance(obj, float) and (obj != obj or obj in (float("inf"), float("-inf"))):
        return repr(obj)
    return obj


def _dump(obj, path):
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    Path(path).write_text(text)


def _load(path):
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InvalidArgumentError(f"cannot read {path}: {exc}") from exc


def payload_digest(payload):
    """sha256 over the canonical JSON encoding of a report payload."""
    canon = json.dumps(_jsonify(payload), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode("utf-8")).hexdigest()


# -- models -----------------------------------------------------------------


def save_model(model, path):
    """Write a tree-PIN model, linear source model, or pmf source to JSON."""
    if isinstance(model, TreePinModel):
        doc = {
            "format": MODEL_FORMAT,
            "version": FORMAT_VERSION,
            "kind": "tree-pin",
            "q": model.ctx.q,
            "num_vertices": model.num_vertices,
            "edges": [[e.u, e.v, e.n_e] for e in model.edges],
            "wiretap": model.W.to_lists(),
        }
    elif isinstance(model, FLSModel):
        doc = {
            "format": MODEL_FORMAT,
            "version": FORMAT_VERSION,
            "kind": "fls",
            "q": model.ctx.q,
            "users": [m.to_lists() for m in model.user_mats],
            "wiretap": model.W.to_lists(),
        }
    elif isinstance(model, JointPMF):
        doc = {
            "format": MODEL_FORMAT,
            "version": FORMAT_VERSION,
            "kind": "pmf",
            "axes": list(model.axes),
            "table": model.table.tolist(),
        }
    else:
        raise InvalidArgumentError("unsupported model object")
    _dump(doc, path)


def _check_header(doc, expected_format):
    if not isinstance(doc, dict) or doc.get("format") != expected_format:
        raise InvalidArgumentError(f"not a {expected_format} file")
    if doc.get("version") != FORMAT_VERSION:
        raise InvalidArgumentError(f"unsupported version {doc.get('version')!r}")


def _matrix_from(ctx, rows, what):
    try:
        arr = np.array(rows, dtype=np.int64)
    except (TypeError, ValueError) as exc:
        raise InvalidArgumentError(f"bad {what} matrix: {exc}") from exc
    if arr.ndim != 2:
        if arr.ndim == 1 and arr.size == 0:
            arr = arr.reshape(0, 0)
        else:
            raise InvalidArgumentError(f"bad {what} matrix: expected 2-D rows")
    return MatrixGF(ctx, arr)


def load_model(path):
    """Read a model file; returns TreePinModel, FLSModel, or JointPMF."""
    doc = _load(path)
    _check_header(doc, MODEL_FORMAT)
    kind = doc.get("kind")
    if kind == "tree-pin":
        ctx = gf_context(int(doc["q"]))
        edges = [Edge(int(u), int(v), int(n)) for u, v, n in doc["edges"]]
        l = sum(e.n_e for e in edges)
        w_rows = doc["wiretap"]
        if not w_rows:
            w = MatrixGF.zeros(ctx, l, 0)
        else:
            w = _matrix_from(ctx, w_rows, "wiretap")
        return TreePinModel(int(doc["num_vertices"]), edges, ctx, w)
    if kind == "fls":
        ctx = gf_context(int(doc["q"]))
        users = [_matrix_from(ctx, rows, "user") for rows in doc["users"]]
        if not users:
            raise InvalidArgumentError("fls model needs at least one user")
        l = users[0].rows
        w_rows = doc["wiretap"]
        w = MatrixGF.zeros(ctx, l, 0) if not w_rows else _matrix_from(ctx, w_rows, "wiretap")
        return FLSModel(ctx, users, w)
    if kind == "pmf":
        return JointPMF(doc["axes"], np.array(doc["table"], dtype=float))
    raise InvalidArgumentError(f"unknown model kind {kind!r}")


# -- schemes ----------------------------------------------------------------


def _coeff_matrix(ctx, m):
    """Matrix entries as coefficient lists over the prime subfield."""
    return [[ctx.coeffs(int(v)) for v in row] for row in m.a]


def _encode_coeffs(ctx, coeffs):
    v = 0
    for c in reversed(coeffs):
        ci = int(c)
        if not 0 <= ci < ctx.p:
            raise InvalidArgumentError("coefficient out of range")
        v = v * ctx.p + ci
    return v


def save_scheme(scheme, path):
    """Write a communication scheme to JSON (coefficient encoding)."""
    ext = scheme.ext
    doc = {
        "format": SCHEME_FORMAT,
        "version": FORMAT_VERSION,
        "q": scheme.base_ctx.q,
        "n": scheme.n,
        "modulus": list(ext.modulus),
        "columns": _coeff_matrix(ext, scheme.F),
        "owners": list(scheme.owners),
        "target": scheme.target.to_lists(),
    }
    if scheme.key_map is not None:
        doc["key"] = {
            "edge": scheme.key_edge,
            "map": _coeff_matrix(ext, scheme.key_map),
        }
    if "comm_rate_logq" in scheme.meta:
        doc["rates_logq"] = {
            "communication": scheme.meta["comm_rate_logq"],
            "key": scheme.meta["key_rate_logq"],
        }
    _dump(doc, path)


def load_scheme(path):
    """Read a scheme file back into a CommScheme."""
    doc = _load(path)
    _check_header(doc, SCHEME_FORMAT)
    q = int(doc["q"])
    n = int(doc["n"])
    base = gf_context(q)
    ext = gf_context(base.p, n * base.k)
    if list(ext.modulus) != [int(c) for c in doc["modulus"]]:
        raise InvalidArgumentError(
            "scheme modulus does not match the canonical modulus for its field"
        )
    cols = doc["columns"]
    arr = np.array(
        [[_encode_coeffs(ext, cell) for cell in row] for row in cols], dtype=np.int64
    ) if cols else np.zeros((0, 0), dtype=np.int64)
    f = MatrixGF(ext, arr)
    target = _matrix_from(base, doc["target"], "target")
    scheme = CommScheme(
        base_ctx=base,
        ext=ext,
        n=n,
        F=f,
        owners=tuple(int(o) for o in doc["owners"]),
        target=target,
    )
    if "key" in doc:
        key_rows = doc["key"]["map"]
        karr = np.array(
            [[_encode_coeffs(ext, cell) for cell in row] for row in key_rows],
            dtype=np.int64,
        )
        scheme.key_map = MatrixGF(ext, karr)
        edge = doc["key"].get("edge")
        scheme.key_edge = None if edge is None else int(edge)
    if "rates_logq" in doc:
        scheme.meta["comm_rate_logq"] = int(doc["rates_logq"]["communication"])
        scheme.meta["key_rate_logq"] = int(doc["rates_logq"]["key"])
    return scheme


# -- reports ----------------------------------------------------------------


def save_report(kind, payload, path):
    """Write a report JSON with a digest over its canonical payload."""
    body = _jsonify(payload)
    doc = {
        "format": REPORT_FORMAT,
        "version": FORMAT_VERSION,
        "kind": kind,
        "digest": payload_digest(payload),
        "payload": body,
    }
    _dump(doc, path)
    return doc


def load_report(path):
    doc = _load(path)
    _check_header(doc, REPORT_FORMAT)
    if payload_digest(doc["payload"]) != doc["digest"]:
        raise InvalidArgumentError("report digest mismatch")
    return doc


# -- delimited output and figures -------------------------------------------


def write_csv(path, header, rows):
    """Write a CSV with deterministic float formatting (%.12g)."""

    def fmt(v):
        if isinstance(v, (float, np.floating)):
            return format(float(v), ".12g")
        return str(v)

    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(fmt(v) for v in row))
    Path(path).write_text("\n".join(lines) + "\n")


def render_curve(path, xs, series, xlabel, ylabel, title):
    """Render one or more labelled series to a PNG next to its CSV."""
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for label, ys in series:
        ax.plot(xs, ys, label=label)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    ax.grid(True, alpha=0.3)
    if len(series) > 1:
        ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
