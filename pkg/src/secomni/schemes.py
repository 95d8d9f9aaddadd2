"""Construction and exact verification of omniscience communication schemes.

A scheme operates on n i.i.d. realizations of a source over F_q by viewing
the n-fold repetition of each base coordinate as one symbol of F_{q^n}.  The
communication is X^n @ F for a matrix F over the extension field whose
columns are each computable by their owning terminal.  All verification is
by exact rank identities; randomized builders draw candidates, verify from
scratch, and retry within an attempt budget.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

import numpy as np

from .errors import (
    InternalCheckError,
    InvalidArgumentError,
    SchemeSearchError,
)
from .fls import EntropyValue, FLSModel, rank_entropy, two_user_analyze
from .gf import gf_context
from .gfmatrix import (
    MatrixGF,
    hstack,
    inverse,
    left_nullspace_basis,
    random_matrix,
    rank,
    right_kernel_basis,
    rref,
    solve_right,
)
from .treepin import Edge, TreePinModel, compile_model, irreducible_check

DEFAULT_ATTEMPTS = 64


@dataclass
class CommScheme:
    """A non-interactive linear communication scheme over F_{q^n}.

    Attributes:
        base_ctx: Prime field context F_q of the source.
        ext: Field context F_{q^n} the scheme works over.
        n: Block length (extension degree over the base field).
        F: l-by-c communication matrix over ext; column j is sent by
            owners[j].
        owners: Terminal index per column.
        target: l-by-t base-field matrix of the functions every terminal must
            recover (identity-like selector for full omniscience).
        key_map: Optional l-by-s matrix over ext extracting the secret key.
        key_edge: Edge index the key is read from, when applicable.
        recovery: Per-user recovery maps, filled by verify_omniscience.
        meta: Free-form exact bookkeeping (rates, search diagnostics).
    """

    base_ctx: object
    ext: object
    n: int
    F: MatrixGF
    owners: Tuple[int, ...]
    target: MatrixGF
    key_map: Optional[MatrixGF] = None
    key_edge: Optional[int] = None
    recovery: Dict[int, MatrixGF] = field(default_factory=dict)
    meta: dict = field(default_factory=dict)

    @property
    def num_symbols(self):
        """Communication symbols of F_{q^n} per block of n realizations."""
        return self.F.cols

    def __repr__(self):
        return (
            f"CommScheme(q={self.base_ctx.q}, n={self.n}, columns={self.F.cols}, "
            f"key={'yes' if self.key_map is not None else 'no'})"
        )


def _as_fls(model):
    if isinstance(model, TreePinModel):
        return compile_model(model)
    if isinstance(model, FLSModel):
        return model
    raise InvalidArgumentError("expected a TreePinModel or FLSModel")


def _ceil_log(base, x):
    """Smallest t >= 0 with base**t >= x."""
    t = 0
    v = 1
    while v < x:
        v *= base
        t += 1
    return t


def default_block_length(model):
    """Default n for randomized builders: ceil(log_q(sum_e n_e)) + 1."""
    total = model.l
    return _ceil_log(model.ctx.q, max(total, 1)) + 1


def _ext_context(model, n):
    if n < 1:
        raise InvalidArgumentError("block length must be >= 1")
    return gf_context(model.ctx.p, n * model.ctx.k)


def _first_s_indices(model, edge_index, s):
    start, _ = model.block_range(edge_index)
    return list(range(start, start + s))


def sample_alignment_rows(model, n=None, seed=None):
    """Draw one candidate alignment row block S for a tree-PIN model.

    S is s uniform rows of the left null space of the lifted wiretap matrix,
    where s = min_e n_e.  The draw succeeds when every edge's first-s column
    block of S is invertible, which is exactly the condition the scheme
    builders need.

    Args:
        model: Irreducible TreePinModel with min_e n_e >= 1.
        n: Block length; default ceil(log_q(sum_e n_e)) + 1.
        seed: Int seed or numpy Generator.

    Returns:
        (S, ok): the s-by-l candidate over F_{q^n} and the invertibility flag.
    """
    ok_model, _ = irreducible_check(model)
    if not ok_model:
        raise InvalidArgumentError("model must be irreducible; reduce it first")
    s = min(e.n_e for e in model.edges)
    if s < 1:
        raise InvalidArgumentError("every edge needs multiplicity >= 1")
    if n is None:
        n = default_block_length(model)
    ext = _ext_context(model, n)
    wn = model.W.embed_into(ext)
    nullb = left_nullspace_basis(wn)
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    s_mat, ok = _draw_alignment(model, ext, nullb, s, rng)
    return s_mat, ok


def _draw_alignment(model, ext, nullb, s, rng):
    r_mat = random_matrix(s, nullb.rows, ext, rng)
    s_mat = r_mat @ nullb
    ok = all(
        rank(s_mat.columns(_first_s_indices(model, idx, s))) == s
        for idx in range(len(model.edges))
    )
    return s_mat, ok


def _columns_from_alignment(model, ext, s_mat, s):
    """Communication columns determined by an accepted alignment block S."""
    l = model.l
    parents = model.parent_edges()
    blocks = {
        idx: s_mat.columns(_first_s_indices(model, idx, s))
        for idx in range(len(model.edges))
    }
    inv_blocks = {idx: inverse(b) for idx, b in blocks.items()}
    cols = []
    owners = []
    # Tree part: internal node i relays its root-side edge into each other
    # incident edge.
    for i in range(model.num_vertices):
        inc = model.incident_edges(i)
        if len(inc) < 2:
            continue
        up = parents[i]
        if up is None:  # pragma: no cover - the root is a leaf
            raise InternalCheckError("internal node without a root-side edge")
        up_rows = _first_s_indices(model, up, s)
        for e in inc:
            if e == up:
                continue
            a_block = -(inv_blocks[e] @ blocks[up])
            col = np.zeros((l, s), dtype=np.int64)
            for j, r in enumerate(up_rows):
                col[r, j] = 1
            col[_first_s_indices(model, e, s), :] = a_block.a
            cols.append(col)
            owners.extend([i] * s)
    # Extra part: coordinates beyond the first s of an edge are revealed
    # masked by that edge's first-s symbols.
    for idx, e in enumerate(model.edges):
        if e.n_e <= s:
            continue
        start, stop = model.block_range(idx)
        owner = min(e.u, e.v)
        for r in range(start + s, stop):
            mu = -(inv_blocks[idx] @ s_mat.columns([r]))
            col = np.zeros((l, 1), dtype=np.int64)
            col[r, 0] = 1
            col[_first_s_indices(model, idx, s), :] = mu.a
            cols.append(col)
            owners.append(owner)
    if cols:
        f = MatrixGF(ext, np.hstack(cols))
    else:
        f = MatrixGF.zeros(ext, l, 0)
    return f, tuple(owners)


def _finish_scheme(model, ext, n, f, owners, s_mat):
    fls = _as_fls(model)
    target = MatrixGF.identity(model.ctx, model.l)
    scheme = CommScheme(
        base_ctx=model.ctx,
        ext=ext,
        n=n,
        F=f,
        owners=owners,
        target=target,
        meta={"alignment_rows": s_mat},
    )
    if not verify_noninteractive(fls, scheme):
        return None
    if not verify_alignment(fls, scheme):
        return None
    if not verify_omniscience(fls, scheme):
        return None
    return scheme


def build_general_scheme(model, seed=0, attempts=DEFAULT_ATTEMPTS, n=None):
    """Randomized omniscience scheme with minimum leakage for any tree-PIN.

    Draws alignment rows S from the left null space of the lifted wiretap
    matrix until every edge's leading block is invertible, derives the
    relayed communication from S, and verifies omniscience, alignment, and
    non-interactivity from scratch.  For an irreducible model the leakage is
    exactly (sum_e n_e - n_w - min_e n_e) log2 q.

    Args:
        model: Irreducible TreePinModel with min_e n_e >= 1.
        seed: RNG seed for the attempt sequence.
        attempts: Attempt budget.
        n: Block length override; default ceil(log_q(sum_e n_e)) + 1.

    Returns:
        Verified CommScheme.

    Raises:
        SchemeSearchError: If no draw verifies within the budget.
        InvalidArgumentError: If the model is reducible or has a zero edge.
    """
    ok_model, _ = irreducible_check(model)
    if not ok_model:
        raise InvalidArgumentError("model must be irreducible; reduce it first")
    s = min(e.n_e for e in model.edges)
    if s < 1:
        raise InvalidArgumentError("every edge needs multiplicity >= 1")
    if n is None:
        n = default_block_length(model)
    ext = _ext_context(model, n)
    wn = model.W.embed_into(ext)
    nullb = left_nullspace_basis(wn)
    rng = np.random.default_rng(seed)
    fails = {"singular_block": 0, "verification": 0}
    for _ in range(attempts):
        s_mat, ok = _draw_alignment(model, ext, nullb, s, rng)
        if not ok:
            fails["singular_block"] += 1
            continue
        f, owners = _columns_from_alignment(model, ext, s_mat, s)
        scheme = _finish_scheme(model, ext, n, f, owners, s_mat)
        if scheme is None:  # pragma: no cover - construction is exact given ok
            fails["verification"] += 1
            continue
        scheme.meta["attempts_used"] = sum(fails.values()) + 1
        return scheme
    raise SchemeSearchError(
        f"no aligned scheme found in {attempts} attempts at n={n}",
        diagnostics={"attempts": attempts, "n": n, **fails},
    )


def build_tree_scheme(model, seed=0, attempts=DEFAULT_ATTEMPTS, n=None):
    """Randomized scheme for uniform multiplicity: every edge carries s symbols.

    Identical to the general builder specialized to n_e = s for all edges (no
    masked extra coordinates are ever emitted).
    """
    mults = {e.n_e for e in model.edges}
    if len(mults) != 1:
        raise InvalidArgumentError("uniform builder needs equal multiplicities")
    return build_general_scheme(model, seed=seed, attempts=attempts, n=n)


def build_path_scheme(model, seed=0, attempts=DEFAULT_ATTEMPTS, n=None):
    """Uniform-multiplicity builder restricted to path graphs.

    The relayed columns on a path satisfy the alternating product recursion
    linking consecutive alignment blocks; tests assert it.  Output family is
    identical to build_tree_scheme on the same input.
    """
    if any(model.degree(v) > 2 for v in range(model.num_vertices)):
        raise InvalidArgumentError("model is not a path")
    return build_tree_scheme(model, seed=seed, attempts=attempts, n=n)


def build_unit_scheme(model):
    """Deterministic scheme for unit multiplicities over F_{q^(|E| - n_w)}.

    Column-reduces the wiretap matrix to echelon form [I | A^T]^T (after a row
    permutation), reads off one explicit alignment row vector with all entries
    nonzero, and derives the relayed communication from it.  No randomness:
    repeated runs are identical, with block length exactly |E| - n_w.

    Args:
        model: Irreducible TreePinModel with n_e = 1 on every edge.

    Returns:
        Verified CommScheme over F_{q^(|E| - n_w)}.
    """
    if any(e.n_e != 1 for e in model.edges):
        raise InvalidArgumentError("unit builder needs n_e = 1 on every edge")
    ok_model, _ = irreducible_check(model)
    if not ok_model:
        raise InvalidArgumentError("model must be irreducible; reduce it first")
    num_edges = len(model.edges)
    m = model.n_w
    k = num_edges - m
    if k < 1:  # pragma: no cover - irreducibility forces n_w < |E|
        raise InternalCheckError("irreducible unit model needs n_w < |E|")
    ext = gf_context(model.ctx.p, k * model.ctx.k)
    # Column echelon form of W: pivot rows carry an identity, the remaining
    # rows carry the dependence coefficients.
    ech, rk, piv_rows = rref(model.W.transpose())
    if rk != m:  # pragma: no cover - models enforce full column rank
        raise InternalCheckError("wiretap matrix lost rank")
    ce = ech.a[:m].T  # l x m, ce[piv_rows[t], :] = e_t
    nonpiv = [r for r in range(num_edges) if r not in piv_rows]
    p = model.ctx.p
    s_vals = np.zeros(num_edges, dtype=np.int64)
    for i, r in enumerate(nonpiv):
        s_vals[r] = p**i  # basis element x^i of the extension
    for t, r in enumerate(piv_rows):
        # -(sum_i ce[nonpiv[i], t] x^i): digits give the encoding directly.
        digits = [int(ce[nonpiv[i], t]) for i in range(k)]
        enc = 0
        for d in reversed(digits):
            enc = enc * p + d
        s_vals[r] = ext._neg_scalar(enc)
    if np.any(s_vals == 0):  # pragma: no cover - guaranteed by irreducibility
        raise InternalCheckError("alignment vector has a zero entry")
    s_mat = MatrixGF(ext, s_vals.reshape(1, -1))
    wn = model.W.embed_into(ext)
    if not (s_mat @ wn).is_zero():
        raise InternalCheckError("alignment vector does not null the wiretap matrix")
    f, owners = _columns_from_alignment(model, ext, s_mat, 1)
    scheme = _finish_scheme(model, ext, k, f, owners, s_mat)
    if scheme is None:  # pragma: no cover - deterministic construction
        raise InternalCheckError("unit scheme failed verification")
    return scheme


# -- verification -----------------------------------------------------------


def _user_mats_ext(fls, ext):
    return [m.embed_into(ext) for m in fls.user_mats]


def verify_noninteractive(model, scheme):
    """Check each column is computable by its owner from its own observation."""
    fls = _as_fls(model)
    if len(scheme.owners) != scheme.F.cols:
        raise InvalidArgumentError("owner list length mismatch")
    mats = _user_mats_ext(fls, scheme.ext)
    for owner in set(scheme.owners):
        cols = [j for j, o in enumerate(scheme.owners) if o == owner]
        if not 0 <= owner < fls.num_users:
            return False
        if solve_right(mats[owner], scheme.F.columns(cols)) is None:
            return False
    return True


def verify_omniscience(model, scheme):
    """Check every user recovers the target functions; attach recovery maps.

    User i must satisfy col(target) ⊆ col([M_i | F]) over the extension
    field.  On success scheme.recovery[i] holds the canonical map R_i with
    [M_i | F] @ R_i = target.
    """
    fls = _as_fls(model)
    mats = _user_mats_ext(fls, scheme.ext)
    target = scheme.target.embed_into(scheme.ext)
    recovery = {}
    for i, mi in enumerate(mats):
        known = hstack(mi, scheme.F)
        sol = solve_right(known, target)
        if sol is None:
            return False
        recovery[i] = sol
    scheme.recovery = recovery
    return True


def verify_alignment(model, scheme):
    """Check the lifted wiretap observation is a function of the communication."""
    fls = _as_fls(model)
    wn = fls.W.embed_into(scheme.ext)
    return solve_right(scheme.F, wn) is not None


def leakage_rate(model, scheme):
    """Exact communication leakage to the wiretapper per source realization.

    H(F | Z_w^n)/n = (rank [F | W] - rank W) log2 q, computed over the
    extension field.

    Returns:
        EntropyValue in log2(q) units.
    """
    fls = _as_fls(model)
    wn = fls.W.embed_into(scheme.ext)
    num = rank(hstack(scheme.F, wn)) - rank(wn)
    return EntropyValue(num, fls.ctx.q)


def communication_rate(scheme):
    """Total communication rate per source realization in log2(q) units."""
    return EntropyValue(scheme.F.cols, scheme.base_ctx.q)


def extract_key(model, scheme):
    """Extract a perfectly secret key and verify it exactly.

    The key is the n-fold lift of the first min_e n_e coordinates of the
    lowest-index leaf-incident edge.  The checks are exact rank identities:

      * uniformity: the key map has full column rank s;
      * recoverability: every user computes the key from its observation and
        the communication, H(K | F, Z_i^n) = 0;
      * secrecy: rank [K | F | W] = s + rank [F | W], i.e.
        I(K ; F, Z_w^n) = 0, so the key is uniform given everything the
        wiretapper sees.

    The key map and edge are attached to the scheme.

    Args:
        model: TreePinModel the scheme was built for.
        scheme: Verified CommScheme.

    Returns:
        Report dict with rate and the three verdicts (all must be True).
    """
    if not isinstance(model, TreePinModel):
        raise InvalidArgumentError("key extraction needs a tree-PIN model")
    s = min(e.n_e for e in model.edges)
    if s < 1:
        raise InvalidArgumentError("every edge needs multiplicity >= 1")
    leaf_set = set(model.leaves())
    key_edge = next(
        idx
        for idx, e in enumerate(model.edges)
        if e.u in leaf_set or e.v in leaf_set
    )
    sel = np.zeros((model.l, s), dtype=np.int64)
    for j, r in enumerate(_first_s_indices(model, key_edge, s)):
        sel[r, j] = 1
    key = MatrixGF(scheme.ext, sel)
    fls = _as_fls(model)
    mats = _user_mats_ext(fls, scheme.ext)
    wn = fls.W.embed_into(scheme.ext)
    uniform = rank(key) == s
    recoverable = all(
        solve_right(hstack(mi, scheme.F), key) is not None for mi in mats
    )
    fw = hstack(scheme.F, wn)
    secret = rank(hstack(key, fw)) == s + rank(fw)
    scheme.key_map = key
    scheme.key_edge = key_edge
    report = {
        "rate_logq": s,
        "uniform": uniform,
        "recoverable": recoverable,
        "secret": secret,
    }
    scheme.meta["key"] = report
    return report


def corner_point_scheme(model, seed=0, attempts=DEFAULT_ATTEMPTS, n=None):
    """Scheme attaining the minimum-communication corner point exactly.

    Restricts the source to the first s = min_e n_e coordinates of every
    edge, splits the wiretapper's view into the part determined by the
    restricted source and a full-column-rank remainder, builds a uniform
    aligned scheme against the restricted wiretapper, and embeds it back.
    The result communicates exactly (|E| - 1) s log2 q per realization and
    extracts a key of rate s log2 q = C_W that is verified perfectly secret
    against the full wiretap observation.

    Every user recovers the restricted source (the scheme's target); full
    omniscience is deliberately not attempted at this operating point.

    Returns:
        Verified CommScheme with key attached; meta carries the exact rate
        pair {"comm_rate_logq", "key_rate_logq"}.

    Raises:
        InvalidArgumentError: If the model is reducible, has a zero edge, or
            has fewer than two edges.
        SchemeSearchError: If the randomized sub-build exhausts its budget.
    """
    ok_model, _ = irreducible_check(model)
    if not ok_model:
        raise InvalidArgumentError("model must be irreducible; reduce it first")
    if len(model.edges) < 2:
        raise InvalidArgumentError("corner point needs at least two edges")
    s = min(e.n_e for e in model.edges)
    if s < 1:
        raise InvalidArgumentError("every edge needs multiplicity >= 1")
    ctx = model.ctx
    num_edges = len(model.edges)
    sub_rows = []
    extra_rows = []
    for idx in range(num_edges):
        start, stop = model.block_range(idx)
        sub_rows.extend(range(start, start + s))
        extra_rows.extend(range(start + s, stop))
    w_sub_part = MatrixGF(ctx, model.W.a[sub_rows, :])
    w_extra_part = MatrixGF(ctx, model.W.a[extra_rows, :])
    kernel = right_kernel_basis(w_extra_part)
    w_sub = w_sub_part @ kernel
    if rank(w_sub) != w_sub.cols:  # pragma: no cover - kernel columns stay independent
        raise InternalCheckError("restricted wiretap matrix lost column rank")
    sub_model = TreePinModel(
        model.num_vertices,
        [Edge(e.u, e.v, s) for e in model.edges],
        ctx,
        w_sub,
    )
    sub_ok, _ = irreducible_check(sub_model)
    if not sub_ok:
        raise InternalCheckError("restricted model must inherit irreducibility")
    sub_scheme = build_tree_scheme(sub_model, seed=seed, attempts=attempts, n=n)
    ext = sub_scheme.ext
    lift = np.zeros((model.l, sub_scheme.F.cols), dtype=np.int64)
    lift[sub_rows, :] = sub_scheme.F.a
    f_full = MatrixGF(ext, lift)
    target = np.zeros((model.l, s * num_edges), dtype=np.int64)
    for j, r in enumerate(sub_rows):
        target[r, j] = 1
    scheme = CommScheme(
        base_ctx=ctx,
        ext=ext,
        n=sub_scheme.n,
        F=f_full,
        owners=sub_scheme.owners,
        target=MatrixGF(ctx, target),
        meta={
            "comm_rate_logq": s * (num_edges - 1),
            "key_rate_logq": s,
        },
    )
    fls = _as_fls(model)
    if not verify_noninteractive(fls, scheme):  # pragma: no cover - support is per edge
        raise InternalCheckError("corner scheme not non-interactive")
    if not verify_omniscience(fls, scheme):  # pragma: no cover - inherited from sub-build
        raise InternalCheckError("corner scheme misses its restricted target")
    report = extract_key(model, scheme)
    if not (report["uniform"] and report["recoverable"] and report["secret"]):
        raise InternalCheckError("corner-point key failed exact verification")
    return scheme


def two_user_scheme(model, n_max=4, seed=0, attempts=16):
    """Omniscience scheme for a two-user source at the optimal-leakage target.

    Sends the exact decoupling discussion, then completes omniscience with a
    random linear hash of each user's observation at the conditional-entropy
    rates.  Each candidate is verified for omniscience by rank; the search
    succeeds when the achieved leakage equals the two-user optimum
    H(Z_1, Z_2 | Z_w) - C_W.

    Args:
        model: Two-user FLSModel.
        n_max: Largest block length tried.
        seed: RNG seed.
        attempts: Draws per block length.

    Returns:
        Verified CommScheme whose meta records achieved and target leakage.

    Raises:
        SchemeSearchError: If no draw attains the target; the best verified
            scheme (possibly with higher leakage) rides in the error's best
            attribute.
    """
    report = two_user_analyze(model)
    target_leak = report.r_l.numerator
    f1, f2 = report.f1, report.f2
    base_cols = hstack(f1, f2)
    base_owners = tuple([0] * f1.cols + [1] * f2.cols)
    m1, m2 = model.user_mats
    t1 = rank_entropy(m1, [m2, base_cols])
    t2 = rank_entropy(m2, [m1, base_cols])
    target = hstack(m1, m2)
    rng = np.random.default_rng(seed)
    best = None
    best_leak = None
    for n in range(1, n_max + 1):
        ext = _ext_context(model, n)
        f_base = base_cols.embed_into(ext)
        m1e = m1.embed_into(ext)
        m2e = m2.embed_into(ext)
        wn = model.W.embed_into(ext)
        for _ in range(attempts):
            l1 = m1e @ random_matrix(m1.cols, t1, ext, rng)
            l2 = m2e @ random_matrix(m2.cols, t2, ext, rng)
            f = hstack(f_base, l1, l2)
            owners = base_owners + (0,) * t1 + (1,) * t2
            scheme = CommScheme(
                base_ctx=model.ctx,
                ext=ext,
                n=n,
                F=f,
                owners=owners,
                target=target,
            )
            if not verify_omniscience(model, scheme):
                continue
            leak = rank(hstack(f, wn)) - rank(wn)
            scheme.meta = {
                "target_leakage_logq": target_leak,
                "achieved_leakage_logq": leak,
                "completion_rates_logq": (t1, t2),
            }
            if best_leak is None or leak < best_leak:
                best, best_leak = scheme, leak
            if leak == target_leak:
                return scheme
    raise SchemeSearchError(
        f"no completion at the target leakage within n_max={n_max}",
        diagnostics={
            "n_max": n_max,
            "attempts_per_n": attempts,
            "target_leakage_logq": target_leak,
            "best_achieved_logq": best_leak,
        },
        best=best,
    )
