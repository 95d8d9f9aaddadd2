"""Tree-PIN sources with a linear wiretapper.

A tree-PIN source places an independent uniform vector Y_e in F_q^{n_e} on
each edge e of a tree; the user at vertex v observes every Y_e incident to v,
and the wiretapper observes Z_w = X @ W for the concatenated base vector
X = (Y_e)_e.  This module compiles such models to finite linear sources,
decides irreducibility, reduces the wiretapper side information away, and
computes the exact secrecy quantities.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Tuple

import numpy as np

from .errors import InternalCheckError, InvalidArgumentError, ResourceLimitError
from .fls import EntropyValue, FLSModel, rank_entropy
from .gfmatrix import (
    MatrixGF,
    column_space_intersection,
    complete_basis,
    hstack,
    inverse,
    rank,
    rref,
)
from .ratlp import simplex_max

RCO_MAX_USERS = 10


@dataclass(frozen=True)
class Edge:
    """Tree edge between two vertex indices with multiplicity n_e >= 0."""

    u: int
    v: int
    n_e: int


class TreePinModel:
    """A tree-PIN source with a linear wiretapper.

    Attributes:
        num_vertices: Vertices are 0 .. num_vertices-1; the user set.
        edges: Tuple of Edge; edge index is the position in this tuple.
        ctx: Prime field context F_q.
        W: (sum_e n_e)-by-n_w wiretapper matrix, full column rank; rows are
            grouped by edge in edge order (the base coordinate order).
    """

    def __init__(self, num_vertices, edges, ctx, W):
        if ctx.k != 1:
            raise InvalidArgumentError("tree-PIN models use prime fields")
        edges = tuple(
            e if isinstance(e, Edge) else Edge(int(e[0]), int(e[1]), int(e[2]))
            for e in edges
        )
        if num_vertices < 2:
            raise InvalidArgumentError("need at least two vertices")
        if len(edges) != num_vertices - 1:
            raise InvalidArgumentError("a tree on V vertices has V-1 edges")
        adj = {v: [] for v in range(num_vertices)}
        for idx, e in enumerate(edges):
            if not (0 <= e.u < num_vertices and 0 <= e.v < num_vertices) or e.u == e.v:
                raise InvalidArgumentError(f"bad edge {e}")
            if e.n_e < 0:
                raise InvalidArgumentError("edge multiplicity must be >= 0")
            adj[e.u].append(idx)
            adj[e.v].append(idx)
        seen = {0}
        stack = [0]
        while stack:
            v = stack.pop()
            for idx in adj[v]:
                e = edges[idx]
                o = e.v if e.u == v else e.u
                if o not in seen:
                    seen.add(o)
                    stack.append(o)
        if len(seen) != num_vertices:
            raise InvalidArgumentError("edge set is not a connected tree")
        l = sum(e.n_e for e in edges)
        if W.ctx is not ctx:
            raise InvalidArgumentError("W must share the model context")
        if W.rows != l:
            raise InvalidArgumentError(f"W must have {l} rows")
        if rank(W) != W.cols:
            raise InvalidArgumentError("W must have full column rank")
        self.num_vertices = num_vertices
        self.edges = edges
        self.ctx = ctx
        self.W = W
        self._adj = {v: tuple(sorted(idxs)) for v, idxs in adj.items()}
        offs = []
        off = 0
        for e in edges:
            offs.append(off)
            off += e.n_e
        self._offsets = tuple(offs)

    # -- structure helpers -------------------------------------------------

    @property
    def l(self):
        return sum(e.n_e for e in self.edges)

    @property
    def n_w(self):
        return self.W.cols

    def block_range(self, edge_index):
        """Row range (start, stop) of edge edge_index in the base order."""
        start = self._offsets[edge_index]
        return start, start + self.edges[edge_index].n_e

    def block_selector(self, edge_index):
        """l-by-n_e selector matrix with col(I_e) = the edge's coordinates."""
        start, stop = self.block_range(edge_index)
        sel = np.zeros((self.l, stop - start), dtype=np.int64)
        for j, r in enumerate(range(start, stop)):
            sel[r, j] = 1
        return MatrixGF(self.ctx, sel)

    def incident_edges(self, vertex):
        return self._adj[vertex]

    def degree(self, vertex):
        return len(self._adj[vertex])

    def leaves(self):
        return tuple(v for v in range(self.num_vertices) if self.degree(v) == 1)

    def root(self):
        """The designated root: the lowest-index leaf vertex."""
        return self.leaves()[0]

    def parent_edges(self):
        """parent_edges[v] = edge index from v toward the root (root: None)."""
        root = self.root()
        parent = [None] * self.num_vertices
        seen = {root}
        queue = [root]
        while queue:
            v = queue.pop(0)
            for idx in self._adj[v]:
                e = self.edges[idx]
                o = e.v if e.u == v else e.u
                if o not in seen:
                    seen.add(o)
                    parent[o] = idx
                    queue.append(o)
        return tuple(parent)

    def __repr__(self):
        return (
            f"TreePinModel(V={self.num_vertices}, q={self.ctx.q}, "
            f"n_e={tuple(e.n_e for e in self.edges)}, n_w={self.n_w})"
        )


def compile_model(model):
    """Compile a tree-PIN model to its finite linear source.

    User i is vertex i and observes the concatenation of the blocks of its
    incident edges in edge order; the wiretapper matrix is shared.

    Returns:
        FLSModel with num_vertices users.
    """
    mats = []
    for v in range(model.num_vertices):
        sels = [model.block_selector(idx) for idx in model.incident_edges(v)]
        mats.append(hstack(*sels) if sels else MatrixGF.zeros(model.ctx, model.l, 0))
    return FLSModel(model.ctx, mats, model.W, require_full_rank_w=True)


def irreducible_check(model):
    """Decide whether the wiretapper observes no single-edge function.

    The model is irreducible when col(W) contains no nonzero vector supported
    on one edge block, equivalently rank W + n_e = rank [W | I_e] for every
    edge e.

    Returns:
        (True, None) if irreducible, else (False, (edge_index, witness))
        where witness is a base-space column vector in col(W) supported on
        that edge's block.
    """
    for idx in range(len(model.edges)):
        if model.edges[idx].n_e == 0:
            continue
        sel = model.block_selector(idx)
        inter = column_space_intersection(model.W, sel)
        if inter.cols:
            return False, (idx, inter.column(0))
    return True, None


@dataclass(frozen=True)
class ReductionStep:
    """One edge reduction: the revealed common part and the base change.

    Attributes:
        edge_index: Edge whose common part with the wiretapper was removed.
        removed_dim: Dimension of that common part.
        g_block: n_e-by-removed_dim block coordinates of the common part.
        base_change: Invertible n_e-by-n_e matrix [g_block | completion]; the
            surviving edge coordinates are Y_e @ completion.
        kept_w_columns: Indices of the wiretap columns kept after the step.
    """

    edge_index: int
    removed_dim: int
    g_block: MatrixGF
    base_change: MatrixGF
    kept_w_columns: Tuple[int, ...]


def reduce_model(model):
    """Remove wiretapper side information edge by edge.

    Processes edges in index order; for each edge, the maximal common function
    of the edge variable and the wiretap observation is split off and the
    wiretap matrix loses the corresponding columns.  Each step preserves the
    secrecy quantities and the remaining edges' common parts, so one pass in
    edge order ends at an irreducible model.

    Returns:
        (reduced_model, transcript) where transcript is a tuple of
        ReductionStep.  The per-edge multiplicity after reduction equals the
        conditional entropy H(Y_e | mcf(Y_e, Z_w)) of the original model in
        log2(q) units; multiplicities may drop to 0.
    """
    ctx = model.ctx
    cur = model
    transcript = []
    for idx in range(len(model.edges)):
        ne = cur.edges[idx].n_e
        if ne == 0 or cur.n_w == 0:
            continue
        sel = cur.block_selector(idx)
        inter = column_space_intersection(sel, cur.W)
        ell = inter.cols
        if ell == 0:
            continue
        start, stop = cur.block_range(idx)
        g_block = MatrixGF(ctx, inter.a[start:stop, :])
        t = complete_basis(g_block, ne)
        t_inv = inverse(t)
        w_rows = MatrixGF(ctx, cur.W.a[start:stop, :])
        tw = t_inv @ w_rows
        w_keep = MatrixGF(ctx, tw.a[ell:, :])
        new_rows = np.vstack(
            [cur.W.a[:start, :], w_keep.a, cur.W.a[stop:, :]]
        )
        stacked = MatrixGF(ctx, new_rows)
        _, rk, piv = rref(stacked)
        if rk != cur.n_w - ell:
            raise InternalCheckError("wiretap rank did not drop by the common dimension")
        new_w = stacked.columns(piv) if rk else MatrixGF.zeros(ctx, stacked.rows, 0)
        new_edges = list(cur.edges)
        new_edges[idx] = Edge(cur.edges[idx].u, cur.edges[idx].v, ne - ell)
        cur = TreePinModel(cur.num_vertices, new_edges, ctx, new_w)
        transcript.append(
            ReductionStep(
                edge_index=idx,
                removed_dim=ell,
                g_block=g_block,
                base_change=t,
                kept_w_columns=piv,
            )
        )
    ok, _ = irreducible_check(cur)
    if not ok:
        raise InternalCheckError("reduction pass did not reach an irreducible model")
    return cur, tuple(transcript)


@dataclass(frozen=True)
class AnalysisReport:
    """Exact secrecy analysis of a tree-PIN source with a linear wiretapper.

    All values are EntropyValue in log2(q) units; the curve samples are
    (R, C_W(R)) pairs of exact Fractions in the same units.
    """

    q: int
    irreducible: bool
    per_edge: Tuple[EntropyValue, ...]
    c_w: EntropyValue
    c_s: EntropyValue
    r_l: EntropyValue
    r_co: EntropyValue
    cw_curve: Tuple[Tuple[Fraction, Fraction], ...]
    single_edge: bool


def analyze(model):
    """Compute C_W, C_S, R_L, R_CO and the rate-limited capacity curve.

    The wiretap secret-key capacity is min_e H(Y_e | mcf(Y_e, Z_w)); on
    reducible models the same value is cross-checked by reducing first and
    applying the irreducible formula.  The minimum omniscience leakage is
    H(Z_V | Z_w) - C_W, and R_CO is the no-wiretapper omniscience LP optimum.

    Returns:
        AnalysisReport.
    """
    q = model.ctx.q
    per_edge = []
    for idx in range(len(model.edges)):
        ne = model.edges[idx].n_e
        if ne == 0 or model.n_w == 0:
            per_edge.append(ne)
            continue
        sel = model.block_selector(idx)
        common = ne + model.n_w - rank(hstack(sel, model.W))
        per_edge.append(ne - common)
    c_w = min(per_edge)
    ok, _ = irreducible_check(model)
    if not ok:
        reduced, _ = reduce_model(model)
        red_cw = min(e.n_e for e in reduced.edges)
        if red_cw != c_w:
            raise InternalCheckError("direct and reduced capacities disagree")
    c_s = min(e.n_e for e in model.edges)
    total = model.l
    r_l = (total - model.n_w) - c_w
    lp = rco_lp(model)
    single_edge = len(model.edges) == 1
    num_edges = len(model.edges)
    curve = []
    top = Fraction(max((num_edges - 1) * c_w, 1))
    for kk in range(9):
        r_val = top * kk / 8
        curve.append((r_val, constrained_capacity(model, r_val)))
    curve.append((top * 2, constrained_capacity(model, top * 2)))
    return AnalysisReport(
        q=q,
        irreducible=ok,
        per_edge=tuple(EntropyValue(v, q) for v in per_edge),
        c_w=EntropyValue(c_w, q),
        c_s=EntropyValue(c_s, q),
        r_l=EntropyValue(r_l, q),
        r_co=lp.value,
        cw_curve=tuple(curve),
        single_edge=single_edge,
    )


def constrained_capacity(model, r):
    """Wiretap secret-key capacity under a total discussion-rate budget.

    Args:
        model: TreePinModel.
        r: Rate budget as an exact nonnegative rational in log2(q) units.

    Returns:
        Fraction in log2(q) units: min{r / (|E| - 1), C_W}; for a single-edge
        tree no discussion is needed and C_W is returned for every budget.
    """
    r = Fraction(r)
    if r < 0:
        raise InvalidArgumentError("rate budget must be nonnegative")
    c_w = _cw_numerator(model)
    if len(model.edges) == 1:
        return Fraction(c_w)
    return min(r / (len(model.edges) - 1), Fraction(c_w))


def _cw_numerator(model):
    vals = []
    for idx in range(len(model.edges)):
        ne = model.edges[idx].n_e
        if ne == 0 or model.n_w == 0:
            vals.append(ne)
            continue
        sel = model.block_selector(idx)
        vals.append(rank(hstack(sel, model.W)) - model.n_w)
    return min(vals)


@dataclass(frozen=True)
class RcoResult:
    """Omniscience-rate LP solution.

    Attributes:
        value: Optimal sum rate (exact, log2(q) units).
        rates: Per-user optimal rates (Fractions, log2(q) units).
        dual: Fractional-partition weights {user subset: weight}; every user's
            subsets' weights sum to exactly 1 and the weighted entropy sum
            equals value.
    """

    value: EntropyValue
    rates: Tuple[Fraction, ...]
    dual: dict


def rco_lp(model, conditioning=None):
    """Minimum sum rate for omniscience by exact linear programming.

    Solves min sum_i r_i subject to sum_{i in B} r_i >= H(Z_B | Z_{B^c}) for
    every proper nonempty user subset B, via the exact dual packing LP; the
    primal rates are the dual prices of the packing constraints and strong
    duality is asserted exactly.

    Args:
        model: TreePinModel or FLSModel (at most 10 users).
        conditioning: Optional MatrixGF appended to every conditioning set
            (side information available to all terminals).

    Returns:
        RcoResult.
    """
    fls = compile_model(model) if isinstance(model, TreePinModel) else model
    m = fls.num_users
    if m > RCO_MAX_USERS:
        raise ResourceLimitError(f"omniscience LP limited to {RCO_MAX_USERS} users")
    if m < 2:
        raise InvalidArgumentError("omniscience needs at least two users")
    q = fls.ctx.q
    subsets = []
    ent = []
    for r_size in range(1, m):
        for combo in itertools.combinations(range(m), r_size):
            comp = tuple(i for i in range(m) if i not in combo)
            a = hstack(*[fls.user_mats[i] for i in combo])
            b_parts = [fls.user_mats[i] for i in comp]
            if conditioning is not None and conditioning.cols:
                b_parts.append(conditioning)
            b = hstack(*b_parts) if b_parts else None
            subsets.append(frozenset(combo))
            ent.append(rank_entropy(a, b))
    # Dual packing LP: max ent . lam  s.t.  for each user i,
    # sum_{B containing i} lam_B <= 1, lam >= 0.
    a_rows = [[Fraction(int(i in bset)) for bset in subsets] for i in range(m)]
    value, lam, y = simplex_max(a_rows, [Fraction(1)] * m, [Fraction(v) for v in ent])
    rates = tuple(y)
    # Strong duality and feasibility, exact.
    if sum(rates) != value:
        raise InternalCheckError("LP strong duality failed")
    for bset, h in zip(subsets, ent):
        if sum(rates[i] for i in bset) < h:
            raise InternalCheckError("primal rates infeasible")
    # Make the dual an exact fractional partition: cover each user to weight 1.
    lam = list(lam)
    singleton_pos = {bset: j for j, bset in enumerate(subsets) if len(bset) == 1}
    for i in range(m):
        cover = sum(lam[j] for j, bset in enumerate(subsets) if i in bset)
        if cover > 1:
            raise InternalCheckError("dual packing constraint violated")
        if cover < 1:
            j = singleton_pos[frozenset((i,))]
            if ent[j] != 0:
                raise InternalCheckError("slack user with positive singleton entropy")
            lam[j] += 1 - cover
    check = sum(l * h for l, h in zip(lam, ent))
    if check != value:
        raise InternalCheckError("fractional partition value drifted")
    dual = {bset: lam[j] for j, bset in enumerate(subsets) if lam[j] != 0}
    return RcoResult(value=EntropyValue(value, q), rates=rates, dual=dual)
