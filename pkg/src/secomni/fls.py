"""Finite linear source models and exact rank-based information measures.

A finite linear source over F_q draws a uniform base vector X in F_q^l; user
i observes Z_i = X @ M_i and the wiretapper observes Z_w = X @ W.  Every
entropy of such observations equals a matrix rank times log2(q), so all
information quantities here are exact integers in units of log2(q).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
import math
from typing import Union

import numpy as np

from .errors import InternalCheckError, InvalidArgumentError, ResourceLimitError
from .gf import FieldContext
from .gfmatrix import (
    MatrixGF,
    column_space_intersection,
    hstack,
    rank,
    solve_right,
)

BRUTE_FORCE_LIMIT = 1 << 24


@dataclass(frozen=True)
class EntropyValue:
    """An exact information quantity in units of log2(q).

    Attributes:
        numerator: Exact nonnegative value in log2(q) units; an integer for
            rank-derived quantities, a Fraction for LP optima.
        q: Field size the unit refers to.
    """

    numerator: Union[int, Fraction]
    q: int

    def __post_init__(self):
        if self.numerator < 0:
            raise InvalidArgumentError("entropy numerators are nonnegative")

    @property
    def bits(self):
        """Float value in bits."""
        return float(self.numerator) * math.log2(self.q)

    def __repr__(self):
        return f"EntropyValue({self.numerator} * log2({self.q}) = {self.bits:.6g} bits)"


class FLSModel:
    """A finite linear source with m users and one wiretapper.

    Attributes:
        ctx: Prime field context F_q.
        l: Base dimension.
        user_mats: Tuple of l-by-c_i observation matrices, one per user.
        W: l-by-n_w wiretapper observation matrix.
    """

    def __init__(self, ctx, user_mats, W, require_full_rank_w=False):
        if not isinstance(ctx, FieldContext):
            raise InvalidArgumentError("ctx must be a FieldContext")
        if ctx.k != 1:
            raise InvalidArgumentError("source models use prime fields")
        user_mats = tuple(user_mats)
        if not user_mats:
            raise InvalidArgumentError("at least one user required")
        l = user_mats[0].rows
        for m in user_mats + (W,):
            if m.ctx is not ctx:
                raise InvalidArgumentError("all matrices must share the model context")
            if m.rows != l:
                raise InvalidArgumentError("all matrices must have l rows")
        if require_full_rank_w and rank(W) != W.cols:
            raise InvalidArgumentError("wiretapper matrix must have full column rank")
        self.ctx = ctx
        self.l = l
        self.user_mats = user_mats
        self.W = W

    @property
    def num_users(self):
        return len(self.user_mats)

    def __repr__(self):
        return (
            f"FLSModel(q={self.ctx.q}, l={self.l}, users={self.num_users}, "
            f"n_w={self.W.cols})"
        )


# -- rank-based entropies ---------------------------------------------------


def rank_entropy(targets, conditioning=None):
    """H(X @ A | X @ B) in log2(q) units: rank[A|B] - rank B.

    Args:
        targets: MatrixGF or list of MatrixGF (columns stacked).
        conditioning: Optional MatrixGF or list (empty means none).

    Returns:
        Integer numerator.
    """
    a = _as_stack(targets)
    if conditioning is None:
        return rank(a)
    b = _as_stack(conditioning)
    return rank(hstack(a, b)) - rank(b)


def rank_mutual_information(a, b, conditioning=None):
    """I(X @ A; X @ B | X @ C) in log2(q) units; always nonnegative."""
    a = _as_stack(a)
    b = _as_stack(b)
    if conditioning is None:
        v = rank(a) + rank(b) - rank(hstack(a, b))
    else:
        c = _as_stack(conditioning)
        rc = rank(c)
        v = (
            rank(hstack(a, c))
            + rank(hstack(b, c))
            - rank(hstack(a, b, c))
            - rc
        )
    if v < 0:  # pragma: no cover - submodularity of rank
        raise InternalCheckError("negative mutual information")
    return v


def _as_stack(mats):
    if isinstance(mats, MatrixGF):
        return mats
    mats = list(mats)
    if not mats:
        raise InvalidArgumentError("empty matrix list; pass conditioning=None instead")
    return hstack(*mats)


def _subset_matrices(model, users, include_w):
    mats = [model.user_mats[i] for i in users]
    if include_w:
        mats.append(model.W)
    if not mats:
        return MatrixGF.zeros(model.ctx, model.l, 0)
    return hstack(*mats)


def _check_users(model, users):
    users = tuple(users)
    for i in users:
        if not 0 <= i < model.num_users:
            raise InvalidArgumentError(f"user index {i} out of range")
    if len(set(users)) != len(users):
        raise InvalidArgumentError("duplicate user index")
    return users


def fls_entropy(model, users, include_w=False, given_users=(), given_w=False):
    """Exact H(Z_users [, Z_w] | Z_given [, Z_w]) for a linear source.

    Args:
        model: FLSModel.
        users: Iterable of user indices whose observations are the target.
        include_w: Include the wiretapper observation in the target.
        given_users: Iterable of user indices observed as conditioning.
        given_w: Condition on the wiretapper observation.

    Returns:
        EntropyValue with integer numerator in log2(q) units.
    """
    users = _check_users(model, users)
    given_users = _check_users(model, given_users)
    a = _subset_matrices(model, users, include_w)
    b = _subset_matrices(model, given_users, given_w)
    num = rank(hstack(a, b)) - rank(b) if b.cols else rank(a)
    return EntropyValue(num, model.ctx.q)


def fls_mutual_information(
    model, users_a, users_b, given_users=(), given_w=False, a_w=False, b_w=False
):
    """Exact I(Z_A; Z_B | Z_given) for disjoint user groups A and B.

    The wiretapper observation may be attached to either side (a_w / b_w) or
    to the conditioning (given_w).

    Returns:
        EntropyValue with integer numerator in log2(q) units.
    """
    users_a = _check_users(model, users_a)
    users_b = _check_users(model, users_b)
    if set(users_a) & set(users_b):
        raise InvalidArgumentError("user groups must be disjoint")
    if a_w and b_w:
        raise InvalidArgumentError("wiretapper cannot be on both sides")
    a = _subset_matrices(model, users_a, a_w)
    b = _subset_matrices(model, users_b, b_w)
    c = _subset_matrices(model, _check_users(model, given_users), given_w)
    num = rank_mutual_information(a, b, c if c.cols else None)
    return EntropyValue(num, model.ctx.q)


def brute_force_entropy(model, users, include_w=False, given_users=(), given_w=False):
    """H(target | conditioning) in bits by enumerating all q^l realizations.

    Independent of the rank identity: builds the joint distribution of the
    observation tuples by direct counting over the uniform base vector.

    Returns:
        Float bits.

    Raises:
        ResourceLimitError: If q^l exceeds the enumeration budget (2^24).
    """
    q, l = model.ctx.q, model.l
    if q**l > BRUTE_FORCE_LIMIT:
        raise ResourceLimitError(f"q^l = {q**l} exceeds brute-force budget")
    users = _check_users(model, users)
    a = _subset_matrices(model, users, include_w)
    b = _subset_matrices(model, _check_users(model, given_users), given_w)
    n = q**l
    base = np.zeros((n, l), dtype=np.int64)
    t = np.arange(n, dtype=np.int64)
    for i in range(l):
        base[:, i] = t % q
        t //= q
    za = model.ctx.mat_mul(base, a.a) if a.cols else np.zeros((n, 0), dtype=np.int64)
    zb = model.ctx.mat_mul(base, b.a) if b.cols else np.zeros((n, 0), dtype=np.int64)

    def _entropy_of(cols):
        if cols.shape[1] == 0:
            return 0.0
        _, counts = np.unique(cols, axis=0, return_counts=True)
        prob = counts / n
        return float(-np.sum(prob * np.log2(prob)))

    return _entropy_of(np.hstack([za, zb])) - _entropy_of(zb)


# -- maximum common function ------------------------------------------------


@dataclass(frozen=True)
class McfResult:
    """Basis of the maximal common linear function of two observations.

    col(G) = col(A) intersect col(B); the witnesses satisfy G = A @ P and
    G = B @ Q, so both observers can compute X @ G.
    """

    G: MatrixGF
    P: MatrixGF
    Q: MatrixGF


def mcf(a, b):
    """Maximal common function of X @ A and X @ B with witnesses.

    Returns:
        McfResult(G, P, Q) with col(G) = col(A) ∩ col(B), G = A @ P = B @ Q.
    """
    g = column_space_intersection(a, b)
    p = solve_right(a, g)
    qm = solve_right(b, g)
    if p is None or qm is None:  # pragma: no cover - intersection is contained
        raise InternalCheckError("intersection witnesses missing")
    return McfResult(g, p, qm)


def complement(m, c, candidates=None):
    """Columns extending col(C) to col(M) inside a candidate set.

    Greedily scans the candidate columns (default: the columns of M in
    order) and keeps those that enlarge span(C ∪ kept).  The returned matrix
    D satisfies col([C | D]) = col(M) with rank additivity
    rank C + rank D = rank M.

    Args:
        m: Ambient matrix M; col(C) must lie inside col(M).
        c: Base matrix C.
        candidates: Optional matrix whose columns are scanned instead of M's.

    Raises:
        InvalidArgumentError: If col(C) is not contained in col(M) or the
            candidates cannot complete the span.
    """
    if solve_right(m, c) is None:
        raise InvalidArgumentError("col(C) is not contained in col(M)")
    target = rank(m)
    pool = candidates if candidates is not None else m
    cur = c
    cur_rank = rank(c)
    kept = []
    for j in range(pool.cols):
        if cur_rank == target:
            break
        col = pool.column(j)
        cand = hstack(cur, col)
        rk = rank(cand)
        if rk > cur_rank:
            cur = cand
            cur_rank = rk
            kept.append(j)
    if cur_rank != target:
        raise InvalidArgumentError("candidates do not span col(M) over col(C)")
    if not kept:
        return MatrixGF.zeros(m.ctx, m.rows, 0)
    return pool.columns(kept)


# -- two-user analysis ------------------------------------------------------


@dataclass(frozen=True)
class TwoUserReport:
    """Exact two-user wiretap secret-key analysis.

    Attributes:
        c_w: Wiretap secret-key capacity I(Z_1; Z_2 | G_i).
        r_l: Minimum leakage rate for omniscience H(Z_1, Z_2 | Z_w) - c_w.
        g1: Basis of mcf(Z_w, Z_1).
        g2: Basis of mcf(Z_w, Z_2).
        f1: User 1's part of an optimal-rate interactive discussion.
        f2: User 2's part of an optimal-rate interactive discussion.
    """

    c_w: EntropyValue
    r_l: EntropyValue
    g1: MatrixGF
    g2: MatrixGF
    f1: MatrixGF
    f2: MatrixGF


def _require_two_users(model):
    if model.num_users != 2:
        raise InvalidArgumentError("this analysis needs exactly two users")


def two_user_analyze(model):
    """Exact C_W and R_L for a two-user linear source with a wiretapper.

    Computes the capacity three ways, through the wiretapper's common part
    with each user and with both users jointly, and checks agreement; the
    discussion maps from :func:`two_user_discussion` are attached.

    Returns:
        TwoUserReport.
    """
    _require_two_users(model)
    m1, m2 = model.user_mats
    w = model.W
    g1 = mcf(w, m1).G
    g2 = mcf(w, m2).G
    vals = []
    for g in (g1, g2, hstack(g1, g2)):
        vals.append(rank_mutual_information(m1, m2, g if g.cols else None))
    if len(set(vals)) != 1:
        raise InternalCheckError(f"capacity expressions disagree: {vals}")
    c_w = vals[0]
    h_joint = rank_entropy(hstack(m1, m2), w if w.cols else None)
    r_l = h_joint - c_w
    f1, f2 = two_user_discussion(model)
    q = model.ctx.q
    return TwoUserReport(
        c_w=EntropyValue(c_w, q),
        r_l=EntropyValue(r_l, q),
        g1=g1,
        g2=g2,
        f1=f1,
        f2=f2,
    )


def two_user_discussion(model):
    """Non-interactive discussion (F_1, F_2) attaining the two-user leakage bound.

    Builds the independence decomposition of (Z_1, Z_2) around the
    wiretapper's common part G_1 = mcf(Z_w, Z_1), picks the common-randomness
    complement inside col(M_1) ∩ col(M_2) so each part is computable by its
    sender, and removes the G_1-component of the wiretapper's side
    information.  The result satisfies, and this function verifies exactly:

      * col(F_1) ⊆ col(M_1) and col(F_2) ⊆ col(M_2),
      * I(Z_1, Z_2 ; Z_w | F_1, F_2) = 0,
      * I(Z_1 ; Z_2 | F_1, F_2) = I(Z_1 ; Z_2 | G_1).

    Returns:
        Tuple (F_1, F_2) of MatrixGF maps.
    """
    _require_two_users(model)
    ctx = model.ctx
    m1, m2 = model.user_mats
    w = model.W
    g1 = mcf(w, m1).G
    u2 = hstack(m2, g1)
    xc = column_space_intersection(m1, u2)
    d = column_space_intersection(m1, m2)
    xa = complement(m1, xc)
    xb = complement(u2, xc, candidates=m2)
    xc_prime = complement(xc, g1, candidates=d)
    gw = mcf(hstack(m1, m2), w).G
    e0 = complement(gw, g1)
    if e0.cols:
        bas = hstack(xa, xb, xc_prime, g1)
        coef = solve_right(bas, e0)
        if coef is None:  # pragma: no cover - spanning by construction
            raise InternalCheckError("decomposition does not span the common part")
        ca = xa.cols
        cb = xb.cols
        cc = xc_prime.cols
        alpha = MatrixGF(ctx, coef.a[:ca])
        beta = MatrixGF(ctx, coef.a[ca : ca + cb])
        gamma = MatrixGF(ctx, coef.a[ca + cb : ca + cb + cc])
        f1_extra = xa @ alpha
        f2 = _mat_sum(ctx, model.l, e0.cols, [(xb, beta), (xc_prime, gamma)])
    else:
        f1_extra = MatrixGF.zeros(ctx, model.l, 0)
        f2 = MatrixGF.zeros(ctx, model.l, 0)
    f1 = _drop_zero_columns(hstack(f1_extra, g1))
    f2 = _drop_zero_columns(f2)
    _verify_discussion(model, f1, f2, g1)
    return f1, f2


def _drop_zero_columns(m):
    keep = [j for j in range(m.cols) if np.any(m.a[:, j])]
    if len(keep) == m.cols:
        return m
    return m.columns(keep) if keep else MatrixGF.zeros(m.ctx, m.rows, 0)


def _mat_sum(ctx, rows, cols, terms):
    acc = MatrixGF.zeros(ctx, rows, cols)
    for mat, coef in terms:
        if mat.cols:
            acc = acc + (mat @ coef)
    return acc


def _verify_discussion(model, f1, f2, g1):
    m1, m2 = model.user_mats
    w = model.W
    if solve_right(m1, f1) is None:
        raise InternalCheckError("F_1 is not computable by user 1")
    if solve_right(m2, f2) is None:
        raise InternalCheckError("F_2 is not computable by user 2")
    f = hstack(f1, f2)
    fc = f if f.cols else None
    if w.cols and rank_mutual_information(hstack(m1, m2), w, fc) != 0:
        raise InternalCheckError("discussion does not decouple the wiretapper")
    lhs = rank_mutual_information(m1, m2, fc)
    rhs = rank_mutual_information(m1, m2, g1 if g1.cols else None)
    if lhs != rhs:
        raise InternalCheckError("discussion changes the key-capacity term")
