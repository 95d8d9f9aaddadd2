"""Exact dense linear algebra over finite fields.

Vectors are rows throughout: a source realization x in F_q^l is a row vector
and an observation is x @ M for an l-by-c matrix M whose columns are the
observed linear functions.  Empty matrices (zero rows or columns) are legal
and have rank 0.
"""

from __future__ import annotations

import numpy as np

from .errors import ContextMismatchError, InvalidArgumentError
from .gf import FieldContext, GFElement, embed_array


class MatrixGF:
    """Immutable dense matrix over one finite field context.

    Attributes:
        ctx: FieldContext of every entry.
        a: int64 ndarray of entry encodings, shape (rows, cols); read-only.
    """

    __slots__ = ("ctx", "a")

    def __init__(self, ctx, data):
        if not isinstance(ctx, FieldContext):
            raise InvalidArgumentError("ctx must be a FieldContext")
        arr = np.array(data, dtype=np.int64)
        if arr.ndim != 2:
            raise InvalidArgumentError("matrix data must be 2-D")
        if arr.size and (arr.min() < 0 or arr.max() >= ctx.q):
            raise InvalidArgumentError("entry encoding out of range")
        arr.setflags(write=False)
        self.ctx = ctx
        self.a = arr

    # -- constructors ------------------------------------------------------

    @classmethod
    def zeros(cls, ctx, rows, cols):
        return cls(ctx, np.zeros((rows, cols), dtype=np.int64))

    @classmethod
    def identity(cls, ctx, n):
        return cls(ctx, np.eye(n, dtype=np.int64))

    @classmethod
    def from_elements(cls, ctx, rows):
        data = [[ctx.element(e).val for e in row] for row in rows]
        if not data:
            return cls.zeros(ctx, 0, 0)
        return cls(ctx, data)

    # -- basic properties --------------------------------------------------

    @property
    def rows(self):
        return self.a.shape[0]

    @property
    def cols(self):
        return self.a.shape[1]

    @property
    def shape(self):
        return self.a.shape

    def transpose(self):
        return MatrixGF(self.ctx, self.a.T)

    @property
    def T(self):
        return self.transpose()

    def __eq__(self, other):
        if not isinstance(other, MatrixGF):
            return NotImplemented
        return self.ctx is other.ctx and self.a.shape == other.a.shape and bool(
            np.all(self.a == other.a)
        )

    def __hash__(self):
        return hash((id(self.ctx), self.a.shape, self.a.tobytes()))

    def __getitem__(self, key):
        out = self.a[key]
        if np.isscalar(out) or out.ndim == 0:
            return GFElement(self.ctx, int(out))
        if out.ndim == 1:
            out = out.reshape(1, -1) if isinstance(key, int) else out.reshape(-1, 1)
        return MatrixGF(self.ctx, out)

    def column(self, j):
        return MatrixGF(self.ctx, self.a[:, j : j + 1])

    def columns(self, idx):
        return MatrixGF(self.ctx, self.a[:, list(idx)])

    def row_slice(self, idx):
        return MatrixGF(self.ctx, self.a[list(idx), :])

    def __matmul__(self, other):
        _same_ctx(self, other)
        if self.cols != other.rows:
            raise InvalidArgumentError(
                f"cannot multiply {self.shape} by {other.shape}"
            )
        return MatrixGF(self.ctx, self.ctx.mat_mul(self.a, other.a))

    def __add__(self, other):
        _same_ctx(self, other)
        if self.shape != other.shape:
            raise InvalidArgumentError("shape mismatch")
        return MatrixGF(self.ctx, self.ctx.v_add(self.a, other.a))

    def __sub__(self, other):
        _same_ctx(self, other)
        if self.shape != other.shape:
            raise InvalidArgumentError("shape mismatch")
        return MatrixGF(self.ctx, self.ctx.v_sub(self.a, other.a))

    def __neg__(self):
        return MatrixGF(self.ctx, self.ctx.v_neg(self.a))

    def scale(self, s):
        s = self.ctx.element(s)
        return MatrixGF(self.ctx, self.ctx.v_mul(self.a, np.int64(s.val)))

    def is_zero(self):
        return bool(np.all(self.a == 0))

    def to_lists(self):
        return self.a.tolist()

    def embed_into(self, target):
        """Entrywise embedding into an extension context."""
        return MatrixGF(target, embed_array(self.a, self.ctx, target))

    def __repr__(self):
        return f"MatrixGF(q={self.ctx.q}, shape={self.a.shape})\n{self.a}"


def _same_ctx(x, y):
    if x.ctx is not y.ctx:
        raise ContextMismatchError(
            f"matrices over GF({x.ctx.q}) and GF({y.ctx.q}) cannot be combined"
        )


def hstack(*mats):
    """Concatenate matrices left to right (same context and row count)."""
    mats = [m for group in mats for m in (group if isinstance(group, (list, tuple)) else [group])]
    if not mats:
        raise InvalidArgumentError("hstack needs at least one matrix")
    ctx = mats[0].ctx
    rows = mats[0].rows
    for m in mats[1:]:
        _same_ctx(mats[0], m)
        if m.rows != rows:
            raise InvalidArgumentError("row count mismatch in hstack")
    return MatrixGF(ctx, np.hstack([m.a for m in mats]))


def vstack(*mats):
    """Concatenate matrices top to bottom (same context and column count)."""
    mats = [m for group in mats for m in (group if isinstance(group, (list, tuple)) else [group])]
    if not mats:
        raise InvalidArgumentError("vstack needs at least one matrix")
    ctx = mats[0].ctx
    cols = mats[0].cols
    for m in mats[1:]:
        _same_ctx(mats[0], m)
        if m.cols != cols:
            raise InvalidArgumentError("column count mismatch in vstack")
    return MatrixGF(ctx, np.vstack([m.a for m in mats]))


def rref(m):
    """Reduced row echelon form.

    Args:
        m: MatrixGF.

    Returns:
        Tuple (r, rank, pivots): the canonical reduced form, its rank, and the
        tuple of pivot column indices in increasing order.  The result is a
        deterministic function of the input.
    """
    ctx = m.ctx
    a = np.array(m.a, dtype=np.int64)
    rows, cols = a.shape
    pivots = []
    rank = 0
    for col in range(cols):
        if rank == rows:
            break
        nz = np.flatnonzero(a[rank:, col] != 0)
        if nz.size == 0:
            continue
        piv = rank + int(nz[0])
        if piv != rank:
            a[[rank, piv]] = a[[piv, rank]]
        inv_p = ctx._inv_scalar(int(a[rank, col]))
        a[rank] = ctx.v_mul(a[rank], np.int64(inv_p))
        others = np.flatnonzero(a[:, col] != 0)
        others = others[others != rank]
        if others.size:
            factors = a[others, col]
            a[others] = ctx.v_sub(a[others], ctx.v_mul(factors[:, None], a[rank][None, :]))
        pivots.append(col)
        rank += 1
    return MatrixGF(ctx, a), rank, tuple(pivots)


def rank(m):
    """Rank of a matrix (0 for empty matrices)."""
    return rref(m)[1]


def inverse(m):
    """Inverse of a square matrix.

    Raises:
        InvalidArgumentError: If the matrix is not square or is singular.
    """
    if m.rows != m.cols:
        raise InvalidArgumentError("inverse needs a square matrix")
    n = m.rows
    aug = hstack(m, MatrixGF.identity(m.ctx, n))
    r, rk, piv = rref(aug)
    if rk != n or piv != tuple(range(n)):
        raise InvalidArgumentError("matrix is singular")
    return MatrixGF(m.ctx, r.a[:, n:])


def solve_right(a, b):
    """Solve A @ X = B for X, or return None if unsolvable.

    When solvable the canonical solution with free variables set to zero is
    returned: its row support lies in the pivot rows of A.
    """
    _same_ctx(a, b)
    if a.rows != b.rows:
        raise InvalidArgumentError("row count mismatch")
    ca = a.cols
    r, rk, piv = rref(hstack(a, b))
    if any(p >= ca for p in piv):
        return None
    x = np.zeros((ca, b.cols), dtype=np.int64)
    for i, p in enumerate(piv):
        x[p] = r.a[i, ca:]
    return MatrixGF(a.ctx, x)


def right_kernel_basis(m):
    """Basis of {x column: M @ x = 0} as the columns of a MatrixGF.

    The basis is the canonical one read off the rref free columns, ordered by
    free column index.
    """
    ctx = m.ctx
    r, rk, piv = rref(m)
    cols = m.cols
    free = [c for c in range(cols) if c not in piv]
    basis = np.zeros((cols, len(free)), dtype=np.int64)
    for j, fc in enumerate(free):
        basis[fc, j] = 1
        col = r.a[:rk, fc]
        for i, p in enumerate(piv):
            basis[p, j] = ctx._neg_scalar(int(col[i]))
    return MatrixGF(ctx, basis)


def left_nullspace_basis(m):
    """Basis of {y row: y @ M = 0} as the rows of a MatrixGF."""
    return right_kernel_basis(m.transpose()).transpose()


def column_space_basis(m):
    """Canonical basis of the column space: rref of the transpose, as columns."""
    r, rk, _ = rref(m.transpose())
    return MatrixGF(m.ctx, r.a[:rk].T)


def column_space_intersection(a, b):
    """Canonical basis of col(A) intersect col(B), as columns.

    Uses the Zassenhaus block construction on transposes.  The number of
    columns equals rank A + rank B - rank [A | B].
    """
    _same_ctx(a, b)
    if a.rows != b.rows:
        raise InvalidArgumentError("ambient dimensions differ")
    l = a.rows
    at, bt = a.a.T, b.a.T
    block = np.zeros((at.shape[0] + bt.shape[0], 2 * l), dtype=np.int64)
    block[: at.shape[0], :l] = at
    block[: at.shape[0], l:] = at
    block[at.shape[0] :, :l] = bt
    r, rk, piv = rref(MatrixGF(a.ctx, block))
    inter_rows = [
        r.a[i, l:]
        for i in range(rk)
        if piv[i] >= l
    ]
    if not inter_rows:
        return MatrixGF.zeros(a.ctx, l, 0)
    cand = MatrixGF(a.ctx, np.array(inter_rows, dtype=np.int64))
    rr, rrk, _ = rref(cand)
    return MatrixGF(a.ctx, rr.a[:rrk].T)


def complete_basis(b, l):
    """Extend independent columns B to a basis of F_q^l.

    Greedily appends standard basis columns e_0, e_1, ... whenever they
    enlarge the span; the result [B | E] is invertible with B as its leading
    block.

    Raises:
        InvalidArgumentError: If the columns of B are dependent or l is too
            small.
    """
    ctx = b.ctx
    if b.rows != l:
        raise InvalidArgumentError("B must have l rows")
    if rank(b) != b.cols:
        raise InvalidArgumentError("columns of B are dependent")
    cur = b.a
    cur_rank = b.cols
    added = []
    for i in range(l):
        if cur_rank == l:
            break
        e = np.zeros((l, 1), dtype=np.int64)
        e[i, 0] = 1
        cand = np.hstack([cur, e])
        rk = rank(MatrixGF(ctx, cand))
        if rk > cur_rank:
            cur = cand
            cur_rank = rk
            added.append(i)
    if cur_rank != l:  # pragma: no cover - standard basis always completes
        raise InvalidArgumentError("could not complete basis")
    return MatrixGF(ctx, cur)


def random_matrix(rows, cols, ctx, seed=None):
    """Uniform random matrix over the field.

    Args:
        rows: Row count.
        cols: Column count.
        ctx: FieldContext.
        seed: Int seed or numpy Generator; None draws from fresh OS entropy.

    Returns:
        MatrixGF with i.i.d. uniform entries.
    """
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    return MatrixGF(ctx, rng.integers(0, ctx.q, size=(rows, cols), dtype=np.int64))
