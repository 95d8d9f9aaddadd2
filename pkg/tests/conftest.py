"""Seeded model suites shared across tests.

All generators are deterministic: the suites are identical on every run.
"""

import numpy as np
import pytest

from secomni import (
    Edge,
    FLSModel,
    MatrixGF,
    TreePinModel,
    gf_context,
    hstack,
    irreducible_check,
    random_matrix,
    rank,
)

SUITE_QS = (2, 3, 5)


def random_tree_edges(num_vertices, rng, max_mult=3):
    """Random labeled tree: vertex i attaches to a uniform earlier vertex."""
    edges = []
    for v in range(1, num_vertices):
        u = int(rng.integers(0, v))
        edges.append(Edge(u, v, int(rng.integers(1, max_mult + 1))))
    return edges


def draw_irreducible(ctx, num_vertices, rng, max_mult=3, tries=400):
    """Random irreducible tree-PIN with n_w <= sum n_e - max n_e."""
    while True:
        edges = random_tree_edges(num_vertices, rng, max_mult)
        total = sum(e.n_e for e in edges)
        top = total - max(e.n_e for e in edges)
        n_w = int(rng.integers(0, top + 1))
        for _ in range(tries):
            w = random_matrix(total, n_w, ctx, rng)
            if rank(w) != n_w:
                continue
            model = TreePinModel(num_vertices, edges, ctx, w)
            ok, _ = irreducible_check(model)
            if ok:
                return model


def draw_reducible(ctx, num_vertices, rng, max_mult=3, tries=400):
    """Random reducible tree-PIN: at least one wiretap column in one block."""
    while True:
        edges = random_tree_edges(num_vertices, rng, max_mult)
        total = sum(e.n_e for e in edges)
        n_rand = int(rng.integers(0, total - 1))
        for _ in range(tries):
            base = random_matrix(total, n_rand, ctx, rng)
            # columns supported inside single edge blocks force reducibility
            n_single = int(rng.integers(1, 3))
            cols = np.zeros((total, n_single), dtype=np.int64)
            offset = 0
            starts = []
            for e in edges:
                starts.append(offset)
                offset += e.n_e
            for j in range(n_single):
                k = int(rng.integers(0, len(edges)))
                r = starts[k] + int(rng.integers(0, edges[k].n_e))
                cols[r, j] = int(rng.integers(1, ctx.q))
            w = hstack(base, MatrixGF(ctx, cols))
            if rank(w) != w.cols:
                continue
            model = TreePinModel(num_vertices, edges, ctx, w)
            ok, _ = irreducible_check(model)
            if not ok:
                return model


def draw_two_user(ctx, rng):
    l = int(rng.integers(2, 5))
    m1 = random_matrix(l, int(rng.integers(1, l + 1)), ctx, rng)
    m2 = random_matrix(l, int(rng.integers(1, l + 1)), ctx, rng)
    w = random_matrix(l, int(rng.integers(0, l)), ctx, rng)
    return FLSModel(ctx, [m1, m2], w)


@pytest.fixture(scope="session")
def irreducible_suite():
    """100 irreducible tree-PINs, |V| in [3, 7], n_e in [1, 3], q in {2, 3, 5}."""
    rng = np.random.default_rng(20240801)
    out = []
    for i in range(100):
        ctx = gf_context(SUITE_QS[i % 3])
        nv = int(rng.integers(3, 8))
        out.append(draw_irreducible(ctx, nv, rng))
    return out


@pytest.fixture(scope="session")
def reducible_suite():
    """100 reducible tree-PINs over the same parameter ranges."""
    rng = np.random.default_rng(20240802)
    out = []
    for i in range(100):
        ctx = gf_context(SUITE_QS[i % 3])
        nv = int(rng.integers(3, 8))
        out.append(draw_reducible(ctx, nv, rng))
    return out


@pytest.fixture(scope="session")
def two_user_suite():
    """100 random two-user linear source models."""
    rng = np.random.default_rng(20240803)
    out = []
    for i in range(100):
        ctx = gf_context(SUITE_QS[i % 3])
        out.append(draw_two_user(ctx, rng))
    return out


@pytest.fixture(scope="session")
def brute_force_suite():
    """200 binary linear source models with at most 12 base coordinates."""
    rng = np.random.default_rng(20240804)
    ctx = gf_context(2)
    out = []
    for _ in range(200):
        l = int(rng.integers(2, 13))
        users = [
            random_matrix(l, int(rng.integers(1, 4)), ctx, rng)
            for _ in range(int(rng.integers(2, 4)))
        ]
        w = random_matrix(l, int(rng.integers(0, 3)), ctx, rng)
        out.append(FLSModel(ctx, users, w))
    return out
