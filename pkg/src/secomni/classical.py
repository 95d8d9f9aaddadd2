"""Classical pmf-based analyses: channel-order certificates and positivity.

Two bodies of work live here.  First, a two-terminal source with a pair-erasing
wiretapper where interactive secret-key capacity is positive even though the
minimum omniscience leakage cannot drop below the full conditional entropy;
exact certificates for the relevant channel orderings drive the verdict.
Second, positivity certificates for multi-terminal secret-key capacity built
from symbol partitions, their block-protocol refinements, and the threshold
crossing they imply.
"""

from __future__ import annotations

import itertools
import math

import numpy as np
from scipy import optimize

from .errors import InvalidArgumentError, ResourceLimitError

POSITIVITY_BUDGET = 10_000_000
MIXTURE_BUDGET = 10_000_000


def binary_entropy(x):
    """h(x) = -x log2 x - (1-x) log2(1-x), elementwise, with h(0) = h(1) = 0."""
    x = np.asarray(x, dtype=float)
    y = np.zeros_like(x)
    inside = (x > 0) & (x < 1)
    xi = x[inside]
    y[inside] = -xi * np.log2(xi) - (1 - xi) * np.log2(1 - xi)
    if y.ndim == 0:
        return float(y)
    return y


def bsc_convolve(p, q):
    """Crossover of two cascaded binary symmetric channels: p*q = p+q-2pq."""
    return p + q - 2 * p * q


def _entropy_of(table):
    t = np.asarray(table, dtype=float).ravel()
    t = t[t > 0]
    return float(-(t * np.log2(t)).sum())


class JointPMF:
    """Joint probability mass function over named finite axes.

    The wiretapper axis is conventionally named "w"; a size-1 axis models a
    wiretapper with no side information.

    Attributes:
        axes: Tuple of axis names, one per table dimension.
        table: Nonnegative float array summing to 1.
    """

    def __init__(self, axes, table):
        axes = tuple(axes)
        table = np.asarray(table, dtype=float)
        if len(set(axes)) != len(axes):
            raise InvalidArgumentError("duplicate axis names")
        if table.ndim != len(axes):
            raise InvalidArgumentError("table rank does not match axis count")
        if np.any(table < -1e-12):
            raise InvalidArgumentError("negative probability")
        total = float(table.sum())
        if abs(total - 1.0) > 1e-9:
            raise InvalidArgumentError(f"probabilities sum to {total}, expected 1")
        self.axes = axes
        self.table = np.clip(table, 0.0, None) / total

    def axis_index(self, name):
        try:
            return self.axes.index(name)
        except ValueError:
            raise InvalidArgumentError(f"unknown axis {name!r}") from None

    def axis_size(self, name):
        return self.table.shape[self.axis_index(name)]

    def marginal(self, names):
        """Marginal table over the named axes, in the order given."""
        names = tuple(names)
        keep = [self.axis_index(n) for n in names]
        drop = tuple(i for i in range(len(self.axes)) if i not in keep)
        t = self.table.sum(axis=drop) if drop else self.table
        kept_order = [i for i in range(len(self.axes)) if i in keep]
        perm = [kept_order.index(i) for i in keep]
        return np.transpose(t, perm)

    def condition(self, name, value):
        """Condition on one axis taking a value.

        Returns:
            (pmf, prob): the conditional JointPMF over the remaining axes and
            the probability of the conditioning event.
        """
        idx = self.axis_index(name)
        sub = np.take(self.table, value, axis=idx)
        prob = float(sub.sum())
        if prob <= 0:
            raise InvalidArgumentError("conditioning event has zero probability")
        rest = tuple(a for a in self.axes if a != name)
        return JointPMF(rest, sub / prob), prob

    def __repr__(self):
        dims = ", ".join(f"{a}:{s}" for a, s in zip(self.axes, self.table.shape))
        return f"JointPMF({dims})"


def pmf_entropy(pmf, axes, given=()):
    """H(axes | given) in bits."""
    axes = tuple(axes)
    given = tuple(given)
    joint = _entropy_of(pmf.marginal(axes + given))
    if not given:
        return joint
    return joint - _entropy_of(pmf.marginal(given))


def pmf_mutual_information(pmf, a, b, given=()):
    """I(a ; b | given) in bits; clipped at 0 against float noise."""
    a, b, given = tuple(a), tuple(b), tuple(given)
    v = (
        pmf_entropy(pmf, a, given)
        + pmf_entropy(pmf, b, given)
        - pmf_entropy(pmf, a + b, given)
    )
    return max(v, 0.0)


def condition_source(pmf, name, value):
    """Convenience alias for JointPMF.condition."""
    return pmf.condition(name, value)


# -- pair-erasure two-terminal source ---------------------------------------


def dsbe(p, eps):
    """Symmetric binary source pair with a pair-erasing wiretapper.

    X is a fair bit, Y differs from X with probability p, and the wiretapper
    sees the pair (X, Y) intact with probability 1 - eps and an erasure symbol
    otherwise.  Wiretapper alphabet: symbols 0..3 encode the pair 2x + y,
    symbol 4 is the erasure.

    Args:
        p: Crossover probability in (0, 1).
        eps: Erasure probability in (0, 1).

    Returns:
        JointPMF with axes ("x", "y", "w").
    """
    if not (0 < p < 1 and 0 < eps < 1):
        raise InvalidArgumentError("p and eps must lie strictly inside (0, 1)")
    t = np.zeros((2, 2, 5))
    for x in range(2):
        for y in range(2):
            pxy = 0.5 * (1 - p) if x == y else 0.5 * p
            t[x, y, 2 * x + y] = pxy * (1 - eps)
            t[x, y, 4] = pxy * eps
    return JointPMF(("x", "y", "w"), t)


def f_curve(p, eps, qs=None, grid_size=1001):
    """Wiretapper-minus-receiver information gap of the pair-erasure source.

    For input bias q on the sender bit, the gap is
    f(q) = (1 - eps) h(q) - h(p * q) + h(p), where * is crossover
    composition.  Nonnegativity of f on [0, 1] is exactly the more-capable
    ordering of the wiretapper over the receiver.

    Returns:
        (qs, f values) as float arrays.
    """
    if qs is None:
        qs = np.linspace(0.0, 1.0, grid_size)
    qs = np.asarray(qs, dtype=float)
    f = (1 - eps) * binary_entropy(qs) - binary_entropy(bsc_convolve(p, qs)) + binary_entropy(p)
    return qs, f


def _reweighted(pmf, sender, q):
    """Replace the sender's marginal with Bernoulli(q), channel fixed."""
    idx = pmf.axis_index(sender)
    if pmf.table.shape[idx] != 2:
        raise InvalidArgumentError("input reweighting needs a binary axis")
    marg = pmf.marginal((sender,))
    if np.any(marg <= 0):
        raise InvalidArgumentError("sender marginal must be strictly positive")
    shape = [1] * pmf.table.ndim
    shape[idx] = 2
    scale = (np.array([1 - q, q]) / marg).reshape(shape)
    return JointPMF(pmf.axes, pmf.table * scale)


def _input_gap(pmf, sender, receiver, q):
    """I(sender ; w) - I(sender ; receiver) at sender bias q."""
    rw = _reweighted(pmf, sender, q)
    return pmf_mutual_information(rw, (sender,), ("w",)) - pmf_mutual_information(
        rw, (sender,), (receiver,)
    )


def more_capable_check(pmf, sender, receiver, grid_size=1001, tol=1e-9):
    """Grid certificate that the wiretapper channel is more capable.

    Sweeps the sender bias over a uniform grid and requires
    I(sender; w) >= I(sender; receiver) throughout, up to tol.

    Returns:
        Dict with ok, min_gap, argmin_q, grid_size, tol.
    """
    qs = np.linspace(0.0, 1.0, grid_size)
    gaps = np.array([_input_gap(pmf, sender, receiver, q) for q in qs])
    i = int(np.argmin(gaps))
    return {
        "ok": bool(gaps[i] >= -tol),
        "min_gap": float(gaps[i]),
        "argmin_q": float(qs[i]),
        "grid_size": grid_size,
        "tol": tol,
    }


def _preprocessing_gap(pmf, sender, receiver, delta):
    """Advantage of a biased-bit preprocessing of the sender.

    For U uniform with the sender bit set to U flipped with probability
    1/2 - delta, I(U; receiver) - I(U; w) equals the central second
    difference (g(1/2-delta) + g(1/2+delta))/2 - g(1/2) of the input gap g.
    A positive value exhibits an auxiliary beating the wiretapper.
    """

    def g(q):
        return _input_gap(pmf, sender, receiver, q)

    return 0.5 * (g(0.5 - delta) + g(0.5 + delta)) - g(0.5)


def not_less_noisy_check(pmf, sender, receiver, delta=0.1, tol=1e-6):
    """Witness that the wiretapper channel is not less noisy.

    Returns:
        Dict with ok (True when the witness separates), gap, delta, tol.
    """
    gap = _preprocessing_gap(pmf, sender, receiver, delta)
    return {"ok": bool(gap > tol), "gap": float(gap), "delta": delta, "tol": tol}


def oneway_capacity_lb(pmf, sender, receiver, deltas=None):
    """Best biased-bit preprocessing lower bound on one-way key capacity.

    Returns:
        Dict with value (clipped at 0), raw best gap, and the best delta.
    """
    if deltas is None:
        deltas = np.linspace(0.005, 0.495, 99)
    gaps = [(_preprocessing_gap(pmf, sender, receiver, d), float(d)) for d in deltas]
    best, delta = max(gaps)
    return {"value": max(best, 0.0), "gap": float(best), "delta": delta}


def oneway_capacity_search(pmf, sender, receiver, seeds=(), maxiter=400):
    """Numeric maximization of I(U; receiver) - I(U; w) over binary U.

    Parametrizes P(U = 1) and the two conditional sender biases through
    logits and runs Nelder-Mead from the grid optimum plus canonical inits.

    Returns:
        Dict with value (clipped at 0), gap, and the optimizing parameters
        (pu, bias0, bias1).
    """
    grid = oneway_capacity_lb(pmf, sender, receiver)
    d = grid["delta"]

    def expit(z):
        return 1.0 / (1.0 + np.exp(-z))

    def logit(x):
        x = min(max(x, 1e-9), 1 - 1e-9)
        return math.log(x / (1 - x))

    def gap_of(params):
        pu, b0, b1 = expit(np.asarray(params))
        idx = pmf.axis_index(sender)
        if pmf.table.shape[idx] != 2:
            raise InvalidArgumentError("search needs a binary sender axis")
        marg = pmf.marginal((sender,))
        if np.any(marg <= 0):
            raise InvalidArgumentError("sender marginal must be strictly positive")
        channel = pmf.table / marg.reshape(
            [2 if i == idx else 1 for i in range(pmf.table.ndim)]
        )
        out = []
        for pu_val, bias in (((1 - pu), b0), (pu, b1)):
            w = np.array([1 - bias, bias]).reshape(
                [2 if i == idx else 1 for i in range(pmf.table.ndim)]
            )
            out.append(pu_val * (channel * w))
        joint = np.stack(out)  # axis 0 is U
        big = JointPMF(("u",) + pmf.axes, joint)
        return pmf_mutual_information(big, ("u",), (receiver,)) - pmf_mutual_information(
            big, ("u",), ("w",)
        )

    inits = [
        [logit(0.5), logit(0.5 - d), logit(0.5 + d)],
        [logit(0.5), logit(0.25), logit(0.75)],
    ]
    for s in seeds:
        rng = np.random.default_rng(s)
        inits.append(list(rng.normal(0.0, 1.0, 3)))
    best_val, best_params = -math.inf, None
    for x0 in inits:
        res = optimize.minimize(
            lambda z: -gap_of(z),
            x0,
            method="Nelder-Mead",
            options={"maxiter": maxiter, "xatol": 1e-8, "fatol": 1e-12},
        )
        if -res.fun > best_val:
            best_val, best_params = -res.fun, res.x
    pu, b0, b1 = (1.0 / (1.0 + np.exp(-np.asarray(best_params)))).tolist()
    return {
        "value": max(best_val, 0.0),
        "gap": float(best_val),
        "params": {"pu": pu, "bias0": b0, "bias1": b1},
    }


def oneway_leakage_report(pmf, sender, receiver):
    """Minimum omniscience leakage H(F | W)/n over single-message protocols.

    Sending the sender's source uncoded achieves H(sender | w).  When the
    wiretapper channel is certified more capable than the receiver's, no
    single message recovering the sender at the receiver can leak less, so
    the value is exact.

    Returns:
        Dict with value, achievable, converse (None when uncertified), and
        the certificate.
    """
    achievable = pmf_entropy(pmf, (sender,), ("w",))
    cert = more_capable_check(pmf, sender, receiver)
    converse = achievable if cert["ok"] else None
    return {
        "value": achievable,
        "achievable": achievable,
        "converse": converse,
        "certificate": cert,
    }


def two_msg_report(p, eps):
    """Exact-certificate analysis of two-message omniscience for dsbe(p, eps).

    A two-message protocol sends one message each way; omniscience forces the
    first message to resolve the sender at the receiver and the reply to
    resolve the rest.  When the wiretapper is more capable in both input
    directions the total leakage is at least H(X, Y | W), yet a positive
    biased-bit key rate certifies positive interactive key capacity.  Both
    facts together rule out the identity
    (leakage) = H(X, Y | W) - (key capacity) for two-message protocols, and
    the verdict reports it.

    Returns:
        Report dict; verdict is "duality-fails" or "inconclusive".
    """
    src = dsbe(p, eps)
    mc_forward = more_capable_check(src, "x", "y")
    mc_backward = more_capable_check(src, "y", "x")
    nln = not_less_noisy_check(src, "x", "y")
    cap = oneway_capacity_lb(src, "x", "y")
    leak = oneway_leakage_report(src, "x", "y")
    h_pair = pmf_entropy(src, ("x", "y"), ("w",))
    certified = mc_forward["ok"] and mc_backward["ok"]
    rl2_lb = h_pair if certified else None
    verdict = (
        "duality-fails" if certified and cap["gap"] > 1e-9 else "inconclusive"
    )
    return {
        "p": p,
        "eps": eps,
        "h_pair_given_w": h_pair,
        "mc_forward": mc_forward,
        "mc_backward": mc_backward,
        "not_less_noisy": nln,
        "oneway_capacity_lb": cap,
        "oneway_leakage": leak,
        "two_msg_capacity_lb": cap["value"],
        "two_msg_leakage_lb": rl2_lb,
        "verdict": verdict,
    }


# -- positivity of multi-terminal key capacity ------------------------------


def renyi_half(p_dist, q_dist):
    """Renyi divergence of order 1/2 in bits; +inf on disjoint supports."""
    p_dist = np.asarray(p_dist, dtype=float)
    q_dist = np.asarray(q_dist, dtype=float)
    s = float(np.sqrt(p_dist * q_dist).sum())
    if s <= 0:
        return math.inf
    return -2.0 * math.log2(s)


def tv_distance(p_dist, q_dist):
    """Total variation distance."""
    p_dist = np.asarray(p_dist, dtype=float)
    q_dist = np.asarray(q_dist, dtype=float)
    return 0.5 * float(np.abs(p_dist - q_dist).sum())


def _user_axes(pmf):
    return tuple(a for a in pmf.axes if a != "w")


def _validate_parts(pmf, parts):
    users = _user_axes(pmf)
    if set(parts) != set(users):
        raise InvalidArgumentError("parts must cover exactly the user axes")
    clean = {}
    for u in users:
        one, two = parts[u]
        one, two = sorted(set(one)), sorted(set(two))
        size = pmf.axis_size(u)
        if not one or not two or set(one) & set(two):
            raise InvalidArgumentError(f"parts for {u!r} must be disjoint and nonempty")
        if not all(0 <= s < size for s in one + two):
            raise InvalidArgumentError(f"symbol out of range for axis {u!r}")
        clean[u] = (tuple(one), tuple(two))
    return clean


def _assignment_masses(pmf, parts):
    """Event probabilities p_sigma and wiretapper conditionals.

    sigma ranges over part choices, one per user; p_sigma is the probability
    that every user's symbol falls in its chosen part.  Also returns the
    wiretapper conditional given each positive-probability event.
    """
    users = _user_axes(pmf)
    marg = pmf.marginal(users + ("w",))
    m = len(users)
    masses = {}
    w_given = {}
    for sigma in itertools.product((1, 2), repeat=m):
        sub = marg
        for i, u in enumerate(users):
            chosen = parts[u][sigma[i] - 1]
            sub = np.take(sub, chosen, axis=i)
        w_dist = sub.reshape(-1, sub.shape[-1]).sum(axis=0)
        total = float(w_dist.sum())
        masses[sigma] = total
        if total > 0:
            w_given[sigma] = w_dist / total
    return masses, w_given


def positivity_condition_check(pmf, parts):
    """Partition certificate for positive multi-terminal key capacity.

    For a choice of two disjoint symbol sets per user, compare the order-1/2
    divergence between the wiretapper's conditionals on the two aligned
    events against the log-ratio of aligned to swapped event masses:

        D_(1/2)(P_w|all-1 || P_w|all-2) < log2( p_1..1 p_2..2 / c ),
        c = (1/2) sum over mixed sigma of p_sigma p_sigma-bar,

    where sigma-bar swaps every user's part.  Strict inequality certifies
    that the terminals can agree on a secret bit the wiretapper cannot
    resolve.

    Returns:
        Dict with ok, lhs, rhs, margin, masses, parts.
    """
    parts = _validate_parts(pmf, parts)
    users = _user_axes(pmf)
    m = len(users)
    masses, w_given = _assignment_masses(pmf, parts)
    all1, all2 = (1,) * m, (2,) * m
    p11, p22 = masses[all1], masses[all2]
    mixed = 0.0
    for sigma, val in masses.items():
        if sigma in (all1, all2):
            continue
        bar = tuple(3 - s for s in sigma)
        mixed += val * masses[bar]
    mixed *= 0.5
    if p11 <= 0 or p22 <= 0:
        return {
            "ok": False,
            "lhs": math.inf,
            "rhs": -math.inf,
            "margin": -math.inf,
            "masses": masses,
            "parts": parts,
        }
    lhs = renyi_half(w_given[all1], w_given[all2])
    rhs = math.inf if mixed <= 0 else math.log2(p11 * p22 / mixed)
    margin = rhs - lhs if not (math.isinf(rhs) and math.isinf(lhs)) else -math.inf
    return {
        "ok": bool(lhs < rhs),
        "lhs": lhs,
        "rhs": rhs,
        "margin": margin,
        "masses": masses,
        "parts": parts,
    }


def positivity_search(pmf, budget=POSITIVITY_BUDGET):
    """Exhaustive search for a partition certificate.

    Every user symbol is assigned to part one, part two, or left out; all
    valid assignments are checked.

    Returns:
        The best certificate dict (largest margin) or None.

    Raises:
        ResourceLimitError: If the assignment space exceeds the budget.
    """
    users = _user_axes(pmf)
    per_user = []
    for u in users:
        size = pmf.axis_size(u)
        options = []
        for labels in itertools.product((0, 1, 2), repeat=size):
            one = tuple(i for i, v in enumerate(labels) if v == 1)
            two = tuple(i for i, v in enumerate(labels) if v == 2)
            if one and two:
                options.append((one, two))
        per_user.append(options)
    total = math.prod(len(o) for o in per_user)
    if total > budget:
        raise ResourceLimitError(f"{total} assignments exceed the budget {budget}")
    best = None
    for combo in itertools.product(*per_user):
        parts = {u: combo[i] for i, u in enumerate(users)}
        res = positivity_condition_check(pmf, parts)
        if not res["ok"]:
            continue
        if best is None or res["margin"] > best["margin"]:
            best = res
    return best


def delta_threshold(num_users):
    """Bias threshold below which the swap certificate activates.

    Smallest root of 16 d^2 - (8 + 4 sqrt(2^(m-1) - 1)) d + 1 = 0 for
    m = num_users.

    Returns:
        Float in (0, 1/4].
    """
    if num_users < 1:
        raise InvalidArgumentError("need at least one user")
    b = 8.0 + 4.0 * math.sqrt(2.0 ** (num_users - 1) - 1.0)
    disc = b * b - 64.0
    return (b - math.sqrt(disc)) / 32.0


def _compositions(total, bins):
    """All count vectors of length bins summing to total."""
    if bins == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, bins - 1):
            yield (first,) + rest


def _multinomial(total, counts):
    out = 1
    rem = total
    for c in counts:
        out *= math.comb(rem, c)
        rem -= c
    return out


def _swap_mixture_entropy(weights, firsts, seconds, half, budget):
    """Entropy in bits of a mixture of two-block product distributions.

    Component k has weight weights[k] and emits half i.i.d. symbols from
    firsts[k] followed by half i.i.d. symbols from seconds[k].  String
    probabilities depend only on the pair of half-string types, which are
    enumerated exactly.
    """
    size = len(firsts[0])
    if size == 1:
        return 0.0
    types = list(_compositions(half, size))
    if len(types) ** 2 > budget:
        raise ResourceLimitError(
            f"{len(types)**2} type pairs exceed the budget {budget}"
        )

    def block_prob(dist, counts):
        out = 1.0
        for d, c in zip(dist, counts):
            if c:
                if d <= 0:
                    return 0.0
                out *= d**c
        return out

    ent = 0.0
    for t1 in types:
        n1 = _multinomial(half, t1)
        for t2 in types:
            count = n1 * _multinomial(half, t2)
            mass = sum(
                w * block_prob(f, t1) * block_prob(s, t2)
                for w, f, s in zip(weights, firsts, seconds)
            )
            if mass > 0:
                ent -= count * mass * math.log2(mass)
    return ent


def block_swap_bound(pmf, parts, n, budget=MIXTURE_BUDGET):
    """Block-protocol refinement of the partition certificate at length n.

    Over n realizations, keep only the sequences where every user's part
    choice is constant on each half and swapped between halves; pattern k in
    {1,2}^m survives with mass (p_k p_k-bar)^(n/2).  The aligned patterns
    dominate at rate q1 = T / (T + C) with T = (p_1..1 p_2..2)^(n/2) and C
    the mixed analogue.  The certificate compares the terminals' pattern
    equivocation given the wiretapper's sequence,
    lhs = H(patterns | w sequence, event), against the omniscience
    communication cost bound
    rhs = (2^m - 2)(1 - q1)(log2(2^(m-1) - 1) - 2 log2(1 - q1));
    lhs > rhs certifies positive key capacity at this block length.

    Args:
        pmf: Source with user axes and a "w" axis.
        parts: Per-user (part-one, part-two) symbol sets.
        n: Even block length >= 2.
        budget: Cap on exact mixture-entropy type pairs.

    Returns:
        Dict with n, q1, lhs, rhs, crossed, margin.
    """
    if n < 2 or n % 2:
        raise InvalidArgumentError("block length must be even and >= 2")
    parts = _validate_parts(pmf, parts)
    users = _user_axes(pmf)
    m = len(users)
    masses, w_given = _assignment_masses(pmf, parts)
    all1, all2 = (1,) * m, (2,) * m
    p11, p22 = masses[all1], masses[all2]
    if p11 <= 0 or p22 <= 0:
        raise InvalidArgumentError("aligned events need positive probability")
    half = n // 2
    t_mass = (p11 * p22) ** half
    c_mass = 0.0
    pattern_mass = {}
    for sigma, val in masses.items():
        bar = tuple(3 - s for s in sigma)
        mass = (val * masses[bar]) ** half
        if mass > 0:
            pattern_mass[sigma] = mass
        if sigma not in (all1, all2):
            c_mass += mass
    c_mass *= 0.5
    q1 = t_mass / (t_mass + c_mass)
    total = sum(pattern_mass.values())
    patterns = sorted(pattern_mass)
    probs = [pattern_mass[k] / total for k in patterns]
    firsts = [w_given[k] for k in patterns]
    seconds = [w_given[tuple(3 - s for s in k)] for k in patterns]
    h_patterns = -sum(v * math.log2(v) for v in probs)
    h_w_given = half * sum(
        v * (_entropy_of(f) + _entropy_of(s))
        for v, f, s in zip(probs, firsts, seconds)
    )
    mixture = _swap_mixture_entropy(probs, firsts, seconds, half, budget)
    lhs = h_patterns + h_w_given - mixture
    if q1 >= 1.0 or m < 2:
        rhs = 0.0
    else:
        rhs = (
            (2.0**m - 2.0)
            * (1.0 - q1)
            * (math.log2(2.0 ** (m - 1) - 1.0) - 2.0 * math.log2(1.0 - q1))
        )
    return {
        "n": n,
        "q1": q1,
        "lhs": lhs,
        "rhs": rhs,
        "crossed": bool(lhs > rhs),
        "margin": lhs - rhs,
    }


def block_swap_search(pmf, parts, n_max=40, budget=MIXTURE_BUDGET):
    """Evaluate the block certificate for even n up to n_max.

    Returns:
        (rows, first_crossing_n): per-n bound dicts and the smallest n with
        lhs > rhs, or None.
    """
    rows = []
    first = None
    for n in range(2, n_max + 1, 2):
        row = block_swap_bound(pmf, parts, n, budget=budget)
        rows.append(row)
        if first is None and row["crossed"]:
            first = n
    return rows, first
