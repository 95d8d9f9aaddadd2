"""Exact arithmetic in finite fields F_{p^k}.

Elements of F_{p^k} are residues of F_p[x] modulo a fixed monic irreducible
polynomial of degree k.  An element sum_i c_i x^i is encoded as the integer
sum_i c_i p^i (little-endian base-p digits), so 0 encodes 0 and 1 encodes 1
in every field.  The modulus is the lexicographically least monic irreducible
polynomial of degree k, where candidates are ordered by the integer encoding
of their non-leading coefficients.  The F_p-basis used throughout is
(1, x, ..., x^(k-1)).
"""

from __future__ import annotations

import functools

import numpy as np
import sympy

from .errors import (
    ContextMismatchError,
    InternalCheckError,
    InvalidArgumentError,
    ResourceLimitError,
)

MAX_DEGREE = 64
# Dense exp/log/digit tables are built for fields up to this size; larger
# fields fall back to scalar polynomial arithmetic.
TABLE_LIMIT = 1 << 16

_CTX_TOKEN = object()


# -- polynomial helpers over F_p (coefficient lists, little-endian) --------


def _poly_trim(c):
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return c


def _poly_sub(a, b, p):
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return _poly_trim([(x - y) % p for x, y in zip(a, b)])


def _poly_mulmod(a, b, mod, p):
    """Product of a and b reduced modulo the monic polynomial mod."""
    if not a or not b:
        return []
    k = len(mod) - 1
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    for d in range(len(out) - 1, k - 1, -1):
        c = out[d]
        if c:
            out[d] = 0
            for j in range(k):
                out[d - k + j] = (out[d - k + j] - c * mod[j]) % p
    return _poly_trim(out[:k])


def _poly_powmod(base, e, mod, p):
    result = [1]
    cur = list(base)
    while e:
        if e & 1:
            result = _poly_mulmod(result, cur, mod, p)
        cur = _poly_mulmod(cur, cur, mod, p)
        e >>= 1
    return result


def _poly_mod(a, b, p):
    a = _poly_trim(a)
    b = _poly_trim(b)
    inv_lead = pow(b[-1], p - 2, p)
    while a and len(a) >= len(b):
        c = (a[-1] * inv_lead) % p
        shift = len(a) - len(b)
        for j, bj in enumerate(b):
            a[shift + j] = (a[shift + j] - c * bj) % p
        a = _poly_trim(a)
    return a


def _poly_gcd(a, b, p):
    a, b = _poly_trim(a), _poly_trim(b)
    while b:
        a, b = b, _poly_mod(a, b, p)
    return a


def _is_irreducible(coeffs, p):
    """Rabin's irreducibility test for a monic polynomial over F_p."""
    k = len(coeffs) - 1
    if k == 1:
        return True
    x = [0, 1]
    if _poly_sub(_poly_powmod(x, p**k, coeffs, p), x, p):
        return False
    for ell in sympy.primefactors(k):
        diff = _poly_sub(_poly_powmod(x, p ** (k // ell), coeffs, p), x, p)
        if len(_poly_gcd(diff, coeffs, p)) - 1 != 0:
            return False
    return True


class FieldContext:
    """Immutable description of one finite field F_{p^k}.

    Instances are created and cached by :func:`gf_context`; identity of the
    context object is the identity of the field, and mixing elements from
    different contexts raises :class:`ContextMismatchError`.

    Attributes:
        p: Characteristic (prime).
        k: Extension degree over F_p.
        q: Field size p**k.
        modulus: Coefficients (c_0, ..., c_k) of the monic modulus, c_k = 1.
        generator: Encoding of a fixed primitive element (1 when q = 2).
    """

    def __init__(self, p, k, _token=None):
        if _token is not _CTX_TOKEN:
            raise InvalidArgumentError("use gf_context(p, k) to obtain contexts")
        self.p = p
        self.k = k
        self.q = p**k
        self.modulus = self._find_modulus()
        self._tables = self.q <= TABLE_LIMIT
        if self._tables:
            self._build_tables()

    # -- construction ------------------------------------------------------

    def _find_modulus(self):
        p, k = self.p, self.k
        for m in range(p**k):
            coeffs = []
            t = m
            for _ in range(k):
                coeffs.append(t % p)
                t //= p
            cand = coeffs + [1]
            if _is_irreducible(cand, p):
                return tuple(cand)
        raise InternalCheckError("no irreducible modulus found")  # pragma: no cover

    def _build_tables(self):
        p, k, q = self.p, self.k, self.q
        powers = p ** np.arange(k, dtype=np.int64)
        digits = np.zeros((q, k), dtype=np.int64)
        t = np.arange(q, dtype=np.int64)
        for i in range(k):
            digits[:, i] = t % p
            t //= p
        self._powers = powers
        self._digits = digits
        self._neg_table = ((p - digits) % p) @ powers
        # Reduction rows: coefficients of x^(k+j) mod modulus, j = 0..k-2.
        red = np.zeros((max(k - 1, 1), k), dtype=np.int64)
        cur = [(-c) % p for c in self.modulus[:k]]
        for j in range(k - 1):
            red[j] = cur
            lead = cur[-1]
            cur = [0] + cur[:-1]
            cur = [(a - lead * c) % p for a, c in zip(cur, self.modulus[:k])]
        self._red = red
        self._find_generator()
        exp = np.zeros(max(2 * (q - 1), 1), dtype=np.int64)
        log = np.zeros(q, dtype=np.int64)
        e = 1
        for i in range(q - 1):
            exp[i] = e
            log[e] = i
            e = self._mul_scalar(e, self.generator)
        exp[q - 1 : 2 * (q - 1)] = exp[: q - 1]
        self._exp = exp
        self._log = log
        inv = np.zeros(q, dtype=np.int64)
        if q > 2:
            inv[exp[: q - 1]] = exp[(q - 1 - np.arange(q - 1)) % (q - 1)]
        else:
            inv[1] = 1
        self._inv_table = inv

    def _find_generator(self):
        q = self.q
        if q == 2:
            self.generator = 1
            return
        factors = sympy.primefactors(q - 1)
        for g in range(2, q):
            if all(self._pow_scalar(g, (q - 1) // ell) != 1 for ell in factors):
                self.generator = g
                return
        raise InternalCheckError("no primitive element found")  # pragma: no cover

    # -- scalar arithmetic on integer encodings ---------------------------

    def _decode(self, a):
        out = []
        for _ in range(self.k):
            out.append(a % self.p)
            a //= self.p
        return out

    def _encode(self, coeffs):
        v = 0
        for c in reversed(coeffs):
            v = v * self.p + (c % self.p)
        return v

    def _add_scalar(self, a, b):
        if self.k == 1:
            return (a + b) % self.p
        return self._encode([x + y for x, y in zip(self._decode(a), self._decode(b))])

    def _neg_scalar(self, a):
        if self.k == 1:
            return (-a) % self.p
        return self._encode([-x for x in self._decode(a)])

    def _mul_scalar(self, a, b):
        if a == 0 or b == 0:
            return 0
        if self.k == 1:
            return (a * b) % self.p
        prod = _poly_mulmod(self._decode(a), self._decode(b), list(self.modulus), self.p)
        return self._encode(prod + [0] * (self.k - len(prod)))

    def _pow_scalar(self, a, e):
        if e == 0:
            return 1
        if a == 0:
            if e < 0:
                raise ZeroDivisionError("0 has no inverse")
            return 0
        if e < 0:
            a = self._inv_scalar(a)
            e = -e
        r = 1
        while e:
            if e & 1:
                r = self._mul_scalar(r, a)
            a = self._mul_scalar(a, a)
            e >>= 1
        return r

    def _inv_scalar(self, a):
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        if self._tables:
            return int(self._inv_table[a])
        return self._pow_scalar(a, self.q - 2)

    # -- vectorized arithmetic on int64 ndarrays of encodings -------------

    def v_add(self, x, y):
        if self.k == 1:
            return (x + y) % self.p
        if self._tables:
            x, y = np.broadcast_arrays(x, y)
            d = (self._digits[x] + self._digits[y]) % self.p
            return d @ self._powers
        return self._v_fallback2(self._add_scalar, x, y)

    def v_sub(self, x, y):
        return self.v_add(x, self.v_neg(y))

    def v_neg(self, x):
        if self.k == 1:
            return (-x) % self.p
        if self._tables:
            return self._neg_table[x]
        return self._v_fallback1(self._neg_scalar, x)

    def v_mul(self, x, y):
        if self.k == 1:
            return (x * y) % self.p
        if self._tables:
            x, y = np.broadcast_arrays(x, y)
            out = np.zeros(x.shape, dtype=np.int64)
            nz = (x != 0) & (y != 0)
            out[nz] = self._exp[self._log[x[nz]] + self._log[y[nz]]]
            return out
        return self._v_fallback2(self._mul_scalar, x, y)

    def v_inv(self, x):
        x = np.asarray(x)
        if np.any(x == 0):
            raise ZeroDivisionError("0 has no inverse")
        if self._tables:
            return self._inv_table[x]
        return self._v_fallback1(self._inv_scalar, x)

    def _v_fallback1(self, f, x):
        x = np.asarray(x)
        out = [f(int(v)) for v in x.ravel()]
        return np.array(out, dtype=np.int64).reshape(x.shape)

    def _v_fallback2(self, f, x, y):
        x, y = np.broadcast_arrays(np.asarray(x), np.asarray(y))
        flat = [f(int(a), int(b)) for a, b in zip(x.ravel(), y.ravel())]
        return np.array(flat, dtype=np.int64).reshape(x.shape)

    def mat_mul(self, a, b):
        """Matrix product of two 2-D int64 arrays of encodings."""
        r, t = a.shape
        t2, c = b.shape
        if t != t2:
            raise InvalidArgumentError("inner dimensions differ")
        if t == 0 or r == 0 or c == 0:
            return np.zeros((r, c), dtype=np.int64)
        if self.k == 1:
            return (a @ b) % self.p
        if self._tables:
            k = self.k
            ad = self._digits[a]  # (r, t, k)
            bd = self._digits[b]  # (t, c, k)
            full = np.zeros((r, c, 2 * k - 1), dtype=np.int64)
            for i in range(k):
                for j in range(k):
                    full[:, :, i + j] += ad[:, :, i] @ bd[:, :, j]
            full %= self.p
            low = full[:, :, :k]
            for j in range(k - 1):
                low = low + full[:, :, k + j, None] * self._red[j][None, None, :]
            low %= self.p
            return low @ self._powers
        out = np.zeros((r, c), dtype=np.int64)
        for i in range(r):
            for j in range(c):
                acc = 0
                for s in range(t):
                    acc = self._add_scalar(acc, self._mul_scalar(int(a[i, s]), int(b[s, j])))
                out[i, j] = acc
        return out

    # -- misc --------------------------------------------------------------

    def element(self, value):
        """Wrap an integer encoding or coefficient sequence as a GFElement."""
        if isinstance(value, GFElement):
            if value.ctx is not self:
                raise ContextMismatchError("element from another field")
            return value
        if isinstance(value, (list, tuple)):
            if len(value) > self.k:
                raise InvalidArgumentError("too many coefficients")
            value = self._encode([int(c) for c in value] + [0] * (self.k - len(value)))
        value = int(value)
        if not 0 <= value < self.q:
            raise InvalidArgumentError(f"encoding {value} out of range for GF({self.q})")
        return GFElement(self, value)

    def basis(self):
        """The F_p-basis (1, x, ..., x^(k-1)) as GFElements."""
        return tuple(GFElement(self, self.p**i) for i in range(self.k))

    def coeffs(self, a):
        """Coefficient list (c_0, ..., c_{k-1}) of an element or encoding."""
        if isinstance(a, GFElement):
            a = a.val
        return self._decode(int(a))

    def __repr__(self):
        return f"FieldContext(p={self.p}, k={self.k})"


@functools.lru_cache(maxsize=None)
def _cached_context(p, k):
    return FieldContext(p, k, _token=_CTX_TOKEN)


def gf_context(p, k=1):
    """Return the cached field context for F_{p^k}.

    Args:
        p: Prime characteristic.
        k: Extension degree, 1 <= k <= 64.

    Returns:
        The unique FieldContext instance for (p, k).

    Raises:
        InvalidArgumentError: If p is not prime or k is out of range.
    """
    if not isinstance(p, int) or p < 2 or not sympy.isprime(p):
        raise InvalidArgumentError(f"characteristic {p} is not prime")
    if not isinstance(k, int) or not 1 <= k <= MAX_DEGREE:
        raise InvalidArgumentError(f"degree {k} outside [1, {MAX_DEGREE}]")
    return _cached_context(p, k)


class GFElement:
    """One field element: a context reference plus its integer encoding."""

    __slots__ = ("ctx", "val")

    def __init__(self, ctx, val):
        self.ctx = ctx
        self.val = val

    def _coerce(self, other):
        if isinstance(other, GFElement):
            if other.ctx is not self.ctx:
                raise ContextMismatchError(
                    f"cannot combine GF({self.ctx.q}) with GF({other.ctx.q})"
                )
            return other
        if isinstance(other, int):
            # Integers coerce through the prime subfield.
            return GFElement(self.ctx, other % self.ctx.p)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return GFElement(self.ctx, self.ctx._add_scalar(self.val, o.val))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return GFElement(self.ctx, self.ctx._add_scalar(self.val, self.ctx._neg_scalar(o.val)))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return GFElement(self.ctx, self.ctx._mul_scalar(self.val, o.val))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return GFElement(self.ctx, self.ctx._mul_scalar(self.val, self.ctx._inv_scalar(o.val)))

    def __pow__(self, e):
        return GFElement(self.ctx, self.ctx._pow_scalar(self.val, int(e)))

    def __neg__(self):
        return GFElement(self.ctx, self.ctx._neg_scalar(self.val))

    def inverse(self):
        return GFElement(self.ctx, self.ctx._inv_scalar(self.val))

    def __eq__(self, other):
        if isinstance(other, GFElement):
            return self.ctx is other.ctx and self.val == other.val
        if isinstance(other, int):
            # Integers compare through the prime subfield.
            return self.val == other % self.ctx.p
        return NotImplemented

    def __hash__(self):
        return hash((id(self.ctx), self.val))

    def __bool__(self):
        return self.val != 0

    def __int__(self):
        return self.val

    def __repr__(self):
        if self.ctx.k == 1:
            return f"GF({self.ctx.q})({self.val})"
        terms = []
        for i, ci in enumerate(self.ctx.coeffs(self.val)):
            if ci == 0:
                continue
            if i == 0:
                terms.append(str(ci))
            else:
                xs = "x" if i == 1 else f"x^{i}"
                terms.append(xs if ci == 1 else f"{ci}*{xs}")
        return f"GF({self.ctx.q})({' + '.join(terms) or '0'})"


# -- flat operation aliases -------------------------------------------------


def add(a, b):
    """Field addition."""
    return a + b


def sub(a, b):
    """Field subtraction."""
    return a - b


def mul(a, b):
    """Field multiplication."""
    return a * b


def neg(a):
    """Additive inverse."""
    return -a


def inv(a):
    """Multiplicative inverse; raises ZeroDivisionError on 0."""
    return a.inverse()


def power(a, e):
    """a**e for integer e (negative allowed for nonzero a)."""
    return a**e


@functools.lru_cache(maxsize=None)
def _embedding_table(src, dst):
    """Encoding table phi: F_{p^j} -> F_{p^k} for j | k, as an int64 array.

    phi sends the residue class of x in the source field to the least-encoded
    root of the source modulus in the destination field; extending F_p-linearly
    gives a field embedding fixing the prime subfield.
    """
    p, j = src.p, src.k
    if j == 1:
        return np.arange(p, dtype=np.int64)
    if dst.q > TABLE_LIMIT:
        raise ResourceLimitError("embedding scan requires destination tables")
    elems = np.arange(dst.q, dtype=np.int64)
    acc = np.zeros(dst.q, dtype=np.int64)
    for c in reversed(src.modulus):
        acc = dst.v_add(dst.v_mul(acc, elems), np.full(dst.q, c % p, dtype=np.int64))
    roots = np.flatnonzero(acc == 0)
    if roots.size == 0:  # pragma: no cover - a root exists whenever j | k
        raise InternalCheckError("no root of subfield modulus found")
    r = int(roots[0])
    table = np.zeros(src.q, dtype=np.int64)
    for a in range(src.q):
        v = 0
        for c in reversed(src.coeffs(a)):
            v = dst._add_scalar(dst._mul_scalar(v, r), c % p)
        table[a] = v
    return table


def embed(a, target):
    """Embed an element of F_{p^j} into F_{p^k} where j divides k.

    Args:
        a: GFElement of the source field.
        target: Destination FieldContext with the same characteristic.

    Returns:
        The image GFElement in the destination field.

    Raises:
        InvalidArgumentError: On characteristic mismatch or when the source
            degree does not divide the destination degree.
    """
    src = a.ctx
    if src is target:
        return a
    _check_embeddable(src, target)
    return GFElement(target, int(_embedding_table(src, target)[a.val]))


def embed_array(values, src, target):
    """Vectorized embed of an int64 encoding array from src into target."""
    if src is target:
        return np.array(values, dtype=np.int64, copy=True)
    _check_embeddable(src, target)
    return _embedding_table(src, target)[np.asarray(values, dtype=np.int64)]


def _check_embeddable(src, target):
    if src.p != target.p:
        raise InvalidArgumentError("characteristic mismatch")
    if target.k % src.k != 0:
        raise InvalidArgumentError(
            f"degree {src.k} does not divide {target.k}; no embedding exists"
        )
