"""Length-n vectors with p-typical universal arithmetic.

The ring structure on A^(n+1) is pinned down by the ghost coordinates
w_i = sum_j p^j a_j^(p^(i-j)): addition, multiplication, negation and the
length-lowering Frobenius are given by the unique integer polynomials that
make every w_i behave componentwise.  Those polynomials are derived here by
solving the ghost identities index by index over Z; each step divides by p^i
and the division is asserted exact (a failure would be an implementation
bug, not an input property).

Derived polynomials are cached per (p, kind, index) under a lock and then
evaluated in whatever ring the vector components live in: plain integers,
:class:`~wittkit.exactalg.Coefficient`, or truncated-algebra elements.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass

from .errors import CapExceeded, IntegralityFailure, LengthMismatch, WittkitError

__all__ = [
    "LENGTH_CAP",
    "WittVector",
    "GhostVector",
    "derive_witt_polynomials",
    "witt_add",
    "witt_mul",
    "witt_neg",
    "witt_frobenius",
    "witt_verschiebung",
    "teichmuller",
    "ghost_map",
    "from_ghost",
]

LENGTH_CAP = 4  # product polynomials explode combinatorially past this

_KINDS = ("sum", "product", "negation", "frobenius")
_CACHE = {}
_LOCK = threading.Lock()


# -- integer polynomials as {exponent tuple: coefficient} -------------------


def _padd(a, b):
    out = dict(a)
    for k, v in b.items():
        s = out.get(k, 0) + v
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return out


def _pscale(a, c):
    return {k: v * c for k, v in a.items()} if c else {}


def _pmul(a, b):
    out = {}
    for ka, va in a.items():
        for kb, vb in b.items():
            k = tuple(x + y for x, y in zip(ka, kb))
            s = out.get(k, 0) + va * vb
            if s:
                out[k] = s
            else:
                out.pop(k, None)
    return out


def _ppow(a, n, nvars):
    out = {(0,) * nvars: 1}
    base = a
    while n:
        if n & 1:
            out = _pmul(out, base)
        n >>= 1
        if n:
            base = _pmul(base, base)
    return out


def _embed(poly, positions, nvars):
    out = {}
    for k, v in poly.items():
        key = [0] * nvars
        for pos, e in zip(positions, k):
            key[pos] = e
        out[tuple(key)] = v
    return out


def _ghost_poly(p, i, positions, nvars):
    out = {}
    for j in range(i + 1):
        mono = [0] * nvars
        mono[positions[j]] = p ** (i - j)
        key = tuple(mono)
        out[key] = out.get(key, 0) + p**j
    return out


def _pdiv_exact(a, d):
    out = {}
    for k, v in a.items():
        q, r = divmod(v, d)
        if r:
            raise IntegralityFailure(
                f"ghost recursion produced coefficient {v} not divisible by {d}"
            )
        out[k] = q
    return out


def derive_witt_polynomials(p, n, kind):
    """The index-n universal polynomial of the requested kind.

    Variable slots are (X_0..X_n, Y_0..Y_n) for sum/product, (X_0..X_n) for
    negation and (X_0..X_{n+1}) for frobenius.  Exact integer coefficients;
    memoized per (p, kind, n).
    """
    if kind not in _KINDS:
        raise ValueError(f"kind must be one of {_KINDS}")
    if n < 0:
        raise ValueError("index must be non-negative")
    if n > LENGTH_CAP:
        raise CapExceeded(
            f"index {n} exceeds the configured cap {LENGTH_CAP}"
        )
    key = (p, kind, n)
    with _LOCK:
        if key in _CACHE:
            return _CACHE[key]
        for i in range(n + 1):
            k_i = (p, kind, i)
            if k_i in _CACHE:
                continue
            _CACHE[k_i] = _solve_ghost_identity(p, i, kind)
        return _CACHE[key]


def _solve_ghost_identity(p, n, kind):
    if kind in ("sum", "product"):
        nvars = 2 * (n + 1)
        xs = list(range(n + 1))
        ys = list(range(n + 1, 2 * (n + 1)))
        gx = _ghost_poly(p, n, xs, nvars)
        gy = _ghost_poly(p, n, ys, nvars)
        target = _padd(gx, gy) if kind == "sum" else _pmul(gx, gy)
        lower_slots = lambda j: xs[: j + 1] + ys[: j + 1]  # noqa: E731
    elif kind == "negation":
        nvars = n + 1
        target = _pscale(_ghost_poly(p, n, list(range(n + 1)), nvars), -1)
        lower_slots = lambda j: list(range(j + 1))  # noqa: E731
    else:  # frobenius: w_n(F) = w_{n+1}(X), F_j in X_0..X_{j+1}
        nvars = n + 2
        target = _ghost_poly(p, n + 1, list(range(n + 2)), nvars)
        lower_slots = lambda j: list(range(j + 2))  # noqa: E731
    acc = target
    for j in range(n):
        lower = _CACHE[(p, kind, j)]
        lifted = _embed(lower, lower_slots(j), nvars)
        acc = _padd(acc, _pscale(_ppow(lifted, p ** (n - j), nvars), -(p**j)))
    return _pdiv_exact(acc, p**n)


# -- evaluation in an arbitrary component ring -------------------------------


def _ring_zero(sample):
    return 0 if isinstance(sample, int) else sample.coerce_int(0)


def _eval_poly(poly, values):
    acc = None
    for expo, c in poly.items():
        term = c
        for v, e in zip(values, expo):
            if e:
                term = term * v**e
        acc = term if acc is None else acc + term
    if acc is None:
        return _ring_zero(values[0])
    if isinstance(acc, int) and not isinstance(values[0], int):
        acc = values[0].coerce_int(acc)
    return acc


@dataclass(frozen=True)
class WittVector:
    """(a_0, ..., a_n) with the universal p-typical ring structure.

    Components are 0-indexed.  As a set this is A^(n+1); the operations
    below are the derived polynomial ones.
    """

    p: int
    comps: tuple

    def __post_init__(self):
        if not self.comps:
            raise WittkitError("a Witt vector needs at least one component")

    @property
    def length(self):
        """The index n; the vector has n+1 components."""
        return len(self.comps) - 1

    def __add__(self, other):
        return witt_add(self, other)

    def __mul__(self, other):
        return witt_mul(self, other)

    def __neg__(self):
        return witt_neg(self)

    def __sub__(self, other):
        return witt_add(self, witt_neg(other))


@dataclass(frozen=True)
class GhostVector:
    comps: tuple


def _check_compatible(x, y):
    if x.p != y.p or len(x.comps) != len(y.comps):
        raise LengthMismatch(
            f"incompatible vectors: p={x.p},{y.p} lengths {x.length},{y.length}"
        )


def witt_add(x: WittVector, y: WittVector) -> WittVector:
    _check_compatible(x, y)
    comps = tuple(
        _eval_poly(
            derive_witt_polynomials(x.p, i, "sum"),
            x.comps[: i + 1] + y.comps[: i + 1],
        )
        for i in range(len(x.comps))
    )
    return WittVector(x.p, comps)


def witt_mul(x: WittVector, y: WittVector) -> WittVector:
    _check_compatible(x, y)
    comps = tuple(
        _eval_poly(
            derive_witt_polynomials(x.p, i, "product"),
            x.comps[: i + 1] + y.comps[: i + 1],
        )
        for i in range(len(x.comps))
    )
    return WittVector(x.p, comps)


def witt_neg(x: WittVector) -> WittVector:
    if x.p != 2:
        return WittVector(x.p, tuple(-c for c in x.comps))
    comps = tuple(
        _eval_poly(derive_witt_polynomials(2, i, "negation"), x.comps[: i + 1])
        for i in range(len(x.comps))
    )
    return WittVector(2, comps)


def witt_frobenius(x: WittVector) -> WittVector:
    """Length-lowering Frobenius W_{p^n} -> W_{p^(n-1)}."""
    if x.length < 1:
        raise LengthMismatch("frobenius needs length at least 1")
    comps = tuple(
        _eval_poly(derive_witt_polynomials(x.p, i, "frobenius"), x.comps[: i + 2])
        for i in range(x.length)
    )
    return WittVector(x.p, comps)


def witt_verschiebung(x: WittVector) -> WittVector:
    """Additive shift W_{p^n} -> W_{p^(n+1)}: (a_0,...) -> (0, a_0, ...)."""
    return WittVector(x.p, (_ring_zero(x.comps[0]),) + x.comps)


def teichmuller(a, n, p) -> WittVector:
    """Multiplicative lift (a, 0, ..., 0) of length n."""
    zero = _ring_zero(a)
    return WittVector(p, (a,) + (zero,) * n)


def ghost_map(x: WittVector) -> GhostVector:
    p = x.p
    comps = []
    for i in range(len(x.comps)):
        w = None
        for j in range(i + 1):
            term = p**j * x.comps[j] ** (p ** (i - j))
            w = term if w is None else w + term
        comps.append(w)
    return GhostVector(tuple(comps))


def from_ghost(g: GhostVector, p: int) -> WittVector:
    """Invert the ghost map by the triangular recursion.

    Exact over Z when the ghost vector is in the image; always defined when
    p is invertible in the component ring.
    """
    comps = []
    for i, w in enumerate(g.comps):
        acc = w
        for j in range(i):
            acc = acc + (-(p**j)) * comps[j] ** (p ** (i - j))
        if i == 0:
            comps.append(acc)
            continue
        d = p**i
        if isinstance(acc, int):
            q, r = divmod(acc, d)
            if r:
                raise WittkitError(
                    f"ghost vector is not in the image: w_{i} residue {acc} "
                    f"is not divisible by p^{i}"
                )
            comps.append(q)
        else:
            ok, inv = acc.coerce_int(d).try_inverse()
            if not ok:
                raise WittkitError(
                    f"cannot divide by p^{i}: p is not invertible here"
                )
            comps.append(acc * inv)
    return WittVector(p, tuple(comps))
