"""Exact arithmetic in finite truncations of mixed-characteristic rings.

A :class:`TruncatedAlgebra` models a ring like Z/p^N[[x_2^(1/p^n), ...]]
with three finite caps: coefficients live mod p^N, exponents have denominator
at most p^n (the *level*), and terms are dropped beyond a total-degree cap D.
Defining relations are rewrite rules restricted to shapes that reduce
confluently without a full Groebner engine: a monic rule eliminating powers
of one designated variable, or a monomial rule sending a monomial to zero.

Degrees are weighted.  Each variable carries a non-negative rational weight,
and the coefficient prime p itself may carry one (``p_weight``), so that
rewrites like "eliminate t1^2 in favour of the coefficient p" never move a
term below its own degree.  That monotonicity is what makes the degree-cap
ideal compatible with rewriting; it is validated at construction together
with bounded termination and confluence of all rule overlaps.

Every element is kept in canonical normal form: rule-irreducible monomials,
coefficients reduced mod p^N and stripped of digits pushed beyond the cap by
``p_weight``.  Distinct normal forms are distinct elements, so the algebra is
a free Z/p^N-module on its reduced monomial basis up to the recorded
truncation, and all verdicts produced here are exact at that truncation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import (
    CapExceeded,
    ExponentLevelMismatch,
    InexactDivision,
    InvalidRelations,
    WittkitError,
)
from .linalg import SpanZpN, left_kernel, solve_combination, vp

__all__ = [
    "Coefficient",
    "FracMonomial",
    "RewriteRule",
    "TruncatedAlgebra",
    "PolyElement",
    "MembershipCertificate",
    "is_unit",
    "exact_div_p",
    "solve_linear_membership",
    "colon_submodule",
]

_BASIS_CAP = 20000
_REWRITE_FUSE = 2_000_000


def _is_small_prime(p):
    if p < 2:
        return False
    for q in range(2, int(p**0.5) + 1):
        if p % q == 0:
            return False
    return True


@dataclass(frozen=True)
class Coefficient:
    """Exact scalar: an integer, or a residue mod a fixed positive modulus.

    ``modulus == 0`` means a characteristic-zero integer.  Arithmetic never
    rounds; mixed-modulus operations are rejected.
    """

    value: int
    modulus: int = 0

    def __post_init__(self):
        if self.modulus < 0:
            raise ValueError("modulus must be non-negative")
        if self.modulus:
            object.__setattr__(self, "value", self.value % self.modulus)

    def _coerce(self, other):
        if isinstance(other, Coefficient):
            if other.modulus != self.modulus:
                raise ValueError("coefficient modulus mismatch")
            return other
        if isinstance(other, int):
            return Coefficient(other, self.modulus)
        return NotImplemented

    def coerce_int(self, k: int) -> "Coefficient":
        return Coefficient(k, self.modulus)

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return Coefficient(self.value + o.value, self.modulus)

    __radd__ = __add__

    def __neg__(self):
        return Coefficient(-self.value, self.modulus)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return Coefficient(self.value - o.value, self.modulus)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return Coefficient(self.value * o.value, self.modulus)

    __rmul__ = __mul__

    def __pow__(self, k):
        if k < 0:
            raise ValueError("negative power on a Coefficient")
        if self.modulus:
            return Coefficient(pow(self.value, k, self.modulus), self.modulus)
        return Coefficient(self.value**k, 0)

    def try_inverse(self):
        """(True, inverse) when the scalar is a unit, else (False, None)."""
        if self.modulus == 0:
            if self.value in (1, -1):
                return True, self
            return False, None
        try:
            return True, Coefficient(pow(self.value, -1, self.modulus), self.modulus)
        except ValueError:
            return False, None

    @property
    def is_zero(self):
        return self.value == 0


@dataclass(frozen=True)
class FracMonomial:
    """Monomial with exponents scaled to integers by p^level.

    ``scaled[i]`` is the i-th exponent multiplied by p^level, so exact keys
    sort and hash cheaply while representing exponents in (1/p^level)Z.
    """

    scaled: tuple
    level: int

    @property
    def sort_key(self):
        return (sum(self.scaled), self.scaled)

    def exponents(self, p):
        d = p**self.level
        return tuple(Fraction(s, d) for s in self.scaled)

    def __mul__(self, other):
        if self.level != other.level:
            raise ValueError("monomial level mismatch")
        return FracMonomial(
            tuple(a + b for a, b in zip(self.scaled, other.scaled)), self.level
        )

    def divides(self, other):
        return self.level == other.level and all(
            a <= b for a, b in zip(self.scaled, other.scaled)
        )

    def __truediv__(self, other):
        if not other.divides(self):
            raise ValueError("inexact monomial division")
        return FracMonomial(
            tuple(a - b for a, b in zip(self.scaled, other.scaled)), self.level
        )

    @property
    def is_unit_monomial(self):
        return not any(self.scaled)


@dataclass(frozen=True)
class RewriteRule:
    """lead -> replacement, applied to any monomial the lead divides.

    A pure power of one variable with a non-empty replacement is a monic
    rule; any monomial with an empty replacement rewrites to zero.
    """

    lead: FracMonomial
    replacement: tuple  # of (FracMonomial, int); empty means "to zero"

    def designated(self):
        nz = [i for i, s in enumerate(self.lead.scaled) if s]
        return nz[0] if len(nz) == 1 and self.replacement else None


class PolyElement:
    """Normalized sparse element of a TruncatedAlgebra.  Immutable."""

    __slots__ = ("ambient", "_terms", "_hash")

    def __init__(self, ambient, terms):
        self.ambient = ambient
        self._terms = terms
        self._hash = None

    @property
    def is_zero(self):
        return not self._terms

    def terms(self):
        return tuple(sorted(self._terms.items(), key=lambda t: t[0].sort_key))

    def coefficient(self, mono):
        return self._terms.get(mono, 0)

    def constant_coefficient(self):
        return self._terms.get(self.ambient.unit_monomial, 0)

    def min_vp(self):
        A = self.ambient
        if not self._terms:
            return A.precision
        return min(vp(c, A.p, A.precision) for c in self._terms.values())

    def min_weight(self):
        """Least weighted degree among terms (coefficient valuation included)."""
        A = self.ambient
        if not self._terms:
            return None
        return min(
            A.weight(m) + vp(c, A.p, A.precision) * A.p_weight
            for m, c in self._terms.items()
        )

    def _binop(self, other, sign):
        A = self.ambient
        if isinstance(other, int):
            other = A.from_int(other)
        if not isinstance(other, PolyElement) or other.ambient != A:
            return NotImplemented
        raw = dict(self._terms)
        for m, c in other._terms.items():
            raw[m] = raw.get(m, 0) + sign * c
        return A._canonical(raw)

    def __add__(self, other):
        return self._binop(other, 1)

    __radd__ = __add__

    def __sub__(self, other):
        return self._binop(other, -1)

    def __rsub__(self, other):
        return (-self)._binop(other, 1)

    def __neg__(self):
        return self.ambient._canonical({m: -c for m, c in self._terms.items()})

    def __mul__(self, other):
        A = self.ambient
        if isinstance(other, int):
            return A._canonical({m: c * other for m, c in self._terms.items()})
        if not isinstance(other, PolyElement) or other.ambient != A:
            return NotImplemented
        raw = {}
        for ma, ca in self._terms.items():
            for mb, cb in other._terms.items():
                key = ma * mb
                raw[key] = raw.get(key, 0) + ca * cb
        return A.reduce(raw)

    __rmul__ = __mul__

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = self.ambient.one
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ambient.from_int(other)
        if not isinstance(other, PolyElement):
            return NotImplemented
        return self.ambient == other.ambient and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ambient, self.terms()))
        return self._hash

    def coerce_int(self, k: int) -> "PolyElement":
        return self.ambient.from_int(k)

    def text(self):
        """Canonical rendering, e.g. ``1 + 3*x^(1/2)``."""
        if not self._terms:
            return "0"
        A = self.ambient
        parts = []
        for mono, coeff in self.terms():
            factors = []
            for name, e in zip(A.variables, mono.exponents(A.p)):
                if e == 0:
                    continue
                if e.denominator == 1:
                    factors.append(name if e == 1 else f"{name}^{e.numerator}")
                else:
                    factors.append(f"{name}^({e.numerator}/{e.denominator})")
            if not factors:
                parts.append(str(coeff))
            elif coeff == 1:
                parts.append("*".join(factors))
            else:
                parts.append("*".join([str(coeff)] + factors))
        return " + ".join(parts)

    def __repr__(self):
        return self.text()


class TruncatedAlgebra:
    """Finite-dimensional truncation (N, level, D) of a power-series quotient.

    Relations must satisfy, and are checked at construction for:
    monic or monomial shape, weight monotonicity, designated-variable
    discipline (so rewriting terminates), overlap confluence within the cap,
    replacements inside the maximal ideal (which keeps the ring local), and a
    finite reduced-monomial basis.
    """

    def __init__(
        self,
        p,
        precision,
        degree_cap,
        variables,
        level=0,
        weights=None,
        p_weight=0,
        relations=(),
    ):
        if not _is_small_prime(p):
            raise WittkitError(f"{p} is not prime")
        if precision < 1 or level < 0:
            raise WittkitError("need precision >= 1 and level >= 0")
        self.p = p
        self.precision = precision
        self.level = level
        self.degree_cap = degree_cap
        self._cap = Fraction(degree_cap)
        self.variables = tuple(variables)
        if len(set(self.variables)) != len(self.variables):
            raise WittkitError("duplicate variable names")
        if weights is None:
            weights = (Fraction(1),) * len(self.variables)
        self.weights = tuple(Fraction(w) for w in weights)
        if len(self.weights) != len(self.variables) or any(
            w < 0 for w in self.weights
        ):
            raise WittkitError("need one non-negative weight per variable")
        self.p_weight = Fraction(p_weight)
        self.modulus = p**precision
        self.unit_monomial = FracMonomial((0,) * len(self.variables), level)
        self._rules = tuple(self._normalize_rule(r) for r in relations)
        self._scaled_weights = tuple(
            w / p**level for w in self.weights
        )  # weight per unit of scaled exponent
        self._weight_cache = {}
        self._key = (
            p,
            precision,
            level,
            self._cap,
            self.variables,
            self.weights,
            self.p_weight,
            tuple((r.lead, r.replacement) for r in self._rules),
        )
        self._basis = None
        self._validate_rules()
        self.zero = PolyElement(self, {})
        self.one = PolyElement(self, {self.unit_monomial: 1}) if precision else None

    # -- identity ---------------------------------------------------------

    def __eq__(self, other):
        return isinstance(other, TruncatedAlgebra) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        rel = f", {len(self._rules)} relations" if self._rules else ""
        return (
            f"TruncatedAlgebra(p={self.p}, N={self.precision}, level={self.level}, "
            f"D={self.degree_cap}, vars={','.join(self.variables) or '-'}{rel})"
        )

    @property
    def truncation(self):
        return (self.precision, self.level, self.degree_cap)

    # -- monomials ---------------------------------------------------------

    def _normalize_monomial(self, mono):
        if isinstance(mono, tuple):
            mono = FracMonomial(
                tuple(s * self.p**self.level for s in mono), self.level
            )
        if len(mono.scaled) != len(self.variables):
            raise WittkitError("monomial has wrong number of exponents")
        if mono.level > self.level:
            shift = self.p ** (mono.level - self.level)
            if any(s % shift for s in mono.scaled):
                raise ExponentLevelMismatch(
                    f"denominator p^{mono.level} exceeds the level p^{self.level}"
                )
            return FracMonomial(tuple(s // shift for s in mono.scaled), self.level)
        if mono.level < self.level:
            shift = self.p ** (self.level - mono.level)
            return FracMonomial(tuple(s * shift for s in mono.scaled), self.level)
        return mono

    def weight(self, mono) -> Fraction:
        w = self._weight_cache.get(mono)
        if w is None:
            w = sum(
                (s * sw for s, sw in zip(mono.scaled, self._scaled_weights)),
                Fraction(0),
            )
            self._weight_cache[mono] = w
        return w

    def effective_precision(self, mono) -> int:
        """Digits of p the cap leaves on this monomial (<= precision)."""
        if self.p_weight == 0:
            return self.precision
        head = self._cap - self.weight(mono)
        if head < 0:
            return 0
        return min(self.precision, int(head / self.p_weight) + 1)

    def mono(self, exponents: dict) -> PolyElement:
        scaled = [0] * len(self.variables)
        for name, e in exponents.items():
            e = Fraction(e)
            idx = self.variables.index(name)
            s = e * self.p**self.level
            if s.denominator != 1 or s < 0:
                raise ExponentLevelMismatch(
                    f"exponent {e} of {name} is not in (1/{self.p}^{self.level})Z>=0"
                )
            scaled[idx] = int(s)
        return self.reduce({FracMonomial(tuple(scaled), self.level): 1})

    def mono_elem(self, mono: FracMonomial) -> PolyElement:
        return self.reduce({mono: 1})

    def var(self, name) -> PolyElement:
        return self.mono({name: 1})

    def from_int(self, k) -> PolyElement:
        return self._canonical({self.unit_monomial: k})

    # -- normal forms -------------------------------------------------------

    def _find_rule(self, mono):
        for rule in self._rules:
            if rule.lead.divides(mono):
                return rule
        return None

    def _canonical(self, raw):
        """Zero removal plus the per-monomial digit cut; no rewriting."""
        final = {}
        for mono, c in raw.items():
            c %= self.modulus
            if c == 0:
                continue
            if self.p_weight:
                ne = self.effective_precision(mono)
                c %= self.p**ne
                if c == 0:
                    continue
            final[mono] = c
        return PolyElement(self, final)

    def reduce(self, raw) -> PolyElement:
        """Unique normal form of a raw term map modulo (p^N, cap, relations)."""
        if isinstance(raw, dict):
            raw = raw.items()
        work = [(self._normalize_monomial(m), c) for m, c in raw]
        out = {}
        steps = 0
        while work:
            mono, c = work.pop()
            c %= self.modulus
            if c == 0:
                continue
            if self.weight(mono) > self._cap:
                continue
            rule = self._find_rule(mono)
            if rule is None:
                out[mono] = (out.get(mono, 0) + c) % self.modulus
                continue
            quot = mono / rule.lead
            for rm, rc in rule.replacement:
                work.append((quot * rm, c * rc))
            steps += 1
            if steps > _REWRITE_FUSE:
                raise InvalidRelations("rewriting did not terminate")
        return self._canonical(out)

    # -- relation validation -------------------------------------------------

    def _normalize_rule(self, rule):
        lead = self._normalize_monomial(rule.lead)
        repl = tuple(
            (self._normalize_monomial(m), c) for m, c in rule.replacement if c
        )
        if lead.is_unit_monomial:
            raise InvalidRelations("rule lead must be a non-unit monomial")
        return RewriteRule(lead, repl)

    def _validate_rules(self):
        designated = {}
        for rule in self._rules:
            d = rule.designated()
            if d is None and rule.replacement:
                raise InvalidRelations(
                    "non-monomial relations must be monic in one variable"
                )
            if d is not None:
                if d in designated:
                    raise InvalidRelations(
                        f"two monic rules eliminate {self.variables[d]}"
                    )
                designated[d] = rule.lead.scaled[d]
        for rule in self._rules:
            lead_wt = self.weight(rule.lead)
            d = rule.designated()
            for rm, rc in rule.replacement:
                term_wt = self.weight(rm) + vp(rc, self.p, self.precision) * self.p_weight
                if term_wt < lead_wt:
                    raise InvalidRelations(
                        "replacement term below the lead's weight; "
                        "truncation would not be an ideal"
                    )
                for j, bound in designated.items():
                    if j == d:
                        if rm.scaled[j] >= rule.lead.scaled[j]:
                            raise InvalidRelations(
                                "replacement does not lower the designated exponent"
                            )
                    elif rm.scaled[j] >= bound:
                        raise InvalidRelations(
                            "replacement reintroduces another rule's designated variable"
                        )
                if rm.is_unit_monomial and rc % self.p:
                    raise InvalidRelations(
                        "replacement has a unit constant term; ring would not be local"
                    )
        for i, w in enumerate(self.weights):
            if w == 0 and i not in designated:
                raise InvalidRelations(
                    f"variable {self.variables[i]} has weight 0 and no bounding rule"
                )
        self._check_confluence()

    def _check_confluence(self):
        for r1, r2 in itertools.combinations(self._rules, 2):
            overlap = FracMonomial(
                tuple(max(a, b) for a, b in zip(r1.lead.scaled, r2.lead.scaled)),
                self.level,
            )
            if self.weight(overlap) > self._cap:
                continue
            ways = []
            for rule in (r1, r2):
                quot = overlap / rule.lead
                ways.append(
                    self.reduce({quot * rm: rc for rm, rc in rule.replacement})
                )
            if ways[0] != ways[1]:
                raise InvalidRelations(
                    "relation overlap reduces two ways inconsistently"
                )

    # -- basis and coordinates ------------------------------------------------

    @property
    def basis(self):
        """Reduced monomials of weight <= cap, sorted; a free Z/p^N basis
        up to the per-monomial digit cut."""
        if self._basis is None:
            seen = {self.unit_monomial}
            queue = [self.unit_monomial]
            nvars = len(self.variables)
            while queue:
                m = queue.pop()
                for i in range(nvars):
                    scaled = list(m.scaled)
                    scaled[i] += 1
                    cand = FracMonomial(tuple(scaled), self.level)
                    if cand in seen:
                        continue
                    if self.weight(cand) > self._cap:
                        continue
                    if self._find_rule(cand) is not None:
                        continue
                    seen.add(cand)
                    queue.append(cand)
                    if len(seen) > _BASIS_CAP:
                        raise CapExceeded(
                            f"monomial basis exceeds {_BASIS_CAP} elements"
                        )
            self._basis = tuple(sorted(seen, key=lambda mm: mm.sort_key))
            self._basis_index = {m: i for i, m in enumerate(self._basis)}
        return self._basis

    @property
    def dim(self):
        return len(self.basis)

    def coords(self, e: PolyElement) -> np.ndarray:
        self.basis
        v = np.zeros(self.dim, dtype=np.int64)
        for m, c in e._terms.items():
            v[self._basis_index[m]] = c
        return v

    def from_coords(self, v) -> PolyElement:
        return self.reduce({m: int(c) for m, c in zip(self.basis, v)})

    def truncation_rows(self) -> np.ndarray:
        """Coordinate vectors that are zero in the algebra (digit-cut tails).

        Linear solving happens in the free module (Z/p^N)^dim; these rows
        must sit on the span side of every system so that coordinate sums
        agree with ring equality.
        """
        rows = []
        for i, m in enumerate(self.basis):
            ne = self.effective_precision(m)
            if ne < self.precision:
                row = np.zeros(self.dim, dtype=np.int64)
                row[i] = self.p**ne
                rows.append(row)
        return (
            np.array(rows, dtype=np.int64)
            if rows
            else np.zeros((0, self.dim), dtype=np.int64)
        )

    def ideal_rows(self, gens) -> np.ndarray:
        """Rows spanning the ideal (gens) + the truncation tails."""
        rows = [self.coords(g * self.mono_elem(m)) for g in gens for m in self.basis]
        junk = self.truncation_rows()
        if rows:
            return np.vstack([np.array(rows, dtype=np.int64), junk])
        return junk

    def colon_window(self, gens, divisor):
        """Basis monomials whose product with the divisor stays under the cap."""
        wmin = divisor.min_weight()
        if wmin is None:
            return []
        return [m for m in self.basis if self.weight(m) + wmin <= self._cap]


@dataclass(frozen=True)
class MembershipCertificate:
    """Σ coefficients[i]·generators[i] = target, exactly, or a non-membership
    verdict at the recorded truncation."""

    target: PolyElement
    generators: tuple
    coefficients: tuple  # of PolyElement, or None for NonMemberAtTruncation
    truncation: tuple

    @property
    def is_member(self):
        return self.coefficients is not None

    def verify(self) -> bool:
        if not self.is_member:
            return False
        acc = self.target.ambient.zero
        for q, g in zip(self.coefficients, self.generators):
            acc = acc + q * g
        return acc == self.target


def is_unit(e: PolyElement):
    """Invertibility of multiplication-by-e, with the inverse when it exists.

    The algebra is local (validated at construction), so e is a unit exactly
    when its constant coefficient is one mod p; the inverse then comes from
    the geometric series of the nilpotent tail and is verified exactly.
    """
    A = e.ambient
    c0 = e.constant_coefficient()
    if c0 % A.p == 0:
        return False, None
    cinv = pow(c0, -1, A.modulus)
    tail = A.one - cinv * e
    inv = A.one
    term = A.one
    while True:
        term = term * tail
        if term.is_zero:
            break
        inv = inv + term
    inv = cinv * inv
    if e * inv != A.one:
        raise WittkitError("inverse verification failed")  # pragma: no cover
    return True, inv


def exact_div_p(e: PolyElement, k: int) -> PolyElement:
    """e / p^k on canonical representatives; exact or InexactDivision.

    The result is meaningful at precision N-k; multiplying back by p^k
    recovers e exactly in Z/p^N.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    if k == 0:
        return e
    A = e.ambient
    pk = A.p**k
    out = {}
    for m, c in e._terms.items():
        if c % pk:
            raise InexactDivision(
                f"coefficient {c} of {A.mono_elem(m).text()} is not divisible by p^{k}"
            )
        out[m] = c // pk
    return A._canonical(out)


def solve_linear_membership(target: PolyElement, gens) -> MembershipCertificate:
    """Search Σ q_i g_i = target with q_i over the whole monomial basis.

    Complete at the truncation: non-membership is a verdict, not a failure.
    """
    A = target.ambient
    gens = list(gens)
    for g in gens:
        if g.ambient != A:
            raise WittkitError("generators live in a different algebra")
    dim = A.dim
    blocks = []
    for g in gens:
        for m in A.basis:
            blocks.append(A.coords(g * A.mono_elem(m)))
    junk = A.truncation_rows()
    rows = (
        np.vstack([np.array(blocks, dtype=np.int64), junk])
        if blocks
        else junk
    )
    coeffs = solve_combination(rows, A.coords(target), A.p, A.precision)
    if coeffs is None:
        return MembershipCertificate(target, tuple(gens), None, A.truncation)
    qs = []
    for i in range(len(gens)):
        qs.append(
            A.reduce(
                {
                    m: int(coeffs[i * dim + j])
                    for j, m in enumerate(A.basis)
                }
            )
        )
    cert = MembershipCertificate(target, tuple(gens), tuple(qs), A.truncation)
    if not cert.verify():  # pragma: no cover
        raise WittkitError("membership certificate failed re-verification")
    return cert


def truncation_window_rows(A: TruncatedAlgebra, divisor: PolyElement) -> np.ndarray:
    """Coordinate tails invisible to multiplication by the divisor.

    A candidate digit p^a * m whose product weight a*pw + wt(m) + wt(divisor)
    leaves the cap, or whose valuation a reaches N - vp(divisor), cannot
    witness genuine torsion at this truncation; these rows quotient such
    digits out of reported colon classes.
    """
    s = divisor.min_vp()
    wmin = divisor.min_weight()
    rows = []
    for i, m in enumerate(A.basis):
        ne = A.precision - s
        if A.p_weight:
            head = Fraction(A.degree_cap) - A.weight(m) - wmin
            if head < 0:
                ne = 0
            else:
                ne = min(ne, int(head / A.p_weight) + 1)
        if ne < A.precision:
            row = np.zeros(A.dim, dtype=np.int64)
            row[i] = A.p ** max(ne, 0)
            rows.append(row)
    return (
        np.array(rows, dtype=np.int64)
        if rows
        else np.zeros((0, A.dim), dtype=np.int64)
    )


def colon_submodule(A: TruncatedAlgebra, gens, divisor: PolyElement):
    """Generators of ((gens) : divisor)/(gens), windowed against truncation.

    The kernel of multiplication-by-divisor is searched only over monomials
    whose product stays under the degree cap, and reported classes are
    quotiented by the digits that truncation alone kills (see
    :func:`truncation_window_rows`).  An empty result means the divisor is
    regular on A/(gens) at this truncation.
    """
    if divisor.ambient != A:
        raise WittkitError("divisor lives in a different algebra")
    junk_span_rows = A.ideal_rows(gens)
    if divisor.is_zero:
        one_red = SpanZpN(junk_span_rows, A.p, A.precision, A.dim).reduce(
            A.coords(A.one)
        )
        return [] if not one_red.any() else [A.one]
    window = A.colon_window(gens, divisor)
    if not window:
        return []
    mult_rows = np.array(
        [A.coords(divisor * A.mono_elem(m)) for m in window], dtype=np.int64
    )
    prec_rows = truncation_window_rows(A, divisor)
    # constraint side: divisor*x must land in (gens) (+ genuine zeros);
    # the precision tail p^(N-s)A only quotients the reported classes.
    stacked = np.vstack([mult_rows, junk_span_rows])
    K = left_kernel(stacked, A.p, A.precision)
    quot = SpanZpN(
        np.vstack([junk_span_rows, prec_rows]), A.p, A.precision, A.dim
    )
    result = []
    span_rows = [r for r in quot.rows]
    current = quot
    for krow in K:
        e = A.reduce(
            {m: int(c) for m, c in zip(window, krow[: len(window)])}
        )
        if e.is_zero:
            continue
        if current.contains(A.coords(e)):
            continue
        result.append(e)
        for m in A.basis:
            span_rows.append(A.coords(e * A.mono_elem(m)))
        current = SpanZpN(
            np.array(span_rows, dtype=np.int64), A.p, A.precision, A.dim
        )
    return result
