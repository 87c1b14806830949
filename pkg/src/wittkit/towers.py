"""Finite-level models of p-power-root towers and their certified witnesses.

Three tower kinds are supported, all over the residue field F_p:

* ``valuation``: level n adjoins p^(1/p^n) to Z/p^N; the fractional powers
  of p live in a variable named ``p`` whose integer powers rewrite into the
  coefficient prime.
* ``unramified``: the valuation tower plus series variables x2..xd whose
  exponents acquire denominator p^n at level n.
* ``ramified``: Z/p^N series in t1..td with p = G(t), G a fixed polynomial
  with no terms below degree two; level n admits exponents with denominator
  p^n.  The relation is oriented to eliminate a unit-coefficient monomial of
  G of minimal degree, and the coefficient prime carries that degree as its
  weight so truncation stays an ideal.

Levels embed upward by an exponent-preserving ring map, and every element of
level n acquires a p-th root at level n+1 by the monomial rule (coefficients
reduce mod p, exponents divide by p).  The operations here return witnesses
whose defining identities are re-verified exactly at the stated truncation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .errors import (
    CannotExtend,
    InvalidSpec,
    NoRootAtTruncation,
    NoWitness,
    UnitCheckFailed,
    WittkitError,
)
from .exactalg import (
    FracMonomial,
    MembershipCertificate,
    PolyElement,
    RewriteRule,
    TruncatedAlgebra,
    exact_div_p,
    is_unit,
    solve_linear_membership,
)

__all__ = [
    "TowerSpec",
    "TowerLevel",
    "build_level",
    "frobenius_root",
    "frob_surjectivity_report",
    "FrobeniusReport",
    "RootEntry",
    "p_big_sequence",
    "PBigWitness",
    "ramified_uniformizer",
    "default_decomposition",
    "UniformizerResult",
    "witt_perfect_criterion",
    "WittPerfectWitness",
]

_KINDS = ("valuation", "unramified", "ramified")


@dataclass(frozen=True)
class TowerSpec:
    """Parameters of a tower; hashable so levels can be cached."""

    kind: str
    p: int
    d: int
    precision: int
    degree_cap: int
    G: tuple = None  # ramified only: ((exponents, coeff), ...)

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise InvalidSpec(f"kind must be one of {_KINDS}")
        if self.d < 1 or self.precision < 1 or self.degree_cap < 1:
            raise InvalidSpec("need d >= 1, precision >= 1, degree cap >= 1")
        if self.kind != "ramified":
            if self.G is not None:
                raise InvalidSpec(f"{self.kind} towers take no defining series G")
            return
        if not self.G:
            raise InvalidSpec("ramified towers need a defining series G")
        G = self.G
        if isinstance(G, dict):
            G = tuple(sorted((tuple(e), int(c)) for e, c in G.items() if c))
        else:
            G = tuple(sorted((tuple(e), int(c)) for e, c in G if c))
        object.__setattr__(self, "G", G)
        for expo, _ in G:
            if len(expo) != self.d or any(e < 0 for e in expo):
                raise InvalidSpec("G exponents must be non-negative, one per variable")
            if sum(expo) == 0:
                raise InvalidSpec("G has a constant term")
            if sum(expo) == 1:
                raise InvalidSpec("G has a degree-one term")
        if all(c % self.p == 0 for _, c in G):
            raise InvalidSpec("G lies in (p)")
        if not self._lead_candidates():
            raise InvalidSpec(
                "G needs a unit-coefficient monomial of minimal degree "
                "to orient the rewrite"
            )

    def _min_degree(self):
        return min(sum(e) for e, _ in self.G)

    def _lead_candidates(self):
        md = self._min_degree()
        return sorted(
            (e, c) for e, c in self.G if sum(e) == md and c % self.p != 0
        )

    @property
    def variables(self):
        if self.kind == "valuation":
            return ("p",)
        if self.kind == "unramified":
            return ("p",) + tuple(f"x{i}" for i in range(2, self.d + 1))
        return tuple(f"t{i}" for i in range(1, self.d + 1))


@dataclass(frozen=True)
class TowerLevel:
    """Level n of a tower: its truncated algebra plus the structural maps."""

    spec: TowerSpec
    n: int
    algebra: TruncatedAlgebra

    def include(self, e: PolyElement, target: "TowerLevel") -> PolyElement:
        """Exponent-preserving embedding into a higher level."""
        if e.ambient != self.algebra:
            raise WittkitError("element does not live at this level")
        if target.spec != self.spec or target.n < self.n:
            raise WittkitError("target must be a higher level of the same tower")
        shift = self.spec.p ** (target.n - self.n)
        raw = {
            FracMonomial(tuple(s * shift for s in m.scaled), target.n): c
            for m, c in e.terms()
        }
        return target.algebra.reduce(raw)

    def pi(self) -> PolyElement:
        """p^(1/p^n); at level 0 this is the coefficient p itself."""
        if self.spec.kind == "ramified":
            raise WittkitError(
                "ramified towers have no canonical root-of-p variable; "
                "use ramified_uniformizer"
            )
        return self.algebra.mono({"p": Fraction(1, self.spec.p**self.n)})

    def G_n(self) -> PolyElement:
        """G evaluated on the level-n roots t_i^(1/p^n)."""
        if self.spec.kind != "ramified":
            raise WittkitError("only ramified towers carry G")
        return self.algebra.reduce(
            {FracMonomial(expo, self.n): c for expo, c in self.spec.G}
        )

    def sop(self):
        """The canonical system of parameters of the level-0 base ring."""
        A = self.algebra
        if self.spec.kind == "valuation":
            return (A.from_int(self.spec.p),)
        if self.spec.kind == "unramified":
            return (A.from_int(self.spec.p),) + tuple(
                A.var(f"x{i}") for i in range(2, self.spec.d + 1)
            )
        return tuple(A.var(f"t{i}") for i in range(1, self.spec.d + 1))

    def maximal_ideal_gens(self):
        A = self.algebra
        denom = self.spec.p**self.n
        if self.spec.kind == "valuation":
            return (self.pi(),)
        if self.spec.kind == "unramified":
            return (self.pi(),) + tuple(
                A.mono({f"x{i}": Fraction(1, denom)})
                for i in range(2, self.spec.d + 1)
            )
        return tuple(
            A.mono({f"t{i}": Fraction(1, denom)}) for i in range(1, self.spec.d + 1)
        )


@lru_cache(maxsize=None)
def build_level(spec: TowerSpec, n: int) -> TowerLevel:
    if n < 0:
        raise InvalidSpec("level must be non-negative")
    p = spec.p
    if spec.kind in ("valuation", "unramified"):
        variables = spec.variables
        unit = FracMonomial((0,) * len(variables), n)
        lead = FracMonomial((p**n,) + (0,) * (len(variables) - 1), n)
        rule = RewriteRule(lead, ((unit, p),))
        algebra = TruncatedAlgebra(
            p=p,
            precision=spec.precision,
            degree_cap=spec.degree_cap,
            variables=variables,
            level=n,
            p_weight=1,
            relations=(rule,),
        )
        return TowerLevel(spec, n, algebra)
    lead_expo, lead_coeff = spec._lead_candidates()[0]
    modulus = p**spec.precision
    inv = pow(lead_coeff, -1, modulus)
    unit = FracMonomial((0,) * spec.d, n)
    scale = p**n
    replacement = [(unit, p * inv % modulus)]
    for expo, c in spec.G:
        if expo == lead_expo:
            if c != lead_coeff:
                replacement.append(
                    (FracMonomial(tuple(e * scale for e in expo), n), -(c - lead_coeff) * inv % modulus)
                )
            continue
        replacement.append(
            (FracMonomial(tuple(e * scale for e in expo), n), -c * inv % modulus)
        )
    rule = RewriteRule(
        FracMonomial(tuple(e * scale for e in lead_expo), n), tuple(replacement)
    )
    algebra = TruncatedAlgebra(
        p=p,
        precision=spec.precision,
        degree_cap=spec.degree_cap,
        variables=spec.variables,
        level=n,
        p_weight=spec._min_degree(),
        relations=(rule,),
    )
    return TowerLevel(spec, n, algebra)


def frobenius_root(
    level: TowerLevel, e: PolyElement, target: TowerLevel
) -> PolyElement:
    """r at the target level with r^p = e mod p, built monomial by monomial.

    Coefficients reduce mod p (c^p = c there), exponents divide by p.  The
    result is verified; it exists whenever the target level is at least one
    step up, and at the same level exactly for p-th-power monomials.
    """
    if e.ambient != level.algebra:
        raise WittkitError("element does not live at this level")
    if target.spec != level.spec or target.n < level.n:
        raise WittkitError("target must be a higher level of the same tower")
    p = level.spec.p
    shift = p ** (target.n - level.n)
    raw = {}
    for m, c in e.terms():
        c0 = c % p
        if c0 == 0:
            continue
        scaled = []
        for s in m.scaled:
            s *= shift
            if s % p:
                raise NoRootAtTruncation(
                    f"exponent {s}/p^{target.n} of a root is not representable "
                    f"at level {target.n}"
                )
            scaled.append(s // p)
        key = FracMonomial(tuple(scaled), target.n)
        raw[key] = raw.get(key, 0) + c0
    root = target.algebra.reduce(raw)
    diff = root**p - level.include(e, target)
    if any(c % p for _, c in diff.terms()):  # pragma: no cover
        raise NoRootAtTruncation("root verification failed")
    return root


@dataclass
class RootEntry:
    monomial: str
    root: str
    verified: bool
    same_level_root: bool


@dataclass
class FrobeniusReport:
    """Constructive record that level-n elements acquire p-th roots above.

    Also carries the non-injectivity witness: the canonical nilpotent
    (p^(1/p^n) or G evaluated at the level-n roots) with its exponent mod p.
    """

    spec: TowerSpec
    level: int
    up_to_degree: int
    entries: list = field(default_factory=list)
    rooted: int = 0
    total: int = 0
    nilpotent_name: str = ""
    nilpotent_element: str = ""
    nilpotent_exponent: int = 0
    nilpotent_bound: int = 0
    nilpotent_ok: bool = False
    nilpotent_certificate: MembershipCertificate = None

    @property
    def all_verified(self):
        return self.total > 0 and self.rooted == self.total


def frob_surjectivity_report(
    spec: TowerSpec, n: int, up_to_degree
) -> FrobeniusReport:
    level = build_level(spec, n)
    above = build_level(spec, n + 1)
    p = spec.p
    report = FrobeniusReport(spec=spec, level=n, up_to_degree=up_to_degree)
    for m in level.algebra.basis:
        if level.algebra.weight(m) > up_to_degree:
            continue
        e = level.algebra.mono_elem(m)
        root = frobenius_root(level, e, above)
        verified = not any(
            c % p for _, c in (root**p - level.include(e, above)).terms()
        )
        report.entries.append(
            RootEntry(
                monomial=e.text(),
                root=root.text(),
                verified=verified,
                same_level_root=all(s % p == 0 for s in m.scaled),
            )
        )
        report.total += 1
        report.rooted += verified
    if spec.kind == "ramified":
        witness = level.G_n()
        report.nilpotent_name = f"G_{n}"
    else:
        witness = level.pi()
        report.nilpotent_name = f"p^(1/p^{n})"
    report.nilpotent_element = witness.text()
    report.nilpotent_bound = p**n
    power = level.algebra.one
    p_elem = level.algebra.from_int(p)
    for e in range(1, p**n + 1):
        power = power * witness
        if all(c % p == 0 for _, c in power.terms()):
            report.nilpotent_exponent = e
            report.nilpotent_ok = True
            report.nilpotent_certificate = solve_linear_membership(power, [p_elem])
            break
    return report


@dataclass
class PBigWitness:
    """Sequences pi_0 = p, pi_{i+1}^p = pi_i * u_i with u_i units, realized
    in one level algebra and re-verifiable exactly."""

    spec: TowerSpec
    level: TowerLevel
    pis: tuple
    units: tuple

    def verify(self) -> bool:
        A = self.level.algebra
        if self.pis[0] != A.from_int(self.spec.p):
            return False
        if len(self.units) != len(self.pis) - 1:
            return False
        for i, u in enumerate(self.units):
            ok, _ = is_unit(u)
            if not ok:
                return False
            if self.pis[i + 1] ** self.spec.p != self.pis[i] * u:
                return False
        return True


def p_big_sequence(spec: TowerSpec, m: int) -> PBigWitness:
    """Compatible p-power roots of p up to units, realized at level max(m,1).

    Valuation and unramified towers carry them literally with u_i = 1; the
    ramified tower starts from the uniformizer and extends by Frobenius
    roots with exact unit corrections.
    """
    if m < 0:
        raise InvalidSpec("need m >= 0")
    p = spec.p
    if spec.kind in ("valuation", "unramified"):
        level = build_level(spec, m)
        A = level.algebra
        pis = [A.from_int(p)] + [
            A.mono({"p": Fraction(1, p**i)}) for i in range(1, m + 1)
        ]
        wit = PBigWitness(spec, level, tuple(pis), (A.one,) * m)
    else:
        top = build_level(spec, max(m, 1))
        if m == 0:
            return PBigWitness(spec, top, (top.algebra.from_int(p),), ())
        lvl1 = build_level(spec, 1)
        uni = ramified_uniformizer(lvl1, default_decomposition(spec, lvl1))
        pis_local = [uni.pi]  # pi_i at level i+1... indexed from pi_1 at level 1
        units_local = [uni.unit]  # u_0 at level 1
        ok, w = is_unit(uni.unit)
        if not ok:  # pragma: no cover
            raise UnitCheckFailed("uniformizer unit failed inversion")
        cur_level = lvl1
        cur_pi = uni.pi
        for i in range(1, m):
            nxt = build_level(spec, i + 1)
            try:
                rho = frobenius_root(cur_level, cur_pi, nxt)
                pi_inc = cur_level.include(cur_pi, nxt)
                delta = exact_div_p(rho**p - pi_inc, 1)
            except (NoRootAtTruncation, WittkitError) as exc:
                raise CannotExtend(f"cannot extend to level {i + 1}: {exc}")
            w_inc = cur_level.include(w, nxt)
            u_i = nxt.algebra.one + pi_inc ** (p**i - 1) * w_inc * delta
            if rho**p != pi_inc * u_i:  # pragma: no cover
                raise CannotExtend("unit-corrected root identity failed")
            ok, u_inv = is_unit(u_i)
            if not ok:
                raise CannotExtend("unit correction is not a unit at this precision")
            w = w_inc * u_inv ** (p**i)
            pis_local.append(rho)
            units_local.append(u_i)
            cur_level, cur_pi = nxt, rho
        top_pis = [top.algebra.from_int(p)]
        for i, e in enumerate(pis_local):
            top_pis.append(build_level(spec, i + 1).include(e, top))
        top_units = [
            build_level(spec, 1 if i == 0 else i + 1).include(u, top)
            for i, u in enumerate(units_local)
        ]
        wit = PBigWitness(spec, top, tuple(top_pis), tuple(top_units))
    if not wit.verify():  # pragma: no cover
        raise CannotExtend("p-big witness failed verification")
    return wit


@dataclass
class UniformizerResult:
    """pi with pi^p = p * unit, exactly, plus the intermediate data."""

    level: TowerLevel
    pi: PolyElement
    unit: PolyElement
    g: PolyElement
    h: PolyElement
    certificate: MembershipCertificate


def default_decomposition(spec: TowerSpec, level: TowerLevel):
    """p = sum b_i * b_i' read off term by term from p = G."""
    if spec.kind != "ramified":
        raise InvalidSpec("decompositions of p are a ramified-tower notion")
    source = build_level(spec, level.n - 1)
    A = source.algebra
    pairs = []
    for expo, c in spec.G:
        i = next(k for k, e in enumerate(expo) if e)
        rest = tuple(e - (1 if k == i else 0) for k, e in enumerate(expo))
        b = A.var(f"t{i + 1}")
        bp = c * A.reduce({FracMonomial(rest, 0): 1})
        pairs.append((b, bp))
    return pairs


def ramified_uniformizer(level: TowerLevel, decomposition) -> UniformizerResult:
    """Extract pi, u with pi^p = p*u from a decomposition p = sum b_i b_i'.

    Follows the constructive argument: replace each factor by its p-th root
    plus an exact p-multiple correction, collect the corrections into h, and
    divide the multinomial defect into g; then u = 1 - g - h and the
    identity pi^p = p*u holds on the nose at the truncation.
    """
    if level.spec.kind != "ramified":
        raise InvalidSpec("uniformizer extraction needs a ramified tower")
    if level.n < 1:
        raise InvalidSpec("need level >= 1 so that Frobenius preimages exist")
    if not decomposition:
        raise InvalidSpec("empty decomposition")
    p = level.spec.p
    A = level.algebra
    source_amb = decomposition[0][0].ambient
    for b, bp in decomposition:
        for e in (b, bp):
            if e.ambient != source_amb:
                raise InvalidSpec("decomposition entries live in different algebras")
            if e.constant_coefficient() != 0:
                raise InvalidSpec(
                    "decomposition entries must lie in the maximal ideal"
                )
    if source_amb == A:
        source = level
    else:
        below = build_level(level.spec, level.n - 1)
        if source_amb != below.algebra:
            raise InvalidSpec(
                "decomposition must live at this level or one below"
            )
        source = below
    total = source.algebra.zero
    for b, bp in decomposition:
        total = total + b * bp
    if total != source.algebra.from_int(p):
        raise InvalidSpec("decomposition does not sum to p")
    cs, ds = [], []
    for b, bp in decomposition:
        pair_c, pair_d = [], []
        for e in (b, bp):
            c = frobenius_root(source, e, level)
            d = exact_div_p(source.include(e, level) - c**p, 1)
            pair_c.append(c)
            pair_d.append(d)
        cs.append(pair_c)
        ds.append(pair_d)
    f = A.zero
    h = A.zero
    power_sum = A.zero
    for (c, cp), (d, dp) in zip(cs, ds):
        f = f + c * cp
        h = h + c**p * dp + d * cp**p + p * d * dp
        power_sum = power_sum + c**p * cp**p
    g = exact_div_p(power_sum - f**p, 1)
    pi = f
    u = A.one - g - h
    if pi**p != A.from_int(p) * u:  # pragma: no cover
        raise UnitCheckFailed("pi^p = p*u failed at this precision")
    ok, _ = is_unit(u)
    if not ok:
        raise UnitCheckFailed("1 - g - h is not a unit at this precision")
    cert = MembershipCertificate(
        target=pi**p,
        generators=(A.from_int(p),),
        coefficients=(u,),
        truncation=A.truncation,
    )
    if not cert.verify():  # pragma: no cover
        raise UnitCheckFailed("uniformizer certificate failed re-verification")
    return UniformizerResult(level, pi, u, g, h, cert)


@dataclass
class WittPerfectWitness:
    """r, s with r^p = -p mod p*s and s^exponent in (p), both certified."""

    level: TowerLevel
    r: PolyElement
    s: PolyElement
    exponent: int
    congruence_cert: MembershipCertificate
    power_cert: MembershipCertificate

    def verify(self) -> bool:
        A = self.level.algebra
        p = self.level.spec.p
        if self.congruence_cert.target != self.r**p + A.from_int(p):
            return False
        if self.power_cert.target != self.s**self.exponent:
            return False
        return self.congruence_cert.verify() and self.power_cert.verify()


def witt_perfect_criterion(spec: TowerSpec, n: int = 1) -> WittPerfectWitness:
    """Witness for the root-lifting criterion at a tower level.

    Valuation/unramified: r = -p^(1/p) for odd p (then r^p = -p exactly) and
    r = p^(1/2), s = 2 for p = 2.  Ramified: r = pi/v where v is a p-th root
    of -u mod p; then r^p = -p mod p^2.  All congruences come back as
    membership certificates.
    """
    if spec.precision < 2:
        raise NoWitness("need precision >= 2 for the congruence to have content")
    p = spec.p
    if spec.kind in ("valuation", "unramified"):
        level = build_level(spec, max(n, 1))
        A = level.algebra
        pi1 = A.mono({"p": Fraction(1, p)})
        r = pi1 if p == 2 else -pi1
        s = A.from_int(p)
        if r**p + A.from_int(p) != (
            A.from_int(4) if p == 2 else A.zero
        ):  # pragma: no cover
            raise NoWitness("root-of-p identity failed")
    else:
        level_n = build_level(spec, max(n, 1))
        uni = ramified_uniformizer(
            level_n, default_decomposition(spec, level_n)
        )
        above = build_level(spec, level_n.n + 1)
        A = above.algebra
        u_inc = level_n.include(uni.unit, above)
        v = frobenius_root(level_n, -uni.unit, above)
        exact_div_p(-u_inc - v**p, 1)  # integrality check for the correction
        ok, v_inv = is_unit(v)
        if not ok:
            raise NoWitness("the root of -u is not a unit at this precision")
        r = level_n.include(uni.pi, above) * v_inv
        s = A.from_int(p)
        level = above
    congruence = solve_linear_membership(
        r**p + level.algebra.from_int(p), [level.algebra.from_int(p) * s]
    )
    power = solve_linear_membership(s, [level.algebra.from_int(p)])
    if not (congruence.is_member and power.is_member):
        raise NoWitness("certificates not found at this precision")
    wit = WittPerfectWitness(level, r, s, 1, congruence, power)
    if not wit.verify():  # pragma: no cover
        raise NoWitness("witness failed re-verification")
    return wit
