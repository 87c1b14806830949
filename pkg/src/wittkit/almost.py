"""Smallness diagnostics: p-ideals, almost-zero defects, colon modules.

"Almost zero" is always reported relative to the finitely many compatible
roots of p that are actually available (a :class:`~wittkit.towers.PBigWitness`),
never as an absolute verdict: the report records, level by level, whether
pi_e kills the module, together with the first failure witness.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import WittkitError
from .exactalg import (
    MembershipCertificate,
    PolyElement,
    TruncatedAlgebra,
    colon_submodule,
    solve_linear_membership,
)
from .linalg import vp
from .towers import PBigWitness, TowerLevel, build_level

__all__ = [
    "PIdealWitness",
    "NotPIdeal",
    "is_p_ideal",
    "DefectReport",
    "almost_zero_defect",
    "colon_defect",
    "ZERO",
    "ALMOST_ZERO_AT_SCALE",
    "NOT_ALMOST_ZERO",
]

ZERO = "zero"
ALMOST_ZERO_AT_SCALE = "almost_zero_at_scale"
NOT_ALMOST_ZERO = "not_almost_zero"


@dataclass
class PIdealWitness:
    """I^m lies in (p), certified product by product."""

    generators: tuple
    exponent: int
    certificates: tuple

    def verify(self) -> bool:
        return all(c.verify() for c in self.certificates)


@dataclass
class NotPIdeal:
    generators: tuple
    checked_up_to: int


def is_p_ideal(A: TruncatedAlgebra, gens, m_max: int):
    """Smallest m <= m_max with every m-fold generator product in (p)."""
    gens = tuple(gens)
    p_elem = A.from_int(A.p)
    for m in range(1, m_max + 1):
        certs = []
        for combo in itertools.combinations_with_replacement(gens, m):
            prod = A.one
            for g in combo:
                prod = prod * g
            cert = solve_linear_membership(prod, [p_elem])
            if not cert.is_member:
                certs = None
                break
            certs.append(cert)
        if certs is not None:
            return PIdealWitness(gens, m, tuple(certs))
    return NotPIdeal(gens, m_max)


@dataclass
class DefectReport:
    """Outcome of testing a module against the available roots of p.

    ``killers[e]`` records whether pi_e annihilates the module; killers are
    monotone (a deeper root killing implies all shallower ones do).
    """

    verdict: str
    colon_basis: list = field(default_factory=list)
    killers: dict = field(default_factory=dict)
    witness_level: int = None
    witness: PolyElement = None
    window_ok: bool = True
    truncation: tuple = None
    transfer_certificates: tuple = None

    @property
    def transfer_ok(self):
        if self.transfer_certificates is None:
            return None
        return all(c.is_member for c in self.transfer_certificates)


def _max_weight(e: PolyElement):
    A = e.ambient
    if e.is_zero:
        return 0
    return max(
        A.weight(m) + vp(c, A.p, A.precision) * A.p_weight for m, c in e.terms()
    )


def almost_zero_defect(numerators, rels, pbig: PBigWitness) -> DefectReport:
    """Test pi_e * M = 0 for M = (numerators + (rels))/(rels), per level e.

    Verdicts: ZERO when the module itself vanishes, ALMOST_ZERO_AT_SCALE when
    every available pi_e with e >= 1 kills it, NOT_ALMOST_ZERO with the first
    failing root otherwise.
    """
    A = pbig.level.algebra
    numerators = [u for u in numerators if not u.is_zero]
    for u in numerators:
        if u.ambient != A:
            raise WittkitError("module generators must live in the witness algebra")
    rels = tuple(rels)
    if all(solve_linear_membership(u, rels).is_member for u in numerators):
        return DefectReport(verdict=ZERO, truncation=A.truncation)
    killers = {}
    witness_level = None
    window_ok = True
    for e in range(1, len(pbig.pis)):
        pi_e = pbig.pis[e]
        for u in numerators:
            if _max_weight(u) + _max_weight(pi_e) > A.degree_cap:
                window_ok = False
        killed = all(
            solve_linear_membership(pi_e * u, rels).is_member for u in numerators
        )
        killers[e] = killed
        if not killed and witness_level is None:
            witness_level = e
    for e, killed in killers.items():
        if killed:
            for e2 in range(1, e):
                if not killers[e2]:  # pragma: no cover
                    raise WittkitError("killer monotonicity violated")
    if witness_level is None:
        verdict = ALMOST_ZERO_AT_SCALE
        witness = None
    else:
        verdict = NOT_ALMOST_ZERO
        witness = pbig.pis[witness_level]
    return DefectReport(
        verdict=verdict,
        killers=killers,
        witness_level=witness_level,
        witness=witness,
        window_ok=window_ok,
        truncation=A.truncation,
    )


def colon_defect(
    where,
    sop=None,
    i: int = 0,
    pbig: PBigWitness = None,
    transfer=None,
) -> DefectReport:
    """Defect of ((x_1..x_i) : x_{i+1})/(x_1..x_i) on a tower level.

    ``where`` is a TowerLevel (or bare TruncatedAlgebra for ad-hoc rings, in
    which case no roots are available and the verdict is the plain colon
    verdict).  ``transfer``, when given, is a tuple of multipliers t whose
    product must push the whole colon module into (x_1..x_i); the resulting
    certificates are attached.
    """
    if isinstance(where, TowerLevel):
        A = where.algebra
        if sop is None:
            sop = where.sop()
    else:
        A = where
        if sop is None:
            raise WittkitError("a bare algebra needs an explicit sop")
    if not 0 <= i < len(sop):
        raise WittkitError("need 0 <= i < len(sop)")
    gens = list(sop[:i])
    divisor = sop[i]
    basis = colon_submodule(A, gens, divisor)
    transfer_certs = None
    if transfer is not None:
        t_prod = A.one
        for t in transfer:
            t_prod = t_prod * t
        transfer_certs = tuple(
            solve_linear_membership(t_prod * c, gens) for c in basis
        )
    if not basis:
        return DefectReport(
            verdict=ZERO,
            truncation=A.truncation,
            transfer_certificates=transfer_certs,
        )
    if pbig is None:
        return DefectReport(
            verdict=NOT_ALMOST_ZERO,
            colon_basis=basis,
            truncation=A.truncation,
            transfer_certificates=transfer_certs,
        )
    if isinstance(where, TowerLevel) and pbig.level.n < where.n:
        pis = tuple(
            build_level(pbig.spec, pbig.level.n).include(px, where)
            for px in pbig.pis
        )
        pbig = PBigWitness(pbig.spec, where, pis, tuple(
            build_level(pbig.spec, pbig.level.n).include(u, where)
            for u in pbig.units
        ))
    report = almost_zero_defect(basis, gens, pbig)
    report.colon_basis = basis
    report.transfer_certificates = transfer_certs
    return report
