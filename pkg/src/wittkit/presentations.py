"""Finite subquotient modules over a truncated algebra.

A module is presented inside a finite free ambient A^slots: a tuple of slot
labels, generator vectors whose A-multiples span the numerator, and relation
vectors spanning the denominator.  All questions reduce to Z/p^N linear
algebra on the slot-by-basis coordinate grid, with the algebra's truncation
tails always included on the span side so coordinate arithmetic matches ring
arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import WittkitError
from .exactalg import PolyElement, TruncatedAlgebra, truncation_window_rows
from .linalg import SpanZpN, left_kernel, solve_combination

__all__ = ["ModuleVector", "SubquotientModule", "ModuleMembershipCertificate", "module_colon"]


class ModuleVector:
    """Sparse element of A^slots: slot label -> PolyElement."""

    __slots__ = ("ambient", "slots", "parts")

    def __init__(self, ambient: TruncatedAlgebra, slots: tuple, parts: dict):
        self.ambient = ambient
        self.slots = slots
        clean = {}
        for s, e in parts.items():
            if s not in slots:
                raise WittkitError(f"unknown slot {s!r}")
            if e.ambient != ambient:
                raise WittkitError("component lives in a different algebra")
            if not e.is_zero:
                clean[s] = e
        self.parts = clean

    def get(self, slot) -> PolyElement:
        return self.parts.get(slot, self.ambient.zero)

    @property
    def is_zero(self):
        return not self.parts

    def __add__(self, other):
        self._check(other)
        parts = dict(self.parts)
        for s, e in other.parts.items():
            parts[s] = parts[s] + e if s in parts else e
        return ModuleVector(self.ambient, self.slots, parts)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return ModuleVector(
            self.ambient, self.slots, {s: -e for s, e in self.parts.items()}
        )

    def scale(self, r) -> "ModuleVector":
        """Multiply every component by a ring element or integer."""
        return ModuleVector(
            self.ambient, self.slots, {s: r * e for s, e in self.parts.items()}
        )

    def __eq__(self, other):
        return (
            isinstance(other, ModuleVector)
            and self.ambient == other.ambient
            and self.slots == other.slots
            and self.parts == other.parts
        )

    def __hash__(self):
        return hash(
            (self.ambient, self.slots, tuple(sorted(self.parts.items(), key=str)))
        )

    def _check(self, other):
        if (
            not isinstance(other, ModuleVector)
            or other.ambient != self.ambient
            or other.slots != self.slots
        ):
            raise WittkitError("module vectors are not compatible")

    def __repr__(self):
        if not self.parts:
            return "0"
        return " (+) ".join(
            f"[{e.text()}]@{s!r}" for s, e in sorted(self.parts.items(), key=str)
        )


@dataclass(frozen=True)
class ModuleMembershipCertificate:
    """target = sum over (ring factor i, generator j) of r_i * q_ij * g_j."""

    target: ModuleVector
    ring_factors: tuple
    generators: tuple
    coefficients: dict  # (i, j) -> PolyElement
    truncation: tuple

    def combination(self) -> ModuleVector:
        acc = None
        for (i, j), q in self.coefficients.items():
            term = self.generators[j].scale(self.ring_factors[i] * q)
            acc = term if acc is None else acc + term
        if acc is None:
            A = self.target.ambient
            acc = ModuleVector(A, self.target.slots, {})
        return acc


class SubquotientModule:
    """(span of gens + span of rels)/(span of rels) inside A^slots.

    ``one`` is an optional distinguished element (the tracked image of the
    ring unit) used by constructions that need ring coefficients inside the
    module.
    """

    def __init__(self, ambient, slots, gens, rels, one=None):
        self.ambient = ambient
        self.slots = tuple(slots)
        if len(set(self.slots)) != len(self.slots):
            raise WittkitError("duplicate slot labels")
        self.slot_index = {s: i for i, s in enumerate(self.slots)}
        self.gens = tuple(gens)
        self.rels = tuple(rels)
        for v in self.gens + self.rels:
            if v.ambient != ambient or v.slots != self.slots:
                raise WittkitError("generator/relation vector mismatch")
        self.one = one
        self._rel_span = None
        self._gens_rows = None

    # -- coordinates --------------------------------------------------------

    @property
    def coord_dim(self):
        return len(self.slots) * self.ambient.dim

    def vector(self, parts: dict) -> ModuleVector:
        return ModuleVector(self.ambient, self.slots, parts)

    def element_vector(self, e: PolyElement, slot=None) -> ModuleVector:
        if slot is None:
            slot = self.slots[0]
        return self.vector({slot: e})

    def coords(self, v: ModuleVector) -> np.ndarray:
        out = np.zeros(self.coord_dim, dtype=np.int64)
        d = self.ambient.dim
        for s, e in v.parts.items():
            i = self.slot_index[s]
            out[i * d : (i + 1) * d] = self.ambient.coords(e)
        return out

    def from_coords(self, vec) -> ModuleVector:
        d = self.ambient.dim
        parts = {}
        for i, s in enumerate(self.slots):
            e = self.ambient.from_coords(vec[i * d : (i + 1) * d])
            if not e.is_zero:
                parts[s] = e
        return ModuleVector(self.ambient, self.slots, parts)

    def _slot_junk_rows(self):
        junk = self.ambient.truncation_rows()
        if junk.shape[0] == 0:
            return np.zeros((0, self.coord_dim), dtype=np.int64)
        d = self.ambient.dim
        rows = []
        for i in range(len(self.slots)):
            for r in junk:
                row = np.zeros(self.coord_dim, dtype=np.int64)
                row[i * d : (i + 1) * d] = r
                rows.append(row)
        return np.array(rows, dtype=np.int64)

    def _multiples_rows(self, vectors):
        rows = []
        for v in vectors:
            for m in self.ambient.basis:
                rows.append(self.coords(v.scale(self.ambient.mono_elem(m))))
        return (
            np.array(rows, dtype=np.int64)
            if rows
            else np.zeros((0, self.coord_dim), dtype=np.int64)
        )

    def rel_span(self) -> SpanZpN:
        if self._rel_span is None:
            rows = np.vstack([self._multiples_rows(self.rels), self._slot_junk_rows()])
            self._rel_span = SpanZpN(
                rows, self.ambient.p, self.ambient.precision, self.coord_dim
            )
        return self._rel_span

    # -- module queries -------------------------------------------------------

    def is_zero_class(self, v: ModuleVector) -> bool:
        return self.rel_span().contains(self.coords(v))

    def class_eq(self, a: ModuleVector, b: ModuleVector) -> bool:
        return self.is_zero_class(a - b)

    def gens_rows(self):
        if self._gens_rows is None:
            self._gens_rows = self._multiples_rows(self.gens)
        return self._gens_rows

    def express(self, v: ModuleVector):
        """Coefficients (a_1..a_r) with v = sum a_j g_j modulo relations."""
        A = self.ambient
        rows = np.vstack(
            [self.gens_rows(), self.rel_span().rows]
        )
        coeffs = solve_combination(rows, self.coords(v), A.p, A.precision)
        if coeffs is None:
            return None
        d = A.dim
        out = []
        for j in range(len(self.gens)):
            out.append(
                A.reduce(
                    {
                        m: int(coeffs[j * d + k])
                        for k, m in enumerate(A.basis)
                    }
                )
            )
        return tuple(out)

    def contains(self, v: ModuleVector) -> bool:
        return self.express(v) is not None

    def ideal_multiple_membership(self, v: ModuleVector, ring_elems):
        """Certificate that v lies in (ring_elems) * (this module), or None."""
        A = self.ambient
        ring_elems = tuple(ring_elems)
        rows = []
        for r in ring_elems:
            for g in self.gens:
                rg = g.scale(r)
                for m in A.basis:
                    rows.append(self.coords(rg.scale(A.mono_elem(m))))
        rows = (
            np.array(rows, dtype=np.int64)
            if rows
            else np.zeros((0, self.coord_dim), dtype=np.int64)
        )
        stacked = np.vstack([rows, self.rel_span().rows])
        coeffs = solve_combination(stacked, self.coords(v), A.p, A.precision)
        if coeffs is None:
            return None
        d = A.dim
        qs = {}
        pos = 0
        for i in range(len(ring_elems)):
            for j in range(len(self.gens)):
                q = A.reduce(
                    {m: int(coeffs[pos * d + k]) for k, m in enumerate(A.basis)}
                )
                if not q.is_zero:
                    qs[(i, j)] = q
                pos += 1
        cert = ModuleMembershipCertificate(
            v, ring_elems, self.gens, qs, A.truncation
        )
        if not self.class_eq(cert.combination(), v):  # pragma: no cover
            raise WittkitError("module membership certificate failed")
        return cert

    def annihilated_by(self, r: PolyElement) -> bool:
        """r * M = 0, i.e. r times every generator falls into the relations."""
        return all(self.is_zero_class(g.scale(r)) for g in self.gens)

    def is_zero_module(self) -> bool:
        return all(self.is_zero_class(g) for g in self.gens)


def module_colon(M: SubquotientModule, ideal_elems, divisor: PolyElement):
    """Classes v with divisor*v in (ideal_elems)M + rels, windowed.

    The unknown runs over generator coefficients supported on monomials that
    keep the product under the degree cap, and reported classes are reduced
    at precision lowered by the divisor's p-valuation, mirroring the ring
    colon.  Empty result: the divisor is regular on M/(ideal_elems)M at the
    truncation.
    """
    A = M.ambient
    window = A.colon_window([], divisor)
    if not window:
        return []
    unknown_vectors = []
    for g in M.gens:
        for m in window:
            unknown_vectors.append(g.scale(A.mono_elem(m)))
    mult_rows = np.array(
        [M.coords(v.scale(divisor)) for v in unknown_vectors], dtype=np.int64
    )
    ideal_rows = []
    for r in ideal_elems:
        for g in M.gens:
            rg = g.scale(r)
            for m in A.basis:
                ideal_rows.append(M.coords(rg.scale(A.mono_elem(m))))
    ideal_rows = (
        np.array(ideal_rows, dtype=np.int64)
        if ideal_rows
        else np.zeros((0, M.coord_dim), dtype=np.int64)
    )
    span_rows = np.vstack([ideal_rows, M.rel_span().rows])
    K = left_kernel(np.vstack([mult_rows, span_rows]), A.p, A.precision)
    ring_tails = truncation_window_rows(A, divisor)
    prec_rows = []
    d = A.dim
    for i in range(len(M.slots)):
        for r in ring_tails:
            row = np.zeros(M.coord_dim, dtype=np.int64)
            row[i * d : (i + 1) * d] = r
            prec_rows.append(row)
    prec_rows = (
        np.array(prec_rows, dtype=np.int64)
        if prec_rows
        else np.zeros((0, M.coord_dim), dtype=np.int64)
    )
    quot_rows = [r for r in np.vstack([span_rows, prec_rows])]
    current = SpanZpN(
        np.array(quot_rows, dtype=np.int64), A.p, A.precision, M.coord_dim
    )
    out = []
    nu = len(unknown_vectors)
    for krow in K:
        acc = None
        for c, v in zip(krow[:nu], unknown_vectors):
            if c:
                term = v.scale(int(c))
                acc = term if acc is None else acc + term
        if acc is None or acc.is_zero:
            continue
        if current.contains(M.coords(acc)):
            continue
        out.append(acc)
        for m in A.basis:
            quot_rows.append(M.coords(acc.scale(A.mono_elem(m))))
        current = SpanZpN(
            np.array(quot_rows, dtype=np.int64), A.p, A.precision, M.coord_dim
        )
    return out
