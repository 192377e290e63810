"""Quadratic forms over GF(2): polar forms, radicals, type, transvections.

A form on GF(2)^d is stored as an upper-triangular bit matrix U with
Q(x) = x^T U x; its polar form B = U + U^T is alternating.  The forms of
interest come from an even integral lattice: Q(v) = norm(v)/2 and
B(v, w) = (v, w), both reduced mod 2.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import gf2
from .gf2 import F2Matrix, parity

__all__ = [
    "F2QuadSpace",
    "QuotientSpace",
    "FormError",
    "DegenerateFormError",
    "RelationError",
    "ambient_from_gram",
    "quotient_by_relations",
    "classify",
    "arf_invariant",
    "transvection",
    "project_root",
]

EXHAUSTIVE_MAX_DIM = 20


class FormError(ValueError):
    pass


class DegenerateFormError(FormError):
    pass


class RelationError(FormError):
    pass


@dataclass(frozen=True)
class F2QuadSpace:
    dim: int
    upper: tuple[int, ...]
    polar: tuple[int, ...] = field(init=False, repr=False)

    def __post_init__(self):
        if len(self.upper) != self.dim:
            raise FormError("one form row per coordinate")
        for i, row in enumerate(self.upper):
            if row & ((1 << i) - 1) or row >> self.dim:
                raise FormError("form matrix must be upper triangular")
        polar = []
        for i in range(self.dim):
            row = self.upper[i] & ~(1 << i)
            for j in range(i):
                if self.upper[j] >> i & 1:
                    row |= 1 << j
            polar.append(row)
        object.__setattr__(self, "polar", tuple(polar))

    def Q(self, x: int) -> int:
        q = 0
        for i in range(self.dim):
            if x >> i & 1:
                q ^= parity(self.upper[i] & x)
        return q

    def B(self, x: int, y: int) -> int:
        b = 0
        for i in range(self.dim):
            if x >> i & 1:
                b ^= parity(self.polar[i] & y)
        return b

    def polar_image(self, r: int) -> int:
        """The vector w with w_j = B(e_j, r)."""
        w = 0
        for j in range(self.dim):
            if parity(self.polar[j] & r):
                w |= 1 << j
        return w

    def polar_matrix(self) -> F2Matrix:
        return F2Matrix(self.polar, self.dim)

    def radical(self) -> list[int]:
        return gf2.nullspace(self.polar, self.dim)

    def is_nondegenerate(self) -> bool:
        return not self.radical()

    def all_Q(self) -> np.ndarray:
        """Q on every vector 0 .. 2^dim - 1, vectorized."""
        xs = np.arange(1 << self.dim, dtype=np.uint64)
        q = np.zeros(xs.shape, dtype=np.uint64)
        for i in range(self.dim):
            bit = (xs >> np.uint64(i)) & np.uint64(1)
            q ^= bit & (np.bitwise_count(xs & np.uint64(self.upper[i])).astype(np.uint64) & np.uint64(1))
        return q.astype(np.uint8)

    def to_json(self) -> str:
        return json.dumps({"dim": self.dim, "upper": F2Matrix(self.upper, self.dim).to_array()})


def ambient_from_gram(gram) -> F2QuadSpace:
    """Mod-2 form of an even lattice given by its Gram matrix."""
    m = np.asarray(getattr(gram, "matrix", gram), dtype=np.int64)
    if np.any(np.diag(m) % 2):
        raise FormError("Gram matrix has an odd diagonal entry; Q = norm/2 is undefined")
    d = m.shape[0]
    upper = []
    for i in range(d):
        row = (int(m[i, i]) // 2 % 2) << i
        for j in range(i + 1, d):
            if m[i, j] % 2:
                row |= 1 << j
        upper.append(row)
    return F2QuadSpace(d, tuple(upper))


def _coeff_vec(v) -> int:
    coeffs = getattr(v, "coeffs", v)
    return gf2.vec_from_bits([int(c) % 2 for c in coeffs])


@dataclass(frozen=True)
class QuotientSpace:
    ambient: F2QuadSpace
    relation_basis: tuple[int, ...]
    pivots: tuple[int, ...]
    keep: tuple[int, ...]
    quotient: F2QuadSpace

    @property
    def relation_rank(self) -> int:
        return len(self.relation_basis)

    def project(self, v: int) -> int:
        v = gf2.reduce(v, self.relation_basis, self.pivots)
        out = 0
        for k, c in enumerate(self.keep):
            if v >> c & 1:
                out |= 1 << k
        return out

    def lift(self, y: int) -> int:
        out = 0
        for k, c in enumerate(self.keep):
            if y >> k & 1:
                out |= 1 << c
        return out


def quotient_by_relations(ambient: F2QuadSpace, relations: Iterable) -> QuotientSpace:
    """Factor out the span of (a - b) mod 2 over the related root pairs.

    Each difference must lie in the radical of the polar form and be
    singular; otherwise Q would not descend to the quotient.
    """
    diffs = []
    for a, b in relations:
        r = _coeff_vec(a) ^ _coeff_vec(b)
        if r >> ambient.dim:
            raise RelationError("relation vector has the wrong dimension")
        if ambient.polar_image(r):
            raise RelationError(f"relation vector {gf2.vec_to_bits(r, ambient.dim)} is not in the radical")
        if ambient.Q(r):
            raise RelationError(f"relation vector {gf2.vec_to_bits(r, ambient.dim)} is nonsingular")
        diffs.append(r)
    basis, pivots = gf2.rref(diffs)
    keep = tuple(c for c in range(ambient.dim) if c not in set(pivots))
    lifts = [1 << c for c in keep]
    upper = []
    for i, li in enumerate(lifts):
        row = ambient.Q(li) << i
        for j in range(i + 1, len(lifts)):
            if ambient.B(li, lifts[j]):
                row |= 1 << j
        upper.append(row)
    quotient = F2QuadSpace(len(keep), tuple(upper))
    qs = QuotientSpace(ambient, tuple(basis), tuple(pivots), keep, quotient)
    # Q and B descend: spot-check on the spanning set of lifts and pair sums
    for i, li in enumerate(lifts):
        if quotient.Q(1 << i) != ambient.Q(li):
            raise RelationError("quotient form does not agree with the ambient form")
        for j, lj in enumerate(lifts):
            if quotient.B(1 << i, 1 << j) != ambient.B(li, lj):
                raise RelationError("quotient polar form does not agree with the ambient form")
    return qs


def arf_invariant(space: F2QuadSpace) -> int:
    """Arf invariant from a symplectic basis built by hyperbolic splitting."""
    if space.dim % 2 or not space.is_nondegenerate():
        raise DegenerateFormError("Arf invariant needs a nondegenerate even-dimensional form")
    pool = [1 << i for i in range(space.dim)]
    arf = 0
    while pool:
        e = pool.pop(0)
        k = next((k for k, v in enumerate(pool) if space.B(e, v)), None)
        if k is None:
            raise DegenerateFormError("polar form is degenerate")
        f = pool.pop(k)
        arf ^= space.Q(e) & space.Q(f)
        pool = [v ^ (space.B(v, f) * e) ^ (space.B(v, e) * f) for v in pool]
        pool = [v for v in pool if v]
        pool = gf2.span_basis(pool)
    return arf


@dataclass(frozen=True)
class FormType:
    witt_defect: int
    nonsingular: int
    singular_nonzero: int
    method: str


def _type_counts(m: int, defect: int) -> tuple[int, int]:
    total = (1 << (2 * m)) - 1
    ns = (1 << (2 * m - 1)) + (1 << (m - 1)) if defect else (1 << (2 * m - 1)) - (1 << (m - 1))
    return ns, total - ns


def classify(space: F2QuadSpace) -> FormType:
    """Witt defect (0 plus type, 1 minus type) and vector counts.

    Counts come from exhaustive enumeration up to dimension 20 and from the
    Arf invariant above that.
    """
    d = space.dim
    if d % 2:
        raise FormError("only even-dimensional forms are classified")
    if d > 24:
        raise FormError("dimension above 24 is out of range")
    if not space.is_nondegenerate():
        raise DegenerateFormError(f"polar form has a radical of dimension {len(space.radical())}")
    m = d // 2
    if d <= EXHAUSTIVE_MAX_DIM:
        q = space.all_Q()
        ns = int(q.sum())
        sing = (1 << d) - 1 - ns
        for defect in (0, 1):
            if (ns, sing) == _type_counts(m, defect):
                return FormType(defect, ns, sing, "enumeration")
        raise FormError(f"nonsingular count {ns} matches neither orthogonal type")
    defect = arf_invariant(space)
    ns, sing = _type_counts(m, defect)
    return FormType(defect, ns, sing, "arf")


def transvection(space: F2QuadSpace, r: int) -> F2Matrix:
    """Matrix of x -> x + B(x, r) r for a nonsingular vector r."""
    if space.Q(r) != 1:
        raise FormError("transvection centre must be nonsingular")
    w = space.polar_image(r)
    return F2Matrix(tuple((1 << i) ^ (w if r >> i & 1 else 0) for i in range(space.dim)), space.dim)


def project_root(qs: QuotientSpace, v) -> int:
    """Root coefficients mod 2, pushed into the quotient."""
    return qs.project(_coeff_vec(v))
