"""Permutation groups: actions of GF(2) matrices, orbits, Schreier-Sims.

Permutations are tuples of images.  Products compose like functions and
like matrices: ``mul(p, q)`` applies q first, then p.  With that convention
the action of matrices on vectors is a homomorphism.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

from .gf2 import F2Matrix

__all__ = [
    "Perm",
    "BSGS",
    "identity",
    "mul",
    "inverse",
    "is_identity",
    "action_on_vectors",
    "orbit",
    "orbits",
    "schreier_sims",
    "bsgs_order",
    "brute_force_closure",
    "evaluate_word",
    "verify_relations",
]

Perm = tuple[int, ...]


def identity(n: int) -> Perm:
    return tuple(range(n))


def mul(p: Perm, q: Perm) -> Perm:
    """p after q."""
    return tuple([p[i] for i in q])


def inverse(p: Perm) -> Perm:
    inv = [0] * len(p)
    for i, j in enumerate(p):
        inv[j] = i
    return tuple(inv)


def is_identity(p: Perm) -> bool:
    return all(i == j for i, j in enumerate(p))


def check_perm(p: Sequence[int]) -> None:
    if sorted(p) != list(range(len(p))):
        raise ValueError("not a permutation")


def action_on_vectors(mats: Sequence[F2Matrix]) -> list[Perm]:
    """Permutations of the nonzero vectors of GF(2)^d; vector v is point v - 1."""
    if not mats:
        return []
    d = mats[0].ncols
    out = []
    for m in mats:
        if m.shape != (d, d):
            raise ValueError("matrices must be square and of one size")
        if not m.is_invertible():
            raise ValueError("singular matrix does not act on nonzero vectors")
        out.append(tuple(m.apply(v) - 1 for v in range(1, 1 << d)))
    return out


def orbit(gens: Sequence[Perm], point: int) -> list[int]:
    """Breadth-first orbit, points in discovery order."""
    seen = {point}
    out = [point]
    queue = deque([point])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = g[x]
            if y not in seen:
                seen.add(y)
                out.append(y)
                queue.append(y)
    return out


def orbits(gens: Sequence[Perm], n: int) -> list[list[int]]:
    done: set[int] = set()
    out = []
    for x in range(n):
        if x not in done:
            o = orbit(gens, x)
            done.update(o)
            out.append(o)
    return out


@dataclass
class BSGS:
    """Stabilizer chain.  ``transversals[i][x]`` maps base[i] to x."""

    degree: int
    base: list[int] = field(default_factory=list)
    strong_gens: list[list[Perm]] = field(default_factory=list)
    transversals: list[dict[int, Perm]] = field(default_factory=list)

    def order(self) -> int:
        total = 1
        for t in self.transversals:
            total *= len(t)
        return total

    def sift(self, g: Perm, start: int = 0) -> tuple[Perm, int]:
        """Strip g through levels start..; returns (residue, level reached)."""
        for i in range(start, len(self.base)):
            x = g[self.base[i]]
            u = self.transversals[i].get(x)
            if u is None:
                return g, i
            g = mul(inverse(u), g)
        return g, len(self.base)

    def contains(self, g: Perm) -> bool:
        if len(g) != self.degree:
            return False
        h, _ = self.sift(g)
        return is_identity(h)

    def certificate(self) -> dict:
        return {
            "degree": self.degree,
            "base": list(self.base),
            "transversal_sizes": [len(t) for t in self.transversals],
            "order": self.order(),
        }


def _orbit_transversal(gens: Sequence[Perm], point: int, n: int) -> dict[int, Perm]:
    trans = {point: identity(n)}
    queue = deque([point])
    while queue:
        x = queue.popleft()
        ux = trans[x]
        for g in gens:
            y = g[x]
            if y not in trans:
                trans[y] = mul(g, ux)
                queue.append(y)
    return trans


def schreier_sims(gens: Sequence[Perm], degree: int | None = None) -> BSGS:
    """Deterministic Schreier-Sims; base points are chosen smallest-moved first."""
    gens = [tuple(g) for g in gens]
    if degree is None:
        degree = len(gens[0]) if gens else 0
    for g in gens:
        if len(g) != degree:
            raise ValueError("generators of different degrees")
    gens = [g for g in gens if not is_identity(g)]
    chain = BSGS(degree)
    if not gens:
        return chain

    def new_level(g: Perm) -> None:
        point = next(x for x in range(degree) if g[x] != x)
        chain.base.append(point)
        chain.strong_gens.append([])
        chain.transversals.append({point: identity(degree)})

    def moved_beyond_base(g: Perm) -> bool:
        return any(g[b] != b for b in chain.base)

    new_level(gens[0])
    chain.strong_gens[0] = list(gens)
    chain.transversals[0] = _orbit_transversal(gens, chain.base[0], degree)
    for g in gens:
        # every generator must move some base point
        if not moved_beyond_base(g):
            new_level(g)
    for i in range(1, len(chain.base)):
        chain.strong_gens[i] = [g for g in gens if all(g[b] == b for b in chain.base[:i])]
        chain.transversals[i] = _orbit_transversal(chain.strong_gens[i], chain.base[i], degree)

    # tested[i]: Schreier generator keys (point, gen) already known to sift
    tested: list[set] = [set() for _ in chain.base]
    i = len(chain.base) - 1
    while i >= 0:
        restart = False
        trans = chain.transversals[i]
        for x in list(trans):
            ux = trans[x]
            for k, s in enumerate(chain.strong_gens[i]):
                if (x, k) in tested[i]:
                    continue
                y = s[x]
                schreier = mul(inverse(trans[y]), mul(s, ux))
                h, j = chain.sift(schreier, i + 1)
                if is_identity(h):
                    tested[i].add((x, k))
                    continue
                if j == len(chain.base):
                    new_level(h)
                    tested.append(set())
                for level in range(i + 1, j + 1):
                    chain.strong_gens[level].append(h)
                    chain.transversals[level] = _orbit_transversal(
                        chain.strong_gens[level], chain.base[level], degree
                    )
                i = j
                restart = True
                break
            if restart:
                break
        if not restart:
            i -= 1
    return chain


def bsgs_order(gens: Sequence[Perm]) -> int:
    order = schreier_sims(gens).order()
    if order >= 1 << 63:
        raise OverflowError("group order does not fit in 63 bits")
    return order


def brute_force_closure(gens: Sequence[Perm], limit: int = 100_000) -> set[Perm]:
    """Every element of <gens> by breadth-first multiplication (small groups only)."""
    if not gens:
        return set()
    e = identity(len(gens[0]))
    seen = {e}
    queue = deque([e])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = mul(g, x)
            if y not in seen:
                seen.add(y)
                if len(seen) > limit:
                    raise ValueError("group larger than the brute-force limit")
                queue.append(y)
    return seen


def evaluate_word(gens: Sequence[Perm], word: Sequence[int]) -> Perm:
    """Product of the letters left to right (letter ~g is the inverse of g)."""
    n = len(gens[0])
    acc = identity(n)
    for x in word:
        g = gens[x] if x >= 0 else inverse(gens[~x])
        # letters act left to right
        acc = mul(g, acc)
    return acc


def verify_relations(gens: Sequence[Perm], pres) -> bool:
    """True iff every relator of the presentation evaluates to the identity."""
    if len(gens) != pres.ngens:
        raise ValueError(f"{len(gens)} permutations for {pres.ngens} generators")
    return all(is_identity(evaluate_word(gens, w)) for w in pres.relators)


def certificate_json(chain: BSGS, partition: dict | None = None) -> str:
    data = chain.certificate()
    if partition is not None:
        data["orbit_partition"] = partition
    return json.dumps(data)
