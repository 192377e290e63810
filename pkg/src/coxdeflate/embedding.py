"""Coordinates for the Y_333 roots in a 13-dimensional Lorentzian space.

The space has coordinates arranged as three rows of four plus ``t``, with
form a^2 + ... + l^2 - t^2, and every vector has each row summing to t.
:func:`reconstruct_embedding` searches small-entry vectors for an isometric
copy of the Y_333 fundamental roots that reproduces two known extending
roots; :func:`shape_census` pulls the three root shapes back through that
embedding into the mod-2 quotient.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .diagrams import build_y_diagram
from .forms import QuotientSpace, project_root
from .rootlat import (
    ClosureState,
    RootVec,
    extend_chain,
    fundamental,
    gram_from_diagram,
    negate,
    sign_fix_chain,
)

__all__ = [
    "Embedding",
    "EmbeddingError",
    "A3_ARRAY",
    "Z3_ARRAY",
    "SIGNATURE",
    "lorentz_ip",
    "a3_combination",
    "z3_combination",
    "reconstruct_embedding",
    "shape_vectors",
    "shape_census",
]

SIGNATURE = np.array([1] * 12 + [-1], dtype=np.int64)

# rows (a b c d / e f g h / i j k l) then t
A3_ARRAY = (1, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 1, 1)
Z3_ARRAY = (0, 0, 1, 1, 0, 0, 1, 1, 1, 1, 0, 0, 2)


class EmbeddingError(RuntimeError):
    pass


def lorentz_ip(x: Sequence[int], y: Sequence[int]) -> int:
    return int(np.sum(np.asarray(x) * SIGNATURE * np.asarray(y)))


def rows_ok(v: Sequence[int]) -> bool:
    t = v[12]
    return all(sum(v[4 * r : 4 * r + 4]) == t for r in range(3))


@dataclass(frozen=True)
class Embedding:
    labels: tuple[str, ...]
    vectors: tuple[tuple[int, ...], ...]

    @property
    def matrix(self) -> np.ndarray:
        return np.array(self.vectors, dtype=np.int64)

    def gram(self) -> np.ndarray:
        m = self.matrix
        return m @ np.diag(SIGNATURE) @ m.T

    def image(self, root: RootVec) -> tuple[int, ...]:
        return tuple(int(x) for x in root.array @ self.matrix)

    def preimage(self, v: Sequence[int]) -> np.ndarray:
        """Integer coefficients c with c @ matrix == v."""
        m = self.matrix.astype(float)
        c, *_ = np.linalg.lstsq(m.T, np.asarray(v, dtype=float), rcond=None)
        ci = np.rint(c).astype(np.int64)
        if not np.array_equal(ci @ self.matrix, np.asarray(v, dtype=np.int64)):
            raise EmbeddingError(f"vector {list(v)} is not an integral combination of the embedded roots")
        return ci

    def report(self) -> dict:
        return {lab: list(v) for lab, v in zip(self.labels, self.vectors)}

    def to_json(self) -> str:
        return json.dumps(self.report())


def _y333():
    d = build_y_diagram((3, 3, 3))
    form = gram_from_diagram(d)
    f = {lab: fundamental(form, d.index(lab)) for lab in d.labels}
    return d, form, f


def a3_combination() -> RootVec:
    """Extending root of d1-c1-b1-a-b2-c2-d2 in fundamental coordinates."""
    _, _, f = _y333()
    chain = [f[x] for x in ("d1", "c1", "b1", "a", "b2", "c2", "d2")]
    return extend_chain(sign_fix_chain(chain))


def z3_combination(state: ClosureState | None = None) -> RootVec:
    """Extending root of the chain -c1, -d1, a2, -d3, a1, -d2, -c2.

    a_i is the extending root of the two arms other than arm i.  When a
    closure state is given, a1 and a2 must be nodes of it.
    """
    _, form, f = _y333()

    def arm_pair_root(skip: int) -> RootVec:
        i, j = [k for k in (1, 2, 3) if k != skip]
        chain = [f[f"d{i}"], f[f"c{i}"], f[f"b{i}"], f["a"], f[f"b{j}"], f[f"c{j}"], f[f"d{j}"]]
        return extend_chain(sign_fix_chain(chain))

    a1, a2 = arm_pair_root(1), arm_pair_root(2)
    if state is not None:
        for r in (a1, a2):
            if state.node_of(RootVec(r.coeffs, state.form)) is None:
                raise EmbeddingError("closure state does not contain the a_i extending roots")
    chain = [negate(f["c1"]), negate(f["d1"]), a2, negate(f["d3"]), a1, negate(f["d2"]), negate(f["c2"])]
    return extend_chain(sign_fix_chain(chain))


def candidate_vectors(bound: int = 2) -> list[tuple[int, ...]]:
    """All norm-2 vectors with |entry| <= bound and every row summing to t, sorted."""
    rng = range(-bound, bound + 1)
    by_sum: dict[int, list[tuple[int, ...]]] = {}
    for row in itertools.product(rng, repeat=4):
        by_sum.setdefault(sum(row), []).append(row)
    out = []
    for t in rng:
        rows = by_sum.get(t, [])
        for r1 in rows:
            s1 = sum(x * x for x in r1)
            for r2 in rows:
                s2 = s1 + sum(x * x for x in r2)
                for r3 in rows:
                    if s2 + sum(x * x for x in r3) - t * t == 2:
                        out.append(r1 + r2 + r3 + (t,))
    return sorted(out)


def reconstruct_embedding(state: ClosureState | None = None, max_bound: int = 2) -> Embedding:
    """First embedding matching the a3 and z3 arrays, smallest entry bound first."""
    for bound in range(1, max_bound + 1):
        try:
            return _search_embedding(state, bound)
        except EmbeddingError as exc:
            err = exc
    raise err


def _search_embedding(state: ClosureState | None, bound: int) -> Embedding:
    """First embedding with entries in [-bound, bound], in lexicographic search order.

    Nodes are placed outward from the centre (a, b_i, c_i, d1); d2 and d3 are then forced
    by the a3 and z3 constraints (both have coefficient +-1 there).
    """
    d, form, _ = _y333()
    gram = form.matrix
    cands = candidate_vectors(bound)
    cand_arr = np.array(cands, dtype=np.int64)
    cand_set = set(cands)
    idx = {lab: d.index(lab) for lab in d.labels}
    a3 = a3_combination().array
    z3 = z3_combination(state).array
    targets = [(a3, np.array(A3_ARRAY)), (z3, np.array(Z3_ARRAY))]
    forced = {idx["d2"]: 0, idx["d3"]: 1}
    for node, k in forced.items():
        if abs(targets[k][0][node]) != 1:
            raise EmbeddingError("constraint cannot be solved for its forced node")
    order = [idx[x] for x in ("a", "b1", "b2", "b3", "c1", "c2", "c3", "d1", "d2", "d3")]
    signed = cand_arr * SIGNATURE
    placed: dict[int, np.ndarray] = {}
    # each node's products with the two target arrays are fixed by the Gram form
    allowed = np.ones((d.n, len(cands)), dtype=bool)
    for coeffs, target in targets:
        allowed &= (signed @ target)[None, :] == (gram @ coeffs)[:, None]

    def fits(node: int, v: np.ndarray) -> bool:
        if lorentz_ip(v, v) != 2 or not rows_ok(v):
            return False
        return all(lorentz_ip(v, w) == gram[node, other] for other, w in placed.items())

    def solve_forced(node: int) -> np.ndarray | None:
        coeffs, target = targets[forced[node]]
        rest = np.zeros(13, dtype=np.int64)
        for other, w in placed.items():
            rest += coeffs[other] * w
        missing = [k for k in range(len(coeffs)) if coeffs[k] and k not in placed and k != node]
        if missing:
            return None
        v = (target - rest) * coeffs[node]
        if tuple(int(x) for x in v) not in cand_set:
            return None
        return v

    def search(pos: int) -> bool:
        if pos == len(order):
            return True
        node = order[pos]
        if node in forced:
            v = solve_forced(node)
            if v is None or not fits(node, v):
                return False
            placed[node] = v
            if search(pos + 1):
                return True
            del placed[node]
            return False
        mask = allowed[node].copy()
        for other, w in placed.items():
            mask &= (signed @ w) == gram[node, other]
        for k in np.nonzero(mask)[0]:
            placed[node] = cand_arr[k]
            if search(pos + 1):
                return True
            del placed[node]
        return False

    if not search(0):
        raise EmbeddingError(f"no embedding with entries bounded by {bound}")
    emb = Embedding(d.labels, tuple(tuple(int(x) for x in placed[i]) for i in range(d.n)))
    g = emb.gram()
    if not np.array_equal(g, gram):
        raise EmbeddingError("embedded Gram matrix differs from the Y_333 form")
    for coeffs, target in targets:
        if not np.array_equal(coeffs @ emb.matrix, target):
            raise EmbeddingError("embedding misses a target array")
    return emb


SHAPE_SEEDS = {
    1: ((0, 0, 1, -1), (0, 0, 0, 0), (0, 0, 0, 0), 0),
    2: ((0, 0, 0, 1), (0, 0, 0, 1), (0, 0, 0, 1), 1),
    3: ((0, 0, 1, 1), (0, 0, 1, 1), (0, 0, 1, 1), 2),
}


def shape_vectors(shape: int) -> list[tuple[int, ...]]:
    """Every array obtained from a seed by permuting within rows and permuting rows."""
    r1, r2, r3, t = SHAPE_SEEDS[shape]
    out = set()
    for rows in itertools.permutations((r1, r2, r3)):
        for p1 in set(itertools.permutations(rows[0])):
            for p2 in set(itertools.permutations(rows[1])):
                for p3 in set(itertools.permutations(rows[2])):
                    out.add(p1 + p2 + p3 + (t,))
    return sorted(out)


def shape_census(emb: Embedding, qs: QuotientSpace, form=None) -> dict:
    """Distinct nonzero quotient images of each root shape, and of all together."""
    if form is None:
        _, form, _ = _y333()
    per_shape = {}
    union: set[int] = set()
    for shape in (1, 2, 3):
        images = set()
        for v in shape_vectors(shape):
            coeffs = emb.preimage(v)
            img = project_root(qs, RootVec.of(coeffs, form))
            if img:
                images.add(img)
        per_shape[shape] = len(images)
        union |= images
    return {"counts": (per_shape[1], per_shape[2], per_shape[3]), "total": len(union), "images": sorted(union)}
