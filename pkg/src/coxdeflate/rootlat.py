"""Integral roots over a diagram's Gram form and the extending-node closure.

Roots are integer coefficient vectors on the fundamental roots of a
simply-laced diagram.  A free chain of n-1 roots (consecutive inner products
-1, all others 0) is an a_{n-1} subdiagram; minus the sum of its roots is
the extending root of the affine A_{n-1} diagram.  :func:`closure` keeps
adjoining such extending roots, gluing roots into node classes, until no
chain produces anything new.

Join status of two roots comes from their inner product: +-1 joined, 0
unjoined.  Any other value leaves the join undetermined for that pair of
roots; a node class usually has several member roots, and the class-level
join is the one status seen among member pairs that is determined.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .diagrams import Diagram, induced_paths

__all__ = [
    "GramForm",
    "RootVec",
    "NodeClass",
    "ClosureState",
    "ClosureError",
    "CapExceededError",
    "NonSimplyLacedError",
    "NoFixpointError",
    "ChainError",
    "gram_from_diagram",
    "ip",
    "norm",
    "negate",
    "reflect",
    "sign_fix_chain",
    "extend_chain",
    "closure",
    "fundamental",
]

JOINED = 1
UNJOINED = 0
UNKNOWN = -1
CONFLICT = -2


class ClosureError(RuntimeError):
    pass


class CapExceededError(ClosureError):
    pass


class NonSimplyLacedError(ClosureError):
    pass


class NoFixpointError(ClosureError):
    pass


class ChainError(ValueError):
    pass


class GramForm:
    """Symmetric integer matrix: 2 on the diagonal, -1 joined, 0 unjoined."""

    def __init__(self, matrix, labels: Sequence[str] | None = None):
        m = np.array(matrix, dtype=np.int64)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("Gram matrix must be square")
        if not np.array_equal(m, m.T):
            raise ValueError("Gram matrix must be symmetric")
        if not np.all(np.diag(m) == 2):
            raise ValueError("every fundamental root needs norm 2")
        off = m[~np.eye(len(m), dtype=bool)]
        if not np.all((off == 0) | (off == -1)):
            raise ValueError("off-diagonal entries must be 0 or -1")
        m.setflags(write=False)
        self.matrix = m
        self.labels = tuple(labels) if labels is not None else tuple(str(i) for i in range(len(m)))

    @property
    def rank(self) -> int:
        return self.matrix.shape[0]

    def __len__(self) -> int:
        return self.matrix.shape[0]

    def __eq__(self, other) -> bool:
        return isinstance(other, GramForm) and np.array_equal(self.matrix, other.matrix)

    def __hash__(self) -> int:
        return hash(self.matrix.tobytes())

    def __repr__(self) -> str:
        return f"GramForm(rank={self.rank})"


def gram_from_diagram(d: Diagram) -> GramForm:
    m = 2 * np.eye(d.n, dtype=np.int64)
    for i, j in d.edges():
        m[i, j] = m[j, i] = -1
    return GramForm(m, d.labels)


@dataclass(frozen=True)
class RootVec:
    coeffs: tuple[int, ...]
    form: GramForm = field(compare=False, repr=False)

    def __post_init__(self):
        if len(self.coeffs) != self.form.rank:
            raise ValueError("coefficient vector has the wrong length")

    @classmethod
    def of(cls, coeffs, form: GramForm) -> "RootVec":
        return cls(tuple(int(c) for c in coeffs), form)

    @property
    def array(self) -> np.ndarray:
        return np.array(self.coeffs, dtype=np.int64)

    def __neg__(self) -> "RootVec":
        return negate(self)

    def __add__(self, other: "RootVec") -> "RootVec":
        _same_form(self, other)
        return RootVec(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)), self.form)

    def __sub__(self, other: "RootVec") -> "RootVec":
        return self + negate(other)

    def __rmul__(self, k: int) -> "RootVec":
        return RootVec(tuple(k * a for a in self.coeffs), self.form)

    def canonical(self) -> tuple[int, ...]:
        """Sign-normalized coefficients: first nonzero entry positive."""
        for c in self.coeffs:
            if c:
                return self.coeffs if c > 0 else tuple(-x for x in self.coeffs)
        return self.coeffs


def fundamental(form: GramForm, i: int) -> RootVec:
    return RootVec(tuple(int(k == i) for k in range(form.rank)), form)


def _same_form(x: RootVec, y: RootVec) -> None:
    if x.form is not y.form and x.form != y.form:
        raise ValueError("roots live over different Gram forms")


def ip(x: RootVec, y: RootVec) -> int:
    _same_form(x, y)
    return int(x.array @ x.form.matrix @ y.array)


def norm(x: RootVec) -> int:
    return ip(x, x)


def negate(x: RootVec) -> RootVec:
    return RootVec(tuple(-c for c in x.coeffs), x.form)


def reflect(x: RootVec, r: RootVec) -> RootVec:
    """x - (x, r) r, the reflection in a norm-2 root r."""
    if norm(r) != 2:
        raise ValueError("can only reflect in a norm-2 root")
    k = ip(x, r)
    return RootVec(tuple(a - k * b for a, b in zip(x.coeffs, r.coeffs)), x.form)


def _check_free(chain: Sequence[RootVec]) -> None:
    for k, r in enumerate(chain):
        if norm(r) != 2:
            raise ChainError(f"chain root {k} has norm {norm(r)}")
    for i in range(len(chain)):
        for j in range(i + 1, len(chain)):
            v = ip(chain[i], chain[j])
            if j == i + 1 and v not in (1, -1):
                raise ChainError(f"consecutive roots {i},{j} have inner product {v}")
            if j > i + 1 and v != 0:
                raise ChainError(f"roots {i},{j} are not orthogonal (inner product {v})")


def sign_fix_chain(chain: Sequence[RootVec]) -> list[RootVec]:
    """Keep the first root, flip later ones so consecutive inner products are -1."""
    _check_free(chain)
    out = [chain[0]]
    for r in chain[1:]:
        out.append(r if ip(out[-1], r) == -1 else negate(r))
    return out


def extend_chain(signed: Sequence[RootVec]) -> RootVec:
    """Extending root -(sum of the chain) of a sign-fixed free chain."""
    form = signed[0].form
    total = np.zeros(form.rank, dtype=np.int64)
    for r in signed:
        total += r.array
    ext = RootVec.of(-total, form)
    if norm(ext) != 2:
        raise ChainError(f"extending root has norm {norm(ext)}; chain is not a free signed chain")
    k = len(signed)
    for pos, r in enumerate(signed):
        want = -1 if pos in (0, k - 1) else 0
        if k == 1:
            want = -2
        if ip(ext, r) != want:
            raise ChainError("extending root has the wrong inner products with its chain")
    return ext


def _status(v: int) -> int:
    if v == 0:
        return UNJOINED
    if v in (1, -1):
        return JOINED
    return UNKNOWN


def _combine(a: int, b: int) -> int:
    if a == CONFLICT or b == CONFLICT:
        return CONFLICT
    if a == UNKNOWN:
        return b
    if b == UNKNOWN or a == b:
        return a
    return CONFLICT


@dataclass
class NodeClass:
    id: int
    label: str
    representative: RootVec
    merged: list[RootVec] = field(default_factory=list)

    @property
    def members(self) -> list[RootVec]:
        return [self.representative] + self.merged


@dataclass
class ClosureState:
    form: GramForm
    nodes: list[NodeClass]
    joins: np.ndarray
    relations: list[tuple[RootVec, RootVec]]
    n: int
    cap: int
    max_rounds: int
    rounds: int = 0
    round_log: list[dict] = field(default_factory=list)

    def diagram(self) -> Diagram:
        m = len(self.nodes)
        edges = [(i, j) for i in range(m) for j in range(i + 1, m) if self.joins[i, j]]
        return Diagram.from_edges([c.label for c in self.nodes], edges)

    def node_of(self, root: RootVec) -> NodeClass | None:
        key = root.canonical()
        for c in self.nodes:
            if any(m.canonical() == key for m in c.members):
                return c
        return None

    def report(self) -> dict:
        return {
            "n": self.n,
            "cap": self.cap,
            "rounds": self.rounds,
            "node_count": len(self.nodes),
            "labels": [c.label for c in self.nodes],
            "representatives": [list(c.representative.coeffs) for c in self.nodes],
            "joins": self.joins.astype(int).tolist(),
            "relations": [[list(a.coeffs), list(b.coeffs)] for a, b in self.relations],
            "round_log": self.round_log,
        }

    def to_json(self) -> str:
        return json.dumps(self.report())


class _Closure:
    def __init__(self, d: Diagram, n: int, cap: int, merge_policy: str, max_rounds: int, form=None):
        if merge_policy not in ("pattern_merge", "none"):
            raise ValueError(f"unknown merge policy {merge_policy!r}")
        if n < 3:
            raise ValueError("gon size must be at least 3")
        if cap < d.n:
            raise ValueError("cap is below the diagram's node count")
        self.form = gram_from_diagram(d) if form is None else form
        if len(self.form) != d.n:
            raise ValueError("Gram form size differs from the diagram")
        self.G = self.form.matrix
        self.n = n
        self.cap = cap
        self.policy = merge_policy
        self.max_rounds = max_rounds
        self.labels = list(d.labels)
        # members[k]: integer matrix, one row per root in class k (row 0 = representative)
        self.members = [np.eye(d.n, dtype=np.int64)[i : i + 1] for i in range(d.n)]
        self.known = set()
        for row in np.eye(d.n, dtype=np.int64):
            self._remember(row)
        self.status = np.full((d.n, d.n), UNKNOWN, dtype=np.int64)
        for i in range(d.n):
            for j in range(d.n):
                if i != j:
                    self.status[i, j] = _status(int(self.G[i, j]))
        self.relations: list[tuple[np.ndarray, np.ndarray]] = []
        self.round_log: list[dict] = []

    def _remember(self, v: np.ndarray) -> None:
        self.known.add(tuple(int(x) for x in v))
        self.known.add(tuple(int(-x) for x in v))

    def _row_status(self, v: np.ndarray) -> np.ndarray:
        out = np.empty(len(self.members), dtype=np.int64)
        gv = self.G @ v
        for k, mem in enumerate(self.members):
            s = UNKNOWN
            for x in mem @ gv:
                s = _combine(s, _status(int(x)))
            out[k] = s
        return out

    def _compatible(self, st: np.ndarray, k: int) -> bool:
        if st[k] in (JOINED, CONFLICT):
            return False
        row = self.status[k]
        for j in range(len(self.members)):
            if j == k:
                continue
            a, b = st[j], row[j]
            if a == CONFLICT or b == CONFLICT:
                return False
            if a >= 0 and b >= 0 and a != b:
                return False
        return True

    def _add_member(self, k: int, v: np.ndarray) -> None:
        self.relations.append((self.members[k][0].copy(), v.copy()))
        self.members[k] = np.vstack([self.members[k], v])
        st = self._row_status(v)
        for j in range(len(self.members)):
            if j != k:
                s = _combine(self.status[k, j], st[j])
                self.status[k, j] = self.status[j, k] = s

    def _add_class(self, v: np.ndarray) -> None:
        st = self._row_status(v)
        m = len(self.members)
        self.members.append(v[None, :].copy())
        self.labels.append(f"e{m}")
        grown = np.full((m + 1, m + 1), UNKNOWN, dtype=np.int64)
        grown[:m, :m] = self.status
        grown[m, :m] = st
        grown[:m, m] = st
        self.status = grown
        if m + 1 > self.cap:
            raise CapExceededError(f"closure needs more than {self.cap} nodes")

    def _joins(self) -> np.ndarray:
        if np.any(self.status == CONFLICT):
            i, j = np.argwhere(self.status == CONFLICT)[0]
            raise NonSimplyLacedError(
                f"nodes {self.labels[i]} and {self.labels[j]} are both joined and unjoined"
            )
        return self.status == JOINED

    def _chains(self, joins: np.ndarray) -> list[tuple[int, ...]]:
        m = len(self.members)
        adj = [sum(1 << j for j in range(m) if joins[i, j]) for i in range(m)]
        return induced_paths(adj, self.n - 1)

    def _pattern_merge_existing(self) -> int:
        """Merge any two classes whose fully determined join rows coincide."""
        merged = 0
        changed = True
        while changed:
            changed = False
            m = len(self.members)
            for i in range(m):
                for j in range(i + 1, m):
                    if self.status[i, j] == JOINED:
                        continue
                    ri = np.delete(self.status[i], [i, j])
                    rj = np.delete(self.status[j], [i, j])
                    if np.all(ri >= 0) and np.array_equal(ri, rj):
                        for v in self.members[j]:
                            self._add_member(i, v)
                        self._drop_class(j)
                        merged += 1
                        changed = True
                        break
                if changed:
                    break
        return merged

    def _drop_class(self, j: int) -> None:
        del self.members[j]
        del self.labels[j]
        self.status = np.delete(np.delete(self.status, j, axis=0), j, axis=1)

    def run(self) -> ClosureState:
        for rnd in range(self.max_rounds):
            joins = self._joins()
            reps = np.array([mem[0] for mem in self.members])
            gram = reps @ self.G @ reps.T
            chains = self._chains(joins)
            k = self.n - 1
            free_pattern = 2 * np.eye(k, dtype=np.int64) + np.eye(k, k=1, dtype=np.int64) + np.eye(k, k=-1, dtype=np.int64)
            skipped = 0
            candidates = []
            for c in chains:
                idx = np.array(c)
                if not np.array_equal(np.abs(gram[np.ix_(idx, idx)]), free_pattern):
                    # class-level chain whose representatives are not a free root chain
                    skipped += 1
                    continue
                signed = [reps[c[0]]]
                for k in c[1:]:
                    r = reps[k]
                    signed.append(r if int(signed[-1] @ self.G @ r) == -1 else -r)
                v = -np.sum(signed, axis=0)
                if int(v @ self.G @ v) != 2:
                    raise ChainError("extending root does not have norm 2")
                ends = (int(v @ self.G @ signed[0]), int(v @ self.G @ signed[-1]))
                if ends != (-1, -1) or any(int(v @ self.G @ s) for s in signed[1:-1]):
                    raise ChainError("extending root has the wrong inner products with its chain")
                key = tuple(int(x) for x in v)
                if key in self.known:
                    continue
                self._remember(v)
                candidates.append(v)

            added = merged = 0
            for v in candidates:
                st = self._row_status(v)
                if self.policy == "pattern_merge":
                    hits = [k for k in range(len(self.members)) if self._compatible(st, k)]
                    if len(hits) > 1:
                        raise NonSimplyLacedError(
                            f"extending root {v.tolist()} fits several nodes: {[self.labels[k] for k in hits]}"
                        )
                    if hits:
                        self._add_member(hits[0], v)
                        merged += 1
                        continue
                self._add_class(v)
                added += 1
            if self.policy == "pattern_merge":
                merged += self._pattern_merge_existing()
            self.round_log.append(
                {"round": rnd, "chains": len(chains), "skipped": skipped, "new_roots": len(candidates),
                 "added": added, "merged": merged, "nodes": len(self.members)}
            )
            if added == 0 and merged == 0:
                return self._state(rnd + 1)
        raise NoFixpointError(f"no fixpoint after {self.max_rounds} rounds")

    def _state(self, rounds: int) -> ClosureState:
        joins = self._joins()
        m = len(self.members)
        undetermined = [(i, j) for i in range(m) for j in range(i + 1, m) if self.status[i, j] == UNKNOWN]
        if undetermined:
            i, j = undetermined[0]
            raise NonSimplyLacedError(
                f"join between {self.labels[i]} and {self.labels[j]} is undetermined "
                f"(inner products outside 0, +-1)"
            )
        nodes = []
        for k, mem in enumerate(self.members):
            rows = [RootVec.of(r, self.form) for r in mem]
            nodes.append(NodeClass(k, self.labels[k], rows[0], rows[1:]))
        rel = [(RootVec.of(a, self.form), RootVec.of(b, self.form)) for a, b in self.relations]
        joins = joins.copy()
        joins.setflags(write=False)
        return ClosureState(self.form, nodes, joins, rel, self.n, self.cap, self.max_rounds, rounds, self.round_log)


def closure(
    d: Diagram,
    n: int,
    cap: int,
    merge_policy: str = "pattern_merge",
    max_rounds: int = 64,
    form: GramForm | None = None,
) -> ClosureState:
    """Close ``d`` under adjoining affine A_{n-1} extending nodes.

    Each round enumerates the induced (n-1)-node paths of the current join
    graph, extends those whose representatives form a free root chain, and
    drops roots already known up to sign.  Under ``pattern_merge`` a new root
    joins an existing class when the two agree on every determined join;
    otherwise it founds a new class.  Stops when a round changes nothing.
    ``form`` overrides the Gram matrix derived from ``d``.
    """
    return _Closure(d, n, cap, merge_policy, max_rounds, form).run()
