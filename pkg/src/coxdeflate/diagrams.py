"""Simply-laced Coxeter diagrams: construction, free n-gons and isomorphism.

A :class:`Diagram` is a finite simple graph.  Joined nodes carry Coxeter
mark 3, unjoined nodes mark 2; nothing else is representable.  Adjacency is
held as one integer bitmask per node so that the small exhaustive searches
below (induced cycles, induced paths, isomorphism) stay cheap.
"""

from __future__ import annotations

import itertools
import json
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

__all__ = [
    "Diagram",
    "DiagramError",
    "NoGonError",
    "build_y_diagram",
    "build_incidence_graph",
    "build_named",
    "canonical_gon",
    "free_ngons",
    "max_free_ngon_length",
    "induced_paths",
    "is_isomorphic",
    "girth",
]

ARM_LETTERS = "bcdefghijklmnopqrstuvwxyz"


class DiagramError(ValueError):
    pass


class NoGonError(DiagramError):
    """Raised when a diagram has no cycle at all."""


@dataclass(frozen=True)
class Diagram:
    labels: tuple[str, ...]
    adj: tuple[int, ...] = field(repr=False)

    def __post_init__(self):
        n = len(self.labels)
        if len(set(self.labels)) != n:
            raise DiagramError("node labels must be distinct")
        if len(self.adj) != n:
            raise DiagramError("adjacency size does not match label count")
        for i, row in enumerate(self.adj):
            if row >> n:
                raise DiagramError(f"node {i} joined to a nonexistent node")
            if row >> i & 1:
                raise DiagramError(f"self-loop at node {self.labels[i]!r}")
            for j in _bits(row):
                if not self.adj[j] >> i & 1:
                    raise DiagramError("adjacency is not symmetric")

    @classmethod
    def from_edges(cls, labels: Sequence[str], edges: Iterable[tuple[int, int]]) -> "Diagram":
        adj = [0] * len(labels)
        seen = set()
        for i, j in edges:
            if i == j:
                raise DiagramError(f"self-loop at node {i}")
            key = (min(i, j), max(i, j))
            if key in seen:
                raise DiagramError(f"duplicate edge {key}")
            seen.add(key)
            adj[i] |= 1 << j
            adj[j] |= 1 << i
        return cls(tuple(labels), tuple(adj))

    @classmethod
    def from_label_edges(cls, labels: Sequence[str], edges: Iterable[tuple[str, str]]) -> "Diagram":
        index = {lab: k for k, lab in enumerate(labels)}
        return cls.from_edges(labels, [(index[u], index[v]) for u, v in edges])

    def __len__(self) -> int:
        return len(self.labels)

    @property
    def n(self) -> int:
        return len(self.labels)

    def index(self, label: str) -> int:
        return self.labels.index(label)

    def joined(self, i: int, j: int) -> bool:
        return bool(self.adj[i] >> j & 1)

    def neighbors(self, i: int) -> list[int]:
        return list(_bits(self.adj[i]))

    def degree(self, i: int) -> int:
        return bin(self.adj[i]).count("1")

    def edges(self) -> list[tuple[int, int]]:
        return [(i, j) for i in range(self.n) for j in _bits(self.adj[i]) if i < j]

    def is_bipartite(self) -> bool:
        colour = [-1] * self.n
        for s in range(self.n):
            if colour[s] >= 0:
                continue
            colour[s] = 0
            queue = deque([s])
            while queue:
                u = queue.popleft()
                for v in _bits(self.adj[u]):
                    if colour[v] < 0:
                        colour[v] = 1 - colour[u]
                        queue.append(v)
                    elif colour[v] == colour[u]:
                        return False
        return True

    def induced(self, nodes: Sequence[int]) -> "Diagram":
        pos = {v: k for k, v in enumerate(nodes)}
        edges = [(pos[i], pos[j]) for i, j in self.edges() if i in pos and j in pos]
        return Diagram.from_edges([self.labels[v] for v in nodes], edges)

    def to_json(self) -> str:
        return json.dumps({"nodes": list(self.labels), "edges": [list(e) for e in self.edges()]})

    @classmethod
    def from_json(cls, text: str) -> "Diagram":
        data = json.loads(text)
        nodes = data["nodes"]
        edges = []
        for e in data["edges"]:
            i, j = e
            if not (0 <= i < len(nodes) and 0 <= j < len(nodes)):
                raise DiagramError(f"edge {e} out of range")
            if i >= j:
                raise DiagramError(f"edge {e} must satisfy i < j")
            edges.append((i, j))
        return cls.from_edges(nodes, edges)

    def to_dot(self, name: str = "G") -> str:
        lines = [f"graph {name} {{"]
        lines += [f'  n{i} [label="{lab}"];' for i, lab in enumerate(self.labels)]
        lines += [f"  n{i} -- n{j};" for i, j in self.edges()]
        lines.append("}")
        return "\n".join(lines) + "\n"


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def build_y_diagram(arms: Sequence[int]) -> Diagram:
    """Y_{pqr...}: central node ``a`` with chains b_i, c_i, d_i, ... hanging off it."""
    if not arms:
        raise DiagramError("need at least one arm")
    labels = ["a"]
    edges = []
    for i, length in enumerate(arms, start=1):
        if length < 1:
            raise DiagramError("arm lengths must be positive")
        if length > len(ARM_LETTERS):
            raise DiagramError("arm too long to label")
        prev = 0
        for k in range(length):
            labels.append(f"{ARM_LETTERS[k]}{i}")
            edges.append((prev, len(labels) - 1))
            prev = len(labels) - 1
    return Diagram.from_edges(labels, edges)


def _projective_points(q: int) -> list[tuple[int, int, int]]:
    # normalized homogeneous triples: first nonzero coordinate is 1
    pts = []
    for v in itertools.product(range(q), repeat=3):
        if any(v) and v[next(k for k in range(3) if v[k])] == 1:
            pts.append(v)
    return pts


def build_incidence_graph(q: int) -> Diagram:
    """Point-line incidence graph of PG(2, q) for q in {2, 3}.

    Points come first (labels ``P<xyz>``), then lines (``L<xyz>``); a line
    with coordinates l contains the points p with l.p = 0 mod q.
    """
    if q not in (2, 3):
        raise DiagramError(f"unsupported plane order {q}; only 2 and 3 are built")
    pts = _projective_points(q)
    m = len(pts)
    labels = ["P" + "".join(map(str, p)) for p in pts] + ["L" + "".join(map(str, p)) for p in pts]
    edges = [
        (i, m + j)
        for i, p in enumerate(pts)
        for j, line in enumerate(pts)
        if sum(a * b for a, b in zip(p, line)) % q == 0
    ]
    return Diagram.from_edges(labels, edges)


def build_named(name: str, n: int | None = None) -> Diagram:
    """``petersen``, ``cube`` or ``cycle`` (with ``n`` >= 3 nodes)."""
    if name == "petersen":
        outer = [(i, (i + 1) % 5) for i in range(5)]
        spokes = [(i, i + 5) for i in range(5)]
        inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
        return Diagram.from_edges([f"p{i}" for i in range(10)], outer + spokes + inner)
    if name == "cube":
        edges = [(u, u ^ (1 << b)) for u in range(8) for b in range(3) if u < u ^ (1 << b)]
        return Diagram.from_edges([format(u, "03b") for u in range(8)], edges)
    if name == "cycle":
        if n is None or n < 3:
            raise DiagramError("cycle needs n >= 3")
        return Diagram.from_edges([f"x{i}" for i in range(n)], [(i, (i + 1) % n) for i in range(n)])
    raise DiagramError(f"unknown diagram name {name!r}")


def canonical_gon(cycle: Sequence[int]) -> tuple[int, ...]:
    """Lexicographically least rotation or reflection of a cyclic sequence."""
    n = len(cycle)
    seqs = []
    for seq in (list(cycle), list(reversed(cycle))):
        for r in range(n):
            seqs.append(tuple(seq[r:] + seq[:r]))
    return min(seqs)


def free_ngons(d: Diagram, n: int) -> list[tuple[int, ...]]:
    """All induced n-cycles of ``d``, canonical form, sorted.

    Each cycle is grown from its least node as anchor; the second node is
    taken smaller than the last one so every cycle is produced exactly once.
    """
    if n < 3:
        raise DiagramError("gons need n >= 3")
    adj = d.adj
    out = []
    for anchor in range(d.n):
        above = ~((1 << (anchor + 1)) - 1)
        start_nbrs = adj[anchor] & above
        path = [anchor]

        def grow(last: int, used: int, forbidden: int):
            # forbidden: neighbours of all path nodes except the last one
            if len(path) == n:
                if adj[last] >> anchor & 1 and path[1] < last:
                    out.append(canonical_gon(path))
                return
            cand = adj[last] & above & ~used & ~forbidden
            if len(path) == n - 1:
                # the closing node must see the anchor
                cand &= adj[anchor]
            elif len(path) > 1:
                cand &= ~adj[anchor]
            for w in _bits(cand):
                path.append(w)
                grow(w, used | (1 << w), forbidden | (adj[last] if len(path) > 2 else 0))
                path.pop()

        for w in _bits(start_nbrs):
            if n == 3:
                for x in _bits(adj[w] & adj[anchor] & above):
                    if w < x:
                        out.append(canonical_gon((anchor, w, x)))
                continue
            path.append(w)
            grow(w, (1 << anchor) | (1 << w), 0)
            path.pop()
    return sorted(set(out))


def max_free_ngon_length(d: Diagram) -> int:
    for n in range(d.n, 2, -1):
        if free_ngons(d, n):
            return n
    raise NoGonError("diagram has no cycle")


def induced_paths(adj: Sequence[int], k: int) -> list[tuple[int, ...]]:
    """Induced paths on ``k`` nodes, one orientation each (first < last).

    ``adj`` is a sequence of neighbour bitmasks.  For ``k`` == 1 every node is
    its own path.
    """
    m = len(adj)
    out = []
    if k == 1:
        return [(v,) for v in range(m)]
    path: list[int] = []

    def grow(last: int, blocked: int):
        if len(path) == k:
            if path[0] < path[-1]:
                out.append(tuple(path))
            return
        for w in _bits(adj[last] & ~blocked):
            path.append(w)
            # w's successor may not touch anything before w
            grow(w, blocked | adj[last] | (1 << w))
            path.pop()

    for s in range(m):
        path.append(s)
        grow(s, 1 << s)
        path.pop()
    return sorted(out)


def girth(d: Diagram) -> int | None:
    """Length of a shortest cycle, by breadth-first search from every node."""
    best = None
    for s in range(d.n):
        dist = {s: 0}
        parent = {s: -1}
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for v in _bits(d.adj[u]):
                if v not in dist:
                    dist[v] = dist[u] + 1
                    parent[v] = u
                    queue.append(v)
                elif parent[u] != v:
                    length = dist[u] + dist[v] + 1
                    if best is None or length < best:
                        best = length
    return best


def _distance_profile(d: Diagram) -> list[tuple[int, ...]]:
    profiles = []
    for s in range(d.n):
        dist = [-1] * d.n
        dist[s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for v in _bits(d.adj[u]):
                if dist[v] < 0:
                    dist[v] = dist[u] + 1
                    queue.append(v)
        counts = [0] * (d.n + 1)
        for x in dist:
            counts[x] += 1  # -1 (unreachable) lands in the last slot
        profiles.append(tuple(counts))
    return profiles


def is_isomorphic(d1: Diagram, d2: Diagram) -> dict[int, int] | None:
    """Return a node bijection d1 -> d2 preserving adjacency, or None.

    Backtracking over d1's nodes in breadth-first order, only pairing nodes
    with equal distance profiles.  Any bijection found is re-checked on every
    pair before being returned.
    """
    n = d1.n
    if n != d2.n or len(d1.edges()) != len(d2.edges()):
        return None
    p1, p2 = _distance_profile(d1), _distance_profile(d2)
    if sorted(p1) != sorted(p2):
        return None

    order: list[int] = []
    seen = set()
    for s in sorted(range(n), key=lambda v: (-d1.degree(v), v)):
        if s in seen:
            continue
        seen.add(s)
        queue = deque([s])
        while queue:
            u = queue.popleft()
            order.append(u)
            for v in sorted(_bits(d1.adj[u])):
                if v not in seen:
                    seen.add(v)
                    queue.append(v)

    mapping: dict[int, int] = {}
    used = 0

    def extend(k: int) -> bool:
        nonlocal used
        if k == n:
            return True
        u = order[k]
        for v in range(n):
            if used >> v & 1 or p1[u] != p2[v]:
                continue
            if all(d1.joined(u, w) == d2.joined(v, mapping[w]) for w in mapping):
                mapping[u] = v
                used |= 1 << v
                if extend(k + 1):
                    return True
                del mapping[u]
                used &= ~(1 << v)
        return False

    if not extend(0):
        return None
    for i in range(n):
        for j in range(n):
            if d1.joined(i, j) != d2.joined(mapping[i], mapping[j]):
                raise AssertionError("isomorphism search returned an invalid map")
    return dict(sorted(mapping.items()))
