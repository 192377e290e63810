"""Coxeter and deflation presentations, and Todd-Coxeter coset enumeration.

Words are tuples of letters: ``g`` (an int >= 0) is generator ``g`` and
``~g`` (a negative int) is its inverse.  Coxeter generators are involutions,
so every word built here uses nonnegative letters only.
"""

from __future__ import annotations

import hashlib
import json
import re
import struct
import time
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import _tc_kernel
from .diagrams import Diagram, canonical_gon, free_ngons

__all__ = [
    "Presentation",
    "CosetTable",
    "CosetError",
    "coxeter_presentation",
    "gon_relator",
    "deflated_presentation",
    "todd_coxeter",
    "coset_permutations",
]

Word = tuple[int, ...]


class CosetError(ValueError):
    pass


def invert_word(w: Sequence[int]) -> Word:
    return tuple(~x for x in reversed(w))


def reduce_word(w: Sequence[int]) -> Word:
    out: list[int] = []
    for x in w:
        if out and out[-1] == ~x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


@dataclass(frozen=True)
class Presentation:
    ngens: int
    relators: tuple[Word, ...]
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.labels:
            object.__setattr__(self, "labels", tuple(f"g{i}" for i in range(self.ngens)))
        if len(self.labels) != self.ngens:
            raise CosetError("one label per generator required")
        for w in self.relators:
            for x in w:
                g = x if x >= 0 else ~x
                if g >= self.ngens:
                    raise CosetError(f"letter {x} out of range for {self.ngens} generators")

    def involutions(self) -> set[int]:
        """Generators g with g^2 (or g^-2) among the relators."""
        return {w[0] if w[0] >= 0 else ~w[0] for w in self.relators if len(w) == 2 and w[0] == w[1]}

    def with_relators(self, extra: Iterable[Word]) -> "Presentation":
        return Presentation(self.ngens, self.relators + tuple(tuple(w) for w in extra), self.labels)

    # text format: one relator per line, space-separated labels with optional ^k
    def to_text(self) -> str:
        lines = [f"# generators: {' '.join(self.labels)}"]
        for w in self.relators:
            lines.append(" ".join(_fmt_power(self.labels, x, e) for x, e in _runs(w)))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str, labels: Sequence[str] | None = None) -> "Presentation":
        body = []
        for raw in text.splitlines():
            line = raw.strip()
            if line.startswith("# generators:"):
                if labels is None:
                    labels = line.split(":", 1)[1].split()
                continue
            if line and not line.startswith("#"):
                body.append(line)
        if labels is None:
            raise CosetError("generator labels missing")
        index = {lab: k for k, lab in enumerate(labels)}
        rels = []
        for line in body:
            word: list[int] = []
            for tok in line.split():
                m = re.fullmatch(r"([^\s^]+)(?:\^(-?\d+))?", tok)
                if not m or m.group(1) not in index:
                    raise CosetError(f"bad token {tok!r}")
                g = index[m.group(1)]
                e = int(m.group(2)) if m.group(2) else 1
                word += [g] * e if e > 0 else [~g] * (-e)
            rels.append(tuple(word))
        return cls(len(labels), tuple(rels), tuple(labels))

    def to_json(self) -> str:
        return json.dumps({"generators": list(self.labels), "relators": [list(w) for w in self.relators]})

    @classmethod
    def from_json(cls, text: str) -> "Presentation":
        data = json.loads(text)
        return cls(len(data["generators"]), tuple(tuple(w) for w in data["relators"]), tuple(data["generators"]))


def _runs(w: Sequence[int]):
    k = 0
    while k < len(w):
        j = k
        while j < len(w) and w[j] == w[k]:
            j += 1
        yield w[k], j - k
        k = j


def _fmt_power(labels, x, e):
    lab = labels[x] if x >= 0 else labels[~x]
    e = e if x >= 0 else -e
    return lab if e == 1 else f"{lab}^{e}"


def coxeter_presentation(d: Diagram) -> Presentation:
    """x_i^2, (x_i x_j)^2 for unjoined pairs and (x_i x_j)^3 for joined pairs."""
    rels: list[Word] = [(i, i) for i in range(d.n)]
    for i in range(d.n):
        for j in range(i + 1, d.n):
            m = 3 if d.joined(i, j) else 2
            rels.append((i, j) * m)
    return Presentation(d.n, tuple(rels), d.labels)


def gon_relator(gon: Sequence[int], k: int = 1) -> Word:
    """t^k where t = g0 (g_{n-1} ... g2) g1 (g2 ... g_{n-1}) is a gon translation.

    For k = 1 the relator says g0 equals g1 conjugated by g2...g_{n-1}, which
    kills the translation subgroup of the affine group of the gon.
    """
    if k < 1:
        raise CosetError("flation order must be >= 1")
    g = list(gon)
    if len(g) < 3:
        raise CosetError("a gon needs at least 3 nodes")
    t = [g[0]] + g[:1:-1] + [g[1]] + g[2:]
    return tuple(t * k)


def deflated_presentation(d: Diagram, n: int, k: int = 1) -> Presentation:
    """Coxeter relations of ``d`` plus one k-flation relator per free n-gon."""
    base = coxeter_presentation(d)
    return base.with_relators(gon_relator(g, k) for g in free_ngons(d, n))


@dataclass
class CosetTable:
    """Result of an enumeration.  ``table[c][g]`` is coset c times generator g.

    Only closed tables carry a table; cosets are 0-based here (coset 0 is the
    subgroup itself).  ``columns`` lists the letter behind each column.
    """

    status: str
    count: int
    ngens: int
    columns: tuple[int, ...]
    table: np.ndarray | None = field(default=None, repr=False)
    defined: int = 0
    seconds: float = 0.0

    @property
    def closed(self) -> bool:
        return self.status == "closed"

    def act(self, coset: int, letter: int) -> int:
        return self.trace(coset, (letter,))

    def trace(self, coset: int, word: Sequence[int]) -> int:
        col = {x: k for k, x in enumerate(self.columns)}
        for x in word:
            # an involution has one self-inverse column
            coset = int(self.table[coset, col[x] if x in col else col[~x]])
        return coset

    def verify(self, pres: Presentation, subgroup: Sequence[Sequence[int]] = ()) -> bool:
        """Independent check: complete, bijective columns, every relator trivial everywhere."""
        if not self.closed:
            return False
        t = self.table
        n = self.count
        if t.shape != (n, len(self.columns)) or t.min() < 0 or t.max() >= n:
            return False
        col = {x: k for k, x in enumerate(self.columns)}
        for x, k in col.items():
            if np.unique(t[:, k]).size != n:
                return False
            if ~x in col:
                back = t[t[:, k], col[~x]]
            else:
                back = t[t[:, k], k]
            if not np.array_equal(back, np.arange(n)):
                return False
        start = np.arange(n)
        for w in pres.relators:
            cur = start
            for x in w:
                cur = t[cur, col[x]] if x in col else _inverse_column(t, col[~x])[cur]
            if not np.array_equal(cur, start):
                return False
        for w in subgroup:
            if self.trace(0, w) != 0:
                return False
        return True

    def checksum(self) -> str:
        return hashlib.sha256(np.ascontiguousarray(self.table, dtype="<i4").tobytes()).hexdigest()

    def dump(self, path) -> None:
        """Binary row dump: JSON header line, then little-endian int32 rows."""
        header = {
            "ngens": self.ngens,
            "columns": list(self.columns),
            "count": self.count,
            "checksum": self.checksum(),
        }
        with open(path, "wb") as fh:
            fh.write(json.dumps(header).encode() + b"\n")
            fh.write(np.ascontiguousarray(self.table, dtype="<i4").tobytes())

    @classmethod
    def load(cls, path) -> "CosetTable":
        with open(path, "rb") as fh:
            header = json.loads(fh.readline())
            raw = fh.read()
        cols = tuple(header["columns"])
        table = np.frombuffer(raw, dtype="<i4").reshape(header["count"], len(cols)).astype(np.int64)
        out = cls("closed", header["count"], header["ngens"], cols, table)
        if out.checksum() != header["checksum"]:
            raise CosetError("coset table checksum mismatch")
        return out


def _inverse_column(t: np.ndarray, k: int) -> np.ndarray:
    inv = np.empty(t.shape[0], dtype=t.dtype)
    inv[t[:, k]] = np.arange(t.shape[0])
    return inv


def todd_coxeter(
    pres: Presentation,
    subgroup: Sequence[Sequence[int]] = (),
    max_cosets: int = 2_000_000,
) -> CosetTable:
    """Enumerate the cosets of <subgroup> in the presented group.

    HLT strategy with lookahead and compaction when the table fills.  A run
    that cannot close within ``max_cosets`` live cosets comes back with status
    ``"capped"``, which says nothing about finiteness.
    """
    if max_cosets < 1:
        raise CosetError("max_cosets must be positive")
    invol = pres.involutions()
    columns: list[int] = []
    for g in range(pres.ngens):
        columns.append(g)
        if g not in invol:
            columns.append(~g)
    col = {x: k for k, x in enumerate(columns)}
    inv = [col[~x] if ~x in col else col[x] for x in columns]

    def to_cols(w):
        return [col[x] if x in col else col[~x] for x in w]

    rels = [to_cols(w) for w in pres.relators if not (len(w) == 2 and w[0] == w[1] and (w[0] if w[0] >= 0 else ~w[0]) in invol)]
    rel, roff = _flatten(rels)
    sub, soff = _flatten([to_cols(w) for w in subgroup])

    t0 = time.perf_counter()
    status, table, parent, state = _tc_kernel.enumerate_cosets(len(columns), inv, rel, roff, sub, soff, max_cosets)
    seconds = time.perf_counter() - t0
    if status == _tc_kernel.CAPPED:
        return CosetTable("capped", int(state[1]), pres.ngens, tuple(columns), None, int(state[0]) - 1, seconds)

    live = np.nonzero(parent[1 : int(state[0])] == np.arange(1, int(state[0])))[0] + 1
    renum = np.zeros(table.shape[0], dtype=np.int64)
    renum[live] = np.arange(live.size)
    closed = renum[table[live]]
    return CosetTable("closed", int(live.size), pres.ngens, tuple(columns), closed, int(state[0]) - 1, seconds)


def _flatten(words):
    flat: list[int] = []
    offs = [0]
    for w in words:
        flat += w
        offs.append(len(flat))
    return np.array(flat, dtype=np.int64), np.array(offs, dtype=np.int64)


def coset_permutations(ct: CosetTable) -> list[tuple[int, ...]]:
    """The permutation of the cosets induced by each generator (closed tables only)."""
    if not ct.closed:
        raise CosetError("table is not closed")
    col = {x: k for k, x in enumerate(ct.columns)}
    return [tuple(int(v) for v in ct.table[:, col[g]]) for g in range(ct.ngens)]


def rotate_gon(gon: Sequence[int], r: int) -> tuple[int, ...]:
    g = list(gon)
    return tuple(g[r:] + g[:r])


__all__ += ["invert_word", "reduce_word", "rotate_gon", "canonical_gon"]
