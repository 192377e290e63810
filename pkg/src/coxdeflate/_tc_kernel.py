"""HLT coset enumeration kernel on flat integer arrays.

Cosets are numbered from 1; 0 marks an undefined table entry.  ``inv`` maps
each column to the column of the inverse letter (a column is its own inverse
for involutory generators).  Everything here is written against plain numpy
arrays so that numba can compile it; without numba the same functions run
as ordinary (slow) Python.
"""

import numpy as np

try:
    from numba import njit
except ImportError:  # pragma: no cover - numba is a soft dependency
    njit = None

# status codes returned by enumerate_cosets
CLOSED = 0
CAPPED = 1


def _rep(parent, c):
    r = c
    while parent[r] != r:
        r = parent[r]
    while parent[c] != r:
        nxt = parent[c]
        parent[c] = r
        c = nxt
    return r


def _merge(parent, queue, qlen, k, l):
    k = _rep(parent, k)
    l = _rep(parent, l)
    if k == l:
        return qlen
    if l < k:
        k, l = l, k
    parent[l] = k
    queue[qlen] = l
    return qlen + 1


def _coincidence(table, inv, parent, queue, a, b):
    ncols = table.shape[1]
    qlen = _merge(parent, queue, 0, a, b)
    dead = 0
    i = 0
    while i < qlen:
        e = queue[i]
        i += 1
        dead += 1
        for x in range(ncols):
            f = table[e, x]
            if f == 0:
                continue
            ix = inv[x]
            if table[f, ix] == e:
                table[f, ix] = 0
            e1 = _rep(parent, e)
            f1 = _rep(parent, f)
            if table[e1, x] != 0:
                qlen = _merge(parent, queue, qlen, f1, table[e1, x])
            elif table[f1, ix] != 0:
                qlen = _merge(parent, queue, qlen, e1, table[f1, ix])
            else:
                table[e1, x] = f1
                table[f1, ix] = e1
    return dead


def _scan_and_fill(table, inv, parent, queue, c, word, lo, hi, state):
    """Trace word[lo:hi] from coset c, defining cosets to close gaps.

    state = [next_free, live, capped, dead_total].  Returns nothing; the
    capped flag is set when a definition would exceed the table.
    """
    f = c
    b = c
    i = lo
    j = hi - 1
    while True:
        while i <= j and table[f, word[i]] != 0:
            f = table[f, word[i]]
            i += 1
        if i > j:
            if f != b:
                state[3] += _coincidence(table, inv, parent, queue, f, b)
            return
        while j >= i and table[b, inv[word[j]]] != 0:
            b = table[b, inv[word[j]]]
            j -= 1
        if j < i:
            state[3] += _coincidence(table, inv, parent, queue, f, b)
            return
        if i == j:
            table[f, word[i]] = b
            table[b, inv[word[i]]] = f
            return
        # define a new coset f^word[i]
        d = state[0]
        if d >= table.shape[0]:
            state[2] = 1
            return
        state[0] = d + 1
        state[1] += 1
        parent[d] = d
        x = word[i]
        table[f, x] = d
        table[d, inv[x]] = f


def _compact(table, parent, c):
    """Renumber live cosets 1..m in order; returns (m, new index of c)."""
    n = table.shape[0]
    ncols = table.shape[1]
    newidx = np.zeros(n, dtype=table.dtype)
    m = 0
    for k in range(1, n):
        if parent[k] == k:
            m += 1
            newidx[k] = m
    for k in range(1, n):
        if parent[k] == k:
            row = newidx[k]
            for x in range(ncols):
                t = table[k, x]
                table[row, x] = newidx[t] if t != 0 else 0
    for k in range(m + 1, n):
        for x in range(ncols):
            table[k, x] = 0
    for k in range(n):
        parent[k] = k if k <= m else 0
    newc = m + 1
    for k in range(c, n):
        if newidx[k] > 0:
            newc = newidx[k]
            break
    return m, newc


def _lookahead(table, inv, parent, queue, rel, roff, state, start):
    """Scan every live coset from ``start`` against every relator without defining."""
    n = state[0]
    nrel = roff.shape[0] - 1
    for c in range(start, n):
        if parent[c] != c:
            continue
        for r in range(nrel):
            if parent[c] != c:
                break
            lo = roff[r]
            hi = roff[r + 1]
            f = c
            i = lo
            while i < hi and table[f, rel[i]] != 0:
                f = table[f, rel[i]]
                i += 1
            if i == hi:
                if f != c:
                    state[3] += _coincidence(table, inv, parent, queue, f, c)
                continue
            b = c
            j = hi - 1
            while j >= i and table[b, inv[rel[j]]] != 0:
                b = table[b, inv[rel[j]]]
                j -= 1
            if j < i:
                state[3] += _coincidence(table, inv, parent, queue, f, b)
            elif i == j:
                table[f, rel[i]] = b
                table[b, inv[rel[i]]] = f


def _make_room(table, inv, parent, queue, rel, roff, state, c):
    """Compact, then look ahead if still full.  Returns (ok, new index of c)."""
    m, c = _compact(table, parent, c)
    state[0] = m + 1
    if state[0] < table.shape[0]:
        return True, c
    _lookahead(table, inv, parent, queue, rel, roff, state, 1)
    m, c = _compact(table, parent, c)
    state[0] = m + 1
    state[1] = m
    return state[0] < table.shape[0], c


def _enumerate(table, inv, parent, queue, rel, roff, sub, soff, state):
    """HLT with lookahead and compaction.  state = [next_free, live, capped, dead]."""
    ncols = table.shape[1]
    nrel = roff.shape[0] - 1
    nsub = soff.shape[0] - 1
    parent[1] = 1
    state[0] = 2
    state[1] = 1
    for s in range(nsub):
        _scan_and_fill(table, inv, parent, queue, 1, sub, soff[s], soff[s + 1], state)
        if state[2]:
            return CAPPED
    c = 1
    while c < state[0]:
        if parent[c] != c:
            c += 1
            continue
        redo = False
        for r in range(nrel):
            if parent[c] != c:
                break
            _scan_and_fill(table, inv, parent, queue, c, rel, roff[r], roff[r + 1], state)
            if state[2]:
                state[2] = 0
                ok, c = _make_room(table, inv, parent, queue, rel, roff, state, c)
                if not ok:
                    state[2] = 1
                    return CAPPED
                redo = True
                break
        if redo:
            continue
        if parent[c] != c:
            c += 1
            continue
        for x in range(ncols):
            if table[c, x] != 0:
                continue
            if state[0] >= table.shape[0]:
                ok, c = _make_room(table, inv, parent, queue, rel, roff, state, c)
                if not ok:
                    state[2] = 1
                    return CAPPED
                redo = True
                break
            d = state[0]
            state[0] = d + 1
            state[1] += 1
            parent[d] = d
            table[c, x] = d
            table[d, inv[x]] = c
        if redo:
            continue
        c += 1
    return CLOSED


if njit is not None:
    _rep = njit(cache=True)(_rep)
    _merge = njit(cache=True)(_merge)
    _coincidence = njit(cache=True)(_coincidence)
    _scan_and_fill = njit(cache=True)(_scan_and_fill)
    _compact = njit(cache=True)(_compact)
    _lookahead = njit(cache=True)(_lookahead)
    _make_room = njit(cache=True)(_make_room)
    _enumerate = njit(cache=True)(_enumerate)


def enumerate_cosets(ncols, inv, rel, roff, sub, soff, max_cosets):
    """Run the enumeration; returns (status, table, parent, state).

    state holds [next free coset, live cosets, capped flag, dead cosets].
    """
    table = np.zeros((max_cosets + 2, ncols), dtype=np.int64)
    parent = np.zeros(max_cosets + 2, dtype=np.int64)
    queue = np.zeros(max_cosets + 2, dtype=np.int64)
    state = np.zeros(4, dtype=np.int64)
    status = _enumerate(
        table,
        np.asarray(inv, dtype=np.int64),
        parent,
        queue,
        np.asarray(rel, dtype=np.int64),
        np.asarray(roff, dtype=np.int64),
        np.asarray(sub, dtype=np.int64),
        np.asarray(soff, dtype=np.int64),
        state,
    )
    return int(status), table, parent, state
