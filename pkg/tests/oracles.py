"""Reference computations written independently of the package internals.

Nothing here calls into loopcoprod except to build groups from tables.
"""

from __future__ import annotations

import math
from itertools import combinations, permutations, product

import numpy as np

from loopcoprod.groups import from_table

# -- coproduct formulas, transcribed case by case -------------------------------


def sphere_terms(k):
    """u^(i-1) (x) u^(k-i) for i = 1..k, as {(left, right): coeff}."""
    out = {}
    for i in range(1, k + 1):
        key = (i - 1, k - i)
        out[key] = out.get(key, 0) + 1
    return out


def circle_table(variant, k):
    """The four displayed piecewise formulas on H_0(Omega S^1).

    The lambda rows for negative k are printed with x^(k-1) in the right
    leg; degree bookkeeping forces x^(k-l), which is what we use.
    """
    terms = {}

    def add(l, sign):
        terms[(l, k - l)] = terms.get((l, k - l), 0) + sign

    if variant == "vee+":
        if k > 0:
            for l in range(1, k + 1):
                add(l, 1)
        elif k < 0:
            for l in range(k + 1, 0 + 1):
                add(l, -1)
    elif variant == "vee-":
        if k > 0:
            for l in range(0, k - 1 + 1):
                add(l, 1)
        elif k < 0:
            for l in range(k, -1 + 1):
                add(l, -1)
    elif variant == "lambda+":
        if k >= 0:
            for l in range(0, k + 1):
                add(l, 1)
        else:
            for l in range(k + 1, -1 + 1):
                add(l, -1)
    elif variant == "lambda-":
        if k > 0:
            for l in range(1, k - 1 + 1):
                add(l, 1)
        else:
            for l in range(k, 0 + 1):
                add(l, -1)
    else:
        raise ValueError(variant)
    return {key: c for key, c in terms.items() if c}


def brute_coproduct(G, g, k):
    """Double sum over (i, h) written out as a flat term dict."""
    out = {}
    for i in range(k):
        for h in range(G.order):
            hinv = next(x for x in range(G.order) if G.table[h][x] == 0)
            key = ((G.table[g][hinv], i), (h, k - 1 - i))
            out[key] = out.get(key, 0) + 1
    return out


# -- small groups -------------------------------------------------------------


def _table_from_elements(elements, mul):
    index = {e: i for i, e in enumerate(elements)}
    return [[index[mul(a, b)] for b in elements] for a in elements]


def direct_product_table(m1, m2):
    elems = list(product(range(m1), range(m2)))
    return _table_from_elements(elems, lambda a, b: ((a[0] + b[0]) % m1, (a[1] + b[1]) % m2))


def elementary_abelian_table(rank):
    elems = list(product(range(2), repeat=rank))
    return _table_from_elements(elems, lambda a, b: tuple((x + y) % 2 for x, y in zip(a, b)))


def dihedral_table(m):
    """Symmetries of the m-gon as permutations of its vertices."""
    rot = tuple((i + 1) % m for i in range(m))
    ref = tuple((-i) % m for i in range(m))

    def comp(p, q):
        return tuple(p[q[i]] for i in range(m))

    elems = {tuple(range(m))}
    frontier = list(elems)
    while frontier:
        nxt = []
        for p in frontier:
            for s in (rot, ref):
                r = comp(p, s)
                if r not in elems:
                    elems.add(r)
                    nxt.append(r)
        frontier = nxt
    return _table_from_elements(sorted(elems), comp)


def symmetric_table(m):
    elems = sorted(permutations(range(m)))
    return _table_from_elements(elems, lambda p, q: tuple(p[q[i]] for i in range(m)))


def groups_up_to_order_8():
    """One representative of every non-trivial group of order <= 8."""
    from loopcoprod.groups import cyclic, quaternion

    gs = [cyclic(m) for m in range(2, 9)]
    gs.append(from_table(elementary_abelian_table(2), "Z2xZ2"))
    gs.append(from_table(symmetric_table(3), "S3"))
    gs.append(from_table(direct_product_table(4, 2), "Z4xZ2"))
    gs.append(from_table(elementary_abelian_table(3), "Z2^3"))
    gs.append(from_table(dihedral_table(4), "D4"))
    gs.append(quaternion(8))
    return gs


# -- integer linear algebra ---------------------------------------------------


def _det(m):
    n = len(m)
    if n == 0:
        return 1
    if n == 1:
        return m[0][0]
    total = 0
    for j in range(n):
        if m[0][j]:
            minor = [row[:j] + row[j + 1 :] for row in m[1:]]
            total += (-1) ** j * m[0][j] * _det(minor)
    return total


def determinantal_divisors(a):
    """D_k = gcd of all k x k minors, for k = 1..min(shape); stops at the first zero."""
    rows, cols = len(a), len(a[0]) if a else 0
    out = []
    for k in range(1, min(rows, cols) + 1):
        g = 0
        for rs in combinations(range(rows), k):
            for cs in combinations(range(cols), k):
                g = math.gcd(g, _det([[a[r][c] for c in cs] for r in rs]))
        out.append(g)
    return out


def diagonalize(a):
    """Some diagonal form of an integer matrix (not necessarily a divisibility chain).

    Dense int64 elimination with smallest-entry pivoting; asserts that no
    entry gets anywhere near overflow.
    """
    A = np.array(a, dtype=np.int64)
    diag = []
    while A.size and A.any():
        nz = np.argwhere(A)
        i, j = nz[np.argmin(np.abs(A[A != 0]))]
        A[[0, i]] = A[[i, 0]]
        A[:, [0, j]] = A[:, [j, 0]]
        while True:
            p = A[0, 0]
            A[1:] -= np.outer(A[1:, 0] // p, A[0])
            A[:, 1:] -= np.outer(A[:, 0], A[0, 1:] // p)
            assert np.abs(A).max() < 2**40
            rest = np.concatenate([A[1:, 0], A[0, 1:]])
            if not rest.any():
                break
            # a remainder is smaller than |p|: make it the pivot
            col_nz = np.flatnonzero(A[1:, 0])
            row_nz = np.flatnonzero(A[0, 1:])
            best = min(
                [(abs(A[r + 1, 0]), "r", r + 1) for r in col_nz] + [(abs(A[0, c + 1]), "c", c + 1) for c in row_nz]
            )
            _, kind, idx = best
            if kind == "r":
                A[[0, idx]] = A[[idx, 0]]
            else:
                A[:, [0, idx]] = A[:, [idx, 0]]
        diag.append(int(abs(A[0, 0])))
        A = A[1:, 1:]
    return diag


def prime_power_parts(values):
    """Sorted prime powers of the cyclic summands Z/v for v > 1."""
    out = []
    for v in values:
        p = 2
        while v > 1:
            e = 0
            while v % p == 0:
                v //= p
                e += 1
            if e:
                out.append(p**e)
            p += 1
    return sorted(out)


def dense_bar_homology(G, top):
    """(rank, prime-power torsion) of H_d(G; Z) for d = 1..top.

    Builds the normalized bar complex with its own indexing and takes
    every column, then diagonalizes densely.
    """
    nonid = [g for g in range(G.order) if g != 0]
    bases = [[()]] + [list(product(nonid, repeat=d)) for d in range(1, top + 2)]
    index = [{t: i for i, t in enumerate(b)} for b in bases]
    mats = []
    for d in range(1, top + 2):
        M = np.zeros((len(bases[d - 1]), len(bases[d])), dtype=np.int64)
        for j, t in enumerate(bases[d]):
            faces = [(t[1:], 1)]
            for i in range(d - 1):
                merged = G.table[t[i]][t[i + 1]]
                faces.append((t[:i] + (merged,) + t[i + 2 :], (-1) ** (i + 1)))
            faces.append((t[:-1], (-1) ** d))
            for face, s in faces:
                if 0 not in face:
                    M[index[d - 1][face], j] += s
        mats.append(M)
    diags = [diagonalize(M) for M in mats]
    ranks = [0] + [sum(1 for x in dg if x) for dg in diags]
    out = []
    for d in range(1, top + 1):
        free = len(bases[d]) - ranks[d] - ranks[d + 1]
        out.append((free, prime_power_parts(x for x in diags[d] if x > 1)))
    return out
