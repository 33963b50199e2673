"""Independent reference computations used by the tests.

Nothing here calls the library's arithmetic: weights are evaluated from the
closed formula, composite representations are formed as products of dense
block operator matrices, and groupoid arrows are enumerated by filtering a
box of candidates against the defining conditions.
"""
from __future__ import annotations

import itertools
import math

import numpy as np

INF = math.inf


def dense_alpha(q, D):
    a = np.zeros((D, D))
    for j in range(1, D):
        a[j - 1, j] = math.sqrt(1 - q ** (-2 * j))
    return a


def dense_gamma(q, D):
    return np.diag([q ** (-j) for j in range(D)])


def evaluate(op, t):
    """Dense matrix of a Laurent operator at the torus point t."""
    out = np.zeros((op.trunc.dim, op.trunc.dim), dtype=complex)
    for e, m in op.terms.items():
        out += np.prod([tk ** ek for tk, ek in zip(t, e)]) * m.toarray()
    return out


def _letter_entries(f, n, q, D, t):
    # (n+1)x(n+1) array of scalars or DxD dense blocks (None means this slot has no Fock space)
    name = type(f).__name__
    N = n + 1
    if name == "Fundamental":
        ent = [[np.eye(D) * (r == c) for c in range(N)] for r in range(N)]
        a, g = dense_alpha(q, D), dense_gamma(q, D)
        i = f.i - 1
        ent[i][i], ent[i][i + 1] = a, -g / q
        ent[i + 1][i], ent[i + 1][i + 1] = g, a.T
        return ent, D
    if name == "TorusChar":
        vals = [np.prod([tk ** ek for tk, ek in zip(t, e)]) for e in f.assign]
        return [[vals[r] if r == c else 0.0 for c in range(N)] for r in range(N)], None
    return [[1.0 if r == c else 0.0 for c in range(N)] for r in range(N)], None


def dense_rep(word, q, D, t):
    """All (i, j) images as dense matrices, from the product of block operator matrices."""
    n, N = word.n, word.n + 1
    letters = []
    torus_offset = 0
    for f in word.factors:
        if type(f).__name__ == "TorusChar":
            letters.append(_letter_entries(f, n, q, D, t[torus_offset:torus_offset + f.rank]))
            torus_offset += f.rank
        else:
            letters.append(_letter_entries(f, n, q, D, t))
    dims = [d for _, d in letters if d is not None]
    H = int(np.prod(dims)) if dims else 1
    total = np.eye(N * H, dtype=complex)
    slot = 0
    for ent, d in letters:
        big = np.zeros((N * H, N * H), dtype=complex)
        for r in range(N):
            for c in range(N):
                if d is None:
                    block = ent[r][c] * np.eye(H)
                else:
                    left = int(np.prod(dims[:slot])) if slot else 1
                    right = int(np.prod(dims[slot + 1:])) if slot + 1 < len(dims) else 1
                    block = np.kron(np.kron(np.eye(left), ent[r][c]), np.eye(right))
                big[r * H:(r + 1) * H, c * H:(c + 1) * H] = block
        if d is not None:
            slot += 1
        total = total @ big
    return {(r + 1, c + 1): total[r * H:(r + 1) * H, c * H:(c + 1) * H] for r in range(N) for c in range(N)}


# groupoid arrows by brute force

def _box(p, m, K, B, span):
    levels = list(range(K)) + [INF]
    for aux in itertools.product(range(-span, span + 1), repeat=p):
        for x in itertools.product(range(-span, span + 1), repeat=m):
            for w in itertools.product(levels, repeat=m):
                yield aux, x, w


def _lands(x, w, K):
    return all(wi == INF or 0 <= wi + xi < K for xi, wi in zip(x, w))


def toeplitz_arrows(m, K, B):
    return {(aux, x, w) for aux, x, w in _box(0, m, K, B, B) if _lands(x, w, K)}


def prefix_quotient_arrows(m, K, B, with_z):
    """Canonical arrows: members of the subgroupoid, then later coordinates set to INF."""
    out = set()
    for aux, x, w in _box(1 if with_z else 0, m, K, B, (m + 1) * B):
        if not _lands(x, w, K):
            continue
        z = aux[0] if with_z else 0
        if abs(z) > B:
            continue
        ok = True
        for i in range(m):
            if w[i] == INF:
                if x[i] != -z - sum(x[:i]) or any(x[i + 1:]):
                    ok = False
            elif abs(x[i]) > B:
                ok = False
        if not ok:
            continue
        first = next((i for i in range(m) if w[i] == INF), m)
        out.add((aux, x, w[:first] + (INF,) * (m - first)))
    return out


def podles_arrows(K, B):
    return {((), x, w) for _, x, w in _box(0, 2, K, B, B)
            if x[0] == x[1] and INF in w and _lands(x, w, K)}
