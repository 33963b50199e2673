"""Ordered monomials in the sphere and projective generators, and a numerical
linear-independence test on their truncated interiors."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components

from .laurent import LaurentOperator, identity, interior_indices


def _power(op: LaurentOperator, k: int, one: LaurentOperator) -> LaurentOperator:
    out = one
    for _ in range(k):
        out = out @ op
    return out


def check_p_indices(n: int, i: Sequence[int], j: Sequence[int], k: Sequence[int]) -> None:
    if len(i) != n or len(k) != n or len(j) != n + 1:
        raise ValueError(f"need len(i) = len(k) = {n} and len(j) = {n + 1}")
    if any(v < 0 for v in (*i, *k, *j[:n])):
        raise ValueError("i, k and j_1..j_n must be nonnegative")
    for m in range(n):
        if i[m] * k[m] != 0:
            raise ValueError(f"i_{m + 1} k_{m + 1} must vanish, got {i[m]} * {k[m]}")


def monomial_p(n: int, i: Sequence[int], j: Sequence[int], k: Sequence[int],
               gens: Sequence[LaurentOperator]) -> LaurentOperator:
    """(u*_{n+1,n})^{i_n}...(u*_{n+1,1})^{i_1} y_1^{j_1}...y_{n+1}^{j_{n+1}} u_{n+1,1}^{k_1}...u_{n+1,n}^{k_n}.

    ``gens[m-1]`` is the image of u_{n+1,m}; y_m = u_{n+1,m} u*_{n+1,m} for
    m <= n, and y_{n+1}^{j} is u_{n+1,n+1}^j (j >= 0) or (u*_{n+1,n+1})^{-j}.
    """
    check_p_indices(n, i, j, k)
    one = identity(gens[0].trunc)
    out = one
    for m in range(n, 0, -1):
        out = out @ _power(gens[m - 1].adjoint(), i[m - 1], one)
    for m in range(1, n + 1):
        y = gens[m - 1] @ gens[m - 1].adjoint()
        out = out @ _power(y, j[m - 1], one)
    last = gens[n] if j[n] >= 0 else gens[n].adjoint()
    out = out @ _power(last, abs(j[n]), one)
    for m in range(1, n + 1):
        out = out @ _power(gens[m - 1], k[m - 1], one)
    return out


def check_P_indices(n: int, r: Sequence[int], iseq: Sequence[int], jseq: Sequence[int]) -> None:
    if len(r) != n:
        raise ValueError(f"need {n} exponents r")
    if any(v < 0 for v in r):
        raise ValueError("r must be nonnegative")
    if len(iseq) != len(jseq):
        raise ValueError("i- and j-sequences need equal length")
    for v in (*iseq, *jseq):
        if not 1 <= v <= n + 1:
            raise ValueError(f"index {v} outside 1..{n + 1}")
    if any(a < b for a, b in zip(iseq, iseq[1:])):
        raise ValueError("i-sequence must be nonincreasing")
    if any(a > b for a, b in zip(jseq, jseq[1:])):
        raise ValueError("j-sequence must be nondecreasing")
    if set(iseq) & set(jseq):
        raise ValueError("i- and j-index sets must be disjoint")


def monomial_P(n: int, r: Sequence[int], iseq: Sequence[int], jseq: Sequence[int], Z) -> LaurentOperator:
    """z_11^{r_1}...z_nn^{r_n} z_{i_1 j_1}...z_{i_m j_m} with Z[i-1][j-1] = z_ij."""
    check_P_indices(n, r, iseq, jseq)
    one = identity(Z[0][0].trunc)
    out = one
    for a in range(n):
        out = out @ _power(Z[a][a], r[a], one)
    for a, b in zip(iseq, jseq):
        out = out @ Z[a - 1][b - 1]
    return out


@dataclass(frozen=True)
class PIndex:
    i: tuple[int, ...]
    j: tuple[int, ...]
    k: tuple[int, ...]

    @property
    def raising_length(self) -> int:
        """Number of non-adjoint generator factors (those containing alpha^*)."""
        n = len(self.i)
        return sum(self.k) + sum(self.j[:n]) + max(self.j[n], 0)


@dataclass(frozen=True)
class BigPIndex:
    r: tuple[int, ...]
    iseq: tuple[int, ...]
    jseq: tuple[int, ...]

    @property
    def raising_length(self) -> int:
        return sum(self.r) + len(self.iseq)


def p_family(n: int, bound: int) -> list[PIndex]:
    """All p-indices with i_m, j_m, k_m <= bound (m <= n), |j_{n+1}| <= bound, i_m k_m = 0."""
    pairs = [(a, b) for a in range(bound + 1) for b in range(bound + 1) if a * b == 0]
    out = []
    for ik in itertools.product(pairs, repeat=n):
        i = tuple(a for a, _ in ik)
        k = tuple(b for _, b in ik)
        for jj in itertools.product(range(bound + 1), repeat=n):
            for last in range(-bound, bound + 1):
                out.append(PIndex(i, jj + (last,), k))
    return out


def P_family(n: int, bound: int) -> list[BigPIndex]:
    """All P-indices with r_a <= bound and sequence length m <= bound."""
    seqs = [((), ())]
    for m in range(1, bound + 1):
        for iseq in itertools.combinations_with_replacement(range(n + 1, 0, -1), m):
            for jseq in itertools.combinations_with_replacement(range(1, n + 2), m):
                if not set(iseq) & set(jseq):
                    seqs.append((tuple(iseq), tuple(jseq)))
    return [BigPIndex(tuple(r), a, b)
            for r in itertools.product(range(bound + 1), repeat=n) for a, b in seqs]


def _flatten(ops: Sequence[LaurentOperator], margin: int) -> sp.csr_matrix:
    # one row per operator; columns index (exponent, interior row, interior col)
    trunc = ops[0].trunc
    idx = interior_indices(trunc, margin)
    block = len(idx) ** 2
    exps = sorted({e for op in ops for e in op.exponents})
    where = {e: t for t, e in enumerate(exps)}
    rows, cols, vals = [], [], []
    for r, op in enumerate(ops):
        if op.trunc.fock_dims != trunc.fock_dims or op.trunc.torus_rank != trunc.torus_rank:
            raise ValueError("operators must share a truncation")
        for e, m in op.terms.items():
            sub = m[idx][:, idx].tocoo()
            rows.append(np.full(sub.nnz, r))
            cols.append(where[e] * block + sub.row * len(idx) + sub.col)
            vals.append(sub.data)
    if not rows:
        return sp.csr_matrix((len(ops), max(1, len(exps)) * block))
    return sp.csr_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(len(ops), max(1, len(exps)) * block))


def gram_rank(ops: Sequence[LaurentOperator], margin: int, tol: float = 1e-10) -> tuple[int, float]:
    """Numerical rank of the interior-flattened operators.

    Rows are normalized to unit length, then split into groups that share
    no column support (the matrix is block diagonal across groups), and each
    group is decomposed by a dense SVD.  Singular values below
    ``tol * largest`` are dropped.  Returns the rank and the smallest kept
    singular value.
    """
    V = _flatten(ops, margin)
    norms = np.sqrt(np.asarray(V.multiply(V.conj()).sum(axis=1)).ravel().real)
    nonzero = norms > 0
    V = sp.diags(np.where(nonzero, 1.0 / np.where(nonzero, norms, 1.0), 0.0)) @ V
    V = V.tocsr()
    pattern = (abs(V) @ abs(V).T).tocsr()
    ncomp, labels = connected_components(pattern, directed=False)
    svals = []
    for comp in range(ncomp):
        members = np.flatnonzero((labels == comp) & nonzero)
        if members.size == 0:
            continue
        sub = V[members]
        used = np.unique(sub.indices)
        svals.append(np.linalg.svd(sub[:, used].toarray(), compute_uv=False))
    if not svals:
        return 0, 0.0
    s = np.concatenate(svals)
    kept = s[s > tol * s.max()]
    return int(kept.size), float(kept.min()) if kept.size else 0.0
