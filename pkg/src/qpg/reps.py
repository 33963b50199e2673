"""Composite *-representations of C(SU(n+1)_q) by truncated weighted shifts.

A representation word ``[rho_1, ..., rho_m]`` stands for
``(rho_1 (x) ... (x) rho_m) Delta^{m-1}``.  Since
``Delta(u_ij) = sum_k u_ik (x) u_kj``, the image of ``u_ij`` is the (i, j)
entry of the product of the factor matrices ``rho_a(u)``, with entrywise
products taken as tensor products across slots.  ``rep_generator`` expands
that product path by path.

Indices ``i, j`` of the generators ``u_ij`` are 1-based throughout, matching
the usual matrix notation.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence, Union

import numpy as np
import scipy.sparse as sp

from .laurent import (
    LaurentOperator,
    TruncationSpec,
    identity,
    matrix_adjoint,
    matrix_interior_difference,
    matrix_product,
    tensor,
    zero,
)


@dataclass(frozen=True)
class DeformationParams:
    q: float
    c: float = 0.0
    n: int = 1

    def __post_init__(self):
        if not self.q > 1:
            raise ValueError(f"q must exceed 1, got {self.q}")
        if self.c < 0:
            raise ValueError(f"c must be nonnegative, got {self.c}")
        if self.n < 1:
            raise ValueError(f"n must be positive, got {self.n}")


@dataclass(frozen=True)
class Fundamental:
    """pi_i = pi_0 . phi_i: the SU(2)_q block acting on rows/columns {i, i+1}."""
    i: int


@dataclass(frozen=True)
class TorusChar:
    """Diagonal character u_jj -> t^{assign[j-1]}, off-diagonal entries -> 0."""
    assign: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        assign = tuple(tuple(int(v) for v in e) for e in self.assign)
        object.__setattr__(self, "assign", assign)
        if len({len(e) for e in assign}) > 1:
            raise ValueError("all exponent vectors of a torus character need the same length")

    @property
    def rank(self) -> int:
        return len(self.assign[0]) if self.assign else 0


@dataclass(frozen=True)
class Counit:
    """u_ij -> delta_ij; occupies no Fock factor."""


FactorSpec = Union[Fundamental, TorusChar, Counit]


@dataclass(frozen=True)
class RepWord:
    n: int
    factors: tuple

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))
        if self.n < 1:
            raise ValueError("n must be positive")
        if not self.factors:
            raise ValueError("a representation word needs at least one factor")
        for f in self.factors:
            if isinstance(f, Fundamental):
                if not 1 <= f.i <= self.n:
                    raise ValueError(f"fundamental index {f.i} outside 1..{self.n}")
            elif isinstance(f, TorusChar):
                if len(f.assign) != self.n + 1:
                    raise ValueError(f"torus character needs {self.n + 1} diagonal exponents")
            elif not isinstance(f, Counit):
                raise TypeError(f"unknown factor {f!r}")

    @property
    def torus_rank(self) -> int:
        return sum(f.rank for f in self.factors if isinstance(f, TorusChar))

    @property
    def fock_count(self) -> int:
        return sum(isinstance(f, Fundamental) for f in self.factors)

    def trunc(self, dim: Union[int, Sequence[int]], margin: int = 0) -> TruncationSpec:
        dims = (dim,) * self.fock_count if isinstance(dim, int) else tuple(dim)
        if len(dims) != self.fock_count:
            raise ValueError(f"word has {self.fock_count} Fock slots, got dims {dims}")
        return TruncationSpec(dims, torus_rank=self.torus_rank, interior_margin=margin)

    def __len__(self):
        return len(self.factors)


# torus characters

def tau(n: int) -> TorusChar:
    """tau_t(u_ij) = delta_ij t_j with t_{n+1} = (t_1...t_n)^{-1}; n torus variables."""
    rows = [tuple(int(a == j) for a in range(n)) for j in range(n)]
    rows.append((-1,) * n)
    return TorusChar(tuple(rows))


def tau_prime(n: int) -> TorusChar:
    """One torus variable on u_{n+1,n+1}; the other diagonal entries map to 1."""
    return TorusChar(tuple([(0,)] * n + [(1,)]))


def tau_double_prime(n: int) -> TorusChar:
    """u_{n+1,n+1} -> (t_1^2 t_2 ... t_n)^{-1}, other diagonal entries -> 1."""
    last = tuple([-2] + [-1] * (n - 1))
    return TorusChar(tuple([(0,) * n] * n + [last]))


# words

def standard_long_word(n: int) -> RepWord:
    letters = [k for top in range(1, n + 1) for k in range(top, 0, -1)]
    return RepWord(n, (tau(n), *(Fundamental(k) for k in letters)))


def sphere_word(n: int) -> RepWord:
    return RepWord(n, (tau_prime(n), *(Fundamental(k) for k in range(n, 0, -1))))


def projective_word(n: int) -> RepWord:
    return RepWord(n, tuple(Fundamental(k) for k in range(n, 0, -1)))


def nonstandard_word(n: int) -> RepWord:
    letters = list(range(n, 0, -1)) + list(range(2, n + 1))
    return RepWord(n, (tau(n), *(Fundamental(k) for k in letters)))


def rho_tilde_word(word: RepWord, n: int) -> RepWord:
    """Replace Fock slots n and n+1 (1-based) of the nonstandard word by counits."""
    if n < 2:
        raise ValueError("the middle-slot removal needs n >= 2")
    if word != nonstandard_word(n):
        raise ValueError("expected the nonstandard word for this n")
    fock_positions = [a for a, f in enumerate(word.factors) if isinstance(f, Fundamental)]
    drop = {fock_positions[n - 1], fock_positions[n]}
    return RepWord(n, tuple(Counit() if a in drop else f for a, f in enumerate(word.factors)))


# single-slot operators

@lru_cache(maxsize=None)
def _weights(q: float, dim: int):
    j = np.arange(dim, dtype=float)
    shift = np.sqrt(1.0 - q ** (-2.0 * j[1:]))
    diag = q ** (-j)
    return shift, diag


def alpha(q: float, dim: int) -> sp.csr_matrix:
    """alpha e_j = (1 - q^{-2j})^{1/2} e_{j-1}; alpha e_0 = 0."""
    shift, _ = _weights(q, dim)
    j = np.arange(1, dim)
    return sp.csr_matrix((shift, (j - 1, j)), shape=(dim, dim))


def alpha_star(q: float, dim: int) -> sp.csr_matrix:
    return alpha(q, dim).T.tocsr()


def gamma(q: float, dim: int) -> sp.csr_matrix:
    """gamma e_j = q^{-j} e_j."""
    _, diag = _weights(q, dim)
    return sp.diags(diag).tocsr()


def scaled_gamma(q: float, dim: int) -> sp.csr_matrix:
    """-q^{-1} gamma, the (1,2) entry of pi_0(u)."""
    _, diag = _weights(q, dim)
    return sp.diags(-(1.0 / q) * diag).tocsr()


def slot_identity(dim: int) -> sp.csr_matrix:
    return sp.identity(dim, format="csr")


def pi0_block(q: float, dim: int):
    """pi_0(u) = [[alpha, -q^{-1} gamma], [gamma, alpha^*]] truncated to ``dim`` levels."""
    if dim < 2:
        raise ValueError("need at least two Fock levels")
    return [[alpha(q, dim), scaled_gamma(q, dim)], [gamma(q, dim), alpha_star(q, dim)]]


def factor_matrix(spec: FactorSpec, n: int, q: float, dim: int):
    """The (n+1)x(n+1) matrix rho(u) for one factor of a word.

    Entries are ``None`` for zero.  Otherwise: a sparse slot matrix for
    ``Fundamental``, an exponent tuple for ``TorusChar``, and ``1.0`` for
    ``Counit``.
    """
    N = n + 1
    out = [[None] * N for _ in range(N)]
    if isinstance(spec, Fundamental):
        block = pi0_block(q, dim)
        i = spec.i
        for r in range(1, N + 1):
            for c in range(1, N + 1):
                if {r, c} <= {i, i + 1}:
                    out[r - 1][c - 1] = block[r - i][c - i]
                elif r == c:
                    out[r - 1][c - 1] = slot_identity(dim)
    elif isinstance(spec, TorusChar):
        for r in range(N):
            out[r][r] = spec.assign[r]
    elif isinstance(spec, Counit):
        for r in range(N):
            out[r][r] = 1.0
    else:
        raise TypeError(f"unknown factor {spec!r}")
    return out


def _dims_for(word: RepWord, dim) -> tuple[int, ...]:
    return (dim,) * word.fock_count if isinstance(dim, int) else tuple(dim)


def _paths(mats, i: int, j: int):
    """All index paths i = k_0 -> k_1 -> ... -> k_m = j with nonzero entries."""
    m = len(mats)
    N = len(mats[0])
    # reach[a]: rows at factor a from which column j is reachable
    reach = [set() for _ in range(m + 1)]
    reach[m] = {j}
    for a in range(m - 1, -1, -1):
        reach[a] = {r for r in range(N) if any(mats[a][r][c] is not None for c in reach[a + 1])}
    if i not in reach[0]:
        return

    def walk(a, row, acc):
        if a == m:
            yield acc
            return
        for c in sorted(reach[a + 1]):
            entry = mats[a][row][c]
            if entry is not None:
                yield from walk(a + 1, c, acc + [entry])

    yield from walk(0, i, [])


def rep_generator(word: RepWord, i: int, j: int, q: float, dim, margin: int = 0) -> LaurentOperator:
    """Image of u_ij under (rho_1 (x) ... (x) rho_m) Delta^{m-1}."""
    N = word.n + 1
    if not (1 <= i <= N and 1 <= j <= N):
        raise IndexError(f"generator index ({i}, {j}) outside 1..{N}")
    dims = _dims_for(word, dim)
    trunc = word.trunc(dims, margin)
    mats = []
    fock = iter(dims)
    offsets = []
    off = 0
    for f in word.factors:
        if isinstance(f, Fundamental):
            mats.append(factor_matrix(f, word.n, q, next(fock)))
        else:
            mats.append(factor_matrix(f, word.n, q, 2))
        offsets.append(off)
        if isinstance(f, TorusChar):
            off += f.rank
    terms: dict = {}
    for path in _paths(mats, i - 1, j - 1):
        exponent = [0] * trunc.torus_rank
        ops = []
        for f, o, entry in zip(word.factors, offsets, path):
            if isinstance(f, Fundamental):
                ops.append(entry)
            elif isinstance(f, TorusChar):
                for k, v in enumerate(entry):
                    exponent[o + k] += v
        e = tuple(exponent)
        term = tensor(ops)
        terms[e] = terms[e] + term if e in terms else term
    return LaurentOperator._wrap(trunc, terms)


def rep_matrix(word: RepWord, q: float, dim, margin: int = 0):
    N = word.n + 1
    return [[rep_generator(word, i, j, q, dim, margin) for j in range(1, N + 1)] for i in range(1, N + 1)]


# generator families

def sphere_generators(n: int, q: float, dim) -> list[LaurentOperator]:
    """Images of u_{n+1,m}, m = 1..n+1, under the sphere word."""
    word = sphere_word(n)
    return [rep_generator(word, n + 1, m, q, dim) for m in range(1, n + 2)]


def projective_generators(n: int, q: float, dim):
    """Z[i][j] = image of u*_{n+1,i} u_{n+1,j} under the projective word (0-based lists)."""
    word = projective_word(n)
    U = [rep_generator(word, n + 1, m, q, dim) for m in range(1, n + 2)]
    return [[U[i].adjoint() @ U[j] for j in range(n + 1)] for i in range(n + 1)]


def nonstandard_generators(n: int, q: float, c: float, dim, word: RepWord | None = None):
    """x_i = sqrt(c) u_{1,i} + u_{n+1,i} and Y[i][j] = x_i^* x_j.

    Y is evaluated through the bilinear expansion
    ``c A_i^*A_j + sqrt(c)(A_i^*B_j + B_i^*A_j) + B_i^*B_j`` so that the
    coefficient c enters exactly rather than as sqrt(c)**2.
    """
    if c < 0:
        raise ValueError("c must be nonnegative")
    word = nonstandard_word(n) if word is None else word
    rc = math.sqrt(c)
    A = [rep_generator(word, 1, m, q, dim) for m in range(1, n + 2)]
    B = [rep_generator(word, n + 1, m, q, dim) for m in range(1, n + 2)]
    x = [rc * a + b for a, b in zip(A, B)]
    As = [a.adjoint() for a in A]
    Bs = [b.adjoint() for b in B]
    Y = []
    for i in range(n + 1):
        row = []
        for j in range(n + 1):
            row.append(c * (As[i] @ A[j]) + rc * (As[i] @ B[j] + Bs[i] @ A[j]) + Bs[i] @ B[j])
        Y.append(row)
    return x, Y


# closed forms

def _lead(op, length: int, one) -> list:
    # op (x) 1 (x) ... (x) 1 with `length` factors in total; empty when length == 0
    return [] if length <= 0 else [op] + [one] * (length - 1)


def closed_form_sphere_image(n: int, i: int, q: float, dim: int) -> LaurentOperator:
    """t (x) gamma^{(x)(n+1-i)} (x) alpha^* (x) 1^{(x)(i-2)}; gamma^{(x)n} when i = 1."""
    if not 1 <= i <= n + 1:
        raise IndexError(f"i must lie in 1..{n + 1}")
    g, a_s, one = gamma(q, dim), alpha_star(q, dim), slot_identity(dim)
    ops = [g] * n if i == 1 else [g] * (n + 1 - i) + [a_s] + [one] * (i - 2)
    trunc = TruncationSpec((dim,) * n, torus_rank=1)
    return LaurentOperator._wrap(trunc, {(1,): tensor(ops)})


def closed_form_nonstandard_image(n: int, i: int, q: float, dim: int) -> LaurentOperator:
    """Image of u_{n+1,i} under the nonstandard word, written as three explicit sums.

    Term one carries (1 - delta_{n+1,i}); the middle sum over k runs from
    n+1-i to n-2 and carries (1 - delta_{1,i})(1 - delta_{2,i}); the last
    term carries (1 - delta_{1,i}).  Every summand is t_{n+1} tensored with
    2n-1 slot operators.
    """
    if n < 2:
        raise ValueError("closed form is stated for n >= 2")
    if not 1 <= i <= n + 1:
        raise IndexError(f"i must lie in 1..{n + 1}")
    g, a, a_s = gamma(q, dim), alpha(q, dim), alpha_star(q, dim)
    mg, one = scaled_gamma(q, dim), slot_identity(dim)
    summands = []
    if i != n + 1:
        summands.append([g] * (n - i) + _lead(a_s, i - 1, one) + [one] * (i - 1)
                        + _lead(g, n + 1 - i, one))
    if i not in (1, 2):
        for k in range(n + 1 - i, n - 1):
            summands.append([g] * k + [a_s] + [one] * (n - k - 1) + [one] * (n - k - 2) + [a_s]
                            + [mg] * (k - (n + 1) + i) + _lead(a, n + 1 - i, one))
    if i != 1:
        summands.append([g] * (n - 1) + [a_s] + [mg] * (i - 2) + _lead(a, n + 1 - i, one))
    for ops in summands:
        assert len(ops) == 2 * n - 1, (n, i, len(ops))
    trunc = TruncationSpec((dim,) * (2 * n - 1), torus_rank=n)
    total = None
    for ops in summands:
        m = tensor(ops)
        total = m if total is None else total + m
    return LaurentOperator._wrap(trunc, {(-1,) * n: total})


# relation checks

def unitarity_defect(U, margin: int, degree: int | None = None) -> tuple[float, float]:
    """Interior deviations of U^*U and UU^* from the identity matrix.

    Products are formed after compressing every entry to the Fock levels the
    interior block can reach (interior levels plus the per-slot shift
    degree), which reproduces the interior entries of the full products
    exactly.  ``degree`` defaults to the measured shift degree.
    """
    if degree is None:
        degree = max((max(u.shift_degree(), default=0) for row in U for u in row), default=0)
    dims = U[0][0].trunc.fock_dims
    levels = tuple(min(d, d - margin + degree) for d in dims)
    inner = {l - d + margin for l, d in zip(levels, dims)}
    if levels != dims and len(inner) == 1:
        U = [[u.compress(levels) for u in row] for row in U]
        margin = inner.pop()
    t = U[0][0].trunc
    N = len(U)
    eye = [[identity(t) if r == c else zero(t) for c in range(N)] for r in range(N)]
    Us = matrix_adjoint(U)
    left = matrix_interior_difference(matrix_product(Us, U), eye, margin)
    right = matrix_interior_difference(matrix_product(U, Us), eye, margin)
    return left, right


def word_unitarity_defect(word: RepWord, q: float, dim: int, margin: int | None = None):
    """``unitarity_defect`` for rep(u) under ``word``, building one entry at a time.

    Every Fock slot of a path term holds one of alpha, alpha^*, gamma or 1,
    so entries have shift degree at most 1 and can be compressed as soon as
    they are built.
    """
    margin = len(word) if margin is None else margin
    dims = _dims_for(word, dim)
    levels = tuple(min(d, d - margin + 1) for d in dims)
    N = word.n + 1
    U = []
    for i in range(1, N + 1):
        row = []
        for j in range(1, N + 1):
            u = rep_generator(word, i, j, q, dims)
            row.append(u.compress(levels) if levels != dims else u)
        U.append(row)
    inner = margin if levels == dims else 1
    return unitarity_defect(U, inner, degree=1)
