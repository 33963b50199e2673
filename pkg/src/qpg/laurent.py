"""Torus-graded sparse operators on truncated Fock tensor products.

An element of C(T^p) (x) B(l^2(Z_>=^m)) is stored as a finite map from
integer exponent vectors to sparse matrices acting on the tensor product of
truncated Fock factors C^{D_1} (x) ... (x) C^{D_m}.  Basis vectors are
addressed by multi-indices in row-major order, which is the ordering
produced by ``scipy.sparse.kron``.
"""
from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass
from functools import reduce
from types import MappingProxyType
from typing import IO, Iterable, Mapping, Sequence, Union

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import svds

FORMAT_VERSION = 1

Exponent = tuple[int, ...]


class TruncationMismatch(ValueError):
    """Operands live on different truncated spaces."""


class OperatorFormatError(ValueError):
    """Malformed serialized operator; ``location`` names the offending field."""

    def __init__(self, location: str, message: str):
        super().__init__(f"{location}: {message}")
        self.location = location


@dataclass(frozen=True)
class TruncationSpec:
    """Per-factor Fock cutoffs, torus rank and default interior margin."""

    fock_dims: tuple[int, ...]
    torus_rank: int = 0
    interior_margin: int = 0

    def __post_init__(self):
        dims = tuple(int(d) for d in self.fock_dims)
        object.__setattr__(self, "fock_dims", dims)
        if any(d < 2 for d in dims):
            raise ValueError(f"every Fock cutoff must be >= 2, got {dims}")
        if self.torus_rank < 0:
            raise ValueError("torus_rank must be nonnegative")
        if self.interior_margin < 0:
            raise ValueError("interior_margin must be nonnegative")
        if dims and self.interior_margin >= min(dims):
            raise ValueError("interior_margin must be smaller than every Fock cutoff")

    @property
    def dim(self) -> int:
        return math.prod(self.fock_dims)

    @property
    def n_slots(self) -> int:
        return len(self.fock_dims)

    def replace(self, **changes) -> "TruncationSpec":
        fields = dict(fock_dims=self.fock_dims, torus_rank=self.torus_rank,
                      interior_margin=self.interior_margin)
        fields.update(changes)
        return TruncationSpec(**fields)


def _canonical_matrix(m) -> sp.csr_matrix:
    m = sp.csr_matrix(m)
    m.sum_duplicates()
    m.eliminate_zeros()
    m.sort_indices()
    return m


class LaurentOperator:
    """Finite sum of torus monomials tensored with sparse Fock-space matrices.

    Instances are treated as immutable: arithmetic always returns new objects
    and ``terms`` is exposed read-only.  Terms whose matrix vanishes are never
    stored, so the zero operator has no terms.
    """

    __slots__ = ("trunc", "_terms")

    def __init__(self, trunc: TruncationSpec, terms: Mapping[Sequence[int], object] | None = None):
        self.trunc = trunc
        dim = trunc.dim
        canon: dict[Exponent, sp.csr_matrix] = {}
        for e, m in (terms or {}).items():
            e = tuple(int(v) for v in e)
            if len(e) != trunc.torus_rank:
                raise TruncationMismatch(
                    f"exponent {e} has length {len(e)}, expected {trunc.torus_rank}")
            m = _canonical_matrix(sp.csr_matrix(m, copy=True))
            if m.shape != (dim, dim):
                raise TruncationMismatch(f"matrix shape {m.shape} does not match {(dim, dim)}")
            if e in canon:
                m = _canonical_matrix(canon[e] + m)
            if m.nnz:
                canon[e] = m
            else:
                canon.pop(e, None)
        self._terms = dict(sorted(canon.items()))

    @classmethod
    def _wrap(cls, trunc: TruncationSpec, terms: dict) -> "LaurentOperator":
        # internal constructor: matrices are freshly built and owned by the result
        out = object.__new__(cls)
        out.trunc = trunc
        clean = {}
        for e, m in terms.items():
            m = _canonical_matrix(m)
            if m.nnz:
                clean[e] = m
        out._terms = dict(sorted(clean.items()))
        return out

    @property
    def terms(self) -> Mapping[Exponent, sp.csr_matrix]:
        return MappingProxyType(self._terms)

    @property
    def exponents(self) -> list[Exponent]:
        return list(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def matrix(self, exponent: Sequence[int]) -> sp.csr_matrix:
        """Matrix coefficient of a torus monomial (zero matrix if absent)."""
        e = tuple(exponent)
        if e in self._terms:
            return self._terms[e].copy()
        return sp.csr_matrix((self.trunc.dim, self.trunc.dim))

    def _check(self, other: "LaurentOperator"):
        if not isinstance(other, LaurentOperator):
            raise TypeError(f"expected LaurentOperator, got {type(other).__name__}")
        if other.trunc.fock_dims != self.trunc.fock_dims or other.trunc.torus_rank != self.trunc.torus_rank:
            raise TruncationMismatch(f"{self.trunc} vs {other.trunc}")

    def __add__(self, other):
        self._check(other)
        terms = dict(self._terms)
        for e, m in other._terms.items():
            terms[e] = terms[e] + m if e in terms else m
        return LaurentOperator._wrap(self.trunc, terms)

    def __neg__(self):
        return LaurentOperator._wrap(self.trunc, {e: -m for e, m in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, scalar):
        if isinstance(scalar, LaurentOperator):
            raise TypeError("use @ for operator products")
        return LaurentOperator._wrap(self.trunc, {e: m * scalar for e, m in self._terms.items()})

    __rmul__ = __mul__

    def __matmul__(self, other):
        self._check(other)
        terms: dict[Exponent, sp.csr_matrix] = {}
        for e1, a in self._terms.items():
            for e2, b in other._terms.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                ab = a @ b
                terms[e] = terms[e] + ab if e in terms else ab
        return LaurentOperator._wrap(self.trunc, terms)

    def adjoint(self) -> "LaurentOperator":
        return LaurentOperator._wrap(
            self.trunc, {tuple(-x for x in e): m.conj().T.tocsr() for e, m in self._terms.items()})

    def __eq__(self, other):
        if not isinstance(other, LaurentOperator):
            return NotImplemented
        if other.trunc.fock_dims != self.trunc.fock_dims or other.trunc.torus_rank != self.trunc.torus_rank:
            return False
        if self._terms.keys() != other._terms.keys():
            return False
        return all((self._terms[e] != other._terms[e]).nnz == 0 for e in self._terms)

    __hash__ = None

    def __repr__(self):
        nnz = sum(m.nnz for m in self._terms.values())
        return (f"LaurentOperator(fock_dims={self.trunc.fock_dims}, torus_rank={self.trunc.torus_rank}, "
                f"exponents={self.exponents}, nnz={nnz})")

    def shift_degree(self) -> tuple[int, ...]:
        """Per-slot maximum of |row level - column level| over stored entries."""
        dims = self.trunc.fock_dims
        deg = [0] * len(dims)
        for m in self._terms.values():
            coo = m.tocoo()
            if not coo.nnz or not dims:
                continue
            rows = np.unravel_index(coo.row, dims)
            cols = np.unravel_index(coo.col, dims)
            for a in range(len(dims)):
                deg[a] = max(deg[a], int(np.abs(rows[a] - cols[a]).max()))
        return tuple(deg)

    def compress(self, levels: Sequence[int]) -> "LaurentOperator":
        """Principal compression onto Fock levels ``0..levels[a]-1`` of each slot."""
        levels = tuple(int(v) for v in levels)
        dims = self.trunc.fock_dims
        if len(levels) != len(dims) or any(not 2 <= l <= d for l, d in zip(levels, dims)):
            raise ValueError(f"cannot compress {dims} to {levels}")
        idx = _box_indices(dims, levels)
        trunc = self.trunc.replace(fock_dims=levels, interior_margin=0)
        return LaurentOperator._wrap(trunc, {e: m[idx][:, idx] for e, m in self._terms.items()})


def tensor(ops: Iterable) -> sp.csr_matrix:
    """Kronecker product of single-slot matrices, slot 0 most significant."""
    return reduce(lambda a, b: sp.kron(a, b, format="csr"), ops, sp.csr_matrix(np.ones((1, 1))))


def identity(trunc: TruncationSpec) -> LaurentOperator:
    return LaurentOperator._wrap(trunc, {(0,) * trunc.torus_rank: sp.identity(trunc.dim, format="csr")})


def zero(trunc: TruncationSpec) -> LaurentOperator:
    return LaurentOperator._wrap(trunc, {})


def monomial(trunc: TruncationSpec, exponent: Sequence[int], matrix=None) -> LaurentOperator:
    """``t^exponent (x) matrix`` (identity matrix by default)."""
    if matrix is None:
        matrix = sp.identity(trunc.dim, format="csr")
    return LaurentOperator(trunc, {tuple(exponent): matrix})


def embed_slot(op, slot: int, trunc: TruncationSpec) -> LaurentOperator:
    """Place a single-factor matrix at ``slot``, identity on the other factors."""
    dims = trunc.fock_dims
    if not 0 <= slot < len(dims):
        raise IndexError(f"slot {slot} out of range for {len(dims)} Fock factors")
    op = sp.csr_matrix(op)
    if op.shape != (dims[slot], dims[slot]):
        raise TruncationMismatch(f"slot {slot} expects {dims[slot]}x{dims[slot]}, got {op.shape}")
    factors = [op if a == slot else sp.identity(d, format="csr") for a, d in enumerate(dims)]
    return LaurentOperator._wrap(trunc, {(0,) * trunc.torus_rank: tensor(factors)})


add = LaurentOperator.__add__
mul = LaurentOperator.__matmul__


def adjoint(a: LaurentOperator) -> LaurentOperator:
    return a.adjoint()


def _box_indices(dims: Sequence[int], levels: Sequence[int]) -> np.ndarray:
    if not dims:
        return np.zeros(1, dtype=np.int64)
    grids = np.meshgrid(*[np.arange(l) for l in levels], indexing="ij")
    return np.ravel_multi_index([g.ravel() for g in grids], tuple(dims))


def interior_indices(trunc: TruncationSpec, margin: int) -> np.ndarray:
    """Flat indices whose every slot level is <= D_a - 1 - margin."""
    levels = [d - margin for d in trunc.fock_dims]
    if any(l < 1 for l in levels):
        raise ValueError(f"margin {margin} leaves no interior in {trunc.fock_dims}")
    return _box_indices(trunc.fock_dims, levels)


def interior_difference(a: LaurentOperator, b: LaurentOperator, margin: int | None = None) -> float:
    """Largest absolute entry difference on the interior block, over all exponents."""
    a._check(b)
    if margin is None:
        margin = a.trunc.interior_margin
    idx = interior_indices(a.trunc, margin)
    empty = sp.csr_matrix((len(idx), len(idx)))
    worst = 0.0
    for e in set(a._terms) | set(b._terms):
        blocks = [t[e][idx][:, idx] if e in t else empty for t in (a._terms, b._terms)]
        diff = (blocks[0] - blocks[1]).tocsr()
        diff.eliminate_zeros()
        if diff.nnz:
            worst = max(worst, float(np.abs(diff.data).max()))
    return worst


def interior_equal(a: LaurentOperator, b: LaurentOperator, margin: int | None = None,
                   tol: float = 1e-12) -> bool:
    """Equality on matrix entries whose Fock indices avoid a boundary margin.

    Torus terms are matched exactly by exponent; only the interior block of
    each matrix coefficient is compared.
    """
    return interior_difference(a, b, margin) <= tol


def frobenius_norm(a: LaurentOperator) -> float:
    return math.sqrt(sum(float(np.sum(np.abs(m.data) ** 2)) for m in a._terms.values()))


def op_norm_estimate(a: LaurentOperator) -> float:
    """Largest singular value among the per-exponent matrices.

    This is a lower bound for the operator norm of the torus-graded element,
    not the norm itself.
    """
    best = 0.0
    for m in a._terms.values():
        if m.shape[0] <= 1024:
            s = float(np.linalg.norm(m.toarray(), 2))
        else:
            s = float(svds(m.astype(complex), k=1, return_singular_vectors=False)[0])
        best = max(best, s)
    return best


# operator matrices (lists of lists of LaurentOperator)

def matrix_product(A, B):
    n, k, m = len(A), len(B), len(B[0])
    if len(A[0]) != k:
        raise ValueError("inner dimensions differ")
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = A[i][0] @ B[0][j]
            for l in range(1, k):
                acc = acc + A[i][l] @ B[l][j]
            row.append(acc)
        out.append(row)
    return out


def matrix_adjoint(A):
    return [[A[j][i].adjoint() for j in range(len(A))] for i in range(len(A[0]))]


def matrix_scale(A, s):
    return [[s * x for x in row] for row in A]


def matrix_interior_difference(A, B, margin: int) -> float:
    return max(interior_difference(a, b, margin) for ra, rb in zip(A, B) for a, b in zip(ra, rb))


# serialization

PathLike = Union[str, os.PathLike]


def to_dict(a: LaurentOperator) -> dict:
    dims = a.trunc.fock_dims
    terms = []
    for e, m in a._terms.items():
        coo = m.tocoo()
        order = np.lexsort((coo.col, coo.row))
        rows = np.unravel_index(coo.row[order], dims) if dims else ()
        cols = np.unravel_index(coo.col[order], dims) if dims else ()
        entries = []
        for t, k in enumerate(order):
            v = complex(coo.data[k])
            entries.append({
                "row": [int(r[t]) for r in rows],
                "col": [int(c[t]) for c in cols],
                "re": v.real,
                "im": v.imag,
            })
        terms.append({"exponent": list(e), "entries": entries})
    return {
        "format_version": FORMAT_VERSION,
        "torus_rank": a.trunc.torus_rank,
        "fock_dims": list(dims),
        "terms": terms,
    }


def _int(value, location):
    if isinstance(value, bool) or not isinstance(value, int):
        raise OperatorFormatError(location, f"expected integer, got {value!r}")
    return value


def _num(value, location):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise OperatorFormatError(location, f"expected number, got {value!r}")
    return float(value)


def _int_list(value, length, location):
    if not isinstance(value, list):
        raise OperatorFormatError(location, "expected a list")
    if length is not None and len(value) != length:
        raise OperatorFormatError(location, f"expected {length} components, got {len(value)}")
    return [_int(v, f"{location}[{k}]") for k, v in enumerate(value)]


def from_dict(data) -> LaurentOperator:
    if not isinstance(data, dict):
        raise OperatorFormatError("<root>", "expected an object")
    for key in ("format_version", "torus_rank", "fock_dims", "terms"):
        if key not in data:
            raise OperatorFormatError(key, "missing field")
    if data["format_version"] != FORMAT_VERSION:
        raise OperatorFormatError("format_version", f"unsupported version {data['format_version']!r}")
    p = _int(data["torus_rank"], "torus_rank")
    dims = _int_list(data["fock_dims"], None, "fock_dims")
    try:
        trunc = TruncationSpec(tuple(dims), torus_rank=p)
    except ValueError as exc:
        raise OperatorFormatError("fock_dims", str(exc)) from None
    if not isinstance(data["terms"], list):
        raise OperatorFormatError("terms", "expected a list")
    terms = {}
    dim = trunc.dim
    for t, term in enumerate(data["terms"]):
        loc = f"terms[{t}]"
        if not isinstance(term, dict) or "exponent" not in term or "entries" not in term:
            raise OperatorFormatError(loc, "expected {exponent, entries}")
        e = tuple(_int_list(term["exponent"], p, f"{loc}.exponent"))
        if e in terms:
            raise OperatorFormatError(f"{loc}.exponent", f"duplicate exponent {list(e)}")
        if not isinstance(term["entries"], list):
            raise OperatorFormatError(f"{loc}.entries", "expected a list")
        rows, cols, vals = [], [], []
        for k, entry in enumerate(term["entries"]):
            eloc = f"{loc}.entries[{k}]"
            if not isinstance(entry, dict):
                raise OperatorFormatError(eloc, "expected an object")
            for key in ("row", "col", "re", "im"):
                if key not in entry:
                    raise OperatorFormatError(f"{eloc}.{key}", "missing field")
            r = _int_list(entry["row"], len(dims), f"{eloc}.row")
            c = _int_list(entry["col"], len(dims), f"{eloc}.col")
            for name, idx in (("row", r), ("col", c)):
                for a, (v, d) in enumerate(zip(idx, dims)):
                    if not 0 <= v < d:
                        raise OperatorFormatError(f"{eloc}.{name}[{a}]", f"level {v} outside 0..{d - 1}")
            rows.append(int(np.ravel_multi_index(r, dims)) if dims else 0)
            cols.append(int(np.ravel_multi_index(c, dims)) if dims else 0)
            vals.append(complex(_num(entry["re"], f"{eloc}.re"), _num(entry["im"], f"{eloc}.im")))
        vals = np.array(vals, dtype=complex)
        if vals.size and not np.any(vals.imag):
            vals = vals.real.copy()
        terms[e] = sp.coo_matrix((vals, (rows, cols)), shape=(dim, dim))
    return LaurentOperator(trunc, terms)


def dumps(a: LaurentOperator) -> str:
    return json.dumps(to_dict(a), indent=None, separators=(",", ":"))


def loads(text: str) -> LaurentOperator:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise OperatorFormatError(f"line {exc.lineno} column {exc.colno}", exc.msg) from None
    return from_dict(data)


def save(a: LaurentOperator, sink: Union[PathLike, IO[str]]) -> None:
    text = dumps(a)
    if hasattr(sink, "write"):
        sink.write(text)
    else:
        with open(sink, "w") as fh:
            fh.write(text)


def load(source: Union[PathLike, IO[str]]) -> LaurentOperator:
    if hasattr(source, "read"):
        return loads(source.read())
    with open(source) as fh:
        return loads(fh.read())
