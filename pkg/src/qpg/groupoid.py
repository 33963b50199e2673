"""Finite truncations of Toeplitz-type transformation groupoids and their
convolution *-algebras.

An arrow is ``(aux, x, w)``: ``aux`` are components acting trivially (the
extra Z-factors), ``x`` translates and ``w`` is the source point in the
extended cone {0, 1, ..., K-1, INF}^m.  The range is ``x + w`` with INF
absorbing.  Composition ``g . h`` needs ``source(g) == range(h)`` and yields
``(aux_g + aux_h, x_g + x_h, w_h)``.

The subgroupoids used for spheres and projective spaces are quotients: a
point whose first infinite coordinate is i is identified with the point
having every later coordinate infinite too.  Arrows of those specs are kept
in canonical form, where the identification has been applied.
"""
from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Mapping, Sequence

INF = math.inf
DEFAULT_MAX_ENUM = 10 ** 6

Point = tuple


class BoundOverflowError(ArithmeticError):
    """A composed arrow leaves the translation bound B; enlarge B (--xbound)."""


class EnumerationCapError(RuntimeError):
    """Enumeration produced more arrows than the configured cap (QPG_MAX_ENUM)."""


def max_enum() -> int:
    raw = os.environ.get("QPG_MAX_ENUM")
    return int(raw) if raw else DEFAULT_MAX_ENUM


@dataclass(frozen=True, order=True)
class Morphism:
    aux: tuple[int, ...]
    x: tuple[int, ...]
    w: Point

    @property
    def source(self) -> Point:
        return self.w

    @property
    def range(self) -> Point:
        return tuple(wi if wi == INF else wi + xi for wi, xi in zip(self.w, self.x))

    def __repr__(self):
        w = ",".join("inf" if v == INF else str(v) for v in self.w)
        return f"Morphism(aux={self.aux}, x={self.x}, w=({w}))"


GroupoidMorphism = Morphism


def infinity_pattern(w: Point) -> tuple[bool, ...]:
    return tuple(v == INF for v in w)


def compose_raw(g: Morphism, h: Morphism, bound_check: Callable[[Morphism], bool] | None = None):
    """Composition in the ambient groupoid; ``None`` when not composable."""
    if g.source != h.range:
        return None
    out = Morphism(tuple(a + b for a, b in zip(g.aux, h.aux)),
                   tuple(a + b for a, b in zip(g.x, h.x)), h.w)
    if bound_check is not None and not bound_check(out):
        raise BoundOverflowError(f"{out} exceeds the translation bound")
    return out


def inverse(g: Morphism) -> Morphism:
    return Morphism(tuple(-a for a in g.aux), tuple(-a for a in g.x), g.range)


def unit(w: Point, aux_rank: int = 0) -> Morphism:
    return Morphism((0,) * aux_rank, (0,) * len(w), tuple(w))


@dataclass(frozen=True)
class GroupoidSpec:
    """Ambient truncated groupoid Z^p x (Z^m x Zbar^m restricted to the cone).

    ``K`` is the number of finite levels per coordinate and ``B`` bounds
    |aux| and |x| on free coordinates.
    """

    p: int
    m: int
    K: int
    B: int

    quotient = False

    def __post_init__(self):
        if self.p < 0 or self.m < 1 or self.K < 1 or self.B < 0:
            raise ValueError(f"invalid groupoid parameters {self}")

    @property
    def name(self) -> str:
        return type(self).__name__

    # points and arrows

    def points(self) -> list[Point]:
        """Unit-space points (canonical points for quotient specs)."""
        levels = list(range(self.K)) + [INF]
        return [w for w in itertools.product(levels, repeat=self.m) if self.canonical_point(w) == w]

    def canonical_point(self, w: Point) -> Point:
        return tuple(w)

    def patterns(self) -> list[tuple[bool, ...]]:
        return sorted({infinity_pattern(w) for w in self.points() if self.point_admissible(w)})

    def point_admissible(self, w: Point) -> bool:
        return True

    def bounded_coords(self, g: Morphism) -> Iterable[int]:
        return range(self.m)

    def within_bound(self, g: Morphism) -> bool:
        if any(abs(a) > self.B for a in g.aux):
            return False
        return all(abs(g.x[i]) <= self.B for i in self.bounded_coords(g))

    def valid(self, g: Morphism, bounded: bool = True) -> bool:
        """Ambient validity: shapes, levels within the cutoff and (optionally) bounds."""
        if len(g.aux) != self.p or len(g.x) != self.m or len(g.w) != self.m:
            return False
        for wi, xi in zip(g.w, g.x):
            if wi == INF:
                continue
            if not (isinstance(wi, int) and 0 <= wi < self.K and 0 <= wi + xi < self.K):
                return False
        return self.within_bound(g) if bounded else True

    def condition(self, g: Morphism) -> bool:
        return True

    def member(self, g: Morphism, bounded: bool = True) -> bool:
        return self.valid(g, bounded) and self.condition(g)

    def canonicalize(self, g: Morphism, bounded: bool = True) -> Morphism:
        if not self.member(g, bounded):
            raise ValueError(f"{g} is not an arrow of {self}")
        return g

    def is_canonical(self, g: Morphism) -> bool:
        return self.member(g) and self.canonicalize(g) == g

    def compose(self, g: Morphism, h: Morphism):
        """Composition in this groupoid (of the canonical classes for quotients)."""
        if self.quotient:
            g, h = self.canonicalize(g), self.canonicalize(h)
        out = compose_raw(g, h, self.within_bound)
        return None if out is None else (self.canonicalize(out) if self.quotient else out)

    def inverse(self, g: Morphism) -> Morphism:
        return inverse(self.canonicalize(g) if self.quotient else g)

    def unit(self, w: Point) -> Morphism:
        return unit(self.canonical_point(w), self.p)

    # enumeration

    def _x_candidates(self, aux, prefix, w, i) -> Iterable[int]:
        if w[i] == INF:
            return range(-self.B, self.B + 1)
        return range(max(-w[i], -self.B), min(self.K - 1 - w[i], self.B) + 1)

    def _arrows_at(self, w: Point) -> Iterator[Morphism]:
        for aux in itertools.product(range(-self.B, self.B + 1), repeat=self.p):
            def rec(prefix):
                i = len(prefix)
                if i == self.m:
                    yield Morphism(aux, tuple(prefix), w)
                    return
                for v in self._x_candidates(aux, prefix, w, i):
                    yield from rec(prefix + [v])
            for g in rec([]):
                if self.member(g):
                    yield g

    def members(self, cap: int | None = None) -> list[Morphism]:
        """All arrows of the (sub)groupoid before any identification."""
        levels = list(range(self.K)) + [INF]
        return self._collect((w for w in itertools.product(levels, repeat=self.m)), cap)

    def enumerate(self, cap: int | None = None) -> list[Morphism]:
        """All canonical arrows, sorted and duplicate-free."""
        return self._collect(self.points(), cap)

    def _collect(self, points, cap):
        cap = max_enum() if cap is None else cap
        out = []
        for w in points:
            for g in self._arrows_at(tuple(w)):
                out.append(g)
                if len(out) > cap:
                    raise EnumerationCapError(
                        f"{self} has more than {cap} arrows; raise QPG_MAX_ENUM or lower K/B")
        return sorted(set(out), key=_sort_key)


def _sort_key(g: Morphism):
    return (g.w, g.x, g.aux)


@dataclass(frozen=True)
class Toeplitz(GroupoidSpec):
    """The m-dimensional Toeplitz groupoid Z^m x Zbar^m restricted to the cone."""

    def __init__(self, m: int, K: int, B: int):
        object.__setattr__(self, "p", 0)
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "K", K)
        object.__setattr__(self, "B", B)
        self.__post_init__()


@dataclass(frozen=True)
class Augmented(GroupoidSpec):
    """Z^p acting trivially, times the m-dimensional Toeplitz groupoid."""


class _PrefixQuotient(GroupoidSpec):
    # shared logic: w_i = INF forces x_i = -(z + x_1 + ... + x_{i-1}) and x_{i+1..} = 0
    quotient = True

    def _offset(self, g: Morphism) -> int:
        return sum(g.aux)

    def canonical_point(self, w: Point) -> Point:
        w = tuple(w)
        for i, v in enumerate(w):
            if v == INF:
                return w[:i] + (INF,) * (len(w) - i)
        return w

    def bounded_coords(self, g: Morphism) -> Iterable[int]:
        # translations on infinite coordinates are determined by the others
        return [i for i, v in enumerate(g.w) if v != INF]

    def condition(self, g: Morphism) -> bool:
        for i, v in enumerate(g.w):
            if v == INF:
                if g.x[i] != -self._offset(g) - sum(g.x[:i]):
                    return False
                if any(g.x[i + 1:]):
                    return False
        return True

    def canonicalize(self, g: Morphism, bounded: bool = True) -> Morphism:
        if not self.member(g, bounded):
            raise ValueError(f"{g} is not an arrow of {self}")
        return Morphism(g.aux, g.x, self.canonical_point(g.w))

    def _x_candidates(self, aux, prefix, w, i):
        first = next((a for a, v in enumerate(w) if v == INF), None)
        if first is not None and i > first:
            return [0]
        if w[i] == INF:
            return [-sum(aux) - sum(prefix)]
        return super()._x_candidates(aux, prefix, w, i)


class SphereSub(_PrefixQuotient):
    """Subquotient of Z x T_n: one aux coordinate z, n translation coordinates."""

    def __init__(self, n: int, K: int, B: int):
        object.__setattr__(self, "p", 1)
        object.__setattr__(self, "m", n)
        object.__setattr__(self, "K", K)
        object.__setattr__(self, "B", B)
        self.__post_init__()

    @property
    def n(self) -> int:
        return self.m

    def __repr__(self):
        return f"SphereSub(n={self.m}, K={self.K}, B={self.B})"


class ProjectiveSub(_PrefixQuotient):
    """Subquotient of T_n with j_i = -(j_1 + ... + j_{i-1}) on the first infinite coordinate."""

    def __init__(self, n: int, K: int, B: int):
        object.__setattr__(self, "p", 0)
        object.__setattr__(self, "m", n)
        object.__setattr__(self, "K", K)
        object.__setattr__(self, "B", B)
        self.__post_init__()

    @property
    def n(self) -> int:
        return self.m

    def __repr__(self):
        return f"ProjectiveSub(n={self.m}, K={self.K}, B={self.B})"


class PodlesSub(GroupoidSpec):
    """Arrows (j, j, k_1, k_2) of T_2 with k_1 = INF or k_2 = INF."""

    def __init__(self, K: int, B: int):
        object.__setattr__(self, "p", 0)
        object.__setattr__(self, "m", 2)
        object.__setattr__(self, "K", K)
        object.__setattr__(self, "B", B)
        self.__post_init__()

    def __repr__(self):
        return f"PodlesSub(K={self.K}, B={self.B})"

    def point_admissible(self, w: Point) -> bool:
        return INF in w

    def points(self) -> list[Point]:
        return [w for w in super().points() if INF in w]

    def condition(self, g: Morphism) -> bool:
        return g.x[0] == g.x[1] and INF in g.w

    def _x_candidates(self, aux, prefix, w, i):
        if i == 1:
            return [prefix[0]]
        lo, hi = -self.B, self.B
        for v in w:
            if v != INF:
                lo, hi = max(lo, -v), min(hi, self.K - 1 - v)
        return range(lo, hi + 1)

    def members(self, cap=None):
        return self.enumerate(cap)


class NonstandardAmbient(GroupoidSpec):
    """Z x T_{2n-1}: one trivially acting Z and 2n-1 Toeplitz coordinates."""

    def __init__(self, n: int, K: int, B: int):
        object.__setattr__(self, "p", 1)
        object.__setattr__(self, "m", 2 * n - 1)
        object.__setattr__(self, "K", K)
        object.__setattr__(self, "B", B)
        self.__post_init__()

    def __repr__(self):
        return f"NonstandardAmbient(n={(self.m + 1) // 2}, K={self.K}, B={self.B})"


# module-level wrappers

def compose(spec: GroupoidSpec, g: Morphism, h: Morphism):
    return spec.compose(g, h)


def member(spec: GroupoidSpec, g: Morphism, bounded: bool = True) -> bool:
    return spec.member(g, bounded)


def canonicalize(spec: GroupoidSpec, g: Morphism, bounded: bool = True) -> Morphism:
    return spec.canonicalize(g, bounded)


def enumerate_arrows(spec: GroupoidSpec, cap: int | None = None) -> list[Morphism]:
    return spec.enumerate(cap)


def spec_descriptor(spec: GroupoidSpec) -> dict:
    kind = spec.name
    if isinstance(spec, (SphereSub, ProjectiveSub)):
        return {"kind": kind, "n": spec.m, "K": spec.K, "B": spec.B}
    if isinstance(spec, NonstandardAmbient):
        return {"kind": kind, "n": (spec.m + 1) // 2, "K": spec.K, "B": spec.B}
    if isinstance(spec, PodlesSub):
        return {"kind": kind, "K": spec.K, "B": spec.B}
    if isinstance(spec, Toeplitz):
        return {"kind": kind, "m": spec.m, "K": spec.K, "B": spec.B}
    return {"kind": "Augmented", "p": spec.p, "m": spec.m, "K": spec.K, "B": spec.B}


def spec_from_descriptor(d: Mapping) -> GroupoidSpec:
    kind = d.get("kind")
    if kind == "Toeplitz":
        return Toeplitz(d["m"], d["K"], d["B"])
    if kind == "Augmented":
        return Augmented(d["p"], d["m"], d["K"], d["B"])
    if kind == "SphereSub":
        return SphereSub(d["n"], d["K"], d["B"])
    if kind == "ProjectiveSub":
        return ProjectiveSub(d["n"], d["K"], d["B"])
    if kind == "PodlesSub":
        return PodlesSub(d["K"], d["B"])
    if kind == "NonstandardAmbient":
        return NonstandardAmbient(d["n"], d["K"], d["B"])
    raise ValueError(f"unknown groupoid kind {kind!r}")


# convolution algebra

class ConvElement:
    """Finitely supported complex function on the canonical arrows of ``spec``.

    Products follow (f*g)(k) = sum over k = a.b of f(a) g(b) and the
    involution is f^*(k) = conj(f(k^{-1})).  A product that would need an
    arrow outside the translation bound raises :class:`BoundOverflowError`.
    """

    __slots__ = ("spec", "_terms")

    def __init__(self, spec: GroupoidSpec, terms: Mapping[Morphism, complex] | None = None):
        self.spec = spec
        clean = {}
        for g, v in (terms or {}).items():
            if v == 0:
                continue
            if not spec.member(g):
                raise ValueError(f"{g} is not an arrow of {spec}")
            g = spec.canonicalize(g) if spec.quotient else g
            clean[g] = clean.get(g, 0) + complex(v)
        self._terms = {g: v for g, v in clean.items() if v != 0}

    @classmethod
    def _wrap(cls, spec, terms):
        out = cls.__new__(cls)
        out.spec = spec
        out._terms = {g: v for g, v in terms.items() if v != 0}
        return out

    @classmethod
    def delta(cls, spec: GroupoidSpec, g: Morphism, value: complex = 1.0) -> "ConvElement":
        return cls(spec, {g: value})

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    @property
    def support(self) -> list[Morphism]:
        return sorted(self._terms, key=_sort_key)

    def __getitem__(self, g: Morphism) -> complex:
        return self._terms.get(g, 0)

    def __len__(self):
        return len(self._terms)

    def _check(self, other):
        if not isinstance(other, ConvElement):
            return NotImplemented
        if other.spec != self.spec:
            raise ValueError("elements live on different groupoids")
        return None

    def __add__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        out = dict(self._terms)
        for g, v in other._terms.items():
            out[g] = out.get(g, 0) + v
        return ConvElement._wrap(self.spec, out)

    def __neg__(self):
        return ConvElement._wrap(self.spec, {g: -v for g, v in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, scalar):
        if isinstance(scalar, ConvElement):
            return convolve(self, scalar)
        return ConvElement._wrap(self.spec, {g: scalar * v for g, v in self._terms.items()})

    __rmul__ = __mul__

    def __matmul__(self, other):
        return convolve(self, other)

    def __eq__(self, other):
        if not isinstance(other, ConvElement):
            return NotImplemented
        return self.spec == other.spec and self._terms == other._terms

    __hash__ = None

    def is_zero(self) -> bool:
        return not self._terms

    def involution(self) -> "ConvElement":
        return involution(self)

    def max_abs_diff(self, other: "ConvElement") -> float:
        keys = set(self._terms) | set(other._terms)
        return max((abs(self[g] - other[g]) for g in keys), default=0.0)

    def __repr__(self):
        return f"ConvElement({self.spec!r}, {len(self._terms)} terms)"


def convolve(f: ConvElement, g: ConvElement) -> ConvElement:
    if f.spec != g.spec:
        raise ValueError("elements live on different groupoids")
    spec = f.spec
    by_range: dict = {}
    for b, v in g._terms.items():
        by_range.setdefault(b.range, []).append((b, v))
    out: dict = {}
    for a, u in f._terms.items():
        for b, v in by_range.get(a.source, ()):
            k = spec.compose(a, b)
            out[k] = out.get(k, 0) + u * v
    return ConvElement._wrap(spec, out)


def involution(f: ConvElement) -> ConvElement:
    spec = f.spec
    return ConvElement._wrap(spec, {spec.inverse(g): complex(v).conjugate() for g, v in f._terms.items()})


def unit_element(spec: GroupoidSpec, points: Iterable[Point] | None = None) -> ConvElement:
    """Sum of the unit deltas over ``points`` (all points by default)."""
    pts = spec.points() if points is None else points
    return ConvElement(spec, {spec.unit(w): 1.0 for w in pts})


def random_element(spec: GroupoidSpec, rng, arrows: Sequence[Morphism], size: int) -> ConvElement:
    """Random complex combination of ``size`` arrows drawn from ``arrows``."""
    pick = rng.choice(len(arrows), size=min(size, len(arrows)), replace=False)
    vals = rng.standard_normal(len(pick)) + 1j * rng.standard_normal(len(pick))
    return ConvElement(spec, {arrows[int(i)]: v for i, v in zip(pick, vals)})


def conv_to_dict(f: ConvElement) -> dict:
    def pt(w):
        return ["inf" if v == INF else v for v in w]
    return {
        "spec": spec_descriptor(f.spec),
        "terms": [{"aux": list(g.aux), "x": list(g.x), "w": pt(g.w),
                   "re": complex(v).real, "im": complex(v).imag} for g, v in
                  sorted(f._terms.items(), key=lambda kv: _sort_key(kv[0]))],
    }


def conv_from_dict(data: Mapping) -> ConvElement:
    spec = spec_from_descriptor(data["spec"])
    terms = {}
    for t, entry in enumerate(data["terms"]):
        try:
            w = tuple(INF if v == "inf" else int(v) for v in entry["w"])
            g = Morphism(tuple(int(v) for v in entry["aux"]), tuple(int(v) for v in entry["x"]), w)
            terms[g] = complex(float(entry["re"]), float(entry["im"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"terms[{t}]: {exc}") from exc
    return ConvElement(spec, terms)


# brute-force law checks on a truncation

def _by_range(arrows):
    out: dict = {}
    for b in arrows:
        out.setdefault(b.range, []).append(b)
    return out


def check_axioms(spec: GroupoidSpec, arrows: Sequence[Morphism] | None = None,
                 associativity: bool = True) -> dict:
    """Inverse and unit laws and source/range bookkeeping over all composable pairs,
    plus associativity over all composable triples when requested."""
    arrows = spec.members() if arrows is None else arrows
    by_range = _by_range(arrows)
    counts = {"pairs": 0, "triples": 0, "failures": 0}
    for g in arrows:
        gi = inverse(g)
        if compose_raw(gi, g) != unit(g.source, spec.p) or compose_raw(g, gi) != unit(g.range, spec.p):
            counts["failures"] += 1
        if compose_raw(g, unit(g.source, spec.p)) != g or compose_raw(unit(g.range, spec.p), g) != g:
            counts["failures"] += 1
        for h in by_range.get(g.source, ()):
            gh = compose_raw(g, h)
            counts["pairs"] += 1
            if gh.source != h.source or gh.range != g.range:
                counts["failures"] += 1
            for k in (by_range.get(h.source, ()) if associativity else ()):
                counts["triples"] += 1
                if compose_raw(gh, k) != compose_raw(g, compose_raw(h, k)):
                    counts["failures"] += 1
    return counts


def check_closure(spec: GroupoidSpec, arrows: Sequence[Morphism] | None = None) -> dict:
    """Members are closed under composition (ignoring the truncation bound) and inverse."""
    arrows = spec.members() if arrows is None else arrows
    by_range = _by_range(arrows)
    counts = {"members": len(arrows), "pairs": 0, "failures": 0}
    for g in arrows:
        if not spec.member(inverse(g), bounded=False):
            counts["failures"] += 1
        for h in by_range.get(g.source, ()):
            counts["pairs"] += 1
            if not spec.member(compose_raw(g, h), bounded=False):
                counts["failures"] += 1
    return counts


def check_quotient(spec: GroupoidSpec, arrows: Sequence[Morphism] | None = None) -> dict:
    """canonicalize is idempotent, constant on classes, and composition descends."""
    arrows = spec.members() if arrows is None else arrows
    by_range = _by_range(arrows)
    counts = {"members": len(arrows), "classes": 0, "pairs": 0, "failures": 0}
    classes: dict = {}
    for g in arrows:
        c = spec.canonicalize(g)
        classes.setdefault(c, []).append(g)
        if spec.canonicalize(c) != c:
            counts["failures"] += 1
    counts["classes"] = len(classes)
    for g in arrows:
        cg = spec.canonicalize(g)
        for h in by_range.get(g.source, ()):
            counts["pairs"] += 1
            ch = spec.canonicalize(h)
            if cg.source != ch.range:
                counts["failures"] += 1
                continue
            lhs = spec.canonicalize(compose_raw(g, h), bounded=False)
            rhs = spec.canonicalize(compose_raw(cg, ch), bounded=False)
            if lhs != rhs:
                counts["failures"] += 1
    return counts
