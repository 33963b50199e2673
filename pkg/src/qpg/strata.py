"""Invariant strata of the truncated groupoids, restriction to closed strata,
and finite checks of the resulting exact sequences and composition series.

Every translation keeps finite coordinates finite and infinite ones
infinite, so the pattern of infinite coordinates of a unit is an orbit
invariant.  A set of patterns is closed when it is upward closed: finite
levels accumulate at infinity, so a closed set containing a pattern also
contains every admissible pattern with more infinite coordinates.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .groupoid import (INF, ConvElement, GroupoidSpec, Morphism, PodlesSub, ProjectiveSub,
                       SphereSub, compose_raw, convolve, infinity_pattern, involution,
                       random_element)

Pattern = tuple


def stratum_of(g: Morphism) -> Pattern:
    return infinity_pattern(g.w)


def _more_infinite(p: Pattern, r: Pattern) -> bool:
    return all(b or not a for a, b in zip(p, r))


def closed_descriptor(spec: GroupoidSpec, patterns: Iterable[Pattern]) -> frozenset:
    """Validate a set of infinity patterns as a closed invariant set of units."""
    pats = frozenset(tuple(bool(v) for v in p) for p in patterns)
    admissible = spec.patterns()
    for p in pats:
        if p not in admissible:
            raise ValueError(f"pattern {p} does not occur in {spec}")
    for p in pats:
        for r in admissible:
            if _more_infinite(p, r) and r not in pats:
                raise ValueError(f"pattern set is not closed: contains {p} but not {r}")
    return pats


def last_infinite(spec: GroupoidSpec) -> frozenset:
    """The closed set {w_m = INF}."""
    return closed_descriptor(spec, [p for p in spec.patterns() if p[-1]])


def restrict_closed(f: ConvElement, closed: frozenset) -> ConvElement:
    """Restriction of ``f`` to the arrows whose units lie in the closed set."""
    return ConvElement._wrap(f.spec, {g: v for g, v in f._terms.items() if stratum_of(g) in closed})


def complement_ideal_basis(spec: GroupoidSpec, closed: frozenset,
                           arrows: Sequence[Morphism] | None = None) -> list[Morphism]:
    """Arrows over the open complement; their deltas span the restriction kernel."""
    arrows = spec.enumerate() if arrows is None else arrows
    return [g for g in arrows if stratum_of(g) not in closed]


@dataclass
class ExactnessReport:
    spec: str
    total: int
    kernel_dim: int
    image_dim: int
    ideal_dim: int
    two_sided: bool
    star_closed: bool
    homomorphism_err: float
    surjective: bool
    notes: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return (self.kernel_dim == self.ideal_dim and self.kernel_dim + self.image_dim == self.total
                and self.two_sided and self.star_closed and self.surjective
                and self.homomorphism_err <= 1e-12)


def _ideal_closed_under_arrows(spec, arrows, ideal) -> bool:
    # a.b stays in the ideal whenever one factor does; bounds do not matter here
    by_range: dict = {}
    by_source: dict = {}
    for b in arrows:
        by_range.setdefault(b.range, []).append(b)
        by_source.setdefault(b.source, []).append(b)
    for a in ideal:
        for b in by_range.get(a.source, ()):
            if stratum_of(compose_raw(a, b)) != stratum_of(a):
                return False
        for b in by_source.get(a.range, ()):
            if stratum_of(compose_raw(b, a)) != stratum_of(a):
                return False
    return True


def _small_arrows(spec, arrows):
    # arrows whose pairwise products stay inside the translation bound
    half = spec.B // 2
    return [g for g in arrows
            if all(abs(a) <= half for a in g.aux)
            and all(abs(g.x[i]) <= half for i in spec.bounded_coords(g))]


def verify_exactness(spec: GroupoidSpec, closed: frozenset, seed: int = 0,
                     trials: int = 5) -> ExactnessReport:
    """Check 0 -> ideal -> algebra -> restricted algebra -> 0 on the truncation."""
    arrows = spec.enumerate()
    index = {g: t for t, g in enumerate(arrows)}
    ideal = complement_ideal_basis(spec, closed, arrows)
    kept = [g for g in arrows if stratum_of(g) in closed]
    # restriction as a 0/1 matrix from functions on arrows to functions on kept arrows
    R = np.zeros((len(kept), len(arrows)))
    for r, g in enumerate(kept):
        R[r, index[g]] = 1.0
    image_dim = int(np.linalg.matrix_rank(R)) if kept else 0
    kernel_dim = len(arrows) - image_dim
    ideal_set = set(ideal)
    star = all(spec.inverse(g) in ideal_set for g in ideal)
    two_sided = _ideal_closed_under_arrows(spec, arrows, ideal)
    surjective = all(restrict_closed(ConvElement.delta(spec, g), closed) == ConvElement.delta(spec, g)
                     for g in kept)

    rng = np.random.default_rng(seed)
    small = _small_arrows(spec, arrows)
    small_ideal = [g for g in small if g in ideal_set]
    err = 0.0
    for _ in range(trials):
        f = random_element(spec, rng, small, 12)
        h = random_element(spec, rng, small, 12)
        lhs = restrict_closed(convolve(f, h), closed)
        rhs = convolve(restrict_closed(f, closed), restrict_closed(h, closed))
        err = max(err, lhs.max_abs_diff(rhs))
        err = max(err, restrict_closed(involution(f), closed).max_abs_diff(
            involution(restrict_closed(f, closed))))
        if small_ideal:
            k = random_element(spec, rng, small_ideal, 6)
            for prod in (convolve(f, k), convolve(k, f)):
                if any(g not in ideal_set for g in prod._terms):
                    two_sided = False
    return ExactnessReport(repr(spec), len(arrows), kernel_dim, image_dim, len(ideal),
                           two_sided, star, err, surjective)


# embeddings of the lower-rank quotient

def sphere_embedding(g: Morphism) -> Morphism:
    """(z, x', w') -> (z, x', -z - sum x', w', INF), then canonical form."""
    z = g.aux[0]
    x = g.x + (-z - sum(g.x),)
    w = g.w + (INF,)
    first = next((i for i, v in enumerate(w) if v == INF))
    return Morphism(g.aux, x, w[:first] + (INF,) * (len(w) - first))


def projective_embedding(g: Morphism) -> Morphism:
    """(x', w') -> (x', -sum x', w', INF), then canonical form."""
    x = g.x + (-sum(g.x),)
    w = g.w + (INF,)
    first = next((i for i, v in enumerate(w) if v == INF))
    return Morphism(g.aux, x, w[:first] + (INF,) * (len(w) - first))


@dataclass
class EmbeddingReport:
    source_count: int
    target_count: int
    injective: bool
    onto: bool
    compose_preserving: bool

    @property
    def ok(self) -> bool:
        return self.injective and self.onto and self.compose_preserving


def verify_embedding(lower: GroupoidSpec, upper: GroupoidSpec) -> EmbeddingReport:
    """Check that the lower quotient maps bijectively onto upper|_{w_m = INF}."""
    if isinstance(lower, SphereSub) and isinstance(upper, SphereSub):
        emb = sphere_embedding
    elif isinstance(lower, ProjectiveSub) and isinstance(upper, ProjectiveSub):
        emb = projective_embedding
    else:
        raise TypeError("embedding defined for SphereSub or ProjectiveSub pairs")
    if upper.m != lower.m + 1 or (upper.K, upper.B) != (lower.K, lower.B):
        raise ValueError("upper must have one more coordinate and the same K, B")
    src = lower.enumerate()
    target = [g for g in upper.enumerate() if g.w[-1] == INF]
    images = [emb(g) for g in src]
    injective = len(set(images)) == len(images)
    onto = set(images) == set(target) and all(upper.is_canonical(g) for g in images)
    preserving = True
    by_range: dict = {}
    for b in src:
        by_range.setdefault(b.range, []).append(b)
    for a in src:
        for b in by_range.get(a.source, ()):
            ab = compose_raw(a, b)
            if not lower.member(ab):
                continue
            if upper.compose(emb(a), emb(b)) != emb(lower.canonicalize(ab)):
                preserving = False
    return EmbeddingReport(len(src), len(target), injective, onto, preserving)


def open_stratum_bijection(spec: SphereSub) -> bool:
    """Arrows over all-finite units <-> Z x (pairs of points of {0..K-1}^n) within bounds."""
    arrows = {g for g in spec.enumerate() if not any(infinity_pattern(g.w))}
    pts = list(itertools.product(range(spec.K), repeat=spec.m))
    expected = set()
    for z in range(-spec.B, spec.B + 1):
        for a in pts:
            for b in pts:
                x = tuple(ai - bi for ai, bi in zip(a, b))
                if all(abs(v) <= spec.B for v in x):
                    expected.add(Morphism((z,), x, b))
    return arrows == expected


# matrix-unit systems

@dataclass
class StratumReport:
    pattern: Pattern
    finite_coords: int
    points: int
    arrows: int
    dimension: int
    matrix_units: bool
    max_err: float

    @property
    def expected_dim(self) -> int:
        return self.points ** 2


def matrix_unit_check(spec: GroupoidSpec, points: Sequence, arrows: Sequence[Morphism]):
    """Verify e_ab e_cd = delta_bc e_ad and e_ab^* = e_ba over the stratum arrows.

    ``e_ab`` is the delta at the unique arrow with range a and source b.
    Returns (is_full_system, max deviation).
    """
    unitmap = {}
    for g in arrows:
        key = (g.range, g.source)
        if key in unitmap:
            return False, float("inf")
        unitmap[key] = g
    if len(unitmap) != len(points) ** 2:
        return False, float("inf")
    err = 0.0
    e = {k: ConvElement._wrap(spec, {g: 1.0}) for k, g in unitmap.items()}
    for (a, b), eab in e.items():
        err = max(err, involution(eab).max_abs_diff(e[(b, a)]))
        for c in points:
            err = max(err, convolve(eab, e[(b, c)]).max_abs_diff(e[(a, c)]))
            for d in points:
                if d != b:
                    err = max(err, max((abs(v) for v in convolve(eab, e[(d, c)])._terms.values()),
                                       default=0.0))
    return err == 0.0, err


def composition_series(spec: ProjectiveSub) -> list[StratumReport]:
    """Strata of the projective quotient indexed by the number k of finite coordinates."""
    if not isinstance(spec, ProjectiveSub):
        raise TypeError("composition series is defined for ProjectiveSub")
    arrows = spec.enumerate()
    out = []
    for k in range(spec.m + 1):
        pattern = (False,) * k + (True,) * (spec.m - k)
        pts = [w for w in spec.points() if infinity_pattern(w) == pattern]
        arr = [g for g in arrows if stratum_of(g) == pattern]
        ok, err = matrix_unit_check(spec, pts, arr)
        out.append(StratumReport(pattern, k, len(pts), len(arr), len(arr), ok, err))
    return out


@dataclass
class PodlesReport:
    blocks: list
    blocks_orthogonal: bool
    circle_arrows: int
    circle_commutative: bool
    circle_is_group_algebra: bool

    @property
    def ok(self) -> bool:
        return (len(self.blocks) == 2 and all(b.matrix_units for b in self.blocks)
                and self.blocks_orthogonal and self.circle_commutative and self.circle_is_group_algebra)


def podles_structure(spec: PodlesSub) -> PodlesReport:
    """Two matrix-unit blocks over the one-INF strata plus the circle over (INF, INF)."""
    arrows = spec.enumerate()
    blocks = []
    block_arrows = []
    for pattern in [(True, False), (False, True)]:
        pts = [w for w in spec.points() if infinity_pattern(w) == pattern]
        arr = [g for g in arrows if stratum_of(g) == pattern]
        ok, err = matrix_unit_check(spec, pts, arr)
        blocks.append(StratumReport(pattern, 1, len(pts), len(arr), len(arr), ok, err))
        block_arrows.append(arr)
    orth = all(convolve(ConvElement._wrap(spec, {a: 1.0}), ConvElement._wrap(spec, {b: 1.0})).is_zero()
               and convolve(ConvElement._wrap(spec, {b: 1.0}), ConvElement._wrap(spec, {a: 1.0})).is_zero()
               for a in block_arrows[0] for b in block_arrows[1])
    circle = [g for g in arrows if stratum_of(g) == (True, True)]
    grp = sorted(g.x[0] for g in circle) == list(range(-spec.B, spec.B + 1))
    comm = True
    for a in circle:
        for b in circle:
            if abs(a.x[0] + b.x[0]) > spec.B:
                continue
            da, db = ConvElement._wrap(spec, {a: 1.0}), ConvElement._wrap(spec, {b: 1.0})
            ab, ba = convolve(da, db), convolve(db, da)
            if ab != ba or ab.support[0].x[0] != a.x[0] + b.x[0]:
                comm = False
    return PodlesReport(blocks, orth, len(circle), comm, grp)
