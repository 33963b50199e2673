import numpy as np
import pytest

from qpg.groupoid import INF, ConvElement, Morphism, PodlesSub, ProjectiveSub, SphereSub, random_element
from qpg.strata import (
    closed_descriptor,
    complement_ideal_basis,
    composition_series,
    last_infinite,
    open_stratum_bijection,
    podles_structure,
    projective_embedding,
    restrict_closed,
    sphere_embedding,
    verify_embedding,
    verify_exactness,
)


class TestDescriptors:
    def test_not_closed(self):
        with pytest.raises(ValueError):
            closed_descriptor(PodlesSub(2, 1), [(True, False)])

    def test_unknown_pattern(self):
        with pytest.raises(ValueError):
            closed_descriptor(ProjectiveSub(2, 2, 1), [(False, True, True)])

    def test_last_infinite(self):
        spec = ProjectiveSub(2, 2, 1)
        assert last_infinite(spec) == {(True, True), (False, True)}


class TestRestriction:
    def test_unit_in_stratum(self):
        spec = SphereSub(2, 2, 2)
        u = ConvElement.delta(spec, spec.unit((0, INF)))
        assert restrict_closed(u, last_infinite(spec)) == u

    def test_kills_open_part(self):
        spec = SphereSub(2, 2, 2)
        u = ConvElement.delta(spec, spec.unit((0, 1)))
        assert restrict_closed(u, last_infinite(spec)).is_zero()

    def test_rank_nullity(self):
        spec = SphereSub(2, 2, 2)
        rep = verify_exactness(spec, last_infinite(spec))
        assert rep.kernel_dim + rep.image_dim == rep.total == len(spec.enumerate())
        assert rep.kernel_dim == len(complement_ideal_basis(spec, last_infinite(spec)))
        assert rep.ok

    @pytest.mark.parametrize("spec", [SphereSub(1, 3, 2), SphereSub(2, 3, 2), ProjectiveSub(1, 3, 2),
                                      ProjectiveSub(3, 2, 1), PodlesSub(3, 2)])
    def test_exactness(self, spec):
        closed = last_infinite(spec) if not isinstance(spec, PodlesSub) else \
            closed_descriptor(spec, [(True, True)])
        assert verify_exactness(spec, closed, seed=4).ok

    def test_homomorphism_random(self):
        spec = ProjectiveSub(2, 3, 2)
        closed = last_infinite(spec)
        rng = np.random.default_rng(0)
        small = [g for g in spec.enumerate() if all(abs(g.x[i]) <= 1 for i in spec.bounded_coords(g))]
        for _ in range(5):
            f, h = random_element(spec, rng, small, 8), random_element(spec, rng, small, 8)
            lhs = restrict_closed(f @ h, closed)
            rhs = restrict_closed(f, closed) @ restrict_closed(h, closed)
            assert lhs.max_abs_diff(rhs) <= 1e-12


class TestEmbeddings:
    def test_sphere_formula(self):
        g = Morphism((1,), (2,), (0,))
        assert sphere_embedding(g) == Morphism((1,), (2, -3), (0, INF))

    def test_projective_formula(self):
        g = Morphism((), (1, -1), (INF, INF))
        assert projective_embedding(g) == Morphism((), (1, -1, 0), (INF, INF, INF))

    @pytest.mark.parametrize("n", [2, 3])
    def test_sphere_onto(self, n):
        assert verify_embedding(SphereSub(n - 1, 2, 1), SphereSub(n, 2, 1)).ok

    def test_sphere_n2_full(self):
        rep = verify_embedding(SphereSub(1, 3, 2), SphereSub(2, 3, 2))
        assert rep.ok and rep.source_count == rep.target_count == 50

    def test_projective_onto(self):
        assert verify_embedding(ProjectiveSub(2, 3, 2), ProjectiveSub(3, 3, 2)).ok

    def test_type_error(self):
        with pytest.raises(TypeError):
            verify_embedding(SphereSub(1, 2, 1), ProjectiveSub(2, 2, 1))

    @pytest.mark.parametrize("n", [1, 2])
    def test_open_stratum(self, n):
        assert open_stratum_bijection(SphereSub(n, 3, 2))


class TestSeries:
    def test_n2(self):
        rep = composition_series(ProjectiveSub(2, 3, 2))
        assert [s.dimension for s in rep] == [1, 9, 81]
        assert all(s.matrix_units for s in rep)

    def test_top_unit(self):
        top = composition_series(ProjectiveSub(3, 2, 1))[0]
        assert top.points == 1 and top.dimension == 1

    def test_small_bound_breaks_units(self):
        # with B = 1 the pair (0, 2) is missing, so K = 3 points do not form a full system
        rep = composition_series(ProjectiveSub(1, 3, 1))
        assert not rep[1].matrix_units

    def test_requires_projective(self):
        with pytest.raises(TypeError):
            composition_series(SphereSub(1, 2, 1))


class TestPodles:
    def test_structure(self):
        rep = podles_structure(PodlesSub(3, 2))
        assert rep.ok
        assert [b.dimension for b in rep.blocks] == [9, 9]
        assert rep.circle_arrows == 5
