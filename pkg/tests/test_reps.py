import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qpg.laurent import identity, interior_difference, matrix_interior_difference, matrix_product, matrix_scale
from qpg.reps import (
    Counit,
    DeformationParams,
    Fundamental,
    RepWord,
    TorusChar,
    closed_form_nonstandard_image,
    closed_form_sphere_image,
    factor_matrix,
    nonstandard_generators,
    nonstandard_word,
    projective_generators,
    projective_word,
    rep_generator,
    rho_tilde_word,
    sphere_generators,
    sphere_word,
    standard_long_word,
    tau,
    tau_double_prime,
    tau_prime,
    word_unitarity_defect,
)

from oracle import dense_alpha, dense_gamma, dense_rep, evaluate


def _dense(op, exp):
    return op.matrix(exp).toarray()


class TestParams:
    def test_q_must_exceed_one(self):
        with pytest.raises(ValueError):
            DeformationParams(q=1.0)

    def test_negative_c(self):
        with pytest.raises(ValueError):
            DeformationParams(q=2.0, c=-1)


class TestWords:
    def test_sphere_word(self):
        assert sphere_word(2).factors == (tau_prime(2), Fundamental(2), Fundamental(1))

    def test_nonstandard_word(self):
        w = nonstandard_word(2)
        assert w.factors == (tau(2), Fundamental(2), Fundamental(1), Fundamental(2))
        assert w.fock_count == 3

    def test_standard_long_word_n1(self):
        assert standard_long_word(1).factors == (tau(1), Fundamental(1))

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_lengths(self, n):
        N = n * (n + 1) // 2
        assert len(standard_long_word(n)) == N + 1
        assert len(sphere_word(n)) == n + 1
        assert len(projective_word(n)) == n
        assert len(nonstandard_word(n)) == 2 * n

    def test_long_word_letters(self):
        letters = [f.i for f in standard_long_word(3).factors[1:]]
        assert letters == [1, 2, 1, 3, 2, 1]

    def test_bad_fundamental_index(self):
        with pytest.raises(ValueError):
            RepWord(2, (Fundamental(3),))

    def test_rho_tilde_shape(self):
        w = rho_tilde_word(nonstandard_word(3), 3)
        assert w.fock_count == 3
        assert isinstance(w.factors[3], Counit) and isinstance(w.factors[4], Counit)

    def test_rho_tilde_rejects_other_words(self):
        with pytest.raises(ValueError):
            rho_tilde_word(sphere_word(2), 2)
        with pytest.raises(ValueError):
            rho_tilde_word(nonstandard_word(1), 1)


class TestFactorMatrix:
    def test_fundamental_block(self):
        F = factor_matrix(Fundamental(1), 2, 2.0, 4)
        assert np.array_equal(F[2][2].toarray(), np.eye(4))
        assert F[0][2] is None and F[2][0] is None
        assert np.allclose(F[0][0].toarray(), dense_alpha(2.0, 4))

    def test_counit(self):
        F = factor_matrix(Counit(), 2, 2.0, 4)
        assert all(F[r][c] == (1.0 if r == c else None) for r in range(3) for c in range(3))

    def test_tau_double_prime(self):
        F = factor_matrix(tau_double_prime(2), 2, 2.0, 4)
        assert F[0][0] == (0, 0) and F[1][1] == (0, 0) and F[2][2] == (-2, -1)
        assert F[0][1] is None


class TestRepGenerator:
    def test_n1_sphere(self):
        q, D = 2.0, 6
        u21 = rep_generator(sphere_word(1), 2, 1, q, D)
        u22 = rep_generator(sphere_word(1), 2, 2, q, D)
        assert u21.exponents == [(1,)] and np.allclose(_dense(u21, (1,)), dense_gamma(q, D))
        assert u22.exponents == [(1,)] and np.allclose(_dense(u22, (1,)), dense_alpha(q, D).T)

    def test_single_letter(self):
        u = rep_generator(RepWord(1, (Fundamental(1),)), 1, 1, 2.0, 5)
        assert np.allclose(_dense(u, ()), dense_alpha(2.0, 5))

    def test_n2_sphere_images(self):
        q, D = 2.0, 5
        g, a = dense_gamma(q, D), dense_alpha(q, D)
        u33 = rep_generator(sphere_word(2), 3, 3, q, D)
        u31 = rep_generator(sphere_word(2), 3, 1, q, D)
        assert np.allclose(_dense(u33, (1,)), np.kron(a.T, np.eye(D)), atol=0)
        assert np.allclose(_dense(u31, (1,)), np.kron(g, g), atol=0)

    def test_index_error(self):
        with pytest.raises(IndexError):
            rep_generator(sphere_word(1), 3, 1, 2.0, 4)

    @pytest.mark.parametrize("word", [sphere_word(2), standard_long_word(2), nonstandard_word(2),
                                      projective_word(3), rho_tilde_word(nonstandard_word(2), 2)])
    def test_matches_dense_block_product(self, word):
        q, D = 1.7, 3
        rng = np.random.default_rng(5)
        t = np.exp(1j * rng.uniform(0, 2 * np.pi, word.torus_rank))
        ref = dense_rep(word, q, D, t)
        for (i, j), M in ref.items():
            got = evaluate(rep_generator(word, i, j, q, D), t)
            assert np.allclose(got, M, atol=1e-13), (i, j)


class TestClosedForms:
    @pytest.mark.parametrize("n", [2, 3])
    @pytest.mark.parametrize("D", [3, 6])
    def test_sphere(self, n, D):
        for i in range(1, n + 2):
            assert closed_form_sphere_image(n, i, 2.0, D) == rep_generator(sphere_word(n), n + 1, i, 2.0, D)

    def test_sphere_examples(self):
        q, D = 2.0, 4
        g, a = dense_gamma(q, D), dense_alpha(q, D)
        assert np.array_equal(_dense(closed_form_sphere_image(2, 1, q, D), (1,)), np.kron(g, g))
        assert np.allclose(_dense(closed_form_sphere_image(2, 3, q, D), (1,)), np.kron(a.T, np.eye(D)), atol=0)

    @pytest.mark.parametrize("n", [2, 3])
    @pytest.mark.parametrize("D", [3, 5])
    def test_nonstandard(self, n, D):
        for i in range(1, n + 2):
            lhs = closed_form_nonstandard_image(n, i, 1.5, D)
            assert lhs == rep_generator(nonstandard_word(n), n + 1, i, 1.5, D)

    def test_nonstandard_needs_n2(self):
        with pytest.raises(ValueError):
            closed_form_nonstandard_image(1, 1, 2.0, 4)


class TestFamilies:
    def test_sphere_generator_rank(self):
        gens = sphere_generators(2, 2.0, 4)
        assert len(gens) == 3 and all(g.trunc.torus_rank == 1 for g in gens)

    def test_row_unitarity(self):
        gens = sphere_generators(2, 2.0, 8)
        acc = gens[0] @ gens[0].adjoint()
        for g in gens[1:]:
            acc = acc + g @ g.adjoint()
        assert interior_difference(acc, identity(acc.trunc), 2) <= 1e-12

    @pytest.mark.parametrize("n", [1, 2])
    def test_projective_torus_free(self, n):
        Z = projective_generators(n, 2.0, 5)
        assert all(z.exponents == [()] for row in Z for z in row)

    def test_projective_n1_diagonal(self):
        q, D = 2.0, 7
        Z = projective_generators(1, q, D)
        assert np.allclose(Z[0][0].matrix(()).diagonal(), q ** (-2.0 * np.arange(D)), atol=0)

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_weighted_trace(self, n):
        # sum_i q^{2(i-n-1)} z_ii = 1; the unweighted sum is not the identity
        q = 2.0
        Z = projective_generators(n, q, 6)
        acc = Z[n][n]
        plain = Z[n][n]
        for i in range(n):
            acc = acc + q ** (2 * (i - n)) * Z[i][i]
            plain = plain + Z[i][i]
        assert interior_difference(acc, identity(acc.trunc), 2) <= 1e-12
        assert interior_difference(plain, identity(acc.trunc), 2) > 0.1

    @pytest.mark.parametrize("n", [1, 2])
    def test_projective_idempotent(self, n):
        Z = projective_generators(n, 2.0, 10)
        assert matrix_interior_difference(matrix_product(Z, Z), Z, 4) <= 1e-10
        assert all(Z[i][j].adjoint() == Z[j][i] for i in range(n + 1) for j in range(n + 1))

    @pytest.mark.parametrize("c", [0.5, 1.0, 2.0])
    def test_nonstandard_idempotent(self, c):
        _, Y = nonstandard_generators(2, 2.0, c, 8)
        assert matrix_interior_difference(matrix_product(Y, Y), matrix_scale(Y, 1 + c), 4) <= 1e-10
        assert all(Y[i][j].adjoint() == Y[j][i] for i in range(3) for j in range(3))

    def test_nonstandard_grading(self):
        x, Y = nonstandard_generators(3, 2.0, 1.0, 3)
        for op in x:
            for e in op.exponents:
                assert e[1] == e[2] and e[0] - 2 * e[1] == 1
        for row in Y:
            for op in row:
                for e in op.exponents:
                    assert e[1] == e[2] and e[0] - 2 * e[1] == 0

    def test_c_zero_allowed(self):
        x, _ = nonstandard_generators(2, 2.0, 0.0, 4)
        assert x[0] == rep_generator(nonstandard_word(2), 3, 1, 2.0, 4)

    def test_negative_c_rejected(self):
        with pytest.raises(ValueError):
            nonstandard_generators(2, 2.0, -0.1, 4)


class TestRhoTilde:
    @pytest.mark.parametrize("c", [0.5, 2.0])
    def test_x1_star_x1(self, c):
        w = rho_tilde_word(nonstandard_word(2), 2)
        x, Y = nonstandard_generators(2, 2.0, c, 6, word=w)
        assert Y[0][0] == c * identity(Y[0][0].trunc)
        assert x[0].exponents == [(1, 0)]
        assert np.array_equal(x[0].matrix((1, 0)).toarray(), math.sqrt(c) * np.eye(6))

    def test_lower_sphere(self):
        n, q, D = 3, 2.0, 4
        w = rho_tilde_word(nonstandard_word(n), n)
        _, Y = nonstandard_generators(n, q, 1.0, D, word=w)
        L = [rep_generator(nonstandard_word(n - 1), n, m, q, D) for m in range(1, n + 1)]
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                lower = L[i - 1].adjoint() @ L[j - 1]
                assert Y[i][j].exponents == [(0,) * n]
                assert (Y[i][j].matrix((0,) * n) != lower.matrix((0,) * (n - 1))).nnz == 0


class TestUnitarity:
    @pytest.mark.parametrize("make", [standard_long_word, sphere_word, nonstandard_word, projective_word])
    @pytest.mark.parametrize("n", [1, 2])
    def test_interior_unitary(self, make, n):
        left, right = word_unitarity_defect(make(n), 2.0, 8)
        assert left <= 1e-12 and right <= 1e-12

    @given(st.floats(1.05, 4.0), st.integers(1, 2))
    def test_any_q(self, q, n):
        left, right = word_unitarity_defect(sphere_word(n), q, 6)
        assert max(left, right) <= 1e-12
