"""Kernel-level tests: quadrature, roots, rational matrices, graded
matrices, theta functions."""

import numpy as np
import pytest
import mpmath
from fractions import Fraction

from loopbracket.numkernel import (
    Contour, contour_quad, poly_roots, adjugate,
    RationalMatrix, split_on_disk, GradedLaurentMatrix,
    ThetaParams, theta_eval, theta1,
)
from loopbracket.errors import (
    PoleEvaluation, DegenerateInput, NonConvergent, BadLattice,
)

rng = np.random.default_rng(20260826)


def random_ratmat(N, poles, max_order=1, poly_deg=0):
    def blk(*shape):
        return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    poly = blk(poly_deg + 1, N, N)
    pole_map = {a: blk(max_order, N, N) for a in poles}
    return RationalMatrix(N, poly=poly, poles=pole_map)


# ------------------------------------------------------------------
# contour quadrature

class TestContourQuad:
    def test_residue_of_inverse(self):
        C = Contour(0, 1.0, 128)
        assert abs(contour_quad(lambda z: 1 / z, C) - 1.0) < 1e-13

    def test_no_residue_polynomial(self):
        C = Contour(0, 1.0, 128)
        assert abs(contour_quad(lambda z: z ** 3, C)) < 1e-13

    def test_rational_vs_residue_sum(self):
        # quadrature of tr(g^2) against exact residue calculus
        g = random_ratmat(2, [1.7 + 0.4j, -1.5 + 0.8j], max_order=2)
        prod = (g @ g).trace()
        C = Contour(0, 1.0, 256)
        quad = contour_quad(lambda z: np.trace(g.eval(z) @ g.eval(z),
                                               axis1=-2, axis2=-1), C)
        # both poles are outside the unit circle; add a pole inside
        h = random_ratmat(2, [0.3 - 0.2j], max_order=1)
        gh = g + h
        quad = contour_quad(
            lambda z: np.trace(gh.eval(z) @ gh.eval(z), axis1=-2, axis2=-1),
            C)
        exact = np.trace(((gh @ gh).trace()).residue(0.3 - 0.2j))
        assert abs(quad - exact) < 1e-11 * max(1.0, abs(exact))

    def test_derivative_integrates_to_zero(self):
        g = random_ratmat(3, [0.4, 1.9j], max_order=2, poly_deg=1)
        dg = g.derivative()
        C = Contour(0, 1.0, 256)
        val = contour_quad(lambda z: dg.eval(z)[..., 0, 1], C)
        assert abs(val) < 1e-11

    def test_nonconvergent_raises(self):
        # pole ON the contour: trapezoid cannot stabilize
        C = Contour(0, 1.0, 128)
        with pytest.raises(NonConvergent):
            contour_quad(lambda z: 1.0 / (z - 1.0000001), C)

    def test_node_count_validation(self):
        with pytest.raises(ValueError):
            Contour(0, 1.0, 100)
        with pytest.raises(ValueError):
            Contour(0, 1.0, 32)


# ------------------------------------------------------------------
# roots / adjugate

class TestPolyRoots:
    def test_quadratic(self):
        r = poly_roots([-1, 0, 1])  # z^2 - 1
        assert np.allclose(np.sort_complex(r), [-1, 1])

    def test_triple_root(self):
        r = poly_roots([0, 0, 0, 1])  # z^3
        assert len(r) == 3
        assert np.all(np.abs(r) < 1e-5)

    def test_factor_expansion_oracle(self):
        true = rng.standard_normal(8) + 1j * rng.standard_normal(8)
        c = np.array([1.0 + 0j])
        for root in true:
            c = np.convolve(c, [-root, 1.0])
        got = poly_roots(c)
        for root in true:
            assert np.min(np.abs(got - root)) < 1e-8

    def test_degenerate(self):
        with pytest.raises(DegenerateInput):
            poly_roots([0, 0, 0])

    def test_cluster_multiplicity(self):
        # two roots 1e-9 apart are merged
        eps = 1e-9
        c = np.convolve([-1.0, 1.0], [-(1.0 + eps), 1.0])
        r = poly_roots(c)
        assert len(r) == 2 and abs(r[0] - r[1]) < 1e-12


class TestAdjugate:
    def test_identity(self):
        assert np.allclose(adjugate(np.eye(2)), np.eye(2))

    def test_diag(self):
        got = adjugate(np.diag([2.0 + 0j, 5.0]))
        assert np.allclose(got, np.diag([5.0, 2.0]))

    def test_det_identity_random(self):
        M = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        lhs = M @ adjugate(M)
        det = np.linalg.det(M)
        assert np.linalg.norm(lhs - det * np.eye(4)) \
            <= 1e-10 * np.linalg.norm(M) ** 3

    def test_singular_matrix(self):
        M = np.outer([1.0, 2.0, 3.0], [0.5, 1.0, -1.0]).astype(complex)
        A = adjugate(M)
        assert np.linalg.norm(M @ A) < 1e-12

    def test_batched(self):
        M = rng.standard_normal((5, 3, 3)) + 0j
        A = adjugate(M)
        for i in range(5):
            assert np.allclose(A[i], adjugate(M[i]))


# ------------------------------------------------------------------
# rational matrices

class TestRationalMatrix:
    def test_eval_identity(self):
        M = RationalMatrix.identity(2)
        assert np.allclose(M.eval(2 + 1j), np.eye(2))

    def test_eval_simple_pole(self):
        M = RationalMatrix.monomial(2, -1)  # I/z
        assert np.allclose(M.eval(2.0), np.eye(2) / 2)

    def test_eval_two_ways(self):
        # closed form vs Horner on an expanded common-denominator form
        M = random_ratmat(3, [0.5 + 0.1j, -1.2], max_order=2, poly_deg=1)
        z = 0.9 * np.exp(1j * rng.uniform(0, 2 * np.pi, 20))
        direct = M.eval(z)
        # expand: numerator(z) = M(z) * prod (z-a)^2, via polynomial algebra
        denom_roots = [0.5 + 0.1j, 0.5 + 0.1j, -1.2, -1.2]
        num = direct.copy()
        for a in denom_roots:
            num = num * (z - a)[:, None, None]
        denom = np.ones_like(z)
        for a in denom_roots:
            denom = denom * (z - a)
        assert np.allclose(num / denom[:, None, None], direct, rtol=1e-12)

    def test_pole_guard(self):
        M = RationalMatrix.monomial(2, -1)
        with pytest.raises(PoleEvaluation):
            M.eval(1e-9)

    def test_mul_identity(self):
        A = random_ratmat(2, [1.5], max_order=2, poly_deg=1)
        B = A @ RationalMatrix.identity(2)
        z = 0.7 + 0.2j
        assert np.allclose(A.eval(z), B.eval(z))

    def test_mul_pole_orders_add(self):
        inv_z = RationalMatrix.monomial(2, -1)
        sq = inv_z @ inv_z
        assert sq.pole_order(0.0) == 2
        assert np.allclose(sq.eval(0.5), np.eye(2) * 4)

    def test_mul_pointwise_oracle(self):
        A = random_ratmat(3, [1.4 + 0.2j, 0.3], max_order=2, poly_deg=1)
        B = random_ratmat(3, [1.4 + 0.2j, -0.6j], max_order=2, poly_deg=1)
        AB = A @ B
        for _ in range(20):
            z = 2.5 * (rng.standard_normal() + 1j * rng.standard_normal())
            try:
                want = A.eval(z) @ B.eval(z)
                got = AB.eval(z)
            except PoleEvaluation:
                continue
            assert np.allclose(got, want, rtol=1e-12, atol=1e-12)

    def test_mul_associative(self):
        A = random_ratmat(2, [1.3], max_order=1)
        B = random_ratmat(2, [-0.4], max_order=1)
        C = random_ratmat(2, [2.0j], max_order=1, poly_deg=1)
        z = 0.77 - 0.31j
        lhs = ((A @ B) @ C).eval(z)
        rhs = (A @ (B @ C)).eval(z)
        assert np.allclose(lhs, rhs, rtol=1e-11)

    def test_residue(self):
        C0 = np.array([[1.0, 2.0], [3.0, 4.0]], dtype=complex)
        M = RationalMatrix.cauchy(C0, 0.3)
        assert np.allclose(M.residue(0.3), C0)

    def test_split_on_disk(self):
        M = random_ratmat(2, [0.4 + 0.1j, 1.8], max_order=2, poly_deg=1)
        plus, minus = split_on_disk(M, 0.0, 1.0)
        # plus holomorphic away from the disk interior; minus vanishes at 0
        z = 0.9 * np.exp(1j * np.linspace(0, 2 * np.pi, 17))
        assert np.allclose(plus.eval(z) + minus.eval(z), M.eval(z))
        assert np.allclose(minus.eval(np.array([0.0]))[0], 0.0, atol=1e-13)
        assert plus.pole_order(1.8) == 0
        assert plus.pole_order(0.4 + 0.1j) == 2
        # idempotence
        p2, m2 = split_on_disk(plus, 0.0, 1.0)
        assert np.allclose(p2.eval(z), plus.eval(z))
        assert m2.norm() < 1e-13


# ------------------------------------------------------------------
# graded Laurent matrices

class TestGraded:
    def test_grading_enforced(self):
        with pytest.raises(ValueError):
            GradedLaurentMatrix(2, {0: np.array([[0, 1], [0, 0]],
                                               dtype=complex)})

    def test_product_preserves_grading(self):
        N = 3
        def rand_graded(pmin, pmax):
            coeffs = {}
            for p in range(pmin, pmax + 1):
                mask = GradedLaurentMatrix.grading_mask(N, p)
                mat = (rng.standard_normal((N, N))
                       + 1j * rng.standard_normal((N, N))) * mask
                coeffs[p] = mat
            return GradedLaurentMatrix(N, coeffs)
        A = rand_graded(-2, 2)
        B = rand_graded(-1, 3)
        AB = A @ B  # constructor re-checks the grading structurally
        zeta = 0.8 * np.exp(0.3j)
        assert np.allclose(AB.eval(zeta), A.eval(zeta) @ B.eval(zeta))

    def test_equivariance(self):
        # M(q zeta) = I1 M(zeta) I1^{-1}
        N = 3
        q = np.exp(2j * np.pi / N)
        I1 = np.diag(q ** np.arange(N))
        coeffs = {}
        for p in range(-2, 3):
            mask = GradedLaurentMatrix.grading_mask(N, p)
            coeffs[p] = rng.standard_normal((N, N)) * mask + 0j
        M = GradedLaurentMatrix(N, coeffs)
        zeta = 1.1 * np.exp(0.7j)
        lhs = M.eval(q * zeta)
        rhs = I1 @ M.eval(zeta) @ np.linalg.inv(I1)
        assert np.allclose(lhs, rhs)


# ------------------------------------------------------------------
# theta functions

class TestTheta:
    def test_odd_at_zero(self):
        p = ThetaParams(1.0, 1j)
        assert abs(theta_eval(0.0, p)) < 1e-14

    def test_quasi_periodicity(self):
        tau = 0.3 + 1.1j
        zs = rng.standard_normal(100) * 0.4 + 1j * rng.standard_normal(100) * 0.3
        t = theta1(zs, tau)
        # theta1(z+1) = -theta1(z)
        assert np.max(np.abs(theta1(zs + 1, tau) + t)) <= 1e-12 * np.max(np.abs(t))
        # theta1(z+tau) = -exp(-i pi tau - 2 pi i z) theta1(z)
        mult = -np.exp(-1j * np.pi * tau - 2j * np.pi * zs)
        resid = theta1(zs + tau, tau) - mult * t
        assert np.max(np.abs(resid / (mult * t))) <= 1e-11

    def test_refinement_oracle(self):
        p50 = ThetaParams(1.0, 1j, truncation=50)
        p200 = ThetaParams(1.0, 1j, truncation=200)
        z = 0.3 + 0.1j
        assert abs(theta_eval(z, p50) - theta_eval(z, p200)) < 1e-13

    def test_against_mpmath(self):
        # independent implementation oracle: theta1 via mpmath.jtheta
        tau = 0.2 + 0.9j
        q = complex(mpmath.exp(1j * mpmath.pi * tau))
        for z in [0.17 + 0.05j, -0.4 + 0.3j, 1.23 - 0.11j]:
            want = complex(mpmath.jtheta(1, mpmath.pi * z, q))
            got = theta1(z, tau)
            assert abs(got - want) < 1e-12 * max(1.0, abs(want))

    def test_bad_lattice(self):
        with pytest.raises(BadLattice):
            ThetaParams(1.0, -1j).tau

    def test_characteristics_shift(self):
        # theta[a,b](z) = exp(i pi tau a^2 + 2 pi i a (z+b)) theta(z + b + a tau)
        tau = 1.3j
        a, b = Fraction(1, 3), Fraction(1, 4)
        p = ThetaParams(1.0, tau, a=a, b=b)
        p00 = ThetaParams(1.0, tau, a=Fraction(0), b=Fraction(0))
        z = 0.21 - 0.13j
        lhs = theta_eval(z, p)
        rhs = np.exp(1j * np.pi * tau * float(a) ** 2
                     + 2j * np.pi * float(a) * (z + float(b))) \
            * theta_eval(z + float(b) + float(a) * tau, p00)
        assert abs(lhs - rhs) < 1e-12 * abs(rhs)
