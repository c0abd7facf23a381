from unittest import main, TestCase

import json
import math

import numpy as np
import scipy.linalg

from equilattice._errors import (ConfigurationError, InputError,
                                 QuadratureError)
from equilattice.forms import (AlternatingForm, MultiVector, CurvatureForm,
                               LieConfiguration, build_lie_configuration,
                               list_lie_presets, sl2_basis,
                               structure_constants_from_matrices,
                               torus_periods, adjoint_pullback, pull_push,
                               vanishing_criterion_check,
                               complex_nonvanishing_check, curvature_form,
                               chern_form, oriented_area_form,
                               proportionality_test, so31_basis,
                               sphere_volume, special_orthogonal_volume,
                               haar_special_orthogonal, euler_rotation,
                               so3_euler_rule, orthogonal_factor)


def _anti_hermitian(rs, npairs, r):
    X = rs.normal(size=(npairs, r, r)) + 1j*rs.normal(size=(npairs, r, r))
    return X - np.conj(np.swapaxes(X, 1, 2))


class TestExteriorAlgebra(TestCase):

    def test_contract_vector_into_two_form(self):
        alpha = AlternatingForm(2, 3, {(0, 1): 1.0})
        u = MultiVector(1, 3, {(0,): 1.0})
        beta = alpha.contract(u)
        self.assertEqual(beta.degree, 1)
        self.assertTrue(np.allclose(beta.coefficients, [0, 1, 0]))

    def test_contract_bivector_into_volume(self):
        alpha = AlternatingForm(3, 3, [1.0])
        u = MultiVector(2, 3, {(0, 1): 1.0})
        self.assertTrue(np.allclose(alpha.contract(u).coefficients,
                                    [0, 0, 1]))

    def test_contract_outside_support(self):
        alpha = AlternatingForm(2, 3, {(0, 1): 1.0})
        u = MultiVector(1, 3, {(2,): 1.0})
        self.assertAlmostEqual(alpha.contract(u).norm(), 0.0)

    def test_unsorted_index_sets(self):
        alpha = AlternatingForm(2, 3, {(1, 0): 2.0})
        self.assertEqual(alpha.coefficient((0, 1)), -2.0)
        self.assertEqual(alpha.coefficient((1, 0)), 2.0)
        self.assertEqual(alpha.coefficient((1, 1)), 0.0)

    def test_evaluate_is_alternating(self):
        alpha = AlternatingForm(2, 3, {(0, 1): 1.0})
        self.assertAlmostEqual(alpha.evaluate([[1, 0, 0], [0, 1, 0]]), 1.0)
        self.assertAlmostEqual(alpha.evaluate([[0, 1, 0], [1, 0, 0]]), -1.0)
        self.assertAlmostEqual(alpha.evaluate([[1, 2, 0], [1, 2, 5]]), 0.0)

    def test_wedge_of_covectors(self):
        rs = np.random.RandomState(7)
        a, b, c = rs.normal(size=(3, 5))
        fa, fb, fc = (AlternatingForm(1, 5, x) for x in (a, b, c))
        direct = AlternatingForm.from_covectors([a, b, c])
        self.assertTrue(fa.wedge(fb).wedge(fc).allclose(direct))
        self.assertTrue(fb.wedge(fa).allclose(-fa.wedge(fb)))

    def test_pair_with_multivector(self):
        rs = np.random.RandomState(3)
        C = rs.normal(size=(2, 4))
        V = rs.normal(size=(2, 4))
        alpha = AlternatingForm.from_covectors(C)
        u = MultiVector.from_vectors(V)
        self.assertAlmostEqual(alpha.pair(u), np.linalg.det(C.dot(V.T)))
        self.assertAlmostEqual(alpha.pair(u), alpha.evaluate(V))

    def test_pullback_scaling(self):
        rs = np.random.RandomState(1)
        alpha = AlternatingForm(2, 4, rs.normal(size=6))
        self.assertTrue(alpha.pullback(np.eye(4)).allclose(alpha))
        self.assertTrue(alpha.pullback(2*np.eye(4)).allclose(alpha*4.0))

    def test_pullback_evaluates_on_images(self):
        rs = np.random.RandomState(2)
        alpha = AlternatingForm(2, 3, rs.normal(size=3))
        A = rs.normal(size=(3, 4))
        V = rs.normal(size=(2, 4))
        self.assertAlmostEqual(alpha.pullback(A).evaluate(V),
                               alpha.evaluate(V.dot(A.T)))

    def test_degree_overflow(self):
        alpha = AlternatingForm(2, 3, [1.0, 0.0, 0.0])
        self.assertRaises(InputError, alpha.wedge, alpha)
        self.assertRaises(InputError, alpha.pullback, np.ones((3, 1)))
        self.assertRaises(InputError, AlternatingForm, 4, 3)

    def test_space_mismatch(self):
        alpha = AlternatingForm(2, 3, [1.0, 0.0, 0.0], space='g/k')
        u = MultiVector(1, 3, {(0,): 1.0}, space='g/l')
        self.assertRaises(InputError, alpha.contract, u)
        self.assertRaises(InputError, alpha.__add__,
                          AlternatingForm(2, 3, space='g/l'))

    def test_only_equality_comparison(self):
        alpha = AlternatingForm(1, 2, [1.0, 2.0])
        self.assertTrue(alpha == AlternatingForm(1, 2, [1.0, 2.0]))
        self.assertTrue(alpha != AlternatingForm(1, 2, [1.0, 3.0]))
        self.assertRaises(NotImplementedError, alpha.__lt__, alpha)


class TestLieConfiguration(TestCase):

    def test_structure_constants_sl2(self):
        c = structure_constants_from_matrices(sl2_basis())
        self.assertAlmostEqual(c[0, 1, 2], 2.0)
        self.assertAlmostEqual(c[2, 0, 1], -2.0)
        self.assertAlmostEqual(c[2, 1, 0], 2.0)
        self.assertTrue(np.allclose(c, -np.swapaxes(c, 0, 1)))

    def test_matrices_not_closed(self):
        self.assertRaises(ConfigurationError,
                          structure_constants_from_matrices,
                          sl2_basis()[:2])

    def test_killing_so3(self):
        cfg = build_lie_configuration('so3')
        self.assertTrue(np.allclose(cfg.killing, -2*np.eye(3)))

    def test_killing_sl2(self):
        cfg = build_lie_configuration('so21-geodesic')
        self.assertTrue(np.allclose(cfg.killing, np.diag([8., 8., -8.])))

    def test_abelian_rejected(self):
        self.assertRaises(ConfigurationError, LieConfiguration,
                          np.zeros((2, 2, 2)), h=[0], k=[1])

    def test_jacobi_failure(self):
        c = structure_constants_from_matrices(sl2_basis())
        c[0, 1, 0] += 1.0
        c[1, 0, 0] -= 1.0
        self.assertRaises(ConfigurationError, LieConfiguration, c,
                          h=[0], k=[2])

    def test_not_antisymmetric(self):
        c = structure_constants_from_matrices(sl2_basis())
        c[0, 1, 0] += 1.0
        self.assertRaises(ConfigurationError, LieConfiguration, c,
                          h=[0], k=[2])

    def test_subalgebra_not_closed(self):
        c = structure_constants_from_matrices(sl2_basis())
        self.assertRaises(ConfigurationError, LieConfiguration, c,
                          h=[0, 1], k=[2])

    def test_wrong_intersection(self):
        c = structure_constants_from_matrices(sl2_basis())
        self.assertRaises(ConfigurationError, LieConfiguration, c,
                          h=[0], k=[2], l=[2])

    def test_intersection_computed(self):
        cfg = build_lie_configuration('sl2xsl2-diagonal')
        c = cfg.structure_constants
        other = LieConfiguration(c, h=cfg.h.T, k=[2, 5])
        self.assertEqual(other.dims['l'], 1)
        self.assertTrue(np.allclose(np.abs(other.l[:, 0]),
                                    np.abs(cfg.l[:, 0])/np.linalg.norm(
                                        cfg.l[:, 0])))

    def test_dims(self):
        cfg = build_lie_configuration('sl2xsl2-diagonal')
        dims = cfg.dims
        self.assertEqual(dims['g'], 6)
        self.assertEqual(dims['g/l'], 5)
        self.assertEqual(dims['k/l'], 1)
        self.assertEqual(dims['g/k'], 4)
        self.assertEqual(dims['g/h'], 3)
        self.assertEqual(dims['h/l'], 2)

    def test_bad_complex_structure(self):
        c = structure_constants_from_matrices(sl2_basis())
        # ad X3 squares to -4 on g/k
        self.assertRaises(ConfigurationError, LieConfiguration, c,
                          h=[0], k=[2], complex_structure={'ad': [0, 0, 1]})

    def test_complex_orientation_needs_structure(self):
        c = structure_constants_from_matrices(sl2_basis())
        self.assertRaises(ConfigurationError, LieConfiguration, c,
                          h=[0], k=[2], orientation={'g/h': 'complex'})

    def test_unknown_orientation_key(self):
        c = structure_constants_from_matrices(sl2_basis())
        self.assertRaises(ConfigurationError, LieConfiguration, c,
                          h=[0], k=[2], orientation={'g/k': 1})

    def test_block_outside_k(self):
        c = structure_constants_from_matrices(sl2_basis())
        self.assertRaises(ConfigurationError, LieConfiguration, c,
                          h=[2], k=[2],
                          blocks={'b': {'basis': [0], 'rep': [[[1j]]]}})

    def test_complex_complement_is_j_stable(self):
        cfg = build_lie_configuration('sl2xsl2-diagonal')
        C = cfg.complex_complement()
        self.assertEqual(C.shape, (6, 2))
        J = cfg.complex_structure
        self.assertTrue(np.allclose(J.dot(C[:, 0]), C[:, 1]))

    def test_scale_factor_orthogonal(self):
        cfg = build_lie_configuration('sl2xsl2-diagonal')
        lam, orthogonal = cfg.scale_factor()
        self.assertAlmostEqual(lam, 1.0)
        self.assertTrue(orthogonal)

    def test_from_json_matches_preset(self):
        doc = {'matrices': sl2_basis().tolist(), 'h': [0], 'k': [2],
               'l': []}
        preset = build_lie_configuration('so21-geodesic')
        self.assertTrue(LieConfiguration.from_json(doc) == preset)
        self.assertTrue(build_lie_configuration(json.dumps(doc)) == preset)
        self.assertTrue(build_lie_configuration({'preset': 'so21-geodesic'})
                        == preset)

    def test_from_json_errors(self):
        doc = {'matrices': sl2_basis().tolist(), 'h': [0], 'k': [2],
               'colour': 'red'}
        self.assertRaises(ConfigurationError, LieConfiguration.from_json, doc)
        self.assertRaises(ConfigurationError, LieConfiguration.from_json,
                          {'h': [0], 'k': [2]})
        self.assertRaises(ConfigurationError, build_lie_configuration,
                          'no-such-preset')
        self.assertRaises(ConfigurationError, build_lie_configuration,
                          {'preset': 'no-such-preset'})

    def test_presets_listed(self):
        names = [name for name, _desc in list_lie_presets()]
        for name in ['so21-geodesic', 'sl2xsl2-diagonal', 'so22-weight2',
                     'su11-disc', 'so3', 'so31-plane']:
            self.assertIn(name, names)
            build_lie_configuration(name)


class TestPullPush(TestCase):

    def test_torus_periods(self):
        cfg = build_lie_configuration('so21-geodesic')
        self.assertAlmostEqual(torus_periods(cfg, cfg.k)[0], math.pi)
        cfg = build_lie_configuration('so22-weight2')
        for T in torus_periods(cfg, cfg.k):
            self.assertAlmostEqual(T, 2*math.pi)
        cfg = build_lie_configuration('sl2xsl2-diagonal')
        self.assertAlmostEqual(torus_periods(cfg, cfg.k_mod_l)[0],
                               math.pi*math.sqrt(2))

    def test_non_compact_fibre(self):
        c = structure_constants_from_matrices(sl2_basis())
        cfg = LieConfiguration(c, h=[2], k=[0])
        self.assertRaises(QuadratureError, torus_periods, cfg, cfg.k)
        self.assertRaises(QuadratureError, pull_push, cfg)

    def test_geodesic_vanishes(self):
        cfg = build_lie_configuration('so21-geodesic')
        form = pull_push(cfg)
        self.assertEqual(form.degree, 1)
        self.assertLess(form.norm(), 1e-8)

    def test_geodesic_witness(self):
        cfg = build_lie_configuration('so21-geodesic')
        witness = vanishing_criterion_check(cfg)
        self.assertIsNotNone(witness)
        self.assertAlmostEqual(witness['determinant'], -1.0, places=8)
        self.assertAlmostEqual(witness['parameters'][0], math.pi/2)

    def test_diagonal_is_area_multiple(self):
        cfg = build_lie_configuration('sl2xsl2-diagonal')
        form = pull_push(cfg)
        self.assertEqual(form.degree, 2)
        self.assertLess(form.metadata['error_estimate'], 1e-10)
        s, residual = proportionality_test(form, oriented_area_form(cfg),
                                           subspace=cfg.h_mod_l)
        self.assertAlmostEqual(s, math.pi/math.sqrt(2), places=8)
        self.assertLess(residual, 1e-8)
        self.assertIsNone(vanishing_criterion_check(cfg))

    def test_diagonal_complex_nonvanishing(self):
        cfg = build_lie_configuration('sl2xsl2-diagonal')
        report = complex_nonvanishing_check(cfg)
        self.assertTrue(report['positive'])
        self.assertAlmostEqual(report['value'], math.pi/math.sqrt(2),
                               places=8)

    def test_nonnegative_on_complex_lines_of_fibre_image(self):
        cfg = build_lie_configuration('sl2xsl2-diagonal')
        form = pull_push(cfg)
        J = cfg.complex_structure
        rs = np.random.RandomState(11)
        for coeffs in rs.normal(size=(10, 2)):
            D = cfg.h_mod_l.dot(coeffs)
            value = form.evaluate(np.vstack([D, J.dot(D)]), ambient=True)
            self.assertGreaterEqual(value, -1e-10)

    def test_weight_two_proportional_to_chern(self):
        cfg = build_lie_configuration('so22-weight2')
        form = pull_push(cfg)
        c1 = chern_form(curvature_form(cfg, 'V20'), 1)
        s, residual = proportionality_test(form, c1)
        self.assertAlmostEqual(s, 2*math.pi**2, places=6)
        self.assertLess(residual, 1e-6)
        self.assertLess(form.metadata['invariance_residual'], 1e-8)

    def test_weight_two_complex_nonvanishing(self):
        cfg = build_lie_configuration('so22-weight2')
        report = complex_nonvanishing_check(cfg)
        self.assertAlmostEqual(report['value'], math.pi, places=8)
        self.assertEqual(report['multivector'].degree, 2)

    def test_complex_check_needs_structure(self):
        cfg = build_lie_configuration('so21-geodesic')
        self.assertRaises(ConfigurationError, complex_nonvanishing_check,
                          cfg)

    def test_trivial_fibre_is_volume(self):
        cfg = build_lie_configuration('so3')
        form = pull_push(cfg)
        self.assertEqual(form.metadata['method'], 'point')
        self.assertTrue(np.allclose(form.coefficients,
                                    cfg.volume_form().coefficients))

    def test_scale_covariance(self):
        cfg = build_lie_configuration('sl2xsl2-diagonal')
        base = pull_push(cfg)
        tripled = pull_push(cfg, scale=3.0)
        self.assertTrue(np.allclose(tripled.coefficients,
                                    3*base.coefficients, rtol=1e-12,
                                    atol=1e-14))
        self.assertEqual(tripled.metadata['volume_scale'], 3.0)

    def test_complement_independence(self):
        cfg = build_lie_configuration('sl2xsl2-diagonal')
        rs = np.random.RandomState(1)
        C = cfg.m + cfg.k.dot(rs.normal(size=(2, 4)))
        base = pull_push(cfg)
        moved = pull_push(cfg, complement=C)
        X = rs.normal(size=(2, 6))
        self.assertAlmostEqual(base.evaluate(X, ambient=True),
                               moved.evaluate(X, ambient=True), places=8)

    def test_complement_must_span(self):
        cfg = build_lie_configuration('sl2xsl2-diagonal')
        C = cfg.m.copy()
        C[:, 3] = C[:, 2]
        self.assertRaises(InputError, pull_push, cfg, complement=C)

    def test_node_count(self):
        cfg = build_lie_configuration('so21-geodesic')
        self.assertRaises(InputError, pull_push, cfg, nodes=7)
        self.assertRaises(InputError, pull_push, cfg, nodes=2)

    def test_monte_carlo_agrees(self):
        cfg = build_lie_configuration('so22-weight2')
        exact = pull_push(cfg)
        mc = pull_push(cfg, monte_carlo=True, samples=4000, seed=3)
        self.assertEqual(mc.metadata['method'], 'monte_carlo')
        err = mc.metadata['error_estimate']
        self.assertGreater(err, 0)
        self.assertTrue(np.all(np.abs(mc.coefficients - exact.coefficients)
                               <= 6*err + 1e-12))
        again = pull_push(cfg, monte_carlo=True, samples=4000, seed=3)
        self.assertTrue(np.allclose(mc.coefficients, again.coefficients))

    def test_invariance_residual(self):
        cfg = build_lie_configuration('sl2xsl2-diagonal')
        form = pull_push(cfg, invariance_samples=20, seed=5)
        self.assertLess(form.metadata['invariance_residual'], 1e-8)


class TestCompactFibre(TestCase):

    def _frame_action(self, factor, A):
        E = factor.frame
        return np.linalg.lstsq(E, A.dot(E), rcond=None)[0]

    def test_group_volumes(self):
        self.assertAlmostEqual(sphere_volume(1), 2*math.pi)
        self.assertAlmostEqual(sphere_volume(2), 4*math.pi)
        self.assertAlmostEqual(sphere_volume(3), 2*math.pi**2)
        self.assertAlmostEqual(special_orthogonal_volume(2), 2*math.pi)
        self.assertAlmostEqual(special_orthogonal_volume(3), 8*math.pi**2)
        self.assertAlmostEqual(special_orthogonal_volume(4),
                               16*math.pi**4)

    def test_haar_rotations(self):
        R = haar_special_orthogonal(4, 200, 1)
        self.assertEqual(R.shape, (200, 4, 4))
        self.assertTrue(np.allclose(np.linalg.det(R), 1.0))
        I = np.einsum('sij,skj->sik', R, R)
        self.assertTrue(np.allclose(I, np.eye(4)))
        again = haar_special_orthogonal(4, 200, 1)
        self.assertTrue(np.array_equal(R, again))

    def test_euler_rule_moments(self):
        angles, w = so3_euler_rule(16, left_invariant=False)
        self.assertAlmostEqual(w.sum(), 1.0, places=12)
        R = np.array([euler_rotation(*a) for a in angles])
        self.assertAlmostEqual(w.dot(R[:, 2, 2]**2), 1/3.0, places=12)
        self.assertAlmostEqual(w.dot(R[:, 0, 0]*R[:, 1, 1]), 0.0, places=12)
        self.assertAlmostEqual(w.dot(R[:, 0, 0]**4), 0.2, places=12)

    def test_euler_rule_for_left_invariant_functions(self):
        angles, w = so3_euler_rule(16)
        self.assertTrue(np.all(angles[:, 0] == 0))
        self.assertEqual(len(w), 16*8)
        R = np.array([euler_rotation(*a) for a in angles])
        # the last row is unchanged by rotations about the z axis
        self.assertAlmostEqual(w.dot(R[:, 2, 0]**2), 1/3.0, places=12)
        self.assertAlmostEqual(w.dot(R[:, 2, 2]**4), 0.2, places=12)
        self.assertAlmostEqual(w.dot(R[:, 2, 0]*R[:, 2, 1]), 0.0,
                               places=12)

    def test_factor_of_boosts(self):
        cfg = build_lie_configuration('so31-plane')
        factor = orthogonal_factor(cfg)
        self.assertEqual(factor.group, 'SO(3)')
        E = factor.frame
        self.assertEqual(E.shape, (6, 3))
        self.assertTrue(np.allclose(np.abs(E.T.dot(cfg.killing).dot(E)),
                                    np.eye(3)))
        # l rotates about the last frame vector
        A = factor.generator(cfg.l[:, 0])
        self.assertTrue(np.allclose(A[:, 2], 0) and np.allclose(A[2], 0))
        self.assertGreater(abs(A[0, 1]), 0.5)
        for R in haar_special_orthogonal(3, 5, 0):
            self.assertTrue(np.allclose(
                self._frame_action(factor, factor.lift(R)), R))
        angles = [[0.3, 1.1, -0.4], [0.0, math.pi, 0.0]]
        for a, A in zip(angles, factor.euler_elements(angles)):
            self.assertTrue(np.allclose(self._frame_action(factor, A),
                                        euler_rotation(*a)))

    def test_sphere_fibre_volume(self):
        cfg = build_lie_configuration('so31-plane')
        factor = orthogonal_factor(cfg)
        self.assertAlmostEqual(factor.quotient_volume(
            cfg.k_mod_l, cfg.l, [2*math.pi]), 4*math.pi, places=10)
        self.assertAlmostEqual(factor.quotient_volume(
            cfg.k, np.zeros((6, 0)), []), 8*math.pi**2, places=10)

    def test_sphere_fibre_vanishes(self):
        cfg = build_lie_configuration('so31-plane')
        form = pull_push(cfg, nodes=16)
        self.assertEqual(form.degree, 1)
        self.assertEqual(form.metadata['method'], 'euler')
        self.assertEqual(form.metadata['group'], 'SO(3)')
        self.assertEqual(form.metadata['nodes'], 16*8)
        self.assertAlmostEqual(form.metadata['fiber_volume'], 4*math.pi,
                               places=10)
        self.assertAlmostEqual(form.metadata['periods'][0], 2*math.pi)
        self.assertLess(form.norm(), 1e-8)
        self.assertLess(form.metadata['error_estimate'], 1e-10)
        self.assertLess(form.metadata['invariance_residual'], 1e-8)

    def test_sphere_fibre_witness(self):
        cfg = build_lie_configuration('so31-plane')
        witness = vanishing_criterion_check(cfg)
        self.assertIsNotNone(witness)
        self.assertEqual(len(witness['parameters']), 3)
        self.assertAlmostEqual(witness['determinant'], -1.0, places=8)

    def test_sphere_fibre_monte_carlo(self):
        cfg = build_lie_configuration('so31-plane')
        mc = pull_push(cfg, monte_carlo=True, samples=1000, seed=4)
        self.assertEqual(mc.metadata['method'], 'haar_monte_carlo')
        self.assertEqual(mc.metadata['nodes'], 1000)
        err = mc.metadata['error_estimate']
        self.assertGreater(err, 0)
        self.assertTrue(np.all(np.abs(mc.coefficients) <= 6*err + 1e-12))
        again = pull_push(cfg, monte_carlo=True, samples=1000, seed=4)
        self.assertTrue(np.allclose(mc.coefficients, again.coefficients))

    def test_stabilizer_as_subgroup(self):
        # H = L: the fibre form is the volume of g/k times the sphere area
        cfg = LieConfiguration(
            structure_constants_from_matrices(so31_basis()), h=[2],
            k=[0, 1, 2], l=[2])
        form = pull_push(cfg, nodes=8)
        self.assertEqual(form.degree, 3)
        self.assertAlmostEqual(abs(form.coefficients[0]), 4*math.pi,
                               places=8)
        self.assertLess(form.metadata['invariance_residual'], 1e-8)
        mc = pull_push(cfg, monte_carlo=True, samples=64, seed=1)
        self.assertTrue(np.allclose(mc.coefficients, form.coefficients))

    def test_non_compact_group_rejected(self):
        X = sl2_basis()
        Z = np.zeros((2, 2))
        mats = [scipy.linalg.block_diag(x, Z) for x in X] + \
            [scipy.linalg.block_diag(Z, x) for x in X]
        cfg = LieConfiguration(structure_constants_from_matrices(mats),
                               h=[3, 4, 5], k=[0, 1, 2])
        self.assertRaises(QuadratureError, orthogonal_factor, cfg)
        self.assertRaises(QuadratureError, pull_push, cfg)
        self.assertIsNone(vanishing_criterion_check(cfg))


class TestAdjointPullback(TestCase):

    def test_identity(self):
        cfg = build_lie_configuration('sl2xsl2-diagonal')
        alpha = cfg.volume_form()
        self.assertTrue(adjoint_pullback(alpha, np.eye(6)).allclose(alpha))

    def test_invariant_under_l(self):
        cfg = build_lie_configuration('sl2xsl2-diagonal')
        alpha = cfg.volume_form()
        A = scipy.linalg.expm(0.7*cfg.ad_matrix(cfg.l[:, 0]))
        self.assertTrue(adjoint_pullback(alpha, A).allclose(alpha,
                                                            atol=1e-10))

    def test_composition(self):
        cfg = build_lie_configuration('so21-geodesic')
        alpha = AlternatingForm(1, 2, [1.0, 2.0], space='g/k',
                                basis=cfg.m, kernel=cfg.k)
        ad = cfg.ad_matrix([0, 0, 1])
        A1 = scipy.linalg.expm(0.4*ad)
        A2 = scipy.linalg.expm(1.1*ad)
        both = adjoint_pullback(alpha, A1.dot(A2))
        nested = adjoint_pullback(adjoint_pullback(alpha, A1), A2)
        self.assertTrue(both.allclose(nested))

    def test_kernel_not_preserved(self):
        cfg = build_lie_configuration('sl2xsl2-diagonal')
        alpha = cfg.volume_form()
        A = scipy.linalg.expm(0.3*cfg.ad_matrix(np.eye(6)[0]))
        self.assertRaises(InputError, adjoint_pullback, alpha, A)


class TestCurvature(TestCase):

    def test_disc_curvature(self):
        cfg = build_lie_configuration('su11-disc')
        curv = curvature_form(cfg, 'u1')
        e = np.eye(3)
        self.assertTrue(np.allclose(curv.evaluate(e[0], e[1], ambient=True),
                                    [[2j]]))
        self.assertTrue(np.allclose(curv.evaluate(e[1], e[0], ambient=True),
                                    [[-2j]]))

    def test_disc_first_chern_form(self):
        cfg = build_lie_configuration('su11-disc')
        c1 = chern_form(curvature_form(cfg, 'u1'), 1)
        self.assertEqual(c1.metadata['level'], 1)
        self.assertAlmostEqual(c1.evaluate(np.eye(3)[:2], ambient=True),
                               -1/math.pi)

    def test_level_zero(self):
        cfg = build_lie_configuration('su11-disc')
        c0 = chern_form(curvature_form(cfg, 'u1'), 0)
        self.assertEqual(c0.degree, 0)
        self.assertAlmostEqual(c0.evaluate([]), 1.0)

    def test_level_out_of_range(self):
        cfg = build_lie_configuration('su11-disc')
        curv = curvature_form(cfg, 'u1')
        self.assertRaises(InputError, chern_form, curv, 2)
        big = CurvatureForm(np.zeros((1, 2, 2)), 2)
        self.assertRaises(InputError, chern_form, big, 2)

    def test_unknown_block(self):
        cfg = build_lie_configuration('su11-disc')
        self.assertRaises(ConfigurationError, curvature_form, cfg, 'v')

    def test_block_not_ideal(self):
        eps = build_lie_configuration('so3').structure_constants
        cfg = LieConfiguration(eps, h=[2], k=[0, 1, 2],
                               blocks={'b': {'basis': [2],
                                             'rep': [[[1j]]]}})
        self.assertRaises(ConfigurationError, curvature_form, cfg, 'b')

    def test_second_chern_two_by_two(self):
        rs = np.random.RandomState(4)
        curv = CurvatureForm(_anti_hermitian(rs, 6, 2), 4)
        c2 = chern_form(curv, 2)
        f = 1j/(2*math.pi)
        t = [[curv.entry(a, b)*f for b in range(2)] for a in range(2)]
        expected = t[0][0].wedge(t[1][1]) - t[0][1].wedge(t[1][0])
        self.assertTrue(c2.allclose(expected.real))
        self.assertLess(expected.imag.norm(), 1e-12)

    def test_whitney_sum(self):
        rs = np.random.RandomState(9)
        A = CurvatureForm(_anti_hermitian(rs, 15, 1), 6)
        B = CurvatureForm(_anti_hermitian(rs, 15, 2), 6)
        total = A.direct_sum(B)
        self.assertEqual(total.size, 3)
        c1A, c1B, c2B = chern_form(A, 1), chern_form(B, 1), chern_form(B, 2)
        self.assertTrue(chern_form(total, 1).allclose(c1A + c1B))
        self.assertTrue(chern_form(total, 2).allclose(c1A.wedge(c1B) + c2B))
        self.assertTrue(chern_form(total, 3).allclose(c1A.wedge(c2B)))

    def test_proportionality(self):
        rs = np.random.RandomState(6)
        f = AlternatingForm(2, 4, rs.normal(size=6))
        s, residual = proportionality_test(f*3.0, f)
        self.assertAlmostEqual(s, 3.0)
        self.assertAlmostEqual(residual, 0.0)
        self.assertRaises(InputError, proportionality_test, f,
                          AlternatingForm(2, 4))
        self.assertRaises(InputError, proportionality_test, f,
                          AlternatingForm(1, 4, [1., 0., 0., 0.]))


if __name__ == '__main__':
    main()
