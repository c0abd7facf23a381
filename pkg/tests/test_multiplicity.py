from unittest import main, TestCase

import math

import numpy as np
import sympy

from equilattice._errors import InputError
from equilattice.lattice import get_lattice
from equilattice.measure import WindowFunction
from equilattice.counting import (hnf_index_count, dirichlet_index_count,
                                  iter_index_hnf, count_sublattices_of_index,
                                  index_count_table, MultiplicitySeries,
                                  alpha_constant,
                                  sublattice_discriminant_counts,
                                  multiplicity_relation_table,
                                  verify_multiplicity_relation)


class TestIndexCounts(TestCase):

    def test_known_values(self):
        self.assertEqual(hnf_index_count(1, 12), 1)
        self.assertEqual(hnf_index_count(2, 2), 3)
        self.assertEqual(hnf_index_count(3, 2), 7)
        self.assertEqual(dirichlet_index_count(2, 6), 12)
        self.assertEqual(count_sublattices_of_index(2, 4), 7)

    def test_rank_two_is_sigma(self):
        for k in range(1, 60):
            self.assertEqual(hnf_index_count(2, k), sympy.divisor_sigma(k))

    def test_two_counts_agree(self):
        for r in range(1, 5):
            for k in range(1, 501):
                a, b = count_sublattices_of_index(r, k, full_output=True)
                self.assertEqual(a, b)

    def test_explicit_hnf(self):
        for r, k in [(2, 6), (3, 4), (3, 5)]:
            forms = list(iter_index_hnf(r, k))
            self.assertEqual(len(forms), hnf_index_count(r, k))
            for H in forms:
                self.assertEqual(round(np.linalg.det(H)), k)
            keys = set(tuple(H.flat) for H in forms)
            self.assertEqual(len(keys), len(forms))

    def test_table_matches_recursion(self):
        b = index_count_table(3, 100)
        self.assertEqual(b, [hnf_index_count(3, k) for k in range(1, 101)])

    def test_invalid(self):
        self.assertRaises(InputError, hnf_index_count, 0, 3)
        self.assertRaises(InputError, dirichlet_index_count, 2, 0)


class TestMultiplicitySeries(TestCase):

    def test_properties(self):
        for r in [1, 2, 3, 4]:
            series = MultiplicitySeries(r, 200)
            self.assertTrue(series.is_multiplicative())
            self.assertTrue(series.satisfies_bound())
        series = MultiplicitySeries(2, 10)
        self.assertEqual(series[4], 7)
        self.assertEqual(len(series), 10)
        self.assertRaises(InputError, series.__getitem__, 11)
        df = series.to_frame()
        self.assertEqual(list(df.columns), ['k', 'b_k'])
        self.assertEqual(len(df), 10)


class TestAlpha(TestCase):

    def test_zeta_three(self):
        est = alpha_constant(1, 3, 200)
        zeta3 = 1.2020569031595942
        self.assertLessEqual(float(est.lower), zeta3)
        self.assertGreaterEqual(float(est.upper), zeta3)

    def test_zeta_product(self):
        # r = 2: sum sigma(k) k^-d = zeta(d) zeta(d - 1)
        est = alpha_constant(2, 5, 300)
        target = 1.0369277551433699*1.0823232337111381
        self.assertLessEqual(float(est.lower), target)
        self.assertGreaterEqual(float(est.upper), target)
        self.assertLess(float(est.tail), 1e-5)

    def test_divergent(self):
        self.assertRaises(InputError, alpha_constant, 2, 3, 10)
        self.assertRaises(InputError, alpha_constant, 1, 2, 10)


class TestMultiplicityRelation(TestCase):

    def test_lines_in_square_lattice(self):
        report = verify_multiplicity_relation(get_lattice('Z2'), 1, 4)
        self.assertEqual(report['nu'], 6)
        self.assertEqual(report['rhs'], 6)
        self.assertTrue(report['equal'])
        self.assertEqual(report['terms'][0], (1, 1, 4, 4))
        self.assertEqual(report['terms'][1], (2, 1, 1, 2))

    def test_full_rank(self):
        report = verify_multiplicity_relation(get_lattice('Z2'), 2, 4)
        self.assertEqual(report['nu'], 4)
        self.assertEqual(report['rhs'], 4)

    def test_counts_frame(self):
        df = sublattice_discriminant_counts(get_lattice('Z2'), 1, 5)
        self.assertEqual(list(df['nu']), [2, 4, 4, 6, 10])
        self.assertEqual(list(df['nu_prime']), [2, 4, 4, 4, 8])

    def test_grid(self):
        cases = [('Z2', 1, 30), ('Z3', 1, 12), ('Z3', 2, 8), ('A2', 1, 24),
                 ('A2+Z2', 2, 6)]
        for name, r, n_max in cases:
            df = multiplicity_relation_table(get_lattice(name), r, n_max)
            self.assertTrue(df['equal'].all(), (name, r))
            self.assertEqual(len(df), n_max)
            self.assertTrue(np.all(np.diff(df['nu']) >= 0))

    def test_isqrt_boundary(self):
        L = get_lattice('Z3')
        for n in [3, 4, 8, 9]:
            report = verify_multiplicity_relation(L, 1, n)
            self.assertEqual(len(report['terms']), math.isqrt(n))
            self.assertTrue(report['equal'])


class TestRelationGrid(TestCase):
    '''
    nu_n = sum_k b_k nu'_{n/k^2} on Z3, Z4 and A2+Z2 for n <= 200, in
    total and inside a cap of planes near e1 and its complement
    '''
    def _windows(self, d):
        e1 = [1] + [0]*(d - 1)
        cap = WindowFunction('cap', target='grassmannian', name='near-e1',
                             center=e1, half_angle=0.8)
        away = WindowFunction('complement', target='grassmannian',
                              name='away-e1', window=cap)
        return [cap, away]

    def _check(self, name, r, n_max=200):
        L = get_lattice(name)
        df = multiplicity_relation_table(L, r, n_max, self._windows(L.rank))
        self.assertEqual(set(df['window_id']),
                         {'total', 'near-e1', 'away-e1'})
        self.assertEqual(len(df), 3*n_max)
        bad = df[~df['equal']]
        self.assertTrue(bad.empty, (name, r, bad.head().to_dict('records')))
        last = df[df['n'] == n_max].set_index('window_id')['nu']
        self.assertGreater(last['near-e1'], 0)
        self.assertGreater(last['away-e1'], 0)
        self.assertLessEqual(last['near-e1'] + last['away-e1'],
                             last['total'])

    def test_lines(self):
        for name in ('Z3', 'Z4', 'A2+Z2'):
            self._check(name, 1)

    def test_planes_z3(self):
        self._check('Z3', 2)

    def test_planes_z4(self):
        self._check('Z4', 2)

    def test_planes_a2_z2(self):
        self._check('A2+Z2', 2)


if __name__ == '__main__':
    main()
