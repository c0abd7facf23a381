from unittest import main, TestCase

import math
from fractions import Fraction

import numpy as np
import sympy

from equilattice._errors import InputError
from equilattice.measure import WindowFunction, fundamental_domain_oracle
from equilattice.cm import (UHPoint, HeckeMatrix, BinaryQuadraticForm,
                            FUNDAMENTAL_DOMAIN_AREA, hecke_coset_reps,
                            fixed_point, reduce_to_fundamental_domain,
                            word_matrix, reduced_forms, hurwitz_class_number,
                            elliptic_fixed_points, fixed_point_table,
                            class_number_table, hurwitz_relation,
                            region_area, default_regions,
                            cm_equidistribution_report)

RHO = complex(-0.5, math.sqrt(3)/2)


def _box(bounds, name='box'):
    return WindowFunction('box', target='fundamental_domain', name=name,
                          bounds=bounds)


class TestHeckeMatrices(TestCase):

    def test_coset_counts(self):
        self.assertEqual(len(hecke_coset_reps(1)), 1)
        self.assertEqual(len(hecke_coset_reps(2)), 3)
        self.assertEqual(len(hecke_coset_reps(12)), 28)
        for p in sympy.primerange(2, 98):
            self.assertEqual(len(hecke_coset_reps(int(p))), p + 1)

    def test_coset_shape(self):
        for M in hecke_coset_reps(18):
            a, b, c, d = M.entries
            self.assertEqual(M.det, 18)
            self.assertEqual(c, 0)
            self.assertTrue(0 <= b < d)
        self.assertEqual(len(set(hecke_coset_reps(18))), 39)

    def test_coset_bad_input(self):
        self.assertRaises(InputError, hecke_coset_reps, 0)
        self.assertRaises(InputError, hecke_coset_reps, -3)
        self.assertRaises(InputError, hecke_coset_reps, 2.5)

    def test_determinant_must_be_positive(self):
        self.assertRaises(InputError, HeckeMatrix, 0, 1, 1, 0)
        self.assertRaises(InputError, HeckeMatrix, 1, 0, 0, 0.5)

    def test_associated_form(self):
        M = HeckeMatrix(1, -2, 1, -1)
        self.assertEqual(M.associated_form().to_tuple(), (1, -2, 2))
        self.assertEqual(M.associated_form().discriminant, M.discriminant)
        flipped = HeckeMatrix(0, 1, -1, 0)
        self.assertEqual(flipped.associated_form().to_tuple(), (1, 0, 1))

    def test_conjugation_moves_the_form(self):
        M = HeckeMatrix(0, -1, 1, 0)
        T = [[1, 1], [0, 1]]
        self.assertEqual(M.conjugate(T), HeckeMatrix(-1, -2, 1, 1))
        self.assertEqual(M.conjugate(T).associated_form(),
                         M.associated_form().act(T))


class TestFixedPoints(TestCase):

    def test_rotation_by_quarter_turn(self):
        z = fixed_point([[0, -1], [1, 0]])
        self.assertAlmostEqual(z.x, 0.0)
        self.assertAlmostEqual(z.y, 1.0)

    def test_order_three(self):
        z = fixed_point(HeckeMatrix(0, -1, 1, -1))
        self.assertAlmostEqual(z.x, 0.5)
        self.assertAlmostEqual(z.y, math.sqrt(3)/2)
        w, _word = reduce_to_fundamental_domain(z)
        self.assertAlmostEqual(w.x, RHO.real)
        self.assertAlmostEqual(w.y, RHO.imag)

    def test_substitution(self):
        M = HeckeMatrix(1, -2, 1, -1)
        z = fixed_point(M)
        self.assertAlmostEqual(z.x, 1.0)
        self.assertAlmostEqual(z.y, 1.0)
        image = z.act(M.as_array())
        self.assertLess(abs(image.z - z.z), 1e-12)

    def test_negative_lower_left_entry(self):
        z = fixed_point([[0, 1], [-1, 0]])
        self.assertAlmostEqual(z.x, 0.0)
        self.assertAlmostEqual(z.y, 1.0)
        z = fixed_point([[1, 2], [-1, -1]])
        self.assertLess(abs(z.act([[1, 2], [-1, -1]]).z - z.z), 1e-12)

    def test_non_elliptic(self):
        for M in ([[2, 0], [0, 1]], [[1, 1], [0, 1]], [[2, 0], [0, 2]],
                  [[2, 1], [1, 1]]):
            self.assertRaises(InputError, fixed_point, M)

    def test_fixed_by_matrix(self):
        rs = np.random.RandomState(0)
        count = 0
        while count < 50:
            a, b, c, d = (int(v) for v in rs.randint(-9, 10, size=4))
            if a*d - b*c <= 0 or (a + d)**2 >= 4*(a*d - b*c):
                continue
            M = HeckeMatrix(a, b, c, d)
            z = fixed_point(M)
            self.assertLess(abs(z.act(M.as_array()).z - z.z), 1e-10)
            count += 1


class TestReduction(TestCase):

    def test_examples(self):
        w, word = reduce_to_fundamental_domain(complex(1, 1))
        self.assertEqual(w, UHPoint(0, 1))
        self.assertEqual(word, [('T', -1)])
        w, word = reduce_to_fundamental_domain(UHPoint(0, 1))
        self.assertEqual(w, UHPoint(0, 1))
        self.assertEqual(word, [])
        w, word = reduce_to_fundamental_domain(complex(0.1, 0.1))
        self.assertTrue(w.in_fundamental_domain())
        self.assertGreaterEqual(w.y, math.sqrt(3)/2 - 1e-12)
        self.assertIn(('S', 1), word)

    def test_boundary_convention(self):
        w, _word = reduce_to_fundamental_domain(complex(0.5, 2.0))
        self.assertAlmostEqual(w.x, -0.5)
        y = math.sqrt(1 - 0.09)
        w, _word = reduce_to_fundamental_domain(complex(0.3, y))
        self.assertAlmostEqual(w.x, -0.3)
        self.assertAlmostEqual(w.y, y)

    def test_word_matrix_maps_to_reduced(self):
        rs = np.random.RandomState(2)
        for x, y in zip(rs.uniform(-3, 3, 20), rs.uniform(0.05, 2, 20)):
            z = UHPoint(x, y)
            w, word = reduce_to_fundamental_domain(z)
            g = word_matrix(word)
            self.assertEqual(g[0, 0]*g[1, 1] - g[0, 1]*g[1, 0], 1)
            self.assertLess(abs(z.act(g).z - w.z), 1e-9)

    def test_invariance_and_idempotence(self):
        rs = np.random.RandomState(4)
        letters = [('T', 1), ('T', -1), ('S', 1)]
        for _i in range(100):
            z = UHPoint(rs.uniform(-2, 2), rs.uniform(0.1, 3))
            word = [letters[j] for j in rs.randint(0, 3, size=6)]
            moved = z.act(word_matrix(word))
            w1, _w = reduce_to_fundamental_domain(z)
            w2, _w = reduce_to_fundamental_domain(moved)
            self.assertLess(abs(w1.z - w2.z), 1e-8)
            w3, again = reduce_to_fundamental_domain(w1)
            self.assertLess(abs(w3.z - w1.z), 1e-12)
            self.assertEqual(again, [])

    def test_point_validation(self):
        self.assertRaises(InputError, UHPoint, 0.0, 0.0)
        self.assertRaises(InputError, UHPoint, 0.0, -1.0)
        self.assertRaises(InputError, UHPoint, float('nan'), 1.0)


class TestBinaryForms(TestCase):

    def test_reduction(self):
        f = BinaryQuadraticForm(12, 23, 34)
        r, g = f.reduced()
        self.assertEqual(r.to_tuple(), (12, -1, 23))
        self.assertEqual(f.act(g), r)
        f = BinaryQuadraticForm(5, 8, 4)
        r, g = f.reduced()
        self.assertEqual(r.to_tuple(), (1, 0, 4))
        self.assertEqual(f.act(g), r)
        self.assertEqual(r.discriminant, f.discriminant)

    def test_reduction_moves_root(self):
        f = BinaryQuadraticForm(7, 31, 35)
        r, g = f.reduced()
        (p, q), (s, t) = g
        inverse = [[t, -q], [-s, p]]
        self.assertLess(abs(f.root().act(inverse).z - r.root().z), 1e-9)

    def test_is_reduced(self):
        self.assertFalse(BinaryQuadraticForm(2, -2, 3).is_reduced())
        self.assertTrue(BinaryQuadraticForm(2, 2, 3).is_reduced())
        self.assertFalse(BinaryQuadraticForm(2, -1, 2).is_reduced())
        self.assertTrue(BinaryQuadraticForm(2, 1, 2).is_reduced())
        self.assertFalse(BinaryQuadraticForm(3, 1, 2).is_reduced())

    def test_roots_and_weights(self):
        self.assertEqual(BinaryQuadraticForm(1, 0, 1).root(), UHPoint(0, 1))
        self.assertEqual(BinaryQuadraticForm(1, 1, 1).root(),
                         UHPoint.from_complex(RHO))
        self.assertEqual(BinaryQuadraticForm(1, 0, 1).weight, Fraction(1, 2))
        self.assertEqual(BinaryQuadraticForm(2, 2, 2).weight, Fraction(1, 3))
        self.assertEqual(BinaryQuadraticForm(1, 0, 3).weight, 1)
        # equivalent to (1, 1, 1)
        self.assertEqual(BinaryQuadraticForm(1, 3, 3).weight, Fraction(1, 3))

    def test_bad_forms(self):
        self.assertRaises(InputError, BinaryQuadraticForm(1, 3, 1).reduced)
        self.assertRaises(InputError, BinaryQuadraticForm(-1, 0, -1).root)
        self.assertRaises(InputError, BinaryQuadraticForm, 1.5, 0, 1)

    def test_reduced_forms(self):
        self.assertEqual([f.to_tuple() for f in reduced_forms(-3)],
                         [(1, 1, 1)])
        self.assertEqual([f.to_tuple() for f in reduced_forms(-4)],
                         [(1, 0, 1)])
        self.assertEqual([f.to_tuple() for f in reduced_forms(-23)],
                         [(1, 1, 6), (2, -1, 3), (2, 1, 3)])
        self.assertEqual(len(reduced_forms(-16)), 2)
        self.assertEqual(len(reduced_forms(-16, primitive=True)), 1)
        for D in range(-3, -400, -1):
            if D % 4 in (0, 1):
                for f in reduced_forms(D):
                    self.assertTrue(f.is_reduced())
                    self.assertEqual(f.discriminant, D)

    def test_hurwitz_class_numbers(self):
        expected = {3: Fraction(1, 3), 4: Fraction(1, 2), 7: 1, 8: 1,
                    11: 1, 12: Fraction(4, 3), 15: 2, 16: Fraction(3, 2),
                    20: 2, 23: 3}
        for n, H in expected.items():
            self.assertEqual(hurwitz_class_number(-n), H, n)

    def test_bad_discriminant(self):
        self.assertRaises(InputError, reduced_forms, -5)
        self.assertRaises(InputError, reduced_forms, 4)
        self.assertRaises(InputError, reduced_forms, -4.0)


class TestEllipticFixedPoints(TestCase):

    def test_level_one(self):
        records = elliptic_fixed_points(1)
        self.assertEqual([r.t for r in records], [-1, 0, 1])
        at_i = records[1]
        self.assertEqual(at_i.D, -4)
        self.assertEqual(at_i.weight, Fraction(1, 2))
        self.assertEqual(at_i.point, UHPoint(0, 1))
        for r in (records[0], records[2]):
            self.assertEqual(r.D, -3)
            self.assertEqual(r.weight, Fraction(1, 3))
            self.assertEqual(r.point, UHPoint.from_complex(RHO))

    def test_level_two(self):
        table = class_number_table(2)
        self.assertEqual(list(table['t']), [-2, -1, 0, 1, 2])
        self.assertEqual(list(table['D']), [-4, -7, -8, -7, -4])
        self.assertTrue(table['match'].all())

    def test_record_properties(self):
        for N in (3, 10, 25):
            for r in elliptic_fixed_points(N):
                self.assertEqual(r.D, r.t**2 - 4*N)
                self.assertIn(r.D % 4, (0, 1))
                self.assertLess(r.D, 0)
                self.assertEqual(r.matrix.det, N)
                self.assertTrue(r.form.is_reduced())
                self.assertTrue(r.point.in_fundamental_domain())
                image = r.point.act(r.matrix.as_array())
                self.assertLess(abs(image.z - r.point.z), 1e-12)

    def test_class_count_oracle(self):
        for N in range(1, 51):
            records = elliptic_fixed_points(N)
            table = class_number_table(N, records)
            self.assertTrue(table['match'].all(), N)
            lhs, rhs = hurwitz_relation(N, records)
            self.assertEqual(lhs, rhs, N)

    def test_parallel_matches_serial(self):
        serial = fixed_point_table(elliptic_fixed_points(30))
        dask = fixed_point_table(elliptic_fixed_points(30, parallel=True))
        self.assertTrue(serial.equals(dask))

    def test_form_method_matches_scan(self):
        for N in range(1, 31):
            scan = elliptic_fixed_points(N)
            forms = elliptic_fixed_points(N, method='forms')
            self.assertEqual([r.matrix for r in scan],
                             [r.matrix for r in forms])
            self.assertTrue(fixed_point_table(scan).equals(
                fixed_point_table(forms)))
        self.assertRaises(InputError, elliptic_fixed_points, 5, False,
                          'sieve')

    def test_table_columns(self):
        table = fixed_point_table(1)
        self.assertEqual(list(table.columns),
                         ['N', 't', 'D', 'x', 'y', 'weight', 'a', 'b', 'c'])
        self.assertEqual(len(table), 3)


class TestRegions(TestCase):

    def test_whole_domain(self):
        whole = WindowFunction('all', target='fundamental_domain')
        self.assertAlmostEqual(region_area(whole), math.pi/3)
        box = _box([[-0.5, 0.5], [0.0, float('inf')]])
        self.assertAlmostEqual(region_area(box), FUNDAMENTAL_DOMAIN_AREA)
        self.assertAlmostEqual(region_area(
            WindowFunction('empty', target='fundamental_domain')), 0.0)

    def test_box_above_arc(self):
        self.assertAlmostEqual(region_area(_box([[0, 0.25], [2, 4]])),
                               0.0625)
        self.assertAlmostEqual(region_area(_box([[0.6, 0.9], [2, 4]])), 0.0)

    def test_box_crossing_arc(self):
        s = math.sqrt(1 - 0.81)
        expected = 2*math.asin(s) + 2*(0.5 - s)/0.9
        box = _box([[-0.5, 0.5], [0.9, float('inf')]])
        self.assertAlmostEqual(region_area(box), expected)
        est, err = fundamental_domain_oracle(box, 200000, seed=1)
        self.assertLess(abs(est - expected), 5*err + 1e-3)

    def test_complement(self):
        box = _box([[0, 0.25], [2, 4]])
        comp = WindowFunction('complement', target='fundamental_domain',
                              window=box)
        self.assertAlmostEqual(region_area(comp), math.pi/3 - 0.0625)

    def test_only_boxes(self):
        ball = WindowFunction('ball', target='fundamental_domain',
                              center=(0, 2), radius=0.5)
        self.assertRaises(InputError, region_area, ball)
        cap = WindowFunction('cap', center=[1, 0], half_angle=0.3)
        self.assertRaises(InputError, region_area, cap)

    def test_default_regions(self):
        regions = default_regions()
        self.assertEqual(len(regions), 4)
        areas = [region_area(w) for w in regions]
        self.assertAlmostEqual(areas[0], areas[1])
        self.assertAlmostEqual(areas[2], areas[3])
        for w, area in zip(regions, areas):
            est, err = fundamental_domain_oracle(w, 100000, seed=3)
            self.assertLess(abs(est - area), 5*err + 1e-4)


class TestEquidistributionReport(TestCase):

    def test_whole_and_empty(self):
        regions = [WindowFunction('all', target='fundamental_domain',
                                  name='whole'),
                   WindowFunction('empty', target='fundamental_domain',
                                  name='none')]
        table, summary = cm_equidistribution_report([5, 6], regions)
        whole = table[table['region_id'] == 'whole']
        none = table[table['region_id'] == 'none']
        self.assertTrue(np.allclose(whole['normalized'], 1.0))
        self.assertTrue((none['count'] == 0).all())
        self.assertTrue((none['ratio'] == 0).all())
        self.assertEqual(list(summary['N']), [5, 6, 'pooled'])
        self.assertEqual(list(summary['deg'])[:2], [6, 12])

    def test_total_is_class_number_sum(self):
        table, summary = cm_equidistribution_report([7])
        lhs, _rhs = hurwitz_relation(7)
        self.assertAlmostEqual(summary['total'][0], float(lhs))
        self.assertAlmostEqual(summary['b_N'][0], float(lhs)/(math.pi/3))

    def test_mirror_regions_agree(self):
        table, _summary = cm_equidistribution_report(range(30, 41))
        for N, rows in table.groupby(table['N'].astype(str)):
            counts = dict(zip(rows['region_id'], rows['count']))
            self.assertEqual(counts['lower-left'], counts['lower-right'], N)
            self.assertEqual(counts['upper-left'], counts['upper-right'], N)

    def test_pooled_ratios_near_one(self):
        table, summary = cm_equidistribution_report(range(100, 150))
        pooled = table[table['N'] == 'pooled']
        self.assertEqual(len(pooled), 4)
        for value in pooled['normalized']:
            self.assertLess(abs(value - 1), 0.3)
        self.assertTrue(np.isfinite(summary['dispersion'].iloc[-1]))

    def test_bad_input(self):
        self.assertRaises(InputError, cm_equidistribution_report, [])
        self.assertRaises(InputError, cm_equidistribution_report, [0])
        twice = default_regions()[:1]*2
        self.assertRaises(InputError, cm_equidistribution_report, [3], twice)


if __name__ == '__main__':
    main()
