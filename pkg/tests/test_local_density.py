from unittest import main, TestCase

from fractions import Fraction

import numpy as np
import sympy

from equilattice._errors import InputError
from equilattice.lattice import get_lattice
from equilattice.counting import (count_solutions_mod,
                                  count_solutions_modulus, local_density,
                                  siegel_weil_relative,
                                  growth_exponent_check)


class TestCountSolutions(TestCase):

    def test_sum_of_three_squares_mod_three(self):
        self.assertEqual(count_solutions_mod('Z3', 1, [[1]], 3, 1), 6)

    def test_methods_agree_diagonal(self):
        for a, s in [(2, 3), (3, 3), (5, 2)]:
            counts = set(count_solutions_mod('Z3', 1, [[2]], a, s, method=m)
                         for m in ['scan', 'hensel', 'convolution'])
            self.assertEqual(len(counts), 1, (a, s))

    def test_methods_agree_non_diagonal(self):
        for M in [[[2]], [[3]], [[0]]]:
            scan = count_solutions_mod('A2', 1, M, 3, 3, method='scan')
            hensel = count_solutions_mod('A2', 1, M, 3, 3, method='hensel')
            self.assertEqual(scan, hensel)

    def test_methods_agree_rank_two(self):
        M = np.eye(2, dtype=int)
        scan = count_solutions_mod('Z3', 2, M, 3, 2, method='scan')
        hensel = count_solutions_mod('Z3', 2, M, 3, 2, method='hensel')
        self.assertEqual(scan, hensel)
        self.assertGreater(scan, 0)

    def test_indefinite(self):
        scan = count_solutions_mod('U', 1, [[2]], 3, 3, method='scan')
        hensel = count_solutions_mod('U', 1, [[2]], 3, 3, method='hensel')
        self.assertEqual(scan, hensel)

    def test_composite_modulus(self):
        self.assertEqual(count_solutions_modulus('Z2', 1, [[1]], 15), 16)
        self.assertEqual(count_solutions_modulus('Z2', 1, [[1]], 15,
                                                 method='scan'), 16)

    def test_invalid(self):
        self.assertRaises(InputError, count_solutions_mod, 'Z3', 1, [[1]],
                          4, 1)
        self.assertRaises(InputError, count_solutions_mod, 'Z3', 2, [[1]],
                          3, 1)
        self.assertRaises(InputError, count_solutions_mod, 'Z3', 1, [[1]],
                          3, 1, method='fourier')
        self.assertRaises(InputError, count_solutions_mod, 'A2', 1, [[1]],
                          3, 1, method='convolution')


class TestLocalDensity(TestCase):

    def test_smooth_value(self):
        res = local_density('Z3', 1, [[1]], 3)
        self.assertEqual(res.counts, [6, 54])
        self.assertEqual(res.value, Fraction(2, 3))
        self.assertEqual(res.level, 1)
        self.assertTrue(res.stabilized)

    def test_odd_prime_closed_form(self):
        # (1 - p^-4) / (1 - (m/p) p^-2) for a sum of five squares
        for p in [3, 5, 7]:
            for m in [1, 2, 3]:
                if m % p == 0:
                    continue
                chi = sympy.legendre_symbol(m, p)
                expected = Fraction(p**4 - 1, p**4) / \
                    (1 - Fraction(chi, p**2))
                self.assertEqual(local_density('Z5', 1, [[m]], p).value,
                                 expected)

    def test_empty_fibre(self):
        res = local_density('Z1', 1, [[2]], 3)
        self.assertEqual(res.counts, [0])
        self.assertEqual(res.value, 0)
        self.assertTrue(res.stabilized)

    def test_levels_one_and_two(self):
        res = local_density('Z5', 1, [[2]], 3, stop_early=False, s_max=3)
        self.assertEqual(len(res.counts), 3)
        self.assertEqual(res.normalized[0], res.normalized[1])

    def test_frame(self):
        res = local_density('Z5', 1, [[4]], 2, s_max=8)
        df = res.to_frame()
        self.assertEqual(list(df.columns), ['prime', 's', 'raw_count',
                                            'normalized', 'stabilized'])
        self.assertTrue(df['stabilized'].iloc[-1])

    def test_invalid(self):
        self.assertRaises(InputError, local_density, 'Z3', 1, [[1]], 3,
                          s_max=1)


class TestRelativeVolume(TestCase):

    def test_primes(self):
        vol = siegel_weil_relative('Z5', [[26]])
        self.assertEqual(sorted(vol.local_factors), [2, 3, 5, 7, 13])
        self.assertEqual(vol.exponent, Fraction(3, 2))
        self.assertTrue(vol.tail_bounded)
        self.assertGreater(vol.value, 0)
        self.assertAlmostEqual(np.log(vol.value), vol.log_value)

    def test_rank_too_large(self):
        self.assertRaises(InputError, siegel_weil_relative, 'Z2',
                          np.eye(2, dtype=int))

    def test_growth_exponent(self):
        Ms = [[[2*n]] for n in range(1, 21)
              if all(e == 1 for e in sympy.factorint(n).values())]
        report = growth_exponent_check('Z5', Ms)
        self.assertAlmostEqual(report['expected'], 1.5)
        self.assertLess(abs(report['slope'] - 1.5), 0.1)
        self.assertTrue(report['table']['primitive'].all())

    def test_growth_invalid(self):
        self.assertRaises(InputError, growth_exponent_check, 'Z5',
                          [[[2]], [[4]], [[6]]])
        self.assertRaises(InputError, growth_exponent_check, 'Z5',
                          [[[2]]]*4)
        self.assertRaises(InputError, growth_exponent_check, 'Z4',
                          [[[2]], [[4]], [[6]], [[10]]])


if __name__ == '__main__':
    main()
