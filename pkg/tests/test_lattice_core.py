from unittest import main, TestCase

import itertools
import math

import numpy as np

from equilattice._errors import InputError, LatticeError
from equilattice.lattice import (QuadraticLattice, GramMatrix, VectorTuple,
                                 SublatticeHNF, get_lattice, gram_of_tuple,
                                 discriminant, primitive_closure,
                                 hermite_normal_form, integer_kernel, mu1,
                                 enumerate_vectors_norm_leq, box_scan_vectors,
                                 iter_vector_blocks,
                                 enumerate_tuples_disc_leq,
                                 count_bases_with_norm_leq,
                                 enumerate_sublattices_disc_leq,
                                 enumerate_primitive_planes,
                                 enumerate_representations)


class TestQuadraticLattice(TestCase):

    def test_registry(self):
        self.assertEqual(get_lattice('Z4').rank, 4)
        self.assertEqual(get_lattice('A2').det, 3)
        self.assertEqual(get_lattice('U').signature, (1, 1))
        self.assertEqual(get_lattice('D4').det, 4)
        E8 = get_lattice('E8')
        self.assertTrue(E8.is_unimodular)
        self.assertTrue(E8.is_even)
        self.assertEqual(E8.signature, (8, 0))
        L = get_lattice('A2+Z2')
        self.assertEqual(L.rank, 4)
        self.assertEqual(L.det, 3)
        self.assertEqual(get_lattice('diag(1,-1,-1)').signature, (1, 2))

    def test_invalid_gram(self):
        self.assertRaises(LatticeError, QuadraticLattice, [[1, 1], [1, 1]])
        self.assertRaises(InputError, QuadraticLattice, [[1, 2], [0, 1]])
        self.assertRaises(InputError, QuadraticLattice, [[1.5, 0], [0, 1]])
        self.assertRaises(InputError, get_lattice, 'B7')

    def test_json_round_trip(self):
        L = get_lattice('A2')
        self.assertEqual(QuadraticLattice.from_json(L.to_json()), L)
        self.assertEqual(QuadraticLattice.from_json(L.to_dict()).name, 'A2')

    def test_majorant(self):
        self.assertTrue(np.array_equal(get_lattice('Z3').majorant(),
                                       np.eye(3)))
        P = get_lattice('diag(1,-1)').majorant()
        self.assertTrue(np.array_equal(P, 2*np.eye(2)))
        P = QuadraticLattice([[0, 5], [5, 0]]).majorant()
        self.assertTrue(np.array_equal(P, 6*np.eye(2)))

    def test_direct_sum(self):
        L = get_lattice('A2').direct_sum(get_lattice('Z2'))
        self.assertEqual(L, get_lattice('A2+Z2'))


class TestTuples(TestCase):

    def test_gram_of_tuple(self):
        Z2 = get_lattice('Z2')
        self.assertEqual(gram_of_tuple(Z2, [[1, 0], [0, 1]]), np.eye(2))
        self.assertEqual(gram_of_tuple(Z2, [[1, 1], [1, -1]]),
                         GramMatrix([[2, 0], [0, 2]]))
        U = get_lattice('U')
        self.assertEqual(gram_of_tuple(U, [[1, 1]]), GramMatrix([[2]]))

    def test_dimension_mismatch(self):
        self.assertRaises(InputError, gram_of_tuple, get_lattice('Z2'),
                          [[1, 0, 0]])

    def test_discriminant(self):
        Z2 = get_lattice('Z2')
        self.assertEqual(discriminant(Z2, [[1, 1], [1, -1]]), 4)
        self.assertEqual(discriminant(Z2, [[2, 0], [0, 1]]), 4)
        self.assertEqual(discriminant(Z2, [[1, 0], [2, 0]]), 0)

    def test_discriminant_homogeneous(self):
        L = get_lattice('A2+Z2')
        t = np.array([[1, 0, 1, 0], [0, 1, 0, 2]])
        for c in [2, 3, 5]:
            self.assertEqual(discriminant(L, c*t), c**4*discriminant(L, t))

    def test_vector_tuple(self):
        t = VectorTuple(get_lattice('Z2'), [[1, 1], [0, 1]])
        self.assertEqual(t.r, 2)
        self.assertEqual(t.discriminant, 1)
        self.assertTrue(t.in_omega)
        t = VectorTuple(get_lattice('U'), [[1, 0]])
        self.assertFalse(t.in_omega)

    def test_gram_checks(self):
        self.assertTrue(GramMatrix([[2, 1], [1, 2]]).is_positive_definite())
        self.assertFalse(GramMatrix([[1, 1], [1, 1]]).is_positive_definite())
        self.assertTrue(GramMatrix([[1, 1], [1, 1]]).is_positive_semidefinite())
        self.assertFalse(GramMatrix([[0, 0], [0, -1]]).is_positive_semidefinite())


class TestHermiteNormalForm(TestCase):

    def test_primitive_closure(self):
        Z2 = get_lattice('Z2')
        sat, index = primitive_closure(Z2, [[2, 0]])
        self.assertEqual(index, 2)
        self.assertTrue(np.array_equal(sat.vectors, [[1, 0]]))
        sat, index = primitive_closure(Z2, [[1, 1], [1, -1]])
        self.assertEqual(index, 2)
        self.assertTrue(np.array_equal(sat.vectors, np.eye(2)))
        sat, index = primitive_closure(Z2, [[1, 2]])
        self.assertEqual(index, 1)
        self.assertTrue(np.array_equal(sat.vectors, [[1, 2]]))

    def test_closure_identity(self):
        L = get_lattice('Z4')
        rs = np.random.RandomState(7)
        for _ in range(30):
            V = rs.randint(-6, 7, size=(2, 4))
            if discriminant(L, V) == 0:
                continue
            s = SublatticeHNF(L, V)
            sat, index = primitive_closure(L, s)
            self.assertTrue(sat.is_primitive)
            self.assertEqual(s.discriminant, index**2*sat.discriminant)

    def test_canonical_under_unimodular(self):
        rs = np.random.RandomState(1)
        A = np.array([[3, 1], [0, 2], [5, -1], [1, 1]])
        H = hermite_normal_form(A)
        for _ in range(20):
            U = np.eye(2, dtype=int)
            for _ in range(4):
                E = np.eye(2, dtype=int)
                E[0, 1] = rs.randint(-3, 4)
                U = U.dot(E) if rs.rand() < 0.5 else U.dot(E.T)
            self.assertTrue(np.array_equal(hermite_normal_form(A.dot(U)), H))

    def test_transform(self):
        A = np.array([[4, 2], [2, 6], [0, 1]])
        H, U = hermite_normal_form(A, transform=True)
        self.assertTrue(np.array_equal(A.dot(U), H))
        self.assertEqual(abs(round(np.linalg.det(U))), 1)

    def test_dependent(self):
        self.assertRaises(LatticeError, hermite_normal_form,
                          [[1, 2], [1, 2]])

    def test_integer_kernel(self):
        M = np.array([[1, 2, 3]])
        K = integer_kernel(M)
        self.assertEqual(K.shape, (2, 3))
        self.assertTrue(np.all(M.dot(K.T) == 0))


class TestVectorEnumeration(TestCase):

    def test_small_counts(self):
        self.assertEqual(len(enumerate_vectors_norm_leq('Z2', 1)), 4)
        self.assertEqual(len(enumerate_vectors_norm_leq('Z2', 2)), 8)
        self.assertEqual(len(enumerate_vectors_norm_leq('A2', 2)), 6)
        self.assertEqual(len(enumerate_vectors_norm_leq('Z2', 0)), 0)

    def test_negative_bound(self):
        self.assertRaises(InputError, enumerate_vectors_norm_leq, 'Z2', -1)

    def test_indefinite_rejected(self):
        self.assertRaises(LatticeError, enumerate_vectors_norm_leq, 'U', 3)

    def test_box_scan_agreement(self):
        for name in ['Z3', 'A2', 'D4', 'A2+Z2', 'diag(1,2,3)']:
            for n in [1, 5, 17, 50]:
                X = enumerate_vectors_norm_leq(name, n)
                Y = box_scan_vectors(name, n)
                self.assertTrue(np.array_equal(X, Y), '%s %d' % (name, n))

    def test_order_and_uniqueness(self):
        X = enumerate_vectors_norm_leq('Z3', 10)
        self.assertEqual(len({tuple(v) for v in X}), len(X))
        self.assertEqual([tuple(v) for v in X], sorted(tuple(v) for v in X))

    def test_blocks(self):
        total = sum(len(X) for X, _ in iter_vector_blocks('Z4', 30))
        self.assertEqual(total, len(enumerate_vectors_norm_leq('Z4', 30)))
        for X, norms in iter_vector_blocks('A2', 12):
            self.assertTrue(np.all(norms <= 12))
            self.assertEqual(len(set(X[:, -1])), 1)

    def test_e8_roots(self):
        self.assertEqual(len(enumerate_vectors_norm_leq('E8', 2)), 240)

    def test_mu1(self):
        self.assertAlmostEqual(mu1(np.eye(3, dtype=int)), 1.0)
        self.assertAlmostEqual(mu1([[2, 1], [1, 2]]), math.sqrt(2))
        self.assertAlmostEqual(mu1([[5, 0], [0, 7]]), math.sqrt(5))
        self.assertAlmostEqual(mu1([[4, 3], [3, 4]]), math.sqrt(2))
        self.assertRaises(LatticeError, mu1, [[1, 2], [2, 1]])


class TestTupleEnumeration(TestCase):

    def test_rank_one_is_vectors(self):
        T = enumerate_tuples_disc_leq('Z2', 1, 2)
        X = enumerate_vectors_norm_leq('Z2', 2)
        self.assertTrue(np.array_equal(np.array([t.vectors[0] for t in T]),
                                       X))

    def test_pairs(self):
        self.assertEqual(len(enumerate_tuples_disc_leq('Z2', 2, 1)), 8)

    def test_bounds_hold(self):
        for t in enumerate_tuples_disc_leq('A2+Z2', 2, 6):
            self.assertTrue(t.gram.is_positive_definite())
            self.assertTrue(0 < t.discriminant <= 6)

    def test_r_out_of_range(self):
        self.assertRaises(InputError, enumerate_tuples_disc_leq, 'Z2', 3, 4)
        self.assertRaises(InputError, enumerate_tuples_disc_leq, 'Z2', 0, 4)

    def test_representations(self):
        self.assertEqual(len(enumerate_representations('Z2', [[1]])), 4)
        self.assertEqual(len(enumerate_representations('Z2', np.eye(2))), 8)
        self.assertEqual(len(enumerate_representations('A2', [[2]])), 6)
        for t in enumerate_representations('Z3', [[2, 1], [1, 2]]):
            self.assertEqual(t.gram, GramMatrix([[2, 1], [1, 2]]))
        self.assertRaises(InputError, enumerate_representations, 'Z2',
                          [[1, 2], [2, 1]])


class TestSublatticeEnumeration(TestCase):

    def test_small_counts(self):
        self.assertEqual(len(enumerate_sublattices_disc_leq('Z2', 2, 1)), 1)
        self.assertEqual(len(enumerate_sublattices_disc_leq('Z2', 2, 4)), 4)
        self.assertEqual(len(enumerate_sublattices_disc_leq('Z2', 1, 1)), 2)

    def test_primitive_planes(self):
        self.assertEqual(len(enumerate_primitive_planes('Z2', 1, 4)), 4)
        self.assertEqual(len(enumerate_primitive_planes('Z2', 2, 1)), 1)
        self.assertEqual(enumerate_primitive_planes('Z2', 1, 0), [])

    def test_rank_limit(self):
        self.assertRaises(InputError, enumerate_sublattices_disc_leq,
                          'Z5', 5, 3)

    def test_against_brute_force(self):
        # rank 2 sublattices of Z^3 by brute force over small bases
        L = get_lattice('Z3')
        n = 6
        V = np.array(list(itertools.product(range(-3, 4), repeat=3)))
        norms = np.sum(V**2, axis=1)
        disc = np.outer(norms, norms) - V.dot(V.T)**2
        seen = set()
        for i, j in zip(*np.nonzero((disc > 0) & (disc <= n))):
            seen.add(SublatticeHNF(L, [V[i], V[j]]).key)
        found = {s.key for s in enumerate_sublattices_disc_leq(L, 2, n)}
        self.assertEqual(found, seen)

    def test_canonicality_and_index(self):
        L = get_lattice('A2+Z2')
        rs = np.random.RandomState(3)
        subs = enumerate_sublattices_disc_leq(L, 2, 12)
        self.assertEqual(len({s.key for s in subs}), len(subs))
        for s in subs:
            U = np.array([[1, rs.randint(-3, 4)], [0, 1]]).dot(
                np.array([[1, 0], [rs.randint(-3, 4), 1]]))
            moved = SublatticeHNF(L, U.T.dot(s.vectors))
            self.assertEqual(moved.key, s.key)
            sat, index = primitive_closure(L, s)
            self.assertEqual(s.discriminant, index**2*sat.discriminant)
            self.assertTrue(0 < s.discriminant <= 12)

    def test_double_counting(self):
        for name, n in [('Z2', 10), ('Z3', 8), ('A2', 12)]:
            L = get_lattice(name)
            lhs = len(enumerate_tuples_disc_leq(L, 2, n))
            rhs = sum(count_bases_with_norm_leq(s, n)
                      for s in enumerate_sublattices_disc_leq(L, 2, n))
            self.assertEqual(lhs, rhs, name)


if __name__ == '__main__':
    main()
