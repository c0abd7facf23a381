"""
    Hermite normal form of integer bases and sublattices of a quadratic
    lattice in canonical coordinates.

    The canonical form is column style: the basis vectors are the columns
    of a d x r matrix H in lower echelon form.  Column j has a positive
    pivot in row p_j with p_0 < p_1 < ... and zeros above it, and in every
    pivot row the entries left of the pivot lie in [0, pivot).  Two bases
    span the same sublattice exactly when their forms coincide.

"""

__all__ = ['hermite_normal_form',
           'integer_kernel',
           'saturation_index',
           'SublatticeHNF',
           'primitive_closure']

import itertools
import math

import numpy as np

from equilattice._errors import InputError, LatticeError
from equilattice.utils.checks_and_conversions import check_integer_array
from equilattice.utils.exact import batch_det, batch_gram
from equilattice.lattice.quadratic_lattice import (QuadraticLattice,
                                                   GramMatrix)


def _row_hnf(rows, ncols, transform=False):
    '''
    Row style HNF by repeated Euclidean elimination on python integers.
    Returns the reduced rows, the pivot columns and, if asked for, the
    unimodular U with U A = H.
    '''
    A = [[int(x) for x in row] for row in rows]
    m = len(A)
    U = [[int(i == j) for j in range(m)] for i in range(m)] if transform \
        else None
    pivots = []
    top = 0
    for col in range(ncols):
        if top == m:
            break
        while True:
            nonzero = [i for i in range(top, m) if A[i][col] != 0]
            if not nonzero:
                break
            i_min = min(nonzero, key=lambda i: abs(A[i][col]))
            A[top], A[i_min] = A[i_min], A[top]
            if transform:
                U[top], U[i_min] = U[i_min], U[top]
            done = True
            for i in range(top + 1, m):
                if A[i][col] != 0:
                    q = A[i][col] // A[top][col]
                    A[i] = [a - q*b for a, b in zip(A[i], A[top])]
                    if transform:
                        U[i] = [a - q*b for a, b in zip(U[i], U[top])]
                    if A[i][col] != 0:
                        done = False
            if done:
                break
        if A[top][col] == 0:
            continue
        if A[top][col] < 0:
            A[top] = [-a for a in A[top]]
            if transform:
                U[top] = [-a for a in U[top]]
        for i in range(top):
            q = A[i][col] // A[top][col]
            if q:
                A[i] = [a - q*b for a, b in zip(A[i], A[top])]
                if transform:
                    U[i] = [a - q*b for a, b in zip(U[i], U[top])]
        pivots.append(col)
        top += 1
    return A, pivots, U

def _to_array(rows):
    flat = [x for row in rows for x in row]
    dtype = np.int64 if all(abs(x) < 2**62 for x in flat) else object
    return np.array(rows, dtype=dtype)

def hermite_normal_form(A, transform=False):
    '''
    Column Hermite normal form of a d x r integer matrix of full column
    rank.

    Parameters
    ----------
    A: array like
        d x r integer matrix, the basis vectors are the columns
    transform: bool, optional
        also return the unimodular r x r matrix U with A U = H

    Returns
    -------
    H: :class:`numpy.ndarray`
        the canonical d x r basis
    U: :class:`numpy.ndarray`
        only when `transform` is True
    '''
    A = check_integer_array(A, ndim=2)
    d, r = A.shape
    R, pivots, V = _row_hnf(A.T.tolist(), d, transform)
    if len(pivots) != r:
        raise LatticeError("Basis vectors are linearly dependent")
    H = _to_array(R).T
    if transform:
        return H, _to_array(V).T
    return H

def integer_kernel(M):
    '''
    Basis (as rows) of the integer vectors x with M x = 0

    Parameters
    ----------
    M: array like
        m x d integer matrix

    Returns
    -------
    :class:`numpy.ndarray`
        k x d integer matrix, k = d - rank(M)
    '''
    M = check_integer_array(M, ndim=2)
    m, d = M.shape
    R, pivots, U = _row_hnf(M.T.tolist(), m, transform=True)
    rows = U[len(pivots):]
    if not rows:
        return np.zeros((0, d), dtype=np.int64)
    return _to_array(rows)

def saturation_index(vectors):
    '''
    Index of the sublattice spanned by independent integer vectors (rows)
    in its saturation.  This is the gcd of the maximal minors, the product
    of the elementary divisors.
    '''
    V = check_integer_array(vectors, ndim=2)
    r, d = V.shape
    cols = list(itertools.combinations(range(d), r))
    minors = batch_det(np.stack([V[:, list(c)] for c in cols]))
    g = 0
    for x in minors:
        g = math.gcd(g, int(x))
    if g == 0:
        raise LatticeError("Basis vectors are linearly dependent")
    return g


class SublatticeHNF(object):
    '''
    A rank r sublattice of a quadratic lattice, stored by its canonical
    column HNF basis.

    Parameters
    ----------
    lattice: :class:`QuadraticLattice`
        ambient lattice
    vectors: array like
        r x d integer matrix whose rows span the sublattice
    '''
    def __init__(self, lattice, vectors):
        if not isinstance(lattice, QuadraticLattice):
            raise InputError("Expecting a QuadraticLattice")
        V = check_integer_array(vectors)
        if V.ndim == 1:
            V = V.reshape(1, -1)
        if V.shape[1] != lattice.rank:
            raise InputError("Vectors must have length %d" % lattice.rank)
        self._lattice = lattice
        self._basis = hermite_normal_form(V.T)
        self._basis.setflags(write=False)
        self._gram = GramMatrix(batch_gram(lattice.gram,
                                           self._basis.T[None])[0])
        self._index = saturation_index(self._basis.T)

    @property
    def lattice(self):
        return self._lattice

    @property
    def rank(self):
        return self._basis.shape[1]

    @property
    def basis(self):
        '''
        d x r canonical basis, one basis vector per column
        '''
        return self._basis

    @property
    def vectors(self):
        '''
        the basis vectors as rows
        '''
        return self._basis.T

    @property
    def gram(self):
        return self._gram

    @property
    def discriminant(self):
        return self._gram.det

    @property
    def index(self):
        '''
        index in the saturation
        '''
        return self._index

    @property
    def is_primitive(self):
        return self._index == 1

    @property
    def key(self):
        '''
        hashable canonical form
        '''
        return tuple(int(x) for x in self._basis.flat)

    def __repr__(self):
        return 'SublatticeHNF(%s, %s)' % (self._lattice.name,
                                          repr(self.vectors.tolist()))

    def __eq__(self, other):
        if isinstance(other, SublatticeHNF):
            return self._lattice == other.lattice and self.key == other.key
        raise NotImplementedError('Wrong input type of %s' % type(other))

    def __ne__(self, other):
        return not self.__eq__(other)

    def __hash__(self):
        return hash(self.key)

    def __lt__(self, other):
        raise NotImplementedError("Only equality comparison allowed")

    def __le__(self, other):
        raise NotImplementedError("Only equality comparison allowed")

    def __gt__(self, other):
        raise NotImplementedError("Only equality comparison allowed")

    def __ge__(self, other):
        raise NotImplementedError("Only equality comparison allowed")


def primitive_closure(L, s):
    '''
    Saturation of a sublattice, the intersection of its rational span with
    Z^d.

    Parameters
    ----------
    L: :class:`QuadraticLattice`
    s: :class:`SublatticeHNF` or array like
        the sublattice, or r x d spanning vectors

    Returns
    -------
    saturation: :class:`SublatticeHNF`
    index: int
        disc(s) = index**2 * disc(saturation)
    '''
    if not isinstance(s, SublatticeHNF):
        s = SublatticeHNF(L, s)
    d, r = s.basis.shape
    if r == d:
        sat = np.eye(d, dtype=np.int64)
    else:
        # orthogonal of the orthogonal
        N = integer_kernel(s.vectors)
        sat = integer_kernel(N)
    closure = SublatticeHNF(L, sat)
    if closure.rank != r:
        raise LatticeError("Saturation has the wrong rank")
    return closure, s.index
