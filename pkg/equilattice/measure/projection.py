"""
    Projections of tuples and sublattices onto the unit discriminant
    surface h = 1 and onto the Grassmannian of positive r-planes.

    A plane is represented by the orthogonal projector onto it, taken in
    the coordinates x -> S x where S is the square root of the ambient
    form (of its majorant for indefinite lattices).  The projector does
    not depend on the basis, and Haar measure on the Grassmannian in these
    coordinates is the measure invariant under the orthogonal group of
    the form.

"""

__all__ = ['UnitDiscriminantPoint',
           'GrassmannPoint',
           'unit_discriminant_points',
           'project_to_unit_discriminant',
           'project_to_sqrtM_frame',
           'metric_root',
           'grassmann_projectors',
           'project_to_grassmannian']

import numpy as np
import scipy.linalg

from equilattice._errors import InputError
from equilattice.utils.exact import batch_det, batch_gram
from equilattice.lattice.quadratic_lattice import (QuadraticLattice,
                                                   GramMatrix, VectorTuple,
                                                   gram_of_tuple)
from equilattice.lattice.hnf import SublatticeHNF
from equilattice.lattice.enumeration import _as_lattice

# structural tolerance on projectors
TOL = 1e-10


class UnitDiscriminantPoint(object):
    '''
    A real r-tuple of vectors with Gram determinant one

    Parameters
    ----------
    lattice: :class:`equilattice.lattice.QuadraticLattice`
    vectors: array like
        r x d real array
    '''
    def __init__(self, lattice, vectors):
        self._lattice = lattice
        self._vectors = np.atleast_2d(np.asarray(vectors, dtype=float))
        self._vectors.setflags(write=False)

    @property
    def lattice(self):
        return self._lattice

    @property
    def vectors(self):
        return self._vectors

    @property
    def r(self):
        return self._vectors.shape[0]

    @property
    def gram(self):
        B = self._lattice.gram.astype(float)
        return self._vectors.dot(B).dot(self._vectors.T)

    @property
    def discriminant(self):
        return float(np.linalg.det(self.gram))

    def __repr__(self):
        return 'UnitDiscriminantPoint(%s, %s)' % (self._lattice.name,
                                                  repr(self._vectors.tolist()))


class GrassmannPoint(object):
    '''
    The orthogonal projector onto an r-plane, d x d
    '''
    def __init__(self, projector):
        P = np.asarray(projector, dtype=float)
        if P.ndim != 2 or P.shape[0] != P.shape[1]:
            raise InputError("Expecting a square projector")
        self._P = P
        self._P.setflags(write=False)

    @property
    def projector(self):
        return self._P

    @property
    def d(self):
        return self._P.shape[0]

    @property
    def r(self):
        return int(round(np.trace(self._P)))

    def is_projector(self, tol=TOL):
        '''
        symmetric, idempotent and of integral trace within tol
        '''
        P = self._P
        return bool(np.allclose(P, P.T, atol=tol) and
                    np.allclose(P.dot(P), P, atol=tol) and
                    abs(np.trace(P) - round(np.trace(P))) <= tol)

    def __repr__(self):
        return 'GrassmannPoint(%s)' % repr(self._P.tolist())

    def __eq__(self, other):
        if isinstance(other, GrassmannPoint):
            return self._P.shape == other.projector.shape and \
                bool(np.allclose(self._P, other.projector, atol=TOL))
        raise NotImplementedError('Wrong input type of %s' % type(other))

    def __ne__(self, other):
        return not self.__eq__(other)

    def __lt__(self, other):
        raise NotImplementedError("Only equality comparison allowed")

    def __le__(self, other):
        raise NotImplementedError("Only equality comparison allowed")

    def __gt__(self, other):
        raise NotImplementedError("Only equality comparison allowed")

    def __ge__(self, other):
        raise NotImplementedError("Only equality comparison allowed")


def _lattice_and_vectors(t, lattice=None):
    if isinstance(t, (VectorTuple, SublatticeHNF)):
        return t.lattice, t.vectors
    if lattice is None:
        raise InputError("A lattice is needed for a bare array of vectors")
    L = _as_lattice(lattice)
    V = np.atleast_2d(np.asarray(t))
    if V.shape[-1] != L.rank:
        raise InputError("Dimension mismatch: expecting vectors of " +
                         "length %d" % L.rank)
    return L, V

def unit_discriminant_points(L, V):
    '''
    Vectorised pr(v) = h(v)^(-1/(2r)) v for a stack of tuples.

    Parameters
    ----------
    L: :class:`equilattice.lattice.QuadraticLattice`
    V: :class:`numpy.ndarray`
        integer (m, r, d) array, every tuple of positive discriminant

    Returns
    -------
    :class:`numpy.ndarray`
        float (m, r, d)
    '''
    V = np.asarray(V)
    r = V.shape[1]
    h = batch_det(batch_gram(L.gram, V)).astype(float)
    if np.any(h <= 0):
        raise InputError("Tuples must have positive discriminant")
    return V.astype(float)*h[:, None, None]**(-1.0/(2*r))

def project_to_unit_discriminant(t, lattice=None):
    '''
    pr(t) = h(t)^(-1/(2r)) t, the scaled tuple of discriminant one.

    Parameters
    ----------
    t: :class:`equilattice.lattice.VectorTuple` or array like
        tuple in Omega
    lattice: :class:`equilattice.lattice.QuadraticLattice`, optional
        needed when t is a bare array

    Returns
    -------
    :class:`UnitDiscriminantPoint`
    '''
    L, V = _lattice_and_vectors(t, lattice)
    if isinstance(t, VectorTuple) and not t.in_omega:
        raise InputError("Tuple does not span a positive definite plane")
    if np.issubdtype(np.asarray(V).dtype, np.integer):
        h = float(gram_of_tuple(L, V).det)
    else:
        h = float(np.linalg.det(V.dot(L.gram.astype(float)).dot(V.T)))
    if h <= 0:
        raise InputError("Degenerate tuple, discriminant %s" % h)
    return UnitDiscriminantPoint(L, np.asarray(V, dtype=float) *
                                 h**(-1.0/(2*V.shape[0])))

def _inverse_sqrt(M):
    w, U = scipy.linalg.eigh(np.asarray(M, dtype=float))
    if np.any(w <= 0):
        raise InputError("Matrix is not positive definite")
    return (U/np.sqrt(w)).dot(U.T)

def project_to_sqrtM_frame(t, M, lattice=None):
    '''
    The frame M^(-1/2) t of the plane spanned by t, whose Gram matrix is
    the identity.

    Parameters
    ----------
    t: :class:`equilattice.lattice.VectorTuple` or array like
    M: :class:`equilattice.lattice.GramMatrix` or array like
        must equal the Gram matrix of t
    lattice: :class:`equilattice.lattice.QuadraticLattice`, optional

    Returns
    -------
    :class:`UnitDiscriminantPoint`
    '''
    L, V = _lattice_and_vectors(t, lattice)
    M = GramMatrix(M)
    if gram_of_tuple(L, V) != M:
        raise InputError("Gram matrix of the tuple differs from M")
    return UnitDiscriminantPoint(L, _inverse_sqrt(M.matrix).dot(
        np.asarray(V, dtype=float)))

def metric_root(L):
    '''
    Symmetric square root of the form used for the Grassmannian: the Gram
    matrix of a positive definite lattice, else its majorant
    '''
    L = _as_lattice(L)
    B = L.gram if L.is_positive_definite else L.majorant()
    w, U = scipy.linalg.eigh(np.asarray(B, dtype=float))
    return (U*np.sqrt(w)).dot(U.T)

def grassmann_projectors(L, V):
    '''
    Projectors of the planes spanned by a stack of tuples.

    Parameters
    ----------
    L: :class:`equilattice.lattice.QuadraticLattice`
    V: array like
        (m, r, d) real or integer array of independent tuples

    Returns
    -------
    :class:`numpy.ndarray`
        (m, d, d)
    '''
    L = _as_lattice(L)
    V = np.asarray(V, dtype=float)
    if V.ndim == 2:
        V = V[None]
    S = metric_root(L)
    W = np.einsum('ij,mkj->mik', S, V)
    G = np.matmul(np.swapaxes(W, 1, 2), W)
    if np.any(np.abs(np.linalg.det(G)) < TOL):
        raise InputError("Degenerate tuple, the vectors are dependent")
    P = np.matmul(W, np.linalg.solve(G, np.swapaxes(W, 1, 2)))
    return (P + np.swapaxes(P, 1, 2))/2

def project_to_grassmannian(t, lattice=None):
    '''
    Canonical projector of the plane spanned by a tuple or sublattice.

    Parameters
    ----------
    t: :class:`equilattice.lattice.VectorTuple`, \
        :class:`equilattice.lattice.SublatticeHNF` or array like
    lattice: :class:`equilattice.lattice.QuadraticLattice`, optional

    Returns
    -------
    :class:`GrassmannPoint`
    '''
    L, V = _lattice_and_vectors(t, lattice)
    if not isinstance(L, QuadraticLattice):
        L = _as_lattice(L)
    V = np.asarray(V, dtype=float)
    G = V.dot(L.gram.astype(float)).dot(V.T)
    if np.any(np.linalg.eigvalsh(G) <= 0):
        raise InputError("The tuple does not span a positive definite plane")
    return GrassmannPoint(grassmann_projectors(L, V[None])[0])
