"""
    Integral 2 x 2 matrices of positive determinant N, the coset
    representatives of the Hecke correspondence T_N and fixed points of
    elliptic matrices.

"""

__all__ = ['HeckeMatrix',
           'hecke_coset_reps',
           'fixed_point']

import logging
import math

import numpy as np
import sympy

from equilattice._errors import AcceptanceError, InputError
from equilattice.utils.checks_and_conversions import check_positive_int
from equilattice.cm.binary_forms import BinaryQuadraticForm
from equilattice.cm.fundamental_domain import UHPoint


class HeckeMatrix(object):
    '''
    An integral matrix [[a, b], [c, d]] with det = N > 0.

    Parameters
    ----------
    a, b, c, d: int
    '''
    def __init__(self, a, b, c, d):
        entries = (a, b, c, d)
        if any(isinstance(v, (bool, np.bool_)) or
               not isinstance(v, (int, np.integer)) for v in entries):
            raise InputError("Entries of a Hecke matrix must be integers")
        self._entries = tuple(int(v) for v in entries)
        if self.det <= 0:
            raise InputError("Determinant must be positive, got %d" %
                             self.det)

    @classmethod
    def from_array(cls, M):
        M = np.asarray(M)
        if M.shape != (2, 2):
            raise InputError("Expecting a 2 x 2 matrix")
        return cls(*[int(v) for v in M.ravel()])

    @classmethod
    def from_form(cls, form, t):
        '''
        The matrix of trace t whose associated form is (A, B, C):
        [[(t - B) / 2, -C], [A, (t + B) / 2]]
        '''
        A, B, C = form
        if (t - B) % 2:
            raise InputError("Trace %d and middle coefficient %d differ " %
                             (t, B) + "in parity")
        return cls((t - B)//2, -C, A, (t + B)//2)

    @property
    def entries(self):
        return self._entries

    @property
    def det(self):
        a, b, c, d = self._entries
        return a*d - b*c

    @property
    def trace(self):
        return self._entries[0] + self._entries[3]

    @property
    def discriminant(self):
        '''
        t^2 - 4 N, the discriminant of the characteristic polynomial
        '''
        return self.trace**2 - 4*self.det

    @property
    def is_elliptic(self):
        return self.discriminant < 0

    def associated_form(self):
        '''
        The form sign(c) (c, d - a, -b), vanishing at the fixed points and
        positive definite for elliptic matrices
        '''
        a, b, c, d = self._entries
        s = -1 if c < 0 else 1
        return BinaryQuadraticForm(s*c, s*(d - a), -s*b)

    def as_array(self):
        return np.array([[self._entries[0], self._entries[1]],
                         [self._entries[2], self._entries[3]]], dtype=object)

    def conjugate(self, g):
        '''
        g^-1 M g for g in SL(2,Z)
        '''
        g = np.asarray(g, dtype=object)
        (p, q), (r, s) = g
        if p*s - q*r != 1:
            raise InputError("Conjugation needs a matrix of SL(2,Z)")
        inv = np.array([[s, -q], [-r, p]], dtype=object)
        return HeckeMatrix.from_array(inv.dot(self.as_array()).dot(g))

    def __mul__(self, other):
        if not isinstance(other, HeckeMatrix):
            raise InputError("Expecting a HeckeMatrix, got %s" % type(other))
        return HeckeMatrix.from_array(self.as_array().dot(other.as_array()))

    def __repr__(self):
        return 'HeckeMatrix([[%d, %d], [%d, %d]])' % self._entries

    def __eq__(self, other):
        if isinstance(other, HeckeMatrix):
            return self._entries == other.entries
        raise NotImplementedError('Wrong input type of %s' % type(other))

    def __ne__(self, other):
        return not self.__eq__(other)

    def __hash__(self):
        return hash(self._entries)


def hecke_coset_reps(N):
    '''
    The upper triangular representatives [[a, b], [0, d]], a d = N and
    0 <= b < d, of SL(2,Z) \\ {det N}.

    Parameters
    ----------
    N: int
        at least one

    Returns
    -------
    list of :class:`HeckeMatrix`
        sigma_1(N) matrices

    Raises
    ------
    :class:`equilattice.AcceptanceError`
        when the count differs from the divisor sum
    '''
    N = check_positive_int(N, 'N')
    reps = [HeckeMatrix(N//d, b, 0, d) for d in sympy.divisors(N)
            for b in range(d)]
    sigma = int(sympy.divisor_sigma(N, 1))
    if len(reps) != sigma:
        raise AcceptanceError("%d coset representatives for N = %d, " %
                              (len(reps), N) + "expecting sigma_1 = %d" %
                              sigma)
    logging.debug("Hecke T_%d: %d coset representatives" % (N, len(reps)))
    return reps

def fixed_point(gamma):
    '''
    The fixed point of an elliptic matrix in the upper half plane,
    z = ((a - d) + i sqrt(4 N - t^2)) / 2c with c made positive.

    Parameters
    ----------
    gamma: :class:`HeckeMatrix` or array like

    Returns
    -------
    :class:`equilattice.cm.UHPoint`

    Raises
    ------
    :class:`equilattice.InputError`
        for parabolic, hyperbolic and scalar matrices, which have no
        isolated fixed point in the upper half plane
    '''
    if not isinstance(gamma, HeckeMatrix):
        gamma = HeckeMatrix.from_array(gamma)
    if not gamma.is_elliptic:
        raise InputError("%s is not elliptic (t^2 - 4N = %d), it has no " %
                         (gamma, gamma.discriminant) + "regular fixed point")
    a, b, c, d = gamma.entries
    # c != 0 for elliptic matrices since (a + d)^2 >= 4 a d otherwise
    return UHPoint((a - d)/(2.0*c),
                   math.sqrt(-gamma.discriminant)/(2.0*abs(c)))
