"""
    Integral binary quadratic forms a x^2 + b x y + c y^2 of negative
    discriminant, their reduction under SL(2,Z) and the Hurwitz class
    numbers obtained by weighted counting of reduced forms.

"""

__all__ = ['BinaryQuadraticForm',
           'reduced_forms',
           'hurwitz_class_number']

import logging
import math
from fractions import Fraction

import numpy as np

from equilattice._errors import InputError
from equilattice.cm.fundamental_domain import UHPoint

_S = ((0, -1), (1, 0))


def _matmul(g, h):
    return ((g[0][0]*h[0][0] + g[0][1]*h[1][0],
             g[0][0]*h[0][1] + g[0][1]*h[1][1]),
            (g[1][0]*h[0][0] + g[1][1]*h[1][0],
             g[1][0]*h[0][1] + g[1][1]*h[1][1]))


class BinaryQuadraticForm(object):
    '''
    The integral form a x^2 + b x y + c y^2.

    Parameters
    ----------
    a, b, c: int
    '''
    def __init__(self, a, b, c):
        for name, v in (('a', a), ('b', b), ('c', c)):
            if isinstance(v, (bool, np.bool_)) or \
                    not isinstance(v, (int, np.integer)):
                raise InputError("Coefficient %s must be an integer, " % name +
                                 "got %s" % type(v))
        self._a, self._b, self._c = int(a), int(b), int(c)

    @property
    def a(self):
        return self._a

    @property
    def b(self):
        return self._b

    @property
    def c(self):
        return self._c

    @property
    def discriminant(self):
        return self._b*self._b - 4*self._a*self._c

    @property
    def content(self):
        return math.gcd(math.gcd(self._a, self._b), self._c)

    @property
    def is_primitive(self):
        return self.content == 1

    @property
    def is_positive_definite(self):
        return self.discriminant < 0 and self._a > 0

    def __iter__(self):
        yield self._a
        yield self._b
        yield self._c

    def __call__(self, x, y):
        return self._a*x*x + self._b*x*y + self._c*y*y

    def act(self, g):
        '''
        The form (x, y) -> Q(p x + q y, r x + s y) for g = [[p, q], [r, s]]
        '''
        (p, q), (r, s) = [[int(v) for v in row] for row in g]
        a, b, c = self._a, self._b, self._c
        return BinaryQuadraticForm(self(p, r),
                                   2*a*p*q + b*(p*s + q*r) + 2*c*r*s,
                                   self(q, s))

    def is_reduced(self):
        '''
        |b| <= a <= c, with b >= 0 when |b| = a or a = c
        '''
        a, b, c = self._a, self._b, self._c
        if not self.is_positive_definite or not abs(b) <= a <= c:
            return False
        return b >= 0 or (abs(b) != a and a != c)

    def reduced(self):
        '''
        The equivalent reduced form.

        Returns
        -------
        form: :class:`BinaryQuadraticForm`
        matrix: tuple
            g in SL(2,Z) with form = self.act(g); the root of the reduced
            form is g^-1 applied to the root of this one
        '''
        if not self.is_positive_definite:
            raise InputError("Only positive definite forms are reduced, " +
                             "got %s" % (self,))
        a, b, c = self._a, self._b, self._c
        g = ((1, 0), (0, 1))
        while True:
            k = (a - b)//(2*a)
            if k:
                g = _matmul(g, ((1, k), (0, 1)))
                b, c = b + 2*k*a, a*k*k + b*k + c
            if a > c:
                g = _matmul(g, _S)
                a, b, c = c, -b, a
                continue
            if a == c and b < 0:
                g = _matmul(g, _S)
                b = -b
            break
        return BinaryQuadraticForm(a, b, c), g

    def root(self):
        '''
        The zero (-b + i sqrt|D|) / 2a in the upper half plane
        '''
        if not self.is_positive_definite:
            raise InputError("Only positive definite forms have a root in " +
                             "the upper half plane")
        return UHPoint(-self._b/(2.0*self._a),
                       math.sqrt(-self.discriminant)/(2.0*self._a))

    @property
    def weight(self):
        '''
        1 / |stabiliser| in PSL(2,Z) of the class: 1/2 for the class of
        (a, 0, a), 1/3 for that of (a, a, a), 1 otherwise
        '''
        f = self if self.is_reduced() else self.reduced()[0]
        if f.b == 0 and f.a == f.c:
            return Fraction(1, 2)
        if f.a == f.b == f.c:
            return Fraction(1, 3)
        return Fraction(1)

    def to_tuple(self):
        return (self._a, self._b, self._c)

    def __repr__(self):
        return 'BinaryQuadraticForm(%d, %d, %d)' % self.to_tuple()

    def __eq__(self, other):
        if isinstance(other, BinaryQuadraticForm):
            return self.to_tuple() == other.to_tuple()
        raise NotImplementedError('Wrong input type of %s' % type(other))

    def __ne__(self, other):
        return not self.__eq__(other)

    def __hash__(self):
        return hash(self.to_tuple())

    def __lt__(self, other):
        raise NotImplementedError("Only equality comparison allowed")

    def __le__(self, other):
        raise NotImplementedError("Only equality comparison allowed")

    def __gt__(self, other):
        raise NotImplementedError("Only equality comparison allowed")

    def __ge__(self, other):
        raise NotImplementedError("Only equality comparison allowed")


def _check_discriminant(D):
    if isinstance(D, (bool, np.bool_)) or \
            not isinstance(D, (int, np.integer)):
        raise InputError("Discriminant must be an integer, got %s" % type(D))
    D = int(D)
    if D >= 0 or D % 4 not in (0, 1):
        raise InputError("Expecting a negative discriminant D = 0, 1 mod 4, " +
                         "got %d" % D)
    return D

def reduced_forms(D, primitive=False):
    '''
    All reduced positive definite forms of discriminant D, ordered by
    (a, b).

    The candidates are a <= sqrt(|D| / 3) and -a < b <= a with b = D mod 2,
    scanned as a grid; c = (b^2 - D) / 4a must be an integer at least a.

    Parameters
    ----------
    D: int
        negative, 0 or 1 mod 4
    primitive: bool, optional
        keep the primitive forms only

    Returns
    -------
    list of :class:`BinaryQuadraticForm`
    '''
    D = _check_discriminant(D)
    a_max = math.isqrt(-D//3)
    if a_max == 0:
        return []
    a = np.arange(1, a_max + 1, dtype=np.int64)[:, None]
    b = np.arange(-a_max + 1, a_max + 1, dtype=np.int64)[None, :]
    num = b*b - D
    keep = (np.abs(b) <= a) & (b > -a) & ((b - D) % 2 == 0) & \
        (num % (4*a) == 0)
    c = np.where(keep, num//(4*a), 0)
    keep &= c >= a
    keep &= ~((c == a) & (b < 0))
    ia, ib = np.nonzero(keep)
    out = []
    for i, j in zip(ia, ib):
        f = BinaryQuadraticForm(int(a[i, 0]), int(b[0, j]), int(c[i, j]))
        if not primitive or f.is_primitive:
            out.append(f)
    logging.debug("Discriminant %d: %d reduced forms" % (D, len(out)))
    return out

def hurwitz_class_number(D):
    '''
    The Hurwitz class number H(|D|): reduced forms of discriminant D,
    primitive or not, counted with weight 1/2 for the class of (a, 0, a)
    and 1/3 for that of (a, a, a).

    Parameters
    ----------
    D: int
        negative, 0 or 1 mod 4

    Returns
    -------
    :class:`fractions.Fraction`
    '''
    return sum((f.weight for f in reduced_forms(D)), Fraction(0))
