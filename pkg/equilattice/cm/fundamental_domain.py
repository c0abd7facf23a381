"""
    Points of the upper half plane, reduction into the standard
    fundamental domain of SL(2,Z) and closed form hyperbolic areas of
    boxes clipped to it.

    The fundamental domain is |Re z| <= 1/2, |z| >= 1 with the line
    Re z = 1/2 and the right half of the arc excluded, so that every orbit
    meets it exactly once.  Its area under dx dy / y^2 is pi / 3.

"""

__all__ = ['UHPoint',
           'FUNDAMENTAL_DOMAIN_AREA',
           'reduce_to_fundamental_domain',
           'word_matrix',
           'region_area',
           'default_regions']

import math

import numpy as np

from equilattice._errors import InputError
from equilattice.measure.window import WindowFunction

FUNDAMENTAL_DOMAIN_AREA = math.pi/3.0
# boundary tolerance of the floating point reduction
TOL = 1e-12

_S = np.array([[0, -1], [1, 0]], dtype=object)


def _T(k):
    return np.array([[1, int(k)], [0, 1]], dtype=object)


class UHPoint(object):
    '''
    A point x + i y of the upper half plane.

    Parameters
    ----------
    x: float
    y: float
        strictly positive
    '''
    def __init__(self, x, y):
        x, y = float(x), float(y)
        if not y > 0 or not np.isfinite(x) or not np.isfinite(y):
            raise InputError("Expecting a finite point with y > 0, got " +
                             "(%s, %s)" % (x, y))
        self._x = x
        self._y = y

    @classmethod
    def from_complex(cls, z):
        z = complex(z)
        return cls(z.real, z.imag)

    @property
    def x(self):
        return self._x

    @property
    def y(self):
        return self._y

    @property
    def z(self):
        return complex(self._x, self._y)

    def act(self, gamma):
        '''
        Moebius action (a z + b) / (c z + d) of a real 2 x 2 matrix of
        positive determinant
        '''
        g = np.asarray(gamma)
        if g.shape != (2, 2):
            raise InputError("Expecting a 2 x 2 matrix")
        (a, b), (c, d) = [[float(v) for v in row] for row in g]
        if a*d - b*c <= 0:
            raise InputError("Only matrices of positive determinant act " +
                             "on the upper half plane")
        z = self.z
        return UHPoint.from_complex((a*z + b)/(c*z + d))

    def in_fundamental_domain(self, tol=TOL):
        x, y = self._x, self._y
        r2 = x*x + y*y
        if x < -0.5 - tol or x >= 0.5 - tol or r2 < 1 - tol:
            return False
        return not (abs(r2 - 1) <= tol and x > tol)

    def distance(self, other):
        '''
        Hyperbolic distance to another point
        '''
        d2 = (self._x - other.x)**2 + (self._y - other.y)**2
        return math.acosh(1 + d2/(2*self._y*other.y))

    def __repr__(self):
        return 'UHPoint(%.12g, %.12g)' % (self._x, self._y)

    def __eq__(self, other):
        if isinstance(other, UHPoint):
            return abs(self._x - other.x) <= 1e-10 and \
                abs(self._y - other.y) <= 1e-10
        raise NotImplementedError('Wrong input type of %s' % type(other))

    def __ne__(self, other):
        return not self.__eq__(other)

    __hash__ = None


def word_matrix(word):
    '''
    The matrix of SL(2,Z) of a word of generators, the first letter being
    applied first.

    Parameters
    ----------
    word: list
        tuples ('T', k) for z -> z + k and ('S', 1) for z -> -1/z

    Returns
    -------
    :class:`numpy.ndarray`
        2 x 2 matrix of Python integers
    '''
    g = np.array([[1, 0], [0, 1]], dtype=object)
    for letter, power in word:
        if letter == 'T':
            g = _T(power).dot(g)
        elif letter == 'S':
            for _i in range(int(power) % 4):
                g = _S.dot(g)
        else:
            raise InputError("Unknown generator %s" % letter)
    return g

def reduce_to_fundamental_domain(z):
    '''
    The representative of the SL(2,Z) orbit of z in the fundamental
    domain.

    Parameters
    ----------
    z: :class:`UHPoint` or complex

    Returns
    -------
    point: :class:`UHPoint`
    word: list
        the generators applied, see :func:`word_matrix`
    '''
    if not isinstance(z, UHPoint):
        z = UHPoint.from_complex(z)
    w = z.z
    word = []
    while True:
        k = -math.floor(w.real + 0.5)
        if w.real + k > 0.5 - TOL:
            k -= 1
        if k:
            w = w + k
            word.append(('T', k))
        if abs(w)**2 < 1 - TOL:
            w = -1/w
            word.append(('S', 1))
            continue
        break
    if abs(abs(w)**2 - 1) <= TOL and w.real > TOL:
        w = -1/w
        word.append(('S', 1))
    return UHPoint.from_complex(w), word

def _fundamental_box(window):
    if window.kind == 'all':
        return (-0.5, 0.5), (0.0, np.inf)
    if window.kind != 'box':
        raise InputError("Closed form areas exist for boxes only, got %s" %
                         window.kind)
    (x0, x1), (y0, y1) = window.params['bounds']
    return (max(float(x0), -0.5), min(float(x1), 0.5)), \
        (max(float(y0), 0.0), float(y1))

def region_area(window):
    '''
    Hyperbolic area of a window on the fundamental domain.

    Boxes x0 <= x <= x1, y0 <= y <= y1 are clipped to the domain, where
    the area is the integral over x of 1/max(y0, sqrt(1 - x^2)) - 1/y1;
    on each piece between the crossings of the arc this is an arcsine or
    linear expression.

    Parameters
    ----------
    window: :class:`equilattice.measure.WindowFunction`
        kind 'all', 'empty', 'box' or a complement of these, with target
        'fundamental_domain'

    Returns
    -------
    float
    '''
    if window.target != 'fundamental_domain':
        raise InputError("Window is not on the fundamental domain")
    if window.kind == 'empty':
        return 0.0
    if window.kind == 'complement':
        return FUNDAMENTAL_DOMAIN_AREA - region_area(window.params['window'])
    (x0, x1), (y0, y1) = _fundamental_box(window)
    if x1 <= x0 or y1 <= y0:
        return 0.0
    inv1 = 0.0 if np.isinf(y1) else 1.0/y1
    cuts = {x0, x1}
    for y in (y0, y1):
        if y < 1:
            s = math.sqrt(1 - y*y)
            cuts.update(c for c in (-s, s) if x0 < c < x1)
    cuts = sorted(cuts)
    area = 0.0
    for p, q in zip(cuts[:-1], cuts[1:]):
        mid = 0.5*(p + q)
        arc = math.sqrt(1 - mid*mid)
        if max(y0, arc) >= y1:
            continue
        if arc > y0:
            area += math.asin(q) - math.asin(p) - (q - p)*inv1
        else:
            area += (q - p)*(1.0/y0 - inv1)
    return area

def default_regions():
    '''
    Four boxes of the fundamental domain with irrational edges, mirror
    pairs in x at two heights
    '''
    xs = (math.sqrt(2)/20, math.sqrt(2)/4)
    ys = {'lower': (math.e/2, math.pi/2), 'upper': (math.pi/2, math.e)}
    out = []
    for level in ('lower', 'upper'):
        for side, sign in (('left', -1), ('right', 1)):
            x = sorted(sign*v for v in xs)
            out.append(WindowFunction('box', target='fundamental_domain',
                                      name='%s-%s' % (level, side),
                                      bounds=[x, list(ys[level])]))
    return out
