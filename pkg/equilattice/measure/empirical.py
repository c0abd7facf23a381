"""
    Weighted point measures on a target space, built from enumerated
    tuples or sublattices.

"""

__all__ = ['EmpiricalMeasure']

import numpy as np

from equilattice._errors import InputError
from equilattice.measure.window import WINDOW_TARGETS
from equilattice.measure.projection import (unit_discriminant_points,
                                            grassmann_projectors)


class EmpiricalMeasure(object):
    '''
    A finite sum of weighted atoms.

    Parameters
    ----------
    points: array like
        (m, r, d) tuples, (m, d, d) projectors or m complex numbers
    weights: array like, optional
        positive weights, defaults to one per atom
    target: str, optional
        the space the points live in, defaults to 'unit_discriminant'
    lattice: :class:`equilattice.lattice.QuadraticLattice`, optional
        ambient lattice, passed on to the windows
    '''
    def __init__(self, points, weights=None, target='unit_discriminant',
                 lattice=None):
        if target not in WINDOW_TARGETS:
            raise InputError("Unknown target %s" % target)
        points = np.asarray(points)
        m = len(points)
        if weights is None:
            weights = np.ones(m)
        weights = np.asarray(weights, dtype=float).ravel()
        if len(weights) != m:
            raise InputError("Got %d weights for %d points" %
                             (len(weights), m))
        if np.any(weights <= 0) or not np.all(np.isfinite(weights)):
            raise InputError("Weights must be positive and finite")
        self._points = points
        self._weights = weights
        self._target = target
        self._lattice = lattice

    @classmethod
    def from_tuples(cls, L, tuples):
        '''
        mu_n: one unit atom at pr(t) for every tuple
        '''
        V = np.array([t.vectors for t in tuples])
        if len(V) == 0:
            return cls(np.zeros((0, 1, L.rank)), lattice=L)
        return cls(unit_discriminant_points(L, V), lattice=L)

    @classmethod
    def from_sublattices(cls, L, sublattices, primitive_only=False):
        '''
        nu_n (or nu'_n): one unit atom at the projector of each sublattice
        '''
        subs = [s for s in sublattices
                if s.is_primitive or not primitive_only]
        if not subs:
            return cls(np.zeros((0, L.rank, L.rank)), target='grassmannian',
                       lattice=L)
        V = np.stack([s.vectors for s in subs])
        return cls(grassmann_projectors(L, V), target='grassmannian',
                   lattice=L)

    @property
    def points(self):
        return self._points

    @property
    def weights(self):
        return self._weights

    @property
    def target(self):
        return self._target

    @property
    def total_mass(self):
        return float(self._weights.sum())

    def __len__(self):
        return len(self._weights)

    def scaled(self, c):
        '''
        the measure c * self
        '''
        return EmpiricalMeasure(self._points, c*self._weights, self._target,
                                self._lattice)

    def integrate(self, f):
        '''
        sum_i w_i f(x_i)

        Parameters
        ----------
        f: :class:`equilattice.measure.WindowFunction`
            on the same target space

        Returns
        -------
        float
        '''
        if f.target != self._target:
            raise InputError("Window on %s integrated against a measure " %
                             f.target + "on %s" % self._target)
        if len(self) == 0:
            return 0.0
        values = np.asarray(f.evaluate(self._points, lattice=self._lattice),
                            dtype=float)
        return float(np.dot(self._weights, values))

    def __add__(self, other):
        if not isinstance(other, EmpiricalMeasure):
            raise InputError("Can only add two empirical measures")
        if other.target != self._target:
            raise InputError("Measures live on different targets")
        if len(other) == 0:
            return self
        if len(self) == 0:
            return other
        return EmpiricalMeasure(
            np.concatenate([self._points, other.points]),
            np.concatenate([self._weights, other.weights]),
            self._target, self._lattice)

    def __repr__(self):
        return 'EmpiricalMeasure(%d atoms on %s, mass=%g)' % (
            len(self), self._target, self.total_mass)
