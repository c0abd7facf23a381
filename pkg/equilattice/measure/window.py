"""
    Test functions on the target spaces of the empirical measures: the
    unit discriminant surface, the Grassmannian of positive planes and the
    fundamental domain of SL(2,Z) in the upper half plane.

    Indicator windows are described by a signed margin, positive inside
    and negative outside, so that the mass of an epsilon shell around the
    boundary can be sampled from the matching oracle.

"""

__all__ = ['WindowFunction', 'WINDOW_KINDS', 'WINDOW_TARGETS']

import copy
import json
import logging

import numpy as np

from equilattice._errors import InputError
from equilattice.lattice.enumeration import _as_lattice

WINDOW_KINDS = ('all', 'empty', 'cap', 'box', 'ball', 'bump', 'complement')
WINDOW_TARGETS = ('unit_discriminant', 'grassmannian', 'fundamental_domain')

_REQUIRED = {'cap': ('center', 'half_angle'),
             'box': ('bounds',),
             'ball': ('radius',),
             'bump': ('radius',),
             'complement': ('window',)}


def _as_complex(points):
    z = np.asarray(points)
    if np.iscomplexobj(z):
        return z.ravel()
    z = np.atleast_2d(z.astype(float))
    if z.shape[-1] != 2:
        raise InputError("Points in the upper half plane need two coordinates")
    return z[:, 0] + 1j*z[:, 1]


class _Shell(object):
    '''
    Indicator of |margin| <= eps for a parent window
    '''
    def __init__(self, parent, eps):
        self._parent = parent
        self._eps = eps
        self.name = '%s-shell' % parent.name
        self.target = parent.target
        radius = parent.majorant_radius
        self.majorant_radius = None if radius is None else radius + eps

    def evaluate(self, points, lattice=None):
        m = self._parent.margin(points, lattice=lattice)
        return (np.abs(m) <= self._eps).astype(float)


class WindowFunction(object):
    '''
    A window on one of the target spaces.

    Parameters
    ----------
    kind: str
        one of :data:`WINDOW_KINDS`
    target: str, optional
        one of :data:`WINDOW_TARGETS`, defaults to 'unit_discriminant'
    name: str, optional
        identifier used in reports, defaults to the kind
    params:
        kind specific

        * cap: `center` (d-vector) and `half_angle` in radians.  On the
          unit discriminant surface the angle is between the first vector
          and the center, on the Grassmannian it is the angle between the
          center and the plane.
        * box: `bounds`, a list of [i, j, lo, hi] restricting the entry
          (i, j) of the point (tuple coordinates or projector entries); on
          the fundamental domain a list of [lo, hi] for x and for y.
        * ball: `radius`, the points with sum_i P(x_i) <= radius^2 for the
          majorant P of the lattice rather than the coordinate norm,
          or |z - center| <= radius on the fundamental domain.
        * bump: `radius` (or `center` and `half_angle` on the
          Grassmannian), the smooth bump exp(1 - 1/(1 - s^2)) in the
          scaled distance s of the matching ball or cap.
        * complement: `window`, the window (or its dict) to complement.
    '''
    def __init__(self, kind, target='unit_discriminant', name=None,
                 **params):
        if kind not in WINDOW_KINDS:
            raise InputError("Unknown window kind %s, expecting one of %s" %
                             (kind, ', '.join(WINDOW_KINDS)))
        if target not in WINDOW_TARGETS:
            raise InputError("Unknown window target %s" % target)
        required = _REQUIRED.get(kind, ())
        if kind == 'bump' and target == 'grassmannian':
            required = _REQUIRED['cap']
        for key in required:
            if key not in params:
                raise InputError("Window kind %s needs parameter %s" %
                                 (kind, key))
        self._kind = kind
        self._target = target
        self._name = kind if name is None else str(name)
        self._params = dict(params)
        if kind == 'complement':
            inner = params['window']
            if isinstance(inner, dict):
                inner = WindowFunction.from_dict(inner)
            if inner.target != target:
                raise InputError("Complement of a window on %s" % inner.target)
            self._params['window'] = inner
        if 'center' in self._params and target != 'fundamental_domain':
            c = np.asarray(self._params['center'], dtype=float)
            if np.linalg.norm(c) == 0:
                raise InputError("Window center must be non-zero")
            self._params['center'] = c

    @property
    def kind(self):
        return self._kind

    @property
    def target(self):
        return self._target

    @property
    def name(self):
        return self._name

    @property
    def params(self):
        return dict(self._params)

    @property
    def is_indicator(self):
        if self._kind == 'complement':
            return self._params['window'].is_indicator
        return self._kind != 'bump'

    @property
    def majorant_radius(self):
        '''
        R with P(x_i) <= R^2 for every vector of every point of the
        support, None when no such bound is known
        '''
        if self._kind == 'empty':
            return 0.0
        if self._kind in ('ball', 'bump') and \
                self._target == 'unit_discriminant':
            return float(self._params['radius'])
        return None

    def _center(self):
        c = self._params['center']
        return c/np.linalg.norm(c)

    def _ball_distance(self, points, lattice):
        if self._target == 'fundamental_domain':
            z = _as_complex(points)
            return np.abs(z - complex(*self._params.get('center', (0, 1))))
        X = np.asarray(points, dtype=float)
        if X.ndim == 2:
            X = X[None]
        P = np.eye(X.shape[-1]) if lattice is None else \
            np.asarray(_as_lattice(lattice).majorant(), dtype=float)
        return np.sqrt(np.einsum('mid,de,mie->m', X, P, X))

    def _cap_cosine(self, points):
        c = self._center()
        X = np.asarray(points, dtype=float)
        if self._target == 'grassmannian':
            if X.ndim == 2:
                X = X[None]
            # squared cosine of the angle between c and the plane
            return np.clip(np.einsum('mij,i,j->m', X, c, c), 0.0, 1.0)
        if X.ndim == 2:
            X = X[None]
        x = X[:, 0, :]
        return x.dot(c)/np.linalg.norm(x, axis=1)

    def _box_margin(self, points):
        bounds = self._params['bounds']
        if self._target == 'fundamental_domain':
            z = _as_complex(points)
            (x0, x1), (y0, y1) = bounds
            return np.minimum.reduce([z.real - x0, x1 - z.real,
                                      z.imag - y0, y1 - z.imag])
        X = np.asarray(points, dtype=float)
        if X.ndim == 2:
            X = X[None]
        m = np.full(X.shape[0], np.inf)
        for i, j, lo, hi in bounds:
            v = X[:, int(i), int(j)]
            m = np.minimum(m, np.minimum(v - lo, hi - v))
        return m

    def _npoints(self, points):
        if self._target == 'fundamental_domain':
            return len(_as_complex(points))
        X = np.asarray(points)
        return 1 if X.ndim == 2 else X.shape[0]

    def margin(self, points, lattice=None):
        '''
        Signed margin of an indicator window, positive inside.

        Parameters
        ----------
        points: array like
            (m, r, d) tuples, (m, d, d) projectors or m complex numbers
        lattice: :class:`equilattice.lattice.QuadraticLattice`, optional
            supplies the majorant for balls on the unit discriminant
            surface

        Returns
        -------
        :class:`numpy.ndarray`
        '''
        kind = self._kind
        if kind == 'all':
            return np.full(self._npoints(points), np.inf)
        elif kind == 'empty':
            return np.full(self._npoints(points), -np.inf)
        elif kind == 'complement':
            return -self._params['window'].margin(points, lattice=lattice)
        elif kind == 'cap':
            if self._target == 'grassmannian':
                return self._cap_cosine(points) - \
                    np.cos(self._params['half_angle'])**2
            return self._cap_cosine(points) - \
                np.cos(self._params['half_angle'])
        elif kind == 'box':
            return self._box_margin(points)
        elif kind == 'ball':
            return float(self._params['radius']) - \
                self._ball_distance(points, lattice)
        raise InputError("Window kind %s is not an indicator" % kind)

    def evaluate(self, points, lattice=None):
        '''
        Values of the window at a stack of points, an (m,) float array
        '''
        if self._kind == 'bump':
            if self._target == 'grassmannian':
                sin2 = 1.0 - self._cap_cosine(points)
                s2 = sin2/np.sin(self._params['half_angle'])**2
            else:
                s2 = (self._ball_distance(points, lattice) /
                      float(self._params['radius']))**2
            out = np.zeros(len(s2))
            inside = s2 < 1
            out[inside] = np.exp(1.0 - 1.0/(1.0 - s2[inside]))
            return out
        if self._kind == 'complement' and \
                not self._params['window'].is_indicator:
            return 1.0 - self._params['window'].evaluate(points, lattice)
        return (self.margin(points, lattice=lattice) > 0).astype(float)

    def shell(self, eps):
        '''
        The indicator of the points within eps of the boundary, in margin
        units
        '''
        if not self.is_indicator:
            raise InputError("Only indicator windows have a boundary shell")
        return _Shell(self, float(eps))

    def boundary_shell_mass(self, eps, samples=20000, seed=None,
                            lattice=None, r=1, d=None):
        '''
        Oracle mass of the eps shell around the boundary of an indicator.

        Parameters
        ----------
        eps: float
            shell half width, in margin units
        samples: int, optional
        seed: optional
            see :func:`equilattice.utils.test_seed`
        lattice: :class:`equilattice.lattice.QuadraticLattice`, optional
            ambient lattice, needed on the unit discriminant surface
        r: int, optional
            tuple length or plane dimension, defaults to 1
        d: int, optional
            ambient dimension on the Grassmannian, defaults to the length
            of the center or the rank of the lattice

        Returns
        -------
        (float, float)
            estimate and standard error; zero for bump windows
        '''
        from equilattice.measure.oracle import (oracle_limit_measure,
                                                grassmann_haar_oracle,
                                                fundamental_domain_oracle)
        if not self.is_indicator:
            return 0.0, 0.0
        shell = self.shell(eps)
        if self._target == 'grassmannian':
            if d is None:
                if 'center' in self._params:
                    d = len(self._params['center'])
                elif lattice is not None:
                    d = _as_lattice(lattice).rank
                else:
                    raise InputError("Ambient dimension unknown")
            return grassmann_haar_oracle(d, r, shell, samples, seed,
                                         full_output=True)
        elif self._target == 'fundamental_domain':
            return fundamental_domain_oracle(shell, samples, seed)
        if lattice is None:
            raise InputError("A lattice is needed on the unit " +
                             "discriminant surface")
        mass = oracle_limit_measure(lattice, r, shell, samples, seed)
        logging.debug("Boundary shell of %s with eps=%g: %g" %
                      (self._name, eps, mass[0]))
        return mass

    def to_dict(self):
        params = copy.copy(self._params)
        for key, value in params.items():
            if isinstance(value, np.ndarray):
                params[key] = value.tolist()
            elif isinstance(value, WindowFunction):
                params[key] = value.to_dict()
        return {'kind': self._kind, 'target': self._target,
                'name': self._name, 'params': params}

    def to_json(self):
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, spec):
        '''
        Inverse of :meth:`to_dict`; the parameters may also sit at the top
        level of the dict
        '''
        if isinstance(spec, str):
            spec = json.loads(spec)
        if not isinstance(spec, dict) or 'kind' not in spec:
            raise InputError("Window description needs a kind")
        spec = dict(spec)
        params = dict(spec.pop('params', {}))
        kind = spec.pop('kind')
        target = spec.pop('target', 'unit_discriminant')
        name = spec.pop('name', None)
        params.update(spec)
        return cls(kind, target=target, name=name, **params)

    def __repr__(self):
        return 'WindowFunction(%s, target=%s, name=%s)' % (
            self._kind, self._target, self._name)

    def __eq__(self, other):
        if isinstance(other, WindowFunction):
            return self.to_dict() == other.to_dict()
        raise NotImplementedError('Wrong input type of %s' % type(other))

    def __ne__(self, other):
        return not self.__eq__(other)

    def __hash__(self):
        return hash(self.to_json())
