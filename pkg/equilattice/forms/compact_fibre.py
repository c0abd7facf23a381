"""
    Fibres K/L whose group K is a special orthogonal group.

    K is identified with SO(m) through its action on a K-invariant
    subspace V of g on which the Killing form is definite.  The metric
    g0(x, y) = -tr(A(x) A(y))/2, with A(x) the skew matrix of ad_x on an
    orthonormal frame of V, makes the elementary plane rotations
    orthonormal, so that

        Vol(SO(m)) = Vol(S^1) Vol(S^2) ... Vol(S^{m-1}).

    Integrals over K/L are volumes times Haar averages.  The averages are
    computed with Haar samples (Gaussian QR with the signs of R moved into
    Q and the determinant fixed to one) or, for SO(3), with the product
    rule in the Euler angles k = R_z(phi) R_y(theta) R_z(psi):
    trapezoid nodes in phi and psi and Gauss-Legendre nodes in cos(theta).

"""

__all__ = ['sphere_volume',
           'special_orthogonal_volume',
           'haar_special_orthogonal',
           'euler_rotation',
           'so3_euler_rule',
           'OrthogonalFactor',
           'orthogonal_factor']

import logging
import math

import numpy as np
import scipy.linalg
import scipy.special

from equilattice._errors import InputError, QuadratureError
from equilattice.utils.checks_and_conversions import check_positive_int
from equilattice.measure.oracle import haar_frames
from equilattice.forms.lie_configuration import _as_config


def sphere_volume(j):
    '''
    Volume of the unit sphere S^j, 2 pi^{(j+1)/2} / Gamma((j+1)/2)
    '''
    j = check_positive_int(j, 'j')
    return 2*math.pi**((j + 1)/2.0)/scipy.special.gamma((j + 1)/2.0)

def special_orthogonal_volume(m):
    '''
    Volume of SO(m) for the metric in which the plane rotations
    E_ba - E_ab are orthonormal; 2 pi for SO(2), 8 pi^2 for SO(3)
    '''
    m = check_positive_int(m, 'm')
    return float(np.prod([sphere_volume(j) for j in range(1, m)]))

def haar_special_orthogonal(m, samples, random_state=None):
    '''
    Haar distributed elements of SO(m).

    Parameters
    ----------
    m: int
    samples: int
    random_state: optional
        anything :func:`equilattice.utils.test_seed` accepts

    Returns
    -------
    :class:`numpy.ndarray`
        (samples, m, m), orthogonal with determinant one
    '''
    R = haar_frames(m, m, samples, random_state)
    flip = np.linalg.det(R) < 0
    R[flip, -1, :] = -R[flip, -1, :]
    return R

def _plane_generator(m, a, b):
    # G e_a = e_b
    G = np.zeros((m, m))
    G[b, a] = 1.0
    G[a, b] = -1.0
    return G

def euler_rotation(phi, theta, psi):
    '''
    R_z(phi) R_y(theta) R_z(psi)
    '''
    def rz(t):
        c, s = math.cos(t), math.sin(t)
        return np.array([[c, -s, 0.], [s, c, 0.], [0., 0., 1.]])
    c, s = math.cos(theta), math.sin(theta)
    ry = np.array([[c, 0., s], [0., 1., 0.], [-s, 0., c]])
    return rz(phi).dot(ry).dot(rz(psi))

def so3_euler_rule(nodes, left_invariant=True):
    '''
    Product rule for Haar averages on SO(3) in the Euler angles.

    Parameters
    ----------
    nodes: int
        trapezoid nodes in psi (and phi); cos(theta) gets nodes // 2
        Gauss-Legendre nodes
    left_invariant: bool, optional
        the integrand is invariant under left multiplication by R_z, so
        phi is fixed to zero

    Returns
    -------
    tuple
        (angles, weights): an (N, 3) array of (phi, theta, psi) and
        weights summing to one

    Notes
    -----
    A matrix coefficient of spin J integrates exactly once nodes exceeds
    2 J: the trapezoid sums remove every frequency but zero and what is
    left is a Legendre polynomial of degree J in cos(theta).
    '''
    nodes = check_positive_int(nodes, 'nodes')
    x, w = scipy.special.roots_legendre(max(nodes//2, 1))
    thetas = np.arccos(x)
    psis = 2*math.pi*np.arange(nodes)/nodes
    phis = np.zeros(1) if left_invariant else psis
    P, T, S = np.meshgrid(phis, thetas, psis, indexing='ij')
    W = np.broadcast_to((w/2.0)[None, :, None], P.shape) / \
        (len(phis)*len(psis))
    angles = np.column_stack([P.ravel(), T.ravel(), S.ravel()])
    return angles, W.ravel().copy()


class OrthogonalFactor(object):
    '''
    The identification of K with SO(m) through a K-invariant subspace of
    g.

    Parameters
    ----------
    config: :class:`equilattice.forms.LieConfiguration`
    subspace: array like
        (n, m) basis of a K-invariant subspace on which the Killing form
        is definite

    Raises
    ------
    :class:`equilattice.QuadratureError`
        when the subspace is not invariant, the form is not definite, k
        does not act as the whole of so(m) or K is a proper cover of SO(m)
    '''
    def __init__(self, config, subspace):
        self._config = _as_config(config)
        W = np.asarray(subspace, dtype=float)
        n = self._config.n
        if W.ndim != 2 or W.shape[0] != n or W.shape[1] < 2:
            raise QuadratureError("Need at least two vectors of length %d" % n)
        m = W.shape[1]
        k = self._config.k
        if m*(m - 1)//2 != k.shape[1]:
            raise QuadratureError("dim k = %d is not the dimension of " %
                                  k.shape[1] + "so(%d)" % m)
        P = W.T.dot(self._config.killing).dot(W)
        lam, Q = np.linalg.eigh(0.5*(P + P.T))
        if not (np.all(lam > 1e-8) or np.all(lam < -1e-8)):
            raise QuadratureError("The Killing form is not definite on the " +
                                  "subspace")
        lam = np.abs(lam)
        self._frame = W.dot(Q.dot(np.diag(lam**-0.5)).dot(Q.T))
        self._m = m
        self._k = k
        self._gens = np.array([self._restrict(k[:, i])
                               for i in range(k.shape[1])])
        skew = np.abs(self._gens + np.swapaxes(self._gens, 1, 2)).max()
        if skew > 1e-8:
            raise QuadratureError("k does not act by skew matrices")
        M = self._gens.reshape(len(self._gens), -1).T
        if np.linalg.matrix_rank(M, tol=1e-8) != k.shape[1]:
            raise QuadratureError("k does not act faithfully on the subspace")
        self._solve = np.linalg.pinv(M)
        z = self.preimage(_plane_generator(m, 0, 1))
        full = scipy.linalg.expm(2*math.pi*self._config.ad_matrix(z))
        if np.abs(full - np.eye(n)).max() > 1e-8:
            raise QuadratureError("K is a proper cover of SO(%d)" % m)

    def _restrict(self, x):
        E = self._frame
        img = self._config.ad_matrix(x).dot(E)
        A, res, rank, _sv = np.linalg.lstsq(E, img, rcond=None)
        if np.abs(E.dot(A) - img).max(initial=0.0) > 1e-8:
            raise QuadratureError("The subspace is not K-invariant")
        return A

    @property
    def dim(self):
        return self._m

    @property
    def group(self):
        return 'SO(%d)' % self._m

    @property
    def frame(self):
        '''
        (n, m) frame of the subspace, orthonormal for the definite
        multiple of the Killing form
        '''
        return self._frame.copy()

    def generator(self, x):
        '''
        The skew (m, m) matrix by which x in k acts on the frame
        '''
        return np.einsum('i,iab->ab', self._coordinates(x), self._gens)

    def _coordinates(self, x):
        x = np.asarray(x, dtype=float)
        c = np.linalg.lstsq(self._k, x, rcond=None)[0]
        if np.abs(self._k.dot(c) - x).max(initial=0.0) > 1e-8:
            raise InputError("Vector does not lie in k")
        return c

    def preimage(self, X):
        '''
        The element of k acting on the frame by the skew matrix X
        '''
        X = np.asarray(X, dtype=float)
        return self._k.dot(self._solve.dot(X.ravel()))

    def metric(self, X, Y=None):
        '''
        Gram matrix g0(X_i, Y_j) of columns of elements of k
        '''
        X = np.asarray(X, dtype=float)
        Y = X if Y is None else np.asarray(Y, dtype=float)
        AX = [self.generator(X[:, i]) for i in range(X.shape[1])]
        AY = [self.generator(Y[:, j]) for j in range(Y.shape[1])]
        return np.array([[-0.5*np.trace(a.dot(b)) for b in AY] for a in AX])

    def align(self, x):
        '''
        Rotate the frame of SO(3) so that its last vector spans the axis of
        the rotations generated by x; R_z then generates the same
        one-parameter group as x
        '''
        if self._m != 3:
            raise QuadratureError("Only SO(3) has rotation axes")
        axis = scipy.linalg.null_space(self.generator(x), rcond=1e-8)
        if axis.shape[1] != 1:
            raise QuadratureError("Generator acts trivially")
        rest = scipy.linalg.null_space(axis.T)
        Q = np.hstack([rest, axis])
        if np.linalg.det(Q) < 0:
            Q = Q[:, [1, 0, 2]]
        self._frame = self._frame.dot(Q)
        self._gens = np.einsum('ba,ibc,cd->iad', Q, self._gens, Q)
        M = self._gens.reshape(len(self._gens), -1).T
        self._solve = np.linalg.pinv(M)

    def lift(self, R):
        '''
        Ad_k on g for the element k of K acting on the frame by R in SO(m)
        '''
        X = np.real(scipy.linalg.logm(np.asarray(R, dtype=float)))
        X = 0.5*(X - X.T)
        return scipy.linalg.expm(self._config.ad_matrix(self.preimage(X)))

    def haar_elements(self, samples, random_state=None):
        '''
        Ad_k for Haar distributed k in K, an (samples, n, n) array
        '''
        R = haar_special_orthogonal(self._m, samples, random_state)
        return np.array([self.lift(r) for r in R])

    def euler_elements(self, angles):
        '''
        Ad_k for k = R_z(phi) R_y(theta) R_z(psi), one row of angles per
        element
        '''
        if self._m != 3:
            raise QuadratureError("Euler angles need SO(3)")
        ad = self._config.ad_matrix
        Z = ad(self.preimage(_plane_generator(3, 0, 1)))
        Y = ad(self.preimage(_plane_generator(3, 2, 0)))
        angles = np.asarray(angles, dtype=float).reshape(-1, 3)

        def exps(G, t):
            values, inverse = np.unique(t, return_inverse=True)
            E = [scipy.linalg.expm(v*G) for v in values]
            return [E[i] for i in inverse]
        rows = zip(exps(Z, angles[:, 0]), exps(Y, angles[:, 1]),
                   exps(Z, angles[:, 2]))
        return np.array([a.dot(b).dot(c) for a, b, c in rows])

    def volume(self):
        return special_orthogonal_volume(self._m)

    def quotient_volume(self, fibre, stabilizer, periods):
        '''
        Volume of K/L for the invariant measure that gives the wedge of
        the fibre basis unit mass.

        Parameters
        ----------
        fibre: array like
            (n, f) basis of a complement of l in k
        stabilizer: array like
            (n, p) basis of l, a torus
        periods: list of float
            periods of the stabilizer generators

        Returns
        -------
        float
        '''
        X = np.asarray(fibre, dtype=float)
        L = np.asarray(stabilizer, dtype=float)
        GXX = self.metric(X)
        if L.shape[1]:
            GLL = self.metric(L)
            GXL = self.metric(X, L)
            GXX = GXX - GXL.dot(np.linalg.solve(GLL, GXL.T))
            vol_l = float(np.prod(periods))*math.sqrt(np.linalg.det(GLL))
        else:
            vol_l = 1.0
        return self.volume()/vol_l/math.sqrt(np.linalg.det(GXX))

    def __repr__(self):
        return 'OrthogonalFactor(%s, %s)' % (self._config.name, self.group)


def orthogonal_factor(config):
    '''
    Identify K with a special orthogonal group, trying the Killing
    complement m of k and then k itself as the subspace.  For SO(3) with a
    one dimensional l the frame is aligned with the axis of l.

    Parameters
    ----------
    config: :class:`equilattice.forms.LieConfiguration`

    Returns
    -------
    :class:`equilattice.forms.OrthogonalFactor`

    Raises
    ------
    :class:`equilattice.QuadratureError`
        when neither subspace qualifies
    '''
    config = _as_config(config)
    reasons = []
    for name, W in (('m', config.m), ('k', config.k)):
        if W.shape[1] < 2:
            continue
        try:
            factor = OrthogonalFactor(config, W)
        except QuadratureError as e:
            reasons.append('%s: %s' % (name, e))
            continue
        if factor.dim == 3 and config.l.shape[1] == 1:
            factor.align(config.l[:, 0])
        logging.debug("K acts as %s on %s" % (factor.group, name))
        return factor
    raise QuadratureError("K is neither a torus nor a special orthogonal " +
                          "group (%s)" % '; '.join(reasons))
