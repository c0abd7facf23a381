"""
    Curvature of the invariant connection on a homogeneous bundle over
    G/K at the Lie algebra level, its Chern forms, and the proportionality
    test used to compare invariant forms.

    For a block b of k (an ideal) acting on the fibre through a
    representation rho, the curvature on g/k is

        F(u, v) = rho(pi_b [u, v]) - [rho(pi_b u), rho(pi_b v)]

    with pi_b the Killing orthogonal projection onto b.

"""

__all__ = ['CurvatureForm',
           'curvature_form',
           'chern_form',
           'oriented_area_form',
           'proportionality_test']

import itertools
import logging
import math

import numpy as np

from equilattice._errors import ConfigurationError, InputError
from equilattice.forms.exterior import (AlternatingForm, _minors,
                                        _quotient_coordinates, _subsets)
from equilattice.forms.lie_configuration import _as_config

TOL = 1e-10


def _permutation_parity(p):
    sign = 1
    p = list(p)
    for i in range(len(p)):
        while p[i] != i:
            j = p[i]
            p[i], p[j] = p[j], p[i]
            sign = -sign
    return sign


class CurvatureForm(object):
    '''
    A 2-form on g/k with values in square matrices.

    Parameters
    ----------
    values: array like
        (C(dim, 2), r, r) matrices, the values on the pairs of basis
        vectors in lexicographic order
    dim: int
        dimension of g/k
    block: str, optional
        name of the curvature block
    basis, kernel: array like, optional
        ambient frame of g/k
    '''
    def __init__(self, values, dim, block=None, basis=None, kernel=None):
        values = np.asarray(values, dtype=complex)
        pairs = _subsets(int(dim), 2)
        if values.ndim != 3 or values.shape[0] != len(pairs) or \
                values.shape[1] != values.shape[2]:
            raise InputError("Expecting %d square matrices" % len(pairs))
        self._values = values
        self._dim = int(dim)
        self._block = block
        self._basis = basis
        self._kernel = kernel

    @property
    def size(self):
        return self._values.shape[1]

    @property
    def dim(self):
        return self._dim

    @property
    def block(self):
        return self._block

    @property
    def values(self):
        return self._values.copy()

    @property
    def basis(self):
        return self._basis

    @property
    def kernel(self):
        return self._kernel

    def entry(self, a, b):
        '''
        The scalar 2-form Theta_ab
        '''
        return AlternatingForm(2, self._dim, self._values[:, a, b],
                               space='g/k', basis=self._basis,
                               kernel=self._kernel)

    def evaluate(self, u, v, ambient=False):
        '''
        The matrix F(u, v)
        '''
        V = np.vstack([np.asarray(u), np.asarray(v)])
        if ambient:
            V = _quotient_coordinates(self._basis, self._kernel, V.T).T
        minors = _minors(V.T, _subsets(self._dim, 2), [(0, 1)])[:, 0]
        return np.einsum('p,pab->ab', minors, self._values)

    def direct_sum(self, other):
        '''
        Block diagonal curvature of the direct sum of two bundles
        '''
        if not isinstance(other, CurvatureForm) or other.dim != self._dim:
            raise InputError("Curvatures live on different spaces")
        r1, r2 = self.size, other.size
        values = np.zeros((self._values.shape[0], r1 + r2, r1 + r2),
                          dtype=complex)
        values[:, :r1, :r1] = self._values
        values[:, r1:, r1:] = other.values
        return CurvatureForm(values, self._dim, basis=self._basis,
                             kernel=self._kernel)

    def __repr__(self):
        return 'CurvatureForm(block=%s, size=%d, dim=%d)' % (
            self._block, self.size, self._dim)


def curvature_form(config, block):
    '''
    Curvature of a block of k on g/k.

    Parameters
    ----------
    config: :class:`equilattice.forms.LieConfiguration`
    block: str
        a key of `config.blocks`

    Returns
    -------
    :class:`CurvatureForm`

    Raises
    ------
    :class:`equilattice.ConfigurationError`
        when the block is unknown or not an ideal of k
    '''
    config = _as_config(config)
    blocks = config.blocks
    if block not in blocks:
        raise ConfigurationError("blocks: unknown block %s" % block)
    B, rep = blocks[block]
    K = config.killing
    k = config.k
    for i in range(k.shape[1]):
        img = np.array([config.bracket(k[:, i], B[:, j])
                        for j in range(B.shape[1])]).T
        x = np.linalg.lstsq(B, img, rcond=None)[0]
        if np.abs(B.dot(x) - img).max(initial=0.0) > 1e-8:
            raise ConfigurationError("blocks.%s: not an ideal of k" % block)
    G = B.T.dot(K).dot(B)
    proj = np.linalg.solve(G, B.T.dot(K))

    def rho(x):
        return np.einsum('i,iab->ab', proj.dot(x), rep)

    m = config.m
    values = []
    for i, j in _subsets(m.shape[1], 2):
        u, v = m[:, i], m[:, j]
        ru, rv = rho(u), rho(v)
        values.append(rho(config.bracket(u, v)) - (ru.dot(rv) - rv.dot(ru)))
    return CurvatureForm(values, m.shape[1], block=block, basis=m,
                         kernel=k)

def chern_form(curv, level):
    '''
    The degree 2 level part of det(I + (i / 2 pi) Theta).

    The determinant is expanded over the principal minors of size `level`
    with the permutation formula, the entries being commuting 2-forms.

    Parameters
    ----------
    curv: :class:`CurvatureForm`
    level: int
        between 0 and the size of the matrices

    Returns
    -------
    :class:`equilattice.forms.AlternatingForm`
        the real part; a warning is logged when the imaginary part is not
        negligible
    '''
    if not isinstance(curv, CurvatureForm):
        raise InputError("Expecting a CurvatureForm, got %s" % type(curv))
    level = int(level)
    if level < 0 or level > curv.size:
        raise InputError("Level %d out of range 0..%d" % (level, curv.size))
    frame = dict(space='g/k', basis=curv.basis, kernel=curv.kernel)
    if level == 0:
        return AlternatingForm(0, curv.dim, [1.0], **frame)
    if 2*level > curv.dim:
        raise InputError("A form of degree %d on a space of dimension %d" %
                         (2*level, curv.dim))
    factor = 1j/(2*math.pi)
    theta = [[curv.entry(a, b)*factor for b in range(curv.size)]
             for a in range(curv.size)]
    total = AlternatingForm(2*level, curv.dim, np.zeros(
        math.comb(curv.dim, 2*level), dtype=complex), **frame)
    for S in itertools.combinations(range(curv.size), level):
        for p in itertools.permutations(range(level)):
            term = theta[S[0]][S[p[0]]]
            for j in range(1, level):
                term = term.wedge(theta[S[j]][S[p[j]]])
            total = total + term*_permutation_parity(p)
    scale = max(1.0, total.real.norm())
    if total.imag.norm() > 1e-10*scale:
        logging.warning("Chern form c_%d has an imaginary part of norm %g" %
                        (level, total.imag.norm()))
    out = total.real
    out.metadata = {'level': level, 'block': curv.block}
    return out

def oriented_area_form(config, subspace='h/l'):
    '''
    Invariant area form of a 2-plane of g/k, positive on (w, J w).

    Parameters
    ----------
    config: :class:`equilattice.forms.LieConfiguration`
    subspace: str or array like, optional
        'h/l' or an (n, 2) array of ambient vectors spanning the plane

    Returns
    -------
    :class:`equilattice.forms.AlternatingForm`
        the 2-form on g/k equal to det of the Killing orthogonal
        projection onto the plane, in the basis (w, J w) when a complex
        structure is present
    '''
    config = _as_config(config)
    W = config.h_mod_l if isinstance(subspace, str) and subspace == 'h/l' \
        else np.asarray(subspace, dtype=float)
    if W.ndim != 2 or W.shape[0] != config.n:
        W = W.T
    if W.shape != (config.n, 2):
        raise InputError("Expecting a 2-plane of g/k")
    m, k = config.m, config.k
    Wc = _quotient_coordinates(m, k, W)
    if config.complex_structure is not None:
        Jm = config.complex_structure_on_quotient()
        w1 = Wc[:, 0]
        Wc = np.column_stack([w1, Jm.dot(w1)])
    if np.linalg.matrix_rank(Wc, tol=1e-8) != 2:
        raise InputError("Subspace is not a 2-plane of g/k")
    G = m.T.dot(config.killing).dot(m)
    P = np.linalg.solve(Wc.T.dot(G).dot(Wc), Wc.T.dot(G))
    return AlternatingForm.from_covectors(P, space='g/k', basis=m, kernel=k)

def proportionality_test(f1, f2, subspace=None):
    '''
    Least squares scalar s minimising |f1 - s f2| on a subspace.

    Parameters
    ----------
    f1, f2: :class:`equilattice.forms.AlternatingForm`
        forms of equal degree on the same space
    subspace: array like, optional
        ambient vectors spanning the subspace as columns, the whole space
        when omitted

    Returns
    -------
    scalar: float
    residual: float
        |f1 - s f2| / |f1| on the subspace
    '''
    for f in (f1, f2):
        if not isinstance(f, AlternatingForm):
            raise InputError("Expecting forms, got %s" % type(f))
    if f1.degree != f2.degree:
        raise InputError("Degrees %d and %d differ" % (f1.degree, f2.degree))
    if subspace is not None:
        f1 = f1.restrict(subspace)
        f2 = f2.restrict(subspace)
    elif f1.dim != f2.dim:
        raise InputError("Forms live on spaces of different dimension")
    a = f1.coefficients
    b = f2.coefficients
    nb = float(np.real(np.vdot(b, b)))
    if nb < TOL**2:
        raise InputError("The reference form restricts to zero")
    s = np.vdot(b, a)/nb
    if abs(np.imag(s)) <= TOL*max(1.0, abs(s)):
        s = float(np.real(s))
    residual = float(np.linalg.norm(a - s*b)/max(np.linalg.norm(a), TOL))
    return s, residual
