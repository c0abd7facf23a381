"""
    A real Lie algebra g with structure constants and a chain of
    subalgebras h, k and l = h n k, together with the orientation data and
    the Killing orthogonal complements used to realise the quotients.

    Realisation of the quotients
    ----------------------------
    * g/k by m, the Killing complement of k in g,
    * g/h by the Killing complement of h,
    * k/l by the Killing complement of l inside k,
    * h/l by the Killing complement of l inside h,
    * g/l by the complement of l, spanned by k/l and m together.

    A quotient a/b is oriented so that a basis of b followed by the basis
    of the complement has the orientation of the given basis of a, times
    the declared sign.

"""

__all__ = ['LieConfiguration',
           'structure_constants_from_matrices',
           'killing_matrix']

import json
import logging

import numpy as np
import scipy.linalg

from equilattice._errors import ConfigurationError, InputError
from equilattice.forms.exterior import (AlternatingForm, MultiVector,
                                        _quotient_coordinates)

# structural tolerance
TOL = 1e-10
# desk scale limit on dim g/l
MAX_QUOTIENT_DIM = 12


def structure_constants_from_matrices(matrices, tol=TOL):
    '''
    Structure constants c[i, j, k] with [X_i, X_j] = sum_k c[i, j, k] X_k
    for a basis of a matrix Lie algebra.

    Parameters
    ----------
    matrices: array like
        (n, N, N) linearly independent matrices closed under commutators
    tol: float, optional

    Returns
    -------
    :class:`numpy.ndarray`
        (n, n, n)
    '''
    X = np.asarray(matrices, dtype=float)
    if X.ndim != 3 or X.shape[1] != X.shape[2]:
        raise ConfigurationError("matrices: expecting an (n, N, N) array")
    n = X.shape[0]
    F = X.reshape(n, -1).T
    if np.linalg.matrix_rank(F) != n:
        raise ConfigurationError("matrices: the basis is linearly dependent")
    comm = np.einsum('iab,jbc->ijac', X, X)
    comm = comm - np.swapaxes(comm, 0, 1)
    C = comm.reshape(n*n, -1).T
    sol = np.linalg.lstsq(F, C, rcond=None)[0]
    scale = max(1.0, np.abs(X).max())
    if np.abs(F.dot(sol) - C).max(initial=0.0) > tol*scale:
        raise ConfigurationError("matrices: not closed under the commutator")
    c = sol.T.reshape(n, n, n)
    c[np.abs(c) < tol] = 0.0
    return c

def killing_matrix(structure_constants):
    '''
    Trace form K_ij = tr(ad_i ad_j) of the adjoint representation
    '''
    c = np.asarray(structure_constants, dtype=float)
    ad = np.swapaxes(c, 1, 2)
    return np.einsum('iab,jba->ij', ad, ad)

def _span(x, n, field):
    '''
    Basis matrix (n, k) from an index set or a list of vectors
    '''
    if x is None:
        return np.zeros((n, 0))
    x = list(x)
    if not x:
        return np.zeros((n, 0))
    if all(np.isscalar(i) and float(i).is_integer() for i in x) and \
            not any(isinstance(i, (list, tuple, np.ndarray)) for i in x):
        idx = [int(i) for i in x]
        if min(idx) < 0 or max(idx) >= n:
            raise ConfigurationError("%s: index out of range" % field)
        return np.eye(n)[:, idx]
    V = np.asarray(x, dtype=float)
    if V.ndim != 2 or V.shape[1] != n:
        raise ConfigurationError("%s: expecting vectors of length %d" %
                                 (field, n))
    if np.linalg.matrix_rank(V, tol=1e-8) != V.shape[0]:
        raise ConfigurationError("%s: spanning vectors are dependent" % field)
    return V.T.copy()

def _canonical_basis(X):
    '''
    A basis of the column span of X depending only on the span: QR with
    pivoting of the orthogonal projector, signs fixed by the diagonal of R
    '''
    k = X.shape[1]
    if k == 0:
        return X
    Q = scipy.linalg.orth(X)
    P = Q.dot(Q.T)
    Qp, R, _piv = scipy.linalg.qr(P, pivoting=True)
    s = np.sign(np.diag(R)[:k])
    s[s == 0] = 1
    B = Qp[:, :k]*s
    B[np.abs(B) < TOL] = 0.0
    return B

def _orient(B, lead, reference, sign=1):
    '''
    Flip the last column of B so that [lead | B] has the orientation of
    the reference basis times sign
    '''
    if B.shape[1] == 0:
        return B
    coords = np.linalg.lstsq(reference, np.hstack([lead, B]),
                             rcond=None)[0]
    if np.linalg.det(coords)*sign < 0:
        B = B.copy()
        B[:, -1] = -B[:, -1]
    return B


class LieConfiguration(object):
    '''
    A Lie algebra with the subalgebras h, k and l = h n k.

    Parameters
    ----------
    structure_constants: array like
        (n, n, n) real array with [e_i, e_j] = sum_k c[i, j, k] e_k
    h, k: list
        index sets of basis vectors or lists of spanning vectors
    l: list, optional
        the intersection of h and k, computed when omitted
    labels: list of str, optional
    orientation: dict, optional
        signs for the quotients, keys 'g/h' (1, -1 or 'complex') and 'k/l'
        (1 or -1); default 1 for both
    complex_structure: array like or dict, optional
        an (n, n) matrix J acting on g, or {'ad': x} for J = ad_x
    blocks: dict, optional
        name -> {'basis': vectors spanning an ideal of k,
        'rep': matrices representing them}, the curvature blocks
    name: str, optional
    description: str, optional
    constants: dict, optional
        named constants attached to the configuration, reported as is
    '''
    def __init__(self, structure_constants, h, k, l=None, labels=None,
                 orientation=None, complex_structure=None, blocks=None,
                 name=None, description=None, constants=None):
        c = np.asarray(structure_constants, dtype=float)
        if c.ndim != 3 or len(set(c.shape)) != 1:
            raise ConfigurationError("structure_constants: expecting an " +
                                     "(n, n, n) array")
        n = c.shape[0]
        self._n = n
        self._c = c
        self._name = 'lie' if name is None else str(name)
        self._description = '' if description is None else str(description)
        self._labels = ['e%d' % (i + 1) for i in range(n)] \
            if labels is None else [str(s) for s in labels]
        if len(self._labels) != n:
            raise ConfigurationError("labels: expecting %d labels" % n)
        self._constants = {} if constants is None else dict(constants)

        self._check_bracket()
        self._ad = np.swapaxes(c, 1, 2)
        self._killing = killing_matrix(c)
        if abs(np.linalg.det(self._killing)) < TOL:
            raise ConfigurationError("structure_constants: the Killing " +
                                     "form is degenerate")

        self._h = _span(h, n, 'h')
        self._k = _span(k, n, 'k')
        for field, S in (('h', self._h), ('k', self._k)):
            self._check_subalgebra(S, field)
        self._l = self._intersection(l)
        for field, S in (('h', self._h), ('k', self._k), ('l', self._l)):
            if S.shape[1] and \
                    abs(np.linalg.det(S.T.dot(self._killing).dot(S))) < TOL:
                raise ConfigurationError("%s: the Killing form is " % field +
                                         "degenerate on the subalgebra")

        self._orientation = self._read_orientation(orientation)
        self._complements()
        self._J = self._read_complex_structure(complex_structure)
        self._blocks = self._read_blocks(blocks)
        self._volume_sign = self._compute_volume_sign()
        logging.debug("Lie configuration %s: dim g=%d, h=%d, k=%d, l=%d" %
                      (self._name, n, self._h.shape[1], self._k.shape[1],
                       self._l.shape[1]))

    def _check_bracket(self):
        c = self._c
        if not np.allclose(c, -np.swapaxes(c, 0, 1), rtol=0, atol=TOL):
            raise ConfigurationError("structure_constants: bracket is " +
                                     "not antisymmetric")
        ad = np.swapaxes(c, 1, 2)
        # ad_[e_i, e_j] = [ad_i, ad_j] is the Jacobi identity
        lhs = np.einsum('ijk,kab->ijab', c, ad)
        rhs = np.einsum('iab,jbc->ijac', ad, ad)
        rhs = rhs - np.swapaxes(rhs, 0, 1)
        err = np.abs(lhs - rhs).max(initial=0.0)
        if err > TOL*max(1.0, np.abs(c).max()**2):
            raise ConfigurationError("structure_constants: Jacobi identity " +
                                     "fails by %g" % err)

    def _check_subalgebra(self, S, field):
        if S.shape[1] == 0:
            return
        B = np.einsum('ia,jb,ijk->kab', S, S, self._c).reshape(self._n, -1)
        x = np.linalg.lstsq(S, B, rcond=None)[0]
        if np.abs(S.dot(x) - B).max(initial=0.0) > 1e-8:
            raise ConfigurationError("%s: not closed under the bracket" %
                                     field)

    def _intersection(self, l):
        n = self._n
        H, K = self._h, self._k
        A = np.hstack([H, -K])
        N = scipy.linalg.null_space(A) if A.shape[1] else np.zeros((0, 0))
        inter = H.dot(N[:H.shape[1]]) if N.size else np.zeros((n, 0))
        if l is None:
            return _canonical_basis(inter)
        L = _span(l, n, 'l')
        if L.shape[1] != inter.shape[1]:
            raise ConfigurationError("l: dimension %d but h n k has " %
                                     L.shape[1] + "dimension %d" %
                                     inter.shape[1])
        for S in (H, K):
            if L.shape[1]:
                x = np.linalg.lstsq(S, L, rcond=None)[0]
                if np.abs(S.dot(x) - L).max() > 1e-8:
                    raise ConfigurationError("l: not contained in h n k")
        return L

    def _read_orientation(self, orientation):
        out = {'g/h': 1, 'k/l': 1}
        if orientation:
            for key, value in dict(orientation).items():
                if key not in out:
                    raise ConfigurationError("orientation: unknown key %s" %
                                             key)
                if value not in (1, -1) and \
                        not (key == 'g/h' and value == 'complex'):
                    raise ConfigurationError("orientation: %s must be 1 " %
                                             key + "or -1")
                out[key] = value
        return out

    def _complement(self, S, within=None):
        '''
        Killing complement of span(S) inside span(within)
        '''
        W = np.eye(self._n) if within is None else within
        if S.shape[1] == 0:
            return _canonical_basis(W)
        N = scipy.linalg.null_space(S.T.dot(self._killing).dot(W))
        return _canonical_basis(W.dot(N))

    def _complements(self):
        n = self._n
        I = np.eye(n)
        self._m = _orient(self._complement(self._k), self._k, I)
        self._k_l = _orient(self._complement(self._l, self._k), self._l,
                            self._k, self._orientation['k/l'])
        self._h_l = _orient(self._complement(self._l, self._h), self._l,
                            self._h)
        self._h_perp = _orient(self._complement(self._h), self._h, I)
        self._g_l = np.hstack([self._k_l, self._m])
        dim_gl = n - self._l.shape[1]
        if self._g_l.shape[1] != dim_gl or \
                np.linalg.matrix_rank(np.hstack([self._g_l, self._l])) != n:
            raise ConfigurationError("k: the Killing form is degenerate on k")
        if dim_gl > MAX_QUOTIENT_DIM:
            raise ConfigurationError("structure_constants: dim g/l = %d " %
                                     dim_gl + "exceeds %d" % MAX_QUOTIENT_DIM)

    def _read_complex_structure(self, J):
        if J is None:
            if self._orientation['g/h'] == 'complex':
                raise ConfigurationError("orientation: 'complex' needs a " +
                                         "complex_structure")
            return None
        if isinstance(J, dict):
            if 'ad' not in J:
                raise ConfigurationError("complex_structure: expecting a " +
                                         "matrix or {'ad': vector}")
            J = self.ad_matrix(np.asarray(J['ad'], dtype=float))
        J = np.asarray(J, dtype=float)
        if J.shape != (self._n, self._n):
            raise ConfigurationError("complex_structure: expecting an " +
                                     "(%d, %d) matrix" % (self._n, self._n))
        self._validate_complex_structure(J)
        return J

    def _on_m(self, A):
        '''
        Matrix of the map induced by A on g/k, in the basis m
        '''
        return _quotient_coordinates(self._m, self._k, A.dot(self._m))

    def _validate_complex_structure(self, J):
        dm = self._m.shape[1]
        if dm % 2:
            raise ConfigurationError("complex_structure: g/k has odd " +
                                     "dimension %d" % dm)
        Jm = self._on_m(J)
        if not np.allclose(Jm.dot(Jm), -np.eye(dm), rtol=0, atol=1e-8):
            raise ConfigurationError("complex_structure: J^2 != -1 on g/k")
        for i in range(self._k.shape[1]):
            A = self._on_m(self.ad_matrix(self._k[:, i]))
            if np.abs(Jm.dot(A) - A.dot(Jm)).max(initial=0.0) > 1e-8:
                raise ConfigurationError("complex_structure: J does not " +
                                         "commute with the action of k")
        if self._h_l.shape[1]:
            # h/l inside g/k
            Hc = _quotient_coordinates(self._m, self._k, self._h_l)
            img = Jm.dot(Hc)
            x = np.linalg.lstsq(Hc, img, rcond=None)[0]
            if np.abs(Hc.dot(x) - img).max() > 1e-8:
                raise ConfigurationError("complex_structure: h/l is not " +
                                         "J-stable")

    def _read_blocks(self, blocks):
        out = {}
        for name, spec in (blocks or {}).items():
            if 'basis' not in spec or 'rep' not in spec:
                raise ConfigurationError("blocks.%s: needs 'basis' and " %
                                         name + "'rep'")
            B = _span(spec['basis'], self._n, 'blocks.%s.basis' % name)
            rep = spec['rep']
            if isinstance(rep, dict):
                rep = np.asarray(rep.get('real', 0), dtype=float) + \
                    1j*np.asarray(rep.get('imag', 0), dtype=float)
            rep = np.asarray(rep)
            if rep.ndim != 3 or rep.shape[0] != B.shape[1] or \
                    rep.shape[1] != rep.shape[2]:
                raise ConfigurationError("blocks.%s.rep: expecting one " %
                                         name + "square matrix per basis " +
                                         "vector")
            x = np.linalg.lstsq(self._k, B, rcond=None)[0]
            if np.abs(self._k.dot(x) - B).max() > 1e-8:
                raise ConfigurationError("blocks.%s: not contained in k" %
                                         name)
            out[name] = (B, rep)
        return out

    def _compute_volume_sign(self):
        value = self._orientation['g/h']
        if value != 'complex':
            return value
        pairs = self.complex_complement()
        Z = np.hstack([self._k_l, pairs])
        v = np.linalg.det(self._h_perp_coordinates(Z))
        if abs(v) < TOL:
            raise ConfigurationError("orientation: the complex basis " +
                                     "is degenerate on g/h")
        return 1 if v > 0 else -1

    @classmethod
    def from_json(cls, source):
        '''
        Read a configuration from a dict, a JSON string or a path to a
        JSON file.  Either 'structure_constants' or 'matrices' gives the
        algebra; 'h' and 'k' are required.
        '''
        if isinstance(source, str):
            try:
                source = json.loads(source)
            except ValueError:
                try:
                    with open(source, 'r') as fp:
                        source = json.load(fp)
                except (IOError, OSError):
                    raise ConfigurationError("Not a Lie preset, JSON " +
                                             "document or readable file: " +
                                             "%s" % source)
        if not isinstance(source, dict):
            raise ConfigurationError("Lie configuration must be a mapping")
        source = dict(source)
        if 'matrices' in source:
            c = structure_constants_from_matrices(source.pop('matrices'))
        elif 'structure_constants' in source:
            c = source.pop('structure_constants')
        else:
            raise ConfigurationError("structure_constants: missing, " +
                                     "give the constants or 'matrices'")
        for key in ('h', 'k'):
            if key not in source:
                raise ConfigurationError("%s: missing" % key)
        allowed = ('h', 'k', 'l', 'labels', 'orientation',
                   'complex_structure', 'blocks', 'name', 'description',
                   'constants')
        extra = set(source) - set(allowed)
        if extra:
            raise ConfigurationError("%s: unknown field" % sorted(extra)[0])
        return cls(c, **source)

    @property
    def n(self):
        return self._n

    @property
    def name(self):
        return self._name

    @property
    def description(self):
        return self._description

    @property
    def labels(self):
        return list(self._labels)

    @property
    def constants(self):
        return dict(self._constants)

    @property
    def structure_constants(self):
        return self._c.copy()

    @property
    def ad(self):
        '''
        (n, n, n) array of the adjoint matrices of the basis
        '''
        return self._ad.copy()

    @property
    def killing(self):
        return self._killing.copy()

    @property
    def h(self):
        return self._h.copy()

    @property
    def k(self):
        return self._k.copy()

    @property
    def l(self):
        return self._l.copy()

    @property
    def m(self):
        '''
        basis of the Killing complement of k, realising g/k
        '''
        return self._m.copy()

    @property
    def k_mod_l(self):
        return self._k_l.copy()

    @property
    def h_mod_l(self):
        return self._h_l.copy()

    @property
    def h_perp(self):
        return self._h_perp.copy()

    @property
    def g_mod_l(self):
        '''
        basis of the complement of l: the basis of k/l followed by m
        '''
        return self._g_l.copy()

    @property
    def orientation(self):
        return dict(self._orientation)

    @property
    def volume_sign(self):
        return self._volume_sign

    @property
    def complex_structure(self):
        return None if self._J is None else self._J.copy()

    @property
    def blocks(self):
        return {key: (B.copy(), rep.copy())
                for key, (B, rep) in self._blocks.items()}

    @property
    def dims(self):
        return {'g': self._n, 'h': self._h.shape[1], 'k': self._k.shape[1],
                'l': self._l.shape[1], 'g/l': self._g_l.shape[1],
                'g/k': self._m.shape[1], 'g/h': self._h_perp.shape[1],
                'k/l': self._k_l.shape[1], 'h/l': self._h_l.shape[1]}

    def bracket(self, x, y):
        return np.einsum('i,j,ijk->k', np.asarray(x, dtype=float),
                         np.asarray(y, dtype=float), self._c)

    def ad_matrix(self, x):
        return np.einsum('i,iab->ab', np.asarray(x, dtype=float), self._ad)

    def killing_form(self, x, y):
        return float(np.asarray(x).dot(self._killing).dot(np.asarray(y)))

    def _h_perp_coordinates(self, Z):
        return _quotient_coordinates(self._h_perp, self._h, Z)

    def complex_structure_on_quotient(self):
        '''
        Matrix of J on g/k in the basis m
        '''
        if self._J is None:
            raise ConfigurationError("complex_structure: not supplied")
        return self._on_m(self._J)

    def complex_complement(self):
        '''
        Ambient vectors c_1, J c_1, c_2, J c_2, ... forming a basis of the
        Killing complement of h/l inside g/k
        '''
        if self._J is None:
            raise ConfigurationError("complex_structure: not supplied")
        C = self._complement(self._h_l, self._m) if self._h_l.shape[1] \
            else self._m
        Jm = self.complex_structure_on_quotient()
        Cm = _quotient_coordinates(self._m, self._k, C)
        chosen = np.zeros((Cm.shape[0], 0))
        for j in range(Cm.shape[1]):
            v = Cm[:, j:j + 1]
            trial = np.hstack([chosen, v, Jm.dot(v)])
            if np.linalg.matrix_rank(trial, tol=1e-8) == trial.shape[1]:
                chosen = trial
        img = Jm.dot(Cm)
        x = np.linalg.lstsq(Cm, img, rcond=None)[0]
        if chosen.shape[1] != Cm.shape[1] or \
                np.abs(Cm.dot(x) - img).max(initial=0.0) > 1e-8:
            raise ConfigurationError("complex_structure: the complement " +
                                     "of h/l is not J-stable")
        return self._m.dot(chosen)

    def volume_form(self, scale=1.0):
        '''
        p^* omega_{G/H} on g/l: the invariant volume of g/h, pulled back.

        Parameters
        ----------
        scale: float, optional
            multiple of the reference volume, default one

        Returns
        -------
        :class:`equilattice.forms.AlternatingForm`
            of degree dim g/h on the space 'g/l'
        '''
        Phi = self._h_perp_coordinates(self._g_l)
        alpha = AlternatingForm.from_covectors(Phi, space='g/l',
                                               basis=self._g_l,
                                               kernel=self._l)
        return alpha*(scale*self._volume_sign)

    def fiber_multivector(self):
        '''
        The multivector u of g/l with omega_{K/L}(u) = 1: the wedge of the
        basis of k/l
        '''
        f = self._k_l.shape[1]
        dim = self._g_l.shape[1]
        c = [1.0] if f == 0 else {tuple(range(f)): 1.0}
        return MultiVector(f, dim, c, space='g/l', basis=self._g_l,
                           kernel=self._l)

    def scale_factor(self):
        '''
        lambda = sqrt|det K(P X_i, P X_j)| / sqrt|det K(X_i, X_j)| for a
        basis X of k/l and P the Killing projection killing h, together
        with whether k/l is orthogonal to h/l (then lambda = 1)
        '''
        X = self._k_l
        if X.shape[1] == 0:
            return 1.0, True
        cross = X.T.dot(self._killing).dot(self._h_l) if self._h_l.shape[1] \
            else np.zeros((X.shape[1], 0))
        orthogonal = bool(np.abs(cross).max(initial=0.0) < 1e-8)
        PX = self._h_perp.dot(self._h_perp_coordinates(X))
        num = abs(np.linalg.det(PX.T.dot(self._killing).dot(PX)))
        den = abs(np.linalg.det(X.T.dot(self._killing).dot(X)))
        return float(np.sqrt(num/den)), orthogonal

    def __repr__(self):
        return 'LieConfiguration(%s, dims=%s)' % (self._name, self.dims)

    def __eq__(self, other):
        if isinstance(other, LieConfiguration):
            return self._n == other.n and \
                np.allclose(self._c, other.structure_constants) and \
                all(np.array_equal(a, b) for a, b in
                    ((self._h, other.h), (self._k, other.k),
                     (self._l, other.l)))
        raise NotImplementedError('Wrong input type of %s' % type(other))

    def __ne__(self, other):
        return not self.__eq__(other)

    def __hash__(self):
        return hash((self._name, self._n))

    def __lt__(self, other):
        raise NotImplementedError("Only equality comparison allowed")

    def __le__(self, other):
        raise NotImplementedError("Only equality comparison allowed")

    def __gt__(self, other):
        raise NotImplementedError("Only equality comparison allowed")

    def __ge__(self, other):
        raise NotImplementedError("Only equality comparison allowed")


def _as_config(config):
    if isinstance(config, LieConfiguration):
        return config
    raise InputError("Expecting a LieConfiguration, got %s" % type(config))
