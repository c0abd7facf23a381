"""
    Alternating forms and multivectors on a quotient of a Lie algebra,
    stored densely over the sorted index subsets of a fixed basis.

    A quotient g/s is realised by a basis of representatives in g (the
    columns of `basis`) together with a basis of s (the columns of
    `kernel`).  The coefficient of a k-form on the subset S is its value
    on the wedge of the basis vectors in S, so that
    alpha(v_1, ..., v_k) = sum_S alpha_S det(V[:, S]).

"""

__all__ = ['AlternatingForm',
           'MultiVector',
           'contract',
           'wedge',
           'subset_sign']

import itertools
import math

import numpy as np

from equilattice._errors import InputError

# structural tolerance
TOL = 1e-10


def _subsets(dim, k):
    return list(itertools.combinations(range(dim), k))

def subset_sign(S, T):
    '''
    Sign of the permutation sorting the concatenation of two disjoint
    index tuples
    '''
    inversions = sum(1 for s in S for t in T if s > t)
    return -1 if inversions % 2 else 1

def _quotient_coordinates(basis, kernel, V):
    '''
    Coordinates along `basis` of the columns of V, modulo `kernel`
    '''
    A = basis if kernel is None or kernel.shape[1] == 0 \
        else np.hstack([basis, kernel])
    x, res, rank, _sv = np.linalg.lstsq(A, V, rcond=None)
    fit = A.dot(x) - V
    if np.max(np.abs(fit), initial=0.0) > 1e-8*max(1.0, np.abs(V).max()):
        raise InputError("Vectors do not lie in the ambient space of the " +
                         "quotient")
    return x[:basis.shape[1]]


class _GradedElement(object):
    '''
    Shared storage of forms and multivectors
    '''
    def __init__(self, degree, dim, coefficients=None, space='g/l',
                 basis=None, kernel=None):
        degree = int(degree)
        dim = int(dim)
        if degree < 0 or degree > dim:
            raise InputError("Degree %d out of range for a space of " %
                             degree + "dimension %d" % dim)
        self._degree = degree
        self._dim = dim
        self._space = str(space)
        self._subsets = _subsets(dim, degree)
        self._index = {S: i for i, S in enumerate(self._subsets)}
        size = len(self._subsets)
        if coefficients is None:
            c = np.zeros(size)
        elif isinstance(coefficients, dict):
            dtype = complex if any(np.iscomplexobj(v)
                                   for v in coefficients.values()) else float
            c = np.zeros(size, dtype=dtype)
            for S, value in coefficients.items():
                S = tuple(int(i) for i in S)
                key = tuple(sorted(S))
                if key not in self._index:
                    raise InputError("Index set %s is not a %d-subset" %
                                     (S, degree))
                c[self._index[key]] += _permutation_sign(S)*value
        else:
            c = np.asarray(coefficients)
            if not np.iscomplexobj(c):
                c = c.astype(float)
            c = c.ravel()
            if len(c) != size:
                raise InputError("Expecting %d coefficients, got %d" %
                                 (size, len(c)))
        self._c = c.copy()
        self._basis = None if basis is None else np.asarray(basis)
        self._kernel = None if kernel is None else np.asarray(kernel)
        if self._basis is not None and self._basis.shape[1] != dim:
            raise InputError("Basis has %d columns for a space of " %
                             self._basis.shape[1] + "dimension %d" % dim)

    @property
    def degree(self):
        return self._degree

    @property
    def dim(self):
        return self._dim

    @property
    def space(self):
        return self._space

    @property
    def subsets(self):
        return list(self._subsets)

    @property
    def coefficients(self):
        return self._c.copy()

    @property
    def basis(self):
        return self._basis

    @property
    def kernel(self):
        return self._kernel

    @property
    def is_complex(self):
        return np.iscomplexobj(self._c)

    def coefficient(self, S):
        '''
        Coefficient on an index tuple in any order
        '''
        S = tuple(int(i) for i in S)
        key = tuple(sorted(S))
        if len(set(S)) != len(S):
            return 0.0
        if key not in self._index:
            raise InputError("Index set %s is not a %d-subset" %
                             (S, self._degree))
        return _permutation_sign(S)*self._c[self._index[key]]

    def coordinates(self, vectors):
        '''
        Coordinates in this space of vectors of the ambient Lie algebra.

        Parameters
        ----------
        vectors: array like
            (m, n) array, one ambient vector per row

        Returns
        -------
        :class:`numpy.ndarray`
            (m, dim)
        '''
        if self._basis is None:
            raise InputError("No ambient basis attached to the %s space" %
                             self._space)
        V = np.atleast_2d(np.asarray(vectors))
        return _quotient_coordinates(self._basis, self._kernel, V.T).T

    def norm(self):
        return float(np.linalg.norm(self._c))

    def _check_same(self, other):
        if not isinstance(other, type(self)):
            raise InputError("Expecting a %s, got %s" %
                             (type(self).__name__, type(other)))
        if other.space != self._space or other.dim != self._dim:
            raise InputError("Space mismatch: %s of dimension %d against " %
                             (self._space, self._dim) +
                             "%s of dimension %d" % (other.space, other.dim))
        if other.degree != self._degree:
            raise InputError("Degree mismatch %d and %d" %
                             (self._degree, other.degree))

    def _new(self, c, **kwargs):
        frame = dict(space=self._space, basis=self._basis,
                     kernel=self._kernel)
        frame.update(kwargs)
        return type(self)(self._degree, self._dim, c, **frame)

    def __add__(self, other):
        self._check_same(other)
        return self._new(self._c + other.coefficients)

    def __sub__(self, other):
        self._check_same(other)
        return self._new(self._c - other.coefficients)

    def __neg__(self):
        return self._new(-self._c)

    def __mul__(self, scalar):
        if not np.isscalar(scalar):
            raise InputError("Can only multiply by a scalar")
        return self._new(scalar*self._c)

    __rmul__ = __mul__

    def scaled(self, scalar):
        return self.__mul__(scalar)

    def conjugate(self):
        return self._new(np.conj(self._c))

    @property
    def real(self):
        return self._new(np.real(self._c))

    @property
    def imag(self):
        return self._new(np.imag(self._c))

    def allclose(self, other, atol=TOL):
        self._check_same(other)
        return bool(np.allclose(self._c, other.coefficients, rtol=0,
                                atol=atol))

    def to_dict(self):
        terms = {}
        for S, value in zip(self._subsets, self._c):
            if value != 0:
                key = ','.join(str(i) for i in S)
                terms[key] = [float(np.real(value)), float(np.imag(value))] \
                    if np.iscomplexobj(self._c) else float(value)
        return {'degree': self._degree, 'dim': self._dim,
                'space': self._space, 'terms': terms}

    def __eq__(self, other):
        if isinstance(other, type(self)):
            return other.space == self._space and \
                other.dim == self._dim and \
                other.degree == self._degree and \
                bool(np.allclose(self._c, other.coefficients, rtol=0,
                                 atol=TOL))
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

    __hash__ = None


def _permutation_sign(S):
    inversions = sum(1 for i in range(len(S)) for j in range(i + 1, len(S))
                     if S[i] > S[j])
    return -1 if inversions % 2 else 1

def _minors(A, rows, cols):
    '''
    All minors det(A[S, T]) for S in rows and T in cols, as an array of
    shape (len(rows), len(cols))
    '''
    k = len(rows[0])
    if k == 0:
        return np.ones((len(rows), len(cols)), dtype=A.dtype)
    R = np.array(rows)
    C = np.array(cols)
    blocks = A[R[:, None, :, None], C[None, :, None, :]]
    return np.linalg.det(blocks)


class MultiVector(_GradedElement):
    '''
    An element of the exterior power of a quotient space.

    Parameters
    ----------
    degree: int
    dim: int
        dimension of the quotient
    coefficients: array like or dict, optional
        dense coefficients over the sorted subsets or a mapping from index
        tuples to values
    space: str, optional
        tag of the quotient, e.g. 'g/l'
    basis, kernel: array like, optional
        ambient representatives of the basis and a basis of the kernel
    '''

    @classmethod
    def from_vectors(cls, vectors, space='g/l', basis=None, kernel=None):
        '''
        v_1 ^ ... ^ v_k for vectors given as rows in the coordinates of
        the space
        '''
        V = np.atleast_2d(np.asarray(vectors))
        k, dim = V.shape
        subsets = _subsets(dim, k)
        c = _minors(V.T, subsets, [tuple(range(k))])[:, 0]
        return cls(k, dim, c, space=space, basis=basis, kernel=kernel)

    def __repr__(self):
        return 'MultiVector(degree=%d, dim=%d, space=%s)' % (
            self._degree, self._dim, self._space)


class AlternatingForm(_GradedElement):
    '''
    An alternating multilinear form on a quotient space.

    Parameters
    ----------
    degree: int
    dim: int
        dimension of the quotient
    coefficients: array like or dict, optional
        dense coefficients over the sorted subsets or a mapping from index
        tuples to values, zero by default
    space: str, optional
        tag of the quotient ('g/l', 'g/k', 'g/h' or 'restricted')
    basis, kernel: array like, optional
        ambient representatives of the basis and a basis of the kernel
    metadata: dict, optional
        free form information attached by the computation that produced
        the form
    '''
    def __init__(self, degree, dim, coefficients=None, space='g/l',
                 basis=None, kernel=None, metadata=None):
        super(AlternatingForm, self).__init__(degree, dim, coefficients,
                                              space, basis, kernel)
        self.metadata = {} if metadata is None else dict(metadata)

    @classmethod
    def from_covectors(cls, covectors, space='g/l', basis=None, kernel=None):
        '''
        c_1 ^ ... ^ c_k for covectors given as rows
        '''
        C = np.atleast_2d(np.asarray(covectors))
        k, dim = C.shape
        subsets = _subsets(dim, k)
        c = _minors(C, [tuple(range(k))], subsets)[0]
        return cls(k, dim, c, space=space, basis=basis, kernel=kernel)

    def evaluate(self, vectors, ambient=False):
        '''
        Value on k vectors.

        Parameters
        ----------
        vectors: array like
            (k, dim) array of coordinates, or (k, n) ambient vectors when
            `ambient` is True
        ambient: bool, optional

        Returns
        -------
        float or complex
        '''
        if self._degree == 0:
            return self._c[0]
        V = self.coordinates(vectors) if ambient else \
            np.atleast_2d(np.asarray(vectors))
        if V.shape != (self._degree, self._dim):
            raise InputError("Expecting %d vectors of length %d" %
                             (self._degree, self._dim))
        minors = _minors(V.T, self._subsets, [tuple(range(self._degree))])
        return np.dot(self._c, minors[:, 0])

    def pair(self, u):
        '''
        The value alpha(u) on a multivector of the same degree
        '''
        if not isinstance(u, MultiVector):
            raise InputError("Expecting a MultiVector, got %s" % type(u))
        if u.space != self._space or u.dim != self._dim or \
                u.degree != self._degree:
            raise InputError("Multivector does not match the form")
        return np.dot(self._c, u.coefficients)

    def contract(self, u):
        '''
        Interior product iota_u alpha, the form w -> alpha(u ^ w).
        See :func:`contract`.
        '''
        return contract(self, u)

    def wedge(self, other):
        return wedge(self, other)

    def pullback(self, A, space=None, basis=None, kernel=None):
        '''
        Pull back along a linear map.

        Parameters
        ----------
        A: array like
            (dim, dim_new) matrix sending coordinates of the new space to
            coordinates of this one
        space: str, optional
            tag of the new space, defaults to this one
        basis, kernel: array like, optional
            ambient frame of the new space, defaults to this one when the
            map is square

        Returns
        -------
        :class:`AlternatingForm`
            degree unchanged, coefficients sum_S alpha_S det(A[S, T])
        '''
        A = np.asarray(A)
        if A.ndim != 2 or A.shape[0] != self._dim:
            raise InputError("Expecting a matrix with %d rows" % self._dim)
        new_dim = A.shape[1]
        if self._degree > new_dim:
            raise InputError("A %d-form has no non-zero pull back to a " %
                             self._degree + "space of dimension %d" % new_dim)
        square = new_dim == self._dim
        if space is None:
            space = self._space
        if basis is None and square:
            basis, kernel = self._basis, self._kernel
        cols = _subsets(new_dim, self._degree)
        minors = _minors(A, self._subsets, cols)
        return AlternatingForm(self._degree, new_dim, self._c.dot(minors),
                               space=space, basis=basis, kernel=kernel,
                               metadata=self.metadata)

    def restrict(self, W, ambient=True):
        '''
        Restriction to a subspace.

        Parameters
        ----------
        W: array like
            basis of the subspace as columns, ambient (n, w) vectors or
            (dim, w) coordinates
        ambient: bool, optional
            whether W holds ambient vectors, default True

        Returns
        -------
        :class:`AlternatingForm`
            on the space tagged 'restricted', in the coordinates of W
        '''
        W = np.asarray(W)
        if W.ndim == 1:
            W = W[:, None]
        Wc = self.coordinates(W.T).T if ambient else W
        return self.pullback(Wc, space='restricted',
                             basis=W if ambient else None, kernel=None)

    def _new(self, c, **kwargs):
        out = super(AlternatingForm, self)._new(c, **kwargs)
        out.metadata = dict(self.metadata)
        return out

    def __repr__(self):
        return 'AlternatingForm(degree=%d, dim=%d, space=%s, norm=%g)' % (
            self._degree, self._dim, self._space, self.norm())


def contract(alpha, u):
    '''
    Interior product of a form with a multivector,
    (iota_u alpha)(w) = alpha(u ^ w).

    Parameters
    ----------
    alpha: :class:`AlternatingForm`
    u: :class:`MultiVector`
        on the same space, of degree at most that of alpha

    Returns
    -------
    :class:`AlternatingForm`
        of degree alpha.degree - u.degree
    '''
    if not isinstance(alpha, AlternatingForm) or \
            not isinstance(u, MultiVector):
        raise InputError("Expecting a form and a multivector")
    if alpha.space != u.space or alpha.dim != u.dim:
        raise InputError("Cannot contract a form on %s with a multivector " %
                         alpha.space + "on %s" % u.space)
    if u.degree > alpha.degree:
        raise InputError("Multivector degree %d exceeds form degree %d" %
                         (u.degree, alpha.degree))
    k = alpha.degree - u.degree
    a = alpha.coefficients
    b = u.coefficients
    dtype = np.result_type(a, b)
    out = np.zeros(math.comb(alpha.dim, k), dtype=dtype)
    index = {S: i for i, S in enumerate(alpha.subsets)}
    for i, R in enumerate(_subsets(alpha.dim, k)):
        for T, uT in zip(u.subsets, b):
            if uT == 0 or set(T) & set(R):
                continue
            out[i] += subset_sign(T, R)*uT*a[index[tuple(sorted(T + R))]]
    return AlternatingForm(k, alpha.dim, out, space=alpha.space,
                           basis=alpha.basis, kernel=alpha.kernel)

def wedge(alpha, beta):
    '''
    Exterior product of two forms on the same space
    '''
    if not isinstance(alpha, AlternatingForm) or \
            not isinstance(beta, AlternatingForm):
        raise InputError("Expecting two forms")
    if alpha.space != beta.space or alpha.dim != beta.dim:
        raise InputError("Forms live on different spaces")
    k = alpha.degree + beta.degree
    if k > alpha.dim:
        raise InputError("Wedge of degree %d on a space of dimension %d" %
                         (k, alpha.dim))
    a = alpha.coefficients
    b = beta.coefficients
    out = np.zeros(math.comb(alpha.dim, k), dtype=np.result_type(a, b))
    index = {S: i for i, S in enumerate(_subsets(alpha.dim, k))}
    for S, aS in zip(alpha.subsets, a):
        if aS == 0:
            continue
        for T, bT in zip(beta.subsets, b):
            if bT == 0 or set(S) & set(T):
                continue
            out[index[tuple(sorted(S + T))]] += subset_sign(S, T)*aS*bT
    return AlternatingForm(k, alpha.dim, out, space=alpha.space,
                           basis=alpha.basis, kernel=alpha.kernel)
