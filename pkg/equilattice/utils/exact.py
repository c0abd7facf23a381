"""
    Exact integer linear algebra used by the lattice code.  Batched
    determinants run in int64 whenever an a priori bound shows that no
    intermediate value can overflow, and in python integers (object arrays)
    otherwise.  Anything that needs rationals goes through :mod:`sympy`.

"""

__all__ = ['safe_int_dtype',
           'as_exact',
           'batch_det',
           'batch_leading_minors',
           'batch_gram',
           'is_positive_definite_exact',
           'is_positive_semidefinite_exact',
           'inertia',
           'rational_ldl']

import itertools
import logging
import math

import numpy as np
import sympy

from equilattice._errors import InputError

_INT64_SAFE = 2**62


def safe_int_dtype(bound):
    '''
    int64 when every value is known to be below `bound` in absolute value,
    object otherwise
    '''
    return np.int64 if int(bound) < _INT64_SAFE else object

def as_exact(x, bound):
    '''
    Cast an integer array to :func:`safe_int_dtype` of `bound`
    '''
    x = np.asarray(x)
    if safe_int_dtype(bound) is object:
        return np.array([int(v) for v in x.flat],
                        dtype=object).reshape(x.shape)
    return x.astype(np.int64)

def _max_abs(x):
    if x.size == 0:
        return 0
    if x.dtype == object:
        return max(abs(int(v)) for v in x.flat)
    return int(np.abs(x).max())

def batch_det(G):
    '''
    Determinants of a stack of integer matrices.

    Parameters
    ----------
    G: :class:`numpy.ndarray`
        integer array of shape (m, r, r)

    Returns
    -------
    :class:`numpy.ndarray`
        of length m, int64 or object dtype
    '''
    G = np.asarray(G)
    if G.ndim != 3 or G.shape[1] != G.shape[2]:
        raise InputError("Expecting a stack of square matrices")
    m, r = G.shape[0], G.shape[1]
    if r == 0:
        return np.ones(m, dtype=np.int64)

    # the Leibniz expansion has r! terms of size at most max|G|^r
    if r <= 3:
        G = as_exact(G, _max_abs(G)**r * math.factorial(r))
        if r == 1:
            return G[:, 0, 0].copy()
        if r == 2:
            return G[:, 0, 0]*G[:, 1, 1] - G[:, 0, 1]*G[:, 1, 0]
        return (G[:, 0, 0]*(G[:, 1, 1]*G[:, 2, 2] - G[:, 1, 2]*G[:, 2, 1])
                - G[:, 0, 1]*(G[:, 1, 0]*G[:, 2, 2] - G[:, 1, 2]*G[:, 2, 0])
                + G[:, 0, 2]*(G[:, 1, 0]*G[:, 2, 1] - G[:, 1, 1]*G[:, 2, 0]))

    logging.debug("Exact determinant of %d matrices of size %d" % (m, r))
    out = np.empty(m, dtype=object)
    for i in range(m):
        out[i] = int(sympy.Matrix(G[i].tolist()).det(method='bareiss'))
    return _shrink(out)

def _shrink(x):
    if x.dtype == object and (x.size == 0 or _max_abs(x) < _INT64_SAFE):
        return x.astype(np.int64)
    return x

def batch_leading_minors(G):
    '''
    Leading principal minors, shape (m, r)
    '''
    G = np.asarray(G)
    r = G.shape[1]
    cols = [batch_det(G[:, :k, :k]) for k in range(1, r + 1)]
    if any(c.dtype == object for c in cols):
        return np.stack([c.astype(object) for c in cols], axis=1)
    return np.stack(cols, axis=1) if cols else np.zeros((G.shape[0], 0), int)

def batch_gram(B, V):
    '''
    Gram matrices of a stack of tuples.

    Parameters
    ----------
    B: :class:`numpy.ndarray`
        (d, d) integer Gram matrix of the lattice
    V: :class:`numpy.ndarray`
        (m, r, d) integer vectors, tuple index first

    Returns
    -------
    :class:`numpy.ndarray`
        (m, r, r) exact Gram matrices
    '''
    B = np.asarray(B)
    V = np.asarray(V)
    d = B.shape[0]
    bound = d * d * max(_max_abs(B), 1) * max(_max_abs(V), 1)**2
    dtype = safe_int_dtype(bound)
    if dtype is object:
        B = as_exact(B, _INT64_SAFE)
        V = as_exact(V, _INT64_SAFE)
    else:
        B = B.astype(np.int64)
        V = V.astype(np.int64)
    return np.matmul(np.matmul(V, B), np.swapaxes(V, 1, 2))

def is_positive_definite_exact(M):
    '''
    Sylvester's criterion on the leading principal minors
    '''
    M = np.asarray(M)
    if M.shape[0] == 0:
        return True
    minors = batch_leading_minors(M[None, :, :])[0]
    return all(int(v) > 0 for v in minors)

def is_positive_semidefinite_exact(M):
    '''
    Every principal minor (not only the leading ones) is non-negative
    '''
    M = np.asarray(M)
    r = M.shape[0]
    for k in range(1, r + 1):
        for idx in itertools.combinations(range(r), k):
            sub = M[np.ix_(idx, idx)]
            if int(batch_det(sub[None, :, :])[0]) < 0:
                return False
    return True

def _sign_changes(coeffs):
    signs = [c > 0 for c in coeffs if c != 0]
    return sum(1 for a, b in zip(signs[:-1], signs[1:]) if a != b)

def inertia(M):
    '''
    Inertia of a real symmetric integer matrix.

    The characteristic polynomial of a symmetric matrix has only real
    roots, so Descartes' rule of signs counts the positive ones exactly.

    Returns
    -------
    tuple
        (positive, negative, zero) eigenvalue counts
    '''
    M = sympy.Matrix(np.asarray(M).tolist())
    x = sympy.Symbol('x')
    p = M.charpoly(x)
    coeffs = [int(c) for c in p.all_coeffs()]
    # x^k with k the multiplicity of the eigenvalue zero
    zero = 0
    while zero < len(coeffs) and coeffs[-1 - zero] == 0:
        zero += 1
    trimmed = coeffs[:len(coeffs) - zero]
    pos = _sign_changes(trimmed)
    deg = len(trimmed) - 1
    neg = _sign_changes([c * (-1)**(deg - i) for i, c in enumerate(trimmed)])
    return (pos, neg, zero)

def rational_ldl(M):
    '''
    Exact factorisation M = L D L^T of a positive definite integer matrix.

    Returns
    -------
    L: :class:`sympy.Matrix`
        unit lower triangular, rational entries
    D: list of :class:`sympy.Rational`
        the diagonal of D
    '''
    S = sympy.Matrix(np.asarray(M).tolist())
    L, D = S.LDLdecomposition(hermitian=False)
    return L, [D[i, i] for i in range(S.shape[0])]
