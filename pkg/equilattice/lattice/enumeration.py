"""
    Enumeration of lattice vectors, tuples and sublattices of bounded
    norm or discriminant.

    Vectors are found by the Fincke-Pohst recursion on the exact rational
    LDL^T factorisation of the Gram matrix.  The recursion is run breadth
    first on whole arrays of partial vectors; the floating point bounds are
    widened slightly and every candidate is then checked with exact integer
    norms, so the output does not depend on rounding.

"""

__all__ = ['iter_vector_blocks',
           'enumerate_vectors_norm_leq',
           'box_scan_vectors',
           'mu1',
           'enumerate_tuples_disc_leq',
           'count_bases_with_norm_leq',
           'enumerate_sublattices_disc_leq',
           'enumerate_primitive_planes',
           'enumerate_representations',
           'enumerate_tuples_in_window']

import itertools
import logging
import math
from fractions import Fraction

import numpy as np
import sympy

from equilattice._errors import InputError, LatticeError
from equilattice.utils.checks_and_conversions import check_positive_int
from equilattice.utils.exact import batch_det, batch_gram, rational_ldl
from equilattice.lattice.quadratic_lattice import (QuadraticLattice,
                                                   VectorTuple, GramMatrix,
                                                   get_lattice)
from equilattice.lattice.hnf import SublatticeHNF, hermite_normal_form

# prod B(b_i, b_i) <= C_R[r] * disc for a Minkowski reduced basis of rank r
_MINKOWSKI_CONSTANT = {1: Fraction(1), 2: Fraction(4, 3),
                       3: Fraction(2), 4: Fraction(4)}

_EXPAND_CHUNK = 2**20


def _as_lattice(L):
    if isinstance(L, QuadraticLattice):
        return L
    if isinstance(L, (str, dict)):
        return get_lattice(L)
    return QuadraticLattice(L)

def _check_positive_definite(L):
    if not L.is_positive_definite:
        raise LatticeError("Lattice %s has signature %s, a positive " %
                           (L.name, L.signature) + "definite one is required")

def _check_bound(n, name='n'):
    return check_positive_int(n, name, allow_zero=True)

def _check_rank(L, r):
    r = check_positive_int(r, 'r')
    if r > L.rank:
        raise InputError("r out of range: 1 <= r <= %d, got %d" %
                         (L.rank, r))
    return r

def _exact_norms(G, X):
    if len(X) == 0:
        return np.zeros(0, dtype=np.int64)
    return batch_gram(G, X[:, None, :])[:, 0, 0]

def _ldl_floats(G):
    Lm, D = rational_ldl(G)
    d = G.shape[0]
    Lf = np.array([[float(Lm[i, j]) for j in range(d)] for i in range(d)])
    Df = np.array([float(x) for x in D])
    return Lf, Df

def _expand_block(Lf, Df, bound, last):
    '''
    All integer vectors with last coordinate `last` inside the widened
    ellipsoid, as an (m, d) array
    '''
    d = len(Df)
    slack = 1e-9*(1.0 + bound)
    X = np.zeros((1, d), dtype=np.int64)
    X[0, d - 1] = last
    R = np.array([bound - Df[d - 1]*float(last)**2])
    for i in range(d - 2, -1, -1):
        c = -X[:, i + 1:].astype(float).dot(Lf[i + 1:, i])
        s = np.sqrt(np.maximum(R + slack, 0.0)/Df[i])
        lo = np.ceil(c - s).astype(np.int64)
        hi = np.floor(c + s).astype(np.int64)
        cnt = np.maximum(hi - lo + 1, 0)
        total = int(cnt.sum())
        if total == 0:
            return np.zeros((0, d), dtype=np.int64)
        idx = np.repeat(np.arange(len(X)), cnt)
        offs = np.arange(total) - np.repeat(np.cumsum(cnt) - cnt, cnt)
        xi = lo[idx] + offs
        X = X[idx]
        X[:, i] = xi
        R = R[idx] - Df[i]*(xi - c[idx])**2
    return X

def _iter_blocks(G, bound):
    d = G.shape[0]
    Lf, Df = _ldl_floats(G)
    top = int(math.floor(math.sqrt(bound/Df[d - 1]) + 1e-7*(1 + bound)))
    for last in range(-top, top + 1):
        X = _expand_block(Lf, Df, bound, last)
        if len(X) == 0:
            continue
        norms = _exact_norms(G, X)
        keep = (norms > 0) & (norms <= bound)
        X, norms = X[keep], norms[keep]
        if len(X):
            order = np.lexsort(X.T[::-1])
            yield X[order], norms[order]

def iter_vector_blocks(L, n):
    '''
    Stream the nonzero vectors with B(v, v) <= n, grouped by the value of
    the last coordinate.

    Parameters
    ----------
    L: :class:`QuadraticLattice`
        positive definite lattice
    n: int
        norm bound

    Yields
    ------
    vectors: :class:`numpy.ndarray`
        (m, d) integer array, lexicographically sorted
    norms: :class:`numpy.ndarray`
        the exact norms B(v, v)
    '''
    L = _as_lattice(L)
    _check_positive_definite(L)
    n = _check_bound(n)
    if n == 0:
        return
    logging.debug("Fincke-Pohst enumeration on %s up to norm %d" %
                  (L.name, n))
    for X, norms in _iter_blocks(L.gram, n):
        yield X, norms

def _vectors_norm_leq(G, n):
    d = G.shape[0]
    if n == 0:
        return np.zeros((0, d), dtype=np.int64)
    blocks = [X for X, _norms in _iter_blocks(G, n)]
    if not blocks:
        return np.zeros((0, d), dtype=np.int64)
    X = np.concatenate(blocks)
    return X[np.lexsort(X.T[::-1])]

def enumerate_vectors_norm_leq(L, n):
    '''
    All nonzero v in Z^d with B(v, v) <= n, each exactly once.

    Parameters
    ----------
    L: :class:`QuadraticLattice`
        positive definite lattice
    n: int
        non-negative norm bound

    Returns
    -------
    :class:`numpy.ndarray`
        (m, d) integer array in lexicographic order
    '''
    L = _as_lattice(L)
    _check_positive_definite(L)
    n = _check_bound(n)
    X = _vectors_norm_leq(L.gram, n)
    logging.debug("Found %d vectors of norm <= %d in %s" % (len(X), n, L.name))
    return X

def box_scan_vectors(L, n):
    '''
    The same set as :func:`enumerate_vectors_norm_leq` by a full scan of the
    box |x_i| <= sqrt(n (B^{-1})_{ii}), which contains every vector of norm
    at most n.  Exponential in d, used as a check.
    '''
    L = _as_lattice(L)
    _check_positive_definite(L)
    n = _check_bound(n)
    d = L.rank
    if n == 0:
        return np.zeros((0, d), dtype=np.int64)
    inv = sympy.Matrix(L.gram.tolist()).inv()
    radii = [int(sympy.floor(sympy.sqrt(n*inv[i, i]))) for i in range(d)]
    grids = np.meshgrid(*[np.arange(-a, a + 1) for a in radii],
                        indexing='ij')
    X = np.stack([g.ravel() for g in grids], axis=1).astype(np.int64)
    norms = _exact_norms(L.gram, X)
    X = X[(norms > 0) & (norms <= n)]
    return X[np.lexsort(X.T[::-1])]

def mu1(M):
    '''
    Square root of the smallest nonzero value x^T M x over integer x.

    Parameters
    ----------
    M: :class:`GramMatrix` or array like
        positive definite integer matrix

    Returns
    -------
    float
    '''
    M = GramMatrix(M)
    if not M.is_positive_definite():
        raise LatticeError("mu1 needs a positive definite matrix")
    G = M.matrix.astype(np.int64)
    # any basis vector has norm M_ii, so the minimum is at most min M_ii
    bound = int(np.min(np.diag(G)))
    X = _vectors_norm_leq(G, bound)
    return math.sqrt(int(np.min(_exact_norms(G, X))))

def _grow_tuples(G, S, r, n):
    '''
    Index tuples (m, r) into the rows of S whose Gram under G is positive
    definite with determinant at most n
    '''
    m = len(S)
    norms = _exact_norms(G, S)
    keep = norms > 0
    if r == 1:
        keep &= norms <= n
    T = np.nonzero(keep)[0][:, None]
    for k in range(1, r):
        out = []
        step = max(1, _EXPAND_CHUNK // max(m, 1))
        for a in range(0, len(T), step):
            blk = T[a:a + step]
            ext = np.concatenate([np.repeat(blk, m, axis=0),
                                  np.tile(np.arange(m), len(blk))[:, None]],
                                 axis=1)
            det = batch_det(batch_gram(G, S[ext]))
            ok = det > 0
            if k == r - 1:
                ok &= det <= n
            out.append(ext[np.asarray(ok, dtype=bool)])
        T = np.concatenate(out) if out else np.zeros((0, k + 1), np.int64)
        logging.debug("%d partial tuples of length %d" % (len(T), k + 1))
    return T

def _tuples_disc_leq_array(L, r, n, max_norm=None):
    d = L.rank
    cap = n if max_norm is None else _check_bound(max_norm, 'max_norm')
    if n == 0 or cap == 0:
        return np.zeros((0, r, d), dtype=np.int64)
    S = _vectors_norm_leq(L.gram, cap)
    T = _grow_tuples(L.gram, S, r, n)
    return S[T] if len(T) else np.zeros((0, r, d), dtype=np.int64)

def enumerate_tuples_disc_leq(L, r, n, max_norm=None):
    '''
    Tuples (v_1, ..., v_r) spanning a positive definite subspace with
    discriminant h(v) <= n.

    For r >= 2 this set is infinite (each sublattice has infinitely many
    bases), so the vectors are also required to satisfy B(v_i, v_i) <=
    max_norm.  For r = 1 the two conditions coincide.

    Parameters
    ----------
    L: :class:`QuadraticLattice`
        positive definite lattice
    r: int
        1 <= r <= d
    n: int
        discriminant bound
    max_norm: int, optional
        norm cap on each vector, defaults to n

    Returns
    -------
    list of :class:`VectorTuple`
    '''
    L = _as_lattice(L)
    _check_positive_definite(L)
    r = _check_rank(L, r)
    n = _check_bound(n)
    V = _tuples_disc_leq_array(L, r, n, max_norm)
    return [VectorTuple(L, v) for v in V]

def count_bases_with_norm_leq(s, max_norm):
    '''
    Number of ordered bases of the sublattice `s` whose vectors all have
    norm at most `max_norm`
    '''
    if not isinstance(s, SublatticeHNF):
        raise InputError("Expecting a SublatticeHNF")
    max_norm = _check_bound(max_norm, 'max_norm')
    Gs = s.gram.matrix.astype(np.int64)
    r = s.rank
    C = _vectors_norm_leq(Gs, max_norm)
    if len(C) == 0:
        return 0
    count = 0
    m = len(C)
    for head in itertools.product(range(m), repeat=r - 1):
        rows = np.concatenate([np.tile(C[list(head)][None], (m, 1, 1)),
                               C[:, None, :]], axis=1) if r > 1 \
            else C[:, None, :]
        det = batch_det(rows)
        count += int(np.sum(np.abs(det.astype(np.int64)) == 1))
    return count

def _iroot_floor(x, k):
    '''
    largest integer a >= 0 with a**k <= x, for a non-negative Fraction x
    '''
    if x < 1:
        return 0
    a = int(float(x)**(1.0/k))
    while (a + 1)**k <= x:
        a += 1
    while a**k > x:
        a -= 1
    return a

def _sign_normalised(S):
    nz = S != 0
    first = np.argmax(nz, axis=1)
    return S[S[np.arange(len(S)), first] > 0]

def _reduced_bases(G, r, n):
    '''
    Ordered, size reduced, sign normalised bases with prod of norms at most
    c_r n and discriminant at most n.  Every sublattice of discriminant <= n
    has at least one such basis (a Minkowski reduced one).
    '''
    c = _MINKOWSKI_CONSTANT[r]*n
    S = _sign_normalised(_vectors_norm_leq(G, int(math.floor(c))))
    norms = _exact_norms(G, S).astype(np.int64)
    order = np.argsort(norms, kind='stable')
    S, norms = S[order], norms[order]
    SG = S.dot(G)
    found = []

    def extend(prefix, prod, last):
        rem = r - len(prefix)
        amax = _iroot_floor(c/prod, rem)
        lo = np.searchsorted(norms, last, side='left')
        hi = np.searchsorted(norms, amax, side='right')
        cand = np.arange(lo, hi)
        for p in prefix:
            if len(cand) == 0:
                return
            ip = SG[cand].dot(S[p])
            cand = cand[np.abs(2*ip) <= norms[p]]
        if len(cand) == 0:
            return
        V = np.concatenate([np.tile(S[prefix][None], (len(cand), 1, 1)),
                            S[cand][:, None, :]], axis=1)
        det = batch_det(batch_gram(G, V))
        ok = det > 0
        if rem == 1:
            ok &= det <= n
            cand = cand[np.asarray(ok, dtype=bool)]
            if len(cand):
                found.append(np.concatenate(
                    [np.tile(np.array(prefix, dtype=np.int64)[None],
                             (len(cand), 1)), cand[:, None]], axis=1))
            return
        for j in cand[np.asarray(ok, dtype=bool)]:
            extend(prefix + [int(j)], prod*int(norms[j]), int(norms[j]))

    extend([], Fraction(1), 1)
    if not found:
        return np.zeros((0, r, G.shape[0]), dtype=np.int64)
    T = np.concatenate(found)
    return S[T]

def enumerate_sublattices_disc_leq(L, r, n):
    '''
    One canonical (HNF) representative for every rank r sublattice of
    discriminant at most n.

    Parameters
    ----------
    L: :class:`QuadraticLattice`
        positive definite lattice
    r: int
        1 <= r <= min(d, 4)
    n: int
        discriminant bound

    Returns
    -------
    list of :class:`SublatticeHNF`
        ordered by discriminant, then canonical basis
    '''
    L = _as_lattice(L)
    _check_positive_definite(L)
    r = _check_rank(L, r)
    n = _check_bound(n)
    if r not in _MINKOWSKI_CONSTANT:
        raise InputError("Sublattice enumeration is implemented for " +
                         "r <= 4, got %d" % r)
    if n == 0:
        return []
    bases = _reduced_bases(L.gram, r, n)
    logging.debug("%d reduced bases of rank %d on %s up to disc %d" %
                  (len(bases), r, L.name, n))
    unique = dict()
    for V in bases:
        key = tuple(int(x) for x in hermite_normal_form(V.T).flat)
        if key not in unique:
            unique[key] = SublatticeHNF(L, V)
    out = list(unique.values())
    out.sort(key=lambda s: (s.discriminant, s.key))
    return out

def enumerate_primitive_planes(L, r, n):
    '''
    One primitive sublattice W cap Z^d for every rational r-plane W with
    disc(W cap Z^d) <= n
    '''
    return [s for s in enumerate_sublattices_disc_leq(L, r, n)
            if s.is_primitive]

def enumerate_representations(L, M):
    '''
    All tuples whose Gram matrix equals M.

    Parameters
    ----------
    L: :class:`QuadraticLattice`
        positive definite lattice
    M: :class:`GramMatrix` or array like
        positive semidefinite integer matrix

    Returns
    -------
    list of :class:`VectorTuple`
        in lexicographic order of the flattened tuple
    '''
    L = _as_lattice(L)
    _check_positive_definite(L)
    M = GramMatrix(M)
    if not M.is_positive_semidefinite():
        raise InputError("M is not positive semidefinite")
    Mm = M.matrix.astype(np.int64)
    r, d = M.size, L.rank
    S = _vectors_norm_leq(L.gram, int(np.max(np.diag(Mm))))
    S = np.concatenate([np.zeros((1, d), dtype=np.int64), S])
    norms = _exact_norms(L.gram, S)
    SG = S.dot(L.gram)

    T = np.nonzero(norms == Mm[0, 0])[0][:, None]
    for i in range(1, r):
        cand = np.nonzero(norms == Mm[i, i])[0]
        if len(T) == 0 or len(cand) == 0:
            T = np.zeros((0, i + 1), dtype=np.int64)
            break
        ok = np.ones((len(T), len(cand)), dtype=bool)
        for j in range(i):
            ok &= SG[T[:, j]].dot(S[cand].T) == Mm[j, i]
        a, b = np.nonzero(ok)
        T = np.concatenate([T[a], cand[b][:, None]], axis=1)
    if len(T) == 0:
        return []
    V = S[T]
    flat = V.reshape(len(V), -1)
    V = V[np.lexsort(flat.T[::-1])]
    return [VectorTuple(L, v) for v in V]

def enumerate_tuples_in_window(L, r, n, window):
    '''
    Tuples of discriminant at most n whose projection to the unit
    discriminant surface lies in a window.

    The window must be bounded for the majorant P of L: it exposes
    `majorant_radius` R with P(pr(v)_i) <= R^2 on its support, so every
    vector of an admissible tuple has P(v_i) <= R^2 n^(1/r).

    Distances are those of the majorant, not the Euclidean norm of the
    coordinates.  For diag(1,-1) the majorant is diag(2,2), so a Euclidean
    ball of radius rho is the window ball of radius rho*sqrt(2).

    Parameters
    ----------
    L: :class:`QuadraticLattice`
        any signature (p, q) with p >= r
    r: int
        tuple length
    n: int
        discriminant bound
    window:
        object with `majorant_radius` and `evaluate(points, lattice)`,
        usually a :class:`equilattice.measure.WindowFunction`

    Returns
    -------
    list of :class:`VectorTuple`
    '''
    L = _as_lattice(L)
    r = _check_rank(L, r)
    n = _check_bound(n)
    radius = getattr(window, 'majorant_radius', None)
    if radius is None or not np.isfinite(radius):
        raise LatticeError("Window is unbounded for the majorant form")
    if L.signature[0] < r:
        raise InputError("No positive definite %d-planes in signature %s" %
                         (r, L.signature))
    if radius <= 0 or n == 0:
        return []
    P = np.asarray(L.majorant(), dtype=np.int64)
    cap = int(math.floor(radius**2*n**(1.0/r)*(1 + 1e-12) + 1e-9))
    S = _vectors_norm_leq(P, cap)
    T = _grow_tuples(L.gram, S, r, n)
    if len(T) == 0:
        return []
    V = S[T]
    h = batch_det(batch_gram(L.gram, V)).astype(float)
    points = V.astype(float)*h[:, None, None]**(-1.0/(2*r))
    mask = np.asarray(window.evaluate(points, lattice=L)) > 0
    logging.debug("%d of %d tuples inside the window" % (mask.sum(), len(V)))
    return [VectorTuple(L, v) for v in V[mask]]
