"""
    Sublattice index multiplicities b_k (the number of sublattices of Z^r
    of index k), the constant alpha = sum_k b_k / k^d, and the exact
    relation between sublattice counts and primitive sublattice counts

        nu_n = sum_{k <= sqrt(n)} b_k nu'_{floor(n / k^2)}

    where nu_n counts the rank r sublattices of discriminant at most n and
    nu'_n the primitive ones.  A sublattice of index k in its saturation
    has discriminant k^2 times the discriminant of the saturation.

"""

__all__ = ['hnf_index_count',
           'dirichlet_index_count',
           'iter_index_hnf',
           'count_sublattices_of_index',
           'index_count_table',
           'MultiplicitySeries',
           'AlphaEstimate',
           'alpha_constant',
           'sublattice_discriminant_counts',
           'multiplicity_relation_table',
           'verify_multiplicity_relation']

import functools
import itertools
import logging
import math
from fractions import Fraction

import numpy as np
import pandas as pd
import sympy

from equilattice._errors import AcceptanceError, InputError
from equilattice.utils.checks_and_conversions import check_positive_int
from equilattice.lattice.enumeration import (_as_lattice,
                                             enumerate_sublattices_disc_leq)


@functools.lru_cache(maxsize=None)
def hnf_index_count(r, k):
    '''
    Number of r x r upper triangular Hermite normal forms of determinant k.

    Fixing the last diagonal entry e leaves e choices for each of the r - 1
    entries above it, so b^(r)_k = sum_{e | k} e^(r-1) b^(r-1)_{k/e}.

    Parameters
    ----------
    r: int
        rank, r >= 1
    k: int
        index, k >= 1

    Returns
    -------
    int
    '''
    r = check_positive_int(r, 'r')
    k = check_positive_int(k, 'k')
    if r == 1:
        return 1
    return sum(e**(r - 1)*hnf_index_count(r - 1, k // e)
               for e in sympy.divisors(k))

def dirichlet_index_count(r, k):
    '''
    Coefficient of k^-s in prod_{i=0}^{r-1} zeta(s - i), that is the sum
    of k_1^1 ... k_{r-1}^{r-1} over factorisations k = k_0 k_1 ... k_{r-1}.
    '''
    r = check_positive_int(r, 'r')
    k = check_positive_int(k, 'k')
    divs = sympy.divisors(k)
    # coefficients on the divisors of k only
    coeff = {e: 1 for e in divs}
    for i in range(1, r):
        coeff = {e: sum(coeff[f]*(e // f)**i for f in divs
                        if e % f == 0)
                 for e in divs}
    return coeff[k]

def iter_index_hnf(r, k):
    '''
    Explicit enumeration of the upper triangular r x r Hermite normal forms
    of determinant k: positive diagonal with product k, and in column j
    the entries above the diagonal lie in [0, H[j, j]).

    Yields
    ------
    :class:`numpy.ndarray`
    '''
    r = check_positive_int(r, 'r')
    k = check_positive_int(k, 'k')

    def diagonals(rem, m):
        if m == 1:
            yield (rem,)
            return
        for e in sympy.divisors(rem):
            for rest in diagonals(rem // e, m - 1):
                yield (e,) + rest

    for diag in diagonals(k, r):
        slots = [(i, j) for j in range(r) for i in range(j)]
        ranges = [range(diag[j]) for (_i, j) in slots]
        for values in itertools.product(*ranges):
            H = np.diag(np.array(diag, dtype=np.int64))
            for (i, j), v in zip(slots, values):
                H[i, j] = v
            yield H

def count_sublattices_of_index(r, k, full_output=False):
    '''
    b_k for Z^r, computed from the Hermite normal form count and from the
    Dirichlet series of the zeta product; the two must agree.

    Parameters
    ----------
    r: int
    k: int
    full_output: bool, optional
        return both counts instead of the common value

    Returns
    -------
    int, or (int, int) when full_output is True
    '''
    a = hnf_index_count(r, k)
    b = dirichlet_index_count(r, k)
    if a != b:
        raise AcceptanceError("Index count mismatch for r=%d, k=%d: " %
                              (r, k) + "%d against %d" % (a, b))
    if full_output:
        return a, b
    return a

def index_count_table(r, K):
    '''
    b_1, ..., b_K in one sieve pass, returned as a list with b_k at
    position k - 1
    '''
    r = check_positive_int(r, 'r')
    K = check_positive_int(K, 'K')
    b = [0] + [1]*K
    for i in range(1, r):
        new = [0]*(K + 1)
        for f in range(1, K + 1):
            if b[f] == 0:
                continue
            for m in range(1, K // f + 1):
                new[f*m] += b[f]*m**i
        b = new
    return b[1:]


class MultiplicitySeries(object):
    '''
    The coefficients b_1, ..., b_K of zeta_{Z^r}(s) = sum_k b_k k^-s

    Parameters
    ----------
    r: int
        rank
    K: int
        truncation
    '''
    def __init__(self, r, K):
        self._r = check_positive_int(r, 'r')
        self._K = check_positive_int(K, 'K')
        self._b = index_count_table(self._r, self._K)

    @property
    def r(self):
        return self._r

    @property
    def K(self):
        return self._K

    @property
    def coefficients(self):
        return list(self._b)

    def __getitem__(self, k):
        if not 1 <= k <= self._K:
            raise InputError("k must lie in [1, %d]" % self._K)
        return self._b[k - 1]

    def __len__(self):
        return self._K

    def is_multiplicative(self):
        '''
        b_{mn} = b_m b_n for all coprime m, n with mn <= K
        '''
        for m in range(2, self._K + 1):
            for n in range(2, self._K // m + 1):
                if math.gcd(m, n) == 1 and \
                        self[m*n] != self[m]*self[n]:
                    return False
        return True

    def satisfies_bound(self):
        '''
        b_1 = 1 and 1 <= b_k <= k^r
        '''
        return self._b[0] == 1 and \
            all(1 <= b <= k**self._r for k, b in enumerate(self._b, 1))

    def to_frame(self):
        return pd.DataFrame({'k': np.arange(1, self._K + 1),
                             'b_k': np.array(self._b, dtype=object)})

    def __repr__(self):
        return 'MultiplicitySeries(%d, %d)' % (self._r, self._K)


class AlphaEstimate(object):
    '''
    Rigorous enclosure of alpha = sum_k b_k / k^d: the partial sum up to K
    and a bound on the tail from b_k <= k^r
    '''
    def __init__(self, r, d, K, partial, tail):
        self._r = r
        self._d = d
        self._K = K
        self._partial = partial
        self._tail = tail

    @property
    def r(self):
        return self._r

    @property
    def d(self):
        return self._d

    @property
    def K(self):
        return self._K

    @property
    def partial(self):
        return self._partial

    @property
    def tail(self):
        return self._tail

    @property
    def lower(self):
        return self._partial

    @property
    def upper(self):
        return self._partial + self._tail

    @property
    def value(self):
        '''
        float midpoint of the enclosure
        '''
        return float(self._partial + self._tail/2)

    def to_dict(self):
        return {'r': self._r, 'd': self._d, 'K': self._K,
                'partial': str(self._partial), 'tail': str(self._tail),
                'lower': float(self.lower), 'upper': float(self.upper)}

    def __repr__(self):
        return 'AlphaEstimate(r=%d, d=%d, K=%d, [%.12g, %.12g])' % (
            self._r, self._d, self._K, float(self.lower), float(self.upper))


def alpha_constant(r, d, K):
    '''
    Partial sum and tail bound of alpha = sum_k b_k / k^d.

    Parameters
    ----------
    r: int
        rank of the sublattices
    d: int
        ambient dimension, d >= r + 2
    K: int
        truncation

    Returns
    -------
    :class:`AlphaEstimate`
    '''
    r = check_positive_int(r, 'r')
    d = check_positive_int(d, 'd')
    K = check_positive_int(K, 'K')
    if d <= r + 1:
        raise InputError("alpha diverges unless d >= r + 2, got r=%d d=%d" %
                         (r, d))
    b = index_count_table(r, K)
    partial = sum((Fraction(bk, k**d) for k, bk in enumerate(b, 1)),
                  Fraction(0))
    # sum_{k > K} k^(r-d) <= int_K^inf x^(r-d) dx
    tail = Fraction(1, K**(d - r - 1)*(d - r - 1))
    return AlphaEstimate(r, d, K, partial, tail)

def _sublattice_histograms(L, r, n_max, windows=None):
    '''
    Histograms over discriminants 0..n_max of all and of primitive
    sublattices, optionally restricted to windows on the Grassmannian
    '''
    from equilattice.measure.projection import grassmann_projectors

    subs = enumerate_sublattices_disc_leq(L, r, n_max)
    disc = np.array([s.discriminant for s in subs], dtype=np.int64)
    prim = np.array([s.is_primitive for s in subs], dtype=bool)
    masks = {'total': np.ones(len(subs), dtype=bool)}
    if windows and len(subs):
        P = grassmann_projectors(L, np.stack([s.vectors for s in subs]))
        for w in windows:
            masks[w.name] = np.asarray(w.evaluate(P, lattice=L)) > 0
    elif windows:
        for w in windows:
            masks[w.name] = np.zeros(0, dtype=bool)

    hist = dict()
    for key, m in masks.items():
        hist[key] = (np.bincount(disc[m], minlength=n_max + 1),
                     np.bincount(disc[m & prim], minlength=n_max + 1))
    return hist

def sublattice_discriminant_counts(L, r, n_max):
    '''
    nu_n and nu'_n for every n <= n_max from a single enumeration.

    Returns
    -------
    :class:`pandas.DataFrame`
        columns n, nu, nu_prime
    '''
    L = _as_lattice(L)
    n_max = check_positive_int(n_max, 'n_max')
    all_h, prim_h = _sublattice_histograms(L, r, n_max)['total']
    n = np.arange(1, n_max + 1)
    return pd.DataFrame({'n': n,
                         'nu': np.cumsum(all_h)[1:],
                         'nu_prime': np.cumsum(prim_h)[1:]})

def _relation_rhs(nu_prime, b, n):
    '''
    sum_{k <= sqrt n} b_k nu'_{floor(n / k^2)}
    '''
    return sum(b[k - 1]*int(nu_prime[n // (k*k)])
               for k in range(1, math.isqrt(n) + 1))

def multiplicity_relation_table(L, r, n_max, windows=None):
    '''
    Both sides of the multiplicity relation for n = 1..n_max, in total and
    for each window on the Grassmannian.

    Parameters
    ----------
    L: :class:`equilattice.lattice.QuadraticLattice`
        positive definite lattice
    r: int
        rank of the sublattices
    n_max: int
        largest discriminant
    windows: list of :class:`equilattice.measure.WindowFunction`, optional
        windows with target 'grassmannian'

    Returns
    -------
    :class:`pandas.DataFrame`
        columns window_id, n, nu, rhs, equal
    '''
    L = _as_lattice(L)
    n_max = check_positive_int(n_max, 'n_max')
    hist = _sublattice_histograms(L, r, n_max, windows)
    b = index_count_table(r, max(1, math.isqrt(n_max)))
    rows = []
    for key, (all_h, prim_h) in hist.items():
        nu = np.cumsum(all_h)
        nu_prime = np.cumsum(prim_h)
        for n in range(1, n_max + 1):
            rhs = _relation_rhs(nu_prime, b, n)
            rows.append((key, n, int(nu[n]), rhs, int(nu[n]) == rhs))
    return pd.DataFrame(rows, columns=['window_id', 'n', 'nu', 'rhs',
                                       'equal'])

def verify_multiplicity_relation(L, r, n, windows=None):
    '''
    Exact check of nu_n = sum_{k <= sqrt n} b_k nu'_{floor(n/k^2)}.

    Parameters
    ----------
    L: :class:`equilattice.lattice.QuadraticLattice`
        positive definite lattice
    r: int
        rank
    n: int
        discriminant bound
    windows: list of :class:`equilattice.measure.WindowFunction`, optional
        Grassmannian windows checked one by one

    Returns
    -------
    dict
        with keys nu, rhs, terms (k, b_k, floor(n/k^2), nu'), equal and
        windows (per window nu, rhs, equal)
    '''
    L = _as_lattice(L)
    n = check_positive_int(n, 'n')
    hist = _sublattice_histograms(L, r, n, windows)
    b = index_count_table(r, max(1, math.isqrt(n)))
    report = {'lattice': L.name, 'r': int(r), 'n': n, 'windows': dict()}
    for key, (all_h, prim_h) in hist.items():
        nu = int(np.sum(all_h))
        nu_prime = np.cumsum(prim_h)
        rhs = _relation_rhs(nu_prime, b, n)
        entry = {'nu': nu, 'rhs': rhs, 'equal': nu == rhs}
        if key == 'total':
            entry['terms'] = [(k, b[k - 1], n // (k*k),
                               int(nu_prime[n // (k*k)]))
                              for k in range(1, math.isqrt(n) + 1)]
            report.update(entry)
        else:
            report['windows'][key] = entry
    logging.debug("Multiplicity relation on %s, r=%d, n=%d: %d against %d" %
                  (L.name, r, n, report['nu'], report['rhs']))
    return report
