"""
    Local densities of representations of a Gram matrix M by a lattice,

        beta_a(M) = lim_s a^(-s (rd - r(r+1)/2)) #{x in (Z/a^s)^(d x r) : I(x) = M mod a^s}

    computed by exact counting, and the relative volume
    det(M)^((d-r-1)/2) prod_a beta_a(M) with its growth in det(M).

    Three counting backends are available.  `scan` runs over every residue
    tuple, `hensel` lifts solutions one level at a time and `convolution`
    (diagonal Gram, r = 1) convolves the residue distributions of b_i x^2.
    For odd a a solution x whose differential x^T B has full rank mod a has
    exactly a^(dr - r(r+1)/2) lifts to the next level, and so do all of its
    lifts; only the remaining solutions are lifted explicitly.

"""

__all__ = ['count_solutions_mod',
           'count_solutions_modulus',
           'LocalDensityResult',
           'local_density',
           'RelativeVolume',
           'siegel_weil_relative',
           'growth_exponent_check']

import itertools
import logging
import math
from fractions import Fraction

import numpy as np
import pandas as pd
import scipy.stats
import sympy

from equilattice._errors import DensityError, InputError
from equilattice.utils.checks_and_conversions import check_positive_int
from equilattice.utils.exact import batch_det, batch_gram
from equilattice.lattice.quadratic_lattice import GramMatrix
from equilattice.lattice.enumeration import (_as_lattice,
                                             enumerate_representations)
from equilattice.lattice.hnf import saturation_index

# largest number of residue tuples held or scanned at once
MAX_TUPLES = 10**7

_CHUNK = 2**18


def _check_prime(a):
    a = check_positive_int(a, 'a')
    if not sympy.isprime(a):
        raise InputError("Expecting a prime modulus, got %d" % a)
    return a

def _check_gram(M, r=None):
    M = GramMatrix(M)
    if r is not None and M.size != r:
        raise InputError("M must be %d x %d, got size %d" % (r, r, M.size))
    return M.matrix.astype(np.int64)

def _upper(G):
    iu = np.triu_indices(G.shape[-1])
    return G[..., iu[0], iu[1]]

def _scan_solutions(B, r, M, q, count_only=False):
    '''
    Residue tuples x in [0, q)^(r x d) with I(x) = M mod q, by full scan
    '''
    d = B.shape[0]
    total = q**(d*r)
    if total > MAX_TUPLES:
        raise DensityError("Full scan of %d tuples exceeds the cap of %d" %
                           (total, MAX_TUPLES))
    target = _upper(np.mod(M, q))
    powers = q**np.arange(d*r, dtype=np.int64)
    found, count = [], 0
    for start in range(0, total, _CHUNK):
        idx = np.arange(start, min(start + _CHUNK, total), dtype=np.int64)
        X = ((idx[:, None] // powers) % q).reshape(-1, r, d)
        G = np.mod(batch_gram(B, X), q)
        ok = np.all(_upper(G) == target, axis=1)
        count += int(ok.sum())
        if not count_only:
            found.append(X[ok])
    if count_only:
        return count
    return np.concatenate(found) if found else np.zeros((0, r, d), np.int64)

def _smooth_mask(X, B, a):
    '''
    True where x^T B has rank r modulo a
    '''
    m, r, d = X.shape
    if m == 0:
        return np.zeros(0, dtype=bool)
    Y = np.mod(np.matmul(X, B), a)
    mask = np.zeros(m, dtype=bool)
    for cols in itertools.combinations(range(d), r):
        mask |= np.mod(batch_det(Y[:, :, list(cols)]), a) != 0
    return mask

def _lift(X, B, M, a, q):
    '''
    Explicit lifts of solutions mod q to solutions mod a q
    '''
    m, r, d = X.shape
    if m == 0:
        return X
    steps = a**(d*r)
    if m*steps > MAX_TUPLES:
        raise DensityError("Lifting %d solutions needs %d tuples, over the " %
                           (m, m*steps) + "cap of %d" % MAX_TUPLES)
    powers = a**np.arange(d*r, dtype=np.int64)
    mu = ((np.arange(steps, dtype=np.int64)[:, None] // powers) % a
          ).reshape(-1, r, d)
    G = batch_gram(B, X)
    # (I(x) - M) / q is an integer on solutions
    C = np.mod((G - M[None]) // q, a)
    XB = np.matmul(X, B)
    out = []
    block = max(1, _CHUNK // steps)
    for start in range(0, m, block):
        xb = XB[start:start + block]
        # x^T B mu + mu^T B x for every pair, shape (m, steps, r, r)
        cross = np.einsum('mid,ujd->muij', xb, mu)
        lin = cross + np.swapaxes(cross, 2, 3) + \
            C[start:start + block, None]
        ok = np.all(_upper(np.mod(lin, a)) == 0, axis=2)
        i, j = np.nonzero(ok)
        out.append(X[start:start + block][i] + q*mu[j])
    return np.concatenate(out) if out else np.zeros((0, r, d), np.int64)

def _hensel_counts(B, r, M, a, s_max, stop=None):
    '''
    Counts for s = 1..s_max; `stop(counts)` may end the lifting early
    '''
    d = B.shape[0]
    X = _scan_solutions(B, r, M, a)
    counts = [len(X)]
    smooth = 0
    if a % 2 == 1:
        mask = _smooth_mask(X, B, a)
        smooth = int(mask.sum())
        X = X[~mask]
    factor = a**(d*r - r*(r + 1)//2)
    q = a
    for s in range(2, s_max + 1):
        if stop is not None and stop(counts):
            break
        X = _lift(X, B, M, a, q)
        q *= a
        smooth *= factor
        counts.append(smooth + len(X))
        logging.debug("Hensel level %d mod %d: %d smooth, %d explicit" %
                      (s, a, smooth, len(X)))
    return counts

def _is_diagonal(B):
    return bool(np.all(B == np.diag(np.diag(B))))

def _convolution_count(B, m, q):
    '''
    #{x in (Z/q)^d : sum b_i x_i^2 = m mod q} for diagonal B
    '''
    x = np.arange(q, dtype=np.int64)
    total = None
    for b in np.diag(B):
        dist = np.bincount(np.mod(int(b)*x*x, q), minlength=q)
        if total is None:
            total = dist.astype(np.int64)
            continue
        new = np.zeros(q, dtype=np.int64)
        for u in np.nonzero(dist)[0]:
            new += int(dist[u])*np.roll(total, int(u))
        total = new
    return int(total[int(m) % q])

def _choose_method(B, r, a, s):
    d = B.shape[0]
    q = a**s
    if r == 1 and _is_diagonal(B) and d*math.log2(q) < 62:
        return 'convolution'
    if q**(d*r) <= 3**4:
        return 'scan'
    return 'hensel'

def count_solutions_mod(L, r, M, a, s, method='auto'):
    '''
    Number of tuples x modulo a^s with x^T B x = M modulo a^s.

    Parameters
    ----------
    L: :class:`equilattice.lattice.QuadraticLattice`
        any non-degenerate lattice
    r: int
        tuple length
    M: :class:`equilattice.lattice.GramMatrix` or array like
        r x r symmetric integer matrix
    a: int
        prime
    s: int
        level, s >= 1
    method: str, optional
        one of 'auto' (default), 'scan', 'hensel' or 'convolution'

    Returns
    -------
    int
    '''
    L = _as_lattice(L)
    r = check_positive_int(r, 'r')
    M = _check_gram(M, r)
    a = _check_prime(a)
    s = check_positive_int(s, 's')
    B = L.gram.astype(np.int64)
    if method == 'auto':
        method = _choose_method(B, r, a, s)
    if method == 'scan':
        return _scan_solutions(B, r, M, a**s, count_only=True)
    elif method == 'hensel':
        return _hensel_counts(B, r, M, a, s)[-1]
    elif method == 'convolution':
        if r != 1 or not _is_diagonal(B):
            raise InputError("Convolution counting needs r = 1 and a " +
                             "diagonal Gram matrix")
        return _convolution_count(B, M[0, 0], a**s)
    raise InputError("Unknown counting method %s" % method)

def count_solutions_modulus(L, r, M, q, method='crt'):
    '''
    Count of solutions modulo a composite q, as the product of the prime
    power counts ('crt') or by a direct scan ('scan')
    '''
    L = _as_lattice(L)
    r = check_positive_int(r, 'r')
    q = check_positive_int(q, 'q')
    if method == 'scan':
        return _scan_solutions(L.gram.astype(np.int64), r,
                               _check_gram(M, r), q, count_only=True)
    elif method != 'crt':
        raise InputError("Unknown method %s" % method)
    out = 1
    for p, e in sympy.factorint(q).items():
        out *= count_solutions_mod(L, r, M, p, e)
    return out


class LocalDensityResult(object):
    '''
    Normalised counts of a local density computation

    Parameters
    ----------
    prime: int
    counts: list of int
        raw counts for s = 1, 2, ...
    exponent: int
        rd - r(r+1)/2, the normalisation is a^(-s exponent)
    '''
    def __init__(self, prime, counts, exponent):
        self._prime = prime
        self._counts = list(counts)
        self._normalized = [Fraction(c, prime**(s*exponent))
                            for s, c in enumerate(self._counts, 1)]
        self._level = None
        if self._counts and self._counts[0] == 0:
            self._level = 1
        else:
            for s in range(1, len(self._normalized)):
                if self._normalized[s] == self._normalized[s - 1]:
                    self._level = s
                    break

    @property
    def prime(self):
        return self._prime

    @property
    def counts(self):
        return list(self._counts)

    @property
    def normalized(self):
        return list(self._normalized)

    @property
    def stabilized(self):
        return self._level is not None

    @property
    def level(self):
        '''
        first level s with normalised count equal to that of s + 1
        '''
        return self._level

    @property
    def value(self):
        if self._level is None:
            return None
        return self._normalized[self._level - 1]

    def to_frame(self):
        s = np.arange(1, len(self._counts) + 1)
        return pd.DataFrame({
            'prime': self._prime,
            's': s,
            'raw_count': np.array(self._counts, dtype=object),
            'normalized': [str(x) for x in self._normalized],
            'stabilized': [self._level is not None and k >= self._level
                           for k in s]})

    def __repr__(self):
        return 'LocalDensityResult(prime=%d, value=%s, level=%s)' % (
            self._prime, self.value, self._level)


def local_density(L, r, M, a, s_max=6, method='auto', stop_early=True):
    '''
    Local density beta_a(M) by exact counting at increasing levels.

    Parameters
    ----------
    L: :class:`equilattice.lattice.QuadraticLattice`
    r: int
    M: :class:`equilattice.lattice.GramMatrix` or array like
    a: int
        prime
    s_max: int, optional
        highest level, at least 2, defaults to 6
    method: str, optional
        counting backend, see :func:`count_solutions_mod`
    stop_early: bool, optional
        stop at the first pair of equal consecutive normalised counts,
        defaults to True

    Returns
    -------
    :class:`LocalDensityResult`
    '''
    L = _as_lattice(L)
    r = check_positive_int(r, 'r')
    Mm = _check_gram(M, r)
    a = _check_prime(a)
    s_max = check_positive_int(s_max, 's_max')
    if s_max < 2:
        raise InputError("s_max must be at least 2")
    d = L.rank
    B = L.gram.astype(np.int64)
    exponent = r*d - r*(r + 1)//2

    def settled(counts):
        if not stop_early or not counts:
            return False
        if counts[0] == 0:
            return True
        if len(counts) < 2:
            return False
        s = len(counts)
        return Fraction(counts[-1], a**(s*exponent)) == \
            Fraction(counts[-2], a**((s - 1)*exponent))

    chosen = _choose_method(B, r, a, s_max) if method == 'auto' else method
    if chosen == 'hensel':
        counts = _hensel_counts(B, r, Mm, a, s_max, stop=settled)
    else:
        counts = []
        for s in range(1, s_max + 1):
            if settled(counts):
                break
            counts.append(count_solutions_mod(L, r, Mm, a, s, chosen))
    result = LocalDensityResult(a, counts, exponent)
    if not result.stabilized:
        logging.warning("Local density at %d did not stabilise by level %d" %
                        (a, s_max))
    return result


class RelativeVolume(object):
    '''
    det(M)^((d-r-1)/2) times the product of local densities over a finite
    set of primes
    '''
    def __init__(self, det_M, d, r, densities, prime_cutoff):
        self._det = det_M
        self._exponent = Fraction(d - r - 1, 2)
        self._densities = dict(densities)
        self._cutoff = prime_cutoff
        self._tail_bounded = 2*r <= d - 3

    @property
    def det(self):
        return self._det

    @property
    def exponent(self):
        return self._exponent

    @property
    def local_factors(self):
        return {p: res.value for p, res in self._densities.items()}

    @property
    def densities(self):
        return dict(self._densities)

    @property
    def product(self):
        out = Fraction(1)
        for v in self.local_factors.values():
            out *= v
        return out

    @property
    def prime_cutoff(self):
        return self._cutoff

    @property
    def tail_bounded(self):
        '''
        True when the omitted Euler factors only change the value by a
        bounded factor (2r <= d - 3)
        '''
        return self._tail_bounded

    @property
    def value(self):
        return float(self._det)**float(self._exponent)*float(self.product)

    @property
    def log_value(self):
        return float(self._exponent)*math.log(self._det) + \
            math.log(float(self.product))

    def to_frame(self):
        return pd.concat([res.to_frame() for res in self._densities.values()],
                         ignore_index=True)

    def __repr__(self):
        return 'RelativeVolume(det=%d, value=%.12g)' % (self._det, self.value)


def siegel_weil_relative(L, M, prime_cutoff=7, s_max=10, method='auto'):
    '''
    Relative volume det(M)^((d-r-1)/2) prod_a beta_a(M) over the primes up
    to the cutoff and those dividing 2 det(M) det(L).

    Parameters
    ----------
    L: :class:`equilattice.lattice.QuadraticLattice`
    M: :class:`equilattice.lattice.GramMatrix` or array like
        positive definite r x r Gram matrix with r < d
    prime_cutoff: int, optional
        defaults to 7
    s_max: int, optional
        highest Hensel level per prime, defaults to 10

    Returns
    -------
    :class:`RelativeVolume`
    '''
    L = _as_lattice(L)
    G = GramMatrix(M)
    r, d = G.size, L.rank
    if r >= d:
        raise InputError("Relative volumes need r < d, got r=%d d=%d" %
                         (r, d))
    if not G.is_positive_definite():
        raise InputError("M must be positive definite")
    det_M = G.det
    primes = set(sympy.primerange(2, int(prime_cutoff) + 1))
    primes |= set(sympy.primefactors(2*det_M*abs(L.det)))
    densities = dict()
    for p in sorted(primes):
        res = local_density(L, r, G, p, s_max=s_max, method=method)
        if not res.stabilized:
            raise DensityError("Local density at %d unresolved up to " % p +
                               "level %d" % s_max)
        densities[p] = res
    return RelativeVolume(det_M, d, r, densities, prime_cutoff)

def _primitively_represented(L, M):
    '''
    True or False when decidable by search on L, None otherwise
    '''
    if not L.is_positive_definite:
        return None
    for t in enumerate_representations(L, M):
        if saturation_index(t.vectors) == 1:
            return True
    return False

def growth_exponent_check(L, M_sequence, prime_cutoff=7, s_max=10,
                          companion=None):
    '''
    Least squares slope of log relative volume against log det(M).

    Parameters
    ----------
    L: :class:`equilattice.lattice.QuadraticLattice`
    M_sequence: list
        at least four Gram matrices, not all of the same determinant
    prime_cutoff: int, optional
    s_max: int, optional
    companion: :class:`equilattice.lattice.QuadraticLattice`, optional
        positive definite lattice searched for primitive representations
        when L is indefinite

    Returns
    -------
    dict
        slope, intercept, stderr, expected slope (d-r-1)/2, lower bound
        expected - 0.1 and a :class:`pandas.DataFrame` of the points
    '''
    L = _as_lattice(L)
    Ms = [GramMatrix(M) for M in M_sequence]
    if len(Ms) < 4:
        raise InputError("Need at least 4 matrices, got %d" % len(Ms))
    r, d = Ms[0].size, L.rank
    if any(M.size != r for M in Ms):
        raise InputError("All matrices must have the same size")
    if 2*r > d - 3:
        raise InputError("Growth law needs r <= (d-3)/2, got r=%d d=%d" %
                         (r, d))
    dets = [M.det for M in Ms]
    if len(set(dets)) == 1:
        raise InputError("Determinants are constant, slope undefined")

    search = L if companion is None else _as_lattice(companion)
    rows = []
    for M, det in zip(Ms, dets):
        vol = siegel_weil_relative(L, M, prime_cutoff, s_max)
        primitive = _primitively_represented(search, M)
        if primitive is None:
            logging.warning("Primitive representability of %s assumed" %
                            M.tolist())
        rows.append((det, math.log(det), vol.value, vol.log_value,
                     primitive))
    df = pd.DataFrame(rows, columns=['det', 'log_det', 'relative_volume',
                                     'log_volume', 'primitive'])
    fit = scipy.stats.linregress(df['log_det'], df['log_volume'])
    df['residual'] = df['log_volume'] - (fit.intercept +
                                         fit.slope*df['log_det'])
    expected = (d - r - 1)/2.0
    return {'slope': float(fit.slope),
            'intercept': float(fit.intercept),
            'stderr': float(fit.stderr),
            'expected': expected,
            'lower_bound': expected - 0.1,
            'table': df}
