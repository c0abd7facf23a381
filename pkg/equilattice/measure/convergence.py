"""
    Convergence tables for the empirical measures n^(-d/2) mu_n, nu_n and
    nu'_n against their oracles.

    For r = 1 the vectors are streamed block by block and only per-norm
    histograms are kept, so no measure is materialised.  For r >= 2 the
    sublattices come from the reduced basis search and the tuples from the
    windowed enumeration.

"""

__all__ = ['build_measures', 'convergence_report']

import logging
import math

import numpy as np
import pandas as pd

from equilattice._errors import InputError
from equilattice.utils.random_state import master_seed
from equilattice.lattice.enumeration import (_as_lattice,
                                             _check_positive_definite,
                                             iter_vector_blocks,
                                             enumerate_tuples_disc_leq,
                                             enumerate_tuples_in_window,
                                             enumerate_sublattices_disc_leq)
from equilattice.measure.projection import (grassmann_projectors,
                                            unit_discriminant_points)
from equilattice.measure.empirical import EmpiricalMeasure
from equilattice.measure.oracle import (oracle_limit_measure,
                                        grassmann_haar_oracle,
                                        ellipsoid_volume)

_CHUNK = 2**16

COLUMNS = ['window_id', 'n', 'mu_scaled', 'nu', 'nu_prime', 'ratio',
           'oracle', 'stderr', 'nu_prime_share', 'deviation']


def build_measures(L, r, n, max_norm=None):
    '''
    The measures mu_n, nu_n and nu'_n at a single bound.

    Parameters
    ----------
    L: :class:`equilattice.lattice.QuadraticLattice`
        positive definite lattice
    r: int
    n: int
    max_norm: int, optional
        per-vector norm cap of the tuples, see
        :func:`equilattice.lattice.enumerate_tuples_disc_leq`

    Returns
    -------
    mu, nu, nu_prime: :class:`EmpiricalMeasure`
    '''
    L = _as_lattice(L)
    tuples = enumerate_tuples_disc_leq(L, r, n, max_norm)
    subs = enumerate_sublattices_disc_leq(L, r, n)
    return (EmpiricalMeasure.from_tuples(L, tuples),
            EmpiricalMeasure.from_sublattices(L, subs),
            EmpiricalMeasure.from_sublattices(L, subs, primitive_only=True))

def _histogram(keys, values, n_max):
    return np.bincount(keys, weights=values, minlength=n_max + 1)[:n_max + 1]

def _cumulative(h):
    return None if h is None else np.cumsum(h)

def _stream_lines(L, n_max, unit_windows, grass_windows):
    '''
    Per-norm histograms of mu (unit windows) and of nu, nu' (Grassmannian
    windows) for r = 1
    '''
    mu = {w.name: np.zeros(n_max + 1) for w in unit_windows}
    mu['total'] = np.zeros(n_max + 1)
    nu = {w.name: np.zeros(n_max + 1) for w in grass_windows}
    nu['total'] = np.zeros(n_max + 1)
    nup = {key: np.zeros(n_max + 1) for key in nu}
    count = 0
    for X, norms in iter_vector_blocks(L, n_max):
        for start in range(0, len(X), _CHUNK):
            x = X[start:start + _CHUNK]
            nm = np.asarray(norms[start:start + _CHUNK], dtype=np.int64)
            count += len(x)
            mu['total'] += _histogram(nm, None, n_max)
            if unit_windows:
                pts = (x/np.sqrt(nm)[:, None])[:, None, :]
                for w in unit_windows:
                    mu[w.name] += _histogram(nm, w.evaluate(pts, lattice=L),
                                             n_max)
            # one line per pair +-v
            lead = x[np.arange(len(x)), np.argmax(x != 0, axis=1)]
            keep = lead > 0
            xl, nl = x[keep], nm[keep]
            prim = (np.gcd.reduce(np.abs(xl), axis=1) == 1).astype(float)
            nu['total'] += _histogram(nl, None, n_max)
            nup['total'] += _histogram(nl, prim, n_max)
            if grass_windows and len(xl):
                P = grassmann_projectors(L, xl[:, None, :])
                for w in grass_windows:
                    f = np.asarray(w.evaluate(P, lattice=L), dtype=float)
                    nu[w.name] += _histogram(nl, f, n_max)
                    nup[w.name] += _histogram(nl, f*prim, n_max)
    logging.debug("Streamed %d vectors of norm at most %d" % (count, n_max))
    return mu, nu, nup

def _sublattice_hist(L, r, n_max, grass_windows):
    subs = enumerate_sublattices_disc_leq(L, r, n_max)
    nu = {'total': np.zeros(n_max + 1)}
    nup = {'total': np.zeros(n_max + 1)}
    for w in grass_windows:
        nu[w.name] = np.zeros(n_max + 1)
        nup[w.name] = np.zeros(n_max + 1)
    if not subs:
        return nu, nup
    disc = np.array([s.discriminant for s in subs], dtype=np.int64)
    prim = np.array([s.is_primitive for s in subs], dtype=float)
    nu['total'] = _histogram(disc, None, n_max)
    nup['total'] = _histogram(disc, prim, n_max)
    if grass_windows:
        P = grassmann_projectors(L, np.stack([s.vectors for s in subs]))
        for w in grass_windows:
            f = np.asarray(w.evaluate(P, lattice=L), dtype=float)
            nu[w.name] = _histogram(disc, f, n_max)
            nup[w.name] = _histogram(disc, f*prim, n_max)
    return nu, nup

def _windowed_tuples_hist(L, r, n_max, w):
    if w.majorant_radius is None:
        logging.warning("Window %s is unbounded for r=%d, mu not computed" %
                        (w.name, r))
        return None
    tuples = enumerate_tuples_in_window(L, r, n_max, w)
    hist = np.zeros(n_max + 1)
    if tuples:
        V = np.stack([t.vectors for t in tuples])
        disc = np.array([t.discriminant for t in tuples], dtype=np.int64)
        hist = _histogram(disc, w.evaluate(unit_discriminant_points(L, V),
                                           lattice=L), n_max)
    return hist

def convergence_report(L, r, windows, n_grid, oracle_samples=20000, seed=0,
                       parallel=False):
    '''
    Window masses of the empirical measures on a grid of bounds, with
    oracle values.

    Windows on the unit discriminant surface report n^(-d/2) mu_n against
    :func:`oracle_limit_measure`; windows on the Grassmannian report nu_n,
    nu'_n, the share nu'_n(A) / nu'_n(total) and the Haar mass of the
    window.  A 'total' row is always included.

    Parameters
    ----------
    L: :class:`equilattice.lattice.QuadraticLattice`
        positive definite lattice
    r: int
    windows: list of :class:`equilattice.measure.WindowFunction`
    n_grid: list of int
    oracle_samples: int, optional
    seed: optional
        master seed of the oracles
    parallel: bool, optional

    Returns
    -------
    :class:`pandas.DataFrame`
        columns window_id, n, mu_scaled, nu, nu_prime, ratio, oracle,
        stderr, nu_prime_share and deviation
    '''
    L = _as_lattice(L)
    _check_positive_definite(L)
    d = L.rank
    windows = list(windows)
    n_grid = sorted(set(int(n) for n in n_grid))
    if not n_grid or n_grid[0] < 1:
        raise InputError("Grid of bounds must be non-empty and positive")
    names = [w.name for w in windows]
    if len(set(names)) != len(names) or 'total' in names:
        raise InputError("Window names must be unique and not 'total'")
    for w in windows:
        if w.target == 'fundamental_domain':
            raise InputError("Window %s is not on a lattice target" % w.name)
    n_max = n_grid[-1]
    unit = [w for w in windows if w.target == 'unit_discriminant']
    grass = [w for w in windows if w.target == 'grassmannian']

    if r == 1:
        mu, nu, nup = _stream_lines(L, n_max, unit, grass)
    else:
        nu, nup = _sublattice_hist(L, r, n_max, grass)
        mu = {'total': None}
        for w in unit:
            mu[w.name] = _windowed_tuples_hist(L, r, n_max, w)

    base = master_seed(seed)
    oracle = {'total': ((ellipsoid_volume(L), 0.0) if r == 1
                        else (np.nan, np.nan))}
    for i, w in enumerate(windows):
        if w.target == 'unit_discriminant':
            oracle[w.name] = oracle_limit_measure(L, r, w, oracle_samples,
                                                  base + i + 1, parallel)
        else:
            oracle[w.name] = grassmann_haar_oracle(d, r, w, oracle_samples,
                                                   base + i + 1, True,
                                                   parallel)

    mu_c = {k: _cumulative(h) for k, h in mu.items()}
    nu_c = {k: _cumulative(h) for k, h in nu.items()}
    nup_c = {k: _cumulative(h) for k, h in nup.items()}
    rows = []
    for key in ['total'] + names:
        est, err = oracle[key]
        for n in n_grid:
            m = mu_c.get(key)
            mu_scaled = np.nan if m is None else m[n]/n**(d/2.0)
            nu_n = nu_c[key][n] if key in nu_c else np.nan
            nup_n = nup_c[key][n] if key in nup_c else np.nan
            ratio = nup_n/nu_n if key in nu_c and nu_n > 0 else np.nan
            total_p = nup_c['total'][n]
            share = nup_n/total_p if key in nup_c and total_p > 0 \
                else np.nan
            if key in nu_c and key != 'total':
                dev = share/est - 1 if est > 0 else np.nan
            else:
                dev = mu_scaled/est - 1 if est > 0 and \
                    not math.isnan(mu_scaled) else np.nan
            rows.append((key, n, mu_scaled, nu_n, nup_n, ratio, est, err,
                         share, dev))
    return pd.DataFrame(rows, columns=COLUMNS)
