"""
    Independent oracles for the limit measures: Monte Carlo over a box for
    the push forward of Lebesgue measure on {0 < h <= 1}, Haar measure on
    the Grassmannian from Gaussian frames, hyperbolic area on the
    fundamental domain, and closed forms for balls and caps.

    Lebesgue measure on tuples is normalised so that Z^(dr) has covolume
    one.  Sampling runs over a fixed number of seeded sub-streams whose
    partial sums are added in order, so estimates only depend on the seed.

"""

__all__ = ['ball_volume',
           'ellipsoid_volume',
           'projective_cap_measure',
           'spherical_cap_fraction',
           'haar_frames',
           'grassmann_haar_oracle',
           'oracle_limit_measure',
           'fundamental_domain_oracle']

import logging
import math

import numpy as np
import scipy.special

from equilattice._errors import InputError, LatticeError
from equilattice.utils.checks_and_conversions import check_positive_int
from equilattice.utils.random_state import (test_seed, master_seed,
                                            spawn_random_states,
                                            split_samples)
from equilattice.utils.parallel import parallel_map
from equilattice.lattice.enumeration import _as_lattice

# number of independent sub-streams per estimate
N_CHUNKS = 16


def ball_volume(d):
    '''
    Volume pi^(d/2) / Gamma(d/2 + 1) of the Euclidean unit ball
    '''
    d = check_positive_int(d, 'd')
    return float(np.pi**(d/2.0)/scipy.special.gamma(d/2.0 + 1))

def ellipsoid_volume(L):
    '''
    Lebesgue volume of {x : B(x, x) <= 1} for a positive definite lattice
    '''
    L = _as_lattice(L)
    if not L.is_positive_definite:
        raise LatticeError("Ellipsoid volume needs a definite lattice")
    return ball_volume(L.rank)/math.sqrt(L.det)

def projective_cap_measure(d, half_angle):
    '''
    Haar mass of the lines at angle at most `half_angle` from a fixed line
    in R^d.  For d = 2 this is 2 theta / pi and for d = 3 it is
    1 - cos(theta).
    '''
    d = check_positive_int(d, 'd')
    if d == 1:
        return 1.0
    c2 = min(1.0, max(0.0, math.cos(half_angle)**2))
    # u_1^2 ~ Beta(1/2, (d-1)/2) for u uniform on the sphere
    return float(1.0 - scipy.special.betainc(0.5, (d - 1)/2.0, c2))

def spherical_cap_fraction(d, half_angle):
    '''
    Fraction of the unit sphere in R^d at angle at most `half_angle` from
    a fixed direction
    '''
    if half_angle <= np.pi/2:
        return 0.5*projective_cap_measure(d, half_angle)
    return 1.0 - 0.5*projective_cap_measure(d, np.pi - half_angle)

def _chunks(samples, seed, n_chunks):
    samples = check_positive_int(samples, 'samples')
    sizes = split_samples(samples, -(-samples // n_chunks))
    states = spawn_random_states(master_seed(seed), len(sizes))
    return list(zip(sizes, states))

def _merge(parts, scale):
    total = sum(p[0] for p in parts)
    total2 = sum(p[1] for p in parts)
    n = sum(p[2] for p in parts)
    mean = total/n
    var = max(0.0, total2/n - mean**2)
    return scale*mean, scale*math.sqrt(var/n)

def haar_frames(d, r, samples, random_state=None):
    '''
    Haar distributed orthonormal r-frames in R^d, as rows.

    The Q factor of a Gaussian d x r matrix with the signs of the diagonal
    of R moved into Q.

    Returns
    -------
    :class:`numpy.ndarray`
        (samples, r, d)
    '''
    d = check_positive_int(d, 'd')
    r = check_positive_int(r, 'r')
    if r > d:
        raise InputError("Frame size %d exceeds the dimension %d" % (r, d))
    rs = test_seed(True if random_state is None else random_state)
    Z = rs.normal(size=(int(samples), d, r))
    Q, R = np.linalg.qr(Z)
    signs = np.sign(np.diagonal(R, axis1=1, axis2=2))
    signs[signs == 0] = 1
    Q = Q*signs[:, None, :]
    return np.swapaxes(Q, 1, 2)

def grassmann_haar_oracle(d, r, window, samples, seed=None,
                          full_output=False, parallel=False):
    '''
    Haar mass of a window on the Grassmannian of r-planes in R^d.

    Parameters
    ----------
    d: int
    r: int
    window: :class:`equilattice.measure.WindowFunction`
        target 'grassmannian'
    samples: int
    seed: optional
        anything :func:`equilattice.utils.test_seed` accepts
    full_output: bool, optional
        also return the standard error
    parallel: bool, optional
        sample the sub-streams with dask

    Returns
    -------
    float, or (float, float) with the standard error
    '''
    d = check_positive_int(d, 'd')
    r = check_positive_int(r, 'r')

    def work(item):
        size, rs = item
        F = haar_frames(d, r, size, rs)
        P = np.matmul(np.swapaxes(F, 1, 2), F)
        f = np.asarray(window.evaluate(P), dtype=float)
        return f.sum(), (f*f).sum(), size

    parts = parallel_map(work, _chunks(samples, seed, N_CHUNKS), parallel)
    est, err = _merge(parts, 1.0)
    logging.debug("Haar mass of %s on Gr(%d,%d): %g +- %g" %
                  (getattr(window, 'name', window), r, d, est, err))
    return (est, err) if full_output else est

def _sampling_box(L, r, window):
    '''
    Half widths of a box in R^d containing every vector of every tuple in
    {0 < h <= 1} whose projection lies in the window support
    '''
    radius = getattr(window, 'majorant_radius', None)
    if radius is not None and np.isfinite(radius):
        P = np.asarray(L.majorant(), dtype=float)
        return radius*np.sqrt(np.diag(np.linalg.inv(P)))
    if L.is_positive_definite and r == 1:
        return np.sqrt(np.diag(np.linalg.inv(L.gram.astype(float))))
    raise LatticeError("Region {h <= 1} is unbounded for %s with r=%d; " %
                       (L.name, r) + "use a window with a majorant radius")

def oracle_limit_measure(L, r, window, samples, seed=None, parallel=False):
    '''
    Monte Carlo estimate of Leb{v : 0 < h(v) <= 1, pr(v) in window}.

    Parameters
    ----------
    L: :class:`equilattice.lattice.QuadraticLattice`
        positive definite with r = 1, or any lattice with a window of
        finite majorant radius
    r: int
    window: :class:`equilattice.measure.WindowFunction`
        target 'unit_discriminant'
    samples: int
        number of uniform points in the sampling box
    seed: optional
    parallel: bool, optional

    Returns
    -------
    estimate: float
    standard_error: float
    '''
    L = _as_lattice(L)
    r = check_positive_int(r, 'r')
    if samples is None or int(samples) <= 0:
        raise InputError("Need a positive number of samples")
    if getattr(window, 'majorant_radius', None) == 0:
        return 0.0, 0.0
    half = _sampling_box(L, r, window)
    d = L.rank
    widths = np.tile(half, r)
    volume = float(np.prod(2*widths))
    B = L.gram.astype(float)

    def work(item):
        size, rs = item
        X = rs.uniform(-1.0, 1.0, size=(size, r*d))*widths
        V = X.reshape(size, r, d)
        G = np.matmul(np.matmul(V, B), np.swapaxes(V, 1, 2))
        h = np.linalg.det(G)
        inside = (h > 0) & (h <= 1)
        if r > 1 and not L.is_positive_definite:
            inside &= np.all(np.linalg.eigvalsh(G) > 0, axis=1)
        f = np.zeros(size)
        if np.any(inside):
            pts = V[inside]*h[inside][:, None, None]**(-1.0/(2*r))
            f[inside] = window.evaluate(pts, lattice=L)
        return f.sum(), (f*f).sum(), size

    parts = parallel_map(work, _chunks(samples, seed, N_CHUNKS), parallel)
    est, err = _merge(parts, volume)
    if est > 0 and err > 0.1*est:
        logging.warning("Oracle estimate %g has a large standard error %g" %
                        (est, err))
    return est, err

def fundamental_domain_oracle(window, samples, seed=None, parallel=False):
    '''
    Hyperbolic area dx dy / y^2 of a window on the fundamental domain.

    With u = 1/y the domain lies in the box [-1/2, 1/2] x (0, 2/sqrt(3)]
    and the measure becomes du dx.

    Returns
    -------
    estimate: float
    standard_error: float
    '''
    u_max = 2.0/math.sqrt(3.0)

    def work(item):
        size, rs = item
        x = rs.uniform(-0.5, 0.5, size=size)
        u = rs.uniform(0.0, u_max, size=size)
        u[u == 0] = u_max
        z = x + 1j/u
        f = np.zeros(size)
        inside = np.abs(z) >= 1
        if np.any(inside):
            f[inside] = window.evaluate(z[inside])
        return f.sum(), (f*f).sum(), size

    parts = parallel_map(work, _chunks(samples, seed, N_CHUNKS), parallel)
    return _merge(parts, u_max)
