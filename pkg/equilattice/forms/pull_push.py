"""
    The push forward along G/L -> G/K of the pull back of the invariant
    volume of G/H, computed at the base point as the fibre average

        pi_* p^* omega_{G/H} = int_{K/L} Ad_k^*(iota_u alpha) d omega_{K/L}(k)

    with alpha the pulled back volume on g/l and u the wedge of a basis of
    k/l.  A torus fibre K/L is integrated with the trapezoidal rule on
    equispaced nodes over the period of each generator, which is exact for
    the trigonometric polynomials that arise, or by uniform Monte Carlo
    sampling of the torus.  When the generators of k/l do not commute, K
    must act as SO(m) on an invariant subspace of g (see
    :mod:`equilattice.forms.compact_fibre`) and L must be a torus; the
    fibre integral is then the volume of K/L times a Haar average over K,
    computed with the Euler angle rule for SO(3) or with Haar samples.

"""

__all__ = ['torus_periods',
           'adjoint_pullback',
           'pull_push',
           'vanishing_criterion_check',
           'complex_nonvanishing_check']

import itertools
import logging
import math
from fractions import Fraction

import numpy as np
import scipy.linalg

from equilattice._errors import (AcceptanceError, ConfigurationError,
                                 InputError, QuadratureError)
from equilattice.utils.checks_and_conversions import check_positive_int
from equilattice.utils.parallel import parallel_map
from equilattice.utils.random_state import (test_seed, master_seed,
                                            spawn_random_states,
                                            split_samples)
from equilattice.forms.exterior import (AlternatingForm, MultiVector,
                                        _quotient_coordinates)
from equilattice.forms.lie_configuration import _as_config
from equilattice.forms.compact_fibre import orthogonal_factor, so3_euler_rule

# largest denominator accepted between two frequencies of a torus
MAX_DENOMINATOR = 64
# nodes per evaluation chunk
_CHUNK = 64
N_CHUNKS = 16


def torus_periods(config, generators):
    '''
    Periods of t -> Ad(exp(t Y)) for commuting generators of a compact
    torus.

    Parameters
    ----------
    config: :class:`equilattice.forms.LieConfiguration`
    generators: array like
        (n, f) matrix, one generator per column

    Returns
    -------
    list of float

    Raises
    ------
    :class:`equilattice.QuadratureError`
        when the generators do not commute, have real or non-semisimple
        spectrum, or incommensurable frequencies
    '''
    config = _as_config(config)
    Y = np.asarray(generators, dtype=float)
    ads = [config.ad_matrix(Y[:, i]) for i in range(Y.shape[1])]
    if not _commute(ads):
        raise QuadratureError("Fibre generators do not commute, K/L is " +
                              "not a torus")
    periods = []
    for A in ads:
        w, V = np.linalg.eig(A)
        if np.abs(w.real).max() > 1e-8:
            raise QuadratureError("Generator with real spectrum, K is not " +
                                  "compact")
        if np.linalg.cond(V) > 1e8:
            raise QuadratureError("Generator is not semisimple, K is not " +
                                  "compact")
        freq = np.abs(w.imag)
        freq = freq[freq > 1e-8]
        if len(freq) == 0:
            raise QuadratureError("Generator acts trivially, its period " +
                                  "is undefined")
        low = freq.min()
        lcm = 1
        for x in freq/low:
            frac = Fraction(float(x)).limit_denominator(MAX_DENOMINATOR)
            if abs(float(frac) - x) > 1e-8:
                raise QuadratureError("Incommensurable frequencies, the " +
                                      "orbit is not closed")
            lcm = lcm*frac.denominator//math.gcd(lcm, frac.denominator)
        periods.append(2*math.pi*lcm/low)
    return periods

def _commute(ads):
    return all(np.abs(A.dot(B) - B.dot(A)).max() <= 1e-8
               for A, B in itertools.combinations(ads, 2))

def _elements(ads, params):
    return np.array([scipy.linalg.expm(sum(t*A for t, A in zip(p, ads)))
                     for p in params])

def adjoint_pullback(alpha, element):
    '''
    Pull back of a form on a quotient g/s along the map induced by an
    automorphism of g.

    Parameters
    ----------
    alpha: :class:`equilattice.forms.AlternatingForm`
        with an ambient basis and kernel attached
    element: array like
        (n, n) matrix acting on g, typically Ad_k

    Returns
    -------
    :class:`equilattice.forms.AlternatingForm`
        the form w -> alpha(Ad_k w, ...)

    Raises
    ------
    :class:`equilattice.InputError`
        when the element does not preserve the kernel s
    '''
    if not isinstance(alpha, AlternatingForm) or alpha.basis is None:
        raise InputError("Expecting a form with an ambient basis")
    A = np.asarray(element, dtype=float)
    n = alpha.basis.shape[0]
    if A.shape != (n, n):
        raise InputError("Expecting an (%d, %d) matrix" % (n, n))
    S = alpha.kernel
    if S is not None and S.shape[1]:
        img = A.dot(S)
        x = np.linalg.lstsq(S, img, rcond=None)[0]
        if np.abs(S.dot(x) - img).max() > 1e-8:
            raise InputError("Element does not normalize the kernel of " +
                             "the %s quotient" % alpha.space)
    M = _quotient_coordinates(alpha.basis, S, A.dot(alpha.basis))
    return alpha.pullback(M)

def _read_complement(config, complement):
    C = np.asarray(complement, dtype=float)
    n, dm = config.n, config.dims['g/k']
    if C.shape == (dm, n) and C.shape != (n, dm):
        C = C.T
    if C.shape != (n, dm):
        raise InputError("Complement needs %d vectors of length %d" % (dm, n))
    if np.linalg.matrix_rank(np.hstack([C, config.k]), tol=1e-8) != n:
        raise InputError("Vectors do not span a complement of k")
    return C

def _grid(periods, nodes):
    axes = [np.arange(nodes)*T/nodes for T in periods]
    return np.array(list(itertools.product(*axes)))

def _form_values(beta, gl, l, reps):
    '''
    Coefficients of Ad^* (iota_u alpha) on g/k for a stack of adjoint
    matrices
    '''
    def values(elements):
        out = []
        for A in elements:
            Yc = _quotient_coordinates(gl, l, A.dot(reps))
            out.append(beta.pullback(Yc).coefficients)
        return np.array(out)
    return values

def _integrand(values, ads):
    '''
    The form at Ad_{k^-1} for a chunk of torus parameters of k
    '''
    def work(params):
        return values(_elements(ads, -np.asarray(params)))
    return work

def _check_nodes(nodes):
    nodes = check_positive_int(nodes, 'nodes')
    if nodes < 4 or nodes % 2:
        raise InputError("The trapezoid rule needs an even number of at " +
                         "least 4 nodes")
    return nodes

def _sample_chunks(samples, seed):
    samples = check_positive_int(samples, 'samples')
    sizes = split_samples(samples, -(-samples // N_CHUNKS))
    states = spawn_random_states(
        master_seed(True if seed is None else seed), len(sizes))
    return sizes, states

def _compact_fibre_integral(config, values, nodes, monte_carlo, samples,
                            seed, parallel):
    '''
    Volume of K/L times the Haar average of the form over K, for K acting
    as a special orthogonal group and L a torus
    '''
    factor = orthogonal_factor(config)
    L = config.l
    if L.shape[1]:
        if not _commute([config.ad_matrix(L[:, i])
                         for i in range(L.shape[1])]):
            raise QuadratureError("l is not abelian, the stabilizer L must " +
                                  "be a torus")
        periods = torus_periods(config, L)
    else:
        periods = []
    volume = factor.quotient_volume(config.k_mod_l, L, periods)
    meta = {'periods': periods, 'fiber_volume': volume,
            'group': factor.group}
    if monte_carlo or factor.dim != 3:
        sizes, states = _sample_chunks(samples, seed)

        def work(job):
            return values(factor.haar_elements(*job))
        vals = np.vstack(parallel_map(work, list(zip(sizes, states)),
                                      parallel))
        coeffs = volume*vals.mean(axis=0)
        err = volume*float((vals.std(axis=0)/np.sqrt(len(vals)))
                           .max(initial=0.0))
        meta.update({'method': 'haar_monte_carlo', 'nodes': len(vals)})
    else:
        nodes = _check_nodes(nodes)
        left = L.shape[1] > 0

        def work(angles):
            return values(factor.euler_elements(angles))

        def rule(count):
            angles, weights = so3_euler_rule(count, left_invariant=left)
            chunks = [angles[i:i + _CHUNK]
                      for i in range(0, len(angles), _CHUNK)]
            vals = np.vstack(parallel_map(work, chunks, parallel))
            return volume*weights.dot(vals), len(vals)
        coeffs, count = rule(nodes)
        half = rule(nodes//2)[0]
        err = float(np.abs(coeffs - half).max(initial=0.0))
        meta.update({'method': 'euler', 'nodes': count})
    meta['error_estimate'] = err
    return coeffs, meta

def pull_push(config, nodes=64, scale=1.0, complement=None,
              monte_carlo=False, samples=4096, seed=None, parallel=False,
              invariance_samples=50):
    '''
    The form pi_* p^* omega_{G/H} on g/k.

    Parameters
    ----------
    config: :class:`equilattice.forms.LieConfiguration`
    nodes: int, optional
        trapezoid nodes per fibre generator, even, default 64; for an
        SO(3) fibre the nodes in each Euler angle, with nodes // 2
        Gauss-Legendre nodes in cos(theta)
    scale: float, optional
        omega_{G/H} is scale times the reference volume
    complement: array like, optional
        (n, dim g/k) representatives of g/k used as the output basis,
        defaults to the Killing complement m of k
    monte_carlo: bool, optional
        sample the torus uniformly, or K from its Haar measure, instead of
        the product rules.  Always on for SO(m) fibres with m > 3
    samples: int, optional
        Monte Carlo sample size
    seed: optional
        see :func:`equilattice.utils.test_seed`; Monte Carlo and the
        choice of invariance test elements
    parallel: bool, optional
        evaluate chunks of nodes with dask
    invariance_samples: int, optional
        number of net elements of K used to measure the K-invariance
        residual of the output

    Returns
    -------
    :class:`equilattice.forms.AlternatingForm`
        on the space 'g/k'.  The metadata holds the node count, the error
        estimate (difference to the rule on every other node, or the
        Monte Carlo standard error), the periods and volume of the fibre,
        the K-invariance residual, the scale factor lambda and whether
        k/l is orthogonal to h/l.  Non-torus fibres add the 'group' K acts
        as; their periods are those of L.

    Raises
    ------
    :class:`equilattice.QuadratureError`
        when K is not compact, or K/L is neither a torus nor a quotient of
        a special orthogonal group by a torus
    '''
    config = _as_config(config)
    alpha = config.volume_form(scale)
    u = config.fiber_multivector()
    beta = alpha.contract(u)
    reps = config.m if complement is None else \
        _read_complement(config, complement)
    gl, l, k = config.g_mod_l, config.l, config.k
    if beta.degree > reps.shape[1]:
        raise ConfigurationError("h: dim g/h exceeds dim k/l + dim g/k")
    lam, orthogonal = config.scale_factor()
    meta = {'volume_scale': scale, 'scale_factor': lam,
            'orthogonal': orthogonal}

    Y = config.k_mod_l
    ads = [config.ad_matrix(Y[:, i]) for i in range(Y.shape[1])]
    at = _form_values(beta, gl, l, reps)
    if Y.shape[1] == 0:
        Yc = _quotient_coordinates(gl, l, reps)
        coeffs = beta.pullback(Yc).coefficients
        meta.update({'method': 'point', 'nodes': 1, 'error_estimate': 0.0,
                     'periods': [], 'fiber_volume': 1.0})
    elif not _commute(ads):
        coeffs, extra = _compact_fibre_integral(
            config, at, nodes, monte_carlo, samples, seed, parallel)
        meta.update(extra)
        logging.debug("Pull-push of %s over %s/L: %d nodes, error " %
                      (config.name, extra['group'], extra['nodes']) +
                      "estimate %g" % extra['error_estimate'])
    else:
        periods = torus_periods(config, Y)
        volume = float(np.prod(periods))
        work = _integrand(at, ads)
        if monte_carlo:
            sizes, states = _sample_chunks(samples, seed)
            chunks = [rs.uniform(0, 1, size=(size, len(periods))) *
                      np.asarray(periods) for size, rs in zip(sizes, states)]
            values = np.vstack(parallel_map(work, chunks, parallel))
            coeffs = volume*values.mean(axis=0)
            err = volume*float((values.std(axis=0)/np.sqrt(len(values)))
                               .max(initial=0.0))
            meta.update({'method': 'monte_carlo', 'nodes': len(values)})
        else:
            nodes = _check_nodes(nodes)
            params = _grid(periods, nodes)
            chunks = [params[i:i + _CHUNK]
                      for i in range(0, len(params), _CHUNK)]
            values = np.vstack(parallel_map(work, chunks, parallel))
            coeffs = volume*values.mean(axis=0)
            idx = np.array(list(itertools.product(range(nodes),
                                                  repeat=len(periods))))
            even = np.all(idx % 2 == 0, axis=1)
            half = volume*values[even].mean(axis=0)
            err = float(np.abs(coeffs - half).max(initial=0.0))
            meta.update({'method': 'trapezoid', 'nodes': len(values)})
        meta.update({'error_estimate': err, 'periods': periods,
                     'fiber_volume': volume})
        logging.debug("Pull-push of %s: %d nodes, error estimate %g" %
                      (config.name, meta['nodes'], err))

    out = AlternatingForm(beta.degree, reps.shape[1], np.real(coeffs),
                          space='g/k', basis=reps, kernel=k, metadata=meta)
    out.metadata['invariance_residual'] = _invariance_residual(
        config, out, nodes if not monte_carlo else 64, invariance_samples,
        seed)
    return out

def _invariance_residual(config, form, nodes, count, seed):
    '''
    Largest change of the coefficients under Ad_k for net elements of a
    torus K, or Haar samples of a special orthogonal K; None for any other
    K
    '''
    if count <= 0:
        return None
    rs = test_seed(0 if seed is None else master_seed(seed))
    ads = [config.ad_matrix(config.k[:, i]) for i in range(config.k.shape[1])]
    try:
        if _commute(ads):
            periods = torus_periods(config, config.k)
            steps = rs.randint(0, nodes, size=(count, len(periods)))
            elements = _elements(ads, steps*np.asarray(periods)/nodes)
        else:
            elements = orthogonal_factor(config).haar_elements(count, rs)
    except QuadratureError as e:
        logging.debug("Invariance residual skipped: %s" % e)
        return None
    res = 0.0
    for A in elements:
        diff = adjoint_pullback(form, A).coefficients - form.coefficients
        res = max(res, float(np.abs(diff).max(initial=0.0)))
    return res

def _net(config, nodes):
    '''
    Pairs (Ad_k, parameters) over a net of K: a grid of the torus, or
    Euler angles on multiples of 2 pi / nodes and pi / (nodes // 2) for
    SO(3)
    '''
    ads = [config.ad_matrix(config.k[:, i]) for i in range(config.k.shape[1])]
    if _commute(ads):
        grid = _grid(torus_periods(config, config.k), nodes)
        return ((_elements(ads, [p])[0], p.tolist()) for p in grid)
    factor = orthogonal_factor(config)
    if factor.dim != 3:
        raise QuadratureError("Euler angles need SO(3), K acts as %s" %
                              factor.group)
    turns = 2*math.pi*np.arange(nodes)/nodes
    tilts = np.linspace(0, math.pi, nodes//2 + 1)
    angles = np.array(list(itertools.product(turns, tilts, turns)))
    return zip(factor.euler_elements(angles), angles.tolist())

def vanishing_criterion_check(config, nodes=32):
    '''
    Search a net of K for an element whose adjoint action preserves h and
    l and reverses the orientation of h/l.  Such an element forces the
    pull-push form to vanish.

    Parameters
    ----------
    config: :class:`equilattice.forms.LieConfiguration`
    nodes: int, optional
        net points per generator of a torus K; for K acting as SO(3) the
        points per Euler angle phi and psi, with nodes // 2 + 1 angles
        theta from 0 to pi

    Returns
    -------
    dict or None
        the witness: 'element' (the matrix Ad_k), 'parameters' (torus
        parameters or Euler angles) and the 'determinant' on h/l; None
        when no net element qualifies
    '''
    config = _as_config(config)
    H, L, Hl = config.h, config.l, config.h_mod_l
    if Hl.shape[1] == 0:
        return None
    nodes = check_positive_int(nodes, 'nodes')
    try:
        net = _net(config, nodes)
    except QuadratureError as e:
        logging.warning("No net on K for the vanishing criterion: %s" % e)
        return None
    for A, p in net:
        preserved = True
        for S in (H, L):
            if S.shape[1] == 0:
                continue
            img = A.dot(S)
            x = np.linalg.lstsq(S, img, rcond=None)[0]
            if np.abs(S.dot(x) - img).max() > 1e-8:
                preserved = False
                break
        if not preserved:
            continue
        det = float(np.linalg.det(_quotient_coordinates(Hl, L, A.dot(Hl))))
        if det < 0:
            logging.debug("Orientation reversing element at %s" % p)
            return {'element': A, 'parameters': p, 'determinant': det}
    return None

def complex_nonvanishing_check(config, nodes=64, tol=1e-8):
    '''
    Value of the pull-push form on a complex basis c_1, J c_1, ... of the
    complement of h/l in g/k, which is positive when G/K carries an
    invariant complex structure making H/L a complex submanifold.

    Parameters
    ----------
    config: :class:`equilattice.forms.LieConfiguration`
        with a complex structure
    nodes: int, optional
    tol: float, optional
        the value must exceed tol

    Returns
    -------
    dict
        'value', 'positive', the pull-push 'form' and the 'multivector'
        c_1 ^ J c_1 ^ ... on g/k

    Raises
    ------
    :class:`equilattice.ConfigurationError`
        without a valid complex structure
    :class:`equilattice.AcceptanceError`
        when the value is not positive
    '''
    config = _as_config(config)
    if config.complex_structure is None:
        raise ConfigurationError("complex_structure: not supplied")
    form = pull_push(config, nodes=nodes)
    C = config.complex_complement()
    if C.shape[1] != form.degree:
        raise ConfigurationError("complex_structure: complement of h/l " +
                                 "has dimension %d, expecting %d" %
                                 (C.shape[1], form.degree))
    mv = MultiVector.from_vectors(form.coordinates(C.T), space='g/k',
                                  basis=form.basis, kernel=form.kernel)
    value = float(np.real(form.pair(mv)))
    report = {'value': value, 'positive': value > tol, 'form': form,
              'multivector': mv}
    if not report['positive']:
        raise AcceptanceError("Pull-push form is not positive on the " +
                              "complex complement: %g" % value)
    return report
