"""
    Regular fixed points of the Hecke correspondence T_N on the modular
    curve and their distribution in the fundamental domain.

    An elliptic integral matrix of determinant N and trace t fixes one
    point of the upper half plane, a CM point of discriminant
    D = t^2 - 4N.  Conjugation by SL(2,Z) moves the pair (point, matrix)
    and the associated form (c, d - a, -b) along, so the classes are
    counted exactly by reducing the forms, and their number for a given
    trace is the number of reduced forms of discriminant D.

"""

__all__ = ['FixedPointRecord',
           'elliptic_fixed_points',
           'fixed_point_table',
           'class_number_table',
           'hurwitz_relation',
           'cm_equidistribution_report']

import logging
import math
from fractions import Fraction

import numpy as np
import pandas as pd
import sympy

from equilattice._errors import AcceptanceError, InputError
from equilattice.utils.checks_and_conversions import check_positive_int
from equilattice.utils.parallel import parallel_map
from equilattice.cm.binary_forms import reduced_forms, hurwitz_class_number
from equilattice.cm.hecke import HeckeMatrix, fixed_point
from equilattice.cm.fundamental_domain import (FUNDAMENTAL_DOMAIN_AREA,
                                               region_area, default_regions)


class FixedPointRecord(object):
    '''
    One SL(2,Z) class of pairs (z, gamma) with gamma z = z.

    Parameters
    ----------
    N: int
        the determinant
    matrix: :class:`equilattice.cm.HeckeMatrix`
        the representative whose associated form is reduced
    form: :class:`equilattice.cm.BinaryQuadraticForm`
        the reduced form
    '''
    def __init__(self, N, matrix, form):
        self._N = N
        self._matrix = matrix
        self._form = form
        self._point = form.root()
        self._weight = form.weight

    @property
    def N(self):
        return self._N

    @property
    def t(self):
        return self._matrix.trace

    @property
    def D(self):
        return self._form.discriminant

    @property
    def matrix(self):
        return self._matrix

    @property
    def form(self):
        return self._form

    @property
    def point(self):
        return self._point

    @property
    def weight(self):
        return self._weight

    def to_dict(self):
        a, b, c = self._form.to_tuple()
        return {'N': self._N, 't': self.t, 'D': self.D,
                'x': self._point.x, 'y': self._point.y,
                'weight': float(self._weight), 'a': a, 'b': b, 'c': c}

    def __repr__(self):
        return 'FixedPointRecord(N=%d, t=%d, D=%d, z=%s, weight=%s)' % (
            self._N, self.t, self.D, self._point, self._weight)


def _trace_records(N):
    '''
    Classes of trace t, found from the matrices [[a, b], [c, d]] with
    0 < c <= sqrt(|D| / 3) and |d - a| <= c, which meet every class
    '''
    def work(t):
        D = t*t - 4*N
        found = {}
        for c in range(1, math.isqrt(-D//3) + 1):
            for delta in range(-c, c + 1):
                if (delta - t) % 2:
                    continue
                a, d = (t - delta)//2, (t + delta)//2
                if (a*d - N) % c:
                    continue
                gamma = HeckeMatrix(a, (a*d - N)//c, c, d)
                form, g = gamma.associated_form().reduced()
                key = form.to_tuple()
                if key in found:
                    continue
                rep = gamma.conjugate(g)
                if rep.associated_form() != form:
                    raise AcceptanceError("Conjugation of %s does not " %
                                          gamma + "match its reduced form " +
                                          "%s" % form)
                found[key] = FixedPointRecord(N, rep, form)
        return [found[k] for k in sorted(found)]
    return work

def _form_records(N):
    '''
    Classes of trace t built from the reduced forms of t^2 - 4N
    '''
    def work(t):
        return [FixedPointRecord(N, HeckeMatrix.from_form(f, t), f)
                for f in reduced_forms(t*t - 4*N)]
    return work

def elliptic_fixed_points(N, parallel=False, method='scan'):
    '''
    The regular fixed point classes of T_N.

    Parameters
    ----------
    N: int
        at least one
    parallel: bool, optional
        distribute the traces with dask
    method: str, optional
        'scan' (default) finds the classes from the elliptic matrices and
        checks every fixed point; 'forms' builds one matrix per reduced
        form of discriminant t^2 - 4N, which is much faster for large N
        but takes the correspondence with forms for granted

    Returns
    -------
    list of :class:`FixedPointRecord`
        ordered by (t, a, b, c), with the point reduced into the
        fundamental domain and the orbifold weight
    '''
    N = check_positive_int(N, 'N')
    if method not in ('scan', 'forms'):
        raise InputError("Unknown method %s, expecting scan or forms" %
                         method)
    t_max = math.isqrt(4*N - 1)
    traces = list(range(-t_max, t_max + 1))
    work = _trace_records(N) if method == 'scan' else _form_records(N)
    out = [r for part in parallel_map(work, traces, parallel) for r in part]
    if method == 'scan':
        for rec in out:
            z = fixed_point(rec.matrix)
            if abs(z.x - rec.point.x) > 1e-9 or \
                    abs(z.y - rec.point.y) > 1e-9:
                raise AcceptanceError("Fixed point of %s is %s, not %s" %
                                      (rec.matrix, z, rec.point))
    logging.debug("T_%d: %d elliptic fixed point classes over %d traces" %
                  (N, len(out), len(traces)))
    return out

def fixed_point_table(records):
    '''
    The records as a :class:`pandas.DataFrame` with columns N, t, D, x, y,
    weight and the reduced form a, b, c
    '''
    if isinstance(records, (int, np.integer)):
        records = elliptic_fixed_points(records)
    columns = ['N', 't', 'D', 'x', 'y', 'weight', 'a', 'b', 'c']
    return pd.DataFrame([r.to_dict() for r in records], columns=columns)

def class_number_table(N, records=None):
    '''
    Per trace comparison of the fixed point classes of T_N with the
    reduced forms of discriminant t^2 - 4N.

    Returns
    -------
    :class:`pandas.DataFrame`
        columns t, D, records, forms, weighted (weighted record count),
        hurwitz (H(|D|)) and match, True when both the plain and the
        weighted counts agree exactly
    '''
    N = check_positive_int(N, 'N')
    if records is None:
        records = elliptic_fixed_points(N)
    by_trace = {}
    for r in records:
        by_trace.setdefault(r.t, []).append(r)
    rows = []
    t_max = math.isqrt(4*N - 1)
    for t in range(-t_max, t_max + 1):
        D = t*t - 4*N
        mine = by_trace.get(t, [])
        forms = reduced_forms(D)
        weighted = sum((r.weight for r in mine), Fraction(0))
        H = hurwitz_class_number(D)
        rows.append({'t': t, 'D': D, 'records': len(mine),
                     'forms': len(forms), 'weighted': float(weighted),
                     'hurwitz': float(H),
                     'match': len(mine) == len(forms) and weighted == H})
    return pd.DataFrame(rows, columns=['t', 'D', 'records', 'forms',
                                       'weighted', 'hurwitz', 'match'])

def hurwitz_relation(N, records=None):
    '''
    Both sides of the class number relation for the weighted count of the
    fixed point classes of T_N:

        sum_{t^2 < 4N} H(4N - t^2)
            = 2 sigma_1(N) - sum_{d | N} min(d, N/d) + (1/6 if N is a square)

    Returns
    -------
    (Fraction, Fraction)
    '''
    N = check_positive_int(N, 'N')
    if records is None:
        records = elliptic_fixed_points(N)
    lhs = sum((r.weight for r in records), Fraction(0))
    rhs = Fraction(2*int(sympy.divisor_sigma(N, 1)) -
                   sum(min(d, N//d) for d in sympy.divisors(N)))
    if math.isqrt(N)**2 == N:
        rhs += Fraction(1, 6)
    return lhs, rhs

def _weighted_counts(records, regions):
    if not records:
        return np.zeros(len(regions)), 0.0
    z = np.array([r.point.z for r in records])
    w = np.array([float(r.weight) for r in records])
    counts = np.array([float(np.dot(w, window.evaluate(z)))
                       for window in regions])
    return counts, float(w.sum())

def _dispersion(normalized, areas):
    vals = normalized[areas > 0]
    if len(vals) < 2:
        return 0.0
    low = vals.min()
    return float('inf') if low <= 0 else float(vals.max()/low - 1)

def cm_equidistribution_report(N_set, regions=None, parallel=False,
                               records=None, method='scan'):
    '''
    Weighted counts of the fixed point classes of T_N in regions of the
    fundamental domain against their hyperbolic area.

    Parameters
    ----------
    N_set: list of int
    regions: list of :class:`equilattice.measure.WindowFunction`, optional
        boxes on the fundamental domain, :func:`default_regions` when
        omitted
    parallel: bool, optional
    records: dict, optional
        precomputed :func:`elliptic_fixed_points` keyed by N
    method: str, optional
        passed to :func:`elliptic_fixed_points` for the other levels

    Returns
    -------
    table: :class:`pandas.DataFrame`
        one row per (N, region) with columns N, region_id, count, area,
        ratio (count / area), deg (sigma_1(N)), b_N (total weighted count
        over pi / 3) and normalized (ratio / b_N), followed by the rows of
        N = 'pooled' summing the counts over N_set
    summary: :class:`pandas.DataFrame`
        per N and pooled: total, deg, b_N, the smallest and largest
        normalized ratio and the dispersion max / min - 1 over the
        regions of positive area
    '''
    N_set = [check_positive_int(N, 'N') for N in N_set]
    if not N_set:
        raise InputError("N_set is empty")
    regions = default_regions() if regions is None else list(regions)
    names = [w.name for w in regions]
    if len(set(names)) != len(names):
        raise InputError("Region names must be unique")
    areas = np.array([region_area(w) for w in regions])

    def summarise(N, counts, total, deg):
        b_N = total/FUNDAMENTAL_DOMAIN_AREA
        ratio = np.where(areas > 0, counts/np.where(areas > 0, areas, 1),
                         0.0)
        normalized = ratio/b_N if b_N > 0 else np.zeros(len(ratio))
        rows = [{'N': N, 'region_id': name, 'count': counts[i],
                 'area': areas[i], 'ratio': ratio[i], 'deg': deg,
                 'b_N': b_N, 'normalized': normalized[i]}
                for i, name in enumerate(names)]
        pos = normalized[areas > 0]
        summary = {'N': N, 'total': total, 'deg': deg, 'b_N': b_N,
                   'min_normalized': float(pos.min()) if len(pos) else 0.0,
                   'max_normalized': float(pos.max()) if len(pos) else 0.0,
                   'dispersion': _dispersion(normalized, areas)}
        return rows, summary

    rows, summary = [], []
    pooled_counts = np.zeros(len(regions))
    pooled_total, pooled_deg = 0.0, 0
    records = dict() if records is None else records
    for N in N_set:
        mine = records[N] if N in records else \
            elliptic_fixed_points(N, parallel=parallel, method=method)
        counts, total = _weighted_counts(mine, regions)
        deg = int(sympy.divisor_sigma(N, 1))
        r, s = summarise(N, counts, total, deg)
        rows.extend(r)
        summary.append(s)
        pooled_counts += counts
        pooled_total += total
        pooled_deg += deg
        logging.debug("T_%d: weighted count %g, b(N) = %g" %
                      (N, total, s['b_N']))
    r, s = summarise('pooled', pooled_counts, pooled_total, pooled_deg)
    rows.extend(r)
    summary.append(s)
    table = pd.DataFrame(rows, columns=['N', 'region_id', 'count', 'area',
                                        'ratio', 'deg', 'b_N', 'normalized'])
    summary = pd.DataFrame(summary, columns=['N', 'total', 'deg', 'b_N',
                                             'min_normalized',
                                             'max_normalized', 'dispersion'])
    return table, summary
