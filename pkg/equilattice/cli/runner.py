"""
    Run one experiment: dispatch a validated configuration to the library,
    collect its tables into a :class:`RunReport`, evaluate the acceptance
    assertions of the kind and write the report.

"""

__all__ = ['run_experiment', 'run']

import json
import logging
import os
import time

import numpy as np
import pandas as pd
import sympy

from equilattice._errors import AcceptanceError
from equilattice.utils.parallel import set_num_workers
from equilattice.lattice import get_lattice, GramMatrix
from equilattice.counting import (MultiplicitySeries, hnf_index_count,
                                  dirichlet_index_count, alpha_constant,
                                  multiplicity_relation_table, local_density,
                                  count_solutions_mod, siegel_weil_relative,
                                  growth_exponent_check)
from equilattice.measure import convergence_report
from equilattice.forms import (build_lie_configuration, pull_push,
                               vanishing_criterion_check,
                               complex_nonvanishing_check, oriented_area_form,
                               curvature_form, chern_form,
                               proportionality_test)
from equilattice.cm import (elliptic_fixed_points, fixed_point_table,
                            class_number_table, hurwitz_relation,
                            cm_equidistribution_report)
from equilattice.cli.config import ExperimentConfig, default_output_dir
from equilattice.cli.report import RunReport

# largest number of residue tuples in a scan cross check
SCAN_CROSS_CHECK = 10**6


def _pair_table(last, windows, pairs):
    '''
    Relative difference of the masses of paired windows at one bound:
    n^(-d/2) mu_n on the unit surface, nu'_n on the Grassmannian
    '''
    targets = dict((w.name, w.target) for w in windows)
    rows = last.set_index('window_id')
    out = []
    for a, b in pairs:
        column = 'mu_scaled' if targets[a] == 'unit_discriminant' \
            else 'nu_prime'
        ma, mb = float(rows.loc[a, column]), float(rows.loc[b, column])
        if mb > 0:
            rel = abs(ma/mb - 1)
        else:
            rel = 0.0 if ma == 0 else np.inf
        out.append((a, b, column, ma, mb, rel))
    return pd.DataFrame(out, columns=['window_a', 'window_b', 'measure',
                                      'mass_a', 'mass_b', 'relative'])

def _run_sublattices(config, report, parallel):
    p = config.params
    tol = config.tolerances
    L = get_lattice(p['lattice'])
    grass = [w for w in p['windows'] if w.target == 'grassmannian']
    relation = multiplicity_relation_table(L, p['r'], p['n_max'],
                                           grass or None)
    report.add_table('relation', relation, lattice=L.name, r=p['r'])
    report.check('multiplicity_relation', relation['equal'].all(),
                 rows=len(relation),
                 mismatches=int((~relation['equal']).sum()))
    report.add_result('lattice', {'name': L.name, 'rank': L.rank,
                                  'det': L.det})
    if p['n_grid'] is None:
        return

    conv = convergence_report(L, p['r'], p['windows'], p['n_grid'],
                              oracle_samples=p['oracle_samples'],
                              seed=config.seed, parallel=parallel)
    report.add_table('convergence', conv, lattice=L.name, r=p['r'],
                     oracle_samples=p['oracle_samples'])
    last = conv[conv['n'] == max(p['n_grid'])]
    dev = last['deviation'].dropna().abs()
    if len(dev):
        report.check('oracle_agreement', dev.max() <= tol['oracle_relative'],
                     n=max(p['n_grid']), worst=float(dev.max()),
                     tolerance=tol['oracle_relative'])

    if p['pairs']:
        pairs = _pair_table(last, p['windows'], p['pairs'])
        report.add_table('pairs', pairs, lattice=L.name, r=p['r'],
                         n=max(p['n_grid']))
        worst = float(pairs['relative'].max())
        report.check('symmetric_pairs', worst <= tol['pair_relative'],
                     n=max(p['n_grid']), worst=worst,
                     tolerance=tol['pair_relative'])

    if p['check_alpha']:
        alpha = alpha_constant(p['r'], L.rank, p['alpha_K'])
        total = last[last['window_id'] == 'total'].iloc[0]
        ratio = float(total['ratio'])
        report.add_result('alpha', alpha.to_dict())
        report.check('alpha_ratio',
                     abs(ratio*alpha.value - 1) <= tol['alpha_relative'],
                     ratio=ratio, inverse_alpha=1/alpha.value,
                     tolerance=tol['alpha_relative'])

def _run_multiplicity(config, report, parallel):
    p = config.params
    K = p['K']
    rows = []
    for r in p['r']:
        series = MultiplicitySeries(r, K)
        for k, b in enumerate(series.coefficients, 1):
            h = hnf_index_count(r, k)
            z = dirichlet_index_count(r, k)
            rows.append((r, k, b, h, z, b == h == z))
        report.check('multiplicative_r%d' % r, series.is_multiplicative())
        report.check('bounds_r%d' % r, series.satisfies_bound())
    table = pd.DataFrame(rows, columns=['r', 'k', 'b_k', 'hnf', 'dirichlet',
                                        'equal'])
    report.add_table('b_k', table, K=K)
    report.check('zeta_identity', table['equal'].all(),
                 mismatches=int((~table['equal']).sum()))
    if p['d']:
        alpha = pd.DataFrame([alpha_constant(r, d, K).to_dict()
                              for r in p['r'] for d in p['d']])
        report.add_table('alpha', alpha, K=K)

def _run_density(config, report, parallel):
    p = config.params
    tol = config.tolerances
    L = get_lattice(p['lattice'])
    d = L.rank
    primes = p['primes'] or [int(a) for a in
                             sympy.primerange(2, p['prime_cutoff'] + 1)]
    frames, checks, volumes = [], [], []
    good_ok, unresolved = True, []
    for i, M in enumerate(p['M']):
        G = GramMatrix(M)
        r = G.size
        bad = set(sympy.primefactors(2*G.det*abs(L.det)))
        for a in primes:
            res = local_density(L, r, M, a, s_max=p['s_max'])
            df = res.to_frame()
            df.insert(0, 'M_index', i)
            df.insert(1, 'M', json.dumps(M))
            df['good'] = a not in bad
            frames.append(df)
            if not res.stabilized:
                unresolved.append((i, a))
            if a not in bad and res.level != 1:
                good_ok = False
            for s in range(1, p['cross_check_level'] + 1):
                if a**(s*d*r) > SCAN_CROSS_CHECK:
                    break
                hensel = count_solutions_mod(L, r, M, a, s, 'hensel')
                scan = count_solutions_mod(L, r, M, a, s, 'scan')
                checks.append((i, a, s, hensel, scan, hensel == scan))
        if p['relative_volume'] and r < d and G.is_positive_definite():
            vol = siegel_weil_relative(L, M, p['prime_cutoff'], p['s_max'])
            volumes.append((i, json.dumps(M), vol.det, str(vol.product),
                            vol.value, vol.log_value))
    report.add_table('densities', pd.concat(frames, ignore_index=True),
                     lattice=L.name, primes=primes)
    report.check('good_prime_stabilization', good_ok)
    report.check('densities_resolved', not unresolved,
                 unresolved=unresolved)
    if checks:
        cc = pd.DataFrame(checks, columns=['M_index', 'prime', 's',
                                           'hensel', 'scan', 'equal'])
        report.add_table('cross_check', cc, lattice=L.name)
        report.check('hensel_matches_scan', cc['equal'].all(),
                     instances=len(cc))
    if volumes:
        report.add_table('relative_volume',
                         pd.DataFrame(volumes, columns=[
                             'M_index', 'M', 'det', 'product', 'value',
                             'log_value']),
                         lattice=L.name, prime_cutoff=p['prime_cutoff'])

    g = p['growth']
    if g is None:
        return
    first, last = g['n_range']
    ns = [n for n in range(first, last + 1)
          if not g['squarefree'] or
          all(e == 1 for e in sympy.factorint(n).values())]
    M0 = np.array(g['M0'], dtype=np.int64)
    companion = None if g['companion'] is None else \
        get_lattice(g['companion'])
    growth = growth_exponent_check(L, [(n*M0).tolist() for n in ns],
                                   p['prime_cutoff'], p['s_max'],
                                   companion=companion)
    table = growth['table']
    table.insert(0, 'n', ns)
    report.add_table('growth', table, lattice=L.name, M0=g['M0'])
    summary = {k: v for k, v in growth.items() if k != 'table'}
    report.add_result('growth', summary)
    report.check('growth_slope',
                 abs(growth['slope'] - growth['expected']) <= tol['slope'],
                 tolerance=tol['slope'], **summary)

def _form_frame(form):
    return pd.DataFrame({'subset': [','.join(str(i) for i in S)
                                    for S in form.subsets],
                         'coefficient': np.real(form.coefficients)})

def _run_pullpush(config, report, parallel):
    p = config.params
    tol = config.tolerances
    lie = build_lie_configuration(p['preset'])
    form = pull_push(lie, nodes=p['nodes'], scale=p['scale'],
                     parallel=parallel)
    meta = dict(form.metadata)
    report.add_table('pullpush', _form_frame(form), preset=lie.name,
                     degree=form.degree, **meta)
    report.add_result('pullpush', {'degree': form.degree,
                                   'norm': form.norm(), 'metadata': meta})
    invariance = meta.get('invariance_residual')
    invariant = invariance is None or invariance <= tol['quadrature']

    rows = []
    for check in p['checks']:
        if check == 'vanishing':
            witness = vanishing_criterion_check(lie)
            passed = form.norm() < tol['vanishing'] and witness is not None
            detail = {'norm': form.norm(),
                      'witness': None if witness is None else
                      {'parameters': witness['parameters'],
                       'determinant': witness['determinant']}}
            rows.append((check, form.norm(), np.nan, np.nan, passed))
        elif check == 'complex_nonvanishing':
            try:
                value = complex_nonvanishing_check(lie, nodes=p['nodes'])
                value = value['value']
                passed = True
            except AcceptanceError as e:
                logging.warning(str(e))
                value, passed = np.nan, False
            detail = {'value': value}
            rows.append((check, value, np.nan, np.nan, passed))
        else:
            if check == 'area_proportionality':
                s, res = proportionality_test(form, oriented_area_form(lie),
                                              subspace=lie.h_mod_l)
            else:
                reference = chern_form(curvature_form(lie, p['chern_block']),
                                       p['chern_level'])
                s, res = proportionality_test(form, reference)
            passed = isinstance(s, float) and s > 0 and \
                res < tol['quadrature'] and invariant
            detail = {'scalar': s, 'residual': res,
                      'invariance_residual': invariance}
            rows.append((check, np.nan, s if isinstance(s, float)
                         else np.nan, res, passed))
        report.check(check, passed, **detail)
    if rows:
        report.add_table('checks', pd.DataFrame(
            rows, columns=['check', 'value', 'scalar', 'residual',
                           'passed']), preset=lie.name)

    if p['monte_carlo']:
        mc = pull_push(lie, scale=p['scale'], monte_carlo=True,
                       samples=p['samples'], seed=config.seed,
                       parallel=parallel)
        report.add_table('pullpush_monte_carlo', _form_frame(mc),
                         preset=lie.name, **dict(mc.metadata))
        diff = float(np.abs(mc.coefficients - form.coefficients)
                     .max(initial=0.0))
        err = mc.metadata['error_estimate']
        report.check('monte_carlo_agreement',
                     diff <= tol['mc_sigma']*err + tol['quadrature'],
                     difference=diff, standard_error=err,
                     sigma=tol['mc_sigma'])

def _run_cm(config, report, parallel):
    p = config.params
    N_set = p['N_set']
    records = None
    if p['fixed_point_table'] or p['check_class_numbers']:
        records = {N: elliptic_fixed_points(N, parallel, p['method'])
                   for N in N_set}
    if p['fixed_point_table']:
        report.add_table('fixed_points', pd.concat(
            [fixed_point_table(records[N]) for N in N_set],
            ignore_index=True), method=p['method'])
    if p['check_class_numbers']:
        frames, rows = [], []
        for N in N_set:
            df = class_number_table(N, records[N])
            df.insert(0, 'N', N)
            frames.append(df)
            lhs, rhs = hurwitz_relation(N, records[N])
            rows.append((N, str(lhs), str(rhs), lhs == rhs))
        classes = pd.concat(frames, ignore_index=True)
        report.add_table('class_numbers', classes)
        report.check('class_number_oracle', classes['match'].all(),
                     mismatches=int((~classes['match']).sum()))
        relation = pd.DataFrame(rows, columns=['N', 'weighted_count',
                                               'relation', 'equal'])
        report.add_table('hurwitz_relation', relation)
        report.check('hurwitz_relation', relation['equal'].all())

    table, summary = cm_equidistribution_report(N_set, p['regions'],
                                                parallel, records,
                                                p['method'])
    report.add_table('regions', table)
    report.add_table('summary', summary)
    pooled = summary[summary['N'] == 'pooled'].iloc[0]
    report.add_result('pooled', pooled.to_dict())
    if p['max_dispersion'] is not None:
        report.check('equidistribution',
                     pooled['dispersion'] <= p['max_dispersion'],
                     dispersion=pooled['dispersion'],
                     tolerance=p['max_dispersion'])

_RUNNERS = {'sublattices': _run_sublattices,
            'multiplicity': _run_multiplicity,
            'density': _run_density,
            'pullpush': _run_pullpush,
            'cm': _run_cm}

def run_experiment(config, parallel=False):
    '''
    Compute the tables and assertions of an experiment without writing
    anything.

    Parameters
    ----------
    config: :class:`equilattice.cli.ExperimentConfig`, dict or str
    parallel: bool, optional
        let the library distribute work with dask

    Returns
    -------
    :class:`equilattice.cli.RunReport`
    '''
    config = ExperimentConfig.from_json(config)
    report = RunReport(config)
    start = time.perf_counter()
    _RUNNERS[config.kind](config, report, parallel)
    report.wall_clock = time.perf_counter() - start
    logging.info("Experiment %s (%s) took %.3f s" %
                 (config.name, config.kind, report.wall_clock))
    return report

def run(source, out=None, threads=None, seed=None):
    '''
    Run an experiment and write its report.

    Parameters
    ----------
    source: str or dict
        configuration, see :class:`equilattice.cli.ExperimentConfig`
    out: str, optional
        output directory; defaults to the `output_dir` of the configuration,
        then to :func:`equilattice.cli.default_output_dir`
    threads: int, optional
        dask workers, defaults to the number of cores; one worker runs
        everything serially
    seed: int, optional
        replaces the seed of the configuration

    Returns
    -------
    :class:`equilattice.cli.RunReport`

    Raises
    ------
    :class:`equilattice.AcceptanceError`
        after writing the report, when an assertion failed
    '''
    config = ExperimentConfig.from_json(source)
    if seed is not None:
        config = config.with_seed(int(seed))
    threads = (os.cpu_count() or 1) if threads is None else int(threads)
    set_num_workers(threads)
    report = run_experiment(config, parallel=threads > 1)
    out = out or config.output_dir or default_output_dir()
    report.write(out)
    if not report.passed:
        raise AcceptanceError("Failed assertions: %s" %
                              ', '.join(report.failures))
    return report
