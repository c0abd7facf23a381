"""
    Run reports of the command line runner and their files: report.json,
    one CSV per table and a <table>.meta.json sidecar with the seed, the
    parameters and the package versions.

    Nothing machine or time dependent is written unless the configuration
    asks for the wall-clock time, so identical runs give identical files.

"""

__all__ = ['RunReport', 'package_versions', 'json_safe']

import json
import logging
import math
import os
import platform
from collections import OrderedDict
from fractions import Fraction

import numpy as np
import pandas as pd

from equilattice._errors import InputError, OutputError

FLOAT_FORMAT = '%.12g'


def package_versions():
    '''
    Versions of the package and of its numerical stack
    '''
    import scipy
    import sympy
    from pkg_resources import get_distribution, DistributionNotFound
    try:
        own = get_distribution('equilattice').version
    except DistributionNotFound:
        own = 'unknown'
    return {'equilattice': own,
            'numpy': np.__version__,
            'scipy': scipy.__version__,
            'sympy': sympy.__version__,
            'pandas': pd.__version__,
            'python': platform.python_version()}

def json_safe(obj):
    '''
    Convert nested values to plain JSON types; fractions become strings
    and non-finite floats become None
    '''
    if isinstance(obj, dict):
        return {str(k): json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [json_safe(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return json_safe(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj) if math.isfinite(obj) else None
    if isinstance(obj, complex):
        return [json_safe(obj.real), json_safe(obj.imag)]
    if isinstance(obj, Fraction):
        return str(obj)
    if obj is None or isinstance(obj, str):
        return obj
    if hasattr(obj, 'to_dict'):
        return json_safe(obj.to_dict())
    return str(obj)

def _dump(obj, path):
    with open(path, 'w') as fp:
        json.dump(json_safe(obj), fp, indent=2, sort_keys=True)
        fp.write('\n')


class RunReport(object):
    '''
    Tables, scalar results and acceptance assertions of one experiment.

    Parameters
    ----------
    config: :class:`equilattice.cli.ExperimentConfig`
    '''
    def __init__(self, config):
        self._config = config
        self._tables = OrderedDict()
        self._results = OrderedDict()
        self._assertions = []
        self._wall_clock = None

    @property
    def config(self):
        return self._config

    @property
    def tables(self):
        return OrderedDict((k, v[0]) for k, v in self._tables.items())

    @property
    def results(self):
        return dict(self._results)

    @property
    def assertions(self):
        return list(self._assertions)

    @property
    def failures(self):
        return [a['name'] for a in self._assertions if not a['passed']]

    @property
    def passed(self):
        return not self.failures

    @property
    def wall_clock(self):
        return self._wall_clock

    @wall_clock.setter
    def wall_clock(self, seconds):
        self._wall_clock = float(seconds)

    def add_table(self, name, df, **meta):
        '''
        Register a :class:`pandas.DataFrame` written as <name>.csv, with
        extra entries for its sidecar
        '''
        if not isinstance(df, pd.DataFrame):
            raise InputError("Table %s is not a DataFrame" % name)
        if name in self._tables:
            raise InputError("Table %s already exists" % name)
        self._tables[name] = (df.reset_index(drop=True), meta)

    def add_result(self, key, value):
        self._results[key] = value

    def check(self, name, passed, **detail):
        '''
        Record an acceptance assertion
        '''
        passed = bool(passed)
        self._assertions.append({'name': name, 'passed': passed,
                                 'detail': detail})
        if passed:
            logging.debug("Assertion %s passed" % name)
        else:
            logging.warning("Assertion %s failed: %s" % (name, detail))
        return passed

    def to_dict(self):
        c = self._config
        out = {'kind': c.kind,
               'name': c.name,
               'seed': c.seed,
               'config': c.to_dict(),
               'tolerances': c.tolerances,
               'tables': [{'name': k, 'file': '%s.csv' % k,
                           'rows': len(df), 'columns': list(df.columns)}
                          for k, (df, _m) in self._tables.items()],
               'results': self._results,
               'assertions': self._assertions,
               'passed': self.passed,
               'versions': package_versions()}
        if c.record_timing and self._wall_clock is not None:
            out['wall_clock'] = self._wall_clock
        return out

    def write(self, out_dir):
        '''
        Write report.json and the tables into `out_dir`, created when
        missing.

        Returns
        -------
        list of str
            the paths written
        '''
        try:
            os.makedirs(out_dir, exist_ok=True)
        except OSError as e:
            raise OutputError("Cannot create %s: %s" % (out_dir, e))
        if not os.access(out_dir, os.W_OK):
            raise OutputError("Output directory %s is not writable" %
                              out_dir)
        versions = package_versions()
        paths = []
        try:
            for name, (df, meta) in self._tables.items():
                path = os.path.join(out_dir, '%s.csv' % name)
                df.to_csv(path, index=False, float_format=FLOAT_FORMAT)
                side = dict(meta)
                side.update({'table': name,
                             'kind': self._config.kind,
                             'seed': self._config.seed,
                             'parameters': self._config.to_dict(),
                             'columns': list(df.columns),
                             'rows': len(df),
                             'versions': versions})
                meta_path = os.path.join(out_dir, '%s.meta.json' % name)
                _dump(side, meta_path)
                paths.extend([path, meta_path])
            path = os.path.join(out_dir, 'report.json')
            _dump(self.to_dict(), path)
            paths.append(path)
        except (IOError, OSError) as e:
            raise OutputError("Writing into %s failed: %s" % (out_dir, e))
        logging.debug("Wrote %d files into %s" % (len(paths), out_dir))
        return paths

    def __repr__(self):
        return 'RunReport(%s, %d tables, %d/%d assertions passed)' % (
            self._config.name, len(self._tables),
            len(self._assertions) - len(self.failures),
            len(self._assertions))
