"""
    Experiment configurations of the command line runner.

    A configuration is a JSON document with a `kind` and the parameters of
    that kind.  Validation happens once, when the configuration is built,
    and every failure names the offending field.

"""

__all__ = ['ExperimentConfig',
           'EXPERIMENT_KINDS',
           'DEFAULT_TOLERANCES',
           'default_output_dir']

import copy
import json
import numbers
import os

from equilattice._errors import ConfigurationError, InputError, LatticeError
from equilattice.lattice import get_lattice
from equilattice.measure import WindowFunction
from equilattice.forms import build_lie_configuration

EXPERIMENT_KINDS = ('sublattices', 'multiplicity', 'density', 'pullpush',
                    'cm')

DEFAULT_TOLERANCES = {'structural': 1e-10,
                      'quadrature': 1e-6,
                      'vanishing': 1e-8,
                      'mc_sigma': 3.0,
                      'oracle_relative': 0.05,
                      'alpha_relative': 0.03,
                      'pair_relative': 0.02,
                      'slope': 0.1}

_COMMON = ('kind', 'name', 'seed', 'tolerances', 'record_timing',
           'output_dir')

_FIELDS = {
    'sublattices': ('lattice', 'r', 'n_max', 'windows', 'n_grid',
                    'oracle_samples', 'check_alpha', 'alpha_K', 'pairs'),
    'multiplicity': ('r', 'K', 'd'),
    'density': ('lattice', 'M', 'primes', 'prime_cutoff', 's_max',
                'cross_check_level', 'relative_volume', 'growth'),
    'pullpush': ('preset', 'nodes', 'scale', 'checks', 'chern_block',
                 'chern_level', 'monte_carlo', 'samples'),
    'cm': ('N_set', 'regions', 'method', 'fixed_point_table',
           'check_class_numbers', 'max_dispersion'),
}

_REQUIRED = {'sublattices': ('lattice', 'r', 'n_max'),
             'multiplicity': ('r', 'K'),
             'density': ('lattice', 'M'),
             'pullpush': ('preset',),
             'cm': ('N_set',)}

PULLPUSH_CHECKS = ('vanishing', 'complex_nonvanishing',
                   'area_proportionality', 'chern_proportionality')


def default_output_dir():
    '''
    The value of EQUILATTICE_OUTPUT_DIR, else ./equilattice-output
    '''
    return os.environ.get('EQUILATTICE_OUTPUT_DIR', 'equilattice-output')

def _is_int(x):
    return isinstance(x, numbers.Integral) and not isinstance(x, bool)

def _int_field(spec, key, low=1, default=None):
    value = spec.get(key, default)
    if not _is_int(value) or value < low:
        raise ConfigurationError("%s: expecting an integer >= %d, got %r" %
                                 (key, low, value))
    return int(value)

def _int_list(spec, key, low=1):
    value = spec.get(key)
    if _is_int(value):
        value = [value]
    if isinstance(value, dict) and set(value) == {'range'}:
        bounds = value['range']
        if not isinstance(bounds, list) or len(bounds) != 2 or \
                not all(_is_int(b) for b in bounds) or bounds[0] > bounds[1]:
            raise ConfigurationError("%s: range needs [first, last]" % key)
        value = list(range(bounds[0], bounds[1] + 1))
    if not isinstance(value, list) or not value or \
            not all(_is_int(v) and v >= low for v in value):
        raise ConfigurationError("%s: expecting a non-empty list of " % key +
                                 "integers >= %d" % low)
    return [int(v) for v in value]

def _bool_field(spec, key, default):
    value = spec.get(key, default)
    if not isinstance(value, bool):
        raise ConfigurationError("%s: expecting true or false" % key)
    return value

def _float_field(spec, key, default, positive=True):
    value = spec.get(key, default)
    if isinstance(value, bool) or not isinstance(value, numbers.Real) or \
            (positive and not value > 0):
        raise ConfigurationError("%s: expecting a positive number, got %r" %
                                 (key, value))
    return float(value)

def _matrix_field(M, key):
    if _is_int(M):
        M = [[M]]
    if not isinstance(M, list) or not M or \
            not all(isinstance(row, list) and len(row) == len(M)
                    for row in M) or \
            not all(_is_int(v) for row in M for v in row):
        raise ConfigurationError("%s: expecting a square integer matrix" %
                                 key)
    return [[int(v) for v in row] for row in M]

def _lattice_field(spec, key='lattice'):
    try:
        get_lattice(spec[key])
    except (InputError, LatticeError) as e:
        raise ConfigurationError("%s: %s" % (key, e))
    return spec[key]

def _windows_field(spec, key, target=None):
    value = spec.get(key, [])
    if not isinstance(value, list):
        raise ConfigurationError("%s: expecting a list of windows" % key)
    windows = []
    for i, w in enumerate(value):
        try:
            window = WindowFunction.from_dict(w)
        except (InputError, TypeError, ValueError) as e:
            raise ConfigurationError("%s[%d]: %s" % (key, i, e))
        if target is not None and window.target not in target:
            raise ConfigurationError("%s[%d]: target %s is not allowed here" %
                                     (key, i, window.target))
        windows.append(window)
    names = [w.name for w in windows]
    if len(set(names)) != len(names) or 'total' in names:
        raise ConfigurationError("%s: window names must be unique and " %
                                 key + "not 'total'")
    return windows

def _pairs_field(spec, windows, key='pairs'):
    '''
    Pairs of window names whose masses must agree, e.g. mirror caps
    '''
    value = spec.get(key, [])
    targets = dict((w.name, w.target) for w in windows)
    if not isinstance(value, list):
        raise ConfigurationError("%s: expecting a list of name pairs" % key)
    pairs = []
    for i, pair in enumerate(value):
        if not isinstance(pair, list) or len(pair) != 2 or \
                not all(isinstance(s, str) for s in pair):
            raise ConfigurationError("%s[%d]: expecting two window names" %
                                     (key, i))
        a, b = pair
        for name in pair:
            if name not in targets:
                raise ConfigurationError("%s[%d]: no window named %r" %
                                         (key, i, name))
        if a == b or targets[a] != targets[b]:
            raise ConfigurationError("%s[%d]: expecting two distinct " %
                                     (key, i) + "windows on one target")
        pairs.append((a, b))
    return pairs


class ExperimentConfig(object):
    '''
    A validated experiment description.

    Parameters
    ----------
    spec: dict
        the JSON document, with the keys `kind` (one of
        :data:`EXPERIMENT_KINDS`), the parameters of the kind and optionally
        `name`, `seed`, `tolerances`, `record_timing` and `output_dir`

    Raises
    ------
    :class:`equilattice.ConfigurationError`
        naming the first invalid field
    '''
    def __init__(self, spec):
        if not isinstance(spec, dict):
            raise ConfigurationError("config: expecting a JSON object")
        kind = spec.get('kind')
        if kind not in EXPERIMENT_KINDS:
            raise ConfigurationError("kind: expecting one of %s, got %r" %
                                     (', '.join(EXPERIMENT_KINDS), kind))
        unknown = set(spec) - set(_COMMON) - set(_FIELDS[kind])
        if unknown:
            raise ConfigurationError("%s: not a field of %s experiments" %
                                     (sorted(unknown)[0], kind))
        for key in _REQUIRED[kind]:
            if key not in spec:
                raise ConfigurationError("%s: required for %s experiments" %
                                         (key, kind))
        self._spec = copy.deepcopy(spec)
        self._kind = kind
        self._params = dict()
        getattr(self, '_validate_%s' % kind)(spec)

        seed = spec.get('seed')
        if seed is not None and not _is_int(seed):
            raise ConfigurationError("seed: expecting an integer")
        if self.is_stochastic and seed is None:
            raise ConfigurationError("seed: required for stochastic " +
                                     "experiments")
        self._seed = seed

        tol = spec.get('tolerances', {})
        if not isinstance(tol, dict):
            raise ConfigurationError("tolerances: expecting an object")
        self._tolerances = dict(DEFAULT_TOLERANCES)
        for key, value in tol.items():
            if key not in DEFAULT_TOLERANCES:
                raise ConfigurationError("tolerances.%s: unknown tolerance" %
                                         key)
            self._tolerances[key] = _float_field(tol, key, None)
        self._record_timing = _bool_field(spec, 'record_timing', False)
        out = spec.get('output_dir')
        if out is not None and not isinstance(out, str):
            raise ConfigurationError("output_dir: expecting a path")
        name = spec.get('name', kind)
        if not isinstance(name, str) or not name:
            raise ConfigurationError("name: expecting a non-empty string")
        self._name = name

    @classmethod
    def from_json(cls, source):
        '''
        Build from a dict, a JSON string or the path of a JSON file
        '''
        if isinstance(source, ExperimentConfig):
            return source
        if isinstance(source, dict):
            return cls(source)
        if not isinstance(source, str):
            raise ConfigurationError("config: expecting a dict, JSON " +
                                     "string or path")
        try:
            if source.lstrip().startswith('{'):
                spec = json.loads(source)
            else:
                with open(source, 'r') as fp:
                    spec = json.load(fp)
        except (IOError, OSError) as e:
            raise ConfigurationError("config: cannot read %s (%s)" %
                                     (source, e))
        except ValueError as e:
            raise ConfigurationError("config: invalid JSON (%s)" % e)
        return cls(spec)

    def _validate_sublattices(self, spec):
        p = self._params
        p['lattice'] = _lattice_field(spec)
        p['r'] = _int_field(spec, 'r')
        p['n_max'] = _int_field(spec, 'n_max')
        p['windows'] = _windows_field(spec, 'windows',
                                      ('unit_discriminant', 'grassmannian'))
        p['n_grid'] = _int_list(spec, 'n_grid') if 'n_grid' in spec \
            else None
        p['oracle_samples'] = _int_field(spec, 'oracle_samples',
                                         default=20000)
        p['check_alpha'] = _bool_field(spec, 'check_alpha', False)
        p['alpha_K'] = _int_field(spec, 'alpha_K', default=1000)
        if p['check_alpha'] and p['n_grid'] is None:
            raise ConfigurationError("check_alpha: needs n_grid")
        if any(w.target == 'unit_discriminant' for w in p['windows']) and \
                p['n_grid'] is None:
            raise ConfigurationError("windows: windows on the unit " +
                                     "discriminant surface need n_grid")
        p['pairs'] = _pairs_field(spec, p['windows'])
        if p['pairs'] and p['n_grid'] is None:
            raise ConfigurationError("pairs: needs n_grid")

    def _validate_multiplicity(self, spec):
        p = self._params
        p['r'] = _int_list(spec, 'r')
        p['K'] = _int_field(spec, 'K')
        p['d'] = _int_list(spec, 'd') if 'd' in spec else []
        for d in p['d']:
            for r in p['r']:
                if d <= r + 1:
                    raise ConfigurationError("d: alpha needs d >= r + 2, " +
                                             "got r=%d d=%d" % (r, d))

    def _validate_density(self, spec):
        p = self._params
        p['lattice'] = _lattice_field(spec)
        M = spec['M']
        if _is_int(M):
            M = [M]
        if isinstance(M, list) and M and all(_is_int(v) for v in M):
            # a list of 1 x 1 Gram matrices
            M = [[[v]] for v in M]
        elif isinstance(M, list) and M and isinstance(M[0], list) and \
                M[0] and _is_int(M[0][0]):
            M = [M]
        if not isinstance(M, list) or not M:
            raise ConfigurationError("M: expecting a Gram matrix or a list " +
                                     "of Gram matrices")
        p['M'] = [_matrix_field(m, 'M[%d]' % i) for i, m in enumerate(M)]
        p['primes'] = _int_list(spec, 'primes', low=2) if 'primes' in spec \
            else None
        p['prime_cutoff'] = _int_field(spec, 'prime_cutoff', low=2,
                                       default=7)
        p['s_max'] = _int_field(spec, 's_max', low=2, default=6)
        p['cross_check_level'] = _int_field(spec, 'cross_check_level', low=0,
                                            default=2)
        p['relative_volume'] = _bool_field(spec, 'relative_volume', True)
        growth = spec.get('growth')
        if growth is not None:
            if not isinstance(growth, dict) or 'M0' not in growth:
                raise ConfigurationError("growth: expecting an object with " +
                                         "M0")
            extra = set(growth) - {'M0', 'n_range', 'squarefree',
                                   'companion'}
            if extra:
                raise ConfigurationError("growth.%s: unknown field" %
                                         sorted(extra)[0])
            n_range = growth.get('n_range', [1, 20])
            if not isinstance(n_range, list) or len(n_range) != 2 or \
                    not all(_is_int(v) and v >= 1 for v in n_range) or \
                    n_range[0] >= n_range[1]:
                raise ConfigurationError("growth.n_range: expecting " +
                                         "[first, last] with 1 <= first " +
                                         "< last")
            companion = growth.get('companion')
            if companion is not None:
                _lattice_field(growth, 'companion')
            growth = {'M0': _matrix_field(growth['M0'], 'growth.M0'),
                      'n_range': [int(v) for v in n_range],
                      'squarefree': _bool_field(growth, 'squarefree', True),
                      'companion': companion}
        p['growth'] = growth

    def _validate_pullpush(self, spec):
        p = self._params
        try:
            build_lie_configuration(spec['preset'])
        except ConfigurationError as e:
            raise ConfigurationError("preset: %s" % e)
        p['preset'] = spec['preset']
        p['nodes'] = _int_field(spec, 'nodes', low=4, default=64)
        if p['nodes'] % 2:
            raise ConfigurationError("nodes: expecting an even number")
        p['scale'] = _float_field(spec, 'scale', 1.0)
        checks = spec.get('checks', [])
        if not isinstance(checks, list) or \
                any(c not in PULLPUSH_CHECKS for c in checks):
            raise ConfigurationError("checks: expecting a list drawn from " +
                                     "%s" % ', '.join(PULLPUSH_CHECKS))
        p['checks'] = list(checks)
        block = spec.get('chern_block')
        if 'chern_proportionality' in checks and not isinstance(block, str):
            raise ConfigurationError("chern_block: required by " +
                                     "chern_proportionality")
        p['chern_block'] = block
        p['chern_level'] = _int_field(spec, 'chern_level', default=1)
        p['monte_carlo'] = _bool_field(spec, 'monte_carlo', False)
        p['samples'] = _int_field(spec, 'samples', default=4096)

    def _validate_cm(self, spec):
        p = self._params
        p['N_set'] = _int_list(spec, 'N_set')
        regions = spec.get('regions', 'default')
        if regions == 'default':
            p['regions'] = None
        else:
            p['regions'] = _windows_field(spec, 'regions',
                                          ('fundamental_domain',))
            if not p['regions']:
                raise ConfigurationError("regions: expecting 'default' or " +
                                         "a non-empty list")
        p['method'] = spec.get('method', 'scan')
        if p['method'] not in ('scan', 'forms'):
            raise ConfigurationError("method: expecting scan or forms")
        p['fixed_point_table'] = _bool_field(spec, 'fixed_point_table', True)
        p['check_class_numbers'] = _bool_field(spec, 'check_class_numbers',
                                               True)
        p['max_dispersion'] = _float_field(spec, 'max_dispersion', None) \
            if 'max_dispersion' in spec else None

    @property
    def kind(self):
        return self._kind

    @property
    def name(self):
        return self._name

    @property
    def params(self):
        return dict(self._params)

    @property
    def seed(self):
        return self._seed

    @property
    def tolerances(self):
        return dict(self._tolerances)

    @property
    def record_timing(self):
        return self._record_timing

    @property
    def output_dir(self):
        return self._spec.get('output_dir')

    @property
    def is_stochastic(self):
        '''
        True when the results depend on random draws: oracle comparisons
        of sublattice experiments and Monte Carlo pull-push integration
        '''
        if self._kind == 'sublattices':
            return self._params['n_grid'] is not None
        if self._kind == 'pullpush':
            return self._params['monte_carlo']
        return False

    def with_seed(self, seed):
        '''
        A copy with the seed replaced
        '''
        spec = self.to_dict()
        spec['seed'] = seed
        return ExperimentConfig(spec)

    def to_dict(self):
        return copy.deepcopy(self._spec)

    def __repr__(self):
        return 'ExperimentConfig(kind=%s, name=%s)' % (self._kind,
                                                       self._name)
