"""
    The `equilattice` console command.

    equilattice run <config.json> [--out DIR] [--threads N] [--seed S]
    equilattice presets

    Exit codes: 0 on success, 1 for invalid configurations and inputs, 2
    when an acceptance assertion failed.

"""

__all__ = ['main', 'list_presets', 'format_presets']

import argparse
import logging
import sys

from equilattice._errors import (AcceptanceError, ConfigurationError,
                                 DensityError, InputError, LatticeError,
                                 OutputError, QuadratureError)
from equilattice.lattice import list_lattice_presets
from equilattice.forms import list_lie_presets
from equilattice.cli.config import default_output_dir
from equilattice.cli.runner import run


def list_presets():
    '''
    Every named preset a configuration may refer to.

    Returns
    -------
    list
        (kind, name, description) with kind 'lattice' or 'lie'
    '''
    out = [('lattice', name, desc) for name, desc in list_lattice_presets()]
    out += [('lie', name, desc) for name, desc in list_lie_presets()]
    return out

def format_presets():
    '''
    The lattice and Lie presets with their descriptions, one per line
    '''
    presets = list_presets()
    lines = ['Lattices:']
    lines += ['  %-16s %s' % (name, desc)
              for kind, name, desc in presets if kind == 'lattice']
    lines += ['Lie configurations:']
    lines += ['  %-16s %s' % (name, desc)
              for kind, name, desc in presets if kind == 'lie']
    return '\n'.join(lines)

def _parser():
    argp = argparse.ArgumentParser(
        prog='equilattice',
        description='Lattice counting, local density, invariant form and ' +
        'CM point experiments')
    argp.add_argument('-v', '--verbose', action='store_true',
                      help='debug logging')
    sub = argp.add_subparsers(dest='command')
    sub.required = True
    runp = sub.add_parser('run', help='run an experiment configuration')
    runp.add_argument('config', help='path of a JSON configuration')
    runp.add_argument('--out', metavar='DIR', default=None,
                      help='output directory (default: ' +
                      '$EQUILATTICE_OUTPUT_DIR or %s)' %
                      default_output_dir())
    runp.add_argument('--threads', metavar='N', type=int, default=None,
                      help='dask workers (default: number of cores)')
    runp.add_argument('--seed', metavar='S', type=int, default=None,
                      help='replaces the seed of the configuration')
    runp.add_argument('-v', '--verbose', action='store_true',
                      dest='run_verbose', help='debug logging')
    sub.add_parser('presets', help='list lattice and Lie presets')
    return argp

def main(argv=None):
    '''
    Entry point of the console command, returns the exit code
    '''
    args = _parser().parse_args(argv)
    verbose = args.verbose or getattr(args, 'run_verbose', False)
    logging.basicConfig(level=logging.DEBUG if verbose else logging.WARNING,
                        format='%(levelname)s: %(message)s')
    if args.command == 'presets':
        print(format_presets())
        return 0

    if args.threads is not None and args.threads < 1:
        sys.stderr.write('error: --threads must be at least 1\n')
        return 1
    try:
        report = run(args.config, out=args.out, threads=args.threads,
                     seed=args.seed)
    except (ConfigurationError, InputError, LatticeError, DensityError,
            QuadratureError, OutputError) as e:
        sys.stderr.write('error: %s\n' % e)
        return 1
    except AcceptanceError as e:
        sys.stderr.write('assertion failure: %s\n' % e)
        return 2
    logging.info("%s" % report)
    return 0


if __name__ == '__main__':
    sys.exit(main())
