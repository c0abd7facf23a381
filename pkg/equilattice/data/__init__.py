''' data

Example experiment configurations for the `equilattice` command

'''
import os

__all__ = ['example_configs', 'example_config_path']

_HERE = os.path.dirname(os.path.abspath(__file__))


def example_configs():
    '''
    Names of the shipped configurations
    '''
    return sorted(f[:-5] for f in os.listdir(_HERE) if f.endswith('.json'))

def example_config_path(name):
    '''
    Path of a shipped configuration, by name without the .json suffix
    '''
    if name not in example_configs():
        raise ValueError("No example configuration %s" % name)
    return os.path.join(_HERE, '%s.json' % name)
