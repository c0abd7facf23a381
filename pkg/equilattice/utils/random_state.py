"""
    Random state handling.  Every stochastic routine takes a `seed`
    argument that goes through :func:`test_seed`, and parallel sampling
    splits the work into a fixed number of independent sub-streams so that
    the merged result does not depend on the number of workers.

"""

__all__ = ['test_seed', 'master_seed', 'spawn_random_states', 'split_samples']

import numbers

import numpy as np

from equilattice._errors import InputError


def test_seed(seed):
    '''
    Test the input type of `seed` and return a new random generator if
    appropriate.

    Parameters
    ----------
    seed:
        If True, then a new :class:`numpy.random.RandomState` will be created.
        If False, then a :class:`numpy.random.RandomState` with the current
        global state of the random number generator is returned.
        If it is an int, then the input seed is used to create a new
        random state.
        If it is already a :class:`numpy.random.RandomState` object then
        the same object is returned.

    Returns
    -------
    :class:`numpy.random.RandomState`
    '''
    if seed is True:
        return np.random.RandomState()
    elif isinstance(seed, np.random.RandomState):
        return seed
    elif isinstance(seed, numbers.Integral) and not isinstance(seed, bool):
        return np.random.RandomState(int(seed))
    elif seed is False:
        state = np.random.get_state()
        rvs = np.random.RandomState()
        rvs.set_state(state)
        return rvs
    else:
        raise InputError("Expecting seed to be an int, bool or " +
                         "numpy.random.RandomState, got %s" % type(seed))

def spawn_random_states(seed, n_streams):
    '''
    Independent random states derived from a master integer seed.

    Parameters
    ----------
    seed: int
        master seed
    n_streams: int
        number of sub-streams

    Returns
    -------
    list of :class:`numpy.random.RandomState`
    '''
    if isinstance(seed, bool) or not isinstance(seed, numbers.Integral):
        raise InputError("Sub-streams need an integer master seed")
    children = np.random.SeedSequence(int(seed)).spawn(n_streams)
    return [np.random.RandomState(np.random.MT19937(c)) for c in children]

def split_samples(samples, chunk_size):
    '''
    Split a sample count into chunk sizes; the split only depends on the
    two inputs.
    '''
    samples = int(samples)
    chunk_size = max(1, int(chunk_size))
    sizes = [chunk_size] * (samples // chunk_size)
    if samples % chunk_size:
        sizes.append(samples % chunk_size)
    return sizes

def master_seed(seed):
    '''
    Integer master seed from anything :func:`test_seed` accepts
    '''
    if isinstance(seed, numbers.Integral) and not isinstance(seed, bool):
        return int(seed)
    return int(test_seed(seed).randint(0, 2**31 - 1))
