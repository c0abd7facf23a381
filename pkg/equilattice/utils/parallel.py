"""
    Map a function over independent work items, with dask when asked for
    and a serial loop otherwise.  The output order is the input order, so
    reductions over the result are deterministic.

"""

__all__ = ['parallel_map', 'set_num_workers']

import logging

_NUM_WORKERS = None


def set_num_workers(n):
    '''
    Number of workers used by the dask threaded scheduler, None for the
    dask default (the number of cores)
    '''
    global _NUM_WORKERS
    _NUM_WORKERS = None if n is None else max(1, int(n))

def parallel_map(func, items, parallel=False):
    '''
    Apply `func` to every element of `items`.

    Parameters
    ----------
    func: callable
        single argument function
    items: list
        work items
    parallel: bool, optional
        use :mod:`dask.bag`, defaults to False

    Returns
    -------
    list
        results in the order of `items`
    '''
    items = list(items)
    if parallel and len(items) > 1:
        try:
            import dask
            import dask.bag
            logging.debug("Using Dask for %d work items" % len(items))
            xtmp = dask.bag.from_sequence(items, npartitions=len(items))
            with dask.config.set(scheduler='threads',
                                 num_workers=_NUM_WORKERS):
                return xtmp.map(func).compute()
        except ImportError:
            logging.warning("Dask not available reverting to serial")

    logging.debug("Performing serial evaluation of %d work items" %
                  len(items))
    return [func(x) for x in items]
