'''
Input checks shared by the lattice, form and CM code.  Everything that
describes an integral object (Gram matrices, tuples, bases) is converted
to an integer :class:`numpy.ndarray` here and nowhere else.
'''

__all__ = ['check_array_type',
           'check_integer_array',
           'check_symmetric_matrix',
           'check_dimension',
           'is_list_like',
           'str_or_list',
           'check_positive_int']

import numbers

import numpy as np

from equilattice._errors import InputError, ArrayError


def check_array_type(x):
    '''
    Check to see if the type of input is suitable.  Only operate on one
    or two dimension arrays

    Parameters
    ----------
    x: array like
        which can be either a :class:`numpy.ndarray` or list or tuple

    Returns
    -------
    x: :class:`numpy.ndarray`
        checked and converted array
    '''

    if isinstance(x, np.ndarray):
        pass
    elif isinstance(x, (list, tuple)):
        if len(x) == 0:
            x = np.array(x)
        elif isinstance(x[0], numbers.Number):
            x = np.array(x)
        elif isinstance(x[0], (list, tuple, np.ndarray)):
            if len(x[0]) == 0 or isinstance(x[0][0], numbers.Number):
                x = np.array(x)
            else:
                raise ArrayError("Expecting elements of float or int")
        else:
            raise ArrayError("Expecting elements of float or int")
    elif isinstance(x, numbers.Number):
        x = np.array([x])
    else:
        raise ArrayError("Expecting an array like object, got %s" % type(x))

    return x

def check_integer_array(x, ndim=None):
    '''
    Convert to an integer array, refusing anything with a fractional part.

    Parameters
    ----------
    x: array like
        integer valued input
    ndim: int, optional
        required number of dimensions

    Returns
    -------
    x: :class:`numpy.ndarray`
        of dtype int64, or object when an entry does not fit in 64 bits
    '''
    x = check_array_type(x)
    if ndim is not None and x.ndim != ndim:
        raise InputError("Expecting an array of dimension %d, got %d" %
                         (ndim, x.ndim))

    if x.dtype == object:
        if not all(isinstance(v, numbers.Integral) for v in x.flat):
            raise InputError("Expecting integer entries")
        if all(abs(int(v)) < 2**62 for v in x.flat):
            return x.astype(np.int64)
        return x
    if np.issubdtype(x.dtype, np.integer) or x.dtype == bool:
        return x.astype(np.int64)
    if np.issubdtype(x.dtype, np.floating):
        if not np.all(np.isfinite(x)) or np.any(np.mod(x, 1) != 0):
            raise InputError("Expecting integer entries")
        return x.astype(np.int64)
    raise InputError("Expecting integer entries, got dtype %s" % x.dtype)

def check_symmetric_matrix(x, integer=True):
    '''
    Square symmetric matrix check.

    Parameters
    ----------
    x: array like
        the matrix
    integer: bool, optional
        if True (default) the entries must be integers

    Returns
    -------
    x: :class:`numpy.ndarray`
    '''
    if integer:
        x = check_integer_array(x, ndim=2)
    else:
        x = np.asarray(check_array_type(x), dtype=float)
        if x.ndim != 2:
            raise InputError("Expecting a matrix")

    if x.shape[0] != x.shape[1]:
        raise InputError("Expecting a square matrix, got shape %s" %
                         (x.shape,))
    if integer:
        if not np.array_equal(x, x.T):
            raise InputError("Matrix is not symmetric")
    elif not np.allclose(x, x.T, atol=1e-12):
        raise InputError("Matrix is not symmetric")

    return x

def check_dimension(x, y):
    '''
    Compare the length of two array like objects.  Converting both to a numpy
    array in the process if they are not already one.

    Parameters
    ----------
    x: array like
        first array
    y: array like
        second array

    Returns
    -------
    x: :class:`numpy.array`
        checked and converted first array
    y: :class:`numpy.array`
        checked and converted second array
    '''

    y = check_array_type(y)
    x = check_array_type(x)

    if x.shape[-1] != y.shape[-1]:
        raise InputError("Dimension mismatch: %d against %d" %
                         (x.shape[-1], y.shape[-1]))

    return (x, y)

def is_list_like(x):
    '''
    Test whether the input is a type that behaves like a list, such
    as (list,tuple,np.ndarray)

    Parameters
    ----------
    x:
        anything

    Returns
    -------
    bool:
        True if it belongs to one of the three expected type
        (list,tuple,np.ndarray)
    '''
    return isinstance(x, (list, tuple, np.ndarray))

def str_or_list(x):
    '''
    Test to see whether input is a string or a list.  If it
    is a string, then we convert it to a list.

    Parameters
    ----------
    x:
        str or list

    Returns
    -------
    x:
        x in list form

    '''
    if isinstance(x, list):
        return x
    elif isinstance(x, tuple):
        return list(x)
    elif isinstance(x, str):
        return [x]
    else:
        raise InputError("Expecting a string or list")

def check_positive_int(x, name, allow_zero=False):
    '''
    Integer argument check, returns a python int
    '''
    if isinstance(x, bool) or not isinstance(x, numbers.Integral):
        raise InputError("%s should be an integer, got %r" % (name, x))
    x = int(x)
    if x < 0 or (x == 0 and not allow_zero):
        raise InputError("%s should be %s, got %d" %
                         (name, "non-negative" if allow_zero else "positive", x))
    return x
