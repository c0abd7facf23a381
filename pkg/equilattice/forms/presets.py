"""
    Named Lie configurations, built from matrix realisations.

"""

__all__ = ['build_lie_configuration', 'list_lie_presets', 'sl2_basis',
           'so31_basis']

import logging

import numpy as np

from equilattice._errors import ConfigurationError
from equilattice.forms.lie_configuration import (LieConfiguration,
                                                 structure_constants_from_matrices)


def sl2_basis():
    '''
    The basis X1 = diag(1, -1), X2 = [[0, 1], [1, 0]], X3 = [[0, 1],
    [-1, 0]] of sl(2, R); X3 generates SO(2)
    '''
    return np.array([[[1., 0.], [0., -1.]],
                     [[0., 1.], [1., 0.]],
                     [[0., 1.], [-1., 0.]]])

def _unit(n, i, j):
    E = np.zeros((n, n))
    E[i, j] = 1.0
    return E

def _block_diagonal(A, B):
    n, m = A.shape[0], B.shape[0]
    out = np.zeros((n + m, n + m))
    out[:n, :n] = A
    out[n:, n:] = B
    return out

def so31_basis():
    '''
    The basis R12, R13, R23, B14, B24, B34 of so(3,1) preserving
    diag(1, 1, 1, -1); R_ij = E_ij - E_ji rotates and B_i4 = E_i4 + E_4i
    boosts.  The rotations span so(3) and act on the boosts as on R^3
    '''
    mats = [_unit(4, i, j) - _unit(4, j, i)
            for i, j in ((0, 1), (0, 2), (1, 2))]
    mats += [_unit(4, i, 3) + _unit(4, 3, i) for i in range(3)]
    return np.array(mats)

def _so21_geodesic():
    X = sl2_basis()
    return LieConfiguration(
        structure_constants_from_matrices(X), h=[0], k=[2], l=[],
        labels=['X1', 'X2', 'X3'], name='so21-geodesic',
        description='SO(2,1) with K = SO(2) and H the isometries of a ' +
        'geodesic; the rotation by pi reverses h')

def _sl2xsl2_diagonal():
    X = sl2_basis()
    Z = np.zeros((2, 2))
    mats = [_block_diagonal(x, Z) for x in X] + \
        [_block_diagonal(Z, x) for x in X]
    c = structure_constants_from_matrices(mats)
    e = np.eye(6)
    return LieConfiguration(
        c, h=[e[0] + e[3], e[1] + e[4], e[2] + e[5]], k=[2, 5],
        l=[e[2] + e[5]],
        labels=['X1+0', 'X2+0', 'X3+0', '0+X1', '0+X2', '0+X3'],
        orientation={'g/h': 'complex'},
        complex_structure={'ad': 0.5*(e[2] + e[5])},
        name='sl2xsl2-diagonal',
        description='SL(2,R)^2 with H the diagonal, K = SO(2)^2 and L ' +
        'the diagonal SO(2)')

def _so22_weight2():
    # basis R12, R34, B13, B14, B23, B24 of so(2,2) for diag(1,1,-1,-1)
    mats = [_unit(4, 0, 1) - _unit(4, 1, 0),
            _unit(4, 2, 3) - _unit(4, 3, 2)]
    for i in (0, 1):
        for j in (2, 3):
            mats.append(_unit(4, i, j) + _unit(4, j, i))
    c = structure_constants_from_matrices(mats)
    return LieConfiguration(
        c, h=[1, 4, 5], k=[0, 1], l=[1],
        labels=['R12', 'R34', 'B13', 'B14', 'B23', 'B24'],
        orientation={'g/h': 'complex'},
        complex_structure={'ad': [0, 1, 0, 0, 0, 0]},
        blocks={'V20': {'basis': [1], 'rep': [[[1j]]]}},
        name='so22-weight2',
        description='Weight two period domain of SO(2,2) with H fixing a ' +
        'positive vector; V20 is the line e3 + i e4 of the negative ' +
        'plane, on which R34 acts by i')

def _su11_disc():
    X = sl2_basis()
    return LieConfiguration(
        structure_constants_from_matrices(X), h=[2], k=[2], l=[2],
        labels=['X1', 'X2', 'X3'],
        blocks={'u1': {'basis': [2], 'rep': [[[1j]]]}},
        name='su11-disc',
        description='SU(1,1) acting on the disc with K = U(1); the ' +
        'curvature of the u1 block has constant coefficient')

def _so3():
    # (L_i)_jk = -epsilon_ijk, so that [L1, L2] = L3
    eps = np.zeros((3, 3, 3))
    for (i, j, k), s in (((0, 1, 2), 1), ((1, 2, 0), 1), ((2, 0, 1), 1),
                         ((0, 2, 1), -1), ((2, 1, 0), -1), ((1, 0, 2), -1)):
        eps[i, j, k] = s
    return LieConfiguration(
        structure_constants_from_matrices(-eps), h=[2], k=[2], l=[2],
        labels=['L1', 'L2', 'L3'], name='so3',
        description='The compact so(3), Killing form -2 I, with the ' +
        'sphere SO(3)/SO(2) as quotient')

def _so31_plane():
    return LieConfiguration(
        structure_constants_from_matrices(so31_basis()), h=[2, 4, 5],
        k=[0, 1, 2], l=[2],
        labels=['R12', 'R13', 'R23', 'B14', 'B24', 'B34'],
        name='so31-plane',
        description='SO(3,1) with K = SO(3) and H = SO(2,1) fixing a ' +
        'spacelike vector; the fibre K/L is the sphere and the half turn ' +
        'about B24 reverses h/l')

_PRESETS = {'so21-geodesic': _so21_geodesic,
            'sl2xsl2-diagonal': _sl2xsl2_diagonal,
            'so22-weight2': _so22_weight2,
            'su11-disc': _su11_disc,
            'so3': _so3,
            'so31-plane': _so31_plane}

def list_lie_presets():
    '''
    Names and descriptions of the preset configurations
    '''
    return sorted((name, f().description) for name, f in _PRESETS.items())

def build_lie_configuration(source):
    '''
    A validated Lie configuration.

    Parameters
    ----------
    source: str, dict or :class:`equilattice.forms.LieConfiguration`
        a preset name, a configuration document (dict, JSON string or
        path), or an existing configuration returned unchanged

    Returns
    -------
    :class:`equilattice.forms.LieConfiguration`
    '''
    if isinstance(source, LieConfiguration):
        return source
    if isinstance(source, str) and source in _PRESETS:
        logging.debug("Building Lie preset %s" % source)
        return _PRESETS[source]()
    if isinstance(source, dict) and set(source) == {'preset'}:
        if source['preset'] not in _PRESETS:
            raise ConfigurationError("preset: unknown Lie preset %s" %
                                     source['preset'])
        return _PRESETS[source['preset']]()
    if isinstance(source, (str, dict)):
        return LieConfiguration.from_json(source)
    raise ConfigurationError("Expecting a preset name or a configuration, " +
                             "got %s" % type(source))
