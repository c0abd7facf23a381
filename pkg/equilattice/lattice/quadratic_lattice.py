"""
    Integral quadratic lattices (Z^d, B), tuples of lattice vectors and
    their intersection (Gram) matrices.

"""

__all__ = ['QuadraticLattice',
           'VectorTuple',
           'GramMatrix',
           'gram_of_tuple',
           'discriminant',
           'get_lattice',
           'list_lattice_presets']

import json
import logging
import re
from numbers import Integral

import numpy as np

from equilattice._errors import InputError, LatticeError
from equilattice.utils.checks_and_conversions import (check_integer_array,
                                                      check_symmetric_matrix)
from equilattice.utils.exact import (batch_det, batch_gram, inertia,
                                     is_positive_definite_exact,
                                     is_positive_semidefinite_exact)


class QuadraticLattice(object):
    '''
    The lattice Z^d with an integral symmetric bilinear form B

    Parameters
    ----------
    gram: array like
        d x d symmetric non-singular integer matrix
    name: str, optional
        label used in reports, defaults to 'L'
    '''
    def __init__(self, gram, name=None):
        gram = check_symmetric_matrix(gram, integer=True)
        if gram.dtype == object:
            raise LatticeError("Gram entries do not fit in 64 bits")
        if gram.shape[0] == 0:
            raise LatticeError("A lattice needs rank at least one")
        self._gram = gram
        self._gram.setflags(write=False)
        self._det = int(batch_det(gram[None, :, :])[0])
        if self._det == 0:
            raise LatticeError("Gram matrix is singular")
        pos, neg, zero = inertia(gram)
        assert zero == 0, "inertia disagrees with the determinant"
        self._signature = (pos, neg)
        self._name = 'L' if name is None else str(name)
        self._majorant = None

    @property
    def gram(self):
        return self._gram

    @property
    def name(self):
        return self._name

    @property
    def rank(self):
        return self._gram.shape[0]

    @property
    def signature(self):
        '''
        (p_plus, q_minus), the inertia of the Gram matrix
        '''
        return self._signature

    @property
    def det(self):
        return self._det

    @property
    def is_positive_definite(self):
        return self._signature[1] == 0

    @property
    def is_even(self):
        return bool(np.all(np.diag(self._gram) % 2 == 0))

    @property
    def is_unimodular(self):
        return abs(self._det) == 1

    def majorant(self):
        '''
        A positive definite integer form used to bound windowed enumeration.
        The Gram matrix itself when the lattice is positive definite, else
        the entrywise absolute Gram plus the identity when that is positive
        definite, else a multiple of the identity above the spectral radius.

        Returns
        -------
        :class:`numpy.ndarray`
        '''
        if self._majorant is None:
            if self.is_positive_definite:
                P = self._gram.copy()
            else:
                P = np.abs(self._gram) + np.eye(self.rank, dtype=np.int64)
                if not is_positive_definite_exact(P):
                    rho = np.max(np.abs(np.linalg.eigvalsh(
                        self._gram.astype(float))))
                    P = (int(np.ceil(rho)) + 1)*np.eye(self.rank,
                                                       dtype=np.int64)
            P.setflags(write=False)
            self._majorant = P
        return self._majorant

    def bilinear(self, u, v):
        '''
        B(u, v) for integer vectors, as a python int
        '''
        u = check_integer_array(u, ndim=1)
        v = check_integer_array(v, ndim=1)
        if len(u) != self.rank or len(v) != self.rank:
            raise InputError("Vectors must have length %d" % self.rank)
        return int(sum(int(a)*int(b)*int(c)
                       for a, row in zip(u, self._gram)
                       for b, c in zip(row, v)))

    def norm(self, v):
        '''
        B(v, v)
        '''
        return self.bilinear(v, v)

    def direct_sum(self, other, name=None):
        '''
        Orthogonal direct sum with another lattice
        '''
        if not isinstance(other, QuadraticLattice):
            raise InputError("Expecting a QuadraticLattice")
        d1, d2 = self.rank, other.rank
        G = np.zeros((d1 + d2, d1 + d2), dtype=np.int64)
        G[:d1, :d1] = self._gram
        G[d1:, d1:] = other.gram
        if name is None:
            name = '%s+%s' % (self._name, other.name)
        return QuadraticLattice(G, name)

    def to_dict(self):
        return {'gram': self._gram.tolist(), 'name': self._name}

    def to_json(self):
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, source):
        '''
        Read a lattice from a dict, a JSON string or a path to a JSON file,
        in the form {"gram": [[...]], "name": "..."}
        '''
        if isinstance(source, str):
            try:
                source = json.loads(source)
            except ValueError:
                with open(source, 'r') as fp:
                    source = json.load(fp)
        elif isinstance(source, bytes):
            source = json.loads(source.decode())

        if not isinstance(source, dict) or 'gram' not in source:
            raise InputError("Lattice JSON needs a 'gram' entry")
        return cls(source['gram'], source.get('name'))

    def __repr__(self):
        return 'QuadraticLattice(%s, %s)' % (repr(self._gram.tolist()),
                                             repr(self._name))

    def __str__(self):
        return self._name

    def __eq__(self, other):
        if isinstance(other, QuadraticLattice):
            return np.array_equal(self._gram, other.gram)
        raise NotImplementedError('Wrong input type of %s' % type(other))

    def __ne__(self, other):
        return not self.__eq__(other)

    def __hash__(self):
        return hash(tuple(self._gram.flat))

    def __lt__(self, other):
        raise NotImplementedError("Only equality comparison allowed")

    def __le__(self, other):
        raise NotImplementedError("Only equality comparison allowed")

    def __gt__(self, other):
        raise NotImplementedError("Only equality comparison allowed")

    def __ge__(self, other):
        raise NotImplementedError("Only equality comparison allowed")


class GramMatrix(object):
    '''
    An r x r symmetric integer matrix, the intersection matrix I(v) of a
    tuple of lattice vectors

    Parameters
    ----------
    matrix: array like
        symmetric integer matrix
    '''
    def __init__(self, matrix):
        if isinstance(matrix, GramMatrix):
            matrix = matrix.matrix
        matrix = check_integer_array(matrix)
        if matrix.ndim == 1 and matrix.size == 1:
            matrix = matrix.reshape(1, 1)
        self._matrix = check_symmetric_matrix(matrix, integer=True)
        self._matrix.setflags(write=False)

    @property
    def matrix(self):
        return self._matrix

    @property
    def size(self):
        return self._matrix.shape[0]

    @property
    def det(self):
        return int(batch_det(self._matrix[None, :, :])[0])

    def is_positive_definite(self):
        return is_positive_definite_exact(self._matrix)

    def is_positive_semidefinite(self):
        return is_positive_semidefinite_exact(self._matrix)

    def scaled(self, c):
        '''
        c * M for a positive integer c
        '''
        if not isinstance(c, Integral) or c <= 0:
            raise InputError("Scaling factor must be a positive integer")
        return GramMatrix(self._matrix * int(c))

    def tolist(self):
        return [[int(x) for x in row] for row in self._matrix]

    def __repr__(self):
        return 'GramMatrix(%s)' % repr(self.tolist())

    def __eq__(self, other):
        if isinstance(other, GramMatrix):
            return np.array_equal(self._matrix, other.matrix)
        elif isinstance(other, (np.ndarray, list, tuple)):
            other = np.asarray(other)
            return other.shape == self._matrix.shape and \
                bool(np.all(other == self._matrix))
        raise NotImplementedError('Wrong input type of %s' % type(other))

    def __ne__(self, other):
        return not self.__eq__(other)

    def __hash__(self):
        return hash(tuple(int(x) for x in self._matrix.flat))


class VectorTuple(object):
    '''
    An r-tuple of vectors of a quadratic lattice

    Parameters
    ----------
    lattice: :class:`QuadraticLattice`
        ambient lattice
    vectors: array like
        r x d integer array, one vector per row
    '''
    def __init__(self, lattice, vectors):
        if not isinstance(lattice, QuadraticLattice):
            raise InputError("Expecting a QuadraticLattice")
        vectors = check_integer_array(vectors)
        if vectors.ndim == 1:
            vectors = vectors.reshape(1, -1)
        if vectors.ndim != 2 or vectors.shape[0] < 1:
            raise InputError("Expecting at least one vector")
        if vectors.shape[1] != lattice.rank:
            raise InputError("Vectors must have length %d, got %d" %
                             (lattice.rank, vectors.shape[1]))
        self._lattice = lattice
        self._vectors = vectors
        self._vectors.setflags(write=False)
        self._gram = None

    @property
    def lattice(self):
        return self._lattice

    @property
    def vectors(self):
        return self._vectors

    @property
    def r(self):
        return self._vectors.shape[0]

    @property
    def gram(self):
        if self._gram is None:
            self._gram = GramMatrix(
                batch_gram(self._lattice.gram, self._vectors[None])[0])
        return self._gram

    @property
    def discriminant(self):
        return self.gram.det

    @property
    def in_omega(self):
        '''
        True when the vectors span a positive definite subspace
        '''
        return self.gram.is_positive_definite()

    def __len__(self):
        return self.r

    def __repr__(self):
        return 'VectorTuple(%s, %s)' % (self._lattice.name,
                                        repr(self._vectors.tolist()))

    def __eq__(self, other):
        if isinstance(other, VectorTuple):
            return self._lattice == other.lattice and \
                np.array_equal(self._vectors, other.vectors)
        raise NotImplementedError('Wrong input type of %s' % type(other))

    def __ne__(self, other):
        return not self.__eq__(other)

    def __hash__(self):
        return hash(tuple(int(x) for x in self._vectors.flat))


def _tuple_array(L, t):
    if isinstance(t, VectorTuple):
        if t.lattice.rank != L.rank:
            raise InputError("Tuple belongs to a lattice of rank %d" %
                             t.lattice.rank)
        return t.vectors
    t = check_integer_array(t)
    if t.ndim == 1:
        t = t.reshape(1, -1)
    if t.ndim != 2 or t.shape[1] != L.rank:
        raise InputError("Dimension mismatch: expecting vectors of " +
                         "length %d" % L.rank)
    return t

def gram_of_tuple(L, t):
    '''
    The intersection matrix (B(v_i, v_j))_{i,j} of a tuple.

    Parameters
    ----------
    L: :class:`QuadraticLattice`
    t: :class:`VectorTuple` or array like
        r x d integer vectors

    Returns
    -------
    :class:`GramMatrix`
    '''
    V = _tuple_array(L, t)
    return GramMatrix(batch_gram(L.gram, V[None])[0])

def discriminant(L, t):
    '''
    det of :func:`gram_of_tuple`, a python int
    '''
    return gram_of_tuple(L, t).det


# named lattices, the value is (description, gram builder)
_E8_EDGES = [(0, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (1, 3)]

def _cartan(n, edges):
    G = 2*np.eye(n, dtype=np.int64)
    for i, j in edges:
        G[i, j] = G[j, i] = -1
    return G

_PRESETS = {
    'Z<d>': 'the standard lattice Z^d with the dot product',
    'A2': 'hexagonal lattice, Gram [[2,1],[1,2]]',
    'U': 'hyperbolic plane, Gram [[0,1],[1,0]]',
    'D4': 'root lattice D4 (Cartan matrix)',
    'E8': 'even unimodular root lattice E8 (Cartan matrix)',
    'diag(a,b,...)': 'diagonal form with the given entries',
    'X+Y': 'orthogonal direct sum of two named lattices',
}

def _single_lattice(token):
    token = token.strip()
    m = re.fullmatch(r'Z(\d+)', token)
    if m:
        d = int(m.group(1))
        if d < 1:
            raise InputError("Z<d> needs d >= 1")
        return np.eye(d, dtype=np.int64)
    m = re.fullmatch(r'diag\(([-\d,\s]+)\)', token)
    if m:
        entries = [int(x) for x in m.group(1).split(',') if x.strip()]
        return np.diag(np.array(entries, dtype=np.int64))
    if token == 'A2':
        return np.array([[2, 1], [1, 2]], dtype=np.int64)
    if token == 'U':
        return np.array([[0, 1], [1, 0]], dtype=np.int64)
    if token == 'D4':
        return _cartan(4, [(0, 1), (1, 2), (1, 3)])
    if token == 'E8':
        return _cartan(8, _E8_EDGES)
    raise InputError("Unknown lattice name %s" % token)

def get_lattice(spec):
    '''
    Build a lattice from a registry name such as 'Z4', 'A2+Z2' or
    'diag(1,-1)', from a lattice JSON document, or return an existing
    :class:`QuadraticLattice` unchanged.
    '''
    if isinstance(spec, QuadraticLattice):
        return spec
    if isinstance(spec, dict):
        return QuadraticLattice.from_json(spec)
    if not isinstance(spec, str):
        raise InputError("Expecting a lattice name, got %s" % type(spec))
    if spec.lstrip().startswith('{'):
        return QuadraticLattice.from_json(spec)

    # split on '+' outside of the diag(...) parentheses
    parts, depth, cur = [], 0, ''
    for ch in spec:
        if ch == '(':
            depth += 1
        elif ch == ')':
            depth -= 1
        if ch == '+' and depth == 0:
            parts.append(cur)
            cur = ''
        else:
            cur += ch
    parts.append(cur)

    blocks = [_single_lattice(p) for p in parts]
    d = sum(b.shape[0] for b in blocks)
    G = np.zeros((d, d), dtype=np.int64)
    i = 0
    for b in blocks:
        G[i:i + b.shape[0], i:i + b.shape[0]] = b
        i += b.shape[0]
    logging.debug("Built lattice %s of rank %d" % (spec, d))
    return QuadraticLattice(G, spec.replace(' ', ''))

def list_lattice_presets():
    '''
    Names and descriptions of the lattice registry
    '''
    return sorted(_PRESETS.items())
