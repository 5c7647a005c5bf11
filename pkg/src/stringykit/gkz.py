"""Connection data on the hatted interior quotients: multiplication-style
expansion matrices, their commutation, and the exact flatness identity
checked with dual-number scalars.

For a face sigma and a base point g0, the basis is a fixed set of
interior monomials whose hat-classes span the quotient; the matrix A_n
expands the class of (basis monomial + n) back in the basis.  The
structure equations dPhi_c/dg(n) = Phi_{c+n} of the degree-zero
hypergeometric system dualize to the curvature identity
    d/dg(n) A_{n'} - d/dg(n') A_n = [A_{n'}, A_n],
which reduces to plain derivative symmetry whenever the matrices
commute.  Derivatives are exact: one coordinate of g is perturbed by
eps with eps^2 = 0 and the whole reduction pipeline runs over Q[eps].
"""

from dataclasses import dataclass
from fractions import Fraction

from .dualnum import DualRational
from .errors import DegenerateCoefficients, TruncationTooSmall
from .jacobian import (CoefficientFunction, HatModel, face_is_nondegenerate,
                       is_nondegenerate, r1, r1_hat)
from .lattice import dot, dual_face, faces, padd
from .linalg import Echelon


def _delta_in(face, g):
    normals = face.cone.facet_normals
    return [n for n in g.domain()
            if all(dot(n, normals[j]) == 0 for j in face.active)]


def _certify_face(face, g):
    poset = faces(face.cone)
    for sub in poset:
        if poset.leq(sub, face) and not face_is_nondegenerate(sub, g):
            raise DegenerateCoefficients(
                "coefficients degenerate on a face of dimension %d"
                % sub.dim)


class _QuotientBasis:
    """Hat-quotient of one face with coordinates in a fixed monomial
    basis, generic over the scalar ring carried by the g values."""

    def __init__(self, face, g, D, basis_points=None):
        self.face = face
        self.g = g
        self.D = D
        try:
            self.model = HatModel(face, g, D)
            if basis_points is None:
                data = self.model.interior_level_data()
                basis_points = [p for _, level in data for p, _ in level]
            self.basis_points = list(basis_points)
            self._coords = Echelon()
            for i, p in enumerate(self.basis_points):
                rem = self.model.class_reduce({p: Fraction(1)})
                if not rem or self._coords.insert(
                        dict(rem), {i: Fraction(1)}) is None:
                    raise DegenerateCoefficients(
                        "selected monomials do not stay a basis")
        except ValueError as exc:
            # no unit pivot: the value part of the scalars degenerated
            raise DegenerateCoefficients(str(exc)) from exc

    def expand(self, point):
        """Coordinates of the class of one monomial in the basis."""
        rem = self.model.class_reduce({point: Fraction(1)})
        red, sh = self._coords.reduce(rem, {})
        if red:
            raise TruncationTooSmall(
                "class not expressible inside the truncation window")
        return [-sh.get(i, Fraction(0))
                for i in range(len(self.basis_points))]


def basis_select(sigma, g0, D=None):
    """Interior monomials whose classes form a basis, chosen greedily in
    (degree, lex) order; the choice is independent of g near g0."""
    _certify_face(sigma, g0)
    if D is None:
        D = sigma.dim + 2
    r1_hat(sigma, g0, D)   # certifies stabilization against the oracle
    qb = _QuotientBasis(sigma, g0, D)
    return list(qb.basis_points)


@dataclass
class ConnectionData:
    """Expansion matrices A_n on one face's hat-quotient at a base point."""
    sigma: object
    g0: object
    basis: tuple
    matrices: dict           # n -> matrix as list of rows

    def dim(self):
        return len(self.basis)


def _matrix_from(qb, n):
    cols = []
    for c in qb.basis_points:
        if dot(padd(c, n), qb.g.lam) > qb.D:
            raise TruncationTooSmall(
                "basis monomial plus n leaves the truncation window")
        cols.append(qb.expand(padd(c, n)))
    k = len(qb.basis_points)
    return [[cols[j][i] for j in range(k)] for i in range(k)]


def multiplication_matrix(cd, n):
    """A_n: column i expands the class of basis[i] + n in the basis."""
    if n not in cd.matrices:
        raise ValueError("n is not a degree-one point of the face")
    return cd.matrices[n]


def connection_data(sigma, g0, D=None, basis_points=None):
    """Build the full matrix family over the face's degree-one points."""
    if D is None:
        D = sigma.dim + 2
    if basis_points is None:
        basis_points = basis_select(sigma, g0, D)
    qb = _QuotientBasis(sigma, g0, D, basis_points)
    mats = {}
    for n in _delta_in(sigma, g0):
        mats[n] = _matrix_from(qb, n)
    return ConnectionData(sigma=sigma, g0=g0, basis=tuple(basis_points),
                          matrices=mats)


def _dual_g(g0, direction):
    """g0 with the chosen coordinate replaced by value + eps."""
    values = []
    for p, v in g0.values:
        if p == direction:
            values.append((p, DualRational.variable(v)))
        else:
            values.append((p, DualRational(v)))
    return CoefficientFunction(g0.cone, g0.lam, tuple(values))


def _mat_ops(a, b, combine):
    return [[combine(x, y) for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def _mat_mul(a, b):
    k = len(a)
    return [[sum(a[i][l] * b[l][j] for l in range(k)) for j in range(k)]
            for i in range(k)]


def matrices_commute(a, b):
    return _mat_mul(a, b) == _mat_mul(b, a)


def _value_deriv(mat):
    val = [[x.value if isinstance(x, DualRational) else Fraction(x)
            for x in row] for row in mat]
    der = [[x.deriv if isinstance(x, DualRational) else Fraction(0)
            for x in row] for row in mat]
    return val, der


def flatness_check(sigma, g0, n, nprime, D=None, basis_points=None):
    """Exact curvature identity at the base point:
    d/dg(n) A_{n'} - d/dg(n') A_n = [A_{n'}, A_n]."""
    if D is None:
        D = sigma.dim + 2
    if basis_points is None:
        basis_points = basis_select(sigma, g0, D)
    qb_n = _QuotientBasis(sigma, _dual_g(g0, n), D, basis_points)
    a_np_at_n = _matrix_from(qb_n, nprime)     # A_{n'} over Q[eps], d/dg(n)
    qb_np = _QuotientBasis(sigma, _dual_g(g0, nprime), D, basis_points)
    a_n_at_np = _matrix_from(qb_np, n)         # A_n over Q[eps], d/dg(n')
    a_np, d_n_a_np = _value_deriv(a_np_at_n)
    a_n, d_np_a_n = _value_deriv(a_n_at_np)
    lhs = _mat_ops(d_n_a_np, d_np_a_n, lambda x, y: x - y)
    rhs = _mat_ops(_mat_mul(a_np, a_n), _mat_mul(a_n, a_np),
                   lambda x, y: x - y)
    return lhs == rhs


def curvature_report(sigma, g0, D=None, basis_points=None):
    """Flatness sweep over every ordered pair of parameter directions on
    one face, reusing a single dual-number build per direction.

    Returns the exact outcome of the curvature identity together with
    the (generally false) plain derivative symmetry and commutativity,
    reported for the record.
    """
    if D is None:
        D = sigma.dim + 2
    if basis_points is None:
        basis_points = basis_select(sigma, g0, D)
    directions = _delta_in(sigma, g0)
    value = {}
    deriv = {}
    for n in directions:
        qb = _QuotientBasis(sigma, _dual_g(g0, n), D, basis_points)
        for nprime in directions:
            val, der = _value_deriv(_matrix_from(qb, nprime))
            value[nprime] = val
            deriv[(n, nprime)] = der
    flat = True
    symmetric = True
    commuting = True
    pairs = 0
    for i, n in enumerate(directions):
        for nprime in directions[i:]:
            pairs += 1
            lhs = _mat_ops(deriv[(n, nprime)], deriv[(nprime, n)],
                           lambda x, y: x - y)
            rhs = _mat_ops(_mat_mul(value[nprime], value[n]),
                           _mat_mul(value[n], value[nprime]),
                           lambda x, y: x - y)
            if lhs != rhs:
                flat = False
            if deriv[(n, nprime)] != deriv[(nprime, n)]:
                symmetric = False
            if not matrices_commute(value[n], value[nprime]):
                commuting = False
    return {"flat": flat, "pairs_checked": pairs,
            "derivative_symmetry": symmetric, "commuting": commuting,
            "dim": len(basis_points)}


def connection_on_hb(pair, f, g0):
    """One block of connection data per face theta* carrying a nonzero
    hatted summand; parameters g(v) with v outside the face do not enter
    the block's matrices at all."""
    if not is_nondegenerate(pair, f):
        raise DegenerateCoefficients("f fails the nondegeneracy certificate")
    if not is_nondegenerate(pair, g0):
        raise DegenerateCoefficients("g fails the nondegeneracy certificate")
    blocks = {}
    for theta in pair.poset():
        if not r1(theta, f).total():
            continue
        sigma = dual_face(pair, theta)
        if sigma.key() in blocks:
            continue
        if not r1_hat(sigma, g0).total():
            continue
        blocks[sigma.key()] = connection_data(sigma, g0)
    return [blocks[k] for k in sorted(blocks)]
