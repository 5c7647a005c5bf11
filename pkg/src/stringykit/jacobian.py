"""Semigroup rings of faces, logarithmic-derivative ideals, the spaces R1,
and the filtered hat-module variant with its stabilization certificate.

Ring elements are sparse dicts keyed by lattice points.  All quotients
are handled degree by degree through echelon bases, so dimensions and
canonical representatives come out of the same computation.
"""

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import DegenerateCoefficients, StabilizationFailed
from .lattice import dot, faces, padd, points_at_degree, span_coords
from .linalg import Echelon

MAX_RESAMPLE = 32


@dataclass(frozen=True)
class CoefficientFunction:
    """Exact rational map on the degree-one points of one cone of a pair."""
    cone: object
    lam: tuple                      # height functional of this side
    values: tuple                   # sorted ((point, Fraction), ...)
    _map: dict = field(default=None, compare=False, repr=False)

    def mapping(self):
        m = object.__getattribute__(self, "_map")
        if m is None:
            m = dict(self.values)
            object.__setattr__(self, "_map", m)
        return m

    def __call__(self, point):
        return self.mapping()[point]

    def domain(self):
        return [p for p, _ in self.values]

    def scaled(self, c):
        c = Fraction(c)
        return CoefficientFunction(
            self.cone, self.lam,
            tuple((p, c * v) for p, v in self.values))


def coefficient_function(pair, side, mapping):
    """Build a coefficient function for side "f" (on K) or "g" (on K_dual).

    The domain must be exactly the degree-one points of that cone.
    """
    if side == "f":
        cone, lam = pair.cone, pair.deg_dual
        delta = pair.delta()
    elif side == "g":
        cone, lam = pair.dual, pair.deg
        delta = pair.delta_dual()
    else:
        raise ValueError("side must be 'f' or 'g'")
    mapping = {tuple(p): Fraction(v) for p, v in dict(mapping).items()}
    if set(mapping) != set(delta):
        raise ValueError("domain must equal the degree-one points")
    return CoefficientFunction(cone, lam,
                               tuple(sorted(mapping.items())))


def random_coefficients(pair, side, seed, certify=True):
    """Seeded small nonzero integer coefficients, certified nondegenerate.

    Resamples (deterministically) on certificate failure, up to
    MAX_RESAMPLE attempts.
    """
    # string seeding is hashed with sha512, stable across processes
    rng = random.Random("stringykit:%s:%s" % (side, seed))
    delta = pair.delta() if side == "f" else pair.delta_dual()
    for _ in range(MAX_RESAMPLE):
        mapping = {}
        for p in delta:
            v = 0
            while v == 0:
                v = rng.randint(-5, 5)
            mapping[p] = Fraction(v)
        f = coefficient_function(pair, side, mapping)
        if not certify or is_nondegenerate(pair, f):
            return f
    raise DegenerateCoefficients(
        "no nondegenerate sample found in %d draws" % MAX_RESAMPLE)


def _delta_in_face(face, f):
    """Degree-one points of the cone lying on the face."""
    normals = face.cone.facet_normals
    return [m for m in f.domain()
            if all(dot(m, normals[j]) == 0 for j in face.active)]


def log_derivative_elements(face, f):
    """One degree-one element per basis functional mu on span(face):
    sum over m in the face's degree-one points of f(m) mu(m) [m]."""
    if face.dim == 0:
        return []
    pts = _delta_in_face(face, f)
    coords = {m: span_coords(face, m) for m in pts}
    out = []
    for j in range(face.dim):
        elem = {}
        for m in pts:
            c = f(m) * coords[m][j]
            if c:
                elem[m] = c
        out.append(elem)
    return out


class GradedQuotient:
    """C[face]/I_{f,face} truncated at degree D, with reduction maps."""

    def __init__(self, face, f, D, generators=None):
        self.face = face
        self.f = f
        self.D = D
        self.lam = f.lam
        gens = log_derivative_elements(face, f) \
            if generators is None else generators
        self.generators = gens
        self.points = {k: points_at_degree(face, k, self.lam)
                       for k in range(D + 1)}
        self._ideal = {}
        self.dims = {}
        for k in range(D + 1):
            ech = Echelon()
            if k >= 1:
                for c in self.points[k - 1]:
                    for gen in gens:
                        vec = {padd(m, c): v for m, v in gen.items()}
                        if vec:
                            ech.insert(vec)
            self._ideal[k] = ech
            self.dims[k] = len(self.points[k]) - ech.rank
        self.ideal_dims = {k: self._ideal[k].rank for k in range(D + 1)}

    def reduce(self, k, vec):
        """Canonical representative of vec modulo I_k."""
        rem, _ = self._ideal[k].reduce(vec)
        return rem


def quotient_dims(face, f, D=None):
    """Graded quotient of the face's semigroup ring by the log-derivative
    ideal; D defaults to dim(face) + 2."""
    if D is None:
        D = face.dim + 2
    if D < face.dim + 2:
        raise ValueError("need D >= dim + 2")
    return GradedQuotient(face, f, D)


@dataclass(frozen=True)
class R1Space:
    """Graded dimensions and representatives of the interior image."""
    dims: tuple          # sorted ((degree, dim), ...)
    reps: tuple          # sorted ((degree, (vector, ...)), ...)

    def dims_dict(self):
        return {k: d for k, d in self.dims if d}

    def total(self):
        return sum(d for _, d in self.dims)


def r1(face, f, D=None):
    """Image of the interior part in the quotient, degree by degree."""
    if face.dim == 0:
        zero = (0,) * face.cone.ambient_rank
        return R1Space(dims=((0, 1),), reps=((0, ({zero: Fraction(1)},)),))
    q = quotient_dims(face, f, D)
    img = Echelon()
    dims = []
    reps = []
    for k in range(q.D + 1):
        level_reps = []
        before = img.rank
        for p in points_at_degree(face, k, q.lam, interior_only=True):
            rem = q.reduce(k, {p: Fraction(1)})
            if not rem:
                continue
            # supports at distinct degrees are disjoint, one echelon is fine
            if img.insert(dict(rem)) is not None:
                level_reps.append(rem)
        dims.append((k, img.rank - before))
        reps.append((k, tuple(level_reps)))
    return R1Space(tuple(dims), tuple(reps))


def _hilbert_numerator(face, lam, upto):
    """Coefficients of (1-t)^dim * Hilb(C[face]) through degree `upto`."""
    d = face.dim
    counts = [len(points_at_degree(face, k, lam)) for k in range(upto + 1)]
    binom = [1]
    for i in range(d):
        binom = [a - b for a, b in zip(binom + [0], [0] + binom)]
    # binom now holds (1-t)^d coefficients with signs
    out = []
    for k in range(upto + 1):
        s = 0
        for i, b in enumerate(binom):
            if i <= k:
                s += b * counts[k - i]
        out.append(s)
    return out


def face_is_nondegenerate(face, f):
    """Artinian certificate on one face: the quotient vanishes in degrees
    dim+1 and dim+2 and matches the Hilbert numerator through degree dim."""
    d = face.dim
    q = quotient_dims(face, f, d + 2)
    if q.dims[d + 1] != 0 or q.dims[d + 2] != 0:
        return False
    numer = _hilbert_numerator(face, f.lam, d)
    return all(q.dims[k] == numer[k] for k in range(d + 1))


def is_nondegenerate(pair, f):
    """Nondegeneracy of a coefficient function: every face of its cone
    passes the Artinian/Hilbert-series certificate."""
    poset = faces(f.cone)
    return all(face_is_nondegenerate(face, f) for face in poset)


@dataclass(frozen=True)
class HatModuleElement:
    """Finite rational combination of hat-monomials supported on a face."""
    face: object
    coeffs: tuple             # sorted ((point, value), ...)

    def mapping(self):
        return dict(self.coeffs)

    def level(self, lam):
        return max((dot(p, lam) for p, _ in self.coeffs), default=-1)

    @classmethod
    def monomial(cls, face, point, value=1):
        return cls(face, ((tuple(point), Fraction(value)),))


def _hat_action_vec(face, g, mu, vec):
    """mu . vec for the deformed module structure, as sparse dicts.

    mu [c] = sum over n in the face's degree-one points of
    g(n) mu(n) [n+c]  +  mu(c) [c].
    """
    pts = _delta_in_face(face, g)
    mu_of = {n: sum(m * c for m, c in zip(mu, span_coords(face, n)))
             for n in pts}
    out = {}
    for c, v in vec.items():
        for n in pts:
            w = g(n) * mu_of[n] * v
            if w:
                key = padd(n, c)
                nv = out.get(key, 0) + w
                if nv:
                    out[key] = nv
                else:
                    out.pop(key, None)
        muc = sum(m * cc for m, cc in zip(mu, span_coords(face, c)))
        if muc:
            nv = out.get(c, 0) + muc * v
            if nv:
                out[c] = nv
            else:
                out.pop(c, None)
    return out


def hat_action(face, g, mu, v):
    """Action of the linear functional mu (coordinates in the span basis)
    on a hat-module element."""
    vec = _hat_action_vec(face, g, tuple(mu), v.mapping())
    return HatModuleElement(face, tuple(sorted(vec.items())))


class HatModel:
    """Truncated model of the hat module modulo the irrelevant ideal.

    Spans mu.[c] over all points c of level <= D-1 and all basis
    functionals mu; class_reduce gives canonical coset representatives
    inside the span of points of level <= D.  Generic over the scalar
    ring (rationals or dual rationals) through the g values.
    """

    def __init__(self, face, g, D):
        self.face = face
        self.g = g
        self.D = D
        self.lam = g.lam
        pts = []
        for k in range(D + 1):
            pts.extend(points_at_degree(face, k, self.lam))
        self.points = pts
        self.ideal = Echelon()
        if face.dim > 0:
            for k in range(D):
                for c in points_at_degree(face, k, self.lam):
                    for j in range(face.dim):
                        mu = tuple(1 if i == j else 0
                                   for i in range(face.dim))
                        vec = _hat_action_vec(face, g, mu,
                                              {c: Fraction(1)})
                        if vec:
                            self.ideal.insert(vec)

    def class_reduce(self, vec):
        rem, _ = self.ideal.reduce(vec)
        return rem

    def interior_level_data(self):
        """Per level: interior monomials and their surviving classes."""
        img = Echelon()
        out = []
        if self.face.dim == 0:
            zero = (0,) * self.face.cone.ambient_rank
            return [(0, [(zero, {zero: Fraction(1)})])]
        for k in range(self.D + 1):
            level = []
            for p in points_at_degree(self.face, k, self.lam,
                                      interior_only=True):
                rem = self.class_reduce({p: Fraction(1)})
                if rem and img.insert(dict(rem)) is not None:
                    level.append((p, rem))
            out.append((k, level))
        return out


def r1_hat(face, g, D=None):
    """Filtered interior image in the hat module, certified against the
    graded computation (per filtration level) at two truncations."""
    if D is None:
        D = face.dim + 2
    if D < face.dim + 2:
        raise ValueError("need D >= dim + 2")
    oracle = r1(face, g).dims_dict()
    models = {}
    for trunc in (D, D - 1):
        model = HatModel(face, g, trunc)
        level_dims = {k: len(v) for k, v in model.interior_level_data() if v}
        if level_dims != oracle:
            raise StabilizationFailed(
                "hat dims %r at truncation %d do not match graded dims %r"
                % (level_dims, trunc, oracle))
        models[trunc] = model
    data = models[D].interior_level_data()
    dims = tuple((k, len(v)) for k, v in data)
    reps = tuple((k, tuple(rem for _, rem in v)) for k, v in data)
    return R1Space(dims, reps)
