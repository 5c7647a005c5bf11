"""Lattices, pointed rational cones, duality, faces and Gorenstein pairs.

Lattice points are plain tuples of ints.  Cones are full-dimensional and
pointed; everything lower-dimensional lives as a Face of its owner cone,
identified by the set of facets it saturates.  Facet enumeration is the
double description method seeded from a simplicial subcone, which is
plenty at desk scale (rank <= 6, a few dozen rays).
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import ceil, floor, gcd

from .errors import (DegeneratePolytope, NotFullDimensional, NotGorenstein,
                     NotPointed, UnboundedSlice)
from .linalg import exact_rank, solve_exact


def dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def padd(a, b):
    return tuple(x + y for x, y in zip(a, b))


def primitive(v):
    """Divide by the gcd of the coordinates; direction is preserved."""
    g = 0
    for x in v:
        g = gcd(g, x)
    if g == 0:
        raise ValueError("zero vector has no primitive form")
    return tuple(x // g for x in v)


def qrank(vectors):
    """Rank over Q of a list of integer vectors."""
    rows = []
    for v in vectors:
        row = {i: x for i, x in enumerate(v) if x}
        if row:
            rows.append(row)
    return exact_rank(rows)


def integer_kernel(rows, n):
    """Basis of {x in Z^n : <row, x> = 0 for all rows}.

    Integer column reduction with a tracked unimodular transform; the
    kernel of an integer matrix is automatically saturated.
    """
    m = len(rows)
    cols = [[rows[i][j] for i in range(m)] for j in range(n)]
    unim = [[int(i == j) for i in range(n)] for j in range(n)]
    r = 0
    for i in range(m):
        while r < n:
            nz = [j for j in range(r, n) if cols[j][i]]
            if not nz:
                break
            j0 = min(nz, key=lambda j: (abs(cols[j][i]), j))
            cols[r], cols[j0] = cols[j0], cols[r]
            unim[r], unim[j0] = unim[j0], unim[r]
            a = cols[r][i]
            clean = True
            for j in range(r + 1, n):
                b = cols[j][i]
                if b:
                    q = b // a
                    if q:
                        cols[j] = [x - q * y for x, y in zip(cols[j], cols[r])]
                        unim[j] = [x - q * y for x, y in zip(unim[j], unim[r])]
                    if cols[j][i]:
                        clean = False
            if clean:
                r += 1
                break
    return [tuple(unim[j]) for j in range(r, n)]


def hnf_rows(rows):
    """Canonical (row Hermite) basis of the lattice spanned by the rows."""
    mat = [list(r) for r in rows]
    if not mat:
        return ()
    n = len(mat[0])
    m = len(mat)
    r = 0
    for c in range(n):
        while True:
            nz = [i for i in range(r, m) if mat[i][c]]
            if not nz:
                break
            i0 = min(nz, key=lambda i: (abs(mat[i][c]), i))
            mat[r], mat[i0] = mat[i0], mat[r]
            a = mat[r][c]
            clean = True
            for i in range(r + 1, m):
                b = mat[i][c]
                if b:
                    q = b // a
                    if q:
                        mat[i] = [x - q * y for x, y in zip(mat[i], mat[r])]
                    if mat[i][c]:
                        clean = False
            if clean:
                if mat[r][c] < 0:
                    mat[r] = [-x for x in mat[r]]
                a = mat[r][c]
                for i in range(r):
                    q = mat[i][c] // a
                    if q:
                        mat[i] = [x - q * y for x, y in zip(mat[i], mat[r])]
                r += 1
                break
    return tuple(tuple(row) for row in mat[:r])


def span_lattice_basis(rays, n):
    """Basis of span(rays) intersected with Z^n (the saturated lattice)."""
    if not rays:
        return ()
    perp = integer_kernel(rays, n)
    return hnf_rows(integer_kernel(perp, n))


_span_coord_cache = {}


def span_coords_for(basis, point):
    """Integer coordinates of a lattice point in a saturated span basis."""
    key = (basis, point)
    got = _span_coord_cache.get(key)
    if got is not None:
        return got
    n = len(basis[0])
    rows = [[basis[i][k] for i in range(len(basis))] for k in range(n)]
    x = solve_exact(rows, list(point))
    if x is None:
        raise ValueError("point outside the span")
    assert all(v.denominator == 1 for v in x)
    got = tuple(int(v) for v in x)
    _span_coord_cache[key] = got
    return got


@dataclass(frozen=True)
class Cone:
    """Full-dimensional pointed rational cone.

    rays and facet_normals are primitive, irredundant and lex-sorted, so
    equal cones compare equal.  Every ray pairs >= 0 with every normal.
    """
    rays: tuple
    facet_normals: tuple
    ambient_rank: int

    def contains(self, point):
        return all(dot(point, h) >= 0 for h in self.facet_normals)


def _simplicial_seed(rays, n):
    """Greedy choice of n linearly independent rays; None if rank < n."""
    chosen = []
    for r in rays:
        if qrank(chosen + [r]) == len(chosen) + 1:
            chosen.append(r)
            if len(chosen) == n:
                return chosen
    return None


def _dual_basis(seed, n):
    """Primitive h_j with <seed_i, h_j> = delta_ij."""
    out = []
    for j in range(n):
        rhs = [1 if i == j else 0 for i in range(n)]
        x = solve_exact([list(s) for s in seed], rhs)
        den = 1
        for v in x:
            den = den * v.denominator // gcd(den, v.denominator)
        out.append(primitive(tuple(int(v * den) for v in x)))
    return out


def cone_from_rays(rays):
    """Cone generated by the rays, with facet normals by double description.

    Raises NotPointed if the generated cone contains a line and
    NotFullDimensional if the rays do not span the ambient space.
    """
    rays = list(rays)
    if not rays:
        raise ValueError("need at least one ray")
    n = len(rays[0])
    if any(len(r) != n for r in rays):
        raise ValueError("rays of mixed length")
    prim = sorted(set(primitive(tuple(r)) for r in rays))
    seed = _simplicial_seed(prim, n)
    if seed is None:
        # not full-dimensional; still report a line if there is one
        basis = span_lattice_basis(prim, n)
        coords = [span_coords_for(basis, r) for r in prim]
        cone_from_rays(coords)
        raise NotFullDimensional("rays span a proper subspace")

    # extreme rays of the dual cone, refined one halfspace at a time
    ext = _dual_basis(seed, n)
    seed_set = set(seed)
    processed = list(seed)
    tight = {}
    for j, h in enumerate(ext):
        tight[h] = frozenset(i for i, s in enumerate(seed) if dot(s, h) == 0)
    rest = [r for r in prim if r not in seed_set]
    for r in rest:
        k = len(processed)
        vals = {h: dot(r, h) for h in ext}
        plus = [h for h in ext if vals[h] > 0]
        zero = [h for h in ext if vals[h] == 0]
        minus = [h for h in ext if vals[h] < 0]
        fresh = []
        for p in plus:
            for q in minus:
                common = tight[p] & tight[q]
                if qrank([processed[i] for i in common]) != n - 2:
                    continue
                w = tuple(vals[p] * qq - vals[q] * pp for pp, qq in zip(p, q))
                fresh.append(primitive(w))
        processed.append(r)
        new_ext = []
        new_tight = {}
        for h in plus:
            new_ext.append(h)
            new_tight[h] = tight[h]
        for h in zero:
            new_ext.append(h)
            new_tight[h] = tight[h] | {k}
        for w in fresh:
            if w in new_tight:
                continue
            new_ext.append(w)
            new_tight[w] = frozenset(
                i for i, s in enumerate(processed) if dot(s, w) == 0)
        ext = new_ext
        tight = new_tight
    if not ext or qrank(ext) < n:
        raise NotPointed("generated cone contains a line")
    normals = tuple(sorted(ext))

    # extremality filter on the input rays
    keep = []
    for r in prim:
        sat = [h for h in normals if dot(r, h) == 0]
        if qrank(sat) == n - 1:
            keep.append(r)
    out_rays = tuple(sorted(keep))
    for r in out_rays:
        assert all(dot(r, h) >= 0 for h in normals)
    return Cone(out_rays, normals, n)


def dual_cone(c):
    """Swap rays and facet normals; an involution on valid cones."""
    if qrank(c.rays) < c.ambient_rank:
        raise NotFullDimensional("cone is not full-dimensional")
    return Cone(tuple(sorted(c.facet_normals)), tuple(sorted(c.rays)),
                c.ambient_rank)


def cone_over_polytope(vertices):
    """Cone over the polytope placed at height one."""
    verts = [tuple(v) for v in vertices]
    if not verts:
        raise DegeneratePolytope("no vertices")
    n = len(verts[0])
    if any(len(v) != n for v in verts):
        raise ValueError("vertices of mixed length")
    diffs = [tuple(a - b for a, b in zip(v, verts[0])) for v in verts[1:]]
    if qrank([d for d in diffs if any(d)]) < n:
        raise DegeneratePolytope("vertices do not affinely span the space")
    return cone_from_rays([v + (1,) for v in verts])


@dataclass(frozen=True)
class Face:
    """Face of a cone, identified by the facets it saturates."""
    cone: Cone
    active: frozenset
    rays: tuple
    dim: int
    span_basis: tuple

    def key(self):
        return tuple(sorted(self.active))

    def __repr__(self):
        return "Face(dim=%d, rays=%s)" % (self.dim, list(self.rays))


def _make_face(cone, ray_tuple):
    rays = tuple(sorted(ray_tuple))
    nf = cone.facet_normals
    if rays:
        active = frozenset(
            j for j in range(len(nf)) if all(dot(r, nf[j]) == 0 for r in rays))
    else:
        active = frozenset(range(len(nf)))
    basis = span_lattice_basis(rays, cone.ambient_rank)
    return Face(cone, active, rays, len(basis), basis)


class FacePoset:
    """All faces of a cone ordered by inclusion; Eulerian with rank = dim."""

    def __init__(self, cone):
        self.cone = cone
        nf = cone.facet_normals
        tight = {r: frozenset(j for j in range(len(nf)) if dot(r, nf[j]) == 0)
                 for r in cone.rays}
        seen = {}
        queue = [tuple(cone.rays)]
        while queue:
            ray_tuple = queue.pop()
            rays = tuple(sorted(ray_tuple))
            if rays:
                active = frozenset.intersection(*[tight[r] for r in rays])
            else:
                active = frozenset(range(len(nf)))
            if active in seen:
                continue
            seen[active] = rays
            for j in range(len(nf)):
                if j not in active:
                    queue.append(tuple(r for r in rays if j in tight[r]))
        self.faces = tuple(sorted(
            (_make_face(cone, rays) for rays in seen.values()),
            key=lambda f: (f.dim, f.rays)))
        self.by_active = {f.active: f for f in self.faces}
        self.by_rays = {f.rays: f for f in self.faces}
        self.zero = self.by_rays[()]
        self.top = self.by_rays[tuple(sorted(cone.rays))]

    def __iter__(self):
        return iter(self.faces)

    def __len__(self):
        return len(self.faces)

    def leq(self, f, g):
        return f.active >= g.active

    def meet(self, f, g):
        rays = tuple(sorted(set(f.rays) & set(g.rays)))
        return self.by_rays[rays]

    def interval(self, a, b):
        return [x for x in self.faces if self.leq(a, x) and self.leq(x, b)]

    def is_eulerian(self):
        """Every interval of length >= 1 has equal even and odd rank counts."""
        for a in self.faces:
            for b in self.faces:
                if not self.leq(a, b) or a is b:
                    continue
                s = sum((-1) ** x.dim for x in self.interval(a, b))
                if s != 0:
                    return False
        return True


@lru_cache(maxsize=None)
def faces(cone):
    """The face poset of a cone (cached: cones are immutable)."""
    return FacePoset(cone)


def _solve_height_one(rays):
    """Integral x with <ray, x> = 1 for all rays, or None."""
    x = solve_exact([list(r) for r in rays], [1] * len(rays))
    if x is None or any(v.denominator != 1 for v in x):
        return None
    return tuple(int(v) for v in x)


@dataclass(frozen=True)
class GorensteinPair:
    """Dual reflexive Gorenstein cones with their degree elements."""
    cone: Cone
    dual: Cone
    deg: tuple
    deg_dual: tuple
    rank: int

    def poset(self):
        return faces(self.cone)

    def dual_poset(self):
        return faces(self.dual)

    def grading(self, cone):
        """Height functional for lattice points of the given side."""
        if cone == self.cone:
            return self.deg_dual
        if cone == self.dual:
            return self.deg
        raise ValueError("cone does not belong to this pair")

    def height(self, cone, point):
        return dot(point, self.grading(cone))

    def delta(self):
        """Degree-one points of K (the support of f)."""
        return points_at_degree(self.poset().top, 1, self.deg_dual)

    def delta_dual(self):
        return points_at_degree(self.dual_poset().top, 1, self.deg)

    def swap(self):
        return GorensteinPair(self.dual, self.cone, self.deg_dual, self.deg,
                              self.rank)


def make_gorenstein_pair(K):
    """Degree elements from the two height-one ray systems.

    Raises NotGorenstein when either system has no integral solution.
    """
    deg_dual = _solve_height_one(K.rays)
    if deg_dual is None:
        raise NotGorenstein("rays of the cone admit no integral height-one "
                            "functional")
    Kd = dual_cone(K)
    deg = _solve_height_one(Kd.rays)
    if deg is None:
        raise NotGorenstein("rays of the dual cone admit no integral "
                            "height-one functional")
    return GorensteinPair(K, Kd, deg, deg_dual, K.ambient_rank)


def annihilator_face(face, dual_poset):
    """The face of the dual cone pairing to zero with the given face."""
    rays = tuple(sorted(
        s for s in dual_poset.cone.rays
        if all(dot(r, s) == 0 for r in face.rays)))
    return dual_poset.by_rays[rays]


def dual_face(pair, face):
    """theta* = Ann(theta) intersected with the other cone of the pair."""
    if face.cone == pair.cone:
        target = pair.dual_poset()
    elif face.cone == pair.dual:
        target = pair.poset()
    else:
        raise ValueError("face does not belong to this pair")
    return annihilator_face(face, target)


def span_coords(face, point):
    """Integer coordinates of a lattice point of span(face) in span_basis."""
    if face.dim == 0:
        if any(point):
            raise ValueError("point outside the zero face")
        return ()
    return span_coords_for(face.span_basis, point)


def points_at_degree(face, k, lam, interior_only=False):
    """Lattice points x of the face with <x, lam> = k, lex-sorted.

    interior_only restricts to the relative interior.  Raises
    UnboundedSlice unless lam is strictly positive on every ray.
    """
    cone = face.cone
    n = cone.ambient_rank
    zero = (0,) * n
    if k < 0:
        return []
    if face.dim == 0:
        return [zero] if k == 0 else []
    heights = [dot(r, lam) for r in face.rays]
    if any(h <= 0 for h in heights):
        raise UnboundedSlice("grading functional not positive on a ray")
    if k == 0:
        return [] if interior_only else [zero]
    lo = [None] * n
    hi = [None] * n
    for r, h in zip(face.rays, heights):
        for j in range(n):
            v = Fraction(k * r[j], h)
            lo[j] = v if lo[j] is None else min(lo[j], v)
            hi[j] = v if hi[j] is None else max(hi[j], v)
    ranges = [range(ceil(lo[j]), floor(hi[j]) + 1) for j in range(n)]
    normals = cone.facet_normals
    active = face.active
    out = []
    for x in product(*ranges):
        if dot(x, lam) != k:
            continue
        ok = True
        for j, h in enumerate(normals):
            v = dot(x, h)
            if j in active:
                if v != 0:
                    ok = False
                    break
            elif v < 0 or (interior_only and v == 0):
                ok = False
                break
        if ok:
            out.append(x)
    return out
