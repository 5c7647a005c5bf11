"""Minimal flabby locally free sheaves on fans of dual-face pairs, their
global sections W, the contraction/wedge differential on W tensor the
exterior algebra, and the vanishing/one-class verifiers.

The fan lives in M + N: cells are pairs (theta, sigma) of faces of the
two dual cones with sigma inside the annihilator of theta.  Sections over
a cell are free modules over the polynomial functions on its span; the
minimal sheaf is built by induction over cells in increasing dimension,
taking compatible families over the boundary and a free cover of their
quotient by positive-degree multiples.  Everything is stored bigraded by
(x-degree, y-degree) and truncated at total degree D; the recursion is
degreewise exact below the truncation.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations

from .errors import TruncationTooSmall
from .gpoly import ih_dims
from .lattice import (annihilator_face, dot, dual_cone, faces, span_coords)
from .linalg import Echelon, exact_rank, kernel_basis


@dataclass(frozen=True)
class Cell:
    theta: object
    sigma: object

    @property
    def dim(self):
        return self.theta.dim + self.sigma.dim

    def key(self):
        return (self.theta.key(), self.sigma.key())

    def __repr__(self):
        return "Cell(%d+%d)" % (self.theta.dim, self.sigma.dim)


class FanSpace:
    """Fan of dual-face pairs (theta, sigma) with sigma inside theta*."""

    def __init__(self, cone, dual=None):
        self.cone = cone
        self.dual = dual_cone(cone) if dual is None else dual
        self.poset = faces(self.cone)
        self.dual_poset = faces(self.dual)
        self.rank = cone.ambient_rank
        cells = []
        for theta in self.poset:
            tstar = annihilator_face(theta, self.dual_poset)
            for sigma in self.dual_poset:
                if self.dual_poset.leq(sigma, tstar):
                    cells.append(Cell(theta, sigma))
        self.cells = tuple(sorted(cells, key=lambda c: (c.dim, c.key())))
        self.by_key = {c.key(): c for c in self.cells}
        self.maximal = tuple(
            c for c in self.cells
            if c.sigma == annihilator_face(c.theta, self.dual_poset))

    def zero_cell(self):
        return Cell(self.poset.zero, self.dual_poset.zero)

    def contains_cell(self, cell):
        return cell.key() in self.by_key

    def leq(self, c1, c2):
        return (self.poset.leq(c1.theta, c2.theta)
                and self.dual_poset.leq(c1.sigma, c2.sigma))

    def meet(self, c1, c2):
        return Cell(self.poset.meet(c1.theta, c2.theta),
                    self.dual_poset.meet(c1.sigma, c2.sigma))

    def facets_of(self, cell):
        """Cells of one dimension less contained in the cell."""
        out = []
        for theta in self.poset:
            if theta.dim == cell.theta.dim - 1 and \
                    self.poset.leq(theta, cell.theta):
                out.append(Cell(theta, cell.sigma))
        for sigma in self.dual_poset:
            if sigma.dim == cell.sigma.dim - 1 and \
                    self.dual_poset.leq(sigma, cell.sigma):
                out.append(Cell(cell.theta, sigma))
        return sorted(out, key=lambda c: c.key())


def _monomials(nvars, total):
    if nvars == 0:
        return [()] if total == 0 else []
    if total == 0:
        return [(0,) * nvars]
    out = []
    for first in range(total + 1):
        for rest in _monomials(nvars - 1, total - first):
            out.append((first,) + rest)
    return sorted(out)


@lru_cache(maxsize=None)
def _monomials_cached(nvars, total):
    return tuple(_monomials(nvars, total))


class MinimalSheaf:
    """Minimal flabby locally free sheaf originating at a cell, with all
    section data truncated at total degree D."""

    def __init__(self, fan, origin, D):
        if D < 0:
            raise TruncationTooSmall("negative truncation degree")
        if not fan.contains_cell(origin):
            raise ValueError("origin is not a cell of the fan")
        self.fan = fan
        self.origin = fan.by_key[origin.key()]
        self.D = D
        self.support = tuple(
            c for c in fan.cells if fan.leq(self.origin, c))
        self._support_keys = {c.key() for c in self.support}
        self.gens = {}            # cell key -> tuple of (p, q)
        self.lifts = {}           # cell key -> list of {facet key: vec}
        self._basis_cache = {}
        self._restr_cache = {}
        self._gamma_cache = {}
        self._build()

    # -- free-module bookkeeping ------------------------------------

    def gen_bidegrees(self, cell):
        return self.gens.get(cell.key(), ())

    def basis_at(self, cell, a, b):
        key = (cell.key(), a, b)
        got = self._basis_cache.get(key)
        if got is not None:
            return got
        out = []
        xd, yd = cell.theta.dim, cell.sigma.dim
        for gi, (p, q) in enumerate(self.gens.get(cell.key(), ())):
            if a < p or b < q:
                continue
            for um in _monomials_cached(xd, a - p):
                for vm in _monomials_cached(yd, b - q):
                    out.append((um, vm, gi))
        out = tuple(sorted(out, key=lambda e: (e[2], e[0], e[1])))
        self._basis_cache[key] = (out, {e: i for i, e in enumerate(out)})
        return self._basis_cache[key]

    def dim_at(self, cell, a, b):
        if cell.key() not in self._support_keys:
            return 0
        return len(self.basis_at(cell, a, b)[0])

    def _mul_var(self, cell, side, j, vec, a, b):
        """Multiply by the j-th u- (side=0) or v- (side=1) functional."""
        basis_src = self.basis_at(cell, a, b)[0]
        if side == 0:
            _, index_dst = self.basis_at(cell, a + 1, b)
        else:
            _, index_dst = self.basis_at(cell, a, b + 1)
        out = {}
        for i, val in vec.items():
            um, vm, gi = basis_src[i]
            if side == 0:
                um = um[:j] + (um[j] + 1,) + um[j + 1:]
            else:
                vm = vm[:j] + (vm[j] + 1,) + vm[j + 1:]
            t = index_dst[(um, vm, gi)]
            out[t] = out.get(t, 0) + val
        return {t: v for t, v in out.items() if v}

    def mul_linear(self, cell, side, coeffs, vec, a, b):
        """Multiply by sum_j coeffs[j] * (j-th functional of the cell)."""
        out = {}
        for j, c in coeffs:
            if not c:
                continue
            part = self._mul_var(cell, side, j, vec, a, b)
            for t, v in part.items():
                nv = out.get(t, 0) + c * v
                if nv:
                    out[t] = nv
                else:
                    out.pop(t, None)
        return out

    # -- functional restriction coefficients -------------------------

    @lru_cache(maxsize=None)
    def _fun_restr(self, big_face_key, small_face_key, side):
        big = self._face_by_key(big_face_key, side)
        small = self._face_by_key(small_face_key, side)
        rows = []
        for i in range(big.dim):
            rows.append([])
        for j, bv in enumerate(small.span_basis):
            coords = span_coords(big, bv)
            for i in range(big.dim):
                if coords[i]:
                    rows[i].append((j, coords[i]))
        return tuple(tuple(r) for r in rows)

    def _face_by_key(self, key, side):
        poset = self.fan.poset if side == 0 else self.fan.dual_poset
        return poset.by_active[frozenset(key)]

    # -- restriction matrices ----------------------------------------

    def restr_cols(self, cell, face_cell, a, b):
        """Columns of the restriction map L(cell) -> L(face_cell) at (a,b)."""
        key = (cell.key(), face_cell.key(), a, b)
        got = self._restr_cache.get(key)
        if got is not None:
            return got
        basis, _ = self.basis_at(cell, a, b)
        if face_cell.key() not in self._support_keys:
            cols = [dict() for _ in basis]
        elif face_cell.key() == cell.key():
            cols = [{i: Fraction(1)} for i in range(len(basis))]
        else:
            facets = [f for f in self.fan.facets_of(cell)
                      if f.key() in self._support_keys
                      and self.fan.leq(face_cell, f)]
            if not facets:
                raise ValueError("no support facet between cells")
            mid = facets[0]
            first = self._restr_to_facet(cell, mid, a, b)
            if mid.key() == face_cell.key():
                cols = first
            else:
                second = self.restr_cols(mid, face_cell, a, b)
                cols = []
                for col in first:
                    acc = {}
                    for l, v in col.items():
                        for t, w in second[l].items():
                            nv = acc.get(t, 0) + v * w
                            if nv:
                                acc[t] = nv
                            else:
                                acc.pop(t, None)
                    cols.append(acc)
        self._restr_cache[key] = cols
        return cols

    def _restr_to_facet(self, cell, facet, a, b):
        basis, _ = self.basis_at(cell, a, b)
        urestr = self._fun_restr(cell.theta.key(), facet.theta.key(), 0)
        vrestr = self._fun_restr(cell.sigma.key(), facet.sigma.key(), 1)
        lifts = self.lifts[cell.key()]
        gdegs = self.gens[cell.key()]
        cols = []
        for (um, vm, gi) in basis:
            p, q = gdegs[gi]
            vec = dict(lifts[gi].get(facet.key(), {}))
            ca, cb = p, q
            for j, e in enumerate(um):
                for _ in range(e):
                    vec = self.mul_linear(facet, 0, urestr[j], vec, ca, cb)
                    ca += 1
            for j, e in enumerate(vm):
                for _ in range(e):
                    vec = self.mul_linear(facet, 1, vrestr[j], vec, ca, cb)
                    cb += 1
            cols.append(vec)
        return cols

    # -- compatible families ------------------------------------------

    def section_layout(self, cells, a, b):
        layout = []
        off = 0
        for c in cells:
            d = self.dim_at(c, a, b)
            layout.append((c, off, d))
            off += d
        return layout, off

    def compatible_sections(self, cells, a, b):
        """Kernel of the pairwise-agreement constraints over the cells."""
        layout, total = self.section_layout(cells, a, b)
        if total == 0:
            return layout, []
        columns = [dict() for _ in range(total)]
        rowkey = 0
        for i1 in range(len(cells)):
            for i2 in range(i1 + 1, len(cells)):
                c1, off1, d1 = layout[i1]
                c2, off2, d2 = layout[i2]
                if d1 == 0 and d2 == 0:
                    continue
                m = self.fan.meet(c1, c2)
                dm = self.dim_at(m, a, b)
                if dm == 0:
                    continue
                cols1 = self.restr_cols(c1, m, a, b)
                cols2 = self.restr_cols(c2, m, a, b)
                for l in range(d1):
                    for t, v in cols1[l].items():
                        columns[off1 + l][rowkey + t] = v
                for l in range(d2):
                    for t, v in cols2[l].items():
                        columns[off2 + l][rowkey + t] = \
                            columns[off2 + l].get(rowkey + t, 0) - v
                rowkey += dm
        return layout, kernel_basis(columns)

    def gamma_boundary(self, cell, a, b):
        key = (cell.key(), a, b)
        got = self._gamma_cache.get(key)
        if got is None:
            facets = [f for f in self.fan.facets_of(cell)
                      if f.key() in self._support_keys]
            got = (facets,) + self.compatible_sections(facets, a, b)
            self._gamma_cache[key] = got
        return got

    # -- construction --------------------------------------------------

    def _build(self):
        for cell in self.support:
            if cell.key() == self.origin.key():
                self.gens[cell.key()] = ((0, 0),)
                self.lifts[cell.key()] = [{}]
                continue
            gens = []
            lifts = []
            for s in range(self.D + 1):
                for a in range(s + 1):
                    b = s - a
                    facets, layout, gamma = self.gamma_boundary(cell, a, b)
                    if not gamma:
                        continue
                    ech = Echelon()
                    self._insert_positive_span(cell, facets, layout, a, b,
                                               ech)
                    for vec in gamma:
                        piv = ech.insert(dict(vec))
                        if piv is None:
                            continue
                        row = dict(ech.rows[piv])
                        gens.append((a, b))
                        lifts.append(self._split(layout, row))
            self.gens[cell.key()] = tuple(gens)
            self.lifts[cell.key()] = lifts
            self._basis_cache = {k: v for k, v in self._basis_cache.items()
                                 if k[0] != cell.key()}

    def _insert_positive_span(self, cell, facets, layout, a, b, ech):
        for side, da, db in ((0, a - 1, b), (1, a, b - 1)):
            if da < 0 or db < 0:
                continue
            nvars = cell.theta.dim if side == 0 else cell.sigma.dim
            if nvars == 0:
                continue
            _, low_layout, low_gamma = self.gamma_boundary(cell, da, db)
            for j in range(nvars):
                restr = {}
                for f in facets:
                    fk = f.theta.key() if side == 0 else f.sigma.key()
                    ck = cell.theta.key() if side == 0 else cell.sigma.key()
                    restr[f.key()] = self._fun_restr(ck, fk, side)[j]
                for vec in low_gamma:
                    out = {}
                    for (f, off, d), (f2, off2, d2) in zip(low_layout,
                                                           layout):
                        comp = {i - off: v for i, v in vec.items()
                                if off <= i < off + d}
                        if not comp:
                            continue
                        part = self.mul_linear(f, side, restr[f.key()],
                                               comp, da, db)
                        for t, v in part.items():
                            out[off2 + t] = v
                    if out:
                        ech.insert(out)

    @staticmethod
    def _split(layout, vec):
        out = {}
        for cellobj, off, d in layout:
            comp = {i - off: v for i, v in vec.items() if off <= i < off + d}
            if comp:
                out[cellobj.key()] = comp
        return out

    # -- oracle helper --------------------------------------------------

    def generator_bidegrees_expected(self, cell):
        """Product of the two g-polynomials of the intervals below the
        cell's faces: the Bressler-Lunts/IH prediction for gen degrees."""
        gx = ih_dims(self.fan.poset, cell.theta).absolute_dict()
        gy = ih_dims(self.fan.dual_poset, cell.sigma).absolute_dict()
        out = {}
        for p, cp in gx.items():
            for q, cq in gy.items():
                out[(p, q)] = out.get((p, q), 0) + cp * cq
        return out


def minimal_sheaf(fan, origin, D):
    """Public constructor mirroring the build recursion."""
    return MinimalSheaf(fan, origin, D)


class SheafSections:
    """Global sections W over the fan, bigraded, with the module action
    of the 2r global linear functions."""

    def __init__(self, sheaf):
        self.sheaf = sheaf
        self.fan = sheaf.fan
        self.D = sheaf.D
        self.maxcells = [c for c in self.fan.maximal
                         if c.key() in sheaf._support_keys]
        self._bases = {}
        self._layouts = {}

    def layout(self, a, b):
        self.basis(a, b)
        return self._layouts[(a, b)]

    def basis(self, a, b):
        key = (a, b)
        got = self._bases.get(key)
        if got is None:
            layout, vectors = self.sheaf.compatible_sections(
                self.maxcells, a, b)
            ech = Echelon()
            for v in vectors:
                ech.insert(dict(v))
            rows = ech.basis_rows()
            pivots = ech.pivot_columns()
            got = (rows, pivots, ech)
            self._bases[key] = got
            self._layouts[key] = layout
        return got

    def dim(self, a, b):
        return len(self.basis(a, b)[0])

    def coords(self, a, b, vec):
        rows, pivots, ech = self.basis(a, b)
        out = [vec.get(p, 0) for p in pivots]
        rem, _ = ech.reduce(vec)
        assert not rem, "vector is not a global section"
        return out

    def act_linear(self, side, coeff_fn, a, b, vec_row):
        """Multiply a section by a global linear function given, per max
        cell, as a coefficient list over that cell's functionals."""
        layout = self.layout(a, b)
        if side == 0:
            tgt_layout = self.layout(a + 1, b)
        else:
            tgt_layout = self.layout(a, b + 1)
        out = {}
        for (c, off, d), (c2, off2, d2) in zip(layout, tgt_layout):
            comp = {i - off: v for i, v in vec_row.items()
                    if off <= i < off + d}
            if not comp:
                continue
            part = self.sheaf.mul_linear(c, side, coeff_fn(c), comp, a, b)
            for t, v in part.items():
                out[off2 + t] = v
        return out


def build_w(fan, origin, D):
    """W = global sections of the minimal sheaf over the fan."""
    return SheafSections(MinimalSheaf(fan, origin, D))


def standard_dual_bases(r):
    basis = [tuple(1 if i == j else 0 for j in range(r)) for i in range(r)]
    return basis, basis


def _contract(mvec, S):
    for pos, j in enumerate(S):
        if mvec[j]:
            yield ((-1) ** pos) * mvec[j], S[:pos] + S[pos + 1:]


def _wedge(nvec, S):
    for j in range(len(nvec)):
        if j in S or not nvec[j]:
            continue
        pos = sum(1 for i in S if i < j)
        yield ((-1) ** pos) * nvec[j], tuple(sorted(S + (j,)))


class BigradedComplex:
    """(W tensor Lambda* N, d) split by the preserved grading
    gr = deg_x - deg_y + Lambda-degree; d raises s = deg_x + deg_y by 1."""

    def __init__(self, sections, dual_bases=None):
        self.W = sections
        self.r = sections.fan.rank
        if dual_bases is None:
            dual_bases = standard_dual_bases(self.r)
        self.m_basis, self.n_basis = dual_bases
        self._check_dual(self.m_basis, self.n_basis)
        self.D = sections.D
        self._xmat = {}
        self._ymat = {}
        self._rank_cache = {}

    @staticmethod
    def _check_dual(ms, ns):
        for i, m in enumerate(ms):
            for j, n in enumerate(ns):
                if dot(m, n) != (1 if i == j else 0):
                    raise ValueError("bases are not dual")

    def _x_coeffs(self, i):
        n_i = self.n_basis[i]

        def fn(cell):
            sb = cell.theta.span_basis
            return tuple((k, dot(bv, n_i)) for k, bv in enumerate(sb)
                         if dot(bv, n_i))
        return fn

    def _y_coeffs(self, i):
        m_i = self.m_basis[i]

        def fn(cell):
            sb = cell.sigma.span_basis
            return tuple((k, dot(m_i, bv)) for k, bv in enumerate(sb)
                         if dot(m_i, bv))
        return fn

    def xmat(self, i, a, b):
        key = (i, a, b)
        got = self._xmat.get(key)
        if got is None:
            rows, _, _ = self.W.basis(a, b)
            fn = self._x_coeffs(i)
            got = [self.W.coords(a + 1, b,
                                 self.W.act_linear(0, fn, a, b, row))
                   for row in rows]
            self._xmat[key] = got
        return got

    def ymat(self, i, a, b):
        key = (i, a, b)
        got = self._ymat.get(key)
        if got is None:
            rows, _, _ = self.W.basis(a, b)
            fn = self._y_coeffs(i)
            got = [self.W.coords(a, b + 1,
                                 self.W.act_linear(1, fn, a, b, row))
                   for row in rows]
            self._ymat[key] = got
        return got

    def block_basis(self, gr, s):
        """Basis labels (a, b, S, t) with a+b = s, a-b+|S| = gr."""
        out = []
        for a in range(s + 1):
            b = s - a
            ell = gr - a + b
            if ell < 0 or ell > self.r:
                continue
            d = self.W.dim(a, b)
            if d == 0:
                continue
            for S in combinations(range(self.r), ell):
                for t in range(d):
                    out.append((a, b, S, t))
        return out

    def d_columns(self, gr, s):
        """Differential on the (gr, s) block as one sparse column per
        basis label, with values in the (gr, s+1) block labels."""
        cols = []
        for (a, b, S, t) in self.block_basis(gr, s):
            col = {}
            for i in range(self.r):
                for sign, S2 in _contract(self.m_basis[i], S):
                    row = self.xmat(i, a, b)[t]
                    for t2, v in enumerate(row):
                        if v:
                            key = (a + 1, b, S2, t2)
                            nv = col.get(key, 0) + sign * v
                            if nv:
                                col[key] = nv
                            else:
                                col.pop(key, None)
                for sign, S2 in _wedge(self.n_basis[i], S):
                    row = self.ymat(i, a, b)[t]
                    for t2, v in enumerate(row):
                        if v:
                            key = (a, b + 1, S2, t2)
                            nv = col.get(key, 0) + sign * v
                            if nv:
                                col[key] = nv
                            else:
                                col.pop(key, None)
            cols.append(col)
        return cols

    def block_rank(self, gr, s):
        key = (gr, s)
        got = self._rank_cache.get(key)
        if got is None:
            got = exact_rank(self.d_columns(gr, s))
            self._rank_cache[key] = got
        return got

    def gr_values(self, s):
        lo = -s
        hi = s + self.r
        return range(lo, hi + 1)

    def cohomology(self):
        """dims of H at every (gr, s) with s <= D-1 (the certified window)."""
        out = {}
        for s in range(self.D):
            for gr in self.gr_values(s):
                dim = len(self.block_basis(gr, s))
                if dim == 0 and s > 0:
                    continue
                rank_out = self.block_rank(gr, s)
                rank_in = self.block_rank(gr, s - 1) if s > 0 else 0
                h = dim - rank_out - rank_in
                assert h >= 0
                if dim or h:
                    out[(gr, s)] = h
        return out


def koszul_differential_on_w(sections, dual_bases=None):
    return BigradedComplex(sections, dual_bases)


def verify_theorem_key(cone, D=6):
    """Vanishing of H(W tensor Lambda*N, d) for the sheaf at the zero cell,
    in every bidegree with deg_x + deg_y <= D - 1."""
    if cone.ambient_rank == 0:
        raise ValueError("rank must be positive")
    if D < 1:
        raise TruncationTooSmall("no certified window below D=1")
    fan = FanSpace(cone)
    w = build_w(fan, fan.zero_cell(), D)
    cx = BigradedComplex(w)
    h = cx.cohomology()
    violations = sorted((gr, s, d) for (gr, s), d in h.items() if d)
    return {
        "verdict": "pass" if not violations else "fail",
        "window": {"max_total_degree": D - 1},
        "violations": [{"gr": gr, "poly_degree": s, "dim": d}
                       for gr, s, d in violations],
    }


def verify_prop_maincoro(cone, theta0, sigma0, D=6):
    """Cohomology of the sheaf originating at (theta0, sigma0):
    zero when sigma0 is strictly below theta0*, one class in
    Lambda-degree dim theta0* at bidegree (0,0) when sigma0 = theta0*."""
    if D < 1:
        raise TruncationTooSmall("no certified window below D=1")
    fan = FanSpace(cone)
    tstar = annihilator_face(theta0, fan.dual_poset)
    if not fan.dual_poset.leq(sigma0, tstar):
        raise ValueError("sigma0 is not a face of theta0*")
    origin = Cell(theta0, sigma0)
    w = build_w(fan, origin, D)
    cx = BigradedComplex(w)
    h = cx.cohomology()
    nonzero = {k: d for k, d in h.items() if d}
    full = (sigma0.key() == tstar.key())
    report = {
        "origin": {"theta_dim": theta0.dim, "sigma_dim": sigma0.dim},
        "case": "sigma0 = theta0*" if full else "sigma0 < theta0*",
        "window": {"max_total_degree": D - 1},
        "nonzero": [{"gr": gr, "poly_degree": s, "dim": d}
                    for (gr, s), d in sorted(nonzero.items())],
    }
    if not full:
        report["verdict"] = "pass" if not nonzero else "fail"
        return report
    expected_lambda = tstar.dim
    ok = (list(nonzero.keys()) == [(expected_lambda, 0)]
          and nonzero[(expected_lambda, 0)] == 1)
    report["verdict"] = "pass" if ok else "fail"
    report["computed_lambda_degree"] = expected_lambda if ok else None
    # the class sits at bidegree (0,0), so its gr-value IS its
    # Lambda-degree; the displayed estimate r/2 + (dim theta0 +
    # dim sigma0)/2 in the source derivation differs, see ledger
    report["grading_note"] = (
        "surviving class at (deg_x, deg_y) = (0, 0), Lambda-degree "
        "= dim theta0* = %d" % expected_lambda)
    return report
