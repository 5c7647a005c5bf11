"""Stanley g- and h-polynomials of Eulerian intervals, and the graded
dimensions of combinatorial intersection cohomology they encode.

The recursion is the mutual h/g one: on an interval of rank d+1,
h(t) = sum over proper lower elements x of g([bottom,x]) * (t-1)^(d-rho(x))
and g keeps the increments of the lower half of h.  Rank is cone
dimension throughout, so one exponent step is one grading unit.
"""

from dataclasses import dataclass

from .errors import NotEulerian


class IntPolynomial:
    """Integer polynomial as a finitely supported exponent -> coeff map."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=None):
        self.coeffs = {e: c for e, c in (coeffs or {}).items() if c}

    @classmethod
    def one(cls):
        return cls({0: 1})

    def __eq__(self, other):
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __add__(self, other):
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            nc = out.get(e, 0) + c
            if nc:
                out[e] = nc
            else:
                out.pop(e, None)
        return IntPolynomial(out)

    def __mul__(self, other):
        out = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                e = e1 + e2
                out[e] = out.get(e, 0) + c1 * c2
        return IntPolynomial(out)

    def degree(self):
        return max(self.coeffs, default=-1)

    def __getitem__(self, e):
        return self.coeffs.get(e, 0)

    def __repr__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for e in sorted(self.coeffs):
            c = self.coeffs[e]
            if e == 0:
                terms.append(str(c))
            elif e == 1:
                terms.append("%st" % ("" if c == 1 else c))
            else:
                terms.append("%st^%d" % ("" if c == 1 else c, e))
        return " + ".join(terms)


_T_MINUS_1 = IntPolynomial({1: 1, 0: -1})


def _t_minus_1_power(k):
    p = IntPolynomial.one()
    for _ in range(k):
        p = p * _T_MINUS_1
    return p


def _interval_is_eulerian(poset, bottom, top):
    elems = poset.interval(bottom, top)
    for a in elems:
        for b in elems:
            if a is b or not poset.leq(a, b):
                continue
            if sum((-1) ** x.dim for x in poset.interval(a, b)) != 0:
                return False
    return True


_g_cache = {}


def g_polynomial(poset, bottom, top):
    """Stanley g-polynomial of the interval [bottom, top].

    Raises NotEulerian if any subinterval fails the even/odd count test.
    """
    key = (id(poset), bottom.key(), top.key())
    cached = _g_cache.get(key)
    if cached is not None:
        return cached
    if not poset.leq(bottom, top):
        raise ValueError("not an interval: bottom is not below top")
    if not _interval_is_eulerian(poset, bottom, top):
        raise NotEulerian("interval fails the Eulerian test")
    g = _g_recursion(poset, bottom, top)
    _g_cache[key] = g
    return g


def _g_recursion(poset, bottom, top):
    key = (id(poset), bottom.key(), top.key())
    cached = _g_cache.get(key)
    if cached is not None:
        return cached
    d = top.dim - bottom.dim - 1
    if d < 0:
        g = IntPolynomial.one()
    else:
        h = IntPolynomial()
        for x in poset.interval(bottom, top):
            if x is top:
                continue
            gx = _g_recursion(poset, bottom, x)
            h = h + gx * _t_minus_1_power(d - (x.dim - bottom.dim))
        # Dehn-Sommerville h_i = h_{d-i} holds on Eulerian intervals
        if any(h[i] != h[d - i] for i in range(d + 1)):
            raise NotEulerian("h-vector is not palindromic")
        out = {0: h[0]}
        for i in range(1, d // 2 + 1):
            out[i] = h[i] - h[i - 1]
        g = IntPolynomial(out)
    _g_cache[key] = g
    return g


def h_polynomial(poset, bottom, top):
    """The h-polynomial of the interval (exposed for tests and reports)."""
    d = top.dim - bottom.dim - 1
    if d < 0:
        return IntPolynomial.one()
    if not _interval_is_eulerian(poset, bottom, top):
        raise NotEulerian("interval fails the Eulerian test")
    h = IntPolynomial()
    for x in poset.interval(bottom, top):
        if x is top:
            continue
        h = h + _g_recursion(poset, bottom, x) * \
            _t_minus_1_power(d - (x.dim - bottom.dim))
    return h


@dataclass(frozen=True)
class IHDims:
    """Graded dimensions of IH(theta) and of IH(theta, boundary)."""
    absolute: tuple   # sorted ((degree, dim), ...)
    relative: tuple

    def absolute_dict(self):
        return dict(self.absolute)

    def relative_dict(self):
        return dict(self.relative)


def ih_dims(poset, face):
    """Absolute dims from the g-polynomial of [{0}, face]; relative by
    the duality rule relative_k = absolute_{dim - k}."""
    g = g_polynomial(poset, poset.zero, face)
    absolute = tuple(sorted(g.coeffs.items()))
    relative = tuple(sorted((face.dim - e, c) for e, c in g.coeffs.items()))
    return IHDims(absolute, relative)


def degree_bounds_ok(dim, dims):
    """Support bounds: absolute in [0, dim/2], relative in [dim/2, dim],
    both strict at the half-point when dim > 0."""
    for e, c in dims.absolute:
        if c <= 0:
            return False
        if e < 0 or 2 * e > dim or (dim > 0 and 2 * e == dim):
            return False
    for e, c in dims.relative:
        if c <= 0:
            return False
        if e > dim or 2 * e < dim or (dim > 0 and 2 * e == dim):
            return False
    return True


def verify_degree_bounds(pair):
    """Check the IH support bounds on every face of both cones."""
    checked = 0
    failures = []
    for poset in (pair.poset(), pair.dual_poset()):
        for face in poset:
            checked += 1
            if not degree_bounds_ok(face.dim, ih_dims(poset, face)):
                side = "primal" if poset.cone == pair.cone else "dual"
                failures.append({"side": side, "face": list(face.key()),
                                 "dim": face.dim})
    return {"verdict": "pass" if not failures else "fail",
            "faces_checked": checked,
            "failures": failures}
