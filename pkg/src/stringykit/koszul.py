"""The double Koszul complex on C[(K + K_dual)_0] tensor Lambda* N and
its two differentials, with the decomposition oracles for both.

Basis elements are triples (m, n, S): lattice points with <m, n> = 0 and
an ascending wedge subset of the standard basis of N.  The plain
differential d is graded by <m, deg_dual> + <deg, n>; the deformed one
d_hat by 2 <m, deg_dual> + |S|, whose graded pieces are finite only
after capping the n-degree.

For d_hat cohomology the quotient complexes V/S_p alone stabilize to a
wrong answer (formal exponential cocycles survive every cap), so the
computed invariant is: kernel of the EXACT differential among vectors
supported below the cap, modulo exact boundaries of vectors supported
one step lower.  Stabilization over consecutive caps plus the
R1/R1-hat assembly oracle certify the result.
"""

from dataclasses import dataclass
from fractions import Fraction

from .errors import DegenerateCoefficients, InfinitePiece
from .jacobian import is_nondegenerate, r1, r1_hat
from .lattice import dot, dual_face, padd, points_at_degree
from .linalg import exact_rank


def _pts(pair, cone, k):
    poset = pair.poset() if cone == pair.cone else pair.dual_poset()
    return points_at_degree(poset.top, k, pair.grading(cone))


def _wedges(r):
    out = [()]
    for j in range(r):
        out = out + [S + (j,) for S in out]
    return sorted(out, key=lambda S: (len(S), S))


def v_basis(pair, grading, bound, n_cap=None):
    """Graded pieces of the complex: {value: [(m, n, S), ...]}.

    grading "d": value = <m,deg_dual> + <deg,n> up to bound.
    grading "dhat": value = 2<m,deg_dual> + |S| up to bound; requires an
    n-degree cap (InfinitePiece otherwise), points with <deg,n> <= n_cap.
    """
    r = pair.rank
    wedges = _wedges(r)
    out = {}
    if grading == "d":
        for k in range(bound + 1):
            elems = []
            for a in range(k + 1):
                for m in _pts(pair, pair.cone, a):
                    for n in _pts(pair, pair.dual, k - a):
                        if dot(m, n) == 0:
                            elems.extend((m, n, S) for S in wedges)
            out[k] = sorted(elems)
        return out
    if grading == "dhat":
        if n_cap is None:
            raise InfinitePiece(
                "d-hat graded pieces are infinite without an n-degree cap")
        for gv in range(bound + 1):
            elems = []
            for a in range(gv // 2 + 1):
                ell = gv - 2 * a
                if ell > r:
                    continue
                level_wedges = [S for S in wedges if len(S) == ell]
                for m in _pts(pair, pair.cone, a):
                    for b in range(n_cap + 1):
                        for n in _pts(pair, pair.dual, b):
                            if dot(m, n) == 0:
                                elems.extend(
                                    (m, n, S) for S in level_wedges)
            out[gv] = sorted(elems)
        return out
    raise ValueError("grading must be 'd' or 'dhat'")


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


def _add(col, key, val):
    nv = col.get(key, 0) + val
    if nv:
        col[key] = nv
    else:
        col.pop(key, None)


def d_column(pair, f, g, elt):
    """Image of a basis element under d = f-contraction + g-wedge;
    products violating <m, n> = 0 are zero by the quotient relation."""
    m1, n1, S = elt
    col = {}
    for m in f.domain():
        fm = f(m)
        if not fm:
            continue
        m2 = padd(m, m1)
        if dot(m2, n1) != 0:
            continue
        for sign, S2 in _contract(m, S):
            _add(col, (m2, n1, S2), sign * fm)
    for n in g.domain():
        gn = g(n)
        if not gn:
            continue
        n2 = padd(n, n1)
        if dot(m1, n2) != 0:
            continue
        for sign, S2 in _wedge(n, S):
            _add(col, (m1, n2, S2), sign * gn)
    return col


def dhat_column(pair, f, g, elt, drop_from=None):
    """Image under d_hat = d + wedging by the element's own n-part.

    drop_from: n-degree at which targets are cut (the literal quotient
    complex V/S_p uses drop_from = p); None keeps the exact image.
    """
    m1, n1, S = elt
    col = d_column(pair, f, g, elt)
    for sign, S2 in _wedge(n1, S):
        _add(col, (m1, n1, S2), Fraction(sign))
    if drop_from is not None:
        col = {key: v for key, v in col.items()
               if dot(pair.deg, key[1]) < drop_from}
    return col


def d_matrix(pair, f, g, k):
    """Sparse columns of d from grading k, keyed by target basis labels."""
    basis = v_basis(pair, "d", k)[k]
    return basis, [d_column(pair, f, g, e) for e in basis]


def dhat_matrix(pair, f, g, grading_value, p):
    """d_hat on the quotient complex V/S_p at one hat-grading, as sparse
    columns (targets of n-degree >= p are zero in the quotient)."""
    if p < 1:
        raise ValueError("n-cap must be >= 1")
    basis = v_basis(pair, "dhat", grading_value, n_cap=p - 1)[grading_value]
    return basis, [dhat_column(pair, f, g, e, drop_from=p) for e in basis]


def _certify(pair, f, g):
    if not is_nondegenerate(pair, f):
        raise DegenerateCoefficients("f fails the nondegeneracy certificate")
    if not is_nondegenerate(pair, g):
        raise DegenerateCoefficients("g fails the nondegeneracy certificate")


def _split_rank(columns):
    """Rank of a block-diagonal matrix split by a conserved column label."""
    buckets = {}
    for col, t in columns:
        buckets.setdefault(t, []).append(col)
    return sum(exact_rank(cols) for cols in buckets.values())


def _tau_d(pair, elt):
    m, n, S = elt
    return dot(m, pair.deg_dual) - dot(pair.deg, n) + len(S)


@dataclass
class CohomologyReport:
    """Per-grading dimensions with the rank bookkeeping that produced
    them and an alternating-sum cross-check."""
    dims: dict
    space_dims: dict
    ranks: dict
    window: dict
    euler_ok: bool
    flags: dict


def cohomology_d(pair, f, g, D=6):
    """Cohomology of (V, d) in gradings 0..D-1 by exact sparse ranks."""
    _certify(pair, f, g)
    basis = v_basis(pair, "d", D)
    vdims = {k: len(basis[k]) for k in range(D + 1)}
    ranks = {}
    for k in range(D):
        cols = [(d_column(pair, f, g, e), _tau_d(pair, e))
                for e in basis[k]]
        ranks[k] = _split_rank(cols)
    dims = {}
    for k in range(D):
        dims[k] = vdims[k] - ranks[k] - (ranks[k - 1] if k > 0 else 0)
        assert dims[k] >= 0
    lhs = sum((-1) ** k * dims[k] for k in range(D))
    rhs = sum((-1) ** k * vdims[k] for k in range(D)) \
        - (-1) ** (D - 1) * ranks[D - 1]
    return CohomologyReport(dims=dims, space_dims=vdims, ranks=ranks,
                            window={"max_degree": D - 1},
                            euler_ok=(lhs == rhs), flags={})


def decomposition_dims(pair, f, g):
    """Face-by-face convolution of R1 dims: the decomposition side of the
    plain double Koszul cohomology."""
    _certify(pair, f, g)
    per_face = []
    total = {}
    for theta in pair.poset():
        sigma = dual_face(pair, theta)
        rf = r1(theta, f).dims_dict()
        rg = r1(sigma, g).dims_dict()
        conv = {}
        for i, di in rf.items():
            for j, dj in rg.items():
                conv[i + j] = conv.get(i + j, 0) + di * dj
        if conv:
            per_face.append({"theta_dim": theta.dim,
                             "theta": list(theta.key()),
                             "dims": conv})
            for k, d in conv.items():
                total[k] = total.get(k, 0) + d
    return {"per_face": per_face, "total": total}


def _hat_rank(pair, f, g, basis_cache, gv, cap):
    """Rank of the exact d_hat on basis vectors of n-degree <= cap."""
    if gv < 0 or cap < 0:
        return 0
    elems = basis_cache(gv, cap)
    cols = [(dhat_column(pair, f, g, e), None) for e in elems]
    return _split_rank(cols)


def cohomology_dhat(pair, f, g, D=6, p_max=8):
    """Stabilized d_hat cohomology dims per hat-grading <= D.

    For the cap c, the computed number is
        dim ker(d_hat | n-deg <= c)  -  rank(d_hat | n-deg <= c-1)
    (kernel of the exact differential, boundaries from one step lower).
    A grading is stabilized when two consecutive caps agree; the report
    flags gradings that never stabilize (not fatal, per-grading).
    """
    _certify(pair, f, g)
    basis_memo = {}

    def basis_at(gv, cap):
        key = (gv, cap)
        if key not in basis_memo:
            basis_memo[key] = v_basis(pair, "dhat", gv, n_cap=cap)[gv]
        return basis_memo[key]

    rank_memo = {}

    def rank_at(gv, cap):
        key = (gv, cap)
        if key not in rank_memo:
            rank_memo[key] = _hat_rank(pair, f, g, basis_at, gv, cap)
        return rank_memo[key]

    def h_at(gv, cap):
        kdim = len(basis_at(gv, cap)) - rank_at(gv, cap)
        bdim = rank_at(gv - 1, cap - 1) if gv > 0 else 0
        return kdim - bdim

    dims = {}
    stop_at = {}
    flags = {}
    space_dims = {}
    for gv in range(D + 1):
        prev = None
        stabilized = None
        for p in range(2, p_max + 1):
            cur = h_at(gv, p - 1)
            if prev is not None and cur == prev:
                stabilized = (p - 1, cur)
                break
            prev = cur
        if stabilized is None:
            flags[gv] = "not-stabilized"
            dims[gv] = prev
            stop_at[gv] = p_max
        else:
            dims[gv] = stabilized[1]
            stop_at[gv] = stabilized[0]
        space_dims[gv] = len(basis_at(gv, stop_at[gv] - 1))
    return CohomologyReport(dims=dims, space_dims=space_dims,
                            ranks={gv: rank_at(gv, stop_at[gv] - 1)
                                   for gv in range(D + 1)},
                            window={"max_hat_grading": D,
                                    "p_max": p_max,
                                    "stabilized_at": stop_at},
                            euler_ok=True, flags=flags)


def cohomology_ha(pair, f, g, D=None, p_max=8):
    """The A-space by delegation: H_A of (f, g) is H_B of the swapped
    pair with the coefficient roles exchanged.  No second differential
    implementation exists on purpose (one sign convention, one code
    path)."""
    swapped = pair.swap()
    if D is None:
        D = 2 * pair.rank
    return cohomology_dhat(swapped, g, f, D=D, p_max=p_max)


def hb_assemble(pair, f, g):
    """Assembly of the deformed cohomology from faces: each graded piece
    R1(f, theta)_i tensor R1hat(g, theta*) lands in grading
    2 i + dim theta*."""
    _certify(pair, f, g)
    per_face = []
    total = {}
    for theta in pair.poset():
        sigma = dual_face(pair, theta)
        rf = r1(theta, f).dims_dict()
        if not rf:
            continue
        hat_total = r1_hat(sigma, g).total()
        if not hat_total:
            continue
        conv = {}
        for i, di in rf.items():
            gv = 2 * i + sigma.dim
            conv[gv] = conv.get(gv, 0) + di * hat_total
        per_face.append({"theta_dim": theta.dim, "theta": list(theta.key()),
                         "dims": conv})
        for gv, d in conv.items():
            total[gv] = total.get(gv, 0) + d
    return {"per_face": per_face, "total": total}
