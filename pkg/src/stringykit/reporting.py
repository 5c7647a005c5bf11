"""Job parsing, verification orchestration, and versioned JSON reports.

Reports are deterministic: identical jobs (including seeds) produce
byte-identical output.  Rationals travel as strings, dimension tables as
{grading: dim} objects tagged with their certification window; wall
clock timings are added only on request since they would break report
determinism.
"""

import json
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from .errors import (DegenerateCoefficients, ParseError, StringyKitError,
                     ValidationError)
from .gkz import connection_on_hb, curvature_report
from .jacobian import (coefficient_function, is_nondegenerate, quotient_dims,
                       r1, r1_hat, random_coefficients)
from .koszul import (cohomology_d, cohomology_dhat, decomposition_dims,
                     hb_assemble)
from .lattice import (cone_from_rays, cone_over_polytope,
                      make_gorenstein_pair, points_at_degree)
from .sheaves import FanSpace, annihilator_face, verify_prop_maincoro, \
    verify_theorem_key

SCHEMA_VERSION = "1"
VERIFICATION_NAMES = ("thm-key", "thm-main", "prop-maincoro", "bhiso",
                      "flatness", "maingkz")


def _parse_rational(value, location):
    try:
        if isinstance(value, str):
            return Fraction(value)
        if isinstance(value, int):
            return Fraction(value)
    except (ValueError, ZeroDivisionError):
        pass
    raise ParseError("expected a rational like '3/2'", location)


def _fmt_rational(q):
    q = Fraction(q)
    return str(q)


@dataclass
class JobSpec:
    """Validated description of one verification run."""
    cone_kind: str                  # "rays" or "polytope_vertices"
    cone_data: tuple
    f_source: tuple                 # ("random", seed) or ("explicit", map)
    g_source: tuple
    max_degree: int = 6
    n_cap: int = 8
    verify: tuple = VERIFICATION_NAMES
    output: str = None
    jobs: int = 1
    timings: bool = False

    def echo(self):
        def side(src):
            kind, payload = src
            if kind == "random":
                return "random:seed=%d" % payload
            return sorted([list(p), _fmt_rational(v)]
                          for p, v in payload.items())
        return {
            self.cone_kind: [list(v) for v in self.cone_data],
            "f": side(self.f_source),
            "g": side(self.g_source),
            "max_degree": self.max_degree,
            "n_cap": self.n_cap,
            "verify": list(self.verify),
        }


_KNOWN_KEYS = {"rays", "polytope_vertices", "f", "g", "max_degree",
               "n_cap", "verify", "output"}


def _parse_side(doc, name, default_seed):
    raw = doc.get(name)
    if raw is None:
        return ("random", default_seed)
    if isinstance(raw, str):
        if raw == "random":
            return ("random", default_seed)
        if raw.startswith("random:seed="):
            try:
                return ("random", int(raw[len("random:seed="):]))
            except ValueError:
                raise ParseError("bad seed", name)
        raise ParseError("expected 'random:seed=N' or a coefficient list",
                         name)
    if isinstance(raw, dict):
        raw = raw.get("values")
    if not isinstance(raw, list):
        raise ParseError("expected a list of [point, value] pairs", name)
    mapping = {}
    for i, item in enumerate(raw):
        loc = "%s[%d]" % (name, i)
        if (not isinstance(item, list) or len(item) != 2
                or not isinstance(item[0], list)):
            raise ParseError("expected [point, value]", loc)
        point = tuple(item[0])
        if not all(isinstance(x, int) for x in point):
            raise ParseError("point coordinates must be integers", loc)
        mapping[point] = _parse_rational(item[1], loc)
    return ("explicit", mapping)


def parse_input(doc, default_seed=0):
    """Validate a job document (a parsed JSON object)."""
    if not isinstance(doc, dict):
        raise ParseError("job document must be an object", "top level")
    unknown = set(doc) - _KNOWN_KEYS
    if unknown:
        raise ParseError("unknown keys: %s" % sorted(unknown), "top level")
    has_rays = "rays" in doc
    has_poly = "polytope_vertices" in doc
    if has_rays == has_poly:
        raise ParseError(
            "exactly one of 'rays' and 'polytope_vertices' is required",
            "top level")
    kind = "rays" if has_rays else "polytope_vertices"
    data = doc[kind]
    if (not isinstance(data, list) or not data
            or not all(isinstance(row, list) and row
                       and all(isinstance(x, int) for x in row)
                       for row in data)):
        raise ParseError("expected a nonempty list of integer vectors", kind)
    if len(set(len(row) for row in data)) != 1:
        raise ParseError("vectors of mixed length", kind)
    verify = doc.get("verify", list(VERIFICATION_NAMES))
    if isinstance(verify, str):
        verify = [verify]
    if not isinstance(verify, list) or not verify:
        raise ParseError("expected a nonempty list of verification names",
                         "verify")
    for name in verify:
        if name != "all" and name not in VERIFICATION_NAMES:
            raise ParseError("unknown verification %r" % name, "verify")
    if "all" in verify:
        verify = list(VERIFICATION_NAMES)
    max_degree = doc.get("max_degree", 6)
    n_cap = doc.get("n_cap", 8)
    if not isinstance(max_degree, int) or max_degree < 1:
        raise ParseError("max_degree must be a positive integer",
                         "max_degree")
    if not isinstance(n_cap, int) or n_cap < 2:
        raise ParseError("n_cap must be an integer >= 2", "n_cap")
    return JobSpec(
        cone_kind=kind,
        cone_data=tuple(tuple(row) for row in data),
        f_source=_parse_side(doc, "f", default_seed),
        g_source=_parse_side(doc, "g", default_seed + 1),
        max_degree=max_degree,
        n_cap=n_cap,
        verify=tuple(verify),
        output=doc.get("output"),
    )


def _build_pair(job):
    if job.cone_kind == "rays":
        cone = cone_from_rays(job.cone_data)
    else:
        cone = cone_over_polytope(job.cone_data)
    return make_gorenstein_pair(cone)


def _build_coefficients(pair, side, source):
    kind, payload = source
    if kind == "random":
        return random_coefficients(pair, side, payload)
    delta = set(pair.delta() if side == "f" else pair.delta_dual())
    extra = [p for p in payload if p not in delta]
    if extra:
        raise ValidationError(
            "coefficient point %s is not a degree-one point"
            % list(extra[0]))
    full = {p: payload.get(p, Fraction(0)) for p in delta}
    fn = coefficient_function(pair, side, full)
    if not is_nondegenerate(pair, fn):
        raise DegenerateCoefficients(
            "explicit %s coefficients fail the nondegeneracy certificate"
            % side)
    return fn


def _dims_table(dims):
    return {str(k): dims[k] for k in sorted(dims) if dims[k]}


def pair_summary(pair):
    by_dim = {}
    for face in pair.poset():
        by_dim[face.dim] = by_dim.get(face.dim, 0) + 1
    dual_by_dim = {}
    for face in pair.dual_poset():
        dual_by_dim[face.dim] = dual_by_dim.get(face.dim, 0) + 1
    return {
        "rank": pair.rank,
        "deg": list(pair.deg),
        "deg_dual": list(pair.deg_dual),
        "degree_one_points": len(pair.delta()),
        "dual_degree_one_points": len(pair.delta_dual()),
        "face_counts_by_dim": {str(k): v for k, v in sorted(by_dim.items())},
        "dual_face_counts_by_dim": {str(k): v
                                    for k, v in sorted(dual_by_dim.items())},
    }


def _verify_thm_key(pair, f, g, job):
    return verify_theorem_key(pair.cone, D=job.max_degree)


def _verify_thm_main(pair, f, g, job):
    rep = cohomology_d(pair, f, g, D=job.max_degree)
    deco = decomposition_dims(pair, f, g)
    match = all(rep.dims[k] == deco["total"].get(k, 0)
                for k in range(job.max_degree))
    return {
        "verdict": "pass" if (match and rep.euler_ok) else "fail",
        "window": rep.window,
        "cohomology_dims": _dims_table(rep.dims),
        "decomposition_dims": _dims_table(deco["total"]),
        "euler_ok": rep.euler_ok,
    }


def _verify_prop_maincoro(pair, f, g, job):
    fan = FanSpace(pair.cone, pair.dual)
    D = min(job.max_degree, 5)
    cases = []
    verdict = "pass"
    for theta0 in fan.poset:
        tstar = annihilator_face(theta0, fan.dual_poset)
        for sigma0 in fan.dual_poset:
            if not fan.dual_poset.leq(sigma0, tstar):
                continue
            rep = verify_prop_maincoro(pair.cone, theta0, sigma0, D=D)
            if rep["verdict"] != "pass":
                verdict = "fail"
            cases.append({
                "theta0_dim": theta0.dim,
                "sigma0_dim": sigma0.dim,
                "case": rep["case"],
                "verdict": rep["verdict"],
            })
    return {"verdict": verdict, "window": {"max_total_degree": D - 1},
            "origins_checked": len(cases), "cases": cases}


def _verify_bhiso(pair, f, g, job):
    records = []
    verdict = "pass"
    for side_pair, fn, label in ((pair, g, "dual"),
                                 (pair.swap(), f, "primal")):
        for sigma in side_pair.dual_poset():
            graded = r1(sigma, fn).dims_dict()
            try:
                hat = r1_hat(sigma, fn).dims_dict()
                ok = hat == graded
            except StringyKitError:
                hat = None
                ok = False
            if not ok:
                verdict = "fail"
            records.append({
                "side": label,
                "face_dim": sigma.dim,
                "graded_dims": _dims_table(graded),
                "hat_dims": _dims_table(hat) if hat is not None else None,
                "equal": ok,
            })
    return {"verdict": verdict, "faces_checked": len(records),
            "faces": records}


def _verify_flatness(pair, f, g, job):
    blocks = connection_on_hb(pair, f, g)
    out = []
    verdict = "pass"
    for block in blocks:
        if not block.matrices:
            out.append({"face_dim": block.sigma.dim, "dim": block.dim(),
                        "parameters": 0, "flat": True})
            continue
        rep = curvature_report(block.sigma, g,
                               basis_points=list(block.basis))
        if not rep["flat"]:
            verdict = "fail"
        out.append({
            "face_dim": block.sigma.dim,
            "dim": block.dim(),
            "parameters": len(block.matrices),
            "flat": rep["flat"],
            "pairs_checked": rep["pairs_checked"],
            "matrices_commute": rep["commuting"],
            "plain_derivative_symmetry": rep["derivative_symmetry"],
        })
    return {"verdict": verdict, "blocks": out}


def _verify_maingkz(pair, f, g, job):
    rep = cohomology_dhat(pair, f, g, D=2 * pair.rank,
                          p_max=job.n_cap)
    hb = hb_assemble(pair, f, g)
    got = {k: v for k, v in rep.dims.items() if v}
    if rep.flags:
        verdict = "not-stabilized"
    elif got == hb["total"]:
        verdict = "pass"
    else:
        verdict = "fail"
    return {
        "verdict": verdict,
        "window": rep.window,
        "hb_dims": _dims_table(rep.dims),
        "assembled_dims": _dims_table(hb["total"]),
        "not_stabilized_gradings": sorted(rep.flags),
    }


_VERIFIERS = {
    "thm-key": _verify_thm_key,
    "thm-main": _verify_thm_main,
    "prop-maincoro": _verify_prop_maincoro,
    "bhiso": _verify_bhiso,
    "flatness": _verify_flatness,
    "maingkz": _verify_maingkz,
}


def _job_width(job):
    if job.jobs and job.jobs > 1:
        return job.jobs
    env = os.environ.get("STRINGYKIT_JOBS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            return 1
    return 1


def run(job):
    """Execute a job; returns (report dict, exit code)."""
    try:
        pair = _build_pair(job)
        f = _build_coefficients(pair, "f", job.f_source)
        g = _build_coefficients(pair, "g", job.g_source)
    except StringyKitError as exc:
        report = {
            "schema_version": SCHEMA_VERSION,
            "job": job.echo(),
            "error": {"type": type(exc).__name__, "message": str(exc)},
            "exit_code": 2,
        }
        return report, 2

    names = list(job.verify)
    results = {}
    timings = {}

    def task(name):
        t0 = time.monotonic()
        out = _VERIFIERS[name](pair, f, g, job)
        return name, out, time.monotonic() - t0

    width = _job_width(job)
    if width > 1:
        with ThreadPoolExecutor(max_workers=width) as pool:
            for name, out, dt in pool.map(task, names):
                results[name] = out
                timings[name] = dt
    else:
        for name in names:
            name, out, dt = task(name)
            results[name] = out
            timings[name] = dt

    verdicts = [results[n]["verdict"] for n in names]
    if any(v == "fail" for v in verdicts):
        code = 1
    elif any(v == "not-stabilized" for v in verdicts):
        code = 3
    else:
        code = 0
    report = {
        "schema_version": SCHEMA_VERSION,
        "job": job.echo(),
        "pair": pair_summary(pair),
        "verifications": {n: results[n] for n in sorted(results)},
        "verdict": ("pass" if code == 0 else
                    "not-stabilized" if code == 3 else "fail"),
        "exit_code": code,
    }
    if job.timings:
        report["timings"] = {n: round(timings[n], 3) for n in sorted(timings)}
    return report, code


def render_report(report):
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def inspect_pair(job):
    pair = _build_pair(job)
    return {"schema_version": SCHEMA_VERSION, "job": job.echo(),
            "pair": pair_summary(pair)}


def hilbert_tables(job):
    pair = _build_pair(job)
    f = _build_coefficients(pair, "f", job.f_source)
    g = _build_coefficients(pair, "g", job.g_source)
    sides = []
    for label, poset, fn in (("primal", pair.poset(), f),
                             ("dual", pair.dual_poset(), g)):
        faces_out = []
        for face in poset:
            q = quotient_dims(face, fn)
            counts = [len(points_at_degree(face, k, fn.lam))
                      for k in range(face.dim + 3)]
            faces_out.append({
                "dim": face.dim,
                "point_counts": counts,
                "quotient_dims": [q.dims[k] for k in range(face.dim + 3)],
            })
        sides.append({"side": label, "faces": faces_out})
    return {"schema_version": SCHEMA_VERSION, "job": job.echo(),
            "sides": sides}


def r1_tables(job):
    pair = _build_pair(job)
    f = _build_coefficients(pair, "f", job.f_source)
    g = _build_coefficients(pair, "g", job.g_source)
    sides = []
    for label, poset, fn in (("primal", pair.poset(), f),
                             ("dual", pair.dual_poset(), g)):
        faces_out = []
        for face in poset:
            faces_out.append({
                "dim": face.dim,
                "r1_dims": _dims_table(r1(face, fn).dims_dict()),
            })
        sides.append({"side": label, "faces": faces_out})
    return {"schema_version": SCHEMA_VERSION, "job": job.echo(),
            "sides": sides}


def cohomology_table(job, differential="d"):
    pair = _build_pair(job)
    f = _build_coefficients(pair, "f", job.f_source)
    g = _build_coefficients(pair, "g", job.g_source)
    if differential == "d":
        rep = cohomology_d(pair, f, g, D=job.max_degree)
        verdict = "pass"
    elif differential == "dhat":
        rep = cohomology_dhat(pair, f, g, D=2 * pair.rank, p_max=job.n_cap)
        verdict = "not-stabilized" if rep.flags else "pass"
    else:
        raise ParseError("differential must be 'd' or 'dhat'",
                         "--differential")
    return {
        "schema_version": SCHEMA_VERSION,
        "job": job.echo(),
        "differential": differential,
        "dims": _dims_table(rep.dims),
        "window": rep.window,
        "flags": {str(k): v for k, v in sorted(rep.flags.items())},
        "verdict": verdict,
    }, (3 if verdict == "not-stabilized" else 0)
