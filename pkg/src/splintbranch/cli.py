"""Command-line front end: roots, splint, fan, branch, affine-branch,
strings, qdim, verify.

Exit codes: 0 success / all identities verified, 1 verification mismatch,
2 usage or configuration error.  Output is aligned text by default or JSON
lines with --format json; weights are printed as Dynkin labels and all tables
are sorted by the (rho, weight) order with a lexicographic label tie-break,
so reruns are byte-identical.  Affine character layers are cached on disk as
content-addressed JSON files when a cache directory is configured (flag
--cache-dir or SPLINTBRANCH_CACHE_DIR); --no-cache bypasses it.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import tempfile
from fractions import Fraction

from . import affine as af
from . import qseries as qs
from .characters import FormalCharacter, weyl_dimension
from .rootsystem import build_root_system
from .splints import (check_embedding, check_splint, fan_coefficients,
                      find_splint, load_splint_file, splint_catalog)

CACHE_ENV = "SPLINTBRANCH_CACHE_DIR"
CACHE_SCHEMA = "splintbranch-affine-character-v1"


class ConfigError(Exception):
    """Aggregated configuration problems; exits with code 2."""


# ---------------------------------------------------------------------------
# configuration


def _parse_labels(text, rank):
    try:
        labels = [int(x) for x in text.split(",")]
    except ValueError:
        raise ConfigError(f"--weight expects comma-separated integers, got {text!r}")
    if len(labels) != rank:
        raise ConfigError(f"--weight needs {rank} Dynkin labels, got {len(labels)}")
    if any(m < 0 for m in labels):
        raise ConfigError(f"--weight labels must be nonnegative, got {labels}")
    return labels


def _load_algebra(args, errors):
    if not getattr(args, "algebra", None):
        errors.append("--algebra is required")
        return None
    try:
        return build_root_system(args.algebra)
    except ValueError as exc:
        errors.append(str(exc))
        return None


def _load_splint(args, rs, errors):
    name = getattr(args, "splint", None)
    path = getattr(args, "splint_file", None)
    if path:
        try:
            return load_splint_file(path)
        except (OSError, ValueError, KeyError) as exc:
            errors.append(f"cannot load splint file {path}: {exc}")
            return None
    if not name:
        errors.append("--splint (or --splint-file) is required")
        return None
    full = name if ":" in name else (f"{rs.name}:{name}" if rs is not None else name)
    try:
        return find_splint(full)
    except KeyError as exc:
        errors.append(str(exc.args[0]))
        return None


def _require(errors):
    if errors:
        raise ConfigError("; ".join(errors))


# ---------------------------------------------------------------------------
# output


class Emitter:
    def __init__(self, fmt):
        self.json = fmt == "json"

    def record(self, kind, text_lines, **fields):
        if self.json:
            print(json.dumps({"record": kind, **fields}, sort_keys=True))
        else:
            for line in text_lines:
                print(line)


def _labels_str(labels):
    return ",".join(str(int(m)) for m in labels)


def _weight_key(rs, v):
    return (rs.inner(rs.rho, v), tuple(rs.dynkin_labels(v)))


# ---------------------------------------------------------------------------
# cache


def _cache_dir(args):
    if getattr(args, "no_cache", False):
        return None
    return getattr(args, "cache_dir", None) or os.environ.get(CACHE_ENV) or None


def _frac_str(x: Fraction) -> str:
    return str(x)


def _layers_to_json(gc: af.GradedCharacter):
    layers = []
    for fc in gc.layers:
        layers.append(sorted([[list(map(_frac_str, v)), c] for v, c in fc.items()]))
    return {"schema": CACHE_SCHEMA, "cutoff": gc.cutoff, "layers": layers}


def _layers_from_json(doc):
    if doc.get("schema") != CACHE_SCHEMA:
        raise ValueError(f"unexpected cache schema {doc.get('schema')!r}")
    layers = []
    for layer in doc["layers"]:
        fc = FormalCharacter()
        for coords, c in layer:
            fc.terms[tuple(Fraction(x) for x in coords)] = c
        layers.append(fc)
    return af.GradedCharacter(doc["cutoff"], layers)


def cached_affine_character(rs, aw, cutoff, cache_dir):
    if cache_dir is None:
        return af.affine_character(rs, aw, cutoff)
    key = json.dumps({"op": "affine_character", "algebra": rs.name,
                      "labels": [int(m) for m in rs.dynkin_labels(aw.finite)],
                      "level": aw.level, "cutoff": cutoff,
                      "schema": CACHE_SCHEMA}, sort_keys=True)
    digest = hashlib.sha256(key.encode()).hexdigest()
    path = os.path.join(cache_dir, digest[:2], digest + ".json")
    if os.path.exists(path):
        with open(path) as fh:
            return _layers_from_json(json.load(fh))
    gc = af.affine_character(rs, aw, cutoff)
    os.makedirs(os.path.dirname(path), exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=os.path.dirname(path), suffix=".tmp")
    with os.fdopen(fd, "w") as fh:
        json.dump(_layers_to_json(gc), fh, sort_keys=True)
    os.replace(tmp, path)
    return gc


# ---------------------------------------------------------------------------
# subcommands


def cmd_roots(args):
    errors = []
    rs = _load_algebra(args, errors)
    _require(errors)
    em = Emitter(args.format)
    pos = [tuple(int(c) for c in rs.simple_coefficients(a)) for a in rs.positive_roots]
    lines = [f"algebra {rs.name}: rank {rs.rank}, {len(pos)} positive roots, "
             f"h-dual {list(rs.dual_coxeter)}, |W| = {rs.weyl_order}",
             "cartan matrix:"]
    lines += ["  " + " ".join(f"{x:3d}" for x in row) for row in rs.cartan]
    lines.append("positive roots (simple-root coefficients):")
    lines += ["  " + " ".join(map(str, c)) for c in pos]
    lines.append(f"rho labels: {_labels_str(rs.dynkin_labels(rs.rho))}")
    em.record("roots", lines, algebra=rs.name, rank=rs.rank, cartan=rs.cartan,
              positive_roots=[list(c) for c in pos],
              rho_labels=[int(m) for m in rs.dynkin_labels(rs.rho)],
              dual_coxeter=list(rs.dual_coxeter), weyl_order=rs.weyl_order)
    return 0


def cmd_splint(args):
    em = Emitter(args.format)
    if args.action == "list":
        errors = []
        rs = _load_algebra(args, errors)
        _require(errors)
        entries = splint_catalog(rs)
        if not entries:
            em.record("splint", [f"no catalog splints for {rs.name}"],
                      algebra=rs.name, splints=[])
            return 0
        rows = []
        for s in entries:
            ok9 = s.branching_status().passed
            flag = "branching applicable" if ok9 else \
                   "splint verified / tilde branching not applicable"
            rows.append({"name": s.name, "subalgebra": s.phi1.source.name,
                         "stem": s.phi2.source.name, "status": flag})
        lines = [f"{r['name']}: subalgebra {r['subalgebra']}, stem {r['stem']} "
                 f"[{r['status']}]" for r in rows]
        em.record("splint", lines, algebra=rs.name, splints=rows)
        return 0
    # check
    errors = []
    s = _load_splint(args, _load_algebra(args, []) if args.algebra else None, errors)
    _require(errors)
    rep = check_splint(s)
    rep1 = check_embedding(s.phi1)
    rep2 = check_embedding(s.phi2)
    lines = [f"{s.name}: check_splint {'pass' if rep.passed else 'FAIL'}"]
    lines += [f"  problem: {p}" for p in rep.problems]
    em.record("splint_check", lines, name=s.name, passed=rep.passed,
              problems=rep.problems, embedding_subalgebra=rep1.passed,
              embedding_stem=rep2.passed)
    return 0 if rep.passed else 1


def cmd_fan(args):
    errors = []
    rs = _load_algebra(args, errors)
    s = _load_splint(args, rs, errors)
    _require(errors)
    fan = fan_coefficients(s)
    rows = sorted(([int(c) for c in s.ambient.simple_coefficients(g)], v)
                  for g, v in fan.coefficients.items())
    lines = [f"injection fan of {s.name}: {len(rows)} coefficients"]
    lines += [f"  gamma = {' '.join(map(str, g)):12s} s(gamma) = {v:+d}" for g, v in rows]
    em = Emitter(args.format)
    em.record("fan", lines, splint=s.name,
              coefficients=[{"gamma": g, "s": v} for g, v in rows])
    return 0


def cmd_branch(args):
    errors = []
    rs = _load_algebra(args, errors)
    s = _load_splint(args, rs, errors)
    if rs is not None and getattr(args, "weight", None) is None:
        errors.append("--weight is required")
    _require(errors)
    labels = _parse_labels(args.weight, rs.rank)
    mu = rs.weight_from_labels(labels)
    status = s.branching_status()
    if not status.passed:
        raise ConfigError(f"splint {s.name} is flagged: tilde branching not applicable")
    from .splints import branch_via_splint, branch_direct
    table = branch_via_splint(s, mu)
    view = s.subalgebra_view()
    match = None
    if args.oracle:
        match = table == branch_direct(rs, view, mu)
    rows = []
    for nu in sorted(table, key=lambda v: _weight_key(rs, v)):
        rows.append({
            "ambient_labels": [int(m) for m in rs.dynkin_labels(nu)],
            "subalgebra_labels": [int(m) for m in view.labels(nu)],
            "coefficient": table[nu],
            "dimension": view.dimension(nu),
        })
    total = sum(r["coefficient"] * r["dimension"] for r in rows)
    lines = [f"branching of {rs.name} weight ({_labels_str(labels)}) through {s.name}:"]
    for r in rows:
        lines.append(f"  nu = ({_labels_str(r['ambient_labels'])})  "
                     f"sub-labels ({_labels_str(r['subalgebra_labels'])})  "
                     f"b = {r['coefficient']}  dim = {r['dimension']}")
    lines.append(f"total dimension {total} (module dimension {weyl_dimension(rs, mu)})")
    if match is not None:
        lines.append(f"oracle match: {match}")
    em = Emitter(args.format)
    em.record("branch", lines, algebra=rs.name, splint=s.name, weight=labels,
              rows=rows, total_dimension=total, oracle_match=match)
    return 0 if match in (None, True) else 1


def _affine_inputs(args, errors, rs):
    if rs is None:
        return None, None
    if getattr(args, "weight", None) is None:
        errors.append("--weight is required")
        return None, None
    if getattr(args, "level", None) is None:
        errors.append("--level is required")
        return None, None
    labels = _parse_labels(args.weight, rs.rank)
    if args.level < 0:
        errors.append("--level must be >= 0")
    if args.grade_max < 0:
        errors.append("--grade-max must be >= 0")
    aw = af.AffineWeight(rs.weight_from_labels(labels), args.level)
    try:
        af.check_affine_dominant(rs, aw)
    except ValueError as exc:
        errors.append(str(exc))
        return None, None
    return labels, aw


def cmd_affine_branch(args):
    errors = []
    rs = _load_algebra(args, errors)
    s = _load_splint(args, rs, errors)
    labels, aw = _affine_inputs(args, errors, rs)
    _require(errors)
    gc = cached_affine_character(rs, aw, args.grade_max, _cache_dir(args))
    series = af.branch_affine_to_subalgebra(rs, s, aw, args.grade_max, gc=gc)
    match = None
    if args.oracle:
        match = series.entries == af.branch_affine_direct(rs, s, aw, args.grade_max,
                                                          gc=gc).entries
    view = s.subalgebra_view()
    rows = []
    for nu in sorted(series.weights(), key=lambda v: _weight_key(rs, v)):
        rows.append({"ambient_labels": [int(m) for m in rs.dynkin_labels(nu)],
                     "subalgebra_labels": [int(m) for m in view.labels(nu)],
                     "series": series.series(nu)})
    lines = [f"graded branching of {rs.name} level {aw.level} weight "
             f"({_labels_str(labels)}) to subalgebra of {s.name}, grades 0..{args.grade_max}:"]
    for r in rows:
        lines.append(f"  nu = ({_labels_str(r['ambient_labels'])})  "
                     f"sub ({_labels_str(r['subalgebra_labels'])})  b(q) = {r['series']}")
    if match is not None:
        lines.append(f"oracle match: {match}")
    em = Emitter(args.format)
    em.record("affine_branch", lines, algebra=rs.name, splint=s.name, weight=labels,
              level=aw.level, grade_max=args.grade_max, rows=rows, oracle_match=match)
    return 0 if match in (None, True) else 1


def cmd_strings(args):
    errors = []
    rs = _load_algebra(args, errors)
    labels, aw = _affine_inputs(args, errors, rs)
    _require(errors)
    gc = cached_affine_character(rs, aw, args.grade_max, _cache_dir(args))
    bs = af.graded_branch_to_g(rs, aw, args.grade_max, gc)
    support = sorted({nu for nu, _ in bs.entries}, key=lambda v: _weight_key(rs, v))
    rows = [{"labels": [int(m) for m in rs.dynkin_labels(nu)],
             "sigma": af.string_function(rs, aw, nu, args.grade_max, gc)}
            for nu in support]
    lines = [f"string functions of {rs.name} level {aw.level} weight "
             f"({_labels_str(labels)}), grades 0..{args.grade_max}:"]
    for r in rows:
        lines.append(f"  nu = ({_labels_str(r['labels'])})  sigma(q) = {r['sigma']}")
    fields = dict(algebra=rs.name, weight=labels, level=aw.level,
                  grade_max=args.grade_max, rows=rows)
    if args.emit == "matrix":
        bound = max(rs.inner(rs.rho, nu) for nu in support)
        mm = af.multiplicity_matrix(rs, bound)
        minv = af.invert_multiplicity_matrix(mm)
        idx = {v: i for i, v in enumerate(mm.basis)}
        n = len(mm.basis)
        sigma = [[gc.layers[g].get(v) for g in range(args.grade_max + 1)]
                 for v in mm.basis]
        bvec = [[sum(minv[i][j] * sigma[j][g] for j in range(n))
                 for g in range(args.grade_max + 1)] for i in range(n)]
        direct = [[bs.entries.get((v, g), 0) for g in range(args.grade_max + 1)]
                  for v in mm.basis]
        ident = all(sum(minv[i][l] * mm.mat[l][j] for l in range(n)) == (i == j)
                    for i in range(n) for j in range(n))
        consistent = ident and bvec == direct
        basis_labels = [[int(m) for m in rs.dynkin_labels(v)] for v in mm.basis]
        lines.append(f"multiplicity matrix basis (labels): {basis_labels}")
        lines.append("M:")
        lines += ["  " + " ".join(f"{x:3d}" for x in row) for row in mm.mat]
        lines.append("M^-1:")
        lines += ["  " + " ".join(f"{x:3d}" for x in row) for row in minv]
        lines.append("b = M^-1 sigma (rows follow the basis):")
        lines += [f"  {row}" for row in bvec]
        lines.append(f"consistency (M^-1 M = 1 and b matches direct decomposition): "
                     f"{consistent}")
        fields.update(basis=basis_labels, matrix=mm.mat, inverse=minv,
                      b_from_sigma=bvec, consistent=consistent)
        if not consistent:
            Emitter(args.format).record("strings", lines, **fields)
            return 1
    Emitter(args.format).record("strings", lines, **fields)
    return 0


def cmd_qdim(args):
    errors = []
    rs = _load_algebra(args, errors)
    labels, aw = _affine_inputs(args, errors, rs)
    _require(errors)
    gc = cached_affine_character(rs, aw, args.grade_max, _cache_dir(args))
    series = af.q_dimension(rs, aw, args.grade_max, gc=gc)
    lines = [f"q-dimension of {rs.name} level {aw.level} weight "
             f"({_labels_str(labels)}): {series}"]
    Emitter(args.format).record("qdim", lines, algebra=rs.name, weight=labels,
                                level=aw.level, grade_max=args.grade_max,
                                series=series)
    return 0


def cmd_verify(args):
    errors = []
    rs = _load_algebra(args, errors) if args.algebra else None
    identities = ([args.identity] if args.identity != "all"
                  else ["weyl", "branching", "denominator",
                        "theta-product", "theta-sum"])
    needs_splint = any(i != "weyl" for i in identities)
    s = _load_splint(args, rs, errors) if needs_splint else None
    if s is not None and rs is None:
        rs = s.ambient
    if rs is None:
        errors.append("--algebra or --splint is required")
    _require(errors)
    n = args.grade_max
    results = []
    for ident in identities:
        if ident == "weyl":
            from .characters import singular_element, weyl_denominator
            ok = singular_element(rs, rs.weight_from_labels([0] * rs.rank)) == \
                weyl_denominator(rs)
            results.append(("weyl", ok, "group-ring Weyl denominator identity", None))
        elif ident == "branching":
            rep = s.branching_status(args.max_label)
            detail = "tilde-weight branching equals subtraction oracle" \
                if rep.passed else "; ".join(rep.problems[:2])
            results.append(("branching", rep.passed, detail, None))
        elif ident == "denominator":
            rep = qs.verify_denominator_splint(s, n)
            results.append(("denominator", rep.passed, rep.detail, rep.first_mismatch))
        elif ident == "theta-product":
            rep = qs.verify_theta_products(s, n)
            results.append(("theta-product", rep.passed, rep.detail,
                            rep.first_mismatch))
        elif ident == "theta-sum":
            rep = qs.verify_theta_sums(s, n)
            results.append(("theta-sum", rep.passed, rep.detail,
                            rep.first_mismatch))
    lines = []
    rows = []
    for name, ok, detail, mismatch in results:
        mark = "pass" if ok else "FAIL"
        extra = "" if mismatch is None else f" (first mismatch at q^{mismatch})"
        lines.append(f"{name}: {mark} - {detail}{extra}")
        rows.append({"identity": name, "passed": ok, "detail": detail,
                     "first_mismatch": None if mismatch is None else str(mismatch)})
    Emitter(args.format).record("verify", lines,
                                splint=None if s is None else s.name,
                                algebra=rs.name, grade_max=n, results=rows)
    return 0 if all(ok for _, ok, _, _ in results) else 1


# ---------------------------------------------------------------------------
# parser


def _add_common(p, weight=False, level=False, grade=False, splint=False, oracle=False):
    p.add_argument("--algebra", help="simple factors, e.g. G2 or A1xA1")
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.add_argument("--cache-dir", help=f"cache directory (default ${CACHE_ENV})")
    p.add_argument("--no-cache", action="store_true", help="bypass the cache")
    if weight:
        p.add_argument("--weight", help="Dynkin labels, comma separated")
    if level:
        p.add_argument("--level", type=int, help="affine level k")
        p.add_argument("--grade-max", type=int, default=3, help="grade cutoff N")
    if grade and not level:
        p.add_argument("--grade-max", type=int, default=4, help="grade cutoff N")
    if splint:
        p.add_argument("--splint", help="catalog splint, e.g. A2A2 or G2:A2A2")
        p.add_argument("--splint-file", help="load a splint from a JSON file")
    if oracle:
        p.add_argument("--oracle", action="store_true",
                       help="also run the brute-force route and report a match flag")


def make_parser():
    ap = argparse.ArgumentParser(
        prog="splintbranch",
        description="Exact splint branching for simple and affine Lie algebras")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("roots", help="root system data")
    _add_common(p)
    p.set_defaults(func=cmd_roots)

    p = sub.add_parser("splint", help="list or check catalog splints")
    p.add_argument("action", choices=["list", "check"])
    _add_common(p, splint=True)
    p.set_defaults(func=cmd_splint)

    p = sub.add_parser("fan", help="injection fan coefficients")
    _add_common(p, splint=True)
    p.set_defaults(func=cmd_fan)

    p = sub.add_parser("branch", help="finite branching through a splint")
    _add_common(p, weight=True, splint=True, oracle=True)
    p.set_defaults(func=cmd_branch)

    p = sub.add_parser("affine-branch", help="graded branching to the subalgebra")
    _add_common(p, weight=True, level=True, splint=True, oracle=True)
    p.set_defaults(func=cmd_affine_branch)

    p = sub.add_parser("strings", help="string functions of an affine module")
    _add_common(p, weight=True, level=True)
    p.add_argument("--emit", choices=["series", "matrix"], default="series",
                   help="also emit the multiplicity matrix machinery")
    p.set_defaults(func=cmd_strings)

    p = sub.add_parser("qdim", help="q-dimension series")
    _add_common(p, weight=True, level=True)
    p.set_defaults(func=cmd_qdim)

    p = sub.add_parser("verify", help="verify splint identities")
    p.add_argument("--identity",
                   choices=["weyl", "branching", "denominator",
                            "theta-product", "theta-sum", "all"],
                   default="all")
    p.add_argument("--max-label", type=int, default=None,
                   help="probe bound for the branching dual-route check")
    _add_common(p, grade=True, splint=True)
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv=None):
    ap = make_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
