"""Command line front end: batch invariant computation, verification
suites, and coordinate / weight / expansion reports.

Output is byte-deterministic for a fixed argument list: orderings are
taken from the input, JSON keys are sorted, and randomness is seeded.
Rationals print as "p/q" strings, integers as plain "n".

Exit codes: 0 success / all consistent, 1 a check or consistency
comparison failed, 2 malformed input or usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import random
import sys
from fractions import Fraction

from .codes import (
    GaussCode,
    bundled_knot_table,
    load_knot_table,
    parse_gauss_code,
    random_perturbations,
    rotate_basepoint,
)
from .coordinates import coordinate_table
from .diagrams import double_point_diagram
from .errors import VassilievError
from .expansion import (
    bundled_expansion,
    check_expansion,
    load_expansion,
    probes_from_names,
    solve_basis_values,
)
from .invariants import REPORT_COLUMNS, invariant_report
from .weights import (
    MAX_ENUM_DEGREE,
    check_relations,
    chord_word,
    enumerate_chord_diagrams,
    four_term_quadruples,
    realize_chord_diagram,
    w2,
    w3,
    weight_from_invariant,
    weight_system_from_function,
)

_TREFOIL = "O1+ U2+ O3+ U1+ O2+ U3+"

_METHOD_COLUMNS = {
    "all": REPORT_COLUMNS,
    "lannes": ("v2_lannes", "v3_lannes"),
    "pv": ("v2_pv", "v3_pv"),
    "thm": ("v3_thm",),
}


def _rat(value) -> str:
    return str(Fraction(value))


def _print_rows(fmt: str, columns: list[str], rows: list[dict], out) -> None:
    """One row dict per record; values already strings."""
    if fmt == "json":
        print(json.dumps({"rows": rows}, sort_keys=True), file=out)
    elif fmt == "csv":
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([row.get(c, "") for c in columns])
    else:
        for row in rows:
            print("  ".join(f"{c}={row[c]}" for c in columns if c in row), file=out)


def _corpus(args):
    if getattr(args, "table", None):
        return load_knot_table(args.table)
    return bundled_knot_table()


def _inputs(args) -> list[tuple[str, GaussCode]]:
    """(name, code) pairs from --code or --table, in input order."""
    if args.code is not None and args.table:
        raise VassilievError("give either --code or --table, not both")
    if args.code is not None:
        return [("-", parse_gauss_code(args.code))]
    return [(r.name, r.code) for r in _corpus(args)]


def cmd_compute(args) -> int:
    columns = _METHOD_COLUMNS[args.method]
    probes = probes_from_names(columns, patterns_dir=args.patterns_dir)
    rows = []
    all_consistent = True
    for name, code in _inputs(args):
        row = {"name": name}
        for probe in probes:
            row[probe.name] = _rat(probe.fn(code))
        if args.method == "all":
            consistent = (
                row["v2_lannes"] == row["v2_pv"]
                and row["v3_lannes"] == row["v3_pv"] == row["v3_thm"]
            )
            row["consistent"] = "yes" if consistent else "no"
            all_consistent = all_consistent and consistent
        rows.append(row)
    _print_rows(args.format, ["name", *columns] + (["consistent"] if args.method == "all" else []), rows, sys.stdout)
    return 0 if all_consistent else 1


def cmd_coords(args) -> int:
    rows = []
    for name, code in _inputs(args):
        for entry in coordinate_table(code):
            rows.append(
                {
                    "name": name,
                    "label": entry.label,
                    "delta": str(entry.delta),
                    "epsilon": str(entry.epsilon),
                }
            )
    _print_rows(args.format, ["name", "label", "delta", "epsilon"], rows, sys.stdout)
    return 0


def _weight_system(args):
    if args.invariant:
        from .invariants import get_invariant

        _, fn = get_invariant(args.invariant)
        if args.patterns_dir is not None:
            probe = probes_from_names([args.invariant], patterns_dir=args.patterns_dir)[0]
            fn = probe.fn
        return weight_from_invariant(fn, args.degree, args.invariant)
    if args.degree == 2:
        return weight_system_from_function(w2, 2, "w2")
    if args.degree == 3:
        return weight_system_from_function(w3, 3, "w3")
    raise VassilievError(f"no bundled weight system of degree {args.degree}; use --invariant")


def cmd_weights(args) -> int:
    ws = _weight_system(args)
    rows = [
        {"diagram": chord_word(d), "value": _rat(ws.evaluate(d))}
        for d in enumerate_chord_diagrams(args.degree)
    ]
    report = check_relations(ws)
    if args.format == "json":
        doc = {
            "rows": rows,
            "one_term_ok": report.one_term_ok,
            "four_term_ok": report.four_term_ok,
            "violations": list(report.violations),
        }
        print(json.dumps(doc, sort_keys=True))
    else:
        _print_rows(args.format, ["diagram", "value"], rows, sys.stdout)
        print(f"one_term_ok={report.one_term_ok}  four_term_ok={report.four_term_ok}")
        for v in report.violations:
            print(f"violation: {v}")
    return 0 if report.one_term_ok and report.four_term_ok else 1


def cmd_expansion(args) -> int:
    if args.file:
        expansion = load_expansion(args.file)
    else:
        expansion = bundled_expansion(args.degree)
    corpus = _corpus(args)
    names = [n for n in ("v2", "v3") if probes_from_names([n])[0].degree <= expansion.degree]
    probes = probes_from_names(names, patterns_dir=args.patterns_dir)
    if args.action == "check":
        report = check_expansion(expansion, probes, corpus)
        rows = [
            {"probe": r.probe, "knot": r.knot, "residual": _rat(r.residual)}
            for r in report.rows
        ]
        _print_rows(args.format, ["probe", "knot", "residual"], rows, sys.stdout)
        return 0 if report.all_zero else 1
    report = solve_basis_values(expansion, probes, corpus)
    rows = []
    for solved in report.probes:
        if not solved.consistent:
            rows.append(
                {"probe": solved.probe, "knot": "-", "value": "-",
                 "certificate": solved.certificate}
            )
            continue
        for knot in sorted(solved.values):
            rows.append(
                {"probe": solved.probe, "knot": knot,
                 "value": _rat(solved.values[knot]), "certificate": ""}
            )
    _print_rows(args.format, ["probe", "knot", "value", "certificate"], rows, sys.stdout)
    return 0 if report.consistent else 1


def _suite_calibration(args):
    checks = 0
    for word, want in (("", 0), (_TREFOIL, 1)):
        code = parse_gauss_code(word)
        rep = invariant_report(code, patterns_dir=args.patterns_dir)
        for column in REPORT_COLUMNS:
            if rep.values[column] != want:
                return False, f"{column} on {word!r} gave {rep.values[column]}, want {want}"
            checks += 1
    return True, f"{checks} values"


def _suite_relations(args):
    for ws in (weight_system_from_function(w2, 2, "w2"),
               weight_system_from_function(w3, 3, "w3")):
        report = check_relations(ws)
        if not (report.one_term_ok and report.four_term_ok):
            return False, f"{ws.name}: {report.violations[0]}"
    const = weight_system_from_function(lambda d: 1, 2, "const1")
    report = check_relations(const)
    if report.one_term_ok:
        return False, "constant system passed the isolated-chord check"
    return True, "w2, w3 pass; constant-1 control fails as it should"


def _suite_weights(args):
    pairs = (
        (weight_from_invariant(probes_from_names(["v2"], args.patterns_dir)[0].fn, 2, "v2"), w2, 2),
        (weight_from_invariant(probes_from_names(["v3"], args.patterns_dir)[0].fn, 3, "v3"), w3, 3),
    )
    checks = 0
    for derived, reference, degree in pairs:
        for d in enumerate_chord_diagrams(degree):
            if derived.evaluate(d) != reference(d):
                return False, f"degree {degree} mismatch on {chord_word(d)}"
            checks += 1
    low = weight_from_invariant(probes_from_names(["v2"], args.patterns_dir)[0].fn, 3, "v2@3")
    for d in enumerate_chord_diagrams(3):
        if low.evaluate(d) != 0:
            return False, f"v2 weight at degree 3 nonzero on {chord_word(d)}"
        checks += 1
    return True, f"{checks} diagrams"


def _suite_4t(args):
    degree = args.degree
    if degree not in (2, 3):
        raise VassilievError("the 4t suite needs --degree 2 or 3")
    ws = weight_system_from_function(w2 if degree == 2 else w3, degree, f"w{degree}")
    quadruples = four_term_quadruples(degree)
    for q in quadruples:
        total = sum(s * ws.evaluate(d) for s, d in zip(q.signs, q.diagrams))
        if total != 0:
            return False, f"quadruple sums to {total}"
    return True, f"{len(quadruples)} quadruples at degree {degree}"


def _suite_expansion(args):
    corpus = _corpus(args)
    for degree, names in ((2, ["v2"]), (3, ["v2", "v3"])):
        expansion = bundled_expansion(degree)
        probes = probes_from_names(names, patterns_dir=args.patterns_dir)
        report = check_expansion(expansion, probes, corpus)
        if not report.all_zero:
            bad = next(r for r in report.rows if r.residual != 0)
            return False, f"n={degree} residual {bad.residual} at ({bad.probe}, {bad.knot})"
    solved = solve_basis_values(
        bundled_expansion(3), probes_from_names(["v2", "v3"], args.patterns_dir), corpus
    )
    values = {p.probe: dict(p.values) for p in solved.probes}
    if not solved.consistent:
        return False, "basis solve reported inconsistency"
    if values["v2"].get("4_1") != Fraction(-1) or values["v3"].get("4_1") != Fraction(0):
        return False, f"basis solve gave {values}"
    return True, "n=2 and n=3 residuals zero; solved v2=-1, v3=0 on the second basis knot"


def _suite_invariance(args):
    corpus = _corpus(args)
    probes = probes_from_names(list(REPORT_COLUMNS), patterns_dir=args.patterns_dir)
    baseline = {}
    checks = 0
    for record in corpus:
        baseline[record.name] = {p.name: p.fn(record.code) for p in probes}
        values = baseline[record.name]
        if values["v2_lannes"] != values["v2_pv"]:
            return False, f"{record.name}: v2 methods disagree"
        if not (values["v3_lannes"] == values["v3_pv"] == values["v3_thm"]):
            return False, f"{record.name}: v3 methods disagree"
        for k in range(1, len(record.code.passages)):
            rotated = rotate_basepoint(record.code, k)
            for p in probes:
                if p.fn(rotated) != values[p.name]:
                    return False, f"{record.name}: {p.name} changed at rotation {k}"
                checks += 1
    rng = random.Random(args.seed)
    for i in range(args.perturbations):
        record = corpus[i % len(corpus)]
        perturbed = random_perturbations(record.code, 1, rng)[0]
        for p in probes:
            if p.fn(perturbed) != baseline[record.name][p.name]:
                return False, f"{record.name}: {p.name} changed under perturbation {i}"
            checks += 1
    return True, f"{checks} comparisons, {args.perturbations} perturbations, seed {args.seed}"


def _suite_realization(args):
    top = min(args.degree, MAX_ENUM_DEGREE)
    count = 0
    for degree in range(top + 1):
        for d in enumerate_chord_diagrams(degree):
            code = realize_chord_diagram(d)
            if double_point_diagram(code) != d:
                return False, f"round trip failed on {chord_word(d)}"
            count += 1
    return True, f"{count} diagrams through degree {top}"


_SUITES = {
    "calibration": _suite_calibration,
    "relations": _suite_relations,
    "weights": _suite_weights,
    "4t": _suite_4t,
    "expansion": _suite_expansion,
    "invariance": _suite_invariance,
    "realization": _suite_realization,
}


def cmd_verify(args) -> int:
    names = list(_SUITES) if args.suite == "all" else [args.suite]
    failed = False
    results = []
    for name in names:
        ok, detail = _SUITES[name](args)
        results.append({"suite": name, "passed": ok, "detail": detail})
        failed = failed or not ok
    if args.format == "json":
        print(json.dumps({"suites": results}, sort_keys=True))
    else:
        for r in results:
            print(f"{'PASS' if r['passed'] else 'FAIL'} {r['suite']}: {r['detail']}")
    return 1 if failed else 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vassiliev",
        description="Knot invariants v2 and v3 from Gauss codes, with verification suites.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_io(p, code_input=True):
        if code_input:
            p.add_argument("--code", help="inline Gauss code, e.g. 'O1+ U2+ O3+ U1+ O2+ U3+'")
        p.add_argument("--table", help="JSON-lines knot table path (default: bundled)")
        p.add_argument("--format", choices=("json", "csv", "plain"), default="plain")
        p.add_argument("--patterns-dir", default=None, help="directory of .pat files overriding the bundled ones")

    p = sub.add_parser("compute", help="evaluate the invariants on knots")
    add_io(p)
    p.add_argument("--method", choices=sorted(_METHOD_COLUMNS), default="all")
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("verify", help="run verification suites")
    add_io(p, code_input=False)
    p.add_argument("--suite", choices=["all", *sorted(_SUITES)], default="all")
    p.add_argument("--perturbations", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--degree", type=int, default=3)
    p.set_defaults(func=cmd_verify, code=None)

    p = sub.add_parser("coords", help="per-crossing first-passage and sign table")
    add_io(p)
    p.set_defaults(func=cmd_coords)

    p = sub.add_parser("weights", help="weight system values on all diagrams of a degree")
    p.add_argument("--degree", type=int, default=3)
    p.add_argument("--invariant", help="derive the weight system from this invariant")
    p.add_argument("--format", choices=("json", "csv", "plain"), default="plain")
    p.add_argument("--patterns-dir", default=None)
    p.set_defaults(func=cmd_weights)

    p = sub.add_parser("expansion", help="check or solve a basis expansion")
    p.add_argument("action", choices=("check", "solve"))
    p.add_argument("--file", help="expansion JSON path (default: bundled for --degree)")
    p.add_argument("--degree", type=int, default=3, choices=(2, 3))
    p.add_argument("--table", help="JSON-lines knot table path (default: bundled)")
    p.add_argument("--format", choices=("json", "csv", "plain"), default="plain")
    p.add_argument("--patterns-dir", default=None)
    p.set_defaults(func=cmd_expansion)

    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except VassilievError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
