"""Batch command line front end with reproducible, seedable runs.

Subcommands: appendix, lemma-a2, bundle (elm | plan | self-int | recover |
cor17 | thm41 | thm16), cubic, models, fan (validate | desingularize |
cartier | h0).  Reports are line-oriented key/value documents with stable
field order; an identical configuration renders to byte-identical
structured output, and every header carries the seed in use.

Exit codes: 0 success, 1 usage or parse failure, 2 mathematical error
condition (unbounded polyhedron, degenerate count, contradiction, retries
exhausted, invalid targets), 3 internal invariant failure.
"""

from __future__ import annotations

import argparse
import sys
from math import gcd
from pathlib import Path

from .bundles import (
    DivisorData,
    InapplicableReductionError,
    InvalidSplittingError,
    SplittingType,
    elementary_transform,
    fibration_reduction,
    point_blowup,
    quasiline_plan,
    rationality_criterion,
    recover_splitting,
    self_intersections,
    strong_rationality_criterion,
)
from .cubic import (
    DegenerateError,
    RetriesExhaustedError,
    conic_count_certificate,
    count_lines_through_point,
    reducible_demo_instance,
)
from .divisors import (
    UnboundedPolyhedronError,
    SupportFunction,
    cartier_certificate,
    count_lattice_points,
    quotient_extension_check,
    quotient_hyperplane_support,
    sections_polyhedron,
)
from .fans import (
    BadDimensionError,
    Fan,
    cone_multiplicity,
    cyclic_quotient_fans,
    desingularize,
    is_smooth,
    is_toric_morphism,
    make_fan,
    validate_fan,
)
from .models import BUILTIN_RECORDS, ModelRecord, propagate
from .report import ParseError, parse, render

MAX_QUOTIENT_N = 12

MATH_ERRORS = (
    UnboundedPolyhedronError,
    DegenerateError,
    RetriesExhaustedError,
    InvalidSplittingError,
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit(2); remap to exit 1
        raise UsageError(message)


def _parse_int_list(text: str, flag: str) -> tuple[int, ...]:
    values = []
    for position, token in enumerate(text.split(","), start=1):
        token = token.strip()
        try:
            values.append(int(token))
        except ValueError:
            raise UsageError(f"{flag}: position {position}: invalid integer {token!r}")
    if not values:
        raise UsageError(f"{flag}: at least one integer is required")
    return tuple(values)


def build_parser() -> _Parser:
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=("human", "structured"), default="human")
    common.add_argument("--out", type=str, default=None)

    parser = _Parser(prog="quasilines", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("appendix", parents=[common],
                       help="quotient fans, Cartier dichotomy and section count")
    p.add_argument("--n", type=int, required=True)

    p = sub.add_parser("lemma-a2", parents=[common],
                       help="sampled divisor extensions on the smooth refinement")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--bound", type=int, default=5)
    p.add_argument("--samples", type=int, default=100)

    p = sub.add_parser("bundle", parents=[common], help="splitting-type calculus")
    p.add_argument("subop", choices=(
        "elm", "plan", "self-int", "recover", "cor17", "thm41", "thm16", "point",
    ))
    p.add_argument("--type", dest="type_", type=str, default=None)
    p.add_argument("--targets", type=str, default=None)
    p.add_argument("--anchor", type=int, default=None)
    p.add_argument("--d", type=int, default=None)
    p.add_argument("--dimD", dest="dim_d", type=int, default=None)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--quasiline", choices=("true", "false"), default=None)

    p = sub.add_parser("cubic", parents=[common],
                       help="certified line count through a point of a cubic threefold")
    p.add_argument("--bound", type=int, default=9)
    p.add_argument("--demo", choices=("reducible",), default=None)

    p = sub.add_parser("models", parents=[common], help="invariant propagation")
    p.add_argument("record", nargs="?", default=None,
                   help="builtin record name: " + ", ".join(sorted(BUILTIN_RECORDS)))
    p.add_argument("--file", type=str, default=None)
    p.add_argument("--n", type=int, default=None)

    p = sub.add_parser("fan", parents=[common], help="fan file operations")
    p.add_argument("subop", choices=("validate", "desingularize", "cartier", "h0"))
    p.add_argument("fanfile", nargs="?", default=None)
    p.add_argument("--values", type=str, default=None)
    p.add_argument("--divisor", type=str, default=None)

    return parser


def _as_index_tuple(item) -> tuple[int, ...]:
    if isinstance(item, int):
        return (item,)
    return tuple(int(x) for x in item)


def fan_from_doc(doc: dict) -> Fan:
    for key in ("dim", "rays", "cones"):
        if key not in doc:
            raise UsageError(f"fan document is missing the key {key!r}")
    dim = doc["dim"]
    if not isinstance(dim, int) or dim < 1:
        raise UsageError("fan dim must be a positive integer")
    rays = [_as_index_tuple(item) for item in doc["rays"]]
    cones = [_as_index_tuple(item) for item in doc["cones"]]
    return make_fan(dim, rays, cones)


def _load_fan(args) -> Fan:
    path = args.fanfile
    if path is None and args.divisor is not None:
        doc = parse(Path(args.divisor).read_text())
        ref = doc.get("fan")
        if not isinstance(ref, str):
            raise UsageError("divisor file does not reference a fan file")
        path = str(Path(args.divisor).parent / ref)
    if path is None:
        raise UsageError("a fan file is required")
    return fan_from_doc(parse(Path(path).read_text()))


def _load_values(args, fan: Fan) -> tuple[int, ...]:
    if args.values is not None:
        values = _parse_int_list(args.values, "--values")
    elif args.divisor is not None:
        doc = parse(Path(args.divisor).read_text())
        if "values" not in doc:
            raise UsageError("divisor file has no values key")
        raw = doc["values"]
        values = (raw,) if isinstance(raw, int) else tuple(int(x) for x in raw)
    else:
        raise UsageError("provide --values or --divisor")
    if len(values) != len(fan.rays):
        raise UsageError(
            f"{len(values)} values for {len(fan.rays)} rays"
        )
    return values


def _require(args, flag: str, attr: str):
    value = getattr(args, attr)
    if value is None:
        raise UsageError(f"{flag} is required for this operation")
    return value


def _type_from(args) -> SplittingType:
    return SplittingType(_parse_int_list(_require(args, "--type", "type_"), "--type"))


def _cmd_appendix(args) -> tuple[list, int]:
    if args.n < 2 or args.n > MAX_QUOTIENT_N:
        raise BadDimensionError(f"--n must be between 2 and {MAX_QUOTIENT_N}")
    sub_fan, big_fan, inclusion = cyclic_quotient_fans(args.n)
    psi_big = quotient_hyperplane_support(big_fan)
    psi_sub = quotient_hyperplane_support(sub_fan)
    cert_sub = cartier_certificate(psi_sub)
    cert_big = cartier_certificate(psi_big)
    polyhedron = sections_polyhedron(psi_big)
    counted = count_lattice_points(polyhedron)
    assert cert_sub.cartier and not cert_big.cartier
    witness = cert_big.failure_solution
    denominator_lcm = 1
    for value in witness:
        denominator_lcm = denominator_lcm * value.denominator // gcd(
            denominator_lcm, value.denominator
        )
    entries = [
        ("report", "appendix"),
        ("seed", args.seed),
        ("n", args.n),
        ("quotient-rays", [ray for ray in big_fan.rays]),
        ("quotient-cones", [cone for cone in big_fan.max_cones]),
        ("quotient-multiplicities",
         tuple(cone_multiplicity(big_fan, c) for c in big_fan.max_cones)),
        ("quotient-smooth", is_smooth(big_fan)),
        ("projective-rays", [ray for ray in sub_fan.rays]),
        ("projective-smooth", is_smooth(sub_fan)),
        ("quotient-map", is_toric_morphism(inclusion, sub_fan, big_fan)),
        ("divisor-values", psi_big.values),
        ("cartier-on-projective", cert_sub.cartier),
        ("projective-cone-duals", [dual for dual in cert_sub.cone_duals]),
        ("cartier-on-quotient", cert_big.cartier),
        ("failing-cone", cert_big.failure_cone),
        ("failing-cone-rays", big_fan.max_cones[cert_big.failure_cone]),
        ("rational-solution", witness),
        ("witness-denominator-lcm", denominator_lcm),
        ("constraints", [normal + (rhs,) for normal, rhs in polyhedron.constraints]),
        ("lattice-points", [point for point in counted.points]),
        ("section-count", counted.count),
        ("h0", counted.count),
    ]
    return entries, 0


def _cmd_lemma_a2(args) -> tuple[list, int]:
    if args.n not in (2, 3):
        raise BadDimensionError("--n must be 2 or 3 for the extension suite")
    report, quotient, refined = quotient_extension_check(
        args.n, args.bound, args.samples, args.seed
    )
    entries = [
        ("report", "lemma-a2"),
        ("seed", args.seed),
        ("n", args.n),
        ("coeff-bound", args.bound),
        ("samples-requested", report.requested),
        ("samples-tested", report.tested),
        ("samples-cartier", report.cartier_samples),
        ("original-rays", len(quotient.rays)),
        ("original-cones", len(quotient.max_cones)),
        ("refined-rays", len(refined.rays)),
        ("refined-cones", len(refined.max_cones)),
        ("refined-smooth", is_smooth(refined)),
        ("base-section-count", report.base_count),
        ("counts", report.counts if report.counts else "none"),
        ("containment-failures", report.containment_failures),
        ("count-violations", report.count_violations),
        ("all-ok", report.all_ok),
        ("note", report.note),
    ]
    return entries, 0


def _cmd_bundle(args) -> tuple[list, int]:
    header = [("report", f"bundle-{args.subop}"), ("seed", args.seed)]
    if args.subop == "elm":
        t = _type_from(args)
        return header + [("type", str(t)), ("result", str(elementary_transform(t)))], 0
    if args.subop == "point":
        t = _type_from(args)
        return header + [("type", str(t)), ("result", str(point_blowup(t)))], 0
    if args.subop == "self-int":
        t = _type_from(args)
        return header + [("type", str(t)),
                         ("self-intersections", self_intersections(t))], 0
    if args.subop == "recover":
        targets = _parse_int_list(_require(args, "--targets", "targets"), "--targets")
        anchor = _require(args, "--anchor", "anchor")
        result = recover_splitting(targets, anchor)
        return header + [("targets", targets), ("anchor", anchor),
                         ("result", str(result))], 0
    if args.subop == "plan":
        t = _type_from(args)
        plan = quasiline_plan(t)
        return header + [
            ("type", str(t)),
            ("steps", plan.steps),
            ("almost-line", plan.almost_line),
            ("trajectory", [str(step) for step in plan.types]),
            ("kinds", list(plan.kinds) if plan.kinds else "none"),
        ], 0
    if args.subop == "cor17":
        t = _type_from(args)
        n = args.n if args.n is not None else len(t) + 1
        dd = DivisorData(d_y=_require(args, "--d", "d"),
                         dim_d=_require(args, "--dimD", "dim_d"), n=n)
        verdict = rationality_criterion(t, dd)
        return header + [("type", str(t)), ("d", dd.d_y), ("dimD", dd.dim_d),
                         ("n", n), ("rational-criterion", verdict)], 0
    if args.subop == "thm41":
        dd = DivisorData(d_y=_require(args, "--d", "d"),
                         dim_d=_require(args, "--dimD", "dim_d"),
                         n=_require(args, "--n", "n"))
        has_quasiline = _require(args, "--quasiline", "quasiline") == "true"
        verdict = strong_rationality_criterion(dd, has_quasiline)
        return header + [("d", dd.d_y), ("dimD", dd.dim_d), ("n", dd.n),
                         ("quasiline", has_quasiline),
                         ("strongly-rational-criterion", verdict)], 0
    if args.subop == "thm16":
        t = _type_from(args)
        n = args.n if args.n is not None else len(t) + 1
        dd = DivisorData(d_y=_require(args, "--d", "d"),
                         dim_d=_require(args, "--dimD", "dim_d"), n=n)
        base = header + [("type", str(t)), ("d", dd.d_y), ("dimD", dd.dim_d), ("n", n)]
        try:
            reduction = fibration_reduction(t, dd)
        except InapplicableReductionError as exc:
            return base + [("applicable", False), ("reason", str(exc))], 0
        return base + [
            ("applicable", True),
            ("reduced-type", str(reduction.reduced)),
            ("reduced-d", reduction.d_y),
            ("reduced-dimD", reduction.dim_d),
            ("target-dim", reduction.target_dim),
        ], 0
    raise UsageError(f"unknown bundle operation {args.subop!r}")


def _cmd_cubic(args) -> tuple[list, int]:
    header = [("report", "cubic"), ("seed", args.seed),
              ("coefficient-bound", args.bound)]
    if args.demo == "reducible":
        f, point = reducible_demo_instance()
        count_lines_through_point(f, point)  # raises DegenerateError
        raise AssertionError("the reducible demo must be degenerate")
    certificate = conic_count_certificate(args.seed, args.bound)
    report = certificate.report
    coefficients = [
        exps + (coeff,)
        for exps, coeff in sorted(certificate.cubic.terms.items())
    ]
    entries = header + [
        ("attempt", certificate.attempt),
        ("point", certificate.point),
        ("cubic-coefficients", coefficients),
        ("resultant-coefficients", report.resultant),
        ("resultant-degree", report.resultant_degree),
        ("squarefree", report.squarefree),
        ("no-loss-at-infinity", report.no_loss_at_infinity),
        ("full-fibre-degrees", report.full_fibre_degrees),
        ("generic", report.generic),
        ("count", report.count),
        ("e", certificate.e),
    ]
    return entries, 0


_RECORD_KEYS = {
    "name": str, "dim": int, "e": int, "e0": int, "etilde": int, "b": int,
    "ex": int, "g3": bool, "rational": bool, "unirational": bool,
    "strongly_rational": bool,
}


def _record_from_doc(doc: dict, default_name: str) -> ModelRecord:
    fields: dict = {"name": default_name}
    for key, value in doc.items():
        if key not in _RECORD_KEYS:
            raise UsageError(f"unknown record field {key!r}")
        expected = _RECORD_KEYS[key]
        if expected is bool and not isinstance(value, bool):
            raise UsageError(f"record field {key!r} must be true or false")
        if expected is int and (isinstance(value, bool) or not isinstance(value, int)):
            raise UsageError(f"record field {key!r} must be an integer")
        fields[key] = value
    try:
        return ModelRecord(**fields)
    except ValueError as exc:
        raise UsageError(str(exc))


def _cmd_models(args) -> tuple[list, int]:
    if args.file is not None:
        path = Path(args.file)
        record = _record_from_doc(parse(path.read_text()), path.stem)
    elif args.record is not None:
        builder = BUILTIN_RECORDS.get(args.record)
        if builder is None:
            raise UsageError(
                f"unknown builtin record {args.record!r}; choose from "
                + ", ".join(sorted(BUILTIN_RECORDS))
            )
        record = builder(args.n) if args.n is not None else builder()
    else:
        raise UsageError("provide a builtin record name or --file")
    result = propagate(record)
    before = record.known_fields()
    after = result.record.known_fields()

    def fmt(value):
        if isinstance(value, bool):
            return "true" if value else "false"
        return str(value)

    entries = [
        ("report", "models"),
        ("seed", args.seed),
        ("record", record.name),
        ("input-fields", [f"{k} = {fmt(v)}" for k, v in sorted(before.items())] or "none"),
        ("firings", [
            f"{f.rule} [{' '.join(f.inputs)}] -> {f.derived.replace('True', 'true').replace('False', 'false')}"
            for f in result.firings
        ] if result.firings else "none"),
        ("derived-fields", [
            f"{k} = {fmt(v)}" for k, v in sorted(after.items()) if k not in before
        ] or "none"),
        ("consistent", result.consistent),
    ]
    if result.contradiction is None:
        entries.append(("contradiction", "none"))
        return entries, 0
    entries.append(("contradiction-rule", result.contradiction.rule))
    entries.append(
        ("contradiction",
         f"{result.contradiction.rule}: {result.contradiction.detail}")
    )
    return entries, 2


def _cmd_fan(args) -> tuple[list, int]:
    fan = _load_fan(args)
    header = [("report", f"fan-{args.subop}"), ("seed", args.seed)]
    if args.subop == "validate":
        outcome = validate_fan(fan)
        return header + [
            ("dim", fan.dim),
            ("ray-count", len(fan.rays)),
            ("cone-count", len(fan.max_cones)),
            ("valid", outcome.valid),
            ("violations", list(outcome.violations) if outcome.violations else "none"),
        ], 0
    outcome = validate_fan(fan)
    if not outcome.valid:
        raise UsageError(f"invalid fan: {outcome.violations[0]}")
    if args.subop == "desingularize":
        smooth = desingularize(fan)
        return header + [
            ("dim", smooth.dim),
            ("rays", [ray for ray in smooth.rays]),
            ("cones", [cone for cone in smooth.max_cones]),
            ("smooth", is_smooth(smooth)),
            ("added-rays", len(smooth.rays) - len(fan.rays)),
        ], 0
    values = _load_values(args, fan)
    psi = SupportFunction(fan, values)
    if args.subop == "cartier":
        certificate = cartier_certificate(psi)
        entries = header + [("values", values), ("cartier", certificate.cartier)]
        if certificate.cartier:
            entries.append(("cone-duals", [dual for dual in certificate.cone_duals]))
        else:
            entries.extend([
                ("failing-cone", certificate.failure_cone),
                ("failing-cone-rays", fan.max_cones[certificate.failure_cone]),
                ("rational-solution", certificate.failure_solution),
            ])
        return entries, 0
    if args.subop == "h0":
        polyhedron = sections_polyhedron(psi)
        counted = count_lattice_points(polyhedron)
        return header + [
            ("values", values),
            ("constraints", [normal + (rhs,) for normal, rhs in polyhedron.constraints]),
            ("lattice-points", [point for point in counted.points] or "none"),
            ("section-count", counted.count),
            ("h0", counted.count),
        ], 0
    raise UsageError(f"unknown fan operation {args.subop!r}")


_DISPATCH = {
    "appendix": _cmd_appendix,
    "lemma-a2": _cmd_lemma_a2,
    "bundle": _cmd_bundle,
    "cubic": _cmd_cubic,
    "models": _cmd_models,
    "fan": _cmd_fan,
}


def run(argv) -> tuple[int, str]:
    """Execute one command; returns (exit code, rendered report)."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        return 1, render([("report", "error"), ("error", "usage"), ("detail", str(exc))])
    try:
        entries, code = _DISPATCH[args.command](args)
    except MATH_ERRORS as exc:
        entries = [
            ("report", "error"),
            ("seed", getattr(args, "seed", 0)),
            ("error", type(exc).__name__),
            ("detail", str(exc)),
        ]
        code = 2
    except (UsageError, ParseError, BadDimensionError, FileNotFoundError) as exc:
        return 1, render([("report", "error"), ("error", "usage"), ("detail", str(exc))])
    except ValueError as exc:
        return 1, render([("report", "error"), ("error", "usage"), ("detail", str(exc))])
    except AssertionError as exc:
        return 3, render([("report", "error"), ("error", "internal"), ("detail", str(exc))])
    body = render(entries)
    if args.format == "human":
        body = f"# quasilines {args.command}\n" + body
    if args.out:
        Path(args.out).write_text(body)
        return code, ""
    return code, body


def main(argv=None) -> int:
    code, text = run(sys.argv[1:] if argv is None else argv)
    if text:
        stream = sys.stderr if code == 1 else sys.stdout
        stream.write(text)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
