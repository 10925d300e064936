"""Command-line front end.

Every subcommand prints a tdlab-report/1 JSON document (verify prints a
human summary unless --json is given) and exits 0 when all checks pass,
1 on any failed check, 2 on malformed input, and 3 when the only non-pass
statuses are skip/inconclusive.
"""

from __future__ import annotations

import argparse
import sys as _sys

from . import appshell as app
from . import conjlab as cj
from . import d4orbit as d4
from . import formlab as fl
from . import splitparam as sp
from . import tdcore as td
from .scalars import FieldError, PrimeField, RationalField
from .tdcore import FAIL, PASS, SKIP, Check, InvariantViolation, ValidateOptions


def parse_field_spec(text: str):
    if text == "rational":
        return RationalField()
    if text.startswith("p="):
        try:
            return PrimeField(int(text[2:]))
        except (ValueError, FieldError) as err:
            raise app.InputError(f"bad field spec {text!r}: {err}") from err
    raise app.InputError(f"bad field spec {text!r} (expected rational or p=<prime>)")


def _report_doc(field, checks, extra: dict | None = None) -> dict:
    doc = {"format": app.FORMAT_REPORT, "checks": app.checks_to_json(field, checks)}
    if extra:
        for k, v in extra.items():
            doc[k] = app.to_jsonable(field, v)
    return doc


def _emit(doc: dict) -> int:
    _sys.stdout.write(app.dumps_document(doc))
    return app.exit_code_from_checks(doc["checks"])


def _validate_loaded(path: str, irreducibility: str | None = None):
    sys, assume_note = app.load_system(path)
    strategy = irreducibility or ("assume" if assume_note else "auto")
    if strategy == "exhaustive":
        strategy = "exhaustive_gfp"
    options = ValidateOptions(irreducibility=strategy, assume_note=assume_note)
    try:
        report = td.validate(sys, options)
    except ValueError as err:
        raise app.InputError(str(err)) from err
    return sys, report


def cmd_verify(args) -> int:
    sys, report = _validate_loaded(args.file, args.irreducibility)
    doc = _report_doc(sys.field, report.checks)
    if args.json:
        return _emit(doc)
    for c in report.checks:
        line = f"{c.id}: {c.status}"
        if c.status != PASS and c.witness is not None:
            line += f"  {app.to_jsonable(sys.field, c.witness)}"
        print(line)
    print(f"overall: {report.overall}")
    if report.shape:
        print(f"shape: {list(report.shape)}  sharp: {report.sharp}")
    return app.exit_code_from_checks(doc["checks"])


def _sharp_pipeline(path: str):
    """Load, validate, and compute split data; None zetas when unusable."""
    sys, report = _validate_loaded(path)
    if not report.passed() or not report.sharp:
        return sys, report, None
    decomp = sp.split_decomposition(sys, report.idempotents, report.idempotents_star)
    zetas = sp.split_sequence(sys, decomp)
    return sys, report, zetas


def cmd_params(args) -> int:
    sys, report, zetas = _sharp_pipeline(args.file)
    if zetas is None:
        return _emit(_report_doc(sys.field, report.checks))
    try:
        array = sp.parameter_array(sys, zetas)
    except InvariantViolation as err:
        checks = report.checks + [Check("split/parameter_array", FAIL, {"error": str(err)})]
        return _emit(_report_doc(sys.field, checks))
    checks = report.checks + [Check("split/parameter_array", PASS)]
    return _emit(_report_doc(sys.field, checks, {"parameter_array": array}))


def cmd_orbit(args) -> int:
    sys, report, zetas = _sharp_pipeline(args.file)
    if zetas is None:
        return _emit(_report_doc(sys.field, report.checks))
    try:
        out = d4.orbit_report(sys)
    except InvariantViolation as err:
        checks = report.checks + [Check("orbit/relatives_validate", FAIL, {"error": str(err)})]
        return _emit(_report_doc(sys.field, checks))
    checks = report.checks + out["checks"]
    return _emit(_report_doc(sys.field, checks, {"orbit": out["orbit"], "q": out["q"]}))


def cmd_form(args) -> int:
    sys, report, zetas = _sharp_pipeline(args.file)
    if zetas is None:
        return _emit(_report_doc(sys.field, report.checks))
    checks = list(report.checks)
    form, form_cks = fl.invariant_form(sys)
    checks.extend(form_cks)
    extra = {}
    if form is not None:
        extra["gram"] = form.gram
        checks.extend(fl.form_checks(form, sys, report.idempotents, report.idempotents_star))
        _, anti_cks = fl.anti_automorphism(form, sys, report.idempotents, report.idempotents_star)
        checks.extend(anti_cks)
    return _emit(_report_doc(sys.field, checks, extra))


def cmd_conjectures(args) -> int:
    sys, report = _validate_loaded(args.file)
    if not report.passed():
        return _emit(_report_doc(sys.field, report.checks))
    checks = list(report.checks)
    extra = {}
    try:
        algs = cj.generate_subalgebras(sys)
        corner, corner_cks = cj.corner_algebra_checks(
            sys,
            algs["T"],
            algs["D"],
            algs["Dstar"],
            report.idempotents_star[0],
            report.idempotents[0],
            depth=args.chain_depth,
        )
        checks.extend(corner_cks)
        verdict, field_cks = cj.field_check(
            sys.field, corner, report.idempotents_star[0], report.idempotents_star.ranks[0]
        )
        checks.extend(field_cks)
        extra["subalgebra_dims"] = {
            "D": algs["D"].dim,
            "Dstar": algs["Dstar"].dim,
            "T": algs["T"].dim,
            "corner": corner.dim,
        }
        extra["corner_field_verdict"] = verdict
    except InvariantViolation as err:
        checks.append(Check("conj/subalgebras", FAIL, {"error": str(err)}))
    if report.sharp:
        decomp = sp.split_decomposition(sys, report.idempotents, report.idempotents_star)
        zetas = sp.split_sequence(sys, decomp)
        checks.extend(cj.pa_conditions(sys.field, sys.thetas, sys.thetas_star, zetas))
    else:
        checks.append(
            Check("conj/pa_conditions", SKIP, {"reason": "system is not sharp; no parameter array"})
        )
    return _emit(_report_doc(sys.field, checks, extra))


def _parse_scalar_list(field, text: str):
    items = [t.strip() for t in text.split(",") if t.strip()]
    if not items:
        raise app.InputError("empty scalar list")
    try:
        return tuple(field.parse(t) for t in items)
    except FieldError as err:
        raise app.InputError(str(err)) from err


def cmd_gen(args) -> int:
    if args.kind != "leonard":
        raise app.InputError(f"unknown generator {args.kind!r}")
    field = parse_field_spec(args.field)
    thetas = _parse_scalar_list(field, args.theta)
    thetas_star = _parse_scalar_list(field, args.theta_star)
    phis = _parse_scalar_list(field, args.phi)
    if len(thetas) != len(thetas_star):
        raise app.InputError("theta and theta-star must have equal length")
    if len(phis) != len(thetas) - 1:
        raise app.InputError("phi must have one entry fewer than theta")
    sys, report = app.gen_leonard_split(field, thetas, thetas_star, phis)
    doc = app.document_from_system(sys)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(app.dumps_document(doc))
    extra = {"system": doc} if not args.output else {}
    return _emit(_report_doc(field, report.checks, extra))


def cmd_fuzz(args) -> int:
    field = parse_field_spec(args.field)
    config = app.RunConfig(
        seed=args.seed,
        trials=args.trials,
        d_max=args.d_max,
        field=field,
        irreducibility=args.irreducibility,
        jobs=args.jobs,
        chain_depth=args.chain_depth,
    )
    doc = app.fuzz_run(config, out_dir=args.output)
    return _emit(doc)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tdlab",
        description="Exact verification of tridiagonal pairs and systems over Q and GF(p).",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="validate a system document")
    p.add_argument("file")
    p.add_argument(
        "--irreducibility",
        choices=["auto", "burnside", "exhaustive", "assume"],
        default=None,
    )
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("params", help="parameter array of a sharp system")
    p.add_argument("file")
    p.set_defaults(func=cmd_params)

    p = sub.add_parser("orbit", help="all eight relatives with their split data")
    p.add_argument("file")
    p.set_defaults(func=cmd_orbit)

    p = sub.add_parser("form", help="invariant bilinear form and anti-automorphism")
    p.add_argument("file")
    p.set_defaults(func=cmd_form)

    p = sub.add_parser("conjectures", help="subalgebra and corner-algebra checks")
    p.add_argument("file")
    p.add_argument("--chain-depth", type=int, default=3)
    p.set_defaults(func=cmd_conjectures)

    p = sub.add_parser("gen", help="construct an instance from split data")
    p.add_argument("kind", choices=["leonard"])
    p.add_argument("--theta", required=True)
    p.add_argument("--theta-star", dest="theta_star", required=True)
    p.add_argument("--phi", required=True)
    p.add_argument("--field", default="rational")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("fuzz", help="seeded random instance stream with the full identity suite")
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--d-max", dest="d_max", type=int, default=5)
    p.add_argument("--field", default="rational")
    p.add_argument(
        "--irreducibility",
        choices=["eigen_subset", "auto", "burnside", "exhaustive_gfp"],
        default="eigen_subset",
    )
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--chain-depth", dest="chain_depth", type=int, default=3)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_fuzz)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except app.InputError as err:
        print(f"error: {err}", file=_sys.stderr)
        return 2


def main() -> None:
    raise SystemExit(run())


if __name__ == "__main__":
    main()
