"""Command line front end.

    mirrorkit <command> --input spec.json [--format json|text] [--order N] [--strict]

Commands run one pipeline stage or the full verification chain on a
specification file.  Output is deterministic: identical input bytes give
identical output bytes.  Exit codes: 0 all hard checks pass (and soft ones
too under --strict), 1 invalid specification, 2 a condition flag failed in
strict mode, 3 internal inconsistency.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import ci_model, horn_system, mellin, nef_partition, pipeline, poincare, transposition
from .ci_model import CISpec

COMMANDS = ("validate", "weights", "cayley", "transpose", "mellin",
            "horn", "poincare", "nef", "verify", "family")


def _dump(data: dict, fmt: str, out) -> None:
    if fmt == "json":
        json.dump(data, out, indent=2, sort_keys=True)
        out.write("\n")


def _load_spec(path: str) -> CISpec:
    return CISpec.load(path)


def _cmd_validate(spec, args, out):
    report = ci_model.validate(spec)
    if args.format == "json":
        _dump(report.to_json(), "json", out)
    else:
        for name, value in report.checks.items():
            out.write(f"{'PASS' if value else 'FAIL'}  {name}\n")
        for note in report.notes:
            out.write(f"note: {note}\n")
    if not report.hard_ok:
        return pipeline.EXIT_INVALID
    soft_bad = [n for n in ci_model.ValidationReport.SOFT if not report.checks.get(n, True)]
    if args.strict and soft_bad:
        return pipeline.EXIT_SOFT_FAILURE
    return pipeline.EXIT_OK


def _cmd_weights(spec, args, out):
    w = ci_model.derive_weights(spec)
    qm = ci_model.charges(spec, w)
    data = {"weights": w.to_json(), "charges": qm.to_json()}
    if args.format == "json":
        _dump(data, "json", out)
    else:
        for q, vec in enumerate(w.vectors, start=1):
            out.write(f"block {q}: weights {list(vec)}\n")
        out.write(f"charges: {[list(r) for r in qm.entries]}\n")
        out.write(f"cyclic orders: {list(qm.column_lcms)}\n")
    return pipeline.EXIT_OK


def _cmd_cayley(spec, args, out):
    cm = ci_model.build_cayley(spec)
    if args.format == "json":
        _dump(cm.to_json(), "json", out)
    else:
        out.write(str(cm.matrix) + "\n")
    return pipeline.EXIT_OK


def _cmd_transpose(spec, args, out):
    tr = transposition.transpose_spec(spec)
    if args.format == "json":
        _dump(tr.to_json(), "json", out)
    else:
        out.write(json.dumps(tr.tspec.to_json(), indent=2, sort_keys=True) + "\n")
        out.write(f"nu: {tr.nu.to_json()}\n")
        for name, value in tr.condition_flags.items():
            out.write(f"{'PASS' if value else 'FAIL'}  {name}\n")
    if args.strict and not all(tr.condition_flags.values()):
        return pipeline.EXIT_SOFT_FAILURE
    return pipeline.EXIT_OK


def _cmd_mellin(spec, args, out):
    cm = ci_model.build_cayley(spec)
    tr = transposition.transpose_spec(spec)
    forms = mellin.solve_xi(cm)
    lemma = mellin.lemma_form(cm, forms)
    xi = mellin.factorize_xi(spec, tr, forms)
    t31, product = mellin.verify_theorem_31(spec, tr, xi, forms)
    data = {
        "delta": mellin.compute_delta(forms),
        "plain_product": lemma.to_json(),
        "factorized_product": product.to_json(),
        "theorem": t31.to_json(),
    }
    if args.format == "json":
        _dump(data, "json", out)
    else:
        out.write(f"Delta = {data['delta']}\n")
        out.write(f"plain form: {lemma}\n")
        out.write(f"factorized form: {t31.symbolic}\n")
        for q, xi_nu in enumerate(xi.xi_forms, start=1):
            out.write(f"  xi^({q}) = {xi_nu}\n")
        out.write(f"explicit arguments: {product}\n")
        out.write("reduces to plain form by reflection: "
                  f"{t31.reduces_to_lemma_form}\n")
    return pipeline.EXIT_OK


def _cmd_horn(spec, args, out):
    cm = ci_model.build_cayley(spec)
    forms = mellin.solve_xi(cm)
    ops = horn_system.horn_operators(spec, forms)
    tr = transposition.transpose_spec(spec)
    tw = ci_model.derive_weights(tr.tspec)
    tq = ci_model.charges(tr.tspec, tw)
    pairs = [horn_system.char_polys(tw, tq, q) for q in range(1, spec.k + 1)]
    restricted = [horn_system.restricted_operator(tw, tq, q).restricted.to_json()
                  for q in range(1, spec.k + 1)]
    sym = horn_system.symmetry_report(spec, tr, ci_model.weights_of(spec), tw)
    data = {
        "operators": [op.to_json() for op in ops],
        "char_polys": [p.to_json() for p in pairs],
        "restricted_operators": restricted,
        "m_function": horn_system.m_function(tw, tq).to_json(),
        "symmetry": sym.to_json(),
    }
    if args.format == "json":
        _dump(data, "json", out)
    else:
        for op in ops:
            out.write(f"L_{op.q}: degrees {op.degrees}\n  {op}\n")
        for p in pairs:
            out.write(f"grading {p.q}: chi={p.chi}  zero={p.factored('zero')}  "
                      f"infinity={p.factored('infinity')}\n")
        out.write(f"M = {horn_system.m_function(tw, tq)}\n")
        out.write(f"quantum orders: {list(sym.q_bars)} <-> {list(sym.t_q_bars)}\n")
    return pipeline.EXIT_OK


def _cmd_poincare(spec, args, out):
    tr = transposition.transpose_spec(spec)
    w = ci_model.weights_of(spec)
    qm = ci_model.charges(spec, w)
    ratio = poincare.poincare_structure(w, qm)
    duality = poincare.verify_duality(spec, tr)
    series = poincare.series_expand(ratio, args.order)
    table = sorted([list(e) + [c] for e, c in series.items()])
    data = {
        "structure_series": ratio.to_json(),
        "series_table": table,
        "duality": duality.to_json(),
    }
    if args.format == "json":
        _dump(data, "json", out)
    else:
        out.write(f"P_A = {ratio}\n")
        if spec.k == 1:
            coeffs = poincare.series_coefficients_1d(ratio, args.order)
            out.write(f"series to order {args.order}: {coeffs}\n")
        for name, value in duality.identities.items():
            out.write(f"{'PASS' if value else 'FAIL'}  {name}\n")
    if args.strict and not duality.ok:
        return pipeline.EXIT_SOFT_FAILURE
    return pipeline.EXIT_OK


def _cmd_nef(spec, args, out):
    tr = transposition.transpose_spec(spec)
    cm = ci_model.build_cayley(spec)
    forms = mellin.solve_xi(cm)
    nef = nef_partition.solve_dual_partition(spec, tr)
    magic = nef_partition.magic_square_check(cm, forms)
    data = {"nef": nef.to_json(), "magic_square": magic.to_json()}
    if args.format == "json":
        _dump(data, "json", out)
    else:
        for name, value in nef.flags.items():
            out.write(f"{'PASS' if value else 'FAIL'}  {name}\n")
        out.write(f"P =\n{nef.p_matrix}\n")
        out.write(f"magic square: {'found' if magic.found else 'not found'}\n")
    if args.strict and not all(nef.flags.values()):
        return pipeline.EXIT_SOFT_FAILURE
    return pipeline.EXIT_OK


def _render_verify_text(report, out) -> None:
    for stage in report.stages:
        out.write(f"[{'ok' if stage.ok else 'FAIL'}] {stage.name}\n")
        for name, value in stage.flags.items():
            out.write(f"    {'+' if value else '-'} {name}\n")
        for note in stage.notes:
            out.write(f"    note: {note}\n")
        if stage.name == "mellin-plain" and "display" in stage.payload:
            out.write(f"    {stage.payload['display']}\n")
        if stage.name == "mellin-factorized" and "display" in stage.payload:
            out.write(f"    {stage.payload['symbolic']}\n")
            for q, form in enumerate(stage.payload["xi_forms"], start=1):
                out.write(f"       xi^({q}) = {form}\n")
            out.write(f"    {stage.payload['display']}\n")
    if report.soft_failures:
        out.write("soft failures:\n")
        for item in report.soft_failures:
            out.write(f"  - {item}\n")
    if not report.hard_ok:
        out.write("verdict: FAIL\n")
    elif report.soft_failures:
        out.write("verdict: PASS (with soft failures)\n")
    else:
        out.write("verdict: PASS\n")


def _cmd_verify(spec, args, out):
    report = pipeline.run_verify(spec, order=args.order)
    if args.format == "json":
        _dump(report.to_json(), "json", out)
    else:
        _render_verify_text(report, out)
    return report.exit_code(args.strict)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="mirrorkit",
        description="Exact verification of transposition mirror constructions.")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--input", help="specification JSON file")
    parser.add_argument("--format", choices=("json", "text"), default="text")
    parser.add_argument("--order", type=int, default=8,
                        help="series expansion order (default 8)")
    parser.add_argument("--strict", action="store_true",
                        help="condition-flag failures abort instead of annotating")
    parser.add_argument("--m", type=int, default=3,
                        help="family parameter for the `family` command")
    args = parser.parse_args(argv)

    if args.order < 0:
        parser.error("--order must be nonnegative")

    if args.command == "family":
        spec = pipeline.generate_family(args.m)
        json.dump(spec.to_json(), sys.stdout, indent=2, sort_keys=True)
        sys.stdout.write("\n")
        return pipeline.EXIT_OK

    if not args.input:
        parser.error(f"{args.command} requires --input")
    try:
        spec = _load_spec(args.input)
    except (OSError, KeyError, ValueError) as exc:
        sys.stderr.write(f"cannot read specification: {exc}\n")
        return pipeline.EXIT_INVALID

    handler = {
        "validate": _cmd_validate,
        "weights": _cmd_weights,
        "cayley": _cmd_cayley,
        "transpose": _cmd_transpose,
        "mellin": _cmd_mellin,
        "horn": _cmd_horn,
        "poincare": _cmd_poincare,
        "nef": _cmd_nef,
        "verify": _cmd_verify,
    }[args.command]
    try:
        return handler(spec, args, sys.stdout)
    except transposition.InternalInvariantError as exc:
        sys.stderr.write(f"internal inconsistency: {exc}\n")
        return pipeline.EXIT_INTERNAL
    except (transposition.TranspositionError, mellin.MellinError,
            nef_partition.NefError) as exc:
        sys.stderr.write(f"precondition failed: {exc}\n")
        return pipeline.EXIT_SOFT_FAILURE
    except ci_model.SpecError as exc:
        sys.stderr.write(f"invalid specification: {exc}\n")
        return pipeline.EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
