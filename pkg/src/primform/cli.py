"""Command-line surface: catalog info, end-to-end prepotential computation,
record verification, and Berglund-Huebsch transposition.

All structured output is canonical JSON (sorted keys, exact rationals as
"p/q" strings), so repeated runs are byte-identical.  Exit code 0 means
every check that ran passed.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .algebra import (
    format_rational,
    mono_str,
    parse_monomial,
    parse_polynomial,
    parse_rational,
)
from .catalog import CatalogEntry, EXCEPTIONAL_NAMES, load_catalog
from .frobenius import (
    IntegrabilityError,
    euler_check,
    prepotential,
    prepotential_record,
    verify_record,
    wdvv_check,
)
from .milnor import WeightedPolynomial, central_charge, infer_weights, milnor_basis
from .mirror import (
    InvertiblePolynomial,
    diagonal_symmetries,
    transpose,
    weights_from_matrix,
)
from .primitive import build_unfolding, defect_is_zero, solve_star


def _infer_variable_order(text: str) -> list[str]:
    seen = []
    name = ""
    for ch in text:
        if ch.isalpha() or (name and ch.isdigit()):
            name += ch
        else:
            if name and not name[0].isdigit() and name not in seen:
                seen.append(name)
            name = ""
    if name and not name[0].isdigit() and name not in seen:
        seen.append(name)
    return seen


def _resolve_target(args, catalog) -> tuple[str, WeightedPolynomial, CatalogEntry | None]:
    """Build the weighted polynomial from --singularity or --poly."""
    if args.singularity:
        entry = catalog.get(args.singularity)
        if entry is None:
            raise SystemExit(f"error: unknown singularity {args.singularity!r}")
        return entry.name, entry.weighted_polynomial(), entry
    if not args.poly:
        raise SystemExit("error: pass --singularity NAME or --poly EXPRESSION")
    variables = args.vars.split(",") if args.vars else _infer_variable_order(args.poly)
    if not variables:
        raise SystemExit("error: could not infer variables; pass --vars")
    poly = parse_polynomial(args.poly, variables)
    if args.weights:
        weights = [parse_rational(w) for w in args.weights.split(",")]
    else:
        weights = infer_weights(poly)
    return args.poly, WeightedPolynomial(variables, weights, poly), None


def _parse_basis(text: str, variables) -> list[tuple[int, ...]]:
    basis = []
    for chunk in text.split(","):
        exps, coeff = parse_monomial(chunk, list(variables))
        if coeff != 1:
            raise SystemExit(f"error: basis entries must be bare monomials, got {chunk!r}")
        basis.append(exps)
    return basis


def _emit(record: dict, args) -> None:
    text = json.dumps(record, indent=2, sort_keys=True) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as handle:
            handle.write(text)
    if args.format == "json" and not args.output:
        sys.stdout.write(text)


def _human_eta(eta) -> str:
    return "\n".join("  [" + ", ".join(row) + "]" for row in eta)


def cmd_info(args) -> int:
    catalog = load_catalog(args.catalog)
    name, f, _ = _resolve_target(args, catalog)
    data = milnor_basis(f)
    record = {
        "kind": "singularity-info",
        "name": name,
        "polynomial": f.render(),
        "variables": list(f.variables),
        "weights": [format_rational(q) for q in f.weights],
        "central_charge": format_rational(central_charge(f)),
        "milnor_number": data.mu,
        "basis": data.basis_strings(),
        "basis_degrees": [format_rational(d) for d in data.degrees],
        "socle": mono_str(data.socle, f.variables),
        "eta": [[format_rational(v) for v in row] for row in data.eta],
    }
    _emit(record, args)
    if args.format == "human":
        print(f"{name}: {record['polynomial']}")
        print(f"  weights: {', '.join(record['weights'])}")
        print(f"  central charge: {record['central_charge']}")
        print(f"  milnor number: {record['milnor_number']}")
        print(f"  basis: {', '.join(record['basis'])}")
        print(f"  socle: {record['socle']}")
        print("  residue pairing:")
        print(_human_eta(record["eta"]))
    return 0


def cmd_compute(args) -> int:
    catalog = load_catalog(args.catalog)
    name, f, _ = _resolve_target(args, catalog)
    basis = _parse_basis(args.basis, f.variables) if args.basis else None
    data = milnor_basis(f, basis=basis)
    state = build_unfolding(f, data, args.order)
    result = solve_star(state)

    checks = {}
    if args.check_defect:
        checks["defect"] = "pass" if defect_is_zero(result) else "fail"
    if args.order < 3:
        # Below cubic order the prepotential is identically zero and every
        # check holds vacuously.
        from .algebra import SSeries
        from .frobenius import FrobeniusData, flat_coordinates

        t_of_s = flat_coordinates(result) if args.order >= 1 else []
        frob = FrobeniusData(
            t_of_s, t_of_s, data.eta, SSeries.zero(data.mu, args.order), args.order
        )
        checks.update({"integrability": "pass", "wdvv": "pass", "euler": "pass"})
    else:
        try:
            frob = prepotential(result, data)
            checks["integrability"] = "pass"
        except IntegrabilityError as exc:
            print(f"error: integrability check failed: {exc}", file=sys.stderr)
            return 1
        wdvv = wdvv_check(frob.prepotential, data.eta, args.order)
        euler = euler_check(
            frob.prepotential, [1 - d for d in data.degrees], central_charge(f)
        )
        checks["wdvv"] = "pass" if wdvv.passed else "fail"
        checks["euler"] = "pass" if euler.passed else "fail"

    record = prepotential_record(data, frob, name, checks)
    _emit(record, args)
    if args.format == "human":
        names = [f"t{i + 1}" for i in range(data.mu)]
        print(f"{name}: prepotential through total degree {args.order}")
        print(f"  flat coordinate degrees: {', '.join(record['flat_degrees'])}")
        for mono, coeff in frob.prepotential.sorted_terms():
            print(f"  {format_rational(coeff)} * {mono_str(mono, names)}")
        print(f"  checks: {checks}")
    failed = [k for k, v in checks.items() if v != "pass"]
    if failed:
        print(f"error: failing checks: {', '.join(failed)}", file=sys.stderr)
        return 1
    return 0


def cmd_verify(args) -> int:
    try:
        with open(args.record, "r", encoding="utf-8") as handle:
            record = json.load(handle)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: cannot read record: {exc}", file=sys.stderr)
        return 1
    if not record.get("terms"):
        print("warning: record has no prepotential terms; checks pass vacuously")
        return 0
    try:
        reports = verify_record(record)
    except (KeyError, TypeError, ValueError) as exc:
        print(f"error: malformed record: {exc!r}", file=sys.stderr)
        return 1
    ok = True
    for check_name, report in reports.items():
        state = "pass" if report.passed else "FAIL"
        print(f"{check_name}: {state} ({report.checked} checks)")
        for violation in report.violations[:10]:
            print(f"  violation: {violation}")
        ok = ok and report.passed
    return 0 if ok else 1


def _invertible_catalog_index(catalog) -> dict:
    index = {}
    for entry in catalog.values():
        try:
            w = InvertiblePolynomial.from_poly(entry.poly, entry.variables)
        except ValueError:
            continue
        index[w.canonical_key()] = entry.name
    return index


def cmd_mirror(args) -> int:
    catalog = load_catalog(args.catalog)
    if args.singularity:
        entry = catalog.get(args.singularity)
        if entry is None:
            raise SystemExit(f"error: unknown singularity {args.singularity!r}")
        name, poly, variables = entry.name, entry.poly, entry.variables
    elif args.poly:
        variables = args.vars.split(",") if args.vars else _infer_variable_order(args.poly)
        name, poly = args.poly, parse_polynomial(args.poly, variables)
    else:
        raise SystemExit("error: pass --singularity NAME or --poly EXPRESSION")
    try:
        w = InvertiblePolynomial.from_poly(poly, variables)
    except ValueError as exc:
        print(f"error: not an invertible polynomial: {exc}", file=sys.stderr)
        return 1
    wt = transpose(w)
    weights = weights_from_matrix(w)
    group = diagonal_symmetries(w)
    names = _invertible_catalog_index(catalog)
    record = {
        "kind": "mirror-info",
        "name": name,
        "polynomial": w.render(),
        "variables": list(w.variables),
        "exponent_matrix": [list(row) for row in w.exponent_matrix],
        "transpose_polynomial": wt.render(),
        "transpose_name": names.get(wt.canonical_key()),
        "weights": [format_rational(q) for q in weights],
        "central_charge": format_rational(
            sum((1 - 2 * q for q in weights), Fraction(0))
        ),
        "aut_order": group.order,
        "aut_generator_orders": list(group.generator_orders),
        "aut_generators": [[format_rational(g) for g in gen] for gen in group.generators],
        "j_w": [format_rational(g) for g in group.j_w],
    }
    _emit(record, args)
    if args.format == "human":
        print(f"{name}: {record['polynomial']}")
        print(f"  transpose: {record['transpose_polynomial']}"
              + (f" ({record['transpose_name']})" if record["transpose_name"] else ""))
        print(f"  weights: {', '.join(record['weights'])}")
        print(f"  central charge: {record['central_charge']}")
        print(f"  |Aut|: {record['aut_order']}")
        print(f"  j_W: ({', '.join(record['j_w'])})")
    return 0


def cmd_catalog_selftest(args) -> int:
    catalog = load_catalog(args.catalog)
    names = _invertible_catalog_index(catalog)
    failures = 0
    for entry in catalog.values():
        problems = []
        f = entry.weighted_polynomial()
        c_hat = central_charge(f)
        if entry.expected_central_charge is not None and c_hat != entry.expected_central_charge:
            problems.append(
                f"central charge {format_rational(c_hat)} != "
                f"{format_rational(entry.expected_central_charge)}"
            )
        data = milnor_basis(f)
        if entry.expected_milnor_number is not None and data.mu != entry.expected_milnor_number:
            problems.append(f"milnor number {data.mu} != {entry.expected_milnor_number}")
        if entry.name in EXCEPTIONAL_NAMES:
            subscript = int(entry.name[1:])
            if data.mu != subscript:
                problems.append(f"milnor number {data.mu} != type subscript {subscript}")
        try:
            w = InvertiblePolynomial.from_poly(entry.poly, entry.variables)
        except ValueError:
            w = None
        if w is not None:
            partner = names.get(transpose(w).canonical_key())
            if entry.expected_transpose is not None and partner != entry.expected_transpose:
                problems.append(f"transpose {partner!r} != {entry.expected_transpose!r}")
            group = diagonal_symmetries(w)
            if group.order != abs(w.determinant()):
                problems.append(f"aut order {group.order} != |det| {abs(w.determinant())}")
        status = "ok" if not problems else "FAIL: " + "; ".join(problems)
        print(f"{entry.name}: {status}")
        failures += bool(problems)
    print(f"{len(catalog) - failures}/{len(catalog)} entries ok")
    return 0 if failures == 0 else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="primform",
        description=(
            "Exact primitive forms, flat coordinates, and prepotentials for "
            "weighted homogeneous singularities"
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_target_flags(p, with_compute_flags=False, format_default="human"):
        p.add_argument("--singularity", help="catalog entry name, e.g. U12")
        p.add_argument("--poly", help="inline polynomial, e.g. 'x^3+y^7'")
        p.add_argument("--vars", help="comma-separated variable order for --poly")
        p.add_argument("--weights", help="comma-separated weights, e.g. '1/3,1/7'")
        p.add_argument("--catalog", help="catalog file path (or set PRIMFORM_CATALOG)")
        p.add_argument("--format", choices=("json", "human"), default=format_default)
        p.add_argument("--output", help="write the canonical JSON record to this path")
        if with_compute_flags:
            p.add_argument(
                "--order",
                type=int,
                default=4,
                help="s-order (default 4; term counts grow like C(mu+N-1, N))",
            )
            p.add_argument(
                "--basis",
                help="comma-separated monomial basis, e.g. '1,z,x,y,z^2,...'",
            )
            p.add_argument(
                "--check-defect",
                action="store_true",
                help="also re-verify exp((F-f)/z) zeta = J by full reduction",
            )

    p_info = sub.add_parser("info", help="weights, central charge, basis, pairing")
    add_target_flags(p_info)
    p_info.set_defaults(func=cmd_info)

    p_compute = sub.add_parser("compute", help="run the full prepotential pipeline")
    add_target_flags(p_compute, with_compute_flags=True, format_default="json")
    p_compute.set_defaults(func=cmd_compute)

    p_verify = sub.add_parser("verify", help="re-run checks on a stored record")
    p_verify.add_argument("record", help="path to a prepotential record")
    p_verify.set_defaults(func=cmd_verify)

    p_mirror = sub.add_parser("mirror", help="transpose, weights, diagonal symmetries")
    add_target_flags(p_mirror)
    p_mirror.set_defaults(func=cmd_mirror)

    p_selftest = sub.add_parser(
        "catalog-selftest", help="check every catalog entry against its expectations"
    )
    p_selftest.add_argument("--catalog", help="catalog file path")
    p_selftest.set_defaults(func=cmd_catalog_selftest)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
