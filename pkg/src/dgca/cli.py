"""Command-line interface.

Exit status contract: 0 = success, 1 = a definite mathematical negative
(invalid input algebra, obstructed decomposition, non-formality, distinct
classes, empty product set), 2 = inconclusive (search failed, partial
result, unscreened), 3 = input or usage error.
"""

from __future__ import annotations

import argparse
import json
import sys

from .catalog import catalog as catalog_entries, get as catalog_get
from .core import (
    NotConnectedError, compute_cohomology, validate_dgca, validate_poincare,
)
from .hodge import HodgeNotFound, find_hodge
from .interchange import (
    ParseError, canonical_json, dump_decomposition_sidecar, dump_dgca,
    load_dgca, parse_rational,
)
from .linalg import Matrix
from .massey import massey_product, triviality_screen
from .multilinear import table_clean
from .obstruction import cocycle_checks, compare_classes, formality_decision, mu3_cochain
from .small import adapted_decomposition, small_quotient
from .transfer import transfer_explicit, transfer_trees, verify_stasheff
from .extension import extend

OK, NEGATIVE, INCONCLUSIVE, INPUT_ERROR = 0, 1, 2, 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dgca",
        description="Exact calculus for Poincare DGCAs of Hodge type")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, needs_input=True):
        if needs_input:
            p.add_argument("--input", help="algebra file in the interchange format")
            p.add_argument("--catalog", dest="catalog_name",
                           help="built-in algebra name instead of --input")
        p.add_argument("--output", help="write the report to this path")
        p.add_argument("--report", choices=["human", "machine"], default="human")

    common(sub.add_parser("validate", help="check the algebra axioms and the pairing"))
    common(sub.add_parser("cohomology", help="Betti numbers and representatives"))
    common(sub.add_parser("hodge", help="search for a Hodge-type decomposition"))
    common(sub.add_parser("small", help="small algebra, quotient and structure report"))
    p = sub.add_parser("transfer", help="transferred operations by tree summation")
    common(p)
    p.add_argument("--kmax", type=int, default=None, help="largest arity (default min(6, n))")
    common(sub.add_parser("mu3", help="ternary transferred operation and cocycle checks"))
    common(sub.add_parser("formality", help="decide whether the ternary class is a coboundary"))
    p = sub.add_parser("compare", help="compare two algebras along a cohomology ring map")
    common(p)
    p.add_argument("--input2", help="second algebra file")
    p.add_argument("--catalog2", help="second built-in algebra name")
    p.add_argument("--phi", required=True,
                   help="JSON file with ring-map entries [from, to, coeff]")
    p = sub.add_parser("massey", help="triple product set, or a degree screen")
    common(p)
    p.add_argument("--classes", help="comma-separated class labels, e.g. h2_0,h2_1,h2_1")
    p.add_argument("--degrees", help="comma-separated degree tuple for screening")
    p.add_argument("--r", type=int, help="connectivity bound for screening")
    p.add_argument("--n", type=int, help="top degree for screening")
    p.add_argument("--l", type=int, help="product order (default: tuple length)")
    p = sub.add_parser("screen", help="degree-only triviality screen")
    common(p, needs_input=False)
    p.add_argument("--degrees", required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--l", type=int, default=None)
    p = sub.add_parser("extend", help="adjoin closed degree-1 exterior generators")
    common(p)
    p.add_argument("--vars", type=int, required=True, help="number of generators")
    p = sub.add_parser("catalog", help="list or export built-in algebras")
    common(p, needs_input=False)
    p.add_argument("--export", help="entry name to export as an algebra file")
    return parser


def _load_algebra(args) -> tuple:
    if getattr(args, "catalog_name", None):
        entry = catalog_get(args.catalog_name)
        return entry.algebra, entry.name
    if getattr(args, "input", None):
        A = load_dgca(args.input)
        return A, args.input
    raise ParseError("input", "one of --input or --catalog is required")


def _require_decomposition(A):
    res = find_hodge(A)
    if isinstance(res, HodgeNotFound):
        code = NEGATIVE if res.reason == "obstruction" else INCONCLUSIVE
        report = {"decomposition": "not-found", "reason": res.reason,
                  "detail": res.detail}
        if res.null_betti is not None:
            report["null_ideal_betti"] = res.null_betti
        return None, (code, report)
    return res, None


def _violations(rep) -> list[dict]:
    return [{"rule": v.rule, "witness": list(v.witness), "detail": v.detail}
            for v in rep.violations]


def cmd_validate(args):
    A, source = _load_algebra(args)
    rep = validate_dgca(A)
    result = {"algebra": A.name, "valid": rep.ok, "violations": _violations(rep)}
    if rep.ok:
        H = compute_cohomology(A)
        prep = validate_poincare(A, H)
        result["betti"] = H.betti
        result["poincare_nondegenerate"] = prep.ok
        result["poincare_violations"] = _violations(prep)
        return (OK if prep.ok else NEGATIVE), result
    return NEGATIVE, result


def cmd_cohomology(args):
    A, _ = _load_algebra(args)
    H = compute_cohomology(A)
    reps = {}
    for flat, label in enumerate(H.labels()):
        vec = H.representative(flat)
        reps[label] = {A.basis.ids[i]: str(c) for i, c in enumerate(vec) if c != 0}
    result = {"algebra": A.name, "betti": H.betti, "representatives": reps}
    return OK, result


def cmd_hodge(args):
    A, _ = _load_algebra(args)
    D, failure = _require_decomposition(A)
    if failure:
        code, report = failure
        report["algebra"] = A.name
        return code, report
    n = A.top_degree
    result = {
        "algebra": A.name,
        "decomposition": "found",
        "harmonic_dims": [D.harmonic.dim(k) for k in range(n + 1)],
        "complement_dims": [D.complement.dim(k) for k in range(n + 1)],
        "exact_dims": [D.exact.dim(k) for k in range(n + 1)],
        "sidecar": dump_decomposition_sidecar(A, D),
    }
    return OK, result


def cmd_small(args):
    A, _ = _load_algebra(args)
    D, failure = _require_decomposition(A)
    if failure:
        code, report = failure
        report["algebra"] = A.name
        return code, report
    H = compute_cohomology(A)
    Dad, _data = adapted_decomposition(A, D, H)
    res = small_quotient(A, Dad, H)
    rep = res.report
    result = {
        "algebra": A.name, "r": rep.r, "top_degree": rep.n,
        "betti": rep.betti, "small_dims": rep.small_dims,
        "quotient_dims": rep.quotient_dims,
        "differential_support": rep.differential_support,
        "support_window": list(rep.support_window),
        "square_injective": rep.square_injective,
        "clauses": rep.clauses, "ok": rep.ok,
        "text": rep.serialize_text(),
    }
    return OK if rep.ok else NEGATIVE, result


def cmd_transfer(args):
    A, _ = _load_algebra(args)
    D, failure = _require_decomposition(A)
    if failure:
        code, report = failure
        report["algebra"] = A.name
        return code, report
    S = transfer_trees(D, args.kmax)
    stasheff = verify_stasheff(S)
    result = {
        "algebra": A.name, "arity_bound": S.arity_bound,
        "operations": S.serialize_lines(),
        "nonzero_arities": sorted(k for k, t in S.ops.items() if table_clean(t)),
        "stasheff_ok": stasheff.ok,
        "stasheff_violations": _violations(stasheff),
    }
    return OK if stasheff.ok else NEGATIVE, result


def cmd_mu3(args):
    A, _ = _load_algebra(args)
    D, failure = _require_decomposition(A)
    if failure:
        code, report = failure
        report["algebra"] = A.name
        return code, report
    S = transfer_explicit(D)
    mu3 = mu3_cochain(S)
    checks = cocycle_checks(mu3)
    result = {"algebra": A.name, "mu3": mu3.serialize_lines(),
              "hochschild_cocycle": checks["hochschild_cocycle"],
              "harrison": checks["harrison"]}
    return OK, result


def cmd_formality(args):
    A, _ = _load_algebra(args)
    D, failure = _require_decomposition(A)
    if failure:
        code, report = failure
        report["algebra"] = A.name
        return code, report
    S = transfer_explicit(D)
    res = formality_decision(mu3_cochain(S))
    result = {"algebra": A.name, "verdict": res.verdict}
    if res.formal:
        result["witness"] = res.witness.serialize_lines()
        return OK, result
    result["certificate"] = res.certificate
    return NEGATIVE, result


def _load_phi(path: str, source_ring, target_ring) -> Matrix:
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    entries = doc["entries"] if isinstance(doc, dict) else doc
    m = Matrix.zeros(len(target_ring.basis), len(source_ring.basis))
    for row, entry in enumerate(entries):
        if not (isinstance(entry, list) and len(entry) == 3):
            raise ParseError(f"phi[{row}]", "expected [from, to, coeff]")
        src, dst, coeff = entry
        if src not in source_ring.basis.index_of:
            raise ParseError(f"phi[{row}]", f"unknown source class {src!r}")
        if dst not in target_ring.basis.index_of:
            raise ParseError(f"phi[{row}]", f"unknown target class {dst!r}")
        m.rows[target_ring.basis.index_of[dst]][source_ring.basis.index_of[src]] = \
            parse_rational(coeff, f"phi[{row}]")
    return m


def cmd_compare(args):
    A, _ = _load_algebra(args)
    if args.catalog2:
        B = catalog_get(args.catalog2).algebra
    elif args.input2:
        B = load_dgca(args.input2)
    else:
        raise ParseError("input2", "one of --input2 or --catalog2 is required")
    DA, failure = _require_decomposition(A)
    if failure:
        code, report = failure
        report["algebra"] = A.name
        return code, report
    DB, failure = _require_decomposition(B)
    if failure:
        code, report = failure
        report["algebra"] = B.name
        return code, report
    SA, SB = transfer_explicit(DA), transfer_explicit(DB)
    phi = _load_phi(args.phi, SA.ring, SB.ring)
    res = compare_classes(SA, SB, phi)
    result = {"first": A.name, "second": B.name, "status": res.status,
              "reason": res.reason}
    if res.status == "equivalent":
        result["witness"] = res.witness.serialize_lines()
        return OK, result
    if res.status == "distinct":
        return NEGATIVE, result
    return INPUT_ERROR, result


def _parse_degrees(text: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip() != ""]
    except ValueError:
        raise ParseError("degrees", f"malformed degree list {text!r}") from None


def _run_screen(degrees, r, n, l):
    res = triviality_screen(degrees, r, n, l)
    result = {"degrees": degrees, "r": r, "n": n, "l": l,
              "trivial": res.trivial, "reason": res.reason}
    return (OK if res.trivial else INCONCLUSIVE), result


def cmd_screen(args):
    degrees = _parse_degrees(args.degrees)
    return _run_screen(degrees, args.r, args.n, args.l or len(degrees))


def cmd_massey(args):
    if args.degrees and not args.classes:
        if args.r is None or args.n is None:
            raise ParseError("screen", "--degrees screening needs --r and --n")
        degrees = _parse_degrees(args.degrees)
        return _run_screen(degrees, args.r, args.n, args.l or len(degrees))
    A, _ = _load_algebra(args)
    if not args.classes:
        raise ParseError("classes", "--classes is required to compute a product")
    H = compute_cohomology(A)
    labels = H.labels()
    xs = []
    for label in args.classes.split(","):
        label = label.strip()
        if label not in labels:
            raise ParseError("classes", f"unknown class label {label!r}")
        xs.append(H.representative(labels.index(label)))
    D = find_hodge(A)
    D = D if not isinstance(D, HodgeNotFound) else None
    try:
        product = massey_product(A, xs, D, H)
    except ValueError as exc:
        return NEGATIVE, {"algebra": A.name, "product": "empty", "detail": str(exc)}
    rep = {labels[i]: str(c) for i, c in enumerate(product.representative) if c != 0}
    result = {
        "algebra": A.name, "order": product.order,
        "degrees": product.degrees, "target_degree": product.target_degree,
        "representative": rep,
        "partial": product.partial,
    }
    if product.partial:
        return INCONCLUSIVE, result
    result["indeterminacy_dim"] = product.indeterminacy.ncols
    result["trivial"] = product.trivial
    return OK, result


def cmd_extend(args):
    A, _ = _load_algebra(args)
    E = extend(A, args.vars)
    H = compute_cohomology(E)
    result = {"algebra": A.name, "vars": args.vars, "extension": E.name,
              "top_degree": E.top_degree, "betti": H.betti,
              "document": dump_dgca(E)}
    return OK, result


def cmd_catalog(args):
    if args.export:
        entry = catalog_get(args.export)
        text = dump_dgca(entry.algebra)
        if args.output:
            with open(args.output, "w", encoding="utf-8") as fh:
                fh.write(text)
            return OK, {"exported": entry.name, "path": args.output}
        return OK, {"exported": entry.name, "document": text}
    rows = []
    for entry in catalog_entries():
        H = compute_cohomology(entry.algebra)
        rows.append({"name": entry.name, "provenance": entry.provenance,
                     "top_degree": entry.algebra.top_degree,
                     "betti": H.betti, "description": entry.description})
    return OK, {"entries": rows}


_HANDLERS = {
    "validate": cmd_validate,
    "cohomology": cmd_cohomology,
    "hodge": cmd_hodge,
    "small": cmd_small,
    "transfer": cmd_transfer,
    "mu3": cmd_mu3,
    "formality": cmd_formality,
    "compare": cmd_compare,
    "massey": cmd_massey,
    "screen": cmd_screen,
    "extend": cmd_extend,
    "catalog": cmd_catalog,
}


def _human_text(command: str, code: int, result: dict) -> str:
    lines = [f"{command}: " + {OK: "ok", NEGATIVE: "negative",
                               INCONCLUSIVE: "inconclusive",
                               INPUT_ERROR: "error"}[code]]
    if "text" in result:
        lines.append(result["text"])
        return "\n".join(lines)

    def render(value, indent=2):
        pad = " " * indent
        out = []
        if isinstance(value, dict):
            for k, v in value.items():
                if isinstance(v, (dict, list)) and v and not _short(v):
                    out.append(f"{pad}{k}:")
                    out.extend(render(v, indent + 2))
                else:
                    out.append(f"{pad}{k}: {_fmt(v)}")
        elif isinstance(value, list):
            for v in value:
                if isinstance(v, (dict, list)) and v and not _short(v):
                    out.extend(render(v, indent + 2))
                else:
                    out.append(f"{pad}- {_fmt(v)}")
        return out

    def _short(v):
        return isinstance(v, list) and all(isinstance(x, (int, str)) for x in v) \
            and len(v) <= 12

    def _fmt(v):
        return json.dumps(v) if isinstance(v, (dict, list)) else str(v)

    lines.extend(render(result))
    return "\n".join(lines)


def run_command(argv: list[str]) -> tuple[int, dict, str]:
    """Dispatch a parsed command line; returns (exit code, report, human text)."""
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        code, result = _HANDLERS[args.command](args)
        human = _human_text(args.command, code, result)
    except (ParseError, NotConnectedError, FileNotFoundError, KeyError,
            ValueError) as exc:
        code, result = INPUT_ERROR, {"error": str(exc)}
        human = f"{args.command}: error\n  {exc}"
    report = {"command": args.command, "exit_code": code,
              "status": {OK: "ok", NEGATIVE: "negative",
                         INCONCLUSIVE: "inconclusive",
                         INPUT_ERROR: "error"}[code],
              "result": result}
    return code, report, human


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        parser_args = build_parser().parse_args(argv)
    except SystemExit as exc:
        # --help exits 0; anything else is a usage problem, not "inconclusive"
        return 0 if exc.code in (0, None) else INPUT_ERROR
    code, report, human = run_command(argv)
    text = canonical_json(report) if parser_args.report == "machine" else human + "\n"
    output = getattr(parser_args, "output", None)
    # A handler that already wrote a document to the output path records it
    # under "path"; the report then goes to stdout instead of clobbering it.
    claimed = isinstance(report.get("result"), dict) \
        and output is not None and report["result"].get("path") == output
    if output and not claimed:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


def console_main():
    sys.exit(main())


if __name__ == "__main__":
    console_main()
