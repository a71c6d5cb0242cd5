"""Command-line front end: ``analyze``, ``verify`` and ``coindex``.

Exit codes: 0 on success or when no free involution exists, 1 on a
verification mismatch, 2 on bad arguments.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Sequence

from .algebra import SpaceKind
from .theorems import (
    CaseReport,
    InducedActionSummary,
    NoFreeAction,
    SpaceSpec,
    VerificationReport,
    coindex_certificate,
    free_action_admissible,
    sweep_spaces,
    verify_space,
)

SCHEMA_VERSION = 1
CASE_CHOICES = ("i", "ii", "iii", "all")


def _case_to_dict(c: CaseReport) -> dict[str, Any]:
    return {
        "label": c.label,
        "admissible": c.admissible,
        "reason": c.reason,
        "differential": c.differential,
        "e_infinity_totals": list(c.e_infinity_totals),
        "presentation": c.presentation,
        "presentation_series": list(c.presentation_series),
        "match": c.match,
        "params_agree": c.params_agree,
        "collapsed": c.collapsed,
        "chi_quotient": c.chi_quotient,
        "chi_ok": c.chi_ok,
        "coindex": c.coindex,
        "coindex_ok": c.coindex_ok,
        "cocycles": list(c.cocycles),
        "error": c.error,
        "pass": c.passed,
    }


def report_to_dict(r: VerificationReport) -> dict[str, Any]:
    ia = r.induced_action
    return {
        "schema_version": SCHEMA_VERSION,
        "space": {"kind": r.space.kind.value, "n": r.space.n, "m": r.space.m},
        "admissible": r.admissible,
        "admissible_reason": r.admissible_reason,
        "cases": [_case_to_dict(c) for c in r.cases],
        "euler": {"chi_X": r.chi_x, "chi_quotient": r.chi_quotient},
        "coindex": r.coindex,
        "induced_action": None
        if ia is None
        else {
            "candidates": ia.candidates,
            "trivial_forced": ia.trivial_forced,
            "orders": ia.orders,
            "unresolved": ia.unresolved,
            "note": ia.note,
        },
        "degenerate_witness": r.degenerate_witness,
        "pass": r.passed,
    }


def report_from_dict(d: dict[str, Any]) -> VerificationReport:
    if d.get("schema_version") != SCHEMA_VERSION:
        raise ValueError(f"unsupported schema_version {d.get('schema_version')!r}")
    cases = []
    for c in d["cases"]:
        cases.append(
            CaseReport(
                label=c["label"],
                admissible=c["admissible"],
                reason=c["reason"],
                differential=c["differential"],
                e_infinity_totals=tuple(c["e_infinity_totals"]),
                presentation=c["presentation"],
                presentation_series=tuple(c["presentation_series"]),
                match=c["match"],
                params_agree=c["params_agree"],
                collapsed=c["collapsed"],
                chi_quotient=c["chi_quotient"],
                chi_ok=c["chi_ok"],
                coindex=c["coindex"],
                coindex_ok=c["coindex_ok"],
                cocycles=tuple(c["cocycles"]),
                error=c["error"],
            )
        )
    ia = d["induced_action"]
    space = d["space"]
    return VerificationReport(
        space=SpaceSpec(SpaceKind(space["kind"]), space["n"], space["m"]),
        admissible=d["admissible"],
        admissible_reason=d["admissible_reason"],
        chi_x=d["euler"]["chi_X"],
        cases=cases,
        chi_quotient=d["euler"]["chi_quotient"],
        coindex=d["coindex"],
        induced_action=None if ia is None else InducedActionSummary(**ia),
        degenerate_witness=d["degenerate_witness"],
        passed=d["pass"],
    )


def _series_text(series: Sequence[int]) -> str:
    # drop the zero tail of the 0..2D window
    last = max((i for i, c in enumerate(series) if c), default=0)
    return "(" + ", ".join(str(c) for c in series[: last + 1]) + ")"


def render_markdown(r: VerificationReport) -> str:
    lines = [f"# H*(X/G; Z2) for X ~ {r.space}", ""]
    if not r.admissible:
        lines += [f"**No free involution**: {r.admissible_reason}.", ""]
        lines.append(f"Overall: {'PASS' if r.passed else 'FAIL'}")
        return "\n".join(lines) + "\n"
    lines += [f"- Free action possible: {r.admissible_reason}", f"- chi(X) = {r.chi_x}, chi(X/G) = {r.chi_quotient}"]
    if r.induced_action is not None:
        ia = r.induced_action
        lines.append(f"- Induced action: {ia.candidates} candidate(s); {ia.note}")
        for u in ia.unresolved:
            lines.append(f"  - unresolved: {u}")
    lines.append(f"- Without any differential, H^{r.degenerate_witness}(X_G) would be nonzero")
    lines.append("")
    for c in r.cases:
        lines.append(f"## Case ({c.label})")
        if not c.admissible:
            lines += [f"Impossible: {c.reason}.", ""]
            continue
        lines.append(f"{c.differential}")
        lines.append("")
        if c.error:
            lines += [f"ERROR: {c.error}", ""]
            continue
        note = " with alpha, beta, gamma in Z2" if c.label == "iii" else ""
        lines.append(f"H*(X/G) = {c.presentation}{note}")
        lines.append("")
        lines.append(f"- E_inf totals: {_series_text(c.e_infinity_totals)}")
        lines.append(f"- presentation series: {_series_text(c.presentation_series)}")
        lines.append(f"- match in degrees 0..{len(c.e_infinity_totals) - 1}: {c.match}")
        if c.label == "iii":
            lines.append(f"- all 8 (alpha, beta, gamma) agree: {c.params_agree}")
        lines.append(f"- collapse at E_r+1: {c.collapsed}; chi check: {c.chi_ok}; co-index {c.coindex}")
        lines.append(f"- permanent cocycles: {', '.join(c.cocycles)}")
        lines.append(f"- {'PASS' if c.passed else 'FAIL'}")
        lines.append("")
    lines.append(f"Overall: {'PASS' if r.passed else 'FAIL'}")
    return "\n".join(lines) + "\n"


def _write(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump(obj: Any) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _space_from_args(parser: argparse.ArgumentParser, args: argparse.Namespace) -> SpaceSpec:
    kind = SpaceKind(args.kind)
    if args.n is None:
        parser.error("--n is required")
    if args.n < 1:
        parser.error("--n must be >= 1")
    if kind.is_product:
        if args.m is None:
            parser.error(f"--m is required for --kind {kind.value}")
        if args.m < 1:
            parser.error("--m must be >= 1")
        return SpaceSpec(kind, args.n, args.m)
    if args.m is not None:
        parser.error(f"--kind {kind.value} takes no --m")
    return SpaceSpec(kind, args.n)


def cmd_analyze(parser: argparse.ArgumentParser, args: argparse.Namespace) -> int:
    space = _space_from_args(parser, args)
    report = verify_space(space)
    if args.case != "all":
        report.cases = [c for c in report.cases if c.label == args.case]
        if not report.cases:
            parser.error(f"case {args.case} does not exist for {space.kind.value}")
        report.passed = all(c.passed for c in report.cases)
    if args.format == "json":
        _write(_dump(report_to_dict(report)), args.out)
    else:
        _write(render_markdown(report), args.out)
    return 0 if report.passed else 1


def _verify_row(space: SpaceSpec) -> dict[str, Any]:
    r = verify_space(space)
    return {
        "kind": space.kind.value,
        "n": space.n,
        "m": space.m,
        "admissible": r.admissible,
        "cases": {c.label: ("pass" if c.passed else "fail") if c.admissible else "inadmissible" for c in r.cases},
        "trivial_action_forced": None if r.induced_action is None else r.induced_action.trivial_forced,
        "pass": r.passed,
    }


def _sort_key(row: dict[str, Any]) -> tuple[int, int, int]:
    return ([k.value for k in SpaceKind].index(row["kind"]), row["n"], row["m"] or 0)


def run_sweep(max_n: int, max_m: int, kinds: Sequence[SpaceKind], jobs: int = 1) -> dict[str, Any]:
    spaces = list(sweep_spaces(max_n, max_m, tuple(kinds)))
    if jobs > 1 and len(spaces) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_verify_row, spaces, chunksize=max(1, len(spaces) // (4 * jobs))))
    else:
        rows = [_verify_row(s) for s in spaces]
    rows.sort(key=_sort_key)
    by_kind: dict[str, dict[str, int]] = {}
    for kind in kinds:
        mine = [r for r in rows if r["kind"] == kind.value]
        verdicts = [v for r in mine for v in r["cases"].values()]
        by_kind[kind.value] = {
            "spaces": len(mine),
            "no_free_action": sum(not r["admissible"] for r in mine),
            "admissible_cases": sum(v != "inadmissible" for v in verdicts),
            "passed_cases": verdicts.count("pass"),
            "failed_cases": verdicts.count("fail"),
            "trivial_action_not_forced": sum(r["trivial_action_forced"] is False for r in mine),
        }
    failures = [r for r in rows if not r["pass"]]
    return {
        "schema_version": SCHEMA_VERSION,
        "command": "verify",
        "max_n": max_n,
        "max_m": max_m,
        "kinds": [k.value for k in kinds],
        "summary": by_kind,
        "failures": failures,
        "spaces": rows,
        "pass": not failures,
    }


def render_sweep_markdown(doc: dict[str, Any]) -> str:
    lines = [
        f"# Sweep 1 <= n <= {doc['max_n']}, n <= m <= {doc['max_m']}",
        "",
        "| kind | spaces | no free action | admissible cases | passed | failed | T* not forced |",
        "|---|---|---|---|---|---|---|",
    ]
    for kind, s in doc["summary"].items():
        lines.append(
            f"| {kind} | {s['spaces']} | {s['no_free_action']} | {s['admissible_cases']} "
            f"| {s['passed_cases']} | {s['failed_cases']} | {s['trivial_action_not_forced']} |"
        )
    lines.append("")
    if doc["pass"]:
        lines.append("All admissible cases pass.")
    else:
        lines.append(f"{len(doc['failures'])} space(s) FAILED:")
        for r in doc["failures"]:
            lines.append(f"- {r['kind']} n={r['n']} m={r['m']}: {r['cases']}")
    return "\n".join(lines) + "\n"


def cmd_verify(parser: argparse.ArgumentParser, args: argparse.Namespace) -> int:
    if args.max_n is None:
        parser.error("--max-n is required")
    max_m = args.max_n if args.max_m is None else args.max_m
    if args.max_n < 1 or max_m < 1:
        parser.error("sweep bounds must be >= 1")
    jobs = args.jobs if args.jobs is not None else (os.cpu_count() or 1)
    if jobs < 1:
        parser.error("--jobs must be >= 1")
    kinds = list(SpaceKind) if args.kind is None else [SpaceKind(args.kind)]
    doc = run_sweep(args.max_n, max_m, kinds, jobs)
    _write(_dump(doc) if args.format == "json" else render_sweep_markdown(doc), args.out)
    return 0 if doc["pass"] else 1


def cmd_coindex(parser: argparse.ArgumentParser, args: argparse.Namespace) -> int:
    space = _space_from_args(parser, args)
    ok, why = free_action_admissible(space)
    if not ok:
        doc = {"schema_version": SCHEMA_VERSION, "space": str(space), "free_action": False, "statement": why}
        text = f"X ~ {space}: no free involution exists ({why})\n"
        _write(_dump(doc) if args.format == "json" else text, args.out)
        return 0
    try:
        cert = coindex_certificate(space)
    except NoFreeAction as exc:  # pragma: no cover - guarded above
        sys.stderr.write(f"{exc}\n")
        return 0
    doc = {
        "schema_version": SCHEMA_VERSION,
        "space": str(space),
        "free_action": True,
        "coindex": cert.coindex,
        "bound": cert.bound,
        "checks": [{"check": c, "holds": ok} for c, ok in cert.checks],
        "statement": cert.statement(),
    }
    lines = [f"X ~ {space}: co-index {cert.coindex}; no equivariant map S^k -> X for k >= {cert.bound}"]
    lines.append(cert.statement())
    lines += [f"  [{'ok' if ok else 'FAIL'}] {c}" for c, ok in cert.checks]
    _write(_dump(doc) if args.format == "json" else "\n".join(lines) + "\n", args.out)
    return 0 if cert.valid else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="orbitcoh",
        description="Mod 2 cohomology of orbit spaces of free involutions on products of projective spaces.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    kinds = [k.value for k in SpaceKind]

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--format", choices=("json", "md"), default="md")
        p.add_argument("--out", help="write to this file instead of stdout")

    p = sub.add_parser("analyze", help="verify every admissible case for one space")
    p.add_argument("--kind", choices=kinds, default="real")
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--case", choices=CASE_CHOICES, default="all")
    common(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("verify", help="sweep all spaces up to the given bounds")
    p.add_argument("--kind", choices=kinds, help="restrict to one kind (default: all)")
    p.add_argument("--max-n", type=int)
    p.add_argument("--max-m", type=int)
    p.add_argument("--jobs", type=int, help="worker processes (default: CPU count)")
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("coindex", help="co-index and the equivariant-map bound")
    p.add_argument("--kind", choices=kinds, default="real")
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int)
    common(p)
    p.set_defaults(func=cmd_coindex)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(parser, args)


if __name__ == "__main__":
    raise SystemExit(main())
