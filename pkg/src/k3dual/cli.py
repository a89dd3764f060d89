"""Command-line interface: ``k3dual <subcommand> ...``.

Exit status: 0 on success or PASS, 1 on a FAIL verdict or an unsuccessful
bounded search, 2 on input errors.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path
from typing import Sequence

from . import io
from .dataset import CASE_NAMES, raw_case
from .discriminant import discriminant_form
from .errors import InputError, K3DualError
from .lattice import GramLattice, parse_lattice
from .picard import intersection_matrix, picard_number, picard_rays, rk_l0, select_basis
from .pipeline import (
    SearchConfig,
    builtin_case,
    case_from_json,
    default_search_bound,
    format_table,
    verify_pair,
)
from .polytope import lattice_points, polar_dual
from .search import find_hyperbolic_plane, find_isometry, isometry_via_roots


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse exits with 2 as well; keep the message terse
        self.print_usage(sys.stderr)
        self.exit(2, f"{self.prog}: error: {message}\n")


def _load_polytope(path: str):
    return io.with_context(path, io.polytope_from_json, io.load_json(path))


def _load_lattice(arg: str) -> GramLattice:
    p = Path(arg)
    if arg.endswith(".json") or p.is_file():
        return io.with_context(arg, io.gram_from_json, io.load_json(arg))
    try:
        return parse_lattice(arg)
    except ValueError as exc:
        raise InputError(f"{arg}: {exc}") from None


def _parse_drop(text: str | None):
    if text is None:
        return None
    try:
        idx = [int(t) for t in text.split(",")]
    except ValueError:
        raise InputError(f"--drop: expected three comma-separated integers, got {text!r}") from None
    if len(idx) != 3:
        raise InputError("--drop: expected exactly three indices")
    return [i - 1 for i in idx]


def _parse_order(text: str | None):
    """Ray order from a JSON file (list of triples) or inline ``x,y,z;x,y,z;...``."""
    if text is None:
        return None
    if text.endswith(".json") or Path(text).is_file():
        data = io.load_json(text)
        if isinstance(data, dict):
            data = data.get("rays", data.get("ordering"))
        return io.with_context(text, lambda d: io.parse_matrix(d, "rays", 3), data)
    try:
        return [[int(c) for c in part.split(",")] for part in text.split(";") if part.strip()]
    except ValueError:
        raise InputError(f"--order: cannot parse {text!r}") from None


def _emit(obj, fmt: str, text: str | None = None) -> None:
    if fmt == "text" and text is not None:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    else:
        sys.stdout.write(io.dumps(obj))


def _matrix_text(rows) -> str:
    if not rows:
        return "[]"
    w = max(len(str(x)) for r in rows for x in r)
    return "\n".join(" ".join(str(x).rjust(w) for x in r) for r in rows)


# ---------------------------------------------------------------------------
# subcommands


def cmd_dual(args) -> int:
    P = _load_polytope(args.polytope)
    D = polar_dual(P)
    out = io.polytope_to_json(D)
    out["name"] = f"{P.name}*" if P.name else "dual"
    _emit(out, args.format, "\n".join(" ".join(map(str, v)) for v in D.vertices))
    return 0


def cmd_rays(args) -> int:
    P = _load_polytope(args.polytope)
    rs = picard_rays(P)
    pts = lattice_points(P)
    out = {
        "name": P.name,
        "rays": [list(r) for r in rs.rays],
        "kinds": list(rs.kinds),
        "counts": pts.counts(),
        "rk_l0": rk_l0(P),
        "picard_number": picard_number(P),
    }
    text = "\n".join(f"{i + 1:>3}  {k:<6} {' '.join(map(str, r))}" for i, (r, k) in enumerate(zip(rs.rays, rs.kinds)))
    _emit(out, args.format, text)
    return 0


def cmd_picard(args) -> int:
    P = _load_polytope(args.polytope)
    try:
        rs = picard_rays(P, order=_parse_order(args.order))
    except ValueError as exc:
        raise InputError(f"--order: {exc}") from None
    basis = select_basis(rs, _parse_drop(args.drop))
    L = intersection_matrix(rs, basis)
    out = io.picard_gram_json(list(basis.kept), list(basis.dropped), L)
    _emit(out, args.format, _matrix_text(out["gram"]))
    return 0


def _info(L: GramLattice) -> dict:
    sig = L.signature()
    out = {
        "label": L.label,
        "rank": L.rank,
        "det": L.determinant(),
        "signature": [sig.positive, sig.negative],
        "even": L.is_even(),
    }
    if L.is_even():
        F = discriminant_form(L)
        out["invariant_factors"] = list(F.invariant_factors)
        out["q_values"] = [str(x) for x in F.q_values]
        out["b_values"] = [[str(x) for x in row] for row in F.b_values]
    return out


def cmd_lattice_info(args) -> int:
    out = _info(_load_lattice(args.lattice))
    text = "\n".join(f"{k}: {v}" for k, v in out.items())
    _emit(out, args.format, text)
    return 0


def cmd_lattice_isometry(args) -> int:
    A, B = _load_lattice(args.a), _load_lattice(args.b)
    bound = args.bound or default_search_bound()
    deadline = time.monotonic() + args.timeout
    W = None
    terms = [t.strip() for t in B.label.split("+")]
    if terms[0] == "U" and all(t[:1] in "ADE" for t in terms[1:]):
        W = isometry_via_roots(A, terms, bound, deadline)
    if W is None:
        W = find_isometry(A, B, bound, deadline)
    out = {"found": W is not None, "search_bound": bound, "witness": W}
    _emit(out, args.format, _matrix_text(W) if W else f"not found within bound {bound}")
    return 0 if W is not None else 1


def cmd_lattice_split(args) -> int:
    L = _load_lattice(args.lattice)
    bound = args.bound or default_search_bound()
    s = find_hyperbolic_plane(L, bound, time.monotonic() + args.timeout)
    if s is None:
        _emit({"found": False, "search_bound": bound}, args.format, f"not found within bound {bound}")
        return 1
    out = {"found": True, "search_bound": bound, **s.as_dict()}
    text = f"e = {list(s.e)}\nf = {list(s.f)}\ncomplement rank {s.complement.rank}, det {s.complement.determinant()}"
    _emit(out, args.format, text)
    return 0


def _config(args) -> SearchConfig:
    return SearchConfig(
        search_bound=args.bound or default_search_bound(),
        timeout=args.timeout,
        strict_nikulin=not args.non_strict,
        split_u=not args.no_split,
    )


def _case(arg: str):
    if arg in CASE_NAMES:
        return builtin_case(arg)
    return io.with_context(arg, case_from_json, io.load_json(arg))


def cmd_verify_pair(args) -> int:
    report = verify_pair(_case(args.case), _config(args))
    _emit(report.as_dict(), args.format, format_table([report]))
    return 0 if report.verdict == "PASS" else 1


def cmd_dataset_list(args) -> int:
    rows = []
    for name in CASE_NAMES:
        c = raw_case(name)
        rows.append({
            "name": name,
            "B": c["B"],
            "B_prime": c["B_prime"],
            "rays_delta": len(c["ordering"]["delta"]),
            "rays_delta_prime": len(c["ordering"]["delta_prime"]),
        })
    text = "\n".join(f"{r['name']:<8} {r['B']:>4} / {r['B_prime']:<4}  rays {r['rays_delta']} / {r['rays_delta_prime']}" for r in rows)
    _emit({"cases": rows}, args.format, text)
    return 0


def cmd_report(args) -> int:
    cfg = _config(args)
    reports = [verify_pair(_case(n), cfg) for n in (args.cases or CASE_NAMES)]
    if args.format == "json":
        sys.stdout.write(io.dumps({"reports": [r.as_dict() for r in reports]}))
    else:
        sys.stdout.write(format_table(reports))
    return 0 if all(r.verdict == "PASS" for r in reports) else 1


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="k3dual", description="Picard lattices of toric K3 families and lattice duality checks.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def fmt(sp, default="json"):
        sp.add_argument("--format", choices=("json", "text"), default=default)

    def search(sp):
        sp.add_argument("--bound", type=int, default=None, help="coordinate bound (default: $K3DUAL_SEARCH_BOUND or 8)")
        sp.add_argument("--timeout", type=float, default=5.0, help="seconds per bounded search")

    sp = sub.add_parser("dual", help="polar dual of a polytope")
    sp.add_argument("polytope")
    fmt(sp)
    sp.set_defaults(func=cmd_dual)

    sp = sub.add_parser("rays", help="rays and lattice-point counts")
    sp.add_argument("polytope")
    fmt(sp)
    sp.set_defaults(func=cmd_rays)

    sp = sub.add_parser("picard", help="Picard lattice Gram matrix")
    sp.add_argument("polytope")
    sp.add_argument("--drop", help="1-based indices i,j,k of the rays to eliminate")
    sp.add_argument("--order", help="ray order: JSON file or inline 'x,y,z;x,y,z;...' (write --order=... when it starts with '-')")
    fmt(sp)
    sp.set_defaults(func=cmd_picard)

    lat = sub.add_parser("lattice", help="lattice utilities")
    lsub = lat.add_subparsers(dest="lattice_command", required=True, parser_class=_Parser)
    sp = lsub.add_parser("info", help="rank, det, signature, discriminant form")
    sp.add_argument("lattice", help="Gram JSON file or expression such as U+A1+A3")
    fmt(sp)
    sp.set_defaults(func=cmd_lattice_info)
    sp = lsub.add_parser("isometry", help="bounded isometry search")
    sp.add_argument("a")
    sp.add_argument("b")
    search(sp)
    fmt(sp)
    sp.set_defaults(func=cmd_lattice_isometry)
    sp = lsub.add_parser("split-u", help="split off a hyperbolic plane")
    sp.add_argument("lattice")
    search(sp)
    fmt(sp)
    sp.set_defaults(func=cmd_lattice_split)

    def pipeline_flags(sp):
        search(sp)
        sp.add_argument("--non-strict", action="store_true", help="use >= in the length condition of the embedding criterion")
        sp.add_argument("--no-split", action="store_true", help="skip hyperbolic-plane splitting")

    sp = sub.add_parser("verify-pair", help="run the duality pipeline on one case")
    sp.add_argument("case", help=f"case JSON file or one of {', '.join(CASE_NAMES)}")
    pipeline_flags(sp)
    fmt(sp, "text")
    sp.set_defaults(func=cmd_verify_pair)

    ds = sub.add_parser("dataset", help="built-in cases")
    dsub = ds.add_subparsers(dest="dataset_command", required=True, parser_class=_Parser)
    sp = dsub.add_parser("list")
    fmt(sp, "text")
    sp.set_defaults(func=cmd_dataset_list)

    sp = sub.add_parser("report", help="run every built-in case and print a summary")
    sp.add_argument("--cases", nargs="*", help="subset of case names or case files")
    pipeline_flags(sp)
    fmt(sp, "text")
    sp.set_defaults(func=cmd_report)
    return p


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if getattr(args, "bound", None) is not None and args.bound < 1:
            raise InputError("--bound must be positive")
        return args.func(args)
    except K3DualError as exc:
        sys.stderr.write(f"k3dual: error: {exc}\n")
        return 2
    except ValueError as exc:
        sys.stderr.write(f"k3dual: error: {exc}\n")
        return 2


def main() -> None:
    sys.exit(run())
