"""``flatframe`` command line.

Exit codes: 0 certified or matched, 1 refuted or infeasible, 2 budget
exhausted, 3 bad input.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction
from typing import Sequence

from . import catalog, incidence, matcher, oracle, singular
from .errors import FlatframeError

EXIT_OK, EXIT_REFUTED, EXIT_BUDGET, EXIT_INPUT = 0, 1, 2, 3
STATUS_EXIT = {"certified": EXIT_OK, "matched": EXIT_OK, "refuted": EXIT_REFUTED, "failed": EXIT_REFUTED,
               "budget_exhausted": EXIT_BUDGET}


class InputError(Exception):
    pass


def _vec(x) -> list:
    return [int(c) if Fraction(c).denominator == 1 else str(c) for c in x]


def _parse_vectors(text: str) -> list[tuple[Fraction, ...]]:
    try:
        data = json.loads(text)
        return [tuple(Fraction(str(c)) for c in v) for v in data]
    except (ValueError, TypeError) as exc:
        raise InputError(f"cannot parse vectors {text!r}: {exc}") from None


def _read_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(str(exc)) from None
    except ValueError as exc:
        raise InputError(f"{path}: invalid JSON: {exc}") from None


def _emit_table(rows: list[dict], columns: Sequence[str], fmt: str, out) -> None:
    if fmt == "json":
        out.write(json.dumps(rows, indent=2) + "\n")
        return
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=list(columns), lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({c: r[c] for c in columns})
        out.write(buf.getvalue())
        return
    cells = [[str(c) for c in columns]] + [[_cell(r[c]) for c in columns] for r in rows]
    widths = [max(len(row[i]) for row in cells) for i in range(len(columns))]
    for row in cells:
        out.write("  ".join(v.ljust(w) for v, w in zip(row, widths)).rstrip() + "\n")


def _cell(v) -> str:
    if isinstance(v, (list, tuple)):
        return "(" + ",".join(str(x) for x in v) + ")"
    return str(v)


def _fmt(args) -> str:
    return "json" if args.json else "csv" if args.csv else "text"


def _budget(args) -> int | None:
    if args.budget is not None:
        return args.budget
    env = os.environ.get("FLATFRAME_BUDGET")
    if env:
        try:
            return int(env)
        except ValueError:
            raise InputError(f"FLATFRAME_BUDGET={env!r} is not an integer") from None
    return None


# --- verbs ---------------------------------------------------------------

def cmd_catalog(args, out) -> int:
    if args.space:
        desc = catalog.lookup(args.space)
        out.write(json.dumps(desc.to_json(), indent=None if args.csv else 2) + "\n")
        return EXIT_OK
    rows = []
    for d in sorted(catalog.catalog_entries(), key=lambda d: (d.family, str(d.params))):
        rows.append({"space": d.id, "family": d.family, "rank": d.rank, "dim_x": d.dim_x,
                     "columns": d.n_columns, "min_qdim": d.recorded_min_qdim,
                     "type": d.root_system.type_label, "alias_of": d.alias_of or ""})
    _emit_table(rows, ["space", "family", "type", "rank", "dim_x", "columns", "min_qdim", "alias_of"],
                _fmt(args), out)
    return EXIT_OK


def cmd_dims(args, out) -> int:
    d = catalog.lookup(args.space)
    rays = singular.maximally_singular_rays(d)
    fmt = _fmt(args)
    rows = [{"ray": i + 1, "vector": list(r.vector), "q_dim": singular.q_dim(d, r.vector)}
            for i, r in enumerate(rays)]
    if fmt == "json":
        out.write(json.dumps({"space": d.id, "rank": d.rank, "dim_x": d.dim_x, "columns": d.n_columns,
                              "rays": rows}, indent=2) + "\n")
        return EXIT_OK
    if fmt == "text":
        out.write(f"space {d.id}  rank {d.rank}  dim_x {d.dim_x}  columns {d.n_columns}\n")
    _emit_table(rows, ["ray", "vector", "q_dim"], fmt, out)
    return EXIT_OK


def cmd_qdim(args, out) -> int:
    d = catalog.lookup(args.space)
    vecs = _parse_vectors(args.vectors)
    if len(vecs) == 1:
        value = singular.q_dim(d, vecs[0])
    elif len(vecs) == 2:
        value = singular.q_intersection_dim(d, vecs[0], vecs[1])
    else:
        raise InputError("give one vector for dim Q_v or two for dim(Q_v ∩ Q_w)")
    if args.json:
        out.write(json.dumps({"space": d.id, "vectors": [_vec(v) for v in vecs], "dim": value}) + "\n")
    else:
        out.write(f"{value}\n")
    return EXIT_OK


def cmd_frames(args, out) -> int:
    d = catalog.lookup(args.space)
    stream = incidence.enumerate_singular_frames(d, up_to_weyl=args.up_to_weyl == "on", budget=_budget(args))
    frames = list(stream)
    if args.json:
        mats = [incidence.incidence_matrix(d, f).to_json() for f in frames]
        out.write(json.dumps(mats) + "\n")
    else:
        for f in frames:
            out.write(" ".join(_cell(v) for v in f) + "\n")
        out.write(f"# {len(frames)} frames{' (budget exhausted)' if stream.budget_exceeded else ''}\n")
    return EXIT_BUDGET if stream.budget_exceeded else EXIT_OK


def _load_matrices(args) -> list[incidence.IncidenceMatrix]:
    if args.matrix:
        data = _read_json(args.matrix)
        items = data if isinstance(data, list) else [data]
        return [incidence.IncidenceMatrix.from_json(x) for x in items]
    if args.space and args.frame:
        d = catalog.lookup(args.space)
        return [incidence.incidence_matrix(d, _parse_vectors(args.frame))]
    raise InputError("give --matrix FILE or a space with --frame VECTORS")


def cmd_match(args, out) -> int:
    mats = _load_matrices(args)
    results = []
    code = EXIT_OK
    for A in mats:
        if args.mode == "oracle":
            res = oracle.feasible_matching(A)
            if isinstance(res, oracle.InfeasibilityCertificate):
                results.append({"status": "infeasible", "certificate": res.to_json(), "matrix": A.to_json()})
                code = EXIT_REFUTED
                continue
        else:
            res = matcher.staged_greedy(A, args.mode)
        if not res.matched:
            code = EXIT_REFUTED
        results.append(dict(res.to_json(), matrix=A.to_json()))
    if args.json:
        out.write(json.dumps(results[0] if len(results) == 1 else results) + "\n")
    else:
        for r in results:
            out.write(f"{r['status']}\n")
            for i, cols in enumerate(r.get("assignment", [])):
                out.write(f"  row {i}: {cols}\n")
            if r.get("failure"):
                f = r["failure"]
                out.write(f"  starved at stage {f['stage']}: row {f['row']} had {f['remaining']} ones left\n")
            if r.get("certificate"):
                c = r["certificate"]
                out.write(f"  Hall violator rows {c['row_subset']}: {c['neighborhood_size']} columns"
                          f" < demand {c['demand_sum']}\n")
    return code


def _report_text(rep: oracle.CertificationReport, out, indent: str = "") -> None:
    out.write(f"{indent}{rep.space_id}: {rep.status} ({rep.method})\n")
    out.write(f"{indent}  frames examined: {rep.frames_examined}\n")
    if rep.greedy_agreement is not None:
        out.write(f"{indent}  repair-mode greedy agreement: {rep.greedy_agreement:.3f}\n")
    for k, v in rep.details.items():
        if k in ("greedy_gaps",) and not v:
            continue
        out.write(f"{indent}  {k}: {json.dumps(v)}\n")
    if rep.counterexample:
        frame, A, cert = rep.counterexample
        out.write(f"{indent}  counterexample frame: {' '.join(_cell(_vec(v)) for v in frame)}\n")
        out.write(f"{indent}  Hall violator rows {list(cert.row_subset)}: {cert.neighborhood_size} columns"
                  f" < demand {cert.demand_sum}\n")
    for f in rep.factors:
        _report_text(f, out, indent + "  ")


def cmd_certify(args, out) -> int:
    d = catalog.lookup(args.space)
    rep = oracle.certify_property_e(d, budget=_budget(args), exhaustive=args.exhaustive, workers=args.workers)
    if args.json:
        out.write(json.dumps(rep.to_json(), indent=2) + "\n")
    else:
        _report_text(rep, out)
    return STATUS_EXIT[rep.status]


def cmd_weak(args, out) -> int:
    rep = oracle.certify_weak_matching(catalog.lookup(args.space), args.profile, budget=_budget(args))
    if args.json:
        out.write(json.dumps(rep.to_json(), indent=2) + "\n")
    else:
        _report_text(rep, out)
    return STATUS_EXIT[rep.status]


TX_COLUMNS = ["space", "rank", "dim_x", "min_qdim", "t_X", "degree_bound", "exceptional_flag"]


def cmd_txtable(args, out) -> int:
    if args.rank == 2:
        descs = catalog.rank_two_irreducibles(args.max_param)
    else:
        descs = [d for d in catalog.catalog_entries() if args.rank is None or d.rank == args.rank]
    rows = []
    for d in sorted(descs, key=lambda d: (d.family, str(d.params))):
        two = d.rank == 2
        rows.append({"space": d.id, "rank": d.rank, "dim_x": d.dim_x, "min_qdim": singular.min_qdim(d),
                     "t_X": singular.t_invariant(d),
                     "degree_bound": singular.degree_bound(d) if two else "",
                     "exceptional_flag": singular.is_exceptional(d) if two else ""})
    _emit_table(rows, TX_COLUMNS, _fmt(args), out)
    return EXIT_OK


def cmd_split(args, out) -> int:
    if args.matrix:
        data = _read_json(args.matrix)
        frame = data.get("frame") if isinstance(data, dict) else data
        if not frame:
            raise InputError("split needs a JSON object with a 'frame' or a list of vectors")
        vecs = [tuple(Fraction(str(c)) for c in v) for v in frame]
    elif args.frame:
        vecs = _parse_vectors(args.frame)
    else:
        raise InputError("give --matrix FILE or --frame VECTORS")
    if args.n1 is None:
        raise InputError("--n1 is required")
    tau = incidence.split_product_frame(vecs, args.n1, args.split_at)
    if args.json:
        out.write(json.dumps({"tau": list(tau), "n1": args.n1}) + "\n")
    else:
        out.write(" ".join(str(t) for t in tau) + "\n")
    return EXIT_OK


# --- parser --------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="flatframe", description="Property E certification for symmetric spaces.")
    sub = p.add_subparsers(dest="verb", required=True)

    def common(sp, fmt: bool = True):
        if fmt:
            g = sp.add_mutually_exclusive_group()
            g.add_argument("--json", action="store_true", help="JSON output")
            g.add_argument("--csv", action="store_true", help="CSV output")
        return sp

    sp = common(sub.add_parser("catalog", help="list catalogued spaces or show one"))
    sp.add_argument("space", nargs="?")
    sp.set_defaults(func=cmd_catalog)

    sp = common(sub.add_parser("dims", help="rank, dimension and maximally singular rays"))
    sp.add_argument("space")
    sp.set_defaults(func=cmd_dims)

    sp = common(sub.add_parser("qdim", help="dim Q_v or dim(Q_v ∩ Q_w)"))
    sp.add_argument("space")
    sp.add_argument("vectors", help="JSON list of one or two vectors")
    sp.set_defaults(func=cmd_qdim)

    sp = common(sub.add_parser("frames", help="enumerate frames of maximally singular lines"))
    sp.add_argument("space")
    sp.add_argument("--up-to-weyl", choices=["on", "off"], default="on")
    sp.add_argument("--budget", type=int)
    sp.set_defaults(func=cmd_frames)

    sp = common(sub.add_parser("match", help="run the staged matcher on a matrix"))
    sp.add_argument("space", nargs="?")
    sp.add_argument("--matrix")
    sp.add_argument("--frame", help="JSON list of frame vectors (with a space)")
    sp.add_argument("--mode", choices=list(matcher.MODES) + ["oracle"], default="repair")
    sp.set_defaults(func=cmd_match)

    sp = common(sub.add_parser("certify", help="certify or refute Property E"))
    sp.add_argument("space")
    sp.add_argument("--exhaustive", action="store_true")
    sp.add_argument("--budget", type=int)
    sp.add_argument("--workers", type=int, default=1)
    sp.set_defaults(func=cmd_certify)

    sp = common(sub.add_parser("weak", help="weak matching with one regular row"))
    sp.add_argument("space")
    sp.add_argument("--profile", default="regular-last", choices=["regular-last", "all-regular"])
    sp.add_argument("--budget", type=int)
    sp.set_defaults(func=cmd_weak)

    sp = common(sub.add_parser("txtable", help="t_X and degree-bound table"))
    sp.add_argument("--rank", type=int)
    sp.add_argument("--max-param", type=int, default=8)
    sp.set_defaults(func=cmd_txtable)

    sp = common(sub.add_parser("split", help="split a product frame into factor frames"))
    sp.add_argument("--matrix")
    sp.add_argument("--frame")
    sp.add_argument("--n1", type=int)
    sp.add_argument("--split-at", type=int)
    sp.set_defaults(func=cmd_split)
    return p


def run(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    try:
        return args.func(args, out)
    except (FlatframeError, InputError, ValueError, ZeroDivisionError) as exc:
        err.write(f"flatframe: error: {exc}\n")
        return EXIT_INPUT


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
