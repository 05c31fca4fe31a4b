"""Command line interface.

Subcommands: seq (growth-sequence prefixes of a group expression),
bounds (growth-bound verdicts), oeis (compare a sequence against a
b-file), graphs (labelled class counting, semi-induced order, flip
round trips) and witness (order and coding witness searches).

Output is a JSON envelope {command, config, results, telemetry} on
stdout, or the results as CSV.  Every number in the envelope is
rendered as a decimal string so arbitrary-precision values survive any
JSON reader.  With --deterministic the envelope is emitted with sorted
keys and compact separators, wall time is omitted and jobs is forced
to 1, making the bytes a pure function of the invocation.

Exit codes: 0 success, 1 an expected negative (bound violated,
mismatch, witness absent), 2 bad input, 3 a budget or size cap hit,
4 a search ended indeterminate.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import random
import sys
import time
from fractions import Fraction
from pathlib import Path

from ._backend import resolve_backend
from .errors import CapacityError, ParseError
from .graph_classes import (
    FlipSpec,
    count_labelled,
    flip_recover,
    flipped_paths,
    parse_class_spec,
    parse_graph,
    semi_induced_order,
)
from .group_expr import (
    CLASS_CELLULAR,
    classify,
    eval_lseq,
    format_expr,
    gap_verdict,
    parse_expr,
)
from .orbit_oracle import count_orbits_injective, truncate_expr
from .seq_core import bell, bell2, meet_trivial_pairs, stirling_transform
from .witness_search import (
    STATUS_FOUND,
    STATUS_INDETERMINATE,
    STATUS_NONE,
    find_coding_witness,
    find_order_witness,
    find_tuple_coding_witness,
    parse_relation,
    verify_coding_witness,
    verify_order_witness,
)

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_INPUT = 2
EXIT_CAPACITY = 3
EXIT_INDETERMINATE = 4

ORACLE_CHECK_MAX_N = 5

#: how the syntactic classes are reported; the cellular label records
#: that the verdict comes from the shape of the expression alone
_CLASS_LABELS = {
    "finite": "finite",
    "cellular": "syntactic-cellular",
    "msnc": "msnc",
}


def _stringify(value):
    """Render every number in a result structure as a decimal string."""
    if isinstance(value, bool):
        return value
    if isinstance(value, (int, Fraction)):
        return str(value)
    if isinstance(value, float):
        return str(int(value))
    if isinstance(value, (list, tuple)):
        return [_stringify(v) for v in value]
    if isinstance(value, dict):
        return {k: _stringify(v) for k, v in value.items()}
    return value


def _emit(envelope: dict, args) -> None:
    body = _stringify(envelope)
    if args.format == "csv":
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["name", "n", "value", "verdict", "detail"])
        for row in body["results"]:
            extras = {
                k: v
                for k, v in row.items()
                if k not in ("name", "n", "value", "verdict", "detail")
            }
            detail = row.get("detail", "")
            if extras:
                blob = json.dumps(extras, sort_keys=True, separators=(",", ":"))
                detail = f"{detail} {blob}".strip()
            value = row.get("value", "")
            if isinstance(value, (list, dict)):
                value = json.dumps(value, sort_keys=True, separators=(",", ":"))
            writer.writerow([row.get("name", ""), row.get("n", ""), value, row.get("verdict", ""), detail])
        sys.stdout.write(out.getvalue())
        return
    if args.deterministic:
        text = json.dumps(body, sort_keys=True, separators=(",", ":"))
    else:
        text = json.dumps(body, indent=2)
    sys.stdout.write(text + "\n")


def _common_config(args) -> dict:
    return {
        "format": args.format,
        "jobs": args.jobs,
        "seed": args.seed,
        "deterministic": args.deterministic,
        "budget_tuples": args.budget_tuples,
        "budget_nodes": args.budget_nodes,
    }


# ---------------------------------------------------------------------------
# subcommand handlers; each appends rows and returns an exit code
# ---------------------------------------------------------------------------


def _cmd_seq(args, rows, tel, config) -> int:
    expr = parse_expr(Path(args.expr_file).read_text())
    config["expr"] = format_expr(expr)
    config["max_n"] = args.max_n
    config["oracle_check"] = args.oracle_check
    if args.trunc_m is not None:
        config["trunc_m"] = args.trunc_m
    if args.max_n < 1:
        raise ValueError("--max-n must be at least 1")
    lseq = eval_lseq(expr, args.max_n)
    sseq = stirling_transform(lseq)
    for n in range(args.max_n + 1):
        rows.append({"name": "l", "n": n, "value": lseq[n]})
    for n in range(args.max_n + 1):
        rows.append({"name": "s", "n": n, "value": sseq[n]})
    code = EXIT_OK
    if args.oracle_check:
        top = min(args.max_n, ORACLE_CHECK_MAX_N)
        if args.trunc_m is not None:
            if args.trunc_m < 1:
                raise ValueError("--trunc-m must be at least 1")
            top = min(top, args.trunc_m)
        for n in range(1, top + 1):
            levels = (n, n + 1) if args.trunc_m is None else (args.trunc_m, args.trunc_m + 1)
            for m in levels:
                group = truncate_expr(expr, m)
                oc = count_orbits_injective(group, n, budget=args.budget_tuples)
                tel["tuples_visited"] += oc.tuples_visited
                ok = oc.count == lseq[n]
                rows.append(
                    {
                        "name": "oracle-l",
                        "n": n,
                        "value": oc.count,
                        "verdict": "match" if ok else "mismatch",
                        "oracle": {"trunc_m": m, "expected": lseq[n]},
                    }
                )
                if not ok:
                    code = EXIT_NEGATIVE
    rows.append({"name": "classification", "verdict": _CLASS_LABELS[classify(expr)]})
    return code


def _parse_grid(text: str):
    """Split a --grid string into cellular (c, d) pairs and bare
    factorial-upper constants.  Entries are comma separated; a pair is
    written c:d; values may be fractions like 3/5."""
    cells = []
    consts = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            raise ValueError("empty grid entry")
        try:
            if ":" in part:
                c_text, d_text = part.split(":", 1)
                cells.append((Fraction(c_text), Fraction(d_text)))
            else:
                consts.append(Fraction(part))
        except (ValueError, ZeroDivisionError):
            raise ValueError(f"bad grid entry {part!r}") from None
    return tuple(cells) or None, tuple(consts) or None


def _cmd_bounds(args, rows, tel, config) -> int:
    expr = parse_expr(Path(args.expr_file).read_text())
    config["expr"] = format_expr(expr)
    config["max_n"] = args.max_n
    cell_grid = c_grid = None
    if args.grid is not None:
        config["grid"] = args.grid
        cell_grid, c_grid = _parse_grid(args.grid)
    label = _CLASS_LABELS[classify(expr)]
    if label == "finite":
        rows.append(
            {"name": "classification", "verdict": "finite", "detail": "no bounds applicable"}
        )
        return EXIT_OK
    rows.append({"name": "classification", "verdict": label})
    reports = gap_verdict(expr, args.max_n, cell_grid=cell_grid, c_grid=c_grid)
    code = EXIT_OK
    for rep in reports:
        row = {
            "name": rep.kind,
            "verdict": "pass" if rep.passed else "fail",
            "verified_range": list(rep.verified_range),
        }
        if rep.c is not None:
            row["c"] = rep.c
        if rep.d is not None:
            row["d"] = rep.d
        if rep.n0 is not None:
            row["n0"] = rep.n0
        if rep.first_fail is not None:
            row["first_fail"] = rep.first_fail
        rows.append(row)
        if not rep.passed:
            code = EXIT_NEGATIVE
    return code


def _parse_bfile(text: str) -> dict[int, int]:
    entries: dict[int, int] = {}
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(f"line {ln}: expected 'n a(n)', got {line!r}", ln)
        try:
            n, value = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(f"line {ln}: bad entry {line!r}", ln) from None
        entries[n] = value
    if not entries:
        raise ParseError("b-file holds no entries")
    return entries


def _cmd_oeis(args, rows, tel, config) -> int:
    entries = _parse_bfile(Path(args.bfile).read_text())
    config["bfile"] = args.bfile
    config["max_n"] = args.max_n
    if args.max_n < 0:
        raise ValueError("--max-n must be non-negative")
    offset = min(entries) if args.offset is None else args.offset
    config["offset"] = offset

    if args.named_seq is not None:
        if args.use_s:
            raise ValueError("--use-s only applies to --expr")
        config["seq"] = args.named_seq
        value_at = {"bell": bell, "bell2": bell2, "meet-trivial-pairs": meet_trivial_pairs}[
            args.named_seq
        ]
    else:
        expr = parse_expr(Path(args.expr_file).read_text())
        config["expr"] = format_expr(expr)
        config["use_s"] = args.use_s
        seq = eval_lseq(expr, args.max_n)
        if args.use_s:
            seq = stirling_transform(seq)
        value_at = seq.__getitem__

    compared = 0
    code = EXIT_OK
    for i in range(args.max_n + 1):
        target = i + offset
        if target not in entries:
            continue
        ours = value_at(i)
        compared += 1
        theirs = entries[target]
        ok = ours == theirs
        rows.append(
            {
                "name": "term",
                "n": i,
                "value": ours,
                "verdict": "match" if ok else "mismatch",
                "oracle": {"bfile_n": target, "value": theirs},
            }
        )
        if not ok:
            code = EXIT_NEGATIVE
    if compared == 0:
        raise ValueError("no overlap between the computed range and the b-file")
    rows.append(
        {
            "name": "summary",
            "verdict": "match" if code == EXIT_OK else "mismatch",
            "detail": f"{compared} terms compared",
        }
    )
    return code


def _cmd_graphs(args, rows, tel, config) -> int:
    if args.graphs_command == "count":
        spec = parse_class_spec(Path(args.class_file).read_text(), args.mode)
        config["class_file"] = args.class_file
        config["mode"] = args.mode
        config["n"] = args.n
        value = count_labelled(
            spec, args.n, jobs=args.jobs, node_budget=args.budget_nodes
        )
        rows.append({"name": "count_labelled", "n": args.n, "value": value})
        return EXIT_OK

    if args.graphs_command == "semiinduced":
        graph = parse_graph(Path(args.graph_file).read_text())
        config["graph_file"] = args.graph_file
        config["lax"] = args.lax
        value = semi_induced_order(graph, lax=args.lax, node_budget=args.budget_nodes)
        rows.append({"name": "semi_induced_order", "value": value})
        return EXIT_OK

    # fliproundtrip
    config["k"] = args.k
    config["copies"] = 3
    if args.exhaustive:
        config["exhaustive"] = True
        all_pairs = [(i, j) for i in range(args.k) for j in range(i, args.k)]
        specs = [
            FlipSpec.from_pairs(args.k, [p for t, p in enumerate(all_pairs) if bits >> t & 1])
            for bits in range(1 << len(all_pairs))
        ]
    else:
        config["seeds"] = args.seeds
        rng = random.Random(args.seed)
        specs = [FlipSpec.random(args.k, rng) for _ in range(args.seeds)]
    clean = flipped_paths(args.k)
    failures = 0
    for idx, spec in enumerate(specs):
        try:
            recovered = flip_recover(flipped_paths(args.k, 3, spec))
            ok = recovered.adj == clean.adj and recovered.colors == clean.colors
        except ValueError:
            ok = False
        if not ok:
            failures += 1
            rows.append(
                {
                    "name": "trial",
                    "n": idx,
                    "verdict": "fail",
                    "detail": json.dumps(spec.unordered()),
                }
            )
    rows.append(
        {
            "name": "summary",
            "value": failures,
            "verdict": "pass" if failures == 0 else "fail",
            "detail": f"{len(specs)} trials",
        }
    )
    return EXIT_OK if failures == 0 else EXIT_NEGATIVE


def _cmd_witness(args, rows, tel, config) -> int:
    rel = parse_relation(Path(args.rel_file).read_text())
    config["rel_file"] = args.rel_file
    config["kind"] = args.kind
    config["size"] = args.size
    if args.size < 1:
        raise ValueError("--size must be at least 1")
    if args.kind == "order":
        result = find_order_witness(rel, args.size, node_budget=args.budget_nodes)
    elif args.kind == "coding":
        result = find_coding_witness(rel, args.size, node_budget=args.budget_nodes)
    else:
        if args.k is None:
            raise ValueError("tuplecoding needs --k")
        config["k"] = args.k
        result = find_tuple_coding_witness(
            rel, args.size, args.k, node_budget=args.budget_nodes
        )
    tel["nodes"] += result.nodes
    rows.append({"name": "search", "verdict": result.status})
    if result.status == STATUS_INDETERMINATE:
        return EXIT_INDETERMINATE
    if result.status == STATUS_NONE:
        return EXIT_NEGATIVE
    w = result.witness
    if args.kind == "order":
        rows.append({"name": "a_seq", "value": list(w.a_seq)})
        rows.append({"name": "b_seq", "value": list(w.b_seq)})
        verified = verify_order_witness(rel, w)
    else:
        rows.append({"name": "x_side", "value": [list(t) for t in w.x_side]})
        rows.append({"name": "y_side", "value": [list(t) for t in w.y_side]})
        rows.append({"name": "z_points", "value": list(w.z_points)})
        rows.append({"name": "table", "value": [list(r) for r in w.table]})
        verified = verify_coding_witness(rel, w)
    rows.append({"name": "verified", "verdict": "pass" if verified else "fail"})
    return EXIT_OK if verified else EXIT_NEGATIVE


# ---------------------------------------------------------------------------
# parser and dispatch
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--deterministic", action="store_true")
    common.add_argument("--budget-tuples", type=int, default=10**7, dest="budget_tuples")
    common.add_argument("--budget-nodes", type=int, default=10**7, dest="budget_nodes")

    parser = argparse.ArgumentParser(
        prog="growthlab",
        description="Exact growth sequences, growth bounds and witness searches.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("seq", parents=[common], help="growth-sequence prefix of an expression")
    p.add_argument("expr_file")
    p.add_argument("--max-n", type=int, default=8, dest="max_n")
    p.add_argument("--trunc-m", type=int, default=None, dest="trunc_m")
    p.add_argument("--oracle-check", action="store_true", dest="oracle_check")

    p = sub.add_parser("bounds", parents=[common], help="growth-bound verdicts")
    p.add_argument("expr_file")
    p.add_argument("--max-n", type=int, default=30, dest="max_n")
    p.add_argument("--grid", default=None)

    p = sub.add_parser("oeis", parents=[common], help="compare a sequence against a b-file")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument(
        "--seq",
        choices=("bell", "bell2", "meet-trivial-pairs"),
        dest="named_seq",
    )
    group.add_argument("--expr", dest="expr_file")
    p.add_argument("--use-s", action="store_true", dest="use_s")
    p.add_argument("--bfile", required=True)
    p.add_argument("--max-n", type=int, default=12, dest="max_n")
    p.add_argument("--offset", type=int, default=None)

    p = sub.add_parser("graphs", help="hereditary class and half-graph tools")
    gsub = p.add_subparsers(dest="graphs_command", required=True)
    g = gsub.add_parser("count", parents=[common], help="labelled members on n vertices")
    g.add_argument("--class-file", required=True, dest="class_file")
    g.add_argument("--mode", choices=("generators", "forbidden"), required=True)
    g.add_argument("--n", type=int, required=True)
    g = gsub.add_parser("semiinduced", parents=[common], help="largest semi-induced half-graph")
    g.add_argument("--graph-file", required=True, dest="graph_file")
    g.add_argument("--lax", action="store_true")
    g = gsub.add_parser("fliproundtrip", parents=[common], help="flip recovery round trips")
    g.add_argument("--k", type=int, required=True)
    g.add_argument("--seeds", type=int, default=20)
    g.add_argument("--exhaustive", action="store_true")

    p = sub.add_parser("witness", parents=[common], help="order and coding witness searches")
    p.add_argument("kind", choices=("order", "coding", "tuplecoding"))
    p.add_argument("rel_file")
    p.add_argument("--size", type=int, required=True)
    p.add_argument("--k", type=int, default=None)

    return parser


_HANDLERS = {
    "seq": _cmd_seq,
    "bounds": _cmd_bounds,
    "oeis": _cmd_oeis,
    "graphs": _cmd_graphs,
    "witness": _cmd_witness,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.deterministic:
        args.jobs = 1
    command = args.command
    if command == "graphs":
        command = f"graphs {args.graphs_command}"
    started = time.perf_counter()
    rows: list[dict] = []
    tel: dict = {"backend": None, "tuples_visited": 0, "nodes": 0}
    config = _common_config(args)
    try:
        tel["backend"] = resolve_backend(None)
        code = _HANDLERS[args.command](args, rows, tel, config)
    except CapacityError as exc:
        tel["capacity"] = str(exc)
        code = EXIT_CAPACITY
    except (ParseError, OSError, ValueError, RuntimeError) as exc:
        print(f"growthlab: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if not args.deterministic:
        tel["wall_ms"] = int((time.perf_counter() - started) * 1000)
    envelope = {
        "command": command,
        "config": config,
        "results": rows,
        "telemetry": tel,
    }
    _emit(envelope, args)
    return code
