"""Command-line interface.

Subcommands mirror the library: ``construct`` builds squares, ``verify``
checks properties of squares read from files, ``search min`` runs the
exhaustive ascending-size scan, ``code`` analyzes or exports the word
code of a square, and ``export graph`` writes the complement graph.

Every invocation that writes an output file also writes a
``<out>.manifest.json`` next to it recording the command line, parsed
parameters, SHA-256 digests of inputs and outputs, tool version, and
wall time.

Exit codes: 0 success; 1 a verification failed; 2 usage error;
3 malformed input file; 4 parameters are infeasible (for example a
minimum construction at an order whose blocks do not exist).
"""

from __future__ import annotations

import argparse
import dataclasses
import hashlib
import json
import os
import sys
import time
from pathlib import Path
from typing import Any

from . import __version__
from .codes import check_code_equivalence, code_to_json, to_code
from .construct import ConstructionError, k_mopls_diagonal, k_ols, min_mopls, min_mpls
from .core import KPartialSquare, SquareError
from .formats import MAX_TEXT_ORDER, ParseError, load_square, to_json, to_text_grid
from .graphview import complement
from .maximality import find_extension, maximalize
from .search import min_maximal
from .verify import check_lemma2, max_empty_transversal, verify_bound, verify_hr_structure, verify_min_structure

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_MALFORMED = 3
EXIT_INFEASIBLE = 4


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


class RunContext:
    """Collects file reads/writes so a manifest can be emitted at the end."""

    def __init__(self, argv: list[str]):
        self.argv = argv
        self.started = time.time()
        self.inputs: list[Path] = []
        self.outputs: list[Path] = []

    def read_square(self, path: str, k: int | None = None) -> KPartialSquare:
        p = Path(path)
        square = load_square(p, k=k)
        self.inputs.append(p)
        return square

    def write_text(self, path: Path, text: str) -> None:
        path.write_text(text)
        self.outputs.append(path)

    def write_manifests(self, parameters: dict[str, Any]) -> None:
        if not self.outputs:
            return
        doc = {
            "tool": "mopls",
            "version": __version__,
            "argv": self.argv,
            "parameters": parameters,
            "inputs": [
                {"path": str(p), "sha256": _sha256(p)} for p in self.inputs
            ],
            "outputs": [
                {"path": str(p), "sha256": _sha256(p)} for p in self.outputs
            ],
            "wall_time_seconds": round(time.time() - self.started, 3),
            "finished_at": time.strftime("%Y-%m-%dT%H:%M:%S%z"),
        }
        for out in self.outputs:
            manifest = out.with_name(out.name + ".manifest.json")
            manifest.write_text(json.dumps(doc, indent=2) + "\n")


def _jsonable(value: Any) -> Any:
    if isinstance(value, KPartialSquare):
        return json.loads(to_json(value))
    if dataclasses.is_dataclass(value) and not isinstance(value, type):
        return {f.name: _jsonable(getattr(value, f.name)) for f in dataclasses.fields(value)}
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


def _emit(args: argparse.Namespace, report: Any, lines: list[str]) -> None:
    if getattr(args, "json", False):
        print(json.dumps(_jsonable(report), indent=2))
    else:
        for line in lines:
            print(line)


def _write_square(ctx: RunContext, args: argparse.Namespace, square: KPartialSquare) -> None:
    fmt = getattr(args, "format", "auto") or "auto"
    if args.out:
        out = Path(args.out)
        if fmt == "auto":
            fmt = "json" if out.suffix.lower() == ".json" else "text"
        text = to_json(square) if fmt == "json" else to_text_grid(square)
        ctx.write_text(out, text)
        print(f"wrote {out} ({square.filled_count} filled cells, n={square.n}, k={square.k})")
    else:
        if fmt in ("auto", "text") and square.n <= MAX_TEXT_ORDER:
            print(to_text_grid(square), end="")
        else:
            print(to_json(square), end="")


def _parse_int_list(text: str, flag: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part != ""]
    except ValueError:
        raise ParseError(f"{flag} expects comma-separated integers, got {text!r}") from None


# -- construct -----------------------------------------------------------------


def cmd_construct(ctx: RunContext, args: argparse.Namespace) -> int:
    kind = args.what
    if kind == "min-mopls":
        square = min_mopls(args.n)
    elif kind == "min-mpls":
        square = min_mpls(args.n)
    elif kind == "k-mopls":
        if args.blocks is None:
            raise ConstructionError("k-mopls requires --blocks")
        square = k_mopls_diagonal(args.n, args.k, _parse_int_list(args.blocks, "--blocks"))
    elif kind == "k-ols":
        square = k_ols(args.k, args.n)
    elif kind == "maximal":
        policy = "random" if args.seed is not None else "lex"
        square = maximalize(KPartialSquare.empty(args.n, args.k), policy=policy, seed=args.seed)
    else:  # pragma: no cover - argparse restricts choices
        raise AssertionError(kind)
    _write_square(ctx, args, square)
    return EXIT_OK


# -- verify ---------------------------------------------------------------------


def _verify_one_maximal(path: str) -> tuple[str, bool, str]:
    try:
        square = load_square(path)
    except ParseError as exc:
        return path, False, f"malformed: {exc}"
    witness = find_extension(square)
    if witness is None:
        return path, True, f"maximal (n={square.n}, k={square.k}, filled={square.filled_count})"
    return path, False, f"extendable at {witness.cell} with {witness.entries}"


def cmd_verify(ctx: RunContext, args: argparse.Namespace) -> int:
    what = args.what
    if what == "maximal":
        paths = args.files
        threads = args.threads or int(os.environ.get("MOPLS_THREADS", "1"))
        if threads > 1 and len(paths) > 1:
            from concurrent.futures import ProcessPoolExecutor

            with ProcessPoolExecutor(max_workers=threads) as pool:
                results = list(pool.map(_verify_one_maximal, paths))
        else:
            results = [_verify_one_maximal(p) for p in paths]
        ok = True
        for path, good, message in results:
            print(f"{path}: {message}")
            ok &= good
            if not good and message.startswith("malformed"):
                return EXIT_MALFORMED
        for p in paths:
            ctx.inputs.append(Path(p))
        return EXIT_OK if ok else EXIT_VERIFY_FAILED

    square = ctx.read_square(args.files[0])
    if what == "bound":
        report = verify_bound(square)
        _emit(args, report, [
            f"filled={report.filled} min_frequency={report.min_frequency} "
            f"({report.family} {report.index}) transversal={report.transversal}",
            f"required>={report.required} lower_bound_hit={report.attains_lower_bound} "
            f"tight={report.tight} ok={report.ok}",
        ])
        return EXIT_OK if report.ok else EXIT_VERIFY_FAILED
    if what == "structure":
        report = verify_min_structure(square)
        lines = [f"ok={report.ok} block_orders={report.block_orders}"]
        if report.reason:
            lines.append(f"reason: {report.reason}")
        if report.note:
            lines.append(f"note: {report.note}")
        _emit(args, report, lines)
        return EXIT_OK if report.ok else EXIT_VERIFY_FAILED
    if what == "hr":
        report = verify_hr_structure(square)
        lines = [f"ok={report.ok} block_orders={report.block_orders}"]
        if report.reason:
            lines.append(f"reason: {report.reason}")
        _emit(args, report, lines)
        return EXIT_OK if report.ok else EXIT_VERIFY_FAILED
    if what == "lemma2":
        if args.rows is None or args.cols is None:
            print("verify lemma2 requires --rows and --cols", file=sys.stderr)
            return EXIT_USAGE
        rows = _parse_int_list(args.rows, "--rows")
        cols = _parse_int_list(args.cols, "--cols")
        report = check_lemma2(square, rows, cols)
        _emit(args, report, [
            f"d={report.d} t={report.t} residual_filled={report.residual_filled} "
            f"freq_ok={report.freq_ok} ok={report.ok}",
        ])
        return EXIT_OK if report.ok else EXIT_VERIFY_FAILED
    raise AssertionError(what)  # pragma: no cover


# -- search ----------------------------------------------------------------------


def cmd_search(ctx: RunContext, args: argparse.Namespace) -> int:
    result = min_maximal(
        args.n,
        args.k,
        budget=args.budget,
        checkpoint=args.checkpoint,
        resume=args.resume,
    )
    lines = [
        f"n={result.n} k={result.k} nodes={result.nodes} levels_completed={result.levels_completed}",
        f"min_size={result.min_size} exact={result.exact} no_maximal_below={result.no_maximal_below}",
    ]
    if result.exhausted_budget:
        lines.append(f"budget of {result.budget} nodes exhausted; resume with --resume")
    _emit(args, result, lines)
    if args.out:
        doc = _jsonable(result)
        ctx.write_text(Path(args.out), json.dumps(doc, indent=2) + "\n")
    return EXIT_OK


# -- code and graph ---------------------------------------------------------------


def cmd_code(ctx: RunContext, args: argparse.Namespace) -> int:
    square = ctx.read_square(args.file)
    if args.what == "analyze":
        report = check_code_equivalence(square)
        _emit(args, report, [
            f"{report.size} words of length {report.length} over {report.n} letters",
            f"min_distance={report.min_distance} covering_radius={report.covering_radius}",
            f"maximal={report.maximal} rule='{report.rule}' consistent={report.consistent}",
        ])
        return EXIT_OK if report.consistent else EXIT_VERIFY_FAILED
    if args.what == "export":
        if not args.out:
            print("code export requires --out", file=sys.stderr)
            return EXIT_USAGE
        ctx.write_text(Path(args.out), code_to_json(to_code(square)))
        print(f"wrote {args.out}")
        return EXIT_OK
    raise AssertionError(args.what)  # pragma: no cover


def cmd_export(ctx: RunContext, args: argparse.Namespace) -> int:
    square = ctx.read_square(args.file)
    graph = complement(square)
    if not args.out:
        print("export graph requires --out", file=sys.stderr)
        return EXIT_USAGE
    out = Path(args.out)
    if args.format == "edges":
        edges = [[a, b] for a, b in graph.to_edge_list()]
        doc = {
            "format": "complement-graph",
            "version": 1,
            "n": square.n,
            "k": square.k,
            "groups": graph.groups,
            "edges": edges,
        }
        ctx.write_text(out, json.dumps(doc, indent=2) + "\n")
    else:
        ctx.write_text(out, graph.to_dot())
    print(f"wrote {out}")
    return EXIT_OK


# -- parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mopls",
        description="Maximal orthogonal partial Latin squares: construct, verify, search, export.",
    )
    parser.add_argument("--version", action="version", version=f"mopls {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_con = sub.add_parser("construct", help="build squares")
    p_con.add_argument(
        "what", choices=["min-mopls", "min-mpls", "k-mopls", "k-ols", "maximal"]
    )
    p_con.add_argument("--n", type=int, required=True, help="order of the square")
    p_con.add_argument("--k", type=int, default=2, help="number of entry layers")
    p_con.add_argument("--blocks", help="comma-separated block orders (k-mopls)")
    p_con.add_argument("--seed", type=int, help="randomized completion seed (maximal)")
    p_con.add_argument("--out", help="output file (text grid or JSON by suffix)")
    p_con.add_argument("--format", choices=["auto", "text", "json"], default="auto")
    p_con.set_defaults(func=cmd_construct)

    p_ver = sub.add_parser("verify", help="check properties of square files")
    p_ver.add_argument("what", choices=["maximal", "bound", "structure", "hr", "lemma2"])
    p_ver.add_argument("files", nargs="+", help="square file(s)")
    p_ver.add_argument("--rows", help="comma-separated region rows (lemma2)")
    p_ver.add_argument("--cols", help="comma-separated region cols (lemma2)")
    p_ver.add_argument("--threads", type=int, help="parallel workers for maximal batches")
    p_ver.add_argument("--json", action="store_true", help="machine-readable report")
    p_ver.set_defaults(func=cmd_verify)

    p_sea = sub.add_parser("search", help="exhaustive ascending-size search")
    p_sea_sub = p_sea.add_subparsers(dest="what", required=True)
    p_min = p_sea_sub.add_parser("min", help="minimum size of a maximal square")
    p_min.add_argument("--n", type=int, required=True)
    p_min.add_argument("--k", type=int, default=2)
    p_min.add_argument("--budget", type=int, help="node budget for this run")
    p_min.add_argument("--checkpoint", help="checkpoint file (JSON)")
    p_min.add_argument("--resume", action="store_true", help="resume from checkpoint")
    p_min.add_argument("--out", help="write the result as JSON")
    p_min.add_argument("--json", action="store_true")
    p_min.set_defaults(func=cmd_search)

    p_code = sub.add_parser("code", help="word-code view of a square")
    p_code.add_argument("what", choices=["analyze", "export"])
    p_code.add_argument("file", help="square file")
    p_code.add_argument("--out", help="output file (export)")
    p_code.add_argument("--json", action="store_true")
    p_code.set_defaults(func=cmd_code)

    p_exp = sub.add_parser("export", help="export derived structures")
    p_exp_sub = p_exp.add_subparsers(dest="what", required=True)
    p_gra = p_exp_sub.add_parser("graph", help="complement graph of a square")
    p_gra.add_argument("file", help="square file")
    p_gra.add_argument("--out", required=True, help="output file")
    p_gra.add_argument("--format", choices=["dot", "edges"], default="dot")
    p_gra.set_defaults(func=cmd_export)

    return parser


def main(argv: "list[str] | None" = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    ctx = RunContext(argv=["mopls"] + argv)
    try:
        status = args.func(ctx, args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MALFORMED
    except ConstructionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except SquareError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VERIFY_FAILED
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    parameters = {
        key: value
        for key, value in vars(args).items()
        if key != "func" and not key.startswith("_")
    }
    ctx.write_manifests(parameters)
    return status


dispatch = main


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
