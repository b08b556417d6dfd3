"""Command-line interface: generate, summary, crucial, partition, export, help.

Exit codes: 0 success, 1 usage error, 2 data or I/O error.
"""
from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import __version__
from .crucial import crucial
from .export import ExportError, export_graph, export_jupyter_bundle
from .extractor import extract_project
from .model import GraphInvariantError
from .partition import (
    ALGORITHMS,
    DEFAULT_EPSILON,
    PartitionError,
    partition_sweep,
)
from .reports import REPORT_FORMATS, render_crucial, render_partitions, render_summary
from .storage import MissingMetadataError, StorageError, load_graph, save_graph
from .summary import summarize

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2

SUPPORTED_LANGUAGES = ("java",)

HELP_TEXT = """\
Usage: scg-cli [COMMAND]
CLI to analyze projects based on SCG data
Commands:
  help       Display help information about the specified command.
  crucial    Find crucial code entities.
  generate   Generate SCG metadata.
  partition  Suggest project partitioning.
  summary    Summarize the project.
  export     Export SCG metadata to various output formats.
"""

COMMAND_HELP = {
    "help": "Usage: scg-cli help [COMMAND]\nDisplay help information about the specified command.",
    "crucial": (
        "Usage: scg-cli crucial [-n N] [-o {txt,html,tex,csv,json}] [--damping D]"
        " [--alpha A] [--out-dir DIR] <workspace>\nFind crucial code entities."
    ),
    "generate": (
        "Usage: scg-cli generate [-l java] <workspace>\nGenerate SCG metadata."
    ),
    "partition": (
        "Usage: scg-cli partition [-o {txt,html,tex,csv,json,gml}] [--seed S]"
        " [--epsilon E] [--out-dir DIR] <workspace> <n>\nSuggest project partitioning."
    ),
    "summary": (
        "Usage: scg-cli summary [-o {txt,html,tex,csv,json}] [--out-dir DIR]"
        " <workspace>\nSummarize the project."
    ),
    "export": (
        "Usage: scg-cli export [-o {gdf,dot,graphml,gml,jupyter}] [--out-dir DIR]"
        " <workspace>\nExport SCG metadata to various output formats."
    ),
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(message)


def _default_seed() -> int:
    env = os.environ.get("SCG_CLI_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            pass
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="scg-cli", add_help=False)
    parser.add_argument("--version", action="store_true")
    sub = parser.add_subparsers(dest="command")

    p_help = sub.add_parser("help", add_help=False)
    p_help.add_argument("topic", nargs="?")

    p_gen = sub.add_parser("generate", add_help=False)
    p_gen.add_argument("-l", "--language", default="java")
    p_gen.add_argument("--format", choices=("binary", "json"), default="binary")
    p_gen.add_argument("workspace")

    p_sum = sub.add_parser("summary", add_help=False)
    p_sum.add_argument("-o", "--output", choices=REPORT_FORMATS, default="txt")
    p_sum.add_argument("--out-dir", default=None)
    p_sum.add_argument("workspace")

    p_cru = sub.add_parser("crucial", add_help=False)
    p_cru.add_argument("-n", "--top", type=int, default=10)
    p_cru.add_argument("-o", "--output", choices=REPORT_FORMATS, default="txt")
    p_cru.add_argument("--damping", type=float, default=0.85)
    p_cru.add_argument("--alpha", type=float, default=0.1)
    p_cru.add_argument("--out-dir", default=None)
    p_cru.add_argument("workspace")

    p_par = sub.add_parser("partition", add_help=False)
    p_par.add_argument("-o", "--output", choices=REPORT_FORMATS + ("gml",), default="txt")
    p_par.add_argument("--seed", type=int, default=None)
    p_par.add_argument("--epsilon", type=float, default=DEFAULT_EPSILON)
    p_par.add_argument("--out-dir", default=None)
    p_par.add_argument("workspace")
    p_par.add_argument("n", type=int)

    p_exp = sub.add_parser("export", add_help=False)
    p_exp.add_argument("-o", "--output", choices=("gdf", "dot", "graphml", "gml", "jupyter"), default="gdf")
    p_exp.add_argument("--out-dir", default=None)
    p_exp.add_argument("workspace")
    return parser


def _out_dir(args: argparse.Namespace) -> Path:
    return Path(args.out_dir) if args.out_dir else Path("scg-output")


def _load(args: argparse.Namespace):
    workspace = Path(args.workspace)
    if not workspace.is_dir():
        raise MissingMetadataError(f"workspace {workspace} does not exist")
    return load_graph(workspace)


def _emit(document: str, fmt: str, args: argparse.Namespace, stem: str) -> None:
    if fmt == "txt":
        sys.stdout.write(document)
        return
    out_dir = _out_dir(args)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / f"{stem}.{fmt}"
    path.write_text(document, encoding="utf-8")
    print(f"wrote {path}")


def _cmd_generate(args: argparse.Namespace) -> int:
    if args.language not in SUPPORTED_LANGUAGES:
        raise UsageError(
            f"unsupported language {args.language!r}; supported languages: "
            + ", ".join(SUPPORTED_LANGUAGES)
        )
    workspace = Path(args.workspace)
    if not workspace.is_dir():
        raise UsageError(f"workspace {workspace} does not exist")
    graph, report = extract_project(workspace)
    if report.files_parsed + report.files_failed == 0:
        print("warning: no Java files found", file=sys.stderr)
    written = save_graph(graph, workspace, fmt=args.format)
    print(
        f"parsed {report.files_parsed} files ({report.files_failed} failed, "
        f"{report.unresolved_references} unresolved references) in {report.elapsed_ms} ms; "
        f"wrote {len(written)} metadata files"
    )
    return EXIT_OK


def _cmd_summary(args: argparse.Namespace) -> int:
    graph = _load(args)
    stats = summarize(graph)
    _emit(render_summary(stats, args.output), args.output, args, f"{graph.project_name}-summary")
    return EXIT_OK


def _cmd_crucial(args: argparse.Namespace) -> int:
    if args.top < 1:
        raise UsageError("-n must be at least 1")
    graph = _load(args)
    report = crucial(graph, n=args.top, damping=args.damping, alpha=args.alpha)
    _emit(render_crucial(report, args.output), args.output, args, f"{graph.project_name}-crucial")
    return EXIT_OK


def _cmd_partition(args: argparse.Namespace) -> int:
    graph = _load(args)
    seed = args.seed if args.seed is not None else _default_seed()
    results = partition_sweep(graph, args.n, seed=seed, epsilon=args.epsilon)
    project = graph.project_name
    if args.output == "csv":
        out_dir = _out_dir(args)
        out_dir.mkdir(parents=True, exist_ok=True)
        for r in results:
            path = out_dir / f"{project}-npart-{r.k}-{r.algorithm}.csv"
            lines = ["id,npart"] + [
                f'"{nid}",{part}' for nid, part in sorted(r.assignment.items())
            ]
            path.write_text("\n".join(lines) + "\n", encoding="utf-8")
            print(f"wrote {path}")
        return EXIT_OK
    if args.output == "gml":
        partitions = {
            f"npart_{r.k}_{r.algorithm}".replace("-", "_"): r.assignment for r in results
        }
        path = export_graph(graph, "gml", _out_dir(args), partitions=partitions)
        print(f"wrote {path}")
        return EXIT_OK
    _emit(render_partitions(results, args.output), args.output, args, f"{project}-partition")
    return EXIT_OK


def _cmd_export(args: argparse.Namespace) -> int:
    graph = _load(args)
    if args.output == "jupyter":
        bundle = export_jupyter_bundle(graph, Path(args.workspace), _out_dir(args))
        print(f"wrote {bundle}")
    else:
        path = export_graph(graph, args.output, _out_dir(args))
        print(f"wrote {path}")
    return EXIT_OK


def _cmd_help(args: argparse.Namespace) -> int:
    topic = getattr(args, "topic", None)
    if topic is None:
        print(HELP_TEXT, end="")
        return EXIT_OK
    if topic not in COMMAND_HELP:
        raise UsageError(f"unknown command {topic!r}")
    print(COMMAND_HELP[topic])
    return EXIT_OK


_DISPATCH = {
    "help": _cmd_help,
    "generate": _cmd_generate,
    "summary": _cmd_summary,
    "crucial": _cmd_crucial,
    "partition": _cmd_partition,
    "export": _cmd_export,
}


def run(argv: list[str]) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        print(HELP_TEXT, end="", file=sys.stderr)
        return EXIT_USAGE
    if getattr(args, "version", False) and args.command is None:
        print(f"scg-cli {__version__}")
        return EXIT_OK
    if args.command is None:
        print(HELP_TEXT, end="")
        return EXIT_OK
    try:
        return _DISPATCH[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (MissingMetadataError, StorageError, ExportError, PartitionError, GraphInvariantError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
