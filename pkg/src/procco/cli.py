"""The ``procco`` command line tool.

Subcommands: ``validate``, ``lint``, ``query``, ``matrix``, ``schema``,
``export``, ``stats``. Results go to standard output, parse diagnostics to
standard error. Exit codes are a stable contract:

    0  clean
    1  findings with error severity
    2  parse failure
    3  usage error

Given identical inputs, output on stdout is bit-identical across runs.
All configuration is flags plus one optional partition override file; no
environment variables are consulted.
"""

from __future__ import annotations

import argparse
import sys
from collections import Counter
from enum import IntEnum
from pathlib import Path

from . import dsl
from .errors import MissingEntityError, PartitionConfigError, ProccoError
from .graph import InstanceGraph, export_canonical
from .query import axiom_witness, closure, descendants
from .refinement import (
    builtin_matrix,
    check_schema_refinement,
    render_matrix_canonical,
    render_matrix_text,
)
from .schema import (
    builtin_schema,
    effective_partitions,
    parse_partition_config,
    render_schema_canonical,
    render_schema_text,
)
from .validator import (
    Mode,
    render_report_canonical,
    render_report_text,
    validate,
)


class ExitCode(IntEnum):
    CLEAN = 0
    FINDINGS = 1
    PARSE_FAILURE = 2
    USAGE = 3


class _ArgumentParser(argparse.ArgumentParser):
    """argparse with the documented usage exit code."""

    def error(self, message: str) -> None:  # noqa: D401
        self.print_usage(sys.stderr)
        raise SystemExit(ExitCode.USAGE) from None


def _read_bytes(path: str) -> bytes:
    if path == "-":
        return sys.stdin.buffer.read()
    return Path(path).read_bytes()


def _load_graph(path: str) -> InstanceGraph | None:
    """Parse one model file, sending diagnostics to stderr."""
    try:
        data = _read_bytes(path)
    except OSError as exc:
        print(f"procco: cannot read {path}: {exc}", file=sys.stderr)
        return None
    graph, diagnostics = dsl.parse_bytes(data, origin=path)
    for diag in diagnostics:
        print(f"{path}:{diag}", file=sys.stderr)
    return graph


def _load_partitions(path: str | None):
    if path is None:
        return None
    text = Path(path).read_text(encoding="utf-8")
    overrides = parse_partition_config(text)
    return effective_partitions(builtin_schema(), overrides)


def _figure_stem(path: str) -> str:
    return "stdin" if path == "-" else Path(path).stem


def _cmd_validate(args: argparse.Namespace, lint: bool = False) -> int:
    try:
        partitions = _load_partitions(args.partitions)
    except (OSError, PartitionConfigError) as exc:
        print(f"procco: bad partition config: {exc}", file=sys.stderr)
        return ExitCode.USAGE
    mode = Mode.STRICT if getattr(args, "strict", False) else Mode.LENIENT
    exit_code = ExitCode.CLEAN
    multiple = len(args.files) > 1
    for path in args.files:
        graph = _load_graph(path)
        if graph is None:
            exit_code = ExitCode.PARSE_FAILURE
            continue
        report = validate(graph, mode, partitions=partitions,
                          transitive_axioms=args.transitive_axioms)
        if multiple:
            print(f"# {path}")
        rendered = (render_report_canonical(report) if args.format == "canonical"
                    else render_report_text(report))
        sys.stdout.write(rendered)
        if args.figures:
            from .figures import save_findings_figure
            save_findings_figure(report, args.figures, stem=f"findings_{_figure_stem(path)}")
        if not lint and report.has_errors and exit_code == ExitCode.CLEAN:
            exit_code = ExitCode.FINDINGS
    return exit_code


def _cmd_lint(args: argparse.Namespace) -> int:
    # Lint reports the same findings but never fails the build on model
    # quality; only unparsable input is fatal.
    return _cmd_validate(args, lint=True)


def _cmd_export(args: argparse.Namespace) -> int:
    graph = _load_graph(args.file)
    if graph is None:
        return ExitCode.PARSE_FAILURE
    sys.stdout.write(export_canonical(graph))
    return ExitCode.CLEAN


def _cmd_stats(args: argparse.Namespace) -> int:
    graph = _load_graph(args.file)
    if graph is None:
        return ExitCode.PARSE_FAILURE
    entity_counts = Counter(e.kind for e in graph.entities.values())
    rel_counts = Counter(e.rel for e in graph.relations)
    comp_counts = Counter(e.flavor for e in graph.composition)
    if args.format == "canonical":
        lines = ["procco-stats\tv1",
                 f"total\tentities\t{len(graph.entities)}",
                 f"total\trelations\t{len(graph.relations)}",
                 f"total\tcomposition\t{len(graph.composition)}"]
        lines += [f"entity\t{k}\t{v}" for k, v in sorted(entity_counts.items())]
        lines += [f"relation\t{k}\t{v}" for k, v in sorted(rel_counts.items())]
        lines += [f"comp\t{k}\t{v}" for k, v in sorted(comp_counts.items())]
        sys.stdout.write("\n".join(lines) + "\n")
    else:
        sys.stdout.write(f"entities: {len(graph.entities)}  "
                         f"relations: {len(graph.relations)}  "
                         f"composition: {len(graph.composition)}\n")
        for title, counts in (("ENTITIES", entity_counts),
                              ("RELATIONS", rel_counts),
                              ("COMPOSITION", comp_counts)):
            if counts:
                sys.stdout.write(f"{title}\n")
                for key, value in sorted(counts.items()):
                    sys.stdout.write(f"  {key}: {value}\n")
    if args.figures:
        from .figures import save_stats_figures
        save_stats_figures(graph, args.figures, stem=f"stats_{_figure_stem(args.file)}")
    return ExitCode.CLEAN


def _cmd_matrix(args: argparse.Namespace) -> int:
    rows = builtin_matrix()
    if args.format == "canonical":
        sys.stdout.write(render_matrix_canonical(rows))
    else:
        sys.stdout.write(render_matrix_text(rows))
    if args.check:
        findings = check_schema_refinement()
        if args.format == "canonical":
            for f in findings:
                subjects = ",".join(f.subjects) if f.subjects else "-"
                sys.stdout.write(f"finding\t{f.code}\t{f.severity}\t{subjects}\t{f.message}\n")
        else:
            sys.stdout.write("\n")
            for f in findings:
                sys.stdout.write(f.render() + "\n")
        if any(f.severity == "error" for f in findings):
            return ExitCode.FINDINGS
    return ExitCode.CLEAN


def _cmd_schema(args: argparse.Namespace) -> int:
    try:
        partitions = _load_partitions(args.partitions)
    except (OSError, PartitionConfigError) as exc:
        print(f"procco: bad partition config: {exc}", file=sys.stderr)
        return ExitCode.USAGE
    schema = builtin_schema()
    if args.format == "canonical":
        sys.stdout.write(render_schema_canonical(schema, partitions))
    else:
        sys.stdout.write(render_schema_text(schema, partitions))
    return ExitCode.CLEAN


def _cmd_query(args: argparse.Namespace) -> int:
    graph = _load_graph(args.file)
    if graph is None:
        return ExitCode.PARSE_FAILURE
    try:
        if args.op == "descendants":
            if not args.id:
                print("procco: query --op descendants requires --id", file=sys.stderr)
                return ExitCode.USAGE
            for entity_id in descendants(graph, args.id, transitive=args.transitive):
                print(entity_id)
        elif args.op == "closure":
            if not args.id or not args.rel:
                print("procco: query --op closure requires --id and --rel", file=sys.stderr)
                return ExitCode.USAGE
            for entity_id in sorted(closure(graph, args.id, args.rel)):
                print(entity_id)
        elif args.op == "witness":
            if not args.axiom or not args.subjects:
                print("procco: query --op witness requires --axiom and --subjects",
                      file=sys.stderr)
                return ExitCode.USAGE
            subjects = [s for s in args.subjects.split(",") if s]
            result = axiom_witness(graph, args.axiom, subjects)
            print(f"satisfied: {'true' if result.satisfied else 'false'}")
            if result.witness is not None:
                print(f"witness: {result.witness}")
    except MissingEntityError as exc:
        print(f"procco: {exc}", file=sys.stderr)
        return ExitCode.USAGE
    except (ProccoError, ValueError) as exc:
        print(f"procco: {exc}", file=sys.stderr)
        return ExitCode.USAGE
    return ExitCode.CLEAN


def build_parser() -> _ArgumentParser:
    parser = _ArgumentParser(prog="procco",
                             description="Validate process-model instance graphs "
                                         "against the built-in ProcessCO v1.3 ontology.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_format(p) -> None:
        p.add_argument("--format", choices=("text", "canonical"), default="text",
                       help="output format (default: text)")

    p_validate = sub.add_parser("validate", help="run all checks on model files")
    p_validate.add_argument("files", nargs="+", help="model files (.pco), or - for stdin")
    p_validate.add_argument("--strict", action="store_true",
                            help="upgrade participation findings to errors")
    p_validate.add_argument("--partitions", metavar="CFG",
                            help="partition override file")
    p_validate.add_argument("--transitive-axioms", action="store_true",
                            help="let any descendant discharge an axiom, not only direct parts")
    p_validate.add_argument("--figures", metavar="DIR",
                            help="also render findings charts into DIR")
    add_format(p_validate)
    p_validate.set_defaults(func=_cmd_validate)

    p_lint = sub.add_parser("lint", help="validate, but never fail on model quality")
    p_lint.add_argument("files", nargs="+", help="model files (.pco), or - for stdin")
    p_lint.add_argument("--partitions", metavar="CFG", help="partition override file")
    p_lint.add_argument("--transitive-axioms", action="store_true")
    p_lint.add_argument("--figures", metavar="DIR",
                        help="also render findings charts into DIR")
    add_format(p_lint)
    p_lint.set_defaults(func=_cmd_lint, strict=False)

    p_query = sub.add_parser("query", help="closure and witness queries")
    p_query.add_argument("file", help="model file (.pco), or - for stdin")
    p_query.add_argument("--op", choices=("descendants", "closure", "witness"), required=True)
    p_query.add_argument("--id", help="subject entity id (descendants, closure)")
    p_query.add_argument("--rel", help="relation name (closure)")
    p_query.add_argument("--axiom", help="axiom id A1..A6 (witness)")
    p_query.add_argument("--subjects", help="comma-separated subject ids (witness)")
    p_query.add_argument("--transitive", action="store_true",
                         help="transitive closure of parts (descendants)")
    p_query.set_defaults(func=_cmd_query)

    p_matrix = sub.add_parser("matrix", help="print the refinement matrix")
    p_matrix.add_argument("--check", action="store_true",
                          help="append the refinement consistency report")
    add_format(p_matrix)
    p_matrix.set_defaults(func=_cmd_matrix)

    p_schema = sub.add_parser("schema", help="print the built-in schema tables")
    p_schema.add_argument("--partitions", metavar="CFG", help="partition override file")
    add_format(p_schema)
    p_schema.set_defaults(func=_cmd_schema)

    p_export = sub.add_parser("export", help="print a model in canonical graph form")
    p_export.add_argument("file", help="model file (.pco), or - for stdin")
    p_export.set_defaults(func=_cmd_export)

    p_stats = sub.add_parser("stats", help="entity and edge counts per kind")
    p_stats.add_argument("file", help="model file (.pco), or - for stdin")
    p_stats.add_argument("--figures", metavar="DIR",
                         help="also render count charts into DIR")
    add_format(p_stats)
    p_stats.set_defaults(func=_cmd_stats)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else ExitCode.USAGE
    return int(args.func(args))


if __name__ == "__main__":
    raise SystemExit(main())
