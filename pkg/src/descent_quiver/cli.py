"""Command-line front end: build, compute, verify, export."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass

from . import export
from . import quiver as Q
from .verify import GUARDRAILS, LEVELS, default_workers, run_checks
from .workspace import Workspace

log = logging.getLogger("descent_quiver")

COMMANDS = ("faces", "lattice", "idempotents", "quiver-kf", "quiver-descent", "closed-form", "verify")
FORMATS = ("dot", "json", "text")
EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    type: str
    rank: int
    system: str = "first"
    format: str = "text"
    level: str = "fast"
    reverse: bool = False
    output: str | None = None
    workers: int = 1
    force: bool = False

    def guardrail(self) -> int | None:
        if self.command == "closed-form":
            return None
        # compute commands share the widest limits; verify uses its own level
        level = self.level if self.command == "verify" else "full"
        return GUARDRAILS[level][self.type]


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="descent-quiver",
        description="Face semigroups, descent algebras and their quivers for Coxeter types A and B.",
    )
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--type", required=True, type=str.upper, choices=("A", "B"))
    p.add_argument("--rank", required=True, type=int)
    p.add_argument("--system", choices=("first", "second"), default="first", help="l-system for the idempotents")
    p.add_argument("--format", choices=FORMATS, default=None, help="output format (default: text, json for verify)")
    p.add_argument("--level", choices=LEVELS, default="fast", help="verification level")
    p.add_argument("--reverse", action="store_true", help="reverse every arrow (descent-algebra convention)")
    p.add_argument("--output", "-o", help="write the artifact here instead of standard output")
    p.add_argument("--workers", type=int, default=None, help="worker processes for verify")
    p.add_argument("--force", action="store_true", help="ignore the rank guardrail")
    p.add_argument("-v", "--verbose", action="store_true", help="progress messages on standard error")
    return p


def config_from_args(args) -> RunConfig:
    fmt = args.format or ("json" if args.command == "verify" else "text")
    workers = args.workers if args.workers is not None else default_workers()
    if workers < 1:
        raise UsageError("--workers must be positive")
    if args.rank < 1:
        raise UsageError("--rank must be at least 1")
    return RunConfig(
        command=args.command,
        type=args.type,
        rank=args.rank,
        system=args.system,
        format=fmt,
        level=args.level,
        reverse=args.reverse,
        output=args.output,
        workers=workers,
        force=args.force,
    )


def _faces_dot(arr) -> str:
    import numpy as np

    dims = np.array([f.dim for f in arr.faces])
    lines = ["digraph faces {"]
    for f in arr.faces:
        lines.append(f'  f{f.index} [label="{f.signs}"];')
    le = arr.face_order
    for x, y in zip(*np.nonzero(le)):
        if dims[y] == dims[x] + 1:
            lines.append(f"  f{x} -> f{y};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _graph(cfg: RunConfig, graph: Q.QuiverGraph) -> str:
    if cfg.reverse:
        graph = graph.reversed()
    return export.render_quiver(graph, cfg.format)


def produce(cfg: RunConfig) -> tuple[str, int]:
    """The artifact text and exit code for one configuration."""
    if cfg.command == "closed-form":
        return _graph(cfg, Q.closed_form_quiver(cfg.type, cfg.rank)), EXIT_OK
    ws = Workspace(cfg.type, cfg.rank)
    if cfg.command == "faces":
        arr = ws.arrangement
        if cfg.format == "json":
            return export.faces_json(arr), EXIT_OK
        if cfg.format == "dot":
            return _faces_dot(arr), EXIT_OK
        return export.faces_text(arr), EXIT_OK
    if cfg.command == "lattice":
        if cfg.format == "json":
            return export.lattice_json(ws.lattice, ws.orbit_poset), EXIT_OK
        if cfg.format == "dot":
            return export.lattice_dot(ws.lattice), EXIT_OK
        return export.lattice_text(ws.lattice, ws.orbit_poset), EXIT_OK
    if cfg.command == "idempotents":
        if cfg.format == "dot":
            raise UsageError("idempotents support json and text output only")
        sys_ = ws.kF.idempotents(cfg.system)
        if cfg.format == "json":
            return export.idempotents_json(sys_, ws.lattice, ws.arrangement), EXIT_OK
        return export.idempotents_text(sys_, ws.lattice, ws.arrangement), EXIT_OK
    if cfg.command == "quiver-kf":
        counts = Q.quiver_of_kF_numeric(ws.kF, cfg.system)
        return _graph(cfg, export.kF_quiver_graph(counts, ws.lattice)), EXIT_OK
    if cfg.command == "quiver-descent":
        return _graph(cfg, Q.quiver_of_invariant_numeric(ws.invariant)), EXIT_OK
    if cfg.command == "verify":
        report = run_checks(ws, cfg.level, cfg.workers)
        if cfg.format == "json":
            text = json.dumps(report, indent=2, sort_keys=True) + "\n"
        else:
            lines = [f"{r['status'].upper():4s} {r['name']}" for r in report["checks"]]
            lines.append("OK" if report["ok"] else "FAILED")
            text = "\n".join(lines) + "\n"
        return text, EXIT_OK if report["ok"] else EXIT_FAIL
    raise UsageError(f"unknown command {cfg.command!r}")


def run(cfg: RunConfig) -> int:
    limit = cfg.guardrail()
    if limit is not None and cfg.rank > limit and not cfg.force:
        print(
            f"refusing {cfg.command} at {cfg.type}{cfg.rank}: the supported range is rank <= {limit} "
            f"for type {cfg.type}; pass --force to run anyway",
            file=sys.stderr,
        )
        return EXIT_USAGE
    text, code = produce(cfg)
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        cfg = config_from_args(args)
        return run(cfg)
    except UsageError as exc:
        print(f"descent-quiver: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
