"""Command-line interface.

Subcommands: ``replay`` a recorded trace to a transcript, ``serve`` the live
TCP endpoint, ``describe`` the semantic tree, and ``trace-svg`` to render
finger movement over the chart.  Set CHARTA11Y_LOG to control log verbosity.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

from . import narration
from .config import ConfigError, build_session, load_config
from .server import serve
from .session import Session
from .svg import trace_svg
from .trace import TraceError, load_trace, replay_trace


def _setup_logging() -> None:
    level = os.environ.get("CHARTA11Y_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING),
                        format="%(asctime)s %(name)s %(levelname)s %(message)s")


def _describe_lines(session: Session) -> list[str]:
    tree = session.tree
    lines: list[str] = []

    def walk(node_id: str, depth: int) -> None:
        node = tree.node(node_id)
        label = narration.node_label(tree, node)
        lines.append(f"{'  ' * depth}{node_id}  [{node.level}]  {label}")
        for child in node.children:
            walk(child, depth + 1)

    walk(tree.root_id, 0)
    return lines


def cmd_replay(args: argparse.Namespace) -> int:
    cfg = load_config(args.config)
    trace = load_trace(args.trace)
    text = replay_trace(cfg, trace, force=args.force)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    cfg = load_config(args.config)
    serve(cfg, port=args.port, host=args.host)
    return 0


def cmd_describe(args: argparse.Namespace) -> int:
    session = build_session(load_config(args.config))
    for line in _describe_lines(session):
        print(line)
    return 0


def cmd_trace_svg(args: argparse.Namespace) -> int:
    cfg = load_config(args.config)
    trace = load_trace(args.trace)
    session = build_session(cfg)
    Path(args.output).write_text(trace_svg(session, list(trace.events)),
                                 encoding="utf-8")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="charta11y",
        description="Touch-exploration engine for accessible charts")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("replay", help="replay a trace into a transcript")
    p.add_argument("config")
    p.add_argument("trace")
    p.add_argument("-o", "--output", help="write transcript here instead of stdout")
    p.add_argument("--force", action="store_true",
                   help="ignore a config-hash mismatch")
    p.set_defaults(func=cmd_replay)

    p = sub.add_parser("serve", help="run the live session endpoint")
    p.add_argument("config")
    p.add_argument("--port", type=int, required=True)
    p.add_argument("--host", default="127.0.0.1")
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("describe", help="print the semantic tree")
    p.add_argument("config")
    p.set_defaults(func=cmd_describe)

    p = sub.add_parser("trace-svg", help="render finger paths over the chart")
    p.add_argument("config")
    p.add_argument("trace")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_trace_svg)
    return parser


def main(argv: list[str] | None = None) -> int:
    _setup_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, TraceError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
