"""Command line entry points.

dynakernel run SCENARIO [--listen HOST:PORT] [--ws-listen HOST:PORT]
                        [--headless] [--ticks N] [--trace-out FILE]
                        [--seed N] [--commands FILE] [--static DIR]
dynakernel export SCENARIO [--at-tick N] --format tikz [--scale S]
                           [--out FILE] [--seed N]

Without a listener flag, run executes headless to its tick limit and exits.
"""

from __future__ import annotations

import argparse
import asyncio
import dataclasses
import sys

from .errors import KernelError
from .scenario import load_scenario_file
from .server import serve
from .session import CommandScript, Session
from .tikz import TikzOptions, to_tikz


def _address(text: str) -> tuple[str, int]:
    host, sep, port = text.rpartition(":")
    if not sep or not host:
        raise argparse.ArgumentTypeError(f"expected HOST:PORT, got {text!r}")
    try:
        return host, int(port)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad port in {text!r}") from None


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dynakernel",
        description="Deterministic simulator for distributed algorithms "
                    "on dynamic networks.")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a scenario")
    run.add_argument("scenario", help="scenario file (JSON)")
    run.add_argument("--listen", type=_address, metavar="HOST:PORT",
                     help="serve the newline-JSON protocol over TCP")
    run.add_argument("--ws-listen", type=_address, metavar="HOST:PORT",
                     help="serve WebSocket clients and static viewer files")
    run.add_argument("--static", metavar="DIR",
                     help="directory of viewer files for the HTTP endpoint")
    run.add_argument("--headless", action="store_true",
                     help="run to the tick limit without listeners")
    run.add_argument("--ticks", type=int, metavar="N",
                     help="tick limit (overrides the scenario run_limit)")
    run.add_argument("--trace-out", metavar="FILE",
                     help="write the broadcast event stream to FILE")
    run.add_argument("--seed", type=int, metavar="N",
                     help="override the scenario seed")
    run.add_argument("--commands", metavar="FILE",
                     help="recorded command script to feed while running")

    export = sub.add_parser("export", help="render a scenario state")
    export.add_argument("scenario", help="scenario file (JSON)")
    export.add_argument("--at-tick", type=int, default=0, metavar="N",
                        help="advance N ticks before rendering (default 0)")
    export.add_argument("--format", required=True, choices=["tikz"])
    export.add_argument("--scale", type=float, default=50.0,
                        help="world units per output unit (default 50)")
    export.add_argument("--out", metavar="FILE",
                        help="output file (default stdout)")
    export.add_argument("--seed", type=int, metavar="N",
                        help="override the scenario seed")
    return parser


def _load(path: str, seed):
    config = load_scenario_file(path)
    if seed is not None:
        config = dataclasses.replace(config, seed=seed)
    return config


def _cmd_run(args) -> int:
    config = _load(args.scenario, args.seed)
    if args.ticks is not None:
        config = dataclasses.replace(config, run_limit=args.ticks)
    script = CommandScript.from_path(args.commands) if args.commands else None

    session = Session(config, trace_path=args.trace_out)
    try:
        if args.headless or (args.listen is None and args.ws_listen is None):
            session.run_headless(commands=script)
            return 0
        if script is not None:
            for tick, command in script.entries:
                session.enqueue_command(command)
        asyncio.run(serve(session, tcp=args.listen, ws=args.ws_listen,
                          static_dir=args.static))
        return 0
    except KeyboardInterrupt:
        return 0
    finally:
        session.close()


def _cmd_export(args) -> int:
    if args.at_tick < 0:
        print("error: --at-tick must be >= 0", file=sys.stderr)
        return 1
    config = _load(args.scenario, args.seed)
    session = Session(config)
    session.step(args.at_tick)
    text = to_tikz(session.topology, TikzOptions(scale=args.scale))
    session.close()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as f:
            f.write(text)
    else:
        sys.stdout.write(text)
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args)
        return _cmd_export(args)
    except (KernelError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
