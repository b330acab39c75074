"""Regenerate the recorded-run fixtures for the viewer tests.

Run from this directory with the simulation package installed:

    python3 generate.py

Writes stream.ndjson (the broadcast event trace of a 200-tick run with the
commands from commands.ndjson injected) and final_snapshot.json (the server
snapshot after the run).  The viewer's convergence test replays the stream
and must land exactly on the snapshot.
"""

import json
from pathlib import Path

from dynakernel import CommandScript, Session, load_scenario_file

HERE = Path(__file__).parent


def main() -> None:
    config = load_scenario_file(HERE / "scenario.json")
    script = CommandScript.from_path(HERE / "commands.ndjson")
    with Session(config, trace_path=HERE / "stream.ndjson") as session:
        session.run_headless(ticks=200, commands=script)
        snapshot = session.snapshot()
    (HERE / "final_snapshot.json").write_text(
        json.dumps(snapshot, sort_keys=True, indent=2) + "\n")


if __name__ == "__main__":
    main()
