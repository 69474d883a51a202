"""``autopsy`` command line.

    autopsy list
    autopsy run <scenario> [--seed N] [--bits N] [--trials N] [--delta-t N]
                           [--hash-bits N] [--json] [--out PATH]

Exit status: 0 when every trial meets the scenario's expectation, 1 when
some trial does not, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import sys

from .harness import ScenarioConfig, UsageError, list_scenarios, render, run_scenario


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="autopsy",
                                     description="Run protocol attack scenarios.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("list", help="list registered scenarios")
    run = sub.add_parser("run", help="run a scenario")
    run.add_argument("scenario")
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--bits", type=int, default=None,
                     help="prime size (default 32; 16 for oracle scenarios)")
    run.add_argument("--trials", type=int, default=1)
    run.add_argument("--delta-t", type=int, default=2)
    run.add_argument("--hash-bits", type=int, default=256)
    run.add_argument("--json", action="store_true", help="emit JSON lines")
    run.add_argument("--out", default=None, help="write output to PATH instead of stdout")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "list":
        for entry in list_scenarios():
            print(f"{entry['name']:20s} §{entry['section']:5s} {entry['description']}")
        return 0
    config = ScenarioConfig(scenario=args.scenario, seed=args.seed, bits=args.bits,
                            trials=args.trials, delta_t=args.delta_t,
                            hash_bits=args.hash_bits,
                            output="json" if args.json else "text")
    try:
        transcript, report = run_scenario(config)
    except UsageError as exc:
        print(f"autopsy: error: {exc}", file=sys.stderr)
        return 2
    text = render(transcript, report, config.output)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
