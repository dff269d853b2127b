"""``periscope`` command line entry point.

Exit codes: 0 all checks pass, 2 a check failed or the mirror is infeasible,
1 configuration or I/O error.
"""

import argparse
import os
import sys

from .config import ConfigError, build_spec, load_config
from .demos import NAMES, run_demo
from .errors import InfeasibleError


def _jobs(value):
    if value is not None:
        return value
    env = os.environ.get("PERISCOPE_JOBS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ConfigError(f"PERISCOPE_JOBS={env!r} is not an integer")
    return 1


def build_parser():
    parser = argparse.ArgumentParser(prog="periscope", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a JSON scenario config")
    run.add_argument("config")
    run.add_argument("--out", default=None, help="output directory (overrides output.path)")
    run.add_argument("--jobs", type=int, default=None, help="worker processes (default $PERISCOPE_JOBS or 1)")

    demo = sub.add_parser("demo", help="run a canned scenario")
    demo.add_argument("name")
    demo.add_argument("--out", default="periscope-demo")
    demo.add_argument("--jobs", type=int, default=None)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        jobs = _jobs(args.jobs)
        if args.command == "demo":
            if args.name not in NAMES:
                print(f"unknown demo {args.name!r}; choose from: {', '.join(NAMES)}", file=sys.stderr)
                return 1
            return run_demo(args.name, args.out, jobs=jobs)

        from .runner import run_scenario

        cfg = load_config(args.config)
        spec = build_spec(cfg)
        summary, code = run_scenario(cfg, spec, out_dir=args.out, jobs=jobs)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except InfeasibleError as exc:
        print(f"infeasible mirror ({exc.invariant}): {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return 1
    for check, info in summary["checks"].items():
        status = "PASS" if info["pass"] else "FAIL"
        worst = max(info["max"].values(), default=0.0)
        print(f"{check:<12} max {worst:.3e}  tol {info['tolerance']:.1e}  {status}")
    return code


if __name__ == "__main__":
    sys.exit(main())
