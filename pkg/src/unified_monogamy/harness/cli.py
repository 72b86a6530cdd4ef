"""Command-line entry point.

Exit codes: 0 success, 1 bound violation found, 2 usage/config/input error,
3 numeric failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from ..bounds import MODES, MONOGAMY, POLYGAMY, BoundsError, TighteningParams, evaluate_bounds
from ..entropy import EntropyParams
from ..measures import RoofError, RoofOptions
from ..states import PartitionSpec
from .campaign import CampaignConfig, ConfigError, cmd_campaign
from .figures import FigureError, cmd_example1, cmd_example2
from .stateio import StateFileError, load_state

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3


def _floats(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="unified-monogamy",
                     description="Unified-(q,s) entanglement monogamy/polygamy workbench")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    e1 = sub.add_parser("example1", help="reproduce the monogamy example and its figure")
    e1.add_argument("--alpha-max", type=float, default=5.0)
    e1.add_argument("--steps", type=int, default=81)
    e1.add_argument("--restarts", type=int, default=32)
    e1.add_argument("--no-audit", action="store_true")
    e1.add_argument("--out", default=".")

    e2 = sub.add_parser("example2", help="reproduce the polygamy example and its figure")
    e2.add_argument("--beta-min", type=float, default=0.0)
    e2.add_argument("--steps", type=int, default=81)
    e2.add_argument("--restarts", type=int, default=32)
    e2.add_argument("--audit", action="store_true", help="also compute UEoA of the pairs")
    e2.add_argument("--out", default=".")

    c = sub.add_parser("campaign", help="randomized verification campaign")
    c.add_argument("--config", help="JSON file with CampaignConfig fields")
    c.add_argument("--mode", choices=MODES)
    c.add_argument("--states", type=int)
    c.add_argument("--qubits", type=int)
    c.add_argument("--q", type=float)
    c.add_argument("--s", type=float)
    c.add_argument("--alpha", type=_floats, help="exponent grid (monogamy / negative-power)")
    c.add_argument("--beta", type=_floats, help="exponent grid (polygamy)")
    c.add_argument("--k", type=float)
    c.add_argument("--delta", type=float)
    c.add_argument("--seed", type=int)
    c.add_argument("--workers", type=int)
    c.add_argument("--restarts", type=int)
    c.add_argument("--tolerance", type=float)
    c.add_argument("--fast-path-check", type=int)
    c.add_argument("--out")

    k = sub.add_parser("check", help="evaluate all bounds for a state file")
    k.add_argument("state_file")
    k.add_argument("--mode", choices=MODES, default=MONOGAMY)
    k.add_argument("--q", type=float, default=2.0)
    k.add_argument("--s", type=float, default=1.0)
    k.add_argument("--alpha", type=float)
    k.add_argument("--beta", type=float)
    k.add_argument("--k", type=float, default=0.75)
    k.add_argument("--delta", type=float, default=1.0)
    k.add_argument("--focus", type=int, default=0)
    k.add_argument("--pairwise", type=_floats, help="override pairwise values (in party order)")
    k.add_argument("--mixed-lhs", action="store_true")
    k.add_argument("--restarts", type=int, default=32)
    k.add_argument("--seed", type=int, default=0)
    return parser


def _campaign_config(args) -> CampaignConfig:
    cfg = CampaignConfig.from_file(args.config) if args.config else CampaignConfig()
    overrides = {
        "mode": args.mode, "n_states": args.states, "n_qubits": args.qubits, "q": args.q, "s": args.s,
        "k": args.k, "delta": args.delta, "seed": args.seed, "workers": args.workers,
        "restarts": args.restarts, "tolerance": args.tolerance, "out_dir": args.out,
        "fast_path_check": args.fast_path_check,
    }
    for key, val in overrides.items():
        if val is not None:
            setattr(cfg, key, val)
    grid = args.beta if cfg.mode == POLYGAMY else args.alpha
    if grid is not None:
        cfg.exponents = grid
    elif not args.config and args.mode is not None:
        cfg.exponents = {
            MONOGAMY: [1.0, 1.5, 2.0, 3.0],
            POLYGAMY: [0.3, 0.5, 0.8, 1.0],
        }.get(cfg.mode, [-0.5, -1.0, -2.0])
    return cfg


def _run(args) -> int:
    if args.command == "example1":
        res = cmd_example1(args.alpha_max, args.steps, args.out, audit=not args.no_audit,
                           opts=RoofOptions(restarts=args.restarts))
        for path in res["paths"].values():
            print(path)
        return EXIT_OK
    if args.command == "example2":
        res = cmd_example2(args.beta_min, args.steps, args.out, audit=args.audit,
                           opts=RoofOptions(restarts=args.restarts))
        for path in res["paths"].values():
            print(path)
        return EXIT_OK
    if args.command == "campaign":
        cfg = _campaign_config(args)
        summary = cmd_campaign(cfg)
        print(json.dumps({key: summary[key] for key in
                          ("n_reports", "violations", "hierarchy_failures", "findings_without_precondition")}))
        return EXIT_VIOLATION if summary["violations"] else EXIT_OK
    if args.command == "check":
        state = load_state(args.state_file)
        exponent = args.beta if args.mode == POLYGAMY else args.alpha
        if exponent is None:
            exponent = 1.0 if args.mode != "negative-power" else -1.0
        others = tuple(i for i in range(state.n_parties) if i != args.focus)
        rep = evaluate_bounds(state, PartitionSpec(args.focus, others), EntropyParams(args.q, args.s),
                              TighteningParams(args.k, args.delta, exponent), args.mode,
                              opts=RoofOptions(restarts=args.restarts, seed=args.seed),
                              pairwise=args.pairwise, mixed_lhs=args.mixed_lhs)
        print(json.dumps(rep.to_dict(), indent=2))
        return EXIT_OK
    raise AssertionError(args.command)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return _run(args)
    except (StateFileError, ConfigError, FigureError, BoundsError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (RoofError, ArithmeticError, RuntimeError, AssertionError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
