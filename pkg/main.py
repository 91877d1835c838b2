import sys
import argparse
import logging

from src.lab.errors import ConfigError
from src.services.config_service import get_settings
from src.utils.run_config import COMMANDS, TOOL_NAME, TOOL_VERSION, load_config_file

if sys.platform == 'win32':
    sys.stdout.reconfigure(encoding='utf-8')

EXIT_CONFIG_ERROR = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=TOOL_NAME,
        description="Double layer potentials, Cauchy integrals and matching pairs on analytic curves.",
    )
    parser.add_argument("--version", action="version", version=f"{TOOL_NAME} {TOOL_VERSION}")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", required=True, help="path to the JSON run config")
    parser.add_argument("--out", help="output directory (overrides the config)")
    parser.add_argument("--seed", type=int, help="random seed (overrides the config)")
    parser.add_argument("--N", type=int, dest="N", help="node count (overrides N and the first refinement level)")
    return parser


def configure_logging() -> None:
    level = getattr(logging, get_settings().log_level, logging.INFO)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s %(message)s", stream=sys.stderr)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        configure_logging()
        raw_config = load_config_file(args.config)
    except ConfigError as exc:
        print(f"FAIL {args.command}: cli: {exc.message}")
        return EXIT_CONFIG_ERROR

    # imported late so --help does not pay for compiling the graph
    from src.services.graph.workflow import run

    state = run(args.command, raw_config, {"out": args.out, "seed": args.seed, "N": args.N})
    print(state["summary"])
    return int(state["exit_code"])


if __name__ == "__main__":
    sys.exit(main())
