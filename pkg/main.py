# main.py
import argparse
import json
import logging
import sys
from typing import List, Optional

from pydantic import ValidationError

from qtradeoff import __version__, config
from qtradeoff.commands import COMMANDS
from qtradeoff.exceptions import ChannelValidationError, QTradeoffError

logger = logging.getLogger("qtradeoff")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qtradeoff",
        description="Tradeoffs between measurement sharpness and the disturbance of compatible unital qubit channels.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--log-level", default=config.LOG_LEVEL, help="DEBUG, INFO, WARNING or ERROR")
    subparsers = parser.add_subparsers(dest="command", required=True)

    # Include commands
    for command in COMMANDS:
        command.register(subparsers)
    return parser


def _report_error(payload: dict, exit_code: int) -> int:
    print(json.dumps(payload), file=sys.stderr)
    return exit_code


def run(argv: Optional[List[str]] = None) -> int:
    """Parse argv, dispatch to a command and map errors onto exit codes 0/1/2."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse has already printed usage
        return int(e.code or 0)

    config.configure_logging(args.log_level.upper())
    try:
        return args.handler(args)
    except QTradeoffError as e:
        logger.debug(f"{type(e).__name__}: {e.detail}")
        payload = {"error": e.detail, "type": type(e).__name__, "exit_code": e.exit_code}
        if isinstance(e, ChannelValidationError):
            payload["lambdas"] = list(e.lambdas)
        return _report_error(payload, e.exit_code)
    except ValidationError as e:
        return _report_error(
            {
                "error": "Validation error",
                "type": "ValidationError",
                "details": [f"{'.'.join(str(x) for x in err['loc'])}: {err['msg']}" for err in e.errors()],
            },
            2,
        )
    except ValueError as e:
        return _report_error({"error": str(e), "type": "ValueError"}, 2)


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
