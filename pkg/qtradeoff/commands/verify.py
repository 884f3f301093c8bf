# qtradeoff/commands/verify.py
import argparse
import asyncio
import sys

from .. import config
from ..exceptions import VerificationFailure
from ..output import emit, format_number, render_json
from ..tradeoffs import search_config_from
from ..workflows.verification_workflow import VerificationWorkflow, VerifySettings, checks_for
from .common import add_seed_arguments, manifest_for


def register(subparsers) -> None:
    parser = subparsers.add_parser("verify", help="Run a verification suite; exit 1 on any violation.")
    parser.add_argument("suite", help="all, identities, theorems or oracles")
    add_seed_arguments(parser, config.VERIFY_SAMPLES)
    parser.add_argument("--grid", type=int, default=config.SIMPLEX_GRID)
    parser.add_argument("--out", default=None)
    parser.set_defaults(handler=handle)


def handle(args: argparse.Namespace) -> int:
    checks_for(args.suite)
    settings = VerifySettings(seed=args.seed, samples=args.samples, search=search_config_from(args.grid))
    report = asyncio.run(VerificationWorkflow().run(args.suite, settings))

    width = max(len(c.name) for c in report.checks)
    for c in report.checks:
        status = "PASS" if c.passed else "FAIL"
        print(f"{status} {c.name:<{width}}  observed={format_number(c.observed)}  tol={format_number(c.tolerance)}  {c.detail}", file=sys.stderr)
    print(f"done: {len(report.checks)} checks, {len(report.failures)} failures", file=sys.stderr)

    emit(render_json(report), manifest_for(args, "verify"), args.out)
    if not report.passed:
        raise VerificationFailure(f"{len(report.failures)} checks failed: {', '.join(c.name for c in report.failures)}")
    return 0
