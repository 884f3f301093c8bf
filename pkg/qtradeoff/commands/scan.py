# qtradeoff/commands/scan.py
import argparse
import asyncio

from .. import config
from ..output import emit, render_csv, render_json
from ..tradeoffs import search_config_from
from ..workflows.scan_workflow import ScanRequest, ScanWorkflow
from .common import add_output_arguments, manifest_for

HEADER = ("s", "closed_form", "searched", "gap", "grid_resolution")


def register(subparsers) -> None:
    parser = subparsers.add_parser("scan", help="Closed-form tradeoff curve against grid-searched maxima.")
    parser.add_argument("kind", choices=("fidelity", "quantumness", "lqu"))
    parser.add_argument("--s-steps", type=int, default=11, help="Number of evenly spaced sharpness values in [0, 1]")
    parser.add_argument("--grid", type=int, default=config.SIMPLEX_GRID, help="Simplex subdivisions per edge")
    parser.add_argument("--direction-grid", type=int, default=config.DIRECTION_GRID)
    parser.add_argument("--refine-steps", type=int, default=config.REFINE_STEPS)
    parser.add_argument("--sweep-directions", action="store_true", help="Also search a sphere of directions")
    add_output_arguments(parser)
    parser.set_defaults(handler=handle)


def handle(args: argparse.Namespace) -> int:
    request = ScanRequest(
        kind=args.kind,
        s_steps=args.s_steps,
        search=search_config_from(args.grid, args.direction_grid, args.refine_steps, args.sweep_directions),
    )
    points = asyncio.run(ScanWorkflow().run(request))
    if args.format == "json":
        text = render_json(points)
    else:
        text = render_csv(HEADER, ([getattr(p, col) for col in HEADER] for p in points))
    emit(text, manifest_for(args, "scan"), args.out)
    return 0
