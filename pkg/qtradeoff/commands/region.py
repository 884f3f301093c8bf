# qtradeoff/commands/region.py
import argparse
import asyncio

from .. import config
from ..output import emit, render_csv, render_json
from ..qcore import BinaryMeasurement, Direction
from ..workflows.scan_workflow import RegionRequest, ScanWorkflow
from .common import add_output_arguments, float_vector, manifest_for, sharpness

HEADER = ("p0", "p1", "p2", "p3", "lhs", "compatible", "in_polytope")


def register(subparsers) -> None:
    parser = subparsers.add_parser("region", help="Simplex grid points with their compatibility verdicts.")
    parser.add_argument("--s", type=sharpness, required=True)
    parser.add_argument("--n", type=float_vector(3), required=True)
    parser.add_argument("--grid", type=int, default=config.SIMPLEX_GRID)
    parser.add_argument("--only-compatible", action="store_true", help="Drop incompatible grid points")
    add_output_arguments(parser)
    parser.set_defaults(handler=handle)


def handle(args: argparse.Namespace) -> int:
    request = RegionRequest(
        measurement=BinaryMeasurement(s=args.s, direction=Direction(n=args.n)),
        grid=args.grid,
    )
    result = asyncio.run(ScanWorkflow().run(request))
    rows = [
        (*point, lhs, compatible, in_polytope)
        for point, lhs, compatible, in_polytope in zip(
            result.points.tolist(), result.lhs.tolist(), result.compatible.tolist(), result.in_polytope.tolist()
        )
        if compatible or not args.only_compatible
    ]
    if args.format == "json":
        text = render_json([dict(zip(HEADER, row)) for row in rows])
    else:
        text = render_csv(HEADER, rows)
    emit(text, manifest_for(args, "region"), args.out)
    return 0
