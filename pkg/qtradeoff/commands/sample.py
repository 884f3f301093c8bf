# qtradeoff/commands/sample.py
import argparse

import numpy as np

from .. import config
from ..channels import uniform_simplex
from ..compat import sample_compatible
from ..exceptions import UsageError
from ..output import emit, render_csv, render_json
from ..qcore import Direction, SamplerConfig, haar_bloch_vectors
from .common import add_output_arguments, add_seed_arguments, float_vector, manifest_for, sharpness


def register(subparsers) -> None:
    parser = subparsers.add_parser("sample", help="Seeded sample streams: Haar states, simplex points, compatible channels.")
    parser.add_argument("kind", choices=("haar", "simplex", "compatible"))
    add_seed_arguments(parser, 1000)
    parser.add_argument("--s", type=sharpness, default=None, help="Sharpness (compatible only)")
    parser.add_argument("--n", type=float_vector(3), default=None, help="Direction (compatible only)")
    add_output_arguments(parser)
    parser.set_defaults(handler=handle)


def handle(args: argparse.Namespace) -> int:
    cfg = SamplerConfig(seed=args.seed, count=args.samples)
    if args.kind == "haar":
        header, rows = ("x", "y", "z"), haar_bloch_vectors(cfg)
    elif args.kind == "simplex":
        header, rows = ("p0", "p1", "p2", "p3"), uniform_simplex(cfg)
    else:
        if args.s is None or args.n is None:
            raise UsageError("sample compatible needs both --s and --n")
        sample = sample_compatible(args.s, Direction(n=args.n), cfg)
        header = ("p0", "p1", "p2", "p3", "lhs")
        rows = np.column_stack([sample.points, sample.lhs]) if len(sample.points) else np.zeros((0, 5))

    rows = rows.tolist()
    if args.format == "json":
        text = render_json([dict(zip(header, row)) for row in rows])
    else:
        text = render_csv(header, rows)
    emit(text, manifest_for(args, "sample"), args.out)
    return 0
