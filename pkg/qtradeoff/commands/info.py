# qtradeoff/commands/info.py
import argparse

import numpy as np

from ..channels import PauliProbabilities, UnitalChannel, canonical_decompose
from ..compat import max_sharpness_unital, sharpest_measurement_unital
from ..exceptions import UsageError
from ..measures import measure_report_unital
from ..output import emit, render_json
from .common import float_vector, manifest_for


def register(subparsers) -> None:
    parser = subparsers.add_parser("info", help="Fidelity, quantumness, LQU and best sharpness of a unital channel.")
    source = parser.add_mutually_exclusive_group()
    source.add_argument("--p", type=float_vector(4), default=None, help="Pauli probabilities p0,p1,p2,p3")
    source.add_argument("--bloch", type=float_vector(9), default=None, help="Row-major 3x3 Bloch matrix")
    parser.add_argument("--out", default=None)
    parser.set_defaults(handler=handle)


def handle(args: argparse.Namespace) -> int:
    if args.p is not None:
        channel = UnitalChannel.pauli(PauliProbabilities.from_vector(args.p))
    elif args.bloch is not None:
        channel = canonical_decompose(np.asarray(args.bloch, dtype=float).reshape(3, 3))
    else:
        raise UsageError("info needs either --p or --bloch")

    report = measure_report_unital(channel)
    sharpest = sharpest_measurement_unital(channel)
    result = report.model_dump()
    result.update(
        {
            "p_values": report.p_values.values,
            "max_sharpness": max_sharpness_unital(channel),
            "sharpest_direction": sharpest.direction.n,
            "canonical_p": channel.p.p,
        }
    )
    emit(render_json(result), manifest_for(args, "info"), args.out)
    return 0
