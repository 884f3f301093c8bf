# qtradeoff/commands/check.py
import argparse
import logging

from ..channels import PauliProbabilities, Rotation3, UnitalChannel
from ..compat import CompatibilityPolytope, is_compatible_unital, polytope_contains
from ..output import emit, render_json
from ..qcore import BinaryMeasurement, Direction
from .common import float_vector, manifest_for, rotation, sharpness

logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser("check", help="Decide compatibility of a measurement with a unital channel.")
    parser.add_argument("--p", type=float_vector(4), required=True, help="Pauli probabilities p0,p1,p2,p3")
    parser.add_argument("--s", type=sharpness, required=True, help="Measurement sharpness in [0, 1]")
    parser.add_argument("--n", type=float_vector(3), required=True, help="Measurement direction x,y,z")
    parser.add_argument("--rotation-in", type=float_vector(9), default=None, help="Row-major input rotation")
    parser.add_argument("--rotation-out", type=float_vector(9), default=None, help="Row-major output rotation")
    parser.add_argument("--out", default=None)
    parser.set_defaults(handler=handle)


def handle(args: argparse.Namespace) -> int:
    p = PauliProbabilities.from_vector(args.p)
    r_in = rotation(args.rotation_in) if args.rotation_in else Rotation3.identity()
    r_out = rotation(args.rotation_out) if args.rotation_out else Rotation3.identity()
    channel = UnitalChannel.compose(r_out, p, r_in)
    m = BinaryMeasurement(s=args.s, direction=Direction(n=args.n))

    verdict = is_compatible_unital(channel, m)
    logger.info(f"check: compatible={verdict.compatible} lhs={verdict.lhs:.12g}")
    result = {
        "compatible": verdict.compatible,
        "lhs": verdict.lhs,
        "p_values": verdict.p_values.values,
        "p_max": verdict.p_values.p_max,
        "polytope_member": polytope_contains(CompatibilityPolytope(s=args.s), p),
    }
    emit(render_json(result), manifest_for(args, "check"), args.out)
    return 0
