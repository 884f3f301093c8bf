# qtradeoff/commands/common.py
import argparse
from typing import Any, Callable, Dict, List

import numpy as np

from .. import config
from ..channels import Rotation3
from ..schemas import RunManifest


def float_vector(size: int) -> Callable[[str], List[float]]:
    """argparse type for a comma-separated vector of exactly `size` reals."""

    def parse(text: str) -> List[float]:
        try:
            values = [float(part) for part in text.split(",")]
        except ValueError:
            raise argparse.ArgumentTypeError(f"'{text}' is not a comma-separated list of numbers")
        if len(values) != size:
            raise argparse.ArgumentTypeError(f"expected {size} comma-separated values, got {len(values)}")
        if not all(np.isfinite(values)):
            raise argparse.ArgumentTypeError(f"'{text}' contains non-finite values")
        return values

    parse.__name__ = f"vector{size}"
    return parse


def sharpness(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"'{text}' is not a number")
    if not 0.0 <= value <= 1.0:
        raise argparse.ArgumentTypeError(f"sharpness must lie in [0, 1], got {value}")
    return value


def rotation(values: List[float]) -> Rotation3:
    return Rotation3(matrix=np.asarray(values, dtype=float).reshape(3, 3))


def add_output_arguments(parser: argparse.ArgumentParser, formats=("csv", "json"), default: str = "csv") -> None:
    parser.add_argument("--out", default=None, help="Output file; a <name>.manifest.json is written beside it.")
    parser.add_argument("--format", choices=formats, default=default)


def add_seed_arguments(parser: argparse.ArgumentParser, samples: int) -> None:
    parser.add_argument("--seed", type=int, default=config.DEFAULT_SEED)
    parser.add_argument("--samples", type=int, default=samples)


def manifest_for(args: argparse.Namespace, command: str) -> RunManifest:
    skip = {"handler", "command", "log_level"}
    parameters: Dict[str, Any] = {k: v for k, v in vars(args).items() if k not in skip}
    return RunManifest(command=command, parameters=parameters, seed=getattr(args, "seed", None))
