# qtradeoff/schemas.py
from datetime import datetime, timezone
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field, computed_field

from . import __version__


def _utc_now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


class RunManifest(BaseModel):
    """Parameters needed to reproduce an output file byte for byte."""
    command: str
    parameters: Dict[str, Any] = Field(default_factory=dict)
    seed: Optional[int] = None
    tool_version: str = __version__
    timestamp: str = Field(default_factory=_utc_now)


class CheckResult(BaseModel):
    name: str
    passed: bool
    observed: float
    tolerance: float
    detail: str = ""


class VerificationReport(BaseModel):
    suite: str
    seed: int
    samples: int
    checks: List[CheckResult] = Field(default_factory=list)

    @computed_field
    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> List[CheckResult]:
        return [c for c in self.checks if not c.passed]
