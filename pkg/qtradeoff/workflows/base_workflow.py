import asyncio
import logging
import traceback
import uuid
from datetime import datetime, timezone
from typing import Any, Callable, Dict, List, Optional, Sequence, TypeVar

from pydantic import BaseModel, Field

from .. import config

T = TypeVar("T")


class WorkflowEvent(BaseModel):
    """Base class for workflow events"""
    timestamp: datetime = Field(default_factory=lambda: datetime.now(timezone.utc))
    event_type: str
    event_data: Dict[str, Any] = Field(default_factory=dict)


class WorkflowContext:
    """Context for storing workflow state"""
    def __init__(self):
        self.data: Dict[str, Any] = {}
        self.events: List[WorkflowEvent] = []

    def add_event(self, event: WorkflowEvent):
        self.events.append(event)

    def get_events_by_type(self, event_type: str) -> List[WorkflowEvent]:
        return [e for e in self.events if e.event_type == event_type]

    def set_data(self, key: str, value: Any):
        self.data[key] = value

    def get_data(self, key: str, default: Any = None) -> Any:
        return self.data.get(key, default)


class BaseWorkflow:
    """Base class for all workflows"""

    def __init__(self, workflow_id: Optional[uuid.UUID] = None, workers: int = config.WORKERS):
        self.workflow_id = workflow_id or uuid.uuid4()
        self.ctx = WorkflowContext()
        self.logger = logging.getLogger(f"{self.__class__.__name__}_{self.workflow_id}")
        self.workers = workers

    async def emit_event(self, event_type: str, event_data: Optional[Dict[str, Any]] = None):
        """Emit a workflow event"""
        event = WorkflowEvent(event_type=event_type, event_data=event_data or {})
        self.ctx.add_event(event)
        self.logger.info(f"Event emitted: {event_type}")
        return event

    async def handle_error(self, error: Exception, step: str):
        """Record a failed step as an error event"""
        error_event = await self.emit_event(
            "error",
            {
                "error": str(error),
                "step": step,
                "traceback": "".join(traceback.format_exception(type(error), error, error.__traceback__)),
            },
        )
        self.logger.error(f"Error in step {step}: {error}")
        return error_event

    async def map_ordered(self, fn: Callable[..., T], items: Sequence[Any]) -> List[T]:
        """Run fn over items in worker threads; results keep the input order."""
        semaphore = asyncio.Semaphore(self.workers)

        async def bounded(item):
            async with semaphore:
                return await asyncio.to_thread(fn, item)

        return list(await asyncio.gather(*(bounded(item) for item in items)))

    async def run(self, *args, **kwargs):
        """Template method for workflow execution"""
        raise NotImplementedError("Workflow must implement run method")

    def __str__(self):
        return f"{self.__class__.__name__}(workflow_id={self.workflow_id})"
