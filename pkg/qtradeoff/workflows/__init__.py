from .base_workflow import BaseWorkflow, WorkflowContext, WorkflowEvent

__all__ = ["BaseWorkflow", "WorkflowContext", "WorkflowEvent"]
