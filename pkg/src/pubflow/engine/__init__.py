"""Workflow engine: versioned deployments, instances, tokens, task lists."""

from pubflow.engine.core import Engine
from pubflow.engine.errors import (
    EngineError,
    ForbiddenActorError,
    InstanceNotRunningError,
    NoDefaultTransitionError,
    TaskNotOpenError,
    UnknownDefinitionError,
    UnknownInstanceError,
    UnknownReferentError,
    UnknownTransitionError,
    UnknownVariableError,
    UnsoundDefinitionError,
    ValidationFailedError,
)
from pubflow.engine.records import (
    DeploymentRecord,
    GraphEdgeView,
    GraphNodeView,
    GraphState,
    InstanceState,
    TaskInstanceState,
    Token,
)

__all__ = [
    "DeploymentRecord",
    "Engine",
    "EngineError",
    "ForbiddenActorError",
    "GraphEdgeView",
    "GraphNodeView",
    "GraphState",
    "InstanceNotRunningError",
    "InstanceState",
    "NoDefaultTransitionError",
    "TaskInstanceState",
    "TaskNotOpenError",
    "Token",
    "UnknownDefinitionError",
    "UnknownInstanceError",
    "UnknownReferentError",
    "UnknownTransitionError",
    "UnknownVariableError",
    "UnsoundDefinitionError",
    "ValidationFailedError",
]
