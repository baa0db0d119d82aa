"""Engine error hierarchy; each error carries a stable wire code."""

from __future__ import annotations

from pubflow.procdef import SoundnessReport, Violation


class EngineError(Exception):
    code = "ENGINE_ERROR"


class ValidationFailedError(EngineError):
    code = "VALIDATION_FAILED"

    def __init__(self, violations: list[Violation]) -> None:
        super().__init__(f"definition is schema-invalid: {[v.message for v in violations]}")
        self.violations = violations


class UnsoundDefinitionError(EngineError):
    code = "UNSOUND_DEFINITION"

    def __init__(self, report: SoundnessReport) -> None:
        super().__init__(
            "deployment refused, definition is unsound: "
            + "; ".join(f"{v.code}({v.subject})" for v in report.violations)
        )
        self.report = report


class UnknownDefinitionError(EngineError):
    code = "UNKNOWN_DEFINITION"


class UnknownInstanceError(EngineError):
    code = "UNKNOWN_INSTANCE"


class UnknownVariableError(EngineError):
    code = "UNKNOWN_VARIABLE"


class UnknownReferentError(EngineError):
    code = "UNKNOWN_REFERENT"


class TaskNotOpenError(EngineError):
    code = "TASK_NOT_OPEN"


class ForbiddenActorError(EngineError):
    code = "FORBIDDEN_ACTOR"


class UnknownTransitionError(EngineError):
    code = "UNKNOWN_TRANSITION"


class NoDefaultTransitionError(EngineError):
    code = "NO_DEFAULT_TRANSITION"


class InstanceNotRunningError(EngineError):
    code = "INSTANCE_NOT_RUNNING"
