"""Process archives, definition XML, schema validation, and soundness analysis."""

from pubflow.procdef.model import (
    ActionBinding,
    DecisionRule,
    FormField,
    LayoutMetadata,
    Node,
    NodeKind,
    ProcessArchive,
    ProcessDefinition,
    SoundnessReport,
    Swimlane,
    TaskSpec,
    Transition,
    Violation,
)
from pubflow.procdef.errors import (
    MalformedZipError,
    MissingDefinitionError,
    ProcdefError,
    SchemaViolationError,
    XmlSyntaxError,
)
from pubflow.procdef.archive import build_archive, parse_archive
from pubflow.procdef.xml import (
    parse_definition_xml,
    parse_layout_xml,
    serialize_definition,
    serialize_layout,
)
from pubflow.procdef.validate import validate_definition
from pubflow.procdef.soundness import check_soundness

__all__ = [
    "ActionBinding",
    "DecisionRule",
    "FormField",
    "LayoutMetadata",
    "MalformedZipError",
    "MissingDefinitionError",
    "Node",
    "NodeKind",
    "ProcdefError",
    "ProcessArchive",
    "ProcessDefinition",
    "SchemaViolationError",
    "SoundnessReport",
    "Swimlane",
    "TaskSpec",
    "Transition",
    "Violation",
    "XmlSyntaxError",
    "build_archive",
    "check_soundness",
    "parse_archive",
    "parse_definition_xml",
    "parse_layout_xml",
    "serialize_definition",
    "serialize_layout",
    "validate_definition",
]
