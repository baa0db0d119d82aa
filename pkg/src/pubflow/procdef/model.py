"""Domain model for process definitions and their archives.

A process definition is a named, versioned directed graph.  Nodes carry a
kind that fixes their control-flow behaviour; edges are transitions.  Human
work is attached to ``task`` (and ``start``) nodes through a task spec whose
swimlane names the role slot that will be bound to a concrete actor at
runtime.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum


class NodeKind(str, Enum):
    START = "start"
    TASK = "task"
    DECISION = "decision"
    FORK = "fork"
    JOIN = "join"
    END = "end"


#: Events an action binding may listen on.
EVENT_NODE_ENTER = "node-enter"
EVENT_NODE_LEAVE = "node-leave"
EVENT_TRANSITION_TAKEN = "transition-taken"
EVENTS = (EVENT_NODE_ENTER, EVENT_NODE_LEAVE, EVENT_TRANSITION_TAKEN)

#: Effects an action binding may have.  Effects never select transitions;
#: only node semantics drive control flow.
EFFECT_SET_VARIABLE = "set-variable"
EFFECT_LOG = "log"

#: Role names a swimlane may reference.
KNOWN_ROLES = ("author", "qa", "admin")

ASSIGN_INITIATOR = "initiator"
ASSIGN_ROLE = "role"
ASSIGN_FIXED_ACTOR = "fixed-actor"

FORM_FIELD_KINDS = ("text", "textarea", "file")


@dataclass(frozen=True)
class ActionBinding:
    """One event-triggered effect attached to a node or transition."""

    event: str
    effect: str
    # set-variable effect
    variable: str | None = None
    value: str | None = None
    # log effect
    template: str | None = None


@dataclass(frozen=True)
class FormField:
    name: str
    label: str
    kind: str = "text"


@dataclass(frozen=True)
class TaskSpec:
    task_name: str
    swimlane: str
    form_fields: tuple[FormField, ...] = ()


@dataclass(frozen=True)
class Swimlane:
    """A named role slot; ``assignment`` decides how it binds to an actor."""

    name: str
    assignment: str  # one of ASSIGN_*
    param: str | None = None  # role name or fixed actor id


@dataclass(frozen=True)
class DecisionRule:
    """Ordered first-match rule: take ``transition`` when the named process
    variable renders equal to ``equals``."""

    variable: str
    equals: str
    transition: str


@dataclass(frozen=True)
class Node:
    name: str
    kind: NodeKind
    task: TaskSpec | None = None
    decision_rules: tuple[DecisionRule, ...] = ()
    actions: tuple[ActionBinding, ...] = ()


@dataclass(frozen=True)
class Transition:
    from_node: str
    to_node: str
    name: str | None = None
    actions: tuple[ActionBinding, ...] = ()


@dataclass(frozen=True)
class ProcessDefinition:
    name: str
    nodes: tuple[Node, ...] = ()
    transitions: tuple[Transition, ...] = ()
    swimlanes: tuple[Swimlane, ...] = ()
    variables: tuple[str, ...] = ()

    def node(self, name: str) -> Node:
        for n in self.nodes:
            if n.name == name:
                return n
        raise KeyError(name)

    def has_node(self, name: str) -> bool:
        return any(n.name == name for n in self.nodes)

    def outgoing(self, node_name: str) -> tuple[Transition, ...]:
        return tuple(t for t in self.transitions if t.from_node == node_name)

    def incoming(self, node_name: str) -> tuple[Transition, ...]:
        return tuple(t for t in self.transitions if t.to_node == node_name)

    def default_transition(self, node_name: str) -> Transition | None:
        """The unnamed outgoing transition of a node, if any."""
        for t in self.outgoing(node_name):
            if t.name is None:
                return t
        return None

    def start_nodes(self) -> tuple[Node, ...]:
        return tuple(n for n in self.nodes if n.kind is NodeKind.START)

    def end_nodes(self) -> tuple[Node, ...]:
        return tuple(n for n in self.nodes if n.kind is NodeKind.END)

    def swimlane(self, name: str) -> Swimlane:
        for s in self.swimlanes:
            if s.name == name:
                return s
        raise KeyError(name)


@dataclass(frozen=True)
class LayoutMetadata:
    """Pixel geometry for graph display, keyed by node name."""

    per_node: dict[str, tuple[int, int, int, int]] = field(default_factory=dict)


@dataclass(frozen=True)
class ProcessArchive:
    """Zip-container contents: required definition, optional layout and
    image, everything else preserved as opaque attachments."""

    entries: dict[str, bytes] = field(default_factory=dict)

    DEFINITION_ENTRY = "processdefinition.xml"
    LAYOUT_ENTRY = "layout.xml"
    IMAGE_ENTRY = "processimage.png"


# Violation codes shared by schema validation and soundness analysis.
NO_START = "NO_START"
MULTIPLE_START = "MULTIPLE_START"
NO_END = "NO_END"
UNREACHABLE_NODE = "UNREACHABLE_NODE"
DEAD_END = "DEAD_END"
DANGLING_TRANSITION = "DANGLING_TRANSITION"
UNKNOWN_SWIMLANE = "UNKNOWN_SWIMLANE"
DECISION_RULE_GAP = "DECISION_RULE_GAP"
FORK_JOIN_MISMATCH = "FORK_JOIN_MISMATCH"
DUPLICATE_NAME = "DUPLICATE_NAME"
BAD_STRUCTURE = "BAD_STRUCTURE"


@dataclass(frozen=True)
class Violation:
    code: str
    subject: str  # node or transition name
    message: str


@dataclass(frozen=True)
class SoundnessReport:
    sound: bool
    violations: tuple[Violation, ...] = ()
