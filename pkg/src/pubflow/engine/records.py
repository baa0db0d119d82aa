"""Runtime state records of the engine and their journal serialization.

Every record (de)serializes to plain JSON-able dicts; the dict forms are
what snapshots contain, so they must stay deterministic (sorted, tagged
variable values, base64 for bytes).
"""

from __future__ import annotations

import base64
from dataclasses import dataclass, field

from pubflow.procdef import (
    LayoutMetadata,
    ProcessDefinition,
    parse_definition_xml,
)
from pubflow.values import TypedValue, decode_value, encode_value

STATE_RUNNING = "running"
STATE_ENDED = "ended"
STATE_STOPPED = "stopped"

TASK_OPEN = "open"
TASK_COMPLETED = "completed"


@dataclass
class DeploymentRecord:
    definition_id: str
    name: str
    version: int
    deployed_at: str
    definition: ProcessDefinition
    definition_xml: str
    layout: LayoutMetadata | None = None
    image_bytes: bytes | None = None

    def to_dict(self) -> dict:
        return {
            "definition_id": self.definition_id,
            "name": self.name,
            "version": self.version,
            "deployed_at": self.deployed_at,
            "definition_xml": self.definition_xml,
            "layout": (
                {name: list(geom) for name, geom in sorted(self.layout.per_node.items())}
                if self.layout is not None
                else None
            ),
            "image_b64": (
                base64.b64encode(self.image_bytes).decode("ascii")
                if self.image_bytes is not None
                else None
            ),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "DeploymentRecord":
        layout = None
        if data["layout"] is not None:
            layout = LayoutMetadata(
                per_node={name: tuple(geom) for name, geom in data["layout"].items()}
            )
        return cls(
            definition_id=data["definition_id"],
            name=data["name"],
            version=data["version"],
            deployed_at=data["deployed_at"],
            definition=parse_definition_xml(data["definition_xml"].encode("utf-8")),
            definition_xml=data["definition_xml"],
            layout=layout,
            image_bytes=(
                base64.b64decode(data["image_b64"]) if data["image_b64"] is not None else None
            ),
        )


@dataclass
class Token:
    token_id: str
    current_node: str
    parent: str | None = None
    alive: bool = True
    waiting: bool = False  # parent parked at a fork, or child arrived at a join
    consumed: bool = False  # child merged away by a join

    def to_dict(self) -> dict:
        return {
            "token_id": self.token_id,
            "current_node": self.current_node,
            "parent": self.parent,
            "alive": self.alive,
            "waiting": self.waiting,
            "consumed": self.consumed,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Token":
        return cls(**data)


@dataclass
class TaskInstanceState:
    task_instance_id: str
    instance_id: str
    node_name: str
    task_name: str
    actor_id: str
    token_id: str
    state: str = TASK_OPEN
    created_at: str = ""
    completed_at: str | None = None

    def to_dict(self) -> dict:
        return {
            "task_instance_id": self.task_instance_id,
            "instance_id": self.instance_id,
            "node_name": self.node_name,
            "task_name": self.task_name,
            "actor_id": self.actor_id,
            "token_id": self.token_id,
            "state": self.state,
            "created_at": self.created_at,
            "completed_at": self.completed_at,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "TaskInstanceState":
        return cls(**data)


@dataclass
class InstanceState:
    instance_id: str
    definition_id: str
    initiator: str
    state: str = STATE_RUNNING
    swimlane_bindings: dict[str, str] = field(default_factory=dict)
    variables: dict[str, TypedValue] = field(default_factory=dict)
    tokens: dict[str, Token] = field(default_factory=dict)
    created_at: str = ""
    ended_at: str | None = None

    def root_token(self) -> Token:
        for token in self.tokens.values():
            if token.parent is None:
                return token
        raise LookupError(f"instance {self.instance_id} has no root token")

    def children_of(self, token_id: str) -> list[Token]:
        return [t for t in self.tokens.values() if t.parent == token_id]

    def live_leaf_nodes(self) -> list[str]:
        """Nodes of alive tokens without alive children (the 'current' nodes)."""
        nodes = []
        for token in self.tokens.values():
            if not token.alive:
                continue
            if any(child.alive for child in self.children_of(token.token_id)):
                continue
            nodes.append(token.current_node)
        return nodes

    def to_dict(self) -> dict:
        return {
            "instance_id": self.instance_id,
            "definition_id": self.definition_id,
            "initiator": self.initiator,
            "state": self.state,
            "swimlane_bindings": dict(sorted(self.swimlane_bindings.items())),
            "variables": {k: encode_value(v) for k, v in sorted(self.variables.items())},
            "tokens": {k: t.to_dict() for k, t in sorted(self.tokens.items())},
            "created_at": self.created_at,
            "ended_at": self.ended_at,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "InstanceState":
        return cls(
            instance_id=data["instance_id"],
            definition_id=data["definition_id"],
            initiator=data["initiator"],
            state=data["state"],
            swimlane_bindings=dict(data["swimlane_bindings"]),
            variables={k: decode_value(v) for k, v in data["variables"].items()},
            tokens={k: Token.from_dict(t) for k, t in data["tokens"].items()},
            created_at=data["created_at"],
            ended_at=data["ended_at"],
        )


@dataclass(frozen=True)
class GraphNodeView:
    name: str
    kind: str
    x: int
    y: int
    width: int
    height: int


@dataclass(frozen=True)
class GraphEdgeView:
    from_node: str
    to_node: str
    name: str | None = None


@dataclass(frozen=True)
class GraphState:
    nodes: tuple[GraphNodeView, ...]
    transitions: tuple[GraphEdgeView, ...]
    current_nodes: tuple[str, ...]
