"""The workflow engine.

State changes flow through an append-only journal: a public operation
validates its preconditions against in-memory state, appends one event
record carrying everything the change needs (timestamps included), then
applies it.  Recovery replays the journal over the newest snapshot, so a
restarted engine reconstructs byte-identical state.

Instances stay pinned to the deployment they were started against; newer
versions of the same definition never affect them.
"""

from __future__ import annotations

import base64
import threading
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable

from pubflow.journal import Journal, Record
from pubflow.procdef import (
    ActionBinding,
    LayoutMetadata,
    Node,
    NodeKind,
    ProcessDefinition,
    Transition,
    check_soundness,
    parse_definition_xml,
    serialize_definition,
    validate_definition,
)
from pubflow.procdef.model import (
    ASSIGN_FIXED_ACTOR,
    ASSIGN_INITIATOR,
    ASSIGN_ROLE,
    EFFECT_LOG,
    EFFECT_SET_VARIABLE,
    EVENT_NODE_ENTER,
    EVENT_NODE_LEAVE,
    EVENT_TRANSITION_TAKEN,
)
from pubflow.values import TypedValue, decode_value, encode_value, render_value

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
from pubflow.engine.layout import build_graph_state
from pubflow.engine.records import (
    STATE_ENDED,
    STATE_RUNNING,
    STATE_STOPPED,
    TASK_COMPLETED,
    TASK_OPEN,
    DeploymentRecord,
    GraphState,
    InstanceState,
    TaskInstanceState,
    Token,
)

ADMIN_ROLE = "admin"
ROLE_ACTOR_PREFIX = "role:"

# Automatic nodes (decision/fork/join) between two task nodes are bounded by
# the graph size; anything past this is a runaway decision cycle.
_MAX_AUTO_HOPS = 10_000


def _utc_now() -> str:
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%S.%fZ")


class Engine:
    def __init__(
        self,
        data_dir: str | Path,
        clock: Callable[[], str] = _utc_now,
        snapshot_every: int = 100,
    ) -> None:
        self._clock = clock
        self._snapshot_every = snapshot_every
        self._lock = threading.RLock()
        self._deployments: dict[str, DeploymentRecord] = {}
        self._instances: dict[str, InstanceState] = {}
        self._tasks: dict[str, TaskInstanceState] = {}
        self._counters = {"definition": 0, "instance": 0, "task": 0, "token": 0}
        self._journal = Journal(Path(data_dir) / "engine")
        state, records = self._journal.recover()
        if state is not None:
            self._load_state(state)
        for record in records:
            self._apply(record)

    def close(self) -> None:
        self._journal.close()

    # -- persistence ------------------------------------------------------

    def state_dict(self) -> dict:
        with self._lock:
            return {
                "counters": dict(self._counters),
                "deployments": {k: d.to_dict() for k, d in sorted(self._deployments.items())},
                "instances": {k: i.to_dict() for k, i in sorted(self._instances.items())},
                "tasks": {k: t.to_dict() for k, t in sorted(self._tasks.items())},
            }

    def _load_state(self, state: dict) -> None:
        self._counters = dict(state["counters"])
        self._deployments = {
            k: DeploymentRecord.from_dict(d) for k, d in state["deployments"].items()
        }
        self._instances = {k: InstanceState.from_dict(i) for k, i in state["instances"].items()}
        self._tasks = {k: TaskInstanceState.from_dict(t) for k, t in state["tasks"].items()}

    def snapshot(self) -> None:
        with self._lock:
            self._journal.write_snapshot(self.state_dict())

    def _commit(self, kind: str, payload: dict):
        """Append one event and apply it; returns the apply result."""
        record = self._journal.append(kind, payload, self._clock())
        result = self._apply(record)
        if self._snapshot_every and record.seq % self._snapshot_every == 0:
            self._journal.write_snapshot(self.state_dict())
        return result

    def _apply(self, record: Record):
        handler = getattr(self, f"_apply_{record.kind}", None)
        if handler is None:
            return None  # informational records (action_log)
        return handler(record)

    # -- deployment -------------------------------------------------------

    def deploy(
        self,
        definition: ProcessDefinition,
        layout: LayoutMetadata | None = None,
        image: bytes | None = None,
    ) -> DeploymentRecord:
        with self._lock:
            violations = validate_definition(definition)
            if violations:
                raise ValidationFailedError(violations)
            report = check_soundness(definition)
            if not report.sound:
                raise UnsoundDefinitionError(report)
            payload = {
                "definition_xml": serialize_definition(definition).decode("utf-8"),
                "layout": (
                    {name: list(geom) for name, geom in sorted(layout.per_node.items())}
                    if layout is not None
                    else None
                ),
                "image_b64": None,
            }
            if image is not None:
                payload["image_b64"] = base64.b64encode(image).decode("ascii")
            return self._commit("deploy", payload)

    def _apply_deploy(self, record: Record) -> DeploymentRecord:
        definition = parse_definition_xml(record.payload["definition_xml"].encode("utf-8"))
        self._counters["definition"] += 1
        definition_id = f"def-{self._counters['definition']}"
        version = 1 + max(
            (d.version for d in self._deployments.values() if d.name == definition.name),
            default=0,
        )
        layout = None
        if record.payload["layout"] is not None:
            layout = LayoutMetadata(
                per_node={k: tuple(v) for k, v in record.payload["layout"].items()}
            )
        image = None
        if record.payload["image_b64"] is not None:
            image = base64.b64decode(record.payload["image_b64"])
        deployment = DeploymentRecord(
            definition_id=definition_id,
            name=definition.name,
            version=version,
            deployed_at=record.ts,
            definition=definition,
            definition_xml=record.payload["definition_xml"],
            layout=layout,
            image_bytes=image,
        )
        self._deployments[definition_id] = deployment
        return deployment

    def latest_definitions(self) -> list[DeploymentRecord]:
        with self._lock:
            latest: dict[str, DeploymentRecord] = {}
            for deployment in self._deployments.values():
                current = latest.get(deployment.name)
                if current is None or deployment.version > current.version:
                    latest[deployment.name] = deployment
            return [latest[name] for name in sorted(latest)]

    def get_deployment(self, definition_id: str) -> DeploymentRecord:
        with self._lock:
            try:
                return self._deployments[definition_id]
            except KeyError:
                raise UnknownDefinitionError(definition_id) from None

    def find_deployment(self, name: str, version: int) -> DeploymentRecord:
        with self._lock:
            for deployment in self._deployments.values():
                if deployment.name == name and deployment.version == version:
                    return deployment
            raise UnknownDefinitionError(f"{name} v{version}")

    # -- instance lifecycle -----------------------------------------------

    def start_instance(
        self, definition_id: str, initiator: str
    ) -> tuple[InstanceState, TaskInstanceState]:
        with self._lock:
            if definition_id not in self._deployments:
                raise UnknownDefinitionError(definition_id)
            instance, logs = self._commit(
                "start_instance", {"definition_id": definition_id, "initiator": initiator}
            )
            self._journal_logs(logs)
            task = self._open_tasks(instance.instance_id)[0]
            return instance, task

    def _apply_start_instance(self, record: Record) -> tuple[InstanceState, list[dict]]:
        definition_id = record.payload["definition_id"]
        deployment = self._deployments[definition_id]
        self._counters["instance"] += 1
        self._counters["token"] += 1
        instance = InstanceState(
            instance_id=f"inst-{self._counters['instance']}",
            definition_id=definition_id,
            initiator=record.payload["initiator"],
            created_at=record.ts,
        )
        start = deployment.definition.start_nodes()[0]
        root = Token(token_id=f"tok-{self._counters['token']}", current_node=start.name)
        instance.tokens[root.token_id] = root
        self._instances[instance.instance_id] = instance
        logs: list[dict] = []
        self._enter_node(instance, deployment.definition, root, record.ts, logs)
        return instance, logs

    def get_instance(self, instance_id: str) -> InstanceState:
        with self._lock:
            try:
                return self._instances[instance_id]
            except KeyError:
                raise UnknownInstanceError(instance_id) from None

    # -- task lists ---------------------------------------------------------

    def _open_tasks(self, instance_id: str) -> list[TaskInstanceState]:
        tasks = [
            t
            for t in self._tasks.values()
            if t.instance_id == instance_id and t.state == TASK_OPEN
        ]
        tasks.sort(key=lambda t: int(t.task_instance_id.split("-")[1]), reverse=True)
        return tasks

    def find_task_instances(self, actor: str) -> list[TaskInstanceState]:
        """All open tasks of one actor, newest first."""
        with self._lock:
            tasks = [
                t for t in self._tasks.values() if t.state == TASK_OPEN and t.actor_id == actor
            ]
            tasks.sort(key=lambda t: int(t.task_instance_id.split("-")[1]), reverse=True)
            return tasks

    def get_task(self, task_instance_id: str) -> TaskInstanceState:
        with self._lock:
            try:
                return self._tasks[task_instance_id]
            except KeyError:
                raise UnknownReferentError(task_instance_id) from None

    # -- task completion ----------------------------------------------------

    def _check_task_permission(
        self, task: TaskInstanceState, caller: str, caller_roles: tuple[str, ...]
    ) -> None:
        if caller == task.actor_id or ADMIN_ROLE in caller_roles:
            return
        if task.actor_id.startswith(ROLE_ACTOR_PREFIX):
            if task.actor_id[len(ROLE_ACTOR_PREFIX):] in caller_roles:
                return
        raise ForbiddenActorError(f"task {task.task_instance_id} is not assigned to {caller}")

    def _resolve_transition(
        self, definition: ProcessDefinition, node_name: str, transition_name: str | None
    ) -> Transition:
        if transition_name is not None:
            for t in definition.outgoing(node_name):
                if t.name == transition_name:
                    return t
            raise UnknownTransitionError(f"no outgoing transition '{transition_name}' at {node_name}")
        default = definition.default_transition(node_name)
        if default is None:
            raise NoDefaultTransitionError(f"node {node_name} has no default transition")
        return default

    def complete_task(
        self,
        task_instance_id: str,
        caller: str,
        transition_name: str | None = None,
        variables: dict[str, TypedValue] | None = None,
        caller_roles: tuple[str, ...] = (),
    ) -> InstanceState:
        with self._lock:
            task = self._tasks.get(task_instance_id)
            if task is None or task.state != TASK_OPEN:
                raise TaskNotOpenError(task_instance_id)
            self._check_task_permission(task, caller, caller_roles)
            instance = self._instances[task.instance_id]
            if instance.state != STATE_RUNNING:
                raise InstanceNotRunningError(instance.instance_id)
            deployment = self._deployments[instance.definition_id]
            self._resolve_transition(deployment.definition, task.node_name, transition_name)
            payload = {
                "task_instance_id": task_instance_id,
                "caller": caller,
                "transition": transition_name,
                "variables": {
                    k: encode_value(v) for k, v in sorted((variables or {}).items())
                },
            }
            instance, logs = self._commit("complete_task", payload)
            self._journal_logs(logs)
            return instance

    def _apply_complete_task(self, record: Record) -> tuple[InstanceState, list[dict]]:
        task = self._tasks[record.payload["task_instance_id"]]
        caller = record.payload["caller"]
        instance = self._instances[task.instance_id]
        deployment = self._deployments[instance.definition_id]
        definition = deployment.definition

        # claim a group task: bind the swimlane to the completing actor
        # (admin advance completes as the placeholder itself, which never binds)
        if task.actor_id.startswith(ROLE_ACTOR_PREFIX) and not caller.startswith(ROLE_ACTOR_PREFIX):
            node = definition.node(task.node_name)
            if node.task is not None:
                instance.swimlane_bindings[node.task.swimlane] = caller
            task.actor_id = caller

        for name, encoded in record.payload["variables"].items():
            instance.variables[name] = decode_value(encoded)

        task.state = TASK_COMPLETED
        task.completed_at = record.ts

        transition = self._resolve_transition(
            definition, task.node_name, record.payload["transition"]
        )
        token = instance.tokens[task.token_id]
        logs: list[dict] = []
        self._take_transition(instance, definition, token, transition, record.ts, logs)
        return instance, logs

    # -- variables ----------------------------------------------------------

    def set_variable(self, instance_id: str, name: str, value: TypedValue) -> None:
        with self._lock:
            if instance_id not in self._instances:
                raise UnknownInstanceError(instance_id)
            self._commit(
                "set_variable",
                {"instance_id": instance_id, "name": name, "value": encode_value(value)},
            )

    def _apply_set_variable(self, record: Record) -> None:
        instance = self._instances[record.payload["instance_id"]]
        instance.variables[record.payload["name"]] = decode_value(record.payload["value"])

    def get_variable(self, instance_id: str, name: str) -> TypedValue:
        with self._lock:
            if instance_id not in self._instances:
                raise UnknownInstanceError(instance_id)
            variables = self._instances[instance_id].variables
            if name not in variables:
                raise UnknownVariableError(f"{instance_id} has no variable '{name}'")
            return variables[name]

    # -- administration -------------------------------------------------------

    def administer_instance(
        self,
        instance_id: str,
        action: str,
        caller: str,
        caller_roles: tuple[str, ...] = (),
    ) -> InstanceState:
        with self._lock:
            if ADMIN_ROLE not in caller_roles:
                raise ForbiddenActorError(f"{caller} does not hold the admin role")
            if action not in ("advance", "stop"):
                raise EngineError(f"unknown admin action '{action}'")
            instance = self._instances.get(instance_id)
            if instance is None:
                raise UnknownInstanceError(instance_id)
            if instance.state != STATE_RUNNING:
                raise InstanceNotRunningError(instance_id)
            if action == "advance":
                open_tasks = self._open_tasks(instance_id)
                if not open_tasks:
                    raise NoDefaultTransitionError(f"instance {instance_id} has no open task")
                oldest = open_tasks[-1]
                deployment = self._deployments[instance.definition_id]
                if deployment.definition.default_transition(oldest.node_name) is None:
                    raise NoDefaultTransitionError(
                        f"node {oldest.node_name} has no default transition"
                    )
                instance, logs = self._commit(
                    "complete_task",
                    {
                        "task_instance_id": oldest.task_instance_id,
                        "caller": oldest.actor_id,
                        "transition": None,
                        "variables": {},
                    },
                )
                self._journal_logs(logs)
                return instance
            self._commit("stop_instance", {"instance_id": instance_id})
            return instance

    def _apply_stop_instance(self, record: Record) -> None:
        instance = self._instances[record.payload["instance_id"]]
        instance.state = STATE_STOPPED
        instance.ended_at = record.ts
        for task in self._open_tasks(instance.instance_id):
            task.state = TASK_COMPLETED
            task.completed_at = record.ts

    # -- graph display --------------------------------------------------------

    def render_graph_state(
        self, instance_id: str | None = None, task_instance_id: str | None = None
    ) -> GraphState:
        with self._lock:
            if task_instance_id is not None:
                task = self._tasks.get(task_instance_id)
                if task is None:
                    raise UnknownReferentError(task_instance_id)
                instance_id = task.instance_id
            if instance_id is None or instance_id not in self._instances:
                raise UnknownReferentError(str(instance_id))
            instance = self._instances[instance_id]
            deployment = self._deployments[instance.definition_id]
            return build_graph_state(
                deployment.definition, deployment.layout, instance.live_leaf_nodes()
            )

    # -- control flow (internal) ----------------------------------------------

    def _journal_logs(self, logs: list[dict]) -> None:
        for entry in logs:
            self._journal.append("action_log", entry, self._clock())

    def _fire(
        self,
        instance: InstanceState,
        actions: tuple[ActionBinding, ...],
        event: str,
        site: str,
        ts: str,
        logs: list[dict],
    ) -> None:
        """Run all bindings for one event at one site, in declaration order.

        Effects never select transitions; log failures are swallowed into the
        journal entry."""
        for action in actions:
            if action.event != event:
                continue
            if action.effect == EFFECT_SET_VARIABLE:
                instance.variables[action.variable or ""] = action.value or ""
            elif action.effect == EFFECT_LOG:
                template = action.template or ""
                try:
                    message = template.format_map(
                        {k: render_value(v) for k, v in instance.variables.items()}
                    )
                except (KeyError, ValueError, IndexError) as exc:
                    message = f"<log template error: {exc!r}> {template}"
                logs.append(
                    {
                        "instance_id": instance.instance_id,
                        "event": event,
                        "site": site,
                        "message": message,
                        "ts": ts,
                    }
                )

    def _take_transition(
        self,
        instance: InstanceState,
        definition: ProcessDefinition,
        token: Token,
        transition: Transition,
        ts: str,
        logs: list[dict],
        hops: int = 0,
    ) -> None:
        node = definition.node(token.current_node)
        self._fire(instance, node.actions, EVENT_NODE_LEAVE, node.name, ts, logs)
        site = transition.name or f"{transition.from_node}->{transition.to_node}"
        self._fire(instance, transition.actions, EVENT_TRANSITION_TAKEN, site, ts, logs)
        token.current_node = transition.to_node
        self._enter_node(instance, definition, token, ts, logs, hops + 1)

    def _enter_node(
        self,
        instance: InstanceState,
        definition: ProcessDefinition,
        token: Token,
        ts: str,
        logs: list[dict],
        hops: int = 0,
    ) -> None:
        if hops > _MAX_AUTO_HOPS:
            raise EngineError(
                f"instance {instance.instance_id} exceeded {_MAX_AUTO_HOPS} automatic hops"
            )
        node = definition.node(token.current_node)
        self._fire(instance, node.actions, EVENT_NODE_ENTER, node.name, ts, logs)

        if node.kind in (NodeKind.START, NodeKind.TASK):
            self._create_task(instance, definition, token, node, ts)
        elif node.kind is NodeKind.DECISION:
            transition = self._decide(instance, definition, node)
            self._take_transition(instance, definition, token, transition, ts, logs, hops)
        elif node.kind is NodeKind.FORK:
            self._fire(instance, node.actions, EVENT_NODE_LEAVE, node.name, ts, logs)
            token.waiting = True
            for t in definition.outgoing(node.name):
                self._counters["token"] += 1
                child = Token(
                    token_id=f"tok-{self._counters['token']}",
                    current_node=node.name,
                    parent=token.token_id,
                )
                instance.tokens[child.token_id] = child
                site = t.name or f"{t.from_node}->{t.to_node}"
                self._fire(instance, t.actions, EVENT_TRANSITION_TAKEN, site, ts, logs)
                child.current_node = t.to_node
                self._enter_node(instance, definition, child, ts, logs, hops + 1)
        elif node.kind is NodeKind.JOIN:
            self._arrive_at_join(instance, definition, token, node, ts, logs, hops)
        elif node.kind is NodeKind.END:
            if token.parent is None:
                instance.state = STATE_ENDED
                instance.ended_at = ts
            else:
                token.alive = False

    def _decide(
        self, instance: InstanceState, definition: ProcessDefinition, node: Node
    ) -> Transition:
        outgoing = {t.name: t for t in definition.outgoing(node.name) if t.name is not None}
        for rule in node.decision_rules:
            value = instance.variables.get(rule.variable)
            if value is not None and render_value(value) == rule.equals and rule.transition in outgoing:
                return outgoing[rule.transition]
        default = definition.default_transition(node.name)
        if default is None:
            raise NoDefaultTransitionError(
                f"decision {node.name}: no rule matched and no default transition"
            )
        return default

    def _arrive_at_join(
        self,
        instance: InstanceState,
        definition: ProcessDefinition,
        token: Token,
        node: Node,
        ts: str,
        logs: list[dict],
        hops: int,
    ) -> None:
        if token.parent is None:
            # nothing to synchronize: pass straight through
            transition = self._join_exit(definition, node)
            self._take_transition(instance, definition, token, transition, ts, logs, hops)
            return
        token.waiting = True
        siblings = [
            t for t in instance.children_of(token.parent) if not t.consumed
        ]
        if all(t.alive and t.waiting and t.current_node == node.name for t in siblings):
            for sibling in siblings:
                sibling.alive = False
                sibling.waiting = False
                sibling.consumed = True
            parent = instance.tokens[token.parent]
            parent.waiting = False
            parent.current_node = node.name
            transition = self._join_exit(definition, node)
            self._take_transition(instance, definition, parent, transition, ts, logs, hops)

    def _join_exit(self, definition: ProcessDefinition, node: Node) -> Transition:
        default = definition.default_transition(node.name)
        if default is not None:
            return default
        outgoing = definition.outgoing(node.name)
        if len(outgoing) == 1:
            return outgoing[0]
        raise NoDefaultTransitionError(f"join {node.name} has no default transition")

    def _create_task(
        self,
        instance: InstanceState,
        definition: ProcessDefinition,
        token: Token,
        node: Node,
        ts: str,
    ) -> TaskInstanceState:
        assert node.task is not None
        lane = definition.swimlane(node.task.swimlane)
        if lane.name in instance.swimlane_bindings:
            actor = instance.swimlane_bindings[lane.name]
        elif lane.assignment == ASSIGN_INITIATOR:
            actor = instance.initiator
            instance.swimlane_bindings[lane.name] = actor
        elif lane.assignment == ASSIGN_FIXED_ACTOR:
            actor = lane.param or ""
            instance.swimlane_bindings[lane.name] = actor
        else:  # role: a group task until an actor holding the role claims it
            actor = f"{ROLE_ACTOR_PREFIX}{lane.param}"
        self._counters["task"] += 1
        task = TaskInstanceState(
            task_instance_id=f"task-{self._counters['task']}",
            instance_id=instance.instance_id,
            node_name=node.name,
            task_name=node.task.task_name,
            actor_id=actor,
            token_id=token.token_id,
            created_at=ts,
        )
        self._tasks[task.task_instance_id] = task
        return task
