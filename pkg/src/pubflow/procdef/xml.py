"""Definition and layout XML (namespace ``urn:pubflow:procdef-1``).

Element vocabulary (see ``docs/procdef-format.md`` for the full example):

* ``<process-definition name>`` root
* ``<swimlane name assignment [role|actor]>``
* ``<variable name>`` declared process variables
* one node element per node, named by kind: ``start-state``, ``task-node``,
  ``decision``, ``fork``, ``join``, ``end-state``; transitions nest inside
  their source node
* ``<task name swimlane>`` with ``<field name label kind>`` children
* ``<rule variable equals transition>`` (decision nodes)
* ``<action event type ...>`` on nodes and transitions
* ``<transition [name] to>``

Layout XML: ``<layout>`` root with one ``<node name x y width height/>``
per node.
"""

from __future__ import annotations

import xml.etree.ElementTree as ET

from pubflow.procdef.errors import SchemaViolationError, XmlSyntaxError
from pubflow.procdef.model import (
    ASSIGN_FIXED_ACTOR,
    ASSIGN_INITIATOR,
    ASSIGN_ROLE,
    EFFECT_LOG,
    EFFECT_SET_VARIABLE,
    EVENTS,
    FORM_FIELD_KINDS,
    ActionBinding,
    DecisionRule,
    FormField,
    LayoutMetadata,
    Node,
    NodeKind,
    ProcessDefinition,
    Swimlane,
    TaskSpec,
    Transition,
)

NAMESPACE = "urn:pubflow:procdef-1"

_KIND_TO_ELEMENT = {
    NodeKind.START: "start-state",
    NodeKind.TASK: "task-node",
    NodeKind.DECISION: "decision",
    NodeKind.FORK: "fork",
    NodeKind.JOIN: "join",
    NodeKind.END: "end-state",
}
_ELEMENT_TO_KIND = {v: k for k, v in _KIND_TO_ELEMENT.items()}


def _q(tag: str) -> str:
    return f"{{{NAMESPACE}}}{tag}"


def _local(tag: str) -> str:
    return tag.rsplit("}", 1)[-1]


def _require(elem: ET.Element, attr: str, path: str) -> str:
    value = elem.get(attr)
    if value is None:
        raise SchemaViolationError(path, f"missing attribute '{attr}'")
    return value


def _parse_root(data: bytes, expected_tag: str) -> ET.Element:
    try:
        root = ET.fromstring(data)
    except ET.ParseError as exc:
        line, column = exc.position
        raise XmlSyntaxError(str(exc.msg), line, column) from exc
    if root.tag != _q(expected_tag):
        raise SchemaViolationError("/", f"expected root <{expected_tag}> in namespace {NAMESPACE}, got {root.tag}")
    return root


def _parse_action(elem: ET.Element, path: str) -> ActionBinding:
    event = _require(elem, "event", path)
    if event not in EVENTS:
        raise SchemaViolationError(path, f"unknown event '{event}'")
    effect = _require(elem, "type", path)
    if effect == EFFECT_SET_VARIABLE:
        return ActionBinding(
            event=event,
            effect=effect,
            variable=_require(elem, "variable", path),
            value=_require(elem, "value", path),
        )
    if effect == EFFECT_LOG:
        return ActionBinding(event=event, effect=effect, template=_require(elem, "template", path))
    raise SchemaViolationError(path, f"unknown action type '{effect}'")


def _parse_task(elem: ET.Element, path: str) -> TaskSpec:
    fields = []
    for child in elem:
        if _local(child.tag) != "field":
            raise SchemaViolationError(path, f"unexpected element <{_local(child.tag)}> inside <task>")
        kind = child.get("kind", "text")
        if kind not in FORM_FIELD_KINDS:
            raise SchemaViolationError(path, f"unknown field kind '{kind}'")
        fields.append(FormField(name=_require(child, "name", path), label=child.get("label", ""), kind=kind))
    return TaskSpec(
        task_name=_require(elem, "name", path),
        swimlane=_require(elem, "swimlane", path),
        form_fields=tuple(fields),
    )


def _parse_node(elem: ET.Element, kind: NodeKind) -> tuple[Node, list[Transition]]:
    name = _require(elem, "name", f"/{_KIND_TO_ELEMENT[kind]}")
    path = f"/{_KIND_TO_ELEMENT[kind]}[@name='{name}']"
    task: TaskSpec | None = None
    rules: list[DecisionRule] = []
    actions: list[ActionBinding] = []
    transitions: list[Transition] = []
    for child in elem:
        tag = _local(child.tag)
        if tag == "task":
            if kind not in (NodeKind.START, NodeKind.TASK):
                raise SchemaViolationError(path, f"<task> not allowed on a {kind.value} node")
            task = _parse_task(child, path)
        elif tag == "rule":
            if kind is not NodeKind.DECISION:
                raise SchemaViolationError(path, f"<rule> not allowed on a {kind.value} node")
            rules.append(
                DecisionRule(
                    variable=_require(child, "variable", path),
                    equals=_require(child, "equals", path),
                    transition=_require(child, "transition", path),
                )
            )
        elif tag == "action":
            actions.append(_parse_action(child, path))
        elif tag == "transition":
            t_actions = tuple(
                _parse_action(gc, path) for gc in child if _local(gc.tag) == "action"
            )
            transitions.append(
                Transition(
                    from_node=name,
                    to_node=_require(child, "to", path),
                    name=child.get("name"),
                    actions=t_actions,
                )
            )
        else:
            raise SchemaViolationError(path, f"unexpected element <{tag}>")
    node = Node(name=name, kind=kind, task=task, decision_rules=tuple(rules), actions=tuple(actions))
    return node, transitions


def parse_definition_xml(data: bytes) -> ProcessDefinition:
    """Parse definition XML into a ProcessDefinition.

    Raises XmlSyntaxError for ill-formed XML and SchemaViolationError for
    structurally invalid documents.  Graph-level invariants (dangling
    transitions, duplicate names, ...) are left to ``validate_definition``.
    """
    root = _parse_root(data, "process-definition")
    name = _require(root, "name", "/process-definition")
    if not name:
        raise SchemaViolationError("/process-definition", "name must be non-empty")

    nodes: list[Node] = []
    transitions: list[Transition] = []
    swimlanes: list[Swimlane] = []
    variables: list[str] = []
    for child in root:
        tag = _local(child.tag)
        if tag == "swimlane":
            sl_name = _require(child, "name", "/swimlane")
            assignment = _require(child, "assignment", f"/swimlane[@name='{sl_name}']")
            if assignment == ASSIGN_INITIATOR:
                swimlanes.append(Swimlane(sl_name, assignment))
            elif assignment == ASSIGN_ROLE:
                swimlanes.append(Swimlane(sl_name, assignment, _require(child, "role", f"/swimlane[@name='{sl_name}']")))
            elif assignment == ASSIGN_FIXED_ACTOR:
                swimlanes.append(Swimlane(sl_name, assignment, _require(child, "actor", f"/swimlane[@name='{sl_name}']")))
            else:
                raise SchemaViolationError(f"/swimlane[@name='{sl_name}']", f"unknown assignment '{assignment}'")
        elif tag == "variable":
            variables.append(_require(child, "name", "/variable"))
        elif tag in _ELEMENT_TO_KIND:
            node, node_transitions = _parse_node(child, _ELEMENT_TO_KIND[tag])
            nodes.append(node)
            transitions.extend(node_transitions)
        else:
            raise SchemaViolationError("/process-definition", f"unexpected element <{tag}>")

    return ProcessDefinition(
        name=name,
        nodes=tuple(nodes),
        transitions=tuple(transitions),
        swimlanes=tuple(swimlanes),
        variables=tuple(variables),
    )


def _action_element(action: ActionBinding) -> ET.Element:
    elem = ET.Element("action", {"event": action.event, "type": action.effect})
    if action.effect == EFFECT_SET_VARIABLE:
        elem.set("variable", action.variable or "")
        elem.set("value", action.value or "")
    else:
        elem.set("template", action.template or "")
    return elem


def serialize_definition(definition: ProcessDefinition) -> bytes:
    root = ET.Element("process-definition", {"xmlns": NAMESPACE, "name": definition.name})
    for lane in definition.swimlanes:
        attrs = {"name": lane.name, "assignment": lane.assignment}
        if lane.assignment == ASSIGN_ROLE:
            attrs["role"] = lane.param or ""
        elif lane.assignment == ASSIGN_FIXED_ACTOR:
            attrs["actor"] = lane.param or ""
        ET.SubElement(root, "swimlane", attrs)
    for var in definition.variables:
        ET.SubElement(root, "variable", {"name": var})
    for node in definition.nodes:
        elem = ET.SubElement(root, _KIND_TO_ELEMENT[node.kind], {"name": node.name})
        if node.task is not None:
            task_elem = ET.SubElement(elem, "task", {"name": node.task.task_name, "swimlane": node.task.swimlane})
            for f in node.task.form_fields:
                ET.SubElement(task_elem, "field", {"name": f.name, "label": f.label, "kind": f.kind})
        for rule in node.decision_rules:
            ET.SubElement(elem, "rule", {"variable": rule.variable, "equals": rule.equals, "transition": rule.transition})
        for action in node.actions:
            elem.append(_action_element(action))
        for t in definition.transitions:
            if t.from_node != node.name:
                continue
            t_attrs = {"to": t.to_node}
            if t.name is not None:
                t_attrs["name"] = t.name
            t_elem = ET.SubElement(elem, "transition", t_attrs)
            for action in t.actions:
                t_elem.append(_action_element(action))
    return ET.tostring(root, encoding="utf-8", xml_declaration=True)


def parse_layout_xml(data: bytes) -> LayoutMetadata:
    root = _parse_root(data, "layout")
    per_node: dict[str, tuple[int, int, int, int]] = {}
    for child in root:
        if _local(child.tag) != "node":
            raise SchemaViolationError("/layout", f"unexpected element <{_local(child.tag)}>")
        name = _require(child, "name", "/layout/node")
        path = f"/layout/node[@name='{name}']"
        geometry = []
        for attr in ("x", "y", "width", "height"):
            raw = _require(child, attr, path)
            try:
                value = int(raw)
            except ValueError:
                raise SchemaViolationError(path, f"attribute '{attr}' must be an integer") from None
            if value < 0:
                raise SchemaViolationError(path, f"attribute '{attr}' must be non-negative")
            geometry.append(value)
        per_node[name] = (geometry[0], geometry[1], geometry[2], geometry[3])
    return LayoutMetadata(per_node=per_node)


def serialize_layout(layout: LayoutMetadata) -> bytes:
    root = ET.Element("layout", {"xmlns": NAMESPACE})
    for name, (x, y, width, height) in layout.per_node.items():
        ET.SubElement(
            root,
            "node",
            {"name": name, "x": str(x), "y": str(y), "width": str(width), "height": str(height)},
        )
    return ET.tostring(root, encoding="utf-8", xml_declaration=True)
