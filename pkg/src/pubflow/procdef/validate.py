"""Schema-level validation of process definitions.

Violations are data, not errors: an empty list means the definition is
schema-valid (which is weaker than sound, see ``soundness``).
"""

from __future__ import annotations

from collections import Counter
from collections.abc import Iterable

from pubflow.procdef.model import (
    ASSIGN_ROLE,
    BAD_STRUCTURE,
    DANGLING_TRANSITION,
    DUPLICATE_NAME,
    KNOWN_ROLES,
    MULTIPLE_START,
    NO_START,
    UNKNOWN_SWIMLANE,
    NodeKind,
    ProcessDefinition,
    Violation,
)


def validate_definition(
    definition: ProcessDefinition,
    allowed_roles: Iterable[str] = KNOWN_ROLES,
) -> list[Violation]:
    violations: list[Violation] = []
    roles = set(allowed_roles)

    if not definition.name:
        violations.append(Violation(BAD_STRUCTURE, definition.name, "definition name must be non-empty"))

    node_names = [n.name for n in definition.nodes]
    for name, count in Counter(node_names).items():
        if count > 1:
            violations.append(Violation(DUPLICATE_NAME, name, f"{count} nodes named '{name}'"))
    lane_names = [s.name for s in definition.swimlanes]
    for name, count in Counter(lane_names).items():
        if count > 1:
            violations.append(Violation(DUPLICATE_NAME, name, f"{count} swimlanes named '{name}'"))

    starts = definition.start_nodes()
    if not starts:
        violations.append(Violation(NO_START, definition.name, "definition has no start node"))
    elif len(starts) > 1:
        violations.append(
            Violation(MULTIPLE_START, definition.name, f"{len(starts)} start nodes: {[n.name for n in starts]}")
        )

    known = set(node_names)
    for t in definition.transitions:
        label = t.name or f"{t.from_node}->{t.to_node}"
        for ref in (t.from_node, t.to_node):
            if ref not in known:
                violations.append(Violation(DANGLING_TRANSITION, label, f"transition references unknown node '{ref}'"))

    for lane in definition.swimlanes:
        if lane.assignment == ASSIGN_ROLE and lane.param not in roles:
            violations.append(
                Violation(BAD_STRUCTURE, lane.name, f"swimlane role '{lane.param}' not in {sorted(roles)}")
            )

    for node in definition.nodes:
        outgoing = definition.outgoing(node.name)

        named = Counter(t.name for t in outgoing if t.name is not None)
        for name, count in named.items():
            if count > 1:
                violations.append(
                    Violation(DUPLICATE_NAME, node.name, f"{count} outgoing transitions named '{name}'")
                )
        unnamed = sum(1 for t in outgoing if t.name is None)
        if unnamed > 1:
            violations.append(
                Violation(BAD_STRUCTURE, node.name, f"{unnamed} unnamed (default) outgoing transitions")
            )

        if node.kind is NodeKind.END and outgoing:
            violations.append(Violation(BAD_STRUCTURE, node.name, "end node has outgoing transitions"))
        if node.kind is NodeKind.START and definition.incoming(node.name):
            violations.append(Violation(BAD_STRUCTURE, node.name, "start node has incoming transitions"))

        needs_task = node.kind in (NodeKind.START, NodeKind.TASK)
        if needs_task and node.task is None:
            violations.append(Violation(BAD_STRUCTURE, node.name, f"{node.kind.value} node requires a task"))
        if not needs_task and node.task is not None:
            violations.append(Violation(BAD_STRUCTURE, node.name, f"{node.kind.value} node may not carry a task"))
        if node.task is not None and node.task.swimlane not in lane_names:
            violations.append(
                Violation(UNKNOWN_SWIMLANE, node.name, f"task references unknown swimlane '{node.task.swimlane}'")
            )

        if node.kind is not NodeKind.DECISION and node.decision_rules:
            violations.append(Violation(BAD_STRUCTURE, node.name, "decision rules on a non-decision node"))
        if node.kind is NodeKind.DECISION:
            own = {t.name for t in outgoing if t.name is not None}
            for rule in node.decision_rules:
                if rule.transition not in own:
                    violations.append(
                        Violation(
                            BAD_STRUCTURE,
                            node.name,
                            f"decision rule references '{rule.transition}', not an outgoing transition",
                        )
                    )

    return violations
