"""Static soundness analysis of schema-valid process definitions.

A definition is sound when a workflow instance can never get stuck and the
whole graph is exercisable:

* exactly one start node, at least one end node
* every node reachable from the start, and some end reachable from every node
* every decision covers at least one outgoing transition (rules or default)
* every fork's branches synchronize at one common join before any end

Reachability is computed over *effective* edges: a decision contributes only
the transitions its rules name plus its unnamed default, because the runtime
can never take an uncovered transition.  Fork/join pairing is checked
structurally by a depth-balanced graph traversal, not by state-space
exploration; the exhaustive token-game simulator used to cross-check this
analysis lives in the test suite.
"""

from __future__ import annotations

from collections import deque

from pubflow.procdef.model import (
    DEAD_END,
    DECISION_RULE_GAP,
    FORK_JOIN_MISMATCH,
    MULTIPLE_START,
    NO_END,
    NO_START,
    UNREACHABLE_NODE,
    NodeKind,
    ProcessDefinition,
    SoundnessReport,
    Violation,
)

# Fork nesting deeper than the node budget cannot occur in a graph a token
# game would terminate on; deeper paths are abandoned.
_MAX_FORK_DEPTH = 16


def effective_successors(definition: ProcessDefinition, node_name: str) -> list[str]:
    """Successor nodes the runtime can actually move to."""
    node = definition.node(node_name)
    outgoing = definition.outgoing(node_name)
    if node.kind is not NodeKind.DECISION:
        return [t.to_node for t in outgoing]
    covered = {rule.transition for rule in node.decision_rules}
    successors = [t.to_node for t in outgoing if t.name is not None and t.name in covered]
    default = definition.default_transition(node_name)
    if default is not None:
        successors.append(default.to_node)
    return successors


def _reachable_from_start(definition: ProcessDefinition, start: str) -> set[str]:
    seen = {start}
    queue = deque([start])
    while queue:
        current = queue.popleft()
        for nxt in effective_successors(definition, current):
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return seen


def _coreachable_to_end(definition: ProcessDefinition) -> set[str]:
    predecessors: dict[str, set[str]] = {n.name: set() for n in definition.nodes}
    for node in definition.nodes:
        for nxt in effective_successors(definition, node.name):
            predecessors[nxt].add(node.name)
    seen = {n.name for n in definition.end_nodes()}
    queue = deque(seen)
    while queue:
        current = queue.popleft()
        for prev in predecessors[current]:
            if prev not in seen:
                seen.add(prev)
                queue.append(prev)
    return seen


def _branch_sync_points(
    definition: ProcessDefinition, branch_start: str
) -> tuple[set[str], bool]:
    """Joins at which a fork branch can first synchronize, plus whether some
    path escapes to an end node before synchronizing.

    Depth counts nested fork/join pairs entered along the path; only joins
    met at depth zero synchronize this branch.
    """
    syncs: set[str] = set()
    end_escape = False
    seen: set[tuple[str, int]] = set()
    stack: list[tuple[str, int]] = [(branch_start, 0)]
    while stack:
        current, depth = stack.pop()
        if (current, depth) in seen:
            continue
        seen.add((current, depth))
        kind = definition.node(current).kind
        if kind is NodeKind.JOIN:
            if depth == 0:
                syncs.add(current)
                continue
            for nxt in effective_successors(definition, current):
                stack.append((nxt, depth - 1))
            continue
        if kind is NodeKind.END:
            end_escape = True
            continue
        next_depth = depth + 1 if kind is NodeKind.FORK else depth
        if next_depth > _MAX_FORK_DEPTH:
            continue
        for nxt in effective_successors(definition, current):
            stack.append((nxt, next_depth))
    return syncs, end_escape


def check_soundness(definition: ProcessDefinition) -> SoundnessReport:
    """Precondition: ``validate_definition(definition)`` is empty."""
    violations: list[Violation] = []

    starts = definition.start_nodes()
    if not starts:
        violations.append(Violation(NO_START, definition.name, "no start node"))
        return SoundnessReport(sound=False, violations=tuple(violations))
    if len(starts) > 1:
        violations.append(
            Violation(MULTIPLE_START, definition.name, f"{len(starts)} start nodes")
        )
    start = starts[0].name

    if not definition.end_nodes():
        violations.append(Violation(NO_END, definition.name, "no end node"))

    reachable = _reachable_from_start(definition, start)
    for node in definition.nodes:
        if node.name not in reachable:
            violations.append(
                Violation(UNREACHABLE_NODE, node.name, f"'{node.name}' is not reachable from the start node")
            )

    coreachable = _coreachable_to_end(definition)
    for node in definition.nodes:
        if node.name in reachable and node.name not in coreachable:
            violations.append(
                Violation(DEAD_END, node.name, f"no end node is reachable from '{node.name}'")
            )

    for node in definition.nodes:
        if node.kind is NodeKind.DECISION and node.name in reachable:
            if not effective_successors(definition, node.name):
                violations.append(
                    Violation(
                        DECISION_RULE_GAP,
                        node.name,
                        "decision rules plus default cover no outgoing transition",
                    )
                )

    for node in definition.nodes:
        if node.kind is not NodeKind.FORK or node.name not in reachable:
            continue
        branch_syncs: list[set[str]] = []
        escaped = False
        for t in definition.outgoing(node.name):
            syncs, end_escape = _branch_sync_points(definition, t.to_node)
            branch_syncs.append(syncs)
            escaped = escaped or end_escape
        paired = (
            not escaped
            and branch_syncs
            and all(len(s) == 1 for s in branch_syncs)
            and len(set.union(*branch_syncs)) == 1
        )
        if not paired:
            violations.append(
                Violation(
                    FORK_JOIN_MISMATCH,
                    node.name,
                    f"branches of fork '{node.name}' do not all synchronize at one common join",
                )
            )

    return SoundnessReport(sound=not violations, violations=tuple(violations))
