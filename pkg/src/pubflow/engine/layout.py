"""Graph-state assembly and automatic node placement.

When a deployment carries no layout metadata, nodes are auto-placed in
layers left to right (BFS depth from the start node); unreachable nodes go
into one extra trailing layer.
"""

from __future__ import annotations

from collections import deque

from pubflow.procdef import LayoutMetadata, ProcessDefinition

from pubflow.engine.records import GraphEdgeView, GraphNodeView, GraphState

NODE_WIDTH = 120
NODE_HEIGHT = 40
X_GAP = 160
Y_GAP = 100
MARGIN = 40


def auto_layout(definition: ProcessDefinition) -> LayoutMetadata:
    layers: dict[str, int] = {}
    starts = definition.start_nodes()
    if starts:
        root = starts[0].name
        layers[root] = 0
        queue = deque([root])
        while queue:
            current = queue.popleft()
            for t in definition.outgoing(current):
                if t.to_node not in layers:
                    layers[t.to_node] = layers[current] + 1
                    queue.append(t.to_node)
    overflow = (max(layers.values()) + 1) if layers else 0
    per_node: dict[str, tuple[int, int, int, int]] = {}
    row_in_layer: dict[int, int] = {}
    for node in definition.nodes:
        layer = layers.get(node.name, overflow)
        row = row_in_layer.get(layer, 0)
        row_in_layer[layer] = row + 1
        per_node[node.name] = (
            MARGIN + layer * X_GAP,
            MARGIN + row * Y_GAP,
            NODE_WIDTH,
            NODE_HEIGHT,
        )
    return LayoutMetadata(per_node=per_node)


def build_graph_state(
    definition: ProcessDefinition,
    layout: LayoutMetadata | None,
    current_nodes: list[str],
) -> GraphState:
    placed = auto_layout(definition)
    if layout is not None:
        # explicit geometry wins; auto-placement fills the gaps
        merged = dict(placed.per_node)
        merged.update(layout.per_node)
        placed = LayoutMetadata(per_node=merged)
    nodes = tuple(
        GraphNodeView(n.name, n.kind.value, *placed.per_node[n.name]) for n in definition.nodes
    )
    transitions = tuple(
        GraphEdgeView(t.from_node, t.to_node, t.name) for t in definition.transitions
    )
    return GraphState(nodes=nodes, transitions=transitions, current_nodes=tuple(current_nodes))
