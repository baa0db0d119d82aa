// SVG rendering of a process graph: one box per node, one line per
// transition, current nodes outlined via the `current` class.

import type { GraphState, GraphNode } from './api.js';

const SVG_NS = 'http://www.w3.org/2000/svg';

function center(node: GraphNode): [number, number] {
  return [node.x + node.w / 2, node.y + node.h / 2];
}

export function renderGraph(graph: GraphState): SVGSVGElement {
  const svg = document.createElementNS(SVG_NS, 'svg');
  const width = Math.max(...graph.nodes.map((n) => n.x + n.w), 0) + 40;
  const height = Math.max(...graph.nodes.map((n) => n.y + n.h), 0) + 40;
  svg.setAttribute('viewBox', `0 0 ${width} ${height}`);
  svg.setAttribute('width', String(width));
  svg.setAttribute('class', 'process-graph');

  const byName = new Map(graph.nodes.map((n) => [n.name, n]));
  for (const edge of graph.transitions) {
    const from = byName.get(edge.from);
    const to = byName.get(edge.to);
    if (!from || !to) continue;
    const [x1, y1] = center(from);
    const [x2, y2] = center(to);
    const line = document.createElementNS(SVG_NS, 'line');
    line.setAttribute('x1', String(x1));
    line.setAttribute('y1', String(y1));
    line.setAttribute('x2', String(x2));
    line.setAttribute('y2', String(y2));
    line.setAttribute('class', 'edge');
    svg.appendChild(line);
    if (edge.name) {
      const label = document.createElementNS(SVG_NS, 'text');
      label.setAttribute('x', String((x1 + x2) / 2));
      label.setAttribute('y', String((y1 + y2) / 2 - 4));
      label.setAttribute('class', 'edge-label');
      label.textContent = edge.name;
      svg.appendChild(label);
    }
  }

  const current = new Set(graph.currentNodes);
  for (const node of graph.nodes) {
    const group = document.createElementNS(SVG_NS, 'g');
    const classes = ['node', `node-${node.kind}`];
    if (current.has(node.name)) classes.push('current');
    group.setAttribute('class', classes.join(' '));
    group.setAttribute('data-node', node.name);

    const rect = document.createElementNS(SVG_NS, 'rect');
    rect.setAttribute('x', String(node.x));
    rect.setAttribute('y', String(node.y));
    rect.setAttribute('width', String(node.w));
    rect.setAttribute('height', String(node.h));
    if (node.kind === 'start' || node.kind === 'end') rect.setAttribute('rx', '14');
    group.appendChild(rect);

    const text = document.createElementNS(SVG_NS, 'text');
    const [cx, cy] = center(node);
    text.setAttribute('x', String(cx));
    text.setAttribute('y', String(cy + 4));
    text.setAttribute('text-anchor', 'middle');
    text.textContent = node.name;
    group.appendChild(text);

    svg.appendChild(group);
  }
  return svg;
}
