/**
 * Tidy top-down tree layout, recomputed per snapshot. Leaf columns get a
 * unit slot; interior nodes center over their children.
 */
import type { TreeNodeDoc } from "./types.js";

export interface PlacedNode {
  node: TreeNodeDoc;
  path: string; // root is ""; children append ".0" / ".1"
  parentPath: string | null;
  x: number; // column units
  y: number; // depth
}

export interface Layout {
  nodes: PlacedNode[];
  width: number; // columns
  depth: number; // rows
}

export function layoutTree(root: TreeNodeDoc): Layout {
  const nodes: PlacedNode[] = [];
  let depth = 0;

  function place(node: TreeNodeDoc, path: string, parentPath: string | null,
                 leftEdge: number, y: number): { width: number; placed: PlacedNode } {
    depth = Math.max(depth, y);
    if (node.children.length === 0) {
      const placed: PlacedNode = { node, path, parentPath, x: leftEdge + 0.5, y };
      nodes.push(placed);
      return { width: 1, placed };
    }
    let width = 0;
    const childNodes: PlacedNode[] = [];
    for (let i = 0; i < node.children.length; i++) {
      const child = node.children[i]!;
      const result = place(child, `${path}.${i}`, path, leftEdge + width, y + 1);
      width += result.width;
      childNodes.push(result.placed);
    }
    const first = childNodes[0]!;
    const last = childNodes[childNodes.length - 1]!;
    const placed: PlacedNode = { node, path, parentPath, x: (first.x + last.x) / 2, y };
    nodes.push(placed);
    return { width, placed };
  }

  const { width } = place(root, "", null, 0, 0);
  return { nodes, width, depth };
}
