/**
 * SVG rendering of one snapshot's search tree.
 *
 * Node glyphs, one per kind:
 *   tree-disj   pointed disjunction diamond; data-orient left/right
 *   tree-conj   tree-with-goal conjunction diamond
 *   goal-disj   undistributed disjunction goal leaf
 *   goal-conj   undistributed conjunction goal leaf
 *   delay       suspension marker
 *   text        relation call, fresh, or unification leaf
 *   answer      promoted success on the answer stream
 *   success     finished leaf not yet promoted
 *   failure     pruned/empty tree
 *   plus        answer-stream join
 *
 * Highlight classes: stateful (yellow), go-marked (green), selected
 * (blue, user selection or subscribed state), on-spine edges colored.
 */
import { layoutTree, type PlacedNode } from "./layout.js";
import type { Snapshot, TreeNodeDoc } from "./types.js";

export interface Selection {
  goalUids: ReadonlySet<number>;
  stateUids: ReadonlySet<number>;
}

export interface TreeCallbacks {
  onNodeClick?(node: TreeNodeDoc): void;
  onNodeHover?(node: TreeNodeDoc): void;
}

const CELL_W = 96;
const CELL_H = 72;
const SVG_NS = "http://www.w3.org/2000/svg";

export function glyphFor(node: TreeNodeDoc, parent: TreeNodeDoc | null,
                         childIndex: number): string {
  switch (node.kind) {
    case "empty":
      return "failure";
    case "disj_left":
    case "disj_right":
      return "tree-disj";
    case "conj":
      return "tree-conj";
    case "delay":
      return "delay";
    case "plus":
      return "plus";
    case "go":
      return "go";
    case "leaf": {
      const goalKind = node.goal?.kind ?? "top";
      if (goalKind === "top") {
        return parent !== null && parent.kind === "plus" && childIndex === 0
          ? "answer"
          : "success";
      }
      if (goalKind === "disj") {
        return "goal-disj";
      }
      if (goalKind === "conj") {
        return "goal-conj";
      }
      return "text";
    }
  }
}

function svgEl(tag: string): SVGElement {
  return document.createElementNS(SVG_NS, tag) as SVGElement;
}

function glyphLabel(node: TreeNodeDoc, glyph: string): string {
  switch (glyph) {
    case "failure":
      return "empty";
    case "tree-disj":
      return node.kind === "disj_left" ? "←" : "→";
    case "tree-conj":
      return `× ${node.goal?.text ?? ""}`;
    case "delay":
      return "delay";
    case "plus":
      return "+";
    case "go":
      return "go";
    case "answer":
    case "success":
      return "⊤";
    default:
      return node.goal?.text ?? "";
  }
}

export function renderTree(container: HTMLElement, snapshot: Snapshot,
                           selection: Selection, callbacks: TreeCallbacks = {}): void {
  container.textContent = "";
  const layout = layoutTree(snapshot.tree);
  const svg = svgEl("svg");
  svg.setAttribute("class", "search-tree");
  svg.setAttribute("width", String(Math.max(1, layout.width) * CELL_W));
  svg.setAttribute("height", String((layout.depth + 1) * CELL_H + 24));
  svg.setAttribute("data-step", String(snapshot.step));

  const byPath = new Map<string, PlacedNode>();
  for (const placed of layout.nodes) {
    byPath.set(placed.path, placed);
  }

  const edges = svgEl("g");
  for (const placed of layout.nodes) {
    if (placed.parentPath === null) {
      continue;
    }
    const parent = byPath.get(placed.parentPath)!;
    const line = svgEl("line");
    line.setAttribute("x1", String(parent.x * CELL_W));
    line.setAttribute("y1", String(parent.y * CELL_H + 24));
    line.setAttribute("x2", String(placed.x * CELL_W));
    line.setAttribute("y2", String(placed.y * CELL_H + 12));
    const active = placed.node.flags.on_active_spine && parent.node.flags.on_active_spine;
    line.setAttribute("class", active ? "edge active-edge" : "edge");
    edges.appendChild(line);
  }
  svg.appendChild(edges);

  for (const placed of layout.nodes) {
    const parent = placed.parentPath === null ? null : byPath.get(placed.parentPath)!.node;
    const childIndex = placed.path === "" ? 0 : Number(placed.path.split(".").pop());
    const glyph = glyphFor(placed.node, parent, childIndex);
    const group = svgEl("g");
    const classes = ["node", `glyph-${glyph}`];
    if (placed.node.state !== undefined) {
      classes.push("stateful");
    }
    if (placed.node.flags.go_marked) {
      classes.push("go-marked");
    }
    const goalUid = placed.node.goal?.uid;
    if (goalUid !== null && goalUid !== undefined && selection.goalUids.has(goalUid)) {
      classes.push("selected");
    }
    if (placed.node.state !== undefined && selection.stateUids.has(placed.node.state.uid)) {
      classes.push("selected");
    }
    group.setAttribute("class", classes.join(" "));
    group.setAttribute("data-kind", placed.node.kind);
    group.setAttribute("data-glyph", glyph);
    group.setAttribute("data-path", placed.path);
    if (placed.node.kind === "disj_left" || placed.node.kind === "disj_right") {
      group.setAttribute("data-orient", placed.node.kind === "disj_left" ? "left" : "right");
    }
    if (goalUid !== null && goalUid !== undefined) {
      group.setAttribute("data-goal-uid", String(goalUid));
    }
    if (placed.node.state !== undefined) {
      group.setAttribute("data-state-uid", String(placed.node.state.uid));
      const tooltip = svgEl("title");
      tooltip.textContent = placed.node.state.reified;
      group.appendChild(tooltip);
    }

    const shape = svgEl(glyph === "tree-disj" || glyph === "tree-conj" ? "polygon" : "rect");
    const cx = placed.x * CELL_W;
    const cy = placed.y * CELL_H + 18;
    if (shape.tagName === "polygon") {
      shape.setAttribute("points",
        `${cx},${cy - 14} ${cx + 20},${cy} ${cx},${cy + 14} ${cx - 20},${cy}`);
    } else {
      shape.setAttribute("x", String(cx - 34));
      shape.setAttribute("y", String(cy - 12));
      shape.setAttribute("width", "68");
      shape.setAttribute("height", "24");
      shape.setAttribute("rx", glyph === "success" || glyph === "answer" ? "12" : "4");
    }
    shape.setAttribute("class", "shape");
    group.appendChild(shape);

    const label = svgEl("text");
    label.setAttribute("x", String(cx));
    label.setAttribute("y", String(cy + 4));
    label.setAttribute("text-anchor", "middle");
    label.textContent = glyphLabel(placed.node, glyph);
    group.appendChild(label);

    group.addEventListener("click", () => callbacks.onNodeClick?.(placed.node));
    group.addEventListener("mouseenter", () => callbacks.onNodeHover?.(placed.node));
    svg.appendChild(group);
  }
  container.appendChild(svg);
}
