/**
 * Read-mostly source pane with goal-span highlighting.
 *
 * Goal spans nest, so the pane wraps the program text in nested
 * clickable <span data-goal-uid> elements built from the snapshot's
 * source map; selected spans get a highlight class. Editing happens in
 * the controls textarea and requires resubmission, not here.
 */
import type { SourceMapDoc, Span } from "./types.js";

export interface SourceCallbacks {
  onGoalClick?(uid: number): void;
}

interface SpanEntry {
  uid: number;
  start: number;
  end: number;
  children: SpanEntry[];
}

function buildSpanForest(sourceMap: SourceMapDoc): SpanEntry[] {
  const entries: SpanEntry[] = Object.entries(sourceMap.goals)
    .map(([uid, span]: [string, Span]) => ({
      uid: Number(uid),
      start: span.start.offset,
      end: span.end.offset,
      children: [],
    }))
    .sort((a, b) => a.start - b.start || b.end - a.end || a.uid - b.uid);
  const roots: SpanEntry[] = [];
  const stack: SpanEntry[] = [];
  for (const entry of entries) {
    while (stack.length > 0) {
      const top = stack[stack.length - 1]!;
      if (entry.start >= top.start && entry.end <= top.end) {
        break;
      }
      stack.pop();
    }
    if (stack.length === 0) {
      roots.push(entry);
    } else {
      stack[stack.length - 1]!.children.push(entry);
    }
    stack.push(entry);
  }
  return roots;
}

export function renderSource(container: HTMLElement, source: string,
                             sourceMap: SourceMapDoc,
                             selectedGoalUids: ReadonlySet<number>,
                             callbacks: SourceCallbacks = {}): void {
  container.textContent = "";
  const pre = document.createElement("pre");
  pre.className = "source-pane";
  const forest = buildSpanForest(sourceMap);

  function emit(parent: HTMLElement, from: number, to: number, entries: SpanEntry[]): void {
    let cursor = from;
    for (const entry of entries) {
      if (entry.start > cursor) {
        parent.appendChild(document.createTextNode(source.slice(cursor, entry.start)));
      }
      const span = document.createElement("span");
      span.className = selectedGoalUids.has(entry.uid) ? "goal-span selected" : "goal-span";
      span.dataset.goalUid = String(entry.uid);
      span.addEventListener("click", (event) => {
        event.stopPropagation();
        callbacks.onGoalClick?.(entry.uid);
      });
      emit(span, entry.start, entry.end, entry.children);
      parent.appendChild(span);
      cursor = entry.end;
    }
    if (cursor < to) {
      parent.appendChild(document.createTextNode(source.slice(cursor, to)));
    }
  }

  emit(pre, 0, source.length, forest);
  container.appendChild(pre);
}
