/**
 * UI state. Every highlight is keyed by a UID found in the current
 * snapshot or its source map; nothing is tracked positionally, so
 * re-rendering after a step keeps following the same goals and states.
 */
import type { Snapshot, StateView, TreeNodeDoc } from "./types.js";

export class ViewModel {
  sessionId: string | null = null;
  snapshot: Snapshot | null = null;
  source = "";
  rules = "interleaving";
  selectedGoalUids = new Set<number>();
  subscribedStateUids = new Set<number>();
  inspectedStateUid: number | null = null;
  error: string | null = null;
  busy = false;

  selectGoal(uid: number): void {
    this.selectedGoalUids = new Set([uid]);
  }

  clearSelection(): void {
    this.selectedGoalUids = new Set();
  }

  subscribeState(uid: number): void {
    this.subscribedStateUids.add(uid);
    this.inspectedStateUid = uid;
  }

  /** The inspected state's current view, tracked by UID across steps. */
  inspectedState(): StateView | null {
    if (this.snapshot === null || this.inspectedStateUid === null) {
      return null;
    }
    return findState(this.snapshot, this.inspectedStateUid);
  }
}

export function findState(snapshot: Snapshot, uid: number): StateView | null {
  let found: StateView | null = null;

  function walk(node: TreeNodeDoc): void {
    if (found !== null) {
      return;
    }
    if (node.state !== undefined && node.state.uid === uid) {
      found = node.state;
      return;
    }
    for (const child of node.children) {
      walk(child);
    }
  }

  walk(snapshot.tree);
  if (found === null) {
    for (const answer of snapshot.answers) {
      if (answer.uid === uid) {
        return answer;
      }
    }
  }
  return found;
}
