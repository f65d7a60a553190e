/**
 * State inspector: substitution rows, trail rows (clickable back to the
 * unification's source span), and the reified view of the query vars.
 */
import type { StateView } from "./types.js";

export interface SidebarCallbacks {
  onTrailGoalClick?(goalUid: number): void;
}

export function renderSidebar(container: HTMLElement, state: StateView | null,
                              callbacks: SidebarCallbacks = {}): void {
  container.textContent = "";
  const root = document.createElement("div");
  root.className = "sidebar";
  if (state === null) {
    const hint = document.createElement("p");
    hint.className = "sidebar-hint";
    hint.textContent = "Click a highlighted node to inspect its state.";
    root.appendChild(hint);
    container.appendChild(root);
    return;
  }

  const heading = document.createElement("h3");
  heading.textContent = `state ${state.uid}`;
  root.appendChild(heading);

  const reified = document.createElement("p");
  reified.className = "reified";
  reified.textContent = `reified: ${state.reified}`;
  root.appendChild(reified);

  const substHead = document.createElement("h4");
  substHead.textContent = "substitution";
  root.appendChild(substHead);
  const substList = document.createElement("ul");
  substList.className = "substitution";
  for (const entry of state.substitution) {
    const row = document.createElement("li");
    row.textContent = `${entry.var} ↦ ${entry.term}`;
    substList.appendChild(row);
  }
  root.appendChild(substList);

  const trailHead = document.createElement("h4");
  trailHead.textContent = "trail";
  root.appendChild(trailHead);
  const trailList = document.createElement("ul");
  trailList.className = "trail";
  for (const entry of state.trail) {
    const row = document.createElement("li");
    row.className = "trail-row";
    row.dataset.goalUid = String(entry.goal_uid);
    row.textContent = `${entry.left} ≡ ${entry.right}`;
    row.addEventListener("click", () => callbacks.onTrailGoalClick?.(entry.goal_uid));
    trailList.appendChild(row);
  }
  root.appendChild(trailList);
  container.appendChild(root);
}
