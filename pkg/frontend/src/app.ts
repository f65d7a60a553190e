/**
 * Wires the program entry controls, semantics picker, stepping buttons,
 * tree diagram, source pane, and state sidebar to a stepping backend.
 * One API request is in flight at a time; controls stay disabled until
 * it settles, and failures surface as a toast without touching the
 * current view.
 */
import type { SteppingBackend } from "./api.js";
import { renderSidebar } from "./sidebar.js";
import { renderSource } from "./sourcePane.js";
import { renderTree } from "./renderTree.js";
import { SUPPORTED_SNAPSHOT_VERSION, type Snapshot, type TreeNodeDoc } from "./types.js";
import { ViewModel } from "./viewModel.js";

export class App {
  readonly vm = new ViewModel();
  private sourceInput!: HTMLTextAreaElement;
  private rulesPicker!: HTMLSelectElement;
  private stepLabel!: HTMLElement;
  private ruleLabel!: HTMLElement;
  private toast!: HTMLElement;
  private errorBanner!: HTMLElement;
  private treePane!: HTMLElement;
  private sourcePane!: HTMLElement;
  private sidebarPane!: HTMLElement;
  private buttons: HTMLButtonElement[] = [];

  constructor(private container: HTMLElement, private backend: SteppingBackend) {
    this.buildSkeleton();
  }

  private buildSkeleton(): void {
    this.container.textContent = "";
    const controls = document.createElement("div");
    controls.className = "controls";

    this.sourceInput = document.createElement("textarea");
    this.sourceInput.className = "program-input";
    controls.appendChild(this.sourceInput);

    this.rulesPicker = document.createElement("select");
    this.rulesPicker.className = "semantics-picker";
    for (const name of ["interleaving", "dfs"]) {
      const option = document.createElement("option");
      option.value = name;
      option.textContent = name;
      this.rulesPicker.appendChild(option);
    }
    this.rulesPicker.addEventListener("change", () => {
      void this.changeSemantics(this.rulesPicker.value);
    });
    controls.appendChild(this.rulesPicker);

    const mkButton = (label: string, cls: string, handler: () => void) => {
      const button = document.createElement("button");
      button.textContent = label;
      button.className = cls;
      button.addEventListener("click", handler);
      controls.appendChild(button);
      this.buttons.push(button);
      return button;
    };
    mkButton("start", "start", () => void this.start());
    mkButton("step", "step-forward", () => void this.stepForward());
    mkButton("back", "step-back", () => void this.stepBack());
    mkButton("reset", "reset", () => void this.reset());

    this.stepLabel = document.createElement("span");
    this.stepLabel.className = "step-count";
    controls.appendChild(this.stepLabel);
    this.ruleLabel = document.createElement("span");
    this.ruleLabel.className = "last-rule";
    controls.appendChild(this.ruleLabel);

    this.toast = document.createElement("div");
    this.toast.className = "toast hidden";
    controls.appendChild(this.toast);
    this.errorBanner = document.createElement("div");
    this.errorBanner.className = "error-banner hidden";
    controls.appendChild(this.errorBanner);

    this.container.appendChild(controls);

    const main = document.createElement("div");
    main.className = "panes";
    this.sourcePane = document.createElement("div");
    this.sourcePane.className = "source-container";
    this.treePane = document.createElement("div");
    this.treePane.className = "tree-container";
    this.sidebarPane = document.createElement("div");
    this.sidebarPane.className = "sidebar-container";
    main.appendChild(this.sourcePane);
    main.appendChild(this.treePane);
    main.appendChild(this.sidebarPane);
    this.container.appendChild(main);
    this.render();
  }

  setSource(text: string): void {
    this.sourceInput.value = text;
  }

  async start(): Promise<void> {
    await this.request(async () => {
      const result = await this.backend.createSession(
        this.sourceInput.value, this.rulesPicker.value);
      this.vm.sessionId = result.id;
      this.vm.source = this.sourceInput.value;
      this.vm.rules = this.rulesPicker.value;
      this.vm.clearSelection();
      this.vm.subscribedStateUids = new Set();
      this.vm.inspectedStateUid = null;
      this.acceptSnapshot(result.snapshot);
    });
  }

  async stepForward(): Promise<void> {
    if (this.vm.sessionId === null) {
      return;
    }
    await this.request(async () => {
      this.acceptSnapshot(await this.backend.step(this.vm.sessionId!));
    });
  }

  async stepBack(): Promise<void> {
    if (this.vm.sessionId === null) {
      return;
    }
    await this.request(async () => {
      this.acceptSnapshot(await this.backend.back(this.vm.sessionId!));
    });
  }

  async reset(rules?: string): Promise<void> {
    if (this.vm.sessionId === null) {
      return;
    }
    await this.request(async () => {
      this.acceptSnapshot(await this.backend.reset(this.vm.sessionId!, rules));
    });
  }

  private async changeSemantics(rules: string): Promise<void> {
    this.vm.rules = rules;
    if (this.vm.sessionId !== null) {
      await this.reset(rules);
    }
  }

  private acceptSnapshot(snapshot: Snapshot): void {
    if (snapshot.version !== SUPPORTED_SNAPSHOT_VERSION) {
      this.vm.error = `snapshot schema version ${snapshot.version} is not supported`;
      this.render();
      return;
    }
    this.vm.error = null;
    this.vm.snapshot = snapshot;
    this.render();
  }

  private async request(action: () => Promise<void>): Promise<void> {
    if (this.vm.busy) {
      return;
    }
    this.vm.busy = true;
    this.render();
    try {
      await action();
    } catch (err) {
      this.showToast(err instanceof Error ? err.message : String(err));
    } finally {
      this.vm.busy = false;
      this.render();
    }
  }

  private showToast(message: string): void {
    this.toast.textContent = message;
    this.toast.className = "toast";
  }

  private onNodeClick(node: TreeNodeDoc): void {
    const uid = node.goal?.uid;
    if (uid !== null && uid !== undefined) {
      this.vm.selectGoal(uid);
    } else if (node.goal !== undefined) {
      this.vm.clearSelection(); // the always-true goal traces to nothing
    }
    if (node.state !== undefined) {
      this.vm.subscribeState(node.state.uid);
    }
    this.render();
  }

  private onGoalClick(uid: number): void {
    this.vm.selectGoal(uid);
    this.render();
  }

  render(): void {
    const vm = this.vm;
    const snapshot = vm.snapshot;
    this.stepLabel.textContent = snapshot === null ? "" : `step ${snapshot.step}`;
    this.ruleLabel.textContent =
      snapshot === null || snapshot.rule === null ? "" : snapshot.rule;
    if (snapshot !== null && snapshot.terminal) {
      this.ruleLabel.textContent = `${this.ruleLabel.textContent} (done)`.trim();
    }
    this.errorBanner.textContent = vm.error ?? "";
    this.errorBanner.className = vm.error === null ? "error-banner hidden" : "error-banner";
    for (const button of this.buttons) {
      button.disabled = vm.busy;
    }
    if (snapshot === null || vm.error !== null) {
      this.treePane.textContent = "";
      this.sourcePane.textContent = "";
      renderSidebar(this.sidebarPane, null);
      return;
    }
    renderTree(this.treePane, snapshot,
      { goalUids: vm.selectedGoalUids, stateUids: vm.subscribedStateUids },
      { onNodeClick: (node) => this.onNodeClick(node) });
    renderSource(this.sourcePane, vm.source, snapshot.source_map,
      vm.selectedGoalUids, { onGoalClick: (uid) => this.onGoalClick(uid) });
    renderSidebar(this.sidebarPane, vm.inspectedState(),
      { onTrailGoalClick: (uid) => this.onGoalClick(uid) });
  }
}

export function mountApp(container: HTMLElement, backend: SteppingBackend,
                         initialSource = ""): App {
  const app = new App(container, backend);
  app.setSource(initialSource);
  return app;
}
