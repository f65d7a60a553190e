/**
 * UI contract tests against recorded snapshot fixtures replayed by the
 * stub backend; no engine process is involved.
 */
import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";
import { beforeEach, describe, expect, it } from "vitest";

import { mountApp, App } from "../src/app.js";
import { glyphFor, renderTree } from "../src/renderTree.js";
import { FixtureBackend, type Fixture } from "../src/stubServer.js";
import type { Snapshot, TreeNodeDoc } from "../src/types.js";

const here = dirname(fileURLToPath(import.meta.url));

function loadFixture(name: string): Fixture {
  const raw = readFileSync(join(here, "..", "fixtures", `${name}.trace.json`), "utf-8");
  return JSON.parse(raw) as Fixture;
}

const sameCat = loadFixture("same_cat");
const twoPets = loadFixture("two_pets");
const appendFixed = loadFixture("append_fixed");

function freshApp(fixture: Fixture): { app: App; container: HTMLElement } {
  const container = document.createElement("div");
  document.body.appendChild(container);
  const app = mountApp(container, new FixtureBackend(fixture), fixture.source);
  return { app, container };
}

function click(element: Element | null): void {
  expect(element).not.toBeNull();
  (element as HTMLElement).dispatchEvent(new MouseEvent("click", { bubbles: true }));
}

beforeEach(() => {
  document.body.textContent = "";
});

describe("stepping controls", () => {
  it("shows the step count and rule names of the golden trace", async () => {
    const { app, container } = freshApp(sameCat);
    await app.start();
    expect(container.querySelector(".step-count")?.textContent).toBe("step 0");
    expect(container.querySelector(".last-rule")?.textContent).toBe("");

    const sequence: Array<string | null> = [];
    for (let i = 1; i <= 5; i++) {
      await app.stepForward();
      expect(container.querySelector(".step-count")?.textContent).toBe(`step ${i}`);
      sequence.push(app.vm.snapshot?.rule ?? null);
    }
    expect(sequence).toEqual([
      "SubstFresh", "Delay", "InvokeDelay", "Proceed", "UnifySucc",
    ]);
    expect(container.querySelector(".last-rule")?.textContent).toBe("UnifySucc (done)");
  });

  it("stepping back rewinds and stepping past the end is a no-op", async () => {
    const { app, container } = freshApp(sameCat);
    await app.start();
    for (let i = 0; i < 5; i++) {
      await app.stepForward();
    }
    await app.stepForward(); // already terminal
    expect(container.querySelector(".step-count")?.textContent).toBe("step 5");
    await app.stepBack();
    expect(container.querySelector(".step-count")?.textContent).toBe("step 4");
    await app.stepBack();
    expect(container.querySelector(".step-count")?.textContent).toBe("step 3");
  });

  it("back at step zero stays put", async () => {
    const { app, container } = freshApp(sameCat);
    await app.start();
    await app.stepBack();
    expect(container.querySelector(".step-count")?.textContent).toBe("step 0");
  });

  it("reset returns to step zero", async () => {
    const { app, container } = freshApp(sameCat);
    await app.start();
    await app.stepForward();
    await app.stepForward();
    await app.reset();
    expect(container.querySelector(".step-count")?.textContent).toBe("step 0");
  });

  it("a failing backend raises a toast and keeps the view", async () => {
    const { app, container } = freshApp(sameCat);
    await app.start();
    await app.stepForward();
    const broken = app as unknown as { backend: { step(): Promise<Snapshot> } };
    broken.backend.step = async () => {
      throw new Error("network down");
    };
    await app.stepForward();
    expect(container.querySelector(".toast")?.classList.contains("hidden")).toBe(false);
    expect(container.querySelector(".toast")?.textContent).toContain("network down");
    expect(container.querySelector(".step-count")?.textContent).toBe("step 1");
  });

  it("rejects snapshots with an unsupported schema version", async () => {
    const mutated: Fixture = JSON.parse(JSON.stringify(sameCat)) as Fixture;
    for (const snapshot of mutated.snapshots) {
      snapshot.version = 99;
    }
    const { app, container } = freshApp(mutated);
    await app.start();
    const banner = container.querySelector(".error-banner");
    expect(banner?.classList.contains("hidden")).toBe(false);
    expect(banner?.textContent).toContain("99");
  });
});

describe("tree rendering", () => {
  function glyphsAcross(fixture: Fixture): Set<string> {
    const glyphs = new Set<string>();
    const container = document.createElement("div");
    for (const snapshot of fixture.snapshots) {
      renderTree(container, snapshot, { goalUids: new Set(), stateUids: new Set() });
      for (const node of container.querySelectorAll("[data-glyph]")) {
        glyphs.add(node.getAttribute("data-glyph")!);
      }
    }
    return glyphs;
  }

  it("renders one glyph per node kind present in the recorded traces", () => {
    const sameCatGlyphs = glyphsAcross(sameCat);
    expect(sameCatGlyphs).toContain("text"); // relation call / fresh / unification
    expect(sameCatGlyphs).toContain("delay");
    expect(sameCatGlyphs).toContain("go");
    expect(sameCatGlyphs).toContain("success");

    const twoPetsGlyphs = glyphsAcross(twoPets);
    expect(twoPetsGlyphs).toContain("tree-disj");
    expect(twoPetsGlyphs).toContain("goal-disj");
    expect(twoPetsGlyphs).toContain("plus");
    expect(twoPetsGlyphs).toContain("answer");

    const appendGlyphs = glyphsAcross(appendFixed);
    expect(appendGlyphs).toContain("tree-conj");
    expect(appendGlyphs).toContain("goal-conj");
    expect(appendGlyphs).toContain("failure");
  });

  it("pointed disjunctions expose their orientation", () => {
    const container = document.createElement("div");
    for (const snapshot of twoPets.snapshots) {
      renderTree(container, snapshot, { goalUids: new Set(), stateUids: new Set() });
      for (const node of container.querySelectorAll('[data-glyph="tree-disj"]')) {
        const kind = node.getAttribute("data-kind");
        const orient = node.getAttribute("data-orient");
        expect(orient).toBe(kind === "disj_left" ? "left" : "right");
      }
    }
  });

  it("marks stateful nodes, go nodes, and the active spine", async () => {
    const { app, container } = freshApp(sameCat);
    await app.start();
    await app.stepForward();
    await app.stepForward(); // delay(go(...)) shape
    const goMarked = container.querySelector(".tree-container .go-marked");
    expect(goMarked).not.toBeNull();
    const stateful = container.querySelectorAll(".tree-container .stateful");
    expect(stateful.length).toBeGreaterThan(0);

    // an active edge needs the redex strictly below the root; the
    // two-branch trace has such states
    const scratch = document.createElement("div");
    let sawActiveEdge = false;
    for (const snapshot of twoPets.snapshots) {
      renderTree(scratch, snapshot, { goalUids: new Set(), stateUids: new Set() });
      if (snapshot.focus_path.length > 0) {
        expect(scratch.querySelector(".active-edge")).not.toBeNull();
        sawActiveEdge = true;
      }
    }
    expect(sawActiveEdge).toBe(true);
  });

  it("answer glyphs carry the reified value as a hover tooltip", () => {
    const container = document.createElement("div");
    const last = twoPets.snapshots[twoPets.snapshots.length - 1]!;
    renderTree(container, last, { goalUids: new Set(), stateUids: new Set() });
    const answer = container.querySelector('[data-glyph="answer"] title');
    expect(answer?.textContent).toBe("cat");
  });

  it("is a pure function of snapshot and selection", () => {
    const container1 = document.createElement("div");
    const container2 = document.createElement("div");
    const snapshot = twoPets.snapshots[7]!;
    const selection = { goalUids: new Set([1]), stateUids: new Set([5]) };
    renderTree(container1, snapshot, selection);
    renderTree(container2, snapshot, selection);
    expect(container1.innerHTML).toBe(container2.innerHTML);
    renderTree(container2, snapshot, selection); // re-render in place
    expect(container2.innerHTML).toBe(container1.innerHTML);
  });

  it("revisited steps re-render identically from replayed snapshots", async () => {
    const { app, container } = freshApp(twoPets);
    await app.start();
    const byStep = new Map<number, string>();
    for (let i = 0; i < 6; i++) {
      await app.stepForward();
      byStep.set(app.vm.snapshot!.step, container.querySelector(".tree-container")!.innerHTML);
    }
    await app.stepBack();
    await app.stepBack();
    await app.stepForward();
    const step = app.vm.snapshot!.step;
    expect(container.querySelector(".tree-container")!.innerHTML).toBe(byStep.get(step));
  });
});

describe("source and tree tracing", () => {
  function findRelcallNode(app: App): { uid: number; element: Element } {
    let found: { uid: number; element: Element } | null = null;
    const nodes = document.querySelectorAll(".tree-container [data-goal-uid]");
    for (const element of nodes) {
      const kind = element.getAttribute("data-kind");
      if (kind === "leaf") {
        const uid = Number(element.getAttribute("data-goal-uid"));
        const snapshot = app.vm.snapshot!;
        const spanText = spanTextOf(app, uid);
        if (spanText.startsWith("(same")) {
          found = { uid, element };
          break;
        }
        void snapshot;
      }
    }
    expect(found).not.toBeNull();
    return found!;
  }

  function spanTextOf(app: App, uid: number): string {
    const span = app.vm.snapshot!.source_map.goals[String(uid)]!;
    return app.vm.source.slice(span.start.offset, span.end.offset);
  }

  it("clicking the relation-call tree node highlights its source span", async () => {
    const { app, container } = freshApp(sameCat);
    await app.start();
    await app.stepForward();
    await app.stepForward(); // relation call suspended under go
    const { uid, element } = findRelcallNode(app);
    expect(spanTextOf(app, uid)).toBe("(same p 'cat)");
    click(element);
    const marked = container.querySelector(`.source-container [data-goal-uid="${uid}"]`);
    expect(marked?.classList.contains("selected")).toBe(true);
    expect(marked?.textContent).toBe("(same p 'cat)");
  });

  it("clicking a source span highlights the matching tree nodes", async () => {
    const { app, container } = freshApp(sameCat);
    await app.start();
    await app.stepForward();
    await app.stepForward();
    const { uid } = findRelcallNode(app);
    click(container.querySelector(`.source-container [data-goal-uid="${uid}"]`));
    const treeNode = container.querySelector(`.tree-container [data-goal-uid="${uid}"]`);
    expect(treeNode?.classList.contains("selected")).toBe(true);
  });

  it("the expanded relation body traces back to the defrel source", async () => {
    const { app, container } = freshApp(sameCat);
    await app.start();
    for (let i = 0; i < 4; i++) {
      await app.stepForward(); // Proceed substitutes the body
    }
    const leaf = container.querySelector('.tree-container [data-kind="leaf"]');
    const uid = Number(leaf!.getAttribute("data-goal-uid"));
    expect(spanTextOf(app, uid)).toBe("(== x y)");
    click(leaf);
    const marked = container.querySelector(`.source-container [data-goal-uid="${uid}"].selected`);
    expect(marked?.textContent).toBe("(== x y)");
  });

  it("the always-true goal traces to nothing", async () => {
    const { app, container } = freshApp(sameCat);
    await app.start();
    for (let i = 0; i < 5; i++) {
      await app.stepForward();
    }
    const leaf = container.querySelector('.tree-container [data-kind="leaf"]');
    expect(leaf!.getAttribute("data-goal-uid")).toBeNull();
    click(leaf);
    expect(container.querySelectorAll(".source-container .selected").length).toBe(0);
  });
});

describe("state inspection", () => {
  it("clicking a stateful node opens the sidebar with substitution and trail", async () => {
    const { app, container } = freshApp(sameCat);
    await app.start();
    for (let i = 0; i < 5; i++) {
      await app.stepForward();
    }
    click(container.querySelector('.tree-container [data-kind="leaf"]'));
    const rows = [...container.querySelectorAll(".sidebar .substitution li")]
      .map((row) => row.textContent);
    expect(rows).toEqual(["#(0) ↦ cat"]);
    expect(container.querySelector(".sidebar .reified")?.textContent).toBe("reified: cat");
    const trail = [...container.querySelectorAll(".sidebar .trail-row")];
    expect(trail.length).toBe(1);
    expect(trail[0]!.textContent).toBe("#(0) ≡ cat");
  });

  it("clicking a trail row highlights the unification's source span", async () => {
    const { app, container } = freshApp(sameCat);
    await app.start();
    for (let i = 0; i < 5; i++) {
      await app.stepForward();
    }
    click(container.querySelector('.tree-container [data-kind="leaf"]'));
    const row = container.querySelector(".sidebar .trail-row")!;
    const uid = Number(row.getAttribute("data-goal-uid"));
    click(row);
    const marked = container.querySelector(
      `.source-container [data-goal-uid="${uid}"].selected`);
    expect(marked?.textContent).toBe("(== x y)");
  });

  it("a subscribed state stays highlighted across steps", async () => {
    const { app, container } = freshApp(twoPets);
    await app.start();
    await app.stepForward(); // SubstFresh
    await app.stepForward(); // DistrDisj: two stateful leaves now
    const stateful = container.querySelector(".tree-container .stateful")!;
    const uid = stateful.getAttribute("data-state-uid")!;
    click(stateful);
    expect(container.querySelector(
      `.tree-container [data-state-uid="${uid}"]`)!.classList.contains("selected")).toBe(true);
    await app.stepForward();
    await app.stepForward();
    const still = container.querySelector(`.tree-container [data-state-uid="${uid}"]`);
    expect(still).not.toBeNull();
    expect(still!.classList.contains("selected")).toBe(true);
  });
});
