/**
 * Fixture-replaying backend: serves a recorded snapshot sequence with the
 * same forward/back/reset semantics as the live service. Lets the UI and
 * its tests run with no engine behind them.
 */
import type { CreateResult, SteppingBackend } from "./api.js";
import type { Snapshot } from "./types.js";

export interface Fixture {
  source: string;
  rules: string;
  snapshots: Snapshot[];
}

export class FixtureBackend implements SteppingBackend {
  private positions = new Map<string, number>();
  private nextId = 0;

  constructor(private fixture: Fixture) {
    if (fixture.snapshots.length === 0) {
      throw new Error("fixture has no snapshots");
    }
  }

  private at(id: string): number {
    const index = this.positions.get(id);
    if (index === undefined) {
      throw new Error("unknown session");
    }
    return index;
  }

  private snapshot(index: number): Snapshot {
    return this.fixture.snapshots[index] as Snapshot;
  }

  async createSession(_source: string, _rules: string): Promise<CreateResult> {
    const id = `fixture-${this.nextId++}`;
    this.positions.set(id, 0);
    return { id, snapshot: this.snapshot(0) };
  }

  async step(id: string): Promise<Snapshot> {
    const index = Math.min(this.at(id) + 1, this.fixture.snapshots.length - 1);
    this.positions.set(id, index);
    return this.snapshot(index);
  }

  async back(id: string): Promise<Snapshot> {
    const index = Math.max(this.at(id) - 1, 0);
    this.positions.set(id, index);
    return this.snapshot(index);
  }

  async reset(id: string, _rules?: string): Promise<Snapshot> {
    this.at(id);
    this.positions.set(id, 0);
    return this.snapshot(0);
  }

  async current(id: string): Promise<Snapshot> {
    return this.snapshot(this.at(id));
  }

  async rulesets(): Promise<string[]> {
    return ["interleaving", "dfs"];
  }
}
