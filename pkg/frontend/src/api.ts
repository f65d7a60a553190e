/**
 * Backend access. The UI talks to exactly one interface so tests can
 * substitute a fixture-replaying stub for the HTTP service.
 */
import type { Diagnostic, Snapshot } from "./types.js";

export interface CreateResult {
  id: string;
  snapshot: Snapshot;
}

export class DiagnosticsError extends Error {
  constructor(public diagnostics: Diagnostic[]) {
    super(diagnostics.map((d) => `${d.code}: ${d.message}`).join("; "));
  }
}

export interface SteppingBackend {
  createSession(source: string, rules: string): Promise<CreateResult>;
  step(id: string): Promise<Snapshot>;
  back(id: string): Promise<Snapshot>;
  reset(id: string, rules?: string): Promise<Snapshot>;
  current(id: string): Promise<Snapshot>;
  rulesets(): Promise<string[]>;
}

export class HttpBackend implements SteppingBackend {
  constructor(private baseUrl: string = "") {}

  private async post(path: string, body?: unknown): Promise<Response> {
    const response = await fetch(this.baseUrl + path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    if (response.status === 422) {
      const doc = (await response.json()) as { diagnostics: Diagnostic[] };
      throw new DiagnosticsError(doc.diagnostics);
    }
    if (!response.ok) {
      throw new Error(`${path} failed: ${response.status}`);
    }
    return response;
  }

  async createSession(source: string, rules: string): Promise<CreateResult> {
    const response = await this.post("/api/session", { source, rules });
    return (await response.json()) as CreateResult;
  }

  async step(id: string): Promise<Snapshot> {
    return (await (await this.post(`/api/session/${id}/step`)).json()) as Snapshot;
  }

  async back(id: string): Promise<Snapshot> {
    return (await (await this.post(`/api/session/${id}/back`)).json()) as Snapshot;
  }

  async reset(id: string, rules?: string): Promise<Snapshot> {
    const body = rules === undefined ? {} : { rules };
    return (await (await this.post(`/api/session/${id}/reset`, body)).json()) as Snapshot;
  }

  async current(id: string): Promise<Snapshot> {
    const response = await fetch(`${this.baseUrl}/api/session/${id}`);
    if (!response.ok) {
      throw new Error(`session fetch failed: ${response.status}`);
    }
    return (await response.json()) as Snapshot;
  }

  async rulesets(): Promise<string[]> {
    const response = await fetch(`${this.baseUrl}/api/rulesets`);
    return (await response.json()) as string[];
  }
}
