/**
 * Snapshot wire format (version 1) exchanged with the stepping service.
 */

export interface SpanPoint {
  line: number;
  col: number;
  offset: number;
}

export interface Span {
  start: SpanPoint;
  end: SpanPoint;
}

export type GoalKind = "top" | "unify" | "relcall" | "disj" | "conj" | "fresh";

export interface GoalView {
  uid: number | null; // null only for the always-true goal
  kind: GoalKind;
  text: string;
  span: Span | null;
}

export interface SubstEntry {
  var: string;
  term: string;
}

export interface TrailRow {
  left: string;
  right: string;
  goal_uid: number;
}

export interface StateView {
  uid: number;
  counter: number;
  substitution: SubstEntry[];
  trail: TrailRow[];
  reified: string;
}

export type NodeKind =
  | "empty"
  | "leaf"
  | "disj_left"
  | "disj_right"
  | "plus"
  | "conj"
  | "delay"
  | "go";

export interface NodeFlags {
  on_active_spine: boolean;
  go_marked: boolean;
}

export interface TreeNodeDoc {
  kind: NodeKind;
  flags: NodeFlags;
  children: TreeNodeDoc[];
  goal?: GoalView;
  state?: StateView;
}

export interface StateOrigin {
  rule: string | null;
  step: number;
  parent: number | null;
}

export interface SourceMapDoc {
  goals: Record<string, Span>;
  states: Record<string, StateOrigin>;
}

export interface EventsDoc {
  minted_state_uids: number[];
  trail_entries: Array<TrailRow & { state_uid: number }>;
}

export interface QueryVarDoc {
  index: number;
  name: string;
}

export interface Snapshot {
  version: number;
  step: number;
  rule: string | null;
  terminal: boolean;
  ruleset: string;
  tree: TreeNodeDoc;
  answers: StateView[];
  focus_path: string[];
  events: EventsDoc;
  source_map: SourceMapDoc;
  query: { vars: QueryVarDoc[]; count: number | null };
}

export interface Diagnostic {
  code: string;
  message: string;
  start: { line: number; col: number };
  end: { line: number; col: number };
}

export const SUPPORTED_SNAPSHOT_VERSION = 1;
