/** Wire types mirroring the lawmap session service JSON. */

export interface MapSummary {
  id: string;
  title: string;
}

export interface SourceRef {
  kind: "Statute" | "CaseLaw" | "PracticeRule" | "Text";
  act?: string;
  sectionPath?: string[];
  citation?: string;
  quote?: string;
  rule?: string;
  text?: string;
}

export interface Explanation {
  kind: string;
  text: string;
}

export interface MapNode {
  id: string;
  kind: string;
  label?: string;
  prompt?: string;
  outcome?: string;
  lane?: string;
  nestedRef?: string;
  explanations: Explanation[];
  refs: SourceRef[];
}

export interface MapDoc {
  id: string;
  title: string;
  nodes: MapNode[];
  refs?: SourceRef[];
}

export interface MapSet {
  root: string;
  docs: Record<string, MapDoc>;
}

export type RouteStatus = "Complete" | "AwaitingDecision" | "Blocked";

export interface CompletedStep {
  node: string;
  index: number;
}

export interface PendingDecision {
  node: string;
  prompt?: string;
  options: string[];
}

export interface BlockedNode {
  node: string;
  waitingOn: string[];
}

export interface ReachedExit {
  node: string;
  outcome: string;
}

export interface Route {
  status: RouteStatus;
  completed: CompletedStep[];
  pending: PendingDecision[];
  blocked: BlockedNode[];
  reachedExits: ReachedExit[];
}

export interface SessionInfo {
  sessionId: string;
  mapId: string;
  mode: string;
  route: Route;
}

export interface ApiErrorBody {
  code: string;
  message: string;
  details?: Record<string, unknown>;
}
