/**
 * UI state and the two rules every view change obeys:
 * the displayed revision never decreases, and a search response is only
 * applied when it is at least as new as what the user already saw.
 */

import type { MismatchReportJson, SearchResponse } from "./api.js";

export interface UiState {
  domain: string;
  query: string;
  lastOutcome: SearchResponse | null;
  banner: MismatchReportJson | null;
  selectedNodeId: number | null;
  revision: number;
  adminEnabled: boolean;
  mutationInFlight: boolean;
}

export function initialState(domain: string): UiState {
  return {
    domain,
    query: "",
    lastOutcome: null,
    banner: null,
    selectedNodeId: null,
    revision: 0,
    adminEnabled: false,
    mutationInFlight: false,
  };
}

/** Raise the watermark; revisions observed out of order never lower it. */
export function observeRevision(state: UiState, revision: number): void {
  if (revision > state.revision) state.revision = revision;
}

/** Overlapping searches may resolve out of order; stale ones are dropped. */
export function shouldApplySearch(state: UiState, response: SearchResponse): boolean {
  return response.revision >= state.revision;
}

export function applySearch(state: UiState, response: SearchResponse): boolean {
  if (!shouldApplySearch(state, response)) return false;
  state.lastOutcome = response;
  state.banner = response.outcome === "needsPurification" ? response.report : null;
  observeRevision(state, response.revision);
  return true;
}
