/**
 * Wires the two panels to the API client. All ontology logic lives on the
 * server; this module only sequences requests and applies the
 * revision-monotonicity rules from state.ts.
 */

import { ApiClient, ApiError, type OntologyJson } from "./api.js";
import { AdminPanel, type MutationForm } from "./admin-panel.js";
import { clear, el } from "./dom.js";
import { SearchPanel } from "./search-panel.js";
import { applySearch, initialState, observeRevision, type UiState } from "./state.js";

export interface App {
  state: UiState;
  runSearch(query?: string): Promise<void>;
}

export async function mountApp(root: HTMLElement, client: ApiClient): Promise<App> {
  const ontology = await client.ontology();
  const state = initialState(ontology.domain);

  clear(root);
  const revisionBadge = el("span", { id: "revision" }, ["revision 0"]);
  const header = el("header", {}, [
    el("h1", {}, [`${ontology.domain} ontology`]),
    revisionBadge,
  ]);
  const searchSection = el("section", { id: "search-panel" });
  const adminSection = el("section", { id: "admin-panel" });
  root.append(header, el("main", { class: "panels" }, [searchSection, adminSection]));

  // Child labels for crawl-down rows come from /ontology, cached per revision.
  let labelCache: { revision: number; ontology: OntologyJson } | null = null;
  async function childLabels(ids: number[]): Promise<Array<{ id: number; label: string }>> {
    if (!labelCache || labelCache.revision !== state.revision) {
      labelCache = { revision: state.revision, ontology: await client.ontology() };
    }
    const byId = new Map(labelCache.ontology.nodes.map((n) => [n.id, n.label]));
    return ids
      .filter((id) => byId.has(id))
      .map((id) => ({ id, label: byId.get(id)! }));
  }

  function refresh(): void {
    revisionBadge.textContent = `revision ${state.revision}`;
    searchPanel.update(state);
    adminPanel.update(state);
  }

  async function runSearch(query?: string): Promise<void> {
    if (query !== undefined) state.query = query;
    const q = state.query.trim();
    if (!q) {
      state.lastOutcome = null;
      state.banner = null;
      refresh();
      return;
    }
    try {
      const response = await client.search(q, state.domain);
      if (applySearch(state, response)) refresh();
    } catch (error) {
      refresh();
      if (error instanceof ApiError) searchPanel.showError(error.code, error.detail);
      else searchPanel.showError("NetworkError", String(error));
    }
  }

  async function runMutation<T extends { revision: number }>(
    form: MutationForm,
    action: () => Promise<T>,
    describe: (response: T) => string,
  ): Promise<void> {
    if (state.mutationInFlight) return; // at most one in-flight mutation
    state.mutationInFlight = true;
    adminPanel.clearErrors();
    refresh();
    try {
      const response = await action();
      observeRevision(state, response.revision);
      adminPanel.showToast(`${describe(response)} (revision ${state.revision})`);
      // A revision change invalidates the results pane; re-run the current
      // search so the edit is visible without a reload.
      await runSearch();
    } catch (error) {
      if (error instanceof ApiError && error.status === 401) {
        state.adminEnabled = false;
        adminPanel.reprompt(error.detail);
      } else if (error instanceof ApiError) {
        adminPanel.showError(form, error.code, error.detail);
      } else {
        adminPanel.showError(form, "NetworkError", String(error));
      }
    } finally {
      state.mutationInFlight = false;
      refresh();
    }
  }

  const searchPanel = new SearchPanel(searchSection, {
    onQuery: (query) => void runSearch(query),
    onSelect: (id) => {
      state.selectedNodeId = id;
      adminPanel.prefillSelection(id);
      refresh();
    },
    onCrawl: (label) => {
      const input = searchSection.querySelector<HTMLInputElement>("#query");
      if (input) input.value = label;
      void runSearch(label);
    },
    childLabels,
  });
  searchPanel.setDomains([ontology.domain]);

  const adminPanel = new AdminPanel(adminSection, {
    onConnect: (token) => {
      client.token = token;
      void client
        .probeToken()
        .then(() => {
          state.adminEnabled = true;
          refresh();
        })
        .catch((error) => {
          state.adminEnabled = false;
          client.token = null;
          adminPanel.reprompt(error instanceof ApiError ? error.detail : String(error));
          refresh();
        });
    },
    onInsert: (parent, label, synonyms, properties) =>
      void runMutation(
        "insert",
        () => client.insertNode(parent, label, synonyms, properties),
        () => `inserted ${label}`,
      ),
    onModify: (id, deltas) =>
      void runMutation("modify", () => client.modifyNode(id, deltas), () => `modified #${id}`),
    onDelete: (id, policy) =>
      void runMutation(
        "delete",
        () => client.deleteNode(id, policy),
        () => `deleted #${id} (${policy})`,
      ),
    onPurify: () =>
      void runMutation(
        "purify",
        () => client.purify(),
        (response) => `${response.patchLog.length} patches applied`,
      ),
  });

  refresh();
  return { state, runSearch };
}
