/**
 * Left panel: query box, result rows with expandable crawl-down links,
 * and the mismatched-ontology banner when the local copy cannot answer.
 */

import type { SearchResultJson } from "./api.js";
import { clear, el } from "./dom.js";
import type { UiState } from "./state.js";

export interface SearchPanelHooks {
  onQuery(query: string): void;
  onSelect(id: number): void;
  onCrawl(label: string): void;
  childLabels(ids: number[]): Promise<Array<{ id: number; label: string }>>;
}

export class SearchPanel {
  private readonly input: HTMLInputElement;
  private readonly domainSelect: HTMLSelectElement;
  private readonly results: HTMLElement;
  private readonly banner: HTMLElement;
  private readonly error: HTMLElement;

  constructor(container: HTMLElement, private readonly hooks: SearchPanelHooks) {
    this.input = el("input", {
      id: "query",
      type: "search",
      placeholder: "Search the ontology…",
    });
    this.domainSelect = el("select", { id: "domain" });
    const button = el("button", { id: "search-button", type: "submit" }, ["Search"]);
    const form = el("form", { class: "search-form" }, [this.input, this.domainSelect, button]);
    form.addEventListener("submit", (event) => {
      event.preventDefault();
      this.hooks.onQuery(this.input.value);
    });
    this.banner = el("div", { id: "mismatch-banner", class: "banner", hidden: "" });
    this.error = el("div", { id: "search-error", class: "error", hidden: "" });
    this.results = el("div", { id: "results" });
    container.append(
      el("h2", {}, ["Search"]),
      form,
      this.banner,
      this.error,
      this.results,
    );
  }

  setDomains(domains: string[]): void {
    clear(this.domainSelect);
    for (const domain of domains) {
      this.domainSelect.append(el("option", { value: domain }, [domain]));
    }
  }

  showError(code: string, detail: string): void {
    this.error.hidden = false;
    this.error.textContent = `${code}: ${detail}`;
  }

  update(state: UiState): void {
    this.error.hidden = true;
    this.error.textContent = "";
    if (state.banner) {
      const { M, N, mi } = state.banner;
      this.banner.hidden = false;
      this.banner.textContent = `Mismatched ontology — ${M} of ${N} nodes diverge (mi = ${mi})`;
    } else {
      this.banner.hidden = true;
      this.banner.textContent = "";
    }

    clear(this.results);
    const outcome = state.lastOutcome;
    if (!outcome || state.banner) {
      if (!outcome && state.query) {
        this.results.append(el("p", { class: "empty" }, ["Results invalidated; search again."]));
      }
      return;
    }
    if (outcome.outcome === "noMatch") {
      this.results.append(el("p", { class: "empty" }, ["No match in this domain."]));
      return;
    }
    for (const result of outcome.results) {
      this.results.append(this.renderRow(result, state));
    }
  }

  private renderRow(result: SearchResultJson, state: UiState): HTMLElement {
    const row = el("div", {
      class: "result-row" + (state.selectedNodeId === result.id ? " selected" : ""),
      "data-node-id": String(result.id),
    });
    const select = el("button", { class: "path", type: "button" }, [
      result.path.join(" › "),
    ]);
    select.addEventListener("click", () => this.hooks.onSelect(result.id));
    row.append(
      select,
      el("span", { class: "score" }, [`score ${result.score}`]),
      el("span", { class: "node-id" }, [`#${result.id}`]),
    );
    if (result.links.length > 0) {
      const expand = el("button", { class: "expand", type: "button" }, [
        `▸ ${result.links.length} link${result.links.length > 1 ? "s" : ""}`,
      ]);
      const sub = el("div", { class: "links", hidden: "" });
      expand.addEventListener("click", () => {
        void this.expandLinks(result, expand, sub);
      });
      row.append(expand, sub);
    }
    return row;
  }

  private async expandLinks(
    result: SearchResultJson,
    expand: HTMLButtonElement,
    sub: HTMLElement,
  ): Promise<void> {
    if (!sub.hidden) {
      sub.hidden = true;
      return;
    }
    if (!sub.hasChildNodes()) {
      const children = await this.hooks.childLabels(result.links);
      for (const child of children) {
        const link = el("button", { class: "crawl", type: "button" }, [child.label]);
        link.addEventListener("click", () => this.hooks.onCrawl(child.label));
        sub.append(link);
      }
    }
    sub.hidden = false;
    expand.textContent = expand.textContent!.replace("▸", "▾");
  }
}
