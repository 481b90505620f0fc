/**
 * Right panel: token entry plus the three mutation forms and the purify
 * button. Forms stay disabled until a token probe succeeds; a 401 at any
 * point re-prompts for the token, a 409 lands inline next to the form
 * that caused it.
 */

import { clear, el } from "./dom.js";
import type { UiState } from "./state.js";

export type MutationForm = "insert" | "modify" | "delete" | "purify";

export interface AdminPanelHooks {
  onConnect(token: string): void;
  onInsert(parent: number, label: string, synonyms: string[], properties: Record<string, string>): void;
  onModify(id: number, deltas: { label?: string; synonyms?: string[]; properties?: Record<string, string> }): void;
  onDelete(id: number, policy: "subtree" | "reparent"): void;
  onPurify(): void;
}

function parseSynonyms(raw: string): string[] {
  return raw.split(",").map((s) => s.trim()).filter(Boolean);
}

function parseProperties(raw: string): Record<string, string> {
  const out: Record<string, string> = {};
  for (const piece of raw.split(",")) {
    const trimmed = piece.trim();
    if (!trimmed) continue;
    const eq = trimmed.indexOf("=");
    if (eq < 1) throw new Error(`properties use key=value, got ${trimmed!}`);
    out[trimmed.slice(0, eq).trim()] = trimmed.slice(eq + 1).trim();
  }
  return out;
}

export class AdminPanel {
  private readonly tokenInput: HTMLInputElement;
  private readonly tokenStatus: HTMLElement;
  private readonly fieldset: HTMLFieldSetElement;
  private readonly toast: HTMLElement;
  private readonly errors = new Map<MutationForm, HTMLElement>();
  private readonly insertParent: HTMLInputElement;
  private readonly modifyId: HTMLInputElement;
  private readonly deleteId: HTMLInputElement;
  private statusMessage: string | null = null;

  constructor(container: HTMLElement, private readonly hooks: AdminPanelHooks) {
    this.tokenInput = el("input", { id: "token", type: "password", placeholder: "admin token" });
    const connect = el("button", { id: "connect", type: "submit" }, ["Connect"]);
    this.tokenStatus = el("span", { id: "token-status" });
    const tokenForm = el("form", { class: "token-form" }, [this.tokenInput, connect, this.tokenStatus]);
    tokenForm.addEventListener("submit", (event) => {
      event.preventDefault();
      this.hooks.onConnect(this.tokenInput.value);
    });

    this.insertParent = el("input", { id: "insert-parent", type: "number", min: "1", placeholder: "parent id" });
    const insertLabel = el("input", { id: "insert-label", placeholder: "label" });
    const insertSynonyms = el("input", { id: "insert-synonyms", placeholder: "synonyms (comma separated)" });
    const insertProperties = el("input", { id: "insert-properties", placeholder: "properties (k=v, …)" });
    const insertForm = this.form("insert", "Insert element", [
      this.insertParent, insertLabel, insertSynonyms, insertProperties,
    ]);
    insertForm.addEventListener("submit", (event) => {
      event.preventDefault();
      try {
        this.hooks.onInsert(
          Number(this.insertParent.value),
          insertLabel.value,
          parseSynonyms(insertSynonyms.value),
          parseProperties(insertProperties.value),
        );
      } catch (error) {
        this.showError("insert", "BadInput", (error as Error).message);
      }
    });

    this.modifyId = el("input", { id: "modify-id", type: "number", min: "1", placeholder: "node id" });
    const modifyLabel = el("input", { id: "modify-label", placeholder: "new label (blank = keep)" });
    const modifySynonyms = el("input", { id: "modify-synonyms", placeholder: "synonyms (blank = keep)" });
    const modifyProperties = el("input", { id: "modify-properties", placeholder: "properties (blank = keep)" });
    const modifyForm = this.form("modify", "Modify element", [
      this.modifyId, modifyLabel, modifySynonyms, modifyProperties,
    ]);
    modifyForm.addEventListener("submit", (event) => {
      event.preventDefault();
      const deltas: { label?: string; synonyms?: string[]; properties?: Record<string, string> } = {};
      if (modifyLabel.value) deltas.label = modifyLabel.value;
      if (modifySynonyms.value) deltas.synonyms = parseSynonyms(modifySynonyms.value);
      try {
        if (modifyProperties.value) deltas.properties = parseProperties(modifyProperties.value);
        this.hooks.onModify(Number(this.modifyId.value), deltas);
      } catch (error) {
        this.showError("modify", "BadInput", (error as Error).message);
      }
    });

    this.deleteId = el("input", { id: "delete-id", type: "number", min: "1", placeholder: "node id" });
    const policy = el("select", { id: "delete-policy" }, [
      el("option", { value: "subtree" }, ["delete subtree"]),
      el("option", { value: "reparent" }, ["reparent children"]),
    ]);
    const deleteForm = this.form("delete", "Delete element", [this.deleteId, policy]);
    deleteForm.addEventListener("submit", (event) => {
      event.preventDefault();
      this.hooks.onDelete(Number(this.deleteId.value), policy.value as "subtree" | "reparent");
    });

    const purifyButton = el("button", { id: "purify", type: "button" }, ["Purify against reference"]);
    purifyButton.addEventListener("click", () => this.hooks.onPurify());
    const purifyError = el("span", { class: "error", "data-form": "purify" });
    this.errors.set("purify", purifyError);
    this.toast = el("div", { id: "toast", hidden: "" });

    this.fieldset = el("fieldset", { id: "admin-forms", disabled: "" }, [
      insertForm,
      modifyForm,
      deleteForm,
      el("div", { class: "purify-row" }, [purifyButton, purifyError]),
    ]);
    container.append(el("h2", {}, ["Administrator"]), tokenForm, this.fieldset, this.toast);
  }

  private form(name: MutationForm, title: string, fields: HTMLElement[]): HTMLFormElement {
    const error = el("span", { class: "error", "data-form": name });
    this.errors.set(name, error);
    const submit = el("button", { id: `${name}-submit`, type: "submit" }, [title]);
    return el("form", { class: "admin-form", "data-form": name }, [
      el("h3", {}, [title]),
      ...fields,
      submit,
      error,
    ]);
  }

  update(state: UiState): void {
    this.fieldset.disabled = !state.adminEnabled || state.mutationInFlight;
    if (state.adminEnabled) this.statusMessage = null;
    this.tokenStatus.textContent = state.adminEnabled
      ? "connected"
      : this.statusMessage ?? "enter token to connect";
    if (state.selectedNodeId !== null) {
      const selected = String(state.selectedNodeId);
      if (!this.insertParent.value) this.insertParent.value = selected;
      if (!this.modifyId.value) this.modifyId.value = selected;
      if (!this.deleteId.value) this.deleteId.value = selected;
    }
  }

  prefillSelection(id: number): void {
    const value = String(id);
    this.insertParent.value = value;
    this.modifyId.value = value;
    this.deleteId.value = value;
  }

  showError(form: MutationForm, code: string, detail: string): void {
    const slot = this.errors.get(form);
    if (slot) slot.textContent = `${code}: ${detail}`;
  }

  clearErrors(): void {
    for (const slot of this.errors.values()) slot.textContent = "";
  }

  reprompt(detail: string): void {
    this.statusMessage = `rejected (${detail}) — enter token again`;
    this.tokenStatus.textContent = this.statusMessage;
    this.tokenInput.value = "";
    this.tokenInput.focus();
  }

  showToast(message: string): void {
    this.toast.hidden = false;
    this.toast.textContent = message;
  }
}
