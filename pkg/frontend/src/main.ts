import { ApiClient } from "./api.js";
import { mountApp } from "./app.js";

declare global {
  interface Window {
    ONTOPURE_BASE_URL?: string;
  }
}

const root = document.getElementById("app");
if (root) {
  void mountApp(root, new ApiClient(window.ONTOPURE_BASE_URL ?? ""));
}
