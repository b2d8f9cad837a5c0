// Browser bootstrap: mount the app on #app against the same-origin API.

import { ApiClient } from "./api.js";
import { App } from "./app.js";

const root = document.getElementById("app");
if (!root) throw new Error("missing #app mount point");

const app = new App(root, new ApiClient(""));
if (location.hash === "#admin") app.setRoute("admin");
window.addEventListener("hashchange", () => {
  app.setRoute(location.hash === "#admin" ? "admin" : "search");
});
