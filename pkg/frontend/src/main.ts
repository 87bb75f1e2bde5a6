/** Browser bootstrap. */
import { resolveBaseUrl, TutorApi } from "./api.js";
import { App } from "./app.js";

const root = document.getElementById("app");
if (!root) {
  throw new Error("missing #app mount point");
}
const api = new TutorApi(resolveBaseUrl(window));
const app = new App(root, api, window.location);
void app.start();
