// Two-route single-page app: query-by-example search and admin ingest.
//
// All state lives in this class; render() rebuilds the DOM from state and
// rewires events. Every mutation of server state goes through ApiClient.

import { ApiClient, ApiError, IngestReport, SearchHit, VideoInfo } from "./api.js";
import { FEATURE_KINDS, FEATURE_LABELS, equalWeights, normalizeWeights } from "./weights.js";

export type Route = "search" | "admin";

export interface SearchState {
  queryBlob: Blob | null;
  queryName: string;
  queryPreviewUrl: string | null;
  k: number;
  weights: number[];
  exhaustive: boolean;
  results: SearchHit[] | null;
  sentWeights: number[] | null;
  error: string | null;
  busy: boolean;
}

export interface AdminState {
  token: string;
  name: string;
  files: File[];
  videos: VideoInfo[];
  report: IngestReport | null;
  error: string | null;
  pendingDelete: number | null;
  busy: boolean;
}

function esc(s: string): string {
  return s.replace(/[&<>"']/g, (c) => `&#${c.charCodeAt(0)};`);
}

export class App {
  route: Route = "search";
  search: SearchState = {
    queryBlob: null,
    queryName: "",
    queryPreviewUrl: null,
    k: 20,
    weights: equalWeights(),
    exhaustive: false,
    results: null,
    sentWeights: null,
    error: null,
    busy: false,
  };
  admin: AdminState = {
    token: "",
    name: "",
    files: [],
    videos: [],
    report: null,
    error: null,
    pendingDelete: null,
    busy: false,
  };
  // Promise of the most recent async action, so tests (and chained UI
  // handlers) can await completion after dispatching a DOM event.
  lastAction: Promise<void> = Promise.resolve();

  private abort: AbortController | null = null;

  constructor(private root: HTMLElement, private api: ApiClient) {
    this.render();
  }

  private get doc(): Document {
    return this.root.ownerDocument;
  }

  // -- actions: search ------------------------------------------------------

  setRoute(route: Route): void {
    this.route = route;
    if (route === "admin") {
      this.lastAction = this.refreshVideos();
    }
    this.render();
  }

  setQueryBlob(blob: Blob, name: string): void {
    this.search.queryBlob = blob;
    this.search.queryName = name;
    if (this.search.queryPreviewUrl) URL.revokeObjectURL(this.search.queryPreviewUrl);
    try {
      this.search.queryPreviewUrl = URL.createObjectURL(blob);
    } catch {
      this.search.queryPreviewUrl = null; // non-browser environments
    }
    this.render();
  }

  setWeight(index: number, value: number): void {
    this.search.weights[index] = value;
  }

  async submitSearch(): Promise<void> {
    const s = this.search;
    if (!s.queryBlob) {
      s.error = "select a query image first";
      this.render();
      return;
    }
    const weights = normalizeWeights(s.weights);
    if (!weights) {
      s.error = "weights must be non-negative and not all zero";
      this.render();
      return;
    }
    this.abort?.abort();
    this.abort = new AbortController();
    s.busy = true;
    s.error = null;
    this.render();
    try {
      s.results = await this.api.search(s.queryBlob, {
        k: s.k,
        weights,
        exhaustive: s.exhaustive,
        signal: this.abort.signal,
      });
      s.sentWeights = weights;
    } catch (e) {
      if ((e as Error).name === "AbortError") return;
      s.results = null;
      s.error = e instanceof ApiError && e.status === 409
        ? "the catalog is empty: ingest a video from the admin page first"
        : String((e as Error).message ?? e);
    } finally {
      s.busy = false;
      this.render();
    }
  }

  async useAsQuery(frameId: number): Promise<void> {
    const blob = await this.api.fetchFrameBlob(frameId);
    this.setQueryBlob(blob, `frame ${frameId}`);
    await this.submitSearch();
  }

  // -- actions: admin ---------------------------------------------------------

  async refreshVideos(): Promise<void> {
    try {
      this.admin.videos = await this.api.listVideos();
      this.admin.error = null;
    } catch (e) {
      this.admin.error = String((e as Error).message ?? e);
    }
    this.render();
  }

  setAdminToken(token: string): void {
    this.admin.token = token;
  }

  setAdminName(name: string): void {
    this.admin.name = name;
  }

  setAdminFiles(files: File[]): void {
    this.admin.files = files;
  }

  async submitIngest(): Promise<void> {
    const a = this.admin;
    if (!a.token) {
      a.error = "admin token required";
      this.render();
      return;
    }
    if (!a.name.trim() || a.files.length === 0) {
      a.error = "a video name and at least one frame file are required";
      this.render();
      return;
    }
    a.busy = true;
    a.error = null;
    this.render();
    try {
      a.report = await this.api.ingestVideo(
        a.name,
        a.files,
        a.files.map((f) => f.name),
        a.token,
      );
      a.name = "";
      a.files = [];
      await this.refreshVideos();
    } catch (e) {
      a.error = e instanceof ApiError && (e.status === 401 || e.status === 403)
        ? `authentication failed: ${e.message}`
        : String((e as Error).message ?? e);
    } finally {
      a.busy = false;
      this.render();
    }
  }

  requestDelete(vId: number): void {
    this.admin.pendingDelete = vId;
    this.render();
  }

  cancelDelete(): void {
    this.admin.pendingDelete = null;
    this.render();
  }

  async confirmDelete(): Promise<void> {
    const a = this.admin;
    if (a.pendingDelete === null) return;
    if (!a.token) {
      a.error = "admin token required";
      a.pendingDelete = null;
      this.render();
      return;
    }
    try {
      await this.api.deleteVideo(a.pendingDelete, a.token);
      a.pendingDelete = null;
      await this.refreshVideos();
    } catch (e) {
      a.error = String((e as Error).message ?? e);
      a.pendingDelete = null;
      this.render();
    }
  }

  // -- rendering --------------------------------------------------------------

  render(): void {
    this.root.innerHTML = `
      <header class="topbar">
        <span class="brand">framefinder</span>
        <nav>
          <button id="nav-search" class="${this.route === "search" ? "active" : ""}">Search</button>
          <button id="nav-admin" class="${this.route === "admin" ? "active" : ""}">Admin</button>
        </nav>
      </header>
      <main>${this.route === "search" ? this.renderSearch() : this.renderAdmin()}</main>
    `;
    this.wire();
  }

  private renderSearch(): string {
    const s = this.search;
    const sliders = FEATURE_KINDS.map(
      (kind, i) => `
        <label class="slider">
          <span>${FEATURE_LABELS[kind]}</span>
          <input type="range" min="0" max="1" step="0.01" value="${s.weights[i]}" data-weight="${i}">
        </label>`,
    ).join("");
    const preview = s.queryPreviewUrl
      ? `<img class="query-preview" src="${s.queryPreviewUrl}" alt="query preview">`
      : `<span class="hint">no query image selected</span>`;
    return `
      <section class="search-form">
        <div class="query-box">
          ${preview}
          <div>${esc(s.queryName)}</div>
          <input type="file" id="query-file" accept="image/*,.ppm,.pgm">
        </div>
        <div class="controls">
          <label>k <input type="number" id="k-input" min="1" value="${s.k}"></label>
          <label><input type="checkbox" id="exhaustive" ${s.exhaustive ? "checked" : ""}> exhaustive (skip index prefilter)</label>
          <div class="sliders">${sliders}</div>
          <button id="submit-search" ${s.busy ? "disabled" : ""}>Search</button>
        </div>
      </section>
      ${s.error ? `<p class="error" id="search-error">${esc(s.error)}</p>` : ""}
      ${this.renderResults()}
    `;
  }

  private renderResults(): string {
    const s = this.search;
    if (s.busy) return `<p class="hint">searching…</p>`;
    if (!s.results) return "";
    if (s.results.length === 0) return `<p class="hint">no results</p>`;
    const tiles = s.results
      .map((hit, rank) => {
        const breakdown = FEATURE_KINDS.map(
          (kind) => `<tr><td>${FEATURE_LABELS[kind]}</td><td>${hit.per_feature[kind].toFixed(4)}</td></tr>`,
        ).join("");
        return `
        <figure class="tile" data-frame-id="${hit.frame_id}">
          <img src="${this.api.frameImageUrl(hit.frame_id)}" alt="frame ${hit.frame_id}">
          <figcaption>
            <span class="rank">#${rank + 1}</span>
            <span class="video-name">${esc(hit.video_name)}</span>
            <span class="score" data-score="${hit.combined}">${hit.combined.toFixed(4)}</span>
          </figcaption>
          <details><summary>per-feature distances</summary>
            <table class="breakdown">${breakdown}</table>
          </details>
          <button class="use-as-query" data-frame-id="${hit.frame_id}">use as query</button>
        </figure>`;
      })
      .join("");
    return `<section class="results" id="results">${tiles}</section>`;
  }

  private renderAdmin(): string {
    const a = this.admin;
    const rows = a.videos
      .map(
        (v) => `
        <tr data-v-id="${v.v_id}">
          <td>${v.v_id}</td>
          <td>${esc(v.v_name)}</td>
          <td class="kept">${v.key_frames_kept}</td>
          <td>${esc(v.ingested_at)}</td>
          <td><button class="delete" data-v-id="${v.v_id}">delete</button></td>
        </tr>`,
      )
      .join("");
    const confirm = a.pendingDelete === null
      ? ""
      : `
        <div class="confirm" id="confirm-delete">
          <p>Delete video ${a.pendingDelete} and all its key frames?</p>
          <button id="confirm-yes">delete</button>
          <button id="confirm-no">cancel</button>
        </div>`;
    const report = a.report
      ? `<p class="report" id="ingest-report">video ${a.report.v_id}: ${a.report.frames_in} frames in, ${a.report.key_frames_kept} key frames kept</p>`
      : "";
    return `
      <section class="admin-form">
        <label>admin token <input type="password" id="admin-token" autocomplete="off"></label>
        <label>video name <input type="text" id="video-name" value="${esc(a.name)}"></label>
        <label>frames (ordered) <input type="file" id="frame-files" multiple></label>
        <button id="submit-ingest" ${a.busy ? "disabled" : ""}>Ingest</button>
      </section>
      ${a.error ? `<p class="error" id="admin-error">${esc(a.error)}</p>` : ""}
      ${report}
      ${confirm}
      <table class="videos" id="video-list">
        <thead><tr><th>id</th><th>name</th><th>key frames</th><th>ingested</th><th></th></tr></thead>
        <tbody>${rows}</tbody>
      </table>
    `;
  }

  private wire(): void {
    const byId = (id: string) => this.root.querySelector(`#${id}`) as HTMLElement | null;
    byId("nav-search")?.addEventListener("click", () => this.setRoute("search"));
    byId("nav-admin")?.addEventListener("click", () => this.setRoute("admin"));

    const queryFile = byId("query-file") as HTMLInputElement | null;
    queryFile?.addEventListener("change", () => {
      const f = queryFile.files?.[0];
      if (f) this.setQueryBlob(f, f.name);
    });
    const kInput = byId("k-input") as HTMLInputElement | null;
    kInput?.addEventListener("change", () => {
      this.search.k = Math.max(1, Number(kInput.value) || 1);
    });
    const exhaustive = byId("exhaustive") as HTMLInputElement | null;
    exhaustive?.addEventListener("change", () => {
      this.search.exhaustive = exhaustive.checked;
    });
    this.root.querySelectorAll("input[data-weight]").forEach((el) => {
      el.addEventListener("input", () => {
        const input = el as HTMLInputElement;
        this.setWeight(Number(input.dataset.weight), Number(input.value));
      });
    });
    byId("submit-search")?.addEventListener("click", () => {
      this.lastAction = this.submitSearch();
    });
    this.root.querySelectorAll("button.use-as-query").forEach((el) => {
      el.addEventListener("click", () => {
        const id = Number((el as HTMLElement).dataset.frameId);
        this.lastAction = this.useAsQuery(id);
      });
    });

    const token = byId("admin-token") as HTMLInputElement | null;
    token?.addEventListener("input", () => this.setAdminToken(token.value));
    const name = byId("video-name") as HTMLInputElement | null;
    name?.addEventListener("input", () => this.setAdminName(name.value));
    const files = byId("frame-files") as HTMLInputElement | null;
    files?.addEventListener("change", () => {
      this.setAdminFiles(Array.from(files.files ?? []));
    });
    byId("submit-ingest")?.addEventListener("click", () => {
      this.lastAction = this.submitIngest();
    });
    this.root.querySelectorAll("button.delete").forEach((el) => {
      el.addEventListener("click", () => {
        this.requestDelete(Number((el as HTMLElement).dataset.vId));
      });
    });
    byId("confirm-yes")?.addEventListener("click", () => {
      this.lastAction = this.confirmDelete();
    });
    byId("confirm-no")?.addEventListener("click", () => this.cancelDelete());
  }
}
