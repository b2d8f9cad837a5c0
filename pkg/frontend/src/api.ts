// Typed client for the retrieval service HTTP API.
//
// The fetch implementation is injectable so headless tests can drive a
// real server from Node while the browser build uses window.fetch.

export interface SearchHit {
  frame_id: number;
  video_id: number;
  video_name: string;
  combined: number;
  per_feature: Record<string, number>;
  image_url: string;
}

export interface VideoInfo {
  v_id: number;
  v_name: string;
  ingested_at: string;
  keyframe_ids: number[];
  key_frames_kept: number;
}

export interface IngestReport {
  v_id: number;
  frames_in: number;
  key_frames_kept: number;
  per_frame_timings_ms: number[];
}

export interface SearchOptions {
  k: number;
  weights: number[] | null;
  exhaustive: boolean;
  signal?: AbortSignal;
}

export class ApiError extends Error {
  constructor(public status: number, public code: string, detail: string) {
    super(detail);
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

async function asApiError(resp: Response): Promise<ApiError> {
  let code = `HTTP ${resp.status}`;
  let detail = resp.statusText;
  try {
    const body = (await resp.json()) as { error?: string; detail?: string };
    if (body.error) code = body.error;
    if (body.detail) detail = body.detail;
  } catch {
    // non-JSON error body; keep the status text
  }
  return new ApiError(resp.status, code, detail);
}

export class ApiClient {
  constructor(
    private baseUrl: string = "",
    private fetchImpl: FetchLike = (input, init) => globalThis.fetch(input, init),
  ) {}

  private url(path: string): string {
    return this.baseUrl + path;
  }

  // Search stays open (no token). The documented GET verb cannot carry a
  // multipart body from a browser, so the UI uses the POST alias.
  async search(query: Blob, opts: SearchOptions): Promise<SearchHit[]> {
    const form = new FormData();
    form.append("query", query, "query.png");
    form.append("k", String(opts.k));
    if (opts.weights) form.append("weights", opts.weights.join(","));
    form.append("exhaustive", opts.exhaustive ? "true" : "false");
    const resp = await this.fetchImpl(this.url("/api/search"), {
      method: "POST",
      body: form,
      signal: opts.signal,
    });
    if (!resp.ok) throw await asApiError(resp);
    const body = (await resp.json()) as { results: SearchHit[] };
    return body.results;
  }

  async listVideos(): Promise<VideoInfo[]> {
    const resp = await this.fetchImpl(this.url("/api/videos"));
    if (!resp.ok) throw await asApiError(resp);
    const body = (await resp.json()) as { videos: VideoInfo[] };
    return body.videos;
  }

  async ingestVideo(name: string, frames: Blob[], names: string[], token: string): Promise<IngestReport> {
    const form = new FormData();
    form.append("name", name);
    frames.forEach((blob, i) => form.append("frames", blob, names[i] ?? `frame${i}.ppm`));
    const resp = await this.fetchImpl(this.url("/api/videos"), {
      method: "POST",
      body: form,
      headers: { "X-Admin-Token": token },
    });
    if (!resp.ok) throw await asApiError(resp);
    return (await resp.json()) as IngestReport;
  }

  async deleteVideo(vId: number, token: string): Promise<void> {
    const resp = await this.fetchImpl(this.url(`/api/videos/${vId}`), {
      method: "DELETE",
      headers: { "X-Admin-Token": token },
    });
    if (!resp.ok) throw await asApiError(resp);
  }

  frameImageUrl(frameId: number): string {
    return this.url(`/api/frames/${frameId}/image`);
  }

  async fetchFrameBlob(frameId: number): Promise<Blob> {
    const resp = await this.fetchImpl(this.frameImageUrl(frameId));
    if (!resp.ok) throw await asApiError(resp);
    return await resp.blob();
  }
}
