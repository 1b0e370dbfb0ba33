/** Typed fetch client for the editing service. Requests are serialized
 * per session so optimistic edits cannot race each other. */

import type {
  CameraDoc,
  DanceDoc,
  MutationResponse,
  Policy,
  Pose,
  SessionInfo,
} from "./types";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

interface TagOp {
  op: "add" | "remove" | "move";
  frame: number;
  to?: number;
  version?: number;
  policy?: Policy;
}

export class ApiClient {
  private queues = new Map<string, Promise<unknown>>();

  constructor(
    private readonly base: string,
    private readonly fetchFn: typeof fetch = fetch,
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method, headers: {} };
    if (body !== undefined) {
      init.headers = { "content-type": "application/json" };
      init.body = JSON.stringify(body);
    }
    const resp = await this.fetchFn(`${this.base}${path}`, init);
    if (!resp.ok) {
      let message = resp.statusText;
      try {
        const doc = (await resp.json()) as { error?: string };
        if (typeof doc.error === "string") message = doc.error;
      } catch {
        /* non-JSON error body; keep the status text */
      }
      throw new ApiError(resp.status, message);
    }
    if (resp.status === 204) return undefined as T;
    return (await resp.json()) as T;
  }

  /** Chain `fn` after any in-flight request for the same session. */
  private enqueue<T>(sid: string, fn: () => Promise<T>): Promise<T> {
    const prev = this.queues.get(sid) ?? Promise.resolve();
    const run = prev.catch(() => undefined).then(fn);
    this.queues.set(
      sid,
      run.catch(() => undefined),
    );
    return run;
  }

  async createSession(bundle: string, tags?: number[]): Promise<SessionInfo> {
    const body: { bundle: string; tags?: number[] } = { bundle };
    if (tags !== undefined) body.tags = tags;
    const doc = await this.request<{ session: SessionInfo }>("POST", "/api/sessions", body);
    return doc.session;
  }

  async getSession(sid: string): Promise<SessionInfo> {
    const doc = await this.request<{ session: SessionInfo }>("GET", `/api/sessions/${sid}`);
    return doc.session;
  }

  getCamera(sid: string): Promise<CameraDoc> {
    return this.request<CameraDoc>("GET", `/api/sessions/${sid}/camera`);
  }

  getDance(sid: string): Promise<DanceDoc> {
    return this.request<DanceDoc>("GET", `/api/sessions/${sid}/dance`);
  }

  tagOp(sid: string, op: TagOp): Promise<MutationResponse> {
    return this.enqueue(sid, () =>
      this.request<MutationResponse>("PATCH", `/api/sessions/${sid}/tags`, op),
    );
  }

  setPose(
    sid: string,
    frame: number,
    pose: Pose,
    version?: number,
    policy?: Policy,
  ): Promise<MutationResponse> {
    const body: { pose: Pose; version?: number; policy?: Policy } = { pose };
    if (version !== undefined) body.version = version;
    if (policy !== undefined) body.policy = policy;
    return this.enqueue(sid, () =>
      this.request<MutationResponse>("PATCH", `/api/sessions/${sid}/keyframes/${frame}`, body),
    );
  }

  clearPose(
    sid: string,
    frame: number,
    version?: number,
    policy?: Policy,
  ): Promise<MutationResponse> {
    const query = new URLSearchParams();
    if (version !== undefined) query.set("version", String(version));
    if (policy !== undefined) query.set("policy", policy);
    const suffix = query.size > 0 ? `?${query}` : "";
    return this.enqueue(sid, () =>
      this.request<MutationResponse>(
        "DELETE",
        `/api/sessions/${sid}/keyframes/${frame}${suffix}`,
      ),
    );
  }

  resynthesize(sid: string, version?: number): Promise<MutationResponse> {
    const body = version !== undefined ? { version } : {};
    return this.enqueue(sid, () =>
      this.request<MutationResponse>("POST", `/api/sessions/${sid}/resynthesize`, body),
    );
  }

  deleteSession(sid: string): Promise<void> {
    return this.enqueue(sid, () => this.request<void>("DELETE", `/api/sessions/${sid}`));
  }
}
