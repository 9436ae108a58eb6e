/** Thin fetch client; every number on screen originates here. */

import type { Envelope, HeatmapPayload, SeasonReport, TeamInfo, WhatIfRequest } from "./types.js";

export class ApiError extends Error {
  constructor(readonly status: number, detail: string) {
    super(detail);
  }
}

async function unwrap<T>(response: Response): Promise<T> {
  if (!response.ok) {
    let detail = `${response.status} ${response.statusText}`;
    try {
      const body = await response.json();
      if (body && body.detail) detail = JSON.stringify(body.detail);
    } catch {
      /* non-JSON error body: keep the status line */
    }
    throw new ApiError(response.status, detail);
  }
  const envelope = (await response.json()) as Envelope<T>;
  return envelope.data;
}

export class ApiClient {
  /** base is "" when the UI is served by the API process itself. */
  constructor(readonly base: string = "") {}

  async teams(): Promise<TeamInfo[]> {
    return unwrap(await fetch(`${this.base}/teams`));
  }

  async heatmap(
    teamId: string,
    analysis: string,
    k?: number,
    signal?: AbortSignal,
  ): Promise<HeatmapPayload> {
    const params = new URLSearchParams({ analysis });
    if (k !== undefined) params.set("k", String(k));
    return unwrap(
      await fetch(`${this.base}/teams/${encodeURIComponent(teamId)}/heatmap?${params}`, { signal }),
    );
  }

  async whatIf(teamId: string, request: WhatIfRequest, signal?: AbortSignal): Promise<SeasonReport> {
    return unwrap(
      await fetch(`${this.base}/teams/${encodeURIComponent(teamId)}/whatif`, {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify(request),
        signal,
      }),
    );
  }
}
