/**
 * Typed client for the parameter service. Wire shapes use the server's
 * snake_case field names verbatim; nothing is remapped on the way through.
 */

import type { FxType, ParamMap } from "./schema.js";

export interface FixtureInfo {
  name: string;
  duration: number;
  sample_rate: number;
  url: string;
}

export type FeatureMap = Record<string, number>;

export interface GenerateBody {
  word: string;
  instrument: string;
  fx_type: FxType;
  seed?: number;
  fewshot?: boolean;
  code?: boolean;
  features?: FeatureMap | null;
}

/**
 * Generated parameters arrive nested under their effect-type key, e.g.
 * {"reverb": {...25 fields}}. The render endpoint accepts both that wrapped
 * form and the flat field object the table serializes.
 */
export interface GenerateReply {
  params: Record<string, ParamMap>;
  clamped_fields: string[];
  transcript_id: string;
}

export interface ResponseCurve {
  freq_hz: number[];
  gain_db: number[];
}

export interface RenderMetadata {
  clipped: boolean;
  seed: number;
  fx_type: string;
  response_curve?: ResponseCurve;
}

export interface TranscriptRecord {
  id: string;
  word: string;
  instrument: string;
  fx_type: string;
  seed: number;
  prompt_transcript: string;
  raw_text: string;
  params: ParamMap;
}

export class ApiError extends Error {
  constructor(
    public readonly code: string,
    message: string,
    public readonly status: number,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

async function toError(res: Response): Promise<ApiError> {
  let code = `HTTP${res.status}`;
  let message = res.statusText || `request failed with status ${res.status}`;
  try {
    const body = await res.json();
    if (body && typeof body.error === "string") {
      code = body.error;
      message = typeof body.message === "string" ? body.message : message;
    }
  } catch {
    // Non-JSON error body; keep the HTTP fallback.
  }
  return new ApiError(code, message, res.status);
}

export class Client {
  constructor(private readonly base: string = "") {}

  private async request(path: string, init?: RequestInit): Promise<Response> {
    const res = await fetch(this.base + path, init);
    if (!res.ok) throw await toError(res);
    return res;
  }

  async health(): Promise<boolean> {
    try {
      await this.request("/api/health");
      return true;
    } catch {
      return false;
    }
  }

  async fixtures(): Promise<FixtureInfo[]> {
    const res = await this.request("/api/fixtures");
    return res.json();
  }

  async fixture(name: string, signal?: AbortSignal): Promise<ArrayBuffer> {
    const res = await this.request(`/api/fixtures/${encodeURIComponent(name)}`, { signal });
    return res.arrayBuffer();
  }

  async generate(body: GenerateBody, signal?: AbortSignal): Promise<GenerateReply> {
    const res = await this.request("/api/generate", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
      signal,
    });
    return res.json();
  }

  /**
   * Render a clip. `paramsJson` is the exact serialized table contents; it is
   * sent unchanged so what you see is what the renderer validates.
   */
  async render(
    wav: ArrayBuffer,
    paramsJson: string,
    seed: number,
    signal?: AbortSignal,
  ): Promise<{ wav: ArrayBuffer; metadata: RenderMetadata | null }> {
    const form = new FormData();
    form.append("file", new Blob([wav], { type: "audio/wav" }), "clip.wav");
    form.append("params", paramsJson);
    form.append("seed", String(seed));
    const res = await this.request("/api/render", { method: "POST", body: form, signal });
    const header = res.headers.get("X-Render-Metadata");
    const metadata = header ? (JSON.parse(header) as RenderMetadata) : null;
    return { wav: await res.arrayBuffer(), metadata };
  }

  async features(wav: ArrayBuffer, signal?: AbortSignal): Promise<FeatureMap> {
    const form = new FormData();
    form.append("file", new Blob([wav], { type: "audio/wav" }), "clip.wav");
    const res = await this.request("/api/features", { method: "POST", body: form, signal });
    return res.json();
  }

  async transcript(id: string): Promise<TranscriptRecord> {
    const res = await this.request(`/api/transcripts/${encodeURIComponent(id)}`);
    return res.json();
  }
}
