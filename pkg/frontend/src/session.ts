/**
 * State for the describe/generate/audition loop.
 *
 * History is append-only: entries are never mutated or removed once pushed,
 * and each one records everything needed to reproduce its render byte for
 * byte (input clip, exact params JSON, seed). Current params are always
 * valid because every write path goes through the schema clamp.
 */

import {
  clampParams,
  neutralParams,
  serializeParams,
  specFor,
  clampValue,
  type FxType,
  type ParamMap,
} from "./schema.js";
import type { GenerateBody, GenerateReply, RenderMetadata } from "./api.js";

export interface RenderHandle {
  wav: ArrayBuffer;
  metadata: RenderMetadata | null;
}

export interface HistoryEntry {
  index: number;
  fxType: FxType;
  /** Generation request that produced the params, or null for hand edits. */
  request: GenerateBody | null;
  params: ParamMap;
  paramsJson: string;
  clampedFields: string[];
  seed: number;
  clip: ArrayBuffer;
  clipName: string;
  transcriptId: string | null;
  render: RenderHandle;
}

export class Session {
  word = "";
  instrument = "guitar";
  fewshot = true;
  code = false;
  useFeatures = false;
  seed = 0;

  clipName: string | null = null;
  clipBytes: ArrayBuffer | null = null;

  private fx: FxType = "reverb";
  private current: ParamMap;
  private badges = new Set<string>();
  private log: HistoryEntry[] = [];
  private lastTranscriptId: string | null = null;

  constructor() {
    this.current = neutralParams(this.fx);
  }

  get fxType(): FxType {
    return this.fx;
  }

  /** Switching effects resets the table to that effect's neutral setting. */
  setFxType(fx: FxType): void {
    if (fx === this.fx) return;
    this.fx = fx;
    this.current = neutralParams(fx);
    this.badges.clear();
  }

  get params(): ParamMap {
    return { ...this.current };
  }

  paramsJson(): string {
    return serializeParams(this.fx, this.current);
  }

  clampedFields(): string[] {
    return [...this.badges];
  }

  /**
   * Edit one field. The value is clamped against the schema range; returns
   * the stored value. A clamp leaves a badge on the field, an in-range edit
   * clears it.
   */
  setParam(key: string, value: number): number {
    const spec = specFor(key);
    if (!spec || this.current[key] === undefined) {
      throw new Error(`unknown ${this.fx} parameter: ${key}`);
    }
    const v = clampValue(spec, value);
    if (v !== value) this.badges.add(key);
    else this.badges.delete(key);
    this.current[key] = v;
    return v;
  }

  /** Install a generation result as the current table contents. */
  adoptGenerated(reply: GenerateReply, body: GenerateBody): void {
    const wrapped = reply.params[this.fx];
    if (!wrapped) {
      throw new Error(`response has no ${this.fx} parameters`);
    }
    const { params, clamped } = clampParams(this.fx, wrapped);
    this.current = params;
    this.badges = new Set([...reply.clamped_fields, ...clamped]);
    this.lastTranscriptId = reply.transcript_id;
    this.word = body.word;
    this.instrument = body.instrument;
  }

  get transcriptId(): string | null {
    return this.lastTranscriptId;
  }

  /** Record a completed render. The entry snapshots current state. */
  appendRender(render: RenderHandle, request: GenerateBody | null): HistoryEntry {
    if (this.clipBytes === null || this.clipName === null) {
      throw new Error("no clip selected");
    }
    const entry: HistoryEntry = Object.freeze({
      index: this.log.length,
      fxType: this.fx,
      request,
      params: Object.freeze(this.params) as ParamMap,
      paramsJson: this.paramsJson(),
      clampedFields: this.clampedFields(),
      seed: this.seed,
      clip: this.clipBytes,
      clipName: this.clipName,
      transcriptId: this.lastTranscriptId,
      render,
    });
    this.log.push(entry);
    return entry;
  }

  entries(): readonly HistoryEntry[] {
    return this.log.slice();
  }

  get historyLength(): number {
    return this.log.length;
  }

  /** Restore the exact params of history entry k into the table. */
  revertTo(k: number): void {
    const entry = this.log[k];
    if (!entry) throw new Error(`no history entry ${k}`);
    this.fx = entry.fxType;
    this.current = { ...entry.params };
    this.badges = new Set(entry.clampedFields);
    this.seed = entry.seed;
  }
}
