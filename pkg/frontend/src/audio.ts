/**
 * Dry/wet A/B playback on a single AudioContext clock. Both sources start on
 * the same tick and keep running; the toggle crossfades two gain nodes, so
 * switching sides never restarts playback and the comparison is sample
 * aligned. Level matching scales the wet side to the dry side's RMS.
 */

export function rms(channels: Float32Array[]): number {
  let sum = 0;
  let count = 0;
  for (const data of channels) {
    for (let i = 0; i < data.length; i++) sum += data[i] * data[i];
    count += data.length;
  }
  return count === 0 ? 0 : Math.sqrt(sum / count);
}

/**
 * Gain applied to the wet side so its RMS matches the dry side. Capped so a
 * near-silent render cannot blow up the output.
 */
export function levelMatchGain(dryRms: number, wetRms: number): number {
  if (!(dryRms > 0) || !(wetRms > 0)) return 1;
  return Math.min(20, Math.max(0.05, dryRms / wetRms));
}

function bufferChannels(buffer: AudioBuffer): Float32Array[] {
  const out: Float32Array[] = [];
  for (let c = 0; c < buffer.numberOfChannels; c++) out.push(buffer.getChannelData(c));
  return out;
}

const FADE_S = 0.015;

export class AbPlayer {
  private ctx: AudioContext | null = null;
  private dryGain: GainNode | null = null;
  private wetGain: GainNode | null = null;
  private wetTrim: GainNode | null = null;
  private sources: AudioBufferSourceNode[] = [];
  private dryBuffer: AudioBuffer | null = null;
  private wetBuffer: AudioBuffer | null = null;
  private matchFactor = 1;

  side: "dry" | "wet" = "wet";
  levelMatch = false;
  playing = false;

  private ensureCtx(): AudioContext {
    if (!this.ctx) {
      this.ctx = new AudioContext();
      this.dryGain = this.ctx.createGain();
      this.wetTrim = this.ctx.createGain();
      this.wetGain = this.ctx.createGain();
      this.dryGain.connect(this.ctx.destination);
      this.wetTrim.connect(this.wetGain);
      this.wetGain.connect(this.ctx.destination);
    }
    return this.ctx;
  }

  /** Decode both sides. decodeAudioData detaches its input, so copy first. */
  async load(dry: ArrayBuffer, wet: ArrayBuffer): Promise<void> {
    const ctx = this.ensureCtx();
    this.stop();
    this.dryBuffer = await ctx.decodeAudioData(dry.slice(0));
    this.wetBuffer = await ctx.decodeAudioData(wet.slice(0));
    this.matchFactor = levelMatchGain(
      rms(bufferChannels(this.dryBuffer)),
      rms(bufferChannels(this.wetBuffer)),
    );
    this.applyGains(true);
  }

  get loaded(): boolean {
    return this.dryBuffer !== null && this.wetBuffer !== null;
  }

  async start(): Promise<void> {
    if (!this.loaded) return;
    const ctx = this.ensureCtx();
    if (ctx.state === "suspended") await ctx.resume();
    this.stop();
    const t0 = ctx.currentTime + 0.05;
    for (const [buffer, sink] of [
      [this.dryBuffer, this.dryGain],
      [this.wetBuffer, this.wetTrim],
    ] as const) {
      const src = ctx.createBufferSource();
      src.buffer = buffer;
      src.loop = true;
      src.connect(sink!);
      src.start(t0);
      this.sources.push(src);
    }
    this.playing = true;
    this.applyGains(true);
  }

  stop(): void {
    for (const src of this.sources) {
      try {
        src.stop();
      } catch {
        // Already stopped.
      }
      src.disconnect();
    }
    this.sources = [];
    this.playing = false;
  }

  select(side: "dry" | "wet"): void {
    this.side = side;
    this.applyGains(false);
  }

  setLevelMatch(on: boolean): void {
    this.levelMatch = on;
    this.applyGains(false);
  }

  private applyGains(immediate: boolean): void {
    if (!this.ctx || !this.dryGain || !this.wetGain || !this.wetTrim) return;
    const t = this.ctx.currentTime;
    const dry = this.side === "dry" ? 1 : 0;
    const wet = this.side === "wet" ? 1 : 0;
    const trim = this.levelMatch ? this.matchFactor : 1;
    if (immediate) {
      this.dryGain.gain.setValueAtTime(dry, t);
      this.wetGain.gain.setValueAtTime(wet, t);
      this.wetTrim.gain.setValueAtTime(trim, t);
    } else {
      this.dryGain.gain.setTargetAtTime(dry, t, FADE_S);
      this.wetGain.gain.setTargetAtTime(wet, t, FADE_S);
      this.wetTrim.gain.setTargetAtTime(trim, t, FADE_S);
    }
  }
}
