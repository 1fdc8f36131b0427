/**
 * Parameter schemas mirrored from the service, so edits clamp client-side
 * with the same ranges the renderer enforces. Key order matters: it is the
 * order the service serializes, and the table and JSON payloads keep it.
 */

export type FxType = "eq" | "reverb";

export interface FieldSpec {
  key: string;
  min: number;
  max: number;
  step: number;
  unit: string;
  /** Table row this field belongs to (EQ section, reverb band, mix). */
  group: string;
  /** Log-scaled quantity (frequencies). */
  log?: boolean;
}

export type ParamMap = Record<string, number>;

const EQ_SECTIONS = ["low_shelf", "band1", "band2", "band3", "band4", "high_shelf"];

export const EQ_FIELDS: FieldSpec[] = EQ_SECTIONS.flatMap((section) => [
  { key: `${section}_gain_db`, min: -24, max: 24, step: 0.1, unit: "dB", group: section },
  { key: `${section}_cutoff_freq`, min: 20, max: 20000, step: 1, unit: "Hz", group: section, log: true },
  { key: `${section}_q`, min: 0.1, max: 10, step: 0.01, unit: "Q", group: section },
]);

const bandIndices = Array.from({ length: 12 }, (_, i) => i);

export const REVERB_FIELDS: FieldSpec[] = [
  ...bandIndices.map((i) => ({
    key: `band${i}_gain`, min: 0, max: 1, step: 0.01, unit: "", group: `band ${i}`,
  })),
  ...bandIndices.map((i) => ({
    key: `band${i}_decay`, min: 0, max: 30, step: 0.01, unit: "s", group: `band ${i}`,
  })),
  { key: "mix", min: 0, max: 1, step: 0.01, unit: "", group: "mix" },
];

export function fieldsFor(fx: FxType): FieldSpec[] {
  return fx === "eq" ? EQ_FIELDS : REVERB_FIELDS;
}

const SPEC_INDEX = new Map<string, FieldSpec>(
  [...EQ_FIELDS, ...REVERB_FIELDS].map((f) => [f.key, f]),
);

export function specFor(key: string): FieldSpec | undefined {
  return SPEC_INDEX.get(key);
}

export function clampValue(spec: FieldSpec, value: number): number {
  if (Number.isNaN(value)) return spec.min;
  return Math.min(spec.max, Math.max(spec.min, value));
}

/**
 * Clamp a full parameter object against the fx schema. Returns the clamped
 * copy (schema keys only, schema order) plus the keys that moved. Missing
 * keys are an error; extra keys are dropped so newer servers stay usable.
 */
export function clampParams(fx: FxType, raw: ParamMap): { params: ParamMap; clamped: string[] } {
  const fields = fieldsFor(fx);
  const missing = fields.filter((f) => raw[f.key] === undefined).map((f) => f.key);
  if (missing.length > 0) {
    throw new Error(`missing ${fx} parameter keys: ${missing.join(", ")}`);
  }
  const params: ParamMap = {};
  const clamped: string[] = [];
  for (const f of fields) {
    const v = clampValue(f, raw[f.key]);
    if (v !== raw[f.key]) clamped.push(f.key);
    params[f.key] = v;
  }
  return { params, clamped };
}

/** Identify which schema a parameter object belongs to, by exact key set. */
export function detectFx(params: ParamMap): FxType | null {
  const keys = new Set(Object.keys(params));
  for (const fx of ["eq", "reverb"] as FxType[]) {
    const fields = fieldsFor(fx);
    if (keys.size === fields.length && fields.every((f) => keys.has(f.key))) return fx;
  }
  return null;
}

/**
 * A valid do-nothing setting per effect: flat EQ (0 dB everywhere, shelves at
 * 120 Hz and 6 kHz, peaks log-spaced between) and a fully dry reverb.
 */
export function neutralParams(fx: FxType): ParamMap {
  const params: ParamMap = {};
  if (fx === "eq") {
    const lo = 120;
    const hi = 6000;
    const cutoffs = EQ_SECTIONS.map((_, i) => lo * Math.pow(hi / lo, i / (EQ_SECTIONS.length - 1)));
    EQ_SECTIONS.forEach((section, i) => {
      params[`${section}_gain_db`] = 0;
      params[`${section}_cutoff_freq`] = Math.round(cutoffs[i] * 100) / 100;
      params[`${section}_q`] = 0.707;
    });
    return params;
  }
  for (const i of bandIndices) params[`band${i}_gain`] = 0;
  for (const i of bandIndices) params[`band${i}_decay`] = 0.1;
  params.mix = 0;
  return params;
}

/** Serialize in schema key order; the exact string is what goes on the wire. */
export function serializeParams(fx: FxType, params: ParamMap): string {
  const ordered: ParamMap = {};
  for (const f of fieldsFor(fx)) ordered[f.key] = params[f.key];
  return JSON.stringify(ordered);
}
