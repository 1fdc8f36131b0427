/**
 * DOM wiring for the single-page client. All service traffic goes through
 * Client; all parameter state lives in Session. At most one generate request
 * is in flight at a time; renders are cancelable (a new one aborts the old).
 */

import { Client, ApiError, type GenerateBody, type RenderMetadata } from "./api.js";
import { Session, type HistoryEntry } from "./session.js";
import { fieldsFor, type FxType, type FieldSpec } from "./schema.js";
import { curvePath, decadeTicks, yForDb, DEFAULT_BOX } from "./curve.js";
import { AbPlayer } from "./audio.js";
import { bytesEqual, fmt } from "./util.js";

// The page is served statically, so the service lives on its own port; the
// service's CORS setup allows this. Override with ?api=http://host:port.
const apiBase =
  new URLSearchParams(location.search).get("api") ?? "http://127.0.0.1:8000";
const client = new Client(apiBase);
const session = new Session();
const player = new AbPlayer();

let generateInFlight = false;
let renderAbort: AbortController | null = null;

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

const errorBar = el<HTMLDivElement>("errorBar");
const fixtureSelect = el<HTMLSelectElement>("fixtureSelect");
const fileInput = el<HTMLInputElement>("fileInput");
const clipLabel = el<HTMLSpanElement>("clipLabel");
const fxSelect = el<HTMLSelectElement>("fxSelect");
const wordInput = el<HTMLInputElement>("wordInput");
const instrumentInput = el<HTMLInputElement>("instrumentInput");
const fewshotToggle = el<HTMLInputElement>("fewshotToggle");
const codeToggle = el<HTMLInputElement>("codeToggle");
const featuresToggle = el<HTMLInputElement>("featuresToggle");
const seedInput = el<HTMLInputElement>("seedInput");
const generateBtn = el<HTMLButtonElement>("generateBtn");
const renderBtn = el<HTMLButtonElement>("renderBtn");
const transcriptBtn = el<HTMLButtonElement>("transcriptBtn");
const transcriptView = el<HTMLPreElement>("transcriptView");
const paramBody = el<HTMLTableSectionElement>("paramBody");
const downloadLink = el<HTMLAnchorElement>("downloadLink");
const clippedBadge = el<HTMLSpanElement>("clippedBadge");
const playBtn = el<HTMLButtonElement>("playBtn");
const stopBtn = el<HTMLButtonElement>("stopBtn");
const abDry = el<HTMLInputElement>("abDry");
const abWet = el<HTMLInputElement>("abWet");
const levelMatchToggle = el<HTMLInputElement>("levelMatchToggle");
const historyList = el<HTMLOListElement>("historyList");
const healthDot = el<HTMLSpanElement>("healthDot");

function showError(err: unknown): void {
  const text =
    err instanceof ApiError ? `${err.code}: ${err.message}` :
    err instanceof Error ? err.message : String(err);
  errorBar.textContent = text;
  errorBar.hidden = false;
}

function clearError(): void {
  errorBar.hidden = true;
  errorBar.textContent = "";
}

// ---- parameter table ----------------------------------------------------

const badgeFor = new Map<string, HTMLSpanElement>();
const inputFor = new Map<string, HTMLInputElement>();

function rebuildTable(): void {
  paramBody.textContent = "";
  badgeFor.clear();
  inputFor.clear();
  const params = session.params;
  const clamped = new Set(session.clampedFields());
  const groups = new Map<string, FieldSpec[]>();
  for (const f of fieldsFor(session.fxType)) {
    const list = groups.get(f.group) ?? [];
    list.push(f);
    groups.set(f.group, list);
  }
  for (const [group, fields] of groups) {
    const tr = document.createElement("tr");
    const th = document.createElement("th");
    th.textContent = group.replace(/_/g, " ");
    tr.appendChild(th);
    for (const f of fields) {
      const td = document.createElement("td");
      const input = document.createElement("input");
      input.type = "number";
      input.min = String(f.min);
      input.max = String(f.max);
      input.step = String(f.step);
      input.value = fmt(params[f.key]);
      input.title = `${f.key} [${f.min} .. ${f.max}]`;
      const badge = document.createElement("span");
      badge.className = "clamp-badge";
      badge.textContent = "clamped";
      badge.hidden = !clamped.has(f.key);
      input.addEventListener("change", () => {
        const stored = session.setParam(f.key, Number(input.value));
        input.value = fmt(stored);
        badge.hidden = !session.clampedFields().includes(f.key);
      });
      td.appendChild(input);
      if (f.unit) {
        const unit = document.createElement("span");
        unit.className = "unit";
        unit.textContent = f.unit;
        td.appendChild(unit);
      }
      td.appendChild(badge);
      tr.appendChild(td);
      badgeFor.set(f.key, badge);
      inputFor.set(f.key, input);
    }
    paramBody.appendChild(tr);
  }
}

// ---- response curve -----------------------------------------------------

function drawCurve(metadata: RenderMetadata | null): void {
  const path = el<HTMLElement>("curvePath") as unknown as SVGPathElement;
  const curve = metadata?.response_curve;
  path.setAttribute("d", curve ? curvePath(curve) : "");
  el<HTMLElement>("curvePlot").style.opacity = curve ? "1" : "0.25";
}

function drawCurveGrid(): void {
  const grid = el<HTMLElement>("curveGrid") as unknown as SVGGElement;
  const ns = "http://www.w3.org/2000/svg";
  for (const tick of decadeTicks()) {
    const line = document.createElementNS(ns, "line");
    line.setAttribute("x1", String(tick.x));
    line.setAttribute("x2", String(tick.x));
    line.setAttribute("y1", "0");
    line.setAttribute("y2", String(DEFAULT_BOX.height));
    grid.appendChild(line);
    const label = document.createElementNS(ns, "text");
    label.setAttribute("x", String(tick.x + 3));
    label.setAttribute("y", String(DEFAULT_BOX.height - 4));
    label.textContent = tick.label;
    grid.appendChild(label);
  }
  const zero = document.createElementNS(ns, "line");
  const y0 = yForDb(0, DEFAULT_BOX);
  zero.setAttribute("x1", "0");
  zero.setAttribute("x2", String(DEFAULT_BOX.width));
  zero.setAttribute("y1", String(y0));
  zero.setAttribute("y2", String(y0));
  zero.setAttribute("class", "zero");
  grid.appendChild(zero);
}

// ---- clip selection -----------------------------------------------------

async function selectFixture(name: string): Promise<void> {
  const bytes = await client.fixture(name);
  session.clipName = name;
  session.clipBytes = bytes;
  clipLabel.textContent = `${name} (${(bytes.byteLength / 1024).toFixed(0)} KiB)`;
}

async function loadUpload(file: File): Promise<void> {
  session.clipName = file.name;
  session.clipBytes = await file.arrayBuffer();
  fixtureSelect.value = "";
  clipLabel.textContent = `${file.name} (uploaded)`;
}

// ---- generate / render --------------------------------------------------

function collectBody(features: Record<string, number> | null): GenerateBody {
  return {
    word: wordInput.value.trim(),
    instrument: instrumentInput.value.trim() || "guitar",
    fx_type: session.fxType,
    seed: session.seed,
    fewshot: session.fewshot,
    code: session.code,
    features,
  };
}

async function generate(): Promise<void> {
  if (generateInFlight) return;
  if (!wordInput.value.trim()) {
    showError(new Error("enter a timbre word first"));
    return;
  }
  generateInFlight = true;
  generateBtn.disabled = true;
  try {
    clearError();
    let features: Record<string, number> | null = null;
    if (session.useFeatures) {
      if (!session.clipBytes) throw new Error("feature context needs a clip; select one first");
      features = await client.features(session.clipBytes);
    }
    const body = collectBody(features);
    const reply = await client.generate(body);
    session.adoptGenerated(reply, body);
    rebuildTable();
    transcriptBtn.disabled = false;
    if (session.clipBytes) await doRender(body);
  } catch (err) {
    showError(err);
  } finally {
    generateInFlight = false;
    generateBtn.disabled = false;
  }
}

async function doRender(request: GenerateBody | null): Promise<HistoryEntry | null> {
  if (!session.clipBytes) {
    showError(new Error("select or upload a clip first"));
    return null;
  }
  renderAbort?.abort();
  renderAbort = new AbortController();
  try {
    clearError();
    const { wav, metadata } = await client.render(
      session.clipBytes, session.paramsJson(), session.seed, renderAbort.signal);
    const entry = session.appendRender({ wav, metadata }, request);
    appendHistoryRow(entry);
    drawCurve(metadata);
    clippedBadge.hidden = !metadata?.clipped;
    offerDownload(wav);
    await player.load(entry.clip, wav);
    playBtn.disabled = false;
    stopBtn.disabled = false;
    return entry;
  } catch (err) {
    if (err instanceof DOMException && err.name === "AbortError") return null;
    showError(err);
    return null;
  }
}

let downloadUrl: string | null = null;

function offerDownload(wav: ArrayBuffer): void {
  if (downloadUrl) URL.revokeObjectURL(downloadUrl);
  downloadUrl = URL.createObjectURL(new Blob([wav], { type: "audio/wav" }));
  downloadLink.href = downloadUrl;
  downloadLink.download = `${session.word || "render"}-${session.fxType}-seed${session.seed}.wav`;
  downloadLink.hidden = false;
}

// ---- history ------------------------------------------------------------

function appendHistoryRow(entry: HistoryEntry): void {
  const li = document.createElement("li");
  const label = document.createElement("span");
  const word = entry.request?.word ?? "(edited)";
  label.textContent =
    `#${entry.index} ${word} / ${entry.fxType} / seed ${entry.seed} / ${entry.clipName}`;
  const replay = document.createElement("button");
  replay.textContent = "replay";
  const revert = document.createElement("button");
  revert.textContent = "revert";
  const verdict = document.createElement("span");
  verdict.className = "verdict";
  replay.addEventListener("click", () => void replayEntry(entry, verdict));
  revert.addEventListener("click", () => {
    session.revertTo(entry.index);
    fxSelect.value = session.fxType;
    seedInput.value = String(session.seed);
    rebuildTable();
    clearError();
  });
  li.append(label, replay, revert, verdict);
  historyList.appendChild(li);
}

/**
 * Re-render entry k from its recorded clip, params, and seed, then check the
 * bytes against what was stored. Identical bytes are the expected outcome;
 * anything else is surfaced loudly.
 */
async function replayEntry(entry: HistoryEntry, verdict: HTMLSpanElement): Promise<void> {
  try {
    clearError();
    const { wav, metadata } = await client.render(entry.clip, entry.paramsJson, entry.seed);
    const same = bytesEqual(wav, entry.render.wav);
    verdict.textContent = same ? "bytes match" : "BYTES DIFFER";
    verdict.classList.toggle("bad", !same);
    drawCurve(metadata);
    offerDownload(wav);
    await player.load(entry.clip, wav);
    playBtn.disabled = false;
    stopBtn.disabled = false;
  } catch (err) {
    showError(err);
  }
}

// ---- transcript ---------------------------------------------------------

async function showTranscript(): Promise<void> {
  const id = session.transcriptId;
  if (!id) return;
  try {
    clearError();
    const record = await client.transcript(id);
    transcriptView.textContent =
      `# transcript ${record.id}\n\n${record.prompt_transcript}\n` +
      `--- raw response ---\n${record.raw_text}\n`;
    transcriptView.hidden = false;
  } catch (err) {
    showError(err);
  }
}

// ---- wiring -------------------------------------------------------------

async function init(): Promise<void> {
  drawCurveGrid();
  rebuildTable();
  fxSelect.value = session.fxType;
  seedInput.value = String(session.seed);
  fewshotToggle.checked = session.fewshot;

  fxSelect.addEventListener("change", () => {
    session.setFxType(fxSelect.value as FxType);
    rebuildTable();
  });
  seedInput.addEventListener("change", () => {
    session.seed = Number(seedInput.value) | 0;
  });
  fewshotToggle.addEventListener("change", () => (session.fewshot = fewshotToggle.checked));
  codeToggle.addEventListener("change", () => (session.code = codeToggle.checked));
  featuresToggle.addEventListener("change", () => (session.useFeatures = featuresToggle.checked));
  fixtureSelect.addEventListener("change", () => {
    if (fixtureSelect.value) void selectFixture(fixtureSelect.value).catch(showError);
  });
  fileInput.addEventListener("change", () => {
    const file = fileInput.files?.[0];
    if (file) void loadUpload(file).catch(showError);
  });
  generateBtn.addEventListener("click", () => void generate());
  renderBtn.addEventListener("click", () => void doRender(null));
  transcriptBtn.addEventListener("click", () => void showTranscript());
  playBtn.addEventListener("click", () => void player.start().catch(showError));
  stopBtn.addEventListener("click", () => player.stop());
  abDry.addEventListener("change", () => abDry.checked && player.select("dry"));
  abWet.addEventListener("change", () => abWet.checked && player.select("wet"));
  levelMatchToggle.addEventListener("change", () =>
    player.setLevelMatch(levelMatchToggle.checked));

  const up = await client.health();
  healthDot.classList.toggle("up", up);
  healthDot.title = up ? "service reachable" : "service unreachable";
  if (!up) {
    showError(new Error("service unreachable; start it with: llm2fx serve"));
    return;
  }
  const fixtures = await client.fixtures();
  for (const f of fixtures) {
    const opt = document.createElement("option");
    opt.value = f.name;
    opt.textContent = `${f.name} (${f.duration.toFixed(0)} s)`;
    fixtureSelect.appendChild(opt);
  }
  if (fixtures.length > 0) await selectFixture(fixtures[0].name).catch(showError);
}

void init().catch(showError);
