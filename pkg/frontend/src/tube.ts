/**
 * Reader for the JSONL tube files written by the `reach` CLI.
 *
 * Each line is one tube entry:
 *
 *   {"n": 0, "t": 0.0, "center": [[...], ...], "theta_lower": [...],
 *    "theta_upper": [...], "recentered": false, "monotone_check": null}
 *
 * `center` holds the group element as row-major matrix blocks: a single
 * 9-float block for a rotation, or one 4-float block per planar oscillator.
 * A run that aborted ends with a truncation marker as its final line:
 *
 *   {"truncated": true, "failure": "...", "failed_step": 284}
 */

export type TubeKind = "so3" | "torus";

export interface TubeEntry {
  /** Step index. */
  n: number;
  /** Time stamp. */
  t: number;
  /** Row-major matrix blocks of the group element at the box center. */
  center: number[][];
  /** Lower corner of the tangent box, in algebra coordinates. */
  thetaLower: number[];
  /** Upper corner of the tangent box, in algebra coordinates. */
  thetaUpper: number[];
  /** Whether the box was recentered after this step. */
  recentered: boolean;
  /** Monotone-mode ordering check result, or null when not applicable. */
  monotoneCheck: boolean | null;
}

export interface Truncation {
  failure: string;
  failedStep: number;
}

export interface Tube {
  kind: TubeKind;
  /** Algebra dimension (3 for rotations, one per oscillator otherwise). */
  dim: number;
  entries: TubeEntry[];
  /** Present when the producing run aborted before its horizon. */
  truncation: Truncation | null;
}

function isFiniteNumber(x: unknown): x is number {
  return typeof x === "number" && Number.isFinite(x);
}

function asNumberArray(x: unknown, what: string, line: number): number[] {
  if (!Array.isArray(x) || x.length === 0 || !x.every(isFiniteNumber)) {
    throw new Error(`tube line ${line}: ${what} must be a non-empty array of finite numbers`);
  }
  return x as number[];
}

function classifyBlocks(blocks: number[][], line: number): { kind: TubeKind; dim: number } {
  if (blocks.length === 1 && blocks[0].length === 9) {
    return { kind: "so3", dim: 3 };
  }
  if (blocks.length >= 1 && blocks.every((b) => b.length === 4)) {
    return { kind: "torus", dim: blocks.length };
  }
  throw new Error(
    `tube line ${line}: unrecognized center blocks (expected one 3x3 block or 2x2 blocks)`,
  );
}

function parseEntry(raw: Record<string, unknown>, line: number): TubeEntry {
  if (!isFiniteNumber(raw.n) || !Number.isInteger(raw.n) || raw.n < 0) {
    throw new Error(`tube line ${line}: "n" must be a non-negative integer`);
  }
  if (!isFiniteNumber(raw.t)) {
    throw new Error(`tube line ${line}: "t" must be a finite number`);
  }
  if (!Array.isArray(raw.center) || raw.center.length === 0) {
    throw new Error(`tube line ${line}: "center" must be a non-empty array of blocks`);
  }
  const center = raw.center.map((b, i) => asNumberArray(b, `center block ${i}`, line));
  const lower = asNumberArray(raw.theta_lower, '"theta_lower"', line);
  const upper = asNumberArray(raw.theta_upper, '"theta_upper"', line);
  if (lower.length !== upper.length) {
    throw new Error(`tube line ${line}: box corners have mismatched lengths`);
  }
  for (let i = 0; i < lower.length; i++) {
    if (lower[i] > upper[i]) {
      throw new Error(`tube line ${line}: theta_lower[${i}] exceeds theta_upper[${i}]`);
    }
  }
  if (typeof raw.recentered !== "boolean") {
    throw new Error(`tube line ${line}: "recentered" must be a boolean`);
  }
  const mc = raw.monotone_check;
  if (mc !== null && typeof mc !== "boolean") {
    throw new Error(`tube line ${line}: "monotone_check" must be a boolean or null`);
  }
  return {
    n: raw.n,
    t: raw.t,
    center,
    thetaLower: lower,
    thetaUpper: upper,
    recentered: raw.recentered,
    monotoneCheck: mc,
  };
}

/** Parse the contents of a tube file. Throws on malformed or empty input. */
export function parseTube(text: string): Tube {
  const lines = text.split("\n").filter((l) => l.trim().length > 0);
  if (lines.length === 0) {
    throw new Error("tube file is empty");
  }
  const entries: TubeEntry[] = [];
  let truncation: Truncation | null = null;
  for (let i = 0; i < lines.length; i++) {
    const lineNo = i + 1;
    let raw: unknown;
    try {
      raw = JSON.parse(lines[i]);
    } catch {
      throw new Error(`tube line ${lineNo}: not valid JSON`);
    }
    if (typeof raw !== "object" || raw === null || Array.isArray(raw)) {
      throw new Error(`tube line ${lineNo}: expected a JSON object`);
    }
    const rec = raw as Record<string, unknown>;
    if (truncation !== null) {
      throw new Error(`tube line ${lineNo}: data after truncation marker`);
    }
    if (rec.truncated === true) {
      if (typeof rec.failure !== "string" || !isFiniteNumber(rec.failed_step)) {
        throw new Error(`tube line ${lineNo}: malformed truncation marker`);
      }
      truncation = { failure: rec.failure, failedStep: rec.failed_step };
      continue;
    }
    entries.push(parseEntry(rec, lineNo));
  }
  if (entries.length === 0) {
    throw new Error("tube file holds no entries");
  }
  const { kind, dim } = classifyBlocks(entries[0].center, 1);
  for (const e of entries) {
    const c = classifyBlocks(e.center, e.n + 1);
    if (c.kind !== kind || c.dim !== dim || e.thetaLower.length !== dim) {
      throw new Error(`tube entry n=${e.n}: inconsistent group shape`);
    }
  }
  return { kind, dim, entries, truncation };
}

/**
 * Resolve a frame selection string ("0,150,300", or the default "first,last")
 * against the entries actually present, by step index `n`.
 */
export function selectFrames(tube: Tube, spec: string): TubeEntry[] {
  const byN = new Map(tube.entries.map((e) => [e.n, e]));
  const last = tube.entries[tube.entries.length - 1];
  const tokens = spec.split(",").map((s) => s.trim()).filter((s) => s.length > 0);
  if (tokens.length === 0) {
    throw new Error("empty frame selection");
  }
  const picked: TubeEntry[] = [];
  for (const tok of tokens) {
    if (tok === "first") {
      picked.push(tube.entries[0]);
      continue;
    }
    if (tok === "last") {
      picked.push(last);
      continue;
    }
    const n = Number(tok);
    if (!Number.isInteger(n) || n < 0) {
      throw new Error(`bad frame token "${tok}" (want a step index, "first", or "last")`);
    }
    const entry = byN.get(n);
    if (entry === undefined) {
      throw new Error(`frame n=${n} is not in the tube (it holds n=0..${last.n})`);
    }
    picked.push(entry);
  }
  return picked;
}
