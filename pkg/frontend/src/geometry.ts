/**
 * Just enough matrix-group geometry to turn tube entries into point clouds:
 * the rotation exponential, planar rotations, and box sampling grids.
 */

export type Vec3 = [number, number, number];

/** Row-major 3x3 matrix. */
export type Mat3 = number[];

export const IDENTITY3: Mat3 = [1, 0, 0, 0, 1, 0, 0, 0, 1];

/**
 * Rotation exponential (Rodrigues form) of an axis-angle vector, returned as
 * a row-major 3x3 matrix. Near zero the sin/cos coefficients switch to their
 * series so the result stays accurate when the angle underflows.
 */
export function so3Exp(v: ArrayLike<number>): Mat3 {
  const [x, y, z] = [v[0], v[1], v[2]];
  const t2 = x * x + y * y + z * z;
  const theta = Math.sqrt(t2);
  let a: number; // sin(theta)/theta
  let b: number; // (1 - cos(theta))/theta^2
  if (theta < 1e-4) {
    a = 1 - t2 / 6;
    b = 0.5 - t2 / 24;
  } else {
    a = Math.sin(theta) / theta;
    b = (1 - Math.cos(theta)) / t2;
  }
  // I + a*K + b*K^2 with K the skew matrix of (x, y, z).
  return [
    1 + b * (-z * z - y * y),
    -a * z + b * x * y,
    a * y + b * x * z,
    a * z + b * x * y,
    1 + b * (-z * z - x * x),
    -a * x + b * y * z,
    -a * y + b * x * z,
    a * x + b * y * z,
    1 + b * (-y * y - x * x),
  ];
}

/** Planar rotation by `angle`, as a row-major 2x2 block [c, -s, s, c]. */
export function rot2(angle: number): number[] {
  const c = Math.cos(angle);
  const s = Math.sin(angle);
  return [c, -s, s, c];
}

/** Principal angle of a row-major 2x2 rotation block. */
export function so2Angle(block: ArrayLike<number>): number {
  return Math.atan2(block[2], block[0]);
}

export function matMul3(a: Mat3, b: Mat3): Mat3 {
  const out = new Array<number>(9).fill(0);
  for (let i = 0; i < 3; i++) {
    for (let j = 0; j < 3; j++) {
      let s = 0;
      for (let k = 0; k < 3; k++) {
        s += a[3 * i + k] * b[3 * k + j];
      }
      out[3 * i + j] = s;
    }
  }
  return out;
}

export function matVec3(m: Mat3, v: Vec3): Vec3 {
  return [
    m[0] * v[0] + m[1] * v[1] + m[2] * v[2],
    m[3] * v[0] + m[4] * v[1] + m[5] * v[2],
    m[6] * v[0] + m[7] * v[1] + m[8] * v[2],
  ];
}

export function maxAbsDiff(a: ArrayLike<number>, b: ArrayLike<number>): number {
  if (a.length !== b.length) {
    throw new Error("length mismatch");
  }
  let m = 0;
  for (let i = 0; i < a.length; i++) {
    m = Math.max(m, Math.abs(a[i] - b[i]));
  }
  return m;
}

/** `k` evenly spaced values covering [lo, hi]; the midpoint when k = 1. */
export function linspace(lo: number, hi: number, k: number): number[] {
  if (!Number.isInteger(k) || k < 1) {
    throw new Error(`grid size must be a positive integer, got ${k}`);
  }
  if (k === 1) {
    return [(lo + hi) / 2];
  }
  const out = new Array<number>(k);
  for (let i = 0; i < k; i++) {
    out[i] = lo + ((hi - lo) * i) / (k - 1);
  }
  out[k - 1] = hi;
  return out;
}

/**
 * All k^d points of the axis-aligned grid over the box [lower, upper],
 * endpoints included, in row-major order over the coordinates.
 */
export function meshgridBox(lower: number[], upper: number[], k: number): number[][] {
  if (lower.length !== upper.length) {
    throw new Error("box corners have mismatched lengths");
  }
  const axes = lower.map((lo, i) => linspace(lo, upper[i], k));
  let points: number[][] = [[]];
  for (const axis of axes) {
    const next: number[][] = [];
    for (const p of points) {
      for (const value of axis) {
        next.push([...p, value]);
      }
    }
    points = next;
  }
  return points;
}
