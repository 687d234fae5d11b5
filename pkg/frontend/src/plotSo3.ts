/**
 * Point-cloud rendering of rotation-group tube frames.
 *
 * Each selected frame's tangent box is sampled on a k^3 grid, every sample is
 * pushed through the frame's center rotation, and the image of a reference
 * body axis is drawn on the unit sphere (orthographic projection, fixed
 * viewpoint). One panel per frame.
 */

import { matMul3, matVec3, meshgridBox, so3Exp, type Mat3, type Vec3 } from "./geometry.js";
import { circle, group, svgDocument, text } from "./svg.js";
import type { Tube, TubeEntry } from "./tube.js";

export interface So3PlotOptions {
  /** Grid points per axis; each panel shows k^3 samples. */
  k: number;
  /** Body axis whose rotated images are plotted (unit length advised). */
  referenceAxis?: Vec3;
  /** Panel edge length in pixels. */
  panelSize?: number;
}

export interface So3Panel {
  n: number;
  t: number;
  /** Rotated reference-axis directions, one per grid sample. */
  points: Vec3[];
}

export interface So3Plot {
  svg: string;
  panels: So3Panel[];
}

/** Fixed viewing rotation: tilt the sphere so all three axes stay visible. */
const VIEW: Mat3 = matMul3(so3Exp([-0.9, 0, 0]), so3Exp([0, 0, 0.5]));

function cloudForEntry(entry: TubeEntry, k: number, axis: Vec3): Vec3[] {
  const center = entry.center[0] as Mat3;
  const samples = meshgridBox(entry.thetaLower, entry.thetaUpper, k);
  return samples.map((v) => matVec3(matMul3(center, so3Exp(v)), axis));
}

export function plotSo3(tube: Tube, frames: TubeEntry[], opts: So3PlotOptions): So3Plot {
  if (tube.kind !== "so3") {
    throw new Error(`rotation plot needs a rotation tube, got "${tube.kind}"`);
  }
  if (frames.length === 0) {
    throw new Error("no frames selected");
  }
  const axis = opts.referenceAxis ?? [0, 0, 1];
  const size = opts.panelSize ?? 260;
  const margin = 24;
  const radius = (size - 2 * margin) / 2;
  const width = frames.length * size;
  const height = size + 30;

  const panels: So3Panel[] = [];
  const children: string[] = [];
  frames.forEach((entry, idx) => {
    const points = cloudForEntry(entry, opts.k, axis);
    panels.push({ n: entry.n, t: entry.t, points });

    const cx = idx * size + size / 2;
    const cy = margin + radius;
    const elements: string[] = [
      circle(cx, cy, radius, { fill: "none", stroke: "#888", "stroke-width": 1 }),
    ];
    // Back-of-sphere samples are drawn fainter so depth reads at a glance.
    for (const p of points) {
      const q = matVec3(VIEW, p);
      elements.push(
        circle(cx + q[0] * radius, cy - q[1] * radius, 1.6, {
          fill: q[2] >= 0 ? "#1f5fbf" : "#a9c4e8",
          class: "cloud-point",
        }),
      );
    }
    elements.push(
      text(cx, size + 18, `n=${entry.n}  t=${entry.t.toFixed(2)}`, {
        "text-anchor": "middle",
        "font-size": 12,
        fill: "#333",
      }),
    );
    children.push(group({ class: `frame-${entry.n}` }, elements));
  });

  return { svg: svgDocument(width, height, children), panels };
}
