/**
 * Arc rendering of torus tube frames.
 *
 * One panel per oscillator. Each selected frame contributes an arc covering
 * the reachable angles of that oscillator: the frame's center angle plus its
 * tangent interval. The first selected frame is drawn emphasized so the
 * initial uncertainty is immediately visible.
 */

import { so2Angle } from "./geometry.js";
import { circle, group, line, path, svgDocument, text } from "./svg.js";
import type { Tube, TubeEntry } from "./tube.js";

export interface TorusPlotOptions {
  /** Panel edge length in pixels. */
  panelSize?: number;
}

export interface TorusArc {
  oscillator: number;
  n: number;
  t: number;
  /** Arc start angle (center angle + lower bound), radians. */
  startAngle: number;
  /** Arc end angle (center angle + upper bound), radians. */
  endAngle: number;
  /** Arc length in radians: the tangent-interval width. */
  length: number;
}

export interface TorusPlot {
  svg: string;
  arcs: TorusArc[];
}

function pointOnCircle(cx: number, cy: number, r: number, angle: number): [number, number] {
  // Screen y grows downward; negate sin so positive angles run counterclockwise.
  return [cx + r * Math.cos(angle), cy - r * Math.sin(angle)];
}

function arcPath(cx: number, cy: number, r: number, a: number, b: number): string {
  const [x1, y1] = pointOnCircle(cx, cy, r, a);
  const [x2, y2] = pointOnCircle(cx, cy, r, b);
  const largeArc = b - a > Math.PI ? 1 : 0;
  // Sweep flag 0 keeps the counterclockwise (mathematically positive) sense.
  return `M ${x1} ${y1} A ${r} ${r} 0 ${largeArc} 0 ${x2} ${y2}`;
}

const FRAME_STROKES = ["#c23b22", "#1f5fbf", "#3c9d5d", "#8a5fbf", "#b8860b"];

export function plotTorus(tube: Tube, frames: TubeEntry[], opts: TorusPlotOptions = {}): TorusPlot {
  if (tube.kind !== "torus") {
    throw new Error(`torus plot needs a torus tube, got "${tube.kind}"`);
  }
  if (frames.length === 0) {
    throw new Error("no frames selected");
  }
  const size = opts.panelSize ?? 260;
  const margin = 30;
  const radius = (size - 2 * margin) / 2;
  const width = tube.dim * size;
  const height = size + 30;

  const arcs: TorusArc[] = [];
  const children: string[] = [];
  for (let osc = 0; osc < tube.dim; osc++) {
    const cx = osc * size + size / 2;
    const cy = margin + radius;
    const elements: string[] = [
      circle(cx, cy, radius, { fill: "none", stroke: "#bbb", "stroke-width": 1 }),
      // Tick at angle zero for orientation.
      line(cx + radius - 4, cy, cx + radius + 4, cy, { stroke: "#bbb", "stroke-width": 1 }),
      text(cx, size + 18, `oscillator ${osc}`, {
        "text-anchor": "middle",
        "font-size": 12,
        fill: "#333",
      }),
    ];
    frames.forEach((entry, idx) => {
      const phase = so2Angle(entry.center[osc]);
      const start = phase + entry.thetaLower[osc];
      const end = phase + entry.thetaUpper[osc];
      arcs.push({
        oscillator: osc,
        n: entry.n,
        t: entry.t,
        startAngle: start,
        endAngle: end,
        length: end - start,
      });
      const stroke = FRAME_STROKES[idx % FRAME_STROKES.length];
      const emphasized = idx === 0;
      elements.push(
        path(arcPath(cx, cy, radius, start, end), {
          fill: "none",
          stroke,
          "stroke-width": emphasized ? 6 : 3,
          "stroke-linecap": "round",
          class: `arc-osc${osc}-n${entry.n}`,
        }),
      );
      const [mx, my] = pointOnCircle(cx, cy, radius, phase);
      elements.push(circle(mx, my, 2.5, { fill: stroke, class: `center-osc${osc}-n${entry.n}` }));
    });
    children.push(group({ class: `oscillator-${osc}` }, elements));
  }

  return { svg: svgDocument(width, height, children), arcs };
}
