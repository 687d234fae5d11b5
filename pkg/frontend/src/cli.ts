/**
 * Command-line entry: render a tube file written by the `reach` CLI to a
 * static SVG.
 *
 *   reach-plot --tube tube.jsonl --out plot.svg [--frames first,last] [--k 7]
 *
 * The plot type follows the tube contents: rotation tubes become per-frame
 * point clouds on the unit sphere, torus tubes become per-oscillator angle
 * arcs. `--frames` takes comma-separated step indices plus the shorthands
 * "first" and "last"; `--k` sets the grid resolution for point clouds.
 */

import { readFile, writeFile } from "node:fs/promises";
import { pathToFileURL } from "node:url";
import { parseArgs } from "node:util";
import { plotSo3 } from "./plotSo3.js";
import { plotTorus } from "./plotTorus.js";
import { parseTube, selectFrames } from "./tube.js";

export interface CliResult {
  out: string;
  kind: "so3" | "torus";
  frames: number[];
  pointsPerFrame: number | null;
}

export async function runCli(argv: string[]): Promise<CliResult> {
  const { values } = parseArgs({
    args: argv,
    options: {
      tube: { type: "string" },
      frames: { type: "string", default: "first,last" },
      k: { type: "string", default: "7" },
      out: { type: "string" },
    },
    strict: true,
  });
  if (values.tube === undefined || values.out === undefined) {
    throw new Error("usage: reach-plot --tube <tube.jsonl> --out <plot.svg> [--frames ...] [--k N]");
  }
  const k = Number(values.k);
  if (!Number.isInteger(k) || k < 1) {
    throw new Error(`--k must be a positive integer, got "${values.k}"`);
  }

  const tube = parseTube(await readFile(values.tube, "utf8"));
  const frames = selectFrames(tube, values.frames);

  let svg: string;
  let pointsPerFrame: number | null;
  if (tube.kind === "so3") {
    const plot = plotSo3(tube, frames, { k });
    svg = plot.svg;
    pointsPerFrame = plot.panels[0].points.length;
  } else {
    const plot = plotTorus(tube, frames);
    svg = plot.svg;
    pointsPerFrame = null;
  }
  await writeFile(values.out, svg, "utf8");
  return { out: values.out, kind: tube.kind, frames: frames.map((f) => f.n), pointsPerFrame };
}

export async function main(): Promise<void> {
  try {
    const result = await runCli(process.argv.slice(2));
    const detail =
      result.pointsPerFrame !== null
        ? `${result.frames.length} frames, ${result.pointsPerFrame} points/frame`
        : `${result.frames.length} frames`;
    console.log(`wrote ${result.out} (${result.kind}, ${detail})`);
  } catch (err) {
    console.error(err instanceof Error ? err.message : String(err));
    process.exitCode = 1;
  }
}

if (process.argv[1] !== undefined && import.meta.url === pathToFileURL(process.argv[1]).href) {
  await main();
}
