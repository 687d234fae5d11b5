export { parseTube, selectFrames } from "./tube.js";
export type { Tube, TubeEntry, TubeKind, Truncation } from "./tube.js";
export {
  linspace,
  matMul3,
  matVec3,
  maxAbsDiff,
  meshgridBox,
  rot2,
  so2Angle,
  so3Exp,
} from "./geometry.js";
export type { Mat3, Vec3 } from "./geometry.js";
export { plotSo3 } from "./plotSo3.js";
export type { So3Panel, So3Plot, So3PlotOptions } from "./plotSo3.js";
export { plotTorus } from "./plotTorus.js";
export type { TorusArc, TorusPlot, TorusPlotOptions } from "./plotTorus.js";
export { runCli } from "./cli.js";
export type { CliResult } from "./cli.js";
