/** Minimal SVG document builder: enough tags for static point-cloud plots. */

export type Attrs = Record<string, string | number>;

function fmt(value: string | number): string {
  if (typeof value === "number") {
    // Trim float noise without distorting coordinates at plot scale.
    return Number.isInteger(value) ? String(value) : value.toPrecision(8).replace(/\.?0+$/, "");
  }
  return value;
}

function escapeText(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

export function tag(name: string, attrs: Attrs, children: string[] = [], text?: string): string {
  const parts = Object.entries(attrs).map(([k, v]) => `${k}="${fmt(v)}"`);
  const open = parts.length > 0 ? `<${name} ${parts.join(" ")}` : `<${name}`;
  if (children.length === 0 && text === undefined) {
    return `${open}/>`;
  }
  const body = text !== undefined ? escapeText(text) : children.join("");
  return `${open}>${body}</${name}>`;
}

export function circle(cx: number, cy: number, r: number, attrs: Attrs = {}): string {
  return tag("circle", { cx, cy, r, ...attrs });
}

export function line(x1: number, y1: number, x2: number, y2: number, attrs: Attrs = {}): string {
  return tag("line", { x1, y1, x2, y2, ...attrs });
}

export function path(d: string, attrs: Attrs = {}): string {
  return tag("path", { d, ...attrs });
}

export function text(x: number, y: number, content: string, attrs: Attrs = {}): string {
  return tag("text", { x, y, ...attrs }, [], content);
}

export function group(attrs: Attrs, children: string[]): string {
  return tag("g", attrs, children);
}

export function svgDocument(width: number, height: number, children: string[]): string {
  return tag(
    "svg",
    {
      xmlns: "http://www.w3.org/2000/svg",
      width,
      height,
      viewBox: `0 0 ${width} ${height}`,
      "font-family": "sans-serif",
    },
    children,
  );
}
