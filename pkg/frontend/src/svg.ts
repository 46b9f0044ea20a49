/** Minimal deterministic SVG builder. No dependency on a DOM or a
 * plotting library: every figure here is bars, lines, cells and labels,
 * and byte-stable output matters more than styling knobs. */

export function fmt(x: number): string {
  if (Number.isInteger(x)) return String(x);
  return x.toFixed(2);
}

export function tag(
  name: string,
  attrs: Record<string, string | number>,
  children: string[] = [],
  text?: string,
): string {
  const parts = Object.entries(attrs)
    .map(([k, v]) => `${k}="${typeof v === "number" ? fmt(v) : v}"`)
    .join(" ");
  const open = parts ? `<${name} ${parts}>` : `<${name}>`;
  if (children.length === 0 && text === undefined) {
    return parts ? `<${name} ${parts}/>` : `<${name}/>`;
  }
  return `${open}${text ?? ""}${children.join("")}</${name}>`;
}

export function svgDocument(width: number, height: number, children: string[]): string {
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" ` +
    `height="${height}" viewBox="0 0 ${width} ${height}" ` +
    `font-family="sans-serif">\n` +
    children.join("\n") +
    "\n</svg>\n"
  );
}

export function rect(x: number, y: number, w: number, h: number, fill: string): string {
  return tag("rect", { x, y, width: w, height: h, fill });
}

export function line(x1: number, y1: number, x2: number, y2: number, stroke: string, width = 1): string {
  return tag("line", { x1, y1, x2, y2, stroke, "stroke-width": width });
}

export function text(
  x: number,
  y: number,
  content: string,
  size = 11,
  anchor: "start" | "middle" | "end" = "start",
  fill = "#222222",
): string {
  return tag(
    "text",
    { x, y, "font-size": size, "text-anchor": anchor, fill },
    [],
    content,
  );
}

export function polyline(points: [number, number][], stroke: string, width = 1.5): string {
  const pts = points.map(([x, y]) => `${fmt(x)},${fmt(y)}`).join(" ");
  return tag("polyline", { points: pts, fill: "none", stroke, "stroke-width": width });
}

/** Linear two-color ramp in RGB; t clamped to [0, 1]. */
export function colorRamp(t: number, low = "#f5f9ff", high = "#08306b"): string {
  const c = Math.min(1, Math.max(0, t));
  const parse = (hex: string) => [
    parseInt(hex.slice(1, 3), 16),
    parseInt(hex.slice(3, 5), 16),
    parseInt(hex.slice(5, 7), 16),
  ];
  const [r1, g1, b1] = parse(low);
  const [r2, g2, b2] = parse(high);
  const mix = (a: number, b: number) => Math.round(a + (b - a) * c);
  const hex = (v: number) => v.toString(16).padStart(2, "0");
  return `#${hex(mix(r1!, r2!))}${hex(mix(g1!, g2!))}${hex(mix(b1!, b2!))}`;
}

export const PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];
