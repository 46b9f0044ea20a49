/**
 * Figure regeneration from somalab CSV outputs.
 *
 * Each renderer reads one primary-output file, checks its schema, and
 * writes one SVG. The plotting layer never computes statistics beyond
 * binning, scaling and rounding; every number shown originates in the
 * input files.
 */
import fs from "node:fs";
import path from "node:path";
import { readCsv, Row, SchemaError } from "./csv.js";
import {
  PALETTE,
  colorRamp,
  line,
  polyline,
  rect,
  svgDocument,
  text,
} from "./svg.js";

const W = 720;
const H = 420;
const MARGIN = { left: 60, right: 20, top: 30, bottom: 40 };

function plotArea() {
  return {
    x0: MARGIN.left,
    y0: MARGIN.top,
    w: W - MARGIN.left - MARGIN.right,
    h: H - MARGIN.top - MARGIN.bottom,
  };
}

function axisFrame(title: string, xLabel: string, yLabel: string): string[] {
  const { x0, y0, w, h } = plotArea();
  return [
    text(W / 2, 18, title, 13, "middle"),
    line(x0, y0 + h, x0 + w, y0 + h, "#444444"),
    line(x0, y0, x0, y0 + h, "#444444"),
    text(W / 2, H - 8, xLabel, 11, "middle"),
    text(14, H / 2, yLabel, 11, "middle"),
  ];
}

function num(row: Row, col: string): number {
  return Number(row[col]);
}

function groupBy(rows: Row[], col: string): Map<number, Row[]> {
  const groups = new Map<number, Row[]>();
  for (const row of rows) {
    const key = num(row, col);
    if (!groups.has(key)) groups.set(key, []);
    groups.get(key)!.push(row);
  }
  return groups;
}

/** Per-depth out-degree histograms of the search tree, small multiples. */
export function renderBranchingProfile(csvFile: string, outFile: string): void {
  const rows = readCsv(csvFile, ["depth", "out_degree", "count"]);
  const byDepth = groupBy(rows, "depth");
  const depths = [...byDepth.keys()].sort((a, b) => a - b);
  const cols = 4;
  const panelW = 170;
  const panelH = 130;
  const rowsOfPanels = Math.ceil(depths.length / cols);
  const width = cols * panelW + 40;
  const height = rowsOfPanels * panelH + 50;
  const parts: string[] = [text(width / 2, 18, "branching by depth", 13, "middle")];

  depths.forEach((depth, i) => {
    const px = 20 + (i % cols) * panelW;
    const py = 30 + Math.floor(i / cols) * panelH;
    const hist = byDepth.get(depth)!;
    const maxDeg = Math.max(...hist.map((r) => num(r, "out_degree")), 1);
    const maxCount = Math.max(...hist.map((r) => num(r, "count")), 1);
    const innerW = panelW - 30;
    const innerH = panelH - 40;
    parts.push(text(px + innerW / 2, py + 10, `depth ${depth}`, 10, "middle"));
    parts.push(line(px, py + 15 + innerH, px + innerW, py + 15 + innerH, "#666666"));
    const barW = innerW / (maxDeg + 1);
    for (const r of hist) {
      const deg = num(r, "out_degree");
      const count = num(r, "count");
      const bh = (count / maxCount) * innerH;
      parts.push(
        rect(px + deg * barW, py + 15 + innerH - bh, Math.max(barW - 0.5, 0.5), bh, PALETTE[0]!),
      );
    }
    parts.push(text(px + innerW, py + 15 + innerH + 12, String(maxDeg), 8, "end", "#666666"));
  });
  fs.writeFileSync(outFile, svgDocument(width, height, parts));
}

/** Backtracks per depth for one solver run (solve_stats.json). */
export function renderBacktracks(statsFile: string, outFile: string): void {
  const stats = JSON.parse(fs.readFileSync(statsFile, "utf8"));
  const perDepth: number[] | undefined = stats.backtracks_per_depth;
  if (!perDepth) {
    throw new SchemaError(statsFile, ["backtracks_per_depth"]);
  }
  const { x0, y0, w, h } = plotArea();
  const parts = axisFrame("backtracks by depth", "depth", "backtracks");
  const maxVal = Math.max(...perDepth, 1);
  const barW = w / perDepth.length;
  perDepth.forEach((v, d) => {
    const bh = (v / maxVal) * h;
    parts.push(rect(x0 + d * barW + 4, y0 + h - bh, barW - 8, bh, PALETTE[1]!));
    parts.push(text(x0 + d * barW + barW / 2, y0 + h + 14, String(d), 10, "middle"));
    parts.push(text(x0 + d * barW + barW / 2, y0 + h - bh - 4, String(v), 9, "middle"));
  });
  fs.writeFileSync(outFile, svgDocument(W, H, parts));
}

/** Preprocessing vs query cost across the landmark sweep. */
export function renderTradeoff(csvFile: string, outFile: string): void {
  const rows = readCsv(csvFile, [
    "depth",
    "num_landmarks",
    "preprocessing_nodes",
    "query_nodes",
  ]);
  const byDepth = groupBy(rows, "depth");
  const { x0, y0, w, h } = plotArea();
  const parts = axisFrame("landmark trade-off", "landmarks in table", "nodes (log10)");
  const allNodes = rows.flatMap((r) => [
    num(r, "preprocessing_nodes"),
    num(r, "query_nodes"),
  ]);
  const logMax = Math.log10(Math.max(...allNodes, 10));
  const counts = [...new Set(rows.map((r) => num(r, "num_landmarks")))].sort(
    (a, b) => a - b,
  );
  const xAt = (c: number) => x0 + (counts.indexOf(c) / Math.max(counts.length - 1, 1)) * w;
  const yAt = (v: number) => y0 + h - (Math.log10(Math.max(v, 1)) / logMax) * h;

  let ci = 0;
  for (const depth of [...byDepth.keys()].sort((a, b) => a - b)) {
    const group = byDepth.get(depth)!;
    const qpts: [number, number][] = group.map((r) => [
      xAt(num(r, "num_landmarks")),
      yAt(num(r, "query_nodes")),
    ]);
    const ppts: [number, number][] = group.map((r) => [
      xAt(num(r, "num_landmarks")),
      yAt(num(r, "preprocessing_nodes")),
    ]);
    const color = PALETTE[ci % PALETTE.length]!;
    parts.push(polyline(qpts, color, 2));
    parts.push(polyline(ppts, color, 1));
    parts.push(text(x0 + w - 4, y0 + 14 + ci * 14, `depth ${depth}`, 10, "end", color));
    ci++;
  }
  counts.forEach((c) => {
    parts.push(text(xAt(c), y0 + h + 14, String(c), 10, "middle"));
  });
  fs.writeFileSync(outFile, svgDocument(W, H, parts));
}

/** Strategy grid of effective branching factors, one decimal per cell. */
export function renderStrategyHeatmap(csvFile: string, outFile: string): void {
  const rows = readCsv(csvFile, ["ordering", "pruning", "landmarks", "b_star"]);
  const orderings = [...new Set(rows.map((r) => String(r.ordering)))];
  const variants = [...new Set(rows.map((r) => `${r.pruning}/${r.landmarks}`))];
  const values = rows.map((r) => num(r, "b_star"));
  const vMin = Math.min(...values);
  const vMax = Math.max(...values);
  const cellW = 120;
  const cellH = 56;
  const left = 110;
  const top = 60;
  const width = left + variants.length * cellW + 20;
  const height = top + orderings.length * cellH + 20;
  const parts: string[] = [
    text(width / 2, 20, "effective branching factor by strategy", 13, "middle"),
  ];
  variants.forEach((v, j) => {
    parts.push(text(left + j * cellW + cellW / 2, top - 8, v, 10, "middle"));
  });
  for (const r of rows) {
    const i = orderings.indexOf(String(r.ordering));
    const j = variants.indexOf(`${r.pruning}/${r.landmarks}`);
    const v = num(r, "b_star");
    const t = vMax > vMin ? (v - vMin) / (vMax - vMin) : 0.5;
    const x = left + j * cellW;
    const y = top + i * cellH;
    parts.push(rect(x, y, cellW - 2, cellH - 2, colorRamp(t)));
    parts.push(
      text(x + cellW / 2, y + cellH / 2 + 4, v.toFixed(1), 14, "middle",
        t > 0.55 ? "#ffffff" : "#222222"),
    );
  }
  orderings.forEach((o, i) => {
    parts.push(text(left - 8, top + i * cellH + cellH / 2 + 4, o, 11, "end"));
  });
  fs.writeFileSync(outFile, svgDocument(width, height, parts));
}

/** Overlaid per-depth mean branching curves for the puzzle zoo. */
export function renderZooOverlay(csvFiles: string[], outFile: string): void {
  const { x0, y0, w, h } = plotArea();
  const parts = axisFrame("puzzle zoo mean branching", "depth", "mean out-degree");
  const series: { name: string; points: [number, number][] }[] = [];
  let maxDepth = 1;
  let maxMean = 1;
  for (const file of csvFiles) {
    const rows = readCsv(file, ["puzzle", "depth", "mean_branching"]);
    if (rows.length === 0) continue;
    const name = String(rows[0]!.puzzle);
    const points: [number, number][] = rows.map((r) => {
      const d = num(r, "depth");
      const m = num(r, "mean_branching");
      maxDepth = Math.max(maxDepth, d);
      maxMean = Math.max(maxMean, m);
      return [d, m];
    });
    series.push({ name, points });
  }
  series.forEach((s, i) => {
    const color = PALETTE[i % PALETTE.length]!;
    const pts: [number, number][] = s.points.map(([d, m]) => [
      x0 + (d / maxDepth) * w,
      y0 + h - (m / maxMean) * h,
    ]);
    parts.push(polyline(pts, color, 2));
    parts.push(text(x0 + w - 4, y0 + 14 + i * 14, s.name, 10, "end", color));
  });
  for (let d = 0; d <= maxDepth; d++) {
    parts.push(text(x0 + (d / maxDepth) * w, y0 + h + 14, String(d), 9, "middle"));
  }
  fs.writeFileSync(outFile, svgDocument(W, H, parts));
}

/** Random-chess branching: per-ply mean line plus the deep-ply
 * histogram where finished games pile up at zero moves. */
export function renderChess(csvFile: string, outFile: string): void {
  const rows = readCsv(csvFile, ["ply", "out_degree", "count"]);
  const byPly = groupBy(rows, "ply");
  const plies = [...byPly.keys()].sort((a, b) => a - b);
  const { x0, y0, w, h } = plotArea();
  const parts = axisFrame("random chess branching", "ply", "mean legal moves");

  const means: [number, number][] = [];
  let maxMean = 1;
  for (const ply of plies) {
    let total = 0;
    let n = 0;
    for (const r of byPly.get(ply)!) {
      total += num(r, "out_degree") * num(r, "count");
      n += num(r, "count");
    }
    const mean = n > 0 ? total / n : 0;
    maxMean = Math.max(maxMean, mean);
    means.push([ply, mean]);
  }
  const lastPly = plies[plies.length - 1]!;
  parts.push(
    polyline(
      means.map(([p, m]) => [
        x0 + (p / lastPly) * w,
        y0 + h - (m / maxMean) * h,
      ]),
      PALETTE[0]!,
      1.5,
    ),
  );

  // inset: pooled histogram over the last ten plies
  const insetPlies = plies.filter((p) => p > lastPly - 10);
  const pooled = new Map<number, number>();
  for (const ply of insetPlies) {
    for (const r of byPly.get(ply)!) {
      const deg = num(r, "out_degree");
      pooled.set(deg, (pooled.get(deg) ?? 0) + num(r, "count"));
    }
  }
  const ix = x0 + w - 210;
  const iy = y0 + 10;
  const iw = 200;
  const ih = 120;
  parts.push(rect(ix, iy, iw, ih, "#fafafa"));
  parts.push(text(ix + iw / 2, iy + 12, `plies ${lastPly - 9}-${lastPly}`, 9, "middle"));
  const degs = [...pooled.keys()].sort((a, b) => a - b);
  const maxDeg = Math.max(...degs, 1);
  const maxCount = Math.max(...pooled.values(), 1);
  const barW = (iw - 10) / (maxDeg + 1);
  for (const deg of degs) {
    const bh = (pooled.get(deg)! / maxCount) * (ih - 25);
    parts.push(
      rect(ix + 5 + deg * barW, iy + ih - 5 - bh, Math.max(barW - 0.5, 0.5), bh,
        deg === 0 ? PALETTE[1]! : PALETTE[0]!),
    );
  }
  for (let p = 0; p <= lastPly; p += Math.max(Math.floor(lastPly / 7), 1)) {
    parts.push(text(x0 + (p / lastPly) * w, y0 + h + 14, String(p), 9, "middle"));
  }
  fs.writeFileSync(outFile, svgDocument(W, H, parts));
}

export interface RenderedFigure {
  name: string;
  input: string;
  output: string;
}

/** Render every figure whose input exists in csvDir. Returns the list of
 * rendered figures; unknown files are ignored, bad schemas raise. */
export function renderFigures(csvDir: string, outDir: string): RenderedFigure[] {
  fs.mkdirSync(outDir, { recursive: true });
  const done: RenderedFigure[] = [];
  const maybe = (
    name: string,
    input: string,
    render: (inFile: string, outFile: string) => void,
  ) => {
    const inFile = path.join(csvDir, input);
    if (!fs.existsSync(inFile)) return;
    const outFile = path.join(outDir, `${name}.svg`);
    render(inFile, outFile);
    done.push({ name, input: inFile, output: outFile });
  };

  maybe("branching_profile", "branching_profile.csv", renderBranchingProfile);
  maybe("backtracks", "solve_stats.json", renderBacktracks);
  maybe("landmark_tradeoff", "landmark_sweep.csv", renderTradeoff);
  maybe("strategy_heatmap", "strategy_matrix.csv", renderStrategyHeatmap);
  maybe("chess_branching", "chess_branching.csv", renderChess);

  const zooFiles = fs
    .readdirSync(csvDir)
    .filter((f) => f.startsWith("zoo_") && f.endsWith(".csv"))
    .sort()
    .map((f) => path.join(csvDir, f));
  if (zooFiles.length > 0) {
    const outFile = path.join(outDir, "zoo_overlay.svg");
    renderZooOverlay(zooFiles, outFile);
    done.push({ name: "zoo_overlay", input: zooFiles.join(";"), output: outFile });
  }
  return done;
}
