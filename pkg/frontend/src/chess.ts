/**
 * Random-chess branching experiment: play games picking every ply
 * uniformly at random among the legal moves, and histogram the number of
 * legal moves available at each ply.
 */
import { Chess } from "chess.js";
import { mulberry32, randInt } from "./rng.js";
import { writeCsv } from "./csv.js";

export interface ChessRunConfig {
  numGames: number;
  maxPlies: number;
  seed: number;
}

export const DEFAULT_CONFIG: ChessRunConfig = {
  numGames: 10_000,
  maxPlies: 140,
  seed: 0,
};

function bump(hist: Map<number, number>, key: number): void {
  hist.set(key, (hist.get(key) ?? 0) + 1);
}

/** histograms maps ply -> (out-degree -> number of games); ply is 1-based
 * (ply 1 is White's first move, always with 20 options). */
export interface BranchingResult {
  config: ChessRunConfig;
  histograms: Map<number, Map<number, number>>;
  terminated: number;
}

export function simulateChessBranching(config: ChessRunConfig): BranchingResult {
  if (config.numGames <= 0 || config.maxPlies <= 0) {
    throw new RangeError("numGames and maxPlies must be positive");
  }
  const rng = mulberry32(config.seed);
  const histograms = new Map<number, Map<number, number>>();
  for (let p = 1; p <= config.maxPlies; p++) histograms.set(p, new Map());
  let terminated = 0;

  for (let g = 0; g < config.numGames; g++) {
    const game = new Chess();
    let over = false;
    for (let ply = 1; ply <= config.maxPlies; ply++) {
      const hist = histograms.get(ply)!;
      if (over) {
        // a finished game stays at zero legal moves; keep recording it so
        // the deep-ply histograms accumulate the terminal mass
        bump(hist, 0);
        continue;
      }
      const moves = game.moves();
      bump(hist, moves.length);
      if (moves.length === 0) {
        over = true;
        terminated++;
        continue;
      }
      game.move(moves[randInt(rng, moves.length)]!);
    }
  }
  return { config, histograms, terminated };
}

/** Mean out-degree at one ply; zeros (finished games) excluded unless
 * includeZeros is set. Returns NaN when nothing qualifies. */
export function meanAtPly(
  histograms: Map<number, Map<number, number>>,
  ply: number,
  includeZeros = false,
): number {
  const hist = histograms.get(ply);
  if (!hist) return NaN;
  let total = 0;
  let n = 0;
  for (const [deg, count] of hist) {
    if (deg === 0 && !includeZeros) continue;
    total += deg * count;
    n += count;
  }
  return n === 0 ? NaN : total / n;
}

export function writeBranchingCsv(
  file: string,
  histograms: Map<number, Map<number, number>>,
): void {
  const rows: (string | number)[][] = [];
  for (const ply of [...histograms.keys()].sort((a, b) => a - b)) {
    const hist = histograms.get(ply)!;
    for (const deg of [...hist.keys()].sort((a, b) => a - b)) {
      rows.push([ply, deg, hist.get(deg)!]);
    }
  }
  writeCsv(file, ["ply", "out_degree", "count"], rows);
}
