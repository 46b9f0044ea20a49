/** Command line driver: simulate the random-chess experiment, render
 * figures from a directory of somalab outputs, or both. */
import fs from "node:fs";
import path from "node:path";
import { parseArgs } from "node:util";
import {
  DEFAULT_CONFIG,
  meanAtPly,
  simulateChessBranching,
  writeBranchingCsv,
} from "./chess.js";
import { renderFigures } from "./figures.js";

function usage(): never {
  console.error(
    "usage: cli.js <simulate|render|all> [--games N] [--max-plies N] " +
      "[--seed N] [--csv-dir DIR] [--out-dir DIR]",
  );
  process.exit(2);
}

export function main(argv: string[]): number {
  const command = argv[0];
  if (!command || !["simulate", "render", "all"].includes(command)) usage();
  const { values } = parseArgs({
    args: argv.slice(1),
    options: {
      games: { type: "string", default: String(DEFAULT_CONFIG.numGames) },
      "max-plies": { type: "string", default: String(DEFAULT_CONFIG.maxPlies) },
      seed: { type: "string", default: "0" },
      "csv-dir": { type: "string", default: "." },
      "out-dir": { type: "string", default: "figures" },
    },
  });
  const csvDir = values["csv-dir"]!;
  const outDir = values["out-dir"]!;

  if (command === "simulate" || command === "all") {
    const config = {
      numGames: Number(values.games),
      maxPlies: Number(values["max-plies"]),
      seed: Number(values.seed),
    };
    const result = simulateChessBranching(config);
    fs.mkdirSync(csvDir, { recursive: true });
    const csvFile = path.join(csvDir, "chess_branching.csv");
    writeBranchingCsv(csvFile, result.histograms);
    fs.writeFileSync(
      path.join(csvDir, "chess_branching_meta.json"),
      JSON.stringify(
        {
          ...config,
          terminated: result.terminated,
          mean_ply_1: meanAtPly(result.histograms, 1),
          mean_ply_10: meanAtPly(result.histograms, 10),
        },
        null,
        2,
      ) + "\n",
    );
    console.log(
      `${config.numGames} games, ${result.terminated} ended before ply ` +
        `${config.maxPlies} -> ${csvFile}`,
    );
  }

  if (command === "render" || command === "all") {
    const rendered = renderFigures(csvDir, outDir);
    for (const fig of rendered) console.log(`${fig.name} -> ${fig.output}`);
    if (rendered.length === 0) {
      console.error(`no renderable inputs in ${csvDir}`);
      return 1;
    }
  }
  return 0;
}

main(process.argv.slice(2));
