export {
  ChessRunConfig,
  BranchingResult,
  DEFAULT_CONFIG,
  simulateChessBranching,
  meanAtPly,
  writeBranchingCsv,
} from "./chess.js";
export { SchemaError, readCsv, writeCsv } from "./csv.js";
export {
  renderBranchingProfile,
  renderBacktracks,
  renderTradeoff,
  renderStrategyHeatmap,
  renderZooOverlay,
  renderChess,
  renderFigures,
} from "./figures.js";
