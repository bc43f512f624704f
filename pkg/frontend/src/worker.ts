/**
 * Reference worker for the line-delimited JSON objective protocol.
 *
 * Reads one request per stdin line, answers one response per line on
 * stdout, in arrival order:
 *
 *   request:  {"id": <uint>, "params": {"batch_size": 8, "dropout_rate": 0.1, "neurons": 110}}
 *   response: {"id": <uint>, "fitness": <finite number>}
 *             {"id": <uint>, "error": "<message>"}
 *
 * The fitness is the surrogate loss from surrogate.ts (closed form and
 * basin documented there). End of input exits 0. A malformed line gets an
 * error response carrying whatever id could be salvaged, and the worker
 * keeps serving.
 *
 * Usage: node worker.js [--seed N]
 */

import { createInterface } from "node:readline";

import { defaultModel, surrogateLoss } from "./surrogate.js";

function parseSeed(argv: string[]): number {
  const at = argv.indexOf("--seed");
  if (at === -1) {
    return 0;
  }
  const raw = argv[at + 1];
  const seed = raw === undefined ? Number.NaN : Number(raw);
  if (!Number.isInteger(seed) || seed < 0) {
    process.stderr.write(`invalid --seed ${raw ?? "(missing)"}\n`);
    process.exit(2);
  }
  return seed;
}

function salvageId(line: string): number | null {
  const match = /"id"\s*:\s*(\d+)/.exec(line);
  return match ? Number(match[1]) : null;
}

function reply(payload: Record<string, unknown>): void {
  process.stdout.write(JSON.stringify(payload) + "\n");
}

export function handleLine(line: string, seed: number): void {
  const model = defaultModel(seed);
  if (line.trim() === "") {
    return;
  }
  let request: unknown;
  try {
    request = JSON.parse(line);
  } catch {
    const id = salvageId(line);
    reply(id === null ? { error: "malformed request line" }
                      : { id, error: "malformed request line" });
    return;
  }
  const req = request as { id?: unknown; params?: Record<string, unknown> };
  if (typeof req.id !== "number" || !Number.isInteger(req.id) || req.id < 0) {
    reply({ error: "request has no usable id" });
    return;
  }
  const params = req.params;
  const b = params?.["batch_size"];
  const r = params?.["dropout_rate"];
  const n = params?.["neurons"];
  if (typeof b !== "number" || typeof r !== "number" || typeof n !== "number") {
    reply({ id: req.id, error: "params must carry numeric batch_size, dropout_rate, neurons" });
    return;
  }
  reply({ id: req.id, fitness: surrogateLoss(model, b, r, n) });
}

function main(): void {
  const seed = parseSeed(process.argv.slice(2));
  const lines = createInterface({ input: process.stdin, terminal: false });
  lines.on("line", (line) => handleLine(line, seed));
  lines.on("close", () => process.exit(0));
}

main();
