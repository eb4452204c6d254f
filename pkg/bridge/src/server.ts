/** Bridge server entry point: one JSON request per stdin line, one JSON
 * response per stdout line, until end-of-input. Per-request problems are
 * reported in-band on the response; only startup problems exit nonzero.
 *
 * Flags:
 *   --model demo:<seed>   which model to serve (default demo:0)
 *   --device cpu          placement; only cpu is available here
 *   --dropout <rate>      MC-dropout rate in [0, 1), default 0.1
 *   --max-length <n>      token budget per request, default 128
 */

import * as readline from "node:readline";
import { parseArgs } from "node:util";

import { DemoModel } from "./model";
import { BridgeRequest, ServerOptions, handleRequest } from "./protocol";

function fail(message: string): never {
    process.stderr.write(message + "\n");
    process.exit(1);
}

export function buildModel(argv: string[]): { model: DemoModel; options: ServerOptions } {
    const { values } = parseArgs({
        args: argv,
        options: {
            model: { type: "string", default: "demo:0" },
            device: { type: "string", default: "cpu" },
            dropout: { type: "string", default: "0.1" },
            "max-length": { type: "string", default: "128" },
        },
    });
    if (values.device !== "cpu") {
        fail(`device ${values.device} is not available; this server only runs on cpu`);
    }
    const match = /^demo:(\d+)$/.exec(values.model as string);
    if (!match) {
        fail(`unknown model ${values.model}; expected demo:<seed>`);
    }
    const dropout = Number(values.dropout);
    if (!Number.isFinite(dropout) || dropout < 0 || dropout >= 1) {
        fail(`dropout must be in [0, 1), got ${values.dropout}`);
    }
    const maxLength = Number(values["max-length"]);
    if (!Number.isInteger(maxLength) || maxLength < 1) {
        fail(`max-length must be a positive integer, got ${values["max-length"]}`);
    }
    const model = new DemoModel({ seed: Number(match[1]), dropout });
    return { model, options: { modelName: values.model as string, maxLength } };
}

export function respond(
    model: DemoModel, options: ServerOptions, line: string,
): string {
    let req: BridgeRequest;
    try {
        req = JSON.parse(line) as BridgeRequest;
    } catch (err) {
        return JSON.stringify({ id: null, error: `invalid JSON: ${(err as Error).message}` });
    }
    const id = req.id === undefined ? null : req.id;
    try {
        return JSON.stringify({ id, payload: handleRequest(model, options, req) });
    } catch (err) {
        return JSON.stringify({ id, error: (err as Error).message });
    }
}

function main(): void {
    const { model, options } = buildModel(process.argv.slice(2));
    const rl = readline.createInterface({ input: process.stdin, terminal: false });
    rl.on("line", (line: string) => {
        if (line.trim().length === 0) {
            return;
        }
        process.stdout.write(respond(model, options, line) + "\n");
    });
    rl.on("close", () => {
        process.exit(0);
    });
}

if (require.main === module) {
    main();
}
