/** Request validation and dispatch for the line-delimited bridge protocol.
 *
 * Wire format, one JSON object per line in each direction:
 *     request:  {"id": <unique>, "op": <name>, ...op fields}
 *     response: {"id": <echo>, "payload": {...}}  on success
 *               {"id": <echo>, "error": "<message>"}  on failure
 *
 * The schema version travels in the info payload; clients refuse to
 * talk to servers with a different number.
 */

import { DemoModel, softmax } from "./model";

export const PROTOCOL_VERSION = 1;

export interface BridgeRequest {
    id?: unknown;
    op?: unknown;
    words?: unknown;
    embeddings?: unknown;
    target_class?: unknown;
    gradient_mode?: unknown;
    T?: unknown;
    seed?: unknown;
}

export interface ServerOptions {
    modelName: string;
    maxLength: number;
}

function requireWords(req: BridgeRequest): string[] {
    if (!Array.isArray(req.words) || req.words.length === 0) {
        throw new Error("op needs a non-empty words array");
    }
    for (const w of req.words) {
        if (typeof w !== "string") {
            throw new Error("words must be strings");
        }
    }
    return req.words as string[];
}

function requireEmbeddings(req: BridgeRequest): number[][] {
    if (!Array.isArray(req.embeddings)) {
        throw new Error("op needs an embeddings matrix");
    }
    return req.embeddings as number[][];
}

function requireInt(value: unknown, name: string): number {
    if (typeof value !== "number" || !Number.isFinite(value) || !Number.isInteger(value)) {
        throw new Error(`${name} must be an integer`);
    }
    return value;
}

function checkLength(model: DemoModel, words: string[], maxLength: number): void {
    const { ids } = model.encode(words);
    if (ids.length > maxLength) {
        throw new Error(`input has ${ids.length} tokens, max_length is ${maxLength}`);
    }
}

export function handleRequest(
    model: DemoModel, options: ServerOptions, req: BridgeRequest,
): Record<string, unknown> {
    switch (req.op) {
        case "info":
            return {
                protocol_version: PROTOCOL_VERSION,
                model_name: options.modelName,
                num_classes: model.numClasses,
                embedding_dim: model.embeddingDim,
                max_length: options.maxLength,
                guided: true,
                dropout: model.dropout,
            };
        case "spans": {
            const words = requireWords(req);
            checkLength(model, words, options.maxLength);
            return { spans: model.encode(words).spans };
        }
        case "embed": {
            const words = requireWords(req);
            checkLength(model, words, options.maxLength);
            return { embeddings: model.embedWords(words) };
        }
        case "forward":
            return { logits: model.forward(requireEmbeddings(req)) };
        case "gradient": {
            const mode = req.gradient_mode ?? "standard";
            if (mode !== "standard" && mode !== "guided") {
                throw new Error(`unknown gradient_mode ${String(mode)}`);
            }
            const target = requireInt(req.target_class, "target_class");
            return { gradients: model.gradient(requireEmbeddings(req), target, mode) };
        }
        case "mc_forward": {
            const words = requireWords(req);
            checkLength(model, words, options.maxLength);
            const T = requireInt(req.T, "T");
            const seed = typeof req.seed === "number" ? req.seed : 0;
            return { softmaxes: model.mcForward(words, T, seed) };
        }
        case "hotflip_scores": {
            const words = requireWords(req);
            checkLength(model, words, options.maxLength);
            const target = requireInt(req.target_class, "target_class");
            return { scores: model.hotflipScores(words, target) };
        }
        default:
            throw new Error(`unknown op ${JSON.stringify(req.op ?? null)}`);
    }
}

/** Convenience used by tests: softmax of a deterministic forward pass. */
export function evalSoftmax(model: DemoModel, words: readonly string[]): number[] {
    return softmax(model.forward(model.embedWords(words)));
}
