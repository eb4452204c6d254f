import { describe, expect, it } from "vitest";

import { DemoModel, softmax } from "../src/model";
import { Rng } from "../src/rng";

const WORDS = ["the", "film", "was", "really", "good"];

function maxAbsDiff(a: number[][], b: number[][]): number {
    let worst = 0;
    for (let i = 0; i < a.length; i++) {
        for (let j = 0; j < a[i].length; j++) {
            worst = Math.max(worst, Math.abs(a[i][j] - b[i][j]));
        }
    }
    return worst;
}

describe("Rng", () => {
    it("replays the same stream for the same seed", () => {
        const a = new Rng(42);
        const b = new Rng(42);
        for (let i = 0; i < 100; i++) {
            const x = a.next();
            expect(x).toBe(b.next());
            expect(x).toBeGreaterThanOrEqual(0);
            expect(x).toBeLessThan(1);
        }
    });

    it("folds oversized seeds deterministically", () => {
        expect(new Rng(2 ** 60).next()).toBe(new Rng(2 ** 60).next());
        expect(new Rng(2 ** 32).next()).toBe(new Rng(0).next());
    });

    it("draws finite normals", () => {
        const rng = new Rng(7);
        for (let i = 0; i < 100; i++) {
            expect(Number.isFinite(rng.normal())).toBe(true);
        }
    });
});

describe("forward", () => {
    it("is deterministic and has one logit per class", () => {
        const model = new DemoModel({ seed: 3 });
        const emb = model.embedWords(WORDS);
        const first = model.forward(emb);
        expect(first.length).toBe(model.numClasses);
        expect(model.forward(emb)).toEqual(first);
    });

    it("the same seed rebuilds the same model", () => {
        const a = new DemoModel({ seed: 9 });
        const b = new DemoModel({ seed: 9 });
        expect(a.forward(a.embedWords(WORDS))).toEqual(b.forward(b.embedWords(WORDS)));
    });

    it("rejects malformed embedding matrices", () => {
        const model = new DemoModel({ seed: 3 });
        expect(() => model.forward([])).toThrow(/empty/);
        expect(() => model.forward([[1, 2, 3]])).toThrow(/width/);
        const bad = model.embedWords(["film"]);
        bad[0][0] = Number.NaN;
        expect(() => model.forward(bad)).toThrow(/finite/);
    });
});

describe("gradient", () => {
    it("matches central finite differences in standard mode", () => {
        const model = new DemoModel({ seed: 3 });
        const emb = model.embedWords(WORDS);
        const eps = 1e-5;
        for (let target = 0; target < model.numClasses; target++) {
            const grad = model.gradient(emb, target, "standard");
            for (let t = 0; t < emb.length; t++) {
                for (let j = 0; j < model.embeddingDim; j++) {
                    const plus = emb.map((row) => [...row]);
                    const minus = emb.map((row) => [...row]);
                    plus[t][j] += eps;
                    minus[t][j] -= eps;
                    const fd = (model.forward(plus)[target] - model.forward(minus)[target]) / (2 * eps);
                    expect(Math.abs(fd - grad[t][j])).toBeLessThan(1e-6);
                }
            }
        }
    });

    it("guided mode zeroes negative incoming gradients at the rectifier", () => {
        // One hidden unit, one token: attention is a no-op (w = [1]) and the
        // incoming hidden gradient is exactly the head weight for the target.
        const model = new DemoModel({ seed: 0, embeddingDim: 1, hiddenSize: 1, dropout: 0 });
        Object.assign(model, {
            W1: [[1]], b1: [0], v: [0], W2: [[-2], [3]], b2: [0, 0],
        });
        const emb = [[2]]; // pre = 2 > 0, h = 2
        expect(model.gradient(emb, 0, "standard")).toEqual([[-2]]);
        expect(model.gradient(emb, 0, "guided")).toEqual([[0]]); // gh = -2 blocked
        expect(model.gradient(emb, 1, "standard")).toEqual([[3]]);
        expect(model.gradient(emb, 1, "guided")).toEqual([[3]]);
        // dead unit blocks both modes
        expect(model.gradient([[-1]], 1, "standard")).toEqual([[0]]);
        expect(model.gradient([[-1]], 1, "guided")).toEqual([[0]]);
    });

    it("guided and standard disagree on a served model", () => {
        const model = new DemoModel({ seed: 3 });
        const emb = model.embedWords(WORDS);
        const standard = model.gradient(emb, 0, "standard");
        const guided = model.gradient(emb, 0, "guided");
        expect(maxAbsDiff(standard, guided)).toBeGreaterThan(1e-6);
    });

    it("rejects out-of-range targets", () => {
        const model = new DemoModel({ seed: 3 });
        const emb = model.embedWords(["film"]);
        expect(() => model.gradient(emb, 2, "standard")).toThrow(/out of range/);
        expect(() => model.gradient(emb, -1, "standard")).toThrow(/out of range/);
    });
});

describe("mcForward", () => {
    it("collapses to the deterministic softmax when dropout is off", () => {
        const model = new DemoModel({ seed: 5, dropout: 0 });
        const want = softmax(model.forward(model.embedWords(WORDS)));
        const rows = model.mcForward(WORDS, 5, 123);
        expect(rows.length).toBe(5);
        for (const row of rows) {
            expect(row).toEqual(want);
        }
    });

    it("is seed-reproducible and pass-varying with dropout on", () => {
        const model = new DemoModel({ seed: 5, dropout: 0.4 });
        const a = model.mcForward(WORDS, 20, 99);
        const b = model.mcForward(WORDS, 20, 99);
        expect(a).toEqual(b);
        const c = model.mcForward(WORDS, 20, 100);
        expect(a).not.toEqual(c);
        const flat = new Set(a.map((row) => JSON.stringify(row)));
        expect(flat.size).toBeGreaterThan(1); // passes actually differ
        for (const row of a) {
            const total = row.reduce((s, x) => s + x, 0);
            expect(Math.abs(total - 1)).toBeLessThan(1e-12);
            for (const x of row) {
                expect(x).toBeGreaterThanOrEqual(0);
            }
        }
    });

    it("rejects non-positive or fractional T", () => {
        const model = new DemoModel({ seed: 5 });
        expect(() => model.mcForward(WORDS, 0, 1)).toThrow(/T must be/);
        expect(() => model.mcForward(WORDS, 2.5, 1)).toThrow(/T must be/);
    });
});

describe("hotflipScores", () => {
    it("scores one number per word and matches a finite-difference oracle", () => {
        const model = new DemoModel({ seed: 3, dropout: 0 });
        const words = ["a", "well-established", "film"];
        const gold = 1;
        const scores = model.hotflipScores(words, gold);
        expect(scores.length).toBe(words.length);

        // oracle: numeric d(-log p_gold)/dx, then the same mean-candidate
        // direction and per-word token average, built only from public state
        const { ids, spans } = model.encode(words);
        const emb = ids.map((id) => [...model.E[id]]);
        const loss = (m: number[][]): number => -Math.log(softmax(model.forward(m))[gold]);
        const eps = 1e-6;
        const grad = emb.map((row) => row.map(() => 0));
        for (let t = 0; t < emb.length; t++) {
            for (let j = 0; j < model.embeddingDim; j++) {
                const plus = emb.map((r) => [...r]);
                const minus = emb.map((r) => [...r]);
                plus[t][j] += eps;
                minus[t][j] -= eps;
                grad[t][j] = (loss(plus) - loss(minus)) / (2 * eps);
            }
        }
        const meanEmb = new Array(model.embeddingDim).fill(0);
        let count = 0;
        for (let id = 0; id < model.E.length; id++) {
            if (id === 0 || id === 2 || id === 3) {
                continue; // reserved rows are not substitution candidates
            }
            count += 1;
            for (let j = 0; j < model.embeddingDim; j++) {
                meanEmb[j] += model.E[id][j];
            }
        }
        for (let j = 0; j < model.embeddingDim; j++) {
            meanEmb[j] /= count;
        }
        spans.forEach(([start, end], w) => {
            let want = 0;
            for (let t = start; t < end; t++) {
                for (let j = 0; j < model.embeddingDim; j++) {
                    want += (meanEmb[j] - emb[t][j]) * grad[t][j];
                }
            }
            want /= end - start;
            expect(Math.abs(scores[w] - want)).toBeLessThan(1e-6);
        });
    });

    it("rejects out-of-range gold labels", () => {
        const model = new DemoModel({ seed: 3 });
        expect(() => model.hotflipScores(["film"], 7)).toThrow(/out of range/);
    });
});

describe("embedWords", () => {
    it("returns defensive copies of embedding rows", () => {
        const model = new DemoModel({ seed: 3 });
        const first = model.embedWords(["film"]);
        first[0][0] += 1000;
        expect(model.embedWords(["film"])[0][0]).not.toBe(first[0][0]);
    });

    it("rejects dropout outside [0, 1)", () => {
        expect(() => new DemoModel({ seed: 1, dropout: 1 })).toThrow(/dropout/);
        expect(() => new DemoModel({ seed: 1, dropout: -0.1 })).toThrow(/dropout/);
    });
});
