/** Small attention-pooled text classifier served over the bridge.
 *
 * Per token embedding x_t:
 *     pre_t = W1 x_t + b1          hidden pre-activation (k)
 *     h_t   = relu(pre_t)          optionally MC-dropped at inference
 *     a_t   = v . h_t              attention score (scalar)
 *     w     = softmax(a)           over tokens
 *     p     = sum_t w_t h_t        pooled representation (k)
 *     z     = W2 p + b2            logits (C)
 *
 * The attention mixing makes token gradients genuinely token-dependent,
 * unlike plain mean pooling where every row of dz/dx is identical.
 * Parameters are drawn from a seeded PRNG; the same seed always serves
 * the same model. forward and gradient take caller-supplied embedding
 * matrices so off-manifold points (interpolations, noisy copies) can be
 * probed; only the word-based ops touch the embedding table.
 */

import { Rng } from "./rng";
import { Tokenizer, Encoded } from "./tokenizer";

export interface ModelConfig {
    seed: number;
    embeddingDim?: number;
    hiddenSize?: number;
    numClasses?: number;
    /** MC-dropout rate on hidden units; 0 disables dropout entirely. */
    dropout?: number;
}

const E_SCALE = 0.6;
const W1_SCALE = 0.5;
const V_SCALE = 0.7;
const W2_SCALE = 0.8;
const BIAS_SCALE = 0.1;

function matrix(rows: number, cols: number, scale: number, rng: Rng): number[][] {
    const out: number[][] = [];
    for (let i = 0; i < rows; i++) {
        const row: number[] = [];
        for (let j = 0; j < cols; j++) {
            row.push(scale * rng.normal());
        }
        out.push(row);
    }
    return out;
}

function vector(n: number, scale: number, rng: Rng): number[] {
    const out: number[] = [];
    for (let i = 0; i < n; i++) {
        out.push(scale * rng.normal());
    }
    return out;
}

export function softmax(z: readonly number[]): number[] {
    const top = Math.max(...z);
    const exps = z.map((x) => Math.exp(x - top));
    const total = exps.reduce((s, x) => s + x, 0);
    return exps.map((x) => x / total);
}

interface ForwardState {
    pre: number[][];   // n x k
    h: number[][];     // n x k (after dropout when active)
    w: number[];       // n attention weights
    p: number[];       // k pooled
    logits: number[];  // C
}

export class DemoModel {
    readonly tokenizer: Tokenizer;
    readonly seed: number;
    readonly embeddingDim: number;
    readonly hiddenSize: number;
    readonly numClasses: number;
    readonly dropout: number;
    readonly E: number[][];
    readonly W1: number[][];
    readonly b1: number[];
    readonly v: number[];
    readonly W2: number[][];
    readonly b2: number[];

    constructor(config: ModelConfig) {
        this.tokenizer = new Tokenizer();
        this.seed = config.seed;
        this.embeddingDim = config.embeddingDim ?? 12;
        this.hiddenSize = config.hiddenSize ?? 10;
        this.numClasses = config.numClasses ?? 2;
        this.dropout = config.dropout ?? 0.1;
        if (this.dropout < 0 || this.dropout >= 1) {
            throw new Error("dropout must be in [0, 1)");
        }
        const rng = new Rng(config.seed);
        this.E = matrix(this.tokenizer.vocabSize, this.embeddingDim, E_SCALE, rng);
        this.W1 = matrix(this.hiddenSize, this.embeddingDim, W1_SCALE, rng);
        this.b1 = vector(this.hiddenSize, BIAS_SCALE, rng);
        this.v = vector(this.hiddenSize, V_SCALE, rng);
        this.W2 = matrix(this.numClasses, this.hiddenSize, W2_SCALE, rng);
        this.b2 = vector(this.numClasses, BIAS_SCALE, rng);
    }

    encode(words: readonly string[]): Encoded {
        return this.tokenizer.encode(words);
    }

    embedWords(words: readonly string[]): number[][] {
        return this.encode(words).ids.map((id) => [...this.E[id]]);
    }

    private run(embeddings: readonly number[][], dropRng?: Rng): ForwardState {
        const n = embeddings.length;
        const k = this.hiddenSize;
        const keep = 1 - this.dropout;
        const pre: number[][] = [];
        const h: number[][] = [];
        const scores: number[] = [];
        for (let t = 0; t < n; t++) {
            const x = embeddings[t];
            const preT: number[] = [];
            const hT: number[] = [];
            for (let i = 0; i < k; i++) {
                let acc = this.b1[i];
                const row = this.W1[i];
                for (let j = 0; j < x.length; j++) {
                    acc += row[j] * x[j];
                }
                preT.push(acc);
                let unit = acc > 0 ? acc : 0;
                if (dropRng && this.dropout > 0) {
                    // inverted dropout keeps the eval-time scale
                    unit = dropRng.next() < this.dropout ? 0 : unit / keep;
                }
                hT.push(unit);
            }
            pre.push(preT);
            h.push(hT);
            let a = 0;
            for (let i = 0; i < k; i++) {
                a += this.v[i] * hT[i];
            }
            scores.push(a);
        }
        const w = softmax(scores);
        const p = new Array(k).fill(0);
        for (let t = 0; t < n; t++) {
            for (let i = 0; i < k; i++) {
                p[i] += w[t] * h[t][i];
            }
        }
        const logits: number[] = [];
        for (let c = 0; c < this.numClasses; c++) {
            let acc = this.b2[c];
            for (let i = 0; i < k; i++) {
                acc += this.W2[c][i] * p[i];
            }
            logits.push(acc);
        }
        return { pre, h, w, p, logits };
    }

    forward(embeddings: readonly number[][]): number[] {
        this.checkEmbeddings(embeddings);
        return this.run(embeddings).logits;
    }

    /**
     * d(sum_c dz[c] * z[c]) / d embeddings through the attention pool.
     *
     * dL/dh_t = w_t * g + dL/da_t * v  with  g = W2^T dz  and the
     * softmax jacobian giving  dL/da_t = w_t * (g.h_t - g.p).
     * Guided mode zeroes rectifier gradients where the unit was off or
     * the incoming gradient negative.
     */
    private backward(
        embeddings: readonly number[][], dz: readonly number[], mode: "standard" | "guided",
    ): number[][] {
        const state = this.run(embeddings);
        const n = embeddings.length;
        const k = this.hiddenSize;
        const g = new Array(k).fill(0);
        for (let c = 0; c < this.numClasses; c++) {
            for (let i = 0; i < k; i++) {
                g[i] += this.W2[c][i] * dz[c];
            }
        }
        let gDotP = 0;
        for (let i = 0; i < k; i++) {
            gDotP += g[i] * state.p[i];
        }
        const out: number[][] = [];
        for (let t = 0; t < n; t++) {
            let gDotH = 0;
            for (let i = 0; i < k; i++) {
                gDotH += g[i] * state.h[t][i];
            }
            const da = state.w[t] * (gDotH - gDotP);
            const gx = new Array(this.embeddingDim).fill(0);
            for (let i = 0; i < k; i++) {
                const gh = state.w[t] * g[i] + da * this.v[i];
                const active = state.pre[t][i] > 0;
                const pass = mode === "guided" ? active && gh > 0 : active;
                if (!pass) {
                    continue;
                }
                for (let j = 0; j < this.embeddingDim; j++) {
                    gx[j] += this.W1[i][j] * gh;
                }
            }
            out.push(gx);
        }
        return out;
    }

    gradient(
        embeddings: readonly number[][], targetClass: number, mode: "standard" | "guided",
    ): number[][] {
        this.checkEmbeddings(embeddings);
        if (!Number.isInteger(targetClass) || targetClass < 0 || targetClass >= this.numClasses) {
            throw new Error(`target_class ${targetClass} out of range`);
        }
        const dz = new Array(this.numClasses).fill(0);
        dz[targetClass] = 1;
        return this.backward(embeddings, dz, mode);
    }

    /** d(-log softmax(z)[gold]) / d embeddings, always standard mode. */
    lossGradient(embeddings: readonly number[][], gold: number): number[][] {
        const probs = softmax(this.run(embeddings).logits);
        const dz = probs.map((pc, c) => pc - (c === gold ? 1 : 0));
        return this.backward(embeddings, dz, "standard");
    }

    mcForward(words: readonly string[], T: number, seed: number): number[][] {
        if (!Number.isInteger(T) || T < 1) {
            throw new Error("T must be >= 1");
        }
        const emb = this.embedWords(words);
        const rng = new Rng(seed);
        const rows: number[][] = [];
        for (let pass = 0; pass < T; pass++) {
            const state = this.dropout > 0 ? this.run(emb, rng) : this.run(emb);
            rows.push(softmax(state.logits));
        }
        return rows;
    }

    /**
     * Per-word mean first-order loss change over vocabulary substitution
     * candidates: mean_v (e_v - x_t) . dL/dx_t, averaged over each
     * word's tokens. Reserved never-emitted rows are not candidates.
     */
    hotflipScores(words: readonly string[], gold: number): number[] {
        if (!Number.isInteger(gold) || gold < 0 || gold >= this.numClasses) {
            throw new Error(`target_class ${gold} out of range`);
        }
        const { ids, spans } = this.encode(words);
        const emb = ids.map((id) => this.E[id]);
        const grad = this.lossGradient(emb, gold);
        const meanEmb = new Array(this.embeddingDim).fill(0);
        let candidates = 0;
        for (let id = 0; id < this.E.length; id++) {
            if (id === 0 || id === 2 || id === 3) {
                continue;
            }
            candidates += 1;
            for (let j = 0; j < this.embeddingDim; j++) {
                meanEmb[j] += this.E[id][j];
            }
        }
        for (let j = 0; j < this.embeddingDim; j++) {
            meanEmb[j] /= candidates;
        }
        return spans.map(([start, end]) => {
            let total = 0;
            for (let t = start; t < end; t++) {
                for (let j = 0; j < this.embeddingDim; j++) {
                    total += (meanEmb[j] - emb[t][j]) * grad[t][j];
                }
            }
            return total / (end - start);
        });
    }

    private checkEmbeddings(embeddings: readonly number[][]): void {
        if (embeddings.length === 0) {
            throw new Error("embeddings matrix is empty");
        }
        for (const row of embeddings) {
            if (row.length !== this.embeddingDim) {
                throw new Error(
                    `embedding rows must have width ${this.embeddingDim}, got ${row.length}`,
                );
            }
            for (const x of row) {
                if (typeof x !== "number" || !Number.isFinite(x)) {
                    throw new Error("embeddings must be finite numbers");
                }
            }
        }
    }
}
