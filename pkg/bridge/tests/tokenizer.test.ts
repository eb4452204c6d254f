import { describe, expect, it } from "vitest";

import { Rng } from "../src/rng";
import { CLS_ID, PAD_ID, SEP_ID, Tokenizer, UNK_ID } from "../src/tokenizer";

const tok = new Tokenizer();

function pieces(word: string): string[] {
    return tok.tokenizeWord(word).map((id) => tok.vocab[id]);
}

describe("tokenizeWord", () => {
    it("maps vocabulary words to single tokens", () => {
        for (const word of ["film", "good", "the", "was", "director"]) {
            expect(pieces(word)).toEqual([word]);
        }
    });

    it("splits well-established into three committed subwords", () => {
        expect(pieces("well-established")).toEqual(["well", "-", "established"]);
    });

    it("lowercases before matching", () => {
        expect(tok.tokenizeWord("FILM")).toEqual(tok.tokenizeWord("film"));
        expect(tok.tokenizeWord("Well-Established")).toEqual(tok.tokenizeWord("well-established"));
    });

    it("keeps the mask and unk surface forms as single tokens", () => {
        expect(pieces("[MASK]")).toEqual(["[mask]"]);
        expect(tok.tokenizeWord("[UNK]")).toEqual([UNK_ID]);
    });

    it("falls back to single characters and unk", () => {
        expect(pieces("zq")).toEqual(["z", "q"]);
        expect(tok.tokenizeWord("héllo")).toContain(UNK_ID);
    });

    it("rejects the empty word", () => {
        expect(() => tok.tokenizeWord("")).toThrow(/zero tokens/);
    });
});

describe("encode spans", () => {
    const wordPool = [
        "the", "a", "film", "movie", "was", "really", "good", "bad",
        "well-established", "uninspiring", "3.5", "@critic", "#fresh",
        "[MASK]", "[UNK]", "молоко", "zzz", "!?", "plot-line", "director's",
    ];

    it("partitions the token sequence on 50 random sentences", () => {
        const rng = new Rng(20240814);
        for (let s = 0; s < 50; s++) {
            const n = 1 + Math.floor(rng.next() * 12);
            const words: string[] = [];
            for (let i = 0; i < n; i++) {
                words.push(wordPool[Math.floor(rng.next() * wordPool.length)]);
            }
            const { ids, spans } = tok.encode(words);
            expect(spans.length).toBe(words.length);
            expect(spans[0][0]).toBe(0);
            expect(spans[spans.length - 1][1]).toBe(ids.length);
            for (let i = 0; i < spans.length; i++) {
                const [start, end] = spans[i];
                expect(end).toBeGreaterThan(start); // every word owns >= 1 token
                if (i > 0) {
                    expect(start).toBe(spans[i - 1][1]); // contiguous, no overlap
                }
            }
            for (const id of ids) {
                expect([PAD_ID, CLS_ID, SEP_ID]).not.toContain(id);
            }
        }
    });

    it("is deterministic", () => {
        const words = ["a", "well-established", "plot"];
        expect(tok.encode(words)).toEqual(tok.encode(words));
    });
});
