/** Greedy longest-match subword tokenizer over a fixed vocabulary.
 *
 * Words are lowercased and consumed left to right, always taking the
 * longest vocabulary entry that matches at the current position. Every
 * letter, digit and common punctuation mark is in the vocabulary as a
 * single-character fallback, so any word yields at least one token;
 * characters outside the fallback set map to the [unk] token.
 *
 * [pad], [cls] and [sep] exist only as reserved embedding rows. They
 * are never emitted into token sequences, so word spans always cover
 * the full sequence with no special positions to skip.
 */

export const PAD_ID = 0;
export const UNK_ID = 1;
export const CLS_ID = 2;
export const SEP_ID = 3;

const RESERVED = ["[pad]", "[unk]", "[cls]", "[sep]"];

const SINGLE_CHARS = "abcdefghijklmnopqrstuvwxyz0123456789" + ".,!?'\"`()[]{}<>@#$%^&*-_+=/\\|~:;";

const MULTI_SUBWORDS = [
    "[mask]",
    "th", "he", "in", "er", "an", "re", "ed", "on", "es", "en", "at", "or",
    "it", "is", "as", "ar", "ow", "ou", "ve", "ch", "sh", "st", "ll",
    "ing", "ion", "ent", "ate", "and", "the", "was", "for", "all", "ver",
    "tion", "ness", "ment", "able", "ible", "less", "ish", "ful", "ous",
    "est", "ive", "ize", "ise", "ly", "un", "dis", "pre", "with",
    "well", "established", "good", "great", "fine", "bad", "poor", "dull",
    "awful", "terrible", "wonderful", "film", "movie", "picture", "story",
    "plot", "actor", "director", "really", "very",
];

export interface Encoded {
    ids: number[];
    /** Half-open [start, end) token ranges, one per word, in order. */
    spans: Array<[number, number]>;
}

export class Tokenizer {
    readonly vocab: string[];
    private readonly index: Map<string, number>;
    private readonly maxPiece: number;

    constructor() {
        this.vocab = [...RESERVED, ...SINGLE_CHARS.split(""), ...MULTI_SUBWORDS];
        this.index = new Map();
        this.maxPiece = 1;
        for (let id = 0; id < this.vocab.length; id++) {
            const piece = this.vocab[id];
            if (id === PAD_ID || id === CLS_ID || id === SEP_ID) {
                continue; // reserved rows never match input text
            }
            this.index.set(piece, id);
            this.maxPiece = Math.max(this.maxPiece, piece.length);
        }
    }

    get vocabSize(): number {
        return this.vocab.length;
    }

    tokenizeWord(word: string): number[] {
        if (word.length === 0) {
            throw new Error("empty word produces zero tokens");
        }
        const text = word.toLowerCase();
        const ids: number[] = [];
        let pos = 0;
        while (pos < text.length) {
            let matched = false;
            const limit = Math.min(this.maxPiece, text.length - pos);
            for (let len = limit; len >= 1; len--) {
                const id = this.index.get(text.slice(pos, pos + len));
                if (id !== undefined) {
                    ids.push(id);
                    pos += len;
                    matched = true;
                    break;
                }
            }
            if (!matched) {
                ids.push(UNK_ID);
                pos += 1;
            }
        }
        return ids;
    }

    encode(words: readonly string[]): Encoded {
        const ids: number[] = [];
        const spans: Array<[number, number]> = [];
        for (const word of words) {
            const start = ids.length;
            ids.push(...this.tokenizeWord(word));
            spans.push([start, ids.length]);
        }
        return { ids, spans };
    }
}
