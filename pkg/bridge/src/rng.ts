/** Deterministic PRNG so served models and MC dropout replay exactly.
 *
 * mulberry32 keeps all state in one uint32, which survives JSON round
 * trips and needs no bigint support. Seeds arriving from the client can
 * exceed 2^53; they are folded onto uint32 after IEEE rounding, which
 * is itself deterministic, so identical request bytes always yield the
 * same stream.
 */

export class Rng {
    private state: number;

    constructor(seed: number) {
        this.state = (Math.abs(Math.floor(seed)) % 0x100000000) >>> 0;
    }

    /** Uniform in [0, 1). */
    next(): number {
        this.state = (this.state + 0x6d2b79f5) >>> 0;
        let t = this.state;
        t = Math.imul(t ^ (t >>> 15), t | 1);
        t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
        return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
    }

    /** Standard normal via Box-Muller; one sample per call. */
    normal(): number {
        const u = Math.max(this.next(), 1e-12);
        const v = this.next();
        return Math.sqrt(-2 * Math.log(u)) * Math.cos(2 * Math.PI * v);
    }
}
