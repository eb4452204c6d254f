import { ChildProcessWithoutNullStreams, spawn } from "node:child_process";
import * as path from "node:path";
import * as readline from "node:readline";
import { afterEach, describe, expect, it } from "vitest";

const SERVER = path.join(__dirname, "..", "dist", "server.js");

interface Reply {
    id: unknown;
    payload?: Record<string, unknown>;
    error?: string;
}

/** Collects stdout lines so tests can both await replies and count them. */
class Client {
    readonly proc: ChildProcessWithoutNullStreams;
    readonly lines: Reply[] = [];
    private waiters: Array<() => void> = [];

    constructor(args: string[]) {
        this.proc = spawn(process.execPath, [SERVER, ...args], { stdio: "pipe" });
        const rl = readline.createInterface({ input: this.proc.stdout });
        rl.on("line", (line) => {
            this.lines.push(JSON.parse(line));
            const pending = this.waiters;
            this.waiters = [];
            for (const wake of pending) {
                wake();
            }
        });
    }

    sendRaw(text: string): void {
        this.proc.stdin.write(text);
    }

    send(req: Record<string, unknown>): void {
        this.sendRaw(JSON.stringify(req) + "\n");
    }

    async waitFor(count: number, ms = 5000): Promise<Reply[]> {
        const deadline = Date.now() + ms;
        while (this.lines.length < count) {
            if (Date.now() > deadline) {
                throw new Error(`timed out waiting for ${count} replies, have ${this.lines.length}`);
            }
            await new Promise<void>((resolve) => {
                this.waiters.push(resolve);
                setTimeout(resolve, 50);
            });
        }
        return this.lines.slice(0, count);
    }

    async close(): Promise<number | null> {
        this.proc.stdin.end();
        return new Promise((resolve) => this.proc.on("exit", (code) => resolve(code)));
    }

    kill(): void {
        if (this.proc.exitCode === null) {
            this.proc.kill();
        }
    }
}

let client: Client | undefined;

afterEach(() => {
    client?.kill();
    client = undefined;
});

describe("server process", () => {
    it("answers pipelined requests exactly once each, in order", async () => {
        client = new Client(["--model", "demo:7", "--dropout", "0"]);
        // ids deliberately out of order; response order must follow requests
        client.send({ id: 3, op: "info" });
        client.send({ id: 1, op: "spans", words: ["a", "good", "film"] });
        client.send({ id: 2, op: "nope" });
        const replies = await client.waitFor(3);
        expect(replies.map((r) => r.id)).toEqual([3, 1, 2]);
        expect((replies[0].payload as { protocol_version: number }).protocol_version).toBe(1);
        expect((replies[1].payload as { spans: unknown[] }).spans).toHaveLength(3);
        expect(replies[2].error).toMatch(/unknown op/);
        expect(replies[2].payload).toBeUndefined();
        await new Promise((resolve) => setTimeout(resolve, 200));
        expect(client.lines).toHaveLength(3); // no duplicate or extra replies
        expect(await client.close()).toBe(0); // clean exit on end of input
    }, 15000);

    it("is deterministic across identical forward requests", async () => {
        client = new Client(["--model", "demo:7", "--dropout", "0"]);
        client.send({ id: 1, op: "embed", words: ["really", "terrible", "plot"] });
        const [embedReply] = await client.waitFor(1);
        const embeddings = (embedReply.payload as { embeddings: number[][] }).embeddings;
        client.send({ id: 2, op: "forward", embeddings });
        client.send({ id: 3, op: "forward", embeddings });
        const replies = await client.waitFor(3);
        expect(JSON.stringify(replies[1].payload)).toBe(JSON.stringify(replies[2].payload));
        const logits = (replies[1].payload as { logits: number[] }).logits;
        expect(logits).toHaveLength(2);
        await client.close();
    }, 15000);

    it("reports unparseable lines in-band with a null id and keeps serving", async () => {
        client = new Client([]);
        client.sendRaw("this is not json\n");
        client.sendRaw("\n"); // blank lines are skipped, not answered
        client.send({ id: 9, op: "info" });
        const replies = await client.waitFor(2);
        expect(replies[0].id).toBeNull();
        expect(replies[0].error).toMatch(/invalid JSON/);
        expect(replies[1].id).toBe(9);
        expect(replies[1].payload).toBeDefined();
        await client.close();
    }, 15000);

    it("echoes a null id when the request has none", async () => {
        client = new Client([]);
        client.send({ op: "info" });
        const [reply] = await client.waitFor(1);
        expect(reply.id).toBeNull();
        await client.close();
    }, 15000);

    it("honours --max-length and --dropout flags", async () => {
        client = new Client(["--max-length", "2", "--dropout", "0.25"]);
        client.send({ id: 1, op: "info" });
        client.send({ id: 2, op: "spans", words: ["a", "good", "film"] });
        const replies = await client.waitFor(2);
        const info = replies[0].payload as { max_length: number; dropout: number };
        expect(info.max_length).toBe(2);
        expect(info.dropout).toBe(0.25);
        expect(replies[1].error).toMatch(/max_length is 2/);
        await client.close();
    }, 15000);

    it("refuses bad startup flags with a nonzero exit", async () => {
        const cases: Array<[string[], RegExp]> = [
            [["--device", "cuda"], /cpu/],
            [["--model", "bert-base"], /unknown model/],
            [["--dropout", "1.5"], /dropout/],
            [["--max-length", "0"], /max-length/],
        ];
        for (const [args, message] of cases) {
            const proc = spawn(process.execPath, [SERVER, ...args], { stdio: "pipe" });
            let stderr = "";
            proc.stderr.on("data", (chunk) => {
                stderr += String(chunk);
            });
            const code = await new Promise<number | null>((resolve) =>
                proc.on("exit", (c) => resolve(c)));
            expect(code).toBe(1);
            expect(stderr).toMatch(message);
        }
    }, 15000);
});
