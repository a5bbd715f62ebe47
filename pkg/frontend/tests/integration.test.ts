// @vitest-environment jsdom
//
// Live end-to-end test against the real service: spawns `ludoforge serve`
// over the bundled games and drives the UI in jsdom with real fetch.
// Gated behind LUDOFORGE_INTEGRATION=1 so unit runs stay hermetic.

import { ChildProcess, spawn } from "node:child_process";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { mountApp } from "../src/app";
import { PlaytestClient } from "../src/api";
import { ApiError } from "../src/types";

const RUN = process.env.LUDOFORGE_INTEGRATION === "1";
const suite = RUN ? describe : describe.skip;

let proc: ChildProcess | null = null;
let base = "";

function startService(): Promise<string> {
  return new Promise((resolve, reject) => {
    proc = spawn("ludoforge", ["serve", "--port", "0"], {
      stdio: ["ignore", "pipe", "inherit"],
      env: { ...process.env, PYTHONUNBUFFERED: "1" },
    });
    let buffer = "";
    const timer = setTimeout(() => reject(new Error("service did not start")), 30000);
    proc.stdout!.on("data", (chunk: Buffer) => {
      buffer += chunk.toString();
      const m = buffer.match(/http:\/\/([\d.]+):(\d+)\//);
      if (m) {
        clearTimeout(timer);
        resolve(`http://${m[1]}:${m[2]}`);
      }
    });
    proc.on("exit", (code) => reject(new Error(`service exited early: ${code}`)));
  });
}

suite("playtest loop against the live service", () => {
  beforeAll(async () => {
    base = await startService();
  }, 40000);

  afterAll(() => {
    proc?.kill();
  });

  it("HopThrough as P1: exact legal hops, one move, agent reply, 422 path", async () => {
    const client = new PlaytestClient(base);
    const match = await client.createMatch("hopthrough", 1, { kind: "random" });
    // the engine's opening hops for the bundled 8x8 game
    expect(match.legal_moves.length).toBe(20);
    expect(match.legal_moves.every((m) => m.kind === "Hop")).toBe(true);
    const froms = new Set(match.legal_moves.map((m) => m.from));
    expect([...froms].every((f) => f !== null && f < 8)).toBe(true); // back row jumps

    // an illegal submission is rejected with the legal list attached
    let rejected: ApiError | null = null;
    try {
      await client.submitMove(match.match_id, { kind: "Hop", from: 0, to: 63 });
    } catch (err) {
      rejected = err as ApiError;
    }
    expect(rejected).not.toBeNull();
    expect(rejected!.status).toBe(422);
    expect(rejected!.legalMoves.length).toBe(20);

    // a legal hop is accepted and the agent answers
    const after = await client.submitMove(match.match_id, match.legal_moves[0]);
    expect(after.mover).toBe(2);
    const replied = await client.agentMove(match.match_id);
    expect(replied.mover).toBe(1);
    expect(replied.history.length).toBe(2);
  }, 60000);

  it("a full Havabu game plays to a terminal banner through the UI", async () => {
    const root = document.createElement("div");
    document.body.appendChild(root);
    const app = mountApp(root, base);
    const games = await app.browse();
    expect(games.map((g) => g.id)).toContain("havabu");

    await app.play("havabu", { kind: "random" });
    const banner = root.querySelector("#banner") as HTMLElement;
    const board = root.querySelector("#board") as unknown as SVGSVGElement;
    expect(board.querySelectorAll(".cell").length).toBe(64);

    for (let turn = 0; turn < 80; turn++) {
      const view = app.session!.view!;
      if (view.terminal) break;
      if (app.session!.humanToMove) {
        // click the first highlighted legal cell, like a player would
        const cell = board.querySelector('[data-legal="1"]') as SVGElement;
        expect(cell).not.toBeNull();
        const site = Number(cell.getAttribute("data-site"));
        await app.session!.clickSite(site);
      } else {
        await app.session!.agentReply();
      }
    }
    const final = app.session!.view!;
    expect(final.terminal).not.toBeNull();
    expect(banner.dataset.status).toBe("terminal");
    expect(banner.textContent).toMatch(/win|Draw/i);
  }, 120000);
});
