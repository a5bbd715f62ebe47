// Page wiring: an archive browser (cards with fitness/novelty badges) and
// a play view (board, status banner, click-to-move against the agent).

import { PlaytestClient } from "./api";
import { renderBoard } from "./board";
import { MatchSession, SessionEvent } from "./session";
import { GameDetail, GameSummary, SessionView } from "./types";

export interface AppElements {
  list: HTMLElement;
  board: SVGSVGElement;
  banner: HTMLElement;
  log: HTMLElement;
}

function outcomeText(view: SessionView, humanSeat: number): string {
  const t = view.terminal!;
  if (t.winner === 0) return `Draw (${t.reason})`;
  return t.winner === humanSeat
    ? `You win! (${t.reason})`
    : `Agent wins (${t.reason})`;
}

export class App {
  client: PlaytestClient;
  session: MatchSession | null = null;
  detail: GameDetail | null = null;
  humanSeat: 1 | 2 = 1;

  constructor(
    private el: AppElements,
    base: string,
  ) {
    this.client = new PlaytestClient(base);
  }

  async browse(): Promise<GameSummary[]> {
    const games = await this.client.listGames();
    this.el.list.innerHTML = "";
    if (games.length === 0) {
      const empty = document.createElement("p");
      empty.className = "empty";
      empty.textContent = "The archive is empty - run a search first.";
      this.el.list.appendChild(empty);
      return games;
    }
    const sorted = [...games].sort(
      (a, b) => (b.fitness ?? -9) - (a.fitness ?? -9),
    );
    for (const g of sorted) {
      const card = document.createElement("div");
      card.className = "card";
      card.dataset.game = g.id;
      const title = document.createElement("h3");
      title.textContent = g.name;
      card.appendChild(title);
      const badges = document.createElement("p");
      badges.className = "badges";
      const bits = [
        g.fitness === null ? "unscored" : `fitness ${g.fitness.toFixed(3)}`,
        `gen ${g.generation}`,
      ];
      if (g.novel) bits.push("novel");
      badges.textContent = bits.join(" | ");
      card.appendChild(badges);
      card.addEventListener("click", () => void this.play(g.id));
      this.el.list.appendChild(card);
    }
    return games;
  }

  async play(gameId: string, agent?: Record<string, unknown>): Promise<void> {
    this.detail = await this.client.gameDetail(gameId);
    this.session = new MatchSession(this.client, this.humanSeat, (ev) =>
      this.onEvent(ev),
    );
    await this.session.start(gameId, agent);
  }

  private onEvent(ev: SessionEvent): void {
    if (ev.type === "rejected") {
      this.el.banner.textContent = `Move rejected: ${ev.message} (${ev.legal.length} legal moves)`;
      this.el.banner.dataset.status = String(ev.status);
      return;
    }
    const view = ev.view;
    const last =
      view.history.length > 0 ? view.history[view.history.length - 1].to : null;
    renderBoard(
      this.el.board,
      this.detail!.board,
      view.placement,
      view.mover === this.humanSeat && !view.terminal
        ? this.session!.candidateMoves()
        : [],
      { onSiteClick: (site) => void this.session!.clickSite(site) },
      last,
    );
    if (ev.type === "terminal") {
      this.el.banner.textContent = outcomeText(view, this.humanSeat);
      this.el.banner.dataset.status = "terminal";
    } else {
      this.el.banner.textContent =
        view.mover === this.humanSeat ? "Your move" : "Agent thinking...";
      this.el.banner.dataset.status = "live";
    }
    this.el.log.textContent = view.history
      .map((m, i) => `${i + 1}. ${m.kind} ${m.from ?? ""}>${m.to}`)
      .join("  ");
  }
}

export function mountApp(root: HTMLElement, base: string): App {
  root.innerHTML = `
    <header><h1>Playtest</h1><p id="banner">Pick a game</p></header>
    <main>
      <section id="games"></section>
      <svg id="board" xmlns="http://www.w3.org/2000/svg"></svg>
      <pre id="log"></pre>
    </main>`;
  return new App(
    {
      list: root.querySelector("#games")!,
      board: root.querySelector("#board")! as unknown as SVGSVGElement,
      banner: root.querySelector("#banner")!,
      log: root.querySelector("#log")!,
    },
    base,
  );
}
