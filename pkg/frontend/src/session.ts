// Match session state machine. The client holds no rules: it only offers
// the server's legal moves, submits selections, and asks the agent to
// reply. For movement games a move needs a from-piece and a landing, so
// clicks pass through a small selection buffer.

import { PlaytestClient } from "./api";
import { ApiError, MoveWire, SessionView } from "./types";

export type SessionEvent =
  | { type: "state"; view: SessionView }
  | { type: "rejected"; status: number; message: string; legal: MoveWire[] }
  | { type: "terminal"; view: SessionView };

export class MatchSession {
  view: SessionView | null = null;
  selectedFrom: number | null = null;
  private busy = false;

  constructor(
    private client: PlaytestClient,
    private humanSeat: 1 | 2,
    private emit: (ev: SessionEvent) => void,
  ) {}

  get matchId(): string {
    if (!this.view) throw new Error("no active match");
    return this.view.match_id;
  }

  get humanToMove(): boolean {
    return (
      !!this.view && !this.view.terminal && this.view.mover === this.humanSeat
    );
  }

  async start(gameId: string, agent?: Record<string, unknown>): Promise<void> {
    this.view = await this.client.createMatch(gameId, this.humanSeat, agent);
    this.emitState();
  }

  /** Moves the human could make from the current selection state. */
  candidateMoves(): MoveWire[] {
    if (!this.view) return [];
    if (this.selectedFrom === null) return this.view.legal_moves;
    return this.view.legal_moves.filter((m) => m.from === this.selectedFrom);
  }

  /** Click handling: select a piece, or land a move the server listed. */
  async clickSite(site: number): Promise<void> {
    if (!this.view || this.view.terminal || this.busy) return;
    if (this.view.mover !== this.humanSeat) return;
    const legal = this.view.legal_moves;
    const needsFrom = legal.some((m) => m.from !== null);
    if (needsFrom && this.selectedFrom === null) {
      if (legal.some((m) => m.from === site)) this.selectedFrom = site;
      this.emitState();
      return;
    }
    const pool = this.candidateMoves();
    const move = pool.find((m) => m.to === site);
    if (!move) {
      this.selectedFrom = null;
      this.emitState();
      return;
    }
    await this.submit(move);
  }

  /** Submit a move; on 422 the server's legal list is surfaced. */
  async submit(move: MoveWire): Promise<void> {
    if (!this.view) return;
    this.busy = true;
    try {
      this.view = await this.client.submitMove(this.matchId, move);
      this.selectedFrom = null;
      this.emitState();
      if (!this.view.terminal) await this.agentReply();
    } catch (err) {
      if (err instanceof ApiError) {
        this.emit({
          type: "rejected",
          status: err.status,
          message: err.message,
          legal: err.legalMoves,
        });
      } else {
        throw err;
      }
    } finally {
      this.busy = false;
    }
  }

  async agentReply(): Promise<void> {
    if (!this.view || this.view.terminal) return;
    if (this.view.mover === this.humanSeat) return;
    this.view = await this.client.agentMove(this.matchId);
    this.emitState();
  }

  private emitState(): void {
    if (!this.view) return;
    if (this.view.terminal) {
      this.emit({ type: "terminal", view: this.view });
    } else {
      this.emit({ type: "state", view: this.view });
    }
  }
}
