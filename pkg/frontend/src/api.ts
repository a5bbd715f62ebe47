import {
  ApiError,
  GameDetail,
  GameSummary,
  MoveWire,
  SessionView,
} from "./types";

async function request<T>(
  base: string,
  method: string,
  path: string,
  body?: unknown,
): Promise<T> {
  const resp = await fetch(`${base}${path}`, {
    method,
    headers: { "Content-Type": "application/json" },
    body: body === undefined ? undefined : JSON.stringify(body),
  });
  const payload = await resp.json().catch(() => ({}));
  if (!resp.ok) {
    throw new ApiError(
      resp.status,
      (payload as { error?: string }).error ?? `HTTP ${resp.status}`,
      (payload as { legal_moves?: MoveWire[] }).legal_moves ?? [],
    );
  }
  return payload as T;
}

export class PlaytestClient {
  constructor(private base: string) {}

  listGames(): Promise<GameSummary[]> {
    return request(this.base, "GET", "/games");
  }

  gameDetail(id: string): Promise<GameDetail> {
    return request(this.base, "GET", `/games/${id}`);
  }

  createMatch(
    gameId: string,
    humanSeat: 1 | 2,
    agent: Record<string, unknown> = { kind: "mcts", iterations: 200 },
  ): Promise<SessionView> {
    return request(this.base, "POST", "/matches", {
      game_id: gameId,
      human_seat: humanSeat,
      agent,
    });
  }

  matchState(matchId: string): Promise<SessionView> {
    return request(this.base, "GET", `/matches/${matchId}`);
  }

  submitMove(matchId: string, move: MoveWire): Promise<SessionView> {
    return request(this.base, "POST", `/matches/${matchId}/moves`, {
      move: { kind: move.kind, from: move.from, to: move.to },
    });
  }

  agentMove(matchId: string): Promise<SessionView> {
    return request(this.base, "POST", `/matches/${matchId}/agent-move`);
  }
}
