export interface GameSummary {
  id: string;
  name: string;
  fitness: number | null;
  stage: string | null;
  metrics: Record<string, number> | null;
  cell: [number, number] | null;
  novel: boolean;
  generation: number;
  parent_id: string | null;
}

export interface SiteGeom {
  id: number;
  x: number;
  y: number;
}

export interface BoardGeom {
  shape: "square" | "hex";
  size: number;
  rotation: number;
  n_sites: number;
  sites: SiteGeom[];
}

export interface GameDetail {
  id: string;
  name: string;
  source: string;
  fitness: number | null;
  metrics: Record<string, number> | null;
  board: BoardGeom;
}

export interface MoveWire {
  kind: string;
  from: number | null;
  to: number;
  captures?: number[];
}

export interface Placement {
  site: number;
  owner: number;
  piece: string | null;
}

export interface Terminal {
  winner: number;
  reason: string;
}

export interface SessionView {
  match_id: string;
  game_id: string;
  seats: Record<string, { type: string }>;
  mover: number;
  placement: Placement[];
  legal_moves: MoveWire[];
  terminal: Terminal | null;
  history: MoveWire[];
  last_captures: number[];
}

export class ApiError extends Error {
  constructor(
    public status: number,
    message: string,
    public legalMoves: MoveWire[] = [],
  ) {
    super(message);
  }
}
