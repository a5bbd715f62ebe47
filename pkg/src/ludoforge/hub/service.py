"""HTTP playtest service.

Serves archive elites (or plain game files) and runs interactive match
sessions against configured agents. All rules stay server-side: the client
renders served geometry, submits moves, and asks the agent to reply.

Routes (JSON in/out):
  GET  /games                         elite list with fitness and lineage
  GET  /games/{id}                    source + board geometry
  POST /matches                       {game_id, human_seat, agent:{...}}
  GET  /matches/{id}                  placement, mover, legal moves, status
  POST /matches/{id}/moves            {move:{kind,from,to}}
  POST /matches/{id}/agent-move       agent plays if it is to move
Errors: 404 unknown id, 409 out of turn / terminal, 422 illegal move
(with the legal-move list).
"""

from __future__ import annotations

import json
import re
import threading
from dataclasses import dataclass, field
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

import numpy as np

from ..agents import AgentConfig, mcts_move, random_move
from ..engine import (
    CompiledGame,
    GameState,
    IllegalMove,
    Move,
    apply,
    compile_game,
    initial_state,
)
from ..gdl import parse_source
from .persist import final_grid


@dataclass
class GameEntry:
    id: str
    name: str
    source: str
    fitness: float | None = None
    stage: str | None = None
    metrics: dict | None = None
    cell: tuple[int, int] | None = None
    novel: bool = False
    generation: int = 0
    parent_id: str | None = None
    _compiled: CompiledGame | None = None

    def compiled(self) -> CompiledGame:
        if self._compiled is None:
            self._compiled = compile_game(parse_source(self.source))
        return self._compiled


@dataclass
class MatchSession:
    id: str
    game_id: str
    seats: dict[int, dict]  # 1 -> {"type": "human"} | {"type": "mcts", ...}
    state: GameState
    history: list[Move] = field(default_factory=list)
    move_index: int = 0
    lock: threading.Lock = field(default_factory=threading.Lock)


def _move_json(m: Move) -> dict:
    return {"kind": m.kind, "from": m.frm, "to": m.to, "captures": list(m.captures)}


class Registry:
    def __init__(self) -> None:
        self.games: dict[str, GameEntry] = {}
        self.sessions: dict[str, MatchSession] = {}
        self._next_session = 0
        self.lock = threading.Lock()

    def add_run_dir(self, run_dir: str | Path) -> None:
        from .persist import read_events

        grid = final_grid(run_dir)
        baseline: set[tuple[int, int]] = set()
        for ev in read_events(run_dir):
            if ev["t"] == "baseline":
                baseline = {tuple(c) for c in ev["cells"]}
                break
        for rec in grid.values():
            name = _game_name(rec.source) or rec.id
            self.games[rec.id] = GameEntry(
                id=rec.id,
                name=name,
                source=rec.source,
                fitness=rec.fitness.value,
                stage=rec.fitness.stage.name,
                metrics=None if rec.fitness.metrics is None else {
                    k: getattr(rec.fitness.metrics, k)
                    for k in (
                        "balance", "decisiveness", "completion",
                        "agency", "coverage", "strategic_depth",
                    )
                },
                cell=rec.cell,
                novel=rec.cell not in baseline,
                generation=rec.generation,
                parent_id=rec.parent_id,
            )

    def add_game_file(self, path: str | Path) -> None:
        source = Path(path).read_text(encoding="utf-8")
        gid = Path(path).stem
        self.games[gid] = GameEntry(id=gid, name=_game_name(source) or gid, source=source)

    def create_session(self, game_id: str, human_seat: int, agent: dict) -> MatchSession:
        entry = self.games[game_id]
        state = initial_state(entry.compiled())
        seats = {}
        for seat in (1, 2):
            if seat == human_seat:
                seats[seat] = {"type": "human"}
            else:
                seats[seat] = {"type": agent.get("kind", "mcts"), **agent}
        with self.lock:
            sid = f"m{self._next_session:05d}"
            self._next_session += 1
            session = MatchSession(id=sid, game_id=game_id, seats=seats, state=state)
            self.sessions[sid] = session
        return session


def _game_name(source: str) -> str | None:
    m = re.search(r'\(game\s+"([^"]+)"', source)
    return m.group(1) if m else None


def _session_json(reg: Registry, s: MatchSession) -> dict:
    st = s.state
    entry = reg.games[s.game_id]
    board = entry.compiled().board
    placement = [
        {
            "site": int(i),
            "owner": int(st.owner[i]),
            "piece": entry.compiled().ptypes[st.ptype[i]].name if st.owner[i] else None,
        }
        for i in range(board.n_sites)
        if st.owner[i]
    ]
    return {
        "match_id": s.id,
        "game_id": s.game_id,
        "seats": {str(k): v for k, v in s.seats.items()},
        "mover": st.mover,
        "placement": placement,
        "legal_moves": [_move_json(m) for m in st.legal],
        "terminal": None
        if st.terminal is None
        else {"winner": st.terminal.winner, "reason": st.terminal.reason},
        "history": [_move_json(m) for m in s.history],
        "last_captures": list(st.last_captures),
    }


def _board_json(game: CompiledGame) -> dict:
    b = game.board
    return {
        "shape": b.shape,
        "size": b.size,
        "rotation": b.rotation,
        "n_sites": b.n_sites,
        "sites": [
            {"id": i, "x": float(b.coords[i, 0]), "y": float(b.coords[i, 1])}
            for i in range(b.n_sites)
        ],
    }


def make_server(registry: Registry, host: str = "127.0.0.1", port: int = 0) -> ThreadingHTTPServer:
    class Handler(BaseHTTPRequestHandler):
        def log_message(self, *args) -> None:  # quiet
            pass

        def _send(self, code: int, payload: dict | list) -> None:
            body = json.dumps(payload).encode("utf-8")
            self.send_response(code)
            self.send_header("Content-Type", "application/json")
            self.send_header("Content-Length", str(len(body)))
            self.send_header("Access-Control-Allow-Origin", "*")
            self.send_header("Access-Control-Allow-Headers", "Content-Type")
            self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
            self.end_headers()
            self.wfile.write(body)

        def _body(self) -> dict:
            length = int(self.headers.get("Content-Length") or 0)
            if not length:
                return {}
            try:
                return json.loads(self.rfile.read(length).decode("utf-8"))
            except json.JSONDecodeError:
                return {}

        def do_OPTIONS(self) -> None:
            self._send(200, {})

        def do_GET(self) -> None:
            if self.path == "/games":
                out = []
                for e in registry.games.values():
                    out.append(
                        {
                            "id": e.id, "name": e.name, "fitness": e.fitness,
                            "stage": e.stage, "metrics": e.metrics,
                            "cell": None if e.cell is None else list(e.cell),
                            "novel": e.novel, "generation": e.generation,
                            "parent_id": e.parent_id,
                        }
                    )
                self._send(200, out)
                return
            m = re.fullmatch(r"/games/([\w.-]+)", self.path)
            if m:
                entry = registry.games.get(m.group(1))
                if entry is None:
                    self._send(404, {"error": "unknown game"})
                    return
                self._send(
                    200,
                    {
                        "id": entry.id, "name": entry.name, "source": entry.source,
                        "fitness": entry.fitness, "metrics": entry.metrics,
                        "board": _board_json(entry.compiled()),
                    },
                )
                return
            m = re.fullmatch(r"/matches/([\w.-]+)", self.path)
            if m:
                session = registry.sessions.get(m.group(1))
                if session is None:
                    self._send(404, {"error": "unknown match"})
                    return
                with session.lock:
                    self._send(200, _session_json(registry, session))
                return
            self._send(404, {"error": "unknown path"})

        def do_POST(self) -> None:
            if self.path == "/matches":
                body = self._body()
                game_id = body.get("game_id", "")
                if game_id not in registry.games:
                    self._send(404, {"error": "unknown game"})
                    return
                human_seat = int(body.get("human_seat", 1))
                if human_seat not in (1, 2):
                    self._send(422, {"error": "human_seat must be 1 or 2"})
                    return
                agent = body.get("agent", {"kind": "mcts", "iterations": 200})
                session = registry.create_session(game_id, human_seat, agent)
                self._send(201, _session_json(registry, session))
                return
            m = re.fullmatch(r"/matches/([\w.-]+)/moves", self.path)
            if m:
                self._human_move(m.group(1))
                return
            m = re.fullmatch(r"/matches/([\w.-]+)/agent-move", self.path)
            if m:
                self._agent_move(m.group(1))
                return
            self._send(404, {"error": "unknown path"})

        def _human_move(self, sid: str) -> None:
            session = registry.sessions.get(sid)
            if session is None:
                self._send(404, {"error": "unknown match"})
                return
            with session.lock:
                st = session.state
                if st.terminal is not None:
                    self._send(409, {"error": "match is over"})
                    return
                if session.seats[st.mover]["type"] != "human":
                    self._send(409, {"error": "not the human's turn"})
                    return
                body = self._body().get("move", {})
                frm = body.get("from")
                move = Move(
                    kind=str(body.get("kind", "")),
                    frm=None if frm is None else int(frm),
                    to=int(body.get("to", -1)),
                )
                match = next(
                    (
                        lm
                        for lm in st.legal
                        if lm.kind == move.kind and lm.frm == move.frm and lm.to == move.to
                    ),
                    None,
                )
                if match is None:
                    self._send(
                        422,
                        {
                            "error": "illegal move",
                            "legal_moves": [_move_json(x) for x in st.legal],
                        },
                    )
                    return
                game = registry.games[session.game_id].compiled()
                try:
                    session.state = apply(game, st, match)
                except IllegalMove:
                    self._send(
                        422,
                        {
                            "error": "illegal move",
                            "legal_moves": [_move_json(x) for x in st.legal],
                        },
                    )
                    return
                session.history.append(match)
                session.move_index += 1
                self._send(200, _session_json(registry, session))

        def _agent_move(self, sid: str) -> None:
            session = registry.sessions.get(sid)
            if session is None:
                self._send(404, {"error": "unknown match"})
                return
            with session.lock:
                st = session.state
                if st.terminal is not None:
                    self._send(409, {"error": "match is over"})
                    return
                seat = session.seats[st.mover]
                if seat["type"] == "human":
                    self._send(409, {"error": "it is the human's turn"})
                    return
                game = registry.games[session.game_id].compiled()
                rng = np.random.default_rng(
                    (hash(session.id) & 0xFFFF) + session.move_index
                )
                if seat["type"] == "random":
                    move = random_move(game, st, rng)
                else:
                    cfg = AgentConfig(
                        kind="mcts",
                        iterations=int(seat.get("iterations", 200)),
                        think_time=seat.get("think_time"),
                        rollout_cap=int(seat.get("rollout_cap", 60)),
                    )
                    move = mcts_move(game, st, cfg, rng)
                session.state = apply(game, st, move, check=False)
                session.history.append(move)
                session.move_index += 1
                self._send(200, _session_json(registry, session))

    return ThreadingHTTPServer((host, port), Handler)


def serve_forever(registry: Registry, host: str, port: int) -> None:
    server = make_server(registry, host, port)
    addr = server.server_address
    print(
        f"playtest service on http://{addr[0]}:{addr[1]}/  ({len(registry.games)} games)",
        flush=True,
    )
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        server.shutdown()
