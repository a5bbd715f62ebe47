// SVG board rendering from served geometry. The server's coordinates have
// unit adjacent distance; we scale and flip y so row 0 sits at the bottom,
// and draw squares as cells or hexes as polygons. No rules knowledge here.

import { BoardGeom, MoveWire, Placement } from "./types";

const SVG_NS = "http://www.w3.org/2000/svg";
export const CELL = 40;

export interface BoardCallbacks {
  onSiteClick?: (site: number) => void;
}

function hexPoints(cx: number, cy: number, r: number): string {
  const pts: string[] = [];
  for (let i = 0; i < 6; i++) {
    const angle = (Math.PI / 180) * (60 * i + 30);
    pts.push(`${cx + r * Math.cos(angle)},${cy + r * Math.sin(angle)}`);
  }
  return pts.join(" ");
}

export function renderBoard(
  svg: SVGSVGElement,
  board: BoardGeom,
  placement: Placement[],
  legal: MoveWire[],
  callbacks: BoardCallbacks = {},
  lastTo: number | null = null,
): void {
  while (svg.firstChild) svg.removeChild(svg.firstChild);
  const xs = board.sites.map((s) => s.x);
  const ys = board.sites.map((s) => s.y);
  const minX = Math.min(...xs);
  const maxX = Math.max(...xs);
  const minY = Math.min(...ys);
  const maxY = Math.max(...ys);
  const pad = 1;
  svg.setAttribute(
    "viewBox",
    `0 0 ${(maxX - minX + 2 * pad) * CELL} ${(maxY - minY + 2 * pad) * CELL}`,
  );
  const px = (x: number) => (x - minX + pad) * CELL;
  const py = (y: number) => (maxY - y + pad) * CELL; // flip: board y up, screen y down

  const owners = new Map<number, number>();
  for (const p of placement) owners.set(p.site, p.owner);
  const landings = new Map<number, MoveWire[]>();
  for (const mv of legal) {
    const list = landings.get(mv.to) ?? [];
    list.push(mv);
    landings.set(mv.to, list);
  }

  for (const site of board.sites) {
    const cx = px(site.x);
    const cy = py(site.y);
    let cell: SVGElement;
    if (board.shape === "square") {
      cell = document.createElementNS(SVG_NS, "rect");
      cell.setAttribute("x", String(cx - CELL / 2));
      cell.setAttribute("y", String(cy - CELL / 2));
      cell.setAttribute("width", String(CELL));
      cell.setAttribute("height", String(CELL));
    } else {
      cell = document.createElementNS(SVG_NS, "polygon");
      cell.setAttribute("points", hexPoints(cx, cy, CELL / 2));
    }
    cell.setAttribute("class", "cell");
    cell.setAttribute("data-site", String(site.id));
    cell.setAttribute("fill", "#e8dcc0");
    cell.setAttribute("stroke", "#705c33");
    if (landings.has(site.id)) {
      cell.setAttribute("fill", "#bde3b0");
      cell.setAttribute("data-legal", "1");
    }
    if (callbacks.onSiteClick) {
      cell.addEventListener("click", () => callbacks.onSiteClick!(site.id));
    }
    svg.appendChild(cell);

    const owner = owners.get(site.id) ?? 0;
    if (owner !== 0) {
      const stone = document.createElementNS(SVG_NS, "circle");
      stone.setAttribute("cx", String(cx));
      stone.setAttribute("cy", String(cy));
      stone.setAttribute("r", String(CELL * 0.34));
      stone.setAttribute("fill", owner === 1 ? "#222" : "#f7f7f7");
      stone.setAttribute("stroke", "#333");
      stone.setAttribute("class", `stone owner-${owner}`);
      stone.setAttribute("data-stone", String(site.id));
      if (site.id === lastTo) stone.setAttribute("data-last", "1");
      stone.setAttribute("pointer-events", "none");
      svg.appendChild(stone);
    }
  }
}

export function cellCount(svg: SVGSVGElement): number {
  return svg.querySelectorAll(".cell").length;
}
