// @vitest-environment jsdom
import { describe, expect, it } from "vitest";

import { cellCount, renderBoard } from "../src/board";
import { BoardGeom, MoveWire, Placement } from "../src/types";

function squareBoard(n: number): BoardGeom {
  const sites = [];
  for (let r = 0; r < n; r++)
    for (let c = 0; c < n; c++) sites.push({ id: r * n + c, x: c, y: r });
  return { shape: "square", size: n, rotation: 0, n_sites: n * n, sites };
}

function hexBoard(n: number): BoardGeom {
  // hex-of-hexagons axial coordinates, same enumeration as the server
  const sites = [];
  let id = 0;
  const rng = n - 1;
  for (let r = -rng; r <= rng; r++) {
    for (let q = -rng; q <= rng; q++) {
      if (Math.abs(q + r) <= rng) {
        sites.push({ id: id++, x: q + r / 2, y: (r * Math.sqrt(3)) / 2 });
      }
    }
  }
  return { shape: "hex", size: n, rotation: 0, n_sites: sites.length, sites };
}

function svg(): SVGSVGElement {
  return document.createElementNS(
    "http://www.w3.org/2000/svg",
    "svg",
  ) as SVGSVGElement;
}

describe("board rendering", () => {
  it("draws 64 cells for a square-8 board", () => {
    const el = svg();
    renderBoard(el, squareBoard(8), [], []);
    expect(cellCount(el)).toBe(64);
    expect(el.querySelectorAll("rect").length).toBe(64);
  });

  it("draws 61 hexagons for a hex-5 board", () => {
    const el = svg();
    const board = hexBoard(5);
    expect(board.n_sites).toBe(61); // 3n^2 - 3n + 1
    renderBoard(el, board, [], []);
    expect(el.querySelectorAll("polygon").length).toBe(61);
  });

  it("rotated geometry renders the same cell count", () => {
    const board = hexBoard(4);
    const rotated: BoardGeom = {
      ...board,
      rotation: 90,
      sites: board.sites.map((s) => ({ id: s.id, x: -s.y, y: s.x })),
    };
    const el = svg();
    renderBoard(el, rotated, [], []);
    expect(cellCount(el)).toBe(board.n_sites);
  });

  it("marks placements and legal landings", () => {
    const el = svg();
    const placement: Placement[] = [
      { site: 0, owner: 1, piece: "PIECE_ALPHA" },
      { site: 5, owner: 2, piece: "PIECE_ALPHA" },
    ];
    const legal: MoveWire[] = [{ kind: "Add", from: null, to: 7 }];
    renderBoard(el, squareBoard(3), placement, legal, {}, 0);
    expect(el.querySelectorAll(".stone").length).toBe(2);
    expect(el.querySelectorAll('[data-legal="1"]').length).toBe(1);
    expect(
      el.querySelector('[data-legal="1"]')!.getAttribute("data-site"),
    ).toBe("7");
    expect(el.querySelector('[data-last="1"]')).not.toBeNull();
  });

  it("highlights exactly the served legal moves, never more", () => {
    const el = svg();
    const legal: MoveWire[] = [
      { kind: "Hop", from: 0, to: 6 },
      { kind: "Hop", from: 1, to: 7 },
    ];
    renderBoard(el, squareBoard(3), [], legal);
    const highlighted = [...el.querySelectorAll('[data-legal="1"]')].map((c) =>
      Number(c.getAttribute("data-site")),
    );
    expect(new Set(highlighted)).toEqual(new Set([6, 7]));
  });

  it("clicking a cell reports its site id", () => {
    const el = svg();
    document.body.appendChild(el as unknown as Node);
    let clicked = -1;
    renderBoard(el, squareBoard(3), [], [], {
      onSiteClick: (site) => (clicked = site),
    });
    const cell = el.querySelector('[data-site="4"]') as SVGElement;
    cell.dispatchEvent(new MouseEvent("click", { bubbles: true }));
    expect(clicked).toBe(4);
  });
});
