"""Canonical JSON and DOT output for crystal graphs and global-basis tables."""
from __future__ import annotations

import json
from fractions import Fraction

from .cartan import letter_key
from .vtheta import CrystalGraph, _wkey, format_path, weight_str


def _q(x) -> str:
    return str(Fraction(x))


def canonical_coords(g: CrystalGraph) -> dict:
    """Node id -> residue coordinates reindexed by the ids of the basis nodes of its weight.

    Lattice-basis order depends on discovery order; node ids do not, so this
    is the order-independent form of the residues.
    """
    out = {}
    by_weight: dict = {}
    for n in g.nodes:
        by_weight.setdefault(n.weight, []).append(n)
    for w, nodes in by_weight.items():
        r = len(nodes[0].coords)
        owner = {}
        for n in nodes:
            nz = [k for k, x in enumerate(n.coords) if x]
            if len(nz) == 1 and n.coords[nz[0]] == 1:
                owner.setdefault(nz[0], n.id)
        ks = sorted(range(r), key=lambda k: (owner.get(k, float("inf")), k))
        for n in nodes:
            out[n.id] = [_q(n.coords[k]) for k in ks]
    return out


def graph_to_dict(g: CrystalGraph, report=None) -> dict:
    coords = canonical_coords(g)
    rep = report if report is not None else g.report
    return {
        "datum": g.datum,
        "depth": g.depth,
        "nodes": [{"id": n.id, "weight": weight_str(n.weight), "vac_side": n.vac_side,
                   "coords": coords[n.id], "path": format_path(n.path)} for n in g.nodes],
        "edges": [{"from": a, "to": b, "letter": i}
                  for a, b, i in sorted(g.edges, key=lambda e: (e[0], letter_key(e[2]), e[1]))],
        "sigma": sorted([a, b] for a, b in g.sigma_pairs.items() if a < b),
        "report": rep.to_dict(),
    }


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def graph_json(g: CrystalGraph, report=None) -> str:
    return dumps(graph_to_dict(g, report))


def dot_from_dict(data: dict) -> str:
    lines = [f'digraph "{data["datum"]} depth {data["depth"]}" {{', "  rankdir=TB;"]
    for n in data["nodes"]:
        lines.append(f'  n{n["id"]} [label="{n["path"]}"];')
    for e in data["edges"]:
        lines.append(f'  n{e["from"]} -> n{e["to"]} [label="{e["letter"]}"];')
    for a, b in data["sigma"]:
        lines.append(f"  n{a} -> n{b} [style=dashed, dir=none, constraint=false];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def levels_summary(g: CrystalGraph) -> list[tuple[int, int, int]]:
    """(level, nodes at level, edges leaving level)."""
    lvl = {n.id: n.level for n in g.nodes}
    out = []
    for l in range(g.depth + 1):
        nn = sum(1 for n in g.nodes if n.level == l)
        ne = sum(1 for a, _, _ in g.edges if lvl[a] == l)
        out.append((l, nn, ne))
    return out


def global_basis_to_dict(elements: dict) -> list:
    return [elements[k].to_dict() for k in sorted(elements)]


def gram_to_dict(blocks) -> list:
    return [{"weight": weight_str(b.weight), "matrix": b.to_strings()}
            for b in sorted(blocks, key=lambda b: _wkey(b.weight))]
