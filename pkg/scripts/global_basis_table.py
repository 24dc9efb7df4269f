"""Print the upper global basis and the observed pairing statistics.

    python3 scripts/global_basis_table.py --datum aff:2 --depth 3
"""
import argparse

from symcrystal.canonical import Canonical, verify_balanced
from symcrystal.cartan import parse_datum
from symcrystal.vtheta import build_crystal, format_path, weight_str


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--datum", default="aff:2")
    ap.add_argument("--depth", type=int, default=2)
    ap.add_argument("--quiet", action="store_true", help="only print the summary")
    args = ap.parse_args()
    g = build_crystal(parse_datum(args.datum, args.depth), args.depth)
    cn = Canonical(g.vt)
    els = cn.global_basis_all(g)
    if not args.quiet:
        for n in g.nodes:
            e = els[n.id]
            print(f"{n.id:>4} {str(weight_str(n.weight)):<28} {format_path(n.path):<28} {e.vector.to_string()}")
    rep = verify_balanced(cn, g, els)
    for line in rep.lines():
        print(line)
    for k in ("near_orthonormal_pairs", "proxy_closed_under_divided_E"):
        print(f"{k}: {rep.stats[k]}")


if __name__ == "__main__":
    main()
