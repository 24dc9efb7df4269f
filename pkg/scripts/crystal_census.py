"""Node counts, orbit overlap and dimension checks for a range of depths.

    python3 scripts/crystal_census.py --datum ainf --max-depth 3
"""
import argparse
import time

from symcrystal.cartan import parse_datum
from symcrystal.vtheta import build_crystal, quotient_by_sigma


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--datum", default="ainf")
    ap.add_argument("--max-depth", type=int, default=3)
    ap.add_argument("--threads", type=int, default=1)
    args = ap.parse_args()
    print("depth  datum     nodes  edges  per-level              +orbit  -orbit  overlap  quotient  ok    secs")
    for depth in range(args.max_depth + 1):
        t = time.monotonic()
        g = build_crystal(parse_datum(args.datum, depth), depth, threads=args.threads)
        s = g.report.stats
        q = len(quotient_by_sigma(g).classes)
        print(f"{depth:<6} {g.datum:<9} {len(g.nodes):<6} {len(g.edges):<6} {str(s['nodes_per_level']):<22} "
              f"{s['vac_plus_orbit']:<7} {s['vac_minus_orbit']:<7} {s['orbit_overlap']:<8} {q:<9} "
              f"{str(g.report.ok):<5} {time.monotonic() - t:.1f}")
        for line in g.report.lines():
            if line.startswith("[FAIL]"):
                print("   ", line)


if __name__ == "__main__":
    main()
