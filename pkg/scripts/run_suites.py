"""Run every verification suite with wall-clock timings.

    python3 scripts/run_suites.py
"""
import time

from symcrystal.cli import SUITES, RunConfig

PLAN = [
    ("shuffle", RunConfig("verify", datum="ainf", max_len=3)),
    ("shuffle", RunConfig("verify", datum="aff:2", max_len=3)),
    ("crystal", RunConfig("verify", datum="ainf", depth=3)),
    ("crystal", RunConfig("verify", datum="aff:2", depth=2)),
    ("global", RunConfig("verify", datum="ainf", depth=2)),
    ("global", RunConfig("verify", datum="aff:2", depth=2)),
    ("hecke", RunConfig("verify")),
]


def main():
    all_ok = True
    for name, cfg in PLAN:
        t = time.monotonic()
        reports = SUITES[name](cfg)
        ok = all(r.ok for r in reports)
        all_ok &= ok
        checks = sum(len(r.checks) for r in reports)
        label = "-" if name == "hecke" else cfg.datum
        print(f"{name:<8} {label:<6} {'ok' if ok else 'FAIL':<5} {checks:>3} checks  {time.monotonic() - t:6.1f}s")
    print("all suites pass" if all_ok else "some suite failed")


if __name__ == "__main__":
    main()
