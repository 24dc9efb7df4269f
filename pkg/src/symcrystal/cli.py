"""Command line front end: crystal, verify, apply, global-basis.

Exit codes: 0 all checks pass, 1 a counterexample was found, 2 bad input.
"""
from __future__ import annotations

import argparse
import os
import re
import sys
from dataclasses import asdict, dataclass
from typing import Optional

from . import faults
from .cartan import InvalidDatum, letter_key, parse_datum
from .report import Report
from .scalars import ParseError
from .shuffle import (F_compact, F_expanded, ShuffleVec, SupportOverflow, enumerate_words,
                      check_relations, is_vac, op_E, op_F, op_K, op_K_inv, parse_word, sigma)

EXIT_OK, EXIT_COUNTEREXAMPLE, EXIT_USAGE = 0, 1, 2

RELATION_ANCHORS = {
    "K_theta": "relations.K_i_equals_K_theta_i",
    "K_inverse": "relations.K_invertible",
    "K_commute": "relations.K_commute",
    "KE_conjugation": "relations.K_E_conjugation",
    "KF_conjugation": "relations.K_F_conjugation",
    "EF_commutation": "relations.E_F_commutation",
    "F_serre": "relations.F_serre",
}


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    datum: str = "ainf"
    depth: Optional[int] = None
    json: Optional[str] = None
    dot: Optional[str] = None
    suite: str = "all"
    max_len: int = 3
    n: Optional[int] = None
    deg: Optional[int] = None
    threads: int = 1
    seed: int = 0
    inject_fault: Optional[str] = None
    reverse_letters: bool = False
    expr: str = ""

    def validate(self):
        if self.depth is not None and self.depth < 0:
            raise UsageError("depth must be >= 0")
        if self.max_len < 0:
            raise UsageError("max-len must be >= 0")
        if self.n is not None and self.n < 2:
            raise UsageError("n must be >= 2")
        if self.deg is not None and self.deg < 1:
            raise UsageError("deg must be >= 1")
        if self.threads < 1:
            raise UsageError("threads must be >= 1")


def default_threads() -> int:
    raw = os.environ.get("SYMCRYSTAL_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


# -- suites ----------------------------------------------------------------------

def relations_to_report(rel, title: str, anchors: dict) -> Report:
    rep = Report(title)
    for name in sorted(set(rel.passed) | set(rel.failures)):
        bad = rel.failures.get(name, [])
        n = rel.passed.get(name, 0) + len(bad)
        w = {"failures": len(bad), "examples": bad[:5]} if bad else None
        rep.add(name, anchors.get(name, name), not bad, n, w)
    if rel.notes:
        rep.stats["notes"] = list(rel.notes)
    return rep


def _hecke_anchor(name: str) -> str:
    return "hecke." + name.split()[0].replace("-", "_")


def suite_shuffle(cfg: RunConfig) -> list[Report]:
    from .vtheta import VTheta, _wkey
    from .report import Tally
    from .shuffle import serre_E
    d = parse_datum(cfg.datum, cfg.max_len)
    ctx = faults.k_sign_fault() if cfg.inject_fault == "k-sign" else _null()
    with ctx:
        rel = check_relations(d, cfg.max_len, serre=True, threads=cfg.threads)
        rep = relations_to_report(rel, f"relations {d} max-len {cfg.max_len}", RELATION_ANCHORS)
        t_f = Tally("F_compact_matches_expanded", "shuffle.F_expanded_formula")
        literal_bad = 0
        for w in enumerate_words(d, cfg.max_len):
            for i in d.letters:
                c = F_compact(d, i, w)
                t_f(F_expanded(d, i, w) == c, {"word": list(w) if not is_vac(w) else w, "letter": i})
                literal_bad += F_expanded(d, i, w, literal=True) != c
        t_f.into(rep)
        rep.stats["literal_subscript_reading_mismatches"] = literal_bad
        vt = VTheta(d)
        t_s = Tally("E_serre_on_module", "module.E_serre")
        for wt in sorted(vt.weights_up_to(cfg.max_len), key=_wkey):
            comp = vt.component(wt)
            for k, u in enumerate(comp.vectors):
                for i in d.letters:
                    for j in d.letters:
                        if i != j:
                            t_s(not serre_E(d, i, j, u), {"weight": [list(x) for x in wt], "basis": k, "pair": [i, j]})
        t_s.into(rep)
    return [rep]


class _null:
    def __enter__(self):
        return self

    def __exit__(self, *exc):
        return False


def _build(cfg: RunConfig, depth: int):
    from .vtheta import build_crystal
    d = parse_datum(cfg.datum, depth)
    order = sorted(d.letters, key=letter_key, reverse=True) if cfg.reverse_letters else None
    return build_crystal(d, depth, letter_order=order, threads=cfg.threads)


def suite_crystal(cfg: RunConfig) -> list[Report]:
    from .vtheta import inject_scaled_generator, verify_crystal_conjecture
    depth = 3 if cfg.depth is None else cfg.depth
    g = _build(cfg, depth)
    if cfg.inject_fault == "lattice":
        g = inject_scaled_generator(g)
    return [verify_crystal_conjecture(g)]


def suite_global(cfg: RunConfig) -> list[Report]:
    from .canonical import Canonical, scale_element, verify_balanced, verify_bar, verify_form
    depth = 2 if cfg.depth is None else cfg.depth
    g = _build(cfg, depth)
    cn = Canonical(g.vt)
    els = cn.global_basis_all(g)
    if cfg.inject_fault == "global":
        target = next(n.id for n in g.nodes if n.level == min(1, depth))
        els = scale_element(els, target)
    return [verify_form(cn, depth), verify_bar(cn, depth), verify_balanced(cn, g, els)]


def suite_hecke(cfg: RunConfig) -> list[Report]:
    from .hecke import verify_hecke_relations, verify_intertwiners
    if cfg.n is not None:
        pairs = [(cfg.n, cfg.deg or 2)]
    else:
        pairs = [(2, 2), (3, 2), (4, 1)] if cfg.deg is None else [(n, cfg.deg) for n in (2, 3, 4)]
    out = []
    for n, deg in pairs:
        rel = verify_hecke_relations(n, deg, cross_fault=cfg.inject_fault == "hecke-cross")
        rel.merge(verify_intertwiners(n, deg, trials=100, seed=cfg.seed))
        anchors = {k: _hecke_anchor(k) for k in set(rel.passed) | set(rel.failures)}
        out.append(relations_to_report(rel, f"hecke n={n} deg={deg}", anchors))
    return out


SUITES = {"shuffle": suite_shuffle, "crystal": suite_crystal, "global": suite_global, "hecke": suite_hecke}


# -- apply -----------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(tE|tF|Kinv|E|F|K)\(\s*(-?\d+)\s*\)|(sigma|bar)|(vac[+-]|\[[^\]]*\]|[+-](?=\s*$)))")


def parse_expr(text: str) -> tuple[list, object]:
    ops = []
    pos = 0
    word = None
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or word is not None:
            raise UsageError(f"cannot parse expression at {text[pos:]!r}")
        if m.group(1):
            ops.append((m.group(1), int(m.group(2))))
        elif m.group(3):
            ops.append((m.group(3), None))
        else:
            try:
                word = parse_word(m.group(4).replace(" ", ""))
            except ValueError as exc:
                raise UsageError(str(exc)) from exc
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    if word is None:
        raise UsageError("expression must end with a word literal such as vac+ or [1,3]")
    return ops, word


def evaluate(d, ops, word) -> ShuffleVec:
    if not is_vac(word):
        bad = [i for i in word if i not in d]
        if bad:
            raise SupportOverflow(f"letters {bad} outside the support of {d}")
    v = ShuffleVec.word(word)
    vt = cn = None
    for name, i in reversed(ops):
        if i is not None and i not in d:
            raise SupportOverflow(f"letter {i} outside the support of {d}")
        if name in ("tE", "tF", "bar") and vt is None:
            from .canonical import Canonical
            from .vtheta import VTheta
            vt = VTheta(d)
            cn = Canonical(vt)
        if name == "E":
            v = op_E(d, i, v)
        elif name == "F":
            v = op_F(d, i, v)
        elif name == "K":
            v = op_K(d, i, v)
        elif name == "Kinv":
            v = op_K_inv(d, i, v)
        elif name == "tE":
            v = vt.tilde_E(i, v)
        elif name == "tF":
            v = vt.tilde_F(i, v)
        elif name == "sigma":
            v = sigma(d, v)
        elif name == "bar":
            v = cn.bar(v)
    return v


# -- commands --------------------------------------------------------------------

def _write(path: str, text: str):
    if path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w") as fh:
        fh.write(text)


def cmd_crystal(cfg: RunConfig) -> int:
    from .export import dot_from_dict, dumps, graph_to_dict, levels_summary
    from .vtheta import analyze, inject_scaled_generator
    depth = 4 if cfg.depth is None else cfg.depth
    g = _build(cfg, depth)
    report = g.report
    if cfg.inject_fault == "lattice":
        bad = inject_scaled_generator(g)
        report = analyze(bad.vt, bad.lattices, bad.depth).report
    data = graph_to_dict(g, report)
    if cfg.json:
        _write(cfg.json, dumps(data))
    if cfg.dot:
        _write(cfg.dot, dot_from_dict(data))
    print(f"datum {g.datum} depth {depth}: {len(g.nodes)} nodes, {len(g.edges)} edges")
    for level, nn, ne in levels_summary(g):
        print(f"  level {level}: {nn} nodes, {ne} outgoing edges")
    for line in report.lines():
        if line.startswith("[FAIL]"):
            print(line)
    return EXIT_OK if report.ok else EXIT_COUNTEREXAMPLE


def cmd_verify(cfg: RunConfig) -> int:
    from .export import dumps
    names = list(SUITES) if cfg.suite == "all" else [cfg.suite]
    reports = []
    for name in names:
        reports.extend(SUITES[name](cfg))
    ok = all(r.ok for r in reports)
    for r in reports:
        for line in r.lines():
            print(line)
        for c in r.failed():
            print(f"  witness {c.name}: {c.witness}")
    print("all checks pass" if ok else "counterexample found")
    if cfg.json:
        cfg_dict = {k: v for k, v in asdict(cfg).items() if k not in ("json", "dot", "threads", "expr")}
        _write(cfg.json, dumps({"ok": ok, "config": cfg_dict, "suites": [r.to_dict() for r in reports]}))
    return EXIT_OK if ok else EXIT_COUNTEREXAMPLE


def cmd_apply(cfg: RunConfig) -> int:
    ops, word = parse_expr(cfg.expr)
    letters = [i for _, i in ops if i is not None] + (list(word) if not is_vac(word) else [])
    d = parse_datum(cfg.datum, cfg.depth)
    if cfg.datum.strip() == "ainf" and letters:
        need = max(abs(i) for i in letters)
        if need > abs(d.letters[-1]):
            d = parse_datum(f"ainf:{need if need % 2 else need + 1}")
    print(evaluate(d, ops, word).to_string())
    return EXIT_OK


def cmd_global_basis(cfg: RunConfig) -> int:
    from .canonical import Canonical, scale_element, verify_balanced
    from .export import dumps, global_basis_to_dict
    depth = 2 if cfg.depth is None else cfg.depth
    g = _build(cfg, depth)
    cn = Canonical(g.vt)
    els = cn.global_basis_all(g)
    if cfg.inject_fault == "global":
        target = next(n.id for n in g.nodes if n.level == min(1, depth))
        els = scale_element(els, target)
    rep = verify_balanced(cn, g, els)
    for k in sorted(els):
        e = els[k]
        flags = ",".join(f"{a}={'y' if b else 'n'}" for a, b in sorted(e.certificate.items()))
        print(f"G(node {k}) = {e.vector.to_string()}   [{flags}]")
    for line in rep.lines():
        print(line)
    if cfg.json:
        _write(cfg.json, dumps({"datum": g.datum, "depth": depth, "elements": global_basis_to_dict(els),
                                "report": rep.to_dict()}))
    return EXIT_OK if rep.ok else EXIT_COUNTEREXAMPLE


COMMANDS = {"crystal": cmd_crystal, "verify": cmd_verify, "apply": cmd_apply, "global-basis": cmd_global_basis}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="symcrystal", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, fault_choices=()):
        p.add_argument("--datum", default="ainf", help="ainf, ainf:R or aff:L")
        p.add_argument("--threads", type=int, default=default_threads())
        if fault_choices:
            p.add_argument("--inject-fault", choices=fault_choices, default=None)

    p = sub.add_parser("crystal", help="build the crystal graph")
    common(p, ("lattice",))
    p.add_argument("--depth", type=int, default=None)
    p.add_argument("--json")
    p.add_argument("--dot")
    p.add_argument("--reverse-letters", action="store_true")

    p = sub.add_parser("verify", help="run verification suites")
    common(p, faults.FAULTS)
    p.add_argument("--suite", choices=["shuffle", "crystal", "global", "hecke", "all"], default="all")
    p.add_argument("--depth", type=int, default=None)
    p.add_argument("--max-len", type=int, default=3)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--deg", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json")
    p.add_argument("--reverse-letters", action="store_true")

    p = sub.add_parser("apply", help="evaluate an operator expression such as 'F(1) vac+'")
    common(p)
    p.add_argument("expr")
    p.add_argument("--depth", type=int, default=None)

    p = sub.add_parser("global-basis", help="compute the upper global basis")
    common(p, ("global",))
    p.add_argument("--depth", type=int, default=None)
    p.add_argument("--json")
    p.add_argument("--reverse-letters", action="store_true")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    fields = {k.replace("-", "_"): v for k, v in vars(args).items()}
    cfg = RunConfig(**{k: v for k, v in fields.items() if k in RunConfig.__dataclass_fields__})
    try:
        cfg.validate()
        return COMMANDS[cfg.command](cfg)
    except (UsageError, InvalidDatum, ParseError, SupportOverflow) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
