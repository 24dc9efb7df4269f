"""Bilinear form, bar involution and upper global basis on the vacuum module.

The global basis element of a crystal node is found by an exact linear
system over Q.  Its unknowns are the Laurent coefficients of the element in
the word basis, inside a degree window that any solution must respect:
membership in the lattice bounds the low end, bar-invariance the high end.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .cartan import letter_key
from .linalg import NotInSpan, QSystem, Span
from .report import Report, Tally
from .scalars import ONE, ZERO, IntPoly, PoleAtZero, RatFunc, SubringTag
from .shuffle import (ShuffleVec, E_power, format_word, is_vac, op_E, op_F,
                      orbit_weight, weight_shift, word_key)
from .vtheta import (CrystalGraph, FMonomial, NonUnique, NoDecomposition, VTheta,
                     WeightComponent, _wkey, reduce_mod_q, vec_weight, weight_str)


class NoSolution(ArithmeticError):
    pass


def _lcm(a: IntPoly, b: IntPoly) -> IntPoly:
    if a == b:
        return a
    g = a.gcd(b)
    qt, _ = divmod(a * b, g)
    return qt


def _mod_poly(rows: dict, den: tuple) -> list:
    """Linear conditions for (sum_m rows[m] q^m) to be divisible by the polynomial den.

    den has nonzero constant term, so q is a unit and the shift is harmless.
    """
    deg = len(den) - 1
    if deg == 0 or not rows:
        return []
    lo = min(rows)
    top = max(rows) - lo
    lead = Fraction(den[-1])
    # rem[j] = q^j mod den as a coefficient list of length deg
    rem = []
    for j in range(top + 1):
        if j < deg:
            r = [Fraction(0)] * deg
            r[j] = Fraction(1)
        else:
            prev = rem[j - 1]
            # q * prev, then reduce q^deg
            r = [Fraction(0)] + prev[:-1]
            c = prev[-1] / lead
            if c:
                r = [x - c * Fraction(den[k]) for k, x in enumerate(r)]
        rem.append(r)
    out = [dict() for _ in range(deg)]
    for m, row in rows.items():
        r = rem[m - lo]
        for k in range(deg):
            if r[k]:
                for u, x in row.items():
                    out[k][u] = out[k].get(u, 0) + r[k] * x
    return out


@dataclass
class GramBlock:
    weight: tuple
    matrix: list  # list of rows of RatFunc

    @property
    def symmetric(self) -> bool:
        n = len(self.matrix)
        return all(self.matrix[a][b] == self.matrix[b][a] for a in range(n) for b in range(a))

    @property
    def nonsingular(self) -> bool:
        s = Span(int)
        for row in self.matrix:
            s.add({k: x for k, x in enumerate(row) if x})
        return s.rank == len(self.matrix)

    def to_strings(self) -> list:
        return [[str(x) for x in row] for row in self.matrix]


@dataclass
class GlobalBasisElement:
    node: int
    weight: tuple
    vector: ShuffleVec
    certificate: dict = field(default_factory=dict)
    unique: bool = True
    error: str = ""
    in_A_form: bool = True

    @property
    def accepted(self) -> bool:
        return not self.error and all(self.certificate.values())

    def to_dict(self) -> dict:
        out = {"node": self.node, "weight": weight_str(self.weight),
               "vector": {format_word(w): str(c) for w, c in self.vector.sorted_items()},
               "certificate": dict(sorted(self.certificate.items())), "unique": self.unique,
               "in_A_form": self.in_A_form}
        if self.error:
            out["error"] = self.error
        return out


class Canonical:
    """Form, bar and global basis on top of a VTheta instance (all results cached)."""

    def __init__(self, vt: VTheta):
        self.vt = vt
        self.d = vt.d
        self._e: dict = {}
        self._bar_basis: dict = {}
        self._bar_span: dict = {}

    # -- bilinear form --------------------------------------------------------
    def _E(self, i, u: ShuffleVec) -> ShuffleVec:
        key = (i, u)
        hit = self._e.get(key)
        if hit is None:
            hit = op_E(self.d, i, u)
            self._e[key] = hit
        return hit

    def form_on_monomial(self, u: ShuffleVec, mono: FMonomial) -> RatFunc:
        """(u, F_{i1}...F_{il} vac_sign) = coefficient of vac_sign in E_{il}...E_{i1} u."""
        x = u
        for i in mono.indices:
            x = self._E(i, x)
            if not x:
                return ZERO
        return x.coefficient(mono.sign)

    def bilinear_form(self, u: ShuffleVec, v: ShuffleVec) -> RatFunc:
        if not u or not v:
            return ZERO
        w = vec_weight(self.d, v)
        if vec_weight(self.d, u) != w:
            return ZERO
        comp = self.vt.component(w)
        total = ZERO
        for c, mono in zip(comp.coords(v), comp.monomials):
            if c:
                total = total + c * self.form_on_monomial(u, mono)
        return total

    def gram(self, w) -> GramBlock:
        comp = self.vt.component(w)
        vs = comp.vectors
        return GramBlock(w, [[self.bilinear_form(a, b) for b in vs] for a in vs])

    # -- bar ------------------------------------------------------------------
    def _stacked(self, v: ShuffleVec) -> dict:
        out = {}
        for j in self.d.letters:
            for w, c in self._E(j, v).terms.items():
                out[(j, w)] = c
        return out

    def bar_basis(self, w) -> list[ShuffleVec]:
        hit = self._bar_basis.get(w)
        if hit is not None:
            return hit
        comp = self.vt.component(w)
        if not w:
            out = list(comp.vectors)  # the vacua are bar-fixed
        else:
            span = Span(lambda k: (letter_key(k[0]), word_key(k[1])))
            for v in comp.vectors:
                if not span.add(self._stacked(v)):
                    raise NonUnique(f"joint E map is not injective at weight {weight_str(w)}")
            out = []
            for v in comp.vectors:
                target = {}
                for j in self.d.letters:
                    for word, c in self.bar(self._E(j, v)).terms.items():
                        target[(j, word)] = c
                try:
                    z = span.coords(target)
                except NotInSpan as exc:
                    raise NoSolution(f"no bar image at weight {weight_str(w)}") from exc
                out.append(comp.combine(z))
        self._bar_basis[w] = out
        return out

    def bar(self, u: ShuffleVec) -> ShuffleVec:
        """Semilinear involution fixing vac+/vac- and commuting with every E_i."""
        if not u:
            return u
        w = vec_weight(self.d, u)
        comp = self.vt.component(w)
        images = self.bar_basis(w)
        out = ShuffleVec()
        for c, b in zip(comp.coords(u), images):
            if c:
                out = out + b.scale(c.bar())
        return out

    # -- global basis ---------------------------------------------------------
    def divided_functionals(self, w) -> list:
        """(sign, runs) for every divided-power F-monomial of weight w, runs = ((i, n), ...)."""
        out = []
        seen = set()
        for m in self.vt.all_monomials(w):
            runs = []
            for i in m.indices:
                if runs and runs[-1][0] == i:
                    runs[-1] = (i, runs[-1][1] + 1)
                else:
                    runs.append((i, 1))
            key = (m.sign, tuple(runs))
            if key not in seen:
                seen.add(key)
                out.append(key)
        return out

    def pair_divided(self, u: ShuffleVec, sign: str, runs) -> RatFunc:
        """(u, F_{i1}^(n1)...F_{ik}^(nk) vac_sign) via the adjoint divided powers of E."""
        for i, n in runs:
            u = E_power(self.d, i, n, u)
            if not u:
                return ZERO
        return u.coefficient(sign)

    def in_A_form(self, u: ShuffleVec) -> bool:
        """u pairs into A with every divided-power F-monomial on a vacuum."""
        if not u:
            return True
        w = vec_weight(self.d, u)
        return all(self.pair_divided(u, s, runs).in_ring(SubringTag.A)
                   for s, runs in self.divided_functionals(w))

    def global_basis_weight(self, g: CrystalGraph, w) -> list[GlobalBasisElement]:
        """Solve for G(b) at every node b of weight w."""
        lattice = g.lattices[w]
        nodes = g.nodes_at(w)
        gens = [lattice.gens[k].vec for k in lattice.basis]
        bars = [self.bar(v) for v in gens]
        words = sorted({t for v in gens for t in v.terms} | {t for v in bars for t in v.terms}, key=word_key)
        tix = {t: n for n, t in enumerate(words)}
        lo = min(c.valuation() for v in gens for c in v.terms.values())
        hi = max(c.degree() for v in bars for c in v.terms.values())
        if lo > hi:
            return [GlobalBasisElement(n.id, w, ShuffleVec(), {}, False, "empty degree window") for n in nodes]
        width = hi - lo + 1
        nunk = len(words) * width
        pivots, P = lattice.span.inverse_on_pivots()
        r = len(gens)
        system = QSystem(nunk, len(nodes))

        def expand(terms):
            """Clear denominators of sum coef * Y_t (or bar(Y_t)); return {power: {unknown: coeff}}."""
            den = IntPoly((1,))
            for c, _, _ in terms:
                den = _lcm(den, c.unit_denominator)
            dr = RatFunc.from_polys(den, IntPoly((1,)))
            out: dict = {}
            for c, t, conj in terms:
                base = tix[t] * width
                for a, x in (c * dr).laurent_terms().items():
                    for e in range(lo, hi + 1):
                        m = a - e if conj else a + e
                        row = out.setdefault(m, {})
                        k = base + e - lo
                        row[k] = row.get(k, 0) + x
            return out, dr.eval_at_zero()

        def combo(vectors, t, conj):
            """Row t of (vectors as columns) * P, conjugated if asked: {pivot word: coeff}."""
            acc: dict = {}
            for k in range(r):
                a = vectors[k].coefficient(t)
                if not a:
                    continue
                for s, p in P[k].items():
                    x = a * (p.bar() if conj else p)
                    acc[s] = acc.get(s, ZERO) + x
            return {s: x for s, x in acc.items() if x}

        pivot_set = set(pivots)
        # (a) G lies in the span of the lattice basis
        for t in words:
            if t in pivot_set:
                continue
            terms = [(ONE, t, False)] + [(-x, s, False) for s, x in combo(gens, t, False).items()]
            for row in expand(terms)[0].values():
                system.add(row)
        # (b) lattice coordinates are regular at 0 with the node's residue there
        for k in range(r):
            terms = [(p, s, False) for s, p in P[k].items()]
            if not terms:
                continue
            rows, d0 = expand(terms)
            for m, row in rows.items():
                if m < 0:
                    system.add(row)
            rhs = [Fraction(n.coords[k]) * d0 for n in nodes]
            system.add(rows.get(0, {}), rhs)
        # (c) bar-invariance
        for t in words:
            terms = [(ONE, t, False)] + [(-x, s, True) for s, x in combo(bars, t, True).items()]
            for row in expand(terms)[0].values():
                system.add(row)

        # (d) pairing with the divided-power monomials lands in A
        for s_, runs in self.divided_functionals(w):
            a = {t: self.pair_divided(ShuffleVec.word(t), s_, runs) for t in words}
            terms = [(c, t, False) for t, c in a.items() if c]
            if not terms or all(c.is_laurent() for c, _, _ in terms):
                continue
            den = IntPoly((1,))
            for c, _, _ in terms:
                den = _lcm(den, c.unit_denominator)
            rows, _ = expand(terms)
            for row in _mod_poly(rows, den.coeffs):
                system.add(row)

        sols, nullity = system.solve()
        out = []
        for n, y in zip(nodes, sols):
            if y is None:
                out.append(GlobalBasisElement(n.id, w, ShuffleVec(), {}, nullity == 0,
                                              "no bar-invariant lift in the lattice"))
                continue
            terms = {}
            for t, ti in tix.items():
                coeffs = {lo + e: y[ti * width + e] for e in range(width) if y[ti * width + e]}
                if coeffs:
                    terms[t] = RatFunc.laurent(coeffs)
            G = ShuffleVec(terms)
            el = GlobalBasisElement(n.id, w, G, self.certificate(g, n, G), nullity == 0,
                                    in_A_form=self.in_A_form(G))
            out.append(el)
        return out

    def certificate(self, g: CrystalGraph, node, G: ShuffleVec) -> dict:
        lattice = g.lattices[node.weight]
        try:
            cong = reduce_mod_q(G, lattice) == tuple(node.coords)
        except (PoleAtZero, NotInSpan):
            cong = False
        return {"bar_invariant": self.bar(G) == G,
                "congruent_mod_qL": cong,
                "coeffs_in_A": all(c.in_ring(SubringTag.A) for c in G.terms.values())}

    def global_basis(self, g: CrystalGraph, node: int) -> GlobalBasisElement:
        n = g.nodes[node]
        for el in self.global_basis_weight(g, n.weight):
            if el.node == node:
                return el
        raise KeyError(node)

    def global_basis_all(self, g: CrystalGraph, depth: Optional[int] = None) -> dict:
        depth = g.depth if depth is None else depth
        out = {}
        for w in sorted(g.lattices, key=_wkey):
            if sum(m for _, m in w) > depth:
                continue
            for el in self.global_basis_weight(g, w):
                out[el.node] = el
        return out


def bilinear_form(vt: VTheta, u: ShuffleVec, v: ShuffleVec) -> RatFunc:
    return Canonical(vt).bilinear_form(u, v)


def bar(vt: VTheta, u: ShuffleVec) -> ShuffleVec:
    return Canonical(vt).bar(u)


# -- verification suites ------------------------------------------------------

def _weights(vt: VTheta, depth: int):
    return [w for w in vt.weights_up_to(depth)]


def verify_form(cn: Canonical, depth: int, exhaustive: bool = False) -> Report:
    vt, d = cn.vt, cn.d
    rep = Report(f"bilinear form {d} depth {depth}")
    t_vac = Tally("vacuum_normalisation", "form.vacua_orthonormal")
    t_pres = Tally("presentation_independent", "form.well_defined")
    t_adj = Tally("adjunction", "form.E_F_adjoint")
    t_sym = Tally("gram_symmetric", "form.symmetric")
    t_nd = Tally("gram_nonsingular", "form.nondegenerate")
    comp0 = vt.component(())
    for a, u in zip(comp0.monomials, comp0.vectors):
        for b, v in zip(comp0.monomials, comp0.vectors):
            val = cn.bilinear_form(u, v)
            t_vac(val == (ONE if a.sign == b.sign else ZERO), {"pair": [a.sign, b.sign], "value": str(val)})
    for w in _weights(vt, depth):
        comp = vt.component(w)
        monos = vt.all_monomials(w) if exhaustive else [m for m, _ in comp.spanning]
        for u in comp.vectors:
            for m in monos:
                lhs = cn.form_on_monomial(u, m)
                rhs = cn.bilinear_form(u, m.expand(d))
                t_pres(lhs == rhs, {"weight": weight_str(w), "monomial": str(m), "direct": str(lhs),
                                    "via_basis": str(rhs)})
        gb = cn.gram(w)
        t_sym(gb.symmetric, {"weight": weight_str(w)})
        t_nd(gb.nonsingular, {"weight": weight_str(w), "gram": gb.to_strings()})
        if sum(m for _, m in w) < depth:
            for i in d.letters:
                up = weight_shift(w, d.orbit(i), 1)
                for v in comp.vectors:
                    fv = op_F(d, i, v)
                    for u in vt.component(up).vectors:
                        lhs = cn.bilinear_form(op_E(d, i, u), v)
                        rhs = cn.bilinear_form(u, fv)
                        t_adj(lhs == rhs, {"weight": weight_str(up), "letter": i, "lhs": str(lhs), "rhs": str(rhs)})
    for t in (t_vac, t_pres, t_adj, t_sym, t_nd):
        t.into(rep)
    return rep


def verify_bar(cn: Canonical, depth: int) -> Report:
    vt, d = cn.vt, cn.d
    rep = Report(f"bar involution {d} depth {depth}")
    t_vac = Tally("bar_fixes_vacua", "bar.vacua_fixed")
    t_inv = Tally("bar_involutive", "bar.involution")
    t_e = Tally("bar_commutes_with_E", "bar.commutes_with_E")
    t_semi = Tally("bar_semilinear", "bar.semilinear")
    for v in vt.component(()).vectors:
        t_vac(cn.bar(v) == v, {"vector": str(v)})
    for w in _weights(vt, depth):
        comp = vt.component(w)
        for k, v in enumerate(comp.vectors):
            bv = cn.bar(v)
            t_inv(cn.bar(bv) == v, {"weight": weight_str(w), "basis": k})
            for i in d.letters:
                t_e(op_E(d, i, bv) == cn.bar(op_E(d, i, v)), {"weight": weight_str(w), "basis": k, "letter": i})
            c = RatFunc.laurent({1: 1, -2: 3})
            t_semi(cn.bar(v.scale(c)) == bv.scale(c.bar()), {"weight": weight_str(w), "basis": k})
    for t in (t_vac, t_inv, t_e, t_semi):
        t.into(rep)
    return rep


def verify_balanced(cn: Canonical, g: CrystalGraph, elements: dict, depth: Optional[int] = None) -> Report:
    """Per weight: the G(b) reduce to the crystal basis and are bar-fixed with A-coefficients."""
    depth = g.depth if depth is None else depth
    d = cn.d
    rep = Report(f"balanced triple {d} depth {depth}")
    t_found = Tally("lift_exists_and_unique", "global.lift_exists")
    t_card = Tally("cardinality_equals_rank", "global.balanced")
    t_ind = Tally("independent", "global.balanced")
    t_a0 = Tally("lattice_coords_in_A0", "global.balanced")
    t_id = Tally("reduces_to_identity", "global.balanced")
    t_bar = Tally("bar_invariant", "global.bar_invariant")
    t_A = Tally("coeffs_in_A", "global.A_form_proxy")
    t_dual = Tally("pairs_into_A", "global.A_form")
    near = [0, 0]
    closed = [0, 0]
    for w in sorted(g.lattices, key=_wkey):
        if sum(m for _, m in w) > depth:
            continue
        lattice = g.lattices[w]
        nodes = g.nodes_at(w)
        els = [elements.get(n.id) for n in nodes]
        t_found(all(e is not None and not e.error and e.unique for e in els),
                {"weight": weight_str(w), "errors": [e.error if e else "missing" for e in els]})
        els = [e for e in els if e is not None and not e.error]
        t_card(len(els) == lattice.rank, {"weight": weight_str(w), "elements": len(els), "rank": lattice.rank})
        sp = Span(word_key)
        t_ind(all(sp.add(e.vector.terms) for e in els), {"weight": weight_str(w)})
        byid = {n.id: n for n in nodes}
        for e in els:
            n = byid[e.node]
            try:
                cs = lattice.span.coords(e.vector.terms)
            except NotInSpan:
                t_a0(False, {"node": e.node, "reason": "not in lattice span"})
                continue
            bad = [(k, str(c)) for k, c in enumerate(cs) if not c.in_ring(SubringTag.A0)]
            t_a0(not bad, {"node": e.node, "coefficients_outside_A0": bad})
            if not bad:
                got = tuple(c.eval_at_zero() for c in cs)
                t_id(got == tuple(n.coords), {"node": e.node, "residue": [str(x) for x in got],
                                              "expected": [str(x) for x in n.coords]})
            t_bar(cn.bar(e.vector) == e.vector, {"node": e.node})
            nonA = [(format_word(t), str(c)) for t, c in e.vector.sorted_items() if not c.in_ring(SubringTag.A)]
            t_A(not nonA, {"node": e.node, "coefficients_outside_A": nonA})
            t_dual(cn.in_A_form(e.vector), {"node": e.node})
        # observed, never asserted
        for a in els:
            for b in els:
                val = cn.bilinear_form(a.vector, b.vector)
                near[1] += 1
                if val.in_ring(SubringTag.A0) and val.eval_at_zero() == (1 if a.node == b.node else 0):
                    near[0] += 1
            for i in d.letters:
                for p in (1, 2):
                    x = E_power(d, i, p, a.vector)
                    closed[1] += 1
                    closed[0] += all(c.in_ring(SubringTag.A) for c in x.terms.values())
    for t in (t_found, t_card, t_ind, t_a0, t_id, t_bar, t_A, t_dual):
        t.into(rep)
    rep.stats.update({"A_form": "proxy: word coefficients are Laurent polynomials and pairings with "
                                "divided-power F-monomials on the vacua lie in A",
                      "near_orthonormal_pairs": f"{near[0]}/{near[1]}",
                      "proxy_closed_under_divided_E": f"{closed[0]}/{closed[1]}"})
    return rep


def scale_element(elements: dict, node: int, power: int = -1) -> dict:
    """Copy of elements with G(node) replaced by q**power G(node) (fault seeding)."""
    out = dict(elements)
    e = out[node]
    out[node] = GlobalBasisElement(e.node, e.weight, e.vector.scale(RatFunc.monomial(power)),
                                   dict(e.certificate), e.unique, e.error)
    return out
