"""Affine Hecke algebra of type D_n acting on Laurent polynomials in X_1..X_n.

Coefficients are rational functions in a formal parameter p, so every
relation is checked generically.  T_i acts by

    T_i a = p (s_i a) + (p - 1/p) (a - s_i a) / (1 - X^beta_i)

with beta_0 = (-1, -1, 0, ...) and beta_i = e_i - e_{i+1}.
"""
from __future__ import annotations

import random
import re
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Sequence

from .scalars import ONE, ZERO, RatFunc, qpow
from .shuffle import RelationReport

P = qpow(1)
P_INV = qpow(-1)
P_DIFF = P - P_INV

# documentation only: nothing to act on below rank 2
H0_DESCRIPTION = "C + C"
H1_DESCRIPTION = "C[X_1^{+-1}]"


class InexactDivision(ArithmeticError):
    pass


class MultiLaurent:
    """Finite sum of c * X^m with m an integer vector of fixed length."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Optional[Mapping[tuple, RatFunc]] = None):
        self.n = n
        out = {}
        for m, c in (terms or {}).items():
            c = RatFunc.coerce(c)
            if c:
                if len(m) != n:
                    raise ValueError(f"exponent {m} has wrong length for n={n}")
                out[tuple(m)] = c
        self.terms = out

    @classmethod
    def monomial(cls, m: Sequence[int], c=ONE) -> MultiLaurent:
        return cls(len(m), {tuple(m): c})

    @classmethod
    def one(cls, n: int) -> MultiLaurent:
        return cls(n, {(0,) * n: ONE})

    @classmethod
    def X(cls, n: int, j: int, e: int = 1) -> MultiLaurent:
        m = [0] * n
        m[j - 1] = e
        return cls(n, {tuple(m): ONE})

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        return isinstance(other, MultiLaurent) and self.n == other.n and self.terms == other.terms

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    def __add__(self, other: MultiLaurent) -> MultiLaurent:
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, ZERO) + c
        return MultiLaurent(self.n, out)

    def __neg__(self) -> MultiLaurent:
        return MultiLaurent(self.n, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: MultiLaurent) -> MultiLaurent:
        return self + (-other)

    def scale(self, c) -> MultiLaurent:
        c = RatFunc.coerce(c)
        return MultiLaurent(self.n, {m: x * c for m, x in self.terms.items()})

    def __mul__(self, other) -> MultiLaurent:
        if not isinstance(other, MultiLaurent):
            return self.scale(other)
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                out[m] = out.get(m, ZERO) + c1 * c2
        return MultiLaurent(self.n, out)

    __rmul__ = scale

    def shift(self, m: Sequence[int]) -> MultiLaurent:
        """Multiply by the monomial X^m."""
        return MultiLaurent(self.n, {tuple(a + b for a, b in zip(k, m)): c for k, c in self.terms.items()})

    def to_string(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms):
            c = self.terms[m]
            mono = "*".join(f"X{j + 1}" if e == 1 else f"X{j + 1}^{e}" for j, e in enumerate(m) if e)
            cs = c.to_string("p")
            if not mono:
                parts.append(cs)
            elif c == ONE:
                parts.append(mono)
            else:
                parts.append(f"({cs})*{mono}" if not c.is_constant() else f"{cs}*{mono}")
        return " + ".join(parts)

    __str__ = to_string

    def __repr__(self):
        return f"MultiLaurent({self.to_string()})"


def _check_index(n: int, i: int):
    if n < 2:
        raise ValueError("the operator machinery needs n >= 2")
    if not 0 <= i < n:
        raise ValueError(f"generator T_{i} out of range for n={n}")


def beta(n: int, i: int) -> tuple:
    """Exponent of X^{-alpha_i^vee}."""
    _check_index(n, i)
    m = [0] * n
    if i == 0:
        m[0] = m[1] = -1
    else:
        m[i - 1], m[i] = 1, -1
    return tuple(m)


def _s_exp(i: int, m: tuple) -> tuple:
    m = list(m)
    if i == 0:
        m[0], m[1] = -m[1], -m[0]
    else:
        m[i - 1], m[i] = m[i], m[i - 1]
    return tuple(m)


def weyl_s(i: int, a: MultiLaurent) -> MultiLaurent:
    _check_index(a.n, i)
    return MultiLaurent(a.n, {_s_exp(i, m): c for m, c in a.terms.items()})


def divide_by_one_minus(a: MultiLaurent, b: Sequence[int]) -> MultiLaurent:
    """Exact quotient a / (1 - X^b), computed line by line along b."""
    b = tuple(b)
    piv = next(k for k, x in enumerate(b) if x)
    lines: dict = {}
    for m, c in a.terms.items():
        k = m[piv] // b[piv] if b[piv] in (1, -1) else None
        if k is None or m[piv] % b[piv]:
            raise InexactDivision("direction must have a unit entry")
        base = tuple(x - k * y for x, y in zip(m, b))
        lines.setdefault(base, {})[k] = c
    out = {}
    for base, pts in lines.items():
        # h_k - h_{k-1} = f_k, h vanishing far to the left
        acc = ZERO
        for k in range(min(pts), max(pts) + 1):
            acc = acc + pts.get(k, ZERO)
            if acc:
                out[tuple(x + k * y for x, y in zip(base, b))] = acc
        if acc:
            raise InexactDivision(f"line through {base} does not sum to zero")
    h = MultiLaurent(a.n, out)
    if h - h.shift(b) != a:
        raise InexactDivision("remultiplication check failed")
    return h


def act_T(i: int, a: MultiLaurent) -> MultiLaurent:
    sa = weyl_s(i, a)
    diff = a - sa
    out = sa.scale(P)
    if diff:
        out = out + divide_by_one_minus(diff, beta(a.n, i)).scale(P_DIFF)
    return out


def act_T_inv(i: int, a: MultiLaurent) -> MultiLaurent:
    """T^{-1} = T - (p - 1/p) by the quadratic relation."""
    return act_T(i, a) - a.scale(P_DIFF)


# -- words ---------------------------------------------------------------------

_GEN = re.compile(r"^(T)(\d+)$|^(X)(\d+)(?:\^(-?\d+))?$")


def parse_generator(text: str) -> tuple:
    m = _GEN.match(text.strip())
    if not m:
        raise ValueError(f"bad Hecke generator {text!r}")
    if m.group(1):
        return ("T", int(m.group(2)))
    return ("X", int(m.group(4)), int(m.group(5) or 1))


def parse_hecke_word(text: str) -> list:
    return [parse_generator(t) for t in text.replace(",", " ").split()]


def act_word(word: Sequence, a: MultiLaurent) -> MultiLaurent:
    """Apply generators right to left."""
    for g in reversed(list(word)):
        if isinstance(g, str):
            g = parse_generator(g)
        if g[0] == "T":
            a = act_T(g[1], a)
        else:
            j, e = g[1], g[2]
            if not 1 <= j <= a.n:
                raise ValueError(f"X_{j} out of range for n={a.n}")
            m = [0] * a.n
            m[j - 1] = e
            a = a.shift(m)
    return a


# -- relation suite ------------------------------------------------------------

def relations(n: int, cross_fault: bool = False) -> list[tuple[str, list, list]]:
    """(name, lhs word, rhs word) for the presentation; quadratics are handled separately."""
    T = lambda i: ("T", i)
    X = lambda j, e=1: ("X", j, e)
    rels = [("braid T1T0=T0T1", [T(1), T(0)], [T(0), T(1)])]
    if n >= 3:
        rels.append(("braid T0T2T0=T2T0T2", [T(0), T(2), T(0)], [T(2), T(0), T(2)]))
    for i in range(1, n - 1):
        rels.append((f"braid T{i}T{i + 1}T{i}", [T(i), T(i + 1), T(i)], [T(i + 1), T(i), T(i + 1)]))
    for i in range(1, n):
        for j in range(i + 2, n):
            rels.append((f"commute T{i}T{j}", [T(i), T(j)], [T(j), T(i)]))
    for j in range(3, n):
        rels.append((f"commute T0T{j}", [T(0), T(j)], [T(j), T(0)]))
    for j in range(1, n + 1):
        for k in range(j + 1, n + 1):
            rels.append((f"X{j}X{k}=X{k}X{j}", [X(j), X(k)], [X(k), X(j)]))
    if cross_fault:
        rels.append(("cross T0X1^-1T0=X2", [T(0), X(1, 1), T(0)], [X(2)]))
    else:
        rels.append(("cross T0X1^-1T0=X2", [T(0), X(1, -1), T(0)], [X(2)]))
    for i in range(1, n):
        rels.append((f"cross T{i}X{i}T{i}=X{i + 1}", [T(i), X(i), T(i)], [X(i + 1)]))
    for i in range(1, n):
        for j in range(1, n + 1):
            if j not in (i, i + 1):
                rels.append((f"commute T{i}X{j}", [T(i), X(j)], [X(j), T(i)]))
    for j in range(3, n + 1):
        rels.append((f"commute T0X{j}", [T(0), X(j)], [X(j), T(0)]))
    return rels


def monomial_box(n: int, deg: int):
    import itertools
    for m in itertools.product(range(-deg, deg + 1), repeat=n):
        yield MultiLaurent.monomial(m)


def _fmt_exp(a: MultiLaurent) -> list:
    return list(next(iter(a.terms)))


def verify_hecke_relations(n: int, deg: int, cross_fault: bool = False,
                           only: Optional[Iterable[str]] = None) -> RelationReport:
    if n < 2 or deg < 1:
        raise ValueError("need n >= 2 and deg >= 1")
    rep = RelationReport()
    rels = relations(n, cross_fault)
    keep = set(only) if only is not None else None
    box = list(monomial_box(n, deg))
    for a in box:
        for name, lhs, rhs in rels:
            if keep is not None and name not in keep:
                continue
            l, r = act_word(lhs, a), act_word(rhs, a)
            rep.record(name, l == r, {"monomial": _fmt_exp(a), "lhs": str(l), "rhs": str(r)})
        for i in range(n):
            name = f"quadratic T{i}"
            if keep is not None and name not in keep:
                continue
            ta = act_T(i, a)
            lhs = act_T(i, ta)
            rhs = ta.scale(P_DIFF) + a
            rep.record(name, lhs == rhs, {"monomial": _fmt_exp(a), "lhs": str(lhs), "rhs": str(rhs)})
            diff = a - weyl_s(i, a)
            if diff:
                try:
                    divide_by_one_minus(diff, beta(n, i))
                    rep.record(f"exact quotient {i}", True)
                except InexactDivision as exc:
                    rep.record(f"exact quotient {i}", False, {"monomial": _fmt_exp(a), "error": str(exc)})
    rep.notes.append(f"operator identities checked on every monomial X^m with m in [-{deg},{deg}]^{n}")
    return rep.finalize()


# -- intertwiners ----------------------------------------------------------------

def phi(i: int, a: MultiLaurent) -> MultiLaurent:
    """phi_i = (1 - X^beta_i) T_i - (p - 1/p)."""
    ta = act_T(i, a)
    return ta - ta.shift(beta(a.n, i)) - a.scale(P_DIFF)


def intertwiner_check(i: int, a: MultiLaurent) -> bool:
    """phi_i(a) == (1/p - p X^beta_i) s_i(a); the normalised intertwiner then acts as s_i."""
    sa = weyl_s(i, a)
    rhs = sa.scale(P_INV) - sa.shift(beta(a.n, i)).scale(P)
    return phi(i, a) == rhs


def random_laurent(rng: random.Random, n: int, deg: int, terms: int = 4) -> MultiLaurent:
    out = {}
    for _ in range(rng.randint(1, terms)):
        m = tuple(rng.randint(-deg, deg) for _ in range(n))
        c = RatFunc.monomial(rng.randint(-2, 2), rng.choice([-3, -2, -1, 1, 2, 3]))
        out[m] = out.get(m, ZERO) + c
    return MultiLaurent(n, out)


def verify_intertwiners(n: int, deg: int, trials: int = 100, seed: int = 0) -> RelationReport:
    rep = RelationReport()
    rng = random.Random(seed)
    for i in range(n):
        name = f"intertwiner phi{i}"
        for a in monomial_box(n, deg):
            rep.record(name, intertwiner_check(i, a), {"monomial": _fmt_exp(a)})
        for _ in range(trials):
            a = random_laurent(rng, n, deg)
            rep.record(name + " random", intertwiner_check(i, a), {"poly": str(a)})
    return rep.finalize()
