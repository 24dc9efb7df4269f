"""Exact Gaussian elimination over Q(q) and over Q.

Vectors are sparse dicts ``key -> value``.  Pivots are chosen by smallest
coefficient size, ties broken by a caller-supplied key order, so results do
not depend on dict iteration order.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Callable, Hashable, Iterable, Mapping, Optional, Sequence

from .scalars import ONE, ZERO, RatFunc


class NotInSpan(ValueError):
    pass


def _sub_scaled(target: dict, row: Mapping, c):
    for k, x in row.items():
        old = target.get(k)
        val = -(x * c) if old is None else old - x * c
        if val:
            target[k] = val
        else:
            target.pop(k, None)


class Span:
    """Incremental row echelon form over Q(q), tracking combinations of inputs.

    ``add`` accepts a vector and keeps it iff it is independent of the
    vectors already kept; ``coords`` expresses a vector in the kept ones.
    """

    def __init__(self, sort_key: Callable = repr):
        self.sort_key = sort_key
        self.rows: list[dict] = []  # echelon rows, 1 at pivot, 0 at earlier pivots
        self.pivots: list[Hashable] = []
        self.combos: list[dict] = []  # row = sum combos[r][j] * basis[j]
        self.basis: list[dict] = []

    @property
    def rank(self) -> int:
        return len(self.basis)

    def _reduce(self, vec: Mapping) -> tuple[dict, dict]:
        v = dict(vec)
        comb: dict = {}
        for r, p in enumerate(self.pivots):
            c = v.get(p)
            if c:
                _sub_scaled(v, self.rows[r], c)
                for j, x in self.combos[r].items():
                    old = comb.get(j, ZERO)
                    comb[j] = old + x * c
        return v, comb

    def add(self, vec: Mapping) -> bool:
        resid, comb = self._reduce(vec)
        if not resid:
            return False
        j = len(self.basis)
        self.basis.append(dict(vec))
        p = min(resid, key=lambda k: (resid[k].size(), self.sort_key(k)))
        inv = resid[p].inverse()
        row = {k: x * inv for k, x in resid.items()}
        combo = {t: -x * inv for t, x in comb.items() if x}
        combo[j] = inv
        self.rows.append(row)
        self.pivots.append(p)
        self.combos.append(combo)
        return True

    def coords(self, vec: Mapping) -> list[RatFunc]:
        resid, comb = self._reduce(vec)
        if resid:
            raise NotInSpan(f"vector not in span (residual on {len(resid)} keys)")
        out = [ZERO] * len(self.basis)
        for j, x in comb.items():
            out[j] = x
        return out

    def contains(self, vec: Mapping) -> bool:
        return not self._reduce(vec)[0]

    def inverse_on_pivots(self) -> tuple[list, list[dict]]:
        """Pivot keys S and rows of P with coords(v) = P v_S for v in the span."""
        n = len(self.basis)
        # coords of v: solve sum_j x_j basis_j = v.  Reduction reads only pivot entries
        # in order, so express coords linearly in (v_p)_p by reducing unit vectors.
        P = [dict() for _ in range(n)]
        for p in self.pivots:
            e = {p: ONE}
            v = dict(e)
            comb: dict = {}
            for r, pr in enumerate(self.pivots):
                c = v.get(pr)
                if c:
                    _sub_scaled(v, self.rows[r], c)
                    for j, x in self.combos[r].items():
                        comb[j] = comb.get(j, ZERO) + x * c
            for j, x in comb.items():
                if x:
                    P[j][p] = x
        return list(self.pivots), P


def rank(vectors: Iterable[Mapping], sort_key: Callable = repr) -> int:
    s = Span(sort_key)
    for v in vectors:
        s.add(v)
    return s.rank


# -- linear systems over Q ----------------------------------------------------

class QSystem:
    """Sparse affine system over Q with several right-hand sides.

    Equations are ``sum_k a_k y_k = rhs[m]`` for each right-hand side m.
    """

    def __init__(self, n_unknowns: int, n_rhs: int = 1):
        self.n = n_unknowns
        self.m = n_rhs
        self.eqs: list[tuple[dict, list]] = []

    def add(self, coeffs: Mapping[int, Fraction], rhs: Optional[Sequence] = None):
        coeffs = {k: Fraction(v) for k, v in coeffs.items() if v}
        rhs = [Fraction(x) for x in rhs] if rhs is not None else [Fraction(0)] * self.m
        if coeffs or any(rhs):
            self.eqs.append((coeffs, rhs))

    def solve(self) -> tuple[list[Optional[list[Fraction]]], int]:
        """Return (solutions per rhs or None if inconsistent, nullity)."""
        pivot_rows: dict[int, tuple[dict, list]] = {}
        order: list[int] = []
        inconsistent = [False] * self.m
        for coeffs, rhs in self.eqs:
            row = dict(coeffs)
            r = list(rhs)
            for p in order:
                c = row.get(p)
                if c:
                    prow, prhs = pivot_rows[p]
                    for k, x in prow.items():
                        val = row.get(k, 0) - c * x
                        if val:
                            row[k] = val
                        else:
                            row.pop(k, None)
                    r = [a - c * b for a, b in zip(r, prhs)]
            if not row:
                for t, a in enumerate(r):
                    if a:
                        inconsistent[t] = True
                continue
            p = min(row)
            inv = 1 / row[p]
            row = {k: x * inv for k, x in row.items()}
            r = [a * inv for a in r]
            # keep earlier pivot rows reduced at p
            for q_ in order:
                qrow, qrhs = pivot_rows[q_]
                c = qrow.get(p)
                if c:
                    for k, x in row.items():
                        val = qrow.get(k, 0) - c * x
                        if val:
                            qrow[k] = val
                        else:
                            qrow.pop(k, None)
                    pivot_rows[q_] = (qrow, [a - c * b for a, b in zip(qrhs, r)])
            pivot_rows[p] = (row, r)
            order.append(p)
        nullity = self.n - len(order)
        sols: list[Optional[list[Fraction]]] = []
        for t in range(self.m):
            if inconsistent[t]:
                sols.append(None)
                continue
            y = [Fraction(0)] * self.n
            for p in order:
                y[p] = pivot_rows[p][1][t]  # free variables set to 0
            sols.append(y)
        return sols, nullity


def rank_over_q(rows: Sequence[Sequence]) -> int:
    """Rank of a list of exact rational vectors."""
    work = [[Fraction(x) for x in r] for r in rows]
    rk = 0
    ncols = max((len(r) for r in work), default=0)
    for col in range(ncols):
        piv = next((r for r in range(rk, len(work)) if work[r][col] != 0), None)
        if piv is None:
            continue
        work[rk], work[piv] = work[piv], work[rk]
        pr = work[rk]
        for r in range(len(work)):
            if r != rk and work[r][col] != 0:
                f = work[r][col] / pr[col]
                work[r] = [a - f * b for a, b in zip(work[r], pr)]
        rk += 1
    return rk
