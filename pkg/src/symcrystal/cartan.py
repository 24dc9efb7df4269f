"""Cartan data with a fixed-point-free diagram involution.

Letters are integer exponents ``n`` standing for the points ``p**n`` of the
Dynkin diagram.  Two families are built in: the odd-exponent window of
type A-infinity and the odd residues mod ``2*ell`` (affine type A).
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Mapping, Optional

Letter = int


class InvalidDatum(ValueError):
    pass


def letter_key(i: Letter) -> tuple[int, bool]:
    """Canonical letter order: by absolute value, positive before negative."""
    return (abs(i), i < 0)


@dataclass(frozen=True, eq=False)
class CartanDatum:
    kind: str
    letters: tuple[Letter, ...]
    pairing_table: Mapping[tuple[Letter, Letter], int] = field(repr=False)
    theta_table: Mapping[Letter, Letter] = field(repr=False)
    name: str = ""

    def pair(self, i: Letter, j: Letter) -> int:
        return self.pairing_table.get((i, j), 0)

    def theta(self, i: Letter) -> Letter:
        return self.theta_table[i]

    def __contains__(self, i) -> bool:
        return i in self.theta_table

    def half_norm(self, i: Letter) -> int:
        """d_i = (alpha_i, alpha_i) / 2, so that q_i = q**d_i."""
        return self.pair(i, i) // 2

    def orbit(self, i: Letter) -> Letter:
        """Representative of the theta-orbit {i, theta(i)}."""
        return min(i, self.theta(i), key=letter_key)

    def orbit_letters(self, rep: Letter) -> tuple[Letter, ...]:
        return tuple(sorted({rep, self.theta(rep)}, key=letter_key))

    @property
    def orbits(self) -> tuple[Letter, ...]:
        return tuple(sorted({self.orbit(i) for i in self.letters}, key=letter_key))

    def serre_exponent(self, i: Letter, j: Letter) -> int:
        """b = 1 - (alpha_i^vee, alpha_j)."""
        num = 2 * self.pair(i, j)
        den = self.pair(i, i)
        if num % den:
            raise InvalidDatum(f"non-integral Cartan entry for ({i}, {j})")
        return 1 - num // den

    def __str__(self):
        return self.name or self.kind


@dataclass
class ValidationReport:
    checks: dict[str, bool] = field(default_factory=dict)
    witnesses: dict[str, object] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def record(self, name: str, witness=None):
        self.checks[name] = witness is None
        if witness is not None:
            self.witnesses[name] = witness


def validate(d: CartanDatum) -> ValidationReport:
    rep = ValidationReport()
    L = d.letters

    def first(pred: Callable):
        for x in pred():
            return x
        return None

    rep.record("theta_closed", first(lambda: (i for i in L if d.theta(i) not in d)))
    rep.record("symmetric", first(lambda: ((i, j) for i in L for j in L if d.pair(i, j) != d.pair(j, i))))
    rep.record("diagonal_positive_even",
               first(lambda: (i for i in L if d.pair(i, i) <= 0 or d.pair(i, i) % 2)))
    rep.record("off_diagonal_nonpositive",
               first(lambda: ((i, j) for i in L for j in L if i != j and d.pair(i, j) > 0)))
    rep.record("cartan_integral",
               first(lambda: ((i, j) for i in L for j in L
                              if d.pair(i, i) > 0 and (2 * d.pair(i, j)) % d.pair(i, i))))
    rep.record("theta_involution",
               first(lambda: (i for i in L if d.theta(i) in d and d.theta(d.theta(i)) != i)))
    rep.record("theta_preserves_pairing",
               first(lambda: ((i, j) for i in L for j in L
                              if d.theta(i) in d and d.theta(j) in d
                              and d.pair(d.theta(i), d.theta(j)) != d.pair(i, j))))
    rep.record("no_fixed_point", first(lambda: (i for i in L if d.theta(i) == i)))
    return rep


def make_datum(kind: str, letters, pairing: Callable[[Letter, Letter], int],
               theta: Callable[[Letter], Letter], name: str = "",
               check: bool = True) -> CartanDatum:
    letters = tuple(sorted(set(letters), key=letter_key))
    table = {}
    for i in letters:
        for j in letters:
            v = pairing(i, j)
            if v:
                table[(i, j)] = v
    d = CartanDatum(kind, letters, table, {i: theta(i) for i in letters}, name or kind)
    if check:
        rep = validate(d)
        if not rep.ok:
            raise InvalidDatum(f"invalid datum {d.name}: {rep.witnesses}")
    return d


@lru_cache(maxsize=None)
def make_ainf_odd(radius: int) -> CartanDatum:
    """Type A-infinity on odd exponents |n| <= radius, theta(n) = -n."""
    if radius < 1 or radius % 2 == 0:
        raise InvalidDatum(f"radius must be odd and >= 1, got {radius}")
    letters = [n for n in range(-radius, radius + 1) if n % 2]

    def pairing(i, j):
        if i == j:
            return 2
        return -1 if abs(i - j) == 2 else 0

    return make_datum("AInfOdd", letters, pairing, lambda n: -n, name=f"ainf:{radius}")


@lru_cache(maxsize=None)
def make_affine_even(ell: int) -> CartanDatum:
    """Affine type A on the ell odd residues mod 2*ell, theta(n) = -n mod 2*ell."""
    if ell < 2 or ell % 2:
        raise InvalidDatum(f"ell must be even and >= 2, got {ell}")
    m = 2 * ell
    letters = list(range(1, m, 2))

    def pairing(i, j):
        if i == j:
            return 2
        return -sum(1 for s in (2, -2) if (i + s - j) % m == 0)

    return make_datum(f"AffineEven({ell})", letters, pairing, lambda n: (-n) % m, name=f"aff:{ell}")


_CONFIG = re.compile(r"^(ainf|aff)(?::(-?\d+))?$")


def parse_datum(text: str, depth: Optional[int] = None) -> CartanDatum:
    """Datum config string: ``ainf`` (window from depth), ``ainf:R`` or ``aff:L``."""
    m = _CONFIG.match(text.strip())
    if not m:
        raise InvalidDatum(f"unrecognised datum string {text!r}")
    kind, arg = m.group(1), m.group(2)
    if kind == "ainf":
        if arg is None:
            return make_ainf_odd(auto_radius(depth if depth is not None else 4))
        return make_ainf_odd(int(arg))
    if arg is None:
        raise InvalidDatum("aff needs an explicit ell, e.g. 'aff:2'")
    return make_affine_even(int(arg))


def auto_radius(depth: int) -> int:
    return 2 * max(depth, 0) + 1
