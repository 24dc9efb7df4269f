"""Exact arithmetic in Q(t), the field of rational functions in one variable.

The same type serves for the quantum parameter ``q`` of the crystal side and
for the Hecke parameter ``p``; the variable name only matters for printing
and parsing.

A nonzero value is stored as ``t**v * n(t) / d(t)`` where ``n`` and ``d`` are
dense coefficient tuples with nonzero constant terms, ``gcd(n, d) = 1`` and
``d`` monic.  That form is unique, so equality and hashing are structural,
and Laurent polynomials (``d == (1,)``) never need a gcd.
"""
from __future__ import annotations

import enum
import re
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping, Sequence, Union

Coeff = Union[int, Fraction]


class PoleAtZero(ArithmeticError):
    """Raised when evaluating at 0 a function that has a pole there."""

    def __init__(self, order: int):
        super().__init__(f"pole of order {order} at 0")
        self.order = order


class SubringTag(enum.Enum):
    A0 = "A0"  # regular at t = 0
    AInf = "AInf"  # regular at t = infinity
    A = "A"  # Laurent polynomials


# -- dense polynomial helpers (tuples, index = exponent) ---------------------

def _trim(c: list) -> tuple:
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def _norm_coeff(x):
    if isinstance(x, Fraction) and x.denominator == 1:
        return x.numerator
    return x


def _div_coeff(a, b):
    if b == 1:
        return a
    if isinstance(a, int) and isinstance(b, int):
        return _norm_coeff(Fraction(a, b))
    return _norm_coeff(Fraction(a) / b)


def _padd(a: tuple, b: tuple) -> tuple:
    if len(a) < len(b):
        a, b = b, a
    c = list(a)
    for k, x in enumerate(b):
        c[k] += x
    return _trim(c)


def _psub(a: tuple, b: tuple) -> tuple:
    c = list(a) + [0] * (len(b) - len(a))
    for k, x in enumerate(b):
        c[k] -= x
    return _trim(c)


def _pmul(a: tuple, b: tuple) -> tuple:
    if not a or not b:
        return ()
    if len(a) == 1 and a[0] == 1:
        return b
    if len(b) == 1 and b[0] == 1:
        return a
    c = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                c[i + j] += x * y
    return _trim(c)


def _pscale(a: tuple, s) -> tuple:
    if s == 1:
        return a
    return tuple(_norm_coeff(x * s) for x in a)


def _pdivmod(a: tuple, b: tuple) -> tuple[tuple, tuple]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(a)
    db = len(b) - 1
    lead = b[-1]
    if len(r) <= db:
        return (), tuple(r)
    qt = [0] * (len(r) - db)
    for k in range(len(r) - 1, db - 1, -1):
        c = r[k]
        if c == 0:
            continue
        c = _div_coeff(c, lead)
        qt[k - db] = c
        for j, y in enumerate(b):
            r[k - db + j] -= c * y
    return _trim(qt), _trim(r[:db])


def _pmonic(a: tuple) -> tuple:
    lead = a[-1]
    if lead == 1:
        return a
    return tuple(_div_coeff(x, lead) for x in a)


def _pgcd(a: tuple, b: tuple) -> tuple:
    while b:
        a, b = b, _pdivmod(a, b)[1]
    return _pmonic(a) if a else ()


def _low_order(a: tuple) -> int:
    k = 0
    while a[k] == 0:
        k += 1
    return k


def _ptrim_low(a: tuple) -> tuple[int, tuple]:
    k = _low_order(a)
    return k, a[k:] if k else a


def _pshift(a: tuple, k: int) -> tuple:
    return (0,) * k + a if k else a


def _pstr(c: Sequence, var: str) -> str:
    parts = []
    for e in range(len(c) - 1, -1, -1):
        x = c[e]
        if x == 0:
            continue
        neg = x < 0
        ax = -x if neg else x
        if e == 0:
            body = str(ax)
        else:
            mono = var if e == 1 else f"{var}^{e}"
            body = mono if ax == 1 else f"{ax}*{mono}"
        if not parts:
            parts.append(("-" if neg else "") + body)
        else:
            parts.append(("-" if neg else "+") + body)
    return "".join(parts) if parts else "0"


class IntPoly:
    """Polynomial with exact rational coefficients and nonnegative exponents."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Union[Sequence[Coeff], Mapping[int, Coeff]] = ()):
        if isinstance(coeffs, Mapping):
            dense = [0] * (max(coeffs, default=-1) + 1)
            for e, c in coeffs.items():
                if e < 0:
                    raise ValueError("IntPoly exponents must be nonnegative")
                dense[e] += c
        else:
            dense = list(coeffs)
        self.coeffs = _trim([_norm_coeff(Fraction(x) if isinstance(x, Rational) and not isinstance(x, int) else x)
                             for x in dense])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def terms(self) -> dict[int, Coeff]:
        return {e: c for e, c in enumerate(self.coeffs) if c}

    def __eq__(self, other):
        return isinstance(other, IntPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other: IntPoly) -> IntPoly:
        return IntPoly(_padd(self.coeffs, other.coeffs))

    def __sub__(self, other: IntPoly) -> IntPoly:
        return IntPoly(_psub(self.coeffs, other.coeffs))

    def __mul__(self, other: IntPoly) -> IntPoly:
        return IntPoly(_pmul(self.coeffs, other.coeffs))

    def __divmod__(self, other: IntPoly) -> tuple[IntPoly, IntPoly]:
        qt, r = _pdivmod(self.coeffs, other.coeffs)
        return IntPoly(qt), IntPoly(r)

    def gcd(self, other: IntPoly) -> IntPoly:
        return IntPoly(_pgcd(self.coeffs, other.coeffs))

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __bool__(self):
        return bool(self.coeffs)

    def __repr__(self):
        return f"IntPoly({_pstr(self.coeffs, 't')})"


# -- rational functions ------------------------------------------------------

_ONE = (1,)


class RatFunc:
    """Canonical element of Q(t).  Immutable."""

    __slots__ = ("_v", "_n", "_d", "_h")

    def __init__(self, v: int = 0, n: tuple = (), d: tuple = _ONE, _raw: bool = False):
        if not _raw:
            v, n, d = _canon(v, tuple(_norm_coeff(x) for x in n), tuple(_norm_coeff(x) for x in d))
        self._v = v
        self._n = n
        self._d = d
        self._h = None

    # construction
    @classmethod
    def const(cls, c: Coeff) -> RatFunc:
        c = _norm_coeff(Fraction(c)) if not isinstance(c, int) else c
        if c == 0:
            return ZERO
        return cls(0, (c,), _ONE, _raw=True)

    @classmethod
    def monomial(cls, e: int, c: Coeff = 1) -> RatFunc:
        if c == 0:
            return ZERO
        return cls(e, (_norm_coeff(c),), _ONE, _raw=True)

    @classmethod
    def laurent(cls, terms: Mapping[int, Coeff]) -> RatFunc:
        terms = {e: c for e, c in terms.items() if c}
        if not terms:
            return ZERO
        lo = min(terms)
        dense = [0] * (max(terms) - lo + 1)
        for e, c in terms.items():
            dense[e - lo] = _norm_coeff(c)
        return cls(lo, tuple(dense), _ONE, _raw=True)

    @classmethod
    def from_polys(cls, num: IntPoly, den: IntPoly) -> RatFunc:
        if not den:
            raise ZeroDivisionError("zero denominator")
        return cls(0, num.coeffs, den.coeffs)

    @classmethod
    def coerce(cls, x) -> RatFunc:
        if isinstance(x, RatFunc):
            return x
        if isinstance(x, (int, Fraction)):
            return cls.const(x)
        if isinstance(x, Rational):
            return cls.const(Fraction(x))
        raise TypeError(f"cannot coerce {type(x).__name__} to RatFunc")

    # structure
    @property
    def numerator(self) -> IntPoly:
        if not self._n:
            return IntPoly(())
        return IntPoly(_pshift(self._n, max(self._v, 0)))

    @property
    def denominator(self) -> IntPoly:
        return IntPoly(_pshift(self._d, max(-self._v, 0)))

    @property
    def unit_denominator(self) -> IntPoly:
        """Monic denominator with the power of t removed; a unit in A0."""
        return IntPoly(self._d)

    def is_zero(self) -> bool:
        return not self._n

    def is_laurent(self) -> bool:
        return self._d == _ONE

    def is_constant(self) -> bool:
        return not self._n or (self._v == 0 and len(self._n) == 1 and self._d == _ONE)

    def constant_value(self) -> Coeff:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self._n[0] if self._n else 0

    def valuation(self) -> int:
        """Order of vanishing at 0 (negative for a pole)."""
        if not self._n:
            raise ValueError("valuation of zero")
        return self._v

    def degree(self) -> int:
        """deg(numerator) - deg(denominator); minus the order at infinity."""
        if not self._n:
            raise ValueError("degree of zero")
        return self._v + len(self._n) - len(self._d)

    def laurent_terms(self) -> dict[int, Coeff]:
        if self._d != _ONE:
            raise ValueError(f"{self} is not a Laurent polynomial")
        return {self._v + k: c for k, c in enumerate(self._n) if c}

    def size(self) -> int:
        return len(self._n) + len(self._d)

    # arithmetic
    def __add__(self, other) -> RatFunc:
        if not isinstance(other, RatFunc):
            other = RatFunc.coerce(other)
        if not other._n:
            return self
        if not self._n:
            return other
        v1, v2 = self._v, other._v
        v = min(v1, v2)
        if self._d == other._d:
            n = _padd(_pshift(self._n, v1 - v), _pshift(other._n, v2 - v))
            if not n:
                return ZERO
            if self._d == _ONE:
                k, n = _ptrim_low(n)
                return RatFunc(v + k, n, _ONE, _raw=True)
            return RatFunc(v, n, self._d)
        n = _padd(_pmul(_pshift(self._n, v1 - v), other._d), _pmul(_pshift(other._n, v2 - v), self._d))
        if not n:
            return ZERO
        return RatFunc(v, n, _pmul(self._d, other._d))

    __radd__ = __add__

    def __neg__(self) -> RatFunc:
        if not self._n:
            return self
        return RatFunc(self._v, tuple(-x for x in self._n), self._d, _raw=True)

    def __sub__(self, other) -> RatFunc:
        if not isinstance(other, RatFunc):
            other = RatFunc.coerce(other)
        return self + (-other)

    def __rsub__(self, other) -> RatFunc:
        return RatFunc.coerce(other) + (-self)

    def __mul__(self, other) -> RatFunc:
        if not isinstance(other, RatFunc):
            if isinstance(other, int) or isinstance(other, Fraction):
                if other == 0 or not self._n:
                    return ZERO
                return RatFunc(self._v, _pscale(self._n, other), self._d, _raw=True)
            other = RatFunc.coerce(other)
        if not self._n or not other._n:
            return ZERO
        v = self._v + other._v
        if self._d == _ONE and other._d == _ONE:
            return RatFunc(v, _pmul(self._n, other._n), _ONE, _raw=True)
        n1, d2 = self._n, other._d
        n2, d1 = other._n, self._d
        if d2 != _ONE:
            g = _pgcd(n1, d2)
            if g != _ONE:
                n1 = _pdivmod(n1, g)[0]
                d2 = _pdivmod(d2, g)[0]
        if d1 != _ONE:
            g = _pgcd(n2, d1)
            if g != _ONE:
                n2 = _pdivmod(n2, g)[0]
                d1 = _pdivmod(d1, g)[0]
        n = _pmul(n1, n2)
        d = _pmul(d1, d2)
        lead = d[-1]
        if lead != 1:
            n = tuple(_div_coeff(x, lead) for x in n)
            d = tuple(_div_coeff(x, lead) for x in d)
        return RatFunc(v, n, d, _raw=True)

    __rmul__ = __mul__

    def inverse(self) -> RatFunc:
        if not self._n:
            raise ZeroDivisionError("RatFunc division by zero")
        n, d = self._d, self._n
        lead = d[-1]
        if lead != 1:
            n = tuple(_div_coeff(x, lead) for x in n)
            d = tuple(_div_coeff(x, lead) for x in d)
        return RatFunc(-self._v, n, d, _raw=True)

    def __truediv__(self, other) -> RatFunc:
        if not isinstance(other, RatFunc):
            other = RatFunc.coerce(other)
        return self * other.inverse()

    def __rtruediv__(self, other) -> RatFunc:
        return RatFunc.coerce(other) * self.inverse()

    def __pow__(self, k: int) -> RatFunc:
        if k < 0:
            return self.inverse() ** (-k)
        out = ONE
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def shift(self, k: int) -> RatFunc:
        """Multiply by t**k."""
        if not self._n or k == 0:
            return self
        return RatFunc(self._v + k, self._n, self._d, _raw=True)

    def bar(self) -> RatFunc:
        """Substitute t -> 1/t."""
        if not self._n:
            return self
        v = -self._v - (len(self._n) - 1) + (len(self._d) - 1)
        n = tuple(reversed(self._n))
        d = tuple(reversed(self._d))
        lead = d[-1]
        if lead != 1:
            n = tuple(_div_coeff(x, lead) for x in n)
            d = tuple(_div_coeff(x, lead) for x in d)
        return RatFunc(v, n, d, _raw=True)

    def eval_at_zero(self) -> Coeff:
        if not self._n or self._v > 0:
            return 0
        if self._v < 0:
            raise PoleAtZero(-self._v)
        return _div_coeff(self._n[0], self._d[0])

    def __call__(self, x):
        num = 0
        for c in reversed(self._n):
            num = num * x + c
        den = 0
        for c in reversed(self._d):
            den = den * x + c
        return Fraction(num) * Fraction(x) ** self._v / den

    def in_ring(self, ring: SubringTag) -> bool:
        if not self._n:
            return True
        if ring is SubringTag.A0:
            return self._v >= 0
        if ring is SubringTag.AInf:
            return self.degree() <= 0
        return self._d == _ONE

    # comparison / hashing
    def __eq__(self, other):
        if isinstance(other, RatFunc):
            return self._v == other._v and self._n == other._n and self._d == other._d
        if isinstance(other, (int, Fraction)):
            return self == RatFunc.coerce(other)
        return NotImplemented

    def __hash__(self):
        h = self._h
        if h is None:
            if self.is_constant():
                h = hash(self.constant_value())
            else:
                h = hash((self._v, self._n, self._d))
            self._h = h
        return h

    def __bool__(self):
        return bool(self._n)

    def to_string(self, var: str = "q") -> str:
        num = _pstr(_pshift(self._n, max(self._v, 0)), var) if self._n else "0"
        den_c = _pshift(self._d, max(-self._v, 0))
        if den_c == _ONE:
            return num
        den = _pstr(den_c, var)
        if len([x for x in self._n if x]) > 1:
            num = f"({num})"
        if len([x for x in den_c if x]) > 1 or (den_c[-1] != 1):
            den = f"({den})"
        return f"{num}/{den}"

    def __str__(self):
        return self.to_string("q")

    def __repr__(self):
        return f"RatFunc({self.to_string('q')})"


def _canon(v: int, n: tuple, d: tuple) -> tuple[int, tuple, tuple]:
    n = _trim(list(n))
    d = _trim(list(d))
    if not d:
        raise ZeroDivisionError("zero denominator")
    if not n:
        return 0, (), _ONE
    k, n = _ptrim_low(n)
    v += k
    k, d = _ptrim_low(d)
    v -= k
    if d != _ONE and len(d) > 1:
        g = _pgcd(n, d)
        if g != _ONE:
            n = _pdivmod(n, g)[0]
            d = _pdivmod(d, g)[0]
    lead = d[-1]
    if lead != 1:
        n = tuple(_div_coeff(x, lead) for x in n)
        d = tuple(_div_coeff(x, lead) for x in d)
    return v, n, d


ZERO = RatFunc(0, (), _ONE, _raw=True)
ONE = RatFunc(0, (1,), _ONE, _raw=True)
Q = RatFunc(1, (1,), _ONE, _raw=True)


def qpow(k: int) -> RatFunc:
    return RatFunc(k, (1,), _ONE, _raw=True)


def rf_arith(a: RatFunc, b: RatFunc, op: str) -> RatFunc:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown op {op!r}")


def rf_membership(a: RatFunc, ring: SubringTag) -> bool:
    return a.in_ring(ring)


# -- q-integers --------------------------------------------------------------

_QINT: dict[tuple[int, int], RatFunc] = {}


def q_integer(k: int, d: int = 1) -> RatFunc:
    """Balanced q-integer [k] in the variable t**d: t^{d(k-1)} + ... + t^{-d(k-1)}."""
    if k < 0:
        raise ValueError("q_integer needs k >= 0")
    key = (k, d)
    r = _QINT.get(key)
    if r is None:
        if k == 0:
            r = ZERO
        else:
            terms = {d * (k - 1 - 2 * j): 1 for j in range(k)}
            r = RatFunc.laurent(terms)
        _QINT[key] = r
    return r


def q_factorial(k: int, d: int = 1) -> RatFunc:
    out = ONE
    for j in range(1, k + 1):
        out = out * q_integer(j, d)
    return out


def q_binomial(n: int, k: int, d: int = 1) -> RatFunc:
    if k < 0 or k > n:
        return ZERO
    return q_factorial(n, d) / (q_factorial(k, d) * q_factorial(n - k, d))


# -- parsing -----------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|(\*\*|[-+*/^()])|([A-Za-z_]\w*))")


class ParseError(ValueError):
    pass


def parse_ratfunc(text: str, var: str = "q") -> RatFunc:
    """Parse an integer-coefficient rational expression in one variable.

    Accepts ``+ - * / ^ **``, parentheses, integers and the variable name,
    e.g. ``"(q^2+1)/q"`` or ``"1 - q**-2"``.
    """
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character at {pos} in {text!r}")
        num, op, name = m.groups()
        if num is not None:
            tokens.append(("num", int(num)))
        elif op is not None:
            tokens.append(("op", "^" if op == "**" else op))
        else:
            if name != var:
                raise ParseError(f"unknown symbol {name!r} (expected {var!r})")
            tokens.append(("var", name))
        pos = m.end()
    tokens.append(("end", None))
    idx = 0

    def peek():
        return tokens[idx]

    def take():
        nonlocal idx
        tok = tokens[idx]
        idx += 1
        return tok

    def expr():
        val = term()
        while peek() in (("op", "+"), ("op", "-")):
            op = take()[1]
            rhs = term()
            val = val + rhs if op == "+" else val - rhs
        return val

    def term():
        val = unary()
        while peek() in (("op", "*"), ("op", "/")):
            op = take()[1]
            rhs = unary()
            val = val * rhs if op == "*" else val / rhs
        return val

    def unary():
        if peek() == ("op", "-"):
            take()
            return -unary()
        if peek() == ("op", "+"):
            take()
            return unary()
        return power()

    def power():
        base = atom()
        if peek() == ("op", "^"):
            take()
            sign = 1
            while peek() in (("op", "-"), ("op", "+")):
                if take()[1] == "-":
                    sign = -sign
            kind, val = take()
            if kind == "num":
                return base ** (sign * val)
            if (kind, val) == ("op", "("):
                e = expr()
                if take() != ("op", ")"):
                    raise ParseError("expected ')'")
                if not e.is_constant() or not isinstance(e.constant_value(), int):
                    raise ParseError("exponent must be an integer")
                return base ** (sign * e.constant_value())
            raise ParseError("bad exponent")
        return base

    def atom():
        kind, val = take()
        if kind == "num":
            return RatFunc.const(val)
        if kind == "var":
            return Q
        if (kind, val) == ("op", "("):
            e = expr()
            if take() != ("op", ")"):
                raise ParseError("expected ')'")
            return e
        raise ParseError(f"unexpected token {val!r}")

    out = expr()
    if peek()[0] != "end":
        raise ParseError(f"trailing input in {text!r}")
    return out


def as_ratfuncs(values: Iterable) -> list[RatFunc]:
    return [RatFunc.coerce(x) for x in values]
