"""Exact rationals and sparse polynomials in one and two variables.

Coefficients are :class:`Rat`, a :class:`fractions.Fraction` restricted to
signed 64-bit numerator and denominator.  Every arithmetic result is checked
and an :class:`OverflowError` is raised instead of silently growing.

Two-variable polynomials are stored as ``{(i, j): coeff}`` for
``coeff * a**i * b**j``.  The same class holds polynomials in the original
frame ``(q1, q2)`` and in the rotated frame ``(x, y) = (q1 + q2, q1 - q2)``;
only the variable names used for rendering differ.
"""
from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Mapping

import numpy as np

from .errors import NumericalError

INT64_MIN = -(2**63)
INT64_MAX = 2**63 - 1

Q_NAMES = ("q1", "q2")
XY_NAMES = ("x", "y")


class Rat(Fraction):
    """Reduced fraction with 64-bit checked numerator and denominator."""

    __slots__ = ()

    def __new__(cls, numerator=0, denominator=None):
        self = super().__new__(cls, numerator, denominator)
        _check_bounds(self._numerator, self._denominator)
        return self

    @property
    def num(self) -> int:
        return self._numerator

    @property
    def den(self) -> int:
        return self._denominator

    def __add__(self, other):
        return _checked(Fraction.__add__(self, other))

    def __radd__(self, other):
        return _checked(Fraction.__radd__(self, other))

    def __sub__(self, other):
        return _checked(Fraction.__sub__(self, other))

    def __rsub__(self, other):
        return _checked(Fraction.__rsub__(self, other))

    def __mul__(self, other):
        return _checked(Fraction.__mul__(self, other))

    def __rmul__(self, other):
        return _checked(Fraction.__rmul__(self, other))

    def __truediv__(self, other):
        return _checked(Fraction.__truediv__(self, other))

    def __rtruediv__(self, other):
        return _checked(Fraction.__rtruediv__(self, other))

    def __pow__(self, other):
        return _checked(Fraction.__pow__(self, other))

    def __neg__(self):
        return _checked(Fraction.__neg__(self))

    def __pos__(self):
        return self

    def __abs__(self):
        return _checked(Fraction.__abs__(self))

    def __repr__(self):
        return f"Rat({self._numerator}, {self._denominator})"


def _check_bounds(num: int, den: int) -> None:
    if not (INT64_MIN <= num <= INT64_MAX) or den > INT64_MAX:
        raise OverflowError(f"rational {num}/{den} exceeds 64-bit range")


def _checked(value):
    # float / complex results (mixed-type arithmetic) pass through unchanged
    if not isinstance(value, Fraction):
        return value
    if type(value) is Rat:
        _check_bounds(value._numerator, value._denominator)
        return value
    _check_bounds(value.numerator, value.denominator)
    out = Fraction.__new__(Rat)
    out._numerator = value.numerator
    out._denominator = value.denominator
    return out


def as_rat(value) -> Rat:
    """Coerce an int, Fraction or ``"a/b"`` string to :class:`Rat`."""
    if isinstance(value, Rat):
        return value
    if isinstance(value, (int, Rational, str)) and not isinstance(value, bool):
        return Rat(value)
    raise TypeError(f"cannot use {type(value).__name__} as an exact coefficient")


def rat_add(a: Rat, b: Rat) -> Rat:
    return as_rat(a) + as_rat(b)


def rat_mul(a: Rat, b: Rat) -> Rat:
    return as_rat(a) * as_rat(b)


def rat_neg(a: Rat) -> Rat:
    return -as_rat(a)


ZERO = Rat(0)
ONE = Rat(1)


def _format_coeff(c: Rat) -> str:
    return f"{c.num}" if c.den == 1 else f"{c.num}/{c.den}"


def join_terms(parts: list[tuple[Rat, str]]) -> str:
    """Render ``[(coeff, monomial)]``; monomial ``""`` is the constant."""
    if not parts:
        return "0"
    out = []
    for k, (c, mono) in enumerate(parts):
        mag = abs(c)
        if not mono:
            body = _format_coeff(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{_format_coeff(mag)}*{mono}"
        if k == 0:
            out.append(f"-{body}" if c < 0 else body)
        else:
            out.append(f" - {body}" if c < 0 else f" + {body}")
    return "".join(out)


def _power_str(name: str, e: int) -> str:
    return name if e == 1 else f"{name}^{e}"


class Poly1:
    """Sparse one-variable polynomial ``{exponent: Rat}``."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[int, object] | None = None):
        clean = {}
        for e, c in (terms or {}).items():
            if isinstance(e, bool) or not isinstance(e, int) or e < 0:
                raise ValueError(f"invalid exponent {e!r}")
            c = as_rat(c)
            if c != 0:
                clean[e] = c
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict) -> Poly1:
        p = cls.__new__(cls)
        p._terms = {e: c for e, c in terms.items() if c != 0}
        p._hash = None
        return p

    @classmethod
    def monomial(cls, coeff, exponent: int) -> Poly1:
        return cls({exponent: coeff})

    @property
    def terms(self) -> Mapping[int, Rat]:
        return dict(self._terms)

    def items(self) -> list[tuple[int, Rat]]:
        """Terms in descending exponent order."""
        return sorted(self._terms.items(), reverse=True)

    def coeff(self, e: int) -> Rat:
        return self._terms.get(e, ZERO)

    def is_zero(self) -> bool:
        return not self._terms

    @property
    def degree(self) -> int:
        return max(self._terms, default=-1)

    def __eq__(self, other):
        if isinstance(other, Poly1):
            return self._terms == other._terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(("Poly1", frozenset(self._terms.items())))
        return self._hash

    def __add__(self, other):
        if not isinstance(other, Poly1):
            other = Poly1({0: other})
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = out.get(e, ZERO) + c
        return Poly1._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return Poly1._raw({e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        if not isinstance(other, Poly1):
            other = Poly1({0: other})
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> Poly1:
        c = as_rat(c)
        if c == 0:
            return Poly1()
        return Poly1._raw({e: v * c for e, v in self._terms.items()})

    def __mul__(self, other):
        if not isinstance(other, Poly1):
            return self.scale(other)
        out: dict[int, Rat] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = e1 + e2
                out[e] = out.get(e, ZERO) + c1 * c2
        return Poly1._raw(out)

    def __rmul__(self, other):
        return self.scale(other)

    def derivative(self) -> Poly1:
        return Poly1._raw({e - 1: c * e for e, c in self._terms.items() if e > 0})

    def __call__(self, t):
        """Float evaluation; works elementwise on numpy arrays."""
        total = 0.0
        for e, c in self._terms.items():
            total = total + (c.num / c.den) * t**e
        return total

    def render(self, name: str = "x") -> str:
        return join_terms([(c, _power_str(name, e) if e else "") for e, c in self.items()])

    def __str__(self):
        return self.render()

    def __repr__(self):
        return f"Poly1({self.render()!r})"


class Poly2:
    """Sparse two-variable polynomial ``{(i, j): Rat}`` for ``c * a**i * b**j``."""

    __slots__ = ("_terms", "_hash", "_float_terms")

    def __init__(self, terms: Mapping[tuple[int, int], object] | None = None):
        clean = {}
        for key, c in (terms or {}).items():
            i, j = key
            for e in (i, j):
                if isinstance(e, bool) or not isinstance(e, int) or e < 0:
                    raise ValueError(f"invalid exponent pair {key!r}")
            c = as_rat(c)
            if c != 0:
                clean[(i, j)] = c
        self._terms = clean
        self._hash = None
        self._float_terms = None

    @classmethod
    def _raw(cls, terms: dict) -> Poly2:
        p = cls.__new__(cls)
        p._terms = {k: c for k, c in terms.items() if c != 0}
        p._hash = None
        p._float_terms = None
        return p

    @classmethod
    def const(cls, c) -> Poly2:
        return cls({(0, 0): c})

    @classmethod
    def var(cls, index: int) -> Poly2:
        """First (index 0) or second (index 1) variable."""
        return cls({(1, 0) if index == 0 else (0, 1): 1})

    @property
    def terms(self) -> Mapping[tuple[int, int], Rat]:
        return dict(self._terms)

    def items(self) -> list[tuple[tuple[int, int], Rat]]:
        """Terms in descending graded-lexicographic order."""
        return sorted(self._terms.items(), key=lambda kv: (kv[0][0] + kv[0][1], kv[0][0]), reverse=True)

    def coeff(self, i: int, j: int) -> Rat:
        return self._terms.get((i, j), ZERO)

    def is_zero(self) -> bool:
        return not self._terms

    @property
    def degree(self) -> int:
        return max((i + j for i, j in self._terms), default=-1)

    def mixed_terms(self) -> list[tuple[int, int, Rat]]:
        return [(i, j, c) for (i, j), c in self.items() if i > 0 and j > 0]

    def __eq__(self, other):
        if isinstance(other, Poly2):
            return self._terms == other._terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(("Poly2", frozenset(self._terms.items())))
        return self._hash

    def __add__(self, other):
        if not isinstance(other, Poly2):
            other = Poly2.const(other)
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out.get(k, ZERO) + c
        return Poly2._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return Poly2._raw({k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        if not isinstance(other, Poly2):
            other = Poly2.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> Poly2:
        c = as_rat(c)
        if c == 0:
            return Poly2()
        return Poly2._raw({k: v * c for k, v in self._terms.items()})

    def __mul__(self, other):
        if not isinstance(other, Poly2):
            return self.scale(other)
        out: dict[tuple[int, int], Rat] = {}
        for (i1, j1), c1 in self._terms.items():
            for (i2, j2), c2 in other._terms.items():
                k = (i1 + i2, j1 + j2)
                out[k] = out.get(k, ZERO) + c1 * c2
        return Poly2._raw(out)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, n: int) -> Poly2:
        if isinstance(n, bool) or not isinstance(n, int) or n < 0:
            raise ValueError("polynomial exponent must be a non-negative integer")
        result = Poly2.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def partial(self, var) -> Poly2:
        """Exact partial derivative; ``var`` is 0/1 or a variable name."""
        idx = _var_index(var)
        out = {}
        for (i, j), c in self._terms.items():
            e = (i, j)[idx]
            if e:
                out[(i - 1, j) if idx == 0 else (i, j - 1)] = c * e
        return Poly2._raw(out)

    def _floats(self):
        if self._float_terms is None:
            self._float_terms = tuple((c.num / c.den, i, j) for (i, j), c in self._terms.items())
        return self._float_terms

    def __call__(self, a, b):
        """Float evaluation, term by term; accepts numpy arrays."""
        total = 0.0
        for c, i, j in self._floats():
            total = total + c * a**i * b**j
        return total

    def eval(self, a: float, b: float) -> float:
        try:
            value = self(a, b)
        except OverflowError as exc:
            raise NumericalError(f"polynomial overflow at ({a}, {b})") from exc
        if not np.all(np.isfinite(value)):
            raise NumericalError(f"non-finite polynomial value at ({a}, {b})")
        return value

    def render(self, names: tuple[str, str] = Q_NAMES) -> str:
        parts = []
        for (i, j), c in self.items():
            mono = "*".join(_power_str(n, e) for n, e in zip(names, (i, j)) if e)
            parts.append((c, mono))
        return join_terms(parts)

    def __str__(self):
        return self.render()

    def __repr__(self):
        return f"Poly2({self.render()!r})"


def _var_index(var) -> int:
    if var in (0, "q1", "x"):
        return 0
    if var in (1, "q2", "y"):
        return 1
    raise ValueError(f"unknown variable {var!r}")


def poly2_add(p: Poly2, q: Poly2) -> Poly2:
    return p + q


def poly2_mul(p: Poly2, q: Poly2) -> Poly2:
    return p * q


def poly2_scale(p: Poly2, c) -> Poly2:
    return p.scale(c)


def poly2_partial(p: Poly2, var) -> Poly2:
    return p.partial(var)


def poly2_eval(p: Poly2, q1: float, q2: float) -> float:
    return p.eval(q1, q2)


_HALF = Rat(1, 2)
# q1 = (x + y)/2, q2 = (x - y)/2
_Q1_IN_XY = Poly2({(1, 0): _HALF, (0, 1): _HALF})
_Q2_IN_XY = Poly2({(1, 0): _HALF, (0, 1): -_HALF})
# x = q1 + q2, y = q1 - q2
_X_IN_Q = Poly2({(1, 0): 1, (0, 1): 1})
_Y_IN_Q = Poly2({(1, 0): 1, (0, 1): -1})


def _powers(base: Poly2, n: int) -> list[Poly2]:
    out = [Poly2.const(1)]
    for _ in range(n):
        out.append(out[-1] * base)
    return out


def _substitute(p: Poly2, a: Poly2, b: Poly2) -> Poly2:
    if p.is_zero():
        return Poly2()
    max_i = max(i for i, _ in p._terms)
    max_j = max(j for _, j in p._terms)
    pa, pb = _powers(a, max_i), _powers(b, max_j)
    out = Poly2()
    for (i, j), c in p._terms.items():
        out = out + (pa[i] * pb[j]).scale(c)
    return out


def to_xy(p: Poly2) -> Poly2:
    """Rewrite ``p(q1, q2)`` as a polynomial in ``x = q1 + q2``, ``y = q1 - q2``."""
    return _substitute(p, _Q1_IN_XY, _Q2_IN_XY)


def xy_to_q(p_xy: Poly2) -> Poly2:
    """Inverse of :func:`to_xy`: substitute ``x = q1 + q2``, ``y = q1 - q2``."""
    return _substitute(p_xy, _X_IN_Q, _Y_IN_Q)


def compose_linear(f: Poly1, lin: Poly2) -> Poly2:
    """``f(lin(q1, q2))`` by Horner's rule."""
    out = Poly2()
    for e in range(f.degree, -1, -1):
        out = out * lin + Poly2.const(f.coeff(e))
    return out


def from_xy(fx: Poly1, gy: Poly1, signs: tuple[int, int] = (1, 1)) -> Poly2:
    """Build ``s0*f(q1 + q2) + s1*g(q1 - q2)`` as an exact ``Poly2``."""
    sf, sg = signs
    if sf not in (1, -1) or sg not in (1, -1):
        raise ValueError("signs must be +1 or -1")
    f_part = compose_linear(fx, _X_IN_Q)
    g_part = compose_linear(gy, _Y_IN_Q)
    return (f_part if sf > 0 else -f_part) + (g_part if sg > 0 else -g_part)


def pure_parts(p_xy: Poly2) -> tuple[Poly1, Poly1, Rat]:
    """Split a rotated-frame polynomial into (x-only, y-only, constant) parts."""
    fx, gy = {}, {}
    for (i, j), c in p_xy._terms.items():
        if i and not j:
            fx[i] = c
        elif j and not i:
            gy[j] = c
    return Poly1._raw(fx), Poly1._raw(gy), p_xy.coeff(0, 0)
