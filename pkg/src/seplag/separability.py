"""Separability of a polynomial potential along the diagonals q1 + q2, q1 - q2.

A potential ``U(q1, q2)`` is separable here when ``U = f(q1 + q2) + g(q1 - q2)``.
In that case the cross-kinetic Lagrangian ``v1*v2 - Ut`` with
``Ut = f(q1 + q2) - g(q1 - q2)`` yields the same equations of motion as
``(v1^2 + v2^2)/2 - U``, and its energy ``K = v1*v2 + Ut`` is a second first
integral.  The test is constructive: rewrite ``U`` in ``x = q1 + q2``,
``y = q1 - q2`` and look for mixed monomials ``x^i y^j`` (``i, j > 0``).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Optional

from .errors import NotSeparableError
from .ratpoly import Poly1, Poly2, Rat, XY_NAMES, from_xy, pure_parts, to_xy


@dataclass(frozen=True)
class SeparationResult:
    """Either ``(f, g)`` or the mixed monomials of ``to_xy(U)`` that block it.

    ``obstruction`` entries are ``(i, j, coeff)`` for ``coeff * x^i * y^j``.
    """

    f: Optional[Poly1] = None
    g: Optional[Poly1] = None
    obstruction: tuple[tuple[int, int, Rat], ...] = ()

    @property
    def separable(self) -> bool:
        return self.f is not None

    def render_obstruction(self) -> list[str]:
        return [Poly2({(i, j): c}).render(XY_NAMES) for i, j, c in self.obstruction]


def decompose(U: Poly2) -> SeparationResult:
    """Find f, g with ``U = f(q1 + q2) + g(q1 - q2)``, or certify that none exist.

    The additive constant is placed in ``f`` so that ``g(0) = 0``.
    """
    V = to_xy(U)
    mixed = V.mixed_terms()
    if mixed:
        return SeparationResult(obstruction=tuple(mixed))
    fx, gy, c0 = pure_parts(V)
    return SeparationResult(f=fx + Poly1({0: c0}), g=gy)


def companion_potential(f: Poly1, g: Poly1) -> Poly2:
    return from_xy(f, g, (1, -1))


def check_coincidence(U: Poly2, Utilde: Poly2) -> bool:
    """True iff dU/dq1 == dUt/dq2 and dU/dq2 == dUt/dq1 identically."""
    return U.partial(0) == Utilde.partial(1) and U.partial(1) == Utilde.partial(0)


@dataclass(frozen=True)
class IntegralExpr:
    """``kinetic + potential(q1, q2)`` with diagonal or cross kinetic part."""

    kinetic: Literal["diag", "cross"]
    potential: Poly2

    def __call__(self, q1, q2, v1, v2):
        if self.kinetic == "diag":
            kin = 0.5 * (v1 * v1 + v2 * v2)
        else:
            kin = v1 * v2
        return kin + self.potential(q1, q2)

    def render(self) -> str:
        kin = "1/2*v1^2 + 1/2*v2^2" if self.kinetic == "diag" else "v1*v2"
        if self.potential.is_zero():
            return kin
        pot = self.potential.render()
        return f"{kin} - {pot[1:]}" if pot.startswith("-") else f"{kin} + {pot}"

    def __str__(self):
        return self.render()


def energy_integral(U: Poly2) -> IntegralExpr:
    return IntegralExpr("diag", U)


def second_integral(U: Poly2) -> IntegralExpr:
    """The conserved ``K = v1*v2 + f(q1 + q2) - g(q1 - q2)``.

    Raises :class:`NotSeparableError` carrying the obstruction when ``U`` has
    no such decomposition.
    """
    res = decompose(U)
    if not res.separable:
        raise NotSeparableError(
            "potential is not of the form f(q1+q2) + g(q1-q2); mixed terms: "
            + ", ".join(res.render_obstruction()),
            res.obstruction,
        )
    return IntegralExpr("cross", companion_potential(res.f, res.g))


def separated_forces(f: Poly1, g: Poly1) -> tuple[Poly1, Poly1]:
    """Right-hand sides ``(-2 f'(x), -2 g'(y))`` of the decoupled equations."""
    return f.derivative().scale(-2), g.derivative().scale(-2)
