"""Separable two-degree-of-freedom Lagrangian systems.

A potential ``U(q1, q2) = f(q1 + q2) + g(q1 - q2)`` gives the same equations
of motion for ``L = (v1^2 + v2^2)/2 - U`` and ``Lt = v1*v2 - Ut`` with
``Ut = f(q1 + q2) - g(q1 - q2)``, so both energies are conserved.  This
package decides that form exactly for polynomial potentials and integrates
the resulting systems numerically.
"""
from .errors import (
    DegenerateFitError,
    NotSeparableError,
    NumericalError,
    ParseError,
    SingularityError,
    ZeroDenominatorError,
)
from .ratpoly import Poly1, Poly2, Rat, from_xy, to_xy
from .parser import parse_potential, print_potential
from .separability import (
    IntegralExpr,
    SeparationResult,
    check_coincidence,
    companion_potential,
    decompose,
    energy_integral,
    second_integral,
    separated_forces,
)
from .dynamics import (
    Fn1,
    PowerLaw,
    State,
    SystemSpec,
    Trajectory,
    catalog,
    simulate,
)

__version__ = "0.1.0"
