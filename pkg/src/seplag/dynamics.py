"""Fixed-step integration of q'' = -grad U in the original and diagonal frames.

The state of a two-degree-of-freedom system is ``(t, a, b, va, vb)`` where
``(a, b)`` is ``(q1, q2)`` in the ``"q"`` frame and ``(x, y)`` in the ``"xy"``
frame, ``x = q1 + q2`` and ``y = q1 - q2``.  In the ``xy`` frame a separable
system obeys the decoupled equations ``x'' = -2 f'(x)``, ``y'' = -2 g'(y)``
with subsystem energies ``Ex = vx^2/4 + f(x)`` and ``Ey = vy^2/4 + g(y)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterator, Literal, Mapping, Optional, Sequence, Union

import numpy as np

from .errors import DegenerateFitError, NotSeparableError, NumericalError, SingularityError
from .parser import parse_potential
from .ratpoly import Poly1, Poly2, Rat, as_rat, from_xy, join_terms
from .separability import IntegralExpr, SeparationResult, companion_potential, decompose, energy_integral

EPS_SING = 1e-8

Frame = Literal["q", "xy"]
Method = Literal["rk4", "verlet"]


@dataclass(frozen=True)
class PowerLaw:
    """``coefficient * t**exponent``; the exponent may be negative."""

    coefficient: Rat
    exponent: int

    def __call__(self, t):
        c = self.coefficient.num / self.coefficient.den
        if self.exponent < 0:
            if np.any(np.abs(t) < EPS_SING):
                raise SingularityError(
                    f"term with exponent {self.exponent} evaluated within {EPS_SING:g} of its pole"
                )
            return c / t ** (-self.exponent)
        return c * t**self.exponent

    def derivative(self) -> Optional[PowerLaw]:
        if self.exponent == 0:
            return None
        return PowerLaw(self.coefficient * self.exponent, self.exponent - 1)


Term = Union[Poly1, PowerLaw]


@dataclass(frozen=True)
class Fn1:
    """Sum of polynomial and power-law terms in one variable."""

    terms: tuple[Term, ...] = ()

    @classmethod
    def poly(cls, p: Poly1) -> Fn1:
        return cls(() if p.is_zero() else (p,))

    @classmethod
    def power(cls, coefficient, exponent: int) -> Fn1:
        c = as_rat(coefficient)
        return cls(() if c == 0 else (PowerLaw(c, exponent),))

    def __call__(self, t):
        total = 0.0
        for term in self.terms:
            total = total + term(t)
        return total

    def derivative(self) -> Fn1:
        out = []
        for term in self.terms:
            d = term.derivative()
            if isinstance(d, Poly1) and d.is_zero():
                continue
            if d is not None:
                out.append(d)
        return Fn1(tuple(out))

    def as_poly(self) -> Optional[Poly1]:
        """The same function as a ``Poly1`` if no term has a negative exponent."""
        out = Poly1()
        for term in self.terms:
            if isinstance(term, Poly1):
                out = out + term
            elif term.exponent >= 0:
                out = out + Poly1({term.exponent: term.coefficient})
            else:
                return None
        return out

    def render(self, name: str = "x") -> str:
        p = self.as_poly()
        if p is not None:
            return p.render(name)
        parts = []
        for term in self.terms:
            if isinstance(term, Poly1):
                parts.extend((c, f"{name}^{e}" if e > 1 else name if e else "") for e, c in term.items())
            else:
                parts.append((term.coefficient, f"{name}^{term.exponent}"))
        return join_terms(parts)


@dataclass(frozen=True)
class SystemSpec:
    """A potential ``U(q1, q2)``, an ``(f, g)`` pair, or both.

    Build with :meth:`from_potential` (polynomial ``U``, decomposed when
    possible) or :meth:`separated` (any ``f``, ``g``, including power laws).
    """

    name: str
    U: Optional[Poly2] = None
    f: Optional[Fn1] = None
    g: Optional[Fn1] = None
    params: Mapping[str, Rat] = field(default_factory=dict)
    separation: Optional[SeparationResult] = None

    @classmethod
    def from_potential(cls, U: Poly2, name: str = "custom", **params) -> SystemSpec:
        res = decompose(U)
        f = g = None
        if res.separable:
            f, g = Fn1.poly(res.f), Fn1.poly(res.g)
        return cls(name, U, f, g, {k: as_rat(v) for k, v in params.items()}, res)

    @classmethod
    def separated(cls, f: Fn1, g: Fn1, name: str = "custom", **params) -> SystemSpec:
        fp, gp = f.as_poly(), g.as_poly()
        U = from_xy(fp, gp) if fp is not None and gp is not None else None
        return cls(name, U, f, g, {k: as_rat(v) for k, v in params.items()})

    @property
    def form(self) -> Frame:
        return "q" if self.U is not None and self.separation is not None else "xy"

    @property
    def separable(self) -> bool:
        return self.f is not None

    def require_separable(self) -> None:
        if not self.separable:
            obstruction = self.separation.obstruction if self.separation else ()
            raise NotSeparableError(f"system {self.name!r} is not separable", obstruction)

    def energy_expr(self) -> Optional[IntegralExpr]:
        return energy_integral(self.U) if self.U is not None else None

    def second_expr(self) -> Optional[IntegralExpr]:
        """``K = v1*v2 + Ut`` as an exact expression (polynomial systems only)."""
        if not self.separable or self.U is None:
            return None
        fp, gp = self.f.as_poly(), self.g.as_poly()
        return IntegralExpr("cross", companion_potential(fp, gp))

    def potential(self, q1, q2):
        if self.U is not None:
            return self.U(q1, q2)
        return self.f(q1 + q2) + self.g(q1 - q2)

    def describe(self) -> str:
        if not self.params:
            return self.name
        return self.name + ":" + ",".join(f"{k}={v}" for k, v in self.params.items())


def hh_potential(b) -> Poly2:
    b = as_rat(b)
    q1, q2 = Poly2.var(0), Poly2.var(1)
    half = Rat(1, 2)
    return (q1 * q1 + q2 * q2).scale(half) + q1 * q1 * q2 - (q2 * q2 * q2).scale(b / 3)


def catalog(name: str, **params) -> SystemSpec:
    """Named systems: ``sk``, ``hh`` (param ``b``), ``calogero`` (``af``, ``ag``), ``harmonic``."""
    if name == "sk":
        return SystemSpec.from_potential(parse_potential("1/2*(q1^2+q2^2)+q1^2*q2+1/3*q2^3"), "sk")
    if name == "hh":
        b = as_rat(params.get("b", 1))
        return SystemSpec.from_potential(hh_potential(b), "hh", b=b)
    if name == "calogero":
        af, ag = as_rat(params.get("af", 1)), as_rat(params.get("ag", 1))
        if af <= 0 or ag <= 0:
            raise ValueError("calogero needs af > 0 and ag > 0")
        return SystemSpec.separated(Fn1.power(af, -2), Fn1.power(ag, -2), "calogero", af=af, ag=ag)
    if name == "harmonic":
        return SystemSpec.from_potential(parse_potential("1/2*(q1^2+q2^2)"), "harmonic")
    raise KeyError(f"unknown system {name!r}")


# --- forces ---------------------------------------------------------------

PRECISIONS = {"double": float, "extended": np.longdouble}


def _coef(c: Rat, dtype):
    return dtype(c.num) / dtype(c.den)


def compile_poly2(p: Poly2, dtype=float) -> Callable:
    terms = tuple((_coef(c, dtype), i, j) for (i, j), c in p.terms.items())
    zero = dtype(0)

    def fn(a, b):
        s = zero
        for c, i, j in terms:
            s = s + c * a**i * b**j
        return s

    return fn


def compile_fn1(fn: Fn1, dtype=float) -> Callable:
    """Evaluator with coefficients rounded once to ``dtype``."""
    poly, neg = {}, []
    for term in fn.terms:
        if isinstance(term, Poly1):
            for e, c in term.terms.items():
                poly[e] = poly.get(e, 0) + c
        elif term.exponent >= 0:
            poly[term.exponent] = poly.get(term.exponent, 0) + term.coefficient
        else:
            neg.append((_coef(term.coefficient, dtype), -term.exponent))
    pos = tuple((_coef(as_rat(c), dtype), e) for e, c in poly.items() if c != 0)
    zero = dtype(0)

    def evaluate(t):
        s = zero
        for c, e in pos:
            s = s + c * t**e
        if neg:
            if np.any(np.abs(t) < EPS_SING):
                raise SingularityError(f"negative-power term evaluated within {EPS_SING:g} of its pole")
            for c, e in neg:
                s = s + c / t**e
        return s

    return evaluate


def force_function(spec: SystemSpec, frame: Frame, dtype=float) -> Callable[[float, float], tuple[float, float]]:
    """Scalar acceleration ``(a, b) -> (a'', b'')`` for the given frame."""
    if frame == "xy":
        spec.require_separable()
        fd, gd = compile_fn1(spec.f.derivative(), dtype), compile_fn1(spec.g.derivative(), dtype)
        two = dtype(2)

        def acc_xy(x, y):
            return -two * fd(x), -two * gd(y)

        return acc_xy
    if frame != "q":
        raise ValueError(f"unknown frame {frame!r}")
    if spec.U is not None:
        d1, d2 = compile_poly2(spec.U.partial(0), dtype), compile_poly2(spec.U.partial(1), dtype)

        def acc_q(q1, q2):
            return -d1(q1, q2), -d2(q1, q2)

        return acc_q
    fd, gd = compile_fn1(spec.f.derivative(), dtype), compile_fn1(spec.g.derivative(), dtype)

    # U = f(q1 + q2) + g(q1 - q2), chain rule
    def acc_q_chain(q1, q2):
        fp, gp = fd(q1 + q2), gd(q1 - q2)
        return -(fp + gp), -(fp - gp)

    return acc_q_chain


def _finite_pair(pair, where):
    if not (math.isfinite(pair[0]) and math.isfinite(pair[1])):
        raise NumericalError(f"non-finite acceleration at {where}")
    return pair


def accel_q(spec: SystemSpec, q1: float, q2: float) -> tuple[float, float]:
    return _finite_pair(force_function(spec, "q")(q1, q2), (q1, q2))


def accel_xy(spec: SystemSpec, x: float, y: float) -> tuple[float, float]:
    return _finite_pair(force_function(spec, "xy")(x, y), (x, y))


# --- states and stepping --------------------------------------------------

@dataclass(frozen=True)
class State:
    """Phase-space point; in the xy frame the slots hold x, y, vx, vy."""


    t: float
    q1: float
    q2: float
    v1: float
    v2: float

    def __post_init__(self):
        if not all(math.isfinite(v) for v in self.as_tuple()):
            raise NumericalError(f"non-finite state {self}")

    def as_tuple(self) -> tuple[float, float, float, float, float]:
        return (self.t, self.q1, self.q2, self.v1, self.v2)


def _rk4(acc, a, b, va, vb, h):
    h2 = 0.5 * h
    ax1, ay1 = acc(a, b)
    ax2, ay2 = acc(a + h2 * va, b + h2 * vb)
    va2, vb2 = va + h2 * ax1, vb + h2 * ay1
    ax3, ay3 = acc(a + h2 * va2, b + h2 * vb2)
    va3, vb3 = va + h2 * ax2, vb + h2 * ay2
    ax4, ay4 = acc(a + h * va3, b + h * vb3)
    va4, vb4 = va + h * ax3, vb + h * ay3
    h6 = h / 6.0
    return (
        a + h6 * (va + 2.0 * va2 + 2.0 * va3 + va4),
        b + h6 * (vb + 2.0 * vb2 + 2.0 * vb3 + vb4),
        va + h6 * (ax1 + 2.0 * ax2 + 2.0 * ax3 + ax4),
        vb + h6 * (ay1 + 2.0 * ay2 + 2.0 * ay3 + ay4),
    )


def _verlet(acc, a, b, va, vb, h, force=None):
    ax, ay = force if force is not None else acc(a, b)
    vah, vbh = va + 0.5 * h * ax, vb + 0.5 * h * ay
    a, b = a + h * vah, b + h * vbh
    ax, ay = acc(a, b)
    return a, b, vah + 0.5 * h * ax, vbh + 0.5 * h * ay, (ax, ay)


def _check_dt(dt):
    if not (dt > 0 and math.isfinite(dt)):
        raise ValueError(f"step size must be positive and finite, got {dt}")


def step_rk4(spec: SystemSpec, s: State, dt: float, frame: Frame = "q") -> State:
    """One classical fourth-order Runge-Kutta step."""
    _check_dt(dt)
    acc = force_function(spec, frame)
    return State(s.t + dt, *_rk4(acc, s.q1, s.q2, s.v1, s.v2, dt))


def step_verlet(spec: SystemSpec, s: State, dt: float, frame: Frame = "q") -> State:
    """One kick-drift-kick leapfrog step."""
    _check_dt(dt)
    acc = force_function(spec, frame)
    return State(s.t + dt, *_verlet(acc, s.q1, s.q2, s.v1, s.v2, dt)[:4])


def frame_map(s: State, direction: Literal["q->xy", "xy->q"]) -> State:
    if direction == "q->xy":
        return State(s.t, s.q1 + s.q2, s.q1 - s.q2, s.v1 + s.v2, s.v1 - s.v2)
    if direction == "xy->q":
        return State(s.t, 0.5 * (s.q1 + s.q2), 0.5 * (s.q1 - s.q2), 0.5 * (s.v1 + s.v2), 0.5 * (s.v1 - s.v2))
    raise ValueError(f"unknown direction {direction!r}")


def _frame_map_array(z: np.ndarray, direction: str) -> np.ndarray:
    """Vectorised :func:`frame_map` on an ``(n, 4)`` array of (a, b, va, vb)."""
    a, b, va, vb = z.T
    if direction == "q->xy":
        return np.column_stack([a + b, a - b, va + vb, va - vb])
    return np.column_stack([0.5 * (a + b), 0.5 * (a - b), 0.5 * (va + vb), 0.5 * (va - vb)])


# --- trajectories ---------------------------------------------------------

@dataclass(frozen=True)
class Trajectory:
    """Uniformly sampled run plus its two conserved-quantity columns.

    ``frame == "q"``: columns are E and K (K absent for non-separable systems).
    ``frame == "xy"``: columns are Ex and Ey.
    """

    frame: Frame
    dt: float
    t: np.ndarray
    z: np.ndarray  # (n, 4): a, b, va, vb
    first: np.ndarray
    second: Optional[np.ndarray]
    system: str = ""

    @property
    def integral_names(self) -> tuple[str, str]:
        return ("E", "K") if self.frame == "q" else ("Ex", "Ey")

    @property
    def columns(self) -> tuple[str, ...]:
        pos = ("q1", "q2", "v1", "v2") if self.frame == "q" else ("x", "y", "vx", "vy")
        return ("t",) + pos + self.integral_names

    def __len__(self) -> int:
        return len(self.t)

    def __getitem__(self, k: int) -> State:
        return State(float(self.t[k]), *map(float, self.z[k]))

    def __iter__(self) -> Iterator[State]:
        return (self[k] for k in range(len(self)))

    @property
    def samples(self) -> list[State]:
        return list(self)

    @property
    def e_series(self) -> np.ndarray:
        return self.first

    @property
    def k_series(self) -> np.ndarray:
        if self.second is None:
            raise NotSeparableError(f"K is undefined: system {self.system!r} is not separable")
        return self.second

    def in_frame(self, frame: Frame) -> np.ndarray:
        """Positions and velocities as an ``(n, 4)`` array in ``frame``."""
        if frame == self.frame:
            return self.z
        return _frame_map_array(self.z, "q->xy" if frame == "xy" else "xy->q")


def _integral_columns(spec: SystemSpec, frame: Frame, z: np.ndarray):
    dtype = z.dtype.type
    a, b, va, vb = z.T
    if frame == "xy":
        f, g = compile_fn1(spec.f, dtype), compile_fn1(spec.g, dtype)
        return va * va / 4 + f(a), vb * vb / 4 + g(b)
    if spec.U is not None:
        U = compile_poly2(spec.U, dtype)
        first = (va * va + vb * vb) / 2 + U(a, b)
    else:
        first = (va * va + vb * vb) / 2 + compile_fn1(spec.f, dtype)(a + b) + compile_fn1(spec.g, dtype)(a - b)
    if not spec.separable:
        return first, None
    K = spec.second_expr()
    if K is not None:
        second = va * vb + compile_poly2(K.potential, dtype)(a, b)
    else:
        second = va * vb + compile_fn1(spec.f, dtype)(a + b) - compile_fn1(spec.g, dtype)(a - b)
    return first, second


def n_steps(dt: float, t_end: float) -> int:
    _check_dt(dt)
    if not (t_end > 0 and math.isfinite(t_end)):
        raise ValueError(f"end time must be positive and finite, got {t_end}")
    n = int(round(t_end / dt))
    if n < 1:
        raise ValueError(f"end time {t_end} is shorter than one step {dt}")
    return n


def simulate(
    spec: SystemSpec,
    s0: State,
    dt: float,
    t_end: float,
    method: Method = "rk4",
    frame: Frame = "q",
    precision: Literal["double", "extended"] = "double",
) -> Trajectory:
    """Integrate from ``s0`` (given in ``frame``) over ``round(t_end/dt)`` steps.

    Sample ``k`` sits at ``s0.t + k*dt``.  ``precision="extended"`` carries
    the state and all coefficients in ``numpy.longdouble``; use it when the
    truncation error being measured is below double-precision roundoff.

    Raises :class:`NotSeparableError` for ``frame="xy"`` on a non-separable
    system and :class:`SingularityError` or :class:`NumericalError` if the
    orbit runs into trouble.
    """
    n = n_steps(dt, t_end)
    dtype = PRECISIONS[precision]
    acc = force_function(spec, frame, dtype)
    z = np.empty((n + 1, 4), dtype=dtype)
    a, b, va, vb = (dtype(w) for w in (s0.q1, s0.q2, s0.v1, s0.v2))
    z[0] = (a, b, va, vb)
    dt = dtype(dt)
    if method == "rk4":
        for k in range(1, n + 1):
            a, b, va, vb = _rk4(acc, a, b, va, vb, dt)
            z[k] = (a, b, va, vb)
    elif method == "verlet":
        force = None
        for k in range(1, n + 1):
            a, b, va, vb, force = _verlet(acc, a, b, va, vb, dt, force)
            z[k] = (a, b, va, vb)
    else:
        raise ValueError(f"unknown method {method!r}")
    if not np.all(np.isfinite(z)):
        bad = int(np.argmax(~np.all(np.isfinite(z), axis=1)))
        raise NumericalError(f"state became non-finite at step {bad} (t={s0.t + bad * dt:g})")
    t = s0.t + float(dt) * np.arange(n + 1)
    first, second = _integral_columns(spec, frame, z)
    return Trajectory(frame, float(dt), t, z, first, second, spec.describe())


# --- diagnostics ----------------------------------------------------------

@dataclass(frozen=True)
class DriftReport:
    max_rel_drift_e: float
    max_rel_drift_k: Optional[float]
    steps_taken: int


def max_rel_drift(series: np.ndarray, mask: Optional[np.ndarray] = None) -> float:
    """``max |s_k - s_0| / max(|s_0|, 1e-12)``, optionally over a subset of samples."""
    ref = series[0]
    dev = np.abs(series - ref)
    if mask is not None:
        dev = dev[mask]
    return float(dev.max()) / max(abs(float(ref)), 1e-12)


def drift_report(traj: Trajectory, t_min: float = -math.inf, t_max: float = math.inf) -> DriftReport:
    mask = (traj.t >= t_min) & (traj.t <= t_max)
    k = max_rel_drift(traj.second, mask) if traj.second is not None else None
    return DriftReport(max_rel_drift(traj.first, mask), k, len(traj) - 1)


def identity_residual(spec: SystemSpec, q1, q2, v1, v2, E=None, K=None):
    """``|(E+K)/2 - Ex| + |(E-K)/2 - Ey|`` at q-frame point(s).

    ``E`` and ``K`` default to evaluating the system's integrals at the point.
    """
    spec.require_separable()
    x, y, vx, vy = q1 + q2, q1 - q2, v1 + v2, v1 - v2
    if E is None or K is None:
        E, K = _integral_columns(spec, "q", np.column_stack([np.atleast_1d(w) for w in (q1, q2, v1, v2)]))
    ex = 0.25 * vx * vx + spec.f(x)
    ey = 0.25 * vy * vy + spec.g(y)
    return np.abs(0.5 * (E + K) - ex) + np.abs(0.5 * (E - K) - ey)


def conserved_identity_check(traj: Trajectory, spec: SystemSpec) -> float:
    """Largest violation of E + K = 2 Ex and E - K = 2 Ey along a q-frame run."""
    if traj.frame != "q":
        raise ValueError("identity check needs a q-frame trajectory")
    q1, q2, v1, v2 = traj.z.T
    return float(np.max(identity_residual(spec, q1, q2, v1, v2, traj.first, traj.k_series)))


# --- Poincare sections ----------------------------------------------------

@dataclass(frozen=True)
class SectionCrossing:
    """Upward crossing of q1 = 0, linearly interpolated inside step ``index``."""

    t: float
    q2: float
    v2: float
    v1: float
    index: int


def section_crossings(traj: Trajectory) -> list[SectionCrossing]:
    z = traj.in_frame("q")
    q1 = z[:, 0]
    hits = np.nonzero((q1[:-1] < 0.0) & (q1[1:] >= 0.0))[0]
    out = []
    for k in hits:
        s = -q1[k] / (q1[k + 1] - q1[k])
        lerp = (1.0 - s) * z[k] + s * z[k + 1]
        if lerp[2] > 0.0:
            t = (1.0 - s) * traj.t[k] + s * traj.t[k + 1]
            out.append(SectionCrossing(float(t), float(lerp[1]), float(lerp[3]), float(lerp[2]), int(k)))
    return out


def section_initial_states(spec: SystemSpec, energy: float, orbits: int, span: float = 2.0) -> list[State]:
    """Orbits launched from q1 = 0, v2 = 0 with v1 > 0 fixed by ``energy``.

    Start points are spread over the energetically allowed q2 interval that
    contains the origin.
    """
    grid = np.linspace(-span, span, 40001)
    allowed = spec.potential(np.zeros_like(grid), grid) < energy
    mid = len(grid) // 2
    if not allowed[mid]:
        raise ValueError(f"energy {energy} is below U at the origin")
    lo = mid
    while lo > 0 and allowed[lo - 1]:
        lo -= 1
    hi = mid
    while hi < len(grid) - 1 and allowed[hi + 1]:
        hi += 1
    q2s = np.linspace(grid[lo], grid[hi], orbits + 2)[1:-1]
    states = []
    for q2 in q2s:
        v1 = math.sqrt(2.0 * (energy - float(spec.potential(0.0, q2))))
        states.append(State(0.0, 0.0, float(q2), v1, 0.0))
    return states


def poincare_section(
    spec: SystemSpec,
    initial_states: Sequence[State],
    dt: float = 1e-2,
    t_end: float = 200.0,
    method: Method = "rk4",
) -> list[tuple[float, float]]:
    """``(q2, v2)`` at every q1 = 0, v1 > 0 crossing of each orbit."""
    points = []
    for s0 in initial_states:
        traj = simulate(spec, s0, dt, t_end, method, "q")
        points.extend((c.q2, c.v2) for c in section_crossings(traj))
    return points


# --- quadratic law for degree -2 homogeneous potentials -------------------

@dataclass(frozen=True)
class QuadraticLawFit:
    """Least-squares ``|.|^2(t) ~ A t^2 + B t + C``."""

    A: float
    B: float
    C: float
    residual: float


def squared_norm(traj: Trajectory, component: Literal["full", "x", "y"] = "full") -> np.ndarray:
    if component == "full":
        q1, q2 = traj.in_frame("q")[:, :2].T
        return q1 * q1 + q2 * q2
    xy = traj.in_frame("xy")
    if component == "x":
        return xy[:, 0] ** 2
    if component == "y":
        return xy[:, 1] ** 2
    raise ValueError(f"unknown component {component!r}")


def fit_quadratic_law(traj: Trajectory, component: Literal["full", "x", "y"] = "full") -> QuadraticLawFit:
    """Fit ``A t^2 + B t + C`` to the squared norm by the normal equations.

    Time is rescaled to ``[-1, 1]``-ish before solving to keep the 3x3 system
    well conditioned; coefficients are reported in the original time unit.
    """
    if len(traj) < 3:
        raise DegenerateFitError("need at least 3 samples")
    data = squared_norm(traj, component)
    scale = float(np.max(np.abs(traj.t))) or 1.0
    tau = traj.t / scale
    M = np.column_stack([tau * tau, tau, np.ones_like(tau)])
    normal = M.T @ M
    if np.linalg.cond(normal) > 1e12:
        raise DegenerateFitError("normal equations are singular")
    try:
        a, b, c = np.linalg.solve(normal, M.T @ data)
    except np.linalg.LinAlgError as exc:
        raise DegenerateFitError(str(exc)) from exc
    fitted = M @ np.array([a, b, c])
    residual = float(np.max(np.abs(fitted - data) / np.maximum(np.abs(data), 1e-300)))
    return QuadraticLawFit(float(a / scale**2), float(b / scale), float(c), residual)


def subsystem_energies(spec: SystemSpec, s: State, frame: Frame = "q") -> tuple[float, float]:
    """``(Ex, Ey)`` at a single state."""
    spec.require_separable()
    if frame == "q":
        s = frame_map(s, "q->xy")
    return float(0.25 * s.v1 * s.v1 + spec.f(s.q1)), float(0.25 * s.v2 * s.v2 + spec.g(s.q2))


def total_energy(spec: SystemSpec, s: State, frame: Frame = "q") -> float:
    if frame == "xy":
        s = frame_map(s, "xy->q")
    return float(0.5 * (s.v1 * s.v1 + s.v2 * s.v2) + spec.potential(s.q1, s.q2))
