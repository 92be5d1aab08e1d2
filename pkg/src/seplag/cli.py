"""``seplag`` command line.

Exit codes: 0 success, 1 usage error, 2 parse error, 3 system not separable
where separability is required, 4 numerical failure.
"""
from __future__ import annotations

import argparse
import contextlib
import csv
import sys
from dataclasses import dataclass
from typing import Optional, Sequence

from .dynamics import (
    Fn1,
    PowerLaw,
    State,
    SystemSpec,
    catalog,
    drift_report,
    fit_quadratic_law,
    frame_map,
    poincare_section,
    section_initial_states,
    simulate,
    subsystem_energies,
    total_energy,
)
from .errors import NotSeparableError, NumericalError, ParseError
from .parser import parse_potential, parse_rational
from .separability import companion_potential, energy_integral, second_integral, separated_forces

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_NOT_SEPARABLE, EXIT_NUMERICAL = 0, 1, 2, 3, 4

SYSTEM_PARAMS = {"sk": (), "harmonic": (), "hh": ("b",), "calogero": ("af", "ag")}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass
class RunConfig:
    subcommand: str
    system: Optional[str] = None
    potential: Optional[str] = None
    state: tuple[float, float, float, float] = (0.1, 0.1, 0.0, 0.05)
    dt: float = 1e-3
    t_end: float = 100.0
    method: str = "rk4"
    frame: str = "q"
    precision: str = "double"
    out: str = "-"
    no_k: bool = False
    energy: Optional[float] = None
    orbits: int = 8
    component: str = "full"

    def validate(self) -> None:
        if (self.system is None) == (self.potential is None):
            raise UsageError("exactly one of --system / --potential is required")
        if self.subcommand != "check":
            if not self.dt > 0:
                raise UsageError("--dt must be positive")
            if not self.t_end >= self.dt:
                raise UsageError("--t-end must be at least --dt")
        if self.orbits < 1:
            raise UsageError("--orbits must be positive")


def parse_system(selector: str) -> SystemSpec:
    """``sk``, ``harmonic``, ``hh:b=<rat>``, ``calogero:af=<rat>,ag=<rat>``."""
    name, _, rest = selector.partition(":")
    if name not in SYSTEM_PARAMS:
        raise UsageError(f"unknown system {name!r}; choose from {', '.join(SYSTEM_PARAMS)}")
    params = {}
    for item in filter(None, rest.split(",")):
        key, eq, value = item.partition("=")
        if not eq or key not in SYSTEM_PARAMS[name]:
            raise UsageError(f"bad parameter {item!r} for system {name!r}")
        params[key] = parse_rational(value)
    try:
        return catalog(name, **params)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def load_spec(cfg: RunConfig) -> SystemSpec:
    if cfg.system is not None:
        return parse_system(cfg.system)
    return SystemSpec.from_potential(parse_potential(cfg.potential), "potential")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    sel = common.add_argument_group("system selection (exactly one)")
    sel.add_argument("--system", help="sk | harmonic | hh:b=<rat> | calogero:af=<rat>,ag=<rat> (default: none)")
    sel.add_argument("--potential", help='polynomial U(q1,q2), e.g. "1/2*(q1^2+q2^2)+q1^2*q2" (default: none)')

    run = argparse.ArgumentParser(add_help=False)
    g = run.add_argument_group("integration")
    g.add_argument("--q1", type=float, default=0.1, help="initial q1 (default: %(default)s)")
    g.add_argument("--q2", type=float, default=0.1, help="initial q2 (default: %(default)s)")
    g.add_argument("--v1", type=float, default=0.0, help="initial q1 velocity (default: %(default)s)")
    g.add_argument("--v2", type=float, default=0.05, help="initial q2 velocity (default: %(default)s)")
    g.add_argument("--dt", type=float, default=1e-3, help="step size (default: %(default)s)")
    g.add_argument("--t-end", type=float, default=100.0, help="final time (default: %(default)s)")
    g.add_argument("--method", choices=("rk4", "verlet"), default="rk4", help="integrator (default: %(default)s)")
    g.add_argument(
        "--frame",
        choices=("q", "xy"),
        default="q",
        help="integration frame; the initial state is always given in q1,q2,v1,v2 (default: %(default)s)",
    )
    g.add_argument(
        "--precision",
        choices=("double", "extended"),
        default="double",
        help="float64 or long double state (default: %(default)s)",
    )
    g.add_argument("--out", default="-", help="output path, '-' for stdout (default: %(default)s)")

    parser = _Parser(prog="seplag", description="Separable two-degree-of-freedom Lagrangian systems.")
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)
    sub.add_parser("check", parents=[common], help="decide separability, print f, g, Ut, K")
    p = sub.add_parser("simulate", parents=[common, run], help="integrate and write a CSV trajectory")
    p.add_argument("--no-k", action="store_true", help="omit the K column (default: %(default)s)")
    p = sub.add_parser("drift", parents=[common, run], help="report max relative drift of E and K")
    p.add_argument("--no-k", action="store_true", help="report E only (default: %(default)s)")
    p = sub.add_parser("section", parents=[common, run], help="Poincare section q1=0, v1>0 as q2,v2 CSV")
    p.add_argument(
        "--energy",
        type=float,
        default=None,
        help="launch --orbits orbits at this energy instead of the single initial state (default: %(default)s)",
    )
    p.add_argument("--orbits", type=int, default=8, help="orbit count with --energy (default: %(default)s)")
    p = sub.add_parser("fitlaw", parents=[common, run], help="fit |q|^2 ~ A t^2 + B t + C")
    p.add_argument("--component", choices=("full", "x", "y"), default="full", help="squared norm to fit (default: %(default)s)")
    return parser


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(ns.subcommand, ns.system, ns.potential)
    if ns.subcommand != "check":
        cfg.state = (ns.q1, ns.q2, ns.v1, ns.v2)
        cfg.dt, cfg.t_end, cfg.method, cfg.frame = ns.dt, ns.t_end, ns.method, ns.frame
        cfg.precision, cfg.out = ns.precision, ns.out
        cfg.no_k = getattr(ns, "no_k", False)
        cfg.energy = getattr(ns, "energy", None)
        cfg.orbits = getattr(ns, "orbits", 8)
        cfg.component = getattr(ns, "component", "full")
    return cfg


def _fmt(v) -> str:
    return f"{float(v):.17g}"


@contextlib.contextmanager
def _output(path: str):
    if path == "-":
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            yield fh


def _initial_state(cfg: RunConfig) -> State:
    s = State(0.0, *cfg.state)
    return frame_map(s, "q->xy") if cfg.frame == "xy" else s


def _run(cfg: RunConfig, spec: SystemSpec):
    return simulate(spec, _initial_state(cfg), cfg.dt, cfg.t_end, cfg.method, cfg.frame, cfg.precision)


def cmd_check(cfg: RunConfig, spec: SystemSpec, out) -> int:
    print(f"system: {spec.describe()}", file=out)
    if spec.U is not None:
        print(f"U = {spec.U.render()}", file=out)
    if not spec.separable:
        print("separable: no", file=out)
        obstruction = ", ".join(spec.separation.render_obstruction())
        print(f"obstruction (mixed terms of U in x=q1+q2, y=q1-q2): {obstruction}", file=out)
        return EXIT_NOT_SEPARABLE
    print("separable: yes", file=out)
    print(f"f = {spec.f.render('x')}", file=out)
    print(f"g = {spec.g.render('y')}", file=out)
    fp, gp = spec.f.as_poly(), spec.g.as_poly()
    if fp is not None and gp is not None:
        print(f"Ut = {companion_potential(fp, gp).render()}", file=out)
        print(f"E = {energy_integral(spec.U).render()}", file=out)
        print(f"K = {second_integral(spec.U).render()}", file=out)
        fx, gy = separated_forces(fp, gp)
        xdd, ydd = fx.render("x"), gy.render("y")
    else:
        print("Ut = f(q1+q2) - g(q1-q2)", file=out)
        print("E = 1/2*v1^2 + 1/2*v2^2 + f(q1+q2) + g(q1-q2)", file=out)
        print("K = v1*v2 + f(q1+q2) - g(q1-q2)", file=out)
        xdd = _scaled_derivative(spec.f, "x")
        ydd = _scaled_derivative(spec.g, "y")
    print(f"x'' = -2f'(x) = {xdd}", file=out)
    print(f"y'' = -2g'(y) = {ydd}", file=out)
    return EXIT_OK


def _scaled_derivative(fn, name):
    terms = []
    for term in fn.derivative().terms:
        if isinstance(term, PowerLaw):
            terms.append(PowerLaw(term.coefficient * -2, term.exponent))
        else:
            terms.append(term.scale(-2))
    return Fn1(tuple(terms)).render(name)


def cmd_simulate(cfg: RunConfig, spec: SystemSpec, out) -> int:
    if cfg.frame == "q" and not cfg.no_k:
        spec.require_separable()
    traj = _run(cfg, spec)
    cols = traj.columns
    with_k = traj.second is not None and not (cfg.frame == "q" and cfg.no_k)
    if not with_k:
        cols = cols[:-1]
    w = csv.writer(out, lineterminator="\n")
    w.writerow(cols)
    for k in range(len(traj)):
        row = [traj.t[k], *traj.z[k], traj.first[k]]
        if with_k:
            row.append(traj.second[k])
        w.writerow([_fmt(v) for v in row])
    return EXIT_OK


def cmd_drift(cfg: RunConfig, spec: SystemSpec, out) -> int:
    if not cfg.no_k:
        spec.require_separable()
    rep = drift_report(_run(cfg, spec))
    first, second = ("E", "K") if cfg.frame == "q" else ("Ex", "Ey")
    print(f"maxRelDrift{first}={_fmt(rep.max_rel_drift_e)}", file=out)
    if rep.max_rel_drift_k is not None and not cfg.no_k:
        print(f"maxRelDrift{second}={_fmt(rep.max_rel_drift_k)}", file=out)
    print(f"stepsTaken={rep.steps_taken}", file=out)
    return EXIT_OK


def cmd_section(cfg: RunConfig, spec: SystemSpec, out) -> int:
    if cfg.energy is not None:
        try:
            states = section_initial_states(spec, cfg.energy, cfg.orbits)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
    else:
        states = [State(0.0, *cfg.state)]
    points = poincare_section(spec, states, cfg.dt, cfg.t_end, cfg.method)
    w = csv.writer(out, lineterminator="\n")
    w.writerow(("q2", "v2"))
    for q2, v2 in points:
        w.writerow((_fmt(q2), _fmt(v2)))
    return EXIT_OK


def cmd_fitlaw(cfg: RunConfig, spec: SystemSpec, out) -> int:
    traj = _run(cfg, spec)
    fit = fit_quadratic_law(traj, cfg.component)
    print(f"A={_fmt(fit.A)}", file=out)
    print(f"B={_fmt(fit.B)}", file=out)
    print(f"C={_fmt(fit.C)}", file=out)
    print(f"residual={_fmt(fit.residual)}", file=out)
    s0 = traj[0]
    if cfg.component == "full":
        print(f"2*E0={_fmt(2 * total_energy(spec, s0, traj.frame))}", file=out)
    elif spec.separable:
        ex, ey = subsystem_energies(spec, s0, traj.frame)
        print(f"4*E{cfg.component}={_fmt(4 * (ex if cfg.component == 'x' else ey))}", file=out)
    return EXIT_OK


COMMANDS = {
    "check": cmd_check,
    "simulate": cmd_simulate,
    "drift": cmd_drift,
    "section": cmd_section,
    "fitlaw": cmd_fitlaw,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    ns = build_parser().parse_args(argv)
    cfg = config_from_args(ns)
    try:
        cfg.validate()
        spec = load_spec(cfg)
        if cfg.subcommand == "check":
            return cmd_check(cfg, spec, sys.stdout)
        with _output(cfg.out) as out:
            return COMMANDS[cfg.subcommand](cfg, spec, out)
    except UsageError as exc:
        print(f"seplag: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as exc:
        print(f"seplag: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except OverflowError as exc:
        print(f"seplag: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except NotSeparableError as exc:
        print(f"seplag: not separable: {exc}", file=sys.stderr)
        return EXIT_NOT_SEPARABLE
    except NumericalError as exc:
        print(f"seplag: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
