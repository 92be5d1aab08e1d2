"""Fit |q|^2 = A t^2 + B t + C for Calogero-type runs and the SK control.

For a degree -2 homogeneous potential A should equal 2E (full system) and
4Ex, 4Ey for the two separated halves.  SK is not homogeneous; its residual
is large.
"""
import argparse
from dataclasses import dataclass

from seplag.dynamics import State, catalog, fit_quadratic_law, simulate, subsystem_energies, total_energy
from seplag.ratpoly import Rat


@dataclass
class LawConfig:
    dt: float = 1e-3
    t_end: float = 20.0
    state: tuple = (1.0, 0.3, 0.2, -0.1)


CASES = [
    ("calogero", {"af": Rat(1), "ag": Rat(1, 2)}),
    ("calogero", {"af": Rat(1, 4), "ag": Rat(1, 4)}),
    ("calogero", {"af": Rat(2), "ag": Rat(3)}),
    ("sk", {}),
]


def main():
    d = LawConfig()
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--dt", type=float, default=d.dt)
    ap.add_argument("--t-end", type=float, default=d.t_end)
    cfg = LawConfig(**vars(ap.parse_args()))
    print(f"{'system':<28} {'comp':>4} {'A':>14} {'target':>14} {'residual':>10}")
    for name, params in CASES:
        spec = catalog(name, **params)
        s0 = State(0.0, *(cfg.state if name == "calogero" else (0.1, 0.1, 0.0, 0.05)))
        tr = simulate(spec, s0, cfg.dt, cfg.t_end)
        ex, ey = subsystem_energies(spec, s0)
        targets = {"full": 2 * total_energy(spec, s0), "x": 4 * ex, "y": 4 * ey}
        for comp, target in targets.items():
            fit = fit_quadratic_law(tr, comp)
            print(f"{spec.describe():<28} {comp:>4} {fit.A:14.9f} {target:14.9f} {fit.residual:10.2e}")


if __name__ == "__main__":
    main()
