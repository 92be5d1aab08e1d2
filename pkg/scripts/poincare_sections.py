"""Poincare sections (q1 = 0, v1 > 0) of the Henon-Heiles family.

Writes one CSV per b value with columns b,orbit,q2,v2.  The separable member
b = -1 gives closed curves; b = 1 at the same energy shows scattered points.

    python scripts/poincare_sections.py --energy 0.125 --out-dir sections
"""
import argparse
import csv
from dataclasses import dataclass
from pathlib import Path

from seplag.dynamics import catalog, poincare_section, section_initial_states
from seplag.parser import parse_rational


@dataclass
class SectionConfig:
    bs: tuple = ("-1", "1")
    energy: float = 0.125
    orbits: int = 8
    dt: float = 1e-2
    t_end: float = 500.0
    method: str = "rk4"
    out_dir: Path = Path("sections")


def run(cfg: SectionConfig):
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    for b in cfg.bs:
        spec = catalog("hh", b=parse_rational(b))
        states = section_initial_states(spec, cfg.energy, cfg.orbits)
        path = cfg.out_dir / f"hh_b{b}.csv"
        total = 0
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(("b", "orbit", "q2", "v2"))
            for k, s0 in enumerate(states):
                pts = poincare_section(spec, [s0], cfg.dt, cfg.t_end, cfg.method)
                total += len(pts)
                w.writerows((b, k, f"{q2:.17g}", f"{v2:.17g}") for q2, v2 in pts)
        print(f"b={b}: {total} crossings -> {path}")


def main():
    d = SectionConfig()
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--bs", nargs="+", default=list(d.bs))
    ap.add_argument("--energy", type=float, default=d.energy)
    ap.add_argument("--orbits", type=int, default=d.orbits)
    ap.add_argument("--dt", type=float, default=d.dt)
    ap.add_argument("--t-end", type=float, default=d.t_end)
    ap.add_argument("--method", choices=("rk4", "verlet"), default=d.method)
    ap.add_argument("--out-dir", type=Path, default=d.out_dir)
    run(SectionConfig(**vars(ap.parse_args())))


if __name__ == "__main__":
    main()
