"""Drift of E and K and the q/xy frame gap as a function of dt.

    python scripts/convergence_sweep.py --t-end 100 --precision extended
"""
import argparse
from dataclasses import dataclass, fields

import numpy as np

from seplag.dynamics import State, catalog, drift_report, frame_map, simulate


@dataclass
class SweepConfig:
    system: str = "sk"
    method: str = "rk4"
    precision: str = "double"
    t_end: float = 100.0
    gap_t_end: float = 20.0
    dts: tuple = (4e-3, 2e-3, 1e-3, 5e-4)
    state: tuple = (0.1, 0.1, 0.0, 0.05)


def frame_gap(spec, s0, dt, t_end, method, precision):
    tq = simulate(spec, s0, dt, t_end, method, "q", precision)
    txy = simulate(spec, frame_map(s0, "q->xy"), dt, t_end, method, "xy", precision)
    return float(np.max(np.abs(tq.z[:, :2] - txy.in_frame("q")[:, :2])))


def sweep(cfg: SweepConfig):
    spec = catalog(cfg.system)
    s0 = State(0.0, *cfg.state)
    rows = []
    for dt in cfg.dts:
        rep = drift_report(simulate(spec, s0, dt, cfg.t_end, cfg.method, precision=cfg.precision))
        gap = frame_gap(spec, s0, dt, cfg.gap_t_end, cfg.method, cfg.precision)
        rows.append((dt, rep.max_rel_drift_e, rep.max_rel_drift_k, gap))
    return rows


def main():
    cfg = SweepConfig()
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for f in fields(SweepConfig):
        if f.name in ("dts", "state"):
            continue
        ap.add_argument("--" + f.name.replace("_", "-"), type=type(f.default), default=f.default)
    ap.add_argument("--dts", type=float, nargs="+", default=list(cfg.dts))
    args = ap.parse_args()
    cfg = SweepConfig(**{k: v for k, v in vars(args).items()})
    rows = sweep(cfg)
    print(f"{'dt':>8} {'dE':>10} {'dK':>10} {'gap':>10} {'rE':>6} {'rK':>6} {'rgap':>6}")
    prev = None
    for dt, de, dk, gap in rows:
        ratios = ("", "", "") if prev is None else tuple(
            f"{a / b:.1f}" if b else "inf" for a, b in zip(prev, (de, dk, gap))
        )
        print(f"{dt:8.1e} {de:10.2e} {dk:10.2e} {gap:10.2e} {ratios[0]:>6} {ratios[1]:>6} {ratios[2]:>6}")
        prev = (de, dk, gap)


if __name__ == "__main__":
    main()
