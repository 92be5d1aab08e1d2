"""Acceptance criteria 1-11, each at its stated tolerance.

Run ``pytest tests/test_acceptance.py`` for the per-criterion PASS/FAIL summary.
"""
import csv
import io
import random
import subprocess
import sys
from fractions import Fraction
from math import comb

import numpy as np
import pytest

from seplag.cli import main
from seplag.dynamics import (
    State,
    catalog,
    conserved_identity_check,
    drift_report,
    fit_quadratic_law,
    frame_map,
    simulate,
    subsystem_energies,
    total_energy,
)
from seplag.errors import ParseError
from seplag.parser import parse_potential, print_potential
from seplag.ratpoly import Poly1, Rat, from_xy
from seplag.separability import check_coincidence, companion_potential, decompose

from conftest import random_poly1, random_poly2

SK = catalog("sk")
SK_TEXT = "1/2*(q1^2+q2^2)+q1^2*q2+1/3*q2^3"
SK_S0 = State(0.0, 0.1, 0.1, 0.0, 0.05)


def _drift(spec, dt, t_end, method="rk4", precision="double", window=None):
    tr = simulate(spec, SK_S0, dt, t_end, method, precision=precision)
    if window is None:
        return drift_report(tr)
    return drift_report(tr, *window)


# --- 1 ---------------------------------------------------------------------------

@pytest.mark.criterion(1, "Sawada-Kotera recovery (exact)")
def test_c1_sawada_kotera_recovery():
    res = decompose(SK.U)
    assert res.f == Poly1({2: Rat(1, 4), 3: Rat(1, 6)})
    assert res.g == Poly1({2: Rat(1, 4), 3: Rat(-1, 6)})
    assert companion_potential(res.f, res.g) == parse_potential("q1*q2 + 1/3*q1^3 + q1*q2^2")


# --- 2 ---------------------------------------------------------------------------

@pytest.mark.criterion(2, "separable branch, 200 random (f, g)")
def test_c2_positive_branch():
    rng = random.Random(20260101)
    for _ in range(200):
        f = random_poly1(rng, max_degree=5)
        g = random_poly1(rng, max_degree=5, with_constant=False)
        U = from_xy(f, g)
        res = decompose(U)
        assert (res.f, res.g) == (f, g)
        assert check_coincidence(U, companion_potential(res.f, res.g))


# --- 3 ---------------------------------------------------------------------------

def _brute_force_xy(U):
    """Expand U(q1=(x+y)/2, q2=(x-y)/2) term by term with the binomial theorem."""
    out = {}
    for (i, j), c in U.terms.items():
        for a in range(i + 1):
            for b in range(j + 1):
                key = (a + b, (i - a) + (j - b))
                w = Fraction(c) * comb(i, a) * comb(j, b) * (-1) ** (j - b) / 2 ** (i + j)
                out[key] = out.get(key, Fraction(0)) + w
    return {k: v for k, v in out.items() if v != 0}


@pytest.mark.criterion(3, "Henon-Heiles obstruction, non-separable branch")
@pytest.mark.parametrize("b", [-6, -2, 0, 1, 2])
def test_c3_negative_branch(b, record_property):
    U = catalog("hh", b=b).U
    res = decompose(U)
    assert not res.separable
    got = {(i, j): c for i, j, c in res.obstruction}
    expected_mixed = {k: v for k, v in _brute_force_xy(U).items() if k[0] > 0 and k[1] > 0}
    assert got == expected_mixed
    assert got == {(2, 1): Rat(1 + b, 8), (1, 2): Rat(-(1 + b), 8)}
    record_property("detail", f"b={b}: x^2*y {got[(2, 1)]}")


@pytest.mark.criterion(3, "Henon-Heiles obstruction, non-separable branch")
def test_c3_b_minus_one_separates():
    assert decompose(catalog("hh", b=-1).U).separable


# --- 4 ---------------------------------------------------------------------------

@pytest.mark.criterion(4, "RK4 conservation of E and K")
def test_c4_drift_bound(record_property):
    rep = _drift(SK, 1e-3, 100.0)
    record_property("detail", f"dE={rep.max_rel_drift_e:.2e} dK={rep.max_rel_drift_k:.2e}")
    assert rep.max_rel_drift_e <= 1e-7
    assert rep.max_rel_drift_k <= 1e-7


@pytest.mark.slow
@pytest.mark.criterion(4, "RK4 conservation of E and K")
def test_c4_halving_factor(record_property):
    # float64 drift at dt=1e-3 sits at the roundoff floor; the truncation
    # drift is only visible with a wider mantissa
    coarse = _drift(SK, 1e-3, 100.0, precision="extended")
    fine = _drift(SK, 5e-4, 100.0, precision="extended")
    fe = coarse.max_rel_drift_e / fine.max_rel_drift_e
    fk = coarse.max_rel_drift_k / fine.max_rel_drift_k
    record_property("detail", f"halving factor E={fe:.1f} K={fk:.1f} (long double)")
    assert 8 <= fe <= 32
    assert 8 <= fk <= 32


# --- 5 ---------------------------------------------------------------------------

@pytest.mark.slow
@pytest.mark.criterion(5, "Verlet bounded energy error")
def test_c5_verlet_bounded_and_converges(record_property):
    tr = simulate(SK, SK_S0, 0.01, 1000.0, "verlet")
    early = drift_report(tr, 0.0, 100.0).max_rel_drift_e
    late = drift_report(tr, 900.0, 1000.0).max_rel_drift_e
    whole = drift_report(tr).max_rel_drift_e
    half = drift_report(simulate(SK, SK_S0, 0.005, 1000.0, "verlet")).max_rel_drift_e
    factor = whole / half
    record_property("detail", f"late/early={late / early:.3f} factor={factor:.2f}")
    assert late <= 2 * early
    assert 3 <= factor <= 6


# --- 6 ---------------------------------------------------------------------------

def _frame_gap(dt, t_end=20.0):
    tq = simulate(SK, SK_S0, dt, t_end)
    txy = simulate(SK, frame_map(SK_S0, "q->xy"), dt, t_end, frame="xy")
    return float(np.max(np.abs(tq.z[:, :2] - txy.in_frame("q")[:, :2])))


@pytest.mark.criterion(6, "q-frame vs xy-frame integration")
def test_c6_frame_gap_tolerance(record_property):
    gap = _frame_gap(1e-3)
    record_property("detail", f"gap={gap:.2e}")
    assert gap <= 1e-6


@pytest.mark.criterion(6, "q-frame vs xy-frame integration")
def test_c6_frame_gap_halving_factor(record_property):
    coarse, fine = _frame_gap(1e-3), _frame_gap(5e-4)
    factor = coarse / fine if fine > 0 else float("inf")
    record_property("detail", f"halving factor={factor:.2f}")
    assert 8 <= factor <= 32


# --- 7 ---------------------------------------------------------------------------

SEPARABLE_RUNS = [
    ("sk", {}, (0.1, 0.1, 0.0, 0.05)),
    ("harmonic", {}, (1.0, 0.0, 0.0, 0.0)),
    ("calogero", {"af": Rat(1, 4), "ag": Rat(1, 4)}, (1.0, 0.0, 0.0, 0.0)),
    ("calogero", {"af": Rat(1), "ag": Rat(1, 2)}, (1.0, 0.3, 0.2, -0.1)),
]


@pytest.mark.criterion(7, "pointwise (E+K)/2 = Ex identity")
def test_c7_identity(record_property):
    worst = 0.0
    for name, params, q in SEPARABLE_RUNS:
        spec = catalog(name, **params)
        tr = simulate(spec, State(0.0, *q), 1e-3, 20.0)
        worst = max(worst, conserved_identity_check(tr, spec))
    record_property("detail", f"max residual={worst:.1e}")
    assert worst <= 1e-9


# --- 8 ---------------------------------------------------------------------------

@pytest.mark.criterion(8, "closed-form oracles")
def test_c8_oracles(record_property):
    tr = simulate(catalog("harmonic"), State(0.0, 1.0, 0.0, 0.0, 0.0), 1e-3, 10.0)
    err_h = float(np.max(np.abs(tr.z[:, 0] - np.cos(tr.t))))
    cal = catalog("calogero", af=Rat(1, 4), ag=Rat(1, 4))
    tc = simulate(cal, State(0.0, 1.0, 1.0, 0.0, 0.0), 1e-3, 10.0, frame="xy")
    err_c = float(np.max(np.abs(tc.z[:, 0] / np.sqrt(1 + tc.t**2) - 1)))
    record_property("detail", f"harmonic={err_h:.1e} calogero rel={err_c:.1e}")
    assert err_h <= 1e-8
    assert err_c <= 1e-8


# --- 9 ---------------------------------------------------------------------------

@pytest.mark.criterion(9, "quadratic-in-time law")
def test_c9_quadratic_law(record_property):
    cal = catalog("calogero", af=1, ag=Rat(1, 2))
    s0 = State(0.0, 1.0, 0.3, 0.2, -0.1)
    tr = simulate(cal, s0, 1e-3, 20.0)
    full = fit_quadratic_law(tr, "full")
    ex, ey = subsystem_energies(cal, s0)
    fx, fy = fit_quadratic_law(tr, "x"), fit_quadratic_law(tr, "y")
    control = fit_quadratic_law(simulate(SK, SK_S0, 1e-2, 100.0), "full")
    record_property(
        "detail",
        f"A-2E0={full.A - 2 * total_energy(cal, s0):.1e} res={full.residual:.1e} "
        f"Ax-4Ex={fx.A - 4 * ex:.1e} SK res={control.residual:.1e}",
    )
    assert abs(full.A - 2 * total_energy(cal, s0)) <= 1e-6
    assert full.residual <= 1e-8
    assert abs(fx.A - 4 * ex) <= 1e-6
    assert abs(fy.A - 4 * ey) <= 1e-6
    assert control.residual > 1e-2


# --- 10 --------------------------------------------------------------------------

@pytest.mark.criterion(10, "parser round trip and error offsets")
def test_c10_round_trip():
    rng = random.Random(10)
    for _ in range(200):
        p = random_poly2(rng)
        assert parse_potential(print_potential(p)) == p


@pytest.mark.criterion(10, "parser round trip and error offsets")
@pytest.mark.parametrize("text, offset", [("q1^", 3), ("1//2", 2), ("q3", 0), ("(q1", 3), ("^2", 0)])
def test_c10_error_corpus(text, offset):
    with pytest.raises(ParseError) as info:
        parse_potential(text)
    assert info.value.position == offset


@pytest.mark.criterion(10, "parser round trip and error offsets")
def test_c10_sawada_kotera_text():
    assert parse_potential(SK_TEXT) == SK.U


# --- 11 --------------------------------------------------------------------------

@pytest.mark.criterion(11, "CLI contract")
@pytest.mark.parametrize(
    "argv, code",
    [
        (["check", "--system", "sk"], 0),
        (["simulate", "--system", "sk", "--potential", "q1"], 1),
        (["check", "--potential", "q1^"], 2),
        (["simulate", "--system", "hh:b=1", "--t-end", "0.01"], 3),
        (["simulate", "--system", "calogero:af=1,ag=1", "--t-end", "0.01"], 4),
    ],
)
def test_c11_exit_codes(argv, code):
    proc = subprocess.run([sys.executable, "-m", "seplag", *argv], capture_output=True, text=True)
    assert proc.returncode == code, proc.stderr
    if code:
        assert proc.stderr


@pytest.mark.criterion(11, "CLI contract")
@pytest.mark.parametrize(
    "frame, header",
    [("q", ["t", "q1", "q2", "v1", "v2", "E", "K"]), ("xy", ["t", "x", "y", "vx", "vy", "Ex", "Ey"])],
)
def test_c11_csv_schema_and_rows(tmp_path, frame, header):
    out = tmp_path / "run.csv"
    argv = ["simulate", "--system", "sk", "--frame", frame, "--dt", "0.01", "--t-end", "2", "--out", str(out)]
    assert main(argv) == 0
    data = out.read_bytes()
    table = list(csv.reader(io.StringIO(data.decode("utf-8"))))
    assert table[0] == header
    assert len(table) - 1 == 201
    assert all(len(r) == len(header) for r in table)
    assert b"\r" not in data and data.endswith(b"\n")


@pytest.mark.criterion(11, "CLI contract")
def test_c11_bit_identical(tmp_path):
    blobs = []
    for name in ("a.csv", "b.csv"):
        out = tmp_path / name
        argv = ["simulate", "--system", "sk", "--dt", "0.01", "--t-end", "10", "--out", str(out)]
        proc = subprocess.run([sys.executable, "-m", "seplag", *argv], capture_output=True)
        assert proc.returncode == 0
        blobs.append(out.read_bytes())
    assert blobs[0] == blobs[1]
