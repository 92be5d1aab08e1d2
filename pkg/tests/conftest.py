import random
from fractions import Fraction

import pytest
from hypothesis import strategies as st

from seplag.ratpoly import Poly1, Poly2, Rat

rats = st.builds(
    lambda n, d: Rat(n, d),
    st.integers(min_value=-20, max_value=20),
    st.integers(min_value=1, max_value=20),
)
nonzero_rats = rats.filter(lambda r: r != 0)


def poly2s(max_degree=5, max_terms=8):
    keys = st.tuples(st.integers(0, max_degree), st.integers(0, max_degree)).filter(
        lambda k: k[0] + k[1] <= max_degree
    )
    return st.dictionaries(keys, rats, max_size=max_terms).map(Poly2)


def poly1s(max_degree=5, with_constant=True):
    exps = st.integers(0 if with_constant else 1, max_degree)
    return st.dictionaries(exps, rats, max_size=max_degree + 1).map(Poly1)


def random_rat(rng: random.Random) -> Rat:
    return Rat(rng.randint(-20, 20), rng.randint(1, 20))


def random_poly1(rng: random.Random, max_degree=5, with_constant=True) -> Poly1:
    lo = 0 if with_constant else 1
    return Poly1({e: random_rat(rng) for e in range(lo, max_degree + 1) if rng.random() < 0.7})


def random_poly2(rng: random.Random, max_degree=5) -> Poly2:
    terms = {}
    for _ in range(rng.randint(0, 8)):
        i = rng.randint(0, max_degree)
        j = rng.randint(0, max_degree - i)
        terms[(i, j)] = random_rat(rng)
    return Poly2(terms)


def exact_eval(p: Poly2, a, b) -> Fraction:
    """Term-by-term exact evaluation, independent of Poly2.__call__."""
    return sum((Fraction(c) * Fraction(a) ** i * Fraction(b) ** j for (i, j), c in p.terms.items()), Fraction(0))


# --- acceptance summary ----------------------------------------------------

_ACCEPTANCE = []


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion exercised by the test")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when in ("setup", "teardown") and report.failed):
        return
    props = dict(report.user_properties)
    if "criterion" in props:
        _ACCEPTANCE.append((props["criterion"], props.get("title", ""), report.outcome, props.get("detail", "")))


@pytest.fixture(autouse=True)
def _criterion_props(request):
    marker = request.node.get_closest_marker("criterion")
    if marker is not None:
        request.node.user_properties.append(("criterion", marker.args[0]))
        request.node.user_properties.append(("title", marker.args[1] if len(marker.args) > 1 else ""))


def pytest_terminal_summary(terminalreporter):
    """One PASS/FAIL line per criterion; a criterion passes only if all its tests pass."""
    if not _ACCEPTANCE:
        return
    by_crit = {}
    for crit, title, outcome, detail in _ACCEPTANCE:
        entry = by_crit.setdefault(crit, {"title": title, "ok": True, "details": []})
        entry["ok"] &= outcome == "passed"
        if detail:
            entry["details"].append(detail if outcome == "passed" else f"FAILED {detail}")
    terminalreporter.section("acceptance criteria")
    for crit in sorted(by_crit):
        entry = by_crit[crit]
        line = f"[C{crit:>2}] {'PASS' if entry['ok'] else 'FAIL'}  {entry['title']}"
        if entry["details"]:
            line += "  | " + "; ".join(entry["details"])
        terminalreporter.write_line(line)
