import numpy as np
import pytest

from ppsym.expr import Environment, evaluate, parse


def num(text_or_expr, **values):
    """Evaluate an expression at scalar coordinates."""
    e = parse(text_or_expr) if isinstance(text_or_expr, str) else text_or_expr
    coords = {k: np.array([float(v)]) for k, v in values.items()}
    return float(np.asarray(evaluate(e, Environment(coordinates=coords))).reshape(-1)[0])


def central_diff(f, point: dict, var: str, h: float = 1e-5) -> float:
    """Fourth-order central difference of a scalar callable of keyword coordinates."""
    def at(shift):
        p = dict(point)
        p[var] = p[var] + shift
        return f(**p)

    return (-at(2 * h) + 8 * at(h) - 8 * at(-h) + at(-2 * h)) / (12 * h)


@pytest.fixture(scope="session")
def full_report():
    from ppsym.catalog import CLASS_IDS
    from ppsym.verify import run_suite

    return run_suite(CLASS_IDS, seed=42, noether=True)


# one line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE: dict = {}


def record(criterion: int, ok: bool, detail: str) -> None:
    ACCEPTANCE[criterion] = (ok, detail)
    print(f"criterion {criterion}: {'PASS' if ok else 'FAIL'} - {detail}")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:>2}: {'PASS' if ok else 'FAIL'} - {detail}")
