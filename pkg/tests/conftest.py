import csv
from pathlib import Path

import numpy as np
import pytest

from levyskew.levy_models import CGMY, LevyModel, Meixner, Merton
from levyskew.pricing_fourier import FourierConfig

R, DELTA = 0.05, 0.02


# one representative per family; sigma=0 for the pure-jump families
FAMILY_MODELS = {
    "merton": LevyModel(0.0, 0.2, Merton(1.0, -0.1, 0.15)),
    "cgmy": LevyModel(0.0, 0.0, CGMY(1.0, 5.0, 10.0, 0.5)),
    "meixner": LevyModel(0.0, 0.0, Meixner(0.3, -0.5, 1.0)),
}

SYMMETRIC_MODELS = {
    "merton": LevyModel(0.0, 0.2, Merton(1.0, -0.01125, 0.15)),
    "cgmy": LevyModel(0.0, 0.0, CGMY(1.0, 4.0, 5.0, 0.5)),
    "meixner": LevyModel(0.0, 0.0, Meixner(0.3, -0.15, 1.0)),
}


# S&P 500 report setting: F = 1303.82, 15 days to expiry
SPX_F = 1303.82
SPX_T = 15 / 365
SPX_STRIKES = np.arange(1225.0, 1390.0, 5.0)  # covers every printed and paired strike
SHORT_CFG = FourierConfig(u_max=400.0, n_nodes=4096)  # default u_max truncates at T = 15 days
CHAIN_BASE = LevyModel(0.0, 0.15, Merton(1.0, -0.1, 0.15))

DATA = Path(__file__).parent / "data"


def printed_rows():
    """Printed (table, k_primary, k_paired, x) rows as strings, exactly as typeset."""
    with open(DATA / "printed_tables.csv", encoding="utf-8") as fh:
        return list(csv.DictReader(line for line in fh if not line.startswith("#")))


def last_digit_unit(text):
    """One unit in the last printed digit of a decimal string."""
    _, _, frac = text.partition(".")
    return 10.0 ** -len(frac)


def matches_printed(value, text):
    return abs(value - float(text)) <= last_digit_unit(text) * (1 + 1e-9)


@pytest.fixture(params=sorted(FAMILY_MODELS))
def family(request):
    return request.param


_ACCEPTANCE_LINES = []


@pytest.fixture
def acceptance_report():
    def record(criterion, passed, detail):
        _ACCEPTANCE_LINES.append(f"[{'PASS' if passed else 'FAIL'}] criterion {criterion}: {detail}")

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
