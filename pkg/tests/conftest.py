import sys
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import strategies as st

from exactreach.mdp import validate_mdp
from exactreach.modelfile import Model, read_model

MODELS = Path(__file__).resolve().parent.parent / "models"


@pytest.fixture
def m2():
    return read_model(MODELS / "m2.mdp")


@pytest.fixture
def m5():
    return read_model(MODELS / "m5.mdp")


@st.composite
def distributions(draw, n, max_den=6):
    k = draw(st.integers(1, min(3, n)))
    support = draw(st.lists(st.integers(0, n - 1), min_size=k, max_size=k, unique=True))
    den = draw(st.integers(k, max(k, max_den)))
    cuts = sorted(draw(st.lists(st.integers(1, den - 1), min_size=k - 1, max_size=k - 1, unique=True))) if k > 1 else []
    parts = [b - a for a, b in zip([0] + cuts, cuts + [den])]
    return {t: Fraction(p, den) for t, p in zip(support, parts)}


@st.composite
def models(draw, max_states=5, max_choices=3):
    n = draw(st.integers(1, max_states))
    raw = []
    for s in range(n):
        for a in range(draw(st.integers(1, max_choices))):
            raw.append((s, f"a{a}", draw(distributions(n))))
    raw = draw(st.permutations(raw))
    goal = draw(st.frozensets(st.integers(0, n - 1)))
    return Model(validate_mdp(n, raw), {"goal": goal})


def pytest_terminal_summary(terminalreporter):
    acceptance = sys.modules.get("test_acceptance")
    if acceptance is None or not acceptance.REPORT:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(acceptance.REPORT):
        terminalreporter.write_line(acceptance.REPORT[number])
