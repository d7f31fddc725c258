import random
import sys

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from pparith.codec import SymbolTable
from pparith.corpus import random_formula

settings.register_profile(
    "default", max_examples=60, deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

# seeds drive the corpus generators, so shrinking stays meaningful
seeds = st.integers(min_value=0, max_value=2**32 - 1)


def formulas(depth=6, table=None):
    return seeds.map(lambda s: random_formula(random.Random(s), depth, table=table))


@pytest.fixture
def table():
    return SymbolTable()


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
