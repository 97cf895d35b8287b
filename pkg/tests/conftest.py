import numpy as np
import pytest
from hypothesis import settings

from irsassoc.experiments import ScenarioSpec, generate_scenario
from irsassoc.propagation import IrsPanel, RadioConfig, Scenario

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


def small_scenario(k=2, n=3, l=2, m=16, seed=0, **radio):
    spec = ScenarioSpec(k=k, n=n, l=l, elements_per_irs=m, seed=seed,
                        radio=RadioConfig(**radio) if radio else RadioConfig())
    return generate_scenario(spec)


@pytest.fixture
def scenario_factory():
    return small_scenario


@pytest.fixture
def boresight_panel():
    """Single 1 mm element facing +z at the origin (lambda = 1 mm carrier)."""
    lam = 1e-3
    return IrsPanel.facing(0, (0, 0, 0), (0, 0, 1), (1, 1), 0.4 * lam)


@pytest.fixture
def mm_radio():
    return RadioConfig(carrier_frequency=299_792_458.0 / 1e-3, absorption_coeff=0.0)


def line_scenario(src, dsts, panels, radio=None, idle_reflect=True):
    return Scenario(np.atleast_2d(src), np.atleast_2d(dsts), panels,
                    radio or RadioConfig(), idle_reflect=idle_reflect)


# acceptance criteria record (number, line) here; printed after the run
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
