"""Shared fixtures.

The genus-3 branch is expensive (deep truncation, four-step cascade), so
its parametrization and generating sequence are computed once per session
and reused by every test module that needs them.
"""

import pytest

from valjet.branch import newton_puiseux
from valjet.genseq import run_genseq
from valjet.poly import parse_poly

F_G3_TEXT = ("((x1^2 - x0^3 - x0^4)^2 - x0^8*x1)^2"
             " - x0^13*x1*(x1^2 - x0^3 - x0^4)")


@pytest.fixture(scope="session")
def g3_f():
    return parse_poly(F_G3_TEXT)


@pytest.fixture(scope="session")
def g3_param(g3_f):
    return newton_puiseux(g3_f, 170)


@pytest.fixture(scope="session")
def g3_genseq(g3_param):
    return run_genseq(g3_param)
