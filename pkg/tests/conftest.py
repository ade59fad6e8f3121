from fractions import Fraction

import numpy as np
import pytest
from hypothesis import settings

from vortexlab.grid import Grid
from vortexlab.holomorphic import holomorphic_projection
from vortexlab.vortex import higgs_from_basis, solve_vortex

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")

_cache: dict = {}


def cached(key, make):
    if key not in _cache:
        _cache[key] = make()
    return _cache[key]


def grid(h):
    return cached(("grid", h), lambda: Grid(h))


def basis(weight):
    w = Fraction(weight)
    return cached(("basis", w), lambda: holomorphic_projection(w))


def solved(ell, h, amplitude=0.5, seed=1):
    ell = Fraction(ell)
    return cached(("solved", ell, h, amplitude, seed),
                  lambda: solve_vortex(higgs_from_basis(basis(1 + ell), grid(h), amplitude, seed=seed)))


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


ACCEPTANCE: dict = {}


def record_criterion(number: int, title: str, passed: bool, detail: str):
    ACCEPTANCE[number] = (title, bool(passed), detail)
    print(f"criterion {number} {'PASS' if passed else 'FAIL'}  {title}: {detail}")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        title, ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {title}  ({detail})")
