from functools import lru_cache

import pytest

from mmrloop.cyclotomic import cyclotomic_from_jones
from mmrloop.expansions import loop_data_from_jones, reconstruct_loop_polynomial
from mmrloop.knots import STANDARD, alexander, colored_jones, load_catalog

CATALOG = load_catalog()


@lru_cache(maxsize=None)
def jones_table(name, nmax, convention=STANDARD):
    braid = CATALOG[name]
    if nmax > 1:
        table = dict(jones_table(name, nmax - 1, convention))
    else:
        table = {}
    table[nmax] = colored_jones(braid, nmax, convention)
    return table


@lru_cache(maxsize=None)
def delta(name):
    return alexander(CATALOG[name])


@lru_cache(maxsize=None)
def cyclo(name, k_max=12):
    return cyclotomic_from_jones(jones_table(name, k_max + 1), k_max, name)


@lru_cache(maxsize=None)
def loop(name, order):
    return loop_data_from_jones(jones_table(name, order + 3), delta(name), order, knot=name)


@lru_cache(maxsize=None)
def loop_with_polys(name, order=13, top=1):
    data = loop(name, order)
    for k in range(top + 1):
        reconstruct_loop_polynomial(data, k)
    return data


@pytest.fixture(scope="session")
def catalog():
    return CATALOG


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
