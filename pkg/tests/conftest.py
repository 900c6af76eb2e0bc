import zlib

import numpy as np
import pytest
from hypothesis import settings

from grassmann import Blade, Multivector
from grassmann.multiindex import subsets_of_grade
from grassmann.multivector import blade_from_columns

settings.register_profile("default", deadline=None, max_examples=60, derandomize=True)
settings.load_profile("default")


def rand_scalar(rng, cplx=False):
    x = rng.normal()
    return complex(x, rng.normal()) if cplx else complex(x)


def rand_mv(rng, n, nterms=None, cplx=False, grades=None, integer=False):
    """Sparse random multivector; ``grades`` restricts the allowed grades."""
    pool = [b for p in (range(n + 1) if grades is None else grades)
            for b in subsets_of_grade(n, p)]
    if not pool:
        return Multivector.zero(n)
    k = len(pool) if nterms is None else min(nterms, len(pool))
    picks = rng.choice(len(pool), size=k, replace=False)
    terms = {}
    for t in picks:
        if integer:
            terms[pool[t]] = complex(rng.integers(-3, 4), rng.integers(-3, 4) if cplx else 0)
        else:
            terms[pool[t]] = rand_scalar(rng, cplx)
    return Multivector(n, terms)


def rand_cols(rng, n, p, cplx=False):
    A = rng.normal(size=(n, p))
    if cplx:
        A = A + 1j * rng.normal(size=(n, p))
    return A.astype(complex)


def rand_blade(rng, n, p, cplx=False):
    cols = rand_cols(rng, n, p, cplx)
    return Blade(blade_from_columns(cols), cols)


def sparse_cols(rng, n, p, cplx=False):
    """Random vectors with many zero coordinates, still independent."""
    while True:
        A = rand_cols(rng, n, p, cplx)
        A[rng.random(size=A.shape) < 0.5] = 0
        if p == 0 or np.linalg.matrix_rank(A) == p:
            return A


@pytest.fixture
def rng(request):
    # deterministic per test, independent across tests
    seed = zlib.crc32(request.node.nodeid.encode())
    return np.random.default_rng(seed)


# ---------------------------------------------------------------------------
# acceptance reporting: one PASS/FAIL line per criterion in the summary

_ACCEPTANCE = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark and rep.when == "call":
        num, title = mark.args
        _ACCEPTANCE.append((num, title, rep.passed, rep.duration))


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(num, title): acceptance criterion")


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num, title, ok, dur in sorted(_ACCEPTANCE):
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} [{num}] {title} ({dur:.2f}s)")
