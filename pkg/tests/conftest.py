import random
from fractions import Fraction
from pathlib import Path

import pytest

from gmmp.algebra import GradedMatrix, Polynomial, monomials_of_degree
from gmmp.hom_ext import YonedaCochain
from gmmp.pipeline import load_ext, resolve
from gmmp.problem import load_problem

ROOT = Path(__file__).resolve().parents[1]
PROBLEMS = ROOT / "problems"


def problem_path(name: str) -> str:
    return str(PROBLEMS / name)


@pytest.fixture(scope="session")
def mi_problem():
    return load_problem(problem_path("M_I_restricted.prob"))


@pytest.fixture(scope="session")
def mi_res(mi_problem):
    return resolve(mi_problem)


@pytest.fixture(scope="session")
def mi_ext(mi_problem, mi_res):
    """Ext data of M_I with the 24-element fixture basis injected."""
    return load_ext(mi_problem, mi_res)


@pytest.fixture(scope="session")
def mi_canonical(mi_res):
    from gmmp.hom_ext import ExtBasis
    return ExtBasis(mi_res)


def random_matrix(rng: random.Random, ring, src, tgt, density=0.3) -> GradedMatrix:
    entries = {}
    for i, a in enumerate(tgt.twists):
        for j, b in enumerate(src.twists):
            deg = b - a
            if deg < 0 or rng.random() > density:
                continue
            monos = monomials_of_degree(ring.nvars, deg)
            terms = {}
            for e in rng.sample(monos, min(len(monos), rng.randint(1, 2))):
                c = rng.randint(-3, 3)
                if c:
                    terms[e] = Fraction(c)
            p = ring.poly(terms)
            if p.terms:
                entries[i, j] = p
    return GradedMatrix(ring, src, tgt, entries)


def random_cochain(rng: random.Random, res, level: int) -> YonedaCochain:
    comps = {}
    for n in range(max(level, 0), res.length + 1):
        if n - level < 0:
            continue
        comps[n] = random_matrix(rng, res.ring, res.module(n), res.module(n - level))
    return YonedaCochain(level, comps)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    # exposes the call-phase outcome to fixtures (used by the acceptance reporter)
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep
