import random
from fractions import Fraction

from hypothesis import given, settings, strategies as st

from gmmp.algebra import FreeModule, GradedMatrix, PolyRing
from gmmp.groebner import buchberger, lift, lift_matrix, syzygies

R = PolyRing(["x", "y", "z"])
P = R.parse


def col(A, x):
    return [sum((A.entries.get((i, j), R.zero()) * x[j] for j in range(A.source.rank)), R.zero())
            for i in range(A.target.rank)]


def test_twisted_cubic_basis():
    S = PolyRing(["x0", "x1", "x2", "x3"])
    G = buchberger([S.parse(s) for s in ("x0*x2 - x1^2", "x1*x3 - x2^2", "x0*x3 - x1*x2")])
    assert len(G) == 3
    assert G.spairs_reduce_to_zero()
    assert G.contains([S.parse("x0*x2*x3 - x1^2*x3")])


def test_syzygies_of_xy():
    syz = syzygies([P("x"), P("y")])
    assert len(syz) == 1
    a, b = syz[0]
    assert (a * P("x") + b * P("y")).is_zero()
    assert a.degree() == 1


def test_lift_uses_plain_division_when_it_succeeds():
    A = GradedMatrix.from_rows(R, [[P("x^2 - y*z"), P("y^2 - x*z")]])
    b = [P("z*(x^2 - y*z) + x*(y^2 - x*z)")]
    x = lift(A, b)
    assert [str(p) for p in x] == ["z", "x"]


def test_lift_falls_back_when_division_leaves_a_remainder():
    A = GradedMatrix.from_rows(R, [[P("x*y - z^2"), P("x^2 - y*z")]])
    b = [P("x*(x*y - z^2) - y*(x^2 - y*z)")]
    x = lift(A, b)
    assert x is not None
    assert col(A, x) == b


def test_lift_detects_non_members():
    A = GradedMatrix.from_rows(R, [[P("x"), P("y")]])
    assert lift(A, [P("z")]) is None
    assert lift_matrix(A, GradedMatrix.from_rows(R, [[P("z^2")]])) is None


def test_module_basis_contains_generators():
    M = FreeModule([0, 0])
    gens = [[P("x"), P("y")], [P("y"), P("z")]]
    G = buchberger(gens, module=M)
    assert all(G.contains(g) for g in gens)
    assert G.spairs_reduce_to_zero()


@given(st.integers(0, 10 ** 6))
@settings(max_examples=25, deadline=None)
def test_random_ideals_are_groebner(seed):
    rng = random.Random(seed)
    mons = [(a, b, 2 - a - b) for a in range(3) for b in range(3 - a)]
    gens = []
    for _ in range(rng.randint(1, 3)):
        t = {m: Fraction(rng.randint(-2, 2)) for m in rng.sample(mons, 3)}
        p = R.poly({m: c for m, c in t.items() if c})
        if p.terms:
            gens.append(p)
    if not gens:
        return
    G = buchberger(gens)
    assert G.spairs_reduce_to_zero()
    assert all(G.contains([g]) for g in gens)
