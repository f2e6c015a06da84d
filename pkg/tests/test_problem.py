import pytest

from gmmp.parser import ParseError
from gmmp.problem import ProblemError, parse_fixture, parse_problem

from conftest import problem_path


def test_restricted_problem_options(mi_problem):
    P = mi_problem
    assert P.module_kind == "cyclic" and len(P.generators) == 6
    assert sorted(P.differentials) == [1, 2, 3]
    assert P.restrict == [22, 23, 24]
    assert P.tangent_names == ["t1", "t2", "t3"]
    assert P.hull_order == 5
    assert P.fixture_basis.endswith("basis24.fix")


def test_order_override():
    P = parse_problem("ring x y\norder lex\nmodule cyclic\n x*y\nend\n")
    assert P.ring.order == "lex"
    P = parse_problem("ring x y\nmodule cyclic\n x*y\nend\n", order="lex")
    assert P.ring.order == "lex"


def test_presented_module_and_quotient():
    src = "ring x y z\nquotient\n  x*z\nend\nmodule presented 0 1\n  x, y^2\n  0, y\nend\n"
    P = parse_problem(src)
    assert P.ring.is_quotient
    assert P.presentation.shape == (2, 2)
    assert list(P.presentation.source.twists) == [1, 2]
    assert list(P.presentation.target.twists) == [0, 1]


@pytest.mark.parametrize("src,line,col", [
    ("ring x y\nmodule cyclic\n  x*y +\nend\n", 3, 8),
    ("ring x y\nmodule cyclic\n  x y\nend\n", 3, 5),
    ("ring x y\nmodule presented 0\n  x,  y z\nend\n", 3, 9),
    ("ring x y\nmodule presented 0\n  x, \nend\n", 3, 5),
    ("ring x y\nfrobnicate\n", 2, 1),
    ("ring x y\nmodule cyclic\n x*y\n", 3, 1),
])
def test_parse_errors_have_positions(src, line, col):
    with pytest.raises(ParseError) as ei:
        parse_problem(src)
    assert (ei.value.line, ei.value.col) == (line, col)


@pytest.mark.parametrize("src,msg", [
    ("ring x y\nmodule cyclic\n  x*y + x\nend\n", "not homogeneous"),
    ("ring x y\nmodule presented 0 0\n  x, y\nend\n", "row twists"),
    ("ring x y\nquotient\n  x + y^2\nend\nmodule cyclic\nend\n", "not homogeneous"),
    ("ring x y\norder weird\nmodule cyclic\nend\n", "monomial order"),
])
def test_validation_errors(src, msg):
    with pytest.raises(ProblemError, match=msg):
        parse_problem(src)


def test_fixture_grammar(mi_problem):
    ring = mi_problem.ring
    fx = parse_fixture(open(mi_problem.fixture_basis).read(), ring)
    assert len(fx.names) == 24 and fx.names[0] == "v1"
    assert sorted(fx.alpha2) == ["v22", "v23", "v24"]
    assert sorted(fx.pins) == [(0, 0, 2), (0, 1, 1), (0, 2, 0), (0, 2, 1)]
    with pytest.raises(ParseError):
        parse_fixture("basis v1 = x0\n", ring)
    with pytest.raises(ProblemError, match="duplicate"):
        parse_fixture("Hom(L1, L0)\nbasis a = x0\nbasis a = x1\n", ring)
    with pytest.raises(ProblemError, match="component 2"):
        parse_fixture("Hom(L1, R)\ncomponent a 3 = x0\n", ring)
