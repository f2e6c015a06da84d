from fractions import Fraction

import pytest

from gmmp.local_algebra import (LocalQuotient, basis_Bprime, check_hereditary, extend_quotient,
                                monomials, normal_form_witness, scan_key)

ONE = Fraction(1)


def _three_relation_tower():
    """Order-2 stage with f = (t1^2, t1 t2, t2^2 - t1 t3) in three variables."""
    Q = LocalQuotient.initial(3, 3)
    assert Q.next_Bprime() == sorted(monomials(3, 2), key=scan_key)
    corr = [{(2, 0, 0): ONE}, {(1, 1, 0): ONE}, {(0, 2, 0): ONE, (1, 0, 1): -ONE}]
    return extend_quotient(Q, corr)


def test_initial_stage():
    Q = LocalQuotient.initial(2, 0)
    assert Q.dim == 3
    assert Q.next_Bprime() == [(0, 2), (1, 1), (2, 0)]


def test_second_order_bases():
    Q = _three_relation_tower()
    assert Q.B[2] == [(0, 0, 2), (0, 1, 1), (0, 2, 0)]
    assert Q.next_Bprime() == [(0, 0, 3), (0, 1, 2), (0, 2, 1)]
    assert Q.independent_relations() == [0, 1, 2]
    assert Q.dim == 7
    assert check_hereditary(Q, 3, Q.next_Bprime())


def test_r_witnesses():
    Q = _three_relation_tower()
    w = normal_form_witness(Q, (1, 0, 1))
    assert w.basis == {(0, 2, 0): ONE}
    assert w.relation == {2: -ONE}
    assert w.verify(Q.f, Q.d)
    w = normal_form_witness(Q, (2, 0, 0))
    assert w.basis == {} and w.relation == {0: ONE}
    w = normal_form_witness(Q, (0, 2, 1))
    assert w.basis == {(0, 2, 1): ONE} and w.relation == {}
    with pytest.raises(ValueError):
        normal_form_witness(Q, (0, 0, 4))


def test_s_witness_stays_in_truncation():
    Q = _three_relation_tower()
    w = Q.s_witness((1, 0, 1))
    assert w.basis == {(0, 2, 0): ONE}
    assert Q.s_witness((1, 1, 0)).basis == {}


def test_third_and_fourth_order_without_corrections():
    Q = extend_quotient(_three_relation_tower(), [{}, {}, {}])
    assert Q.B[3] == [(0, 0, 3), (0, 1, 2), (0, 2, 1)]
    assert basis_Bprime(Q, 4) == [(0, 0, 4), (0, 1, 3), (0, 2, 2)]


def test_corrections_outside_bprime_are_rejected():
    Q = _three_relation_tower()
    with pytest.raises(ValueError):
        extend_quotient(Q, [{(3, 0, 0): ONE}, {}, {}])
    with pytest.raises(ValueError):
        extend_quotient(Q, [{}])


def test_one_variable_tower():
    Q = extend_quotient(LocalQuotient.initial(1, 1), [{(2,): ONE}])
    assert Q.B[2] == []
    assert Q.next_Bprime() == []
