import pytest

from exclusion_hopf.freealg import AlgebraElement, check_local_confluence, gen
from exclusion_hopf.oscillator import (
    R_of,
    Q3_from,
    SolutionType,
    build_solution_system,
    q_of,
    solution_params,
)


def w(*names, c=1):
    return AlgebraElement.word(*names, coeff=c)


def test_a_astar_normal_form_bosonic_k3():
    rs = build_solution_system("bosonic", 3)
    p = solution_params("bosonic", 3)
    q = q_of(3)
    nf = rs.normal_form(w("a", "a*"))
    assert nf == w("a*", "a") + w("qN", "qN", c=p.Q2) + w("qNi", "qNi", c=p.Q2 * q**-2)


def test_group_like_pair_cancels():
    rs = build_solution_system("fermionic", 4)
    assert rs.normal_form(w("qN", "qNi")) == 1
    assert rs.normal_form(w("qNi", "qN")) == 1


def test_nilpotency():
    rs = build_solution_system("bosonic", 3)
    assert rs.normal_form(gen("a") ** 3).is_zero()
    assert rs.normal_form(gen("a*") ** 3).is_zero()
    assert not rs.normal_form(gen("a") ** 2).is_zero()


def test_a_past_qN():
    rs = build_solution_system("bosonic", 3)
    assert rs.normal_form(w("a", "qN")) == w("qN", "a", c=q_of(3))


def test_star_of_monomial():
    rs = build_solution_system("bosonic", 3)
    lam = q_of(3) + 2
    assert rs.star(w("a", "qN", c=lam)) == w("qNi", "a*", c=lam.conj())


@pytest.mark.parametrize("t", list(SolutionType))
@pytest.mark.parametrize("k", [2, 3, 4, 5, 6, 7])
def test_length3_confluence(t, k):
    rs = build_solution_system(t, k)
    assert rs.check_orientation() == []
    assert check_local_confluence(rs, 3) == []


def test_boundary_rules_needed_for_k2():
    rs = build_solution_system("bosonic", 2, boundary=False)
    assert check_local_confluence(rs, 3)


@pytest.mark.parametrize("t", list(SolutionType))
def test_Q3_from_R(t):
    for k in (2, 3, 6):
        p = solution_params(t, k)
        assert R_of(k, p.Q1).is_real()
        assert Q3_from(k, p.Q1, p.Q2) == p.Q3


@pytest.mark.parametrize("t", list(SolutionType))
def test_star_commutes_with_normal_form(t):
    rs = build_solution_system(t, 3)
    x = w("a", "qN", "a*", c=q_of(3)) + w("a", "a", "qNi")
    assert rs.normal_form(rs.star(rs.normal_form(x))) == rs.normal_form(rs.star(x))
