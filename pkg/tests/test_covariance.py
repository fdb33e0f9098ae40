import cmath

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from exclusion_hopf.covariance import (
    T_GENERATORS,
    T_STAR,
    build_tmatrix_algebra,
    combined_system,
    confluence_report,
    constraints_implied,
    covariance_suite,
    derive_covariance_constraints,
    exact_nilpotency_remainder,
    fermionic_triviality,
    float_nilpotency_remainder,
    gaussian_binomial,
    primed_generators,
    qcommuting_power,
    specialize_classical_limit,
    star_closed,
    su11_limit,
    t12_vanishing_certificate,
    verify_covariance,
    verify_nilpotency_covariance,
    verify_tmatrix_hopf,
)
from exclusion_hopf.freealg import AlgebraElement, star_involution
from exclusion_hopf.oscillator import A, AS, K, KI, q_of

INHOM = "t13 t14* - t14* t13 + Q2 t11 t11* = Q2 t33^2"


def W(*names, c=1):
    return AlgebraElement.word(*names, coeff=c)


@pytest.fixture(scope="module")
def alg3():
    return build_tmatrix_algebra(3)


def test_q_commutation_in_normal_form(alg3):
    q = q_of(3)
    lhs = alg3.normal_form(W("t13", "t14"))
    rhs = alg3.normal_form(W("t14", "t13", c=q**-4))
    assert lhs == rhs
    assert alg3.normal_form(W("t11", "t13")) == alg3.normal_form(W("t13", "t11", c=q**3))


def test_unit_and_nilpotent_entries(alg3):
    assert alg3.normal_form(W("t33*", "t33")) == AlgebraElement.scalar(1)
    assert alg3.normal_form(W("t33", "t33*")) == AlgebraElement.scalar(1)
    assert alg3.normal_form(W("t11", "t11^-1")) == AlgebraElement.scalar(1)
    for g in ("t13", "t14", "t13*", "t14*"):
        assert alg3.normal_form(W(*[g] * 3)).is_zero()
        assert not alg3.normal_form(W(g, g)).is_zero()


def test_primed_generators_are_star_pairs(alg3):
    rs = combined_system(alg3)
    partner = {**T_STAR, A: AS, AS: A, K: KI, KI: K}
    images = primed_generators()
    assert rs.normal_form(star_involution(images[A], partner)) == rs.normal_form(images[AS])


@pytest.mark.parametrize("k", [2, 3, 4])
def test_covariance(k):
    report = covariance_suite(k)
    assert report.passed, [e.to_dict() for e in report.failures]
    assert report.get("(a')^k = 0").passed
    assert report.get("(a'*)^k = 0").passed


def test_covariance_k5():
    assert verify_nilpotency_covariance(5).passed


def test_drop_inhomogeneous_relation_names_survivors():
    report = verify_covariance(3, drop=INHOM)
    assert not report.passed
    surviving = " ".join(e.surviving for e in report.failures)
    assert "t13 t14*" in surviving and "t14* t13" in surviving


def test_every_listed_relation_is_needed(alg3):
    labels = alg3.labels(listed_only=True)
    assert INHOM in labels
    for label in labels:
        assert not covariance_suite(3, drop=label).passed, label


def test_unknown_drop_label():
    with pytest.raises(KeyError):
        build_tmatrix_algebra(3, drop="no such relation")


def test_derivation_reproduces_identities():
    cs = derive_covariance_constraints(3)
    assert cs.reproduces_listed
    assert len(cs.constraints) == 10
    assert not cs.unexpected
    d = cs.to_dict()
    assert d["reproduces_listed_identities"]


def test_derivation_conclusions():
    cs = derive_covariance_constraints(3)
    text = " | ".join(cs.conclusions)
    assert "t31 = t32 = 0" in text
    assert "t34 = 0" in text
    assert "t33 t33* = t33* t33 = 1" in text
    assert "Q1* = Q1 and Q3 = Q2*" in text
    assert cs.star_conditions


@pytest.mark.parametrize("k", [2, 4])
def test_derivation_other_orders(k):
    assert derive_covariance_constraints(k).reproduces_listed


def test_classical_limit():
    survivors, detail = su11_limit()
    assert len(survivors) == 1 and "SU(1,1)" in detail
    ok, detail = fermionic_triviality(3)
    assert ok and "t13 = t14 = 0" in detail
    ok, detail = t12_vanishing_certificate(3)
    assert ok and "t12 = 0" in detail
    assert specialize_classical_limit(3).passed


def test_listed_identities_hold_in_t_algebra():
    assert constraints_implied(3).passed


@pytest.mark.parametrize("k", range(2, 9))
def test_gaussian_binomials_vanish_at_q4(k):
    w = q_of(k) ** 4
    assert all(gaussian_binomial(k, j, w).is_zero() for j in range(1, k))
    assert gaussian_binomial(k, 0, w) == 1 and gaussian_binomial(k, k, w) == 1


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 7), st.floats(0.1, 3.0))
def test_qcommuting_power_float_oracle(n, theta):
    # two q-commuting terms: coefficients are Gaussian binomials
    w = cmath.exp(1j * theta)
    terms = qcommuting_power(2, n, w)
    for (i, j), c in terms.items():
        assert c == pytest.approx(gaussian_binomial(n, i, w), abs=1e-9)


@pytest.mark.parametrize("k", [3, 4, 5])
def test_nilpotency_needs_root_of_unity(k):
    assert float_nilpotency_remainder(k) > 0.1
    assert exact_nilpotency_remainder(k) == 0


@pytest.mark.parametrize("k", [2, 3])
def test_t_algebra_hopf(k):
    report = verify_tmatrix_hopf(k)
    assert report.passed, [e.to_dict() for e in report.failures]


def test_star_closure(alg3):
    assert star_closed(alg3) == []
    assert set(T_GENERATORS) <= set(alg3.generators)


def test_confluence_report_is_stable():
    first = [str(f) for f in confluence_report(3)]
    second = [str(f) for f in confluence_report(3)]
    assert first == second
    # inhomogeneous overlaps are genuine consequences, not ordering artifacts
    assert any("t14* t13 t11" == " ".join(f.word) for f in confluence_report(3))
