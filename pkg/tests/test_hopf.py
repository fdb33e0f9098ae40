import json
from fractions import Fraction
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from exclusion_hopf.fock import build_fock_rep
from exclusion_hopf.freealg import AlgebraElement, TensorElement
from exclusion_hopf.hopf import (
    AXIOMS,
    GridConfig,
    apply_coproduct,
    antipode,
    branch_report,
    coproduct,
    counit,
    make_solution,
    solve_hopf,
    tensor_rep,
    verify_axioms,
    word_degree,
)
from exclusion_hopf.oscillator import A, AS, K, KI, SolutionType, q_of
from exclusion_hopf.scalar import UnitParam, cyc_root, rational, sqrt2

TYPES = [SolutionType.BOSONIC, SolutionType.FERMIONIC]


def W(*names, c=1):
    return AlgebraElement.word(*names, coeff=c)


def test_bosonic_parameters():
    ans = make_solution("bosonic", 3, rational(Fraction(1, 2)), 0, UnitParam(rational(1)))
    q = q_of(3)
    assert ans.Q2 == q * rational(Fraction(1, 2))
    assert antipode(ans, W(A)) == W(A, c=-q.inv())
    assert antipode(ans, W(AS)) == W(AS, c=-q)


def test_fermionic_Q2_float_image():
    ans = make_solution("fermionic", 2, sqrt2(8) * rational(Fraction(1, 2)))
    expected = -1j * np.exp(1j * np.pi / 4) / np.sqrt(2)
    assert complex(ans.Q2) == pytest.approx(expected, abs=1e-14)
    assert complex(ans.Q2) == pytest.approx(0.5 - 0.5j, abs=1e-14)


@pytest.mark.parametrize("t", TYPES)
def test_ground_state_constraint(t):
    for k in (2, 3, 7):
        ans = make_solution(t, k)
        q = q_of(k)
        assert ans.Q2.conj() == q ** -2 * ans.Q1.value.inv() * ans.Q2
        assert ans.D1**4 == (-(q**2) if t is SolutionType.BOSONIC else q**2)


def test_bad_branch_rejected():
    with pytest.raises(ValueError):
        make_solution("bosonic", 3, d1_branch=4)
    with pytest.raises(ValueError):
        make_solution("bosonic", 1)


def test_unbraided_embedding():
    rep = build_fock_rep(3, "bosonic")
    trep = tensor_rep(rep, UnitParam(rational(1)))
    np.testing.assert_allclose(trep.embed(rep.mat_a, -1, 1), np.kron(np.eye(3), rep.mat_a))


def test_super_tensor_anticommutes():
    rep = build_fock_rep(2, "fermionic")
    trep = tensor_rep(rep, UnitParam(rational(-1)))
    a1 = trep.embed(rep.mat_a, -1, 0)
    a2 = trep.embed(rep.mat_a, -1, 1)
    np.testing.assert_allclose(a1 @ a2 + a2 @ a1, 0, atol=1e-15)
    k2 = trep.embed(rep.mat_qN, 0, 1)
    np.testing.assert_allclose(k2 @ a1, a1 @ k2, atol=1e-15)


@pytest.mark.parametrize("t", TYPES)
def test_crossing_law(t):
    k = 3
    ans = make_solution(t, k)
    rep = build_fock_rep(k, t)
    trep = tensor_rep(rep, ans.z)
    z = complex(ans.z.value)
    mats = rep.matrices()
    for x in (A, AS, K, KI):
        for y in (A, AS, K, KI):
            dx, dy = word_degree((x,)), word_degree((y,))
            left = trep.embed(mats[x], dx, 1) @ trep.embed(mats[y], dy, 0)
            right = trep.embed(mats[y], dy, 0) @ trep.embed(mats[x], dx, 1)
            np.testing.assert_allclose(left, z ** (dx * dy) * right, atol=1e-14)


def test_field_enlargement_hint():
    rep = build_fock_rep(2, "bosonic")
    with pytest.raises(ValueError, match="enlarge"):
        tensor_rep(rep, UnitParam(cyc_root(5, 1)))
    with pytest.raises(ValueError):
        tensor_rep(rep, UnitParam(rational(1)), copies=4)


@pytest.mark.parametrize("t", TYPES)
def test_tensor_star_is_conjugate_transpose(t):
    from exclusion_hopf.hopf import tensor_star

    k = 3
    ans = make_solution(t, k)
    trep = tensor_rep(build_fock_rep(k, t), ans.z)
    for x in [(A,), (AS,), (K, A), (A, A)]:
        for y in [(AS,), (A,), (KI,), ()]:
            T = TensorElement.pure(x, y, coeff=q_of(k))
            np.testing.assert_allclose(trep.of_tensor(T).conj().T, trep.of_tensor(tensor_star(ans, T)), atol=1e-13)


def test_apply_coproduct_basics():
    ans = make_solution("bosonic", 3)
    rep = build_fock_rep(3, "bosonic")
    trep = tensor_rep(rep, ans.z)
    np.testing.assert_allclose(apply_coproduct(ans, trep, "1"), np.eye(9))
    np.testing.assert_allclose(apply_coproduct(ans, trep, K), complex(ans.D1) * np.kron(rep.mat_qN, rep.mat_qN))
    with pytest.raises(KeyError):
        apply_coproduct(ans, trep, "b")


def test_coproduct_of_a_explicit_k2():
    ans = make_solution("bosonic", 2, d2=UnitParam(rational(1)))
    rep = build_fock_rep(2, "bosonic")
    trep = tensor_rep(rep, ans.z)
    s = np.sqrt(0.5 / np.sin(np.pi / 4) * np.sin(np.pi / 2))  # a_1
    a = np.array([[0, s], [0, 0]])
    qn = np.diag([1, np.exp(1j * np.pi / 4)])
    d1m2 = complex(ans.D1**-2)
    # basis |i j> -> 2i + j
    expected = np.array([
        [0, d1m2 * s, s, 0],
        [0, 0, 0, np.exp(1j * np.pi / 4) * s],
        [0, 0, 0, d1m2 * s * np.exp(-1j * np.pi / 4)],
        [0, 0, 0, 0],
    ])
    np.testing.assert_allclose(apply_coproduct(ans, trep, A), expected, atol=1e-15)
    np.testing.assert_allclose(expected, np.kron(a, qn) + d1m2 * np.kron(np.linalg.inv(qn), a), atol=1e-15)


def test_counit_and_antipode_on_generators():
    ans = make_solution("bosonic", 3)
    assert counit(ans, W(K)) * ans.D1 == 1
    rs = ans.system()
    # m(S (x) id) Delta(a) reduces to zero
    total = AlgebraElement()
    for (x, y), c in coproduct(ans, W(A)).terms.items():
        total = total + antipode(ans, W(*x)) * W(*y) * c
    assert rs.normal_form(total).is_zero()


@pytest.mark.parametrize("t", TYPES)
@pytest.mark.parametrize("k", [2, 3, 4, 5])
def test_solutions_satisfy_all_axioms(t, k):
    report = verify_axioms(make_solution(t, k))
    assert report.passed, [e.to_dict() for e in report.failures]
    assert set(report.by_axiom()) >= set(AXIOMS)
    assert all(e.exact_residual == 0 for e in report.entries if not e.diagnostic)
    assert report.max_float_residual <= 1e-12


def test_nilpotency_of_coproduct_is_diagnostic_only():
    rep_b = verify_axioms(make_solution("bosonic", 3), float_path=False)
    rep_f = verify_axioms(make_solution("fermionic", 3), float_path=False)
    assert rep_b.passed and rep_f.passed
    assert any(not d.exact_zero for d in rep_b.diagnostics)
    assert all(d.exact_zero for d in rep_f.diagnostics)


def test_tamper_Q1():
    good = make_solution("bosonic", 3)
    bad = replace(good, Q1=UnitParam(cyc_root(4, 1).lift(24)))
    report = verify_axioms(bad)
    assert not report.passed
    assert max(e.float_residual for e in report.failures) >= 0.1


def test_tamper_Q2_and_D1():
    good = make_solution("bosonic", 3)
    q = q_of(3)
    assert not verify_axioms(replace(good, Q2=good.Q2 * 2), float_path=False).passed
    # a fourth root of +q^2 in place of -q^2
    D1 = cyc_root(24, 1)
    assert D1**4 == q**2
    bad = replace(good, D1=D1, D2=D1, D3=D1**-1, S1=D1**-2)
    assert not verify_axioms(bad, float_path=False).passed


def test_coassociativity_holds_for_any_D1():
    # with D2 = D1 and D3 = D1^-1 coassociativity is blind to D1
    good = make_solution("bosonic", 2)
    D1 = cyc_root(16, 1)
    bad = replace(good, D1=D1, D2=D1, D3=D1.inv(), S1=D1**-2)
    report = verify_axioms(bad, float_path=False)
    assert not report.passed
    assert report.by_axiom()["coassociativity"]
    assert not report.by_axiom()["Delta hom"]


def test_coassociativity_binds_D2_D3():
    good = make_solution("bosonic", 2)
    bad = replace(good, D2=rational(1, 16), D3=good.D1**-2)
    assert not verify_axioms(bad, float_path=False).by_axiom()["coassociativity"]


def test_fermionic_branches():
    rows = branch_report("fermionic", 3)
    assert [r["listed_S1_passes"] for r in rows] == [True, False, True, False]
    assert all(r["D1^-2_S1_passes"] for r in rows)
    assert all(r["listed_S1_passes"] for r in branch_report("bosonic", 3))


@settings(max_examples=40, deadline=None)
@given(st.lists(st.sampled_from([A, AS, K, KI]), max_size=5),
       st.lists(st.sampled_from([A, AS, K, KI]), max_size=5),
       st.lists(st.sampled_from([A, AS, K, KI]), min_size=1, max_size=5))
def test_bicharacter_multiplicative(x, y, u):
    ans = make_solution("fermionic", 3)
    dx, dy, du = word_degree(tuple(x)), word_degree(tuple(y)), word_degree(tuple(u))
    assert ans.lam(dx + dy, du) == ans.lam(dx, du) * ans.lam(dy, du)


def test_solver_k2():
    result = solve_hopf(2)
    assert result.classes() == {("1", "1"), ("-1", "-1")}
    assert result.min_rejected_residual >= 1e-3
    assert all(s.residuals.passed for s in result)
    assert any(s.classification is SolutionType.FERMIONIC for s in result)


@pytest.mark.slow
def test_solver_k3():
    result = solve_hopf(3, workers=2)
    assert result.classes() == {("1", "1"), ("-1", "-1")}


def test_solver_restricted_grid(tmp_path):
    cfg = tmp_path / "grid.json"
    cfg.write_text(json.dumps({"k": 2, "z_roots": [0], "q1_roots": [0], "d2_samples": "all"}))
    grid = GridConfig.from_file(cfg)
    result = solve_hopf(grid)
    q = q_of(2)
    assert result.classes() == {("1", "1")}
    for s in result:
        assert s.ansatz.D1**4 == -(q**2)
        assert s.ansatz.D2 == s.ansatz.D1
    assert any(s.fock_positive for s in result)


def test_grid_config_rejects_unknown_keys(tmp_path):
    cfg = tmp_path / "grid.json"
    cfg.write_text(json.dumps({"k": 2, "zroots": [0]}))
    with pytest.raises(ValueError):
        GridConfig.from_file(cfg)
