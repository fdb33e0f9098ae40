from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from exclusion_hopf.freealg import (
    AlgebraElement,
    Generator,
    NonTerminationError,
    RewriteSystem,
    Rule,
    TensorElement,
    check_local_confluence,
    gen,
    parse_presentation,
    star_involution,
)
from exclusion_hopf.scalar import cyc_root, rational


def quantum_plane(m=12, j=1):
    """x y -> q y x with y < x."""
    q = cyc_root(m, j)
    gens = [Generator("y", 1, "x"), Generator("x", -1, "y")]
    return RewriteSystem(gens, [Rule(("x", "y"), AlgebraElement.word("y", "x", coeff=q), "xy")]), q


def test_quantum_plane_normal_form():
    rs, q = quantum_plane()
    x, y = gen("x"), gen("y")
    nf = rs.normal_form(x * x * y)
    assert nf == AlgebraElement.word("y", "x", "x", coeff=q * q)
    assert rs.is_normal(("y", "y", "x"))


def test_nilpotent_power_rule_added():
    gens = [Generator("b", 0, nilpotency=3)]
    rs = RewriteSystem(gens, [])
    b = gen("b")
    assert rs.normal_form(b**3).is_zero()
    assert rs.normal_form(b**2) == b**2


def test_central_generator_commutes():
    gens = [Generator("c", 0, central=True), Generator("y", 1, "x"), Generator("x", -1, "y")]
    rs = RewriteSystem(gens, [])
    assert rs.normal_form(gen("x") * gen("c") * gen("y")) == AlgebraElement.word("c", "x", "y")
    assert check_local_confluence(rs, 3) == []
    assert len(rs.extended(name="again").rules) == len(rs.rules)


def test_budget_exhaustion_names_word():
    gens = [Generator("u"), Generator("v")]
    # deliberately cyclic: u v -> v u -> u v
    rs = RewriteSystem(
        gens,
        [Rule(("u", "v"), gen("v") * gen("u")), Rule(("v", "u"), gen("u") * gen("v"))],
        step_budget=50,
    )
    with pytest.raises(NonTerminationError) as info:
        rs.normal_form(gen("u") * gen("v"))
    assert info.value.word in {("u", "v"), ("v", "u")}


def test_orientation_check_flags_increasing_rule():
    gens = [Generator("u"), Generator("v")]
    rs = RewriteSystem(gens, [Rule(("u", "v"), gen("v") * gen("u"), "bad")])
    assert rs.check_orientation() == ["bad"]


def test_star_involution_reverses_and_conjugates():
    rs, q = quantum_plane()
    x = AlgebraElement.word("x", "y", "y", coeff=q)
    assert star_involution(x, rs) == AlgebraElement.word("x", "x", "y", coeff=q.conj())
    assert rs.star(rs.star(x)) == x


def test_quantum_plane_is_confluent():
    rs, _ = quantum_plane()
    assert check_local_confluence(rs, 4) == []


def test_confluence_detects_failure():
    gens = [Generator("u"), Generator("v", nilpotency=2)]
    # v u -> 2 u v clashes with v v -> 0 on v v u
    rs = RewriteSystem(gens, [Rule(("v", "u"), AlgebraElement.word("u", "v", coeff=2))])
    fails = check_local_confluence(rs, 3)
    assert fails == []
    rs2 = RewriteSystem(
        gens,
        [
            Rule(("v", "u"), AlgebraElement.word("u", "v", coeff=2) + gen("u")),
        ],
    )
    fails2 = check_local_confluence(rs2, 3)
    assert any(f.word == ("v", "v", "u") for f in fails2)


def test_confluence_rejects_short_length():
    rs, _ = quantum_plane()
    with pytest.raises(ValueError):
        check_local_confluence(rs, 2)


def test_substitute():
    x = gen("a") * gen("b") + 3
    y = x.substitute({"a": gen("c") * 2})
    assert y == AlgebraElement.word("c", "b", coeff=2) + 3


def test_tensor_braided_product():
    rs, q = quantum_plane()
    x1 = TensorElement.pure(("x",), ())
    y2 = TensorElement.pure((), ("y",))
    deg = rs.degree
    plain = y2.mul(x1, deg)
    braided = y2.mul(x1, deg, lambda a, b: q ** (a * b))
    assert plain == TensorElement.pure(("x",), ("y",))
    assert braided == TensorElement.pure(("x",), ("y",), coeff=q.inv())


def test_tensor_normal_form_is_slotwise():
    rs, q = quantum_plane()
    t = TensorElement.pure(("x", "y"), ("x", "y"))
    assert t.normal_form(rs) == TensorElement.pure(("y", "x"), ("y", "x"), coeff=q * q)


def test_parse_presentation():
    text = """
    # q-plane at a 12th root
    gen y deg=1 star=x
    gen x deg=-1 star=y nil=3
    x y = zeta(12,1) y x
    """
    rs = parse_presentation(text)
    assert rs.rules[0].lhs == ("x", "y")
    assert rs.rules[0].rhs == AlgebraElement.word("y", "x", coeff=cyc_root(12, 1))
    assert rs.normal_form(gen("x") ** 3).is_zero()


def test_parse_orients_and_scales():
    text = """
    gen u
    gen v
    2 u = 1/2 v u - 3
    """
    rs = parse_presentation(text)
    (r,) = rs.rules
    assert r.lhs == ("v", "u")
    assert r.rhs == 4 * gen("u") + 6


# -- properties ----------------------------------------------------------------

words = st.lists(st.sampled_from(["x", "y"]), max_size=6).map(tuple)
coeffs = st.integers(-4, 4).map(Fraction)


@st.composite
def elements(draw):
    terms = draw(st.dictionaries(words, coeffs, max_size=4))
    return AlgebraElement(terms)


@settings(max_examples=60)
@given(elements(), elements(), elements())
def test_normal_form_is_linear_and_multiplicative(a, b, c):
    rs, _ = quantum_plane()
    nf = rs.normal_form
    assert nf(a + b) == nf(a) + nf(b)
    assert nf(nf(a) * nf(b)) == nf(a * b)
    assert nf(nf(a * b) * c) == nf(a * nf(b * c))


@settings(max_examples=60)
@given(elements(), elements())
def test_star_is_antihomomorphism(a, b):
    rs, _ = quantum_plane()
    assert rs.star(a * b) == rs.star(b) * rs.star(a)
    assert rs.star(rs.star(a)) == a


@given(elements())
def test_normal_form_idempotent(a):
    rs, _ = quantum_plane()
    once = rs.normal_form(a)
    assert rs.normal_form(once) == once
    assert all(rs.is_normal(w) for w in once.words())


def test_scalar_coefficients_are_rational_embedding():
    assert AlgebraElement.scalar(Fraction(1, 2)).coeff(()) == rational(Fraction(1, 2))
