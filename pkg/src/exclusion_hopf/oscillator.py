"""Generalized oscillator presentations with nilpotent ladder operators.

Generators, in increasing order: ``qNi`` (q^-N) < ``qN`` (q^N) < ``a*`` < ``a``.
The quadratic relation is ``a a* = Q1 a* a + Q2 q^{2N} + Q3 q^{-2N}``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

from .freealg import AlgebraElement, Generator, RewriteSystem, Rule, Word
from .scalar import Cyclotomic, cyc_root, field_order, rational, sqrt2

A, AS, K, KI = "a", "a*", "qN", "qNi"


class SolutionType(enum.Enum):
    BOSONIC = "bosonic"
    FERMIONIC = "fermionic"

    @property
    def z(self) -> int:
        return 1 if self is SolutionType.BOSONIC else -1

    @classmethod
    def parse(cls, value: "SolutionType | str") -> "SolutionType":
        return value if isinstance(value, cls) else cls(str(value).lower())


def q_of(k: int) -> Cyclotomic:
    """q = exp(i pi / 2k), stored in the field of order 8k."""
    if k < 2:
        raise ValueError("exclusion order k must be >= 2")
    return cyc_root(field_order(k), 2)


def default_B(t: SolutionType | str) -> Cyclotomic:
    t = SolutionType.parse(t)
    if t is SolutionType.BOSONIC:
        return rational(Fraction(1, 2), 8)
    return sqrt2(8) * Fraction(1, 2)


def R_of(k: int, Q1: Cyclotomic) -> Cyclotomic:
    """R = (1 - q^2 Q1) / (Q1 - q^2)."""
    q2 = q_of(k) ** 2
    return (1 - q2 * Q1) / (Q1 - q2)


def Q3_from(k: int, Q1: Cyclotomic, Q2: Cyclotomic) -> Cyclotomic:
    return Q1 * R_of(k, Q1) * Q2.conj()


@dataclass(frozen=True)
class OscillatorParams:
    k: int
    Q1: Cyclotomic
    Q2: Cyclotomic
    Q3: Cyclotomic

    @property
    def m(self) -> int:
        return field_order(self.k)

    @property
    def q(self) -> Cyclotomic:
        return q_of(self.k)


def solution_params(t: SolutionType | str, k: int, B: Cyclotomic | None = None) -> OscillatorParams:
    """Parameters of the two graded solutions.

    bosonic: Q1 = 1, Q2 = q B, Q3 = Q2 q^-2; fermionic: Q1 = -1, Q2 = -i q B, Q3 = -Q2 q^-2.
    """
    t = SolutionType.parse(t)
    if B is None:
        B = default_B(t)
    m = field_order(k)
    q = q_of(k)
    if t is SolutionType.BOSONIC:
        Q1 = rational(1, m)
        Q2 = (q * B).lift(m)
        Q3 = Q2 * q ** -2
    else:
        Q1 = rational(-1, m)
        Q2 = (-cyc_root(4, 1) * q * B).lift(m)
        Q3 = -Q2 * q ** -2
    return OscillatorParams(k, Q1, Q2, Q3)


def oscillator_generators(k: int) -> list[Generator]:
    return [
        Generator(KI, 0, K),
        Generator(K, 0, KI),
        Generator(AS, 1, A, nilpotency=k),
        Generator(A, -1, AS, nilpotency=k),
    ]


def _w(*names: str, c=1) -> AlgebraElement:
    return AlgebraElement.word(*names, coeff=c)


def base_rules(p: OscillatorParams) -> list[Rule]:
    q = p.q
    qi = q.inv()
    return [
        Rule((A, K), _w(K, A, c=q), "a q^N = q q^N a"),
        Rule((A, KI), _w(KI, A, c=qi), "a q^-N = q^-1 q^-N a"),
        Rule((AS, K), _w(K, AS, c=qi), "a* q^N = q^-1 q^N a*"),
        Rule((AS, KI), _w(KI, AS, c=q), "a* q^-N = q q^-N a*"),
        Rule((K, KI), AlgebraElement.scalar(1), "q^N q^-N = 1"),
        Rule((KI, K), AlgebraElement.scalar(1), "q^-N q^N = 1"),
        Rule(
            (A, AS),
            _w(AS, A, c=p.Q1) + _w(K, K, c=p.Q2) + _w(KI, KI, c=p.Q3),
            "a a* = Q1 a* a + Q2 q^2N + Q3 q^-2N",
        ),
    ]


def _residual_ratio(res: AlgebraElement, tail: Word) -> Cyclotomic | None | str:
    """rho with q^{2N} T = rho q^{-2N} T, or a marker when one side is absent."""
    cp = res.coeff((K, K) + tail)
    cm = res.coeff((KI, KI) + tail)
    if set(res.words()) - {(K, K) + tail, (KI, KI) + tail}:
        raise ValueError(f"unexpected boundary residual: {res}")
    if cp.is_zero():
        return "minus-zero"
    if cm.is_zero():
        return "plus-zero"
    return -cm / cp


def _boundary_rules(base: RewriteSystem, p: OscillatorParams) -> list[Rule]:
    """Consequences of the overlaps a (a*)^k and a^k a*.

    Each overlap leaves a residual c+ q^{2N} T + c- q^{-2N} T that must vanish,
    T = (a*)^{k-1} or a^{k-1}. It is oriented as q^{2N} T -> rho q^{-2N} T, plus
    the shifted form q^{-3N} T -> rho^-1 q^N T. The a^{k-1} family is repeated
    with (a*)^j inserted (j < k-1), since those words are otherwise normal.
    """
    k, q = p.k, p.q
    res_y = base.normal_form(_w(A) * _w(AS) ** k)
    res_x = base.normal_form(_w(A) ** (k - 1) * base.rule_for((A, AS)).rhs)
    rules: list[Rule] = []

    def emit(rho, tail: Word, label: str) -> None:
        if rho == "minus-zero":
            rules.append(Rule((KI, KI) + tail, AlgebraElement(), label, derived=True))
        elif rho == "plus-zero":
            rules.append(Rule((K, K) + tail, AlgebraElement(), label, derived=True))
        else:
            rules.append(Rule((K, K) + tail, _w(KI, KI, *tail, c=rho), label, derived=True))
            rules.append(Rule((KI, KI, KI) + tail, _w(K, *tail, c=rho.inv()), label + " shifted", derived=True))

    y = (AS,) * (k - 1)
    x = (A,) * (k - 1)
    if not res_y.is_zero():
        emit(_residual_ratio(res_y, y), y, "boundary (a*)^(k-1)")
    if not res_x.is_zero():
        rho = _residual_ratio(res_x, x)
        for j in range(k - 1):
            # (a*)^j q^{2N} = q^{-2j} q^{2N} (a*)^j and (a*)^j q^{-2N} = q^{2j} q^{-2N} (a*)^j
            r = rho if isinstance(rho, str) else rho * q ** (4 * j)
            emit(r, (AS,) * j + x, f"boundary (a*)^{j} a^(k-1)")
    return rules


def build_oscillator_system(
    p: OscillatorParams, boundary: bool = True, name: str = "oscillator", step_budget: int = 10**6
) -> RewriteSystem:
    base = RewriteSystem(oscillator_generators(p.k), base_rules(p), step_budget, name)
    if not boundary:
        return base
    extra = _boundary_rules(base, p)
    return base.extended(rules=extra, name=name)


def build_solution_system(t: SolutionType | str, k: int, B: Cyclotomic | None = None,
                          boundary: bool = True) -> RewriteSystem:
    t = SolutionType.parse(t)
    return build_oscillator_system(solution_params(t, k, B), boundary, name=f"{t.value} k={k}")


__all__ = [
    "A",
    "AS",
    "K",
    "KI",
    "OscillatorParams",
    "Q3_from",
    "R_of",
    "SolutionType",
    "base_rules",
    "build_oscillator_system",
    "build_solution_system",
    "default_B",
    "oscillator_generators",
    "q_of",
    "solution_params",
]
