"""Finite Fock representations of the oscillator solutions.

States are |0>, ..., |k-1>; ``a|n> = a_n |n-1>``, ``a*|n> = a_{n+1} |n+1>`` and
``q^N |n> = q^n |n>``. The squares a_n^2 are exact cyclotomic numbers; the
a_n themselves are only used on the floating-point matrix path.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .freealg import AlgebraElement, RewriteSystem, Word
from .oscillator import (
    A,
    AS,
    K,
    KI,
    OscillatorParams,
    R_of,
    SolutionType,
    default_B,
    q_of,
    solution_params,
)
from .scalar import Cyclotomic, cyc_root, field_order, rational

DEFAULT_TOLERANCE = 1e-10


class PositivityError(ValueError):
    """A squared ladder coefficient came out negative or non-real."""


def spectrum_value(k: int, t: SolutionType | str, B: Cyclotomic | None, n: int) -> Cyclotomic:
    """Exact a_n^2 for the two solutions.

    bosonic: B (q^{2n} - q^{-2n}) / (q - q^{-1});
    fermionic: B (q^{2n} - q^{-2n}) / (i (q + q^{-1})).
    Both quotients are expanded as geometric sums, so no field inversion occurs.
    """
    t = SolutionType.parse(t)
    if not 0 <= n <= k:
        raise ValueError(f"level n={n} outside 0..{k}")
    if B is None:
        B = default_B(t)
    m = field_order(k)
    # q = zeta_m^2, so q^e = zeta_m^{2e}
    pairs = [((2 * (2 * n - 1 - 2 * j)) % m, (-1) ** j if t is SolutionType.FERMIONIC else 1)
             for j in range(2 * n)]
    s = Cyclotomic.from_exponents(m, pairs)
    if t is SolutionType.FERMIONIC:
        s = s * cyc_root(4, 3)  # 1/i
    return (s * B).lift(m) if n else rational(0, m)


def spectrum_recursion(p: OscillatorParams, n: int) -> Cyclotomic:
    """Oracle: a_{j+1}^2 = Q1 a_j^2 + Q2 q^{2j} + Q3 q^{-2j}, a_0 = 0."""
    q = p.q
    val = rational(0, p.m)
    q2 = q * q
    q2i = q2.inv()
    pw, pwi = rational(1, p.m), rational(1, p.m)
    for _ in range(n):
        val = p.Q1 * val + p.Q2 * pw + p.Q3 * pwi
        pw, pwi = pw * q2, pwi * q2i
    return val


@dataclass(frozen=True, eq=False)
class FockRep:
    k: int
    type: SolutionType | None
    B: Cyclotomic | None
    params: OscillatorParams
    spectrum: tuple[Cyclotomic, ...]  # a_n^2 for n = 0..k
    mat_a: np.ndarray
    mat_astar: np.ndarray
    mat_qN: np.ndarray
    mat_qNinv: np.ndarray
    hermitian: bool = True

    @property
    def m(self) -> int:
        return self.params.m

    @property
    def q(self) -> Cyclotomic:
        return self.params.q

    def spectral_fn(self, n: int) -> Cyclotomic:
        return self.spectrum[n]

    def matrices(self) -> dict[str, np.ndarray]:
        return {A: self.mat_a, AS: self.mat_astar, K: self.mat_qN, KI: self.mat_qNinv}

    def scaled(self, factor: float) -> FockRep:
        """Copy with both ladder matrices multiplied by ``factor`` (negative controls)."""
        return dataclasses.replace(self, mat_a=self.mat_a * factor, mat_astar=self.mat_astar * factor)


def _rep_from_spectrum(k: int, p: OscillatorParams, spectrum: Sequence[Cyclotomic],
                       t: SolutionType | None, B: Cyclotomic | None,
                       require_positive: bool = True) -> FockRep:
    positive = True
    vals = []
    for n, s in enumerate(spectrum):
        c = s.to_complex()
        if not s.is_real() or c.real < -1e-12:
            if require_positive:
                raise PositivityError(f"a_{n}^2 = {s} is not a nonnegative real number")
            positive = False
        vals.append(c)
    if positive:
        amp = np.sqrt(np.array([max(v.real, 0.0) for v in vals]))
    else:
        amp = np.sqrt(np.array(vals, dtype=complex))
    mat_a = np.zeros((k, k), dtype=complex)
    for n in range(1, k):
        mat_a[n - 1, n] = amp[n]
    qc = p.q.to_complex()
    diag = np.array([qc**n for n in range(k)])
    return FockRep(
        k=k,
        type=t,
        B=B,
        params=p,
        spectrum=tuple(spectrum),
        mat_a=mat_a,
        # without positivity a* is only the transpose: the algebra holds, the *-structure does not
        mat_astar=(mat_a.conj().T if positive else mat_a.T).copy(),
        mat_qN=np.diag(diag),
        mat_qNinv=np.diag(1 / diag),
        hermitian=positive,
    )


def build_fock_rep(k: int, t: SolutionType | str, B: Cyclotomic | None = None) -> FockRep:
    t = SolutionType.parse(t)
    if k < 2:
        raise ValueError("exclusion order k must be >= 2")
    if B is None:
        B = default_B(t)
    p = solution_params(t, k, B)
    if not R_of(k, p.Q1).is_real():
        raise ValueError("R must be real for an admissible Q1")
    spectrum = [spectrum_value(k, t, B, n) for n in range(k + 1)]
    if not spectrum[k].is_zero():
        raise ValueError("highest state is not annihilated")
    return _rep_from_spectrum(k, p, spectrum, t, B)


def build_fock_rep_from_params(p: OscillatorParams, require_positive: bool = True) -> FockRep:
    """Representation for arbitrary parameters, spectrum from the recursion.

    With ``require_positive=False`` a non-positive spectrum gives a
    non-unitary representation (complex amplitudes, a* the plain transpose).
    """
    spectrum = [spectrum_recursion(p, n) for n in range(p.k + 1)]
    return _rep_from_spectrum(p.k, p, spectrum, None, None, require_positive)


# -- evaluation ---------------------------------------------------------------

def matrix_of(x: AlgebraElement, rep: FockRep) -> np.ndarray:
    mats = rep.matrices()
    out = np.zeros((rep.k, rep.k), dtype=complex)
    eye = np.eye(rep.k, dtype=complex)
    for w, c in x:
        mat = eye
        for g in w:
            mat = mat @ mats[g]
        out += complex(c) * mat
    return out


def _word_path(w: Word, n: int, rep: FockRep) -> tuple[int, Cyclotomic, dict[int, int]] | None:
    """End state, q-phase and edge crossing counts of w applied to |n>."""
    q = rep.q
    k = rep.k
    s = n
    phase = 0
    edges: dict[int, int] = {}
    for g in reversed(w):
        if g == A:
            if s == 0:
                return None
            edges[s] = edges.get(s, 0) + 1
            s -= 1
        elif g == AS:
            if s + 1 >= k:
                return None
            edges[s + 1] = edges.get(s + 1, 0) + 1
            s += 1
        elif g == K:
            phase += s
        elif g == KI:
            phase -= s
        else:
            raise KeyError(f"generator {g!r} has no Fock action")
    return s, q**phase, edges


def exact_action(x: AlgebraElement, rep: FockRep, n: int) -> dict[int, Cyclotomic]:
    """x|n> = sum_end C_end * (prod of a_j over odd-crossed edges) |end>.

    Words with the same endpoints cross the same edges an odd number of times,
    so the square roots factor out and C_end is exact. Terms whose odd factor
    contains a zero amplitude are dropped.
    """
    out: dict[int, Cyclotomic] = {}
    for w, c in x:
        path = _word_path(w, n, rep)
        if path is None:
            continue
        end, phase, edges = path
        val = c * phase
        dead = False
        for j, cnt in edges.items():
            sq = rep.spectrum[j]
            if cnt % 2 and sq.is_zero():
                dead = True
                break
            if cnt >= 2:
                val = val * sq ** (cnt // 2)
        if dead:
            continue
        out[end] = out.get(end, rational(0)) + val
    return {e: v for e, v in out.items() if not v.is_zero()}


@dataclass
class RelationResidual:
    label: str
    exact_zero: bool
    float_residual: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.exact_zero and self.float_residual <= self.tolerance

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "exact_zero": self.exact_zero,
            "float_residual": self.float_residual,
            "passed": self.passed,
        }


@dataclass
class ResidualReport:
    entries: list[RelationResidual] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(e.passed for e in self.entries)

    @property
    def max_float_residual(self) -> float:
        return max((e.float_residual for e in self.entries), default=0.0)

    def get(self, label: str) -> RelationResidual:
        for e in self.entries:
            if e.label == label:
                return e
        raise KeyError(label)

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "max_float_residual": self.max_float_residual,
            "relations": [e.to_dict() for e in self.entries],
        }


def verify_relations(
    rep: FockRep,
    rs: RewriteSystem,
    tolerance: float = DEFAULT_TOLERANCE,
    extra: Sequence[tuple[str, AlgebraElement]] = (),
) -> ResidualReport:
    """Check every rule of ``rs`` (and ``extra`` relations) in the representation."""
    report = ResidualReport()
    for label, rel in list(rs.relations()) + list(extra):
        exact = all(not exact_action(rel, rep, n) for n in range(rep.k))
        resid = float(np.max(np.abs(matrix_of(rel, rep)))) if rel else 0.0
        report.entries.append(RelationResidual(label, exact, resid, tolerance))
    return report


def equivalent_form_relation(t: SolutionType | str, k: int, B: Cyclotomic | None = None) -> AlgebraElement:
    """bosonic: aa* - a*a - 2B cos((2N+1)pi/2k); fermionic: aa* + a*a - 2B sin((2N+1)pi/2k).

    With q = exp(i pi/2k): 2 cos((2N+1)pi/2k) = q q^{2N} + q^-1 q^{-2N} and
    2 sin((2N+1)pi/2k) = -i (q q^{2N} - q^-1 q^{-2N}).
    """
    t = SolutionType.parse(t)
    if B is None:
        B = default_B(t)
    q = q_of(k)
    aa = AlgebraElement.word(A, AS)
    if t is SolutionType.BOSONIC:
        lhs = aa - AlgebraElement.word(AS, A)
        rhs = AlgebraElement.word(K, K, coeff=B * q) + AlgebraElement.word(KI, KI, coeff=B * q.inv())
    else:
        lhs = aa + AlgebraElement.word(AS, A)
        mi = cyc_root(4, 3)
        rhs = AlgebraElement.word(K, K, coeff=mi * B * q) + AlgebraElement.word(KI, KI, coeff=-mi * B * q.inv())
    return lhs - rhs


__all__ = [
    "DEFAULT_TOLERANCE",
    "FockRep",
    "PositivityError",
    "RelationResidual",
    "ResidualReport",
    "SolutionType",
    "build_fock_rep",
    "build_fock_rep_from_params",
    "equivalent_form_relation",
    "exact_action",
    "matrix_of",
    "spectrum_recursion",
    "spectrum_value",
    "verify_relations",
]
