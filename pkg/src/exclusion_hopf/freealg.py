"""Free *-algebras over cyclotomic scalars with oriented rewrite rules.

Words are tuples of generator names. A :class:`RewriteSystem` fixes a total
order on generators, a list of rules ``lhs -> rhs`` (``lhs`` a word), and
computes normal forms by leftmost-first rewriting with memoization.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Mapping, Sequence, Union

from .scalar import Cyclotomic, cyc_root, rational

Word = tuple[str, ...]
Scalar = Union[int, Fraction, Cyclotomic]

ONE: Word = ()


def _as_scalar(c: Scalar) -> Cyclotomic:
    if isinstance(c, Cyclotomic):
        return c
    return rational(c)


class NonTerminationError(RuntimeError):
    """Rewriting exceeded its step budget or revisited a word."""

    def __init__(self, word: Word, message: str) -> None:
        super().__init__(f"{message}: {' '.join(word) or '1'}")
        self.word = word


@dataclass(frozen=True)
class Generator:
    name: str
    degree: int = 0
    star_partner: str | None = None
    nilpotency: int | None = None
    central: bool = False

    @property
    def star(self) -> str:
        return self.star_partner if self.star_partner is not None else self.name


class AlgebraElement:
    """Finite linear combination of words with nonzero cyclotomic coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Word, Scalar] | None = None) -> None:
        self.terms: dict[Word, Cyclotomic] = {}
        if terms:
            for w, c in terms.items():
                c = _as_scalar(c)
                if not c.is_zero():
                    self.terms[tuple(w)] = c

    @classmethod
    def word(cls, *names: str, coeff: Scalar = 1) -> AlgebraElement:
        return cls({tuple(names): coeff})

    @classmethod
    def scalar(cls, c: Scalar) -> AlgebraElement:
        return cls({ONE: c})

    @classmethod
    def zero(cls) -> AlgebraElement:
        return cls()

    @classmethod
    def _from_clean(cls, terms: dict[Word, Cyclotomic]) -> AlgebraElement:
        obj = object.__new__(cls)
        obj.terms = terms
        return obj

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __iter__(self) -> Iterator[tuple[Word, Cyclotomic]]:
        return iter(self.terms.items())

    def __len__(self) -> int:
        return len(self.terms)

    def coeff(self, word: Sequence[str]) -> Cyclotomic:
        return self.terms.get(tuple(word), rational(0))

    def __add__(self, other: AlgebraElement | Scalar) -> AlgebraElement:
        if not isinstance(other, AlgebraElement):
            other = AlgebraElement.scalar(other)
        out = dict(self.terms)
        _accumulate(out, other.terms.items())
        return AlgebraElement._from_clean(out)

    __radd__ = __add__

    def __neg__(self) -> AlgebraElement:
        return AlgebraElement._from_clean({w: -c for w, c in self.terms.items()})

    def __sub__(self, other: AlgebraElement | Scalar) -> AlgebraElement:
        if not isinstance(other, AlgebraElement):
            other = AlgebraElement.scalar(other)
        return self + (-other)

    def __rsub__(self, other: Scalar) -> AlgebraElement:
        return (-self) + other

    def __mul__(self, other: AlgebraElement | Scalar) -> AlgebraElement:
        if not isinstance(other, AlgebraElement):
            c = _as_scalar(other)
            if c.is_zero():
                return AlgebraElement()
            return AlgebraElement._from_clean({w: v * c for w, v in self.terms.items()})
        out: dict[Word, Cyclotomic] = {}
        _accumulate(
            out,
            ((u + v, a * b) for u, a in self.terms.items() for v, b in other.terms.items()),
        )
        return AlgebraElement._from_clean(out)

    def __rmul__(self, other: Scalar) -> AlgebraElement:
        return self * other

    def __pow__(self, e: int) -> AlgebraElement:
        out = AlgebraElement.scalar(1)
        for _ in range(e):
            out = out * self
        return out

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction, Cyclotomic)):
            other = AlgebraElement.scalar(other)
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        if self.terms.keys() != other.terms.keys():
            return False
        return all(c == other.terms[w] for w, c in self.terms.items())

    __hash__ = None  # type: ignore[assignment]

    def max_abs_coeff(self) -> float:
        return max((abs(c.to_complex()) for c in self.terms.values()), default=0.0)

    def words(self) -> list[Word]:
        return list(self.terms)

    def map_coeffs(self, f: Callable[[Cyclotomic], Cyclotomic]) -> AlgebraElement:
        return AlgebraElement({w: f(c) for w, c in self.terms.items()})

    def substitute(self, mapping: Mapping[str, AlgebraElement | Scalar]) -> AlgebraElement:
        """Replace generators by elements (letters not in ``mapping`` are kept)."""
        images: dict[str, AlgebraElement] = {}
        for k, v in mapping.items():
            images[k] = v if isinstance(v, AlgebraElement) else AlgebraElement.scalar(v)
        out = AlgebraElement()
        for w, c in self.terms.items():
            term = AlgebraElement.scalar(c)
            for g in w:
                term = term * images.get(g, AlgebraElement.word(g))
                if term.is_zero():
                    break
            out = out + term
        return out

    def __repr__(self) -> str:
        return f"AlgebraElement({self})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for w, c in sorted(self.terms.items(), key=lambda t: (len(t[0]), t[0])):
            word = " ".join(w) if w else "1"
            if c == 1:
                parts.append(word)
            elif c == -1:
                parts.append(f"-{word}")
            else:
                parts.append(f"({c}) {word}" if w else f"({c})")
        return " + ".join(parts).replace("+ -", "- ")


def _accumulate(out: dict[Word, Cyclotomic], items: Iterable[tuple[Word, Cyclotomic]]) -> None:
    for w, c in items:
        prev = out.get(w)
        if prev is None:
            if not c.is_zero():
                out[w] = c
        else:
            s = prev + c
            if s.is_zero():
                del out[w]
            else:
                out[w] = s


def gen(name: str) -> AlgebraElement:
    return AlgebraElement.word(name)


@dataclass(frozen=True)
class Rule:
    lhs: Word
    rhs: AlgebraElement
    label: str = ""
    derived: bool = False  # a consequence of other rules, not a defining relation
    auto: bool = False  # added by RewriteSystem itself (power and central rules)

    def relation(self) -> AlgebraElement:
        """The defining relation as an element equal to zero."""
        return AlgebraElement.word(*self.lhs) - self.rhs


class RewriteSystem:
    """Generators in a total order plus oriented rules and a step budget.

    Immutable after construction; normal forms of words are memoized.
    Nilpotent generators get a power rule ``g^k -> 0`` automatically, and a
    central generator c gets ``g c -> c g`` for every generator g above it.
    """

    def __init__(
        self,
        generators: Sequence[Generator],
        rules: Sequence[Rule],
        step_budget: int = 10**6,
        name: str = "",
    ) -> None:
        self.name = name
        self.generators: dict[str, Generator] = {}
        for g in generators:
            if g.name in self.generators:
                raise ValueError(f"duplicate generator {g.name}")
            self.generators[g.name] = g
        self.order = {name: i for i, name in enumerate(self.generators)}
        for g in self.generators.values():
            partner = self.generators.get(g.star)
            if partner is None or partner.star != g.name:
                raise ValueError(f"star partner of {g.name} is not an involution")
            if partner.degree != -g.degree:
                raise ValueError(f"star partners {g.name}, {partner.name} need opposite degree")
        all_rules = list(rules)
        seen = {r.lhs for r in all_rules}
        for g in self.generators.values():
            if g.nilpotency is not None:
                lhs = (g.name,) * g.nilpotency
                if lhs not in seen:
                    all_rules.append(Rule(lhs, AlgebraElement(), f"{g.name}^{g.nilpotency} = 0", auto=True))
                    seen.add(lhs)
        for c in self.generators.values():
            if not c.central:
                continue
            for g in self.generators:
                lhs = (g, c.name)
                if self.order[g] > self.order[c.name] and lhs not in seen:
                    all_rules.append(Rule(lhs, AlgebraElement.word(c.name, g), f"{g} {c.name} = {c.name} {g}", auto=True))
                    seen.add(lhs)
        for r in all_rules:
            for w in (r.lhs, *r.rhs.words()):
                for letter in w:
                    if letter not in self.generators:
                        raise ValueError(f"undeclared generator {letter!r} in rule {r.label}")
        self.rules: tuple[Rule, ...] = tuple(all_rules)
        self._by_first: dict[str, list[Rule]] = {}
        for r in self.rules:
            if not r.lhs:
                raise ValueError("rule with empty left side")
            self._by_first.setdefault(r.lhs[0], []).append(r)
        self.step_budget = step_budget
        self._cache: dict[Word, dict[Word, Cyclotomic]] = {}

    # -- word order & grading ------------------------------------------------

    def word_key(self, w: Word) -> tuple[int, tuple[int, ...]]:
        """Degree-lexicographic key: length first, then generator order."""
        return (len(w), tuple(self.order[g] for g in w))

    def degree(self, w: Word) -> int:
        return sum(self.generators[g].degree for g in w)

    def element_degrees(self, x: AlgebraElement) -> set[int]:
        return {self.degree(w) for w in x.words()}

    def rule_for(self, lhs: Sequence[str]) -> Rule | None:
        lhs = tuple(lhs)
        for r in self._by_first.get(lhs[0], ()):
            if r.lhs == lhs:
                return r
        return None

    def relations(self, defining_only: bool = False) -> list[tuple[str, AlgebraElement]]:
        return [
            (r.label or " ".join(r.lhs), r.relation())
            for r in self.rules
            if not (defining_only and r.derived)
        ]

    def check_orientation(self) -> list[str]:
        """Rules whose left word is not above every word on the right."""
        bad = []
        for r in self.rules:
            key = self.word_key(r.lhs)
            if any(self.word_key(w) >= key for w in r.rhs.words()):
                bad.append(r.label or " ".join(r.lhs))
        return bad

    # -- rewriting -----------------------------------------------------------

    def _redex(self, w: Word) -> tuple[int, Rule] | None:
        by_first = self._by_first
        for i, g in enumerate(w):
            for r in by_first.get(g, ()):
                n = len(r.lhs)
                if w[i : i + n] == r.lhs:
                    return i, r
        return None

    def is_normal(self, w: Word) -> bool:
        return self._redex(w) is None

    def _step(self, w: Word, i: int, r: Rule) -> list[tuple[Word, Cyclotomic]]:
        pre, post = w[:i], w[i + len(r.lhs) :]
        return [(pre + u + post, c) for u, c in r.rhs.terms.items()]

    def normal_form_word(self, w: Word) -> dict[Word, Cyclotomic]:
        cache = self._cache
        hit = cache.get(w)
        if hit is not None:
            return hit
        steps = 0
        pending: dict[Word, list[tuple[Word, Cyclotomic]]] = {}
        stack = [w]
        while stack:
            u = stack[-1]
            if u in cache:
                stack.pop()
                continue
            red = pending.get(u)
            if red is None:
                found = self._redex(u)
                if found is None:
                    cache[u] = {u: rational(1)}
                    stack.pop()
                    continue
                steps += 1
                if steps > self.step_budget:
                    raise NonTerminationError(u, "rewrite step budget exhausted")
                red = self._step(u, *found)
                pending[u] = red
            missing = [v for v, _ in red if v not in cache]
            if missing:
                for v in missing:
                    if v in pending:
                        raise NonTerminationError(v, "rewriting cycles through word")
                stack.extend(missing)
                continue
            out: dict[Word, Cyclotomic] = {}
            for v, c in red:
                _accumulate(out, ((x, c * d) for x, d in cache[v].items()))
            cache[u] = out
            del pending[u]
            stack.pop()
        return cache[w]

    def normal_form(self, x: AlgebraElement) -> AlgebraElement:
        out: dict[Word, Cyclotomic] = {}
        for w, c in x.terms.items():
            _accumulate(out, ((v, c * d) for v, d in self.normal_form_word(w).items()))
        return AlgebraElement._from_clean(out)

    def reduce_once(self, x: AlgebraElement) -> AlgebraElement:
        """Apply one leftmost rewrite to every reducible term."""
        out: dict[Word, Cyclotomic] = {}
        for w, c in x.terms.items():
            found = self._redex(w)
            if found is None:
                _accumulate(out, [(w, c)])
            else:
                _accumulate(out, ((v, c * d) for v, d in self._step(w, *found)))
        return AlgebraElement._from_clean(out)

    # -- involution ----------------------------------------------------------

    def star(self, x: AlgebraElement) -> AlgebraElement:
        return star_involution(x, self)

    def extended(
        self,
        generators: Sequence[Generator] = (),
        rules: Sequence[Rule] = (),
        name: str | None = None,
        prepend: bool = False,
    ) -> RewriteSystem:
        base = list(self.generators.values())
        gens = list(generators) + base if prepend else base + list(generators)
        own = [r for r in self.rules if not r.auto]
        return RewriteSystem(gens, own + list(rules), self.step_budget, name or self.name)

    def __repr__(self) -> str:
        return f"RewriteSystem({self.name!r}, {len(self.generators)} generators, {len(self.rules)} rules)"


def normal_form(x: AlgebraElement, rs: RewriteSystem) -> AlgebraElement:
    return rs.normal_form(x)


def star_involution(x: AlgebraElement, rs: RewriteSystem | Mapping[str, str]) -> AlgebraElement:
    """Reverse words, swap each generator with its partner, conjugate coefficients."""
    if isinstance(rs, RewriteSystem):
        partner = {g.name: g.star for g in rs.generators.values()}
    else:
        partner = dict(rs)
    out: dict[Word, Cyclotomic] = {}
    _accumulate(
        out,
        ((tuple(partner[g] for g in reversed(w)), c.conj()) for w, c in x.terms.items()),
    )
    return AlgebraElement._from_clean(out)


# -- local confluence --------------------------------------------------------

@dataclass
class CriticalPairFailure:
    word: Word
    rules: tuple[str, str]
    left: AlgebraElement | None
    right: AlgebraElement | None
    error: str = ""

    def __str__(self) -> str:
        w = " ".join(self.word)
        if self.error:
            return f"{w}: {self.error}"
        return f"{w}: [{self.rules[0]}] -> {self.left}  vs  [{self.rules[1]}] -> {self.right}"


def critical_words(rs: RewriteSystem, max_word_len: int) -> list[tuple[Word, int, Rule, int, Rule]]:
    """Overlap and inclusion ambiguities of length <= max_word_len."""
    found = []
    seen = set()
    rules = rs.rules
    for i, r1 in enumerate(rules):
        l1 = r1.lhs
        for j, r2 in enumerate(rules):
            l2 = r2.lhs
            # proper overlaps: suffix of l1 == prefix of l2
            for ov in range(1, min(len(l1), len(l2))):
                if len(l1) + len(l2) - ov > max_word_len:
                    continue
                if l1[len(l1) - ov :] == l2[:ov]:
                    w = l1 + l2[ov:]
                    key = (w, 0, i, len(l1) - ov, j)
                    if key not in seen:
                        seen.add(key)
                        found.append((w, 0, r1, len(l1) - ov, r2))
            # inclusions: l2 inside l1
            if i != j and len(l2) <= len(l1) <= max_word_len:
                for p in range(len(l1) - len(l2) + 1):
                    if l1[p : p + len(l2)] == l2:
                        key = (l1, 0, i, p, j)
                        if key not in seen:
                            seen.add(key)
                            found.append((l1, 0, r1, p, r2))
    return found


def check_local_confluence(rs: RewriteSystem, max_word_len: int = 3) -> list[CriticalPairFailure]:
    """Resolve every critical pair up to ``max_word_len``; return the failures."""
    if max_word_len < 3:
        raise ValueError("max_word_len must be at least 3")
    failures = []
    for w, p1, r1, p2, r2 in critical_words(rs, max_word_len):
        labels = (r1.label or " ".join(r1.lhs), r2.label or " ".join(r2.lhs))
        try:
            left = rs.normal_form(AlgebraElement(dict(_collect(rs._step(w, p1, r1)))))
            right = rs.normal_form(AlgebraElement(dict(_collect(rs._step(w, p2, r2)))))
        except NonTerminationError as exc:
            failures.append(CriticalPairFailure(w, labels, None, None, str(exc)))
            continue
        if left != right:
            failures.append(CriticalPairFailure(w, labels, left, right))
    return failures


def _collect(items: Iterable[tuple[Word, Cyclotomic]]) -> dict[Word, Cyclotomic]:
    out: dict[Word, Cyclotomic] = {}
    _accumulate(out, items)
    return out


# -- tensor powers -------------------------------------------------------------

PureTensor = tuple[Word, ...]


class TensorElement:
    """Element of an n-fold tensor power, stored as pure tensors of words.

    Multiplication follows the braided rule: moving a homogeneous letter block
    ``x`` in slot i past a block ``y`` in an earlier slot j < i multiplies by
    ``crossing(deg x, deg y)``. Slot words are not normal-ordered until
    :meth:`normal_form` is called.
    """

    __slots__ = ("slots", "terms")

    def __init__(self, slots: int, terms: Mapping[PureTensor, Scalar] | None = None) -> None:
        self.slots = slots
        self.terms: dict[PureTensor, Cyclotomic] = {}
        if terms:
            for t, c in terms.items():
                if len(t) != slots:
                    raise ValueError("pure tensor has wrong number of slots")
                c = _as_scalar(c)
                if not c.is_zero():
                    self.terms[tuple(tuple(w) for w in t)] = c

    @classmethod
    def pure(cls, *words: Sequence[str], coeff: Scalar = 1) -> TensorElement:
        return cls(len(words), {tuple(tuple(w) for w in words): coeff})

    @classmethod
    def embed(cls, x: AlgebraElement, slot: int, slots: int) -> TensorElement:
        out = {}
        for w, c in x.terms.items():
            t = [ONE] * slots
            t[slot] = w
            out[tuple(t)] = c
        return cls(slots, out)

    @classmethod
    def from_parts(cls, parts: Sequence[AlgebraElement]) -> TensorElement:
        """x_1 (x) x_2 (x) ... as a plain (unbraided) tensor of elements."""
        terms: dict[PureTensor, Cyclotomic] = {(): rational(1)}
        for x in parts:
            new: dict[PureTensor, Cyclotomic] = {}
            for t, c in terms.items():
                _accumulate_t(new, ((t + (w,), c * d) for w, d in x.terms.items()))
            terms = new
        return cls(len(parts), terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: TensorElement) -> TensorElement:
        out = dict(self.terms)
        _accumulate_t(out, other.terms.items())
        return _tensor(self.slots, out)

    def __neg__(self) -> TensorElement:
        return _tensor(self.slots, {t: -c for t, c in self.terms.items()})

    def __sub__(self, other: TensorElement) -> TensorElement:
        return self + (-other)

    def scale(self, c: Scalar) -> TensorElement:
        c = _as_scalar(c)
        if c.is_zero():
            return TensorElement(self.slots)
        return _tensor(self.slots, {t: v * c for t, v in self.terms.items()})

    def __rmul__(self, c: Scalar) -> TensorElement:
        return self.scale(c)

    def mul(self, other: TensorElement, degree: Callable[[Word], int],
            crossing: Callable[[int, int], Cyclotomic] | None = None) -> TensorElement:
        """Braided product; ``crossing=None`` means the plain tensor product."""
        if other.slots != self.slots:
            raise ValueError("slot mismatch")
        out: dict[PureTensor, Cyclotomic] = {}
        items = []
        for s, a in self.terms.items():
            for t, b in other.terms.items():
                c = a * b
                if crossing is not None:
                    for i in range(1, self.slots):
                        if not s[i]:
                            continue
                        dx = degree(s[i])
                        if dx == 0:
                            continue
                        for j in range(i):
                            if t[j]:
                                dy = degree(t[j])
                                if dy:
                                    c = c * crossing(dx, dy)
                items.append((tuple(u + v for u, v in zip(s, t)), c))
        _accumulate_t(out, items)
        return _tensor(self.slots, out)

    def normal_form(self, rs: RewriteSystem) -> TensorElement:
        out: dict[PureTensor, Cyclotomic] = {}
        for t, c in self.terms.items():
            partial: dict[PureTensor, Cyclotomic] = {(): c}
            for w in t:
                nf = rs.normal_form_word(w)
                new: dict[PureTensor, Cyclotomic] = {}
                _accumulate_t(new, ((p + (v,), a * d) for p, a in partial.items() for v, d in nf.items()))
                partial = new
                if not partial:
                    break
            _accumulate_t(out, partial.items())
        return _tensor(self.slots, out)

    def max_abs_coeff(self) -> float:
        return max((abs(c.to_complex()) for c in self.terms.values()), default=0.0)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TensorElement):
            return NotImplemented
        if self.slots != other.slots or self.terms.keys() != other.terms.keys():
            return False
        return all(c == other.terms[t] for t, c in self.terms.items())

    __hash__ = None  # type: ignore[assignment]

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for t, c in sorted(self.terms.items()):
            body = " (x) ".join(" ".join(w) or "1" for w in t)
            parts.append(body if c == 1 else f"({c}) {body}")
        return " + ".join(parts)

    __repr__ = __str__


def _accumulate_t(out: dict, items: Iterable) -> None:
    _accumulate(out, items)  # same logic; keys are tuples either way


def _tensor(slots: int, terms: dict[PureTensor, Cyclotomic]) -> TensorElement:
    obj = object.__new__(TensorElement)
    obj.slots = slots
    obj.terms = terms
    return obj


# -- text presentation format ------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<zeta>zeta\(\s*(?P<zm>\d+)\s*,\s*(?P<zj>-?\d+)\s*\))"
    r"|(?P<num>\d+(?:/\d+)?)"
    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_]*\**)"
    r"|(?P<op>[+\-*()]))"
)


class PresentationError(ValueError):
    pass


def _tokenize(text: str, line_no: int) -> list[tuple[str, str]]:
    pos, out = 0, []
    text = text.rstrip()
    while pos < len(text):
        mt = _TOKEN.match(text, pos)
        if mt is None or mt.end() == pos:
            raise PresentationError(f"line {line_no}: cannot parse near {text[pos:]!r}")
        pos = mt.end()
        kind = mt.lastgroup if mt.lastgroup not in ("zm", "zj") else "zeta"
        if mt.group("zeta"):
            out.append(("zeta", f"{mt.group('zm')},{mt.group('zj')}"))
        elif mt.group("num"):
            out.append(("num", mt.group("num")))
        elif mt.group("ident"):
            out.append(("ident", mt.group("ident")))
        else:
            out.append(("op", mt.group("op")))
        del kind
    return out


def parse_polynomial(text: str, generators: Mapping[str, Generator], line_no: int = 0) -> AlgebraElement:
    """Parse ``c1 w1 + c2 w2 - ...`` where words are space-separated names."""
    tokens = _tokenize(text, line_no)
    total = AlgebraElement()
    sign = 1
    coeff: Cyclotomic = rational(1)
    word: list[str] = []
    started = False

    def flush() -> None:
        nonlocal total, coeff, word, sign, started
        if started:
            total = total + AlgebraElement.word(*word, coeff=coeff * sign)
        coeff, word, sign, started = rational(1), [], 1, False

    for kind, val in tokens:
        if kind == "op" and val in "+-":
            if started:
                flush()
            if val == "-":
                sign = -sign
            continue
        if kind == "op":
            continue  # '*' and parentheses are separators only
        started = True
        if kind == "num":
            coeff = coeff * Fraction(val)
        elif kind == "zeta":
            m, j = (int(v) for v in val.split(","))
            coeff = coeff * cyc_root(m, j)
        else:
            word.extend(_split_ident(val, generators, line_no))
    flush()
    return AlgebraElement({w: c for w, c in total.terms.items()})


def _split_ident(name: str, generators: Mapping[str, Generator], line_no: int) -> list[str]:
    if name in generators:
        return [name]
    base = name.rstrip("*")
    if base in generators:
        # "qN*a" style: trailing '*' was a separator
        return [base]
    raise PresentationError(f"line {line_no}: undeclared generator {name!r}")


def orient_relation(rel: AlgebraElement, order: Sequence[str], label: str = "", derived: bool = False) -> Rule:
    """Turn ``rel = 0`` into a rule whose left side is the deg-lex greatest word."""
    if rel.is_zero():
        raise ValueError("cannot orient the zero relation")
    rank = {g: i for i, g in enumerate(order)}
    lead = max(rel.words(), key=lambda w: (len(w), tuple(rank[g] for g in w)))
    c = rel.terms[lead]
    rest = AlgebraElement({w: -v / c for w, v in rel.terms.items() if w != lead})
    return Rule(lead, rest, label, derived)


def parse_presentation(text: str, step_budget: int = 10**6, name: str = "custom") -> RewriteSystem:
    """Read a presentation: ``gen`` declarations then ``lhs = rhs`` relations.

    ``gen NAME [deg=D] [star=PARTNER] [nil=K] [central]`` declares generators
    in increasing order; every relation is oriented so that its greatest word
    (degree-lexicographic) becomes the rule's left side.
    """
    generators: dict[str, Generator] = {}
    relations: list[tuple[int, str, str]] = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("gen "):
            parts = line.split()
            gname = parts[1]
            opts: dict[str, str] = {}
            for p in parts[2:]:
                key, _, val = p.partition("=")
                opts[key] = val
            unknown = set(opts) - {"deg", "star", "nil", "central"}
            if unknown:
                raise PresentationError(f"line {line_no}: unknown option(s) {sorted(unknown)}")
            generators[gname] = Generator(
                gname,
                degree=int(opts.get("deg", 0)),
                star_partner=opts.get("star") or None,
                nilpotency=int(opts["nil"]) if opts.get("nil") else None,
                central="central" in opts,
            )
            continue
        if "=" not in line:
            raise PresentationError(f"line {line_no}: expected 'lhs = rhs'")
        lhs, rhs = line.split("=", 1)
        relations.append((line_no, lhs, rhs))
    if not generators:
        raise PresentationError("no generators declared")
    order = list(generators)
    rules = []
    for line_no, lhs, rhs in relations:
        rel = parse_polynomial(lhs, generators, line_no) - parse_polynomial(rhs, generators, line_no)
        if rel.is_zero():
            continue
        rules.append(orient_relation(rel, order, f"{lhs.strip()} = {rhs.strip()}"))
    return RewriteSystem(list(generators.values()), rules, step_budget, name)


__all__ = [
    "orient_relation",
    "AlgebraElement",
    "CriticalPairFailure",
    "Generator",
    "NonTerminationError",
    "ONE",
    "PresentationError",
    "RewriteSystem",
    "Rule",
    "TensorElement",
    "Word",
    "check_local_confluence",
    "critical_words",
    "gen",
    "normal_form",
    "parse_polynomial",
    "parse_presentation",
    "star_involution",
]
