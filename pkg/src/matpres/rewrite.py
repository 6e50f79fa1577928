"""Budgeted rewriting modulo a two-sided ideal, with replayable traces.

A rule ``lhs -> rhs`` stands for the ideal element ``lhs - rhs``.  One
reduction step takes a term ``c * u*lhs*v`` of the current polynomial and
subtracts ``c * u*(lhs - rhs)*v``, so every step stays inside the coset of the
ideal.  The redex strategy is fixed: the deglex-greatest reducible word, then
the first matching rule in system order, then the leftmost position.

Termination is not assumed (some rules raise degree); every normalization runs
under a step budget.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from . import _kernels
from .freealg import EMPTY, FreePoly, Word, default_names, deglex_key, format_word, sigma, sigma_word
from .rings import CoefficientRing

DEFAULT_BUDGET = 10**6


class BudgetExceeded(Exception):
    """Raised when a reduction needs more steps than allowed.

    ``trace`` holds the partial reduction for diagnosis.
    """

    def __init__(self, budget: int, trace: "ReductionTrace"):
        super().__init__(f"reduction budget of {budget} steps exhausted")
        self.budget = budget
        self.trace = trace


class CompletionError(Exception):
    def __init__(self, message, system=None, report=None):
        super().__init__(message)
        self.system = system
        self.report = report


class NonMonicLeadingTerm(CompletionError):
    pass


class RuleCapExceeded(CompletionError):
    pass


class TrivialQuotient(CompletionError):
    """The ideal contains a unit scalar, so the quotient ring is zero."""


@dataclass(frozen=True)
class RewriteRule:
    lhs: Word
    rhs: FreePoly
    id: str

    def __post_init__(self):
        if not self.lhs:
            raise ValueError("rule lhs must be a nonempty word")

    def ideal_element(self) -> FreePoly:
        return FreePoly._raw({self.lhs: self.rhs.ring.one()}, self.rhs.ring, self.rhs.nvars) - self.rhs

    def is_reduced(self) -> bool:
        """True when no rhs word contains the lhs."""
        return all(_kernels.find_subword(w, self.lhs, 0) < 0 for w in self.rhs)


class RewriteSystem:
    """Ordered monic rules over one coefficient ring and alphabet."""

    def __init__(self, rules: Sequence[RewriteRule], ring: CoefficientRing, nvars: int = 2,
                 names: Optional[Sequence[str]] = None):
        ids = [r.id for r in rules]
        if len(set(ids)) != len(ids):
            raise ValueError(f"duplicate rule ids in {ids}")
        if not ring.int_valued:
            raise ValueError("rewriting needs integer-valued coefficients (Z or Z/N)")
        for r in rules:
            if r.rhs.ring != ring or r.rhs.nvars != nvars:
                raise ValueError(f"rule {r.id} is over a different ring or alphabet")
            if any(not 0 <= a < nvars for a in r.lhs):
                raise ValueError(f"rule {r.id} uses a generator outside the alphabet")
        self.rules: Tuple[RewriteRule, ...] = tuple(rules)
        self.ring = ring
        self.nvars = nvars
        self.names = tuple(names) if names else default_names(nvars)
        self._by_id = {r.id: r for r in self.rules}
        self._lhss = tuple(r.lhs for r in self.rules)
        self._redex_cache: Dict[Word, Optional[Tuple[int, int]]] = {}

    @classmethod
    def from_relations(cls, relations: Sequence[FreePoly], leads: Optional[Sequence[Optional[Word]]] = None,
                       ids: Optional[Sequence[str]] = None, names=None) -> "RewriteSystem":
        """Orient each relation ``r = 0`` as ``lead -> lead - r/lc``.

        ``leads[i]`` picks the lhs word; None means the deglex-leading word.
        The coefficient of the chosen word must be a unit.
        """
        if not relations:
            raise ValueError("need at least one relation")
        ring, nvars = relations[0].ring, relations[0].nvars
        rules = []
        for i, rel in enumerate(relations):
            lead = leads[i] if leads is not None and leads[i] is not None else rel.leading_word()
            lead = tuple(lead)
            lc = rel.coefficient(lead)
            inv = ring.unit_inverse(lc) if not ring.is_zero(lc) else None
            if inv is None:
                raise NonMonicLeadingTerm(f"relation {rel} has non-unit coefficient {lc} on {lead}")
            monic = rel.scale(inv)
            rhs = FreePoly._raw({lead: ring.one()}, ring, nvars) - monic
            rid = ids[i] if ids is not None else str(i + 1)
            rules.append(RewriteRule(lead, rhs, rid))
        return cls(rules, ring, nvars, names)

    def __iter__(self):
        return iter(self.rules)

    def __len__(self):
        return len(self.rules)

    def rule(self, rid: str) -> RewriteRule:
        return self._by_id[rid]

    @property
    def lhss(self) -> Tuple[Word, ...]:
        return self._lhss

    def same_rules(self, other: "RewriteSystem") -> bool:
        return ([(r.id, r.lhs, r.rhs) for r in self.rules]
                == [(r.id, r.lhs, r.rhs) for r in other.rules])

    def redex_in_word(self, w: Word) -> Optional[Tuple[int, int]]:
        cache = self._redex_cache
        if w in cache:
            return cache[w]
        hit = _kernels.first_redex(w, self._lhss)
        if len(cache) < 500_000:
            cache[w] = hit
        return hit

    def is_normal(self, p: FreePoly) -> bool:
        return all(self.redex_in_word(w) is None for w in p)

    def sigma_image(self) -> "RewriteSystem":
        """Rules ``sigma(lhs) -> sigma(rhs)`` with ids prefixed ``sigma.``."""
        return RewriteSystem([RewriteRule(sigma_word(r.lhs), sigma(r.rhs), f"sigma.{r.id}") for r in self.rules],
                             self.ring, self.nvars, self.names)

    def format_rule(self, r: RewriteRule) -> str:
        return f"{format_word(r.lhs, self.names)} -> {r.rhs.format(self.names)}"

    def to_dict(self) -> dict:
        return {
            "ring": self.ring.name,
            "gens": list(self.names),
            "rules": [{"id": r.id, "lhs": format_word(r.lhs, self.names), "rhs": r.rhs.format(self.names)}
                      for r in self.rules],
        }

    def __repr__(self):
        return f"RewriteSystem([{'; '.join(self.format_rule(r) for r in self.rules)}] over {self.ring})"


# -- traces ------------------------------------------------------------

@dataclass(frozen=True)
class TraceStep:
    rule_id: str
    left: Word
    right: Word
    coeff: object


@dataclass
class ReductionTrace:
    """``start`` followed by steps; intermediate polynomials are recomputed on demand.

    The ring and alphabet come from ``start``; ``end`` is stored so that a
    trace can be inspected without replaying it.
    """

    start: FreePoly
    steps: List[TraceStep] = field(default_factory=list)
    end: Optional[FreePoly] = None

    def __post_init__(self):
        if self.end is None and not self.steps:
            self.end = self.start

    def __len__(self):
        return len(self.steps)

    def specs(self) -> List[Tuple[str, Word, Word, object]]:
        return [(s.rule_id, s.left, s.right, s.coeff) for s in self.steps]

    def states(self, sys: RewriteSystem) -> Iterator[Dict[Word, object]]:
        """Yield the term map after each step (one shared dict, mutated in place)."""
        terms = dict(self.start.terms)
        R = sys.ring
        for s in self.steps:
            _apply_in_place(terms, sys.rule(s.rule_id), s.left, s.right, s.coeff, R)
            yield terms

    def afters(self, sys: RewriteSystem) -> List[FreePoly]:
        R, nv = self.start.ring, self.start.nvars
        return [FreePoly._raw(dict(t), R, nv) for t in self.states(sys)]

    def lifted(self, u: Word, v: Word, sys: RewriteSystem) -> "ReductionTrace":
        """The same steps inside the context ``u * (.) * v``."""
        return build_trace(self.start.sandwich(u, v), [(r, u + a, b + v, c) for r, a, b, c in self.specs()], sys)

    def scaled(self, c, sys: RewriteSystem) -> "ReductionTrace":
        R = sys.ring
        return build_trace(self.start.scale(c), [(r, a, b, R.mul(R.coerce(c), k)) for r, a, b, k in self.specs()],
                           sys)

    def sigma_image(self, sigma_sys: RewriteSystem) -> "ReductionTrace":
        return build_trace(sigma(self.start),
                           [(f"sigma.{r}", sigma_word(b), sigma_word(a), c) for r, a, b, c in self.specs()],
                           sigma_sys)

    def to_text(self, sys: RewriteSystem) -> str:
        names = sys.names
        fmt = PolyFormatter(names, sys.ring)
        lines = [f"start: {fmt(self.start.terms)}"]
        for k, (s, terms) in enumerate(zip(self.steps, self.states(sys)), 1):
            lines.append(f'step {k}: rule={s.rule_id} left="{fmt.word(s.left)}" '
                         f'right="{fmt.word(s.right)}" coeff={s.coeff}')
            lines.append("  " + fmt(terms))
        lines.append(f"end: {fmt(self.end.terms)}")
        return "\n".join(lines) + "\n"


class PolyFormatter:
    """Fast repeated formatting of term maps (caches word strings)."""

    def __init__(self, names, ring):
        self.names = tuple(names)
        self.ring = ring
        self._words: Dict[Word, str] = {}

    def word(self, w: Word) -> str:
        s = self._words.get(w)
        if s is None:
            s = self._words[w] = format_word(w, self.names)
        return s

    def __call__(self, terms) -> str:
        R = self.ring
        if not (R.int_valued and R.modulus == 0):
            return FreePoly._raw(terms, R, len(self.names)).format(self.names, self.word)
        # inlined integer case; must agree with FreePoly.format
        if not terms:
            return "0"
        words = self._words
        out = []
        for w in sorted(terms, key=_dkey, reverse=True):
            c = terms[w]
            mono = words.get(w)
            if mono is None:
                mono = words[w] = format_word(w, self.names)
            a = -c if c < 0 else c
            body = mono if a == 1 else (str(a) if not w else f"{a}*{mono}")
            if out:
                out.append(("- " if c < 0 else "+ ") + body)
            else:
                out.append("-" + body if c < 0 else body)
        return " ".join(out)


def _dkey(w):
    return (len(w), w)


def _apply_in_place(terms: Dict[Word, object], rule: RewriteRule, u: Word, v: Word, c, R) -> None:
    # terms -= c * u * (lhs - rhs) * v
    for w, d in ((u + rule.lhs + v, R.neg(c)), *((u + rw + v, R.mul(c, rd)) for rw, rd in rule.rhs.items())):
        s = R.add(terms.get(w, R.zero()), d)
        if R.is_zero(s):
            terms.pop(w, None)
        else:
            terms[w] = s


def apply_step(before: FreePoly, rule: RewriteRule, u: Word, v: Word, c) -> FreePoly:
    """``before - c * u * (lhs - rhs) * v``."""
    terms = dict(before.terms)
    _apply_in_place(terms, rule, u, v, c, before.ring)
    return FreePoly._raw(terms, before.ring, before.nvars)


def build_trace(start: FreePoly, specs: Iterable[Tuple[str, Word, Word, object]],
                sys: RewriteSystem) -> ReductionTrace:
    """Assemble a trace from explicit ``(rule id, u, v, c)`` steps.

    The steps need not follow the redex strategy; each one still subtracts an
    element of the ideal, so the trace certifies ``start - end`` is in it.
    """
    R = sys.ring
    terms = dict(start.terms)
    steps = []
    for rid, u, v, c in specs:
        c = R.coerce(c)
        if R.is_zero(c):
            continue
        u, v = tuple(u), tuple(v)
        _apply_in_place(terms, sys.rule(rid), u, v, c, R)
        steps.append(TraceStep(rid, u, v, c))
    return ReductionTrace(start, steps, FreePoly._raw(terms, R, start.nvars))


def join_witness(trace_a: ReductionTrace, trace_b: ReductionTrace, sys: RewriteSystem) -> ReductionTrace:
    """From two traces with a common start, a trace ``end_a - end_b -> 0``."""
    if trace_a.start != trace_b.start:
        raise ValueError("traces must share their start")
    R = sys.ring
    specs = trace_b.specs() + [(r, a, b, R.neg(c)) for r, a, b, c in trace_a.specs()]
    return build_trace(trace_a.end - trace_b.end, specs, sys)


def concat_traces(first: ReductionTrace, second: ReductionTrace, sys: RewriteSystem) -> ReductionTrace:
    if first.end != second.start:
        raise ValueError("traces do not chain")
    return build_trace(first.start, first.specs() + second.specs(), sys)


# -- reduction ---------------------------------------------------------

def find_redex(p: FreePoly, sys: RewriteSystem) -> Optional[Tuple[Word, int, RewriteRule]]:
    """``(word, position, rule)`` of the next redex, or None in normal form."""
    for w in sorted(p.terms, key=deglex_key, reverse=True):
        hit = sys.redex_in_word(w)
        if hit is not None:
            i, pos = hit
            return w, pos, sys.rules[i]
    return None


def normalize(p: FreePoly, sys: RewriteSystem, budget: int = DEFAULT_BUDGET,
              record: bool = True) -> Tuple[FreePoly, ReductionTrace]:
    """Reduce ``p`` to normal form; raises :class:`BudgetExceeded`."""
    if budget < 0:
        raise ValueError("budget must be non-negative")
    if p.ring != sys.ring or p.nvars != sys.nvars:
        raise ValueError("polynomial and rewrite system differ in ring or alphabet")
    R = sys.ring
    rules = sys.rules
    terms = dict(p.terms)
    steps: List[TraceStep] = []
    nsteps = 0
    # words of the current polynomial that still contain a redex
    pending = {w for w in terms if sys.redex_in_word(w) is not None}
    while pending:
        w = max(pending, key=deglex_key)
        i, pos = sys.redex_in_word(w)
        if nsteps >= budget:
            raise BudgetExceeded(budget, ReductionTrace(p, steps, FreePoly._raw(dict(terms), R, p.nvars)))
        rule = rules[i]
        c = terms.pop(w)
        pending.discard(w)
        u, v = w[:pos], w[pos + len(rule.lhs):]
        for rw, d in rule.rhs.items():
            key = u + rw + v
            s = R.add(terms.get(key, R.zero()), R.mul(c, d))
            if R.is_zero(s):
                if key in terms:
                    del terms[key]
                    pending.discard(key)
            else:
                if key not in terms and sys.redex_in_word(key) is not None:
                    pending.add(key)
                terms[key] = s
        nsteps += 1
        if record:
            steps.append(TraceStep(rule.id, u, v, c))
    q = FreePoly._raw(terms, R, p.nvars)
    return q, ReductionTrace(p, steps, q)


def normal_form(p: FreePoly, sys: RewriteSystem, budget: int = DEFAULT_BUDGET) -> FreePoly:
    return normalize(p, sys, budget, record=False)[0]


# -- critical pairs ----------------------------------------------------

@dataclass(frozen=True)
class CriticalPair:
    word: Word
    first: str
    second: str
    kind: str  # "overlap" or "inclusion"
    branch_a: FreePoly
    branch_b: FreePoly
    step_a: Tuple[str, Word, Word]
    step_b: Tuple[str, Word, Word]


def critical_pairs(sys: RewriteSystem) -> List[CriticalPair]:
    """All overlap and inclusion ambiguities between ordered rule pairs."""
    out = []
    one = sys.ring.one()
    for ri in sys.rules:
        for rj in sys.rules:
            li, lj = ri.lhs, rj.lhs
            if ri is not rj and len(lj) <= len(li) and not (li == lj and sys.rules.index(rj) < sys.rules.index(ri)):
                p = _kernels.find_subword(li, lj, 0)
                while p >= 0:
                    u, v = li[:p], li[p + len(lj):]
                    start = FreePoly._raw({li: one}, sys.ring, sys.nvars)
                    out.append(CriticalPair(li, ri.id, rj.id, "inclusion",
                                            apply_step(start, ri, EMPTY, EMPTY, one),
                                            apply_step(start, rj, u, v, one),
                                            (ri.id, EMPTY, EMPTY), (rj.id, u, v)))
                    p = _kernels.find_subword(li, lj, p + 1)
            for k in range(1, min(len(li), len(lj))):
                if li[-k:] == lj[:k]:
                    w = li + lj[k:]
                    start = FreePoly._raw({w: one}, sys.ring, sys.nvars)
                    tail, head = lj[k:], li[:-k]
                    out.append(CriticalPair(w, ri.id, rj.id, "overlap",
                                            apply_step(start, ri, EMPTY, tail, one),
                                            apply_step(start, rj, head, EMPTY, one),
                                            (ri.id, EMPTY, tail), (rj.id, head, EMPTY)))
    return out


@dataclass
class PairOutcome:
    pair: CriticalPair
    status: str  # joined / not-joined / budget-exceeded
    normal_a: Optional[FreePoly] = None
    normal_b: Optional[FreePoly] = None

    def branch_traces(self, sys: RewriteSystem, budget: int = DEFAULT_BUDGET):
        """Full traces from the overlap word through each branch to normal form."""
        start = FreePoly._raw({self.pair.word: sys.ring.one()}, sys.ring, sys.nvars)
        out = []
        for rid, u, v in (self.pair.step_a, self.pair.step_b):
            first = build_trace(start, [(rid, u, v, 1)], sys)
            _, rest = normalize(first.end, sys, budget)
            out.append(concat_traces(first, rest, sys))
        return out


@dataclass
class ConfluenceReport:
    outcomes: List[PairOutcome]

    @property
    def all_joined(self) -> bool:
        return all(o.status == "joined" for o in self.outcomes)

    def summary(self) -> Dict[str, int]:
        out = {"joined": 0, "not-joined": 0, "budget-exceeded": 0}
        for o in self.outcomes:
            out[o.status] += 1
        return out


def check_local_confluence(sys: RewriteSystem, budget: int = DEFAULT_BUDGET) -> ConfluenceReport:
    outcomes = []
    for cp in critical_pairs(sys):
        try:
            a = normal_form(cp.branch_a, sys, budget)
            b = normal_form(cp.branch_b, sys, budget)
        except BudgetExceeded:
            outcomes.append(PairOutcome(cp, "budget-exceeded"))
            continue
        outcomes.append(PairOutcome(cp, "joined" if a == b else "not-joined", a, b))
    return ConfluenceReport(outcomes)


# -- completion --------------------------------------------------------

def _order_key(letter_order: Optional[Sequence[int]]):
    if letter_order is None:
        return deglex_key
    rank = {a: i for i, a in enumerate(letter_order)}
    return lambda w: (len(w), tuple(rank[a] for a in w))


def complete(sys: RewriteSystem, budget: int = DEFAULT_BUDGET, max_rules: int = 64,
             letter_order: Optional[Sequence[int]] = None) -> RewriteSystem:
    """Bounded Knuth-Bendix style completion.

    Unjoined critical pairs are turned into new rules oriented by the
    deglex-leading word (letters ranked by ``letter_order``, default x < y)
    after dividing by the leading coefficient, which must be a unit.  Rules
    whose lhs becomes reducible are retired and their ideal element re-queued.
    """
    key = _order_key(letter_order)
    R = sys.ring
    rules = list(sys.rules)
    counter = 0
    current = sys
    while True:
        report = check_local_confluence(current, budget)
        if any(o.status == "budget-exceeded" for o in report.outcomes):
            raise BudgetExceeded(budget, ReductionTrace(FreePoly.zero(R, sys.nvars)))
        bad = [o for o in report.outcomes if o.status == "not-joined"]
        if not bad:
            return current
        queue = [bad[0].normal_a - bad[0].normal_b]
        while queue:
            e = normal_form(queue.pop(0), current, budget)
            if e.is_zero():
                continue
            lead = max(e.terms, key=key)
            inv = R.unit_inverse(e.coefficient(lead))
            if inv is None:
                raise NonMonicLeadingTerm(
                    f"leading coefficient {e.coefficient(lead)} of {e.format(sys.names)} is not a unit",
                    current, report)
            e = e.scale(inv)
            if not lead:
                raise TrivialQuotient("ideal contains 1; the quotient is the zero ring", current, report)
            counter += 1
            new = RewriteRule(lead, FreePoly._raw({lead: R.one()}, R, sys.nvars) - e, f"c{counter}")
            kept = []
            for r in rules:
                if _kernels.find_subword(r.lhs, lead, 0) >= 0:
                    queue.append(r.ideal_element())
                else:
                    kept.append(r)
            rules = kept + [new]
            if len(rules) > max_rules:
                raise RuleCapExceeded(f"more than {max_rules} rules", current, report)
            current = RewriteSystem(rules, R, sys.nvars, sys.names)
            rules = [RewriteRule(r.lhs, normal_form(r.rhs, current, budget), r.id) for r in rules]
            current = RewriteSystem(rules, R, sys.nvars, sys.names)


def irreducible_words(sys: RewriteSystem, max_length: int) -> Tuple[List[Word], bool]:
    """Words containing no lhs, up to ``max_length``.

    Returns ``(words, finite)``; ``finite`` is True when some length level is
    empty, which (subwords of irreducible words being irreducible) means there
    are no longer ones either.
    """
    level = [EMPTY]
    words = [EMPTY]
    for _ in range(max_length):
        nxt = []
        for w in level:
            for a in range(sys.nvars):
                cand = w + (a,)
                # only suffixes can introduce a new occurrence
                if not any(len(l) <= len(cand) and cand[len(cand) - len(l):] == l for l in sys.lhss):
                    nxt.append(cand)
        if not nxt:
            return words, True
        words.extend(nxt)
        level = nxt
    return words, False
