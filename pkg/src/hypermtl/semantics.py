"""Pointwise evaluation of MTL and prenex HyperMTL on finite timed words.

Two readings share the temporal clauses and differ only on literals:

* single-word reading (mtl_at / mtl_sat): positions are the word's
  event times; a trace-indexed atom reads one track of the letter, and
  per-trace presence coincides with presence of the position;
* assignment reading (hyper_matrix_at / hyper_eval): positions are the
  union of event times of the assigned traces, and per-trace literals
  test the individual trace at that instant.

Evaluation anchors at time 0, which need not be an event.  Negation on
non-atoms is evaluated through negation normal form, so a negated atom
still requires an event; Bottom is true exactly off events.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional, Sequence, Union

from .formulas import (
    EXISTS, And, Atom, Bottom, DualHist, DualSince, DualUntil, Formula, Hist,
    HyperFormula, Implies, Not, Or, Since, Top, Until, _neg,
)
from .traces import TimedWord, stutter_align

__all__ = [
    "EvalResult", "hyper_eval", "hyper_matrix_at", "mtl_at", "mtl_sat",
    "stutter_align",
]


class _WordWorld:
    """Literal evaluation over one (possibly multi-track) word."""

    def __init__(self, word: TimedWord, var_index: Optional[Mapping[Optional[str], int]]):
        self.word = word
        self.var_index = dict(var_index) if var_index else {None: 0}
        self.times: tuple[Fraction, ...] = word.times
        self._letters = {t: letter for letter, t in word.events}

    def _track(self, var: Optional[str]) -> int:
        if var not in self.var_index:
            raise ValueError(f"no track for trace variable {var!r}")
        return self.var_index[var]

    def present(self, t: Fraction, var: Optional[str]) -> bool:
        if var is not None:
            self._track(var)
        return t in self._letters

    def atom(self, t: Fraction, prop: str, var: Optional[str]) -> bool:
        letter = self._letters.get(t)
        return letter is not None and prop in letter[self._track(var)]


class _AssignmentWorld:
    """Literal evaluation over an assignment of independent traces."""

    def __init__(self, assignment: Mapping[str, TimedWord]):
        for word in assignment.values():
            if word.arity != 1:
                raise ValueError("assignments bind single-track traces")
        self.assignment = dict(assignment)
        times: set[Fraction] = set()
        for word in assignment.values():
            times |= word.time_set
        self.times = tuple(sorted(times))
        self._sets = {var: word.time_set for var, word in assignment.items()}

    def _trace(self, var: Optional[str]) -> TimedWord:
        if var is None or var not in self.assignment:
            raise ValueError(f"no trace bound to variable {var!r}")
        return self.assignment[var]

    def present(self, t: Fraction, var: Optional[str]) -> bool:
        if var is None:
            return any(t in s for s in self._sets.values())
        self._trace(var)
        return t in self._sets[var]

    def atom(self, t: Fraction, prop: str, var: Optional[str]) -> bool:
        props = self._trace(var).props_at(t)
        return props is not None and prop in props


def _evaluate(world, t: Fraction, psi: Formula,
              memo: Optional[dict]) -> bool:
    if memo is not None:
        key = (psi, t)
        cached = memo.get(key)
        if cached is not None:
            return cached
    value = _clause(world, t, psi, memo)
    if memo is not None:
        memo[(psi, t)] = value
    return value


def _clause(world, t: Fraction, psi: Formula, memo) -> bool:
    times = world.times
    match psi:
        case Top(var):
            return world.present(t, var)
        case Bottom(var):
            return not world.present(t, var)
        case Atom(prop, var):
            return world.atom(t, prop, var)
        case Not(Atom(prop, var)):
            return world.present(t, var) and not world.atom(t, prop, var)
        case Not(arg):
            return _evaluate(world, t, _neg(arg), memo)
        case And(left, right):
            return _evaluate(world, t, left, memo) and _evaluate(world, t, right, memo)
        case Or(left, right):
            return _evaluate(world, t, left, memo) or _evaluate(world, t, right, memo)
        case Implies(left, right):
            # implication abbreviates ~left | right under strong negation,
            # which differs from the classical reading off events
            return (_evaluate(world, t, _neg(left), memo)
                    or _evaluate(world, t, right, memo))
        case Until(left, right, interval):
            for tp in times:
                if tp <= t:
                    continue
                if interval.contains(tp - t) and _evaluate(world, tp, right, memo):
                    if all(_evaluate(world, tpp, left, memo)
                           for tpp in times if t < tpp < tp):
                        return True
            return False
        case DualUntil(left, right, interval):
            for tp in times:
                if tp <= t or not interval.contains(tp - t):
                    continue
                if _evaluate(world, tp, right, memo):
                    continue
                if not any(_evaluate(world, tpp, left, memo)
                           for tpp in times if t < tpp < tp):
                    return False
            return True
        case Since(left, right, interval):
            for tp in times:
                if tp >= t:
                    break
                if interval.contains(t - tp) and _evaluate(world, tp, right, memo):
                    if all(_evaluate(world, tpp, left, memo)
                           for tpp in times if tp < tpp < t):
                        return True
            return False
        case DualSince(left, right, interval):
            for tp in times:
                if tp >= t:
                    break
                if not interval.contains(t - tp):
                    continue
                if _evaluate(world, tp, right, memo):
                    continue
                if not any(_evaluate(world, tpp, left, memo)
                           for tpp in times if tp < tpp < t):
                    return False
            return True
        case Hist(arg, interval):
            latest = None
            for tp in times:
                if tp >= t:
                    break
                if _evaluate(world, tp, arg, memo):
                    latest = tp
            return latest is not None and interval.contains(t - latest)
        case DualHist(arg, interval):
            return not _clause(world, t, Hist(arg, interval), memo)
    raise TypeError(f"not a formula: {psi!r}")


def mtl_at(word: TimedWord, t: Fraction | int, psi: Formula,
           var_index: Optional[Mapping[Optional[str], int]] = None,
           memoize: bool = True) -> bool:
    """Truth of psi at instant t over one word.

    var_index maps trace variables (and None for bare atoms) to tracks;
    by default bare atoms read track 0 of a single-track word.
    """
    world = _WordWorld(word, var_index)
    return _evaluate(world, Fraction(t), psi, {} if memoize else None)


def mtl_sat(word: TimedWord, psi: Formula,
            var_index: Optional[Mapping[Optional[str], int]] = None,
            memoize: bool = True) -> bool:
    """Truth at the anchor instant 0 (an event may or may not sit there)."""
    return mtl_at(word, Fraction(0), psi, var_index, memoize)


def hyper_matrix_at(assignment: Mapping[str, TimedWord], t: Fraction | int,
                    psi: Formula, memoize: bool = True) -> bool:
    """Truth of a matrix at instant t under a trace assignment."""
    world = _AssignmentWorld(assignment)
    return _evaluate(world, Fraction(t), psi, {} if memoize else None)


@dataclass(frozen=True)
class EvalResult:
    holds: bool
    # Deciding branch through the quantifier tree: a satisfying assignment
    # for purely existential prefixes, a falsifying one for purely
    # universal prefixes; only indicative under alternation.
    witness: Optional[dict[str, str]]
    checked: int


TraceSet = Union[Mapping[str, TimedWord], Sequence[TimedWord]]


def _named_traces(traces: TraceSet) -> list[tuple[str, TimedWord]]:
    if isinstance(traces, Mapping):
        items = list(traces.items())
    else:
        items = [(str(i), w) for i, w in enumerate(traces)]
    if not items:
        raise ValueError("trace sets must be nonempty")
    for _, word in items:
        if word.arity != 1:
            raise ValueError("trace sets contain single-track traces")
    return items


def hyper_eval(traces: TraceSet, phi: HyperFormula,
               semantics: str = "async") -> EvalResult:
    """Enumerate quantifier assignments over the trace set.

    Synchronous semantics restricts every quantifier after the first to
    traces whose event-time set equals that of the traces bound so far.
    The checked counter reports how many complete assignments reached
    the matrix.
    """
    if semantics not in ("async", "sync"):
        raise ValueError(f"unknown semantics: {semantics}")
    items = _named_traces(traces)
    prefix = phi.prefix
    checked = 0

    def candidates(bound: dict[str, TimedWord]) -> list[tuple[str, TimedWord]]:
        if semantics == "async" or not bound:
            return items
        anchor = next(iter(bound.values())).time_set
        return [(n, w) for n, w in items if w.time_set == anchor]

    def rec(i: int, bound: dict[str, TimedWord],
            names: dict[str, str]) -> tuple[bool, Optional[dict[str, str]]]:
        nonlocal checked
        if i == len(prefix):
            checked += 1
            world = _AssignmentWorld(bound)
            return _evaluate(world, Fraction(0), phi.matrix, {}), dict(names)
        quant = prefix[i]
        want = quant.kind == EXISTS
        for name, word in candidates(bound):
            bound[quant.var] = word
            names[quant.var] = name
            holds, leaf = rec(i + 1, bound, names)
            del bound[quant.var]
            del names[quant.var]
            if holds == want:
                return holds, leaf
        return (not want), None

    holds, leaf = rec(0, {}, {})
    return EvalResult(holds, leaf, checked)
