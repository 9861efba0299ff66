"""Finite automata over structured untimed letters.

Letters are arity-k tuples of proposition sets, like timed-word letters
but without timestamps.  Alphabets are explicit per-track universes;
`letters()` enumerates every valid letter.  Epsilon transitions (letter
None) only appear transiently inside nfa_desilence.

ltl_to_nfa compiles an untimed formula (past operators allowed, every
interval [0,inf)) into an equivalent automaton via the usual
subformula-valuation tableau.  States carry the letter they were
entered on plus truth bits for the temporal subformulas; consecutive
states must satisfy the one-step expansion laws, and evaluation anchors
strictly before the first position, matching the pointwise semantics at
time 0 of a word with events at 1..n.
"""

from __future__ import annotations

import itertools
import weakref
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Hashable, Iterable, Mapping, Optional, Sequence

from .formulas import (
    And,
    Atom,
    Bottom,
    DualHist,
    DualSince,
    DualUntil,
    Formula,
    Hist,
    Not,
    Or,
    Since,
    Top,
    Until,
    free_vars,
    nnf,
    props_of,
    subformulas,
)
from .traces import EPSILON_SET, Letter

UntimedWord = tuple[Letter, ...]


@dataclass(frozen=True)
class Nfa:
    name: str
    ap: tuple[frozenset[str], ...]
    states: frozenset[Hashable]
    initial: frozenset[Hashable]
    transitions: tuple[tuple[Hashable, Optional[Letter], Hashable], ...]
    accepting: frozenset[Hashable]

    def __post_init__(self) -> None:
        if not self.ap:
            raise ValueError("automaton needs letter arity >= 1")
        if not self.initial <= self.states or not self.accepting <= self.states:
            raise ValueError("initial/accepting states not declared")
        for src, letter, dst in self.transitions:
            if src not in self.states or dst not in self.states:
                raise ValueError("transition endpoint not declared")
            if letter is not None and not self.letter_ok(letter):
                raise ValueError(f"letter outside alphabet: {letter}")

    @property
    def arity(self) -> int:
        return len(self.ap)

    def letter_ok(self, letter: Letter) -> bool:
        return len(letter) == self.arity and all(
            part <= self.ap[i] for i, part in enumerate(letter))

    def letters(self) -> list[Letter]:
        parts = []
        for universe in self.ap:
            props = sorted(universe)
            parts.append([frozenset(combo)
                          for size in range(len(props) + 1)
                          for combo in itertools.combinations(props, size)])
        return [tuple(combo) for combo in itertools.product(*parts)]

    def has_epsilon(self) -> bool:
        return any(letter is None for _, letter, _ in self.transitions)


# Transition indexes per automaton, rebuilt when the identity check fails.
_INDEX: dict[int, tuple] = {}


def _indexed(auto: Nfa) -> tuple[dict, dict]:
    entry = _INDEX.get(id(auto))
    if entry is not None and entry[0]() is auto:
        return entry[1], entry[2]
    step: dict[tuple[Hashable, Letter], set[Hashable]] = {}
    eps: dict[Hashable, list[Hashable]] = {}
    for src, letter, dst in auto.transitions:
        if letter is None:
            eps.setdefault(src, []).append(dst)
        else:
            step.setdefault((src, letter), set()).add(dst)
    ref = weakref.ref(auto, lambda _, key=id(auto): _INDEX.pop(key, None))
    _INDEX[id(auto)] = (ref, step, eps)
    return step, eps


def _eps_closure(auto: Nfa, seed: Iterable[Hashable]) -> frozenset[Hashable]:
    out = set(seed)
    frontier = list(out)
    eps = _indexed(auto)[1]
    while frontier:
        q = frontier.pop()
        for nxt in eps.get(q, []):
            if nxt not in out:
                out.add(nxt)
                frontier.append(nxt)
    return frozenset(out)


def nfa_membership(auto: Nfa, word: Sequence[Letter]) -> bool:
    current = _eps_closure(auto, auto.initial)
    step = _indexed(auto)[0]
    for letter in word:
        if not auto.letter_ok(letter):
            return False
        nxt: set[Hashable] = set()
        for q in current:
            nxt |= step.get((q, letter), set())
        current = _eps_closure(auto, nxt)
        if not current:
            return False
    return bool(current & auto.accepting)


def nfa_emptiness(auto: Nfa) -> Optional[UntimedWord]:
    """Shortest accepted word by BFS, or None."""
    adj: dict[Hashable, list[tuple[Letter, Hashable]]] = {}
    for src, letter, dst in auto.transitions:
        if letter is not None:
            adj.setdefault(src, []).append((letter, dst))
    start = _eps_closure(auto, auto.initial)
    seen: set[Hashable] = set(start)
    queue: deque[tuple[Hashable, tuple[Letter, ...]]] = deque(
        (q, ()) for q in sorted(start, key=str))
    for q in start:
        if q in auto.accepting:
            return ()
    while queue:
        q, path = queue.popleft()
        for letter, dst in adj.get(q, []):
            for nxt in _eps_closure(auto, [dst]):
                if nxt in seen:
                    continue
                seen.add(nxt)
                extended = path + (letter,)
                if nxt in auto.accepting:
                    return extended
                queue.append((nxt, extended))
    return None


def nfa_product(left: Nfa, right: Nfa, name: str = "product") -> Nfa:
    if left.ap != right.ap:
        raise ValueError("alphabet mismatch in product")
    if left.has_epsilon() or right.has_epsilon():
        raise ValueError("product requires epsilon-free automata")
    by_letter: dict[Letter, list[tuple[Hashable, Hashable]]] = {}
    for src, letter, dst in right.transitions:
        by_letter.setdefault(letter, []).append((src, dst))
    transitions = []
    for lsrc, letter, ldst in left.transitions:
        for rsrc, rdst in by_letter.get(letter, []):
            transitions.append(((lsrc, rsrc), letter, (ldst, rdst)))
    states = frozenset(itertools.product(left.states, right.states))
    return Nfa(name, left.ap, states,
               frozenset(itertools.product(left.initial, right.initial)),
               tuple(transitions),
               frozenset(itertools.product(left.accepting, right.accepting)))


def nfa_project(auto: Nfa, name: Optional[str] = None) -> Nfa:
    """Drop the last track existentially."""
    if auto.arity < 2:
        raise ValueError("cannot project an arity-1 automaton")
    if auto.has_epsilon():
        raise ValueError("projection requires an epsilon-free automaton")
    transitions = tuple((src, letter[:-1], dst)
                        for src, letter, dst in auto.transitions)
    return Nfa(name or f"{auto.name}_proj", auto.ap[:-1], auto.states,
               auto.initial, transitions, auto.accepting)


def nfa_desilence(auto: Nfa, name: Optional[str] = None) -> Nfa:
    """Turn all-silent letters into epsilon moves, then eliminate them."""
    silent = tuple(EPSILON_SET for _ in auto.ap)
    staged = tuple((src, None if letter == silent else letter, dst)
                   for src, letter, dst in auto.transitions)
    with_eps = Nfa(auto.name, auto.ap, auto.states, auto.initial, staged,
                   auto.accepting)
    transitions = []
    accepting = set(auto.accepting)
    for q in auto.states:
        closure = _eps_closure(with_eps, [q])
        if closure & auto.accepting:
            accepting.add(q)
        for src, letter, dst in staged:
            if letter is not None and src in closure:
                transitions.append((q, letter, dst))
    return Nfa(name or f"{auto.name}_desil", auto.ap, auto.states,
               auto.initial, tuple(dict.fromkeys(transitions)),
               frozenset(accepting))


def nfa_complement(auto: Nfa, name: Optional[str] = None) -> Nfa:
    """Lazy subset construction, then flipped acceptance."""
    if auto.has_epsilon():
        raise ValueError("complement requires an epsilon-free automaton")
    step: dict[tuple[Hashable, Letter], set[Hashable]] = {}
    for src, letter, dst in auto.transitions:
        step.setdefault((src, letter), set()).add(dst)
    alphabet = auto.letters()
    start = frozenset(auto.initial)
    states = {start}
    transitions = []
    queue = [start]
    while queue:
        current = queue.pop()
        for letter in alphabet:
            nxt = frozenset(q2 for q in current
                            for q2 in step.get((q, letter), ()))
            transitions.append((current, letter, nxt))
            if nxt not in states:
                states.add(nxt)
                queue.append(nxt)
    accepting = frozenset(s for s in states if not s & auto.accepting)
    return Nfa(name or f"{auto.name}_comp", auto.ap, frozenset(states),
               frozenset([start]), tuple(transitions), accepting)


def nfa_universal(ap: Sequence[frozenset[str]], name: str = "universal") -> Nfa:
    state = "u"
    auto = Nfa(name, tuple(ap), frozenset([state]), frozenset([state]), (),
               frozenset([state]))
    transitions = tuple((state, letter, state) for letter in auto.letters())
    return Nfa(name, tuple(ap), frozenset([state]), frozenset([state]),
               transitions, frozenset([state]))


def nfa_parse(text: str, source: str = "<automaton>") -> Nfa:
    """Text format of the timed parser with clocks/guards/resets omitted."""
    from .timed_automata import ta_parse

    auto = ta_parse(text, source)
    if auto.clocks:
        raise ValueError("untimed automaton must not declare clocks")
    transitions = tuple((tr.src, tr.letter, tr.dst) for tr in auto.transitions)
    return Nfa(auto.name, auto.ap, auto.locations, frozenset([auto.initial]),
               transitions, auto.accepting)


# ------------------------------------------------------------------ tableau

_TEMPORAL = (Until, DualUntil, Since, DualSince, Hist, DualHist)


def _check_untimed(psi: Formula) -> None:
    for sub in subformulas(psi):
        interval = getattr(sub, "interval", None)
        if interval is not None and not interval.effectively_untimed:
            raise ValueError(f"timed interval in untimed translation: {sub}")


class _Tableau:
    def __init__(self, psi: Formula, arity: int,
                 var_index: Mapping[Optional[str], int]) -> None:
        self.psi = psi
        self.arity = arity
        self.var_index = var_index
        self.tracked = tuple(s for s in dict.fromkeys(subformulas(psi))
                             if isinstance(s, _TEMPORAL))

    def _track(self, var: Optional[str]) -> int:
        if var not in self.var_index:
            raise ValueError(f"unmapped trace variable: {var}")
        idx = self.var_index[var]
        if not 0 <= idx < self.arity:
            raise ValueError(f"track index {idx} out of range for arity {self.arity}")
        return idx

    def ev(self, phi: Formula, letter: Letter, bits: frozenset[Formula]) -> bool:
        """Value of phi at an event position with the given letter and
        temporal-subformula bits."""
        match phi:
            case Top():
                return True
            case Bottom():
                return False
            case Atom(prop, var):
                return prop in letter[self._track(var)]
            case Not(arg):
                return not self.ev(arg, letter, bits)
            case And(left, right):
                return self.ev(left, letter, bits) and self.ev(right, letter, bits)
            case Or(left, right):
                return self.ev(left, letter, bits) or self.ev(right, letter, bits)
            case _ if isinstance(phi, _TEMPORAL):
                return phi in bits
        raise TypeError(f"unexpected node in untimed tableau: {phi!r}")

    def anchor(self, phi: Formula, first: Optional[tuple[Letter, frozenset[Formula]]]) -> bool:
        """Value of phi at the virtual anchor strictly before position 0;
        first is the first position's (letter, bits), None on the empty word."""
        match phi:
            case Top() | Atom():
                return False
            case Bottom():
                return True
            case Not(_):
                # nnf keeps Not on atoms only; negated atoms are false at
                # non-event positions just like the atoms themselves
                return False
            case And(left, right):
                return self.anchor(left, first) and self.anchor(right, first)
            case Or(left, right):
                return self.anchor(left, first) or self.anchor(right, first)
            case Since() | Hist():
                return False
            case DualSince() | DualHist():
                return True
            case Until(left, right):
                if first is None:
                    return False
                letter, bits = first
                return (self.ev(right, letter, bits)
                        or (self.ev(left, letter, bits) and phi in bits))
            case DualUntil(left, right):
                if first is None:
                    return True
                letter, bits = first
                return (self.ev(right, letter, bits)
                        and (self.ev(left, letter, bits) or phi in bits))
        raise TypeError(f"unexpected node in untimed tableau: {phi!r}")

    def start_ok(self, letter: Letter, bits: frozenset[Formula]) -> bool:
        """Past bits at position 0: no earlier events."""
        for sub in self.tracked:
            match sub:
                case Since() | Hist():
                    if sub in bits:
                        return False
                case DualSince() | DualHist():
                    if sub not in bits:
                        return False
        return True

    def step_ok(self, prev: tuple[Letter, frozenset[Formula]],
                cur: tuple[Letter, frozenset[Formula]]) -> bool:
        pl, pb = prev
        cl, cb = cur
        for sub in self.tracked:
            match sub:
                case Until(left, right):
                    want = (self.ev(right, cl, cb)
                            or (self.ev(left, cl, cb) and sub in cb))
                    if (sub in pb) != want:
                        return False
                case DualUntil(left, right):
                    want = (self.ev(right, cl, cb)
                            and (self.ev(left, cl, cb) or sub in cb))
                    if (sub in pb) != want:
                        return False
                case Since(left, right):
                    want = (self.ev(right, pl, pb)
                            or (self.ev(left, pl, pb) and sub in pb))
                    if (sub in cb) != want:
                        return False
                case DualSince(left, right):
                    want = (self.ev(right, pl, pb)
                            and (self.ev(left, pl, pb) or sub in pb))
                    if (sub in cb) != want:
                        return False
                case Hist(arg):
                    want = self.ev(arg, pl, pb) or sub in pb
                    if (sub in cb) != want:
                        return False
                case DualHist(arg):
                    want = not self.ev(arg, pl, pb) and sub in pb
                    if (sub in cb) != want:
                        return False
        return True

    def final_ok(self, bits: frozenset[Formula]) -> bool:
        for sub in self.tracked:
            if isinstance(sub, (Until,)) and sub in bits:
                return False
            if isinstance(sub, (DualUntil,)) and sub not in bits:
                return False
        return True


def ltl_to_nfa(psi: Formula, arity: int,
               ap: Optional[Iterable[str]] = None,
               var_index: Optional[Mapping[Optional[str], int]] = None,
               name: str = "tableau") -> Nfa:
    """Automaton for {untimed arity-k words w : w satisfies psi}.

    Satisfaction matches mtl_sat on the timed embedding with timestamps
    1..n (the anchor is not an event).  psi may use past operators; all
    intervals must be [0,inf).  ap is either one proposition universe
    shared by every track or a sequence of per-track universes.
    """
    _check_untimed(psi)
    psi = nnf(psi)
    if var_index is None:
        var_index = {None: 0}
        for i, var in enumerate(sorted(v for v in free_vars(psi) if v is not None)):
            var_index[var] = i
    tab = _Tableau(psi, arity, var_index)
    if ap is None:
        ap_tuple = tuple(props_of(psi) for _ in range(arity))
    else:
        parts = list(ap)
        if parts and isinstance(parts[0], (frozenset, set)):
            if len(parts) != arity:
                raise ValueError("per-track alphabet length != arity")
            ap_tuple = tuple(frozenset(part) for part in parts)
        else:
            ap_tuple = tuple(frozenset(parts) for _ in range(arity))

    shell = Nfa(name, ap_tuple, frozenset(["x"]), frozenset(["x"]), (),
                frozenset())
    alphabet = shell.letters()
    bit_sets = [frozenset(combo)
                for size in range(len(tab.tracked) + 1)
                for combo in itertools.combinations(tab.tracked, size)]

    pre = "pre"
    states: set[Hashable] = {pre}
    transitions: list[tuple[Hashable, Optional[Letter], Hashable]] = []
    queue: list[tuple[Letter, frozenset[Formula]]] = []
    for letter in alphabet:
        for bits in bit_sets:
            if not tab.start_ok(letter, bits):
                continue
            if not tab.anchor(psi, (letter, bits)):
                continue
            state = (letter, bits)
            transitions.append((pre, letter, state))
            if state not in states:
                states.add(state)
                queue.append(state)
    while queue:
        cur = queue.pop()
        for letter in alphabet:
            for bits in bit_sets:
                nxt = (letter, bits)
                if not tab.step_ok(cur, nxt):
                    continue
                transitions.append((cur, letter, nxt))
                if nxt not in states:
                    states.add(nxt)
                    queue.append(nxt)
    accepting = set()
    if tab.anchor(psi, None):
        accepting.add(pre)
    for state in states:
        if state != pre and tab.final_ok(state[1]):
            accepting.add(state)
    return Nfa(name, ap_tuple, frozenset(states), frozenset([pre]),
               tuple(transitions), frozenset(accepting))


def embed_untimed(word: Sequence[Letter], arity: int):
    """Timed embedding with timestamps 1..n, for the eval-oracle bridge."""
    from .traces import TimedWord

    events = tuple((letter, Fraction(i + 1)) for i, letter in enumerate(word))
    return TimedWord(arity, events)
