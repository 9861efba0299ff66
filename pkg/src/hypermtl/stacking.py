"""Bounded-horizon stacking of timed words into untimed level words.

A timed word with all timestamps in [0, N) is encoded as an untimed word
over level-indexed propositions: each event at time j + f contributes a
level marker @j and props p@j to the position holding fraction f, and
positions are ordered by strictly increasing fraction.  The fraction-0
position, when present, additionally carries @zero on every track; the
letter sequence alone must reveal whether the first position sits at an
integer time, since satisfaction at the time-0 anchor depends on it.

On this encoding every metric constraint turns into a finite choice of
level offsets, so formulas with timed operators translate to equivalent
untimed formulas and then to plain finite automata.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Hashable, Iterable, Mapping, Optional, Sequence

from .formulas import (And, Atom, Bottom, DualHist, DualSince, DualUntil,
                       Formula, Hist, Implies, Interval, Not, Or, Since, Top,
                       Until, EPSILON_PROP, UNTIMED, big_or, comp, free_vars,
                       nnf, props_of, subformulas)
from .nfa import Nfa, _Tableau
from .timed_automata import Letter, TimedAutomaton
from .traces import TimedWord

ZERO_MARK = "@zero"

_FUTURE = (Until, DualUntil)
_PAST = (Since, DualSince, Hist, DualHist)
_GUESS_CAP = 18


def _mark(level: int) -> str:
    return f"@{level}"


def _leveled(prop: str, level: int) -> str:
    return f"{prop}@{level}"


def _split_token(token: str) -> tuple[Optional[str], Optional[int]]:
    """(prop, level) of a stacked token; prop None for bare markers,
    level None for @zero."""
    head, _, tail = token.rpartition("@")
    if not tail.isdigit():
        return None, None
    return (head if head else None), int(tail)


def _check_base(parts: Sequence[frozenset[str]]) -> None:
    for part in parts:
        for prop in part:
            if "@" in prop:
                raise ValueError(f"base proposition may not contain '@': {prop}")


# --- the stacked word itself ---------------------------------------------


@dataclass(frozen=True)
class StackedWord:
    """Positions ordered by strictly increasing fraction in [0, 1); each
    letter carries the level markers and leveled props of every event
    sharing that fraction."""

    arity: int
    levels: int
    positions: tuple[tuple[Fraction, Letter], ...]

    def __post_init__(self) -> None:
        if self.arity < 1:
            raise ValueError("arity must be at least 1")
        if self.levels < 1:
            raise ValueError("level count must be at least 1")
        object.__setattr__(self, "positions", tuple(self.positions))
        prev = None
        for frac, letter in self.positions:
            if not isinstance(frac, Fraction):
                raise ValueError("position fractions must be Fraction")
            if not 0 <= frac < 1:
                raise ValueError("position fraction outside [0, 1)")
            if prev is not None and frac <= prev:
                raise ValueError("position fractions must strictly increase")
            prev = frac
            if len(letter) != self.arity:
                raise ValueError("letter arity mismatch")

    def word(self) -> tuple[Letter, ...]:
        """The untimed letter sequence fed to stacked automata."""
        return tuple(letter for _, letter in self.positions)


def stack_trace(word: TimedWord, levels: int) -> StackedWord:
    """Encode a timed word with times in [0, levels) level by level."""
    by_frac: dict[Fraction, list[tuple[Letter, int]]] = {}
    for letter, time in word.events:
        _check_base(letter)
        if time >= levels:
            raise ValueError(f"timestamp {time} outside [0, {levels})")
        level = int(time)
        frac = time - level
        by_frac.setdefault(frac, []).append((letter, level))
    positions = []
    for frac in sorted(by_frac):
        parts: list[set[str]] = [set() for _ in range(word.arity)]
        for letter, level in by_frac[frac]:
            for i, part in enumerate(letter):
                parts[i].add(_mark(level))
                parts[i].update(_leveled(p, level) for p in part)
        if frac == 0:
            for part in parts:
                part.add(ZERO_MARK)
        positions.append((frac, tuple(frozenset(p) for p in parts)))
    return StackedWord(word.arity, levels, tuple(positions))


def unstack(stacked: StackedWord) -> TimedWord:
    """Decode back to a timed word; a track missing a marker other tracks
    carry is read as a silent part, mirroring zipped-word padding."""
    events: list[tuple[Letter, Fraction]] = []
    for level in range(stacked.levels):
        mark = _mark(level)
        for frac, letter in stacked.positions:
            if not any(mark in part for part in letter):
                continue
            parts = []
            for part in letter:
                if mark not in part:
                    parts.append(frozenset({EPSILON_PROP}))
                    continue
                props = set()
                for token in part:
                    prop, lvl = _split_token(token)
                    if prop is not None and lvl == level:
                        props.add(prop)
                parts.append(frozenset(props))
            events.append((tuple(parts), level + frac))
    return TimedWord(stacked.arity, tuple(events))


# --- stacked alphabet ------------------------------------------------------


def stacked_ap(base: Sequence[frozenset[str]], levels: int) -> tuple[frozenset[str], ...]:
    """Per-track proposition universe of the stacked encoding; silent
    padding props are always included so padded and plain words share
    one alphabet."""
    _check_base(base)
    out = []
    for part in base:
        props = {ZERO_MARK}
        for level in range(levels):
            props.add(_mark(level))
            for prop in set(part) | {EPSILON_PROP}:
                props.add(_leveled(prop, level))
        out.append(frozenset(props))
    return tuple(out)


def stacked_letters(base: Sequence[frozenset[str]], levels: int) -> tuple[Letter, ...]:
    """Well-formed stacked letters: a shared nonempty marker set, one
    content per marked level and track (a prop subset or pure padding),
    and an all-tracks @zero flag."""
    _check_base(base)
    arity = len(base)
    contents = []
    for part in base:
        subsets = [frozenset(combo)
                   for size in range(len(part) + 1)
                   for combo in itertools.combinations(sorted(part), size)]
        contents.append(subsets + [frozenset({EPSILON_PROP})])
    letters = []
    level_list = list(range(levels))
    for size in range(1, levels + 1):
        for marks in itertools.combinations(level_list, size):
            track_choices = []
            for i in range(arity):
                track_choices.append(list(itertools.product(contents[i], repeat=size)))
            for pick in itertools.product(*track_choices):
                for zero in (False, True):
                    parts = []
                    for i in range(arity):
                        props = set()
                        for level, content in zip(marks, pick[i]):
                            props.add(_mark(level))
                            props.update(_leveled(p, level) for p in content)
                        if zero:
                            props.add(ZERO_MARK)
                        parts.append(frozenset(props))
                    letters.append(tuple(parts))
    return tuple(letters)


def is_padding_letter(letter: Letter) -> bool:
    """True when every marked level of every track carries the silent
    content only; such positions belong to already-projected tracks.  An
    empty content is a real event with no propositions, not padding."""
    for part in letter:
        marks = {s[1] for tok in part
                 if (s := _split_token(tok))[0] is None and s[1] is not None}
        for lv in marks:
            content = {s[0] for tok in part
                       if (s := _split_token(tok))[0] is not None
                       and s[1] == lv}
            if content != {EPSILON_PROP}:
                return False
    return True


def stacked_wf(base: Sequence[frozenset[str]], levels: int,
               name: str = "stacked-wf") -> Nfa:
    """Well-formedness over stacked letters: only shared-marker letters
    with at least one non-padding content, @zero at the first position
    only."""
    ap = stacked_ap(base, levels)
    letters = [l for l in stacked_letters(base, levels) if not is_padding_letter(l)]
    transitions = []
    for letter in letters:
        has_zero = ZERO_MARK in letter[0]
        transitions.append(("head", letter, "tail"))
        if not has_zero:
            transitions.append(("tail", letter, "tail"))
    return Nfa(name, ap, frozenset(["head", "tail"]), frozenset(["head"]),
               tuple(transitions), frozenset(["head", "tail"]))


# --- timed formula -> untimed formula over stacked props -------------------

# Constants that stay true (resp. false) at non-event instants too, unlike
# Top/Bottom, which read event presence.
_TRUE = Or(Bottom(), Top())
_FALSE = And(Bottom(), Top())


def _and(parts: Iterable[Formula]) -> Formula:
    kept = []
    for part in parts:
        if part == _FALSE:
            return _FALSE
        if part != _TRUE:
            kept.append(part)
    if not kept:
        return _TRUE
    out = kept[0]
    for part in kept[1:]:
        out = And(out, part)
    return out


def _or(parts: Iterable[Formula]) -> Formula:
    kept = []
    for part in parts:
        if part == _TRUE:
            return _TRUE
        if part != _FALSE:
            kept.append(part)
    if not kept:
        return _FALSE
    out = kept[0]
    for part in kept[1:]:
        out = Or(out, part)
    return out


def _futall(arg: Formula) -> Formula:
    return _TRUE if arg == _TRUE else DualUntil(Bottom(), arg, UNTIMED)


def _pastall(arg: Formula) -> Formula:
    return _TRUE if arg == _TRUE else DualSince(Bottom(), arg, UNTIMED)


class _Stacker:
    def __init__(self, levels: int, reps: Sequence[Optional[str]]) -> None:
        self.levels = levels
        self.reps = tuple(reps)

    def ev(self, level: int) -> Formula:
        return big_or([Atom(_mark(level), var) for var in self.reps])

    def row(self, alpha: Formula, level: int) -> Formula:
        # an event on this level satisfies alpha; vacuous off the grid
        if not 0 <= level < self.levels or isinstance(alpha, Top):
            return _TRUE
        return _or([comp(self.ev(level)), self.tr(alpha, level)])

    def rows(self, alpha: Formula, lo: int, hi: int) -> Formula:
        return _and([self.row(alpha, m) for m in range(max(lo, 0),
                                                       min(hi, self.levels - 1) + 1)])

    def _witness_levels(self, interval: Interval, j: int, future: bool
                        ) -> tuple[list[int], list[int], list[int]]:
        """Admissible level offsets d for the three witness classes: same
        position (distance exactly d), the class with distance in (d, d+1),
        and the class with distance in (d-1, d)."""
        lo, up = interval.lower, interval.upper
        cap = self.levels - 1 - j if future else j
        same = [d for d in range(1, cap + 1) if interval.contains(d)]
        outer = [d for d in range(max(lo, 0), cap + 1)
                 if up is None or d + 1 <= up]
        inner = [d for d in range(max(lo + 1, 1), cap + 1)
                 if up is None or d <= up]
        return same, outer, inner

    def until(self, alpha: Formula, beta: Formula, interval: Interval,
              j: int) -> Formula:
        same, outer, inner = self._witness_levels(interval, j, future=True)
        cases = []
        for d in same:
            w = j + d
            cases.append(_and([self.ev(w), self.tr(beta, w),
                               self.rows(alpha, j + 1, w - 1),
                               _futall(self.rows(alpha, j, w - 1)),
                               _pastall(self.rows(alpha, j + 1, w))]))
        for d in outer:
            # witness at a strictly later position, level j + d
            w = j + d
            hit = _and([self.ev(w), self.tr(beta, w),
                        self.rows(alpha, j, w - 1),
                        _futall(self.rows(alpha, j, w - 1))])
            cases.append(_and([self.rows(alpha, j + 1, w),
                               _pastall(self.rows(alpha, j + 1, w)),
                               Until(self.rows(alpha, j, w), hit, UNTIMED)]))
        for d in inner:
            # witness at a strictly earlier position, level j + d
            w = j + d
            hit = _and([self.ev(w), self.tr(beta, w),
                        self.rows(alpha, j + 1, w - 1),
                        _pastall(self.rows(alpha, j + 1, w))])
            cases.append(_and([self.rows(alpha, j + 1, w - 1),
                               _futall(self.rows(alpha, j, w - 1)),
                               Since(self.rows(alpha, j + 1, w - 1), hit, UNTIMED)]))
        return _or(cases)

    def since(self, alpha: Formula, beta: Formula, interval: Interval,
              j: int) -> Formula:
        same, outer, inner = self._witness_levels(interval, j, future=False)
        cases = []
        for d in same:
            w = j - d
            cases.append(_and([self.ev(w), self.tr(beta, w),
                               self.rows(alpha, w + 1, j - 1),
                               _pastall(self.rows(alpha, w + 1, j)),
                               _futall(self.rows(alpha, w, j - 1))]))
        for d in outer:
            # witness at a strictly earlier position, level j - d
            w = j - d
            hit = _and([self.ev(w), self.tr(beta, w),
                        self.rows(alpha, w + 1, j),
                        _pastall(self.rows(alpha, w + 1, j))])
            cases.append(_and([self.rows(alpha, w, j - 1),
                               _futall(self.rows(alpha, w, j - 1)),
                               Since(self.rows(alpha, w, j), hit, UNTIMED)]))
        for d in inner:
            # witness at a strictly later position, level j - d
            w = j - d
            hit = _and([self.ev(w), self.tr(beta, w),
                        self.rows(alpha, w + 1, j - 1),
                        _futall(self.rows(alpha, w, j - 1))])
            cases.append(_and([self.rows(alpha, w + 1, j - 1),
                               _pastall(self.rows(alpha, w + 1, j)),
                               Until(self.rows(alpha, w + 1, j - 1), hit, UNTIMED)]))
        return _or(cases)

    def tr(self, psi: Formula, j: int) -> Formula:
        """Untimed formula equal, at every position and at the anchor, to
        psi at time j plus the current fraction."""
        match psi:
            case Top():
                return self.ev(j)
            case Bottom():
                return comp(self.ev(j))
            case Atom(prop, var):
                return Atom(_leveled(prop, j), var)
            case Not(Atom(prop, var)):
                return _and([self.ev(j), Not(Atom(_leveled(prop, j), var))])
            case Not(arg):
                return self.tr(nnf(Not(arg)), j)
            case Implies(left, right):
                return _or([self.tr(nnf(Not(left)), j), self.tr(right, j)])
            case And(left, right):
                return _and([self.tr(left, j), self.tr(right, j)])
            case Or(left, right):
                return _or([self.tr(left, j), self.tr(right, j)])
            case Until(left, right, interval):
                return self.until(left, right, interval, j)
            case DualUntil(left, right, interval):
                return comp(self.until(comp(left), comp(right), interval, j))
            case Since(left, right, interval):
                return self.since(left, right, interval, j)
            case DualSince(left, right, interval):
                return comp(self.since(comp(left), comp(right), interval, j))
            case Hist(arg, interval):
                return self.since(comp(arg), arg, interval, j)
            case DualHist(arg, interval):
                return comp(self.since(comp(arg), arg, interval, j))
        raise TypeError(f"unexpected node in stacking translation: {psi!r}")


def _rep_vars(arity: int, var_index: Mapping[Optional[str], int]
              ) -> tuple[Optional[str], ...]:
    reps: dict[int, Optional[str]] = {}
    for var in sorted(var_index, key=lambda v: (v is not None, v or "")):
        idx = var_index[var]
        if not 0 <= idx < arity:
            raise ValueError(f"track index {idx} out of range for arity {arity}")
        reps.setdefault(idx, var)
    missing = [i for i in range(arity) if i not in reps]
    if missing:
        raise ValueError(f"no trace variable mapped to tracks {missing}")
    return tuple(reps[i] for i in range(arity))


def stack_formula(psi: Formula, levels: int, arity: int = 1,
                  var_index: Optional[Mapping[Optional[str], int]] = None
                  ) -> Formula:
    """Untimed formula over stacked props whose anchored value on any
    stacking equals psi's anchored value on the timed word."""
    if var_index is None:
        var_index = {None: 0}
        for i, var in enumerate(sorted(v for v in free_vars(psi) if v is not None)):
            var_index[var] = i
    stk = _Stacker(levels, _rep_vars(arity, var_index))
    body = stk.tr(nnf(psi), 0)
    zero = big_or([Atom(ZERO_MARK, var) for var in stk.reps])
    # with a fraction-0 first position, time 0 is that position; otherwise
    # the untimed anchor itself plays the role of time 0
    at_zero = Until(Bottom(), _and([zero, body]), UNTIMED)
    no_zero = _and([comp(Until(Bottom(), zero, UNTIMED)), body])
    return _or([at_zero, no_zero])


# --- tableau automaton with guess propagation ------------------------------


def _node_size(psi: Formula) -> int:
    return 1 + sum(1 for _ in subformulas(psi)) if psi else 1


def _tableau_nfa(psi: Formula, arity: int, ap: tuple[frozenset[str], ...],
                 var_index: Mapping[Optional[str], int],
                 alphabet: Sequence[Letter], name: str) -> Nfa:
    """Tableau automaton like ltl_to_nfa, but over a restricted alphabet
    and with successor bits derived by propagation: past bits follow
    deterministically, future bits are forced by the step law wherever it
    pins them and branch only where genuinely free.  States store letters
    projected to the atoms the formula reads, so letters that the formula
    cannot tell apart share states."""
    psi = nnf(psi)
    tab = _Tableau(psi, arity, var_index)
    order = sorted(tab.tracked, key=_node_size)
    future = [s for s in order if isinstance(s, _FUTURE)]
    past = [s for s in order if isinstance(s, _PAST)]
    if len(future) > _GUESS_CAP:
        raise ValueError(f"stacked tableau needs {len(future)} guessed bits; "
                         "the matrix is too complex for this horizon")

    read = [set() for _ in range(arity)]
    for sub in subformulas(psi):
        if isinstance(sub, Atom):
            read[var_index[sub.var]].add(sub.prop)

    def seen_by_formula(letter: Letter) -> Letter:
        return tuple(part & frozenset(read[i]) for i, part in enumerate(letter))

    node_ix = {sub: i for i, sub in enumerate(order)}
    nodes = tuple(order)

    def gen(phi: Formula) -> str:
        if phi in node_ix:
            return f"(N[{node_ix[phi]}] in B)"
        match phi:
            case Top():
                return "True"
            case Bottom():
                return "False"
            case Atom(prop, var):
                return f"({prop!r} in L[{var_index[var]}])"
            case Not(arg):
                return f"(not {gen(arg)})"
            case And(left, right):
                return f"({gen(left)} and {gen(right)})"
            case Or(left, right):
                return f"({gen(left)} or {gen(right)})"
        raise TypeError(f"unexpected node in stacked tableau: {phi!r}")

    def compiled(phi: Formula):
        return eval(f"lambda L, B: {gen(phi)}", {"N": nodes})

    fut_law = [(sub, isinstance(sub, Until), compiled(sub.left), compiled(sub.right))
               for sub in future]
    past_law = []
    for sub in past:
        if isinstance(sub, (Since, DualSince)):
            past_law.append((sub, type(sub), compiled(sub.left), compiled(sub.right)))
        else:
            past_law.append((sub, type(sub), None, compiled(sub.arg)))

    def assignments(base: frozenset[Formula], letter: Letter,
                    prev: Optional[tuple[Letter, frozenset[Formula]]]
                    ) -> Iterable[frozenset[Formula]]:
        out = [set(base)]
        for sub, is_until, lev, rev in fut_law:
            nxt = []
            for bits in out:
                rv = rev(letter, bits)
                lv = lev(letter, bits)
                if prev is None:
                    choices = (False, True)
                elif is_until:
                    if sub in prev[1]:
                        choices = (False, True) if rv else ((True,) if lv else ())
                    else:
                        choices = () if rv else ((False,) if lv else (False, True))
                else:
                    if sub in prev[1]:
                        choices = () if not rv else ((False, True) if lv else (True,))
                    else:
                        choices = (False, True) if not rv else (() if lv else (False,))
                for choice in choices:
                    nxt.append(bits | {sub} if choice else set(bits))
            out = nxt
        return [frozenset(bits) for bits in out]

    def past_bits(prev: Optional[tuple[Letter, frozenset[Formula]]]
                  ) -> frozenset[Formula]:
        bits: set[Formula] = set()
        if prev is None:
            bits.update(s for s in past if isinstance(s, (DualSince, DualHist)))
            return frozenset(bits)
        pl, pb = prev
        for sub, kind, lev, rev in past_law:
            if kind is Since:
                held = rev(pl, pb) or (lev(pl, pb) and sub in pb)
            elif kind is DualSince:
                held = rev(pl, pb) and (lev(pl, pb) or sub in pb)
            elif kind is Hist:
                held = rev(pl, pb) or sub in pb
            else:
                held = not rev(pl, pb) and sub in pb
            if held:
                bits.add(sub)
        return frozenset(bits)

    groups: dict[Letter, list[Letter]] = {}
    for letter in alphabet:
        groups.setdefault(seen_by_formula(letter), []).append(letter)

    pre = "pre"
    states: set[Hashable] = {pre}
    sym_edges: list[tuple[Hashable, Letter, Hashable]] = []
    queue: list[tuple[Letter, frozenset[Formula]]] = []

    def push(src: Hashable, key: Letter, bits: frozenset[Formula]) -> None:
        dst = (key, bits)
        sym_edges.append((src, key, dst))
        if dst not in states:
            states.add(dst)
            queue.append(dst)

    for key in groups:
        for bits in assignments(past_bits(None), key, None):
            if tab.anchor(psi, (key, bits)):
                push(pre, key, bits)
    while queue:
        cur = queue.pop()
        base = past_bits(cur)
        for key in groups:
            for bits in assignments(base, key, cur):
                push(cur, key, bits)

    accepting = {s for s in states if s != pre and tab.final_ok(s[1])}
    if tab.anchor(psi, None):
        accepting.add(pre)

    # Keep only states with a path to acceptance; pre stays as initial.
    back: dict[Hashable, set[Hashable]] = {}
    for src, _, dst in sym_edges:
        back.setdefault(dst, set()).add(src)
    alive = set(accepting)
    stack = list(alive)
    while stack:
        for src in back.get(stack.pop(), ()):
            if src not in alive:
                alive.add(src)
                stack.append(src)
    alive.add(pre)

    transitions = tuple((src, letter, dst)
                        for src, key, dst in sym_edges
                        if src in alive and dst in alive
                        for letter in groups[key])
    return Nfa(name, ap, frozenset(alive), frozenset([pre]),
               tuple(transitions), frozenset(accepting))


def stack_matrix_nfa(psi: Formula, levels: int, arity: int = 1,
                     ap: Optional[Sequence] = None,
                     var_index: Optional[Mapping[Optional[str], int]] = None,
                     name: Optional[str] = None) -> Nfa:
    """Automaton accepting exactly the letter sequences of stackings of
    arity-long timed words that satisfy psi.  ap gives the per-track base
    universes (original props, without padding)."""
    if var_index is None:
        var_index = {None: 0}
        for i, var in enumerate(sorted(v for v in free_vars(psi) if v is not None)):
            var_index[var] = i
    if ap is None:
        base = tuple(frozenset(p for p in props_of(psi) if p != EPSILON_PROP)
                     for _ in range(arity))
    else:
        parts = list(ap)
        if parts and isinstance(parts[0], (frozenset, set)):
            if len(parts) != arity:
                raise ValueError("per-track alphabet length != arity")
            base = tuple(frozenset(part) - {EPSILON_PROP} for part in parts)
        else:
            base = tuple(frozenset(parts) - {EPSILON_PROP} for _ in range(arity))
    translated = stack_formula(psi, levels, arity, var_index)
    return _tableau_nfa(translated, arity, stacked_ap(base, levels), var_index,
                        stacked_letters(base, levels),
                        name or f"stack{levels}")


# --- stacked model language ------------------------------------------------


def stack_model_untimed(auto: TimedAutomaton, levels: int,
                        name: Optional[str] = None) -> Nfa:
    """Automaton over one-track stacked letters accepting exactly the
    stackings of the untimed model's words with times in [0, levels):
    one copy of the model per level runs over the fraction sweep, with
    guessed boundary states chaining copy j into copy j + 1."""
    if auto.clocks:
        raise ValueError("stacking needs an untimed (zero-clock) model")
    if len(auto.ap) != 1:
        raise ValueError("stacked models are one-track")
    base = (auto.ap[0],)
    edges: dict[tuple[Hashable, frozenset[str]], set[Hashable]] = {}
    for tr in auto.transitions:
        edges.setdefault((tr.src, tr.letter[0]), set()).add(tr.dst)

    locs = sorted(auto.locations, key=repr)
    states = []
    for bounds in itertools.product(locs, repeat=levels):
        chain = (auto.initial,) + bounds
        states.append((chain, chain[:levels]))
    alphabet = stacked_letters(base, levels)

    def content(part: frozenset[str], level: int) -> Optional[frozenset[str]]:
        # Padding parts read as absent: the position belongs to other tracks.
        if _mark(level) not in part:
            return None
        got = frozenset(sp[0] for p in part
                        if (sp := _split_token(p))[0] is not None
                        and sp[1] == level)
        return None if got == frozenset({EPSILON_PROP}) else got

    transitions: list[tuple[Hashable, Optional[Letter], Hashable]] = []
    seen: set[Hashable] = set(states)
    queue = list(states)
    while queue:
        cur = queue.pop()
        chain, here = cur
        for letter in alphabet:
            moved = [[loc] if (c := content(letter[0], lvl)) is None
                     else sorted(edges.get((loc, c), ()), key=repr)
                     for lvl, loc in enumerate(here)]
            for pick in itertools.product(*moved):
                nxt = (chain, pick)
                transitions.append((cur, letter, nxt))
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)

    accepting = frozenset(s for s in seen
                          if all(s[1][j] == s[0][j + 1] for j in range(levels))
                          and s[0][levels] in auto.accepting)
    return Nfa(name or f"stack{levels}[{auto.name}]", stacked_ap(base, levels),
               frozenset(seen), frozenset(states), tuple(transitions), accepting)


# --- bounded-horizon model checking ----------------------------------------


def mc_bounded(model: TimedAutomaton, phi, levels: int,
               semantics: str = "async"):
    """Model-check a hyperformula over the model's traces restricted to
    times in [0, levels), via the stacked-alphabet quantifier loop."""
    from . import modelcheck
    return modelcheck.mc_bounded_impl(model, phi, levels, semantics)
