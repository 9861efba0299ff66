"""Timed automata over structured letters, with zone-based emptiness.

Letters are tuples of proposition sets (arity >= 1), matching timed
words.  Alphabets are implicit: a letter is valid when component i is a
subset of ap[i].  Guards are conjunctions of atomic clock comparisons
against natural constants; no diagonal constraints, no location
invariants.  Acceptance is by location at the end of the (finite) word.
"""

from __future__ import annotations

import functools
import itertools
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Hashable, Iterable, Mapping, Optional, Sequence

from .traces import EPSILON_SET, Letter, TimedWord
from .zones import (
    Bound,
    Matrix,
    is_empty,
    solve_difference_constraints,
    zone_constrain,
    zone_extrapolate,
    zone_includes,
    zone_reset,
    zone_up,
    zone_zero,
)

_RELATIONS = ("<", "<=", ">", ">=")

# Per-clock solution interval: (lo, lo_strict, hi, hi_strict), hi None = inf.
_Ival = tuple[int, bool, Optional[int], bool]
_FULL: _Ival = (0, False, None, True)


@dataclass(frozen=True)
class Guard:
    """Conjunction of clock comparisons; empty conjunction is true."""

    conjuncts: tuple[tuple[str, str, int], ...] = ()

    def __post_init__(self) -> None:
        for clock, op, const in self.conjuncts:
            if op not in _RELATIONS:
                raise ValueError(f"bad relation in guard: {op}")
            if const < 0:
                raise ValueError(f"negative guard constant: {const}")

    def satisfied(self, valuation: Mapping[str, Fraction]) -> bool:
        for clock, op, const in self.conjuncts:
            v = valuation[clock]
            if op == "<" and not v < const:
                return False
            if op == "<=" and not v <= const:
                return False
            if op == ">" and not v > const:
                return False
            if op == ">=" and not v >= const:
                return False
        return True

    def clocks(self) -> frozenset[str]:
        return frozenset(c for c, _, _ in self.conjuncts)

    def interval_for(self, clock: str) -> _Ival:
        ival = _FULL
        for c, op, const in self.conjuncts:
            if c == clock:
                ival = _ival_meet(ival, _ival_of_atom(op, const))
        return ival

    def box(self, clocks: Sequence[str]) -> dict[str, _Ival]:
        return {c: self.interval_for(c) for c in clocks}

    def is_true(self, clocks: Sequence[str]) -> bool:
        return all(self.interval_for(c) == _FULL for c in clocks)

    def is_satisfiable(self) -> bool:
        return all(not _ival_empty(self.interval_for(c)) for c in self.clocks())

    def __str__(self) -> str:
        if not self.conjuncts:
            return "true"
        return " & ".join(f"{c}{op}{k}" for c, op, k in self.conjuncts)


TRUE_GUARD = Guard()


def _ival_of_atom(op: str, const: int) -> _Ival:
    if op == "<":
        return (0, False, const, True)
    if op == "<=":
        return (0, False, const, False)
    if op == ">":
        return (const, True, None, True)
    return (const, False, None, True)


def _ival_meet(a: _Ival, b: _Ival) -> _Ival:
    lo, los = max((a[0], a[1]), (b[0], b[1]), key=lambda p: (p[0], p[1]))
    if a[2] is None:
        hi, his = b[2], b[3]
    elif b[2] is None:
        hi, his = a[2], a[3]
    else:
        hi, his = min((a[2], not a[3]), (b[2], not b[3]), key=lambda p: (p[0], p[1]))
        his = not his
    return (lo, los, hi, his)


def _ival_empty(ival: _Ival) -> bool:
    lo, los, hi, his = ival
    if hi is None:
        return False
    if lo > hi:
        return True
    return lo == hi and (los or his)


def _ival_singular(ival: _Ival) -> bool:
    lo, los, hi, his = ival
    return hi is not None and lo == hi and not los and not his


@dataclass(frozen=True)
class Transition:
    src: Hashable
    letter: Letter
    guard: Guard
    resets: frozenset[str]
    dst: Hashable


@dataclass(frozen=True)
class TimedAutomaton:
    name: str
    ap: tuple[frozenset[str], ...]
    locations: frozenset[Hashable]
    initial: Hashable
    clocks: tuple[str, ...]
    transitions: tuple[Transition, ...]
    accepting: frozenset[Hashable]

    def __post_init__(self) -> None:
        if not self.ap:
            raise ValueError("automaton needs letter arity >= 1")
        if self.initial not in self.locations:
            raise ValueError("initial location not declared")
        if not self.accepting <= self.locations:
            raise ValueError("accepting locations not declared")
        clockset = set(self.clocks)
        if len(clockset) != len(self.clocks):
            raise ValueError("duplicate clock id")
        for tr in self.transitions:
            if tr.src not in self.locations or tr.dst not in self.locations:
                raise ValueError(f"transition endpoint not declared: {tr}")
            if not self.letter_ok(tr.letter):
                raise ValueError(f"letter outside alphabet: {tr.letter}")
            if not tr.guard.clocks() <= clockset:
                raise ValueError(f"guard uses undeclared clock: {tr.guard}")
            if not tr.resets <= clockset:
                raise ValueError(f"reset of undeclared clock: {sorted(tr.resets)}")

    @property
    def arity(self) -> int:
        return len(self.ap)

    def letter_ok(self, letter: Letter) -> bool:
        return len(letter) == self.arity and all(
            part <= self.ap[i] for i, part in enumerate(letter))

    def letters(self) -> list[Letter]:
        """Every valid letter, in a deterministic order."""
        parts = []
        for universe in self.ap:
            props = sorted(universe)
            subsets = [frozenset(combo)
                       for size in range(len(props) + 1)
                       for combo in itertools.combinations(props, size)]
            parts.append(subsets)
        return [tuple(combo) for combo in itertools.product(*parts)]

    def max_consts(self) -> dict[str, int]:
        out = {c: 0 for c in self.clocks}
        for tr in self.transitions:
            for clock, _, const in tr.guard.conjuncts:
                out[clock] = max(out[clock], const)
        return out


class TaFormatError(ValueError):
    pass


_GUARD_ATOM_RE = re.compile(r"^\s*([A-Za-z_][A-Za-z0-9_]*)\s*(<=|>=|<|>|=)\s*(\d+)\s*$")


def parse_guard(text: str) -> Guard:
    text = text.strip()
    if text == "true":
        return TRUE_GUARD
    conjuncts: list[tuple[str, str, int]] = []
    for part in text.split("&"):
        m = _GUARD_ATOM_RE.match(part)
        if m is None:
            raise TaFormatError(f"bad guard atom: {part.strip()!r}")
        clock, op, const = m.group(1), m.group(2), int(m.group(3))
        if op == "=":
            conjuncts.append((clock, ">=", const))
            conjuncts.append((clock, "<=", const))
        else:
            conjuncts.append((clock, op, const))
    return Guard(tuple(conjuncts))


def _parse_propset(text: str, where: str) -> frozenset[str]:
    text = text.strip()
    if not (text.startswith("{") and text.endswith("}")):
        raise TaFormatError(f"{where}: expected {{...}}, got {text!r}")
    body = text[1:-1].strip()
    if not body:
        return frozenset()
    return frozenset(p.strip() for p in body.split(","))


_TRANS_RE = re.compile(
    r"^trans\s+(\S+)\s*->\s*(\S+)\s+on\s+(\{[^}]*\})"
    r"(?:\s+when\s+(.*?))?(?:\s+reset\s+(\{[^}]*\}))?\s*$")


def ta_parse(text: str, source: str = "<automaton>") -> TimedAutomaton:
    """Parse the plain-text automaton format (arity-1 letters).

    Lines: `automaton NAME`, `alphabet p q ...`, `clocks x y ...`,
    `location ID [init] [accepting]`,
    `trans SRC -> DST on {p,q} [when GUARD] [reset {x,y}]`.
    `#` starts a comment; blank lines are ignored.
    """
    name = None
    props: Optional[frozenset[str]] = None
    clocks: list[str] = []
    locations: list[str] = []
    initial = None
    accepting: set[str] = set()
    raw_transitions: list[tuple[int, str, str, str, str, str]] = []

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue

        def err(msg: str) -> TaFormatError:
            return TaFormatError(f"{source}:{lineno}: {msg}")

        if line.startswith("automaton "):
            if name is not None:
                raise err("duplicate automaton header")
            name = line[len("automaton "):].strip()
        elif line.startswith("alphabet"):
            if props is not None:
                raise err("duplicate alphabet line")
            props = frozenset(line.split()[1:])
            if "_eps" in props:
                raise err("_eps is reserved and cannot be declared")
        elif line.startswith("clocks"):
            clocks.extend(line.split()[1:])
        elif line.startswith("location "):
            fields = line.split()
            loc = fields[1]
            if loc in locations:
                raise err(f"duplicate location {loc}")
            locations.append(loc)
            for flag in fields[2:]:
                if flag == "init":
                    if initial is not None:
                        raise err("second init location")
                    initial = loc
                elif flag == "accepting":
                    accepting.add(loc)
                else:
                    raise err(f"unknown location flag {flag!r}")
        elif line.startswith("trans "):
            m = _TRANS_RE.match(line)
            if m is None:
                raise err(f"bad transition syntax: {line!r}")
            raw_transitions.append((lineno, m.group(1), m.group(2), m.group(3),
                                    m.group(4) or "true", m.group(5) or "{}"))
        else:
            raise err(f"unrecognized line: {line!r}")

    if name is None:
        raise TaFormatError(f"{source}: missing automaton header")
    if props is None:
        raise TaFormatError(f"{source}: missing alphabet line")
    if initial is None:
        raise TaFormatError(f"{source}: no init location")

    transitions = []
    for lineno, src, dst, letter_text, guard_text, reset_text in raw_transitions:
        try:
            letter_props = _parse_propset(letter_text, "letter")
            guard = parse_guard(guard_text)
            resets = _parse_propset(reset_text, "reset")
        except TaFormatError as exc:
            raise TaFormatError(f"{source}:{lineno}: {exc}") from None
        if not letter_props <= props:
            raise TaFormatError(
                f"{source}:{lineno}: letter uses undeclared props "
                f"{sorted(letter_props - props)}")
        transitions.append(Transition(src, (letter_props,), guard,
                                      frozenset(resets), dst))

    try:
        return TimedAutomaton(name, (props,), frozenset(locations), initial,
                              tuple(clocks), tuple(transitions),
                              frozenset(accepting))
    except ValueError as exc:
        raise TaFormatError(f"{source}: {exc}") from None


def ta_lint(auto: TimedAutomaton) -> list[str]:
    """Static warnings: unsatisfiable guards and unreachable locations."""
    warnings = []
    for i, tr in enumerate(auto.transitions):
        if not tr.guard.is_satisfiable():
            warnings.append(
                f"transition {i} ({tr.src} -> {tr.dst}) has unsatisfiable "
                f"guard {tr.guard}")
    reached = {auto.initial}
    frontier = [auto.initial]
    succs: dict[Hashable, list[Hashable]] = {}
    for tr in auto.transitions:
        succs.setdefault(tr.src, []).append(tr.dst)
    while frontier:
        loc = frontier.pop()
        for nxt in succs.get(loc, []):
            if nxt not in reached:
                reached.add(nxt)
                frontier.append(nxt)
    for loc in sorted(auto.locations - reached, key=str):
        warnings.append(f"location {loc} is unreachable")
    return warnings


@functools.lru_cache(maxsize=64)
def _edge_index(auto: TimedAutomaton) -> Mapping[tuple, tuple[Transition, ...]]:
    index: dict[tuple, list[Transition]] = {}
    for tr in auto.transitions:
        index.setdefault((tr.src, tr.letter), []).append(tr)
    return {key: tuple(edges) for key, edges in index.items()}


def ta_membership(auto: TimedAutomaton, word: TimedWord) -> bool:
    """Forward subset simulation over concrete clock valuations."""
    if word.arity != auto.arity:
        raise ValueError(f"word arity {word.arity} != automaton arity {auto.arity}")
    zero = tuple(Fraction(0) for _ in auto.clocks)
    states: set[tuple[Hashable, tuple[Fraction, ...]]] = {(auto.initial, zero)}
    by_edge = _edge_index(auto)
    prev = Fraction(0)
    for letter, time in word:
        if not auto.letter_ok(letter):
            return False
        delay = time - prev
        prev = time
        nxt: set[tuple[Hashable, tuple[Fraction, ...]]] = set()
        for loc, values in states:
            aged = tuple(v + delay for v in values)
            valuation = dict(zip(auto.clocks, aged))
            for tr in by_edge.get((loc, letter), ()):
                if not tr.guard.satisfied(valuation):
                    continue
                after = tuple(
                    Fraction(0) if clock in tr.resets else aged[i]
                    for i, clock in enumerate(auto.clocks))
                nxt.add((tr.dst, after))
        if not nxt:
            return False
        states = nxt
    return any(loc in auto.accepting for loc, _ in states)


def ta_emptiness(auto: TimedAutomaton) -> Optional[TimedWord]:
    """A witness word in L(auto), or None when the language is empty.

    Zone BFS with per-clock max-constant extrapolation and inclusion
    subsumption; witness timestamps are the greedy least dyadic solution
    of the path's difference constraints.
    """
    if auto.initial in auto.accepting:
        return TimedWord(auto.arity, ())
    consts = auto.max_consts()
    max_list = [consts[c] for c in auto.clocks]
    cindex = {c: i + 1 for i, c in enumerate(auto.clocks)}
    by_src: dict[Hashable, list[Transition]] = {}
    for tr in auto.transitions:
        by_src.setdefault(tr.src, []).append(tr)

    start = (auto.initial, zone_zero(len(auto.clocks)))
    parent: dict[tuple[Hashable, Matrix], tuple[Optional[tuple], Optional[Transition]]]
    parent = {start: (None, None)}
    seen: dict[Hashable, list[Matrix]] = {auto.initial: [start[1]]}
    queue: list[tuple[Hashable, Matrix, bool]] = [(start[0], start[1], True)]
    goal = None
    while queue and goal is None:
        loc, zone, first = queue.pop(0)
        raised = zone_up(zone, strict=not first)
        for tr in by_src.get(loc, []):
            succ = raised
            for clock, op, const in tr.guard.conjuncts:
                succ = zone_constrain(succ, cindex[clock], op, const)
            if is_empty(succ):
                continue
            for clock in sorted(tr.resets):
                succ = zone_reset(succ, cindex[clock])
            succ = zone_extrapolate(succ, max_list)
            kept = seen.setdefault(tr.dst, [])
            if any(zone_includes(old, succ) for old in kept):
                continue
            kept[:] = [old for old in kept if not zone_includes(succ, old)]
            kept.append(succ)
            node = (tr.dst, succ)
            parent[node] = ((loc, zone), tr)
            if tr.dst in auto.accepting:
                goal = node
                break
            queue.append((tr.dst, succ, False))
    if goal is None:
        return None

    path: list[Transition] = []
    node = goal
    while parent[node][1] is not None:
        prev, tr = parent[node]
        path.append(tr)
        node = prev
    path.reverse()
    return _witness_from_path(auto, path)


def _witness_from_path(auto: TimedAutomaton,
                       path: Sequence[Transition]) -> TimedWord:
    n = len(path)
    constraints: list[tuple[int, int, Bound]] = []
    constraints.append((0, 1, (0, False)))  # T_1 >= 0
    for i in range(1, n):
        constraints.append((i, i + 1, (0, True)))  # T_i < T_{i+1}
    last_reset = {clock: 0 for clock in auto.clocks}
    for i, tr in enumerate(path, start=1):
        for clock, op, const in tr.guard.conjuncts:
            r = last_reset[clock]
            if op == "<":
                constraints.append((i, r, (const, True)))
            elif op == "<=":
                constraints.append((i, r, (const, False)))
            elif op == ">":
                constraints.append((r, i, (-const, True)))
            else:
                constraints.append((r, i, (-const, False)))
        for clock in tr.resets:
            last_reset[clock] = i
    times = solve_difference_constraints(n, constraints)
    assert times is not None, "zone path must be realizable"
    events = tuple((tr.letter, times[i]) for i, tr in enumerate(path, start=1))
    return TimedWord(auto.arity, events)


def _rename_clock(idx: int, clock: str) -> str:
    return f"c{idx}_{clock}"


def _renamed_transition(idx: int, tr: Transition) -> tuple[Guard, frozenset[str]]:
    guard = Guard(tuple((_rename_clock(idx, c), op, k)
                        for c, op, k in tr.guard.conjuncts))
    resets = frozenset(_rename_clock(idx, c) for c in tr.resets)
    return guard, resets


def ta_product_sync(components: Sequence[TimedAutomaton],
                    name: str = "product") -> TimedAutomaton:
    """Synchronous product: all components fire one transition per event,
    at the same timestamp; letters are concatenated component letters."""
    if not components:
        raise ValueError("product of zero automata")
    ap = tuple(part for comp in components for part in comp.ap)
    clocks = tuple(_rename_clock(i, c)
                   for i, comp in enumerate(components) for c in comp.clocks)
    locations = frozenset(itertools.product(*[sorted(c.locations, key=str)
                                              for c in components]))
    initial = tuple(c.initial for c in components)
    accepting = frozenset(loc for loc in locations
                          if all(part in comp.accepting
                                 for part, comp in zip(loc, components)))
    transitions = []
    for combo in itertools.product(*[comp.transitions for comp in components]):
        letter = tuple(part for tr in combo for part in tr.letter)
        conjuncts: list[tuple[str, str, int]] = []
        resets: set[str] = set()
        for i, tr in enumerate(combo):
            g, r = _renamed_transition(i, tr)
            conjuncts.extend(g.conjuncts)
            resets |= r
        transitions.append(Transition(tuple(tr.src for tr in combo), letter,
                                      Guard(tuple(conjuncts)),
                                      frozenset(resets),
                                      tuple(tr.dst for tr in combo)))
    return TimedAutomaton(name, ap, locations, initial, clocks,
                          tuple(transitions), accepting)


def ta_intersect(left: TimedAutomaton, right: TimedAutomaton,
                 name: str = "intersection") -> TimedAutomaton:
    """Language intersection of two automata over the same letter arity."""
    if left.arity != right.arity:
        raise ValueError("arity mismatch in intersection")
    ap = tuple(a | b for a, b in zip(left.ap, right.ap))
    clocks = tuple(itertools.chain(
        (_rename_clock(0, c) for c in left.clocks),
        (_rename_clock(1, c) for c in right.clocks)))
    locations = frozenset(itertools.product(sorted(left.locations, key=str),
                                            sorted(right.locations, key=str)))
    initial = (left.initial, right.initial)
    accepting = frozenset((a, b) for a, b in locations
                          if a in left.accepting and b in right.accepting)
    transitions = []
    for ltr in left.transitions:
        gl, rl = _renamed_transition(0, ltr)
        for rtr in right.transitions:
            if rtr.letter != ltr.letter:
                continue
            gr, rr = _renamed_transition(1, rtr)
            transitions.append(Transition(
                (ltr.src, rtr.src), ltr.letter,
                Guard(gl.conjuncts + gr.conjuncts), rl | rr,
                (ltr.dst, rtr.dst)))
    return TimedAutomaton(name, ap, locations, initial, clocks,
                          tuple(transitions), accepting)


def ta_stutter(auto: TimedAutomaton, name: Optional[str] = None) -> TimedAutomaton:
    """Closure under stuttering: an `_eps` self-loop at every location."""
    if any("_eps" in part for part in auto.ap):
        raise ValueError("automaton already mentions _eps")
    ap = tuple(part | {"_eps"} for part in auto.ap)
    eps_letter = tuple(EPSILON_SET for _ in auto.ap)
    loops = tuple(Transition(loc, eps_letter, TRUE_GUARD, frozenset(), loc)
                  for loc in sorted(auto.locations, key=str))
    return TimedAutomaton(name or f"{auto.name}_eps", ap, auto.locations,
                          auto.initial, auto.clocks,
                          auto.transitions + loops, auto.accepting)


@dataclass(frozen=True)
class TaClassification:
    deterministic: bool
    one_clock: bool
    ns: bool
    rot: Optional[bool]
    mia: bool


def _boxes_intersect(a: dict[str, _Ival], b: dict[str, _Ival]) -> bool:
    return all(not _ival_empty(_ival_meet(a[c], b[c])) for c in a)


def ta_classify(auto: TimedAutomaton) -> TaClassification:
    clocks = auto.clocks
    deterministic = True
    groups: dict[tuple[Hashable, Letter], list[Guard]] = {}
    for tr in auto.transitions:
        groups.setdefault((tr.src, tr.letter), []).append(tr.guard)
    for guards in groups.values():
        for g1, g2 in itertools.combinations(guards, 2):
            if _boxes_intersect(g1.box(clocks), g2.box(clocks)):
                deterministic = False
                break
        if not deterministic:
            break
    one_clock = len(clocks) <= 1
    ns = True
    for tr in auto.transitions:
        if not tr.guard.is_satisfiable():
            continue
        if any(_ival_singular(tr.guard.interval_for(c)) for c in clocks):
            ns = False
            break
    rot: Optional[bool] = None
    if one_clock:
        rot = all(tr.guard.is_true(clocks) or set(clocks) <= tr.resets
                  for tr in auto.transitions)
    mia = one_clock and ns and bool(rot)
    return TaClassification(deterministic, one_clock, ns, rot, mia)


def _box_subtract(box: dict[str, _Ival], cut: dict[str, _Ival],
                  clocks: Sequence[str]) -> list[dict[str, _Ival]]:
    """box minus cut as disjoint boxes (may be empty)."""
    if not _boxes_intersect(box, cut):
        return [dict(box)]
    pieces = []
    remaining = dict(box)
    for clock in clocks:
        lo, los, hi, his = remaining[clock]
        clo, clos, chi, chis = cut[clock]
        below = _ival_meet((lo, los, hi, his), (0, False, clo, not clos))
        if not _ival_empty(below):
            piece = dict(remaining)
            piece[clock] = below
            pieces.append(piece)
        if chi is not None:
            above = _ival_meet((lo, los, hi, his), (chi, not chis, None, True))
            if not _ival_empty(above):
                piece = dict(remaining)
                piece[clock] = above
                pieces.append(piece)
        remaining[clock] = _ival_meet(remaining[clock], cut[clock])
    return pieces


def _guard_of_box(box: dict[str, _Ival], clocks: Sequence[str]) -> Guard:
    conjuncts = []
    for clock in clocks:
        lo, los, hi, his = box[clock]
        if lo > 0 or los:
            conjuncts.append((clock, ">" if los else ">=", lo))
        if hi is not None:
            conjuncts.append((clock, "<" if his else "<=", hi))
    return Guard(tuple(conjuncts))


def ta_complete_and_complement(auto: TimedAutomaton,
                               name: Optional[str] = None) -> TimedAutomaton:
    """Complement of a deterministic automaton: complete with a rejecting
    sink over all guard gaps, then flip acceptance."""
    flags = ta_classify(auto)
    if not flags.deterministic:
        raise ValueError("complement requires a deterministic automaton")
    sink: Hashable = "_sink"
    while sink in auto.locations:
        sink = sink + "_"
    clocks = auto.clocks
    universe = {c: _FULL for c in clocks}
    extra: list[Transition] = []
    all_letters = auto.letters()
    by_key: dict[tuple[Hashable, Letter], list[Guard]] = {}
    for tr in auto.transitions:
        by_key.setdefault((tr.src, tr.letter), []).append(tr.guard)
    for loc in sorted(auto.locations, key=str):
        for letter in all_letters:
            gaps = [dict(universe)]
            for guard in by_key.get((loc, letter), []):
                cut = guard.box(clocks)
                gaps = [piece for gap in gaps
                        for piece in _box_subtract(gap, cut, clocks)]
            for gap in gaps:
                extra.append(Transition(loc, letter, _guard_of_box(gap, clocks),
                                        frozenset(), sink))
    for letter in all_letters:
        extra.append(Transition(sink, letter, TRUE_GUARD, frozenset(), sink))
    locations = auto.locations | {sink}
    accepting = frozenset(locations - auto.accepting)
    return TimedAutomaton(name or f"{auto.name}_comp", auto.ap, locations,
                          auto.initial, clocks, auto.transitions + tuple(extra),
                          accepting)


def ta_project(auto: TimedAutomaton, keep: Sequence[int],
               name: Optional[str] = None) -> TimedAutomaton:
    """Existentially project letters onto the given track indices."""
    if not keep or sorted(set(keep)) != sorted(keep):
        raise ValueError("keep must be a nonempty list of distinct indices")
    for i in keep:
        if not 0 <= i < auto.arity:
            raise ValueError(f"track index out of range: {i}")
    ap = tuple(auto.ap[i] for i in keep)
    transitions = tuple(
        Transition(tr.src, tuple(tr.letter[i] for i in keep), tr.guard,
                   tr.resets, tr.dst)
        for tr in auto.transitions)
    return TimedAutomaton(name or f"{auto.name}_proj", ap, auto.locations,
                          auto.initial, auto.clocks, transitions,
                          auto.accepting)
