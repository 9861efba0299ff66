"""Language inclusion with a one-clock right-hand side.

``ow_inclusion(left, right)`` decides L(left) <= L(right) for an arbitrary
left automaton and a right automaton with at most one clock, returning a
shortest counterexample word otherwise.  Configurations pair the left
location with a region word: atoms are left clocks and right-hand run
states, bucketed by clock region and ordered by clock fractional part.
Values beyond the relevant max constant are fraction-free ("beyond" pool),
since no guard can tell them apart.  The search is breadth-first by word
length; configurations embedding an already stored one (same left location,
subword order on slots with slotwise inclusion) are subsumed, which makes
the infinite configuration space a well-quasi-order and the search
terminating.  Counterexamples are replayed concretely and verified by
ta_membership on both sides before being returned.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Hashable, Mapping, Optional

from .timed_automata import (
    Guard,
    TimedAutomaton,
    Transition,
    TRUE_GUARD,
    ta_classify,
    ta_membership,
)
from .traces import TimedWord


# an atom is ("L", clock, region) or ("R", location, region) inside a slot,
# and ("L", clock) / ("R", location) in the beyond pool; region 2k is the
# point {k}, region 2k+1 the open interval (k, k+1)


@dataclass(frozen=True)
class JointConfig:
    """Left location plus the joint region word.

    ``slots[0]`` holds the atoms whose clock value is an integer; the
    remaining slots are ordered by increasing clock fractional part and are
    never empty.  ``beyond`` holds atoms past their max constant, where the
    exact value is irrelevant.
    """

    left: Hashable
    slots: tuple[frozenset, ...]
    beyond: frozenset


def _reg_sat(reg: Optional[int], op: str, const: int) -> bool:
    """Does every clock value of the region satisfy the comparison?"""
    if reg is None:                      # beyond the max constant
        return op in (">", ">=")
    k = reg // 2
    if reg % 2 == 0:                     # value == k
        if op == "<":
            return k < const
        if op == "<=":
            return k <= const
        if op == ">":
            return k > const
        return k >= const
    if op in ("<", "<="):                # value in (k, k+1)
        return const > k
    return const <= k


def _guard_sat(guard: Guard, regs: Mapping[str, Optional[int]]) -> bool:
    return all(_reg_sat(regs[c], op, k) for c, op, k in guard.conjuncts)


def _embeds(small: JointConfig, big: JointConfig) -> bool:
    """Subword embedding with slotwise inclusion; greedy matching."""
    if small.left != big.left:
        return False
    if not small.beyond <= big.beyond:
        return False
    if not small.slots[0] <= big.slots[0]:
        return False
    j = 1
    for slot in small.slots[1:]:
        while j < len(big.slots) and not slot <= big.slots[j]:
            j += 1
        if j >= len(big.slots):
            return False
        j += 1
    return True


def _edge_map(auto: TimedAutomaton) -> dict[tuple, list[Transition]]:
    index: dict[tuple, list[Transition]] = {}
    for tr in auto.transitions:
        index.setdefault((tr.src, tr.letter), []).append(tr)
    return index


class _Search:
    def __init__(self, left: TimedAutomaton, right: TimedAutomaton):
        if left.arity != right.arity:
            raise ValueError("inclusion needs equal letter arity")
        if not ta_classify(right).one_clock:
            raise ValueError("right-hand automaton must have at most one clock")
        self.left = left
        self.right = right
        self.cap_l = max((k for tr in left.transitions
                          for _, _, k in tr.guard.conjuncts), default=0)
        self.cap_r = max((k for tr in right.transitions
                          for _, _, k in tr.guard.conjuncts), default=0)
        self.left_edges = _edge_map(left)
        self.right_edges = _edge_map(right)
        self.letters = sorted({tr.letter for tr in left.transitions}, key=repr)

    def _cap(self, kind: str) -> int:
        return self.cap_l if kind == "L" else self.cap_r

    def _initial(self) -> JointConfig:
        slot0 = {("L", c, 0) for c in self.left.clocks}
        beyond = set()
        if self.right.clocks:
            slot0.add(("R", self.right.initial, 0))
        else:
            # no clock to watch: park the run where delays cannot move it
            beyond.add(("R", self.right.initial))
        return JointConfig(self.left.initial, (frozenset(slot0),),
                           frozenset(beyond))

    # ---- abstract delay chain

    def _tick(self, cfg: JointConfig) -> Optional[JointConfig]:
        slot0, rest = cfg.slots[0], cfg.slots[1:]
        if slot0:
            bumped, gone = set(), set()
            for kind, ident, reg in slot0:
                if reg // 2 >= self._cap(kind):
                    gone.add((kind, ident))
                else:
                    bumped.add((kind, ident, reg + 1))
            slots = (frozenset(),)
            if bumped:
                slots += (frozenset(bumped),)
            return JointConfig(cfg.left, slots + rest, cfg.beyond | gone)
        if rest:
            bumped = frozenset((kind, ident, reg + 1)
                               for kind, ident, reg in rest[-1])
            return JointConfig(cfg.left, (bumped,) + rest[:-1], cfg.beyond)
        return None

    def _delays(self, cfg: JointConfig) -> list[JointConfig]:
        chain = [cfg]
        while (nxt := self._tick(chain[-1])) is not None:
            chain.append(nxt)
        return chain

    # ---- letter steps

    def _left_regs(self, cfg: JointConfig) -> dict[str, Optional[int]]:
        regs: dict[str, Optional[int]] = {}
        for slot in cfg.slots:
            for kind, ident, reg in slot:
                if kind == "L":
                    regs[ident] = reg
        for kind, ident in cfg.beyond:
            if kind == "L":
                regs[ident] = None
        return regs

    def _right_moves(self, loc: Hashable, letter, reg: Optional[int],
                     reset0: set, kept: set, beyond: set) -> None:
        rclock = {self.right.clocks[0]: reg} if self.right.clocks else {}
        for tr in self.right_edges.get((loc, letter), ()):
            if not _guard_sat(tr.guard, rclock):
                continue
            if tr.resets:
                reset0.add(("R", tr.dst, 0))
            elif reg is None:
                beyond.add(("R", tr.dst))
            else:
                kept.add(("R", tr.dst, reg))

    def _fire(self, cfg: JointConfig, letter):
        """Successors per enabled left edge, right side by subsets."""
        regs = self._left_regs(cfg)
        out = []
        for ltr in self.left_edges.get((cfg.left, letter), ()):
            if not _guard_sat(ltr.guard, regs):
                continue
            reset0: set = set()
            new_slots = []
            for slot in cfg.slots:
                kept: set = set()
                for kind, ident, reg in slot:
                    if kind == "L":
                        if ident in ltr.resets:
                            reset0.add(("L", ident, 0))
                        else:
                            kept.add((kind, ident, reg))
                    else:
                        self._right_moves(ident, letter, reg,
                                          reset0, kept, set())
                new_slots.append(kept)
            beyond: set = set()
            for kind, ident in cfg.beyond:
                if kind == "L":
                    if ident in ltr.resets:
                        reset0.add(("L", ident, 0))
                    else:
                        beyond.add((kind, ident))
                else:
                    self._right_moves(ident, letter, None,
                                      reset0, set(), beyond)
            slots = (frozenset(new_slots[0] | reset0),)
            slots += tuple(frozenset(s) for s in new_slots[1:] if s)
            out.append((ltr, JointConfig(ltr.dst, slots, frozenset(beyond))))
        return out

    def _is_cex(self, cfg: JointConfig) -> bool:
        if cfg.left not in self.left.accepting:
            return False
        for slot in cfg.slots:
            for kind, ident, _ in slot:
                if kind == "R" and ident in self.right.accepting:
                    return False
        return not any(kind == "R" and ident in self.right.accepting
                       for kind, ident in cfg.beyond)

    # ---- search

    def run(self, prune: bool, max_len: Optional[int]) -> Optional[TimedWord]:
        init = self._initial()
        if self._is_cex(init):
            return self._verified(TimedWord(self.left.arity, ()))
        parents: dict[JointConfig, Optional[tuple]] = {init: None}
        store: dict[Hashable, list[JointConfig]] = {init.left: [init]}
        frontier = [init]
        length = 0
        while frontier and (max_len is None or length < max_len):
            length += 1
            layer: list[JointConfig] = []
            for cfg in frontier:
                first = parents[cfg] is None
                for steps, base in enumerate(self._delays(cfg)):
                    if steps == 0 and base.slots[0] and not first:
                        continue    # the next event needs positive elapse
                    for letter in self.letters:
                        for ltr, succ in self._fire(base, letter):
                            if succ in parents:
                                continue
                            if prune and any(
                                    _embeds(old, succ)
                                    for old in store.get(succ.left, ())):
                                continue
                            parents[succ] = (cfg, steps, letter, ltr)
                            if self._is_cex(succ):
                                return self._replay(parents, succ)
                            store.setdefault(succ.left, []).append(succ)
                            layer.append(succ)
            frontier = sorted(layer, key=repr)
        return None

    # ---- concrete counterexample replay

    def _gaps(self, lvals: dict[str, Fraction],
              rruns: set) -> tuple[bool, list[Fraction]]:
        zero, gaps = False, []
        pairs = [(v, self.cap_l) for v in lvals.values()]
        pairs += [(v, self.cap_r) for _, v in rruns]
        for v, cap in pairs:
            if v > cap:
                continue
            frac = v - v.numerator // v.denominator
            if frac == 0:
                zero = True
            else:
                gaps.append(1 - frac)
        return zero, gaps

    def _replay(self, parents: dict, goal: JointConfig) -> TimedWord:
        trail = []
        node = goal
        while parents[node] is not None:
            prev, steps, letter, ltr = parents[node]
            trail.append((steps, letter, ltr))
            node = prev
        trail.reverse()

        now = Fraction(0)
        lvals = {c: Fraction(0) for c in self.left.clocks}
        rruns = {(self.right.initial, Fraction(0))}
        rclock = self.right.clocks[0] if self.right.clocks else None
        events = []
        for pos, (steps, letter, ltr) in enumerate(trail):
            # steps region-changing delays, or one region-silent positive
            # delay when consecutive events share an abstract configuration
            silent = steps == 0 and pos > 0
            for _ in range(1 if silent else steps):
                zero, gaps = self._gaps(lvals, rruns)
                if silent or zero:
                    delay = min(gaps) / 2 if gaps else Fraction(1, 2)
                else:
                    delay = min(gaps) if gaps else Fraction(1)
                now += delay
                lvals = {c: v + delay for c, v in lvals.items()}
                rruns = {(loc, v + delay) for loc, v in rruns}
            events.append((letter, now))
            lvals = {c: Fraction(0) if c in ltr.resets else v
                     for c, v in lvals.items()}
            moved = set()
            for loc, v in rruns:
                for tr in self.right_edges.get((loc, letter), ()):
                    if not tr.guard.satisfied({rclock: v} if rclock else {}):
                        continue
                    moved.add((tr.dst, Fraction(0) if tr.resets else v))
            rruns = moved
        return self._verified(TimedWord(self.left.arity, tuple(events)))

    def _verified(self, word: TimedWord) -> TimedWord:
        assert ta_membership(self.left, word), "replay escaped the left language"
        assert not ta_membership(self.right, word), "replay stayed inside right"
        return word


def ow_inclusion(left: TimedAutomaton, right: TimedAutomaton,
                 prune: bool = True,
                 max_len: Optional[int] = None) -> Optional[TimedWord]:
    """None iff L(left) <= L(right); otherwise a shortest counterexample.

    The right automaton must have at most one clock.  With ``prune`` off the
    well-quasi-order subsumption is disabled and ``max_len`` (a bound on the
    counterexample length) becomes mandatory, since only the pruning makes
    the search terminate in general.
    """
    if not prune and max_len is None:
        raise ValueError("prune-free search needs a length bound")
    return _Search(left, right).run(prune, max_len)


def ow_universality(auto: TimedAutomaton, ap=None,
                    prune: bool = True,
                    max_len: Optional[int] = None) -> Optional[TimedWord]:
    """None iff auto accepts every timed word over the alphabet."""
    universe = tuple(auto.ap if ap is None else ap)
    every = TimedAutomaton(
        name="universal", ap=universe, locations=frozenset(["all"]),
        initial="all", clocks=(), accepting=frozenset(["all"]),
        transitions=tuple(
            Transition("all", letter, TRUE_GUARD, frozenset(), "all")
            for letter in TimedAutomaton(
                name="alphabet", ap=universe, locations=frozenset(["x"]),
                initial="x", clocks=(), transitions=(),
                accepting=frozenset()).letters()))
    return ow_inclusion(every, auto, prune=prune, max_len=max_len)
