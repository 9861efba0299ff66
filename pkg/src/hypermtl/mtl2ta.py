"""Translation of matrix formulas to timed automata.

Supported timed operators: eventualities with a trivial left argument
(Until(Top(), a, I)), universals with an absurd left argument
(DualUntil(Bottom(), a, I)), and the history pair Hist / DualHist.
Timed Until or Since with a nontrivial left argument is rejected; those
belong to the bounded-horizon engines.

The construction replaces every timed subformula by a fresh monitor
proposition, runs the untimed tableau over the enriched alphabet, and
attaches clock machinery that forces each monitor bit to agree with the
truth value of the subformula it stands for:

- an eventuality gets a pool of slots, each a (first, last) clock pair,
  batching pending obligations whose witness windows still intersect;
  a batch discharges at an argument event inside the intersection
  [last + l, first + u];
- a universal gets coverage slots merging obligations into contiguous
  window unions [first + l, last + u]; any event inside a live union
  must satisfy the argument;
- history operators share one clock per distinct argument, reset at
  every argument event, plus a seen bit; the bit guards compare that
  clock against the interval;
- obligations anchored at time zero run against a never-reset clock.

Monitor bits are enforced one-sidedly (bit implies truth) where the bit
occurs only in monotone contexts, which already yields the exact
language; bits read in anti-monotone or equality contexts (dual-history
arguments, history resets, arguments of two-sided monitors) get the
complementary machinery as well.

Slot pools are finite, so pool size trades automaton size against the
number of obligation batches alive at once.  A word with n events never
needs more than (n + 1) / 2 concurrent batches, and the translation is
always sound regardless of pool size: too few slots can only lose words
of the language, never admit outsiders.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
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
    Interval,
    Not,
    Or,
    Since,
    Top,
    Until,
    big_and,
    free_vars,
    nnf,
    props_of,
    subformulas,
)
from .nfa import Nfa, _Tableau
from .timed_automata import Guard, TimedAutomaton, Transition
from .traces import Letter

FRAG_UNTIMED = "untimed"
FRAG_FGH = "fgh"
FRAG_LTLH = "ltlh"
FRAG_UNSUPPORTED = "unsupported"

_MONITOR_PREFIX = "_mon"
_ANCHOR_CLOCK = "gbl"
_DEFAULT_SLOTS = 3
_PRE = "pre"

_PAST_SHAPES = (Top, Bottom, Atom, Not, And, Or, Since, DualSince, Hist,
                DualHist)


# --- fragment classification --------------------------------------------

def is_pure_past(psi: Formula) -> bool:
    """Untimed and free of future operators: the value at any position
    is determined by the prefix up to it."""
    for sub in subformulas(psi):
        if not isinstance(sub, _PAST_SHAPES):
            return False
        interval = getattr(sub, "interval", None)
        if interval is not None and not interval.effectively_untimed:
            return False
    return True


def _timed_subformulas(psi: Formula) -> list[Formula]:
    out = []
    for sub in dict.fromkeys(subformulas(psi)):
        interval = getattr(sub, "interval", None)
        if interval is not None and not interval.effectively_untimed:
            out.append(sub)
    return out


def _shape_of(sub: Formula) -> Optional[str]:
    match sub:
        case Until(Top(), _, _):
            return "F"
        case DualUntil(Bottom(), _, _):
            return "G"
        case Hist():
            return "H"
        case DualHist():
            return "dH"
    return None


def fragment_of(psi: Formula) -> str:
    """Translation fragment of a matrix formula, judged on its nnf."""
    norm = nnf(psi)
    timed = _timed_subformulas(norm)
    if not timed:
        return FRAG_UNTIMED
    shapes = {}
    for sub in timed:
        shape = _shape_of(sub)
        if shape is None:
            return FRAG_UNSUPPORTED
        shapes[sub] = shape
    for sub, shape in shapes.items():
        if shape in ("H", "dH"):
            if sub.interval.is_singular and not is_pure_past(sub.arg):
                return FRAG_UNSUPPORTED
    if all(shape in ("H", "dH") and is_pure_past(sub.arg)
           for sub, shape in shapes.items()):
        return FRAG_LTLH
    return FRAG_FGH


# --- monitor extraction --------------------------------------------------

@dataclass(frozen=True)
class _TimedNode:
    index: int
    prop: str
    shape: str          # F | G | H | dH
    interval: Interval
    arg: Formula        # inner timed subformulas already replaced


def _extract(norm: Formula) -> tuple[Formula, list[_TimedNode]]:
    """Replace timed subformulas of an nnf formula by monitor atoms,
    innermost first, deduplicating by (shape, interval, argument)."""
    nodes: list[_TimedNode] = []
    table: dict[tuple, Atom] = {}

    def monitor(shape: str, interval: Interval, arg: Formula) -> Atom:
        key = (shape, interval, arg)
        if key not in table:
            idx = len(nodes)
            atom = Atom(f"{_MONITOR_PREFIX}{idx}", None)
            nodes.append(_TimedNode(idx, atom.prop, shape, interval, arg))
            table[key] = atom
        return table[key]

    def walk(cur: Formula) -> Formula:
        match cur:
            case Top() | Bottom() | Atom() | Not():
                return cur
            case And(left, right):
                return And(walk(left), walk(right))
            case Or(left, right):
                return Or(walk(left), walk(right))
            case Until(left, right, interval):
                if interval.effectively_untimed:
                    return Until(walk(left), walk(right), interval)
                if not isinstance(left, Top):
                    raise ValueError(
                        "timed Until with a nontrivial left argument is "
                        "not TA-translatable")
                return monitor("F", interval, walk(right))
            case DualUntil(left, right, interval):
                if interval.effectively_untimed:
                    return DualUntil(walk(left), walk(right), interval)
                if not isinstance(left, Bottom):
                    raise ValueError(
                        "timed DualUntil with a nontrivial left argument "
                        "is not TA-translatable")
                return monitor("G", interval, walk(right))
            case Since(left, right, interval):
                if not interval.effectively_untimed:
                    raise ValueError("timed Since is not TA-translatable")
                return Since(walk(left), walk(right), interval)
            case DualSince(left, right, interval):
                if not interval.effectively_untimed:
                    raise ValueError("timed DualSince is not TA-translatable")
                return DualSince(walk(left), walk(right), interval)
            case Hist(arg, interval):
                if interval.effectively_untimed:
                    return Hist(walk(arg), interval)
                return monitor("H", interval, walk(arg))
            case DualHist(arg, interval):
                if interval.effectively_untimed:
                    return DualHist(walk(arg), interval)
                return monitor("dH", interval, walk(arg))
        raise TypeError(f"not an nnf matrix formula: {cur!r}")

    return walk(norm), nodes


def _monitors_in(phi: Formula, monitor_props: frozenset[str]) -> set[str]:
    return {sub.prop for sub in subformulas(phi)
            if isinstance(sub, Atom) and sub.prop in monitor_props}


def _exact_props(skeleton: Formula, nodes: Sequence[_TimedNode]) -> set[str]:
    """Monitor bits that must match their subformula in both directions.

    One-sided enforcement is sound only where the bit occurs
    monotonically; bits under an untimed DualHist, in a history
    argument, or in the argument of a two-sided monitor also need the
    complementary machinery.
    """
    monitor_props = frozenset(node.prop for node in nodes)
    by_prop = {node.prop: node for node in nodes}
    exact: set[str] = set()
    queue: list[str] = []

    def add(prop: str) -> None:
        if prop not in exact:
            exact.add(prop)
            queue.append(prop)

    def seed(phi: Formula) -> None:
        for sub in subformulas(phi):
            if isinstance(sub, DualHist) and sub.interval.effectively_untimed:
                for prop in _monitors_in(sub.arg, monitor_props):
                    add(prop)

    seed(skeleton)
    for node in nodes:
        seed(node.arg)
        if node.shape in ("H", "dH"):
            for prop in _monitors_in(node.arg, monitor_props):
                add(prop)
    while queue:
        node = by_prop[queue.pop()]
        for prop in _monitors_in(node.arg, monitor_props):
            add(prop)
    return exact


# --- guard edges ---------------------------------------------------------

def _edge_lower(clock: str, iv: Interval) -> list[tuple[str, str, int]]:
    """Distance at least the lower bound; trivial at 0 since the events
    involved are strictly later than the window origin."""
    if iv.lower == 0:
        return []
    return [(clock, ">=" if iv.lower_closed else ">", iv.lower)]


def _edge_upper(clock: str, iv: Interval) -> list[tuple[str, str, int]]:
    if iv.upper is None:
        return []
    return [(clock, "<=" if iv.upper_closed else "<", iv.upper)]


def _out_lower(clock: str, iv: Interval) -> Optional[list[tuple[str, str, int]]]:
    """Strictly below the window; impossible for positive distances when
    the window starts at 0."""
    if iv.lower == 0:
        return None
    return [(clock, "<" if iv.lower_closed else "<=", iv.lower)]


def _out_upper(clock: str, iv: Interval) -> Optional[list[tuple[str, str, int]]]:
    if iv.upper is None:
        return None
    return [(clock, ">" if iv.upper_closed else ">=", iv.upper)]


def _meet_op(iv: Interval) -> str:
    # nonempty window intersection [last + l, first + u]
    return "<=" if iv.lower_closed and iv.upper_closed else "<"


def _adj_op(iv: Interval) -> str:
    # contiguous window union; only two open edges leave a point gap
    return "<" if not iv.lower_closed and not iv.upper_closed else "<="


def _stale_op(iv: Interval) -> str:
    # no future event fits the union [first + l, last + u] any more
    return ">" if iv.upper_closed else ">="


# --- clock machines ------------------------------------------------------

@dataclass(frozen=True)
class _Machine:
    node: int           # owning timed node
    role: str           # "wit" (some window event) or "cov" (all of them)
    on_bit: bool        # engage when the monitor bit has this value
    check: Formula
    want: bool          # required value of check at the relevant events
    interval: Interval
    mode: str           # "full" | "low" (no upper bound) | "up" (lower 0)
    slots: tuple[tuple[str, Optional[str]], ...]


def _slot_count(iv: Interval, slot_bound: Optional[int], role: str) -> int:
    if iv.lower == 0 or iv.upper is None:
        return 1
    span = iv.upper - iv.lower
    per_window = -(-iv.upper // span)
    need = 2 * per_window + 2 if role == "wit" else per_window + 1
    if slot_bound is not None:
        need = min(need, max(slot_bound, 1))
    return need


def _machines_for(nodes: Sequence[_TimedNode], exact: set[str],
                  slot_bound: Optional[int]) -> list[_Machine]:
    machines = []
    for node in nodes:
        if node.shape == "F":
            sides = [("wit", True, True), ("cov", False, False)]
        elif node.shape == "G":
            sides = [("cov", True, True), ("wit", False, False)]
        else:
            continue
        for role, on_bit, want in sides:
            if not on_bit and node.prop not in exact:
                continue
            iv = node.interval
            if iv.lower == 0:
                mode = "up"
            elif iv.upper is None:
                mode = "low"
            else:
                mode = "full"
            count = 1 if mode != "full" else _slot_count(iv, slot_bound, role)
            tag = ("w" if role == "wit" else "v") + str(node.index)
            tag += "p" if on_bit else "n"
            slots = tuple(
                (f"{tag}f{j}", f"{tag}l{j}" if mode == "full" else None)
                for j in range(count))
            machines.append(_Machine(node.index, role, on_bit, node.arg,
                                     want, iv, mode, slots))
    return machines


def _machine_options(machine: _Machine, open_t: tuple[bool, ...],
                     engaged: bool, ok: bool):
    """Per-event continuations: (guard conjuncts, resets, new statuses).

    ok is whether the argument has the value the machine watches for at
    the event being read.
    """
    iv = machine.interval
    span = None if iv.upper is None else iv.upper - iv.lower
    open_idx = [i for i, o in enumerate(open_t) if o]
    opts = []
    if machine.role == "wit":
        # discharge any subset of batches whose window intersection
        # contains this event, then batch the fresh obligation
        if ok:
            subsets = [c for size in range(len(open_idx) + 1)
                       for c in itertools.combinations(open_idx, size)]
        else:
            subsets = [()]
        for subset in subsets:
            conjs: list[tuple[str, str, int]] = []
            for i in subset:
                first, last = machine.slots[i]
                if machine.mode == "full":
                    conjs += _edge_lower(last, iv) + _edge_upper(first, iv)
                elif machine.mode == "low":
                    conjs += _edge_lower(first, iv)
                else:
                    conjs += _edge_upper(first, iv)
            after = list(open_t)
            for i in subset:
                after[i] = False
            if not engaged:
                opts.append((conjs, [], tuple(after)))
                continue
            if machine.mode == "full":
                for i, still in enumerate(after):
                    if not still:
                        continue
                    first, last = machine.slots[i]
                    joined = conjs + [(first, _meet_op(iv), span)]
                    opts.append((joined, [last], tuple(after)))
                free = [i for i, o in enumerate(after) if not o]
                if free:
                    first, last = machine.slots[free[0]]
                    claimed = list(after)
                    claimed[free[0]] = True
                    opts.append((conjs, [first, last], tuple(claimed)))
            elif machine.mode == "low":
                # the latest obligation bounds every earlier window
                opts.append((conjs, [machine.slots[0][0]], (True,)))
            else:
                # the oldest obligation bounds every later window
                if after[0]:
                    opts.append((conjs, [], (True,)))
                else:
                    opts.append((conjs, [machine.slots[0][0]], (True,)))
        return opts
    # coverage: events inside a live window union must satisfy the
    # argument, so a violating event carries escape guards per slot
    alts: list[list[tuple[str, str, int]]] = [[]]
    if not ok:
        for i in open_idx:
            first, last = machine.slots[i]
            if machine.mode == "full":
                outs = [_out_lower(first, iv), _out_upper(last, iv)]
            elif machine.mode == "low":
                outs = [_out_lower(first, iv)]
            else:
                outs = [_out_upper(first, iv)]
            outs = [o for o in outs if o is not None]
            alts = [a + o for a in alts for o in outs]
    for base in alts:
        if not engaged:
            opts.append((base, [], open_t))
            continue
        if machine.mode == "full":
            for i in open_idx:
                first, last = machine.slots[i]
                joined = base + [(last, _adj_op(iv), span)]
                opts.append((joined, [last], open_t))
                expired = base + [(last, _stale_op(iv), iv.upper)]
                opts.append((expired, [first, last], open_t))
            free = [i for i, o in enumerate(open_t) if not o]
            if free:
                first, last = machine.slots[free[0]]
                claimed = list(open_t)
                claimed[free[0]] = True
                opts.append((base, [first, last], tuple(claimed)))
        elif machine.mode == "low":
            # the earliest obligation opens the widest window
            if open_t[0]:
                opts.append((base, [], (True,)))
            else:
                opts.append((base, [machine.slots[0][0]], (True,)))
        else:
            # union of (t, t+u] windows tests the latest member only
            opts.append((base, [machine.slots[0][0]], (True,)))
    return opts


@dataclass(frozen=True)
class _HistGroup:
    index: int
    clock: str
    arg: Formula
    monitors: tuple[tuple[str, str, Interval], ...]   # (prop, shape, iv)


def _hist_groups(nodes: Sequence[_TimedNode]) -> list[_HistGroup]:
    grouped: dict[Formula, list[tuple[str, str, Interval]]] = {}
    for node in nodes:
        if node.shape in ("H", "dH"):
            grouped.setdefault(node.arg, []).append(
                (node.prop, node.shape, node.interval))
    return [_HistGroup(i, f"h{i}", arg, tuple(monitors))
            for i, (arg, monitors) in enumerate(grouped.items())]


# --- tableau state enumeration -------------------------------------------

class _Skeleton:
    """Reachable tableau states over the monitor-enriched alphabet.

    Past bits are forward-determined, so successors enumerate only the
    future bits and check them against the unrolling laws.
    """

    def __init__(self, tab: _Tableau, letters: Sequence[Letter]) -> None:
        self.tab = tab
        self.letters = letters
        self.futures = [s for s in tab.tracked
                        if isinstance(s, (Until, DualUntil))]
        self.pasts = [s for s in tab.tracked
                      if isinstance(s, (Since, DualSince, Hist, DualHist))]
        self.future_sets = [
            frozenset(combo)
            for size in range(len(self.futures) + 1)
            for combo in itertools.combinations(self.futures, size)]
        self._succs: dict = {}

    def starts(self) -> list[tuple[Letter, frozenset[Formula]]]:
        base = frozenset(s for s in self.pasts
                         if isinstance(s, (DualSince, DualHist)))
        return [(letter, base | fs)
                for letter in self.letters for fs in self.future_sets]

    def succs(self, cur):
        cached = self._succs.get(cur)
        if cached is not None:
            return cached
        ev = self.tab.ev
        letter, bits = cur
        forced = set()
        for sub in self.pasts:
            match sub:
                case Since(left, right):
                    if ev(right, letter, bits) or (
                            ev(left, letter, bits) and sub in bits):
                        forced.add(sub)
                case DualSince(left, right):
                    if ev(right, letter, bits) and (
                            ev(left, letter, bits) or sub in bits):
                        forced.add(sub)
                case Hist(arg):
                    if ev(arg, letter, bits) or sub in bits:
                        forced.add(sub)
                case DualHist(arg):
                    if not ev(arg, letter, bits) and sub in bits:
                        forced.add(sub)
        past = frozenset(forced)
        out = []
        for nxt_letter in self.letters:
            for fs in self.future_sets:
                nxt_bits = past | fs
                if self._future_ok(bits, nxt_letter, nxt_bits):
                    out.append((nxt_letter, nxt_bits))
        self._succs[cur] = out
        return out

    def _future_ok(self, prev_bits, letter, bits) -> bool:
        ev = self.tab.ev
        for sub in self.futures:
            match sub:
                case Until(left, right):
                    want = ev(right, letter, bits) or (
                        ev(left, letter, bits) and sub in bits)
                case DualUntil(left, right):
                    want = ev(right, letter, bits) and (
                        ev(left, letter, bits) or sub in bits)
            if (sub in prev_bits) != want:
                return False
        return True


# --- the builder ----------------------------------------------------------

def _resolve_ap(psi: Formula, arity: int, ap) -> tuple[frozenset[str], ...]:
    if ap is None:
        return tuple(props_of(psi) for _ in range(arity))
    parts = list(ap)
    if parts and isinstance(parts[0], (frozenset, set)):
        if len(parts) != arity:
            raise ValueError("per-track alphabet length != arity")
        return tuple(frozenset(part) for part in parts)
    return tuple(frozenset(parts) for _ in range(arity))


class _TimedBuilder:
    def __init__(self, psi: Formula, arity: int, ap, var_index,
                 name: str, slot_bound: Optional[int]) -> None:
        norm = nnf(psi)
        self.name = name
        self.arity = arity
        self.skeleton, self.nodes = _extract(norm)
        self.ap = _resolve_ap(norm, arity, ap)
        for universe in self.ap:
            for prop in universe:
                if prop.startswith(_MONITOR_PREFIX):
                    raise ValueError(
                        f"proposition {prop!r} collides with the monitor "
                        "namespace")
        if var_index is None:
            var_index = {None: 0}
            for i, var in enumerate(sorted(
                    v for v in free_vars(norm) if v is not None)):
                var_index[var] = i
        self.monitor_props = frozenset(node.prop for node in self.nodes)
        self.exact = _exact_props(self.skeleton, self.nodes)
        self.machines = _machines_for(self.nodes, self.exact, slot_bound)
        self.groups = _hist_groups(self.nodes)
        self.fg_nodes = [n for n in self.nodes if n.shape in ("F", "G")]
        bundle = big_and([self.skeleton] + [n.arg for n in self.nodes])
        self.tab = _Tableau(bundle, arity, var_index)
        enriched = (self.ap[0] | self.monitor_props,) + self.ap[1:]
        shell = Nfa(name, enriched, frozenset(["x"]), frozenset(["x"]), (),
                    frozenset())
        self.skel = _Skeleton(self.tab, shell.letters())
        self._evc: dict = {}

    # -- formula values ---------------------------------------------------

    def _ev(self, phi: Formula, letter: Letter, bits) -> bool:
        key = (phi, letter, bits)
        val = self._evc.get(key)
        if val is None:
            val = self.tab.ev(phi, letter, bits)
            self._evc[key] = val
        return val

    def _anchor(self, phi: Formula, first, amap: Mapping[str, bool]) -> bool:
        """Value of phi at a non-event anchor strictly before position 0,
        with monitor atoms read from the anchor-bit assignment."""
        match phi:
            case Atom(prop, _) if prop in amap:
                return amap[prop]
            case Top() | Atom():
                return False
            case Bottom():
                return True
            case Not(_):
                return False
            case And(left, right):
                return (self._anchor(left, first, amap)
                        and self._anchor(right, first, amap))
            case Or(left, right):
                return (self._anchor(left, first, amap)
                        or self._anchor(right, first, amap))
            case Since() | Hist():
                return False
            case DualSince() | DualHist():
                return True
            case Until(left, right):
                if first is None:
                    return False
                letter, bits = first
                return self._ev(right, letter, bits) or (
                    self._ev(left, letter, bits) and phi in bits)
            case DualUntil(left, right):
                if first is None:
                    return True
                letter, bits = first
                return self._ev(right, letter, bits) and (
                    self._ev(left, letter, bits) or phi in bits)
        raise TypeError(f"unexpected node at the anchor: {phi!r}")

    def _forced_amap(self) -> dict[str, bool]:
        return {node.prop: node.shape in ("G", "dH") for node in self.nodes
                if node.shape in ("H", "dH")}

    def _empty_amap(self) -> dict[str, bool]:
        return {node.prop: node.shape in ("G", "dH") for node in self.nodes}

    def _start_letter_ok(self, letter: Letter) -> bool:
        # no history can have fired strictly before the first event
        track0 = letter[0]
        for group in self.groups:
            for prop, shape, _ in group.monitors:
                if (prop in track0) != (shape == "dH"):
                    return False
        return True

    # -- per-event machinery -----------------------------------------------

    def _hist_options(self, group: _HistGroup, seen: bool, letter, bits):
        track0 = letter[0]
        alts: list[list[tuple[str, str, int]]] = [[]]
        for prop, shape, iv in group.monitors:
            bit = prop in track0
            if bit == (shape == "H"):
                if not seen:
                    return []
                extra = _edge_lower(group.clock, iv) + _edge_upper(
                    group.clock, iv)
                alts = [a + extra for a in alts]
            elif seen:
                outs = [o for o in (_out_lower(group.clock, iv),
                                    _out_upper(group.clock, iv))
                        if o is not None]
                alts = [a + o for a in alts for o in outs]
        fires = self._ev(group.arg, letter, bits)
        resets = [group.clock] if fires else []
        return [(a, resets, seen or fires) for a in alts]

    def _anchor_init(self, node: _TimedNode, abit: bool) -> str:
        if node.shape == "F":
            if abit:
                return "fo"
            return "g" if node.prop in self.exact else "fd"
        if abit:
            return "g"
        return "fo" if node.prop in self.exact else "fd"

    def _anchor_options(self, node: _TimedNode, status: str, letter, bits):
        if status == "fd":
            return [([], "fd")]
        iv = node.interval
        clock = self.anchor_clock
        value = self._ev(node.arg, letter, bits)
        if status == "fo":
            # pending witness for an obligation opened at time zero
            opts = [([], "fo")]
            if value == (node.shape == "F"):
                conjs = _edge_lower(clock, iv) + _edge_upper(clock, iv)
                if iv.lower == 0:
                    conjs = conjs + [(clock, ">", 0)]
                opts.append((conjs, "fd"))
            return opts
        # "g": coverage anchored at time zero
        if value == (node.shape == "G"):
            return [([], "g")]
        alts = [[(clock, "<=", 0)]]
        for out in (_out_lower(clock, iv), _out_upper(clock, iv)):
            if out is not None:
                alts.append(out)
        return [(a, "g") for a in alts]

    def _variants(self, mstats, seenb, anchors, dst):
        letter, bits = dst
        track0 = letter[0]
        columns = []
        for gi, group in enumerate(self.groups):
            opts = self._hist_options(group, seenb[gi], letter, bits)
            if not opts:
                return
            columns.append(opts)
        for mi, machine in enumerate(self.machines):
            prop = self.nodes[machine.node].prop
            engaged = (prop in track0) == machine.on_bit
            ok = self._ev(machine.check, letter, bits) == machine.want
            opts = _machine_options(machine, mstats[mi], engaged, ok)
            if not opts:
                return
            columns.append(opts)
        for ni, node in enumerate(self.fg_nodes):
            columns.append(self._anchor_options(node, anchors[ni],
                                                letter, bits))
        ng, nm = len(self.groups), len(self.machines)
        for combo in itertools.product(*columns):
            conjs: list[tuple[str, str, int]] = []
            resets: list[str] = []
            seen2 = []
            for part in combo[:ng]:
                conjs += part[0]
                resets += part[1]
                seen2.append(part[2])
            mst2 = []
            for part in combo[ng:ng + nm]:
                conjs += part[0]
                resets += part[1]
                mst2.append(part[2])
            anc2 = []
            for part in combo[ng + nm:]:
                conjs += part[0]
                anc2.append(part[1])
            yield conjs, resets, tuple(mst2), tuple(seen2), tuple(anc2)

    # -- assembly -----------------------------------------------------------

    def _strip(self, letter: Letter) -> Letter:
        return (letter[0] - self.monitor_props,) + letter[1:]

    def build(self) -> TimedAutomaton:
        starts = [s for s in self.skel.starts()
                  if self._start_letter_ok(s[0])]
        forced = self._forced_amap()
        needs_split = bool(self.fg_nodes)
        if not self.fg_nodes:
            for state in starts:
                cond_a = self._anchor(self.skeleton, state, forced)
                cond_b = self._ev(self.skeleton, *state)
                if cond_a != cond_b:
                    needs_split = True
                    break
        if self.fg_nodes or (needs_split and not self.groups):
            self.anchor_clock = _ANCHOR_CLOCK
            extra_clock = [_ANCHOR_CLOCK]
        else:
            self.anchor_clock = self.groups[0].clock if self.groups else ""
            extra_clock = []

        mstats0 = tuple(tuple(False for _ in m.slots) for m in self.machines)
        seen0 = tuple(False for _ in self.groups)
        transitions: set[Transition] = set()
        locations: set[Hashable] = {_PRE}
        queue: list = []

        def emit(src, dst_skel, conjs, resets, mst, seen, anc):
            guard = Guard(tuple(sorted(set(conjs))))
            if not guard.is_satisfiable():
                return
            dst = (dst_skel, mst, seen, anc)
            transitions.add(Transition(src, self._strip(dst_skel[0]), guard,
                                       frozenset(resets), dst))
            if dst not in locations:
                locations.add(dst)
                queue.append(dst)

        fg_props = [node.prop for node in self.fg_nodes]
        for state in starts:
            if self.fg_nodes:
                for choice in itertools.product((False, True),
                                                repeat=len(fg_props)):
                    amap = dict(zip(fg_props, choice))
                    amap.update(forced)
                    if not self._anchor(self.skeleton, state, amap):
                        continue
                    anchors0 = tuple(
                        self._anchor_init(node, amap[node.prop])
                        for node in self.fg_nodes)
                    for conjs, resets, mst, seen, anc in self._variants(
                            mstats0, seen0, anchors0, state):
                        emit(_PRE, state,
                             conjs + [(self.anchor_clock, ">", 0)],
                             resets, mst, seen, anc)
                if self._ev(self.skeleton, *state):
                    inert = tuple("fd" for _ in self.fg_nodes)
                    for conjs, resets, mst, seen, anc in self._variants(
                            mstats0, seen0, inert, state):
                        emit(_PRE, state,
                             conjs + [(self.anchor_clock, "<=", 0)],
                             resets, mst, seen, anc)
            else:
                cond_a = self._anchor(self.skeleton, state, forced)
                cond_b = self._ev(self.skeleton, *state)
                for cond, conj in ((cond_a, (self.anchor_clock, ">", 0)),
                                   (cond_b, (self.anchor_clock, "<=", 0))):
                    if not cond:
                        continue
                    split = [conj] if needs_split else []
                    for conjs, resets, mst, seen, anc in self._variants(
                            mstats0, seen0, (), state):
                        emit(_PRE, state, conjs + split, resets, mst, seen,
                             anc)
                    if not needs_split:
                        break

        while queue:
            loc = queue.pop()
            skel_state, mstats, seenb, anchors = loc
            for dst_skel in self.skel.succs(skel_state):
                for conjs, resets, mst, seen, anc in self._variants(
                        mstats, seenb, anchors, dst_skel):
                    emit(loc, dst_skel, conjs, resets, mst, seen, anc)

        accepting: set[Hashable] = set()
        if self._anchor(self.skeleton, None, self._empty_amap()):
            accepting.add(_PRE)
        for loc in locations:
            if loc == _PRE:
                continue
            skel_state, mstats, _, anchors = loc
            if not self.tab.final_ok(skel_state[1]):
                continue
            if any(status == "fo" for status in anchors):
                continue
            if any(machine.role == "wit" and any(open_t)
                   for machine, open_t in zip(self.machines, mstats)):
                continue
            accepting.add(loc)

        clocks = list(extra_clock)
        clocks += [group.clock for group in self.groups]
        for machine in self.machines:
            for first, last in machine.slots:
                clocks.append(first)
                if last is not None:
                    clocks.append(last)
        return TimedAutomaton(self.name, self.ap, frozenset(locations), _PRE,
                              tuple(clocks), tuple(sorted(
                                  transitions, key=repr)),
                              frozenset(accepting))

    # -- deterministic history-only construction ----------------------------

    def build_deterministic(self) -> TimedAutomaton:
        """Subset construction over the skeleton; sound for formulas whose
        timing sits in history operators with pure-past arguments.

        History bits are forward-determined from the prefix, so every
        subset element agrees on them and the guard regions of distinct
        monitor-bit combinations partition the clock space.
        """
        if self.machines or self.fg_nodes:
            raise ValueError("deterministic construction needs history-only "
                             "timing")
        starts = [s for s in self.skel.starts()
                  if self._start_letter_ok(s[0])]
        forced = self._forced_amap()
        by_letter_a: dict[Letter, set] = {}
        by_letter_b: dict[Letter, set] = {}
        for state in starts:
            if self._anchor(self.skeleton, state, forced):
                by_letter_a.setdefault(state[0], set()).add(state)
            if self._ev(self.skeleton, *state):
                by_letter_b.setdefault(state[0], set()).add(state)
        needs_split = by_letter_a != by_letter_b
        if needs_split and not self.groups:
            self.anchor_clock = _ANCHOR_CLOCK
            clocks: list[str] = [_ANCHOR_CLOCK]
        else:
            self.anchor_clock = self.groups[0].clock if self.groups else ""
            clocks = []
        clocks += [group.clock for group in self.groups]

        seen0 = tuple(False for _ in self.groups)
        initial = (frozenset([_PRE]), seen0)
        locations: set[Hashable] = {initial}
        transitions: set[Transition] = set()
        queue: list = []

        def guard_alts(subset_letter, seenb):
            alts: list[list[tuple[str, str, int]]] = [[]]
            track0 = subset_letter[0]
            for gi, group in enumerate(self.groups):
                for prop, shape, iv in group.monitors:
                    bit = prop in track0
                    if bit == (shape == "H"):
                        if not seenb[gi]:
                            return []
                        extra = _edge_lower(group.clock, iv) + _edge_upper(
                            group.clock, iv)
                        alts = [a + extra for a in alts]
                    elif seenb[gi]:
                        outs = [o for o in (_out_lower(group.clock, iv),
                                            _out_upper(group.clock, iv))
                                if o is not None]
                        alts = [a + o for a in alts for o in outs]
            return alts

        def emit(src, letter, subset, extra):
            if not subset:
                return
            alts = guard_alts(letter, src[1])
            if not alts:
                return
            # subset elements agree on pure-past bits, so any element
            # decides the reset
            witness_bits = next(iter(subset))[1]
            resets = []
            seen2 = list(src[1])
            for gi, group in enumerate(self.groups):
                if self._ev(group.arg, letter, witness_bits):
                    resets.append(group.clock)
                    seen2[gi] = True
            dst = (frozenset(subset), tuple(seen2))
            added = False
            for alt in alts:
                guard = Guard(tuple(sorted(set(alt + extra))))
                if not guard.is_satisfiable():
                    continue
                transitions.add(Transition(src, self._strip(letter), guard,
                                           frozenset(resets), dst))
                added = True
            if added and dst not in locations:
                locations.add(dst)
                queue.append(dst)

        for letter in set(by_letter_a) | set(by_letter_b):
            subset_a = by_letter_a.get(letter, set())
            subset_b = by_letter_b.get(letter, set())
            if needs_split:
                emit(initial, letter, subset_a, [(self.anchor_clock, ">", 0)])
                emit(initial, letter, subset_b, [(self.anchor_clock, "<=", 0)])
            else:
                emit(initial, letter, subset_a, [])

        while queue:
            loc = queue.pop()
            subset, _ = loc
            buckets: dict[Letter, set] = {}
            for element in subset:
                for nxt in self.skel.succs(element):
                    buckets.setdefault(nxt[0], set()).add(nxt)
            for letter, nxt_subset in buckets.items():
                emit(loc, letter, nxt_subset, [])

        accepting: set[Hashable] = set()
        if self._anchor(self.skeleton, None, self._empty_amap()):
            accepting.add(initial)
        for loc in locations:
            subset, _ = loc
            if any(element != _PRE and self.tab.final_ok(element[1])
                   for element in subset):
                accepting.add(loc)
        return TimedAutomaton(self.name, self.ap, frozenset(locations),
                              initial, tuple(clocks),
                              tuple(sorted(transitions, key=repr)),
                              frozenset(accepting))


# --- public entry points ---------------------------------------------------

def mtl_to_ta(psi: Formula, arity: int = 1, ap=None, var_index=None,
              name: str = "mtl", slot_bound: Optional[int] = _DEFAULT_SLOTS
              ) -> TimedAutomaton:
    """Timed automaton accepting exactly the timed words satisfying psi
    at time zero.

    slot_bound caps the obligation pool of each timed eventuality or
    universal.  The default of 3 is exact for every word with at most
    six events (a word with n events never forces more than (n + 1) / 2
    concurrent batches); pass None for the proven general bound
    2 * ceil(u / (u - l)) + 2, which is exact on all words but much
    larger, or a bigger integer for longer adversarial words.  Any cap
    is sound: missing slots can only reject words, never accept extras.
    """
    frag = fragment_of(psi)
    if frag == FRAG_UNSUPPORTED:
        raise ValueError(
            "formula mixes timing into Until/Since arguments; only "
            "eventualities, universals and history windows translate")
    return _TimedBuilder(psi, arity, ap, var_index, name, slot_bound).build()


def ltlh_to_dta(psi: Formula, arity: int = 1, ap=None, var_index=None,
                name: str = "ltlh") -> TimedAutomaton:
    """Deterministic automaton for formulas whose only timed operators
    are history windows over pure-past arguments."""
    frag = fragment_of(psi)
    if frag not in (FRAG_LTLH, FRAG_UNTIMED):
        raise ValueError(
            "deterministic translation needs history-only timing over "
            "pure-past arguments")
    builder = _TimedBuilder(psi, arity, ap, var_index, name, None)
    return builder.build_deterministic()
