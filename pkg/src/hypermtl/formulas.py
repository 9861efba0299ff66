"""Formula ASTs for MTL with trace variables and prenex HyperMTL.

Formulas are immutable trees.  Temporal operators carry nonsingular
intervals with natural endpoints (Hist/DualHist also accept singular
ones).  Negation normal form keeps negation on atoms only; `comp`
builds the classical complement, which coincides with negation only
when the formula is read over a single (possibly multi-track) word.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

EPSILON_PROP = "_eps"

EXISTS = "exists"
FORALL = "forall"


@dataclass(frozen=True)
class Interval:
    """Interval over the time axis with natural (or infinite) endpoints."""

    lower: int
    upper: Optional[int]  # None stands for infinity
    lower_closed: bool = True
    upper_closed: bool = False

    def __post_init__(self) -> None:
        if not isinstance(self.lower, int) or isinstance(self.lower, bool):
            raise ValueError("interval lower bound must be a natural number")
        if self.lower < 0:
            raise ValueError("interval lower bound must be nonnegative")
        if self.upper is None:
            if self.upper_closed:
                raise ValueError("interval cannot be closed at infinity")
            return
        if not isinstance(self.upper, int) or isinstance(self.upper, bool):
            raise ValueError("interval upper bound must be a natural number")
        if self.upper < self.lower:
            raise ValueError("interval upper bound below lower bound")
        if self.upper == self.lower and not (self.lower_closed and self.upper_closed):
            raise ValueError("empty interval")

    @property
    def is_singular(self) -> bool:
        return self.upper is not None and self.upper == self.lower

    @property
    def effectively_untimed(self) -> bool:
        # Lower bound 0 and no upper bound: openness of the lower end is
        # irrelevant because temporal witnesses are strictly offset anyway.
        return self.lower == 0 and self.upper is None

    def contains(self, value: Fraction | int) -> bool:
        value = Fraction(value)
        if value < self.lower or (value == self.lower and not self.lower_closed):
            return False
        if self.upper is None:
            return True
        if value > self.upper or (value == self.upper and not self.upper_closed):
            return False
        return True

    def __str__(self) -> str:
        lo = "[" if self.lower_closed else "("
        hi = "]" if self.upper_closed else ")"
        up = "inf" if self.upper is None else str(self.upper)
        return f"{lo}{self.lower},{up}{hi}"


UNTIMED = Interval(0, None)


class Formula:
    """Base class for matrix formulas."""

    __slots__ = ()

    def __and__(self, other: "Formula") -> "Formula":
        return And(self, other)

    def __or__(self, other: "Formula") -> "Formula":
        return Or(self, other)

    def __invert__(self) -> "Formula":
        return Not(self)

    def __rshift__(self, other: "Formula") -> "Formula":
        return Implies(self, other)

    def __str__(self) -> str:
        return format_formula(self)


@dataclass(frozen=True)
class Top(Formula):
    """True at event positions; Top(v) tests events of trace v only."""

    var: Optional[str] = None


@dataclass(frozen=True)
class Bottom(Formula):
    """True at non-event positions; Bottom(v) is per-trace."""

    var: Optional[str] = None


@dataclass(frozen=True)
class Atom(Formula):
    prop: str
    var: Optional[str] = None


@dataclass(frozen=True)
class Not(Formula):
    arg: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


def _check_nonsingular(interval: Interval, op: str) -> None:
    if interval.is_singular:
        raise ValueError(f"{op} does not admit a singular interval")


@dataclass(frozen=True)
class Until(Formula):
    left: Formula
    right: Formula
    interval: Interval = UNTIMED

    def __post_init__(self) -> None:
        _check_nonsingular(self.interval, "U")


@dataclass(frozen=True)
class DualUntil(Formula):
    left: Formula
    right: Formula
    interval: Interval = UNTIMED

    def __post_init__(self) -> None:
        _check_nonsingular(self.interval, "dU")


@dataclass(frozen=True)
class Since(Formula):
    left: Formula
    right: Formula
    interval: Interval = UNTIMED

    def __post_init__(self) -> None:
        _check_nonsingular(self.interval, "S")


@dataclass(frozen=True)
class DualSince(Formula):
    left: Formula
    right: Formula
    interval: Interval = UNTIMED

    def __post_init__(self) -> None:
        _check_nonsingular(self.interval, "dS")


@dataclass(frozen=True)
class Hist(Formula):
    """Most recent strictly earlier event satisfying arg lies at distance
    in the interval.  Singular intervals are allowed here."""

    arg: Formula
    interval: Interval = UNTIMED


@dataclass(frozen=True)
class DualHist(Formula):
    """Complement of Hist with the same argument."""

    arg: Formula
    interval: Interval = UNTIMED


# --- derived operators -------------------------------------------------

def eventually(arg: Formula, interval: Interval = UNTIMED) -> Formula:
    return Until(Top(), arg, interval)


def globally(arg: Formula, interval: Interval = UNTIMED) -> Formula:
    return DualUntil(Bottom(), arg, interval)


def next_(arg: Formula, interval: Interval = UNTIMED) -> Formula:
    # Bottom on the left forbids intermediate events, so the witness is
    # the immediately following event.
    return Until(Bottom(), arg, interval)


def weak_eventually(arg: Formula, interval: Interval = UNTIMED) -> Formula:
    """Like eventually but also satisfied now, provided now is an event."""
    strict = eventually(arg, interval)
    if interval.contains(0):
        return Or(And(Top(), arg), strict)
    return strict


def weak_globally(arg: Formula, interval: Interval = UNTIMED) -> Formula:
    """Dual of weak_eventually: the now-conjunct is vacuous off events."""
    strict = globally(arg, interval)
    if interval.contains(0):
        return And(Or(Bottom(), arg), strict)
    return strict


def weak_until(left: Formula, right: Formula, interval: Interval = UNTIMED) -> Formula:
    strict = Until(left, right, interval)
    if interval.contains(0):
        return Or(And(Top(), right), strict)
    return strict


def big_and(parts: Sequence[Formula]) -> Formula:
    if not parts:
        return Top()
    out = parts[-1]
    for part in reversed(parts[:-1]):
        out = And(part, out)
    return out


def big_or(parts: Sequence[Formula]) -> Formula:
    if not parts:
        return Bottom()
    out = parts[-1]
    for part in reversed(parts[:-1]):
        out = Or(part, out)
    return out


# --- negation normal form ---------------------------------------------

def nnf(psi: Formula) -> Formula:
    """Push negation onto atoms; Not survives only on Atom nodes."""
    match psi:
        case Top() | Bottom() | Atom():
            return psi
        case Not(arg):
            return _neg(arg)
        case And(left, right):
            return And(nnf(left), nnf(right))
        case Or(left, right):
            return Or(nnf(left), nnf(right))
        case Implies(left, right):
            return Or(_neg(left), nnf(right))
        case Until(left, right, interval):
            return Until(nnf(left), nnf(right), interval)
        case DualUntil(left, right, interval):
            return DualUntil(nnf(left), nnf(right), interval)
        case Since(left, right, interval):
            return Since(nnf(left), nnf(right), interval)
        case DualSince(left, right, interval):
            return DualSince(nnf(left), nnf(right), interval)
        case Hist(arg, interval):
            return Hist(nnf(arg), interval)
        case DualHist(arg, interval):
            return DualHist(nnf(arg), interval)
    raise TypeError(f"not a formula: {psi!r}")


def _neg(psi: Formula) -> Formula:
    match psi:
        case Top(var):
            return Bottom(var)
        case Bottom(var):
            return Top(var)
        case Atom():
            return Not(psi)
        case Not(arg):
            return nnf(arg)
        case And(left, right):
            return Or(_neg(left), _neg(right))
        case Or(left, right):
            return And(_neg(left), _neg(right))
        case Implies(left, right):
            return And(nnf(left), _neg(right))
        case Until(left, right, interval):
            return DualUntil(_neg(left), _neg(right), interval)
        case DualUntil(left, right, interval):
            return Until(_neg(left), _neg(right), interval)
        case Since(left, right, interval):
            return DualSince(_neg(left), _neg(right), interval)
        case DualSince(left, right, interval):
            return Since(_neg(left), _neg(right), interval)
        case Hist(arg, interval):
            return DualHist(nnf(arg), interval)
        case DualHist(arg, interval):
            return Hist(nnf(arg), interval)
    raise TypeError(f"not a formula: {psi!r}")


# --- classical complement ----------------------------------------------

def comp(psi: Formula) -> Formula:
    """Classical complement: holds at (word, t) iff psi does not.

    Negation normal form negates atoms strongly (a negated atom still
    requires an event), so nnf(Not(psi)) is not the complement at
    non-event instants.  The forms built here restore the complement by
    guarding negated literals with the matching Bottom.  The result is
    exact for formulas read over one word, plain or multi-track; it is
    not sound for assignments of independent traces.
    """
    return _comp(nnf(psi))


def _comp(psi: Formula) -> Formula:
    match psi:
        case Top(var):
            return Bottom(var)
        case Bottom(var):
            return Top(var)
        case Atom(_, var):
            return Or(Bottom(var), Not(psi))
        case Not(Atom(_, var) as atom):
            return Or(Bottom(var), atom)
        case And(left, right):
            return Or(_comp(left), _comp(right))
        case Or(left, right):
            return And(_comp(left), _comp(right))
        case Until(left, right, interval):
            return DualUntil(_comp(left), _comp(right), interval)
        case DualUntil(left, right, interval):
            return Until(_comp(left), _comp(right), interval)
        case Since(left, right, interval):
            return DualSince(_comp(left), _comp(right), interval)
        case DualSince(left, right, interval):
            return Since(_comp(left), _comp(right), interval)
        case Hist(arg, interval):
            return DualHist(arg, interval)
        case DualHist(arg, interval):
            return Hist(arg, interval)
    raise TypeError(f"formula not in negation normal form: {psi!r}")


# --- structure queries --------------------------------------------------

def subformulas(psi: Formula) -> Iterable[Formula]:
    """Yield psi and all subformulas, parents before children."""
    stack = [psi]
    while stack:
        cur = stack.pop()
        yield cur
        match cur:
            case Not(arg) | Hist(arg) | DualHist(arg):
                stack.append(arg)
            case (And(left, right) | Or(left, right) | Implies(left, right)
                  | Until(left, right) | DualUntil(left, right)
                  | Since(left, right) | DualSince(left, right)):
                stack.append(right)
                stack.append(left)


def free_vars(psi: Formula) -> frozenset[str]:
    out: set[str] = set()
    for sub in subformulas(psi):
        match sub:
            case Top(var) | Bottom(var) | Atom(_, var) if var is not None:
                out.add(var)
    return frozenset(out)


def props_of(psi: Formula) -> frozenset[str]:
    return frozenset(sub.prop for sub in subformulas(psi) if isinstance(sub, Atom))


def has_timing(psi: Formula) -> bool:
    """True when some temporal operator carries a nontrivial interval."""
    for sub in subformulas(psi):
        match sub:
            case (Until(_, _, i) | DualUntil(_, _, i) | Since(_, _, i)
                  | DualSince(_, _, i) | Hist(_, i) | DualHist(_, i)):
                if not i.effectively_untimed:
                    return True
    return False


def is_future_only(psi: Formula) -> bool:
    return not any(isinstance(sub, (Since, DualSince, Hist, DualHist))
                   for sub in subformulas(psi))


def substitute_vars(psi: Formula, mapping: dict[str, str]) -> Formula:
    """Reindex trace variables; mapping must cover every free variable."""

    def sub(var: Optional[str]) -> Optional[str]:
        if var is None:
            return None
        if var not in mapping:
            raise ValueError(f"unmapped trace variable: {var}")
        return mapping[var]

    match psi:
        case Top(var):
            return Top(sub(var))
        case Bottom(var):
            return Bottom(sub(var))
        case Atom(prop, var):
            return Atom(prop, sub(var))
        case Not(arg):
            return Not(substitute_vars(arg, mapping))
        case And(left, right):
            return And(substitute_vars(left, mapping), substitute_vars(right, mapping))
        case Or(left, right):
            return Or(substitute_vars(left, mapping), substitute_vars(right, mapping))
        case Implies(left, right):
            return Implies(substitute_vars(left, mapping), substitute_vars(right, mapping))
        case Until(left, right, interval):
            return Until(substitute_vars(left, mapping), substitute_vars(right, mapping), interval)
        case DualUntil(left, right, interval):
            return DualUntil(substitute_vars(left, mapping), substitute_vars(right, mapping), interval)
        case Since(left, right, interval):
            return Since(substitute_vars(left, mapping), substitute_vars(right, mapping), interval)
        case DualSince(left, right, interval):
            return DualSince(substitute_vars(left, mapping), substitute_vars(right, mapping), interval)
        case Hist(arg, interval):
            return Hist(substitute_vars(arg, mapping), interval)
        case DualHist(arg, interval):
            return DualHist(substitute_vars(arg, mapping), interval)
    raise TypeError(f"not a formula: {psi!r}")


# --- prenex hyperformulas -----------------------------------------------

@dataclass(frozen=True)
class Quantifier:
    kind: str
    var: str

    def __post_init__(self) -> None:
        if self.kind not in (EXISTS, FORALL):
            raise ValueError(f"bad quantifier kind: {self.kind}")


@dataclass(frozen=True)
class HyperFormula:
    prefix: tuple[Quantifier, ...]
    matrix: Formula

    def __post_init__(self) -> None:
        object.__setattr__(self, "prefix", tuple(self.prefix))
        seen: set[str] = set()
        for quant in self.prefix:
            if quant.var in seen:
                raise ValueError(f"trace variable bound twice: {quant.var}")
            seen.add(quant.var)
        unbound = free_vars(self.matrix) - seen
        if unbound:
            raise ValueError(f"unbound trace variables: {sorted(unbound)}")

    @property
    def vars(self) -> tuple[str, ...]:
        return tuple(q.var for q in self.prefix)

    def blocks(self) -> tuple[tuple[str, tuple[str, ...]], ...]:
        """Maximal same-kind quantifier blocks, outermost first."""
        out: list[tuple[str, tuple[str, ...]]] = []
        for kind, group in itertools.groupby(self.prefix, key=lambda q: q.kind):
            out.append((kind, tuple(q.var for q in group)))
        return tuple(out)

    @property
    def alternations(self) -> int:
        return max(0, len(self.blocks()) - 1)

    @property
    def is_alternation_free(self) -> bool:
        return self.alternations == 0

    def __str__(self) -> str:
        return format_hyper(self)


def exists(*vars_: str):
    return tuple(Quantifier(EXISTS, v) for v in vars_)


def forall(*vars_: str):
    return tuple(Quantifier(FORALL, v) for v in vars_)


def expand_exists_forall(phi: HyperFormula) -> HyperFormula:
    """Rewrite an exists*-forall* formula into a purely existential one by
    instantiating each universal variable with every existential one."""
    blocks = phi.blocks()
    if len(blocks) > 2 or (blocks and blocks[0][0] != EXISTS):
        raise ValueError("prefix is not exists*-forall*")
    if len(blocks) < 2:
        return phi
    evars = blocks[0][1]
    uvars = blocks[1][1]
    parts = []
    for combo in itertools.product(evars, repeat=len(uvars)):
        mapping = {v: v for v in evars}
        mapping.update(zip(uvars, combo))
        parts.append(substitute_vars(phi.matrix, mapping))
    return HyperFormula(tuple(Quantifier(EXISTS, v) for v in evars), big_and(parts))


def sync_rewrite(phi: HyperFormula) -> HyperFormula:
    """Rewrite so the synchronous reading equals the asynchronous one.

    Each block contributes a guard stating that all traces bound so far
    share every event instant; existential blocks conjoin the guard,
    universal blocks assume it.  The guard is phrased relative to the
    bound traces (whenever one of them has an event, all do), so its
    truth never depends on traces bound later and the quantifiers can be
    hoisted back over it: the result stays prenex.
    """

    def build(blocks, bound: tuple[str, ...], idx: int) -> Formula:
        if idx == len(blocks):
            return phi.matrix
        kind, group = blocks[idx]
        bound = bound + group
        some = big_or([Top(v) for v in bound])
        every = big_and([Top(v) for v in bound])
        guard = weak_globally(Implies(some, every))
        body = build(blocks, bound, idx + 1)
        if kind == EXISTS:
            return And(guard, body)
        return Implies(guard, body)

    return HyperFormula(phi.prefix, build(phi.blocks(), (), 0))


# --- stuttering rewrite --------------------------------------------------

def epsilon_atom(var: str) -> Atom:
    return Atom(EPSILON_PROP, var)


def stutter_matrix(psi: Formula, qvars: Sequence[str], total_tracks: bool = False) -> Formula:
    """Relativize a matrix to stutter-padded traces.

    Real positions are those where some track has a non-padding event;
    temporal operators are restricted to them.  With total_tracks the
    target world has every track present at every position (multi-track
    words), so per-trace absence collapses to the padding marker.
    """
    psi = nnf(psi)
    qvars = list(qvars)
    real = big_or([Not(epsilon_atom(v)) for v in qvars])

    def pad(var: str) -> Formula:
        if total_tracks:
            return epsilon_atom(var)
        return Or(epsilon_atom(var), Bottom(var))

    def walk(cur: Formula) -> Formula:
        match cur:
            case Top(None):
                return real
            case Bottom(None):
                return big_and([pad(v) for v in qvars])
            case Top(var):
                return Not(epsilon_atom(var))
            case Bottom(var):
                return pad(var)
            case Atom(_, None):
                raise ValueError("matrix atoms must carry a trace variable")
            case Atom(_, _):
                return cur
            case Not(Atom(_, None)):
                raise ValueError("matrix atoms must carry a trace variable")
            case Not(Atom(_, var) as atom):
                return And(Not(epsilon_atom(var)), Not(atom))
            case And(left, right):
                return And(walk(left), walk(right))
            case Or(left, right):
                return Or(walk(left), walk(right))
            case Until(left, right, interval):
                return Until(Implies(real, walk(left)), And(real, walk(right)), interval)
            case DualUntil(left, right, interval):
                return DualUntil(And(real, walk(left)), Implies(real, walk(right)), interval)
            case Since(left, right, interval):
                return Since(Implies(real, walk(left)), And(real, walk(right)), interval)
            case DualSince(left, right, interval):
                return DualSince(And(real, walk(left)), Implies(real, walk(right)), interval)
            case Hist(arg, interval):
                return Hist(And(real, walk(arg)), interval)
            case DualHist(arg, interval):
                return DualHist(And(real, walk(arg)), interval)
        raise TypeError(f"formula not in negation normal form: {cur!r}")

    return walk(psi)


def wf_formula(qvars: Sequence[str], ap: Iterable[str], total_tracks: bool = False) -> Formula:
    """Well-formedness of padded traces: no position is padding everywhere,
    and padding positions carry no ordinary proposition."""
    qvars = list(qvars)
    props = sorted(set(ap) - {EPSILON_PROP})
    parts: list[Formula] = [weak_globally(big_or([Not(epsilon_atom(v)) for v in qvars]))]
    for v in qvars:
        clean = big_and([Not(Atom(p, v)) for p in props])
        parts.append(weak_globally(Implies(epsilon_atom(v), clean)))
    del total_tracks  # same shape in both worlds
    return big_and(parts)


def stutter_formula(phi: HyperFormula, ap: Iterable[str],
                    total_tracks: bool = False) -> HyperFormula:
    """Stuttering rewrite for alternation-free formulas: the asynchronous
    reading of phi over traces equals the synchronous reading of the
    result over their stutter-paddings."""
    if not phi.is_alternation_free:
        raise ValueError("stutter_formula requires an alternation-free prefix")
    return stutter_formula_general(phi, ap, total_tracks)


def stutter_formula_general(phi: HyperFormula, ap: Iterable[str],
                            total_tracks: bool = False) -> HyperFormula:
    """Blockwise variant for arbitrary prefixes: each block conjoins or
    assumes well-formedness of all traces bound so far.  Only engines
    that pair this with sync_rewrite should rely on it."""
    if not phi.prefix:
        raise ValueError("stuttering rewrite needs at least one quantifier")
    ap = list(ap)
    matrix = stutter_matrix(phi.matrix, phi.vars, total_tracks)
    blocks = phi.blocks()

    def build(idx: int, bound: tuple[str, ...]) -> Formula:
        kind, group = blocks[idx]
        bound = bound + group
        guard = wf_formula(bound, ap, total_tracks)
        body = matrix if idx + 1 == len(blocks) else build(idx + 1, bound)
        if kind == EXISTS:
            return And(guard, body)
        return Implies(guard, body)

    return HyperFormula(phi.prefix, build(0, ()))


# --- printing -------------------------------------------------------------

_LEVEL_IMPLIES = 1
_LEVEL_OR = 2
_LEVEL_AND = 3
_LEVEL_TEMPORAL = 4
_LEVEL_UNARY = 5
_LEVEL_ATOM = 6


def _interval_suffix(interval: Interval) -> str:
    if interval == UNTIMED:
        return ""
    return str(interval)


def _fmt_atomic(prop: str, var: Optional[str]) -> str:
    return prop if var is None else f"{prop}[{var}]"


def _fmt(psi: Formula, level: int) -> str:
    text, own = _fmt_node(psi)
    if own < level:
        return f"({text})"
    return text


def _fmt_node(psi: Formula) -> tuple[str, int]:
    match psi:
        case Top(var):
            return _fmt_atomic("TOP", var), _LEVEL_ATOM
        case Bottom(var):
            return _fmt_atomic("BOT", var), _LEVEL_ATOM
        case Atom(prop, var):
            return _fmt_atomic(prop, var), _LEVEL_ATOM
        case Not(arg):
            return f"~{_fmt(arg, _LEVEL_UNARY)}", _LEVEL_UNARY
        case And(left, right):
            return f"{_fmt(left, _LEVEL_AND + 1)} & {_fmt(right, _LEVEL_AND)}", _LEVEL_AND
        case Or(left, right):
            return f"{_fmt(left, _LEVEL_OR + 1)} | {_fmt(right, _LEVEL_OR)}", _LEVEL_OR
        case Implies(left, right):
            return f"{_fmt(left, _LEVEL_IMPLIES + 1)} -> {_fmt(right, _LEVEL_IMPLIES)}", _LEVEL_IMPLIES
        case Until(Top(None), arg, interval):
            return f"F{_interval_suffix(interval)} {_fmt(arg, _LEVEL_UNARY)}", _LEVEL_UNARY
        case Until(Bottom(None), arg, interval):
            return f"X{_interval_suffix(interval)} {_fmt(arg, _LEVEL_UNARY)}", _LEVEL_UNARY
        case DualUntil(Bottom(None), arg, interval):
            return f"G{_interval_suffix(interval)} {_fmt(arg, _LEVEL_UNARY)}", _LEVEL_UNARY
        case Until(left, right, interval):
            op = f"U{_interval_suffix(interval)}"
            return (f"{_fmt(left, _LEVEL_TEMPORAL + 1)} {op} {_fmt(right, _LEVEL_TEMPORAL)}",
                    _LEVEL_TEMPORAL)
        case DualUntil(left, right, interval):
            op = f"dU{_interval_suffix(interval)}"
            return (f"{_fmt(left, _LEVEL_TEMPORAL + 1)} {op} {_fmt(right, _LEVEL_TEMPORAL)}",
                    _LEVEL_TEMPORAL)
        case Since(left, right, interval):
            op = f"S{_interval_suffix(interval)}"
            return (f"{_fmt(left, _LEVEL_TEMPORAL + 1)} {op} {_fmt(right, _LEVEL_TEMPORAL)}",
                    _LEVEL_TEMPORAL)
        case DualSince(left, right, interval):
            op = f"dS{_interval_suffix(interval)}"
            return (f"{_fmt(left, _LEVEL_TEMPORAL + 1)} {op} {_fmt(right, _LEVEL_TEMPORAL)}",
                    _LEVEL_TEMPORAL)
        case Hist(arg, interval):
            return f"H{_interval_suffix(interval)} {_fmt(arg, _LEVEL_UNARY)}", _LEVEL_UNARY
        case DualHist(arg, interval):
            return f"dH{_interval_suffix(interval)} {_fmt(arg, _LEVEL_UNARY)}", _LEVEL_UNARY
    raise TypeError(f"not a formula: {psi!r}")


def format_formula(psi: Formula) -> str:
    return _fmt(psi, 0)


def format_hyper(phi: HyperFormula) -> str:
    head = "".join(f"{q.kind} {q.var}. " for q in phi.prefix)
    return head + format_formula(phi.matrix)
