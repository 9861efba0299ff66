import random
from fractions import Fraction
from pathlib import Path

import pytest

from hypermtl.timed_automata import (
    Guard,
    TRUE_GUARD,
    TaFormatError,
    TimedAutomaton,
    Transition,
    parse_guard,
    ta_classify,
    ta_complete_and_complement,
    ta_emptiness,
    ta_intersect,
    ta_lint,
    ta_membership,
    ta_parse,
    ta_product_sync,
    ta_project,
    ta_stutter,
)
from hypermtl.traces import EPSILON_SET, TimedWord

CASES = Path(__file__).resolve().parent.parent / "case_studies"


def fs(*props):
    return frozenset(props)


def word1(*events):
    return TimedWord(1, tuple(((fs(*props),), Fraction(t)) for props, t in events))


# ---------------------------------------------------------------- guards

def test_parse_guard():
    g = parse_guard("x<2 & y>=1")
    assert g.conjuncts == (("x", "<", 2), ("y", ">=", 1))
    assert parse_guard("true") == TRUE_GUARD
    eq = parse_guard("x=3")
    assert eq.conjuncts == (("x", ">=", 3), ("x", "<=", 3))
    assert parse_guard(" x <= 10 ").conjuncts == (("x", "<=", 10),)
    with pytest.raises(TaFormatError):
        parse_guard("x<")
    with pytest.raises(TaFormatError):
        parse_guard("x < -1")


def test_guard_satisfied():
    g = parse_guard("x>=1 & x<2")
    assert g.satisfied({"x": Fraction(1)})
    assert g.satisfied({"x": Fraction(3, 2)})
    assert not g.satisfied({"x": Fraction(2)})
    assert not g.satisfied({"x": Fraction(1, 2)})
    assert TRUE_GUARD.satisfied({})


def test_guard_satisfiable_and_singular():
    assert parse_guard("x>=1 & x<=1").is_satisfiable()
    assert not parse_guard("x<1 & x>2").is_satisfiable()
    assert not parse_guard("x<1 & x>=1").is_satisfiable()
    assert parse_guard("x>0").is_satisfiable()


# ---------------------------------------------------------------- parsing

def test_parse_and_gate():
    auto = ta_parse((CASES / "and_gate.ta").read_text(), "and_gate.ta")
    assert auto.name == "and_gate"
    assert auto.ap == (fs("A0", "A1", "B0", "B1", "C0", "C1"),)
    assert auto.clocks == ("x", "y", "z")
    assert len(auto.locations) == 6
    assert auto.initial == "l0"
    assert auto.accepting == fs("l3")
    assert len(auto.transitions) == 8


@pytest.mark.parametrize("text,fragment", [
    ("alphabet p\nlocation a init", "missing automaton header"),
    ("automaton t\nlocation a init", "missing alphabet"),
    ("automaton t\nalphabet p\nlocation a", "no init"),
    ("automaton t\nalphabet p\nlocation a init\nlocation a", "duplicate location"),
    ("automaton t\nalphabet p\nlocation a init\nlocation b init", "second init"),
    ("automaton t\nalphabet p _eps\nlocation a init", "_eps is reserved"),
    ("automaton t\nalphabet p\nlocation a init spam", "unknown location flag"),
    ("automaton t\nalphabet p\nlocation a init\ntrans a -> b on {p}",
     "not declared"),
    ("automaton t\nalphabet p\nlocation a init\ntrans a -> a on {q}",
     "undeclared props"),
    ("automaton t\nalphabet p\nlocation a init\ntrans a -> a on {p} when x<1",
     "undeclared clock"),
    ("automaton t\nalphabet p\nlocation a init\ntrans a -> a on {p} when z<",
     "bad guard atom"),
    ("automaton t\nalphabet p\nwat is this", "unrecognized line"),
])
def test_parse_errors(text, fragment):
    with pytest.raises(TaFormatError) as exc:
        ta_parse(text)
    assert fragment in str(exc.value)


def test_parse_optional_clauses():
    auto = ta_parse(
        "automaton t\nalphabet p\nclocks x\n"
        "location a init accepting\n"
        "trans a -> a on {p}\n"
        "trans a -> a on {} when x<2\n"
        "trans a -> a on {p} reset {x}\n")
    kinds = [(tr.guard, tr.resets) for tr in auto.transitions]
    assert kinds[0] == (TRUE_GUARD, frozenset())
    assert kinds[1] == (Guard((("x", "<", 2),)), frozenset())
    assert kinds[2] == (TRUE_GUARD, fs("x"))


def test_lint():
    auto = ta_parse(
        "automaton t\nalphabet p\nclocks x\n"
        "location a init\nlocation b accepting\nlocation c\n"
        "trans a -> b on {p} when x<1 & x>2\n")
    warnings = ta_lint(auto)
    assert any("unsatisfiable" in w for w in warnings)
    assert any("location c is unreachable" in w for w in warnings)
    assert not ta_lint(ta_parse((CASES / "and_gate.ta").read_text()))


# ---------------------------------------------------------------- membership

GATE = ta_parse((CASES / "and_gate.ta").read_text())
GATE_FIXED = ta_parse((CASES / "and_gate_fixed.ta").read_text())
GATE_FIGURE = ta_parse((CASES / "and_gate_figure.ta").read_text())


def test_and_gate_language():
    assert ta_membership(GATE, word1((("A1",), 1), (("B1",), 2), (("C1",), 5)))
    assert ta_membership(GATE, word1((("A1",), 1), (("B0",), 2), (("C0",), 5)))
    assert ta_membership(GATE, word1((("A0",), 1), (("B1",), 2), (("C0",), 4)))
    assert ta_membership(GATE, word1((("A0",), 1), (("B0",), 2), (("C0",), 4)))
    # wrong C0 instant for the input combination
    assert not ta_membership(GATE, word1((("A0",), 1), (("B1",), 2), (("C0",), 5)))
    assert not ta_membership(GATE, word1((("A1",), 1), (("B0",), 2), (("C0",), 4)))
    # B is mandatory in this variant
    assert not ta_membership(GATE, word1((("A0",), 1), (("C0",), 4)))
    assert not ta_membership(GATE, TimedWord(1, ()))


def test_and_gate_fixed_language():
    assert ta_membership(GATE_FIXED, word1((("A0",), 1), (("B1",), 2), (("C0",), 5)))
    assert ta_membership(GATE_FIXED, word1((("A1",), 1), (("B0",), 2), (("C0",), 5)))
    assert not ta_membership(GATE_FIXED, word1((("A0",), 1), (("B1",), 2), (("C0",), 4)))
    assert ta_membership(GATE_FIXED, word1((("A1",), 1), (("B1",), 2), (("C1",), 5)))


def test_and_gate_figure_language():
    # figure variant: B may be skipped after A0
    assert ta_membership(GATE_FIGURE, word1((("A0",), 1), (("C0",), 4)))
    assert ta_membership(GATE_FIGURE, word1((("A0",), 1), (("B1",), 2), (("C0",), 4)))
    assert ta_membership(GATE_FIGURE, word1((("A1",), 1), (("B1",), 2), (("C1",), 5)))
    assert not ta_membership(GATE_FIGURE, word1((("C0",), 3)))


def test_membership_empty_word():
    auto = ta_parse("automaton t\nalphabet p\nlocation a init accepting\n")
    assert ta_membership(auto, TimedWord(1, ()))
    assert not ta_membership(auto, word1((("p",), 1)))


def test_membership_arity_mismatch():
    with pytest.raises(ValueError):
        ta_membership(GATE, TimedWord(2, ()))


def test_membership_nondeterministic_subset():
    # two p-branches with disjoint continuations; the subset simulation
    # must keep both alive until q arrives
    auto = ta_parse(
        "automaton t\nalphabet p q\nclocks x\n"
        "location a init\nlocation b\nlocation c\nlocation d accepting\n"
        "trans a -> b on {p} reset {x}\n"
        "trans a -> c on {p} reset {x}\n"
        "trans b -> d on {q} when x>=1\n"
        "trans c -> d on {q} when x<1\n")
    assert ta_membership(auto, word1((("p",), 2), (("q",), 3)))
    assert ta_membership(auto, word1((("p",), 2), (("q",), Fraction(5, 2))))
    assert not ta_membership(auto, word1((("q",), 2)))


# ---------------------------------------------------------------- emptiness

def test_emptiness_and_gate_witness():
    witness = ta_emptiness(GATE)
    assert witness is not None
    assert ta_membership(GATE, witness)
    times = witness.times
    assert times == (Fraction(1), Fraction(2), times[2])


def test_emptiness_empty_language():
    auto = ta_parse(
        "automaton t\nalphabet p\nclocks x\n"
        "location a init\nlocation b accepting\n"
        "trans a -> b on {p} when x<1 & x>2\n")
    assert ta_emptiness(auto) is None


def test_emptiness_empty_word():
    auto = ta_parse("automaton t\nalphabet p\nlocation a init accepting\n")
    assert ta_emptiness(auto) == TimedWord(1, ())


def test_emptiness_needs_cycle():
    # accepting only after the loop has been taken at least 3 times
    auto = ta_parse(
        "automaton t\nalphabet p\nclocks x\n"
        "location a init\nlocation b accepting\n"
        "trans a -> a on {p} when x>=1 reset {x}\n"
        "trans a -> b on {p} when x>=3\n")
    witness = ta_emptiness(auto)
    assert witness is not None
    assert ta_membership(auto, witness)


def test_emptiness_strict_monotonicity():
    # guard forces both events at time 0; impossible for a strict word
    auto = ta_parse(
        "automaton t\nalphabet p\nclocks x\n"
        "location a init\nlocation b\nlocation c accepting\n"
        "trans a -> b on {p} when x<=0\n"
        "trans b -> c on {p} when x<=0\n")
    assert ta_emptiness(auto) is None


def test_emptiness_deterministic():
    w1 = ta_emptiness(GATE_FIGURE)
    w2 = ta_emptiness(GATE_FIGURE)
    assert w1 == w2


# ------------------------------------------------------- random cross-check

LETTERS = [fs(), fs("p"), fs("q"), fs("p", "q")]


def rand_ta(rng, acyclic):
    nlocs = rng.randrange(2, 5)
    locs = [f"l{i}" for i in range(nlocs)]
    clocks = ("x", "y")[: rng.randrange(1, 3)]
    transitions = []
    for _ in range(rng.randrange(2, 7)):
        if acyclic:
            i = rng.randrange(nlocs - 1)
            j = rng.randrange(i + 1, nlocs)
        else:
            i = rng.randrange(nlocs)
            j = rng.randrange(nlocs)
        conjuncts = []
        for _ in range(rng.randrange(0, 3)):
            conjuncts.append((rng.choice(clocks),
                              rng.choice(["<", "<=", ">", ">="]),
                              rng.randrange(0, 3)))
        resets = frozenset(c for c in clocks if rng.random() < 0.3)
        letter = (rng.choice(LETTERS),)
        transitions.append(Transition(locs[i], letter, Guard(tuple(conjuncts)),
                                      resets, locs[j]))
    accepting = frozenset(l for l in locs if rng.random() < 0.4)
    return TimedAutomaton("rnd", (fs("p", "q"),), frozenset(locs), locs[0],
                          clocks, tuple(transitions), accepting)


def _paths(auto):
    # all transition paths from init in an acyclic automaton
    out = []

    def walk(loc, acc):
        if loc in auto.accepting:
            out.append(tuple(acc))
        for tr in auto.transitions:
            if tr.src == loc:
                walk(tr.dst, acc + [tr])

    walk(auto.initial, [])
    return out


def _path_realizable(auto, path, grid):
    # DFS over strictly increasing grid times with concrete clocks
    def step(idx, start, values, prev_time):
        if idx == len(path):
            return True
        tr = path[idx]
        for t in grid[start:]:
            if idx > 0 and t <= prev_time:
                continue
            aged = {c: v + (t - prev_time) for c, v in values.items()}
            if tr.guard.satisfied(aged):
                after = {c: Fraction(0) if c in tr.resets else aged[c]
                         for c in aged}
                if step(idx + 1, grid.index(t) + 1, after, t):
                    return True
        return False

    zero = {c: Fraction(0) for c in auto.clocks}
    return step(0, 0, zero, Fraction(0))


def test_emptiness_vs_path_oracle_acyclic():
    rng = random.Random(424242)
    grid = [Fraction(n, 4) for n in range(0, 25)]
    for _ in range(120):
        auto = rand_ta(rng, acyclic=True)
        witness = ta_emptiness(auto)
        oracle = any(_path_realizable(auto, path, grid)
                     for path in _paths(auto))
        assert (witness is not None) == oracle
        if witness is not None:
            assert ta_membership(auto, witness)


def test_emptiness_witness_sound_cyclic():
    rng = random.Random(31337)
    for _ in range(150):
        auto = rand_ta(rng, acyclic=False)
        witness = ta_emptiness(auto)
        if witness is not None:
            assert ta_membership(auto, witness)


# ---------------------------------------------------------------- products

A_SIMPLE = ta_parse(
    "automaton a\nalphabet p\nclocks x\n"
    "location a0 init\nlocation a1 accepting\n"
    "trans a0 -> a1 on {p} when x>=1\n"
    "trans a1 -> a1 on {p}\n"
    "trans a0 -> a0 on {}\n"
    "trans a1 -> a1 on {}\n")
B_SIMPLE = ta_parse(
    "automaton b\nalphabet q\nclocks x\n"
    "location b0 init accepting\n"
    "trans b0 -> b0 on {q} when x<2\n"
    "trans b0 -> b0 on {}\n")


def rand_word(rng, arity, props=("p", "q"), max_len=4):
    times = sorted(rng.sample([Fraction(n, 2) for n in range(0, 9)],
                              rng.randrange(0, max_len + 1)))
    events = tuple(
        (tuple(frozenset(p for p in props if rng.random() < 0.5)
               for _ in range(arity)), t)
        for t in times)
    return TimedWord(arity, events)


def test_product_membership_is_conjunction():
    prod = ta_product_sync([A_SIMPLE, B_SIMPLE])
    assert prod.arity == 2
    rng = random.Random(5)
    hits = 0
    for _ in range(300):
        w = rand_word(rng, 2)
        lhs = ta_membership(prod, w)
        rhs = (ta_membership(A_SIMPLE, w.track(0))
               and ta_membership(B_SIMPLE, w.track(1)))
        assert lhs == rhs
        hits += lhs
    assert hits > 0


def test_product_clock_renaming():
    prod = ta_product_sync([A_SIMPLE, B_SIMPLE])
    assert prod.clocks == ("c0_x", "c1_x")


def test_intersect_membership():
    left = ta_parse(
        "automaton l\nalphabet p\nclocks x\n"
        "location s init\nlocation t accepting\n"
        "trans s -> t on {p} when x>=1\n"
        "trans t -> t on {p}\n")
    right = ta_parse(
        "automaton r\nalphabet p\nclocks x\n"
        "location u init\nlocation v accepting\n"
        "trans u -> v on {p} when x<3\n"
        "trans v -> v on {p} when x<3 reset {x}\n")
    both = ta_intersect(left, right)
    rng = random.Random(6)
    hits = 0
    for _ in range(300):
        w = rand_word(rng, 1, props=("p",))
        got = ta_membership(both, w)
        assert got == (ta_membership(left, w) and ta_membership(right, w))
        hits += got
    assert hits > 0


# ---------------------------------------------------------------- stutter

def test_stutter():
    st = ta_stutter(GATE)
    assert st.arity == 1
    assert "_eps" in st.ap[0]
    plain = word1((("A0",), 1), (("B0",), 2), (("C0",), 4))
    assert ta_membership(st, plain)
    padded = word1((("A0",), 1), (("_eps",), Fraction(3, 2)), (("B0",), 2),
                   (("_eps",), 3), (("C0",), 4), (("_eps",), 6))
    assert ta_membership(st, padded)
    assert not ta_membership(st, word1((("_eps",), 1), (("C0",), 4)))
    with pytest.raises(ValueError):
        ta_stutter(st)


# ---------------------------------------------------------------- classify

def test_classify_and_gate():
    flags = ta_classify(GATE)
    assert flags.deterministic
    assert not flags.one_clock
    assert not flags.ns          # x=1 guards are singular
    assert flags.rot is None
    assert not flags.mia


def test_classify_mia():
    auto = ta_parse(
        "automaton m\nalphabet p\nclocks x\n"
        "location s init accepting\n"
        "trans s -> s on {p} when x<2 reset {x}\n"
        "trans s -> s on {} \n")
    flags = ta_classify(auto)
    assert flags.deterministic and flags.one_clock and flags.ns
    assert flags.rot is True and flags.mia


def test_classify_rot_violation():
    auto = ta_parse(
        "automaton m\nalphabet p\nclocks x\n"
        "location s init accepting\n"
        "trans s -> s on {p} when x<2\n")
    flags = ta_classify(auto)
    assert flags.rot is False and not flags.mia and flags.ns


def test_classify_nondeterministic():
    auto = ta_parse(
        "automaton n\nalphabet p\nclocks x\n"
        "location s init\nlocation t accepting\n"
        "trans s -> t on {p} when x<2\n"
        "trans s -> s on {p} when x>=1\n")
    assert not ta_classify(auto).deterministic
    # overlapping guards on different letters stay deterministic
    auto2 = ta_parse(
        "automaton n\nalphabet p q\nclocks x\n"
        "location s init\nlocation t accepting\n"
        "trans s -> t on {p} when x<2\n"
        "trans s -> s on {q} when x>=1\n")
    assert ta_classify(auto2).deterministic


# -------------------------------------------------------------- complement

def test_complement_partition_random_words():
    auto = ta_parse(
        "automaton d\nalphabet p\nclocks x\n"
        "location s init\nlocation t accepting\n"
        "trans s -> t on {p} when x>=1 & x<2\n"
        "trans t -> t on {} when x<3\n")
    comp = ta_complete_and_complement(auto)
    rng = random.Random(77)
    for _ in range(300):
        w = rand_word(rng, 1, props=("p",))
        assert ta_membership(auto, w) != ta_membership(comp, w)
    assert ta_membership(comp, TimedWord(1, ()))


def test_complement_two_clock_partition():
    auto = ta_parse(
        "automaton d2\nalphabet p\nclocks x y\n"
        "location s init accepting\n"
        "trans s -> s on {p} when x>=1 & y<3 reset {x}\n")
    comp = ta_complete_and_complement(auto)
    rng = random.Random(78)
    for _ in range(300):
        w = rand_word(rng, 1, props=("p",))
        assert ta_membership(auto, w) != ta_membership(comp, w)


def test_complement_rejects_nondeterministic():
    auto = ta_parse(
        "automaton n\nalphabet p\nclocks x\n"
        "location s init\nlocation t accepting\n"
        "trans s -> t on {p} when x<2\n"
        "trans s -> s on {p} when x>=1\n")
    with pytest.raises(ValueError):
        ta_complete_and_complement(auto)


# ---------------------------------------------------------------- project

def test_project():
    prod = ta_product_sync([A_SIMPLE, B_SIMPLE])
    proj = ta_project(prod, [0])
    assert proj.arity == 1
    rng = random.Random(9)
    for _ in range(200):
        w = rand_word(rng, 2)
        if ta_membership(prod, w):
            assert ta_membership(proj, w.track(0))
    with pytest.raises(ValueError):
        ta_project(prod, [])
    with pytest.raises(ValueError):
        ta_project(prod, [2])


def test_project_keeps_flags():
    auto = ta_parse(
        "automaton m\nalphabet p\nclocks x\n"
        "location s init accepting\n"
        "trans s -> s on {p} when x<2 reset {x}\n")
    two = ta_product_sync([auto, auto])
    # projection keeps guards, so NS is preserved
    proj = ta_project(two, [0])
    assert ta_classify(proj).ns
