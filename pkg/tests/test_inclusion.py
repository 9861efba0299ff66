import random
from fractions import Fraction

import pytest

from corpus_utils import (
    all_letters,
    grid_counterexample,
    rand_oneclock_ta,
    rand_untimed_ta,
)
from hypermtl.inclusion import ow_inclusion, ow_universality
from hypermtl.timed_automata import (
    Guard,
    TRUE_GUARD,
    TimedAutomaton,
    Transition,
    ta_membership,
)
from hypermtl.traces import TimedWord

AP = (frozenset(["a", "b"]),)
LET = all_letters(AP)


def universal():
    return TimedAutomaton(
        "uni", AP, frozenset(["u"]), "u", (),
        tuple(Transition("u", l, TRUE_GUARD, frozenset(), "u") for l in LET),
        frozenset(["u"]))


def sound(left, right, cex):
    assert ta_membership(left, cex)
    assert not ta_membership(right, cex)


# ---------------------------------------------------------- fixed instances

def test_universal_in_universal():
    assert ow_inclusion(universal(), universal()) is None


def test_first_event_needs_small_clock():
    # right accepts the empty word and any word whose first event is < 1
    right = TimedAutomaton(
        "r", AP, frozenset(["s0", "s1"]), "s0", ("x",),
        tuple([Transition("s0", l, Guard((("x", "<", 1),)), frozenset(), "s1")
               for l in LET] +
              [Transition("s1", l, TRUE_GUARD, frozenset(), "s1")
               for l in LET]),
        frozenset(["s0", "s1"]))
    cex = ow_inclusion(universal(), right)
    assert cex is not None and len(cex.events) == 1
    assert cex.events[0][1] >= 1
    sound(universal(), right, cex)
    assert ow_universality(right) == cex


def test_missing_empty_word():
    need1 = TimedAutomaton(
        "n1", AP, frozenset(["s", "t"]), "s", (),
        tuple([Transition("s", l, TRUE_GUARD, frozenset(), "t") for l in LET] +
              [Transition("t", l, TRUE_GUARD, frozenset(), "t") for l in LET]),
        frozenset(["t"]))
    assert ow_universality(need1) == TimedWord(1, ())


def test_consecutive_events_window():
    # every event after the first must come less than 1 later; the shortest
    # escape needs two events
    right = TimedAutomaton(
        "gap", AP, frozenset(["r0", "r1"]), "r0", ("x",),
        tuple([Transition("r0", l, TRUE_GUARD, frozenset(["x"]), "r1")
               for l in LET] +
              [Transition("r1", l, Guard((("x", "<", 1),)), frozenset(["x"]),
                          "r1") for l in LET]),
        frozenset(["r0", "r1"]))
    cex = ow_inclusion(universal(), right)
    assert cex is not None and len(cex.events) == 2
    assert cex.events[1][1] - cex.events[0][1] >= 1
    sound(universal(), right, cex)


def test_timed_left_exactness():
    # left emits exactly one event at clock value 2
    a = (frozenset(["a"]),)
    left = TimedAutomaton(
        "two", AP, frozenset(["l0", "l1"]), "l0", ("y",),
        (Transition("l0", a, Guard((("y", ">=", 2), ("y", "<=", 2))),
                    frozenset(), "l1"),),
        frozenset(["l1"]))
    late = TimedAutomaton(
        "late", AP, frozenset(["r0", "r1"]), "r0", ("x",),
        (Transition("r0", a, Guard((("x", ">=", 1),)), frozenset(), "r1"),),
        frozenset(["r1"]))
    early = TimedAutomaton(
        "early", AP, frozenset(["r0", "r1"]), "r0", ("x",),
        (Transition("r0", a, Guard((("x", "<", 1),)), frozenset(), "r1"),),
        frozenset(["r1"]))
    assert ow_inclusion(left, late) is None
    cex = ow_inclusion(left, early)
    assert cex is not None and cex.events[0][1] == 2
    sound(left, early, cex)


def test_quiet_window_after_every_ping():
    # after each a-event the next event must fall in (1,2); universality
    # fails, and the grid oracle agrees on the verdict
    pa = (frozenset(["a"]),)
    edges = [Transition("ok", l, TRUE_GUARD, frozenset(["x"]), "wait")
             if "a" in l[0] else
             Transition("ok", l, TRUE_GUARD, frozenset(), "ok")
             for l in LET]
    for l in LET:
        dst = "wait" if "a" in l[0] else "ok"
        edges.append(Transition("wait", l, Guard((("x", ">", 1), ("x", "<", 2))),
                                frozenset(["x"]), dst))
    auto = TimedAutomaton("ping", AP, frozenset(["ok", "wait"]), "ok", ("x",),
                          tuple(edges), frozenset(["ok"]))
    cex = ow_universality(auto)
    assert cex is not None
    sound(universal(), auto, cex)
    assert grid_counterexample(universal(), auto, max_len=2) is not None


# ---------------------------------------------------------- random corpus

def test_reflexive_on_random_automata():
    rng = random.Random(30)
    for _ in range(8):
        auto = rand_oneclock_ta(rng, AP)
        assert ow_inclusion(auto, auto) is None


def test_random_sound_and_grid_complete():
    rng = random.Random(31)
    hits = 0
    for _ in range(12):
        left = (rand_untimed_ta(rng, AP) if rng.random() < 0.5
                else rand_oneclock_ta(rng, AP))
        right = rand_oneclock_ta(rng, AP)
        cex = ow_inclusion(left, right)
        if cex is not None:
            sound(left, right, cex)
        oracle = grid_counterexample(left, right, max_len=2)
        if oracle is not None:
            hits += 1
            assert cex is not None
            assert len(cex.events) <= len(oracle.events)
    assert hits >= 3


def test_pruning_preserves_verdict():
    rng = random.Random(32)
    for _ in range(8):
        left = rand_untimed_ta(rng, AP)
        right = rand_oneclock_ta(rng, AP)
        pruned = ow_inclusion(left, right, prune=True, max_len=3)
        free = ow_inclusion(left, right, prune=False, max_len=3)
        assert (pruned is None) == (free is None)


# ---------------------------------------------------------- preconditions

def test_right_with_two_clocks_rejected():
    bad = TimedAutomaton(
        "bad", AP, frozenset(["s"]), "s", ("x", "y"),
        (Transition("s", LET[0], TRUE_GUARD, frozenset(), "s"),),
        frozenset(["s"]))
    with pytest.raises(ValueError):
        ow_inclusion(universal(), bad)


def test_prune_free_needs_length_bound():
    with pytest.raises(ValueError):
        ow_inclusion(universal(), universal(), prune=False)


def test_arity_mismatch_rejected():
    two = TimedAutomaton(
        "two", (frozenset(["a"]), frozenset(["a"])), frozenset(["s"]), "s",
        (), (), frozenset(["s"]))
    with pytest.raises(ValueError):
        ow_inclusion(universal(), two)
