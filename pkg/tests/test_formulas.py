"""Formula layer: intervals, normal forms, complement, prefix rewrites."""

import random
from fractions import Fraction

import pytest

from hypermtl.formulas import (
    EXISTS, FORALL, UNTIMED, And, Atom, Bottom, DualHist, DualSince,
    DualUntil, Hist, HyperFormula, Implies, Interval, Not, Or, Quantifier,
    Since, Top, Until, big_and, big_or, comp, eventually, exists,
    expand_exists_forall, forall, free_vars, globally, has_timing, next_,
    nnf, props_of, subformulas, substitute_vars, sync_rewrite,
    weak_eventually, weak_globally, weak_until,
)
from hypermtl.semantics import hyper_eval, hyper_matrix_at, mtl_at
from hypermtl.traces import TimedWord

from corpus_utils import rand_hyper, rand_matrix, rand_trace, rand_trace_set


# --- intervals ----------------------------------------------------------

def test_interval_validation():
    with pytest.raises(ValueError):
        Interval(-1, 2)
    with pytest.raises(ValueError):
        Interval(3, 2)
    with pytest.raises(ValueError):
        Interval(2, 2)  # [2,2) empty
    with pytest.raises(ValueError):
        Interval(2, 2, False, True)
    with pytest.raises(ValueError):
        Interval(0, None, True, True)  # closed at infinity
    assert Interval(2, 2, True, True).is_singular


def test_interval_contains():
    iv = Interval(1, 3, False, True)  # (1,3]
    assert not iv.contains(1)
    assert iv.contains(Fraction(3, 2))
    assert iv.contains(3)
    assert not iv.contains(Fraction(7, 2))
    unbounded = Interval(2, None)
    assert unbounded.contains(1000)
    assert not unbounded.contains(Fraction(3, 2))


def test_effectively_untimed_ignores_openness():
    assert UNTIMED.effectively_untimed
    assert Interval(0, None, False, False).effectively_untimed
    assert not Interval(0, 5).effectively_untimed
    assert not Interval(1, None).effectively_untimed


def test_singular_rejected_on_strict_operators():
    sing = Interval(2, 2, True, True)
    for build in (lambda: Until(Top(), Atom("p"), sing),
                  lambda: DualUntil(Top(), Atom("p"), sing),
                  lambda: Since(Top(), Atom("p"), sing),
                  lambda: DualSince(Top(), Atom("p"), sing),
                  lambda: eventually(Atom("p"), sing),
                  lambda: globally(Atom("p"), sing)):
        with pytest.raises(ValueError):
            build()
    # H admits singular intervals
    Hist(Atom("p"), sing)
    DualHist(Atom("p"), sing)


# --- structure helpers ---------------------------------------------------

def test_free_vars_and_props():
    psi = And(Atom("p", "a"), Until(Top("b"), Not(Atom("q", "c")), UNTIMED))
    assert free_vars(psi) == {"a", "b", "c"}
    assert props_of(psi) == {"p", "q"}
    assert not has_timing(psi)
    assert has_timing(eventually(Atom("p"), Interval(1, 2)))
    assert not has_timing(eventually(Atom("p"), Interval(0, None, False, False)))


def test_hyperformula_validation():
    with pytest.raises(ValueError):
        HyperFormula(exists("a", "a"), Top("a"))
    with pytest.raises(ValueError):
        HyperFormula(exists("a"), Atom("p", "b"))
    phi = HyperFormula(exists("a") + forall("b", "c") + exists("d"), Top("a"))
    assert phi.blocks() == ((EXISTS, ("a",)), (FORALL, ("b", "c")), (EXISTS, ("d",)))
    assert phi.alternations == 2
    assert not phi.is_alternation_free
    assert HyperFormula(forall("a", "b"), Top("a")).is_alternation_free


# --- negation normal form ------------------------------------------------

def _is_nnf(psi):
    for sub in subformulas(psi):
        if isinstance(sub, Not) and not isinstance(sub.arg, Atom):
            return False
        if isinstance(sub, Implies):
            return False
    return True


def test_nnf_shape_random():
    rng = random.Random(401)
    for _ in range(300):
        psi = rand_matrix(rng, (), rng.randint(1, 4))
        out = nnf(psi)
        assert _is_nnf(out)
        assert nnf(out) == out  # idempotent


def test_nnf_preserves_semantics_random():
    rng = random.Random(402)
    anchors = [Fraction(0), Fraction(1), Fraction(3, 2), Fraction(5, 2)]
    for _ in range(300):
        psi = rand_matrix(rng, (), rng.randint(1, 3))
        w = rand_trace(rng)
        for t in anchors:
            assert mtl_at(w, t, psi) == mtl_at(w, t, nnf(psi))
            assert mtl_at(w, t, Not(psi)) == mtl_at(w, t, nnf(Not(psi)))


def test_weak_duality_structural():
    rng = random.Random(403)
    for _ in range(50):
        psi = rand_matrix(rng, (), 2)
        for iv in (UNTIMED, Interval(0, 3), Interval(1, 2), Interval(0, None, False, False)):
            assert nnf(Not(weak_eventually(psi, iv))) == weak_globally(nnf(Not(psi)), iv)


def test_weak_now_guard():
    # off events the now-disjunct must not fire, and 0 outside the
    # interval must suppress it entirely
    w = TimedWord.from_pairs([({"p"}, 1)])
    wf0 = weak_eventually(Not(Atom("p")))
    assert not mtl_at(w, Fraction(0), wf0)  # 0 is not an event, F fails too
    strict = weak_eventually(Atom("p"), Interval(0, None, False, False))
    assert strict == eventually(Atom("p"), Interval(0, None, False, False))
    at_event = weak_eventually(Not(Atom("q")))
    assert mtl_at(w, Fraction(1), at_event)  # now-disjunct fires at the event


def test_next_blocks_intermediate_events():
    w = TimedWord.from_pairs([({"p"}, 1), ({"q"}, 2)])
    assert mtl_at(w, Fraction(0), next_(Atom("p")))
    assert not mtl_at(w, Fraction(0), next_(Atom("q")))
    assert mtl_at(w, Fraction(1), next_(Atom("q")))
    assert not mtl_at(w, Fraction(0), next_(Atom("p"), Interval(2, 3)))


# --- classical complement -------------------------------------------------

def test_comp_is_complement_single_trace():
    rng = random.Random(404)
    anchors = [Fraction(0), Fraction(1), Fraction(3, 2), Fraction(2)]
    for _ in range(300):
        psi = rand_matrix(rng, (), rng.randint(1, 3))
        w = rand_trace(rng)
        for t in anchors:
            assert mtl_at(w, t, comp(psi)) == (not mtl_at(w, t, psi))


def test_comp_is_complement_multi_track():
    rng = random.Random(405)
    idx = {"a": 0, "b": 1, None: 0}
    for _ in range(200):
        psi = rand_matrix(rng, ("a", "b"), rng.randint(1, 3))
        tracks = [rand_trace(rng, max_len=3), rand_trace(rng, max_len=3)]
        times = sorted(set(tracks[0].time_set | tracks[1].time_set))
        events = []
        for t in times:
            letter = tuple(tr.props_at(t) if tr.props_at(t) is not None else frozenset()
                           for tr in tracks)
            events.append((letter, t))
        word = TimedWord(2, tuple(events))
        for t in [Fraction(0)] + list(times):
            assert mtl_at(word, t, comp(psi), idx) == (not mtl_at(word, t, psi, idx))


def test_nnf_negation_is_not_complement_off_events():
    # strong negation: both p and ~p fail off events, so nnf(~F p) can
    # disagree with the complement of F p
    empty = TimedWord.from_pairs([])
    psi = eventually(Atom("p"))
    assert not mtl_at(empty, Fraction(0), psi)
    assert mtl_at(empty, Fraction(0), nnf(Not(psi)))
    w = TimedWord.from_pairs([({"q"}, 1)])
    lit = Atom("p")
    assert not mtl_at(w, Fraction(0), lit)
    assert not mtl_at(w, Fraction(0), Not(lit))  # both false at a non-event
    assert mtl_at(w, Fraction(0), comp(lit))


# --- substitution and prefix rewrites ------------------------------------

def test_substitute_vars():
    psi = And(Atom("p", "u"), Or(Top("v"), Atom("q", "u")))
    out = substitute_vars(psi, {"u": "a", "v": "a"})
    assert out == And(Atom("p", "a"), Or(Top("a"), Atom("q", "a")))
    assert substitute_vars(psi, {"u": "u", "v": "v"}) == psi
    with pytest.raises(ValueError):
        substitute_vars(psi, {"u": "a"})


def test_expand_exists_forall_shapes():
    psi = Atom("p", "u")
    phi = HyperFormula(exists("a") + forall("u"), psi)
    assert expand_exists_forall(phi) == HyperFormula(exists("a"), Atom("p", "a"))

    two = HyperFormula(exists("a", "b") + forall("u"), psi)
    out = expand_exists_forall(two)
    assert out.prefix == exists("a", "b")
    assert out.matrix == And(Atom("p", "a"), Atom("p", "b"))

    matrix2 = And(Atom("p", "u"), Atom("q", "v"))
    both = HyperFormula(exists("a") + forall("u", "v"), matrix2)
    assert expand_exists_forall(both).matrix == And(Atom("p", "a"), Atom("q", "a"))

    with pytest.raises(ValueError):
        expand_exists_forall(HyperFormula(forall("u"), psi))
    with pytest.raises(ValueError):
        expand_exists_forall(HyperFormula(forall("u") + exists("a"), psi))


def test_expand_exists_forall_witness_set():
    # expansion is implied by the original, and its existential witnesses
    # satisfy the original when taken alone as the trace set
    rng = random.Random(406)
    for _ in range(150):
        k = rng.randint(1, 2)
        ell = rng.randint(1, 2)
        evars = ("a", "b")[:k]
        uvars = ("u", "v")[:ell]
        matrix = rand_matrix(rng, evars + uvars, rng.randint(1, 2))
        phi = HyperFormula(exists(*evars) + forall(*uvars), matrix)
        expanded = expand_exists_forall(phi)
        T = rand_trace_set(rng, max_traces=3, max_len=3)
        if hyper_eval(T, phi).holds:
            assert hyper_eval(T, expanded).holds
        res = hyper_eval(T, expanded)
        if res.holds:
            witness_set = [T[int(res.witness[v])] for v in expanded.vars]
            assert hyper_eval(witness_set, phi).holds


def test_sync_rewrite_shapes():
    psi = Atom("p", "a")
    one = sync_rewrite(HyperFormula(forall("a"), psi))
    some = big_or([Top("a")])
    every = big_and([Top("a")])
    assert one.matrix == Implies(weak_globally(Implies(some, every)), psi)

    psi2 = And(Atom("p", "a"), Atom("q", "b"))
    two = sync_rewrite(HyperFormula(exists("a", "b"), psi2))
    guard = weak_globally(Implies(Or(Top("a"), Top("b")), And(Top("a"), Top("b"))))
    assert two.matrix == And(guard, psi2)
    assert two.prefix == exists("a", "b")


def test_sync_rewrite_equivalence_random():
    rng = random.Random(407)
    for _ in range(150):
        phi = rand_hyper(rng, max_vars=3, depth=3)
        T = rand_trace_set(rng, max_traces=3, max_len=3)
        native = hyper_eval(T, phi, "sync").holds
        rewritten = hyper_eval(T, sync_rewrite(phi), "async").holds
        assert native == rewritten, (phi, T)


def test_big_and_or_empty():
    assert big_and([]) == Top()
    assert big_or([]) == Bottom()
    parts = [Atom("p"), Atom("q"), Atom("r")]
    assert big_and(parts) == And(Atom("p"), And(Atom("q"), Atom("r")))
