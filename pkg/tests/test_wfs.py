import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from conftest import A, lits
from folwfs import (Engine, Label, LiteralSet, greatest_unfounded_set, is_unfounded_set, parse, t_consequences,
                    w_step, wfs, z_consequences)
from oracles import OracleKB, brute_force_gus, oracle_wfs
from randkb import random_fol_kb, random_literal_set, random_sub_literal_set

FACT = parse("#constants a.\n#rules\np(a).")


# unfounded sets ---------------------------------------------------------------

def test_is_unfounded_set_examples(kb_assist, kb_ex3):
    assert is_unfounded_set(kb_assist, lits(), [A("Assist(a)"), A("Employed(a)")])
    assert is_unfounded_set(kb_ex3, lits(), [])
    assert is_unfounded_set(kb_ex3, lits(), [A("A(a)"), A("B(a)")])
    assert not is_unfounded_set(kb_ex3, lits(), [A("R(a)")])


def test_is_unfounded_set_rejects_foreign_atoms(kb_ex3):
    with pytest.raises(ValueError, match="Herbrand base"):
        is_unfounded_set(kb_ex3, lits(), [A("C(a)")])


def test_inconsistent_interpretation_makes_everything_unfounded(kb_ex2, kb_ex3):
    assert is_unfounded_set(kb_ex3, lits("R(a)", "~R(a)"), [A("R(a)")])
    # literal-consistent, yet contradicts L = {~A(a)}
    assert greatest_unfounded_set(kb_ex2, lits("A(a)")) == frozenset(kb_ex2.herbrand_base)


def test_greatest_unfounded_set_examples(kb_ex3, kb_assist, kb_ex2):
    assert greatest_unfounded_set(kb_ex3, lits()) == {A("A(a)"), A("B(a)")}
    assert greatest_unfounded_set(kb_assist, lits()) == {A("Assist(a)"), A("Employed(a)")}
    assert greatest_unfounded_set(FACT, lits()) == frozenset()


def test_ex2_unfounded_set_at_empty_interpretation(kb_ex2):
    # B(a) is unfounded through its self-loop; A(a) fails condition (a) because
    # L with the empty interpretation does not entail B(a).  ~A(a) enters W^1 through Z.
    assert greatest_unfounded_set(kb_ex2, lits()) == {A("B(a)")}
    assert z_consequences(kb_ex2, lits()) == {A("A(a)")}


# operators -------------------------------------------------------------------

def test_t_consequences_examples(kb_ex2, kb_ex3):
    assert t_consequences(kb_ex2, lits("~A(a)", "~B(a)")) == {A("A(a)")}
    assert t_consequences(kb_ex3, lits("A(a)", "~A(a)")) == frozenset(kb_ex3.herbrand_base)
    assert t_consequences(FACT, lits()) == {A("p(a)")}


def test_z_consequences_examples(kb_intro, kb_ex2):
    assert z_consequences(kb_intro, lits()) == {A("A(a)")}
    assert z_consequences(kb_ex2, lits()) == {A("A(a)")}
    kb = parse("#constants a.\n#omega P.\n#rules\nP(a) :- q(a).\nq(a) :- not P(a).")
    assert z_consequences(kb, lits("P(a)")) == frozenset()
    assert z_consequences(kb, lits("P(a)", "~P(a)")) == frozenset(kb.herbrand_base)


def test_w_step_examples(kb_ex2):
    w1 = w_step(kb_ex2, lits())
    assert w1 == lits("~A(a)", "~B(a)")
    w2 = w_step(kb_ex2, w1)
    assert w2 == lits("~A(a)", "~B(a)", "A(a)")
    assert w_step(kb_ex2, w2) == kb_ex2.literal_universe()


def test_wfs_ex2_trace(kb_ex2):
    r = wfs(kb_ex2)
    lit_pi = kb_ex2.literal_universe()
    assert r.inconsistent
    assert r.trace == (lits(), lits("~A(a)", "~B(a)"), lits("~A(a)", "~B(a)", "A(a)"), lit_pi, lit_pi)
    assert set(r.labels.values()) == {Label.BOTH}


def test_wfs_ex3(kb_ex3):
    r = wfs(kb_ex3)
    assert not r.inconsistent
    assert r.fixpoint == lits("~B(a)", "~A(a)", "R(a)")
    assert A("C(a)") not in r.labels


def test_wfs_empty_kb():
    r = wfs(parse("#constants a."))
    assert r.labels == {} and not r.inconsistent


def test_wfs_intro_is_inconsistent(kb_intro):
    assert wfs(kb_intro).inconsistent


def test_wfs_with_quantifiers_and_two_constants():
    kb = parse((__import__("conftest").DATA / "quantified.folkb").read_text())
    r = wfs(kb)
    assert r.labels[A("Member(b)")] is Label.FALSE
    assert r.labels[A("Member(a)")] is Label.UNDEFINED
    assert r.labels[A("cand(a)")] is Label.TRUE


# properties --------------------------------------------------------------------

def _instance(seed, **kw):
    rng = random.Random(seed)
    kb = random_fol_kb(rng, hidden=rng.random() < 0.3, **kw)
    return rng, kb, Engine(kb)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**9))
def test_operators_monotone(seed):
    rng, kb, eng = _instance(seed)
    i2 = random_literal_set(rng, kb.herbrand_base, p=0.5)
    i1 = random_sub_literal_set(rng, i2)
    assert eng.t_consequences(i1) <= eng.t_consequences(i2)
    assert eng.greatest_unfounded_set(i1) <= eng.greatest_unfounded_set(i2)
    assert eng.z_consequences(i1) <= eng.z_consequences(i2)
    assert eng.w_step(i1) <= eng.w_step(i2)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**9))
def test_unfounded_sets_closed_under_union(seed):
    rng, kb, eng = _instance(seed)
    i = random_literal_set(rng, kb.herbrand_base, p=0.3)
    hb = kb.herbrand_base
    subsets = [frozenset(c) for k in range(len(hb) + 1) for c in itertools.combinations(hb, k)]
    unfounded = [u for u in subsets if eng.is_unfounded_set(i, u)]
    for u1, u2 in itertools.combinations(unfounded, 2):
        assert eng.is_unfounded_set(i, u1 | u2)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**9))
def test_gus_is_union_of_all_unfounded_sets(seed):
    rng, kb, eng = _instance(seed, max_omega=4, max_ordinary=2)
    i = random_literal_set(rng, kb.herbrand_base, p=0.3)
    gus = eng.greatest_unfounded_set(i)
    assert gus == brute_force_gus(kb, i, eng.is_unfounded_set)
    assert gus == brute_force_gus(kb, i)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**9))
def test_conditions_match_independent_oracle(seed):
    rng, kb, eng = _instance(seed)
    o = OracleKB(kb)
    i = random_literal_set(rng, kb.herbrand_base, p=0.4)
    u = frozenset(a for a in kb.herbrand_base if rng.random() < 0.5)
    assert eng.is_unfounded_set(i, u) == o.is_unfounded_set(i, u)
    assert eng.t_consequences(i) == o.T(i)
    assert eng.z_consequences(i) == o.Z(i)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**9))
def test_kleene_chain_properties(seed):
    _, kb, eng = _instance(seed)
    r = eng.wfs()
    n_lits = 2 * len(kb.herbrand_base)
    assert len(r.trace) <= n_lits + 2
    assert all(a <= b for a, b in zip(r.trace, r.trace[1:]))
    assert eng.w_step(r.fixpoint) == r.fixpoint
    if r.inconsistent:
        assert r.fixpoint == kb.literal_universe()
    assert r.fixpoint == oracle_wfs(kb)


def test_resource_cap_surfaces_from_wfs():
    from folwfs import ResourceLimitError
    names = [f"P{k}" for k in range(4)]
    text = ("#constants a.\n#omega " + ", ".join(names) + ".\n#theory\n" + " | ".join(f"{n}(a)" for n in names)
            + ".\n#rules\nq(a) :- not P0(a).\n" + "\n".join(f"{n}(a) :- {n}(a)." for n in names))
    with pytest.raises(ResourceLimitError):
        wfs(parse(text), max_extension_atoms=2)
    assert wfs(parse(text), max_extension_atoms=4).inconsistent


def test_engine_state_chain(kb_ex2):
    states = Engine(kb_ex2).iterate()
    assert [s.step for s in states] == [0, 1, 2, 3, 4]
    assert [s.inconsistent_with_theory for s in states] == [False, False, True, True, True]
    assert LiteralSet() == states[0].current
