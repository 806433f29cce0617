import itertools

from hypothesis import given, settings, strategies as st

from conftest import A
from folwfs.sat import CNF, Tseitin, solve
from folwfs import And, Iff, Implies, Not, Or
from oracles import evaluate


def brute(clauses, n):
    for bits in itertools.product((False, True), repeat=n):
        if all(any((l > 0) == bits[abs(l) - 1] for l in c) for c in clauses):
            return True
    return False


clause = st.lists(st.integers(1, 8).flatmap(lambda v: st.sampled_from([v, -v])), min_size=1, max_size=4)


@settings(max_examples=400)
@given(st.lists(clause, max_size=30))
def test_solver_complete_against_enumeration(clauses):
    n = 8
    model = solve(clauses, n)
    assert (model is not None) == brute(clauses, n)
    if model is not None:
        assert all(any(model[abs(l)] == (l > 0) for l in c) for c in clauses)


@given(st.lists(clause, max_size=20), st.lists(st.integers(1, 8).flatmap(lambda v: st.sampled_from([v, -v])),
                                               max_size=4))
def test_assumptions_equal_unit_clauses(clauses, assumptions):
    with_units = solve(clauses + [(a,) for a in assumptions], 8)
    assert (solve(clauses, 8, assumptions) is None) == (with_units is None)


def test_deterministic_model():
    clauses = [(1, 2), (-1, 3)]
    assert solve(clauses, 3) == solve(clauses, 3) == {1: False, 2: True, 3: False}


def test_empty_clause_and_empty_problem():
    assert solve([()], 1) is None
    assert solve([], 0) == {}


def test_tseitin_equisatisfiable():
    a, b, c = A("a"), A("b"), A("c")
    atoms = [a, b, c]
    formulas = [Iff(a, Not(b)), Implies(And((a, b)), c), Or((Not(a), And((b, Not(c)))))]
    for f in formulas:
        for bits in itertools.product((False, True), repeat=3):
            val = dict(zip(atoms, bits))
            ids = {x: i + 1 for i, x in enumerate(atoms)}
            nxt = [4]

            def fresh():
                nxt[0] += 1
                return nxt[0] - 1
            enc = Tseitin(ids.__getitem__, fresh)
            enc.assert_formula(f)
            assume = [ids[x] if val[x] else -ids[x] for x in atoms]
            assert (solve(enc.clauses, nxt[0] - 1, assume) is not None) == evaluate(f, val, ())


def test_dimacs_text():
    cnf = CNF(2)
    cnf.add(1, -2)
    assert cnf.to_dimacs(["x"]) == "c x\np cnf 2 1\n1 -2 0\n"
