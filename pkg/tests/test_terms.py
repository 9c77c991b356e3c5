import random

import pytest

from foolkit.errors import SortMismatch, UndeclaredSymbol
from foolkit.terms import (
    BOOL, INDIVIDUAL, INT, TRUE, FALSE, AtomSort, Apply, Binding, Connective,
    Equal, Ite, Let, Quantifier, Signature, Symbol, Var, alpha_equal,
    free_vars, iff, land, lnot, lor, node_count, numeral, sort_of, substitute,
)

PERSON = AtomSort("person")


def sym(name, args=(), result=INDIVIDUAL):
    return Symbol(name, tuple(args), result)


P = sym("p", (INDIVIDUAL,), BOOL)
Q = sym("q", (INDIVIDUAL,), BOOL)
F = sym("f", (INDIVIDUAL,), INDIVIDUAL)
C = sym("c", (), INDIVIDUAL)
PB = sym("pb", (), BOOL)


def test_sort_of_interpreted_constant():
    assert sort_of(TRUE) == BOOL


def test_sort_of_ite_branches_agree():
    e = Ite(Apply(PB), Apply(numeral(1)), Apply(numeral(2)))
    assert sort_of(e) == INT


def test_sort_of_ite_branch_mismatch():
    e = Ite(Apply(PB), Apply(numeral(1)), Apply(PB))
    with pytest.raises(SortMismatch):
        sort_of(e)


def test_sort_of_undeclared():
    sig = Signature()
    with pytest.raises(UndeclaredSymbol):
        sort_of(Apply(C), sig)


def test_free_vars_quantifier():
    x, y = Var("X", INDIVIDUAL), Var("Y", INDIVIDUAL)
    e = Quantifier("!", (("X", INDIVIDUAL),), Apply(sym("r", (INDIVIDUAL, INDIVIDUAL), BOOL), (x, y)))
    assert free_vars(e) == [("Y", INDIVIDUAL)]


def test_free_vars_of_ite_parts():
    # condition, then and else all contribute, first occurrence order
    ge = Symbol("$greatereq", (INT, INT), BOOL, "interpreted")
    x, y = Var("X", INT), Var("Y", INT)
    e = Ite(Apply(ge, (x, y)), x, y)
    assert free_vars(e) == [("X", INT), ("Y", INT)]


def test_free_vars_closed():
    assert free_vars(TRUE) == []


def test_free_vars_let_binding_scope():
    # parameters bind inside their own binding body only
    head = sym("g", (INDIVIDUAL,), INDIVIDUAL)
    b = Binding(head, (("X", INDIVIDUAL),), Apply(F, (Var("X", INDIVIDUAL),)))
    e = Let((b,), Apply(P, (Var("X", INDIVIDUAL),)))
    assert free_vars(e) == [("X", INDIVIDUAL)]


def test_substitute_simple():
    e = Apply(F, (Var("X", INDIVIDUAL),))
    assert substitute(e, {"X": Apply(C)}) == Apply(F, (Apply(C),))


def test_substitute_capture_avoid():
    # forall X. r(X, Y) with Y -> X must rename the binder
    r = sym("r", (INDIVIDUAL, INDIVIDUAL), BOOL)
    e = Quantifier("!", (("X", INDIVIDUAL),),
                   Apply(r, (Var("X", INDIVIDUAL), Var("Y", INDIVIDUAL))))
    out = substitute(e, {"Y": Var("X", INDIVIDUAL)})
    assert isinstance(out, Quantifier)
    (bname, _), = out.bound
    assert bname != "X"
    assert out.body == Apply(r, (Var(bname, INDIVIDUAL), Var("X", INDIVIDUAL)))


def test_substitute_preserves_sort():
    e = Ite(Apply(PB), Var("X", INT), Apply(numeral(0)))
    out = substitute(e, {"X": Apply(numeral(3))})
    assert sort_of(out) == sort_of(e)


def test_fresh_symbols_distinct_and_deterministic():
    sig = Signature()
    a = sig.fresh_symbol((), BOOL, "ite")
    b = sig.fresh_symbol((), BOOL, "ite")
    assert a.name != b.name
    assert a.kind == "fresh" and a.result == BOOL
    sig2 = Signature()
    assert sig2.fresh_symbol((), BOOL, "ite").name == a.name


def test_alpha_equal_bound_rename():
    a = Quantifier("!", (("X", INDIVIDUAL),), Apply(P, (Var("X", INDIVIDUAL),)))
    b = Quantifier("!", (("Y", INDIVIDUAL),), Apply(P, (Var("Y", INDIVIDUAL),)))
    assert alpha_equal(a, b)


def test_alpha_equal_different_symbols():
    a = Quantifier("!", (("X", INDIVIDUAL),), Apply(P, (Var("X", INDIVIDUAL),)))
    b = Quantifier("!", (("X", INDIVIDUAL),), Apply(Q, (Var("X", INDIVIDUAL),)))
    assert not alpha_equal(a, b)


def test_alpha_equal_fresh_bijection():
    sig1, sig2 = Signature(), Signature()
    f1 = sig1.fresh_symbol((), INDIVIDUAL, "let")
    g1 = sig1.fresh_symbol((), INDIVIDUAL, "let")
    f2 = sig2.fresh_symbol((), INDIVIDUAL, "let")
    g2 = sig2.fresh_symbol((), INDIVIDUAL, "let")
    h = sym("h", (INDIVIDUAL, INDIVIDUAL), BOOL)
    a = Apply(h, (Apply(f1), Apply(g1)))
    # names swapped consistently is fine
    b = Apply(h, (Apply(g2), Apply(f2)))
    assert alpha_equal(a, b)
    # inconsistent pairing is not
    bad = Apply(h, (Apply(f2), Apply(f2)))
    assert not alpha_equal(a, bad)


def test_alpha_equal_let_heads_local():
    h1 = sym("a", (), INDIVIDUAL)
    h2 = sym("b", (), INDIVIDUAL)
    e1 = Let((Binding(h1, (), Apply(C)),), Apply(F, (Apply(h1),)))
    e2 = Let((Binding(h2, (), Apply(C)),), Apply(F, (Apply(h2),)))
    assert alpha_equal(e1, e2)


# ---------------------------------------------------------------------------
# randomized invariants
# ---------------------------------------------------------------------------

SYMS = [P, Q, F, C, sym("d", (), INDIVIDUAL)]


def random_term(rng, depth, vars_):
    if depth == 0 or rng.random() < 0.3:
        choices = [Apply(C), Apply(SYMS[4])] + [Var(v, INDIVIDUAL) for v in vars_]
        return rng.choice(choices)
    return Apply(F, (random_term(rng, depth - 1, vars_),))


def random_formula(rng, depth, vars_):
    if depth == 0:
        return rng.choice([Apply(P, (random_term(rng, 0, vars_),)), TRUE, FALSE])
    k = rng.randrange(5)
    if k == 0:
        return lnot(random_formula(rng, depth - 1, vars_))
    if k == 1:
        return land(random_formula(rng, depth - 1, vars_),
                    random_formula(rng, depth - 1, vars_))
    if k == 2:
        v = f"V{len(vars_)}"
        return Quantifier(rng.choice(["!", "?"]), ((v, INDIVIDUAL),),
                          random_formula(rng, depth - 1, vars_ + [v]))
    if k == 3:
        return Equal(random_term(rng, depth - 1, vars_),
                     random_term(rng, depth - 1, vars_))
    return Apply(Q, (random_term(rng, depth - 1, vars_),))


def test_substitute_composition():
    rng = random.Random(7)
    for _ in range(200):
        e = random_formula(rng, 3, ["X", "Y"])
        m1 = {"X": random_term(rng, 1, [])}
        m2 = {"Y": random_term(rng, 1, [])}
        composed = dict(m1)
        composed["Y"] = m2["Y"]
        assert substitute(substitute(e, m1), m2) == substitute(e, composed)


def test_substitute_removes_variable():
    rng = random.Random(8)
    for _ in range(200):
        e = random_formula(rng, 3, ["X"])
        out = substitute(e, {"X": Apply(C)})
        assert all(n != "X" for n, _ in free_vars(out))


def test_sort_preserved_by_substitute():
    rng = random.Random(9)
    for _ in range(100):
        e = random_formula(rng, 3, ["X"])
        assert sort_of(substitute(e, {"X": Apply(C)})) == sort_of(e)


def test_alpha_equal_equivalence_relation():
    rng = random.Random(10)
    samples = [random_formula(rng, 3, []) for _ in range(30)]
    for e in samples:
        assert alpha_equal(e, e)
    for a in samples[:10]:
        for b in samples[:10]:
            if alpha_equal(a, b):
                assert alpha_equal(b, a)
            for c in samples[:10]:
                if alpha_equal(a, b) and alpha_equal(b, c):
                    assert alpha_equal(a, c)


def test_node_count():
    assert node_count(Apply(F, (Apply(C),))) == 2
