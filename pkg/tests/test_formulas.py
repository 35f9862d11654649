from __future__ import annotations

import pytest
from hypothesis import given, settings, strategies as st

from craig.errors import FormulaError
from craig.formulas import (
    BOTTOM, TOP, And, Atom, Const, Exists, Forall, Not, Or, Var,
    abstract_constant, fresh_constant, is_nnf, signature_of, simplify,
    substitute_constant, to_nnf,
)
from craig.models import enumerate_structures, evaluate, merged_signature
from craig.parser import parse


def test_nnf_de_morgan():
    assert to_nnf(parse("!(A(x0) & B(x0))")) == parse("!A(x0) | !B(x0)")


def test_nnf_quantifier_duality():
    assert to_nnf(parse("!(exists x. P(x))")) == parse("forall x. !P(x)")


def test_nnf_double_negation():
    assert to_nnf(parse("!!P(c)")) == parse("P(c)")


def test_nnf_keeps_multivariable_blocks():
    f = to_nnf(parse("!(forall x y. R(x,y))"))
    assert f == Exists(("x", "y"), Not(Atom("R", (Var("x"), Var("y")))))


def test_nnf_negations_only_on_atoms():
    f = parse("!((exists x. P(x) -> Q(x)) & !(P(c) | false))")
    nnf = to_nnf(f)
    assert is_nnf(nnf)
    assert not is_nnf(f)


@st.composite
def formulas(draw, max_depth=3):
    scope = draw(st.lists(st.sampled_from(["x", "y"]), unique=True))

    def build(depth, scope):
        options = ["atom"]
        if depth > 0:
            options += ["not", "and", "or", "exists", "forall", "top"]
        kind = draw(st.sampled_from(options))
        if kind == "top":
            return TOP
        if kind == "atom":
            rel = draw(st.sampled_from(["P", "Q"]))
            term = draw(st.sampled_from(
                [Var(v) for v in scope] + [Const("c"), Const("d")]))
            return Atom(rel, (term,))
        if kind == "not":
            return Not(build(depth - 1, scope))
        if kind in ("and", "or"):
            cls = And if kind == "and" else Or
            return cls((build(depth - 1, scope), build(depth - 1, scope)))
        v = "x" if "x" not in scope else "y" if "y" not in scope else "z"
        body = build(depth - 1, scope + (v,))
        return (Exists if kind == "exists" else Forall)((v,), body)

    return build(max_depth, tuple(scope))


@settings(max_examples=150, derandomize=True)
@given(formulas())
def test_nnf_idempotent(phi):
    once = to_nnf(phi)
    assert to_nnf(once) == once


@settings(max_examples=60, derandomize=True, deadline=None)
@given(formulas(max_depth=2))
def test_nnf_equivalent_on_small_structures(phi):
    report = signature_of(phi)
    if report.free_vars:
        for v in sorted(report.free_vars):
            phi = substitute_constant(phi, v, "e")
    nnf = to_nnf(phi)
    sig = merged_signature([phi, nnf])
    for n in (1, 2, 3):
        for A in enumerate_structures(sig, n):
            assert evaluate(A, phi) == evaluate(A, nnf)


def test_signature_example1_relations(example1):
    phi, psi, _, _ = example1
    assert signature_of(phi).relations == {"Cat", "Big", "Green"}
    assert signature_of(psi).relations == {"Cat", "Dog", "Big"}


def test_signature_example2_polarities(example1):
    phi, psi, _, _ = example1
    r = signature_of(phi)
    assert r.relsig_pos == {"Cat", "Big", "Green"}
    assert r.relsig_neg == {"Cat"}
    s = signature_of(psi)
    assert s.relsig_pos == {"Big", "Cat", "Dog"}
    assert s.relsig_neg == frozenset()


def test_signature_of_top_is_empty():
    r = signature_of(TOP)
    assert not r.relations and not r.constants
    assert not r.relsig_pos and not r.relsig_neg and not r.free_vars


def test_nnf_polarity_matches_not_nesting():
    phi = to_nnf(parse("!(A(c) & !B(c)) | !C(c)"))
    r = signature_of(phi)
    under_not = {f.sub.rel for f in _nots(phi)}
    assert r.relsig_neg == under_not


def _nots(phi):
    from craig.formulas import walk
    return [f for f in walk(phi) if isinstance(f, Not) and isinstance(f.sub, Atom)]


def test_substitute_respects_scope():
    f = And((Atom("P", (Var("x0"),)), Exists(("x0",), Atom("Q", (Var("x0"),)))))
    assert substitute_constant(f, "x0", "c") == parse("P(c) & exists x0. Q(x0)")


def test_substitute_absent_variable():
    f = Atom("P", (Var("y0"),))
    assert substitute_constant(f, "x0", "c") == f


def test_substitute_free_under_other_binder():
    f = Forall(("y",), Atom("R", (Var("x"), Var("y"))))
    assert substitute_constant(f, "x", "c") == \
        Forall(("y",), Atom("R", (Const("c"), Var("y"))))


def test_abstract_constant_uniform():
    f = parse("A(c) & !B(c)")
    assert abstract_constant(f, "c", "x") == \
        And((Atom("A", (Var("x"),)), Not(Atom("B", (Var("x"),)))))


def test_abstract_absent_constant():
    f = parse("P(d)")
    assert abstract_constant(f, "c", "x") == f


def test_abstract_under_binder():
    f = parse("exists y. R(c, y)")
    assert abstract_constant(f, "c", "x") == \
        Exists(("y",), Atom("R", (Var("x"), Var("y"))))


def test_abstract_rejects_occurring_variable():
    with pytest.raises(FormulaError):
        abstract_constant(parse("exists x. R(c, x)"), "c", "x")


def test_substitute_then_abstract_roundtrip():
    f = parse("P(x0) & exists y. R(x0, y)")
    grounded = substitute_constant(f, "x0", "w")
    assert abstract_constant(grounded, "w", "x0") == f


def test_fresh_constant_series():
    assert fresh_constant(set()) == "c0"
    assert fresh_constant({"c0"}) == "c1"


def test_fresh_constant_lowest_unused():
    avoid = {"c0", "c2"}
    # independent oracle: exhaustive scan for the lowest unused index
    expected = next(f"c{i}" for i in range(10) if f"c{i}" not in avoid)
    assert expected == "c1"
    assert fresh_constant(avoid) == expected


def test_bottom_is_not_top():
    assert BOTTOM == Not(TOP)
    assert to_nnf(Not(BOTTOM)) == TOP


def test_zero_ary_relations_allowed():
    f = parse("Z & P(c)")
    r = signature_of(f)
    assert r.arities["Z"] == 0 and r.arities["P"] == 1


def test_arity_mismatch_rejected():
    with pytest.raises(FormulaError):
        signature_of(And((Atom("P", (Const("c"),)), Atom("P", ()))))


def test_simplify_units_and_flattening():
    f = Or((BOTTOM, And((TOP, parse("P(c)"), And((parse("Q(c)"), parse("P(c)")))))))
    assert simplify(f) == And((parse("P(c)"), parse("Q(c)")))


def test_simplify_drops_vacuous_quantifier():
    f = Forall(("z",), parse("exists x. P(x)"))
    assert simplify(f) == parse("exists x. P(x)")
