from __future__ import annotations

import itertools

import pytest

from craig.errors import FormulaError, MissingSymbolError, PartialAssignmentError
from craig.models import (
    Structure, apply_permutation, count_structures, enumerate_structures,
    evaluate, find_model, merged_signature, structure_from_json,
    structure_to_json, substructure,
)
from craig.parser import parse

# the taller-than structure from the definability walkthrough: a -> 0, b -> 1, c -> 2
PAPER_A = Structure(3, {"Taller-than": {(0, 1), (1, 2), (0, 2)}, "Tallest": {(0,)}})


def test_evaluate_paper_structure():
    axiom = parse("forall x y. Taller-than(y,x) -> !Tallest(x)")
    assert evaluate(PAPER_A, axiom)


def test_evaluate_top():
    assert evaluate(Structure(1), parse("true"))


def test_evaluate_empty_relation():
    A = Structure(2, {"P": set()})
    assert not evaluate(A, parse("exists x. P(x)"))


def test_evaluate_with_assignment():
    from craig.formulas import And, Atom, Exists, Var
    A = Structure(2, {"P": {(1,)}})
    f = Exists(("y",), And((Atom("P", (Var("x0"),)), Atom("P", (Var("y"),)))))
    assert evaluate(A, f, {"x0": 1})
    assert not evaluate(A, f, {"x0": 0})


def test_evaluate_missing_symbol():
    with pytest.raises(MissingSymbolError):
        evaluate(Structure(1), parse("P(c)"))


def test_evaluate_partial_assignment():
    from craig.formulas import And, Atom, Exists, Var
    A = Structure(1, {"P": {(0,)}})
    f = Exists(("y",), And((Atom("P", (Var("x0"),)), Atom("P", (Var("y"),)))))
    with pytest.raises(PartialAssignmentError):
        evaluate(A, f)


def test_zero_ary_relation_truth():
    A = Structure(1, {"Z": {()}})
    B = Structure(1, {"Z": set()})
    assert evaluate(A, parse("Z"))
    assert not evaluate(B, parse("Z"))


def _sig(text):
    return merged_signature([parse(text)])


def test_enumerate_count_unary():
    sig = _sig("exists x. P(x)")
    assert len(list(enumerate_structures(sig, 2))) == 4


def test_enumerate_count_binary():
    sig = _sig("exists x. R(x, x)")
    assert len(list(enumerate_structures(sig, 1))) == 2


def test_enumerate_count_with_constant():
    sig = _sig("P(c)")
    structures = list(enumerate_structures(sig, 2))
    # counting oracle: 2^(2^1) * 2^1
    assert len(structures) == (1 << 2) * 2 == 8
    assert count_structures(sig, 2) == 8


def test_enumerate_distinct_and_closed_form():
    sig = merged_signature([parse("exists x. P(x) & R(x, x) & Q(c)")])
    structures = list(enumerate_structures(sig, 2))
    keys = {A.key() for A in structures}
    assert len(keys) == len(structures) == count_structures(sig, 2)


def test_find_model_exists():
    A = find_model([parse("exists x. P(x)")], 3)
    assert A.domain_size == 1 and A.relations["P"] == {(0,)}


def test_find_model_contradiction_absent():
    assert find_model([parse("P(c)"), parse("!P(c)")], 3) is None


def test_find_model_conjunction():
    A = find_model([parse("exists x. (A(x) & !B(x)) & C(x)")], 3)
    assert A is not None and A.domain_size == 1
    assert evaluate(A, parse("exists x. (A(x) & !B(x)) & C(x)"))


def test_find_model_results_satisfy_inputs():
    sentences = [parse("exists x. P(x) | Q(x)"), parse("forall x. !Q(x)")]
    A = find_model(sentences, 3)
    assert all(evaluate(A, s) for s in sentences)


def test_evaluate_isomorphism_invariance():
    phi = parse("exists x. forall y. R(x, y) | P(y)")
    sig = merged_signature([phi])
    for n in (1, 2, 3):
        for A in itertools.islice(enumerate_structures(sig, n), 0, None, 7):
            value = evaluate(A, phi)
            for perm in itertools.permutations(range(n)):
                assert evaluate(apply_permutation(A, perm), phi) == value


def test_structure_json_roundtrip():
    text = structure_to_json(PAPER_A)
    assert structure_from_json(text) == PAPER_A
    assert text == ('{"domain": 3, "relations": {"Taller-than": '
                    '[[0, 1], [0, 2], [1, 2]], "Tallest": [[0]]}, "constants": {}}')


def test_structure_validation():
    with pytest.raises(FormulaError):
        Structure(1, {"P": {(3,)}})
    with pytest.raises(FormulaError):
        Structure(0)
    with pytest.raises(FormulaError):
        Structure(1, {}, {"c": 5})


def test_substructure_renumbers():
    sub = substructure(PAPER_A, {0, 2})
    assert sub.domain_size == 2
    assert sub.relations["Taller-than"] == {(0, 1)}
    assert sub.relations["Tallest"] == {(0,)}
