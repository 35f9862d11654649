"""Constructive corollaries of interpolation: explicit Beth definitions,
Padoa counterexamples, Robinson separators and monotone rewriting.

All constructions follow the same pattern: build a valid implication whose
Craig interpolant has the wanted shape, extract it, then re-prove the claimed
properties with the tableau.  Compactness steps are replaced by the finite
theories these functions require.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    FormulaError, ImplicitDefinabilityRefuted, JointlyConsistent,
    NotProvedWithinBudget, NotValid,
)
from .formulas import (
    And, Atom, Const, Exists, Forall, Not, Or, SignatureReport, Top, Var,
    abstract_constant, fresh_constant, is_sentence, signature_of, simplify,
    substitute_constant, to_nnf, walk,
)
from .interpolation import entails, interpolant_from_labeled
from .models import enumerate_structures, evaluate, merged_signature
from .tableau import Closed, LabeledSentence, prove


@dataclass(frozen=True)
class Theory:
    """A finite list of sentences."""

    sentences: tuple
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "sentences", tuple(self.sentences))
        for s in self.sentences:
            if not is_sentence(s):
                raise FormulaError(f"theory member has free variables: {s!r}")

    def signature(self):
        return merged_signature(self.sentences)


def rename_relations(phi, mapping: dict):
    """Uniformly substitute relation symbols by other relation symbols."""
    if isinstance(phi, Atom):
        return Atom(mapping.get(phi.rel, phi.rel), phi.args)
    if isinstance(phi, Top):
        return phi
    if isinstance(phi, Not):
        return Not(rename_relations(phi.sub, mapping))
    if isinstance(phi, And):
        return And(tuple(rename_relations(g, mapping) for g in phi.items))
    if isinstance(phi, Or):
        return Or(tuple(rename_relations(g, mapping) for g in phi.items))
    if isinstance(phi, Exists):
        return Exists(phi.vars, rename_relations(phi.body, mapping))
    if isinstance(phi, Forall):
        return Forall(phi.vars, rename_relations(phi.body, mapping))
    raise FormulaError(f"not a formula: {phi!r}")


def _primed_map(names, taken) -> dict:
    out = {}
    used = set(taken)
    for name in sorted(names):
        primed = name + "'"
        while primed in used:
            primed += "'"
        used.add(primed)
        out[name] = primed
    return out


def _copy_bicond(rel: str, primed: str, arity: int):
    """∀x⃗(S x⃗ <-> S' x⃗), quantifier-free when S is 0-ary."""
    args = tuple(Var(f"x{i}") for i in range(arity))
    a, b = Atom(rel, args), Atom(primed, args)
    body = And((Or((Not(a), b)), Or((Not(b), a))))
    if arity == 0:
        return body
    return Forall(tuple(v.name for v in args), body)


@dataclass(frozen=True)
class Definition:
    """Explicit definition phi(x1..xn); variables are positional."""

    formula: object
    variables: tuple


def padoa_counterexample(sigma: Theory, relation: str, tau, max_size: int,
                         extra_arities: dict | None = None):
    """Two models of the theory agreeing on tau but not on the relation.

    Deterministic: structures enumerated smallest domain first, each compared
    against the first model seen with its tau-reduct; returns the first pair.
    extra_arities supplies arities for symbols absent from the theory (for
    instance the empty theory, where any relation is trivially undefined).
    """
    tau = sorted(tau)
    sig = sigma.signature()
    if extra_arities:
        arities = dict(sig.arities)
        for name, arity in extra_arities.items():
            if arities.setdefault(name, arity) != arity:
                raise FormulaError(f"conflicting arity for {name}")
        sig = SignatureReport(sig.relations | frozenset(extra_arities), arities,
                              sig.constants, sig.relsig_pos, sig.relsig_neg,
                              sig.free_vars)
    _check_beth_inputs(sig, relation, tau)
    for n in range(1, max_size + 1):
        seen: dict = {}
        for A in enumerate_structures(sig, n):
            if not all(evaluate(A, s) for s in sigma.sentences):
                continue
            key = tuple((t, tuple(sorted(A.relations[t]))) for t in tau)
            first = seen.get(key)
            if first is None:
                seen[key] = A
            elif first.relations[relation] != A.relations[relation]:
                return (first, A)
    return None


def _check_beth_inputs(sig, relation: str, tau):
    if sig.constants:
        raise FormulaError("Beth constructions require a relational theory "
                           f"(constants found: {sorted(sig.constants)})")
    if relation not in sig.relations:
        raise FormulaError(f"relation {relation} does not occur in the theory")
    missing = sorted(set(tau) - sig.relations)
    if missing:
        raise FormulaError(f"tau relations not in the theory: {missing}")


def explicit_definition(sigma: Theory, relation: str, tau, budget: int,
                        max_counterexample_size: int = 3) -> Definition:
    """Synthesize phi(x⃗) with sig(phi) ⊆ tau and Σ ⊨ ∀x⃗(R x⃗ <-> phi(x⃗)).

    A Padoa counterexample search runs first; finding a pair refutes implicit
    definability and no definition can exist.  The tuple is frozen as fresh
    constants for the tableau, the interpolant of the primed-copy implication
    is extracted, and the constants are abstracted back to variables.  The
    biconditional is re-proved before returning.
    """
    tau = sorted(tau)
    sig = sigma.signature()
    _check_beth_inputs(sig, relation, tau)
    pair = padoa_counterexample(sigma, relation, tau, max_counterexample_size)
    if pair is not None:
        raise ImplicitDefinabilityRefuted(
            f"{relation} is not implicitly defined by {tau} "
            f"(counterexample pair of size {pair[0].domain_size})", pair)

    primed = _primed_map(sig.relations, sig.relations)
    sigma_primed = [rename_relations(s, primed) for s in sigma.sentences]
    arity = sig.arities[relation]
    frozen: list = []
    avoid = set(sig.constants)
    for _ in range(arity):
        c = fresh_constant(avoid)
        avoid.add(c)
        frozen.append(c)
    args = tuple(Const(c) for c in frozen)

    left = [LabeledSentence(to_nnf(s), "L") for s in sigma.sentences]
    left.append(LabeledSentence(Atom(relation, args), "L"))
    right = [LabeledSentence(to_nnf(s), "R") for s in sigma_primed]
    for t in tau:
        right.append(LabeledSentence(to_nnf(_copy_bicond(t, primed[t], sig.arities[t])), "R"))
    right.append(LabeledSentence(to_nnf(Not(Atom(primed[relation], args))), "R"))

    theta, _ = interpolant_from_labeled(left + right, budget)
    theta = simplify(theta)  # raw nesting scales with the proof, not the content

    taken = set()
    for f in walk(theta):
        if isinstance(f, (Exists, Forall)):
            taken.update(f.vars)
        elif isinstance(f, Atom):
            taken.update(t.name for t in f.args if isinstance(t, Var))
    variables: list = []
    for c in frozen:
        i = 0
        while f"x{i}" in taken:
            i += 1
        v = f"x{i}"
        taken.add(v)
        variables.append(v)
        theta = abstract_constant(theta, c, v)

    _reprove_biconditional(sigma, relation, theta, tuple(variables), budget)
    return Definition(theta, tuple(variables))


def _reprove_biconditional(sigma: Theory, relation: str, phi, variables, budget: int):
    sig = sigma.signature()
    avoid = set(sig.constants) | set(signature_of(phi).constants)
    consts: list = []
    for _ in variables:
        c = fresh_constant(avoid)
        avoid.add(c)
        consts.append(c)
    grounded = phi
    for v, c in zip(variables, consts):
        grounded = substitute_constant(grounded, v, c)
    head = Atom(relation, tuple(Const(c) for c in consts))
    base = [LabeledSentence(to_nnf(s), "L") for s in sigma.sentences]
    for name, extra in (("R -> definition", [head, Not(grounded)]),
                        ("definition -> R", [grounded, Not(head)])):
        outcome = prove(base + [LabeledSentence(to_nnf(f), "L") for f in extra], budget)
        if not isinstance(outcome, Closed):
            raise NotProvedWithinBudget(
                f"could not re-prove {name} within {budget} applications")


def robinson_separator(sigma1: Theory, sigma2: Theory, budget: int):
    """Sentence phi over the shared signature with Σ1 ⊨ phi and Σ2 ⊨ ¬phi."""
    inputs = [LabeledSentence(to_nnf(s), "L") for s in sigma1.sentences]
    inputs += [LabeledSentence(to_nnf(s), "R") for s in sigma2.sentences]
    try:
        theta, _ = interpolant_from_labeled(inputs, budget)
    except NotValid as e:
        raise JointlyConsistent("the theories admit a common model",
                                e.structure) from e
    theta = simplify(theta)
    for name, sentences, extra in (("sigma1 |= phi", sigma1.sentences, Not(theta)),
                                   ("sigma2 |= !phi", sigma2.sentences, theta)):
        sents = [LabeledSentence(to_nnf(s), "L") for s in sentences]
        sents.append(LabeledSentence(to_nnf(extra), "L"))
        if not isinstance(prove(sents, budget), Closed):
            raise NotProvedWithinBudget(
                f"could not re-prove {name} within {budget} applications")
    return theta


def monotone_rewrite(phi, relation: str, budget: int, arity: int | None = None):
    """Rewrite phi without negative occurrences of the relation.

    Extracts a Lyndon interpolant of phi -> (∀x⃗(R x⃗ -> R' x⃗) -> phi[R/R'])
    and re-proves equivalence with phi; NotProvedWithinBudget signals either
    non-monotonicity or budget exhaustion (indistinguishable).
    """
    if not is_sentence(phi):
        raise FormulaError("monotone_rewrite expects a sentence")
    sig = signature_of(phi)
    if relation in sig.relations:
        arity = sig.arities[relation]
    elif arity is None:
        raise FormulaError(f"relation {relation} does not occur in the sentence; "
                           "pass its arity explicitly")
    primed = _primed_map([relation], sig.relations)[relation]
    args = tuple(Var(f"x{i}") for i in range(arity))
    guard = Or((Not(Atom(relation, args)), Atom(primed, args)))
    if arity:
        guard = Forall(tuple(v.name for v in args), guard)
    renamed = rename_relations(phi, {relation: primed})

    inputs = [LabeledSentence(to_nnf(phi), "L"),
              LabeledSentence(to_nnf(guard), "R"),
              LabeledSentence(to_nnf(Not(renamed)), "R")]
    try:
        theta, _ = interpolant_from_labeled(inputs, budget)
    except NotValid as e:
        raise NotProvedWithinBudget(
            "the monotonicity implication is not valid "
            "(a finite countermodel exists)") from e
    theta = simplify(theta)
    out_sig = signature_of(theta)
    if relation in out_sig.relsig_neg:
        raise FormulaError("internal error: rewrite kept a negative occurrence")
    if primed in out_sig.relations:
        raise FormulaError("internal error: primed symbol leaked into the rewrite")
    for name, a, b in (("phi -> theta", phi, theta), ("theta -> phi", theta, phi)):
        if not isinstance(entails(a, b, budget), Closed):
            raise NotProvedWithinBudget(
                f"could not re-prove {name} within {budget} applications")
    return theta
