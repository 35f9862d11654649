"""Interpolant propagation over closed tableaux, end-to-end Craig extraction,
verification, Lyndon checking and brute-force interpolant search.

Propagation follows the proof-text case analysis.  Leaves: ⊥^L gives ⊥, ⊥^R
gives ⊤; a clash α^L/¬α^R gives α, α^R/¬α^L gives ¬α, a same-side clash gives
⊥ (both L) or ⊤ (both R).  Inner nodes: ∧ and ∃ pass the child interpolant
up; ∨ joins children with ∨ when the premise is L-labeled and with ∧ when
R-labeled; a ∀ instantiated with c existentially quantifies c away when c
does not occur in any R-labeled sentence at or above the node, universally
when it does not occur in any L-labeled one, and passes through unchanged
otherwise (in particular when c occurs on neither side, where it cannot
occur in the child interpolant at all).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import FormulaError, NotProvedWithinBudget, NotValid, OpenTableauError
from .formulas import (
    BOTTOM, TOP, And, Atom, Const, Exists, Forall, Not, Or, Var,
    abstract_constant, fresh_constant, fresh_variable, is_sentence,
    signature_of, substitute_constant, to_nnf,
)
from .models import count_structures, enumerate_structures, evaluate
from .tableau import (
    ClosedTableau, Closure, Conj, Disj, ExistsRule, ForallRule,
    LabeledSentence, Node, Satisfiable, Unknown, prove,
)


@dataclass
class AnnotatedTableau:
    tableau: ClosedTableau
    interpolants: dict  # node id -> formula

    def root_interpolant(self):
        return self.interpolants[self.tableau.root.id]


def side_sentences(node: Node, label: str) -> list:
    """Sentences with the given label introduced at the node or above it."""
    out = []
    n = node
    while n is not None:
        for ls in n.introduced:
            if ls.label == label:
                out.append(ls.formula)
        n = n.parent
    out.reverse()
    return out


def _leaf_interpolant(evidence: tuple):
    if evidence[0] == "bottom":
        return BOTTOM if evidence[1].label == "L" else TOP
    _, pos, neg = evidence
    if pos.label == "L" and neg.label == "R":
        return pos.formula
    if pos.label == "R" and neg.label == "L":
        return neg.formula  # ¬α
    return BOTTOM if pos.label == "L" else TOP


def _quantifier_case(theta, c: str, l_consts: frozenset, r_consts: frozenset):
    in_l, in_r = c in l_consts, c in r_consts
    if in_l == in_r:
        # on both sides c is shared and may stay; on neither, the signature
        # invariant already keeps c out of theta
        return theta
    x = fresh_variable(theta)
    body = abstract_constant(theta, c, x)
    return Exists((x,), body) if not in_r else Forall((x,), body)


def propagate(tableau: ClosedTableau) -> AnnotatedTableau:
    """Annotate every node of a closed tableau with its interpolant.

    Iterative (deep single-child chains are routine): one top-down pass
    accumulates the constants occurring in L/R sentences at or above each
    node, then a bottom-up pass applies the propagation cases.
    """
    interpolants: dict = {}
    consts: dict = {}
    order: list = []
    stack = [(tableau.root, frozenset(), frozenset())]
    while stack:
        node, l_consts, r_consts = stack.pop()
        for ls in node.introduced:
            names = frozenset(signature_of(ls.formula).constants)
            if ls.label == "L":
                l_consts |= names
            else:
                r_consts |= names
        consts[node.id] = (l_consts, r_consts)
        order.append(node)
        stack.extend((ch, l_consts, r_consts) for ch in node.children)

    for node in reversed(order):
        if not node.children:
            if not isinstance(node.rule, Closure):
                raise OpenTableauError("tableau has an open branch; cannot propagate")
            theta = _leaf_interpolant(node.rule.evidence)
        elif len(node.children) == 1:
            child = node.children[0]
            theta = interpolants[child.id]
            if isinstance(child.rule, ForallRule):
                l_consts, r_consts = consts[node.id]
                theta = _quantifier_case(theta, child.rule.constant, l_consts, r_consts)
            elif not isinstance(child.rule, (Conj, ExistsRule, Closure)):
                raise FormulaError(f"unexpected single-child rule {child.rule!r}")
        else:
            thetas = []
            premise = None
            for child in node.children:
                if not isinstance(child.rule, Disj):
                    raise FormulaError(f"unexpected branching rule {child.rule!r}")
                premise = child.rule.premise
                thetas.append(interpolants[child.id])
            theta = Or(tuple(thetas)) if premise.label == "L" else And(tuple(thetas))
        interpolants[node.id] = theta
    return AnnotatedTableau(tableau, interpolants)


def interpolant_from_labeled(inputs: list, budget: int):
    """Prove the labeled set unsatisfiable and extract the root interpolant.

    Returns (theta, annotated tableau); raises NotValid with the countermodel
    or NotProvedWithinBudget.
    """
    outcome = prove(inputs, budget)
    if isinstance(outcome, Satisfiable):
        raise NotValid("the input set is satisfiable", outcome.structure)
    if isinstance(outcome, Unknown):
        raise NotProvedWithinBudget(
            f"no closed tableau within {budget} rule applications",
            outcome.budget_spent)
    annotated = propagate(outcome.tableau)
    return annotated.root_interpolant(), annotated


@dataclass(frozen=True)
class Verdict:
    kind: str  # "verified" | "signature-violation" | "entailment-unknown"
    details: str = ""

    VERIFIED = "verified"
    SIGNATURE_VIOLATION = "signature-violation"
    ENTAILMENT_UNKNOWN = "entailment-unknown"

    def __bool__(self) -> bool:
        return self.kind == Verdict.VERIFIED


def _freeze_free_vars(formulas: list) -> list:
    """Close formulas by mapping each free variable to one fresh constant."""
    free = sorted(set().union(*(signature_of(f).free_vars for f in formulas)))
    if not free:
        return list(formulas)
    avoid = set().union(*(signature_of(f).constants for f in formulas))
    out = list(formulas)
    for v in free:
        c = fresh_constant(avoid)
        avoid.add(c)
        out = [substitute_constant(f, v, c) for f in out]
    return out


def entails(phi, psi, budget: int):
    """Tableau check of phi ⊨ psi; free variables are frozen uniformly.

    Returns the prover outcome for the set {phi, ¬psi}.
    """
    frozen_phi, frozen_psi = _freeze_free_vars([phi, psi])
    return prove([LabeledSentence(to_nnf(frozen_phi), "L"),
                  LabeledSentence(to_nnf(Not(frozen_psi)), "R")], budget)


def verify_interpolant(phi, psi, theta, budget: int) -> Verdict:
    """Exact syntactic signature checks plus two tableau entailment checks."""
    sig_phi, sig_psi, sig_theta = signature_of(phi), signature_of(psi), signature_of(theta)
    bad_rels = sorted(sig_theta.relations - (sig_phi.relations & sig_psi.relations))
    if bad_rels:
        return Verdict(Verdict.SIGNATURE_VIOLATION,
                       f"relations not shared: {', '.join(bad_rels)}")
    bad_consts = sorted(sig_theta.constants - (sig_phi.constants & sig_psi.constants))
    if bad_consts:
        return Verdict(Verdict.SIGNATURE_VIOLATION,
                       f"constants not shared: {', '.join(bad_consts)}")
    bad_vars = sorted(sig_theta.free_vars - (sig_phi.free_vars & sig_psi.free_vars))
    if bad_vars:
        return Verdict(Verdict.SIGNATURE_VIOLATION,
                       f"free variables not shared: {', '.join(bad_vars)}")
    for name, (a, b) in (("phi -> theta", (phi, theta)),
                         ("theta -> psi", (theta, psi))):
        outcome = entails(a, b, budget)
        if isinstance(outcome, Unknown):
            return Verdict(Verdict.ENTAILMENT_UNKNOWN,
                           f"budget exhausted proving {name}")
        if isinstance(outcome, Satisfiable):
            return Verdict(Verdict.ENTAILMENT_UNKNOWN,
                           f"countermodel found for {name}")
    return Verdict(Verdict.VERIFIED)


def craig_interpolant(phi, psi, budget: int):
    """Craig interpolant for ⊨ phi -> psi via {nnf(phi)^L, nnf(¬psi)^R}.

    The result is emitted un-simplified and passes verify_interpolant before
    being returned.
    """
    if not is_sentence(phi) or not is_sentence(psi):
        raise FormulaError("craig_interpolant expects sentences")
    theta, _ = interpolant_from_labeled(
        [LabeledSentence(to_nnf(phi), "L"), LabeledSentence(to_nnf(Not(psi)), "R")],
        budget)
    verdict = verify_interpolant(phi, psi, theta, budget)
    if verdict.kind == Verdict.SIGNATURE_VIOLATION:
        raise FormulaError(f"internal error: extracted interpolant leaks symbols "
                           f"({verdict.details})")
    if verdict.kind == Verdict.ENTAILMENT_UNKNOWN:
        raise NotProvedWithinBudget(
            f"interpolant verification incomplete: {verdict.details}")
    return theta


def lyndon_check(phi, psi, theta) -> bool:
    """Polarity inclusions of the Lyndon refinement (constants exempt)."""
    p, q, t = signature_of(phi), signature_of(psi), signature_of(theta)
    return (t.relsig_pos <= (p.relsig_pos & q.relsig_pos)
            and t.relsig_neg <= (p.relsig_neg & q.relsig_neg))


# ---------------------------------------------------------------- search

def enumerate_shared_formulas(relations: dict, constants: list, max_size: int,
                              var_pool: tuple = ("x0", "x1")):
    """Closed formulas over the given signature, by size then construction
    order.  Negation is applied to atoms (and top) only; quantifier depth is
    bounded by the variable pool."""
    rel_names = sorted(relations)
    consts = sorted(constants)
    memo: dict = {}

    def atoms(scope: tuple) -> list:
        terms = [Var(v) for v in scope] + [Const(c) for c in consts]
        out = []
        for r in rel_names:
            for args in itertools.product(terms, repeat=relations[r]):
                out.append(Atom(r, args))
        return out

    def build(size: int, scope: tuple) -> list:
        key = (size, scope)
        if key in memo:
            return memo[key]
        out: list = []
        if size == 1:
            out.append(TOP)
            out.extend(atoms(scope))
        if size == 2:
            out.append(BOTTOM)
            out.extend(Not(a) for a in atoms(scope))
        if size >= 3:
            for left_size in range(1, size - 1):
                for f in build(left_size, scope):
                    for g in build(size - 1 - left_size, scope):
                        out.append(And((f, g)))
                        out.append(Or((f, g)))
        if size >= 2 and len(scope) < len(var_pool):
            v = var_pool[len(scope)]
            for f in build(size - 1, scope + (v,)):
                out.append(Exists((v,), f))
                out.append(Forall((v,), f))
        memo[key] = out
        return out

    seen: set = set()
    for size in range(1, max_size + 1):
        for f in build(size, ()):
            if f not in seen:
                seen.add(f)
                yield f


_SCREEN_CAP = 300_000  # max structures worth enumerating for the model screen


def search_interpolant(phi, psi, max_size: int, budget: int,
                       screen_size: int = 3):
    """Brute-force enumeration over the shared signature.

    Candidates are screened against all structures of size <= screen_size
    (models of phi must satisfy the candidate; no countermodel of psi may)
    and survivors are confirmed with verify_interpolant.  Returns the first
    verified candidate in canonical order, or None.
    """
    sig_phi, sig_psi = signature_of(phi), signature_of(psi)
    shared_rels = {r: sig_phi.arities[r]
                   for r in sorted(sig_phi.relations & sig_psi.relations)}
    for r, k in shared_rels.items():
        if sig_psi.arities[r] != k:
            raise FormulaError(f"relation {r} used with inconsistent arities")
    shared_consts = sorted(sig_phi.constants & sig_psi.constants)

    def screen_lists(formula, sig):
        structures = []
        for n in range(1, screen_size + 1):
            if count_structures(sig, n) > _SCREEN_CAP:
                return None
            structures.extend(enumerate_structures(sig, n))
        return structures

    phi_structs = screen_lists(phi, sig_phi)
    psi_structs = screen_lists(psi, sig_psi)
    phi_models = None if phi_structs is None else \
        [A for A in phi_structs if evaluate(A, phi)]
    psi_antimodels = None if psi_structs is None else \
        [A for A in psi_structs if not evaluate(A, psi)]

    for theta in enumerate_shared_formulas(shared_rels, shared_consts, max_size):
        if phi_models is not None and not all(evaluate(A, theta) for A in phi_models):
            continue
        if psi_antimodels is not None and any(evaluate(A, theta) for A in psi_antimodels):
            continue
        if verify_interpolant(phi, psi, theta, budget):
            return theta
    return None
