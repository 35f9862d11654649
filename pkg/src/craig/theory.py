"""Weak and strong Craig interpolation under a finite background theory, and
the (sigma, tau)-splittability decision that powers the strong form."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import FormulaError, NotProvedWithinBudget, NotSplittable
from .formulas import Not, is_sentence, signature_of, simplify, to_nnf
from .definability import Theory
from .interpolation import interpolant_from_labeled
from .tableau import Closed, LabeledSentence, prove


@dataclass(frozen=True)
class SplitResult:
    sigma1: Theory
    sigma2: Theory


def split_theory(sigma: Theory, sigma_sig, tau_sig):
    """Decompose Σ into Σ1 ∪ Σ2 with (sig(Σ1)∪σ) ∩ (sig(Σ2)∪τ) ⊆ σ∩τ.

    Per-symbol constraints solved by union-find: sentences sharing a symbol
    outside σ∩τ are co-located, a σ∖τ symbol forces side 1, a τ∖σ symbol
    side 2; a component forced both ways means no split exists.  Unconstrained
    components default to Σ1.  Returns None when no split exists.
    """
    sigma_sig = frozenset(sigma_sig)
    tau_sig = frozenset(tau_sig)
    shared = sigma_sig & tau_sig
    sentences = sigma.sentences
    symbol_sets = [signature_of(s).symbols() for s in sentences]

    parent = list(range(len(sentences)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def union(i: int, j: int):
        parent[find(i)] = find(j)

    owners: dict = {}
    for i, syms in enumerate(symbol_sets):
        for s in sorted(syms - shared):
            if s in owners:
                union(i, owners[s])
            else:
                owners[s] = i

    forced: dict = {}
    for i, syms in enumerate(symbol_sets):
        root = find(i)
        want = None
        if syms & (sigma_sig - tau_sig):
            want = 1
        if syms & (tau_sig - sigma_sig):
            if want == 1:
                return None
            want = 2
        if want is not None:
            if forced.setdefault(root, want) != want:
                return None

    part1, part2 = [], []
    for i, s in enumerate(sentences):
        side = forced.get(find(i), 1)
        (part1 if side == 1 else part2).append(s)
    result = SplitResult(Theory(tuple(part1), sigma.name and sigma.name + ".1"),
                         Theory(tuple(part2), sigma.name and sigma.name + ".2"))
    sig1 = result.sigma1.signature().symbols() if part1 else frozenset()
    sig2 = result.sigma2.signature().symbols() if part2 else frozenset()
    if ((sig1 | sigma_sig) & (sig2 | tau_sig)) - shared:
        raise FormulaError("internal error: split violates its invariant")
    return result


def weak_interpolant(sigma: Theory, phi, psi, budget: int):
    """θ with Σ ⊨ phi→θ, Σ ⊨ θ→psi, sig(θ) ⊆ (sig(phi)∩sig(psi)) ∪ sig(Σ)."""
    _check_sentences(phi, psi)
    inputs = [LabeledSentence(to_nnf(s), "L") for s in sigma.sentences]
    inputs.append(LabeledSentence(to_nnf(phi), "L"))
    inputs.append(LabeledSentence(to_nnf(Not(psi)), "R"))
    theta = simplify(interpolant_from_labeled(inputs, budget)[0])
    allowed = (signature_of(phi).symbols() & signature_of(psi).symbols())
    if sigma.sentences:
        allowed |= sigma.signature().symbols()
    if signature_of(theta).symbols() - allowed:
        raise FormulaError("internal error: weak interpolant leaks symbols")
    _reprove_under_theory(sigma, phi, psi, theta, budget)
    return theta


def strong_interpolant(sigma: Theory, phi, psi, budget: int):
    """θ as above but with sig(θ) ⊆ sig(phi) ∩ sig(psi); needs a split."""
    _check_sentences(phi, psi)
    split = split_theory(sigma, signature_of(phi).symbols(),
                         signature_of(psi).symbols())
    if split is None:
        raise NotSplittable(
            "the theory is not (sig(phi), sig(psi))-splittable")
    inputs = [LabeledSentence(to_nnf(s), "L") for s in split.sigma1.sentences]
    inputs.append(LabeledSentence(to_nnf(phi), "L"))
    inputs += [LabeledSentence(to_nnf(s), "R") for s in split.sigma2.sentences]
    inputs.append(LabeledSentence(to_nnf(Not(psi)), "R"))
    theta = simplify(interpolant_from_labeled(inputs, budget)[0])
    allowed = signature_of(phi).symbols() & signature_of(psi).symbols()
    if signature_of(theta).symbols() - allowed:
        raise FormulaError("internal error: strong interpolant leaks symbols")
    _reprove_under_theory(sigma, phi, psi, theta, budget)
    return theta


def _check_sentences(phi, psi):
    if not is_sentence(phi) or not is_sentence(psi):
        raise FormulaError("theory interpolation expects sentences")


def _reprove_under_theory(sigma: Theory, phi, psi, theta, budget: int):
    base = [LabeledSentence(to_nnf(s), "L") for s in sigma.sentences]
    for name, extra in (("Sigma, phi |= theta", [phi, Not(theta)]),
                        ("Sigma, theta |= psi", [theta, Not(psi)])):
        sents = base + [LabeledSentence(to_nnf(f), "L") for f in extra]
        if not isinstance(prove(sents, budget), Closed):
            raise NotProvedWithinBudget(
                f"could not re-prove {name} within {budget} applications")
