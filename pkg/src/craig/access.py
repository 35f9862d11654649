"""Access methods, binding-pattern extraction, boundedness, the accessible-
part fixpoint and the access-determinacy spot check.

Binding patterns are shape-sensitive, so this module consumes the surface
parse tree, not NNF.  A universal block over an implication is canonically
read as a negated existential first; the binding atom of the existential
clause is the first conjunct of the quantified body.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import FormulaError, MissingSymbolError
from .formulas import (
    And, Atom, Const, Exists, Forall, Not, Or, Top, free_vars, signature_of,
)
from .models import Structure, evaluate, substructure


@dataclass(frozen=True)
class AccessMethod:
    """Relation access with the given 1-based argument positions as inputs."""

    relation: str
    inputs: frozenset

    def __post_init__(self):
        object.__setattr__(self, "inputs", frozenset(self.inputs))
        if any(not isinstance(i, int) or i < 1 for i in self.inputs):
            raise FormulaError("input positions are 1-based naturals")

    def __repr__(self):
        pos = ",".join(str(i) for i in sorted(self.inputs)) or "-"
        return f"{self.relation}:{pos}"


def am_leq(a: AccessMethod, b: AccessMethod) -> bool:
    """a is at least as powerful as b: same relation, a.inputs ⊆ b.inputs."""
    return a.relation == b.relation and a.inputs <= b.inputs


def upward_closure(methods, sig) -> frozenset:
    """All methods above the given ones: same relation, superset inputs."""
    arities = sig.arities if hasattr(sig, "arities") else dict(sig)
    out = set()
    for m in methods:
        arity = arities.get(m.relation)
        if arity is None:
            raise FormulaError(f"relation {m.relation} not in the signature")
        if any(i > arity for i in m.inputs):
            raise FormulaError(f"method {m!r} exceeds arity {arity}")
        rest = sorted(set(range(1, arity + 1)) - m.inputs)
        for k in range(len(rest) + 1):
            for extra in itertools.combinations(rest, k):
                out.add(AccessMethod(m.relation, m.inputs | frozenset(extra)))
    return frozenset(out)


@dataclass(frozen=True)
class BindPattResult:
    defined: bool
    methods: "frozenset | None" = None


def bind_patt(phi) -> BindPattResult:
    """Access methods the formula's shape requires; undefined off the table."""
    methods = _bind_patt(phi)
    if methods is None:
        return BindPattResult(False, None)
    return BindPattResult(True, frozenset(methods))


def _bind_patt(f):
    if isinstance(f, Top):
        return set()
    if isinstance(f, Atom):
        return {AccessMethod(f.rel, frozenset(range(1, len(f.args) + 1)))}
    if isinstance(f, And):
        out = set()
        for g in f.items:
            sub = _bind_patt(g)
            if sub is None:
                return None
            out |= sub
        return out
    if isinstance(f, Not):
        return _bind_patt(f.sub)
    if isinstance(f, Exists):
        body = f.body
        if not isinstance(body, And) or not isinstance(body.items[0], Atom):
            return None
        binding = body.items[0]
        rest = body.items[1:]
        sub = _bind_patt(rest[0] if len(rest) == 1 else And(rest))
        if sub is None:
            return None
        positions = frozenset(
            i + 1 for i, t in enumerate(binding.args)
            if isinstance(t, Const) or t.name not in f.vars)
        return sub | {AccessMethod(binding.rel, positions)}
    if isinstance(f, Forall):
        # ∀x⃗ δ is read as ¬∃x⃗ ¬δ on the literal tree
        inner = f.body.sub if isinstance(f.body, Not) else Not(f.body)
        return _bind_patt(Exists(f.vars, inner))
    return None


def is_bounded(phi, methods) -> bool:
    """BindPatt(phi) is defined and lies in the upward closure of methods."""
    result = bind_patt(phi)
    if not result.defined:
        return False
    return all(any(am_leq(s, m) for s in methods) for m in result.methods)


def accessible_part(structure: Structure, methods, start) -> frozenset:
    """Least superset of the start tuple closed under the access rule.

    If a tuple of a relation with a method has all its input positions inside
    the set, all its elements join the set.  Worklist iteration to fixpoint.
    """
    for e in start:
        if not (0 <= e < structure.domain_size):
            raise FormulaError(f"element {e} outside the domain")
    method_list = sorted(set(methods), key=lambda m: (m.relation, sorted(m.inputs)))
    for m in method_list:
        if m.relation not in structure.relations:
            raise MissingSymbolError(f"structure does not interpret {m.relation}")
    reached = set(start)
    changed = True
    while changed:
        changed = False
        for m in method_list:
            for t in sorted(structure.relations[m.relation]):
                if any(i > len(t) for i in m.inputs):
                    raise FormulaError(f"method {m!r} exceeds arity {len(t)}")
                if all(t[i - 1] in reached for i in m.inputs):
                    for e in t:
                        if e not in reached:
                            reached.add(e)
                            changed = True
    return frozenset(reached)


def _eval_empty(phi) -> bool:
    """Truth over the empty substructure (atoms false, ∃ false, ∀ true)."""
    if isinstance(phi, Top):
        return True
    if isinstance(phi, Atom):
        return False
    if isinstance(phi, Not):
        return not _eval_empty(phi.sub)
    if isinstance(phi, And):
        return all(_eval_empty(g) for g in phi.items)
    if isinstance(phi, Or):
        return any(_eval_empty(g) for g in phi.items)
    if isinstance(phi, Exists):
        return False
    if isinstance(phi, Forall):
        return True
    raise FormulaError(f"not a formula: {phi!r}")


def check_access_determinacy(phi, methods, structure: Structure, args) -> bool:
    """Spot check: does phi agree on the structure and on its accessible part?

    args lists values for the free variables of phi in sorted name order.
    This is a single-instance check, not a decision procedure.
    """
    names = sorted(free_vars(phi))
    if len(names) != len(args):
        raise FormulaError(
            f"free variables {names} need exactly {len(names)} argument values")
    assignment = dict(zip(names, args))
    full = evaluate(structure, phi, assignment)
    region = accessible_part(structure, methods, tuple(args))
    if not region:
        if signature_of(phi).constants:
            raise FormulaError("empty accessible part but the formula has constants")
        return full == _eval_empty(phi)
    if any(c not in region for c in structure.constants.values()):
        raise FormulaError("a constant denotation falls outside the accessible part")
    sub = substructure(structure, region)
    order = sorted(region)
    renumber = {e: i for i, e in enumerate(order)}
    reduced_assignment = {v: renumber[e] for v, e in assignment.items()}
    return full == evaluate(sub, phi, reduced_assignment)
