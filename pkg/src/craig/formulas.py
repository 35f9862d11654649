"""First-order formula trees and the basic syntactic operations on them.

Formulas are equality-free and function-free: atoms apply a relation symbol
to variables and constants, the connectives are top, conjunction,
disjunction, negation and (multi-variable) quantifier blocks, and falsity is
encoded as ``Not(Top)``.  Everything is immutable and hashable.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator

from .errors import FormulaError


@dataclass(frozen=True)
class Var:
    name: str

    def __repr__(self):
        return f"Var({self.name})"


@dataclass(frozen=True)
class Const:
    name: str

    def __repr__(self):
        return f"Const({self.name})"


Term = Var | Const


@dataclass(frozen=True)
class Atom:
    rel: str
    args: tuple = ()

    def __post_init__(self):
        if not self.rel:
            raise FormulaError("relation symbol must be non-empty")
        object.__setattr__(self, "args", tuple(self.args))
        for t in self.args:
            if not isinstance(t, (Var, Const)):
                raise FormulaError(f"atom argument must be a variable or constant, got {t!r}")


@dataclass(frozen=True)
class Top:
    pass


@dataclass(frozen=True)
class And:
    items: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "items", tuple(self.items))
        if len(self.items) < 2:
            raise FormulaError("And needs at least two conjuncts (use conj() to collapse)")


@dataclass(frozen=True)
class Or:
    items: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "items", tuple(self.items))
        if len(self.items) < 2:
            raise FormulaError("Or needs at least two disjuncts (use disj() to collapse)")


@dataclass(frozen=True)
class Not:
    sub: object


@dataclass(frozen=True)
class Exists:
    vars: tuple
    body: object

    def __post_init__(self):
        object.__setattr__(self, "vars", tuple(self.vars))
        _check_block(self.vars)


@dataclass(frozen=True)
class Forall:
    vars: tuple
    body: object

    def __post_init__(self):
        object.__setattr__(self, "vars", tuple(self.vars))
        _check_block(self.vars)


Formula = Atom | Top | And | Or | Not | Exists | Forall

TOP = Top()
BOTTOM = Not(TOP)

# Fresh constants live in a reserved namespace the parser rejects.
RESERVED_CONSTANT = re.compile(r"^c[0-9]+$")


def _check_block(names: tuple):
    if not names:
        raise FormulaError("quantifier block must bind at least one variable")
    if len(set(names)) != len(names):
        raise FormulaError(f"duplicate variable in quantifier block {names}")
    for n in names:
        if not isinstance(n, str) or not n:
            raise FormulaError("quantifier variables are non-empty name strings")


def conj(items: Iterable) -> object:
    """n-ary conjunction collapsing 0 -> top and 1 -> the formula itself."""
    items = list(items)
    if not items:
        return TOP
    if len(items) == 1:
        return items[0]
    return And(tuple(items))


def disj(items: Iterable) -> object:
    items = list(items)
    if not items:
        return BOTTOM
    if len(items) == 1:
        return items[0]
    return Or(tuple(items))


def implies(a, b) -> object:
    """Surface implication; desugars to ¬(a ∧ ¬b) like the parser does."""
    return Not(And((a, Not(b))))


def iff(a, b) -> object:
    return conj([implies(a, b), implies(b, a)])


def walk(phi) -> Iterator:
    """Yield every subformula, preorder."""
    stack = [phi]
    while stack:
        f = stack.pop()
        yield f
        if isinstance(f, (And, Or)):
            stack.extend(reversed(f.items))
        elif isinstance(f, Not):
            stack.append(f.sub)
        elif isinstance(f, (Exists, Forall)):
            stack.append(f.body)


@dataclass(frozen=True)
class SignatureReport:
    """Symbols of a formula: occurrence sets, polarities and free variables."""

    relations: frozenset
    arities: dict
    constants: frozenset
    relsig_pos: frozenset
    relsig_neg: frozenset
    free_vars: frozenset

    def symbols(self) -> frozenset:
        return self.relations | self.constants


def signature_of(phi) -> SignatureReport:
    """Collect relations (with arity checks), constants, polarities, free vars.

    Polarity is negation-depth parity; top contributes no symbols.
    """
    relations: set = set()
    arities: dict = {}
    constants: set = set()
    pos: set = set()
    neg: set = set()
    free: set = set()

    def visit(f, bound: frozenset, parity: int):
        if isinstance(f, Atom):
            relations.add(f.rel)
            seen = arities.setdefault(f.rel, len(f.args))
            if seen != len(f.args):
                raise FormulaError(
                    f"relation {f.rel} used with arities {seen} and {len(f.args)}")
            for t in f.args:
                if isinstance(t, Const):
                    constants.add(t.name)
                elif t.name not in bound:
                    free.add(t.name)
            (pos if parity == 0 else neg).add(f.rel)
        elif isinstance(f, Top):
            pass
        elif isinstance(f, Not):
            visit(f.sub, bound, 1 - parity)
        elif isinstance(f, (And, Or)):
            for g in f.items:
                visit(g, bound, parity)
        elif isinstance(f, (Exists, Forall)):
            visit(f.body, bound | frozenset(f.vars), parity)
        else:
            raise FormulaError(f"not a formula: {f!r}")

    visit(phi, frozenset(), 0)
    return SignatureReport(
        relations=frozenset(relations),
        arities=arities,
        constants=frozenset(constants),
        relsig_pos=frozenset(pos),
        relsig_neg=frozenset(neg),
        free_vars=frozenset(free),
    )


def free_vars(phi) -> frozenset:
    return signature_of(phi).free_vars


def is_sentence(phi) -> bool:
    return not free_vars(phi)


def constants_of(phi) -> frozenset:
    return signature_of(phi).constants


def to_nnf(phi) -> object:
    """Negation normal form: negations pushed down to atoms (or top).

    Multi-variable quantifier blocks are preserved; the transform is
    idempotent and equivalence-preserving.
    """
    if isinstance(f := phi, (Atom, Top)):
        return f
    if isinstance(f, And):
        return And(tuple(to_nnf(g) for g in f.items))
    if isinstance(f, Or):
        return Or(tuple(to_nnf(g) for g in f.items))
    if isinstance(f, Exists):
        return Exists(f.vars, to_nnf(f.body))
    if isinstance(f, Forall):
        return Forall(f.vars, to_nnf(f.body))
    if isinstance(f, Not):
        s = f.sub
        if isinstance(s, (Atom, Top)):
            return f
        if isinstance(s, Not):
            return to_nnf(s.sub)
        if isinstance(s, And):
            return Or(tuple(to_nnf(Not(g)) for g in s.items))
        if isinstance(s, Or):
            return And(tuple(to_nnf(Not(g)) for g in s.items))
        if isinstance(s, Exists):
            return Forall(s.vars, to_nnf(Not(s.body)))
        if isinstance(s, Forall):
            return Exists(s.vars, to_nnf(Not(s.body)))
    raise FormulaError(f"not a formula: {phi!r}")


def is_nnf(phi) -> bool:
    for f in walk(phi):
        if isinstance(f, Not) and not isinstance(f.sub, (Atom, Top)):
            return False
    return True


def is_literal(phi) -> bool:
    return isinstance(phi, Atom) or (isinstance(phi, Not) and isinstance(phi.sub, Atom))


def complement_literal(phi):
    """Clash partner of a literal (or of top/bottom); None for other shapes."""
    if isinstance(phi, Atom):
        return Not(phi)
    if isinstance(phi, Not):
        return phi.sub
    return None


def substitute_constant(phi, x: str, c: str) -> object:
    """Replace every free occurrence of variable x by constant c."""

    def sub(f, shadowed: bool):
        if isinstance(f, Atom):
            if shadowed:
                return f
            return Atom(f.rel, tuple(
                Const(c) if isinstance(t, Var) and t.name == x else t for t in f.args))
        if isinstance(f, Top):
            return f
        if isinstance(f, Not):
            return Not(sub(f.sub, shadowed))
        if isinstance(f, And):
            return And(tuple(sub(g, shadowed) for g in f.items))
        if isinstance(f, Or):
            return Or(tuple(sub(g, shadowed) for g in f.items))
        if isinstance(f, Exists):
            return Exists(f.vars, sub(f.body, shadowed or x in f.vars))
        if isinstance(f, Forall):
            return Forall(f.vars, sub(f.body, shadowed or x in f.vars))
        raise FormulaError(f"not a formula: {f!r}")

    return sub(phi, False)


def substitute_constants(phi, mapping: dict) -> object:
    out = phi
    for x, c in mapping.items():
        out = substitute_constant(out, x, c)
    return out


def occurs_var(phi, x: str) -> bool:
    for f in walk(phi):
        if isinstance(f, (Exists, Forall)) and x in f.vars:
            return True
        if isinstance(f, Atom) and any(isinstance(t, Var) and t.name == x for t in f.args):
            return True
    return False


def abstract_constant(phi, c: str, x: str) -> object:
    """Replace every occurrence of constant c by variable x (left free)."""
    if occurs_var(phi, x):
        raise FormulaError(f"variable {x} already occurs; cannot abstract {c} to it")

    def ab(f):
        if isinstance(f, Atom):
            return Atom(f.rel, tuple(
                Var(x) if isinstance(t, Const) and t.name == c else t for t in f.args))
        if isinstance(f, Top):
            return f
        if isinstance(f, Not):
            return Not(ab(f.sub))
        if isinstance(f, And):
            return And(tuple(ab(g) for g in f.items))
        if isinstance(f, Or):
            return Or(tuple(ab(g) for g in f.items))
        if isinstance(f, Exists):
            return Exists(f.vars, ab(f.body))
        if isinstance(f, Forall):
            return Forall(f.vars, ab(f.body))
        raise FormulaError(f"not a formula: {f!r}")

    return ab(phi)


def fresh_constant(avoid: Iterable) -> str:
    """Lowest-index c<i> not in avoid (a set of constant names or a report)."""
    if isinstance(avoid, SignatureReport):
        avoid = avoid.constants
    taken = set(avoid)
    i = 0
    while f"c{i}" in taken:
        i += 1
    return f"c{i}"


def fresh_variable(phi_or_names, prefix: str = "x") -> str:
    """Lowest-index <prefix><i> not occurring in the given formula/name set."""
    if isinstance(phi_or_names, (set, frozenset)):
        taken = set(phi_or_names)
    else:
        taken = set()
        for f in walk(phi_or_names):
            if isinstance(f, (Exists, Forall)):
                taken.update(f.vars)
            elif isinstance(f, Atom):
                taken.update(t.name for t in f.args if isinstance(t, Var))
    i = 0
    while f"{prefix}{i}" in taken:
        i += 1
    return f"{prefix}{i}"


def all_variable_names(phi) -> set:
    names = set()
    for f in walk(phi):
        if isinstance(f, (Exists, Forall)):
            names.update(f.vars)
        elif isinstance(f, Atom):
            names.update(t.name for t in f.args if isinstance(t, Var))
    return names


def simplify(phi) -> object:
    """Cosmetic normalization: flatten ∧/∨, drop ⊤/⊥ units, drop vacuous
    quantifier variables.  Equivalence-preserving (domains are non-empty);
    used only behind the CLI --simplify flag, never during extraction."""
    f = phi
    if isinstance(f, (Atom, Top)):
        return f
    if isinstance(f, Not):
        s = simplify(f.sub)
        if isinstance(s, Not):
            return s.sub
        return Not(s)
    if isinstance(f, (And, Or)):
        is_and = isinstance(f, And)
        unit, absorb = (TOP, BOTTOM) if is_and else (BOTTOM, TOP)
        flat = []
        for g in f.items:
            g = simplify(g)
            if isinstance(f, And) and isinstance(g, And) or isinstance(f, Or) and isinstance(g, Or):
                flat.extend(g.items)
            else:
                flat.append(g)
        kept = []
        for g in flat:
            if g == absorb:
                return absorb
            if g != unit and g not in kept:
                kept.append(g)
        return conj(kept) if is_and else disj(kept)
    if isinstance(f, (Exists, Forall)):
        body = simplify(f.body)
        fv = free_vars(body)
        kept = tuple(v for v in f.vars if v in fv)
        if not kept:
            return body
        return Exists(kept, body) if isinstance(f, Exists) else Forall(kept, body)
    raise FormulaError(f"not a formula: {phi!r}")
