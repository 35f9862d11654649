"""Syntactic fragment membership flags and the CIP status table.

Membership checks are purely syntactic over the surface tree:

* quantifier-free: no quantifier at all;
* relativized (given a set of unary relativizers): every quantifier is a
  single-variable ``exists x. U(x) & ...`` or ``forall x. U(x) -> ...``;
* two-variable: at most two distinct variable names after a canonical
  minimal-renaming pass (raw name counting is not renaming-invariant);
* guarded: every quantifier block carries an atom containing all free
  variables of its scope;
* unary-negation: every negation's scope has at most one free variable;
* guarded-negation: every negation unary or guarded by a sibling atom in an
  enclosing conjunction (best effort; self-guardedness is not modeled).

The report's CIP column gives the table status for each fragment the formula
belongs to and "not-applicable" for the rest (the forward/fluted fragments
carry no membership check at all, so they are always "not-applicable" there).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import UnknownFragmentError
from .formulas import And, Atom, Exists, Forall, Not, Or, Top, Var, free_vars

HAS = "has"
LACKS = "lacks"
NOT_APPLICABLE = "not-applicable"

_CIP_TABLE = {
    "FO": HAS,
    "FO2": LACKS,
    "C2": LACKS,
    "GFO": LACKS,
    "GNFO": HAS,
    "UNFO": HAS,
    "FF": LACKS,
    "FL": LACKS,
    "ML": HAS,
}

_ALIASES = {"FO²": "FO2", "C²": "C2", "GF": "GFO", "UNF": "UNFO", "GNF": "GNFO"}


def cip_status(fragment: str) -> str:
    name = _ALIASES.get(fragment, fragment).upper()
    name = _ALIASES.get(name, name)
    if name not in _CIP_TABLE:
        raise UnknownFragmentError(
            f"unknown fragment {fragment!r}; known: {', '.join(sorted(_CIP_TABLE))}")
    return _CIP_TABLE[name]


@dataclass(frozen=True)
class FragmentReport:
    quantifier_free: bool
    relativized: bool
    two_variable: bool
    guarded: bool
    unary_negation: bool
    guarded_negation: bool
    cip: dict = field(default_factory=dict)

    def flags(self) -> dict:
        return {
            "quantifier-free": self.quantifier_free,
            "relativized": self.relativized,
            "two-variable": self.two_variable,
            "guarded": self.guarded,
            "unary-negation": self.unary_negation,
            "guarded-negation": self.guarded_negation,
        }


def _quantifiers(phi):
    stack = [phi]
    while stack:
        f = stack.pop()
        if isinstance(f, (Exists, Forall)):
            yield f
            stack.append(f.body)
        elif isinstance(f, (And, Or)):
            stack.extend(f.items)
        elif isinstance(f, Not):
            stack.append(f.sub)


def _is_relativized(phi, relativizers) -> bool:
    for q in _quantifiers(phi):
        if len(q.vars) != 1:
            return False
        v = q.vars[0]
        guard_atom = None
        if isinstance(q, Exists):
            if isinstance(q.body, And):
                guard_atom = q.body.items[0]
        else:
            # forall x. U(x) -> beta parses to !(U(x) & !beta); accept the
            # NNF spelling !U(x) | beta as well
            if isinstance(q.body, Not) and isinstance(q.body.sub, And):
                guard_atom = q.body.sub.items[0]
            elif isinstance(q.body, Or) and isinstance(q.body.items[0], Not):
                guard_atom = q.body.items[0].sub
        if not isinstance(guard_atom, Atom):
            return False
        if guard_atom.rel not in relativizers:
            return False
        if guard_atom.args != (Var(v),):
            return False
    return True


def _guard_candidates(body):
    """Atoms that can serve as the guard of a quantified body."""
    if isinstance(body, Atom):
        return [body]
    if isinstance(body, And):
        return [g for g in body.items if isinstance(g, Atom)]
    if isinstance(body, Not) and isinstance(body.sub, And):
        return [g for g in body.sub.items if isinstance(g, Atom)]
    if isinstance(body, Or):
        negated = [g.sub for g in body.items if isinstance(g, Not)]
        return [g for g in negated if isinstance(g, Atom)]
    return []


def _is_guarded(phi) -> bool:
    for q in _quantifiers(phi):
        need = free_vars(q.body)
        ok = False
        for g in _guard_candidates(q.body):
            have = {t.name for t in g.args if isinstance(t, Var)}
            if need <= have:
                ok = True
                break
        if not ok:
            return False
    return True


def _negations(phi):
    stack = [(phi, ())]
    while stack:
        f, siblings = stack.pop()
        if isinstance(f, Not):
            yield f, siblings
            stack.append((f.sub, ()))
        elif isinstance(f, And):
            atoms = tuple(g for g in f.items if isinstance(g, Atom))
            for g in f.items:
                stack.append((g, atoms))
        elif isinstance(f, Or):
            for g in f.items:
                stack.append((g, ()))
        elif isinstance(f, (Exists, Forall)):
            stack.append((f.body, ()))


def _is_unary_negation(phi) -> bool:
    return all(len(free_vars(n.sub)) <= 1 for n, _ in _negations(phi))


def _is_guarded_negation(phi) -> bool:
    for n, sibling_atoms in _negations(phi):
        need = free_vars(n.sub)
        if len(need) <= 1:
            continue
        if not any(need <= {t.name for t in g.args if isinstance(t, Var)}
                   for g in sibling_atoms):
            return False
    return True


def canonical_rename(phi):
    """Greedily rename bound variables to a minimal pool (v0, v1, ...).

    A pool name is reusable under a binder unless an outer variable mapped to
    it occurs free in the binder's body.
    """
    def rec(f, env):
        if isinstance(f, Atom):
            return Atom(f.rel, tuple(
                Var(env.get(t.name, t.name)) if isinstance(t, Var) else t
                for t in f.args))
        if isinstance(f, Top):
            return f
        if isinstance(f, Not):
            return Not(rec(f.sub, env))
        if isinstance(f, And):
            return And(tuple(rec(g, env) for g in f.items))
        if isinstance(f, Or):
            return Or(tuple(rec(g, env) for g in f.items))
        if isinstance(f, (Exists, Forall)):
            outer_free = free_vars(f.body) - set(f.vars)
            blocked = {env.get(x, x) for x in outer_free}
            env2 = dict(env)
            fresh = []
            for v in f.vars:
                i = 0
                while f"v{i}" in blocked:
                    i += 1
                name = f"v{i}"
                blocked.add(name)
                fresh.append(name)
                env2[v] = name
            body = rec(f.body, env2)
            cls = Exists if isinstance(f, Exists) else Forall
            return cls(tuple(fresh), body)
        raise UnknownFragmentError(f"not a formula: {f!r}")

    return rec(phi, {})


def _variable_names(phi) -> set:
    names = set()
    stack = [phi]
    while stack:
        f = stack.pop()
        if isinstance(f, Atom):
            names.update(t.name for t in f.args if isinstance(t, Var))
        elif isinstance(f, (And, Or)):
            stack.extend(f.items)
        elif isinstance(f, Not):
            stack.append(f.sub)
        elif isinstance(f, (Exists, Forall)):
            names.update(f.vars)
            stack.append(f.body)
    return names


def classify(phi, relativizers=()) -> FragmentReport:
    """Compute the syntactic fragment flags and the matching CIP rows."""
    relativizers = set(relativizers)
    qf = not any(True for _ in _quantifiers(phi))
    relativized = qf or _is_relativized(phi, relativizers)
    two_var = len(_variable_names(canonical_rename(phi))) <= 2
    guarded = _is_guarded(phi)
    unfo = _is_unary_negation(phi)
    gnfo = _is_guarded_negation(phi)
    membership = {
        "FO": True,
        "FO2": two_var,
        "C2": two_var,  # counting quantifiers are not in this syntax
        "GFO": guarded,
        "GNFO": gnfo,
        "UNFO": unfo,
        "FF": None,  # no inline syntax definition; membership unchecked
        "FL": None,
        "ML": None,
    }
    cip = {name: (_CIP_TABLE[name] if member else NOT_APPLICABLE)
           for name, member in membership.items()}
    return FragmentReport(qf, relativized, two_var, guarded, unfo, gnfo, cip)
