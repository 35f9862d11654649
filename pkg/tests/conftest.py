from __future__ import annotations

import pathlib

import pytest

from craig.definability import Theory
from craig.parser import parse

DATA = pathlib.Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def data_dir() -> pathlib.Path:
    return DATA


@pytest.fixture(scope="session")
def example1():
    """The cats/sizes implication with its two candidate interpolants."""
    phi = parse("(exists x. Cat(x)) & forall x. Cat(x) -> Big(x) & Green(x)")
    psi = parse("exists x. Big(x) & (Cat(x) | Dog(x))")
    theta1 = parse("exists x. Big(x) & Cat(x)")
    theta2 = parse("(exists x. Cat(x)) & forall x. Cat(x) -> Big(x)")
    return phi, psi, theta1, theta2


@pytest.fixture(scope="session")
def fig2_inputs():
    left = parse("exists x. (A(x) & !B(x)) & C(x)")
    right = parse("forall y. (!A(y) & E(y)) | B(y)")
    return left, right


TALLEST_AXIOMS = (
    "forall x y. Taller-than(y,x) -> !Tallest(x)",
    "forall x. Tallest(x) | exists y. Taller-than(y,x)",
    "forall x. !Taller-than(x,x)",
    "forall x y z. Taller-than(x,y) & Taller-than(y,z) -> Taller-than(x,z)",
    "exists x y z. Taller-than(x,y) & Taller-than(y,z)",
)


@pytest.fixture(scope="session")
def tallest_theory() -> Theory:
    return Theory(tuple(parse(a) for a in TALLEST_AXIOMS), "tallest")
