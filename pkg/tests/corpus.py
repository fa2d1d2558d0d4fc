"""Shared algebra corpus for the test suite."""

import itertools
import random
from functools import lru_cache

from pmalg.algebra import FiniteAlgebra, direct_product
from pmalg.constructions import build_si, random_pm_algebra
from pmalg.duality import DualSpace, upset_algebra

SI_DESCRIPTORS = [(0, 0), (1, 0)] + [(i, m) for i in (1, 2) for m in (1, 2, 3)]


def two() -> FiniteAlgebra:
    return build_si(1, 0)


def chain4() -> FiniteAlgebra:
    return build_si(1, 2)


def chain5() -> FiniteAlgebra:
    return build_si(1, 3)


def diamond_fixed() -> FiniteAlgebra:
    """2 x 2 lattice with both atoms fixed by the negation."""
    return FiniteAlgebra([1, 3, 5, 15], [3, 1, 2, 0], names=["0", "a", "b", "1"])


def counterexample_space() -> DualSpace:
    """Two maximal points, each above only one minimal point, body a 2-chain.

    Points: 0=U1, 1=U2, 2=phi(U1), 3=phi(U2), 4=A, 5=B=phi(A).
    """
    covers = [(2, 5), (5, 4), (4, 0), (5, 1), (3, 4), (3, 1)]
    return DualSpace.from_covers(6, covers, [2, 3, 0, 1, 5, 4])


def counterexample_algebra() -> FiniteAlgebra:
    return upset_algebra(counterexample_space())


@lru_cache(maxsize=None)
def si_algebras() -> tuple:
    return tuple((f"B({i},{m})", build_si(i, m)) for i, m in SI_DESCRIPTORS)


@lru_cache(maxsize=None)
def product_algebras(limit: int = 10) -> tuple:
    nontrivial = [(n, L) for n, L in si_algebras() if L.n > 1]
    out = []
    for (n1, A), (n2, B) in itertools.combinations_with_replacement(nontrivial, 2):
        if A.n * B.n <= limit:
            out.append((f"{n1}x{n2}", direct_product(A, B)))
    return tuple(out)


@lru_cache(maxsize=None)
def random_algebras(count: int = 20, max_size: int = 8, seed: int = 20240) -> tuple:
    rng = random.Random(seed)
    return tuple((f"random{k}", random_pm_algebra(rng, max_size)) for k in range(count))


@lru_cache(maxsize=None)
def full_corpus() -> tuple:
    extra = (("diamond", diamond_fixed()), ("counterexample", counterexample_algebra()))
    return si_algebras() + product_algebras() + random_algebras() + extra


@lru_cache(maxsize=None)
def bpk0_products() -> tuple:
    """Ten products of simple members of BPK0."""
    t, c3, b2, b3 = build_si(1, 0), build_si(1, 1), build_si(2, 1), build_si(3, 1)
    recipes = {
        "2": [t],
        "3": [c3],
        "B2": [b2],
        "B3": [b3],
        "2x2": [t, t],
        "2x3": [t, c3],
        "2xB2": [t, b2],
        "3x3": [c3, c3],
        "3xB2": [c3, b2],
        "2x3xB2": [t, c3, b2],
    }
    return tuple((name, direct_product(*fs)) for name, fs in recipes.items())
