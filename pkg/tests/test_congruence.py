import pytest

from corpus import chain4, chain5, counterexample_algebra, full_corpus, two
from pmalg.algebra import direct_product
from pmalg.congruence import (
    Congruence,
    all_c_subsets,
    body_condition,
    c_closure,
    congruence_from_csubset,
    congruence_lattice,
    congruence_lattice_bruteforce,
    is_c_subset,
    is_compatible,
    is_si_structural,
    is_simple,
    is_simple_structural,
    is_subdirectly_irreducible,
    monolith,
    principal_congruence,
    quotient,
    refinement_edges,
)
from pmalg.constructions import build_si
from pmalg.duality import DualSpace, dual_space, is_phi_connected
from pmalg.errors import CapExceeded, DomainError

CORPUS = full_corpus()
IDS = [n for n, _ in CORPUS]


def test_c_subset_examples():
    assert all_c_subsets(DualSpace([1], [0])) == [0, 1]
    X = dual_space(chain4())
    assert all_c_subsets(X) == [0, 0b101, 0b111]
    X = dual_space(chain5())
    assert all_c_subsets(X) == [0, X.max_mask | X.min_mask, X.all_points]


def test_congruence_from_csubset_examples():
    L = chain4()
    X = dual_space(L)
    assert len(congruence_from_csubset(L, X.all_points)) == L.n
    assert len(congruence_from_csubset(L, 0)) == 1
    c = congruence_from_csubset(L, 0b101)
    assert [[L.names[x] for x in b] for b in c.blocks] == [["0"], ["d", "d'"], ["1"]]
    with pytest.raises(DomainError):
        congruence_from_csubset(L, 0b001)


def test_lattice_counts():
    assert len(congruence_lattice(two())) == 2
    assert len(congruence_lattice(chain4())) == 3
    for i in (1, 2, 3):
        assert len(congruence_lattice(build_si(i, 1))) == 2
    assert len(congruence_lattice_bruteforce(two())) == 2
    assert len(congruence_lattice_bruteforce(chain4())) == 3
    assert len(congruence_lattice_bruteforce(direct_product(two(), two()))) == 4


def test_bruteforce_cap():
    with pytest.raises(CapExceeded):
        congruence_lattice_bruteforce(build_si(2, 3), cap=8)


def test_classification_examples():
    for i in (1, 2, 3):
        assert is_simple(build_si(i, 1))
    c4 = chain4()
    assert is_subdirectly_irreducible(c4) and not is_simple(c4)
    congs = congruence_lattice(c4)
    assert all(congs[k + 1].refines(congs[k]) is False for k in range(len(congs) - 1))
    assert all(congs[k].refines(congs[k + 1]) for k in range(len(congs) - 1))
    d = direct_product(two(), two())
    assert not is_simple(d) and not is_subdirectly_irreducible(d)
    assert monolith(d) is None


def test_counterexample_is_si():
    assert is_subdirectly_irreducible(counterexample_algebra())


def test_congruence_helpers():
    L = chain4()
    c = principal_congruence(L, 1, 2)
    assert c == Congruence(((0,), (1, 2), (3,)))
    assert c.related(1, 2) and not c.related(0, 1)
    assert is_compatible(L, c)
    assert not is_compatible(L, Congruence(((0, 1), (2,), (3,))))
    Q = quotient(L, c)
    assert Q.n == 3
    assert Congruence.from_labels([0, 1, 1, 2]) == c
    with pytest.raises(DomainError):
        quotient(L, Congruence(((0, 1), (2,), (3,))))
    assert refinement_edges(congruence_lattice(L)) == [(0, 1), (1, 2)]


@pytest.mark.parametrize("name,L", CORPUS, ids=IDS)
def test_duality_matches_bruteforce(name, L):
    if L.n > 10:
        pytest.skip("brute force capped at 10 elements")
    assert sorted(congruence_lattice(L)) == sorted(congruence_lattice_bruteforce(L))


@pytest.mark.parametrize("name,L", CORPUS, ids=IDS)
def test_c_subset_properties(name, L):
    X = dual_space(L)
    for Y in all_c_subsets(X):
        assert is_c_subset(X, Y)
        assert c_closure(X, Y) == Y
        assert X.down_closure(Y) & X.min_mask & ~Y == 0
        if Y and is_phi_connected(X):
            assert (X.max_mask | X.min_mask) & ~Y == 0
    # every subset's closure is a C-subset
    found = set(all_c_subsets(X))
    for p in range(X.n):
        assert c_closure(X, 1 << p) in found


@pytest.mark.parametrize("name,L", CORPUS, ids=IDS)
def test_structural_classifiers(name, L):
    X = dual_space(L)
    si = is_subdirectly_irreducible(L)
    assert is_simple(L) == is_simple_structural(L)
    assert si == is_si_structural(L)
    if si:
        assert body_condition(X) and is_phi_connected(X)


def test_csubset_congruence_is_compatible():
    L = build_si(2, 3)
    X = dual_space(L)
    for Y in all_c_subsets(X):
        assert is_compatible(L, congruence_from_csubset(L, Y, X))
