import pytest

from corpus import chain4, diamond_fixed, full_corpus, two
from pmalg.algebra import (
    FiniteAlgebra,
    Lattice,
    algebra_from_raw,
    algebra_to_raw,
    compute_star,
    decompose_into_simples,
    dense_elements,
    direct_product,
    find_isomorphism,
    fixed_points,
    is_isomorphic,
    is_kleene,
    join,
    kleene_witness,
    least_dense,
    meet,
    validate,
)
from pmalg.constructions import boolean_block, build_si
from pmalg.errors import (
    CapExceeded,
    DomainError,
    InvalidAlgebra,
    NotALattice,
    NotPseudocomplemented,
    StructureError,
)

CHAIN2 = {"elements": 2, "covers": [[0, 1]], "neg": [1, 0], "star": [1, 0]}
CHAIN4 = {"elements": 4, "covers": [[0, 1], [1, 2], [2, 3]], "neg": [3, 2, 1, 0], "star": [3, 0, 0, 0]}


def test_validate_two_chain():
    assert validate(CHAIN2).passed


def test_validate_four_chain():
    assert validate(CHAIN4)


def test_validate_four_chain_bad_negation():
    raw = dict(CHAIN4, neg=[3, 1, 1, 0])
    report = validate(raw)
    assert not report.passed
    axioms = [a for a, _ in report.violations]
    assert "involution" in axioms
    assert report.violations[0] == ("involution", (2,))


def test_validate_bad_star_is_reported():
    report = validate(dict(CHAIN4, star=[3, 1, 0, 0]))
    assert [a for a, _ in report.violations] == ["pseudocomplement"]


def test_validate_distributivity_failure():
    # the diamond M3 with a negation
    raw = {"elements": 5, "covers": [[0, 1], [0, 2], [0, 3], [1, 4], [2, 4], [3, 4]],
           "neg": [4, 1, 3, 2, 0]}
    report = validate(raw)
    assert report.violations[0][0] == "distributivity"


def test_validate_not_a_lattice():
    raw = {"elements": 4, "covers": [[0, 2], [0, 3], [1, 2], [1, 3]], "neg": [0, 1, 2, 3]}
    axioms = [a for a, _ in validate(raw).violations]
    assert "bounded" in axioms


def test_validate_antisymmetry():
    raw = {"elements": 2, "covers": [[0, 1], [1, 0]], "neg": [1, 0]}
    assert validate(raw).violations[0] == ("antisymmetry", (0, 1))


@pytest.mark.parametrize(
    "raw",
    [
        {"elements": 2, "covers": [[0, 5]], "neg": [1, 0]},
        {"elements": 2, "covers": [[0, 1]], "neg": [1]},
        {"elements": 2, "covers": [[0, 1]]},
        {"elements": 0, "neg": []},
        {"elements": 2, "covers": [[0, 1, 1]], "neg": [1, 0]},
        [1, 2],
    ],
)
def test_malformed_input_is_structural(raw):
    with pytest.raises(StructureError):
        validate(raw)


def test_algebra_from_raw_raises_invalid():
    with pytest.raises(InvalidAlgebra) as info:
        algebra_from_raw(dict(CHAIN4, neg=[3, 1, 1, 0]))
    assert not info.value.report.passed


def test_element_cap():
    with pytest.raises(CapExceeded):
        validate(CHAIN4, cap=3)


def test_raw_roundtrip():
    L = build_si(2, 2)
    assert algebra_from_raw(algebra_to_raw(L)) == L


def test_meet_join_examples():
    c4 = chain4()
    assert meet(c4, 1, 2) == 1
    b21 = build_si(2, 1)
    d = b21.names.index("d")
    assert join(b21, 1, 2) == d
    for x in range(b21.n):
        assert meet(b21, x, b21.top) == x


def test_compute_star_examples():
    assert compute_star(two()) == (1, 0)
    b21 = build_si(2, 1)
    assert b21.star[1] == 2 and b21.star[2] == 1
    for x in range(b21.n):
        if b21.leq(b21.names.index("d"), x):
            assert b21.star[x] == b21.bottom
    B = boolean_block(2)
    assert compute_star(B) == (3, 2, 1, 0)


def test_compute_star_missing():
    # M3: the annihilator of an atom is {0, b, c}, which has no largest element
    L = Lattice.from_covers(5, [(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)])
    with pytest.raises(NotPseudocomplemented):
        compute_star(L)


def test_not_a_lattice():
    with pytest.raises(NotALattice):
        Lattice.from_covers(4, [(0, 2), (0, 3), (1, 2), (1, 3)])


def test_kleene_examples():
    for i in (1, 2):
        for m in (1, 2, 3):
            assert is_kleene(build_si(i, m))
    assert is_kleene(two())
    D = diamond_fixed()
    assert validate(D).passed
    assert kleene_witness(D) == (1, 2)


def test_dense_and_least_dense():
    assert dense_elements(two()) == {1}
    assert least_dense(two()) == 1
    b21 = build_si(2, 1)
    assert b21.names[least_dense(b21)] == "d"
    c4 = chain4()
    assert c4.names[least_dense(c4)] == "d"


def test_fixed_points():
    for i in (1, 2, 3):
        L = build_si(i, 1)
        assert [L.names[x] for x in fixed_points(L)] == ["d"]
        assert fixed_points(build_si(i, 2)) == frozenset()
    assert fixed_points(two()) == frozenset()


def test_decompose_examples():
    t, b2, b3 = two(), build_si(2, 1), build_si(3, 1)
    parts = decompose_into_simples(direct_product(t, t))
    assert len(parts) == 2 and all(is_isomorphic(p, t) for p in parts)
    parts = sorted(decompose_into_simples(direct_product(t, b2)), key=lambda a: a.n)
    assert is_isomorphic(parts[0], t) and is_isomorphic(parts[1], b2)
    parts = decompose_into_simples(b3)
    assert len(parts) == 1 and is_isomorphic(parts[0], b3)


def test_decompose_outside_bpk0():
    with pytest.raises(DomainError):
        decompose_into_simples(chain4())


def test_product_size_and_names():
    P = direct_product(two(), chain4())
    assert P.n == 8
    assert P.names[0] == "(0,0)"
    assert validate(P).passed


def test_isomorphism_examples():
    L = build_si(2, 2)
    assert is_isomorphic(L, L)
    assert not is_isomorphic(chain4(), direct_product(two(), two()))
    b21 = build_si(2, 1)
    perm = [b21.neg[x] for x in range(b21.n)]  # any bijection works as relabelling
    copy = b21.relabel(perm)
    f = find_isomorphism(b21, copy)
    assert f is not None
    for x in range(b21.n):
        assert f[b21.neg[x]] == copy.neg[f[x]]


def test_equality_and_hash():
    assert build_si(2, 1) == build_si(2, 1)
    assert len({build_si(2, 1), build_si(2, 1), build_si(1, 1)}) == 2


@pytest.mark.parametrize("name,L", full_corpus(), ids=[n for n, _ in full_corpus()])
def test_corpus_valid(name, L):
    assert validate(L).passed
    assert compute_star(L) == L.star


def test_explicit_star_is_kept():
    L = FiniteAlgebra([1, 3], [1, 0], [1, 0])
    assert L.star == (1, 0)
