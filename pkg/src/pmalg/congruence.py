"""Congruences of finite pm-algebras.

Congruences are computed two ways: from C-subsets of the dual space
(involutive point sets ``Y`` with ``Max ∩ [Y) ⊆ Y``), and by an independent
search that closes principal congruences under joins.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

from .algebra import FiniteAlgebra, bits
from .duality import DualSpace, dual_space, eta, is_phi_connected
from .errors import CapExceeded, DomainError

DEFAULT_BRUTEFORCE_CAP = int(os.environ.get("PMALG_CAP_BRUTEFORCE", "10"))


@dataclass(frozen=True, order=True)
class Congruence:
    """A partition of the elements; ``blocks`` are sorted tuples, ordered by
    their least element."""

    blocks: tuple[tuple[int, ...], ...]

    @classmethod
    def from_labels(cls, labels) -> "Congruence":
        groups: dict = {}
        for x, lab in enumerate(labels):
            groups.setdefault(lab, []).append(x)
        return cls(tuple(sorted(tuple(g) for g in groups.values())))

    @property
    def labels(self) -> tuple[int, ...]:
        n = sum(len(b) for b in self.blocks)
        lab = [0] * n
        for i, blk in enumerate(self.blocks):
            for x in blk:
                lab[x] = i
        return tuple(lab)

    def related(self, a: int, b: int) -> bool:
        lab = self.labels
        return lab[a] == lab[b]

    def refines(self, other: "Congruence") -> bool:
        """``self ⊆ other`` as relations."""
        lab = other.labels
        return all(len({lab[x] for x in blk}) == 1 for blk in self.blocks)

    def __len__(self) -> int:
        return len(self.blocks)


def _sort_key(c: Congruence):
    return (-len(c.blocks), c.blocks)


# ---------------------------------------------------------------------------
# C-subsets


def is_c_subset(X: DualSpace, Y: int) -> bool:
    return X.phi_image(Y) == Y and X.up_closure(Y) & X.max_mask & ~Y == 0


def c_closure(X: DualSpace, Y: int) -> int:
    """Least C-subset containing ``Y``."""
    mx = X.max_mask
    while True:
        nxt = Y | X.phi_image(Y) | (X.up_closure(Y) & mx)
        if nxt == Y:
            return Y
        Y = nxt


def all_c_subsets(X: DualSpace) -> list[int]:
    """Every C-subset of ``X`` as a point bitmask, sorted by (size, mask).

    C-subsets are closed under union and intersection, so the search decides
    phi-orbits one at a time, closing after each inclusion and pruning any
    branch whose closure swallows an orbit already excluded.
    """
    orbits = []
    seen = 0
    for p in range(X.n):
        if not seen >> p & 1:
            o = (1 << p) | (1 << X.phi[p])
            orbits.append(o)
            seen |= o
    out: list[int] = []

    def walk(i: int, cur: int, excluded: int) -> None:
        while i < len(orbits) and orbits[i] & cur:
            i += 1
        if i == len(orbits):
            out.append(cur)
            return
        walk(i + 1, cur, excluded | orbits[i])
        nxt = c_closure(X, cur | orbits[i])
        if nxt & excluded == 0:
            walk(i + 1, nxt, excluded)

    walk(0, 0, 0)
    out.sort(key=lambda m: (bin(m).count("1"), m))
    return out


def congruence_from_csubset(
    L: FiniteAlgebra, Y: int, X: DualSpace | None = None
) -> Congruence:
    """``a ≡ b`` iff ``eta(a) ∩ Y = eta(b) ∩ Y``."""
    X = X if X is not None else dual_space(L)
    if not is_c_subset(X, Y):
        raise DomainError(f"point set {sorted(bits(Y))} is not a C-subset")
    e = eta(L, X)
    return Congruence.from_labels([v & Y for v in e])


def congruence_lattice(L: FiniteAlgebra) -> list[Congruence]:
    """All congruences, via C-subsets, finest first."""
    X = dual_space(L)
    return sorted(
        (congruence_from_csubset(L, Y, X) for Y in all_c_subsets(X)), key=_sort_key
    )


def csubset_congruence_pairs(L: FiniteAlgebra) -> list[tuple[int, Congruence]]:
    """``(Y, theta(Y))`` for every C-subset, in C-subset order."""
    X = dual_space(L)
    return [(Y, congruence_from_csubset(L, Y, X)) for Y in all_c_subsets(X)]


# ---------------------------------------------------------------------------
# independent route


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[max(ra, rb)] = min(ra, rb)
        return True


def _generated(L: FiniteAlgebra, pairs) -> tuple[int, ...]:
    """Labels of the congruence generated by ``pairs``.

    Closes the pair set under basic translations ``x -> x∧z, x∨z, x', x*``
    (Mal'cev); a pair whose ends are already joined is not re-expanded.
    """
    uf = _UnionFind(L.n)
    work = []
    for a, b in pairs:
        if uf.union(a, b):
            work.append((a, b))
    M, J, N, S = L.meet_table, L.join_table, L.neg, L.star
    while work:
        a, b = work.pop()
        images = [(N[a], N[b]), (S[a], S[b])]
        Ma, Mb, Ja, Jb = M[a], M[b], J[a], J[b]
        for z in range(L.n):
            images.append((Ma[z], Mb[z]))
            images.append((Ja[z], Jb[z]))
        for x, y in images:
            if uf.union(x, y):
                work.append((x, y))
    return tuple(uf.find(x) for x in range(L.n))


def principal_congruence(L: FiniteAlgebra, a: int, b: int) -> Congruence:
    return Congruence.from_labels(_generated(L, [(a, b)]))


def congruence_join(L: FiniteAlgebra, c1: Congruence, c2: Congruence) -> Congruence:
    pairs = [(blk[0], x) for c in (c1, c2) for blk in c.blocks for x in blk[1:]]
    return Congruence.from_labels(_generated(L, pairs))


def congruence_lattice_bruteforce(
    L: FiniteAlgebra, cap: int = DEFAULT_BRUTEFORCE_CAP
) -> list[Congruence]:
    """All congruences as joins of principal congruences, without duality."""
    if L.n > cap:
        raise CapExceeded(f"brute-force congruence search capped at {cap} elements")
    identity = Congruence.from_labels(range(L.n))
    principals = {
        principal_congruence(L, a, b) for a in range(L.n) for b in range(a + 1, L.n)
    }
    found = {identity} | principals
    frontier = list(found)
    while frontier:
        nxt = []
        for c in frontier:
            for p in principals:
                j = congruence_join(L, c, p)
                if j not in found:
                    found.add(j)
                    nxt.append(j)
        frontier = nxt
    return sorted(found, key=_sort_key)


def is_compatible(L: FiniteAlgebra, c: Congruence) -> bool:
    """Whether the partition respects ∧, ∨, ' and *."""
    lab = c.labels
    for blk in c.blocks:
        for x in blk[1:]:
            a = blk[0]
            if lab[L.neg[a]] != lab[L.neg[x]] or lab[L.star[a]] != lab[L.star[x]]:
                return False
            for z in range(L.n):
                if lab[L.meet_table[a][z]] != lab[L.meet_table[x][z]]:
                    return False
                if lab[L.join_table[a][z]] != lab[L.join_table[x][z]]:
                    return False
    return True


# ---------------------------------------------------------------------------
# classification


def _atoms(congs: list[Congruence]) -> list[Congruence]:
    """Minimal congruences strictly above the identity."""
    if not congs:
        return []
    n = sum(len(b) for b in congs[0].blocks)
    nontrivial = [c for c in congs if len(c.blocks) < n]
    return [
        c for c in nontrivial if not any(d != c and d.refines(c) for d in nontrivial)
    ]


def monolith(L: FiniteAlgebra, congs: list[Congruence] | None = None) -> Congruence | None:
    """The unique minimal nontrivial congruence, if there is exactly one."""
    congs = congs if congs is not None else congruence_lattice(L)
    atoms = _atoms(congs)
    return atoms[0] if len(atoms) == 1 else None


def is_simple(L: FiniteAlgebra, congs: list[Congruence] | None = None) -> bool:
    congs = congs if congs is not None else congruence_lattice(L)
    return len(congs) == 2


def is_subdirectly_irreducible(
    L: FiniteAlgebra, congs: list[Congruence] | None = None
) -> bool:
    if L.n == 1:
        return False
    return monolith(L, congs) is not None


def body_condition(X: DualSpace) -> bool:
    """``|Body| < 2`` or ``Body = {P, phi(P)}`` with ``phi(P) != P``."""
    bd = X.body_mask
    size = bin(bd).count("1")
    if size < 2:
        return True
    if size == 2:
        p = next(bits(bd))
        return X.phi[p] != p and X.phi[p] in set(bits(bd))
    return False


def is_simple_structural(L: FiniteAlgebra) -> bool:
    """Nontrivial, phi-connected dual equal to ``Max ∪ Min``."""
    X = dual_space(L)
    return L.n > 1 and is_phi_connected(X) and X.body_mask == 0


def is_si_structural(L: FiniteAlgebra) -> bool:
    """Nontrivial, phi-connected dual satisfying the body condition.

    Without phi-connectedness the body condition alone is not sufficient:
    ``2 x 2`` has empty body and is not subdirectly irreducible.
    """
    X = dual_space(L)
    return L.n > 1 and is_phi_connected(X) and body_condition(X)


def refinement_edges(congs: list[Congruence]) -> list[tuple[int, int]]:
    """Covering pairs ``(i, j)``: congs[i] is covered by congs[j]."""
    n = len(congs)
    below = [[i for i in range(n) if i != j and congs[i].refines(congs[j])] for j in range(n)]
    edges = []
    for j in range(n):
        for i in below[j]:
            if not any(k in below[j] and i in below[k] for k in below[j]):
                edges.append((i, j))
    return sorted(edges)


def quotient(L: FiniteAlgebra, c: Congruence) -> FiniteAlgebra:
    """``L / c``; block ``i`` of ``c`` becomes element ``i``."""
    if not is_compatible(L, c):
        raise DomainError("partition is not a congruence")
    lab = c.labels
    reps = [blk[0] for blk in c.blocks]
    k = len(reps)
    down = [0] * k
    for a in range(k):
        for b in range(k):
            if lab[L.meet_table[reps[a]][reps[b]]] == a:
                down[b] |= 1 << a
    neg = [lab[L.neg[r]] for r in reps]
    star = [lab[L.star[r]] for r in reps]
    names = ["[" + L.names[r] + "]" for r in reps]
    return FiniteAlgebra(down, neg, star, names)
