"""Finite duality between pm-algebras and posets with an order-reversing involution.

Points of the dual of an algebra are its prime filters, ordered by inclusion
and canonically numbered by the bitmask of the filter. ``phi`` is the
Birula-Rasiowa map ``P -> {x : x' not in P}``.
"""

from __future__ import annotations

import enum
from typing import Sequence

from .algebra import DEFAULT_ELEMENT_CAP, FiniteAlgebra, Lattice, bits, mask_of
from .errors import CapExceeded, InvalidSpace


class SpaceType(str, enum.Enum):
    TYPE1 = "Type1"
    TYPE2 = "Type2"
    TYPE3 = "Type3"
    OTHER = "Other"


class DualSpace:
    """A finite poset with an order-reversing involution ``phi``.

    ``below[p]`` is the bitmask of points ``q <= p``. ``filters``, when the
    space comes from an algebra, holds each point's prime filter as a bitmask
    over the algebra's elements.
    """

    def __init__(
        self,
        below: Sequence[int],
        phi: Sequence[int],
        filters: Sequence[int] | None = None,
    ):
        self.n = len(below)
        self.below = tuple(below)
        self.phi = tuple(phi)
        self.filters = tuple(filters) if filters is not None else None
        if len(self.phi) != self.n:
            raise InvalidSpace("phi has wrong length")
        above = [0] * self.n
        for y in range(self.n):
            for x in bits(self.below[y]):
                above[x] |= 1 << y
        self.above = tuple(above)
        for p in range(self.n):
            if not 0 <= self.phi[p] < self.n or self.phi[self.phi[p]] != p:
                raise InvalidSpace(f"phi is not an involution at point {p}")
        for q in range(self.n):
            for p in bits(self.below[q]):
                if not self.leq(self.phi[q], self.phi[p]):
                    raise InvalidSpace(f"phi does not reverse {p} <= {q}")

    @classmethod
    def from_covers(cls, n: int, covers, phi) -> "DualSpace":
        from .algebra import order_closure

        return cls(order_closure(n, covers), phi)

    def leq(self, p: int, q: int) -> bool:
        return bool(self.below[q] >> p & 1)

    @property
    def all_points(self) -> int:
        return (1 << self.n) - 1

    def up_closure(self, mask: int) -> int:
        out = 0
        for p in bits(mask):
            out |= self.above[p]
        return out

    def down_closure(self, mask: int) -> int:
        out = 0
        for p in bits(mask):
            out |= self.below[p]
        return out

    def phi_image(self, mask: int) -> int:
        return mask_of(self.phi[p] for p in bits(mask))

    @property
    def max_mask(self) -> int:
        return mask_of(p for p in range(self.n) if self.above[p] == 1 << p)

    @property
    def min_mask(self) -> int:
        return mask_of(p for p in range(self.n) if self.below[p] == 1 << p)

    @property
    def body_mask(self) -> int:
        return self.all_points & ~(self.max_mask | self.min_mask)

    def restrict(self, points) -> "DualSpace":
        """Subspace on ``points`` (a bitmask or an iterable; must be phi-invariant)."""
        mask = points if isinstance(points, int) else mask_of(points)
        pts = list(bits(mask))
        index = {p: i for i, p in enumerate(pts)}
        below = [mask_of(index[q] for q in bits(self.below[p] & mask)) for p in pts]
        phi = [index[self.phi[p]] for p in pts]
        filters = [self.filters[p] for p in pts] if self.filters is not None else None
        return DualSpace(below, phi, filters)

    def __repr__(self) -> str:
        return f"DualSpace(n={self.n}, phi={self.phi})"


# ---------------------------------------------------------------------------


def _prime_filter_masks(L: Lattice) -> list[int]:
    # prime filters of a finite distributive lattice are the principal
    # filters of its join-irreducibles
    return sorted(L.up[j] for j in L.join_irreducibles())


def prime_filters(L: Lattice) -> list[frozenset[int]]:
    return [frozenset(bits(m)) for m in _prime_filter_masks(L)]


def dual_space(L: FiniteAlgebra) -> DualSpace:
    filters = _prime_filter_masks(L)
    index = {f: i for i, f in enumerate(filters)}
    below = [mask_of(i for i, g in enumerate(filters) if g & ~f == 0) for f in filters]
    phi = []
    for f in filters:
        image = mask_of(x for x in range(L.n) if not f >> L.neg[x] & 1)
        if image not in index:
            raise InvalidSpace("phi(P) is not a prime filter; neg is not De Morgan")
        phi.append(index[image])
    return DualSpace(below, phi, filters)


def upsets(X: DualSpace, cap: int = DEFAULT_ELEMENT_CAP) -> list[int]:
    """All up-sets of ``X`` as point bitmasks, sorted by (size, mask)."""
    order = sorted(range(X.n), key=lambda p: -bin(X.below[p]).count("1"))
    out: list[int] = []

    def walk(i: int, cur: int) -> None:
        if i == len(order):
            out.append(cur)
            if len(out) > cap:
                raise CapExceeded(f"more than {cap} up-sets")
            return
        p = order[i]
        walk(i + 1, cur)
        strict_above = X.above[p] & ~(1 << p)
        if strict_above & ~cur == 0:
            walk(i + 1, cur | 1 << p)

    walk(0, 0)
    out.sort(key=lambda m: (bin(m).count("1"), m))
    return out


def upset_algebra(X: DualSpace, cap: int = DEFAULT_ELEMENT_CAP) -> FiniteAlgebra:
    """The pm-algebra of up-sets of ``X``.

    ``V' = complement of phi(V)`` and ``V* = complement of the down-closure
    of V``.
    """
    ups = upsets(X, cap)
    index = {u: i for i, u in enumerate(ups)}
    full = X.all_points
    down = [mask_of(j for j, w in enumerate(ups) if w & ~v == 0) for v in ups]
    neg = [index[full & ~X.phi_image(v)] for v in ups]
    star = [index[full & ~X.down_closure(v)] for v in ups]
    names = ["{" + ",".join(f"P{p}" for p in bits(v)) + "}" for v in ups]
    return FiniteAlgebra(down, neg, star, names)


def eta(L: FiniteAlgebra, X: DualSpace) -> list[int]:
    """``eta(a)`` = bitmask of points whose filter contains ``a``."""
    return [mask_of(p for p in range(X.n) if X.filters[p] >> a & 1) for a in range(L.n)]


def roundtrip_isomorphic(L: FiniteAlgebra) -> bool:
    """Whether ``eta`` maps ``L`` isomorphically onto the up-set algebra of its dual."""
    X = dual_space(L)
    A = upset_algebra(X)
    ups = upsets(X)
    index = {u: i for i, u in enumerate(ups)}
    e = eta(L, X)
    if any(v not in index for v in e):
        return False
    f = [index[v] for v in e]
    if len(set(f)) != L.n or A.n != L.n:
        return False
    for a in range(L.n):
        if f[L.neg[a]] != A.neg[f[a]] or f[L.star[a]] != A.star[f[a]]:
            return False
        for b in range(L.n):
            if L.leq(a, b) != A.leq(f[a], f[b]):
                return False
    return True


# ---------------------------------------------------------------------------
# structural classifiers


def max_points(X: DualSpace) -> frozenset[int]:
    return frozenset(bits(X.max_mask))


def min_points(X: DualSpace) -> frozenset[int]:
    return frozenset(bits(X.min_mask))


def body(X: DualSpace) -> frozenset[int]:
    return frozenset(bits(X.body_mask))


def phi_components(X: DualSpace) -> list[frozenset[int]]:
    """Minimal nonempty subsets closed upward, downward and under phi,
    ordered by their least point."""
    return [frozenset(bits(m)) for m in phi_component_masks(X)]


def phi_component_masks(X: DualSpace) -> list[int]:
    parent = list(range(X.n))

    def find(p: int) -> int:
        while parent[p] != p:
            parent[p] = parent[parent[p]]
            p = parent[p]
        return p

    def union(p: int, q: int) -> None:
        a, b = find(p), find(q)
        if a != b:
            parent[max(a, b)] = min(a, b)

    for q in range(X.n):
        union(q, X.phi[q])
        for p in bits(X.below[q]):
            union(p, q)
    comps: dict[int, int] = {}
    for p in range(X.n):
        comps[find(p)] = comps.get(find(p), 0) | 1 << p
    return [comps[r] for r in sorted(comps)]


def is_phi_connected(X: DualSpace) -> bool:
    return len(phi_component_masks(X)) == 1


def bundle_condition(X: DualSpace) -> bool:
    """Every maximal point lies above every non-maximal point."""
    mx = X.max_mask
    rest = X.all_points & ~mx
    return all(X.below[u] & rest == rest for u in bits(mx))


def space_type(X: DualSpace) -> SpaceType:
    if X.n == 0 or not bundle_condition(X):
        return SpaceType.OTHER
    mx, mn, bd = X.max_mask, X.min_mask, X.body_mask
    nb = bin(bd).count("1")
    if nb == 0:
        if X.n == 1 or mx & mn == 0:
            return SpaceType.TYPE1
        return SpaceType.OTHER
    if nb == 1:
        return SpaceType.TYPE2
    if nb == 2:
        p = next(bits(bd))
        if X.phi[p] != p and bd == (1 << p) | (1 << X.phi[p]):
            return SpaceType.TYPE3
    return SpaceType.OTHER


def is_kleene_space(X: DualSpace) -> bool:
    """Each point is comparable with its phi-image."""
    return all(X.leq(p, X.phi[p]) or X.leq(X.phi[p], p) for p in range(X.n))


def max_points_above(X: DualSpace) -> int:
    """Largest number of maximal points above a single point (0 if empty)."""
    mx = X.max_mask
    return max((bin(X.above[p] & mx).count("1") for p in range(X.n)), default=0)


def hasse_edges(X: DualSpace) -> list[tuple[int, int]]:
    out = []
    for q in range(X.n):
        strict = X.below[q] & ~(1 << q)
        for p in bits(strict):
            if not strict & X.above[p] & ~(1 << p):
                out.append((p, q))
    return sorted(out)


def to_dot(X: DualSpace, name: str = "dual") -> str:
    """Graphviz source: Hasse edges bottom-up plus dashed phi edges."""
    lines = [f"digraph {name} {{", "  rankdir=BT;", "  node [shape=circle];"]
    for p in range(X.n):
        lines.append(f"  P{p};")
    for p, q in hasse_edges(X):
        lines.append(f"  P{p} -> P{q};")
    for p in range(X.n):
        q = X.phi[p]
        if p < q:
            lines.append(f"  P{p} -> P{q} [style=dashed, dir=none, constraint=false];")
    lines.append("}")
    return "\n".join(lines) + "\n"
