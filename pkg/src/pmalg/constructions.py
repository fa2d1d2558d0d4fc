"""Canonical algebras, subalgebras, homomorphisms and the s.i. family B(i,m)."""

from __future__ import annotations

import random
from dataclasses import dataclass

from .algebra import (
    DEFAULT_ELEMENT_CAP,
    FiniteAlgebra,
    Lattice,
    bits,
    fixed_points,
    is_isomorphic,
    mask_of,
    order_closure,
)
from .errors import CapExceeded, DomainError, InvalidSpace


# ---------------------------------------------------------------------------
# lattices


def boolean_block(k: int) -> Lattice:
    """Boolean lattice of subsets of ``k`` atoms; element ``S`` is the mask ``S``."""
    if k < 0:
        raise DomainError("boolean_block needs k >= 0")
    size = 1 << k
    down = [mask_of(t for t in range(size) if t & ~s == 0) for s in range(size)]
    return Lattice(down)


def chain(m: int) -> Lattice:
    if m < 1:
        raise DomainError("chain needs m >= 1")
    return Lattice([(1 << (x + 1)) - 1 for x in range(m)])


def ordinal_sum(L1: Lattice, L2: Lattice) -> Lattice:
    """Stack ``L2`` on ``L1`` identifying ``1`` of ``L1`` with ``0`` of ``L2``.

    Elements of ``L1`` keep their indices; the rest of ``L2`` follows in
    index order.
    """
    n1 = L1.n
    index = {}
    nxt = n1
    for y in range(L2.n):
        if y == L2.bottom:
            index[y] = L1.top
        else:
            index[y] = nxt
            nxt += 1
    all1 = (1 << n1) - 1
    down = list(L1.down)
    for y in range(L2.n):
        if y != L2.bottom:
            down.append(all1 | mask_of(index[z] for z in bits(L2.down[y])))
    return Lattice(down)


# ---------------------------------------------------------------------------
# B(i, m)


@dataclass(frozen=True, order=True)
class SiDescriptor:
    """``B(i,m)``: Boolean block with ``i`` atoms, an ``m``-chain, mirror block.

    ``(0,0)`` is the trivial algebra and ``(1,0)`` the two-element chain.
    """

    i: int
    m: int

    def __post_init__(self):
        ok = (self.i, self.m) in ((0, 0), (1, 0)) or (self.i >= 1 and 1 <= self.m <= 3)
        if not ok:
            raise DomainError(f"invalid descriptor ({self.i},{self.m})")

    @classmethod
    def parse(cls, text: str) -> "SiDescriptor":
        try:
            i, m = (int(p) for p in text.split(","))
        except ValueError:
            raise DomainError(f"descriptor must look like 'i,m', got {text!r}") from None
        return cls(i, m)

    @property
    def size(self) -> int:
        if self.m == 0:
            return self.i + 1
        return 2 ** (self.i + 1) + self.m - 2

    def __str__(self) -> str:
        return f"B({self.i},{self.m})"


def _lower_name(S: int, i: int) -> str:
    if S == 0:
        return "0"
    return "a" + "".join(str(t + 1) for t in range(i) if S >> t & 1)


def build_si(i: int | SiDescriptor, m: int | None = None) -> FiniteAlgebra:
    """The s.i. algebra ``B(i,m)`` with its mirror involution.

    Index layout: lower-block mask ``S`` at ``S``; chain position ``j`` at
    ``2^i - 1 + j``; upper-block mask ``S`` at ``2^i - 2 + m + S``.
    """
    d = i if isinstance(i, SiDescriptor) else SiDescriptor(i, m)
    i, m = d.i, d.m
    if m == 0:
        if i == 0:
            return FiniteAlgebra([1], [0], [0], ["0"])
        return FiniteAlgebra([1, 3], [1, 0], [1, 0], ["0", "1"])

    B = boolean_block(i)
    L = ordinal_sum(ordinal_sum(B, chain(m)), B)
    full = (1 << i) - 1
    low = lambda S: S  # noqa: E731
    mid = lambda j: (1 << i) - 1 + j  # noqa: E731
    upp = lambda S: (1 << i) - 2 + m + S  # noqa: E731

    neg = [0] * L.n
    names = [""] * L.n
    for S in range(1 << i):
        neg[low(S)] = upp(full & ~S)
        neg[upp(full & ~S)] = low(S)
    for j in range(m):
        neg[mid(j)] = mid(m - 1 - j)
    for S in range(full):
        names[low(S)] = _lower_name(S, i)
        names[upp(full & ~S)] = _lower_name(S, i) + "'" if S else "1"
    names[mid(0)] = "d"
    if m >= 2:
        names[mid(m - 1)] = "d'"
    if m == 3:
        names[mid(1)] = "c"
    return FiniteAlgebra(L.down, neg, None, names)


def boolean_si(k: int) -> FiniteAlgebra:
    """``B_k = B(k,1)``; ``k = 0`` gives the two-element chain."""
    return build_si(1, 0) if k == 0 else build_si(k, 1)


def si_leq(d1: SiDescriptor, d2: SiDescriptor) -> bool:
    return d1.i <= d2.i and d1.m <= d2.m


# ---------------------------------------------------------------------------
# subalgebras


def closure_mask(L: FiniteAlgebra, mask: int) -> int:
    """Least subuniverse containing ``mask`` and the constants."""
    cur = 0
    todo = list(bits(mask | 1 << L.bottom | 1 << L.top))
    while todo:
        x = todo.pop()
        if cur >> x & 1:
            continue
        cur |= 1 << x
        new = [L.neg[x], L.star[x]]
        Mx, Jx = L.meet_table[x], L.join_table[x]
        for y in bits(cur):
            new.append(Mx[y])
            new.append(Jx[y])
        for v in new:
            if not cur >> v & 1:
                todo.append(v)
    return cur


def subalgebra_on(L: FiniteAlgebra, mask: int) -> tuple[FiniteAlgebra, tuple[int, ...]]:
    """The subalgebra on a closed ``mask`` and its embedding (new -> old)."""
    elems = list(bits(mask))
    index = {x: k for k, x in enumerate(elems)}
    down = [mask_of(index[y] for y in bits(L.down[x] & mask)) for x in elems]
    neg = [index[L.neg[x]] for x in elems]
    star = [index[L.star[x]] for x in elems]
    names = [L.names[x] for x in elems]
    return FiniteAlgebra(down, neg, star, names), tuple(elems)


def subalgebra_generated(L: FiniteAlgebra, G) -> tuple[FiniteAlgebra, tuple[int, ...]]:
    return subalgebra_on(L, closure_mask(L, mask_of(G)))


def all_subuniverses(L: FiniteAlgebra, cap: int = DEFAULT_ELEMENT_CAP) -> list[int]:
    """Every subuniverse as an element bitmask, sorted by (size, mask)."""
    start = closure_mask(L, 0)
    found = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for S in frontier:
            for x in range(L.n):
                if not S >> x & 1:
                    T = closure_mask(L, S | 1 << x)
                    if T not in found:
                        found.add(T)
                        nxt.append(T)
                        if len(found) > cap:
                            raise CapExceeded(f"more than {cap} subalgebras")
        frontier = nxt
    return sorted(found, key=lambda s: (bin(s).count("1"), s))


# ---------------------------------------------------------------------------
# homomorphisms


def _generating_set(A: FiniteAlgebra) -> list[int]:
    gens = []
    cur = closure_mask(A, 0)
    for x in sorted(range(A.n), key=lambda e: (A.height(e), e)):
        if not cur >> x & 1:
            gens.append(x)
            cur = closure_mask(A, cur | 1 << x)
    return gens


def _propagate(A, B, f: list[int], known: list[int], queue: list[int]) -> bool:
    while queue:
        x = queue.pop()
        fx = f[x]
        derived = [(A.neg[x], B.neg[fx]), (A.star[x], B.star[fx])]
        Mx, Jx = A.meet_table[x], A.join_table[x]
        Mb, Jb = B.meet_table[fx], B.join_table[fx]
        for y in known:
            fy = f[y]
            derived.append((Mx[y], Mb[fy]))
            derived.append((Jx[y], Jb[fy]))
        for a, b in derived:
            if f[a] < 0:
                f[a] = b
                known.append(a)
                queue.append(a)
            elif f[a] != b:
                return False
    return True


def homomorphisms(
    A: FiniteAlgebra, B: FiniteAlgebra, cap: int = DEFAULT_ELEMENT_CAP
) -> list[tuple[int, ...]]:
    """All homomorphisms ``A -> B`` as image tuples, in lexicographic order.

    Backtracks over images of a generating set of ``A`` (candidates by
    increasing height) and propagates every forced value.
    """
    if max(A.n, B.n) > cap:
        raise CapExceeded(f"homomorphism search above element cap {cap}")
    gens = _generating_set(A)
    cands = sorted(range(B.n), key=lambda e: (B.height(e), e))
    f0 = [-1] * A.n
    known0: list[int] = []
    seeds = [(A.bottom, B.bottom), (A.top, B.top)]
    for a, b in seeds:
        if f0[a] >= 0 and f0[a] != b:
            return []
        if f0[a] < 0:
            f0[a] = b
            known0.append(a)
    if not _propagate(A, B, f0, known0, list(known0)):
        return []
    out: list[tuple[int, ...]] = []

    def search(k: int, f: list[int], known: list[int]) -> None:
        while k < len(gens) and f[gens[k]] >= 0:
            k += 1
        if k == len(gens):
            out.append(tuple(f))
            return
        g = gens[k]
        for b in cands:
            f2, known2 = f[:], known[:]
            f2[g] = b
            known2.append(g)
            if _propagate(A, B, f2, known2, [g]):
                search(k + 1, f2, known2)

    search(0, f0, known0)
    out.sort()
    return out


def surjective_homs(A: FiniteAlgebra, B: FiniteAlgebra, cap: int = DEFAULT_ELEMENT_CAP):
    return [h for h in homomorphisms(A, B, cap) if len(set(h)) == B.n]


def automorphisms(B: FiniteAlgebra, cap: int = DEFAULT_ELEMENT_CAP):
    return surjective_homs(B, B, cap)


def is_homomorphism(A: FiniteAlgebra, B: FiniteAlgebra, h) -> bool:
    if h[A.bottom] != B.bottom or h[A.top] != B.top:
        return False
    for x in range(A.n):
        if h[A.neg[x]] != B.neg[h[x]] or h[A.star[x]] != B.star[h[x]]:
            return False
        for y in range(A.n):
            if h[A.meet_table[x][y]] != B.meet_table[h[x]][h[y]]:
                return False
            if h[A.join_table[x][y]] != B.join_table[h[x]][h[y]]:
                return False
    return True


# ---------------------------------------------------------------------------
# HS membership and weak projectivity


def si_membership_oracle(d1: SiDescriptor, d2: SiDescriptor, max_atoms: int = 3) -> bool:
    """Whether ``B(d1)`` is a quotient of a subalgebra of ``B(d2)``, by search."""
    from .congruence import congruence_lattice, quotient

    if d2.i > max_atoms:
        raise CapExceeded(f"oracle limited to at most {max_atoms} atoms")
    target = build_si(d1)
    host = build_si(d2)
    for S in all_subuniverses(host):
        if bin(S).count("1") < target.n:
            continue
        sub, _ = subalgebra_on(host, S)
        for c in congruence_lattice(sub):
            if len(c) == target.n and is_isomorphic(quotient(sub, c), target):
                return True
    return False


def is_weakly_projective(L: FiniteAlgebra) -> bool:
    """Fixed-point-freeness test for finite members of BPK0.

    The trivial algebra is treated as not weakly projective.
    """
    from .terms import in_bpk0

    if not in_bpk0(L):
        raise DomainError("is_weakly_projective requires an algebra in BPK0")
    if L.n == 1:
        return False
    return not fixed_points(L)


def has_two_factor(L: FiniteAlgebra) -> bool:
    """Whether some simple direct factor of ``L`` (in BPK0) is the 2-chain."""
    from .algebra import decompose_into_simples

    two = build_si(1, 0)
    return any(is_isomorphic(F, two) for F in decompose_into_simples(L))


# ---------------------------------------------------------------------------
# random algebras


def random_dual_space(rng: random.Random, points: int):
    """A random poset with an order-reversing involution, or None on a bad draw."""
    from .duality import DualSpace

    pts = list(range(points))
    rng.shuffle(pts)
    rank = {p: r for r, p in enumerate(pts)}
    phi = list(range(points))
    free = pts[:]
    rng.shuffle(free)
    while len(free) >= 2 and rng.random() < 0.7:
        a, b = free.pop(), free.pop()
        phi[a], phi[b] = b, a
    covers = [
        (p, q)
        for p in range(points)
        for q in range(points)
        if rank[p] < rank[q] and rng.random() < 0.4
    ]
    covers += [(phi[q], phi[p]) for p, q in covers]
    down = order_closure(points, covers)
    for p in range(points):
        for q in range(p + 1, points):
            if down[p] >> q & 1 and down[q] >> p & 1:
                return None
    try:
        return DualSpace(down, phi)
    except InvalidSpace:
        return None


def random_pm_algebra(rng: random.Random, max_size: int = 8) -> FiniteAlgebra:
    """Up-set algebra of a random De Morgan poset, randomly relabelled."""
    from .duality import upset_algebra, upsets

    while True:
        X = random_dual_space(rng, rng.randint(1, 4))
        if X is None:
            continue
        try:
            upsets(X, cap=max_size)
        except CapExceeded:
            continue
        L = upset_algebra(X)
        perm = list(range(L.n))
        rng.shuffle(perm)
        return L.relabel(perm)
