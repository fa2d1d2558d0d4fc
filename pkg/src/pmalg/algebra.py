"""Finite bounded lattices and pseudocomplemented De Morgan (pm) algebras.

Elements are the integers ``0..n-1``. A lattice is stored through the
down-set of every element as an integer bitmask (bit ``y`` of ``down[x]`` is
set iff ``y <= x``); meet and join tables are derived once at construction.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from .errors import (
    CapExceeded,
    DomainError,
    InvalidAlgebra,
    NotALattice,
    NotPseudocomplemented,
    StructureError,
)

DEFAULT_ELEMENT_CAP = int(os.environ.get("PMALG_CAP_ELEMENTS", "4096"))


def bits(mask: int) -> Iterator[int]:
    """Yield the indices of the set bits of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(items: Iterable[int]) -> int:
    m = 0
    for i in items:
        m |= 1 << i
    return m


class Lattice:
    """A finite bounded lattice.

    ``down[x]`` is the bitmask of all ``y <= x``. The masks must describe a
    partial order; :func:`validate` is the checked entry point for untrusted
    data. Raises :class:`NotALattice` if some pair lacks a meet or join.
    """

    def __init__(self, down: Sequence[int], names: Sequence[str] | None = None):
        down = tuple(int(m) for m in down)
        n = len(down)
        if n == 0:
            raise NotALattice("empty order")
        up = [0] * n
        for y in range(n):
            for x in bits(down[y]):
                up[x] |= 1 << y
        self.n = n
        self.down = down
        self.up = tuple(up)
        self.names = tuple(names) if names is not None else tuple(str(i) for i in range(n))
        if len(self.names) != n:
            raise StructureError("names has wrong length")

        full = (1 << n) - 1
        bottoms = [x for x in range(n) if self.up[x] == full]
        tops = [x for x in range(n) if down[x] == full]
        if not bottoms or not tops:
            raise NotALattice("order has no bottom or no top")
        self.bottom = bottoms[0]
        self.top = tops[0]

        by_down = {m: x for x, m in enumerate(down)}
        by_up = {m: x for x, m in enumerate(self.up)}
        meet = [[0] * n for _ in range(n)]
        join = [[0] * n for _ in range(n)]
        for a in range(n):
            for b in range(a, n):
                m = by_down.get(down[a] & down[b])
                j = by_up.get(self.up[a] & self.up[b])
                if m is None:
                    raise NotALattice(f"no meet for ({a}, {b})")
                if j is None:
                    raise NotALattice(f"no join for ({a}, {b})")
                meet[a][b] = meet[b][a] = m
                join[a][b] = join[b][a] = j
        self.meet_table = tuple(tuple(r) for r in meet)
        self.join_table = tuple(tuple(r) for r in join)
        self._by_down = by_down

    # construction helpers -------------------------------------------------

    @classmethod
    def from_leq(cls, leq: Sequence[Sequence[bool]], names=None):
        n = len(leq)
        down = [mask_of(x for x in range(n) if leq[x][y]) for y in range(n)]
        return cls(down, names)

    @classmethod
    def from_covers(cls, n: int, covers: Iterable[tuple[int, int]], names=None):
        return cls(order_closure(n, covers), names)

    # queries ----------------------------------------------------------------

    def leq(self, a: int, b: int) -> bool:
        return bool(self.down[b] >> a & 1)

    def meet(self, a: int, b: int) -> int:
        return self.meet_table[a][b]

    def join(self, a: int, b: int) -> int:
        return self.join_table[a][b]

    def meet_all(self, items: Iterable[int]) -> int:
        r = self.top
        for x in items:
            r = self.meet_table[r][x]
        return r

    def join_all(self, items: Iterable[int]) -> int:
        r = self.bottom
        for x in items:
            r = self.join_table[r][x]
        return r

    def element_of_down(self, mask: int) -> int | None:
        """The element whose down-set is exactly ``mask``, if any."""
        return self._by_down.get(mask)

    def covers(self) -> list[tuple[int, int]]:
        """Hasse diagram edges ``(lower, upper)`` sorted lexicographically."""
        out = []
        for y in range(self.n):
            strict = self.down[y] & ~(1 << y)
            for x in bits(strict):
                between = strict & self.up[x] & ~(1 << x)
                if not between:
                    out.append((x, y))
        out.sort()
        return out

    def join_irreducibles(self) -> list[int]:
        """Non-bottom elements with exactly one lower cover."""
        out = []
        for x in range(self.n):
            if x == self.bottom:
                continue
            strict = self.down[x] & ~(1 << x)
            if self.join_all(bits(strict)) != x:
                out.append(x)
        return out

    def height(self, x: int) -> int:
        """Length of the longest chain from bottom to ``x``."""
        return self._heights[x]

    @cached_property
    def _heights(self) -> tuple[int, ...]:
        h = [0] * self.n
        for x in sorted(range(self.n), key=lambda e: bin(self.down[e]).count("1")):
            strict = self.down[x] & ~(1 << x)
            h[x] = max((h[y] + 1 for y in bits(strict)), default=0)
        return tuple(h)

    @cached_property
    def leq_matrix(self) -> np.ndarray:
        m = np.zeros((self.n, self.n), dtype=bool)
        for y in range(self.n):
            for x in bits(self.down[y]):
                m[x, y] = True
        return m

    def __len__(self) -> int:
        return self.n

    def __repr__(self) -> str:
        return f"{type(self).__name__}(n={self.n})"


class FiniteAlgebra(Lattice):
    """A finite pm-algebra: bounded distributive lattice with ``neg`` and ``star``.

    ``star`` is completed by :func:`compute_star` when omitted. Instances are
    immutable; equality compares order and operation tables index by index.
    """

    def __init__(
        self,
        down: Sequence[int],
        neg: Sequence[int],
        star: Sequence[int] | None = None,
        names: Sequence[str] | None = None,
    ):
        super().__init__(down, names)
        if len(neg) != self.n:
            raise StructureError("neg has wrong length")
        self.neg = tuple(int(x) for x in neg)
        self.star = tuple(int(x) for x in star) if star is not None else compute_star(self)
        if len(self.star) != self.n:
            raise StructureError("star has wrong length")

    @cached_property
    def tables(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """numpy copies of (meet, join, neg, star) for vectorised evaluation."""
        dt = np.int32
        return (
            np.array(self.meet_table, dtype=dt),
            np.array(self.join_table, dtype=dt),
            np.array(self.neg, dtype=dt),
            np.array(self.star, dtype=dt),
        )

    def _key(self):
        return (self.down, self.neg, self.star)

    def __eq__(self, other) -> bool:
        return isinstance(other, FiniteAlgebra) and self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    def relabel(self, perm: Sequence[int]) -> "FiniteAlgebra":
        """Copy in which old element ``x`` gets the new index ``perm[x]``."""
        n = self.n
        inv = [0] * n
        for old, new in enumerate(perm):
            inv[new] = old
        down = [mask_of(perm[y] for y in bits(self.down[inv[x]])) for x in range(n)]
        neg = [perm[self.neg[inv[x]]] for x in range(n)]
        star = [perm[self.star[inv[x]]] for x in range(n)]
        names = [self.names[inv[x]] for x in range(n)]
        return FiniteAlgebra(down, neg, star, names)


# ---------------------------------------------------------------------------
# order helpers


def order_closure(n: int, covers: Iterable[tuple[int, int]]) -> list[int]:
    """Reflexive-transitive closure of ``covers`` as down-set bitmasks."""
    down = [1 << x for x in range(n)]
    for lo, hi in covers:
        down[hi] |= 1 << lo
    for k in range(n):
        dk = down[k]
        bit = 1 << k
        for i in range(n):
            if down[i] & bit:
                down[i] |= dk
    return down


# ---------------------------------------------------------------------------
# basic operations


def meet(L: Lattice, a: int, b: int) -> int:
    return L.meet_table[a][b]


def join(L: Lattice, a: int, b: int) -> int:
    return L.join_table[a][b]


def compute_star(L: Lattice) -> tuple[int, ...]:
    """Pseudocomplement of every element: ``a* = max{b : a ∧ b = 0}``.

    The annihilator of ``a`` is always a down-set; it has a maximum iff it is
    the principal down-set of some element.
    """
    out = []
    for a in range(L.n):
        row = L.meet_table[a]
        ann = mask_of(x for x in range(L.n) if row[x] == L.bottom)
        s = L.element_of_down(ann)
        if s is None:
            raise NotPseudocomplemented(f"element {a} has no largest annihilator")
        out.append(s)
    return tuple(out)


def kleene_witness(L: FiniteAlgebra) -> tuple[int, int] | None:
    """Least pair ``(a, b)`` with ``a ∧ a' ≰ b ∨ b'``, or None."""
    lows = [L.meet_table[x][L.neg[x]] for x in range(L.n)]
    highs = [L.join_table[x][L.neg[x]] for x in range(L.n)]
    for a in range(L.n):
        for b in range(L.n):
            if not L.leq(lows[a], highs[b]):
                return (a, b)
    return None


def is_kleene(L: FiniteAlgebra) -> bool:
    return kleene_witness(L) is None


def dense_elements(L: FiniteAlgebra) -> frozenset[int]:
    return frozenset(x for x in range(L.n) if L.star[x] == L.bottom)


def least_dense(L: FiniteAlgebra) -> int | None:
    dense = mask_of(dense_elements(L))
    for x in bits(dense):
        if dense & ~L.up[x] == 0:
            return x
    return None


def fixed_points(L: FiniteAlgebra) -> frozenset[int]:
    return frozenset(x for x in range(L.n) if L.neg[x] == x)


def is_trivial(L: Lattice) -> bool:
    return L.n == 1


# ---------------------------------------------------------------------------
# products and decomposition


def direct_product(*factors: FiniteAlgebra) -> FiniteAlgebra:
    """Componentwise product; element tuples are numbered in mixed radix,
    first factor most significant."""
    if not factors:
        raise DomainError("direct_product needs at least one factor")
    result = factors[0]
    for other in factors[1:]:
        result = _product2(result, other)
    return result


def _product2(A: FiniteAlgebra, B: FiniteAlgebra) -> FiniteAlgebra:
    nb = B.n
    idx = lambda a, b: a * nb + b  # noqa: E731
    down, neg, star, names = [], [], [], []
    for a in range(A.n):
        for b in range(B.n):
            down.append(mask_of(idx(x, y) for x in bits(A.down[a]) for y in bits(B.down[b])))
            neg.append(idx(A.neg[a], B.neg[b]))
            star.append(idx(A.star[a], B.star[b]))
            names.append(f"({A.names[a]},{B.names[b]})")
    return FiniteAlgebra(down, neg, star, names)


def decompose_into_simples(L: FiniteAlgebra) -> list[FiniteAlgebra]:
    """Split an algebra of BPK0 into simple direct factors.

    Direct factors correspond to the phi-components of the dual space; in a
    discriminator variety directly indecomposable finite members are simple.
    """
    from .duality import dual_space, phi_components, upset_algebra
    from .terms import in_bpk0

    if not in_bpk0(L):
        raise DomainError("decompose_into_simples requires an algebra in BPK0")
    X = dual_space(L)
    return [upset_algebra(X.restrict(comp)) for comp in phi_components(X)]


# ---------------------------------------------------------------------------
# isomorphism


def _profile(L: FiniteAlgebra, x: int, jmask: int) -> tuple:
    return (
        bin(L.down[x]).count("1"),
        bin(L.up[x]).count("1"),
        bin(L.down[x] & jmask).count("1"),
        bin(L.up[x] & jmask).count("1"),
        L.neg[x] == x,
        L.star[x] == L.bottom,
        bin(L.down[L.neg[x]]).count("1"),
    )


def _invariants(L: FiniteAlgebra) -> tuple:
    jmask = mask_of(L.join_irreducibles())
    return (
        L.n,
        len(fixed_points(L)),
        len(dense_elements(L)),
        sorted(_profile(L, x, jmask) for x in range(L.n)),
    )


def find_isomorphism(
    L1: FiniteAlgebra, L2: FiniteAlgebra, cap: int = DEFAULT_ELEMENT_CAP
) -> tuple[int, ...] | None:
    """An isomorphism ``L1 -> L2`` as an image tuple, or None.

    Backtracks over bijections between the join-irreducibles (which determine
    a lattice isomorphism of finite distributive lattices), then checks ``'``
    and ``*`` on the extension.
    """
    if max(L1.n, L2.n) > cap:
        raise CapExceeded(f"isomorphism test above element cap {cap}")
    if L1.n != L2.n:
        return None
    if _invariants(L1) != _invariants(L2):
        return None
    J1, J2 = L1.join_irreducibles(), L2.join_irreducibles()
    jm1, jm2 = mask_of(J1), mask_of(J2)
    J1.sort(key=lambda j: bin(L1.down[j]).count("1"))
    prof2: dict[tuple, list[int]] = {}
    for j in J2:
        prof2.setdefault(_profile(L2, j, jm2), []).append(j)
    cands = [prof2.get(_profile(L1, j, jm1), []) for j in J1]

    g: dict[int, int] = {}
    used: set[int] = set()

    def extend() -> tuple[int, ...] | None:
        f = []
        for x in range(L1.n):
            f.append(L2.join_all(g[j] for j in bits(L1.down[x] & jm1)))
        if len(set(f)) != L1.n:
            return None
        for x in range(L1.n):
            if f[L1.neg[x]] != L2.neg[f[x]] or f[L1.star[x]] != L2.star[f[x]]:
                return None
        return tuple(f)

    def search(i: int) -> tuple[int, ...] | None:
        if i == len(J1):
            return extend()
        j1 = J1[i]
        for j2 in cands[i]:
            if j2 in used:
                continue
            ok = True
            for k1, k2 in g.items():
                if L1.leq(k1, j1) != L2.leq(k2, j2) or L1.leq(j1, k1) != L2.leq(j2, k2):
                    ok = False
                    break
            if not ok:
                continue
            g[j1] = j2
            used.add(j2)
            found = search(i + 1)
            if found is not None:
                return found
            del g[j1]
            used.discard(j2)
        return None

    return search(0)


def is_isomorphic(L1: FiniteAlgebra, L2: FiniteAlgebra, cap: int = DEFAULT_ELEMENT_CAP) -> bool:
    return find_isomorphism(L1, L2, cap) is not None


# ---------------------------------------------------------------------------
# raw data and validation


@dataclass(frozen=True)
class ValidationReport:
    passed: bool
    violations: tuple[tuple[str, tuple[int, ...]], ...] = ()

    def __bool__(self) -> bool:
        return self.passed


def _int_list(raw: Mapping, key: str, n: int, required: bool) -> list[int] | None:
    if key not in raw or raw[key] is None:
        if required:
            raise StructureError(f"missing field '{key}'")
        return None
    vals = raw[key]
    if not isinstance(vals, (list, tuple)) or len(vals) != n:
        raise StructureError(f"'{key}' must be a list of length {n}")
    for v in vals:
        if isinstance(v, bool) or not isinstance(v, int) or not 0 <= v < n:
            raise StructureError(f"'{key}' has entry {v!r} outside 0..{n - 1}")
    return list(vals)


def _parse_raw(raw: Mapping, cap: int):
    if not isinstance(raw, Mapping):
        raise StructureError("algebra document must be a mapping")
    n = raw.get("elements")
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise StructureError("'elements' must be a positive integer")
    if n > cap:
        raise CapExceeded(f"{n} elements exceeds element cap {cap}")
    covers = raw.get("covers", [])
    if not isinstance(covers, (list, tuple)):
        raise StructureError("'covers' must be a list of pairs")
    pairs = []
    for c in covers:
        if not isinstance(c, (list, tuple)) or len(c) != 2:
            raise StructureError(f"cover {c!r} is not a pair")
        lo, hi = c
        for v in (lo, hi):
            if isinstance(v, bool) or not isinstance(v, int) or not 0 <= v < n:
                raise StructureError(f"cover {c!r} has index outside 0..{n - 1}")
        pairs.append((lo, hi))
    neg = _int_list(raw, "neg", n, required=True)
    star = _int_list(raw, "star", n, required=False)
    names = raw.get("names")
    if names is not None:
        if not isinstance(names, (list, tuple)) or len(names) != n:
            raise StructureError(f"'names' must be a list of length {n}")
        names = [str(s) for s in names]
    return n, pairs, neg, star, names


def validate(candidate, cap: int = DEFAULT_ELEMENT_CAP) -> ValidationReport:
    """Check every pm-algebra axiom on raw algebra data.

    ``candidate`` is a mapping in the algebra file layout (``elements``,
    ``covers``, ``neg``, optional ``star`` and ``names``) or an existing
    :class:`FiniteAlgebra`. Each violated axiom is reported once with its
    lexicographically least witness. Malformed data raises
    :class:`StructureError` instead.
    """
    if isinstance(candidate, FiniteAlgebra):
        candidate = algebra_to_raw(candidate)
    n, pairs, neg, star, _ = _parse_raw(candidate, cap)
    violations: list[tuple[str, tuple[int, ...]]] = []

    down = order_closure(n, pairs)
    for x in range(n):
        hit = next((y for y in range(x + 1, n) if down[y] >> x & 1 and down[x] >> y & 1), None)
        if hit is not None:
            violations.append(("antisymmetry", (x, hit)))
            break
    if violations:
        return ValidationReport(False, tuple(violations))

    try:
        L = Lattice(down)
    except NotALattice:
        return ValidationReport(False, tuple(_lattice_violations(n, down)))

    M = np.array(L.meet_table)
    J = np.array(L.join_table)
    N = np.array(neg)
    bot, top = L.bottom, L.top

    for x in range(n):
        bad = M[x][J] != J[M[x][:, None], M[x][None, :]]
        if bad.any():
            y, z = map(int, np.argwhere(bad)[0])
            violations.append(("distributivity", (x, y, z)))
            break

    inv = np.nonzero(N[N] != np.arange(n))[0]
    if inv.size:
        violations.append(("involution", (int(inv[0]),)))
    bad = np.argwhere(N[M] != J[N[:, None], N[None, :]])
    if bad.size:
        violations.append(("de morgan", tuple(int(v) for v in bad[0])))
    if neg[bot] != top:
        violations.append(("zero negation", (bot,)))

    leq = L.leq_matrix
    if star is None:
        try:
            star = list(compute_star(L))
        except NotPseudocomplemented:
            for a in range(n):
                ann = mask_of(x for x in range(n) if M[a, x] == bot)
                if L.element_of_down(ann) is None:
                    violations.append(("pseudocomplement exists", (a,)))
                    break
    if star is not None:
        S = np.array(star)
        annihilates = M == bot
        below_star = leq[np.arange(n)[None, :], S[:, None]]
        bad = np.argwhere(annihilates != below_star)
        if bad.size:
            violations.append(("pseudocomplement", tuple(int(v) for v in bad[0])))

    return ValidationReport(not violations, tuple(violations))


def _lattice_violations(n: int, down: list[int]) -> list[tuple[str, tuple[int, ...]]]:
    up = [0] * n
    for y in range(n):
        for x in bits(down[y]):
            up[x] |= 1 << y
    full = (1 << n) - 1
    out = []
    if not any(u == full for u in up) or not any(d == full for d in down):
        out.append(("bounded", ()))
    downs, ups = set(down), set(up)
    for name, masks, pool in (("meet exists", down, downs), ("join exists", up, ups)):
        hit = next(
            ((a, b) for a in range(n) for b in range(a + 1, n) if masks[a] & masks[b] not in pool),
            None,
        )
        if hit is not None:
            out.append((name, hit))
    return out


def algebra_from_raw(raw: Mapping, cap: int = DEFAULT_ELEMENT_CAP) -> FiniteAlgebra:
    """Validate raw data and build the algebra; raises :class:`InvalidAlgebra`."""
    report = validate(raw, cap)
    if not report.passed:
        raise InvalidAlgebra(report)
    n, pairs, neg, star, names = _parse_raw(raw, cap)
    return FiniteAlgebra(order_closure(n, pairs), neg, star, names)


def algebra_to_raw(L: FiniteAlgebra) -> dict:
    return {
        "elements": L.n,
        "covers": [list(c) for c in L.covers()],
        "neg": list(L.neg),
        "star": list(L.star),
        "names": list(L.names),
    }
