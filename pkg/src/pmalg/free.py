"""Direct decomposition of the finitely generated free algebra in BPK0.

``F(n)`` is a product of simple algebras ``B_k`` (``k = 0`` is the 2-chain,
``k = 1`` the 3-chain). The multiplicity of ``B_k`` is the number of
surjections ``F(n) -> B_k`` divided by ``|Aut(B_k)| = k!``; surjections are
counted in closed form and, independently, by enumerating generating tuples.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from math import comb, factorial, perm, prod

from .constructions import boolean_si, closure_mask
from .errors import CapExceeded, CountingError, DomainError

DEFAULT_TUPLE_CAP = int(os.environ.get("PMALG_CAP_TUPLES", str(10**8)))


@lru_cache(maxsize=None)
def g(n: int, k: int) -> int:
    """Surjections from the free Boolean algebra on ``n`` generators onto
    ``B_k``'s Boolean skeleton that send no generator to ``1``.

    Base cases: ``g(0,1) = 1`` and ``g(n,k) = 0`` for ``k > 2^n``.
    """
    if n < 0 or k < 1:
        raise DomainError("g needs n >= 0 and k >= 1")
    if k > 2**n:
        return 0
    if n == 0:
        return 1
    return perm(2**n, k) - sum(comb(n, i) * g(n - i, k) for i in range(1, n + 1))


def f(n: int, k: int, i: int) -> int:
    if not 0 <= i <= n:
        raise DomainError("f needs 0 <= i <= n")
    return comb(n, i) * g(n - i, k)


def sur_count(n: int, k: int) -> int:
    """Number of surjective homomorphisms ``F(n) -> B_k``.

    For ``k = 1`` the count is ``3^n - 2^n``: tuples over the 3-chain with at
    least one coordinate on the middle element.
    """
    if n < 0 or k < 1:
        raise DomainError("sur_count needs n >= 0 and k >= 1")
    if k == 1:
        return 3**n - 2**n
    return sum(2 ** (n - i) * f(n, k, i) for i in range(n + 1))


def m_k(n: int, k: int) -> int:
    """Multiplicity of ``B_k`` in ``F(n)``."""
    if not 0 <= k <= 2**n:
        raise DomainError(f"m_k needs 0 <= k <= 2^n, got k={k}")
    if k == 0:
        return 2**n
    if k == 1:
        return 3**n - 2**n
    q, r = divmod(sur_count(n, k), factorial(k))
    if r:
        raise CountingError(f"{k}! does not divide sur_count({n},{k})")
    return q


def block_size(k: int) -> int:
    """``|B_k|``; ``B_0`` is the 2-chain."""
    return 2 if k == 0 else 2 ** (k + 1) - 1


@dataclass(frozen=True)
class FreeDecomposition:
    n: int
    factors: tuple[tuple[int, int], ...]  # (k, multiplicity) for k = 0..2^n

    def multiplicity(self, k: int) -> int:
        return dict(self.factors).get(k, 0)

    def rows(self) -> list[tuple[int, int, int]]:
        return [(k, block_size(k), mult) for k, mult in self.factors]

    def __str__(self) -> str:
        parts = []
        for k, mult in self.factors:
            if mult == 0:
                continue
            base = {0: "2", 1: "3"}.get(k, f"B{k}")
            parts.append(base if mult == 1 else f"{base}^{mult}")
        return " x ".join(parts)


def free_decomposition(n: int) -> FreeDecomposition:
    if n < 1:
        raise DomainError("free_decomposition needs n >= 1")
    return FreeDecomposition(n, tuple((k, m_k(n, k)) for k in range(2**n + 1)))


def free_size(n: int) -> int:
    return prod(block_size(k) ** mult for k, mult in free_decomposition(n).factors)


# ---------------------------------------------------------------------------
# independent counts


def oracle_sur_count(n: int, k: int, cap: int = DEFAULT_TUPLE_CAP) -> int:
    """Count ``n``-tuples over ``B_k`` that generate ``B_k``.

    Tuples are walked in mixed-radix order; the closure of each prefix is
    computed once and shared by every tuple extending it.
    """
    if n < 0 or k < 1:
        raise DomainError("oracle_sur_count needs n >= 0 and k >= 1")
    B = boolean_si(k)
    if B.n**n > cap:
        raise CapExceeded(f"{B.n}^{n} tuples exceed tuple cap {cap}")
    full = (1 << B.n) - 1
    step: dict[tuple[int, int], int] = {}

    def extend(S: int, x: int) -> int:
        key = (S, x)
        if key not in step:
            step[key] = S if S >> x & 1 else closure_mask(B, S | 1 << x)
        return step[key]

    def count(depth: int, S: int) -> int:
        if depth == n:
            return int(S == full)
        return sum(count(depth + 1, extend(S, x)) for x in range(B.n))

    return count(0, closure_mask(B, 0))


def boolean_oracle_g(n: int, k: int) -> int:
    """``g(n,k)`` by enumerating ``n``-tuples of subsets of a ``k``-set.

    A homomorphism from the free Boolean algebra on ``n`` generators onto the
    Boolean algebra with ``k`` atoms is an ``n x k`` 0/1 matrix whose columns
    are distinct; ``g`` counts those with no all-ones row.
    """
    if k < 1:
        raise DomainError("boolean_oracle_g needs k >= 1")
    full = (1 << k) - 1
    total = 0
    for tup in product(range(full), repeat=n):
        cols = {tuple(row >> c & 1 for row in tup) for c in range(k)}
        total += len(cols) == k
    return total
