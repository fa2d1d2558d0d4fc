"""Terms over {0, 1, ∧, ∨, ', *}, an identity DSL, and equational variety tests.

Grammar of the DSL (postfix binds tightest, then ``&``, ``|``, ``->``)::

    identity := expr [("~" | "<=") expr]
    expr     := disj ["->" expr]
    disj     := conj ("|" conj)*
    conj     := post ("&" post)*
    post     := atom ("'" | "*")*
    atom     := var | "0" | "1" | "(" expr ")" | MACRO "(" expr ("," expr)* ")"

Variables match ``[a-z][a-z0-9]*``. Macros: ``C(t)``, ``T(t)``, ``G(s,t)``
(gamma), ``F(t)``, ``P(t)`` (the ``+`` operation) and ``B{n}(t1,...,tn)`` or
``Bn(...)`` (beta). ``s <= t`` is stored as ``s & t ~ s``.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass, field
from typing import Mapping, Union

import numpy as np

from .algebra import FiniteAlgebra
from .errors import CapExceeded, DomainError, TermSyntaxError

DEFAULT_EVAL_CAP = int(os.environ.get("PMALG_CAP_EVALS", str(10**7)))
_CHUNK = 1 << 18


# ---------------------------------------------------------------------------
# AST


class Term:
    __slots__ = ()

    def __and__(self, other: "Term") -> "Term":
        return Meet(self, other)

    def __or__(self, other: "Term") -> "Term":
        return Join(self, other)

    @property
    def n(self) -> "Term":
        """De Morgan negation ``t'``."""
        return Neg(self)

    @property
    def s(self) -> "Term":
        """Pseudocomplement ``t*``."""
        return Star(self)

    def variables(self) -> frozenset[str]:
        out: set[str] = set()
        stack = [self]
        while stack:
            t = stack.pop()
            if isinstance(t, Var):
                out.add(t.name)
            elif isinstance(t, (Meet, Join)):
                stack.extend((t.left, t.right))
            elif isinstance(t, (Neg, Star)):
                stack.append(t.arg)
        return frozenset(out)


@dataclass(frozen=True, eq=True)
class Var(Term):
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True, eq=True)
class Zero(Term):
    def __str__(self) -> str:
        return "0"


@dataclass(frozen=True, eq=True)
class One(Term):
    def __str__(self) -> str:
        return "1"


@dataclass(frozen=True, eq=True)
class Meet(Term):
    left: Term
    right: Term

    def __str__(self) -> str:
        return f"{_wrap(self.left, 2)} & {_wrap(self.right, 3)}"


@dataclass(frozen=True, eq=True)
class Join(Term):
    left: Term
    right: Term

    def __str__(self) -> str:
        return f"{_wrap(self.left, 1)} | {_wrap(self.right, 2)}"


@dataclass(frozen=True, eq=True)
class Neg(Term):
    arg: Term

    def __str__(self) -> str:
        return f"{_wrap(self.arg, 3)}'"


@dataclass(frozen=True, eq=True)
class Star(Term):
    arg: Term

    def __str__(self) -> str:
        return f"{_wrap(self.arg, 3)}*"


def _prec(t: Term) -> int:
    if isinstance(t, Join):
        return 1
    if isinstance(t, Meet):
        return 2
    return 3


def _wrap(t: Term, level: int) -> str:
    return f"({t})" if _prec(t) < level else str(t)


@dataclass(frozen=True)
class Identity:
    lhs: Term
    rhs: Term
    text: str = field(default="", compare=False)

    def variables(self) -> frozenset[str]:
        return self.lhs.variables() | self.rhs.variables()

    def __str__(self) -> str:
        return self.text or f"{self.lhs} ~ {self.rhs}"


def leq(s: Term, t: Term, text: str = "") -> Identity:
    """Encode ``s <= t`` as ``s ∧ t ≈ s``."""
    return Identity(Meet(s, t), s, text or f"{s} <= {t}")


def eq(s: Term, t: Term, text: str = "") -> Identity:
    return Identity(s, t, text or f"{s} ~ {t}")


# ---------------------------------------------------------------------------
# named terms

x, y, z = Var("x"), Var("y"), Var("z")


def C(t: Term = x) -> Term:
    m = Meet(t, Neg(t))
    return Join(m, Star(m))


def T(t: Term = x) -> Term:
    c = C(t)
    return Meet(c, Neg(c))


def gamma(s: Term = x, t: Term = y) -> Term:
    return Join(Star(T(s)), C(t))


def F(t: Term = x) -> Term:
    return Meet(Star(T(t)), Star(Star(t)))


def plus_op(t: Term = x) -> Term:
    return Neg(Star(Neg(t)))


def heyting_imp(a: Term = x, b: Term = y) -> Term:
    """``(a* ∨ b**)** ∧ [(a ∨ a*)+ ∨ a* ∨ b ∨ b*]``."""
    first = Star(Star(Join(Star(a), Star(Star(b)))))
    second = Join(Join(Join(plus_op(Join(a, Star(a))), Star(a)), b), Star(b))
    return Meet(first, second)


def discriminator_t(a: Term = x, b: Term = y, c: Term = z) -> Term:
    e = F(Meet(heyting_imp(a, b), heyting_imp(b, a)))
    return Join(Meet(e, c), Meet(Star(e), a))


def beta(n: int, args: list[Term] | None = None) -> Term:
    """``(x0 ∧ … ∧ x_{n-1})* ∨ ⋁_i (x0 ∧ … ∧ x_i* ∧ … ∧ x_{n-1})*``."""
    if n < 1:
        raise DomainError("beta needs n >= 1")
    xs = args if args is not None else [Var(f"x{i}") for i in range(n)]
    if len(xs) != n:
        raise DomainError(f"beta({n}) needs {n} arguments")

    def conj(items):
        out = items[0]
        for t in items[1:]:
            out = Meet(out, t)
        return out

    result = Star(conj(xs))
    for i in range(n):
        result = Join(result, Star(conj(xs[:i] + [Star(xs[i])] + xs[i + 1 :])))
    return result


_BUILTINS = {
    "C": C,
    "T": T,
    "gamma": gamma,
    "F": F,
    "plus_op": plus_op,
    "heyting_imp": heyting_imp,
    "discriminator_t": discriminator_t,
}


def builtin(name: str, *params) -> Term:
    """Look up a named term; ``builtin("beta", n)`` takes the arity."""
    if name == "beta":
        if len(params) != 1:
            raise DomainError("beta takes exactly one parameter n")
        return beta(int(params[0]))
    if name not in _BUILTINS:
        raise DomainError(f"unknown builtin term {name!r}")
    return _BUILTINS[name](*params)


# identities of the equational bases (all relative to pm-algebras)
KLEENE = leq(Meet(x, Neg(x)), Join(y, Neg(y)), "x & x' <= y | y'")
PK0_ID = leq(Neg(C(x)), C(x), "C(x)' <= C(x)")
PK1_ID = leq(Meet(C(x), Neg(C(x))), C(y), "C(x) & C(x)' <= C(y)")
BPK_C_FORM = leq(Star(x), Join(C(y), Star(T(x))), "x* <= C(y) | T(x)*")
BPK_ID = eq(Meet(Star(x), gamma(x, y)), Star(x), "x* & G(x,y) ~ x*")
BPK1_ID = eq(gamma(x, y), gamma(y, x), "G(x,y) ~ G(y,x)")
BPK0_ID = eq(Meet(C(x), Neg(C(x))), Neg(C(x)), "C(x) & C(x)' ~ C(x)'")


def beta_identity(n: int) -> Identity:
    return eq(beta(n), One(), f"B{n}(x0..x{n - 1}) ~ 1")


def bpk0_join_identity(n: int) -> Identity:
    """Second identity for ``BPK0 ∨ V(B(n,3))``."""
    return leq(Neg(C(y)), Join(C(y), beta(n)), f"C(y)' <= C(y) | B{n}")


def bpk1_join_identity(n: int) -> Identity:
    """Second identity for ``BPK1 ∨ V(B(n,3))``."""
    return leq(Meet(C(y), Neg(C(y))), Join(C(z), beta(n)), f"C(y) & C(y)' <= C(z) | B{n}")


# ---------------------------------------------------------------------------
# parser

_TOKEN = re.compile(
    r"\s*(?:(?P<var>[a-z][a-z0-9]*)|(?P<beta>B\{\d+\}|B\d+)|(?P<macro>[A-Z])"
    r"|(?P<op><=|->|[01&|'*(),~≈≤∧∨′]))"
)
_ALIASES = {"≈": "~", "≤": "<=", "∧": "&", "∨": "|", "′": "'"}


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    out = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            offset = len(text[:pos].encode()) + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise TermSyntaxError(f"unexpected character {text[pos:].lstrip()[:1]!r}", offset)
        kind = m.lastgroup
        val = m.group(kind)
        start = len(text[: m.start(kind)].encode())
        if kind == "op":
            val = _ALIASES.get(val, val)
        out.append((kind, val, start))
        pos = m.end()
    out.append(("end", "", len(text.encode())))
    return out


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self) -> tuple[str, str, int]:
        return self.toks[self.i]

    def take(self, val: str | None = None) -> tuple[str, str, int]:
        tok = self.toks[self.i]
        if val is not None and tok[1] != val:
            found = tok[1] or "end of input"
            raise TermSyntaxError(f"expected {val!r}, found {found!r}", tok[2])
        self.i += 1
        return tok

    def expr(self) -> Term:
        left = self.disj()
        if self.peek()[1] == "->":
            self.take()
            return heyting_imp(left, self.expr())
        return left

    def disj(self) -> Term:
        t = self.conj()
        while self.peek()[1] == "|":
            self.take()
            t = Join(t, self.conj())
        return t

    def conj(self) -> Term:
        t = self.post()
        while self.peek()[1] == "&":
            self.take()
            t = Meet(t, self.post())
        return t

    def post(self) -> Term:
        t = self.atom()
        while self.peek()[1] in ("'", "*"):
            t = Neg(t) if self.take()[1] == "'" else Star(t)
        return t

    def args(self) -> list[Term]:
        self.take("(")
        out = [self.expr()]
        while self.peek()[1] == ",":
            self.take()
            out.append(self.expr())
        self.take(")")
        return out

    def atom(self) -> Term:
        kind, val, off = self.peek()
        if kind == "var":
            self.take()
            return Var(val)
        if val == "0":
            self.take()
            return Zero()
        if val == "1":
            self.take()
            return One()
        if val == "(":
            self.take()
            t = self.expr()
            self.take(")")
            return t
        if kind == "beta":
            self.take()
            n = int(val.strip("B{}"))
            a = self.args()
            if n < 1 or len(a) != n:
                raise TermSyntaxError(f"B{n} expects {n} arguments, got {len(a)}", off)
            return beta(n, a)
        if kind == "macro":
            self.take()
            arity = {"C": 1, "T": 1, "F": 1, "P": 1, "G": 2}
            if val not in arity:
                raise TermSyntaxError(f"unknown macro {val!r}", off)
            a = self.args()
            if len(a) != arity[val]:
                raise TermSyntaxError(f"{val} expects {arity[val]} argument(s)", off)
            return {"C": C, "T": T, "F": F, "P": plus_op, "G": gamma}[val](*a)
        found = val or "end of input"
        raise TermSyntaxError(f"unexpected {found!r}", off)


def parse(text: str) -> Union[Term, Identity]:
    """Parse a term, or an identity when ``~`` or ``<=`` is present."""
    p = _Parser(text)
    lhs = p.expr()
    kind, val, off = p.peek()
    if val in ("~", "<="):
        p.take()
        rhs = p.expr()
        end = p.peek()
        if end[0] != "end":
            raise TermSyntaxError(f"unexpected {end[1]!r}", end[2])
        text = text.strip()
        return eq(lhs, rhs, text) if val == "~" else leq(lhs, rhs, text)
    if kind != "end":
        raise TermSyntaxError(f"unexpected {val!r}", off)
    return lhs


def parse_identity(text: str) -> Identity:
    r = parse(text)
    if not isinstance(r, Identity):
        raise TermSyntaxError("expected an identity ('~' or '<=')", len(text.encode()))
    return r


# ---------------------------------------------------------------------------
# evaluation


def evaluate(L: FiniteAlgebra, term: Term, assignment: Mapping[str, int]) -> int:
    """Value of ``term`` in ``L`` under ``assignment`` (variable -> element)."""
    cache: dict[int, int] = {}

    def ev(t: Term) -> int:
        key = id(t)
        if key in cache:
            return cache[key]
        if isinstance(t, Var):
            if t.name not in assignment:
                raise DomainError(f"unbound variable {t.name!r}")
            r = assignment[t.name]
        elif isinstance(t, Zero):
            r = L.bottom
        elif isinstance(t, One):
            r = L.top
        elif isinstance(t, Meet):
            r = L.meet_table[ev(t.left)][ev(t.right)]
        elif isinstance(t, Join):
            r = L.join_table[ev(t.left)][ev(t.right)]
        elif isinstance(t, Neg):
            r = L.neg[ev(t.arg)]
        elif isinstance(t, Star):
            r = L.star[ev(t.arg)]
        else:
            raise TypeError(f"not a term: {t!r}")
        cache[key] = r
        return r

    return ev(term)


def _eval_vector(L: FiniteAlgebra, term: Term, env: Mapping[str, np.ndarray], size: int):
    M, J, N, S = L.tables
    cache: dict[int, np.ndarray] = {}

    def ev(t: Term) -> np.ndarray:
        key = id(t)
        if key in cache:
            return cache[key]
        if isinstance(t, Var):
            if t.name not in env:
                raise DomainError(f"unbound variable {t.name!r}")
            r = env[t.name]
        elif isinstance(t, Zero):
            r = np.full(size, L.bottom, dtype=np.int32)
        elif isinstance(t, One):
            r = np.full(size, L.top, dtype=np.int32)
        elif isinstance(t, Meet):
            r = M[ev(t.left), ev(t.right)]
        elif isinstance(t, Join):
            r = J[ev(t.left), ev(t.right)]
        elif isinstance(t, Neg):
            r = N[ev(t.arg)]
        elif isinstance(t, Star):
            r = S[ev(t.arg)]
        else:
            raise TypeError(f"not a term: {t!r}")
        cache[key] = r
        return r

    return ev(term)


def evaluate_table(L: FiniteAlgebra, term: Term, variables: list[str]) -> np.ndarray:
    """Values of ``term`` on every assignment, shaped ``(n,) * len(variables)``."""
    k = len(variables)
    size = L.n**k
    idx = np.arange(size, dtype=np.int64)
    env = {}
    for pos, v in enumerate(variables):
        env[v] = ((idx // L.n ** (k - 1 - pos)) % L.n).astype(np.int32)
    out = _eval_vector(L, term, env, size)
    return np.broadcast_to(out, (size,)).reshape((L.n,) * k) if k else np.asarray(out).reshape(())


@dataclass(frozen=True)
class HoldsResult:
    holds: bool
    witness: dict[str, int] | None = None
    lhs_value: int | None = None
    rhs_value: int | None = None

    def __bool__(self) -> bool:
        return self.holds


def holds(L: FiniteAlgebra, identity: Identity, cap: int = DEFAULT_EVAL_CAP) -> HoldsResult:
    """Exhaustively test ``identity`` on ``L``.

    Assignments are scanned in lexicographic order over the sorted variable
    names, so the witness returned on failure is the least one.
    """
    names = sorted(identity.variables())
    k = len(names)
    total = L.n**k
    if total > cap:
        raise CapExceeded(f"{total} assignments exceed evaluation cap {cap}")
    for start in range(0, total, _CHUNK):
        stop = min(total, start + _CHUNK)
        idx = np.arange(start, stop, dtype=np.int64)
        env = {
            v: ((idx // L.n ** (k - 1 - pos)) % L.n).astype(np.int32)
            for pos, v in enumerate(names)
        }
        size = stop - start
        lhs = np.broadcast_to(_eval_vector(L, identity.lhs, env, size), (size,))
        rhs = np.broadcast_to(_eval_vector(L, identity.rhs, env, size), (size,))
        bad = np.nonzero(lhs != rhs)[0]
        if bad.size:
            i = int(bad[0])
            witness = {v: int(env[v][i]) for v in names}
            return HoldsResult(False, witness, int(lhs[i]), int(rhs[i]))
    return HoldsResult(True)


# ---------------------------------------------------------------------------
# varieties


def beta_holds(
    L: FiniteAlgebra, n: int, method: str = "dual", cap: int = DEFAULT_EVAL_CAP, max_n: int = 4
) -> bool:
    """Whether ``beta_n ≈ 1`` holds in ``L``.

    ``method="dual"`` counts maximal points above each point of the dual
    space (at most ``n``); ``"exhaustive"`` evaluates the identity and is
    limited to ``n <= max_n``.
    """
    if n < 1:
        raise DomainError("beta needs n >= 1")
    if method == "dual":
        from .duality import dual_space, max_points_above

        return max_points_above(dual_space(L)) <= n
    if method == "exhaustive":
        if n > max_n:
            raise CapExceeded(f"exhaustive beta check limited to n <= {max_n}")
        return holds(L, beta_identity(n), cap).holds
    raise DomainError(f"unknown method {method!r}")


def in_pk(L: FiniteAlgebra, cap: int = DEFAULT_EVAL_CAP) -> bool:
    return holds(L, KLEENE, cap).holds


def in_bpk(L: FiniteAlgebra, cap: int = DEFAULT_EVAL_CAP) -> bool:
    return in_pk(L, cap) and holds(L, BPK_ID, cap).holds


def in_bpk0(L: FiniteAlgebra, cap: int = DEFAULT_EVAL_CAP) -> bool:
    return in_bpk(L, cap) and holds(L, BPK0_ID, cap).holds


@dataclass
class VarietyMembership:
    pk: bool
    pk0: bool
    pk1: bool
    bpk: bool
    bpk0: bool
    bpk1: bool
    beta: dict[int, bool] = field(default_factory=dict)
    generated: dict[tuple[int, int], bool] = field(default_factory=dict)
    bpk0_join: dict[int, bool] = field(default_factory=dict)
    bpk1_join: dict[int, bool] = field(default_factory=dict)

    def rows(self) -> list[tuple[str, bool]]:
        out = [
            ("PK", self.pk),
            ("PK0", self.pk0),
            ("PK1", self.pk1),
            ("BPK", self.bpk),
            ("BPK1", self.bpk1),
            ("BPK0", self.bpk0),
        ]
        out += [(f"beta{n}", v) for n, v in sorted(self.beta.items())]
        out += [(f"V(B({n},{m}))", v) for (n, m), v in sorted(self.generated.items())]
        out += [(f"BPK0 v V(B({n},3))", v) for n, v in sorted(self.bpk0_join.items())]
        out += [(f"BPK1 v V(B({n},3))", v) for n, v in sorted(self.bpk1_join.items())]
        return out


def variety_membership(
    L: FiniteAlgebra,
    ns: tuple[int, ...] = (1, 2, 3),
    cap: int = DEFAULT_EVAL_CAP,
    beta_method: str = "dual",
) -> VarietyMembership:
    """Membership in PK and its named subvarieties by their equational bases.

    For each ``n`` in ``ns`` the record also covers ``V(B(n,m))`` for
    ``m = 1, 2, 3`` and the joins ``BPK0 ∨ V(B(n,3))``, ``BPK1 ∨ V(B(n,3))``.
    """

    def h(identity: Identity) -> bool:
        return holds(L, identity, cap).holds

    pk = h(KLEENE)
    bpk_id = h(BPK_ID)
    bpk0_id = h(BPK0_ID)
    bpk1_id = h(BPK1_ID)
    rec = VarietyMembership(
        pk=pk,
        pk0=pk and h(PK0_ID),
        pk1=pk and h(PK1_ID),
        bpk=pk and bpk_id,
        bpk0=pk and bpk_id and bpk0_id,
        bpk1=pk and bpk1_id,
    )
    for n in ns:
        b = beta_holds(L, n, beta_method, cap)
        rec.beta[n] = b
        rec.generated[(n, 1)] = rec.bpk0 and b
        rec.generated[(n, 2)] = rec.bpk1 and b
        rec.generated[(n, 3)] = rec.bpk and b
        rec.bpk0_join[n] = rec.bpk and h(bpk0_join_identity(n))
        rec.bpk1_join[n] = rec.bpk and h(bpk1_join_identity(n))
    return rec


def discriminator_witness(L: FiniteAlgebra) -> tuple[int, int, int] | None:
    """Least triple where ``t`` is not the discriminator, or None."""
    vals = evaluate_table(L, discriminator_t(x, y, z), ["x", "y", "z"])
    a, b, c = np.meshgrid(np.arange(L.n), np.arange(L.n), np.arange(L.n), indexing="ij")
    expected = np.where(a == b, c, a)
    bad = np.argwhere(vals != expected)
    return tuple(int(v) for v in bad[0]) if bad.size else None


def discriminator_check(L: FiniteAlgebra) -> bool:
    """Whether ``t(a,b,c)`` is ``c`` when ``a = b`` and ``a`` otherwise.

    Requires ``L`` simple and in BPK0.
    """
    from .congruence import is_simple

    if not (is_simple(L) and in_bpk0(L)):
        raise DomainError("discriminator_check requires a simple algebra in BPK0")
    return discriminator_witness(L) is None
