"""Exact graded polynomial arithmetic.

Coefficients are ``fractions.Fraction``.  Monomials are exponent tuples.
A ``Polynomial`` is a sparse map monomial -> nonzero coefficient bound to a
``PolyRing``; a ``GradedMatrix`` is a homogeneous degree-0 map between
twisted free modules ``(+)_i R(-a_i)``.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

Exp = Tuple[int, ...]
Terms = Dict[Exp, Fraction]

ORDERS = ("degrevlex", "lex")


class RingMismatch(ValueError):
    pass


class DegreeError(ValueError):
    """An entry violates the homogeneity / twist bookkeeping."""


def degrevlex_key(e: Exp):
    return (sum(e), tuple(-x for x in reversed(e)))


def lex_key(e: Exp):
    return e


def exp_add(a: Exp, b: Exp) -> Exp:
    return tuple(x + y for x, y in zip(a, b))


def exp_sub(a: Exp, b: Exp) -> Exp:
    return tuple(x - y for x, y in zip(a, b))


def exp_divides(a: Exp, b: Exp) -> bool:
    return all(x <= y for x, y in zip(a, b))


def exp_lcm(a: Exp, b: Exp) -> Exp:
    return tuple(max(x, y) for x, y in zip(a, b))


def monomials_of_degree(nvars: int, degree: int) -> List[Exp]:
    """All exponent vectors of the given total degree, lexicographically descending."""
    if degree < 0:
        return []
    if nvars == 0:
        return [()] if degree == 0 else []
    out = []
    for combo in combinations_with_replacement(range(nvars), degree):
        e = [0] * nvars
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    out.sort(reverse=True)
    return out


def terms_mul(a: Terms, b: Terms) -> Terms:
    out: Terms = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            c = out.get(e, 0) + ca * cb
            if c:
                out[e] = c
            else:
                out.pop(e, None)
    return out


def terms_add(a: Terms, b: Terms, scale=1) -> Terms:
    out = dict(a)
    for e, c in b.items():
        v = out.get(e, 0) + scale * c
        if v:
            out[e] = v
        else:
            out.pop(e, None)
    return out


class PolyRing:
    """k[x_1..x_n] or a quotient by a homogeneous ideal, with a monomial order."""

    def __init__(self, variables: Sequence[str], order: str = "degrevlex",
                 quotient: Optional[Iterable] = None):
        variables = tuple(variables)
        if len(set(variables)) != len(variables):
            raise ValueError(f"variable names must be distinct: {variables}")
        if order not in ORDERS:
            raise ValueError(f"unknown monomial order {order!r}")
        self.variables = variables
        self.nvars = len(variables)
        self.order = order
        self.key = degrevlex_key if order == "degrevlex" else lex_key
        self._quotient_gb: Optional[List[Terms]] = None
        self._quotient_leads: List[Exp] = []
        if quotient is not None:
            gens = []
            for g in quotient:
                t = g.terms if isinstance(g, Polynomial) else dict(g)
                if t:
                    gens.append(t)
            if gens:
                from .groebner import ideal_basis
                self._quotient_gb = ideal_basis(gens, self.nvars, self.key)
                self._quotient_leads = [max(g, key=self.key) for g in self._quotient_gb]

    # -- identity -------------------------------------------------------
    def _ident(self):
        gb = None
        if self._quotient_gb is not None:
            gb = tuple(tuple(sorted(g.items())) for g in self._quotient_gb)
        return (self.variables, self.order, gb)

    def __eq__(self, other):
        return isinstance(other, PolyRing) and self._ident() == other._ident()

    def __hash__(self):
        return hash(self._ident())

    def __repr__(self):
        q = f", quotient of {len(self._quotient_gb)} gens" if self._quotient_gb else ""
        return f"PolyRing({', '.join(self.variables)}; {self.order}{q})"

    @property
    def is_quotient(self) -> bool:
        return self._quotient_gb is not None

    @property
    def quotient_basis(self) -> List[Terms]:
        return list(self._quotient_gb or [])

    def ambient(self) -> "PolyRing":
        """The free polynomial ring this ring is a quotient of."""
        if not self.is_quotient:
            return self
        return PolyRing(self.variables, self.order)

    def with_order(self, order: str) -> "PolyRing":
        q = None
        if self._quotient_gb is not None:
            q = [dict(g) for g in self._quotient_gb]
        return PolyRing(self.variables, order, q)

    # -- elements -------------------------------------------------------
    def reduce_terms(self, t: Terms) -> Terms:
        if not self._quotient_gb or not t:
            return t
        from .groebner import reduce_terms
        return reduce_terms(t, self._quotient_gb, self._quotient_leads, self.key)

    def poly(self, terms: Optional[Terms] = None, reduce: bool = True) -> "Polynomial":
        t = {e: Fraction(c) for e, c in (terms or {}).items() if c}
        if reduce:
            t = self.reduce_terms(t)
        return Polynomial(self, t)

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return self.const(1)

    def const(self, c) -> "Polynomial":
        return self.poly({(0,) * self.nvars: Fraction(c)})

    def var(self, i) -> "Polynomial":
        if isinstance(i, str):
            i = self.variables.index(i)
        e = [0] * self.nvars
        e[i] = 1
        return Polynomial(self, self.reduce_terms({tuple(e): Fraction(1)}))

    def gens(self) -> List["Polynomial"]:
        return [self.var(i) for i in range(self.nvars)]

    def monomial(self, e: Exp) -> "Polynomial":
        return self.poly({tuple(e): Fraction(1)})

    def is_standard(self, e: Exp) -> bool:
        return not any(exp_divides(lt, e) for lt in self._quotient_leads)

    def parse(self, src: str) -> "Polynomial":
        from .parser import parse_poly
        return parse_poly(src, self)


def graded_piece_basis(ring: PolyRing, degree: int) -> List[Exp]:
    """k-basis of R_degree: standard monomials, in descending monomial order."""
    if degree < 0:
        return []
    mons = [e for e in monomials_of_degree(ring.nvars, degree) if ring.is_standard(e)]
    mons.sort(key=ring.key, reverse=True)
    return mons


class Polynomial:
    __slots__ = ("ring", "terms")

    def __init__(self, ring: PolyRing, terms: Terms):
        self.ring = ring
        self.terms = terms

    def _check(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.ring is not self.ring and other.ring != self.ring:
                raise RingMismatch(f"{self.ring!r} vs {other.ring!r}")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return Polynomial(self.ring, terms_add(self.terms, other.terms))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return Polynomial(self.ring, terms_add(self.terms, other.terms, -1))

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return Polynomial(self.ring, {e: -c for e, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return self.ring.zero()
            return Polynomial(self.ring, {e: c * other for e, c in self.terms.items()})
        other = self._check(other)
        if other is NotImplemented:
            return other
        return Polynomial(self.ring, self.ring.reduce_terms(terms_mul(self.terms, other.terms)))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        out = self.ring.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.const(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.terms == other.terms and (self.ring is other.ring or self.ring == other.ring)

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> Optional[int]:
        """Common degree of all terms; None for zero; raises for inhomogeneous."""
        d = self.homogeneous_degree()
        if d == "inhomogeneous":
            raise DegreeError(f"{self} is not homogeneous")
        return d

    def homogeneous_degree(self):
        degs = {sum(e) for e in self.terms}
        if not degs:
            return None
        if len(degs) > 1:
            return "inhomogeneous"
        return degs.pop()

    def is_homogeneous(self) -> bool:
        return self.homogeneous_degree() != "inhomogeneous"

    def sorted_terms(self) -> List[Tuple[Exp, Fraction]]:
        return sorted(self.terms.items(), key=lambda t: self.ring.key(t[0]), reverse=True)

    def leading_term(self) -> Tuple[Exp, Fraction]:
        e = max(self.terms, key=self.ring.key)
        return e, self.terms[e]

    def constant_coefficient(self) -> Fraction:
        return self.terms.get((0,) * self.ring.nvars, Fraction(0))

    def __str__(self):
        return format_terms(self.terms, self.ring.variables, self.ring.key)

    def __repr__(self):
        return f"Polynomial({self})"


def format_terms(terms: Terms, names: Sequence[str], key) -> str:
    if not terms:
        return "0"
    pieces = []
    for e, c in sorted(terms.items(), key=lambda t: key(t[0]), reverse=True):
        mono = "*".join(n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k)
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if mono:
            body = mono if a == 1 else f"{a}*{mono}"
        else:
            body = str(a)
        pieces.append((sign, body))
    first_sign, first = pieces[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in pieces[1:]:
        out += f" {sign} {body}"
    return out


class FreeModule:
    """Twisted free module (+)_i R(-a_i); basis element e_i sits in degree a_i."""

    __slots__ = ("twists",)

    def __init__(self, twists: Iterable[int] = ()):
        self.twists = tuple(int(a) for a in twists)

    @property
    def rank(self) -> int:
        return len(self.twists)

    def __eq__(self, other):
        return isinstance(other, FreeModule) and self.twists == other.twists

    def __hash__(self):
        return hash(self.twists)

    def __repr__(self):
        return f"FreeModule({list(self.twists)})"

    def __str__(self):
        if not self.twists:
            return "0"
        parts = []
        i = 0
        while i < len(self.twists):
            j = i
            while j < len(self.twists) and self.twists[j] == self.twists[i]:
                j += 1
            a = self.twists[i]
            base = "R" if a == 0 else f"R({-a})"
            parts.append(base if j - i == 1 else f"{base}^{j - i}")
            i = j
        return " + ".join(parts)


class GradedMatrix:
    """Homogeneous degree-0 map source -> target; entry (i, j) has degree b_j - a_i."""

    __slots__ = ("ring", "source", "target", "entries", "__dict__")

    def __init__(self, ring: PolyRing, source: FreeModule, target: FreeModule,
                 entries: Optional[Dict[Tuple[int, int], Polynomial]] = None, check: bool = True):
        self.ring = ring
        self.source = source
        self.target = target
        self.entries = {k: v for k, v in (entries or {}).items() if v.terms}
        if check:
            self.check_degrees()

    @classmethod
    def from_rows(cls, ring, rows, source_twists=None, target_twists=None):
        rows = [[ring.parse(x) if isinstance(x, str) else _as_poly(ring, x) for x in r] for r in rows]
        nrows = len(rows)
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged matrix")
        entries = {(i, j): p for i, r in enumerate(rows) for j, p in enumerate(r) if p.terms}
        if target_twists is None:
            target_twists = [0] * nrows
        if source_twists is None:
            source_twists = []
            for j in range(ncols):
                col = [(i, entries[i, j]) for i in range(nrows) if (i, j) in entries]
                if not col:
                    raise DegreeError(f"cannot infer twist of zero column {j}")
                i, p = col[0]
                source_twists.append(p.degree() + target_twists[i])
        return cls(ring, FreeModule(source_twists), FreeModule(target_twists), entries)

    @classmethod
    def zero(cls, ring, source: FreeModule, target: FreeModule):
        return cls(ring, source, target, {}, check=False)

    @classmethod
    def identity(cls, ring, module: FreeModule):
        one = ring.one()
        return cls(ring, module, module, {(i, i): one for i in range(module.rank)}, check=False)

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.target.rank, self.source.rank)

    def entry_degree(self, i: int, j: int) -> int:
        return self.source.twists[j] - self.target.twists[i]

    def check_degrees(self):
        for (i, j), p in self.entries.items():
            if not (0 <= i < self.target.rank and 0 <= j < self.source.rank):
                raise DegreeError(f"entry ({i}, {j}) outside shape {self.shape}")
            want = self.entry_degree(i, j)
            got = p.homogeneous_degree()
            if got != want:
                raise DegreeError(
                    f"entry ({i + 1}, {j + 1}) = {p} has degree {got}, expected {want}")

    def __getitem__(self, ij) -> Polynomial:
        return self.entries.get(ij) or self.ring.zero()

    def is_zero(self) -> bool:
        return not self.entries

    def __bool__(self):
        return bool(self.entries)

    def __eq__(self, other):
        if not isinstance(other, GradedMatrix):
            return NotImplemented
        return (self.source == other.source and self.target == other.target
                and self.entries == other.entries)

    def __hash__(self):
        return hash((self.source, self.target, frozenset(
            (k, frozenset(v.terms.items())) for k, v in self.entries.items())))

    def _same_shape(self, other):
        if self.source != other.source or self.target != other.target:
            raise DegreeError(f"shape/twist mismatch: {self.source}->{self.target} vs "
                              f"{other.source}->{other.target}")

    def __add__(self, other: "GradedMatrix") -> "GradedMatrix":
        self._same_shape(other)
        out = dict(self.entries)
        for k, v in other.entries.items():
            out[k] = out[k] + v if k in out else v
        return GradedMatrix(self.ring, self.source, self.target, out, check=False)

    def __sub__(self, other: "GradedMatrix") -> "GradedMatrix":
        return self + (-other)

    def __neg__(self) -> "GradedMatrix":
        return GradedMatrix(self.ring, self.source, self.target,
                            {k: -v for k, v in self.entries.items()}, check=False)

    def scale(self, c) -> "GradedMatrix":
        c = Fraction(c)
        if not c:
            return GradedMatrix.zero(self.ring, self.source, self.target)
        return GradedMatrix(self.ring, self.source, self.target,
                            {k: v * c for k, v in self.entries.items()}, check=False)

    def __matmul__(self, other: "GradedMatrix") -> "GradedMatrix":
        return graded_compose(self, other)

    def column(self, j: int) -> Dict[int, Polynomial]:
        return {i: p for (i, jj), p in self.entries.items() if jj == j}

    def rows(self) -> List[List[Polynomial]]:
        return [[self[i, j] for j in range(self.source.rank)] for i in range(self.target.rank)]

    def map_entries(self, f) -> "GradedMatrix":
        return GradedMatrix(self.ring, self.source, self.target,
                            {k: f(v) for k, v in self.entries.items()}, check=False)

    def __repr__(self):
        return f"GradedMatrix({self.target.rank}x{self.source.rank}, {len(self.entries)} nonzero)"

    def __str__(self):
        rows = [", ".join(str(p) for p in r) for r in self.rows()]
        return "[" + ",\n ".join(f"[{r}]" for r in rows) + "]"


def _as_poly(ring, x) -> Polynomial:
    if isinstance(x, Polynomial):
        return x
    return ring.const(x)


def graded_compose(A: GradedMatrix, B: GradedMatrix) -> GradedMatrix:
    """Matrix product A @ B, i.e. the map 'first B, then A'."""
    if A.source != B.target:
        raise DegreeError(f"cannot compose: {A.source} != {B.target}")
    ring = A.ring
    if B.ring != ring:
        raise RingMismatch("matrices over different rings")
    by_row: Dict[int, List[Tuple[int, Polynomial]]] = {}
    for (k, j), p in B.entries.items():
        by_row.setdefault(k, []).append((j, p))
    acc: Dict[Tuple[int, int], Terms] = {}
    for (i, k), a in A.entries.items():
        for j, b in by_row.get(k, ()):
            t = terms_mul(a.terms, b.terms)
            cur = acc.get((i, j))
            acc[i, j] = terms_add(cur, t) if cur else t
    out = {}
    for k, t in acc.items():
        t = ring.reduce_terms(t)
        if t:
            out[k] = Polynomial(ring, t)
    return GradedMatrix(ring, B.source, A.target, out, check=False)


def iter_entries(M: GradedMatrix) -> Iterator[Tuple[int, int, Polynomial]]:
    for (i, j), p in sorted(M.entries.items()):
        yield i, j, p
