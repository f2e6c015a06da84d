"""Truncated local algebras k[[u_1..u_d]]/(m^{N+1} + (f)) and their monomial bases.

A quotient of order N carries relations f^N (polynomials in u of degree <= N)
and bases B_0..B_N with S_{N+1} = k[[u]]/(m^{N+1} + (f^N)) having k-basis
{u^m : m in B_0 u ... u B_N}.  One step up the tower uses

    R_{N+2} = k[[u]]/(m^{N+2} + m (f^N))

with basis Bbar_N u B'_{N+1} u F (F an independent subset of the f's).
Monomials are scanned by total degree, then ascending lexicographic order
of the exponent vector.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .algebra import exp_add, monomials_of_degree
from .linalg import EchelonSpace, axpy

MultiIndex = Tuple[int, ...]
Series = Dict[MultiIndex, Fraction]


def order_of(n: MultiIndex) -> int:
    return sum(n)


def unit(d: int, j: int) -> MultiIndex:
    return tuple(int(i == j) for i in range(d))


def scan_key(n: MultiIndex):
    return (sum(n), n)


def monomials(d: int, k: int) -> List[MultiIndex]:
    return sorted(monomials_of_degree(d, k), key=scan_key)


def truncate(f: Series, cap: int) -> Series:
    return {e: c for e, c in f.items() if sum(e) <= cap and c}


def series_mul_mono(f: Series, a: MultiIndex, cap: int) -> Series:
    return {exp_add(e, a): c for e, c in f.items() if sum(e) + sum(a) <= cap}


def low_degree(f: Series) -> Optional[int]:
    return min((sum(e) for e in f), default=None)


def _ideal_rows(fs: Sequence[Series], d: int, min_mult: int, cap: int) -> List[Series]:
    """Spanning set of (m^min_mult * (f)) truncated at degree cap."""
    rows = []
    for f in fs:
        lo = low_degree(f)
        if lo is None:
            continue
        for k in range(min_mult, cap - lo + 1):
            for a in monomials(d, k):
                v = series_mul_mono(f, a, cap)
                if v:
                    rows.append(v)
    return rows


def _graded_space(rows: Sequence[Series]) -> EchelonSpace:
    S = EchelonSpace(order=scan_key)
    for r in rows:
        S.insert(r)
    return S


def _top_slice(S: EchelonSpace, k: int) -> List[Series]:
    """Degree-k parts of the rows of S lying in m^k (S is echelon by low degree first)."""
    out = []
    for p in S.pivots:
        if sum(p) == k:
            row = {e: c for e, c in S.rows[p][0].items() if sum(e) == k}
            out.append(row)
    return out


def _greedy(candidates: Sequence[MultiIndex], relations: Sequence[Series]) -> List[MultiIndex]:
    S = EchelonSpace(order=scan_key)
    for r in relations:
        S.insert(r)
    kept = []
    for n in sorted(set(candidates), key=scan_key):
        if S.insert({n: Fraction(1)}) is None:
            kept.append(n)
    return kept


@dataclass
class NormalFormWitness:
    """u^n = sum_m basis[m] u^m + sum_j relation[j] f_j  modulo m^cap+1 + (m^shift)(f)."""

    n: MultiIndex
    basis: Dict[MultiIndex, Fraction]
    relation: Dict[int, Fraction]
    cap: int
    relation_multiplier: int

    def verify(self, fs: Sequence[Series], d: int) -> bool:
        lhs: Series = {self.n: Fraction(1)} if sum(self.n) <= self.cap else {}
        for m, c in self.basis.items():
            axpy(lhs, -c, {m: Fraction(1)})
        for j, c in self.relation.items():
            axpy(lhs, -c, truncate(fs[j], self.cap))
        S = _graded_space(_ideal_rows(fs, d, self.relation_multiplier, self.cap))
        return not S.reduce(truncate(lhs, self.cap))[0]


class _Solver:
    """Coordinates w.r.t. a basis of a truncated quotient V/J."""

    def __init__(self, d: int, cap: int, ideal_rows: Sequence[Series],
                 monos: Sequence[MultiIndex], rels: Sequence[Tuple[int, Series]]):
        self.cap = cap
        S = EchelonSpace(order=scan_key)
        for r in ideal_rows:
            S.insert(r)
        for m in monos:
            if S.insert({m: Fraction(1)}, {("m", m): Fraction(1)}) is not None:
                raise ValueError(f"monomial {m} is dependent in the quotient")
        for j, f in rels:
            if S.insert(truncate(f, cap), {("f", j): Fraction(1)}) is not None:
                raise ValueError(f"relation {j} is dependent in the quotient")
        self.space = S

    def coords(self, vec: Series):
        rem, coeffs = self.space.reduce(truncate(vec, self.cap))
        if rem:
            raise ValueError("basis does not span the quotient")
        basis = {t[1]: c for t, c in coeffs.items() if t[0] == "m"}
        rel = {t[1]: c for t, c in coeffs.items() if t[0] == "f"}
        return basis, rel


class LocalQuotient:
    """Order-N stage of the tower: f^N and B_0..B_N."""

    def __init__(self, d: int, order: int, fs: Sequence[Series],
                 B: Dict[int, List[MultiIndex]], Bprime: Optional[Dict[int, List[MultiIndex]]] = None):
        self.d = d
        self.order = order
        self.f: Tuple[Series, ...] = tuple(truncate(f, order) for f in fs)
        self.B = {k: list(v) for k, v in B.items()}
        self.Bprime = {k: list(v) for k, v in (Bprime or {}).items()}
        self._r_solver = None
        self._s_solver = None
        self._bprime_next = None

    @classmethod
    def initial(cls, d: int, r: int) -> "LocalQuotient":
        """Order 1: S_2 = k[[u]]/m^2 and no relations yet."""
        B = {0: [(0,) * d], 1: [unit(d, j) for j in range(d)]}
        return cls(d, 1, [{} for _ in range(r)], B, {1: list(B[1])})

    # -- bases -----------------------------------------------------------
    def Bbar(self, k: Optional[int] = None) -> List[MultiIndex]:
        k = self.order if k is None else k
        out = []
        for i in range(0, k + 1):
            out += self.B.get(i, [])
        return out

    @property
    def dim(self) -> int:
        """dim_k S_{N+1}."""
        return len(self.Bbar())

    def next_Bprime(self) -> List[MultiIndex]:
        """B'_{N+1}: basis of m^{N+1}/(m^{N+2} + m^{N+1} cap m(f^N)), hereditary."""
        if self._bprime_next is None:
            k = self.order + 1
            cands = {exp_add(m, unit(self.d, j)) for m in self.B.get(k - 1, []) for j in range(self.d)}
            S = _graded_space(_ideal_rows(self.f, self.d, 1, k))
            self._bprime_next = _greedy(sorted(cands, key=scan_key), _top_slice(S, k))
        return list(self._bprime_next)

    def independent_relations(self) -> List[int]:
        """F: indices of f's independent in ker(R_{N+2} -> S_{N+1})."""
        k = self.order + 1
        S = EchelonSpace(order=scan_key)
        for r in _ideal_rows(self.f, self.d, 1, k):
            S.insert(r)
        for m in self.Bbar() + self.next_Bprime():
            S.insert({m: Fraction(1)})
        out = []
        for j, f in enumerate(self.f):
            if f and S.insert(truncate(f, k)) is None:
                out.append(j)
        return out

    # -- witnesses -------------------------------------------------------
    def r_witness(self, n: MultiIndex) -> NormalFormWitness:
        """Unique relation of u^n in R_{N+2}, basis Bbar_N u B'_{N+1} u F."""
        k = self.order + 1
        if sum(n) > k:
            return NormalFormWitness(n, {}, {}, k, 1)
        if self._r_solver is None:
            F = self.independent_relations()
            self._r_solver = _Solver(self.d, k, _ideal_rows(self.f, self.d, 1, k),
                                     self.Bbar() + self.next_Bprime(), [(j, self.f[j]) for j in F])
        basis, rel = self._r_solver.coords({n: Fraction(1)})
        return NormalFormWitness(n, basis, rel, k, 1)

    def s_witness(self, n: MultiIndex) -> NormalFormWitness:
        """Unique relation of u^n in S_{N+1}, basis Bbar_N; relation part in (f)."""
        k = self.order
        if sum(n) > k:
            return NormalFormWitness(n, {}, {}, k, 0)
        if self._s_solver is None:
            self._s_solver = _Solver(self.d, k, _ideal_rows(self.f, self.d, 0, k), self.Bbar(), [])
        basis, _ = self._s_solver.coords({n: Fraction(1)})
        rel = self._relation_part(n, basis)
        return NormalFormWitness(n, basis, rel, k, 0)

    def _relation_part(self, n, basis) -> Dict[int, Fraction]:
        # express u^n - sum basis as an element of (f) only on the f_j themselves when possible
        k = self.order
        lhs: Series = {n: Fraction(1)}
        for m, c in basis.items():
            axpy(lhs, -c, {m: Fraction(1)})
        S = EchelonSpace(order=scan_key)
        for r in _ideal_rows(self.f, self.d, 1, k):
            S.insert(r)
        for j, f in enumerate(self.f):
            if f:
                S.insert(truncate(f, k), {j: Fraction(1)})
        rem, coeffs = S.reduce(truncate(lhs, k))
        return dict(coeffs) if not rem else {}

    def normal_form_witness(self, n: MultiIndex) -> NormalFormWitness:
        return normal_form_witness(self, n)

    def reduce_series_s(self, vec: Series) -> Dict[MultiIndex, Fraction]:
        """Coordinates of a polynomial in S_{N+1} w.r.t. Bbar_N."""
        if self._s_solver is None:
            self.s_witness((0,) * self.d)
        return self._s_solver.coords(vec)[0]

    def to_json(self):
        return {"order": self.order, "relations": [sorted((list(e), str(c)) for e, c in f.items())
                                                   for f in self.f],
                "bases": {str(k): [list(m) for m in v] for k, v in sorted(self.B.items())}}


def basis_Bprime(Q: LocalQuotient, k: int) -> List[MultiIndex]:
    """B'_k of the tower; k <= Q.order + 1."""
    if k == Q.order + 1:
        return Q.next_Bprime()
    if k in Q.Bprime:
        return list(Q.Bprime[k])
    if k > Q.order + 1:
        raise ValueError(f"B'_{k} is not determined at order {Q.order}")
    raise KeyError(f"B'_{k} was not recorded")


def extend_quotient(Q: LocalQuotient, corrections: Sequence[Series]) -> LocalQuotient:
    """Order N+1 stage: f^{N+1} = f^N + corrections, B_{N+1} chosen inside B'_{N+1}."""
    k = Q.order + 1
    Bp = Q.next_Bprime()
    allowed = set(Bp)
    if len(corrections) != len(Q.f):
        raise ValueError(f"expected {len(Q.f)} corrections, got {len(corrections)}")
    fs = []
    for f, corr in zip(Q.f, corrections):
        bad = [e for e in corr if corr[e] and e not in allowed]
        if bad:
            raise ValueError(f"correction supported outside B'_{k}: {bad}")
        g = dict(f)
        axpy(g, 1, corr)
        fs.append(g)
    S = _graded_space(_ideal_rows(fs, Q.d, 0, k))
    Bk = _greedy(Bp, _top_slice(S, k))
    B = dict(Q.B)
    B[k] = Bk
    Bprime = dict(Q.Bprime)
    Bprime[k] = Bp
    return LocalQuotient(Q.d, k, fs, B, Bprime)


def normal_form_witness(Q: LocalQuotient, n: MultiIndex) -> NormalFormWitness:
    """Relation of u^n in R_{N+2} = k[[u]]/(m^{N+2} + m(f^N))."""
    if sum(n) > Q.order + 1:
        raise ValueError(f"|n| = {sum(n)} exceeds order {Q.order} + 1")
    return Q.r_witness(n)


def check_hereditary(Q: LocalQuotient, k: int, Bp: Sequence[MultiIndex]) -> bool:
    prev = set(Q.B.get(k - 1, []))
    for n in Bp:
        if not any(n[j] > 0 and tuple(x - (i == j) for i, x in enumerate(n)) in prev
                   for j in range(Q.d)):
            return False
    return True
