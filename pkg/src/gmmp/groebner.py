"""Buchberger engine for homogeneous submodules of twisted free modules.

Module elements are handled internally as sparse dicts ``{(pos, exp): coeff}``
under a position-over-term extension of the ring order (lower position index
is larger).  Lifting and syzygies both come from one Gröbner basis of the
graph module generated by the vectors ``(A e_j, e_j)``.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .algebra import (DegreeError, Exp, FreeModule, GradedMatrix, Polynomial, PolyRing, Terms,
                      exp_add, exp_divides, exp_lcm, exp_sub)

Term = Tuple[int, Exp]
Vec = Dict[Term, Fraction]


# ---------------------------------------------------------------------------
# raw kernel: reduction and Buchberger on dict vectors

def _tkey(key):
    return lambda t: (-t[0], key(t[1]))


class _Basis:
    """Bookkeeping for a list of monic vectors and their leading terms."""

    def __init__(self, key):
        self.key = key
        self.tkey = _tkey(key)
        self.vecs: List[Vec] = []
        self.leads: List[Term] = []
        self.by_pos: Dict[int, List[int]] = {}

    def add(self, v: Vec) -> int:
        lt = max(v, key=self.tkey)
        c = v[lt]
        if c != 1:
            v = {t: x / c for t, x in v.items()}
        self.vecs.append(v)
        self.leads.append(lt)
        idx = len(self.vecs) - 1
        self.by_pos.setdefault(lt[0], []).append(idx)
        return idx

    def divisor(self, t: Term, skip: int = -1) -> Optional[int]:
        for idx in self.by_pos.get(t[0], ()):
            if idx != skip and exp_divides(self.leads[idx][1], t[1]):
                return idx
        return None

    def reduce(self, v: Vec, track: bool = False, skip: int = -1):
        """Full reduction; returns (remainder, quotients) with v = sum q_k g_k + r."""
        v = dict(v)
        rem: Vec = {}
        quots: Dict[int, Dict[Exp, Fraction]] = {}
        tkey = self.tkey
        while v:
            t = max(v, key=tkey)
            c = v[t]
            idx = self.divisor(t, skip)
            if idx is None:
                rem[t] = c
                del v[t]
                continue
            s = exp_sub(t[1], self.leads[idx][1])
            for (p, e), gc in self.vecs[idx].items():
                k = (p, exp_add(e, s))
                nv = v.get(k, 0) - c * gc
                if nv:
                    v[k] = nv
                else:
                    v.pop(k, None)
            if track:
                q = quots.setdefault(idx, {})
                nq = q.get(s, 0) + c
                if nq:
                    q[s] = nq
                else:
                    q.pop(s, None)
        return rem, quots


def _vec_degree(v: Vec, twists: Sequence[int]) -> int:
    t = next(iter(v))
    return sum(t[1]) + twists[t[0]]


def _check_homogeneous(v: Vec, twists: Sequence[int]):
    degs = {sum(e) + twists[p] for p, e in v}
    if len(degs) > 1:
        raise DegreeError(f"inhomogeneous module element (degrees {sorted(degs)})")


def _spoly(f: Vec, lf: Term, g: Vec, lg: Term) -> Vec:
    m = exp_lcm(lf[1], lg[1])
    sf = exp_sub(m, lf[1])
    sg = exp_sub(m, lg[1])
    out: Vec = {}
    for (p, e), c in f.items():
        out[(p, exp_add(e, sf))] = c
    for (p, e), c in g.items():
        k = (p, exp_add(e, sg))
        nv = out.get(k, 0) - c
        if nv:
            out[k] = nv
        else:
            out.pop(k, None)
    return out


def _buchberger(gens: List[Vec], twists: Sequence[int], key, ideal: bool = False) -> List[Vec]:
    """Reduced Gröbner basis of homogeneous generators, processed degree by degree."""
    B = _Basis(key)
    heap = []
    seq = 0
    for v in gens:
        if v:
            _check_homogeneous(v, twists)
            heapq.heappush(heap, (_vec_degree(v, twists), seq, 0, v))
            seq += 1
    while heap:
        deg, _, kind, data = heapq.heappop(heap)
        if kind == 0:
            v = data
        else:
            i, j = data
            v = _spoly(B.vecs[i], B.leads[i], B.vecs[j], B.leads[j])
        if not v:
            continue
        r, _ = B.reduce(v)
        if not r:
            continue
        new = B.add(r)
        lt = B.leads[new]
        for old in B.by_pos[lt[0]]:
            if old == new:
                continue
            lo = B.leads[old]
            m = exp_lcm(lo[1], lt[1])
            if ideal and m == exp_add(lo[1], lt[1]):
                continue  # coprime leading monomials
            heapq.heappush(heap, (sum(m) + twists[lt[0]], seq, 1, (old, new)))
            seq += 1
    # interreduce: a divisor of a leading term is never larger, so scan ascending
    minimal = _Basis(key)
    for i in sorted(range(len(B.vecs)), key=lambda i: B.tkey(B.leads[i])):
        if minimal.divisor(B.leads[i]) is None:
            minimal.add(B.vecs[i])
    out = _Basis(key)
    for i in range(len(minimal.vecs)):
        lt = minimal.leads[i]
        v = dict(minimal.vecs[i])
        c = v.pop(lt)
        tail, _ = minimal.reduce(v)
        tail[lt] = c
        out.add(tail)
    return out.vecs


def ideal_basis(gens: List[Terms], nvars: int, key) -> List[Terms]:
    vecs = [{(0, e): Fraction(c) for e, c in g.items()} for g in gens if g]
    gb = _buchberger(vecs, (0,), key, ideal=True)
    return [{e: c for (_, e), c in v.items()} for v in gb]


def reduce_terms(t: Terms, gb: List[Terms], leads: List[Exp], key) -> Terms:
    """Normal form of a polynomial against a reduced ideal Gröbner basis."""
    t = dict(t)
    rem: Terms = {}
    while t:
        e = max(t, key=key)
        c = t[e]
        for g, lt in zip(gb, leads):
            if exp_divides(lt, e):
                s = exp_sub(e, lt)
                q = c / g[lt]
                for ge, gc in g.items():
                    k = exp_add(ge, s)
                    nv = t.get(k, 0) - q * gc
                    if nv:
                        t[k] = nv
                    else:
                        t.pop(k, None)
                break
        else:
            rem[e] = c
            del t[e]
    return rem


# ---------------------------------------------------------------------------
# public API

def to_vec(v: Sequence[Polynomial]) -> Vec:
    out: Vec = {}
    for i, p in enumerate(v):
        if p is None:
            continue
        for e, c in p.terms.items():
            out[(i, e)] = c
    return out


def from_vec(v: Vec, ring: PolyRing, rank: int, reduce: bool = True) -> List[Polynomial]:
    comps: List[Terms] = [{} for _ in range(rank)]
    for (i, e), c in v.items():
        comps[i][e] = c
    return [ring.poly(t, reduce=reduce) if reduce else Polynomial(ring, t) for t in comps]


@dataclass
class DivisionWitness:
    quotients: List[Polynomial]
    remainder: List[Polynomial]

    def is_zero(self) -> bool:
        return all(p.is_zero() for p in self.remainder)


class GroebnerBasis:
    """Reduced Gröbner basis of a homogeneous submodule of a twisted free module.

    For a quotient ring R = S/I the basis is computed over S with the
    generators ``h e_i`` (h in the Gröbner basis of I) adjoined.
    """

    def __init__(self, ring: PolyRing, module: FreeModule, vecs: List[Vec]):
        self.ring = ring
        self.ambient = ring.ambient()
        self.module = module
        self._basis = _Basis(ring.key)
        for v in vecs:
            self._basis.add(v)

    @property
    def generators(self) -> List[List[Polynomial]]:
        return [from_vec(v, self.ambient, self.module.rank, reduce=False) for v in self._basis.vecs]

    @property
    def leading_terms(self) -> List[Term]:
        return list(self._basis.leads)

    def __len__(self):
        return len(self._basis.vecs)

    def normal_form(self, v) -> DivisionWitness:
        vec = v if isinstance(v, dict) else to_vec(v)
        rem, quots = self._basis.reduce(vec, track=True)
        qs = []
        for idx in range(len(self._basis.vecs)):
            qs.append(Polynomial(self.ambient, dict(quots.get(idx, {}))))
        return DivisionWitness(qs, from_vec(rem, self.ambient, self.module.rank, reduce=False))

    def reduce_vec(self, vec: Vec) -> Vec:
        return self._basis.reduce(vec)[0]

    def contains(self, v) -> bool:
        vec = v if isinstance(v, dict) else to_vec(v)
        return not self._basis.reduce(vec)[0]

    def is_standard(self, pos: int, e: Exp) -> bool:
        return self._basis.divisor((pos, e)) is None

    def spairs_reduce_to_zero(self) -> bool:
        B = self._basis
        for i in range(len(B.vecs)):
            for j in range(i + 1, len(B.vecs)):
                if B.leads[i][0] != B.leads[j][0]:
                    continue
                s = _spoly(B.vecs[i], B.leads[i], B.vecs[j], B.leads[j])
                if B.reduce(s)[0]:
                    return False
        return True


def _quotient_vecs(ring: PolyRing, rank: int, offset: int = 0) -> List[Vec]:
    out = []
    for h in ring.quotient_basis:
        for i in range(rank):
            out.append({(i + offset, e): c for e, c in h.items()})
    return out


def buchberger(gens, module: Optional[FreeModule] = None, ring: Optional[PolyRing] = None) -> GroebnerBasis:
    """Reduced Gröbner basis of the submodule generated by ``gens``.

    ``gens`` are Polynomials (ideal case) or sequences of Polynomials (vectors).
    """
    gens = list(gens)
    if ring is None:
        for g in gens:
            p = g if isinstance(g, Polynomial) else next((x for x in g if x is not None), None)
            if p is not None:
                ring = p.ring
                break
    if ring is None:
        raise ValueError("cannot determine ring of empty generator list")
    vecs = []
    for g in gens:
        if isinstance(g, Polynomial):
            g = [g]
        vecs.append(to_vec(g))
    if module is None:
        rank = max((len(g) if not isinstance(g, Polynomial) else 1) for g in gens) if gens else 1
        module = FreeModule([0] * rank)
    twists = module.twists
    all_vecs = [v for v in vecs if v] + _quotient_vecs(ring, module.rank)
    gb = _buchberger(all_vecs, twists, ring.key, ideal=(module.rank == 1))
    return GroebnerBasis(ring, module, gb)


def submodule_basis(ring: PolyRing, A: GradedMatrix) -> GroebnerBasis:
    """Gröbner basis of im(A) (+ I * target when the ring is a quotient)."""
    cached = A.__dict__.get("_image_gb")
    if cached is not None:
        return cached
    cols = [{(i, e): c for i, p in A.column(j).items() for e, c in p.terms.items()}
            for j in range(A.source.rank)]
    vecs = [v for v in cols if v] + _quotient_vecs(ring, A.target.rank)
    gb = _buchberger(vecs, A.target.twists, ring.key, ideal=(A.target.rank == 1))
    G = GroebnerBasis(ring, A.target, gb)
    A.__dict__["_image_gb"] = G
    return G


class _GraphBasis:
    """Gröbner basis of the graph module {(A x, x)} used for lifts and syzygies."""

    def __init__(self, A: GradedMatrix):
        ring = A.ring
        r, s = A.target.rank, A.source.rank
        self.r, self.s = r, s
        self.ring = ring
        twists = A.target.twists + A.source.twists
        vecs: List[Vec] = []
        for j in range(s):
            v: Vec = {(i, e): c for i, p in A.column(j).items() for e, c in p.terms.items()}
            v[(r + j, (0,) * ring.nvars)] = Fraction(1)
            vecs.append(v)
        vecs += _quotient_vecs(ring, r)
        self.basis = _Basis(ring.key)
        for v in _buchberger(vecs, twists, ring.key):
            self.basis.add(v)

    def syzygy_vectors(self) -> List[Vec]:
        out = []
        for v, lt in zip(self.basis.vecs, self.basis.leads):
            if lt[0] >= self.r:
                out.append({(p - self.r, e): c for (p, e), c in v.items()})
        return out

    def lift(self, b: Vec) -> Optional[Vec]:
        rem, _ = self.basis.reduce(b)
        if any(p < self.r for p, _ in rem):
            return None
        return {(p - self.r, e): -c for (p, e), c in rem.items()}


def _graph(A: GradedMatrix) -> _GraphBasis:
    g = A.__dict__.get("_graph_gb")
    if g is None:
        g = _GraphBasis(A)
        A.__dict__["_graph_gb"] = g
    return g


def syzygies(gens, module: Optional[FreeModule] = None, ring: Optional[PolyRing] = None,
             source_twists: Optional[Sequence[int]] = None) -> List[List[Polynomial]]:
    """Generators of the syzygy module of ``gens`` (a Gröbner basis of it, not minimal).

    ``gens`` may be a GroebnerBasis, a GradedMatrix (its columns) or a list of
    Polynomials / vectors.
    """
    if isinstance(gens, GroebnerBasis):
        A = _matrix_from_vectors(gens.generators, gens.module, gens.ring)
    elif isinstance(gens, GradedMatrix):
        A = gens
    else:
        gens = [[g] if isinstance(g, Polynomial) else list(g) for g in gens]
        if ring is None:
            ring = next(p.ring for g in gens for p in g if p is not None)
        if module is None:
            module = FreeModule([0] * max(len(g) for g in gens))
        A = _matrix_from_vectors(gens, module, ring, source_twists)
    G = _graph(A)
    out = []
    for v in G.syzygy_vectors():
        x = from_vec(v, A.ring, A.source.rank)
        if any(p for p in x):
            out.append(x)
    return out


def _matrix_from_vectors(vectors, module: FreeModule, ring: PolyRing, source_twists=None) -> GradedMatrix:
    entries = {}
    twists = []
    for j, v in enumerate(vectors):
        deg = None
        for i, p in enumerate(v):
            if p is not None and p.terms:
                entries[i, j] = p if p.ring == ring else ring.poly(p.terms)
                d = p.homogeneous_degree()
                if d == "inhomogeneous":
                    raise DegreeError(f"generator {j + 1} is inhomogeneous")
                if deg is None:
                    deg = d + module.twists[i]
                elif deg != d + module.twists[i]:
                    raise DegreeError(f"generator {j + 1} is inhomogeneous")
        twists.append(deg if deg is not None else 0)
    if source_twists is not None:
        twists = list(source_twists)
    return GradedMatrix(ring, FreeModule(twists), module, entries)


class _ColumnDivider:
    """Plain division by the columns of A, tried in column order."""

    def __init__(self, A: GradedMatrix):
        self.basis = _Basis(A.ring.key)
        self.cols: List[Tuple[int, Fraction]] = []
        for j in range(A.source.rank):
            v: Vec = {(i, e): c for i, p in A.column(j).items() for e, c in p.terms.items()}
            if v:
                idx = self.basis.add(v)
                self.cols.append((j, v[self.basis.leads[idx]]))

    def lift(self, b: Vec) -> Optional[Vec]:
        rem, quots = self.basis.reduce(b, track=True)
        if rem:
            return None
        out: Vec = {}
        for idx, q in quots.items():
            j, lc = self.cols[idx]
            for e, c in q.items():
                out[(j, e)] = c / lc
        return out


def _divider(A: GradedMatrix) -> _ColumnDivider:
    d = A.__dict__.get("_divider")
    if d is None:
        d = _ColumnDivider(A)
        A.__dict__["_divider"] = d
    return d


def lift(A: GradedMatrix, b) -> Optional[List[Polynomial]]:
    """Solve A x = b over the ring; None when b is not in the image of A.

    Division of b by the columns of A (in column order) is tried first; its
    quotients are the lift whenever the remainder vanishes.  Otherwise the
    remainder-derived witness of the graph basis is used, which is reduced
    modulo the syzygies of A.  Both are deterministic.
    """
    vec = to_vec(b) if not isinstance(b, dict) else b
    if not vec:
        return [A.ring.zero() for _ in range(A.source.rank)]
    _check_homogeneous(vec, A.target.twists)
    deg = _vec_degree(vec, A.target.twists)
    x = _divider(A).lift(vec)
    if x is None:
        x = _graph(A).lift(vec)
    if x is None:
        return None
    for (j, e), _ in x.items():
        if sum(e) + A.source.twists[j] != deg:
            raise DegreeError("lift produced a solution of the wrong degree")
    return from_vec(x, A.ring, A.source.rank)


def lift_matrix(A: GradedMatrix, B: GradedMatrix) -> Optional[GradedMatrix]:
    """Solve A X = B column by column."""
    if A.target != B.target:
        raise DegreeError("lift_matrix: targets differ")
    entries = {}
    for j in range(B.source.rank):
        col = B.column(j)
        if not col:
            continue
        x = lift(A, [col.get(i) for i in range(B.target.rank)])
        if x is None:
            return None
        for i, p in enumerate(x):
            if p.terms:
                entries[i, j] = p
    return GradedMatrix(A.ring, B.source, A.source, entries)
