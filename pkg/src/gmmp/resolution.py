"""Truncated minimal graded free resolutions and Betti tables."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .algebra import DegreeError, FreeModule, GradedMatrix, Polynomial, PolyRing
from .groebner import _buchberger, _quotient_vecs, _Basis, submodule_basis, syzygies, to_vec


class ZeroModuleError(ValueError):
    """The module being resolved is zero."""


class ResolutionError(ValueError):
    """A supplied or computed complex fails a resolution invariant."""


@dataclass
class ModuleSpec:
    """M = R/(gens) (cyclic) or M = coker(presentation)."""

    ring: PolyRing
    presentation: GradedMatrix
    cyclic: bool = False

    @classmethod
    def cyclic_module(cls, ring: PolyRing, gens: Sequence[Polynomial]) -> "ModuleSpec":
        gens = [g for g in gens if g.terms]
        twists = []
        for g in gens:
            d = g.homogeneous_degree()
            if d == "inhomogeneous":
                raise DegreeError(f"generator {g} is not homogeneous")
            twists.append(d)
        P = GradedMatrix(ring, FreeModule(twists), FreeModule([0]),
                         {(0, j): g for j, g in enumerate(gens)})
        return cls(ring, P, cyclic=True)

    @classmethod
    def presented(cls, ring: PolyRing, P: GradedMatrix) -> "ModuleSpec":
        return cls(ring, P, cyclic=P.target.rank == 1 and list(P.target.twists) == [0])


@dataclass
class BettiTable:
    """steps[n] maps twist -> multiplicity of R(-twist) in L_n."""

    steps: List[Dict[int, int]]

    @property
    def ranks(self) -> Tuple[int, ...]:
        return tuple(sum(s.values()) for s in self.steps)

    def __str__(self):
        lines = []
        for n, s in enumerate(self.steps):
            mod = " + ".join(f"R(-{a})^{m}" if a else f"R^{m}" for a, m in sorted(s.items())) or "0"
            lines.append(f"L{n}: {mod}")
        return "\n".join(lines)

    def to_json(self):
        return [{str(a): m for a, m in sorted(s.items())} for s in self.steps]


@dataclass
class Resolution:
    """L_0 <- L_1 <- ... <- L_length with differentials[k-1] = d_k : L_k -> L_{k-1}."""

    ring: PolyRing
    modules: List[FreeModule]
    differentials: List[GradedMatrix]
    complete: bool = False
    spec: Optional[ModuleSpec] = field(default=None, repr=False)

    @property
    def length(self) -> int:
        return len(self.differentials)

    def d(self, k: int) -> GradedMatrix:
        """d_k : L_k -> L_{k-1}; zero outside the computed range."""
        if 1 <= k <= self.length:
            return self.differentials[k - 1]
        src = self.module(k)
        tgt = self.module(k - 1)
        return GradedMatrix.zero(self.ring, src, tgt)

    def module(self, k: int) -> FreeModule:
        if 0 <= k < len(self.modules):
            return self.modules[k]
        return FreeModule([])

    def betti(self) -> BettiTable:
        return betti(self)

    def check(self, exactness: bool = True) -> None:
        check_resolution(self, exactness=exactness)


# ---------------------------------------------------------------------------

def _column_key(ring: PolyRing, twist: int, col: Dict[int, Polynomial]):
    body = tuple((i, tuple((ring.key(e), c) for e, c in col[i].sorted_terms()))
                 for i in sorted(col))
    return (twist, body)


def _prune_generators(ring: PolyRing, target: FreeModule,
                      cols: List[Tuple[int, Dict[int, Polynomial]]],
                      canonical: bool = True) -> List[Tuple[int, Dict[int, Polynomial]]]:
    """Minimal generating subset of the submodule spanned by ``cols``.

    Candidates are scanned by twist, then canonical column order (or input
    order when ``canonical`` is false); a candidate is kept when it is not in
    the submodule generated by those already kept.
    """
    cols = [(t, c) for t, c in cols if c]
    if canonical:
        cols.sort(key=lambda tc: _column_key(ring, tc[0], tc[1]))
    else:
        cols.sort(key=lambda tc: tc[0])
    kept: List[Tuple[int, Dict[int, Polynomial]]] = []
    basis: Optional[_Basis] = None
    for t, c in cols:
        vec = to_vec([c.get(i) for i in range(target.rank)])
        if basis is None:
            vecs = [to_vec([k.get(i) for i in range(target.rank)]) for _, k in kept]
            vecs += _quotient_vecs(ring, target.rank)
            basis = _Basis(ring.key)
            for v in _buchberger(vecs, target.twists, ring.key, ideal=target.rank == 1):
                basis.add(v)
        if basis.reduce(vec)[0]:
            kept.append((t, c))
            basis = None
    return kept


def _matrix(ring, target: FreeModule, cols) -> GradedMatrix:
    entries = {(i, j): p for j, (_, c) in enumerate(cols) for i, p in c.items() if p.terms}
    return GradedMatrix(ring, FreeModule([t for t, _ in cols]), target, entries)


def minimalize(chain: Sequence[GradedMatrix]) -> List[GradedMatrix]:
    """Remove unit entries from a complex d_1, d_2, ... (d_k d_{k+1} = 0).

    Each unit entry c at (i, j) of d_k splits off a trivial summand
    R(-a) --c--> R(-a); the scan order is k, then column, then row.
    """
    ds = [m for m in chain]
    if not ds:
        return []
    ring = ds[0].ring
    while True:
        hit = None
        for k, D in enumerate(ds):
            for (i, j) in sorted(D.entries, key=lambda ij: (ij[1], ij[0])):
                p = D.entries[i, j]
                if p.constant_coefficient():
                    hit = (k, i, j)
                    break
            if hit:
                break
        if hit is None:
            return ds
        k, i, j = hit
        ds = _split_unit(ring, ds, k, i, j)


def _split_unit(ring, ds: List[GradedMatrix], k: int, i: int, j: int) -> List[GradedMatrix]:
    D = ds[k]
    c = D.entries[i, j].constant_coefficient()
    rows = D.rows()
    nr, nc = D.target.rank, D.source.rank
    inv = Fraction(1) / c
    # column ops on D: col j' -= (D[i,j']/c) col j ; dual row ops on d_{k+1}
    factors_c = {jj: rows[i][jj] * inv for jj in range(nc) if jj != j and rows[i][jj].terms}
    for jj, f in factors_c.items():
        for r in range(nr):
            rows[r][jj] = rows[r][jj] - f * rows[r][j]
    nxt = ds[k + 1].rows() if k + 1 < len(ds) else None
    if nxt is not None:
        for jj, f in factors_c.items():
            nxt[j] = [a + f * b for a, b in zip(nxt[j], nxt[jj])]
    # row ops on D: row i' -= (D[i',j]/c) row i ; dual column ops on d_{k-1}
    factors_r = {ii: rows[ii][j] * inv for ii in range(nr) if ii != i and rows[ii][j].terms}
    for ii, f in factors_r.items():
        rows[ii] = [a - f * b for a, b in zip(rows[ii], rows[i])]
    prv = ds[k - 1].rows() if k > 0 else None
    if prv is not None:
        for ii, f in factors_r.items():
            for r in range(len(prv)):
                prv[r][i] = prv[r][i] + f * prv[r][ii]
    out = list(ds)
    src = [t for jj, t in enumerate(D.source.twists) if jj != j]
    tgt = [t for ii, t in enumerate(D.target.twists) if ii != i]
    new_rows = [[p for jj, p in enumerate(r) if jj != j] for ii, r in enumerate(rows) if ii != i]
    out[k] = _from_rows(ring, new_rows, src, tgt)
    if nxt is not None:
        if any(p.terms for p in nxt[j]):
            raise ResolutionError("chain is not a complex (d^2 != 0)")
        nxt_rows = [r for jj, r in enumerate(nxt) if jj != j]
        out[k + 1] = _from_rows(ring, nxt_rows, ds[k + 1].source.twists, src)
    if prv is not None:
        if any(r[i].terms for r in prv):
            raise ResolutionError("chain is not a complex (d^2 != 0)")
        prv_rows = [[p for ii, p in enumerate(r) if ii != i] for r in prv]
        out[k - 1] = _from_rows(ring, prv_rows, tgt, ds[k - 1].target.twists)
    return out


def _from_rows(ring, rows, src, tgt) -> GradedMatrix:
    entries = {(a, b): p for a, r in enumerate(rows) for b, p in enumerate(r) if p.terms}
    return GradedMatrix(ring, FreeModule(src), FreeModule(tgt), entries)


def _columns(M: GradedMatrix) -> List[Tuple[int, Dict[int, Polynomial]]]:
    return [(M.source.twists[j], M.column(j)) for j in range(M.source.rank)]


def _next_differential(d: GradedMatrix) -> GradedMatrix:
    ring = d.ring
    raw = syzygies(d)
    cols = []
    for x in raw:
        col = {i: p for i, p in enumerate(x) if p.terms}
        i0 = min(col)
        cols.append((col[i0].degree() + d.source.twists[i0], col))
    kept = _prune_generators(ring, d.source, cols)
    return _matrix(ring, d.source, kept)


def minimal_resolution(spec: ModuleSpec, length: int = 3,
                       given: Optional[Sequence[GradedMatrix]] = None) -> Resolution:
    """Minimal graded free resolution of ``spec`` truncated at ``length``.

    ``given`` may supply explicit leading differentials d_1, d_2, ...; they are
    validated (complex, minimal, exact, presenting M) and extended if needed.
    """
    if length < 0:
        raise ValueError("length must be non-negative")
    ring = spec.ring
    P = spec.presentation
    chain = minimalize([P])
    P = chain[0]
    if P.target.rank == 0:
        raise ZeroModuleError("the module is zero")
    if given:
        ds = [g for g in given][:max(length, 1)]
        _check_presents(spec, ds[0])
    else:
        d1 = _matrix(ring, P.target, _prune_generators(ring, P.target, _columns(P), canonical=False))
        ds = [d1]
    complete = False
    while len(ds) < length and ds[-1].source.rank > 0:
        ds.append(_next_differential(ds[-1]))
    ds = ds[:length]
    while ds and ds[-1].source.rank == 0:
        ds.pop()
        complete = True
    if not complete:
        complete = not _next_has_kernel(ds[-1]) if ds else P.source.rank == 0
    modules = [P.target] + [d.source for d in ds]
    res = Resolution(ring, modules, ds, complete=complete, spec=spec)
    res.check(exactness=True)
    return res


def _next_has_kernel(d: GradedMatrix) -> bool:
    return bool(syzygies(d)) if d.source.rank else False


def _check_presents(spec: ModuleSpec, d1: GradedMatrix) -> None:
    P = spec.presentation
    if d1.target != P.target:
        raise ResolutionError(f"d1 has target {d1.target}, module generators live in {P.target}")
    A, B = submodule_basis(spec.ring, P), submodule_basis(spec.ring, d1)
    for M, G, name in ((d1, A, "d1"), (P, B, "the presentation")):
        for j in range(M.source.rank):
            col = M.column(j)
            if not G.contains([col.get(i) for i in range(M.target.rank)]):
                other = "the presentation" if name == "d1" else "d1"
                raise ResolutionError(f"column {j + 1} of {name} is not in the image of {other}")


def check_resolution(res: Resolution, exactness: bool = True) -> None:
    for k, D in enumerate(res.differentials, start=1):
        D.check_degrees()
        for (i, j), p in D.entries.items():
            if p.constant_coefficient():
                raise ResolutionError(f"d{k} is not minimal: entry ({i + 1}, {j + 1}) = {p}")
        if k >= 2:
            prod = res.d(k - 1) @ D
            if prod:
                raise ResolutionError(f"d{k - 1} d{k} != 0")
    if exactness:
        for k in range(1, res.length):
            G = submodule_basis(res.ring, res.d(k + 1))
            for x in syzygies(res.d(k)):
                if not G.contains(x):
                    raise ResolutionError(f"not exact at L{k}: a syzygy of d{k} is not in im d{k + 1}")


def betti(res: Resolution) -> BettiTable:
    return BettiTable([dict(sorted(Counter(m.twists).items())) for m in res.modules])
