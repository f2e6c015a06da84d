"""Generalized matric Massey products, the relation algebra and the versal family."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .algebra import GradedMatrix, PolyRing, degrevlex_key, format_terms
from .hom_ext import (ExtBasis, FixtureError, NotACocycle, YonedaCochain, cup,
                      lift_matrix_or_raise, yoneda_diff)
from .local_algebra import (LocalQuotient, MultiIndex, Series, extend_quotient, monomials,
                            unit)


class HullError(RuntimeError):
    """An obstruction-calculus invariant failed (signals an internal bug)."""


def cup_order(d: int, k: int) -> List[MultiIndex]:
    """Multi-indices of order k, descending degrevlex in u (u_1 > u_2 > ...)."""
    return sorted(monomials(d, k), key=degrevlex_key, reverse=True)


# ---------------------------------------------------------------------------
# cup products

@dataclass
class MasseyValue:
    n: MultiIndex
    cochain: YonedaCochain
    classes: List[Fraction]

    @property
    def identically_zero(self) -> bool:
        return self.cochain.vanishes(2)

    @property
    def cohomologically_zero(self) -> bool:
        return not any(self.classes)


@dataclass
class CupCensus:
    total: int
    identically_zero: int
    cohomologically_zero: int
    nonzero: int

    def to_json(self):
        return {"total": self.total, "identically_zero": self.identically_zero,
                "cohomologically_zero": self.cohomologically_zero, "nonzero": self.nonzero}


def cup_square(E: ExtBasis, n: MultiIndex) -> YonedaCochain:
    """y(n) for |n| = 2: sum over ordered decompositions n = e_i + e_j."""
    idx = [j for j, x in enumerate(n) for _ in range(x)]
    i, j = idx
    w = cup(E.ext1[i], E.ext1[j])
    if i != j:
        w = w + cup(E.ext1[j], E.ext1[i])
    return w


def cup_table(E: ExtBasis) -> List[MasseyValue]:
    d = len(E.ext1)
    out = []
    for n in cup_order(d, 2):
        w = cup_square(E, n)
        out.append(MasseyValue(n, w, E.class_of(w)))
    return out


def census(table: Sequence[MasseyValue]) -> CupCensus:
    ident = sum(1 for v in table if v.identically_zero)
    coh = sum(1 for v in table if not v.identically_zero and v.cohomologically_zero)
    return CupCensus(len(table), ident, coh, len(table) - ident - coh)


def use_cup_frame(E: ExtBasis, table: Optional[Sequence[MasseyValue]] = None) -> List[MultiIndex]:
    """Reframe Ext^2 so that the independent cup classes come first (in table order)."""
    table = cup_table(E) if table is None else table
    chosen = E.reframe([v.cochain for v in table])
    return [table[i].n for i in chosen]


def restrict(E: ExtBasis, keep: Sequence[int]) -> ExtBasis:
    """Keep the tangent directions with the given 0-based indices."""
    return E.restrict(keep)


# ---------------------------------------------------------------------------
# hull

@dataclass
class HullConfig:
    order: int = 5
    frame: str = "cup"                      # "cup" or "canonical"
    pins: Dict[MultiIndex, YonedaCochain] = field(default_factory=dict)
    tangent_names: Optional[Sequence[str]] = None


@dataclass
class DefiningEntry:
    m: MultiIndex
    cochain: YonedaCochain
    source: str                             # "basis", "differential", "zero", "pinned", "solved"


@dataclass
class OrderLog:
    order: int
    bprime: List[MultiIndex]
    classes: Dict[MultiIndex, List[Fraction]]
    basis: List[MultiIndex]
    chosen: Dict[MultiIndex, str]

    @property
    def quiet(self) -> bool:
        return (not any(any(c) for c in self.classes.values())
                and all(s == "zero" for s in self.chosen.values()))


@dataclass
class RelationAlgebra:
    d: int
    r: int
    order: int
    relations: List[Series]
    quotient: LocalQuotient
    log: List[OrderLog]
    defining_system: Dict[MultiIndex, DefiningEntry]
    stabilized: bool
    stabilized_order: Optional[int]
    identically_zero_cups: bool
    tangent_names: List[str]

    def relation_strings(self, nonzero_only: bool = True) -> List[str]:
        out = []
        for f in self.relations:
            if f or not nonzero_only:
                out.append(series_str(f, self.tangent_names))
        return out

    @property
    def smooth_to_order(self) -> bool:
        return not any(self.relations)


def series_str(f: Series, names: Sequence[str]) -> str:
    return format_terms(f, names, degrevlex_key)


class _Products:
    """Memoized cup products of defining-system members."""

    def __init__(self):
        self.cache: Dict[Tuple[MultiIndex, MultiIndex], YonedaCochain] = {}

    def get(self, ds, m1, m2) -> YonedaCochain:
        key = (m1, m2)
        if key not in self.cache:
            self.cache[key] = cup(ds[m1].cochain, ds[m2].cochain)
        return self.cache[key]


def _square(E: ExtBasis, ds: Dict[MultiIndex, DefiningEntry], k: int, prods: _Products):
    """sum alpha_{m1} alpha_{m2} u^{m1+m2} over |m1 + m2| <= k, grouped by exponent."""
    out: Dict[MultiIndex, YonedaCochain] = {}
    keys = sorted(ds, key=lambda m: (sum(m), m))
    for m1 in keys:
        for m2 in keys:
            if sum(m1) + sum(m2) > k:
                continue
            if ds[m1].cochain.is_zero() or ds[m2].cochain.is_zero():
                continue
            e = tuple(a + b for a, b in zip(m1, m2))
            w = prods.get(ds, m1, m2)
            out[e] = out[e] + w if e in out else w
    return out


def _combine(E: ExtBasis, terms: Dict[MultiIndex, YonedaCochain],
             coeff) -> Dict[MultiIndex, YonedaCochain]:
    """Regroup sum_e w_e u^e by the coordinates coeff(e) -> {m: c}."""
    out: Dict[MultiIndex, YonedaCochain] = {}
    for e, w in sorted(terms.items()):
        for m, c in coeff(e).items():
            if c:
                v = w.scale(c)
                out[m] = out[m] + v if m in out else v
    return out


def _check_pin(E: ExtBasis, m: MultiIndex, pin: YonedaCochain, b: YonedaCochain) -> YonedaCochain:
    res = E.res
    comps = dict(pin.components)
    if 1 not in comps:
        raise FixtureError(f"pin {m}: component 1 missing")
    try:
        if 2 not in comps and res.length >= 2:
            comps[2] = lift_matrix_or_raise(res.d(1), -b[2] - comps[1] @ res.d(2),
                                            f"pin {m}: no component 2 solves d(alpha) = -b")
        for n in range(3, res.length + 1):
            if n not in comps:
                comps[n] = lift_matrix_or_raise(res.d(n - 1), -b[n] - comps[n - 1] @ res.d(n),
                                                f"pin {m}: cannot extend to component {n}")
    except NotACocycle as exc:
        raise FixtureError(str(exc)) from None
    xi = YonedaCochain(1, comps)
    diff = yoneda_diff(E.C, xi) + b
    for n, mat in sorted(diff.components.items()):
        if mat:
            (i, j), p = sorted(mat.entries.items())[0]
            raise FixtureError(f"pin {m}: d(alpha) + b is nonzero in component {n} at "
                               f"({i + 1}, {j + 1}): {p}")
    return xi


def compute_hull(E: ExtBasis, config: Optional[HullConfig] = None) -> RelationAlgebra:
    config = config or HullConfig()
    N = config.order
    if N < 2:
        raise ValueError("hull order must be at least 2")
    d = len(E.ext1)
    names = list(config.tangent_names or [f"t{j + 1}" for j in range(d)])
    if len(names) != d:
        raise ValueError(f"{len(names)} tangent names for {d} tangent directions")
    if config.frame == "cup" and E.ext2_dim:
        E = E.restrict(range(d))          # shallow copy; reframe must not leak to the caller
        use_cup_frame(E)
    elif config.frame not in ("cup", "canonical"):
        raise ValueError(f"unknown Ext^2 frame {config.frame!r}")
    r = E.ext2_dim
    zero = (0,) * d
    ds: Dict[MultiIndex, DefiningEntry] = {zero: DefiningEntry(zero, E.C.differential(), "differential")}
    for j, a in enumerate(E.ext1):
        ds[unit(d, j)] = DefiningEntry(unit(d, j), a, "basis")
    Q = LocalQuotient.initial(d, r)
    prods = _Products()
    log: List[OrderLog] = []
    ident_zero = True
    for k in range(2, N + 1):
        Bp = Q.next_Bprime()
        sq = _square(E, ds, k, prods)
        rcoords = _combine(E, sq, lambda e: Q.r_witness(e).basis)
        for m in Q.Bbar():
            w = rcoords.get(m)
            if w is not None and not w.is_zero():
                raise HullError(f"order {k}: the square does not vanish in S_{k} at u^{m}")
        ys = {n: rcoords.get(n, E.C.zero(2)) for n in Bp}
        if k == 2:
            ident_zero = all(y.vanishes(2) for y in ys.values())
        classes: Dict[MultiIndex, List[Fraction]] = {}
        for n in Bp:
            try:
                classes[n] = E.class_of(ys[n])
            except NotACocycle as exc:
                raise HullError(f"order {k}: y({n}) is not a cocycle: {exc}") from exc
        corrections = [{n: classes[n][j] for n in Bp if classes[n][j]} for j in range(r)]
        Qn = extend_quotient(Q, corrections)
        scoords = _combine(E, sq, lambda e: Qn.s_witness(e).basis)
        chosen: Dict[MultiIndex, str] = {}
        for m in Qn.B[k]:
            b = scoords.get(m, E.C.zero(2))
            if m in config.pins:
                xi, how = _check_pin(E, m, config.pins[m], b), "pinned"
            elif b.is_zero():
                xi, how = E.C.zero(1), "zero"
            else:
                xi = E.solve_coboundary(-b)
                how = "solved"
                if xi is None:
                    raise HullError(f"order {k}: b_{m} is not a coboundary")
            if how != "zero" and xi.is_zero():
                how = "zero"
            chosen[m] = how
            ds[m] = DefiningEntry(m, xi, how)
        log.append(OrderLog(k, Bp, classes, list(Qn.B[k]), chosen))
        Q = Qn
    stab_order = None
    stabilized = False
    for i in range(1, len(log)):
        if log[i].quiet and log[i - 1].quiet:
            stabilized = True
            stab_order = log[i - 1].order
            break
    return RelationAlgebra(d, r, N, [dict(f) for f in Q.f], Q, log, ds, stabilized, stab_order,
                           ident_zero, names)


# ---------------------------------------------------------------------------
# versal family

@dataclass
class VersalFamily:
    differentials: Dict[int, Dict[MultiIndex, GradedMatrix]]
    flat: bool
    ideal: Optional[List[str]] = None
    ideal_ring: Optional[PolyRing] = None
    ideal_polys: Optional[list] = None


def _joint_ring(res_ring: PolyRing, names: Sequence[str]) -> PolyRing:
    return PolyRing(list(res_ring.variables) + list(names), res_ring.order)


def versal_family(E: ExtBasis, RA: RelationAlgebra) -> VersalFamily:
    res = E.res
    ds = RA.defining_system
    diffs: Dict[int, Dict[MultiIndex, GradedMatrix]] = {}
    for n in range(1, res.length + 1):
        diffs[n] = {m: e.cochain[n] for m, e in sorted(ds.items()) if not e.cochain[n].is_zero()}
    Q = RA.quotient
    sq = _square(E, ds, Q.order, _Products())
    scoords = _combine(E, sq, lambda e: Q.s_witness(e).basis)
    flat = all(w.is_zero() for w in scoords.values())
    ideal = polys = ring = None
    if res.spec is not None and res.spec.cyclic and res.length >= 1:
        ring = _joint_ring(res.ring.ambient(), RA.tangent_names)
        nx = res.ring.nvars
        polys = []
        for c in range(res.module(1).rank):
            terms: Dict[Tuple[int, ...], Fraction] = {}
            for m, e in ds.items():
                p = e.cochain[1][0, c]
                for ex, coef in p.terms.items():
                    key = tuple(ex) + tuple(m)
                    terms[key] = terms.get(key, 0) + coef
            polys.append(ring.poly({k: v for k, v in terms.items() if v}, reduce=False))
        ideal = [str(p) for p in polys]
    return VersalFamily(diffs, flat, ideal, ring, polys)


def smoothness_report(RA: RelationAlgebra) -> str:
    if RA.d == 0:
        return "tangent space is zero; the hull is k and the point is (vacuously) smooth"
    if RA.smooth_to_order:
        return (f"unobstructed to order {RA.order}; the hull is formally smooth to this order; "
                "the corresponding point of the moduli is expected to be nonsingular if "
                "stabilization holds (no sheaf computation performed)")
    quad = [{e: c for e, c in f.items() if sum(e) == 2} for f in RA.relations]
    from .linalg import rank
    nq = rank([q for q in quad if q])
    return (f"obstructed: {sum(1 for f in RA.relations if f)} nonzero relations to order {RA.order}, "
            f"{nq} independent quadratic parts")
