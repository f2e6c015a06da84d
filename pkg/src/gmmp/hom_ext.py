"""Degree-zero Yoneda complex of a resolution, Ext^1 / Ext^2 and cup products.

A level-p cochain xi has components xi_n : L_n -> L_{n-p} (matrices), and

    (delta xi)_n = d_{n-p} xi_n - (-1)^p xi_{n-1} d_n,       (a b)_n = a_{n-q} b_n

for b of level q.  Cohomology is computed in Hom_{R,0}(L_., M) where every
graded piece is a finite-dimensional space with coordinates
(target row, source column, monomial); all questions there are exact linear
algebra over Q.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .algebra import (Exp, FreeModule, GradedMatrix, Polynomial, PolyRing, Terms,
                      monomials_of_degree, terms_add, terms_mul)
from .groebner import GroebnerBasis, lift, submodule_basis
from .linalg import EchelonSpace, axpy, kernel_and_image
from .resolution import Resolution

Coord = Tuple[int, int, Exp]


class MissingComponent(KeyError):
    """A cochain component needed by an operation is outside the truncation."""


class NotACocycle(ValueError):
    pass


class FixtureError(ValueError):
    """An injected Ext^1 representative fails validation."""


# ---------------------------------------------------------------------------
# cochains

@dataclass(frozen=True)
class YonedaCochain:
    level: int
    components: Dict[int, GradedMatrix] = field(hash=False)

    def __getitem__(self, n: int) -> GradedMatrix:
        try:
            return self.components[n]
        except KeyError:
            raise MissingComponent(f"level-{self.level} cochain has no component {n} "
                                   f"(available: {sorted(self.components)})") from None

    def _zip(self, other: "YonedaCochain"):
        if self.level != other.level:
            raise ValueError(f"level mismatch: {self.level} vs {other.level}")
        if set(self.components) != set(other.components):
            raise MissingComponent(f"component ranges differ: {sorted(self.components)} vs "
                                   f"{sorted(other.components)}")
        return sorted(self.components)

    def __add__(self, other):
        return YonedaCochain(self.level, {n: self[n] + other[n] for n in self._zip(other)})

    def __sub__(self, other):
        return YonedaCochain(self.level, {n: self[n] - other[n] for n in self._zip(other)})

    def __neg__(self):
        return YonedaCochain(self.level, {n: -m for n, m in self.components.items()})

    def scale(self, c) -> "YonedaCochain":
        return YonedaCochain(self.level, {n: m.scale(c) for n, m in self.components.items()})

    def is_zero(self) -> bool:
        return all(m.is_zero() for m in self.components.values())

    def vanishes(self, n: int) -> bool:
        """Component n is zero; absent components (Hom into a zero module) count as zero."""
        m = self.components.get(n)
        return m is None or m.is_zero()

    def __eq__(self, other):
        if not isinstance(other, YonedaCochain):
            return NotImplemented
        return self.level == other.level and self.components == other.components

    def __hash__(self):
        return hash((self.level, tuple(sorted((n, hash(m)) for n, m in self.components.items()))))


class YonedaComplex:
    """Hom^._{R,0}(L., L.) truncated at the resolution length."""

    def __init__(self, res: Resolution):
        self.res = res
        self.ring = res.ring
        self.top = res.length

    def zero(self, level: int) -> YonedaCochain:
        return YonedaCochain(level, {
            n: GradedMatrix.zero(self.ring, self.res.module(n), self.res.module(n - level))
            for n in range(max(level, 0), self.top + 1) if n - level >= 0})

    def identity(self) -> YonedaCochain:
        return YonedaCochain(0, {n: GradedMatrix.identity(self.ring, self.res.module(n))
                                 for n in range(0, self.top + 1)})

    def differential(self) -> YonedaCochain:
        """The level-1 cochain {d_n}, i.e. alpha_0 of a defining system."""
        return YonedaCochain(1, {n: self.res.d(n) for n in range(1, self.top + 1)})

    def cochain(self, level: int, comps: Dict[int, GradedMatrix]) -> YonedaCochain:
        for n, m in comps.items():
            if m.source != self.res.module(n) or m.target != self.res.module(n - level):
                raise ValueError(f"component {n} has the wrong shape for level {level}")
        return YonedaCochain(level, dict(comps))


def yoneda_diff(C: YonedaComplex, xi: YonedaCochain, upto: Optional[int] = None) -> YonedaCochain:
    """delta_p(xi)_n = d_{n-p} xi_n - (-1)^p xi_{n-1} d_n for n = p+1 .. upto."""
    p = xi.level
    upto = C.top if upto is None else upto
    sign = -1 if p % 2 == 0 else 1
    out = {}
    for n in range(p + 1, upto + 1):
        term2 = xi[n - 1] @ C.res.d(n)
        if n - p >= 1:
            term1 = C.res.d(n - p) @ xi[n]
            out[n] = term1 + term2 if sign == 1 else term1 - term2
        else:
            out[n] = term2 if sign == 1 else -term2
    return YonedaCochain(p + 1, out)


def cup(a: YonedaCochain, b: YonedaCochain, upto: Optional[int] = None) -> YonedaCochain:
    """(a b)_n = a_{n-q} b_n, on every n where both components exist."""
    p, q = a.level, b.level
    ns = [n for n in sorted(b.components) if n >= p + q and (n - q) in a.components]
    if upto is not None:
        ns = [n for n in ns if n <= upto]
        missing = [n for n in range(p + q, upto + 1) if n not in ns]
        if missing:
            raise MissingComponent(f"cup needs components for n = {missing}")
    return YonedaCochain(p + q, {n: a[n - q] @ b[n] for n in ns})


# ---------------------------------------------------------------------------
# finite-dimensional Hom pieces

@lru_cache(maxsize=None)
def _monos_desc(nvars: int, degree: int, order: str) -> Tuple[Exp, ...]:
    from .algebra import degrevlex_key, lex_key
    key = degrevlex_key if order == "degrevlex" else lex_key
    return tuple(sorted(monomials_of_degree(nvars, degree), key=key, reverse=True))


@lru_cache(maxsize=None)
def _mono_rank(nvars: int, degree: int, order: str) -> Dict[Exp, int]:
    return {e: i for i, e in enumerate(_monos_desc(nvars, degree, order))}


class _HomPiece:
    """Coordinates of Hom_{R,0}(L_a, T) with T = M (mod ``gb``) or a free L_b."""

    def __init__(self, ring: PolyRing, src: FreeModule, tgt: FreeModule,
                 gb: Optional[GroebnerBasis]):
        self.ring, self.src, self.tgt, self.gb = ring, src, tgt, gb
        coords: List[Coord] = []
        for i, a in enumerate(tgt.twists):
            for j, b in enumerate(src.twists):
                deg = b - a
                if deg < 0:
                    continue
                for e in _monos_desc(ring.nvars, deg, ring.order):
                    if gb is not None:
                        if gb.is_standard(i, e):
                            coords.append((i, j, e))
                    elif ring.is_standard(e):
                        coords.append((i, j, e))
        self.coords = coords
        self.index = {c: k for k, c in enumerate(coords)}

    def order(self, c: Coord):
        return self.index[c]

    def __len__(self):
        return len(self.coords)

    def matrix(self, vec: Dict[Coord, Fraction]) -> GradedMatrix:
        entries: Dict[Tuple[int, int], Terms] = {}
        for (i, j, e), c in vec.items():
            entries.setdefault((i, j), {})[e] = Fraction(c)
        ring = self.ring
        return GradedMatrix(ring, self.src, self.tgt,
                            {k: Polynomial(ring, t) for k, t in entries.items()}, check=False)


def _columns_terms(M: GradedMatrix) -> Dict[int, Dict[Tuple[int, Exp], Fraction]]:
    cols: Dict[int, Dict[Tuple[int, Exp], Fraction]] = {}
    for (i, j), p in M.entries.items():
        col = cols.setdefault(j, {})
        for e, c in p.terms.items():
            col[(i, e)] = c
    return cols


def nf_coords(M: GradedMatrix, gb: GroebnerBasis) -> Dict[Coord, Fraction]:
    """Coordinates of a map into L_0 viewed as a map into M = L_0 / im(gb)."""
    out: Dict[Coord, Fraction] = {}
    for j, col in _columns_terms(M).items():
        for (i, e), c in gb.reduce_vec(col).items():
            out[(i, j, e)] = c
    return out


def exact_coords(M: GradedMatrix) -> Dict[Coord, Fraction]:
    return {(i, j, e): c for (i, j), p in M.entries.items() for e, c in p.terms.items()}


# ---------------------------------------------------------------------------
# Ext

@dataclass
class Ext2Frame:
    """Coordinates y_1..y_r on Ext^2 with representative 2-cocycles."""

    basis: List[Dict[Coord, Fraction]]        # canonical complement rows (Hom(L2, M) coords)
    pivots: List[Coord]
    frame: List[List[Fraction]]               # frame vector l in canonical coordinates
    solver: EchelonSpace = field(repr=False)
    representatives: List[YonedaCochain] = field(default_factory=list)

    @property
    def dim(self) -> int:
        return len(self.basis)


class ExtBasis:
    """Ext^1 and Ext^2 of M = coker(d_1) in internal degree 0."""

    def __init__(self, res: Resolution, compute_ext2: bool = True):
        self.res = res
        self.ring = res.ring
        self.C = YonedaComplex(res)
        self.gbM = submodule_basis(self.ring, res.d(1))
        self.hom = {a: _HomPiece(self.ring, res.module(a), res.module(0), self.gbM)
                    for a in range(0, 4)}
        self._z1, self._b1, self._q1 = self._cohomology(1)
        self.ext1: List[YonedaCochain] = [self.complete_cocycle(self.hom[1].matrix(v))
                                          for v in self._q1[0]]
        self._solver = None
        self.ext2: Optional[Ext2Frame] = None
        if compute_ext2:
            self._init_ext2()

    # -- linear maps on Hom(L_a, M) -------------------------------------
    def _pullback_images(self, a: int):
        """(coord, NF(phi o d_{a+1})) for every unit phi of Hom(L_a, M)."""
        D = self.res.d(a + 1)
        rows: Dict[int, List[Tuple[int, Polynomial]]] = {}
        for (j, k), p in D.entries.items():
            rows.setdefault(j, []).append((k, p))
        for (i, j, e) in self.hom[a].coords:
            img: Dict[Coord, Fraction] = {}
            for k, p in rows.get(j, ()):
                col = {(i, exp): c for exp, c in terms_mul({e: Fraction(1)}, p.terms).items()}
                for (ii, ee), c in self.gbM.reduce_vec(col).items():
                    img[(ii, k, ee)] = c
            yield (i, j, e), img

    def _cohomology(self, a: int):
        if a not in self.hom:
            raise MissingComponent(f"Ext^{a} needs L_{a + 1}; resolution length is {self.res.length}")
        if a + 1 > self.res.length and not self.res.complete:
            raise MissingComponent(f"Ext^{a} needs d_{a + 1}; resolution truncated at {self.res.length}")
        order_a = self.hom[a].order
        zs, _ = kernel_and_image(self._pullback_images(a))
        B = EchelonSpace(order_a)
        if a >= 1:
            for _, img in self._pullback_images(a - 1):
                B.insert(img)
        Q = EchelonSpace(order_a)
        for z in zs:
            rem, _ = B.reduce(z)
            if rem:
                Q.insert(rem)
        piv = Q.pivots
        basis = [Q.rows[p][0] for p in piv]
        return zs, B, (basis, piv)

    @property
    def ext1_dim(self) -> int:
        return len(self.ext1)

    @property
    def ext2_dim(self) -> int:
        return self.ext2.dim if self.ext2 else 0

    # -- level-1 cocycles ------------------------------------------------
    def complete_cocycle(self, a1: GradedMatrix, a2: Optional[GradedMatrix] = None) -> YonedaCochain:
        """Extend alpha_1 (and optionally alpha_2) to a level-1 cocycle up to the truncation."""
        comps = {1: a1}
        if self.res.length >= 2:
            if a2 is None:
                a2 = lift_matrix_or_raise(self.res.d(1), -(a1 @ self.res.d(2)),
                                          "alpha_1 is not a cocycle in Hom(L1, M)")
            comps[2] = a2
        for n in range(3, self.res.length + 1):
            comps[n] = lift_matrix_or_raise(self.res.d(n - 1), -(comps[n - 1] @ self.res.d(n)),
                                            f"cannot extend the cocycle to component {n}")
        return YonedaCochain(1, comps)

    def class1_of(self, xi: YonedaCochain) -> List[Fraction]:
        """Coordinates of a 1-cocycle in the canonical Ext^1 basis."""
        v = nf_coords(xi[1], self.gbM)
        rem, _ = self._b1.reduce(v)
        basis, piv = self._q1
        coords = [rem.get(p, Fraction(0)) for p in piv]
        for c, row in zip(coords, basis):
            axpy(rem, -c, row)
        if rem:
            raise NotACocycle("the cochain is not a cocycle in Hom(L1, M)")
        return coords

    # -- Ext^2 -------------------------------------------------------------
    def _init_ext2(self):
        if self.res.length < 2:
            self.ext2 = Ext2Frame([], [], [], EchelonSpace())
            return
        if self.res.length < 3 and not self.res.complete:
            raise MissingComponent("Ext^2 needs a resolution of length >= 3")
        _, B2, (basis, piv) = self._cohomology(2)
        self._b2 = B2
        r = len(basis)
        frame = [[Fraction(int(k == l)) for k in range(r)] for l in range(r)]
        self.ext2 = self._make_frame(basis, piv, frame)

    def _make_frame(self, basis, piv, frame) -> Ext2Frame:
        solver = EchelonSpace()
        for l, f in enumerate(frame):
            dep = solver.insert({k: c for k, c in enumerate(f) if c}, {l: Fraction(1)})
            if dep is not None:
                raise ValueError("Ext^2 frame vectors are dependent")
        reps = []
        for f in frame:
            vec: Dict[Coord, Fraction] = {}
            for k, c in enumerate(f):
                if c:
                    axpy(vec, c, basis[k])
            reps.append(self.complete_cocycle2(self.hom[2].matrix(vec)))
        return Ext2Frame(basis, piv, frame, solver, reps)

    def complete_cocycle2(self, w2: GradedMatrix) -> YonedaCochain:
        comps = {2: w2}
        for n in range(3, self.res.length + 1):
            # (delta w)_n = d_{n-2} w_n - w_{n-1} d_n = 0
            rhs = comps[n - 1] @ self.res.d(n)
            if n - 2 >= 1:
                comps[n] = lift_matrix_or_raise(self.res.d(n - 2), rhs,
                                                f"cannot extend the 2-cocycle to component {n}")
        return YonedaCochain(2, comps)

    def _canonical_class(self, omega: YonedaCochain) -> List[Fraction]:
        E = self.ext2
        if 2 not in omega.components and self.res.length < 2:
            return [Fraction(0)] * E.dim
        w2 = omega[2]
        if self.res.length >= 3:
            if nf_coords(w2 @ self.res.d(3), self.gbM):
                raise NotACocycle("omega_2 d_3 is not zero in Hom(L3, M)")
        v = nf_coords(w2, self.gbM)
        if E.dim == 0:
            return []
        rem, _ = self._b2.reduce(v)
        coords = [rem.get(p, Fraction(0)) for p in E.pivots]
        for c, row in zip(coords, E.basis):
            axpy(rem, -c, row)
        if rem:
            raise NotACocycle("omega is not a cocycle")
        return coords

    def class_of(self, omega: YonedaCochain) -> List[Fraction]:
        """Coordinates of the class of a 2-cocycle in the current Ext^2 frame."""
        if omega.level != 2:
            raise ValueError("class_of expects a level-2 cochain")
        E = self.ext2
        if E is None:
            raise MissingComponent("Ext^2 was not computed")
        if self.res.length < 2:
            return []
        c = self._canonical_class(omega)
        if not any(c):
            return [Fraction(0)] * E.dim
        sol = E.solver.reduce({k: v for k, v in enumerate(c) if v})[1]
        return [sol.get(l, Fraction(0)) for l in range(E.dim)]

    def reframe(self, cocycles: Sequence[YonedaCochain]) -> List[int]:
        """Put the independent classes among ``cocycles`` first in the Ext^2 frame.

        Returns the indices of the cocycles that became frame vectors.
        """
        E = self.ext2
        chosen, frame = [], []
        space = EchelonSpace()
        for idx, w in enumerate(cocycles):
            c = self._canonical_class(w)
            v = {k: x for k, x in enumerate(c) if x}
            if v and space.insert(v) is None:
                chosen.append(idx)
                frame.append(c)
        for k in range(E.dim):
            if space.insert({k: Fraction(1)}) is None:
                frame.append([Fraction(int(j == k)) for j in range(E.dim)])
        self.ext2 = self._make_frame(E.basis, E.pivots, frame)
        return chosen

    # -- coboundaries -------------------------------------------------------
    def _coboundary_solver(self) -> EchelonSpace:
        """Echelon form of (xi_1, xi_2) -> d_1 xi_2 + xi_1 d_2 on Hom_0(L2, L0)."""
        if self._solver is not None:
            return self._solver
        res, ring = self.res, self.ring
        d1, d2 = res.d(1), res.d(2)
        S = EchelonSpace()
        h2 = _HomPiece(ring, res.module(2), res.module(1), None)
        d1_cols: Dict[int, List[Tuple[int, Polynomial]]] = {}
        for (r, i), p in d1.entries.items():
            d1_cols.setdefault(i, []).append((r, p))
        for (i, j, e) in h2.coords:
            img: Dict[Coord, Fraction] = {}
            for r, p in d1_cols.get(i, ()):
                for ee, c in ring.reduce_terms(terms_mul(p.terms, {e: Fraction(1)})).items():
                    img[(r, j, ee)] = img.get((r, j, ee), 0) + c
            S.insert({k: v for k, v in img.items() if v}, {("b", i, j, e): Fraction(1)})
        h1 = _HomPiece(ring, res.module(1), res.module(0), None)
        d2_rows: Dict[int, List[Tuple[int, Polynomial]]] = {}
        for (j, k), p in d2.entries.items():
            d2_rows.setdefault(j, []).append((k, p))
        for (i, j, e) in h1.coords:
            img = {}
            for k, p in d2_rows.get(j, ()):
                for ee, c in ring.reduce_terms(terms_mul({e: Fraction(1)}, p.terms)).items():
                    img[(i, k, ee)] = img.get((i, k, ee), 0) + c
            S.insert({k: v for k, v in img.items() if v}, {("a", i, j, e): Fraction(1)})
        self._solver = S
        return S

    def solve_coboundary(self, omega: YonedaCochain) -> Optional[YonedaCochain]:
        """A level-1 xi with delta(xi) = omega on all components, or None."""
        res, ring = self.res, self.ring
        if res.length < 2:
            return self.C.zero(1) if omega.is_zero() else None
        S = self._coboundary_solver()
        rem, sol = S.reduce(exact_coords(omega[2]))
        if rem:
            return None
        a1: Dict[Tuple[int, int], Terms] = {}
        a2: Dict[Tuple[int, int], Terms] = {}
        for (kind, i, j, e), c in sol.items():
            (a1 if kind == "a" else a2).setdefault((i, j), {})[e] = c
        xi1 = GradedMatrix(ring, res.module(1), res.module(0),
                           {k: Polynomial(ring, t) for k, t in a1.items()}, check=False)
        xi2 = GradedMatrix(ring, res.module(2), res.module(1),
                           {k: Polynomial(ring, t) for k, t in a2.items()}, check=False)
        comps = {1: xi1, 2: xi2}
        for n in range(3, res.length + 1):
            # d_{n-1} xi_n + xi_{n-1} d_n = omega_n
            comps[n] = lift_matrix_or_raise(res.d(n - 1), omega[n] - comps[n - 1] @ res.d(n),
                                            f"coboundary equation has no solution in component {n}")
        xi = YonedaCochain(1, comps)
        return xi

    # -- fixtures ------------------------------------------------------------
    def validate_level1(self, xi: YonedaCochain, name: str = "cochain") -> None:
        d = yoneda_diff(self.C, xi)
        for n, m in sorted(d.components.items()):
            if m:
                (i, j), p = sorted(m.entries.items())[0]
                raise FixtureError(f"{name}: (delta alpha)_{n} is nonzero at entry "
                                   f"({i + 1}, {j + 1}): {p}")

    def with_basis(self, cochains: Sequence[YonedaCochain], names: Optional[Sequence[str]] = None,
                   require_full: bool = False) -> "ExtBasis":
        """A copy whose Ext^1 basis is the given (validated) cocycles."""
        names = list(names or [f"v{k + 1}" for k in range(len(cochains))])
        space = EchelonSpace()
        for xi, nm in zip(cochains, names):
            self.validate_level1(xi, nm)
            c = self.class1_of(xi)
            if space.insert({k: v for k, v in enumerate(c) if v}) is not None:
                raise FixtureError(f"{nm}: class is zero or dependent on earlier basis elements")
        if require_full and len(cochains) != self.ext1_dim:
            raise FixtureError(f"fixture has {len(cochains)} elements, dim Ext^1 = {self.ext1_dim}")
        other = object.__new__(ExtBasis)
        other.__dict__.update(self.__dict__)
        other.ext1 = list(cochains)
        return other

    def restrict(self, keep: Sequence[int]) -> "ExtBasis":
        """Sub-basis of Ext^1 given by 0-based indices."""
        for k in keep:
            if not 0 <= k < len(self.ext1):
                raise IndexError(f"restriction index {k + 1} out of range 1..{len(self.ext1)}")
        other = object.__new__(ExtBasis)
        other.__dict__.update(self.__dict__)
        other.ext1 = [self.ext1[k] for k in keep]
        return other


def lift_matrix_or_raise(A: GradedMatrix, B: GradedMatrix, msg: str) -> GradedMatrix:
    from .groebner import lift_matrix
    X = lift_matrix(A, B)
    if X is None:
        raise NotACocycle(msg)
    return X
