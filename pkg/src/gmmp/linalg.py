"""Sparse exact row reduction over Q with provenance tags.

Vectors are dicts ``coordinate -> Fraction``.  Every inserted row may carry a
tag (another sparse dict) recording which original vectors it is built from,
so reductions return both a remainder and the combination that was removed.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Callable, Dict, Hashable, Iterable, List, Optional, Tuple

SVec = Dict[Hashable, Fraction]


def axpy(y: SVec, a, x: SVec) -> None:
    """y += a * x, in place, dropping zeros."""
    for k, v in x.items():
        nv = y.get(k, 0) + a * v
        if nv:
            y[k] = nv
        else:
            y.pop(k, None)


def scaled(x: SVec, a) -> SVec:
    if not a:
        return {}
    return {k: a * v for k, v in x.items()}


class EchelonSpace:
    """Reduced row echelon form maintained incrementally.

    ``order`` maps a coordinate to a sort key; the pivot of a new row is its
    smallest coordinate under that key.  Rows never contain another row's
    pivot, so a single pass reduces any vector.
    """

    def __init__(self, order: Optional[Callable] = None):
        self.order = order or (lambda k: k)
        self.rows: Dict[Hashable, Tuple[SVec, SVec]] = {}
        self._holders: Dict[Hashable, set] = {}

    def __len__(self):
        return len(self.rows)

    @property
    def pivots(self) -> List[Hashable]:
        return sorted(self.rows, key=self.order)

    def reduce(self, vec: SVec) -> Tuple[SVec, SVec]:
        """Return (remainder, coeffs) with vec = sum coeffs[t] * original_t + remainder."""
        rem = dict(vec)
        coeffs: SVec = {}
        for p in [k for k in rem if k in self.rows]:
            c = rem.get(p)
            if not c:
                continue
            row, tag = self.rows[p]
            axpy(rem, -c, row)
            axpy(coeffs, c, tag)
        return rem, coeffs

    def contains(self, vec: SVec) -> bool:
        return not self.reduce(vec)[0]

    def insert(self, vec: SVec, tag: Optional[SVec] = None) -> Optional[SVec]:
        """Add a row.  Returns None if it was independent, otherwise the
        dependency ``tag - coeffs`` (a kernel element in tag coordinates)."""
        tag = dict(tag or {})
        rem, coeffs = self.reduce(vec)
        if not rem:
            axpy(tag, -1, coeffs)
            return tag
        axpy(tag, -1, coeffs)
        p = min(rem, key=self.order)
        inv = 1 / Fraction(rem[p])
        row = scaled(rem, inv)
        rtag = scaled(tag, inv)
        # back-substitute into rows that contain the new pivot
        for q in list(self._holders.get(p, ())):
            qrow, qtag = self.rows[q]
            c = qrow.get(p)
            if not c:
                continue
            for k in row:
                if k not in qrow:
                    self._holders.setdefault(k, set()).add(q)
            axpy(qrow, -c, row)
            axpy(qtag, -c, rtag)
        self._holders.pop(p, None)
        self.rows[p] = (row, rtag)
        for k in row:
            if k != p:
                self._holders.setdefault(k, set()).add(p)
        return None


def kernel_and_image(images: Iterable[Tuple[Hashable, SVec]], order=None):
    """Kernel basis (in source coordinates) and echelon image of a linear map
    given as (source_coordinate, image_vector) pairs."""
    space = EchelonSpace(order)
    kernel = []
    for key, img in images:
        dep = space.insert(img, {key: Fraction(1)})
        if dep is not None:
            kernel.append(dep)
    return kernel, space


def solve(space: EchelonSpace, rhs: SVec) -> Optional[SVec]:
    """A preimage of rhs in tag coordinates, or None when rhs is not in the span."""
    rem, coeffs = space.reduce(rhs)
    if rem:
        return None
    return coeffs


def rank(vectors: Iterable[SVec], order=None) -> int:
    space = EchelonSpace(order)
    for v in vectors:
        space.insert(v)
    return len(space)
