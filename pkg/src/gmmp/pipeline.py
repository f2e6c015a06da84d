"""Glue from problem files to engine objects."""
from __future__ import annotations

from typing import Dict, List, Optional, Tuple

from .hom_ext import ExtBasis, FixtureError, YonedaCochain
from .problem import (Fixture, Problem, ProblemError, build_differentials, fixture_matrix,
                      load_fixture)
from .resolution import ModuleSpec, Resolution, minimal_resolution


def module_spec(P: Problem) -> ModuleSpec:
    if P.module_kind == "cyclic":
        return ModuleSpec.cyclic_module(P.ring, P.generators)
    return ModuleSpec.presented(P.ring, P.presentation)


def resolve(P: Problem, length: Optional[int] = None) -> Resolution:
    spec = module_spec(P)
    length = P.length if length is None else length
    given = None
    if P.differentials:
        given = build_differentials(P, spec.presentation.target)
    return minimal_resolution(spec, length, given=given)


def fixture_cochains(E: ExtBasis, fx: Fixture) -> Tuple[List[str], List[YonedaCochain]]:
    res, ring = E.res, E.ring
    out = []
    for name in fx.names:
        a1 = fixture_matrix(ring, fx.alpha1[name], res.module(1), res.module(0), f"{name} component 1")
        a2 = None
        if name in fx.alpha2:
            a2 = fixture_matrix(ring, fx.alpha2[name], res.module(2), res.module(1),
                                f"{name} component 2")
        try:
            xi = E.complete_cocycle(a1, a2)
        except Exception as exc:
            raise FixtureError(f"{name}: {exc}") from None
        E.validate_level1(xi, name)
        out.append(xi)
    for name in fx.alpha2:
        if name not in fx.alpha1:
            raise ProblemError(f"component 2 given for unknown basis element {name}")
    return list(fx.names), out


def ext_with_fixture(E: ExtBasis, fx: Fixture) -> ExtBasis:
    names, cochains = fixture_cochains(E, fx)
    return E.with_basis(cochains, names)


def fixture_pins(E: ExtBasis, fx: Fixture) -> Dict[Tuple[int, ...], YonedaCochain]:
    res, ring = E.res, E.ring
    pins = {}
    for m, comps in sorted(fx.pins.items()):
        cs = {}
        for n, rows in sorted(comps.items()):
            if n not in (1, 2):
                raise ProblemError(f"system {m}: only components 1 and 2 may be given")
            cs[n] = fixture_matrix(ring, rows, res.module(n), res.module(n - 1),
                                   f"system {m} component {n}")
        pins[m] = YonedaCochain(1, cs)
    return pins


def load_ext(P: Problem, res: Resolution, fixture_path: Optional[str] = None,
             use_fixture: bool = True):
    """ExtBasis for P, with the fixture basis injected when one is configured.

    Returns (E, fixture or None).
    """
    E = ExtBasis(res)
    path = fixture_path or (P.fixture_basis if use_fixture else None)
    fx = None
    if path:
        fx = load_fixture(path, P.ring)
        E = ext_with_fixture(E, fx)
    return E, fx
