"""Command line front end: ``gmmp <command> <file> [options]``.

Exit codes: 0 success, 2 usage (including unreadable files), 3 parse error,
4 validation error, 5 internal assertion failure.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

from .algebra import DegreeError
from .hom_ext import ExtBasis, FixtureError, NotACocycle
from .massey import (HullConfig, HullError, census, compute_hull, cup_table, series_str,
                     smoothness_report, versal_family)
from .parser import ParseError
from .pipeline import fixture_pins, load_ext, resolve
from .problem import Problem, ProblemError, load_problem
from .resolution import ResolutionError, ZeroModuleError

COMMANDS = ("resolve", "ext", "cup-table", "hull", "versal")

EXIT_USAGE, EXIT_PARSE, EXIT_VALIDATION, EXIT_INTERNAL = 2, 3, 4, 5

_VALIDATION = (ProblemError, FixtureError, NotACocycle, ZeroModuleError, ResolutionError,
               DegreeError, IndexError)


@dataclass
class RunOptions:
    order: Optional[int] = None
    restrict: Optional[List[int]] = None          # 1-based
    fixture_basis: Optional[str] = None
    monomial_order: Optional[str] = None
    length: Optional[int] = None


@dataclass
class Report:
    command: str
    data: Dict[str, object] = field(default_factory=dict)
    text: List[str] = field(default_factory=list)
    timing: Dict[str, float] = field(default_factory=dict)

    def to_json(self) -> Dict[str, object]:
        out = {"command": self.command, "betti": None, "ext1_dim": None, "ext2_dim": None,
               "cup_census": None, "relations": None, "versal_ideal": None,
               "stabilized": None, "order": None}
        out.update(self.data)
        out["timing"] = {k: round(v, 4) for k, v in self.timing.items()}
        return out

    def json_text(self, timing: bool = True) -> str:
        d = self.to_json()
        if not timing:
            d.pop("timing")
        return json.dumps(d, indent=2, sort_keys=True) + "\n"


class _Clock:
    def __init__(self, report: Report):
        self.report = report
        self.t = time.perf_counter()

    def lap(self, name: str):
        now = time.perf_counter()
        self.report.timing[name] = now - self.t
        self.t = now


def _restricted(E: ExtBasis, restrict: Optional[Sequence[int]]) -> ExtBasis:
    if not restrict:
        return E
    for k in restrict:
        if not 1 <= k <= len(E.ext1):
            raise ProblemError(f"restrict index {k} is outside 1..{len(E.ext1)}")
    return E.restrict([k - 1 for k in restrict])


def run(command: str, P: Problem, opts: Optional[RunOptions] = None) -> Report:
    """Execute one pipeline stage and everything it depends on."""
    if command not in COMMANDS:
        raise ValueError(f"unknown command {command!r}")
    opts = opts or RunOptions()
    rep = Report(command)
    clock = _Clock(rep)
    stage = COMMANDS.index(command)

    res = resolve(P, opts.length)
    clock.lap("resolve")
    b = res.betti()
    rep.data["betti"] = b.to_json()
    rep.data["resolution_complete"] = res.complete
    rep.text.append("Betti table" + ("" if res.complete else " (truncated)"))
    rep.text += ["  " + line for line in str(b).splitlines()]
    if stage == 0:
        return rep

    E, fx = load_ext(P, res, opts.fixture_basis)
    clock.lap("ext")
    rep.data["ext1_dim"] = E.ext1_dim
    rep.data["ext2_dim"] = E.ext2_dim
    if fx is not None:
        rep.data["ext1_basis"] = list(fx.names)
    rep.text.append(f"dim Ext^1_0(M, M) = {E.ext1_dim}")
    rep.text.append(f"dim Ext^2_0(M, M) = {E.ext2_dim}")
    if fx is not None:
        rep.text.append(f"Ext^1 basis injected from fixture ({len(fx.names)} elements)")
    if stage == 1:
        return rep

    if stage == 2:
        table = cup_table(E)
        clock.lap("cup_table")
        cen = census(table)
        rep.data["cup_census"] = cen.to_json()
        nz = [{"n": list(v.n), "class": [str(c) for c in v.classes]}
              for v in table if not v.cohomologically_zero]
        rep.data["nonzero_cups"] = nz
        rep.text.append(f"cup products: {cen.total} total, {cen.identically_zero} identically zero, "
                        f"{cen.cohomologically_zero} cohomologically zero, {cen.nonzero} nonzero")
        names = list(fx.names) if fx is not None else [f"v{j + 1}" for j in range(len(E.ext1))]
        rep.text.append("nonzero classes (w1.. is the Ext^2 frame):")
        for v in table:
            if not v.cohomologically_zero:
                rep.text.append(f"  {_pair(v.n, names)} = {_class_str(v.classes)}")
        return rep

    restrict = opts.restrict if opts.restrict is not None else P.restrict
    Er = _restricted(E, restrict)
    names = P.tangent_names
    if names is not None and len(names) != len(Er.ext1):
        names = None
    pins = {}
    if fx is not None and fx.pins:
        if restrict is None:
            raise ProblemError("fixture pins need a restriction (they index restricted directions)")
        pins = fixture_pins(Er, fx)
        for m in pins:
            if len(m) != len(Er.ext1):
                raise ProblemError(f"pin {m} has {len(m)} indices, expected {len(Er.ext1)}")
    N = opts.order if opts.order is not None else P.hull_order
    RA = compute_hull(Er, HullConfig(order=N, pins=pins, tangent_names=names))
    clock.lap("hull")
    rels = RA.relation_strings()
    rep.data.update({
        "tangent_dim": RA.d,
        "obstruction_dim": RA.r,
        "order": RA.order,
        "relations": rels,
        "stabilized": RA.stabilized,
        "stabilized_order": RA.stabilized_order,
        "identically_zero_cups": RA.identically_zero_cups,
        "smoothness": smoothness_report(RA),
        "defining_system": {_mi(m): how for L in RA.log for m, how in L.chosen.items()},
        "massey_classes": {_mi(n): [str(c) for c in cls]
                           for L in RA.log for n, cls in L.classes.items()},
    })
    if restrict:
        rep.text.append("restricted to Ext^1 basis elements " + ",".join(map(str, restrict)))
    rep.text.append(f"tangent dim {RA.d}, obstruction dim {RA.r}, order {RA.order}")
    rep.text.append("relations:" if rels else "relations: none")
    rep.text += [f"  f{j + 1} = {series_str(f, RA.tangent_names)}"
                 for j, f in enumerate(RA.relations) if f]
    if RA.stabilized:
        rep.text.append(f"stabilized from order {RA.stabilized_order}")
    else:
        rep.text.append("not stabilized within the computed order")
    rep.text.append(rep.data["smoothness"])
    if stage == 3:
        return rep

    VF = versal_family(Er, RA)
    clock.lap("versal")
    rep.data["versal_ideal"] = VF.ideal
    rep.data["flat"] = VF.flat
    rep.text.append(f"flatness d^2 = 0 modulo (f) + m^{RA.order + 1}: {'ok' if VF.flat else 'FAILED'}")
    if VF.ideal is not None:
        rep.text.append("versal ideal:")
        rep.text += [f"  {g}" for g in VF.ideal]
    if not VF.flat:
        raise HullError("versal family fails the flatness check")
    return rep


def _mi(m) -> str:
    return "(" + ",".join(map(str, m)) + ")"


def _class_str(c) -> str:
    out = ""
    for i, x in enumerate(c):
        if not x:
            continue
        sign = "-" if x < 0 else "+"
        mag = "" if abs(x) == 1 else f"{abs(x)}*"
        out += f" {sign} {mag}w{i + 1}" if out else f"{'-' if x < 0 else ''}{mag}w{i + 1}"
    return out or "0"


def _pair(n, names: Sequence[str]) -> str:
    idx = [j for j, x in enumerate(n) for _ in range(x)]
    return "*".join(names[j] for j in idx)


def _parse_restrict(s: str) -> List[int]:
    try:
        out = [int(x) for x in s.replace(" ", "").split(",") if x]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad index list {s!r}") from None
    if not out:
        raise argparse.ArgumentTypeError("empty index list")
    return out


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="gmmp", description="Graded module deformation engine")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("file", help="problem file")
    ap.add_argument("--order", type=int, help="hull order N (default: problem file, else 5)")
    ap.add_argument("--restrict", type=_parse_restrict, help="1-based Ext^1 indices, e.g. 22,23,24")
    ap.add_argument("--fixture-basis", help="inject an explicit Ext^1 basis")
    ap.add_argument("--json", metavar="OUT", help="write the JSON report here ('-' for stdout)")
    ap.add_argument("--monomial-order", choices=("degrevlex", "lex"))
    ap.add_argument("--length", type=int, help="resolution length (default 3)")
    ap.add_argument("--quiet", action="store_true", help="suppress the text report")
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    opts = RunOptions(args.order, args.restrict, args.fixture_basis, args.monomial_order, args.length)
    try:
        P = load_problem(args.file, order=args.monomial_order)
        rep = run(args.command, P, opts)
    except OSError as e:
        print(f"gmmp: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as e:
        print(f"gmmp: parse error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except _VALIDATION as e:
        print(f"gmmp: invalid input: {e}", file=sys.stderr)
        return EXIT_VALIDATION
    except (HullError, AssertionError) as e:
        print(f"gmmp: internal check failed: {e}", file=sys.stderr)
        return EXIT_INTERNAL
    except ValueError as e:
        print(f"gmmp: invalid input: {e}", file=sys.stderr)
        return EXIT_VALIDATION
    if not args.quiet and args.json != "-":
        print("\n".join(rep.text))
    if args.json == "-":
        sys.stdout.write(rep.json_text())
    elif args.json:
        with open(args.json, "w") as fh:
            fh.write(rep.json_text())
    return 0


if __name__ == "__main__":
    sys.exit(main())
