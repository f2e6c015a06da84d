"""Line-oriented problem and fixture files.

Problem file (``#`` starts a comment, blank lines are ignored)::

    ring x0 x1 x2 x3
    order degrevlex                 # optional: degrevlex | lex
    quotient                        # optional block, one polynomial per line
      ...
    end
    module cyclic                   # one generator per line
      x1^2 - x0*x2
      ...
    end
    module presented 0 0            # row twists of L0, then matrix rows
      x, y
    end
    differential 2                  # optional explicit d_k rows (k = 1, 2, ...)
      x0, -x2, ...
    end
    length 3
    hull-order 5
    restrict 22,23,24               # 1-based
    tangent-names t1 t2 t3
    fixture-basis basis24.fix       # relative to the problem file

Fixture file::

    Hom(L1, L0)
    basis v1 = 0, 0, 0, x0*x3^3, x2*x3^3, x1*x3^3      # one row per line of L0
    component v22 2                                    # alpha_2 : L2 -> L1
      -x3, 0, ...
    end
    system (0,2,0) 1 = 0, 0, 0, 0, 0, -x0*x2*x3^2      # pinned defining-system member
    system (0,2,0) 2
      ...
    end

A single-line ``= row`` form is accepted wherever the matrix has one row;
block form (rows until ``end``) works everywhere.
"""
from __future__ import annotations

import os
import re
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .algebra import DegreeError, FreeModule, GradedMatrix, Polynomial, PolyRing
from .parser import ParseError, parse_poly


class ProblemError(ValueError):
    """Well-formed input that fails validation."""


@dataclass
class _Line:
    no: int
    text: str
    indent: int = 0


def _lines(src: str) -> List[_Line]:
    out = []
    for i, raw in enumerate(src.splitlines(), start=1):
        t = raw.split("#", 1)[0]
        if t.strip():
            out.append(_Line(i, t.strip(), len(t) - len(t.lstrip())))
    return out


def _split_row(line: _Line) -> List[Tuple[str, int]]:
    """Comma separated cells with their 1-based column offsets."""
    cells, start = [], 0
    text = line.text
    depth = 0
    for i, ch in enumerate(text + ","):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "," and depth == 0:
            cells.append((text[start:i], start))
            start = i + 1
    return cells


def _parse_one(ring: PolyRing, line: _Line) -> Polynomial:
    try:
        return parse_poly(line.text, ring, line.no)
    except ParseError as e:
        raise ParseError(e.msg, line.no, line.indent + e.col) from None


def _parse_cells(ring: PolyRing, line: _Line, text: Optional[str] = None, offset: int = 0) -> List[Polynomial]:
    ln = _Line(line.no, text if text is not None else line.text)
    offset += line.indent
    out = []
    for cell, col in _split_row(ln):
        s = cell.strip()
        if not s:
            raise ParseError("empty matrix entry", line.no, offset + col + 1)
        lead = len(cell) - len(cell.lstrip())
        try:
            out.append(parse_poly(s, ring, line.no))
        except ParseError as e:
            raise ParseError(e.msg, line.no, offset + col + lead + e.col) from None
    return out


def _block(lines: List[_Line], i: int) -> Tuple[List[_Line], int]:
    body = []
    while i < len(lines):
        if lines[i].text == "end":
            return body, i + 1
        body.append(lines[i])
        i += 1
    raise ParseError("block is missing its 'end'", lines[-1].no if lines else 1, 1)


@dataclass
class Problem:
    ring: PolyRing
    module_kind: str
    generators: List[Polynomial] = field(default_factory=list)
    presentation: Optional[GradedMatrix] = None
    differentials: Dict[int, List[List[Polynomial]]] = field(default_factory=dict)
    length: int = 3
    hull_order: int = 5
    restrict: Optional[List[int]] = None
    tangent_names: Optional[List[str]] = None
    fixture_basis: Optional[str] = None
    path: Optional[str] = None


def load_problem(path: str, order: Optional[str] = None) -> Problem:
    with open(path) as fh:
        src = fh.read()
    P = parse_problem(src, order=order)
    P.path = path
    if P.fixture_basis and not os.path.isabs(P.fixture_basis):
        P.fixture_basis = os.path.join(os.path.dirname(os.path.abspath(path)), P.fixture_basis)
    return P


def parse_problem(src: str, order: Optional[str] = None) -> Problem:
    lines = _lines(src)
    variables = None
    mono_order = "degrevlex"
    quotient_lines: List[_Line] = []
    module = None
    opts: Dict[str, object] = {}
    diffs: Dict[int, List[_Line]] = {}
    i = 0
    while i < len(lines):
        ln = lines[i]
        head, _, rest = ln.text.partition(" ")
        rest = rest.strip()
        i += 1
        if head == "ring":
            variables = rest.split()
            if not variables:
                raise ParseError("ring needs at least one variable", ln.no, 1)
        elif head == "order":
            mono_order = rest
        elif head == "quotient":
            quotient_lines, i = _block(lines, i)
        elif head == "module":
            parts = rest.split()
            if not parts or parts[0] not in ("cyclic", "presented"):
                raise ParseError("expected 'module cyclic' or 'module presented <twists>'", ln.no, 8)
            body, i = _block(lines, i)
            module = (parts[0], parts[1:], body, ln)
        elif head == "differential":
            try:
                k = int(rest)
            except ValueError:
                raise ParseError("differential index must be an integer", ln.no, 14) from None
            diffs[k], i = _block(lines, i)
        elif head in ("length", "hull-order"):
            try:
                opts[head] = int(rest)
            except ValueError:
                raise ParseError(f"{head} expects an integer", ln.no, len(head) + 2) from None
        elif head == "restrict":
            try:
                opts[head] = [int(x) for x in re.split(r"[,\s]+", rest) if x]
            except ValueError:
                raise ParseError("restrict expects integers", ln.no, 10) from None
        elif head == "tangent-names":
            opts[head] = rest.split()
        elif head == "fixture-basis":
            opts[head] = rest
        else:
            raise ParseError(f"unknown directive {head!r}", ln.no, 1)
    if variables is None:
        raise ParseError("missing 'ring' line", 1, 1)
    if module is None:
        raise ParseError("missing 'module' block", 1, 1)
    if order is not None:
        mono_order = order
    if mono_order not in ("degrevlex", "lex"):
        raise ProblemError(f"unknown monomial order {mono_order!r}")
    base = PolyRing(variables, mono_order)
    quotient = []
    for ql in quotient_lines:
        q = _parse_one(base, ql)
        if not q.is_homogeneous():
            raise ProblemError(f"line {ql.no}: quotient generator {q} is not homogeneous")
        quotient.append(q)
    ring = PolyRing(variables, mono_order, quotient) if quotient else base
    kind, margs, body, mline = module
    P = Problem(ring=ring, module_kind=kind)
    if kind == "cyclic":
        for bl in body:
            g = _parse_one(ring, bl)
            if not g.is_homogeneous():
                raise ProblemError(f"line {bl.no}: generator {g} is not homogeneous")
            P.generators.append(g)
    else:
        try:
            twists = [int(x) for x in margs]
        except ValueError:
            raise ParseError("row twists must be integers", mline.no, 1) from None
        rows = [_parse_cells(ring, bl) for bl in body]
        if len(rows) != len(twists):
            raise ProblemError(f"line {mline.no}: {len(twists)} row twists but {len(rows)} rows")
        try:
            P.presentation = GradedMatrix.from_rows(ring, rows, target_twists=twists)
        except DegreeError as e:
            raise ProblemError(f"presentation: {e}") from None
    for k, body in sorted(diffs.items()):
        P.differentials[k] = [_parse_cells(ring, bl) for bl in body]
    P.length = int(opts.get("length", 3))
    P.hull_order = int(opts.get("hull-order", 5))
    P.restrict = opts.get("restrict")
    P.tangent_names = opts.get("tangent-names")
    P.fixture_basis = opts.get("fixture-basis")
    return P


def build_differentials(P: Problem, L0: FreeModule) -> List[GradedMatrix]:
    """Explicit d_1, d_2, ... as graded matrices, twists inferred from L0 upward."""
    out = []
    tgt = L0
    ks = sorted(P.differentials)
    if ks and ks != list(range(1, len(ks) + 1)):
        raise ProblemError(f"explicit differentials must be d1..dk, got {ks}")
    for k in ks:
        rows = P.differentials[k]
        if len(rows) != tgt.rank:
            raise ProblemError(f"d{k} has {len(rows)} rows, L{k - 1} has rank {tgt.rank}")
        try:
            M = GradedMatrix.from_rows(P.ring, rows, target_twists=list(tgt.twists))
        except DegreeError as e:
            raise ProblemError(f"d{k}: {e}") from None
        out.append(M)
        tgt = M.source
    return out


# ---------------------------------------------------------------------------
# fixtures

@dataclass
class Fixture:
    names: List[str]
    alpha1: Dict[str, List[List[Polynomial]]]
    alpha2: Dict[str, List[List[Polynomial]]]
    pins: Dict[Tuple[int, ...], Dict[int, List[List[Polynomial]]]]


_MI = re.compile(r"^\(\s*(\d+(?:\s*,\s*\d+)*)\s*\)\s*(\d+)\s*(=\s*(.*))?$")


def parse_fixture(src: str, ring: PolyRing) -> Fixture:
    lines = _lines(src)
    if not lines or not re.match(r"^Hom\(\s*L1\s*,\s*(L0|R)\s*\)$", lines[0].text):
        raise ParseError("fixture must start with 'Hom(L1, L0)'", lines[0].no if lines else 1, 1)
    fx = Fixture([], {}, {}, {})
    i = 1
    while i < len(lines):
        ln = lines[i]
        i += 1
        head, _, rest = ln.text.partition(" ")
        rest = rest.strip()
        if head == "basis":
            name, eq, row = rest.partition("=")
            name = name.strip()
            if eq:
                off = ln.text.index("=") + 1
                mat = [_parse_cells(ring, ln, row, off)]
            else:
                body, i = _block(lines, i)
                mat = [_parse_cells(ring, b) for b in body]
            if name in fx.alpha1:
                raise ProblemError(f"line {ln.no}: duplicate basis element {name}")
            fx.names.append(name)
            fx.alpha1[name] = mat
        elif head == "component":
            m = re.match(r"^(\S+)\s+(\d+)\s*(=\s*(.*))?$", rest)
            if not m:
                raise ParseError("expected 'component <name> <n>'", ln.no, 11)
            name, n = m.group(1), int(m.group(2))
            if n != 2:
                raise ProblemError(f"line {ln.no}: only component 2 may be given")
            if m.group(3):
                mat = [_parse_cells(ring, ln, m.group(4), ln.text.index("=") + 1)]
            else:
                body, i = _block(lines, i)
                mat = [_parse_cells(ring, b) for b in body]
            fx.alpha2[name] = mat
        elif head == "system":
            m = _MI.match(rest)
            if not m:
                raise ParseError("expected 'system (a,b,...) <n>'", ln.no, 8)
            idx = tuple(int(x) for x in m.group(1).split(","))
            n = int(m.group(2))
            if m.group(3):
                mat = [_parse_cells(ring, ln, m.group(4), ln.text.index("=") + 1)]
            else:
                body, i = _block(lines, i)
                mat = [_parse_cells(ring, b) for b in body]
            fx.pins.setdefault(idx, {})[n] = mat
        else:
            raise ParseError(f"unknown fixture directive {head!r}", ln.no, 1)
    return fx


def load_fixture(path: str, ring: PolyRing) -> Fixture:
    with open(path) as fh:
        return parse_fixture(fh.read(), ring)


def fixture_matrix(ring: PolyRing, rows: List[List[Polynomial]], src: FreeModule, tgt: FreeModule,
                   what: str) -> GradedMatrix:
    if len(rows) != tgt.rank or any(len(r) != src.rank for r in rows):
        shape = f"{len(rows)}x{len(rows[0]) if rows else 0}"
        raise ProblemError(f"{what}: shape {shape}, expected {tgt.rank}x{src.rank}")
    entries = {(i, j): p for i, r in enumerate(rows) for j, p in enumerate(r) if p.terms}
    try:
        return GradedMatrix(ring, src, tgt, entries)
    except DegreeError as e:
        raise ProblemError(f"{what}: {e}") from None
