"""Line-oriented text format for presentations and fibration recipes.

Example::

    max_degree 20

    algebra B
      gen y:2 b:3 c:3 u:4 n:5
      d n = b*c + u*y

    fibration F
      base B
      fiber even 2
      u = u

Polynomial expressions use ``*`` for products, ``+``/``-``, ``^`` for powers
and integer or ``p/q`` rational coefficients.  Generator names are
identifiers, optionally ending in apostrophes (``z'``).  ``#`` starts a
comment.  Parsing then printing a document reproduces it exactly (documents
are stored in canonical form).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .core import Poly, Presentation
from .fibration import (EvenSphere, FibrationModel, OddSphere, ProjectiveLike,
                        build_fibration_model)


class DslError(Exception):
    pass


class DslSyntaxError(DslError):
    def __init__(self, message: str, line: int, col: int = 0):
        super().__init__(f"line {line}: {message}")
        self.line = line
        self.col = col


class DslSemanticError(DslError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass
class AlgebraBlock:
    name: str
    generators: list[tuple[str, int]]
    differentials: dict[str, Poly]  # canonical Polys over this block's stub

    def stub(self, truncation_degree: int = 20) -> Presentation:
        return Presentation(self.generators, truncation_degree=truncation_degree,
                            check=False)


@dataclass
class FibrationBlock:
    name: str
    base: str
    fiber: tuple  # ("even", n) | ("odd", n) | ("projective", n, d)
    u: Poly       # over the base block's stub


@dataclass
class DslDocument:
    max_degree: int | None = None
    blocks: list = field(default_factory=list)

    def block(self, name: str):
        for b in self.blocks:
            if b.name == name:
                return b
        raise DslSemanticError(f"no block named {name!r}", 0)

    def algebras(self) -> list[AlgebraBlock]:
        return [b for b in self.blocks if isinstance(b, AlgebraBlock)]

    def fibrations(self) -> list[FibrationBlock]:
        return [b for b in self.blocks if isinstance(b, FibrationBlock)]


_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<comment>\#.*)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*'*)
  | (?P<int>\d+)
  | (?P<sym>[:=+\-*^/])
""", re.VERBOSE)


def _tokenize(text: str, lineno: int) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise DslSyntaxError(f"unexpected character {text[pos]!r}",
                                 lineno, pos + 1)
        if m.lastgroup not in ("ws", "comment"):
            tokens.append((m.lastgroup, m.group(), pos + 1))
        pos = m.end()
    return tokens


class _ExprParser:
    """Recursive-descent parser for polynomial expressions."""

    def __init__(self, tokens, lineno: int, pres: Presentation):
        self.tokens = tokens
        self.lineno = lineno
        self.pres = pres
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def take(self):
        tok = self.peek()
        if tok is None:
            raise DslSyntaxError("unexpected end of expression", self.lineno)
        self.i += 1
        return tok

    def parse(self) -> Poly:
        p = self.expr()
        tok = self.peek()
        if tok is not None:
            raise DslSyntaxError(f"unexpected token {tok[1]!r}", self.lineno,
                                 tok[2])
        return p

    def expr(self) -> Poly:
        sign = 1
        tok = self.peek()
        if tok and tok[1] in "+-":
            self.take()
            sign = -1 if tok[1] == "-" else 1
        out = self.term().scale(sign)
        while True:
            tok = self.peek()
            if tok is None or tok[1] not in "+-":
                return out
            self.take()
            sign = -1 if tok[1] == "-" else 1
            out = out + self.term().scale(sign)

    def term(self) -> Poly:
        out = self.factor()
        while True:
            tok = self.peek()
            if tok is None or tok[1] != "*":
                return out
            self.take()
            out = self.pres.mul(out, self.factor())

    def factor(self) -> Poly:
        kind, text, col = self.take()
        if kind == "int":
            coeff = Fraction(int(text))
            tok = self.peek()
            if tok and tok[1] == "/":
                self.take()
                dkind, dtext, dcol = self.take()
                if dkind != "int":
                    raise DslSyntaxError("expected integer denominator",
                                         self.lineno, dcol)
                coeff /= int(dtext)
            return self.pres.one().scale(coeff)
        if kind == "ident":
            if text not in self.pres.by_name:
                raise DslSemanticError(f"unknown generator {text!r}",
                                       self.lineno)
            exp = 1
            tok = self.peek()
            if tok and tok[1] == "^":
                self.take()
                ekind, etext, ecol = self.take()
                if ekind != "int":
                    raise DslSyntaxError("expected integer exponent",
                                         self.lineno, ecol)
                exp = int(etext)
            return self.pres.power(self.pres.generator(text), exp)
        raise DslSyntaxError(f"unexpected token {text!r}", self.lineno, col)


def parse(text: str) -> DslDocument:
    doc = DslDocument()
    current: AlgebraBlock | FibrationBlock | None = None
    pending: list[tuple[int, list, str]] = []  # deferred d/u lines per block

    def finish_block():
        nonlocal pending
        if isinstance(current, AlgebraBlock):
            stub = current.stub()
            for lineno, tokens, gen_name in pending:
                if gen_name not in stub.by_name:
                    raise DslSemanticError(
                        f"differential on unknown generator {gen_name!r}", lineno)
                current.differentials[gen_name] = \
                    _ExprParser(tokens, lineno, stub).parse()
        pending = []

    for lineno, raw in enumerate(text.splitlines(), start=1):
        tokens = _tokenize(raw, lineno)
        if not tokens:
            continue
        kind, head, col = tokens[0]
        if kind != "ident":
            raise DslSyntaxError(f"unexpected token {head!r}", lineno, col)
        rest = tokens[1:]
        if head == "max_degree":
            if len(rest) != 1 or rest[0][0] != "int":
                raise DslSyntaxError("max_degree takes one integer", lineno)
            doc.max_degree = int(rest[0][1])
        elif head == "algebra":
            finish_block()
            if len(rest) != 1 or rest[0][0] != "ident":
                raise DslSyntaxError("algebra takes one name", lineno)
            current = AlgebraBlock(rest[0][1], [], {})
            doc.blocks.append(current)
        elif head == "fibration":
            finish_block()
            if len(rest) != 1 or rest[0][0] != "ident":
                raise DslSyntaxError("fibration takes one name", lineno)
            current = FibrationBlock(rest[0][1], "", (), Poly.zero())
            doc.blocks.append(current)
        elif head == "gen":
            if not isinstance(current, AlgebraBlock):
                raise DslSyntaxError("gen outside an algebra block", lineno)
            i = 0
            while i < len(rest):
                if (i + 2 >= len(rest) or rest[i][0] != "ident"
                        or rest[i + 1][1] != ":" or rest[i + 2][0] != "int"):
                    raise DslSyntaxError("expected name:degree", lineno,
                                         rest[i][2])
                current.generators.append((rest[i][1], int(rest[i + 2][1])))
                i += 3
        elif head == "d":
            if not isinstance(current, AlgebraBlock):
                raise DslSyntaxError("d outside an algebra block", lineno)
            if len(rest) < 2 or rest[0][0] != "ident" or rest[1][1] != "=":
                raise DslSyntaxError("expected: d NAME = expression", lineno)
            pending.append((lineno, rest[2:], rest[0][1]))
        elif head == "base":
            if not isinstance(current, FibrationBlock):
                raise DslSyntaxError("base outside a fibration block", lineno)
            if len(rest) != 1 or rest[0][0] != "ident":
                raise DslSyntaxError("base takes one name", lineno)
            current.base = rest[0][1]
        elif head == "fiber":
            if not isinstance(current, FibrationBlock):
                raise DslSyntaxError("fiber outside a fibration block", lineno)
            if not rest or rest[0][1] not in ("even", "odd", "projective"):
                raise DslSyntaxError("fiber kind must be even, odd or projective",
                                     lineno)
            want = 3 if rest[0][1] == "projective" else 2
            if len(rest) != want or any(t[0] != "int" for t in rest[1:]):
                raise DslSyntaxError("bad fiber parameters", lineno)
            current.fiber = (rest[0][1], *(int(t[1]) for t in rest[1:]))
        elif head == "u":
            if not isinstance(current, FibrationBlock):
                raise DslSyntaxError("u outside a fibration block", lineno)
            if not rest or rest[0][1] != "=":
                raise DslSyntaxError("expected: u = expression", lineno)
            base_block = doc.block(current.base) if current.base else None
            if not isinstance(base_block, AlgebraBlock):
                raise DslSemanticError("fibration needs a base algebra before u",
                                       lineno)
            current.u = _ExprParser(rest[1:], lineno, base_block.stub()).parse()
        else:
            raise DslSyntaxError(f"unknown directive {head!r}", lineno, col)
    finish_block()
    return doc


def print_document(doc: DslDocument) -> str:
    lines: list[str] = []
    if doc.max_degree is not None:
        lines.append(f"max_degree {doc.max_degree}")
        lines.append("")
    for block in doc.blocks:
        if isinstance(block, AlgebraBlock):
            lines.append(f"algebra {block.name}")
            if block.generators:
                gens = " ".join(f"{n}:{d}" for n, d in block.generators)
                lines.append(f"  gen {gens}")
            stub = block.stub()
            for name, _ in block.generators:
                p = block.differentials.get(name, Poly.zero())
                if not p.is_zero:
                    lines.append(f"  d {name} = {stub.poly_str(p)}")
        else:
            lines.append(f"fibration {block.name}")
            lines.append(f"  base {block.base}")
            lines.append("  fiber " + " ".join(str(x) for x in block.fiber))
            base = doc.block(block.base)
            lines.append(f"  u = {base.stub().poly_str(block.u)}")
        lines.append("")
    while lines and lines[-1] == "":
        lines.pop()
    return "\n".join(lines) + "\n"


def document_of(pres: Presentation, name: str = "A") -> DslDocument:
    """Single-algebra document for an existing presentation."""
    block = AlgebraBlock(
        name,
        [(g.name, g.degree) for g in pres.generators],
        {g.name: pres.differential[g.name] for g in pres.generators
         if not pres.differential[g.name].is_zero},
    )
    return DslDocument(max_degree=pres.truncation_degree, blocks=[block])


def default_truncation_degree(generators: list[tuple[str, int]]) -> int:
    if not generators:
        return 2
    return 2 * max(d for _, d in generators) + 2


def to_presentation(doc: DslDocument, name: str | None = None,
                    max_degree: int | None = None) -> Presentation:
    """Build the named (or only) algebra block into a validated presentation."""
    algebras = doc.algebras()
    if not algebras:
        raise DslSemanticError("document contains no algebra block", 0)
    if name is None:
        block = algebras[0]
    else:
        block = doc.block(name)
        if not isinstance(block, AlgebraBlock):
            raise DslSemanticError(f"{name!r} is not an algebra block", 0)
    N = max_degree or doc.max_degree or default_truncation_degree(block.generators)
    return Presentation(block.generators, block.differentials,
                        truncation_degree=N)


def to_fibration(doc: DslDocument, name: str,
                 max_degree: int | None = None) -> FibrationModel:
    block = doc.block(name)
    if not isinstance(block, FibrationBlock):
        raise DslSemanticError(f"{name!r} is not a fibration block", 0)
    if not block.base or not block.fiber:
        raise DslSemanticError(f"fibration {name!r} needs base and fiber", 0)
    base = to_presentation(doc, block.base, max_degree)
    kind_name = block.fiber[0]
    if kind_name == "even":
        kind = EvenSphere(block.fiber[1])
    elif kind_name == "odd":
        kind = OddSphere(block.fiber[1])
    else:
        kind = ProjectiveLike(block.fiber[1], block.fiber[2])
    return build_fibration_model(base, kind, block.u)
