"""Recursive-descent parser for intersection-calculus expressions.

Grammar (whitespace insensitive):

    expr    := term (('+' | '-') term)*
    term    := factor ('*' factor)*
    factor  := primary ('^' INT)?
    primary := '(' expr ')' | NUMBER | atom
    atom    := 'Gamma' '<' INT '>'
             | 'Delta' '<' INT '>'
             | 'q' '[' blocks ']' '(' keys ')'
             | ('F' | 'NS') '(' profile ')' ['@irr']
             | NAME '(' INT ')'          slot class, e.g. L(2)
             | NAME                      registered character constant

Node profiles use the rendered syntax: `F(1|23:{4}(omega)|{5})` lists
the colliding slots split across the two branches, then the side
blocks on each component.  The short form `F(13:)` with no branch bar
stands for the sum of all complete unit fillings of the remaining
slots.  Slot digits are read individually, so levels stay below ten.

The parser validates every slot and level index against the declared
level and reports error positions on the original text.
"""

from __future__ import annotations

from fractions import Fraction

from .charpoly import KNOWN_CHARACTERS, CharacterPolynomial
from .surface import (
    FIBRE,
    LCLASS,
    OMEGA,
    POINT,
    SurfaceClass,
    SurfaceGeometry,
    default_geometry,
)
from .tautring import DiagMonomial, NodeClass, TautExpr, expand_monomial, integrate_word

__all__ = [
    "ParseError",
    "parse",
    "to_words",
    "evaluate_normal",
    "evaluate_integral",
]


class ParseError(ValueError):
    def __init__(self, message: str, pos: int, text: str):
        line = text.count("\n", 0, pos) + 1
        col = pos - (text.rfind("\n", 0, pos) + 1) + 1
        super().__init__(f"{message} at line {line}, column {col}")
        self.pos = pos


_PUNCT = set("<>()[]{}|:,@+-*^/")


def _tokenize(text: str):
    tokens = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(("INT", text[i:j], i))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(("NAME", text[i:j], i))
            i = j
            continue
        if ch in _PUNCT:
            tokens.append((ch, ch, i))
            i += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", i, text)
    tokens.append(("EOF", "", n))
    return tokens


_CLASS_BY_NAME = {"omega": OMEGA, "L": LCLASS, "f": FIBRE, "pt": POINT}


def _slot_class(name: str) -> SurfaceClass:
    return _CLASS_BY_NAME.get(name) or SurfaceClass.divisor(name)


class _Parser:
    def __init__(self, text: str, level: int):
        self.text = text
        self.tokens = _tokenize(text)
        self.idx = 0
        self.level = level

    def peek(self, offset=0):
        return self.tokens[min(self.idx + offset, len(self.tokens) - 1)]

    def next(self):
        tok = self.tokens[self.idx]
        self.idx += 1
        return tok

    def expect(self, kind):
        tok = self.next()
        if tok[0] != kind:
            raise ParseError(f"expected {kind!r}, found {tok[1]!r}", tok[2],
                             self.text)
        return tok

    def fail(self, message):
        tok = self.peek()
        raise ParseError(message, tok[2], self.text)

    # -- grammar -------------------------------------------------------

    def parse(self):
        node = self.expr()
        tok = self.peek()
        if tok[0] != "EOF":
            self.fail(f"unexpected trailing input {tok[1]!r}")
        return node

    def expr(self):
        if self.peek()[0] == "-":
            self.next()
            node = ("neg", self.term())
        else:
            if self.peek()[0] == "+":
                self.next()
            node = self.term()
        while self.peek()[0] in ("+", "-"):
            op = self.next()[0]
            rhs = self.term()
            node = ("add", node, rhs) if op == "+" else ("sub", node, rhs)
        return node

    def term(self):
        node = self.factor()
        while self.peek()[0] == "*":
            self.next()
            node = ("mul", node, self.factor())
        return node

    def factor(self):
        node = self.primary()
        if self.peek()[0] == "^":
            self.next()
            tok = self.expect("INT")
            node = ("pow", node, int(tok[1]))
        return node

    def primary(self):
        tok = self.peek()
        if tok[0] == "(":
            self.next()
            node = self.expr()
            self.expect(")")
            return node
        if tok[0] == "INT":
            return self.number()
        if tok[0] == "NAME":
            return self.atom()
        self.fail(f"expected expression, found {tok[1]!r}")

    def number(self):
        tok = self.expect("INT")
        value = Fraction(int(tok[1]))
        if self.peek()[0] == "/":
            self.next()
            den = self.expect("INT")
            if int(den[1]) == 0:
                raise ParseError("division by zero", den[2], self.text)
            value /= int(den[1])
        return ("num", value)

    def atom(self):
        tok = self.expect("NAME")
        name = tok[1]
        if name in ("Gamma", "Delta"):
            self.expect("<")
            k = self.index_in("INT", 1, self.level, "level")
            self.expect(">")
            return ("gamma" if name == "Gamma" else "delta", k)
        if name == "q":
            return self.diag_atom()
        if name in ("F", "NS"):
            return self.node_atom(gamma_power=0 if name == "F" else 1)
        if self.peek()[0] == "(":
            self.next()
            slot = self.index_in("INT", 1, self.level, "slot")
            self.expect(")")
            return ("class", name, slot)
        if name not in KNOWN_CHARACTERS:
            raise ParseError(f"unknown character {name!r}", tok[2], self.text)
        return ("char", name)

    def index_in(self, kind, lo, hi, what):
        tok = self.expect(kind)
        value = int(tok[1])
        if not lo <= value <= hi:
            raise ParseError(
                f"{what} index {value} outside 1..{hi}", tok[2], self.text)
        return value

    def diag_atom(self):
        self.expect("[")
        blocks = [self.slot_set()]
        while self.peek()[0] == ",":
            self.next()
            blocks.append(self.slot_set())
        self.expect("]")
        self.expect("(")
        keys = [self.block_key()]
        while self.peek()[0] == ",":
            self.next()
            keys.append(self.block_key())
        self.expect(")")
        if len(keys) != len(blocks):
            self.fail("one decoration per block is required")
        return ("diag", tuple(zip(blocks, keys)))

    def slot_set(self):
        self.expect("{")
        slots = [self.index_in("INT", 1, self.level, "slot")]
        while self.peek()[0] == ",":
            self.next()
            slots.append(self.index_in("INT", 1, self.level, "slot"))
        self.expect("}")
        return tuple(slots)

    def block_key(self):
        tok = self.next()
        if tok[0] == "INT" and tok[1] == "1":
            return "1"
        if tok[0] == "NAME":
            return tok[1]
        raise ParseError(f"expected a block decoration, found {tok[1]!r}",
                         tok[2], self.text)

    def node_atom(self, gamma_power: int):
        self.expect("(")
        first = self.digit_slots()
        split = None
        tail = ()
        if self.peek()[0] == "|":
            self.next()
            tail = self.digit_slots()
            split = len(first)
        self.expect(":")
        jblocks, kblocks = (), ()
        reducible = True
        if self.peek()[0] != ")":
            jblocks = self.side_blocks()
        if self.peek()[0] == "|":
            self.next()
            kblocks = self.side_blocks()
        elif split is not None:
            # explicit profiles always carry the branch bar for the
            # second side unless marked irreducible
            reducible = False
        self.expect(")")
        flavor = "reducible"
        if self.peek()[0] == "@":
            self.next()
            tag = self.expect("NAME")
            if tag[1] != "irr":
                raise ParseError(f"unknown tag {tag[1]!r}", tag[2], self.text)
            flavor = "irreducible"
        elif split is not None and not reducible:
            self.fail("explicit reducible profiles need the second side bar")
        I = first + tail
        return ("node", I, split, jblocks, kblocks, flavor, gamma_power)

    def digit_slots(self):
        tok = self.expect("INT")
        slots = tuple(int(d) for d in tok[1])
        for s in slots:
            if not 1 <= s <= self.level:
                raise ParseError(f"slot index {s} outside 1..{self.level}",
                                 tok[2], self.text)
        return slots

    def side_blocks(self):
        if self.peek()[0] != "{":
            return ()
        blocks = [self.side_block()]
        while self.peek()[0] == "," and self.peek(1)[0] == "{":
            self.next()
            blocks.append(self.side_block())
        return tuple(blocks)

    def side_block(self):
        slots = self.slot_set()
        key = "1"
        if self.peek()[0] == "(":
            self.next()
            key = self.block_key()
            self.expect(")")
        return (slots, key)


def parse(text: str, level: int):
    """Parse an expression at the given level into an AST."""
    if level < 1:
        raise ValueError("level must be at least 1")
    return _Parser(text, level).parse()


# -- AST flattening ------------------------------------------------------


def _node_exprs(profile, m: int) -> TautExpr:
    _tag, I, split, jblocks, kblocks, flavor, gamma_power = profile
    out = TautExpr(m)
    if split is not None:
        out.add(NodeClass(m, I, split, jblocks, kblocks, flavor, gamma_power),
                CharacterPolynomial.one())
        return out
    # short form: sum of complete unit fillings of the free slots
    others = tuple(s for s in range(1, m + 1) if s not in I)
    if flavor == "reducible":
        for mask in range(1 << len(others)):
            j = tuple(((s,), "1") for t, s in enumerate(others)
                      if not mask >> t & 1)
            k = tuple(((s,), "1") for t, s in enumerate(others)
                      if mask >> t & 1)
            out.add(NodeClass(m, I, 1, j, k, flavor, gamma_power),
                    CharacterPolynomial.one())
    else:
        j = tuple(((s,), "1") for s in others)
        out.add(NodeClass(m, I, 1, j, (), flavor, gamma_power),
                CharacterPolynomial.one())
    return out


def to_words(ast, m: int):
    """Flatten an AST into (coefficient, factor tuple) words.

    Distributes products over sums and expands powers, so each word is
    a plain monomial the rewriting engine can evaluate.
    """
    kind = ast[0]
    if kind == "num":
        return [(CharacterPolynomial.constant(ast[1]), ())]
    if kind == "char":
        return [(CharacterPolynomial.symbol(ast[1]), ())]
    if kind in ("gamma", "delta"):
        return [(CharacterPolynomial.one(), ((kind, ast[1]),))]
    if kind == "class":
        return [(CharacterPolynomial.one(),
                 (("class", ast[2], _slot_class(ast[1])),))]
    if kind == "diag":
        blocks = tuple((tuple(slots), key) for slots, key in ast[1])
        seed = TautExpr(m)
        seed.add(DiagMonomial(m, blocks), CharacterPolynomial.one())
        return [(CharacterPolynomial.one(), (("seed", seed),))]
    if kind == "node":
        return [(CharacterPolynomial.one(), (("seed", _node_exprs(ast, m)),))]
    if kind == "neg":
        return [(-c, w) for c, w in to_words(ast[1], m)]
    if kind == "add":
        return to_words(ast[1], m) + to_words(ast[2], m)
    if kind == "sub":
        return to_words(ast[1], m) + [(-c, w)
                                      for c, w in to_words(ast[2], m)]
    if kind == "mul":
        out = []
        for c1, w1 in to_words(ast[1], m):
            for c2, w2 in to_words(ast[2], m):
                out.append((c1 * c2, w1 + w2))
        return out
    if kind == "pow":
        out = [(CharacterPolynomial.one(), ())]
        for _ in range(ast[2]):
            nxt = []
            for c1, w1 in out:
                for c2, w2 in to_words(ast[1], m):
                    nxt.append((c1 * c2, w1 + w2))
            out = nxt
        return out
    raise ValueError(f"unknown AST node {kind!r}")


def evaluate_normal(text: str, m: int,
                    geo: SurfaceGeometry | None = None) -> TautExpr:
    """Parse and expand an expression to its normal form at level m."""
    geo = geo or default_geometry()
    out = TautExpr(m)
    for coeff, word in to_words(parse(text, m), m):
        if not word:
            out = out + TautExpr(m, {DiagMonomial(m): coeff})
            continue
        out = out + expand_monomial(list(word), m, geo).scale(coeff)
    return out


def evaluate_integral(text: str, m: int,
                      geo: SurfaceGeometry | None = None) -> CharacterPolynomial:
    """Parse an expression and integrate it over the level-m space."""
    geo = geo or default_geometry()
    total = CharacterPolynomial.zero()
    for coeff, word in to_words(parse(text, m), m):
        total = total + coeff * integrate_word(list(word), m, geo)
    return total
