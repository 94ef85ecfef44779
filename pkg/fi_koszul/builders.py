"""Recursive-descent parser for module builder expressions.

::

    expr := "free" INT [opts]
          | "atom" INT ("trivial" | "sign" | "regular") [opts]
          | "truncate" INT "(" expr ")"
          | "sum" "(" expr ")" "(" expr ")"
          | "quotient" "(" expr ")" SEED+
          | "kernel-yoneda" INT VEC "(" expr ")"
          | "load" PATH [opts]
          | "(" expr ")"
    opts := ("--N" INT | "--field" FIELD)*
    SEED := "@" INT ":" VEC
    VEC  := scalar ("," scalar)*
"""
import logging
import re
from typing import List, Optional, Sequence, Set, Tuple

from .exactla import Field, RATIONALS, Scalar
from .exceptions import BuilderSyntaxError, FIKoszulError
from .ficore import (
    Representation,
    TruncatedFIModule,
    atom_module,
    direct_sum,
    extend_window,
    free_module,
    kernel_module,
    quotient_module,
    span_submodule,
    truncate_above,
    yoneda_morphism,
)
from .serialization import load_module_file

logger = logging.getLogger(__name__)

TOKEN_RE = re.compile(r"[()]|[^\s()]+")

REPRESENTATIONS = {
    "trivial": Representation.TRIVIAL,
    "sign": Representation.SIGN,
    "regular": Representation.REGULAR,
}


def tokenize(text: str) -> List[str]:
    return TOKEN_RE.findall(text)


class Parser:
    def __init__(self, tokens: Sequence[str], N: int, field: Field = RATIONALS):
        self.tokens = list(tokens)
        self.pos = 0
        self.N = N
        self.field = field

    # Token handling

    def peek(self) -> Optional[str]:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def next(self, what: str) -> str:
        token = self.peek()
        if token is None:
            raise BuilderSyntaxError("Expression ends where {} was expected".format(what))
        self.pos += 1
        return token

    def expect(self, literal: str):
        token = self.next(repr(literal))
        if token != literal:
            raise self.error("Expected {!r}, got {!r}".format(literal, token))

    def error(self, message: str) -> BuilderSyntaxError:
        return BuilderSyntaxError("{} (at token {} of {!r})".format(message, self.pos, " ".join(self.tokens)))

    def integer(self, what: str) -> int:
        token = self.next(what)
        if not re.fullmatch(r"\d+", token):
            raise self.error("Expected {} as a nonnegative integer, got {!r}".format(what, token))
        return int(token)

    def vector(self, text: str, field: Field) -> Tuple[Scalar, ...]:
        try:
            return tuple(field.parse_scalar(part) for part in text.split(","))
        except FIKoszulError as e:
            raise self.error(str(e)) from e

    def options(self) -> Tuple[int, Field, Set[str]]:
        """Inline overrides; also returns which flags were given."""
        N, field, given = self.N, self.field, set()
        while self.peek() in ("--N", "--field"):
            flag = self.next("an option")
            if flag == "--N":
                N = self.integer("the window N")
            else:
                try:
                    field = Field.parse(self.next("a field"))
                except FIKoszulError as e:
                    raise self.error(str(e)) from e
            given.add(flag)
        return N, field, given

    def group(self) -> TruncatedFIModule:
        self.expect("(")
        result = self.expr()
        self.expect(")")
        return result

    # Grammar

    def parse(self) -> TruncatedFIModule:
        result = self.expr()
        if self.peek() is not None:
            raise self.error("Trailing input {!r}".format(self.peek()))
        return result

    def expr(self) -> TruncatedFIModule:
        token = self.peek()
        if token == "(":
            return self.group()
        keyword = self.next("a constructor")
        handler = getattr(self, "build_" + keyword.replace("-", "_"), None)
        if handler is None:
            raise self.error("Unknown constructor {!r}".format(keyword))
        try:
            return handler()
        except BuilderSyntaxError:
            raise
        except FIKoszulError as e:
            raise self.error("{} failed: {}".format(keyword, e)) from e

    def build_free(self) -> TruncatedFIModule:
        d = self.integer("the generator degree")
        N, field, _ = self.options()
        return free_module(d, N, field)

    def build_atom(self) -> TruncatedFIModule:
        p = self.integer("the atom degree")
        rep = self.next("a representation")
        if rep not in REPRESENTATIONS:
            raise self.error("Unknown representation {!r}".format(rep))
        N, field, _ = self.options()
        return atom_module(p, REPRESENTATIONS[rep], N, field)

    def build_truncate(self) -> TruncatedFIModule:
        q = self.integer("the truncation degree")
        return truncate_above(self.group(), q)

    def build_sum(self) -> TruncatedFIModule:
        return direct_sum(self.group(), self.group())

    def build_quotient(self) -> TruncatedFIModule:
        V = self.group()
        seeds = []
        while self.peek() is not None and self.peek().startswith("@"):
            match = re.fullmatch(r"@(\d+):(\S+)", self.next("a seed"))
            if not match:
                raise self.error("Seeds look like @degree:v1,v2,...")
            seeds.append((int(match.group(1)), self.vector(match.group(2), V.field)))
        if not seeds:
            raise self.error("quotient needs at least one seed")
        return quotient_module(V, span_submodule(V, seeds))

    def build_kernel_yoneda(self) -> TruncatedFIModule:
        d = self.integer("the generator degree")
        text = self.next("a vector")
        V = self.group()
        K, _ = kernel_module(yoneda_morphism(V, d, self.vector(text, V.field)))
        return K.with_note("ker(M({}) → {})".format(d, V.note))

    def build_load(self) -> TruncatedFIModule:
        path = self.next("a path")
        N, field, given = self.options()
        try:
            V = load_module_file(path)
        except OSError as e:
            raise self.error("Cannot read {}: {}".format(path, e)) from e
        if "--field" in given and field != V.field:
            raise self.error("{} holds a module over {}, not {}".format(path, V.field, field))
        if "--N" in given:
            V = extend_window(V, N)
        return V


def build(expression, N: int, field: Field = RATIONALS) -> TruncatedFIModule:
    """Evaluate a builder expression given as a string or a list of argument words."""
    if not isinstance(expression, str):
        expression = " ".join(expression)
    V = Parser(tokenize(expression), N, field).parse()
    logger.debug("Built %r from %r", V, expression)
    return V
