"""
Recursive-descent parser for the vector-field expression language and a
compiler turning the resulting syntax trees into Python closures.

Grammar (whitespace is ignored)::

    program   = statement { ";" statement } [ ";" ]
    statement = ( "P" | "Q" ) "=" expr
    expr      = term { ( "+" | "-" ) term }
    term      = unary { ( "*" | "/" ) unary }
    unary     = ( "-" | "+" ) unary | power
    power     = atom [ "^" integer ]
    atom      = number | "x" | "y" | parameter
              | function "(" expr ")" | "(" expr ")"
    function  = "sin" | "cos" | "exp" | "sqrt"

Syntax trees are nested tuples whose first item is the node kind:

    ("const", value)        ("var", "x" | "y")      ("param", name)
    ("neg", a)              ("call", function, a)
    ("add", a, b)           ("sub", a, b)           ("mul", a, b)
    ("div", a, b)           ("pow", a, n)
"""

import re
from . import dual


class ParseError(ValueError):
    """
    Syntax error in a field definition. ``position`` is the offset of the
    offending character in the source text.
    """

    def __init__(self, message, position):
        super().__init__("{} (at position {})".format(message, position))
        self.position = position


class UnknownIdentifierError(ParseError):
    pass


_TOKEN = re.compile(
    r"\s*(?:(?P<number>\d+\.\d*(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?|\d+(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^();=]))"
)

_VARIABLES = ("x", "y")
_BINARY = {"+": "add", "-": "sub", "*": "mul", "/": "div"}
_SYMBOLS = {"add": "+", "sub": "-", "mul": "*", "div": "/"}


def tokenize(src):
    """
    Split the source text into (kind, text, position) tokens. The list ends
    with an ("end", "", len(src)) token.
    """
    tokens = []
    position = 0
    while position < len(src):
        if src[position:].strip() == "":
            break
        match = _TOKEN.match(src, position)
        if match is None or match.end() == position:
            raise ParseError("unexpected character {!r}".format(src[position]), position)
        kind = match.lastgroup
        tokens.append((kind, match.group(kind), match.start(kind)))
        position = match.end()
    tokens.append(("end", "", len(src)))
    return tokens


class _Parser:
    def __init__(self, src, parameters):
        self.tokens = tokenize(src)
        self.index = 0
        self.parameters = parameters

    @property
    def current(self):
        return self.tokens[self.index]

    def advance(self):
        token = self.tokens[self.index]
        self.index += 1
        return token

    def expect(self, text):
        kind, value, position = self.current
        if value != text or kind == "end":
            raise ParseError(
                "expected {!r} but found {!r}".format(text, value or "end of input"),
                position,
            )
        return self.advance()

    def program(self):
        statements = {}
        while True:
            kind, name, position = self.current
            if kind != "name" or name not in ("P", "Q"):
                raise ParseError(
                    "expected 'P' or 'Q' but found {!r}".format(name or "end of input"),
                    position,
                )
            if name in statements:
                raise ParseError("component {} defined twice".format(name), position)
            self.advance()
            self.expect("=")
            statements[name] = self.expr()
            if self.current[1] == ";":
                self.advance()
                if self.current[0] == "end":
                    break
                continue
            if self.current[0] != "end":
                raise ParseError(
                    "unexpected {!r}".format(self.current[1]), self.current[2]
                )
            break
        for name in ("P", "Q"):
            if name not in statements:
                raise ParseError("missing component {}".format(name), self.current[2])
        return statements["P"], statements["Q"]

    def expr(self):
        node = self.term()
        while self.current[0] == "op" and self.current[1] in "+-":
            op = self.advance()[1]
            node = (_BINARY[op], node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.current[0] == "op" and self.current[1] in "*/":
            op = self.advance()[1]
            node = (_BINARY[op], node, self.unary())
        return node

    def unary(self):
        if self.current[0] == "op" and self.current[1] == "-":
            self.advance()
            return ("neg", self.unary())
        if self.current[0] == "op" and self.current[1] == "+":
            self.advance()
            return self.unary()
        return self.power()

    def power(self):
        node = self.atom()
        if self.current[0] == "op" and self.current[1] == "^":
            self.advance()
            kind, text, position = self.current
            if kind == "name" and text not in self.parameters:
                raise UnknownIdentifierError(
                    "unknown identifier {!r}".format(text), position
                )
            if kind == "name" and float(self.parameters[text]).is_integer():
                if self.parameters[text] >= 0:
                    self.advance()
                    return ("pow", node, int(self.parameters[text]))
            if kind != "number" or re.fullmatch(r"\d+", text) is None:
                raise ParseError(
                    "exponent must be a non-negative integer, found {!r}".format(
                        text or "end of input"
                    ),
                    position,
                )
            self.advance()
            node = ("pow", node, int(text))
        return node

    def atom(self):
        kind, text, position = self.advance()
        if kind == "number":
            return ("const", float(text))
        if kind == "name":
            if text in dual.FUNCTIONS:
                self.expect("(")
                argument = self.expr()
                self.expect(")")
                return ("call", text, argument)
            if text in _VARIABLES:
                return ("var", text)
            if text in self.parameters:
                return ("param", text)
            raise UnknownIdentifierError("unknown identifier {!r}".format(text), position)
        if text == "(":
            node = self.expr()
            self.expect(")")
            return node
        raise ParseError(
            "unexpected {!r}".format(text or "end of input"), position
        )


def parse(src, parameters=None):
    """
    Parse a field definition ``P = <expr> ; Q = <expr>``.

    parameters
    ----------
    src : string
        Source text.
    parameters : dictionary or None
        Names of the parameters that expressions may reference.

    returns
    -------
    p_expr, q_expr : tuples
        Syntax trees of the two components.
    """
    if type(src) != str:
        raise ValueError("src must be a string")
    return _Parser(src, parameters or {}).program()


def parse_expression(src, parameters=None):
    """
    Parse a single expression (no ``P =`` prefix).
    """
    parser = _Parser(src, parameters or {})
    node = parser.expr()
    if parser.current[0] != "end":
        raise ParseError("unexpected {!r}".format(parser.current[1]), parser.current[2])
    return node


def check_tree(node, parameters, functions=None):
    """
    Verify that a syntax tree is well formed: arities match the node kinds,
    parameter references resolve and powers are non-negative integers.
    """
    functions = dual.FUNCTIONS if functions is None else functions
    if type(node) != tuple or len(node) == 0:
        raise ValueError("syntax tree nodes must be non-empty tuples")
    kind = node[0]
    if kind == "const":
        if len(node) != 2 or isinstance(node[1], (int, float)) is False:
            raise ValueError("invalid constant node {}".format(node))
    elif kind == "var":
        if len(node) != 2 or node[1] not in _VARIABLES:
            raise ValueError("invalid variable node {}".format(node))
    elif kind == "param":
        if len(node) != 2 or node[1] not in parameters:
            raise ValueError("unresolved parameter {}".format(node[1:]))
    elif kind == "neg":
        if len(node) != 2:
            raise ValueError("invalid negation node")
        check_tree(node[1], parameters, functions)
    elif kind == "call":
        if len(node) != 3 or node[1] not in functions:
            raise ValueError("invalid function call {}".format(node[1:2]))
        check_tree(node[2], parameters, functions)
    elif kind in _SYMBOLS:
        if len(node) != 3:
            raise ValueError("invalid binary node {}".format(kind))
        check_tree(node[1], parameters, functions)
        check_tree(node[2], parameters, functions)
    elif kind == "pow":
        if len(node) != 3 or type(node[2]) != int or node[2] < 0:
            raise ValueError("powers must have non-negative integer exponents")
        check_tree(node[1], parameters, functions)
    else:
        raise ValueError("unknown node kind {}".format(kind))


def compile_tree(node, parameters, functions=None):
    """
    Turn a syntax tree into a closure ``f(x, y)``. The closure works on
    floats, numpy arrays, ``dual.Dual`` and ``intervals.Interval`` values
    because it only uses arithmetic operators and the dispatching functions
    of ``dual``.

    parameters
    ----------
    node : tuple
        Syntax tree.
    parameters : dictionary
        Parameter values, bound at compile time.
    functions : dictionary or None
        Function table. Default is ``dual.FUNCTIONS``.
    """
    functions = dual.FUNCTIONS if functions is None else functions
    kind = node[0]
    if kind == "const":
        value = node[1]
        return lambda x, y: value
    if kind == "var":
        if node[1] == "x":
            return lambda x, y: x
        return lambda x, y: y
    if kind == "param":
        value = float(parameters[node[1]])
        return lambda x, y: value
    if kind == "neg":
        a = compile_tree(node[1], parameters, functions)
        return lambda x, y: -a(x, y)
    if kind == "call":
        func = functions[node[1]]
        a = compile_tree(node[2], parameters, functions)
        return lambda x, y: func(a(x, y))
    if kind == "pow":
        a = compile_tree(node[1], parameters, functions)
        n = node[2]
        return lambda x, y: a(x, y) ** n
    a = compile_tree(node[1], parameters, functions)
    b = compile_tree(node[2], parameters, functions)
    if kind == "add":
        return lambda x, y: a(x, y) + b(x, y)
    if kind == "sub":
        return lambda x, y: a(x, y) - b(x, y)
    if kind == "mul":
        return lambda x, y: a(x, y) * b(x, y)
    if kind == "div":
        return lambda x, y: a(x, y) / b(x, y)
    raise ValueError("unknown node kind {}".format(kind))


def to_text(node):
    """
    Render a syntax tree back to the expression language (fully
    parenthesized binary operations).
    """
    kind = node[0]
    if kind == "const":
        return repr(float(node[1]))
    if kind in ("var", "param"):
        return node[1]
    if kind == "neg":
        return "-({})".format(to_text(node[1]))
    if kind == "call":
        return "{}({})".format(node[1], to_text(node[2]))
    if kind == "pow":
        return "({})^{}".format(to_text(node[1]), node[2])
    return "({} {} {})".format(to_text(node[1]), _SYMBOLS[kind], to_text(node[2]))
