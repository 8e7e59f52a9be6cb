"""Surface syntax for .qpel files and embedded proof scripts.

A file is a sequence of declarations::

    type Pair = qbit * qbit
    term coin () : I + I = measure { 1/2 -> inl unit | 1/2 -> inr unit }
    effect top (x : I) = bot(0)
    lemma l (x : I) : x = unit : I by { eta-unit }
    check coin

Later declarations may reference earlier ``type``, ``term`` and ``effect``
declarations by name; references are substituted inline during elaboration.
Only closed term and effect declarations can be referenced, since inlining an
open body would silently duplicate variable uses in a linear language.

Proof scripts appear after ``by`` in lemma declarations, or in a JSON sidecar
(``{"rule": ..., "args": {...}, "premises": [...]}``).  ``requires { ... }``
clauses supply scripts for the orthogonality obligations of ``o+`` and
``measure``, matched to their occurrences in preorder.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from . import rules
from .printer import print_context, print_effect, print_term, print_type
from .syntax import (
    Ascribe,
    Case,
    CaseEff,
    Context,
    CZ,
    Effect,
    EffForm,
    EffLeq,
    Inl,
    Inr,
    LetPair,
    Measure,
    NewPlus,
    Orth,
    OSum,
    Pair,
    PauliX,
    PauliZ,
    ProjPlus,
    ScalarLit,
    SMul,
    Star,
    Term,
    TermEq,
    TQbit,
    TSum,
    TTensor,
    TUnit,
    Type,
    Typing,
    Var,
    Zero,
    desugar_let,
)


class QpelSyntaxError(Exception):
    def __init__(self, msg, line=None, col=None, expected=()):
        self.line, self.col, self.expected = line, col, tuple(expected)
        where = f" at {line}:{col}" if line is not None else ""
        hint = f" (expected one of: {', '.join(sorted(self.expected))})" if expected else ""
        super().__init__(f"{msg}{where}{hint}")


# ------------------------------------------------------------------ reference
# nodes that exist only between parsing and elaboration


@dataclass(frozen=True)
class TRef(Type):
    name: str


@dataclass(frozen=True, eq=False)
class EffRef(Effect):
    name: str


# ----------------------------------------------------------------- file model


@dataclass(frozen=True)
class ScriptNode:
    rule: str
    args: dict = field(default_factory=dict)
    premises: tuple | None = None  # None: discharge premises automatically

    def __post_init__(self):
        object.__setattr__(self, "args", dict(self.args))


@dataclass(frozen=True)
class AutoNode:
    depth: int | None = None


@dataclass(frozen=True)
class ArithNode:
    pass


@dataclass(frozen=True)
class BothNode:
    fwd: object
    bwd: object


@dataclass(frozen=True)
class UseNode:
    name: str


Script = ScriptNode | AutoNode | ArithNode | BothNode | UseNode


@dataclass(frozen=True)
class GTyping:
    term: Term
    ty: Type


@dataclass(frozen=True)
class GTermEq:
    lhs: Term
    rhs: Term
    ty: Type


@dataclass(frozen=True)
class GLeq:
    low: Effect
    high: Effect


@dataclass(frozen=True)
class GEquiv:
    lhs: Effect
    rhs: Effect


@dataclass(frozen=True)
class GPerp:
    lhs: Effect
    rhs: Effect


@dataclass(frozen=True)
class GEff:
    eff: Effect


Goal = GTyping | GTermEq | GLeq | GEquiv | GPerp | GEff


def goal_judgements(goal: Goal, g: Context):
    """Expand a surface goal into core judgements (notation normalisation)."""
    match goal:
        case GTyping(term=m, ty=a):
            return [Typing(g, m, a)]
        case GTermEq(lhs=m, rhs=n, ty=a):
            return [TermEq(g, m, n, a)]
        case GLeq(low=a, high=b):
            return [EffLeq(g, a, b)]
        case GPerp(lhs=a, rhs=b):
            return [EffLeq(g, a, Orth(b))]
        case GEquiv(lhs=a, rhs=b):
            return [EffLeq(g, a, b), EffLeq(g, b, a)]
        case GEff(eff=e):
            return [EffForm(g, e)]
    raise TypeError(goal)


@dataclass(frozen=True)
class TypeDecl:
    name: str
    ty: Type


@dataclass(frozen=True)
class TermDecl:
    name: str
    ctx: Context
    ty: Type
    term: Term
    requires: tuple = ()


@dataclass(frozen=True)
class EffectDecl:
    name: str
    ctx: Context
    eff: Effect
    requires: tuple = ()


@dataclass(frozen=True)
class LemmaDecl:
    name: str
    ctx: Context
    goal: Goal
    script: Script | None = None
    requires: tuple = ()

    def judgements(self):
        return goal_judgements(self.goal, self.ctx)


@dataclass(frozen=True)
class CheckDecl:
    name: str


Decl = TypeDecl | TermDecl | EffectDecl | LemmaDecl | CheckDecl


@dataclass(frozen=True)
class SourceFile:
    decls: tuple


# -------------------------------------------------------------------- lexing


_PUNCT = ["->", "<=", "==", "(", ")", "{", "}", "[", "]", ":", ";", ",", "|", "*", "+", ".", "/", "="]


@dataclass(frozen=True)
class Token:
    kind: str  # NAME, INT, EOF, or the punct text itself
    text: str
    line: int
    col: int


def _name_char(c):
    return c.isalnum() or c in "_'"


def tokenize(text: str) -> list[Token]:
    toks, i, line, col = [], 0, 1, 1
    n = len(text)
    while i < n:
        c = text[i]
        if c == "\n":
            i, line, col = i + 1, line + 1, 1
            continue
        if c in " \t\r":
            i, col = i + 1, col + 1
            continue
        if text.startswith("--", i):
            while i < n and text[i] != "\n":
                i += 1
            continue
        if text.startswith("_|_", i) and not (i + 3 < n and _name_char(text[i + 3])):
            toks.append(Token("_|_", "_|_", line, col))
            i, col = i + 3, col + 3
            continue
        if text.startswith("->", i):
            toks.append(Token("->", "->", line, col))
            i, col = i + 2, col + 2
            continue
        if text.startswith("<=", i) or text.startswith("==", i):
            toks.append(Token(text[i : i + 2], text[i : i + 2], line, col))
            i, col = i + 2, col + 2
            continue
        if c.isalpha() or c == "_":
            j = i
            while j < n:
                if _name_char(text[j]):
                    j += 1
                elif text[j] == "-" and j + 1 < n and text[j + 1].isalnum():
                    j += 2
                else:
                    break
            word = text[i:j]
            if word == "o" and j < n and text[j] == "+":
                toks.append(Token("o+", "o+", line, col))
                j += 1
            else:
                toks.append(Token("NAME", word, line, col))
            col += j - i
            i = j
            continue
        if c.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            toks.append(Token("INT", text[i:j], line, col))
            col += j - i
            i = j
            continue
        if c in "(){}[]:;,|*+./=":
            toks.append(Token(c, c, line, col))
            i, col = i + 1, col + 1
            continue
        raise QpelSyntaxError(f"unexpected character {c!r}", line, col)
    toks.append(Token("EOF", "", line, col))
    return toks


# ------------------------------------------------------------------- parsing


_KEYWORDS = {
    "type", "term", "effect", "lemma", "check", "by", "requires",
    "let", "in", "case", "caseE", "of", "inl", "inr", "measure",
    "unit", "plus", "qbit", "I", "X", "Z", "E", "proj", "bot", "eff",
    "auto", "arith", "both", "use",
}

_NODE_KINDS = {"auto", "arith", "both", "use"}

# sort of each script argument value, keyed by (rule, key) with a fallback key
_ARG_SORTS = {
    ("trans", "via"): "term",
    ("leq-trans", "via"): "effect",
    ("measure-perm", "perm"): "intlist",
    ("beta-iso", "x"): "name",
    ("beta-iso", "body"): "effect",
    ("beta-iso", "m"): "term",
    ("beta-iso", "n"): "term",
    (None, "ty"): "type",
    (None, "ty2"): "type",
    (None, "depth"): "int",
}


def arg_sort(rule: str, key: str) -> str:
    if (rule, key) in _ARG_SORTS:
        return _ARG_SORTS[(rule, key)]
    if (None, key) in _ARG_SORTS:
        return _ARG_SORTS[(None, key)]
    raise QpelSyntaxError(f"rule {rule} takes no argument named {key!r}")


class Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.pos = 0

    # -- token plumbing

    def peek(self, ahead=0) -> Token:
        return self.toks[min(self.pos + ahead, len(self.toks) - 1)]

    def at(self, kind, text=None) -> bool:
        t = self.peek()
        return t.kind == kind and (text is None or t.text == text)

    def at_word(self, word) -> bool:
        return self.at("NAME", word)

    def advance(self) -> Token:
        t = self.toks[self.pos]
        self.pos += 1
        return t

    def expect(self, kind, text=None) -> Token:
        if not self.at(kind, text):
            self.fail(text or kind)
        return self.advance()

    def expect_word(self, word) -> Token:
        if not self.at_word(word):
            self.fail(word)
        return self.advance()

    def fail(self, *expected):
        t = self.peek()
        raise QpelSyntaxError(
            f"unexpected {t.text!r}" if t.kind != "EOF" else "unexpected end of input",
            t.line,
            t.col,
            expected,
        )

    def ident(self) -> str:
        t = self.peek()
        if t.kind != "NAME" or t.text in _KEYWORDS:
            self.fail("identifier")
        return self.advance().text

    # -- top level

    def parse_file(self) -> SourceFile:
        decls = []
        while not self.at("EOF"):
            decls.append(self.parse_decl())
        return SourceFile(tuple(decls))

    def parse_decl(self) -> Decl:
        t = self.peek()
        if t.kind != "NAME":
            self.fail("type", "term", "effect", "lemma", "check")
        if t.text == "type":
            self.advance()
            name = self.ident()
            self.expect("=")
            return TypeDecl(name, self.parse_type())
        if t.text == "term":
            self.advance()
            name = self.ident()
            g = self.parse_context()
            self.expect(":")
            ty = self.parse_type()
            self.expect("=")
            body = self.parse_term()
            return TermDecl(name, g, ty, body, self.parse_requires())
        if t.text == "effect":
            self.advance()
            name = self.ident()
            g = self.parse_context()
            self.expect("=")
            eff = self.parse_effect()
            return EffectDecl(name, g, eff, self.parse_requires())
        if t.text == "lemma":
            self.advance()
            name = self.ident()
            g = self.parse_context()
            self.expect(":")
            goal = self.parse_goal()
            requires = self.parse_requires()
            script = None
            if self.at_word("by"):
                self.advance()
                self.expect("{")
                script = self.parse_script()
                self.expect("}")
            return LemmaDecl(name, g, goal, script, requires)
        if t.text == "check":
            self.advance()
            return CheckDecl(self.ident())
        self.fail("type", "term", "effect", "lemma", "check")

    def parse_requires(self) -> tuple:
        if not self.at_word("requires"):
            return ()
        self.advance()
        self.expect("{")
        scripts = [self.parse_script()]
        while self.at(";"):
            self.advance()
            scripts.append(self.parse_script())
        self.expect("}")
        return tuple(scripts)

    def parse_context(self) -> Context:
        self.expect("(")
        entries = []
        if not self.at(")"):
            while True:
                name = self.ident()
                self.expect(":")
                entries.append((name, self.parse_type()))
                if not self.at(","):
                    break
                self.advance()
        self.expect(")")
        return Context(tuple(entries))

    def parse_goal(self) -> Goal:
        save = self.pos
        try:
            lhs = self.parse_term()
            if self.at("="):
                self.advance()
                rhs = self.parse_term()
                self.expect(":")
                return GTermEq(lhs, rhs, self.parse_type())
            if self.at(":"):
                self.advance()
                return GTyping(lhs, self.parse_type())
            raise QpelSyntaxError("not a term goal")
        except QpelSyntaxError:
            self.pos = save
        lhs = self.parse_effect()
        if self.at("<="):
            self.advance()
            return GLeq(lhs, self.parse_effect())
        if self.at("=="):
            self.advance()
            return GEquiv(lhs, self.parse_effect())
        if self.at("_|_"):
            self.advance()
            return GPerp(lhs, self.parse_effect())
        if self.at_word("eff"):
            self.advance()
            return GEff(lhs)
        self.fail("<=", "==", "_|_", "eff")

    # -- types

    def parse_type(self) -> Type:
        t = self.parse_tensor_type()
        while self.at("+"):
            self.advance()
            t = TSum(t, self.parse_tensor_type())
        return t

    def parse_tensor_type(self) -> Type:
        t = self.parse_atom_type()
        while self.at("*"):
            self.advance()
            t = TTensor(t, self.parse_atom_type())
        return t

    def parse_atom_type(self) -> Type:
        if self.at_word("I"):
            self.advance()
            return TUnit()
        if self.at_word("qbit"):
            self.advance()
            return TQbit()
        if self.at("("):
            self.advance()
            t = self.parse_type()
            self.expect(")")
            return t
        return TRef(self.ident())

    # -- terms

    def parse_term(self) -> Term:
        if self.at_word("let"):
            self.advance()
            x = self.ident()
            if self.at("*"):
                self.advance()
                y = self.ident()
                self.expect("=")
                pair = self.parse_term()
                self.expect_word("in")
                return LetPair(x, y, pair, self.parse_term())
            self.expect("=")
            bound = self.parse_term()
            self.expect_word("in")
            return desugar_let(x, bound, self.parse_term())
        if self.at_word("case"):
            self.advance()
            scrut = self.parse_pair_term()
            self.expect_word("of")
            self.expect_word("inl")
            x = self.ident()
            self.expect("->")
            left = self.parse_term()
            self.expect("|")
            self.expect_word("inr")
            y = self.ident()
            self.expect("->")
            return Case(scrut, x, left, y, self.parse_term())
        if self.at_word("measure"):
            self.advance()
            self.expect("{")
            branches = [self.parse_measure_branch()]
            while self.at("|"):
                self.advance()
                branches.append(self.parse_measure_branch())
            self.expect("}")
            return Measure(tuple(branches))
        return self.parse_pair_term()

    def parse_measure_branch(self):
        phi = self.parse_effect()
        self.expect("->")
        return (phi, self.parse_term())

    def parse_pair_term(self) -> Term:
        t = self.parse_app_term()
        while self.at("*"):
            self.advance()
            t = Pair(t, self.parse_app_term())
        return t

    def parse_app_term(self) -> Term:
        if self.at_word("inl"):
            self.advance()
            return Inl(self.parse_app_term())
        if self.at_word("inr"):
            self.advance()
            return Inr(self.parse_app_term())
        if self.at_word("X"):
            self.advance()
            return PauliX(self.parse_app_term())
        if self.at_word("Z"):
            self.advance()
            return PauliZ(self.parse_app_term())
        if self.at_word("E"):
            self.advance()
            left = self.parse_app_term()
            return CZ(left, self.parse_atom_term())
        return self.parse_atom_term()

    def parse_atom_term(self) -> Term:
        if self.at_word("unit"):
            self.advance()
            return Star()
        if self.at_word("plus"):
            self.advance()
            return NewPlus()
        if self.at("("):
            self.advance()
            t = self.parse_term()
            if self.at(":"):
                self.advance()
                t = Ascribe(t, self.parse_type())
            self.expect(")")
            return t
        return Var(self.ident())

    # -- effects

    def parse_effect(self) -> Effect:
        if self.at_word("caseE"):
            self.advance()
            scrut = self.parse_pair_term()
            self.expect_word("of")
            self.expect_word("inl")
            x = self.ident()
            self.expect("->")
            left = self.parse_effect()
            self.expect("|")
            self.expect_word("inr")
            y = self.ident()
            self.expect("->")
            return CaseEff(scrut, x, left, y, self.parse_effect())
        e = self.parse_mult_effect()
        if self.at("o+"):
            self.advance()
            return OSum(e, self.parse_mult_effect())
        return e

    def parse_mult_effect(self) -> Effect:
        e = self.parse_atom_effect()
        if self.at("."):
            self.advance()
            return SMul(e, self.parse_mult_effect())
        return e

    def parse_rational(self) -> Fraction:
        num = int(self.expect("INT").text)
        if self.at("/"):
            self.advance()
            return Fraction(num, int(self.expect("INT").text))
        return Fraction(num)

    def parse_atom_effect(self) -> Effect:
        if self.at("INT"):
            q = self.parse_rational()
            return Zero() if q == 0 else ScalarLit(q)
        if self.at_word("bot"):
            self.advance()
            self.expect("(")
            e = self.parse_effect()
            self.expect(")")
            return Orth(e)
        if self.at_word("proj"):
            self.advance()
            self.expect("(")
            m = self.parse_term()
            self.expect(",")
            q = self.parse_rational()
            self.expect(")")
            try:
                return ProjPlus(m, q)
            except ValueError as exc:
                self.fail(str(exc))
        if self.at("("):
            self.advance()
            e = self.parse_effect()
            self.expect(")")
            return e
        return EffRef(self.ident())

    # -- proof scripts

    def parse_script(self) -> Script:
        t = self.peek()
        if t.kind != "NAME":
            self.fail("rule name")
        name = t.text
        if name == "auto":
            self.advance()
            depth = None
            if self.at("(") and self.peek(1).kind == "INT":
                self.advance()
                depth = int(self.expect("INT").text)
                self.expect(")")
            return AutoNode(depth)
        if name == "arith":
            self.advance()
            return ArithNode()
        if name == "both":
            self.advance()
            self.expect("(")
            fwd = self.parse_script()
            self.expect(";")
            bwd = self.parse_script()
            self.expect(")")
            return BothNode(fwd, bwd)
        if name == "use":
            self.advance()
            self.expect("(")
            target = self.ident()
            self.expect(")")
            return UseNode(target)
        if name not in rules.ALL_RULE_NAMES:
            self.fail("rule name")
        self.advance()
        args = {}
        if self.at("["):
            self.advance()
            while True:
                key = self.ident()
                self.expect("=")
                args[key] = self.parse_arg_value(name, key)
                if not self.at(","):
                    break
                self.advance()
            self.expect("]")
        premises = None
        if self.at("("):
            self.advance()
            prems = [self.parse_script()]
            while self.at(";"):
                self.advance()
                prems.append(self.parse_script())
            self.expect(")")
            premises = tuple(prems)
        return ScriptNode(name, args, premises)

    def parse_arg_value(self, rule: str, key: str):
        sort = arg_sort(rule, key)
        if sort == "term":
            return self.parse_term()
        if sort == "effect":
            return self.parse_effect()
        if sort == "type":
            return self.parse_type()
        if sort == "name":
            return self.ident()
        if sort == "int":
            return int(self.expect("INT").text)
        if sort == "intlist":
            self.expect("[")
            xs = [int(self.expect("INT").text)]
            while self.at(","):
                self.advance()
                xs.append(int(self.expect("INT").text))
            self.expect("]")
            return tuple(xs)
        raise AssertionError(sort)


# -------------------------------------------------------------- elaboration


class ElabError(Exception):
    pass


@dataclass
class DeclTables:
    types: dict
    terms: dict
    effects: dict


def resolve_type(t: Type, tables: DeclTables) -> Type:
    match t:
        case TRef(name=n):
            if n not in tables.types:
                raise ElabError(f"unknown type name {n!r}")
            return tables.types[n]
        case TTensor(left=a, right=b):
            return TTensor(resolve_type(a, tables), resolve_type(b, tables))
        case TSum(left=a, right=b):
            return TSum(resolve_type(a, tables), resolve_type(b, tables))
        case _:
            return t


def resolve_term(m: Term, tables: DeclTables, bound=frozenset()) -> Term:
    rec = lambda t, extra=frozenset(): resolve_term(t, tables, bound | extra)
    match m:
        case Var(name=x):
            if x not in bound and x in tables.terms:
                return tables.terms[x]
            return m
        case Pair(left=a, right=b):
            return Pair(rec(a), rec(b))
        case LetPair(x=x, y=y, pair=p, body=n):
            return LetPair(x, y, rec(p), rec(n, {x, y}))
        case Star() | NewPlus():
            return m
        case Inl(arg=a):
            return Inl(rec(a))
        case Inr(arg=a):
            return Inr(rec(a))
        case Case(scrut=s, x=x, left=n, y=y, right=p):
            return Case(rec(s), x, rec(n, {x}), y, rec(p, {y}))
        case Measure(branches=bs):
            return Measure(
                tuple(
                    (resolve_effect(phi, tables, bound), rec(t)) for phi, t in bs
                )
            )
        case PauliX(arg=a):
            return PauliX(rec(a))
        case PauliZ(arg=a):
            return PauliZ(rec(a))
        case CZ(left=a, right=b):
            return CZ(rec(a), rec(b))
        case Ascribe(term=t, ty=ty):
            return Ascribe(rec(t), resolve_type(ty, tables))
    raise TypeError(f"not a term: {m!r}")


def resolve_effect(e: Effect, tables: DeclTables, bound=frozenset()) -> Effect:
    rec = lambda x, extra=frozenset(): resolve_effect(x, tables, bound | extra)
    match e:
        case EffRef(name=n):
            if n not in tables.effects:
                raise ElabError(f"unknown effect name {n!r}")
            return tables.effects[n]
        case Zero() | ScalarLit():
            return e
        case OSum(left=a, right=b):
            return OSum(rec(a), rec(b))
        case Orth(arg=a):
            return Orth(rec(a))
        case SMul(scalar=a, body=b):
            return SMul(rec(a), rec(b))
        case CaseEff(scrut=m, x=x, left=a, y=y, right=b):
            return CaseEff(resolve_term(m, tables, bound), x, rec(a, {x}), y, rec(b, {y}))
        case ProjPlus(term=m, angle=q):
            return ProjPlus(resolve_term(m, tables, bound), q)
    raise TypeError(f"not an effect: {e!r}")


def resolve_context(g: Context, tables: DeclTables) -> Context:
    return Context(tuple((n, resolve_type(t, tables)) for n, t in g))


def resolve_script(s: Script | None, tables: DeclTables):
    if s is None:
        return None
    match s:
        case AutoNode() | ArithNode() | UseNode():
            return s
        case BothNode(fwd=a, bwd=b):
            return BothNode(resolve_script(a, tables), resolve_script(b, tables))
        case ScriptNode(rule=r, args=args, premises=prems):
            out_args = {}
            for k, v in args.items():
                if isinstance(v, Term):
                    out_args[k] = resolve_term(v, tables)
                elif isinstance(v, Effect):
                    out_args[k] = resolve_effect(v, tables)
                elif isinstance(v, Type):
                    out_args[k] = resolve_type(v, tables)
                else:
                    out_args[k] = v
            out_prems = None if prems is None else tuple(resolve_script(p, tables) for p in prems)
            return ScriptNode(r, out_args, out_prems)
    raise TypeError(s)


def resolve_goal(goal: Goal, tables: DeclTables) -> Goal:
    match goal:
        case GTyping(term=m, ty=a):
            return GTyping(resolve_term(m, tables), resolve_type(a, tables))
        case GTermEq(lhs=m, rhs=n, ty=a):
            return GTermEq(resolve_term(m, tables), resolve_term(n, tables), resolve_type(a, tables))
        case GLeq(low=a, high=b):
            return GLeq(resolve_effect(a, tables), resolve_effect(b, tables))
        case GEquiv(lhs=a, rhs=b):
            return GEquiv(resolve_effect(a, tables), resolve_effect(b, tables))
        case GPerp(lhs=a, rhs=b):
            return GPerp(resolve_effect(a, tables), resolve_effect(b, tables))
        case GEff(eff=e):
            return GEff(resolve_effect(e, tables))
    raise TypeError(goal)


def elaborate(raw: SourceFile) -> SourceFile:
    """Resolve declaration references; check name uniqueness and closedness."""
    from .syntax import free_vars

    tables = DeclTables({}, {}, {})
    seen = set()
    out = []
    for d in raw.decls:
        if not isinstance(d, CheckDecl):
            if d.name in seen:
                raise ElabError(f"duplicate declaration name {d.name!r}")
            seen.add(d.name)
        match d:
            case TypeDecl(name=n, ty=t):
                resolved = TypeDecl(n, resolve_type(t, tables))
                tables.types[n] = resolved.ty
                out.append(resolved)
            case TermDecl(name=n, ctx=g, ty=t, term=m, requires=req):
                resolved = TermDecl(
                    n,
                    resolve_context(g, tables),
                    resolve_type(t, tables),
                    resolve_term(m, tables, frozenset(g.names())),
                    tuple(resolve_script(s, tables) for s in req),
                )
                if len(resolved.ctx) == 0:
                    tables.terms[n] = resolved.term
                out.append(resolved)
            case EffectDecl(name=n, ctx=g, eff=e, requires=req):
                resolved = EffectDecl(
                    n,
                    resolve_context(g, tables),
                    resolve_effect(e, tables, frozenset(g.names())),
                    tuple(resolve_script(s, tables) for s in req),
                )
                if len(resolved.ctx) == 0 and not free_vars(resolved.eff):
                    tables.effects[n] = resolved.eff
                out.append(resolved)
            case LemmaDecl(name=n, ctx=g, goal=goal, script=sc, requires=req):
                g2 = resolve_context(g, tables)
                out.append(
                    LemmaDecl(
                        n,
                        g2,
                        resolve_goal(goal, tables),
                        resolve_script(sc, tables),
                        tuple(resolve_script(s, tables) for s in req),
                    )
                )
            case CheckDecl():
                out.append(d)
    return SourceFile(tuple(out))


def parse(text: str) -> SourceFile:
    """Parse and elaborate a .qpel source text."""
    return elaborate(Parser(text).parse_file())


def parse_term_text(text: str) -> Term:
    p = Parser(text)
    t = p.parse_term()
    p.expect("EOF")
    return resolve_term(t, DeclTables({}, {}, {}))


def parse_effect_text(text: str) -> Effect:
    p = Parser(text)
    e = p.parse_effect()
    p.expect("EOF")
    return resolve_effect(e, DeclTables({}, {}, {}))


# ----------------------------------------------------------- script sidecars


def script_from_json(obj) -> Script:
    """Proof script from its JSON document form."""
    if not isinstance(obj, dict) or "rule" not in obj:
        raise QpelSyntaxError("proof script JSON needs a 'rule' field")
    rule = obj["rule"]
    prems = obj.get("premises")
    args = obj.get("args", {})
    if rule == "auto":
        return AutoNode(args.get("depth"))
    if rule == "arith":
        return ArithNode()
    if rule == "both":
        if not prems or len(prems) != 2:
            raise QpelSyntaxError("'both' takes exactly two premises")
        return BothNode(script_from_json(prems[0]), script_from_json(prems[1]))
    if rule == "use":
        return UseNode(args["name"])
    if rule not in rules.ALL_RULE_NAMES:
        raise QpelSyntaxError(f"unknown rule name {rule!r}")
    parsed_args = {}
    for k, v in args.items():
        sort = arg_sort(rule, k)
        if sort == "term":
            parsed_args[k] = parse_term_text(v)
        elif sort == "effect":
            parsed_args[k] = parse_effect_text(v)
        elif sort == "type":
            p = Parser(v)
            parsed_args[k] = p.parse_type()
            p.expect("EOF")
        elif sort == "intlist":
            parsed_args[k] = tuple(int(x) for x in v)
        else:
            parsed_args[k] = v
    premises = None if prems is None else tuple(script_from_json(p) for p in prems)
    return ScriptNode(rule, parsed_args, premises)


def script_to_json(s: Script):
    match s:
        case AutoNode(depth=d):
            return {"rule": "auto", "args": {} if d is None else {"depth": d}}
        case ArithNode():
            return {"rule": "arith"}
        case BothNode(fwd=a, bwd=b):
            return {"rule": "both", "premises": [script_to_json(a), script_to_json(b)]}
        case UseNode(name=n):
            return {"rule": "use", "args": {"name": n}}
        case ScriptNode(rule=r, args=args, premises=prems):
            out_args = {}
            for k, v in args.items():
                if isinstance(v, Term):
                    out_args[k] = print_term(v)
                elif isinstance(v, Effect):
                    out_args[k] = print_effect(v)
                elif isinstance(v, Type):
                    out_args[k] = print_type(v)
                elif isinstance(v, tuple):
                    out_args[k] = list(v)
                else:
                    out_args[k] = v
            doc = {"rule": r}
            if out_args:
                doc["args"] = out_args
            if prems is not None:
                doc["premises"] = [script_to_json(p) for p in prems]
            return doc
    raise TypeError(s)


def load_sidecar(path) -> dict:
    """Sidecar proof document: {lemma name: script JSON}."""
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    return {name: script_from_json(obj) for name, obj in data.items()}


# -------------------------------------------------------------- file printing


def print_script(s: Script) -> str:
    match s:
        case AutoNode(depth=d):
            return "auto" if d is None else f"auto({d})"
        case ArithNode():
            return "arith"
        case BothNode(fwd=a, bwd=b):
            return f"both({print_script(a)}; {print_script(b)})"
        case UseNode(name=n):
            return f"use({n})"
        case ScriptNode(rule=r, args=args, premises=prems):
            out = r
            if args:
                parts = []
                for k, v in args.items():
                    if isinstance(v, Term):
                        parts.append(f"{k} = {print_term(v)}")
                    elif isinstance(v, Effect):
                        parts.append(f"{k} = {print_effect(v)}")
                    elif isinstance(v, Type):
                        parts.append(f"{k} = {print_type(v)}")
                    elif isinstance(v, tuple):
                        parts.append(f"{k} = [{', '.join(str(x) for x in v)}]")
                    else:
                        parts.append(f"{k} = {v}")
                out += "[" + ", ".join(parts) + "]"
            if prems is not None:
                out += "(" + "; ".join(print_script(p) for p in prems) + ")"
            return out
    raise TypeError(s)


def print_goal(goal: Goal) -> str:
    match goal:
        case GTyping(term=m, ty=a):
            return f"{print_term(m)} : {print_type(a)}"
        case GTermEq(lhs=m, rhs=n, ty=a):
            return f"{print_term(m)} = {print_term(n)} : {print_type(a)}"
        case GLeq(low=a, high=b):
            return f"{print_effect(a)} <= {print_effect(b)}"
        case GEquiv(lhs=a, rhs=b):
            return f"{print_effect(a)} == {print_effect(b)}"
        case GPerp(lhs=a, rhs=b):
            return f"{print_effect(a)} _|_ {print_effect(b)}"
        case GEff(eff=e):
            return f"{print_effect(e)} eff"
    raise TypeError(goal)


def print_decl(d: Decl) -> str:
    def req(scripts):
        if not scripts:
            return ""
        return " requires { " + "; ".join(print_script(s) for s in scripts) + " }"

    match d:
        case TypeDecl(name=n, ty=t):
            return f"type {n} = {print_type(t)}"
        case TermDecl(name=n, ctx=g, ty=t, term=m, requires=r):
            return f"term {n} {print_context(g)} : {print_type(t)} = {print_term(m)}{req(r)}"
        case EffectDecl(name=n, ctx=g, eff=e, requires=r):
            return f"effect {n} {print_context(g)} = {print_effect(e)}{req(r)}"
        case LemmaDecl(name=n, ctx=g, goal=goal, script=s, requires=r):
            by = f" by {{ {print_script(s)} }}" if s is not None else ""
            return f"lemma {n} {print_context(g)} : {print_goal(goal)}{req(r)}{by}"
        case CheckDecl(name=n):
            return f"check {n}"
    raise TypeError(d)


def pretty(f: SourceFile) -> str:
    return "\n".join(print_decl(d) for d in f.decls) + "\n"


def file_alpha_eq(a: SourceFile, b: SourceFile) -> bool:
    """Declaration-wise alpha equality of two elaborated files."""
    if len(a.decls) != len(b.decls):
        return False
    for da, db in zip(a.decls, b.decls):
        if type(da) is not type(db):
            return False
        match da:
            case TypeDecl():
                if (da.name, da.ty) != (db.name, db.ty):
                    return False
            case TermDecl():
                if (da.name, da.ctx, da.ty) != (db.name, db.ctx, db.ty) or da.term != db.term:
                    return False
            case EffectDecl():
                if (da.name, da.ctx) != (db.name, db.ctx) or da.eff != db.eff:
                    return False
            case LemmaDecl():
                if (da.name, da.ctx) != (db.name, db.ctx):
                    return False
                ja, jb = da.judgements(), db.judgements()
                if len(ja) != len(jb) or any(x != y for x, y in zip(ja, jb)):
                    return False
            case CheckDecl():
                if da.name != db.name:
                    return False
    return True
