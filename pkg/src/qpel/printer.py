"""Pretty printer for the surface syntax.

Printing is canonical: nested non-associative operators are parenthesised, a
measure prints its branches one per line, and ``parse(pretty(x))`` returns an
alpha-equal tree.
"""
from __future__ import annotations

from fractions import Fraction

from .syntax import (
    Ascribe,
    Case,
    CaseEff,
    Context,
    CZ,
    Effect,
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
    TQbit,
    TSum,
    TTensor,
    TUnit,
    Type,
    Var,
    Zero,
)


def print_type(t: Type) -> str:
    return _ty(t, 0)


def _ty(t: Type, level: int) -> str:
    # levels: 0 sum, 1 tensor, 2 atom
    match t:
        case TUnit():
            return "I"
        case TQbit():
            return "qbit"
        case TSum(left=a, right=b):
            s = f"{_ty(a, 0)} + {_ty(b, 1)}"
            return f"({s})" if level > 0 else s
        case TTensor(left=a, right=b):
            s = f"{_ty(a, 1)} * {_ty(b, 2)}"
            return f"({s})" if level > 1 else s
    if hasattr(t, "name"):
        return t.name
    raise TypeError(f"not a type: {t!r}")


def rational(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def print_term(m: Term, indent: int = 0) -> str:
    return _tm(m, 0, indent)


def _tm(m: Term, level: int, ind: int) -> str:
    # levels: 0 top, 1 pair, 2 app, 3 atom
    def wrap(s, needed):
        return f"({s})" if level > needed else s

    match m:
        case Var(name=x):
            return x
        case Star():
            return "unit"
        case NewPlus():
            return "plus"
        case Ascribe(term=t, ty=ty):
            return f"({_tm(t, 0, ind)} : {print_type(ty)})"
        case Pair(left=a, right=b):
            left = _tm(a, 1, ind) if isinstance(a, Pair) else _tm(a, 2, ind)
            return wrap(f"{left} * {_tm(b, 2, ind)}", 1)
        case Inl(arg=a):
            return wrap(f"inl {_tm(a, 2, ind)}", 2)
        case Inr(arg=a):
            return wrap(f"inr {_tm(a, 2, ind)}", 2)
        case PauliX(arg=a):
            return wrap(f"X {_tm(a, 2, ind)}", 2)
        case PauliZ(arg=a):
            return wrap(f"Z {_tm(a, 2, ind)}", 2)
        case CZ(left=a, right=b):
            return wrap(f"E {_tm(a, 2, ind)} {_tm(b, 3, ind)}", 2)
        case LetPair(x=x, y=y, pair=p, body=n):
            s = f"let {x} * {y} = {_tm(p, 0, ind)} in {_tm(n, 0, ind)}"
            return wrap(s, 0)
        case Case(scrut=s, x=x, left=n, y=y, right=p):
            body = (
                f"case {_tm(s, 1, ind)} of inl {x} -> {_tm(n, 0, ind)}"
                f" | inr {y} -> {_tm(p, 0, ind)}"
            )
            return wrap(body, 0)
        case Measure(branches=bs):
            pad = "  " * (ind + 1)
            lines = [
                f"{pad}{print_effect(phi, ind + 1)} -> {_tm(t, 0, ind + 1)}"
                for phi, t in bs
            ]
            joined = "\n| ".join(lines)
            s = "measure {\n" + joined + "\n" + "  " * ind + "}"
            return wrap(s, 0)
    raise TypeError(f"not a term: {m!r}")


def print_effect(e: Effect, indent: int = 0) -> str:
    return _ef(e, 0, indent)


def _ef(e: Effect, level: int, ind: int) -> str:
    # levels: 0 top (caseE), 1 sum, 2 mult, 3 atom
    def wrap(s, needed):
        return f"({s})" if level > needed else s

    match e:
        case Zero():
            return "0"
        case ScalarLit(value=v):
            return rational(v)
        case Orth(arg=a):
            return f"bot({_ef(a, 0, ind)})"
        case ProjPlus(term=m, angle=q):
            return f"proj({_tm(m, 0, ind)}, {rational(q)})"
        case OSum(left=a, right=b):
            return wrap(f"{_ef(a, 2, ind)} o+ {_ef(b, 2, ind)}", 1)
        case SMul(scalar=a, body=b):
            return wrap(f"{_ef(a, 3, ind)} . {_ef(b, 2, ind)}", 2)
        case CaseEff(scrut=m, x=x, left=a, y=y, right=b):
            s = (
                f"caseE {_tm(m, 1, ind)} of inl {x} -> {_ef(a, 0, ind)}"
                f" | inr {y} -> {_ef(b, 0, ind)}"
            )
            return wrap(s, 0)
    raise TypeError(f"not an effect: {e!r}")


def print_context(g: Context) -> str:
    inner = ", ".join(f"{n} : {print_type(t)}" for n, t in g)
    return f"({inner})"
