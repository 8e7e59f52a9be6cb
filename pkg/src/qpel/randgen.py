"""Seeded random generators: raw ASTs for round-trip tests, and well-typed
terms and effects for the metatheorem and semantics suites.

Typed generation is validate-and-retry: a candidate is built by type-directed
construction, then checked; the rare ill-typed candidate (a linearity clash
from a shared variable pool) is discarded.  Everything is deterministic given
the Random instance.
"""
from __future__ import annotations

import random
from fractions import Fraction

from .derivation import Env
from .syntax import (
    Case,
    CaseEff,
    Context,
    CZ,
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
    TQbit,
    TSum,
    TTensor,
    TUnit,
    Var,
    Zero,
    one,
)
from .typecheck import QpelTypeError, check_effect, check_term

NAMES = ["a", "b", "c", "d", "u", "v", "w"]
ANGLES = [Fraction(0), Fraction(1, 2), Fraction(1), Fraction(3, 2), Fraction(1, 4)]
LITS = [Fraction(1, 2), Fraction(1, 3), Fraction(1, 4), Fraction(3, 4)]


# ------------------------------------------------------------------- raw ASTs


def raw_type(rng: random.Random, depth=2, qbit=True):
    opts = ["unit", "tensor", "sum"] + (["qbit"] if qbit else [])
    pick = rng.choice(opts if depth > 0 else (["unit"] + (["qbit"] if qbit else [])))
    if pick == "unit":
        return TUnit()
    if pick == "qbit":
        return TQbit()
    if pick == "tensor":
        return TTensor(raw_type(rng, depth - 1, qbit), raw_type(rng, depth - 1, qbit))
    return TSum(raw_type(rng, depth - 1, qbit), raw_type(rng, depth - 1, qbit))


def raw_term(rng: random.Random, depth=3):
    """An arbitrary term tree; only the grammar matters, not typing."""
    leafs = ["var", "star", "plus"]
    nodes = ["pair", "let", "inl", "inr", "case", "measure", "x", "z", "cz"]
    pick = rng.choice(leafs if depth <= 0 else leafs + nodes * 2)
    v = lambda: rng.choice(NAMES)
    r = lambda: raw_term(rng, depth - 1)
    if pick == "var":
        return Var(v())
    if pick == "star":
        return Star()
    if pick == "plus":
        return NewPlus()
    if pick == "pair":
        return Pair(r(), r())
    if pick == "let":
        return LetPair(v(), v() + "'", r(), r())
    if pick == "inl":
        return Inl(r())
    if pick == "inr":
        return Inr(r())
    if pick == "case":
        return Case(r(), v(), r(), v(), r())
    if pick == "measure":
        n = rng.randint(1, 3)
        return Measure(tuple((raw_effect(rng, depth - 1), r()) for _ in range(n)))
    if pick == "x":
        return PauliX(r())
    if pick == "z":
        return PauliZ(r())
    return CZ(r(), r())


def raw_effect(rng: random.Random, depth=2):
    leafs = ["zero", "one", "lit", "proj"]
    nodes = ["orth", "osum", "smul", "caseE"]
    pick = rng.choice(leafs if depth <= 0 else leafs + nodes * 2)
    if pick == "zero":
        return Zero()
    if pick == "one":
        return one()
    if pick == "lit":
        return ScalarLit(rng.choice(LITS))
    if pick == "proj":
        return ProjPlus(raw_term(rng, max(depth - 1, 0)), rng.choice(ANGLES))
    if pick == "orth":
        return Orth(raw_effect(rng, depth - 1))
    if pick == "osum":
        return OSum(raw_effect(rng, depth - 1), raw_effect(rng, depth - 1))
    if pick == "smul":
        return SMul(raw_effect(rng, depth - 1), raw_effect(rng, depth - 1))
    return CaseEff(
        raw_term(rng, max(depth - 1, 0)),
        rng.choice(NAMES),
        raw_effect(rng, depth - 1),
        rng.choice(NAMES),
        raw_effect(rng, depth - 1),
    )


# ------------------------------------------------------------ well-typed terms


def typed_type(rng: random.Random, depth=2, qbit=False):
    if depth <= 0:
        return rng.choice([TUnit(), TQbit()] if qbit else [TUnit()])
    pick = rng.randrange(5 if qbit else 4)
    if pick == 0:
        return TUnit()
    if pick == 1:
        return TTensor(typed_type(rng, depth - 1, qbit), typed_type(rng, depth - 1, qbit))
    if pick == 2 or pick == 3:
        return TSum(typed_type(rng, depth - 1, qbit), typed_type(rng, depth - 1, qbit))
    return TQbit()


def canonical(ty):
    """A closed inhabitant of any type."""
    match ty:
        case TUnit():
            return Star()
        case TTensor(left=a, right=b):
            return Pair(canonical(a), canonical(b))
        case TSum(left=a):
            return Inl(canonical(a))
        case TQbit():
            return NewPlus()
    raise TypeError(ty)


def _candidate_term(rng, avail, ty, depth):
    """avail: list of (name, type) this subterm may consume."""
    matching = [n for n, t in avail if t == ty]
    if depth <= 0:
        if matching and rng.random() < 0.8:
            return Var(rng.choice(matching))
        return canonical(ty)
    roll = rng.random()
    if matching and roll < 0.35:
        return Var(rng.choice(matching))
    if roll < 0.5 and avail:
        # wrap in a measurement over a coverable effect family
        phi = _candidate_effect(rng, [p for p in avail if rng.random() < 0.4], depth - 1)
        branches = ((phi, _candidate_term(rng, [], ty, depth - 1)),
                    (Orth(phi), _candidate_term(rng, [], ty, depth - 1)))
        return Measure(branches)
    match ty:
        case TUnit():
            return Star()
        case TTensor(left=a, right=b):
            cut = rng.randrange(len(avail) + 1) if avail else 0
            picks = set(rng.sample(range(len(avail)), cut)) if avail else set()
            left_avail = [p for i, p in enumerate(avail) if i in picks]
            right_avail = [p for i, p in enumerate(avail) if i not in picks]
            return Pair(
                _candidate_term(rng, left_avail, a, depth - 1),
                _candidate_term(rng, right_avail, b, depth - 1),
            )
        case TSum(left=a, right=b):
            if rng.random() < 0.5:
                return Inl(_candidate_term(rng, avail, a, depth - 1))
            return Inr(_candidate_term(rng, avail, b, depth - 1))
        case TQbit():
            qvars = [n for n, t in avail if t == TQbit()]
            if qvars and rng.random() < 0.7:
                base = Var(rng.choice(qvars))
            else:
                base = NewPlus()
            for _ in range(rng.randrange(3)):
                base = PauliX(base) if rng.random() < 0.5 else PauliZ(base)
            return base
    return canonical(ty)


def _candidate_effect(rng, avail, depth):
    qvars = [n for n, t in avail if t == TQbit()]
    svars = [(n, t) for n, t in avail if isinstance(t, TSum)]
    roll = rng.random()
    if depth <= 0 or roll < 0.25:
        if qvars:
            return ProjPlus(Var(rng.choice(qvars)), rng.choice(ANGLES))
        return rng.choice([Zero(), one(), ScalarLit(rng.choice(LITS))])
    if roll < 0.4:
        return Orth(_candidate_effect(rng, avail, depth - 1))
    if roll < 0.55:
        inner = _candidate_effect(rng, avail, depth - 1)
        return OSum(inner, Orth(inner))
    if roll < 0.7:
        return SMul(ScalarLit(rng.choice(LITS)), _candidate_effect(rng, avail, depth - 1))
    if svars and roll < 0.85:
        n, t = rng.choice(svars)
        rest = [p for p in avail if p[0] != n]
        x = "cx"
        y = "cy"
        return CaseEff(
            Var(n),
            x,
            _candidate_effect(rng, rest + [(x, t.left)], depth - 1),
            y,
            _candidate_effect(rng, rest + [(y, t.right)], depth - 1),
        )
    if qvars:
        return ProjPlus(Var(rng.choice(qvars)), rng.choice(ANGLES))
    return rng.choice([Zero(), one(), ScalarLit(rng.choice(LITS))])


def typed_term(rng: random.Random, ctx: Context, ty, depth=3, tries=40):
    """A term with ctx |- term : ty, discharging obligations automatically."""
    env = Env()
    for _ in range(tries):
        cand = _candidate_term(rng, list(ctx.entries), ty, depth)
        try:
            check_term(ctx, cand, ty, env.resolver())
            return cand
        except QpelTypeError:
            continue
    return canonical(ty)


def typed_effect(rng: random.Random, ctx: Context, depth=2, tries=40):
    env = Env()
    for _ in range(tries):
        cand = _candidate_effect(rng, list(ctx.entries), depth)
        try:
            check_effect(ctx, cand, env.resolver())
            return cand
        except QpelTypeError:
            continue
    return Zero()


def typed_context(rng: random.Random, size=2, qbit=False) -> Context:
    entries = tuple(
        (NAMES[i], typed_type(rng, 1, qbit)) for i in range(size)
    )
    return Context(entries)
