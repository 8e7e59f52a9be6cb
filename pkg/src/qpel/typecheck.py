"""Typing and effect formation with affine contexts.

Checking is directed: a term is checked against a given type, with synthesis
as a convenience for scrutinee positions (sum injections cannot be inferred;
write a ``(M : A)`` ascription there).  Each variable may be consumed at most
once across the multiplicative positions of a rule; unused variables are
allowed everywhere and are routed to the last premise when contexts split.

Accepted judgements come with a reconstructible derivation whose nodes are
instances of the deduction rule schemas, so the derivation checker can
re-validate anything this module emits.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .printer import print_effect, print_term, print_type
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
    Judgement,
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
    bound_names,
    erase_ascriptions,
    free_vars,
    fresh,
    one,
    ovee_all,
    subst,
)


class QpelTypeError(Exception):
    pass


class ObligationError(QpelTypeError):
    """An orthogonality or coverage premise could not be discharged."""

    def __init__(self, judgement: EffLeq, detail=""):
        self.judgement = judgement
        extra = f": {detail}" if detail else ""
        super().__init__(
            "undischarged obligation "
            f"{_show_judgement(judgement)}{extra}"
        )


def _show_judgement(j: Judgement) -> str:
    names = ", ".join(f"{n} : {print_type(t)}" for n, t in j.ctx)
    pre = f"{names} |- " if names else "|- "
    if isinstance(j, Typing):
        return pre + f"{print_term(j.term)} : {print_type(j.ty)}"
    if isinstance(j, TermEq):
        return pre + f"{print_term(j.lhs)} = {print_term(j.rhs)} : {print_type(j.ty)}"
    if isinstance(j, EffForm):
        return pre + f"{print_effect(j.eff)} eff"
    return pre + f"{print_effect(j.low)} <= {print_effect(j.high)}"


@dataclass(frozen=True)
class Derivation:
    rule: str
    judgement: Judgement
    children: tuple = ()
    args: dict = field(default_factory=dict, compare=False)

    def rules_used(self) -> frozenset:
        out = {self.rule}
        for c in self.children:
            out |= c.rules_used()
        return frozenset(out)

    def size(self) -> int:
        return 1 + sum(c.size() for c in self.children)


class Resolver:
    """Discharges the <= obligations embedded in o+ and measure."""

    def resolve(self, goal: EffLeq) -> Derivation:
        raise ObligationError(goal, "no resolver available")


@dataclass(frozen=True)
class TypingResult:
    ty: Type
    used: frozenset
    derivation: Derivation


# ------------------------------------------------------------------ splitting


def split_context(g: Context, parts: list) -> list[Context]:
    """Deterministic partition of a context among premise variable sets.

    Each variable goes to the part that needs it; a variable needed by two
    parts is a linearity violation; unused variables go to the last part.
    """
    needs = [frozenset(p) for p in parts]
    for i, a in enumerate(needs):
        for b in needs[i + 1 :]:
            overlap = (a & b) & set(g.names())
            if overlap:
                raise QpelTypeError(
                    f"variable {sorted(overlap)[0]!r} is consumed in two places (no cloning)"
                )
    out = [[] for _ in parts]
    for name, ty in g:
        for i, ns in enumerate(needs):
            if name in ns:
                out[i].append((name, ty))
                break
        else:
            out[-1].append((name, ty))
    return [Context(tuple(entries)) for entries in out]


# ------------------------------------------------------------------ synthesis


def synth_type(g: Context, m: Term, extra=()) -> Type | None:
    """Usage-blind type synthesis; None where the shape is ambiguous."""
    env = dict(g.entries)
    env.update(dict(extra))

    def go(t, env):
        match t:
            case Var(name=x):
                return env.get(x)
            case Star():
                return TUnit()
            case Ascribe(ty=ty):
                return ty
            case Pair(left=a, right=b):
                ta, tb = go(a, env), go(b, env)
                return TTensor(ta, tb) if ta is not None and tb is not None else None
            case LetPair(x=x, y=y, pair=p, body=n):
                tp = go(p, env)
                if not isinstance(tp, TTensor):
                    return None
                return go(n, {**env, x: tp.left, y: tp.right})
            case Inl() | Inr():
                return None
            case Case(scrut=s, x=x, left=n, y=y, right=p):
                ts = go(s, env)
                if not isinstance(ts, TSum):
                    return None
                tl = go(n, {**env, x: ts.left})
                if tl is not None:
                    return tl
                return go(p, {**env, y: ts.right})
            case Measure(branches=bs):
                for _, t2 in bs:
                    ty = go(t2, env)
                    if ty is not None:
                        return ty
                return None
            case NewPlus() | PauliX() | PauliZ():
                return TQbit()
            case CZ():
                return TTensor(TQbit(), TQbit())
        return None

    return go(m, env)


# ------------------------------------------------------------------- checking


def _freshen_binder(x: str, body, avoid):
    if x in avoid:
        x2 = fresh(x, set(avoid) | free_vars(body) | bound_names(body))
        return x2, subst(body, x, Var(x2))
    return x, body


def check_term(g: Context, m: Term, ty: Type, resolver: Resolver) -> TypingResult:
    """Decide the typing judgement; returns the usage set and a derivation."""
    missing = free_vars(m) - set(g.names())
    if missing:
        raise QpelTypeError(f"unbound variable {sorted(missing)[0]!r}")
    return _check(g, m, ty, resolver)


def _check(g: Context, m: Term, ty: Type, resolver: Resolver) -> TypingResult:
    match m:
        case Ascribe(term=t, ty=asc):
            if asc != ty:
                raise QpelTypeError(
                    f"ascription {print_type(asc)} does not match expected {print_type(ty)}"
                )
            return _check(g, t, ty, resolver)

        case Var(name=x):
            actual = g.lookup(x)
            if actual is None:
                raise QpelTypeError(f"unbound variable {x!r}")
            if actual != ty:
                raise QpelTypeError(
                    f"variable {x} has type {print_type(actual)}, expected {print_type(ty)}"
                )
            return TypingResult(ty, frozenset({x}), Derivation("var", Typing(g, m, ty)))

        case Star():
            if not isinstance(ty, TUnit):
                raise QpelTypeError(f"unit value cannot have type {print_type(ty)}")
            return TypingResult(ty, frozenset(), Derivation("unit", Typing(g, m, ty)))

        case Pair(left=a, right=b):
            if not isinstance(ty, TTensor):
                raise QpelTypeError(f"a pair cannot have type {print_type(ty)}")
            ga, gb = split_context(g, [free_vars(a), free_vars(b)])
            ra = _check(ga, a, ty.left, resolver)
            rb = _check(gb, b, ty.right, resolver)
            return TypingResult(
                ty,
                ra.used | rb.used,
                Derivation("tensor", Typing(g, m, ty), (ra.derivation, rb.derivation)),
            )

        case LetPair(x=x, y=y, pair=p, body=n):
            tp = synth_type(g, p)
            if not isinstance(tp, TTensor):
                raise QpelTypeError(
                    f"cannot infer a tensor type for the let scrutinee {print_term(p)};"
                    " ascribe it"
                )
            x, n = _freshen_binder(x, n, g.names())
            y, n = _freshen_binder(y, n, set(g.names()) | {x})
            gp, gn = split_context(g, [free_vars(p), free_vars(n) - {x, y}])
            rp = _check(gp, p, tp, resolver)
            rn = _check(gn.extend(x, tp.left).extend(y, tp.right), n, ty, resolver)
            term = LetPair(x, y, p, n)
            return TypingResult(
                ty,
                rp.used | (rn.used - {x, y}),
                Derivation(
                    "let", Typing(g, term, ty), (rp.derivation, rn.derivation), {"ty": tp}
                ),
            )

        case Inl(arg=a):
            if not isinstance(ty, TSum):
                raise QpelTypeError(f"inl cannot have type {print_type(ty)}")
            ra = _check(g, a, ty.left, resolver)
            return TypingResult(
                ty, ra.used, Derivation("inl", Typing(g, m, ty), (ra.derivation,))
            )

        case Inr(arg=a):
            if not isinstance(ty, TSum):
                raise QpelTypeError(f"inr cannot have type {print_type(ty)}")
            ra = _check(g, a, ty.right, resolver)
            return TypingResult(
                ty, ra.used, Derivation("inr", Typing(g, m, ty), (ra.derivation,))
            )

        case Case(scrut=s, x=x, left=n, y=y, right=p):
            ts = synth_type(g, s)
            if not isinstance(ts, TSum):
                raise QpelTypeError(
                    f"cannot infer a sum type for the case scrutinee {print_term(s)};"
                    " ascribe it"
                )
            x, n = _freshen_binder(x, n, g.names())
            y, p = _freshen_binder(y, p, set(g.names()) | {x})
            branch_need = (free_vars(n) - {x}) | (free_vars(p) - {y})
            gs, gb = split_context(g, [free_vars(s), branch_need])
            rs = _check(gs, s, ts, resolver)
            rn = _check(gb.extend(x, ts.left), n, ty, resolver)
            rp = _check(gb.extend(y, ts.right), p, ty, resolver)
            term = Case(s, x, n, y, p)
            return TypingResult(
                ty,
                rs.used | (rn.used - {x}) | (rp.used - {y}),
                Derivation(
                    "case",
                    Typing(g, term, ty),
                    (rs.derivation, rn.derivation, rp.derivation),
                    {"ty": ts},
                ),
            )

        case Measure(branches=bs):
            eff_need = frozenset().union(*(free_vars(phi) for phi, _ in bs))
            term_need = frozenset().union(*(free_vars(t) for _, t in bs))
            ge, gt = split_context(g, [eff_need, term_need])
            for phi, _ in bs:
                check_effect(ge, phi, resolver)
            obligation = EffLeq(ge, one(), ovee_all([phi for phi, _ in bs]))
            ob_deriv = resolver.resolve(obligation)
            term_results = [_check(gt, t, ty, resolver) for _, t in bs]
            term = m
            return TypingResult(
                ty,
                eff_need | frozenset().union(*(r.used for r in term_results)),
                Derivation(
                    "measure",
                    Typing(g, term, ty),
                    (ob_deriv, *(r.derivation for r in term_results)),
                ),
            )

        case NewPlus():
            if not isinstance(ty, TQbit):
                raise QpelTypeError("plus is a qubit")
            return TypingResult(ty, frozenset(), Derivation("qbit-new", Typing(g, m, ty)))

        case PauliX(arg=a):
            if not isinstance(ty, TQbit):
                raise QpelTypeError("X produces a qubit")
            ra = _check(g, a, TQbit(), resolver)
            return TypingResult(
                ty, ra.used, Derivation("qbit-x", Typing(g, m, ty), (ra.derivation,))
            )

        case PauliZ(arg=a):
            if not isinstance(ty, TQbit):
                raise QpelTypeError("Z produces a qubit")
            ra = _check(g, a, TQbit(), resolver)
            return TypingResult(
                ty, ra.used, Derivation("qbit-z", Typing(g, m, ty), (ra.derivation,))
            )

        case CZ(left=a, right=b):
            if ty != TTensor(TQbit(), TQbit()):
                raise QpelTypeError("E produces a pair of qubits")
            ga, gb = split_context(g, [free_vars(a), free_vars(b)])
            ra = _check(ga, a, TQbit(), resolver)
            rb = _check(gb, b, TQbit(), resolver)
            return TypingResult(
                ty,
                ra.used | rb.used,
                Derivation(
                    "qbit-cz",
                    Typing(g, m, ty),
                    (ra.derivation, rb.derivation),
                ),
            )

    raise QpelTypeError(f"not a term: {m!r}")


@dataclass(frozen=True)
class EffectResult:
    eff: Effect
    used: frozenset
    derivation: Derivation


def check_effect(g: Context, e: Effect, resolver: Resolver) -> EffectResult:
    missing = free_vars(e) - set(g.names())
    if missing:
        raise QpelTypeError(f"unbound variable {sorted(missing)[0]!r}")
    return _check_eff(g, e, resolver)


def _check_eff(g: Context, e: Effect, resolver: Resolver) -> EffectResult:
    used = free_vars(e) & set(g.names())
    match e:
        case Zero():
            return EffectResult(e, used, Derivation("eff-0", EffForm(g, e)))

        case ScalarLit():
            # artifact extension: probability literals form like 0
            return EffectResult(e, used, Derivation("lit", EffForm(g, e)))

        case Orth(arg=a):
            ra = _check_eff(g, a, resolver)
            return EffectResult(
                e, used, Derivation("eff-bot", EffForm(g, e), (ra.derivation,))
            )

        case OSum(left=a, right=b):
            _check_eff(g, a, resolver)
            _check_eff(g, b, resolver)
            obligation = EffLeq(g, a, Orth(b))
            ob = resolver.resolve(obligation)
            return EffectResult(e, used, Derivation("eff-ovee", EffForm(g, e), (ob,)))

        case SMul(scalar=s, body=b):
            if free_vars(s):
                raise QpelTypeError(
                    f"scalar factor {print_effect(s)} must be closed"
                )
            rs = _check_eff(Context(), s, resolver)
            rb = _check_eff(g, b, resolver)
            return EffectResult(
                e, used, Derivation("eff-mult", EffForm(g, e), (rs.derivation, rb.derivation))
            )

        case CaseEff(scrut=m, x=x, left=a, y=y, right=b):
            ts = synth_type(g, m)
            if not isinstance(ts, TSum):
                raise QpelTypeError(
                    f"cannot infer a sum type for the caseE scrutinee {print_term(m)};"
                    " ascribe it"
                )
            x, a = _freshen_binder(x, a, g.names())
            y, b = _freshen_binder(y, b, set(g.names()) | {x})
            branch_need = (free_vars(a) - {x}) | (free_vars(b) - {y})
            gb, gm = split_context(g, [branch_need, free_vars(m)])
            ra = _check_eff(gb.extend(x, ts.left), a, resolver)
            rb = _check_eff(gb.extend(y, ts.right), b, resolver)
            rm = _check(gm, m, ts, resolver)
            out = CaseEff(m, x, a, y, b)
            return EffectResult(
                out,
                used,
                Derivation(
                    "eff-case",
                    EffForm(g, out),
                    (ra.derivation, rb.derivation, rm.derivation),
                    {"ty": ts},
                ),
            )

        case ProjPlus(term=m, angle=q):
            rm = _check(g, m, TQbit(), resolver)
            return EffectResult(
                e, used, Derivation("qbit-proj", EffForm(g, e), (rm.derivation,))
            )

    raise QpelTypeError(f"not an effect: {e!r}")


# -------------------------------------------------- judgement-level checking


def check_judgement(j: Judgement, resolver: Resolver) -> Judgement:
    """Check every component of a judgement; returns the ascription-erased
    judgement ready for derivation checking."""
    if isinstance(j, Typing):
        check_term(j.ctx, j.term, j.ty, resolver)
        return Typing(j.ctx, erase_ascriptions(j.term), j.ty)
    if isinstance(j, TermEq):
        check_term(j.ctx, j.lhs, j.ty, resolver)
        check_term(j.ctx, j.rhs, j.ty, resolver)
        return TermEq(j.ctx, erase_ascriptions(j.lhs), erase_ascriptions(j.rhs), j.ty)
    if isinstance(j, EffForm):
        check_effect(j.ctx, j.eff, resolver)
        return EffForm(j.ctx, erase_ascriptions(j.eff))
    if isinstance(j, EffLeq):
        check_effect(j.ctx, j.low, resolver)
        check_effect(j.ctx, j.high, resolver)
        return EffLeq(j.ctx, erase_ascriptions(j.low), erase_ascriptions(j.high))
    raise TypeError(j)


def show_judgement(j: Judgement) -> str:
    return _show_judgement(j)
