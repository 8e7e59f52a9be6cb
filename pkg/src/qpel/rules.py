"""Deduction rule schemas.

Each schema matches a candidate conclusion, reads off the rule's metavariables
(consulting explicit script arguments where the conclusion does not determine
them), and produces the list of premises together with the context zones the
conclusion is assembled from.  The checker in `derivation` reconciles those
zones against child derivations or splits the goal context itself.

Premise shapes use zone variables: a premise context is one zone plus bound
extensions, and the conclusion context is the disjoint union of the listed
zones plus any fixed entries.  A zone name of "" demands the empty context.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .syntax import (
    Case,
    CaseEff,
    Context,
    CZ,
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
    TermEq,
    TQbit,
    TSum,
    TTensor,
    TUnit,
    Typing,
    Var,
    Zero,
    abstraction_eq,
    bound_names,
    free_vars,
    fresh,
    is_one,
    one,
    ovee_all,
    subst,
    subst_many,
)


class RuleMismatch(Exception):
    """Raised when a conclusion does not instantiate the named schema."""


def need(cond, msg):
    if not cond:
        raise RuleMismatch(msg)


def need_arg(args, key, rule):
    if key not in args:
        raise RuleMismatch(f"rule {rule} needs an explicit argument {key!r} here")
    return args[key]


# premise goal shapes: ("ty", m, a) ("eq", m, n, a) ("eff", e) ("leq", lo, hi)
# ("equiv", a, b)
@dataclass(frozen=True)
class Premise:
    zone: str
    shape: tuple
    ext: tuple = ()

    def to_judgement(self, zone_ctx: Context):
        g = Context(zone_ctx.entries + tuple(self.ext))
        kind = self.shape[0]
        if kind == "ty":
            return Typing(g, self.shape[1], self.shape[2])
        if kind == "eq":
            return TermEq(g, self.shape[1], self.shape[2], self.shape[3])
        if kind == "eff":
            return EffForm(g, self.shape[1])
        if kind == "leq":
            return EffLeq(g, self.shape[1], self.shape[2])
        raise AssertionError(self.shape)  # "equiv" is expanded by the checker


@dataclass(frozen=True)
class Instantiation:
    premises: tuple
    zones: tuple
    fixed: tuple = ()


@dataclass(frozen=True)
class Schema:
    name: str
    pack: str
    concludes: frozenset
    match: object = field(compare=False)  # fn(goal, args, synth) -> [Instantiation]


def p_ty(zone, m, a, ext=()):
    return Premise(zone, ("ty", m, a), tuple(ext))


def p_eq(zone, m, n, a, ext=()):
    return Premise(zone, ("eq", m, n, a), tuple(ext))


def p_eff(zone, e, ext=()):
    return Premise(zone, ("eff", e), tuple(ext))


def p_leq(zone, lo, hi, ext=()):
    return Premise(zone, ("leq", lo, hi), tuple(ext))


def p_equiv(zone, a, b, ext=()):
    return Premise(zone, ("equiv", a, b), tuple(ext))


def inst(premises, zones, fixed=()):
    return Instantiation(tuple(premises), tuple(zones), tuple(fixed))


def scrut_type(goal_ctx, m, args, synth, extra=(), key="ty"):
    """The type of a scrutinee: explicit argument first, synthesis second."""
    if key in args:
        return args[key]
    t = synth(m, extra)
    need(t is not None, f"cannot infer the type of {m!r}; supply the {key!r} argument")
    return t


def as_sum(t, what):
    need(isinstance(t, TSum), f"{what} must have a sum type, got {t!r}")
    return t.left, t.right


def as_tensor(t, what):
    need(isinstance(t, TTensor), f"{what} must have a tensor type, got {t!r}")
    return t.left, t.right


def fresh_pair(base1, base2, avoid):
    x = fresh(base1, avoid)
    y = fresh(base2, set(avoid) | {x})
    return x, y


def alpha2(got, want, what):
    need(got == want, f"{what}: expected {want!r}, found {got!r}")


def both_readings(goal: EffLeq):
    return [(goal.low, goal.high), (goal.high, goal.low)]


def angle_neg(q: Fraction) -> Fraction:
    return (-q) % 2


def angle_minus_pi(q: Fraction) -> Fraction:
    return (q - 1) % 2


# --------------------------------------------------------------------- schemas


_SCHEMAS: dict[str, Schema] = {}


def rule(name, pack="core", concludes=()):
    def deco(fn):
        _SCHEMAS[name] = Schema(name, pack, frozenset(concludes), fn)
        return fn

    return deco


# ---- structural


@rule("exch", concludes=("ty", "eq", "eff", "leq"))
def _exch(goal, args, synth):
    if isinstance(goal, Typing):
        shape = ("ty", goal.term, goal.ty)
    elif isinstance(goal, TermEq):
        shape = ("eq", goal.lhs, goal.rhs, goal.ty)
    elif isinstance(goal, EffForm):
        shape = ("eff", goal.eff)
    else:
        shape = ("leq", goal.low, goal.high)
    return [inst([Premise("G", shape)], ["G"])]


# ---- term formation


@rule("var", concludes=("ty",))
def _var(goal, args, synth):
    need(isinstance(goal, Typing) and isinstance(goal.term, Var), "conclusion is not a variable typing")
    ty = goal.ctx.lookup(goal.term.name)
    need(ty is not None, f"variable {goal.term.name} not in context")
    need(ty == goal.ty, f"variable {goal.term.name} has type {ty!r}, not {goal.ty!r}")
    return [inst([], ["G"])]


@rule("tensor", concludes=("ty",))
def _tensor(goal, args, synth):
    need(isinstance(goal, Typing) and isinstance(goal.term, Pair), "conclusion is not a pair typing")
    a, b = as_tensor(goal.ty, "a pair")
    return [inst([p_ty("G", goal.term.left, a), p_ty("D", goal.term.right, b)], ["G", "D"])]


@rule("let", concludes=("ty",))
def _let(goal, args, synth):
    need(isinstance(goal, Typing) and isinstance(goal.term, LetPair), "conclusion is not a let typing")
    t = goal.term
    ab = scrut_type(goal.ctx, t.pair, args, synth)
    a, b = as_tensor(ab, "the let scrutinee")
    x, y, body = _freshen2(t.x, t.y, t.body, goal.ctx.names())
    return [
        inst(
            [p_ty("G", t.pair, ab), p_ty("D", body, goal.ty, ext=((x, a), (y, b)))],
            ["G", "D"],
        )
    ]


@rule("unit", concludes=("ty",))
def _unit(goal, args, synth):
    need(
        isinstance(goal, Typing) and isinstance(goal.term, Star) and isinstance(goal.ty, TUnit),
        "conclusion is not a unit typing",
    )
    return [inst([], ["G"])]


@rule("inl", concludes=("ty",))
def _inl(goal, args, synth):
    need(isinstance(goal, Typing) and isinstance(goal.term, Inl), "conclusion is not an inl typing")
    a, b = as_sum(goal.ty, "inl")
    return [inst([p_ty("G", goal.term.arg, a)], ["G"])]


@rule("inr", concludes=("ty",))
def _inr(goal, args, synth):
    need(isinstance(goal, Typing) and isinstance(goal.term, Inr), "conclusion is not an inr typing")
    a, b = as_sum(goal.ty, "inr")
    return [inst([p_ty("G", goal.term.arg, b)], ["G"])]


@rule("case", concludes=("ty",))
def _case(goal, args, synth):
    need(isinstance(goal, Typing) and isinstance(goal.term, Case), "conclusion is not a case typing")
    t = goal.term
    ab = scrut_type(goal.ctx, t.scrut, args, synth)
    a, b = as_sum(ab, "the case scrutinee")
    x, left = _freshen1(t.x, t.left, goal.ctx.names())
    y, right = _freshen1(t.y, t.right, goal.ctx.names())
    return [
        inst(
            [
                p_ty("G", t.scrut, ab),
                p_ty("D", left, goal.ty, ext=((x, a),)),
                p_ty("D", right, goal.ty, ext=((y, b),)),
            ],
            ["G", "D"],
        )
    ]


@rule("measure", concludes=("ty",))
def _measure(goal, args, synth):
    need(isinstance(goal, Typing) and isinstance(goal.term, Measure), "conclusion is not a measure typing")
    bs = goal.term.branches
    prem = [p_leq("G", one(), ovee_all([phi for phi, _ in bs]))]
    prem += [p_ty("D", m, goal.ty) for _, m in bs]
    return [inst(prem, ["G", "D"])]


# ---- equality scaffolding


@rule("ref", concludes=("eq",))
def _ref(goal, args, synth):
    need(isinstance(goal, TermEq), "conclusion is not a term equality")
    need(goal.lhs == goal.rhs, "the two sides are not alpha-equal")
    return [inst([p_ty("G", goal.lhs, goal.ty)], ["G"])]


@rule("sym", concludes=("eq",))
def _sym(goal, args, synth):
    need(isinstance(goal, TermEq), "conclusion is not a term equality")
    return [inst([p_eq("G", goal.rhs, goal.lhs, goal.ty)], ["G"])]


@rule("trans", concludes=("eq",))
def _trans(goal, args, synth):
    need(isinstance(goal, TermEq), "conclusion is not a term equality")
    mid = need_arg(args, "via", "trans")
    return [
        inst(
            [p_eq("G", goal.lhs, mid, goal.ty), p_eq("G", mid, goal.rhs, goal.ty)],
            ["G"],
        )
    ]


# ---- congruences


@rule("tensor-eq", concludes=("eq",))
def _tensor_eq(goal, args, synth):
    need(
        isinstance(goal, TermEq) and isinstance(goal.lhs, Pair) and isinstance(goal.rhs, Pair),
        "both sides must be pairs",
    )
    a, b = as_tensor(goal.ty, "a pair equality")
    return [
        inst(
            [
                p_eq("G", goal.lhs.left, goal.rhs.left, a),
                p_eq("D", goal.lhs.right, goal.rhs.right, b),
            ],
            ["G", "D"],
        )
    ]


def _freshen1(x, body, avoid):
    if x in avoid:
        x2 = fresh(x, set(avoid) | free_vars(body) | bound_names(body))
        return x2, subst(body, x, Var(x2))
    return x, body


def _freshen2(x, y, body, avoid):
    avoid = set(avoid)
    x2, body = _freshen1(x, body, avoid)
    y2, body = _freshen1(y, body, avoid | {x2})
    return x2, y2, body


def _align_let(l: LetPair, r: LetPair, avoid):
    """Rename both lets to shared fresh binders; returns (x, y, bodyL, bodyR)."""
    avoid = set(avoid) | free_vars(l) | free_vars(r) | bound_names(l) | bound_names(r)
    x, y = fresh_pair(l.x, l.y, avoid)
    bl = subst_many(l.body, {l.x: Var(x), l.y: Var(y)})
    br = subst_many(r.body, {r.x: Var(x), r.y: Var(y)})
    return x, y, bl, br


def _align_case(l, r, avoid):
    avoid = set(avoid) | free_vars(l) | free_vars(r) | bound_names(l) | bound_names(r)
    x = fresh(l.x, avoid)
    y = fresh(l.y, avoid | {x})
    ll = subst(l.left, l.x, Var(x))
    rl = subst(r.left, r.x, Var(x))
    lr = subst(l.right, l.y, Var(y))
    rr = subst(r.right, r.y, Var(y))
    return x, y, ll, rl, lr, rr


@rule("let-eq", concludes=("eq",))
def _let_eq(goal, args, synth):
    need(
        isinstance(goal, TermEq) and isinstance(goal.lhs, LetPair) and isinstance(goal.rhs, LetPair),
        "both sides must be lets",
    )
    l, r = goal.lhs, goal.rhs
    ab = scrut_type(goal.ctx, l.pair, args, synth)
    a, b = as_tensor(ab, "the let scrutinee")
    x, y, bl, br = _align_let(l, r, goal.ctx.names())
    return [
        inst(
            [
                p_eq("G", l.pair, r.pair, ab),
                p_eq("D", bl, br, goal.ty, ext=((x, a), (y, b))),
            ],
            ["G", "D"],
        )
    ]


@rule("inl-eq", concludes=("eq",))
def _inl_eq(goal, args, synth):
    need(
        isinstance(goal, TermEq) and isinstance(goal.lhs, Inl) and isinstance(goal.rhs, Inl),
        "both sides must be inl",
    )
    a, b = as_sum(goal.ty, "inl")
    return [inst([p_eq("G", goal.lhs.arg, goal.rhs.arg, a)], ["G"])]


@rule("inr-eq", concludes=("eq",))
def _inr_eq(goal, args, synth):
    need(
        isinstance(goal, TermEq) and isinstance(goal.lhs, Inr) and isinstance(goal.rhs, Inr),
        "both sides must be inr",
    )
    a, b = as_sum(goal.ty, "inr")
    return [inst([p_eq("G", goal.lhs.arg, goal.rhs.arg, b)], ["G"])]


@rule("case-eq", concludes=("eq",))
def _case_eq(goal, args, synth):
    need(
        isinstance(goal, TermEq) and isinstance(goal.lhs, Case) and isinstance(goal.rhs, Case),
        "both sides must be cases",
    )
    l, r = goal.lhs, goal.rhs
    ab = scrut_type(goal.ctx, l.scrut, args, synth)
    a, b = as_sum(ab, "the case scrutinee")
    x, y, ll, rl, lr, rr = _align_case(l, r, goal.ctx.names())
    return [
        inst(
            [
                p_eq("G", l.scrut, r.scrut, ab),
                p_eq("D", ll, rl, goal.ty, ext=((x, a),)),
                p_eq("D", lr, rr, goal.ty, ext=((y, b),)),
            ],
            ["G", "D"],
        )
    ]


@rule("measure-eq", concludes=("eq",))
def _measure_eq(goal, args, synth):
    need(
        isinstance(goal, TermEq)
        and isinstance(goal.lhs, Measure)
        and isinstance(goal.rhs, Measure),
        "both sides must be measures",
    )
    bl, br = goal.lhs.branches, goal.rhs.branches
    need(len(bl) == len(br), "branch counts differ")
    prem = [p_leq("G", one(), ovee_all([phi for phi, _ in bl]))]
    prem += [p_equiv("G", phi, psi) for (phi, _), (psi, _) in zip(bl, br)]
    prem += [p_eq("D", m, n, goal.ty) for (_, m), (_, n) in zip(bl, br)]
    return [inst(prem, ["G", "D"])]


# ---- beta conversions


@rule("beta-tensor", concludes=("eq",))
def _beta_tensor(goal, args, synth):
    need(isinstance(goal, TermEq), "conclusion is not a term equality")
    l = goal.lhs
    need(
        isinstance(l, LetPair) and isinstance(l.pair, Pair),
        "left side must be `let x * y = M * N in P`",
    )
    m, n = l.pair.left, l.pair.right
    if "ty" in args:
        a, b = as_tensor(args["ty"], "the pair")
    else:
        a = synth(m, ())
        b = synth(n, ())
        need(a is not None and b is not None, "cannot infer pair component types; supply `ty`")
    alpha2(goal.rhs, subst_many(l.body, {l.x: m, l.y: n}), "right side")
    return [
        inst(
            [
                p_ty("G", m, a),
                p_ty("D", n, b),
                p_ty("T", l.body, goal.ty, ext=((l.x, a), (l.y, b))),
            ],
            ["G", "D", "T"],
        )
    ]


@rule("beta-plus-1", concludes=("eq",))
def _beta_plus_1(goal, args, synth):
    need(isinstance(goal, TermEq), "conclusion is not a term equality")
    l = goal.lhs
    need(isinstance(l, Case) and isinstance(l.scrut, Inl), "left side must be `case inl M of ...`")
    m = l.scrut.arg
    ab = args.get("ty")
    need(ab is not None, "beta-plus-1 needs the `ty` argument (the scrutinee sum type)")
    a, b = as_sum(ab, "the scrutinee")
    alpha2(goal.rhs, subst(l.left, l.x, m), "right side")
    return [
        inst(
            [
                p_ty("G", m, a),
                p_ty("D", l.left, goal.ty, ext=((l.x, a),)),
                p_ty("D", l.right, goal.ty, ext=((l.y, b),)),
            ],
            ["G", "D"],
        )
    ]


@rule("beta-plus-2", concludes=("eq",))
def _beta_plus_2(goal, args, synth):
    need(isinstance(goal, TermEq), "conclusion is not a term equality")
    l = goal.lhs
    need(isinstance(l, Case) and isinstance(l.scrut, Inr), "left side must be `case inr M of ...`")
    m = l.scrut.arg
    ab = args.get("ty")
    need(ab is not None, "beta-plus-2 needs the `ty` argument (the scrutinee sum type)")
    a, b = as_sum(ab, "the scrutinee")
    alpha2(goal.rhs, subst(l.right, l.y, m), "right side")
    return [
        inst(
            [
                p_ty("G", m, b),
                p_ty("D", l.left, goal.ty, ext=((l.x, a),)),
                p_ty("D", l.right, goal.ty, ext=((l.y, b),)),
            ],
            ["G", "D"],
        )
    ]


# ---- eta conversions


@rule("eta-tensor", concludes=("eq",))
def _eta_tensor(goal, args, synth):
    need(isinstance(goal, TermEq) and isinstance(goal.ty, TTensor), "needs a tensor-typed equality")
    r = goal.rhs
    need(isinstance(r, LetPair), "right side must be `let x * y = M in x * y`")
    need(r.body == Pair(Var(r.x), Var(r.y)), "let body must repack its binders")
    alpha2(r.pair, goal.lhs, "let scrutinee")
    return [inst([p_ty("G", goal.lhs, goal.ty)], ["G"])]


@rule("eta-unit", concludes=("eq",))
def _eta_unit(goal, args, synth):
    need(
        isinstance(goal, TermEq) and isinstance(goal.ty, TUnit) and isinstance(goal.rhs, Star),
        "conclusion must equate a unit-typed term with `unit`",
    )
    return [inst([p_ty("G", goal.lhs, goal.ty)], ["G"])]


@rule("eta-plus", concludes=("eq",))
def _eta_plus(goal, args, synth):
    need(isinstance(goal, TermEq) and isinstance(goal.ty, TSum), "needs a sum-typed equality")
    r = goal.rhs
    need(isinstance(r, Case), "right side must be an identity case")
    need(
        r.left == Inl(Var(r.x)) and r.right == Inr(Var(r.y)),
        "case branches must re-inject their binders",
    )
    alpha2(r.scrut, goal.lhs, "case scrutinee")
    return [inst([p_ty("G", goal.lhs, goal.ty)], ["G"])]


# ---- commuting conversions


@rule("let-commute", concludes=("eq",))
def _let_commute(goal, args, synth):
    need(isinstance(goal, TermEq), "conclusion is not a term equality")
    l = goal.lhs
    need(
        isinstance(l, LetPair) and isinstance(l.body, LetPair),
        "left side must be `let x*y = M in let t*u = N in P`",
    )
    inner = l.body
    m, n, p = l.pair, inner.pair, inner.body
    ab = scrut_type(goal.ctx, m, args, synth)
    a, b = as_tensor(ab, "the outer scrutinee")
    cd = scrut_type(goal.ctx, n, args, synth, extra=((l.x, a), (l.y, b)), key="ty2")
    c, d = as_tensor(cd, "the inner scrutinee")
    expected = _mk_let(inner.x, inner.y, _mk_let(l.x, l.y, m, n), p)
    alpha2(goal.rhs, expected, "right side")
    return [
        inst(
            [
                p_ty("G", m, ab),
                p_ty("D", n, cd, ext=((l.x, a), (l.y, b))),
                p_ty("T", p, goal.ty, ext=((inner.x, c), (inner.y, d))),
            ],
            ["G", "D", "T"],
        )
    ]


def _mk_let(x, y, pair, body):
    """LetPair that freshens binders against the scrutinee's free variables."""
    clash = free_vars(pair) & {x, y}
    if clash:
        avoid = free_vars(pair) | free_vars(body) | bound_names(body) | {x, y}
        x2, y2 = fresh_pair(x, y, avoid)
        body = subst_many(body, {x: Var(x2), y: Var(y2)})
        x, y = x2, y2
    return LetPair(x, y, pair, body)


def _mk_case(scrut, x, left, y, right):
    clash = free_vars(scrut) & {x, y}
    if clash:
        avoid = free_vars(scrut) | free_vars(left) | free_vars(right) | bound_names(left) | bound_names(right) | {x, y}
        x2 = fresh(x, avoid)
        y2 = fresh(y, avoid | {x2})
        left = subst(left, x, Var(x2))
        right = subst(right, y, Var(y2))
        x, y = x2, y2
    return Case(scrut, x, left, y, right)


@rule("let-case", concludes=("eq",))
def _let_case(goal, args, synth):
    need(isinstance(goal, TermEq), "conclusion is not a term equality")
    l = goal.lhs
    need(
        isinstance(l, LetPair) and isinstance(l.pair, Case),
        "left side must be `let z*t = case M of ... in Q`",
    )
    cs = l.pair
    m, n, p, q = cs.scrut, cs.left, cs.right, l.body
    ab = scrut_type(goal.ctx, m, args, synth)
    a, b = as_sum(ab, "the case scrutinee")
    cd = scrut_type(goal.ctx, n, args, synth, extra=((cs.x, a),), key="ty2")
    c, d = as_tensor(cd, "the case branches")
    expected = _mk_case(
        m, cs.x, _mk_let(l.x, l.y, n, q), cs.y, _mk_let(l.x, l.y, p, q)
    )
    alpha2(goal.rhs, expected, "right side")
    return [
        inst(
            [
                p_ty("G", m, ab),
                p_ty("D", n, cd, ext=((cs.x, a),)),
                p_ty("D", p, cd, ext=((cs.y, b),)),
                p_ty("T", q, goal.ty, ext=((l.x, c), (l.y, d))),
            ],
            ["G", "D", "T"],
        )
    ]


@rule("let-tensor", concludes=("eq",))
def _let_tensor(goal, args, synth):
    need(isinstance(goal, TermEq), "conclusion is not a term equality")
    l = goal.lhs
    need(
        isinstance(l, Pair) and isinstance(l.left, LetPair),
        "left side must be `(let x*y = M in N) * P`",
    )
    lt, p = l.left, l.right
    c, d = as_tensor(goal.ty, "the conclusion")
    ab = scrut_type(goal.ctx, lt.pair, args, synth)
    a, b = as_tensor(ab, "the let scrutinee")
    expected = _mk_let(lt.x, lt.y, lt.pair, Pair(lt.body, p))
    alpha2(goal.rhs, expected, "right side")
    return [
        inst(
            [
                p_ty("G", lt.pair, ab),
                p_ty("D", lt.body, c, ext=((lt.x, a), (lt.y, b))),
                p_ty("T", p, d),
            ],
            ["G", "D", "T"],
        )
    ]


@rule("case-commute", concludes=("eq",))
def _case_commute(goal, args, synth):
    need(isinstance(goal, TermEq), "conclusion is not a term equality")
    l = goal.lhs
    need(
        isinstance(l, Case) and isinstance(l.left, Case) and isinstance(l.right, Case),
        "left side must be a case of cases",
    )
    m = l.scrut
    inl_case, inr_case = l.left, l.right
    n, p = inl_case.scrut, inr_case.scrut
    q, r = inl_case.left, inl_case.right
    need(
        abstraction_eq([inr_case.x], inr_case.left, [inl_case.x], q)
        and abstraction_eq([inr_case.y], inr_case.right, [inl_case.y], r),
        "the two inner cases must share their branches",
    )
    ab = scrut_type(goal.ctx, m, args, synth)
    a, b = as_sum(ab, "the outer scrutinee")
    cd = scrut_type(goal.ctx, n, args, synth, extra=((l.x, a),), key="ty2")
    c, d = as_sum(cd, "the inner scrutinee")
    expected = _mk_case(_mk_case(m, l.x, n, l.y, p), inl_case.x, q, inl_case.y, r)
    alpha2(goal.rhs, expected, "right side")
    return [
        inst(
            [
                p_ty("G", m, ab),
                p_ty("D", n, cd, ext=((l.x, a),)),
                p_ty("D", p, cd, ext=((l.y, b),)),
                p_ty("T", q, goal.ty, ext=((inl_case.x, c),)),
                p_ty("T", r, goal.ty, ext=((inl_case.y, d),)),
            ],
            ["G", "D", "T"],
        )
    ]


@rule("case-tensor", concludes=("eq",))
def _case_tensor(goal, args, synth):
    need(isinstance(goal, TermEq), "conclusion is not a term equality")
    l = goal.lhs
    need(
        isinstance(l, Pair) and isinstance(l.left, Case),
        "left side must be `(case Q of ...) * P`",
    )
    cs, p = l.left, l.right
    c, d = as_tensor(goal.ty, "the conclusion")
    ab = scrut_type(goal.ctx, cs.scrut, args, synth)
    a, b = as_sum(ab, "the case scrutinee")
    expected = _mk_case(cs.scrut, cs.x, Pair(cs.left, p), cs.y, Pair(cs.right, p))
    alpha2(goal.rhs, expected, "right side")
    return [
        inst(
            [
                p_ty("G", cs.scrut, ab),
                p_ty("D", cs.left, c, ext=((cs.x, a),)),
                p_ty("D", cs.right, c, ext=((cs.y, b),)),
                p_ty("T", p, d),
            ],
            ["G", "D", "T"],
        )
    ]


# ---- measurement equations


@rule("measure-perm", concludes=("eq",))
def _measure_perm(goal, args, synth):
    need(
        isinstance(goal, TermEq)
        and isinstance(goal.lhs, Measure)
        and isinstance(goal.rhs, Measure),
        "both sides must be measures",
    )
    perm = need_arg(args, "perm", "measure-perm")
    bl, br = goal.lhs.branches, goal.rhs.branches
    n = len(bl)
    need(len(br) == n and len(perm) == n, "permutation length mismatch")
    need(sorted(perm) == list(range(1, n + 1)), f"{perm} is not a permutation of 1..{n}")
    for i, (phi, m) in enumerate(br):
        phi0, m0 = bl[perm[i] - 1]
        need(phi == phi0 and m == m0, f"branch {i + 1} is not branch {perm[i]} of the left side")
    prem = [p_leq("G", one(), ovee_all([phi for phi, _ in bl]))]
    prem += [p_ty("D", m, goal.ty) for _, m in bl]
    return [inst(prem, ["G", "D"])]


@rule("measure-0", concludes=("eq",))
def _measure_0(goal, args, synth):
    need(
        isinstance(goal, TermEq)
        and isinstance(goal.lhs, Measure)
        and isinstance(goal.rhs, Measure),
        "both sides must be measures",
    )
    bl, br = goal.lhs.branches, goal.rhs.branches
    need(len(bl) == len(br) + 1, "left side must have one extra branch")
    need(isinstance(bl[-1][0], Zero), "the extra branch must have effect 0")
    for (phi, m), (psi, n) in zip(bl, br):
        need(phi == psi and m == n, "shared branches differ")
    prem = [p_leq("G", one(), ovee_all([phi for phi, _ in br]))]
    prem += [p_ty("D", m, goal.ty) for _, m in bl]
    return [inst(prem, ["G", "D"])]


@rule("measure-1", concludes=("eq",))
def _measure_1(goal, args, synth):
    need(isinstance(goal, TermEq) and isinstance(goal.lhs, Measure), "left side must be a measure")
    bs = goal.lhs.branches
    need(len(bs) == 1, "measure-1 applies to a single branch")
    need(is_one(bs[0][0]), "the branch effect must be bot(0)")
    alpha2(goal.rhs, bs[0][1], "right side")
    return [inst([p_ty("G", goal.rhs, goal.ty)], ["G"])]


@rule("measure-plus", concludes=("eq",))
def _measure_plus(goal, args, synth):
    need(
        isinstance(goal, TermEq)
        and isinstance(goal.lhs, Measure)
        and isinstance(goal.rhs, Measure),
        "both sides must be measures",
    )
    bl, br = goal.lhs.branches, goal.rhs.branches
    need(len(br) == len(bl) + 1, "right side must split the first branch")
    head, m0 = bl[0]
    need(isinstance(head, OSum), "first left branch must carry a sum effect")
    phi, psi = head.left, head.right
    need(br[0][0] == phi and br[1][0] == psi, "split branch effects do not match")
    need(br[0][1] == m0 and br[1][1] == m0, "split branches must share the original term")
    for (chi, p), (chi2, p2) in zip(bl[1:], br[2:]):
        need(chi == chi2 and p == p2, "trailing branches differ")
    chis = [chi for chi, _ in bl[1:]]
    prem = [p_leq("", one(), ovee_all([phi, psi] + chis))]
    prem += [p_ty("G", m0, goal.ty)]
    prem += [p_ty("G", p, goal.ty) for _, p in bl[1:]]
    return [inst(prem, ["G"])]


@rule("measure-case", concludes=("eq",))
def _measure_case(goal, args, synth):
    need(isinstance(goal, TermEq) and isinstance(goal.lhs, Measure), "left side must be a measure")
    bs = goal.lhs.branches
    need(
        all(isinstance(phi, CaseEff) for phi, _ in bs),
        "every branch effect must be a case effect",
    )
    first = bs[0][0]
    m, x, y = first.scrut, first.x, first.y
    phis, psis = [], []
    for phi, _ in bs:
        need(phi.scrut == m, "branch effects must share one scrutinee")
        # realigning a branch binder to x/y is only alpha when no conflation
        need(
            phi.x == x or x not in free_vars(phi.left),
            f"branch binder {phi.x} cannot be aligned to {x}",
        )
        need(
            phi.y == y or y not in free_vars(phi.right),
            f"branch binder {phi.y} cannot be aligned to {y}",
        )
        phis.append(subst(phi.left, phi.x, Var(x)) if phi.x != x else phi.left)
        psis.append(subst(phi.right, phi.y, Var(y)) if phi.y != y else phi.right)
    ab = scrut_type(goal.ctx, m, args, synth)
    a, b = as_sum(ab, "the shared scrutinee")
    terms = [t for _, t in bs]
    expected = _mk_case(
        m,
        x,
        Measure(tuple(zip(phis, terms))),
        y,
        Measure(tuple(zip(psis, terms))),
    )
    alpha2(goal.rhs, expected, "right side")
    prem = [
        p_leq("G", one(), ovee_all(phis), ext=((x, a),)),
        p_leq("G", one(), ovee_all(psis), ext=((y, b),)),
        p_ty("D", m, ab),
    ]
    prem += [p_ty("T", t, goal.ty) for t in terms]
    return [inst(prem, ["G", "D", "T"])]


# ---- effect formation


@rule("eff-0", concludes=("eff",))
def _eff_0(goal, args, synth):
    need(isinstance(goal, EffForm) and isinstance(goal.eff, Zero), "conclusion is not `0 eff`")
    return [inst([], ["G"])]


@rule("eff-bot", concludes=("eff",))
def _eff_bot(goal, args, synth):
    need(isinstance(goal, EffForm) and isinstance(goal.eff, Orth), "conclusion is not `bot(phi) eff`")
    return [inst([p_eff("G", goal.eff.arg)], ["G"])]


@rule("eff-ovee", concludes=("eff",))
def _eff_ovee(goal, args, synth):
    need(isinstance(goal, EffForm) and isinstance(goal.eff, OSum), "conclusion is not a sum formation")
    return [inst([p_leq("G", goal.eff.left, Orth(goal.eff.right))], ["G"])]


@rule("eff-mult", concludes=("eff",))
def _eff_mult(goal, args, synth):
    need(isinstance(goal, EffForm) and isinstance(goal.eff, SMul), "conclusion is not a product formation")
    return [inst([p_eff("", goal.eff.scalar), p_eff("G", goal.eff.body)], ["G"])]


@rule("eff-case", concludes=("eff",))
def _eff_case(goal, args, synth):
    need(isinstance(goal, EffForm) and isinstance(goal.eff, CaseEff), "conclusion is not a case formation")
    e = goal.eff
    ab = scrut_type(goal.ctx, e.scrut, args, synth)
    a, b = as_sum(ab, "the case scrutinee")
    return [
        inst(
            [
                p_eff("G", e.left, ext=((e.x, a),)),
                p_eff("G", e.right, ext=((e.y, b),)),
                p_ty("D", e.scrut, ab),
            ],
            ["G", "D"],
        )
    ]


# ---- derivability


@rule("leq-ref", concludes=("leq",))
def _leq_ref(goal, args, synth):
    need(isinstance(goal, EffLeq), "conclusion is not an inequality")
    need(goal.low == goal.high, "the two sides are not alpha-equal")
    return [inst([p_eff("G", goal.low)], ["G"])]


@rule("leq-trans", concludes=("leq",))
def _leq_trans(goal, args, synth):
    need(isinstance(goal, EffLeq), "conclusion is not an inequality")
    mid = need_arg(args, "via", "leq-trans")
    return [inst([p_leq("G", goal.low, mid), p_leq("G", mid, goal.high)], ["G"])]


@rule("zero-leq", concludes=("leq",))
def _zero_leq(goal, args, synth):
    need(isinstance(goal, EffLeq) and isinstance(goal.low, Zero), "left side must be 0")
    return [inst([p_eff("G", goal.high)], ["G"])]


@rule("bot-antitone", concludes=("leq",))
def _bot_antitone(goal, args, synth):
    need(
        isinstance(goal, EffLeq) and isinstance(goal.low, Orth) and isinstance(goal.high, Orth),
        "both sides must be orthosupplements",
    )
    return [inst([p_leq("G", goal.high.arg, goal.low.arg)], ["G"])]


@rule("bot-bot", concludes=("leq",))
def _bot_bot(goal, args, synth):
    need(isinstance(goal, EffLeq), "conclusion is not an inequality")
    h = goal.high
    need(isinstance(h, Orth) and isinstance(h.arg, Orth), "right side must be a double orthosupplement")
    alpha2(h.arg.arg, goal.low, "right side")
    return [inst([p_eff("G", goal.low)], ["G"])]


@rule("leq-ovee", concludes=("leq",))
def _leq_ovee(goal, args, synth):
    need(isinstance(goal, EffLeq) and isinstance(goal.high, OSum), "right side must be a sum")
    alpha2(goal.high.left, goal.low, "sum left component")
    return [inst([p_leq("G", goal.low, Orth(goal.high.right))], ["G"])]


@rule("ovee-mono", concludes=("leq",))
def _ovee_mono(goal, args, synth):
    need(
        isinstance(goal, EffLeq) and isinstance(goal.low, OSum) and isinstance(goal.high, OSum),
        "both sides must be sums",
    )
    phi, chi = goal.low.left, goal.low.right
    psi, chi2 = goal.high.left, goal.high.right
    alpha2(chi2, chi, "shared summand")
    return [inst([p_leq("G", phi, psi), p_leq("G", psi, Orth(chi))], ["G"])]


@rule("ovee-comm", concludes=("leq",))
def _ovee_comm(goal, args, synth):
    need(
        isinstance(goal, EffLeq) and isinstance(goal.low, OSum) and isinstance(goal.high, OSum),
        "both sides must be sums",
    )
    need(
        goal.high.left == goal.low.right and goal.high.right == goal.low.left,
        "right side must be the flipped sum",
    )
    return [inst([p_leq("G", goal.low.left, Orth(goal.low.right))], ["G"])]


@rule("perp-rotate", concludes=("leq",))
def _perp_rotate(goal, args, synth):
    need(
        isinstance(goal, EffLeq) and isinstance(goal.low, OSum) and isinstance(goal.high, Orth),
        "conclusion must be `psi o+ chi <= bot(phi)`",
    )
    psi, chi = goal.low.left, goal.low.right
    phi = goal.high.arg
    return [inst([p_leq("G", OSum(phi, psi), Orth(chi))], ["G"])]


@rule("ovee-assoc", concludes=("leq",))
def _ovee_assoc(goal, args, synth):
    need(isinstance(goal, EffLeq), "conclusion is not an inequality")
    l, h = goal.low, goal.high
    need(
        isinstance(l, OSum) and isinstance(l.right, OSum) and isinstance(h, OSum) and isinstance(h.left, OSum),
        "conclusion must reassociate a triple sum",
    )
    phi, psi, chi = l.left, l.right.left, l.right.right
    need(
        h.left.left == phi and h.left.right == psi and h.right == chi,
        "the two sides do not share their summands",
    )
    return [inst([p_leq("G", OSum(phi, psi), Orth(chi))], ["G"])]


@rule("ovee-0", concludes=("leq",))
def _ovee_0(goal, args, synth):
    need(
        isinstance(goal, EffLeq) and isinstance(goal.low, OSum) and isinstance(goal.low.right, Zero),
        "left side must be `phi o+ 0`",
    )
    alpha2(goal.low.left, goal.high, "summand")
    return [inst([p_eff("G", goal.high)], ["G"])]


@rule("ortho-1", concludes=("leq",))
def _ortho_1(goal, args, synth):
    need(isinstance(goal, EffLeq) and isinstance(goal.low, Orth), "left side must be an orthosupplement")
    psi, phi = goal.low.arg, goal.high
    return [inst([p_leq("G", one(), OSum(phi, psi))], ["G"])]


@rule("ortho-2", concludes=("leq",))
def _ortho_2(goal, args, synth):
    need(isinstance(goal, EffLeq) and is_one(goal.low), "left side must be bot(0)")
    h = goal.high
    need(isinstance(h, OSum) and isinstance(h.right, Orth), "right side must be `phi o+ bot(phi)`")
    alpha2(h.right.arg, h.left, "orthosupplement argument")
    return [inst([p_eff("G", h.left)], ["G"])]


@rule("dist-l", concludes=("leq",))
def _dist_l(goal, args, synth):
    need(isinstance(goal, EffLeq), "conclusion is not an inequality")
    out = []
    lo, hi = goal.low, goal.high
    # reading 1: phi.chi _|_ psi.chi
    if isinstance(lo, SMul) and isinstance(hi, Orth) and isinstance(hi.arg, SMul):
        if lo.body == hi.arg.body:
            phi, psi, chi = lo.scalar, hi.arg.scalar, lo.body
            out.append(
                inst([p_leq("", phi, Orth(psi)), p_eff("G", chi)], ["G"])
            )
    # readings 2 and 3: (phi o+ psi).chi == phi.chi o+ psi.chi
    for a, b in both_readings(goal):
        if (
            isinstance(a, SMul)
            and isinstance(a.scalar, OSum)
            and isinstance(b, OSum)
            and isinstance(b.left, SMul)
            and isinstance(b.right, SMul)
        ):
            phi, psi, chi = a.scalar.left, a.scalar.right, a.body
            if b.left == SMul(phi, chi) and b.right == SMul(psi, chi):
                out.append(
                    inst([p_leq("", phi, Orth(psi)), p_eff("G", chi)], ["G"])
                )
    need(out, "conclusion matches no reading of dist-l")
    return out


@rule("dist-r", concludes=("leq",))
def _dist_r(goal, args, synth):
    need(isinstance(goal, EffLeq), "conclusion is not an inequality")
    out = []
    lo, hi = goal.low, goal.high
    if isinstance(lo, SMul) and isinstance(hi, Orth) and isinstance(hi.arg, SMul):
        if lo.scalar == hi.arg.scalar:
            phi, psi, chi = lo.scalar, lo.body, hi.arg.body
            out.append(
                inst([p_eff("", phi), p_leq("G", psi, Orth(chi))], ["G"])
            )
    for a, b in both_readings(goal):
        if (
            isinstance(a, SMul)
            and isinstance(a.body, OSum)
            and isinstance(b, OSum)
            and isinstance(b.left, SMul)
            and isinstance(b.right, SMul)
        ):
            phi, psi, chi = a.scalar, a.body.left, a.body.right
            if b.left == SMul(phi, psi) and b.right == SMul(phi, chi):
                out.append(
                    inst([p_eff("", phi), p_leq("G", psi, Orth(chi))], ["G"])
                )
    need(out, "conclusion matches no reading of dist-r")
    return out


@rule("unit-l", concludes=("leq",))
def _unit_l(goal, args, synth):
    need(isinstance(goal, EffLeq), "conclusion is not an inequality")
    out = []
    for a, b in both_readings(goal):
        if isinstance(a, SMul) and is_one(a.scalar) and a.body == b:
            out.append(inst([p_eff("G", b)], ["G"]))
    need(out, "conclusion must relate `bot(0) . phi` with `phi`")
    return out


@rule("unit-r", concludes=("leq",))
def _unit_r(goal, args, synth):
    need(isinstance(goal, EffLeq), "conclusion is not an inequality")
    out = []
    for a, b in both_readings(goal):
        if isinstance(a, SMul) and is_one(a.body) and a.scalar == b:
            out.append(inst([p_eff("", b)], ["G"]))
    need(out, "conclusion must relate `phi . bot(0)` with `phi`")
    return out


@rule("assoc", concludes=("leq",))
def _assoc(goal, args, synth):
    need(isinstance(goal, EffLeq), "conclusion is not an inequality")
    out = []
    for a, b in both_readings(goal):
        if (
            isinstance(a, SMul)
            and isinstance(a.body, SMul)
            and isinstance(b, SMul)
            and isinstance(b.scalar, SMul)
        ):
            phi, psi, chi = a.scalar, a.body.scalar, a.body.body
            if b.scalar.scalar == phi and b.scalar.body == psi and b.body == chi:
                out.append(
                    inst([p_eff("", phi), p_eff("", psi), p_eff("G", chi)], ["G"])
                )
    need(out, "conclusion must reassociate a scalar product")
    return out


@rule("comm", concludes=("leq",))
def _comm(goal, args, synth):
    need(isinstance(goal, EffLeq), "conclusion is not an inequality")
    lo, hi = goal.low, goal.high
    need(
        isinstance(lo, SMul) and isinstance(hi, SMul) and lo.scalar == hi.body and lo.body == hi.scalar,
        "conclusion must flip a scalar product",
    )
    return [inst([p_eff("", lo.scalar), p_eff("", lo.body)], [])]


@rule("case-cong", concludes=("leq",))
def _case_cong(goal, args, synth):
    need(isinstance(goal, EffLeq), "conclusion is not an inequality")
    out = []
    for a, b in both_readings(goal):
        if not (isinstance(a, CaseEff) and isinstance(b, CaseEff)):
            continue
        if not (
            abstraction_eq([a.x], a.left, [b.x], b.left)
            and abstraction_eq([a.y], a.right, [b.y], b.right)
        ):
            continue
        ab = scrut_type(goal.ctx, a.scrut, args, synth)
        sa, sb = as_sum(ab, "the case scrutinee")
        out.append(
            inst(
                [
                    p_eff("G", a.left, ext=((a.x, sa),)),
                    p_eff("G", a.right, ext=((a.y, sb),)),
                    p_eq("D", a.scrut, b.scrut, ab),
                ],
                ["G", "D"],
            )
        )
    need(out, "the two sides must be case effects with shared branches")
    return out


@rule("case-mono", concludes=("leq",))
def _case_mono(goal, args, synth):
    need(
        isinstance(goal, EffLeq)
        and isinstance(goal.low, CaseEff)
        and isinstance(goal.high, CaseEff),
        "both sides must be case effects",
    )
    l, h = goal.low, goal.high
    alpha2(h.scrut, l.scrut, "case scrutinee")
    ab = scrut_type(goal.ctx, l.scrut, args, synth)
    a, b = as_sum(ab, "the case scrutinee")
    avoid = set(goal.ctx.names()) | free_vars(l) | free_vars(h)
    x = fresh(l.x, avoid)
    y = fresh(l.y, avoid | {x})
    return [
        inst(
            [
                p_leq("G", subst(l.left, l.x, Var(x)), subst(h.left, h.x, Var(x)), ext=((x, a),)),
                p_leq("G", subst(l.right, l.y, Var(y)), subst(h.right, h.y, Var(y)), ext=((y, b),)),
                p_ty("D", l.scrut, ab),
            ],
            ["G", "D"],
        )
    ]


@rule("beta-plus-1-eff", concludes=("leq",))
def _beta_plus_1_eff(goal, args, synth):
    need(isinstance(goal, EffLeq), "conclusion is not an inequality")
    out = []
    for a, b in both_readings(goal):
        if not (isinstance(a, CaseEff) and isinstance(a.scrut, Inl)):
            continue
        m = a.scrut.arg
        if b != subst(a.left, a.x, m):
            continue
        ab = args.get("ty")
        need(ab is not None, "beta-plus-1-eff needs the `ty` argument (the scrutinee sum type)")
        sa, sb = as_sum(ab, "the scrutinee")
        out.append(
            inst(
                [
                    p_eff("G", a.left, ext=((a.x, sa),)),
                    p_eff("G", a.right, ext=((a.y, sb),)),
                    p_ty("D", m, sa),
                ],
                ["G", "D"],
            )
        )
    need(out, "conclusion must reduce `caseE (inl M)`")
    return out


@rule("beta-plus-2-eff", concludes=("leq",))
def _beta_plus_2_eff(goal, args, synth):
    need(isinstance(goal, EffLeq), "conclusion is not an inequality")
    out = []
    for a, b in both_readings(goal):
        if not (isinstance(a, CaseEff) and isinstance(a.scrut, Inr)):
            continue
        m = a.scrut.arg
        if b != subst(a.right, a.y, m):
            continue
        ab = args.get("ty")
        need(ab is not None, "beta-plus-2-eff needs the `ty` argument (the scrutinee sum type)")
        sa, sb = as_sum(ab, "the scrutinee")
        out.append(
            inst(
                [
                    p_eff("G", a.left, ext=((a.x, sa),)),
                    p_eff("G", a.right, ext=((a.y, sb),)),
                    p_ty("D", m, sb),
                ],
                ["G", "D"],
            )
        )
    need(out, "conclusion must reduce `caseE (inr M)`")
    return out


@rule("eta-plus-eff", concludes=("leq",))
def _eta_plus_eff(goal, args, synth):
    need(isinstance(goal, EffLeq), "conclusion is not an inequality")
    out = []
    for phi, rhs in both_readings(goal):
        if not (isinstance(rhs, CaseEff) and isinstance(rhs.scrut, Var)):
            continue
        z = rhs.scrut.name
        zty = goal.ctx.lookup(z)
        if zty is None or not isinstance(zty, TSum):
            continue
        if rhs.left != subst(phi, z, Inl(Var(rhs.x))):
            continue
        if rhs.right != subst(phi, z, Inr(Var(rhs.y))):
            continue
        out.append(
            inst(
                [p_eff("G", phi, ext=((z, zty),))],
                ["G"],
                fixed=((z, zty),),
            )
        )
    need(out, "conclusion must eta-expand an effect at a sum variable")
    return out


@rule("case-ovee", concludes=("leq",))
def _case_ovee(goal, args, synth):
    need(isinstance(goal, EffLeq), "conclusion is not an inequality")
    out = []
    for a, b in both_readings(goal):
        if not (
            isinstance(a, CaseEff)
            and isinstance(a.left, OSum)
            and isinstance(a.right, OSum)
            and isinstance(b, OSum)
            and isinstance(b.left, CaseEff)
            and isinstance(b.right, CaseEff)
        ):
            continue
        c1, c2 = b.left, b.right
        if not (
            c1.scrut == a.scrut
            and c2.scrut == a.scrut
            and abstraction_eq([c1.x], c1.left, [a.x], a.left.left)
            and abstraction_eq([c1.y], c1.right, [a.y], a.right.left)
            and abstraction_eq([c2.x], c2.left, [a.x], a.left.right)
            and abstraction_eq([c2.y], c2.right, [a.y], a.right.right)
        ):
            continue
        ab = scrut_type(goal.ctx, a.scrut, args, synth)
        sa, sb = as_sum(ab, "the case scrutinee")
        out.append(
            inst(
                [
                    p_leq("G", a.left.left, Orth(a.left.right), ext=((a.x, sa),)),
                    p_leq("G", a.right.left, Orth(a.right.right), ext=((a.y, sb),)),
                    p_ty("D", a.scrut, ab),
                ],
                ["G", "D"],
            )
        )
    need(out, "conclusion must distribute a sum over a case effect")
    return out


@rule("case-bot", concludes=("leq",))
def _case_bot(goal, args, synth):
    need(isinstance(goal, EffLeq), "conclusion is not an inequality")
    out = []
    for a, b in both_readings(goal):
        if not (
            isinstance(a, CaseEff)
            and isinstance(a.left, Orth)
            and isinstance(a.right, Orth)
            and isinstance(b, Orth)
            and isinstance(b.arg, CaseEff)
        ):
            continue
        c = b.arg
        if not (
            c.scrut == a.scrut
            and abstraction_eq([c.x], c.left, [a.x], a.left.arg)
            and abstraction_eq([c.y], c.right, [a.y], a.right.arg)
        ):
            continue
        ab = scrut_type(goal.ctx, a.scrut, args, synth)
        sa, sb = as_sum(ab, "the case scrutinee")
        out.append(
            inst(
                [
                    p_eff("G", a.left.arg, ext=((a.x, sa),)),
                    p_eff("G", a.right.arg, ext=((a.y, sb),)),
                    p_ty("D", a.scrut, ab),
                ],
                ["G", "D"],
            )
        )
    need(out, "conclusion must push an orthosupplement through a case effect")
    return out


@rule("case-leq", concludes=("leq",))
def _case_leq(goal, args, synth):
    need(isinstance(goal, EffLeq) and isinstance(goal.low, CaseEff), "left side must be a case effect")
    l, chi = goal.low, goal.high
    ab = scrut_type(goal.ctx, l.scrut, args, synth)
    a, b = as_sum(ab, "the case scrutinee")
    x, left = _freshen1(l.x, l.left, set(goal.ctx.names()) | free_vars(chi))
    y, right = _freshen1(l.y, l.right, set(goal.ctx.names()) | free_vars(chi) | {x})
    return [
        inst(
            [
                p_ty("G", l.scrut, ab),
                p_leq("D", left, chi, ext=((x, a),)),
                p_leq("D", right, chi, ext=((y, b),)),
            ],
            ["G", "D"],
        )
    ]


@rule("case-times", concludes=("leq",))
def _case_times(goal, args, synth):
    need(isinstance(goal, EffLeq), "conclusion is not an inequality")
    out = []
    for a, b in both_readings(goal):
        if not (
            isinstance(a, CaseEff)
            and isinstance(a.left, SMul)
            and isinstance(a.right, SMul)
            and isinstance(b, SMul)
            and isinstance(b.body, CaseEff)
        ):
            continue
        chi = b.scalar
        if not (a.left.scalar == chi and a.right.scalar == chi):
            continue
        c = b.body
        if not (
            c.scrut == a.scrut
            and abstraction_eq([c.x], c.left, [a.x], a.left.body)
            and abstraction_eq([c.y], c.right, [a.y], a.right.body)
        ):
            continue
        ab = scrut_type(goal.ctx, a.scrut, args, synth)
        sa, sb = as_sum(ab, "the case scrutinee")
        out.append(
            inst(
                [
                    p_eff("G", a.left.body, ext=((a.x, sa),)),
                    p_eff("G", a.right.body, ext=((a.y, sb),)),
                    p_ty("D", a.scrut, ab),
                    p_eff("", chi),
                ],
                ["G", "D"],
            )
        )
    need(out, "conclusion must pull a closed scalar out of a case effect")
    return out


# ---- qubit pack


@rule("qbit-new", pack="qubit", concludes=("ty",))
def _qbit_new(goal, args, synth):
    need(
        isinstance(goal, Typing) and isinstance(goal.term, NewPlus) and isinstance(goal.ty, TQbit),
        "conclusion is not a plus-state typing",
    )
    return [inst([], ["G"])]


@rule("qbit-x", pack="qubit", concludes=("ty",))
def _qbit_x(goal, args, synth):
    need(
        isinstance(goal, Typing) and isinstance(goal.term, PauliX) and isinstance(goal.ty, TQbit),
        "conclusion is not an X typing",
    )
    return [inst([p_ty("G", goal.term.arg, TQbit())], ["G"])]


@rule("qbit-z", pack="qubit", concludes=("ty",))
def _qbit_z(goal, args, synth):
    need(
        isinstance(goal, Typing) and isinstance(goal.term, PauliZ) and isinstance(goal.ty, TQbit),
        "conclusion is not a Z typing",
    )
    return [inst([p_ty("G", goal.term.arg, TQbit())], ["G"])]


@rule("qbit-cz", pack="qubit", concludes=("ty",))
def _qbit_cz(goal, args, synth):
    need(
        isinstance(goal, Typing)
        and isinstance(goal.term, CZ)
        and goal.ty == TTensor(TQbit(), TQbit()),
        "conclusion is not a controlled-Z typing",
    )
    return [
        inst(
            [p_ty("G", goal.term.left, TQbit()), p_ty("D", goal.term.right, TQbit())],
            ["G", "D"],
        )
    ]


@rule("qbit-proj", pack="qubit", concludes=("eff",))
def _qbit_proj(goal, args, synth):
    need(
        isinstance(goal, EffForm) and isinstance(goal.eff, ProjPlus),
        "conclusion is not a projection formation",
    )
    return [inst([p_ty("G", goal.eff.term, TQbit())], ["G"])]


@rule("qbit-cz-x", pack="qubit", concludes=("eq",))
def _qbit_cz_x(goal, args, synth):
    need(isinstance(goal, TermEq), "conclusion is not a term equality")
    l = goal.lhs
    need(
        isinstance(l, CZ) and isinstance(l.left, PauliX),
        "left side must be `E (X M) N`",
    )
    m, n = l.left.arg, l.right
    avoid = free_vars(m) | free_vars(n) | set(goal.ctx.names())
    x, y = fresh_pair("x", "y", avoid)
    expected = LetPair(x, y, CZ(m, n), Pair(PauliX(Var(x)), PauliZ(Var(y))))
    alpha2(goal.rhs, expected, "right side")
    return [
        inst([p_ty("G", m, TQbit()), p_ty("D", n, TQbit())], ["G", "D"])
    ]


@rule("qbit-cz-z", pack="qubit", concludes=("eq",))
def _qbit_cz_z(goal, args, synth):
    need(isinstance(goal, TermEq), "conclusion is not a term equality")
    l = goal.lhs
    need(
        isinstance(l, CZ) and isinstance(l.left, PauliZ),
        "left side must be `E (Z M) N`",
    )
    m, n = l.left.arg, l.right
    avoid = free_vars(m) | free_vars(n) | set(goal.ctx.names())
    x, y = fresh_pair("x", "y", avoid)
    expected = LetPair(x, y, CZ(m, n), Pair(PauliZ(Var(x)), Var(y)))
    alpha2(goal.rhs, expected, "right side")
    return [
        inst([p_ty("G", m, TQbit()), p_ty("D", n, TQbit())], ["G", "D"])
    ]


@rule("qbit-x-proj", pack="qubit", concludes=("leq",))
def _qbit_x_proj(goal, args, synth):
    need(isinstance(goal, EffLeq), "conclusion is not an inequality")
    out = []
    for a, b in both_readings(goal):
        if not (isinstance(a, ProjPlus) and isinstance(a.term, PauliX) and isinstance(b, ProjPlus)):
            continue
        if b.term != a.term.arg or b.angle != angle_neg(a.angle):
            continue
        out.append(inst([p_ty("G", a.term.arg, TQbit())], ["G"]))
    need(out, "conclusion must reflect a projection angle through X")
    return out


@rule("qbit-z-proj", pack="qubit", concludes=("leq",))
def _qbit_z_proj(goal, args, synth):
    need(isinstance(goal, EffLeq), "conclusion is not an inequality")
    out = []
    for a, b in both_readings(goal):
        if not (isinstance(a, ProjPlus) and isinstance(a.term, PauliZ) and isinstance(b, ProjPlus)):
            continue
        if b.term != a.term.arg or b.angle != angle_minus_pi(a.angle):
            continue
        out.append(inst([p_ty("G", a.term.arg, TQbit())], ["G"]))
    need(out, "conclusion must shift a projection angle through Z")
    return out


@rule("qbit-xx", pack="qubit", concludes=("eq",))
def _qbit_xx(goal, args, synth):
    need(isinstance(goal, TermEq), "conclusion is not a term equality")
    l = goal.lhs
    need(isinstance(l, PauliX) and isinstance(l.arg, PauliX), "left side must be X (X M)")
    alpha2(goal.rhs, l.arg.arg, "right side")
    return [inst([p_ty("G", goal.rhs, TQbit())], ["G"])]


@rule("qbit-zz", pack="qubit", concludes=("eq",))
def _qbit_zz(goal, args, synth):
    need(isinstance(goal, TermEq), "conclusion is not a term equality")
    l = goal.lhs
    need(isinstance(l, PauliZ) and isinstance(l.arg, PauliZ), "left side must be Z (Z M)")
    alpha2(goal.rhs, l.arg.arg, "right side")
    return [inst([p_ty("G", goal.rhs, TQbit())], ["G"])]


@rule("qbit-xz-zx", pack="qubit", concludes=("leq",))
def _qbit_xz_zx(goal, args, synth):
    need(isinstance(goal, EffLeq), "conclusion is not an inequality")
    out = []
    for a, b in both_readings(goal):
        if not (isinstance(a, ProjPlus) and isinstance(b, ProjPlus) and a.angle == b.angle):
            continue
        if not (isinstance(a.term, PauliX) and isinstance(a.term.arg, PauliZ)):
            continue
        if not (isinstance(b.term, PauliZ) and isinstance(b.term.arg, PauliX)):
            continue
        if a.term.arg.arg != b.term.arg.arg:
            continue
        out.append(inst([p_ty("G", a.term.arg.arg, TQbit())], ["G"]))
    need(out, "conclusion must exchange X Z with Z X under a projection")
    return out


# ---- beta-iso pack


def _extract_at_var(body, x, filled):
    """The term standing at x's free positions when `filled` is [R/x]body.

    Walks the two trees in parallel with binder alignment; returns None when
    the shapes disagree or the occurrences collect different terms.
    """

    found = []

    def walk(b, f, pairs):
        # pairs: aligned binder names (body side, filled side), innermost last
        if isinstance(b, Var):
            n = b.name
            if n == x and all(n != bb for bb, _ in pairs):
                # candidate redex; its free vars must not be captured here
                if free_vars(f) & {ff for _, ff in pairs}:
                    return False
                found.append(f)
                return True
            for bb, ff in reversed(pairs):
                if n == bb:
                    return isinstance(f, Var) and f.name == ff
            if not isinstance(f, Var):
                return False
            if any(f.name == ff for _, ff in pairs):
                return False
            return f.name == n
        if type(b) is not type(f):
            return False
        match b:
            case Pair() | CZ():
                return walk(b.left, f.left, pairs) and walk(b.right, f.right, pairs)
            case OSum():
                return walk(b.left, f.left, pairs) and walk(b.right, f.right, pairs)
            case SMul():
                return walk(b.scalar, f.scalar, pairs) and walk(b.body, f.body, pairs)
            case LetPair():
                return walk(b.pair, f.pair, pairs) and walk(
                    b.body, f.body, pairs + [(b.x, f.x), (b.y, f.y)]
                )
            case Star() | NewPlus() | Zero():
                return True
            case Inl() | Inr() | PauliX() | PauliZ() | Orth():
                return walk(b.arg, f.arg, pairs)
            case Case() | CaseEff():
                return (
                    walk(b.scrut, f.scrut, pairs)
                    and walk(b.left, f.left, pairs + [(b.x, f.x)])
                    and walk(b.right, f.right, pairs + [(b.y, f.y)])
                )
            case Measure():
                if len(b.branches) != len(f.branches):
                    return False
                return all(
                    walk(be, fe, pairs) and walk(bt, ft, pairs)
                    for (be, bt), (fe, ft) in zip(b.branches, f.branches)
                )
            case ScalarLit():
                return b.value == f.value
            case ProjPlus():
                return b.angle == f.angle and walk(b.term, f.term, pairs)
        return False

    if not walk(body, filled, []) or not found:
        return None
    first = found[0]
    if any(f != first for f in found[1:]):
        return None
    return first


@rule("beta-iso", pack="beta-iso", concludes=("leq",))
def _beta_iso(goal, args, synth):
    need(isinstance(goal, EffLeq), "conclusion is not an inequality")
    x = need_arg(args, "x", "beta-iso")
    psi = need_arg(args, "body", "beta-iso")
    out = []
    for lhs, rhs in both_readings(goal):
        if not (
            isinstance(rhs, OSum)
            and isinstance(rhs.left, SMul)
            and isinstance(rhs.right, SMul)
        ):
            continue
        phi = rhs.left.scalar
        if rhs.right.scalar != Orth(phi):
            continue
        if "m" in args and "n" in args:
            m, n = args["m"], args["n"]
        else:
            redex = _extract_at_var(psi, x, lhs)
            if redex is None or not isinstance(redex, Measure) or len(redex.branches) != 2:
                continue
            (phi1, m), (phi2, n) = redex.branches
            if phi1 != phi or phi2 != Orth(phi):
                continue
        measure = Measure(((phi, m), (Orth(phi), n)))
        if lhs != subst(psi, x, measure):
            continue
        if rhs.left.body != subst(psi, x, m) or rhs.right.body != subst(psi, x, n):
            continue
        a = args.get("ty") or synth(m, ())
        need(a is not None, "cannot infer the branch type; supply `ty`")
        out.append(
            inst(
                [
                    p_eff("", phi),
                    p_ty("G", m, a),
                    p_ty("G", n, a),
                    p_eff("D", psi, ext=((x, a),)),
                ],
                ["G", "D"],
            )
        )
    need(out, "conclusion does not match the measurement substitution identity")
    return out


# ------------------------------------------------------------------ inventory


ALL_RULE_NAMES = (
    "exch", "var", "tensor", "let", "unit", "inl", "inr", "case", "measure",
    "ref", "sym", "trans", "tensor-eq", "let-eq", "inl-eq", "inr-eq",
    "case-eq", "measure-eq", "beta-tensor", "beta-plus-1", "beta-plus-2",
    "eta-tensor", "eta-unit", "eta-plus", "let-commute", "let-case",
    "let-tensor", "case-commute", "case-tensor", "measure-perm", "measure-0",
    "measure-1", "measure-plus", "measure-case", "eff-0", "eff-bot",
    "eff-ovee", "eff-mult", "eff-case", "leq-ref", "leq-trans", "zero-leq",
    "bot-antitone", "bot-bot", "leq-ovee", "ovee-mono", "ovee-comm",
    "perp-rotate", "ovee-assoc", "ovee-0", "ortho-1", "ortho-2", "dist-l",
    "dist-r", "unit-l", "unit-r", "assoc", "comm", "case-cong", "case-mono",
    "beta-plus-1-eff", "beta-plus-2-eff", "eta-plus-eff", "case-ovee",
    "case-bot", "case-leq", "case-times", "qbit-new", "qbit-x", "qbit-z",
    "qbit-cz", "qbit-proj", "qbit-cz-x", "qbit-cz-z", "qbit-x-proj",
    "qbit-z-proj", "qbit-xx", "qbit-zz", "qbit-xz-zx", "beta-iso",
)

SCHEMAS = {name: _SCHEMAS[name] for name in ALL_RULE_NAMES}

assert set(_SCHEMAS) == set(ALL_RULE_NAMES), sorted(
    set(_SCHEMAS) ^ set(ALL_RULE_NAMES)
)

PACKS = ("core", "qubit", "beta-iso")
DEFAULT_PACKS = frozenset({"core", "qubit"})
