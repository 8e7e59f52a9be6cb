"""Proof script checking and bounded search for the inequality fragment.

Scripts are checked goal-directed: a rule node's conclusion must instantiate
its named schema, the context is split deterministically over the premises
(each variable goes to the premise that needs it, leftovers to the last open
premise), and child scripts are checked against the resulting premise
judgements.  A node given without premises has them discharged automatically:
typing and formation premises by the type checker, inequality premises by
bounded search, and equality premises only when reflexive.

Search over the inequality rules is depth-bounded and deterministic.  The
transitivity rule is explored against a fixed family of middle candidates
(double orthosupplements, the top and zero effects, and immediate summands);
everything a search finds is an ordinary script that re-checks.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import rules
from .parser import ArithNode, AutoNode, BothNode, ScriptNode, UseNode
from .rules import Instantiation, Premise, RuleMismatch, Schema
from .syntax import (
    Context,
    EffForm,
    EffLeq,
    Judgement,
    Orth,
    OSum,
    ScalarLit,
    SMul,
    TermEq,
    Typing,
    Zero,
    free_vars,
    judgement_up_to_exchange,
    one,
)
from .typecheck import (
    Derivation,
    ObligationError,
    QpelTypeError,
    Resolver,
    check_effect,
    check_term,
    show_judgement,
    split_context,
    synth_type,
)


class DerivationError(Exception):
    pass


@dataclass
class Env:
    packs: frozenset = rules.DEFAULT_PACKS
    depth: int = 6
    lemmas: dict = field(default_factory=dict)  # name -> list[Judgement]

    def __post_init__(self):
        self.packs = frozenset(self.packs) | {"core"}

    def resolver(self, scripts=()):
        return QueueResolver(list(scripts), self)


class QueueResolver(Resolver):
    """Feeds attached `requires` scripts to obligations in encounter order,
    falling back to bounded search."""

    def __init__(self, scripts, env: Env):
        self.scripts = list(scripts)
        self.env = env

    def resolve(self, goal: EffLeq) -> Derivation:
        if self.scripts:
            script = self.scripts.pop(0)
            try:
                return check_script(goal, script, self.env)
            except (DerivationError, QpelTypeError) as exc:
                raise ObligationError(goal, f"attached script failed: {exc}")
        try:
            return auto_search_leq(goal, self.env.depth, self.env)
        except SearchFailed:
            raise ObligationError(goal, f"no proof found within depth {self.env.depth}")


# ------------------------------------------------------------ literal effects


def literal_value(e) -> Fraction | None:
    """Exact value of a variable-free scalar effect; None when not literal or
    when a partial sum inside is undefined."""
    match e:
        case Zero():
            return Fraction(0)
        case ScalarLit(value=v):
            return v
        case Orth(arg=a):
            v = literal_value(a)
            return None if v is None else 1 - v
        case OSum(left=a, right=b):
            va, vb = literal_value(a), literal_value(b)
            if va is None or vb is None or va + vb > 1:
                return None
            return va + vb
        case SMul(scalar=a, body=b):
            va, vb = literal_value(a), literal_value(b)
            if va is None or vb is None:
                return None
            return va * vb
    return None


def check_arith(goal: Judgement) -> Derivation:
    if isinstance(goal, EffLeq):
        lo, hi = literal_value(goal.low), literal_value(goal.high)
        if lo is None or hi is None:
            raise DerivationError(
                f"arith applies only to literal scalar effects: {show_judgement(goal)}"
            )
        if not lo <= hi:
            raise DerivationError(
                f"arith refuted: {lo} <= {hi} is false in {show_judgement(goal)}"
            )
        return Derivation("arith", goal)
    raise DerivationError("arith proves only inequality judgements")


# ------------------------------------------------------------- script checking


def check_script(goal: Judgement, script, env: Env) -> Derivation:
    match script:
        case AutoNode(depth=d):
            return _auto(goal, d if d is not None else env.depth, env)
        case ArithNode():
            return check_arith(goal)
        case UseNode(name=n):
            if n not in env.lemmas:
                raise DerivationError(f"use({n}): no such lemma")
            for j in env.lemmas[n]:
                if judgement_up_to_exchange(j, goal):
                    return Derivation("use", goal, (), {"name": n})
            raise DerivationError(
                f"use({n}): lemma does not prove {show_judgement(goal)}"
            )
        case BothNode():
            raise DerivationError(
                "both(...) is only meaningful for an equivalence position"
            )
        case ScriptNode(rule=name, args=args, premises=children):
            return _check_rule_node(goal, name, args, children, env)
    raise DerivationError(f"not a proof script: {script!r}")


def _auto(goal: Judgement, depth: int, env: Env) -> Derivation:
    if isinstance(goal, Typing):
        res = check_term(goal.ctx, goal.term, goal.ty, env.resolver())
        return res.derivation
    if isinstance(goal, EffForm):
        res = check_effect(goal.ctx, goal.eff, env.resolver())
        return res.derivation
    if isinstance(goal, EffLeq):
        try:
            return auto_search_leq(goal, depth, env)
        except SearchFailed:
            raise DerivationError(
                f"auto: no proof found within depth {depth} for {show_judgement(goal)}"
            )
    if isinstance(goal, TermEq) and goal.lhs == goal.rhs:
        return _check_rule_node(goal, "ref", {}, None, env)
    raise DerivationError(
        f"auto cannot prove {show_judgement(goal)}; give an explicit script"
    )


def _check_rule_node(goal, name, args, children, env: Env) -> Derivation:
    if name not in rules.SCHEMAS:
        raise DerivationError(f"unknown rule name {name!r}")
    schema: Schema = rules.SCHEMAS[name]
    if schema.pack not in env.packs:
        raise DerivationError(
            f"rule {name} belongs to the disabled pack {schema.pack!r}"
        )

    def synth(term, extra=()):
        return synth_type(goal.ctx, term, extra)

    try:
        candidates = schema.match(goal, args, synth)
    except RuleMismatch as exc:
        raise DerivationError(f"{name}: schema mismatch: {exc}")

    errors = []
    for instn in candidates:
        try:
            return _discharge(goal, name, args, instn, children, env)
        except (DerivationError, QpelTypeError) as exc:
            errors.append(str(exc))
    raise DerivationError(f"{name}: {errors[0] if errors else 'no reading applies'}")


def _premise_need(p: Premise) -> frozenset:
    ext_names = {n for n, _ in p.ext}
    fvs = frozenset()
    for part in p.shape[1:]:
        if hasattr(part, "__class__") and not isinstance(part, (str, int)):
            try:
                fvs |= free_vars(part)
            except TypeError:
                pass
    return fvs - ext_names


def _split_zones(goal, instn: Instantiation) -> dict:
    pool = goal.ctx
    for entry in instn.fixed:
        if entry not in pool.entries:
            raise DerivationError(
                f"conclusion context must contain {entry[0]} : fixed binding"
            )
        pool = Context(tuple(e for e in pool.entries if e != entry))

    zones = list(instn.zones)
    bindings = {"": Context()}
    if not zones:
        if len(pool):
            raise DerivationError(
                "this rule concludes in the empty context, but the goal context is not empty"
            )
        return bindings

    needs = {z: set() for z in zones}
    pool_names = set(pool.names())
    last_open = None
    for p in instn.premises:
        if p.zone:
            needs[p.zone] |= _premise_need(p) & pool_names
            last_open = p.zone
        else:
            stray = _premise_need(p) & pool_names
            if stray:
                raise DerivationError(
                    f"premise must be closed but mentions {sorted(stray)[0]!r}"
                )
    if last_open is None:
        last_open = zones[-1]

    order = [z for z in zones if z != last_open] + [last_open]
    try:
        parts = split_context(pool, [needs[z] for z in order])
    except QpelTypeError as exc:
        raise DerivationError(str(exc))
    bindings.update(dict(zip(order, parts)))
    return bindings


def _discharge(goal, name, args, instn: Instantiation, children, env: Env) -> Derivation:
    bindings = _split_zones(goal, instn)
    premises = instn.premises
    if children is not None and len(children) != len(premises):
        raise DerivationError(
            f"{name} takes {len(premises)} premises, got {len(children)}"
        )

    child_derivs = []
    for i, p in enumerate(premises):
        zone_ctx = bindings[p.zone]
        script = children[i] if children is not None else None
        if p.shape[0] == "equiv":
            base = Context(zone_ctx.entries + tuple(p.ext))
            fwd = EffLeq(base, p.shape[1], p.shape[2])
            bwd = EffLeq(base, p.shape[2], p.shape[1])
            if isinstance(script, BothNode):
                df = check_script(fwd, script.fwd, env)
                db = check_script(bwd, script.bwd, env)
            elif script is None:
                df = _auto_premise(fwd, env)
                db = _auto_premise(bwd, env)
            else:
                df = check_script(fwd, script, env)
                db = check_script(bwd, script, env)
            child_derivs.append(Derivation("both", fwd, (df, db)))
            continue
        j = p.to_judgement(zone_ctx)
        if script is None:
            child_derivs.append(_auto_premise(j, env))
        else:
            child_derivs.append(check_script(j, script, env))
    return Derivation(name, goal, tuple(child_derivs), dict(args))


def _auto_premise(j: Judgement, env: Env) -> Derivation:
    if isinstance(j, Typing):
        return check_term(j.ctx, j.term, j.ty, env.resolver()).derivation
    if isinstance(j, EffForm):
        return check_effect(j.ctx, j.eff, env.resolver()).derivation
    if isinstance(j, EffLeq):
        try:
            return auto_search_leq(j, env.depth, env)
        except SearchFailed:
            raise DerivationError(
                f"premise not proved within depth {env.depth}: {show_judgement(j)}"
            )
    if isinstance(j, TermEq):
        if j.lhs == j.rhs:
            return _check_rule_node(j, "ref", {}, None, env)
        raise DerivationError(
            f"premise needs an explicit script: {show_judgement(j)}"
        )
    raise TypeError(j)


# ------------------------------------------------------------- bounded search


class SearchFailed(Exception):
    pass


# inequality-concluding rules explored by the search, in order; transitivity
# is handled separately with a bounded middle-candidate family
SEARCH_RULES = (
    "leq-ref", "arith", "zero-leq", "ortho-2", "ovee-0", "leq-ovee",
    "bot-bot", "bot-antitone", "ovee-comm", "ovee-mono", "perp-rotate",
    "ovee-assoc", "ortho-1", "unit-l", "unit-r", "assoc", "comm", "dist-l",
    "dist-r", "case-mono", "case-leq", "case-ovee", "case-bot", "case-times",
    "case-cong", "eta-plus-eff", "beta-plus-1-eff", "beta-plus-2-eff",
    "qbit-x-proj", "qbit-z-proj", "qbit-xz-zx",
)


def _mid_candidates(goal: EffLeq):
    out = [Orth(Orth(goal.low)), one()]
    if isinstance(goal.high, OSum):
        out.append(goal.high.left)
        out.append(goal.high.right)
        out.append(OSum(goal.high.right, goal.high.left))
    if isinstance(goal.low, OSum):
        out.append(goal.low.left)
        out.append(OSum(goal.low.right, goal.low.left))
    if isinstance(goal.high, Orth):
        out.append(Orth(Orth(goal.high)))
    seen, dedup = set(), []
    for c in out:
        key = hash(c)
        if key not in seen and c != goal.low and c != goal.high:
            seen.add(key)
            dedup.append(c)
    return dedup


def auto_search_leq(goal: EffLeq, depth: int, env: Env) -> Derivation:
    """Deterministic bounded search; results always re-check."""
    return _search(goal, depth, env, set())


def _search(goal: EffLeq, depth: int, env: Env, seen) -> Derivation:
    if depth <= 0:
        raise SearchFailed()
    key = (hash((goal.ctx, goal.low, goal.high)), depth)
    if key in seen:
        raise SearchFailed()
    seen = seen | {key}

    for lemma_name in sorted(env.lemmas):
        for j in env.lemmas[lemma_name]:
            if isinstance(j, EffLeq) and judgement_up_to_exchange(j, goal):
                return Derivation("use", goal, (), {"name": lemma_name})

    def synth(term, extra=()):
        return synth_type(goal.ctx, term, extra)

    for name in SEARCH_RULES:
        if name == "arith":
            try:
                return check_arith(goal)
            except DerivationError:
                continue
        schema = rules.SCHEMAS[name]
        if schema.pack not in env.packs:
            continue
        try:
            candidates = schema.match(goal, {}, synth)
        except RuleMismatch:
            continue
        for instn in candidates:
            d = _try_instantiation(goal, name, instn, depth, env, seen)
            if d is not None:
                return d

    if depth >= 2:
        for mid in _mid_candidates(goal):
            try:
                schema = rules.SCHEMAS["leq-trans"]
                candidates = schema.match(goal, {"via": mid}, synth)
            except RuleMismatch:
                continue
            for instn in candidates:
                d = _try_instantiation(
                    goal, "leq-trans", instn, depth, env, seen, args={"via": mid}
                )
                if d is not None:
                    return d
    raise SearchFailed()


def _try_instantiation(goal, name, instn, depth, env, seen, args=None):
    try:
        bindings = _split_zones(goal, instn)
    except DerivationError:
        return None
    children = []
    for p in instn.premises:
        zone_ctx = bindings[p.zone]
        if p.shape[0] == "equiv":
            base = Context(zone_ctx.entries + tuple(p.ext))
            try:
                df = _search(EffLeq(base, p.shape[1], p.shape[2]), depth - 1, env, seen)
                db = _search(EffLeq(base, p.shape[2], p.shape[1]), depth - 1, env, seen)
            except SearchFailed:
                return None
            children.append(Derivation("both", EffLeq(base, p.shape[1], p.shape[2]), (df, db)))
            continue
        j = p.to_judgement(zone_ctx)
        if isinstance(j, Typing):
            try:
                children.append(check_term(j.ctx, j.term, j.ty, env.resolver()).derivation)
            except QpelTypeError:
                return None
        elif isinstance(j, EffForm):
            try:
                children.append(check_effect(j.ctx, j.eff, env.resolver()).derivation)
            except QpelTypeError:
                return None
        elif isinstance(j, EffLeq):
            try:
                children.append(_search(j, depth - 1, env, seen))
            except SearchFailed:
                return None
        else:  # term equality: only reflexivity
            if j.lhs == j.rhs:
                try:
                    children.append(
                        Derivation(
                            "ref", j, (check_term(j.ctx, j.lhs, j.ty, env.resolver()).derivation,)
                        )
                    )
                except QpelTypeError:
                    return None
            else:
                return None
    return Derivation(name, goal, tuple(children), dict(args or {}))


# ------------------------------------------------------- derivation re-check


def deriv_to_script(d: Derivation):
    """Convert an emitted derivation back into a checkable script."""
    if d.rule in ("lit",):
        return AutoNode()
    if d.rule == "arith":
        return ArithNode()
    if d.rule == "use":
        return UseNode(d.args["name"])
    if d.rule == "both":
        return BothNode(deriv_to_script(d.children[0]), deriv_to_script(d.children[1]))
    prems = tuple(deriv_to_script(c) for c in d.children)
    args = {
        k: v
        for k, v in d.args.items()
        if (d.rule, k) in (("trans", "via"), ("leq-trans", "via"), ("measure-perm", "perm"))
        or k in ("ty", "ty2", "x", "body", "m", "n")
    }
    return ScriptNode(d.rule, args, prems if prems else None)


def recheck_derivation(d: Derivation, env: Env) -> Derivation:
    return check_script(d.judgement, deriv_to_script(d), env)
