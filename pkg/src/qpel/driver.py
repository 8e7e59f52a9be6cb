"""File processing pipeline: parse, typecheck, check lemma derivations, and
optionally verify everything denotationally in selected backends.

Exit codes: 0 success, 2 parse failure, 3 typing failure, 4 proof failure,
5 semantic mismatch.  When several declarations fail, the earliest pipeline
stage wins.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .backends import make_backend
from .backends.points import show_point
from .derivation import DerivationError, Env, check_script
from .interpreter import (
    backend_applicable,
    interp_effect,
    interp_term,
    judgement_true,
    weakest_precondition,
)
from .parser import (
    BothNode,
    CheckDecl,
    EffectDecl,
    ElabError,
    GEquiv,
    LemmaDecl,
    QpelSyntaxError,
    SourceFile,
    TermDecl,
    TypeDecl,
    parse,
)
from .printer import rational
from .syntax import Context, TermEq, Typing
from .typecheck import (
    ObligationError,
    QpelTypeError,
    check_effect,
    check_judgement,
    check_term,
)

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_TYPE = 3
EXIT_PROOF = 4
EXIT_SEMANTIC = 5


@dataclass
class DeclReport:
    name: str
    kind: str
    status: str  # ok | type-error | proof-error | semantic-mismatch
    stage: str  # parsed | typechecked | lemma-checked | backend-verified | evaluated
    message: str = ""
    backends: dict = field(default_factory=dict)  # backend -> true/false/skipped
    elapsed: float = 0.0

    @property
    def ok(self):
        return self.status == "ok"


@dataclass
class FileReport:
    path: str
    decls: list = field(default_factory=list)
    parse_error: str | None = None

    @property
    def exit_code(self) -> int:
        if self.parse_error is not None:
            return EXIT_PARSE
        worst = EXIT_OK
        order = {"type-error": EXIT_TYPE, "proof-error": EXIT_PROOF, "semantic-mismatch": EXIT_SEMANTIC}
        for d in self.decls:
            if d.status in order:
                code = order[d.status]
                if worst == EXIT_OK or code < worst:
                    worst = code
        return worst

    def to_json(self, timing=False):
        out = {"path": self.path, "exit": self.exit_code}
        if self.parse_error is not None:
            out["parse_error"] = self.parse_error
            return out
        decls = []
        for d in self.decls:
            entry = {"name": d.name, "kind": d.kind, "status": d.status, "stage": d.stage}
            if d.message:
                entry["message"] = d.message
            if d.backends:
                entry["backends"] = d.backends
            if timing:
                entry["elapsed"] = round(d.elapsed, 6)
            decls.append(entry)
        out["decls"] = decls
        return out

    def render_text(self, timing=False) -> str:
        lines = [f"== {self.path}"]
        if self.parse_error is not None:
            lines.append(f"  parse error: {self.parse_error}")
            return "\n".join(lines)
        for d in self.decls:
            mark = "ok  " if d.ok else "FAIL"
            line = f"  [{mark}] {d.kind} {d.name}: {d.stage}"
            if d.backends:
                line += " (" + ", ".join(f"{b}={v}" for b, v in sorted(d.backends.items())) + ")"
            if d.message:
                line += f" -- {d.message}"
            if timing:
                line += f" [{d.elapsed:.3f}s]"
            lines.append(line)
        return "\n".join(lines)


def render_state(backend_name: str, state) -> str:
    if backend_name == "set":
        return show_point(state)
    if backend_name == "stochastic":
        items = sorted(state.items(), key=lambda kv: repr(kv[0]))
        return ", ".join(f"{show_point(p)} : {rational(w)}" for p, w in items)
    parts = []
    for i, blk in enumerate(state):
        rows = []
        for row in np.asarray(blk):
            rows.append("[" + ", ".join(f"{v.real:.6g}{v.imag:+.6g}j" if abs(v.imag) > 1e-9 else f"{v.real:.6g}" for v in row) + "]")
        parts.append(f"block {i}: [" + ", ".join(rows) + "]")
    return "; ".join(parts)


def render_pred(state) -> str:
    parts = []
    for i, blk in enumerate(state):
        rows = []
        for row in np.asarray(blk):
            rows.append("[" + ", ".join(f"{v.real:.6g}{v.imag:+.6g}j" if abs(v.imag) > 1e-9 else f"{v.real:.6g}" for v in row) + "]")
        parts.append(f"block {i}: [" + ", ".join(rows) + "]")
    return "; ".join(parts)


@dataclass
class CheckedDecl:
    decl: object
    judgements: list
    derivations: list


def _verify_lemma(judgements, verify, report: DeclReport):
    for backend_name in verify:
        backend = make_backend(backend_name)
        applicable = all(backend_applicable(backend, j) for j in judgements)
        if not applicable:
            report.backends[backend_name] = "skipped"
            continue
        ok = all(judgement_true(backend, j) for j in judgements)
        report.backends[backend_name] = "true" if ok else "false"
        if not ok:
            report.status = "semantic-mismatch"
            report.message = "judgement is false in the %s backend" % backend_name
    if report.status == "ok" and verify:
        report.stage = "backend-verified"


def process_file(sf: SourceFile, *, path="<input>", packs=None, depth=6,
                 verify=(), sidecar=None) -> FileReport:
    env = Env(packs=packs or Env().packs, depth=depth)
    report = FileReport(path)
    terms = {}  # name -> (ctx, ty, erased term)
    sidecar = sidecar or {}

    for decl in sf.decls:
        t0 = time.monotonic()
        if isinstance(decl, TypeDecl):
            rep = DeclReport(decl.name, "type", "ok", "parsed")
        elif isinstance(decl, TermDecl):
            rep = DeclReport(decl.name, "term", "ok", "typechecked")
            try:
                check_term(decl.ctx, decl.term, decl.ty, env.resolver(decl.requires))
                terms[decl.name] = (decl.ctx, decl.ty, decl.term)
            except QpelTypeError as exc:
                rep.status, rep.message = "type-error", str(exc)
        elif isinstance(decl, EffectDecl):
            rep = DeclReport(decl.name, "effect", "ok", "typechecked")
            try:
                check_effect(decl.ctx, decl.eff, env.resolver(decl.requires))
                terms[decl.name] = (decl.ctx, None, decl.eff)
            except QpelTypeError as exc:
                rep.status, rep.message = "type-error", str(exc)
        elif isinstance(decl, LemmaDecl):
            rep = _process_lemma(decl, env, sidecar, verify)
        elif isinstance(decl, CheckDecl):
            rep = _process_check(decl, terms, verify)
        else:
            raise TypeError(decl)
        rep.elapsed = time.monotonic() - t0
        report.decls.append(rep)
    return report


def _process_lemma(decl: LemmaDecl, env: Env, sidecar, verify) -> DeclReport:
    rep = DeclReport(decl.name, "lemma", "ok", "parsed")
    goals = decl.judgements()
    script = decl.script if decl.script is not None else sidecar.get(decl.name)

    checked = []
    try:
        resolver = env.resolver(decl.requires)
        for j in goals:
            checked.append(check_judgement(j, resolver))
    except QpelTypeError as exc:
        rep.status, rep.message = "type-error", str(exc)
        return rep
    rep.stage = "typechecked"

    scripts = [script] * len(checked)
    if isinstance(decl.goal, GEquiv) and isinstance(script, BothNode):
        scripts = [script.fwd, script.bwd]

    try:
        for j, s in zip(checked, scripts):
            if s is None:
                if isinstance(j, TermEq):
                    raise DerivationError(
                        "a term equality lemma needs a `by { ... }` script"
                    )
                from .parser import AutoNode

                s = AutoNode()
            check_script(j, s, env)
    except (DerivationError, ObligationError) as exc:
        rep.status, rep.message = "proof-error", str(exc)
        return rep
    except QpelTypeError as exc:
        rep.status, rep.message = "type-error", str(exc)
        return rep
    rep.stage = "lemma-checked"
    env.lemmas[decl.name] = checked

    _verify_lemma(goals, verify, rep)
    return rep


def _process_check(decl: CheckDecl, terms, verify) -> DeclReport:
    rep = DeclReport(decl.name, "check", "ok", "parsed")
    if decl.name not in terms:
        rep.status, rep.message = "type-error", f"check names unknown declaration {decl.name!r}"
        return rep
    ctx, ty, body = terms[decl.name]
    if ty is None:
        rep.status, rep.message = "type-error", "check expects a term declaration"
        return rep
    if len(ctx):
        rep.status, rep.message = "type-error", "check expects a closed term"
        return rep
    for backend_name in verify:
        backend = make_backend(backend_name)
        j = Typing(ctx, body, ty)
        if not backend_applicable(backend, j):
            rep.backends[backend_name] = "skipped"
            continue
        f = interp_term(backend, Context(), body, ty)
        rep.backends[backend_name] = render_state(backend_name, backend.state_of_mor(f))
    if verify and rep.status == "ok":
        rep.stage = "evaluated"
    return rep


# ----------------------------------------------------------------- eval / wp


def eval_decl(sf: SourceFile, name: str, backend_name: str, *, depth=6):
    """Evaluate a closed term declaration to a backend state."""
    env = Env(depth=depth)
    backend = make_backend(backend_name)
    for decl in sf.decls:
        if isinstance(decl, TermDecl) and decl.name == name:
            if len(decl.ctx):
                raise QpelTypeError(f"declaration {name} is not closed")
            check_term(decl.ctx, decl.term, decl.ty, env.resolver(decl.requires))
            f = interp_term(backend, Context(), decl.term, decl.ty)
            return backend.state_of_mor(f), decl.ty
    raise QpelTypeError(f"no term declaration named {name!r}")


def wp_decls(sf: SourceFile, term_name: str, effect_name: str, *, depth=6,
             cross_check=False):
    """Weakest precondition of a declared effect along a declared term.

    The term is Gamma |- M : A, the effect is (x : A) |- phi; returns the
    predicate on the interpretation of Gamma, and optionally the largest
    absolute deviation from interpreting the substituted effect directly.
    """
    env = Env(depth=depth)
    backend = make_backend("quantum")
    term_decl = effect_decl = None
    for decl in sf.decls:
        if isinstance(decl, TermDecl) and decl.name == term_name:
            term_decl = decl
        if isinstance(decl, EffectDecl) and decl.name == effect_name:
            effect_decl = decl
    if term_decl is None:
        raise QpelTypeError(f"no term declaration named {term_name!r}")
    if effect_decl is None:
        raise QpelTypeError(f"no effect declaration named {effect_name!r}")
    if len(effect_decl.ctx) != 1:
        raise QpelTypeError("the effect declaration must have a single context variable")
    (var_name, var_ty), = effect_decl.ctx.entries
    if var_ty != term_decl.ty:
        raise QpelTypeError(
            "shape mismatch: the term produces %s but the effect context expects %s"
            % (term_decl.ty, var_ty)
        )

    check_term(term_decl.ctx, term_decl.term, term_decl.ty, env.resolver(term_decl.requires))
    body = term_decl.term
    eres = check_effect(effect_decl.ctx, effect_decl.eff, env.resolver(effect_decl.requires))
    eff = effect_decl.eff

    f = interp_term(backend, term_decl.ctx, body, term_decl.ty)
    # P((x : A)) sits at I (x) A; strip the unit factor to get P(A)
    from .interpreter import interp_type

    a_ob = interp_type(backend, term_decl.ty)
    p_ctx = interp_effect(backend, effect_decl.ctx, eff)
    p_a = backend.apply_pred(backend.unit_left_inv(a_ob), p_ctx)
    wp = weakest_precondition(backend, f, p_a)

    deviation = None
    if cross_check:
        from .syntax import subst

        substituted = subst(eff, var_name, body)
        direct = interp_effect(backend, term_decl.ctx, substituted)
        deviation = max(
            float(np.abs(np.asarray(x) - np.asarray(y)).max()) if np.asarray(x).size else 0.0
            for x, y in zip(wp, direct)
        )
    return wp, deviation


def run_paths(paths, *, packs=None, depth=6, verify=(), fmt="text", timing=False):
    """Process files in order; returns (rendered report, exit code)."""
    import json as _json
    import os

    from .parser import load_sidecar

    reports = []
    for p in paths:
        try:
            with open(p, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            rep = FileReport(str(p))
            rep.parse_error = str(exc)
            reports.append(rep)
            continue
        sidecar_path = str(p) + ".proofs.json"
        sidecar = None
        if os.path.exists(sidecar_path):
            sidecar = load_sidecar(sidecar_path)
        try:
            sf = parse(text)
        except (QpelSyntaxError, ElabError) as exc:
            rep = FileReport(str(p))
            rep.parse_error = str(exc)
            reports.append(rep)
            continue
        reports.append(
            process_file(sf, path=str(p), packs=packs, depth=depth, verify=verify, sidecar=sidecar)
        )
    exit_code = EXIT_OK
    for rep in reports:
        code = rep.exit_code
        if code != EXIT_OK and (exit_code == EXIT_OK or code < exit_code):
            exit_code = code
    if fmt == "json":
        rendered = _json.dumps([r.to_json(timing=timing) for r in reports], indent=2)
    else:
        rendered = "\n".join(r.render_text(timing=timing) for r in reports)
    return rendered, exit_code
