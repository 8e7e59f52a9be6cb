#!/usr/bin/env python3
"""Regenerate the .qpel corpus files from the rule-instance builders.

Items are partitioned by the backends able to interpret them: core items work
everywhere, probabilistic items mention scalar literals (no set backend), and
qubit items need the quantum backend.  The measurement-substitution rule gets
its own file since it needs the beta-iso rule pack.
"""
from __future__ import annotations

import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent.parent / "src"))

from qpel.corpus import all_items
from qpel.interpreter import judgement_features
from qpel.parser import print_script
from qpel.printer import print_context, print_effect, print_term, print_type
from qpel.syntax import EffForm, TermEq, Typing


def goal_text(j):
    if isinstance(j, Typing):
        return f"{print_term(j.term)} : {print_type(j.ty)}"
    if isinstance(j, TermEq):
        return f"{print_term(j.lhs)} = {print_term(j.rhs)} : {print_type(j.ty)}"
    if isinstance(j, EffForm):
        return f"{print_effect(j.eff)} eff"
    return f"{print_effect(j.low)} <= {print_effect(j.high)}"


def lemma_text(item) -> str:
    name = f"{item.rule}-{item.variant}"
    parts = [f"lemma {name} {print_context(item.judgement.ctx)} : {goal_text(item.judgement)}"]
    if item.requires:
        parts.append("requires { " + "; ".join(print_script(s) for s in item.requires) + " }")
    parts.append("by { " + print_script(item.script) + " }")
    return "\n  ".join(parts)


def main():
    root = pathlib.Path(__file__).resolve().parent.parent / "corpus"
    root.mkdir(exist_ok=True)
    buckets = {"core": [], "probabilistic": [], "qubit": [], "beta_iso": []}
    for item in all_items():
        feats = judgement_features(item.judgement)
        if item.pack == "beta-iso":
            buckets["beta_iso"].append(item)
        elif "qbit" in feats:
            buckets["qubit"].append(item)
        elif "literal" in feats:
            buckets["probabilistic"].append(item)
        else:
            buckets["core"].append(item)
    headers = {
        "core": "-- rule instances interpretable in every backend",
        "probabilistic": "-- rule instances with probability literals (set backend skips)",
        "qubit": "-- rule instances over qubits (quantum backend only)",
        "beta_iso": "-- instances of the measurement-substitution rule;"
        "\n-- check with --rules core,qubit,beta-iso",
    }
    for bucket, items in buckets.items():
        path = root / f"{bucket}.qpel"
        body = headers[bucket] + "\n\n" + "\n\n".join(lemma_text(i) for i in items) + "\n"
        path.write_text(body, encoding="utf-8")
        print(f"wrote {path} ({len(items)} lemmas)")


if __name__ == "__main__":
    main()
