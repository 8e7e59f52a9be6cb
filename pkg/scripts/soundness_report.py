#!/usr/bin/env python3
"""Run the generated rule-instance corpus end to end and print a soundness
matrix: every accepted lemma is evaluated in each backend able to interpret
it.  Exact equality for set/stochastic, Frobenius 1e-9 for quantum.
"""
from __future__ import annotations

import pathlib
import sys
import time

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent.parent / "src"))

from qpel.backends import make_backend
from qpel.corpus import all_items
from qpel.derivation import Env, check_script
from qpel.interpreter import backend_applicable, judgement_true
from qpel.typecheck import check_judgement


def main():
    t0 = time.monotonic()
    backends = [make_backend(n) for n in ("set", "stochastic", "quantum")]
    counts = {b.name: [0, 0] for b in backends}  # evaluated, true
    accepted = 0
    items = all_items()
    for it in items:
        env = Env(packs=frozenset({"core", "qubit", "beta-iso"}))
        j = check_judgement(it.judgement, env.resolver(it.requires))
        check_script(j, it.script, env)
        accepted += 1
        for b in backends:
            if backend_applicable(b, it.judgement):
                counts[b.name][0] += 1
                if judgement_true(b, it.judgement):
                    counts[b.name][1] += 1
                else:
                    print(f"  FALSE in {b.name}: {it.name}")
    print(f"corpus: {accepted}/{len(items)} instances accepted")
    for name, (evaluated, true) in counts.items():
        print(f"  {name:>10}: {true}/{evaluated} evaluated judgements true")
    total = sum(c[0] for c in counts.values())
    holds = sum(c[1] for c in counts.values())
    verdict = "sound" if holds == total else "UNSOUND"
    print(f"verdict: {verdict} ({holds}/{total}) in {time.monotonic() - t0:.1f}s")
    return 0 if holds == total else 1


if __name__ == "__main__":
    raise SystemExit(main())
