from fractions import Fraction

import pytest

from qpel.corpus import all_items, sc
from qpel.derivation import (
    SEARCH_RULES,
    DerivationError,
    Env,
    SearchFailed,
    auto_search_leq,
    check_arith,
    check_script,
    deriv_to_script,
    literal_value,
)
from qpel.parser import ScriptNode, UseNode
from qpel.parser import parse_effect_text as E
from qpel.parser import parse_term_text as T
from qpel.rules import ALL_RULE_NAMES, SCHEMAS
from qpel.syntax import (
    Context,
    EffLeq,
    Measure,
    Orth,
    OSum,
    ScalarLit,
    Star,
    TermEq,
    TQbit,
    TTensor,
    TUnit,
    Var,
    Zero,
    one,
)
from qpel.typecheck import check_judgement

QCTX = Context((("x", TQbit()),))
PHI = E("proj(x, 0)")


def env(*packs):
    return Env(packs=frozenset(packs) if packs else frozenset({"core", "qubit"}))


def test_rule_inventory_is_exactly_the_published_list():
    assert len(ALL_RULE_NAMES) == 80
    assert set(SCHEMAS) == set(ALL_RULE_NAMES)
    assert len(set(ALL_RULE_NAMES)) == 80
    packs = {SCHEMAS[n].pack for n in ALL_RULE_NAMES}
    assert packs == {"core", "qubit", "beta-iso"}
    qubit_rules = [n for n in ALL_RULE_NAMES if SCHEMAS[n].pack == "qubit"]
    assert len(qubit_rules) == 12


def test_measure_one_instance():
    g = TermEq(Context(), Measure(((one(), Star()),)), Star(), TUnit())
    d = check_script(g, sc("measure-1"), env())
    assert d.rule == "measure-1"


def test_beta_tensor_with_scaffolding():
    g2 = Context((("a", TUnit()), ("b", TUnit())))
    goal = TermEq(g2, T("let x * y = a * b in x * y"), T("a * b"), TTensor(TUnit(), TUnit()))
    d = check_script(goal, sc("beta-tensor"), env())
    assert d.rule == "beta-tensor"
    # wrapped in transitivity and symmetry scaffolding
    goal2 = TermEq(g2, T("a * b"), T("let x * y = a * b in x * y"), TTensor(TUnit(), TUnit()))
    d2 = check_script(goal2, sc("sym(beta-tensor)"), env())
    assert d2.rule == "sym"


def test_sym_with_swapped_premise_rejected():
    g = Context((("x", TUnit()),))
    goal = TermEq(g, Measure(((one(), Var("x")),)), Var("x"), TUnit())
    # sym expects the premise the other way round; measure-1 cannot prove it
    with pytest.raises(DerivationError):
        check_script(goal, sc("sym(measure-1)"), env())


def test_wrong_premise_count():
    g = Context((("x", TUnit()),))
    goal = TermEq(g, Var("x"), Var("x"), TUnit())
    with pytest.raises(DerivationError, match="premises"):
        check_script(goal, sc("ref(var; var)"), env())


def test_unknown_rule_name():
    goal = EffLeq(QCTX, Zero(), PHI)
    with pytest.raises(DerivationError, match="unknown rule"):
        check_script(goal, ScriptNode("zero-below", {}, None), env())


def test_pack_gating():
    goal = TermEq(QCTX, T("X (X x)"), T("x"), TQbit())
    with pytest.raises(DerivationError, match="pack"):
        check_script(goal, sc("qbit-xx"), env("core"))
    check_script(goal, sc("qbit-xx"), env("core", "qubit"))
    # core cannot be disabled
    assert "core" in Env(packs=frozenset({"qubit"})).packs


def test_beta_iso_needs_its_pack():
    from qpel.corpus import build_item

    it = build_item("beta-iso", 0)
    e_off = Env(packs=frozenset({"core", "qubit"}))
    j = check_judgement(it.judgement, e_off.resolver(it.requires))
    with pytest.raises(DerivationError, match="pack"):
        check_script(j, it.script, e_off)
    e_on = Env(packs=frozenset({"core", "qubit", "beta-iso"}))
    check_script(j, it.script, e_on)


def test_auto_search_examples():
    e = env()
    assert auto_search_leq(EffLeq(QCTX, Zero(), PHI), 6, e).rule == "zero-leq"
    d = auto_search_leq(EffLeq(QCTX, one(), OSum(PHI, Orth(PHI))), 6, e)
    assert d.rule == "ortho-2"
    with pytest.raises(SearchFailed):
        auto_search_leq(EffLeq(QCTX, PHI, Orth(PHI)), 6, e)


def test_generic_self_orthogonality_is_semantically_false():
    # phi <= bot(phi) fails the search and is false for phi = 2/3
    from qpel.backends import make_backend
    from qpel.interpreter import judgement_true

    st = make_backend("stochastic")
    phi = ScalarLit(Fraction(2, 3))
    j = EffLeq(Context(), phi, Orth(phi))
    assert not judgement_true(st, j)


def test_search_results_recheck():
    e = env()
    goals = [
        EffLeq(QCTX, Zero(), PHI),
        EffLeq(QCTX, one(), OSum(PHI, Orth(PHI))),
        EffLeq(QCTX, OSum(PHI, Orth(PHI)), one()),
        EffLeq(QCTX, one(), OSum(OSum(PHI, Orth(PHI)), Zero())),
        EffLeq(Context(), one(), OSum(ScalarLit(Fraction(1, 2)), ScalarLit(Fraction(1, 2)))),
    ]
    for goal in goals:
        d = auto_search_leq(goal, 6, e)
        redone = check_script(goal, deriv_to_script(d), e)
        assert redone.judgement == goal


def test_search_is_deterministic():
    e = env()
    goal = EffLeq(QCTX, one(), OSum(OSum(PHI, Orth(PHI)), Zero()))
    a = auto_search_leq(goal, 6, e)
    b = auto_search_leq(goal, 6, e)
    assert deriv_to_script(a) == deriv_to_script(b)


def test_exch_excluded_from_search():
    assert "exch" not in SEARCH_RULES
    assert "leq-trans" not in SEARCH_RULES


def test_arith_leaf():
    h = ScalarLit(Fraction(1, 2))
    good = EffLeq(Context(), one(), OSum(h, h))
    assert check_arith(good).rule == "arith"
    bad = EffLeq(Context(), one(), h)
    with pytest.raises(DerivationError, match="refuted"):
        check_arith(bad)
    nonlit = EffLeq(QCTX, PHI, PHI)
    with pytest.raises(DerivationError, match="literal"):
        check_arith(nonlit)
    assert literal_value(OSum(h, h)) == 1
    assert literal_value(OSum(h, ScalarLit(Fraction(3, 4)))) is None


def test_use_node_cites_lemmas():
    e = env()
    e.lemmas["covered"] = [EffLeq(QCTX, one(), OSum(PHI, Orth(PHI)))]
    goal = EffLeq(QCTX, one(), OSum(PHI, Orth(PHI)))
    d = check_script(goal, UseNode("covered"), e)
    assert d.rule == "use"
    with pytest.raises(DerivationError, match="no such lemma"):
        check_script(goal, UseNode("missing"), e)
    # context matched up to exchange
    ctx2 = Context((("y", TUnit()), ("x", TQbit())))
    e.lemmas["covered"] = [EffLeq(ctx2, one(), OSum(PHI, Orth(PHI)))]
    goal2 = EffLeq(Context((("x", TQbit()), ("y", TUnit()))), one(), OSum(PHI, Orth(PHI)))
    assert check_script(goal2, UseNode("covered"), e).rule == "use"


def test_schema_mismatch_message_names_the_difference():
    g2 = Context((("a", TUnit()), ("b", TUnit())))
    goal = TermEq(g2, T("let x * y = a * b in x * y"), T("b * a"), TTensor(TUnit(), TUnit()))
    with pytest.raises(DerivationError, match="right side"):
        check_script(goal, sc("beta-tensor"), env())


def test_permutation_side_condition():
    it_goal = TermEq(
        Context(),
        Measure(((one(), Star()), (Zero(), Star()))),
        Measure(((Zero(), Star()), (one(), Star()))),
        TUnit(),
    )
    with pytest.raises(DerivationError, match="permutation"):
        check_script(it_goal, sc("measure-perm[perm = [1, 1]]"), env())
    check_script(it_goal, sc("measure-perm[perm = [2, 1]]"), env())


def test_angle_side_conditions_are_exact():
    goal = EffLeq(QCTX, E("proj(X x, 1/2)"), E("proj(x, 3/2)"))
    check_script(goal, sc("qbit-x-proj"), env())
    bad = EffLeq(QCTX, E("proj(X x, 1/2)"), E("proj(x, 1/2)"))
    with pytest.raises(DerivationError):
        check_script(bad, sc("qbit-x-proj"), env())


def test_qubit_involutions_at_depth_one():
    for rule, term in (("qbit-xx", T("X (X x)")), ("qbit-zz", T("Z (Z x)"))):
        goal = TermEq(QCTX, term, Var("x"), TQbit())
        d = check_script(goal, ScriptNode(rule, {}, None), env())
        assert d.rule == rule
        assert d.children[0].rule == "var"  # depth-1: single typing premise


def test_corpus_rules_used_match_roots():
    for it in all_items():
        e = Env(packs=frozenset({"core", "qubit", "beta-iso"}))
        j = check_judgement(it.judgement, e.resolver(it.requires))
        d = check_script(j, it.script, e)
        assert d.rule in set(ALL_RULE_NAMES) | {"use", "both", "arith"}
