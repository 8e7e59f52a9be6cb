import random
from fractions import Fraction

import pytest

from qpel.dist import (
    all_distributions,
    bind,
    dist,
    dmap,
    mult,
    strength,
    strength_left_first,
    strength_right_first,
    unit,
)
from qpel.effects import boolean_monoid, boolean_square_monoid, unit_interval_monoid

Q = unit_interval_monoid()
B = boolean_monoid()
SQ = boolean_square_monoid()


def test_unit_is_point_mass():
    d = unit(Q, "x")
    assert d("x") == 1
    assert d("y") is None
    assert d.items() == [("x", Fraction(1))]


def test_total_mass_enforced():
    with pytest.raises(ValueError):
        dist(Q, [("a", Fraction(1, 2)), ("b", Fraction(1, 3))])
    with pytest.raises(ValueError):
        dist(Q, [("a", Fraction(2, 3)), ("b", Fraction(2, 3))])


def test_map_preserves_unit():
    # naturality at the unit: D(f)(eta(a)) = eta(f(a)), brute force over a
    # three element set
    f = {"a": 1, "b": 1, "c": 2}.get
    for x in "abc":
        assert dmap(Q, f, unit(Q, x)) == unit(Q, f(x))


def test_mult_unit_law():
    phi = dist(Q, [("a", Fraction(1, 2)), ("b", Fraction(1, 2))])
    assert mult(Q, unit(Q, phi)) == phi
    assert mult(Q, dmap(Q, lambda x: unit(Q, x), phi)) == phi


def test_mult_hand_example():
    # Phi = 1/2 eta(delta_a) + 1/2 eta(delta_b)  ==>  mu(Phi) = 1/2 a + 1/2 b
    da, db = unit(Q, "a"), unit(Q, "b")
    h = Fraction(1, 2)
    big = dist(Q, [(da, h), (db, h)])
    assert mult(Q, big) == dist(Q, [("a", h), ("b", h)])


def _assoc_holds(monoid, elements, window=None):
    """mu . mu == mu . D(mu) over depth-3 distributions.

    The third level is enumerated exhaustively when feasible; otherwise over
    every support window of the given size (the laws are support-local, so
    bounded-support exhaustion still covers each combination of weights).
    """
    level1 = all_distributions(monoid, elements)
    level2 = all_distributions(monoid, level1)
    if window is None:
        outer = all_distributions(monoid, level2)
    else:
        outer = []
        for i in range(len(level2)):
            for j in range(i + 1, min(i + 1 + window, len(level2))):
                outer.extend(all_distributions(monoid, [level2[i], level2[j]]))
    for ddd in outer:
        lhs = mult(monoid, mult(monoid, ddd))
        rhs = mult(monoid, dmap(monoid, lambda dd: mult(monoid, dd), ddd))
        if lhs != rhs:
            return False
    return True


def test_monad_assoc_exhaustive_boolean():
    # over {0,1} the distributions are point masses, carriers up to 4
    assert _assoc_holds(B, list("wxyz"))


def test_monad_assoc_boolean_square():
    assert _assoc_holds(SQ, list("xy"), window=6)
    assert _assoc_holds(SQ, list("xyz"), window=2)


def test_monad_unit_laws_exhaustive_boolean_square():
    for elems in (list("xy"), list("xyzw")):
        for phi in all_distributions(SQ, elems):
            assert mult(SQ, unit(SQ, phi)) == phi
            assert mult(SQ, dmap(SQ, lambda x: unit(SQ, x), phi)) == phi


def test_strength_formula():
    # t(a, phi)(a', b) = phi(b) if a = a' else 0 — the verbatim table
    phi = dist(Q, [("u", Fraction(1, 4)), ("v", Fraction(3, 4))])
    t = strength(Q, "a", phi)
    assert t(("a", "u")) == Fraction(1, 4)
    assert t(("a", "v")) == Fraction(3, 4)
    assert t(("b", "u")) is None
    assert strength(Q, "a", unit(Q, "b")) == unit(Q, ("a", "b"))


def test_strength_marginal():
    phi = dist(Q, [("u", Fraction(1, 3)), ("v", Fraction(2, 3))])
    t = strength(Q, "a", phi)
    marg = dmap(Q, lambda p: p[1], t)
    assert marg == phi


def test_strength_exhaustive_small():
    for elems in (list("xy"), list("xyzw")):
        for phi in all_distributions(SQ, elems):
            t = strength(SQ, "c", phi)
            for b, w in phi.items():
                assert t(("c", b)) == w


def test_strength_composites_commute_when_commutative():
    # both composites agree because the scalars commute
    for monoid, elems in ((SQ, list("xy")), (Q, None)):
        if elems is not None:
            das = all_distributions(monoid, elems)
            dbs = all_distributions(monoid, list("uv"))
            pairs = [(a, b) for a in das for b in dbs]
        else:
            rng = random.Random(12)
            pairs = []
            for _ in range(60):
                w = Fraction(rng.randint(0, 4), 4)
                da = dist(Q, [("a", w), ("b", 1 - w)])
                v = Fraction(rng.randint(0, 8), 8)
                db = dist(Q, [("u", v), ("v", 1 - v)])
                pairs.append((da, db))
        for da, db in pairs:
            assert strength_left_first(monoid, da, db) == strength_right_first(monoid, da, db)


def test_bind_matches_mult_of_map():
    rng = random.Random(13)
    for _ in range(50):
        w = Fraction(rng.randint(0, 6), 6)
        d = dist(Q, [("a", w), ("b", 1 - w)])
        f = lambda x: unit(Q, (x, x))
        assert bind(Q, d, f) == mult(Q, dmap(Q, f, d))
