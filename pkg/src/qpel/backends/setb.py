"""The set backend: objects are finite sets, computations are functions,
predicates are subsets, states are elements, and the scalars are {0, 1}."""
from __future__ import annotations

from dataclasses import dataclass

from ..triangle import Backend, BackendError, nfold
from .points import STAR, UNIT_OB, sum_points, tensor_points


@dataclass
class SetMor:
    dom: tuple
    cod: tuple
    table: dict

    def __post_init__(self):
        assert set(self.table) == set(self.dom)


def _fn(dom, cod, f) -> SetMor:
    table = {x: f(x) for x in dom}
    for v in table.values():
        if v not in cod:
            raise BackendError(f"function lands outside its codomain: {v!r}")
    return SetMor(dom, cod, table)


class SetBackend(Backend):
    name = "set"

    # scalars: 0/1
    def s_zero(self):
        return 0

    def s_one(self):
        return 1

    def s_ovee(self, a, b):
        return None if a and b else a | b

    def s_ovee_inverse(self, a):
        return 1 - a

    def s_mul(self, a, b):
        return a & b

    def scalar_of_fraction(self, q):
        if q == 0:
            return 0
        if q == 1:
            return 1
        raise BackendError(f"the boolean scalars cannot represent {q}")

    # objects
    def unit_ob(self):
        return UNIT_OB

    def tensor_ob(self, a, b):
        return tensor_points(a, b)

    def sum_ob(self, a, b):
        return sum_points(a, b)

    # morphisms
    def identity(self, a):
        return _fn(a, a, lambda x: x)

    def compose(self, g, f):
        if f.cod != g.dom:
            raise BackendError("composition domain mismatch")
        return SetMor(f.dom, g.cod, {x: g.table[f.table[x]] for x in f.dom})

    def tensor_mor(self, f, g):
        dom = self.tensor_ob(f.dom, g.dom)
        cod = self.tensor_ob(f.cod, g.cod)
        return SetMor(dom, cod, {(x, y): (f.table[x], g.table[y]) for x, y in dom})

    def dom(self, f):
        return f.dom

    def cod(self, f):
        return f.cod

    def symmetry(self, a, b):
        return _fn(self.tensor_ob(a, b), self.tensor_ob(b, a), lambda p: (p[1], p[0]))

    def assoc(self, a, b, c):
        return _fn(
            self.tensor_ob(self.tensor_ob(a, b), c),
            self.tensor_ob(a, self.tensor_ob(b, c)),
            lambda p: (p[0][0], (p[0][1], p[1])),
        )

    def assoc_inv(self, a, b, c):
        return _fn(
            self.tensor_ob(a, self.tensor_ob(b, c)),
            self.tensor_ob(self.tensor_ob(a, b), c),
            lambda p: ((p[0], p[1][0]), p[1][1]),
        )

    def unit_left(self, a):
        return _fn(self.tensor_ob(UNIT_OB, a), a, lambda p: p[1])

    def unit_left_inv(self, a):
        return _fn(a, self.tensor_ob(UNIT_OB, a), lambda x: (STAR, x))

    def unit_right(self, a):
        return _fn(self.tensor_ob(a, UNIT_OB), a, lambda p: p[0])

    def unit_right_inv(self, a):
        return _fn(a, self.tensor_ob(a, UNIT_OB), lambda x: (x, STAR))

    def terminal(self, a):
        return _fn(a, UNIT_OB, lambda x: STAR)

    def inj1(self, a, b):
        return _fn(a, self.sum_ob(a, b), lambda x: ("L", x))

    def inj2(self, a, b):
        return _fn(b, self.sum_ob(a, b), lambda y: ("R", y))

    def cotuple(self, f, g):
        if f.cod != g.cod:
            raise BackendError("cotuple codomain mismatch")
        dom = self.sum_ob(f.dom, g.dom)
        return SetMor(
            dom,
            f.cod,
            {p: (f.table[p[1]] if p[0] == "L" else g.table[p[1]]) for p in dom},
        )

    def dist_left(self, a, b, c):
        def go(p):
            (tag, x), y = p
            return (tag, (x, y))

        dom = self.tensor_ob(self.sum_ob(a, b), c)
        cod = self.sum_ob(self.tensor_ob(a, c), self.tensor_ob(b, c))
        return _fn(dom, cod, go)

    def dist_left_inv(self, a, b, c):
        def go(p):
            tag, (x, y) = p
            return ((tag, x), y)

        dom = self.sum_ob(self.tensor_ob(a, c), self.tensor_ob(b, c))
        cod = self.tensor_ob(self.sum_ob(a, b), c)
        return _fn(dom, cod, go)

    def mor_eq(self, f, g):
        return f.dom == g.dom and f.cod == g.cod and f.table == g.table

    # predicates: subsets as frozensets
    def pred_zero(self, a):
        return frozenset()

    def pred_one(self, a):
        return frozenset(a)

    def pred_ovee(self, p, q):
        return None if p & q else p | q

    def pred_orth(self, a, p):
        return frozenset(a) - p

    def pred_smul(self, r, p):
        return p if r else frozenset()

    def pred_eq(self, p, q):
        return p == q

    def pred_leq(self, p, q):
        return p <= q

    def apply_pred(self, f, q):
        return frozenset(x for x in f.dom if f.table[x] in q)

    def pred_pair(self, a, b, p, q):
        return frozenset(("L", x) for x in p) | frozenset(("R", y) for y in q)

    def scalar_of_pred(self, p):
        return 1 if STAR in p else 0

    # states: elements
    def unit_state(self):
        return STAR

    def apply_state(self, f, s):
        return f.table[s]

    def state_pair(self, a, b, s, t):
        return (s, t)

    def validity(self, p, s):
        return 1 if s in p else 0

    def enum_states(self, a):
        return list(a)

    def random_state(self, a, rng):
        return rng.choice(list(a))

    def enum_preds(self, a):
        out = [frozenset()]
        for x in a:
            out = out + [p | {x} for p in out]
        return out

    def random_pred(self, a, rng):
        return frozenset(x for x in a if rng.random() < 0.5)

    # measurement
    def meas(self, a, preds):
        union = set()
        for p in preds:
            if union & p:
                raise BackendError("measurement predicates overlap")
            union |= p
        if union != set(a):
            raise BackendError("measurement predicates do not cover the object")
        n = len(preds)

        def outcome(x):
            for i, p in enumerate(preds):
                if x in p:
                    return _nested_inj_point(i, n, STAR)
            raise AssertionError

        return _fn(a, nfold(self, UNIT_OB, n), outcome)


def _nested_inj_point(i: int, n: int, p):
    """Point of the left-nested n-fold sum hit by the i-th injection."""
    if n == 1:
        return p
    if i == n - 1:
        return ("R", p)
    return ("L", _nested_inj_point(i, n - 1, p))
