"""Finitely supported distributions over an effect monoid of scalars.

A distribution assigns scalars to finitely many points, with the partial sum
of all weights defined and equal to 1.  Zero weights are dropped, so equality
and hashing are support-based; building one whose weights do not sum to 1
raises, which is how a non-distribution input signals itself.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .effects import EffectMonoid


def _key(x):
    return repr(x)


@dataclass(frozen=True)
class Distribution:
    weights: tuple  # ((element, scalar), ...) canonically sorted, no zeros

    def __call__(self, x):
        for y, w in self.weights:
            if y == x:
                return w
        return None  # caller supplies the monoid zero if needed

    def support(self):
        return [x for x, _ in self.weights]

    def items(self):
        return list(self.weights)


def dist(monoid: EffectMonoid, pairs) -> Distribution:
    """Build a distribution, merging duplicate points with the partial sum and
    checking the total mass is 1."""
    acc: dict = {}
    order: list = []
    for x, w in pairs:
        k = _key(x)
        if k in acc:
            prev_x, prev_w = acc[k]
            s = monoid.ovee(prev_w, w)
            if s is None:
                raise ValueError(f"weights at {x!r} do not add up inside the monoid")
            acc[k] = (prev_x, s)
        else:
            acc[k] = (x, w)
            order.append(k)
    total = None
    for k in order:
        _, w = acc[k]
        total = w if total is None else monoid.ovee(total, w)
        if total is None:
            raise ValueError("total mass is undefined in the scalar monoid")
    if total != monoid.one:
        raise ValueError(f"total mass {total!r} is not 1")
    weights = tuple(
        sorted(((x, w) for x, w in acc.values() if w != monoid.zero), key=lambda p: _key(p[0]))
    )
    return Distribution(weights)


def unit(monoid: EffectMonoid, a) -> Distribution:
    """Point mass at a."""
    return dist(monoid, [(a, monoid.one)])


def dmap(monoid: EffectMonoid, f, d: Distribution) -> Distribution:
    return dist(monoid, [(f(x), w) for x, w in d.items()])


def mult(monoid: EffectMonoid, dd: Distribution) -> Distribution:
    """Flatten a distribution over distributions: weight of a point is the sum
    over inner distributions of (outer weight times inner weight)."""
    pairs = []
    for inner, w_outer in dd.items():
        for x, w_inner in inner.items():
            pairs.append((x, monoid.mul(w_outer, w_inner)))
    return dist(monoid, pairs)


def bind(monoid: EffectMonoid, d: Distribution, f) -> Distribution:
    return mult(monoid, dmap(monoid, f, d))


def strength(monoid: EffectMonoid, a, d: Distribution) -> Distribution:
    """t(a, phi) over pairs: weight of (a', b) is phi(b) when a = a', else 0."""
    return dist(monoid, [((a, b), w) for b, w in d.items()])


def strength_left_first(monoid: EffectMonoid, da: Distribution, db: Distribution) -> Distribution:
    return bind(monoid, da, lambda a: strength(monoid, a, db))


def strength_right_first(monoid: EffectMonoid, da: Distribution, db: Distribution) -> Distribution:
    flipped = bind(monoid, db, lambda b: strength(monoid, b, da))
    return dmap(monoid, lambda p: (p[1], p[0]), flipped)


def all_distributions(monoid: EffectMonoid, elements) -> list[Distribution]:
    """Every distribution on a finite set over a finite scalar monoid."""
    elements = list(elements)
    scalars = list(monoid.samples())
    out = []
    for weights in product(scalars, repeat=len(elements)):
        total = None
        ok = True
        for w in weights:
            total = w if total is None else monoid.ovee(total, w)
            if total is None:
                ok = False
                break
        if ok and total == monoid.one:
            out.append(dist(monoid, list(zip(elements, weights))))
    return out
