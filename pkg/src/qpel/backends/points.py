"""Point structure shared by the set and stochastic backends.

Objects are ordered tuples of points: the unit object holds "*", tensoring
pairs points, and sums tag them with "L"/"R".
"""
from __future__ import annotations

STAR = "*"

UNIT_OB = (STAR,)


def tensor_points(a, b):
    return tuple((x, y) for x in a for y in b)


def sum_points(a, b):
    return tuple(("L", x) for x in a) + tuple(("R", y) for y in b)


def show_point(p) -> str:
    if p == STAR:
        return "<>"
    if isinstance(p, tuple) and len(p) == 2 and p[0] == "L":
        return f"inl {show_point(p[1])}"
    if isinstance(p, tuple) and len(p) == 2 and p[0] == "R":
        return f"inr {show_point(p[1])}"
    if isinstance(p, tuple) and len(p) == 2:
        return f"({show_point(p[0])}, {show_point(p[1])})"
    return repr(p)
