"""Poset builder expressions such as ``join(gset(G/1), gset(G/H2))``.

Grammar (Python call syntax, parsed with ``ast``):
  gset(G/1) | gset(G/G) | gset(G/H3)   discrete G-set, H3 = subgroup class index 3
  point | point(k) | empty
  cone(e) | susp(e) | join(e1, e2, ...) | union(e1, e2)
  induce(3, e) or induce(H3, e)   join induction from the class-3 subgroup K;
                                  inside e, G means K
"""
from __future__ import annotations

import ast

from .biset import induction_biset
from .grp import FiniteGroup, GroupError
from .gposet import (GPoset, cone, discrete_poset, empty_poset, jn_U, join_many, point_poset,
                     suspension, union)
from .gset import transitive_gset


class BuildError(GroupError):
    pass


def build_poset(expr: str, G: FiniteGroup) -> GPoset:
    try:
        tree = ast.parse(expr.strip(), mode="eval")
    except SyntaxError as e:
        raise BuildError(f"cannot parse poset expression: {e.msg}") from None
    return _eval(tree.body, G)


def _class_arg(node, G: FiniteGroup) -> int:
    """Class index from 1, G, H<i> or a bare integer."""
    lat = G.lattice
    if isinstance(node, ast.Constant) and isinstance(node.value, int):
        if node.value == 1:
            return 0
        raise BuildError("only G/1 may use a number; write H<i> for class i")
    if isinstance(node, ast.Name):
        if node.id == "G":
            return len(lat) - 1
        if node.id.startswith("H") and node.id[1:].isdigit():
            i = int(node.id[1:])
            if not 0 <= i < len(lat):
                raise BuildError(f"no subgroup class {i}")
            return i
    raise BuildError("expected 1, G or H<i>")


def _eval(node, G: FiniteGroup) -> GPoset:
    if isinstance(node, ast.Name):
        if node.id == "point":
            return point_poset(G)
        if node.id == "empty":
            return empty_poset(G)
        raise BuildError(f"unknown name {node.id!r}")
    if not isinstance(node, ast.Call) or not isinstance(node.func, ast.Name):
        raise BuildError("expected a constructor call")
    f, args = node.func.id, node.args
    if node.keywords:
        raise BuildError("keyword arguments are not supported")
    if f == "gset":
        if len(args) != 1 or not isinstance(args[0], ast.BinOp) or not isinstance(args[0].op, ast.Div):
            raise BuildError("gset expects G/<subgroup>")
        if not (isinstance(args[0].left, ast.Name) and args[0].left.id == "G"):
            raise BuildError("gset expects G/<subgroup>")
        i = _class_arg(args[0].right, G)
        return discrete_poset(transitive_gset(G, G.lattice.reps[i]))
    if f == "point":
        if len(args) > 1:
            raise BuildError("point takes at most one argument")
        k = 1
        if args:
            if not (isinstance(args[0], ast.Constant) and isinstance(args[0].value, int) and args[0].value >= 0):
                raise BuildError("point(k) needs a non-negative integer")
            k = args[0].value
        return point_poset(G, k)
    if f == "empty":
        return empty_poset(G)
    if f in ("cone", "susp"):
        if len(args) != 1:
            raise BuildError(f"{f} takes one argument")
        X = _eval(args[0], G)
        return cone(X) if f == "cone" else suspension(X)
    if f == "join":
        if len(args) < 1:
            raise BuildError("join needs arguments")
        return join_many([_eval(a, G) for a in args])
    if f == "union":
        if len(args) < 2:
            raise BuildError("union needs at least two arguments")
        X = _eval(args[0], G)
        for a in args[1:]:
            X = union(X, _eval(a, G))
        return X
    if f == "induce":
        if len(args) != 2:
            raise BuildError("induce takes (subgroup class, expression)")
        a = args[0]
        i = a.value if isinstance(a, ast.Constant) and isinstance(a.value, int) else _class_arg(a, G)
        if not 0 <= i < len(G.lattice):
            raise BuildError(f"no subgroup class {i}")
        U = induction_biset(G, G.lattice.reps[i])
        return jn_U(U, _eval(args[1], U.K))
    raise BuildError(f"unknown constructor {f!r}")
