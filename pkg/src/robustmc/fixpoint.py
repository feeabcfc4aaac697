"""Monotone set functions over state sets and their fixed points.

The four schema functions are the building blocks of every temporal row of
the rCTL satisfaction table::

    F_E(T, S1, S2)         = S1 | {s in S2 : post(s) meets T}
    F_A(T, S1, S2)         = S1 | {s in S2 : post(s) within T}
    G_E(T1, T2, S1, S2)    = {s : post(s) meets T1} | S1 | {s in S2 : post(s) meets T2}
    G_A(T1, T2, S1, S2)    = {s : post(s) within T1} | S1 | {s in S2 : post(s) within T2}

Fixed points are computed by plain Kleene iteration; nested ones by
restarting the inner iteration at every outer step.  With ``debug`` on
(default: environment variable ``ROBUSTMC_DEBUG`` set), every iteration is
checked to move in the right direction.
"""
from __future__ import annotations

import os
from typing import Callable, Optional

from .kripke import KripkeStructure, StateSet

__all__ = [
    "NonMonotoneError", "f_exists", "f_forall", "g_exists", "g_forall",
    "lfp", "gfp", "lfp_gfp", "gfp_lfp", "DEBUG",
]

DEBUG = bool(os.environ.get("ROBUSTMC_DEBUG"))


class NonMonotoneError(RuntimeError):
    pass


def f_exists(m: KripkeStructure, t: StateSet, s1: StateSet, s2: StateSet) -> StateSet:
    return s1 | (s2 & m.pre_exists(t))


def f_forall(m: KripkeStructure, t: StateSet, s1: StateSet, s2: StateSet) -> StateSet:
    return s1 | (s2 & m.pre_forall(t))


def g_exists(m: KripkeStructure, t1: StateSet, t2: StateSet,
             s1: StateSet, s2: StateSet) -> StateSet:
    return m.pre_exists(t1) | s1 | (s2 & m.pre_exists(t2))


def g_forall(m: KripkeStructure, t1: StateSet, t2: StateSet,
             s1: StateSet, s2: StateSet) -> StateSet:
    return m.pre_forall(t1) | s1 | (s2 & m.pre_forall(t2))


def _debug(flag):
    return DEBUG if flag is None else flag


def lfp(f: Callable[[StateSet], StateSet], *, debug: Optional[bool] = None,
        stats: Optional[dict] = None) -> StateSet:
    """Least fixed point of a monotone ``f``, iterating upward from the empty set."""
    check = _debug(debug)
    t = 0
    steps = 0
    while True:
        nxt = f(t)
        steps += 1
        if check and nxt & t != t:
            raise NonMonotoneError("least fixed point iteration lost states")
        if nxt == t:
            break
        t = nxt
    if stats is not None:
        stats["iterations"] = stats.get("iterations", 0) + steps
    return t


def gfp(f: Callable[[StateSet], StateSet], universe: StateSet, *,
        debug: Optional[bool] = None, stats: Optional[dict] = None) -> StateSet:
    """Greatest fixed point of a monotone ``f``, iterating downward from ``universe``."""
    check = _debug(debug)
    t = universe
    steps = 0
    while True:
        nxt = f(t)
        steps += 1
        if check and nxt & ~t:
            raise NonMonotoneError("greatest fixed point iteration gained states")
        if nxt == t:
            break
        t = nxt
    if stats is not None:
        stats["iterations"] = stats.get("iterations", 0) + steps
    return t


def lfp_gfp(g: Callable[[StateSet, StateSet], StateSet], universe: StateSet, *,
            debug: Optional[bool] = None, stats: Optional[dict] = None) -> StateSet:
    """mu T1. nu T2. g(T1, T2)."""
    return lfp(lambda t1: gfp(lambda t2: g(t1, t2), universe, debug=debug, stats=stats),
               debug=debug)


def gfp_lfp(g: Callable[[StateSet, StateSet], StateSet], universe: StateSet, *,
            debug: Optional[bool] = None, stats: Optional[dict] = None) -> StateSet:
    """nu T2. mu T1. g(T1, T2)."""
    return gfp(lambda t2: lfp(lambda t1: g(t1, t2), debug=debug, stats=stats),
               universe, debug=debug)
