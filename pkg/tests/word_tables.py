"""Automaton membership for every lasso word of a given shape, in bulk.

Words u.v^omega over ``atoms`` are indexed as in :class:`LassoBatch`: letter
``a`` (an int whose bit ``j`` is atom ``j``) at position ``i`` contributes
``a << (i * len(atoms))``.  The prefix index is the low part of the word
index and the cycle index the high part.
"""
import numpy as np

from robustmc.buchi import product_nonempty
from robustmc.kripke import KripkeStructure


def _letter(a, atoms):
    return frozenset(x for j, x in enumerate(atoms) if a >> j & 1)


def cycle_good(aut, atoms, c):
    """``G[v, q]``: the automaton in ``q`` accepts v^omega (reading v[0] first)."""
    na = len(atoms)
    nletters = 1 << na
    nv = nletters ** c
    names, edges, labels = [], [], []
    for v in range(nv):
        for r in range(c):
            names.append(f"{v}.{r}")
            labels.append(_letter(v >> (r * na) & (nletters - 1), atoms))
            edges.append((v * c + r, v * c + (r + 1) % c))
    m = KripkeStructure(names, [0], edges, labels, list(atoms))
    good = product_nonempty(m, aut)
    return good.reshape(nv, c, len(aut))[:, 0, :]


def prefix_runs(aut, atoms, p):
    """``P[u, q]``: some run on prefix u ends ready to read the next letter in ``q``."""
    na = len(atoms)
    nletters = 1 << na
    nq = len(aut)
    admit = np.array([[aut.admits(q, _letter(a, atoms)) for q in range(nq)]
                      for a in range(nletters)], dtype=bool)
    step = np.zeros((nq, nq), dtype=np.int64)
    for q in range(nq):
        step[q, list(aut.succ[q])] = 1
    runs = np.zeros((1, nq), dtype=bool)
    runs[0, list(aut.initial)] = True
    for i in range(p):
        nxt = np.zeros((len(runs) * nletters, nq), dtype=bool)
        for a in range(nletters):
            idx = np.arange(len(runs)) + (a << (i * na))
            nxt[idx] = ((runs & admit[a]).astype(np.int64) @ step) > 0
        runs = nxt
    return runs


def membership_table(aut, atoms, p, c, good=None):
    """Boolean ``T[u, v]`` for all prefixes of length ``p`` and cycles of length ``c``."""
    g = cycle_good(aut, atoms, c) if good is None else good
    runs = prefix_runs(aut, atoms, p)
    return (runs.astype(np.int64) @ g.T.astype(np.int64)) > 0


def mask_to_array(mask, count):
    raw = mask.to_bytes((count + 7) // 8, "little")
    return np.unpackbits(np.frombuffer(raw, dtype=np.uint8), bitorder="little")[:count].astype(bool)
