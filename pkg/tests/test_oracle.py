import random

import pytest

from robustmc.formula import Always, Atom, Eventually, Not, Until, parse, to_text
from robustmc.kripke import KripkeStructure, random_structure
from robustmc.oracle import (
    BruteForce, Lasso, LassoBatch, ctl_sat, enumerate_lassos, eval_ctl,
    eval_ltl_lasso, eval_path, eval_state_bruteforce,
)
from robustmc.truth import FALSE, TRUE, negate
from formula_gen import random_ltl, random_rctl

p = Atom("p")


def word_lasso(prefix_bits, cycle_bits):
    """A lasso structure whose p-labels spell the given 0/1 word."""
    bits = list(prefix_bits) + list(cycle_bits)
    n = len(bits)
    edges = [(i, i + 1) for i in range(n - 1)] + [(n - 1, len(prefix_bits))]
    m = KripkeStructure([f"w{i}" for i in range(n)], [0], edges,
                        [{"p"} if b else set() for b in bits], ["p"])
    return m, Lasso(tuple(range(len(prefix_bits))), tuple(range(len(prefix_bits), n)))


@pytest.mark.parametrize("prefix,cycle,expected", [
    ([], [1], "1111"),
    ([0, 0, 0], [1], "0111"),
    ([], [0, 1], "0011"),
    ([1, 1], [0], "0001"),
    ([], [0], "0000"),
])
def test_canonical_word_classes(prefix, cycle, expected):
    m, lasso = word_lasso(prefix, cycle)
    assert str(eval_path(m, lasso, Always(p))) == expected


def test_eventually_on_words():
    m, lasso = word_lasso([], [0])
    assert eval_path(m, lasso, Eventually(p)) == FALSE
    m, lasso = word_lasso([0, 0, 0], [1])
    assert eval_path(m, lasso, Eventually(p)) == TRUE


def test_example_paths(example):
    assert str(eval_path(example, Lasso((0,), (1,)), Always(p))) == "1111"
    assert str(eval_path(example, Lasso((0,), (2,)), Always(p))) == "0001"


def test_enumerate_lassos(example):
    assert list(enumerate_lassos(example, 0, 2, 1)) == [Lasso((0,), (1,)), Lasso((0,), (2,))]
    loop = KripkeStructure(["s"], [0], [(0, 0)], [set()])
    assert list(enumerate_lassos(loop, 0, 3, 3)) == [Lasso((), (0,))]
    two = KripkeStructure(["a", "b"], [0], [(0, 1), (1, 0)], [set(), set()])
    assert list(enumerate_lassos(two, 0, 1, 1)) == []


def test_enumerated_lassos_are_valid_canonical_and_distinct():
    rng = random.Random(4)
    for seed in range(40):
        m = random_structure(rng.randint(1, 4), rng.random(), 1, seed)
        for simple in (True, False):
            ls = list(enumerate_lassos(m, 0, len(m), len(m), simple_cycles=simple))
            assert ls and len(set(ls)) == len(ls)
            for lasso in ls:
                assert lasso.is_valid(m) and lasso.states[0] == 0
                assert not lasso.prefix or lasso.prefix[-1] != lasso.cycle[-1]
                if simple:
                    assert len(set(lasso.cycle)) == len(lasso.cycle)


def test_bruteforce_examples(example):
    assert str(eval_state_bruteforce(example, "s0", parse("A G p"), 3)) == "0001"
    assert str(eval_state_bruteforce(example, "s0", parse("A G p -> A G q"), 3)) == "1111"
    for s, name in enumerate(example.names):
        assert (eval_state_bruteforce(example, s, p, 3) == TRUE) == ("p" in example.labels[s])


def test_ctl_examples(example):
    assert not eval_ctl(example, "s0", parse("A G p"))
    assert eval_ctl(example, "s0", parse("E G p"))
    assert eval_ctl(example, "s2", parse("true"))
    assert ctl_sat(example, parse("E (p U !p)")) == {0, 1, 2} - {1}
    assert ctl_sat(example, parse("A (p W !q)")) == {0, 1, 2}


def _word(m, lasso):
    return [m.labels[s] for s in lasso.prefix], [m.labels[s] for s in lasso.cycle]


def test_path_values_are_monotone_and_negation_is_pointwise():
    rng = random.Random(6)
    for seed in range(40):
        m = random_structure(rng.randint(1, 4), rng.random(), 2, seed)
        for _ in range(10):
            phi = random_ltl(rng, 7)
            for lasso in enumerate_lassos(m, 0, 3, 3, simple_cycles=False):
                v = eval_path(m, lasso, phi)
                assert list(v.bits) == sorted(v.bits)
                assert eval_path(m, lasso, Not(phi)) == negate(v)


def _dotless_first_bit(f):
    # implication-free path formulas: the first bit is the classical truth
    return "->" not in to_text(f)


def test_first_bit_is_the_classical_value():
    rng = random.Random(10)
    for seed in range(40):
        m = random_structure(rng.randint(1, 4), rng.random(), 2, seed)
        for _ in range(10):
            phi = random_ltl(rng, 7)
            if not _dotless_first_bit(phi):
                continue
            for lasso in enumerate_lassos(m, 0, 3, 3, simple_cycles=False):
                u, v = _word(m, lasso)
                assert eval_path(m, lasso, phi).bit(1) == int(eval_ltl_lasso(u, v, phi))


def test_until_first_bit_recursion():
    # bit 1 of U: max_j min(V1(psi at j), min_{i<j} V1(phi at i))
    rng = random.Random(2)
    for _ in range(200):
        u = [rng.random() < 0.5 for _ in range(rng.randint(0, 3))]
        v = [rng.random() < 0.5 for _ in range(rng.randint(1, 3))]
        w = [rng.random() < 0.5 for _ in range(len(u) + len(v))]
        labels = [({"p"} if a else set()) | ({"q"} if b else set()) for a, b in zip(u + v, w)]
        n = len(labels)
        m = KripkeStructure([str(i) for i in range(n)], [0],
                            [(i, i + 1) for i in range(n - 1)] + [(n - 1, len(u))], labels,
                            ["p", "q"])
        lasso = Lasso(tuple(range(len(u))), tuple(range(len(u), n)))
        pos = list(range(n)) + list(range(len(u), n)) * 2
        expected = any("q" in labels[pos[j]] and all("p" in labels[pos[i]] for i in range(j))
                       for j in range(len(pos)))
        assert eval_path(m, lasso, Until(Atom("p"), Atom("q"))).bit(1) == int(expected)


def test_ctl_agrees_with_first_bit_of_bruteforce():
    rng = random.Random(13)
    for seed in range(60):
        m = random_structure(rng.randint(1, 4), rng.random(), 2, seed)
        bf = BruteForce(m)
        f = random_rctl(rng, 8, implications=False)
        sat = ctl_sat(m, f)
        for s in range(len(m)):
            assert (bf.value(s, f) == TRUE) == (s in sat), to_text(f)


def test_classical_lasso_evaluator_examples():
    P, E = {"p"}, set()
    assert eval_ltl_lasso([E, E], [P], parse("E F p").arg)
    assert not eval_ltl_lasso([], [E, P], parse("E F G p").arg)
    assert eval_ltl_lasso([], [E, P], parse("E G F p").arg)
    batch = LassoBatch(("p",), 0, 2)
    assert batch.letters(0b10) == [frozenset(), frozenset({"p"})]


def test_bound_too_small():
    two = KripkeStructure(["a", "b"], [0], [(0, 1), (1, 0)], [set(), set()])
    with pytest.raises(ValueError):
        BruteForce(two, 1, 1).value(0, parse("A G p"))
