import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from robustmc.formula import (
    Always, And, Atom, Const, Eventually, Exists, Forall, FragmentError,
    FragmentTag, Implies, Next, Not, Or, ParseError, Until, WeakUntil,
    children, is_state_formula, maximal_state_subformulas, parse, size,
    subformulas, to_text,
)
from formula_gen import random_rctl

p, q, r = Atom("p"), Atom("q"), Atom("r")


def test_parse_examples():
    assert parse("A G p -> A G E X q", FragmentTag.RCTL) == Implies(
        Forall(Always(p)), Forall(Always(Exists(Next(q)))))
    assert parse("p", FragmentTag.RCTL) == p
    with pytest.raises(FragmentError):
        parse("A (G p -> G q)", FragmentTag.RCTL)


def test_unicode_syntax_matches_ascii():
    assert parse("∀□·¬p ⇒ ∀□·∃X· q") == parse("A G !p -> A G E X q")
    assert parse("∃(p U· q) ∨ ∀◇ r") == parse("E (p U q) | A F r")


def test_precedence():
    assert parse("p | q & r") == Or(p, And(q, r))
    assert parse("p -> q -> r") == Implies(p, Implies(q, r))
    assert parse("E (p U q U r)") == Exists(Until(p, Until(q, r)))
    assert parse("E (p & q U r)") == Exists(And(p, Until(q, r)))
    assert parse("E (G p W q)") == Exists(WeakUntil(Always(p), q))
    assert parse("true & false") == And(Const(True), Const(False))


def test_top_level_path_formula_is_universally_read():
    f = parse("(A F A G p) | (F p -> F q)")
    assert f == Forall(Or(Forall(Eventually(Forall(Always(p)))),
                          Implies(Eventually(p), Eventually(q))))
    with pytest.raises(FragmentError):
        parse("F p", FragmentTag.RCTL)


@pytest.mark.parametrize("text,where", [
    ("A G (p", (1, 7)), ("p &", (1, 4)), ("p q", (1, 3)), ("p\n  # q", (2, 3)),
])
def test_syntax_errors_carry_position(text, where):
    with pytest.raises(ParseError) as info:
        parse(text)
    assert (info.value.line, info.value.column) == where
    assert str(info.value).startswith(f"{where[0]}:{where[1]}:")


def test_rctl_fragment_violations():
    for text in ("A G G p", "E (F p & G q)", "A !G p", "E p"):
        with pytest.raises(FragmentError):
            parse(text, FragmentTag.RCTL)
        parse(text)  # fine as rCTL*


def test_rctl_formulas_are_rctlstar_formulas():
    rng = random.Random(5)
    for _ in range(200):
        f = random_rctl(rng, 12)
        assert parse(to_text(f), FragmentTag.RCTL) == f
        assert parse(to_text(f), FragmentTag.RCTLSTAR) == f


_atoms = st.sampled_from([p, q, r, Const(True), Const(False)])


def _extend(children_st):
    unary = st.sampled_from([Not, Next, Eventually, Always, Exists, Forall])
    binary = st.sampled_from([And, Or, Implies, Until, WeakUntil])
    return st.one_of(
        st.builds(lambda op, a: op(a), unary, children_st),
        st.builds(lambda op, a, b: op(a, b), binary, children_st, children_st),
    )


formulas = st.recursive(_atoms, _extend, max_leaves=12)


def _depth(f):
    return 1 + max((_depth(c) for c in children(f)), default=0)


@settings(max_examples=300, deadline=None)
@given(formulas)
def test_print_parse_round_trip(f):
    if _depth(f) > 6:
        return
    text = to_text(f)
    assert parse(text, FragmentTag.RCTLSTAR) == (f if is_state_formula(f) else Forall(f))


def test_subformula_examples():
    assert subformulas(Implies(p, q)) == [p, q, Implies(p, q)]
    assert subformulas(Forall(Always(p))) == [p, Forall(Always(p))]
    f = parse("A G p -> A G q")
    assert subformulas(f) == [p, q, Forall(Always(p)), Forall(Always(q)), f]


def test_subformulas_closed_and_ordered():
    rng = random.Random(11)
    for _ in range(200):
        f = random_rctl(rng, 12)
        subs = subformulas(f)
        assert subs[-1] == f
        assert len(set(subs)) == len(subs)
        seen = set()
        for g in subs:
            stack = list(children(g))
            while stack:
                h = stack.pop()
                if is_state_formula(h):
                    assert h in seen, (to_text(g), to_text(h))
                stack.extend(children(h))
            seen.add(g)


def test_maximal_state_subformulas():
    pairs, rewritten = maximal_state_subformulas(Always(Exists(Next(r))))
    assert [g for g, _ in pairs] == [Exists(Next(r))]
    assert rewritten == Always(Atom(pairs[0][1]))

    pairs, rewritten = maximal_state_subformulas(Always(p))
    assert pairs[0][0] == p and rewritten == Always(Atom(pairs[0][1]))

    phi = Implies(Always(p), Always(Forall(Eventually(q))))
    pairs, rewritten = maximal_state_subformulas(phi)
    (g0, a0), (g1, a1) = pairs
    assert (g0, g1) == (p, Forall(Eventually(q)))
    assert rewritten == Implies(Always(Atom(a0)), Always(Atom(a1)))
    assert a0 != a1
    # fresh atoms are themselves state formulas, so substituting again is the identity
    pairs2, again = maximal_state_subformulas(rewritten)
    assert [g for g, _ in pairs2] == [Atom(a0), Atom(a1)]


def test_fresh_names_deterministic():
    a = maximal_state_subformulas(Always(Exists(Next(r))))[0][0][1]
    b = maximal_state_subformulas(Eventually(Exists(Next(r))))[0][0][1]
    assert a == b and a.startswith("@")


def test_size():
    assert size(parse("A G p -> A G q")) == 7
