"""Cross-module consistency: the enveloping-algebra machinery, the
oscillator realization, and the Weyl modules must tell one coherent story."""

import random

from oak.liealg import Weight, basis, x_
from oak.morphisms import f_basis
from oak.scalars import ScalarContext
from oak.uea import VermaVector, act_on_verma, engine, normal_order
from oak.weyl import LaurentVector, ShaleWeil, WeylElement, apply

CTX = ScalarContext(("s",))


def _act_letters(word_indices, vec, module, n):
    eng = engine(n, "g")
    out = vec
    for idx in reversed(word_indices):  # rightmost factor acts first
        out = apply(f_basis(CTX, n, eng.elements[idx]), out, module)
    return out


def test_shale_weil_top_is_highest():
    n = 2
    S = ShaleWeil(CTX, n)
    top = LaurentVector.monomial(S, (-1,) * n)
    for b in basis(n):
        if b.kind != "x" or sum(b.tag) <= 0:
            continue
        assert apply(f_basis(CTX, n, b), top, S).is_zero


def test_verma_surjects_onto_shale_weil():
    # the map v_lambda -> t^(-1,...,-1) at lambda = (-1/2,...,-1/2)
    # intertwines the Verma action with the realized Weyl action
    rng = random.Random(8)
    n = 2
    S = ShaleWeil(CTX, n)
    top = LaurentVector.monomial(S, (-1,) * n)
    lam = Weight(CTX, [CTX.rational(-1, 2)] * n)
    v = VermaVector.highest(CTX, n, lam)
    eng = engine(n, "g")
    elems = basis(n)
    for _ in range(30):
        word = [
            eng.index[elems[rng.randrange(len(elems))]]
            for _ in range(rng.randrange(1, 5))
        ]
        u = normal_order(CTX, [eng.elements[i] for i in word], n)
        moved = act_on_verma(u, v)
        lhs = LaurentVector(CTX, S.base, {})
        for mono, c in moved.terms.items():
            contrib = _act_letters(eng.word_of_monomial(mono), top, S, n)
            lhs = lhs + contrib.scale(c)
        rhs = _act_letters(word, top, S, n)
        assert lhs == rhs


def test_realized_action_matches_bracket_on_modules():
    # the module action respects the bracket: f([x,y]) acts as the commutator
    from oak.liealg import LieElement, bracket
    from oak.morphisms import f_map

    rng = random.Random(9)
    n = 2
    S = ShaleWeil(CTX, n)
    elems = basis(n)
    for _ in range(40):
        a = LieElement.from_basis(CTX, n, elems[rng.randrange(len(elems))])
        b = LieElement.from_basis(CTX, n, elems[rng.randrange(len(elems))])
        off = tuple(rng.randrange(-3, 0) for _ in range(n))
        vec = LaurentVector.monomial(S, off)
        fa, fb = f_map(a), f_map(b)
        got = apply(fa, apply(fb, vec, S), S) - apply(fb, apply(fa, vec, S), S)
        want = apply(f_map(bracket(a, b)), vec, S)
        assert got == want
