"""PBW kernel laws: normal ordering, filtration, and the naive dual oracle."""

from __future__ import annotations

import random
from fractions import Fraction

from huaops.liedata import make_algebra, make_upq
from huaops.params import ParamRing
from huaops.pbw import (
    EnvElement,
    change_basis,
    mat_commutator,
    mono_degree,
    naive_normal_order,
    word_mono,
)

RING = ParamRing()


def _random_element(basis, rng, *, max_degree=2, max_terms=3):
    out = EnvElement.zero(basis, RING)
    for _ in range(rng.randint(1, max_terms)):
        word = tuple(
            rng.randrange(len(basis)) for _ in range(rng.randint(0, max_degree))
        )
        coeff = Fraction(rng.randint(-3, 3), rng.randint(1, 3))
        term = EnvElement.scalar(basis, RING.const(coeff))
        for g in word:
            term = term * EnvElement.generator(basis, RING, g)
        out = out + term
    return out


def _symbol(elem):
    """Top-filtration part as a commutative exponent dictionary."""
    top = elem.degree()
    out = {}
    for mono, coeff in elem.terms.items():
        if mono_degree(mono) == top:
            out[mono] = coeff
    return out


def _symbol_product(sa, sb):
    out = {}
    for ma, ca in sa.items():
        for mb, cb in sb.items():
            exps = {}
            for g, e in ma:
                exps[g] = exps.get(g, 0) + e
            for g, e in mb:
                exps[g] = exps.get(g, 0) + e
            key = tuple(sorted(exps.items()))
            acc = out.get(key)
            out[key] = ca * cb if acc is None else acc + ca * cb
    return {k: v for k, v in out.items() if not v.is_zero()}


def test_associativity_on_random_triples():
    for kind, n, cases in (("gl", 2, 40), ("gl", 3, 25)):
        basis = make_algebra(kind, n).basis
        rng = random.Random(20260 + n)
        for _ in range(cases):
            a = _random_element(basis, rng)
            b = _random_element(basis, rng)
            c = _random_element(basis, rng)
            assert ((a * b) * c - a * (b * c)).is_zero()


def test_filtration_and_top_symbol():
    basis = make_algebra("gl", 3).basis
    rng = random.Random(7)
    for _ in range(30):
        a = _random_element(basis, rng)
        b = _random_element(basis, rng)
        ab = a * b
        if a.is_zero() or b.is_zero():
            assert ab.is_zero()
            continue
        assert ab.degree() <= a.degree() + b.degree()
        expected = _symbol_product(_symbol(a), _symbol(b))
        if expected:
            assert ab.degree() == a.degree() + b.degree()
            got = {
                tuple(sorted(dict(m).items())): c
                for m, c in _symbol(ab).items()
            }
            assert got == expected


def test_normal_order_fixes_ordered_words():
    basis = make_algebra("gl", 3).basis
    rng = random.Random(11)
    for _ in range(25):
        word = tuple(sorted(rng.randrange(len(basis)) for _ in range(4)))
        assert naive_normal_order(basis, word) == {word_mono(word): Fraction(1)}


def test_naive_rewriter_agrees_on_generator_pairs():
    basis = make_algebra("gl", 3).basis
    for i in range(len(basis)):
        for j in range(len(basis)):
            lhs = EnvElement.generator(basis, RING, i) * EnvElement.generator(
                basis, RING, j
            )
            rhs = naive_normal_order(basis, (i, j))
            assert {m: c.constant_value() for m, c in lhs.terms.items()} == rhs


def test_naive_rewriter_agrees_on_random_words():
    basis = make_algebra("gl", 3).basis
    rng = random.Random(101)
    for _ in range(20):
        word = tuple(rng.randrange(len(basis)) for _ in range(3))
        elem = EnvElement.scalar(basis, RING.one())
        for g in word:
            elem = elem * EnvElement.generator(basis, RING, g)
        oracle = naive_normal_order(basis, word)
        assert {m: c.constant_value() for m, c in elem.terms.items()} == oracle


def test_commutator_of_generators_matches_matrix_bracket():
    basis = make_algebra("gl", 2).basis
    for i in range(len(basis)):
        for j in range(len(basis)):
            lhs = EnvElement.generator(basis, RING, i).commutator(
                EnvElement.generator(basis, RING, j)
            )
            mat = mat_commutator(basis.matrices[i], basis.matrices[j])
            rhs = EnvElement.from_gl_matrix(basis, RING, mat)
            assert (lhs - rhs).is_zero()


def test_change_basis_round_trip():
    form = make_upq(2, 1)
    verma = form.complex_algebra.basis
    iwasawa = form.basis
    rng = random.Random(13)
    for _ in range(10):
        elem = _random_element(verma, rng)
        back = change_basis(change_basis(elem, iwasawa), verma)
        assert (back - elem).is_zero()


def test_change_basis_is_multiplicative():
    form = make_upq(1, 1)
    verma = form.complex_algebra.basis
    rng = random.Random(17)
    for _ in range(10):
        a = _random_element(verma, rng)
        b = _random_element(verma, rng)
        lhs = change_basis(a * b, form.basis)
        rhs = change_basis(a, form.basis) * change_basis(b, form.basis)
        assert (lhs - rhs).is_zero()


def test_json_round_trip():
    basis = make_algebra("gl", 2).basis
    ring = ParamRing(("s",))
    s = ring.var("s")
    elem = EnvElement.generator(basis, ring, 0) * EnvElement.generator(
        basis, ring, 3
    )
    elem = elem.scale(s) + EnvElement.scalar(basis, s * s - 2)
    data = elem.to_json_dict()
    back = EnvElement.from_json_dict(data, basis, ring)
    assert (back - elem).is_zero()


def test_power_matches_repeated_product():
    basis = make_algebra("gl", 2).basis
    rng = random.Random(19)
    a = _random_element(basis, rng)
    assert (a.power(3) - a * a * a).is_zero()
    assert a.power(0).is_scalar()
