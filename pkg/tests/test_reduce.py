"""Iwasawa-zone reduction: ideal soundness, radial images, case drivers."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from huaops.liedata import make_glnr, make_spnr, make_upq
from huaops.matop import generator_matrix, trace_power
from huaops.params import ParamRing
from huaops.pbw import EnvElement, change_basis
from huaops.reduce import (
    AElement,
    ReductionSpec,
    gamma,
    gamma_ell,
    gl_lemma_check,
    hua_sp_system,
    reduce_iwasawa,
    upq_reduction_spec,
    upq_scalar_recursion,
    upq_shilov_identity,
    upq_theorem_case,
    zero_character,
)


def _random_element(basis, ring, rng, *, max_degree=2, max_terms=3):
    out = EnvElement.zero(basis, ring)
    for _ in range(rng.randint(1, max_terms)):
        word = [rng.randrange(len(basis)) for _ in range(rng.randint(0, max_degree))]
        term = EnvElement.scalar(basis, ring.const(Fraction(rng.randint(-3, 3), rng.randint(1, 2))))
        for g in word:
            term = term * EnvElement.generator(basis, ring, g)
        out = out + term
    return out


def _mat_trace_pairing(a, b):
    n = len(a)
    return sum(a[i][k] * b[k][i] for i in range(n) for k in range(n))


def _invert(rows):
    n = len(rows)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(rows)]
    for col in range(n):
        pivot = next(r for r in range(col, n) if aug[r][col] != 0)
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv = Fraction(1) / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                factor = aug[r][col]
                aug[r] = [x - factor * y for x, y in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def _casimir(form):
    """The trace-form Casimir sum_ab (G^-1)_ab X_a X_b over the Iwasawa basis.

    Built from scratch here (Gram matrix of tr(X_a X_b), exact inverse) as an
    oracle independent of the generator-matrix machinery; it is central, so
    its reduction must not see the line-bundle twist.
    """
    basis, ring = form.basis, form.ring
    mats = basis.matrices
    gram = [[_mat_trace_pairing(a, b) for b in mats] for a in mats]
    inv = _invert(gram)
    total = EnvElement.zero(basis, ring)
    gens = [EnvElement.generator(basis, ring, i) for i in range(len(basis))]
    for a in range(len(basis)):
        for b in range(len(basis)):
            if inv[a][b] != 0:
                total = total + (gens[a] * gens[b]).scale(inv[a][b])
    return total


# ---------------------------------------------------------------------------
# frozen radial images (checked against the quadratic eigenvalue form
# <lam, lam> - <rho, rho> in each normalization)
# ---------------------------------------------------------------------------


def test_gamma_of_gl2_quadratic_casimir():
    form = make_glnr(2)
    g = gamma(trace_power(generator_matrix(form.complex_algebra, form.ring), 2), form)
    names = g.names
    h1 = AElement.variable(form.ring, names, 0)
    h2 = AElement.variable(form.ring, names, 1)
    expected = h1 * h1 + h2 * h2 - AElement.scalar(form.ring, names, Fraction(1, 2))
    # rho = (1/2, -1/2): the constant is rho_1^2 + rho_2^2 = 1/2
    assert (g - expected).is_zero()


def test_gamma_ell_of_sp1_quadratic_casimir():
    form = make_spnr(1)
    g = gamma_ell(trace_power(generator_matrix(form.complex_algebra, form.ring), 2), form)
    names = g.names
    a1 = AElement.variable(form.ring, names, 0)
    expected = (a1 * a1 - AElement.scalar(form.ring, names, 1)) * Fraction(2)
    # rho = 1 for Sp(1,R); the ell-dependence cancels in the quadratic Casimir
    assert (g - expected).is_zero()


@pytest.mark.parametrize(
    "form",
    [make_glnr(2), make_upq(1, 1), make_upq(2, 1), make_upq(2, 2), make_spnr(1), make_spnr(2)],
    ids=lambda f: f.name + str(f.params),
)
def test_gamma_ell_at_zero_matches_gamma_on_casimir(form):
    d = _casimir(form)
    ell0 = {sym: 0 for sym in form.ring.symbols}
    left = gamma_ell(d, form, ell0 or None)
    right = gamma(d, form)
    assert (left - right).is_zero()


# ---------------------------------------------------------------------------
# ideal soundness and linearity of the reduction
# ---------------------------------------------------------------------------


def _soundness_spec(form):
    return ReductionSpec(form=form, k_assignment=form.k_assignment())


@pytest.mark.parametrize(
    "form", [make_upq(1, 1), make_upq(2, 1), make_spnr(1)], ids=lambda f: f.name + str(f.params)
)
def test_reduction_kills_the_defining_left_ideal(form):
    basis, ring = form.basis, form.ring
    spec = _soundness_spec(form)
    rng = random.Random(29)
    k_zone = list(basis.zone_indices("k"))
    n_zone = list(basis.zone_indices("n"))
    for _ in range(4):
        u = _random_element(basis, ring, rng)
        for idx in k_zone:
            x = EnvElement.generator(basis, ring, idx)
            chi = EnvElement.scalar(basis, form.k_character[basis.names[idx]])
            assert reduce_iwasawa(u * (x - chi), spec).is_zero()
        for idx in n_zone:
            y = EnvElement.generator(basis, ring, idx)
            assert reduce_iwasawa(y * u, spec).is_zero()


def test_reduction_is_linear():
    form = make_upq(1, 1)
    basis, ring = form.basis, form.ring
    spec = _soundness_spec(form)
    rng = random.Random(31)
    s = ring.var("s")
    for _ in range(5):
        u = _random_element(basis, ring, rng)
        v = _random_element(basis, ring, rng)
        assert (
            reduce_iwasawa(u + v, spec) - reduce_iwasawa(u, spec) - reduce_iwasawa(v, spec)
        ).is_zero()
        assert (reduce_iwasawa(u.scale(s), spec) - reduce_iwasawa(u, spec) * s).is_zero()


def test_reduction_fixes_a_zone_polynomials():
    form = make_upq(1, 1)
    basis, ring = form.basis, form.ring
    spec = _soundness_spec(form)
    i0 = basis.zone_indices("a")[0]
    h = EnvElement.generator(basis, ring, i0)
    res = reduce_iwasawa(h * h, spec)
    names = res.names
    var = AElement.variable(ring, names, list(basis.zone_indices("a")).index(i0))
    assert (res - var * var).is_zero()


def test_rho_shift_moves_a_generators():
    form = make_glnr(2)
    basis, ring = form.basis, form.ring
    spec = ReductionSpec(form=form, k_assignment=zero_character(form), rho_shift=True)
    for pos, idx in enumerate(basis.zone_indices("a")):
        h = EnvElement.generator(basis, ring, idx)
        res = reduce_iwasawa(h, spec)
        expected = AElement.variable(ring, res.names, pos) + AElement.scalar(
            ring, res.names, form.rho[pos]
        )
        assert (res - expected).is_zero()


def test_reduction_accepts_ambient_verma_elements():
    form = make_upq(1, 1)
    verma = form.complex_algebra.basis
    spec = _soundness_spec(form)
    rng = random.Random(37)
    u = _random_element(verma, form.ring, rng)
    direct = reduce_iwasawa(change_basis(u, form.basis), spec)
    implicit = reduce_iwasawa(u, spec)
    assert (implicit - direct).is_zero()


def test_upq_a_substitution_spec_is_total():
    form = make_upq(2, 1, symbols=("mu_1", "s", "t"))
    spec = upq_reduction_spec(form, (1,))
    assert spec.total_a()


# ---------------------------------------------------------------------------
# case drivers (small smoke instances; the full ladders run in acceptance)
# ---------------------------------------------------------------------------


def test_gl_lemma_driver_small():
    report = gl_lemma_check(2, 2)
    assert report["pass"], [c for c in report["checks"] if not c["pass"]]


def test_sp_hua_driver_small():
    report = hua_sp_system(1)
    assert report["pass"], [c for c in report["checks"] if not c["pass"]]


def test_upq_shilov_driver_small():
    report = upq_shilov_identity(1, 1)
    assert report["pass"], [c for c in report["checks"] if not c["pass"]]


def test_upq_theorem_driver_small():
    report = upq_theorem_case(1, 1, (1,))
    assert report["pass"], [c for c in report["checks"] if not c["pass"]]


def test_upq_theorem_perturbed_control_fails():
    report = upq_theorem_case(1, 1, (1,), perturb=True)
    assert not report["pass"]
    assert any(not c["pass"] for c in report["checks"])


def test_upq_recursion_driver_small():
    report = upq_scalar_recursion(1, 1, (1,), compare_kernel=True)
    assert report["pass"], [c for c in report["checks"] if not c["pass"]]
