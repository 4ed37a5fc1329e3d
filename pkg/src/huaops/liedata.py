"""Catalog of classical matrix Lie algebras, real forms, and degree tables.

Everything here is presented *complexified inside gl_N*: a classical algebra
or a real form is stored as an :class:`~huaops.pbw.OrderedBasis` of N x N
rational matrices, tagged with zones that fix the PBW order used by the
reduction engines.

Conventions
-----------
* Matrix indices are 1-based throughout (matching :func:`huaops.pbw.make_matrix`).
* "Verma order" means zones ``("nbar", "a", "n")`` where ``nbar`` is the
  strictly upper triangular part of the algebra, ``a`` the diagonal part and
  ``n`` the strictly lower part.  Monomials carry nbar-factors leftmost and
  n-factors rightmost; a highest-weight reduction drops trailing n-factors.
* "Iwasawa order" means zones ``("n", "a", "k")``: reductions drop monomials
  with a leading n-factor and peel trailing k-factors against a character.
* ``ibar`` abbreviates the reflected index ``N + 1 - i``.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple

from .params import ParamPoly, ParamRing
from .pbw import (
    EnvElement,
    Matrix,
    OrderedBasis,
    make_matrix,
    mat_add,
    mat_commutator,
    mat_scale,
    mat_transpose,
    is_zero_matrix,
)

ALGEBRA_KINDS = ("gl", "o-odd", "o-even", "sp")

ZERO = Fraction(0)
ONE = Fraction(1)


# ---------------------------------------------------------------------------
# elementary matrices and involutions
# ---------------------------------------------------------------------------

def elementary(n: int, i: int, j: int) -> Matrix:
    """The elementary matrix E_{ij} inside gl_n (1-based)."""
    return make_matrix(n, {(i, j): 1})


def antidiagonal_identity(n: int) -> Matrix:
    """The antidiagonal permutation matrix (ones at (i, n+1-i))."""
    return make_matrix(n, {(i, n + 1 - i): 1 for i in range(1, n + 1)})


def symplectic_structure(n: int) -> Matrix:
    """The antidiagonal symplectic form on gl_{2n}.

    Entries sit at (a, 2n+1-a): +1 for a <= n and -1 for a > n, i.e. the
    block-antidiagonal matrix ((0, I~), (-I~, 0)) with I~ the antidiagonal
    identity of size n.  Its square is -1.
    """
    big = 2 * n
    entries = {}
    for a in range(1, big + 1):
        entries[(a, big + 1 - a)] = 1 if a <= n else -1
    return make_matrix(big, entries)


def orthogonal_involution(ambient: int) -> Callable[[Matrix], Matrix]:
    """sigma(X) = -I~ X^t I~ with I~ the antidiagonal identity."""
    itilde = antidiagonal_identity(ambient)

    def sigma(x: Matrix) -> Matrix:
        return mat_scale(_mat_mul(_mat_mul(itilde, mat_transpose(x)), itilde), -1)

    return sigma


def symplectic_involution(rank: int) -> Callable[[Matrix], Matrix]:
    """sigma(X) = J~ X^t J~ with J~ the antidiagonal symplectic form.

    Because J~^2 = -1 this equals -J~^{-1} X^t J~; on elementary matrices
    sigma(E_{ij}) = eps_i eps_{jbar} E_{jbar, ibar} with eps_a = +1 for
    a <= rank and -1 otherwise.
    """
    jtilde = symplectic_structure(rank)

    def sigma(x: Matrix) -> Matrix:
        return _mat_mul(_mat_mul(jtilde, mat_transpose(x)), jtilde)

    return sigma


def _mat_mul(a: Matrix, b: Matrix) -> Matrix:
    n = len(a)
    return tuple(
        tuple(sum((a[i][k] * b[k][j] for k in range(n)), ZERO) for j in range(n))
        for i in range(n)
    )


# ---------------------------------------------------------------------------
# classical algebras with Verma-ordered bases
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AlgebraData:
    """A classical complex Lie algebra realized as matrices in gl_N.

    ``basis`` is Verma-ordered with zones ("nbar", "a", "n"); its a-zone
    generators are F_11 .. F_nn (E_11 .. E_NN for gl).  ``a_diagonal`` maps
    each a-zone position to the diagonal index i of its generator F_ii.
    """

    kind: str
    rank: int
    ambient: int
    basis: OrderedBasis
    sigma: Optional[Callable[[Matrix], Matrix]] = field(compare=False)
    a_diagonal: Tuple[int, ...]

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def f_matrix(self, i: int, j: int) -> Matrix:
        """The operator-matrix entry F_{ij} (possibly zero or dependent)."""
        e = elementary(self.ambient, i, j)
        if self.sigma is None:
            return e
        return mat_add(e, self.sigma(e))

    def f_entry(self, i: int, j: int, ring: ParamRing) -> EnvElement:
        """F_{ij} as a degree <= 1 element of the enveloping algebra."""
        return EnvElement.from_gl_matrix(self.basis, ring, self.f_matrix(i, j))

    def weight_map(self, values: Sequence[ParamPoly]) -> Dict[int, ParamPoly]:
        """Map a-zone generator index -> value, from per-diagonal values.

        ``values[i-1]`` is the weight of F_ii for i = 1..rank (i = 1..N for gl).
        """
        if len(values) != len(self.a_diagonal):
            raise ValueError(
                f"expected {len(self.a_diagonal)} weight values, got {len(values)}"
            )
        out: Dict[int, ParamPoly] = {}
        for pos, diag in zip(self.basis.zone_indices("a"), self.a_diagonal):
            out[pos] = values[diag - 1]
        return out


def _ambient_size(kind: str, n: int) -> int:
    if kind == "gl":
        return n
    if kind == "o-odd":
        return 2 * n + 1
    if kind in ("o-even", "sp"):
        return 2 * n
    raise ValueError(f"unknown algebra kind {kind!r}; expected one of {ALGEBRA_KINDS}")


def _expected_dimension(kind: str, n: int) -> int:
    if kind == "gl":
        return n * n
    if kind == "o-odd":
        return n * (2 * n + 1)
    if kind == "o-even":
        return n * (2 * n - 1)
    return n * (2 * n + 1)  # sp


@lru_cache(maxsize=None)
def make_algebra(kind: str, n: int) -> AlgebraData:
    """Build the catalog algebra of the given kind and rank.

    gl: all E_{ij}.  o/sp: the sigma-fixed combinations F_{ij} = E_{ij} +
    sigma(E_{ij}), scanning the upper triangle, the diagonal, then the lower
    triangle and keeping one representative per dependent pair.
    """
    if n < 1:
        raise ValueError("rank must be >= 1")
    ambient = _ambient_size(kind, n)
    if kind == "gl":
        sigma = None
    elif kind in ("o-odd", "o-even"):
        sigma = orthogonal_involution(ambient)
    else:
        sigma = symplectic_involution(n)

    gens: List[Tuple[str, str, Matrix]] = []
    a_diagonal: List[int] = []
    probe = _SpanProbe(ambient)
    letter = "E" if kind == "gl" else "F"

    def consider(zone: str, i: int, j: int) -> None:
        e = elementary(ambient, i, j)
        mat = e if sigma is None else mat_add(e, sigma(e))
        if is_zero_matrix(mat) or not probe.add(mat):
            return
        gens.append((f"{letter}_{i}_{j}", zone, mat))
        if zone == "a":
            a_diagonal.append(i)

    for i in range(1, ambient + 1):
        for j in range(i + 1, ambient + 1):
            consider("nbar", i, j)
    for i in range(1, ambient + 1):
        consider("a", i, i)
    for i in range(1, ambient + 1):
        for j in range(1, i):
            consider("n", i, j)

    basis = OrderedBasis(
        basis_id=f"{kind}{n}-verma", ambient=ambient, generators=gens,
        zones=("nbar", "a", "n"),
    )
    if len(basis) != _expected_dimension(kind, n):
        raise AssertionError(
            f"{kind}_{n}: got dimension {len(basis)}, "
            f"expected {_expected_dimension(kind, n)}"
        )
    _check_triangular_zones(basis)
    return AlgebraData(
        kind=kind, rank=n, ambient=ambient, basis=basis, sigma=sigma,
        a_diagonal=tuple(a_diagonal),
    )


class _SpanProbe:
    """Incremental rational span membership for ambient x ambient matrices."""

    def __init__(self, ambient: int):
        from .pbw import RationalSpan

        self._span = RationalSpan(ambient * ambient)

    def add(self, mat: Matrix) -> bool:
        return self._span.add([x for row in mat for x in row])


def _check_triangular_zones(basis: OrderedBasis) -> None:
    """Verify the triangular bracket relations of a Verma-ordered basis."""
    _assert_brackets_in(basis, "a", "a", ())
    _assert_brackets_in(basis, "nbar", "nbar", ("nbar",))
    _assert_brackets_in(basis, "n", "n", ("n",))
    _assert_brackets_in(basis, "a", "nbar", ("nbar",))
    _assert_brackets_in(basis, "a", "n", ("n",))


def _assert_brackets_in(
    basis: OrderedBasis, zx: str, zy: str, allowed_zones: Tuple[str, ...]
) -> None:
    allowed = set()
    for z in allowed_zones:
        allowed.update(basis.zone_indices(z))
    for i in basis.zone_indices(zx):
        for j in basis.zone_indices(zy):
            for k, _c in basis.bracket(i, j):
                if k not in allowed:
                    raise AssertionError(
                        f"[{basis.names[i]}, {basis.names[j]}] has a component on "
                        f"{basis.names[k]}, outside zones {allowed_zones}"
                    )


# ---------------------------------------------------------------------------
# restricted root systems
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RestrictedRoot:
    coords: Tuple[Fraction, ...]
    multiplicity: int

    def squared_length(self) -> Fraction:
        return sum((c * c for c in self.coords), ZERO)


class RestrictedRootSystem:
    """Positive restricted roots with multiplicities, in the e_i basis."""

    def __init__(
        self,
        label: str,
        rank: int,
        positive: Sequence[Tuple[Sequence[object], int]],
        simple: Sequence[Sequence[object]],
    ):
        self.label = label
        self.rank = rank
        self.positive: Tuple[RestrictedRoot, ...] = tuple(
            RestrictedRoot(tuple(Fraction(c) for c in coords), int(mult))
            for coords, mult in positive
        )
        if any(r.multiplicity <= 0 for r in self.positive):
            raise ValueError("multiplicities must be positive")
        if len({r.coords for r in self.positive}) != len(self.positive):
            raise ValueError("duplicate positive roots")
        self.simple: Tuple[Tuple[Fraction, ...], ...] = tuple(
            tuple(Fraction(c) for c in coords) for coords in simple
        )
        known = {r.coords for r in self.positive}
        for s in self.simple:
            if s not in known:
                raise ValueError(f"simple root {s} is not a positive root")
        self._mult: Dict[Tuple[Fraction, ...], int] = {
            r.coords: r.multiplicity for r in self.positive
        }

    def multiplicity(self, coords: Sequence[object]) -> int:
        """m_alpha, or 0 when alpha is not a restricted root."""
        key = tuple(Fraction(c) for c in coords)
        return self._mult.get(key, 0)

    def half_multiplicity(self, root: RestrictedRoot) -> int:
        return self.multiplicity([c / 2 for c in root.coords])

    def double_multiplicity(self, root: RestrictedRoot) -> int:
        return self.multiplicity([2 * c for c in root.coords])

    def indivisible_positive(self) -> Tuple[RestrictedRoot, ...]:
        """The subset of positive roots alpha with alpha/2 not a root."""
        return tuple(r for r in self.positive if self.half_multiplicity(r) == 0)

    def length_classes(self) -> List[List[RestrictedRoot]]:
        """Positive roots grouped by |alpha|, longest class first."""
        by_len: Dict[Fraction, List[RestrictedRoot]] = {}
        for r in self.positive:
            by_len.setdefault(r.squared_length(), []).append(r)
        return [by_len[k] for k in sorted(by_len, reverse=True)]

    def lambda_alpha(self, lam: Sequence[object], root: RestrictedRoot) -> Fraction:
        """2 <lam, alpha> / <alpha, alpha> with <e_i, e_j> = delta_ij."""
        lam_f = [Fraction(c) for c in lam]
        if len(lam_f) != self.rank:
            raise ValueError(f"lambda must have {self.rank} coordinates")
        num = sum((a * b for a, b in zip(lam_f, root.coords)), ZERO)
        return 2 * num / root.squared_length()

    def half_sum(self) -> Tuple[Fraction, ...]:
        """rho = (1/2) sum of m_alpha * alpha over positive roots."""
        acc = [ZERO] * self.rank
        for r in self.positive:
            for idx, c in enumerate(r.coords):
                acc[idx] += Fraction(r.multiplicity) * c
        return tuple(c / 2 for c in acc)


def _coords(rank: int, **entries: int) -> Tuple[int, ...]:
    out = [0] * rank
    for key, value in entries.items():
        out[int(key[1:]) - 1] = value
    return tuple(out)


def upq_root_system(p: int, q: int) -> RestrictedRootSystem:
    """Restricted roots of U(p, q): type BC_q (C_q when p = q)."""
    positive: List[Tuple[Tuple[int, ...], int]] = []
    for i in range(1, q + 1):
        for j in range(i + 1, q + 1):
            positive.append((_coords(q, **{f"i{i}": 1, f"i{j}": -1}), 2))
            positive.append((_coords(q, **{f"i{i}": 1, f"i{j}": 1}), 2))
    for i in range(1, q + 1):
        positive.append((_coords(q, **{f"i{i}": 2}), 1))
    if p > q:
        for i in range(1, q + 1):
            positive.append((_coords(q, **{f"i{i}": 1}), 2 * (p - q)))
    simple = [
        _coords(q, **{f"i{i}": 1, f"i{i+1}": -1}) for i in range(1, q)
    ]
    if p > q:
        simple.append(_coords(q, **{f"i{q}": 1}))
        label = f"BC_{q}^{{{2*(p-q)},2,1}}"
    else:
        simple.append(_coords(q, **{f"i{q}": 2}))
        label = f"C_{q}^{{2,1}}"
    return RestrictedRootSystem(label, q, positive, simple)


def spnr_root_system(n: int) -> RestrictedRootSystem:
    """Restricted roots of Sp(n, R): type C_n, all multiplicities 1."""
    positive: List[Tuple[Tuple[int, ...], int]] = []
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            positive.append((_coords(n, **{f"i{i}": 1, f"i{j}": -1}), 1))
            positive.append((_coords(n, **{f"i{i}": 1, f"i{j}": 1}), 1))
    for i in range(1, n + 1):
        positive.append((_coords(n, **{f"i{i}": 2}), 1))
    simple = [_coords(n, **{f"i{i}": 1, f"i{i+1}": -1}) for i in range(1, n)]
    simple.append(_coords(n, **{f"i{n}": 2}))
    return RestrictedRootSystem(f"C_{n}^{{1,1}}", n, positive, simple)


def glnr_root_system(n: int) -> RestrictedRootSystem:
    """Restricted roots of GL(n, R): type A_{n-1}, multiplicity 1."""
    positive: List[Tuple[Tuple[int, ...], int]] = []
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            positive.append((_coords(n, **{f"i{i}": 1, f"i{j}": -1}), 1))
    simple = [_coords(n, **{f"i{i}": 1, f"i{i+1}": -1}) for i in range(1, n)]
    return RestrictedRootSystem(f"A_{n-1}^{{1}}", n, positive, simple)


# ---------------------------------------------------------------------------
# real forms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RealFormData:
    """One of the catalog real forms, complexified inside gl_N.

    ``basis`` is the Iwasawa-ordered basis (zones n | a | k); ``a_names``
    lists the a-zone generator names so that ``a_names[i-1]`` carries the
    restricted coordinate e_i.  ``k_character`` is the scalar character
    template on the k-zone generators (tau_{s,t}, chi_ell, or zero), as a
    name -> ParamPoly map over ``ring``.

    For Sp(n, R) an additional ``hua_basis`` (zones p | q | k, character
    ``hua_character``) carries the block-form computations; it spans the
    block realization of sp_n, which is *not* the same subspace of gl_{2n}
    as ``complex_algebra``'s antidiagonal realization.
    """

    name: str
    params: Tuple[int, ...]
    ambient: int
    rank: int
    ring: ParamRing = field(compare=False)
    complex_algebra: AlgebraData = field(compare=False)
    basis: OrderedBasis = field(compare=False)
    a_names: Tuple[str, ...]
    k_character: Mapping[str, ParamPoly] = field(compare=False)
    n_weights: Mapping[str, Tuple[int, ...]] = field(compare=False)
    root_system: RestrictedRootSystem = field(compare=False)
    rho: Tuple[Fraction, ...]
    hua_basis: Optional[OrderedBasis] = field(compare=False, default=None)
    hua_character: Optional[Mapping[str, ParamPoly]] = field(compare=False, default=None)

    def a_index(self, i: int) -> int:
        """Basis index of the i-th a-zone generator (1-based coordinate)."""
        return self.basis.index_of(self.a_names[i - 1])

    def k_assignment(self, character: Optional[Mapping[str, ParamPoly]] = None,
                     *, negate: bool = False,
                     basis: Optional[OrderedBasis] = None) -> Dict[int, ParamPoly]:
        """Character as a basis-index map, optionally negated (for gamma_ell)."""
        char = self.k_character if character is None else character
        b = self.basis if basis is None else basis
        out: Dict[int, ParamPoly] = {}
        for name, value in char.items():
            out[b.index_of(name)] = -value if negate else value
        return out


def _check_iwasawa_zones(basis: OrderedBasis) -> None:
    _assert_brackets_in(basis, "a", "a", ())
    _assert_brackets_in(basis, "n", "n", ("n",))
    _assert_brackets_in(basis, "a", "n", ("n",))
    _assert_brackets_in(basis, "k", "k", ("k",))


def _check_restricted_weights(
    basis: OrderedBasis,
    a_names: Sequence[str],
    n_weights: Mapping[str, Tuple[int, ...]],
) -> None:
    """[A_m, Y] = w_m Y for every n-zone generator and every a-generator."""
    a_idx = [basis.index_of(name) for name in a_names]
    for name, weight in n_weights.items():
        y = basis.matrices[basis.index_of(name)]
        for m, idx in enumerate(a_idx):
            comm = mat_commutator(basis.matrices[idx], y)
            if comm != mat_scale(y, weight[m]):
                raise AssertionError(
                    f"{name} is not an ad-a eigenvector of weight {weight}"
                )


def _check_root_multiplicities(
    roots: RestrictedRootSystem, n_weights: Mapping[str, Tuple[int, ...]]
) -> None:
    counts: Dict[Tuple[Fraction, ...], int] = {}
    for weight in n_weights.values():
        key = tuple(Fraction(c) for c in weight)
        counts[key] = counts.get(key, 0) + 1
    expected = {r.coords: r.multiplicity for r in roots.positive}
    if counts != expected:
        raise AssertionError(
            f"restricted-root multiplicities disagree: basis {counts}, "
            f"root system {expected}"
        )


def _check_k_character(
    basis: OrderedBasis, character: Mapping[str, ParamPoly]
) -> None:
    """A scalar character must vanish on [k, k]."""
    k_zone = basis.zone_indices("k")
    for name in character:
        if basis.index_of(name) not in k_zone:
            raise ValueError(f"character key {name} is not a k-zone generator")
    for i in k_zone:
        for j in k_zone:
            if i >= j:
                continue
            total = None
            for k, c in basis.bracket(i, j):
                term = character[basis.names[k]] * c
                total = term if total is None else total + term
            if total is not None and not total.is_zero():
                raise AssertionError(
                    f"character does not vanish on [{basis.names[i]}, "
                    f"{basis.names[j]}]"
                )


def _finish_realform(form: RealFormData) -> RealFormData:
    _check_iwasawa_zones(form.basis)
    _check_restricted_weights(form.basis, form.a_names, form.n_weights)
    _check_root_multiplicities(form.root_system, form.n_weights)
    _check_k_character(form.basis, form.k_character)
    if form.rho != form.root_system.half_sum():
        raise AssertionError(
            f"{form.name}: rho {form.rho} != root half-sum "
            f"{form.root_system.half_sum()}"
        )
    if form.hua_basis is not None and form.hua_character is not None:
        _check_k_character(form.hua_basis, form.hua_character)
    return form


# -- U(p, q) -----------------------------------------------------------------

@lru_cache(maxsize=None)
def make_upq(p: int, q: int, symbols: Tuple[str, ...] = ("s", "t")) -> RealFormData:
    """The real form U(p, q), complexified to gl_{p+q}.

    Index convention: 1..p is the first block, and for i = 1..q the reflected
    index ibar = p+q+1-i lies in the second block.  The k-character is the
    template tau_{s,t}: E_{mu,nu} -> s delta, E_{ibar,jbar} -> t delta.
    """
    if not (1 <= q <= p):
        raise ValueError("U(p,q) requires 1 <= q <= p")
    if "s" not in symbols or "t" not in symbols:
        raise ValueError("U(p,q) parameter ring must contain 's' and 't'")
    ring = ParamRing(symbols)
    big = p + q

    def bar(i: int) -> int:
        return big + 1 - i

    def e(i: int, j: int) -> Matrix:
        return elementary(big, i, j)

    gens: List[Tuple[str, str, Matrix]] = []
    n_weights: Dict[str, Tuple[int, ...]] = {}

    def add_n(name: str, mat: Matrix, **weight: int) -> None:
        gens.append((name, "n", mat))
        n_weights[name] = _coords(q, **weight)

    # n-zone: restricted-root vectors, grouped by root for readability.
    for i in range(1, q + 1):
        y = mat_add(
            mat_add(mat_scale(e(i, i), -1), e(i, bar(i))),
            mat_add(mat_scale(e(bar(i), i), -1), e(bar(i), bar(i))),
        )
        add_n(f"Y_{i}", y, **{f"i{i}": 2})
    for i in range(1, q + 1):
        for k in range(q + 1, p + 1):
            add_n(f"Y_{i}_{k}", mat_add(e(i, k), e(bar(i), k)), **{f"i{i}": 1})
            add_n(
                f"Y_{k}_{i}",
                mat_add(e(k, i), mat_scale(e(k, bar(i)), -1)),
                **{f"i{i}": 1},
            )
    for i in range(1, q + 1):
        for j in range(1, q + 1):
            if i == j:
                continue
            mat = mat_add(
                mat_add(e(i, j), e(bar(i), j)),
                mat_scale(mat_add(e(i, bar(j)), e(bar(i), bar(j))), -1),
            )
            add_n(f"Yplus_{i}_{j}", mat, **{f"i{i}": 1, f"i{j}": 1})
    for i in range(1, q + 1):
        for j in range(i + 1, q + 1):
            one = mat_add(
                mat_add(e(i, j), e(bar(i), j)),
                mat_add(e(i, bar(j)), e(bar(i), bar(j))),
            )
            add_n(f"Yone_{i}_{j}", one, **{f"i{i}": 1, f"i{j}": -1})
            two = mat_add(
                mat_add(e(j, i), mat_scale(e(bar(j), i), -1)),
                mat_add(mat_scale(e(j, bar(i)), -1), e(bar(j), bar(i))),
            )
            add_n(f"Ytwo_{i}_{j}", two, **{f"i{i}": 1, f"i{j}": -1})

    # a-zone: E_i = E_{i,ibar} + E_{ibar,i}.
    a_names = tuple(f"E_{i}" for i in range(1, q + 1))
    for i in range(1, q + 1):
        gens.append((f"E_{i}", "a", mat_add(e(i, bar(i)), e(bar(i), i))))

    # k-zone: E_{mu,nu} (mu, nu <= p) and E_{ibar,jbar} (i, j <= q).
    k_character: Dict[str, ParamPoly] = {}
    s_val, t_val = ring.var("s"), ring.var("t")
    zero = ring.zero()
    for mu in range(1, p + 1):
        for nu in range(1, p + 1):
            name = f"E_{mu}_{nu}"
            gens.append((name, "k", e(mu, nu)))
            k_character[name] = s_val if mu == nu else zero
    for i in range(1, q + 1):
        for j in range(1, q + 1):
            name = f"E_{bar(i)}_{bar(j)}"
            gens.append((name, "k", e(bar(i), bar(j))))
            k_character[name] = t_val if i == j else zero

    basis = OrderedBasis(
        basis_id=f"upq{p}{q}-iwasawa", ambient=big, generators=gens,
        zones=("n", "a", "k"),
    )
    if len(basis) != big * big:
        raise AssertionError("U(p,q) Iwasawa basis does not span gl_{p+q}")

    rho = tuple(Fraction(p + q + 1 - 2 * i) for i in range(1, q + 1))
    form = RealFormData(
        name="upq",
        params=(p, q),
        ambient=big,
        rank=q,
        ring=ring,
        complex_algebra=make_algebra("gl", big),
        basis=basis,
        a_names=a_names,
        k_character=k_character,
        n_weights=n_weights,
        root_system=upq_root_system(p, q),
        rho=rho,
    )
    return _finish_realform(form)


def upq_bar(form: RealFormData, i: int) -> int:
    """The reflected index ibar = p+q+1-i for a U(p,q) form."""
    if form.name != "upq":
        raise ValueError("upq_bar applies to U(p,q) forms only")
    return form.ambient + 1 - i


# -- Sp(n, R) ----------------------------------------------------------------

def spnr_kpq_matrices(n: int):
    """The block generators of sp_n in the symmetric-pair form.

    2K_ij = E_ij - E_{j+n,i+n}; 2P_ij = E_{i,j+n} + E_{j,i+n};
    2Q_ij = E_{i+n,j} + E_{j+n,i}.  P and Q are symmetric in (i, j).
    Returns (K, P, Q) as dicts keyed by (i, j), 1-based.
    """
    big = 2 * n
    half = Fraction(1, 2)

    def e(i: int, j: int) -> Matrix:
        return elementary(big, i, j)

    k_mat: Dict[Tuple[int, int], Matrix] = {}
    p_mat: Dict[Tuple[int, int], Matrix] = {}
    q_mat: Dict[Tuple[int, int], Matrix] = {}
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            k_mat[(i, j)] = mat_scale(
                mat_add(e(i, j), mat_scale(e(j + n, i + n), -1)), half
            )
            p_mat[(i, j)] = mat_scale(mat_add(e(i, j + n), e(j, i + n)), half)
            q_mat[(i, j)] = mat_scale(mat_add(e(i + n, j), e(j + n, i)), half)
    return k_mat, p_mat, q_mat


@lru_cache(maxsize=None)
def make_spnr(n: int, symbols: Tuple[str, ...] = ("ell",)) -> RealFormData:
    """The real form Sp(n, R) in the block realization inside gl_{2n}.

    The Iwasawa basis (zones n | a | k) uses the real-split picture:
    n-zone root vectors X_{e_i-e_j} = K_ij - K_ji + P_ij + Q_ij,
    X_{e_i+e_j} = K_ij + K_ji - P_ij + Q_ij (i < j), X_{2e_i} = 2K_ii - P_ii
    + Q_ii; a-zone A_i = P_ii + Q_ii; k-zone K_ij - K_ji (i < j) and
    P_ij - Q_ij (i <= j), with character chi_ell: P_ii - Q_ii -> ell.

    ``hua_basis`` (zones p | q | k) keeps P_{i<=j}, Q_{i<=j}, all K_ij, with
    the Levi character K_ij -> ell * delta_ij used by the block-matrix chains.
    """
    if n < 1:
        raise ValueError("Sp(n,R) requires n >= 1")
    if "ell" not in symbols:
        raise ValueError("Sp(n,R) parameter ring must contain 'ell'")
    ring = ParamRing(symbols)
    big = 2 * n
    k_mat, p_mat, q_mat = spnr_kpq_matrices(n)

    gens: List[Tuple[str, str, Matrix]] = []
    n_weights: Dict[str, Tuple[int, ...]] = {}

    def add_n(name: str, mat: Matrix, **weight: int) -> None:
        gens.append((name, "n", mat))
        n_weights[name] = _coords(n, **weight)

    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            minus = mat_add(
                mat_add(k_mat[(i, j)], mat_scale(k_mat[(j, i)], -1)),
                mat_add(p_mat[(i, j)], q_mat[(i, j)]),
            )
            add_n(f"Xm_{i}_{j}", minus, **{f"i{i}": 1, f"i{j}": -1})
            plus = mat_add(
                mat_add(k_mat[(i, j)], k_mat[(j, i)]),
                mat_add(mat_scale(p_mat[(i, j)], -1), q_mat[(i, j)]),
            )
            add_n(f"Xp_{i}_{j}", plus, **{f"i{i}": 1, f"i{j}": 1})
    for i in range(1, n + 1):
        two = mat_add(
            mat_scale(k_mat[(i, i)], 2),
            mat_add(mat_scale(p_mat[(i, i)], -1), q_mat[(i, i)]),
        )
        add_n(f"X2_{i}", two, **{f"i{i}": 2})

    a_names = tuple(f"A_{i}" for i in range(1, n + 1))
    for i in range(1, n + 1):
        gens.append((f"A_{i}", "a", mat_add(p_mat[(i, i)], q_mat[(i, i)])))

    k_character: Dict[str, ParamPoly] = {}
    ell_val = ring.var("ell")
    zero = ring.zero()
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            name = f"KK_{i}_{j}"
            gens.append((name, "k", mat_add(k_mat[(i, j)], mat_scale(k_mat[(j, i)], -1))))
            k_character[name] = zero
    for i in range(1, n + 1):
        for j in range(i, n + 1):
            name = f"PQ_{i}_{j}"
            gens.append((name, "k", mat_add(p_mat[(i, j)], mat_scale(q_mat[(i, j)], -1))))
            k_character[name] = ell_val if i == j else zero

    basis = OrderedBasis(
        basis_id=f"spnr{n}-iwasawa", ambient=big, generators=gens,
        zones=("n", "a", "k"),
    )
    if len(basis) != n * (2 * n + 1):
        raise AssertionError("Sp(n,R) Iwasawa basis has wrong dimension")

    hua_gens: List[Tuple[str, str, Matrix]] = []
    hua_character: Dict[str, ParamPoly] = {}
    for i in range(1, n + 1):
        for j in range(i, n + 1):
            hua_gens.append((f"P_{i}_{j}", "p", p_mat[(i, j)]))
    for i in range(1, n + 1):
        for j in range(i, n + 1):
            hua_gens.append((f"Q_{i}_{j}", "q", q_mat[(i, j)]))
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            name = f"K_{i}_{j}"
            hua_gens.append((name, "k", k_mat[(i, j)]))
            hua_character[name] = ell_val if i == j else zero
    hua_basis = OrderedBasis(
        basis_id=f"spnr{n}-hua", ambient=big, generators=hua_gens,
        zones=("p", "q", "k"),
    )

    rho = tuple(Fraction(n - i + 1) for i in range(1, n + 1))
    form = RealFormData(
        name="spnr",
        params=(n,),
        ambient=big,
        rank=n,
        ring=ring,
        complex_algebra=make_algebra("sp", n),
        basis=basis,
        a_names=a_names,
        k_character=k_character,
        n_weights=n_weights,
        root_system=spnr_root_system(n),
        rho=rho,
        hua_basis=hua_basis,
        hua_character=hua_character,
    )
    return _finish_realform(form)


# -- GL(n, R) ----------------------------------------------------------------

@lru_cache(maxsize=None)
def make_glnr(n: int, symbols: Tuple[str, ...] = ()) -> RealFormData:
    """The real form GL(n, R), complexified to gl_n.

    Iwasawa basis: n-zone E_{ij} (i < j), a-zone E_{ii}, k-zone
    K_ij = (E_ij - E_ji)/2 (i < j) with the zero character.
    """
    if n < 1:
        raise ValueError("GL(n,R) requires n >= 1")
    ring = ParamRing(symbols)
    half = Fraction(1, 2)

    gens: List[Tuple[str, str, Matrix]] = []
    n_weights: Dict[str, Tuple[int, ...]] = {}
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            name = f"E_{i}_{j}"
            gens.append((name, "n", elementary(n, i, j)))
            n_weights[name] = _coords(n, **{f"i{i}": 1, f"i{j}": -1})
    a_names = tuple(f"E_{i}_{i}" for i in range(1, n + 1))
    for i in range(1, n + 1):
        gens.append((f"E_{i}_{i}", "a", elementary(n, i, i)))
    k_character: Dict[str, ParamPoly] = {}
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            name = f"K_{i}_{j}"
            mat = mat_scale(
                mat_add(elementary(n, i, j), mat_scale(elementary(n, j, i), -1)),
                half,
            )
            gens.append((name, "k", mat))
            k_character[name] = ring.zero()

    basis = OrderedBasis(
        basis_id=f"glnr{n}-iwasawa", ambient=n, generators=gens,
        zones=("n", "a", "k"),
    )
    rho = tuple(Fraction(n + 1, 2) - i for i in range(1, n + 1))
    form = RealFormData(
        name="glnr",
        params=(n,),
        ambient=n,
        rank=n,
        ring=ring,
        complex_algebra=make_algebra("gl", n),
        basis=basis,
        a_names=a_names,
        k_character=k_character,
        n_weights=n_weights,
        root_system=glnr_root_system(n),
        rho=rho,
    )
    return _finish_realform(form)


def make_realform(name: str, *args: int, symbols: Optional[Tuple[str, ...]] = None
                  ) -> RealFormData:
    """Dispatch helper: make_realform("upq", p, q) etc."""
    if name == "upq":
        return make_upq(*args, symbols=symbols or ("s", "t"))
    if name == "spnr":
        return make_spnr(*args, symbols=symbols or ("ell",))
    if name == "glnr":
        return make_glnr(*args, symbols=symbols or ())
    raise ValueError(f"unknown real form {name!r}")


# ---------------------------------------------------------------------------
# Satake degree table
# ---------------------------------------------------------------------------

_DATA_PATH = Path(__file__).parent / "data" / "satake_degrees.json"

_TERM_RE = re.compile(r"^(\d*)([a-z]?)$")


def eval_linear(expr: object, env: Mapping[str, int]) -> int:
    """Evaluate a small linear integer expression like "2n+m-1".

    Accepts ints directly; otherwise the expression must be a sum/difference
    of terms of the form [coefficient][variable].  No general evaluation.
    """
    if isinstance(expr, int):
        return expr
    text = str(expr).replace(" ", "")
    if not text:
        raise ValueError("empty expression")
    total = 0
    sign = 1
    term = ""
    for ch in text + "+":
        if ch in "+-":
            if term == "" and total == 0 and sign == 1 and ch == "-":
                sign = -1
                continue
            if term == "":
                raise ValueError(f"malformed expression {expr!r}")
            match = _TERM_RE.match(term)
            if not match:
                raise ValueError(f"malformed term {term!r} in {expr!r}")
            coeff_text, var = match.groups()
            coeff = int(coeff_text) if coeff_text else 1
            if var:
                if var not in env:
                    raise ValueError(f"unbound symbol {var!r} in {expr!r}")
                total += sign * coeff * env[var]
            else:
                total += sign * coeff
            term = ""
            sign = 1 if ch == "+" else -1
        else:
            term += ch
    return total


@dataclass(frozen=True)
class NodeDegree:
    degree: Optional[int]
    shilov: bool = False
    black: bool = False

    @property
    def is_boundary(self) -> bool:
        return not self.black


class SatakeRow:
    """One row of the degree table."""

    def __init__(self, record: dict):
        self.label: str = record["label"]
        self.group: str = record["group"]
        self.family: str = record["family"]
        self.rank: object = record.get("rank", "n")
        self.rank_min: int = record.get("rankMin", 1)
        self.param: Optional[str] = record.get("param")
        self.param_min: int = record.get("paramMin", 1)
        self.restricted: Optional[List[dict]] = record.get("restricted")
        self.nodes: Optional[List[dict]] = record.get("nodes")
        self.construction: Optional[dict] = record.get("construction")
        self.note: Optional[str] = record.get("note")

    @property
    def full_label(self) -> str:
        return f"{self.label}:{self.group}"

    def _env(self, rank: Optional[int], m: Optional[int]) -> Dict[str, int]:
        env: Dict[str, int] = {}
        if isinstance(self.rank, int):
            if rank is not None and rank != self.rank:
                raise ValueError(
                    f"{self.full_label} has fixed rank {self.rank}, got {rank}"
                )
            env["n"] = self.rank
        else:
            if rank is None:
                raise ValueError(f"{self.full_label} needs a rank value")
            if rank < self.rank_min:
                raise ValueError(
                    f"{self.full_label} requires rank >= {self.rank_min}"
                )
            env[str(self.rank)] = rank
        if self.param is not None:
            if m is None:
                raise ValueError(f"{self.full_label} needs parameter {self.param}")
            if m < self.param_min:
                raise ValueError(
                    f"{self.full_label} requires {self.param} >= {self.param_min}"
                )
            env[self.param] = m
        elif m is not None:
            raise ValueError(f"{self.full_label} takes no extra parameter")
        return env

    def node_degrees(self, rank: Optional[int] = None,
                     m: Optional[int] = None) -> List[NodeDegree]:
        """Per-node degree/Shilov data.

        Classical rows expand the restricted pattern for the given rank and
        index restricted Dynkin nodes 1..rank; exceptional rows return the
        drawn nodes in chain-then-branch order (black nodes included).
        """
        if self.family == "classical":
            env = self._env(rank, m)
            out: List[NodeDegree] = []
            for entry in self.restricted or []:
                count = eval_linear(entry.get("repeat", 1), env)
                if count < 0:
                    raise ValueError(
                        f"negative repeat count in {self.full_label}"
                    )
                node = NodeDegree(
                    degree=entry["degree"], shilov=bool(entry.get("shilov"))
                )
                out.extend([node] * count)
            return out
        if rank is not None or m is not None:
            raise ValueError(f"{self.full_label} is exceptional: fixed nodes")
        out = []
        for entry in self.nodes or []:
            if entry.get("black"):
                out.append(NodeDegree(degree=None, black=True))
            else:
                out.append(
                    NodeDegree(degree=entry["degree"],
                               shilov=bool(entry.get("shilov")))
                )
        return out

    def construction_args(self, node: int, rank: Optional[int],
                          m: Optional[int]) -> Optional[Dict[str, int]]:
        """Evaluated boundary-construction arguments for a classical row."""
        if self.construction is None:
            return None
        env = self._env(rank, m)
        env["i"] = node
        out = {"family": self.construction["family"]}
        for key, expr in self.construction["args"].items():
            out[key] = eval_linear(expr, env)
        out["node"] = node
        return out


class SatakeTable:
    def __init__(self, rows: Sequence[SatakeRow]):
        self.rows: Tuple[SatakeRow, ...] = tuple(rows)
        self._by_full: Dict[str, SatakeRow] = {}
        self._by_short: Dict[str, List[SatakeRow]] = {}
        for row in self.rows:
            if row.full_label in self._by_full:
                raise ValueError(f"duplicate table row {row.full_label}")
            self._by_full[row.full_label] = row
            self._by_short.setdefault(row.label, []).append(row)

    def row(self, label: str) -> SatakeRow:
        """Find a row by full "label:group", unique short label, or group."""
        if label in self._by_full:
            return self._by_full[label]
        matches = self._by_short.get(label, [])
        if not matches:
            # Printed labels carry TeX braces ("D_n^{1}"); accept both forms.
            plain = label.replace("{", "").replace("}", "")
            matches = [
                r for r in self.rows
                if r.label.replace("{", "").replace("}", "") == plain
                or r.full_label.replace("{", "").replace("}", "") == plain
            ]
        if len(matches) == 1:
            return matches[0]
        if not matches:
            for row in self.rows:
                if row.group == label:
                    return row
            raise KeyError(f"unknown diagram label {label!r}")
        options = ", ".join(r.full_label for r in matches)
        raise KeyError(f"ambiguous label {label!r}; use one of: {options}")

    def classical_rows(self) -> List[SatakeRow]:
        return [r for r in self.rows if r.family == "classical"]


@lru_cache(maxsize=1)
def satake_table() -> SatakeTable:
    with open(_DATA_PATH, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    return SatakeTable([SatakeRow(rec) for rec in data["rows"]])


def degree_table_lookup(label: str, node: int, rank: Optional[int] = None,
                        m: Optional[int] = None) -> NodeDegree:
    """Degree/Shilov data of one node of one table row.

    ``node`` is 1-based: the restricted Dynkin index for classical rows, the
    drawn chain-then-branch position for exceptional rows.  Black nodes raise.
    """
    row = satake_table().row(label)
    nodes = row.node_degrees(rank=rank, m=m)
    if not (1 <= node <= len(nodes)):
        raise ValueError(
            f"{row.full_label}: node {node} out of range 1..{len(nodes)}"
        )
    result = nodes[node - 1]
    if result.black:
        raise ValueError(
            f"{row.full_label}: node {node} is black (compact); no boundary degree"
        )
    return result
