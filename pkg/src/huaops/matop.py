"""Matrices over an enveloping algebra and the ideal generators they produce.

The generator matrix of a classical algebra has the spanning generators as
its entries.  Evaluating a minimal polynomial on it — either factor by factor
or through Horner's rule on the expanded coefficients — yields a square
matrix of enveloping-algebra elements whose entries generate a two-sided
ideal.  Trace powers of the generator matrix supply the central generators;
their eigenvalues are read off a highest-weight evaluation oracle.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .liedata import AlgebraData
from .minpoly import MinPoly, ThetaData, minimal_polynomial
from .params import ParamPoly, ParamRing
from .pbw import EnvElement, Monomial, OrderedBasis


class CentralityError(ValueError):
    """Raised when a highest-weight evaluation shows an element is not central."""


# ---------------------------------------------------------------------------
# Matrices with enveloping-algebra entries
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OpMatrix:
    """A square matrix whose entries live in one enveloping algebra."""

    basis: OrderedBasis
    ring: ParamRing
    entries: Tuple[Tuple[EnvElement, ...], ...]

    def __post_init__(self):
        size = len(self.entries)
        if any(len(row) != size for row in self.entries):
            raise ValueError("matrix must be square")

    @property
    def size(self) -> int:
        return len(self.entries)

    @staticmethod
    def identity(basis: OrderedBasis, ring: ParamRing, size: int) -> "OpMatrix":
        one = EnvElement.scalar(basis, ring.one())
        zero = EnvElement.zero(basis, ring)
        return OpMatrix(basis, ring, tuple(
            tuple(one if i == j else zero for j in range(size))
            for i in range(size)
        ))

    def entry(self, i: int, j: int) -> EnvElement:
        """1-based entry access."""
        return self.entries[i - 1][j - 1]

    def add(self, other: "OpMatrix") -> "OpMatrix":
        self._check_compatible(other)
        return OpMatrix(self.basis, self.ring, tuple(
            tuple(a + b for a, b in zip(ra, rb))
            for ra, rb in zip(self.entries, other.entries)
        ))

    def sub(self, other: "OpMatrix") -> "OpMatrix":
        self._check_compatible(other)
        return OpMatrix(self.basis, self.ring, tuple(
            tuple(a - b for a, b in zip(ra, rb))
            for ra, rb in zip(self.entries, other.entries)
        ))

    def scale(self, value: ParamPoly) -> "OpMatrix":
        return OpMatrix(self.basis, self.ring, tuple(
            tuple(e * value for e in row) for row in self.entries
        ))

    def shift(self, value: ParamPoly) -> "OpMatrix":
        """``self + value * I``."""
        diag = EnvElement.scalar(self.basis, value)
        return OpMatrix(self.basis, self.ring, tuple(
            tuple(e + diag if i == j else e for j, e in enumerate(row))
            for i, row in enumerate(self.entries)
        ))

    def mul(self, other: "OpMatrix") -> "OpMatrix":
        """Matrix product; entry products keep the left factor on the left."""
        self._check_compatible(other)
        n = self.size
        rows = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = EnvElement.zero(self.basis, self.ring)
                for k in range(n):
                    acc = acc + self.entries[i][k] * other.entries[k][j]
                row.append(acc)
            rows.append(tuple(row))
        return OpMatrix(self.basis, self.ring, tuple(rows))

    def trace(self) -> EnvElement:
        acc = EnvElement.zero(self.basis, self.ring)
        for i in range(self.size):
            acc = acc + self.entries[i][i]
        return acc

    def is_zero(self) -> bool:
        return all(e.is_zero() for row in self.entries for e in row)

    def map_entries(self, fn) -> "OpMatrix":
        return OpMatrix(self.basis, self.ring, tuple(
            tuple(fn(e) for e in row) for row in self.entries
        ))

    def _check_compatible(self, other: "OpMatrix") -> None:
        if self.size != other.size or self.basis is not other.basis:
            raise ValueError("incompatible matrices")


def generator_matrix(algebra: AlgebraData, ring: ParamRing) -> OpMatrix:
    """The matrix whose ``(i, j)`` entry is the spanning generator ``F_ij``."""
    n = algebra.ambient
    rows = tuple(
        tuple(algebra.f_entry(i, j, ring) for j in range(1, n + 1))
        for i in range(1, n + 1)
    )
    return OpMatrix(algebra.basis, ring, rows)


def mat_eval_factors(mat: OpMatrix, roots: Sequence[ParamPoly]) -> OpMatrix:
    """``prod_k (mat - roots[k] * I)``, multiplied left to right."""
    out = OpMatrix.identity(mat.basis, mat.ring, mat.size)
    for root in roots:
        out = out.mul(mat.shift(-root))
    return out


def mat_eval_poly(mat: OpMatrix, coefficients: Sequence[ParamPoly]) -> OpMatrix:
    """Evaluate ``sum_k coefficients[k] * mat^k`` by Horner's rule."""
    if not coefficients:
        raise ValueError("need at least one coefficient")
    out: Optional[OpMatrix] = None
    for coeff in reversed(coefficients):
        if out is None:
            out = OpMatrix.identity(mat.basis, mat.ring, mat.size).scale(coeff)
        else:
            out = mat.mul(out).shift(coeff)
    return out


def matrix_powers(mat: OpMatrix, top: int) -> List[OpMatrix]:
    """``[I, mat, mat^2, ..., mat^top]``."""
    powers = [OpMatrix.identity(mat.basis, mat.ring, mat.size)]
    for _ in range(top):
        powers.append(powers[-1].mul(mat))
    return powers


def trace_power(mat: OpMatrix, order: int,
                powers: Optional[List[OpMatrix]] = None) -> EnvElement:
    """``tr(mat^order)`` computed from two half powers.

    Splitting the power keeps the largest intermediate matrix at half the
    requested order; a precomputed ``powers`` list is reused when given.
    """
    if order < 1:
        raise ValueError("order must be positive")
    a = order // 2
    b = order - a
    if powers is None:
        powers = matrix_powers(mat, b)
    left, right = powers[a], powers[b]
    acc = EnvElement.zero(mat.basis, mat.ring)
    for i in range(mat.size):
        for k in range(mat.size):
            acc = acc + left.entries[i][k] * right.entries[k][i]
    return acc


# ---------------------------------------------------------------------------
# Highest-weight evaluation
# ---------------------------------------------------------------------------


def highest_weight_buckets(algebra: AlgebraData, element: EnvElement,
                           weight: Mapping[int, ParamPoly],
                           ) -> Dict[Monomial, ParamPoly]:
    """Apply an element to a highest-weight vector.

    Monomials with a factor in the raising zone annihilate the vector; the
    Cartan part evaluates at the weight; what remains is grouped by its
    lowering-zone monomial.  The empty-monomial bucket is the scalar action.
    """
    basis = algebra.basis
    if basis is not element.basis:
        raise ValueError("element not expressed in the algebra's basis")
    buckets: Dict[Monomial, ParamPoly] = {}
    for mono, coeff in element.terms.items():
        parts = basis.split_monomial(mono)
        if parts["n"]:
            continue
        value = coeff
        for g, e in parts["a"]:
            value = value * weight[g] ** e
        key = tuple(parts["nbar"])
        if key in buckets:
            buckets[key] = buckets[key] + value
        else:
            buckets[key] = value
    return {k: v for k, v in buckets.items() if not v.is_zero()}


def central_eigenvalue(algebra: AlgebraData, element: EnvElement,
                       weight: Mapping[int, ParamPoly]) -> ParamPoly:
    """Scalar by which a central element acts on the highest-weight vector.

    Raises :class:`CentralityError` if the evaluation leaves any lowering
    residue, which certifies the element is not central for this weight
    family.
    """
    buckets = highest_weight_buckets(algebra, element, weight)
    residue = {k: v for k, v in buckets.items() if k}
    if residue:
        sample_key = sorted(residue)[0]
        names = " ".join(
            f"{algebra.basis.names[g]}^{e}" if e > 1 else algebra.basis.names[g]
            for g, e in sample_key
        )
        raise CentralityError(
            f"not central: lowering residue on {len(residue)} monomial(s), "
            f"e.g. {names} -> {residue[sample_key]}"
        )
    ring = element.ring
    return buckets.get((), ring.zero())


def theta_weight(algebra: AlgebraData, theta: ThetaData) -> Dict[int, ParamPoly]:
    """Weight map sending each diagonal generator to its block's character."""
    if algebra.rank != theta.rank:
        raise ValueError("block pattern rank does not match the algebra")
    return algebra.weight_map(list(theta.weight_values()))


# ---------------------------------------------------------------------------
# Ideal generator sets
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CentralGenerator:
    index: int
    order: int
    element: EnvElement
    eigenvalue: ParamPoly


@dataclass(frozen=True)
class GeneratorSet:
    """All generators of the two-sided ideal attached to a block pattern."""

    algebra: AlgebraData
    theta: ThetaData
    polynomial: MinPoly
    matrix: OpMatrix
    central: Tuple[CentralGenerator, ...]
    pfaffian_omitted: bool
    column_range: Optional[Tuple[int, int]] = None

    def entry_positions(self) -> List[Tuple[int, int]]:
        """Row-major 1-based positions of the matrix entries kept."""
        n = self.matrix.size
        if self.column_range is None:
            cols = range(1, n + 1)
        else:
            lo, hi = self.column_range
            if not 1 <= lo <= hi <= n:
                raise ValueError(f"column range {self.column_range} out of 1..{n}")
            cols = range(lo, hi + 1)
        return [(i, j) for i in range(1, n + 1) for j in cols]

    def entries(self) -> List[Tuple[int, int, EnvElement]]:
        return [(i, j, self.matrix.entry(i, j)) for i, j in self.entry_positions()]

    def to_json_dict(self) -> dict:
        meta = {
            "kind": self.theta.kind,
            "rank": self.theta.rank,
            "ambient": self.algebra.ambient,
            "blocks": list(self.theta.blocks),
            "charValues": [str(v) for v in self.theta.char_values],
            "variant": self.theta.variant,
            "basisId": self.matrix.basis.basis_id,
        }
        if self.column_range is not None:
            meta["columnRange"] = list(self.column_range)
        out = {
            "metadata": meta,
            "polynomial": self.polynomial.to_json_dict(),
            "entries": [
                {"row": i, "col": j, "element": e.to_json_dict()}
                for i, j, e in self.entries()
            ],
            "central": [
                {
                    "index": c.index,
                    "order": c.order,
                    "eigenvalue": str(c.eigenvalue),
                    "element": c.element.to_json_dict(),
                }
                for c in self.central
            ],
            "pfaffianOmitted": self.pfaffian_omitted,
        }
        return out


def ideal_generators(algebra: AlgebraData, theta: ThetaData,
                     ring: Optional[ParamRing] = None,
                     column_range: Optional[Tuple[int, int]] = None,
                     ) -> GeneratorSet:
    """Build the full generator set of the ideal attached to a block pattern.

    The matrix part evaluates the minimal polynomial on the generator matrix
    (factored form).  The central part adjoins one trace power per index in
    the pattern's central index set, with its eigenvalue certified by the
    highest-weight oracle; the even-orthogonal generator of order equal to
    the rank has no trace-power realization and is omitted with a flag.
    """
    if ring is None:
        ring = theta.ring
    if algebra.rank != theta.rank:
        raise ValueError("block pattern rank does not match the algebra")
    poly = minimal_polynomial(theta)
    fmat = generator_matrix(algebra, ring)
    qmat = mat_eval_factors(fmat, poly.roots)

    weight = theta_weight(algebra, theta)
    central: List[CentralGenerator] = []
    pfaffian_omitted = False
    indices = theta.central_index_set()
    orders = [theta.central_order(j) for j in indices]
    usable = [
        (j, order) for j, order in zip(indices, orders)
        if not (theta.kind == "o-even" and j == theta.rank)
    ]
    if len(usable) != len(indices):
        pfaffian_omitted = True
    if usable:
        top = max(order - order // 2 for _, order in usable)
        powers = matrix_powers(fmat, top)
        for j, order in usable:
            element = trace_power(fmat, order, powers=powers)
            eig = central_eigenvalue(algebra, element, weight)
            central.append(CentralGenerator(j, order, element, eig))

    return GeneratorSet(
        algebra=algebra,
        theta=theta,
        polynomial=poly,
        matrix=qmat,
        central=tuple(central),
        pfaffian_omitted=pfaffian_omitted,
        column_range=column_range,
    )


# ---------------------------------------------------------------------------
# Adjoint covariance
# ---------------------------------------------------------------------------


def adjoint_covariance_defect(algebra: AlgebraData, mat: OpMatrix,
                              generator_index: int) -> OpMatrix:
    """Defect of ``[X, mat] == x^T * mat - mat * x^T`` for one basis generator.

    ``x`` is the ambient numeric matrix of the generator; entry indices of
    the generator matrix transform through the transpose (for an elementary
    ambient matrix this is the familiar
    ``[E_ij, M_ab] = d_ja M_ib - d_ib M_aj``).  A zero defect for every
    generator says the matrix transforms like its ambient realization.
    """
    basis = algebra.basis
    ring = mat.ring
    x = basis.matrices[generator_index]
    xgen = EnvElement.generator(basis, ring, generator_index)
    n = mat.size
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            lhs = xgen.commutator(mat.entries[i][j])
            rhs = EnvElement.zero(basis, ring)
            for k in range(n):
                cik = x[k][i]
                if cik:
                    rhs = rhs + mat.entries[k][j] * ring.const(cik)
                ckj = x[j][k]
                if ckj:
                    rhs = rhs - mat.entries[i][k] * ring.const(ckj)
            row.append(lhs - rhs)
        rows.append(tuple(row))
    return OpMatrix(basis, ring, tuple(rows))


def check_adjoint_covariance(algebra: AlgebraData, mat: OpMatrix) -> None:
    """Assert the covariance identity for every basis generator."""
    for g in range(len(algebra.basis)):
        defect = adjoint_covariance_defect(algebra, mat, g)
        if not defect.is_zero():
            name = algebra.basis.names[g]
            raise AssertionError(f"covariance fails for generator {name}")
