"""Exact, pole-aware Gamma products for spherical e- and c-functions.

Every Gamma factor keeps its argument as an exact affine polynomial in the
spectral coordinates ``lambda_1 .. lambda_r`` (and the line-bundle level
``ell``), so zeros of the reciprocal factors and poles of the direct factors
are certified by integer arithmetic on rationals, never by floating-point
underflow.  Log-Gamma floats enter only when a defined value is displayed.

The plain product pairs, for each indivisible positive restricted root, the
two reciprocal factors ``Gamma(lambda_a/4 + m_a/4 + 1/2)`` and
``Gamma(lambda_a/4 + m_a/4 + m_2a/2)``; the c-function multiplies in
``2^(-lambda_a/2) Gamma(lambda_a/2)`` per root and a constant fixed by
``c(rho) = 1``.  The line-bundle variant replaces the factors of the longest
root-length class by the ``ell``-dependent pair
``Gamma(lambda_a/2 + m_(a/2)/4 + (1 +- ell)/2)`` and keeps the plain factors
on the second class; root systems with a third length class are rejected.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .liedata import RestrictedRoot, RestrictedRootSystem
from .params import ParamPoly, ParamRing, ScalarLike, as_fraction

__all__ = [
    "GammaFactor",
    "GammaProduct",
    "NUMERATOR",
    "DENOMINATOR",
    "root_label",
    "spectral_ring",
    "e_product",
    "c_product",
    "line_bundle_products",
    "e_function",
    "c_function",
    "e_c_line_bundle",
    "dominant_grid_report",
]

NUMERATOR = 1
DENOMINATOR = -1

#: Relative tolerance for floating-point re-evaluation checks.
FLOAT_TOL = 1e-12


def root_label(root: RestrictedRoot) -> str:
    """Readable name of a restricted root, e.g. ``e1-e2`` or ``2e1``."""
    parts: List[str] = []
    for i, c in enumerate(root.coords, start=1):
        if c == 0:
            continue
        mag = abs(c)
        stem = f"e{i}" if mag == 1 else f"{mag}e{i}"
        if not parts:
            parts.append(stem if c > 0 else f"-{stem}")
        else:
            parts.append(f"+{stem}" if c > 0 else f"-{stem}")
    return "".join(parts) if parts else "0"


@dataclass(frozen=True)
class GammaFactor:
    """One Gamma factor: ``sign`` +1 in the numerator, -1 for a reciprocal."""

    sign: int
    argument: ParamPoly
    root: str

    def __post_init__(self) -> None:
        if self.sign not in (NUMERATOR, DENOMINATOR):
            raise ValueError("sign must be +1 (numerator) or -1 (denominator)")
        if self.argument.degree() > 1:
            raise ValueError("Gamma arguments must be affine in the parameters")


@dataclass(frozen=True)
class GammaProduct:
    """A product of Gamma factors times ``2`` raised to an affine exponent.

    Evaluation at rational parameter values is exact on the pole/zero logic:
    a reciprocal factor whose argument is a nonpositive integer contributes a
    certified zero, a numerator factor at a nonpositive integer a certified
    pole.  When neither occurs, the value is returned through log-Gamma.
    """

    ring: ParamRing
    factors: Tuple[GammaFactor, ...]
    log2_coeff: ParamPoly

    def __post_init__(self) -> None:
        if self.log2_coeff.degree() > 1:
            raise ValueError("the power-of-two exponent must be affine")
        for f in self.factors:
            if f.argument.ring != self.ring or self.log2_coeff.ring != self.ring:
                raise ValueError("all factors must share the product's ring")

    def substitute(self, bindings: Mapping[str, ParamPoly]) -> "GammaProduct":
        """Apply a symbolic substitution to every argument."""
        return GammaProduct(
            self.ring,
            tuple(
                GammaFactor(f.sign, f.argument.substitute(bindings), f.root)
                for f in self.factors
            ),
            self.log2_coeff.substitute(bindings),
        )

    def evaluate(self, bindings: Mapping[str, ScalarLike], *,
                 reverse: bool = False) -> dict:
        """Evaluate at exact parameter values.

        Returns a dict with certified ``zeros`` and ``poles`` (root label and
        exact argument each), ``defined`` (no numerator pole), ``zero`` (some
        reciprocal zero while defined), and, when the value is finite and
        nonzero, ``logValue``/``value`` floats.  ``reverse`` reassociates the
        floating-point accumulation to witness numeric stability.
        """
        exact = {name: as_fraction(value) for name, value in bindings.items()}
        zeros: List[dict] = []
        poles: List[dict] = []
        evaluated: List[Tuple[int, Fraction, str]] = []
        for f in self.factors:
            arg = f.argument.eval_rational(exact)
            evaluated.append((f.sign, arg, f.root))
            if arg <= 0 and arg.denominator == 1:
                cert = {"root": f.root, "argument": str(arg)}
                (zeros if f.sign == DENOMINATOR else poles).append(cert)
        result = {
            "zeros": zeros,
            "poles": poles,
            "defined": not poles,
            "zero": bool(zeros) and not poles,
            "logValue": None,
            "value": None,
        }
        if poles:
            return result
        if zeros:
            result["value"] = 0.0
            return result
        two_exp = self.log2_coeff.eval_rational(exact)
        order = reversed(evaluated) if reverse else evaluated
        log_value = 0.0
        for sign, arg, _ in order:
            log_value += sign * math.lgamma(float(arg))
        log_value += float(two_exp) * math.log(2.0)
        result["logValue"] = log_value
        try:
            result["value"] = math.exp(log_value)
        except OverflowError:
            result["value"] = math.inf
        return result

    def factor_records(self) -> List[dict]:
        """Stable symbolic listing of the factors, for reports."""
        return [
            {
                "sign": "numerator" if f.sign == NUMERATOR else "denominator",
                "root": f.root,
                "argument": str(f.argument),
            }
            for f in self.factors
        ]


def spectral_ring(rs: RestrictedRootSystem, *,
                  line_bundle: bool = False) -> ParamRing:
    """Coefficient ring in ``lambda_1..lambda_r`` (plus ``ell`` if asked)."""
    names = tuple(f"lambda_{i}" for i in range(1, rs.rank + 1))
    if line_bundle:
        names += ("ell",)
    return ParamRing(names)


def _lambda_alpha(rs: RestrictedRootSystem, ring: ParamRing,
                  root: RestrictedRoot) -> ParamPoly:
    """``lambda_alpha = 2 <lambda, alpha> / <alpha, alpha>`` symbolically."""
    denom = root.squared_length()
    out = ring.zero()
    for i, c in enumerate(root.coords, start=1):
        if c:
            out = out + ring.var(f"lambda_{i}") * (2 * c / denom)
    return out


def _plain_factors(rs: RestrictedRootSystem, ring: ParamRing,
                   roots: Sequence[RestrictedRoot]) -> List[GammaFactor]:
    factors: List[GammaFactor] = []
    quarter, half = Fraction(1, 4), Fraction(1, 2)
    for root in roots:
        label = root_label(root)
        la = _lambda_alpha(rs, ring, root)
        base = la * quarter + Fraction(root.multiplicity, 4)
        factors.append(GammaFactor(DENOMINATOR, base + half, label))
        factors.append(GammaFactor(
            DENOMINATOR, base + Fraction(rs.double_multiplicity(root), 2),
            label))
    return factors


def e_product(rs: RestrictedRootSystem,
              ring: Optional[ParamRing] = None) -> GammaProduct:
    """Reciprocal-Gamma product over the indivisible positive roots."""
    ring = ring or spectral_ring(rs)
    factors = _plain_factors(rs, ring, rs.indivisible_positive())
    return GammaProduct(ring, tuple(factors), ring.zero())


def c_product(rs: RestrictedRootSystem,
              ring: Optional[ParamRing] = None) -> GammaProduct:
    """Unnormalized c-function: e-product times ``2^(-l_a/2) Gamma(l_a/2)``."""
    ring = ring or spectral_ring(rs)
    base = e_product(rs, ring)
    factors = list(base.factors)
    log2 = ring.zero()
    half = Fraction(1, 2)
    for root in rs.indivisible_positive():
        la = _lambda_alpha(rs, ring, root)
        factors.append(GammaFactor(NUMERATOR, la * half, root_label(root)))
        log2 = log2 - la * half
    return GammaProduct(ring, tuple(factors), log2)


def line_bundle_products(
        rs: RestrictedRootSystem,
        ring: Optional[ParamRing] = None) -> Tuple[GammaProduct, GammaProduct]:
    """The level-``ell`` e- and (unnormalized) c-products.

    The longest root-length class carries the ``ell``-dependent factor pair
    with the half-root multiplicity; the second class carries the plain
    factors.  A third length class is out of the product's scope and is
    rejected.
    """
    classes = rs.length_classes()
    if len(classes) > 2:
        raise ValueError(
            f"{rs.label} has {len(classes)} root-length classes; the "
            "line-bundle product is defined for at most two")
    ring = ring or spectral_ring(rs, line_bundle=True)
    if "ell" not in ring.symbols:
        raise ValueError("the ring must declare the level symbol 'ell'")
    ell = ring.var("ell")
    half, quarter = Fraction(1, 2), Fraction(1, 4)

    e_factors: List[GammaFactor] = []
    c_extra: List[GammaFactor] = []
    log2 = ring.zero()
    for k, roots in enumerate(classes, start=1):
        for root in roots:
            label = root_label(root)
            la = _lambda_alpha(rs, ring, root)
            if k == 1:
                base = (la * half
                        + Fraction(rs.half_multiplicity(root), 4) + half)
                e_factors.append(GammaFactor(
                    DENOMINATOR, base + ell * half, label))
                e_factors.append(GammaFactor(
                    DENOMINATOR, base - ell * half, label))
            else:
                shifted = la * quarter + Fraction(root.multiplicity, 4)
                e_factors.append(GammaFactor(
                    DENOMINATOR, shifted + half, label))
                e_factors.append(GammaFactor(
                    DENOMINATOR,
                    shifted + Fraction(rs.double_multiplicity(root), 2),
                    label))
            scaled = la / k
            c_extra.append(GammaFactor(NUMERATOR, scaled, label))
            log2 = log2 - scaled
    e_prod = GammaProduct(ring, tuple(e_factors), ring.zero())
    c_prod = GammaProduct(ring, tuple(e_factors + c_extra), log2)
    return e_prod, c_prod


def _bindings(rs: RestrictedRootSystem, lam: Sequence[ScalarLike],
              ell: Optional[ScalarLike] = None) -> Dict[str, Fraction]:
    values = [as_fraction(v) for v in lam]
    if len(values) != rs.rank:
        raise ValueError(f"lambda must have {rs.rank} coordinates")
    out = {f"lambda_{i}": v for i, v in enumerate(values, start=1)}
    if ell is not None:
        out["ell"] = as_fraction(ell)
    return out


def _first_witness(certs: List[dict]) -> Optional[str]:
    return certs[0]["root"] if certs else None


def e_function(rs: RestrictedRootSystem, lam: Sequence[ScalarLike]) -> dict:
    """Evaluate the e-function at an exact spectral point.

    The result is zero exactly when some reciprocal Gamma argument is a
    nonpositive integer; the certificate names the offending root and
    argument.  Otherwise the value is finite and positive and is reported
    along with the exact factor records.
    """
    product = e_product(rs)
    val = product.evaluate(_bindings(rs, lam))
    return {
        "rootSystem": rs.label,
        "lambda": [str(as_fraction(v)) for v in lam],
        "zero": val["zero"],
        "witnessRoot": _first_witness(val["zeros"]),
        "zeros": val["zeros"],
        "logValue": val["logValue"],
        "value": val["value"],
        "factors": product.factor_records(),
    }


def _normalize(product: GammaProduct,
               bindings: Mapping[str, Fraction]) -> float:
    ref = product.evaluate(bindings)
    if ref["logValue"] is None:
        raise ArithmeticError(
            "normalization point hits a Gamma zero or pole")
    return -ref["logValue"]


def c_function(rs: RestrictedRootSystem, lam: Sequence[ScalarLike]) -> dict:
    """Evaluate the c-function, normalized so that ``c(rho) = 1``.

    A numerator Gamma pole makes the value undefined (certified); a
    reciprocal zero gives an exact zero.  The report carries the
    normalization constant and a re-evaluation of ``c(rho)`` under a
    reassociated floating-point order as a stability check.
    """
    product = c_product(rs)
    rho = _bindings(rs, rs.half_sum())
    log_c = _normalize(product, rho)
    val = product.evaluate(_bindings(rs, lam))
    value: Optional[float] = None
    if val["defined"]:
        value = 0.0 if val["zero"] else math.exp(log_c + val["logValue"])
    rho_again = product.evaluate(rho, reverse=True)
    drift = abs(math.exp(log_c + rho_again["logValue"]) - 1.0)
    return {
        "rootSystem": rs.label,
        "lambda": [str(as_fraction(v)) for v in lam],
        "defined": val["defined"],
        "zero": val["zero"],
        "value": value,
        "C": math.exp(log_c),
        "zeros": val["zeros"],
        "poles": val["poles"],
        "normalization": {
            "cRho": 1.0,
            "reassociated": math.exp(log_c + rho_again["logValue"]),
            "drift": drift,
            "stable": drift <= FLOAT_TOL,
        },
    }


def e_c_line_bundle(rs: RestrictedRootSystem, lam: Sequence[ScalarLike],
                    ell: ScalarLike) -> dict:
    """Evaluate the level-``ell`` e- and c-functions at an exact point.

    The constant is fixed once per root system by ``c(rho, 0) = 1`` and the
    same constant serves every level.  The zero sets of the level-0 and plain
    e-functions at the given point are recorded for comparison, not asserted
    equal.
    """
    e_prod, c_prod = line_bundle_products(rs)
    point = _bindings(rs, lam, ell)
    rho0 = _bindings(rs, rs.half_sum(), 0)
    log_c = _normalize(c_prod, rho0)
    e_val = e_prod.evaluate(point)
    c_val = c_prod.evaluate(point)
    c_value: Optional[float] = None
    if c_val["defined"]:
        c_value = 0.0 if c_val["zero"] else math.exp(log_c + c_val["logValue"])
    rho_again = c_prod.evaluate(rho0, reverse=True)
    drift = abs(math.exp(log_c + rho_again["logValue"]) - 1.0)
    at_zero = e_prod.evaluate(_bindings(rs, lam, 0))
    plain = e_product(rs).evaluate(_bindings(rs, lam))
    return {
        "rootSystem": rs.label,
        "lambda": [str(as_fraction(v)) for v in lam],
        "ell": str(as_fraction(ell)),
        "lengthClasses": len(rs.length_classes()),
        "e": {
            "zero": e_val["zero"],
            "witnessRoot": _first_witness(e_val["zeros"]),
            "zeros": e_val["zeros"],
            "logValue": e_val["logValue"],
            "value": e_val["value"],
        },
        "c": {
            "defined": c_val["defined"],
            "zero": c_val["zero"],
            "value": c_value,
            "C": math.exp(log_c),
            "zeros": c_val["zeros"],
            "poles": c_val["poles"],
            "normalization": {
                "cRhoZero": 1.0,
                "reassociated": math.exp(log_c + rho_again["logValue"]),
                "drift": drift,
                "stable": drift <= FLOAT_TOL,
            },
        },
        "consistency": {
            "eZeroAtLevelZero": at_zero["zero"],
            "plainEZero": plain["zero"],
            "agree": at_zero["zero"] == plain["zero"],
        },
    }


def dominant_grid_report(rs: RestrictedRootSystem, *, height: int = 3) -> dict:
    """Spot-check finiteness of c on strictly dominant integer points.

    Candidate points are the strictly decreasing positive integer vectors
    drawn from ``1..rank+height-1``; each is certified strictly dominant by
    exact pairing with every positive root, then checked to produce neither a
    zero nor a pole certificate, with a finite positive float value.
    """
    product = c_product(rs)
    rho = _bindings(rs, rs.half_sum())
    log_c = _normalize(product, rho)
    points = 0
    failures: List[dict] = []
    pool = range(1, rs.rank + height)
    for combo in itertools.combinations(pool, rs.rank):
        lam = tuple(Fraction(c) for c in sorted(combo, reverse=True))
        if any(rs.lambda_alpha(lam, root) <= 0 for root in rs.positive):
            continue
        points += 1
        val = product.evaluate(_bindings(rs, lam))
        value = None
        if val["defined"] and not val["zero"]:
            value = math.exp(log_c + val["logValue"])
        ok = (val["defined"] and not val["zero"]
              and value is not None and value > 0.0 and math.isfinite(value))
        if not ok:
            failures.append({"lambda": [str(c) for c in lam],
                             "zeros": val["zeros"], "poles": val["poles"]})
    return {
        "rootSystem": rs.label,
        "points": points,
        "failures": failures,
        "pass": points > 0 and not failures,
    }
