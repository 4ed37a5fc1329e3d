"""Exact symbolic kernel for Hua-type operators on classical Lie algebras.

Subpackages are organized by layer:

* :mod:`huaops.params` — exact multivariate polynomial coefficients.
* :mod:`huaops.pbw` — PBW normal ordering in U(gl_N) subalgebras.
* :mod:`huaops.liedata` — catalog of classical algebras, real forms,
  restricted root systems, and the Satake degree table.
* :mod:`huaops.minpoly` — block data and minimal polynomials.
* :mod:`huaops.matop` — matrices over the enveloping algebra, trace powers,
  ideal generator sets.
* :mod:`huaops.reduce` — Iwasawa/character reductions, Harish-Chandra maps,
  and the identity-chain verification drivers.
* :mod:`huaops.cfun` — exact, pole-aware e- and c-function evaluation.
* :mod:`huaops.cli` — batch command-line front end.
"""

__version__ = "0.1.0"

__all__ = ["__version__"]
