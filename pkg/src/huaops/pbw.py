"""PBW arithmetic in universal enveloping algebras of matrix Lie algebras.

An :class:`OrderedBasis` is a totally ordered list of Lie-algebra generators,
each given by its matrix inside an ambient gl_N.  Structure constants are
recovered exactly (over Q) by solving linear systems against the basis, so a
basis is usable iff it is closed under the commutator — this is validated,
not assumed.

Elements of the enveloping algebra (:class:`EnvElement`) are kept in PBW
normal form throughout: a monomial is a run-length tuple
``((g1, e1), (g2, e2), ...)`` with strictly increasing generator indices, and
coefficients are :class:`huaops.params.ParamPoly`.  Products are computed by
a memoised straightening recursion; the independent ``naive_normal_order``
rewriter below exists purely as a cross-check oracle for tests and shares no
code with the fast path.

Generators carry *zone* tags (for instance ``("nbar", "a", "n")`` for a
triangular decomposition, or ``("n", "a", "k")`` for an Iwasawa one).  Zones
must be contiguous and in declared order, so a normal-ordered monomial splits
into zone segments by position — this is what the reduction module relies on.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .params import ParamPoly, ParamRing, as_fraction, poly_from_string_ring

Matrix = Tuple[Tuple[Fraction, ...], ...]
Monomial = Tuple[Tuple[int, int], ...]  # ((gen_index, power), ...) strictly increasing
LinearCombo = Tuple[Tuple[int, Fraction], ...]

_ZERO = Fraction(0)
_ONE = Fraction(1)


def make_matrix(n: int, entries: Mapping[Tuple[int, int], object] | None = None) -> Matrix:
    """An n-by-n rational matrix from a sparse {(row, col): value} dict (1-based)."""
    rows = [[_ZERO] * n for _ in range(n)]
    if entries:
        for (i, j), v in entries.items():
            rows[i - 1][j - 1] += as_fraction(v)
    return tuple(tuple(r) for r in rows)


def mat_commutator(a: Matrix, b: Matrix) -> Matrix:
    n = len(a)
    out = [[_ZERO] * n for _ in range(n)]
    for i in range(n):
        for k in range(n):
            aik = a[i][k]
            bik = b[i][k]
            if aik:
                row = b[k]
                for j in range(n):
                    if row[j]:
                        out[i][j] += aik * row[j]
            if bik:
                row = a[k]
                for j in range(n):
                    if row[j]:
                        out[i][j] -= bik * row[j]
    return tuple(tuple(r) for r in out)


def mat_add(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_scale(a: Matrix, c: object) -> Matrix:
    cf = as_fraction(c)
    return tuple(tuple(x * cf for x in r) for r in a)


def mat_transpose(a: Matrix) -> Matrix:
    return tuple(zip(*a))


def is_zero_matrix(a: Matrix) -> bool:
    return all(all(x == 0 for x in r) for r in a)


class RationalSpan:
    """Row-echelon store of rational vectors with exact membership solving.

    ``solve(v)`` returns the coordinates of ``v`` over the original vectors,
    or ``None`` if ``v`` is outside their span.  Used both to expand matrices
    over a Lie-algebra basis and to detect dependent candidate generators.
    """

    def __init__(self, dim: int):
        self.dim = dim
        self.count = 0
        self._rows: List[Tuple[int, List[Fraction], List[Fraction]]] = []

    def add(self, vector: Sequence[Fraction]) -> bool:
        """Insert a vector; returns False (and ignores it) if dependent."""
        vec = list(vector)
        combo = [_ZERO] * self.count + [_ONE]
        for piv, rvec, rcombo in self._rows:
            c = vec[piv]
            if c:
                for j in range(self.dim):
                    if rvec[j]:
                        vec[j] -= c * rvec[j]
                for j in range(len(rcombo)):
                    if rcombo[j]:
                        combo[j] -= c * rcombo[j]
        piv = next((j for j, x in enumerate(vec) if x != 0), None)
        if piv is None:
            return False
        inv = _ONE / vec[piv]
        self._rows.append((piv, [x * inv for x in vec], [x * inv for x in combo]))
        self.count += 1
        return True

    def solve(self, vector: Sequence[Fraction]) -> Optional[Tuple[Fraction, ...]]:
        vec = list(vector)
        combo = [_ZERO] * self.count
        for piv, rvec, rcombo in self._rows:
            c = vec[piv]
            if c:
                for j in range(self.dim):
                    if rvec[j]:
                        vec[j] -= c * rvec[j]
                for j, rc in enumerate(rcombo):
                    if rc:
                        combo[j] += c * rc
        if any(vec):
            return None
        combo += [_ZERO] * (self.count - len(combo))
        return tuple(combo)


class OrderedBasis:
    """An ordered, zone-tagged basis of a matrix Lie algebra inside gl_N."""

    def __init__(
        self,
        basis_id: str,
        ambient: int,
        generators: Sequence[Tuple[str, str, Matrix]],
        zones: Sequence[str] = ("all",),
    ):
        self.basis_id = basis_id
        self.ambient = ambient
        self.zones = tuple(zones)
        self.names: Tuple[str, ...] = tuple(g[0] for g in generators)
        self.zone_of: Tuple[str, ...] = tuple(g[1] for g in generators)
        self.matrices: Tuple[Matrix, ...] = tuple(g[2] for g in generators)
        if len(set(self.names)) != len(self.names):
            raise ValueError("duplicate generator names")
        seen_order = [z for i, z in enumerate(self.zone_of) if i == 0 or z != self.zone_of[i - 1]]
        if len(set(seen_order)) != len(seen_order) or any(z not in self.zones for z in seen_order):
            raise ValueError(f"generators not grouped by zones {self.zones}: {seen_order}")
        if seen_order != [z for z in self.zones if z in seen_order]:
            raise ValueError(f"zone groups out of declared order: {seen_order}")
        self._span = RationalSpan(ambient * ambient)
        for name, _zone, mat in generators:
            if len(mat) != ambient or any(len(r) != ambient for r in mat):
                raise ValueError(f"generator {name} is not {ambient}x{ambient}")
            if not self._span.add([x for row in mat for x in row]):
                raise ValueError(f"generator {name} is linearly dependent on earlier ones")
        self._bracket_cache: Dict[Tuple[int, int], LinearCombo] = {}
        self._mono_gen_cache: Dict[Tuple[Monomial, int], Dict[Monomial, Fraction]] = {}
        self._mono_mono_cache: Dict[Tuple[Monomial, Monomial], Dict[Monomial, Fraction]] = {}
        self._conversion_cache: Dict[Tuple[str, Monomial], Dict[Monomial, Fraction]] = {}

    def __len__(self) -> int:
        return len(self.names)

    def __repr__(self) -> str:
        return f"OrderedBasis({self.basis_id!r}, ambient={self.ambient}, size={len(self)})"

    def index_of(self, name: str) -> int:
        return self.names.index(name)

    def zone_indices(self, zone: str) -> range:
        members = [i for i, z in enumerate(self.zone_of) if z == zone]
        if not members:
            return range(0)
        lo, hi = members[0], members[-1]
        if members != list(range(lo, hi + 1)):
            raise AssertionError("zone not contiguous")  # guarded in __init__
        return range(lo, hi + 1)

    def expand_matrix(self, mat: Matrix) -> Tuple[Fraction, ...]:
        """Coordinates of a gl_N matrix over this basis (raises if outside)."""
        coords = self._span.solve([x for row in mat for x in row])
        if coords is None:
            raise ValueError(f"matrix is not in the span of basis {self.basis_id!r}")
        return coords

    def contains_matrix(self, mat: Matrix) -> bool:
        return self._span.solve([x for row in mat for x in row]) is not None

    def bracket(self, i: int, j: int) -> LinearCombo:
        """[g_i, g_j] expanded over the basis, as ((index, coeff), ...)."""
        key = (i, j)
        hit = self._bracket_cache.get(key)
        if hit is not None:
            return hit
        if i == j:
            combo: LinearCombo = ()
        elif i > j:
            combo = tuple((k, -c) for k, c in self.bracket(j, i))
        else:
            comm = mat_commutator(self.matrices[i], self.matrices[j])
            try:
                coords = self.expand_matrix(comm)
            except ValueError:
                raise ValueError(
                    f"basis {self.basis_id!r} is not closed under brackets: "
                    f"[{self.names[i]}, {self.names[j]}] leaves the span"
                ) from None
            combo = tuple((k, c) for k, c in enumerate(coords) if c != 0)
        self._bracket_cache[key] = combo
        return combo

    def check_closure(self) -> None:
        """Force every pairwise bracket; raises if any leaves the span."""
        for i in range(len(self)):
            for j in range(i + 1, len(self)):
                self.bracket(i, j)

    # -- monomial helpers ----------------------------------------------------

    def split_monomial(self, mono: Monomial) -> Dict[str, Monomial]:
        """Split a normal-ordered monomial into contiguous zone segments."""
        out: Dict[str, List[Tuple[int, int]]] = {z: [] for z in self.zones}
        for g, e in mono:
            out[self.zone_of[g]].append((g, e))
        return {z: tuple(v) for z, v in out.items()}

    # -- straightening engine -------------------------------------------------

    def mul_mono_gen(self, mono: Monomial, g: int) -> Dict[Monomial, Fraction]:
        """Normal form of (mono * g) as {monomial: rational}."""
        key = (mono, g)
        hit = self._mono_gen_cache.get(key)
        if hit is not None:
            return hit
        if not mono:
            result = {((g, 1),): _ONE}
        else:
            h, e = mono[-1]
            if h < g:
                result = {mono + ((g, 1),): _ONE}
            elif h == g:
                result = {mono[:-1] + ((h, e + 1),): _ONE}
            else:
                # mono = pre·h^e with h > g:  pre·h^(e-1)·(h g) where
                # h g = g h + [h, g].
                pre = mono[:-1] + ((h, e - 1),) if e > 1 else mono[:-1]
                acc: Dict[Monomial, Fraction] = {}
                for m1, c1 in self.mul_mono_gen(pre, g).items():
                    for m2, c2 in self.mul_mono_gen(m1, h).items():
                        c = c1 * c2
                        prev = acc.get(m2)
                        acc[m2] = c if prev is None else prev + c
                for k, ck in self.bracket(h, g):
                    for m1, c1 in self.mul_mono_gen(pre, k).items():
                        c = ck * c1
                        prev = acc.get(m1)
                        acc[m1] = c if prev is None else prev + c
                result = {m: c for m, c in acc.items() if c != 0}
        self._mono_gen_cache[key] = result
        return result

    def mul_monos(self, a: Monomial, b: Monomial) -> Dict[Monomial, Fraction]:
        """Normal form of the product of two normal-ordered monomials."""
        if not b:
            return {a: _ONE}
        if not a:
            return {b: _ONE}
        key = (a, b)
        hit = self._mono_mono_cache.get(key)
        if hit is not None:
            return hit
        g, e = b[0]
        rest: Monomial = ((g, e - 1),) + b[1:] if e > 1 else b[1:]
        acc: Dict[Monomial, Fraction] = {}
        for m1, c1 in self.mul_mono_gen(a, g).items():
            for m2, c2 in self.mul_monos(m1, rest).items():
                c = c1 * c2
                prev = acc.get(m2)
                acc[m2] = c if prev is None else prev + c
        result = {m: c for m, c in acc.items() if c != 0}
        self._mono_mono_cache[key] = result
        return result


def mono_degree(mono: Monomial) -> int:
    return sum(e for _g, e in mono)


def mono_word(mono: Monomial) -> Tuple[int, ...]:
    """Expand a run-length monomial into an explicit generator word."""
    out: List[int] = []
    for g, e in mono:
        out.extend([g] * e)
    return tuple(out)


def word_mono(word: Sequence[int]) -> Monomial:
    """Run-length encode a sorted generator word (validates ordering)."""
    out: List[Tuple[int, int]] = []
    for g in word:
        if out and out[-1][0] == g:
            out[-1] = (g, out[-1][1] + 1)
        elif out and out[-1][0] > g:
            raise ValueError("word is not sorted")
        else:
            out.append((g, 1))
    return tuple(out)


class EnvElement:
    """An element of U(g) in PBW normal form over an :class:`OrderedBasis`.

    ``terms`` maps normal-ordered monomials to nonzero ParamPoly coefficients.
    """

    __slots__ = ("basis", "ring", "terms")

    def __init__(self, basis: OrderedBasis, ring: ParamRing, terms: Dict[Monomial, ParamPoly]):
        self.basis = basis
        self.ring = ring
        self.terms = terms

    # -- constructors ----------------------------------------------------------

    @staticmethod
    def zero(basis: OrderedBasis, ring: ParamRing) -> "EnvElement":
        return EnvElement(basis, ring, {})

    @staticmethod
    def scalar(basis: OrderedBasis, poly: ParamPoly) -> "EnvElement":
        if poly.is_zero():
            return EnvElement(basis, poly.ring, {})
        return EnvElement(basis, poly.ring, {(): poly})

    @staticmethod
    def generator(basis: OrderedBasis, ring: ParamRing, index: int) -> "EnvElement":
        return EnvElement(basis, ring, {((index, 1),): ring.one()})

    @staticmethod
    def from_gl_matrix(basis: OrderedBasis, ring: ParamRing, mat: Matrix) -> "EnvElement":
        """The degree-one element with the given ambient gl_N matrix."""
        coords = basis.expand_matrix(mat)
        terms = {((i, 1),): ring.const(c) for i, c in enumerate(coords) if c != 0}
        return EnvElement(basis, ring, terms)

    def clone_terms(self) -> Dict[Monomial, ParamPoly]:
        return dict(self.terms)

    # -- predicates -------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_scalar(self) -> bool:
        return all(m == () for m in self.terms)

    def scalar_part(self) -> ParamPoly:
        return self.terms.get((), self.ring.zero())

    def degree(self) -> int:
        if not self.terms:
            return -1
        return max(mono_degree(m) for m in self.terms)

    # -- arithmetic ---------------------------------------------------------------

    def _check_compatible(self, other: "EnvElement") -> None:
        if self.basis is not other.basis:
            raise ValueError("elements over different bases; convert first")
        if self.ring != other.ring:
            raise ValueError("elements over different coefficient rings")

    def __add__(self, other: "EnvElement") -> "EnvElement":
        if not isinstance(other, EnvElement):
            return NotImplemented
        self._check_compatible(other)
        out = dict(self.terms)
        for m, p in other.terms.items():
            q = out.get(m)
            q = p if q is None else q + p
            if q.is_zero():
                out.pop(m, None)
            else:
                out[m] = q
        return EnvElement(self.basis, self.ring, out)

    def __neg__(self) -> "EnvElement":
        return EnvElement(self.basis, self.ring, {m: -p for m, p in self.terms.items()})

    def __sub__(self, other: "EnvElement") -> "EnvElement":
        if not isinstance(other, EnvElement):
            return NotImplemented
        return self + (-other)

    def scale(self, factor) -> "EnvElement":
        """Multiply by a central coefficient (ParamPoly / Fraction / int)."""
        if isinstance(factor, ParamPoly):
            if factor.ring != self.ring:
                raise ValueError("coefficient from a different ring")
            if factor.is_zero():
                return EnvElement.zero(self.basis, self.ring)
            out = {}
            for m, p in self.terms.items():
                q = p * factor
                if not q.is_zero():
                    out[m] = q
            return EnvElement(self.basis, self.ring, out)
        c = as_fraction(factor)
        if c == 0:
            return EnvElement.zero(self.basis, self.ring)
        return EnvElement(self.basis, self.ring, {m: p * c for m, p in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, EnvElement):
            self._check_compatible(other)
            basis = self.basis
            out: Dict[Monomial, ParamPoly] = {}
            for ma, ca in self.terms.items():
                for mb, cb in other.terms.items():
                    cab = ca * cb
                    if cab.is_zero():
                        continue
                    for m, c in basis.mul_monos(ma, mb).items():
                        q = out.get(m)
                        q = cab * c if q is None else q + cab * c
                        if q.is_zero():
                            out.pop(m, None)
                        else:
                            out[m] = q
            return EnvElement(basis, self.ring, out)
        if isinstance(other, (int, Fraction, ParamPoly)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, ParamPoly)):
            return self.scale(other)
        return NotImplemented

    def commutator(self, other: "EnvElement") -> "EnvElement":
        return self * other - other * self

    def power(self, n: int) -> "EnvElement":
        if n < 0:
            raise ValueError("negative power in U(g)")
        result = EnvElement.scalar(self.basis, self.ring.one())
        for _ in range(n):
            result = result * self
        return result

    def map_coeffs(self, fn) -> "EnvElement":
        out = {}
        for m, p in self.terms.items():
            q = fn(p)
            if not q.is_zero():
                out[m] = q
        return EnvElement(self.basis, self.ring, out)

    def substitute(self, bindings) -> "EnvElement":
        """Substitute ring symbols in every coefficient."""
        return self.map_coeffs(lambda p: p.substitute(bindings))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, EnvElement):
            return NotImplemented
        return (
            self.basis is other.basis
            and self.ring == other.ring
            and self.terms == other.terms
        )

    def __hash__(self):
        raise TypeError("EnvElement is not hashable")

    # -- presentation ---------------------------------------------------------------

    def sorted_terms(self) -> List[Tuple[Monomial, ParamPoly]]:
        return sorted(self.terms.items(), key=lambda kv: (mono_degree(kv[0]), kv[0]))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        names = self.basis.names
        chunks = []
        for mono, poly in self.sorted_terms():
            word = "*".join(
                names[g] if e == 1 else f"{names[g]}^{e}" for g, e in mono
            )
            coeff = str(poly)
            if word:
                chunk = word if coeff == "1" else f"({coeff})*{word}"
            else:
                chunk = f"({coeff})"
            chunks.append(chunk)
        return " + ".join(chunks)

    def __repr__(self) -> str:
        return f"EnvElement[{self.basis.basis_id}]({self})"

    # -- serialization ----------------------------------------------------------------

    def to_json_dict(self) -> dict:
        return {
            "basisId": self.basis.basis_id,
            "terms": [
                {"coeff": str(p), "monomial": [[g, e] for g, e in m]}
                for m, p in self.sorted_terms()
            ],
        }

    @staticmethod
    def from_json_dict(data: dict, basis: OrderedBasis, ring: ParamRing) -> "EnvElement":
        if data.get("basisId") != basis.basis_id:
            raise ValueError(
                f"element was serialised over basis {data.get('basisId')!r}, "
                f"not {basis.basis_id!r}"
            )
        terms: Dict[Monomial, ParamPoly] = {}
        for item in data["terms"]:
            mono = tuple((int(g), int(e)) for g, e in item["monomial"])
            poly = poly_from_string_ring(ring, item["coeff"])
            if not poly.is_zero():
                terms[mono] = terms.get(mono, ring.zero()) + poly
        return EnvElement(basis, ring, {m: p for m, p in terms.items() if not p.is_zero()})


def change_basis(elem: EnvElement, target: OrderedBasis) -> EnvElement:
    """Re-express an element over another closed basis of the same span.

    Every source generator's ambient matrix is expanded over ``target``; a
    source monomial then maps to the normal-ordered product of those images
    (computed once per monomial and cached on the source basis).
    """
    source = elem.basis
    if source is target:
        return elem
    if source.ambient != target.ambient:
        raise ValueError("bases live in different ambient gl_N")
    images: List[LinearCombo] = []
    for mat in source.matrices:
        coords = target.expand_matrix(mat)
        images.append(tuple((k, c) for k, c in enumerate(coords) if c != 0))
    cache = source._conversion_cache
    out: Dict[Monomial, ParamPoly] = {}
    for mono, poly in elem.terms.items():
        key = (target.basis_id, mono)
        image = cache.get(key)
        if image is None:
            image = {(): _ONE}
            for g, e in mono:
                for _ in range(e):
                    nxt: Dict[Monomial, Fraction] = {}
                    for tm, c in image.items():
                        for k, ck in images[g]:
                            for m2, c2 in target.mul_mono_gen(tm, k).items():
                                c3 = c * ck * c2
                                prev = nxt.get(m2)
                                nxt[m2] = c3 if prev is None else prev + c3
                    image = {m: c for m, c in nxt.items() if c != 0}
            cache[key] = image
        for m, c in image.items():
            q = out.get(m)
            q = poly * c if q is None else q + poly * c
            if q.is_zero():
                out.pop(m, None)
            else:
                out[m] = q
    return EnvElement(target, elem.ring, out)


def naive_normal_order(
    basis: OrderedBasis, word: Sequence[int]
) -> Dict[Monomial, Fraction]:
    """Straighten a generator word by single adjacent swaps (oracle only).

    Deliberately unoptimised and structurally different from the engine:
    finds the first adjacent inversion, applies x·y = y·x + [x, y] and
    recurses on explicit words.  Exponential; use only on short words.
    """
    word = tuple(word)
    for i in range(len(word) - 1):
        if word[i] > word[i + 1]:
            swapped = word[:i] + (word[i + 1], word[i]) + word[i + 2 :]
            total = dict(naive_normal_order(basis, swapped))
            for k, ck in basis.bracket(word[i], word[i + 1]):
                sub = word[:i] + (k,) + word[i + 2 :]
                for m, c in naive_normal_order(basis, sub).items():
                    q = total.get(m, _ZERO) + ck * c
                    if q == 0:
                        total.pop(m, None)
                    else:
                        total[m] = q
            return total
    return {word_mono(word): _ONE}
