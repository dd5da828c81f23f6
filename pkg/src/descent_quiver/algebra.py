"""The face semigroup algebra kF, its support map onto kL, idempotents and radical."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import gcd, lcm
from typing import Iterable, Mapping

import flint
import numpy as np

from .faces import Arrangement
from .lattice import Lattice
from .linalg import Subspace, fmpz_from_rows, fmpz_to_array

log = logging.getLogger(__name__)

_INT64_SAFE = 2**62


def _normalize(num: np.ndarray, den: int) -> tuple[np.ndarray, int]:
    if den < 0:
        num, den = -num, -den
    g = den
    for x in num[np.flatnonzero(num)]:
        g = gcd(g, int(x))
        if g == 1:
            break
    if g > 1:
        num = np.array([int(x) // g for x in num], dtype=object)
        den //= g
    return num, den


def _max_abs(v: np.ndarray) -> int:
    return max((abs(int(x)) for x in v), default=0)


def scatter_product(table: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Numerators of the product of two integer vectors under ``table``."""
    N = table.shape[1]
    ia, ib = np.flatnonzero(a), np.flatnonzero(b)
    if len(ia) == 0 or len(ib) == 0:
        return np.zeros(N, dtype=object)
    va, vb = a[ia], b[ib]
    idx = table[np.ix_(ia, ib)].ravel()
    if _max_abs(va) * _max_abs(vb) * len(ia) * len(ib) < _INT64_SAFE:
        out = np.zeros(N, dtype=np.int64)
        np.add.at(out, idx, np.outer(va.astype(np.int64), vb.astype(np.int64)).ravel())
        return out.astype(object)
    out = np.zeros(N, dtype=object)
    np.add.at(out, idx, np.outer(va, vb).ravel())
    return out


class AlgebraElement:
    """A rational combination of faces, stored as integer numerators over one denominator."""

    __slots__ = ("algebra", "num", "den")

    def __init__(self, algebra: "FaceAlgebra", num, den: int = 1):
        num = np.asarray(num, dtype=object)
        if num.shape != (algebra.dim,):
            raise ValueError("coefficient vector has the wrong length")
        self.algebra = algebra
        self.num, self.den = _normalize(num, int(den))

    @classmethod
    def from_fractions(cls, algebra, coeffs: Mapping[int, Fraction]) -> "AlgebraElement":
        den = 1
        for c in coeffs.values():
            den = lcm(den, Fraction(c).denominator)
        num = np.zeros(algebra.dim, dtype=object)
        for i, c in coeffs.items():
            c = Fraction(c)
            num[int(i)] += c.numerator * (den // c.denominator)
        return cls(algebra, num, den)

    def coefficient(self, i) -> Fraction:
        return Fraction(int(self.num[int(i)]), self.den)

    def coefficients(self) -> dict[int, Fraction]:
        return {int(i): Fraction(int(self.num[i]), self.den) for i in np.flatnonzero(self.num)}

    def support_faces(self) -> np.ndarray:
        return np.flatnonzero(self.num)

    def is_zero(self) -> bool:
        return not self.num.any()

    def total(self) -> Fraction:
        return Fraction(int(sum(self.num)), self.den)

    def _coerce(self, other) -> "AlgebraElement":
        if isinstance(other, AlgebraElement):
            return other
        return self.algebra.one() * Fraction(other)

    def __add__(self, other):
        other = self._coerce(other)
        d = lcm(self.den, other.den)
        return AlgebraElement(self.algebra, self.num * (d // self.den) + other.num * (d // other.den), d)

    __radd__ = __add__

    def __neg__(self):
        return AlgebraElement(self.algebra, -self.num, self.den)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            return self.algebra.multiply(self, other)
        c = Fraction(other)
        return AlgebraElement(self.algebra, self.num * c.numerator, self.den * c.denominator)

    def __rmul__(self, other):
        c = Fraction(other)
        return AlgebraElement(self.algebra, self.num * c.numerator, self.den * c.denominator)

    def __eq__(self, other):
        if not isinstance(other, AlgebraElement):
            try:
                other = self._coerce(other)
            except (TypeError, ValueError):
                return NotImplemented
        return self.den == other.den and bool(np.all(self.num == other.num))

    def __hash__(self):
        return hash((self.den, tuple(int(x) for x in self.num)))

    def __repr__(self):
        terms = ", ".join(f"{i}: {c}" for i, c in list(self.coefficients().items())[:6])
        more = "" if len(self.support_faces()) <= 6 else ", ..."
        return f"AlgebraElement({{{terms}{more}}})"


class LatticeElement:
    """A rational combination of flats; the product is the join."""

    __slots__ = ("lattice_algebra", "coeffs")

    def __init__(self, lattice_algebra: "LatticeAlgebra", coeffs: Mapping[int, Fraction]):
        self.lattice_algebra = lattice_algebra
        self.coeffs = {int(k): Fraction(v) for k, v in coeffs.items() if v != 0}

    def __add__(self, other):
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, Fraction(0)) + v
        return LatticeElement(self.lattice_algebra, out)

    def __neg__(self):
        return LatticeElement(self.lattice_algebra, {k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, LatticeElement):
            return self.lattice_algebra.multiply(self, other)
        c = Fraction(other)
        return LatticeElement(self.lattice_algebra, {k: v * c for k, v in self.coeffs.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, LatticeElement) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(tuple(sorted(self.coeffs.items())))

    def __repr__(self):
        return f"LatticeElement({self.coeffs})"


class LatticeAlgebra:
    """kL with the join product."""

    def __init__(self, lattice: Lattice):
        self.lattice = lattice
        L = len(lattice)
        self.join_table = np.array([[lattice.join(x, y) for y in range(L)] for x in range(L)], dtype=np.int32)

    def flat(self, x) -> LatticeElement:
        return LatticeElement(self, {int(x): 1})

    def one(self) -> LatticeElement:
        return self.flat(self.lattice.bottom)

    def multiply(self, a: LatticeElement, b: LatticeElement) -> LatticeElement:
        out: dict[int, Fraction] = {}
        for x, u in a.coeffs.items():
            for y, v in b.coeffs.items():
                z = int(self.join_table[x, y])
                out[z] = out.get(z, Fraction(0)) + u * v
        return LatticeElement(self, out)

    def idempotents(self) -> dict[int, LatticeElement]:
        """E_X = X - sum over Y > X of E_Y, computed from the top down."""
        lat = self.lattice
        E: dict[int, LatticeElement] = {}
        for x in sorted(range(len(lat)), key=lambda f: (-lat.flats[f].dim, f)):
            e = self.flat(x)
            for y in lat.above(x):
                e = e - E[y]
            E[x] = e
        return dict(sorted(E.items()))


@dataclass
class IdempotentSystem:
    """A family {e_X} indexed by flats, with the l-system that produced it."""

    elements: tuple[AlgebraElement, ...]
    system: str
    ells: tuple[AlgebraElement, ...]
    representatives: dict | None = None
    verification: dict = field(default_factory=dict)

    def __getitem__(self, x) -> AlgebraElement:
        return self.elements[int(x)]

    def __len__(self):
        return len(self.elements)

    @property
    def verified(self) -> bool:
        return bool(self.verification) and all(self.verification.values())


class VerificationError(AssertionError):
    pass


class FaceAlgebra:
    def __init__(self, arrangement: Arrangement, lattice: Lattice | None = None):
        self.arrangement = arrangement
        self.lattice = lattice if lattice is not None else Lattice(arrangement)
        self.dim = len(arrangement)
        self.table = arrangement.table
        self._systems: dict = {}

    def __repr__(self):
        return f"FaceAlgebra({self.arrangement.type}{self.arrangement.n}, dim={self.dim})"

    # -- elements -----------------------------------------------------------

    def zero(self) -> AlgebraElement:
        return AlgebraElement(self, np.zeros(self.dim, dtype=object), 1)

    def face(self, x) -> AlgebraElement:
        num = np.zeros(self.dim, dtype=object)
        num[self.arrangement._idx(x)] = 1
        return AlgebraElement(self, num, 1)

    def one(self) -> AlgebraElement:
        return self.face(self.arrangement.identity_face)

    def element(self, coeffs: Mapping[int, Fraction]) -> AlgebraElement:
        return AlgebraElement.from_fractions(self, coeffs)

    def multiply(self, a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
        return AlgebraElement(self, scatter_product(self.table, a.num, b.num), a.den * b.den)

    def act(self, w, a: AlgebraElement) -> AlgebraElement:
        """w(a): coefficient of x moves to w(x)."""
        wi = w if isinstance(w, (int, np.integer)) else self.arrangement.system.index[w]
        num = np.zeros(self.dim, dtype=object)
        num[self.arrangement.face_action[wi]] = a.num
        return AlgebraElement(self, num, a.den)

    @cached_property
    def lattice_algebra(self) -> LatticeAlgebra:
        return LatticeAlgebra(self.lattice)

    def supp_hom(self, a: AlgebraElement) -> LatticeElement:
        out: dict[int, Fraction] = {}
        for i, c in a.coefficients().items():
            x = int(self.lattice.support[i])
            out[x] = out.get(x, Fraction(0)) + c
        return LatticeElement(self.lattice_algebra, out)

    def lattice_idempotents(self) -> dict[int, LatticeElement]:
        return self.lattice_algebra.idempotents()

    # -- matrices -------------------------------------------------------------

    def left_matrix(self, a: AlgebraElement) -> np.ndarray:
        """Integer matrix M with M @ v = den(a) * (a v) for numerator columns v."""
        N = self.dim
        M = np.zeros((N, N), dtype=object)
        ia = np.flatnonzero(a.num)
        rows = self.table[ia].ravel()
        cols = np.tile(np.arange(N), len(ia))
        vals = np.repeat(a.num[ia], N)
        np.add.at(M, (rows, cols), vals)
        return M

    def right_multiply_rows(self, rows: np.ndarray, x: int) -> np.ndarray:
        """Each row r replaced by r * x for a single face x."""
        out = np.zeros_like(rows, dtype=object)
        np.add.at(out, (slice(None), self.table[:, int(x)]), rows)
        return out

    def left_face_rows(self, faces: Iterable[int], v: AlgebraElement) -> np.ndarray:
        """Numerator rows of x v for each face x (scaled by den(v))."""
        faces = np.asarray(list(faces), dtype=np.int64)
        out = np.zeros((len(faces), self.dim), dtype=object)
        if len(faces):
            np.add.at(out, (np.arange(len(faces))[:, None], self.table[faces]), v.num[None, :])
        return out

    # -- l-systems and idempotents -------------------------------------------

    def face_orbit_classes(self) -> np.ndarray:
        """Index of the W-orbit of each face, orbits numbered by least member."""
        fa = self.arrangement.face_action
        least = fa.min(axis=0)
        _, cls = np.unique(least, return_inverse=True)
        return cls

    def default_representatives(self) -> dict[int, int]:
        """Least face (in face order) whose support lies in each flat orbit."""
        orbits = self.flat_orbit_ids
        reps: dict[int, int] = {}
        for i in range(self.dim):
            o = int(orbits[self.lattice.support[i]])
            if o not in reps:
                reps[o] = i
        return reps

    @cached_property
    def flat_orbit_ids(self) -> np.ndarray:
        act = self.lattice.flat_action
        return act.min(axis=0)

    def ell(self, x, system: str = "first", representatives: Mapping[int, int] | None = None) -> AlgebraElement:
        """l_X: the first system averages all faces of support X; the second
        averages the faces of support X in the W-orbit of a chosen face whose
        support is in the orbit of X."""
        x = int(x)
        faces = self.lattice.faces_by_flat[x]
        if system == "first":
            num = np.zeros(self.dim, dtype=object)
            num[faces] = 1
            return AlgebraElement(self, num, len(faces))
        if system != "second":
            raise ValueError(f"unknown l-system {system!r}")
        reps = dict(self.default_representatives())
        if representatives:
            reps.update({int(k): int(v) for k, v in representatives.items()})
        okey = int(self.flat_orbit_ids[x])
        if okey not in reps:
            raise ValueError("no representative face for this flat orbit")
        f = reps[okey]
        if int(self.flat_orbit_ids[self.lattice.support[f]]) != okey:
            raise ValueError("representative face does not lie over the orbit of X")
        orbit = np.unique(self.arrangement.face_action[:, f])
        chosen = orbit[self.lattice.support[orbit] == x]
        if len(chosen) == 0:
            raise ValueError("representative orbit misses X")
        num = np.zeros(self.dim, dtype=object)
        num[chosen] = 1
        return AlgebraElement(self, num, len(chosen))

    def recursion_order(self) -> list[int]:
        lat = self.lattice
        return sorted(range(len(lat)), key=lambda f: (-lat.flats[f].dim, f))

    def build_idempotents(
        self,
        system: str = "first",
        representatives: Mapping[int, int] | None = None,
        verify: bool = True,
    ) -> IdempotentSystem:
        """e_X = l_X - sum_{Y > X} l_X e_Y, evaluated as l_X (1 - sum_{Y > X} e_Y)."""
        lat = self.lattice
        ells = [self.ell(x, system, representatives) for x in range(len(lat))]
        es: dict[int, AlgebraElement] = {}
        for x in self.recursion_order():
            above = lat.above(x)
            if above:
                rest = self.one()
                for y in above:
                    rest = rest - es[y]
                es[x] = ells[x] * rest
            else:
                es[x] = ells[x]
        sys_ = IdempotentSystem(
            tuple(es[x] for x in range(len(lat))),
            system,
            tuple(ells),
            dict(representatives) if representatives else None,
        )
        if verify:
            self.verify_system(sys_)
            if not sys_.verified:
                raise VerificationError(f"idempotent system failed: {sys_.verification}")
        return sys_

    def idempotents(self, system: str = "first") -> IdempotentSystem:
        if system not in self._systems:
            log.info("building %s idempotent system for %r", system, self)
            self._systems[system] = self.build_idempotents(system)
        return self._systems[system]

    def verify_system(self, sys_: IdempotentSystem) -> dict:
        es = sys_.elements
        L = len(es)
        total = self.zero()
        for e in es:
            total = total + e
        ok_sum = total == self.one()
        # products e_X e_Y for all Y at once: L_{e_X} applied to the stacked e_Y
        stack = fmpz_from_rows(np.array([e.num for e in es]).T, L)
        ok_idem, ok_orth = True, True
        for x, ex in enumerate(es):
            prod = fmpz_to_array(fmpz_from_rows(self.left_matrix(ex), self.dim) * stack)
            for y in range(L):
                col = prod[:, y]
                if x == y:
                    # den_x^2 * (e_x e_x) should equal den_x^2 * e_x
                    ok_idem &= bool(np.all(col == ex.num * ex.den))
                else:
                    ok_orth &= not col.any()
        act = self.lattice.flat_action
        ok_eq = True
        for w in range(len(self.arrangement.system.elements)):
            fa = self.arrangement.face_action[w]
            for x, ex in enumerate(es):
                target = es[int(act[w, x])]
                if ex.den != target.den:
                    ok_eq = False
                    break
                moved = np.zeros(self.dim, dtype=object)
                moved[fa] = ex.num
                if not np.all(moved == target.num):
                    ok_eq = False
                    break
            if not ok_eq:
                break
        sys_.verification = {
            "sum_is_one": bool(ok_sum),
            "idempotent": bool(ok_idem),
            "orthogonal": bool(ok_orth),
            "equivariant": bool(ok_eq),
            "count": L == len(self.lattice),
        }
        return sys_.verification

    # -- radical ----------------------------------------------------------------

    def rows_of(self, elements: Iterable[AlgebraElement]) -> flint.fmpz_mat:
        els = list(elements)
        if not els:
            return flint.fmpz_mat(0, self.dim)
        return fmpz_from_rows(np.array([e.num for e in els]), self.dim)

    def radical_generators(self) -> np.ndarray:
        """Rows x - x0 for every face x other than the first face x0 of its support."""
        rows = []
        for faces in self.lattice.faces_by_flat:
            x0 = faces[0]
            for x in faces[1:]:
                r = np.zeros(self.dim, dtype=object)
                r[x], r[x0] = 1, -1
                rows.append(r)
        return np.array(rows, dtype=object).reshape(-1, self.dim)

    @cached_property
    def _radical_cache(self) -> dict:
        return {}

    def radical_power_basis(self, p: int, method: str = "auto") -> Subspace:
        """Basis of rad^p(kF).

        ``products`` multiplies a basis of rad^{p-1} by the spanning set
        {x - x0} of rad and eliminates.  ``graded`` uses the decomposition
        kF = sum of e_Y kF e_X with rad^p collecting the pieces whose rank
        drop rk X - rk Y is at least p; the two agree wherever both run.
        """
        if p < 1:
            raise ValueError("p must be positive")
        if method == "auto":
            method = "products" if self.dim <= 200 else "graded"
        key = (p, method)
        if key in self._radical_cache:
            return self._radical_cache[key]
        if method == "products":
            result = self._radical_products(p)
        elif method == "graded":
            result = self._radical_graded(p)
        else:
            raise ValueError(f"unknown radical method {method!r}")
        self._radical_cache[key] = result
        return result

    def _radical_products(self, p: int) -> Subspace:
        gens = self.radical_generators()
        if p == 1:
            return Subspace.span(fmpz_from_rows(gens, self.dim))
        prev = self.radical_power_basis(p - 1, "products")
        if prev.dim == 0:
            return prev
        B = prev.rows()
        cache = {}

        def times(x):
            if x not in cache:
                cache[x] = self.right_multiply_rows(B, x)
            return cache[x]

        def blocks():
            for faces in self.lattice.faces_by_flat:
                x0 = int(faces[0])
                for x in faces[1:]:
                    yield fmpz_from_rows(times(int(x)) - times(x0), self.dim)

        return Subspace.span_of_blocks(blocks(), self.dim)

    def _radical_graded(self, p: int, system: str = "first") -> Subspace:
        lat = self.lattice
        es = self.idempotents(system)
        ranks = [f.rank for f in lat.flats]
        top_rank = max(ranks)

        def blocks():
            for s in range(p, top_rank + 1):
                P = self.zero()
                for y in range(len(lat)):
                    if ranks[y] <= s - p:
                        P = P + es[y]
                LP = fmpz_from_rows(self.left_matrix(P), self.dim)
                for x in range(len(lat)):
                    if ranks[x] != s:
                        continue
                    rows = self.left_face_rows(lat.faces_by_flat[x], es[x])
                    block = fmpz_from_rows(rows, self.dim) * LP.transpose()
                    yield block

        return Subspace.span_of_blocks(blocks(), self.dim)

    def radical_dimension_formula(self, p: int) -> int:
        """Sum of |mu(Y, X)| over pairs with rank drop at least p."""
        lat = self.lattice
        mu = lat.mobius_table
        total = 0
        for y in lat.flats:
            for x in lat.flats:
                if lat.order[y.index, x.index] and x.rank - y.rank >= p:
                    total += abs(int(mu[y.index, x.index]))
        return total

    def corner_dimension(self, y, x, system: str = "first") -> int:
        """dim e_Y kF e_X, from the span of e_Y z e_X over all faces z."""
        es = self.idempotents(system)
        rows = self.left_face_rows(range(self.dim), es[x])
        LY = fmpz_from_rows(self.left_matrix(es[y]), self.dim)
        return (fmpz_from_rows(rows, self.dim) * LY.transpose()).rank()
