"""The W-invariant subalgebra of kF and the descent algebra inside kW.

Elements of the invariant algebra are coordinate vectors on the orbit-sum
basis bx_J (J a bitmask of simple generators).  Elements of the descent
algebra are coefficient vectors on the group, indexed like
``CoxeterSystem.elements``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Mapping, Sequence

import flint
import numpy as np

from .algebra import AlgebraElement, FaceAlgebra, VerificationError, scatter_product
from .lattice import OrbitPoset
from .linalg import QMatrix, kernel_basis, rank as qrank, rref

log = logging.getLogger(__name__)


def subset_key(J: int, s: int) -> tuple[int, ...]:
    return tuple(i for i in range(s) if (J >> i) & 1)


def least_subset(masks, s: int) -> int:
    """Lexicographically least subset, comparing sorted generator tuples."""
    return min(masks, key=lambda J: subset_key(J, s))


# ---------------------------------------------------------------------------
# coordinate-space linear algebra (dimension 2^|S|, so plain Fractions)


def span_basis(vectors: Sequence[Sequence[Fraction]], dim: int) -> list[tuple[Fraction, ...]]:
    vectors = [v for v in vectors if any(x != 0 for x in v)]
    if not vectors:
        return []
    red, _, r = rref(QMatrix(vectors, dim))
    return [red.row(i) for i in range(r)]


@dataclass(frozen=True)
class InvariantElement:
    coords: tuple[Fraction, ...]

    def __add__(self, other):
        return InvariantElement(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other):
        return InvariantElement(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self):
        return InvariantElement(tuple(-a for a in self.coords))

    def scale(self, c) -> "InvariantElement":
        c = Fraction(c)
        return InvariantElement(tuple(a * c for a in self.coords))

    def is_zero(self) -> bool:
        return all(a == 0 for a in self.coords)


class InvariantAlgebra:
    """Sigma(W) with basis bx_J = sum of the W-orbit of the fundamental face c_J."""

    def __init__(self, face_algebra: FaceAlgebra, orbit_poset: OrbitPoset | None = None):
        self.kF = face_algebra
        self.arrangement = face_algebra.arrangement
        self.lattice = face_algebra.lattice
        self.orbit_poset = orbit_poset if orbit_poset is not None else OrbitPoset(self.lattice)
        self.num_generators = self.arrangement.system.num_generators
        self.dim = 1 << self.num_generators
        fa = self.arrangement.face_action
        self.c = tuple(self.arrangement.fundamental_faces)
        self.face_orbits = tuple(np.unique(fa[:, c]) for c in self.c)
        owner = np.full(len(self.arrangement), -1)
        for J, orb in enumerate(self.face_orbits):
            if (owner[orb] >= 0).any():
                raise AssertionError("face orbits of the fundamental faces overlap")
            owner[orb] = J
        if (owner < 0).any():
            raise AssertionError("some face lies in no fundamental orbit")
        self.orbit_of_face = owner
        # J -> vertex of L/W containing supp(c_J)
        self.vertex_of = tuple(
            int(self.orbit_poset.orbit_of[self.lattice.support[c]]) for c in self.c
        )

    def __repr__(self):
        return f"InvariantAlgebra(dim={self.dim})"

    # -- elements -----------------------------------------------------------

    def basis_element(self, J: int) -> InvariantElement:
        return InvariantElement(tuple(Fraction(int(K == J)) for K in range(self.dim)))

    def one(self) -> InvariantElement:
        return self.basis_element(self.dim - 1)

    def zero(self) -> InvariantElement:
        return InvariantElement((Fraction(0),) * self.dim)

    def basis_vector(self, J: int) -> np.ndarray:
        v = np.zeros(len(self.arrangement), dtype=np.int64)
        v[self.face_orbits[J]] = 1
        return v

    def to_kF(self, a: InvariantElement) -> AlgebraElement:
        coeffs = {}
        for J, c in enumerate(a.coords):
            if c:
                for f in self.face_orbits[J]:
                    coeffs[int(f)] = c
        return self.kF.element(coeffs)

    def from_kF(self, a: AlgebraElement, check: bool = True) -> InvariantElement:
        """Coordinates read at the faces c_M; optionally assert invariance."""
        coords = tuple(a.coefficient(self.c[M]) for M in range(self.dim))
        if check:
            for M in range(self.dim):
                vals = a.num[self.face_orbits[M]]
                if not np.all(vals == vals[0]):
                    raise VerificationError("element is not constant on a face orbit")
        return InvariantElement(coords)

    def is_invariant(self, a: AlgebraElement) -> bool:
        fa = self.arrangement.face_action
        for w in range(fa.shape[0]):
            moved = np.zeros(len(self.arrangement), dtype=object)
            moved[fa[w]] = a.num
            if not np.all(moved == a.num):
                return False
        return True

    # -- structure constants ------------------------------------------------

    @cached_property
    def structure_constants(self) -> np.ndarray:
        """C[J, K, M]: coefficient of bx_M in bx_J bx_K, from the full kF product."""
        T = self.arrangement.table
        N = len(self.arrangement)
        d = self.dim
        C = np.zeros((d, d, d), dtype=np.int64)
        for J in range(d):
            for K in range(d):
                counts = np.bincount(T[np.ix_(self.face_orbits[J], self.face_orbits[K])].ravel(), minlength=N)
                for M in range(d):
                    vals = counts[self.face_orbits[M]]
                    if not np.all(vals == vals[0]):
                        raise VerificationError(f"product bx_{J} bx_{K} is not invariant")
                    C[J, K, M] = vals[0]
        return C

    def structure_constants_by_counting(self) -> np.ndarray:
        """Same table, counting pairs (x, y) with xy = c_M and x <= c_M."""
        T = self.arrangement.table
        le = self.arrangement.face_order
        d = self.dim
        C = np.zeros((d, d, d), dtype=np.int64)
        for M in range(d):
            cM = self.c[M]
            for J in range(d):
                xs = self.face_orbits[J][le[self.face_orbits[J], cM]]
                if len(xs) == 0:
                    continue
                hits = T[xs] == cM
                for K in range(d):
                    C[J, K, M] = int(hits[:, self.face_orbits[K]].sum())
        return C

    def multiply(self, a: InvariantElement, b: InvariantElement) -> InvariantElement:
        C = self.structure_constants
        out = [Fraction(0)] * self.dim
        for J, x in enumerate(a.coords):
            if not x:
                continue
            for K, y in enumerate(b.coords):
                if not y:
                    continue
                xy = x * y
                for M in np.flatnonzero(C[J, K]):
                    out[M] += xy * int(C[J, K, M])
        return InvariantElement(tuple(out))

    invariant_multiply = multiply

    # -- idempotents ------------------------------------------------------------

    @cached_property
    def J_of_vertex(self) -> tuple[int, ...]:
        """J_O: the least J with supp(c_J) in O."""
        out = []
        for O in range(len(self.orbit_poset)):
            cands = [J for J in range(self.dim) if self.vertex_of[J] == O]
            out.append(least_subset(cands, self.num_generators))
        return tuple(out)

    def L_count(self, O: int) -> int:
        """Faces in the orbit of c_{J_O} with the same support as c_{J_O}."""
        J = self.J_of_vertex[O]
        X = self.lattice.support[self.c[J]]
        return int((self.lattice.support[self.face_orbits[J]] == X).sum())

    def vertex_order(self) -> list[int]:
        """Vertices from the top of L/W down."""
        op = self.orbit_poset
        return sorted(range(len(op)), key=lambda o: (-op.ranks[o], o))

    def epsilon_third_system(self) -> tuple[InvariantElement, ...]:
        """eps_O = u - sum_{O' > O} u eps_{O'} with u = bx_{J_O} / L_O."""
        op = self.orbit_poset
        eps: dict[int, InvariantElement] = {}
        for O in self.vertex_order():
            u = self.basis_element(self.J_of_vertex[O]).scale(Fraction(1, self.L_count(O)))
            e = u
            for O2 in range(len(op)):
                if O2 != O and op.order[O, O2]:
                    e = e - self.multiply(u, eps[O2])
            eps[O] = e
        return tuple(eps[O] for O in range(len(op)))

    def matched_representatives(self) -> dict[int, int]:
        """Second-system representatives f_O = c_{J_O}, keyed like FaceAlgebra.ell."""
        reps = {}
        ids = self.kF.flat_orbit_ids
        for O, J in enumerate(self.J_of_vertex):
            X = self.lattice.support[self.c[J]]
            reps[int(ids[X])] = int(self.c[J])
        return reps

    def epsilon_via_sum(self, system) -> tuple[InvariantElement, ...]:
        """eps_O = sum of e_X over X in O, for an idempotent system of kF."""
        out = []
        for orbit in self.orbit_poset.orbits:
            total = self.kF.zero()
            for X in orbit:
                total = total + system[X]
            out.append(self.from_kF(total))
        return tuple(out)

    def epsilon_orbit(self, method: str = "viaThirdSystem", system=None) -> tuple[InvariantElement, ...]:
        if method == "viaThirdSystem":
            return self.epsilon_third_system()
        if method == "viaSum":
            if system is None:
                system = self.kF.build_idempotents("second", self.matched_representatives())
            return self.epsilon_via_sum(system)
        raise ValueError(f"unknown method {method!r}")

    @cached_property
    def epsilon(self) -> tuple[InvariantElement, ...]:
        return self.epsilon_third_system()

    def check_complete_system(self, eps: Sequence[InvariantElement]) -> dict:
        total = self.zero()
        for e in eps:
            total = total + e
        idem = all(self.multiply(e, e) == e for e in eps)
        orth = all(
            self.multiply(a, b).is_zero() for i, a in enumerate(eps) for j, b in enumerate(eps) if i != j
        )
        return {"sum_is_one": total == self.one(), "idempotent": idem, "orthogonal": orth}

    # -- radical --------------------------------------------------------------

    @cached_property
    def support_matrix(self) -> QMatrix:
        """Column J is supp(bx_J) in the flat basis of kL."""
        L = len(self.lattice)
        rows = [[0] * self.dim for _ in range(L)]
        for J in range(self.dim):
            for x in self.lattice.support[self.face_orbits[J]]:
                rows[int(x)][J] += 1
        return QMatrix(rows, self.dim)

    def radical_power(self, p: int) -> list[InvariantElement]:
        if p < 1:
            raise ValueError("p must be positive")
        return [InvariantElement(v) for v in self._radical_power(p)]

    invariant_radical_power = radical_power

    def _radical_power(self, p: int) -> tuple:
        cache = self.__dict__.setdefault("_rad_cache", {})
        if p in cache:
            return cache[p]
        if p == 1:
            basis = span_basis(kernel_basis(self.support_matrix), self.dim)
        else:
            prev = self._radical_power(p - 1)
            rad1 = self._radical_power(1)
            prods = [
                self.multiply(InvariantElement(a), InvariantElement(b)).coords for a in prev for b in rad1
            ]
            basis = span_basis(prods, self.dim)
        cache[p] = tuple(basis)
        return cache[p]

    def loewy_length(self) -> int:
        p = 1
        while self._radical_power(p):
            p += 1
        return p

    def corner_dimension(self, O: int, O2: int, p: int) -> int:
        """dim eps_O rad^p eps_{O2}."""
        eps = self.epsilon
        vecs = [
            self.multiply(self.multiply(eps[O], InvariantElement(r)), eps[O2]).coords
            for r in self._radical_power(p)
        ]
        return len(span_basis(vecs, self.dim))

    # -- comparison with the radical of kF --------------------------------------

    def basis_rows(self) -> flint.fmpz_mat:
        return flint.fmpz_mat([list(map(int, self.basis_vector(J))) for J in range(self.dim)])

    def intersect_with_kF_radical(self, m: int, method: str = "auto") -> int:
        """dim (rad^m(kF) intersected with Sigma)."""
        from .linalg import Subspace

        rad = self.kF.radical_power_basis(m, method)
        sigma = Subspace.span(self.basis_rows())
        return rad.intersection_dim(sigma)


# ---------------------------------------------------------------------------
# the descent algebra


def _integerize(v: np.ndarray) -> tuple[np.ndarray, int]:
    """Integer numerators over a common denominator."""
    den = 1
    for x in v:
        if isinstance(x, Fraction) and x.denominator != 1:
            den = den * x.denominator // math.gcd(den, x.denominator)
    if den == 1:
        return np.array([int(x) for x in v], dtype=object), 1
    return np.array([int(Fraction(x) * den) for x in v], dtype=object), den


class DescentAlgebra:
    """Solomon's descent algebra as the span of the x_J inside kW."""

    def __init__(self, system):
        self.system = system
        self.num_generators = system.num_generators
        self.dim = 1 << self.num_generators
        self.order = system.order
        self.coset_reps = tuple(system.minimal_coset_reps(J) for J in range(self.dim))

    @cached_property
    def basis(self) -> tuple[np.ndarray, ...]:
        out = []
        for J in range(self.dim):
            v = np.zeros(self.order, dtype=object)
            v[self.coset_reps[J]] = 1
            out.append(v)
        return tuple(out)

    def descent_basis(self) -> tuple[np.ndarray, ...]:
        return self.basis

    def multiply(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Product in kW (rational entries allowed as Fractions)."""
        na, da = _integerize(a)
        nb, db = _integerize(b)
        num = scatter_product(self.system.mult, na, nb)
        den = da * db
        if den == 1:
            return num
        out = np.empty(self.order, dtype=object)
        out[:] = [Fraction(int(x), den) for x in num]
        return out

    @cached_property
    def _basis_matrix(self) -> flint.fmpq_mat:
        return flint.fmpq_mat([[int(self.basis[J][w]) for J in range(self.dim)] for w in range(self.order)])

    @cached_property
    def _normal_inverse(self) -> flint.fmpq_mat:
        A = self._basis_matrix
        return (A.transpose() * A).inv() * A.transpose()

    def expand(self, v: np.ndarray) -> tuple[Fraction, ...]:
        """Coordinates of v on the x_J basis; raises if v is outside their span."""
        col = flint.fmpq_mat([[flint.fmpq(Fraction(x).numerator, Fraction(x).denominator)] for x in v])
        c = self._normal_inverse * col
        coords = tuple(Fraction(int(c[i, 0].p), int(c[i, 0].q)) for i in range(self.dim))
        back = self.from_coords(coords)
        if not all(Fraction(x) == y for x, y in zip(v, back)):
            raise VerificationError("element lies outside the descent algebra")
        return coords

    def from_coords(self, coords: Sequence[Fraction]) -> np.ndarray:
        out = np.zeros(self.order, dtype=object)
        out[:] = Fraction(0)
        for J, c in enumerate(coords):
            if c:
                out = out + self.basis[J] * Fraction(c)
        return out

    def descent_multiply(self, a, b):
        """Product of two coordinate vectors, returned in coordinates."""
        va, vb = self.from_coords(a), self.from_coords(b)
        return self.expand(self.multiply(va, vb))

    @cached_property
    def structure_constants(self) -> np.ndarray:
        """D[J, K, M]: coefficient of x_M in x_J x_K (always integral)."""
        d = self.dim
        D = np.zeros((d, d, d), dtype=np.int64)
        for J in range(d):
            for K in range(d):
                coords = self.expand(self.multiply(self.basis[J], self.basis[K]))
                for M, c in enumerate(coords):
                    if c.denominator != 1:
                        raise VerificationError("non-integral structure constant")
                    D[J, K, M] = int(c)
        return D

    # -- S / ~ -------------------------------------------------------------------

    @cached_property
    def parabolic_sets(self) -> tuple[frozenset, ...]:
        return tuple(frozenset(self.system.parabolic_subgroup(J)) for J in range(self.dim))

    def conjugate_set(self, w: int, H: frozenset) -> frozenset:
        mult, inv = self.system.mult, self.system.inverses
        return frozenset(int(mult[mult[w, h], inv[w]]) for h in H)

    def _conjugates(self, J: int) -> np.ndarray:
        """Row w holds w W_J w^{-1}, as element indices."""
        cache = self.__dict__.setdefault("_conj_cache", {})
        if J not in cache:
            mult, inv = self.system.mult, self.system.inverses
            H = np.array(sorted(self.parabolic_sets[J]), dtype=np.int64)
            cache[J] = mult[mult[:, H], inv[:, None]]
        return cache[J]

    def _mask(self, J: int) -> np.ndarray:
        m = np.zeros(self.order, dtype=bool)
        m[list(self.parabolic_sets[J])] = True
        return m

    @cached_property
    def conjugacy_classes(self) -> tuple[tuple[int, ...], ...]:
        """Classes of J under conjugacy of W_J, each sorted, ordered by least member key."""
        classes: list[list[int]] = []
        for J in range(self.dim):
            size = len(self.parabolic_sets[J])
            for cl in classes:
                if len(self.parabolic_sets[cl[0]]) == size and self._contains_conjugate(J, cl[0]):
                    cl.append(J)
                    break
            else:
                classes.append([J])
        return tuple(tuple(c) for c in classes)

    def _contains_conjugate(self, J: int, K: int) -> bool:
        """Some conjugate of W_K lies inside W_J."""
        return bool(np.any(np.all(self._mask(J)[self._conjugates(K)], axis=1)))

    def class_leq(self, a: int, b: int) -> bool:
        """[J] <= [K] in reverse inclusion: some conjugate of W_K sits inside W_J."""
        return self._contains_conjugate(self.conjugacy_classes[a][0], self.conjugacy_classes[b][0])

    def normalizer_index(self, J: int) -> int:
        H = self.parabolic_sets[J]
        n = int(np.sum(np.all(self._mask(J)[self._conjugates(J)], axis=1)))
        return n // len(H)

    def idempotents(self, vertex_of_class: Sequence[int] | None = None) -> tuple[np.ndarray, ...]:
        """eps_O = u - sum_{O' > O} eps_{O'} u with u = x_{J_O} / L_O, one per class."""
        classes = self.conjugacy_classes
        k = len(classes)
        Js = [least_subset(c, self.num_generators) for c in classes]
        sizes = [len(self.parabolic_sets[J]) for J in Js]
        # larger parabolic subgroups sit lower; process from the top (small W_J) down
        order = sorted(range(k), key=lambda a: (sizes[a], a))
        eps: dict[int, np.ndarray] = {}
        for a in order:
            u = self.basis[Js[a]] * Fraction(1, self.normalizer_index(Js[a]))
            e = u.copy()
            for b in range(k):
                if b != a and self.class_leq(a, b):
                    e = e - self.multiply(eps[b], u)
            eps[a] = e
        return tuple(eps[a] for a in range(k))

    descent_idempotents = idempotents

    def identity(self) -> np.ndarray:
        return self.basis[self.dim - 1]


def bidigare_check(inv: InvariantAlgebra, des: DescentAlgebra) -> tuple[bool, list]:
    """bx_J bx_K = sum c^M bx_M must match x_K x_J = sum c^M x_M."""
    C = inv.structure_constants
    D = des.structure_constants
    bad = []
    for J in range(inv.dim):
        for K in range(inv.dim):
            if not np.array_equal(C[J, K], D[K, J]):
                bad.append((J, K, C[J, K].tolist(), D[K, J].tolist()))
    return (not bad), bad
