"""Faces of the reflection arrangement of a type A or B Coxeter group.

A face is stored by its sign sequence over the hyperplanes together with a
rational point in its relative interior.  Sign codes are ``0`` for ``0``,
``1`` for ``+`` and ``2`` for ``-``, which makes the lexicographic order on
sign sequences (``0 < + < -``) agree with the base-3 integer code used to
index faces.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

import numpy as np

from .groups import CoxeterSystem
from .linalg import QVector, rank as qrank

SIGN_CHARS = "0+-"


def sign_of(x) -> int:
    return 0 if x == 0 else (1 if x > 0 else 2)


def format_fraction(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_fraction(s: str) -> Fraction:
    return Fraction(s)


@dataclass(frozen=True)
class Hyperplane:
    index: int
    normal: tuple[int, ...]

    def side(self, v: Sequence) -> int:
        return sign_of(sum(Fraction(a) * Fraction(b) for a, b in zip(self.normal, v)))


def hyperplanes_for(type_label: str, n: int) -> tuple[Hyperplane, ...]:
    """Normals: A uses e_i - e_j (i<j); B uses e_i, then e_i - e_j, then e_i + e_j."""
    normals = []

    def unit(i, s=1):
        v = [0] * n
        v[i] = s
        return v

    if type_label == "B":
        normals.extend(tuple(unit(i)) for i in range(n))
    for i in range(n):
        for j in range(i + 1, n):
            v = unit(i)
            v[j] = -1
            normals.append(tuple(v))
    if type_label == "B":
        for i in range(n):
            for j in range(i + 1, n):
                v = unit(i)
                v[j] = 1
                normals.append(tuple(v))
    return tuple(Hyperplane(k, nv) for k, nv in enumerate(normals))


@dataclass(frozen=True)
class Face:
    index: int
    signs: str
    witness: QVector
    dim: int

    @property
    def zeros(self) -> frozenset:
        return frozenset(i for i, c in enumerate(self.signs) if c == "0")

    def to_json(self) -> dict:
        return {"signs": self.signs, "witness": [format_fraction(x) for x in self.witness]}


def face_from_json(data: dict | str) -> tuple[str, QVector]:
    if isinstance(data, str):
        data = json.loads(data)
    return data["signs"], tuple(parse_fraction(s) for s in data["witness"])


# ---------------------------------------------------------------------------
# Combinatorial codecs


@dataclass(frozen=True)
class SetComposition:
    """Ordered set partition of [n] (a type A face)."""

    blocks: tuple[frozenset, ...]

    def __post_init__(self):
        blocks = tuple(frozenset(b) for b in self.blocks)
        object.__setattr__(self, "blocks", blocks)
        seen: set = set()
        for b in blocks:
            if not b:
                raise ValueError("empty block in set composition")
            if seen & b:
                raise ValueError("blocks are not disjoint")
            seen |= b
        if seen != set(range(1, len(seen) + 1)):
            raise ValueError("blocks do not cover [n]")

    @property
    def n(self) -> int:
        return sum(len(b) for b in self.blocks)

    def __str__(self):
        return "(" + ", ".join("{" + ",".join(map(str, sorted(b))) + "}" for b in self.blocks) + ")"


@dataclass(frozen=True)
class SignedComposition:
    """Zero block Z = -Z plus ordered blocks B_1..B_k with B_i and -B_i disjoint."""

    zero: frozenset
    blocks: tuple[frozenset, ...]

    def __post_init__(self):
        zero = frozenset(self.zero)
        blocks = tuple(frozenset(b) for b in self.blocks)
        object.__setattr__(self, "zero", zero)
        object.__setattr__(self, "blocks", blocks)
        if any(-i not in zero for i in zero) or 0 in zero:
            raise ValueError("zero block must be closed under negation")
        seen = set(zero)
        for b in blocks:
            if not b or 0 in b:
                raise ValueError("empty or invalid block")
            neg = {-i for i in b}
            if b & neg:
                raise ValueError("block meets its negative")
            if seen & (b | neg):
                raise ValueError("blocks overlap")
            seen |= b | neg
        m = len(seen) // 2
        if seen != {s * i for i in range(1, m + 1) for s in (1, -1)}:
            raise ValueError("blocks do not cover [±n]")

    @property
    def n(self) -> int:
        return len(self.zero) // 2 + sum(len(b) for b in self.blocks)

    def __str__(self):
        z = ",".join(map(str, sorted(self.zero)))
        bl = ", ".join("{" + ",".join(map(str, sorted(b))) + "}" for b in self.blocks)
        return f"Z={{{z}}}; ({bl})"


class Arrangement:
    """Reflection arrangement of ``system`` with its enumerated face semigroup."""

    def __init__(self, system: CoxeterSystem):
        self.system = system
        self.type = system.type
        self.n = system.n
        self.hyperplanes = hyperplanes_for(system.type, system.n)
        self.num_hyperplanes = len(self.hyperplanes)
        self._normals = np.array([h.normal for h in self.hyperplanes], dtype=np.int64).reshape(
            self.num_hyperplanes, self.n
        )
        self._powers = 3 ** np.arange(self.num_hyperplanes - 1, -1, -1, dtype=np.int64)
        self._check_base_point()
        self._enumerate()

    def __repr__(self):
        return f"Arrangement({self.type}{self.n}, faces={len(self.faces)})"

    # -- construction -------------------------------------------------------

    def _check_base_point(self):
        p0 = self.system.base_point
        if any(h.side(p0) == 0 for h in self.hyperplanes):
            raise AssertionError("base point lies on a hyperplane")

    def signs_of(self, v: Sequence) -> str:
        return "".join(SIGN_CHARS[h.side(v)] for h in self.hyperplanes)

    def _sign_codes(self, v: Sequence) -> np.ndarray:
        # integer-scaled evaluation; only signs matter
        den = 1
        for x in v:
            den = den * Fraction(x).denominator // np.gcd(den, Fraction(x).denominator)
        iv = np.array([int(Fraction(x) * den) for x in v], dtype=object)
        vals = self._normals.astype(object) @ iv
        return np.array([sign_of(x) for x in vals], dtype=np.int8)

    def fundamental_witness(self, J) -> QVector:
        """Average of the W_J-orbit of the base point."""
        sub = self.system.parabolic_subgroup(J)
        p0 = self.system.base_point
        total = [Fraction(0)] * self.n
        for i in sub:
            img = self.system.elements[i].act(p0)
            total = [a + b for a, b in zip(total, img)]
        return tuple(x / len(sub) for x in total)

    def _enumerate(self):
        system = self.system
        s = system.num_generators
        found: dict[int, QVector] = {}
        self._fundamental_codes = []
        for J in range(1 << s):
            wit = self.fundamental_witness(J)
            base_code = int(self._sign_codes(wit).astype(np.int64) @ self._powers)
            self._fundamental_codes.append(base_code)
            for w in system.elements:
                img = w.act(wit)
                code = int(self._sign_codes(img).astype(np.int64) @ self._powers)
                if code not in found:
                    found[code] = img
        codes = sorted(found)
        self.codes = np.array(codes, dtype=np.int64)
        self.sign_array = np.array(
            [[(c // int(p)) % 3 for p in self._powers] for c in codes], dtype=np.int8
        ).reshape(len(codes), self.num_hyperplanes)
        zero_masks = []
        for row in self.sign_array:
            m = 0
            for k, c in enumerate(row):
                if c == 0:
                    m |= 1 << k
            zero_masks.append(m)
        self.zero_masks = tuple(zero_masks)
        dims = {m: self._flat_dim(m) for m in set(zero_masks)}
        self.faces = tuple(
            Face(i, "".join(SIGN_CHARS[c] for c in self.sign_array[i]), found[code], dims[zero_masks[i]])
            for i, code in enumerate(codes)
        )
        self._by_signs = {f.signs: f.index for f in self.faces}
        self.fundamental_faces = tuple(self._index_of_code(c) for c in self._fundamental_codes)

    def _flat_dim(self, mask: int) -> int:
        rows = [self.hyperplanes[k].normal for k in range(self.num_hyperplanes) if (mask >> k) & 1]
        if not rows:
            return self.n
        return self.n - qrank(rows)

    def _index_of_code(self, code: int) -> int:
        i = int(np.searchsorted(self.codes, code))
        if i >= len(self.codes) or self.codes[i] != code:
            raise KeyError("sign vector not in the enumerated face set")
        return i

    # -- lookups ------------------------------------------------------------

    def __len__(self):
        return len(self.faces)

    def face(self, i) -> Face:
        return self.faces[int(i)]

    def index_of(self, signs: str) -> int:
        try:
            return self._by_signs[signs]
        except KeyError:
            raise KeyError(f"no face with sign vector {signs}") from None

    def face_at(self, v: Sequence) -> Face:
        return self.faces[self.index_of(self.signs_of(v))]

    def fundamental_face(self, J) -> Face:
        """The face c_J of the fundamental chamber fixed by the generators in J."""
        if not isinstance(J, (int, np.integer)):
            J = sum(1 << j for j in set(J))
        return self.faces[self.fundamental_faces[int(J)]]

    @cached_property
    def identity_face(self) -> int:
        return self.index_of("0" * self.num_hyperplanes)

    @cached_property
    def chambers(self) -> tuple[int, ...]:
        return tuple(f.index for f in self.faces if "0" not in f.signs)

    # -- semigroup structure --------------------------------------------------

    @cached_property
    def table(self) -> np.ndarray:
        """``table[x, y]`` is the index of the product face xy.

        For a face x with zero set Z, code(xy) = code(x) + code of y restricted
        to Z, so one masked code vector per zero set suffices.
        """
        N = len(self.faces)
        out = np.empty((N, N), dtype=np.int32)
        masked: dict[int, np.ndarray] = {}
        for x in range(N):
            m = self.zero_masks[x]
            if m not in masked:
                sel = np.array([(m >> k) & 1 for k in range(self.num_hyperplanes)], dtype=np.int64)
                masked[m] = self.sign_array.astype(np.int64) @ (self._powers * sel)
            target = self.codes[x] + masked[m]
            pos = np.searchsorted(self.codes, target)
            if not np.array_equal(self.codes[pos], target):
                raise AssertionError("product left the enumerated face set")
            out[x] = pos
        return out

    def product(self, x, y) -> Face:
        xi, yi = self._idx(x), self._idx(y)
        return self.faces[int(self.table[xi, yi])]

    def product_by_signs(self, x, y) -> Face:
        """Sign-rule product computed directly from the two sign strings."""
        sx, sy = self.faces[self._idx(x)].signs, self.faces[self._idx(y)].signs
        return self.faces[self.index_of("".join(a if a != "0" else b for a, b in zip(sx, sy)))]

    def product_witness(self, x, y) -> QVector:
        """A point of xy: move from x's witness a small step toward y's witness."""
        fx, fy = self.faces[self._idx(x)], self.faces[self._idx(y)]
        delta = [b - a for a, b in zip(fx.witness, fy.witness)]
        t = Fraction(1, 2)
        while True:
            p = tuple(a + t * d for a, d in zip(fx.witness, delta))
            ok = all(
                h.side(p) == SIGN_CHARS.index(c)
                for h, c in zip(self.hyperplanes, fx.signs)
                if c != "0"
            )
            if ok:
                return p
            t /= 2

    def leq(self, x, y) -> bool:
        xi, yi = self._idx(x), self._idx(y)
        return int(self.table[xi, yi]) == yi

    @cached_property
    def face_order(self) -> np.ndarray:
        """Boolean matrix ``le[x, y]`` meaning x <= y."""
        return self.table == np.arange(len(self.faces), dtype=np.int32)[None, :]

    def _idx(self, x) -> int:
        return x.index if isinstance(x, Face) else int(x)

    # -- group action ---------------------------------------------------------

    @cached_property
    def hyperplane_action(self) -> tuple[np.ndarray, np.ndarray]:
        """(perm, chi) with w(normal_i) = chi[w, i] * normal_{perm[w, i]}."""
        lookup = {h.normal: h.index for h in self.hyperplanes}
        W = self.system.elements
        perm = np.empty((len(W), self.num_hyperplanes), dtype=np.int32)
        chi = np.empty((len(W), self.num_hyperplanes), dtype=np.int8)
        for wi, w in enumerate(W):
            for h in self.hyperplanes:
                img = tuple(int(x) for x in w.act(h.normal))
                if img in lookup:
                    perm[wi, h.index], chi[wi, h.index] = lookup[img], 1
                else:
                    neg = tuple(-x for x in img)
                    perm[wi, h.index], chi[wi, h.index] = lookup[neg], -1
        return perm, chi

    @cached_property
    def face_action(self) -> np.ndarray:
        """``face_action[w, x]`` is the index of w(x)."""
        perm, chi = self.hyperplane_action
        W = len(self.system.elements)
        N = len(self.faces)
        out = np.empty((W, N), dtype=np.int32)
        flip = np.array([0, 2, 1], dtype=np.int8)
        for w in range(W):
            new = np.empty_like(self.sign_array)
            cols = self.sign_array
            flipped = np.where(chi[w][None, :] < 0, flip[cols], cols)
            new[:, perm[w]] = flipped
            out[w] = np.searchsorted(self.codes, new.astype(np.int64) @ self._powers)
        return out

    def act_on_face(self, w, x) -> Face:
        wi = w if isinstance(w, (int, np.integer)) else self.system.index[w]
        return self.faces[int(self.face_action[wi, self._idx(x)])]

    def face_orbit(self, x) -> np.ndarray:
        return np.unique(self.face_action[:, self._idx(x)])

    # -- codecs ---------------------------------------------------------------

    def encode(self, x):
        return encode_face(self, x)

    def decode(self, comp) -> Face:
        return decode_face(self, comp)


def _value_blocks(values: dict) -> list[frozenset]:
    levels = sorted(set(values.values()))
    return [frozenset(k for k, v in values.items() if v == lev) for lev in levels]


def encode_face(arr: Arrangement, x):
    f = arr.faces[arr._idx(x)]
    if arr.type == "A":
        return SetComposition(tuple(_value_blocks({i + 1: v for i, v in enumerate(f.witness)})))
    zero = frozenset(s * (i + 1) for i, v in enumerate(f.witness) if v == 0 for s in (1, -1))
    signed = {}
    for i, v in enumerate(f.witness):
        if v != 0:
            signed[(i + 1) if v > 0 else -(i + 1)] = abs(v)
    return SignedComposition(zero, tuple(_value_blocks(signed)))


def decode_face(arr: Arrangement, comp) -> Face:
    n = arr.n
    if arr.type == "A":
        if not isinstance(comp, SetComposition):
            comp = SetComposition(tuple(comp))
        if comp.n != n:
            raise ValueError(f"composition of [{comp.n}] given for n = {n}")
        v = [Fraction(0)] * n
        for pos, block in enumerate(comp.blocks, start=1):
            for i in block:
                v[i - 1] = Fraction(pos)
        return arr.face_at(v)
    if not isinstance(comp, SignedComposition):
        zero, blocks = comp
        comp = SignedComposition(zero, tuple(blocks))
    if comp.n != n:
        raise ValueError(f"signed composition of [±{comp.n}] given for n = {n}")
    v = [Fraction(0)] * n
    for pos, block in enumerate(comp.blocks, start=1):
        for j in block:
            v[abs(j) - 1] = Fraction(pos if j > 0 else -pos)
    return arr.face_at(v)


def composition_product(b: SetComposition, c: SetComposition) -> SetComposition:
    """Type A product grouped by the blocks of the left factor."""
    blocks = [bi & cj for bi in b.blocks for cj in c.blocks]
    return SetComposition(tuple(x for x in blocks if x))
