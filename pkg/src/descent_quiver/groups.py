"""Finite Coxeter groups of types A and B as signed permutation groups."""

from __future__ import annotations

from collections import deque
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .linalg import QVector

SUPPORTED_TYPES = ("A", "B")


class GroupElement:
    """A signed permutation of ``[±n]``, stored by the images of ``1..n``.

    ``table[i-1] = w(i)``; negative entries mean the coordinate is negated.
    Type A elements only carry positive entries.
    """

    __slots__ = ("table", "__dict__")

    def __init__(self, table: Sequence[int]):
        table = tuple(int(t) for t in table)
        n = len(table)
        if sorted(abs(t) for t in table) != list(range(1, n + 1)):
            raise ValueError(f"not a signed permutation: {table}")
        self.table = table

    @classmethod
    def identity(cls, n: int) -> "GroupElement":
        return cls(range(1, n + 1))

    @property
    def n(self) -> int:
        return len(self.table)

    def __call__(self, i: int) -> int:
        return self.table[i - 1] if i > 0 else -self.table[-i - 1]

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return GroupElement(self(j) for j in other.table)

    def inverse(self) -> "GroupElement":
        inv = [0] * self.n
        for i, t in enumerate(self.table, start=1):
            inv[abs(t) - 1] = i if t > 0 else -i
        return GroupElement(inv)

    def __eq__(self, other):
        return isinstance(other, GroupElement) and self.table == other.table

    def __lt__(self, other):
        return self.table < other.table

    def __hash__(self):
        return hash(self.table)

    def __repr__(self):
        return f"GroupElement({self.table})"

    @cached_property
    def matrix(self) -> tuple[tuple[int, ...], ...]:
        n = self.n
        m = [[0] * n for _ in range(n)]
        for c, t in enumerate(self.table):
            m[abs(t) - 1][c] = 1 if t > 0 else -1
        return tuple(tuple(r) for r in m)

    def act(self, v: Sequence) -> QVector:
        if len(v) != self.n:
            raise ValueError("dimension mismatch")
        out = [Fraction(0)] * self.n
        for i, t in enumerate(self.table):
            x = Fraction(v[i])
            out[abs(t) - 1] = x if t > 0 else -x
        return tuple(out)

    def act_on_set(self, s: Iterable[int]) -> frozenset:
        return frozenset(self(i) for i in s)

    def determinant(self) -> int:
        """Sign of the permutation part times the number of negations."""
        perm = [abs(t) - 1 for t in self.table]
        sign = -1 if sum(1 for t in self.table if t < 0) % 2 else 1
        seen = [False] * self.n
        for i in range(self.n):
            if not seen[i]:
                j, length = i, 0
                while not seen[j]:
                    seen[j] = True
                    j = perm[j]
                    length += 1
                if length % 2 == 0:
                    sign = -sign
        return sign


def act(w: GroupElement, v: Sequence) -> QVector:
    return w.act(v)


def _transposition(n: int, i: int, j: int) -> GroupElement:
    t = list(range(1, n + 1))
    t[i - 1], t[j - 1] = j, i
    return GroupElement(t)


def _sign_change(n: int, i: int) -> GroupElement:
    t = list(range(1, n + 1))
    t[i - 1] = -i
    return GroupElement(t)


class CoxeterSystem:
    """A finite Coxeter system with its elements fully enumerated.

    Elements are kept in lexicographic order of their tables, so integer
    indices into :attr:`elements` are stable across runs.
    """

    def __init__(self, type_label: str, rank: int, generators: Sequence[GroupElement]):
        self.type = type_label
        self.rank = rank
        self.n = rank
        self.generators = tuple(generators)
        self.base_point: QVector = tuple(Fraction(i) for i in range(1, rank + 1))
        self.elements = tuple(sorted(self._closure(self.generators)))
        self.index = {w: i for i, w in enumerate(self.elements)}
        self.identity = self.index[GroupElement.identity(rank)]
        self.lengths = self._bfs_lengths()

    def __repr__(self):
        return f"CoxeterSystem({self.type!r}, {self.rank})"

    def __len__(self):
        return len(self.elements)

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def num_generators(self) -> int:
        return len(self.generators)

    def _closure(self, gens) -> set:
        start = GroupElement.identity(self.n)
        seen = {start}
        queue = deque([start])
        while queue:
            w = queue.popleft()
            for s in gens:
                u = w * s
                if u not in seen:
                    seen.add(u)
                    queue.append(u)
        return seen

    def _bfs_lengths(self) -> tuple[int, ...]:
        lengths = [-1] * self.order
        lengths[self.identity] = 0
        queue = deque([self.identity])
        gens = [self.index[s] for s in self.generators]
        mult = self.mult
        while queue:
            i = queue.popleft()
            for s in gens:
                j = int(mult[i, s])
                if lengths[j] < 0:
                    lengths[j] = lengths[i] + 1
                    queue.append(j)
        return tuple(lengths)

    @cached_property
    def _tables(self) -> np.ndarray:
        return np.array([w.table for w in self.elements], dtype=np.int64)

    def _codes(self, tables: np.ndarray) -> np.ndarray:
        base = 2 * self.n + 1
        powers = base ** np.arange(self.n - 1, -1, -1, dtype=np.int64)
        return (tables + self.n) @ powers

    @cached_property
    def mult(self) -> np.ndarray:
        """``mult[i, j]`` is the index of ``elements[i] * elements[j]``."""
        tabs = self._tables
        codes = self._codes(tabs)
        idx = np.abs(tabs) - 1
        sgn = np.sign(tabs)
        out = np.empty((self.order, self.order), dtype=np.int32)
        for i in range(self.order):
            composed = tabs[i][idx] * sgn
            pos = np.searchsorted(codes, self._codes(composed))
            out[i] = pos
        return out

    @cached_property
    def inverses(self) -> np.ndarray:
        return np.array([self.index[w.inverse()] for w in self.elements], dtype=np.int32)

    def element_index(self, w: GroupElement) -> int:
        return self.index[w]

    def length(self, w) -> int:
        i = w if isinstance(w, (int, np.integer)) else self.index[w]
        return self.lengths[i]

    def _subset(self, J) -> tuple[int, ...]:
        if isinstance(J, (int, np.integer)) and not isinstance(J, bool):
            return tuple(i for i in range(self.num_generators) if (J >> i) & 1)
        J = tuple(sorted(set(J)))
        if any(j < 0 or j >= self.num_generators for j in J):
            raise ValueError(f"generator index out of range: {J}")
        return J

    def parabolic_subgroup(self, J) -> list[int]:
        """Indices of the elements of the subgroup generated by ``J``.

        ``J`` is a bitmask or an iterable of generator indices.
        """
        J = self._subset(J)
        gens = [self.index[self.generators[j]] for j in J]
        seen = {self.identity}
        queue = deque([self.identity])
        while queue:
            i = queue.popleft()
            for s in gens:
                k = int(self.mult[i, s])
                if k not in seen:
                    seen.add(k)
                    queue.append(k)
        return sorted(seen)

    def minimal_coset_reps(self, J) -> list[int]:
        """The set X_J: one minimal-length element from each coset w W_J."""
        sub = np.array(self.parabolic_subgroup(J), dtype=np.int64)
        assigned = np.full(self.order, -1)
        reps = []
        for w in range(self.order):
            if assigned[w] >= 0:
                continue
            coset = self.mult[w, sub]
            assigned[coset] = w
            lens = [self.lengths[c] for c in coset]
            best = min(lens)
            winners = [int(c) for c, l in zip(coset, lens) if l == best]
            if len(winners) != 1:
                raise AssertionError("coset without a unique minimal element")
            reps.append(winners[0])
        return sorted(reps)

    def reflection(self, normal: Sequence[int]) -> int:
        """Index of the reflection fixing the hyperplane orthogonal to ``normal``."""
        a = [Fraction(x) for x in normal]
        aa = sum(x * x for x in a)
        table = []
        for k in range(self.n):
            e = [Fraction(0)] * self.n
            e[k] = Fraction(1)
            dot = a[k]
            img = [e[i] - 2 * dot / aa * a[i] for i in range(self.n)]
            nz = [i for i, x in enumerate(img) if x != 0]
            if len(nz) != 1 or abs(img[nz[0]]) != 1:
                raise ValueError("normal does not define a signed permutation")
            table.append((nz[0] + 1) * (1 if img[nz[0]] > 0 else -1))
        return self.index[GroupElement(table)]

    @cached_property
    def central_element(self) -> int | None:
        """Index of v -> -v when it belongs to W, else None."""
        w = GroupElement([-i for i in range(1, self.n + 1)])
        return self.index.get(w)


def build_system(type_label: str, rank: int) -> CoxeterSystem:
    """Enumerate W for ``type_label`` in {"A", "B"}.

    Type A of rank n is the symmetric group S_n permuting coordinates of R^n;
    its simple generators are the adjacent transpositions (i i+1).  Type B of
    rank n uses the sign change of coordinate 1 followed by (i i+1).
    """
    type_label = str(type_label).upper()
    if type_label not in SUPPORTED_TYPES:
        raise ValueError(f"unsupported Coxeter type {type_label!r}")
    if rank < 1:
        raise ValueError("rank must be at least 1")
    gens = []
    if type_label == "B":
        gens.append(_sign_change(rank, 1))
    gens.extend(_transposition(rank, i, i + 1) for i in range(1, rank))
    return CoxeterSystem(type_label, rank, gens)
