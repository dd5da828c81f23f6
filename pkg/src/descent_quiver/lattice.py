"""Intersection lattice of the arrangement and its orbit poset under W."""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .faces import Arrangement
from .linalg import QVector, kernel_basis


@dataclass(frozen=True)
class Flat:
    index: int
    zeros: frozenset
    basis: tuple[QVector, ...]
    dim: int
    rank: int

    @property
    def key(self) -> tuple[int, ...]:
        return tuple(sorted(self.zeros))


def partition_label(parts) -> str:
    """``(3,2,1,1)`` -> ``"3211"``; the empty partition renders as ``"0"``."""
    parts = tuple(parts)
    if not parts:
        return "0"
    if max(parts) >= 10:
        return ",".join(map(str, parts))
    return "".join(map(str, parts))


def parse_partition_label(label: str) -> tuple[int, ...]:
    if label == "0":
        return ()
    if "," in label:
        return tuple(int(x) for x in label.split(","))
    return tuple(int(c) for c in label)


def integer_partitions(n: int, largest: int | None = None):
    """Partitions of n as weakly decreasing tuples, in reverse lexicographic order."""
    if largest is None:
        largest = n
    if n == 0:
        yield ()
        return
    for first in range(min(n, largest), 0, -1):
        for rest in integer_partitions(n - first, first):
            yield (first,) + rest


class Lattice:
    """Flats ordered by inclusion, built from the supports of the faces.

    Flats are indexed by increasing dimension, then by zero set, so index 0 is
    the minimum and the last index is the ambient space V.
    """

    def __init__(self, arrangement: Arrangement):
        self.arrangement = arrangement
        masks = sorted(set(arrangement.zero_masks))
        normals = [h.normal for h in arrangement.hyperplanes]
        info = []
        for m in masks:
            zeros = frozenset(k for k in range(arrangement.num_hyperplanes) if (m >> k) & 1)
            rows = [normals[k] for k in sorted(zeros)]
            basis = tuple(kernel_basis(rows)) if rows else tuple(
                tuple(1 if i == j else 0 for j in range(arrangement.n)) for i in range(arrangement.n)
            )
            info.append((len(basis), tuple(sorted(zeros)), m, zeros, basis))
        info.sort(key=lambda t: (t[0], t[1]))
        min_dim = info[0][0]
        self.flats = tuple(
            Flat(i, zeros, tuple(tuple(x) for x in basis), d, d - min_dim)
            for i, (d, _, _, zeros, basis) in enumerate(info)
        )
        self._by_mask = {t[2]: i for i, t in enumerate(info)}
        self._by_zeros = {f.zeros: f.index for f in self.flats}
        self.support = np.array([self._by_mask[m] for m in arrangement.zero_masks], dtype=np.int32)
        self.bottom = 0
        self.top = len(self.flats) - 1
        self._check_closed()

    def __len__(self):
        return len(self.flats)

    def __repr__(self):
        return f"Lattice({len(self.flats)} flats)"

    def _check_closed(self):
        normals = self.arrangement.hyperplanes
        for f in self.flats:
            for h in normals:
                inside = all(sum(a * b for a, b in zip(h.normal, v)) == 0 for v in f.basis)
                if inside != (h.index in f.zeros):
                    raise AssertionError("flat zero set is not saturated")

    def flat_of_zeros(self, zeros) -> int:
        return self._by_zeros[frozenset(zeros)]

    def supp(self, x) -> int:
        return int(self.support[self.arrangement._idx(x)])

    @cached_property
    def order(self) -> np.ndarray:
        """``order[Y, X]`` is True when Y <= X (Y is a subspace of X)."""
        L = len(self.flats)
        out = np.zeros((L, L), dtype=bool)
        for y in self.flats:
            for x in self.flats:
                out[y.index, x.index] = y.zeros >= x.zeros
        return out

    def leq(self, y, x) -> bool:
        return bool(self.order[int(y), int(x)])

    @cached_property
    def covers(self) -> tuple[tuple[int, int], ...]:
        """Pairs (Y, X) with Y covered by X."""
        out = []
        for y in self.flats:
            for x in self.flats:
                if y.index != x.index and self.order[y.index, x.index] and x.rank == y.rank + 1:
                    out.append((y.index, x.index))
        return tuple(out)

    @cached_property
    def faces_by_flat(self) -> tuple[np.ndarray, ...]:
        return tuple(np.flatnonzero(self.support == i) for i in range(len(self.flats)))

    def above(self, x) -> list[int]:
        return [y for y in range(len(self.flats)) if y != x and self.order[x, y]]

    @cached_property
    def mobius_table(self) -> np.ndarray:
        """``mobius_table[Y, X] = mu(Y, X)``; zero when Y is not below X."""
        L = len(self.flats)
        mu = np.zeros((L, L), dtype=np.int64)
        # flats are sorted by rank, so every Z with Y <= Z < X precedes X
        for y in range(L):
            mu[y, y] = 1
            for x in range(y + 1, L):
                if self.order[y, x]:
                    between = self.order[y, :x] & self.order[:x, x]
                    mu[y, x] = -int(mu[y, :x][between].sum())
        return mu

    def mobius(self, y, x) -> int:
        if not self.order[int(y), int(x)]:
            raise ValueError("mobius(Y, X) needs Y <= X")
        return int(self.mobius_table[int(y), int(x)])

    def join(self, x, y) -> int:
        """Smallest flat containing both, read off a face product."""
        reps = self.faces_by_flat
        return int(self.support[self.arrangement.table[reps[x][0], reps[y][0]]])

    def meet(self, x, y) -> int:
        """Subspace intersection: the largest flat below both."""
        below = np.flatnonzero(self.order[:, x] & self.order[:, y])
        best = max(below, key=lambda z: self.flats[z].rank)
        if not all(self.order[z, best] for z in below):
            raise AssertionError("meet is not unique")
        return int(best)

    @cached_property
    def flat_action(self) -> np.ndarray:
        """``flat_action[w, X]`` is the index of w(X)."""
        reps = np.array([r[0] for r in self.faces_by_flat])
        return self.support[self.arrangement.face_action[:, reps]]

    def generic_point(self, x) -> QVector:
        """A point of X lying on no other hyperplane (a face witness)."""
        return self.arrangement.faces[int(self.faces_by_flat[x][0])].witness

    # -- combinatorial labels -------------------------------------------------

    def set_partition(self, x):
        """Type A: blocks of equal coordinates.  Type B: (Z, signed blocks)."""
        v = self.generic_point(x)
        n = self.arrangement.n
        if self.arrangement.type == "A":
            groups: dict = {}
            for i in range(n):
                groups.setdefault(v[i], set()).add(i + 1)
            return tuple(sorted((frozenset(b) for b in groups.values()), key=min))
        zero = frozenset(s * (i + 1) for i in range(n) if v[i] == 0 for s in (1, -1))
        groups = {}
        for i in range(n):
            if v[i] != 0:
                groups.setdefault(abs(v[i]), set()).add((i + 1) if v[i] > 0 else -(i + 1))
        blocks = []
        for b in groups.values():
            # normalize so the smallest absolute entry is positive
            lead = min(b, key=abs)
            blocks.append(frozenset(b) if lead > 0 else frozenset(-j for j in b))
        return zero, tuple(sorted(blocks, key=lambda b: min(abs(j) for j in b)))

    def partition(self, x) -> tuple[int, ...]:
        sp = self.set_partition(x)
        blocks = sp if self.arrangement.type == "A" else sp[1]
        return tuple(sorted((len(b) for b in blocks), reverse=True))

    def to_json(self) -> str:
        data = {
            "flats": [list(f.key) for f in self.flats],
            "dims": [f.dim for f in self.flats],
            "covers": [list(c) for c in self.covers],
        }
        return json.dumps(data, sort_keys=True)

    def to_dot(self) -> str:
        lines = ["digraph lattice {"]
        for f in self.flats:
            lines.append(f'  f{f.index} [label="{{{",".join(map(str, f.key))}}}"];')
        for y, x in self.covers:
            lines.append(f"  f{x} -> f{y};")
        lines.append("}")
        return "\n".join(lines) + "\n"


class OrbitPoset:
    """W-orbits of flats, ordered by O_X <= O_Y iff w(X) <= Y for some w."""

    def __init__(self, lattice: Lattice):
        self.lattice = lattice
        act = lattice.flat_action
        seen: dict[int, int] = {}
        orbits = []
        for x in range(len(lattice)):
            if x in seen:
                continue
            members = sorted(set(int(i) for i in act[:, x]))
            orbits.append(members)
            for m in members:
                seen[m] = -1
        # representative: lexicographically least zero set
        reps = [min(o, key=lambda i: lattice.flats[i].key) for o in orbits]
        order = sorted(range(len(orbits)), key=lambda k: (lattice.flats[reps[k]].rank, lattice.flats[reps[k]].key))
        self.orbits = tuple(tuple(orbits[k]) for k in order)
        self.representatives = tuple(reps[k] for k in order)
        self.orbit_of = np.empty(len(lattice), dtype=np.int32)
        for k, o in enumerate(self.orbits):
            self.orbit_of[list(o)] = k
        self.ranks = tuple(lattice.flats[r].rank for r in self.representatives)
        self.partitions = tuple(lattice.partition(r) for r in self.representatives)
        self.labels = tuple(partition_label(p) for p in self.partitions)
        if len(set(self.partitions)) != len(self.partitions):
            raise AssertionError("partition labels are not injective on orbits")
        self._by_label = {lab: k for k, lab in enumerate(self.labels)}

    def __len__(self):
        return len(self.orbits)

    def index_of_label(self, label: str) -> int:
        return self._by_label[label]

    @property
    def top(self) -> int:
        return int(self.orbit_of[self.lattice.top])

    @property
    def bottom(self) -> int:
        return int(self.orbit_of[self.lattice.bottom])

    @cached_property
    def order(self) -> np.ndarray:
        """``order[a, b]`` is True when O_a <= O_b."""
        k = len(self.orbits)
        out = np.zeros((k, k), dtype=bool)
        lo = self.lattice.order
        for a, oa in enumerate(self.orbits):
            for b, ob in enumerate(self.orbits):
                out[a, b] = bool(lo[np.ix_(list(oa), list(ob))].any())
        return out

    @cached_property
    def covers(self) -> tuple[tuple[int, int], ...]:
        out = []
        k = len(self.orbits)
        for a in range(k):
            for b in range(k):
                if a == b or not self.order[a, b]:
                    continue
                if not any(self.order[a, c] and self.order[c, b] for c in range(k) if c not in (a, b)):
                    out.append((a, b))
        return tuple(out)

    def to_json(self) -> str:
        data = {
            "orbits": list(self.labels),
            "ranks": list(self.ranks),
            "covers": [[self.labels[a], self.labels[b]] for a, b in self.covers],
        }
        return json.dumps(data, sort_keys=True)

    def to_dot(self) -> str:
        lines = ["digraph orbits {"]
        for lab in self.labels:
            lines.append(f'  "{lab}";')
        for a, b in self.covers:
            lines.append(f'  "{self.labels[b]}" -> "{self.labels[a]}";')
        lines.append("}")
        return "\n".join(lines) + "\n"


def build_lattice(arrangement: Arrangement) -> Lattice:
    return Lattice(arrangement)


def build_orbit_poset(lattice: Lattice) -> OrbitPoset:
    return OrbitPoset(lattice)
