"""Lazily built bundle of every structure attached to one Coxeter system."""

from __future__ import annotations

import logging
from functools import cached_property

from .algebra import FaceAlgebra
from .faces import Arrangement
from .groups import build_system
from .invariant import DescentAlgebra, InvariantAlgebra
from .lattice import Lattice, OrbitPoset
from .quiver import Orientation, PhiMap

log = logging.getLogger(__name__)


class Workspace:
    def __init__(self, type_label: str, rank: int):
        self.type = str(type_label).upper()
        self.rank = int(rank)

    def __repr__(self):
        return f"Workspace({self.type}{self.rank})"

    @cached_property
    def system(self):
        log.info("enumerating %s%d", self.type, self.rank)
        return build_system(self.type, self.rank)

    @cached_property
    def arrangement(self) -> Arrangement:
        log.info("enumerating faces of %s%d", self.type, self.rank)
        return Arrangement(self.system)

    @cached_property
    def lattice(self) -> Lattice:
        return Lattice(self.arrangement)

    @cached_property
    def orbit_poset(self) -> OrbitPoset:
        return OrbitPoset(self.lattice)

    @cached_property
    def kF(self) -> FaceAlgebra:
        return FaceAlgebra(self.arrangement, self.lattice)

    @cached_property
    def invariant(self) -> InvariantAlgebra:
        return InvariantAlgebra(self.kF, self.orbit_poset)

    @cached_property
    def descent(self) -> DescentAlgebra:
        return DescentAlgebra(self.system)

    @cached_property
    def orientation(self) -> Orientation:
        return Orientation(self.kF)

    def phi(self, system: str = "first") -> PhiMap:
        cache = self.__dict__.setdefault("_phi", {})
        if system not in cache:
            cache[system] = PhiMap(self.kF, self.kF.idempotents(system), self.orientation)
        return cache[system]
