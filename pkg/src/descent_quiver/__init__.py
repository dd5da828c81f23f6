"""Face semigroup algebras of reflection arrangements, descent algebras and their quivers."""

from .algebra import AlgebraElement, FaceAlgebra, IdempotentSystem, VerificationError
from .faces import Arrangement, Face, SetComposition, SignedComposition
from .groups import CoxeterSystem, GroupElement, build_system
from .invariant import DescentAlgebra, InvariantAlgebra, InvariantElement, bidigare_check
from .lattice import Flat, Lattice, OrbitPoset
from .quiver import (
    Orientation,
    PathElement,
    PhiMap,
    QuiverGraph,
    closed_form_quiver,
    closed_form_quiver_A,
    closed_form_quiver_B,
    quiver_of_invariant_numeric,
    quiver_of_kF_numeric,
    structural_checks,
)
from .verify import run_checks
from .workspace import Workspace

__all__ = [
    "AlgebraElement",
    "Arrangement",
    "CoxeterSystem",
    "DescentAlgebra",
    "Face",
    "FaceAlgebra",
    "Flat",
    "GroupElement",
    "IdempotentSystem",
    "InvariantAlgebra",
    "InvariantElement",
    "Lattice",
    "OrbitPoset",
    "Orientation",
    "PathElement",
    "PhiMap",
    "QuiverGraph",
    "SetComposition",
    "SignedComposition",
    "VerificationError",
    "Workspace",
    "bidigare_check",
    "build_system",
    "closed_form_quiver",
    "closed_form_quiver_A",
    "closed_form_quiver_B",
    "quiver_of_invariant_numeric",
    "quiver_of_kF_numeric",
    "run_checks",
    "structural_checks",
]
