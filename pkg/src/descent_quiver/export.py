"""Serialization of faces, lattices, idempotents, structure constants and quivers."""

from __future__ import annotations

import json

from .faces import format_fraction
from .quiver import QuiverGraph


def _dump(data) -> str:
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def flat_key(lattice, X: int) -> str:
    return ",".join(map(str, lattice.flats[X].key))


def faces_json(arrangement) -> str:
    return _dump([f.to_json() for f in arrangement.faces])


def faces_text(arrangement) -> str:
    lines = []
    for f in arrangement.faces:
        wit = " ".join(format_fraction(x) for x in f.witness)
        lines.append(f"{f.index}\t{f.signs}\tdim={f.dim}\t{wit}")
    return "\n".join(lines) + "\n"


def lattice_json(lattice, orbit_poset) -> str:
    data = {
        "flats": [
            {"zeros": list(f.key), "dim": f.dim, "rank": f.rank, "orbit": orbit_poset.labels[orbit_poset.orbit_of[f.index]]}
            for f in lattice.flats
        ],
        "covers": [[flat_key(lattice, y), flat_key(lattice, x)] for y, x in lattice.covers],
        "orbits": [
            {"label": lab, "rank": r, "flats": [flat_key(lattice, x) for x in orb]}
            for lab, r, orb in zip(orbit_poset.labels, orbit_poset.ranks, orbit_poset.orbits)
        ],
        "orbit_covers": [[orbit_poset.labels[a], orbit_poset.labels[b]] for a, b in orbit_poset.covers],
    }
    return _dump(data)


def lattice_dot(lattice) -> str:
    return lattice.to_dot()


def lattice_text(lattice, orbit_poset) -> str:
    lines = []
    for f in lattice.flats:
        lab = orbit_poset.labels[orbit_poset.orbit_of[f.index]]
        lines.append(f"{f.index}\t{{{flat_key(lattice, f.index)}}}\tdim={f.dim}\torbit={lab}")
    return "\n".join(lines) + "\n"


def element_json(element, arrangement) -> dict:
    return {arrangement.faces[i].signs: format_fraction(c) for i, c in sorted(element.coefficients().items())}


def idempotents_json(system, lattice, arrangement) -> str:
    data = {
        "system": system.system,
        "verification": system.verification,
        "idempotents": {flat_key(lattice, X): element_json(system[X], arrangement) for X in range(len(lattice))},
    }
    return _dump(data)


def idempotents_text(system, lattice, arrangement) -> str:
    lines = [f"system: {system.system}"]
    for X in range(len(lattice)):
        e = system[X]
        lines.append(f"e[{{{flat_key(lattice, X)}}}] = {len(e.support_faces())} faces, denominator {e.den}")
    return "\n".join(lines) + "\n"


def structure_constants_json(C) -> str:
    """Nonzero entries keyed by "J,K,M" with subsets given as bitmasks."""
    d = C.shape[0]
    data = {
        f"{J},{K},{M}": int(C[J, K, M])
        for J in range(d)
        for K in range(d)
        for M in range(d)
        if C[J, K, M]
    }
    return json.dumps({"dim": d, "constants": data}, indent=2, sort_keys=False) + "\n"


def kF_quiver_graph(counts: dict, lattice) -> QuiverGraph:
    labels = tuple("{" + flat_key(lattice, X) + "}" for X in range(len(lattice)))
    arrows = {(labels[X], labels[Y]): m for (X, Y), m in counts.items()}
    return QuiverGraph(labels, arrows)


def render_quiver(graph: QuiverGraph, fmt: str) -> str:
    if fmt == "json":
        return graph.to_json()
    if fmt == "dot":
        return graph.to_dot()
    return graph.to_text()
