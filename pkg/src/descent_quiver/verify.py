"""Named verification checks, grouped by level, with an optional process pool."""

from __future__ import annotations

import logging
import math
import multiprocessing
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from . import quiver as Q
from .invariant import bidigare_check, least_subset
from .lattice import integer_partitions
from .linalg import Subspace
from .workspace import Workspace

log = logging.getLogger(__name__)

LEVELS = ("fast", "full", "extended")
GUARDRAILS = {"fast": {"A": 5, "B": 3}, "full": {"A": 6, "B": 4}, "extended": {"A": 6, "B": 4}}
WORKERS_ENV = "DESCENT_QUIVER_WORKERS"
SAMPLE_SEED = 20080101


@dataclass(frozen=True)
class Check:
    name: str
    level: str
    fn: Callable[[Workspace], dict]
    limits: dict | None = None  # largest rank per type at which the check runs

    def applies(self, ws: Workspace) -> bool:
        if self.limits is None:
            return True
        return ws.rank <= self.limits.get(ws.type, -1)


SMALL = {"A": 4, "B": 3}
MEDIUM = {"A": 5, "B": 3}


def _pairs(N: int, limit: int = 40000):
    """All pairs when cheap, else a fixed pseudo-random sample."""
    if N * N <= limit:
        a, b = np.meshgrid(np.arange(N), np.arange(N), indexing="ij")
        return a.ravel(), b.ravel()
    rng = np.random.default_rng(SAMPLE_SEED)
    return rng.integers(0, N, limit), rng.integers(0, N, limit)


# -- groups and faces ------------------------------------------------------------


def check_group(ws: Workspace) -> dict:
    W = ws.system
    n = ws.rank
    expected = math.factorial(n) * (2**n if ws.type == "B" else 1)
    gens_ok = all(
        W.mult[W.index[s], W.index[s]] == W.identity and s.determinant() == -1 for s in W.generators
    )
    cosets_ok = all(
        len(W.minimal_coset_reps(J)) * len(W.parabolic_subgroup(J)) == W.order
        for J in range(1 << W.num_generators)
    )
    return {"ok": W.order == expected and gens_ok and cosets_ok, "order": W.order}


def check_face_semigroup(ws: Workspace) -> dict:
    arr = ws.arrangement
    T = arr.table
    N = len(arr)
    idem = bool(np.all(T[np.arange(N), np.arange(N)] == np.arange(N)))
    x, y = _pairs(N)
    xy = T[x, y]
    lrb = bool(np.all(T[xy, x] == xy))
    identity = bool(np.all(T[arr.identity_face] == np.arange(N)))
    chambers = len(arr.chambers) == ws.system.order
    fa = arr.face_action
    rng = np.random.default_rng(SAMPLE_SEED)
    ws_ = rng.integers(0, fa.shape[0], len(x))
    hom = bool(np.all(fa[ws_, xy] == T[fa[ws_, x], fa[ws_, y]]))
    k = min(len(x), 500)
    sign_rule = all(arr.product_by_signs(int(a), int(b)).index == int(T[a, b]) for a, b in zip(x[:k], y[:k]))
    return {
        "ok": idem and lrb and identity and chambers and hom and sign_rule,
        "faces": N,
        "idempotent": idem,
        "left_regular": lrb,
        "equivariant": hom,
    }


def check_codec(ws: Workspace) -> dict:
    arr = ws.arrangement
    roundtrip = all(arr.decode(arr.encode(f)).index == f.index for f in arr.faces)
    ok = roundtrip
    if ws.type == "A" and len(arr) <= 100:
        from .faces import composition_product

        for x in arr.faces:
            for y in arr.faces:
                if arr.decode(composition_product(arr.encode(x), arr.encode(y))).index != arr.product(x, y).index:
                    ok = False
    return {"ok": ok, "roundtrip": roundtrip}


# -- lattice ---------------------------------------------------------------------------


def check_lattice(ws: Workspace) -> dict:
    lat = ws.lattice
    mu = lat.mobius_table
    zas = all(
        len(lat.faces_by_flat[X]) == sum(abs(int(mu[Y, X])) for Y in range(len(lat)) if lat.order[Y, X])
        for X in range(len(lat))
    )
    arr = ws.arrangement
    x, y = _pairs(len(arr), 20000)
    sx, sy, sxy = lat.support[x], lat.support[y], lat.support[arr.table[x, y]]
    upper = bool(np.all(lat.order[sx, sxy]) and np.all(lat.order[sy, sxy]))
    # least upper bound: below every common upper bound
    least = True
    for a, b, c in list(zip(sx, sy, sxy))[:2000]:
        ub = np.flatnonzero(lat.order[a] & lat.order[b])
        least &= bool(np.all(lat.order[c, ub]))
    return {"ok": zas and upper and least, "flats": len(lat), "zaslavsky": zas, "support_join": upper and least}


def check_orbit_labels(ws: Workspace) -> dict:
    op = ws.orbit_poset
    n = ws.rank
    if ws.type == "A":
        expected = set(integer_partitions(n))
    else:
        expected = {p for m in range(n + 1) for p in integer_partitions(m)}
    bij = set(op.partitions) == expected and len(op.partitions) == len(expected)
    ranks = all(
        r == (len(p) - 1 if ws.type == "A" else len(p)) for p, r in zip(op.partitions, op.ranks)
    )
    return {"ok": bij and ranks, "vertices": len(op)}


# -- idempotents -----------------------------------------------------------------------


def _check_system(ws: Workspace, name: str) -> dict:
    sys_ = ws.kF.idempotents(name)
    return {"ok": sys_.verified, **sys_.verification}


def check_idempotents_first(ws):
    return _check_system(ws, "first")


def check_idempotents_second(ws):
    return _check_system(ws, "second")


def check_epsilon_agreement(ws: Workspace) -> dict:
    inv = ws.invariant
    third = inv.epsilon_third_system()
    matched = ws.kF.build_idempotents("second", inv.matched_representatives())
    via_sum = inv.epsilon_via_sum(matched)
    complete = inv.check_complete_system(third)
    return {"ok": via_sum == third and all(complete.values()), "agree": via_sum == third, **complete}


def check_idempotent_lemma(ws: Workspace) -> dict:
    kF, lat = ws.kF, ws.lattice
    es = kF.idempotents("first")
    ok = True
    for X in range(len(lat)):
        faces = np.flatnonzero(~lat.order[lat.support, X])
        if len(faces):
            rows = kF.left_face_rows(faces, es[X])
            ok &= not rows.any()
    return {"ok": bool(ok)}


def check_lattice_idempotents(ws: Workspace) -> dict:
    kF = ws.kF
    E = kF.lattice_idempotents()
    La = kF.lattice_algebra
    total = La.one() * 0
    for e in E.values():
        total = total + e
    complete = total == La.one() and all(
        (E[a] * E[b] == (E[a] if a == b else La.one() * 0)) for a in E for b in E
    )
    es = kF.idempotents("first")
    image = all(kF.supp_hom(es[X]) == E[X] for X in E)
    return {"ok": complete and image, "complete": complete, "supp_of_e_is_E": image}


def check_corner_dimensions(ws: Workspace) -> dict:
    kF, lat = ws.kF, ws.lattice
    mu = lat.mobius_table
    ok = True
    for Y in range(len(lat)):
        for X in range(len(lat)):
            d = kF.corner_dimension(Y, X)
            expected = abs(int(mu[Y, X])) if lat.order[Y, X] else 0
            ok &= d == expected
    basis_ok = True
    es = kF.idempotents("first")
    total = 0
    for X in range(len(lat)):
        faces = lat.faces_by_flat[X]
        r = Subspace.span(kF.rows_of([kF.face(int(x)) * es[X] for x in faces])).dim
        basis_ok &= r == len(faces)
        total += r
    return {"ok": bool(ok and basis_ok and total == kF.dim), "corner_dims_mobius": bool(ok), "x_e_basis": bool(basis_ok)}


def check_radical(ws: Workspace) -> dict:
    kF = ws.kF
    dims = {}
    ok = True
    p = 1
    while True:
        d = kF.radical_power_basis(p).dim
        dims[p] = d
        ok &= d == kF.radical_dimension_formula(p)
        if d == 0:
            break
        p += 1
    top = max(f.rank for f in ws.lattice.flats)
    ok &= dims[1] == kF.dim - len(ws.lattice) and p <= top + 1
    if kF.dim <= 200:
        for q in dims:
            ok &= kF.radical_power_basis(q, "products").dim == kF.radical_power_basis(q, "graded").dim
            ok &= kF.radical_power_basis(q, "products") == kF.radical_power_basis(q, "graded")
    return {"ok": bool(ok), "dims": dims}


# -- orientation, incidence and phi -----------------------------------------------------------


def check_orientation(ws: Workspace) -> dict:
    O = ws.orientation
    W = ws.system
    sig = O.sigma
    ok = bool(np.all(sig[W.identity] == 1)) and Q.cocycle_law(O)
    central = W.central_element
    if central is not None:
        ok &= all(int(sig[central, X]) == (-1) ** f.dim for X, f in enumerate(ws.lattice.flats))
    lat = ws.lattice
    for h in ws.arrangement.hyperplanes:
        r = W.reflection(h.normal)
        H = lat.flat_of_zeros(frozenset([h.index]))
        ok &= int(sig[r, H]) == 1 and int(sig[r, lat.top]) == -1
    return {"ok": bool(ok)}


def check_incidence(ws: Workspace) -> dict:
    arr, lat, O = ws.arrangement, ws.lattice, ws.orientation
    le = arr.face_order
    dims = np.array([f.dim for f in arr.faces])
    N = len(arr)
    covers = [(int(x), int(y)) for x, y in zip(*np.nonzero(le)) if dims[y] == dims[x] + 1]
    inc = {c: O.incidence_number(*c) for c in covers}
    opposite = True
    for y in range(N):
        for X in {int(lat.support[x]) for (yy, x) in covers if yy == y}:
            xs = [x for (yy, x) in covers if yy == y and lat.support[x] == X]
            opposite &= len(xs) == 2 and inc[(y, xs[0])] == -inc[(y, xs[1])]
    transport = True
    for (x, y) in covers:
        for x2 in lat.faces_by_flat[lat.support[x]]:
            x2 = int(x2)
            transport &= inc[(x2, int(arr.table[x2, y]))] == inc[(x, y)]
    diamond = True
    up: dict[int, list[int]] = {}
    for x, y in covers:
        up.setdefault(x, []).append(y)
    for x in range(N):
        for y in up.get(x, []):
            for z in up.get(y, []):
                mids = [u for u in up.get(x, []) if (u, z) in inc]
                if len(mids) != 2:
                    diamond = False
                    continue
                a, b = mids
                diamond &= inc[(a, z)] * inc[(x, a)] + inc[(b, z)] * inc[(x, b)] == 0
    return {"ok": bool(opposite and transport and diamond), "opposite": opposite, "transport": transport, "diamond": diamond}


def _phi_suite(ws: Workspace, system: str) -> dict:
    phi = ws.phi(system)
    wd = Q.phi_well_defined(phi)
    sandwich = Q.phi_idempotent_sandwich(phi)
    vertices = all(phi.path((X,)) == phi.system[X] for X in range(len(ws.lattice)))
    kernel = Q.verify_kernel_relations(phi)
    equiv = Q.phi_equivariant(phi)
    surj = Q.phi_surjective_rank(phi)
    ok = wd and sandwich and vertices and kernel["sums_vanish"] and kernel["image_rank_is_mobius"] and equiv and surj == ws.kF.dim
    return {
        "ok": bool(ok),
        "well_defined": wd,
        "sandwich": sandwich,
        "kernel": kernel,
        "equivariant": equiv,
        "surjective_rank": surj,
        "faces": ws.kF.dim,
    }


def check_phi_first(ws):
    return _phi_suite(ws, "first")


def check_phi_second(ws):
    return _phi_suite(ws, "second")


def check_path_norms(ws: Workspace) -> dict:
    """Paths from V are reversed by the reflection in X1; in type B odd paths by -1."""
    O = ws.orientation
    lat = ws.lattice
    W = ws.system
    ok = True
    for p in Q.paths_from(lat, lat.top, 2)[1:]:
        ok &= Q.norm_sum(O, p).is_zero()
    central = W.central_element
    if central is not None:
        for p in Q.all_paths(lat, 1):
            if len(p) == 2:
                s, q = Q.act_on_path(O, central, p)
                ok &= q == p and s == -1 and Q.norm_sum(O, p).is_zero()
    return {"ok": bool(ok)}


def check_kF_quiver(ws: Workspace) -> dict:
    counts = Q.quiver_of_kF_numeric(ws.kF)
    covers = {(x, y) for y, x in ws.lattice.covers}
    ok = set(counts) == covers and all(v == 1 for v in counts.values())
    return {"ok": ok, "arrows": len(counts)}


# -- invariant algebra and quivers ---------------------------------------------------------


def check_invariant_basis(ws: Workspace) -> dict:
    inv = ws.invariant
    C = inv.structure_constants
    ok = inv.dim == 2 ** ws.system.num_generators
    ok &= all(inv.is_invariant(inv.to_kF(inv.basis_element(J))) for J in range(inv.dim))
    one = inv.one()
    ok &= all(inv.multiply(one, inv.basis_element(J)) == inv.basis_element(J) for J in range(inv.dim))
    if len(ws.arrangement) <= 600:
        ok &= bool(np.array_equal(C, inv.structure_constants_by_counting()))
    chamber = inv.basis_element(0)
    ok &= inv.multiply(chamber, chamber) == chamber.scale(ws.system.order)
    return {"ok": bool(ok), "dim": inv.dim}


def check_invariant_quiver(ws: Workspace) -> dict:
    inv = ws.invariant
    gamma = Q.quiver_of_invariant_numeric(inv)
    closed = Q.closed_form_quiver(ws.type, ws.rank)
    structural = Q.structural_checks(gamma, ws.orbit_poset, ws.type)
    loewy = inv.loewy_length()
    out = {
        "ok": gamma == closed and all(structural.values()),
        "matches_closed_form": gamma == closed,
        "arrows": len(gamma.arrows),
        "loewy_length": loewy,
        **structural,
    }
    bound = Q.loewy_bound(ws.type, ws.rank)
    if bound is not None:
        out["loewy_bound"] = bound
        out["ok"] = out["ok"] and loewy <= bound
    return out


def check_no_arrow_condition(ws: Workspace) -> dict:
    gamma = Q.quiver_of_invariant_numeric(ws.invariant)
    cond = Q.no_arrow_condition(ws.orientation, ws.orbit_poset)
    ok = all(gamma.multiplicity(a, b) == 0 for (a, b), v in cond.items() if v)
    return {"ok": ok, "pairs_with_reversal": sum(cond.values())}


def check_expansion_lemma(ws: Workspace) -> dict:
    if ws.type != "B":
        return {"ok": True, "skipped": "type B only"}
    inst = Q.expansion_lemma_instances(ws.orientation)
    ok = all(Q.check_expansion_lemma(ws.orientation, p) for p in inst)
    return {"ok": ok, "paths": len(inst)}


def radical_theorem(ws: Workspace, ms=None) -> dict:
    inv = ws.invariant
    if ms is None:
        ms = (1, 2, 3) if ws.type == "A" else (1, 2)
    factor = 1 if ws.type == "A" else 2
    rows = {}
    ok = True
    for m in ms:
        lhs = len(inv.radical_power(m))
        rhs = inv.intersect_with_kF_radical(factor * m)
        # the power of rad(Sigma) also sits inside the kF radical power
        sub = _contained(ws, inv.radical_power(m), factor * m)
        rows[m] = {"rad_sigma": lhs, "intersection": rhs, "contained": sub}
        ok &= lhs == rhs and sub
    return {"ok": bool(ok), "dims": rows}


def _contained(ws: Workspace, elements, p: int) -> bool:
    rad = ws.kF.radical_power_basis(p)
    for e in elements:
        v = ws.invariant.to_kF(e)
        if not rad.contains(list(v.num)):
            return False
    return True


def check_radical_theorem(ws):
    return radical_theorem(ws)


def check_bidigare(ws: Workspace) -> dict:
    ok, bad = bidigare_check(ws.invariant, ws.descent)
    return {"ok": ok, "mismatches": bad[:5]}


def check_descent_idempotents(ws: Workspace) -> dict:
    des, inv = ws.descent, ws.invariant
    eps = des.idempotents()
    one = des.identity()
    total = np.zeros(des.order, dtype=object)
    for e in eps:
        total = total + e
    ok_sum = all(Fraction(a) == b for a, b in zip(total, one))
    ok_idem = all(np.all(des.multiply(e, e) == e) for e in eps)
    ok_orth = all(not des.multiply(a, b).any() for i, a in enumerate(eps) for j, b in enumerate(eps) if i != j)
    # S/~ against L/W through J -> orbit of supp(c_J)
    classes = des.conjugacy_classes
    vmap = [inv.vertex_of[c[0]] for c in classes]
    consistent = all(len({inv.vertex_of[J] for J in c}) == 1 for c in classes)
    bijective = sorted(vmap) == list(range(len(ws.orbit_poset)))
    order_ok = all(
        des.class_leq(a, b) == bool(ws.orbit_poset.order[vmap[a], vmap[b]])
        for a in range(len(classes))
        for b in range(len(classes))
    )
    # Bidigare image of the third system on the invariant side
    third = inv.epsilon_third_system()
    image_ok = True
    for a, c in enumerate(classes):
        J = least_subset(c, des.num_generators)
        lo = des.normalizer_index(J)
        image_ok &= lo == inv.L_count(vmap[a])
        mapped = des.from_coords(third[vmap[a]].coords)
        image_ok &= all(Fraction(x) == Fraction(y) for x, y in zip(mapped, eps[a]))
    ok = ok_sum and ok_idem and ok_orth and consistent and bijective and order_ok and image_ok
    return {
        "ok": bool(ok),
        "complete": bool(ok_sum and ok_idem and ok_orth),
        "classes_match_orbits": bool(consistent and bijective and order_ok),
        "matches_invariant_side": bool(image_ok),
    }


def check_descent_products(ws: Workspace) -> dict:
    D = ws.descent.structure_constants
    ident = ws.descent.dim - 1
    ok = all(
        D[ident, J, M] == (1 if M == J else 0) and D[J, ident, M] == (1 if M == J else 0)
        for J in range(ws.descent.dim)
        for M in range(ws.descent.dim)
    )
    return {"ok": bool(ok)}


CHECKS: tuple[Check, ...] = (
    Check("group", "fast", check_group),
    Check("face_semigroup", "fast", check_face_semigroup),
    Check("codec", "fast", check_codec),
    Check("lattice", "fast", check_lattice),
    Check("orbit_labels", "fast", check_orbit_labels),
    Check("invariant_basis", "fast", check_invariant_basis),
    Check("invariant_quiver", "fast", check_invariant_quiver),
    Check("bidigare", "fast", check_bidigare, {"A": 5, "B": 4}),
    Check("descent_products", "fast", check_descent_products, {"A": 5, "B": 4}),
    Check("idempotents_first", "full", check_idempotents_first, MEDIUM),
    Check("idempotents_second", "full", check_idempotents_second, MEDIUM),
    Check("epsilon_agreement", "full", check_epsilon_agreement, MEDIUM),
    Check("descent_idempotents", "full", check_descent_idempotents, {"A": 5, "B": 4}),
    Check("idempotent_lemma", "full", check_idempotent_lemma, SMALL),
    Check("lattice_idempotents", "full", check_lattice_idempotents, SMALL),
    Check("corner_dimensions", "full", check_corner_dimensions, SMALL),
    Check("radical", "full", check_radical, MEDIUM),
    Check("orientation", "full", check_orientation, SMALL),
    Check("incidence", "full", check_incidence, SMALL),
    Check("phi_first", "full", check_phi_first, SMALL),
    Check("path_norms", "full", check_path_norms, SMALL),
    Check("kF_quiver", "full", check_kF_quiver, SMALL),
    Check("no_arrow_condition", "full", check_no_arrow_condition, SMALL),
    Check("expansion_lemma", "full", check_expansion_lemma, {"B": 3}),
    Check("radical_theorem", "full", check_radical_theorem, {"A": 5, "B": 3}),
    Check("phi_second", "extended", check_phi_second, SMALL),
    Check("radical_theorem_extended", "extended", check_radical_theorem, {"B": 4}),
)


def selected_checks(level: str) -> list[Check]:
    if level not in LEVELS:
        raise ValueError(f"unknown level {level!r}")
    allowed = LEVELS[: LEVELS.index(level) + 1]
    return [c for c in CHECKS if c.level in allowed]


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (np.bool_,)):
        return bool(x)
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, Fraction):
        return str(x)
    return x


_WORKSPACE: Workspace | None = None


def _run_one(check: Check, ws: Workspace) -> dict:
    if not check.applies(ws):
        return {"name": check.name, "status": "skip", "detail": {"reason": "rank above the check's exhaustive range"}}
    log.info("running %s", check.name)
    try:
        detail = check.fn(ws)
    except Exception as exc:  # a crash is a failed check, reported not raised
        log.exception("check %s raised", check.name)
        return {"name": check.name, "status": "fail", "detail": {"error": f"{type(exc).__name__}: {exc}"}}
    return {"name": check.name, "status": "pass" if detail.get("ok") else "fail", "detail": _jsonable(detail)}


def _run_by_name(name: str) -> dict:
    check = next(c for c in CHECKS if c.name == name)
    return _run_one(check, _WORKSPACE)


def default_workers() -> int:
    env = os.environ.get(WORKERS_ENV)
    if env:
        return max(1, int(env))
    if hasattr(os, "sched_getaffinity"):
        return max(1, len(os.sched_getaffinity(0)))
    return os.cpu_count() or 1


def run_checks(ws: Workspace, level: str = "fast", workers: int = 1) -> dict:
    global _WORKSPACE
    checks = selected_checks(level)
    if workers > 1 and len(checks) > 1:
        # build the shared structures once; forked workers inherit them
        ws.arrangement.table, ws.arrangement.face_action, ws.lattice.flat_action, ws.invariant
        _WORKSPACE = ws
        ctx = multiprocessing.get_context("fork")
        with ctx.Pool(min(workers, len(checks))) as pool:
            results = pool.map(_run_by_name, [c.name for c in checks], chunksize=1)
        _WORKSPACE = None
    else:
        results = [_run_one(c, ws) for c in checks]
    ok = all(r["status"] != "fail" for r in results)
    return {"type": ws.type, "rank": ws.rank, "level": level, "ok": ok, "checks": results}
