"""The (G, H, cluster-map) instance: validation, potential, injectivity,
witnesses, decisions, and the on-disk JSON format.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum

from .rotation import EmbeddedGraph, StructureError, build_graph


class ParseError(ValueError):
    """Malformed instance/witness/drawing document."""


class Reason(Enum):
    ENCLOSING_LOOP = "EnclosingLoop"
    INTERLEAVED_STAR = "InterleavedStar"
    NONPLANAR_CLUSTER_GRAPH = "NonplanarClusterGraph"
    INCONSISTENT_ROTATION = "InconsistentRotation"
    WINDING_CYCLE = "WindingCycle"
    CYCLIC_VALVE_RELATION = "CyclicValveRelation"
    ISOTOPY_MISMATCH = "IsotopyMismatch"
    INVALID_INSTANCE = "InvalidInstance"


@dataclass
class Decision:
    positive: bool
    reason: Reason | None = None
    witness: "Witness | None" = None
    trace: object | None = None
    step: int | None = None
    detail: str = ""

    def __bool__(self) -> bool:  # pragma: no cover - convenience only
        return self.positive


@dataclass
class Instance:
    graph: EmbeddedGraph
    host: EmbeddedGraph
    cluster_map: dict[int, int]

    def copy(self) -> "Instance":
        return Instance(self.graph.copy(), self.host.copy(), dict(self.cluster_map))

    # -- basic derived structure ---------------------------------------

    def host_edges(self) -> list[tuple[int, int]]:
        out = set()
        for d in self.host.twin:
            u = self.host.origin[d]
            v = self.host.origin[self.host.twin[d]]
            out.add((min(u, v), max(u, v)))
        return sorted(out)

    def edge_image(self, e: int) -> tuple[int, int] | None:
        """Host edge (sorted pair) of a G-edge, or None for intra-cluster."""
        g = self.graph
        u = self.cluster_map[g.origin[e]]
        v = self.cluster_map[g.origin[g.twin[e]]]
        if u == v:
            return None
        return (min(u, v), max(u, v))

    def pipe_edges(self) -> dict[tuple[int, int], list[int]]:
        """Host edge -> sorted list of G-edge ids mapped onto it."""
        out: dict[tuple[int, int], list[int]] = {r: [] for r in self.host_edges()}
        g = self.graph
        for e in g.edges():
            r = self.edge_image(e)
            if r is not None and r in out:
                out[r].append(e)
        return out

    def cluster_of(self, v: int) -> int:
        return self.cluster_map[v]

    def clusters(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {nu: [] for nu in self.host.anchor}
        for v, nu in self.cluster_map.items():
            out.setdefault(nu, []).append(v)
        return {k: sorted(v) for k, v in out.items()}


@dataclass
class Witness:
    """Per host edge, the two valve orders (keyed by the valve's host vertex).

    An order at the valve of rho at nu lists the G-edges of the pipe in the
    order their crossings appear when the valve is traversed in the direction
    inherited from the counterclockwise orientation of nu's disc boundary.
    """
    orders: dict[tuple[int, int], dict[int, list[int]]] = field(default_factory=dict)

    def order_at(self, rho: tuple[int, int], nu: int) -> list[int]:
        return self.orders[rho][nu]

    def copy(self) -> "Witness":
        return Witness({r: {nu: list(o) for nu, o in two.items()}
                        for r, two in self.orders.items()})


@dataclass
class PotentialValue:
    p: int


def potential(inst: Instance) -> PotentialValue:
    ne_g = len(inst.graph.edges())
    ne_h = len(inst.host_edges())
    return PotentialValue(ne_g - ne_h)


# ----------------------------------------------------------------------
# validation
# ----------------------------------------------------------------------

def validate_instance(inst: Instance) -> list[str]:
    """All instance-level violations; empty list means the instance is valid."""
    bad: list[str] = []
    bad.extend(f"g: {m}" for m in inst.graph.check())
    bad.extend(f"h: {m}" for m in inst.host.check())
    h = inst.host
    seen_pairs: set[tuple[int, int]] = set()
    for e in h.edges():
        u, v = h.origin[e], h.origin[h.twin[e]]
        if u == v:
            bad.append(f"h: loop at host vertex {u}")
            continue
        key = (min(u, v), max(u, v))
        if key in seen_pairs:
            bad.append(f"h: multiple host edges between {key}")
        seen_pairs.add(key)
    g = inst.graph
    for v in g.anchor:
        if v not in inst.cluster_map:
            bad.append(f"gamma: no cluster for vertex {v}")
        elif inst.cluster_map[v] not in h.anchor:
            bad.append(f"gamma: unknown host vertex {inst.cluster_map[v]} for {v}")
    for v in inst.cluster_map:
        if v not in g.anchor:
            bad.append(f"gamma: entry for missing vertex {v}")
    if bad:
        return bad
    for v in g.anchor:
        if g.anchor[v] is None:
            bad.append(f"g: isolated vertex {v} in cluster {inst.cluster_map[v]}")
    used: set[tuple[int, int]] = set()
    for e in g.edges():
        r = inst.edge_image(e)
        if r is None:
            continue
        if r not in seen_pairs:
            bad.append(f"gamma: edge {e} needs missing host edge {r}")
        used.add(r)
    for r in sorted(seen_pairs - used):
        bad.append(f"h: unused host edge {r}")
    return bad


# ----------------------------------------------------------------------
# injectivity classification
# ----------------------------------------------------------------------

@dataclass
class InjectivityReport:
    kind: str  # not_normal_form | not_locally_injective | locally_injective
               # | strongly_locally_injective
    violators: list[int] = field(default_factory=list)  # vertices failing (i)/(ii)
    fixed: set[int] = field(default_factory=set)
    v_ge3: set[int] = field(default_factory=set)

    @property
    def t_count(self) -> int:
        return len(self.violators)


def is_normal_form(inst: Instance) -> bool:
    g = inst.graph
    for v in g.anchor:
        if g.anchor[v] is None:
            return False
    for e in g.edges():
        if inst.edge_image(e) is None:
            return False
    return not _suppressible_pair_exists(inst)


def _redundant_host_vertices(inst: Instance) -> set[int]:
    h, g = inst.host, inst.graph
    cluster = inst.clusters()
    out: set[int] = set()
    for nu in h.anchor:
        if h.anchor[nu] is None:
            continue
        rot = list(h.rotation(nu))
        if len(rot) != 2:
            continue
        ok = True
        for v in cluster.get(nu, []):
            ds = list(g.rotation(v))
            if len(ds) != 2:
                ok = False
                break
            im = [inst.edge_image(min(d, g.twin[d])) for d in ds]
            if None in im or im[0] == im[1]:
                ok = False
                break
        if ok:
            out.add(nu)
    return out


def _suppressible_pair_exists(inst: Instance) -> bool:
    h = inst.host
    red = _redundant_host_vertices(inst)
    pairs = {(min(a, b), max(a, b)) for a, b in
             ((h.origin[e], h.origin[h.twin[e]]) for e in h.edges())}
    for a, b in pairs:
        if a in red and b in red:
            # suppressing one of them must not create a parallel host edge
            for drop, keep in ((a, b), (b, a)):
                nbrs = {h.origin[h.twin[d]] for d in h.rotation(drop)}
                rest = nbrs - {keep}
                if not rest:
                    continue
                other = rest.pop()
                if (min(keep, other), max(keep, other)) not in pairs:
                    return True
    return False


def classify_injectivity(inst: Instance) -> InjectivityReport:
    if not is_normal_form(inst):
        return InjectivityReport(kind="not_normal_form")
    g = inst.graph
    pipes = inst.pipe_edges()
    violators: list[int] = []
    fixed: set[int] = set()
    v_ge3: set[int] = set()
    cluster_size: dict[int, int] = {}
    for v, nu in inst.cluster_map.items():
        cluster_size[nu] = cluster_size.get(nu, 0) + 1
    for v in sorted(g.anchor):
        ds = list(g.rotation(v))
        nbr_clusters: dict[int, int] = {}
        images: set[tuple[int, int]] = set()
        injective = True
        for d in ds:
            w = g.origin[g.twin[d]]
            nuw = inst.cluster_map[w]
            if w in nbr_clusters:
                continue
            if nuw in nbr_clusters.values() or nuw == inst.cluster_map[v]:
                injective = False
            nbr_clusters[w] = nuw
            images.add(inst.edge_image(min(d, g.twin[d])))
        if len(images) >= 3:
            v_ge3.add(v)
        bad_here = not injective
        if len(ds) == 1:
            e = min(ds[0], g.twin[ds[0]])
            r = inst.edge_image(e)
            if r is not None and len(pipes[r]) != 1:
                bad_here = True
        if bad_here:
            violators.append(v)
        if injective and cluster_size.get(inst.cluster_map[v], 0) == 1:
            fixed.add(v)
    if violators:
        return InjectivityReport("not_locally_injective", violators, fixed, v_ge3)
    if all(v in fixed for v in v_ge3):
        return InjectivityReport("strongly_locally_injective", [], fixed, v_ge3)
    return InjectivityReport("locally_injective", [], fixed, v_ge3)


# ----------------------------------------------------------------------
# serialization
# ----------------------------------------------------------------------

def _require_keys(obj: dict, allowed: set[str], where: str) -> None:
    extra = set(obj) - allowed
    if extra:
        raise ParseError(f"unknown keys {sorted(extra)} in {where}")


def _nonneg(x, where: str) -> int:
    if not isinstance(x, int) or isinstance(x, bool) or x < 0:
        raise ParseError(f"{where}: expected nonnegative integer, got {x!r}")
    return x


def graph_to_obj(g: EmbeddedGraph) -> dict:
    comp = g.component_of()
    fo = g.face_of()
    vertices = [{"id": v, "rotation": list(g.rotation(v))} for v in sorted(g.anchor)]
    darts = [{"id": d, "twin": g.twin[d], "origin": g.origin[d]}
             for d in sorted(g.twin)]
    outer = [{"component": c, "faceDart": f}
             for c, f in sorted(g.canonical_outer().items())]
    containment = [{"component": c, "hostComponent": p, "hostFaceDart": f}
                   for c, (p, f) in sorted(g.canonical_containment().items())]
    return {"vertices": vertices, "darts": darts, "outer": outer,
            "containment": containment}


def graph_from_obj(obj: dict, where: str = "graph") -> EmbeddedGraph:
    if not isinstance(obj, dict):
        raise ParseError(f"{where}: expected object")
    _require_keys(obj, {"vertices", "darts", "outer", "containment"}, where)
    rotations: dict[int, list[int]] = {}
    for item in obj.get("vertices", []):
        _require_keys(item, {"id", "rotation"}, f"{where}.vertices[]")
        vid = _nonneg(item["id"], f"{where}.vertex id")
        if vid in rotations:
            raise ParseError(f"{where}: duplicate vertex {vid}")
        rotations[vid] = [_nonneg(d, f"{where}.rotation dart") for d in item["rotation"]]
    twins: dict[int, int] = {}
    origins: dict[int, int] = {}
    for item in obj.get("darts", []):
        _require_keys(item, {"id", "twin", "origin"}, f"{where}.darts[]")
        d = _nonneg(item["id"], f"{where}.dart id")
        if d in twins:
            raise ParseError(f"{where}: duplicate dart {d}")
        twins[d] = _nonneg(item["twin"], f"{where}.twin")
        origins[d] = _nonneg(item["origin"], f"{where}.origin")
    try:
        g = build_graph(rotations, twins)
    except StructureError as exc:
        raise ParseError(f"{where}: {exc}") from exc
    for d, v in origins.items():
        if g.origin.get(d) != v:
            raise ParseError(f"{where}: dart {d} origin disagrees with rotations")
    comp = g.component_of()
    g.outer = {}
    for item in obj.get("outer", []):
        _require_keys(item, {"component", "faceDart"}, f"{where}.outer[]")
        c = _nonneg(item["component"], f"{where}.outer component")
        d = _nonneg(item["faceDart"], f"{where}.outer faceDart")
        if c not in g.anchor or d not in g.twin:
            raise ParseError(f"{where}: outer entry references unknown ids")
        g.outer[comp[c]] = d
    g.containment = {}
    for item in obj.get("containment", []):
        _require_keys(item, {"component", "hostComponent", "hostFaceDart"},
                      f"{where}.containment[]")
        c = _nonneg(item["component"], f"{where}.containment component")
        p = _nonneg(item["hostComponent"], f"{where}.containment hostComponent")
        d = _nonneg(item["hostFaceDart"], f"{where}.containment hostFaceDart")
        if c not in g.anchor or p not in g.anchor or d not in g.twin:
            raise ParseError(f"{where}: containment references unknown ids")
        g.containment[comp[c]] = (p, d)
    # default outer faces for edged components that got none
    canon = g.canonical_outer()
    fo = g.face_of()
    for d in sorted(g.twin):
        c = comp[g.origin[d]]
        if c not in canon:
            g.outer[c] = fo[d]
            canon[c] = fo[d]
    g._touch()
    return g


def instance_to_obj(inst: Instance) -> dict:
    gamma = [{"v": v, "nu": nu} for v, nu in sorted(inst.cluster_map.items())]
    return {"g": graph_to_obj(inst.graph), "h": graph_to_obj(inst.host),
            "gamma": gamma}


def instance_from_obj(obj: dict) -> Instance:
    if not isinstance(obj, dict):
        raise ParseError("instance: expected object")
    _require_keys(obj, {"g", "h", "gamma"}, "instance")
    for key in ("g", "h", "gamma"):
        if key not in obj:
            raise ParseError(f"instance: missing key {key!r}")
    g = graph_from_obj(obj["g"], "g")
    h = graph_from_obj(obj["h"], "h")
    gamma: dict[int, int] = {}
    for item in obj["gamma"]:
        _require_keys(item, {"v", "nu"}, "gamma[]")
        v = _nonneg(item["v"], "gamma.v")
        nu = _nonneg(item["nu"], "gamma.nu")
        if v in gamma:
            raise ParseError(f"gamma: duplicate entry for vertex {v}")
        gamma[v] = nu
    return Instance(g, h, gamma)


def instance_to_json(inst: Instance) -> str:
    return json.dumps(instance_to_obj(inst), indent=1, sort_keys=True)


def instance_from_json(text: str | bytes) -> Instance:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON at offset {exc.pos}: {exc.msg}") from exc
    return instance_from_obj(obj)


def witness_to_obj(w: Witness) -> dict:
    orders = []
    for (a, b) in sorted(w.orders):
        two = w.orders[(a, b)]
        orders.append({"rho": [a, b], "atA": list(two[a]), "atB": list(two[b])})
    return {"orders": orders}


def witness_from_obj(obj: dict) -> Witness:
    if not isinstance(obj, dict):
        raise ParseError("witness: expected object")
    _require_keys(obj, {"orders"}, "witness")
    w = Witness()
    for item in obj.get("orders", []):
        _require_keys(item, {"rho", "atA", "atB"}, "witness.orders[]")
        rho = item.get("rho")
        if (not isinstance(rho, list)) or len(rho) != 2:
            raise ParseError("witness: rho must be [nuA, nuB]")
        a = _nonneg(rho[0], "witness.rho[0]")
        b = _nonneg(rho[1], "witness.rho[1]")
        if a == b:
            raise ParseError("witness: rho endpoints equal")
        at_a = [_nonneg(x, "witness.atA") for x in item.get("atA", [])]
        at_b = [_nonneg(x, "witness.atB") for x in item.get("atB", [])]
        key = (min(a, b), max(a, b))
        if key in w.orders:
            raise ParseError(f"witness: duplicate pipe {key}")
        w.orders[key] = {a: at_a, b: at_b}
    return w


def witness_to_json(w: Witness) -> str:
    return json.dumps(witness_to_obj(w), indent=1, sort_keys=True)


def witness_from_json(text: str | bytes) -> Witness:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON at offset {exc.pos}: {exc.msg}") from exc
    return witness_from_obj(obj)
