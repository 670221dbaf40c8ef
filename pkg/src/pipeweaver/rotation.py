"""Combinatorial embedding kernel: rotation systems over darts.

A plane (multi)graph is stored as a set of darts (edge ends) with a twin
involution, an origin map, and a counterclockwise circular order of the
darts at every vertex (doubly linked).  Faces are the orbits of
``phi = rotation-successor o twin``; with ccw rotations every orbit walks
its face keeping the face on the left, so inner faces run counterclockwise
and the outer walk of a component runs clockwise.

An isotopy class of an embedding is the rotation system plus, per
connected component, the choice of outer face, plus a containment forest
saying which face of which component every non-root component lives in.

Edge identity: an edge is named by the smaller of its two dart ids.
"""

from __future__ import annotations

from dataclasses import dataclass, field


class StructureError(ValueError):
    """Rotation-system data is malformed or an operation precondition fails."""


@dataclass(frozen=True)
class Dart:
    id: int
    twin: int
    origin: int


def edge_id(d: int, twin: dict[int, int]) -> int:
    return min(d, twin[d])


class EmbeddedGraph:
    """Mutable rotation system with isotopy metadata.

    Vertices and darts are nonnegative ints, allocated monotonically and
    never reused.  ``outer`` maps a representative vertex of each component
    that has at least one edge to a dart lying on that component's outer
    face.  ``containment`` maps a representative vertex of a non-root
    component to ``(vertex-in-parent, dart-on-parent-face)``.
    """

    __slots__ = (
        "twin", "origin", "nxt", "prv", "anchor",
        "outer", "containment", "_next_dart", "_next_vertex", "_version",
        "_face_cache", "_comp_cache",
    )

    def __init__(self) -> None:
        self.twin: dict[int, int] = {}
        self.origin: dict[int, int] = {}
        self.nxt: dict[int, int] = {}
        self.prv: dict[int, int] = {}
        self.anchor: dict[int, int | None] = {}
        self.outer: dict[int, int] = {}
        self.containment: dict[int, tuple[int, int]] = {}
        self._next_dart = 0
        self._next_vertex = 0
        self._version = 0
        self._face_cache: tuple[int, dict[int, int]] | None = None
        self._comp_cache: tuple[int, dict[int, int]] | None = None

    # ------------------------------------------------------------------
    # construction
    # ------------------------------------------------------------------

    def copy(self) -> "EmbeddedGraph":
        g = EmbeddedGraph()
        g.twin = dict(self.twin)
        g.origin = dict(self.origin)
        g.nxt = dict(self.nxt)
        g.prv = dict(self.prv)
        g.anchor = dict(self.anchor)
        g.outer = dict(self.outer)
        g.containment = dict(self.containment)
        g._next_dart = self._next_dart
        g._next_vertex = self._next_vertex
        return g

    def add_vertex(self, vid: int | None = None) -> int:
        if vid is None:
            vid = self._next_vertex
        if vid in self.anchor:
            raise StructureError(f"vertex {vid} already exists")
        self._next_vertex = max(self._next_vertex, vid + 1)
        self.anchor[vid] = None
        self._touch()
        return vid

    def new_dart_pair(self) -> tuple[int, int]:
        d = self._next_dart
        self._next_dart += 2
        return d, d + 1

    def _insert_after(self, v: int, d: int, after: int | None) -> None:
        """Insert dart d into v's rotation immediately ccw-after `after`."""
        self.origin[d] = v
        a = self.anchor[v]
        if a is None:
            self.nxt[d] = d
            self.prv[d] = d
            self.anchor[v] = d
            return
        if after is None:
            after = self.prv[a]  # append "at the end" before the anchor
        if self.origin.get(after) != v:
            raise StructureError("insertion anchor dart not at this vertex")
        b = self.nxt[after]
        self.nxt[after] = d
        self.prv[d] = after
        self.nxt[d] = b
        self.prv[b] = d

    def add_edge(self, u: int, v: int, after_u: int | None = None,
                 after_v: int | None = None,
                 darts: tuple[int, int] | None = None) -> tuple[int, int]:
        """Add an edge; darts are inserted ccw-after the given anchor darts.

        Isotopy metadata is maintained best-effort: joining two components
        drops the absorbed component's containment entry, and splitting a
        face keeps stored face pointers on whichever side they land.
        Callers that need exact outer/containment afterwards must set them.
        """
        if u not in self.anchor or v not in self.anchor:
            raise StructureError("endpoint does not exist")
        du, dv = darts if darts is not None else self.new_dart_pair()
        self.twin[du] = dv
        self.twin[dv] = du
        self._insert_after(u, du, after_u)
        self._insert_after(v, dv, after_v)
        if u != v:
            cu, cv = self._rep(u), self._rep(v)
            if cu != cv:
                # merging two components: absorbed side loses its entries
                self.containment.pop(cv, None)
                ou = self.outer.pop(cu, None)
                ov = self.outer.pop(cv, None)
                keep = ou if ou is not None else ov
                if keep is not None:
                    self.outer[cu] = keep
        self._touch()
        return du, dv

    # ------------------------------------------------------------------
    # queries
    # ------------------------------------------------------------------

    def vertices(self) -> list[int]:
        return sorted(self.anchor)

    def darts(self) -> list[int]:
        return sorted(self.twin)

    def edges(self) -> list[int]:
        return sorted(d for d in self.twin if d < self.twin[d])

    def degree(self, v: int) -> int:
        return sum(1 for _ in self.rotation(v))

    def rotation(self, v: int):
        a = self.anchor[v]
        if a is None:
            return
        d = a
        while True:
            yield d
            d = self.nxt[d]
            if d == a:
                return

    def phi(self, d: int) -> int:
        """Face successor: next dart along the face walk (face on the left)."""
        return self.nxt[self.twin[d]]

    def face_of(self) -> dict[int, int]:
        """Map each dart to the canonical (minimum) dart of its phi-orbit."""
        if self._face_cache is not None and self._face_cache[0] == self._version:
            return self._face_cache[1]
        rep: dict[int, int] = {}
        for d in self.twin:
            if d in rep:
                continue
            orbit = [d]
            x = self.phi(d)
            while x != d:
                orbit.append(x)
                x = self.phi(x)
            m = min(orbit)
            for y in orbit:
                rep[y] = m
        self._face_cache = (self._version, rep)
        return rep

    def face_walk(self, d: int) -> list[int]:
        walk = [d]
        x = self.phi(d)
        while x != d:
            walk.append(x)
            x = self.phi(x)
        return walk

    def face_reps(self) -> list[int]:
        return sorted(set(self.face_of().values()))

    def component_of(self) -> dict[int, int]:
        """Map each vertex to the canonical (minimum) vertex of its component."""
        if self._comp_cache is not None and self._comp_cache[0] == self._version:
            return self._comp_cache[1]
        rep: dict[int, int] = {}
        for v in sorted(self.anchor):
            if v in rep:
                continue
            stack = [v]
            seen = [v]
            rep[v] = v
            while stack:
                x = stack.pop()
                for d in self.rotation(x):
                    w = self.origin[self.twin[d]]
                    if w not in rep:
                        rep[w] = v
                        seen.append(w)
                        stack.append(w)
            m = min(seen)
            if m != v:
                for w in seen:
                    rep[w] = m
        self._comp_cache = (self._version, rep)
        return rep

    def components(self) -> list[int]:
        return sorted(set(self.component_of().values()))

    def _rep(self, v: int) -> int:
        return self.component_of()[v]

    def euler_violations(self) -> list[int]:
        """Component reps whose rotation system is not genus zero."""
        comp = self.component_of()
        nv: dict[int, int] = {}
        ne: dict[int, int] = {}
        nf: dict[int, int] = {}
        for v in self.anchor:
            nv[comp[v]] = nv.get(comp[v], 0) + 1
        for d in self.twin:
            if d < self.twin[d]:
                c = comp[self.origin[d]]
                ne[c] = ne.get(c, 0) + 1
        fo = self.face_of()
        for f in set(fo.values()):
            c = comp[self.origin[f]]
            nf[c] = nf.get(c, 0) + 1
        bad = []
        for c, n in nv.items():
            e = ne.get(c, 0)
            f = nf.get(c, 0)
            if e == 0:
                continue  # isolated vertex: no faces
            if n - e + f != 2:
                bad.append(c)
        return sorted(bad)

    def outer_face_rep(self, comp_rep: int) -> int | None:
        """Canonical outer-face dart for a component (None for isolated)."""
        comp = self.component_of()
        for key, d in self.outer.items():
            if comp.get(key) == comp_rep:
                return self.face_of()[d]
        return None

    def canonical_outer(self) -> dict[int, int]:
        """component rep -> canonical outer face id, for edged components."""
        comp = self.component_of()
        fo = self.face_of()
        out: dict[int, int] = {}
        for key, d in self.outer.items():
            out[comp[key]] = fo[d]
        return out

    def canonical_containment(self) -> dict[int, tuple[int, int]]:
        """child comp rep -> (parent comp rep, parent face id)."""
        comp = self.component_of()
        fo = self.face_of()
        out: dict[int, tuple[int, int]] = {}
        for key, (pv, pd) in self.containment.items():
            out[comp[key]] = (comp[pv], fo[pd])
        return out

    # ------------------------------------------------------------------
    # mutations
    # ------------------------------------------------------------------

    def _touch(self) -> None:
        self._version += 1

    def _metadata_darts(self):
        for key in list(self.outer):
            yield ("outer", key)
        for key in list(self.containment):
            yield ("cont", key)

    def _repoint_away(self, drop: set[int]) -> None:
        """Move stored face pointers off darts about to be deleted."""
        def advance(d0: int) -> int | None:
            x = self.phi(d0)
            while x in drop:
                if x == d0:
                    return None
                x = self.phi(x)
            return None if x in drop else x

        for kind, key in self._metadata_darts():
            d = self.outer[key] if kind == "outer" else self.containment[key][1]
            if d not in drop:
                continue
            nd = advance(d)
            if nd is None:
                # face disappears entirely; try the twin side (merged face)
                nd = advance(self.twin[d])
            if nd is None:
                if kind == "outer":
                    del self.outer[key]
                else:
                    raise StructureError("containment face vanished; caller must re-home")
            else:
                if kind == "outer":
                    self.outer[key] = nd
                else:
                    pv, _ = self.containment[key]
                    self.containment[key] = (pv, nd)

    def _rekey_vertex(self, old: int, new: int) -> None:
        for mapping in (self.outer,):
            if old in mapping:
                val = mapping.pop(old)
                mapping.setdefault(new, val)
        if old in self.containment:
            val = self.containment.pop(old)
            self.containment.setdefault(new, val)
        for key, (pv, pd) in list(self.containment.items()):
            if pv == old:
                self.containment[key] = (new, pd)

    def _remove_from_rotation(self, d: int) -> None:
        v = self.origin[d]
        if self.nxt[d] == d:
            self.anchor[v] = None
        else:
            a, b = self.prv[d], self.nxt[d]
            self.nxt[a] = b
            self.prv[b] = a
            if self.anchor[v] == d:
                self.anchor[v] = b

    def contract_edge(self, d: int) -> dict:
        """Contract the non-loop edge of dart d, merging head into tail.

        Returns a record sufficient to invert the operation with
        ``split_vertex``.  Faces are unchanged apart from losing the two
        darts of the contracted edge.
        """
        dt = self.twin[d]
        u, v = self.origin[d], self.origin[dt]
        if u == v:
            raise StructureError("cannot contract a loop")
        self._repoint_away({d, dt})
        fan_first = self.nxt[dt] if self.nxt[dt] != dt else None
        fan_last = self.prv[dt] if fan_first is not None else None
        rec = {
            "kept": u, "removed": v, "dart": d,
            "prev_at_u": self.prv[d] if self.nxt[d] != d else None,
            "fan": (fan_first, fan_last),
            "anchor_v": self.anchor[v],
        }
        # relabel origins of v's darts
        for x in list(self.rotation(v)):
            self.origin[x] = u
        # splice
        if fan_first is None:
            self._remove_from_rotation_merged(d, u)
        else:
            if self.nxt[d] == d:
                # u had only d: u's rotation becomes v's fan
                self.nxt[fan_last] = fan_first
                self.prv[fan_first] = fan_last
                self.anchor[u] = fan_first
            else:
                a, b = self.prv[d], self.nxt[d]
                self.nxt[a] = fan_first
                self.prv[fan_first] = a
                self.nxt[fan_last] = b
                self.prv[b] = fan_last
                if self.anchor[u] == d:
                    self.anchor[u] = b
        for x in (d, dt):
            del self.twin[x], self.origin[x], self.nxt[x], self.prv[x]
        del self.anchor[v]
        self._rekey_vertex(v, u)
        self._touch()
        return rec

    def _remove_from_rotation_merged(self, d: int, u: int) -> None:
        if self.nxt[d] == d:
            self.anchor[u] = None
        else:
            a, b = self.prv[d], self.nxt[d]
            self.nxt[a] = b
            self.prv[b] = a
            if self.anchor[u] == d:
                self.anchor[u] = b

    def split_vertex(self, v: int, first: int, last: int,
                     new_vertex: int | None = None,
                     darts: tuple[int, int] | None = None) -> tuple[int, int, int]:
        """Move the contiguous ccw arc first..last of v's rotation to a new
        vertex joined to v by a fresh edge; inverse of contract_edge.

        Returns (new_vertex, dart_at_v, dart_at_new).
        """
        arc = []
        x = first
        while True:
            if self.origin.get(x) != v:
                raise StructureError("arc dart not at vertex")
            arc.append(x)
            if x == last:
                break
            x = self.nxt[x]
            if x == first:
                raise StructureError("arc does not terminate at `last`")
        w = self.add_vertex(new_vertex)
        dv, dw = darts if darts is not None else self.new_dart_pair()
        self.twin[dv] = dw
        self.twin[dw] = dv
        before = self.prv[first]
        after = self.nxt[last]
        whole = before == last  # the arc is the entire rotation of v
        # detach arc
        for x in arc:
            self.origin[x] = w
        if whole:
            self.anchor[v] = None
        else:
            self.nxt[before] = after
            self.prv[after] = before
            if self.anchor[v] in arc:
                self.anchor[v] = after
        # rotation at w: (dw, arc...)
        self.origin[dw] = w
        self.anchor[w] = dw
        seq = [dw] + arc
        for i, x in enumerate(seq):
            self.nxt[x] = seq[(i + 1) % len(seq)]
            self.prv[x] = seq[i - 1]
        # insert dv where the arc was
        self.origin[dv] = v
        if self.anchor[v] is None:
            self.nxt[dv] = dv
            self.prv[dv] = dv
            self.anchor[v] = dv
        else:
            self.nxt[before] = dv
            self.prv[dv] = before
            self.nxt[dv] = after
            self.prv[after] = dv
        self._touch()
        return w, dv, dw

    def multisplit(self, v: int, blocks: list[tuple[int, int]],
                   new_vertices: list[int] | None = None) -> list[tuple[int, int, int]]:
        """Replace v by a star: each contiguous block of v's rotation moves to
        a leaf.  Blocks must cover the rotation in ccw order.  Returns a list
        of (leaf, dart_at_center, dart_at_leaf).
        """
        if not blocks:
            raise StructureError("multisplit needs at least one block")
        # validate coverage in ccw order
        seq = []
        for first, last in blocks:
            x = first
            while True:
                seq.append(x)
                if x == last:
                    break
                x = self.nxt[x]
        rot = list(self.rotation(v))
        if len(seq) != len(rot) or set(seq) != set(rot):
            raise StructureError("blocks do not partition the rotation into ccw arcs")
        start = rot.index(seq[0])
        if [rot[(start + i) % len(rot)] for i in range(len(rot))] != seq:
            raise StructureError("blocks are not contiguous ccw arcs in order")
        out = []
        for first, last in blocks:
            out.append(self.split_vertex(v, first, last,
                                         None if new_vertices is None else None))
        # after all splits the center's rotation is exactly the star darts
        return out

    def delete_edge(self, d: int) -> None:
        """Delete a non-bridge edge; the two incident faces merge."""
        dt = self.twin[d]
        self._repoint_away({d, dt})
        self._remove_from_rotation(d)
        self._remove_from_rotation(dt)
        for x in (d, dt):
            del self.twin[x], self.origin[x], self.nxt[x], self.prv[x]
        self._touch()

    def delete_isolated_vertex(self, v: int) -> None:
        if self.anchor[v] is not None:
            raise StructureError("vertex is not isolated")
        del self.anchor[v]
        self.outer.pop(v, None)
        self.containment.pop(v, None)
        self._touch()

    # ------------------------------------------------------------------
    # structural checks
    # ------------------------------------------------------------------

    def check(self) -> list[str]:
        """Structural well-formedness violations (codes, human-readable)."""
        bad: list[str] = []
        for d, t in self.twin.items():
            if t == d or self.twin.get(t) != d:
                bad.append(f"twin not a fixed-point-free involution at dart {d}")
        seen: dict[int, int] = {}
        for v in self.anchor:
            for d in self.rotation(v):
                if d in seen:
                    bad.append(f"dart {d} appears in two rotations")
                seen[d] = v
                if self.origin.get(d) != v:
                    bad.append(f"dart {d} origin mismatch")
        for d in self.twin:
            if d not in seen:
                bad.append(f"dart {d} missing from all rotations")
        if not bad:
            bad.extend(f"component {c} fails genus-zero (Euler) check"
                       for c in self.euler_violations())
            bad.extend(self._check_isotopy_metadata())
        return bad

    def _check_isotopy_metadata(self) -> list[str]:
        bad: list[str] = []
        comp = self.component_of()
        fo = self.face_of()
        edged = {comp[self.origin[d]] for d in self.twin}
        covered: set[int] = set()
        for key, d in self.outer.items():
            if key not in self.anchor or d not in self.twin:
                bad.append(f"outer entry {key} references missing vertex/dart")
                continue
            c = comp[key]
            if comp[self.origin[d]] != c:
                bad.append(f"outer dart of component {c} lies in another component")
            if c in covered:
                bad.append(f"component {c} has two outer faces")
            covered.add(c)
        for c in edged:
            if c not in covered:
                bad.append(f"component {c} lacks an outer face")
        # containment must be a forest with valid parent faces
        parent: dict[int, int] = {}
        for key, (pv, pd) in self.containment.items():
            if key not in self.anchor or pv not in self.anchor or pd not in self.twin:
                bad.append(f"containment entry {key} references missing data")
                continue
            c, p = comp[key], comp[pv]
            if c == p:
                bad.append(f"component {c} contained in itself")
                continue
            if comp[self.origin[pd]] != p:
                bad.append(f"containment face of {c} not on parent component")
            if fo[pd] == self.outer_face_rep(p):
                bad.append(f"component {c} contained in parent outer face")
            if c in parent:
                bad.append(f"component {c} has two containment parents")
            parent[c] = p
        # acyclicity
        for c in list(parent):
            seen = {c}
            x = c
            while x in parent:
                x = parent[x]
                if x in seen:
                    bad.append(f"containment cycle through component {x}")
                    break
                seen.add(x)
        return bad


# ----------------------------------------------------------------------
# convenience constructors and isotopy comparison
# ----------------------------------------------------------------------

def build_graph(rotations: dict[int, list[int]], twins: dict[int, int],
                outer: dict[int, int] | None = None,
                containment: dict[int, tuple[int, int]] | None = None) -> EmbeddedGraph:
    """Assemble an EmbeddedGraph from explicit rotations and a twin map."""
    g = EmbeddedGraph()
    for v in sorted(rotations):
        g.add_vertex(v)
    for d, t in twins.items():
        if twins.get(t) != d or t == d:
            raise StructureError("twin map is not a fixed-point-free involution")
    seen = set()
    for v, rot in rotations.items():
        for d in rot:
            if d in seen:
                raise StructureError(f"dart {d} listed twice")
            seen.add(d)
    if seen != set(twins):
        raise StructureError("rotations and twin map disagree on the dart set")
    for v, rot in sorted(rotations.items()):
        for i, d in enumerate(rot):
            g.origin[d] = v
            g.nxt[d] = rot[(i + 1) % len(rot)]
            g.prv[d] = rot[i - 1]
        if rot:
            g.anchor[v] = rot[0]
    g.twin = dict(twins)
    g._next_dart = max(twins, default=-1) + 1
    g._next_vertex = max(rotations, default=-1) + 1
    if outer:
        g.outer = dict(outer)
    else:
        # default: canonical min-dart face per component
        comp = g.component_of()
        fo = g.face_of()
        best: dict[int, int] = {}
        for d in sorted(g.twin):
            c = comp[g.origin[d]]
            if c not in best:
                best[c] = fo[d]
        g.outer = {c: d for c, d in best.items()}
    if containment:
        g.containment = dict(containment)
    g._touch()
    return g


def path_graph(n: int) -> EmbeddedGraph:
    """Path on vertices 0..n-1 (edge i: darts 2i, 2i+1)."""
    rot: dict[int, list[int]] = {v: [] for v in range(n)}
    twins: dict[int, int] = {}
    for i in range(n - 1):
        a, b = 2 * i, 2 * i + 1
        twins[a] = b
        twins[b] = a
        rot[i].append(a)
        rot[i + 1].insert(0, b)
    return build_graph(rot, twins)


def cycle_graph(n: int) -> EmbeddedGraph:
    """Cycle on vertices 0..n-1 embedded as a circle (ccw vertex order)."""
    if n == 1:
        # single loop
        return build_graph({0: [0, 1]}, {0: 1, 1: 0})
    rot: dict[int, list[int]] = {v: [] for v in range(n)}
    twins: dict[int, int] = {}
    for i in range(n):
        a, b = 2 * i, 2 * i + 1
        twins[a] = b
        twins[b] = a
    for v in range(n):
        # dart to next vertex, then dart to previous (ccw at a circle vertex)
        rot[v] = [2 * v, 2 * ((v - 1) % n) + 1]
    return build_graph(rot, twins)


def same_isotopy_class(g1: EmbeddedGraph, g2: EmbeddedGraph,
                       corr: dict[int, int],
                       vertex_corr: dict[int, int] | None = None) -> bool:
    """Orientation-preserving isotopy comparison under a dart bijection.

    ``corr`` maps every dart of g1 to a dart of g2; it must be a graph
    isomorphism (twin- and origin-consistent).  Isolated vertices have no
    darts, so when either graph has any, ``vertex_corr`` must cover them.
    Rotations, outer faces and the containment forest must all correspond.
    """
    if set(corr) != set(g1.twin) or set(corr.values()) != set(g2.twin):
        raise StructureError("correspondence is not a dart bijection")
    vmap: dict[int, int] = {}
    for d, d2 in corr.items():
        if corr[g1.twin[d]] != g2.twin[d2]:
            raise StructureError("correspondence does not respect twins")
        v, v2 = g1.origin[d], g2.origin[d2]
        if vmap.setdefault(v, v2) != v2:
            raise StructureError("correspondence does not respect vertices")
    iso1 = {v for v in g1.anchor if g1.anchor[v] is None}
    iso2 = {v for v in g2.anchor if g2.anchor[v] is None}
    for v in iso1:
        if vertex_corr is None or vertex_corr.get(v) not in iso2:
            raise StructureError("isolated vertices need an explicit vertex map")
        vmap[v] = vertex_corr[v]
    if len(set(vmap.values())) != len(vmap):
        raise StructureError("correspondence not injective on vertices")
    if len(g1.anchor) != len(g2.anchor) or len(iso1) != len(iso2):
        raise StructureError("correspondence is not a graph isomorphism")
    # rotations must match (orientation-preserving: successor to successor)
    for d, d2 in corr.items():
        if corr[g1.nxt[d]] != g2.nxt[d2]:
            return False
    # outer faces correspond
    fo2 = g2.face_of()
    out1 = g1.canonical_outer()
    out2 = g2.canonical_outer()
    comp2 = g2.component_of()
    for c1, f1 in out1.items():
        f2 = fo2[corr[f1]]
        c2 = comp2[g2.origin[corr[f1]]]
        if out2.get(c2) != f2:
            return False
    # containment forests correspond (isolated-vertex components included)
    cont1 = g1.canonical_containment()
    cont2 = g2.canonical_containment()
    if len(cont1) != len(cont2):
        return False
    comp1 = g1.component_of()
    # build component correspondence via the vertex map
    compmap: dict[int, int] = {}
    for v, v2 in vmap.items():
        compmap[comp1[v]] = comp2[v2]
    for c1, (p1, f1) in cont1.items():
        got = cont2.get(compmap[c1])
        if got is None:
            return False
        p2, f2 = got
        if p2 != compmap[p1] or f2 != fo2[corr[f1]]:
            return False
    return True


def identity_correspondence(g: EmbeddedGraph) -> dict[int, int]:
    return {d: d for d in g.twin}
