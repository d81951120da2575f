"""Canonical 2-sum tree decompositions and predicates evaluated on them.

Vertices are matroids whose ground sets mix elements of the decomposed
matroid with basepoint labels ``p0, p1, ...``; each tree edge is a
basepoint shared by exactly its two endpoint labels.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass
from typing import Any, Iterable, Optional

from .connectivity import TwoSeparation, is_k_connected, two_separation_masks
from .constructions import extract_part, fresh_label, two_sum
from .core import Matroid, is_binary, is_connected, is_uniform
from .errors import BadEdge, BadN, NotConnected
from .io import from_document, to_document
from .isominor import is_minor, is_n_connected

CIRCUIT = "circuit"
COCIRCUIT = "cocircuit"
THREE_CONNECTED = "three_connected"


@dataclass(frozen=True)
class DecompTree:
    matroid: Matroid
    vertices: tuple[Matroid, ...]
    edges: tuple[tuple[str, int, int], ...]

    def __post_init__(self):
        adj: dict[int, list[tuple[int, int]]] = {v: [] for v in range(len(self.vertices))}
        for k, (_, a, b) in enumerate(self.edges):
            adj[a].append((k, b))
            adj[b].append((k, a))
        object.__setattr__(self, "_adj", adj)

    @property
    def basepoints(self) -> frozenset[str]:
        return frozenset(p for p, _, _ in self.edges)

    def neighbors(self, v: int) -> list[int]:
        return [u for _, u in self._adj[v]]

    def incident_edges(self, v: int) -> list[int]:
        return [k for k, _ in self._adj[v]]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def ground_elements(self, v: int) -> frozenset[str]:
        """Elements of the vertex label that are not basepoints."""
        return frozenset(self.vertices[v].labels) - self.basepoints

    def _reach(self, start: int, banned_edge: int) -> set[int]:
        seen = {start}
        todo = [start]
        while todo:
            v = todo.pop()
            for k, u in self._adj[v]:
                if k != banned_edge and u not in seen:
                    seen.add(u)
                    todo.append(u)
        return seen

    def displayed_sides(self, edge: int, v: Optional[int] = None) -> tuple[frozenset[str], frozenset[str]]:
        """Ground elements on the side of ``edge`` containing ``v``, then the rest."""
        if not 0 <= edge < len(self.edges):
            raise BadEdge(f"no tree edge with index {edge}")
        _, a, b = self.edges[edge]
        if v is None:
            v = a
        near_v = self._reach(v, edge)
        near = frozenset().union(*(self.ground_elements(u) for u in near_v))
        return near, frozenset(self.matroid.labels) - near

    def path(self, u: int, v: int) -> list[int]:
        prev = {u: None}
        todo = deque([u])
        while todo:
            x = todo.popleft()
            for _, y in self._adj[x]:
                if y not in prev:
                    prev[y] = x
                    todo.append(y)
        out = [v]
        while out[-1] != u:
            out.append(prev[out[-1]])
        return out[::-1]

    def edge_between(self, u: int, v: int) -> int:
        for k, w in self._adj[u]:
            if w == v:
                return k
        raise BadEdge(f"vertices {u} and {v} are not adjacent")


def vertex_class(L: Matroid) -> str:
    if is_uniform(L) and L.rank() == L.n - 1:
        return CIRCUIT
    if is_uniform(L) and L.rank() == 1:
        return COCIRCUIT
    return THREE_CONNECTED


def _is_final(L: Matroid) -> bool:
    return L.n < 4 or vertex_class(L) != THREE_CONNECTED or is_k_connected(L, 3)


def canonical_tree(M: Matroid, rng: Optional[random.Random] = None) -> DecompTree:
    """The canonical tree decomposition of a connected matroid.

    With ``rng`` the 2-separation used at each split is picked at random;
    the resulting tree is the same up to basepoint names.
    """
    if M.n < 2 or not is_connected(M):
        raise NotConnected("canonical trees exist only for connected matroids")
    vertices: list[Matroid] = [M]
    edges: list[list] = []
    used = set(M.labels)
    todo = [0]
    while todo:
        i = todo.pop(0)
        L = vertices[i]
        if _is_final(L):
            continue
        masks = two_separation_masks(L)
        sides = sorted({x for x in masks} | {L.full ^ x for x in masks})
        x = rng.choice(sides) if rng is not None else sides[0]
        p = fresh_label(used)
        used.add(p)
        LX = extract_part(L, L.subset(x), p)
        LY = extract_part(L, L.subset(L.full ^ x), p)
        j = len(vertices)
        vertices[i] = LX
        vertices.append(LY)
        ylab = set(LY.labels)
        for e in edges:
            q, a, b = e
            if q in ylab:
                if a == i:
                    e[1] = j
                if b == i:
                    e[2] = j
        edges.append([p, i, j])
        todo.extend([i, j])
    vertices, edges = _merge_same_type(vertices, edges)
    return DecompTree(M, tuple(vertices), tuple((p, a, b) for p, a, b in edges))


def _merge_same_type(vertices: list[Matroid], edges: list[list]):
    while True:
        kinds = [vertex_class(L) for L in vertices]
        for k, (p, a, b) in enumerate(edges):
            if kinds[a] == kinds[b] and kinds[a] != THREE_CONNECTED:
                break
        else:
            return vertices, edges
        vertices[a] = two_sum(vertices[a], vertices[b], p)
        del edges[k]
        del vertices[b]
        for e in edges:
            for s in (1, 2):
                if e[s] == b:
                    e[s] = a
                if e[s] > b:
                    e[s] -= 1


def reconstruct(T: DecompTree, order: Optional[Iterable[int]] = None) -> Matroid:
    """2-sum the vertex labels across every tree edge (in ``order`` if given)."""
    parent = list(range(len(T.vertices)))
    labels = dict(enumerate(T.vertices))

    def find(v: int) -> int:
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    order = range(len(T.edges)) if order is None else order
    for k in order:
        p, a, b = T.edges[k]
        ra, rb = find(a), find(b)
        labels[ra] = two_sum(labels[ra], labels[rb], p)
        parent[rb] = ra
        del labels[rb]
    (out,) = labels.values()
    return out


def displayed_separation(T: DecompTree, edge: int) -> TwoSeparation:
    x, y = T.displayed_sides(edge)
    M = T.matroid
    xm = M.mask(x)
    t = M.rank_table
    return TwoSeparation(x, y, t[xm] + t[M.full ^ xm] - t[M.full])


def tree_signature(T: DecompTree) -> tuple:
    """Basepoint-name-free description used to compare decompositions.

    Each basepoint of a vertex is renamed by the ground elements displayed on
    its far side; the signature is the sorted multiset of the renamed labels.
    """
    sig = []
    for v, L in enumerate(T.vertices):
        rename = {}
        for k in T.incident_edges(v):
            _, far = T.displayed_sides(k, v)
            rename[T.edges[k][0]] = "<" + ",".join(sorted(far)) + ">"
        R = L.relabel(rename)
        R = R.reorder(sorted(R.labels))
        sig.append((R.labels, R.rank_table))
    return tuple(sorted(sig))


def same_tree(T1: DecompTree, T2: DecompTree) -> bool:
    return tree_signature(T1) == tree_signature(T2)


# -- vertex classification ---------------------------------------------------


@dataclass(frozen=True)
class VertexInfo:
    index: int
    kind: str
    binary: bool
    non_basepoints: int
    n_connected: Optional[bool] = None


def classify_vertices(T: DecompTree, N: Optional[Matroid] = None) -> list[VertexInfo]:
    return [
        VertexInfo(
            v,
            vertex_class(L),
            is_binary(L),
            len(T.ground_elements(v)),
            None if N is None else is_n_connected(L, N),
        )
        for v, L in enumerate(T.vertices)
    ]


def _tree_condition(T: DecompTree, good: list[bool]) -> bool:
    """(i) bad vertices hold at most one element of E(M); (ii) any path between
    two bad vertices each holding exactly one such element meets a good vertex."""
    counts = [len(T.ground_elements(v)) for v in range(len(T.vertices))]
    bad = [v for v in range(len(T.vertices)) if not good[v]]
    if any(counts[v] > 1 for v in bad):
        return False
    singles = [v for v in bad if counts[v] == 1]
    for i, u in enumerate(singles):
        for v in singles[i + 1:]:
            if not any(good[w] for w in T.path(u, v)):
                return False
    return True


def u24_condition(T: DecompTree) -> bool:
    binary = [is_binary(L) for L in T.vertices]
    if all(binary):
        return False
    return _tree_condition(T, [not b for b in binary])


def general_condition(T: DecompTree, N: Matroid) -> bool:
    if N.n < 4 or not is_k_connected(N, 3):
        raise BadN("N must be 3-connected with at least four elements")
    if not is_minor(T.matroid, N):
        return False
    return _tree_condition(T, [is_n_connected(L, N) for L in T.vertices])


def u34_forbidden_config(T: DecompTree) -> bool:
    """True when no vertex of degree one or two labelled by a rank-2 uniform
    matroid has only cocircuit neighbours that each hold an element of E(M)."""
    for v, L in enumerate(T.vertices):
        d = T.degree(v)
        if not 1 <= d <= 2 or not (is_uniform(L) and L.rank() == 2):
            continue
        if all(
            vertex_class(T.vertices[u]) == COCIRCUIT and T.ground_elements(u)
            for u in T.neighbors(v)
        ):
            return False
    return True


def mk4_vertex_condition(T: DecompTree) -> bool:
    return all(L.rank() >= 3 and L.n - L.rank() >= 3 for L in T.vertices)


# -- minors seen through the tree -------------------------------------------


def locate_vertex(T: DecompTree, Z: Iterable[str]) -> list[int]:
    """Vertices that, across every tree edge, keep at least ``|Z| - 1``
    elements of ``Z`` on their own side."""
    Z = frozenset(Z)
    out = []
    for v in range(len(T.vertices)):
        if all(len(T.displayed_sides(k, v)[0] & Z) >= len(Z) - 1 for k in range(len(T.edges))):
            out.append(v)
    return out


def path_two_sum(T: DecompTree, u: int, v: int) -> Matroid:
    """2-sum of the labels at ``u`` and ``v`` across the end basepoints of
    the tree path joining them; M has a minor isomorphic to it."""
    if u == v:
        raise BadEdge("path endpoints must differ")
    path = T.path(u, v)
    p1 = T.edges[T.edge_between(path[0], path[1])][0]
    p2 = T.edges[T.edge_between(path[-2], path[-1])][0]
    return two_sum(T.vertices[u], T.vertices[v], p1, p2)


# -- serialization -----------------------------------------------------------


def tree_to_json(T: DecompTree, N: Optional[Matroid] = None) -> dict[str, Any]:
    info = classify_vertices(T, N)
    verts = []
    for v, L in enumerate(T.vertices):
        doc = to_document(L)
        doc["class"] = info[v].kind
        doc["binary"] = info[v].binary
        doc["non_basepoints"] = sorted(T.ground_elements(v))
        if N is not None:
            doc["n_connected"] = info[v].n_connected
        verts.append(doc)
    return {
        "matroid": to_document(T.matroid),
        "vertices": verts,
        "edges": [[p, a, b] for p, a, b in T.edges],
    }


def tree_from_json(doc: dict[str, Any]) -> DecompTree:
    M = from_document(doc["matroid"])
    verts = tuple(
        from_document({k: d[k] for k in ("ground", "bases")}) for d in doc["vertices"]
    )
    return DecompTree(M, verts, tuple((p, int(a), int(b)) for p, a, b in doc["edges"]))


def render_ascii(T: DecompTree) -> str:
    lines = []
    for v, L in enumerate(T.vertices):
        kind = vertex_class(L)
        lines.append(
            f"[{v}] {kind} rank={L.rank()} n={L.n} elements={{{','.join(L.labels)}}}"
        )
    for p, a, b in T.edges:
        lines.append(f"  {a} --{p}-- {b}")
    return "\n".join(lines)
