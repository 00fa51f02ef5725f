"""Spin-network amplitudes on arbitrary graphs via generalized Racah sums.

A graph carries directed edges and, at each vertex, non-negative corner
labels k^v_{ee'} for unordered pairs of incident edges.  The amplitude is a
signed sum over multisets of cycle unions (or simple-loop unions) whose
corner-incidence counts reproduce the labels.

Sign conventions are anchored to the Bargmann contraction oracle: a cycle
contributes -(-1)^(number of traversed edges agreeing with the orientation)
times (-1)^(number of corners traversed against the vertex's slot order).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .exact import factorial

__all__ = [
    "AmplitudeGraph",
    "complete_graph",
    "enumerate_simple_cycles",
    "enumerate_simple_loops",
    "enumerate_disjoint_unions",
    "loop_corner_counts",
    "loop_sign",
    "racah_cycles",
    "amplitude_loops",
    "graph_to_json",
    "graph_from_json",
]


@dataclass(frozen=True)
class AmplitudeGraph:
    """Directed simple graph with per-vertex corner labels.

    corners[v] maps unordered pairs of edge indices (i < j, both incident to
    v) to non-negative integers.  Missing pairs mean zero.
    """

    vertices: tuple
    edges: tuple  # (src, dst) vertex names
    corners: tuple = field(default=())  # ((vertex, ((e1, e2), k) pairs...), ...)

    @classmethod
    def build(cls, vertices, edges, corners=None) -> "AmplitudeGraph":
        vertices = tuple(vertices)
        edges = tuple((s, d) for s, d in edges)
        seen = set()
        for s, d in edges:
            if s == d:
                raise ValueError("self-loops are not supported")
            key = frozenset((s, d))
            if key in seen:
                raise ValueError("parallel edges are not supported")
            seen.add(key)
        packed = []
        corners = corners or {}
        for v in vertices:
            block = corners.get(v, {})
            items = []
            for (e1, e2), k in sorted(block.items()):
                if e1 == e2 or k < 0:
                    raise ValueError("corner labels need distinct edges and k >= 0")
                items.append(((min(e1, e2), max(e1, e2)), int(k)))
            packed.append((v, tuple(items)))
        return cls(vertices, edges, tuple(packed))

    # -- structure -----------------------------------------------------------
    def vertex_index(self, v) -> int:
        return self.vertices.index(v)

    def incident_edges(self, v) -> tuple:
        return tuple(i for i, (s, d) in enumerate(self.edges) if v in (s, d))

    def neighbors(self, v) -> tuple:
        out = []
        for s, d in self.edges:
            if s == v:
                out.append(d)
            elif d == v:
                out.append(s)
        return tuple(out)

    def edge_index(self, a, b) -> int:
        for i, (s, d) in enumerate(self.edges):
            if (s, d) == (a, b) or (s, d) == (b, a):
                return i
        raise KeyError(f"no edge between {a} and {b}")

    def corner_map(self, v) -> dict:
        for name, items in self.corners:
            if name == v:
                return dict(items)
        return {}

    def corner(self, v, e1: int, e2: int) -> int:
        return self.corner_map(v).get((min(e1, e2), max(e1, e2)), 0)

    def edge_two_j(self, eidx: int) -> int:
        s, _ = self.edges[eidx]
        return sum(k for (a, b), k in self.corner_map(s).items() if eidx in (a, b))

    def validate(self) -> None:
        """Corner labels must give each edge the same twice-spin at both ends."""
        for eidx, (s, d) in enumerate(self.edges):
            at_src = sum(k for (a, b), k in self.corner_map(s).items() if eidx in (a, b))
            at_dst = sum(k for (a, b), k in self.corner_map(d).items() if eidx in (a, b))
            if at_src != at_dst:
                raise ValueError(
                    f"edge {self.edges[eidx]} has twice-spin {at_src} at source "
                    f"but {at_dst} at target"
                )
        for name, items in self.corners:
            inc = set(self.incident_edges(name))
            for (e1, e2), _ in items:
                if e1 not in inc or e2 not in inc:
                    raise ValueError(f"corner at {name} uses a non-incident edge")

    def total_corner_sum(self) -> int:
        return sum(k for _, items in self.corners for _, k in items)


def complete_graph(n: int, names=None, corners=None) -> AmplitudeGraph:
    """K_n with edges oriented low-index -> high-index, lexicographic order."""
    names = list(names) if names else [str(i + 1) for i in range(n)]
    edges = [(names[i], names[j]) for i in range(n) for j in range(i + 1, n)]
    return AmplitudeGraph.build(names, edges, corners)


# -- cycle and loop enumeration ----------------------------------------------


def _canonical_walk(walk: tuple, index) -> tuple:
    """Representative of a closed walk up to rotation and reversal."""
    n = len(walk)
    best = None
    for seq in (walk, tuple(reversed(walk))):
        for r in range(n):
            rot = seq[r:] + seq[:r]
            key = tuple(index[v] for v in rot)
            if best is None or key < best[0]:
                best = (key, rot)
    return best[1]


def enumerate_simple_cycles(g: AmplitudeGraph) -> tuple:
    """All simple cycles (no repeated vertices), as canonical vertex tuples."""
    index = {v: i for i, v in enumerate(g.vertices)}
    adj = {v: sorted(g.neighbors(v), key=index.get) for v in g.vertices}
    cycles = []
    order = sorted(g.vertices, key=index.get)
    for start in order:
        stack = [(start, (start,), {start})]
        while stack:
            cur, path, seen = stack.pop()
            for nxt in adj[cur]:
                if index[nxt] < index[start]:
                    continue
                if nxt == start and len(path) >= 3:
                    # canonical direction: second vertex smaller than last
                    if index[path[1]] < index[path[-1]]:
                        cycles.append(path)
                    continue
                if nxt in seen:
                    continue
                stack.append((nxt, path + (nxt,), seen | {nxt}))
    return tuple(sorted(cycles, key=lambda c: (len(c), [index[v] for v in c])))


def enumerate_simple_loops(g: AmplitudeGraph, max_length: int | None = None) -> tuple:
    """All closed edge-walks without edge repetition, up to rotation/reversal.

    Vertices may repeat; every simple cycle appears among the loops.
    """
    index = {v: i for i, v in enumerate(g.vertices)}
    nedges = len(g.edges)
    limit = max_length if max_length is not None else nedges
    found = {}
    for e0 in range(nedges):
        s, d = g.edges[e0]
        for a, b in ((s, d), (d, s)):
            # walk state: current vertex, used edges, vertex walk
            stack = [(b, frozenset((e0,)), (a, b))]
            while stack:
                cur, used, walk = stack.pop()
                if cur == a and len(walk) >= 4:
                    canon = _canonical_walk(walk[:-1], index)
                    found[canon] = True
                # extend; allow passing through `a` and returning later
                if len(walk) - 1 >= limit:
                    continue
                for eidx in range(e0 + 1, nedges):
                    if eidx in used:
                        continue
                    es, ed = g.edges[eidx]
                    if cur == es:
                        nxt = ed
                    elif cur == ed:
                        nxt = es
                    else:
                        continue
                    new_walk = walk + (nxt,)
                    if nxt == a and len(new_walk) >= 4:
                        canon = _canonical_walk(new_walk[:-1], index)
                        found[canon] = True
                    stack.append((nxt, used | {eidx}, new_walk))
    # remove non-closed duplicates and sort
    loops = [w for w in found]
    return tuple(sorted(loops, key=lambda c: (len(c), [index[v] for v in c])))


def walk_edge_indices(g: AmplitudeGraph, walk: tuple) -> tuple:
    n = len(walk)
    return tuple(g.edge_index(walk[i], walk[(i + 1) % n]) for i in range(n))


def loop_corner_counts(g: AmplitudeGraph, walk: tuple) -> dict:
    """Corner incidence of a closed walk: (vertex, (e_lo, e_hi)) -> count."""
    n = len(walk)
    eidx = walk_edge_indices(g, walk)
    counts: dict = {}
    for i in range(n):
        v = walk[i]
        e_in = eidx[(i - 1) % n]
        e_out = eidx[i]
        key = (v, (min(e_in, e_out), max(e_in, e_out)))
        counts[key] = counts.get(key, 0) + 1
    return counts


def loop_sign(g: AmplitudeGraph, walk: tuple) -> int:
    """Orientation/ordering sign of one cycle or loop (traversal independent)."""
    n = len(walk)
    eidx = walk_edge_indices(g, walk)
    agree = sum(1 for i in range(n) if g.edges[eidx[i]][0] == walk[i])
    flips = sum(1 for i in range(n) if eidx[(i - 1) % n] > eidx[i])
    return -(-1) ** agree * (-1) ** flips


def enumerate_disjoint_unions(items, disjoint) -> tuple:
    """All non-empty subsets of `items` whose members are pairwise `disjoint`."""
    items = list(items)
    out = []

    def extend(start, chosen):
        for i in range(start, len(items)):
            cand = items[i]
            if all(disjoint(cand, c) for c in chosen):
                out.append(tuple(chosen + [cand]))
                extend(i + 1, chosen + [cand])

    extend(0, [])
    return tuple(out)


def _vertex_disjoint(w1: tuple, w2: tuple) -> bool:
    return not (set(w1) & set(w2))


def _edge_sets_disjoint(g):
    def check(w1, w2):
        return not (set(walk_edge_indices(g, w1)) & set(walk_edge_indices(g, w2)))

    return check


def _corner_targets(g: AmplitudeGraph) -> dict:
    targets = {}
    for name, items in g.corners:
        for pair, k in items:
            if k:
                targets[(name, pair)] = k
    return targets


def _racah_sum(variables, targets: dict, budget: int | None = None) -> Fraction:
    """Sum of (-1)^N sign^M (N+1)!/prod(M!) over solutions of the corner system.

    `variables` is a list of (incidence dict, sign).  Corner-driven depth
    first search: the first unsatisfied corner is always covered next, and
    choices at one corner run in nondecreasing variable order so each
    multiset of variables is enumerated exactly once.
    """
    corners = sorted(targets)
    if not corners:
        return Fraction(1)  # only the empty multiset
    corner_pos = {c: i for i, c in enumerate(corners)}
    ncorners = len(corners)
    vars_packed = []
    for inc, sign in variables:
        if not all(c in corner_pos for c in inc):
            continue  # touches a zero-target corner; multiplicity is forced to 0
        packed = tuple(
            sorted(((corner_pos[c], m) for c, m in inc.items() if m))
        )
        if packed:
            vars_packed.append((packed, sign))
    vars_packed.sort()
    covering = [[] for _ in range(ncorners)]
    for vi, (packed, _) in enumerate(vars_packed):
        for ci, _m in packed:
            covering[ci].append(vi)

    residual = [targets[c] for c in corners]
    total = Fraction(0)
    state = {"solutions": 0}

    def rec(first_unsat, vmin, n_acc, denom_acc, sign_acc, last_v, run):
        nonlocal total
        c = first_unsat
        while c < ncorners and residual[c] == 0:
            c += 1
        if c == ncorners:
            if budget is not None:
                state["solutions"] += 1
                if state["solutions"] > budget:
                    raise RuntimeError("racah solution budget exceeded")
            total += (
                Fraction(factorial(n_acc + 1), denom_acc) * sign_acc * ((-1) ** n_acc)
            )
            return
        if c != first_unsat:
            vmin = 0  # new corner level: variable order restarts
        for vi in covering[c]:
            if vi < vmin:
                continue
            packed, sign = vars_packed[vi]
            ok = True
            for ci, m in packed:
                if residual[ci] < m:
                    ok = False
                    break
            if not ok:
                continue
            for ci, m in packed:
                residual[ci] -= m
            new_run = run + 1 if vi == last_v else 1
            rec(c, vi, n_acc + 1, denom_acc * new_run, sign_acc * sign, vi, new_run)
            for ci, m in packed:
                residual[ci] += m

    rec(0, 0, 0, 1, 1, -1, 0)
    return total


def racah_cycles(g: AmplitudeGraph, budget: int | None = None) -> Fraction:
    """Generalized Racah sum over unions of vertex-disjoint simple cycles."""
    g.validate()
    targets = _corner_targets(g)
    if not targets:
        return Fraction(1)
    cycles = enumerate_simple_cycles(g)
    unions = enumerate_disjoint_unions(cycles, _vertex_disjoint)
    variables = []
    for union in unions:
        inc: dict = {}
        sign = 1
        for w in union:
            for key, c in loop_corner_counts(g, w).items():
                inc[key] = inc.get(key, 0) + c
            sign *= loop_sign(g, w)
        variables.append((inc, sign))
    return _racah_sum(variables, targets, budget)


def amplitude_loops(g: AmplitudeGraph, budget: int | None = None) -> Fraction:
    """Exact discrete amplitude: Racah sum over unions of edge-disjoint simple loops."""
    g.validate()
    targets = _corner_targets(g)
    if not targets:
        return Fraction(1)
    loops = enumerate_simple_loops(g)
    # prune loops covering corners with zero target
    usable = []
    for w in loops:
        counts = loop_corner_counts(g, w)
        if all(key in targets and targets[key] >= c for key, c in counts.items()):
            usable.append(w)
    unions = enumerate_disjoint_unions(usable, _edge_sets_disjoint(g))
    variables = []
    for union in unions:
        inc: dict = {}
        sign = 1
        ok = True
        for w in union:
            for key, c in loop_corner_counts(g, w).items():
                inc[key] = inc.get(key, 0) + c
                if inc[key] > targets.get(key, 0):
                    ok = False
            sign *= loop_sign(g, w)
        if ok:
            variables.append((inc, sign))
    return _racah_sum(variables, targets, budget)


# -- JSON schema ---------------------------------------------------------------
#
# {"format": "amplitude-graph/1",
#  "vertices": [...],
#  "edges": [{"src": ..., "dst": ...}, ...],
#  "corners": {vertex: [{"edges": [i, j], "k": int}, ...]}}


def graph_to_json(g: AmplitudeGraph) -> str:
    doc = {
        "format": "amplitude-graph/1",
        "vertices": list(g.vertices),
        "edges": [{"src": s, "dst": d} for s, d in g.edges],
        "corners": {
            str(name): [{"edges": [e1, e2], "k": k} for (e1, e2), k in items]
            for name, items in g.corners
            if items
        },
    }
    return json.dumps(doc, indent=2, sort_keys=True)


def graph_from_json(text: str) -> AmplitudeGraph:
    doc = json.loads(text)
    if doc.get("format") != "amplitude-graph/1":
        raise ValueError("unsupported graph format")
    vertices = doc["vertices"]
    edges = [(e["src"], e["dst"]) for e in doc["edges"]]
    corners = {}
    for name, items in doc.get("corners", {}).items():
        key = name
        if key not in vertices:
            # vertex names may be non-strings in memory but strings in JSON
            matches = [v for v in vertices if str(v) == name]
            if not matches:
                raise ValueError(f"corner block for unknown vertex {name}")
            key = matches[0]
        corners[key] = {tuple(item["edges"]): item["k"] for item in items}
    return AmplitudeGraph.build(vertices, edges, corners)
