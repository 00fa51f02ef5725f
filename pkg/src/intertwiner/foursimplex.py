"""The 4-simplex spin network: labels, corner blocks, and the 17-parameter Racah sum.

Vertices are named "1".."5" and every pair carries an edge oriented from the
smaller to the larger name.  Each vertex holds a 4-valent channel label whose
slots are its neighbors in ascending order; the induced corner labels k^v_{ij}
feed both the contraction oracle and the explicit 37-cycle Racah formula.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product as iproduct

from .channels import ChannelLabel, Corners, admissible_channels
from .exact import factorial
from .graphs import AmplitudeGraph, complete_graph, loop_corner_counts, loop_sign

__all__ = [
    "VERTICES",
    "SimplexChannels",
    "simplex_graph",
    "tetra_graph",
    "admissible_assignments",
    "CYCLES",
    "FREE_PARAMS",
    "AppendixEAssignment",
    "appendix_e_m_values",
    "reconstruct_corners",
    "twenty_j_racah",
    "twenty_j_cycle_representative",
    "coherent_weight",
    "cycle_orientation_signs",
]

VERTICES = ("1", "2", "3", "4", "5")
PAIRS5 = tuple((a, b) for i, a in enumerate(VERTICES) for b in VERTICES[i + 1 :])


@dataclass(frozen=True)
class SimplexChannels:
    """Ten edge twice-spins plus one (S, T) channel pair per vertex."""

    edge_two_js: tuple  # ten ints in PAIRS5 order
    channels: tuple  # five (two_s, two_t) pairs, vertices "1".."5"

    @classmethod
    def uniform(cls, edge_two_j: int, channels) -> "SimplexChannels":
        return cls(tuple([edge_two_j] * 10), tuple(tuple(c) for c in channels))

    def edge_two_j(self, a: str, b: str) -> int:
        a, b = min(a, b), max(a, b)
        return self.edge_two_js[PAIRS5.index((a, b))]

    def neighbors(self, a: str) -> tuple:
        return tuple(v for v in VERTICES if v != a)

    def vertex_two_js(self, a: str) -> tuple:
        return tuple(self.edge_two_j(a, v) for v in self.neighbors(a))

    def vertex_label(self, a: str) -> ChannelLabel:
        s, t = self.channels[VERTICES.index(a)]
        return ChannelLabel(self.vertex_two_js(a), s, t)

    def vertex_corners(self, a: str) -> dict:
        """Corner labels at vertex a keyed by ascending neighbor pairs."""
        k = self.vertex_label(a).corners()
        nb = self.neighbors(a)
        out = {}
        for idx, (i, j) in enumerate(Corners.PAIRS):
            out[(nb[i], nb[j])] = k[idx]
        return out

    def corner(self, v: str, i: str, j: str) -> int:
        i, j = min(i, j), max(i, j)
        return self.vertex_corners(v)[(i, j)]

    def norms_squared(self) -> list[Fraction]:
        from .channels import norm_squared

        return [norm_squared(self.vertex_label(a)) for a in VERTICES]


def simplex_graph(simplex: SimplexChannels) -> AmplitudeGraph:
    """K5 amplitude graph carrying the simplex's corner labels."""
    g = complete_graph(5, VERTICES)
    corners = {}
    for a in VERTICES:
        block = {}
        for (i, j), k in simplex.vertex_corners(a).items():
            e1 = g.edge_index(a, i)
            e2 = g.edge_index(a, j)
            block[(min(e1, e2), max(e1, e2))] = k
        corners[a] = block
    return AmplitudeGraph.build(g.vertices, g.edges, corners)


def tetra_graph(edge_two_js: dict) -> AmplitudeGraph:
    """K4 amplitude graph; 3-valent corners are fixed by the edge spins.

    edge_two_js maps vertex-name pairs like ("1","2") to twice-spins.
    """
    names = ("1", "2", "3", "4")
    g = complete_graph(4, names)

    def tj(a, b):
        return edge_two_js[(min(a, b), max(a, b))]

    corners = {}
    for v in names:
        nb = [u for u in names if u != v]
        block = {}
        for x in range(3):
            for y in range(x + 1, 3):
                z = [u for u in range(3) if u not in (x, y)][0]
                doubled = tj(v, nb[x]) + tj(v, nb[y]) - tj(v, nb[z])
                if doubled < 0 or doubled % 2:
                    raise ValueError(f"edge spins at vertex {v} violate the triangle rule")
                e1, e2 = g.edge_index(v, nb[x]), g.edge_index(v, nb[y])
                block[(min(e1, e2), max(e1, e2))] = doubled // 2
        corners[v] = block
    return AmplitudeGraph.build(g.vertices, g.edges, corners)


def admissible_assignments(edge_two_js) -> list:
    """All five-vertex channel assignments admissible for the given edge spins."""
    base = SimplexChannels(tuple(edge_two_js), tuple([(0, 0)] * 5))
    per_vertex = []
    for a in VERTICES:
        per_vertex.append(admissible_channels(base.vertex_two_js(a)))
    return [tuple(combo) for combo in iproduct(*per_vertex)]


# -- the 37 cycles of K5 -------------------------------------------------------

_TRIANGLES = ("123", "124", "125", "134", "135", "145", "234", "235", "245", "345")
_QUADS = (
    "1234", "1243", "1324",
    "1235", "1253", "1325",
    "1245", "1254", "1425",
    "1345", "1354", "1435",
    "2345", "2354", "2435",
)
_PENTAGONS = (
    "12345", "12354", "12435", "12453", "12534", "12543",
    "13245", "13254", "13425", "13524", "14235", "14325",
)
CYCLES = _TRIANGLES + _QUADS + _PENTAGONS

# free parameters of the explicit solution, in order p1..p17
FREE_PARAMS = (
    "1324", "1325", "1345", "1354", "1435", "1425", "2345", "2354", "2435",
    "12345", "12543", "13245", "13254", "13425", "13524", "14235", "14325",
)
DEPENDENT = tuple(name for name in CYCLES if name not in FREE_PARAMS)


def _cycle_corners(name: str) -> tuple:
    walk = tuple(name)
    n = len(walk)
    out = []
    for i in range(n):
        v = walk[i]
        a, b = walk[(i - 1) % n], walk[(i + 1) % n]
        out.append((v, (min(a, b), max(a, b))))
    return tuple(out)


CYCLE_CORNERS = {name: _cycle_corners(name) for name in CYCLES}

# Dependent multiplicities solved from the corner constraints; constants are
# corner labels k^v_{ij} and the p's are the free multiplicities above.
# Each entry: (cycle, ((vertex, i, j, sign) k-terms...), ((p-index, coeff)...)).
_DEP_FORMULAS = (
    ("123", (("3", "1", "2", 1),), ((1, -1), (2, -1), (12, -1), (13, -1))),
    ("145", (("1", "4", "5", 1),), ((6, -1), (5, -1), (16, -1), (17, -1))),
    ("124", (("4", "1", "2", 1),), ((1, -1), (6, -1), (16, -1), (15, -1))),
    ("234", (("2", "3", "4", 1),), ((1, -1), (8, -1), (12, -1), (16, -1))),
    ("125", (("5", "1", "2", 1),), ((2, -1), (6, -1), (14, -1), (17, -1))),
    ("235", (("2", "3", "5", 1),), ((2, -1), (7, -1), (13, -1), (17, -1))),
    ("134", (("1", "3", "4", 1),), ((1, -1), (4, -1), (13, -1), (15, -1))),
    ("245", (("2", "4", "5", 1),), ((9, -1), (6, -1), (14, -1), (15, -1))),
    ("135", (("1", "3", "5", 1),), ((2, -1), (3, -1), (12, -1), (14, -1))),
    ("345", (("4", "3", "5", 1),), ((7, -1), (3, -1), (10, -1), (11, -1))),
    (
        "1234",
        (("3", "2", "4", 1), ("2", "3", "4", -1)),
        ((1, 1), (8, 1), (12, 1), (16, 1), (7, -1), (10, -1), (17, -1)),
    ),
    (
        "1243",
        (("3", "1", "4", 1), ("1", "3", "4", -1)),
        ((1, 1), (4, 1), (13, 1), (15, 1), (3, -1), (14, -1), (11, -1)),
    ),
    (
        "1245",
        (("5", "1", "4", 1), ("1", "4", "5", -1)),
        ((6, 1), (5, 1), (16, 1), (17, 1), (3, -1), (10, -1), (12, -1)),
    ),
    (
        "1254",
        (("5", "2", "4", 1), ("2", "4", "5", -1)),
        ((9, 1), (6, 1), (14, 1), (15, 1), (7, -1), (11, -1), (13, -1)),
    ),
    (
        "12354",
        (("4", "1", "5", 1), ("1", "4", "5", -1), ("2", "4", "5", 1), ("5", "2", "4", -1)),
        ((7, 1), (5, 1), (11, 1), (16, 1), (17, 1), (4, -1), (14, -1), (15, -1), (9, -1)),
    ),
    (
        "12453",
        (("4", "2", "5", 1), ("2", "4", "5", -1), ("1", "4", "5", 1), ("5", "1", "4", -1)),
        ((9, 1), (3, 1), (10, 1), (14, 1), (15, 1), (5, -1), (8, -1), (16, -1), (17, -1)),
    ),
    (
        "12435",
        (("4", "2", "3", 1), ("2", "3", "4", -1), ("1", "3", "4", 1), ("3", "1", "4", -1)),
        ((8, 1), (3, 1), (12, 1), (16, 1), (11, 1), (4, -1), (9, -1), (13, -1), (15, -1)),
    ),
    (
        "12534",
        (("4", "1", "3", 1), ("1", "3", "4", -1), ("2", "3", "4", 1), ("3", "2", "4", -1)),
        ((4, 1), (7, 1), (13, 1), (15, 1), (10, 1), (5, -1), (8, -1), (12, -1), (16, -1)),
    ),
    (
        "1235",
        (
            ("3", "2", "5", 1), ("2", "3", "5", -1), ("1", "4", "5", 1),
            ("4", "1", "5", -1), ("5", "2", "4", 1), ("2", "4", "5", -1),
        ),
        ((2, 1), (13, 1), (9, 1), (4, 1), (14, 1), (15, 1), (8, -1), (5, -1), (11, -1), (16, -2)),
    ),
    (
        "1253",
        (
            ("5", "2", "3", 1), ("2", "3", "5", -1), ("1", "3", "4", 1),
            ("4", "1", "3", -1), ("3", "2", "4", 1), ("2", "3", "4", -1),
        ),
        ((8, 1), (5, 1), (12, 1), (16, 1), (2, 1), (17, 1), (9, -1), (4, -1), (10, -1), (15, -2)),
    ),
)


@dataclass(frozen=True)
class AppendixEAssignment:
    """One point of the 17-parameter solution space with its 37 multiplicities."""

    params: tuple
    multiplicities: dict
    valid: bool

    def total(self) -> int:
        return sum(self.multiplicities.values())


def appendix_e_m_values(corner_labels: dict, params) -> AppendixEAssignment:
    """Evaluate all 37 multiplicities from the 17 free ones.

    corner_labels maps (vertex, i, j) with i < j to k^v_{ij}.
    """
    params = tuple(params)
    if len(params) != 17:
        raise ValueError("need exactly 17 parameters")
    m = {}
    for name, p in zip(FREE_PARAMS, params):
        m[name] = p
    for name, k_terms, p_terms in _DEP_FORMULAS:
        val = 0
        for v, i, j, sign in k_terms:
            val += sign * corner_labels[(v, min(i, j), max(i, j))]
        for p_idx, coeff in p_terms:
            val += coeff * params[p_idx - 1]
        m[name] = val
    valid = all(v >= 0 for v in m.values())
    return AppendixEAssignment(params, m, valid)


@lru_cache(maxsize=1)
def cycle_orientation_signs() -> dict:
    """Per-cycle orientation/ordering sign on the canonical K5, oracle-anchored."""
    g = complete_graph(5, VERTICES)
    return {name: loop_sign(g, tuple(name)) for name in CYCLES}


def _corner_label_dict(simplex: SimplexChannels) -> dict:
    out = {}
    for v in VERTICES:
        for (i, j), k in simplex.vertex_corners(v).items():
            out[(v, i, j)] = k
    return out


def reconstruct_corners(m: dict) -> dict:
    """Corner labels implied by a multiplicity assignment via corner incidence."""
    out: dict = {}
    for name, count in m.items():
        for v, (i, j) in CYCLE_CORNERS[name]:
            key = (v, i, j)
            out[key] = out.get(key, 0) + count
    return out


def twenty_j_cycle_representative(simplex: SimplexChannels, return_count: bool = False):
    """The explicit 17-parameter cycle-union Racah sum.

    Depth-first over the free multiplicities with interval pruning from the
    non-negativity of the dependent ones.  This representative equals the
    20-spin symbol only up to combinations that vanish under contraction with
    the coherent weights (the quadratic pair relation); `twenty_j_racah` is
    the exact loop-based evaluation.
    """
    corner_labels = _corner_label_dict(simplex)
    signs = cycle_orientation_signs()

    # upper bound for any multiplicity: min corner label its cycle covers
    def cycle_ub(name):
        return min(corner_labels[(v, i, j)] for v, (i, j) in CYCLE_CORNERS[name])

    ub = [cycle_ub(name) for name in FREE_PARAMS]

    # dependent formulas as (const, coeff-vector over p1..p17)
    dep = []
    for name, k_terms, p_terms in _DEP_FORMULAS:
        const = sum(sign * corner_labels[(v, min(i, j), max(i, j))] for v, i, j, sign in k_terms)
        coeffs = [0] * 17
        for p_idx, coeff in p_terms:
            coeffs[p_idx - 1] = coeff
        dep.append((name, const, tuple(coeffs), cycle_ub(name)))

    # tail bounds: most a formula can still gain/lose from params >= level
    ndep = len(dep)
    pos_tail = [[0] * 18 for _ in range(ndep)]
    neg_tail = [[0] * 18 for _ in range(ndep)]
    for d, (_name, _c, coeffs, _ub) in enumerate(dep):
        for level in range(16, -1, -1):
            pos_tail[d][level] = pos_tail[d][level + 1] + max(coeffs[level], 0) * ub[level]
            neg_tail[d][level] = neg_tail[d][level + 1] + min(coeffs[level], 0) * ub[level]

    total = Fraction(0)
    count = 0
    params = [0] * 17

    def rec(level, partial):
        # partial[d] = const + assigned coefficient contributions for formula d
        nonlocal total, count
        if level == 17:
            n_acc = 0
            denom = 1
            sign_acc = 1
            for name, p in zip(FREE_PARAMS, params):
                if p:
                    n_acc += p
                    denom *= factorial(p)
                    sign_acc *= signs[name] ** p
            for (name, _c, _coeffs, _ub), val in zip(dep, partial):
                if val < 0:
                    return
                if val:
                    n_acc += val
                    denom *= factorial(val)
                    sign_acc *= signs[name] ** val
            count += 1
            total += Fraction(factorial(n_acc + 1), denom) * sign_acc * ((-1) ** n_acc)
            return
        for p in range(ub[level] + 1):
            params[level] = p
            new_partial = []
            feasible = True
            for d, ((_name, _c, coeffs, d_ub), val) in enumerate(zip(dep, partial)):
                v = val + coeffs[level] * p
                if v + pos_tail[d][level + 1] < 0 or v + neg_tail[d][level + 1] > d_ub:
                    feasible = False
                    break
                new_partial.append(v)
            if feasible:
                rec(level + 1, new_partial)
        params[level] = 0

    rec(0, [c for _, c, _, _ in dep])
    if return_count:
        return total, count
    return total


# -- exact loop-based evaluation ------------------------------------------------


@lru_cache(maxsize=1)
def _k5_loop_tables():
    """Loops of K5 with corner counts (vertex-name keyed), signs, edge sets."""
    from .graphs import enumerate_simple_loops, loop_corner_counts, loop_sign, walk_edge_indices

    g = complete_graph(5, VERTICES)
    loops = enumerate_simple_loops(g)
    table = []
    for w in loops:
        counts = {}
        for (v, (e1, e2)), c in loop_corner_counts(g, w).items():
            i = g.edges[e1][0] if g.edges[e1][1] == v else g.edges[e1][1]
            j = g.edges[e2][0] if g.edges[e2][1] == v else g.edges[e2][1]
            counts[(v, min(i, j), max(i, j))] = c
        table.append(
            (w, counts, loop_sign(g, w), frozenset(walk_edge_indices(g, w)))
        )
    return tuple(table)


_TWENTY_J_CACHE: dict = {}


def twenty_j_racah(simplex: SimplexChannels, budget: int | None = None) -> Fraction:
    """Exact 20-spin symbol as the generalized Racah sum over simple-loop unions.

    Independent of both the contraction oracle and the identity-resolution
    route; equals them exactly, including sign.
    """
    corner_labels = _corner_label_dict(simplex)
    key = tuple(sorted(corner_labels.items()))
    if budget is None and key in _TWENTY_J_CACHE:
        return _TWENTY_J_CACHE[key]

    from .graphs import _racah_sum, enumerate_disjoint_unions

    targets = {c: k for c, k in corner_labels.items() if k}
    if not targets:
        return Fraction(1)
    usable = [
        (w, counts, sign, edges)
        for w, counts, sign, edges in _k5_loop_tables()
        if all(c in targets and targets[c] >= m for c, m in counts.items())
    ]

    def disjoint(a, b):
        return not (a[3] & b[3])

    unions = enumerate_disjoint_unions(usable, disjoint)
    variables = []
    for union in unions:
        inc: dict = {}
        sign = 1
        ok = True
        for _w, counts, s, _e in union:
            for c, m in counts.items():
                inc[c] = inc.get(c, 0) + m
                if inc[c] > targets.get(c, 0):
                    ok = False
            sign *= s
        if ok:
            variables.append((inc, sign))
    value = _racah_sum(variables, targets, budget)
    if budget is None:
        _TWENTY_J_CACHE[key] = value
    return value


def coherent_weight(simplex: SimplexChannels, half_edge_spinors: dict):
    """Product of corner brackets evaluated on free half-edge labels.

    half_edge_spinors maps (vertex, neighbor) to a 2-tuple of exact complex
    numbers (objects supporting * and -).  Contracting any amplitude
    representative against these weights and summing over channel assignments
    gives the coherent amplitude; equivalent representatives agree there.
    """
    total = 1
    for v in VERTICES:
        for (i, j), k in simplex.vertex_corners(v).items():
            if not k:
                continue
            zi = half_edge_spinors[(v, i)]
            zj = half_edge_spinors[(v, j)]
            bracket = zi[0] * zj[1] - zj[0] * zi[1]
            for _ in range(k):
                total = bracket * total
    return total
