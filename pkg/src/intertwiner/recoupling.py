"""Triangle coefficients, the 6j oracle, channel-basis overlaps, and 15j/20j symbols.

The orthogonal channel bases are generated from the discrete basis by channel
sums; overlaps computed that way are cross-checked against closed forms built
from triangle coefficients and an independent single-sum 6j evaluation.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import product as iproduct

from .channels import (
    ChannelLabel,
    admissible_channels,
    gram_matrix,
    norm_squared,
    relabel_label,
    relabel_sign,
)
from .exact import SqrtRational, factorial
from .channels import r_coeff
from .foursimplex import SimplexChannels, VERTICES, twenty_j_racah

__all__ = [
    "triangle_delta_sq",
    "wigner_6j",
    "KIND_S",
    "KIND_T",
    "KIND_U",
    "basis_vector",
    "overlap_via_gram",
    "overlap_basis_closed",
    "overlap_s_st",
    "overlap_s_st_alpha",
    "overlap_basis_st",
    "overlap_basis_st_closed",
    "fifteen_j",
    "fifteen_j_network",
    "twenty_j",
    "normalized_twenty_j",
]

KIND_S, KIND_T, KIND_U = "S", "T", "U"
_KIND_PARTNER = {KIND_S: 1, KIND_T: 2, KIND_U: 3}  # leg paired with leg 0
_KIND_PAIRS = {
    KIND_S: ((0, 1), (2, 3)),
    KIND_T: ((0, 2), (1, 3)),
    KIND_U: ((0, 3), (1, 2)),
}


def triangle_delta_sq(two_a: int, two_b: int, two_c: int) -> Fraction:
    """Squared triangle coefficient; zero unless the triad is admissible."""
    s = two_a + two_b + two_c
    if s % 2:
        return Fraction(0)
    d1 = (two_a - two_b + two_c) // 2
    d2 = (two_b - two_a + two_c) // 2
    d3 = (two_a + two_b - two_c) // 2
    if d1 < 0 or d2 < 0 or d3 < 0:
        return Fraction(0)
    return Fraction(factorial(s // 2 + 1), factorial(d1) * factorial(d2) * factorial(d3))


def _triangle_tilde(two_a, two_b, two_c) -> Fraction | None:
    """Inverse-style triangle factor used by the single-sum 6j formula."""
    s = two_a + two_b + two_c
    if s % 2:
        return None
    d1 = (two_a + two_b - two_c) // 2
    d2 = (two_a - two_b + two_c) // 2
    d3 = (-two_a + two_b + two_c) // 2
    if d1 < 0 or d2 < 0 or d3 < 0:
        return None
    return Fraction(factorial(d1) * factorial(d2) * factorial(d3), factorial(s // 2 + 1))


def wigner_6j(two_a, two_b, two_c, two_d, two_e, two_f) -> SqrtRational:
    """{a b c; d e f} by the standard single-sum expansion, exactly.

    Serves as an independent oracle for the channel-overlap closed forms; the
    square of the value is rational and the sign is carried exactly.
    """
    triads = (
        (two_a, two_b, two_c),
        (two_a, two_e, two_f),
        (two_d, two_b, two_f),
        (two_d, two_e, two_c),
    )
    pre = Fraction(1)
    for tr in triads:
        t = _triangle_tilde(*tr)
        if t is None:
            return SqrtRational(Fraction(0))
        pre *= t
    t_mins = [sum(tr) // 2 for tr in triads]
    q_vals = [
        (two_a + two_b + two_d + two_e) // 2,
        (two_b + two_c + two_e + two_f) // 2,
        (two_a + two_c + two_d + two_f) // 2,
    ]
    total = Fraction(0)
    for t in range(max(t_mins), min(q_vals) + 1):
        num = factorial(t + 1)
        den = 1
        for tm in t_mins:
            den *= factorial(t - tm)
        for q in q_vals:
            den *= factorial(q - t)
        total += Fraction(num, den) * (-1 if t % 2 else 1)
    return SqrtRational.from_sqrt(pre) * total


# -- channel bases as coefficient vectors over the discrete labels -------------


def _k23_value(two_js, two_s, two_t) -> int:
    two_u = sum(two_js) - two_s - two_t
    return (two_js[1] + two_js[2] - two_u) // 2


def basis_vector(two_js, kind: str, two_value: int) -> dict:
    """Coefficients expressing an orthogonal channel state over discrete labels.

    Conventions: S sums plainly over T; T carries the leg-2/3 corner parity
    per summand; U carries that same (constant) parity, making the relative
    signs uniform along the fixed-total diagonal.
    """
    two_js = tuple(two_js)
    out = {}
    for s, t in admissible_channels(two_js):
        if kind == KIND_S and s == two_value:
            out[(s, t)] = 1
        elif kind == KIND_T and t == two_value:
            out[(s, t)] = -1 if _k23_value(two_js, s, t) % 2 else 1
        elif kind == KIND_U and sum(two_js) - s - t == two_value:
            out[(s, t)] = -1 if _k23_value(two_js, s, t) % 2 else 1
    return out


def overlap_via_gram(two_js, vec_a: dict, vec_b: dict) -> Fraction:
    return gram_matrix(tuple(two_js)).bilinear(vec_a, vec_b)


def _kind_after_perm(kind: str, perm) -> str:
    # a kind is a pairing of the four legs; track where leg 0's partner lands
    pair = {perm[0], perm[_KIND_PARTNER[kind]]}
    if 0 in pair:
        partner = (pair - {0}).pop()
    else:
        partner = ({1, 2, 3} - pair).pop()
    return {1: KIND_S, 2: KIND_T, 3: KIND_U}[partner]


def transport_basis(two_js, kind: str, two_value: int, perm):
    """Push a channel basis through a leg permutation.

    Returns (new_two_js, new_kind, new_two_value, weight) with weight the
    constant relating the mapped coefficient vector to the canonical basis
    vector of the permuted system.  Proportionality is asserted exactly.
    """
    two_js = tuple(two_js)
    vec = basis_vector(two_js, kind, two_value)
    if not vec:
        raise ValueError(f"empty channel basis {kind}={two_value} for {two_js}")
    mapped = {}
    new_two_js = None
    for (s, t), coeff in vec.items():
        lab = ChannelLabel(two_js, s, t)
        sign = relabel_sign(lab, perm)
        new_lab = relabel_label(lab, perm)
        new_two_js = new_lab.two_js
        mapped[(new_lab.two_s, new_lab.two_t)] = coeff * sign
    new_kind = _kind_after_perm(kind, perm)
    # the channel value is preserved: kinds track the same leg pairing
    target = basis_vector(new_two_js, new_kind, two_value)
    if set(target) != set(mapped):
        raise AssertionError("permuted channel basis has unexpected support")
    weights = {mapped[key] * target[key] for key in target}  # coeffs are +-1
    if len(weights) != 1:
        raise AssertionError("permuted channel basis is not proportional to the target")
    return new_two_js, new_kind, two_value, weights.pop()


_SWAP34 = (0, 1, 3, 2)  # maps U-kind to T-kind, fixes S
_SWAP23 = (0, 2, 1, 3)  # maps T-kind to S-kind, fixes U


def overlap_basis_closed(two_js, kind_a: str, val_a: int, kind_b: str, val_b: int) -> Fraction:
    """Closed-form overlap of two orthogonal channel states.

    Diagonal kinds use the triangle-coefficient normalization; mixed kinds
    reduce to the leg-ordered 6j formula through exact leg transport.
    """
    two_js = tuple(two_js)
    if kind_a == kind_b:
        if val_a != val_b:
            return Fraction(0)
        (p1, p2), (p3, p4) = _KIND_PAIRS[kind_a]
        d1 = triangle_delta_sq(two_js[p1], two_js[p2], val_a)
        d2 = triangle_delta_sq(two_js[p3], two_js[p4], val_a)
        return d1 * d2 / (val_a + 1)
    if (kind_a, kind_b) == (KIND_T, KIND_S) or (kind_a, kind_b) == (KIND_U, KIND_S) or (
        kind_a,
        kind_b,
    ) == (KIND_U, KIND_T):
        return overlap_basis_closed(two_js, kind_b, val_b, kind_a, val_a)
    if (kind_a, kind_b) == (KIND_S, KIND_T):
        a1, a2, a3, a4 = two_js
        k23 = _k23_value(two_js, val_a, val_b)
        big_j = sum(two_js) // 2
        sign = -1 if (big_j + k23) % 2 else 1
        delta_prod = (
            triangle_delta_sq(a1, a2, val_a)
            * triangle_delta_sq(a3, a4, val_a)
            * triangle_delta_sq(a1, a3, val_b)
            * triangle_delta_sq(a2, a4, val_b)
        )
        sixj = wigner_6j(a1, a2, val_a, a4, a3, val_b)
        result = SqrtRational.from_sqrt(delta_prod) * sixj * sign
        return result.as_fraction()
    if (kind_a, kind_b) == (KIND_S, KIND_U):
        njs, nka, _, wa = transport_basis(two_js, KIND_S, val_a, _SWAP34)
        njs2, nkb, _, wb = transport_basis(two_js, KIND_U, val_b, _SWAP34)
        assert njs == njs2 and (nka, nkb) == (KIND_S, KIND_T)
        return wa * wb * overlap_basis_closed(njs, KIND_S, val_a, KIND_T, val_b)
    if (kind_a, kind_b) == (KIND_T, KIND_U):
        njs, nka, _, wa = transport_basis(two_js, KIND_T, val_a, _SWAP23)
        njs2, nkb, _, wb = transport_basis(two_js, KIND_U, val_b, _SWAP23)
        assert njs == njs2 and (nka, nkb) == (KIND_S, KIND_U)
        return wa * wb * overlap_basis_closed(njs, KIND_S, val_a, KIND_U, val_b)
    raise ValueError(f"unsupported kind pair ({kind_a}, {kind_b})")


# -- overlaps between channel states and discrete labels -----------------------


def overlap_s_st(two_js, two_s_prime: int, label: tuple) -> Fraction:
    """<S'|(S,T)> by direct channel summation over the exact Gram."""
    vec = basis_vector(tuple(two_js), KIND_S, two_s_prime)
    target = {tuple(label): 1}
    return overlap_via_gram(two_js, vec, target)


def overlap_s_st_alpha(two_js, two_s_prime: int, label: tuple) -> Fraction:
    """<S'|(S,T)> by the shift-depth expansion with diagonal channel sums."""
    two_js = tuple(two_js)
    two_S, two_T = label
    big_j = sum(two_js) // 2
    total = Fraction(0)
    for n in range(0, min(two_js) + 1):
        shifted = tuple(v - n for v in two_js)
        alpha = Fraction((-1) ** n * factorial(big_j - n + 1), factorial(n) * factorial(big_j - 2 * n + 1))
        for s, t in admissible_channels(shifted):
            if s != two_s_prime:
                continue
            r = r_coeff(s, t, two_S, two_T, n)
            if r == 0:
                continue
            total += alpha * r * norm_squared(ChannelLabel(shifted, s, t))
    return total


def overlap_basis_st(two_js, kind: str, two_value: int, label: tuple) -> Fraction:
    """<kind-state|(S,T)> by channel summation."""
    vec = basis_vector(tuple(two_js), kind, two_value)
    return overlap_via_gram(two_js, vec, {tuple(label): 1})


def overlap_basis_st_closed(two_js, kind: str, two_value: int, label: tuple) -> Fraction:
    """<kind-state|(S,T)> via leg transport into the shift-depth closed form."""
    two_js = tuple(two_js)
    if kind == KIND_S:
        return overlap_s_st_alpha(two_js, two_value, label)
    lab = ChannelLabel(two_js, *label)
    if kind == KIND_T:
        perm = _SWAP23
    elif kind == KIND_U:
        perm = (0, 3, 2, 1)  # swap legs 2 and 4: U-kind becomes S-kind
    else:
        raise ValueError(kind)
    njs, nkind, _, w = transport_basis(two_js, kind, two_value, perm)
    sign = relabel_sign(lab, perm)
    new_lab = relabel_label(lab, perm)
    if nkind == KIND_S:
        return w * sign * overlap_s_st_alpha(njs, two_value, (new_lab.two_s, new_lab.two_t))
    # one more reduction step (not needed for the permutations above)
    return w * sign * overlap_basis_st_closed(njs, nkind, two_value, (new_lab.two_s, new_lab.two_t))


# -- simplex contractions -------------------------------------------------------


@lru_cache(maxsize=None)
def _fifteen_j_cached(edge_two_js: tuple, s_assign: tuple) -> Fraction:
    base = SimplexChannels(edge_two_js, tuple([(0, 0)] * 5))
    t_options = []
    for a, s_a in zip(VERTICES, s_assign):
        adm = admissible_channels(base.vertex_two_js(a))
        t_options.append([t for (s, t) in adm if s == s_a])
    total = Fraction(0)
    for t_assign in iproduct(*t_options):
        simp = SimplexChannels(edge_two_js, tuple(zip(s_assign, t_assign)))
        total += twenty_j_racah(simp)
    return total


def fifteen_j(edge_two_js, s_assign) -> Fraction:
    """Contraction of the five S-channel states: channel sum of the 20-spin symbol."""
    return _fifteen_j_cached(tuple(edge_two_js), tuple(s_assign))


# The S-channel state is the contraction of two 3-valent states through one
# auxiliary spinor, so the five-vertex contraction is a closed 3-valent
# network on ten vertices.  At 3-valent vertices loops coincide with cycles
# and the generalized Racah sum is exact, which scales far better than the
# channel sum.  The edge order below makes each sub-vertex's slot order agree
# with the graph's canonical (index-sorted) order, so no reordering signs
# appear.
_PENTAGON_EDGE_ORDER = (
    ("1", "2"), ("1", "3"), ("2", "3"), ("int", "1"), ("int", "2"), ("int", "3"),
    ("1", "4"), ("2", "4"), ("int", "4"), ("1", "5"), ("2", "5"), ("int", "5"),
    ("3", "4"), ("3", "5"), ("4", "5"),
)


def _pentagon_graph(edge_two_js, s_assign):
    from .graphs import AmplitudeGraph

    base = SimplexChannels(tuple(edge_two_js), tuple([(0, 0)] * 5))
    two_j = {}
    for a in VERTICES:
        for b in VERTICES:
            if a < b:
                two_j[(a, b)] = base.edge_two_j(a, b)
    s_map = dict(zip(VERTICES, s_assign))

    def sub_vertex(a, b):
        # external edge (a, b) attaches at a's plus vertex when b is one of
        # a's two smallest neighbors
        nb = [v for v in VERTICES if v != a]
        return f"{a}+" if b in nb[:2] else f"{a}-"

    vertices = [f"{a}{s}" for a in VERTICES for s in ("+", "-")]
    edges = []
    spins = []
    for kind in _PENTAGON_EDGE_ORDER:
        if kind[0] == "int":
            a = kind[1]
            edges.append((f"{a}-", f"{a}+"))
            spins.append(s_map[a])
        else:
            a, b = kind
            edges.append((sub_vertex(a, b), sub_vertex(b, a)))
            spins.append(two_j[(a, b)])

    def triangle_corners(leg_spins):
        ta, tb, tc = leg_spins
        vals = ((ta + tb - tc), (ta + tc - tb), (tb + tc - ta))
        if any(v < 0 or v % 2 for v in vals):
            return None
        return vals[0] // 2, vals[1] // 2, vals[2] // 2

    corners = {}
    for v in vertices:
        inc = [i for i, (s, d) in enumerate(edges) if v in (s, d)]
        inc.sort()
        if len(inc) != 3:
            raise AssertionError("pentagon sub-vertex is not 3-valent")
        tri = triangle_corners([spins[i] for i in inc])
        if tri is None:
            return None
        k01, k02, k12 = tri
        corners[v] = {(inc[0], inc[1]): k01, (inc[0], inc[2]): k02, (inc[1], inc[2]): k12}
    return AmplitudeGraph.build(vertices, edges, corners)


@lru_cache(maxsize=None)
def _fifteen_j_network_cached(edge_two_js: tuple, s_assign: tuple) -> Fraction:
    from .graphs import racah_cycles

    g = _pentagon_graph(edge_two_js, s_assign)
    if g is None:
        return Fraction(0)
    return racah_cycles(g)


def fifteen_j_network(edge_two_js, s_assign) -> Fraction:
    """The same contraction through the 3-valent decomposition of each vertex."""
    return _fifteen_j_network_cached(tuple(edge_two_js), tuple(s_assign))


def twenty_j(simplex: SimplexChannels) -> Fraction:
    """The 20-spin symbol via five resolutions of identity in the S bases.

    Exactly equal to the loop Racah sum and to the contraction oracle; the
    equality exercises the overlap machinery end to end.
    """
    per_vertex = []
    for a in VERTICES:
        two_js = simplex.vertex_two_js(a)
        label = simplex.channels[VERTICES.index(a)]
        s_values = sorted({s for s, _ in admissible_channels(two_js)})
        weights = []
        for s in s_values:
            ov = overlap_s_st(two_js, s, label)
            if ov:
                norm = overlap_basis_closed(two_js, KIND_S, s, KIND_S, s)
                weights.append((s, ov / norm))
        per_vertex.append(weights)
    total = Fraction(0)
    for combo in iproduct(*per_vertex):
        s_assign = tuple(s for s, _ in combo)
        weight = Fraction(1)
        for _, w in combo:
            weight *= w
        total += weight * fifteen_j(simplex.edge_two_js, s_assign)
    return total


def normalized_twenty_j(simplex: SimplexChannels) -> SqrtRational:
    """20-spin symbol divided by the product of the five basis norms."""
    value = twenty_j_racah(simplex)
    norm_prod = Fraction(1)
    for n in simplex.norms_squared():
        norm_prod *= n
    return SqrtRational.from_sqrt(Fraction(1) / norm_prod) * value
