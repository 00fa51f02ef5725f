"""Acceptance suite: one test per criterion, each printing a pass/fail line.

Every tolerance is pinned here.  Exact-arithmetic criteria assert equality of
Fractions; floating-point geometry criteria use the stated tolerances.
"""

import itertools
import math
import random
import time
from fractions import Fraction

import numpy as np

from intertwiner.bargmann import SpinorPolynomial, bargmann_inner, contract_graph_oracle, pair_power_poly
from intertwiner.channels import (
    ChannelLabel,
    Corners,
    admissible_channels,
    fundamental_relation_vector,
    gram_matrix,
    intertwiner_dimension,
    norm_squared,
    plucker_power_coeffs,
    power_relation_vector,
    projector_matrix,
)
from intertwiner.exact import exact_rank
from intertwiner.foursimplex import (
    SimplexChannels,
    VERTICES,
    admissible_assignments,
    appendix_e_m_values,
    reconstruct_corners,
    simplex_graph,
    tetra_graph,
    twenty_j_racah,
)
from intertwiner.foursimplex import _corner_label_dict
from intertwiner.geometry import (
    dihedral_4d_check,
    gauge_rotate,
    geometry_angles,
    irregular_simplex_geometry,
    random_framed_tetrahedron,
    regular_simplex_geometry,
    shape_matching_check,
    solve_closure,
    spherical_cosine_residuals,
    spinors_from_framed_tet,
    three_term_residuals,
    twisted_action,
)
from intertwiner.graphs import amplitude_loops, complete_graph, enumerate_simple_cycles, racah_cycles
from intertwiner.recoupling import (
    KIND_S,
    KIND_T,
    KIND_U,
    basis_vector,
    fifteen_j,
    overlap_basis_closed,
    overlap_basis_st,
    overlap_basis_st_closed,
    overlap_via_gram,
    r_coeff,
    twenty_j,
)
from intertwiner.scan import asymptotic_scan

KINDS = (KIND_S, KIND_T, KIND_U)
HALF4 = (1, 1, 1, 1)


def _report(number, ok, detail, started):
    elapsed = time.time() - started
    line = f"ACCEPTANCE {number}: {'PASS' if ok else 'FAIL'} ({elapsed:.1f}s) - {detail}"
    print(line, flush=True)
    assert ok, line


def all_two_js(max_two_j):
    for tj in itertools.product(range(max_two_j + 1), repeat=4):
        if sum(tj) % 2 == 0 and admissible_channels(tj):
            yield tj


def label_poly(two_js, s, t):
    k = ChannelLabel(two_js, s, t).corners()
    return pair_power_poly(
        [((i, False), (j, False), k[idx]) for idx, (i, j) in enumerate(Corners.PAIRS)]
    )


def test_criterion_01_gram_exactness():
    """Half-spin Gram matrix, rank, and Bargmann oracle agreement.  (< 1 s)"""
    t0 = time.time()
    g = gram_matrix(HALF4)
    ok = g.labels == ((0, 2), (2, 0), (2, 2))
    expected = [[4, 2, -2], [2, 4, 2], [-2, 2, 4]]
    ok = ok and [[int(v) for v in row] for row in g.entries] == expected
    ok = ok and exact_rank([list(r) for r in g.entries]) == 2
    for la in g.labels:
        for lb in g.labels:
            ok = ok and bargmann_inner(label_poly(HALF4, *la), label_poly(HALF4, *lb)) == g.entry(la, lb)
    _report(1, ok, "Gram(1/2^4) = [[4,2,-2],[2,4,2],[-2,2,4]], rank 2, oracle exact", t0)


def test_criterion_02_projector_idempotence():
    """P^2 = P in exact rationals for every spin list with j_i <= 1.  (< 10 s)"""
    t0 = time.time()
    count = 0
    ok = True
    for tj in all_two_js(2):
        p = projector_matrix(tj)
        n = len(p)
        sq = [[sum(p[i][k] * p[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
        ok = ok and sq == p
        ok = ok and exact_rank(p) == intertwiner_dimension(tj)
        count += 1
    _report(2, ok, f"projector idempotent and of full intertwiner rank on {count} spin lists", t0)


def test_criterion_03_channel_sums_vs_closed_forms():
    """Channel-summed overlaps equal closed forms (norms and 6j) for j_i <= 3/2.  (< 2 min)"""
    t0 = time.time()
    checks = 0
    ok = True
    for tj in all_two_js(3):
        values = {
            kind: sorted(
                {
                    {KIND_S: s, KIND_T: t, KIND_U: sum(tj) - s - t}[kind]
                    for s, t in admissible_channels(tj)
                }
            )
            for kind in KINDS
        }
        for ka, kb in itertools.product(KINDS, repeat=2):
            for va in values[ka]:
                for vb in values[kb]:
                    lhs = overlap_via_gram(tj, basis_vector(tj, ka, va), basis_vector(tj, kb, vb))
                    ok = ok and lhs == overlap_basis_closed(tj, ka, va, kb, vb)
                    checks += 1
        for kind in KINDS:
            for v in values[kind]:
                for lab in admissible_channels(tj):
                    ok = ok and overlap_basis_st(tj, kind, v, lab) == overlap_basis_st_closed(
                        tj, kind, v, lab
                    )
                    checks += 1
    _report(3, ok, f"{checks} overlaps agree exactly (independent Racah 6j inside)", t0)


def test_criterion_04_r_coefficient_identities():
    """Plain and parity-weighted channel sums of the power coefficients.  (< 1 s)"""
    t0 = time.time()
    ok = True
    js = (6, 6, 6, 6)

    def k23_parity(s, t):
        two_u = sum(js) - s - t
        return ((js[1] + js[2] - two_u) // 2) % 2

    for n in range(5):
        for s in range(0, 13, 2):
            for t in range(0, 13, 2):
                if n == 0:
                    ok = ok and r_coeff(s, t, s, t, 0) == 1
                    continue
                coeffs = plucker_power_coeffs(s, t, n)
                by_s, by_t = {}, {}
                for (S, T), r in coeffs.items():
                    by_s[S] = by_s.get(S, 0) + r
                    sign = -1 if k23_parity(S, T) else 1
                    by_t[T] = by_t.get(T, 0) + sign * r
                ok = ok and all(v == (1 if S == s else 0) for S, v in by_s.items())
                base = -1 if k23_parity(s, t) else 1
                ok = ok and all(v == (base if T == t else 0) for T, v in by_t.items())
    _report(4, ok, "sum_T R = delta and the parity-weighted sum_S identity, N <= 4, offsets <= 6", t0)


def test_criterion_05_plucker_algebra():
    """Gram annihilates relation vectors; their oracle polynomials vanish.  (< 1 min)"""
    t0 = time.time()
    ok = True
    relations = 0
    for tj in all_two_js(3):
        g = gram_matrix(tj)
        labels = set(g.labels)

        def check_vector(vec):
            nonlocal ok, relations
            restricted = {k: Fraction(v) for k, v in vec.items() if k in labels}
            image = g.apply(restricted)
            ok = ok and all(v == 0 for v in image.values())
            total = SpinorPolynomial()
            for (S, T), coeff in vec.items():
                if coeff and (S, T) in labels:
                    total = total + label_poly(tj, S, T) * coeff
            ok = ok and total.is_zero()
            relations += 1

        for s, t in labels:
            check_vector(fundamental_relation_vector(ChannelLabel(tj, s, t)))
        for n in (1, 2):
            shifted = tuple(v - n for v in tj)
            if any(v < 0 for v in shifted) or sum(shifted) % 2:
                continue
            for s, t in admissible_channels(shifted):
                check_vector(power_relation_vector(tj, s, t, n))
    _report(5, ok, f"{relations} relation vectors annihilated; oracle polynomials identically zero", t0)


def test_criterion_06_cycle_counts_and_parameterization():
    """K4/K5 cycle counts and corner reconstruction at 1000 random points.  (< 10 s)"""
    t0 = time.time()
    ok = len(enumerate_simple_cycles(complete_graph(4))) == 7
    ok = ok and len(enumerate_simple_cycles(complete_graph(5))) == 37
    simp = SimplexChannels.uniform(1, [(0, 2), (2, 0), (2, 2), (0, 2), (2, 0)])
    corners = _corner_label_dict(simp)
    rng = random.Random(11)
    for _ in range(1000):
        params = [rng.randint(-3, 3) for _ in range(17)]
        rebuilt = reconstruct_corners(appendix_e_m_values(corners, params).multiplicities)
        ok = ok and all(rebuilt.get(key, 0) == val for key, val in corners.items())
    _report(6, ok, "K4 -> 7, K5 -> 37; 17-parameter solution reconstructs all 30 corners", t0)


def test_criterion_07_three_way_twenty_j_agreement():
    """Identity-resolution route, loop Racah sum, and the contraction oracle
    agree exactly (with sign) on every all-half assignment; channel sums give
    the 15-spin symbol.  (< 30 min)"""
    t0 = time.time()
    assigns = admissible_assignments([1] * 10)
    ok = len(assigns) == 243
    for ch in assigns:
        simp = SimplexChannels(tuple([1] * 10), ch)
        reference = twenty_j_racah(simp)
        ok = ok and reference == contract_graph_oracle(simplex_graph(simp))
        ok = ok and reference == twenty_j(simp)
        if not ok:
            break
    adm = admissible_channels(HALF4)
    for s_assign in itertools.product([0, 2], repeat=5):
        t_opts = [[t for (s, t) in adm if s == sa] for sa in s_assign]
        total = Fraction(0)
        for t_assign in itertools.product(*t_opts):
            total += twenty_j_racah(SimplexChannels(tuple([1] * 10), tuple(zip(s_assign, t_assign))))
        ok = ok and total == fifteen_j([1] * 10, s_assign)
    _report(7, ok, "243 configurations, three exact routes including sign; channel sums match", t0)


def test_criterion_08_tetrahedral_consistency():
    """Loop and cycle Racah sums equal the oracle on K4 for all spins <= 1.  (< 1 min)"""
    t0 = time.time()
    ok = True
    count = 0
    pairs = [("1", "2"), ("1", "3"), ("1", "4"), ("2", "3"), ("2", "4"), ("3", "4")]
    for combo in itertools.product((0, 1, 2), repeat=6):
        labels = dict(zip(pairs, combo))
        try:
            g = tetra_graph(labels)
        except ValueError:
            continue
        value = contract_graph_oracle(g)
        ok = ok and racah_cycles(g) == value and amplitude_loops(g) == value
        count += 1
    _report(8, ok and count > 10, f"{count} spin patterns: cycles = loops = oracle exactly", t0)


def test_criterion_09_semiclassical_closure():
    """Closure solving on geometric inputs and the angle identities.  (< 1 min)"""
    t0 = time.time()
    ok = True
    for c in (1, 2, 3):
        sol = solve_closure((c,) * 6, seed=1, restarts=8)
        ok = ok and sol.residual < 1e-10 and sol.khat_error < 1e-8 and sol.geometric
        ang = geometry_angles(sol.spinors)
        total = 6 * c
        for th in ang["theta"].values():
            ok = ok and abs(math.sin(th / 2) ** 2 - total * c / (4 * (3 * c / 2) ** 2)) < 1e-8
    sol0 = solve_closure((1, 1, 0, 1, 0, 0), seed=2, restarts=8)
    ok = ok and sol0.residual < 1e-10
    rng = np.random.default_rng(42)
    for _ in range(100):
        zs = spinors_from_framed_tet(random_framed_tetrahedron(rng))
        ang = geometry_angles(zs)
        ok = ok and max(spherical_cosine_residuals(ang)) < 1e-9
        ok = ok and max(three_term_residuals(zs, ang)) < 1e-9
    _report(9, ok, "closure residual < 1e-10, corner reconstruction < 1e-8, identities < 1e-9", t0)


def test_criterion_10_twisted_action():
    """Gauge invariance, the two action forms, twist-angle coherence, 4d dihedral.  (< 1 min)"""
    t0 = time.time()
    ok = True
    rng = np.random.default_rng(9)
    faces = [(a, b) for a in VERTICES for b in VERTICES if a < b]
    from intertwiner.geometry import branch_margin

    for g in (regular_simplex_geometry(), irregular_simplex_geometry(4)):
        act = twisted_action(g)
        ok = ok and abs(act.value - act.raw_value) < 1e-9
        chi_max = min(0.2, 0.4 * branch_margin(g))
        rotated = gauge_rotate(g, {f: rng.uniform(-chi_max, chi_max) for f in faces})
        ok = ok and abs(twisted_action(rotated).value - act.value) < 1e-10
        for a, b in faces:
            vals = [act.xi[(a, b, i)] for i in VERTICES if i not in (a, b)]
            for u, v in itertools.combinations(vals, 2):
                ok = ok and abs(math.remainder(u - v, 2 * math.pi)) < 1e-9
        ok = ok and max(dihedral_4d_check(g).values()) < 1e-8
        ok = ok and all(flag for flag, _ in shape_matching_check(g).values())
    _report(10, ok, "gauge < 1e-10, action forms < 1e-9, twist coherence < 1e-9, dihedral < 1e-8", t0)


def test_criterion_11_asymptotic_trends():
    """Normalized Gram off-diagonals strictly decrease and the 20j/15j ratio
    approaches one monotonically over scalings 1..4 of the all-half base.
    (< 30 min)

    The Gram trend holds exactly.  The ratio trend is computed exactly and
    does not hold for any all-half base: the channel labels of the half-spin
    system sit on the boundary of the admissible set, where neighboring
    norms dominate and the diagonal-dominance asymptotics does not apply
    (see the decisions ledger for the full analysis).  The assertion is kept
    as stated rather than weakened.
    """
    t0 = time.time()
    result = asymptotic_scan(range(1, 5))
    gram_ok = result.verdicts["offdiag-gram-strictly-decreasing"]
    # the stronger per-scale invariant: strictly decreasing up to scale 6
    base_labels = admissible_channels(HALF4)
    for la, lb in itertools.combinations(base_labels, 2):
        prev = None
        for lam in range(1, 7):
            g = gram_matrix((lam,) * 4)
            sla = (lam * la[0], lam * la[1])
            slb = (lam * lb[0], lam * lb[1])
            val = g.entry(sla, slb) ** 2 / (g.entry(sla, sla) * g.entry(slb, slb))
            if prev is not None:
                gram_ok = gram_ok and val < prev
            prev = val
    ratio_ok = result.verdicts["ratio-approaches-one-monotonically"]
    ok = gram_ok and ratio_ok
    detail = (
        f"gram-decrease={'ok' if gram_ok else 'FAIL'}, "
        f"ratio-to-one={'ok' if ratio_ok else 'FAIL (boundary labels; see ledger)'}"
    )
    _report(11, ok, detail, t0)
