import random
from fractions import Fraction

import pytest

from intertwiner.bargmann import (
    BudgetExceeded,
    SpinorPolynomial,
    apply_replacement_operator,
    bargmann_inner,
    basis_state_poly,
    bracket_poly,
    coherent_pairing_poly,
    contract_graph_oracle,
    gaussian_integrate,
    genfun_det_check,
    genfun_gram_series,
    pair_power_poly,
)
from intertwiner.channels import (
    ChannelLabel,
    Corners,
    KMatrix,
    admissible_channels,
    apply_j1j2,
    fundamental_relation_vector,
    gram_matrix,
    power_relation_vector,
    scalar_product,
)

HALF4 = (1, 1, 1, 1)


def label_poly(two_js, s, t):
    lab = ChannelLabel(two_js, s, t)
    k = lab.corners()
    pairs = [((i, False), (j, False), k[idx]) for idx, (i, j) in enumerate(Corners.PAIRS)]
    return pair_power_poly(pairs)


def monomial_basis_poly(slot, two_j, m2):
    """e^j_m as an (unnormalized squared) polynomial: alpha^{j+m} beta^{j-m}/sqrt(...)"""
    # work with the square to stay rational: return the monomial and its norm separately
    a = (two_j + m2) // 2
    b = (two_j - m2) // 2
    mono = SpinorPolynomial({(((slot, 0, 0), a),): 1}) if a else SpinorPolynomial.constant(1)
    if b:
        mono = mono * SpinorPolynomial({(((slot, 1, 0), b),): 1})
    return mono, a, b


def test_bracket_basics():
    p = bracket_poly((0, False), (1, False))
    assert p.total_degree() == 2
    assert p.degree_in_slot(0) == 1
    k = KMatrix.from_dict(3, {(0, 1): 1})
    state = basis_state_poly(k)
    assert state == p


def test_basis_state_trivial():
    k = KMatrix.from_dict(3, {})
    assert basis_state_poly(k) == SpinorPolynomial.constant(1)


def test_basis_state_homogeneity():
    for tj in [HALF4, (2, 1, 1, 2)]:
        for s, t in admissible_channels(tj):
            poly = label_poly(tj, s, t)
            for slot in range(4):
                assert poly.degree_in_slot(slot) == tj[slot]


def test_monomial_orthonormality():
    # <e^j_m, e^j_m'> = delta, with the factorial normalization divided out
    from intertwiner.exact import factorial

    for two_j in range(0, 5):
        for m2 in range(-two_j, two_j + 1, 2):
            for m2p in range(-two_j, two_j + 1, 2):
                p, a, b = monomial_basis_poly(0, two_j, m2)
                q, ap, bp = monomial_basis_poly(0, two_j, m2p)
                inner = bargmann_inner(p, q)
                if m2 == m2p:
                    assert inner == factorial(a) * factorial(b)
                else:
                    assert inner == 0


def test_mixed_homogeneity_orthogonal():
    p = label_poly(HALF4, 2, 2)
    q = label_poly((2, 2, 2, 2), 2, 2)
    assert bargmann_inner(p, q) == 0


def test_oracle_matches_gram_small():
    for tj in [HALF4, (2, 1, 1, 2), (2, 2, 2, 2), (3, 3, 1, 1)]:
        g = gram_matrix(tj)
        for la in g.labels:
            for lb in g.labels:
                assert bargmann_inner(label_poly(tj, *la), label_poly(tj, *lb)) == g.entry(la, lb)


def test_anchor_norm_value():
    p = label_poly(HALF4, 2, 2)
    assert bargmann_inner(p, p) == 4  # equals the full scalar product, not the bare norm


def test_reproducing_property():
    # integrating a spin-j monomial against the conjugated coherent pairing
    # reproduces the monomial on the other slot
    for two_j in range(1, 4):
        for m2 in range(-two_j, two_j + 1, 2):
            mono, _, _ = monomial_basis_poly("w", two_j, m2)
            pairing = coherent_pairing_poly("w", "z", two_j)
            res = gaussian_integrate(mono * pairing, slots=["w"])
            expected, _, _ = monomial_basis_poly("z", two_j, m2)
            assert isinstance(res, SpinorPolynomial)
            assert (res - expected).is_zero()
    # spin 0 reduces to the plain normalization integral
    assert gaussian_integrate(coherent_pairing_poly("w", "z", 0), slots=["w"]) == 1


def test_fundamental_relation_is_zero_polynomial():
    for tj in [HALF4, (2, 2, 2, 2), (2, 1, 1, 2)]:
        labels = set(admissible_channels(tj))
        for s, t in labels:
            vec = fundamental_relation_vector(ChannelLabel(tj, s, t))
            total = SpinorPolynomial()
            for (S, T), coeff in vec.items():
                if coeff and (S, T) in labels:
                    total = total + label_poly(tj, S, T) * coeff
                else:
                    assert coeff == 0 or (S, T) not in labels
            # inadmissible entries stand for zero states; the admissible part
            # must cancel exactly
            full = SpinorPolynomial()
            for (S, T), coeff in vec.items():
                if (S, T) in labels and coeff:
                    full = full + label_poly(tj, S, T) * coeff
            assert full.is_zero()


def test_power_relations_zero_polynomial():
    for tj in [HALF4, (2, 2, 2, 2)]:
        labels = set(admissible_channels(tj))
        for n in (1, 2):
            shifted = tuple(v - n for v in tj)
            if any(v < 0 for v in shifted):
                continue
            for s, t in admissible_channels(shifted):
                vec = power_relation_vector(tj, s, t, n)
                total = SpinorPolynomial()
                for (S, T), coeff in vec.items():
                    if coeff and (S, T) in labels:
                        total = total + label_poly(tj, S, T) * coeff
                assert total.is_zero()


def test_replacement_operator_reproduces_invariant_action():
    # 2 J1.J2 = E12 E21 - E11 E22 / 2 - E11 on polynomials vs the label algebra
    for tj in [HALF4, (2, 2, 2, 2), (2, 1, 1, 2)]:
        labels = admissible_channels(tj)
        g = gram_matrix(tj)
        for s, t in labels:
            poly = label_poly(tj, s, t)
            e21 = apply_replacement_operator(poly, 1, 0)
            e12e21 = apply_replacement_operator(e21, 0, 1)
            action = e12e21 * Fraction(1, 2) + poly * Fraction(
                -(tj[0] * tj[1]) - 2 * tj[0], 4
            )  # (E12E21 - E11 E22/2 - E11)/2 with E_ii = two_j_i
            out = apply_j1j2(ChannelLabel(tj, s, t))
            for sp, tp in labels:
                lhs = bargmann_inner(label_poly(tj, sp, tp), action)
                rhs = sum(
                    coeff * g.entry((sp, tp), key)
                    for key, coeff in out.items()
                    if key in set(labels)
                )
                assert lhs == rhs, (tj, (s, t), (sp, tp))


def test_contract_budget_guard():
    from intertwiner.foursimplex import SimplexChannels, simplex_graph

    simp = SimplexChannels.uniform(2, [(2, 2)] * 5)
    with pytest.raises(BudgetExceeded):
        contract_graph_oracle(simplex_graph(simp), budget=10)


def test_genfun_series_matches_gram():
    series = genfun_gram_series(6)
    assert series.coefficient((0,) * 6, (0,) * 6) == 1
    for tj in [HALF4, (2, 1, 1, 0)]:
        g = gram_matrix(tj)
        for la in g.labels:
            for lb in g.labels:
                ka = ChannelLabel(tj, *la).corners()
                kb = ChannelLabel(tj, *lb).corners()
                # variable order (12, 13, 14, 23, 24, 34)
                order = lambda k: (k.k12, k.k13, k.k14, k.k23, k.k24, k.k34)
                assert series.coefficient(order(ka), order(kb)) == g.entry(la, lb)


def test_genfun_det_closed_form():
    random.seed(4)
    for _ in range(20):
        taus = [complex(random.uniform(-0.3, 0.3), random.uniform(-0.3, 0.3)) for _ in range(6)]
        assert genfun_det_check(taus) < 1e-12
