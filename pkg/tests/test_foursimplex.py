import random
from fractions import Fraction

from intertwiner.bargmann import contract_graph_oracle
from intertwiner.foursimplex import (
    CYCLES,
    FREE_PARAMS,
    SimplexChannels,
    VERTICES,
    admissible_assignments,
    appendix_e_m_values,
    coherent_weight,
    cycle_orientation_signs,
    reconstruct_corners,
    simplex_graph,
    twenty_j_cycle_representative,
    twenty_j_racah,
)
from intertwiner.foursimplex import _corner_label_dict
from intertwiner.graphs import racah_cycles


class ComplexFraction:
    __slots__ = ("re", "im")

    def __init__(self, re, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    def _coerce(self, other):
        return other if isinstance(other, ComplexFraction) else ComplexFraction(other)

    def __mul__(self, other):
        o = self._coerce(other)
        return ComplexFraction(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __add__(self, other):
        o = self._coerce(other)
        return ComplexFraction(self.re + o.re, self.im + o.im)

    def __sub__(self, other):
        o = self._coerce(other)
        return ComplexFraction(self.re - o.re, self.im - o.im)

    def __eq__(self, other):
        o = self._coerce(other)
        return self.re == o.re and self.im == o.im


ALL_HALF = tuple([1] * 10)


def test_cycle_inventory():
    assert len(CYCLES) == 37
    assert len(FREE_PARAMS) == 17
    assert len(set(CYCLES)) == 37
    lengths = {}
    for name in CYCLES:
        lengths[len(name)] = lengths.get(len(name), 0) + 1
    assert lengths == {3: 10, 4: 15, 5: 12}


def test_vertex_corner_blocks():
    simp = SimplexChannels.uniform(1, [(0, 2)] * 5)
    for a in VERTICES:
        k = simp.vertex_corners(a)
        assert len(k) == 6
        for i in [v for v in VERTICES if v != a]:
            row = sum(v for (x, y), v in k.items() if i in (x, y))
            assert row == 1  # all edges carry twice-spin 1


def test_simplex_graph_consistency():
    for ch in admissible_assignments(ALL_HALF)[:10]:
        simplex_graph(SimplexChannels(ALL_HALF, ch)).validate()


def test_admissible_assignment_count_all_half():
    assert len(admissible_assignments(ALL_HALF)) == 3**5


def test_appendix_parameterization_reconstructs_corners():
    simp = SimplexChannels.uniform(1, [(0, 2)] * 5)
    corners = _corner_label_dict(simp)
    rng = random.Random(7)
    for _ in range(1000):
        params = [rng.randint(-3, 3) for _ in range(17)]
        assignment = appendix_e_m_values(corners, params)
        rebuilt = reconstruct_corners(assignment.multiplicities)
        for key, val in corners.items():
            assert rebuilt.get(key, 0) == val


def test_appendix_validity_flag():
    zero = SimplexChannels.uniform(0, [(0, 0)] * 5)
    corners0 = _corner_label_dict(zero)
    assert appendix_e_m_values(corners0, [0] * 17).valid
    assert not appendix_e_m_values(corners0, [1] + [0] * 16).valid
    simp = SimplexChannels.uniform(1, [(0, 2)] * 5)
    corners = _corner_label_dict(simp)
    assert not appendix_e_m_values(corners, [5] + [0] * 16).valid


def test_zero_spin_symbols():
    simp = SimplexChannels.uniform(0, [(0, 0)] * 5)
    assert twenty_j_racah(simp) == 1
    assert twenty_j_cycle_representative(simp) == 1


def test_cycle_representative_matches_generic_engine():
    for ch in admissible_assignments(ALL_HALF)[::31]:
        simp = SimplexChannels(ALL_HALF, ch)
        assert twenty_j_cycle_representative(simp) == racah_cycles(simplex_graph(simp))


def test_loop_route_matches_oracle_spot():
    for ch in admissible_assignments(ALL_HALF)[::29]:
        simp = SimplexChannels(ALL_HALF, ch)
        assert twenty_j_racah(simp) == contract_graph_oracle(simplex_graph(simp))


def test_cycle_representative_equivalent_under_coherent_contraction():
    # The 17-parameter cycle sum differs from the amplitude pointwise but the
    # difference vanishes against the corner-bracket weights: both give the
    # same coherent contraction, verified in exact complex rationals.
    rng = random.Random(3)

    def rand_cf():
        return ComplexFraction(
            Fraction(rng.randint(-4, 4), rng.randint(1, 3)),
            Fraction(rng.randint(-4, 4), rng.randint(1, 3)),
        )

    spinors = {(v, u): (rand_cf(), rand_cf()) for v in VERTICES for u in VERTICES if u != v}
    total_loops = ComplexFraction(0)
    total_cycles = ComplexFraction(0)
    differs_somewhere = False
    for ch in admissible_assignments(ALL_HALF):
        simp = SimplexChannels(ALL_HALF, ch)
        w = coherent_weight(simp, spinors)
        a = twenty_j_racah(simp)
        r = twenty_j_cycle_representative(simp)
        if a != r:
            differs_somewhere = True
        total_loops = total_loops + w * ComplexFraction(a)
        total_cycles = total_cycles + w * ComplexFraction(r)
    assert differs_somewhere  # the representatives are genuinely different
    assert total_loops == total_cycles


def test_orientation_signs_frozen():
    signs = cycle_orientation_signs()
    assert set(signs) == set(CYCLES)
    assert all(v in (-1, 1) for v in signs.values())
    # all triangles carry the same sign under the canonical conventions
    assert {signs[name] for name in CYCLES if len(name) == 3} == {-1}
