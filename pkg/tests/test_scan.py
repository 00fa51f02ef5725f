from fractions import Fraction

from intertwiner.foursimplex import SimplexChannels
from intertwiner.scan import asymptotic_scan, stirling_log_ratio


def test_scan_rows_exact_values():
    result = asymptotic_scan(range(1, 4))
    assert [r.scale for r in result.rows] == [1, 2, 3]
    assert result.rows[0].twenty == -4
    assert result.rows[0].fifteen == 0 and result.rows[0].ratio is None
    assert result.rows[1].twenty == 9
    assert result.rows[1].fifteen == -3780
    assert result.rows[1].ratio == Fraction(9) / (Fraction(-3780) / 7776)
    # scale 1 equals the small-spin exact values by construction
    assert result.rows[0].offdiag_sq[((0, 2), (2, 0))] == Fraction(4, 16)


def test_scan_gram_trend_verdict():
    result = asymptotic_scan(range(1, 5))
    assert result.verdicts["offdiag-gram-strictly-decreasing"] is True
    lines = result.verdict_lines()
    assert any(line.startswith("offdiag-gram-strictly-decreasing: PASS") for line in lines)


def test_scan_partial_table_on_budget():
    result = asymptotic_scan(range(1, 4), budget=1)
    assert len(result.rows) < 3


def test_stirling_gap_shrinks_with_scale():
    gaps = []
    for lam in (1, 2, 4, 8):
        simp = SimplexChannels.uniform(lam, [(2 * lam, 2 * lam)] * 5)
        gaps.append(stirling_log_ratio(simp))
    assert all(a > b for a, b in zip(gaps, gaps[1:]))
