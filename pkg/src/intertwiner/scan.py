"""Scaling scans: exact symbol tables and normalized-overlap trends.

Scales a base 4-simplex configuration by an integer factor and tabulates the
exact 20-spin symbol, the S-channel contraction, their normalized ratio, and
the normalized off-diagonal Gram magnitudes of the scaled single-vertex
system.  Everything is exact; the trend verdicts compare squared Fractions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .channels import ChannelLabel, admissible_channels, gram_matrix, norm_squared
from .exact import factorial
from .foursimplex import SimplexChannels, VERTICES, twenty_j_racah
from .recoupling import KIND_S, fifteen_j, overlap_basis_closed

__all__ = ["ScanRow", "ScanResult", "asymptotic_scan", "stirling_log_ratio"]


@dataclass
class ScanRow:
    scale: int
    twenty: Fraction
    fifteen: Fraction
    norm_factor: Fraction
    ratio: Fraction | None
    offdiag_sq: dict  # (label_a, label_b) -> squared normalized Gram entry


@dataclass
class ScanResult:
    base_edge_two_j: int
    base_channels: tuple
    rows: list
    verdicts: dict

    def verdict_lines(self) -> list:
        out = []
        for name, ok in sorted(self.verdicts.items()):
            out.append(f"{name}: {'PASS' if ok else 'FAIL'}")
        return out


def asymptotic_scan(scales, base_edge_two_j: int = 1, base_channels=None, budget=None) -> ScanResult:
    """Exact scaling table for lam * (spins, channel labels).

    Emits monotone-trend verdicts: strictly decreasing normalized off-diagonal
    Gram magnitudes, and the 20j/(15j * norm) ratio approaching one.  A budget
    overrun yields a partial table.
    """
    base_channels = tuple(base_channels) if base_channels else tuple([(2, 2)] * 5)
    rows = []
    for lam in scales:
        edge = lam * base_edge_two_j
        channels = tuple((lam * s, lam * t) for s, t in base_channels)
        simp = SimplexChannels.uniform(edge, channels)
        try:
            twenty = twenty_j_racah(simp, budget=budget)
            fifteen = fifteen_j([edge] * 10, [s for s, _ in channels])
        except RuntimeError:
            break  # budget exceeded: return the partial table
        norm_factor = Fraction(1)
        for a, (s, t) in zip(VERTICES, channels):
            two_js = simp.vertex_two_js(a)
            norm_factor *= norm_squared(ChannelLabel(two_js, s, t)) / overlap_basis_closed(
                two_js, KIND_S, s, KIND_S, s
            )
        ratio = twenty / (fifteen * norm_factor) if fifteen else None

        vertex_two_js = tuple([edge] * 4)
        gram = gram_matrix(vertex_two_js)
        base_labels = admissible_channels((base_edge_two_j,) * 4)
        offdiag = {}
        for i, la in enumerate(base_labels):
            for lb in base_labels[i + 1 :]:
                sla = (lam * la[0], lam * la[1])
                slb = (lam * lb[0], lam * lb[1])
                num = gram.entry(sla, slb)
                den = gram.entry(sla, sla) * gram.entry(slb, slb)
                offdiag[(la, lb)] = num * num / den
        rows.append(ScanRow(lam, twenty, fifteen, norm_factor, ratio, offdiag))

    verdicts = {}
    if len(rows) >= 2:
        pairs = rows[0].offdiag_sq.keys()
        verdicts["offdiag-gram-strictly-decreasing"] = all(
            rows[k].offdiag_sq[p] > rows[k + 1].offdiag_sq[p]
            for p in pairs
            for k in range(len(rows) - 1)
        )
        defined = [r.ratio for r in rows if r.ratio is not None]
        if len(defined) >= 2:
            gaps = [abs(1 - r) for r in defined]
            verdicts["ratio-approaches-one-monotonically"] = all(
                gaps[k] > gaps[k + 1] for k in range(len(gaps) - 1)
            )
        else:
            verdicts["ratio-approaches-one-monotonically"] = False
    return ScanResult(base_edge_two_j, base_channels, rows, verdicts)


def stirling_log_ratio(simplex: SimplexChannels) -> float:
    """Relative gap between the factorial normalization and its leading behavior.

    Compares log sqrt(prod (J_a+1)! prod k!) with the dominant sum
    (J ln J - J)/2-type terms built from the same corner data; the gap over
    the log shrinks as the configuration scales.
    """
    import math

    log_exact = 0.0
    log_dominant = 0.0
    for a in VERTICES:
        corners = simplex.vertex_corners(a)
        big_j = sum(corners.values())
        log_exact += 0.5 * math.log(factorial(big_j + 1))
        if big_j:
            log_dominant += 0.5 * (big_j * math.log(big_j) - big_j)
        for k in corners.values():
            log_exact += 0.5 * math.log(factorial(k))
            if k:
                log_dominant += 0.5 * (k * math.log(k) - k)
    if log_exact == 0:
        return 0.0
    return abs(log_exact - log_dominant) / max(1.0, abs(log_exact))
