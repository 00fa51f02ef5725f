#!/usr/bin/env python3
"""Exact scaling-trend table for the all-half base, written as CSV.

Usage: python scripts/run_scan.py [max_scale] [out.csv]
"""

import sys

from intertwiner.foursimplex import SimplexChannels
from intertwiner.scan import asymptotic_scan, stirling_log_ratio


def main(argv):
    max_scale = int(argv[1]) if len(argv) > 1 else 4
    out_path = argv[2] if len(argv) > 2 else "scan.csv"
    result = asymptotic_scan(range(1, max_scale + 1))
    lines = ["scale,twenty_j,fifteen_j,norm_factor,ratio,max_offdiag_sq,stirling_gap"]
    for row in result.rows:
        simp = SimplexChannels.uniform(row.scale, [(2 * row.scale, 2 * row.scale)] * 5)
        lines.append(
            ",".join(
                [
                    str(row.scale),
                    str(row.twenty),
                    str(row.fifteen),
                    str(row.norm_factor),
                    "" if row.ratio is None else str(row.ratio),
                    str(max(row.offdiag_sq.values())),
                    f"{stirling_log_ratio(simp):.6f}",
                ]
            )
        )
    text = "\n".join(lines) + "\n"
    with open(out_path, "w", encoding="utf-8") as fh:
        fh.write(text)
    print(text, end="")
    for line in result.verdict_lines():
        print(line)
    print(f"wrote {out_path}")


if __name__ == "__main__":
    main(sys.argv)
