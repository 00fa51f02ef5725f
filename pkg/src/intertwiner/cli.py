"""Command-line interface: exact symbols, Gram matrices, graph amplitudes, geometry.

Spins are written as integers ("2") or half-integers ("3/2", denominator 2).
Exact values print as p/q; radical-bearing values as (p/q)*sqrt(r); --float
switches to 17-significant-digit decimals.  Identical inputs and seeds give
byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field

from .channels import AdmissibilityError, admissible_channels, gram_matrix, projector_matrix
from .exact import SqrtRational
from .foursimplex import SimplexChannels, VERTICES, twenty_j_racah
from .graphs import amplitude_loops, enumerate_simple_cycles, enumerate_simple_loops, graph_from_json, racah_cycles
from .recoupling import fifteen_j_network, normalized_twenty_j, wigner_6j
from .scan import asymptotic_scan

__all__ = ["JobSpec", "main"]


@dataclass
class JobSpec:
    """Validated arguments of one CLI invocation."""

    command: str
    args: dict = field(default_factory=dict)
    fmt: str = "text"
    seed: int = 0
    threads: int = 1
    budget: int | None = None
    as_float: bool = False


def parse_spin(text: str) -> int:
    """Spin string to twice-spin integer."""
    text = text.strip()
    if "/" in text:
        num, den = text.split("/")
        if den.strip() != "2":
            raise ValueError(f"spin {text!r}: only denominator 2 is supported")
        return int(num)
    return 2 * int(text)


def fmt_spin(two_j: int) -> str:
    return str(two_j // 2) if two_j % 2 == 0 else f"{two_j}/2"


def render_value(value, as_float: bool) -> str:
    if isinstance(value, SqrtRational):
        if as_float:
            return f"{float(value):.17g}"
        return value.pretty()
    if as_float:
        return f"{float(value):.17g}"
    return str(value)


def _parse_channel_list(text: str):
    out = []
    for block in text.split(";"):
        s, t = block.split(",")
        out.append((parse_spin(s), parse_spin(t)))
    return out


def cmd_symbol(spec: JobSpec, out) -> int:
    kind = spec.args["kind"]
    if kind == "6j":
        two = [parse_spin(v) for v in spec.args["spins"]]
        if len(two) != 6:
            raise ValueError("6j needs six spins")
        print(render_value(wigner_6j(*two), spec.as_float), file=out)
        return 0
    if kind == "15j":
        edges = [parse_spin(v) for v in spec.args["spins"]]
        s_assign = [parse_spin(v) for v in spec.args["channels"]]
        if len(edges) != 10 or len(s_assign) != 5:
            raise ValueError("15j needs ten edge spins and five channel spins")
        print(render_value(fifteen_j_network(edges, s_assign), spec.as_float), file=out)
        return 0
    if kind == "20j":
        edges = [parse_spin(v) for v in spec.args["spins"]]
        channels = _parse_channel_list(spec.args["st"])
        if len(edges) != 10 or len(channels) != 5:
            raise ValueError("20j needs ten edge spins and five (S,T) pairs")
        simp = SimplexChannels(tuple(edges), tuple(channels))
        for a in VERTICES:
            simp.vertex_label(a)  # validates admissibility with a clear error
        if spec.args.get("normalized"):
            print(render_value(normalized_twenty_j(simp), spec.as_float), file=out)
        else:
            print(render_value(twenty_j_racah(simp, budget=spec.budget), spec.as_float), file=out)
        return 0
    raise ValueError(f"unknown symbol kind {kind!r}")


def _matrix_doc(two_js, rows, labels):
    return {
        "two_js": list(two_js),
        "labels": [[s, t] for s, t in labels],
        "entries": [[str(v) for v in row] for row in rows],
    }


def _emit_matrix(spec: JobSpec, rows, labels, two_js, out) -> None:
    if spec.fmt == "json":
        print(json.dumps(_matrix_doc(two_js, rows, labels), indent=2, sort_keys=True), file=out)
    elif spec.fmt == "csv":
        print("label," + ",".join(f"({s};{t})" for s, t in labels), file=out)
        for lab, row in zip(labels, rows):
            print(f"({lab[0]};{lab[1]})," + ",".join(render_value(v, spec.as_float) for v in row), file=out)
    else:
        print("labels: " + " ".join(f"({fmt_spin(s)},{fmt_spin(t)})" for s, t in labels), file=out)
        for row in rows:
            print("[" + ", ".join(render_value(v, spec.as_float) for v in row) + "]", file=out)


def cmd_gram(spec: JobSpec, out) -> int:
    two_js = tuple(parse_spin(v) for v in spec.args["spins"])
    g = gram_matrix(two_js)
    _emit_matrix(spec, g.entries, g.labels, two_js, out)
    return 0


def cmd_projector(spec: JobSpec, out) -> int:
    two_js = tuple(parse_spin(v) for v in spec.args["spins"])
    rows = projector_matrix(two_js)
    labels = admissible_channels(two_js)
    _emit_matrix(spec, rows, labels, two_js, out)
    return 0


def cmd_graph(spec: JobSpec, out) -> int:
    with open(spec.args["path"], "r", encoding="utf-8") as fh:
        g = graph_from_json(fh.read())
    action = spec.args["action"]
    if action == "cycles":
        print(len(enumerate_simple_cycles(g)), file=out)
    elif action == "loops":
        print(len(enumerate_simple_loops(g)), file=out)
    elif action == "amplitude":
        g.validate()
        value = amplitude_loops(g, budget=spec.budget)
        print(render_value(value, spec.as_float), file=out)
    elif action == "racah-cycles":
        g.validate()
        print(render_value(racah_cycles(g, budget=spec.budget), spec.as_float), file=out)
    else:
        raise ValueError(f"unknown graph action {action!r}")
    return 0


def cmd_geometry(spec: JobSpec, out) -> int:
    import numpy as np

    from . import geometry as geo

    action = spec.args["action"]
    if action == "solve":
        corners = [int(v) for v in spec.args["corners"].split(",")]
        if len(corners) != 6:
            raise ValueError("closure solving needs six corner exponents k12,k13,k14,k23,k24,k34")
        sol = geo.solve_closure(corners, seed=spec.seed, restarts=spec.args.get("restarts", 32))
        doc = {
            "corners": corners,
            "residual": float(sol.residual),
            "geometric": bool(sol.geometric),
            "khat": [[float(x) for x in row] for row in sol.khat],
            "spinors": [
                [float(z[0].real), float(z[0].imag), float(z[1].real), float(z[1].imag)]
                for z in sol.spinors
            ],
        }
        print(json.dumps(doc, indent=2, sort_keys=True), file=out)
        return 0 if sol.geometric else 3
    if action == "check":
        with open(spec.args["path"], "r", encoding="utf-8") as fh:
            text = fh.read()
        doc = json.loads(text)
        if doc.get("format") == "framed-tetrahedron/1":
            tet = geo.framed_tet_from_json(text)
            zs = geo.spinors_from_framed_tet(tet)
            ang = geo.geometry_angles(zs)
            report = {
                "format": doc["format"],
                "closure_residual": float(tet.closure_residual()),
                "phase_residual": float(ang["phase_residual"]),
                "max_spherical_cosine_residual": float(max(geo.spherical_cosine_residuals(ang))),
                "max_three_term_residual": float(max(geo.three_term_residuals(zs, ang))),
            }
        elif doc.get("format") == "twisted-simplex/1":
            g = geo.twisted_from_json(text)
            act = geo.twisted_action(g)
            shape = geo.shape_matching_check(g)
            dihedral = geo.dihedral_4d_check(g)
            report = {
                "format": doc["format"],
                "reality_residual": float(g.reality_residual()),
                "closure_residual": float(g.closure_residual()),
                "action": float(act.value),
                "action_raw": float(act.raw_value),
                "action_form_gap": float(abs(act.value - act.raw_value)),
                "max_shape_matching_residual": float(max(v for _, v in shape.values())),
                "max_dihedral_residual": float(max(dihedral.values())),
            }
        else:
            raise ValueError("unrecognized geometry file format")
        print(json.dumps(report, indent=2, sort_keys=True), file=out)
        return 0
    raise ValueError(f"unknown geometry action {action!r}")


def cmd_scan(spec: JobSpec, out) -> int:
    lam_lo, lam_hi = spec.args["lambdas"]
    base = spec.args.get("base", "all-half")
    if base == "all-half":
        edge, channels = 1, tuple([(2, 2)] * 5)
    else:
        raise ValueError(f"unknown scan base {base!r}")
    result = asymptotic_scan(range(lam_lo, lam_hi + 1), edge, channels, budget=spec.budget)
    if spec.fmt == "json":
        doc = {
            "rows": [
                {
                    "scale": r.scale,
                    "twenty_j": str(r.twenty),
                    "fifteen_j": str(r.fifteen),
                    "norm_factor": str(r.norm_factor),
                    "ratio": None if r.ratio is None else str(r.ratio),
                    "offdiag_sq": {f"{a}|{b}": str(v) for (a, b), v in sorted(r.offdiag_sq.items())},
                }
                for r in result.rows
            ],
            "verdicts": result.verdicts,
        }
        print(json.dumps(doc, indent=2, sort_keys=True), file=out)
    else:
        print("scale,twenty_j,fifteen_j,norm_factor,ratio,max_offdiag_sq", file=out)
        for r in result.rows:
            ratio = "" if r.ratio is None else render_value(r.ratio, spec.as_float)
            print(
                f"{r.scale},{render_value(r.twenty, spec.as_float)},"
                f"{render_value(r.fifteen, spec.as_float)},{render_value(r.norm_factor, spec.as_float)},"
                f"{ratio},{render_value(max(r.offdiag_sq.values()), spec.as_float)}",
                file=out,
            )
        for line in result.verdict_lines():
            print(line, file=out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    # SUPPRESS keeps subcommand-position flags from clobbering ones given
    # before the subcommand; unset values fall back in spec_from_args
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--format", choices=("text", "json", "csv"))
    common.add_argument("--seed", type=int)
    common.add_argument("--threads", type=int)
    common.add_argument("--budget", type=int)
    common.add_argument("--float", action="store_true", dest="as_float")

    p = argparse.ArgumentParser(prog="intertwiner", description=__doc__, parents=[common])
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, **kw):
        return sub.add_parser(name, parents=[common], **kw)

    sym = add("symbol", help="exact 6j / 15j / 20j values")
    sym.add_argument("kind", choices=("6j", "15j", "20j"))
    sym.add_argument("spins", nargs="*", help="6j: six spins inline")
    sym.add_argument("--spins", dest="spin_list", help="comma-separated spins (10 for 15j/20j)")
    sym.add_argument("--s", dest="channels", help="comma-separated five S channel spins (15j)")
    sym.add_argument("--st", help="semicolon-separated five S,T pairs (20j)")
    sym.add_argument("--all-half", action="store_true", help="use all edge spins 1/2 (20j)")
    sym.add_argument("--normalized", action="store_true", help="divide by the five basis norms")

    gram = add("gram", help="exact Gram matrix of the channel labels")
    gram.add_argument("spins", nargs=4)

    proj = add("projector", help="exact projector matrix onto the intertwiner space")
    proj.add_argument("spins", nargs=4)

    gr = add("graph", help="cycle/loop counts and exact graph amplitudes")
    gr.add_argument("action", choices=("cycles", "loops", "amplitude", "racah-cycles"))
    gr.add_argument("path")

    geo = add("geometry", help="closure solving and geometry checks")
    geo.add_argument("action", choices=("solve", "check"))
    geo.add_argument("path", nargs="?", help="geometry JSON file (check)")
    geo.add_argument("--corners", help="six corner exponents k12,k13,k14,k23,k24,k34 (solve)")
    geo.add_argument("--restarts", type=int, default=32)

    sc = add("scan", help="exact scaling-trend table")
    sc.add_argument("--lambda", dest="lambdas", default="1..4", help="range like 1..4")
    sc.add_argument("--base", default="all-half")
    return p


def spec_from_args(ns) -> JobSpec:
    args: dict = {}
    if ns.command == "symbol":
        args["kind"] = ns.kind
        if ns.kind == "6j":
            args["spins"] = ns.spins
        else:
            if ns.all_half:
                spins = ["1/2"] * 10
            elif ns.spin_list:
                spins = ns.spin_list.split(",")
            else:
                raise ValueError("15j/20j need --spins or --all-half")
            args["spins"] = spins
            if ns.kind == "15j":
                if not ns.channels:
                    raise ValueError("15j needs --s with five channel spins")
                args["channels"] = ns.channels.split(",")
            else:
                if not ns.st:
                    raise ValueError("20j needs --st with five S,T pairs")
                args["st"] = ns.st
                args["normalized"] = ns.normalized
    elif ns.command in ("gram", "projector"):
        args["spins"] = ns.spins
    elif ns.command == "graph":
        args["action"] = ns.action
        args["path"] = ns.path
    elif ns.command == "geometry":
        args["action"] = ns.action
        if ns.action == "solve":
            if not ns.corners:
                raise ValueError("geometry solve needs --corners")
            args["corners"] = ns.corners
            args["restarts"] = ns.restarts
        else:
            if not ns.path:
                raise ValueError("geometry check needs a file path")
            args["path"] = ns.path
    elif ns.command == "scan":
        lo, _, hi = ns.lambdas.partition("..")
        args["lambdas"] = (int(lo), int(hi or lo))
        args["base"] = ns.base
    return JobSpec(
        command=ns.command,
        args=args,
        fmt=getattr(ns, "format", "text"),
        seed=getattr(ns, "seed", 0),
        threads=getattr(ns, "threads", 1),
        budget=getattr(ns, "budget", None),
        as_float=getattr(ns, "as_float", False),
    )


_DISPATCH = {
    "symbol": cmd_symbol,
    "gram": cmd_gram,
    "projector": cmd_projector,
    "graph": cmd_graph,
    "geometry": cmd_geometry,
    "scan": cmd_scan,
}


def main(argv=None, out=None) -> int:
    out = out if out is not None else sys.stdout
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        spec = spec_from_args(ns)
        return _DISPATCH[spec.command](spec, out)
    except (AdmissibilityError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
