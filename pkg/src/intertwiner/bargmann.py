"""Symbolic Bargmann-space oracle: exact Gaussian-moment integration.

States are polynomials in spinor components.  A variable is a triple
(slot, comp, bar): `slot` names the spinor, `comp` is 0/1 for the two
components, `bar` marks a conjugated variable.  The Hermitian inner product
integrates monomials by exponent matching, one factorial per variable, which
keeps every contraction exact.

This module is a test instrument: it is the convention anchor for every
sign downstream, not a production evaluation path.
"""

from __future__ import annotations

from fractions import Fraction

from .exact import factorial

__all__ = [
    "BudgetExceeded",
    "SpinorPolynomial",
    "spinor_components",
    "bracket_poly",
    "pair_power_poly",
    "basis_state_poly",
    "bargmann_inner",
    "gaussian_integrate",
    "apply_replacement_operator",
    "coherent_pairing_poly",
    "genfun_gram_series",
    "genfun_det_check",
]


class BudgetExceeded(RuntimeError):
    """The requested symbolic computation exceeds the configured degree budget."""


class SpinorPolynomial:
    """Sparse exact polynomial in spinor-component variables."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict | None = None):
        self.terms = {}
        if terms:
            for key, coeff in terms.items():
                coeff = Fraction(coeff)
                if coeff:
                    self.terms[key] = coeff

    @classmethod
    def constant(cls, value) -> "SpinorPolynomial":
        return cls({(): Fraction(value)})

    @classmethod
    def variable(cls, slot, comp: int, bar: int = 0, coeff=1) -> "SpinorPolynomial":
        return cls({(((slot, comp, bar), 1),): Fraction(coeff)})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if isinstance(other, SpinorPolynomial):
            return self.terms == other.terms
        return self.terms == SpinorPolynomial.constant(other).terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other):
        out = dict(self.terms)
        for key, c in other.terms.items():
            new = out.get(key, Fraction(0)) + c
            if new:
                out[key] = new
            else:
                out.pop(key, None)
        return SpinorPolynomial(out)

    def __sub__(self, other):
        return self + (other * -1)

    def __mul__(self, other):
        if not isinstance(other, SpinorPolynomial):
            scalar = Fraction(other)
            return SpinorPolynomial({k: c * scalar for k, c in self.terms.items()})
        out: dict = {}
        for k1, c1 in self.terms.items():
            d1 = dict(k1)
            for k2, c2 in other.terms.items():
                merged = dict(d1)
                for var, exp in k2:
                    merged[var] = merged.get(var, 0) + exp
                key = tuple(sorted(merged.items()))
                new = out.get(key, Fraction(0)) + c1 * c2
                if new:
                    out[key] = new
                else:
                    out.pop(key, None)
        return SpinorPolynomial(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        result = SpinorPolynomial.constant(1)
        for _ in range(n):
            result = result * self
        return result

    def total_degree(self) -> int:
        return max((sum(e for _, e in key) for key in self.terms), default=0)

    def degree_in_slot(self, slot) -> int:
        best = 0
        for key in self.terms:
            best = max(best, sum(e for (s, _, _), e in key if s == slot))
        return best

    def conjugate(self) -> "SpinorPolynomial":
        """Complex conjugation: flips the bar flag (coefficients are rational)."""
        out = {}
        for key, c in self.terms.items():
            new_key = tuple(sorted((((s, comp, 1 - bar), e) for (s, comp, bar), e in key)))
            out[new_key] = c
        return SpinorPolynomial(out)

    def substitute_conjugate_spinor(self, slot) -> "SpinorPolynomial":
        """Formal map (alpha, beta) -> (-conj(beta), conj(alpha)) on one slot."""
        result = SpinorPolynomial()
        for key, c in self.terms.items():
            term = SpinorPolynomial.constant(c)
            for (s, comp, bar), e in key:
                if s == slot and bar == 0:
                    if comp == 0:
                        repl = SpinorPolynomial.variable(s, 1, 1, -1)
                    else:
                        repl = SpinorPolynomial.variable(s, 0, 1)
                    term = term * repl**e
                else:
                    term = term * SpinorPolynomial({(((s, comp, bar), e),): 1})
            result = result + term
        return result

    def rename_slot(self, old, new) -> "SpinorPolynomial":
        out = {}
        for key, c in self.terms.items():
            new_key = tuple(
                sorted(((new if s == old else s, comp, bar), e) for (s, comp, bar), e in key)
            )
            out[new_key] = c
        return SpinorPolynomial(out)

    def __repr__(self):
        if not self.terms:
            return "SpinorPolynomial(0)"
        parts = []
        for key, c in sorted(self.terms.items()):
            vs = "*".join(
                f"{'~' if bar else ''}z[{s}][{comp}]^{e}" for (s, comp, bar), e in key
            )
            parts.append(f"{c}*{vs}" if vs else str(c))
        return "SpinorPolynomial(" + " + ".join(parts) + ")"


def spinor_components(slot, conjugated: bool = False):
    """(first, second) component polynomials of a slot's spinor.

    Plain slot: (alpha, beta).  Conjugated slot (the reversed half-edge):
    (-conj(beta), conj(alpha)).
    """
    if not conjugated:
        return (
            SpinorPolynomial.variable(slot, 0, 0),
            SpinorPolynomial.variable(slot, 1, 0),
        )
    return (
        SpinorPolynomial.variable(slot, 1, 1, -1),
        SpinorPolynomial.variable(slot, 0, 1),
    )


def bracket_poly(spec_a, spec_b) -> SpinorPolynomial:
    """Holomorphic pair invariant [a|b> = a_first b_second - b_first a_second.

    Each spec is (slot, conjugated_flag).
    """
    a1, a2 = spinor_components(*spec_a)
    b1, b2 = spinor_components(*spec_b)
    return a1 * b2 - b1 * a2


def pair_power_poly(pairs) -> SpinorPolynomial:
    """Product over (spec_a, spec_b, k) of [a|b>^k / k!."""
    result = SpinorPolynomial.constant(1)
    for spec_a, spec_b, k in pairs:
        if k:
            result = result * (bracket_poly(spec_a, spec_b) ** k)
            result = result * Fraction(1, factorial(k))
    return result


def basis_state_poly(kmatrix, slots=None, conjugated=None) -> SpinorPolynomial:
    """Discrete-basis intertwiner state as an explicit polynomial.

    `kmatrix` is anything with .n and .entry(i, j); slots default to 0..n-1.
    """
    n = kmatrix.n
    slots = list(range(n)) if slots is None else list(slots)
    conjugated = [False] * n if conjugated is None else list(conjugated)
    pairs = []
    for i in range(n):
        for j in range(i + 1, n):
            pairs.append(((slots[i], conjugated[i]), (slots[j], conjugated[j]), kmatrix.entry(i, j)))
    return pair_power_poly(pairs)


def bargmann_inner(f: SpinorPolynomial, g: SpinorPolynomial) -> Fraction:
    """<f|g> for holomorphic polynomials: matched monomials weighted by factorials."""
    total = Fraction(0)
    small, large = (f, g) if len(f.terms) <= len(g.terms) else (g, f)
    for key, cf in small.terms.items():
        cg = large.terms.get(key)
        if cg is None:
            continue
        weight = 1
        for _, e in key:
            weight *= factorial(e)
        total += cf * cg * weight
    return total


def gaussian_integrate(poly: SpinorPolynomial, slots=None) -> "SpinorPolynomial | Fraction":
    """Gaussian-moment integration over the given slots (all slots if None).

    Each integrated variable pair (slot, comp) must appear with equal barred
    and unbarred exponents, contributing exponent!.  Returns a Fraction when
    everything is integrated out, otherwise the remaining polynomial.
    """
    full = slots is None
    slot_set = None if full else set(slots)
    out: dict = {}
    for key, c in poly.terms.items():
        weight = Fraction(1)
        rest = []
        exps: dict = {}
        for (s, comp, bar), e in key:
            if full or s in slot_set:
                pair = (s, comp)
                cur = exps.get(pair, [0, 0])
                cur[bar] += e
                exps[pair] = cur
            else:
                rest.append(((s, comp, bar), e))
        ok = True
        for (s, comp), (unbarred, barred) in exps.items():
            if unbarred != barred:
                ok = False
                break
            weight *= factorial(unbarred)
        if not ok:
            continue
        rest_key = tuple(sorted(rest))
        out[rest_key] = out.get(rest_key, Fraction(0)) + c * weight
    result = SpinorPolynomial(out)
    if full or all(key == () for key in result.terms):
        return result.terms.get((), Fraction(0))
    return result


def apply_replacement_operator(poly: SpinorPolynomial, slot_i, slot_j) -> SpinorPolynomial:
    """The generator sum_A z_i^A d/dz_j^A acting on an unbarred polynomial."""
    out: dict = {}
    for key, c in poly.terms.items():
        for comp in (0, 1):
            var_j = (slot_j, comp, 0)
            exps = dict(key)
            e = exps.get(var_j, 0)
            if not e:
                continue
            new = dict(exps)
            if e == 1:
                del new[var_j]
            else:
                new[var_j] = e - 1
            var_i = (slot_i, comp, 0)
            new[var_i] = new.get(var_i, 0) + 1
            nk = tuple(sorted(new.items()))
            val = out.get(nk, Fraction(0)) + c * e
            if val:
                out[nk] = val
            else:
                out.pop(nk, None)
    return SpinorPolynomial(out)


def coherent_pairing_poly(bar_slot, plain_slot, two_j: int) -> SpinorPolynomial:
    """conj of the spin-j coherent pairing: (conj(w) . z)^{2j} / (2j)!.

    Pairing a barred slot w against a plain slot z; integrating w against a
    spin-j polynomial reproduces that polynomial with w replaced by z.
    """
    s = SpinorPolynomial.variable(bar_slot, 0, 1) * SpinorPolynomial.variable(plain_slot, 0, 0)
    s = s + SpinorPolynomial.variable(bar_slot, 1, 1) * SpinorPolynomial.variable(plain_slot, 1, 0)
    return (s**two_j) * Fraction(1, factorial(two_j))


def contract_graph_oracle(graph, budget: int = 40) -> Fraction:
    """Exact contraction of the per-vertex discrete states along the graph.

    Each edge owns one spinor; the source end uses it plainly, the target end
    uses the conjugate spinor.  Gaussian moments integrate everything out.
    This fixes every downstream sign convention.
    """
    graph.validate()
    degree = 2 * sum(graph.edge_two_j(e) for e in range(len(graph.edges)))
    if degree > budget:
        raise BudgetExceeded(
            f"contraction degree {degree} exceeds budget {budget}; "
            "raise the budget explicitly if this size is intended"
        )
    product = SpinorPolynomial.constant(1)
    for v in graph.vertices:
        block = graph.corner_map(v)
        pairs = []
        for (e1, e2), k in sorted(block.items()):
            spec1 = (e1, graph.edges[e1][1] == v)
            spec2 = (e2, graph.edges[e2][1] == v)
            pairs.append((spec1, spec2, k))
        product = product * pair_power_poly(pairs)
    result = gaussian_integrate(product)
    if isinstance(result, SpinorPolynomial):
        raise RuntimeError("contraction left free variables; graph labels inconsistent")
    return result


# --- generating-functional series oracle ------------------------------------
#
# Truncated power series in six tau variables and their conjugates; the
# squared-inverse Gaussian determinant generates every scalar product of the
# 4-valent discrete basis.

_PAIRS4 = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))


def _series_mul(a: dict, b: dict, degree: int) -> dict:
    out: dict = {}
    for ka, ca in a.items():
        da = sum(ka)
        for kb, cb in b.items():
            if da + sum(kb) > degree:
                continue
            key = tuple(x + y for x, y in zip(ka, kb))
            val = out.get(key, Fraction(0)) + ca * cb
            if val:
                out[key] = val
            else:
                out.pop(key, None)
    return out


class GramSeries:
    """Series of the inverse-square determinant; coefficients are Gram entries."""

    def __init__(self, degree: int, terms: dict):
        self.degree = degree
        self.terms = terms

    def coefficient(self, k_bra, k_ket) -> Fraction:
        """Coefficient of prod tau_bar^{k_bra} tau^{k_ket} (corner sextuples)."""
        key = tuple(k_ket) + tuple(k_bra)
        return self.terms.get(key, Fraction(0))


def genfun_gram_series(degree: int) -> GramSeries:
    """Expand the closed-form pair-correlation determinant to total degree `degree`.

    Variable order: six tau exponents then six conjugate-tau exponents, both
    in pair order (12, 13, 14, 23, 24, 34).
    """
    if degree > 16:
        raise BudgetExceeded(f"series degree {degree} exceeds the supported budget")
    zero = tuple([0] * 12)

    def unit(idx, bar):
        key = [0] * 12
        key[idx + (6 if bar else 0)] = 1
        return {tuple(key): Fraction(1)}

    # X = sum |tau_p|^2 - |R(tau)|^2, with R = t12 t34 - t13 t24 + t14 t23
    x: dict = {}
    for p in range(6):
        x = _series_add(x, _series_mul(unit(p, 0), unit(p, 1), degree))
    r_plain = _quadratic_r(bar=False, degree=degree)
    r_bar = _quadratic_r(bar=True, degree=degree)
    x = _series_add(x, _series_scale(_series_mul(r_plain, r_bar, degree), Fraction(-1)))

    total = {zero: Fraction(1)}
    power = {zero: Fraction(1)}
    m = 1
    while True:
        power = _series_mul(power, x, degree)
        if not power:
            break
        total = _series_add(total, _series_scale(power, Fraction(m + 1)))
        m += 1
        if 2 * m > degree:
            break
    return GramSeries(degree, total)


def _quadratic_r(bar: bool, degree: int) -> dict:
    off = 6 if bar else 0
    combos = (((0, 5), 1), ((1, 4), -1), ((2, 3), 1))  # (12)(34) - (13)(24) + (14)(23)
    out: dict = {}
    for (i, j), sign in combos:
        key = [0] * 12
        key[i + off] += 1
        key[j + off] += 1
        out[tuple(key)] = Fraction(sign)
    return out


def _series_add(a: dict, b: dict) -> dict:
    out = dict(a)
    for k, v in b.items():
        new = out.get(k, Fraction(0)) + v
        if new:
            out[k] = new
        else:
            out.pop(k, None)
    return out


def _series_scale(a: dict, s: Fraction) -> dict:
    return {k: v * s for k, v in a.items()}


def genfun_det_check(taus) -> float:
    """|det(1 + T conj(T)) - closed quartic form| for six complex pair variables."""
    import numpy as np

    t = np.zeros((4, 4), dtype=complex)
    for (i, j), val in zip(_PAIRS4, taus):
        t[i, j] = val
        t[j, i] = -val
    lhs = np.linalg.det(np.eye(4) + t @ t.conj())
    r = taus[0] * taus[5] - taus[1] * taus[4] + taus[2] * taus[3]
    rhs = (1 - sum(abs(v) ** 2 for v in taus) + abs(r) ** 2) ** 2
    return abs(lhs - rhs)
