"""The 4-valent discrete coherent basis: labels, norms, scalar products, relations.

A basis state of four spins j_1..j_4 is a product of holomorphic pair
invariants with non-negative integer exponents k_ij constrained by the
homogeneity conditions sum_{j != i} k_ij = 2 j_i.  The six exponents are
re-parameterized by two channel spins (S, T); the third channel spin U is
fixed by S + T + U = J with J the integer total spin.

Everything here works with twice-spins (arguments named two_*) so all
arithmetic stays in integers and Fractions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple

from .exact import factorial

__all__ = [
    "AdmissibilityError",
    "Corners",
    "KMatrix",
    "ChannelLabel",
    "corners_from_channels",
    "channels_from_corners",
    "admissible_channels",
    "intertwiner_dimension",
    "norm_squared",
    "r_coeff",
    "scalar_product",
    "GramMatrix",
    "gram_matrix",
    "projector_matrix",
    "fundamental_relation_vector",
    "plucker_power_coeffs",
    "power_relation_vector",
    "apply_j1j2",
    "apply_j1j3",
    "relabel_sign",
    "relabel_label",
]


class AdmissibilityError(ValueError):
    """Raised when channel labels violate a non-negativity inequality."""


class Corners(NamedTuple):
    """The six pair exponents of a 4-valent vertex, indexed by leg pairs."""

    k12: int
    k13: int
    k14: int
    k23: int
    k24: int
    k34: int

    PAIRS = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))

    def entry(self, i: int, j: int) -> int:
        i, j = min(i, j), max(i, j)
        return self[self.PAIRS.index((i, j))]

    def row_sums(self) -> tuple[int, int, int, int]:
        """Twice-spins 2j_i recovered from the homogeneity conditions."""
        return tuple(
            sum(v for (a, b), v in zip(self.PAIRS, self) if i in (a, b))
            for i in range(4)
        )

    def total(self) -> int:
        """Integer total spin J = sum_{i<j} k_ij."""
        return sum(self)


@dataclass(frozen=True)
class KMatrix:
    """Symmetric non-negative integer pair exponents for an n-valent vertex."""

    n: int
    entries: tuple[tuple[int, ...], ...]  # upper triangle, row i holds k_ij for j>i

    @classmethod
    def from_dict(cls, n: int, data: dict[tuple[int, int], int]) -> "KMatrix":
        rows = []
        for i in range(n):
            rows.append(tuple(data.get((min(i, j), max(i, j)), 0) for j in range(i + 1, n)))
        mat = cls(n, tuple(rows))
        if any(v < 0 for row in rows for v in row):
            raise ValueError("negative pair exponent")
        return mat

    def entry(self, i: int, j: int) -> int:
        if i == j:
            return 0
        i, j = min(i, j), max(i, j)
        return self.entries[i][j - i - 1]

    def row_sums(self) -> tuple[int, ...]:
        return tuple(sum(self.entry(i, j) for j in range(self.n) if j != i) for i in range(self.n))

    def total(self) -> int:
        return sum(sum(row) for row in self.entries)


@dataclass(frozen=True)
class ChannelLabel:
    """Four twice-spins plus the (S, T) channel twice-spins; U is derived."""

    two_js: tuple[int, int, int, int]
    two_s: int
    two_t: int

    def __post_init__(self):
        object.__setattr__(self, "two_js", tuple(self.two_js))
        corners_from_channels(self.two_js, self.two_s, self.two_t)  # validates

    @property
    def two_u(self) -> int:
        return sum(self.two_js) - self.two_s - self.two_t

    @property
    def total(self) -> int:
        """Integer total spin J."""
        return sum(self.two_js) // 2

    def corners(self) -> Corners:
        return corners_from_channels(self.two_js, self.two_s, self.two_t)


def _half(value: int, what: str) -> int:
    if value % 2:
        raise AdmissibilityError(f"{what} = {value} is odd; spins have inconsistent parity")
    return value // 2


def corners_from_channels(two_js, two_s: int, two_t: int) -> Corners:
    """Map (j_i, S, T) to the six pair exponents; raises naming the violated bound."""
    a1, a2, a3, a4 = two_js
    if any(a < 0 for a in two_js) or two_s < 0 or two_t < 0:
        raise AdmissibilityError("negative twice-spin")
    if sum(two_js) % 2:
        raise AdmissibilityError(f"total twice-spin {sum(two_js)} is odd")
    two_u = a1 + a2 + a3 + a4 - two_s - two_t
    bounds = [
        ("k12", a1 + a2 - two_s, "S > j1+j2"),
        ("k34", a3 + a4 - two_s, "S > j3+j4"),
        ("k13", a1 + a3 - two_t, "T > j1+j3"),
        ("k24", a2 + a4 - two_t, "T > j2+j4"),
        ("k14", a1 + a4 - two_u, "U > j1+j4 (S+T too small)"),
        ("k23", a2 + a3 - two_u, "U > j2+j3 (S+T too small)"),
    ]
    vals = {}
    for name, doubled, reason in bounds:
        if doubled < 0:
            raise AdmissibilityError(f"{name} < 0: {reason}")
        vals[name] = _half(doubled, name + " doubled value")
    return Corners(vals["k12"], vals["k13"], vals["k14"], vals["k23"], vals["k24"], vals["k34"])


def channels_from_corners(k: Corners, expected_two_js=None) -> ChannelLabel:
    """Invert corners_from_channels; round-trips exactly.

    The twice-spins are the row sums, so any non-negative sextuple is
    self-consistent; `expected_two_js` adds a defensive cross-check.
    """
    if any(v < 0 for v in k):
        raise AdmissibilityError("negative pair exponent")
    two_js = k.row_sums()
    if expected_two_js is not None and tuple(expected_two_js) != two_js:
        raise AdmissibilityError(
            f"row sums {two_js} disagree with expected twice-spins {tuple(expected_two_js)}"
        )
    two_s = two_js[0] + two_js[1] - 2 * k.k12
    two_t = two_js[0] + two_js[2] - 2 * k.k13
    return ChannelLabel(two_js, two_s, two_t)


def admissible_channels(two_js) -> tuple[tuple[int, int], ...]:
    """All (two_S, two_T) with every pair exponent non-negative."""
    return _admissible_channels(tuple(two_js))


@lru_cache(maxsize=None)
def _admissible_channels(two_js) -> tuple[tuple[int, int], ...]:
    a1, a2, a3, a4 = two_js
    if sum(two_js) % 2:
        raise AdmissibilityError(f"total twice-spin {sum(two_js)} is odd")
    out = []
    s_lo, s_hi = max(abs(a1 - a2), abs(a3 - a4)), min(a1 + a2, a3 + a4)
    t_lo, t_hi = max(abs(a1 - a3), abs(a2 - a4)), min(a1 + a3, a2 + a4)
    for two_s in range(s_lo, s_hi + 1):
        if (a1 + a2 - two_s) % 2:
            continue
        for two_t in range(t_lo, t_hi + 1):
            if (a1 + a3 - two_t) % 2:
                continue
            try:
                corners_from_channels(two_js, two_s, two_t)
            except AdmissibilityError:
                continue
            out.append((two_s, two_t))
    return tuple(out)


def intertwiner_dimension(two_js) -> int:
    """Dimension of the 4-valent invariant subspace (number of S channel values)."""
    a1, a2, a3, a4 = two_js
    if sum(two_js) % 2:
        return 0
    lo = max(abs(a1 - a2), abs(a3 - a4))
    hi = min(a1 + a2, a3 + a4)
    if hi < lo or (a1 + a2 - lo) % 2:
        return 0
    return (hi - lo) // 2 + 1


def norm_squared(label: ChannelLabel) -> Fraction:
    """Canonical squared norm (J+1)! / prod k_ij! of a basis state."""
    k = label.corners()
    denom = 1
    for v in k:
        denom *= factorial(v)
    return Fraction(factorial(label.total + 1), denom)


def _sign(parity: int) -> int:
    return -1 if parity % 2 else 1


def r_coeff(two_s: int, two_t: int, two_S: int, two_T: int, n: int) -> int:
    """Expansion coefficient of the n-th power of the quadratic pair relation.

    Equals the signed multinomial (-1)^b n!/(a! b! c!) with
    a = (s-S)/2 + n, b = (t-T)/2 + n, c = n - a - b; zero whenever any of
    a, b, c is negative.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    if (two_s - two_S) % 2 or (two_t - two_T) % 2:
        return 0
    a = (two_s - two_S) // 2 + n
    b = (two_t - two_T) // 2 + n
    c = n - a - b
    if a < 0 or b < 0 or c < 0:
        return 0
    return _sign(b) * factorial(n) // (factorial(a) * factorial(b) * factorial(c))


def _corner_factorial_product(k: Corners) -> int:
    p = 1
    for v in k:
        p *= factorial(v)
    return p


def scalar_product(a: ChannelLabel, b: ChannelLabel) -> Fraction:
    """Exact scalar product of two basis states with the same external spins.

    Triple sum over the shift depth N and the admissible labels of the
    shifted system; the N = 0 term is the diagonal norm contribution.  Terms
    with any negative factorial argument vanish (handled inside r_coeff).
    """
    if a.two_js != b.two_js:
        raise ValueError("scalar product needs matching external spins")
    two_js = a.two_js
    big_j = a.total
    total = Fraction(0)
    for n in range(0, min(two_js) + 1):
        shifted = tuple(v - n for v in two_js)
        lead = Fraction(_sign(n) * factorial(big_j - n + 1), factorial(n))
        for two_s, two_t in admissible_channels(shifted):
            r1 = r_coeff(two_s, two_t, a.two_s, a.two_t, n)
            if r1 == 0:
                continue
            r2 = r_coeff(two_s, two_t, b.two_s, b.two_t, n)
            if r2 == 0:
                continue
            k_shift = corners_from_channels(shifted, two_s, two_t)
            total += lead * r1 * r2 / _corner_factorial_product(k_shift)
    return total


@dataclass(frozen=True)
class GramMatrix:
    """All pairwise scalar products over the admissible channel labels."""

    two_js: tuple[int, int, int, int]
    labels: tuple[tuple[int, int], ...]
    entries: tuple[tuple[Fraction, ...], ...]

    def entry(self, lab_a: tuple[int, int], lab_b: tuple[int, int]) -> Fraction:
        return self.entries[self.labels.index(lab_a)][self.labels.index(lab_b)]

    def apply(self, vec: dict) -> dict:
        """Matrix action on a coefficient vector keyed by channel labels."""
        out = {}
        for i, la in enumerate(self.labels):
            acc = Fraction(0)
            for j, lb in enumerate(self.labels):
                c = vec.get(lb)
                if c:
                    acc += self.entries[i][j] * c
            out[la] = acc
        return out

    def bilinear(self, left: dict, right: dict) -> Fraction:
        """<left|right> for coefficient vectors over channel labels."""
        acc = Fraction(0)
        for i, la in enumerate(self.labels):
            ca = left.get(la)
            if not ca:
                continue
            for j, lb in enumerate(self.labels):
                cb = right.get(lb)
                if cb:
                    acc += ca * self.entries[i][j] * cb
        return acc


def gram_matrix(two_js) -> GramMatrix:
    return _gram_matrix(tuple(two_js))


@lru_cache(maxsize=None)
def _gram_matrix(two_js) -> GramMatrix:
    labels = admissible_channels(two_js)
    states = [ChannelLabel(two_js, s, t) for s, t in labels]
    rows = []
    for i, x in enumerate(states):
        row = []
        for j, y in enumerate(states):
            row.append(rows[j][i] if j < i else scalar_product(x, y))
        rows.append(row)
    return GramMatrix(two_js, labels, tuple(tuple(r) for r in rows))


def projector_matrix(two_js) -> list[list[Fraction]]:
    """P[x][y] = <x|y>/||y||^2; idempotent because of the identity resolution."""
    g = gram_matrix(tuple(two_js))
    norms = [norm_squared(ChannelLabel(g.two_js, s, t)) for s, t in g.labels]
    return [[g.entries[i][j] / norms[j] for j in range(len(g.labels))] for i in range(len(g.labels))]


def fundamental_relation_vector(label: ChannelLabel) -> dict[tuple[int, int], int]:
    """Coefficients of the three-term linear relation anchored at (S, T).

    Keys may include labels outside the admissible set; those terms stand for
    zero states and are recorded for completeness.
    """
    k = label.corners()
    s, t = label.two_s, label.two_t
    return {
        (s - 2, t): (k.k12 + 1) * (k.k34 + 1),
        (s, t - 2): -(k.k13 + 1) * (k.k24 + 1),
        (s, t): k.k14 * k.k23,
    }


def plucker_power_coeffs(two_s: int, two_t: int, n: int, two_js=None) -> dict[tuple[int, int], int]:
    """All coefficients of the depth-n power relation seeded at (s, t).

    The support is S = s + n - a, T = t + n - b over a, b >= 0, a + b <= n
    (twice-spin steps of 2).  Independent of the external spins; `two_js` is
    accepted for symmetry with the state-space version.
    """
    if n < 1:
        raise ValueError("power relations start at n = 1")
    out = {}
    for a in range(n + 1):
        for b in range(n + 1 - a):
            two_S = two_s + 2 * (n - a)
            two_T = two_t + 2 * (n - b)
            out[(two_S, two_T)] = r_coeff(two_s, two_t, two_S, two_T, n)
    return out


def power_relation_vector(two_js, two_s: int, two_t: int, n: int) -> dict[tuple[int, int], int]:
    """State-space coefficients of the depth-n relation: R * prod k_ij!(j, S, T).

    The weighted combination of basis states vanishes identically; entries on
    labels that are inadmissible at `two_js` correspond to zero states.
    """
    out = {}
    for (two_S, two_T), r in plucker_power_coeffs(two_s, two_t, n).items():
        if r == 0:
            continue
        try:
            k = corners_from_channels(two_js, two_S, two_T)
        except AdmissibilityError:
            out[(two_S, two_T)] = 0
            continue
        out[(two_S, two_T)] = r * _corner_factorial_product(k)
    return out


def apply_j1j2(label: ChannelLabel) -> dict[tuple[int, int], Fraction]:
    """Action of the invariant operator coupling legs 1 and 2.

    Three-term output leaving S unchanged.  Output keys can fall outside the
    admissible range; such labels are zero states.
    """
    k = label.corners()
    two_js = label.two_js
    s, t = label.two_s, label.two_t
    j1 = Fraction(two_js[0], 2)
    j2 = Fraction(two_js[1], 2)
    spin_s = Fraction(s, 2)
    diag = (
        spin_s * (spin_s + 1)
        - j1 * (j1 + 1)
        - j2 * (j2 + 1)
        - k.k13 * k.k24
        - k.k14 * k.k23
    )
    return {
        (s, t): diag / 2,
        (s, t - 2): Fraction((k.k13 + 1) * (k.k24 + 1), 2),
        (s, t + 2): Fraction((k.k14 + 1) * (k.k23 + 1), 2),
    }


def apply_j1j3(label: ChannelLabel) -> dict[tuple[int, int], Fraction]:
    """Action of the invariant operator coupling legs 1 and 3; leaves T unchanged."""
    k = label.corners()
    two_js = label.two_js
    s, t = label.two_s, label.two_t
    j1 = Fraction(two_js[0], 2)
    j3 = Fraction(two_js[2], 2)
    spin_t = Fraction(t, 2)
    diag = (
        spin_t * (spin_t + 1)
        - j1 * (j1 + 1)
        - j3 * (j3 + 1)
        - k.k12 * k.k34
        - k.k14 * k.k23
    )
    return {
        (s, t): diag / 2,
        (s - 2, t): Fraction(-(k.k12 + 1) * (k.k34 + 1), 2),
        (s + 2, t): Fraction(-(k.k14 + 1) * (k.k23 + 1), 2),
    }


# --- leg relabeling ---------------------------------------------------------
#
# A permutation of the four legs maps a basis state to a basis state of the
# permuted spins up to a sign: each pair invariant whose legs land in
# descending position order flips sign, contributing (-1)^(k_ij).

def relabel_sign(label: ChannelLabel, perm) -> int:
    k = label.corners()
    parity = 0
    for (i, j) in Corners.PAIRS:
        if perm[i] > perm[j]:
            parity += k.entry(i, j)
    return _sign(parity)


def relabel_label(label: ChannelLabel, perm) -> ChannelLabel:
    """The image label under a leg permutation (new slot p holds old leg perm^-1(p))."""
    k = label.corners()
    data = {}
    for (i, j) in Corners.PAIRS:
        a, b = perm[i], perm[j]
        data[(min(a, b), max(a, b))] = k.entry(i, j)
    new_k = Corners(
        data[(0, 1)], data[(0, 2)], data[(0, 3)], data[(1, 2)], data[(1, 3)], data[(2, 3)]
    )
    return channels_from_corners(new_k)
