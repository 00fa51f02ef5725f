"""Floating-point geometry: framed tetrahedra, closure solving, twisted actions.

A framed tetrahedron is four areas, four unit outward normals satisfying
closure, and a unit frame vector in each face.  Each face corresponds to a
spinor fixed up to sign; the closure equations tie the spinor brackets to the
corner exponents of the discrete basis.  Twisted 4-simplex data glues five
framed tetrahedra through a conjugation pairing of shared-face spinors.

All angles are radians; branch choices: dihedral angles in [0, pi], frame
angles in (-pi, pi].
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import least_squares

__all__ = [
    "GeometryError",
    "PAULI",
    "conj_spinor",
    "bracket",
    "herm",
    "FramedTetrahedron",
    "framed_tet_from_spinors",
    "spinors_from_framed_tet",
    "random_framed_tetrahedron",
    "ClosureSolution",
    "solve_closure",
    "geometry_angles",
    "spherical_cosine_residuals",
    "three_term_residuals",
    "TwistedSimplexGeometry",
    "TwistedAction",
    "twisted_action",
    "dihedral_4d_check",
    "shape_matching_check",
    "branch_margin",
    "gauge_rotate",
    "regular_simplex_geometry",
    "irregular_simplex_geometry",
    "random_twisted_geometry",
    "perturb_geometry",
    "framed_tet_to_json",
    "framed_tet_from_json",
    "twisted_to_json",
    "twisted_from_json",
]

TETRA_VERTICES = ("1", "2", "3", "4", "5")

PAULI = np.array(
    [
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=complex,
)


class GeometryError(ValueError):
    """Raised when geometric constraints are violated beyond tolerance."""


def conj_spinor(z: np.ndarray) -> np.ndarray:
    """The conjugate spinor |z] = (-conj(beta), conj(alpha))."""
    return np.array([-np.conj(z[1]), np.conj(z[0])])


def bracket(z: np.ndarray, w: np.ndarray) -> complex:
    """Holomorphic invariant [z|w> = alpha_z beta_w - alpha_w beta_z."""
    return z[0] * w[1] - w[0] * z[1]


def herm(z: np.ndarray, w: np.ndarray) -> complex:
    """Hermitian product <z|w>."""
    return np.conj(z[0]) * w[0] + np.conj(z[1]) * w[1]


def _vec_of_matrix(m: np.ndarray) -> np.ndarray:
    """Coefficients of a 2x2 matrix along the Pauli basis (complex 3-vector)."""
    return np.array([0.5 * np.trace(PAULI[k] @ m) for k in range(3)])


def _spinor_normal_frame(z: np.ndarray):
    """Area, unit normal and complex frame vector W = F + i N x F of one spinor."""
    area = float(np.real(herm(z, z)))
    if area < 1e-14:
        return 0.0, np.zeros(3), np.zeros(3, dtype=complex)
    zc = conj_spinor(z)
    h = np.outer(z, np.conj(z)) - np.outer(zc, np.conj(zc))
    normal = np.real(_vec_of_matrix(h)) / area
    m = np.outer(z, np.array([-z[1], z[0]]))
    w = _vec_of_matrix(m) * (-2j / area)
    return area, normal, w


@dataclass
class FramedTetrahedron:
    """Four areas, outward unit normals, and in-face unit frame vectors."""

    areas: np.ndarray
    normals: np.ndarray
    frames: np.ndarray

    def closure_residual(self) -> float:
        return float(np.linalg.norm(np.einsum("i,ij->j", self.areas, self.normals)))

    def validate(self, tol: float = 1e-10) -> None:
        if self.closure_residual() > tol * max(1.0, float(np.sum(self.areas))):
            raise GeometryError(f"closure violated: residual {self.closure_residual():.3e}")
        for i in range(4):
            if self.areas[i] <= 0:
                continue
            if abs(np.linalg.norm(self.normals[i]) - 1) > tol * 10:
                raise GeometryError(f"normal {i} not a unit vector")
            if abs(np.linalg.norm(self.frames[i]) - 1) > tol * 10:
                raise GeometryError(f"frame {i} not a unit vector")
            if abs(float(self.normals[i] @ self.frames[i])) > 1e-8:
                raise GeometryError(f"frame {i} not tangent to face {i}")


def framed_tet_from_spinors(zs, tol: float = 1e-8) -> FramedTetrahedron:
    """Extract areas, normals, frames; requires the closure constraint."""
    zs = [np.asarray(z, dtype=complex) for z in zs]
    total = sum(np.outer(z, np.conj(z)) for z in zs)
    area_sum = float(np.real(np.trace(total)))
    dev = total - (area_sum / 2) * np.eye(2)
    if np.linalg.norm(dev) > tol * max(1.0, area_sum):
        raise GeometryError(
            f"spinors do not close: residual {np.linalg.norm(dev):.3e}"
        )
    areas, normals, frames = [], [], []
    for z in zs:
        a, n, w = _spinor_normal_frame(z)
        areas.append(a)
        normals.append(n)
        frames.append(np.real(w) if a > 0 else np.zeros(3))
    return FramedTetrahedron(np.array(areas), np.array(normals), np.array(frames))


def spinors_from_framed_tet(tet: FramedTetrahedron, tol: float = 1e-10):
    """Reconstruct the four spinors (each fixed up to an overall sign).

    The rank-one projector determines the spinor up to phase; matching the
    frame vector fixes the phase up to sign, canonicalized by making the
    first significant component have positive real part.
    """
    tet.validate(tol=1e-8)
    out = []
    for i in range(4):
        a = float(tet.areas[i])
        if a <= 1e-14:
            out.append(np.zeros(2, dtype=complex))
            continue
        n, f = tet.normals[i], tet.frames[i]
        h = (a / 2) * (np.eye(2) + sum(n[k] * PAULI[k] for k in range(3)))
        vals, vecs = np.linalg.eigh(h)
        z0 = vecs[:, np.argmax(vals)] * math.sqrt(a)
        _, _, w0 = _spinor_normal_frame(z0)
        target = f + 1j * np.cross(n, f)
        num = complex(np.vdot(w0, target))  # e^{2 i phi} estimate
        if abs(num) < tol:
            raise GeometryError(f"frame of face {i} inconsistent with its normal")
        phi = np.angle(num / abs(num)) / 2
        z = z0 * np.exp(1j * phi)
        # resolve the leftover sign deterministically
        lead = z[0] if abs(z[0]) > 1e-9 else z[1]
        if lead.real < 0 or (abs(lead.real) < 1e-12 and lead.imag < 0):
            z = -z
        out.append(z)
    return out


def random_framed_tetrahedron(rng) -> FramedTetrahedron:
    """Random valid framed tetrahedron (closure by construction)."""
    while True:
        areas3 = rng.uniform(0.5, 2.0, size=3)
        normals3 = rng.normal(size=(3, 3))
        normals3 /= np.linalg.norm(normals3, axis=1)[:, None]
        vec = -np.einsum("i,ij->j", areas3, normals3)
        a4 = np.linalg.norm(vec)
        if a4 < 0.3:
            continue
        areas = np.append(areas3, a4)
        normals = np.vstack([normals3, vec / a4])
        # reject nearly coincident normals; angle extraction degenerates there
        ok = all(
            abs(float(normals[i] @ normals[j])) < 0.99
            for i in range(4)
            for j in range(i + 1, 4)
        )
        if not ok:
            continue
        frames = []
        for n in normals:
            probe = rng.normal(size=3)
            f = probe - (probe @ n) * n
            frames.append(f / np.linalg.norm(f))
        return FramedTetrahedron(areas, normals, np.array(frames))


# -- closure solving ------------------------------------------------------------


@dataclass
class ClosureSolution:
    spinors: list
    residual: float
    geometric: bool
    corners: tuple
    khat: np.ndarray
    khat_error: float = 0.0

    def two_js(self) -> tuple:
        k = _corner_matrix(self.corners)
        return tuple(int(k[i].sum()) for i in range(4))


def _corner_matrix(corners) -> np.ndarray:
    k12, k13, k14, k23, k24, k34 = corners
    return np.array(
        [
            [0, k12, k13, k14],
            [k12, 0, k23, k24],
            [k13, k23, 0, k34],
            [k14, k24, k34, 0],
        ],
        dtype=float,
    )


def _closure_residual_vector(x: np.ndarray, k: np.ndarray, active) -> np.ndarray:
    packed = x.view(complex).reshape(len(active), 2)
    zs = {i: packed[n] for n, i in enumerate(active)}
    res = []
    for i in active:
        lhs = np.zeros(2, dtype=complex)
        for j in active:
            if j == i or k[i, j] == 0:
                continue
            br = bracket(zs[j], zs[i])
            if abs(br) < 1e-12:
                br = 1e-12
            lhs += (k[i, j] / br) * np.array([-zs[j][1], zs[j][0]])
        rhs = np.conj(zs[i])
        res.extend([(lhs - rhs).real, (lhs - rhs).imag])
    return np.concatenate(res) if res else np.zeros(1)


def _gram_seed(k: np.ndarray, rng) -> np.ndarray:
    """Seed spinors from the closure-implied normal Gram matrix."""
    two_j = k.sum(axis=1)
    total = k.sum() / 2
    active = [i for i in range(4) if two_j[i] > 0]
    g = np.eye(len(active))
    for a, i in enumerate(active):
        for b, j in enumerate(active):
            if i != j:
                g[a, b] = 1 - 2 * total * k[i, j] / (two_j[i] * two_j[j])
    vals, vecs = np.linalg.eigh(g)
    vals = np.clip(vals, 0, None)
    top = np.argsort(vals)[::-1][: min(3, len(active))]
    coords = vecs[:, top] * np.sqrt(vals[top])
    if coords.shape[1] < 3:
        coords = np.pad(coords, ((0, 0), (0, 3 - coords.shape[1])))
    zs = np.zeros((len(active), 2), dtype=complex)
    for a, i in enumerate(active):
        n = coords[a]
        norm = np.linalg.norm(n)
        n = n / norm if norm > 1e-12 else np.array([0.0, 0.0, 1.0])
        h = (two_j[i] / 2) * (np.eye(2) + sum(n[kk] * PAULI[kk] for kk in range(3)))
        evals, evecs = np.linalg.eigh(h)
        z0 = evecs[:, np.argmax(evals)] * math.sqrt(two_j[i])
        zs[a] = z0 * np.exp(1j * rng.uniform(-math.pi, math.pi))
    return zs.view(float).ravel()


def solve_closure(corners, seed: int = 0, restarts: int = 32, tol: float = 1e-10) -> ClosureSolution:
    """Solve the stationary closure equations for the given corner exponents.

    Least squares over the raw spinor components with a geometry-informed
    seed plus random restarts.  Non-geometric inputs return the best residual
    found, flagged non-geometric.
    """
    corners = tuple(int(v) for v in corners)
    if any(v < 0 for v in corners):
        raise ValueError("corner exponents must be non-negative")
    k = _corner_matrix(corners)
    two_j = k.sum(axis=1)
    total = k.sum() / 2
    active = [i for i in range(4) if two_j[i] > 0]
    if not active:
        return ClosureSolution([np.zeros(2, complex)] * 4, 0.0, True, corners, np.zeros((4, 4)), 0.0)
    rng = np.random.default_rng(seed)

    best = None
    for attempt in range(restarts):
        if attempt == 0:
            x0 = _gram_seed(k, rng)
        else:
            zs = rng.normal(size=(len(active), 2)) + 1j * rng.normal(size=(len(active), 2))
            for n, i in enumerate(active):
                zs[n] *= math.sqrt(two_j[i] / np.real(herm(zs[n], zs[n])))
            x0 = np.ascontiguousarray(zs).view(float).ravel()
        sol = least_squares(
            _closure_residual_vector,
            x0,
            args=(k, active),
            method="lm",
            xtol=1e-15,
            ftol=1e-15,
            gtol=1e-15,
            diff_step=1e-6,
            max_nfev=4000,
        )
        res = float(np.max(np.abs(_closure_residual_vector(sol.x, k, active))))
        if best is None or res < best[0]:
            best = (res, sol.x)
        if res < tol:
            break
    res, x = best
    packed = x.view(complex).reshape(len(active), 2)
    zs = [np.zeros(2, dtype=complex) for _ in range(4)]
    for n, i in enumerate(active):
        zs[i] = packed[n].copy()
    khat = np.zeros((4, 4))
    for i in range(4):
        for j in range(4):
            if i != j and total > 0:
                khat[i, j] = abs(bracket(zs[j], zs[i])) ** 2 / total
    khat_error = float(np.max(np.abs(khat - k)))
    # a geometric solution both solves the stationary equations and
    # reproduces its corner exponents from the spinor brackets
    geometric = res < tol and khat_error < 1e-6
    return ClosureSolution(zs, res, geometric, corners, khat, khat_error)


# -- angle extraction ------------------------------------------------------------


def _wrap(angle: float) -> float:
    """Wrap to (-pi, pi]."""
    a = math.fmod(angle + math.pi, 2 * math.pi)
    if a <= 0:
        a += 2 * math.pi
    return a - math.pi


def geometry_angles(zs, tol: float = 1e-8) -> dict:
    """Dihedral and frame angles of a closed spinor quadruple.

    Returns a dict with areas, theta[(i,j)] in [0, pi], alpha[(i,j)] (the
    in-face angle of edge (ij) from face i's frame vector), eps[(i,j)] signs,
    and the maximum modulus residual of the phase reconstruction.
    """
    tet = framed_tet_from_spinors(zs, tol=tol)
    zs = [np.asarray(z, complex) for z in zs]
    areas = tet.areas
    theta = {}
    alpha = {}
    phase_residual = 0.0
    # One shared edge direction per unordered pair (the canonical orientation
    # low index -> high index); both in-face angles are measured against it.
    # The two half-angle product formulas then fix the 2 pi representative of
    # one angle per pair.
    for i in range(4):
        for j in range(i + 1, 4):
            edge = np.cross(tet.normals[i], tet.normals[j])
            if np.linalg.norm(edge) < 1e-12:
                raise GeometryError(f"normals {i}, {j} coincide; frame angle undefined")
            for a, b in ((i, j), (j, i)):
                n_a, f_a = tet.normals[a], tet.frames[a]
                alpha[(a, b)] = math.atan2(
                    float(edge @ np.cross(n_a, f_a)), float(edge @ f_a)
                )
            hol = bracket(zs[i], zs[j])
            mix = herm(zs[j], zs[i])  # [z_i|z_j]
            scale = math.sqrt(areas[i] * areas[j])
            theta[(i, j)] = 2 * math.atan2(abs(hol), abs(mix))
            expected = (
                scale
                * math.sin(theta[(i, j)] / 2)
                * np.exp(1j * (alpha[(i, j)] + alpha[(j, i)]) / 2)
            )
            if abs(expected) > 10 * tol and (hol / expected).real < 0:
                alpha[(j, i)] += 2 * math.pi
                expected = -expected
            phase_residual = max(phase_residual, abs(hol - expected))
            expected_mix = (
                scale
                * math.cos(theta[(i, j)] / 2)
                * np.exp(1j * (alpha[(i, j)] - alpha[(j, i)]) / 2)
            )
            phase_residual = max(phase_residual, abs(mix - expected_mix))
    return {
        "areas": areas,
        "theta": theta,
        "alpha": alpha,
        "phase_residual": phase_residual,
    }


def spherical_cosine_residuals(angles: dict) -> list:
    """Residuals of the spherical law of cosines over all ordered triples.

    With the canonical shared-edge orientation the in-face angle differences
    obey cos(alpha_ij - alpha_ik) = or_ij or_ik (cos th_jk - cos th_ij cos
    th_ik)/(sin th_ij sin th_ik), or_xy = +-1 by index order.
    """
    theta = angles["theta"]
    alpha = angles["alpha"]

    def th(i, j):
        return theta[(min(i, j), max(i, j))]

    def orient(i, j):
        return 1 if i < j else -1

    out = []
    for i in range(4):
        for j in range(4):
            for k in range(4):
                if len({i, j, k}) < 3:
                    continue
                lhs = math.cos(alpha[(i, j)] - alpha[(i, k)])
                denom = math.sin(th(i, j)) * math.sin(th(i, k))
                if abs(denom) < 1e-12:
                    continue
                rhs = (math.cos(th(j, k)) - math.cos(th(i, j)) * math.cos(th(i, k))) / denom
                out.append(abs(lhs - orient(i, j) * orient(i, k) * rhs))
    return out


def three_term_residuals(zs, angles: dict) -> list:
    """Residuals of both spinor three-term (Fierz) identities.

    The pair products are reconstructed from the extracted angle data and
    checked against the completeness identity of each middle spinor by direct
    complex evaluation; a faithful angle extraction makes both vanish.
    """
    theta, alpha, areas = angles["theta"], angles["alpha"], angles["areas"]

    def hol(x, y):
        # [z_x|z_y> from angles; antisymmetric under order flip
        i, j = min(x, y), max(x, y)
        base = math.sqrt(areas[i] * areas[j]) * math.sin(theta[(i, j)] / 2)
        val = base * np.exp(1j * (alpha[(i, j)] + alpha[(j, i)]) / 2)
        return val if x < y else -val

    def mix(x, y):
        # [z_x|z_y] from angles; conjugate-symmetric under order flip
        i, j = min(x, y), max(x, y)
        base = math.sqrt(areas[i] * areas[j]) * math.cos(theta[(i, j)] / 2)
        val = base * np.exp(1j * (alpha[(i, j)] - alpha[(j, i)]) / 2)
        return val if x < y else np.conj(val)

    out = []
    for i in range(4):
        for j in range(4):
            for k in range(4):
                if len({i, j, k}) < 3:
                    continue
                # <z_i|z_j><z_j|z_k> + <z_i|z_j][z_j|z_k> = A_j <z_i|z_k>
                lhs1 = mix(j, i) * mix(k, j) + np.conj(hol(j, i)) * hol(j, k)
                out.append(abs(lhs1 - areas[j] * mix(k, i)))
                # <z_i|z_j><z_j|z_k] + <z_i|z_j][z_j|z_k] = A_j <z_i|z_k]
                lhs2 = mix(j, i) * np.conj(hol(k, j)) + np.conj(hol(j, i)) * mix(j, k)
                out.append(abs(lhs2 - areas[j] * np.conj(hol(k, i))))
    return out


# -- twisted 4-simplex geometry ----------------------------------------------------


@dataclass
class TwistedSimplexGeometry:
    """Twenty spinors w[(a, b)] (tetrahedron a, face shared with b).

    Validity: the conjugation pairing w[(b, a)] = eps_ab * conj_spinor(w[(a, b)])
    with eps_ab = +1 for a < b, and per-tetrahedron closure.
    """

    spinors: dict

    def pairs(self):
        return [(a, b) for a in TETRA_VERTICES for b in TETRA_VERTICES if a != b]

    def reality_residual(self) -> float:
        worst = 0.0
        for a in TETRA_VERTICES:
            for b in TETRA_VERTICES:
                if a < b:
                    target = conj_spinor(self.spinors[(a, b)])
                    worst = max(worst, float(np.linalg.norm(self.spinors[(b, a)] - target)))
        return worst

    def tetra_spinors(self, a: str) -> list:
        return [self.spinors[(a, b)] for b in TETRA_VERTICES if b != a]

    def closure_residual(self) -> float:
        worst = 0.0
        for a in TETRA_VERTICES:
            zs = self.tetra_spinors(a)
            total = sum(np.outer(z, np.conj(z)) for z in zs)
            area_sum = float(np.real(np.trace(total)))
            dev = total - (area_sum / 2) * np.eye(2)
            worst = max(worst, float(np.linalg.norm(dev)) / max(1.0, area_sum))
        return worst

    def validate(self, tol: float = 1e-8) -> None:
        r = self.reality_residual()
        if r > tol:
            raise GeometryError(f"gluing (reality) violated: residual {r:.3e}")
        c = self.closure_residual()
        if c > tol:
            raise GeometryError(f"per-tetrahedron closure violated: residual {c:.3e}")

    def area(self, a: str, b: str) -> float:
        return float(np.real(herm(self.spinors[(a, b)], self.spinors[(a, b)])))

    def tetra_total(self, a: str) -> float:
        return sum(self.area(a, b) for b in TETRA_VERTICES if b != a) / 2

    def corner_estimates(self, a: str) -> dict:
        big_j = self.tetra_total(a)
        out = {}
        others = [b for b in TETRA_VERTICES if b != a]
        for x in range(4):
            for y in range(x + 1, 4):
                i, j = others[x], others[y]
                out[(i, j)] = abs(bracket(self.spinors[(a, i)], self.spinors[(a, j)])) ** 2 / big_j
        return out

    def tetra_angles(self, a: str, tol: float = 1e-7) -> dict:
        """Angle data of tetrahedron a with faces indexed by partner names."""
        others = [b for b in TETRA_VERTICES if b != a]
        raw = geometry_angles(self.tetra_spinors(a), tol=tol)
        theta = {
            (others[i], others[j]): v for (i, j), v in raw["theta"].items()
        }
        alpha = {
            (others[i], others[j]): v for (i, j), v in raw["alpha"].items()
        }
        return {
            "areas": {others[i]: raw["areas"][i] for i in range(4)},
            "theta": theta,
            "alpha": alpha,
            "phase_residual": raw["phase_residual"],
        }


@dataclass
class TwistedAction:
    value: float
    raw_value: float
    xi: dict  # (a, b, i) -> twist angle of face (ab) seen from i
    xi_avg: dict  # (a, b) -> averaged twist angle
    alpha_edge: dict  # (a, (i, j)) -> averaged in-tetra edge angle
    khat: dict  # (a, (i, j)) -> corner estimates
    areas: dict  # (a, b) -> face areas


def _all_tetra_angles(g: TwistedSimplexGeometry, tol: float = 1e-7) -> dict:
    return {a: g.tetra_angles(a, tol=tol) for a in TETRA_VERTICES}


def _alpha_face_first(ang: dict, a: str, face: str, toward: str) -> float:
    """In-face frame angle with the edge oriented face-first.

    The stored angles use the name-sorted edge direction; gluing identities
    (shape matching, twist angles, the 4d dihedral relation) hold in the
    face-first orientation, which differs by pi when face > toward.
    """
    return ang[a]["alpha"][(face, toward)] + (math.pi if face > toward else 0.0)


def twisted_action(g: TwistedSimplexGeometry, tol: float = 1e-8) -> TwistedAction:
    """The twisted-geometry action and its raw corner form.

    value = sum_{i<j} j_ij xi^{ij} + sum_{a; i<j} k^a_ij alpha^a_ij with the
    averaged angle combinations; raw_value is the plain half corner sum.  The
    two agree identically on valid (glued, closed) data.
    """
    g.validate(tol=tol)
    ang = _all_tetra_angles(g)

    def alpha(a, face, toward):
        return _alpha_face_first(ang, a, face, toward)

    xi = {}
    for a in TETRA_VERTICES:
        for b in TETRA_VERTICES:
            if a == b:
                continue
            for i in TETRA_VERTICES:
                if i in (a, b):
                    continue
                xi[(a, b, i)] = alpha(a, b, i) + alpha(b, a, i)
    xi_avg = {}
    for a in TETRA_VERTICES:
        for b in TETRA_VERTICES:
            if a < b:
                vals = [xi[(a, b, i)] for i in TETRA_VERTICES if i not in (a, b)]
                xi_avg[(a, b)] = sum(vals) / 3

    khat = {a: g.corner_estimates(a) for a in TETRA_VERTICES}
    areas = {(a, b): g.area(a, b) for a in TETRA_VERTICES for b in TETRA_VERTICES if a != b}

    alpha_edge = {}
    for a in TETRA_VERTICES:
        others = [v for v in TETRA_VERTICES if v != a]
        for x in range(4):
            for y in range(x + 1, 4):
                i, j = others[x], others[y]
                acc = 0.0
                for b in others:
                    if b in (i, j):
                        continue
                    acc += (alpha(a, i, j) - alpha(a, i, b)) + (alpha(a, j, i) - alpha(a, j, b))
                alpha_edge[(a, (i, j))] = acc / 6

    value = 0.0
    for (a, b), v in xi_avg.items():
        value += (areas[(a, b)] / 2) * v
    for a in TETRA_VERTICES:
        for key, k in khat[a].items():
            value += k * alpha_edge[(a, key)]

    raw = 0.0
    for a in TETRA_VERTICES:
        for (i, j), k in khat[a].items():
            raw += 0.5 * k * (alpha(a, i, j) + alpha(a, j, i))

    return TwistedAction(value, raw, xi, xi_avg, alpha_edge, khat, areas)


def dihedral_4d_check(g: TwistedSimplexGeometry, tol: float = 1e-8) -> dict:
    """Residuals of the 3d/4d dihedral-angle relation for every (a, b, i).

    In the face-first parameterization the relation carries no orientation
    signs:  -cos th^a_ib cos th^b_ai - sin th^a_ib sin th^b_ai cos xi^ab_i =
    cos th^i_ab.  Nonzero residuals on non-shape-matched data are diagnostic,
    not an error.
    """
    ang = _all_tetra_angles(g, tol=1e-2)

    def th(a, i, j):
        return ang[a]["theta"][(min(i, j), max(i, j))]

    out = {}
    for a in TETRA_VERTICES:
        for b in TETRA_VERTICES:
            if a == b:
                continue
            for i in TETRA_VERTICES:
                if i in (a, b):
                    continue
                xi_abi = _alpha_face_first(ang, a, b, i) + _alpha_face_first(ang, b, a, i)
                lhs = -math.cos(th(a, i, b)) * math.cos(th(b, a, i)) - math.sin(
                    th(a, i, b)
                ) * math.sin(th(b, a, i)) * math.cos(xi_abi)
                out[(a, b, i)] = abs(lhs - math.cos(th(i, a, b)))
    return out


def shape_matching_check(g: TwistedSimplexGeometry, tol: float = 1e-8) -> dict:
    """Per-face check that glued triangles have matching edge-angle data."""
    ang = _all_tetra_angles(g, tol=1e-2)
    out = {}
    for a in TETRA_VERTICES:
        for b in TETRA_VERTICES:
            if a >= b:
                continue
            if g.area(a, b) < 1e-12:
                out[(a, b)] = (True, 0.0)
                continue
            others = [v for v in TETRA_VERTICES if v not in (a, b)]
            worst = 0.0
            for i in others:
                for j in others:
                    if i == j:
                        continue
                    lhs = _alpha_face_first(ang, a, b, i) - _alpha_face_first(ang, a, b, j)
                    rhs = _alpha_face_first(ang, b, a, j) - _alpha_face_first(ang, b, a, i)
                    worst = max(worst, abs(_wrap(lhs - rhs)))
            out[(a, b)] = (worst < tol, worst)
    return out


def branch_margin(g: TwistedSimplexGeometry) -> float:
    """Smallest distance of any stored frame angle to the branch cut.

    Gauge rotations of the frames shift the in-face angles continuously; the
    action is invariant as long as no angle representative crosses the cut,
    so invariance tests should keep 2*chi below this margin.
    """
    worst = math.pi
    for a in TETRA_VERTICES:
        ang = g.tetra_angles(a)
        for v in ang["alpha"].values():
            worst = min(worst, math.pi - abs(_wrap(v)))
    return worst


def gauge_rotate(g: TwistedSimplexGeometry, angles: dict) -> TwistedSimplexGeometry:
    """Frame gauge rotation: spinor pair (a,b)/(b,a) gets phases (+chi, -chi)."""
    new = dict(g.spinors)
    for (a, b), chi in angles.items():
        a, b = min(a, b), max(a, b)
        new[(a, b)] = g.spinors[(a, b)] * np.exp(1j * chi)
        new[(b, a)] = g.spinors[(b, a)] * np.exp(-1j * chi)
    return TwistedSimplexGeometry(new)


# -- constructions ---------------------------------------------------------------


def _regular_simplex_unit_vectors() -> np.ndarray:
    """Five unit vectors in R^4 with pairwise dot -1/4."""
    pts = np.eye(5) - np.full((5, 5), 1 / 5)
    # orthonormal basis of the sum-zero subspace
    basis = np.linalg.svd(pts)[2][:4]
    coords = pts @ basis.T
    coords /= np.linalg.norm(coords, axis=1)[:, None]
    return coords


def _quat_mul(p, q):
    w1, x1, y1, z1 = p
    w2, x2, y2, z2 = q
    return np.array(
        [
            w1 * w2 - x1 * x2 - y1 * y2 - z1 * z2,
            w1 * x2 + x1 * w2 + y1 * z2 - z1 * y2,
            w1 * y2 - x1 * z2 + y1 * w2 + z1 * x2,
            w1 * z2 + x1 * y2 - y1 * x2 + z1 * w2,
        ]
    )


def _quat_conj(q):
    return np.array([q[0], -q[1], -q[2], -q[3]])


def regular_simplex_geometry(area: float = 1.0) -> TwistedSimplexGeometry:
    """Shape-matched twisted data of the regular flat 4-simplex.

    Face normals come from unit-quaternion transition products, which glue
    antipodally by construction; shared faces reuse one frame vector.
    """
    vs = _regular_simplex_unit_vectors()
    quats = {name: vs[i] for i, name in enumerate(TETRA_VERTICES)}
    normals = {}
    for a in TETRA_VERTICES:
        for b in TETRA_VERTICES:
            if a == b:
                continue
            q = _quat_mul(_quat_conj(quats[a]), quats[b])
            v = q[1:]
            normals[(a, b)] = v / np.linalg.norm(v)
    spinors = {}
    for a in TETRA_VERTICES:
        for b in TETRA_VERTICES:
            if a >= b:
                continue
            n = normals[(a, b)]
            probe = np.array([1.0, 0.0, 0.0]) if abs(n[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
            f = probe - (probe @ n) * n
            f /= np.linalg.norm(f)
            z = _spinor_for_face(area, n, f)
            spinors[(a, b)] = z
            spinors[(b, a)] = conj_spinor(z)
    return TwistedSimplexGeometry(spinors)


def _spinor_for_face(area: float, n: np.ndarray, f: np.ndarray) -> np.ndarray:
    """Spinor with the given area, normal and frame (sign canonicalized upstream)."""
    h = (area / 2) * (np.eye(2) + sum(n[k] * PAULI[k] for k in range(3)))
    vals, vecs = np.linalg.eigh(h)
    z0 = vecs[:, np.argmax(vals)] * math.sqrt(area)
    _, _, w0 = _spinor_normal_frame(z0)
    target = f + 1j * np.cross(n, f)
    num = complex(np.vdot(w0, target))
    phi = np.angle(num / abs(num)) / 2
    return z0 * np.exp(1j * phi)


def irregular_simplex_geometry(seed: int = 0) -> TwistedSimplexGeometry:
    """Shape-matched glued data with unequal areas and generic dihedral angles.

    Five generic unit 4-vectors with positive weights summing to zero play the
    role of the regular construction's symmetric directions; transition
    products give antipodally glued normals and weighted areas.
    """
    rng = np.random.default_rng(seed)
    while True:
        vs = rng.normal(size=(5, 4))
        vs /= np.linalg.norm(vs, axis=1)[:, None]
        _, _, vt = np.linalg.svd(vs.T)
        w = vt[-1]
        if np.all(w > 1e-2):
            break
        if np.all(w < -1e-2):
            w = -w
            break
    spin = {}
    for ai, a in enumerate(TETRA_VERTICES):
        for bi, b in enumerate(TETRA_VERTICES):
            if a >= b:
                continue
            q = _quat_mul(_quat_conj(vs[ai]), vs[bi])
            v = q[1:]
            nv = np.linalg.norm(v)
            n = v / nv
            area = float(w[ai] * w[bi] * nv)
            probe = np.array([1.0, 0, 0]) if abs(n[0]) < 0.9 else np.array([0.0, 1.0, 0])
            f = probe - (probe @ n) * n
            f /= np.linalg.norm(f)
            z = _spinor_for_face(area, n, f)
            spin[(a, b)] = z
            spin[(b, a)] = conj_spinor(z)
    return TwistedSimplexGeometry(spin)


def _twisted_residuals(x: np.ndarray, area_targets: dict) -> np.ndarray:
    pairs = [(a, b) for a in TETRA_VERTICES for b in TETRA_VERTICES if a < b]
    zs = x.view(complex).reshape(len(pairs), 2)
    spin = {}
    for (a, b), z in zip(pairs, zs):
        spin[(a, b)] = z
        spin[(b, a)] = conj_spinor(z)
    res = []
    for a in TETRA_VERTICES:
        total = np.zeros((2, 2), dtype=complex)
        area_sum = 0.0
        for b in TETRA_VERTICES:
            if b == a:
                continue
            z = spin[(a, b)]
            total += np.outer(z, np.conj(z))
            area_sum += float(np.real(herm(z, z)))
        dev = total - (area_sum / 2) * np.eye(2)
        res.extend([dev[0, 0].real, dev[0, 1].real, dev[0, 1].imag, dev[1, 1].real])
    for (a, b) in pairs:
        res.append(float(np.real(herm(spin[(a, b)], spin[(a, b)]))) - area_targets[(a, b)])
    return np.array(res)


def random_twisted_geometry(seed: int = 0, restarts: int = 8, tol: float = 1e-10) -> TwistedSimplexGeometry:
    """Generic (non-shape-matched) valid twisted data found by least squares."""
    rng = np.random.default_rng(seed)
    pairs = [(a, b) for a in TETRA_VERTICES for b in TETRA_VERTICES if a < b]
    targets = {p: rng.uniform(0.8, 1.6) for p in pairs}
    best = None
    for _ in range(restarts):
        reg = regular_simplex_geometry()
        x0 = np.concatenate(
            [
                (reg.spinors[p] * math.sqrt(targets[p]) + 0.15 * (rng.normal(size=2) + 1j * rng.normal(size=2)))
                for p in pairs
            ]
        ).view(float)
        sol = least_squares(
            _twisted_residuals, x0, args=(targets,), method="trf",
            xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=6000,
        )
        res = float(np.max(np.abs(_twisted_residuals(sol.x, targets))))
        if best is None or res < best[0]:
            best = (res, sol.x)
        if res < tol:
            break
    res, x = best
    if res > 1e-8:
        raise GeometryError(f"twisted-geometry solver stalled at residual {res:.3e}")
    zs = x.view(complex).reshape(len(pairs), 2)
    spin = {}
    for (a, b), z in zip(pairs, zs):
        spin[(a, b)] = z.copy()
        spin[(b, a)] = conj_spinor(z)
    return TwistedSimplexGeometry(spin)


def perturb_geometry(g: TwistedSimplexGeometry, scale: float, seed: int = 0) -> TwistedSimplexGeometry:
    """Perturb the independent spinors, keeping the gluing pairing exact."""
    rng = np.random.default_rng(seed)
    new = {}
    for a in TETRA_VERTICES:
        for b in TETRA_VERTICES:
            if a >= b:
                continue
            z = g.spinors[(a, b)] + scale * (rng.normal(size=2) + 1j * rng.normal(size=2))
            new[(a, b)] = z
            new[(b, a)] = conj_spinor(z)
    return TwistedSimplexGeometry(new)


# -- JSON ---------------------------------------------------------------------------
#
# framed-tetrahedron/1: {"areas": [4], "normals": [[3] x4], "frames": [[3] x4]}
# twisted-simplex/1: {"spinors": {"a,b": [re0, im0, re1, im1], ...}} (radians/unit areas)


def framed_tet_to_json(tet: FramedTetrahedron) -> str:
    return json.dumps(
        {
            "format": "framed-tetrahedron/1",
            "areas": [float(v) for v in tet.areas],
            "normals": [[float(x) for x in row] for row in tet.normals],
            "frames": [[float(x) for x in row] for row in tet.frames],
        },
        indent=2,
        sort_keys=True,
    )


def framed_tet_from_json(text: str) -> FramedTetrahedron:
    doc = json.loads(text)
    if doc.get("format") != "framed-tetrahedron/1":
        raise ValueError("unsupported framed-tetrahedron format")
    return FramedTetrahedron(
        np.array(doc["areas"], dtype=float),
        np.array(doc["normals"], dtype=float),
        np.array(doc["frames"], dtype=float),
    )


def twisted_to_json(g: TwistedSimplexGeometry) -> str:
    spin = {}
    for (a, b), z in sorted(g.spinors.items()):
        spin[f"{a},{b}"] = [float(z[0].real), float(z[0].imag), float(z[1].real), float(z[1].imag)]
    return json.dumps({"format": "twisted-simplex/1", "spinors": spin}, indent=2, sort_keys=True)


def twisted_from_json(text: str) -> TwistedSimplexGeometry:
    doc = json.loads(text)
    if doc.get("format") != "twisted-simplex/1":
        raise ValueError("unsupported twisted-simplex format")
    spin = {}
    for key, vals in doc["spinors"].items():
        a, b = key.split(",")
        spin[(a, b)] = np.array([vals[0] + 1j * vals[1], vals[2] + 1j * vals[3]])
    return TwistedSimplexGeometry(spin)
