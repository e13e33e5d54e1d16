"""Reduced single-mode Wigner functions of two-mode coherent superpositions.

Convention: a coherent amplitude alpha sits at (x, p) = (sqrt2 Re alpha, sqrt2 Im alpha),
i.e. alpha = (x + i p)/sqrt2. Wigner functions integrate to one over dx dp and a
pure state peaks at most at 1/pi.

Two evaluation paths:

* dyad kernel (any state): W[|alpha><beta|](z) = (1/pi) <beta|alpha> exp(-2 (z* - beta*)(z - alpha));
* closed form for the antipodal-pair family
  ``(1/8)[A c(a1 e^{i theta1}, xi1) c(a2 e^{i phi2}, zeta2) + B c(a1 e^{i phi1}, zeta1) c(a2 e^{i theta2}, xi2)]``
  with normalized cats ``c(a, xi) ~ |a> + e^{i xi}|-a>``. The printed expression
  already uses this phase-space scaling once the Gaussian prefactor is read as
  exp(-(|a1|^2 + |a2|^2 + x1^2 + p1^2 + x2^2 + p2^2)); the only extra step is dividing
  by the squared norm of the (unnormalized) pair state.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np
from numpy.polynomial.hermite import hermgauss
from scipy import ndimage
from scipy.integrate import trapezoid

from .coherent import SuperState, coherent_overlap, overlap_matrix
from .entanglement import coefficient_matrix

SQRT2 = math.sqrt(2.0)
IMAG_RESIDUE_TOL = 1e-9
CONVENTION = {
    "alpha_center_scale": SQRT2,
    "normalization": "unit integral",
    "alpha": "(x + i p) / sqrt(2)",
}


class HermiticityError(ArithmeticError):
    pass


class DomainError(ValueError):
    """Parameters (or state) outside the antipodal cat-pair family."""


@dataclass(frozen=True)
class PhaseSpaceGrid:
    x_min: float
    x_max: float
    p_min: float
    p_max: float
    nx: int = 201
    np: int = 201

    def __post_init__(self):
        if not (self.x_max > self.x_min and self.p_max > self.p_min):
            raise ValueError("grid ranges must be strictly increasing")
        if self.nx < 2 or self.np < 2:
            raise ValueError("need at least two points per axis")

    @classmethod
    def square(cls, half_width: float, n: int = 201) -> "PhaseSpaceGrid":
        return cls(-half_width, half_width, -half_width, half_width, n, n)

    @classmethod
    def wide(cls, alpha: float, n: int = 201) -> "PhaseSpaceGrid":
        return cls.square(SQRT2 * abs(alpha) + 5.0, n)

    @classmethod
    def zoom(cls, n: int = 201) -> "PhaseSpaceGrid":
        return cls.square(1.5, n)

    @property
    def x(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.nx)

    @property
    def p(self) -> np.ndarray:
        return np.linspace(self.p_min, self.p_max, self.np)

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / (self.nx - 1)

    @property
    def dp(self) -> float:
        return (self.p_max - self.p_min) / (self.np - 1)

    def mesh(self):
        """(X, P) arrays of shape (nx, np); first index runs over x."""
        return np.meshgrid(self.x, self.p, indexing="ij")


@dataclass
class WignerField:
    grid: PhaseSpaceGrid
    values: np.ndarray
    convention: dict = field(default_factory=lambda: dict(CONVENTION))

    def __post_init__(self):
        if self.values.shape != (self.grid.nx, self.grid.np):
            raise ValueError("values do not match the grid")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("non-finite Wigner values")

    def integral(self) -> float:
        return float(self.values.sum() * self.grid.dx * self.grid.dp)

    @property
    def min(self) -> float:
        return float(self.values.min())

    def x_marginal(self) -> np.ndarray:
        return trapezoid(self.values, dx=self.grid.dp, axis=1)

    def to_csv(self, path) -> None:
        x, p = self.grid.x, self.grid.p
        with open(path, "w", newline="\n") as fh:
            fh.write("x,p,W\n")
            for i in range(self.grid.nx):
                for j in range(self.grid.np):
                    fh.write(f"{x[i]:.17g},{p[j]:.17g},{self.values[i, j]:.17g}\n")

    def sidecar(self, **extra) -> dict:
        return {"grid": asdict(self.grid), "convention": self.convention, **extra}

    def write_sidecar(self, path, **extra) -> None:
        Path(path).write_text(json.dumps(self.sidecar(**extra), indent=2, sort_keys=True))

    def to_ppm(self, path) -> None:
        """Diverging blue-white-red heatmap, p increasing upward."""
        v = self.values.T[::-1]
        scale = max(abs(v).max(), 1e-300)
        t = np.clip(v / scale, -1.0, 1.0)
        r = np.where(t >= 0, 1.0, 1.0 + t)
        g = 1.0 - np.abs(t)
        b = np.where(t <= 0, 1.0, 1.0 - t)
        rgb = (np.stack([r, g, b], axis=-1) * 255).round().astype(np.uint8)
        with open(path, "wb") as fh:
            fh.write(f"P6\n{v.shape[1]} {v.shape[0]}\n255\n".encode())
            fh.write(rgb.tobytes())


# --- dyad kernel --------------------------------------------------------------


def coherent_dyad_wigner(alpha: complex, beta: complex, x, p) -> np.ndarray:
    """Wigner transform of |alpha><beta| (complex unless alpha == beta)."""
    alpha, beta = complex(alpha), complex(beta)
    z = (np.asarray(x, dtype=float) + 1j * np.asarray(p, dtype=float)) / SQRT2
    # overlap and Gaussian merged into one exponent to avoid overflow
    expo = (
        -0.5 * abs(alpha) ** 2
        - 0.5 * abs(beta) ** 2
        + beta.conjugate() * alpha
        - 2.0 * (np.conj(z) - beta.conjugate()) * (z - alpha)
    )
    return np.exp(expo) / math.pi


def reduced_density_labels(state: SuperState, mode: int = 1):
    """Labels and coefficient matrix R with rho_mode = sum R_ab |l_a><l_b|."""
    l1, l2, c = coefficient_matrix(state)
    if mode == 2:
        l1, l2, c = l2, l1, c.T
    g2 = overlap_matrix(l2[:, None], l2[None, :])
    r = c @ g2.T @ c.conj().T
    g1 = overlap_matrix(l1[:, None], l1[None, :])
    # Tr rho = sum_ab R_ab <l_b|l_a> = tr(R G)
    norm = np.real(np.trace(r @ g1))
    return l1, r / norm


def reduced_wigner(state: SuperState, mode: int, grid: PhaseSpaceGrid) -> WignerField:
    labels, r = reduced_density_labels(state, mode)
    X, P = grid.mesh()
    acc = np.zeros(X.shape, dtype=complex)
    for a in range(len(labels)):
        for b in range(len(labels)):
            if abs(r[a, b]) > 0:
                acc += r[a, b] * coherent_dyad_wigner(labels[a], labels[b], X, P)
    residue = float(np.abs(acc.imag).max())
    if residue > IMAG_RESIDUE_TOL:
        raise HermiticityError(f"imaginary residue {residue:.2e} in reduced Wigner function")
    return WignerField(grid, acc.real.copy())


# --- closed form for antipodal cat pairs -------------------------------------


@dataclass(frozen=True)
class GeneralCatParams:
    theta1: float
    theta2: float
    phi1: float
    phi2: float
    xi1: float
    xi2: float
    zeta1: float
    zeta2: float
    coeff_A: complex
    coeff_B: complex
    alpha1: complex
    alpha2: complex

    def __post_init__(self):
        for k, v in asdict(self).items():
            v = complex(v)
            if not (math.isfinite(v.real) and math.isfinite(v.imag)):
                raise ValueError(f"{k} must be finite")

    def _cat_norm(self, alpha, phase) -> float:
        return 1.0 + math.exp(-2 * abs(alpha) ** 2) * math.cos(phase)

    def to_state(self) -> SuperState:
        """The (unnormalized) two-mode state these parameters describe."""
        from .coherent import product_state

        def ncat(alpha, ang, ph):
            a = complex(alpha) * cmath.exp(1j * ang)
            k = 1.0 / math.sqrt(2 * self._cat_norm(alpha, ph))
            return product_state(k, a) + product_state(k * cmath.exp(1j * ph), -a)

        def kron(u, v):
            from .coherent import tensor

            return tensor(u, v)

        first = kron(ncat(self.alpha1, self.theta1, self.xi1), ncat(self.alpha2, self.phi2, self.zeta2))
        second = kron(ncat(self.alpha1, self.phi1, self.zeta1), ncat(self.alpha2, self.theta2, self.xi2))
        return (first.scaled(self.coeff_A) + second.scaled(self.coeff_B)).scaled(1 / 8)

    def norm2(self) -> float:
        def cat_overlap(alpha, ang_l, ph_l, ang_r, ph_r):
            # <c(ang_l, ph_l)|c(ang_r, ph_r)> for normalized cats
            a = complex(alpha) * cmath.exp(1j * ang_l)
            b = complex(alpha) * cmath.exp(1j * ang_r)
            s = (
                coherent_overlap(a, b)
                + cmath.exp(1j * ph_r) * coherent_overlap(a, -b)
                + cmath.exp(-1j * ph_l) * coherent_overlap(-a, b)
                + cmath.exp(1j * (ph_r - ph_l)) * coherent_overlap(-a, -b)
            )
            return s / (2 * math.sqrt(self._cat_norm(alpha, ph_l) * self._cat_norm(alpha, ph_r)))

        cross = cat_overlap(self.alpha1, self.theta1, self.xi1, self.phi1, self.zeta1) * cat_overlap(
            self.alpha2, self.phi2, self.zeta2, self.theta2, self.xi2
        )
        A, B = complex(self.coeff_A), complex(self.coeff_B)
        return (abs(A) ** 2 + abs(B) ** 2 + 2 * (A.conjugate() * B * cross).real) / 64.0


def _diag_bracket(alpha, ang, ph, x, p):
    a = complex(alpha) * cmath.exp(1j * ang)
    ac = a.conjugate()
    m2 = abs(alpha) ** 2
    return math.exp(-m2) * np.cos(SQRT2 * 1j * x * (a + ac) + SQRT2 * p * (a - ac)) + math.exp(m2) * np.cos(
        ph + SQRT2 * 1j * x * (a - ac) + SQRT2 * p * (a + ac)
    )


def _cross_bracket(alpha, ang_ket, ang_bra, c_minus, c_plus, sign, x, p):
    a = complex(alpha) * cmath.exp(1j * ang_ket)
    bc = complex(alpha).conjugate() * cmath.exp(-1j * ang_bra)
    w = abs(alpha) ** 2 * cmath.exp(1j * (ang_ket - ang_bra))
    first = np.cos(c_minus + sign * (SQRT2 * 1j * x * (a + bc) + SQRT2 * p * (a - bc)))
    second = np.cos(c_plus + SQRT2 * 1j * x * (a - bc) + SQRT2 * p * (a + bc))
    return cmath.exp(-w) * first + cmath.exp(w) * second


def _components(prm: GeneralCatParams):
    """Per-term (weight, mode-1 bracket, mode-2 bracket) for D1, D2, OD1, OD2."""
    a1, a2 = prm.alpha1, prm.alpha2
    n_xi1 = prm._cat_norm(a1, prm.xi1)
    n_zeta2 = prm._cat_norm(a2, prm.zeta2)
    n_zeta1 = prm._cat_norm(a1, prm.zeta1)
    n_xi2 = prm._cat_norm(a2, prm.xi2)
    A, B = complex(prm.coeff_A), complex(prm.coeff_B)
    root = math.sqrt(n_xi1 * n_zeta2 * n_zeta1 * n_xi2)
    w_od1 = A * B.conjugate() * cmath.exp(0.5j * ((prm.xi1 - prm.xi2) - (prm.zeta1 - prm.zeta2))) / root
    w_od2 = A.conjugate() * B * cmath.exp(0.5j * ((prm.zeta1 - prm.zeta2) - (prm.xi1 - prm.xi2))) / root
    return [
        (
            abs(A) ** 2 / (n_xi1 * n_zeta2),
            lambda x, p: _diag_bracket(a1, prm.theta1, prm.xi1, x, p),
            lambda x, p: _diag_bracket(a2, prm.phi2, prm.zeta2, x, p),
        ),
        (
            abs(B) ** 2 / (n_zeta1 * n_xi2),
            lambda x, p: _diag_bracket(a1, prm.phi1, prm.zeta1, x, p),
            lambda x, p: _diag_bracket(a2, prm.theta2, prm.xi2, x, p),
        ),
        (
            w_od1,
            lambda x, p: _cross_bracket(
                a1, prm.theta1, prm.phi1, (prm.zeta1 - prm.xi1) / 2, (prm.zeta1 + prm.xi1) / 2, -1, x, p
            ),
            lambda x, p: _cross_bracket(
                a2, prm.phi2, prm.theta2, (prm.zeta2 - prm.xi2) / 2, (prm.zeta2 + prm.xi2) / 2, +1, x, p
            ),
        ),
        (
            w_od2,
            lambda x, p: _cross_bracket(
                a1, prm.phi1, prm.theta1, (prm.xi1 - prm.zeta1) / 2, (prm.xi1 + prm.zeta1) / 2, -1, x, p
            ),
            lambda x, p: _cross_bracket(
                a2, prm.theta2, prm.phi2, (prm.xi2 - prm.zeta2) / 2, (prm.xi2 + prm.zeta2) / 2, +1, x, p
            ),
        ),
    ]


def _prefactor(prm: GeneralCatParams, x1, p1, x2, p2):
    return np.exp(-(abs(prm.alpha1) ** 2 + abs(prm.alpha2) ** 2 + x1**2 + x2**2 + p1**2 + p2**2)) / (
        64 * math.pi**2
    )


def wigner4d(prm: GeneralCatParams, x1, p1, x2, p2, normalized: bool = True) -> np.ndarray:
    """Two-mode Wigner function of the cat-pair state at arbitrary (x1, p1, x2, p2)."""
    total = sum(w * f1(x1, p1) * f2(x2, p2) for w, f1, f2 in _components(prm))
    out = (_prefactor(prm, x1, p1, x2, p2) * total).real
    return out / prm.norm2() if normalized else out


@dataclass
class ClosedFormWigner:
    params: GeneralCatParams
    quadrature_order: int = 96

    def __call__(self, x1, p1, x2, p2):
        return wigner4d(self.params, x1, p1, x2, p2)

    def reduced(self, mode: int, grid: PhaseSpaceGrid) -> WignerField:
        """Integrate out the other mode with a tensor Gauss-Hermite rule (weight e^{-x^2-p^2})."""
        prm = self.params
        nodes, weights = hermgauss(self.quadrature_order)
        XQ, PQ = np.meshgrid(nodes, nodes, indexing="ij")
        WQ = np.outer(weights, weights)
        X, P = grid.mesh()
        alpha_here, alpha_other = (prm.alpha1, prm.alpha2) if mode == 1 else (prm.alpha2, prm.alpha1)
        acc = np.zeros(X.shape, dtype=complex)
        for w, f1, f2 in _components(prm):
            f_here, f_other = (f1, f2) if mode == 1 else (f2, f1)
            acc += w * f_here(X, P) * np.sum(WQ * f_other(XQ, PQ))
        acc *= np.exp(-(abs(alpha_here) ** 2 + abs(alpha_other) ** 2 + X**2 + P**2)) / (64 * math.pi**2)
        return WignerField(grid, acc.real / prm.norm2())


def closed_form_wigner(params: GeneralCatParams, grid1: PhaseSpaceGrid, grid2: PhaseSpaceGrid | None = None):
    """4D evaluator plus the two reduced fields."""
    cf = ClosedFormWigner(params)
    grid2 = grid2 or grid1
    return cf, cf.reduced(1, grid1), cf.reduced(2, grid2)


def _antipodal_pairs(labels: np.ndarray, tol: float = 1e-9):
    pairs, used = [], set()
    for i, l in enumerate(labels):
        if i in used:
            continue
        partner = [j for j in range(len(labels)) if j != i and j not in used and abs(labels[j] + l) <= tol]
        if len(partner) != 1:
            raise DomainError(f"label {l:.4g} has no antipodal partner")
        j = partner[0]
        used |= {i, j}
        # representative: the member with polar angle in [0, pi)
        ang = math.atan2(l.imag, l.real) % (2 * math.pi)
        pairs.append((i, j) if ang < math.pi - 1e-12 else (j, i))
    return pairs


def fit_general_params(state: SuperState) -> GeneralCatParams:
    """Read off the cat-pair parameters of a two-block antipodal state."""
    l1, l2, c = coefficient_matrix(state)
    pairs1, pairs2 = _antipodal_pairs(l1), _antipodal_pairs(l2)
    if len(pairs1) != 2 or len(pairs2) != 2:
        raise DomainError("each mode needs exactly two antipodal pairs")
    blocks = []
    for i, pr in enumerate(pairs1):
        for j, pc in enumerate(pairs2):
            sub = c[np.ix_(pr, pc)]
            if np.abs(sub).max() > 1e-12 * np.abs(c).max():
                blocks.append((i, j, sub))
    if len(blocks) != 2 or {b[0] for b in blocks} != {0, 1} or {b[1] for b in blocks} != {0, 1}:
        raise DomainError("nonzero blocks do not pair the antipodal families one-to-one")
    out = []
    for i, j, sub in blocks:
        u, s, vh = np.linalg.svd(sub)
        if s[1] > 1e-10 * s[0]:
            raise DomainError("block is not a product of two cats")
        u0, v0 = u[:, 0] * s[0], vh[0]
        r1, r2 = u0[1] / u0[0], v0[1] / v0[0]
        if abs(abs(r1) - 1) > 1e-9 or abs(abs(r2) - 1) > 1e-9:
            raise DomainError("cat components have unequal weights")
        rep1, rep2 = l1[pairs1[i][0]], l2[pairs2[j][0]]
        out.append((rep1, rep2, cmath.phase(r1) % (2 * math.pi), cmath.phase(r2) % (2 * math.pi), u0[0] * v0[0]))
    out.sort(key=lambda b: math.atan2(b[0].imag, b[0].real) % (2 * math.pi))
    (ra1, ra2, xi1, zeta2, ka), (rb1, rb2, zeta1, xi2, kb) = out
    alpha1, alpha2 = abs(ra1), abs(ra2)
    if abs(abs(rb1) - alpha1) > 1e-9 or abs(abs(rb2) - alpha2) > 1e-9:
        raise DomainError("blocks carry different amplitudes in the same mode")

    def ncat(alpha, ph):
        return math.sqrt(2 * (1 + math.exp(-2 * alpha**2) * math.cos(ph)))

    A = 8 * ka * ncat(alpha1, xi1) * ncat(alpha2, zeta2)
    B = 8 * kb * ncat(alpha1, zeta1) * ncat(alpha2, xi2)
    return GeneralCatParams(
        theta1=cmath.phase(ra1) % (2 * math.pi),
        theta2=cmath.phase(rb2) % (2 * math.pi),
        phi1=cmath.phase(rb1) % (2 * math.pi),
        phi2=cmath.phase(ra2) % (2 * math.pi),
        xi1=xi1,
        xi2=xi2,
        zeta1=zeta1,
        zeta2=zeta2,
        coeff_A=complex(A),
        coeff_B=complex(B),
        alpha1=alpha1,
        alpha2=alpha2,
    )


# --- diagnostics -------------------------------------------------------------


def negativity_volume(fld: WignerField) -> float:
    return float(np.clip(-fld.values, 0.0, None).sum() * fld.grid.dx * fld.grid.dp)


@dataclass
class LobeReport:
    peaks: list[tuple[float, float]]
    note: str = ""

    def radii(self) -> np.ndarray:
        return np.array([math.hypot(x, p) for x, p in self.peaks])

    def angles_deg(self) -> np.ndarray:
        return np.array([math.degrees(math.atan2(p, x)) % 360.0 for x, p in self.peaks])


def husimi_smooth(fld: WignerField) -> np.ndarray:
    """Convolve with the vacuum Gaussian (variance 1/2 per quadrature): the Husimi Q function."""
    sigma = (1 / SQRT2 / fld.grid.dx, 1 / SQRT2 / fld.grid.dp)
    return ndimage.gaussian_filter(fld.values, sigma, mode="constant", truncate=6.0)


def lobe_positions(fld: WignerField, expected: int | None = None) -> LobeReport:
    """Coherent-lobe centres: local maxima above half the maximum of the Husimi-smoothed field.

    Smoothing removes the sub-Planck interference fringes, which otherwise
    outshine the lobes themselves.
    """
    q = husimi_smooth(fld)
    is_max = (q == ndimage.maximum_filter(q, size=3, mode="constant", cval=-np.inf)) & (q >= 0.5 * q.max())
    x, p = fld.grid.x, fld.grid.p
    peaks = []
    for i, j in zip(*np.nonzero(is_max)):
        xi, pj = x[i], p[j]
        # quadratic sub-cell refinement
        if 0 < i < len(x) - 1:
            d = q[i - 1, j] - 2 * q[i, j] + q[i + 1, j]
            if d < 0:
                xi += 0.5 * (q[i - 1, j] - q[i + 1, j]) / d * fld.grid.dx
        if 0 < j < len(p) - 1:
            d = q[i, j - 1] - 2 * q[i, j] + q[i, j + 1]
            if d < 0:
                pj += 0.5 * (q[i, j - 1] - q[i, j + 1]) / d * fld.grid.dp
        peaks.append((float(xi), float(pj)))
    peaks.sort(key=lambda t: math.atan2(t[1], t[0]) % (2 * math.pi))
    note = ""
    if expected is not None and len(peaks) < expected:
        note = f"found {len(peaks)} of {expected} lobes; components may have merged"
    return LobeReport(peaks, note)


def axis_sign_changes(fld: WignerField, radius: float = 1.0, rel_floor: float = 1e-3) -> tuple[int, int]:
    """Sign alternations of W along the x axis and the p axis within ``radius`` of the origin.

    Values below ``rel_floor`` times max |W| are ignored so that numerical zeros do not count.
    """
    floor = rel_floor * float(np.abs(fld.values).max())
    out = []
    for axis_vals, line in ((fld.grid.x, fld.values[:, int(np.argmin(np.abs(fld.grid.p)))]),
                            (fld.grid.p, fld.values[int(np.argmin(np.abs(fld.grid.x))), :])):
        seg = line[np.abs(axis_vals) <= radius]
        signs = np.sign(seg[np.abs(seg) > floor])
        out.append(int(np.count_nonzero(np.diff(signs))))
    return out[0], out[1]
