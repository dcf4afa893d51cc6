"""Closed-form TMOTOC of the integrable kicked ring (J_x = h_z = 1, |up...up>).

Each momentum pair (q, -q) of the even-parity sector evolves under a 2x2
Floquet matrix with eigenphases -+gamma_q. With alpha_+- the (real) vacuum
components of its eigenvectors and beta_+- the paired components,

    Phi_q(n) = |a+|^2 e^{-i n g} + |a-|^2 e^{+i n g}
    Psi_q(n) = a+ b+ e^{-i n g} + a- b- e^{+i n g}

and F_z(n) is a triple momentum sum of products of these coefficients.

The quasi-energy obeys cos g = cos^2(2 tau) - cos q sin^2(2 tau). A second
form, cos(2 tau) cos(4 tau) - cos q sin^2(2 tau), is kept selectable
(``GammaForm.PRINTED``) only so that it can be shown to disagree with exact
dynamics; it does not even give Phi_q(0) = 1.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from floq_otoc.config import ModelConfig
from floq_otoc.errors import DomainError, UnsupportedCaseError
from floq_otoc.otoc import OtocAxis, OtocRequest, OtocSeries
from floq_otoc.spinchain import InitialState

# below this |sin q sin^2(2 tau)| the closed-form alpha/beta are 0/0-fragile
_SINGULAR = 1e-9


class GammaForm(str, enum.Enum):
    SYMMETRIC = "symmetric"
    PRINTED = "printed"


@dataclass(frozen=True, eq=False)
class MomentumGrid:
    n_sites: int
    momenta: np.ndarray

    @classmethod
    def even_sector(cls, n_sites: int) -> MomentumGrid:
        if n_sites % 2:
            raise UnsupportedCaseError(f"closed form needs even N, got {n_sites}")
        k = np.arange(n_sites)
        q = -(n_sites - 1) * np.pi / n_sites + 2 * np.pi * k / n_sites
        return cls(n_sites, q)

    @property
    def negated(self) -> np.ndarray:
        """Index of -q for each q (the grid is symmetric)."""
        return self.n_sites - 1 - np.arange(self.n_sites)


@dataclass(frozen=True, eq=False)
class AnalyticTables:
    tau: float
    grid: MomentumGrid
    gamma: np.ndarray
    alpha_plus: np.ndarray
    alpha_minus: np.ndarray
    beta_plus: np.ndarray
    beta_minus: np.ndarray
    gamma_form: GammaForm = GammaForm.SYMMETRIC


@dataclass(frozen=True, eq=False)
class PhiPsi:
    phi: np.ndarray
    psi: np.ndarray


def momentum_floquet_matrix(q: float, tau: float) -> np.ndarray:
    """2x2 one-period propagator of the (q, -q) pair in the basis (vacuum, pair).

    exp(2i tau sz) exp(2i tau (cos q sz + sin q sx)); its n-th power has
    Phi_q(n) in the [0, 0] entry and Psi_q(n) in the [1, 0] entry.
    """
    c, s = np.cos(2 * tau), np.sin(2 * tau)
    kick = np.array([[c + 1j * s, 0], [0, c - 1j * s]])
    # exp(i theta n.sigma) = cos theta + i sin theta n.sigma, n = (sin q, 0, cos q)
    bond = np.array(
        [[c + 1j * s * np.cos(q), 1j * s * np.sin(q)], [1j * s * np.sin(q), c - 1j * s * np.cos(q)]]
    )
    return kick @ bond


def _eigen_coefficients(q: float, tau: float):
    """alpha_+-, beta_+- and gamma by diagonalizing the 2x2 propagator.

    U = cos(g) + i sin(g) n.sigma, so the Hermitian part (U - U^dag)/2i has
    orthonormal eigenvectors even when the two eigenphases nearly coincide.
    """
    u = momentum_floquet_matrix(q, tau)
    h = (u - u.conj().T) / 2j
    vals, vecs = np.linalg.eigh(h)
    gamma = float(np.arctan2(vals[1], (u[0, 0] + u[1, 1]).real / 2))
    if np.max(np.abs(h)) < 1e-300:
        return 1.0, 0.0, 0.0 + 0.0j, 1.0 + 0.0j, gamma
    out = []
    # eigenvalue -sin g of h belongs to e^{-i g}
    for j in (0, 1):
        vec = vecs[:, j]
        a = abs(vec[0])
        phase = vec[0] / a if a > 0 else 1.0
        out.append((a, vec[1] / phase))
    (ap, bp), (am, bm) = out
    return ap, am, bp, bm, gamma


def build_tables(
    n_sites: int, tau: float, gamma_form: GammaForm | str = GammaForm.SYMMETRIC
) -> AnalyticTables:
    gamma_form = GammaForm(gamma_form)
    grid = MomentumGrid.even_sector(n_sites)
    q = grid.momenta
    c2, s2 = np.cos(2 * tau), np.sin(2 * tau)
    first = c2 * c2 if gamma_form is GammaForm.SYMMETRIC else c2 * np.cos(4 * tau)
    cos_g = first - np.cos(q) * s2 * s2
    bad = np.abs(cos_g) > 1 + 1e-12
    if bad.any():
        k = int(np.argmax(bad))
        raise DomainError(f"complex quasi-energy: cos(gamma)={cos_g[k]!r} at q={q[k]!r}, tau={tau!r}")
    gamma = np.arccos(np.clip(cos_g, -1.0, 1.0))

    ap = np.empty(n_sites)
    am = np.empty(n_sites)
    bp = np.empty(n_sites, dtype=np.complex128)
    bm = np.empty(n_sites, dtype=np.complex128)
    phase = np.exp(-2j * tau)
    for k in range(n_sites):
        denom = np.sin(q[k]) * s2 * s2
        g = gamma[k]
        if abs(denom) < _SINGULAR:
            ap[k], am[k], bp[k], bm[k], gamma[k] = _eigen_coefficients(q[k], tau)
            continue
        ap[k] = 1 / np.sqrt(1 + ((c2 - np.cos(g + 2 * tau)) / denom) ** 2)
        am[k] = 1 / np.sqrt(1 + ((c2 - np.cos(g - 2 * tau)) / denom) ** 2)
        common = c2 * s2 * (np.cos(q[k]) + 1)
        bp[k] = (-np.sin(g) - common) / (np.sin(q[k]) * s2) * ap[k] * phase
        bm[k] = (np.sin(g) - common) / (np.sin(q[k]) * s2) * am[k] * phase
    return AnalyticTables(tau, grid, gamma, ap, am, bp, bm, gamma_form)


def phi_psi(tables: AnalyticTables, n: int) -> PhiPsi:
    minus = np.exp(-1j * n * tables.gamma)
    plus = np.exp(1j * n * tables.gamma)
    phi = np.abs(tables.alpha_plus) ** 2 * minus + np.abs(tables.alpha_minus) ** 2 * plus
    psi = tables.alpha_plus * tables.beta_plus * minus + tables.alpha_minus * tables.beta_minus * plus
    return PhiPsi(phi, psi)


def _direct_sum(q, neg, phi, psi, d):
    p_ = q[:, None, None]
    q_ = q[None, :, None]
    r_ = q[None, None, :]
    Phi_p = phi[:, None, None]
    Phi_q = phi[None, :, None]
    Psi_q = psi[None, :, None]
    Psi_r = psi[None, None, :]
    Psi_negp = psi[neg][:, None, None]
    Phi_negr = phi[neg][None, None, :]
    terms = (
        np.exp(1j * (p_ - q_) * d) * np.abs(Psi_r) ** 2 * np.conj(Phi_p) * Phi_q
        - np.exp(1j * (-r_ - q_) * d) * np.conj(Psi_r) * np.conj(Phi_p) * Phi_q * Psi_negp
        - np.exp(1j * (p_ + q_) * d) * Psi_q * np.conj(Psi_r) * np.conj(Phi_p) * Phi_negr
        + np.exp(1j * (q_ - r_) * d) * Psi_q * np.conj(Psi_r) * np.abs(Phi_p) ** 2
    )
    return terms.sum()


def _factorized_sum(q, neg, phi, psi, d):
    e = np.exp(1j * q * d)
    phi_c = np.conj(phi)
    psi_c = np.conj(psi)
    s_phi_c = np.sum(e * phi_c)  # sum_p e^{ipd} Phi_p*
    s_phi = np.sum(phi / e)  # sum_q e^{-iqd} Phi_q
    s_psi = np.sum(e * psi)  # sum_q e^{iqd} Psi_q
    s_psi_c = np.sum(psi_c / e)  # sum_r e^{-ird} Psi_r*
    return (
        s_phi_c * s_phi * np.sum(np.abs(psi) ** 2)
        - s_psi_c * s_phi * np.sum(phi_c * psi[neg])
        - s_phi_c * s_psi * np.sum(psi_c * phi[neg])
        + s_psi * s_psi_c * np.sum(np.abs(phi) ** 2)
    )


def analytic_tmotoc(tables: AnalyticTables, delta_l: int, n: int, method: str = "factorized") -> complex:
    """F_z(n) for observables separated by ``delta_l = m - l`` sites.

    ``method="direct"`` evaluates the O(N^3) triple sum term by term;
    ``"factorized"`` splits each term into single-momentum sums (O(N)).
    """
    N = tables.grid.n_sites
    if not 1 <= abs(delta_l) <= N - 1:
        raise UnsupportedCaseError(f"delta_l={delta_l} outside [1, {N - 1}]")
    if n == 0:
        return 1.0 + 0.0j
    coeff = phi_psi(tables, n)
    q, neg = tables.grid.momenta, tables.grid.negated
    if method == "direct":
        total = _direct_sum(q, neg, coeff.phi, coeff.psi, delta_l)
    elif method == "factorized":
        total = _factorized_sum(q, neg, coeff.phi, coeff.psi, delta_l)
    else:
        raise ValueError(f"unknown method {method!r}")
    return complex(1 - (2 / N) ** 3 * total)


def analytic_series(
    n_sites: int,
    tau: float,
    delta_l: int,
    n_max: int,
    stride: int = 1,
    tables: AnalyticTables | None = None,
    dense_until: int = 0,
) -> OtocSeries:
    """TMOTOC series from the closed form, packaged like an echo-engine series."""
    if tables is None:
        tables = build_tables(n_sites, tau)
    config = ModelConfig.integrable(n_sites, tau)
    request = OtocRequest(
        config, OtocAxis.TM, 0, delta_l, n_max, stride, InitialState.all_up(), dense_until
    )
    kicks = request.kicks()
    f = np.array([analytic_tmotoc(tables, delta_l, int(n)) for n in kicks])
    return OtocSeries(request, kicks, f)
