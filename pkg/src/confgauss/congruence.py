"""The conformal Gauss map and its frame geometry.

Construction of the sphere congruence Y in the three representations,
envelope and metric-law residuals, the dual surfaces, the isotropic frame
(nu, nu*) with its directional curvatures, and the reconstruction of the
enveloped immersion from a congruence.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import ChartGrid, FundamentalData, fundamental_data, interior_max
from .jets import push_word
from .lorentz import lorentz_product, word_matrix
from .models import lift_h3, lift_r3, lift_s3, representation

__all__ = [
    "CongruenceGrid",
    "IsotropicFrame",
    "conformal_gauss_map",
    "envelope_residuals",
    "metric_law_residual",
    "dual_surface_r3",
    "dual_surface_s3",
    "dual_branch_mask",
    "isotropic_frame",
    "reconstruct_from_congruence",
    "transform_immersion",
]


@dataclass
class CongruenceGrid:
    """Sphere congruence Y over a chart, with stencil-derived derivatives."""

    grid: ChartGrid
    Y: np.ndarray

    def __post_init__(self):
        self.Yz = np.stack(
            [self.grid.dz(self.Y[..., k]) for k in range(5)], axis=-1
        )
        self.Yzb = np.conj(self.Yz)
        self._Yzz = None
        self._Yzzb = None

    @property
    def Yzz(self):
        if self._Yzz is None:
            self._Yzz = np.stack(
                [self.grid.dz(self.Yz[..., k]) for k in range(5)], axis=-1
            )
        return self._Yzz

    @property
    def Yzzb(self):
        if self._Yzzb is None:
            self._Yzzb = np.stack(
                [self.grid.dzbar(self.Yz[..., k]) for k in range(5)], axis=-1
            )
        return self._Yzzb

    @property
    def e2L(self):
        """Conformal exponent of Y: e^{2L} = 2 <Y_z, Y_zbar>."""
        return 2.0 * lorentz_product(self.Yz, self.Yzb).real

    def norm_defect(self) -> float:
        return float(np.max(np.abs(lorentz_product(self.Y, self.Y) - 1.0)))


def _lift_field(data: FundamentalData) -> np.ndarray:
    pos = data.grid.pos
    if data.model == "r3":
        return lift_r3(pos)
    if data.model == "s3":
        return lift_s3(pos)
    return lift_h3(pos)


def _normal_lift(data: FundamentalData) -> np.ndarray:
    """The (n, <n,phi>, <n,phi>)-style completion of the lift, per model."""
    n = data.n
    if data.model == "r3":
        ndotphi = (n * data.grid.pos).sum(axis=-1)[..., None]
        return np.concatenate([n, ndotphi, ndotphi], axis=-1)
    if data.model == "s3":
        zeros = np.zeros(n.shape[:-1] + (1,))
        return np.concatenate([n, zeros], axis=-1)
    zeros = np.zeros(n.shape[:-1] + (1,))
    return np.concatenate([n[..., :3], zeros, n[..., 3:4]], axis=-1)


def conformal_gauss_map(data: FundamentalData) -> CongruenceGrid:
    """Conformal Gauss map of the immersion, in the data's representation."""
    y = data.H[..., None] * _lift_field(data) + _normal_lift(data)
    return CongruenceGrid(data.grid, y)


def envelope_residuals(cong: CongruenceGrid, lift_field: np.ndarray):
    """Interior max norms of <Y, p> and <Y, p_z> for a lift field p."""
    r1 = lorentz_product(cong.Y, lift_field)
    pz = np.stack([cong.grid.dz(lift_field[..., k]) for k in range(5)], axis=-1)
    r2 = lorentz_product(cong.Y.astype(complex), pz)
    return interior_max(r1), interior_max(r2)


def metric_law_residual(cong: CongruenceGrid, data: FundamentalData) -> float:
    """Residual of <dY,dY> = (|A|^2/2) g in complex form."""
    target = np.abs(data.Omega) ** 2 * np.exp(-2.0 * data.lam)
    law = np.abs(2.0 * lorentz_product(cong.Yz, cong.Yzb) - target)
    conf = np.abs(lorentz_product(cong.Yz, cong.Yz))
    return interior_max(law + conf)


def _require_no_umbilic(data: FundamentalData, what: str):
    if data.has_umbilic():
        raise ValueError(f"{what} undefined: umbilic points on the chart")


def dual_surface_r3(data: FundamentalData) -> np.ndarray:
    """Second envelope of Y for an R^3 immersion."""
    if data.model != "r3":
        raise ValueError("dual_surface_r3 needs R^3 data")
    _require_no_umbilic(data, "dual")
    g = data.grid
    hz = g.dz(data.H)
    e2l = data.e2lam
    em2l = np.exp(-2.0 * data.lam)
    om2 = np.abs(data.Omega) ** 2
    t_phi = 4.0 * np.abs(hz) ** 2 + data.H ** 2 * om2 * em2l
    floor = 1e-10 * float(np.max(om2 * em2l))
    if float(np.min(t_phi[2:-2, 2:-2])) <= floor:
        raise ValueError("dual undefined: T vanishes on the chart")
    phi_z, phi_zb = g.pos_z, g.pos_zb
    correction = (
        -4.0 * (hz * np.conj(data.Omega) * em2l / t_phi)[..., None] * phi_z
        - 4.0 * (np.conj(hz) * data.Omega * em2l / t_phi)[..., None] * phi_zb
    )
    normal_part = (2.0 * data.H * om2 * em2l / t_phi)[..., None] * data.n
    return g.pos + correction.real + normal_part


def dual_surface_s3(data: FundamentalData) -> np.ndarray:
    """Second envelope of Y for an S^3 immersion, unit-norm field X*."""
    if data.model != "s3":
        raise ValueError("dual_surface_s3 needs S^3 data")
    _require_no_umbilic(data, "dual")
    g = data.grid
    hz = g.dz(data.H)
    e2lam = data.e2lam
    om2 = np.abs(data.Omega) ** 2
    t_x = om2 * (1.0 + data.H ** 2) + 4.0 * np.abs(hz) ** 2 * e2lam
    alpha = (data.H ** 2 * om2 + 4.0 * np.abs(hz) ** 2 * e2lam - om2) / t_x
    x_z, x_zb = g.pos_z, g.pos_zb
    tangent = (
        -4.0 * (hz * np.conj(data.Omega) / t_x)[..., None] * x_z
        - 4.0 * (np.conj(hz) * data.Omega / t_x)[..., None] * x_zb
    )
    return (
        alpha[..., None] * g.pos
        + tangent.real
        + (2.0 * om2 * data.H / t_x)[..., None] * data.n
    )


def dual_branch_mask(data: FundamentalData, xstar: np.ndarray,
                     rel_tol: float = 1e-6) -> np.ndarray:
    """Nodes where the dual stops immersing: |X*_z|^2 below threshold.

    The dual of a Willmore immersion may be branched; branch points are
    reported, not classified.
    """
    g = data.grid
    xstar_z = np.stack([g.dz(xstar[..., k]) for k in range(xstar.shape[-1])],
                       axis=-1)
    speed2 = (xstar_z * np.conj(xstar_z)).real.sum(axis=-1)
    return speed2 <= rel_tol * float(np.max(speed2))


@dataclass
class IsotropicFrame:
    """Isotropic normal frame (nu, nu*) of Y with directional curvatures."""

    nu: np.ndarray
    nustar: np.ndarray
    l: np.ndarray
    e2L: np.ndarray
    H_nu: np.ndarray
    H_nustar: np.ndarray
    Omega_nu: np.ndarray
    Omega_nustar: np.ndarray


def isotropic_frame(data: FundamentalData, cong: CongruenceGrid) -> IsotropicFrame:
    """Frame (nu, nu*) = (p(X), -p(X*)/l) and its directional curvatures."""
    if data.model != "s3":
        raise ValueError("isotropic_frame needs S^3 data")
    _require_no_umbilic(data, "frame")
    nu = lift_s3(data.grid.pos)
    xstar = dual_surface_s3(data)
    pxstar = lift_s3(xstar)
    l = lorentz_product(nu, pxstar)
    nustar = -pxstar / l[..., None]
    e2big_l = cong.e2L
    nu_c = nu.astype(complex)
    nustar_c = nustar.astype(complex)
    omega_nu = 2.0 * lorentz_product(cong.Yzz, nu_c)
    omega_nustar = 2.0 * lorentz_product(cong.Yzz, nustar_c)
    h_nu = 2.0 * lorentz_product(cong.Yzzb, nu_c).real / e2big_l
    h_nustar = 2.0 * lorentz_product(cong.Yzzb, nustar_c).real / e2big_l
    return IsotropicFrame(nu, nustar, l, e2big_l, h_nu, h_nustar, omega_nu, omega_nustar)


def transform_immersion(data: FundamentalData, word) -> FundamentalData:
    """Apply a Moebius generator word to a surface by pushing its jets.

    Surfaces charted in S^3 or H^3 are first re-expressed in the R^3
    gauge; the word then acts on R^3 ∪ {∞} through the generator maps,
    keeping analytic jets (chain rule, never re-sampling).
    """
    if data.model != "r3":
        data = representation(data, "r3")
    g = data.grid
    jet = push_word(g.jet, word)
    new_grid = ChartGrid("r3", g.u, g.v, jet, conf_tol=g.conf_tol)
    cand = fundamental_data(new_grid)
    # conformal maps either keep or flip the induced orientation; keep the
    # Gauss lift continuous with the source by matching the envelope
    y_old = conformal_gauss_map(data).Y
    y_ref = y_old @ word_matrix(word).T
    y_new = conformal_gauss_map(cand).Y
    if np.mean(np.abs(y_new + y_ref)) < np.mean(np.abs(y_new - y_ref)):
        cand = FundamentalData("r3", new_grid, cand.lam, -cand.n, -cand.H,
                               -cand.Omega)
    return cand


def reconstruct_from_congruence(cong: CongruenceGrid, nu0: np.ndarray,
                                tol: float = 1e-6) -> np.ndarray:
    """Recover the enveloped S^3 immersion from Y and an isotropic normal.

    nu0 must be isotropic, normal to Y and Y_z, and of vanishing mean
    curvature H_nu0; the result is nu0 renormalized by its 5th component.
    """
    nu0 = np.asarray(nu0, dtype=float)
    scale = float(np.max(np.abs(nu0)))
    iso = interior_max(lorentz_product(nu0, nu0)) / scale ** 2
    if iso > tol:
        raise ValueError("normal direction is not isotropic")
    if interior_max(lorentz_product(cong.Y, nu0)) / scale > tol:
        raise ValueError("direction is not normal to Y")
    if interior_max(lorentz_product(cong.Yz, nu0.astype(complex))) / scale > tol:
        raise ValueError("direction is not normal to the tangent of Y")
    h_nu0 = 2.0 * lorentz_product(cong.Yzzb, nu0.astype(complex)).real / cong.e2L
    if interior_max(h_nu0) / scale > tol:
        raise ValueError("not integrable: H_nu does not vanish")
    return nu0[..., :4] / nu0[..., 4:5]
