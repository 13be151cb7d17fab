"""Discrete calculus on conformal chart grids.

Wirtinger derivatives of sampled fields by 4th-order stencils, extraction
of the fundamental data (lam, n, H, Omega) from analytic 2-jets, and the
structure-equation residuals.  Order <= 2 jets are always analytic; every
higher derivative is a stencil derivative of a per-node field, never a
difference of positions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .jets import Jet2

__all__ = [
    "diff_matrix",
    "ChartGrid",
    "FundamentalData",
    "fundamental_data",
    "gauss_codazzi_residual",
    "structure_residuals",
    "interior_max",
    "export_csv",
]

MIN_GRID = 9
UMBILIC_REL_TOL = 1e-7

_CENTRAL = np.array([1.0, -8.0, 0.0, 8.0, -1.0]) / 12.0

_DIFF_CACHE = {}


def _onesided_weights(pos: int, nodes: int = 7) -> np.ndarray:
    """First-derivative weights at node ``pos`` over nodes 0..nodes-1.

    Exact on polynomials of degree < nodes; the extra node over the
    minimal 4th-order stencil keeps repeated differentiation from
    amplifying edge errors into the interior band.
    """
    offsets = np.arange(nodes, dtype=float) - pos
    vander = np.vander(offsets, nodes, increasing=True).T
    rhs = np.zeros(nodes)
    rhs[1] = 1.0
    return np.linalg.solve(vander, rhs)


def diff_matrix(n: int, h: float) -> np.ndarray:
    """Differentiation matrix on n uniform nodes with spacing h.

    Central 4th-order five-point stencils in the interior, one-sided
    stencils (7 nodes, 6th order) on the two-node boundary bands.
    """
    if n < 7:
        raise ValueError("grid too small")
    key = (n, float(h))
    cached = _DIFF_CACHE.get(key)
    if cached is not None:
        return cached
    d = np.zeros((n, n))
    for i in range(2, n - 2):
        d[i, i - 2 : i + 3] = _CENTRAL
    for i in (0, 1):
        d[i, 0:7] = _onesided_weights(i)
        d[n - 1 - i, n - 7 :] = -_onesided_weights(i)[::-1]
    d /= h
    _DIFF_CACHE[key] = d
    return d


def _apply_axis0(d, f):
    return np.tensordot(d, f, axes=(1, 0))


def _apply_axis1(d, f):
    out = np.tensordot(d, f, axes=(1, 1))
    return np.moveaxis(out, 0, 1)


def _ambient_dot(model: str, a, b):
    """Ambient product of the model space; bilinear, broadcasts."""
    if model == "h3":
        return (a[..., :3] * b[..., :3]).sum(axis=-1) - a[..., 3] * b[..., 3]
    return (a * b).sum(axis=-1)


def _cross3(a, b):
    return np.cross(a, b)


def _cross4(a, b, c):
    """Euclidean generalized cross product of R^4: <w,t> = det[a,b,c,t]."""
    w = np.zeros(a.shape)
    idx = [0, 1, 2, 3]
    for i in range(4):
        rest = idx[:i] + idx[i + 1 :]
        m = np.stack(
            [a[..., rest], b[..., rest], c[..., rest]], axis=-2
        )  # rows a,b,c with column i removed -> minor of column block
        det3 = (
            m[..., 0, 0] * (m[..., 1, 1] * m[..., 2, 2] - m[..., 1, 2] * m[..., 2, 1])
            - m[..., 0, 1] * (m[..., 1, 0] * m[..., 2, 2] - m[..., 1, 2] * m[..., 2, 0])
            + m[..., 0, 2] * (m[..., 1, 0] * m[..., 2, 1] - m[..., 1, 1] * m[..., 2, 0])
        )
        # cofactor of entry (i, 3) in the matrix with columns [a, b, c, t]
        w[..., i] = ((-1) ** (i + 3)) * det3
    return w


def _cross4_lorentz(a, b, c):
    """Lorentzian cross of R^{3,1}: <w,t>_{3,1} = det[a,b,c,t]."""
    w = _cross4(a, b, c)
    w[..., 3] = -w[..., 3]
    return w


@dataclass
class ChartGrid:
    """Rectangular sample grid over a conformal chart with analytic 2-jets."""

    model: str
    u: np.ndarray
    v: np.ndarray
    jet: Jet2
    conf_tol: float = 1e-8
    imm_eps: float = 1e-12

    def __post_init__(self):
        if len(self.u) < MIN_GRID or len(self.v) < MIN_GRID:
            raise ValueError("grid too small")
        if self.model not in ("r3", "s3", "h3"):
            raise ValueError(f"unknown model {self.model!r}")
        self.hu = float(self.u[1] - self.u[0])
        self.hv = float(self.v[1] - self.v[0])
        pz, pzb = self.pos_z, self.pos_zb
        dot_zz = self._dot(pz, pz)
        dot_zzb = self._dot(pz, pzb).real
        if np.any(dot_zzb <= self.imm_eps):
            raise ValueError("degenerate jet: immersion condition fails")
        if np.any(np.abs(dot_zz) > self.conf_tol * dot_zzb):
            raise ValueError("chart is not conformal within tolerance")

    # -- complex jets -------------------------------------------------
    def _dot(self, a, b):
        return _ambient_dot(self.model, a, b)

    @property
    def shape(self):
        return self.jet.pos.shape[:2]

    @property
    def pos(self):
        return self.jet.pos

    @property
    def pos_z(self):
        return (self.jet.du - 1j * self.jet.dv) / 2.0

    @property
    def pos_zb(self):
        return (self.jet.du + 1j * self.jet.dv) / 2.0

    @property
    def pos_zz(self):
        return (self.jet.duu - self.jet.dvv - 2j * self.jet.duv) / 4.0

    @property
    def pos_zzb(self):
        return (self.jet.duu + self.jet.dvv) / 4.0

    # -- stencil derivatives ------------------------------------------
    def d_u(self, f):
        return _apply_axis0(diff_matrix(len(self.u), self.hu), np.asarray(f))

    def d_v(self, f):
        return _apply_axis1(diff_matrix(len(self.v), self.hv), np.asarray(f))

    def dz(self, f):
        """Discrete d/dz = (d/du - i d/dv)/2 of a sampled field."""
        f = np.asarray(f)
        return (self.d_u(f) - 1j * self.d_v(f)) / 2.0

    def dzbar(self, f):
        """Discrete d/dzbar = (d/du + i d/dv)/2 of a sampled field."""
        f = np.asarray(f)
        return (self.d_u(f) + 1j * self.d_v(f)) / 2.0


def interior_max(f, band: int = 2) -> float:
    """Max norm over the grid interior, excluding the boundary band.

    Vector fields are reduced by the euclidean norm of the components.
    """
    f = np.asarray(f)
    if f.ndim > 2:
        f = np.sqrt((np.abs(f) ** 2).sum(axis=tuple(range(2, f.ndim))))
    return float(np.max(np.abs(f[band:-band, band:-band])))


@dataclass
class FundamentalData:
    """Per-node (lam, n, H, Omega) of a chart grid in its tagged model."""

    model: str
    grid: ChartGrid
    lam: np.ndarray
    n: np.ndarray
    H: np.ndarray
    Omega: np.ndarray

    @property
    def e2lam(self):
        return np.exp(2.0 * self.lam)

    @property
    def umbilic_mask(self):
        return np.abs(self.Omega) <= UMBILIC_REL_TOL * self.e2lam

    def has_umbilic(self, band: int = 2) -> bool:
        return bool(np.any(self.umbilic_mask[band:-band, band:-band]))

    def tracefree_form(self):
        """Real-notation tracefree second fundamental form (A11, A12)."""
        e = np.exp(-2.0 * self.lam)
        return self.Omega.real * e, -self.Omega.imag * e


def fundamental_data(grid: ChartGrid) -> FundamentalData:
    """Extract (lam, n, H, Omega) from the analytic 2-jets of a grid."""
    pz, pzb = grid.pos_z, grid.pos_zb
    pzz, pzzb = grid.pos_zz, grid.pos_zzb
    dot_zzb = grid._dot(pz, pzb).real  # = e^{2 lam} / 2
    lam = 0.5 * np.log(2.0 * dot_zzb)

    if grid.model == "r3":
        n = _cross3(pz, pzb) / (1j * dot_zzb[..., None])
        n = n.real
    elif grid.model == "s3":
        w = _cross4(grid.pos, grid.jet.du, grid.jet.dv)
        n = w / np.sqrt((w * w).sum(axis=-1))[..., None]
    else:
        w = _cross4_lorentz(grid.pos, grid.jet.du, grid.jet.dv)
        norm2 = _ambient_dot("h3", w, w)
        if np.any(norm2 <= 0.0):
            raise ValueError("degenerate jet: normal is not spacelike")
        n = w / np.sqrt(norm2)[..., None]

    h_field = grid._dot(pzzb, n.astype(complex)).real / dot_zzb
    omega = 2.0 * grid._dot(pzz, n.astype(complex))
    return FundamentalData(grid.model, grid, lam, n, h_field, omega)


def gauss_codazzi_residual(data: FundamentalData) -> np.ndarray:
    """Residual field of Omega_zbar e^{-2 lam} - H_z."""
    g = data.grid
    return g.dzbar(data.Omega) * np.exp(-2.0 * data.lam) - g.dz(data.H)


def structure_residuals(grid: ChartGrid, data: FundamentalData) -> float:
    """Max interior residual of the three structure equations.

    n_z = -H p_z - Omega e^{-2lam} p_zbar,
    p_zzbar = H (e^{2lam}/2) n  (+/- the ambient term on S^3 / H^3),
    p_zz = 2 lam_z p_z + (Omega/2) n.
    """
    pz, pzb = grid.pos_z, grid.pos_zb
    e2l = data.e2lam
    nc = data.n.astype(complex)

    n_z = grid.dz(data.n)
    r1 = n_z + data.H[..., None] * pz + (data.Omega * np.exp(-2.0 * data.lam))[..., None] * pzb

    r2 = grid.pos_zzb - (data.H * e2l / 2.0)[..., None] * nc
    if grid.model == "s3":
        r2 = r2 + (e2l / 2.0)[..., None] * grid.pos
    elif grid.model == "h3":
        r2 = r2 - (e2l / 2.0)[..., None] * grid.pos

    lam_z = grid.dz(data.lam)
    r3 = grid.pos_zz - 2.0 * lam_z[..., None] * pz - (data.Omega / 2.0)[..., None] * nc

    return max(interior_max(r1), interior_max(r2), interior_max(r3))


def export_csv(path, grid: ChartGrid, fields: dict) -> None:
    """Write per-node fields as CSV with header row u,v,<components...>."""
    uu, vv = np.meshgrid(grid.u, grid.v, indexing="ij")
    cols = [uu.ravel(), vv.ravel()]
    names = ["u", "v"]
    for name, f in fields.items():
        f = np.asarray(f)
        if f.ndim == 2:
            comps = [(name, f)]
        else:
            comps = [(f"{name}{k + 1}", f[..., k]) for k in range(f.shape[-1])]
        for cname, comp in comps:
            if np.iscomplexobj(comp):
                cols += [comp.real.ravel(), comp.imag.ravel()]
                names += [f"{cname}_re", f"{cname}_im"]
            else:
                cols += [comp.ravel()]
                names += [cname]
    data = np.column_stack(cols)
    header = ",".join(names)
    np.savetxt(path, data, delimiter=",", header=header, comments="", fmt="%.17g")
