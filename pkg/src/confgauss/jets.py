"""Order-2 jets of chart maps and their analytic pushforwards.

A ``Jet2`` carries position and derivatives up to order two of a map from
a planar chart (u, v) into an ambient R^d.  Pushforwards through the model
projections and through Moebius generators are done by the exact chain
rule, so transformed surfaces keep analytic (non-differenced) jets.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .lorentz import Generator, axis_angle_matrix

__all__ = [
    "Jet2",
    "push_affine",
    "push_map",
    "push_inversion",
    "push_stereo",
    "push_stereo_inv",
    "push_hyper",
    "push_hyper_inv",
    "push_generator",
    "push_word",
]


@dataclass
class Jet2:
    """2-jet of a chart map: value and derivatives, arrays (..., d)."""

    pos: np.ndarray
    du: np.ndarray
    dv: np.ndarray
    duu: np.ndarray
    duv: np.ndarray
    dvv: np.ndarray

    @property
    def dim(self) -> int:
        return self.pos.shape[-1]

    def copy(self) -> "Jet2":
        return Jet2(*(a.copy() for a in
                      (self.pos, self.du, self.dv, self.duu, self.duv, self.dvv)))


def push_affine(jet: Jet2, a: np.ndarray, b=None) -> Jet2:
    """Pushforward through x -> a x + b (a: (d_out, d_in))."""
    a = np.asarray(a, dtype=float)
    out = Jet2(
        jet.pos @ a.T,
        jet.du @ a.T,
        jet.dv @ a.T,
        jet.duu @ a.T,
        jet.duv @ a.T,
        jet.dvv @ a.T,
    )
    if b is not None:
        out.pos = out.pos + np.asarray(b, dtype=float)
    return out


def push_map(jet: Jet2, value_jac_hess) -> Jet2:
    """Pushforward through a map given by (F, J, H) at the jet positions.

    ``value_jac_hess(pos)`` must return F (..., m), the Jacobian J
    (..., m, d) and the Hessian H (..., m, d, d).
    """
    f, jac, hess = value_jac_hess(jet.pos)

    def first(t):
        return np.einsum("...md,...d->...m", jac, t)

    def second(t1, t2, t12):
        quad = np.einsum("...mde,...d,...e->...m", hess, t1, t2)
        return quad + first(t12)

    return Jet2(
        f,
        first(jet.du),
        first(jet.dv),
        second(jet.du, jet.du, jet.duu),
        second(jet.du, jet.dv, jet.duv),
        second(jet.dv, jet.dv, jet.dvv),
    )


def _inversion_vjh(x):
    d = x.shape[-1]
    rr = (x * x).sum(axis=-1)  # (...)
    f = x / rr[..., None]
    eye = np.eye(d)
    jac = (
        eye / rr[..., None, None]
        - 2.0 * x[..., :, None] * x[..., None, :] / (rr ** 2)[..., None, None]
    )
    # H[i,j,k] = -2 (x_k d_ij + x_j d_ik + x_i d_jk) / r^4 + 8 x_i x_j x_k / r^6
    xi = x[..., :, None, None]
    xj = x[..., None, :, None]
    xk = x[..., None, None, :]
    dij = eye[:, :, None]
    dik = eye[:, None, :]
    djk = eye[None, :, :]
    r4 = (rr ** 2)[..., None, None, None]
    r6 = (rr ** 3)[..., None, None, None]
    hess = -2.0 * (xk * dij + xj * dik + xi * djk) / r4 + 8.0 * xi * xj * xk / r6
    return f, jac, hess


def push_inversion(jet: Jet2) -> Jet2:
    """Pushforward through the inversion x -> x/|x|^2 of R^3."""
    if np.any((jet.pos * jet.pos).sum(axis=-1) < 1e-24):
        raise ValueError("inversion center on surface")
    return push_map(jet, _inversion_vjh)


def _stereo_inv_vjh(x):
    # F = (2x, r^2-1) / (1+r^2)
    r2 = (x * x).sum(axis=-1)[..., None]
    g = 1.0 / (1.0 + r2)
    shape = x.shape[:-1]
    f = np.concatenate([2.0 * x * g, 1.0 - 2.0 * g], axis=-1)
    gj = -2.0 * x * g ** 2  # dg/dx_j
    gjk = (
        -2.0 * np.broadcast_to(np.eye(3), shape + (3, 3)) * (g ** 2)[..., None]
        + 8.0 * x[..., :, None] * x[..., None, :] * (g ** 3)[..., None]
    )
    jac = np.zeros(shape + (4, 3))
    hess = np.zeros(shape + (4, 3, 3))
    eye = np.broadcast_to(np.eye(3), shape + (3, 3))
    jac[..., :3, :] = 2.0 * eye * g[..., None] + 2.0 * x[..., :, None] * gj[..., None, :]
    jac[..., 3, :] = -2.0 * gj
    hess[..., :3, :, :] = (
        2.0 * eye[..., :, :, None] * gj[..., None, None, :]
        + 2.0 * eye[..., :, None, :] * gj[..., None, :, None]
        + 2.0 * x[..., :, None, None] * gjk[..., None, :, :]
    )
    hess[..., 3, :, :] = -2.0 * gjk
    return f, jac, hess


def push_stereo_inv(jet: Jet2) -> Jet2:
    """Pushforward through the inverse stereographic projection R^3 -> S^3."""
    return push_map(jet, _stereo_inv_vjh)


def _stereo_vjh(x):
    # F = (x1, x2, x3) / (1 - t)
    t = x[..., 3:4]
    g = 1.0 / (1.0 - t)
    shape = x.shape[:-1]
    f = x[..., :3] * g
    jac = np.zeros(shape + (3, 4))
    hess = np.zeros(shape + (3, 4, 4))
    eye = np.broadcast_to(np.eye(3), shape + (3, 3))
    jac[..., :, :3] = eye * g[..., None]
    jac[..., :, 3] = x[..., :3] * g ** 2
    hess[..., :, :3, 3] = eye * (g ** 2)[..., None]
    hess[..., :, 3, :3] = eye * (g ** 2)[..., None]
    hess[..., :, 3, 3] = 2.0 * x[..., :3] * g ** 3
    return f, jac, hess


def push_stereo(jet: Jet2) -> Jet2:
    """Pushforward through the stereographic projection S^3 -> R^3."""
    if np.any(jet.pos[..., 3] > 1.0 - 1e-10):
        raise ValueError("chart meets the north pole")
    return push_map(jet, _stereo_vjh)


def _hyper_vjh(z):
    # F = (z1, z2, z3) / (1 + t)
    t = z[..., 3:4]
    g = 1.0 / (1.0 + t)
    shape = z.shape[:-1]
    f = z[..., :3] * g
    jac = np.zeros(shape + (3, 4))
    hess = np.zeros(shape + (3, 4, 4))
    eye = np.broadcast_to(np.eye(3), shape + (3, 3))
    jac[..., :, :3] = eye * g[..., None]
    jac[..., :, 3] = -z[..., :3] * g ** 2
    hess[..., :, :3, 3] = -eye * (g ** 2)[..., None]
    hess[..., :, 3, :3] = -eye * (g ** 2)[..., None]
    hess[..., :, 3, 3] = 2.0 * z[..., :3] * g ** 3
    return f, jac, hess


def push_hyper(jet: Jet2) -> Jet2:
    """Pushforward through the hyperbolic projection H^3 -> B_1(0)."""
    return push_map(jet, _hyper_vjh)


def _hyper_inv_vjh(x):
    # F = (2x, r^2+1) / (1-r^2)
    r2 = (x * x).sum(axis=-1)[..., None]
    g = 1.0 / (1.0 - r2)
    shape = x.shape[:-1]
    f = np.concatenate([2.0 * x * g, 2.0 * g - 1.0], axis=-1)
    gj = 2.0 * x * g ** 2
    gjk = (
        2.0 * np.broadcast_to(np.eye(3), shape + (3, 3)) * (g ** 2)[..., None]
        + 8.0 * x[..., :, None] * x[..., None, :] * (g ** 3)[..., None]
    )
    jac = np.zeros(shape + (4, 3))
    hess = np.zeros(shape + (4, 3, 3))
    eye = np.broadcast_to(np.eye(3), shape + (3, 3))
    jac[..., :3, :] = 2.0 * eye * g[..., None] + 2.0 * x[..., :, None] * gj[..., None, :]
    jac[..., 3, :] = 2.0 * gj
    hess[..., :3, :, :] = (
        2.0 * eye[..., :, :, None] * gj[..., None, None, :]
        + 2.0 * eye[..., :, None, :] * gj[..., None, :, None]
        + 2.0 * x[..., :, None, None] * gjk[..., None, :, :]
    )
    hess[..., 3, :, :] = 2.0 * gjk
    return f, jac, hess


def push_hyper_inv(jet: Jet2) -> Jet2:
    """Pushforward through the inverse hyperbolic projection B_1(0) -> H^3."""
    if np.any((jet.pos * jet.pos).sum(axis=-1) >= 1.0):
        raise ValueError("chart leaves the Poincare ball")
    return push_map(jet, _hyper_inv_vjh)


def push_generator(jet: Jet2, gen: Generator) -> Jet2:
    """Pushforward of an R^3 chart jet through one Moebius generator."""
    if gen.kind == "dil":
        return push_affine(jet, np.exp(gen.param[0]) * np.eye(3))
    if gen.kind == "rot":
        theta = axis_angle_matrix(gen.param[:3], gen.param[3])
        return push_affine(jet, theta)
    if gen.kind == "tra":
        return push_affine(jet, np.eye(3), np.asarray(gen.param, dtype=float))
    if gen.kind == "inv":
        return push_inversion(jet)
    raise ValueError(f"unknown generator kind {gen.kind!r}")


def push_word(jet: Jet2, word) -> Jet2:
    """Pushforward through a generator word, applied left-to-right."""
    out = jet
    for gen in word:
        out = push_generator(out, gen)
    return out
