"""Local model of a minimal surface in a conformal chart.

Metric e^{2u}|dz|^2, Hopf differential q dz^2.  In the special unitary
frame the associated family is alpha = alpha_z dz + alpha_zbar dzbar with

    alpha_z    = [[ u_z/2,            e^u/zeta ],
                  [ -(i/2) e^{-u} q,  -u_z/2   ]]
    alpha_zbar = [[ -u_zbar/2,  -(i/2) e^{-u} conj(q) ],
                  [ -zeta e^u,  u_zbar/2              ]]

Hodge star convention: *dz = -i dz, *dzbar = i dzbar.  With this sign the
form is flat exactly when q is holomorphic and
u_{z zbar} = -e^{2u} + |q|^2 e^{-2u}/4, and alpha_zbar = -alpha_z^+ on |zeta| = 1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import GridTooSmall, NonFinite, ZeroZeta
from .linalg import Mat2


@dataclass(frozen=True)
class ChartData:
    """Samples on a square grid; row index is y, column index is x."""

    x0: float
    y0: float
    h: float
    u: np.ndarray
    q: np.ndarray

    def __post_init__(self):
        u = np.asarray(self.u, dtype=float)
        q = np.asarray(self.q, dtype=complex)
        if u.shape != q.shape or u.ndim != 2:
            raise ValueError("u and q must be 2-d arrays of the same shape")
        if not 1e-4 <= self.h <= 0.5:
            raise ValueError(f"grid spacing must lie in [1e-4, 0.5], got {self.h}")
        if not (np.all(np.isfinite(u)) and np.all(np.isfinite(q))):
            raise NonFinite("u and q must be finite on the grid")
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "q", q)

    @classmethod
    def from_functions(cls, u_fn, q_fn, n: int, h: float, center: complex = 0j) -> "ChartData":
        """n x n grid of spacing h centred at ``center``; u_fn, q_fn take complex z arrays."""
        off = (n - 1) * h / 2
        x0, y0 = center.real - off, center.imag - off
        z = cls.nodes_for(x0, y0, h, n, n)
        u = np.broadcast_to(np.asarray(u_fn(z), dtype=float), z.shape).copy()
        q = np.broadcast_to(np.asarray(q_fn(z), dtype=complex), z.shape).copy()
        return cls(x0, y0, h, u, q)

    @classmethod
    def constant(cls, u: float, q: complex, n: int, h: float) -> "ChartData":
        return cls.from_functions(lambda z: u, lambda z: q, n, h)

    @staticmethod
    def nodes_for(x0, y0, h, ny, nx) -> np.ndarray:
        xs = x0 + h * np.arange(nx)
        ys = y0 + h * np.arange(ny)
        return xs[None, :] + 1j * ys[:, None]

    @property
    def shape(self):
        return self.u.shape

    def nodes(self) -> np.ndarray:
        return self.nodes_for(self.x0, self.y0, self.h, *self.shape)


def _wirtinger(f: np.ndarray, h: float):
    """(f_z, f_zbar) by second-order differences (one-sided at the border)."""
    fy, fx = np.gradient(f, h, edge_order=2)
    return (fx - 1j * fy) / 2, (fx + 1j * fy) / 2


def _need(data: ChartData, m: int):
    if min(data.shape) < m:
        raise GridTooSmall(f"grid {data.shape} smaller than {m}x{m}")


def assemble_family(data: ChartData, zeta):
    """Coefficient arrays (alpha_z, alpha_zbar), each of shape (ny, nx, 2, 2)."""
    zeta = complex(zeta)
    if zeta == 0:
        raise ZeroZeta("zeta must be nonzero")
    _need(data, 3)
    u, q = data.u, data.q
    uz, uzb = _wirtinger(u.astype(complex), data.h)
    eu, emu = np.exp(u), np.exp(-u)
    az = np.empty(u.shape + (2, 2), complex)
    azb = np.empty_like(az)
    az[..., 0, 0] = uz / 2
    az[..., 0, 1] = eu / zeta
    az[..., 1, 0] = -0.5j * emu * q
    az[..., 1, 1] = -uz / 2
    azb[..., 0, 0] = -uzb / 2
    azb[..., 0, 1] = -0.5j * emu * np.conj(q)
    azb[..., 1, 0] = -zeta * eu
    azb[..., 1, 1] = uzb / 2
    return az, azb


def sample_at(data: ChartData, zeta, i: int, j: int):
    """(alpha_dz, alpha_dzbar) at node (row i, column j) as Mat2."""
    az, azb = assemble_family(data, zeta)
    return Mat2.from_array(az[i, j]), Mat2.from_array(azb[i, j])


def higgs_block(data: ChartData) -> np.ndarray:
    """zeta^-1 coefficient of alpha_z (the Higgs field); nilpotent by construction."""
    phi = np.zeros(data.shape + (2, 2), complex)
    phi[..., 0, 1] = np.exp(data.u)
    return phi


def curvature_field(data: ChartData, zeta) -> np.ndarray:
    """dz^dzbar coefficient d alpha_zbar/dz - d alpha_z/dzbar + [alpha_z, alpha_zbar].

    Evaluated at nodes two or more steps from the border, so that every
    difference quotient involved is central (second order).
    """
    _need(data, 5)
    az, azb = assemble_family(data, zeta)
    h = data.h
    dx = lambda f: (f[2:-2, 3:-1] - f[2:-2, 1:-3]) / (2 * h)
    dy = lambda f: (f[3:-1, 2:-2] - f[1:-3, 2:-2]) / (2 * h)
    d_z_azb = (dx(azb) - 1j * dy(azb)) / 2
    d_zb_az = (dx(az) + 1j * dy(az)) / 2
    a, b = az[2:-2, 2:-2], azb[2:-2, 2:-2]
    return d_z_azb - d_zb_az + a @ b - b @ a


def flatness_defect(data: ChartData, zeta) -> float:
    F = curvature_field(data, zeta)
    return float(np.max(np.linalg.norm(F, axis=(-2, -1))))


def holomorphy_defect(data: ChartData) -> float:
    """max |dq/dzbar| over interior nodes."""
    _need(data, 3)
    q, h = data.q, data.h
    qx = (q[1:-1, 2:] - q[1:-1, :-2]) / (2 * h)
    qy = (q[2:, 1:-1] - q[:-2, 1:-1]) / (2 * h)
    return float(np.max(np.abs((qx + 1j * qy) / 2)))


def unitarity_defect(data: ChartData, zeta) -> float:
    """max ||alpha_zbar + alpha_z^+||_F; vanishes for |zeta| = 1."""
    az, azb = assemble_family(data, zeta)
    diff = azb + np.conj(np.swapaxes(az, -1, -2))
    return float(np.max(np.linalg.norm(diff, axis=(-2, -1))))


def richardson_ratio(u_fn, q_fn, zeta, n: int = 11, h: float = 0.1, center: complex = 0j) -> float:
    """Convergence ratio of the discrete curvature under halving of h.

    Grids with spacings h, h/2, h/4 cover the same square; on the coarse
    nodes where the curvature is evaluated ||F_h - F_{h/2}|| / ||F_{h/2} - F_{h/4}|| tends to 4 for a
    second-order scheme.
    """
    fields = []
    for level in range(3):
        m = 2 ** level
        d = ChartData.from_functions(u_fn, q_fn, m * (n - 1) + 1, h / m, center)
        F = curvature_field(d, zeta)
        # coarse node i >= 2 sits at fine index m*i, i.e. F index m*i - 2
        fields.append(F[2 * m - 2::m, 2 * m - 2::m][: n - 4, : n - 4])
    e1 = np.max(np.abs(fields[0] - fields[1]))
    e2 = np.max(np.abs(fields[1] - fields[2]))
    return float(e1 / e2)
