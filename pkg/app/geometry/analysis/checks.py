"""
Numerical certificates for structural statements about DC systems
"""

import logging
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from app.core.tolerance import Tolerance, resolve
from app.geometry.qb import DCCube, DCPatch, ParamLike, angle_chart, as_projective, sample, slice_patch, sphere_image, to_points
from app.geometry.quat import MSphere, Quaternion

logger = logging.getLogger(__name__)


def involution_check(patch: DCPatch, a: float, samples: int = 200, seed: int = 0,
                     tol: Optional[Tolerance] = None) -> Optional[bool]:
    """F(s, t) == F(1/(a s), -1/(a t)) on random samples of a 2-polar planar system.

    Returns None for a = 0, where the map is not an involution.
    """
    tol = resolve(tol)
    if a == 0.0:
        logger.info("involution check skipped for the Cartesian grid (a = 0)")
        return None
    rng = np.random.default_rng(seed)
    alpha = rng.uniform(0.0, np.pi, size=(samples, 2))
    s = angle_chart(alpha[:, 0])
    t = angle_chart(alpha[:, 1])
    # (n, d) -> (d, a n) is 1/(a x); (n, d) -> (-d, a n) is -1/(a x)
    s_inv = np.stack([s[:, 1], a * s[:, 0]], axis=-1)
    t_inv = np.stack([-t[:, 1], a * t[:, 0]], axis=-1)
    first = sphere_image(*sample(patch, s, t))
    second = sphere_image(*sample(patch, s_inv, t_inv))
    gap = float(np.max(np.linalg.norm(first - second, axis=-1)))
    logger.debug("involution gap %.3e", gap)
    return gap <= tol.sample


def slice_carrier(D: DCCube, direction: Union[int, str], value: ParamLike,
                  count: int = 12) -> MSphere:
    """Least-squares M-sphere of a sampled slice."""
    grid = np.linspace(0.05, np.pi - 0.05, count)
    a, b = np.meshgrid(grid, grid + 0.013)
    patch = slice_patch(D, direction, as_projective(value))
    pts, finite = to_points(*sample(patch, angle_chart(a.ravel()), angle_chart(b.ravel())))
    pts = pts[finite]
    pts = pts[np.linalg.norm(pts, axis=1) <= 1e4]
    sphere, _, _ = MSphere.fit([Quaternion.from_vector(p) for p in pts])
    return sphere


def same_carrier(D: DCCube, direction: Union[int, str], first: ParamLike, second: ParamLike,
                 tol: Optional[Tolerance] = None) -> bool:
    """Two slices of one direction lie on the same M-sphere (a double cover of it)."""
    tol = resolve(tol)
    a = slice_carrier(D, direction, first).vector
    b = slice_carrier(D, direction, second).vector
    return bool(min(np.linalg.norm(a - b), np.linalg.norm(a + b)) <= tol.sample)


# Discriminants of the general cube

@dataclass
class DiscriminantReport:
    ds: float
    dt: float
    du: float
    in_a_slab: bool
    in_b_slab: bool
    in_c_slab: bool

    @property
    def positive(self) -> int:
        return sum(v > 0.0 for v in (self.ds, self.dt, self.du))

    @property
    def signs(self):
        return tuple(int(np.sign(v)) for v in (self.ds, self.dt, self.du))


def discriminants(g, h, a, b, c):
    """(ds, dt, du) of the spherical polynomials of the general cube, vectorized."""
    eta = g * g + h * h
    du = (eta * (1 - b - a) - a + 1) ** 2 + 4 * eta * b
    ds = (eta * (1 - b) - c) ** 2 + 4 * g * g * c
    dt = (eta * a + c + a - 1) ** 2 + 4 * h * h * (1 - c)
    return ds, dt, du


def discriminant_region(g: float, h: float, a: float, b: float, c: float) -> DiscriminantReport:
    eta = g * g + h * h
    ds, dt, du = discriminants(g, h, a, b, c)
    return DiscriminantReport(
        ds=float(ds),
        dt=float(dt),
        du=float(du),
        in_a_slab=h * h / (eta + 1) <= a <= eta / (eta + 1),
        in_b_slab=0.0 <= b <= h * h / eta,
        in_c_slab=0.0 <= c <= 1.0,
    )


@dataclass
class DiscriminantSweep:
    samples: int
    all_negative: int
    two_negative: int
    misplaced: int


def discriminant_sweep(samples: int = 100_000, seed: int = 0, spread: float = 3.0) -> DiscriminantSweep:
    """Random (g, h, a, b, c): count samples breaking the at-least-two-positive rule.

    A negative discriminant must put the sample on the far side of the slab
    separating its cylinder from the others: du < 0 needs b < 0 and
    a >= eta/(eta+1), ds < 0 needs c < 0 and b >= h^2/eta, dt < 0 needs c > 1
    and a <= h^2/(eta+1). ``misplaced`` counts violations of that.
    """
    rng = np.random.default_rng(seed)
    g, h, a, b, c = rng.uniform(-spread, spread, size=(5, samples))
    eta = g * g + h * h
    ds, dt, du = discriminants(g, h, a, b, c)
    negative = (ds < 0).astype(int) + (dt < 0).astype(int) + (du < 0).astype(int)
    bad_u = (du < 0) & ~((b < 0) & (a >= eta / (eta + 1)))
    bad_s = (ds < 0) & ~((c < 0) & (b >= h * h / eta))
    bad_t = (dt < 0) & ~((c > 1) & (a <= h * h / (eta + 1)))
    sweep = DiscriminantSweep(
        samples=samples,
        all_negative=int(np.sum(negative == 3)),
        two_negative=int(np.sum(negative == 2)),
        misplaced=int(np.sum(bad_u | bad_s | bad_t)),
    )
    logger.info("discriminant sweep %s", sweep)
    return sweep
