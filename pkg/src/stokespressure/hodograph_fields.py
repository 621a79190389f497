"""Physical-space flow fields reconstructed from the strip representation.

Everything downstream of the solver lives here: velocity, pressure, the
pressure gradient, the surface comparison function f = (c - u) v - g x, the
free-surface profile, and sampling grids. The bridge is the hodograph
dictionary: with D = h_q^2 + h_p^2,

    c - u = h_p / D,   v = -h_q / D,
    d/dx  = (c - u) d/dq + v d/dp,   d/dy = -v d/dq + (c - u) d/dp,

so every physical derivative reduces to strip derivatives of the series.
The pressure gradient is computed along the momentum-balance route
(P_x = (c-u) u_x - v u_y, P_y = -g + (c-u) v_x - v v_y) and cross-checked
against the algebraically equivalent shortcut P_x = u_q / D.

Near the limiting wave the crest approaches a stagnation point, D blows up
and pointwise values within a small disc around the crest stop being
certifiable; such points are excluded rather than reported. Exclusion is
active only when the crest indicator drops below the configured threshold.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .wave_model import (
    ConformalSolution,
    InvalidConfig,
    StripPoint,
    WaveConfig,
    crest_indicator,
    eval_conformal_jet,
    eval_jet_grid,
    _jet_unchecked,
)

__all__ = [
    "StagnationProximity",
    "FieldSample",
    "SurfaceProfile",
    "FieldGrid",
    "velocity",
    "velocity_gradients",
    "pressure",
    "pressure_gradient",
    "f_field",
    "field_sample",
    "surface",
    "surface_curvature",
    "grid_fields",
    "physical_grid",
    "invert_position",
]

_DEFAULT = WaveConfig()


class StagnationProximity(RuntimeError):
    """Point refused: inside the excision disc of a near-extreme crest."""


@dataclass(frozen=True)
class FieldSample:
    """All reconstructed quantities at one strip point."""

    q: float
    p: float
    x: float
    y: float
    u: float
    v: float
    P: float
    f: float
    P_x: float
    P_y: float
    excluded: bool


@dataclass(frozen=True)
class SurfaceProfile:
    """One half-period of the free surface, crest (x = 0) to trough (x = pi)."""

    q: np.ndarray
    x: np.ndarray
    eta: np.ndarray
    slope: np.ndarray  # d eta / dx at the samples


def _wrap_to_crest(q: np.ndarray | float, period: float):
    """Signed distance in q to the nearest crest (q = 0 mod period)."""
    return q - period * np.round(np.asarray(q, dtype=float) / period)


def _exclusion_mask(sol, q, p, cfg):
    if cfg.excision_radius <= 0.0:
        return np.zeros(np.broadcast(q, p).shape, dtype=bool)
    if crest_indicator(sol) >= cfg.crest_indicator_threshold:
        return np.zeros(np.broadcast(q, p).shape, dtype=bool)
    dq = _wrap_to_crest(q, sol.period_q)
    return np.hypot(dq, p) < cfg.excision_radius


def _guard(sol: ConformalSolution, pt: StripPoint, cfg: WaveConfig) -> None:
    if bool(_exclusion_mask(sol, pt.q, pt.p, cfg)):
        raise StagnationProximity(
            f"point ({pt.q:.6g}, {pt.p:.6g}) lies within the excision disc "
            f"of a near-stagnation crest")


def _first_order(h_q, h_p):
    d = h_q * h_q + h_p * h_p
    return d, h_p / d, -h_q / d  # D, c - u, v


def _gradients(h_q, h_p, h_qq, h_qp, h_pp, c, g):
    """Velocity and pressure gradients from the jet; scalar or array inputs.

    Returns a dict with u_q, u_p, v_q, v_p (strip derivatives of the velocity
    components), u_x .. v_y (physical derivatives), both pressure-gradient
    routes, and the first-order quantities.
    """
    d, cmu, v = _first_order(h_q, h_p)
    d_q = 2.0 * (h_q * h_qq + h_p * h_qp)
    d_p = 2.0 * (h_q * h_qp + h_p * h_pp)
    dd = d * d
    u_q = (h_p * d_q - h_qp * d) / dd
    u_p = (h_p * d_p - h_pp * d) / dd
    v_q = (h_q * d_q - h_qq * d) / dd
    v_p = (h_q * d_p - h_qp * d) / dd
    u_x = cmu * u_q + v * u_p
    u_y = -v * u_q + cmu * u_p
    v_x = cmu * v_q + v * v_p
    v_y = -v * v_q + cmu * v_p
    return {
        "D": d, "cmu": cmu, "v": v,
        "u_q": u_q, "u_p": u_p, "v_q": v_q, "v_p": v_p,
        "u_x": u_x, "u_y": u_y, "v_x": v_x, "v_y": v_y,
        "P_x": cmu * u_x - v * u_y,
        "P_x_alt": u_q / d,
        "P_y": -g + cmu * v_x - v * v_y,
    }


def velocity(sol: ConformalSolution, pt: StripPoint,
             cfg: WaveConfig | None = None) -> tuple[float, float]:
    """Velocity (u, v) in the moving frame at a strip point."""
    cfg = cfg or _DEFAULT
    _guard(sol, pt, cfg)
    jet = eval_conformal_jet(sol, pt)
    _, cmu, v = _first_order(jet.h_q, jet.h_p)
    return (float(sol.c - cmu), float(v))


def velocity_gradients(sol: ConformalSolution, pt: StripPoint,
                       cfg: WaveConfig | None = None):
    """Physical velocity gradients (u_x, u_y, v_x, v_y) at a strip point."""
    cfg = cfg or _DEFAULT
    _guard(sol, pt, cfg)
    jet = eval_conformal_jet(sol, pt)
    grad = _gradients(jet.h_q, jet.h_p, jet.h_qq, jet.h_qp, jet.h_pp,
                      sol.c, sol.gravity)
    return tuple(float(grad[key]) for key in ("u_x", "u_y", "v_x", "v_y"))


def pressure(sol: ConformalSolution, pt: StripPoint,
             cfg: WaveConfig | None = None) -> float:
    """Fluid pressure at a strip point; equals surface_pressure on p = 0."""
    cfg = cfg or _DEFAULT
    _guard(sol, pt, cfg)
    jet = eval_conformal_jet(sol, pt)
    d = jet.h_q**2 + jet.h_p**2
    return float(sol.E + sol.surface_pressure - sol.gravity * jet.h
                 - 0.5 / d)


def pressure_gradient(sol: ConformalSolution, pt: StripPoint,
                      cfg: WaveConfig | None = None) -> tuple[float, float]:
    """Pressure gradient (P_x, P_y) at a strip point.

    Momentum-balance route, with the u_q / D shortcut for P_x evaluated as
    a consistency guard; the two are algebraically identical and must agree
    to rounding.
    """
    cfg = cfg or _DEFAULT
    _guard(sol, pt, cfg)
    jet = eval_conformal_jet(sol, pt)
    grad = _gradients(jet.h_q, jet.h_p, jet.h_qq, jet.h_qp, jet.h_pp,
                      sol.c, sol.gravity)
    p_x, p_alt = float(grad["P_x"]), float(grad["P_x_alt"])
    if abs(p_x - p_alt) > 1e-9 * (abs(p_x) + sol.gravity):
        raise ArithmeticError(
            f"pressure-gradient routes disagree at ({pt.q:.6g}, {pt.p:.6g}): "
            f"{p_x:.17g} vs {p_alt:.17g}")
    return (p_x, float(grad["P_y"]))


def f_field(sol: ConformalSolution, pt: StripPoint,
            cfg: WaveConfig | None = None) -> float:
    """Comparison function f = (c - u) v - g x.

    Harmonic in the physical variables; vanishes on the crest line and
    equals -g*pi on the trough line.
    """
    cfg = cfg or _DEFAULT
    _guard(sol, pt, cfg)
    jet = eval_conformal_jet(sol, pt)
    _, cmu, v = _first_order(jet.h_q, jet.h_p)
    return float(cmu * v - sol.gravity * jet.x)


def field_sample(sol: ConformalSolution, pt: StripPoint,
                 cfg: WaveConfig | None = None) -> FieldSample:
    """Every reconstructed quantity at one point (never raises on exclusion;
    the sample is flagged instead)."""
    cfg = cfg or _DEFAULT
    excluded = bool(_exclusion_mask(sol, pt.q, pt.p, cfg))
    jet = eval_conformal_jet(sol, pt)
    grad = _gradients(jet.h_q, jet.h_p, jet.h_qq, jet.h_qp, jet.h_pp,
                      sol.c, sol.gravity)
    d = grad["D"]
    return FieldSample(
        q=pt.q, p=pt.p, x=float(jet.x), y=float(jet.h),
        u=float(sol.c - grad["cmu"]), v=float(grad["v"]),
        P=float(sol.E + sol.surface_pressure - sol.gravity * jet.h - 0.5 / d),
        f=float(grad["cmu"] * grad["v"] - sol.gravity * jet.x),
        P_x=float(grad["P_x"]), P_y=float(grad["P_y"]),
        excluded=excluded,
    )


def surface(sol: ConformalSolution, m: int = 256,
            cfg: WaveConfig | None = None) -> SurfaceProfile:
    """Sample the free surface at m+1 equal strip angles over a half period.

    theta = q / c runs from 0 (crest) to pi (trough); x then runs over
    [0, pi] monotonically. The slope is d eta / dx = h_q / h_p evaluated on
    p = 0. When the near-stagnation exclusion is active, slopes of excluded
    samples are reported from the nearest included sample (the surface
    position itself stays finite and is always reported).
    """
    cfg = cfg or _DEFAULT
    if m < 16:
        raise ValueError("need at least 16 surface samples")
    theta = np.linspace(0.0, np.pi, m + 1)
    q = sol.c * theta
    jets = eval_jet_grid(sol, q, np.array([0.0]))
    eta = jets.h[0]
    slope = jets.h_q[0] / jets.h_p[0]
    excl = _exclusion_mask(sol, q, np.zeros_like(q), cfg)
    if excl.any() and not excl.all():
        inc = np.flatnonzero(~excl)
        for i in np.flatnonzero(excl):
            slope[i] = slope[inc[np.abs(inc - i).argmin()]]
    return SurfaceProfile(q=q, x=jets.x[0], eta=eta, slope=slope)


def surface_curvature(sol: ConformalSolution, m: int = 256) -> tuple[np.ndarray, np.ndarray]:
    """(x, eta_xx) at m+1 equal strip angles over the half period.

    Second derivative of the profile via the chain rule:
    eta_xx = (h_qq h_p - h_q h_qp) / h_p^3 on p = 0.
    """
    if m < 16:
        raise ValueError("need at least 16 surface samples")
    theta = np.linspace(0.0, np.pi, m + 1)
    jets = eval_jet_grid(sol, sol.c * theta, np.array([0.0]))
    h_q, h_p, h_qq, h_qp = jets.h_q[0], jets.h_p[0], jets.h_qq[0], jets.h_qp[0]
    return jets.x[0], (h_qq * h_p - h_q * h_qp) / h_p**3


@dataclass(frozen=True)
class FieldGrid:
    """Vectorized field arrays on a strip grid, shape (len(p), len(q)).

    Everything `FieldSample` carries plus the raw jet and the velocity
    gradients, for verification sweeps that need them wholesale.
    """

    q: np.ndarray
    p: np.ndarray
    x: np.ndarray
    y: np.ndarray
    u: np.ndarray
    v: np.ndarray
    P: np.ndarray
    f: np.ndarray
    P_x: np.ndarray
    P_x_alt: np.ndarray
    P_y: np.ndarray
    u_q: np.ndarray
    v_q: np.ndarray
    u_x: np.ndarray
    u_y: np.ndarray
    v_x: np.ndarray
    v_y: np.ndarray
    h_q: np.ndarray
    h_p: np.ndarray
    D: np.ndarray
    excluded: np.ndarray


def grid_fields(sol: ConformalSolution, q: np.ndarray, p: np.ndarray,
                cfg: WaveConfig | None = None) -> FieldGrid:
    """Evaluate all fields on the tensor grid q x p (vectorized fast path)."""
    cfg = cfg or _DEFAULT
    jets = eval_jet_grid(sol, np.asarray(q, float), np.asarray(p, float))
    grad = _gradients(jets.h_q, jets.h_p, jets.h_qq, jets.h_qp, jets.h_pp,
                      sol.c, sol.gravity)
    qq, pp = np.meshgrid(jets.q, jets.p)
    excl = _exclusion_mask(sol, qq, pp, cfg)
    P = sol.E + sol.surface_pressure - sol.gravity * jets.h - 0.5 / grad["D"]
    return FieldGrid(
        q=jets.q, p=jets.p, x=jets.x, y=jets.h,
        u=sol.c - grad["cmu"], v=grad["v"], P=P,
        f=grad["cmu"] * grad["v"] - sol.gravity * jets.x,
        P_x=grad["P_x"], P_x_alt=grad["P_x_alt"], P_y=grad["P_y"],
        u_q=grad["u_q"], v_q=grad["v_q"],
        u_x=grad["u_x"], u_y=grad["u_y"], v_x=grad["v_x"], v_y=grad["v_y"],
        h_q=jets.h_q, h_p=jets.h_p, D=grad["D"], excluded=excl,
    )


def physical_grid(sol: ConformalSolution, cfg: WaveConfig | None = None) -> list[FieldSample]:
    """Sample every field on the configured strip grid.

    Rows run from the floor p_min up to the surface p = 0, each row sweeping
    q over [0, pi*c] (half period, crest column first); row-major with q
    fastest. Points inside an active excision disc are flagged, not omitted.
    """
    cfg = cfg or _DEFAULT
    if cfg.grid_nq < 2 or cfg.grid_np < 2:
        raise InvalidConfig("field grid needs at least 2 samples per axis")
    p_min = cfg.resolved_depth(sol.c)
    if not (p_min < 0.0):
        raise InvalidConfig("grid floor p_min must be negative")
    q = np.linspace(0.0, np.pi * sol.c, cfg.grid_nq)
    p = np.linspace(p_min, 0.0, cfg.grid_np)
    gf = grid_fields(sol, q, p, cfg)
    samples = []
    for i in range(p.size):
        for j in range(q.size):
            samples.append(FieldSample(
                q=float(q[j]), p=float(p[i]),
                x=float(gf.x[i, j]), y=float(gf.y[i, j]),
                u=float(gf.u[i, j]), v=float(gf.v[i, j]),
                P=float(gf.P[i, j]), f=float(gf.f[i, j]),
                P_x=float(gf.P_x[i, j]), P_y=float(gf.P_y[i, j]),
                excluded=bool(gf.excluded[i, j]),
            ))
    return samples


def invert_position(sol: ConformalSolution, x_target: float, y_target: float,
                    q0: float, p0: float, tol: float = 1e-13,
                    max_iter: int = 50) -> tuple[float, float]:
    """Find the strip point mapping to the physical point (x, y).

    Two-dimensional Newton iteration on (x(q,p) - x, h(q,p) - y) with the
    exact Jacobian [[h_p, -h_q], [h_q, h_p]] (determinant D > 0, so the map
    is locally invertible away from stagnation). Needs a starting point on
    the correct period; converges quadratically from any reasonable one.
    """
    q, p = float(q0), float(p0)
    for _ in range(max_iter):
        jet = _jet_unchecked(sol, q, p)
        rx = jet.x - x_target
        ry = jet.h - y_target
        d = jet.h_q**2 + jet.h_p**2
        dq = (jet.h_p * (-rx) + jet.h_q * (-ry)) / d
        dp = (-jet.h_q * (-rx) + jet.h_p * (-ry)) / d
        q += dq
        p += dp
        if abs(dq) + abs(dp) <= tol:
            return (q, p)
    raise RuntimeError(
        f"position inversion did not converge for ({x_target:.6g}, {y_target:.6g})")
