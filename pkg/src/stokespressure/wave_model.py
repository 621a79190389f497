"""Conformal-strip representation of periodic deep-water traveling waves.

A steadily traveling gravity wave of wavelength 2*pi is stored by its speed c,
the Bernoulli surface constant E, and the coefficients a_1..a_N of a truncated
exponential-cosine series for the height function h(q, p) on the half-strip
p <= 0 (q is the velocity potential coordinate, p the streamline coordinate,
both in the frame moving with the wave):

    h(q, p) = p/c + sum_k a_k exp(k p/c) cos(k q/c)
    x(q, p) = q/c + sum_k a_k exp(k p/c) sin(k q/c)

with theta = q/c running over one period [0, 2*pi] and y = h. Every member of
this family is an exact harmonic function of (q, p) satisfying the conjugacy
relations x_q = h_p, x_p = -h_q, is 2*pi*c-periodic in q, even in q about the
crest at q = 0, and tends to the undisturbed stream h ~ p/c as p -> -inf.
Only the free-surface condition on p = 0 and the wave height couple the
coefficients; those live in `spectral_solver`.
"""

from __future__ import annotations

from dataclasses import dataclass
import numpy as np

__all__ = [
    "TAIL_DECAY_RATIO",
    "InvalidConfig",
    "WaveConfig",
    "ConformalSolution",
    "StripPoint",
    "ConformalJet",
    "JetGrid",
    "eval_conformal_jet",
    "eval_jet_grid",
    "steepness",
    "crest_indicator",
    "tail_ratio",
]

# Accepted solutions must have a spectrally resolved tail: the last retained
# coefficient may not exceed this fraction of the largest one.
TAIL_DECAY_RATIO = 1e-8


class InvalidConfig(ValueError):
    """A configuration value (or a derived grid setting) is unusable."""


@dataclass(frozen=True)
class WaveConfig:
    """Physical constants, resolution and tolerance knobs.

    The wavelength is fixed at 2*pi; gravity and the ambient surface pressure
    are configurable. ``grid_depth`` is the strip floor p_min used by field
    grids; ``None`` resolves to one conformal wavelength of depth, -2*pi*c,
    at evaluation time (deeper rows are uniform flow to ~1e-11).
    """

    gravity: float = 1.0
    surface_pressure: float = 0.0
    mode_count: int = 128
    newton_tol: float = 1e-12
    newton_max_iter: int = 40
    grid_nq: int = 256
    grid_np: int = 128
    grid_depth: float | None = None
    excision_radius: float = 0.05
    crest_indicator_threshold: float = 0.1

    def __post_init__(self) -> None:
        if not (self.gravity > 0.0 and np.isfinite(self.gravity)):
            raise InvalidConfig("gravity must be positive and finite")
        if not (self.newton_tol > 0.0):
            raise InvalidConfig("newton_tol must be positive")
        if self.newton_max_iter < 1:
            raise InvalidConfig("newton_max_iter must be at least 1")
        if self.mode_count < 4:
            raise InvalidConfig("mode_count must be at least 4")
        if self.grid_nq < 1 or self.grid_np < 1:
            raise InvalidConfig("grid dimensions must be positive")
        if self.grid_depth is not None and not (self.grid_depth < 0.0):
            raise InvalidConfig("grid_depth must be negative (p_min < 0)")
        if self.excision_radius < 0.0:
            raise InvalidConfig("excision_radius must be nonnegative")
        if not (0.0 < self.crest_indicator_threshold < 1.0):
            raise InvalidConfig("crest_indicator_threshold must lie in (0, 1)")

    def resolved_depth(self, c: float) -> float:
        """Grid floor p_min for a wave of speed c."""
        if self.grid_depth is not None:
            return float(self.grid_depth)
        return -2.0 * np.pi * c


@dataclass(frozen=True)
class ConformalSolution:
    """One traveling wave: speed, surface Bernoulli constant, coefficients.

    Immutable; the coefficient array is copied in and marked read-only.
    ``coeffs[k-1]`` is a_k. A zero coefficient vector is the flat stream.
    """

    c: float
    E: float
    coeffs: np.ndarray
    gravity: float = 1.0
    surface_pressure: float = 0.0

    def __post_init__(self) -> None:
        a = np.array(self.coeffs, dtype=float, copy=True)
        if a.ndim != 1 or a.size == 0:
            raise ValueError("coeffs must be a nonempty 1-D array")
        if not np.all(np.isfinite(a)):
            raise ValueError("coeffs must be finite")
        a.setflags(write=False)
        object.__setattr__(self, "coeffs", a)
        if not (np.isfinite(self.c) and self.c > 0.0):
            raise ValueError("wave speed c must be positive and finite")
        if not np.isfinite(self.E):
            raise ValueError("Bernoulli constant E must be finite")
        if not (self.gravity > 0.0):
            raise ValueError("gravity must be positive")

    @property
    def mode_count(self) -> int:
        return self.coeffs.size

    @property
    def period_q(self) -> float:
        """Period of the solution in the potential coordinate q."""
        return 2.0 * np.pi * self.c


@dataclass(frozen=True)
class StripPoint:
    """A point (q, p) of the closed half-strip p <= 0."""

    q: float
    p: float

    def __post_init__(self) -> None:
        if not (np.isfinite(self.q) and np.isfinite(self.p)):
            raise ValueError("strip point coordinates must be finite")
        if self.p > 0.0:
            raise ValueError(f"strip point lies above the surface: p = {self.p}")


@dataclass(frozen=True)
class ConformalJet:
    """h, x and the partial derivatives entering the hodograph dictionary.

    By construction x_q = h_p, x_p = -h_q and h_qq + h_pp = 0 hold exactly.
    """

    h: float
    h_q: float
    h_p: float
    h_qq: float
    h_qp: float
    h_pp: float
    x: float
    x_q: float
    x_p: float


def _series_terms(sol: ConformalSolution, q: float, p: float):
    k = np.arange(1.0, sol.coeffs.size + 1.0)
    ek = sol.coeffs * np.exp(k * (p / sol.c))
    ck = np.cos(k * (q / sol.c))
    sk = np.sin(k * (q / sol.c))
    return k, ek, ck, sk


def _jet_unchecked(sol: ConformalSolution, q: float, p: float) -> ConformalJet:
    # Used by the position inverter, whose iterates may transiently cross
    # p = 0 by a rounding margin; the series itself is entire in (q, p).
    c = sol.c
    k, ek, ck, sk = _series_terms(sol, q, p)
    kek = k * ek
    k2ek = k * kek
    h = p / c + float(ek @ ck)
    h_q = -float(kek @ sk) / c
    h_p = 1.0 / c + float(kek @ ck) / c
    h_qq = -float(k2ek @ ck) / c**2
    h_qp = -float(k2ek @ sk) / c**2
    x = q / c + float(ek @ sk)
    return ConformalJet(
        h=h, h_q=h_q, h_p=h_p, h_qq=h_qq, h_qp=h_qp, h_pp=-h_qq,
        x=x, x_q=h_p, x_p=-h_q,
    )


def eval_conformal_jet(sol: ConformalSolution, pt: StripPoint) -> ConformalJet:
    """Evaluate the height function, its conjugate and their partials at pt.

    Term-by-term differentiation of the series. Pure and deterministic;
    rejects points above the free surface (p > 0).
    """
    if pt.p > 0.0:
        raise ValueError(f"evaluation above the surface: p = {pt.p}")
    return _jet_unchecked(sol, pt.q, pt.p)


@dataclass(frozen=True)
class JetGrid:
    """Vectorized jet on a tensor grid: arrays of shape (len(p), len(q))."""

    q: np.ndarray
    p: np.ndarray
    h: np.ndarray
    h_q: np.ndarray
    h_p: np.ndarray
    h_qq: np.ndarray
    h_qp: np.ndarray
    h_pp: np.ndarray
    x: np.ndarray


def eval_jet_grid(sol: ConformalSolution, q: np.ndarray, p: np.ndarray) -> JetGrid:
    """Jet of the solution on the tensor grid q x p, p rows by q columns.

    Matrix-product formulation of the same sums as `eval_conformal_jet`;
    agrees with the pointwise path to rounding and is the fast path for
    field grids (a handful of (np, N) @ (N, nq) products).
    """
    q = np.asarray(q, dtype=float)
    p = np.asarray(p, dtype=float)
    if q.ndim != 1 or p.ndim != 1:
        raise ValueError("q and p must be 1-D sample arrays")
    if p.size and p.max() > 0.0:
        raise ValueError("grid rows must satisfy p <= 0")
    c = sol.c
    n = sol.coeffs.size
    k = np.arange(1.0, n + 1.0)
    # (np, N) coefficient-weighted depth factors; (nq, N) trig factors.
    E = np.exp(np.outer(p / c, k)) * sol.coeffs
    C = np.cos(np.outer(q / c, k))
    S = np.sin(np.outer(q / c, k))
    KE = E * k
    K2E = KE * k
    h = p[:, None] / c + E @ C.T
    h_q = -(KE @ S.T) / c
    h_p = 1.0 / c + (KE @ C.T) / c
    h_qq = -(K2E @ C.T) / c**2
    h_qp = -(K2E @ S.T) / c**2
    x = q[None, :] / c + E @ S.T
    return JetGrid(q=q, p=p, h=h, h_q=h_q, h_p=h_p,
                   h_qq=h_qq, h_qp=h_qp, h_pp=-h_qq, x=x)


def steepness(sol: ConformalSolution) -> float:
    """Crest-to-trough height divided by the wavelength.

    Equals (h(0, 0) - h(pi*c, 0)) / (2*pi); even modes cancel, so only the
    odd coefficients contribute: s = sum_{k odd} a_k / pi.
    """
    return float(sol.coeffs[0::2].sum() / np.pi)


def crest_indicator(sol: ConformalSolution) -> float:
    """Relative crest flow speed (c - u(crest)) / c.

    Equals 1 for the flat stream and tends to 0 as the crest approaches a
    stagnation point; equals 1 / (1 + sum_k k a_k). Values near 0 flag the
    near-extreme regime in which pointwise evaluation adjacent to the crest
    stops being trustworthy.
    """
    jet = eval_conformal_jet(sol, StripPoint(0.0, 0.0))
    d = jet.h_q**2 + jet.h_p**2
    if d == 0.0 or not np.isfinite(d):
        return 0.0
    return float(jet.h_p / (d * sol.c))


def tail_ratio(sol: ConformalSolution) -> float:
    """|a_N| relative to the largest |a_k|; 0 for the flat stream."""
    amax = float(np.abs(sol.coeffs).max())
    if amax == 0.0:
        return 0.0
    return float(abs(sol.coeffs[-1]) / amax)
