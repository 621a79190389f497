"""Collocation solver and steepness continuation.

The free surface p = 0 must satisfy the Bernoulli condition
2 (E - g h) (h_q^2 + h_p^2) = 1. Substituting the truncated series of
`wave_model` and collocating at the N+1 angles theta_j = j pi / N turns this
into N+1 polynomial equations in the unknowns (a_1..a_N, c, E); the system is
closed by prescribing the steepness. Newton's method with an analytic
Jacobian solves it, and a predictor-free warm-started continuation walks the
family from the linear regime toward the limiting wave, halving the step on
failed solves and doubling the mode count when the coefficient tail stops
being resolved.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import get_lapack_funcs, lu_factor, lu_solve

from .wave_model import (
    TAIL_DECAY_RATIO,
    ConformalSolution,
    WaveConfig,
    steepness,
    crest_indicator,
    tail_ratio,
)

__all__ = [
    "SolverError",
    "NonConvergence",
    "SingularJacobian",
    "TailNotResolved",
    "ResidualSystem",
    "collocation_angles",
    "surface_residual",
    "residual_vector",
    "residual_system",
    "jacobian",
    "midpoint_residual",
    "initial_guess",
    "newton_solve",
    "FamilyMember",
    "ContinuationFamily",
    "continue_family",
    "LimitEstimate",
    "estimate_limit",
]

_RCOND_FLOOR = 1e-14
_MAX_DAMPINGS = 8


class SolverError(RuntimeError):
    """Base class for solver failures."""


class NonConvergence(SolverError):
    def __init__(self, message: str, iterations: int = 0, residual: float = np.inf):
        super().__init__(message)
        self.iterations = iterations
        self.residual = residual


class SingularJacobian(SolverError):
    """Jacobian factorization failed or its condition estimate blew up."""


class TailNotResolved(SolverError):
    """Newton converged but the coefficient tail violates the decay bound.

    Carries the converged (under-resolved) solution so a caller can zero-pad
    it as the warm start after doubling the mode count.
    """

    def __init__(self, message: str, tail: float, solution: ConformalSolution):
        super().__init__(message)
        self.tail = tail
        self.solution = solution


@lru_cache(maxsize=8)
def _collocation_cache(n: int):
    theta = np.linspace(0.0, np.pi, n + 1)
    k = np.arange(1.0, n + 1.0)
    ck = np.cos(np.outer(theta, k))
    sk = np.sin(np.outer(theta, k))
    for arr in (theta, k, ck, sk):
        arr.setflags(write=False)
    return theta, k, ck, sk


def collocation_angles(n: int) -> np.ndarray:
    """The N+1 surface angles theta_j = j pi / N, crest to trough."""
    return _collocation_cache(n)[0].copy()


def _surface_state(a, c, ck, sk, k):
    """Surface sums at the cached angles: h, A = c|h_q| factor, B, and
    S = A^2 + (1+B)^2 = c^2 (h_q^2 + h_p^2)."""
    ka = k * a
    h = ck @ a
    A = sk @ ka
    B = ck @ ka
    S = A * A + (1.0 + B) ** 2
    return h, A, B, S


def surface_residual(sol: ConformalSolution, theta: np.ndarray) -> np.ndarray:
    """Bernoulli surface defect 2 (E - g h) (h_q^2 + h_p^2) - 1 at angles theta."""
    theta = np.asarray(theta, dtype=float)
    k = np.arange(1.0, sol.coeffs.size + 1.0)
    ck = np.cos(np.outer(theta, k))
    sk = np.sin(np.outer(theta, k))
    h, _, _, S = _surface_state(sol.coeffs, sol.c, ck, sk, k)
    return 2.0 * (sol.E - sol.gravity * h) * S / sol.c**2 - 1.0


def residual_vector(sol: ConformalSolution, s_target: float) -> np.ndarray:
    """N+2 residuals: the surface condition at each collocation angle,
    then the steepness constraint."""
    n = sol.mode_count
    _, k, ck, sk = _collocation_cache(n)
    h, _, _, S = _surface_state(sol.coeffs, sol.c, ck, sk, k)
    r = np.empty(n + 2)
    r[: n + 1] = 2.0 * (sol.E - sol.gravity * h) * S / sol.c**2 - 1.0
    r[n + 1] = steepness(sol) - s_target
    return r


@dataclass(frozen=True)
class ResidualSystem:
    """Assembled nonlinear system at one iterate, for inspection."""

    angles: np.ndarray
    unknowns: np.ndarray  # (a_1..a_N, c, E)
    residuals: np.ndarray


def residual_system(sol: ConformalSolution, s_target: float) -> ResidualSystem:
    u = np.concatenate([sol.coeffs, [sol.c, sol.E]])
    return ResidualSystem(
        angles=collocation_angles(sol.mode_count),
        unknowns=u,
        residuals=residual_vector(sol, s_target),
    )


def jacobian(sol: ConformalSolution, s_target: float) -> np.ndarray:
    """Analytic Jacobian of `residual_vector` in (a_1..a_N, c, E)."""
    n = sol.mode_count
    _, k, ck, sk = _collocation_cache(n)
    a, c, E, g = sol.coeffs, sol.c, sol.E, sol.gravity
    h, A, B, S = _surface_state(a, c, ck, sk, k)
    J = np.zeros((n + 2, n + 2))
    excess = E - g * h
    # d/da_k: product rule through h and through S.
    J[: n + 1, :n] = (
        (-2.0 * g * S / c**2)[:, None] * ck
        + (2.0 * excess / c**2)[:, None]
        * (2.0 * A[:, None] * (sk * k) + 2.0 * (1.0 + B)[:, None] * (ck * k))
    )
    J[: n + 1, n] = -4.0 * excess * S / c**3
    J[: n + 1, n + 1] = 2.0 * S / c**2
    # Steepness row: only odd modes move the crest-to-trough height.
    J[n + 1, 0:n:2] = 1.0 / np.pi
    return J


def midpoint_residual(sol: ConformalSolution) -> float:
    """Largest Bernoulli defect halfway between collocation angles.

    Aliasing probe: the collocation residual is ~newton_tol by construction,
    while between the angles it is governed by the unresolved tail.
    """
    n = sol.mode_count
    mid = (np.arange(n) + 0.5) * np.pi / n
    return float(np.abs(surface_residual(sol, mid)).max())


def initial_guess(s0: float, cfg: WaveConfig) -> ConformalSolution:
    """Linear-theory wave: one cosine mode of amplitude pi*s0.

    Valid only in the small-steepness regime (s0 <= 0.02); beyond that the
    linearization error is too large to seed Newton reliably.
    """
    if not 0.0 <= s0 <= 0.02:
        raise ValueError("linear initial guess requires 0 <= s0 <= 0.02")
    a = np.zeros(cfg.mode_count)
    if s0 > 0.0:
        a[0] = np.pi * s0
    return ConformalSolution(
        c=float(np.sqrt(cfg.gravity)),
        E=0.5 * cfg.gravity,
        coeffs=a,
        gravity=cfg.gravity,
        surface_pressure=cfg.surface_pressure,
    )


def _linf(r: np.ndarray) -> float:
    return float(np.abs(r).max())


def _rcond(lu: np.ndarray, anorm: float) -> float:
    (gecon,) = get_lapack_funcs(("gecon",), (lu,))
    rcond, info = gecon(lu, anorm, norm="1")
    if info != 0:
        return 0.0
    return float(rcond)


def newton_solve(
    guess: ConformalSolution,
    s_target: float,
    cfg: WaveConfig,
    diagnostics: dict | None = None,
    tail_limit: float = TAIL_DECAY_RATIO,
) -> ConformalSolution:
    """Solve the collocated system at fixed steepness from a warm start.

    Damped Newton iteration with the analytic Jacobian: a step is halved
    (at most 8 times) until the max-norm residual decreases. Convergence is
    checked before the first step, so an exact guess (e.g. the flat stream
    at s_target = 0, where the Jacobian is singular) returns immediately.

    Raises NonConvergence, SingularJacobian or TailNotResolved; an accepted
    solution satisfies the residual tolerance, the tail-decay bound, c > 0,
    E > 0 and the crest sign convention a_1 > 0 (flat stream excepted).
    """
    if not np.isfinite(s_target) or s_target < 0.0:
        raise ValueError("s_target must be finite and nonnegative")
    n = guess.mode_count

    def make(u: np.ndarray) -> ConformalSolution | None:
        if not np.all(np.isfinite(u)) or u[n] <= 0.0:
            return None
        return ConformalSolution(
            c=float(u[n]), E=float(u[n + 1]), coeffs=u[:n],
            gravity=cfg.gravity, surface_pressure=cfg.surface_pressure,
        )

    u = np.concatenate([guess.coeffs, [guess.c, guess.E]])
    sol = make(u)
    if sol is None:
        raise ValueError("initial guess is not evaluable")
    r = residual_vector(sol, s_target)
    rmax = _linf(r)
    iters = 0
    while rmax > cfg.newton_tol:
        if not np.isfinite(rmax):
            raise NonConvergence("residual became non-finite", iters, rmax)
        if iters >= cfg.newton_max_iter:
            raise NonConvergence(
                f"no convergence in {cfg.newton_max_iter} iterations "
                f"(residual {rmax:.3e})", iters, rmax)
        J = jacobian(sol, s_target)
        anorm = float(np.abs(J).sum(axis=0).max())  # 1-norm for the estimator
        try:
            lu_piv = lu_factor(J)
        except Exception as exc:  # LinAlgError on exact singularity
            raise SingularJacobian(f"LU factorization failed: {exc}") from exc
        if _rcond(lu_piv[0], anorm) < _RCOND_FLOOR:
            raise SingularJacobian(
                f"Jacobian condition estimate below {_RCOND_FLOOR:g}")
        delta = lu_solve(lu_piv, -r)
        lam = 1.0
        accepted = None
        for _ in range(_MAX_DAMPINGS + 1):
            trial = make(u + lam * delta)
            if trial is not None:
                r_t = residual_vector(trial, s_target)
                rmax_t = _linf(r_t)
                if np.isfinite(rmax_t) and (rmax_t < rmax or rmax_t <= cfg.newton_tol):
                    accepted = (u + lam * delta, trial, r_t, rmax_t)
                    break
            lam *= 0.5
        if accepted is None:
            raise NonConvergence(
                f"damping exhausted at iteration {iters} (residual {rmax:.3e})",
                iters, rmax)
        u, sol, r, rmax = accepted
        iters += 1
    tail = tail_ratio(sol)
    if diagnostics is not None:
        diagnostics.update(iterations=iters, residual_norm=rmax, tail_ratio=tail)
    if tail > tail_limit:
        raise TailNotResolved(
            f"tail ratio {tail:.3e} exceeds {tail_limit:.3e} at N = {n}",
            tail, sol)
    if sol.E <= 0.0:
        raise NonConvergence("converged to a nonphysical branch (E <= 0)",
                             iters, rmax)
    amax = float(np.abs(sol.coeffs).max())
    if amax > 0.0 and sol.coeffs[0] <= 0.0:
        raise NonConvergence("converged to a mirrored branch (a_1 <= 0)",
                             iters, rmax)
    return sol


def _pad_modes(sol: ConformalSolution, n: int) -> ConformalSolution:
    a = np.zeros(n)
    a[: sol.coeffs.size] = sol.coeffs
    return ConformalSolution(c=sol.c, E=sol.E, coeffs=a, gravity=sol.gravity,
                             surface_pressure=sol.surface_pressure)


@dataclass(frozen=True)
class FamilyMember:
    steepness: float
    solution: ConformalSolution
    newton_iters: int
    residual_norm: float
    crest_indicator: float
    tail_ratio: float


@dataclass(frozen=True)
class ContinuationFamily:
    """Monotone-steepness family of waves with per-member diagnostics."""

    members: tuple[FamilyMember, ...]
    stop_reason: str  # reached_stop | step_floor | mode_cap | time_budget
    requested_stop: float

    @property
    def steepnesses(self) -> np.ndarray:
        return np.array([m.steepness for m in self.members])

    @property
    def last(self) -> FamilyMember:
        return self.members[-1]


class _ModeCapTail(SolverError):
    """Internal: tail bound failed and the mode budget is spent."""


def _solve_target(sol, target, cfg, max_modes, tail_limit, diag_out):
    """Newton at one target from a warm start, doubling modes as needed."""
    guess = sol
    while True:
        diag = {}
        try:
            out = newton_solve(guess, target, cfg, diagnostics=diag,
                               tail_limit=tail_limit)
            diag_out.update(diag)
            return out
        except TailNotResolved as exc:
            n2 = 2 * guess.mode_count
            if n2 > max_modes:
                raise _ModeCapTail(str(exc)) from exc
            # Reuse the converged low-resolution solution as the warm start.
            guess = _pad_modes(exc.solution, n2)


def continue_family(
    s_start: float,
    s_stop: float,
    cfg: WaveConfig,
    *,
    initial_step: float = 0.01,
    min_step: float = 1e-5,
    max_modes: int = 2048,
    tail_limit: float = TAIL_DECAY_RATIO,
    time_budget: float | None = None,
) -> ContinuationFamily:
    """Walk the family from s_start to s_stop with adaptive steps.

    Warm-started Newton continuation in steepness: the step is halved on a
    failed solve (floor ``min_step``) and the mode count is doubled, up to
    ``max_modes``, whenever the coefficient tail of a converged solve stops
    meeting the decay bound. Members are recorded at every accepted target;
    the family ends either at s_stop or at the largest steepness achievable
    within the budget, with the stop reason recorded. Solver errors propagate
    only if not even the first member can be computed.
    """
    if not (0.0 < s_start <= s_stop):
        raise ValueError("need 0 < s_start <= s_stop")
    if cfg.mode_count > max_modes:
        raise ValueError("cfg.mode_count exceeds max_modes")
    t0 = time.monotonic()
    ramp0 = min(s_start, 0.02)
    diag: dict = {}
    sol = _solve_target(initial_guess(ramp0, cfg), ramp0, cfg, max_modes,
                        tail_limit, diag)
    s = ramp0
    members: list[FamilyMember] = []

    def record(sol, s, diag):
        members.append(FamilyMember(
            steepness=steepness(sol), solution=sol,
            newton_iters=diag.get("iterations", 0),
            residual_norm=diag.get("residual_norm", 0.0),
            crest_indicator=crest_indicator(sol),
            tail_ratio=tail_ratio(sol)))

    if s >= s_start - 1e-14:
        record(sol, s, diag)
    step = initial_step
    stop_reason = "reached_stop"
    last_failure = None
    prev: tuple[float, np.ndarray] | None = None

    def vec(sol):
        return np.concatenate([sol.coeffs, [sol.c, sol.E]])

    def predicted(sol, s, target):
        # Secant extrapolation of the unknown vector along the family; cuts
        # the Newton count substantially near the limit. Conservative: only
        # mild extrapolation factors, and the caller falls back to the plain
        # warm start if the predicted guess fails.
        if prev is None:
            return None
        s_p, u_p = prev
        if not (s_p < s) or (target - s) > 4.0 * (s - s_p):
            return None
        u = vec(sol)
        if u_p.size != u.size:
            pad = np.zeros(u.size)
            pad[: u_p.size - 2] = u_p[:-2]
            pad[-2:] = u_p[-2:]
            u_p = pad
        u_g = u + (target - s) / (s - s_p) * (u - u_p)
        if not np.all(np.isfinite(u_g)) or u_g[-2] <= 0.0:
            return None
        return ConformalSolution(
            c=float(u_g[-2]), E=float(u_g[-1]), coeffs=u_g[:-2],
            gravity=cfg.gravity, surface_pressure=cfg.surface_pressure)

    while s < s_stop - 1e-14:
        if time_budget is not None and time.monotonic() - t0 > time_budget:
            stop_reason = "time_budget"
            break
        target = min(s + step, s_stop)
        if s < s_start:
            target = min(target, s_start)  # land exactly on s_start
        diag = {}
        try:
            guess = predicted(sol, s, target)
            if guess is not None:
                try:
                    new_sol = _solve_target(guess, target, cfg, max_modes,
                                            tail_limit, diag)
                except (NonConvergence, SingularJacobian, _ModeCapTail):
                    diag = {}
                    new_sol = _solve_target(sol, target, cfg, max_modes,
                                            tail_limit, diag)
            else:
                new_sol = _solve_target(sol, target, cfg, max_modes,
                                        tail_limit, diag)
        except (NonConvergence, SingularJacobian, _ModeCapTail) as exc:
            last_failure = exc
            step *= 0.5
            if step < min_step:
                stop_reason = ("mode_cap" if isinstance(exc, _ModeCapTail)
                               else "step_floor")
                break
            continue
        prev = (s, vec(sol))
        sol = new_sol
        s = target
        if s >= s_start - 1e-14:
            record(sol, s, diag)
    if not members:
        if last_failure is not None:
            raise last_failure
        raise NonConvergence("continuation produced no members")
    return ContinuationFamily(members=tuple(members), stop_reason=stop_reason,
                              requested_stop=s_stop)


@dataclass(frozen=True)
class LimitEstimate:
    """Largest resolvable steepness found by pushing the continuation."""

    s_max: float
    K_at_max: float
    N_used: int
    stop_reason: str
    family: ContinuationFamily


def estimate_limit(
    cfg: WaveConfig,
    *,
    s_start: float = 0.01,
    s_ceiling: float = 0.2,
    initial_step: float = 0.01,
    min_step: float = 1e-5,
    max_modes: int = 2048,
    time_budget: float | None = None,
) -> LimitEstimate:
    """Push the continuation as far as the budget allows.

    The ceiling is set above any attainable steepness, so the walk always
    ends at the step floor or the mode cap; the last member is the estimate.
    Always returns the best achieved state rather than raising.
    """
    fam = continue_family(
        s_start, s_ceiling, cfg,
        initial_step=initial_step, min_step=min_step, max_modes=max_modes,
        time_budget=time_budget)
    last = fam.last
    return LimitEstimate(
        s_max=last.steepness,
        K_at_max=last.crest_indicator,
        N_used=last.solution.mode_count,
        stop_reason=fam.stop_reason,
        family=fam)
