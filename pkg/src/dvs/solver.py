"""Concave dual maximization, rounding, certification, and the full solve.

The dual P_dual(sigma, tau, mu) is maximized over the cone {sigma >= 0,
mu >= mu_min, G(mu) PD}.  tau is unconstrained and P_dual is an exact
concave quadratic in it, so each evaluation eliminates tau by an inner
n-by-n SPD solve and the outer iteration works on (sigma, mu) only:

    G z = [h - D'sigma + mu | H'],   S = H Z,   S tau = H y0 - 1,
    y = y0 - Z tau,

which leaves the ascent gradient (D y - b, y * (y - 1)) for the outer
variables.  The outer loop is a projected L-BFGS (two-loop recursion on
the free coordinates) with an Armijo backtracking line search that
rejects any trial whose G(mu) fails Cholesky — feasibility before ascent.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve, eigvalsh

from .dual import MU_MIN, dual_value, f_vector, factorize_g, in_dual_cone, recover_y
from .lift import lift, recover_x
from .model import (
    CERTIFIED_GLOBAL,
    KKT_ONLY,
    NO_CERTIFICATE,
    ORACLE_FALLBACK,
    BinaryQP,
    Certificate,
    DiscreteQP,
    DualPoint,
    SolveReport,
    binary_objective,
    objective,
)
from .oracle import enumerate_discrete

log = logging.getLogger("dvs.solver")

TERM_CONVERGED = "Converged"
TERM_MAX_ITER = "MaxIterations"
TERM_STALL = "LineSearchStall"

_ARMIJO_C1 = 1e-4
_MIN_STEP = 1e-16
_LBFGS_MEMORY = 20
_STALL_PATIENCE = 50


@dataclass(frozen=True)
class SolverConfig:
    """Tolerances and limits for the dual ascent and certification."""

    tol_grad: float = 1e-8
    tol_gap: float = 1e-6
    mu_min: float = MU_MIN
    max_iter: int = 5000
    round_threshold: float = 0.5
    fallback_oracle_max_K: int = 24
    seed: int = 0

    def __post_init__(self):
        for name in ("tol_grad", "tol_gap", "mu_min"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be > 0")
        if not 0.0 < self.round_threshold < 1.0:
            raise ValueError("round_threshold must lie in (0, 1)")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")


@dataclass(frozen=True)
class AscentTrace:
    """Dual values of the accepted iterates plus the termination reason."""

    values: tuple[float, ...]
    termination: str

    @property
    def iterations(self) -> int:
        return len(self.values) - 1


def initial_point(q: BinaryQP, mu_min: float = MU_MIN) -> DualPoint:
    """sigma = 0, tau = 0, and a uniform mu that makes G(mu) safely PD.

    mu0 = max(mu_min, delta0 - lambda_min(B)/2) with delta0 =
    1e-3 (1 + ||B||_inf) gives G(mu0) >= 2 delta0 I, so the very first
    Cholesky attempt cannot fail.
    """
    delta0 = 1e-3 * (1.0 + float(np.abs(q.B).sum(axis=1).max()))
    lam_min = float(eigvalsh(q.B, subset_by_index=(0, 0),
                             check_finite=False)[0])
    mu0 = max(mu_min, delta0 - lam_min / 2.0)
    return DualPoint(sigma=np.zeros(q.m), tau=np.zeros(q.n),
                     mu=np.full(q.K, mu0))


def _tau_eliminated(q: BinaryQP, w: np.ndarray):
    """Evaluate -P_dual and its (sigma, mu)-gradient at the optimal tau.

    Returns None when G(mu) fails Cholesky (infeasible trial point),
    otherwise (f, grad, y, tau) in minimization form f = -P_dual.
    """
    m = q.m
    sigma = w[:m]
    mu = w[m:]
    G = q.B.copy()
    G[np.diag_indices_from(G)] += 2.0 * mu
    try:
        cf = cho_factor(G, lower=True, check_finite=False)
    except LinAlgError:
        return None
    ht = q.h + mu
    if m:
        ht = ht - q.D.T @ sigma
    sol = cho_solve(cf, np.column_stack([ht, q.H.T]), check_finite=False)
    y0 = sol[:, 0]
    Z = sol[:, 1:]
    S = q.H @ Z
    try:
        tau = np.linalg.solve(S, q.H @ y0 - 1.0)
    except np.linalg.LinAlgError:
        return None
    F = ht - q.H.T @ tau
    y = y0 - Z @ tau
    pd = -0.5 * (F @ y) - tau.sum()
    if m:
        pd -= sigma @ q.b
        grad = np.concatenate([q.D @ y - q.b, y * (y - 1.0)])
    else:
        grad = y * (y - 1.0)
    return -pd, -grad, y, tau


def maximize_dual(q: BinaryQP, cfg: SolverConfig = None) -> tuple[DualPoint, AscentTrace]:
    """Projected L-BFGS ascent of P_dual over {sigma >= 0, mu >= mu_min}.

    Every accepted iterate keeps G(mu) Cholesky-positive-definite and
    never decreases the dual value; the trace records the dual value of
    the initial point and of each accepted step.  Terminates when the
    projected gradient infinity-norm falls to tol_grad ("Converged"),
    after max_iter steps ("MaxIterations"), or when no further progress
    is possible — the line search finds no ascent step above 1e-16, or
    the dual value has been exactly flat for 50 consecutive accepted
    steps ("LineSearchStall", best iterate returned — typically at the
    round-off floor).
    """
    if cfg is None:
        cfg = SolverConfig()
    m, K = q.m, q.K
    start = initial_point(q, cfg.mu_min)
    w = np.concatenate([start.sigma, start.mu])
    lb = np.concatenate([np.zeros(m), np.full(K, cfg.mu_min)])

    f, g, y, tau = _tau_eliminated(q, w)
    values = [-f]
    memory = []
    termination = TERM_MAX_ITER
    flat_steps = 0
    for it in range(cfg.max_iter):
        at_bound = w <= lb
        pg = np.where(at_bound, np.minimum(g, 0.0), g)
        pg_norm = float(np.abs(pg).max())
        if pg_norm <= cfg.tol_grad:
            termination = TERM_CONVERGED
            break
        if it % 50 == 0:
            log.debug("iter %d dual=%.12g pg=%.3e", it, -f, pg_norm)

        # Two-loop recursion on the free coordinates; bound-active
        # coordinates whose gradient pushes outward are frozen.
        frozen = at_bound & (g > 0)
        r = np.where(frozen, 0.0, g)
        q_dir = r.copy()
        alphas = []
        for s_v, y_v, rho in reversed(memory):
            a = rho * (s_v @ q_dir)
            alphas.append(a)
            q_dir -= a * y_v
        if memory:
            s_v, y_v, _ = memory[-1]
            q_dir *= (s_v @ y_v) / (y_v @ y_v)
        else:
            q_dir /= max(1.0, np.linalg.norm(r))
        for (s_v, y_v, rho), a in zip(memory, reversed(alphas)):
            q_dir += (a - rho * (y_v @ q_dir)) * s_v
        direction = -np.where(frozen, 0.0, q_dir)
        if g @ direction >= 0.0:
            memory.clear()
            direction = -r / max(1.0, np.linalg.norm(r))

        step = 1.0
        accepted = None
        while step >= _MIN_STEP:
            w_try = np.maximum(w + step * direction, lb)
            dg = g @ (w_try - w)
            if dg < 0.0:
                res = _tau_eliminated(q, w_try)
                if res is not None and res[0] <= f + _ARMIJO_C1 * dg:
                    accepted = (w_try, res)
                    break
            step *= 0.5
        if accepted is None:
            termination = TERM_STALL
            break

        w_try, (f_try, g_try, y_try, tau_try) = accepted
        flat_steps = 0 if f_try < f else flat_steps + 1
        s_v = w_try - w
        y_v = g_try - g
        curv = s_v @ y_v
        if curv > 1e-12 * np.linalg.norm(s_v) * np.linalg.norm(y_v):
            memory.append((s_v, y_v, 1.0 / curv))
            if len(memory) > _LBFGS_MEMORY:
                memory.pop(0)
        w, f, g, y, tau = w_try, f_try, g_try, y_try, tau_try
        values.append(-f)
        if flat_steps >= _STALL_PATIENCE:
            termination = TERM_STALL
            break

    log.info("dual ascent: %s after %d iterations, dual=%.12g",
             termination, len(values) - 1, -f)
    point = DualPoint(sigma=w[:m], tau=tau, mu=w[m:])
    return point, AscentTrace(values=tuple(values), termination=termination)


def round_binary(y: np.ndarray, blocks, threshold: float = 0.5
                 ) -> tuple[np.ndarray, tuple[int, ...]]:
    """Argmax rounding per block, guaranteeing exactly one 1 per block.

    Returns the 0/1 vector and the indices of low-confidence blocks
    (largest coordinate below ``threshold``); ties go to the lowest index.
    """
    y = np.asarray(y, dtype=float)
    y01 = np.zeros_like(y)
    flagged = []
    for i, (s, e) in enumerate(blocks):
        j = int(np.argmax(y[s:e]))
        y01[s + j] = 1.0
        if y[s + j] < threshold:
            flagged.append(i)
    return y01, tuple(flagged)


def verify_kkt(q: BinaryQP, y01: np.ndarray, d: DualPoint, tol: float,
               tol_gap: float = 1e-6, mu_min: float = MU_MIN) -> Certificate:
    """Compute KKT residuals and the duality gap; classify the outcome.

    CertifiedGlobal requires cone membership (sigma >= 0, mu >= mu_min,
    G(mu) PD), every residual at most ``tol``, and a relative duality gap
    at most ``tol_gap``; KKTOnly means the residuals and gap pass but the
    cone test fails; anything else is NoCertificate.
    """
    y01 = np.asarray(y01, dtype=float)
    hy = q.H @ y01 - 1.0
    had = y01 * (y01 - 1.0)
    if q.m:
        slack = q.D @ y01 - q.b
        primal = max(float(np.max(slack)), float(np.abs(hy).max()),
                     float(np.max(had)), 0.0)
        comp = abs(float(d.sigma @ slack))
        dual_feas = max(-float(d.sigma.min()), -float(d.mu.min()), 0.0)
    else:
        primal = max(float(np.abs(hy).max()), float(np.max(had)), 0.0)
        comp = 0.0
        dual_feas = max(-float(d.mu.min()), 0.0)
    comp = max(comp, abs(float(d.mu @ had)))

    value = binary_objective(q, y01)
    gap = abs(value - dual_value(q, d))
    in_cone = in_dual_cone(q, d, mu_min)
    residuals_ok = max(primal, dual_feas, comp) <= tol
    gap_ok = gap <= tol_gap * (1.0 + abs(value))
    if residuals_ok and gap_ok:
        status = CERTIFIED_GLOBAL if in_cone else KKT_ONLY
    else:
        status = NO_CERTIFICATE
    return Certificate(primal_feas_residual=primal, dual_feas_residual=dual_feas,
                       complementarity_residual=comp, gap=gap,
                       in_cone=in_cone, status=status)


def solve(p: DiscreteQP, cfg: SolverConfig = None) -> SolveReport:
    """Lift, maximize the dual, round, decode, certify — then fall back.

    When the certificate is not CertifiedGlobal and the lifted dimension
    is at most ``fallback_oracle_max_K``, the exhaustive oracle supplies
    the answer and the report status becomes OracleFallback (the failed
    certificate is still reported as computed).  The reported objective
    is always recomputed from the original problem.
    """
    if cfg is None:
        cfg = SolverConfig()
    t0 = time.perf_counter()
    q = lift(p)
    d, trace = maximize_dual(q, cfg)
    y, _ = recover_y(factorize_g(q, d.mu), f_vector(q, d))
    y01, flagged = round_binary(y, q.blocks, cfg.round_threshold)
    value = binary_objective(q, y01)
    cert = verify_kkt(q, y01, d, tol=cfg.tol_gap * (1.0 + abs(value)),
                      tol_gap=cfg.tol_gap, mu_min=cfg.mu_min)
    x = recover_x(q, y01)
    status = cert.status
    if cert.status != CERTIFIED_GLOBAL and q.K <= cfg.fallback_oracle_max_K:
        log.info("certificate is %s; falling back to enumeration (K=%d)",
                 cert.status, q.K)
        x, _, _, _ = enumerate_discrete(p)
        status = ORACLE_FALLBACK
    return SolveReport(
        x=x, objective=objective(p, x), certificate=cert, dual_point=d,
        y=y, iterations=trace.iterations, status=status,
        solver_status=trace.termination, low_confidence_blocks=flagged,
        trace=trace.values, seconds=time.perf_counter() - t0,
        seed=cfg.seed, tol_gap=cfg.tol_gap, mu_min=cfg.mu_min)
