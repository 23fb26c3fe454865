"""Sparse recovery of range-speed scenes.

Three solvers over a common dictionary:

* Dantzig selector: l1 minimization subject to an inf-norm bound mu on the
  correlated residual, solved as a linear program over real non-negative
  coefficients. The complex modulus constraint |z_i| <= mu is replaced by
  the polyhedral inner approximation max(|Re z_i|, |Im z_i|) <= mu/sqrt(2),
  which implies the original constraint.
* BPDN: l1 minimization subject to a Euclidean residual bound epsilon
  (second-order cone program, also non-negative coefficients).
* OMP: greedy column selection with least-squares refitting; the only
  solver that supports complex amplitudes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linprog

from .dictionary import Dictionary
from .signal_model import Measurement

_LP_OPTIONS = {
    "primal_feasibility_tolerance": 1e-10,
    "dual_feasibility_tolerance": 1e-9,
}

# Floor on mu (relative to the column norm) keeping the noiseless LP well posed.
NOISELESS_MU_FLOOR = 1e-6


class RecoveryError(RuntimeError):
    """Base class for solver failures."""


class NoAdmissibleMuError(RecoveryError):
    """The (lower, upper) mu bracket is empty; the trial cannot be solved."""

    def __init__(self, lower: float, upper: float):
        super().__init__(f"no admissible mu: lower {lower:.6g} >= upper {upper:.6g}")
        self.lower = lower
        self.upper = upper


class InfeasibleError(RecoveryError):
    """The constraint set is empty at the requested threshold."""

    def __init__(self, message: str, threshold: float, min_residual: float):
        super().__init__(f"{message}: threshold {threshold:.6g}, "
                         f"minimum achievable residual {min_residual:.6g}")
        self.threshold = threshold
        self.min_residual = min_residual


class SolverStalledError(RecoveryError):
    """Iteration or solver limits exceeded without convergence."""


@dataclass(frozen=True)
class SolverConfig:
    """Configuration shared by the recovery solvers.

    mu and epsilon may be "auto": mu becomes the geometric mean of the
    mu_bounds bracket, epsilon the expected noise-floor residual norm.
    sparsity_k, when set, fixes the number of detections extracted.
    """

    method: str = "dantzig"
    mu: float | str = "auto"
    t_param: float = 1.0
    epsilon: float | str = "auto"
    max_iterations: int = 1000
    feasibility_tol: float = 1e-8
    sparsity_k: int | None = None

    def __post_init__(self):
        if self.method not in ("dantzig", "omp", "bpdn"):
            raise ValueError(f"unknown method {self.method!r}")
        if self.mu != "auto" and not (isinstance(self.mu, (int, float)) and self.mu > 0):
            raise ValueError(f"mu must be 'auto' or a positive number, got {self.mu!r}")
        if self.epsilon != "auto" and not (
            isinstance(self.epsilon, (int, float)) and self.epsilon >= 0
        ):
            raise ValueError(f"epsilon must be 'auto' or >= 0, got {self.epsilon!r}")
        if self.t_param <= 0:
            raise ValueError(f"t_param must be positive, got {self.t_param}")
        if self.max_iterations < 1:
            raise ValueError(f"max_iterations must be >= 1, got {self.max_iterations}")
        if self.sparsity_k is not None and self.sparsity_k < 1:
            raise ValueError(f"sparsity_k must be >= 1, got {self.sparsity_k}")


@dataclass(frozen=True)
class RecoveryResult:
    """Estimated coefficients and the decoded detections.

    support is the sorted tuple of detected flat grid indices; targets the
    corresponding (range [m], speed [m/s], |coefficient|) triples. An empty
    support with sparsity_k set means no detection was possible.
    """

    coefficients: np.ndarray
    support: tuple[int, ...]
    targets: tuple[tuple[float, float, float], ...]
    residual_inf_norm: float
    objective: float
    mu: float | None = None


def _check_measurement(d: Dictionary, y: Measurement) -> np.ndarray:
    if len(y) != d.n_pulses:
        raise ValueError(f"measurement length {len(y)} != dictionary rows {d.n_pulses}")
    return y.samples


def mu_bounds(d: Dictionary, y: Measurement, noise_variance: float) -> tuple[float, float]:
    """Admissible bracket for the Dantzig threshold mu.

    lower = sqrt(2 * ln(N) * sigma^2) * sqrt(N) (the recovery guarantee
    bound with sigma_max = sqrt(N)); upper = ||Psi^H y||_inf, above which
    the zero solution becomes feasible.
    """
    samples = _check_measurement(d, y)
    if noise_variance < 0:
        raise ValueError(f"noise_variance must be >= 0, got {noise_variance}")
    n = d.n_pulses
    lower = math.sqrt(2.0 * math.log(n) * noise_variance) * math.sqrt(n)
    upper = float(np.max(np.abs(d.entries.conj().T @ samples)))
    return lower, upper


def resolve_mu(d: Dictionary, y: Measurement, noise_variance: float, cfg: SolverConfig) -> float:
    """Explicit mu from the config, or the geometric mean of mu_bounds.

    A floor of NOISELESS_MU_FLOOR * sqrt(N) keeps the bracket non-empty in
    noiseless runs where the lower bound collapses to zero.
    """
    if cfg.mu != "auto":
        return float(cfg.mu)
    lower, upper = mu_bounds(d, y, noise_variance)
    lower = max(lower, NOISELESS_MU_FLOOR * d.column_norm)
    if upper <= lower:
        raise NoAdmissibleMuError(lower, upper)
    return math.sqrt(lower * upper)


def _decode(d: Dictionary, coefficients: np.ndarray, support) -> tuple:
    out = []
    for i in support:
        r, v = d.grid.point(int(i))
        out.append((r, v, float(abs(coefficients[i]))))
    return tuple(out)


def _top_k_indices(magnitudes: np.ndarray, k: int) -> np.ndarray:
    # stable argsort on negated magnitudes: ties resolve to the lowest index
    return np.argsort(-magnitudes, kind="stable")[:k]


def extract_support(coefficients: np.ndarray, cfg: SolverConfig) -> tuple[int, ...]:
    """Detected support of a coefficient vector.

    With sparsity_k set, the indices of the k largest magnitudes (ties to
    the lowest index); an all-zero vector yields the empty set (no
    detection). Otherwise, all indices above 10% of the peak magnitude.
    """
    mags = np.abs(np.asarray(coefficients))
    if cfg.sparsity_k is not None:
        if not mags.any():
            return ()
        return tuple(sorted(int(i) for i in _top_k_indices(mags, cfg.sparsity_k)))
    if not mags.any():
        return ()
    return tuple(int(i) for i in np.flatnonzero(mags > 0.1 * mags.max()))


def _finish(d: Dictionary, coefficients: np.ndarray, cfg: SolverConfig,
            samples: np.ndarray, mu: float | None = None) -> RecoveryResult:
    residual = samples - d.entries @ coefficients
    res_inf = float(np.max(np.abs(d.entries.conj().T @ residual)))
    support = extract_support(coefficients, cfg)
    return RecoveryResult(
        coefficients=coefficients,
        support=support,
        targets=_decode(d, coefficients, support),
        residual_inf_norm=res_inf,
        objective=float(np.sum(np.abs(coefficients))),
        mu=mu,
    )


def _dantzig_constraints(d: Dictionary, samples: np.ndarray):
    gram = d.entries.conj().T @ d.entries
    b = d.entries.conj().T @ samples
    a_ub = np.vstack([gram.real, -gram.real, gram.imag, -gram.imag])
    rhs = np.concatenate([b.real, -b.real, b.imag, -b.imag])
    return a_ub, rhs


def _min_polyhedral_residual(a_ub: np.ndarray, rhs: np.ndarray, n_cols: int) -> float:
    # min t s.t. A s - t <= rhs, s >= 0: smallest achievable box half-width
    c = np.zeros(n_cols + 1)
    c[-1] = 1.0
    a = np.hstack([a_ub, -np.ones((a_ub.shape[0], 1))])
    res = linprog(c, A_ub=a, b_ub=rhs, bounds=[(0, None)] * n_cols + [(0, None)],
                  method="highs", options=_LP_OPTIONS)
    return float(res.fun) if res.success else math.inf


def dantzig_select(d: Dictionary, y: Measurement, cfg: SolverConfig) -> RecoveryResult:
    """Dantzig selector over real non-negative coefficients.

    Minimizes sum(s) subject to max(|Re z_i|, |Im z_i|) <= mu/sqrt(2) with
    z = Psi^H (y - Psi s), a sufficient polyhedral condition for
    ||z||_inf <= mu. Raises InfeasibleError with the minimum achievable
    residual when the constraint set is empty.
    """
    samples = _check_measurement(d, y)
    mu = resolve_mu(d, y, y.noise_variance, cfg)
    t = mu / math.sqrt(2.0)
    a_ub, rhs = _dantzig_constraints(d, samples)
    res = linprog(np.ones(d.n_columns), A_ub=a_ub, b_ub=rhs + t,
                  bounds=(0, None), method="highs",
                  options={**_LP_OPTIONS, "time_limit": 300.0})
    if res.status == 2:  # infeasible
        min_box = _min_polyhedral_residual(a_ub, rhs, d.n_columns)
        raise InfeasibleError("Dantzig LP infeasible", mu, min_box * math.sqrt(2.0))
    if not res.success:
        raise SolverStalledError(f"LP solver stalled: {res.message}")
    coefficients = np.maximum(res.x, 0.0)
    result = _finish(d, coefficients, cfg, samples, mu=mu)
    if result.residual_inf_norm > mu * (1.0 + cfg.feasibility_tol):
        raise SolverStalledError(
            f"LP solution violates the mu constraint: "
            f"{result.residual_inf_norm:.6g} > {mu:.6g}"
        )
    return result


def bpdn(d: Dictionary, y: Measurement, cfg: SolverConfig) -> RecoveryResult:
    """Basis pursuit denoising over real non-negative coefficients.

    Minimizes sum(s) subject to ||y - Psi s||_2 <= epsilon. epsilon="auto"
    resolves to the expected noise-floor norm sqrt(N*sigma^2)*(1+2/sqrt(N)),
    floored at 1e-8 for noiseless data.
    """
    import cvxpy as cp

    samples = _check_measurement(d, y)
    if cfg.epsilon == "auto":
        n = d.n_pulses
        eps = max(math.sqrt(n * y.noise_variance) * (1.0 + 2.0 / math.sqrt(n)), 1e-8)
    else:
        eps = float(cfg.epsilon)

    a = np.vstack([d.entries.real, d.entries.imag])
    b = np.concatenate([samples.real, samples.imag])
    x = cp.Variable(d.n_columns, nonneg=True)
    problem = cp.Problem(cp.Minimize(cp.sum(x)), [cp.norm(a @ x - b, 2) <= eps])
    try:
        problem.solve(solver=cp.CLARABEL)
    except cp.error.SolverError as exc:
        raise SolverStalledError(f"BPDN solver failed: {exc}") from exc
    if problem.status in ("infeasible", "infeasible_inaccurate") or x.value is None:
        min_res, _ = _nonneg_min_residual(a, b)
        raise InfeasibleError("BPDN infeasible", eps, min_res)
    coefficients = np.maximum(np.asarray(x.value), 0.0)
    return _finish(d, coefficients, cfg, samples)


def _nonneg_min_residual(a: np.ndarray, b: np.ndarray) -> tuple[float, np.ndarray]:
    from scipy.optimize import nnls

    x, rnorm = nnls(a, b)
    return float(rnorm), x


def omp(d: Dictionary, y: Measurement, cfg: SolverConfig) -> RecoveryResult:
    """Orthogonal matching pursuit with complex least-squares refitting.

    Selects the column of maximum |correlation| with the residual (ties to
    the lowest index), refits on the selected set, and repeats until
    sparsity_k columns are chosen or the residual norm drops below the
    noise-floor threshold sqrt(N*sigma^2)*(1+2/sqrt(N)).
    """
    samples = _check_measurement(d, y)
    n = d.n_pulses
    if cfg.sparsity_k is not None:
        if cfg.sparsity_k > n:
            raise ValueError(f"sparsity_k {cfg.sparsity_k} exceeds pulse count {n}")
        max_select = cfg.sparsity_k
        threshold = 0.0
    else:
        max_select = min(n, cfg.max_iterations)
        threshold = math.sqrt(n * y.noise_variance) * (1.0 + 2.0 / math.sqrt(n))

    selected: list[int] = []
    residual = samples.copy()
    coefficients = np.zeros(d.n_columns, dtype=complex)
    fit = np.zeros(0, dtype=complex)
    while len(selected) < max_select and np.linalg.norm(residual) > threshold:
        corr = np.abs(d.entries.conj().T @ residual)
        corr[selected] = -1.0
        pick = int(np.argmax(corr))  # argmax returns the lowest index on ties
        selected.append(pick)
        basis = d.entries[:, selected]
        fit, *_ = np.linalg.lstsq(basis, samples, rcond=None)
        residual = samples - basis @ fit
    coefficients[selected] = fit[: len(selected)] if len(selected) else []
    return _finish(d, coefficients, cfg, samples)


_SOLVERS = {"dantzig": dantzig_select, "omp": omp, "bpdn": bpdn}


def solve(d: Dictionary, y: Measurement, cfg: SolverConfig) -> RecoveryResult:
    """Dispatch to the solver named by cfg.method."""
    return _SOLVERS[cfg.method](d, y, cfg)
