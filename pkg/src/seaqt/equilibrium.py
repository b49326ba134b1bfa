"""Gibbs/stable-equilibrium theory: partition functions, multiplier solving,
the generalized Gibbs identity, and equilibrium classification.

The stable equilibrium state for given mean values of the constants of the
motion is exp(-beta H + sum_k gamma_k C_k)/Z.  Multipliers are recovered
from target means by Newton iteration on the smooth convex dual
phi(m) = ln Z(m) + beta * target_h - sum_k gamma_k * target_k, whose gradient
is the mean-value mismatch and whose Hessian is the covariance matrix of the
constants at the current Gibbs state.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.special import logsumexp

from . import operators as op
from . import sea
from . import states as st
from .errors import NoConvergenceError, TargetInfeasibleError
from .operators import UnitSystem
from .states import StateOperator

FEASIBILITY_MARGIN = 1e-9
MEAN_RESIDUAL_TOL = 1e-10
MAX_NEWTON_ITERATIONS = 200


@dataclass(frozen=True)
class MultiplierVector:
    """beta (inverse energy) plus one dimensionless gamma per extra constant."""

    beta: float
    gammas: tuple = ()

    def as_array(self) -> np.ndarray:
        return np.array([self.beta, *self.gammas], dtype=float)

    @classmethod
    def from_array(cls, m) -> "MultiplierVector":
        m = np.asarray(m, dtype=float)
        return cls(float(m[0]), tuple(float(v) for v in m[1:]))


@dataclass(frozen=True)
class ConstantSet:
    """Operators of a complete independent set of linear constants: H first,
    then the extra commuting constants C_1 ... C_N."""

    operators: tuple
    units: UnitSystem = field(default_factory=UnitSystem)

    @property
    def H(self) -> np.ndarray:
        return self.operators[0]

    @property
    def dim(self) -> int:
        return self.H.shape[0]

    def __len__(self) -> int:
        return len(self.operators)


def constant_set(operators, units: UnitSystem | None = None) -> ConstantSet:
    """Validate Hermiticity, commutation with H, and linear independence."""
    ops = [op.require_hermitian(o, name=f"constant {i}") for i, o in enumerate(operators)]
    if not ops:
        raise ValueError("constant set needs at least the Hamiltonian")
    h = ops[0]
    scale = max(1.0, float(np.abs(h).max()))
    for i, c in enumerate(ops[1:], start=1):
        op.require_same_dim(c, h)
        defect = float(np.abs(op.commutator(c, h)).max())
        if defect > sea.COMMUTATION_TOL * scale:
            raise ValueError(f"constant {i} does not commute with H (defect {defect:.3e})")
    # independence must include the identity: the Gibbs parametrization is
    # gauge-degenerate when some combination of the constants is a multiple
    # of I, and the multiplier problem is then ill-posed
    eye = np.eye(h.shape[0], dtype=complex)
    stacked = np.column_stack([eye.ravel()] + [o.ravel() for o in ops])
    if np.linalg.matrix_rank(stacked, tol=1e-10) < len(ops) + 1:
        raise ValueError(
            "constants (with the identity) are linearly dependent under the "
            "trace inner product")
    return ConstantSet(tuple(ops), units or UnitSystem())


def _exponent(constants: ConstantSet, m: MultiplierVector) -> np.ndarray:
    coeffs = np.concatenate([[-m.beta], np.asarray(m.gammas, dtype=float)])
    out = np.zeros_like(constants.H)
    for coef, c in zip(coeffs, constants.operators):
        out = out + coef * c
    return out


def gibbs_state(constants: ConstantSet, m: MultiplierVector) -> StateOperator:
    """rho = exp(-beta H + sum gamma_k C_k)/Z, max-shifted against overflow."""
    vals, vecs = np.linalg.eigh(_exponent(constants, m))
    w = np.exp(vals - vals.max())
    w /= w.sum()
    return StateOperator(op.hermitize((vecs * w) @ vecs.conj().T))


def log_partition_function(constants: ConstantSet, m: MultiplierVector) -> float:
    """ln Z, computed as a logsumexp of the exponent spectrum."""
    vals = np.linalg.eigvalsh(_exponent(constants, m))
    return float(logsumexp(vals))


def partition_function(constants: ConstantSet, m: MultiplierVector) -> float:
    """Z = Tr exp(-beta H + sum gamma_k C_k) > 0 (may overflow for huge |m|;
    prefer log_partition_function for bookkeeping)."""
    return float(np.exp(log_partition_function(constants, m)))


def means_at(constants: ConstantSet, m: MultiplierVector) -> np.ndarray:
    rho = gibbs_state(constants, m)
    return np.array([st.mean(c, rho) for c in constants.operators])


def check_feasible(constants: ConstantSet, targets,
                   margin: float = FEASIBILITY_MARGIN) -> np.ndarray:
    """Each target must lie strictly between the extreme eigenvalues of its
    constant; boundary targets are rejected (they need infinite multipliers)."""
    targets = np.asarray(targets, dtype=float)
    if targets.shape != (len(constants),):
        raise ValueError(f"expected {len(constants)} targets, got {targets.shape}")
    for c, t in zip(constants.operators, targets):
        vals = np.linalg.eigvalsh(c)
        lo, hi = float(vals[0]), float(vals[-1])
        if not (lo + margin < t < hi - margin):
            raise TargetInfeasibleError(
                f"target {float(t)!r} outside attainable range ({lo:g}, {hi:g})")
    return targets


def _dual_value(constants: ConstantSet, m_arr: np.ndarray, targets: np.ndarray) -> float:
    m = MultiplierVector.from_array(m_arr)
    lz = log_partition_function(constants, m)
    return lz + m_arr[0] * targets[0] - float(np.dot(m_arr[1:], targets[1:]))


def solve_multipliers(constants: ConstantSet, target_means,
                      tol: float = MEAN_RESIDUAL_TOL,
                      max_iter: int = MAX_NEWTON_ITERATIONS) -> MultiplierVector:
    """Newton iteration on the convex dual, damped by a halving line search.

    Starts from m = 0 (the maximally mixed state, always interior).  The
    Jacobian of the mean map is the covariance matrix of the constants at the
    current Gibbs state, which is positive semidefinite.
    """
    targets = check_feasible(constants, target_means)
    n = len(constants)
    m_arr = np.zeros(n)
    # gradient sign convention: d(lnZ)/d(beta) = -h_mean, d(lnZ)/d(gamma_k) = +c_mean
    sign = np.concatenate([[-1.0], np.ones(n - 1)])
    phi = _dual_value(constants, m_arr, targets)
    for _ in range(max_iter):
        rho = gibbs_state(constants, MultiplierVector.from_array(m_arr))
        means = np.array([st.mean(c, rho) for c in constants.operators])
        residual = means - targets
        if float(np.linalg.norm(residual)) <= tol:
            return MultiplierVector.from_array(m_arr)
        grad = sign * residual
        cov = 0.5 * np.array(
            [[st.covariance_product(a, b, rho) for b in constants.operators]
             for a in constants.operators])
        hess = (sign[:, None] * cov) * sign[None, :]
        # regularize the PSD Hessian slightly so Newton never stalls flat
        reg = 1e-12 * max(1.0, float(np.trace(hess)))
        step = np.linalg.solve(hess + reg * np.eye(n), -grad)
        alpha = 1.0
        for _ in range(60):
            trial = m_arr + alpha * step
            phi_trial = _dual_value(constants, trial, targets)
            if phi_trial <= phi + 1e-4 * alpha * float(np.dot(grad, step)):
                break
            alpha *= 0.5
        m_arr = m_arr + alpha * step
        phi = _dual_value(constants, m_arr, targets)
    raise NoConvergenceError(
        f"multiplier solve did not reach residual {tol:g} in {max_iter} iterations")


def gibbs_identity_residual(constants: ConstantSet, m: MultiplierVector) -> float:
    """|s - (k beta h - k sum gamma_k c_k + k ln Z)| at the Gibbs state."""
    k = constants.units.k_B
    rho = gibbs_state(constants, m)
    s = st.entropy(rho, k=k)
    means = np.array([st.mean(c, rho) for c in constants.operators])
    lz = log_partition_function(constants, m)
    predicted = k * m.beta * means[0] \
        - k * float(np.dot(np.asarray(m.gammas, dtype=float), means[1:])) \
        + k * lz
    return abs(s - predicted)


# ---------------------------------------------------------------------------
# Classification
# ---------------------------------------------------------------------------

NON_EQUILIBRIUM = "NonEquilibrium"
EQUILIBRIUM = "Equilibrium"
STABLE_EQUILIBRIUM = "StableEquilibrium"


def max_entropy_with_means(constants: ConstantSet, targets,
                           entropy_tol: float = 1e-8) -> float:
    """Entropy of the maximum-entropy state with the given mean values.

    Interior targets give the full-rank Gibbs state.  A target pinned at an
    extreme eigenvalue confines the state to that eigenspace; the problem is
    then reduced to the subspace and re-solved for the remaining constants.
    """
    targets = np.asarray(targets, dtype=float)
    ops = list(constants.operators)
    dim = constants.dim
    basis = np.eye(dim, dtype=complex)
    while True:
        reduced = False
        for idx, (c, t) in enumerate(zip(ops, targets)):
            vals, vecs = np.linalg.eigh(c)
            lo, hi = float(vals[0]), float(vals[-1])
            for edge in (lo, hi):
                if abs(t - edge) <= FEASIBILITY_MARGIN:
                    keep = np.abs(vals - edge) <= 1e-9 * max(1.0, abs(edge))
                    proj = vecs[:, keep]
                    basis = basis @ proj
                    ops = [proj.conj().T @ o @ proj for o in ops]
                    ops.pop(idx)
                    targets = np.delete(targets, idx)
                    reduced = True
                    break
            if reduced:
                break
        if not reduced:
            break
    sub_dim = basis.shape[1]
    if sub_dim == 1 or not ops:
        return 0.0 if sub_dim == 1 else constants.units.k_B * float(np.log(sub_dim))
    sub = constant_set(ops, units=constants.units)
    m = solve_multipliers(sub, targets)
    return st.entropy(gibbs_state(sub, m), k=constants.units.k_B)


def classify(rho, constants: ConstantSet, model: sea.SingleConstituentModel,
             tol: float = 1e-9, entropy_tol: float = 1e-8) -> str:
    """NonEquilibrium, Equilibrium, or StableEquilibrium.

    Stability means the state attains the constrained entropy maximum: no
    other state with the same mean values of the constants has higher entropy.
    """
    rho = rho if isinstance(rho, StateOperator) else st.validate(rho)
    report = sea.is_equilibrium(rho, model, tol=tol)
    if not report.is_equilibrium:
        return NON_EQUILIBRIUM
    targets = [st.mean(c, rho) for c in constants.operators]
    s_max = max_entropy_with_means(constants, targets)
    s_rho = st.entropy(rho, k=constants.units.k_B)
    if s_rho >= s_max - entropy_tol:
        return STABLE_EQUILIBRIUM
    return EQUILIBRIUM
