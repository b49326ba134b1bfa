"""Steepest-entropy-ascent equation of motion for a single constituent.

The dissipative term is the anticommutator {D, rho} of an operator-valued
Gram determinant whose first row holds the deviation operators
(Delta ln rho, Delta H, Delta X, ...) and whose remaining rows are scalar
covariance products of the generators against those same columns.  The
determinant is evaluated by cofactor expansion along the operator row;
generator counts are small, so exact expansion is cheap and mirrors the
analytic structure.

All ln(rho) occurrences enter through the entropy-regular forms
(states.rho_log_rho and friends), so singular states need no eigenvalue
flooring: {Delta ln rho, rho} = 2 (B - Tr(B) rho) with B = rho ln rho.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field, replace

import numpy as np

from . import operators as op
from . import states as st
from .errors import (DimensionMismatchError, NonCommutingGeneratorError,
                     NonPositiveTauError)
from .operators import UnitSystem
from .states import StateOperator

COMMUTATION_TOL = 1e-10       # relative, against ||H||_max
GRAM_CONDITION_WARN = 1e8
SPAN_RESIDUAL_TOL = 1e-9
SUPPORT_FLOOR = 1e-12         # eigenvalues above this count as support
PURE_BRANCH_TOL = 1e-10       # spectral weight off the top eigenvalue below
                              # this takes the exact pure-state branch; kept
                              # well under the documented 1e-8 mixing floor


class GramConditionWarning(UserWarning):
    """Generator Gram matrix is near-degenerate at the probed state."""


@dataclass(frozen=True)
class SingleConstituentModel:
    """Hamiltonian, non-Hamiltonian generators, and relaxation time tau.

    The generators are dimensionless Hermitian operators, each commuting
    with H.  No default exists for tau: its physical value is an open
    problem, so it is always a user input.
    """

    H: np.ndarray
    generators: tuple = ()
    tau: float = 1.0
    units: UnitSystem = field(default_factory=UnitSystem)

    @property
    def dim(self) -> int:
        return self.H.shape[0]

    def operator_list(self) -> list[np.ndarray]:
        """The scalar-row operators of the dissipative determinant: H, X, ..., Y."""
        return [self.H, *self.generators]


def validate_model(model: SingleConstituentModel) -> SingleConstituentModel:
    """Check Hermiticity, commutation and tau; warn on near-degenerate Gram.

    Returns the model with symmetrized operators.  The Gram condition number
    of the generators is probed at rho = I/dim and a warning is issued above
    1e8 (duplicate generators degrade gracefully to zero minors, but silence
    would hide the degeneracy).
    """
    if model.tau <= 0:
        raise NonPositiveTauError(f"tau must be positive, got {model.tau}")
    h = op.require_hermitian(model.H, name="H")
    scale = max(1.0, float(np.abs(h).max()))
    gens = []
    for i, x in enumerate(model.generators):
        x = op.require_hermitian(x, name=f"generator {i}")
        op.require_same_dim(x, h)
        defect = float(np.abs(op.commutator(x, h)).max())
        if defect > COMMUTATION_TOL * scale:
            raise NonCommutingGeneratorError(
                f"generator {i} does not commute with H (defect {defect:.3e})")
        gens.append(x)
    validated = replace(model, H=h, generators=tuple(gens))
    cond = gram_condition_number(st.StateOperator(np.eye(h.shape[0]) / h.shape[0]),
                                 validated)
    if cond > GRAM_CONDITION_WARN:
        warnings.warn(
            f"generator Gram matrix at I/dim has condition number {cond:.3e}",
            GramConditionWarning, stacklevel=2)
    return validated


def _pair_table(rho_m: np.ndarray, ops: list[np.ndarray]) -> np.ndarray:
    """Scalar covariance products (F_a, F_b) = Tr(rho {F_a, F_b}) - 2 fbar_a fbar_b."""
    n = len(ops)
    means = np.array([np.trace(rho_m @ f).real for f in ops])
    table = np.empty((n, n))
    for a in range(n):
        fa_rho = ops[a] @ rho_m + rho_m @ ops[a]
        for b in range(a, n):
            val = np.trace(fa_rho @ ops[b]).real - 2.0 * means[a] * means[b]
            table[a, b] = table[b, a] = val
    return table


def _log_pairs(rho: StateOperator, ops: list[np.ndarray]):
    """Regular-form pieces involving ln rho: B, Tr B, and (F_a, ln rho)."""
    b = st.rho_log_rho(rho)
    tr_b = float(np.trace(b).real)
    m = rho.matrix
    pairs = np.array([
        2.0 * (np.trace(f @ b).real - np.trace(m @ f).real * tr_b)
        for f in ops])
    return b, tr_b, pairs


def _gram_matrix(rho: StateOperator, model: SingleConstituentModel) -> np.ndarray:
    """Full Gram matrix over {ln rho, H, X, ..., Y} in the (., .)_rho product."""
    ops = model.operator_list()
    table = _pair_table(rho.matrix, ops)
    _, _, log_pairs = _log_pairs(rho, ops)
    n = len(ops)
    gram = np.empty((n + 1, n + 1))
    gram[0, 0] = st.log_variance(rho)
    gram[0, 1:] = log_pairs
    gram[1:, 0] = log_pairs
    gram[1:, 1:] = table
    return gram


def gram_condition_number(rho: StateOperator, model: SingleConstituentModel) -> float:
    """Condition number of the generator Gram block [(F_a, F_b)] at rho."""
    table = _pair_table(rho.matrix, model.operator_list())
    return float(np.linalg.cond(table))


def dissipator_anticommutator(rho, model: SingleConstituentModel) -> np.ndarray:
    """{D, rho} with D the operator-valued determinant of the dissipative term.

    Cofactor expansion along the operator row:
    {D, rho} = sum_j c_j {Delta(col_j), rho}, where col_0 = ln rho and the
    remaining columns are H, X, ..., Y; c_j is the signed minor of the scalar
    Gram rows with column j removed.
    """
    rho = rho if isinstance(rho, StateOperator) else StateOperator(op.hermitize(rho))
    ops = model.operator_list()
    if ops[0].shape != rho.matrix.shape:
        raise DimensionMismatchError(
            f"state dim {rho.matrix.shape} vs model dim {ops[0].shape}")
    # Pure states are exact fixed points of the dissipative term (rho ln rho
    # is the null operator); returning an exact zero keeps integrator
    # round-off from seeding the entropy-ascent instability of that manifold.
    # Judged on the clipped spectrum so that trial steps overshooting purity
    # still branch.
    if float(np.sum(rho.spectral.eigenvalues[1:])) <= PURE_BRANCH_TOL:
        return np.zeros_like(rho.matrix)
    m = rho.matrix
    b, tr_b, log_pairs = _log_pairs(rho, ops)
    table = _pair_table(m, ops)
    n = len(ops)
    # scalar rows of the determinant: generators against columns [ln rho, ops...]
    rows = np.hstack([log_pairs.reshape(n, 1), table])
    # anticommutators {Delta(col_j), rho} for each column operator
    acomms = [2.0 * (b - tr_b * m)]
    means = [np.trace(m @ f).real for f in ops]
    for f, fbar in zip(ops, means):
        acomms.append(f @ m + m @ f - 2.0 * fbar * m)
    cols = np.arange(n + 1)
    out = np.zeros_like(m)
    for j in range(n + 1):
        minor = rows[:, cols != j]
        c_j = (-1.0) ** j * np.linalg.det(minor)
        out = out + c_j * acomms[j]
    return op.hermitize(out)


def sea_rhs(rho, model: SingleConstituentModel) -> np.ndarray:
    """d rho/dt = -(i/hbar) [H, rho] - (tau/hbar^2) {D, rho}; traceless."""
    m = st._as_matrix(rho)
    hbar = model.units.hbar
    ham = -1j / hbar * op.commutator(model.H, m)
    diss = model.tau / hbar**2 * dissipator_anticommutator(rho, model)
    return ham - diss


def gram_determinant_g(rho, model: SingleConstituentModel) -> float:
    """Entropy-production Gram determinant over {ln rho, H, X, ..., Y}; >= 0."""
    rho = rho if isinstance(rho, StateOperator) else StateOperator(op.hermitize(rho))
    return float(np.linalg.det(_gram_matrix(rho, model)))


def entropy_production_rate(rho, model: SingleConstituentModel) -> float:
    """ds/dt = k tau g / hbar^2; equals -k Tr(rhs ln rho) on full-rank states."""
    u = model.units
    return u.k_B * model.tau * gram_determinant_g(rho, model) / u.hbar**2


def entropy_rate_pairing(rho, model: SingleConstituentModel) -> float:
    """-k Tr(sea_rhs(rho) ln rho), evaluated spectrally (full-rank rho)."""
    rho = rho if isinstance(rho, StateOperator) else StateOperator(op.hermitize(rho))
    p, u = rho.spectral.eigenvalues, rho.spectral.eigenvectors
    log_rho = (u * np.log(np.maximum(p, st.LOG_ZERO_CUTOFF))) @ u.conj().T
    rhs = sea_rhs(rho, model)
    return -model.units.k_B * float(np.trace(rhs @ log_rho).real)


@dataclass(frozen=True)
class ConstantReport:
    commutes_with_H: bool
    in_span: bool
    residual: float

    @property
    def is_constant(self) -> bool:
        return self.commutes_with_H and self.in_span


def is_constant_of_motion(c, model: SingleConstituentModel,
                          tol: float = SPAN_RESIDUAL_TOL) -> ConstantReport:
    """C is a constant of the motion iff [C, H] = 0 and C lies in
    span{I, H, X, ..., Y} under the trace inner product."""
    c = op.require_hermitian(c, name="C")
    op.require_same_dim(c, model.H)
    dim = model.dim
    scale = max(1.0, float(np.abs(model.H).max()))
    commutes = float(np.abs(op.commutator(c, model.H)).max()) <= COMMUTATION_TOL * scale
    span_ops = [np.eye(dim, dtype=complex), *model.operator_list()]
    basis = np.column_stack([s.ravel() for s in span_ops])
    coeffs, *_ = np.linalg.lstsq(basis, c.ravel(), rcond=None)
    residual = float(np.linalg.norm(basis @ coeffs - c.ravel()))
    c_norm = max(np.linalg.norm(c.ravel()), 1e-300)
    return ConstantReport(commutes, residual <= tol * c_norm, residual)


@dataclass(frozen=True)
class EquilibriumReport:
    commutes: bool
    spectral_match: bool
    rhs_norm: float
    multipliers: np.ndarray | None = None

    @property
    def is_equilibrium(self) -> bool:
        return self.commutes and self.spectral_match


def is_equilibrium(rho, model: SingleConstituentModel,
                   tol: float = 1e-9) -> EquilibriumReport:
    """Equilibrium test: [rho, H] = 0 and p_i = exp(R_i)/z on the support,
    for some R = -beta H + chi X + ... fitted by least squares.

    Projectors onto H-eigenvectors pass (single support point fits exactly);
    coherences fail the commutation check.  The rhs norm is attached as a
    numerical cross-check: every equilibrium state is a fixed point.
    """
    rho = rho if isinstance(rho, StateOperator) else st.validate(rho)
    h = model.H
    scale = max(1.0, float(np.linalg.norm(h, ord="fro")))
    commutes = op.frobenius_norm(op.commutator(rho.matrix, h)) <= tol * scale
    rhs_norm = op.frobenius_norm(sea_rhs(rho, model))
    if not commutes:
        return EquilibriumReport(False, False, rhs_norm)
    # work in the state eigenbasis; on the support, ln p must be affine in
    # the diagonal entries of the generators
    spec = rho.spectral
    p, u = spec.eigenvalues, spec.eigenvectors
    support = p > SUPPORT_FLOOR
    ops = model.operator_list()
    diag_cols = [np.real(np.einsum("ij,jk,ki->i", u.conj().T, f, u)) for f in ops]
    a = np.column_stack([np.ones(int(support.sum())),
                         *[col[support] for col in diag_cols]])
    y = np.log(p[support])
    coeffs, *_ = np.linalg.lstsq(a, y, rcond=None)
    fit_residual = float(np.max(np.abs(a @ coeffs - y))) if a.shape[0] else 0.0
    # the fitted R must actually share the state's eigenbasis on the support
    r_fit = coeffs[0] * np.eye(rho.dim, dtype=complex)
    for coef, f in zip(coeffs[1:], ops):
        r_fit = r_fit + coef * f
    r_scale = max(1.0, float(np.linalg.norm(r_fit, ord="fro")))
    shares_basis = op.frobenius_norm(op.commutator(rho.matrix, r_fit)) <= tol * r_scale
    spectral_match = fit_residual <= max(tol, 1e3 * tol * np.abs(y).max(initial=1.0)) \
        and shares_basis
    return EquilibriumReport(commutes, bool(spectral_match), rhs_norm,
                             multipliers=coeffs[1:])
