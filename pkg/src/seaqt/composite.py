"""Composite-system equation of motion with per-constituent dissipators.

Each elementary constituent J contributes a factor-local Gram-determinant
dissipator built from its reduced log operator W(J), reduced Hamiltonian
V(J), and its own generators, all paired in the covariance product of the
reduced state rho(J).  The full dissipative term is the tensor embedding
{D(J), rho(J)} (x) rho(J') summed over constituents.

W(J) needs ln(rho) of the full composite state, which exists only for
full-rank rho.  Exact products of pure states branch to Hamiltonian-only
evolution; any other state with an eigenvalue below the log floor raises
``SingularCompositeStateError`` (the documented workflow is to mix with
epsilon >= 1e-8 of the identity before integrating).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import operators as op
from .errors import (DimensionMismatchError, NonCommutingGeneratorError,
                     NonPositiveTauError, SingularCompositeStateError)
from .operators import UnitSystem
from .states import StateOperator

LOG_FLOOR = 1e-12          # eigenvalues below this make ln(rho) unusable
PURE_FACTOR_TOL = 1e-10    # spectral weight off the top factor eigenvalue
SEPARABILITY_TOL = 1e-10
INDEPENDENCE_TOL = 1e-8


@dataclass(frozen=True)
class Constituent:
    """One elementary constituent: factor dimension, generators on the factor
    space, and its relaxation time constant."""

    dim: int
    generators: tuple = ()
    tau: float = 1.0


@dataclass(frozen=True)
class CompositeModel:
    constituents: tuple
    H: np.ndarray
    units: UnitSystem = field(default_factory=UnitSystem)

    @property
    def dims(self) -> list[int]:
        return [c.dim for c in self.constituents]

    @property
    def dim(self) -> int:
        return int(np.prod(self.dims))

    def lifted_generator(self, j: int, x: np.ndarray) -> np.ndarray:
        return op.embed_factors({j: x}, self.dims)


def validate_model(model: CompositeModel) -> CompositeModel:
    """Dimensional consistency, Hermiticity, tau > 0, and commutation of every
    lifted generator with the composite Hamiltonian."""
    h = op.require_hermitian(model.H, name="H")
    dims = model.dims
    if int(np.prod(dims)) != h.shape[0]:
        raise DimensionMismatchError(
            f"H has dim {h.shape[0]} but factors give {int(np.prod(dims))}")
    scale = max(1.0, float(np.abs(h).max()))
    new_constituents = []
    for j, c in enumerate(model.constituents):
        if c.tau <= 0:
            raise NonPositiveTauError(f"constituent {j}: tau must be positive")
        gens = []
        for i, x in enumerate(c.generators):
            x = op.require_hermitian(x, name=f"constituent {j} generator {i}")
            if x.shape[0] != c.dim:
                raise DimensionMismatchError(
                    f"constituent {j} generator {i} has dim {x.shape[0]}, expected {c.dim}")
            lifted = op.embed_factors({j: x}, dims)
            defect = float(np.abs(op.commutator(lifted, h)).max())
            if defect > 1e-10 * scale:
                raise NonCommutingGeneratorError(
                    f"lifted generator {i} of constituent {j} does not commute "
                    f"with H (defect {defect:.3e})")
            gens.append(x)
        new_constituents.append(Constituent(c.dim, tuple(gens), c.tau))
    return CompositeModel(tuple(new_constituents), h, model.units)


def _matrix(rho) -> np.ndarray:
    return rho.matrix if isinstance(rho, StateOperator) else op.as_complex(rho)


def reduced_state(rho, model: CompositeModel, j: int) -> StateOperator:
    """Reduced state operator of constituent j (partial trace over the rest)."""
    m = _matrix(rho)
    if not 0 <= j < len(model.constituents):
        raise IndexError(f"constituent index {j} out of range")
    sub = op.partial_trace(m, model.dims, keep=[j])
    return StateOperator(op.hermitize(sub))


def subsystem_state(rho, model: CompositeModel, indices) -> StateOperator:
    sub = op.partial_trace(_matrix(rho), model.dims, keep=sorted(indices))
    return StateOperator(op.hermitize(sub))


def _complement_embedding(rho, model: CompositeModel, j: int) -> np.ndarray:
    """(I(j) (x) rho(j')) as an operator on the full space."""
    dims = model.dims
    others = [i for i in range(len(dims)) if i != j]
    if not others:
        return np.eye(dims[j], dtype=complex)
    rho_rest = op.partial_trace(_matrix(rho), dims, keep=others)
    return op.tensor_interleave(np.eye(dims[j], dtype=complex), [j], rho_rest, dims)


def reduced_hamiltonian(rho, model: CompositeModel, j: int) -> np.ndarray:
    """V(j) = Tr_{j'}((I(j) (x) rho(j')) H); for a separable constituent this
    is its private Hamiltonian shifted by the complement's mean energy."""
    if not 0 <= j < len(model.constituents):
        raise IndexError(f"constituent index {j} out of range")
    weighted = _complement_embedding(rho, model, j) @ model.H
    v = op.partial_trace(weighted, model.dims, keep=[j])
    return op.hermitize(v)


def _full_log(rho: StateOperator, strict: bool = True) -> np.ndarray:
    """ln(rho) by eigendecomposition.

    strict=True enforces the documented domain: states with an eigenvalue
    below the log floor are rejected.  strict=False clamps eigenvalues at the
    floor instead; integrator trial steps perturb tiny eigenvalues negative
    by O(dt^2), so the right-hand side needs a continuous extension off the
    state manifold.  Accepted states in the supported workflow (identity
    mixing with epsilon >= 1e-8) never reach the clamp.
    """
    p = rho.spectral.eigenvalues
    if strict and p[-1] < LOG_FLOOR:
        raise SingularCompositeStateError(
            f"composite state has eigenvalue {p[-1]:.3e} below the log floor "
            f"{LOG_FLOOR:g}; mix with identity (epsilon >= 1e-8) before use")
    u = rho.spectral.eigenvectors
    return (u * np.log(np.maximum(p, LOG_FLOOR))) @ u.conj().T


def reduced_log(rho, model: CompositeModel, j: int) -> np.ndarray:
    """W(j) = Tr_{j'}((I(j) (x) rho(j')) ln rho), defined on full-rank states.

    For an independent constituent this reduces to
    ln rho(j) - (sbar(j')/k) I.  Exact products of pure states carry no
    finite W(j); they are handled by the pure-product branch of the equation
    of motion, and calling this directly on one raises.
    """
    rho = rho if isinstance(rho, StateOperator) else StateOperator(op.hermitize(_matrix(rho)))
    log_full = _full_log(rho)
    weighted = _complement_embedding(rho, model, j) @ log_full
    return op.hermitize(op.partial_trace(weighted, model.dims, keep=[j]))


def is_pure_product(rho, model: CompositeModel) -> bool:
    """True when the state is (numerically exactly) a product of pure factor
    states: all spectral weight on one global eigenvector and every reduced
    state pure."""
    rho = rho if isinstance(rho, StateOperator) else StateOperator(op.hermitize(_matrix(rho)))
    if float(np.sum(rho.spectral.eigenvalues[1:])) > PURE_FACTOR_TOL:
        return False
    for j in range(len(model.constituents)):
        sub = reduced_state(rho, model, j)
        if float(np.sum(sub.spectral.eigenvalues[1:])) > PURE_FACTOR_TOL:
            return False
    return True


def _factor_dissipator(rho: StateOperator, model: CompositeModel, j: int,
                       log_full: np.ndarray):
    """{D(j), rho(j)} and the scalar Gram pieces for constituent j.

    Returns (acomm, gram) where gram is over [W(j), V(j), X(j), ...] in the
    factor-local covariance product.
    """
    dims = model.dims
    rho_j = reduced_state(rho, model, j).matrix
    embed = _complement_embedding(rho, model, j)
    w_j = op.hermitize(op.partial_trace(embed @ log_full, dims, keep=[j]))
    v_j = op.hermitize(op.partial_trace(embed @ model.H, dims, keep=[j]))
    ops = [w_j, v_j, *model.constituents[j].generators]
    n = len(ops)
    means = [float(np.trace(rho_j @ f).real) for f in ops]
    gram = np.empty((n, n))
    for a in range(n):
        fa_rho = ops[a] @ rho_j + rho_j @ ops[a]
        for b in range(a, n):
            val = float(np.trace(fa_rho @ ops[b]).real) - 2.0 * means[a] * means[b]
            gram[a, b] = gram[b, a] = val
    acomms = [ops[a] @ rho_j + rho_j @ ops[a] - 2.0 * means[a] * rho_j
              for a in range(n)]
    cols = np.arange(n)
    acomm = np.zeros_like(rho_j)
    for col in range(n):
        minor = gram[1:, cols != col]
        c = (-1.0) ** col * np.linalg.det(minor)
        acomm = acomm + c * acomms[col]
    return op.hermitize(acomm), gram


def dissipative_term(rho, model: CompositeModel) -> np.ndarray:
    """Sum_J (tau(J)/hbar^2) {D(J), rho(J)} (x) rho(J') on the full space.

    Zero (exactly) on pure products; raises on other singular states.
    """
    strict = isinstance(rho, StateOperator)
    rho = rho if strict else StateOperator(op.hermitize(_matrix(rho)))
    if is_pure_product(rho, model):
        return np.zeros_like(rho.matrix)
    log_full = _full_log(rho, strict=strict)
    dims = model.dims
    hbar = model.units.hbar
    out = np.zeros_like(rho.matrix)
    for j, c in enumerate(model.constituents):
        acomm, _ = _factor_dissipator(rho, model, j, log_full)
        if len(dims) == 1:
            term = acomm
        else:
            others = [i for i in range(len(dims)) if i != j]
            rho_rest = op.partial_trace(rho.matrix, dims, keep=others)
            term = op.tensor_interleave(acomm, [j], rho_rest, dims)
        out = out + c.tau / hbar**2 * term
    return out


def composite_rhs(rho, model: CompositeModel) -> np.ndarray:
    """d rho/dt = -(i/hbar)[H, rho] - sum_J (tau(J)/hbar^2) {D(J), rho(J)} (x) rho(J')."""
    m = _matrix(rho)
    hbar = model.units.hbar
    return -1j / hbar * op.commutator(model.H, m) - dissipative_term(rho, model)


def composite_entropy_production(rho, model: CompositeModel):
    """Total rate sum_J k tau(J) g(J) / hbar^2 and the per-constituent g(J) >= 0."""
    strict = isinstance(rho, StateOperator)
    rho = rho if strict else StateOperator(op.hermitize(_matrix(rho)))
    if is_pure_product(rho, model):
        return 0.0, [0.0] * len(model.constituents)
    log_full = _full_log(rho, strict=strict)
    u = model.units
    per = []
    for j, c in enumerate(model.constituents):
        _, gram = _factor_dissipator(rho, model, j, log_full)
        per.append(float(np.linalg.det(gram)))
    total = sum(u.k_B * c.tau * g / u.hbar**2
                for c, g in zip(model.constituents, per))
    return total, per


def entropy_rate_pairing(rho, model: CompositeModel) -> float:
    """-k Tr(composite_rhs ln rho) on full-rank states."""
    rho = rho if isinstance(rho, StateOperator) else StateOperator(op.hermitize(_matrix(rho)))
    log_full = _full_log(rho)
    rhs = composite_rhs(rho, model)
    return -model.units.k_B * float(np.trace(rhs @ log_full).real)


# ---------------------------------------------------------------------------
# Partitions, separability, independence
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SubsystemPartition:
    """Disjoint index blocks covering all constituents."""

    blocks: tuple

    def __post_init__(self):
        seen = set()
        for block in self.blocks:
            for idx in block:
                if idx in seen:
                    raise ValueError(f"constituent {idx} appears in two blocks")
                seen.add(idx)

    def validate_for(self, model: CompositeModel) -> None:
        covered = sorted(i for block in self.blocks for i in block)
        if covered != list(range(len(model.constituents))):
            raise ValueError(
                f"partition {self.blocks} does not cover constituents "
                f"0..{len(model.constituents) - 1}")

    def complement(self, block) -> list:
        inside = set(block)
        all_idx = sorted(i for b in self.blocks for i in b)
        return [i for i in all_idx if i not in inside]


def bipartite_split(model: CompositeModel, block) -> tuple[list, list, list]:
    keep = sorted(block)
    rest = [i for i in range(len(model.constituents)) if i not in keep]
    if not keep or not rest:
        raise ValueError("split needs a proper nonempty subsystem")
    return keep, rest, model.dims


def separability_residual(model: CompositeModel, block) -> float:
    """Frobenius distance from H to its best additive split H(K) + H(K').

    The private part is extracted by normalized partial trace; the scalar
    offset ambiguity cancels in the residual.
    """
    if not block:
        raise ValueError("block must be nonempty")
    keep = sorted(block)
    rest = [i for i in range(len(model.constituents)) if i not in keep]
    dims = model.dims
    if not rest:
        return 0.0
    d_keep = int(np.prod([dims[i] for i in keep]))
    d_rest = int(np.prod([dims[i] for i in rest]))
    total_mean = float(np.trace(model.H).real) / (d_keep * d_rest)
    h_keep = op.partial_trace(model.H, dims, keep=keep) / d_rest \
        - total_mean * np.eye(d_keep)
    h_rest = op.partial_trace(model.H, dims, keep=rest) / d_keep
    split = op.tensor_interleave(h_keep, keep, np.eye(d_rest, dtype=complex), dims) \
        + op.tensor_interleave(np.eye(d_keep, dtype=complex), keep, h_rest, dims)
    return float(np.linalg.norm(model.H - split, ord="fro"))


def is_separable(model: CompositeModel, partition: SubsystemPartition, block) -> tuple[bool, float]:
    partition.validate_for(model)
    residual = separability_residual(model, block)
    scale = max(1.0, float(np.linalg.norm(model.H, ord="fro")))
    return residual <= SEPARABILITY_TOL * scale, residual


def private_hamiltonian(model: CompositeModel, block) -> np.ndarray:
    """H(K) from the normalized partial trace, with the composite trace offset
    assigned to the complement block."""
    keep = sorted(block)
    rest = [i for i in range(len(model.constituents)) if i not in keep]
    dims = model.dims
    d_keep = int(np.prod([dims[i] for i in keep]))
    d_rest = int(np.prod([dims[i] for i in rest])) if rest else 1
    total_mean = float(np.trace(model.H).real) / (d_keep * d_rest)
    return op.hermitize(op.partial_trace(model.H, dims, keep=keep) / d_rest
                        - total_mean * np.eye(d_keep))


def is_independent_state(rho, model: CompositeModel,
                         partition: SubsystemPartition, block) -> tuple[bool, float]:
    """True when rho factors as rho(K) (x) rho(K') across the split."""
    partition.validate_for(model)
    keep = sorted(block)
    rest = [i for i in range(len(model.constituents)) if i not in keep]
    m = _matrix(rho)
    rho_k = op.partial_trace(m, model.dims, keep=keep)
    rho_rest = op.partial_trace(m, model.dims, keep=rest)
    product = op.tensor_interleave(rho_k, keep, rho_rest, model.dims)
    dist = float(np.linalg.norm(m - product, ord="fro"))
    return dist <= INDEPENDENCE_TOL, dist


def reduced_rhs(rho, model: CompositeModel, partition: SubsystemPartition,
                block) -> np.ndarray:
    """Reduced equation of motion for subsystem K: partial trace of the
    Hamiltonian term plus the dissipative terms of K's own constituents,
    each embedded against the reduced state of the rest of K."""
    partition.validate_for(model)
    keep = sorted(block)
    strict = isinstance(rho, StateOperator)
    rho = rho if strict else StateOperator(op.hermitize(_matrix(rho)))
    dims = model.dims
    hbar = model.units.hbar
    ham = -1j / hbar * op.partial_trace(op.commutator(model.H, rho.matrix),
                                        dims, keep=keep)
    if is_pure_product(rho, model):
        return ham
    log_full = _full_log(rho, strict=strict)
    dims_k = [dims[i] for i in keep]
    out = ham
    for local_pos, j in enumerate(keep):
        acomm, _ = _factor_dissipator(rho, model, j, log_full)
        if len(keep) == 1:
            term = acomm
        else:
            others = [i for i in keep if i != j]
            rho_rest_k = op.partial_trace(rho.matrix, dims, keep=others)
            term = op.tensor_interleave(acomm, [local_pos], rho_rest_k, dims_k)
        out = out - model.constituents[j].tau / hbar**2 * term
    return out


def composite_constant_check(c, model: CompositeModel,
                             tol: float = 1e-9):
    """C is a constant of the motion iff [C, H] = 0 and C lies in the span of
    {I, H, lifted generators} under the trace inner product."""
    c = op.require_hermitian(c, name="C")
    op.require_same_dim(c, model.H)
    scale = max(1.0, float(np.abs(model.H).max()))
    commutes = float(np.abs(op.commutator(c, model.H)).max()) <= 1e-10 * scale
    span_ops = [np.eye(model.dim, dtype=complex), model.H]
    for j, constituent in enumerate(model.constituents):
        for x in constituent.generators:
            span_ops.append(model.lifted_generator(j, x))
    basis = np.column_stack([s.ravel() for s in span_ops])
    coeffs, *_ = np.linalg.lstsq(basis, c.ravel(), rcond=None)
    residual = float(np.linalg.norm(basis @ coeffs - c.ravel()))
    in_span = residual <= tol * max(float(np.linalg.norm(c.ravel())), 1e-300)
    from .sea import ConstantReport
    return ConstantReport(commutes, in_span, residual)
