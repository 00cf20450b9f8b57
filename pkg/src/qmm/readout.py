"""Classical (entrywise) matrix multiplication through the quantum
estimators, with absolute per-entry accuracy.

Every entry c_ij = ||A_i.|| ||B_.j|| <row_i|col_j> is recovered either from
a direct overlap estimate (swap route) or from the overlap of a basis state
with the singular-value-rotated column state (sve/hhl routes). The quantum
accuracy is budgeted per entry so that the absolute error never exceeds the
requested eps_abs; the n^2 classical norm precomputation is tracked
separately from oracle costs.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linalg import as_matrix, exact_product, pad_dim
from .matmul import (
    MAX_PHASE_BITS,
    _check_support,
    _hhl_component,
    _lambda_decode,
    _sigma_decode,
    _sve_component,
    _sve_setup,
)
from .qpe import PhaseConfig
from .statevector import CostLedger
from .swaptest import estimate_real_overlap

_GUARD = 2


@dataclass(frozen=True)
class ReadoutReport:
    """Entrywise product estimate with its absolute-error contract.

    max_observed_error compares against the exact product and must not
    exceed entrywise_error_bound (= the requested eps_abs) on any run.
    """

    c_tilde: np.ndarray
    entrywise_error_bound: float
    max_observed_error: float
    ledger: CostLedger
    method: str

    def to_dict(self) -> dict:
        return {
            "method": self.method,
            "eps_abs": self.entrywise_error_bound,
            "max_observed_error": self.max_observed_error,
            "ledger": self.ledger.to_dict(),
        }


def inner_product_classical(
    x, y, eps_abs: float, ledger: CostLedger | None = None
) -> float:
    """x . y to absolute accuracy eps_abs via the normalized overlap
    estimate run at accuracy eps_abs / (||x|| ||y||)."""
    x = np.asarray(x, dtype=float).reshape(-1)
    y = np.asarray(y, dtype=float).reshape(-1)
    if x.size != y.size:
        raise ValueError(f"dimension mismatch: {x.size} vs {y.size}")
    nx, ny = float(np.linalg.norm(x)), float(np.linalg.norm(y))
    if nx == 0.0 or ny == 0.0:
        return 0.0
    eps_q = min(eps_abs / (nx * ny), 0.5)
    dim = pad_dim(x.size)
    xs = np.zeros(dim)
    ys = np.zeros(dim)
    xs[: x.size] = x / nx
    ys[: y.size] = y / ny
    est = estimate_real_overlap(xs, ys, eps_q, ledger)
    return nx * ny * est


def readout_swaptest(a, b, eps_abs: float) -> ReadoutReport:
    """Entrywise C = AB by one overlap estimation per entry; cost per entry
    scales with ||A_i.|| ||B_.j|| / eps_abs, plus the classical norm pass."""
    a = as_matrix(a, allow_complex=False)
    b = as_matrix(b, allow_complex=False)
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"dimension mismatch: {a.shape} x {b.shape}")
    ledger = CostLedger()
    ledger.classical_entries += a.size + b.size
    c_tilde = np.zeros((a.shape[0], b.shape[1]))
    for i in range(a.shape[0]):
        for j in range(b.shape[1]):
            c_tilde[i, j] = inner_product_classical(a[i], b[:, j], eps_abs, ledger)
    exact = exact_product(a, b)
    return ReadoutReport(
        c_tilde=c_tilde,
        entrywise_error_bound=eps_abs,
        max_observed_error=float(np.max(np.abs(c_tilde - exact))),
        ledger=ledger,
        method="readout-swap",
    )


def _readout_by_value_estimation(a, b, eps_abs: float, *, hhl: bool, strict_support: bool) -> ReadoutReport:
    """Shared sve/hhl readout: per column j build the rotated state
    (1/sigma_ceiling) sum_k alpha_jk sigma~_k |u_k>|0> + junk, then estimate
    its overlap with each |i>|0> and rescale by ||B_.j|| sigma_ceiling.

    The error splits into the overlap part (estimated to eps_abs/2 after
    rescaling) and the singular-value part (sigma read to eps1 with
    eps1 ||B_.j|| sum_k |alpha_jk <i|u_k>| <= eps_abs/2).
    """
    a0, b0, l, m, n, d, ap, bundle, col_norms, frob_b, alpha = _sve_setup(a, b)
    if frob_b == 0:
        raise ValueError("B is zero")
    _check_support(bundle.sigmas, alpha, col_norms, frob_b, strict_support)
    frob_a = float(np.linalg.norm(a0))
    sigma_max = float(bundle.sigmas[0])
    sigmas = np.zeros(d)
    sigmas[: bundle.sigmas.size] = bundle.sigmas

    ledger = CostLedger()
    ledger.classical_entries += a0.size + b0.size
    c_tilde = np.zeros((l, n))
    uvec = bundle.left_vectors
    for j in range(n):
        if col_norms[j] == 0.0:
            continue
        aj = alpha[:, j]
        # sigma-accuracy budget for this column, tightest over target rows
        colsum = np.abs(aj) @ np.abs(uvec[:l].T)  # sum_k |alpha_jk u_k[i]| per i
        eps1_req = eps_abs / (2.0 * col_norms[j] * max(float(np.max(colsum)), 1e-14))
        if hhl:
            t1 = math.ceil(math.log2(16.0 * sigma_max / eps1_req))
        else:
            t1 = math.ceil(math.log2(4.0 * math.pi * frob_a / eps1_req))
        t1 = min(max(t1, 2), MAX_PHASE_BITS)
        T1 = 1 << t1
        if hhl:
            t0 = math.pi / (2.0 * sigma_max)
            lam_grid = _lambda_decode(t1, t0)
            ceiling = abs(lam_grid[min(math.ceil(sigma_max * t0 * T1 / (2.0 * math.pi)), T1 // 2)])
            c_rot = 1.0 / max(ceiling, 1e-300)
            weights0 = np.clip(c_rot * lam_grid, -1.0, 1.0)
            weights1 = np.sqrt(1.0 - weights0**2)
            comp0 = [
                _hhl_component(sigmas[k], t0, t1, weights0) if abs(aj[k]) > 1e-14 else 0.0
                for k in range(d)
            ]
            comp1 = [
                _hhl_component(sigmas[k], t0, t1, weights1.astype(complex)) if abs(aj[k]) > 1e-14 else 0.0
                for k in range(d)
            ]
        else:
            dec = _sigma_decode(t1, frob_a)
            theta_top = 2.0 * math.acos(min(sigma_max / frob_a, 1.0))
            ceiling = frob_a * abs(math.cos(math.pi * math.floor(theta_top * T1 / (2.0 * math.pi)) / T1))
            c_rot = 1.0 / max(ceiling, 1e-300)
            weights0 = np.clip(c_rot * dec, 0.0, 1.0)
            weights1 = np.sqrt(1.0 - weights0**2)
            comp0 = [
                _sve_component(sigmas[k], frob_a, t1, weights0) if abs(aj[k]) > 1e-14 else 0.0
                for k in range(d)
            ]
            comp1 = [
                _sve_component(sigmas[k], frob_a, t1, weights1) if abs(aj[k]) > 1e-14 else 0.0
                for k in range(d)
            ]
        y0 = uvec @ (aj * np.asarray(comp0, dtype=complex))  # rot = 0 block
        y1 = uvec @ (aj * np.asarray(comp1, dtype=complex))  # rot = 1 block
        junk = max(0.0, 1.0 - float(np.sum(np.abs(y0) ** 2) + np.sum(np.abs(y1) ** 2)))
        dim_y = pad_dim(2 * d + 1)
        yfull = np.zeros(dim_y, dtype=complex)
        yfull[:d] = y0
        yfull[d : 2 * d] = y1
        yfull[2 * d] = math.sqrt(junk)
        # outer overlap estimation against each |i, rot=0>
        eps2_req = min(eps_abs / (2.0 * col_norms[j] / c_rot), 0.5)
        t2 = PhaseConfig.from_epsilon(eps2_req, guard_bits=_GUARD).phase_bits
        for i in range(l):
            xfull = np.zeros(dim_y)
            xfull[i] = 1.0
            est = estimate_real_overlap(xfull, yfull, eps2_req, None)
            c_tilde[i, j] = est * col_norms[j] / c_rot
            # nested cost: each controlled step of the outer estimation
            # reruns the inner singular-value pipeline
            ledger.charge_controlled(((1 << t2) - 1) * ((1 << t1) - 1))
            ledger.use_phase_bits(max(t1, t2))
        ledger.charge_oracle(1)
    exact = exact_product(a0, b0)
    return ReadoutReport(
        c_tilde=c_tilde,
        entrywise_error_bound=eps_abs,
        max_observed_error=float(np.max(np.abs(c_tilde - exact))),
        ledger=ledger,
        method="readout-hhl" if hhl else "readout-sve",
    )


def readout_sve(a, b, eps_abs: float, *, strict_support: bool = False) -> ReadoutReport:
    """Entrywise C = AB from overlaps with the singular-value-rotated column
    states of B, singular values estimated on the walk operator of A."""
    return _readout_by_value_estimation(a, b, eps_abs, hhl=False, strict_support=strict_support)


def readout_hhl(a, b, eps_abs: float, *, strict_support: bool = False) -> ReadoutReport:
    """Entrywise C = AB with singular values estimated on the Hermitian
    dilation of A (accuracy relative to sigma_max instead of ||A||_F)."""
    return _readout_by_value_estimation(a, b, eps_abs, hhl=True, strict_support=strict_support)
