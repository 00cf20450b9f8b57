"""Inner-product estimation and its coherent generalizations.

The estimator prepares phi = (|+>|x> + |->|y>)/sqrt(2), whose |0>-branch
probability is (1 + <x|y>)/2, and phase-estimates the Grover rotation built
from phi; the branch angle read off the phase label gives the inner product
on a pi/2^t grid. The generalized form writes f(estimate) into a register
coherently instead of measuring, which is what lets matrix pipelines consume
inner products in superposition.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .qpe import (
    PhaseConfig,
    decode_fixed,
    encode_fixed,
    grover_rotation,
    phase_estimate,
    swap_value,
    tag_even_function,
)
from .statevector import (
    CostLedger,
    Statevector,
    apply_unitary,
    fidelity,
    marginal_probabilities,
)

_H = np.array([[1.0, 1.0], [1.0, -1.0]]) / math.sqrt(2.0)


@dataclass(frozen=True)
class StatePreparer:
    """A target state together with a unitary realizing it from |0> and the
    cost of one invocation (in T_in units)."""

    vector: np.ndarray
    unitary: np.ndarray
    cost_per_call: float = 1.0

    def __post_init__(self):
        vec = np.asarray(self.vector, dtype=complex).reshape(-1)
        dim = vec.size
        if dim & (dim - 1):
            raise ValueError("preparer dimension must be a power of two")
        if abs(np.linalg.norm(vec) - 1.0) > 1e-10:
            raise ValueError("preparer target must be a unit vector")
        u = np.asarray(self.unitary, dtype=complex)
        if u.shape != (dim, dim):
            raise ValueError("unitary shape does not match the target")
        if np.max(np.abs(u.conj().T @ u - np.eye(dim))) > 1e-10:
            raise ValueError("preparer operator is not unitary")
        if np.max(np.abs(u[:, 0] - vec)) > 1e-10:
            raise ValueError("U|0> does not match the declared state")
        vec.setflags(write=False)
        object.__setattr__(self, "vector", vec)
        object.__setattr__(self, "unitary", u)

    @property
    def dimension(self) -> int:
        return self.vector.size

    @classmethod
    def from_vector(cls, values, cost_per_call: float = 1.0) -> "StatePreparer":
        """Normalize, zero-pad to a power of two, and complete to a unitary
        whose first column is the target (deterministic QR completion)."""
        vec = np.asarray(values, dtype=complex).reshape(-1)
        norm = np.linalg.norm(vec)
        if norm == 0:
            raise ValueError("cannot prepare the zero vector")
        vec = vec / norm
        dim = 1
        while dim < vec.size:
            dim <<= 1
        padded = np.zeros(dim, dtype=complex)
        padded[: vec.size] = vec
        u = _complete_unitary(padded)
        return cls(vector=padded, unitary=u, cost_per_call=cost_per_call)


def _complete_unitary(vec: np.ndarray) -> np.ndarray:
    """Unitary with first column vec, remaining columns a deterministic
    orthonormal completion."""
    dim = vec.size
    basis = np.eye(dim, dtype=complex)
    # drop the basis vector most parallel to vec so the set stays full rank
    drop = int(np.argmax(np.abs(vec)))
    cols = [vec] + [basis[:, j] for j in range(dim) if j != drop]
    q, r = np.linalg.qr(np.stack(cols, axis=1))
    # QR leaves each column an arbitrary unit phase; pin the first to vec
    q = q * (r.diagonal() / np.abs(r.diagonal()))
    if np.max(np.abs(q[:, 0] - vec)) > 1e-10:
        raise AssertionError("unitary completion failed")
    return q


def superposed_pair_state(x: np.ndarray, y: np.ndarray) -> Statevector:
    """phi = (|+>|x> + |->|y>)/sqrt(2) on registers (ctrl, data).

    Equals (|0>(x+y) + |1>(x-y))/2; unit norm for any unit x, y, including
    the degenerate x = -y case where the |0> branch vanishes.
    """
    x = np.asarray(x, dtype=complex).reshape(-1)
    y = np.asarray(y, dtype=complex).reshape(-1)
    if x.size != y.size:
        raise ValueError(f"dimension mismatch: {x.size} vs {y.size}")
    data_qubits = int(math.log2(x.size))
    amps = np.concatenate([(x + y) / 2.0, (x - y) / 2.0])
    return Statevector((("ctrl", 1), ("data", data_qubits)), amps)


def control_pair_state(x: np.ndarray, y: np.ndarray) -> Statevector:
    """(|0>|x> + |1>|y>)/sqrt(2) on registers (ctrl, data)."""
    x = np.asarray(x, dtype=complex).reshape(-1)
    y = np.asarray(y, dtype=complex).reshape(-1)
    data_qubits = int(math.log2(x.size))
    amps = np.concatenate([x, y]) / math.sqrt(2.0)
    return Statevector((("ctrl", 1), ("data", data_qubits)), amps)


def _require_real(vec: np.ndarray, what: str) -> np.ndarray:
    """Insist the state is real up to a global phase. Already-real vectors
    pass through untouched (their sign is part of the declared data); a
    complex carrier phase is stripped."""
    if np.max(np.abs(vec.imag)) <= 1e-10:
        return vec.real.astype(complex)
    nz = np.flatnonzero(np.abs(vec) > 1e-12)
    phase = vec[nz[0]] / abs(vec[nz[0]])
    aligned = vec / phase
    if np.max(np.abs(aligned.imag)) > 1e-10:
        raise ValueError(f"{what} must be real up to a global phase")
    return aligned.real.astype(complex)


def estimate_real_overlap(
    x: np.ndarray, y: np.ndarray, eps: float, ledger: CostLedger | None = None
) -> float:
    """Modal estimate of Re<x|y> from phase estimation of the Grover
    rotation; |error| <= pi/2^t <= eps/4 with the default guard bits."""
    cfg = PhaseConfig.from_epsilon(eps)
    phi = superposed_pair_state(x, y)
    g = grover_rotation(phi)
    if ledger is not None:
        ledger.charge_oracle(2)  # one controlled preparation of each input
    est = phase_estimate(g, phi, cfg, ledger)
    probs = marginal_probabilities(est, "phase")
    label = int(np.argmax(probs))
    return float(swap_value(label, cfg.phase_bits))


def inner_product_estimate(
    px: StatePreparer, py: StatePreparer, eps: float, ledger: CostLedger | None = None
) -> float:
    """Estimate <x|y> of two real states to within eps; cost scales as 1/eps."""
    if px.dimension != py.dimension:
        raise ValueError("preparers act on different dimensions")
    x = _require_real(px.vector, "first state")
    y = _require_real(py.vector, "second state")
    return estimate_real_overlap(x, y, eps, ledger)


def complex_inner_product(
    px: StatePreparer, py: StatePreparer, eps: float, ledger: CostLedger | None = None
) -> complex:
    """<x|y> = sum_k conj(x_k) y_k for complex states, each part within eps.

    The real part comes from one overlap estimate; the imaginary part from
    the overlap of |x> with i|y>, since Re<x|iy> = -Im<x|y>.
    """
    if px.dimension != py.dimension:
        raise ValueError("preparers act on different dimensions")
    re = estimate_real_overlap(px.vector, py.vector, eps, ledger)
    im = -estimate_real_overlap(px.vector, 1j * py.vector, eps, ledger)
    return complex(re, im)


def generalized_swap_test(
    px: StatePreparer,
    py: StatePreparer,
    f,
    eps: float,
    ledger: CostLedger | None = None,
    tag_frac_bits: int | None = None,
) -> Statevector:
    """Map (|0>|x> + |1>|y>)/sqrt(2) to (almost) the same state tensored
    with |f(s)>, where s is within eps of <x|y>.

    Layout of the result: (tag, ctrl, data). The tag register holds f
    applied to the branch-amplitude decode of the phase label; evenness of
    that composite under label wrap-around is what keeps the +-theta pair
    consistent, so the control-and-data part is restored exactly on the
    surviving branch.
    """
    if px.dimension != py.dimension:
        raise ValueError("preparers act on different dimensions")
    x = _require_real(px.vector, "first state")
    y = _require_real(py.vector, "second state")
    cfg = PhaseConfig.from_epsilon(eps)
    phi = superposed_pair_state(x, y)
    g = grover_rotation(phi)
    if ledger is not None:
        ledger.charge_oracle(2)
    est = phase_estimate(g, phi, cfg, ledger)
    frac = cfg.phase_bits if tag_frac_bits is None else tag_frac_bits

    def composite(label: int) -> float:
        return float(f(float(swap_value(label, cfg.phase_bits))))

    tagged = tag_even_function(est, composite, g, tag_frac_bits=frac, ledger=ledger)
    # rotate the control qubit back: H maps phi to (|0>|x> + |1>|y>)/sqrt(2)
    return apply_unitary(tagged, _H, ["ctrl"])


def tag_modal_value(state: Statevector, tag_name: str = "tag") -> float:
    """Decode the most likely tag-register outcome back to a float."""
    probs = marginal_probabilities(state, tag_name)
    width = state.register_size(tag_name)
    return decode_fixed(int(np.argmax(probs)), width - 2, width)


def coefficient_tag(
    p_psi: StatePreparer,
    f,
    eps: float,
    ledger: CostLedger | None = None,
) -> Statevector:
    """Tag every computational-basis coefficient of a real state with
    f(estimate): sum_j alpha_j |j> |f(alpha_j +- eps)>.

    Realized by the generalized swap test of the state against each basis
    vector, run coherently over j. The per-j blocks are independent, so the
    exact output is assembled from per-j label distributions; the cost model
    charges a single estimation run (the blocks execute in superposition).
    """
    psi = _require_real(p_psi.vector, "input state")
    dim = p_psi.dimension
    index_qubits = int(math.log2(dim))
    cfg = PhaseConfig.from_epsilon(eps)
    t = cfg.phase_bits
    frac = t
    width = frac + 2
    labels = np.arange(1 << t)
    svals = swap_value(labels, t)
    codes = np.array([encode_fixed(float(f(float(v))), frac, width) for v in svals])

    amps = np.zeros((dim, 1 << width), dtype=complex)
    charged = False
    for j in range(dim):
        alpha = psi[j].real
        if abs(alpha) < 1e-14:
            continue
        basis = np.zeros(dim)
        basis[j] = 1.0
        phi = superposed_pair_state(basis, psi)
        g = grover_rotation(phi)
        est = phase_estimate(g, phi, cfg, ledger if not charged else None)
        charged = True
        probs = marginal_probabilities(est, "phase")
        # with an even tag the phase machinery uncomputes exactly per bin;
        # the per-bin branch amplitude is the label mass landing in the bin
        np.add.at(amps[j], codes, probs)
        amps[j] *= alpha
    total = float(np.sum(np.abs(amps) ** 2))
    if total <= 0:
        raise ValueError("input state has no support")
    if ledger is not None:
        ledger.charge_oracle(1)
        ledger.record_postselect(total)
    amps /= math.sqrt(total)
    layout = (("index", index_qubits), ("tag", width))
    return Statevector(layout, amps.reshape(-1))


def discard_tag_fidelity(state: Statevector, reference: Statevector, tag_name: str = "tag") -> float:
    """Fidelity sqrt(<ref| rho |ref>) of the state after tracing out the tag
    register, against a pure reference on the remaining registers."""
    axis = state.register_index(tag_name)
    tens = np.moveaxis(state.reshaped(), axis, 0)
    rest = tens.reshape(tens.shape[0], -1)
    overlaps = rest @ reference.amplitudes.conj()
    return float(math.sqrt(np.sum(np.abs(overlaps) ** 2)))
