import math

import numpy as np
import pytest

from qmm.statevector import CostLedger, PreparedState, fidelity, from_vector
from qmm.stateprep import (
    PrepReport,
    VectorSpec,
    dyadic_bands,
    lcu_combine,
    prep_dyadic,
    prep_hamiltonian,
    prep_signshift,
    prep_sparse,
    synthesize_direct,
)


def normalized(x):
    x = np.asarray(x, dtype=float)
    return x / np.linalg.norm(x)


# ---------------------------------------------------------------------------
# vector specs

def test_vector_spec_fields():
    spec = VectorSpec.from_values([0.0, -4.0, 1.0, 0.0])
    assert list(spec.support) == [1, 2]
    assert spec.max_abs == 4.0
    assert spec.min_abs_nonzero == 1.0
    assert spec.kappa_x == 4.0


def test_vector_spec_rejects_empty_support():
    with pytest.raises(ValueError, match="support"):
        VectorSpec.from_values([0.0, 0.0])


# ---------------------------------------------------------------------------
# direct synthesis

def test_synthesize_direct_basis_state():
    vals = np.zeros(8)
    vals[3] = 1.0
    ps = synthesize_direct(vals)
    assert np.allclose(ps.state.amplitudes, np.eye(8)[3])


def test_synthesize_direct_uniform():
    ps = synthesize_direct(np.ones(4))
    assert np.allclose(ps.state.amplitudes, 0.5)


def test_synthesize_direct_random_seed43():
    # oracle: plain normalization
    rng = np.random.default_rng(43)
    x = rng.normal(size=8)
    ps = synthesize_direct(x)
    assert fidelity(ps.state, from_vector("x", x)) > 1 - 1e-12
    assert ps.ledger.gate_units > 0


# ---------------------------------------------------------------------------
# small-angle reweighting

def test_prep_hamiltonian_constant_f_is_exact_direction():
    base = from_vector("x", [1.0, 1.0, 1.0, 1.0])
    rep = prep_hamiltonian([3.0, 3.0, 3.0, 3.0], base, eps=0.05)
    assert rep.details["kappa_f"] == 1.0
    assert fidelity(rep.result.state, base) > 1 - 1e-12
    # success probability ~ (c t)^2 for constant f
    t = rep.details["evolution_time"]
    assert rep.result.success_probability == pytest.approx(math.sin(3.0 * t) ** 2, abs=1e-12)


def test_prep_hamiltonian_two_level_example():
    base = from_vector("x", [1.0, 1.0])
    rep = prep_hamiltonian([1.0, 2.0], base, eps=0.05)
    t = rep.details["evolution_time"]
    # oracle: direct summation of the sine branch
    direct = (math.sin(t) ** 2 + math.sin(2 * t) ** 2) / 2.0
    assert rep.result.success_probability == pytest.approx(direct, abs=1e-15)
    assert rep.realized_distance <= math.sqrt(2.0 / 3.0) * rep.epsilon1


def test_prep_hamiltonian_random_positive_seed47():
    rng = np.random.default_rng(47)
    f = np.exp(rng.uniform(0.0, 2.0, size=8))
    base = from_vector("x", np.abs(rng.normal(size=8)) + 0.1)
    rep = prep_hamiltonian(f, base, eps=0.05)
    kappa = rep.details["kappa_f"]
    assert rep.realized_distance <= math.sqrt(kappa / 3.0) * rep.epsilon1
    target = normalized(f * base.amplitudes.real)
    assert np.allclose(
        np.abs(rep.result.state.amplitudes), np.abs(target), atol=rep.target_fidelity_bound
    )


def test_prep_hamiltonian_success_probability_sandwich():
    rng = np.random.default_rng(3)
    for kappa in (1.0, 2.0, 8.0, 32.0):
        f = np.geomspace(1.0, 1.0 / kappa, 8)
        rng.shuffle(f)
        base = from_vector("x", np.abs(rng.normal(size=8)) + 0.05)
        rep = prep_hamiltonian(f, base, eps=0.05)
        p = rep.result.success_probability
        assert rep.epsilon0**2 <= p <= rep.epsilon1**2


def test_prep_hamiltonian_rejects_f_zero_on_support():
    base = from_vector("x", [1.0, 1.0])
    with pytest.raises(ValueError, match="vanishes"):
        prep_hamiltonian([1.0, 0.0], base, eps=0.05)


def test_prep_hamiltonian_rejects_angle_overflow():
    base = from_vector("x", [1.0, 1.0])
    with pytest.raises(ValueError, match="small-angle"):
        prep_hamiltonian([1.0, 2.0], base, eps=3.0)


def test_prep_hamiltonian_amplification_model():
    base = from_vector("x", np.ones(8))
    for kappa in (2.0, 4.0, 16.0):
        f = np.geomspace(kappa, 1.0, 8)
        rep = prep_hamiltonian(f, base, eps=0.05)
        expected = math.ceil(1.0 / rep.epsilon0)
        assert rep.result.ledger.amplification_rounds == expected


# ---------------------------------------------------------------------------
# sparse route

def test_prep_sparse_basis_vector():
    vals = np.zeros(4)
    vals[2] = 0.7
    rep = prep_sparse(vals, 0.05)
    assert np.allclose(np.abs(rep.result.state.amplitudes), np.eye(4)[2], atol=1e-10)


def test_prep_sparse_two_point_support_and_unknown_penalty():
    vals = np.zeros(8)
    vals[[1, 3]] = 1.0
    known = prep_sparse(vals, 0.05, support_known=True)
    assert np.allclose(
        np.abs(known.result.state.amplitudes),
        np.where(np.arange(8) % 2 == 1, 1, 0)[[0, 1, 2, 3, 4, 5, 6, 7]] * 0
        + np.isin(np.arange(8), [1, 3]) / math.sqrt(2),
        atol=1e-10,
    )
    unknown = prep_sparse(vals, 0.05, support_known=False)
    # sqrt(8/2) = 2 exactly
    assert unknown.result.ledger.amplification_rounds == 2 * known.result.ledger.amplification_rounds
    assert unknown.result.ledger.oracle_calls == 2 * known.result.ledger.oracle_calls


def test_prep_sparse_relatively_uniform_seed53():
    rng = np.random.default_rng(53)
    mags = np.geomspace(1.0, 0.5, 16)
    rng.shuffle(mags)
    vals = mags * rng.choice([-1.0, 1.0], size=16)
    rep = prep_sparse(vals, 0.05)
    assert rep.realized_distance <= rep.target_fidelity_bound
    assert fidelity(rep.result.state, from_vector("x", vals)) > 1 - 0.05


# ---------------------------------------------------------------------------
# dyadic route

def test_dyadic_single_band_for_uniform_magnitudes():
    spec = VectorSpec.from_values([1.0, -1.0, 1.0, 1.0])
    bands = dyadic_bands(spec)
    assert len(bands) == 1
    assert np.array_equal(bands[0], spec.values)


def test_dyadic_bands_powers_of_two():
    spec = VectorSpec.from_values([1.0, 2.0, 4.0, 8.0])
    bands = dyadic_bands(spec)
    assert len(bands) == 4
    assert np.array_equal(sum(bands), spec.values)
    weights = [np.linalg.norm(b) for b in bands]
    assert np.allclose(weights, np.array([1, 2, 4, 8]))
    rep = prep_dyadic(spec, 0.05)
    assert np.allclose(rep.details["weights"], np.array([1, 2, 4, 8]) / math.sqrt(85.0))


def test_dyadic_band_spread_at_most_two():
    rng = np.random.default_rng(59)
    vals = rng.normal(size=64) * np.exp(rng.uniform(0, 10 * math.log(2), size=64))
    for band in dyadic_bands(VectorSpec.from_values(vals)):
        mags = np.abs(band[band != 0.0])
        assert mags.max() / mags.min() <= 2.0 + 1e-9


def test_dyadic_bands_sum_exactly():
    rng = np.random.default_rng(60)
    vals = rng.normal(size=32) * np.exp(rng.uniform(0, 7, size=32))
    bands = dyadic_bands(VectorSpec.from_values(vals))
    assert np.array_equal(sum(bands), vals)


def test_prep_dyadic_wide_spread_seed59():
    rng = np.random.default_rng(59)
    mags = np.geomspace(1.0, 2.0**-10, 64)
    rng.shuffle(mags)
    vals = mags * rng.choice([-1.0, 1.0], size=64)
    rep = prep_dyadic(vals, 0.05)
    assert fidelity(rep.result.state, from_vector("x", vals)) >= 1 - 0.05
    assert rep.realized_distance <= rep.target_fidelity_bound


# ---------------------------------------------------------------------------
# sign-shift route

def test_signshift_all_positive_uniform():
    vals = np.ones(4)
    rep = prep_signshift(vals, 0.05)
    # z = 2x/..., y = x: combination is exact for a uniform vector
    assert rep.realized_distance < 1e-10
    norm_x = 2.0
    norm_y = 2.0
    norm_z = 4.0
    assert rep.result.success_probability == pytest.approx(
        norm_x**2 / (2 * (norm_y**2 + norm_z**2))
    )


def test_signshift_antisymmetric_pair():
    rep = prep_signshift(np.array([1.0, -1.0]), 0.05)
    assert rep.realized_distance < 1e-10
    assert np.allclose(np.abs(rep.result.state.amplitudes), [1, 1] / np.sqrt(2.0))


def test_signshift_random_seed61():
    rng = np.random.default_rng(61)
    vals = rng.normal(size=8)
    rep = prep_signshift(vals, 0.05)
    assert fidelity(rep.result.state, from_vector("x", vals)) >= 1 - 0.05
    # construction identity z - y = x, exact on dyadic inputs
    spec = VectorSpec.from_values(np.round(vals * 1024) / 1024)
    m = spec.max_abs
    y = m * np.where(spec.values >= 0, 1.0, -1.0)
    z = spec.values + y
    assert np.array_equal(z - y, spec.values)
    spread = (m + spec.max_abs) / (m + spec.min_abs_nonzero)
    assert spread <= 2.0


def test_signshift_rejects_small_shift():
    with pytest.raises(ValueError, match="at least"):
        prep_signshift([1.0, 2.0], 0.05, big_m=1.0)


# ---------------------------------------------------------------------------
# combination

def test_lcu_single_state_identity():
    s = from_vector("q", [1.0, 2.0])
    out = lcu_combine([PreparedState(s, 1.0, CostLedger())], [1.0])
    assert fidelity(out.state, s) > 1 - 1e-12
    assert out.success_probability == pytest.approx(1.0)


def test_lcu_two_basis_states_make_plus():
    s0 = from_vector("q", [1.0, 0.0])
    s1 = from_vector("q", [0.0, 1.0])
    out = lcu_combine(
        [PreparedState(s0, 1.0, CostLedger()), PreparedState(s1, 1.0, CostLedger())],
        [1.0, 1.0],
    )
    assert np.allclose(out.state.amplitudes, [1, 1] / np.sqrt(2.0))
    assert out.success_probability == pytest.approx(0.5)


def test_lcu_three_random_states_match_direct_sum():
    rng = np.random.default_rng(67)
    states = []
    for _ in range(3):
        states.append(PreparedState(from_vector("q", rng.normal(size=4)), 1.0, CostLedger()))
    w = rng.normal(size=3)
    out = lcu_combine(states, w)
    direct = sum(wi * ps.state.amplitudes for wi, ps in zip(w, states))
    direct = direct / np.linalg.norm(direct)
    assert np.max(np.abs(out.state.amplitudes - direct)) < 1e-10


def test_lcu_rejects_cancellation():
    s = from_vector("q", [1.0, 0.0])
    with pytest.raises(ValueError, match="cancelled"):
        lcu_combine(
            [PreparedState(s, 1.0, CostLedger()), PreparedState(s, 1.0, CostLedger())],
            [1.0, -1.0],
        )


# ---------------------------------------------------------------------------
# cross-method agreement

def test_all_methods_agree_pairwise():
    eps = 0.05
    for seed in (11, 12, 13, 14):
        rng = np.random.default_rng(seed)
        mags = np.geomspace(1.0, 2.0**-10, 32)
        rng.shuffle(mags)
        vals = mags * rng.choice([-1.0, 1.0], size=32)
        direct = synthesize_direct(vals).state
        dyadic = prep_dyadic(vals, eps).result.state
        shift = prep_signshift(vals, eps).result.state
        assert fidelity(direct, dyadic) >= 1 - 2 * eps
        assert fidelity(direct, shift) >= 1 - 2 * eps
        assert fidelity(dyadic, shift) >= 1 - 2 * eps
