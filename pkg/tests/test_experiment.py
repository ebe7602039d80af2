import numpy as np
import pytest

from hyperbell.hilbert import ATOL, basis_ket
from hyperbell.lhv import CONSTRAINTS
from hyperbell.observables import CONSTRAINT_ROWS, bell_mermin_operator
from hyperbell.optics import build_apparatus
from hyperbell.experiment import (
    DEFAULT_GRID,
    CorrelationEstimate,
    DensityState,
    NoiseModel,
    ROW_APPARATUS_PAIRS,
    SWEEP_CSV_HEADER,
    estimate_mermin,
    estimate_rows,
    exact_expectation,
    noisy_state,
    sample_pair_values,
    sweep_csv,
    sweep_table,
    violation_flag,
    visibility_sweep,
)


def test_noise_model_range():
    NoiseModel(0.0)
    NoiseModel(1.0)
    with pytest.raises(ValueError):
        NoiseModel(-0.1)
    with pytest.raises(ValueError):
        NoiseModel(1.1)
    with pytest.raises(ValueError):
        noisy_state(2.0)


def test_density_state_validation():
    with pytest.raises(ValueError):
        DensityState(((0.5, basis_ket(16, 0)),))  # weights must sum to 1
    with pytest.raises(ValueError):
        DensityState(((-0.5, basis_ket(16, 0)), (1.5, basis_ket(16, 1))))


def test_noisy_state_structure():
    pure = noisy_state(1.0)
    assert len(pure.components) == 1
    assert pure.components[0][0] == 1.0

    uniform = noisy_state(0.0)
    assert len(uniform.components) == 16
    assert all(w == pytest.approx(1 / 16) for w, _ in uniform.components)

    mixed = noisy_state(0.6)
    assert len(mixed.components) == 17
    assert sum(w for w, _ in mixed.components) == pytest.approx(1.0, abs=ATOL)


def test_every_operator_in_scope_is_traceless():
    # prerequisite for the linearity claim <Q>(V) = V * <Q>(1)
    for row in CONSTRAINT_ROWS:
        assert abs(np.trace(row.operator().matrix)) < ATOL
    assert abs(np.trace(bell_mermin_operator().realization.matrix)) < ATOL


def test_exact_values():
    assert exact_expectation("O", noisy_state(1.0)) == pytest.approx(9.0, abs=ATOL)
    assert exact_expectation(1, noisy_state(1.0)) == pytest.approx(-1.0, abs=ATOL)
    assert exact_expectation(1, noisy_state(0.5)) == pytest.approx(-0.5, abs=ATOL)
    assert exact_expectation("O", noisy_state(0.0)) == pytest.approx(0.0, abs=ATOL)
    assert exact_expectation("O", noisy_state(7 / 9)) == pytest.approx(7.0, abs=ATOL)
    with pytest.raises(ValueError):
        exact_expectation(10, noisy_state(1.0))
    with pytest.raises(ValueError):
        exact_expectation("M", noisy_state(1.0))


@pytest.mark.parametrize("visibility", [0.0, 0.3, 0.5, 7 / 9, 0.9])
def test_linearity_in_visibility(visibility):
    mixed = noisy_state(visibility)
    for quantity in list(range(1, 10)) + ["O"]:
        pure_value = exact_expectation(quantity, noisy_state(1.0))
        assert exact_expectation(quantity, mixed) == pytest.approx(
            visibility * pure_value, abs=ATOL
        )


def test_row_apparatus_pairs_cover_their_variables():
    # every variable of a constraint is a primary observable of its pair
    for constraint in CONSTRAINTS:
        a1_id, a2_id = ROW_APPARATUS_PAIRS[constraint.id]
        a1, a2 = build_apparatus(a1_id), build_apparatus(a2_id)
        readable = {a1.observable_a, a1.observable_b, a2.observable_a, a2.observable_b}
        assert set(constraint.variables) <= readable


def test_estimates_deterministic_for_fixed_seed():
    first = estimate_mermin(2000, 0.7, seed=999)
    second = estimate_mermin(2000, 0.7, seed=999)
    assert first == second
    third = estimate_mermin(2000, 0.7, seed=998)
    assert third.estimate != first.estimate


def test_estimate_exact_at_full_visibility():
    # |Psi> is an eigenstate of every row, so sampling has zero variance
    rows = estimate_rows(5000, 1.0, seed=1)
    for constraint, est in zip(CONSTRAINTS, rows):
        assert est.quantity == constraint.id
        assert est.shots == 5000
        assert est.estimate == pytest.approx(constraint.required_product, abs=ATOL)
        assert est.std_error == pytest.approx(0.0, abs=ATOL)
    total = estimate_mermin(5000, 1.0, seed=1)
    assert total.estimate == pytest.approx(9.0, abs=ATOL)
    assert total.std_error == pytest.approx(0.0, abs=ATOL)


def test_estimate_at_half_visibility_converges():
    est = estimate_mermin(1_000_000, 0.5, seed=2024)
    assert abs(est.estimate - 4.5) < 0.02
    # combined standard error: sqrt(sum_i (1 - 0.25)/N) ~ 2.6e-3
    assert 0.001 < est.std_error < 0.005


def test_estimate_at_zero_visibility():
    est = estimate_mermin(100_000, 0.0, seed=77)
    assert abs(est.estimate) < 0.04  # ~4 sigma at SE 9.5e-3


def test_per_shot_bookkeeping_under_noise():
    rng = np.random.default_rng(31)
    for a1_id, a2_id in {(1, 4), (5, 6), (3, 2)}:
        values = sample_pair_values(a1_id, a2_id, 0.3, 5000, rng)
        a1, a2 = build_apparatus(a1_id), build_apparatus(a2_id)
        for spec in (a1, a2):
            a, b, ab = spec.value_names
            assert (values[a] * values[b] == values[ab]).all()
            assert set(np.unique(values[a])) <= {-1, 1}


def test_correlation_estimate_validation():
    with pytest.raises(ValueError):
        CorrelationEstimate(quantity=1, shots=10, estimate=1.5, std_error=0.0)
    with pytest.raises(ValueError):
        CorrelationEstimate(quantity="O", shots=10, estimate=9.5, std_error=0.0)


def test_violation_flag():
    assert violation_flag(9.0) == "yes"
    assert violation_flag(6.5) == "no"
    assert violation_flag(7.0) == "boundary"
    assert violation_flag(7.0 + 5e-10) == "boundary"
    assert violation_flag(7.0 + 1e-6) == "yes"


def test_sweep_flags_spec_grid():
    points = visibility_sweep([0.7, 0.75, 7 / 9, 0.8, 1.0], shots_per_setting=0)
    assert [p.violated for p in points] == ["no", "no", "boundary", "yes", "yes"]
    assert points[-1].exact == pytest.approx(9.0, abs=ATOL)
    assert all(p.lhv_bound == 7.0 for p in points)
    assert all(p.estimate is None and p.std_error is None for p in points)


def test_sweep_crossing_in_default_grid():
    assert 0.77 in DEFAULT_GRID and 0.78 in DEFAULT_GRID
    points = visibility_sweep(DEFAULT_GRID, shots_per_setting=0)
    by_v = {round(p.visibility, 6): p for p in points}
    assert by_v[0.77].violated == "no"
    assert by_v[0.78].violated == "yes"
    # exact values are 9V on both sides of the threshold
    assert by_v[0.77].exact == pytest.approx(9 * 0.77, abs=ATOL)
    assert by_v[0.78].exact == pytest.approx(9 * 0.78, abs=ATOL)


def test_sweep_with_sampling_and_csv():
    points = visibility_sweep([0.0, 0.5, 1.0], shots_per_setting=3000, seed=5)
    csv_text = sweep_csv(points)
    lines = csv_text.strip().split("\n")
    assert lines[0] == SWEEP_CSV_HEADER == "v,exact_O,est_O,std_err,lhv_bound,violated"
    assert len(lines) == 4
    last = lines[3].split(",")
    assert last[0] == "1" and last[1] == "9" and last[2] == "9"
    assert last[4] == "7" and last[5] == "yes"
    # repeated with the same seed: identical text
    again = sweep_csv(visibility_sweep([0.0, 0.5, 1.0], shots_per_setting=3000, seed=5))
    assert again == csv_text

    rows = sweep_table(points)
    assert rows[0]["violated"] == "no"
    assert rows[2]["est_O"] == pytest.approx(9.0, abs=ATOL)


def test_sweep_csv_exact_only_leaves_columns_empty():
    csv_text = sweep_csv(visibility_sweep([0.5], shots_per_setting=0))
    line = csv_text.strip().split("\n")[1]
    assert line == "0.5,4.5,,,7,no"


def test_sweep_rejects_bad_grid():
    with pytest.raises(ValueError):
        visibility_sweep([0.5, 1.5], shots_per_setting=0)


@pytest.mark.slow
def test_estimator_consistency_over_seeds():
    # |estimate - exact| <= 4 * reported SE in at least 99 of 100 repetitions
    # (equality matters at V=1 where both sides are exactly zero)
    shots = 100_000
    for visibility in (0.0, 0.5, 1.0):
        exact = exact_expectation("O", noisy_state(visibility))
        hits = 0
        for seed in range(100):
            est = estimate_mermin(shots, visibility, seed=seed)
            if abs(est.estimate - exact) <= 4.0 * est.std_error:
                hits += 1
        assert hits >= 99, f"visibility {visibility}: only {hits}/100 within 4 SE"
