"""Noise model, Monte Carlo correlation estimates, and the visibility sweep.

Noise is isotropic white noise: with visibility V the prepared state is the
mixture V |Psi><Psi| + (1-V)/16 * sum of the sixteen basis projectors.  Every
operator of interest is traceless, so exact expectations scale linearly,
<Q>(V) = V * <Q>(1); in particular the Bell-Mermin value is 9V and crosses the
local-realistic ceiling of 7 exactly at V = 7/9.

The sampler never touches density operators: each shot first picks a pure
mixture component (|Psi> with probability V, otherwise a uniformly random
basis ket) and then draws a detector pattern from that component's Born
distribution.  All randomness flows from one seed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .hilbert import ATOL, Operator, StateVector, basis_ket, expectation
from .lhv import CONSTRAINTS, LHV_BOUND
from .observables import (
    CONSTRAINT_ROWS,
    bell_mermin_operator,
    doubly_entangled_state,
)
from .optics import ApparatusSpec, build_apparatus, joint_distribution, pattern_values

#: Fixed default seed used whenever the caller does not pass one.
DEFAULT_SEED = 12345

#: Default shots per measurement setting (std error about 3e-3 per term).
DEFAULT_SHOTS = 100_000

#: Default visibility grid for the sweep; brackets the 7/9 threshold with the
#: exact crossing point included.
DEFAULT_GRID: tuple[float, ...] = (
    0.0, 0.2, 0.4, 0.6, 0.7, 0.75, 0.77, 7.0 / 9.0, 0.78, 0.8, 0.9, 1.0,
)

#: Width of the "boundary" band around the LHV bound in the violation flag.
BOUNDARY_ATOL = 1e-9

#: Which (photon-1, photon-2) apparatus pair reads each constraint row.
ROW_APPARATUS_PAIRS: dict[int, tuple[int, int]] = {
    1: (1, 4),
    2: (3, 4),
    3: (3, 2),
    4: (1, 2),
    5: (5, 4),
    6: (5, 2),
    7: (1, 6),
    8: (3, 6),
    9: (5, 6),
}

Quantity = Union[int, str]  # constraint-row id 1..9 or "O"


@dataclass(frozen=True)
class NoiseModel:
    """White-noise admixture with the given visibility of the ideal state."""

    visibility: float

    def __post_init__(self):
        if not 0.0 <= self.visibility <= 1.0:
            raise ValueError(f"visibility must lie in [0, 1], got {self.visibility}")


@dataclass(frozen=True)
class DensityState:
    """A pure state or a finite mixture of pure states with unit total weight."""

    components: tuple[tuple[float, StateVector], ...]

    def __post_init__(self):
        weights = [w for w, _ in self.components]
        if any(w < 0 for w in weights):
            raise ValueError("mixture weights must be nonnegative")
        if abs(sum(weights) - 1.0) >= ATOL:
            raise ValueError(f"mixture weights sum to {sum(weights)!r}")
        for _, state in self.components:
            if not state.normalized:
                raise ValueError("mixture components must be normalized states")


def noisy_state(visibility: float) -> DensityState:
    """V |Psi><Psi| + (1-V) * (uniform mixture over the 16 basis kets)."""
    model = NoiseModel(visibility)
    components: list[tuple[float, StateVector]] = []
    if model.visibility > 0.0:
        components.append((model.visibility, doubly_entangled_state()))
    if model.visibility < 1.0:
        ket_weight = (1.0 - model.visibility) / 16.0
        components.extend((ket_weight, basis_ket(16, i)) for i in range(16))
    return DensityState(tuple(components))


def _quantity_operator(quantity: Quantity) -> Operator:
    if quantity == "O":
        return bell_mermin_operator().realization
    if isinstance(quantity, int) and 1 <= quantity <= 9:
        return CONSTRAINT_ROWS[quantity - 1].operator()
    raise ValueError(f"quantity must be a row id 1..9 or 'O', got {quantity!r}")


def exact_expectation(quantity: Quantity, density: DensityState) -> float:
    """Weighted sum of pure-state expectations; exact to working precision."""
    op = _quantity_operator(quantity)
    return sum(w * expectation(op, state) for w, state in density.components)


@dataclass(frozen=True)
class CorrelationEstimate:
    """Sampled mean of one quantity with its standard error."""

    quantity: Quantity
    shots: int
    estimate: float
    std_error: float

    def __post_init__(self):
        bound = 9.0 if self.quantity == "O" else 1.0
        if abs(self.estimate) > bound + 1e-9:
            raise ValueError(f"estimate {self.estimate} out of range for {self.quantity}")


# -- sampling ---------------------------------------------------------------

_SAMPLE_CHUNK = 1 << 17


def _component_cdfs(a1: ApparatusSpec, a2: ApparatusSpec) -> np.ndarray:
    """Pattern CDFs for every mixture component: row 0 = |Psi>, rows 1-16 = kets."""
    states = [doubly_entangled_state()] + [basis_ket(16, i) for i in range(16)]
    dists = np.array([joint_distribution(a1, a2, s).ravel() for s in states])
    cdfs = np.cumsum(dists, axis=1)
    cdfs[:, -1] = 1.0
    return cdfs


def sample_pair_patterns(
    a1: ApparatusSpec,
    a2: ApparatusSpec,
    visibility: float,
    shots: int,
    rng: np.random.Generator,
) -> tuple[np.ndarray, np.ndarray]:
    """Detector patterns under white noise, one mixture component per shot."""
    NoiseModel(visibility)
    if shots < 1:
        raise ValueError("shots must be >= 1")
    cdfs = _component_cdfs(a1, a2)
    d1 = np.empty(shots, dtype=np.int64)
    d2 = np.empty(shots, dtype=np.int64)
    done = 0
    while done < shots:
        m = min(_SAMPLE_CHUNK, shots - done)
        pick = rng.random(m)
        kets = rng.integers(0, 16, size=m)
        component = np.where(pick < visibility, 0, 1 + kets)
        u = rng.random(m)
        flat = (cdfs[component] <= u[:, None]).sum(axis=1)
        d1[done : done + m] = flat // 4
        d2[done : done + m] = flat % 4
        done += m
    return d1, d2


def sample_pair_values(
    a1_id: int,
    a2_id: int,
    visibility: float,
    shots: int,
    rng: np.random.Generator,
) -> dict[str, np.ndarray]:
    """Per-shot values of all six quantities read by an apparatus pair."""
    a1 = build_apparatus(a1_id)
    a2 = build_apparatus(a2_id)
    d1, d2 = sample_pair_patterns(a1, a2, visibility, shots, rng)
    return {**pattern_values(a1, d1), **pattern_values(a2, d2)}


def mean_and_std_error(samples: np.ndarray) -> tuple[float, float]:
    mean = float(samples.mean())
    if samples.size > 1:
        se = float(samples.std(ddof=1) / np.sqrt(samples.size))
    else:
        se = 0.0
    return mean, se


def estimate_rows(
    shots_per_setting: int,
    visibility: float,
    seed=DEFAULT_SEED,
) -> list[CorrelationEstimate]:
    """Sampled correlation of every constraint row at its matched pair.

    The nine settings are drawn sequentially from one generator, so a fixed
    seed fixes every estimate.
    """
    rng = np.random.default_rng(seed)
    estimates = []
    for constraint in CONSTRAINTS:
        a1_id, a2_id = ROW_APPARATUS_PAIRS[constraint.id]
        values = sample_pair_values(a1_id, a2_id, visibility, shots_per_setting, rng)
        product = np.ones(shots_per_setting, dtype=np.int64)
        for name in constraint.variables:
            product = product * values[name]
        mean, se = mean_and_std_error(product)
        estimates.append(
            CorrelationEstimate(
                quantity=constraint.id,
                shots=shots_per_setting,
                estimate=mean,
                std_error=se,
            )
        )
    return estimates


def estimate_mermin(
    shots_per_setting: int,
    visibility: float,
    seed=DEFAULT_SEED,
) -> CorrelationEstimate:
    """Monte Carlo estimate of the Bell-Mermin value under white noise.

    Each of the nine terms is sampled at its matched apparatus pair; the
    signed term means are summed and the standard errors combined in
    quadrature.
    """
    rows = estimate_rows(shots_per_setting, visibility, seed)
    total = sum(
        c.required_product * est.estimate for c, est in zip(CONSTRAINTS, rows)
    )
    variance = sum(est.std_error**2 for est in rows)
    return CorrelationEstimate(
        quantity="O",
        shots=shots_per_setting,
        estimate=float(total),
        std_error=float(np.sqrt(variance)),
    )


# -- visibility sweep --------------------------------------------------------


def violation_flag(exact_value: float) -> str:
    """'yes' above the LHV bound, 'no' below, 'boundary' within 1e-9 of it."""
    if abs(exact_value - LHV_BOUND) <= BOUNDARY_ATOL:
        return "boundary"
    return "yes" if exact_value > LHV_BOUND else "no"


@dataclass(frozen=True)
class SweepPoint:
    visibility: float
    exact: float
    estimate: float | None
    std_error: float | None
    violated: str
    lhv_bound: float = float(LHV_BOUND)


def visibility_sweep(
    grid: Sequence[float],
    shots_per_setting: int = 0,
    seed=DEFAULT_SEED,
) -> list[SweepPoint]:
    """Exact and (optionally) sampled Bell-Mermin values across visibilities.

    ``shots_per_setting=0`` skips sampling.  Each grid point samples from its
    own child seed, so points are independent and the table is reproducible.
    """
    for v in grid:
        NoiseModel(v)
    children = np.random.SeedSequence(seed).spawn(len(grid))
    points = []
    for v, child in zip(grid, children):
        exact = exact_expectation("O", noisy_state(v))
        if shots_per_setting > 0:
            sampled = estimate_mermin(shots_per_setting, v, child)
            estimate, std_error = sampled.estimate, sampled.std_error
        else:
            estimate, std_error = None, None
        points.append(
            SweepPoint(
                visibility=float(v),
                exact=exact,
                estimate=estimate,
                std_error=std_error,
                violated=violation_flag(exact),
            )
        )
    return points


def _fmt(x: float) -> str:
    return format(float(x), ".12g")


SWEEP_CSV_HEADER = "v,exact_O,est_O,std_err,lhv_bound,violated"


def sweep_csv(points: Sequence[SweepPoint]) -> str:
    """CSV table with a header row, period decimals, locale independent."""
    lines = [SWEEP_CSV_HEADER]
    for p in points:
        est = _fmt(p.estimate) if p.estimate is not None else ""
        err = _fmt(p.std_error) if p.std_error is not None else ""
        lines.append(
            f"{_fmt(p.visibility)},{_fmt(p.exact)},{est},{err},"
            f"{_fmt(p.lhv_bound)},{p.violated}"
        )
    return "\n".join(lines) + "\n"


def sweep_table(points: Sequence[SweepPoint]) -> list[dict]:
    """JSON-ready rows mirroring the CSV columns."""
    return [
        {
            "v": p.visibility,
            "exact_O": p.exact,
            "est_O": p.estimate,
            "std_err": p.std_error,
            "lhv_bound": p.lhv_bound,
            "violated": p.violated,
        }
        for p in points
    ]
