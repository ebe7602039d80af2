"""The doubly entangled two-photon state and its dichotomic observables.

The state is maximally entangled in polarization and in path simultaneously:

    |Psi> = (|H>1|V>2 - |V>1|H>2)(|u>1|d>2 - |d>1|u>2) / 2.

Each photon carries two qubits worth of observables: sigma_x/sigma_z on the
polarization factor (written x_i, z_i) and on the path factor (written x_i',
z_i').  Products measured jointly by a single apparatus, such as z1z1' or
z2x2', are treated as observables in their own right.  Nine products of these
quantities have |Psi> as an exact eigenvector; their signed sum is a
Bell-Mermin style operator whose quantum value is 9 against a local-realistic
ceiling of 7.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .hilbert import (
    ATOL,
    Operator,
    StateVector,
    BasisIndex,
    apply,
    basis_ket,
)

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=np.complex128)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=np.complex128)
_SIGMA = {"x": SIGMA_X, "z": SIGMA_Z}
_EYE2 = np.eye(2, dtype=np.complex128)

KET_H = basis_ket(2, 0)
KET_V = basis_ket(2, 1)
KET_U = basis_ket(2, 0)
KET_D = basis_ket(2, 1)


@dataclass(frozen=True)
class LocalObservable:
    """One single-qubit observable: photon 1 or 2, pol or path, axis x or z."""

    photon: int
    dof: str  # "pol" | "path"
    axis: str  # "x" | "z"

    def __post_init__(self):
        if self.photon not in (1, 2):
            raise ValueError(f"photon must be 1 or 2, got {self.photon}")
        if self.dof not in ("pol", "path"):
            raise ValueError(f"dof must be 'pol' or 'path', got {self.dof!r}")
        if self.axis not in ("x", "z"):
            raise ValueError(f"axis must be 'x' or 'z', got {self.axis!r}")

    @property
    def name(self) -> str:
        prime = "'" if self.dof == "path" else ""
        return f"{self.axis}{self.photon}{prime}"


#: The eight single-qubit observables, keyed by name (z1, x1, z1', x1', ...).
LOCAL_OBSERVABLES: dict[str, LocalObservable] = {
    obs.name: obs
    for obs in (
        LocalObservable(photon, dof, axis)
        for photon in (1, 2)
        for dof in ("pol", "path")
        for axis in ("z", "x")
    )
}

# Each named element of reality, as (pol axis, path axis) on its photon; None
# means that factor is untouched.  The four compound names are single
# apparatus readouts, not algebraic shorthands.
ELEMENT_AXES: dict[str, tuple[str | None, str | None]] = {
    "z1": ("z", None),
    "z1'": (None, "z"),
    "x1": ("x", None),
    "x1'": (None, "x"),
    "z1z1'": ("z", "z"),
    "x1x1'": ("x", "x"),
    "z2": ("z", None),
    "z2'": (None, "z"),
    "x2": ("x", None),
    "x2'": (None, "x"),
    "z2x2'": ("z", "x"),
    "x2z2'": ("x", "z"),
}


def element_photon(name: str) -> int:
    """Photon (1 or 2) addressed by a named element of reality."""
    if name not in ELEMENT_AXES:
        raise KeyError(f"unknown element of reality {name!r}")
    return 1 if "1" in name else 2


def element_factors(name: str) -> tuple[LocalObservable, ...]:
    """Single-qubit factors of a named element, polarization factor first."""
    pol_axis, path_axis = ELEMENT_AXES[name]
    photon = element_photon(name)
    factors = []
    if pol_axis is not None:
        factors.append(LocalObservable(photon, "pol", pol_axis))
    if path_axis is not None:
        factors.append(LocalObservable(photon, "path", path_axis))
    return tuple(factors)


def element_operator(name: str) -> Operator:
    """4-dim realization of a named element on its photon's pol (x) path space."""
    pol_axis, path_axis = ELEMENT_AXES[name]
    pol = _SIGMA[pol_axis] if pol_axis is not None else _EYE2
    path = _SIGMA[path_axis] if path_axis is not None else _EYE2
    return Operator(np.kron(pol, path), kind="hermitian")


def embed_on_photon(matrix4: np.ndarray, photon: int) -> np.ndarray:
    eye4 = np.eye(4, dtype=np.complex128)
    if photon == 1:
        return np.kron(matrix4, eye4)
    return np.kron(eye4, matrix4)


def element_operator_16(name: str) -> Operator:
    """16-dim realization of a named element, identity on the other photon."""
    return Operator(
        embed_on_photon(element_operator(name).matrix, element_photon(name)),
        kind="hermitian",
    )


def build_observable(obs: LocalObservable) -> Operator:
    """16-dim realization of one single-qubit observable.

    Acts as sigma_{axis} on the addressed (photon, dof) factor and as the
    identity on the other three factors.  Hermitian involution by construction.
    """
    factors = [_EYE2] * 4
    slot = (obs.photon - 1) * 2 + (0 if obs.dof == "pol" else 1)
    factors[slot] = _SIGMA[obs.axis]
    matrix = factors[0]
    for factor in factors[1:]:
        matrix = np.kron(matrix, factor)
    return Operator(matrix, kind="hermitian")


def doubly_entangled_state() -> StateVector:
    """The polarization (x) path doubly entangled two-photon singlet product.

    (|H>1|V>2 - |V>1|H>2)(|u>1|d>2 - |d>1|u>2) / 2, expanded over the
    (pol1, path1, pol2, path2) index convention: amplitudes +1/2, -1/2, -1/2,
    +1/2 at flat indices 3, 6, 9, 12.
    """
    amps = np.zeros(16, dtype=np.complex128)
    for bits, sign in (
        ((0, 0, 1, 1), +1),  # |H,u ; V,d>
        ((0, 1, 1, 0), -1),  # |H,d ; V,u>
        ((1, 0, 0, 1), -1),  # |V,u ; H,d>
        ((1, 1, 0, 0), +1),  # |V,d ; H,u>
    ):
        amps[BasisIndex(*bits).flat] = 0.5 * sign
    return StateVector(amps)


@dataclass(frozen=True)
class ConstraintRow:
    """One perfect-correlation relation: a product of locality groups.

    ``groups`` lists the elements of reality multiplied together, one name per
    group (a group is everything one apparatus reads as a single value).  The
    16-dim realization has |Psi> as an eigenvector with the stated eigenvalue.
    """

    id: int
    groups: tuple[str, ...]
    eigenvalue: int

    @property
    def label(self) -> str:
        return ".".join(self.groups)

    def operator(self) -> Operator:
        matrix = np.eye(16, dtype=np.complex128)
        for name in self.groups:
            matrix = matrix @ element_operator_16(name).matrix
        return Operator(matrix, kind="hermitian")


#: The nine constraint rows; eigenvalue pattern (-,-,-,-,+,+,+,+,-).
CONSTRAINT_ROWS: tuple[ConstraintRow, ...] = (
    ConstraintRow(1, ("z1", "z2"), -1),
    ConstraintRow(2, ("z1'", "z2'"), -1),
    ConstraintRow(3, ("x1", "x2"), -1),
    ConstraintRow(4, ("x1'", "x2'"), -1),
    ConstraintRow(5, ("z1z1'", "z2", "z2'"), +1),
    ConstraintRow(6, ("x1x1'", "x2", "x2'"), +1),
    ConstraintRow(7, ("z1", "x1'", "z2x2'"), +1),
    ConstraintRow(8, ("x1", "z1'", "x2z2'"), +1),
    ConstraintRow(9, ("z1z1'", "x1x1'", "z2x2'", "x2z2'"), -1),
)

ROW_EIGENVALUES: tuple[int, ...] = tuple(row.eigenvalue for row in CONSTRAINT_ROWS)


@dataclass(frozen=True)
class EigenCheck:
    """Result of checking row_op|Psi> = eigenvalue * |Psi> for one row."""

    id: int
    label: str
    eigenvalue: int
    residual: float

    @property
    def passed(self) -> bool:
        return self.residual < ATOL


def verify_eigenequations(state: StateVector | None = None) -> list[EigenCheck]:
    """Check all nine eigenvalue relations; failures are reported, not raised.

    The residual is the max-abs entry of (row_op - eigenvalue)|Psi>.
    """
    psi = doubly_entangled_state() if state is None else state
    checks = []
    for row in CONSTRAINT_ROWS:
        image = apply(row.operator(), psi)
        residual = float(np.abs(image.amps - row.eigenvalue * psi.amps).max())
        checks.append(EigenCheck(row.id, row.label, row.eigenvalue, residual))
    return checks


@dataclass(frozen=True)
class MerminOperator:
    """Signed sum of the nine constraint-row operators.

    The sign on each term equals that row's eigenvalue on |Psi>, so the
    quantum value is 9; the local-realistic maximum is 7.
    """

    terms: tuple[tuple[int, ConstraintRow], ...]
    realization: Operator


def bell_mermin_operator() -> MerminOperator:
    terms = tuple((row.eigenvalue, row) for row in CONSTRAINT_ROWS)
    matrix = np.zeros((16, 16), dtype=np.complex128)
    for sign, row in terms:
        matrix += sign * row.operator().matrix
    return MerminOperator(terms=terms, realization=Operator(matrix, kind="hermitian"))


def qudit_relabel(state: StateVector) -> np.ndarray:
    """Coefficients c[j, k] of a 16-dim state over four-level labels per photon.

    Labels per photon: |H,u> -> 0, |H,d> -> 1, |V,u> -> 2, |V,d> -> 3, so the
    flat two-photon index is 4*j + k and the grid is a plain reshape.  For the
    doubly entangled state the nonzero entries are c[0,3] = c[3,0] = +1/2 and
    c[1,2] = c[2,1] = -1/2.
    """
    if state.dim != 16:
        raise ValueError("qudit relabeling is defined for 16-dim states")
    if not state.normalized:
        raise ValueError("qudit relabeling expects a normalized state")
    return state.amps.reshape(4, 4).copy()


def build_bell_states(basis: str) -> dict[str, StateVector]:
    """The four maximally entangled states of a chosen pair of qubits.

    basis="pol-path": one photon's polarization entangled with its own path,
        psi+- = (|H,d> +- |V,u>)/sqrt(2), phi+- = (|H,u> +- |V,d>)/sqrt(2).
        These are joint eigenvectors of (z z', x x') with eigenvalues
        phi+ (+1,+1), phi- (+1,-1), psi+ (-1,+1), psi- (-1,-1).
    basis="polarization": the two photons' polarization qubits,
        psi+- = (|H,V> +- |V,H>)/sqrt(2), phi+- = (|H,H> +- |V,V>)/sqrt(2).
    """
    if basis not in ("pol-path", "polarization"):
        raise ValueError(f"unknown Bell basis {basis!r}")
    # In both cases the 4-dim index is 2*(first qubit) + (second qubit) and
    # the paired kets sit at indices (1, 2) for psi and (0, 3) for phi.
    inv = 1.0 / np.sqrt(2.0)
    states = {}
    for label, (i, j) in (("psi", (1, 2)), ("phi", (0, 3))):
        for sign_label, sign in (("+", 1.0), ("-", -1.0)):
            amps = np.zeros(4, dtype=np.complex128)
            amps[i] = inv
            amps[j] = sign * inv
            states[label + sign_label] = StateVector(amps)
    return states
