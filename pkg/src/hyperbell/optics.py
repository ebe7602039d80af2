"""Linear-optics models of the six single-photon measurement apparatuses.

Element conventions on one photon's 4-dim pol (x) path space:

  BS     path-mode mixer,  |u> -> (|u>+|d>)/sqrt2,  |d> -> (|u>-|d>)/sqrt2
  HWP45  half-wave plate,  |H> -> (|H>+|V>)/sqrt2,  |V> -> (|H>-|V>)/sqrt2
  PBS    transmits H keeping its path label; reflects V swapping u <-> d,
         with no extra reflection phase (port convention pinned here)
  PHASE  e^{i phi} on one chosen basis ray (H, V, u or d)

Apparatuses 1-4 are ordered element chains followed by detectors on the four
computational output ports; their measurement basis is the chain's unitary
pulled back onto the input space.  Apparatuses 5 and 6 read the two jointly
measured products per photon, so they are modeled directly as projective
measurements in the joint eigenbasis of their two observables (for 5 that
eigenbasis is exactly the polarization-path Bell basis).

Every detector is mapped to the eigenvalues of the apparatus's three
quantities, each eigenvalue extracted independently from its own operator and
asserted against the basis state.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .hilbert import ATOL, Operator, StateVector, commutator_norm, inner, matmul
from .observables import build_bell_states, element_operator

#: Commutation tolerance for the two primary observables of one apparatus.
COMMUTATOR_ATOL = 1e-13

_HADAMARD = np.array([[1.0, 1.0], [1.0, -1.0]], dtype=np.complex128) / np.sqrt(2.0)
_EYE2 = np.eye(2, dtype=np.complex128)

_PHASE_MODES = ("H", "V", "u", "d")

#: Detector port labels for the element-chain apparatuses, index 2*pol + path.
PORT_LABELS = ("(H,u)", "(H,d)", "(V,u)", "(V,d)")

#: Apparatus-5 detector order; these are the polarization-path Bell states.
APPARATUS5_LABELS = ("phi+", "phi-", "psi+", "psi-")


@dataclass(frozen=True)
class OpticalElement:
    """One linear element; ``phase`` and ``mode`` apply to PHASE only."""

    kind: str
    phase: float = 0.0
    mode: str = "d"

    def __post_init__(self):
        if self.kind not in ("BS", "HWP45", "PBS", "PHASE"):
            raise ValueError(f"unknown element kind {self.kind!r}")
        if self.kind == "PHASE" and self.mode not in _PHASE_MODES:
            raise ValueError(f"PHASE mode must be one of {_PHASE_MODES}")


def element_unitary(element: OpticalElement) -> Operator:
    """Single-photon unitary of one element on the pol (x) path space."""
    if element.kind == "BS":
        matrix = np.kron(_EYE2, _HADAMARD)
    elif element.kind == "HWP45":
        matrix = np.kron(_HADAMARD, _EYE2)
    elif element.kind == "PBS":
        # |H,u> -> |H,u>, |H,d> -> |H,d>, |V,u> -> |V,d>, |V,d> -> |V,u>
        matrix = np.zeros((4, 4), dtype=np.complex128)
        matrix[0, 0] = matrix[1, 1] = 1.0
        matrix[3, 2] = matrix[2, 3] = 1.0
    else:  # PHASE
        shift = np.exp(1j * element.phase)
        diag = np.ones(4, dtype=np.complex128)
        if element.mode in ("H", "V"):
            pol = 0 if element.mode == "H" else 1
            diag[2 * pol : 2 * pol + 2] = shift
        else:
            path = 0 if element.mode == "u" else 1
            diag[[path, 2 + path]] = shift
        matrix = np.diag(diag)
    return Operator(matrix, kind="unitary")


class DetectorPattern(NamedTuple):
    """Which detector fired on each side of one shot (ideal detection)."""

    photon1_detector: int
    photon2_detector: int


@dataclass(frozen=True)
class ShotRecord:
    """One sampled run: apparatus pair, click pattern, inferred values.

    ``values`` holds six entries, three per side: both primary observables and
    their product, keyed by observable name.
    """

    apparatus_1: int
    apparatus_2: int
    pattern: DetectorPattern
    values: dict[str, int]


@dataclass(frozen=True)
class ApparatusSpec:
    """One apparatus: id, side, observables, realization and detector map.

    ``basis`` rows are the four detector states expressed over the photon's
    input pol (x) path coordinates; ``detector_map[d]`` gives the eigenvalue
    triple (v(A), v(B), v(A*B)) labeling detector d.
    """

    id: int
    photon: int
    observable_a: str
    observable_b: str
    elements: tuple[OpticalElement, ...] | None
    basis: np.ndarray
    detector_map: tuple[tuple[int, int, int], ...]

    @property
    def product_name(self) -> str:
        return f"{self.observable_a}*{self.observable_b}"

    @property
    def value_names(self) -> tuple[str, str, str]:
        return (self.observable_a, self.observable_b, self.product_name)

    def describe(self) -> str:
        lines = [
            f"apparatus {self.id} (photon {self.photon}): measures "
            f"{self.observable_a}, {self.observable_b} and {self.product_name}"
        ]
        if self.elements is not None:
            chain = " -> ".join(e.kind for e in self.elements)
            lines.append(f"  elements: {chain} -> detectors on ports "
                         f"{', '.join(PORT_LABELS)}")
        else:
            lines.append("  realization: projective measurement in the joint "
                         "eigenbasis of the two observables")
        lines.append("  detector map (basis state | eigenvalues):")
        for d in range(4):
            amps = ", ".join(f"{a.real:+.4f}{a.imag:+.4f}j" for a in self.basis[d])
            va, vb, vab = self.detector_map[d]
            lines.append(
                f"    D{d}: [{amps}]  "
                f"v({self.observable_a})={va:+d} v({self.observable_b})={vb:+d} "
                f"v({self.product_name})={vab:+d}"
            )
        return "\n".join(lines)


# id -> (photon, (observable A, observable B), element chain or None)
_APPARATUS_TABLE: dict[int, tuple[int, tuple[str, str], tuple[str, ...] | None]] = {
    1: (1, ("z1", "x1'"), ("BS", "PBS")),
    2: (2, ("x2", "x2'"), ("HWP45", "BS", "PBS")),
    3: (1, ("x1", "z1'"), ("HWP45", "PBS")),
    4: (2, ("z2", "z2'"), ("PBS",)),
    5: (1, ("z1z1'", "x1x1'"), None),
    6: (2, ("z2x2'", "x2z2'"), None),
}


def _eigenvalue_on(matrix: np.ndarray, vec: np.ndarray, name: str) -> int:
    """Round <v|M|v> to +-1 and assert v is the corresponding eigenvector."""
    raw = complex(np.vdot(vec, matrix @ vec)).real
    value = int(round(raw))
    if value not in (-1, 1) or abs(raw - value) >= ATOL:
        raise AssertionError(f"{name}: basis state is not a +-1 eigenvector")
    residual = np.abs(matrix @ vec - value * vec).max()
    if residual >= ATOL:
        raise AssertionError(f"{name}: eigenvector residual {residual:g}")
    return value


def _chain_basis(element_kinds: tuple[str, ...]) -> np.ndarray:
    """Detector basis of an element chain: row d is U^dagger |port d>."""
    unitary = np.eye(4, dtype=np.complex128)
    for kind in element_kinds:
        unitary = element_unitary(OpticalElement(kind)).matrix @ unitary
    # U^dagger e_d is the d-th column of U^dagger, i.e. conj of U's d-th row.
    return unitary.conj()


def _joint_eigenbasis_6() -> np.ndarray:
    """Joint eigenbasis of (z x', x z') ordered (+,+), (+,-), (-,+), (-,-)."""
    s = 1.0 / np.sqrt(2.0)
    h_plus = np.array([s, s, 0, 0], dtype=np.complex128)  # |H,u+d>
    h_minus = np.array([s, -s, 0, 0], dtype=np.complex128)
    v_plus = np.array([0, 0, s, s], dtype=np.complex128)
    v_minus = np.array([0, 0, s, -s], dtype=np.complex128)
    return np.array(
        [
            s * (h_plus + v_minus),
            s * (h_plus - v_minus),
            s * (h_minus + v_plus),
            s * (h_minus - v_plus),
        ]
    )


@lru_cache(maxsize=None)
def build_apparatus(apparatus_id: int) -> ApparatusSpec:
    """Construct and validate one of the six apparatuses."""
    if apparatus_id not in _APPARATUS_TABLE:
        raise ValueError(f"apparatus id must be 1..6, got {apparatus_id}")
    photon, (name_a, name_b), chain = _APPARATUS_TABLE[apparatus_id]

    op_a = element_operator(name_a)
    op_b = element_operator(name_b)
    if commutator_norm(op_a, op_b) >= COMMUTATOR_ATOL:
        raise AssertionError(f"apparatus {apparatus_id}: observables do not commute")
    product = matmul(op_a, op_b).matrix

    if chain is not None:
        elements = tuple(OpticalElement(kind) for kind in chain)
        basis = _chain_basis(chain)
    elif apparatus_id == 5:
        elements = None
        bells = build_bell_states("pol-path")
        basis = np.array([bells[label].amps for label in APPARATUS5_LABELS])
    else:
        elements = None
        basis = _joint_eigenbasis_6()

    gram = basis @ basis.conj().T
    if np.abs(gram - np.eye(4)).max() >= ATOL:
        raise AssertionError(f"apparatus {apparatus_id}: basis is not orthonormal")

    detector_map = []
    for d in range(4):
        vec = basis[d]
        va = _eigenvalue_on(op_a.matrix, vec, f"apparatus {apparatus_id} {name_a}")
        vb = _eigenvalue_on(op_b.matrix, vec, f"apparatus {apparatus_id} {name_b}")
        vab = _eigenvalue_on(
            product, vec, f"apparatus {apparatus_id} {name_a}*{name_b}"
        )
        if vab != va * vb:
            raise AssertionError(
                f"apparatus {apparatus_id}: detector {d} product label mismatch"
            )
        detector_map.append((va, vb, vab))

    basis.setflags(write=False)
    return ApparatusSpec(
        id=apparatus_id,
        photon=photon,
        observable_a=name_a,
        observable_b=name_b,
        elements=elements,
        basis=basis,
        detector_map=tuple(detector_map),
    )


def _check_pair(a1: ApparatusSpec, a2: ApparatusSpec, state: StateVector) -> None:
    if a1.photon != 1 or a2.photon != 2:
        raise ValueError(
            f"apparatus pair must act on photons (1, 2); got "
            f"({a1.id} on photon {a1.photon}, {a2.id} on photon {a2.photon})"
        )
    if state.dim != 16:
        raise ValueError("pair measurement expects the 16-dim two-photon state")
    if not state.normalized:
        raise ValueError("pair measurement expects a normalized state")


def joint_distribution(
    a1: ApparatusSpec, a2: ApparatusSpec, state: StateVector
) -> np.ndarray:
    """Born probabilities p[d1, d2] over the 4 x 4 detector patterns."""
    _check_pair(a1, a2, state)
    grid = state.amps.reshape(4, 4)
    amplitudes = a1.basis.conj() @ grid @ a2.basis.conj().T
    probs = np.abs(amplitudes) ** 2
    total = probs.sum()
    if abs(total - 1.0) >= 1e-9:
        raise AssertionError(f"pattern distribution sums to {total!r}")
    return probs / total


def sample_patterns(
    a1: ApparatusSpec,
    a2: ApparatusSpec,
    state: StateVector,
    shots: int,
    rng: np.random.Generator,
) -> tuple[np.ndarray, np.ndarray]:
    """Draw detector patterns from the Born distribution; returns (d1, d2)."""
    cdf = np.cumsum(joint_distribution(a1, a2, state).ravel())
    cdf[-1] = 1.0
    flat = np.searchsorted(cdf, rng.random(shots), side="right")
    return flat // 4, flat % 4


def pattern_values(apparatus: ApparatusSpec, detectors: np.ndarray) -> dict[str, np.ndarray]:
    """Map detector indices to the three labeled eigenvalues, vectorized."""
    table = np.asarray(apparatus.detector_map, dtype=np.int64)
    picked = table[np.asarray(detectors)]
    names = apparatus.value_names
    return {names[i]: picked[..., i] for i in range(3)}


def measure_pair(
    a1: ApparatusSpec,
    a2: ApparatusSpec,
    state: StateVector,
    rng: np.random.Generator,
) -> ShotRecord:
    """Sample one shot of the apparatus pair and record all six local values."""
    d1, d2 = sample_patterns(a1, a2, state, 1, rng)
    pattern = DetectorPattern(int(d1[0]), int(d2[0]))
    values: dict[str, int] = {}
    for apparatus, detector in ((a1, pattern[0]), (a2, pattern[1])):
        triple = apparatus.detector_map[detector]
        for name, value in zip(apparatus.value_names, triple):
            values[name] = value
    return ShotRecord(a1.id, a2.id, pattern, values)


#: Label order used by the Bell discriminator.
BELL_LABELS = ("psi+", "psi-", "phi+", "phi-")


def bell_probabilities(state: StateVector) -> dict[str, float]:
    """Projection probabilities of a single-photon state onto the Bell basis."""
    if state.dim != 4:
        raise ValueError("Bell discrimination expects a 4-dim pol-path state")
    if not state.normalized:
        raise ValueError("Bell discrimination expects a normalized state")
    bells = build_bell_states("pol-path")
    return {label: abs(inner(bells[label], state)) ** 2 for label in BELL_LABELS}


def bell_discriminate(state: StateVector, rng: np.random.Generator) -> str:
    """Projective measurement in the polarization-path Bell basis."""
    probs = bell_probabilities(state)
    weights = np.array([probs[label] for label in BELL_LABELS])
    cdf = np.cumsum(weights / weights.sum())
    cdf[-1] = 1.0
    index = int(np.searchsorted(cdf, rng.random(), side="right"))
    return BELL_LABELS[index]


def bell_histogram(
    state: StateVector, shots: int, rng: np.random.Generator
) -> dict[str, int]:
    """Label counts over repeated Bell discrimination of the same input."""
    if shots < 1:
        raise ValueError("shots must be >= 1")
    probs = bell_probabilities(state)
    weights = np.array([probs[label] for label in BELL_LABELS])
    cdf = np.cumsum(weights / weights.sum())
    cdf[-1] = 1.0
    indices = np.searchsorted(cdf, rng.random(shots), side="right")
    counts = np.bincount(indices, minlength=len(BELL_LABELS))
    return {label: int(counts[i]) for i, label in enumerate(BELL_LABELS)}
