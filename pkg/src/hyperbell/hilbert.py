"""Dense complex linear algebra on the two-photon Hilbert space.

The joint space is 16-dimensional: polarization (H/V) and spatial path (u/d)
for each of two photons.  Basis ordering is photon-major with polarization
before path, so the flat index of a product ket is

    index = 8*pol1 + 4*path1 + 2*pol2 + path2      (H = u = 0, V = d = 1).

Everything here is exact dense algebra at dimension <= 16; states and
operators are immutable after construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Union

import numpy as np

# Tolerance for all exact-algebra assertions (normalization, Hermiticity,
# unitarity, eigenvalue residuals).  Well above double-precision noise at
# dimension 16.
ATOL = 1e-12

# Dimension 8 never appears in a finished object but is reachable as an
# intermediate of a three-factor tensor product.
VALID_DIMS = (2, 4, 8, 16)

_POL_LABELS = ("H", "V")
_PATH_LABELS = ("u", "d")


class BasisIndex(NamedTuple):
    """Bit labels (pol1, path1, pol2, path2) of one 16-dim product ket."""

    p1pol: int
    p1path: int
    p2pol: int
    p2path: int

    @property
    def flat(self) -> int:
        return 8 * self.p1pol + 4 * self.p1path + 2 * self.p2pol + self.p2path

    @classmethod
    def from_flat(cls, index: int) -> "BasisIndex":
        if not 0 <= index < 16:
            raise ValueError(f"flat basis index out of range: {index}")
        return cls((index >> 3) & 1, (index >> 2) & 1, (index >> 1) & 1, index & 1)

    def label(self) -> str:
        return "|{},{};{},{}>".format(
            _POL_LABELS[self.p1pol],
            _PATH_LABELS[self.p1path],
            _POL_LABELS[self.p2pol],
            _PATH_LABELS[self.p2path],
        )


def _frozen_array(values, shape_check) -> np.ndarray:
    arr = np.array(values, dtype=np.complex128)
    if not np.isfinite(arr).all():
        raise ValueError("non-finite amplitude")
    shape_check(arr)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class StateVector:
    """A ket over 2-, 4-, 8- or 16-dim factors of the two-photon space.

    ``normalized=True`` (the default) asserts unit norm at construction;
    results of non-norm-preserving maps carry ``normalized=False``.
    """

    amps: np.ndarray
    normalized: bool = True

    def __post_init__(self):
        def check(arr):
            if arr.ndim != 1 or arr.shape[0] not in VALID_DIMS:
                raise ValueError(f"state dimension must be one of {VALID_DIMS}")

        arr = _frozen_array(self.amps, check)
        object.__setattr__(self, "amps", arr)
        if self.normalized and abs(self.norm_squared() - 1.0) >= ATOL:
            raise ValueError(
                f"state labeled normalized has squared norm {self.norm_squared()!r}"
            )

    @property
    def dim(self) -> int:
        return self.amps.shape[0]

    def norm_squared(self) -> float:
        return float(np.sum(np.abs(self.amps) ** 2))


@dataclass(frozen=True)
class Operator:
    """A square matrix with a declared kind in {hermitian, unitary, general}.

    The kind is validated at construction: hermitian requires M = M^dagger and
    unitary requires M^dagger M = 1, both to within ATOL.
    """

    matrix: np.ndarray
    kind: str = "general"

    def __post_init__(self):
        def check(arr):
            if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
                raise ValueError("operator matrix must be square")
            if arr.shape[0] not in VALID_DIMS:
                raise ValueError(f"operator dimension must be one of {VALID_DIMS}")

        arr = _frozen_array(self.matrix, check)
        object.__setattr__(self, "matrix", arr)
        if self.kind not in ("hermitian", "unitary", "general"):
            raise ValueError(f"unknown operator kind {self.kind!r}")
        if self.kind == "hermitian":
            if np.abs(arr - arr.conj().T).max() >= ATOL:
                raise ValueError("operator labeled hermitian is not self-adjoint")
        elif self.kind == "unitary":
            eye = np.eye(arr.shape[0])
            if np.abs(arr.conj().T @ arr - eye).max() >= ATOL:
                raise ValueError("operator labeled unitary fails U^dagger U = 1")

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def identity(dim: int) -> Operator:
    return Operator(np.eye(dim), kind="hermitian")


def basis_ket(dim: int, index: int) -> StateVector:
    if not 0 <= index < dim:
        raise ValueError(f"basis index {index} out of range for dim {dim}")
    amps = np.zeros(dim, dtype=np.complex128)
    amps[index] = 1.0
    return StateVector(amps)


def _tensor_kind(a: Operator, b: Operator) -> str:
    # Kronecker products preserve Hermiticity and unitarity separately.
    if a.kind == b.kind and a.kind in ("hermitian", "unitary"):
        return a.kind
    return "general"


def tensor(
    a: Union[Operator, StateVector], b: Union[Operator, StateVector]
) -> Union[Operator, StateVector]:
    """Kronecker product; the first argument is the more significant factor."""
    if isinstance(a, StateVector) and isinstance(b, StateVector):
        if a.dim * b.dim > 16:
            raise ValueError(f"tensor dimension overflow: {a.dim}x{b.dim} > 16")
        return StateVector(
            np.kron(a.amps, b.amps), normalized=a.normalized and b.normalized
        )
    if isinstance(a, Operator) and isinstance(b, Operator):
        if a.dim * b.dim > 16:
            raise ValueError(f"tensor dimension overflow: {a.dim}x{b.dim} > 16")
        return Operator(np.kron(a.matrix, b.matrix), kind=_tensor_kind(a, b))
    raise TypeError("tensor arguments must be two states or two operators")


def apply(op: Operator, s: StateVector) -> StateVector:
    """Matrix-vector product op|s>; the result is not renormalized."""
    if op.dim != s.dim:
        raise ValueError(f"dimension mismatch: operator {op.dim}, state {s.dim}")
    return StateVector(op.matrix @ s.amps, normalized=False)


def inner(a: StateVector, b: StateVector) -> complex:
    """<a|b>, conjugate-linear in the first argument."""
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")
    return complex(np.vdot(a.amps, b.amps))


def expectation(op: Operator, s: StateVector) -> float:
    """Real expectation value <s|op|s> of a Hermitian operator on a unit ket."""
    if op.kind != "hermitian":
        raise ValueError("expectation requires an operator of kind 'hermitian'")
    if op.dim != s.dim:
        raise ValueError(f"dimension mismatch: operator {op.dim}, state {s.dim}")
    if not s.normalized:
        raise ValueError("expectation requires a normalized state")
    value = complex(np.vdot(s.amps, op.matrix @ s.amps))
    if abs(value.imag) >= ATOL:
        raise ValueError(f"expectation has imaginary residue {value.imag!r}")
    return value.real


def adjoint(op: Operator) -> Operator:
    return Operator(op.matrix.conj().T, kind=op.kind)


def matmul(a: Operator, b: Operator) -> Operator:
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")
    kind = "unitary" if a.kind == b.kind == "unitary" else "general"
    return Operator(a.matrix @ b.matrix, kind=kind)


def commutator_norm(a: Operator, b: Operator) -> float:
    """Max-abs entry of ab - ba."""
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")
    comm = a.matrix @ b.matrix - b.matrix @ a.matrix
    return float(np.abs(comm).max())
