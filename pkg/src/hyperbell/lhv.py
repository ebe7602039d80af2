"""Exhaustive local-hidden-variable analysis of the nine predictions.

A local-realistic model assigns a predetermined value +-1 to each of twelve
elements of reality: per photon the four single-qubit quantities and the two
jointly measured products.  The product-valued elements are independent
variables, never computed from the singles; forcing them equal to products of
singles would assume exactly the noncontextuality the argument avoids.

The nine predicted product constraints cannot all hold: multiplying the first
eight forces the four compound values to multiply to +1 (every single value
appears twice and squares away), while the ninth demands -1.  The full scan
over all 2^12 = 4096 assignments confirms at most 8 of 9 constraints are
satisfiable, capping the local-realistic Bell-Mermin value at 7 against the
quantum value 9.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator

#: Canonical element order: photon-1 singles, photon-1 compounds, then photon 2.
ELEMENTS: tuple[str, ...] = (
    "z1",
    "z1'",
    "x1",
    "x1'",
    "z1z1'",
    "x1x1'",
    "z2",
    "z2'",
    "x2",
    "x2'",
    "z2x2'",
    "x2z2'",
)

_ELEMENT_INDEX = {name: i for i, name in enumerate(ELEMENTS)}


@dataclass(frozen=True)
class LhvConstraint:
    """One predicted relation: the listed values must multiply to the target."""

    id: int
    variables: tuple[str, ...]
    required_product: int


#: Transcription of the nine local-realistic predictions.
CONSTRAINTS: tuple[LhvConstraint, ...] = (
    LhvConstraint(1, ("z1", "z2"), -1),
    LhvConstraint(2, ("z1'", "z2'"), -1),
    LhvConstraint(3, ("x1", "x2"), -1),
    LhvConstraint(4, ("x1'", "x2'"), -1),
    LhvConstraint(5, ("z1z1'", "z2", "z2'"), +1),
    LhvConstraint(6, ("x1x1'", "x2", "x2'"), +1),
    LhvConstraint(7, ("z1", "x1'", "z2x2'"), +1),
    LhvConstraint(8, ("x1", "z1'", "x2z2'"), +1),
    LhvConstraint(9, ("z1z1'", "x1x1'", "z2x2'", "x2z2'"), -1),
)

#: Brute-force maximum of the Bell-Mermin value over all assignments,
#: re-derived by contradiction_certificate() and asserted in the tests.
LHV_BOUND = 7

#: Quantum value of the same quantity on the doubly entangled state.
QUANTUM_VALUE = 9


@dataclass(frozen=True)
class LhvAssignment:
    """Values +-1 for the twelve elements of reality, in ELEMENTS order."""

    values: tuple[int, ...]

    def __post_init__(self):
        if len(self.values) != len(ELEMENTS):
            raise ValueError(f"expected {len(ELEMENTS)} values, got {len(self.values)}")
        if any(v not in (-1, 1) for v in self.values):
            raise ValueError("assignment values must be +1 or -1")

    def __getitem__(self, name: str) -> int:
        return self.values[_ELEMENT_INDEX[name]]

    def as_dict(self) -> dict[str, int]:
        return dict(zip(ELEMENTS, self.values))

    @classmethod
    def from_dict(cls, values: dict[str, int]) -> "LhvAssignment":
        missing = [name for name in ELEMENTS if name not in values]
        extra = [name for name in values if name not in _ELEMENT_INDEX]
        if missing or extra:
            raise ValueError(f"bad element names: missing {missing}, extra {extra}")
        return cls(tuple(values[name] for name in ELEMENTS))


def enumerate_assignments() -> Iterator[LhvAssignment]:
    """All 4096 assignments, lexicographic with +1 before -1 (all-+1 first)."""
    for values in itertools.product((1, -1), repeat=len(ELEMENTS)):
        yield LhvAssignment(values)


def constraint_product(assignment: LhvAssignment, constraint: LhvConstraint) -> int:
    product = 1
    for name in constraint.variables:
        product *= assignment[name]
    return product


def check(assignment: LhvAssignment) -> tuple[tuple[bool, ...], int]:
    """Per-constraint satisfaction vector and the count of satisfied rows."""
    flags = tuple(
        constraint_product(assignment, c) == c.required_product for c in CONSTRAINTS
    )
    return flags, sum(flags)


def mermin_value(assignment: LhvAssignment) -> int:
    """Local-realistic value of the Bell-Mermin sum for one assignment.

    The sign on each term equals that constraint's required product, so the
    value is (satisfied count) - (violated count) = 2*count - 9, an odd
    integer in [-9, 9].
    """
    return sum(
        c.required_product * constraint_product(assignment, c) for c in CONSTRAINTS
    )


@dataclass(frozen=True)
class ParityArgument:
    """Structural inconsistency proof, independent of any enumeration.

    Multiplying constraints 1-8 symbolically leaves exactly the variables of
    odd multiplicity; every single-qubit value appears twice and drops out, so
    the four compound values are forced to multiply to ``forced_product``
    while constraint 9 requires ``row9_required``.
    """

    odd_multiplicity: tuple[str, ...]
    forced_product: int
    row9_variables: tuple[str, ...]
    row9_required: int

    @property
    def contradiction(self) -> bool:
        return (
            set(self.odd_multiplicity) == set(self.row9_variables)
            and self.forced_product != self.row9_required
        )


def parity_argument() -> ParityArgument:
    """Multiply constraints 1-8 symbolically and compare against constraint 9."""
    counts: dict[str, int] = {}
    forced = 1
    for constraint in CONSTRAINTS[:8]:
        forced *= constraint.required_product
        for name in constraint.variables:
            counts[name] = counts.get(name, 0) + 1
    odd = tuple(name for name in ELEMENTS if counts.get(name, 0) % 2 == 1)
    row9 = CONSTRAINTS[8]
    return ParityArgument(
        odd_multiplicity=odd,
        forced_product=forced,
        row9_variables=row9.variables,
        row9_required=row9.required_product,
    )


@dataclass(frozen=True)
class ContradictionCertificate:
    """Outcome of the exhaustive scan plus the structural parity argument."""

    satisfied_max: int
    witness: LhvAssignment
    parity_product: int
    mermin_max: int
    mermin_min: int

    def to_dict(self) -> dict:
        flags, count = check(self.witness)
        return {
            "element_order": list(ELEMENTS),
            "assignments_scanned": 2 ** len(ELEMENTS),
            "satisfied_max": self.satisfied_max,
            "mermin_max": self.mermin_max,
            "mermin_min": self.mermin_min,
            "quantum_value": QUANTUM_VALUE,
            "parity_product": self.parity_product,
            "witness": self.witness.as_dict(),
            "rows": [
                {
                    "id": c.id,
                    "variables": list(c.variables),
                    "required_product": c.required_product,
                    "witness_product": constraint_product(self.witness, c),
                    "satisfied": flags[i],
                }
                for i, c in enumerate(CONSTRAINTS)
            ],
        }

    def to_text(self) -> str:
        flags, _ = check(self.witness)
        lines = [
            "local-hidden-variable certificate",
            f"  assignments scanned : {2 ** len(ELEMENTS)}",
            f"  max satisfied       : {self.satisfied_max} of {len(CONSTRAINTS)}",
            f"  max LHV value       : {self.mermin_max}",
            f"  min LHV value       : {self.mermin_min}",
            f"  quantum value       : {QUANTUM_VALUE}",
            f"  parity product      : {self.parity_product:+d} (constraint 9 requires "
            f"{CONSTRAINTS[8].required_product:+d})",
            "  witness assignment:",
        ]
        for name in ELEMENTS:
            lines.append(f"    v({name:<6}) = {self.witness[name]:+d}")
        lines.append("  per-constraint check at the witness:")
        for i, c in enumerate(CONSTRAINTS):
            product = constraint_product(self.witness, c)
            status = "satisfied" if flags[i] else "violated"
            lines.append(
                f"    {c.id}: {'.'.join(c.variables):<28} required {c.required_product:+d}"
                f"  got {product:+d}  {status}"
            )
        return "\n".join(lines)


def contradiction_certificate() -> ContradictionCertificate:
    """Scan all 4096 assignments; report the best witness and the parity proof.

    Ties on the satisfied count keep the first witness in enumeration order,
    so the result is deterministic.
    """
    best_count = -1
    best_witness = None
    best_value = None
    worst_value = None
    for assignment in enumerate_assignments():
        _, count = check(assignment)
        value = mermin_value(assignment)
        if count > best_count:
            best_count = count
            best_witness = assignment
        if best_value is None or value > best_value:
            best_value = value
        if worst_value is None or value < worst_value:
            worst_value = value
    assert best_witness is not None
    return ContradictionCertificate(
        satisfied_max=best_count,
        witness=best_witness,
        parity_product=parity_argument().forced_product,
        mermin_max=best_value,
        mermin_min=worst_value,
    )
