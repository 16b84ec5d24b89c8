"""Decision procedures for hypersurfaces: Fedder's F-split test and the
height-2 quasi-F-split test, plus an elliptic point-count oracle used for
cross-checking.

The height-2 clause is stated for a homogeneous polynomial whose degree
equals the number of variables (the Calabi-Yau case).  Other inputs are
still evaluated but the verdict carries a warning flag instead of a
certification; the double-cover local-cohomology engine is the authority
for those.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .ring import Poly
from .witt import delta_carry

FLAG_CERTIFIED = "criterion-certified"
FLAG_NON_HOMOGENEOUS = "non-homogeneous-criterion"


class ZeroInputError(ValueError):
    """The zero polynomial defines no hypersurface."""


class SingularCurveError(ValueError):
    """The Weierstrass equation is singular."""


@dataclass(frozen=True)
class Verdict:
    """Outcome of a splitness analysis.

    height_le is 1 or 2 when established, None when unknown (height > 2 or
    search capped); quasi2 is None when the height-2 clause was never
    evaluated.
    """

    f_split: bool
    quasi2: bool | None
    height_le: int | None
    witnesses: dict[str, Poly] | None = None
    flags: tuple[str, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if self.height_le not in (None, 1, 2):
            raise ValueError("height_le must be 1, 2 or None")
        if self.f_split:
            if self.quasi2 is not True or self.height_le != 1:
                raise ValueError("F-split verdicts must have quasi2 and height 1")
        if self.quasi2 and self.height_le not in (1, 2):
            raise ValueError("quasi2 verdicts must bound the height by 2")

    def summary(self) -> str:
        if self.f_split:
            return "F-split (height 1)"
        if self.quasi2:
            return "not F-split; 2-quasi-F-split (height 2)"
        if self.quasi2 is None:
            return "not F-split; 2-quasi-F-splitness undecided"
        return "not F-split; not 2-quasi-F-split (height > 2)"


def _require_nonzero(f: Poly) -> None:
    if f.is_zero():
        raise ZeroInputError("zero polynomial")


def fedder_test(f: Poly) -> bool:
    """True iff f^{p-1} lies outside (x_1^p, ..., x_n^p), i.e. the
    hypersurface is F-split near the origin."""
    _require_nonzero(f)
    p = f.ring.char
    return not (f ** (p - 1)).in_frobenius_power_ideal(1)


def _conformance_flags(f: Poly) -> tuple[str, ...]:
    if f.is_homogeneous() and f.total_degree() == f.ring.nvars:
        return (FLAG_CERTIFIED,)
    return (FLAG_NON_HOMOGENEOUS,)


def quasi2_test(f: Poly) -> Verdict:
    """Height-2 test: F-split, or f^{p^2-p-1} * delta(f) outside
    (x_1^{p^2}, ..., x_n^{p^2})."""
    _require_nonzero(f)
    p = f.ring.char
    flags = _conformance_flags(f)
    clause1_poly = f ** (p - 1)
    if not clause1_poly.in_frobenius_power_ideal(1):
        return Verdict(
            f_split=True,
            quasi2=True,
            height_le=1,
            witnesses={"clause1": clause1_poly},
            flags=flags,
        )
    clause2_poly = f ** (p * p - p - 1) * delta_carry(f)
    quasi2 = not clause2_poly.in_frobenius_power_ideal(2)
    return Verdict(
        f_split=False,
        quasi2=quasi2,
        height_le=2 if quasi2 else None,
        witnesses={"clause1": clause1_poly, "clause2": clause2_poly},
        flags=flags,
    )


def height_search(f: Poly, max_n: int = 2) -> Verdict:
    """Search heights 1..max_n in order; quasi-F-splitness is monotone in
    the height, so the first success is the answer."""
    if max_n not in (1, 2):
        raise ValueError("max_n must be 1 or 2")
    _require_nonzero(f)
    if max_n == 1:
        split = fedder_test(f)
        return Verdict(
            f_split=split,
            quasi2=True if split else None,
            height_le=1 if split else None,
            flags=_conformance_flags(f),
        )
    return quasi2_test(f)


def supersingular_oracle(p: int, a: int, b: int) -> bool:
    """Exhaustive point count of y^2 = x^3 + a x + b over F_p, p >= 5.

    Returns True iff #E(F_p) = p + 1 (trace zero, supersingular).
    """
    if p < 5:
        raise ValueError("point-count oracle requires p >= 5")
    a %= p
    b %= p
    if (-16 * (4 * a**3 + 27 * b**2)) % p == 0:
        raise SingularCurveError(f"discriminant vanishes for a={a}, b={b} mod {p}")
    square_counts = {0: 1}
    for y in range(1, p):
        square_counts[y * y % p] = square_counts.get(y * y % p, 0) + 1
    count = 1  # point at infinity
    for x in range(p):
        count += square_counts.get((x * x * x + a * x + b) % p, 0)
    return count == p + 1
