"""Graded local cohomology for double covers R = k[[x,y,z]]/(z^2 + g).

H^2 of R supported at (x, y) decomposes as a sum of lines spanned by the
symbols z^eps/(x^i y^j) with i, j >= 1; a Cech fraction lands in normal
form by reducing z-powers through z^2 = -g and dropping any monomial that
clears one of the denominator variables.  The 2-quasi-F-split decision
tracks the socle {z/(xy)} through Frobenius: if it survives, the cover is
F-split; if it dies, the Witt carry of the vanishing is extracted and the
verdict is whether that carry class escapes the image of Frobenius.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil

from . import linalg
from .criteria import Verdict
from .ring import Poly, PolyRing

FLAG_ASSUMED_DOMAIN = "assumed-domain"
FLAG_SOCLE_CRITERION = "socle-criterion-verdict"
FLAG_BOUND_ESCALATED = "membership-bound-escalated"

DEFAULT_SLACK = None  # per-cover default: slack = p
_MAX_ESCALATIONS = 3


class SocleSurvivesError(ValueError):
    """F(socle) != 0: the cover is F-split and no Witt carry is defined."""


class SplitNotFoundError(RuntimeError):
    """Internal inconsistency: vanishing numerator admits no x^p/y^p split."""


class DoubleCover:
    """The ring k[[x,y,z]]/(z^2 + g) for g in (x,y)k[x,y].

    Irreducibility of z^2 + g is not checked; verdicts assume R is a
    domain and reports carry the corresponding flag.
    """

    __slots__ = ("p", "g", "ring_xy", "ring_xyz", "neg_g")

    def __init__(self, p: int, g: Poly):
        ring_xy = PolyRing(p, ("x", "y"))
        if g.ring != ring_xy:
            if g.ring.char != p or g.ring.variables != ("x", "y"):
                raise ValueError("g must live in GF(p)[x, y]")
        if g.is_zero():
            raise ValueError("g must be nonzero")
        if g.constant_term():
            raise ValueError("g must have zero constant term (g in (x,y))")
        self.p = p
        self.g = g
        self.ring_xy = ring_xy
        self.ring_xyz = PolyRing(p, ("x", "y", "z"))
        self.neg_g = -self._embed_xy(g)

    def _embed_xy(self, f: Poly) -> Poly:
        return self.ring_xyz.from_terms(
            {exps + (0,): c for exps, c in f.term_map().items()}
        )

    def equation(self) -> Poly:
        """z^2 + g as an element of GF(p)[x, y, z]."""
        z = self.ring_xyz.gen("z")
        return z * z + self._embed_xy(self.g)

    def __repr__(self) -> str:
        return f"DoubleCover(p={self.p}, g={self.g.render()})"

    def __eq__(self, other) -> bool:
        return isinstance(other, DoubleCover) and self.p == other.p and self.g == other.g

    def __hash__(self) -> int:
        return hash((self.p, self.g))


class H2Class:
    """Element of H^2_{(x,y)}(R) in the canonical basis z^eps/(x^i y^j)."""

    __slots__ = ("p", "_terms")

    def __init__(self, p: int, terms: dict[tuple[int, int, int], int]):
        clean = {}
        for (eps, i, j), c in terms.items():
            if eps not in (0, 1):
                raise ValueError("z-exponent must be 0 or 1")
            if i < 1 or j < 1:
                raise ValueError("denominator exponents must be >= 1")
            c %= p
            if c:
                clean[(eps, i, j)] = c
        self.p = p
        self._terms = clean

    @classmethod
    def zero(cls, p: int) -> "H2Class":
        return cls(p, {})

    def is_zero(self) -> bool:
        return not self._terms

    def terms(self):
        for key in sorted(self._terms):
            yield key, self._terms[key]

    def term_map(self) -> dict[tuple[int, int, int], int]:
        return dict(self._terms)

    def coefficient(self, key: tuple[int, int, int]) -> int:
        return self._terms.get(key, 0)

    def __add__(self, other: "H2Class") -> "H2Class":
        if self.p != other.p:
            raise ValueError("characteristic mismatch")
        out = dict(self._terms)
        for key, c in other._terms.items():
            out[key] = (out.get(key, 0) + c) % self.p
        return H2Class(self.p, out)

    def __neg__(self) -> "H2Class":
        return H2Class(self.p, {k: -v for k, v in self._terms.items()})

    def __sub__(self, other: "H2Class") -> "H2Class":
        return self + (-other)

    def scale(self, c: int) -> "H2Class":
        return H2Class(self.p, {k: v * c for k, v in self._terms.items()})

    def __eq__(self, other) -> bool:
        return isinstance(other, H2Class) and self.p == other.p and self._terms == other._terms

    def __hash__(self) -> int:
        return hash((self.p, frozenset(self._terms.items())))

    def render(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for (eps, i, j), c in self.terms():
            num = "z" if eps else "1"
            xs = "x" if i == 1 else f"x^{i}"
            ys = "y" if j == 1 else f"y^{j}"
            body = f"{{{num}/({xs}*{ys})}}"
            parts.append(body if c == 1 else f"{c}*{body}")
        return " + ".join(parts)

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f"H2Class({self.render()})"


def reduce_modulo_cover(numerator: Poly, cover: DoubleCover) -> Poly:
    """Rewrite a polynomial in x, y, z to z-degree <= 1 using z^2 = -g."""
    ring = cover.ring_xyz
    by_zdeg: dict[int, dict[tuple[int, ...], int]] = {}
    for (u, v, w), c in numerator.term_map().items():
        by_zdeg.setdefault(w, {})[(u, v, 0)] = c
    result = ring.zero()
    for w, terms in by_zdeg.items():
        part = ring.from_terms(terms)
        part = part * cover.neg_g ** (w // 2)
        if w % 2:
            part = part * ring.gen("z")
        result = result + part
    return result


def normal_form(numerator: Poly, denom: tuple[int, int], cover: DoubleCover) -> H2Class:
    """Normal form of {numerator / (x^a y^b)} in H^2_{(x,y)}(R).

    A monomial c x^u y^v z^eps contributes c z^eps/(x^{a-u} y^{b-v}) when
    both residual exponents are >= 1 and dies otherwise (it extends to one
    of the Cech charts).
    """
    a, b = denom
    if a < 0 or b < 0:
        raise ValueError("denominator exponents must be >= 0")
    reduced = reduce_modulo_cover(numerator, cover)
    terms: dict[tuple[int, int, int], int] = {}
    for (u, v, eps), c in reduced.term_map().items():
        i = a - u
        j = b - v
        if i >= 1 and j >= 1:
            key = (eps, i, j)
            terms[key] = (terms.get(key, 0) + c) % cover.p
    return H2Class(cover.p, terms)


def socle(cover: DoubleCover) -> H2Class:
    """{z/(xy)}: divides every nonzero element of H^2."""
    return H2Class(cover.p, {(1, 1, 1): 1})


def frobenius_h2(xi: H2Class, cover: DoubleCover) -> H2Class:
    """Frobenius on H^2: p-th power basis terms and renormalize; F_p-linear
    because coefficients satisfy c^p = c."""
    p = cover.p
    z = cover.ring_xyz.gen("z")
    result = H2Class.zero(p)
    for (eps, i, j), c in xi.terms():
        numerator = z ** (p * eps) if eps else cover.ring_xyz.one()
        contrib = normal_form(numerator, (p * i, p * j), cover)
        result = result + contrib.scale(c)
    return result


def ring_multiply(m: Poly, xi: H2Class, cover: DoubleCover) -> H2Class:
    """Multiply a class by a ring element (numerator action + normal form)."""
    z = cover.ring_xyz.gen("z")
    result = H2Class.zero(cover.p)
    for (eps, i, j), c in xi.terms():
        numerator = m * (z if eps else cover.ring_xyz.one())
        result = result + normal_form(numerator, (i, j), cover).scale(c)
    return result


def witt_carry_class(cover: DoubleCover, splitting: str = "x-first") -> H2Class:
    """The class eta with {[z]^p/[xy]^p} = V(eta) in W_2 local cohomology.

    Requires F(socle) = 0.  The reduced numerator N of z^p then lies in
    (x^p, y^p) monomial-wise; after a greedy split N = x^p A + y^p B the
    carry is the Witt addition defect of the two summands,
    (1/p)((X+Y)^p - X^p - Y^p) over integer lifts, placed over
    (x^{p^2}, y^{p^2}).
    """
    p = cover.p
    if not frobenius_h2(socle(cover), cover).is_zero():
        raise SocleSurvivesError("F(socle) != 0; the cover is F-split at the socle")
    ring = cover.ring_xyz
    n_poly = reduce_modulo_cover(ring.gen("z") ** p, cover)
    a_terms: dict[tuple[int, ...], int] = {}
    b_terms: dict[tuple[int, ...], int] = {}
    for exps in sorted(n_poly.term_map(), key=lambda e: (sum(e), e)):
        c = n_poly.coefficient(exps)
        u, v, w = exps
        to_a = None
        if splitting == "x-first":
            to_a = True if u >= p else (False if v >= p else None)
        elif splitting == "y-first":
            to_a = False if v >= p else (True if u >= p else None)
        else:
            raise ValueError(f"unknown splitting strategy {splitting!r}")
        if to_a is None:
            raise SplitNotFoundError(
                f"monomial x^{u} y^{v} z^{w} divisible by neither x^{p} nor y^{p}"
            )
        if to_a:
            a_terms[(u - p, v, w)] = c
        else:
            b_terms[(u, v - p, w)] = c
    a_poly = ring.from_terms(a_terms)
    b_poly = ring.from_terms(b_terms)
    lift_ring = ring.lift_ring()
    x_l, y_l = lift_ring.gen("x"), lift_ring.gen("y")
    x_part = x_l**p * a_poly.lift_integers(lift_ring)
    y_part = y_l**p * b_poly.lift_integers(lift_ring)
    carry_lift = ((x_part + y_part) ** p - x_part**p - y_part**p).divide_exact(p)
    carry = carry_lift.reduce_mod(ring)
    return normal_form(carry, (p * p, p * p), cover)


@dataclass(frozen=True)
class MembershipResult:
    """Outcome of the Frobenius-image membership solve."""

    feasible: bool
    coefficients: dict[tuple[int, int, int], int] | None
    witness: dict[tuple[int, int, int], int] | None
    bound: int
    escalations: int


def _candidate_bound(cover: DoubleCover, slack: int | None) -> int:
    p = cover.p
    if slack is None:
        slack = p
    growth = Fraction(p - 1, 2) * cover.g.total_degree()
    return max(1, ceil((Fraction(p * p) + growth + slack) / p))


def frobenius_image_membership(
    eta: H2Class, cover: DoubleCover, slack: int | None = None
) -> MembershipResult:
    """Decide eta in span_{F_p}{ F(z^eps/(x^i y^j)) } by exact linear algebra.

    Candidate sources are bounded by i, j <= B; a term of F(z^eps/(x^i y^j))
    has denominator x-exponent at least p*i minus the z-reduction growth, so
    sources beyond B cannot meet eta's support.  Over-inclusion is harmless
    (the solve demands zero residual everywhere); a too-small bound shows up
    as an infeasible system and is retried with B doubled.  Feasibility is
    monotone in B, so two consecutive infeasible bounds settle the answer.
    """
    p = cover.p
    bound = _candidate_bound(cover, slack)
    previous_infeasible = False
    escalations = 0
    while True:
        labels = [
            (eps, i, j)
            for eps in (0, 1)
            for i in range(1, bound + 1)
            for j in range(1, bound + 1)
        ]
        columns = []
        for eps, i, j in labels:
            image = frobenius_h2(H2Class(p, {(eps, i, j): 1}), cover)
            columns.append(image.term_map())
        solution, witness = linalg.solve(columns, eta.term_map(), p)
        if solution is not None:
            coeffs = {
                labels[idx]: c for idx, c in enumerate(solution) if c
            }
            return MembershipResult(True, coeffs, None, bound, escalations)
        if previous_infeasible or escalations >= _MAX_ESCALATIONS:
            return MembershipResult(False, None, witness, bound, escalations)
        previous_infeasible = True
        escalations += 1
        bound *= 2


def in_frobenius_image(eta: H2Class, cover: DoubleCover, slack: int | None = None) -> bool:
    if eta.is_zero():
        return True
    return frobenius_image_membership(eta, cover, slack).feasible


def _pure_power_in_ideal(target: Poly, gens: list[Poly], degree_cap: int) -> bool:
    """Bounded-degree ideal membership target = sum A_i * gen_i via linear algebra."""
    ring = target.ring
    columns = []
    for gen in gens:
        if gen.is_zero():
            continue
        for u in range(degree_cap + 1):
            for v in range(degree_cap + 1 - u):
                columns.append((ring.monomial({"x": u, "y": v}) * gen).term_map())
    if not columns:
        return False
    coeffs, _ = linalg.solve(columns, target.term_map(), ring.char)
    return coeffs is not None


def has_isolated_singularity(cover: DoubleCover) -> bool:
    """Heuristic Jacobian check: the singular locus of z^2 + g is finite iff
    some pure powers x^N, y^N lie in (g_x, g_y) (+ (g) when p is odd)."""
    g = cover.g
    gens = [g.derivative("x"), g.derivative("y")]
    if cover.p != 2:
        gens.append(g)
    d = max(2, g.total_degree())
    cap = (d - 1) * (d - 1) + d
    ring = cover.ring_xy
    for n in range(1, cap + 1):
        if _pure_power_in_ideal(ring.monomial({"x": n}), gens, n + d):
            break
    else:
        return False
    for n in range(1, cap + 1):
        if _pure_power_in_ideal(ring.monomial({"y": n}), gens, n + d):
            return True
    return False


@dataclass(frozen=True)
class LocalCohAnalysis:
    """Verdict plus the intermediate classes, for reports and cross-checks."""

    verdict: Verdict
    socle_image: H2Class
    carry: H2Class | None
    membership: MembershipResult | None
    flags: tuple[str, ...] = field(default_factory=tuple)


def analyze(
    cover: DoubleCover, slack: int | None = None, splitting: str = "x-first"
) -> LocalCohAnalysis:
    """Full 2-quasi-F-split analysis of a double cover.

    A surviving socle certifies F-splitness (height 1).  Otherwise the
    carry class decides: the cover is 2-quasi-F-split iff the carry escapes
    the image of Frobenius on H^2.
    """
    flags = [FLAG_ASSUMED_DOMAIN]
    if not has_isolated_singularity(cover):
        flags.append(FLAG_SOCLE_CRITERION)
    socle_image = frobenius_h2(socle(cover), cover)
    if not socle_image.is_zero():
        verdict = Verdict(
            f_split=True, quasi2=True, height_le=1, flags=tuple(flags)
        )
        return LocalCohAnalysis(verdict, socle_image, None, None, tuple(flags))
    carry = witt_carry_class(cover, splitting=splitting)
    membership = frobenius_image_membership(carry, cover, slack=slack)
    if membership.feasible and membership.escalations:
        # the initial candidate bound was under-inclusive
        flags.append(FLAG_BOUND_ESCALATED)
    quasi2 = not membership.feasible
    verdict = Verdict(
        f_split=False,
        quasi2=quasi2,
        height_le=2 if quasi2 else None,
        flags=tuple(flags),
    )
    return LocalCohAnalysis(verdict, socle_image, carry, membership, tuple(flags))


def quasi2_doublecover(cover: DoubleCover, slack: int | None = None) -> Verdict:
    """2-quasi-F-split decision for k[[x,y,z]]/(z^2 + g)."""
    return analyze(cover, slack=slack).verdict
