"""Exact linear algebra over GF(p) on sparse vectors.

Vectors are dicts mapping hashable row keys to nonzero residues mod p.
Pivot choice always takes the smallest sortable key, so every routine is
deterministic for a fixed input order.
"""

from __future__ import annotations

from typing import Hashable, Sequence


def _axpy(target: dict, source: dict, factor: int, p: int) -> None:
    """target += factor * source (in place, dropping zeros)."""
    for k, v in source.items():
        s = (target.get(k, 0) + factor * v) % p
        if s:
            target[k] = s
        elif k in target:
            del target[k]


class GaussianBasis:
    """Row-echelon accumulator: feed vectors, query span membership and rank."""

    def __init__(self, p: int):
        self.p = p
        self.rows: dict[Hashable, dict] = {}  # pivot key -> normalized row

    def reduce(self, vec: dict) -> dict:
        """Remainder of vec modulo the current row space."""
        vec = dict(vec)
        while vec:
            pivot = min(vec)
            row = self.rows.get(pivot)
            if row is None:
                return vec
            _axpy(vec, row, -vec[pivot] % self.p, self.p)
        return vec

    def add(self, vec: dict) -> bool:
        """Insert vec; returns True if it enlarged the span."""
        rem = self.reduce(vec)
        if not rem:
            return False
        pivot = min(rem)
        inv = pow(rem[pivot], -1, self.p)
        self.rows[pivot] = {k: (v * inv) % self.p for k, v in rem.items()}
        return True

    @property
    def rank(self) -> int:
        return len(self.rows)

    def contains(self, vec: dict) -> bool:
        return not self.reduce(vec)


def rank(vectors: Sequence[dict], p: int) -> int:
    basis = GaussianBasis(p)
    for v in vectors:
        basis.add(v)
    return basis.rank


def solve(columns: Sequence[dict], rhs: dict, p: int):
    """Solve sum_j c_j * columns[j] = rhs exactly over GF(p).

    Returns (coefficients, None) when solvable with free variables set to 0,
    or (None, witness) when infeasible; the witness maps row keys of the
    original equations to multipliers exhibiting 0 = nonzero.
    """
    # Augmented echelon with provenance: each working row is the triple
    # (coeffs over column indices, rhs value, multiplier over equation keys).
    by_key: dict = {}
    for j, col in enumerate(columns):
        for key, v in col.items():
            by_key.setdefault(key, {})[j] = v
    for key in rhs:
        by_key.setdefault(key, {})
    work: list[tuple[dict, int, dict]] = []
    for key in sorted(by_key, key=repr):
        work.append((by_key[key], rhs.get(key, 0) % p, {key: 1}))

    echelon: dict[int, tuple[dict, int, dict]] = {}  # pivot column -> row
    for coeffs, val, prov in work:
        coeffs = dict(coeffs)
        prov = dict(prov)
        inserted = False
        while coeffs:
            pivot = min(coeffs)
            existing = echelon.get(pivot)
            if existing is None:
                inv = pow(coeffs[pivot], -1, p)
                coeffs = {k: (v * inv) % p for k, v in coeffs.items()}
                val = (val * inv) % p
                prov = {k: (v * inv) % p for k, v in prov.items()}
                echelon[pivot] = (coeffs, val, prov)
                inserted = True
                break
            factor = -coeffs[pivot] % p
            _axpy(coeffs, existing[0], factor, p)
            val = (val + factor * existing[1]) % p
            _axpy(prov, existing[2], factor, p)
        if not inserted and val:
            return None, prov
    solution = [0] * len(columns)
    for pivot in sorted(echelon, reverse=True):
        coeffs, val, _ = echelon[pivot]
        acc = val
        for j, c in coeffs.items():
            if j != pivot:
                acc = (acc - c * solution[j]) % p
        solution[pivot] = acc % p
    return solution, None


def in_span(columns: Sequence[dict], rhs: dict, p: int) -> bool:
    coeffs, _ = solve(columns, rhs, p)
    return coeffs is not None


def nullspace(columns: Sequence[dict], p: int) -> list[list[int]]:
    """Basis of {c : sum_j c_j * columns[j] = 0}, free variables one-hot."""
    by_key: dict = {}
    for j, col in enumerate(columns):
        for key, v in col.items():
            by_key.setdefault(key, {})[j] = v
    echelon: dict[int, dict] = {}
    for key in sorted(by_key, key=repr):
        coeffs = by_key[key]
        while coeffs:
            pivot = min(coeffs)
            existing = echelon.get(pivot)
            if existing is None:
                inv = pow(coeffs[pivot], -1, p)
                echelon[pivot] = {k: (v * inv) % p for k, v in coeffs.items()}
                break
            _axpy(coeffs, existing, -coeffs[pivot] % p, p)
    basis = []
    pivots = set(echelon)
    for free in range(len(columns)):
        if free in pivots:
            continue
        vec = [0] * len(columns)
        vec[free] = 1
        # back-substitute pivot coordinates against the free column
        for pivot in sorted(echelon, reverse=True):
            row = echelon[pivot]
            acc = 0
            for j, c in row.items():
                if j != pivot:
                    acc = (acc + c * vec[j]) % p
            vec[pivot] = (-acc) % p
        basis.append(vec)
    return basis
