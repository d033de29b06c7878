"""Characters and Fourier analysis on finite abelian groups.

Transforms follow the convention  fhat(gamma) = sum_x gamma(x) f(x)  (no
conjugation).  Two scalar lanes exist: float (double precision, any group)
and exact (Fractions; requires group exponent in {1,2,3,4,6}, where every
orbit-aggregated character value 2cos(2 pi k / E) is rational).  Exact-lane
transforms are defined for symmetric functions, which is the only place the
exact lane is needed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .groups import (
    AbelianGroup,
    GroupError,
    GroupSpec,
    QuotientGroup,
    StandardSet,
    Subgroup,
)

# 2cos(2 pi p / E) for the rational exponents
_TWO_COS = {
    1: {0: 2},
    2: {0: 2, 1: -2},
    3: {0: 2, 1: -1, 2: -1},
    4: {0: 2, 1: 0, 2: -2, 3: 0},
    6: {0: 2, 1: 1, 2: -1, 3: -2, 4: -1, 5: 1},
}


class ModeError(ValueError):
    """Exact mode requested where it is not available."""


def resolve_mode(group: AbelianGroup, mode: str = "auto", exact_q_limit: int = 128) -> str:
    """Pick the scalar lane.  "auto" prefers exact when the exponent allows it
    and the group is small enough for rational pivoting to stay pleasant."""
    if mode == "float":
        return "float"
    if mode == "exact":
        if not group.exact_capable:
            raise ModeError(
                f"exact mode needs exponent in {{1,2,3,4,6}}, group has exponent {group.exponent}"
            )
        return "exact"
    if mode == "auto":
        return "exact" if (group.exact_capable and group.q <= exact_q_limit) else "float"
    raise ValueError(f"unknown mode {mode!r}")


@dataclass
class RealFunctionOnGroup:
    """A real function on a group; values indexed by element position."""

    group: AbelianGroup
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values)
        if v.dtype == object:
            v = np.array([Fraction(x) for x in v.tolist()], dtype=object)
        else:
            v = v.astype(np.float64)
        if v.shape != (self.group.q,):
            raise GroupError(f"value table has shape {v.shape}, expected ({self.group.q},)")
        self.values = v

    @property
    def kind(self) -> str:
        return "exact" if self.values.dtype == object else "float"

    def at(self, elem) -> object:
        from .groups import _as_index

        return self.values[_as_index(self.group, elem)]

    def is_symmetric(self, tol: float = 0.0) -> bool:
        neg = self.group.neg_table()
        if self.kind == "exact":
            return all(a == b for a, b in zip(self.values, self.values[neg]))
        return bool(np.max(np.abs(self.values - self.values[neg]), initial=0.0) <= tol)


@dataclass
class Spectrum:
    """Fourier coefficients, indexed by the group's canonical character order
    (for a GroupSpec that order is the element order itself)."""

    group: AbelianGroup
    values: np.ndarray

    @property
    def kind(self) -> str:
        return "exact" if self.values.dtype == object else "float"


def exact_function(group: AbelianGroup, values) -> RealFunctionOnGroup:
    return RealFunctionOnGroup(
        group, np.array([Fraction(v) for v in values], dtype=object)
    )


def character_value(group: AbelianGroup, y: int, x: int) -> complex:
    E, P, _ = group.character_phases()
    return complex(np.exp(2j * np.pi * int(P[y, x]) / E))


def character_matrix(group: AbelianGroup) -> np.ndarray:
    """Complex character table, row y = character y (cached)."""
    key = "char_matrix"
    if key not in group._cache:
        E, P, _ = group.character_phases()
        roots = np.exp(2j * np.pi * np.arange(E) / E)
        group._cache[key] = roots[P]
    return group._cache[key]


# ---------------------------------------------------------------------------
# orbit structure: the {x,-x} classes and orbit-aggregated character sums


@dataclass
class OrbitStructure:
    """Everything the symmetric (orbit-variable) machinery needs.

    Rows are character {gamma, conj gamma} classes, columns are element
    {x, -x} classes; K[r, c] = sum over the column class of the value of the
    row's representative character.  Row 0 is the principal class, column 0
    is {0}; so K[0] is the vector of column sizes.
    """

    group: AbelianGroup
    mode: str
    col_reps: np.ndarray
    col_sizes: np.ndarray
    col_of: np.ndarray  # element position -> column
    row_reps: np.ndarray
    row_sizes: np.ndarray
    row_of: np.ndarray  # character position -> row
    K: np.ndarray

    @property
    def n(self) -> int:
        return len(self.col_reps)


def orbit_structure(group: AbelianGroup, mode: str) -> OrbitStructure:
    key = ("orbit_structure", mode)
    if key in group._cache:
        return group._cache[key]
    if mode == "exact" and not group.exact_capable:
        raise ModeError(f"group exponent {group.exponent} has no exact lane")
    E, P, conj = group.character_phases()
    neg = group.neg_table()
    q = group.q

    col_reps = np.array([i for i in range(q) if i <= neg[i]], dtype=np.int64)
    col_sizes = np.where(neg[col_reps] == col_reps, 1, 2).astype(np.int64)
    col_of = np.zeros(q, dtype=np.int64)
    for c, r in enumerate(col_reps):
        col_of[r] = c
        col_of[neg[r]] = c

    row_reps = np.array([j for j in range(q) if j <= conj[j]], dtype=np.int64)
    row_sizes = np.where(conj[row_reps] == row_reps, 1, 2).astype(np.int64)
    row_of = np.zeros(q, dtype=np.int64)
    for r, j in enumerate(row_reps):
        row_of[j] = r
        row_of[conj[j]] = r
    if len(row_reps) != len(col_reps):
        raise GroupError("character and element orbit counts disagree")

    phases = P[np.ix_(row_reps, col_reps)]
    if mode == "exact":
        pair_lut = np.array(
            [Fraction(_TWO_COS[E][p]) for p in range(E)], dtype=object
        )
        single_lut = np.array(
            [Fraction(1) if p == 0 else Fraction(-1) if 2 * p == E else None for p in range(E)],
            dtype=object,
        )
        K = np.where(col_sizes == 1, single_lut[phases], pair_lut[phases])
    else:
        pair_lut = 2.0 * np.cos(2.0 * np.pi * np.arange(E) / E)
        single_lut = np.cos(2.0 * np.pi * np.arange(E) / E)
        K = np.where(col_sizes == 1, single_lut[phases], pair_lut[phases])
    K.setflags(write=False)
    struct = OrbitStructure(
        group, mode, col_reps, col_sizes, col_of, row_reps, row_sizes, row_of, K
    )
    group._cache[key] = struct
    return struct


def orbit_values(f: RealFunctionOnGroup, struct: OrbitStructure) -> np.ndarray:
    """Per-orbit values of a symmetric function."""
    if not f.is_symmetric(0.0 if f.kind == "exact" else 1e-12):
        raise GroupError("function is not symmetric")
    return f.values[struct.col_reps]


def expand_orbit_values(struct: OrbitStructure, per_orbit: np.ndarray) -> np.ndarray:
    return np.asarray(per_orbit)[struct.col_of]


# ---------------------------------------------------------------------------
# transforms


def fourier_transform(f: RealFunctionOnGroup) -> Spectrum:
    group = f.group
    if f.kind == "exact":
        struct = orbit_structure(group, "exact")
        a = orbit_values(f, struct)
        per_row = struct.K @ a
        return Spectrum(group, per_row[struct.row_of])
    M = character_matrix(group)
    values = M @ f.values
    if f.is_symmetric(1e-12):
        # symmetric input has a real spectrum; drop the numerical dust
        cutoff = 1e-12 * float(np.sum(np.abs(f.values)))
        im = np.abs(values.imag)
        if np.max(im, initial=0.0) <= cutoff:
            values = values.real.astype(np.float64)
    return Spectrum(group, values)


def inverse_transform(F: Spectrum) -> RealFunctionOnGroup:
    group = F.group
    if F.kind == "exact":
        struct = orbit_structure(group, "exact")
        _, _, conj = group.character_phases()
        if any(F.values[j] != F.values[conj[j]] for j in range(group.q)):
            raise GroupError("exact inversion needs a conjugation-symmetric spectrum")
        v = F.values[struct.row_reps]
        per_col = (v * struct.row_sizes) @ struct.K / struct.col_sizes / group.q
        return RealFunctionOnGroup(group, per_col[struct.col_of])
    M = character_matrix(group)
    values = (M.conj().T @ F.values) / group.q
    if np.iscomplexobj(values):
        if np.max(np.abs(values.imag), initial=0.0) <= 1e-10 * max(
            1.0, float(np.max(np.abs(values.real), initial=0.0))
        ):
            values = values.real
        else:
            raise GroupError("inverse transform produced a non-real function")
    return RealFunctionOnGroup(group, values.astype(np.float64))


def symmetrize(f: RealFunctionOnGroup) -> RealFunctionOnGroup:
    """(f(x) + f(-x)) / 2; fixes symmetric functions, keeps f(0) and fhat(1)."""
    neg = f.group.neg_table()
    if f.kind == "exact":
        half = Fraction(1, 2)
        return RealFunctionOnGroup(f.group, (f.values + f.values[neg]) * half)
    return RealFunctionOnGroup(f.group, (f.values + f.values[neg]) / 2.0)


def indicator(A: StandardSet, kind: str = "float") -> RealFunctionOnGroup:
    if kind == "exact":
        return exact_function(A.group, [1 if m else 0 for m in A.membership])
    return RealFunctionOnGroup(A.group, A.membership.astype(np.float64))


def delta_at_zero(group: AbelianGroup, kind: str = "float") -> RealFunctionOnGroup:
    v = [0] * group.q
    v[0] = 1
    if kind == "exact":
        return exact_function(group, v)
    return RealFunctionOnGroup(group, np.array(v, dtype=np.float64))


# ---------------------------------------------------------------------------
# subgroup calculus: factorization, lifting, restriction, extension


def factor_function(f: RealFunctionOnGroup, H: Subgroup) -> RealFunctionOnGroup:
    """Coset sums: the pushforward of f to G/H."""
    if H.parent != f.group:
        raise GroupError("subgroup belongs to a different group")
    Q = QuotientGroup(f.group, H)
    table = Q.coset_table()
    zero = Fraction(0) if f.kind == "exact" else 0.0
    out = np.array([zero] * Q.q, dtype=f.values.dtype)
    for i, c in enumerate(table):
        out[c] = out[c] + f.values[i]
    return RealFunctionOnGroup(Q, out)


def lift_function(g: RealFunctionOnGroup, H: Subgroup) -> RealFunctionOnGroup:
    """g^(xH): the coset-constant lift of a function on G/H back to G."""
    Q = g.group
    if not isinstance(Q, QuotientGroup) or Q.subgroup != H:
        raise GroupError("function is not defined on the matching quotient")
    return RealFunctionOnGroup(Q.parent, g.values[Q.coset_table()])


def restrict_function(f: RealFunctionOnGroup, H: Subgroup) -> RealFunctionOnGroup:
    if H.parent != f.group:
        raise GroupError("subgroup belongs to a different group")
    return RealFunctionOnGroup(H, f.values[np.array(H.members, dtype=np.int64)])


def extend_function(g: RealFunctionOnGroup, G: GroupSpec) -> RealFunctionOnGroup:
    H = g.group
    if not isinstance(H, Subgroup) or H.parent != G:
        raise GroupError("extension target must be the subgroup's parent")
    zero = Fraction(0) if g.kind == "exact" else 0.0
    out = np.array([zero] * G.q, dtype=g.values.dtype)
    for pos, i in enumerate(H.members):
        out[i] = g.values[pos]
    return RealFunctionOnGroup(G, out)
