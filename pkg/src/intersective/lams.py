"""The four positive-exponential-sum constants as linear programs over
symmetrized (orbit-constant) functions, dual-witness extraction, and the
full six-quantity report with its inequality chain.

A standard set is a union of {x,-x} classes, so each constant is an LP over
one variable per class:

    minimize  a(0)
    s.t.      sum_o w_o a_o >= 1          (fhat at the principal character)
              sum_o K[r,o] a_o >= 0       (one row per character class)
              sign constraints on a_o     (the S-class of the variant)

The dual vector of that LP *is* the spectrum of the complementary witness g
(up to splitting each dual weight across its character class), which turns
every solve into a two-sided certificate.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from . import simplex
from .delta import ExtremalWitness, delta_bar, delta_cap
from .fourier import (
    OrbitStructure,
    RealFunctionOnGroup,
    fourier_transform,
    orbit_structure,
    resolve_mode,
)
from .groups import AbelianGroup, StandardSet, standard_complement
from .simplex import FREE, NONNEG, NONPOS, LinearProgram, LPRow, solve_lp

VARIANTS = ("lambda", "lambda_minus", "lambda_plus", "lambda_pm")

DUAL_VARIANT = {
    "lambda": "lambda",
    "lambda_minus": "lambda_plus",
    "lambda_plus": "lambda_minus",
    "lambda_pm": "lambda_pm",
}

PRETTY = {
    "lambda": "lambda",
    "lambda_minus": "lambda-",
    "lambda_plus": "lambda+",
    "lambda_pm": "lambda+-",
}

#: feasibility slack accepted when re-verifying float-mode witnesses
FLOAT_CLASS_TOL = 1e-7


class ChainViolation(RuntimeError):
    """The proven inequality chain failed beyond tolerance: a solver bug."""


@dataclass
class LevelSolution:
    """A lambda LP solved over an abstract symmetric level structure."""

    variant: str
    kind: str  # 'fraction' | 'float'
    value: object
    primal_levels: np.ndarray  # per level, excluded levels are 0
    dual_levels: np.ndarray  # the witness g, per level
    dual_row_values: np.ndarray  # ghat per character class (principal first)
    certified: bool
    pivots: int


def _class_signs(variant: str, member: np.ndarray) -> tuple[np.ndarray, list]:
    """Included column mask and simplex sign tags for one variant."""
    if variant in ("lambda", "lambda_plus"):
        include = member.copy()
    elif variant in ("lambda_minus", "lambda_pm"):
        include = np.ones(len(member), dtype=bool)
    else:
        raise ValueError(f"unknown variant {variant!r}")
    signs = []
    for c in np.nonzero(include)[0]:
        if member[c]:
            signs.append(NONNEG if variant in ("lambda_plus", "lambda_pm") else FREE)
        else:
            signs.append(NONPOS)
    return include, signs


def solve_level_lambda(
    K: np.ndarray,
    col_sizes: np.ndarray,
    row_sizes: np.ndarray,
    member: np.ndarray,
    variant: str,
    kind: str,
) -> LevelSolution:
    """K row 0 must be the principal row (so K[0] = col_sizes) and column 0
    the class of 0; `member` marks the columns lying inside the set."""
    if not member[0]:
        raise ValueError("the class of 0 must belong to the set")
    include, signs = _class_signs(variant, member)
    cols = np.nonzero(include)[0]
    nrows = K.shape[0]

    rows = [LPRow(coeffs=K[0, cols], rel=">=", rhs=1)]
    for r in range(1, nrows):
        rows.append(LPRow(coeffs=K[r, cols], rel=">=", rhs=0))
    objective = [0] * len(cols)
    objective[0] = 1  # column 0 survives inclusion for every variant
    prog = LinearProgram(objective=objective, rows=rows, var_signs=signs, kind=kind)
    # the zero-rhs spectrum rows make these LPs massively degenerate; a tiny
    # deterministic relaxation keeps the float lane off the stall plateaus
    sol = solve_lp(prog, perturb=0.0 if kind == "fraction" else 1e-9)
    if sol.status != "optimal":  # delta_0 is always feasible
        raise simplex.SimplexError(f"lambda LP unexpectedly {sol.status}")

    zero = Fraction(0) if kind == "fraction" else 0.0
    full = np.array([zero] * len(member), dtype=object if kind == "fraction" else np.float64)
    full[cols] = sol.x
    u = sol.duals[0]
    v = sol.duals[1:]
    q = int(col_sizes.sum())
    qg = u + K[1:].T.dot(v) / col_sizes
    g_levels = qg / q
    ghat = np.concatenate(([u], v / row_sizes[1:]))

    return LevelSolution(
        variant=variant,
        kind=kind,
        value=sol.objective_value,
        primal_levels=full,
        dual_levels=g_levels,
        dual_row_values=ghat,
        certified=sol.certified,
        pivots=sol.pivots,
    )


def check_level_solution(
    ls: LevelSolution,
    K: np.ndarray,
    col_sizes: np.ndarray,
    member: np.ndarray,
    tol: float,
) -> float:
    """Re-verify both witnesses from scratch; returns the worst violation.

    Primal: class membership, spectrum >= 0, normalized principal value,
    value attained at 0.  Dual: nonnegative spectrum, ghat(1) = value, dual
    class membership, and the complement certificate q*value*g(0) <= value.
    """
    worst = 0.0

    def bad(x):
        nonlocal worst
        worst = max(worst, float(x))

    a = ls.primal_levels
    spectrum = K.dot(a)
    bad(abs(spectrum[0] - 1))
    for s in spectrum[1:]:
        bad(max(-s, 0))
    bad(abs(a[0] - ls.value))
    bad(_class_violation(a, member, ls.variant))

    for h in ls.dual_row_values:
        bad(max(-h, 0))
    bad(abs(ls.dual_row_values[0] - ls.value))
    g = ls.dual_levels
    q = int(col_sizes.sum())
    bad(max(q * g[0] - 1, 0))  # certificate: dual ratio at most 1/(q value)
    bad(_class_violation_dual(g, member, ls.variant))
    if worst > tol:
        raise ChainViolation(f"witness verification failed by {worst}")
    return worst


def _class_violation(values: np.ndarray, member: np.ndarray, variant: str) -> float:
    worst = 0.0
    for c in range(len(member)):
        v = float(values[c])
        if member[c]:
            if variant in ("lambda_plus", "lambda_pm"):
                worst = max(worst, -v)
        else:
            if variant in ("lambda", "lambda_plus"):
                worst = max(worst, abs(v))
            else:
                worst = max(worst, v)
    return worst


def _class_violation_dual(g: np.ndarray, member: np.ndarray, variant: str) -> float:
    """g must lie in the S-class of the standard complement (dual variant)."""
    worst = 0.0
    for c in range(1, len(member)):
        v = float(g[c])
        if member[c]:  # outside the complement (minus 0)
            if variant == "lambda":
                worst = max(worst, abs(v))
            elif variant == "lambda_minus":
                worst = max(worst, abs(v))
            else:  # lambda_plus, lambda_pm: g <= 0 there
                worst = max(worst, v)
        else:  # inside the complement
            if variant in ("lambda_minus", "lambda_pm"):
                worst = max(worst, -v)
    return worst


# ---------------------------------------------------------------------------
# group-level API


@dataclass
class LambdaResult:
    variant: str
    value: object
    mode: str
    primal: RealFunctionOnGroup
    dual: RealFunctionOnGroup
    set: StandardSet
    certified: bool
    pivots: int = 0


def lambda_constant(A: StandardSet, variant: str, mode: str = "auto") -> LambdaResult:
    group = A.group
    resolved = resolve_mode(group, mode)
    kind = "fraction" if resolved == "exact" else "float"
    struct = orbit_structure(group, resolved)
    member = A.membership[struct.col_reps]
    ls = solve_level_lambda(struct.K, struct.col_sizes, struct.row_sizes, member, variant, kind)
    tol = 0.0 if resolved == "exact" else FLOAT_CLASS_TOL
    check_level_solution(ls, struct.K, struct.col_sizes, member, tol)
    primal = RealFunctionOnGroup(group, ls.primal_levels[struct.col_of])
    dual = RealFunctionOnGroup(group, ls.dual_levels[struct.col_of])
    return LambdaResult(
        variant=variant,
        value=ls.value,
        mode=resolved,
        primal=primal,
        dual=dual,
        set=A,
        certified=ls.certified,
        pivots=ls.pivots,
    )


def dual_witness(result: LambdaResult, A: StandardSet) -> RealFunctionOnGroup:
    """The complementary witness g with ghat >= 0, ghat(1) = value, lying in
    the dual S-class of the standard complement; certifies
    dual_variant(A') <= 1 / (q * value)."""
    if not result.certified:
        raise simplex.SimplexError("dual values unavailable: solve was not certified")
    g = result.dual
    group = A.group
    tol = 0.0 if result.mode == "exact" else FLOAT_CLASS_TOL
    spec = fourier_transform(g)
    viol = 0.0
    for s in spec.values:
        viol = max(viol, -float(s if result.mode == "exact" else s.real))
    viol = max(viol, abs(float(spec.values[0] - result.value)))
    Aprime = standard_complement(A)
    viol = max(
        viol,
        _class_violation(
            np.array([g.values[i] for i in range(group.q)]),
            Aprime.membership,
            DUAL_VARIANT[result.variant],
        ),
    )
    # feasible-point certificate for the complement
    viol = max(viol, float(group.q) * float(g.values[0]) * float(result.value) - float(result.value) * (1 + 1e-12))
    if viol > tol:
        raise ChainViolation(f"dual witness failed verification by {viol}")
    return g


@dataclass
class QuantityReport:
    group: AbelianGroup
    set: StandardSet
    mode: str
    tolerance: float
    Delta: int
    Delta_bar: int
    delta: Fraction
    delta_bar: Fraction
    lam: dict
    witness_avoiding: ExtremalWitness
    witness_contained: ExtremalWitness
    lambda_results: Optional[dict]
    chain: list
    chain_ok: bool
    elapsed: float


#: the proven chain, left to right
CHAIN_ORDER = ("1/q", "delta", "lambda_minus", "min(lambda,lambda_pm)",
               "max(lambda,lambda_pm)", "lambda_plus", "delta_bar", "1")


def all_quantities(
    A: StandardSet,
    mode: str = "auto",
    keep_witnesses: bool = True,
    force: bool = False,
) -> QuantityReport:
    t0 = time.perf_counter()
    group = A.group
    resolved = resolve_mode(group, mode)
    tol = 0.0 if resolved == "exact" else 1e-9

    Dcap, w_avoid = delta_cap(A, force=force)
    Dbar, w_cont = delta_bar(A, force=force)
    delta = Fraction(Dcap, group.q)
    delta_bar_v = Fraction(1, Dbar)

    results = {v: lambda_constant(A, v, mode=resolved) for v in VARIANTS}
    lam = {v: r.value for v, r in results.items()}

    lo = min(lam["lambda"], lam["lambda_pm"])
    hi = max(lam["lambda"], lam["lambda_pm"])
    chain = [
        ("1/q", Fraction(1, group.q)),
        ("delta", delta),
        ("lambda_minus", lam["lambda_minus"]),
        ("min(lambda,lambda_pm)", lo),
        ("max(lambda,lambda_pm)", hi),
        ("lambda_plus", lam["lambda_plus"]),
        ("delta_bar", delta_bar_v),
        ("1", Fraction(1)),
    ]
    ok = True
    for (n1, v1), (n2, v2) in zip(chain, chain[1:]):
        if float(v1) > float(v2) + tol:
            ok = False
            raise ChainViolation(
                f"{n1} = {v1} exceeds {n2} = {v2} beyond tolerance {tol}"
            )

    return QuantityReport(
        group=group,
        set=A,
        mode=resolved,
        tolerance=tol,
        Delta=Dcap,
        Delta_bar=Dbar,
        delta=delta,
        delta_bar=delta_bar_v,
        lam=lam,
        witness_avoiding=w_avoid,
        witness_contained=w_cont,
        lambda_results=results if keep_witnesses else None,
        chain=chain,
        chain_ok=ok,
        elapsed=time.perf_counter() - t0,
    )
