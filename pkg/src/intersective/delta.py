"""Exact intersectivity numbers via branch-and-bound max clique on Cayley
graphs, plus the constructive selection algorithms used by the random-set
experiments.

Both numbers reduce to one solver:  Delta-bar(A) is the clique number of
Cay(G, A \\ {0}) and Delta(A) is the clique number of the complement
connection.  Vertex transitivity lets the search fix 0 in the clique, so
only the neighbourhood of 0 is ever branched on.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np

from .groups import (
    AbelianGroup,
    GroupError,
    StandardSet,
    _as_index,
    orbit_reps,
    standard_complement,
)

#: above this order the exact solver requires an explicit override
EXACT_DELTA_LIMIT = 4096


@dataclass
class CayleyGraph:
    """Cay(G, S) for a symmetric loopless connection set S."""

    group: AbelianGroup
    connection: np.ndarray  # boolean over element positions, [0] False

    def __post_init__(self):
        conn = np.asarray(self.connection, dtype=bool).copy()
        if conn[0]:
            raise GroupError("connection set must not contain 0 (loopless)")
        neg = self.group.neg_table()
        if not np.array_equal(conn, conn[neg]):
            raise GroupError("connection set must be symmetric")
        conn.setflags(write=False)
        self.connection = conn

    @property
    def degree(self) -> int:
        return int(self.connection.sum())

    def adjacent(self, i: int, j: int) -> bool:
        neg = self.group.neg_table()
        return bool(self.connection[self.group.add(i, int(neg[j]))])


@dataclass
class ExtremalWitness:
    kind: str  # 'avoiding' | 'contained'
    indices: tuple
    elements: list
    size: int


def _verify_witness(A: StandardSet, indices: Sequence[int], kind: str) -> None:
    group = A.group
    neg = group.neg_table()
    for i in indices:
        for j in indices:
            d = group.add(int(i), int(neg[int(j)]))
            inside = bool(A.membership[d])
            if kind == "contained" and not inside:
                raise GroupError("witness fails B - B within A")
            if kind == "avoiding" and inside and d != 0:
                raise GroupError("witness fails (B - B) meets A only at 0")


def _bits(mask: np.ndarray) -> int:
    return int.from_bytes(np.packbits(mask, bitorder="little").tobytes(), "little")


def max_clique_bits(adj: list, n: int, lower: int = 0) -> tuple[int, list]:
    """Exact maximum clique; adj[v] is an int bitmask of neighbours.

    `lower` is a known-feasible clique size used purely as an initial bound;
    the returned members are empty if nothing above `lower` exists.
    """
    if n == 0:
        return 0, []
    order = sorted(range(n), key=lambda v: adj[v].bit_count(), reverse=True)
    relabel = {v: i for i, v in enumerate(order)}
    radj = [0] * n
    for v in range(n):
        nb = adj[v]
        rb = 0
        while nb:
            low = nb & -nb
            rb |= 1 << relabel[low.bit_length() - 1]
            nb ^= low
        radj[relabel[v]] = rb

    best = lower
    best_members: list[int] = []

    # greedy warm start for a decent incumbent
    P = (1 << n) - 1
    greedy = []
    while P:
        v = (P & -P).bit_length() - 1
        greedy.append(v)
        P &= radj[v]
    if len(greedy) > best:
        best = len(greedy)
        best_members = greedy[:]

    stack: list[int] = []

    def expand(P: int) -> None:
        nonlocal best, best_members
        # greedy colouring: colour c bounds any clique inside its prefix
        order_v, colors = [], []
        Q = P
        c = 0
        while Q:
            c += 1
            Qc = Q
            while Qc:
                low = Qc & -Qc
                v = low.bit_length() - 1
                Q &= ~low
                Qc &= ~low
                Qc &= ~radj[v]
                order_v.append(v)
                colors.append(c)
        local = P
        for idx in range(len(order_v) - 1, -1, -1):
            if len(stack) + colors[idx] <= best:
                return
            v = order_v[idx]
            stack.append(v)
            nxt = local & radj[v]
            if nxt:
                expand(nxt)
            elif len(stack) > best:
                best = len(stack)
                best_members = stack[:]
            stack.pop()
            local &= ~(1 << v)

    import sys

    old_limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old_limit, n + 1000))
    try:
        expand((1 << n) - 1)
    finally:
        sys.setrecursionlimit(old_limit)
    return best, sorted(order[v] for v in best_members)


def _cayley_clique_with_zero(
    group: AbelianGroup,
    connection: np.ndarray,
    seed: Optional[Sequence[int]] = None,
    force: bool = False,
) -> tuple[int, list[int]]:
    """Max clique of Cay(G, connection); translation-invariance pins 0."""
    if group.q > EXACT_DELTA_LIMIT and not force:
        raise GroupError(
            f"exact solver guarded at q <= {EXACT_DELTA_LIMIT}; pass force to override"
        )
    cands = np.nonzero(connection)[0]
    nc = len(cands)
    pos = {int(v): k for k, v in enumerate(cands)}
    adj = [0] * nc
    for k, v in enumerate(cands):
        diffs = group.sub_row(int(v))[cands]
        mask = connection[diffs]
        mask[k] = False
        adj[k] = _bits(mask)
    lower = 0
    seed_members: list[int] = []
    if seed:
        seed_idx = sorted({int(_as_index(group, s)) for s in seed})
        if 0 not in seed_idx:
            raise GroupError("seed clique must contain 0")
        rest = [i for i in seed_idx if i != 0]
        if any(i not in pos for i in rest):
            raise GroupError("seed clique leaves the candidate set")
        for a in rest:
            for b in rest:
                if a != b and not (adj[pos[a]] >> pos[b]) & 1:
                    raise GroupError("seed clique is not a clique")
        lower = len(rest)
        seed_members = rest
    size, members = max_clique_bits(adj, nc, lower=lower)
    chosen = [int(cands[k]) for k in members] if size > lower or not seed_members else seed_members
    return size + 1, [0] + sorted(chosen)


def delta_bar(A: StandardSet, seed=None, force: bool = False) -> tuple[int, ExtremalWitness]:
    """Largest |B| with B - B inside A (exact)."""
    conn = A.membership.copy()
    conn[0] = False
    size, members = _cayley_clique_with_zero(A.group, conn, seed=seed, force=force)
    _verify_witness(A, members, "contained")
    witness = ExtremalWitness(
        kind="contained",
        indices=tuple(members),
        elements=[A.group.element(i) for i in members],
        size=size,
    )
    return size, witness


def delta_cap(A: StandardSet, seed=None, force: bool = False) -> tuple[int, ExtremalWitness]:
    """Largest |B| with (B - B) meeting A only at 0 (exact)."""
    conn = ~A.membership  # complement connection: A' \ {0}
    conn = conn.copy()
    conn[0] = False
    size, members = _cayley_clique_with_zero(A.group, conn, seed=seed, force=force)
    _verify_witness(A, members, "avoiding")
    witness = ExtremalWitness(
        kind="avoiding",
        indices=tuple(members),
        elements=[A.group.element(i) for i in members],
        size=size,
    )
    return size, witness


def little_delta(A: StandardSet) -> Fraction:
    return Fraction(delta_cap(A)[0], A.group.q)


def little_delta_bar(A: StandardSet) -> Fraction:
    return Fraction(1, delta_bar(A)[0])


# ---------------------------------------------------------------------------
# constructive selection / detection


def semisidon_select(group: AbelianGroup, points: Iterable, k: int) -> list:
    """Greedy k-subset whose difference set is provably large.

    Grows B one element at a time, always adding the candidate a minimizing
    the number of ordered solutions of a - b_i = b_u - b_v over B^3 (ties by
    element order).  The returned B of size k satisfies
    |B-B| >= 1 + (k(k-1)/2) (1 - k(k-1)/(2m)),  m = |A|.
    """
    idx = sorted({_as_index(group, p) for p in points})
    m = len(idx)
    if not 1 <= k or k * k > m:
        raise GroupError(f"need 1 <= k <= sqrt(|A|); got k={k}, |A|={m}")
    neg = group.neg_table()
    chosen = [idx[0]]
    remaining = idx[1:]
    while len(chosen) < k:
        pair_count: dict[int, int] = {}
        for u in chosen:
            for v in chosen:
                d = group.add(u, int(neg[v]))
                pair_count[d] = pair_count.get(d, 0) + 1
        best_a, best_z = None, None
        for a in remaining:
            z = 0
            for b in chosen:
                z += pair_count.get(group.add(a, int(neg[b])), 0)
            if best_z is None or z < best_z:
                best_a, best_z = a, z
        chosen.append(best_a)
        chosen.sort()
        remaining = [a for a in remaining if a != best_a]
    diffs = set()
    for u in chosen:
        for v in chosen:
            diffs.add(group.add(u, int(neg[v])))
    kk = Fraction(k * (k - 1), 2)
    bound = 1 + kk * (1 - kk / m)
    if len(diffs) < bound:
        raise GroupError("selection fell below the guaranteed difference-set size")
    return [group.element(i) for i in chosen]


def effective_cardinality(A: StandardSet) -> int:
    """|A n (G1 u G2)| - 1: the independent Bernoulli choices pinning A."""
    reps = orbit_reps(A.group)
    return int(A.membership[np.array(reps, dtype=np.int64)].sum()) - 1


def has_three_term_zero_sum(R: StandardSet) -> bool:
    """True iff a + b + c = 0 has a solution with a, b, c in R \\ {0}."""
    group = R.group
    neg = group.neg_table()
    members = [int(i) for i in R.indices() if i != 0]
    mem = R.membership
    for a in members:
        for b in members:
            c = int(neg[group.add(a, b)])
            if c != 0 and mem[c]:
                return True
    return False
