"""Finite abelian groups (products of cyclic factors), subgroups, quotients,
and the standard-set algebra.

Elements are residue vectors; internally everything is indexed by the
lexicographic rank of the residue vector, so tables and spectra line up
bit-exactly across runs.
"""

from __future__ import annotations

import math
from functools import reduce
from itertools import combinations
from typing import Iterable, Sequence, Union

import numpy as np

Element = tuple  # residue vector, one entry per cyclic factor

#: group exponents for which all orbit-aggregated character values are rational
EXACT_EXPONENTS = frozenset({1, 2, 3, 4, 6})

#: hard cap on materializing a full q x q character table
CHAR_TABLE_LIMIT = 4096


class GroupError(ValueError):
    """Malformed group, subgroup, homomorphism or set construction."""


def _lcm(values: Iterable[int]) -> int:
    return reduce(math.lcm, values, 1)


class AbelianGroup:
    """Common interface: elements are positions 0..q-1, position 0 is zero.

    Concrete classes fill in `q`, `exponent`, `element`, `add`, `neg` and the
    integer character-phase table.  Characters are E-th roots of unity with
    E = exponent; `character_phases` returns (E, P, conj) where P[j, i] is the
    phase of character j at element i and conj[j] is the row of the conjugate
    character.
    """

    q: int
    exponent: int

    def __init__(self) -> None:
        self._cache: dict = {}

    # -- structure ---------------------------------------------------------

    def element(self, i: int) -> Element:
        raise NotImplementedError

    def index(self, elem: Element) -> int:
        raise NotImplementedError

    def add(self, i: int, j: int) -> int:
        raise NotImplementedError

    def neg(self, i: int) -> int:
        raise NotImplementedError

    def neg_table(self) -> np.ndarray:
        key = "neg_table"
        if key not in self._cache:
            t = np.array([self.neg(i) for i in range(self.q)], dtype=np.int64)
            t.setflags(write=False)
            self._cache[key] = t
        return self._cache[key]

    def sub_row(self, i: int) -> np.ndarray:
        """Indices of i - j for all j, as an array over j."""
        neg = self.neg_table()
        return np.array([self.add(i, neg[j]) for j in range(self.q)], dtype=np.int64)

    def order_of(self, i: int) -> int:
        k, cur = 1, i
        while cur != 0:
            cur = self.add(cur, i)
            k += 1
        return k

    def character_phases(self):
        raise NotImplementedError

    @property
    def exact_capable(self) -> bool:
        return self.exponent in EXACT_EXPONENTS

    def elements(self) -> list[Element]:
        return [self.element(i) for i in range(self.q)]

    def describe(self) -> str:
        raise NotImplementedError

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"<{type(self).__name__} {self.describe()} q={self.q}>"


class GroupSpec(AbelianGroup):
    """Product of cyclic groups Z_{n_1} x ... x Z_{n_d}."""

    def __init__(self, moduli: Sequence[int]):
        super().__init__()
        moduli = tuple(int(n) for n in moduli)
        if not moduli or any(n < 2 for n in moduli):
            raise GroupError(f"moduli must all be >= 2, got {moduli}")
        self.moduli = moduli
        self.q = math.prod(moduli)
        self.exponent = _lcm(moduli)
        # lexicographic rank = mixed-radix value, most significant first
        strides = []
        acc = 1
        for n in reversed(moduli):
            strides.append(acc)
            acc *= n
        self.strides = tuple(reversed(strides))

    def __eq__(self, other) -> bool:
        return isinstance(other, GroupSpec) and self.moduli == other.moduli

    def __hash__(self) -> int:
        return hash(("GroupSpec", self.moduli))

    def residue_matrix(self) -> np.ndarray:
        key = "residues"
        if key not in self._cache:
            cols = []
            for n, s in zip(self.moduli, self.strides):
                cols.append((np.arange(self.q) // s) % n)
            m = np.stack(cols, axis=1).astype(np.int64)
            m.setflags(write=False)
            self._cache[key] = m
        return self._cache[key]

    def element(self, i: int) -> Element:
        if not 0 <= i < self.q:
            raise GroupError(f"element index {i} out of range for q={self.q}")
        return tuple(int(r) for r in self.residue_matrix()[i])

    def index(self, elem) -> int:
        if isinstance(elem, (int, np.integer)):
            elem = (int(elem),)
        if len(elem) != len(self.moduli):
            raise GroupError(
                f"element {elem!r} has {len(elem)} coordinates, group has {len(self.moduli)}"
            )
        return sum(
            (int(x) % n) * s for x, n, s in zip(elem, self.moduli, self.strides)
        )

    def add(self, i: int, j: int) -> int:
        r = self.residue_matrix()
        return int(((r[i] + r[j]) % self.moduli) @ self.strides)

    def neg(self, i: int) -> int:
        r = self.residue_matrix()
        return int(((-r[i]) % self.moduli) @ self.strides)

    def neg_table(self) -> np.ndarray:
        key = "neg_table"
        if key not in self._cache:
            r = self.residue_matrix()
            t = ((-r) % self.moduli) @ self.strides
            t.setflags(write=False)
            self._cache[key] = t
        return self._cache[key]

    def sub_row(self, i: int) -> np.ndarray:
        r = self.residue_matrix()
        return ((r[i] - r) % self.moduli) @ self.strides

    def order_of(self, i: int) -> int:
        return _lcm(
            n // math.gcd(int(x), n) for x, n in zip(self.residue_matrix()[i], self.moduli)
        )

    def scale_table(self, u: int) -> np.ndarray:
        """Index table of x -> u*x."""
        r = self.residue_matrix()
        return ((u * r) % self.moduli) @ self.strides

    def phase_block(self, ys: np.ndarray, xs: np.ndarray) -> np.ndarray:
        """Phases (mod exponent) of characters ys at elements xs."""
        E = self.exponent
        r = self.residue_matrix()
        mult = np.array([E // n for n in self.moduli], dtype=np.int64)
        return ((r[ys] * mult) @ r[xs].T) % E

    def character_phases(self):
        key = "char_phases"
        if key not in self._cache:
            if self.q > CHAR_TABLE_LIMIT:
                raise GroupError(
                    f"full character table needs q <= {CHAR_TABLE_LIMIT}, got q={self.q}"
                )
            idx = np.arange(self.q)
            P = self.phase_block(idx, idx)
            P.setflags(write=False)
            self._cache[key] = (self.exponent, P, self.neg_table())
        return self._cache[key]

    def describe(self) -> str:
        parts = []
        run_n, run_k = None, 0
        for n in self.moduli + (0,):
            if n == run_n:
                run_k += 1
            else:
                if run_n is not None:
                    parts.append(f"Z{run_n}" + (f"^{run_k}" if run_k > 1 else ""))
                run_n, run_k = n, 1
        return "x".join(parts)


def product_group(g1: GroupSpec, g2: GroupSpec) -> GroupSpec:
    return GroupSpec(g1.moduli + g2.moduli)


def _reduce_phases(P: np.ndarray, old_e: int, new_e: int) -> np.ndarray:
    """Rescale phases from modulus old_e to new_e (values must be new_e-th roots)."""
    if new_e == old_e:
        return P
    step = old_e // new_e
    if np.any(P % step):
        raise GroupError("character values are not roots of the claimed order")
    return P // step


class Subgroup(AbelianGroup):
    """A subgroup of a GroupSpec, usable as a group in its own right.

    Positions 0..|H|-1 follow the ascending parent-index order of the
    elements, so position 0 is the zero of the parent.
    """

    def __init__(self, parent: GroupSpec, elements: Iterable):
        super().__init__()
        if not isinstance(parent, GroupSpec):
            raise GroupError("subgroups are taken inside a GroupSpec")
        idx = sorted({_as_index(parent, e) for e in elements})
        if not idx or idx[0] != 0:
            raise GroupError("a subgroup must contain 0")
        members = set(idx)
        for i in idx:
            if parent.neg(i) not in members:
                raise GroupError("subgroup is not closed under negation")
            for j in idx:
                if parent.add(i, j) not in members:
                    raise GroupError("subgroup is not closed under addition")
        if parent.q % len(idx) != 0:
            raise GroupError("subgroup order does not divide the group order")
        self.parent = parent
        self.members = tuple(idx)
        self.q = len(idx)
        self._pos = {p: k for k, p in enumerate(idx)}
        self.exponent = _lcm(parent.order_of(i) for i in idx)

    @classmethod
    def generated(cls, parent: GroupSpec, generators: Iterable) -> "Subgroup":
        gens = [_as_index(parent, g) for g in generators]
        seen = {0}
        frontier = [0]
        while frontier:
            cur = frontier.pop()
            for g in gens:
                nxt = parent.add(cur, g)
                if nxt not in seen:
                    seen.add(nxt)
                    frontier.append(nxt)
        return cls(parent, seen)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Subgroup)
            and self.parent == other.parent
            and self.members == other.members
        )

    def __hash__(self) -> int:
        return hash(("Subgroup", self.parent, self.members))

    def contains_index(self, parent_index: int) -> bool:
        return parent_index in self._pos

    def position(self, parent_index: int) -> int:
        return self._pos[parent_index]

    def element(self, i: int) -> Element:
        return self.parent.element(self.members[i])

    def index(self, elem) -> int:
        return self._pos[_as_index(self.parent, elem)]

    def add(self, i: int, j: int) -> int:
        return self._pos[self.parent.add(self.members[i], self.members[j])]

    def neg(self, i: int) -> int:
        return self._pos[self.parent.neg(self.members[i])]

    def character_phases(self):
        key = "char_phases"
        if key not in self._cache:
            # characters of H are the distinct restrictions of parent characters
            par = self.parent
            ys = np.arange(par.q)
            xs = np.array(self.members, dtype=np.int64)
            block = par.phase_block(ys, xs)
            block = _reduce_phases(block, par.exponent, self.exponent)
            rows = sorted({tuple(int(v) for v in row) for row in block})
            if len(rows) != self.q:
                raise GroupError("restriction produced a wrong number of characters")
            P = np.array(rows, dtype=np.int64)
            pos = {row: k for k, row in enumerate(rows)}
            conj = np.array(
                [pos[tuple(int(v) for v in (-P[k]) % self.exponent)] for k in range(self.q)],
                dtype=np.int64,
            )
            P.setflags(write=False)
            conj.setflags(write=False)
            self._cache[key] = (self.exponent, P, conj)
        return self._cache[key]

    def describe(self) -> str:
        return f"H<{self.parent.describe()}|{self.q}>"


class QuotientGroup(AbelianGroup):
    """G/H on canonical coset representatives (lexicographically minimal).

    Addition is representative-of-sum; characters are the characters of the
    parent that are trivial on H, evaluated at the representatives.
    """

    def __init__(self, parent: GroupSpec, subgroup: Subgroup):
        super().__init__()
        if subgroup.parent != parent:
            raise GroupError("subgroup belongs to a different group")
        self.parent = parent
        self.subgroup = subgroup
        coset_of = np.full(parent.q, -1, dtype=np.int64)
        reps = []
        for i in range(parent.q):
            if coset_of[i] >= 0:
                continue
            rep_pos = len(reps)
            reps.append(i)
            for h in subgroup.members:
                coset_of[parent.add(i, h)] = rep_pos
        self.representatives = tuple(reps)
        self._coset_of = coset_of
        self._coset_of.setflags(write=False)
        self.q = len(reps)
        if self.q * subgroup.q != parent.q:
            raise GroupError("coset enumeration does not partition the group")
        self.exponent = _lcm(self._coset_order(r) for r in reps)

    def _coset_order(self, rep: int) -> int:
        k, cur = 1, rep
        while not self.subgroup.contains_index(cur):
            cur = self.parent.add(cur, rep)
            k += 1
        return k

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, QuotientGroup)
            and self.parent == other.parent
            and self.subgroup == other.subgroup
        )

    def __hash__(self) -> int:
        return hash(("QuotientGroup", self.parent, self.subgroup))

    def coset_of(self, parent_index: int) -> int:
        return int(self._coset_of[parent_index])

    def coset_table(self) -> np.ndarray:
        return self._coset_of

    def element(self, i: int) -> Element:
        return self.parent.element(self.representatives[i])

    def index(self, elem) -> int:
        return self.coset_of(_as_index(self.parent, elem))

    def add(self, i: int, j: int) -> int:
        return self.coset_of(
            self.parent.add(self.representatives[i], self.representatives[j])
        )

    def neg(self, i: int) -> int:
        return self.coset_of(self.parent.neg(self.representatives[i]))

    def annihilator_indices(self) -> np.ndarray:
        """Parent characters trivial on the subgroup."""
        key = "annihilator"
        if key not in self._cache:
            par = self.parent
            ys = np.arange(par.q)
            hs = np.array(self.subgroup.members, dtype=np.int64)
            block = par.phase_block(ys, hs)
            ann = ys[~block.any(axis=1)]
            ann.setflags(write=False)
            self._cache[key] = ann
        return self._cache[key]

    def character_phases(self):
        key = "char_phases"
        if key not in self._cache:
            par = self.parent
            ann = self.annihilator_indices()
            if len(ann) != self.q:
                raise GroupError("annihilator has a wrong number of characters")
            reps = np.array(self.representatives, dtype=np.int64)
            block = par.phase_block(ann, reps)
            block = _reduce_phases(block, par.exponent, self.exponent)
            order = sorted(range(self.q), key=lambda r: tuple(block[r]))
            P = block[order]
            pos = {tuple(int(v) for v in P[k]): k for k in range(self.q)}
            conj = np.array(
                [pos[tuple(int(v) for v in (-P[k]) % self.exponent)] for k in range(self.q)],
                dtype=np.int64,
            )
            P.setflags(write=False)
            conj.setflags(write=False)
            self._cache[key] = (self.exponent, P, conj)
        return self._cache[key]

    def describe(self) -> str:
        return f"{self.parent.describe()}/H{self.subgroup.q}"


def _as_index(group: AbelianGroup, elem) -> int:
    if isinstance(elem, (int, np.integer)) and not isinstance(group, GroupSpec):
        return int(elem)
    if isinstance(group, GroupSpec):
        return group.index(elem)
    return group.index(elem) if isinstance(elem, tuple) else int(elem)


# ---------------------------------------------------------------------------
# standard sets


class StandardSet:
    """A symmetric subset containing 0, over any AbelianGroup."""

    def __init__(self, group: AbelianGroup, membership):
        membership = np.asarray(membership, dtype=bool)
        if membership.shape != (group.q,):
            raise GroupError(
                f"membership table has length {membership.shape}, expected {group.q}"
            )
        if not membership[0]:
            raise GroupError("a standard set must contain 0")
        neg = group.neg_table()
        if not np.array_equal(membership, membership[neg]):
            raise GroupError("a standard set must satisfy A = -A")
        membership = membership.copy()
        membership.setflags(write=False)
        self.group = group
        self.membership = membership
        self.size = int(membership.sum())

    @classmethod
    def from_elements(cls, group: AbelianGroup, elems: Iterable) -> "StandardSet":
        m = np.zeros(group.q, dtype=bool)
        for e in elems:
            m[_as_index(group, e)] = True
        return cls(group, m)

    def indices(self) -> np.ndarray:
        return np.nonzero(self.membership)[0]

    def contains(self, elem) -> bool:
        return bool(self.membership[_as_index(self.group, elem)])

    def elements(self) -> list[Element]:
        return [self.group.element(int(i)) for i in self.indices()]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, StandardSet)
            and self.group == other.group
            and np.array_equal(self.membership, other.membership)
        )

    def __hash__(self) -> int:
        return hash((self.group, self.membership.tobytes()))

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"<StandardSet |A|={self.size} over {self.group.describe()}>"


def full_set(group: AbelianGroup) -> StandardSet:
    return StandardSet(group, np.ones(group.q, dtype=bool))


def zero_set(group: AbelianGroup) -> StandardSet:
    m = np.zeros(group.q, dtype=bool)
    m[0] = True
    return StandardSet(group, m)


def standard_complement(A: StandardSet) -> StandardSet:
    """A' with A u A' = G and A n A' = {0}."""
    m = ~A.membership
    m = m.copy()
    m[0] = True
    return StandardSet(A.group, m)


def set_union(A1: StandardSet, A2: StandardSet) -> StandardSet:
    if A1.group != A2.group:
        raise GroupError("union of sets over different groups")
    return StandardSet(A1.group, A1.membership | A2.membership)


def set_intersection(A1: StandardSet, A2: StandardSet) -> StandardSet:
    if A1.group != A2.group:
        raise GroupError("intersection of sets over different groups")
    return StandardSet(A1.group, A1.membership & A2.membership)


def product_set(A1: StandardSet, A2: StandardSet) -> StandardSet:
    g1, g2 = A1.group, A2.group
    if not isinstance(g1, GroupSpec) or not isinstance(g2, GroupSpec):
        raise GroupError("product sets are built over GroupSpec factors")
    g = product_group(g1, g2)
    m = np.outer(A1.membership, A2.membership).reshape(-1)
    return StandardSet(g, m)


def restrict_to_subgroup(A: StandardSet, H: Subgroup) -> StandardSet:
    if H.parent != A.group:
        raise GroupError("subgroup belongs to a different group")
    m = A.membership[np.array(H.members, dtype=np.int64)]
    return StandardSet(H, m)


def quotient_image(A: StandardSet, H: Subgroup) -> StandardSet:
    if H.parent != A.group:
        raise GroupError("subgroup belongs to a different group")
    Q = QuotientGroup(A.group, H)
    m = np.zeros(Q.q, dtype=bool)
    m[Q.coset_table()[A.indices()]] = True
    return StandardSet(Q, m)


class Homomorphism:
    """Homomorphism between GroupSpecs, given by images of the factor generators."""

    def __init__(self, domain: GroupSpec, codomain: GroupSpec, images: Sequence):
        if len(images) != len(domain.moduli):
            raise GroupError("need one generator image per cyclic factor")
        self.domain = domain
        self.codomain = codomain
        self.images = tuple(_as_index(codomain, im) for im in images)
        for n, g in zip(domain.moduli, self.images):
            cur = 0
            for _ in range(n):
                cur = codomain.add(cur, g)
            if cur != 0:
                raise GroupError("generator image order does not divide the factor order")
        table = np.zeros(domain.q, dtype=np.int64)
        res = domain.residue_matrix()
        for i in range(domain.q):
            acc = 0
            for x, g in zip(res[i], self.images):
                for _ in range(int(x)):
                    acc = codomain.add(acc, g)
            table[i] = acc
        table.setflags(write=False)
        self.table = table

    @property
    def injective(self) -> bool:
        return len(set(self.table.tolist())) == self.domain.q

    def __call__(self, i: int) -> int:
        return int(self.table[i])


def identity_embedding(group: GroupSpec) -> Homomorphism:
    gens = []
    for k in range(len(group.moduli)):
        e = [0] * len(group.moduli)
        e[k] = 1
        gens.append(tuple(e))
    return Homomorphism(group, group, gens)


def embed(A: StandardSet, phi: Homomorphism) -> StandardSet:
    if phi.domain != A.group:
        raise GroupError("homomorphism domain does not match the set's group")
    if not phi.injective:
        raise GroupError("embedding requires an injective homomorphism")
    m = np.zeros(phi.codomain.q, dtype=bool)
    m[phi.table[A.indices()]] = True
    return StandardSet(phi.codomain, m)


def apply_automorphism(A: StandardSet, descriptor) -> StandardSet:
    """Apply ("mul", u) or ("perm", sigma) to a standard set over a GroupSpec."""
    group = A.group
    if not isinstance(group, GroupSpec):
        raise GroupError("automorphisms are applied over a GroupSpec")
    kind = descriptor[0]
    if kind == "mul":
        u = int(descriptor[1]) % group.exponent
        if math.gcd(u, group.exponent) != 1:
            raise GroupError(f"{descriptor[1]} is not a unit modulo the exponent")
        table = group.scale_table(u)
    elif kind == "perm":
        sigma = tuple(int(s) for s in descriptor[1])
        d = len(group.moduli)
        if sorted(sigma) != list(range(d)):
            raise GroupError("permutation descriptor is not a permutation")
        if any(group.moduli[sigma[i]] != group.moduli[i] for i in range(d)):
            raise GroupError("permutation mixes unequal cyclic factors")
        res = group.residue_matrix()
        permuted = res[:, sigma]
        table = permuted @ np.array(group.strides, dtype=np.int64)
    else:
        raise GroupError(f"unknown automorphism kind {kind!r}")
    m = np.zeros(group.q, dtype=bool)
    m[table[A.indices()]] = True
    out = StandardSet(group, m)
    if out.size != A.size:
        raise GroupError("descriptor is not a bijection")
    return out


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def quadratic_residue_set(q: int) -> StandardSet:
    """{0} together with the nonzero quadratic residues of Z_q, q prime = 1 mod 4."""
    if not is_prime(q):
        raise GroupError(f"{q} is not prime")
    if q % 4 != 1:
        raise GroupError(f"q = {q} = 3 (mod 4): -1 is a nonresidue, set would not be symmetric")
    group = GroupSpec((q,))
    m = np.zeros(q, dtype=bool)
    m[0] = True
    for x in range(1, q):
        m[(x * x) % q] = True
    return StandardSet(group, m)


def difference_set(group: AbelianGroup, points: Iterable) -> StandardSet:
    """The set {b1 - b2 : b1, b2 in B} as a StandardSet."""
    idx = [_as_index(group, p) for p in points]
    if not idx:
        raise GroupError("difference set of an empty list")
    neg = group.neg_table()
    m = np.zeros(group.q, dtype=bool)
    for i in idx:
        for j in idx:
            m[group.add(i, int(neg[j]))] = True
    return StandardSet(group, m)


def orbit_reps(group: AbelianGroup) -> list[int]:
    """Representatives of the {x, -x} classes, ascending; 0 first."""
    neg = group.neg_table()
    return [i for i in range(group.q) if i <= neg[i]]


def all_standard_sets(group: AbelianGroup) -> list[StandardSet]:
    """Every standard set of the group (2^(#nonzero orbits) of them)."""
    reps = [r for r in orbit_reps(group) if r != 0]
    neg = group.neg_table()
    out = []
    for size in range(len(reps) + 1):
        for chosen in combinations(reps, size):
            m = np.zeros(group.q, dtype=bool)
            m[0] = True
            for r in chosen:
                m[r] = True
                m[neg[r]] = True
            out.append(StandardSet(group, m))
    return out


def random_standard_set(group: AbelianGroup, rng, density: float = 0.5) -> StandardSet:
    """Uniform orbit-Bernoulli standard set; test/suite helper."""
    neg = group.neg_table()
    m = np.zeros(group.q, dtype=bool)
    m[0] = True
    for r in orbit_reps(group):
        if r != 0 and rng.random() < density:
            m[r] = True
            m[neg[r]] = True
    return StandardSet(group, m)
