"""Exact finite group theory on multiplication tables.

Groups are tables over element indices 0..order-1 with index 0 the
identity (canonical form). Subgroups are immutable bitmasks over element
indices. The subgroup lattice is enumerated from cyclic seeds closed
under pairwise joins, sorted canonically by (size, member tuple), with
conjugacy classes and canonical least representatives.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional, Sequence

import numpy as np

from . import _kernels
from .errors import (
    NoIdentity,
    NoInverse,
    NonAssociative,
    NotAPGroup,
    NotNormal,
    OrderBoundExceeded,
    UnsupportedOrder,
)

DEFAULT_ORDER_CAP = 200


# ---------------------------------------------------------------------------
# descriptor atoms for make_group


@dataclass(frozen=True)
class Cyclic:
    n: int


@dataclass(frozen=True)
class Symmetric:
    n: int


@dataclass(frozen=True)
class Quaternion8:
    pass


@dataclass(frozen=True)
class Product:
    factors: tuple


@dataclass(frozen=True)
class DirectData:
    table: tuple
    labels: Optional[tuple] = None


# ---------------------------------------------------------------------------
# core types


class FiniteGroup:
    """A finite group given by its multiplication table.

    Instances are immutable after construction and safe to share across
    threads; derived data (inverses, lattice) is cached lazily.
    """

    def __init__(self, table: Sequence[Sequence[int]], labels: Optional[Sequence[str]] = None,
                 name: str = "", validate: bool = True):
        self.order = len(table)
        self.mul_rows = [list(row) for row in table]
        self.labels = list(labels) if labels is not None else None
        self.name = name or f"G{self.order}"
        if validate:
            self._validate()

    def _validate(self) -> None:
        n = self.order
        if n == 0:
            raise NoIdentity("empty table")
        t = self.np_table
        if t.shape != (n, n) or t.min() < 0 or t.max() >= n:
            raise NonAssociative("table entries out of range")
        # identity must sit at index 0 (canonical form)
        if not (np.array_equal(t[0], np.arange(n)) and np.array_equal(t[:, 0], np.arange(n))):
            raise NoIdentity("element 0 is not a two-sided identity")
        # two-sided inverses
        for a in range(n):
            b = int(np.argmax(t[a] == 0))
            if t[a][b] != 0 or t[b][a] != 0:
                raise NoInverse(f"element {a} has no two-sided inverse")
        # associativity, checked exhaustively (vectorized):
        # (a*b)*c vs a*(b*c) over all triples
        if not np.array_equal(t[t, :], t[:, t]):
            raise NonAssociative("table is not associative")

    # -- element arithmetic ------------------------------------------------

    def mul(self, a: int, b: int) -> int:
        return self.mul_rows[a][b]

    @cached_property
    def np_table(self) -> np.ndarray:
        return np.ascontiguousarray(np.array(self.mul_rows, dtype=np.int32))

    @cached_property
    def inv_row(self) -> list:
        inv = [0] * self.order
        for a in range(self.order):
            row = self.mul_rows[a]
            inv[a] = row.index(0)
        return inv

    @cached_property
    def np_inv(self) -> np.ndarray:
        return np.ascontiguousarray(np.array(self.inv_row, dtype=np.int32))

    def inv(self, a: int) -> int:
        return self.inv_row[a]

    def element_order(self, a: int) -> int:
        x, k = a, 1
        while x != 0:
            x = self.mul_rows[x][a]
            k += 1
        return k

    @cached_property
    def is_abelian(self) -> bool:
        t = self.np_table
        return bool(np.array_equal(t, t.T))

    @property
    def full_mask(self) -> int:
        return (1 << self.order) - 1

    def label(self, a: int) -> str:
        return self.labels[a] if self.labels else str(a)

    # -- mask kernels ------------------------------------------------------

    def close(self, seed_mask: int) -> int:
        if _kernels.BACKEND == "compiled":
            return _kernels.close_mask_compiled(self.np_table, seed_mask)
        return _kernels.close_mask_pure(self.mul_rows, seed_mask)

    def conjugate(self, mask: int, g: int) -> int:
        if _kernels.BACKEND == "compiled":
            return _kernels.conjugate_mask_compiled(self.np_table, self.np_inv, mask, g)
        return _kernels.conjugate_mask_pure(self.mul_rows, self.inv_row, mask, g)

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name}, order={self.order})"


@dataclass(frozen=True)
class GroupHom:
    """Homomorphism between index groups, stored as an index mapping."""

    source: FiniteGroup
    target: FiniteGroup
    mapping: tuple
    surjective: bool = field(default=False)

    @staticmethod
    def create(source: FiniteGroup, target: FiniteGroup, mapping: Sequence[int],
               validate: bool = True) -> "GroupHom":
        mapping = tuple(int(m) for m in mapping)
        hom = GroupHom(source, target, mapping, len(set(mapping)) == target.order)
        if validate:
            hom._check()
        return hom

    def _check(self) -> None:
        if self.mapping[0] != 0:
            raise NoIdentity("homomorphism must preserve the identity")
        mr_s, mr_t, f = self.source.mul_rows, self.target.mul_rows, self.mapping
        for a in range(self.source.order):
            fa = f[a]
            for b in range(self.source.order):
                if f[mr_s[a][b]] != mr_t[fa][f[b]]:
                    raise NonAssociative("mapping is not a homomorphism")

    def apply(self, a: int) -> int:
        return self.mapping[a]

    def image_mask(self, mask: int) -> int:
        return _kernels.image_mask(self.mapping, mask)

    def preimage_mask(self, mask: int) -> int:
        out = 0
        for a, fa in enumerate(self.mapping):
            if (mask >> fa) & 1:
                out |= 1 << a
        return out

    def kernel_mask(self) -> int:
        return self.preimage_mask(1)

    def compose(self, inner: "GroupHom") -> "GroupHom":
        """self o inner (apply inner first)."""
        mapping = tuple(self.mapping[x] for x in inner.mapping)
        return GroupHom(inner.source, self.target, mapping,
                        len(set(mapping)) == self.target.order)

    @staticmethod
    def identity(g: FiniteGroup) -> "GroupHom":
        return GroupHom(g, g, tuple(range(g.order)), True)


@dataclass(frozen=True)
class Subgroup:
    """A subgroup of ``parent`` encoded as a member bitmask."""

    parent: FiniteGroup
    mask: int

    @staticmethod
    def create(parent: FiniteGroup, mask: int, validate: bool = True) -> "Subgroup":
        h = Subgroup(parent, mask)
        if validate:
            h._check()
        return h

    def _check(self) -> None:
        if not self.mask & 1:
            raise NoIdentity("subgroup must contain the identity")
        if self.parent.close(self.mask) != self.mask:
            raise NonAssociative("subset is not closed under multiplication")
        if self.parent.order % self.size != 0:
            raise NonAssociative("Lagrange violation")  # unreachable if closed

    @property
    def size(self) -> int:
        return self.mask.bit_count()

    @property
    def index(self) -> int:
        return self.parent.order // self.size

    def members(self) -> list:
        out, m = [], self.mask
        while m:
            low = m & -m
            out.append(low.bit_length() - 1)
            m ^= low
        return out

    def contains(self, other: "Subgroup") -> bool:
        return other.mask & ~self.mask == 0

    def conjugate_by(self, g: int) -> "Subgroup":
        return Subgroup(self.parent, self.parent.conjugate(self.mask, g))

    def is_normal(self) -> bool:
        return is_normal_mask(self.parent, self.mask, self.parent.full_mask)

    def key(self) -> tuple:
        return (self.size, tuple(self.members()))

    def __repr__(self) -> str:
        return f"Subgroup(order={self.size} of {self.parent.name}, mask={hex(self.mask)})"


def is_normal_mask(g: FiniteGroup, mask: int, ambient_mask: int) -> bool:
    """Normality of ``mask`` inside the subgroup ``ambient_mask``."""
    m = ambient_mask
    while m:
        low = m & -m
        x = low.bit_length() - 1
        m ^= low
        if g.conjugate(mask, x) != mask:
            return False
    return True


class SubgroupLattice:
    """All subgroups of a group in canonical order, with conjugacy data."""

    def __init__(self, group: FiniteGroup, masks: Iterable[int]):
        self.group = group
        subs = [Subgroup(group, m) for m in masks]
        subs.sort(key=Subgroup.key)
        self.subgroups: list = subs
        self.index_of = {h.mask: i for i, h in enumerate(subs)}
        self._compute_classes()

    def _compute_classes(self) -> None:
        g = self.group
        n = len(self.subgroups)
        class_of = [-1] * n
        classes = []
        for i, h in enumerate(self.subgroups):
            if class_of[i] >= 0:
                continue
            orbit = {h.mask}
            frontier = [h.mask]
            while frontier:
                m = frontier.pop()
                for x in range(1, g.order):
                    c = g.conjugate(m, x)
                    if c not in orbit:
                        orbit.add(c)
                        frontier.append(c)
            cls = sorted(self.index_of[m] for m in orbit)
            cid = len(classes)
            for j in cls:
                class_of[j] = cid
            classes.append(cls)
        self.class_of = class_of
        self.classes = classes
        # canonical representative: least subgroup in canonical order
        self.class_reps = [self.subgroups[c[0]] for c in classes]

    def __len__(self) -> int:
        return len(self.subgroups)

    @property
    def num_classes(self) -> int:
        return len(self.classes)

    def leq(self, a: Subgroup, b: Subgroup) -> bool:
        return a.mask & ~b.mask == 0

    def class_id(self, h: Subgroup) -> int:
        return self.class_of[self.index_of[h.mask]]

    def canonical_rep(self, h: Subgroup) -> Subgroup:
        return self.class_reps[self.class_id(h)]

    def normal_subgroups(self) -> list:
        return [h for h, c in zip(self.subgroups, (self.classes[i] for i in self.class_of))
                if len(c) == 1]

    def maximal_subgroups(self) -> list:
        proper = [h for h in self.subgroups if h.size < self.group.order]
        out = []
        for h in proper:
            if not any(k is not h and k.contains(h) for k in proper):
                out.append(h)
        return out

    def subgroups_between(self, lo_mask: int, hi_mask: int) -> list:
        return [h for h in self.subgroups
                if h.mask & ~hi_mask == 0 and lo_mask & ~h.mask == 0]


# ---------------------------------------------------------------------------
# constructors


def cyclic_group(n: int) -> FiniteGroup:
    if n < 1:
        raise UnsupportedOrder("cyclic order must be >= 1")
    table = [[(a + b) % n for b in range(n)] for a in range(n)]
    return FiniteGroup(table, labels=[str(a) for a in range(n)], name=f"C{n}", validate=False)


def symmetric_group(n: int) -> FiniteGroup:
    if not 1 <= n <= 5:
        raise UnsupportedOrder("symmetric groups supported for 1 <= n <= 5")
    perms = list(itertools.permutations(range(n)))
    index = {p: i for i, p in enumerate(perms)}
    table = [[index[tuple(p[q[x]] for x in range(n))] for q in perms] for p in perms]
    labels = ["".join(str(x) for x in p) for p in perms]
    return FiniteGroup(table, labels=labels, name=f"S{n}", validate=False)


_Q8_MUL = {
    ("e", "e"): (1, "e"), ("e", "i"): (1, "i"), ("e", "j"): (1, "j"), ("e", "k"): (1, "k"),
    ("i", "e"): (1, "i"), ("i", "i"): (-1, "e"), ("i", "j"): (1, "k"), ("i", "k"): (-1, "j"),
    ("j", "e"): (1, "j"), ("j", "i"): (-1, "k"), ("j", "j"): (-1, "e"), ("j", "k"): (1, "i"),
    ("k", "e"): (1, "k"), ("k", "i"): (1, "j"), ("k", "j"): (-1, "i"), ("k", "k"): (-1, "e"),
}


def quaternion_group() -> FiniteGroup:
    elems = [(1, "e"), (-1, "e"), (1, "i"), (-1, "i"), (1, "j"), (-1, "j"), (1, "k"), (-1, "k")]
    index = {e: x for x, e in enumerate(elems)}
    table = []
    for s1, l1 in elems:
        row = []
        for s2, l2 in elems:
            s3, l3 = _Q8_MUL[(l1, l2)]
            row.append(index[(s1 * s2 * s3, l3)])
        table.append(row)
    labels = [("" if s == 1 else "-") + ("1" if l == "e" else l) for s, l in elems]
    return FiniteGroup(table, labels=labels, name="Q8", validate=False)


def direct_product(groups: Sequence[FiniteGroup]) -> FiniteGroup:
    """Direct product with lexicographic indexing (first factor most significant)."""
    if not groups:
        return cyclic_group(1)
    if len(groups) == 1:
        return groups[0]
    sizes = [g.order for g in groups]
    bases = [1] * len(groups)
    for i in range(len(groups) - 2, -1, -1):
        bases[i] = bases[i + 1] * sizes[i + 1]
    order = bases[0] * sizes[0]

    def decode(x: int) -> tuple:
        return tuple((x // bases[i]) % sizes[i] for i in range(len(groups)))

    def encode(t) -> int:
        return sum(a * b for a, b in zip(t, bases))

    table = []
    for a in range(order):
        ta = decode(a)
        row = []
        for b in range(order):
            tb = decode(b)
            row.append(encode(tuple(g.mul(x, y) for g, x, y in zip(groups, ta, tb))))
        table.append(row)
    labels = None
    if all(g.labels for g in groups):
        labels = ["(" + ",".join(g.label(x) for g, x in zip(groups, decode(a))) + ")"
                  for a in range(order)]
    name = "x".join(g.name for g in groups)
    return FiniteGroup(table, labels=labels, name=name, validate=False)


def group_from_table(table: Sequence[Sequence[int]], labels=None) -> FiniteGroup:
    """Validated group from raw data; relabels so the identity sits at index 0."""
    n = len(table)
    rows = [list(r) for r in table]
    ident = None
    for e in range(n):
        if all(rows[e][b] == b for b in range(n)) and all(rows[a][e] == a for a in range(n)):
            ident = e
            break
    if ident is None:
        raise NoIdentity("table has no two-sided identity")
    if ident != 0:
        perm = [ident] + [x for x in range(n) if x != ident]
        pos = {x: i for i, x in enumerate(perm)}
        rows = [[pos[rows[perm[a]][perm[b]]] for b in range(n)] for a in range(n)]
        if labels is not None:
            labels = [labels[x] for x in perm]
    return FiniteGroup(rows, labels=labels, name=f"G{n}", validate=True)


def make_group(atom) -> FiniteGroup:
    """Build a canonical group from a descriptor atom."""
    if isinstance(atom, Cyclic):
        return cyclic_group(atom.n)
    if isinstance(atom, Symmetric):
        return symmetric_group(atom.n)
    if isinstance(atom, Quaternion8):
        return quaternion_group()
    if isinstance(atom, Product):
        return direct_product([make_group(f) for f in atom.factors])
    if isinstance(atom, DirectData):
        return group_from_table(atom.table, atom.labels)
    raise UnsupportedOrder(f"unknown group atom {atom!r}")


# ---------------------------------------------------------------------------
# lattice and classical operations


def enumerate_subgroups(g: FiniteGroup, max_order: int = DEFAULT_ORDER_CAP) -> SubgroupLattice:
    """All subgroups via cyclic seeds and pairwise joins.

    Every subgroup is the join of its cyclic subgroups, so iterating joins
    of found subgroups with cyclic seeds reaches the whole lattice.
    """
    if g.order > max_order:
        raise OrderBoundExceeded(f"order {g.order} exceeds bound {max_order}")
    cached = getattr(g, "_lattice", None)
    if cached is not None:
        return cached

    cyclics = set()
    for x in range(1, g.order):
        mask, y = 1 | (1 << x), x
        while y != 0:
            y = g.mul_rows[y][x]
            mask |= 1 << y
        cyclics.add(mask)
    masks = {1} | cyclics
    frontier = list(masks)
    cyclics_list = sorted(cyclics)
    while frontier:
        a = frontier.pop()
        for c in cyclics_list:
            if c & ~a == 0:
                continue
            j = g.close(a | c)
            if j not in masks:
                masks.add(j)
                frontier.append(j)
    lattice = SubgroupLattice(g, masks)
    g._lattice = lattice
    return lattice


def subgroup_as_group(h: Subgroup) -> tuple:
    """Standalone group on the elements of ``h`` plus the index embedding.

    Returns (group, members) where members[i] is the parent index of the
    new element i; identity stays at index 0.
    """
    members = h.members()
    pos = {x: i for i, x in enumerate(members)}
    table = [[pos[h.parent.mul_rows[a][b]] for b in members] for a in members]
    labels = [h.parent.label(x) for x in members] if h.parent.labels else None
    grp = FiniteGroup(table, labels=labels, name=f"{h.parent.name}[{h.size}]", validate=False)
    return grp, members


def normalizer(h: Subgroup) -> Subgroup:
    """N_G(H) = { g : H^g = H }."""
    g = h.parent
    out = 0
    for x in range(g.order):
        if g.conjugate(h.mask, x) == h.mask:
            out |= 1 << x
    return Subgroup(g, out)


def centralizer(h: Subgroup) -> Subgroup:
    g = h.parent
    members = h.members()
    out = 0
    for x in range(g.order):
        if all(g.mul_rows[x][m] == g.mul_rows[m][x] for m in members):
            out |= 1 << x
    return Subgroup(g, out)


def quotient(g: FiniteGroup, n: Subgroup) -> tuple:
    """(G/N, canonical surjection). Requires N normal in G."""
    if n.parent is not g:
        n = Subgroup(g, n.mask)
    if not n.is_normal():
        raise NotNormal(f"subgroup of order {n.size} is not normal in {g.name}")
    members = n.members()
    coset_of = [-1] * g.order
    reps = []
    for x in range(g.order):
        if coset_of[x] >= 0:
            continue
        cid = len(reps)
        reps.append(x)
        for m in members:
            coset_of[g.mul_rows[x][m]] = cid
    table = [[coset_of[g.mul_rows[reps[a]][reps[b]]] for b in range(len(reps))]
             for a in range(len(reps))]
    labels = [g.label(r) + "N" for r in reps] if g.labels else None
    q = FiniteGroup(table, labels=labels, name=f"{g.name}/{n.size}", validate=False)
    hom = GroupHom(g, q, tuple(coset_of), True)
    return q, hom


def frattini(g: FiniteGroup) -> Subgroup:
    """Intersection of all maximal proper subgroups; whole group if none."""
    lattice = enumerate_subgroups(g)
    maximal = lattice.maximal_subgroups()
    mask = g.full_mask
    for h in maximal:
        mask &= h.mask
    return Subgroup(g, mask)


def is_p_power(n: int, p: int) -> bool:
    while n % p == 0:
        n //= p
    return n == 1


def p_rank(g: FiniteGroup, p: int) -> int:
    """log_p of the order of P/Phi(P) for a p-group P."""
    if not is_p_power(g.order, p):
        raise NotAPGroup(f"order {g.order} is not a power of {p}")
    if g.order == 1:
        return 0
    phi = frattini(g)
    quot = g.order // phi.size
    r = 0
    while quot > 1:
        quot //= p
        r += 1
    return r


def o_p(g: FiniteGroup, p: int) -> Subgroup:
    """Smallest normal subgroup with p-group quotient.

    Computed as the closure of all elements of order prime to p; this is
    normal (conjugation-invariant generating set) and the quotient only
    has p-power-order elements. Minimality is exercised exhaustively in
    the test suite against the intersection of all p-normal subgroups.
    """
    seed = 1
    for x in range(1, g.order):
        if g.element_order(x) % p != 0:
            seed |= 1 << x
    return Subgroup(g, g.close(seed))


def is_p_subnormal(h: Subgroup, g: FiniteGroup, p: int) -> bool:
    """True iff O^p(G) is contained in H (p-subnormality)."""
    if h.parent is not g:
        h = Subgroup(g, h.mask)
    return o_p(g, p).mask & ~h.mask == 0


def p_subnormal_via_chains(h: Subgroup, g: FiniteGroup, p: int) -> bool:
    """Independent route: search for a chain H = L_k <| ... <| L_0 = G with
    every step normal in the next and every step quotient a p-group."""
    lattice = enumerate_subgroups(g)
    memo: dict = {}

    def search(ambient_mask: int) -> bool:
        if ambient_mask == h.mask:
            return True
        got = memo.get(ambient_mask)
        if got is not None:
            return got
        memo[ambient_mask] = False  # cycle guard; chains strictly descend
        amb_size = ambient_mask.bit_count()
        for cand in lattice.subgroups_between(h.mask, ambient_mask):
            if cand.mask == ambient_mask:
                continue
            if not is_p_power(amb_size // cand.size, p):
                continue
            if not is_normal_mask(g, cand.mask, ambient_mask):
                continue
            if search(cand.mask):
                memo[ambient_mask] = True
                return True
        return memo[ambient_mask]

    return search(g.full_mask)


def min_p_chain_length(h: Subgroup, g: FiniteGroup, p: int) -> Optional[int]:
    """Minimal k with a chain H = L_k <| ... <| L_0 = G, every step normal
    of index exactly p; None when no such chain exists.

    Note the convention: steps have index exactly p, not merely p-group
    quotients. When a chain exists its length is forced to log_p [G:H].
    """
    if h.parent is not g:
        h = Subgroup(g, h.mask)
    lattice = enumerate_subgroups(g)
    start = g.full_mask
    if h.mask == start:
        return 0
    seen = {start}
    frontier = [start]
    depth = 0
    while frontier:
        depth += 1
        nxt = []
        for amb in frontier:
            amb_size = amb.bit_count()
            if amb_size % p != 0:
                continue
            for cand in lattice.subgroups_between(h.mask, amb):
                if cand.size * p != amb_size:
                    continue
                if not is_normal_mask(g, cand.mask, amb):
                    continue
                if cand.mask == h.mask:
                    return depth
                if cand.mask not in seen:
                    seen.add(cand.mask)
                    nxt.append(cand.mask)
        frontier = nxt
    return None
