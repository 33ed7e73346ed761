"""Towers of finite quotient groups and compatible subgroup threads.

A pro-group is realized as a chain G_0 <- G_1 <- ... <- G_N of finite
groups with surjective steps and G_0 trivial. Closed subgroups appear as
compatible chains of images (threads). Infinite invariants (supernatural
exponents, unbounded ranks) are flagged only when the realizing
descriptor certifies them; plain towers report depth-truncated values.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional, Sequence

from .descriptors import ElemAbInfAtom, FinAtom, ProDescriptor, SLRefAtom, ZpAtom
from .errors import (
    DepthTooLarge,
    IncompatibleChain,
    InducedMapNotSurjective,
    LevelOutOfRange,
    NotNested,
    NotPGroupQuotient,
    UnsupportedAtom,
)
from .groups import (
    DEFAULT_ORDER_CAP,
    FiniteGroup,
    GroupHom,
    Subgroup,
    SubgroupLattice,
    cyclic_group,
    direct_product,
    enumerate_subgroups,
    is_normal_mask,
    is_p_power,
    o_p,
    p_rank,
    quotient,
    subgroup_as_group,
)

INF = float("inf")


def fmt_extended(n) -> str:
    """Render an extended natural (int or INF) for JSON output."""
    return "inf" if n == INF else str(int(n))


# ---------------------------------------------------------------------------
# supernatural numbers


@dataclass(frozen=True)
class SupernaturalNumber:
    """Formal product of prime powers with exponents in N u {inf}."""

    exponents: tuple  # sorted tuple of (prime, exponent)
    truncated: bool = False

    @staticmethod
    def from_dict(exps: dict, truncated: bool = False) -> "SupernaturalNumber":
        items = tuple(sorted((p, e) for p, e in exps.items() if e))
        return SupernaturalNumber(items, truncated)

    def exponent(self, p: int):
        for q, e in self.exponents:
            if q == p:
                return e
        return 0

    def divides(self, other: "SupernaturalNumber") -> bool:
        return all(e <= other.exponent(p) for p, e in self.exponents)

    def text(self) -> str:
        if not self.exponents:
            return "1"
        return "*".join(f"{p}^{fmt_extended(e)}" for p, e in self.exponents)

    def __str__(self) -> str:
        return self.text()


def factorize(n: int) -> dict:
    out: dict = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


# ---------------------------------------------------------------------------
# tower structure


@dataclass(frozen=True)
class Tower:
    """Chain of finite quotients; steps[i] maps level i+1 onto level i."""

    levels: tuple
    steps: tuple
    descriptor: Optional[ProDescriptor] = None
    factor_levels: tuple = ()  # per level: tuple of per-factor groups
    factor_bases: tuple = ()   # per level: mixed-radix bases matching factor_levels

    def __post_init__(self):
        assert self.levels[0].order == 1, "tower must start at the trivial group"
        for i, step in enumerate(self.steps):
            assert step.source is self.levels[i + 1] and step.target is self.levels[i]
            if not step.surjective:
                raise InducedMapNotSurjective(f"step onto level {i} is not surjective")

    @property
    def depth(self) -> int:
        return len(self.levels) - 1

    def level(self, i: int) -> FiniteGroup:
        if not 0 <= i <= self.depth:
            raise LevelOutOfRange(f"level {i} outside 0..{self.depth}")
        return self.levels[i]

    def proj(self, i_from: int, i_to: int) -> GroupHom:
        """Composite projection from level i_from down to i_to."""
        assert i_to <= i_from
        hom = GroupHom.identity(self.levels[i_from])
        for j in range(i_from - 1, i_to - 1, -1):
            hom = self.steps[j].compose(hom)
        return hom

    def lattice(self, i: int) -> SubgroupLattice:
        return enumerate_subgroups(self.level(i), max_order=10 ** 9)

    @cached_property
    def is_abelian(self) -> bool:
        return all(g.is_abelian for g in self.levels)

    def decode(self, level: int, x: int) -> tuple:
        """Per-factor components of element x at a level."""
        groups = self.factor_levels[level]
        bases = self.factor_bases[level]
        return tuple((x // b) % g.order for g, b in zip(groups, bases))

    def combine_factor_masks(self, level: int, masks: Sequence[int]) -> int:
        """Product subgroup mask from per-factor member masks."""
        groups = self.factor_levels[level]
        bases = self.factor_bases[level]
        member_lists = []
        for g, m in zip(groups, masks):
            members = [x for x in range(g.order) if (m >> x) & 1]
            member_lists.append(members)
        out = 0
        for combo in itertools.product(*member_lists):
            out |= 1 << sum(c * b for c, b in zip(combo, bases))
        return out

    def class_label(self, level: int, class_id: int) -> str:
        """Stable, human-oriented label for a conjugacy class at a level."""
        lat = self.lattice(level)
        rep = lat.class_reps[class_id]
        if self.descriptor is not None and len(self.descriptor.factors) == 1:
            atom = self.descriptor.factors[0]
            if isinstance(atom, ZpAtom):
                # subgroups of a cyclic p-power level form a chain
                k = level - round(math.log(rep.size, atom.p)) if rep.size > 1 else level
                if rep.size == self.level(level).order:
                    return "full" if level > 0 else "e"
                if rep.size == 1:
                    return "e"
                return f"p^{k}"
        if rep.size == 1:
            return "e"
        if rep.size == self.level(level).order:
            return "full"
        return f"c{class_id}"


@dataclass(frozen=True)
class SubgroupThread:
    """A closed subgroup as a compatible chain of level images."""

    tower: Tower
    chain: tuple  # Subgroup per level
    tag: Optional[str] = None
    factor_specs: Optional[tuple] = None  # symbolic per-factor data, when known

    def __post_init__(self):
        assert len(self.chain) == self.tower.depth + 1
        assert self.chain[0].size == 1, "thread must start trivial"

    def level_mask(self, i: int) -> int:
        return self.chain[i].mask

    def contains(self, other: "SubgroupThread") -> bool:
        return all(o.mask & ~s.mask == 0 for s, o in zip(self.chain, other.chain))

    def index_sequence(self) -> list:
        return [g.order // h.size for g, h in zip(self.tower.levels, self.chain)]

    def conjugate_by_top(self, g_top: int) -> "SubgroupThread":
        """Conjugate the whole chain by (the images of) a top-level element."""
        t = self.tower
        masks = []
        for i in range(t.depth + 1):
            gi = t.proj(t.depth, i).apply(g_top)
            masks.append(t.level(i).conjugate(self.chain[i].mask, gi))
        return SubgroupThread(t, tuple(Subgroup(t.level(i), m) for i, m in enumerate(masks)),
                              tag=self.tag, factor_specs=None)


# ---------------------------------------------------------------------------
# realize


def _atom_schedule(atom, depth: int):
    """Per-level groups and step index-mappings for one atom."""
    if isinstance(atom, SLRefAtom):
        raise UnsupportedAtom(f"{atom.text()} is a reference-fact atom and cannot be realized")
    groups = []
    maps = []
    if isinstance(atom, ZpAtom):
        groups = [cyclic_group(atom.p ** i) for i in range(depth + 1)]
        maps = [[x % (atom.p ** i) for x in range(atom.p ** (i + 1))] for i in range(depth)]
    elif isinstance(atom, ElemAbInfAtom):
        groups = [direct_product([cyclic_group(atom.p)] * i) if i else cyclic_group(1)
                  for i in range(depth + 1)]
        # drop the last (least significant) coordinate
        maps = [[x // atom.p for x in range(atom.p ** (i + 1))] for i in range(depth)]
    elif isinstance(atom, FinAtom):
        a = atom.group()
        groups = [cyclic_group(1)] + [a] * depth
        maps = [[0] * a.order] + [list(range(a.order)) for _ in range(depth - 1)]
        if depth == 0:
            maps = []
    else:  # pragma: no cover
        raise UnsupportedAtom(f"unknown atom {atom!r}")
    return groups, maps


def realize(d: ProDescriptor, depth: int = 4,
            max_order: int = DEFAULT_ORDER_CAP) -> Tower:
    """Realize a descriptor as a tower of the given depth.

    Level schedules: Zp(p) runs through cyclic groups of order p^i;
    FpInf(p) through elementary abelian groups of rank i; a finite atom is
    resolved at level 1 and constant afterwards; products are level-wise.
    """
    assert depth >= 0
    schedules = [_atom_schedule(atom, depth) for atom in d.factors]
    levels = []
    steps = []
    factor_levels = []
    factor_bases = []
    for i in range(depth + 1):
        groups = [sched[0][i] for sched in schedules]
        order = math.prod(g.order for g in groups)
        if order > max_order:
            raise DepthTooLarge(
                f"level {i} of {d.text()} has order {order} > cap {max_order}")
        level = direct_product(groups) if len(groups) != 1 else groups[0]
        levels.append(level)
        bases = [1] * len(groups)
        for j in range(len(groups) - 2, -1, -1):
            bases[j] = bases[j + 1] * groups[j + 1].order
        factor_levels.append(tuple(groups))
        factor_bases.append(tuple(bases))
    for i in range(depth):
        src, dst = levels[i + 1], levels[i]
        mapping = []
        for x in range(src.order):
            comps = []
            for f, (groups, maps) in enumerate(schedules):
                comp = (x // factor_bases[i + 1][f]) % groups[i + 1].order
                comps.append(maps[i][comp])
            mapping.append(sum(c * b for c, b in zip(comps, factor_bases[i])))
        steps.append(GroupHom(src, dst, tuple(mapping), True))
    return Tower(tuple(levels), tuple(steps), descriptor=d,
                 factor_levels=tuple(factor_levels), factor_bases=tuple(factor_bases))


# ---------------------------------------------------------------------------
# threads


def _parse_factor_spec(text: str, atom):
    text = text.strip()
    if text == "e":
        return INF if isinstance(atom, ZpAtom) else "e"
    if text == "full":
        return 0 if isinstance(atom, ZpAtom) else "full"
    if isinstance(atom, ZpAtom):
        for prefix in (f"p^", f"{atom.p}^"):
            if text.startswith(prefix):
                k = int(text[len(prefix):])
                return k
    raise IncompatibleChain(f"bad thread spec {text!r} for atom {atom}")


def _factor_mask(atom, spec, level: int, group: FiniteGroup) -> int:
    if isinstance(atom, ZpAtom):
        k = min(spec, level) if spec != INF else level
        step = atom.p ** int(k)
        mask = 0
        for x in range(0, group.order, step):
            mask |= 1 << x
        return mask
    if spec == "full":
        return group.full_mask
    return 1


def thread(t: Tower, spec: str, tag: Optional[str] = None) -> SubgroupThread:
    """Symbolic thread: "e", "full", "p^k" inside Zp factors, or a product
    of such matching the descriptor's factor count."""
    assert t.descriptor is not None, "symbolic threads need a realized descriptor"
    atoms = t.descriptor.factors
    parts = [s.strip() for s in spec.split("x")]
    if len(parts) == 1 and parts[0] in ("e", "full"):
        parts = parts * len(atoms)
    if len(parts) != len(atoms):
        raise IncompatibleChain(
            f"thread spec {spec!r} has {len(parts)} factors, descriptor has {len(atoms)}")
    specs = tuple(_parse_factor_spec(p, a) for p, a in zip(parts, atoms))
    chain = []
    for i in range(t.depth + 1):
        masks = [_factor_mask(a, s, i, g)
                 for a, s, g in zip(atoms, specs, t.factor_levels[i])]
        chain.append(Subgroup(t.level(i), t.combine_factor_masks(i, masks)))
    h = SubgroupThread(t, tuple(chain), tag=tag or spec, factor_specs=specs)
    _check_compat(h)
    return h


def thread_from_chain(t: Tower, masks: Sequence[int],
                      tag: Optional[str] = None) -> SubgroupThread:
    """Explicit thread from per-level masks; compatibility is enforced."""
    chain = tuple(Subgroup(t.level(i), m) for i, m in enumerate(masks))
    h = SubgroupThread(t, chain, tag=tag)
    _check_compat(h)
    return h


def _check_compat(h: SubgroupThread) -> None:
    t = h.tower
    for i in range(t.depth):
        img = t.steps[i].image_mask(h.chain[i + 1].mask)
        if img != h.chain[i].mask:
            raise IncompatibleChain(f"image at level {i} does not match the chain")


def full_thread(t: Tower) -> SubgroupThread:
    if t.descriptor is not None:
        return thread(t, "full")
    return thread_from_chain(t, [g.full_mask for g in t.levels], tag="full")


def trivial_thread(t: Tower) -> SubgroupThread:
    if t.descriptor is not None:
        return thread(t, "e")
    return thread_from_chain(t, [1] * (t.depth + 1), tag="e")


# ---------------------------------------------------------------------------
# invariants of towers and threads


def order_supernatural(t: Tower) -> SupernaturalNumber:
    """lcm of level orders; descriptor-certified factors carry inf exponents."""
    lcm = 1
    for g in t.levels:
        lcm = lcm * g.order // math.gcd(lcm, g.order)
    exps: dict = {p: float(e) for p, e in factorize(lcm).items()}
    truncated = t.descriptor is None
    if t.descriptor is not None:
        for atom in t.descriptor.factors:
            if isinstance(atom, (ZpAtom, ElemAbInfAtom)):
                exps[atom.p] = INF
    exps = {p: (e if e == INF else int(e)) for p, e in exps.items()}
    return SupernaturalNumber.from_dict(exps, truncated=truncated)


def thread_order_supernatural(h: SubgroupThread) -> SupernaturalNumber:
    lcm = 1
    for s in h.chain:
        lcm = lcm * s.size // math.gcd(lcm, s.size)
    exps: dict = dict(factorize(lcm))
    truncated = h.factor_specs is None
    if h.factor_specs is not None:
        for atom, spec in zip(h.tower.descriptor.factors, h.factor_specs):
            if isinstance(atom, ZpAtom) and spec != INF:
                exps[atom.p] = INF
            elif isinstance(atom, ElemAbInfAtom) and spec == "full":
                exps[atom.p] = INF
    return SupernaturalNumber.from_dict(exps, truncated=truncated)


@dataclass(frozen=True)
class SubSystem:
    """Per-level conjugacy-class sets with the induced surjections."""

    tower: Tower
    class_counts: tuple
    labels: tuple        # labels[i][c] – label of class c at level i
    maps: tuple          # maps[i][c] – image class at level i of class c at level i+1

    def classes_at(self, i: int) -> range:
        return range(self.class_counts[i])

    def map_down(self, i_from: int, i_to: int, class_id: int) -> int:
        c = class_id
        for j in range(i_from - 1, i_to - 1, -1):
            c = self.maps[j][c]
        return c


def sub_system(t: Tower) -> SubSystem:
    """Conjugacy-class sets per level plus induced surjective maps."""
    counts = []
    labels = []
    for i in range(t.depth + 1):
        lat = t.lattice(i)
        counts.append(lat.num_classes)
        labels.append(tuple(t.class_label(i, c) for c in range(lat.num_classes)))
    maps = []
    for i in range(t.depth):
        lat_hi = t.lattice(i + 1)
        lat_lo = t.lattice(i)
        step = t.steps[i]
        m = []
        for rep in lat_hi.class_reps:
            img = step.image_mask(rep.mask)
            m.append(lat_lo.class_id(Subgroup(t.level(i), img)))
        if set(m) != set(range(lat_lo.num_classes)):
            raise InducedMapNotSurjective(f"class map onto level {i} is not surjective")
        maps.append(tuple(m))
    return SubSystem(t, tuple(counts), tuple(labels), tuple(maps))


def thread_class_at(h: SubgroupThread, i: int) -> int:
    lat = h.tower.lattice(i)
    return lat.class_id(h.chain[i])


def neighborhood_fiber(h: SubgroupThread, i: int, system: Optional[SubSystem] = None) -> set:
    """Top-level classes agreeing with the thread at level i: the truncated
    basic open neighbourhood of the thread determined by level i."""
    t = h.tower
    if not 0 <= i <= t.depth:
        raise LevelOutOfRange(f"level {i} outside 0..{t.depth}")
    system = system or sub_system(t)
    target = thread_class_at(h, i)
    return {c for c in system.classes_at(t.depth)
            if system.map_down(t.depth, i, c) == target}


def o_p_thread(t: Tower, p: int) -> SubgroupThread:
    """Level-wise p-residuals O^p(G_i); step compatibility is exact and
    asserted at runtime."""
    masks = [o_p(g, p).mask for g in t.levels]
    for i in range(t.depth):
        assert t.steps[i].image_mask(masks[i + 1]) == masks[i], \
            "p-residual continuity violated"
    return thread_from_chain(t, masks, tag=f"O^{p}")


def is_pro_p_subnormal(h: SubgroupThread, p: int) -> bool:
    """True iff O^p(G_i) <= H_i at every level."""
    t = h.tower
    return all(o_p(t.level(i), p).mask & ~h.chain[i].mask == 0
               for i in range(t.depth + 1))


@dataclass(frozen=True)
class RankResult:
    """A pro-p rank: value in N u {inf}; certified means descriptor-derived,
    otherwise the value is the depth-truncated supremum."""

    value: float
    certified: bool
    per_level: tuple
    stable_levels: int = 0

    @property
    def truncated(self) -> bool:
        return not self.certified


def _symbolic_rank(tower: Tower, h: SubgroupThread, k: SubgroupThread, p: int):
    """Per-factor certified rank of H/K, or None when not derivable."""
    if h.factor_specs is None or k.factor_specs is None or tower.descriptor is None:
        return None
    total = 0.0
    for atom, hs, ks in zip(tower.descriptor.factors, h.factor_specs, k.factor_specs):
        if isinstance(atom, ZpAtom):
            if hs == ks:
                continue
            if atom.p != p:
                return None  # mixed-prime proper quotient: not a p-group
            total += 1  # closed subgroup quotients of a procyclic factor are procyclic
        elif isinstance(atom, ElemAbInfAtom):
            if hs == ks:
                continue
            if atom.p != p:
                return None
            return INF  # full/e gap in an infinite elementary abelian factor
        else:
            if hs == ks:
                continue
            a = atom.group()
            if not is_p_power(a.order, p):
                return None
            total += p_rank(a, p)
    return total


def pro_p_rank(h: SubgroupThread, k: SubgroupThread, p: int) -> RankResult:
    """sup over levels of rank_p(H_i/K_i) with an inf flag only when the
    descriptor certifies unbounded growth."""
    t = h.tower
    per_level = []
    for i in range(t.depth + 1):
        hi, ki = h.chain[i], k.chain[i]
        if ki.mask & ~hi.mask:
            raise NotNested(f"K not inside H at level {i}")
        if not is_normal_mask(t.level(i), ki.mask, hi.mask):
            raise NotNested(f"K not normal in H at level {i}")
        hg, members = subgroup_as_group(hi)
        pos = {x: j for j, x in enumerate(members)}
        k_inside = 0
        for x in ki.members():
            k_inside |= 1 << pos[x]
        q, _ = quotient(hg, Subgroup(hg, k_inside))
        if not is_p_power(q.order, p):
            raise NotPGroupQuotient(f"H/K at level {i} has order {q.order}")
        per_level.append(p_rank(q, p))
    computed = max(per_level) if per_level else 0
    stable = 0
    for r in reversed(per_level):
        if r != computed:
            break
        stable += 1
    sym = _symbolic_rank(t, h, k, p)
    if sym is not None:
        return RankResult(sym, True, tuple(per_level), stable)
    return RankResult(float(computed), False, tuple(per_level), stable)


def weyl_tower(h: SubgroupThread) -> Tower:
    """Level-wise Weyl groups N_{G_i}(H_i)/H_i with induced steps.

    Surjectivity of each induced step is asserted, not assumed; a failure
    surfaces as InducedMapNotSurjective.
    """
    from .groups import normalizer

    t = h.tower
    w_levels = []
    w_data = []  # (normalizer members, coset_of over normalizer-local indices)
    for i in range(t.depth + 1):
        n_i = normalizer(h.chain[i])
        ng, members = subgroup_as_group(n_i)
        pos = {x: j for j, x in enumerate(members)}
        h_inside = 0
        for x in h.chain[i].members():
            h_inside |= 1 << pos[x]
        w, hom = quotient(ng, Subgroup(ng, h_inside))
        w_levels.append(w)
        w_data.append((members, pos, hom))
    w_steps = []
    for i in range(t.depth):
        members_hi, _, hom_hi = w_data[i + 1]
        _, pos_lo, hom_lo = w_data[i]
        step = t.steps[i]
        mapping = [0] * w_levels[i + 1].order
        for j, x in enumerate(members_hi):
            y = step.apply(x)
            if y not in pos_lo:
                raise InducedMapNotSurjective(
                    f"normalizer image escapes the level-{i} normalizer")
            mapping[hom_hi.apply(j)] = hom_lo.apply(pos_lo[y])
        mhom = GroupHom.create(w_levels[i + 1], w_levels[i], mapping, validate=True)
        if not mhom.surjective:
            raise InducedMapNotSurjective(f"Weyl step onto level {i} is not surjective")
        w_steps.append(mhom)
    return Tower(tuple(w_levels), tuple(w_steps), descriptor=None,
                 factor_levels=tuple((g,) for g in w_levels),
                 factor_bases=tuple((1,) for _ in w_levels))
