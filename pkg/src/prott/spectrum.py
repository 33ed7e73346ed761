"""Balmer-spectrum layer: prime labels, inclusion oracles, blueshift
bounds, prism graphs, Burnside spectra, and the comparison map.

Heights follow the shifted convention in which 1 is the rational point
and the height-n point kills the (n-1)-st Morava K-theory; heights live
in {1, 2, ...} u {INF} with INF a genuine value above every integer.

Verdict policy: on abelian data the inclusion oracle is exact (the rank
criterion); otherwise it sandwiches the blueshift number between a
Frattini-quotient rank and a minimal index-p chain length and refuses to
guess inside an open window. Windows are first-class results, not
errors.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .descriptors import FinAtom
from .errors import (
    BadHeight,
    NotAbelian,
    NotNested,
    NotPSubnormal,
    NotSubconjugate,
    UnknownNode,
)
from .groups import (
    FiniteGroup,
    GroupHom,
    Subgroup,
    SubgroupLattice,
    enumerate_subgroups,
    frattini,
    is_p_power,
    min_p_chain_length,
    o_p,
    p_rank,
    quotient,
    subgroup_as_group,
)
from .towers import (
    INF,
    SubgroupThread,
    Tower,
    fmt_extended,
    pro_p_rank,
    sub_system,
)
from .descriptors import is_prime


def height_geq(n, m, delta) -> bool:
    """n >= m + delta in the extended naturals (INF-safe)."""
    if n == INF:
        return True
    if m == INF or delta == INF:
        return False
    return n >= m + delta


def check_height(n) -> None:
    if n == INF:
        return
    if not isinstance(n, int) or n < 1:
        raise BadHeight(f"height must be a positive integer or INF, got {n!r}")


# ---------------------------------------------------------------------------
# prime points


@dataclass(frozen=True)
class TTPrime:
    """A spectrum point (subgroup class, prime, height) in canonical form:
    height 1 forgets the prime (all height-1 points coincide)."""

    subgroup: Subgroup
    p: Optional[int]
    n: object  # int or INF

    def id_text(self, label: str) -> str:
        return f"{label}|{self.p if self.p is not None else 'dot'}|{fmt_extended(self.n)}"


def prime_canonicalize(subgroup: Subgroup, p: Optional[int], n,
                       lattice: Optional[SubgroupLattice] = None) -> TTPrime:
    """Canonical form: class representative for the subgroup, prime dropped
    at height 1, a genuine prime required above height 1."""
    check_height(n)
    lattice = lattice or enumerate_subgroups(subgroup.parent)
    rep = lattice.canonical_rep(subgroup)
    if n == 1:
        return TTPrime(rep, None, 1)
    if p is None or not is_prime(p):
        raise BadHeight(f"height {n} > 1 needs a prime, got {p!r}")
    return TTPrime(rep, p, n)


# ---------------------------------------------------------------------------
# finite-level blueshift bounds


@dataclass(frozen=True)
class PairBounds:
    """Shift window for one p-subnormal embedding of K into H."""

    lower: int
    upper: int
    abelian_exact: bool

    @property
    def collapsed(self) -> bool:
        return self.lower == self.upper


def _reduced_bounds(h_grp: FiniteGroup, k_local_mask: int, p: int) -> PairBounds:
    """Bounds for the pair (K <= H) after dividing out the p-residual of H.

    The reduced ambient is a p-group; there the shift is sandwiched between
    the rank of the Frattini-style quotient Q/(K Phi(Q)) and the minimal
    length of a normal chain with steps of index exactly p. When the
    reduced ambient is abelian the two collapse to the rank of Q/K, which
    is the exact value.
    """
    o_res = o_p(h_grp, p)
    q_grp, hom = quotient(h_grp, o_res)
    k_q = hom.image_mask(k_local_mask)
    if q_grp.is_abelian:
        qq, _ = quotient(q_grp, Subgroup(q_grp, k_q))
        r = p_rank(qq, p)
        return PairBounds(r, r, True)
    j_mask = q_grp.close(k_q | frattini(q_grp).mask)
    quot = q_grp.order // j_mask.bit_count()
    lo = 0
    while quot > 1:
        quot //= p
        lo += 1
    hi = min_p_chain_length(Subgroup(q_grp, k_q), q_grp, p)
    assert hi is not None, "index-p chains always exist inside a p-group"
    return PairBounds(lo, hi, False)


class _LevelCache:
    """Per-group memo for subgroup-as-group data and pair bounds."""

    def __init__(self, g: FiniteGroup):
        self.group = g
        self.lattice = enumerate_subgroups(g, max_order=10 ** 9)
        self._as_group: dict = {}
        self._bounds: dict = {}
        self._op: dict = {}

    def as_group(self, h_mask: int):
        got = self._as_group.get(h_mask)
        if got is None:
            h_grp, members = subgroup_as_group(Subgroup(self.group, h_mask))
            pos = {x: i for i, x in enumerate(members)}
            got = (h_grp, members, pos)
            self._as_group[h_mask] = got
        return got

    def o_p_of(self, h_mask: int, p: int) -> int:
        key = (h_mask, p)
        got = self._op.get(key)
        if got is None:
            h_grp, members, _ = self.as_group(h_mask)
            local = o_p(h_grp, p).members()
            got = 0
            for x in local:
                got |= 1 << members[x]
            self._op[key] = got
        return got

    def pair_bounds(self, k_mask: int, h_mask: int, p: int) -> Optional[PairBounds]:
        """Bounds for this specific nested pair; None when K is not
        p-subnormal in H."""
        key = (k_mask, h_mask, p)
        if key in self._bounds:
            return self._bounds[key]
        if self.o_p_of(h_mask, p) & ~k_mask:
            self._bounds[key] = None
            return None
        h_grp, members, pos = self.as_group(h_mask)
        k_local = 0
        m = k_mask
        while m:
            low = m & -m
            m ^= low
            k_local |= 1 << pos[low.bit_length() - 1]
        out = _reduced_bounds(h_grp, k_local, p)
        self._bounds[key] = out
        return out


_caches: dict = {}


def level_cache(g: FiniteGroup) -> _LevelCache:
    got = _caches.get(id(g))
    if got is None or got.group is not g:
        got = _LevelCache(g)
        _caches[id(g)] = got
    return got


def candidate_bounds(g: FiniteGroup, k: Subgroup, h: Subgroup, p: int) -> list:
    """Bounds over all conjugates of K landing p-subnormally inside H."""
    cache = level_cache(g)
    seen = set()
    out = []
    for x in range(g.order):
        kg = g.conjugate(k.mask, x)
        if kg in seen:
            continue
        seen.add(kg)
        if kg & ~h.mask:
            continue
        b = cache.pair_bounds(kg, h.mask, p)
        if b is not None:
            out.append(b)
    return out


@dataclass(frozen=True)
class InclusionVerdict:
    """Exact(true/false) or an open window; exactness separate from
    certification (certified = stable beyond the visible levels)."""

    kind: str  # "true" | "false" | "undetermined"
    window: Optional[tuple] = None  # (lower, upper) when undetermined
    certified: bool = True
    provenance: str = ""

    @property
    def is_exact(self) -> bool:
        return self.kind != "undetermined"


def finite_level_inclusion(g: FiniteGroup, k: Subgroup, p, n,
                           h: Subgroup, q, m) -> InclusionVerdict:
    """Inclusion of prime points over a single finite group."""
    check_height(n)
    check_height(m)
    lat = level_cache(g).lattice
    if not height_geq(n, m, 0):
        return InclusionVerdict("false", provenance="height-drop")
    if m != 1 and n != 1 and p != q:
        return InclusionVerdict("false", provenance="prime-mismatch")
    if n == 1:  # forces m == 1: rational points are incomparable unless equal
        same = lat.class_id(k) == lat.class_id(h)
        return InclusionVerdict("true" if same else "false", provenance="rational-point")
    cands = candidate_bounds(g, k, h, p)
    if not cands:
        return InclusionVerdict("false", provenance="not-subconjugate-subnormal")
    lo = min(c.lower for c in cands)
    hi = min(c.upper for c in cands)
    if any(height_geq(n, m, c.upper) for c in cands):
        prov = "abelian-rank" if any(c.abelian_exact and height_geq(n, m, c.upper)
                                     for c in cands) else \
            ("bounds-collapse" if any(c.collapsed and height_geq(n, m, c.upper)
                                      for c in cands) else "upper-bound")
        return InclusionVerdict("true", provenance=prov)
    if not height_geq(n, m, lo):
        return InclusionVerdict("false", provenance="below-lower-bound")
    return InclusionVerdict("undetermined", window=(lo, hi), provenance="open-window")


# ---------------------------------------------------------------------------
# pro-level oracles on towers


def _tower_certified(t: Tower) -> bool:
    """True when visible levels determine the limit (all atoms finite)."""
    if t.descriptor is None:
        return False
    return all(isinstance(a, FinAtom) for a in t.descriptor.factors)


def includes_abelian(src, dst) -> bool:
    """Exact inclusion criterion over an abelian tower.

    ``src`` and ``dst`` are (thread, prime, height) triples. True iff the
    source subgroup sits inside the target level-wise, the relative
    quotient is a pro-p-group for the source prime, the height drops by at
    least its rank, and the primes agree when the target height exceeds 1.
    """
    k, p, n = src
    h, q, m = dst
    check_height(n)
    check_height(m)
    t = k.tower
    if not t.is_abelian:
        raise NotAbelian("ambient tower is not abelian")
    if not height_geq(n, m, 0):
        return False
    if m != 1 and n != 1 and p != q:
        return False
    if any(km.mask & ~hm.mask for km, hm in zip(k.chain, h.chain)):
        return False
    if n == 1:
        return all(km.mask == hm.mask for km, hm in zip(k.chain, h.chain))
    for km, hm in zip(k.chain, h.chain):
        if not is_p_power(hm.size // km.size, p):
            return False
    rank = pro_p_rank(h, k, p)
    return height_geq(n, m, rank.value)


def includes_levelwise(src, dst, force_bounds: bool = False) -> InclusionVerdict:
    """Level-wise inclusion oracle over a tower.

    Delegates to the exact abelian criterion where it applies; otherwise
    each level contributes necessary conditions plus a bound sandwich.
    A definite failure at any level refutes the inclusion; success at
    every level affirms it (certified only when the tower stabilizes);
    anything else is an open window.
    """
    k, p, n = src
    h, q, m = dst
    t = k.tower
    assert h.tower is t, "threads must live in the same tower"
    if t.is_abelian and not force_bounds:
        rank_cert = True
        try:
            ok = includes_abelian(src, dst)
        except NotAbelian:  # pragma: no cover
            ok = False
        if ok and n != 1:
            rank_cert = pro_p_rank(h, k, p).certified or _tower_certified(t)
        return InclusionVerdict("true" if ok else "false", certified=rank_cert,
                                provenance="abelian-rank")
    certified = _tower_certified(t)
    windows = []
    for i in range(t.depth + 1):
        v = finite_level_inclusion(t.level(i), k.chain[i], p, n, h.chain[i], q, m)
        if v.kind == "false":
            return InclusionVerdict("false", certified=True, provenance=v.provenance)
        if v.kind == "undetermined":
            windows.append(v.window)
    if not windows:
        return InclusionVerdict("true", certified=certified, provenance="levelwise-bounds")
    lo = max(w[0] for w in windows)
    hi = max(w[1] for w in windows)
    return InclusionVerdict("undetermined", window=(lo, hi), certified=certified,
                            provenance="open-window")


@dataclass(frozen=True)
class BlueshiftResult:
    """Exact value, a (lower, upper) window, or a certified infinite flag."""

    kind: str  # "exact" | "bounds" | "infinite"
    value: Optional[int] = None
    lower: Optional[int] = None
    upper: Optional[int] = None
    provenance: str = ""


def blueshift(h: SubgroupThread, k: SubgroupThread, p: int, m=2) -> BlueshiftResult:
    """Blueshift data for the nested pair K <= H at the prime p.

    Abelian towers get the exact rank (or a certified infinite flag).
    Otherwise the result is the level-supremum sandwich: Frattini-quotient
    rank below, minimal index-p chain length above, computed on the
    p-reduced pair; abelian reduced levels collapse their window.
    """
    check_height(m)
    t = h.tower
    if any(km.mask & ~hm.mask for km, hm in zip(k.chain, h.chain)):
        raise NotNested("blueshift needs K <= H level-wise")
    if t.is_abelian:
        rank = pro_p_rank(h, k, p)
        if rank.value == INF:
            return BlueshiftResult("infinite", provenance="abelian-rank")
        return BlueshiftResult("exact", value=int(rank.value), provenance="abelian-rank")
    lows, highs = [], []
    for i in range(t.depth + 1):
        cache = level_cache(t.level(i))
        b = cache.pair_bounds(k.chain[i].mask, h.chain[i].mask, p)
        if b is None:
            raise NotPSubnormal(f"K is not p-subnormal in H at level {i}")
        lows.append(b.lower)
        highs.append(b.upper)
    return BlueshiftResult("bounds", lower=max(lows), upper=max(highs),
                           provenance="frattini-rank/index-p-chain")


@dataclass(frozen=True)
class ReducedInclusion:
    """Outcome of the pro-p reduction: either a reduced pair in the
    quotient tower of H by its p-residual, or a definite refutation."""

    kind: str  # "reduced" | "false"
    tower: Optional[Tower] = None
    k_thread: Optional[SubgroupThread] = None
    h_thread: Optional[SubgroupThread] = None


def reduce_to_pro_p(k: SubgroupThread, h: SubgroupThread, p: int) -> ReducedInclusion:
    """Replace the inclusion problem by its image in H/O^p(H).

    The source is first conjugated (by a top-level element) into the
    target; failing that is an error, while failure of pro-p-subnormality
    is a definite negative verdict rather than an error.
    """
    t = k.tower
    top = t.depth
    g_top = t.level(top)
    k_conj = None
    for x in range(g_top.order):
        if g_top.conjugate(k.chain[top].mask, x) & ~h.chain[top].mask == 0:
            k_conj = k.conjugate_by_top(x) if x else k
            break
    if k_conj is None:
        raise NotSubconjugate("no conjugate of K lies inside H")
    for i in range(t.depth + 1):
        cache = level_cache(t.level(i))
        if cache.o_p_of(h.chain[i].mask, p) & ~k_conj.chain[i].mask:
            return ReducedInclusion("false")
    # build the quotient tower level-wise
    from .towers import thread_from_chain

    q_levels = []
    homs = []  # parent-index -> local coset index data per level
    for i in range(t.depth + 1):
        cache = level_cache(t.level(i))
        h_grp, members, pos = cache.as_group(h.chain[i].mask)
        op_local = 0
        mm = cache.o_p_of(h.chain[i].mask, p)
        while mm:
            low = mm & -mm
            mm ^= low
            op_local |= 1 << pos[low.bit_length() - 1]
        q_grp, hom = quotient(h_grp, Subgroup(h_grp, op_local))
        q_levels.append(q_grp)
        homs.append((members, pos, hom))
    steps = []
    for i in range(t.depth):
        members_hi, _, hom_hi = homs[i + 1]
        _, pos_lo, hom_lo = homs[i]
        mapping = [0] * q_levels[i + 1].order
        for j, x in enumerate(members_hi):
            mapping[hom_hi.apply(j)] = hom_lo.apply(pos_lo[t.steps[i].apply(x)])
        steps.append(GroupHom.create(q_levels[i + 1], q_levels[i], mapping))
    q_tower = Tower(tuple(q_levels), tuple(steps), descriptor=None,
                    factor_levels=tuple((g,) for g in q_levels),
                    factor_bases=tuple((1,) for _ in q_levels))
    k_masks = []
    for i in range(t.depth + 1):
        members, pos, hom = homs[i]
        local = 0
        mm = k_conj.chain[i].mask
        while mm:
            low = mm & -mm
            mm ^= low
            local |= 1 << pos[low.bit_length() - 1]
        k_masks.append(hom.image_mask(local))
    k_red = thread_from_chain(q_tower, k_masks, tag="reduced")
    h_red = thread_from_chain(q_tower, [g.full_mask for g in q_levels], tag="full")
    return ReducedInclusion("reduced", q_tower, k_red, h_red)


# ---------------------------------------------------------------------------
# prism graphs


@dataclass(frozen=True)
class PrismNode:
    id: str
    class_id: int
    label: str
    p: Optional[int]
    n: object
    level: int


@dataclass
class PrismGraph:
    """Finite truncation of the spectrum as a tagged inclusion graph.

    ``exact`` edges (src included in dst) are certain and transitively
    closed; window edges record undecided shifts, tagged
    implied-by-lower-bound at the window's lower edge and
    possible-within-upper-bound strictly inside it.
    """

    tower: Tower
    level: int
    primes: tuple
    n_max: int
    nodes: list
    node_index: dict
    exact: set           # (src_id, dst_id)
    exact_provenance: dict
    windows: dict        # (src_id, dst_id) -> (lo, hi, tag)
    iota: dict           # class_id -> image class per lower level
    class_labels: tuple

    def exact_reduction(self) -> list:
        """Transitive reduction of the exact relation (Hasse edges)."""
        out = []
        for (a, b) in sorted(self.exact):
            if any((a, c) in self.exact and (c, b) in self.exact
                   for c in self.node_index if c not in (a, b)):
                continue
            out.append((a, b))
        return out


def _heights(n_max: int) -> list:
    return list(range(1, n_max + 1)) + [INF]


def build_prism(t: Tower, primes: Sequence[int], n_max: int, level: int) -> PrismGraph:
    """Prism of the level group: canonical (class, prime, height) nodes
    with inclusion edges, exact edges transitively closed."""
    assert n_max >= 1
    g = t.level(level)
    lat = t.lattice(level)
    labels = tuple(t.class_label(level, c) for c in range(lat.num_classes))
    primes = tuple(sorted(set(primes)))
    nodes = []
    for c in range(lat.num_classes):
        nodes.append(PrismNode(f"{labels[c]}|dot|1", c, labels[c], None, 1, level))
        for n in _heights(n_max):
            if n == 1:
                continue
            for p in primes:
                nodes.append(PrismNode(f"{labels[c]}|{p}|{fmt_extended(n)}",
                                       c, labels[c], p, n, level))
    node_index = {nd.id: nd for nd in nodes}
    exact = set()
    prov: dict = {}
    windows: dict = {}
    # pairwise verdicts
    for src, dst in itertools.permutations(nodes, 2):
        v = finite_level_inclusion(g, lat.class_reps[src.class_id], src.p, src.n,
                                   lat.class_reps[dst.class_id], dst.p, dst.n)
        if v.kind == "true":
            exact.add((src.id, dst.id))
            prov[(src.id, dst.id)] = v.provenance
        elif v.kind == "undetermined":
            lo, hi = v.window
            shift = (src.n - dst.n) if src.n != INF and dst.n != INF else INF
            tag = ("implied-by-lower-bound" if shift == lo
                   else "possible-within-upper-bound")
            windows[(src.id, dst.id)] = (lo, hi, tag)
    # transitive closure of certain edges (ideal inclusions compose)
    succ: dict = {}
    for (a, b) in exact:
        succ.setdefault(a, set()).add(b)
    for a in list(succ):
        reach = set()
        frontier = list(succ.get(a, ()))
        via = {b: b for b in frontier}
        while frontier:
            b = frontier.pop()
            if b in reach:
                continue
            reach.add(b)
            for c in succ.get(b, ()):
                if c not in reach and c != a:
                    via.setdefault(c, b)
                    frontier.append(c)
        for b in reach:
            if (a, b) not in exact and a != b:
                exact.add((a, b))
                prov[(a, b)] = f"composed({via[b]})"
                windows.pop((a, b), None)
    system = sub_system(t)
    iota = {c: {j: system.map_down(level, j, c) for j in range(level)}
            for c in range(lat.num_classes)}
    return PrismGraph(t, level, primes, n_max, nodes, node_index, exact, prov,
                      windows, iota, labels)


def is_thomason_closed(graph: PrismGraph, node_ids) -> bool:
    """Down-closure under exact inclusion: every member's exact-included
    primes are members too. At a finite level every subset is clopen, so
    this is the whole closedness test."""
    s = set(node_ids)
    for nid in s:
        if nid not in graph.node_index:
            raise UnknownNode(f"unknown node {nid!r}")
    for (src, dst) in graph.exact:
        if dst in s and src not in s:
            return False
    return True


def down_closure(graph: PrismGraph, node_ids) -> set:
    s = set(node_ids)
    changed = True
    while changed:
        changed = False
        for (src, dst) in graph.exact:
            if dst in s and src not in s:
                s.add(src)
                changed = True
    return s


# ---------------------------------------------------------------------------
# Burnside spectrum and the comparison map


@dataclass(frozen=True)
class BurnsidePrime:
    """A Zariski point of the Burnside ring: (subgroup class, characteristic).

    At a prime characteristic the class stored is that of the p-residual,
    which is what the identification rule dictates."""

    class_id: int
    char: int
    label: str

    @property
    def id(self) -> str:
        return f"{self.label}|{self.char}"


@dataclass
class BurnsideSpectrum:
    group: FiniteGroup
    lattice: SubgroupLattice
    chars: tuple
    points: list
    point_index: dict
    inclusions: list  # (src_id, dst_id) strict inclusions src < dst


def _class_label_for(lat: SubgroupLattice, class_id: int, g: FiniteGroup) -> str:
    rep = lat.class_reps[class_id]
    if rep.size == 1:
        return "e"
    if rep.size == g.order:
        return "full"
    return f"c{class_id}"


def burnside_spec(g: FiniteGroup, primes: Sequence[int]) -> BurnsideSpectrum:
    """Zariski spectrum of the Burnside ring over a finite characteristic
    set: one characteristic-0 point per conjugacy class, one
    characteristic-p point per class of p-residuals, and the inclusions
    from characteristic 0 into each matching characteristic p."""
    lat = enumerate_subgroups(g)
    chars = tuple(sorted(set(primes)))
    points = []
    index = {}
    for c in range(lat.num_classes):
        pt = BurnsidePrime(c, 0, _class_label_for(lat, c, g))
        points.append(pt)
        index[pt.id] = pt
    cache = level_cache(g)
    residual_class: dict = {}
    for p in chars:
        seen = set()
        for c in range(lat.num_classes):
            rep = lat.class_reps[c]
            op_mask = cache.o_p_of(rep.mask, p)
            oc = lat.class_id(Subgroup(g, op_mask))
            residual_class[(c, p)] = oc
            if oc not in seen:
                seen.add(oc)
                pt = BurnsidePrime(oc, p, _class_label_for(lat, oc, g))
                points.append(pt)
                index[pt.id] = pt
    inclusions = []
    for c in range(lat.num_classes):
        zero_pt = f"{_class_label_for(lat, c, g)}|0"
        for p in chars:
            oc = residual_class[(c, p)]
            inclusions.append((zero_pt, f"{_class_label_for(lat, oc, g)}|{p}"))
    inclusions = sorted(set(inclusions))
    return BurnsideSpectrum(g, lat, chars, points, index, inclusions)


def burnside_includes(spec: BurnsideSpectrum, a: BurnsidePrime, b: BurnsidePrime) -> bool:
    """Inclusion-or-equality of Burnside points under the classical rules:
    equal classes at characteristic 0; at a prime, matching characteristic
    and residual class; characteristic 0 includes into characteristic p
    exactly when the p-residual of its class lands in the target's class;
    prime-characteristic points never include into characteristic 0."""
    if a.char == 0 and b.char == 0:
        return a.class_id == b.class_id
    if a.char != 0 and b.char != 0:
        return a.char == b.char and a.class_id == b.class_id
    if a.char == 0:
        cache = level_cache(spec.group)
        rep = spec.lattice.class_reps[a.class_id]
        oc = spec.lattice.class_id(
            Subgroup(spec.group, cache.o_p_of(rep.mask, b.char)))
        return oc == b.class_id
    return False


def rho(g: FiniteGroup, subgroup: Subgroup, p: Optional[int], n) -> BurnsidePrime:
    """Comparison-map image of a spectrum point: the rational Burnside
    point at height 1, the characteristic-p point (keyed by the
    p-residual's class) above height 1."""
    check_height(n)
    lat = enumerate_subgroups(g)
    if n == 1:
        c = lat.class_id(subgroup)
        return BurnsidePrime(c, 0, _class_label_for(lat, c, g))
    cache = level_cache(g)
    rep = lat.canonical_rep(subgroup)
    oc = lat.class_id(Subgroup(g, cache.o_p_of(rep.mask, p)))
    return BurnsidePrime(oc, p, _class_label_for(lat, oc, g))


# ---------------------------------------------------------------------------
# rational spectrum at a level


@dataclass(frozen=True)
class RationalSpectrumReport:
    """Level approximation of the rational spectrum: the conjugacy-class
    set, the induced map from the level above (when any), and the count
    of clopen subsets = thick-ideal count visible at this truncation."""

    level: int
    labels: tuple
    map_from_above: Optional[tuple]
    clopen_count: int


def rational_spectrum(t: Tower, level: int) -> RationalSpectrumReport:
    system = sub_system(t)
    labels = system.labels[level]
    above = system.maps[level] if level < t.depth else None
    return RationalSpectrumReport(level, labels, above, 2 ** len(labels))
