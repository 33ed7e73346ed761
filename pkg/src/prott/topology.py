"""Finite-approximation topology of subgroup-class spaces.

Horizon policy: finite data certifies per-point fiber behaviour only up
to the top level; space-level conclusions (derivative rank,
scatteredness, countability) are drawn only when the realizing
descriptor supplies a certificate. Without one, per-point statuses are
still reported but the space rank degrades to truncation-unknown.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from math import gcd
from typing import Optional

from .descriptors import ElemAbInfAtom, FinAtom, ProDescriptor, SLRefAtom, ZpAtom
from .errors import HorizonTooShallow, LevelOutOfRange
from .towers import INF, SubgroupThread, Tower, sub_system, thread_class_at

TRUNCATION_UNKNOWN = "truncation-unknown"
UNSUPPORTED = "unsupported"

ISOLATED_AT_HORIZON = "isolated-at-horizon"
FATTENING = "fattening"
STABLE_CERTIFIED = "stable-certified"


# ---------------------------------------------------------------------------
# inverse systems of finite sets


@dataclass(frozen=True)
class FiniteInvSystem:
    """Levels of finite sets with surjections X_{i+1} -> X_i."""

    labels: tuple  # labels[i][x] for x in X_i
    maps: tuple    # maps[i][x] = image in X_i of x in X_{i+1}

    @property
    def depth(self) -> int:
        return len(self.labels) - 1

    def size(self, i: int) -> int:
        return len(self.labels[i])

    def image_chain(self, x: int) -> list:
        """Images of a top-level point at every level, top to bottom."""
        chain = [x]
        for i in range(self.depth - 1, -1, -1):
            chain.append(self.maps[i][chain[-1]])
        chain.reverse()
        return chain

    def fiber_history(self, x: int) -> list:
        """Sizes of the step fibers over the images of x, levels 0..N-1."""
        chain = self.image_chain(x)
        out = []
        for i in range(self.depth):
            target = chain[i]
            out.append(sum(1 for y in range(self.size(i + 1))
                           if self.maps[i][y] == target))
        return out


def inv_system_of_sub(t: Tower) -> FiniteInvSystem:
    """Conjugacy-class sets of the tower levels with induced surjections."""
    system = sub_system(t)
    return FiniteInvSystem(system.labels, system.maps)


# ---------------------------------------------------------------------------
# descriptor certificates


@dataclass(frozen=True)
class Certificate:
    """Descriptor-derived stability knowledge for a realized tower.

    kind "scattered": the class space embeds in (finite set) x (chain
    compactification)^r; ``patterns`` maps each top class to the set of
    procyclic coordinates sitting in the unresolved tail bucket.
    kind "perfect": the class space has no isolated points at all.
    """

    kind: str  # "scattered" | "perfect"
    r: int = 0
    patterns: Optional[tuple] = None  # per top class: frozenset of Zp coords
    zp_primes: tuple = ()


def certificate_for(t: Tower) -> Optional[Certificate]:
    d = t.descriptor
    if d is None:
        return None
    if any(isinstance(a, SLRefAtom) for a in d.factors):
        return None
    if all(isinstance(a, FinAtom) for a in d.factors):
        n_classes = t.lattice(t.depth).num_classes
        return Certificate("scattered", 0, tuple(frozenset() for _ in range(n_classes)))
    if not d.is_abelian:
        return None
    if d.elemab_primes():
        return Certificate("perfect")
    zp = d.zp_primes()
    if len(set(zp)) != len(zp):
        return None
    fin_order = 1
    for a in d.fin_atoms():
        fin_order *= a.group().order
    if any(gcd(fin_order, p) != 1 for p in zp):
        return None
    # coprime orders force every subgroup to split across the factors,
    # so the per-factor projections identify each class exactly
    lat = t.lattice(t.depth)
    zp_factor_indices = [i for i, a in enumerate(d.factors) if isinstance(a, ZpAtom)]
    patterns = []
    for rep in lat.class_reps:
        tail = set()
        for slot, fi in enumerate(zp_factor_indices):
            comps = {t.decode(t.depth, x)[fi] for x in rep.members()}
            if comps == {0}:
                tail.add(slot)
        patterns.append(frozenset(tail))
    return Certificate("scattered", len(zp_factor_indices), tuple(patterns),
                       tuple(zp))


# ---------------------------------------------------------------------------
# Cantor-Bendixson analysis at a horizon


@dataclass(frozen=True)
class PointStatus:
    label: str
    status: str
    fiber_history: tuple
    certified_rank: Optional[object] = None  # int, INF, or None


@dataclass(frozen=True)
class CBReport:
    statuses: tuple
    surviving: tuple       # label sets per derivative iteration
    rank_of_space: object  # int, INF, or TRUNCATION_UNKNOWN
    certificate_kind: Optional[str]
    max_rank_labels: tuple = ()

    def status_of(self, label: str) -> PointStatus:
        for s in self.statuses:
            if s.label == label:
                return s
        raise LevelOutOfRange(f"no point labelled {label!r}")


def cb_analyze(s: FiniteInvSystem, certificate: Optional[Certificate] = None) -> CBReport:
    """Classify top-level points by fiber behaviour and, when certified,
    run the derivative iteration to a space rank.

    A point is isolated-at-horizon when its step fibers are singletons
    from some level through the top; otherwise it keeps fattening. A
    scattered certificate upgrades fattening points that are really
    single isolated points of the limit (truncation artifacts) to
    stable-certified, and drives the symbolic derivative: a class
    survives the k-th derivative exactly when at least k of its procyclic
    coordinates sit in the unresolved tail.
    """
    if s.depth < 2:
        raise HorizonTooShallow("need at least two levels of data")
    top = s.depth
    n_top = s.size(top)
    data_isolated = []
    histories = []
    for x in range(n_top):
        hist = s.fiber_history(x)
        histories.append(tuple(hist))
        data_isolated.append(hist[-1] == 1)

    statuses = []
    if certificate is None:
        for x in range(n_top):
            st = ISOLATED_AT_HORIZON if data_isolated[x] else FATTENING
            statuses.append(PointStatus(s.labels[top][x], st, histories[x]))
        return CBReport(tuple(statuses), (frozenset(s.labels[top]),),
                        TRUNCATION_UNKNOWN, None)

    if certificate.kind == "perfect":
        for x in range(n_top):
            assert not data_isolated[x], "perfect certificate contradicts the data"
            statuses.append(PointStatus(s.labels[top][x], FATTENING, histories[x], INF))
        all_labels = frozenset(s.labels[top])
        return CBReport(tuple(statuses), (all_labels, all_labels), INF, "perfect")

    patterns = certificate.patterns
    assert patterns is not None and len(patterns) == n_top
    for x in range(n_top):
        t_size = len(patterns[x])
        if t_size == 0:
            st = ISOLATED_AT_HORIZON if data_isolated[x] else STABLE_CERTIFIED
            statuses.append(PointStatus(s.labels[top][x], st, histories[x], 0))
        else:
            assert not data_isolated[x], "tail-bucket class cannot be isolated"
            statuses.append(PointStatus(s.labels[top][x], FATTENING, histories[x], t_size))
    surviving = []
    k = 0
    while True:
        alive = frozenset(s.labels[top][x] for x in range(n_top)
                          if len(patterns[x]) >= k)
        if not alive:
            break
        surviving.append(alive)
        k += 1
    rank = max((len(patterns[x]) for x in range(n_top)), default=0)
    max_labels = tuple(sorted(s.labels[top][x] for x in range(n_top)
                              if len(patterns[x]) == rank))
    return CBReport(tuple(statuses), tuple(surviving), rank, "scattered", max_labels)


@dataclass(frozen=True)
class IsolatedOpenReport:
    """Instance check: a certified isolated class must come from an open
    subgroup, i.e. its index sequence must stabilize in the data."""

    label: str
    certified_isolated: bool
    indices: tuple
    holds: bool


def isolated_implies_open_check(t: Tower, h: SubgroupThread) -> IsolatedOpenReport:
    system = inv_system_of_sub(t)
    report = cb_analyze(system, certificate_for(t))
    label = system.labels[t.depth][thread_class_at(h, t.depth)]
    st = report.status_of(label)
    indices = tuple(h.index_sequence())
    if st.certified_rank == 0:
        holds = len(indices) >= 2 and indices[-1] == indices[-2]
        return IsolatedOpenReport(label, True, indices, holds)
    return IsolatedOpenReport(label, False, indices, True)


# ---------------------------------------------------------------------------
# verdicts


@dataclass(frozen=True)
class Verdict:
    """Countability of the subgroup-class space and everything chained to
    it. Scatteredness, stratification, the local-to-global principle, and
    semi-Artinianness of the rational endomorphism ring all mirror
    countability; the telescope property holds unconditionally."""

    countable: str  # "yes" | "no" | "unknown"
    provenance: tuple

    @property
    def scattered(self) -> str:
        return self.countable

    @property
    def stratified(self) -> str:
        return self.countable

    @property
    def costratified(self) -> str:
        return self.countable

    @property
    def local_to_global(self) -> str:
        return self.countable

    @property
    def semi_artinian_rational_burnside(self) -> str:
        return self.countable

    @property
    def telescope_conjecture(self) -> str:
        return "yes"

    def as_dict(self) -> dict:
        return {
            "countable": self.countable,
            "scattered": self.scattered,
            "stratified": self.stratified,
            "costratified": self.costratified,
            "local_to_global": self.local_to_global,
            "semi_artinian_rational_burnside": self.semi_artinian_rational_burnside,
            "telescope_conjecture": self.telescope_conjecture,
            "provenance": list(self.provenance),
        }


SL_COUNTABILITY = {1: "yes", 2: "yes"}  # N >= 3: "no"


def _sl_lookup(n: int) -> str:
    return SL_COUNTABILITY.get(n, "no")


def countability_verdict(d: ProDescriptor) -> Verdict:
    """Decide countability of the subgroup-class space from the descriptor.

    Finite descriptors are trivially countable. Abelian descriptors are
    countable exactly when they are a finite part times procyclic factors
    at pairwise distinct primes (an infinite elementary abelian factor or
    a repeated prime rules it out). Special linear reference atoms answer
    from the lookup table. Anything else is reported unknown.
    """
    sl = [a for a in d.factors if isinstance(a, SLRefAtom)]
    if sl:
        if len(d.factors) == 1:
            a = sl[0]
            return Verdict(_sl_lookup(a.n),
                           (f"reference fact (not computed): SL{a.n} over the "
                            f"{a.p}-adic integers has a countable subgroup-class "
                            f"space iff the rank is 1 or 2",))
        return Verdict("unknown", ("reference atoms cannot be combined with "
                                   "other factors",))
    if not d.has_infinite_atom:
        return Verdict("yes", ("finite group: the subgroup-class space is finite",))
    if not d.is_abelian:
        return Verdict("unknown", ("no general criterion for non-abelian "
                                   "descriptors with infinite factors",))
    if d.elemab_primes():
        return Verdict("no", ("infinite elementary abelian factor: the subgroup "
                              "space contains a Cantor set",))
    zp = d.zp_primes()
    if len(set(zp)) != len(zp):
        return Verdict("no", ("repeated procyclic prime: uncountably many "
                              "closed subgroups up to conjugacy",))
    return Verdict("yes", ("abelian classification: finite part times procyclic "
                           "factors at pairwise distinct primes",))


def cb_rank_descriptor(d: ProDescriptor):
    """Derivative rank of the subgroup-class space for the coprime family
    (finite part, pairwise distinct procyclic primes, coprime orders):
    the number of procyclic factors. Finite descriptors have rank 0;
    everything else is unsupported."""
    if any(isinstance(a, SLRefAtom) for a in d.factors):
        return UNSUPPORTED
    if not d.has_infinite_atom:
        return 0
    if not d.is_abelian or d.elemab_primes():
        return UNSUPPORTED
    zp = d.zp_primes()
    if len(set(zp)) != len(zp):
        return UNSUPPORTED
    fin_order = 1
    for a in d.fin_atoms():
        fin_order *= a.group().order
    if any(gcd(fin_order, p) != 1 for p in zp):
        return UNSUPPORTED
    return len(zp)
