"""Exception hierarchy. Every error carries a stable machine-readable code."""

from __future__ import annotations


class ProttError(Exception):
    """Base class; ``code`` is stable across releases for scripting."""

    code = "error"

    def __init__(self, message: str = ""):
        super().__init__(message or self.__doc__)


class NonAssociative(ProttError):
    """Multiplication table is not associative."""

    code = "non-associative"


class NoIdentity(ProttError):
    """Multiplication table has no two-sided identity."""

    code = "no-identity"


class NoInverse(ProttError):
    """Some element has no two-sided inverse."""

    code = "no-inverse"


class UnsupportedOrder(ProttError):
    """Requested construction outside the supported range."""

    code = "unsupported-order"


class OrderBoundExceeded(ProttError):
    """Group order exceeds the configured enumeration bound."""

    code = "order-bound-exceeded"


class NotNormal(ProttError):
    """Subgroup is not normal in the ambient group."""

    code = "not-normal"


class NotAPGroup(ProttError):
    """Group order is not a prime power for the given prime."""

    code = "not-a-p-group"


class DepthTooLarge(ProttError):
    """A tower level would exceed the group-order cap."""

    code = "depth-too-large"


class IncompatibleChain(ProttError):
    """Explicit subgroup chain violates step compatibility."""

    code = "incompatible-chain"


class LevelOutOfRange(ProttError):
    """Level index outside the tower's depth."""

    code = "level-out-of-range"


class InducedMapNotSurjective(ProttError):
    """An induced transition map failed the surjectivity assertion."""

    code = "induced-map-not-surjective"


class NotPGroupQuotient(ProttError):
    """A relative quotient is not a p-group."""

    code = "not-p-group-quotient"


class NotNested(ProttError):
    """Expected a level-wise nested pair of threads."""

    code = "not-nested"


class NotAbelian(ProttError):
    """Operation requires an abelian tower."""

    code = "not-abelian"


class NotPSubnormal(ProttError):
    """Pair is not pro-p-subnormal; blueshift bounds are undefined."""

    code = "not-p-subnormal"


class NotSubconjugate(ProttError):
    """No conjugate of the source lies inside the target."""

    code = "not-subconjugate"


class BadHeight(ProttError):
    """Heights start at 1 (or are the infinite flag)."""

    code = "bad-height"


class UnknownNode(ProttError):
    """Node id not present in the graph."""

    code = "unknown-node"


class HorizonTooShallow(ProttError):
    """Derivative analysis needs at least two levels of data."""

    code = "horizon-too-shallow"


class DescriptorSyntaxError(ProttError):
    """Descriptor text failed to parse; ``offset`` is a byte position."""

    code = "syntax-error"

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


class UnknownAtom(DescriptorSyntaxError):
    """Unrecognized atom name in a descriptor."""

    code = "unknown-atom"


class BadPrime(DescriptorSyntaxError):
    """Atom argument must be a prime number."""

    code = "bad-prime"


class UnsupportedAtom(ProttError):
    """Atom is reference-only and cannot be realized as a tower."""

    code = "unsupported-atom"
