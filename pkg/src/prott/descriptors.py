"""Descriptor grammar for pro-group builds.

Grammar (whitespace insignificant, product left-associative)::

    descriptor := term ( "x" term )*
    term       := atom | "(" descriptor ")"
    atom       := "Z/" INT | "S" INT | "Q8" | "Zp(" PRIME ")" | "FpInf(" PRIME ")"
                | "SL" INT "(Zp(" PRIME "))"      # reference-fact atom, not realizable

``Zp(p)`` is the procyclic p-adic factor, ``FpInf(p)`` the countable
elementary abelian pro-p factor. ``SL<N>(Zp(p))`` is accepted only so the
verdict table can answer from its reference facts; it cannot be realized.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

from .errors import BadPrime, DescriptorSyntaxError, UnknownAtom
from .groups import FiniteGroup, cyclic_group, quaternion_group, symmetric_group


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class FinAtom:
    """A finite atom: kind 'Z' (cyclic n), 'S' (symmetric n), or 'Q8'."""

    kind: str
    n: int = 0

    def group(self) -> FiniteGroup:
        if self.kind == "Z":
            return cyclic_group(self.n)
        if self.kind == "S":
            return symmetric_group(self.n)
        return quaternion_group()

    def text(self) -> str:
        if self.kind == "Z":
            return f"Z/{self.n}"
        if self.kind == "S":
            return f"S{self.n}"
        return "Q8"


@dataclass(frozen=True)
class ZpAtom:
    p: int

    def text(self) -> str:
        return f"Zp({self.p})"


@dataclass(frozen=True)
class ElemAbInfAtom:
    p: int

    def text(self) -> str:
        return f"FpInf({self.p})"


@dataclass(frozen=True)
class SLRefAtom:
    """Reference-fact atom SL_N over the p-adic integers; lookup only."""

    n: int
    p: int

    def text(self) -> str:
        return f"SL{self.n}(Zp({self.p}))"


Atom = Union[FinAtom, ZpAtom, ElemAbInfAtom, SLRefAtom]


@dataclass(frozen=True)
class ProDescriptor:
    """A product of atoms; a single atom is a one-factor product."""

    factors: tuple

    def text(self) -> str:
        return " x ".join(f.text() for f in self.factors)

    @property
    def is_abelian(self) -> bool:
        for f in self.factors:
            if isinstance(f, SLRefAtom):
                return False
            if isinstance(f, FinAtom) and not f.group().is_abelian:
                return False
        return True

    @property
    def has_infinite_atom(self) -> bool:
        return any(isinstance(f, (ZpAtom, ElemAbInfAtom, SLRefAtom)) for f in self.factors)

    def zp_primes(self) -> list:
        return [f.p for f in self.factors if isinstance(f, ZpAtom)]

    def elemab_primes(self) -> list:
        return [f.p for f in self.factors if isinstance(f, ElemAbInfAtom)]

    def fin_atoms(self) -> list:
        return [f for f in self.factors if isinstance(f, FinAtom)]

    def __str__(self) -> str:
        return self.text()


def descriptor(*atoms) -> ProDescriptor:
    return ProDescriptor(tuple(atoms))


_TOKEN = re.compile(
    r"\s*(?:(?P<prod>x)|(?P<lpar>\()|(?P<rpar>\))"
    r"|(?P<zp>Zp\(\s*(?P<zp_n>\d+)\s*\))"
    r"|(?P<fpinf>FpInf\(\s*(?P<fp_n>\d+)\s*\))"
    r"|(?P<sl>SL(?P<sl_n>\d+)\(\s*Zp\(\s*(?P<sl_p>\d+)\s*\)\s*\))"
    r"|(?P<cyc>Z/(?P<cyc_n>\d+))"
    r"|(?P<sym>S(?P<sym_n>\d+))"
    r"|(?P<q8>Q8)"
    r"|(?P<word>[A-Za-z_][A-Za-z0-9_/]*))"
)


def _tokenize(text: str) -> list:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == m.start():
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            raise DescriptorSyntaxError(f"unexpected character {stripped[0]!r}",
                                        len(text) - len(stripped))
        at = m.start() + (len(m.group(0)) - len(m.group(0).lstrip()))
        if m.lastgroup is None:
            pos = m.end()
            continue
        if m.group("word"):
            raise UnknownAtom(f"unknown atom {m.group('word')!r}", at)
        tokens.append((m, at))
        pos = m.end()
    return tokens


def parse_descriptor(text: str) -> ProDescriptor:
    """Parse descriptor text; errors carry byte offsets."""
    tokens = _tokenize(text)
    pos = 0

    def need_prime(value: str, offset: int) -> int:
        p = int(value)
        if not is_prime(p):
            raise BadPrime(f"{p} is not prime", offset)
        return p

    def parse_product(depth: int) -> list:
        nonlocal pos
        factors = parse_term(depth)
        while pos < len(tokens) and tokens[pos][0].group("prod"):
            pos += 1
            factors.extend(parse_term(depth))
        return factors

    def parse_term(depth: int) -> list:
        nonlocal pos
        if pos >= len(tokens):
            raise DescriptorSyntaxError("unexpected end of descriptor", len(text))
        m, at = tokens[pos]
        if m.group("lpar"):
            pos += 1
            inner = parse_product(depth + 1)
            if pos >= len(tokens) or not tokens[pos][0].group("rpar"):
                raise DescriptorSyntaxError("missing ')'", at)
            pos += 1
            return inner
        if m.group("zp"):
            pos += 1
            return [ZpAtom(need_prime(m.group("zp_n"), at))]
        if m.group("fpinf"):
            pos += 1
            return [ElemAbInfAtom(need_prime(m.group("fp_n"), at))]
        if m.group("sl"):
            pos += 1
            nval = int(m.group("sl_n"))
            if nval < 1:
                raise DescriptorSyntaxError("SL index must be >= 1", at)
            return [SLRefAtom(nval, need_prime(m.group("sl_p"), at))]
        if m.group("cyc"):
            pos += 1
            nval = int(m.group("cyc_n"))
            if nval < 1:
                raise DescriptorSyntaxError("cyclic order must be >= 1", at)
            return [FinAtom("Z", nval)]
        if m.group("sym"):
            pos += 1
            nval = int(m.group("sym_n"))
            if not 1 <= nval <= 5:
                raise DescriptorSyntaxError("symmetric atoms supported for S1..S5", at)
            return [FinAtom("S", nval)]
        if m.group("q8"):
            pos += 1
            return [FinAtom("Q", 0)]
        raise DescriptorSyntaxError("expected an atom", at)

    factors = parse_product(0)
    if pos != len(tokens):
        raise DescriptorSyntaxError("trailing input", tokens[pos][1])
    return ProDescriptor(tuple(factors))
