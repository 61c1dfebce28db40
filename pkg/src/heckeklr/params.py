"""Ground scalars, parameter sets and quivers.

Scalars are exact rationals (fractions.Fraction); they serialize as "p/q"
strings in lowest terms (plain "p" for integers).  A parameter set fixes

    variant : "degenerate" or "q"
    d       : number of strands / variables, d >= 1
    q       : deformation scalar, q-variant only, q not in {0, 1}
    Q       : cyclotomic parameters (Q_1, ..., Q_l), l >= 1
    a       : completion point (a_1, ..., a_d)
    I       : finite vertex set containing every Q_r and a_r

and derives the dimension vector nu_i = #{r : a_r = i} and the cyclotomic
weights Lambda_i = #{r : Q_r = i}.

The quiver on I has at most one arrow in each ordered pair and no loops:

    degenerate:  i -> j  iff  j = i + 1
    q-variant:   i -> j  iff  j = q * i   (0 is excluded from I)

This incidence is the one under which the crossing action
P_{i_r, i_{r+1}}(Y_r, Y_{r+1}) s_r matches the completed conversion
formulas exactly; see the conventions note in superrings.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterable, Iterator, Mapping

from .errors import InvalidParam

import re

_SCALAR_RE = re.compile(r"[+-]?\d+(/\d+)?")

Scalar = Fraction


def parse_scalar(text: str | int | Fraction) -> Scalar:
    """Parse "p/q" (or "p", or an int) into an exact rational."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    body = str(text).strip()
    if not _SCALAR_RE.fullmatch(body):
        raise InvalidParam(f"not an exact rational: {text!r}")
    try:
        return Fraction(body)
    except (ValueError, ZeroDivisionError) as exc:
        raise InvalidParam(f"not a rational scalar: {text!r}") from exc


def scalar_str(x: Scalar) -> str:
    """Serialize a scalar as "p/q" in lowest terms ("p" when integral)."""
    return str(x)


@dataclass(frozen=True)
class Quiver:
    """Loop-free quiver with arrow multiplicities in {0, 1}."""

    vertices: frozenset[Scalar]
    arrows: frozenset[tuple[Scalar, Scalar]]

    def h(self, i: Scalar, j: Scalar) -> int:
        """Number of arrows i -> j (0 or 1)."""
        return 1 if (i, j) in self.arrows else 0

    def has_edge(self, i: Scalar, j: Scalar) -> bool:
        return (i, j) in self.arrows


def build_quiver_degenerate(I: Iterable[Scalar]) -> Quiver:
    verts = frozenset(parse_scalar(i) for i in I)
    arrows = frozenset((i, j) for i in verts for j in verts if i != j and j + 1 == i)
    return Quiver(verts, arrows)


def build_quiver_q(I: Iterable[Scalar], q: Scalar) -> Quiver:
    q = parse_scalar(q)
    if q == 0 or q == 1:
        raise InvalidParam("q must differ from 0 and 1")
    verts = frozenset(parse_scalar(i) for i in I)
    if Fraction(0) in verts:
        raise InvalidParam("0 is not allowed as a vertex in the q-variant")
    arrows = frozenset((i, j) for i in verts for j in verts if i != j and i == q * j)
    return Quiver(verts, arrows)


def derive_multiplicities(
    a: Iterable[Scalar], Q: Iterable[Scalar], I: Iterable[Scalar]
) -> tuple[dict[Scalar, int], dict[Scalar, int]]:
    """Return (nu, Lambda): strand multiplicities of a and weights of Q over I."""
    Iset = [parse_scalar(i) for i in I]
    nu = {i: 0 for i in Iset}
    lam = {i: 0 for i in Iset}
    for x in a:
        x = parse_scalar(x)
        if x not in nu:
            raise InvalidParam(f"completion entry {x} is not a vertex of I")
        nu[x] += 1
    for x in Q:
        x = parse_scalar(x)
        if x not in lam:
            raise InvalidParam(f"cyclotomic parameter {x} is not a vertex of I")
        lam[x] += 1
    return nu, lam


@dataclass(frozen=True)
class ParamSet:
    variant: str
    d: int
    Q: tuple[Scalar, ...]
    a: tuple[Scalar, ...]
    I: frozenset[Scalar]
    q: Scalar | None = None
    _quiver: Quiver = field(init=False, repr=False, compare=False, default=None)

    def __post_init__(self) -> None:
        self.validate()
        object.__setattr__(self, "_quiver", self._build_quiver())

    # -- validation ------------------------------------------------------

    def validate(self) -> None:
        if self.variant not in ("degenerate", "q"):
            raise InvalidParam(f"unknown variant {self.variant!r}")
        if not isinstance(self.d, int) or self.d < 1:
            raise InvalidParam("d must be an integer >= 1")
        if len(self.Q) < 1:
            raise InvalidParam("Q must have at least one entry")
        if len(self.a) != self.d:
            raise InvalidParam("a must have exactly d entries")
        if self.variant == "q":
            if self.q is None:
                raise InvalidParam("q-variant needs the scalar q")
            if self.q == 0 or self.q == 1:
                raise InvalidParam("q must differ from 0 and 1")
            if Fraction(0) in self.I:
                raise InvalidParam("0 is not allowed in I for the q-variant")
        else:
            if self.q is not None:
                raise InvalidParam("degenerate variant takes no q")
        for x in self.Q:
            if x not in self.I:
                raise InvalidParam(f"Q entry {x} outside I")
        for x in self.a:
            if x not in self.I:
                raise InvalidParam(f"a entry {x} outside I")

    # -- derived data ----------------------------------------------------

    @property
    def ell(self) -> int:
        return len(self.Q)

    @property
    def nu(self) -> dict[Scalar, int]:
        return derive_multiplicities(self.a, self.Q, self.I)[0]

    @property
    def lam(self) -> dict[Scalar, int]:
        return derive_multiplicities(self.a, self.Q, self.I)[1]

    def _build_quiver(self) -> Quiver:
        if self.variant == "degenerate":
            return build_quiver_degenerate(self.I)
        return build_quiver_q(self.I, self.q)

    @property
    def quiver(self) -> Quiver:
        return self._quiver

    def labels(self) -> Iterator[tuple[Scalar, ...]]:
        """All idempotent labels I^d in a fixed sorted order."""
        verts = sorted(self.I)
        return iter(product(verts, repeat=self.d))

    # -- serialization ---------------------------------------------------

    @staticmethod
    def make(
        variant: str,
        d: int,
        Q: Iterable,
        a: Iterable,
        I: Iterable | None = None,
        q=None,
    ) -> "ParamSet":
        Qt = tuple(parse_scalar(x) for x in Q)
        at = tuple(parse_scalar(x) for x in a)
        if I is None:
            Iset = frozenset(Qt) | frozenset(at)
        else:
            Iset = frozenset(parse_scalar(x) for x in I)
        qq = None if q is None else parse_scalar(q)
        return ParamSet(variant=variant, d=d, Q=Qt, a=at, I=Iset, q=qq)

    @staticmethod
    def from_json(text: str | Mapping) -> "ParamSet":
        data = json.loads(text) if isinstance(text, str) else dict(text)
        unknown = set(data) - {"variant", "d", "q", "Q", "a", "I"}
        if unknown:
            raise InvalidParam(f"unknown parameter keys: {sorted(unknown)}")
        for key in ("variant", "d", "Q", "a", "I"):
            if key not in data:
                raise InvalidParam(f"missing parameter key: {key}")
        return ParamSet.make(
            variant=data["variant"],
            d=data["d"],
            Q=data["Q"],
            a=data["a"],
            I=data["I"],
            q=data.get("q"),
        )

    def to_json(self) -> str:
        payload = {
            "variant": self.variant,
            "d": self.d,
            "Q": [scalar_str(x) for x in self.Q],
            "a": [scalar_str(x) for x in self.a],
            "I": sorted(scalar_str(x) for x in self.I),
        }
        if self.q is not None:
            payload["q"] = scalar_str(self.q)
        return json.dumps(payload, sort_keys=True)

    def as_dict(self) -> dict:
        return json.loads(self.to_json())
