"""m-adic truncations of the polynomial modules on both sides.

The Hecke-side module k[X] (x) Lambda(theta) is completed at the orbit of
the parameter tuple a: an element stores, per orbit point b, a
super-polynomial in the shifted variables X_r - b_r with every monomial of
total shifted degree >= N dropped.  Polynomials and theta act within a
component; T_r mixes a component with its swap.  The KLR side completes at
the origin of each label component, so truncation there is plain total
degree truncation and the exact action from klr_core is reused.

Division happens in exactly two shapes.  Dividing by a unit germ (nonzero
constant term at the expansion point) expands a geometric series; dividing
by X_r - X_{r+1} on a component whose expansion point has equal r and r+1
coordinates is exact polynomial division, and a nonzero remainder is an
internal error.  Operators built from division (the Demazure summand of
T_r) are computed at the guard order N + l*d and truncated to N on output,
so the loss of one order per exact division never reaches the reported
window.

The q-variant uses the same orbit-summed component structure as the
degenerate one; Laurent generators X_r^{-1} become unit-germ series since
0 is not an eligible coordinate there.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations as iter_permutations

from .errors import (
    InternalError,
    InvalidParam,
    NotInvertible,
    RingMismatch,
)
from .hecke_core import HeckeAlgebra
from .klr_core import KLRAlgebra
from .params import ParamSet, parse_scalar
from .permutations import Permutation
from .superrings import (
    SuperPoly,
    div_diff_with_remainder,
    ext_subsets,
    sym_act_klr,
)

_ONE = Fraction(1)


def orbit(a) -> list[tuple]:
    """All distinct permutations of a, in lexicographic order."""
    pts = {tuple(parse_scalar(x) for x in p) for p in iter_permutations(tuple(a))}
    return sorted(pts)


def series_inverse(f: SuperPoly, N: int) -> SuperPoly:
    """Inverse of f modulo total degree N, where f is written in shifted
    variables (so its constant term is its value at the expansion point)."""
    c0 = f.constant_term()
    if not c0:
        raise NotInvertible(f"constant term of {f!r} vanishes at the expansion point")
    g = f.scale(_ONE / c0).truncate_above(N)
    one = SuperPoly.one(f.kind, f.d, label=f.label)
    h = one - g
    out = one
    power = h
    steps = 0
    while not power.is_zero():
        out = out + power
        power = (power * h).truncate_above(N)
        steps += 1
        if steps > N + f.d + 1:
            raise InternalError("geometric series failed to terminate")
    return out.scale(_ONE / c0).truncate_above(N)


def _x_power_local(d: int, kind: str, r: int, e: int, b_r, N: int) -> SuperPoly:
    """X_r^e re-expanded at the point coordinate b_r, modulo degree N."""
    base = SuperPoly.var(kind, d, r) + SuperPoly.const(kind, d, b_r)
    if e < 0:
        if not b_r:
            raise NotInvertible(f"X_{r}^{e} has no expansion at coordinate 0")
        base = series_inverse(base, N)
        e = -e
    out = SuperPoly.one(kind, d)
    for _ in range(e):
        out = (out * base).truncate_above(N)
    return out


@dataclass
class TruncatedElem:
    """Element of a completed module at truncation order N.

    components maps an orbit point (Hecke side, polynomials in the shifted
    variables) or a label tuple (KLR side) to a SuperPoly; absent keys are
    zero.  ps carries the parameter set when the element is meant to be
    acted on.
    """

    side: str
    d: int
    order: int
    components: dict = field(default_factory=dict)
    ps: ParamSet | None = None

    def __post_init__(self):
        if self.side not in ("hecke", "klr"):
            raise InvalidParam(f"unknown side {self.side!r}")
        clean = {}
        for key, f in self.components.items():
            g = f.truncate_above(self.order)
            if not g.is_zero():
                clean[tuple(key)] = g
        self.components = clean

    def is_zero(self) -> bool:
        return not self.components

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncatedElem):
            return NotImplemented
        return (
            self.side == other.side
            and self.order == other.order
            and self.components == other.components
        )

    def component(self, key) -> SuperPoly | None:
        return self.components.get(tuple(key))

    def add(self, other: "TruncatedElem", c=_ONE) -> "TruncatedElem":
        if self.side != other.side:
            raise RingMismatch("cannot add across sides")
        order = min(self.order, other.order)
        acc = {k: f for k, f in self.components.items()}
        for k, f in other.components.items():
            g = acc.get(k)
            acc[k] = g + f.scale(c) if g is not None else f.scale(c)
        return TruncatedElem(self.side, self.d, order, acc, self.ps or other.ps)

    def scale(self, c) -> "TruncatedElem":
        if not c:
            return TruncatedElem(self.side, self.d, self.order, {}, self.ps)
        return TruncatedElem(
            self.side, self.d, self.order,
            {k: f.scale(c) for k, f in self.components.items()}, self.ps,
        )

    def truncated(self, N: int) -> "TruncatedElem":
        return TruncatedElem(self.side, self.d, min(self.order, N), self.components, self.ps)

    def vector(self) -> dict:
        """Flatten to a sparse vector keyed by (component, exponents, odd part)."""
        out = {}
        for key, f in self.components.items():
            for (exps, ext), c in f.coeffs.items():
                out[(key, exps, ext)] = c
        return out


def truncate(f: SuperPoly, b, N: int, ps: ParamSet | None = None) -> TruncatedElem:
    """Re-expand f around the point b and drop shifted degree >= N."""
    if f.kind == "PR":
        if any(parse_scalar(x) for x in b):
            raise InvalidParam("KLR components expand at the origin only")
        comp = f.truncate_above(N)
        return TruncatedElem("klr", f.d, N, {f.label: comp}, ps)
    pt = tuple(parse_scalar(x) for x in b)
    if len(pt) != f.d:
        raise InvalidParam(f"point has length {len(pt)}, expected {f.d}")
    acc = SuperPoly.zero("P", f.d)
    for (exps, ext), c in f.coeffs.items():
        term = SuperPoly.monomial("P", f.d, (0,) * f.d, ext, c)
        for r, e in enumerate(exps, start=1):
            if e:
                term = (term * _x_power_local(f.d, "P", r, e, pt[r - 1], N)).truncate_above(N)
        acc = acc + term
    return TruncatedElem("hecke", f.d, N, {pt: acc}, ps)


def invert_series(t: TruncatedElem) -> TruncatedElem:
    """Componentwise series inverse at the element's truncation order."""
    out = {k: series_inverse(f, t.order) for k, f in t.components.items()}
    return TruncatedElem(t.side, t.d, t.order, out, t.ps)


def hecke_unit(ps: ParamSet, b, N: int) -> TruncatedElem:
    pt = tuple(parse_scalar(x) for x in b)
    return TruncatedElem("hecke", ps.d, N, {pt: SuperPoly.one("P", ps.d)}, ps)


def klr_unit(ps: ParamSet, label, N: int) -> TruncatedElem:
    lab = tuple(parse_scalar(x) for x in label)
    return TruncatedElem("klr", ps.d, N, {lab: SuperPoly.one("PR", ps.d, label=lab)}, ps)


def klr_wrap(ps: ParamSet, me: dict, N: int) -> TruncatedElem:
    """Wrap a KLR module element (label -> SuperPoly) as a TruncatedElem."""
    return TruncatedElem("klr", ps.d, N, dict(me), ps)


# -- completed Hecke action ------------------------------------------------------

_hecke_cache: dict = {}
_klr_cache: dict = {}


def _hecke_alg(ps: ParamSet) -> HeckeAlgebra:
    alg = _hecke_cache.get(ps)
    if alg is None:
        alg = HeckeAlgebra.from_params(ps)
        _hecke_cache[ps] = alg
    return alg


def _klr_alg(ps: ParamSet) -> KLRAlgebra:
    alg = _klr_cache.get(ps)
    if alg is None:
        alg = KLRAlgebra(ps)
        _klr_cache[ps] = alg
    return alg


def _twisted_swap(d: int, f: SuperPoly, r: int, delta) -> SuperPoly:
    """Transport of the twisted s_r action to shifted coordinates: swap the
    r and r+1 exponents and replace theta_r by
    theta_r + (delta + X_r - X_{r+1}) theta_{r+1}, where delta is the
    difference of the r and r+1 coordinates of the TARGET expansion point."""
    acc: dict = {}

    def put(key, c):
        s = acc.get(key, 0) + c
        if s:
            acc[key] = s
        else:
            acc.pop(key, None)

    for (exps, ext), c in f.coeffs.items():
        e = list(exps)
        e[r - 1], e[r] = e[r], e[r - 1]
        e = tuple(e)
        put((e, ext), c)
        if r in ext and r + 1 not in ext:
            ext2 = tuple(sorted([j for j in ext if j != r] + [r + 1]))
            if delta:
                put((e, ext2), c * delta)
            up = list(e)
            up[r - 1] += 1
            put(((tuple(up)), ext2), c)
            dn = list(e)
            dn[r] += 1
            put(((tuple(dn)), ext2), -c)
    return SuperPoly("P", d, acc)


def _swap_point(pt: tuple, r: int) -> tuple:
    out = list(pt)
    out[r - 1], out[r] = out[r], out[r - 1]
    return tuple(out)


class _CompletedHecke:
    """Letter-by-letter action on component dicts at a fixed guard order."""

    def __init__(self, ps: ParamSet):
        self.ps = ps
        self.alg = _hecke_alg(ps)
        self.d = ps.d

    def act_poly(self, p: SuperPoly, cs: dict, W: int) -> dict:
        out = {}
        for pt, f in cs.items():
            loc = truncate(p, pt, W).components.get(pt)
            if loc is None:
                continue
            g = (loc * f).truncate_above(W)
            if not g.is_zero():
                out[pt] = g
        return out

    def act_sym(self, r: int, cs: dict, W: int) -> dict:
        out = {}
        for pt, f in cs.items():
            tgt = _swap_point(pt, r)
            g = _twisted_swap(self.d, f, r, tgt[r - 1] - tgt[r]).truncate_above(W)
            if g.is_zero():
                continue
            prev = out.get(tgt)
            out[tgt] = prev + g if prev is not None else g
        return out

    def act_dem(self, r: int, cs: dict, W: int) -> dict:
        out = {}
        targets = set(cs) | {_swap_point(pt, r) for pt in cs}
        zero = SuperPoly.zero("P", self.d)
        for tgt in targets:
            f = cs.get(tgt, zero)
            g = cs.get(_swap_point(tgt, r))
            sw = (
                _twisted_swap(self.d, g, r, tgt[r - 1] - tgt[r])
                if g is not None
                else zero
            )
            num = (f - sw).truncate_above(W)
            if num.is_zero():
                continue
            delta = tgt[r - 1] - tgt[r]
            if delta == 0:
                quo, rem = div_diff_with_remainder(num, r)
                if not rem.is_zero():
                    raise InternalError(
                        f"Demazure numerator at {tgt} not divisible: remainder {rem!r}"
                    )
            else:
                divisor = (
                    SuperPoly.const("P", self.d, delta)
                    + SuperPoly.var("P", self.d, r)
                    - SuperPoly.var("P", self.d, r + 1)
                )
                quo = (num * series_inverse(divisor, W)).truncate_above(W)
            if not quo.is_zero():
                out[tgt] = quo
        return out

    def act_T(self, r: int, cs: dict, W: int) -> dict:
        sym = self.act_sym(r, cs, W)
        dem = self.act_dem(r, cs, W)
        out: dict = {}
        if self.alg.variant == "degenerate":
            for pt, f in sym.items():
                self._put(out, pt, f)
            for pt, f in dem.items():
                self._put(out, pt, -f)
        else:
            q = self.alg.q
            for pt, f in sym.items():
                self._put(out, pt, f.scale(q))
            for pt, f in dem.items():
                x_next = SuperPoly.var("P", self.d, r + 1) + SuperPoly.const(
                    "P", self.d, pt[r]
                )
                self._put(out, pt, (x_next * f).truncate_above(W).scale(-(q - 1)))
        return out

    def act_invT(self, r: int, cs: dict, W: int) -> dict:
        q = self.alg.q
        out = self.act_T(r, cs, W)
        for pt, f in cs.items():
            self._put(out, pt, f.scale(-(q - 1)))
        inv = _ONE / q
        return {pt: f.scale(inv) for pt, f in out.items() if not f.is_zero()}

    @staticmethod
    def _put(acc: dict, pt, f: SuperPoly):
        prev = acc.get(pt)
        g = prev + f if prev is not None else f
        if g.is_zero():
            acc.pop(pt, None)
        else:
            acc[pt] = g

    def act_letter(self, letter, cs: dict, W: int) -> dict:
        tag = letter[0]
        if tag == "poly":
            return self.act_poly(letter[1], cs, W)
        if tag == "T":
            return self.act_T(letter[1], cs, W)
        if tag == "invT":
            return self.act_invT(letter[1], cs, W)
        if tag == "theta":
            th = SuperPoly.ext("P", self.d, 1)
            out = {}
            for pt, f in cs.items():
                g = th * f
                if not g.is_zero():
                    out[pt] = g
            return out
        if tag == "xi":
            return self.act_letters(self.alg.xi_word(letter[1]), cs, W)
        if tag == "idem":
            pt = tuple(parse_scalar(x) for x in letter[1])
            return {p: f for p, f in cs.items() if p == pt}
        raise InvalidParam(f"unknown letter {letter!r}")

    def act_letters(self, letters, cs: dict, W: int) -> dict:
        cur = cs
        for letter in reversed(list(letters)):
            if not cur:
                return {}
            cur = self.act_letter(letter, cur, W)
        return cur


def completed_sym_act(v: TruncatedElem, r: int) -> TruncatedElem:
    """The transported action of s_r on a truncated element (both sides)."""
    if v.side == "hecke":
        out = {}
        for pt, f in v.components.items():
            tgt = _swap_point(pt, r)
            g = _twisted_swap(v.d, f, r, tgt[r - 1] - tgt[r])
            prev = out.get(tgt)
            out[tgt] = prev + g if prev is not None else g
        return TruncatedElem("hecke", v.d, v.order, out, v.ps)
    out = {}
    for _lab, f in v.components.items():
        g = sym_act_klr(r, f)
        prev = out.get(g.label)
        out[g.label] = prev + g if prev is not None else g
    return TruncatedElem("klr", v.d, v.order, out, v.ps)


def completed_act(elem, v: TruncatedElem, N: int) -> TruncatedElem:
    """Act by an algebra element (a basis dict or a letter list) on a
    truncated module element, reporting the result modulo degree N.

    Hecke-side operators that divide are evaluated at the guard order
    N + l*d internally; the KLR action is division-free so it runs exactly
    and is truncated at the end.
    """
    if v.ps is None:
        raise InvalidParam("the module element carries no parameter set")
    ps = v.ps
    if v.side == "hecke":
        ctx = _CompletedHecke(ps)
        W = N + len(ps.Q) * ps.d
        acc: dict = {}
        if isinstance(elem, dict):
            terms = [(ctx.alg.letters_of_key(key), c) for key, c in elem.items()]
        else:
            terms = [(list(elem), _ONE)]
        for letters, c in terms:
            cur = ctx.act_letters(letters, v.components, W)
            for pt, f in cur.items():
                ctx._put(acc, pt, f.scale(c))
        return TruncatedElem("hecke", v.d, N, acc, ps)
    alg = _klr_alg(ps)
    me = dict(v.components)
    if isinstance(elem, dict):
        img = alg.act_elem(elem, me)
    else:
        img = alg.act_letters(list(elem), me)
    return TruncatedElem("klr", v.d, N, img, ps)


# -- freeness certificate --------------------------------------------------------


def completed_basis_check(ps: ParamSet, N: int) -> list[tuple[str, bool, str]]:
    """Certify that the actions of {T_w xi^b} on each orbit-point unit have
    full column rank in the truncated module: one (check_id, ok, witness)
    triple per source component."""
    from .linalg import LinSolver

    checks = []
    for b0 in orbit(ps.a):
        v0 = hecke_unit(ps, b0, N)
        solver = LinSolver()
        n_cols = 0
        first_dependent = None
        for w in Permutation.all(ps.d):
            for bset in ext_subsets(ps.d):
                key = ((0,) * ps.d, w, bset)
                img = completed_act({key: _ONE}, v0, N)
                n_cols += 1
                if not solver.add_column(img.vector()) and first_dependent is None:
                    first_dependent = (w, bset)
        ok = solver.rank == n_cols
        if ok:
            witness = f"rank {solver.rank} of {n_cols}"
        else:
            witness = (
                f"rank {solver.rank} of {n_cols}; first dependent column "
                f"T_{first_dependent[0]!r} xi^{first_dependent[1]}"
            )
        label = ",".join(str(x) for x in b0)
        checks.append((f"completed-basis@({label})", ok, witness))
    return checks


def act_exact_then_truncate(ps: ParamSet, elem, f: SuperPoly, N: int) -> TruncatedElem:
    """Oracle path: the uncompleted action on an exact polynomial followed
    by truncation over the whole orbit."""
    alg = _hecke_alg(ps)
    if isinstance(elem, dict):
        img = alg.act(elem, f)
    else:
        img = alg.act_letters(list(elem), f)
    out = TruncatedElem("hecke", ps.d, N, {}, ps)
    for b in orbit(ps.a):
        out = out.add(truncate(img, b, N, ps))
    return out


def diagonal_embed(ps: ParamSet, f: SuperPoly, N: int) -> TruncatedElem:
    """Embed an exact polynomial as the sum of its expansions over the orbit."""
    out = TruncatedElem("hecke", ps.d, N, {}, ps)
    for b in orbit(ps.a):
        out = out.add(truncate(f, b, N, ps))
    return out
