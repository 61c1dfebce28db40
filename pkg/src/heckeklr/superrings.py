"""Super-polynomial rings and the twisted symmetric-group calculus.

Three sparse rings over exact rationals, all with d even variables and d
odd (square-zero, anticommuting) generators:

    kind "P"  : k[X_1..X_d] (x) Lambda(theta_1..theta_d)
    kind "Pl" : Laurent version, X-exponents in Z
    kind "PR" : k[Y_1..Y_d] (x) Lambda(Omega_1..Omega_d) attached to one
                idempotent label i in I^d (the label travels with the
                element and changes under the symmetric action)

A monomial is keyed by (exponent tuple, strictly increasing tuple of odd
indices); coefficients are fractions.Fraction and zeros are never stored.

Symmetric action.  s_r swaps the r-th and (r+1)-st even variables.  On the
odd generators:

    "P"/"Pl":  s_r(theta_r) = theta_r + (X_r - X_{r+1}) theta_{r+1},
               every other theta_j is fixed;
    "PR", equal labels i_r = i_{r+1}:
               s_r(Omega_r) = Omega_r + (Y_r - Y_{r+1}) Omega_{r+1},
               others fixed, label unchanged;
    "PR", distinct labels: Omega_r and Omega_{r+1} swap, others fixed,
               label becomes s_r(i).

Demazure operator: der_r(f) = (f - s_r f) / (X_r - X_{r+1}), an exact
division (InternalError if the division fails).  On "PR" it requires
i_r = i_{r+1} (LabelMismatch otherwise).
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

from .errors import (
    IndexOutOfRange,
    InternalError,
    LabelMismatch,
    RingMismatch,
)
from .permutations import Permutation

Key = tuple[tuple[int, ...], tuple[int, ...]]

_ZERO = Fraction(0)
_ONE = Fraction(1)


def merge_ext(s1: tuple[int, ...], s2: tuple[int, ...]) -> tuple[int, tuple[int, ...]] | None:
    """Merge two sorted odd-index tuples; return (sign, merged) or None if
    they overlap (square-zero)."""
    if not s1:
        return 1, s2
    if not s2:
        return 1, s1
    inversions = 0
    for a in s1:
        for b in s2:
            if a == b:
                return None
            if a > b:
                inversions += 1
    merged = tuple(sorted(s1 + s2))
    return (-1 if inversions % 2 else 1), merged


class SuperPoly:
    """Immutable sparse super-polynomial."""

    __slots__ = ("kind", "d", "label", "coeffs")

    def __init__(self, kind: str, d: int, coeffs: dict, label: tuple | None = None):
        if kind not in ("P", "Pl", "PR"):
            raise RingMismatch(f"unknown ring kind {kind!r}")
        if kind == "PR":
            if label is None or len(label) != d:
                raise LabelMismatch("PR elements need a length-d label")
            label = tuple(label)
        elif label is not None:
            raise LabelMismatch(f"ring kind {kind} carries no label")
        self.kind = kind
        self.d = d
        self.label = label
        clean = {}
        for (exps, ext), c in coeffs.items():
            if not c:
                continue
            if len(exps) != d:
                raise RingMismatch("exponent tuple has wrong length")
            if kind != "Pl" and any(e < 0 for e in exps):
                raise RingMismatch("negative exponent in a non-Laurent ring")
            if any(not 1 <= j <= d for j in ext) or list(ext) != sorted(set(ext)):
                raise IndexOutOfRange(f"bad odd-index tuple {ext}")
            clean[(tuple(exps), tuple(ext))] = Fraction(c)
        self.coeffs = clean

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero(kind: str, d: int, label=None) -> "SuperPoly":
        return SuperPoly(kind, d, {}, label)

    @staticmethod
    def one(kind: str, d: int, label=None) -> "SuperPoly":
        return SuperPoly(kind, d, {((0,) * d, ()): _ONE}, label)

    @staticmethod
    def const(kind: str, d: int, c, label=None) -> "SuperPoly":
        return SuperPoly(kind, d, {((0,) * d, ()): Fraction(c)}, label)

    @staticmethod
    def var(kind: str, d: int, r: int, power: int = 1, label=None) -> "SuperPoly":
        if not 1 <= r <= d:
            raise IndexOutOfRange(f"variable index {r} outside 1..{d}")
        exps = [0] * d
        exps[r - 1] = power
        return SuperPoly(kind, d, {(tuple(exps), ()): _ONE}, label)

    @staticmethod
    def ext(kind: str, d: int, r: int, label=None) -> "SuperPoly":
        if not 1 <= r <= d:
            raise IndexOutOfRange(f"odd index {r} outside 1..{d}")
        return SuperPoly(kind, d, {((0,) * d, (r,)): _ONE}, label)

    @staticmethod
    def monomial(kind: str, d: int, exps, ext=(), c=1, label=None) -> "SuperPoly":
        return SuperPoly(kind, d, {(tuple(exps), tuple(ext)): Fraction(c)}, label)

    # -- structure ---------------------------------------------------------

    def _check_compatible(self, other: "SuperPoly") -> None:
        if self.kind != other.kind or self.d != other.d:
            raise RingMismatch(f"mixed rings {self.kind}/{other.kind} or sizes")
        if self.label != other.label:
            raise LabelMismatch(f"mixed labels {self.label} vs {other.label}")

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SuperPoly)
            and self.kind == other.kind
            and self.d == other.d
            and self.label == other.label
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.kind, self.d, self.label, frozenset(self.coeffs.items())))

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other: "SuperPoly") -> "SuperPoly":
        self._check_compatible(other)
        out = dict(self.coeffs)
        for key, c in other.coeffs.items():
            s = out.get(key, _ZERO) + c
            if s:
                out[key] = s
            else:
                out.pop(key, None)
        return self._wrap(out)

    def __neg__(self) -> "SuperPoly":
        return self._wrap({k: -c for k, c in self.coeffs.items()})

    def __sub__(self, other: "SuperPoly") -> "SuperPoly":
        return self + (-other)

    def scale(self, c) -> "SuperPoly":
        c = Fraction(c)
        if not c:
            return self._wrap({})
        return self._wrap({k: c * v for k, v in self.coeffs.items()})

    def __rmul__(self, c):
        if isinstance(c, (int, Fraction)):
            return self.scale(c)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        self._check_compatible(other)
        out: dict[Key, Fraction] = {}
        for (e1, s1), c1 in self.coeffs.items():
            for (e2, s2), c2 in other.coeffs.items():
                merged = merge_ext(s1, s2)
                if merged is None:
                    continue
                sign, ext = merged
                exps = tuple(a + b for a, b in zip(e1, e2))
                key = (exps, ext)
                v = out.get(key, _ZERO) + sign * c1 * c2
                if v:
                    out[key] = v
                else:
                    out.pop(key, None)
        return self._wrap(out)

    def __pow__(self, n: int) -> "SuperPoly":
        if not isinstance(n, int) or n < 0:
            raise RingMismatch("powers must be nonnegative integers")
        out = SuperPoly.one(self.kind, self.d, self.label)
        for _ in range(n):
            out = out * self
        return out

    def _wrap(self, coeffs: dict) -> "SuperPoly":
        obj = object.__new__(SuperPoly)
        obj.kind = self.kind
        obj.d = self.d
        obj.label = self.label
        obj.coeffs = coeffs
        return obj

    def with_label(self, label: tuple | None) -> "SuperPoly":
        return SuperPoly(self.kind, self.d, self.coeffs, label)

    # -- inspection ----------------------------------------------------------

    def lam_degree_parts(self) -> dict[int, "SuperPoly"]:
        """Split by exterior degree |ext|."""
        parts: dict[int, dict] = {}
        for (exps, ext), c in self.coeffs.items():
            parts.setdefault(len(ext), {})[(exps, ext)] = c
        return {k: self._wrap(v) for k, v in sorted(parts.items())}

    def ext_parts(self) -> dict[tuple[int, ...], "SuperPoly"]:
        """Split into pure-polynomial coefficients of each exterior monomial."""
        parts: dict[tuple[int, ...], dict] = {}
        for (exps, ext), c in self.coeffs.items():
            parts.setdefault(ext, {})[(exps, ())] = c
        return {ext: self._wrap(v) for ext, v in sorted(parts.items())}

    def max_degree(self) -> int:
        """Largest total even degree (sum of exponents); -1 on zero."""
        if not self.coeffs:
            return -1
        return max(sum(e) for (e, _s) in self.coeffs)

    def min_degree(self) -> int:
        if not self.coeffs:
            return 0
        return min(sum(e) for (e, _s) in self.coeffs)

    def constant_term(self) -> Fraction:
        return self.coeffs.get(((0,) * self.d, ()), _ZERO)

    def truncate_above(self, order: int) -> "SuperPoly":
        """Drop monomials of total even degree >= order."""
        return self._wrap({k: c for k, c in self.coeffs.items() if sum(k[0]) < order})

    def __repr__(self) -> str:
        if not self.coeffs:
            body = "0"
        else:
            names = ("Y", "W") if self.kind == "PR" else ("X", "th")
            terms = []
            for (exps, ext) in sorted(self.coeffs):
                c = self.coeffs[(exps, ext)]
                bits = []
                for r, e in enumerate(exps, start=1):
                    if e == 1:
                        bits.append(f"{names[0]}{r}")
                    elif e:
                        bits.append(f"{names[0]}{r}^{e}")
                bits.extend(f"{names[1]}{j}" for j in ext)
                mono = "*".join(bits) if bits else "1"
                if c == 1 and bits:
                    terms.append(mono)
                elif c == -1 and bits:
                    terms.append(f"-{mono}")
                elif bits:
                    terms.append(f"{c}*{mono}")
                else:
                    terms.append(str(c))
            body = " + ".join(terms).replace("+ -", "- ")
        tag = f"|{','.join(map(str, self.label))}" if self.label is not None else ""
        return f"<{self.kind}{tag}: {body}>"


# -- symmetric action ---------------------------------------------------------


def _s_act_hecke_monomial(d: int, r: int, exps, ext, c) -> list[tuple[Key, Fraction]]:
    e = list(exps)
    e[r - 1], e[r] = e[r], e[r - 1]
    e = tuple(e)
    if r not in ext:
        return [((e, ext), c)]
    out = [((e, ext), c)]
    if r + 1 not in ext:
        # replace theta_r by (X_r - X_{r+1}) theta_{r+1}; the slot ordering is
        # unchanged, so no sign appears.
        ext2 = tuple(sorted([j for j in ext if j != r] + [r + 1]))
        up = list(e)
        up[r - 1] += 1
        dn = list(e)
        dn[r] += 1
        out.append(((tuple(up), ext2), c))
        out.append(((tuple(dn), ext2), -c))
    return out


def _s_act_klr_monomial(d: int, r: int, equal: bool, exps, ext, c) -> list[tuple[Key, Fraction]]:
    e = list(exps)
    e[r - 1], e[r] = e[r], e[r - 1]
    e = tuple(e)
    if equal:
        return _s_act_hecke_monomial_klr_shape(e, r, ext, c)
    # distinct labels: swap the two odd generators
    if r in ext and r + 1 in ext:
        return [((e, ext), -c)]
    if r in ext:
        ext2 = tuple(sorted([j for j in ext if j != r] + [r + 1]))
        return [((e, ext2), c)]
    if r + 1 in ext:
        ext2 = tuple(sorted([j for j in ext if j != r + 1] + [r]))
        return [((e, ext2), c)]
    return [((e, ext), c)]


def _s_act_hecke_monomial_klr_shape(e, r, ext, c):
    if r not in ext:
        return [((e, ext), c)]
    out = [((e, ext), c)]
    if r + 1 not in ext:
        ext2 = tuple(sorted([j for j in ext if j != r] + [r + 1]))
        up = list(e)
        up[r - 1] += 1
        dn = list(e)
        dn[r] += 1
        out.append(((tuple(up), ext2), c))
        out.append(((tuple(dn), ext2), -c))
    return out


def sym_act_hecke(w, f: SuperPoly) -> SuperPoly:
    """Action of s_r (int) or of a permutation on kinds "P"/"Pl"."""
    if f.kind == "PR":
        raise RingMismatch("sym_act_hecke is for X/theta rings; use sym_act_klr")
    if isinstance(w, Permutation):
        out = f
        for r in reversed(w.canonical_word()):
            out = sym_act_hecke(r, out)
        return out
    r = w
    if not 1 <= r <= f.d - 1:
        raise IndexOutOfRange(f"generator index {r} outside 1..{f.d - 1}")
    acc: dict[Key, Fraction] = {}
    for (exps, ext), c in f.coeffs.items():
        for key, v in _s_act_hecke_monomial(f.d, r, exps, ext, c):
            s = acc.get(key, _ZERO) + v
            if s:
                acc[key] = s
            else:
                acc.pop(key, None)
    return f._wrap(acc)


def sym_act_klr(k: int, f: SuperPoly) -> SuperPoly:
    """Action of s_k on a labelled "PR" element; the label moves to s_k(i)."""
    if f.kind != "PR":
        raise RingMismatch("sym_act_klr needs a labelled PR element")
    if not 1 <= k <= f.d - 1:
        raise IndexOutOfRange(f"generator index {k} outside 1..{f.d - 1}")
    lab = f.label
    equal = lab[k - 1] == lab[k]
    acc: dict[Key, Fraction] = {}
    for (exps, ext), c in f.coeffs.items():
        for key, v in _s_act_klr_monomial(f.d, k, equal, exps, ext, c):
            s = acc.get(key, _ZERO) + v
            if s:
                acc[key] = s
            else:
                acc.pop(key, None)
    new_label = lab if equal else tuple(Permutation.s(k, f.d).act_on_seq(lab))
    return SuperPoly(f.kind, f.d, acc, new_label)


# -- exact division by X_r - X_{r+1} ------------------------------------------


def div_diff_with_remainder(g: SuperPoly, r: int) -> tuple[SuperPoly, SuperPoly]:
    """Divide g by (X_r - X_{r+1}); return (quotient, remainder) with
    g = quotient * (X_r - X_{r+1}) + remainder exactly."""
    if not 1 <= r <= g.d - 1:
        raise IndexOutOfRange(f"index {r} outside 1..{g.d - 1}")
    groups: dict[tuple, dict[tuple[int, int], Fraction]] = {}
    for (exps, ext), c in g.coeffs.items():
        rest = (exps[: r - 1], exps[r + 1 :], ext)
        groups.setdefault(rest, {})[(exps[r - 1], exps[r])] = c
    quo: dict[Key, Fraction] = {}
    rem: dict[Key, Fraction] = {}

    def put(acc, rest, a, b, c):
        if not c:
            return
        pre, post, ext = rest
        exps = pre + (a,) + (b,) + post
        key = (exps, ext)
        s = acc.get(key, _ZERO) + c
        if s:
            acc[key] = s
        else:
            acc.pop(key, None)

    for rest, poly in groups.items():
        shift = max(0, -min(a for a, _b in poly), -min(b for _a, b in poly))
        # P_a(y) rows of x^a coefficients, exponents shifted to be nonnegative
        rows: dict[int, dict[int, Fraction]] = {}
        for (a, b), c in poly.items():
            rows.setdefault(a + shift, {})[b + shift] = c
        A = max(rows)
        q_rows: dict[int, dict[int, Fraction]] = {}
        carry: dict[int, Fraction] = {}
        for a in range(A, 0, -1):
            cur = dict(carry)
            for b, c in rows.get(a, {}).items():
                cur[b] = cur.get(b, _ZERO) + c
            cur = {b: c for b, c in cur.items() if c}
            if cur:
                q_rows[a - 1] = cur
            carry = {b + 1: c for b, c in cur.items()}
        tail = dict(carry)
        for b, c in rows.get(0, {}).items():
            tail[b] = tail.get(b, _ZERO) + c
        for a, row in q_rows.items():
            for b, c in row.items():
                put(quo, rest, a - shift, b - shift, c)
        for b, c in tail.items():
            put(rem, rest, -shift, b - shift, c)
    return g._wrap(quo), g._wrap(rem)


def exact_div_diff(g: SuperPoly, r: int) -> SuperPoly:
    quo, rem = div_diff_with_remainder(g, r)
    if not rem.is_zero():
        raise InternalError(f"division by (X_{r} - X_{r + 1}) is not exact: remainder {rem!r}")
    return quo


def demazure_hecke(r: int, f: SuperPoly) -> SuperPoly:
    """der_r(f) = (f - s_r f)/(X_r - X_{r+1}) on kinds "P"/"Pl"."""
    return exact_div_diff(f - sym_act_hecke(r, f), r)


def demazure_klr(r: int, f: SuperPoly) -> SuperPoly:
    """Divided difference on a "PR" element; needs i_r = i_{r+1}."""
    if f.kind != "PR":
        raise RingMismatch("demazure_klr needs a labelled PR element")
    if f.label[r - 1] != f.label[r]:
        raise LabelMismatch(
            f"divided difference at {r} needs equal labels, got "
            f"{f.label[r - 1]} and {f.label[r]}"
        )
    return exact_div_diff(f - sym_act_klr(r, f), r)


# -- variable maps -------------------------------------------------------------


def map_vars(
    f: SuperPoly,
    scale: tuple[Fraction, ...],
    shift: tuple[Fraction, ...],
    kind: str,
    label=None,
    ext_images: dict[int, SuperPoly] | None = None,
) -> SuperPoly:
    """Substitute X_r -> scale_r * X'_r + shift_r (exponents must be >= 0)
    and optionally theta_r -> ext_images[r]; result lives in (kind, label)."""
    out = SuperPoly.zero(kind, f.d, label)
    for (exps, ext), c in f.coeffs.items():
        term = SuperPoly.const(kind, f.d, c, label)
        for r, e in enumerate(exps, start=1):
            if e < 0:
                raise RingMismatch("map_vars does not expand negative powers")
            base = SuperPoly.var(kind, f.d, r, label=label).scale(scale[r - 1]) + SuperPoly.const(
                kind, f.d, shift[r - 1], label
            )
            for _ in range(e):
                term = term * base
        for j in ext:
            img = ext_images[j] if ext_images else SuperPoly.ext(kind, f.d, j, label)
            term = term * img
        out = out + term
    return out


# -- enumeration helpers --------------------------------------------------------


def poly_exponents(d: int, max_total: int, laurent: bool = False):
    """All exponent tuples with sum of |e_r| <= max_total (signed if laurent)."""
    def rec(pos, budget):
        if pos == d:
            yield ()
            return
        lo = -budget if laurent else 0
        for e in range(lo, budget + 1):
            for rest in rec(pos + 1, budget - abs(e)):
                yield (e,) + rest

    yield from rec(0, max_total)


def ext_subsets(d: int):
    for k in range(d + 1):
        yield from combinations(range(1, d + 1), k)
