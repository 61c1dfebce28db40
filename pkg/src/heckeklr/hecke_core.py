"""Enhanced degenerate and q-deformed affine Hecke algebras.

Elements live in the basis X^a T_w xi^b where a is an exponent vector
(nonnegative in the degenerate variant, integral in the q-variant), w a
permutation, and b a strictly increasing tuple of odd-generator indices;
an element is a dict mapping such keys to nonzero rationals.

Words are sequences of primitive letters

    ("poly", SuperPoly)   even polynomial, left multiplication
    ("T", r)              Coxeter-type generator, 1 <= r <= d-1
    ("invT", r)           its inverse (q-variant only)
    ("theta",)            the odd square-zero generator
    ("xi", r)             derived odd family, xi_1 = theta

applied rightmost first, matching operator composition on the faithful
polynomial module: the degenerate variant acts on k[X] (x) Lambda(theta),
the q-variant on Laurent polynomials tensored with the same odd part.

The polynomial action of the generators:

    degenerate:  T_r f = s_r(f) - der_r(f)
    q-variant:   T_r f = q s_r(f) - (q-1) X_{r+1} der_r(f)
    theta    f = theta_1 * f
    poly   p f = p * f

Straightening rewrites any word as a basis element by absorbing letters
right to left; the commutation moves are

    T_r p          = s_r(p) T_r - der_r(p)                 (degenerate)
    T_r p          = s_r(p) T_r - (q-1) X_{r+1} der_r(p)   (q-variant)
    theta X_r      = X_r theta
    xi_m  T_r      = T_r xi_{s_r(m)}                       (degenerate)
    xi_r  T_r      = T_r xi_{r+1} + (q-1)(xi_r - xi_{r+1}) (q-variant)
    xi_{r+1} T_r   = T_r xi_r                              (q-variant)

together with T_r T_w folding (T_r^2 = 1 degenerate,
T_r^2 = (q-1) T_r + q in the q-variant) and signed insertion of xi_m
into a sorted odd product.

The differential sends the even subalgebra to zero, theta to
prod_s (X_1 - Q_s), and extends by the graded Leibniz rule; xi_m maps to
T_{m-1} .. T_1 (prod_s (X_1 - Q_s)) T_1 .. T_{m-1} with inverses on the
right in the q-variant.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

from .errors import (
    IndexOutOfRange,
    InternalError,
    InvalidParam,
    RingMismatch,
    VariantMismatch,
)
from .params import ParamSet, Scalar, parse_scalar
from .permutations import Permutation
from .superrings import (
    SuperPoly,
    demazure_hecke,
    ext_subsets,
    poly_exponents,
    sym_act_hecke,
)

_ONE = Fraction(1)


def add_into(acc: dict, elem: dict, c=_ONE) -> None:
    if not c:
        return
    for key, v in elem.items():
        s = acc.get(key, 0) + c * v
        if s:
            acc[key] = s
        else:
            acc.pop(key, None)


def scale_elem(elem: dict, c) -> dict:
    if not c:
        return {}
    return {k: c * v for k, v in elem.items()}


class HeckeAlgebra:
    """Context for one variant at a fixed rank."""

    def __init__(self, variant: str, d: int, q=None, Q=()):
        if variant not in ("degenerate", "q"):
            raise VariantMismatch(f"unknown variant {variant!r}")
        if d < 1:
            raise InvalidParam("d must be at least 1")
        if variant == "q":
            if q is None:
                raise InvalidParam("q-variant needs the scalar q")
            q = parse_scalar(q)
            if q == 0 or q == 1:
                raise InvalidParam("q must differ from 0 and 1")
        elif q is not None:
            raise VariantMismatch("degenerate variant takes no q")
        self.variant = variant
        self.d = d
        self.q = q
        self.Q = tuple(parse_scalar(x) for x in Q)
        self.kind = "P" if variant == "degenerate" else "Pl"
        self._id = Permutation.identity(d)
        self._zero_exps = (0,) * d
        self._dd_cache: dict = {}
        self._push_cache: dict = {}
        self._dxi_cache: dict = {}

    @staticmethod
    def from_params(ps: ParamSet) -> "HeckeAlgebra":
        return HeckeAlgebra(ps.variant, ps.d, q=ps.q, Q=ps.Q)

    # -- element constructors ------------------------------------------------

    def one(self) -> dict:
        return {(self._zero_exps, self._id, ()): _ONE}

    def poly_ring_one(self) -> SuperPoly:
        return SuperPoly.one(self.kind, self.d)

    def xvar(self, r: int, power: int = 1) -> SuperPoly:
        if self.variant == "degenerate" and power < 0:
            raise RingMismatch("negative powers need the q-variant")
        return SuperPoly.var(self.kind, self.d, r, power)

    def cyclotomic_poly(self) -> SuperPoly:
        """prod_s (X_1 - Q_s)."""
        if not self.Q:
            raise InvalidParam("no Q parameters were given")
        out = self.poly_ring_one()
        for qs in self.Q:
            out = out * (self.xvar(1) - SuperPoly.const(self.kind, self.d, qs))
        return out

    def xi_word(self, m: int) -> list:
        """xi_m as primitive letters."""
        if not 1 <= m <= self.d:
            raise IndexOutOfRange(f"xi index {m} outside 1..{self.d}")
        left = [("T", j) for j in range(m - 1, 0, -1)]
        if self.variant == "degenerate":
            right = [("T", j) for j in range(1, m)]
        else:
            right = [("invT", j) for j in range(1, m)]
        return left + [("theta",)] + right

    def letters_of_key(self, key) -> list:
        a, w, b = key
        letters = []
        if any(a):
            letters.append(("poly", SuperPoly.monomial(self.kind, self.d, a)))
        letters.extend(("T", r) for r in w.canonical_word())
        for m in b:
            letters.extend(self.xi_word(m))
        return letters

    # -- polynomial action -----------------------------------------------------

    def act_T(self, r: int, f: SuperPoly) -> SuperPoly:
        if self.variant == "degenerate":
            return sym_act_hecke(r, f) - demazure_hecke(r, f)
        return self.q * sym_act_hecke(r, f) - (self.q - 1) * (
            self.xvar(r + 1) * demazure_hecke(r, f)
        )

    def act_invT(self, r: int, f: SuperPoly) -> SuperPoly:
        if self.variant == "degenerate":
            return self.act_T(r, f)
        g = self.act_T(r, f)
        return (g - (self.q - 1) * f).scale(_ONE / self.q)

    def act_letter(self, letter, f: SuperPoly) -> SuperPoly:
        tag = letter[0]
        if tag == "poly":
            return letter[1] * f
        if tag == "T":
            return self.act_T(letter[1], f)
        if tag == "invT":
            return self.act_invT(letter[1], f)
        if tag == "theta":
            return SuperPoly.ext(self.kind, self.d, 1) * f
        if tag == "xi":
            return self.act_letters(self.xi_word(letter[1]), f)
        raise InternalError(f"unknown letter {letter!r}")

    def act_letters(self, letters, f: SuperPoly) -> SuperPoly:
        for letter in reversed(letters):
            f = self.act_letter(letter, f)
        return f

    def act(self, elem: dict, f: SuperPoly) -> SuperPoly:
        out = SuperPoly.zero(self.kind, self.d)
        for key, c in elem.items():
            out = out + self.act_letters(self.letters_of_key(key), f).scale(c)
        return out

    # -- straightening -----------------------------------------------------------

    def _demazure_items(self, a: tuple, r: int):
        """Monomial items of the degree-lowering part of T_r X^a."""
        hit = self._dd_cache.get((a, r))
        if hit is None:
            mono = SuperPoly.monomial(self.kind, self.d, a)
            dd = demazure_hecke(r, mono)
            if self.variant == "q":
                dd = (self.q - 1) * (self.xvar(r + 1) * dd)
            hit = tuple((exps, c) for (exps, _s), c in dd.coeffs.items())
            self._dd_cache[(a, r)] = hit
        return hit

    def prepend_T(self, r: int, elem: dict) -> dict:
        if not 1 <= r <= self.d - 1:
            raise IndexOutOfRange(f"generator index {r} outside 1..{self.d - 1}")
        out: dict = {}
        s_r = Permutation.s(r, self.d)
        for (a, w, b), c in elem.items():
            a2 = list(a)
            a2[r - 1], a2[r] = a2[r], a2[r - 1]
            a2 = tuple(a2)
            sw = s_r * w
            if self.variant == "degenerate":
                add_into(out, {(a2, sw, b): _ONE}, c)
            else:
                if sw.length() > w.length():
                    add_into(out, {(a2, sw, b): _ONE}, c)
                else:
                    add_into(out, {(a2, w, b): self.q - 1, (a2, sw, b): self.q}, c)
            for exps, cm in self._demazure_items(a, r):
                add_into(out, {(exps, w, b): _ONE}, -c * cm)
        return out

    def prepend_invT(self, r: int, elem: dict) -> dict:
        if self.variant == "degenerate":
            return self.prepend_T(r, elem)
        out = scale_elem(self.prepend_T(r, elem), _ONE / self.q)
        add_into(out, elem, -(self.q - 1) / self.q)
        return out

    def prepend_poly(self, p: SuperPoly, elem: dict) -> dict:
        if p.kind != self.kind or p.d != self.d:
            raise RingMismatch("polynomial letter lives in the wrong ring")
        out: dict = {}
        for (exps, ext), cm in p.coeffs.items():
            if ext:
                raise RingMismatch("polynomial letters must be even")
            for (a, w, b), c in elem.items():
                a2 = tuple(x + y for x, y in zip(exps, a))
                add_into(out, {(a2, w, b): _ONE}, c * cm)
        return out

    def _insert_xi(self, m: int, b: tuple) -> tuple:
        """(sign, merged) for xi_m xi^b, sign 0 when m already occurs."""
        if m in b:
            return 0, b
        below = sum(1 for x in b if x < m)
        sign = -1 if below % 2 else 1
        return sign, tuple(sorted(b + (m,)))

    def _push_xi(self, m: int, word: tuple, b: tuple) -> dict:
        """xi_m T_{word} xi^b as a basis element (all exponents zero)."""
        key = (m, word, b)
        hit = self._push_cache.get(key)
        if hit is not None:
            return hit
        if not word:
            sign, merged = self._insert_xi(m, b)
            out = {} if sign == 0 else {(self._zero_exps, self._id, merged): Fraction(sign)}
        else:
            r, rest = word[0], word[1:]
            if self.variant == "degenerate":
                m2 = r + 1 if m == r else (r if m == r + 1 else m)
                out = self.prepend_T(r, self._push_xi(m2, rest, b))
            elif m == r + 1:
                out = self.prepend_T(r, self._push_xi(r, rest, b))
            elif m == r:
                out = self.prepend_T(r, self._push_xi(r + 1, rest, b))
                add_into(out, self._push_xi(r, rest, b), self.q - 1)
                add_into(out, self._push_xi(r + 1, rest, b), -(self.q - 1))
            else:
                out = self.prepend_T(r, self._push_xi(m, rest, b))
        self._push_cache[key] = out
        return out

    def prepend_xi_gen(self, m: int, elem: dict) -> dict:
        """xi_m times an element; only valid when every key has zero exponents
        (used inside the odd pushes), otherwise expand xi_m as a word."""
        out: dict = {}
        for (a, w, b), c in elem.items():
            tail = self._push_xi(m, w.canonical_word(), b)
            for (a0, u, b2), c2 in tail.items():
                a3 = tuple(x + y for x, y in zip(a, a0))
                add_into(out, {(a3, u, b2): _ONE}, c * c2)
        return out

    def prepend_theta(self, elem: dict) -> dict:
        # theta = xi_1 commutes with every X_r, so the exponent vector can
        # ride along while xi_1 is pushed through T_w.
        return self.prepend_xi_gen(1, elem)

    def prepend_letter(self, letter, elem: dict) -> dict:
        tag = letter[0]
        if tag == "poly":
            return self.prepend_poly(letter[1], elem)
        if tag == "T":
            return self.prepend_T(letter[1], elem)
        if tag == "invT":
            return self.prepend_invT(letter[1], elem)
        if tag == "theta":
            return self.prepend_theta(elem)
        if tag == "xi":
            out = elem
            for lt in reversed(self.xi_word(letter[1])):
                out = self.prepend_letter(lt, out)
            return out
        raise InternalError(f"unknown letter {letter!r}")

    def straighten(self, letters) -> dict:
        elem = self.one()
        for letter in reversed(list(letters)):
            elem = self.prepend_letter(letter, elem)
        return elem

    def multiply(self, e1: dict, e2: dict) -> dict:
        out: dict = {}
        for key, c in e1.items():
            cur = e2
            for letter in reversed(self.letters_of_key(key)):
                cur = self.prepend_letter(letter, cur)
            add_into(out, cur, c)
        return out

    def xi_elem(self, m: int) -> dict:
        return self.straighten(self.xi_word(m))

    # -- differential ---------------------------------------------------------

    def dxi(self, m: int, P: SuperPoly | None = None) -> dict:
        """Image of xi_m under the differential with theta |-> P(X_1)."""
        if P is None:
            P = self.cyclotomic_poly()
            cache_key = ("Q", m)
        else:
            cache_key = None
        if cache_key is not None and cache_key in self._dxi_cache:
            return self._dxi_cache[cache_key]
        left = [("T", j) for j in range(m - 1, 0, -1)]
        if self.variant == "degenerate":
            right = [("T", j) for j in range(1, m)]
        else:
            right = [("invT", j) for j in range(1, m)]
        out = self.straighten(left + [("poly", P)] + right)
        if cache_key is not None:
            self._dxi_cache[cache_key] = out
        return out

    def differential(self, elem: dict, P: SuperPoly | None = None) -> dict:
        """Graded derivation killing the even part, theta |-> P(X_1)
        (default P = prod_s (X_1 - Q_s))."""
        out: dict = {}
        for (a, w, b), c in elem.items():
            for j, m in enumerate(b):
                left = {(a, w, b[:j]): _ONE}
                right = {(self._zero_exps, self._id, b[j + 1 :]): _ONE}
                term = self.multiply(left, self.multiply(self.dxi(m, P), right))
                add_into(out, term, c if j % 2 == 0 else -c)
        return out

    def flatten_letters(self, letters) -> list:
        out = []
        for letter in letters:
            if letter[0] == "xi":
                out.extend(self.xi_word(letter[1]))
            else:
                out.append(letter)
        return out

    def word_differential(self, letters, P: SuperPoly | None = None) -> dict:
        """Leibniz expansion of the differential over a word: each theta
        letter is replaced in turn by P(X_1), with the sign of the odd
        letters passed over."""
        if P is None:
            P = self.cyclotomic_poly()
        letters = self.flatten_letters(letters)
        P_elem = self.straighten([("poly", P)])
        out: dict = {}
        parity = 0
        for i, letter in enumerate(letters):
            if letter[0] != "theta":
                continue
            prefix = self.straighten(letters[:i])
            suffix = self.straighten(letters[i + 1 :])
            term = self.multiply(prefix, self.multiply(P_elem, suffix))
            add_into(out, term, _ONE if parity % 2 == 0 else -_ONE)
            parity += 1
        return out

    # -- probes and relation checking -------------------------------------------

    def probes(self, max_deg: int) -> list[SuperPoly]:
        laurent = self.variant == "q"
        out = []
        for exps in poly_exponents(self.d, max_deg, laurent=laurent):
            for ext in ext_subsets(self.d):
                out.append(SuperPoly.monomial(self.kind, self.d, exps, ext))
        return out

    def relation_suite(self) -> list[tuple[str, list]]:
        """Defining relations as (id, list of (coeff, word)) summing to zero."""
        d, rels = self.d, []
        one = []
        if self.variant == "degenerate":
            for r in range(1, d):
                rels.append((f"invol_T{r}", [(1, [("T", r), ("T", r)]), (-1, one)]))
        else:
            q = self.q
            for r in range(1, d):
                rels.append(
                    (
                        f"quad_T{r}",
                        [(1, [("T", r), ("T", r)]), (-(q - 1), [("T", r)]), (-q, one)],
                    )
                )
                rels.append(
                    (f"inv_T{r}", [(1, [("T", r), ("invT", r)]), (-1, one)])
                )
            for r in range(1, d + 1):
                rels.append(
                    (
                        f"laurent_X{r}",
                        [
                            (
                                1,
                                [
                                    ("poly", self.xvar(r)),
                                    ("poly", self.xvar(r, -1)),
                                ],
                            ),
                            (-1, one),
                        ],
                    )
                )
        for r in range(1, d - 1):
            rels.append(
                (
                    f"braid_T{r}",
                    [
                        (1, [("T", r), ("T", r + 1), ("T", r)]),
                        (-1, [("T", r + 1), ("T", r), ("T", r + 1)]),
                    ],
                )
            )
        for r in range(1, d):
            for u in range(r + 2, d):
                rels.append(
                    (
                        f"commT_T{r}_T{u}",
                        [
                            (1, [("T", r), ("T", u)]),
                            (-1, [("T", u), ("T", r)]),
                        ],
                    )
                )
        for r in range(1, d):
            for u in range(1, d + 1):
                Xu = [("poly", self.xvar(u))]
                if u == r:
                    if self.variant == "degenerate":
                        corr = [(1, one)]
                    else:
                        corr = [((self.q - 1), [("poly", self.xvar(r + 1))])]
                    rels.append(
                        (
                            f"TX_T{r}_X{u}",
                            [
                                (1, [("T", r)] + Xu),
                                (-1, [("poly", self.xvar(r + 1)), ("T", r)]),
                            ]
                            + corr,
                        )
                    )
                elif u != r + 1:
                    rels.append(
                        (
                            f"TXcomm_T{r}_X{u}",
                            [(1, [("T", r)] + Xu), (-1, Xu + [("T", r)])],
                        )
                    )
        for r in range(1, d):
            for u in range(r + 1, d + 1):
                rels.append(
                    (
                        f"XX_X{r}_X{u}",
                        [
                            (1, [("poly", self.xvar(r)), ("poly", self.xvar(u))]),
                            (-1, [("poly", self.xvar(u)), ("poly", self.xvar(r))]),
                        ],
                    )
                )
        th = ("theta",)
        rels.append(("theta_sq", [(1, [th, th])]))
        for r in range(1, d + 1):
            Xr = ("poly", self.xvar(r))
            rels.append(
                (f"thetaX_X{r}", [(1, [th, Xr]), (-1, [Xr, th])])
            )
        for r in range(2, d):
            rels.append(
                (f"thetaT_T{r}", [(1, [th, ("T", r)]), (-1, [("T", r), th])])
            )
        if d >= 2:
            T1 = ("T", 1)
            quad = [
                (1, [T1, th, T1, th]),
                (1, [th, T1, th, T1]),
            ]
            if self.variant == "q":
                quad.append((-(self.q - 1), [th, T1, th]))
            rels.append(("theta_braid", quad))
        return rels

    def check_relation_operator(self, combo, fs) -> SuperPoly | None:
        """First nonzero value of sum c * word acting on the probes, or None."""
        for f in fs:
            acc = SuperPoly.zero(self.kind, self.d)
            for c, word in combo:
                acc = acc + self.act_letters(word, f).scale(c)
            if not acc.is_zero():
                return acc
        return None

    def check_relation_straightened(self, combo) -> dict:
        acc: dict = {}
        for c, word in combo:
            add_into(acc, self.straighten(word), c)
        return acc

    def verify_relations(self, max_deg: int = 3) -> list[tuple[str, bool, str]]:
        """Run the defining relation suite both as operators on probe
        super-polynomials and as straightened elements."""
        fs = self.probes(max_deg)
        records = []
        for rel_id, combo in self.relation_suite():
            bad_op = self.check_relation_operator(combo, fs)
            bad_el = self.check_relation_straightened(combo)
            ok = bad_op is None and not bad_el
            witness = ""
            if bad_op is not None:
                witness = f"operator residue {bad_op!r}"
            elif bad_el:
                witness = f"straightened residue on {len(bad_el)} keys"
            records.append((rel_id, ok, witness))
        return records


def random_word(algebra: HeckeAlgebra, rng, length: int, max_pow: int = 2) -> list:
    """Random word in the primitive letters, for consistency tests."""
    letters = []
    for _ in range(length):
        roll = rng.randrange(6)
        if roll <= 1 and algebra.d >= 2:
            letters.append(("T", rng.randrange(1, algebra.d)))
        elif roll == 2:
            r = rng.randrange(1, algebra.d + 1)
            power = rng.randrange(1, max_pow + 1)
            if algebra.variant == "q" and rng.randrange(2):
                power = -power
            letters.append(("poly", algebra.xvar(r, power)))
        elif roll == 3:
            letters.append(("theta",))
        elif roll == 4:
            letters.append(("xi", rng.randrange(1, algebra.d + 1)))
        elif algebra.variant == "q" and algebra.d >= 2:
            letters.append(("invT", rng.randrange(1, algebra.d)))
        else:
            letters.append(("T", rng.randrange(1, algebra.d)) if algebra.d >= 2 else ("theta",))
    return letters
