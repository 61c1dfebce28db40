"""KLR algebras with floating dots and their polynomial modules.

The algebra attached to a quiver and a dimension vector acts faithfully
on a direct sum, over the labels 'i' in the orbit of the base tuple, of
super-polynomial components k[Y_1..Y_d] (x) Lambda(Omega_1..Omega_d) 1_i.
A module element is a dict mapping each label to a "PR" SuperPoly with
that label.  Generator actions on f 1_i:

    e(j)   : projection onto the component j
    Y_r    : multiplication by Y_r
    Omega  : multiplication by Omega_1
    tau_r  : (f - s_r f)/(Y_r - Y_{r+1}) 1_i            if i_r = i_{r+1}
             P_{i_r,i_{r+1}}(Y_r, Y_{r+1}) s_r(f 1_i)   otherwise

with P_{ij}(u,v) = (u-v)^{h_{ij}} counting arrows i -> j.

Algebra elements are dicts keyed by basis labels (w, R, n, i): the
left-adjusted reduced word of w with a floating-dot cluster inserted for
each r in R at the point where strand r is leftmost, times Y^n, times
e(i).  Expansion of an arbitrary operator over this basis is done by an
exact linear solve against the action on a finite probe set; the degree
window for the unknown keys comes from the observed growth of the
operator compared to the growth constant of each basis word.

The differential kills e(i), Y, tau, sends the floating dot on label
component j to (-Y_1)^{Lambda_{j_1}}, and extends by the graded Leibniz
rule in the number of floating dots.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import permutations as iter_permutations

from .errors import (
    DegreeBoundExceeded,
    IndexOutOfRange,
    InternalError,
    NotStabilized,
    SingularTable,
)
from .linalg import LinSolver
from .params import ParamSet
from .permutations import Permutation
from .superrings import (
    SuperPoly,
    demazure_klr,
    ext_subsets,
    poly_exponents,
    sym_act_klr,
)

_ONE = Fraction(1)


def module_add_into(acc: dict, me: dict, c=_ONE) -> None:
    if not c:
        return
    for lab, f in me.items():
        cur = acc.get(lab)
        g = f.scale(c) if c != 1 else f
        if cur is None:
            if not g.is_zero():
                acc[lab] = g
        else:
            s = cur + g
            if s.is_zero():
                del acc[lab]
            else:
                acc[lab] = s


def module_scale(me: dict, c) -> dict:
    if not c:
        return {}
    return {lab: f.scale(c) for lab, f in me.items()}


def module_eq(a: dict, b: dict) -> bool:
    if set(a) != set(b):
        return False
    return all(a[lab] == b[lab] for lab in a)


def module_vector(me: dict) -> dict:
    """Flatten to a sparse vector keyed by (label, exps, ext)."""
    out = {}
    for lab, f in me.items():
        for (exps, ext), c in f.coeffs.items():
            out[(lab, exps, ext)] = c
    return out


def elem_add_into(acc: dict, elem: dict, c=_ONE) -> None:
    if not c:
        return
    for key, v in elem.items():
        s = acc.get(key, 0) + c * v
        if s:
            acc[key] = s
        else:
            acc.pop(key, None)


class KLRAlgebra:
    """KLR algebra with floating dots for one parameter set."""

    def __init__(self, params: ParamSet):
        self.params = params
        self.d = params.d
        self.quiver = params.quiver
        self.lam = params.lam
        self.labels = sorted(set(iter_permutations(params.a)))
        self._id = Permutation.identity(self.d)
        self._image_cache: dict = {}
        # dense int ids sidestep repeated hashing of scalar-valued labels
        self._lab_id = {lab: k for k, lab in enumerate(self.labels)}

    def h(self, i, j) -> int:
        return self.quiver.h(i, j)

    # -- module elements -------------------------------------------------------

    def module_monomial(self, label, exps=None, ext=(), c=1) -> dict:
        label = tuple(label)
        if exps is None:
            exps = (0,) * self.d
        f = SuperPoly.monomial("PR", self.d, exps, ext, c, label=label)
        return {label: f} if not f.is_zero() else {}

    def module_probes(self, src, max_deg: int) -> list[dict]:
        src = tuple(src)
        out = []
        for exps in poly_exponents(self.d, max_deg):
            for ext in ext_subsets(self.d):
                out.append(self.module_monomial(src, exps, ext))
        return out

    # -- generator action --------------------------------------------------------

    def P_poly(self, i, j, r: int, label) -> SuperPoly:
        """(Y_r - Y_{r+1})^{h(i,j)} in the component of the given label."""
        out = SuperPoly.one("PR", self.d, label)
        diff = SuperPoly.var("PR", self.d, r, label=label) - SuperPoly.var(
            "PR", self.d, r + 1, label=label
        )
        for _ in range(self.h(i, j)):
            out = out * diff
        return out

    def act_tau(self, r: int, me: dict) -> dict:
        if not 1 <= r <= self.d - 1:
            raise IndexOutOfRange(f"tau index {r} outside 1..{self.d - 1}")
        out: dict = {}
        for lab, f in me.items():
            if lab[r - 1] == lab[r]:
                module_add_into(out, {lab: demazure_klr(r, f)})
            else:
                g = sym_act_klr(r, f)
                p = self.P_poly(lab[r - 1], lab[r], r, g.label)
                module_add_into(out, {g.label: p * g})
        return out

    def act_letter(self, letter, me: dict) -> dict:
        tag = letter[0]
        if tag == "tau":
            return self.act_tau(letter[1], me)
        if tag == "dot":
            r = letter[1]
            out: dict = {}
            for lab, f in me.items():
                y = SuperPoly.var("PR", self.d, r, label=lab)
                module_add_into(out, {lab: y * f})
            return out
        if tag == "fdot":
            out = {}
            for lab, f in me.items():
                om = SuperPoly.ext("PR", self.d, 1, label=lab)
                g = om * f
                if not g.is_zero():
                    out[lab] = g
            return out
        if tag == "e":
            want = letter[1]
            return {lab: f for lab, f in me.items() if lab == want}
        if tag == "ypoly":
            poly = letter[1]
            out = {}
            for lab, f in me.items():
                p = SuperPoly(
                    "PR", self.d, {(exps, ()): c for exps, c in poly.items()}, lab
                )
                g = p * f
                if not g.is_zero():
                    out[lab] = g
            return out
        raise InternalError(f"unknown letter {letter!r}")

    def act_letters(self, letters, me: dict) -> dict:
        for letter in reversed(letters):
            me = self.act_letter(letter, me)
            if not me:
                return {}
        return me

    # -- basis words -----------------------------------------------------------

    def _dot_slots(self, w: Permutation, R) -> list[tuple[int, int]]:
        """For each marked strand r, the pair (slot m, depth p): the word
        position after which strand r is first leftmost, and that leftmost
        position."""
        word = w.left_adjusted_word()
        out = []
        for r in sorted(R):
            if not 1 <= r <= self.d:
                raise IndexOutOfRange(f"marked strand {r} outside 1..{self.d}")
            pos = r
            best = (r, 0)
            for j, letter in enumerate(word, start=1):
                if pos == letter:
                    pos = letter + 1
                elif pos == letter + 1:
                    pos = letter
                if pos < best[0]:
                    best = (pos, j)
            out.append((best[1], best[0]))
        return out

    def basis_app_sequence(self, w: Permutation, R, n) -> list:
        """Application-order letters of the basis word tau_w(R) Y^n."""
        word = w.left_adjusted_word()
        slots = sorted(self._dot_slots(w, R))
        app = []
        for r in range(1, self.d + 1):
            app.extend([("dot", r)] * n[r - 1])
        si = 0
        for j in range(len(word) + 1):
            while si < len(slots) and slots[si][0] == j:
                p = slots[si][1]
                app.extend(("tau", t) for t in range(p - 1, 0, -1))
                app.append(("fdot",))
                app.extend(("tau", t) for t in range(1, p))
                si += 1
            if j < len(word):
                app.append(("tau", word[j]))
        if si != len(slots):
            raise InternalError("floating dot slots out of range")
        return app

    def basis_letters(self, key) -> list:
        w, R, n, src = key
        letters = list(reversed(self.basis_app_sequence(w, R, n)))
        letters.append(("e", tuple(src)))
        return letters

    def act_key(self, key, me: dict) -> dict:
        return self.act_letters(self.basis_letters(key), me)

    def act_elem(self, elem: dict, me: dict) -> dict:
        out: dict = {}
        for key, c in elem.items():
            module_add_into(out, self.act_key(key, me), c)
        return out

    # -- growth bookkeeping -------------------------------------------------------

    def word_profile(self, app, src) -> tuple[int, int, tuple]:
        """Walk an application sequence on one source component and return
        (growth, lam_shift, target label).  Growth adds -1 per equal-label
        crossing, the arrow count per distinct-label crossing, 1 per dot,
        and the total degree of any ypoly letter; every surviving image
        term of the word operator obeys this degree shift."""
        lab = tuple(src)
        c = 0
        shift = 0
        for letter in app:
            tag = letter[0]
            if tag == "tau":
                r = letter[1]
                if lab[r - 1] == lab[r]:
                    c -= 1
                else:
                    c += self.h(lab[r - 1], lab[r])
                lab = tuple(Permutation.s(r, self.d).act_on_seq(lab))
            elif tag == "dot":
                c += 1
            elif tag == "fdot":
                shift += 1
            elif tag == "ypoly":
                c += max((sum(e) for e in letter[1]), default=0)
        return c, shift, lab

    def growth_constant(self, w: Permutation, R, src) -> int:
        app = self.basis_app_sequence(w, R, (0,) * self.d)
        return self.word_profile(app, src)[0]

    def stabilizer(self, src) -> list[Permutation]:
        src = tuple(src)
        return [
            w for w in Permutation.all(self.d) if tuple(w.act_on_seq(src)) == src
        ]

    @staticmethod
    def _module_deg(me: dict) -> int:
        return max(f.max_degree() for f in me.values())

    # -- expansion over the basis ---------------------------------------------------

    def act_app(self, app, src, me: dict) -> dict:
        """Apply an application-order letter sequence to the projection of a
        module element onto one source component."""
        letters = list(reversed(app))
        letters.append(("e", tuple(src)))
        return self.act_letters(letters, me)

    def _vec(self, me: dict) -> dict:
        """Flatten to a sparse vector keyed by (label id, exps, ext)."""
        out = {}
        for lab, f in me.items():
            lid = self._lab_id[lab]
            for (exps, ext), c in f.coeffs.items():
                out[(lid, exps, ext)] = c
        return out

    def _word_images(self, w: Permutation, R, src, pid) -> dict:
        """Flattened image of the word part tau_w(R) on the source-component
        monomial probe pid = (exps, ext), cached."""
        ck = (w, R, self._lab_id[src], pid)
        hit = self._image_cache.get(ck)
        if hit is None:
            probe = self.module_monomial(src, pid[0], pid[1])
            app = self.basis_app_sequence(w, R, (0,) * self.d)
            hit = self._vec(self.act_app(app, src, probe))
            self._image_cache[ck] = hit
        return hit

    def to_basis(
        self,
        apply_op,
        src,
        hints=None,
        n_slack: int = 0,
        probe_pad: int = 2,
    ) -> dict:
        """Expand an operator on the source component over the basis.

        apply_op maps a module element supported on the source component to
        a module element.  hints, when given, is a list of application-order
        letter sequences whose linear span contains the operator; it pins
        the degree growth, the floating-dot count, and the target component
        of the expansion exactly.  Without hints those are measured on a
        probe set, which can undershoot for operators that kill every
        low-degree polynomial.  The result is a dict over basis keys
        (w, R, n, src).  Raises DegreeBoundExceeded if the images are not
        reproduced within the degree window, and SingularTable if the basis
        columns fail to be independent on the probe window.
        """
        src = tuple(src)
        if hints is not None:
            profiles = [self.word_profile(app, src) for app in hints]
            if not profiles:
                return {}
            # every letter operator is homogeneous in the Y-degree, so the
            # expansion keys satisfy c(w, R) + |n| exactly equal to one of
            # the hint growths
            degree_set = {p[0] + j for p in profiles for j in range(n_slack + 1)}
            g = max(degree_set)
            shifts = {p[1] for p in profiles}
            targets = {p[2] for p in profiles}
        else:
            degree_set = None
            g = None
            shifts = set()
            targets = set()
            for pid, f in self._probe_list(src, 2):
                img = apply_op(f)
                if not img:
                    continue
                move = self._module_deg(img) - sum(pid[0])
                g = move if g is None else max(g, move)
                targets.update(img)
                for lab, exps, ext in module_vector(img):
                    shifts.add(len(ext) - len(pid[1]))
            if g is None:
                return {}
            g += n_slack
        unknowns = []
        max_n = 0
        for w in Permutation.all(self.d):
            if tuple(w.act_on_seq(src)) not in targets:
                continue
            for R in ext_subsets(self.d):
                if len(R) not in shifts:
                    continue
                c = self.growth_constant(w, R, src)
                if degree_set is not None:
                    sizes = sorted(t - c for t in degree_set if t - c >= 0)
                else:
                    budget = g - c
                    sizes = list(range(budget + 1)) if budget >= 0 else []
                if not sizes:
                    continue
                max_n = max(max_n, sizes[-1])
                for n in poly_exponents(self.d, sizes[-1]):
                    if sum(n) in sizes:
                        unknowns.append((w, R, n, src))
        if not unknowns:
            probes = self._probe_list(src, probe_pad)
            if all(not apply_op(f) for _, f in probes):
                return {}
            raise DegreeBoundExceeded(
                f"nonzero operator on {src} with empty key window"
            )
        min_shift = min(shifts)
        solver = None
        probes = []
        for attempt in range(probe_pad + 1):
            probes = [
                (pid, probe)
                for pid, probe in self._probe_list(src, max_n + 1 + attempt)
                if len(pid[1]) + min_shift <= self.d
            ]
            solver = LinSolver()
            full_rank = True
            for w, R, n, _ in unknowns:
                col: dict = {}
                for pid, _probe in probes:
                    shifted = (tuple(a + b for a, b in zip(pid[0], n)), pid[1])
                    for vk, c in self._word_images(w, R, src, shifted).items():
                        col[(pid,) + vk] = c
                if not solver.add_column(col):
                    full_rank = False
                    break
            if full_rank:
                break
        else:
            raise SingularTable(
                f"basis operators dependent on every probe window tried "
                f"for source {src}"
            )
        target: dict = {}
        for pid, probe in probes:
            for vk, c in self._vec(apply_op(probe)).items():
                target[(pid,) + vk] = c
        combo = solver.solve(target)
        if combo is None:
            raise DegreeBoundExceeded(
                f"operator on {src} not matched within degree window {g}"
            )
        out = {}
        for idx, c in combo.items():
            if c:
                out[unknowns[idx]] = c
        return out

    def _probe_list(self, src, max_deg: int) -> list[tuple[tuple, dict]]:
        """Probes tagged by a stable id (exps, ext) of the seed monomial."""
        src = tuple(src)
        out = []
        for exps in poly_exponents(self.d, max_deg):
            for ext in ext_subsets(self.d):
                out.append(((exps, ext), self.module_monomial(src, exps, ext)))
        return out

    # -- relations -------------------------------------------------------------

    def Q_dict(self, i, j, r1: int, r2: int) -> dict:
        """(u-v)^{h(i,j)} (v-u)^{h(j,i)} with u = Y_{r1}, v = Y_{r2}, as a
        dict of exponent tuples; zero polynomial for i = j."""
        if i == j:
            return {}
        out = {(0,) * self.d: _ONE}

        def mul_diff(cur, ra, rb):
            nxt = {}
            for exps, c in cur.items():
                up = list(exps)
                up[ra - 1] += 1
                dn = list(exps)
                dn[rb - 1] += 1
                for e2, c2 in ((tuple(up), c), (tuple(dn), -c)):
                    s = nxt.get(e2, 0) + c2
                    if s:
                        nxt[e2] = s
                    else:
                        nxt.pop(e2, None)
            return nxt

        for _ in range(self.h(i, j)):
            out = mul_diff(out, r1, r2)
        for _ in range(self.h(j, i)):
            out = mul_diff(out, r2, r1)
        return out

    def box_dict(self, i, j, r: int) -> dict:
        """(Q_{ij}(Y_{r+2}, Y_{r+1}) - Q_{ij}(Y_r, Y_{r+1}))/(Y_{r+2} - Y_r)."""
        base = self.Q_dict(i, j, 1, 2)  # exponents (alpha, beta) on (u, v)
        out: dict = {}
        for exps, c in base.items():
            alpha = exps[0]
            beta = exps[1]
            for t in range(alpha):
                e = [0] * self.d
                e[r - 1] += t
                e[r + 1] += alpha - 1 - t
                e[r] += beta
                key = tuple(e)
                s = out.get(key, 0) + c
                if s:
                    out[key] = s
                else:
                    out.pop(key, None)
        return out

    def relation_suite(self, src) -> list[tuple[str, list]]:
        """Defining relations at one source label, as (id, combo) with
        combo a list of (coeff, word) summing to zero on the component."""
        d = self.d
        src = tuple(src)
        rels = []
        e_src = ("e", src)

        def word(*letters):
            return list(letters) + [e_src]

        for r in range(1, d):
            equal = src[r - 1] == src[r]
            tau = ("tau", r)
            # quadratic relation
            if equal:
                rels.append((f"R2_tau{r}", [(1, word(tau, tau))]))
            else:
                # index order pinned against the action: the second crossing
                # reads its arrow count off the swapped component
                q = self.Q_dict(src[r], src[r - 1], r, r + 1)
                rels.append(
                    (f"R2_tau{r}", [(1, word(tau, tau)), (-1, word(("ypoly", q)))])
                )
            # dot slides
            for u in (r, r + 1):
                other = r + 1 if u == r else r
                lhs = word(tau, ("dot", u))
                rhs = word(("dot", other), tau)
                combo = [(1, lhs), (-1, rhs)]
                if equal:
                    sign = -1 if u == r else 1
                    combo.append((sign, word()))
                rels.append((f"slide_tau{r}_dot{u}", combo))
            # far dots commute
            for u in range(1, d + 1):
                if u in (r, r + 1):
                    continue
                rels.append(
                    (
                        f"far_tau{r}_dot{u}",
                        [(1, word(tau, ("dot", u))), (-1, word(("dot", u), tau))],
                    )
                )
        for r in range(1, d):
            for u in range(r + 2, d):
                rels.append(
                    (
                        f"far_tau{r}_tau{u}",
                        [
                            (1, word(("tau", r), ("tau", u))),
                            (-1, word(("tau", u), ("tau", r))),
                        ],
                    )
                )
        for r in range(1, d - 1):
            i, j, k = src[r - 1], src[r], src[r + 1]
            lhs = word(("tau", r), ("tau", r + 1), ("tau", r))
            rhs = word(("tau", r + 1), ("tau", r), ("tau", r + 1))
            combo = [(1, lhs), (-1, rhs)]
            if i == k and i != j:
                # the braid defect is the two-variable divided difference of
                # Q_{ij} in the outer strands; the sign attribution to the
                # word order below was pinned against the action
                box = self.box_dict(i, j, r)
                combo.append((1, word(("ypoly", box))))
            rels.append((f"R3_tau{r}", combo))
        # floating dot relations
        fd = ("fdot",)
        rels.append(("fdot_sq", [(1, word(fd, fd))]))
        for r in range(1, d + 1):
            rels.append(
                (
                    f"fdot_dot{r}",
                    [(1, word(fd, ("dot", r))), (-1, word(("dot", r), fd))],
                )
            )
        for r in range(2, d):
            rels.append(
                (
                    f"fdot_tau{r}",
                    [(1, word(fd, ("tau", r))), (-1, word(("tau", r), fd))],
                )
            )
        if d >= 2:
            t1 = ("tau", 1)
            rels.append(
                (
                    "fdot_braid",
                    [(1, word(fd, t1, fd, t1)), (1, word(t1, fd, t1, fd))],
                )
            )
        return rels

    def check_relation(self, combo, probes) -> dict | None:
        for f in probes:
            acc: dict = {}
            for c, wrd in combo:
                module_add_into(acc, self.act_letters(wrd, f), c)
            if acc:
                return acc
        return None

    def verify_relations(self, max_deg: int = 2) -> list[tuple[str, bool, str]]:
        records = []
        for src in self.labels:
            probes = self.module_probes(src, max_deg)
            for rel_id, combo in self.relation_suite(src):
                bad = self.check_relation(combo, probes)
                tag = f"{rel_id}@{'.'.join(str(x) for x in src)}"
                records.append(
                    (tag, bad is None, "" if bad is None else f"residue on {sorted(bad)}")
                )
        return records

    # -- differential ------------------------------------------------------------

    def d_lambda_words(self, key) -> list[tuple[Fraction, list]]:
        """Leibniz expansion of the differential of one basis element, as
        signed application-order sequences on the source component."""
        w, R, n, src = key
        app = self.basis_app_sequence(w, R, n)
        out = []
        fdot_positions = [j for j, letter in enumerate(app) if letter[0] == "fdot"]
        for count, j in enumerate(fdot_positions):
            # label of the component at the point this floating dot acts
            lab = tuple(src)
            for letter in app[:j]:
                if letter[0] == "tau":
                    lab = tuple(Permutation.s(letter[1], self.d).act_on_seq(lab))
            power = self.lam.get(lab[0], 0)
            e = [0] * self.d
            e[0] = power
            repl = {tuple(e): _ONE if power % 2 == 0 else -_ONE}
            new_app = app[:j] + [("ypoly", repl)] + app[j + 1 :]
            # letters applied after this one contribute the Leibniz sign
            sign = _ONE if (len(fdot_positions) - 1 - count) % 2 == 0 else -_ONE
            out.append((sign, new_app))
        return out

    def d_lambda(self, elem: dict) -> dict:
        out: dict = {}
        by_src: dict = {}
        for key, c in elem.items():
            by_src.setdefault(key[3], {})[key] = c
        for src, part in by_src.items():
            terms = []
            for key, c in part.items():
                for sign, app in self.d_lambda_words(key):
                    terms.append((c * sign, app))
            if not terms:
                continue

            def op(f, terms=terms, src=src):
                acc: dict = {}
                for c, app in terms:
                    module_add_into(acc, self.act_app(app, src, f), c)
                return acc

            hints = [app for _, app in terms]
            elem_add_into(out, self.to_basis(op, src, hints=hints))
        return out

    # -- cyclotomic quotient --------------------------------------------------------

    def basis_keys_window(self, cap: int, with_fdots: bool = False) -> list:
        out = []
        for src in self.labels:
            for w in Permutation.all(self.d):
                Rs = list(ext_subsets(self.d)) if with_fdots else [()]
                for R in Rs:
                    for n in poly_exponents(self.d, cap):
                        out.append((w, R, n, tuple(src)))
        return out

    def _key_times_generator(self, key, gen) -> dict:
        """Product of a basis element with a one-letter generator, expanded
        over the basis.  gen is ("L", letter) or ("R", letter)."""
        side, letter = gen
        w, R, n, src = key
        if side == "R" and letter[0] == "dot":
            n2 = list(n)
            n2[letter[1] - 1] += 1
            return {(w, R, tuple(n2), src): _ONE}
        app = self.basis_app_sequence(w, R, n)
        if side == "R" and letter[0] == "tau":
            new_src = tuple(Permutation.s(letter[1], self.d).act_on_seq(src))
            hint = [letter] + app

            def op(f):
                return self.act_app(app, src, self.act_letter(letter, f))

            return self.to_basis(op, new_src, hints=[hint])
        hint = app + [letter]

        def op(f):
            return self.act_letter(letter, self.act_app(app, src, f))

        return self.to_basis(op, src, hints=[hint])

    def cyclotomic_dim(self, cap: int | None = None) -> int:
        """Dimension of the quotient of the dot-and-crossing subalgebra by
        the two-sided ideal of the leading cyclotomic dots."""
        if cap is None:
            cap = 2 * sum(self.lam.values()) + self.d
        slack = self.d * (self.d - 1) // 2
        cap_big = cap + 1 + slack
        dims = {}
        closure = self._cyclotomic_closure(cap_big)
        for level in (cap, cap + 1):
            dims[level] = self._quotient_dim_at(closure, level)
        if dims[cap] != dims[cap + 1]:
            raise NotStabilized(
                f"cyclotomic dimension still moving: {dims[cap]} at {cap}, "
                f"{dims[cap + 1]} at {cap + 1}"
            )
        return dims[cap]

    def _cyclotomic_closure(self, cap_big: int) -> list[dict]:
        def window_ok(vec):
            return all(sum(k[2]) <= cap_big for k in vec)

        gens = []
        for r in range(1, self.d + 1):
            gens.append(("L", ("dot", r)))
            gens.append(("R", ("dot", r)))
        for r in range(1, self.d):
            gens.append(("L", ("tau", r)))
            gens.append(("R", ("tau", r)))
        seeds = []
        for src in self.labels:
            n = [0] * self.d
            n[0] = self.lam.get(src[0], 0)
            seeds.append({(self._id, (), tuple(n), tuple(src)): _ONE})
        solver = LinSolver()
        accepted = []
        frontier = []
        for vec in seeds:
            if solver.add_column(vec):
                accepted.append(vec)
                frontier.append(vec)
        prod_cache: dict = {}
        while frontier:
            new_frontier = []
            for vec in frontier:
                for gen in gens:
                    out: dict = {}
                    for key, c in vec.items():
                        hit = prod_cache.get((key, gen))
                        if hit is None:
                            hit = self._key_times_generator(key, gen)
                            prod_cache[(key, gen)] = hit
                        elem_add_into(out, hit, c)
                    if not out or not window_ok(out):
                        continue
                    if solver.add_column(out):
                        accepted.append(out)
                        new_frontier.append(out)
            frontier = new_frontier
        return accepted

    def _quotient_dim_at(self, closure: list[dict], cap: int) -> int:
        full = LinSolver()
        high = LinSolver()
        for vec in closure:
            full.add_column(vec)
            high.add_column({k: v for k, v in vec.items() if sum(k[2]) > cap})
        ideal_in_window = full.rank - high.rank
        n_keys = len(self.basis_keys_window(cap))
        return n_keys - ideal_in_window
