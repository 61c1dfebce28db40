"""Homology of the DG-algebras at desk scale.

Two finite routes make the degree-zero-concentration claims checkable.
The filtration route bounds the degenerate Hecke side by the weight
|a| + ell*|b| and watches positive-degree classes die as the bound
grows.  The tower route truncates the completed algebras (Hecke at the
orbit of a, KLR at its label set) modulo the N-th power of the maximal
ideal and checks that transition maps kill positive-degree classes.
Degree-zero dimensions are compared against cyclotomic quotient
dimensions obtained by independent row reduction.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, combinations_with_replacement
from math import factorial

from .completion import orbit, truncate
from .errors import (
    FiltrationLeak,
    InternalError,
    InvalidParam,
    NotStabilized,
    VariantMismatch,
)
from .hecke_core import HeckeAlgebra, add_into
from .klr_core import KLRAlgebra
from .linalg import LinSolver, kernel_basis, rank_of
from .params import ParamSet
from .permutations import Permutation
from .superrings import SuperPoly, poly_exponents

_ONE = Fraction(1)


@dataclass
class FiniteComplex:
    """Finite chain complex graded by the count of odd generators.

    basis maps each degree to an ordered list of basis keys; diff maps a
    degree k to {key: column}, where a column is a sparse vector over
    the degree k-1 keys.  The square of the differential is checked at
    construction time.
    """

    label: str
    basis: dict
    diff: dict

    def __post_init__(self):
        self._check_square_zero()

    def degrees(self) -> list[int]:
        return sorted(self.basis)

    def dim(self, k: int) -> int:
        return len(self.basis.get(k, ()))

    def total_dim(self) -> int:
        return sum(len(keys) for keys in self.basis.values())

    def column(self, k: int, key) -> dict:
        return self.diff.get(k, {}).get(key, {})

    def _check_square_zero(self) -> None:
        for k in self.degrees():
            for key in self.basis[k]:
                col = self.column(k, key)
                acc: dict = {}
                for key2, c in col.items():
                    for key3, c3 in self.column(k - 1, key2).items():
                        s = acc.get(key3, 0) + c * c3
                        if s:
                            acc[key3] = s
                        else:
                            acc.pop(key3, None)
                if acc:
                    raise InternalError(
                        f"{self.label}: differential does not square to zero on {key!r}"
                    )


@dataclass
class HomologyReport:
    """Exact rank data of one finite complex, per degree."""

    label: str
    dims: dict
    cycles: dict
    boundaries: dict
    homology: dict
    transitions: dict | None = None

    def euler_ok(self) -> bool:
        chain = sum((-1) ** k * n for k, n in self.dims.items())
        homol = sum((-1) ** k * n for k, n in self.homology.items())
        return chain == homol


def homology_ranks(c: FiniteComplex) -> HomologyReport:
    degs = c.degrees()
    dims = {k: c.dim(k) for k in degs}
    rank_out = {}
    for k in degs:
        cols = [c.column(k, key) for key in c.basis[k]]
        rank_out[k] = rank_of(cols)
    cycles = {k: dims[k] - rank_out[k] for k in degs}
    boundaries = {k: rank_out.get(k + 1, 0) for k in degs}
    homology = {}
    for k in degs:
        h = cycles[k] - boundaries[k]
        if h < 0:
            raise InternalError(f"{c.label}: negative homology rank in degree {k}")
        homology[k] = h
    return HomologyReport(c.label, dims, cycles, boundaries, homology)


# -- filtration subcomplexes (degenerate variant) ---------------------------------


def build_filtration_complex(ps: ParamSet, D: int) -> FiniteComplex:
    """Subcomplex spanned by the X^a T_w xi^b with |a| + ell*|b| <= D."""
    if ps.variant != "degenerate":
        raise VariantMismatch(
            "the filtration route needs polynomial degrees bounded below; "
            "use the quotient tower for the q-variant"
        )
    if D < 0:
        raise InvalidParam("the filtration bound must be >= 0")
    H = HeckeAlgebra.from_params(ps)
    d, ell = ps.d, ps.ell
    zero_a = (0,) * d
    basis: dict = {}
    for k in range(d + 1):
        keys = []
        cap = D - ell * k
        if cap >= 0:
            for b in combinations(range(1, d + 1), k):
                for w in sorted(Permutation.all(d)):
                    for a in poly_exponents(d, cap):
                        keys.append((a, w, b))
        basis[k] = keys
    gcache: dict = {}
    diff: dict = {}
    for k in range(1, d + 1):
        cols = {}
        for key in basis[k]:
            a, w, b = key
            G = gcache.get((w, b))
            if G is None:
                G = H.differential({(zero_a, w, b): _ONE})
                gcache[(w, b)] = G
            col = {}
            for (a2, w2, b2), c in G.items():
                na = tuple(x + y for x, y in zip(a, a2))
                if sum(na) + ell * len(b2) > D:
                    raise FiltrationLeak(
                        f"image of {key!r} escapes the filtration bound {D}"
                    )
                col[(na, w2, b2)] = c
            cols[key] = col
        diff[k] = cols
    return FiniteComplex(f"filtration(D={D})", basis, diff)


# -- quotient complexes of the completed algebras ---------------------------------


def key_weight(side: str, key) -> int:
    """Adic weight of a quotient-complex basis key."""
    if side == "hecke":
        return sum(key[1])
    return sum(key[2])


def _hecke_quotient_complex(ps: ParamSet, N: int) -> FiniteComplex:
    H = HeckeAlgebra.from_params(ps)
    d, ell = ps.d, ps.ell
    pts = orbit(ps.a)
    zero_a = (0,) * d
    exps = list(poly_exponents(d, N - 1))
    basis: dict = {}
    for k in range(d + 1):
        keys = []
        for pt in pts:
            for b in combinations(range(1, d + 1), k):
                for w in sorted(Permutation.all(d)):
                    for a in exps:
                        keys.append((pt, a, w, b))
        basis[k] = keys
    gcache: dict = {}
    germs: dict = {}
    diff: dict = {}
    for k in range(1, d + 1):
        cols = {}
        for key in basis[k]:
            pt, a, w, b = key
            G = gcache.get((w, b))
            if G is None:
                G = H.differential({(zero_a, w, b): _ONE})
                gcache[(w, b)] = G
            col: dict = {}
            for (a2, w2, b2), c in G.items():
                germ = germs.get((pt, a2))
                if germ is None:
                    mono = SuperPoly.monomial(H.kind, d, a2)
                    germ = truncate(mono, pt, N, ps).component(pt)
                    if germ is None:
                        germ = SuperPoly.zero("P", d)
                    germs[(pt, a2)] = germ
                for (e2, _ext), c2 in germ.coeffs.items():
                    na = tuple(x + y for x, y in zip(a, e2))
                    if sum(na) >= N:
                        continue
                    tgt = (pt, na, w2, b2)
                    s = col.get(tgt, 0) + c * c2
                    if s:
                        col[tgt] = s
                    else:
                        col.pop(tgt, None)
            cols[key] = col
        diff[k] = cols
    return FiniteComplex(f"quotient-hecke(N={N})", basis, diff)


def _klr_quotient_complex(ps: ParamSet, N: int) -> FiniteComplex:
    klr = KLRAlgebra(ps)
    d = ps.d
    zero_n = (0,) * d
    basis: dict = {k: [] for k in range(d + 1)}
    for key in klr.basis_keys_window(N - 1, with_fdots=True):
        basis[len(key[1])].append(key)
    gcache: dict = {}
    diff: dict = {}
    for k in range(1, d + 1):
        cols = {}
        for key in basis[k]:
            w, R, n, src = key
            G = gcache.get((w, R, src))
            if G is None:
                G = klr.d_lambda({(w, R, zero_n, src): _ONE})
                gcache[(w, R, src)] = G
            col: dict = {}
            for (w2, R2, n2, src2), c in G.items():
                nn = tuple(x + y for x, y in zip(n, n2))
                if sum(nn) >= N:
                    continue
                tgt = (w2, R2, nn, src2)
                s = col.get(tgt, 0) + c
                if s:
                    col[tgt] = s
                else:
                    col.pop(tgt, None)
            cols[key] = col
        diff[k] = cols
    return FiniteComplex(f"quotient-klr(N={N})", basis, diff)


def build_quotient_complex(ps: ParamSet, N: int, side: str = "hecke") -> FiniteComplex:
    """Completed DG-algebra modulo the N-th power of the maximal ideal.

    The Hecke side expands at the orbit points of a (shifted exponent
    tuples of total degree < N); the KLR side keeps basis words with dot
    degree < N.  The differential descends because it never lowers the
    adic weight.
    """
    if N < 1:
        raise InvalidParam("the truncation order must be >= 1")
    if side == "hecke":
        return _hecke_quotient_complex(ps, N)
    if side == "klr":
        return _klr_quotient_complex(ps, N)
    raise InvalidParam(f"unknown side {side!r}")


def transition_vec(side: str, vec: dict, N_lo: int) -> dict:
    """Projection of a chain vector to the coarser truncation order."""
    return {key: c for key, c in vec.items() if key_weight(side, key) < N_lo}


def transition_homology_ranks(
    c_hi: FiniteComplex, c_lo: FiniteComplex, side: str, N_lo: int
) -> dict:
    """Rank of the map induced on homology by the tower projection.

    Per degree k: the dimension of the image of the projected cycles of
    the finer complex inside the homology of the coarser one.
    """
    out = {}
    for k in sorted(set(c_hi.degrees()) | set(c_lo.degrees())):
        solver = _boundary_solver(c_lo, k)
        base = solver.rank
        for cyc in _cycle_vectors(c_hi, k):
            solver.add_column(transition_vec(side, cyc, N_lo))
        out[k] = solver.rank - base
    return out


# -- rank bookkeeping helpers ------------------------------------------------------


def _cycle_vectors(c: FiniteComplex, k: int) -> list[dict]:
    keys = c.basis.get(k, [])
    cols = [c.column(k, key) for key in keys]
    out = []
    for rel in kernel_basis(cols):
        out.append({keys[idx]: coef for idx, coef in rel.items()})
    return out


def _boundary_solver(c: FiniteComplex, k: int) -> LinSolver:
    solver = LinSolver()
    for key in c.basis.get(k + 1, []):
        solver.add_column(c.column(k + 1, key))
    return solver


# -- quasi-isomorphism instances ---------------------------------------------------


def _filtration_checks(ps: ParamSet, D_list) -> list[tuple]:
    ell = ps.ell
    if D_list is None:
        D_list = [2 * ell, 4 * ell, 6 * ell, 8 * ell]
    D_list = sorted(set(int(D) for D in D_list))
    built: dict = {}

    def complex_at(D):
        if D not in built:
            built[D] = build_filtration_complex(ps, D)
        return built[D]

    checks = []
    for D in D_list:
        small = complex_at(max(D - ell, 0))
        big = complex_at(D)
        ok = True
        witness = "all positive-degree classes bound"
        for k in range(1, ps.d + 1):
            boundaries = _boundary_solver(big, k)
            for cyc in _cycle_vectors(small, k):
                if not boundaries.contains(cyc):
                    ok = False
                    witness = f"degree {k} class survives at D={D}: {_render(cyc)}"
                    break
            if not ok:
                break
        checks.append((f"vanish_D{D}", ok, witness))
    reports = {D: homology_ranks(built[D]) for D in D_list}
    h0 = [reports[D].homology.get(0, 0) for D in D_list]
    tail = h0[-3:] if len(h0) >= 3 else h0
    checks.append(
        ("h0_stable", len(set(tail)) == 1, f"H^0 dims along D={D_list}: {h0}")
    )
    oracle = cyclotomic_dim_hecke(ps)
    checks.append(
        (
            "h0_oracle",
            h0[-1] == oracle.total,
            f"H^0 = {h0[-1]}, cyclotomic dimension = {oracle.total}",
        )
    )
    euler_ok = all(reports[D].euler_ok() for D in D_list)
    checks.append(("euler", euler_ok, "chain and homology Euler characteristics agree"))
    return checks


def _tower_checks(ps: ParamSet, N_list, side: str) -> list[tuple]:
    if N_list is None:
        N_list = [2, 3, 4]
    N_list = sorted(set(int(N) for N in N_list))
    if len(N_list) < 2:
        raise InvalidParam("the tower route needs at least two truncation orders")
    # one odd generator removed raises the adic weight by up to ell, so
    # positive-degree classes at order N are supported in weights >= N - ell
    # and a transition can only kill them when it drops at least ell digits
    step = ps.ell
    pairs = set()
    for hi in N_list:
        cands = [lo for lo in N_list if hi - lo >= step]
        if cands:
            pairs.add((max(cands), hi))
    if not pairs:
        raise InvalidParam(
            f"the tower needs two truncation orders at least {step} apart"
        )
    pairs = sorted(pairs)
    built = {N: build_quotient_complex(ps, N, side) for N in N_list}
    checks = []
    for lo, hi in pairs:
        chi, clo = built[hi], built[lo]
        ok = True
        witness = "projected positive-degree classes bound"
        for k in range(1, ps.d + 1):
            boundaries = _boundary_solver(clo, k)
            for cyc in _cycle_vectors(chi, k):
                proj = transition_vec(side, cyc, lo)
                if not boundaries.contains(proj):
                    ok = False
                    witness = (
                        f"degree {k} class of N={hi} survives at N={lo}: {_render(proj)}"
                    )
                    break
            if not ok:
                break
        checks.append((f"tower_vanish_N{hi}to{lo}", ok, witness))
    chain_ok = True
    chain_witness = "projection commutes with the differential"
    for lo, hi in pairs:
        chi, clo = built[hi], built[lo]
        lo_keys = {k: set(clo.basis.get(k, ())) for k in clo.basis}
        for k in range(1, ps.d + 1):
            for key in chi.basis.get(k, ()):
                lhs = transition_vec(side, chi.column(k, key), lo)
                rhs = clo.column(k, key) if key in lo_keys.get(k, ()) else {}
                if lhs != rhs:
                    chain_ok = False
                    chain_witness = f"mismatch on {key!r} between N={hi} and N={lo}"
                    break
            if not chain_ok:
                break
        if not chain_ok:
            break
    checks.append(("tower_chain_map", chain_ok, chain_witness))
    reports = {N: homology_ranks(built[N]) for N in N_list}
    h0 = [reports[N].homology.get(0, 0) for N in N_list]
    checks.append(
        ("h0_stable", h0[-1] == h0[-2], f"H^0 dims along N={N_list}: {h0}")
    )
    if side == "hecke":
        oracle = cyclotomic_dim_hecke(ps)
        mu = tuple(sorted(ps.a))
        expected = oracle.blocks.get(mu, 0)
        label = f"block {mu}"
    else:
        expected = KLRAlgebra(ps).cyclotomic_dim()
        label = "KLR cyclotomic dimension"
    checks.append(
        (
            "h0_oracle",
            h0[-1] == expected,
            f"H^0 = {h0[-1]}, {label} = {expected}",
        )
    )
    euler_ok = all(reports[N].euler_ok() for N in N_list)
    checks.append(("euler", euler_ok, "chain and homology Euler characteristics agree"))
    return checks


def verify_quasi_iso(
    ps: ParamSet,
    D_list=None,
    N_list=None,
    side: str | None = None,
) -> list[tuple]:
    """Concentration-in-degree-zero checks, as (check_id, ok, witness) triples.

    Passing D_list selects the filtration route (degenerate variant
    only); passing N_list selects the quotient tower, on the Hecke side
    by default and on the KLR side with side="klr".  With neither list
    the route follows the variant: filtration for degenerate parameter
    sets, Hecke tower for q ones.
    """
    if D_list is not None and N_list is not None:
        raise InvalidParam("choose either the filtration or the tower route")
    if D_list is not None:
        route = "filtration"
    elif N_list is not None:
        route = "tower"
    else:
        route = "filtration" if ps.variant == "degenerate" else "tower"
    if route == "filtration":
        if side not in (None, "hecke"):
            raise InvalidParam("the filtration route computes on the Hecke side")
        return _filtration_checks(ps, D_list)
    if side is None:
        side = "hecke"
    if side not in ("hecke", "klr"):
        raise InvalidParam(f"unknown side {side!r}")
    return _tower_checks(ps, N_list, side)


def _render(vec: dict, limit: int = 3) -> str:
    items = sorted(vec.items(), key=lambda kv: repr(kv[0]))[:limit]
    body = ", ".join(f"{key!r}: {c}" for key, c in items)
    more = "" if len(vec) <= limit else f", ... ({len(vec)} terms)"
    return "{" + body + more + "}"


# -- cyclotomic dimension oracle ----------------------------------------------------


@dataclass
class CyclotomicDims:
    """Row-reduced dimension of the cyclotomic quotient with its block split.

    blocks maps a sorted d-multiset of eigenvalues drawn from I to the
    dimension of the joint generalized eigenspace of the elementary
    symmetric central elements.  Multisets with trivial eigenspace are
    omitted, and blocks at eigenvalues outside I are not searched for,
    so the block dimensions may sum to less than total.
    """

    total: int
    blocks: dict
    cap: int

    def leftover(self) -> int:
        return self.total - sum(self.blocks.values())


def _hkey_weight(key) -> int:
    return sum(abs(e) for e in key[0])


def _hecke_closure(H: HeckeAlgebra, ps: ParamSet, cap_big: int) -> list[dict]:
    def window_ok(vec):
        return all(_hkey_weight(k) <= cap_big for k in vec)

    letters = []
    for r in range(1, ps.d + 1):
        letters.append(("poly", H.xvar(r)))
        if ps.variant == "q":
            letters.append(("poly", H.xvar(r, -1)))
    for r in range(1, ps.d):
        letters.append(("T", r))
    gens = []
    for letter in letters:
        elem = H.straighten([letter])
        gens.append(("L", elem))
        gens.append(("R", elem))
    seed = H.straighten([("poly", H.cyclotomic_poly())])
    solver = LinSolver()
    accepted = []
    frontier = []
    if solver.add_column(seed):
        accepted.append(seed)
        frontier.append(seed)
    prod_cache: dict = {}
    while frontier:
        new_frontier = []
        for vec in frontier:
            for gidx, (lr, ge) in enumerate(gens):
                out: dict = {}
                for key, c in vec.items():
                    hit = prod_cache.get((key, gidx))
                    if hit is None:
                        single = {key: _ONE}
                        hit = H.multiply(ge, single) if lr == "L" else H.multiply(single, ge)
                        prod_cache[(key, gidx)] = hit
                    add_into(out, hit, c)
                if not out or not window_ok(out):
                    continue
                if solver.add_column(out):
                    accepted.append(out)
                    new_frontier.append(out)
        frontier = new_frontier
    return accepted


def _hecke_quotient_dim_at(closure: list[dict], d: int, L: int, laurent: bool) -> int:
    full = LinSolver()
    high = LinSolver()
    for vec in closure:
        full.add_column(vec)
        high.add_column({k: v for k, v in vec.items() if _hkey_weight(k) > L})
    ideal_in_window = full.rank - high.rank
    n_keys = sum(1 for _ in poly_exponents(d, L, laurent)) * factorial(d)
    return n_keys - ideal_in_window


def _elem_sym_poly(H: HeckeAlgebra, d: int, k: int) -> SuperPoly:
    out = SuperPoly.zero(H.kind, d)
    for subset in combinations(range(d), k):
        e = [0] * d
        for r in subset:
            e[r] = 1
        out = out + SuperPoly.monomial(H.kind, d, tuple(e))
    return out


def _elem_sym_value(mu: tuple, k: int) -> Fraction:
    total = Fraction(0)
    for subset in combinations(range(len(mu)), k):
        prod = Fraction(1)
        for r in subset:
            prod *= mu[r]
        total += prod
    return total


def _mat_mult(A: list, B: list) -> list:
    n = len(A)
    out = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        Ai = A[i]
        for t in range(n):
            c = Ai[t]
            if not c:
                continue
            Bt = B[t]
            row = out[i]
            for j in range(n):
                if Bt[j]:
                    row[j] += c * Bt[j]
    return out


def _hecke_blocks(
    H: HeckeAlgebra, ps: ParamSet, closure: list[dict], cap: int, total: int
) -> dict:
    d = ps.d
    laurent = ps.variant == "q"
    S_ideal = LinSolver()
    for vec in closure:
        S_ideal.add_column(vec)
    keys = []
    for a in poly_exponents(d, cap, laurent):
        for w in Permutation.all(d):
            keys.append((a, w, ()))
    keys.sort(key=lambda k: (_hkey_weight(k), k[0], k[1]))
    S2 = LinSolver()
    selected = []
    pos_of = {}
    for key in keys:
        res = S_ideal.residual({key: _ONE})
        if not res:
            continue
        attempt = S2.n_cols
        if S2.add_column(res):
            pos_of[attempt] = len(selected)
            selected.append(key)
    if len(selected) != total:
        raise NotStabilized(
            f"quotient basis size {len(selected)} differs from the stabilized "
            f"dimension {total}"
        )
    n = total
    mats = []
    for k in range(1, d + 1):
        elem = H.straighten([("poly", _elem_sym_poly(H, d, k))])
        M = [[Fraction(0)] * n for _ in range(n)]
        for j, key in enumerate(selected):
            prod = H.multiply(elem, {key: _ONE})
            combo = S2.solve(S_ideal.residual(prod))
            if combo is None:
                raise NotStabilized(
                    "central multiplication leaves the stabilized window"
                )
            for attempt, c in combo.items():
                M[pos_of[attempt]][j] = c
        mats.append(M)
    blocks = {}
    assigned = 0
    for mu in combinations_with_replacement(sorted(ps.I), d):
        stacked = [dict() for _ in range(n)]
        for kk, M in enumerate(mats, start=1):
            val = _elem_sym_value(mu, kk)
            P = [
                [M[i][j] - (val if i == j else 0) for j in range(n)]
                for i in range(n)
            ]
            Pn = P
            steps = 1
            while steps < n:
                Pn = _mat_mult(Pn, P)
                steps += 1
            for j in range(n):
                for i in range(n):
                    if Pn[i][j]:
                        stacked[j][(kk, i)] = Pn[i][j]
        dim = n - rank_of(stacked)
        if dim:
            blocks[mu] = dim
            assigned += dim
    if assigned > total:
        raise InternalError("block dimensions exceed the quotient dimension")
    return blocks


def cyclotomic_dim_hecke(ps: ParamSet, cap: int | None = None) -> CyclotomicDims:
    """Dimension of the cyclotomic quotient by exact row reduction.

    The two-sided ideal generated by the cyclotomic polynomial is closed
    under generator multiplication inside a degree window, and the
    quotient dimension is read off at cap and cap+1; disagreement raises
    NotStabilized.  Block dimensions come from the joint generalized
    eigenspaces of the elementary symmetric central elements.
    """
    H = HeckeAlgebra.from_params(ps)
    d = ps.d
    if cap is None:
        cap = 2 * ps.ell + d
    slack = d * (d - 1) // 2
    cap_big = cap + 1 + slack
    laurent = ps.variant == "q"
    closure = _hecke_closure(H, ps, cap_big)
    dims = {L: _hecke_quotient_dim_at(closure, d, L, laurent) for L in (cap, cap + 1)}
    if dims[cap] != dims[cap + 1]:
        raise NotStabilized(
            f"cyclotomic dimension still moving: {dims[cap]} at {cap}, "
            f"{dims[cap + 1]} at {cap + 1}"
        )
    total = dims[cap]
    blocks = _hecke_blocks(H, ps, closure, cap, total)
    return CyclotomicDims(total, blocks, cap)
