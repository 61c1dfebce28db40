"""Batch verification front end.

Subcommands drive the library suites and emit a JSON report on stdout:
verify-relations, verify-differential, verify-bkr, homology, dims.
Reports are deterministic: checks are sorted by check_id and a
canonical hash excludes the timing fields.  Exit codes: 0 when every
check passes, 1 on a failed check, 2 on a usage or parameter error,
3 on an internal contract violation.
"""

import argparse
import hashlib
import json
import random
import sys
import time
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement

from . import __version__
from .bkr_iso import verify_bkr
from .errors import (
    HeckeKLRError,
    InvalidParam,
    NotStabilized,
    VariantMismatch,
)
from .hecke_core import HeckeAlgebra, add_into
from .homology import cyclotomic_dim_hecke, verify_quasi_iso
from .klr_core import KLRAlgebra
from .params import ParamSet, parse_scalar, scalar_str
from .superrings import SuperPoly, ext_subsets, poly_exponents
from .permutations import Permutation

_ONE = Fraction(1)


# -- report plumbing ---------------------------------------------------------------


@dataclass
class CheckRecord:
    check_id: str
    status: str
    witness: str
    ms: int


@dataclass
class Report:
    """Deterministic check report for one CLI invocation."""

    params: dict
    checks: list
    tool_version: str = __version__

    def sorted_checks(self) -> list:
        return sorted(self.checks, key=lambda rec: rec.check_id)

    def canonical_hash(self) -> str:
        payload = {
            "tool_version": self.tool_version,
            "params": self.params,
            "checks": [
                {"check_id": r.check_id, "status": r.status, "witness": r.witness}
                for r in self.sorted_checks()
            ],
        }
        text = json.dumps(payload, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(text.encode()).hexdigest()

    def to_dict(self) -> dict:
        return {
            "tool_version": self.tool_version,
            "params": self.params,
            "checks": [
                {
                    "check_id": r.check_id,
                    "status": r.status,
                    "witness": r.witness,
                    "ms": r.ms,
                }
                for r in self.sorted_checks()
            ],
            "canonical_hash": self.canonical_hash(),
        }

    def exit_code(self) -> int:
        return 0 if all(r.status == "pass" for r in self.checks) else 1


def _records_from_triples(triples, ms: int, prefix: str = "") -> list:
    out = []
    for check_id, ok, witness in triples:
        out.append(
            CheckRecord(
                check_id=prefix + check_id,
                status="pass" if ok else "fail",
                witness=str(witness),
                ms=ms,
            )
        )
    return out


# -- flag parsing helpers ----------------------------------------------------------


def _scalars(text: str) -> tuple:
    try:
        return tuple(parse_scalar(part) for part in text.split(","))
    except (ValueError, ZeroDivisionError) as exc:
        raise InvalidParam(f"bad scalar list {text!r}: {exc}")


def _default_a(variant: str, d: int, Q: tuple, q) -> tuple:
    if variant == "q":
        return tuple(q ** k for k in range(d))
    return tuple(range(d))


def _params_from_args(args, need_a: bool = False) -> ParamSet:
    Q = _scalars(args.Q) if args.Q else ((1,) if args.variant == "q" else (0,))
    q = parse_scalar(args.q) if getattr(args, "q", None) is not None else None
    if getattr(args, "a", None):
        a = _scalars(args.a)
        d = len(a) if getattr(args, "d", None) is None else args.d
        if len(a) != d:
            raise InvalidParam(f"a has {len(a)} entries, expected d = {d}")
    else:
        if need_a:
            raise InvalidParam("this command needs --a")
        d = getattr(args, "d", None)
        if d is None:
            raise InvalidParam("give --d or --a")
        if args.variant == "q" and q is None:
            raise InvalidParam("the q-variant needs --q")
        a = _default_a(args.variant, d, Q, q)
    I = _scalars(args.I) if getattr(args, "I", None) else None
    return ParamSet.make(args.variant, d, Q=Q, a=a, I=I, q=q)


def _echo_params(ps: ParamSet, extra: dict) -> dict:
    out = {
        "variant": ps.variant,
        "d": ps.d,
        "Q": [scalar_str(x) for x in ps.Q],
        "a": [scalar_str(x) for x in ps.a],
        "I": sorted(scalar_str(x) for x in ps.I),
    }
    if ps.q is not None:
        out["q"] = scalar_str(ps.q)
    out.update(extra)
    return out


# -- subcommands -------------------------------------------------------------------


def cmd_verify_relations(args) -> Report:
    ps = _params_from_args(args)
    records = []
    t0 = time.monotonic()
    H = HeckeAlgebra.from_params(ps)
    triples = H.verify_relations(args.max_deg)
    ms = int((time.monotonic() - t0) * 1000)
    records.extend(_records_from_triples(triples, ms, prefix="hecke:"))
    t0 = time.monotonic()
    klr = KLRAlgebra(ps)
    triples = klr.verify_relations(min(args.max_deg, 2))
    ms = int((time.monotonic() - t0) * 1000)
    records.extend(_records_from_triples(triples, ms, prefix="klr:"))
    extra = {"command": "verify-relations", "max_deg": args.max_deg}
    return Report(params=_echo_params(ps, extra), checks=records)


def _random_theta_image(rng, H: HeckeAlgebra, max_deg: int = 3) -> SuperPoly:
    out = SuperPoly.zero(H.kind, H.d)
    while out.is_zero():
        for k in range(max_deg + 1):
            c = rng.randint(-3, 3)
            if c:
                e = [0] * H.d
                e[0] = k
                out = out + SuperPoly.monomial(H.kind, H.d, tuple(e), (), Fraction(c))
    return out


def cmd_verify_differential(args) -> Report:
    ps = _params_from_args(args)
    H = HeckeAlgebra.from_params(ps)
    d = ps.d
    records = []

    t0 = time.monotonic()
    bad = None
    laurent = ps.variant == "q"
    for exps in poly_exponents(d, args.max_deg, laurent):
        for w in sorted(Permutation.all(d)):
            for b in ext_subsets(d):
                elem = {(exps, w, b): _ONE}
                if H.differential(H.differential(elem)):
                    bad = (exps, w, b)
                    break
            if bad:
                break
        if bad:
            break
    ms = int((time.monotonic() - t0) * 1000)
    records.append(
        CheckRecord(
            "dsquare_hecke",
            "pass" if bad is None else "fail",
            "" if bad is None else f"square nonzero on {bad!r}",
            ms,
        )
    )

    t0 = time.monotonic()
    klr = KLRAlgebra(ps)
    bad = None
    for key in klr.basis_keys_window(args.max_deg, with_fdots=True):
        if klr.d_lambda(klr.d_lambda({key: _ONE})):
            bad = key
            break
    ms = int((time.monotonic() - t0) * 1000)
    records.append(
        CheckRecord(
            "dsquare_klr",
            "pass" if bad is None else "fail",
            "" if bad is None else f"square nonzero on {bad!r}",
            ms,
        )
    )

    if d >= 2:
        t0 = time.monotonic()
        rng = random.Random(args.seed)
        word1 = [("T", 1), ("theta",), ("T", 1), ("theta",)]
        word2 = [("theta",), ("T", 1), ("theta",), ("T", 1)]
        word3 = [("theta",), ("T", 1), ("theta",)]
        bad_w = ""
        for _ in range(args.samples):
            P = _random_theta_image(rng, H)
            total: dict = {}
            add_into(total, H.word_differential(word1, P))
            add_into(total, H.word_differential(word2, P))
            if ps.variant == "q":
                add_into(total, H.word_differential(word3, P), -(ps.q - 1))
            if total:
                bad_w = f"nonzero image for P = {P!r}"
                break
        ms = int((time.monotonic() - t0) * 1000)
        records.append(
            CheckRecord(
                "theta_braid_compat", "pass" if not bad_w else "fail", bad_w, ms
            )
        )

    extra = {
        "command": "verify-differential",
        "max_deg": args.max_deg,
        "samples": args.samples,
        "seed": args.seed,
    }
    return Report(params=_echo_params(ps, extra), checks=records)


def cmd_verify_bkr(args) -> Report:
    ps = _params_from_args(args, need_a=True)
    t0 = time.monotonic()
    triples = verify_bkr(ps, args.trunc, samples=args.samples, seed=args.seed)
    ms = int((time.monotonic() - t0) * 1000)
    extra = {
        "command": "verify-bkr",
        "trunc": args.trunc,
        "samples": args.samples,
        "seed": args.seed,
    }
    return Report(
        params=_echo_params(ps, extra),
        checks=_records_from_triples(triples, ms),
    )


def cmd_homology(args) -> Report:
    ps = _params_from_args(args)
    t0 = time.monotonic()
    if args.route == "filtration":
        ell = ps.ell
        Dmax = args.Dmax if args.Dmax is not None else 8 * ell
        D_list = list(range(2 * ell, Dmax + 1, 2 * ell))
        if not D_list:
            raise InvalidParam(f"--Dmax {Dmax} leaves no filtration bounds")
        triples = verify_quasi_iso(ps, D_list=D_list)
        extra = {"command": "homology", "route": "filtration", "D_list": D_list}
    else:
        Nmax = args.Nmax if args.Nmax is not None else 4
        N_list = list(range(2, Nmax + 1))
        triples = verify_quasi_iso(ps, N_list=N_list, side=args.side)
        extra = {
            "command": "homology",
            "route": "tower",
            "N_list": N_list,
            "side": args.side,
        }
    ms = int((time.monotonic() - t0) * 1000)
    return Report(
        params=_echo_params(ps, extra),
        checks=_records_from_triples(triples, ms),
    )


def cmd_dims(args) -> Report:
    ps = _params_from_args(args)
    records = []
    t0 = time.monotonic()
    oracle = cyclotomic_dim_hecke(ps, cap=args.cap)
    ms = int((time.monotonic() - t0) * 1000)
    records.append(
        CheckRecord(
            "hecke_total", "pass", f"dim {oracle.total} at cap {oracle.cap}", ms
        )
    )
    for mu, dim in sorted(oracle.blocks.items()):
        tag = ",".join(scalar_str(x) for x in mu)
        records.append(CheckRecord(f"hecke_block_{tag}", "pass", f"dim {dim}", ms))
    records.append(
        CheckRecord(
            "blocks_within_total",
            "pass" if oracle.leftover() >= 0 else "fail",
            f"unattributed dimension {oracle.leftover()}",
            ms,
        )
    )
    t0 = time.monotonic()
    mu = tuple(sorted(ps.a))
    kdim = KLRAlgebra(ps).cyclotomic_dim()
    ms = int((time.monotonic() - t0) * 1000)
    records.append(CheckRecord("klr_dim", "pass", f"dim {kdim}", ms))
    hdim = oracle.blocks.get(mu, 0)
    records.append(
        CheckRecord(
            "block_matches_klr",
            "pass" if hdim == kdim else "fail",
            f"hecke block {hdim} vs klr {kdim} at {[scalar_str(x) for x in mu]}",
            ms,
        )
    )
    extra = {"command": "dims", "cap": oracle.cap}
    return Report(params=_echo_params(ps, extra), checks=records)


# -- wiring ------------------------------------------------------------------------


def _add_common(sub, need_d: bool = True):
    sub.add_argument("--variant", required=True, choices=("degenerate", "q"))
    if need_d:
        sub.add_argument("--d", type=int)
    sub.add_argument("--q", default=None, help="deformation scalar (q-variant)")
    sub.add_argument("--Q", default=None, help="cyclotomic parameters, comma separated")
    sub.add_argument("--a", default=None, help="expansion point, comma separated")
    sub.add_argument("--I", default=None, help="vertex set, comma separated")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="heckeklr",
        description="exact verification suites for enhanced Hecke and KLR algebras",
    )
    parser.add_argument("--out", default=None, help="also write the report to a file")
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("verify-relations", help="defining relation suites")
    _add_common(p)
    p.add_argument("--max-deg", type=int, default=2, dest="max_deg")
    p.set_defaults(func=cmd_verify_relations)

    p = subs.add_parser("verify-differential", help="differential squares to zero")
    _add_common(p)
    p.add_argument("--max-deg", type=int, default=2, dest="max_deg")
    p.add_argument("--samples", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify_differential)

    p = subs.add_parser("verify-bkr", help="five checks of the completed isomorphism")
    _add_common(p, need_d=False)
    p.add_argument("--trunc", type=int, default=3, help="truncation order N")
    p.add_argument("--samples", type=int, default=8)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify_bkr)

    p = subs.add_parser("homology", help="quasi-isomorphism instances")
    _add_common(p)
    p.add_argument("--route", required=True, choices=("filtration", "tower"))
    p.add_argument("--Dmax", type=int, default=None)
    p.add_argument("--Nmax", type=int, default=None)
    p.add_argument("--side", default="hecke", choices=("hecke", "klr"))
    p.set_defaults(func=cmd_homology)

    p = subs.add_parser("dims", help="cyclotomic dimension oracles")
    _add_common(p)
    p.add_argument("--cap", type=int, default=None)
    p.set_defaults(func=cmd_dims)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code if isinstance(exc.code, int) else 2
        return 0 if code == 0 else 2
    try:
        report = args.func(args)
    except (InvalidParam, VariantMismatch, NotStabilized) as exc:
        print(f"parameter error: {exc}", file=sys.stderr)
        return 2
    except HeckeKLRError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 3
    text = json.dumps(report.to_dict(), indent=2)
    print(text)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    return report.exit_code()


if __name__ == "__main__":
    sys.exit(main())
