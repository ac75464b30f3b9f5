"""Command-line interface: ``gspcensus <group> <action> [flags]``.

Each run prints exactly one JSON record (or a CSV table with ``--csv``) on
stdout.  Exit codes: 0 ok, 2 usage error, 3 budget refusal, 4 internal
consistency failure.
"""
from __future__ import annotations

import argparse
import logging
import sys
from fractions import Fraction
from typing import Callable, Optional, Sequence

from . import brute, census, charpolys, curves
from .charpolys import PropertyTag
from .errors import BudgetExceeded, ConsistencyError, DomainError
from .field import check_multiplier, check_prime, primes_between
from .records import CensusRecord, ResultCache, to_csv
from .symplectic import gsp_order, sp_order

EXIT_OK, EXIT_USAGE, EXIT_BUDGET, EXIT_CONSISTENCY = 0, 2, 3, 4

log = logging.getLogger("gspcensus")


def _positive_g(g: int) -> int:
    if g < 1:
        raise DomainError(f"--g must be >= 1, got {g}")
    return g


def _ell_gamma(ell: int, gamma: int) -> None:
    check_prime(ell)
    check_multiplier(gamma, ell)


# -- handlers: each fills in and returns the record it is given ------------------------------------

def _census_exact_one(rec: CensusRecord, g: int, ell: int, gamma: int, suffix: str = "") -> int:
    ec = census.eigen_census(g, gamma, ell)
    for r, s in ec.s_values.items():
        rec.count(f"S[r={r}]{suffix}", s, "formula")
    rec.count(f"T{suffix}", ec.t_value, "formula")
    rec.ratio(f"proportion{suffix}", ec.proportion, "formula")
    rec.ratio(f"tau{suffix}", ec.tau, "formula")
    rec.ratio(f"deviation_constant{suffix}", ec.deviation_constant, "formula")
    return ec.t_value


def cmd_census_exact(a, rec: CensusRecord) -> CensusRecord:
    g = _positive_g(a.g)
    check_prime(a.ell)
    rec.count("sp_order", sp_order(g, a.ell), "formula")
    rec.count("gsp_order", gsp_order(g, a.ell), "formula")
    if a.all_gamma:
        ts = {gm: _census_exact_one(rec, g, a.ell, gm, f"[gamma={gm}]") for gm in range(1, a.ell)}
        if len({t for gm, t in ts.items() if gm != 1}) > 1:
            raise ConsistencyError("T differs between multipliers != 1")
    else:
        check_multiplier(a.gamma, a.ell)
        _census_exact_one(rec, g, a.ell, a.gamma)
    if a.all_gamma or a.gamma == 1:
        rec.ratio("abvar_leading", census.abvar_leading(a.ell), "formula")
    return rec


def cmd_census_sweep(a, rec: CensusRecord) -> CensusRecord:
    g = _positive_g(a.g)
    ells = primes_between(3, a.ell_max)
    if not ells:
        raise DomainError("--ell-max must be >= 3")
    for ell in ells:
        for gm, label in ((1, "1"), (2, "ne1")):
            rec.ratio(f"proportion[ell={ell},gamma={label}]", census.eigen_proportion(g, gm, ell), "formula")
            rec.ratio(f"deviation[ell={ell},gamma={label}]", census.eigenone_deviation(g, gm, ell), "formula")
    rec.ratio("fitted_c[gamma=ne1]", census.fitted_eigenone_constant(g, ells), "formula")
    rec.ratio("fitted_c[gamma=1]", census.fitted_eigenone_constant(g, ells, gamma_one=True), "formula")
    return rec


def cmd_brute_count(a, rec: CensusRecord) -> CensusRecord:
    g = _positive_g(a.g)
    _ell_gamma(a.ell, a.gamma)
    n, _ = brute.count_brute(g, a.ell, a.gamma, a.prop, budget=a.budget)
    sp = sp_order(g, a.ell)
    rec.count("count", n, "brute")
    rec.count("sp_order", sp, "formula")
    rec.ratio("proportion", Fraction(n, sp), "brute")
    return rec


def cmd_brute_delta(a, rec: CensusRecord) -> CensusRecord:
    g = _positive_g(a.g)
    _ell_gamma(a.ell, a.gamma)
    hist = brute.delta_histogram(g, a.ell, a.gamma, budget=a.budget)
    lo, hi = charpolys.delta_bounds(g, a.ell)
    for f in sorted(hist, key=lambda p: p.coeffs[::-1]):
        n = hist[f]
        if not lo <= n <= hi:
            raise ConsistencyError(f"Delta({f}) = {n} outside [{lo}, {hi}]")
        rec.count(f"delta[{f}]", n, "brute")
    rec.count("total", sum(hist.values()), "brute")
    rec.ratio("delta_lower", lo, "formula")
    rec.ratio("delta_upper", hi, "formula")
    return rec


def cmd_sample(a, rec: CensusRecord) -> CensusRecord:
    g = _positive_g(a.g)
    _ell_gamma(a.ell, a.gamma)
    rep = brute.montecarlo(g, a.ell, a.gamma, a.prop, a.n, a.seed, workers=a.workers)
    rec.estimates.append({
        "g": g, "ell": a.ell, "gamma": a.gamma, "tag": rep.tag, "n_samples": rep.n_samples,
        "hits": rep.hits, "estimate": rep.estimate, "stderr": rep.stderr, "seed": rep.seed,
    })
    if rep.tag in ("E", "N"):
        p = census.eigen_proportion(g, a.gamma, a.ell)
        rec.ratio("exact", p if rep.tag == "E" else 1 - p, "formula")
        if rep.stderr > 0:
            rec.metrics["z_score"] = (rep.estimate - float(rec.exact_ratios["exact"])) / rep.stderr
            rec.provenance["z_score"] = "montecarlo"
    return rec


def cmd_charpoly(a, rec: CensusRecord) -> CensusRecord:
    g = _positive_g(a.g)
    _ell_gamma(a.ell, a.gamma)
    if a.action == "enum":
        budget = a.budget if a.budget is not None else brute.DEFAULT_BUDGET
        if a.ell**g > budget:
            raise BudgetExceeded("charpoly enumeration", a.ell**g, budget)
        n = 0
        for f in charpolys.xi_enumerate(g, a.gamma, a.ell):
            if a.prop is None or charpolys.has_property(f, a.gamma, a.prop):
                rec.count(f"poly[{f}]", 1, "formula")
                n += 1
        rec.count("count", n, "formula")
        return rec
    if a.prop is None:
        raise DomainError("charpoly count needs --prop")
    n = charpolys.psi_count(g, a.gamma, a.ell, a.prop, raw=a.raw)
    rec.count("psi_count", n, "formula")
    if a.prop in (PropertyTag.R_LITERAL.value, PropertyTag.R_PROOF.value):
        # the two readings of (R) disagree, so records carry both
        for tag in (PropertyTag.R_LITERAL, PropertyTag.R_PROOF):
            rec.count(f"psi_count[{tag.value}]", charpolys.psi_count(g, a.gamma, a.ell, tag, raw=a.raw), "formula")
    rec.count("xi_count", a.ell**g, "formula")
    rec.ratio("psi_proportion", Fraction(n, a.ell**g), "formula")
    return rec


def cmd_bounds(a, rec: CensusRecord) -> CensusRecord:
    g = _positive_g(a.g)
    check_prime(a.ell)
    if a.kind == "psitow":
        if a.psi is None:
            raise DomainError("bounds psitow needs --psi")
        lo, hi = census.psitow_bounds(a.psi, g, a.ell)
    elif a.kind == "delta":
        lo, hi = charpolys.delta_bounds(g, a.ell)
    else:
        gammas = [a.gamma] if a.gamma is not None else list(range(2, a.ell))
        for gm in gammas:
            check_multiplier(gm, a.ell)
            rec.ratio(f"C[gamma={gm}]", charpolys.eigenweird_constant(g, gm, a.ell), "formula")
        rec.ratio("C_max", max(rec.exact_ratios.values()), "formula")
        return rec
    rec.ratio("lower", lo, "formula")
    rec.ratio("upper", hi, "formula")
    return rec


def cmd_curves_scan(a, rec: CensusRecord) -> CensusRecord:
    rep = curves.scan(a.q, a.ell)
    rec.count("gamma", rep.gamma, "scan")
    rec.count("n_curves", rep.n_curves, "scan")
    rec.count("n_singular", rep.n_singular, "scan")
    for tag, hits in rep.hits.items():
        rec.count(f"hits[{tag}]", hits, "scan")
        freq = Fraction(hits, rep.n_curves)
        rec.ratio(f"frequency[{tag}]", freq, "scan")
        rec.ratio(f"target[{tag}]", rep.targets[tag], "brute")
        rec.ratio(f"deviation[{tag}]", abs(freq - rep.targets[tag]), "scan")
    return rec


def cmd_curves_envelope(a, rec: CensusRecord) -> CensusRecord:
    check_prime(a.ell)
    check_multiplier(a.gamma, a.ell)
    qs = curves.primes_in_progression(a.ell, a.gamma, a.q_max)
    env = curves.envelope(a.ell, a.gamma, qs, a.prop)
    for q, v in env:
        rec.metrics[f"scaled_deviation[q={q}]"] = v
        rec.provenance[f"scaled_deviation[q={q}]"] = "scan"
    half = len(env) // 2
    rec.metrics["fitted_constant"] = max(v for _, v in env)
    if half:
        rec.metrics["first_half_max"] = max(v for _, v in env[:half])
        rec.metrics["second_half_max"] = max(v for _, v in env[half:])
    for k in ("fitted_constant", "first_half_max", "second_half_max"):
        if k in rec.metrics:
            rec.provenance[k] = "scan"
    return rec


# -- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--csv", action="store_true", help="emit a flat CSV table instead of JSON")
    common.add_argument("--cache-dir", help="result cache directory (default: $GSPCENSUS_CACHE_DIR)")
    common.add_argument("--no-cache", action="store_true")
    common.add_argument("--budget", type=int, default=None, help="max elements to enumerate")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="gspcensus", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="group", required=True)

    props = [t.value for t in PropertyTag]

    def leaf(parent, name: str, fn: Callable, **kw) -> argparse.ArgumentParser:
        sp = parent.add_parser(name, parents=[common], **kw)
        sp.set_defaults(fn=fn)
        return sp

    c = sub.add_parser("census").add_subparsers(dest="action", required=True)
    sp = leaf(c, "exact", cmd_census_exact)
    sp.add_argument("--g", type=int, required=True)
    sp.add_argument("--ell", type=int, required=True)
    sp.add_argument("--gamma", type=int, default=1)
    sp.add_argument("--all-gamma", action="store_true")
    sp = leaf(c, "sweep", cmd_census_sweep)
    sp.add_argument("--g", type=int, required=True)
    sp.add_argument("--ell-max", type=int, required=True)

    b = sub.add_parser("brute").add_subparsers(dest="action", required=True)
    sp = leaf(b, "count", cmd_brute_count)
    sp.add_argument("--g", type=int, required=True)
    sp.add_argument("--ell", type=int, required=True)
    sp.add_argument("--gamma", type=int, default=1)
    sp.add_argument("--prop", choices=props, required=True)
    sp = leaf(b, "delta", cmd_brute_delta)
    sp.add_argument("--g", type=int, required=True)
    sp.add_argument("--ell", type=int, required=True)
    sp.add_argument("--gamma", type=int, default=1)

    sp = leaf(sub, "sample", cmd_sample)
    sp.add_argument("--g", type=int, required=True)
    sp.add_argument("--ell", type=int, required=True)
    sp.add_argument("--gamma", type=int, default=1)
    sp.add_argument("--prop", choices=props + ["eigen1"], default="E")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--workers", type=int, default=1)

    cp = sub.add_parser("charpoly", parents=[common])
    cp.add_argument("action", choices=["enum", "count"])
    cp.add_argument("--g", type=int, required=True)
    cp.add_argument("--ell", type=int, required=True)
    cp.add_argument("--gamma", type=int, default=1)
    cp.add_argument("--prop", choices=props, default=None)
    cp.add_argument("--raw", action="store_true", help="literal (R) count even when gamma = 1")
    cp.set_defaults(fn=cmd_charpoly)

    bd = sub.add_parser("bounds", parents=[common])
    bd.add_argument("kind", choices=["psitow", "delta", "eigenweird"])
    bd.add_argument("--g", type=int, required=True)
    bd.add_argument("--ell", type=int, required=True)
    bd.add_argument("--psi", type=int)
    bd.add_argument("--gamma", type=int)
    bd.set_defaults(fn=cmd_bounds)

    cv = sub.add_parser("curves").add_subparsers(dest="action", required=True)
    sp = leaf(cv, "scan", cmd_curves_scan)
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--ell", type=int, required=True)
    sp = leaf(cv, "envelope", cmd_curves_envelope)
    sp.add_argument("--ell", type=int, required=True)
    sp.add_argument("--gamma", type=int, required=True)
    sp.add_argument("--q-max", type=int, default=499)
    sp.add_argument("--prop", choices=[t.value for t in curves.SCAN_TAGS], default="E")
    return p


# output, caching and scheduling flags never change a record's contents
_NOT_PARAMS = {"fn", "csv", "cache_dir", "no_cache", "verbose", "budget", "workers",
               "group", "action", "kind"}


def command_and_params(a: argparse.Namespace) -> tuple[str, dict]:
    """Canonical (command, params) of a parsed invocation; also the cache key."""
    parts = [a.group, getattr(a, "action", None) or getattr(a, "kind", None)]
    command = " ".join(x for x in parts if x)
    params = {k: v for k, v in sorted(vars(a).items()) if k not in _NOT_PARAMS}
    return command, params


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if a.verbose else logging.WARNING, stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")
    command, params = command_and_params(a)
    cache = None if a.no_cache else ResultCache.from_env(a.cache_dir)
    rec = cache.lookup(command, params) if cache else None
    if rec is not None:
        log.info("cache hit for %s", command)
    else:
        try:
            rec = a.fn(a, CensusRecord(command, params))
        except DomainError as exc:
            print(f"gspcensus: error: {exc}", file=sys.stderr)
            return EXIT_USAGE
        except BudgetExceeded as exc:
            print(f"gspcensus: refused: {exc}", file=sys.stderr)
            return EXIT_BUDGET
        except ConsistencyError as exc:
            print(f"gspcensus: internal consistency failure: {exc}", file=sys.stderr)
            return EXIT_CONSISTENCY
        if cache:
            cache.store(rec)
    sys.stdout.write(to_csv([rec]) if a.csv else rec.to_json() + "\n")
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
