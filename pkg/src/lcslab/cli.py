"""Command-line driver: structured JSON reports for every computation.

Every run emits one report {meta, results, checks}; the exit code is 0 when
no check failed, 2 on usage errors, 3 when a truncation or resource limit
cut the run short (a partial report is still written).  Identical
configurations produce byte-identical results and checks sections.

Thread budget: --threads or LCSLAB_THREADS caps BLAS threads; it must be
applied before the numeric modules load, so heavy imports happen inside the
command handlers.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

__all__ = ["main", "run", "build_parser"]

DEFAULT_PRIME = 1048573
DEFAULT_SECOND_PRIME = 1048583


def _apply_thread_budget(threads: int | None):
    budget = threads or os.environ.get("LCSLAB_THREADS")
    if budget:
        for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
            os.environ[var] = str(budget)


def _check(name, expected, observed, source, report_only=False):
    if report_only:
        status = "report-only"
    else:
        status = "pass" if expected == observed else "fail"
    return {
        "name": name,
        "expected": expected,
        "observed": observed,
        "status": status,
        "source": source,
    }


def _field_of(args, allow_small=False):
    from .freealg import FieldSpec

    if getattr(args, "field", "modp") == "exact":
        return FieldSpec.rationals()
    return FieldSpec.prime(getattr(args, "prime", DEFAULT_PRIME), allow_small)


def _load_presentation(args, degrees_attr="random"):
    from .freealg import FieldSpec
    from .presented import parse_relation_file, presentation_from_degrees

    rel_file = getattr(args, "relations", None)
    if rel_file:
        with open(rel_file, "r", encoding="utf-8") as fh:
            return parse_relation_file(fh.read())
    degrees = getattr(args, degrees_attr, None)
    if not degrees:
        raise SystemExit("either --relations FILE or relation degrees are required")
    field = FieldSpec.prime(args.prime)
    return presentation_from_degrees(2, degrees, args.seed, field)


def _parse_degree_list(text: str) -> list[int]:
    return [int(t) for t in text.split(",") if t]


def _parse_degree_range(text: str) -> list[int]:
    if ".." in text:
        lo, hi = text.split("..")
        return list(range(int(lo), int(hi) + 1))
    return _parse_degree_list(text)


# -- subcommand handlers -------------------------------------------------------


def _cmd_series(args):
    from . import series as S

    results: dict = {}
    checks: list = []
    sub = args.series_cmd
    if sub == "necklaces":
        results["necklaces"] = [S.necklace_count(args.n, d) for d in range(1, args.max + 1)]
    elif sub == "witt":
        vals = [S.witt(args.n, d) for d in range(1, args.max + 1)]
        results["witt"] = vals
        if args.n == 2 and args.max >= 19:
            checks.append(
                _check("witt(2,16..19)", [4080, 7710, 14532, 27594], vals[15:19], "reference")
            )
    elif sub == "hilbert":
        h = S.quotient_hilbert_series(args.relations_degrees, args.max)
        results["hilbert"] = list(h.coeffs)
    elif sub == "bseries":
        results["b"] = S.b_series(args.d, args.max)
        results["c"] = S.c_series(args.d, args.max)
    elif sub == "positivity":
        threshold, evidence = S.positivity_threshold(args.d, args.max)
        results["threshold"] = threshold
        results["evidence"] = {str(k): v for k, v in evidence.items()}
        if args.d == 3:
            checks.append(_check("smallest all-positive tail degree", 8, threshold, "reference"))
    return results, checks


def _cmd_free_lcs(args):
    from .lcs import FreeContext, LcsEngine, filtration_table

    field = _field_of(args)
    ctx = FreeContext(args.n, field, blocked=not args.no_blocking)
    engine = LcsEngine(ctx, args.max_deg)
    table = filtration_table(
        engine,
        args.i_max,
        args.max_deg,
        algebra=f"free[{args.n}]",
        meta={"field": str(field), "blocked": ctx.blocked},
    )
    results = table.to_json_dict()
    checks = []
    if args.checks:
        from .lcs import check_b_generation, check_fs3, check_product_inclusion

        fs3 = check_fs3(engine, args.max_deg)
        checks.append(
            _check(
                "commutators meet third ideal filtration = third series term",
                {str(d): True for d in fs3["per_degree"]},
                {str(d): e["equal"] for d, e in fs3["per_degree"].items()},
                "reference",
            )
        )
        for i, j in ((2, 2), (2, 3), (3, 3)):
            rep = check_product_inclusion(engine, i, j, args.max_deg, strong=(i + j) % 2 == 1)
            weak = {str(d): e["weak_defect"] for d, e in rep["per_degree"].items()}
            checks.append(
                _check(
                    f"M_{i}*M_{j} inside M_{i + j - 2}",
                    {d: 0 for d in weak},
                    weak,
                    "reference",
                )
            )
            if (i + j) % 2 == 1:
                strong = {str(d): e["strong_defect"] for d, e in rep["per_degree"].items()}
                checks.append(
                    _check(
                        f"M_{i}*M_{j} inside M_{i + j - 1}",
                        {d: 0 for d in strong},
                        strong,
                        "reference",
                    )
                )
        for m in (2, 3):
            rep = check_b_generation(engine, m, args.max_deg)
            checks.append(
                _check(
                    f"B_{m + 1} generated by degree-<=2 brackets",
                    {str(d): True for d in rep["per_degree"]},
                    {str(d): e["equal"] for d, e in rep["per_degree"].items()},
                    "reference",
                )
            )
    if args.tsv:
        for name in ("L", "M", "B", "N"):
            with open(f"{args.tsv}.{name}.tsv", "w", encoding="utf-8") as fh:
                fh.write(table.series_tsv(name))
    return results, checks


def _cmd_quotient_lcs(args):
    from .lcs import LcsEngine, QuotientContext, filtration_table
    from .presented import GradedQuotient

    pres = _load_presentation(args)
    runs = [(pres, args.prime)]
    if args.second_prime:
        from .freealg import FieldSpec
        from .presented import presentation_from_degrees

        if args.relations:
            raise SystemExit("--second-prime needs generated relations (fixed files pin the field)")
        pres2 = presentation_from_degrees(2, args.random, args.seed, FieldSpec.prime(args.second_prime))
        runs.append((pres2, args.second_prime))
    tables = []
    for prs, prime in runs:
        q = GradedQuotient(prs, args.max_deg, engine="table")
        engine = LcsEngine(QuotientContext(q), args.max_deg)
        table = filtration_table(
            engine,
            args.i_max,
            args.max_deg,
            algebra=f"quotient(degrees={list(prs.degrees)})",
            meta={
                "prime": prime,
                "seed": args.seed,
                "relations_hash": prs.content_hash(),
                "hilbert": q.hilbert_dims(),
            },
        )
        tables.append(table)
    results = tables[0].to_json_dict()
    checks = []
    if len(tables) > 1:
        stable = all(
            getattr(tables[0], name) == getattr(tables[1], name) for name in ("L", "M", "B", "N")
        )
        results["meta"]["second_prime"] = args.second_prime
        checks.append(_check("dimension tables stable across primes", True, stable, "derived"))
    if args.tsv:
        for name in ("L", "M", "B", "N"):
            with open(f"{args.tsv}.{name}.tsv", "w", encoding="utf-8") as fh:
                fh.write(tables[0].series_tsv(name))
    return results, checks


def _cmd_fs_check(args):
    from .fsforms import check_fs_parts

    rep = check_fs_parts(args.n, args.max_deg)
    checks = []
    for d, entry in rep["per_degree"].items():
        for key in ("kernel_is_M3", "M2_hits_positive_even", "L2_hits_exact_even", "B1bar_matches_nonexact"):
            checks.append(_check(f"degree {d}: {key}", True, entry[key], "reference"))
    return rep, checks


def _cmd_psi(args):
    from .freelie import psi_table

    seeds = [args.seed, args.seed + 1]
    primes = [args.prime] + ([args.second_prime] if args.second_prime else [])
    rows = psi_table(
        2,
        args.deg,
        args.relations_degrees,
        seeds,
        primes,
        D=max(args.deg),
        method=args.method,
        c_route=args.c_route,
    )
    checks = [
        _check(f"rank stable across seeds/primes at degree {row['d']}", True, row["stable"], "derived")
        for row in rows
    ]
    known = {16: (4031, 5), 17: (6548, 4), 18: (10610, 5), 19: (17212, 4)}
    if args.relations_degrees == [3]:
        for row in rows:
            if row["d"] in known and row["stable"]:
                checks.append(
                    _check(
                        f"rank and cokernel at degree {row['d']}",
                        list(known[row["d"]]),
                        [row["rank"], row["coker"]],
                        "reference",
                    )
                )
    return {"rows": rows, "seeds": seeds, "primes": primes}, checks


def _cmd_verify_identities(args):
    from .freealg import (
        FieldSpec,
        alt_five_variable_identity_check,
        cube_bracket_identity_check,
        jacobi_check,
        leibniz_expansion_check,
    )
    from .lcs import check_polylinear_identities

    fields = {
        "q": FieldSpec.rationals(),
        "f2": FieldSpec.prime(2, True),
        "f3": FieldSpec.prime(3, True),
        "f5": FieldSpec.prime(5),
        "modp": FieldSpec.prime(args.prime),
    }
    field = fields[args.field]
    checks = [
        _check(f"Jacobi identity over {field}", True, jacobi_check(field), "trivial"),
    ]
    for m in (2, 3):
        checks.append(
            _check(
                f"Leibniz bracket expansion, {m} arguments, over {field}",
                True,
                leibniz_expansion_check(m, field),
                "reference",
            )
        )
    if field.characteristic not in (2, 3):
        checks.append(
            _check(
                f"cube bracket identity over {field}",
                True,
                cube_bracket_identity_check(field),
                "reference",
            )
        )
        checks.append(
            _check(
                f"antisymmetrized five-variable identity over {field}",
                True,
                alt_five_variable_identity_check(field),
                "reference",
            )
        )
    poly = check_polylinear_identities(field)
    checks.append(_check(f"[x[y,z,u],v] in L_3 over {field}", True, poly["in_L3"], "reference"))
    checks.append(
        _check(
            f"[x[y,z,u],v] in L_4 over {field}",
            poly["expected_in_L4"],
            poly["in_L4"],
            "reference",
        )
    )
    return {"field": str(field), "polylinear": poly}, checks


def _cmd_experiments(args):
    from .freealg import FieldSpec
    from .lcs import (
        FreeContext,
        LcsEngine,
        QuotientContext,
        check_m2_power,
        check_product_inclusion,
        vanishing_report,
    )
    from .presented import GradedQuotient, presentation_from_degrees
    from .series import quotient_hilbert_series

    field = FieldSpec.prime(args.prime)
    results: dict = {}
    checks: list = []

    # even-by-even products: the strong inclusion is expected to fail
    ctx4 = FreeContext(4, field, blocked=True)
    eng4 = LcsEngine(ctx4, 5)
    rep = check_product_inclusion(eng4, 2, 2, 5, strong=True)
    results["free4_M2M2_strong_defects"] = {
        str(d): e["strong_defect"] for d, e in rep["per_degree"].items()
    }
    checks.append(
        _check(
            "M_2*M_2 against M_3 on four generators (defects reported)",
            None,
            results["free4_M2M2_strong_defects"],
            "reference",
            report_only=True,
        )
    )
    rep = check_m2_power(eng4, 2, 5)
    results["free4_M2sq_defect_vs_M3"] = {
        str(d): e["defect"] for d, e in rep["per_degree"].items()
    }
    checks.append(
        _check(
            "M_2^2 against M_3 on four generators (outside the proven range)",
            None,
            results["free4_M2sq_defect_vs_M3"],
            "reference",
            report_only=True,
        )
    )

    # vanishing-width conjecture data for one generic cubic relation
    pres = presentation_from_degrees(2, [3], args.seed, field)
    q = GradedQuotient(pres, args.max_deg, engine="table")
    engine = LcsEngine(QuotientContext(q), args.max_deg)
    van = vanishing_report(engine, 3, 4, args.max_deg)
    results["vanishing"] = van
    checks.append(
        _check("proven vanishing bounds", [], van["violations"], "reference")
    )
    checks.append(
        _check(
            "conjectural width bound (never asserted)",
            None,
            {str(r["m"]): [r["conjecture_holds_B"], r["conjecture_holds_N"]] for r in van["rows"]},
            "reference",
            report_only=True,
        )
    )

    # two-relation series: measured dims against the closed form, first deviation
    pres2 = presentation_from_degrees(2, [3, 8], args.seed, field)
    q2 = GradedQuotient(pres2, args.max_deg, engine="table")
    measured = q2.hilbert_dims()
    predicted = list(quotient_hilbert_series([3, 8], args.max_deg).coeffs)
    deviation = next((d for d in range(args.max_deg + 1) if measured[d] != predicted[d]), None)
    results["two_relation_hilbert"] = {
        "measured": measured,
        "predicted": predicted,
        "first_deviation_degree": deviation,
    }
    checks.append(
        _check(
            "two-relation dimensions against the closed-form series",
            None,
            {"first_deviation_degree": deviation},
            "derived",
            report_only=True,
        )
    )
    return results, checks


# -- driver --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="lcslab",
        description="Degree-by-degree lower central series computations and reports",
    )
    ap.add_argument("--out", help="write the JSON report here (atomic)", default=None)
    ap.add_argument("--threads", type=int, default=None, help="BLAS thread budget")
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("series", help="counting sequences and series identities")
    ssub = s.add_subparsers(dest="series_cmd", required=True)
    p = ssub.add_parser("necklaces")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--max", type=int, default=30)
    p = ssub.add_parser("witt")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--max", type=int, default=30)
    p = ssub.add_parser("hilbert")
    p.add_argument("--relations-degrees", type=_parse_degree_list, required=True)
    p.add_argument("--max", type=int, default=32)
    p = ssub.add_parser("bseries")
    p.add_argument("--d", type=int, default=3)
    p.add_argument("--max", type=int, default=32)
    p = ssub.add_parser("positivity")
    p.add_argument("--d", type=int, default=3)
    p.add_argument("--max", type=int, default=64)

    p = sub.add_parser("free-lcs", help="filtration table of a free algebra")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--max-deg", "-D", type=int, required=True)
    p.add_argument("--i-max", type=int, default=4)
    p.add_argument("--field", choices=("exact", "modp"), default="modp")
    p.add_argument("--prime", type=int, default=DEFAULT_PRIME)
    p.add_argument("--no-blocking", action="store_true")
    p.add_argument("--checks", action="store_true", help="run the inclusion-theorem battery")
    p.add_argument("--tsv", default=None, help="prefix for TSV views of the table")

    p = sub.add_parser("quotient-lcs", help="filtration table of a presented algebra")
    p.add_argument("--relations", default=None)
    p.add_argument("--random", type=_parse_degree_list, default=None)
    p.add_argument("--max-deg", "-D", type=int, required=True)
    p.add_argument("--i-max", type=int, default=4)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--prime", type=int, default=DEFAULT_PRIME)
    p.add_argument("--second-prime", type=int, default=None)
    p.add_argument("--tsv", default=None)

    p = sub.add_parser("fs-check", help="even-forms realization of the small quotients")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--max-deg", "-D", type=int, required=True)

    p = sub.add_parser("psi", help="free-Lie image ranks inside the commutator space")
    p.add_argument("--relations-degrees", type=_parse_degree_list, default=[3])
    p.add_argument("--deg", type=_parse_degree_range, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--prime", type=int, default=DEFAULT_PRIME)
    p.add_argument("--second-prime", type=int, default=DEFAULT_SECOND_PRIME)
    p.add_argument("--method", choices=("auto", "lyndon", "chain"), default="chain")
    p.add_argument("--c-route", choices=("auto", "linalg", "series"), default="linalg")

    p = sub.add_parser("verify-identities", help="exact bracket identity suite")
    p.add_argument("--field", choices=("q", "f2", "f3", "f5", "modp"), default="q")
    p.add_argument("--prime", type=int, default=DEFAULT_PRIME)

    p = sub.add_parser("experiments", help="report-only experiments and conjecture data")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--prime", type=int, default=DEFAULT_PRIME)
    p.add_argument("--max-deg", "-D", type=int, default=10)
    return ap


_HANDLERS = {
    "series": _cmd_series,
    "free-lcs": _cmd_free_lcs,
    "quotient-lcs": _cmd_quotient_lcs,
    "fs-check": _cmd_fs_check,
    "psi": _cmd_psi,
    "verify-identities": _cmd_verify_identities,
    "experiments": _cmd_experiments,
}


def run(argv=None):
    """Parse, dispatch, and write the report; returns (exit_code, report)."""
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return (e.code if isinstance(e.code, int) else 2), None
    _apply_thread_budget(args.threads)

    started = time.time()
    meta = {
        "command": args.command,
        "config": {k: v for k, v in sorted(vars(args).items()) if k not in ("out",)},
        "started_at": started,
    }
    report = {"meta": meta, "results": {}, "checks": []}
    code = 0
    try:
        results, checks = _HANDLERS[args.command](args)
        report["results"] = results
        report["checks"] = checks
        if any(c["status"] == "fail" for c in checks):
            code = 1
    except SystemExit as e:
        print(e, file=sys.stderr)
        return 2, None
    except Exception as e:  # noqa: BLE001 - the partial-report contract needs the catch
        from .freealg import UsageError
        from .presented import TruncationError

        if isinstance(e, UsageError):
            print(f"usage error: {e}", file=sys.stderr)
            return 2, None
        if isinstance(e, (TruncationError, MemoryError)):
            report["error"] = f"{type(e).__name__}: {e}"
            code = 3
        else:
            raise
    meta["finished_at"] = time.time()
    meta["elapsed_seconds"] = round(meta["finished_at"] - started, 3)
    text = json.dumps(report, indent=2, sort_keys=True)
    if args.out:
        tmp = args.out + ".tmp"
        with open(tmp, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
        os.replace(tmp, args.out)
    else:
        print(text)
    return code, report


def main(argv=None) -> int:
    code, _ = run(argv)
    return code


if __name__ == "__main__":
    sys.exit(main())
