"""Command-line front end.

Every subcommand prints one structured report.  Exact ratios are written as
"num/den" strings and integers as decimal strings, so nothing is rounded on
the way out.  Exit codes: 0 success, 2 invalid input, 3 cap exceeded,
4 failed verification.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from fractions import Fraction

from . import classcount, corpus, derange, fqlin, weyl
from .errors import CapExceeded, GroupComputationError, VerificationFailure
from .permcore import DEFAULT_CAP, coset_action, natural_action, parse_group_spec, subset_action

EXIT_OK, EXIT_INVALID, EXIT_CAP, EXIT_FAILED = 0, 2, 3, 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_INVALID)


def render(value):
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, dict):
        return {str(k): render(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [render(v) for v in value]
    return str(value)


def _delta_fields(rep: derange.DerangementReport) -> dict:
    return {
        "delta": rep.delta,
        "derangements": rep.derangements,
        "total": rep.total,
        "n": rep.n,
        "status": rep.status.value,
        "frobenius": rep.frobenius,
        "frobenius_order_n(n-1)": rep.frobenius_full,
        "frobenius_order_n(n-1)/2": rep.frobenius_half,
    }


def _load_action(args):
    if args.spec:
        return corpus.named_action(args.spec)
    if args.spec_file:
        with open(args.spec_file, encoding="utf-8") as fh:
            doc = fh.read()
    elif args.spec_json:
        doc = args.spec_json
    else:
        raise ValueError("one of --spec, --spec-file or --spec-json is required")
    group = parse_group_spec(doc, cap=args.cap)
    if args.action == "natural":
        return natural_action(group)
    if args.action.startswith("subsets:"):
        return subset_action(group, int(args.action.split(":", 1)[1]))
    if args.action.startswith("cosets:"):
        sub = parse_group_spec(args.action.split(":", 1)[1], cap=args.cap)
        return coset_action(group, sub)
    raise ValueError(f"unknown --action {args.action!r}")


def _find_setting(name: str) -> derange.CosetSetting:
    for s in corpus.cosets_corpus():
        if s.name == name:
            return s
    names = "; ".join(s.name for s in corpus.cosets_corpus())
    raise ValueError(f"unknown setting {name!r}; known: {names}")


def cmd_delta(args):
    action = _load_action(args)
    rep = derange.delta(action, method=args.method)
    return {"action": action.name or action.kind}, _delta_fields(rep), True


def cmd_coset_delta(args):
    s = _find_setting(args.setting)
    rep = derange.coset_delta(s)
    total, c = derange.coset_fixed_point_sum(s)
    fields = _delta_fields(rep)
    fields.update({"fixed_point_sum": total, "common_orbits": c})
    return {"setting": s.name}, fields, True


def cmd_exceptional(args):
    s = _find_setting(args.setting)
    cert = derange.is_exceptional(s)
    rows = [{"pair": list(pair), "size": size} for pair, size in cert.common_orbitals]
    return {"setting": s.name}, {"exceptional": cert.exceptional, "common_orbitals": rows}, True


def cmd_hall_build(args):
    for ambient, normal, label in corpus.hall_pairs():
        if label == args.pair:
            s = derange.exceptional_from_hall(ambient, normal, name=label)
            cert = derange.is_exceptional(s)
            rep = derange.coset_delta(s)
            results = {"n": s.n, "rep": str(s.rep), "exceptional": cert.exceptional, "coset_delta": rep.delta}
            return {"pair": label}, results, cert.exceptional and rep.delta == 0
    labels = "; ".join(label for _, _, label in corpus.hall_pairs())
    raise ValueError(f"unknown pair {args.pair!r}; known: {labels}")


def cmd_weyl_delta(args):
    W = weyl.weyl_group(args.type, args.rank, cap=args.cap)
    if args.young:
        parts = [int(x) for x in args.young.split(",")]
        W0 = weyl.young_subgroup(W, parts)
    elif args.subgroup == "D":
        if W.kind != "B":
            raise ValueError("--subgroup D needs type B")
        W0 = weyl.d_in_b(args.rank)
    elif args.subgroup == "A2long":
        W0 = weyl.long_a2_subgroup(W)
    else:
        raise ValueError("give --young or --subgroup")
    mass = weyl.class_mass(W, W0)
    lim = weyl.limiting_delta_parabolic(W, W0)
    classes = [{"label": c.label, "size": c.size} for c in mass.meeting_classes]
    return ({"type": W.name, "subgroup": W0.name},
            {"mass": mass.mass, "limiting_delta": lim, "meeting_classes": classes}, True)


def cmd_class_count(args):
    results, ok = {}, True
    if args.method in ("brute", "both"):
        rec = classcount.class_count(fqlin.build_classical(args.family, args.n, args.q, cap=args.cap))
        results["brute"] = {"k": rec.k, "k_p": rec.k_p}
    if args.method in ("genfun", "both"):
        if args.family != "GL":
            raise ValueError("the generating function covers GL only")
        results["genfun"] = {"k": classcount.k_gl_genfun(args.n, args.q)}
    if args.method == "both":
        ok = results["brute"]["k"] == results["genfun"]["k"]
    return {"family": args.family, "n": args.n, "q": args.q, "method": args.method}, results, ok


def cmd_check_bound(args):
    rec = classcount.class_count(fqlin.build_classical(args.family, args.n, args.q, cap=args.cap))
    terms = classcount.class_count_bound(args.family, args.n, args.q)
    ok = classcount.check_class_count_bound(rec)
    results = {"k": rec.k, "rhs_rational": terms.rational, "rhs_coefficient": terms.coefficient,
               "rhs_q_power_halves": terms.half_exponent, "holds": ok}
    return {"family": args.family, "n": args.n, "q": args.q}, results, ok


def cmd_rss(args):
    G = fqlin.build_classical(args.family, args.n, args.q, cap=args.cap)
    prop = classcount.rss_proportion(G, allow_inexact=args.allow_inexact)
    bound = 1 - Fraction(5, args.q - 1) if args.q > 1 else None
    results = {"rss_proportion": prop, "lower_bound": bound,
               "semisimple_classes": classcount.semisimple_class_count(G),
               "q^r": args.q ** classcount.reductive_rank(args.family, args.n)}
    return {"family": args.family, "n": args.n, "q": args.q}, results, prop > bound


def cmd_limit(args):
    ev = classcount.limit_partial(args.family, args.q, args.depth)
    results = {"value": ev.value, "decimal": f"{float(ev.value):.12f}",
               "last_factor_deviation": f"{float(ev.last_factor_deviation):.3e}"}
    return {"family": args.family, "q": args.q, "depth": args.depth}, results, True


def cmd_verify(args):
    if args.suite == "bounds":
        report = derange.verify_bound_suite(corpus.bounds_corpus())
    elif args.suite == "cosets":
        report = derange.verify_bound_suite((), corpus.cosets_corpus())
    else:
        report = derange.structural_lemma_checks(corpus.lemmas8_corpus())
    rows = [{"instance": r.instance, "criterion": r.criterion, "passed": r.passed, "detail": r.detail}
            for r in report.results]
    return {"suite": args.suite}, {"checks": rows, "failures": len(report.failures())}, report.passed


def cmd_corpus(args):
    items = corpus.corpus(args.name)
    listed = [getattr(x, "name", None) or repr(x) if not isinstance(x, tuple) else list(x) for x in items]
    return {"name": args.name}, {"instances": listed}, True


def build_parser() -> argparse.ArgumentParser:
    def common(parser, defaults):
        kw = {} if defaults else {"default": argparse.SUPPRESS}
        parser.add_argument("--cap", type=int, help="element cap for enumeration",
                            **(kw or {"default": DEFAULT_CAP}))
        parser.add_argument("--format", choices=("json", "csv"), **(kw or {"default": "json"}))
        parser.add_argument("--output", help="write the report here instead of stdout",
                            **(kw or {"default": None}))
        parser.add_argument("--timing", action="store_true", help="include wall-clock seconds in the report",
                            **kw)

    # global options are accepted before or after the subcommand
    p = _Parser(prog="derangements", description=__doc__.splitlines()[0])
    common(p, True)
    shared = argparse.ArgumentParser(add_help=False)
    common(shared, False)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    _add = sub.add_parser
    sub.add_parser = lambda *a, **k: _add(*a, parents=[shared], **k)

    s = sub.add_parser("delta", help="derangement proportion of a transitive action")
    s.add_argument("--spec", help="named action, e.g. S4-natural, AGL1-8, PSL2-7")
    s.add_argument("--spec-file", help="group-spec JSON file")
    s.add_argument("--spec-json", help="inline group-spec JSON")
    s.add_argument("--action", default="natural", help="natural | subsets:K | cosets:<group-spec JSON>")
    s.add_argument("--method", choices=("auto", "scan", "classes"), default="auto")
    s.set_defaults(func=cmd_delta)

    for name, func, helptext in (("coset-delta", cmd_coset_delta, "derangements in a generating coset"),
                                 ("exceptional", cmd_exceptional, "orbital test for exceptionality")):
        s = sub.add_parser(name, help=helptext)
        s.add_argument("--setting", required=True, help="name of a setting in the cosets corpus")
        s.set_defaults(func=func)

    s = sub.add_parser("hall-build", help="exceptional triple from a normal Hall subgroup")
    s.add_argument("--pair", required=True, help='e.g. "(C7:C3, C7)"')
    s.set_defaults(func=cmd_hall_build)

    s = sub.add_parser("weyl-delta", help="class mass and limiting proportion for a Weyl group")
    s.add_argument("--type", required=True, choices=("A", "B", "C", "D", "G2"))
    s.add_argument("--rank", type=int, default=2)
    s.add_argument("--young", help="comma-separated block sizes (type A)")
    s.add_argument("--subgroup", choices=("D", "A2long"))
    s.set_defaults(func=cmd_weyl_delta)

    def classical(sp, with_method=False):
        sp.add_argument("--family", required=True, choices=fqlin.FAMILIES)
        sp.add_argument("--n", type=int, required=True)
        sp.add_argument("--q", type=int, required=True)
        if with_method:
            sp.add_argument("--method", choices=("brute", "genfun", "both"), default="brute")

    s = sub.add_parser("class-count", help="number of conjugacy classes")
    classical(s, with_method=True)
    s.set_defaults(func=cmd_class_count)
    s = sub.add_parser("check-91", help="class count against its upper bound")
    classical(s)
    s.set_defaults(func=cmd_check_bound)
    s = sub.add_parser("rss", help="regular semisimple proportion")
    classical(s)
    s.add_argument("--allow-inexact", action="store_true")
    s.set_defaults(func=cmd_rss)

    s = sub.add_parser("limit", help="truncated limiting constant for k(X(n,q))/q^n")
    s.add_argument("--family", required=True, choices=("GL", "GU", "Sp", "O", "Oplus", "Ominus", "SOodd"))
    s.add_argument("--q", type=int, required=True)
    s.add_argument("--depth", type=int, default=40)
    s.set_defaults(func=cmd_limit)

    s = sub.add_parser("verify", help="run a verification suite")
    s.add_argument("suite", choices=("bounds", "cosets", "lemmas"))
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("corpus", help="list a named corpus")
    s.add_argument("name")
    s.set_defaults(func=cmd_corpus)
    return p


def _to_csv(report: dict) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    results = report["results"]
    rows = results.get("checks") if isinstance(results, dict) else None
    if rows:
        writer.writerow(list(rows[0]))
        for r in rows:
            writer.writerow(list(r.values()))
    else:
        writer.writerow(["key", "value"])
        for k, v in results.items():
            writer.writerow([k, json.dumps(v) if isinstance(v, (list, dict)) else v])
    writer.writerow(["pass", report["pass"]])
    return buf.getvalue()


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.cap < 1 or getattr(args, "depth", 1) < 1:
        print("error: --cap and --depth must be at least 1", file=sys.stderr)
        return EXIT_INVALID
    start = time.perf_counter()
    try:
        inputs, results, ok = args.func(args)
    except CapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except VerificationFailure as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_FAILED
    except (GroupComputationError, ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    report = {"subcommand": args.command, "inputs": render(inputs), "results": render(results),
              "pass": bool(ok)}
    if args.timing:
        report["seconds"] = f"{time.perf_counter() - start:.3f}"
    text = _to_csv(report) if args.format == "csv" else json.dumps(report, indent=2) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if ok else EXIT_FAILED


def main():
    raise SystemExit(run())


if __name__ == "__main__":
    main()
