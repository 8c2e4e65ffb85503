"""cc-growth command line front end.

Every run validates its whole parameter set before computing, writes output
files atomically (temp file + rename), prints a one-line summary to stdout,
and is byte-deterministic given the seed.  Reals are printed with 12
significant digits, CSV uses comma separators and LF line endings.

Exit codes: 0 success / positive verdict; 1 computation-negative verdict;
2 unsupported context (no C'(1/6) certificate); 3 resource budget exceeded;
64 usage error; 66 missing or unparseable input file.
"""

import argparse
import json
import math
import os
import sys
import tempfile
from dataclasses import dataclass
from fractions import Fraction

from . import GRAMMAR_VERSION, __version__
from .dehn import DehnContext, dehn_reduce
from .errors import (
    CCGrowthError,
    ParameterError,
    PresentationSyntaxError,
    ResourceBudgetError,
    UnsupportedContextError,
    WordSyntaxError,
    AlphabetError,
)
from .growth import (
    FreeFactor,
    LengthFunctionZ,
    ProductGroup,
    check_length_function,
    growth_curve,
    product_growth_curve,
    seeded_automorphism,
)
from .lipschitz import lip_lower, lip_upper
from .metrics import HeisenbergElement, HeisenbergOracle, get_ball
from .presentations import check_small_cancellation, parse_presentation
from .rips import COMPLETE, PAPER, OuterAuto, RipsScheme, rips_presentation
from .rng import SplitMix64
from .words import Alphabet


class UsageError(Exception):
    pass


@dataclass
class ExperimentPlan:
    command: str
    params: dict

    def __getattr__(self, name):
        try:
            return self.params[name]
        except KeyError:
            raise AttributeError(name) from None


def fmt_real(x):
    return f"{x:.12g}"


def write_text_atomic(path, text):
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".cc-growth-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="\n") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def render_figure_atomic(path, render):
    suffix = os.path.splitext(path)[1] or ".png"
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".cc-growth-", suffix=suffix)
    os.close(fd)
    try:
        render(tmp)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def csv_text(header, rows):
    lines = [",".join(header)]
    for row in rows:
        cells = []
        for cell in row:
            if cell is None:
                cells.append("")
            elif isinstance(cell, float):
                cells.append(fmt_real(cell))
            else:
                cells.append(str(cell))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def _read_presentation(path):
    with open(path, "r", encoding="utf-8") as f:
        return parse_presentation(f.read())


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser():
    top = _Parser(prog="cc-growth", description=__doc__)
    top.add_argument(
        "--version",
        action="version",
        version=f"cc-growth {__version__} (presentation grammar v{GRAMMAR_VERSION})",
    )
    sub = top.add_subparsers(dest="command")

    p = sub.add_parser("parse", help="parse a presentation and summarize it")
    p.add_argument("--presentation", required=True)

    p = sub.add_parser("sc-check", help="C'(lambda) small-cancellation check")
    p.add_argument("--presentation", required=True)
    p.add_argument("--lambda", dest="lam", default="1/6")
    p.add_argument("--method", choices=["fast", "naive"], default="fast")
    p.add_argument("--out", default=None, help="write the JSON report here")

    p = sub.add_parser("rips-gen", help="generate the Rips presentation of G")
    p.add_argument("--presentation", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--mode", choices=[PAPER, COMPLETE], default=COMPLETE)
    p.add_argument("--out", required=True,
                   help="presentation file; the rules sidecar goes to OUT.json")

    p = sub.add_parser("dehn", help="Dehn-reduce a word and report triviality")
    p.add_argument("--presentation", required=True)
    p.add_argument("--word", required=True)

    p = sub.add_parser("heisenberg", help="central distortion data |z^n|")
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--radius", type=int, required=True)
    p.add_argument("--csv", required=True)
    p.add_argument("--fig", default=None)

    p = sub.add_parser("growth", help="growth curve of an outer automorphism")
    p.add_argument("--presentation", required=True, help="presentation of Q")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--q", required=True, help="word over Q defining the automorphism")
    p.add_argument("--class", dest="cls", required=True, help="conjugacy class in N")
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--mode", choices=["counts", "materialize"], default="counts")
    p.add_argument("--csv", required=True)
    p.add_argument("--fig", default=None)
    p.add_argument("--oracle-radius", type=int, default=40,
                   help="BFS radius cap of the Q-metric oracle")
    p.add_argument("--norm-oracle-radius", type=int, default=None,
                   help="fill oracle_exact via the bounded N-norm search")
    p.add_argument("--conj-radius", type=int, default=1)

    p = sub.add_parser("lenfun", help="length-function axiom report")
    p.add_argument("--alpha", default=None, help="power exponent, e.g. 0.5 or 1/3")
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.add_argument("--rmax", type=int, required=True)
    p.add_argument("--kind", choices=["power", "logarithmic"], default="power")
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("product-growth", help="seeded two-factor product growth")
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--moves", type=int, default=3, help="Nielsen moves per factor")
    p.add_argument("--csv", required=True)
    p.add_argument("--fig", default=None)

    p = sub.add_parser("lip", help="Lipschitz metric bracket for chi(q)")
    p.add_argument("--presentation", required=True, help="presentation of Q")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--q", required=True)
    p.add_argument("--radius", type=int, required=True)
    p.add_argument("--conj-radius", type=int, default=1)

    return top


def parse_args(argv):
    """Validate argv into an ExperimentPlan; raises UsageError on any problem."""
    parser = build_parser()
    ns = parser.parse_args(argv)
    if ns.command is None:
        raise UsageError(parser.format_usage().strip())
    params = {k: v for k, v in vars(ns).items() if k != "command"}
    plan = ExperimentPlan(ns.command, params)
    _validate(plan)
    return plan


def _validate(plan):
    p = plan.params
    if "k" in p and p["k"] < 1:
        raise UsageError("--k must be >= 1")
    for key in ("n_max", "radius", "rmax", "oracle_radius"):
        if p.get(key) is not None and p[key] < 0:
            raise UsageError(f"--{key.replace('_', '-')} must be >= 0")
    if plan.command == "sc-check":
        try:
            lam = Fraction(p["lam"])
        except (ValueError, ZeroDivisionError):
            raise UsageError(f"--lambda must be a fraction, got {p['lam']!r}") from None
        if not 0 < lam < 1:
            raise UsageError("--lambda must be in (0,1)")
        p["lam"] = lam
    if plan.command == "lenfun":
        if p["kind"] == "power":
            if p["alpha"] is None:
                raise UsageError("--alpha is required for the power kind")
            try:
                alpha = Fraction(p["alpha"])
            except (ValueError, ZeroDivisionError):
                raise UsageError(f"--alpha must be a fraction, got {p['alpha']!r}") from None
            if not 0 < alpha <= 1:
                raise UsageError("--alpha must be in (0,1]")
            p["alpha"] = alpha
        if p["lam"] <= 1:
            raise UsageError("--lambda must exceed 1")
    if plan.command == "lip" and p["radius"] < 1:
        raise UsageError("--radius must be >= 1")


# ---------------------------------------------------------------------------
# command bodies


def _cmd_parse(plan):
    pres = _read_presentation(plan.presentation)
    info = {
        "generators": list(pres.alphabet.names),
        "relators": len(pres.relators),
        "relator_lengths": [len(r) for r in pres.relators],
        "total_relator_length": pres.total_relator_length(),
    }
    print(json.dumps(info, sort_keys=True))
    return 0


def _cmd_sc_check(plan):
    pres = _read_presentation(plan.presentation)
    report = check_small_cancellation(pres, plan.lam, method=plan.method)
    body = json.dumps(report.to_json_dict(pres.alphabet), sort_keys=True)
    if plan.out:
        write_text_atomic(plan.out, body + "\n")
    print(
        f"sc-check: verdict={report.verdict} lambda={plan.lam} "
        f"relators={len(pres.relators)}"
    )
    if plan.out is None:
        print(body)
    return 0 if report.passed() else 1


def _cmd_rips_gen(plan):
    pres = _read_presentation(plan.presentation)
    out = rips_presentation(pres, RipsScheme(plan.k, plan.mode))
    write_text_atomic(plan.out, out.g_presentation.format())
    write_text_atomic(plan.out + ".json", json.dumps(out.sidecar_dict(), sort_keys=True) + "\n")
    print(
        f"rips-gen: k={plan.k} mode={plan.mode} relations={len(out.relations)} "
        f"total_relator_length={out.g_presentation.total_relator_length()} -> {plan.out}"
    )
    return 0


def _cmd_dehn(plan):
    pres = _read_presentation(plan.presentation)
    word = pres.alphabet.parse_word(plan.word)
    ctx = DehnContext(pres)
    reduced = dehn_reduce(ctx, word)
    print(f"reduced: {pres.alphabet.format_word(reduced)}")
    if not ctx.sc_verified:
        print("verdict: unknown (presentation is not C'(1/6))")
        return 2
    trivial = reduced == ()
    print(f"verdict: {'trivial' if trivial else 'non-trivial'}")
    return 0 if trivial else 1


def _cmd_heisenberg(plan):
    ball = get_ball(plan.radius)
    rows = []
    for n in range(1, plan.n_max + 1):
        d = ball.distance(HeisenbergElement(0, 0, n))
        rows.append((n, d, 4 * _ceil_sqrt(n)))
    write_text_atomic(plan.csv, csv_text(["n", "z_power_length", "four_sqrt_bound"], rows))
    if plan.fig:
        from .figures import save_heisenberg_figure

        render_figure_atomic(plan.fig, lambda p: save_heisenberg_figure(rows, p))
    known = sum(1 for _, d, _ in rows if d is not None)
    print(
        f"heisenberg: n_max={plan.n_max} radius={plan.radius} ball={len(ball)} "
        f"exact_rows={known}/{len(rows)} -> {plan.csv}"
    )
    return 0


def _ceil_sqrt(n):
    r = math.isqrt(n)
    return r if r * r == n else r + 1


HEISENBERG_RELATORS = "gens a b\nrel [a,[a,b]]\nrel [b,[a,b]]\n"


def _require_heisenberg(pres):
    reference = parse_presentation(HEISENBERG_RELATORS)
    if len(pres.alphabet) != 2 or set(pres.relators) != set(
        _relabel(reference, pres.alphabet).relators
    ):
        raise UnsupportedContextError(
            "the Q-metric oracle backing currently requires the two-generator "
            "Heisenberg presentation"
        )


def _relabel(pres, alphabet):
    from .presentations import Presentation

    return Presentation(alphabet, pres.relators)


def _cmd_growth(plan):
    pres = _read_presentation(plan.presentation)
    _require_heisenberg(pres)
    rips = rips_presentation(pres, RipsScheme(plan.k, COMPLETE))
    q_word = pres.alphabet.parse_word(plan.q)
    cls = rips.g_alphabet.parse_word(plan.cls)
    phi = OuterAuto(rips, q_word)
    oracle = HeisenbergOracle(pres.alphabet, radius_cap=plan.oracle_radius)
    norm_oracle = None
    if plan.norm_oracle_radius is not None:
        ctx = DehnContext(rips.g_presentation)
        ctx.require_certificate("the N-norm oracle")
        norm_oracle = {
            "ctx": ctx,
            "radius": plan.norm_oracle_radius,
            "conj_radius": plan.conj_radius,
        }
    curve = growth_curve(
        phi, cls, range(0, plan.n_max + 1), oracle, mode=plan.mode, norm_oracle=norm_oracle
    )
    rows = [(s.n, s.q_length, s.ln_upper, s.oracle_exact) for s in curve.samples]
    write_text_atomic(plan.csv, csv_text(["n", "q_length", "ln_upper", "oracle_exact"], rows))
    if plan.fig:
        from .figures import save_growth_figure

        render_figure_atomic(plan.fig, lambda p: save_growth_figure(rows, p, plan.mode))
    last = curve.samples[-1]
    print(
        f"growth: k={plan.k} mode={plan.mode} q='{plan.q}' class='{plan.cls}' "
        f"n_max={plan.n_max} ln_upper(n_max)={fmt_real(last.ln_upper)} -> {plan.csv}"
    )
    return 0


def _cmd_lenfun(plan):
    if plan.kind == "power":
        lf = LengthFunctionZ.power(plan.alpha)
    else:
        lf = LengthFunctionZ.logarithmic()
    rng = SplitMix64(plan.seed).split("lenfun-axiom3")
    report = check_length_function(lf, plan.rmax, plan.lam, rng=rng)
    print(json.dumps(report, sort_keys=True, default=str))
    return 0 if report["verdict"] else 1


def _cmd_product_growth(plan):
    rng = SplitMix64(plan.seed)
    factors = []
    tuple_g = []
    for i in (1, 2):
        alphabet = Alphabet([f"x{i}", f"y{i}"])
        stream = rng.split(f"factor-{i}")
        auto = seeded_automorphism(alphabet, stream.split("auto"), n_moves=plan.moves)
        factors.append(FreeFactor(alphabet, auto))
        wstream = stream.split("tuple")
        length = 1 + wstream.randrange(4)
        word = []
        letters = [1, 2, -1, -2]
        for _ in range(length):
            cands = [x for x in letters if not (word and word[-1] == -x)]
            word.append(cands[wstream.randrange(len(cands))])
        tuple_g.append(tuple(word))
    product = ProductGroup(factors)
    curve = product_growth_curve(product, tuple(tuple_g), range(0, plan.n_max + 1))
    rows = []
    for s in curve.samples:
        norms = [
            f.norm(w)
            for f, w in zip(product.factors, product.apply_power(tuple(tuple_g), s.n))
        ]
        rows.append((s.n, norms, s.oracle_exact))
    csv_rows = [(n, *norms, total, math.log(total) if total else None)
                for n, norms, total in rows]
    write_text_atomic(
        plan.csv,
        csv_text(["n", "norm_1", "norm_2", "total_norm", "ln_total"], csv_rows),
    )
    if plan.fig:
        from .figures import save_product_growth_figure

        render_figure_atomic(plan.fig, lambda p: save_product_growth_figure(rows, p))
    print(
        f"product-growth: seed={plan.seed} factors=2 support={curve.meta['support']} "
        f"n_max={plan.n_max} -> {plan.csv}"
    )
    return 0


def _cmd_lip(plan):
    pres = _read_presentation(plan.presentation)
    rips = rips_presentation(pres, RipsScheme(plan.k, COMPLETE))
    ctx = DehnContext(rips.g_presentation)
    ctx.require_certificate("lip_lower")
    phi = OuterAuto(rips, pres.alphabet.parse_word(plan.q))
    est = lip_lower(phi, plan.radius, ctx, conj_radius=plan.conj_radius)
    body = {
        "lower": est.lower,
        "upper": est.upper,
        "witness": rips.g_alphabet.format_word(est.class_witness),
        "certified": est.certified,
    }
    print(json.dumps(body, sort_keys=True))
    return 0


_COMMANDS = {
    "parse": _cmd_parse,
    "sc-check": _cmd_sc_check,
    "rips-gen": _cmd_rips_gen,
    "dehn": _cmd_dehn,
    "heisenberg": _cmd_heisenberg,
    "growth": _cmd_growth,
    "lenfun": _cmd_lenfun,
    "product-growth": _cmd_product_growth,
    "lip": _cmd_lip,
}


def execute(plan):
    """Run a validated plan; returns the process exit code."""
    return _COMMANDS[plan.command](plan)


def main(argv=None):
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        plan = parse_args(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 64
    try:
        return execute(plan)
    except FileNotFoundError as exc:
        print(f"cannot read input: {exc}", file=sys.stderr)
        return 66
    except (PresentationSyntaxError, WordSyntaxError, AlphabetError) as exc:
        print(f"bad input: {exc}", file=sys.stderr)
        return 66
    except UnsupportedContextError as exc:
        print(f"unsupported context: {exc}", file=sys.stderr)
        return 2
    except ResourceBudgetError as exc:
        print(f"resource budget: {exc}", file=sys.stderr)
        return 3
    except ParameterError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 64


if __name__ == "__main__":
    sys.exit(main())
