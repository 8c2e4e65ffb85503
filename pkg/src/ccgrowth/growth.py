"""Growth curves n -> ln ||Phi^n(c)||, growth-order testers, length functions
on Z, and the direct-product construction with exact norm additivity.

Two maps f, g on a domain of sample points satisfy ``f precedes g`` when there
is an integer C with f(n) <= C * g(n) + C everywhere on the domain; they are
*equivalent* when each precedes the other.  Domination over a finite domain is
necessarily a finite-range statement, so asymptotic claims in the test suite
pair it with a log-log regression slope.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ArityError, ParameterError, TrivialClassError
from .metrics import ln_big, n_norm_bfs_oracle, n_norm_upper
from .words import cyclic_reduce, free_reduce, invert

# ---------------------------------------------------------------------------
# growth curves


@dataclass
class GrowthSample:
    n: int
    q_length: int | None
    ln_upper: float | None
    oracle_exact: int | None = None
    upper: int | None = None  # raw bracket behind ln_upper
    error: str | None = None  # reason for a gap row


@dataclass
class GrowthCurve:
    samples: list
    meta: dict = field(default_factory=dict)

    def domain(self):
        return [s.n for s in self.samples if s.ln_upper is not None]

    def evaluator(self):
        table = {s.n: s.ln_upper for s in self.samples if s.ln_upper is not None}
        return lambda n: table[n]

    def sample_at(self, n):
        for s in self.samples:
            if s.n == n:
                return s
        raise KeyError(n)


def growth_curve(
    phi,
    cyc,
    n_range,
    oracle,
    mode="counts",
    norm_oracle=None,
    on_error="raise",
):
    """Sample n -> ln ||Phi^n(c)|| upper brackets over ``n_range``.

    ``norm_oracle``, when given, is a dict with keys ctx, radius, conj_radius
    (and optionally conjugator_letters, materialize_cap); each sample whose
    image materializes within the cap is then sent to the bounded BFS norm
    oracle, filling ``oracle_exact`` on certification.  ``on_error="gap"``
    records per-sample failures as explicit gap rows instead of raising.
    """
    cyc = tuple(cyc)
    if not cyc:
        raise TrivialClassError("refusing to build a growth curve for the trivial class")
    ns = sorted(set(int(n) for n in n_range))
    samples = []
    for n in ns:
        try:
            est = n_norm_upper(phi, cyc, n, oracle, mode=mode)
        except Exception as exc:  # noqa: BLE001 - gap rows carry the reason
            if on_error != "gap":
                raise
            samples.append(GrowthSample(n, None, None, error=type(exc).__name__))
            continue
        exact = _try_norm_oracle(phi, cyc, n, oracle, norm_oracle)
        samples.append(
            GrowthSample(
                n,
                est.q_length,
                est.ln_upper,
                oracle_exact=exact,
                upper=est.upper,
            )
        )
    meta = {
        "class": cyc,
        "q_word": phi.q_word,
        "mode": mode,
    }
    return GrowthCurve(samples, meta)


def _try_norm_oracle(phi, cyc, n, oracle, cfg):
    if not cfg:
        return None
    from .metrics import q_geodesic
    from .rips import apply_outer
    from .words import power

    cap = cfg.get("materialize_cap", 4096)
    try:
        geo = q_geodesic(oracle, power(phi.q_word, n))
        img = apply_outer(type(phi)(phi.rips, geo), cyc, budget=cap)
        core, _ = cyclic_reduce(img)
        return n_norm_bfs_oracle(
            cfg["ctx"],
            core,
            cfg["radius"],
            cfg["conj_radius"],
            conjugator_letters=cfg.get("conjugator_letters"),
        )
    except Exception:  # noqa: BLE001 - the column is best-effort by contract
        return None


# ---------------------------------------------------------------------------
# domination and equivalence


@dataclass
class EquivalenceReport:
    relation: str  # "dominates" | "equivalent" | "fails"
    constant_C: int | None
    counterexample: tuple | None  # (n, lhs, rhs)
    domain: tuple

    def to_json_dict(self):
        return {
            "relation": self.relation,
            "constant_C": self.constant_C,
            "counterexample": list(self.counterexample) if self.counterexample else None,
            "domain": [min(self.domain), max(self.domain), len(self.domain)],
        }


def _as_callable(f):
    if isinstance(f, GrowthCurve):
        return f.evaluator()
    return f


def dominates(f, g, domain, C_max=1024):
    """Smallest integer C <= C_max with f(n) <= C g(n) + C on the whole domain."""
    domain = tuple(domain)
    if not domain:
        raise ParameterError("empty domination domain")
    fe, ge = _as_callable(f), _as_callable(g)
    pairs = [(fe(n), ge(n), n) for n in domain]

    def holds(C):
        return all(fv <= C * gv + C for fv, gv, _ in pairs)

    if not holds(C_max):
        n_w, f_w, g_w = max(
            ((n, fv, gv) for fv, gv, n in pairs),
            key=lambda t: t[1] - (C_max * t[2] + C_max),
        )
        return EquivalenceReport("fails", None, (n_w, f_w, g_w), domain)
    lo, hi = 1, 1
    while not holds(hi):
        lo, hi = hi + 1, min(hi * 2, C_max)
    while lo < hi:
        mid = (lo + hi) // 2
        if holds(mid):
            hi = mid
        else:
            lo = mid + 1
    return EquivalenceReport("dominates", lo, None, domain)


def equivalent(f, g, domain, C_max=1024):
    """Mutual domination; reports the larger of the two constants."""
    fwd = dominates(f, g, domain, C_max)
    if fwd.relation == "fails":
        return EquivalenceReport("fails", None, fwd.counterexample, fwd.domain)
    bwd = dominates(g, f, domain, C_max)
    if bwd.relation == "fails":
        return EquivalenceReport("fails", None, bwd.counterexample, bwd.domain)
    return EquivalenceReport(
        "equivalent", max(fwd.constant_C, bwd.constant_C), None, fwd.domain
    )


def loglog_slope(points):
    """Least-squares slope of ln(value) against ln(n) over (n, value) pairs."""
    xs, ys = [], []
    for n, v in points:
        if n <= 0 or v <= 0:
            raise ParameterError("log-log regression needs positive samples")
        xs.append(math.log(n))
        ys.append(math.log(v))
    m = len(xs)
    if m < 2:
        raise ParameterError("log-log regression needs at least two samples")
    sx, sy = sum(xs), sum(ys)
    sxx = sum(x * x for x in xs)
    sxy = sum(x * y for x, y in zip(xs, ys))
    return (m * sxy - sx * sy) / (m * sxx - sx * sx)


# ---------------------------------------------------------------------------
# length functions on Z


def _iroot(x, k):
    """Largest m with m**k <= x (x >= 0, k >= 1)."""
    if x < 0:
        raise ValueError("negative radicand")
    if x in (0, 1) or k == 1:
        return x
    m = int(round(x ** (1.0 / k)))
    while m > 0 and m**k > x:
        m -= 1
    while (m + 1) ** k <= x:
        m += 1
    return m


class LengthFunctionZ:
    """A candidate length function on Z with an optional exact sublevel counter."""

    def __init__(self, evaluator, kind="custom", counter=None, describe=None):
        self._eval = evaluator
        self.kind = kind
        self._counter = counter
        self.describe = describe or kind

    def __call__(self, n):
        return self._eval(n)

    def count_at_most(self, r):
        """Exact |{n in Z : L(n) <= r}|, or None when no exact counter exists."""
        return None if self._counter is None else self._counter(r)

    @staticmethod
    def power(alpha):
        """L(n) = ceil(|n| ** alpha) for a rational alpha in (0, 1]."""
        alpha = Fraction(alpha)
        if not 0 < alpha <= 1:
            raise ParameterError(f"power exponent must be in (0,1], got {alpha}")
        num, den = alpha.numerator, alpha.denominator

        def ev(n):
            n = abs(n)
            if n == 0:
                return 0
            # ceil(n^(num/den)): least m with m^den >= n^num
            t = n**num
            m = _iroot(t, den)
            return m if m**den == t else m + 1

        def counter(r):
            # L(n) <= r  <=>  n^num <= r^den
            return 2 * _iroot(r**den, num) + 1

        return LengthFunctionZ(ev, kind="power", counter=counter, describe=f"|n|^{alpha}")

    @staticmethod
    def logarithmic():
        """L(n) = ceil(log2(1 + |n|))."""

        def ev(n):
            return (abs(n)).bit_length() if abs(n) else 0

        def counter(r):
            # L(n) <= r  <=>  |n| <= 2^r - 1
            return 2 * (2**r - 1) + 1

        # ceil(log2(1+m)) equals bit_length(m) for m >= 1
        return LengthFunctionZ(ev, kind="logarithmic", describe="log2(1+|n|)", counter=counter)

    @staticmethod
    def table(values):
        """Finite sampled table: values[k] = L(k) for 0 <= k < len(values); symmetric."""
        values = list(values)

        def ev(n):
            n = abs(n)
            if n >= len(values):
                raise ParameterError(f"table length function undefined at {n}")
            return values[n]

        def counter(r):
            hits = sum(1 for v in values[1:] if v <= r)
            return 2 * hits + (1 if values and values[0] <= r else 0)

        return LengthFunctionZ(ev, kind="table", counter=counter)


def check_length_function(L, r_max, lam, sample_budget=2000, rng=None):
    """Def-style axiom report: point separation, symmetry, subadditivity on a
    seeded sample, and exact sublevel counting against lam**r for r <= r_max."""
    if lam <= 1:
        raise ParameterError("lambda must exceed 1")
    bound = r_max * r_max
    report = {"kind": L.kind, "describe": L.describe, "lambda": lam, "r_max": r_max}

    witness = None
    if L(0) != 0:
        witness = 0
    else:
        for n in range(1, bound + 1):
            if L(n) <= 0 or L(-n) <= 0:
                witness = n if L(n) <= 0 else -n
                break
    report["axiom1"] = {"passed": witness is None, "witness": witness}

    witness2 = next((n for n in range(bound + 1) if L(n) != L(-n)), None)
    report["axiom2"] = {"passed": witness2 is None, "witness": witness2}

    if rng is None:
        from .rng import SplitMix64

        rng = SplitMix64(0).split("length-function-axiom3")
    witness3 = None
    for _ in range(sample_budget):
        n1 = rng.randint(-bound, bound)
        n2 = rng.randint(-bound, bound)
        if L(n1 + n2) > L(n1) + L(n2):
            witness3 = (n1, n2)
            break
    report["axiom3"] = {"passed": witness3 is None, "witness": witness3, "samples": sample_budget}

    rows = []
    ax4_pass = True
    counted = True
    for r in range(1, r_max + 1):
        cnt = L.count_at_most(r)
        if cnt is None:
            counted = False
            break
        ok = cnt <= lam**r
        ax4_pass = ax4_pass and ok
        rows.append({"r": r, "count": cnt, "bound": lam**r, "ok": ok})
    report["axiom4"] = {
        "passed": ax4_pass and counted,
        "exact": counted,
        "rows": rows,
    }
    report["verdict"] = all(report[f"axiom{i}"]["passed"] for i in (1, 2, 3, 4))
    return report


# ---------------------------------------------------------------------------
# free-group factors and direct products


def substitute(word, images):
    """Apply a generator->word map to a word (inverse letters use inverted images)."""
    out = []
    for ell in word:
        img = images[ell] if ell > 0 else invert(images[-ell])
        for x in img:
            if out and out[-1] == -x:
                out.pop()
            else:
                out.append(x)
    return tuple(out)


class FreeGroupAutomorphism:
    """Automorphism of a free group, given by generator images, composed from
    elementary Nielsen moves so the inverse images are tracked exactly."""

    def __init__(self, alphabet, images, inverse_images=None):
        self.alphabet = alphabet
        self.images = dict(images)
        self.inverse_images = dict(inverse_images) if inverse_images else None
        self._power_cache = {1: self.images}

    @staticmethod
    def identity(alphabet):
        images = {i + 1: (i + 1,) for i in range(len(alphabet))}
        return FreeGroupAutomorphism(alphabet, images, dict(images))

    def compose_move(self, move_images, move_inverse_images):
        """Return self o move (apply the move first, then self)."""
        images = {g: substitute(w, self.images) for g, w in move_images.items()}
        inv = None
        if self.inverse_images is not None:
            inv = {g: substitute(self.inverse_images[g], move_inverse_images)
                   for g in self.inverse_images}
        return FreeGroupAutomorphism(self.alphabet, images, inv)

    def apply(self, word):
        return substitute(free_reduce(word), self.images)

    def power_images(self, n):
        if n == 0:
            return FreeGroupAutomorphism.identity(self.alphabet).images
        if n < 0:
            if self.inverse_images is None:
                raise ParameterError("negative powers need tracked inverse images")
            inv = FreeGroupAutomorphism(self.alphabet, self.inverse_images, self.images)
            return inv.power_images(-n)
        cached = self._power_cache.get(n)
        if cached is None:
            prev = self.power_images(n - 1)
            cached = {g: substitute(w, prev) for g, w in self.images.items()}
            self._power_cache[n] = cached
        return cached

    def apply_power(self, word, n):
        return substitute(free_reduce(word), self.power_images(n))


def seeded_automorphism(alphabet, rng, n_moves=3):
    """Compose a seeded sequence of Nielsen moves into an automorphism."""
    k = len(alphabet)
    if k < 2:
        raise ParameterError("need at least two generators for interesting moves")
    phi = FreeGroupAutomorphism.identity(alphabet)
    idmap = {i + 1: (i + 1,) for i in range(k)}
    for _ in range(n_moves):
        i = rng.randrange(k) + 1
        j = rng.randrange(k - 1) + 1
        j = j if j < i else j + 1  # j != i
        kind = rng.randrange(3)
        fwd, bwd = dict(idmap), dict(idmap)
        if kind == 0:  # x_i -> x_i x_j
            fwd[i] = (i, j)
            bwd[i] = (i, -j)
        elif kind == 1:  # x_i -> x_j^-1 x_i
            fwd[i] = (-j, i)
            bwd[i] = (j, i)
        else:  # invert x_i
            fwd[i] = (-i,)
            bwd[i] = (-i,)
        phi = phi.compose_move(fwd, bwd)
    return phi


class FreeFactor:
    """A free-group factor: conjugacy norm = cyclically reduced length."""

    def __init__(self, alphabet, automorphism=None):
        self.alphabet = alphabet
        self.automorphism = automorphism or FreeGroupAutomorphism.identity(alphabet)

    def norm(self, word):
        core, _ = cyclic_reduce(free_reduce(word))
        return len(core)

    def apply_power(self, word, n):
        return self.automorphism.apply_power(word, n)


class ProductGroup:
    """Direct product of measured factors with the union generating set, so the
    norm of a tuple is the sum of the factor norms."""

    def __init__(self, factors):
        self.factors = list(factors)
        names = [n for f in self.factors for n in f.alphabet.names]
        if len(set(names)) != len(names):
            raise ParameterError("factor alphabets must be pairwise disjoint")

    def check_arity(self, g):
        if len(g) != len(self.factors):
            raise ArityError(
                f"tuple arity {len(g)} does not match {len(self.factors)} factors"
            )

    def norm(self, g):
        self.check_arity(g)
        return sum(f.norm(w) for f, w in zip(self.factors, g))

    def apply_power(self, g, n):
        self.check_arity(g)
        return tuple(f.apply_power(w, n) for f, w in zip(self.factors, g))

    def support(self, g):
        self.check_arity(g)
        return [i for i, (f, w) in enumerate(zip(self.factors, g)) if f.norm(w) > 0]


def product_norm(product, g):
    """Sum of per-factor conjugacy norms (the word metric on the union alphabet)."""
    return product.norm(g)


def product_growth_curve(product, g, n_range):
    """Samples of ln product_norm(phi^n(g)); oracle_exact is the exact norm."""
    support = product.support(g)
    if not support:
        raise TrivialClassError("trivial tuple has no growth curve")
    samples = []
    for n in sorted(set(int(n) for n in n_range)):
        norms = [f.norm(w) for f, w in zip(product.factors, product.apply_power(g, n))]
        total = sum(norms)
        samples.append(
            GrowthSample(
                n,
                None,
                ln_big(total) if total else None,
                oracle_exact=total,
                upper=total,
            )
        )
    return GrowthCurve(samples, {"support": support, "factor_norms": True})
