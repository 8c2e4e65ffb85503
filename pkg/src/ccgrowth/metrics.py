"""Word metrics and norms.

Exact Q-lengths come from breadth-first search over the Cayley graph.  For the
discrete Heisenberg group the states are normal-form coordinates (p, q, r)
with

    (p, q, r) * (p', q', r') = (p + p', q + q', r + r' + p * q')

so a -> (1,0,0), b -> (0,1,0), and the commutator [a,b] evaluates to (0,0,1).
The r-coordinate of a closed {a,b}-path is the signed lattice area it encloses,
which gives an exact closed form for central elements far beyond the ball:
the rectilinear isoperimetric inequality bounds the area enclosed by a closed
lattice loop of length L by floor(L/4) * ceil(L/4), and staircase loops attain
every smaller area, so

    |(0, 0, n)| = min { L even : floor(L/4) * ceil(L/4) >= |n| }.

The extension is cross-checked against exhaustive BFS on its whole shared
range by the test suite.

Conjugacy norms in the kernel N are reported as brackets: materialized or
count-matrix upper bounds on one side, and a bounded BFS-plus-conjugacy
search on the other, which certifies small values but can never prove a
lower bound beyond its radius.
"""

import math
from dataclasses import dataclass

from .dehn import MAX_CONJ_RADIUS, are_conjugate_bounded
from .errors import AlphabetError, ParameterError, RadiusExceededError, ResourceBudgetError, TrivialClassError
from .rips import apply_outer, apply_outer_counts, letter_counts
from .words import canonical_rotation, cyclic_reduce, free_reduce, invert, is_cyclically_reduced, letter_key, power

LN2 = math.log(2.0)


def ln_big(n):
    """Natural log of a positive arbitrary-precision integer.

    Uses bit length plus a 53-bit leading mantissa; relative error is far
    below the documented 1e-9.
    """
    if n <= 0:
        raise ValueError("ln_big needs a positive integer")
    e = n.bit_length() - 53
    if e <= 0:
        return math.log(n)
    return math.log(n >> e) + e * LN2


@dataclass(frozen=True)
class HeisenbergElement:
    """Normal-form coordinates of the discrete Heisenberg group."""

    p: int
    q: int
    r: int

    def __mul__(self, other):
        return HeisenbergElement(
            self.p + other.p, self.q + other.q, self.r + other.r + self.p * other.q
        )

    def inverse(self):
        return HeisenbergElement(-self.p, -self.q, -self.r + self.p * self.q)

    def is_identity(self):
        return self.p == 0 and self.q == 0 and self.r == 0


H_IDENTITY = HeisenbergElement(0, 0, 0)
H_A = HeisenbergElement(1, 0, 0)
H_B = HeisenbergElement(0, 1, 0)


def heisenberg_eval(word):
    """Left-to-right product of letter images; letters are +-1 (a) and +-2 (b)."""
    p = q = r = 0
    for ell in word:
        if ell == 1:
            p += 1
        elif ell == -1:
            p -= 1
        elif ell == 2:
            q += 1
            r += p
        elif ell == -2:
            q -= 1
            r -= p
        else:
            raise AlphabetError(f"letter {ell} is not a Heisenberg generator")
    return HeisenbergElement(p, q, r)


class HeisenbergBall:
    """Exact distances within a BFS ball of the given radius, with geodesics
    recovered by greedy descent in the fixed letter order a, a^-1, b, b^-1."""

    def __init__(self, radius):
        if radius < 0:
            raise ParameterError("radius must be >= 0")
        self.radius = radius
        rmax = radius * radius // 4 + 1
        self._rmax = rmax
        self._qshift = (2 * rmax + 1).bit_length()
        self._pshift = self._qshift + (2 * radius + 1).bit_length()
        dist = {self._pack(0, 0, 0): 0}
        frontier = [(0, 0, 0)]
        pack = self._pack
        for d in range(1, radius + 1):
            nxt = []
            for p, q, r in frontier:
                for np, nq, nr in ((p + 1, q, r), (p - 1, q, r), (p, q + 1, r + p), (p, q - 1, r - p)):
                    key = pack(np, nq, nr)
                    if key not in dist:
                        dist[key] = d
                        nxt.append((np, nq, nr))
            frontier = nxt
        self._dist = dist

    def _pack(self, p, q, r):
        return (((p + self.radius) << self._pshift)
                | ((q + self.radius) << self._qshift)
                | (r + self._rmax))

    def __len__(self):
        return len(self._dist)

    def distance(self, e):
        """Exact |e|, or None when e lies outside the ball."""
        if abs(e.p) > self.radius or abs(e.q) > self.radius or abs(e.r) > self._rmax:
            return None
        return self._dist.get(self._pack(e.p, e.q, e.r))

    def geodesic(self, e):
        """A geodesic word (letters +-1, +-2) for an in-ball element."""
        d = self.distance(e)
        if d is None:
            raise RadiusExceededError(
                f"element outside the radius-{self.radius} ball", cap=self.radius
            )
        word = []
        p, q, r = e.p, e.q, e.r
        while d > 0:
            for ell, (pp, pq, pr) in (
                (1, (p - 1, q, r)),
                (-1, (p + 1, q, r)),
                (2, (p, q - 1, r - p)),
                (-2, (p, q + 1, r + p)),
            ):
                if abs(pp) <= self.radius and abs(pr) <= self._rmax:
                    if self._dist.get(self._pack(pp, pq, pr)) == d - 1:
                        word.append(ell)
                        p, q, r = pp, pq, pr
                        d -= 1
                        break
            else:
                raise AssertionError("BFS ball lost a parent")
        word.reverse()
        return tuple(word)


_BALL_CACHE = {}


def get_ball(radius):
    ball = _BALL_CACHE.get(radius)
    if ball is None:
        ball = _BALL_CACHE[radius] = HeisenbergBall(radius)
    return ball


def heisenberg_length(e, radius_cap=40, ball=None):
    """Exact word length of e over {a^-1, a, b^-1, b}; BFS with memoized ball."""
    if ball is None:
        ball = get_ball(radius_cap)
    d = ball.distance(e)
    if d is None:
        raise RadiusExceededError(
            f"element outside the radius-{ball.radius} ball", cap=ball.radius
        )
    return d


def _iso_area(L):
    return (L // 4) * ((L + 3) // 4)


def central_distance(n):
    """|(0,0,n)| via the discrete isoperimetric closed form."""
    n = abs(n)
    if n == 0:
        return 0
    L = 4 * math.isqrt(n)
    L -= L % 2
    while L > 2 and _iso_area(L - 2) >= n:
        L -= 2
    while _iso_area(L) < n:
        L += 2
    return L


def central_geodesic(n):
    """A geodesic word (letters +-1, +-2) for the central element (0,0,n).

    Staircase loop: alpha columns of c full rows plus a partial row of s cells
    encloses exactly |n| with the minimal perimeter.
    """
    if n == 0:
        return ()
    L = central_distance(n)
    alpha = L // 4
    m = abs(n)
    c, s = divmod(m, alpha)
    up, down = (2, -2) if n > 0 else (-2, 2)
    if s == 0:
        word = [1] * alpha + [up] * c + [-1] * alpha + [down] * c
    else:
        word = (
            [1] * alpha
            + [up] * c
            + [-1] * (alpha - s)
            + [up]
            + [-1] * s
            + [down] * (c + 1)
        )
    return tuple(word)


class HeisenbergOracle:
    """Q-metric oracle for a two-generator Heisenberg presentation.

    length/geodesic work on words over the presentation alphabet (first
    generator plays a, second plays b).  Elements inside the memoized BFS
    ball are answered exactly from it; central elements beyond the ball use
    the closed form.  Everything else raises RadiusExceededError.
    """

    def __init__(self, alphabet, radius_cap=40, central_extension=True):
        if len(alphabet) != 2:
            raise AlphabetError("the Heisenberg oracle needs a two-generator alphabet")
        self.alphabet = alphabet
        self.radius_cap = radius_cap
        self.central_extension = central_extension
        self._ball = None

    @property
    def ball(self):
        if self._ball is None:
            self._ball = get_ball(self.radius_cap)
        return self._ball

    def eval(self, word):
        return heisenberg_eval(word)

    def element_length(self, e):
        if e.p == 0 and e.q == 0 and self.central_extension:
            return central_distance(e.r)
        d = self.ball.distance(e)
        if d is None:
            raise RadiusExceededError(
                f"element outside the radius-{self.radius_cap} ball", cap=self.radius_cap
            )
        return d

    def element_geodesic(self, e):
        if e.p == 0 and e.q == 0 and self.central_extension:
            return central_geodesic(e.r)
        return self.ball.geodesic(e)

    def length(self, word):
        return self.element_length(self.eval(word))

    def geodesic(self, word):
        return self.element_geodesic(self.eval(word))


class GenericBFSOracle:
    """BFS oracle over a user-supplied multiplication.

    ``generators`` is a list of (letter, element); elements must be hashable
    and multiply associatively via ``multiply``.
    """

    def __init__(self, identity, generators, multiply, radius_cap):
        self.identity = identity
        self.generators = list(generators)
        self.multiply = multiply
        self.radius_cap = radius_cap
        dist = {identity: (0, 0)}  # element -> (distance, last letter index)
        frontier = [identity]
        for d in range(1, radius_cap + 1):
            nxt = []
            for e in frontier:
                for gi, (_, g) in enumerate(self.generators):
                    ne = multiply(e, g)
                    if ne not in dist:
                        dist[ne] = (d, gi)
                        nxt.append(ne)
            frontier = nxt
        self._dist = dist
        self._inverse_cache = {}

    def __len__(self):
        return len(self._dist)

    def eval(self, word):
        e = self.identity
        by_letter = {ell: g for ell, g in self.generators}
        for ell in word:
            e = self.multiply(e, by_letter[ell])
        return e

    def element_length(self, e):
        hit = self._dist.get(e)
        if hit is None:
            raise RadiusExceededError(
                f"element outside the radius-{self.radius_cap} ball", cap=self.radius_cap
            )
        return hit[0]

    def element_geodesic(self, e):
        """Geodesic by walking recorded last letters back to the identity."""
        d, gi = self._lookup(e)
        word = []
        while d > 0:
            ell, g = self.generators[gi]
            word.append(ell)
            e = self.multiply(e, self._inverse_of(gi))
            d, gi = self._lookup(e)
        word.reverse()
        return tuple(word)

    def _lookup(self, e):
        hit = self._dist.get(e)
        if hit is None:
            raise RadiusExceededError(
                f"element outside the radius-{self.radius_cap} ball", cap=self.radius_cap
            )
        return hit

    def _inverse_of(self, gi):
        """Inverse of generator gi, resolved inside the ball (letter -ell)."""
        inv = self._inverse_cache.get(gi)
        if inv is None:
            ell, _ = self.generators[gi]
            for oell, og in self.generators:
                if oell == -ell:
                    inv = og
                    break
            else:
                raise AlphabetError(f"generator set lacks the inverse of letter {ell}")
            self._inverse_cache[gi] = inv
        return inv

    def length(self, word):
        return self.element_length(self.eval(word))

    def geodesic(self, word):
        return self.element_geodesic(self.eval(word))


class DehnBFSOracle:
    """Length oracle by iterative deepening with Dehn equality (tiny radii only)."""

    def __init__(self, ctx, radius_cap, candidate_budget=200_000):
        ctx.require_certificate("DehnBFSOracle")
        self.ctx = ctx
        self.radius_cap = radius_cap
        self.candidate_budget = candidate_budget

    def length(self, word):
        return len(self.geodesic(word))

    def geodesic(self, word):
        from .dehn import _conjugator_words, are_equal

        letters = [i + 1 for i in range(len(self.ctx.alphabet))]
        letters += [-x for x in letters]
        count = 0
        for cand in _conjugator_words(letters, self.radius_cap):
            count += 1
            if count > self.candidate_budget:
                raise ResourceBudgetError(
                    f"Dehn-equality BFS exceeded {self.candidate_budget} candidates"
                )
            if are_equal(self.ctx, cand, word):
                return cand
        raise RadiusExceededError(
            f"no representative within radius {self.radius_cap}", cap=self.radius_cap
        )


def q_geodesic(oracle, word):
    """A geodesic word equal to ``word`` in Q; deterministic via the oracle's
    fixed generator order."""
    return oracle.geodesic(word)


@dataclass
class NormEstimate:
    """A bracket on a conjugacy norm with method provenance."""

    upper: int
    ln_upper: float
    method: str  # materialized | count-matrix | bfs-oracle | dehn-heuristic
    lower: int | None = None
    q_length: int | None = None
    q_geodesic: tuple | None = None

    def __post_init__(self):
        if self.lower is not None and self.lower > self.upper:
            raise ValueError("lower bracket above upper bracket")


def n_norm_upper(phi, cyc, n, oracle, mode="counts", materialize_budget=None):
    """Upper bracket on ||Phi^n(c)||_N using a geodesic representative of q^n.

    materialize mode: cyclically reduced length of the substituted image
    (tight, but the image length is exponential in |q^n|).  counts mode: the
    nonnegative substitution-count total (weaker, always feasible).
    """
    cyc = tuple(cyc)
    if not phi.rips.is_n_word(cyc):
        raise AlphabetError("conjugacy class must be a word over the kernel generators")
    if not cyc:
        raise TrivialClassError("the trivial class has no growth curve")
    qn = power(phi.q_word, n)
    geo = q_geodesic(oracle, qn)
    phi_geo = type(phi)(phi.rips, geo)
    if mode == "materialize":
        kwargs = {} if materialize_budget is None else {"budget": materialize_budget}
        img = apply_outer(phi_geo, cyc, **kwargs)
        core, _ = cyclic_reduce(img)
        if not core:
            raise TrivialClassError("class collapsed to the identity")
        return NormEstimate(
            upper=len(core),
            ln_upper=math.log(len(core)),
            method="materialized",
            q_length=len(geo),
            q_geodesic=geo,
        )
    if mode == "counts":
        total = sum(apply_outer_counts(phi_geo, letter_counts(phi.rips, cyc)))
        return NormEstimate(
            upper=total,
            ln_upper=ln_big(total),
            method="count-matrix",
            q_length=len(geo),
            q_geodesic=geo,
        )
    raise ParameterError(f"unknown mode {mode!r}")


MAX_NORM_ORACLE_RADIUS = 8


def _cyclic_class_words(letters, radius):
    """Canonical representatives of cyclically reduced words, shortest first."""
    letters = sorted(letters, key=letter_key)
    seen = set()
    stack = [()]
    for length in range(1, radius + 1):
        frontier = []

        def extend(w):
            for x in letters:
                if w and w[-1] == -x:
                    continue
                frontier.append(w + (x,))

        for w in stack:
            extend(w)
        stack = frontier
        for w in stack:
            if not is_cyclically_reduced(w):
                continue
            c = canonical_rotation(w)
            if c not in seen:
                seen.add(c)
                yield c


def n_norm_bfs_oracle_witness(
    ctx,
    target,
    radius,
    conj_radius,
    conjugator_letters=None,
    n_letters=None,
):
    """Exhaustive short-representative search: the least length of a word v
    over the kernel letters with v conjugate to target within conj_radius.

    Returns (length, witness) or None.  A hit is a certificate; None is
    inconclusive."""
    ctx.require_certificate("n_norm_bfs_oracle")
    if radius > MAX_NORM_ORACLE_RADIUS:
        raise ResourceBudgetError(
            f"norm-oracle radius {radius} exceeds the budget {MAX_NORM_ORACLE_RADIUS}"
        )
    if conj_radius > MAX_CONJ_RADIUS:
        raise ResourceBudgetError(
            f"conjugator radius {conj_radius} exceeds the budget {MAX_CONJ_RADIUS}"
        )
    if n_letters is None:
        n_letters = _kernel_letters(ctx)
    if conjugator_letters is None:
        conjugator_letters = n_letters
    target = free_reduce(target)
    for v in _cyclic_class_words(n_letters, radius):
        if are_conjugate_bounded(ctx, v, target, conj_radius, conjugator_letters=conjugator_letters):
            return len(v), v
    return None


def n_norm_bfs_oracle(ctx, target, radius, conj_radius, **kwargs):
    """Optional exact-by-exhaustion norm value; see n_norm_bfs_oracle_witness."""
    hit = n_norm_bfs_oracle_witness(ctx, target, radius, conj_radius, **kwargs)
    return None if hit is None else hit[0]


def _kernel_letters(ctx):
    """Default N-alphabet: the last two generators of the presentation (x, y)."""
    n = len(ctx.alphabet)
    if n < 2:
        raise AlphabetError("presentation has no kernel generator pair")
    return [n - 1, n, -(n - 1), -n]
