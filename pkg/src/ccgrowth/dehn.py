"""Dehn's algorithm over a symmetrized C'(1/6) presentation.

A *move* replaces a subword u that is a prefix of a symmetrized member r with
len(u) >= floor(len(r)/2) + 1 (strictly more than half) by the inverse of the
complementary suffix, which is strictly shorter, then freely reduces.  Moves
rewrite by a relator, so they never change the image in G; reaching the empty
word is therefore a proof of triviality over any presentation.  The converse
(a word that admits no move is non-trivial) is Greendlinger's lemma and needs
the C'(1/6) certificate, which is why the decision procedures require
``sc_verified`` while the reduction operations work on any context.

Move selection is deterministic: leftmost position, then longest matched
prefix, then lowest member insertion index.
"""

from bisect import bisect_left
from fractions import Fraction

from .errors import ParameterError, ResourceBudgetError, UnsupportedContextError
from .presentations import check_small_cancellation, symmetrize
from .words import (
    canonical_rotation,
    cyclic_reduce,
    free_reduce,
    invert,
    letter_key,
)

_SENTINEL = 1 << 30  # larger than any letter value

MAX_CONJ_RADIUS = 8
DEFAULT_CONJ_CANDIDATE_BUDGET = 200_000


class DehnContext:
    """Immutable bundle: presentation, symmetrized set, match index, certificate."""

    def __init__(self, presentation, lam=Fraction(1, 6), sym=None, sc_report=None):
        self.presentation = presentation
        self.symmetrized = sym if sym is not None else symmetrize(presentation)
        if sc_report is None:
            sc_report = check_small_cancellation(presentation, lam, sym=self.symmetrized)
        self.sc_report = sc_report
        self.sc_verified = sc_report.passed() and sc_report.lambda_required <= Fraction(1, 6)

        members = self.symmetrized.members
        self.max_member_length = self.symmetrized.max_member_length
        # members grouped by length, each group sorted, with insertion indices
        groups = {}
        for mid, m in enumerate(members):
            groups.setdefault(len(m), []).append((m, mid))
        self.length_classes = []  # (half_threshold, L, sorted words, insertion ids)
        for L in sorted(groups):
            group = sorted(groups[L])
            self.length_classes.append(
                (L // 2 + 1, L, [m for m, _ in group], [mid for _, mid in group])
            )
        self.half_thresholds = {L: h for h, L, _, _ in self.length_classes}
        self.min_threshold = min((h for h, _, _, _ in self.length_classes), default=0)
        # cheap first-pass filter: the c-prefixes of all members, c <= min threshold
        self.prefilter_len = min(8, self.min_threshold) if members else 0
        c = self.prefilter_len
        self.prefix_set = {m[:c] for m in members} if members else set()
        self.sorted_members = self.symmetrized.sorted_members

    @property
    def alphabet(self):
        return self.presentation.alphabet

    def require_certificate(self, what):
        if not self.sc_verified:
            raise UnsupportedContextError(
                f"{what} needs a C'(1/6) certificate and this presentation has none"
            )


def _lcp(a, b):
    """Longest common prefix length; galloping block compares keep long
    matches at C speed and short ones cheap."""
    n = min(len(a), len(b))
    i = 0
    block = 8
    while i < n:
        j = min(i + block, n)
        if a[i:j] == b[i:j]:
            i = j
            block *= 2
            continue
        while i < n and a[i] == b[i]:
            i += 1
        return i
    return i


def _resolve(ctx, w, p):
    """Best move at position p: (matched length t, member) or None."""
    window = tuple(w[p : p + ctx.max_member_length])
    arr = ctx.sorted_members
    i = bisect_left(arr, window)
    t_max = 0
    if i < len(arr):
        t_max = _lcp(window, arr[i])
    if i > 0:
        t = _lcp(window, arr[i - 1])
        if t > t_max:
            t_max = t
    if t_max < ctx.min_threshold:
        return None

    best_t = 0
    best_classes = []
    for h, L, class_arr, class_ids in ctx.length_classes:
        if h > t_max:
            continue
        prefix = window[:h]
        lo = bisect_left(class_arr, prefix)
        hi = bisect_left(class_arr, prefix[:-1] + (prefix[-1] + 1,), lo)
        if lo == hi:
            continue
        j = bisect_left(class_arr, window, lo, hi)
        m = 0
        if j < hi:
            m = _lcp(window, class_arr[j])
        if j > lo:
            m2 = _lcp(window, class_arr[j - 1])
            if m2 > m:
                m = m2
        t = min(m, L)
        if t > best_t:
            best_t = t
            best_classes = [(L, class_arr, class_ids, lo, hi)]
        elif t == best_t:
            best_classes.append((L, class_arr, class_ids, lo, hi))
    if not best_t:
        return None

    # lowest insertion index among members matching the winning prefix
    target = window[:best_t]
    best = None
    for L, class_arr, class_ids, lo, hi in best_classes:
        a = bisect_left(class_arr, target, lo, hi)
        b = bisect_left(class_arr, target[:-1] + (target[-1] + 1,), a, hi) if target else hi
        for idx in range(a, b):
            if _lcp(class_arr[idx], target) == best_t:
                if best is None or class_ids[idx] < best[0]:
                    best = (class_ids[idx], class_arr[idx])
    return (best_t, best[1]) if best else None


def _find_move(ctx, w, start):
    """Leftmost valid move at or after ``start``: (pos, t, member) or None."""
    n = len(w)
    c = ctx.prefilter_len
    if not c:
        return None
    limit = n - ctx.min_threshold
    prefix_set = ctx.prefix_set
    p = start
    while p <= limit:
        if tuple(w[p : p + c]) in prefix_set:
            hit = _resolve(ctx, w, p)
            if hit is not None:
                return (p, hit[0], hit[1])
        p += 1
    return None


def _splice(w, pos, t, replacement):
    """w[pos:pos+t] -> replacement with free reduction at both seams.

    Returns (new word list, leftmost modified index)."""
    left = w[:pos]
    right = w[pos + t :]
    mid = list(replacement)
    while left and mid and left[-1] == -mid[0]:
        left.pop()
        mid.pop(0)
    while left and not mid and right and left[-1] == -right[0]:
        left.pop()
        right.pop(0)
    m = len(left)
    out = left
    for x in mid:
        out.append(x)
    while out and right and out[-1] == -right[0]:
        out.pop()
        right.pop(0)
        if len(out) < m:
            m = len(out)
    out += right
    return out, min(m, len(out))


def dehn_reduce(ctx, word):
    """Greedy Dehn reduction; length never increases and the image in G is fixed."""
    w = list(free_reduce(word))
    if not ctx.symmetrized.members:
        return tuple(w)
    back = ctx.max_member_length - 1
    cursor = 0
    while True:
        hit = _find_move(ctx, w, cursor)
        if hit is None:
            return tuple(w)
        pos, t, member = hit
        w, modified = _splice(w, pos, t, invert(member[t:]))
        cursor = max(0, modified - back)


def reduces_to_identity(ctx, word):
    """Sound triviality certificate: True means word = 1 in G, over any context."""
    return dehn_reduce(ctx, word) == ()


def is_trivial(ctx, word):
    """Decide word = 1 in G; requires the C'(1/6) certificate (Greendlinger)."""
    ctx.require_certificate("is_trivial")
    return reduces_to_identity(ctx, word)


def are_equal(ctx, u, v):
    """Decide u = v in G via is_trivial(u v^-1)."""
    ctx.require_certificate("are_equal")
    return reduces_to_identity(ctx, free_reduce(u) + invert(free_reduce(v)))


def proves_equal(ctx, u, v):
    """Sound one-sided equality certificate (no C'(1/6) needed): True means u = v in G."""
    return reduces_to_identity(ctx, free_reduce(u) + invert(free_reduce(v)))


def conjugacy_reduce(ctx, word):
    """Shorten a conjugacy representative: cyclically reduce, then retry Dehn
    reduction on rotations until none shortens.  Returns the canonical rotation
    of the result, a G-conjugate of the input no longer than it.  This is an
    upper-bound heuristic, not a conjugacy geodesic."""
    core, _ = cyclic_reduce(free_reduce(word))
    changed = True
    while changed and core:
        changed = False
        for i in range(len(core)):
            rot = core[i:] + core[:i]
            red, _ = cyclic_reduce(dehn_reduce(ctx, rot))
            if len(red) < len(core):
                core = red
                changed = True
                break
    return canonical_rotation(core)


def _conjugator_words(letters, radius):
    """Freely reduced words of length <= radius over ``letters``, shortest first,
    deterministic order (letter_key order within each length)."""
    letters = sorted(letters, key=letter_key)
    yield ()
    frontier = [()]
    for _ in range(radius):
        nxt = []
        for w in frontier:
            for x in letters:
                if w and w[-1] == -x:
                    continue
                nw = w + (x,)
                nxt.append(nw)
                yield nw
        frontier = nxt


def are_conjugate_bounded(
    ctx,
    u,
    v,
    radius,
    conjugator_letters=None,
    candidate_budget=DEFAULT_CONJ_CANDIDATE_BUDGET,
    certificate_only=False,
):
    """Search for t with |t| <= radius and t u t^-1 = v in G.

    True is always a certificate; False only means no conjugator within the
    radius (never a proof of non-conjugacy).  As a decision aid it requires the
    C'(1/6) certificate unless ``certificate_only`` is set.
    """
    if radius > MAX_CONJ_RADIUS:
        raise ResourceBudgetError(
            f"conjugacy search radius {radius} exceeds the configured budget {MAX_CONJ_RADIUS}"
        )
    if radius < 0:
        raise ParameterError("radius must be >= 0")
    if not certificate_only:
        ctx.require_certificate("are_conjugate_bounded")
    if conjugator_letters is None:
        conjugator_letters = [i + 1 for i in range(len(ctx.alphabet))]
        conjugator_letters += [-x for x in conjugator_letters]
    u = free_reduce(u)
    v = free_reduce(v)
    count = 0
    for t in _conjugator_words(conjugator_letters, radius):
        count += 1
        if count > candidate_budget:
            raise ResourceBudgetError(
                f"conjugacy search exceeded {candidate_budget} candidate conjugators"
            )
        if reduces_to_identity(ctx, t + u + invert(t) + invert(v)):
            return True
    return False
