"""Rips construction: from a presentation of Q to a presentation of G.

For each Q-generator s (in alphabet order) the scheme emits conjugation
relations ``s x s^-1 = RHS`` and ``s^-1 x s = RHS``, and in complete mode also
the pair for the second kernel generator y; then one relation ``rho = RHS``
per Q-relator.  The right-hand side of the j-th relation (1-based, emission
order) is

    x y^(jk) x y^(jk+1) ... x y^((j+1)k - 1)

so relation j consumes the exponent block [jk, (j+1)k), has exactly k
occurrences of x, and has length k + j*k^2 + k(k-1)/2.

Paper mode emits exactly the six-relation layout for a two-generator,
two-relator Q; it carries no rules for conjugating y, so only complete mode
supports letter-by-letter rewriting of arbitrary kernel words.

The kernel N is generated by x and y; conjugation by a word q over the
Q-generators acts on N-words by iterated rule substitution, which realizes
the outer action of q on N.
"""

from .errors import AlphabetError, CoverageError, ParameterError, ResourceBudgetError
from .presentations import Presentation
from .words import free_reduce, invert, power

PAPER = "paper"
COMPLETE = "complete"

DEFAULT_MATERIALIZE_BUDGET = 2_000_000  # letters


class RipsScheme:
    """Parameters of the relator scheme: exponent base k and emission mode."""

    def __init__(self, k, mode=COMPLETE, n_generators=("x", "y")):
        if k < 1:
            raise ParameterError(f"k must be >= 1, got {k}")
        if mode not in (PAPER, COMPLETE):
            raise ParameterError(f"mode must be '{PAPER}' or '{COMPLETE}', got {mode!r}")
        if len(n_generators) != 2:
            raise ParameterError("the kernel uses exactly two generators")
        self.k = k
        self.mode = mode
        self.n_generators = tuple(n_generators)

    def __repr__(self):
        return f"RipsScheme(k={self.k}, mode={self.mode!r})"


class RipsOutput:
    """Presentation of G, conjugation rules, and block bookkeeping.

    ``rules`` maps (signed Q-letter, positive N-letter) to the stored RHS.
    ``block_table`` lists (relation id, kind, lhs, block) in emission order.
    Letters of Q-words keep their values inside G-words because the G alphabet
    extends the Q alphabet.
    """

    def __init__(self, q_presentation, scheme):
        self.q_presentation = q_presentation
        self.scheme = scheme
        q_alpha = q_presentation.alphabet
        for name in scheme.n_generators:
            if name in q_alpha.names:
                raise AlphabetError(f"Q already uses generator name {name!r}")
        self.g_alphabet = q_alpha.extend(scheme.n_generators)
        self.x = self.g_alphabet.letter(scheme.n_generators[0])
        self.y = self.g_alphabet.letter(scheme.n_generators[1])

        k = scheme.k
        self.rules = {}
        self.block_table = []
        self.relations = []  # (lhs, rhs) pairs over the G alphabet

        def emit(kind, lhs, rule_key=None):
            j = len(self.relations) + 1
            rhs = self._block_rhs(j)
            self.relations.append((lhs, rhs))
            self.block_table.append((j, kind, lhs, (j * k, (j + 1) * k)))
            if rule_key is not None:
                self.rules[rule_key] = rhs

        for name in q_alpha.names:
            s = self.g_alphabet.letter(name)
            emit("conjugation", (s, self.x, -s), rule_key=(s, self.x))
            emit("conjugation", (-s, self.x, s), rule_key=(-s, self.x))
            if scheme.mode == COMPLETE:
                emit("conjugation", (s, self.y, -s), rule_key=(s, self.y))
                emit("conjugation", (-s, self.y, s), rule_key=(-s, self.y))
        for rel in q_presentation.relators:
            emit("relator", rel)

        self.g_presentation = Presentation(
            self.g_alphabet,
            [lhs + invert(rhs) for lhs, rhs in self.relations],
        )

    def _block_rhs(self, j):
        k = self.scheme.k
        letters = []
        for e in range(j * k, (j + 1) * k):
            letters.append(self.x)
            letters.extend([self.y] * e)
        return tuple(letters)

    def is_n_word(self, word):
        return all(abs(ell) in (self.x, self.y) for ell in word)

    def rule_length(self, s, base):
        return len(self.rules[(s, base)])

    def max_rule_length(self, s=None):
        """Longest RHS among all rules, or among the rules for letter s."""
        keys = self.rules if s is None else [key for key in self.rules if key[0] == s]
        return max(len(self.rules[key]) for key in keys)

    def sidecar_dict(self):
        a = self.g_alphabet
        return {
            "k": self.scheme.k,
            "mode": self.scheme.mode,
            "alphabet": list(a.names),
            "n_generators": list(self.scheme.n_generators),
            "rules": [
                {
                    "generator": a.name(s),
                    "sign": 1 if s > 0 else -1,
                    "letter": a.name(base),
                    "rhs": a.format_word(rhs),
                }
                for (s, base), rhs in self.rules.items()
            ],
            "block_table": [
                {
                    "relation": j,
                    "kind": kind,
                    "lhs": a.format_word(lhs),
                    "block": [lo, hi],
                }
                for j, kind, lhs, (lo, hi) in self.block_table
            ],
        }


def rips_presentation(q_presentation, scheme):
    """Run the construction; see the module docstring for the emission order."""
    return RipsOutput(q_presentation, scheme)


def conjugation_rule(out, s, ell):
    """Image of the N-letter ``ell`` under conjugation by the Q-letter ``s``.

    Returns the stored RHS when ``ell`` is positive and its inverse when
    negative; raises CoverageError for pairs the mode does not emit.
    """
    key = (s, abs(ell))
    rhs = out.rules.get(key)
    if rhs is None:
        a = out.g_alphabet
        raise CoverageError(
            f"no rule for conjugating {a.format_word((ell,))} by "
            f"{a.format_word((s,))} in {out.scheme.mode} mode"
        )
    return rhs if ell > 0 else invert(rhs)


class OuterAuto:
    """The outer automorphism of N induced by a word q over the Q-generators."""

    def __init__(self, rips, q_word):
        q_word = free_reduce(tuple(q_word))
        n_gens = len(rips.q_presentation.alphabet)
        if any(abs(ell) > n_gens for ell in q_word):
            raise AlphabetError("q_word must use Q-generators only")
        self.rips = rips
        self.q_word = q_word

    def power(self, n):
        return OuterAuto(self.rips, power(self.q_word, n))

    def inverse(self):
        return OuterAuto(self.rips, invert(self.q_word))

    def is_identity_word(self):
        return not self.q_word

    def __repr__(self):
        return f"OuterAuto({self.rips.q_presentation.alphabet.format_word(self.q_word) or '1'})"


def apply_outer(phi, word, budget=DEFAULT_MATERIALIZE_BUDGET):
    """Materialized image of an N-word under conjugation by phi.q_word.

    Substitutes letter by letter, conjugating by the last letter of q_word
    first, freely reducing after each pass.  The result equals
    lift(q_word) * word * lift(q_word)^-1 in G and stays inside {x, y}.
    Images grow multiplicatively per pass; beyond ``budget`` letters a
    ResourceBudgetError points the caller at apply_outer_counts.
    """
    out = phi.rips
    if not out.is_n_word(word):
        raise AlphabetError("apply_outer expects a word over the kernel generators")
    cur = free_reduce(word)
    for s in reversed(phi.q_word):
        nxt = []
        for ell in cur:
            for z in conjugation_rule(out, s, ell):
                if nxt and nxt[-1] == -z:
                    nxt.pop()
                else:
                    nxt.append(z)
            if len(nxt) > budget:
                raise ResourceBudgetError(
                    f"materialized image exceeds {budget} letters; "
                    "use apply_outer_counts (counts mode) instead"
                )
        cur = tuple(nxt)
    return cur


def letter_counts(out, word):
    """Counts (x, x^-1, y, y^-1) of an N-word."""
    cx = cX = cy = cY = 0
    for ell in word:
        if ell == out.x:
            cx += 1
        elif ell == -out.x:
            cX += 1
        elif ell == out.y:
            cy += 1
        elif ell == -out.y:
            cY += 1
        else:
            raise AlphabetError("letter outside the kernel alphabet")
    return (cx, cX, cy, cY)


def count_matrix(out, s):
    """4x4 substitution-count matrix of conjugation by the signed Q-letter s.

    Row/column order is (x, x^-1, y, y^-1); column ell holds the letter counts
    of rule(s, ell).  Entries are nonnegative, so applying the matrix to the
    counts of a word bounds the counts of its substituted image from above
    (free cancellation only shrinks).
    """
    cols = []
    for base in (out.x, out.y):
        rhs = conjugation_rule(out, s, base)
        nx, nX, ny, nY = letter_counts(out, rhs)
        cols.append((nx, nX, ny, nY))
        cols.append((nX, nx, nY, ny))  # the inverse letter's image is rhs^-1
    return tuple(tuple(cols[c][r] for c in range(4)) for r in range(4))


def mat_vec(m, v):
    return tuple(sum(m[r][c] * v[c] for c in range(4)) for r in range(4))


def mat_mul(a, b):
    return tuple(
        tuple(sum(a[r][i] * b[i][c] for i in range(4)) for c in range(4)) for r in range(4)
    )


def apply_outer_counts(phi, counts):
    """Letter-count image under phi: exact for cancellation-free substitution,
    an upper bound in general.  Counts are arbitrary-precision integers."""
    if len(counts) != 4 or any(c < 0 for c in counts):
        raise ValueError("counts must be four nonnegative integers")
    v = tuple(counts)
    out = phi.rips
    for s in reversed(phi.q_word):
        v = mat_vec(count_matrix(out, s), v)
    return v
