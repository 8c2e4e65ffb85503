"""Finite presentations, symmetrized relator sets, pieces, and C'(lambda).

Grammar for presentation source (UTF-8 text, ``#`` starts a comment, ``;``
separates logical lines):

    gens a b
    rel [a,[a,b]]
    rel [b,[a,b]]

The ``gens`` line is optional; when absent, generators are inferred from the
relators in order of first appearance.  Relators are stored freely and
cyclically reduced in canonical rotation; a relator reducing to the empty
word, or duplicating another relator up to rotation and inversion, is
rejected at parse time.

A *piece* is a word that occurs as a prefix of two distinct members of the
symmetrized set (all rotations of all relators and their inverses).  The
metric condition C'(lambda) holds when every piece contained in a relator r
is strictly shorter than lambda * |r|.
"""

from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    AlphabetError,
    DegenerateRelatorError,
    DuplicateRelatorError,
    PresentationSyntaxError,
)
from .words import (
    Alphabet,
    canonical_rotation,
    cyclic_reduce,
    free_reduce,
    invert,
)


class Presentation:
    """A finite presentation <alphabet | relators>.

    Relators are canonical cyclic words (tuples), pairwise distinct up to
    rotation and inversion, in source order.
    """

    def __init__(self, alphabet, relators):
        self.alphabet = alphabet
        canon = []
        seen = {}
        for rid, rel in enumerate(relators):
            rel = tuple(rel)
            if not alphabet.contains_word(rel):
                raise AlphabetError(f"relator {rid} uses letters outside the alphabet")
            if not rel:
                raise DegenerateRelatorError(f"relator {rid} is empty")
            core, _ = cyclic_reduce(free_reduce(rel))
            if not core:
                raise DegenerateRelatorError(f"relator {rid} reduces to the empty word")
            c = canonical_rotation(core)
            c_inv = canonical_rotation(invert(core))
            if c in seen or c_inv in seen:
                raise DuplicateRelatorError(
                    f"relator {rid} duplicates relator {seen.get(c, seen.get(c_inv))} "
                    "up to rotation and inversion"
                )
            seen[c] = rid
            seen[c_inv] = rid
            canon.append(c)
        self.relators = tuple(canon)

    def total_relator_length(self):
        return sum(len(r) for r in self.relators)

    def format(self):
        """Presentation source text that parses back to an equal presentation."""
        lines = ["gens " + " ".join(self.alphabet.names)]
        lines += ["rel " + self.alphabet.format_word(r) for r in self.relators]
        return "\n".join(lines) + "\n"

    def __repr__(self):
        return f"<Presentation {list(self.alphabet.names)} | {len(self.relators)} relators>"

    def __eq__(self, other):
        return (
            isinstance(other, Presentation)
            and self.alphabet == other.alphabet
            and self.relators == other.relators
        )


def parse_presentation(text):
    """Parse presentation source; see the module docstring for the grammar."""
    gens = None
    relator_texts = []
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0]
        for segment in line.split(";"):
            tokens = segment.split()
            if not tokens:
                continue
            head = tokens[0]
            if head == "gens":
                if gens is not None:
                    raise PresentationSyntaxError("second 'gens' line", line=lineno)
                if relator_texts:
                    raise PresentationSyntaxError("'gens' must precede relators", line=lineno)
                gens = tokens[1:]
            elif head == "rel":
                body = segment.split(maxsplit=1)
                relator_texts.append((body[1] if len(body) > 1 else "", lineno))
            else:
                raise PresentationSyntaxError(f"unknown directive {head!r}", line=lineno)

    if gens is None:
        gens = _infer_generators(relator_texts)
    alphabet = Alphabet(gens)

    relators = []
    for body, lineno in relator_texts:
        try:
            raw = alphabet.parse_word_raw(body)
        except (AlphabetError, PresentationSyntaxError) as exc:
            raise PresentationSyntaxError(str(exc), line=lineno) from exc
        word = free_reduce(raw)
        if not word:
            raise DegenerateRelatorError("relator reduces to the empty word", line=lineno)
        relators.append(word)
    try:
        return Presentation(alphabet, relators)
    except DuplicateRelatorError as exc:
        raise DuplicateRelatorError(str(exc)) from None


def _infer_generators(relator_texts):
    """Generator names in order of first appearance across relator bodies."""
    names = []
    for body, _ in relator_texts:
        for token, _col in _word_tokens(body):
            name = token.partition("^")[0]
            if name and name not in names:
                names.append(name)
    return names


def _word_tokens(body):
    from .words import _tokenize

    return [(t, c) for t, c in _tokenize(body) if t not in "[],"]


class SymmetrizedSet:
    """All rotations of all relators and relator inverses, deduplicated.

    ``members`` is in insertion order (relator order, rotations of r then of
    r^-1, offset order).  ``sources[i]`` lists the relator ids whose rotation
    set contains member i.  The lexicographically sorted member array doubles
    as the prefix-lookup index: members sharing a prefix form a contiguous
    sorted range, and the longest common prefix of a member with any other
    member is attained at a sorted neighbor.
    """

    def __init__(self, presentation):
        self.presentation = presentation
        members = []
        sources = []
        index_of = {}
        for rid, rel in enumerate(presentation.relators):
            for base in (rel, invert(rel)):
                for i in range(len(base)):
                    rot = base[i:] + base[:i]
                    at = index_of.get(rot)
                    if at is None:
                        index_of[rot] = len(members)
                        members.append(rot)
                        sources.append([rid])
                    elif sources[at][-1] != rid:
                        sources[at].append(rid)
        self.members = members
        self.sources = sources
        self.index_of = index_of
        order = sorted(range(len(members)), key=lambda i: members[i])
        self.sorted_ids = order
        self.sorted_members = [members[i] for i in order]
        self.max_member_length = max((len(m) for m in members), default=0)

    def __len__(self):
        return len(self.members)

    def __contains__(self, word):
        return tuple(word) in self.index_of


def symmetrize(presentation):
    return SymmetrizedSet(presentation)


@dataclass
class SCReport:
    """Outcome of a C'(lambda) check."""

    lambda_required: Fraction
    max_piece_per_relator: list  # (relator id, longest piece length, relator length)
    verdict: str  # "pass" | "fail"
    witness: tuple | None  # the failing piece, if any

    def passed(self):
        return self.verdict == "pass"

    def to_json_dict(self, alphabet=None):
        witness = None
        if self.witness is not None:
            witness = alphabet.format_word(self.witness) if alphabet else list(self.witness)
        return {
            "lambda_required": f"{self.lambda_required.numerator}/{self.lambda_required.denominator}",
            "max_piece_per_relator": [
                {"relator": rid, "longest_piece": piece, "relator_length": length}
                for rid, piece, length in self.max_piece_per_relator
            ],
            "verdict": self.verdict,
            "witness": witness,
        }


def _lcp(u, v):
    n = min(len(u), len(v))
    i = 0
    while i < n and u[i] == v[i]:
        i += 1
    return i


def member_longest_pieces(sym):
    """Per member, the longest piece that is a prefix of it (fast path).

    Sorted-neighbor scan: in the lexicographic member array the longest common
    prefix with any other member is realized by an adjacent entry.
    """
    longest = [0] * len(sym.members)
    arr = sym.sorted_members
    ids = sym.sorted_ids
    prev = 0
    for pos in range(len(arr)):
        nxt = _lcp(arr[pos], arr[pos + 1]) if pos + 1 < len(arr) else 0
        longest[ids[pos]] = max(prev, nxt)
        prev = nxt
    return longest


def member_longest_pieces_naive(sym):
    """Reference oracle: all-pairs longest-common-prefix scan, O(T^2)."""
    members = sym.members
    count = len(members)
    longest = [0] * count
    for i in range(count):
        mi = members[i]
        first = mi[0]
        ni = len(mi)
        best = longest[i]
        for j in range(i + 1, count):
            mj = members[j]
            if mj[0] != first:
                continue
            n = ni if ni < len(mj) else len(mj)
            l = 1
            while l < n and mi[l] == mj[l]:
                l += 1
            if l > best:
                best = l
            if l > longest[j]:
                longest[j] = l
        longest[i] = best
    return longest


def check_small_cancellation(presentation, lam=Fraction(1, 6), method="fast", sym=None):
    """C'(lambda) report for a presentation; ``method`` picks fast or naive scan.

    Vacuous pass (empty table) when there are no relators.  The condition is
    strict: every piece inside relator r must satisfy |piece| < lambda * |r|.
    """
    lam = Fraction(lam)
    if not 0 < lam < 1:
        raise ValueError(f"lambda must be in (0,1), got {lam}")
    if not presentation.relators:
        return SCReport(lam, [], "pass", None)
    if sym is None:
        sym = symmetrize(presentation)
    if method == "fast":
        longest = member_longest_pieces(sym)
    elif method == "naive":
        longest = member_longest_pieces_naive(sym)
    else:
        raise ValueError(f"unknown method {method!r}")

    best = {}  # rid -> (piece length, member id)
    for mid, piece in enumerate(longest):
        for rid in sym.sources[mid]:
            if rid not in best or piece > best[rid][0]:
                best[rid] = (piece, mid)
    table = []
    verdict = "pass"
    witness = None
    for rid, rel in enumerate(presentation.relators):
        piece, mid = best[rid]
        table.append((rid, piece, len(rel)))
        failing = piece * lam.denominator >= lam.numerator * len(rel)
        if failing and witness is None:
            verdict = "fail"
            witness = sym.members[mid][:piece]
    return SCReport(lam, table, verdict, witness)
