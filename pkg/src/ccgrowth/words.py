"""Free-group word algebra.

Words are tuples of nonzero ints: generator ``i`` (0-based index in the owning
alphabet) appears as ``i + 1``, its inverse as ``-(i + 1)``.  Negation is
inversion.  This interned form is the universal currency of every module;
symbol names live only in :class:`Alphabet`, which is owned by a presentation.

A *cyclic word* is a cyclically reduced word stored in its canonical rotation,
the lexicographically least rotation under the fixed letter order
(generator index, then sign with ``+`` before ``-``); see
:func:`canonical_rotation`.

Text syntax (used by files and the CLI): whitespace-separated tokens ``g``,
``g^-1``, ``g^k`` (``k`` a nonzero integer, expanded to ``|k|`` letters), plus
nestable commutator sugar ``[u,v]`` for ``u v u^-1 v^-1``.  Empty input
denotes the empty word.
"""

from .errors import AlphabetError, WordSyntaxError

Word = tuple  # freely reduced tuple of nonzero ints


def free_reduce(seq):
    """Freely reduce a letter sequence (cancel adjacent g g^-1 pairs)."""
    out = []
    for x in seq:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def is_reduced(seq):
    return all(seq[i] != -seq[i + 1] for i in range(len(seq) - 1))


def invert(word):
    """Inverse word: reversed letters with flipped signs."""
    return tuple(-x for x in reversed(word))


def concat(*parts):
    """Freely reduced product of words."""
    out = []
    for part in parts:
        for x in part:
            if out and out[-1] == -x:
                out.pop()
            else:
                out.append(x)
    return tuple(out)


def power(word, n):
    """Freely reduced n-th power (n may be negative)."""
    if n < 0:
        word, n = invert(word), -n
    return concat(*([word] * n))


def conjugate(t, word):
    """t * word * t^-1, freely reduced."""
    return concat(t, word, invert(t))


def commutator(u, v):
    """[u, v] = u v u^-1 v^-1, freely reduced."""
    return concat(u, v, invert(u), invert(v))


def cyclic_reduce(word):
    """Split ``word = conj * core * conj^-1`` with ``core`` cyclically reduced.

    Returns ``(core, conj)``.  The input must be freely reduced; peeling
    matching end letters is then the unique maximal cyclic reduction.
    """
    lo, hi = 0, len(word)
    while hi - lo >= 2 and word[lo] == -word[hi - 1]:
        lo += 1
        hi -= 1
    return word[lo:hi], word[:lo]


def is_cyclically_reduced(word):
    return is_reduced(word) and (len(word) < 2 or word[0] != -word[-1])


def letter_key(letter):
    """Total order on letters: (generator index, sign) with + before -."""
    return (letter - 1) * 2 if letter > 0 else (-letter - 1) * 2 + 1


def least_rotation(word):
    """Index of the lexicographically least rotation (Booth's algorithm)."""
    n = len(word)
    if n <= 1:
        return 0
    kk = [letter_key(x) for x in word]
    kk += kk
    f = [-1] * len(kk)
    k = 0
    for j in range(1, len(kk)):
        sj = kk[j]
        i = f[j - k - 1]
        while i != -1 and sj != kk[k + i + 1]:
            if sj < kk[k + i + 1]:
                k = j - i - 1
            i = f[i]
        if sj != kk[k + i + 1]:
            if sj < kk[k]:
                k = j
            f[j - k] = -1
        else:
            f[j - k] = i + 1
    return k % n


def canonical_rotation(word):
    """Canonical representative of a cyclically reduced word's rotation class."""
    k = least_rotation(word)
    return word[k:] + word[:k]


def cyclic_word(seq):
    """Freely reduce, cyclically reduce, canonicalize: the CyclicWord of seq."""
    core, _ = cyclic_reduce(free_reduce(seq))
    return canonical_rotation(core)


def rotations(word):
    """All rotations (with repetition dropped) of a word, in offset order."""
    seen = set()
    out = []
    for i in range(max(1, len(word))):
        r = word[i:] + word[:i]
        if r not in seen:
            seen.add(r)
            out.append(r)
    return out


class Alphabet:
    """Ordered generator symbols with word parsing and formatting.

    The alphabet owns the name <-> letter correspondence; all word algebra
    happens on the int tuples.
    """

    def __init__(self, names):
        names = list(names)
        for name in names:
            if not name or any(c in name for c in "[],^#") or any(c.isspace() for c in name):
                raise AlphabetError(f"bad generator name {name!r}")
        if len(set(names)) != len(names):
            raise AlphabetError(f"duplicate generator in {names}")
        self.names = tuple(names)
        self._index = {name: i for i, name in enumerate(names)}

    def __len__(self):
        return len(self.names)

    def __eq__(self, other):
        return isinstance(other, Alphabet) and self.names == other.names

    def __repr__(self):
        return f"Alphabet({list(self.names)})"

    def letter(self, name, sign=1):
        try:
            i = self._index[name]
        except KeyError:
            raise AlphabetError(f"unknown generator {name!r}") from None
        return (i + 1) * (1 if sign >= 0 else -1)

    def name(self, letter):
        return self.names[abs(letter) - 1]

    def contains_word(self, word):
        return all(1 <= abs(x) <= len(self.names) for x in word)

    def extend(self, names):
        return Alphabet(self.names + tuple(names))

    # -- text syntax ------------------------------------------------------

    def parse_word_raw(self, text):
        """Parse word text to an unreduced letter tuple (commutators allowed)."""
        tokens = _tokenize(text)
        letters, pos = self._parse_seq(tokens, 0, stop=None)
        if pos != len(tokens):
            tok, col = tokens[pos]
            raise WordSyntaxError(f"unexpected {tok!r} at col {col}")
        return tuple(letters)

    def parse_word(self, text):
        """Parse and freely reduce word text."""
        return free_reduce(self.parse_word_raw(text))

    def _parse_seq(self, tokens, pos, stop):
        letters = []
        while pos < len(tokens):
            tok, col = tokens[pos]
            if tok == stop or tok in ("]", ","):
                break
            if tok == "[":
                inner_u, pos = self._parse_seq(tokens, pos + 1, stop=",")
                if pos >= len(tokens) or tokens[pos][0] != ",":
                    raise WordSyntaxError(f"expected ',' in commutator at col {col}")
                inner_v, pos = self._parse_seq(tokens, pos + 1, stop="]")
                if pos >= len(tokens) or tokens[pos][0] != "]":
                    raise WordSyntaxError(f"unclosed commutator at col {col}")
                pos += 1
                letters += list(inner_u) + list(inner_v)
                letters += [-x for x in reversed(inner_u)]
                letters += [-x for x in reversed(inner_v)]
            else:
                letters += self._parse_token(tok, col)
                pos += 1
        return letters, pos

    def _parse_token(self, tok, col):
        name, caret, exp_text = tok.partition("^")
        if not name:
            raise WordSyntaxError(f"empty generator token at col {col}")
        exp = 1
        if caret:
            try:
                exp = int(exp_text)
            except ValueError:
                raise WordSyntaxError(f"bad exponent {exp_text!r} at col {col}") from None
            if exp == 0:
                raise WordSyntaxError(f"zero exponent at col {col}")
        try:
            base = self.letter(name)
        except AlphabetError:
            raise AlphabetError(f"unknown generator {name!r} at col {col}") from None
        letter = base if exp > 0 else -base
        return [letter] * abs(exp)

    def format_word(self, word):
        """Exponent-collapsed text for a word; empty word formats to ''."""
        parts = []
        i = 0
        while i < len(word):
            j = i
            while j < len(word) and word[j] == word[i]:
                j += 1
            run, letter = j - i, word[i]
            name = self.name(letter)
            exp = run if letter > 0 else -run
            parts.append(name if exp == 1 else f"{name}^{exp}")
            i = j
        return " ".join(parts)


def _tokenize(text):
    """Split word text into (token, column) pairs; brackets and commas stand alone."""
    tokens = []
    i = 0
    while i < len(text):
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c in "[],":
            tokens.append((c, i))
            i += 1
            continue
        j = i
        while j < len(text) and not text[j].isspace() and text[j] not in "[],":
            j += 1
        tokens.append((text[i:j], i))
        i = j
    return tokens
