"""Brackets on the Lipschitz pseudo-metric of Out(N).

The distance from the identity to an outer automorphism Phi is the log of a
supremum of norm ratios ||Phi(c)|| / ||c|| over all non-trivial conjugacy
classes c of N.  Nothing finite computes that supremum, so this module
reports a bracket:

* the lower part enumerates short classes and takes the best ratio actually
  exhibited (a certified lower bound only when both norms are certified by
  the bounded BFS oracle, otherwise labeled heuristic);
* the upper part sums, over the letters of a geodesic-free representative
  q_word, the log of the longest conjugation rule that letter can apply --
  every letter of any representative expands by at most that factor before
  cancellation, so the sum bounds every ratio.

Both parts use the same substituted representative per class, which keeps
``lower <= upper`` structurally true and pins the identity at exactly zero.
"""

import math
from dataclasses import dataclass

from .errors import CoverageError, ParameterError
from .metrics import (
    _kernel_letters,
    _cyclic_class_words,
    ln_big,
    n_norm_bfs_oracle_witness,
)
from .dehn import are_conjugate_bounded
from .rips import COMPLETE, apply_outer, apply_outer_counts, letter_counts
from .words import cyclic_reduce

DEFAULT_MATERIALIZE_CAP = 200_000
DEFAULT_ORACLE_LEN_CAP = 6


@dataclass
class LipEstimate:
    lower: float
    upper: float
    class_witness: tuple
    radius: int
    certified: bool = False

    def __post_init__(self):
        if self.lower > self.upper + 1e-12:
            raise ValueError("Lipschitz lower bracket exceeded the upper bracket")


def lip_upper(phi):
    """Generator-displacement upper bound: sum over the letters of q_word of
    the log of that letter's longest conjugation rule."""
    if not phi.q_word:
        return 0.0
    if phi.rips.scheme.mode != COMPLETE:
        raise CoverageError("the displacement bound needs complete-mode rules for x and y")
    return sum(math.log(phi.rips.max_rule_length(s)) for s in phi.q_word)


def lip_lower(
    phi,
    radius,
    ctx,
    conj_radius=1,
    oracle_len_cap=DEFAULT_ORACLE_LEN_CAP,
    materialize_cap=DEFAULT_MATERIALIZE_CAP,
):
    """Best exhibited ratio ln(||Phi(c)|| / ||c||) over classes of length <= radius.

    Classes are enumerated as canonical rotations, deduplicated by bounded
    conjugacy within equal-length buckets.  Per class the denominator is the
    bounded-oracle norm witness; the numerator measures the image of that same
    witness (materialized when it fits, count-matrix total otherwise, oracle
    certified when short enough).
    """
    if radius < 1:
        raise ParameterError("class enumeration needs radius >= 1 (no nontrivial classes)")
    kernel = _kernel_letters(ctx)
    classes = []
    for c in _cyclic_class_words(kernel, radius):
        if any(
            len(kept) == len(c)
            and are_conjugate_bounded(ctx, c, kept, conj_radius, conjugator_letters=kernel)
            for kept in classes
        ):
            continue
        classes.append(c)

    best = None  # (value, witness, certified)
    for c in classes:
        hit = n_norm_bfs_oracle_witness(
            ctx, c, min(len(c), radius), conj_radius, conjugator_letters=kernel
        )
        den, rep = hit if hit is not None else (len(c), c)
        num, num_certified, ln_num = _image_norm_upper(
            phi, rep, ctx, conj_radius, oracle_len_cap, materialize_cap, kernel
        )
        if num is None:
            continue
        value = ln_num - math.log(den)
        if best is None or value > best[0]:
            best = (value, c, hit is not None and num_certified)
    if best is None:
        raise ParameterError("no usable class found within the radius")
    return LipEstimate(
        lower=best[0],
        upper=lip_upper(phi),
        class_witness=best[1],
        radius=radius,
        certified=best[2],
    )


def _image_norm_upper(phi, rep, ctx, conj_radius, oracle_len_cap, materialize_cap, kernel):
    """(value, certified, ln value) upper estimate of ||Phi(class of rep)||."""
    try:
        img = apply_outer(phi, rep, budget=materialize_cap)
    except Exception:  # budget or coverage: fall back to counts
        total = sum(apply_outer_counts(phi, letter_counts(phi.rips, rep)))
        return (total, False, ln_big(total)) if total else (None, False, 0.0)
    core, _ = cyclic_reduce(img)
    if not core:
        return None, False, 0.0
    if len(core) <= oracle_len_cap:
        hit = n_norm_bfs_oracle_witness(
            ctx, core, min(len(core), 8), conj_radius, conjugator_letters=kernel
        )
        if hit is not None:
            return hit[0], True, math.log(hit[0])
    return len(core), False, math.log(len(core))
