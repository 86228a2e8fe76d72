"""Exact Shannon entropies by enumerating every coin assignment.

All coins are fair and independent, so each assignment has probability
``2**-c``.  Entropies are computed from outcome multiplicities.  When every
multiplicity is a power of two (always the case for linear messages) the
entropy is returned as an exact :class:`~fractions.Fraction`; otherwise as
a float, and comparisons then allow ``FLOAT_TOL`` bits of slack.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from math import log2
from typing import Callable, Iterable, Sequence

import numpy as np

from coinsim.simulate import TooLarge, parity_matrix, verify_zero_error
from coinsim.strategy import Strategy, handcrafted_nonexample_schemes

ENTROPY_CAP = 20
FLOAT_TOL = 1e-9

Bits = Fraction | float


def _log2_exact(x: int) -> int | None:
    return x.bit_length() - 1 if x > 0 and x & (x - 1) == 0 else None


def entropy_bits(counts: Iterable[int]) -> Bits:
    """Entropy in bits of the distribution proportional to ``counts``."""
    counts = [int(c) for c in counts if c]
    total = sum(counts)
    if total == 0:
        return Fraction(0)
    lt = _log2_exact(total)
    logs = [_log2_exact(c) for c in counts]
    if lt is not None and all(lc is not None for lc in logs):
        return Fraction(sum(c * (lt - lc) for c, lc in zip(counts, logs)), total)
    return sum(c / total * log2(total / c) for c in counts)


def leq(a: Bits, b: Bits) -> bool:
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a <= b
    return float(a) <= float(b) + FLOAT_TOL


def equal(a: Bits, b: Bits) -> bool:
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a == b
    return abs(float(a) - float(b)) <= FLOAT_TOL


def fmt_bits(x: Bits) -> str:
    return f"{float(x):.9f}"


def _column_counts(rows: np.ndarray) -> list[int]:
    """Multiplicities of the distinct columns of a 2-D bit array."""
    if rows.shape[0] == 0:
        return [rows.shape[1]]
    _, counts = np.unique(rows.T, axis=0, return_counts=True)
    return sorted(int(c) for c in counts)


@dataclass(frozen=True)
class EntropyReport:
    h_M: Bits
    h_X: Bits
    h_M_given_Ri: dict[int, Bits]
    lemma42_lhs: Bits
    lemma42_rhs: Bits
    lemma42_holds: bool
    theorem11_satisfied: bool
    theorem11_equality: bool
    rate: Bits
    bound: Fraction
    message_multiplicities: tuple[int, ...]

    def to_text(self) -> str:
        yes = {True: "yes", False: "no"}
        return (
            f"h_M_bits: {fmt_bits(self.h_M)}\n"
            f"h_X_bits: {fmt_bits(self.h_X)}\n"
            f"sum_conditional_bits: {fmt_bits(self.lemma42_lhs)}\n"
            f"lemma42_holds: {yes[self.lemma42_holds]}\n"
            f"theorem11_holds: {yes[self.theorem11_satisfied]}\n"
            f"rate: {_fmt_ratio(self.rate)}\n"
            f"bound: {self.bound.numerator}/{self.bound.denominator}\n"
        )


def _fmt_ratio(x: Bits) -> str:
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    return fmt_bits(x)


def _enumerate(strategy: Strategy) -> tuple[np.ndarray, np.ndarray]:
    c = len(strategy.coins)
    if c > ENTROPY_CAP:
        raise TooLarge(f"{c} coins exceed the entropy enumeration cap of {ENTROPY_CAP}")
    values = np.arange(1 << c, dtype=np.uint32)
    bits = ((values[None, :] >> np.arange(c, dtype=np.uint32)[:, None]) & 1).astype(np.uint8)
    parity = parity_matrix(strategy).to_numpy().astype(np.int32).reshape(len(strategy.broadcasts), c)
    board = ((parity @ bits.astype(np.int32)) & 1).astype(np.uint8)
    return bits, board


def exact_entropies(strategy: Strategy) -> EntropyReport:
    """H(M), H(X), H(M|R_i) for every user, and both lower-bound checks."""
    bits, board = _enumerate(strategy)
    multiplicities = _column_counts(board)
    h_m = entropy_bits(multiplicities)
    h_x = entropy_bits([1] * bits.shape[1])
    cond = {}
    for user in strategy.graph.vertices:
        held = bits[strategy.held_by(user)]
        joint = entropy_bits(_column_counts(np.vstack([held, board])))
        cond[user] = joint - entropy_bits(_column_counts(held))
    lhs = sum(cond.values(), Fraction(0))
    rhs = (strategy.n - 1) * h_m
    rate = h_m / h_x if isinstance(h_m, Fraction) and isinstance(h_x, Fraction) else float(h_m) / float(h_x)
    bound = strategy.bound
    return EntropyReport(
        h_M=h_m,
        h_X=h_x,
        h_M_given_Ri=cond,
        lemma42_lhs=lhs,
        lemma42_rhs=rhs,
        lemma42_holds=leq(lhs, rhs),
        theorem11_satisfied=leq(bound, rate),
        theorem11_equality=equal(rate, bound),
        rate=rate,
        bound=bound,
        message_multiplicities=tuple(multiplicities),
    )


def check_blackboard_inequality(
    message_fn: Callable[[tuple[int, ...]], Sequence[int]],
    groups: Sequence[Sequence[int]],
    num_coins: int,
) -> tuple[Bits, Bits, bool]:
    """Compare ``sum_i H(M|R_i)`` with ``(n-1) H(M)`` for any deterministic message.

    ``groups[i]`` lists the coin indices visible to user ``i``; ``n`` is
    ``len(groups)``.  Returns ``(lhs, rhs, lhs <= rhs)``.
    """
    if num_coins > ENTROPY_CAP:
        raise TooLarge(f"{num_coins} coins exceed the entropy enumeration cap of {ENTROPY_CAP}")
    msg_counts: Counter = Counter()
    joint = [Counter() for _ in groups]
    marg = [Counter() for _ in groups]
    for value in range(1 << num_coins):
        x = tuple((value >> i) & 1 for i in range(num_coins))
        m = tuple(message_fn(x))
        msg_counts[m] += 1
        for gi, group in enumerate(groups):
            r = tuple(x[i] for i in group)
            joint[gi][(r, m)] += 1
            marg[gi][r] += 1
    h_m = entropy_bits(msg_counts.values())
    lhs = sum(
        (entropy_bits(j.values()) - entropy_bits(r.values()) for j, r in zip(joint, marg)),
        Fraction(0),
    )
    rhs = (len(groups) - 1) * h_m
    return lhs, rhs, leq(lhs, rhs)


def xor_counterexample(n: int) -> tuple[Bits, Bits, bool]:
    """``M = R_1 ^ ... ^ R_n`` with ``R_i`` private to user ``i``: violates the blackboard bound."""
    return check_blackboard_inequality(
        lambda x: (sum(x) & 1,), [[i] for i in range(n)], n
    )


def message_distribution(strategy: Strategy) -> Counter:
    """Blackboard value (as a bit tuple) -> number of assignments producing it."""
    _, board = _enumerate(strategy)
    return Counter(tuple(int(b) for b in col) for col in board.T)


def chain_rule_terms(strategy: Strategy) -> list[Bits]:
    """``H(M_j | M_1..M_{j-1})`` for each blackboard bit, from conditional counts."""
    dist = message_distribution(strategy)
    total = sum(dist.values())
    terms: list[Bits] = []
    for j in range(len(strategy.broadcasts)):
        by_prefix: dict[tuple, Counter] = {}
        for m, cnt in dist.items():
            by_prefix.setdefault(m[:j], Counter())[m[j]] += cnt
        term: Bits = Fraction(0)
        for counter in by_prefix.values():
            weight = Fraction(sum(counter.values()), total)
            h = entropy_bits(counter.values())
            term = term + (weight * h if isinstance(h, Fraction) else float(weight) * h)
        terms.append(term)
    return terms


@dataclass(frozen=True)
class NonexampleResult:
    name: str
    h_M: Bits
    h_X: Bits
    rate: Bits
    bound: Fraction
    zero_error: bool

    @property
    def above_bound(self) -> bool:
        return leq(self.bound, self.rate) and not equal(self.rate, self.bound)


def verify_nonexample_bounds() -> tuple[NonexampleResult, NonexampleResult]:
    """Entropies and zero-error status of the two rate-2/3 handcrafted schemes."""
    out = []
    for name, strategy in zip(("G1", "G2"), handcrafted_nonexample_schemes()):
        rep = exact_entropies(strategy)
        sim = verify_zero_error(strategy)
        out.append(NonexampleResult(name, rep.h_M, rep.h_X, rep.rate, rep.bound, sim.zero_error))
    return tuple(out)
