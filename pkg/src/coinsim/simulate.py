"""Run strategies, decode per user, and certify zero-error decoding.

Zero error is established two ways that must agree: every user's linear
system has full column rank (the algebraic certificate), and decoding
succeeds on every enumerated (or sampled) coin assignment.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Mapping, Sequence

import numpy as np

from coinsim import gf2
from coinsim.gf2 import BitMatrix
from coinsim.strategy import CoinSymbol, Strategy

EXHAUSTIVE_CAP = 24
CHUNK = 1 << 16

# 64-bit LCG (Knuth's MMIX constants) for reproducible sampled runs.
LCG_MULTIPLIER = 6364136223846793005
LCG_INCREMENT = 1442695040888963407
_MASK64 = (1 << 64) - 1


class SimulationError(ValueError):
    code = "SIMULATION_ERROR"


class DomainMismatch(SimulationError):
    code = "DOMAIN_MISMATCH"


class SingularSystem(SimulationError):
    code = "SINGULAR_SYSTEM"


class TooLarge(SimulationError):
    code = "TOO_LARGE"


@dataclass(frozen=True)
class CoinAssignment:
    """One joint realisation of every coin toss, ordered like ``coins``."""

    coins: tuple[CoinSymbol, ...]
    bits: tuple[int, ...]

    def __post_init__(self):
        if len(self.coins) != len(self.bits):
            raise DomainMismatch("one bit per coin required")

    @classmethod
    def from_int(cls, strategy: Strategy, value: int) -> CoinAssignment:
        c = len(strategy.coins)
        return cls(strategy.coins, tuple((value >> i) & 1 for i in range(c)))

    @classmethod
    def from_mapping(cls, strategy: Strategy, bits: Mapping[CoinSymbol, int]) -> CoinAssignment:
        if set(bits) != set(strategy.coins):
            raise DomainMismatch("assignment keys differ from the strategy's coins")
        return cls(strategy.coins, tuple(int(bits[c]) & 1 for c in strategy.coins))

    def to_int(self) -> int:
        return sum(b << i for i, b in enumerate(self.bits))

    def __getitem__(self, symbol: CoinSymbol) -> int:
        return self.bits[self.coins.index(symbol)]

    def held(self, user: int) -> dict[CoinSymbol, int]:
        return {c: b for c, b in zip(self.coins, self.bits) if user in c.edge}


def parity_matrix(strategy: Strategy) -> BitMatrix:
    """Broadcast-by-coin matrix: row ``j`` marks the coins XORed into bit ``j``."""
    index = strategy.coin_index()
    words = [sum(1 << index[s] for s in b.parity_set) for b in strategy.broadcasts]
    return BitMatrix.from_ints(words, len(strategy.coins))


def run(strategy: Strategy, assignment: CoinAssignment) -> tuple[int, ...]:
    """The blackboard contents for one coin assignment."""
    if assignment.coins != strategy.coins:
        raise DomainMismatch("assignment does not match the strategy's coins")
    return parity_matrix(strategy).multiply_vector(assignment.bits)


@dataclass(frozen=True)
class DecoderSystem:
    """User ``user``'s linear system ``matrix @ X = y``.

    ``rhs_plan[r]`` is ``("coin", i)`` when row ``r`` reads held coin ``i``
    or ``("board", j)`` when it reads blackboard bit ``j``.
    """

    user: int
    matrix: BitMatrix
    rhs_plan: tuple[tuple[str, int], ...]
    coins: tuple[CoinSymbol, ...]

    @property
    def invertible(self) -> bool:
        """Full column rank, i.e. ``X`` is determined by ``y``."""
        return gf2.rank(self.matrix) == self.matrix.cols

    def rhs(self, held: Mapping[CoinSymbol, int], blackboard: Sequence[int]) -> tuple[int, ...]:
        return tuple(
            int(held[self.coins[i]]) if src == "coin" else int(blackboard[i])
            for src, i in self.rhs_plan
        )


def build_decoder(strategy: Strategy, user: int) -> DecoderSystem:
    if not 1 <= user <= strategy.n:
        raise ValueError(f"user {user} not in 1..{strategy.n}")
    c = len(strategy.coins)
    words: list[int] = []
    plan: list[tuple[str, int]] = []
    for i in strategy.held_by(user):
        words.append(1 << i)
        plan.append(("coin", i))
    parity = parity_matrix(strategy)
    for j, b in enumerate(strategy.broadcasts):
        if b.speaker != user:
            words.append(parity.data[j])
            plan.append(("board", j))
    return DecoderSystem(user, BitMatrix.from_ints(words, c), tuple(plan), strategy.coins)


def decode(dec: DecoderSystem, held: Mapping[CoinSymbol, int], blackboard: Sequence[int]) -> CoinAssignment:
    """Recover every coin from the user's own coins and the blackboard."""
    own = {dec.coins[i] for src, i in dec.rhs_plan if src == "coin"}
    if set(held) != own:
        raise DomainMismatch(f"user {dec.user} must supply exactly its own coins")
    if not dec.invertible:
        raise SingularSystem(f"user {dec.user}'s system has rank {gf2.rank(dec.matrix)} < {dec.matrix.cols}")
    x = gf2.solve(dec.matrix, dec.rhs(held, blackboard))
    return CoinAssignment(dec.coins, x)


@dataclass
class SimulationReport:
    zero_error: bool
    assignments_checked: int
    rate: Fraction
    bound: Fraction
    algebraic_certificate: bool
    mode: str = "exhaustive"
    per_user_decoded: dict[int, int] = field(default_factory=dict)
    per_user_certificate: dict[int, bool] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "zero_error": self.zero_error,
            "assignments_checked": self.assignments_checked,
            "rate_num": self.rate.numerator,
            "rate_den": self.rate.denominator,
            "bound_num": self.bound.numerator,
            "bound_den": self.bound.denominator,
            "algebraic_certificate": self.algebraic_certificate,
        }

    def to_text(self) -> str:
        yes = {True: "yes", False: "no"}
        lines = [
            f"mode: {self.mode}",
            f"zero_error: {yes[self.zero_error]}",
            f"assignments_checked: {self.assignments_checked}",
            f"rate: {self.rate.numerator}/{self.rate.denominator}",
            f"bound: {self.bound.numerator}/{self.bound.denominator}",
            f"algebraic_certificate: {yes[self.algebraic_certificate]}",
        ]
        for user in sorted(self.per_user_decoded):
            lines.append(
                f"user {user}: decoded {self.per_user_decoded[user]}/{self.assignments_checked}"
                f" certificate {yes[self.per_user_certificate[user]]}"
            )
        return "\n".join(lines) + "\n"


def lcg64(seed: int) -> Iterator[int]:
    state = seed & _MASK64
    while True:
        state = (LCG_MULTIPLIER * state + LCG_INCREMENT) & _MASK64
        yield state


def sampled_bits(num_coins: int, count: int, seed: int) -> np.ndarray:
    """``(num_coins, count)`` bit array; each sample consumes the top 32 bits of successive LCG states."""
    gen = lcg64(seed)
    words_per_sample = max(1, -(-num_coins // 32))
    out = np.zeros((num_coins, count), dtype=np.uint8)
    for s in range(count):
        value = 0
        for w in range(words_per_sample):
            value |= (next(gen) >> 32) << (32 * w)
        for i in range(num_coins):
            out[i, s] = (value >> i) & 1
    return out


def _exhaustive_chunks(num_coins: int) -> Iterator[np.ndarray]:
    total = 1 << num_coins
    shifts = np.arange(num_coins, dtype=np.uint64)[:, None]
    for start in range(0, total, CHUNK):
        values = np.arange(start, min(total, start + CHUNK), dtype=np.uint64)
        yield ((values[None, :] >> shifts) & np.uint64(1)).astype(np.uint8)


def _as_array(m: BitMatrix) -> np.ndarray:
    return m.to_numpy().astype(np.int32)


def verify_zero_error(
    strategy: Strategy, mode: str = "exhaustive", samples: int = 1000, seed: int = 0
) -> SimulationReport:
    """Decode for every user on every (or sampled) coin assignment.

    Each user decodes with the free-variables-zero solution of its system,
    exactly as :func:`decode` would; a rank-deficient user therefore fails
    on some assignment.  Assignments are processed in numpy batches.
    """
    c = len(strategy.coins)
    if mode == "exhaustive":
        if c > EXHAUSTIVE_CAP:
            raise TooLarge(f"{c} coins exceed the exhaustive cap of {EXHAUSTIVE_CAP}; use sampled mode")
        batches: Iterator[np.ndarray] = _exhaustive_chunks(c)
    elif mode == "sampled":
        batches = iter([sampled_bits(c, samples, seed)])
    else:
        raise ValueError(f"unknown mode {mode!r}")

    parity = _as_array(parity_matrix(strategy)).reshape(len(strategy.broadcasts), c)
    users = list(strategy.graph.vertices)
    decoders = {u: build_decoder(strategy, u) for u in users}
    certificate = {u: decoders[u].invertible for u in users}
    maps = {}
    for u, dec in decoders.items():
        p, _ = gf2.solution_map(dec.matrix)
        held = [i for src, i in dec.rhs_plan if src == "coin"]
        board = [j for src, j in dec.rhs_plan if src == "board"]
        maps[u] = (_as_array(p).reshape(c, len(dec.rhs_plan)), held, board)

    decoded = {u: 0 for u in users}
    checked = 0
    for bits in batches:
        blackboard = (parity @ bits.astype(np.int32)) & 1
        for u, (p, held, board) in maps.items():
            y = np.vstack([bits[held].astype(np.int32), blackboard[board]])
            x = (p @ y) & 1
            decoded[u] += int(np.all(x == bits, axis=0).sum())
        checked += bits.shape[1]

    return SimulationReport(
        zero_error=all(decoded[u] == checked for u in users),
        assignments_checked=checked,
        rate=strategy.rate,
        bound=strategy.bound,
        algebraic_certificate=all(certificate.values()),
        mode=mode,
        per_user_decoded=decoded,
        per_user_certificate=certificate,
    )
