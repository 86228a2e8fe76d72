import random
from collections import Counter
from fractions import Fraction

import numpy as np
import pytest

from coinsim import gf2
from coinsim.hypergraph import Hypergraph
from coinsim.simulate import (
    EXHAUSTIVE_CAP,
    LCG_INCREMENT,
    LCG_MULTIPLIER,
    CoinAssignment,
    DomainMismatch,
    SingularSystem,
    TooLarge,
    build_decoder,
    decode,
    lcg64,
    parity_matrix,
    run,
    sampled_bits,
    verify_zero_error,
)
from coinsim.strategy import Broadcast, CoinSymbol, Strategy, synthesize_forehead, synthesize_topological, synthesize_tree
from conftest import OPTIMAL, STRATEGIES


# -- run ----------------------------------------------------------------


def test_star_n3_run():
    s = STRATEGIES["star_n3_k2"]
    a = CoinAssignment.from_mapping(s, {CoinSymbol((1, 3)): 1, CoinSymbol((2, 3)): 0})
    assert run(s, a) == (1,)


def test_all_zero_assignment_gives_blank_board(any_strategy):
    a = CoinAssignment.from_int(any_strategy, 0)
    assert run(any_strategy, a) == (0,) * len(any_strategy.broadcasts)


def test_fig9_single_coin():
    s = STRATEGIES["fig9_cluster"]
    bits = {c: int(c == CoinSymbol((1, 2, 3), 0)) for c in s.coins}
    board = run(s, CoinAssignment.from_mapping(s, bits))
    # first the within-component bit of user 4, then user 1's two cross bits
    assert [b.speaker for b in s.broadcasts] == [4, 1, 1]
    assert board == (0, 1, 0)


def test_run_rejects_foreign_assignment():
    s = STRATEGIES["fig3"]
    with pytest.raises(DomainMismatch):
        run(s, CoinAssignment.from_int(STRATEGIES["fig9_cluster"], 0))
    with pytest.raises(DomainMismatch):
        CoinAssignment.from_mapping(s, {})


def test_assignment_int_round_trip():
    s = STRATEGIES["fig3"]
    for v in range(64):
        assert CoinAssignment.from_int(s, v).to_int() == v


# -- decoders -----------------------------------------------------------


def test_fig3_user1_decoder_shape():
    dec = build_decoder(STRATEGIES["fig3"], 1)
    assert dec.matrix.shape == (6, 6)
    kinds = Counter(src for src, _ in dec.rhs_plan)
    assert kinds == {"coin": 4, "board": 2}
    assert dec.invertible


def test_forehead_3_user2_decoder():
    s = synthesize_forehead(3)
    dec = build_decoder(s, 2)
    assert dec.matrix.shape == (2, 2)
    assert [dec.coins[i] for src, i in dec.rhs_plan if src == "coin"] == [CoinSymbol((1, 2))]
    assert dec.invertible


def test_triangle_tree_user1_decoder():
    s = synthesize_tree(Hypergraph.complete(3, 2))
    dec = build_decoder(s, 1)
    assert dec.matrix.shape == (2, 2)
    assert dec.invertible


def test_identity_decoder_returns_held():
    s = synthesize_tree(Hypergraph(2, 2, ((1, 2),)))
    dec = build_decoder(s, 1)
    held = {CoinSymbol((1, 2)): 1}
    assert decode(dec, held, ()).bits == (1,)


def test_decode_recovers_every_assignment(any_strategy):
    s = any_strategy
    rng = random.Random(5)
    values = range(1 << len(s.coins)) if len(s.coins) <= 8 else [rng.getrandbits(len(s.coins)) for _ in range(64)]
    decoders = {u: build_decoder(s, u) for u in s.graph.vertices}
    for v in values:
        a = CoinAssignment.from_int(s, v)
        board = run(s, a)
        for u, dec in decoders.items():
            assert decode(dec, a.held(u), board) == a


def test_decode_checks_its_inputs():
    s = STRATEGIES["fig3"]
    dec = build_decoder(s, 1)
    with pytest.raises(DomainMismatch):
        decode(dec, {}, (0, 0, 0))


def _drop_one_symbol(s, rng):
    j = rng.randrange(len(s.broadcasts))
    b = s.broadcasts[j]
    if len(b.parity_set) == 1:
        return None
    cut = rng.randrange(len(b.parity_set))
    kept = b.parity_set[:cut] + b.parity_set[cut + 1:]
    broadcasts = s.broadcasts[:j] + (Broadcast(b.speaker, kept),) + s.broadcasts[j + 1:]
    return Strategy(s.graph, s.coins, broadcasts)


def test_dropped_symbol_is_detected():
    s = _drop_one_symbol(STRATEGIES["fig3"], random.Random(0))
    report = verify_zero_error(s)
    assert not report.zero_error
    assert not report.algebraic_certificate


def test_singular_decoder_raises():
    g = Hypergraph(3, 2, ((1, 3), (2, 3)))
    s = Strategy(g, (CoinSymbol((1, 3)), CoinSymbol((2, 3))), ())
    with pytest.raises(SingularSystem):
        decode(build_decoder(s, 1), {CoinSymbol((1, 3)): 0}, ())


def test_certificate_agrees_with_exhaustive_check():
    rng = random.Random(21)
    seen = Counter()
    for name in sorted(STRATEGIES):
        base = STRATEGIES[name]
        if len(base.coins) > 12:
            continue
        for _ in range(6):
            s = _drop_one_symbol(base, rng)
            if s is None:
                continue
            report = verify_zero_error(s)
            assert report.zero_error == report.algebraic_certificate, name
            for u, ok in report.per_user_certificate.items():
                assert ok == (report.per_user_decoded[u] == report.assignments_checked)
            seen[report.zero_error] += 1
    # the corruptions exercise both outcomes
    assert seen[False] > 0


# -- verification -------------------------------------------------------


@pytest.mark.parametrize(
    "name,count,rate",
    [("fig3", 64, Fraction(1, 2)), ("fig9_cluster", 32, Fraction(3, 5)), ("g2_handcrafted", 8, Fraction(2, 3))],
)
def test_reference_verifications(name, count, rate):
    report = verify_zero_error(STRATEGIES[name])
    assert report.zero_error and report.algebraic_certificate
    assert report.assignments_checked == count
    assert report.rate == rate


def test_every_fixture_is_zero_error(any_strategy):
    report = verify_zero_error(any_strategy)
    assert report.zero_error and report.algebraic_certificate
    assert report.assignments_checked == 1 << len(any_strategy.coins)


def test_broadcast_bits_are_uniform(any_strategy):
    # full row rank parity matrix: every blackboard value is equally likely
    s = any_strategy
    parity = parity_matrix(s)
    assert gf2.rank(parity) == len(s.broadcasts)
    if len(s.coins) <= 12:
        boards = Counter(run(s, CoinAssignment.from_int(s, v)) for v in range(1 << len(s.coins)))
        assert len(boards) == 1 << len(s.broadcasts)
        assert len(set(boards.values())) == 1


def test_report_dict_fields():
    d = verify_zero_error(STRATEGIES["fig3"]).to_dict()
    assert d == {
        "zero_error": True,
        "assignments_checked": 64,
        "rate_num": 1,
        "rate_den": 2,
        "bound_num": 1,
        "bound_den": 2,
        "algebraic_certificate": True,
    }


def test_too_large_for_exhaustive():
    s = synthesize_topological(Hypergraph.complete(9, 3))
    assert len(s.coins) == 28 > EXHAUSTIVE_CAP
    with pytest.raises(TooLarge):
        verify_zero_error(s)
    report = verify_zero_error(s, "sampled", samples=200, seed=1)
    assert report.zero_error and report.assignments_checked == 200


# -- sampling -----------------------------------------------------------


def test_lcg_constants():
    gen = lcg64(0)
    first = next(gen)
    assert first == LCG_INCREMENT
    assert next(gen) == (LCG_MULTIPLIER * first + LCG_INCREMENT) % (1 << 64)


def test_sampling_is_seeded():
    a = sampled_bits(10, 50, seed=3)
    assert np.array_equal(a, sampled_bits(10, 50, seed=3))
    assert not np.array_equal(a, sampled_bits(10, 50, seed=4))
    assert a.shape == (10, 50)


def test_sampled_mode_is_reproducible():
    s = OPTIMAL["complete_6_4"]
    r1 = verify_zero_error(s, "sampled", samples=300, seed=9)
    r2 = verify_zero_error(s, "sampled", samples=300, seed=9)
    assert r1 == r2
    assert r1.zero_error and r1.mode == "sampled"
