import random

import pytest
from hypothesis import given, strategies as st

from nfbench.errors import HFSetError, HFSetOverflow, StageTooLarge, SubsetViolation
from nfbench.hfset import (
    EMPTY, HFSet, STAGE_SIZES, ack_decode, ack_encode, big_union, complement_within,
    hf_text, pair, pair_components, parse_hf, pi_star, power_set, rank, singleton,
    singleton_image, unordered_square, ustar_compose, v_stage,
)

A = EMPTY                  # {}
B = HFSet([EMPTY])         # {{}}
C = HFSet([B])             # {{{}}}
AB = HFSet([A, B])         # {{},{{}}}

codes = st.integers(min_value=0, max_value=2**16 - 1)


def naive_decode(n):
    """Bit-by-bit decoding, kept apart from the library's cached version."""
    return frozenset(naive_decode(i) for i in range(n.bit_length()) if n >> i & 1)


def naive_encode(s):
    return sum(2 ** naive_encode(e) for e in s)


def test_encode_examples():
    assert ack_encode(EMPTY) == 0
    assert ack_encode(B) == 1
    assert ack_encode(AB) == 3
    assert parse_hf("{{},{{}}}").code == 3
    assert hf_text(ack_decode(3)) == "{{},{{}}}"


def test_round_trip_range():
    assert all(ack_encode(ack_decode(n)) == n for n in range(10001))


@given(codes)
def test_decode_matches_naive(n):
    assert naive_encode(naive_decode(n)) == n
    s = ack_decode(n)
    assert naive_encode(frozenset(naive_decode(e.code) for e in s)) == n


def test_elements_sorted_and_deduplicated():
    s = HFSet([B, A, B, A])
    assert [e.code for e in s] == [0, 1]
    assert len(s) == 2


def test_text_round_trip_and_whitespace():
    assert parse_hf(" { {} , { {} } } ") == AB
    for n in range(300):
        assert parse_hf(hf_text(ack_decode(n))).code == n


@pytest.mark.parametrize("bad", ["{", "{}}", "{a}", "", "{{},}"])
def test_parse_errors(bad):
    with pytest.raises(HFSetError):
        parse_hf(bad)


def test_stage_sizes_and_ranks():
    assert [len(v_stage(n)) for n in range(6)] == [0, 1, 2, 4, 16, 65536] == list(STAGE_SIZES)
    for n in range(5):
        assert rank(v_stage(n)) == n
        assert len(v_stage(n + 1)) == 2 ** len(v_stage(n))
    assert [e.code for e in v_stage(4)] == list(range(16))


def test_stage_too_large():
    with pytest.raises(StageTooLarge):
        v_stage(6)


def test_overflow_budget():
    big = ack_decode(2**16)  # {V_5-sized code} fits: element code 16
    assert big.code == 2**16
    with pytest.raises(HFSetOverflow):
        ack_decode(1 << (2**16))


def test_set_operations_examples():
    assert big_union(HFSet([singleton(A), pair(A, B)])) == AB
    assert singleton_image(AB) == HFSet([singleton(A), singleton(B)])
    assert complement_within(EMPTY, v_stage(2)) == v_stage(2)
    assert pair(A, A) == singleton(A)
    assert power_set(v_stage(2)) == v_stage(3)


def test_complement_requires_subset():
    with pytest.raises(SubsetViolation):
        complement_within(HFSet([C]), v_stage(2))


def test_unordered_square_examples():
    assert unordered_square(EMPTY) == EMPTY
    assert unordered_square(singleton(A)) == HFSet([singleton(A)])
    assert unordered_square(AB) == HFSet([singleton(A), singleton(B), AB])


def test_pair_components():
    assert pair_components(singleton(B)) == (B, B)
    assert set(pair_components(AB)) == {A, B}
    assert pair_components(EMPTY) is None
    assert pair_components(v_stage(3)) is None


def naive_compose(c, d):
    """Triple loop over candidate components drawn from the pair members."""
    support = {e for p in list(c) + list(d) for e in p}
    out = set()
    for x in support:
        for y in support:
            for z in support:
                if pair(x, y) in c and pair(y, z) in d:
                    out.add(pair(x, z))
    return HFSet(out)


def naive_pi(A_):
    out = []
    for p in A_:
        for x in p:
            for y in p:
                if len(p) in (1, 2) and (x & y) != EMPTY and pair(x, y) == p:
                    out.append(p)
    return HFSet(out)


def test_compose_examples():
    a, b, e = A, B, C
    assert ustar_compose(HFSet([pair(a, b)]), HFSet([pair(b, e)])) == HFSet([pair(a, e)])
    assert ustar_compose(EMPTY, HFSet([pair(a, b)])) == EMPTY
    assert ustar_compose(HFSet([singleton(a)]), HFSet([singleton(a)])) == HFSet([singleton(a)])


def test_compose_ignores_non_pairs():
    junk = v_stage(3)  # four elements, not a pair
    assert ustar_compose(HFSet([junk, pair(A, B)]), HFSet([pair(B, C)])) == HFSet([pair(A, C)])


def test_pi_examples():
    a, b = B, AB
    assert pi_star(HFSet([pair(a, b)])) == HFSet([pair(a, b)])
    assert pi_star(HFSet([pair(B, C)])) == EMPTY
    assert pi_star(EMPTY) == EMPTY


def random_pair_set(rng, pool, max_pairs=6):
    return HFSet(pair(rng.choice(pool), rng.choice(pool)) for _ in range(rng.randrange(max_pairs + 1)))


def test_compose_and_pi_against_oracles():
    rng = random.Random(7)
    pool = list(v_stage(4))
    for _ in range(200):
        c, d = random_pair_set(rng, pool), random_pair_set(rng, pool)
        assert ustar_compose(c, d) == naive_compose(c, d)
        assert pi_star(c) == naive_pi(c)


@given(codes)
def test_union_of_singletons_is_identity(n):
    x = ack_decode(n)
    assert big_union(singleton_image(x)) == x


@given(codes)
def test_pi_is_subset(n):
    x = ack_decode(n)
    assert pi_star(x).issubset(x)


@given(codes, codes)
def test_boolean_ops_match_bits(m, n):
    x, y = ack_decode(m), ack_decode(n)
    assert (x | y).code == m | n
    assert (x & y).code == m & n
    assert (x - y).code == m & ~n
    assert x.issubset(y) == (m & ~n == 0)
