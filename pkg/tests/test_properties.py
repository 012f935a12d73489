import random
from fractions import Fraction

from hypothesis import given, settings, strategies as st

import properties as P
from blockgen import random_block

seeds = st.integers(0, 2 ** 32 - 1)


def block_and_config(seed):
    rng = random.Random(seed)
    return random_block(rng, max_len=14, max_count=6), P.random_config(rng), rng


@settings(max_examples=2000, deadline=None)
@given(seeds)
def test_selections_never_overlap(seed):
    block, config, _ = block_and_config(seed)
    P.check_non_overlap(block, config)
    P.check_non_overlap(block, P.ALL)


@settings(max_examples=1000, deadline=None)
@given(seeds)
def test_count_conservation(seed):
    block, config, _ = block_and_config(seed)
    P.check_conservation(block, config)


@settings(max_examples=500, deadline=None)
@given(seeds)
def test_no_idioms_ratio_one(seed):
    block, _, _ = block_and_config(seed)
    P.check_none_is_identity(block)


@settings(max_examples=1000, deadline=None)
@given(seeds, st.integers(2, 10 ** 9))
def test_trace_scaling_invariance(seed, k):
    block, config, _ = block_and_config(seed)
    P.check_trace_scaling(block, config, k)


@settings(max_examples=300, deadline=None)
@given(seeds, st.fractions(min_value=Fraction(1, 10 ** 6), max_value=10 ** 6))
def test_table_scaling_invariance(seed, k):
    table = P.random_table(random.Random(seed))
    if k > 0:
        P.check_table_scaling(table, k, "base")


@settings(max_examples=2000, deadline=None)
@given(seeds)
def test_near_miss_soundness(seed):
    block, config, _ = block_and_config(seed)
    P.check_near_miss_soundness(block, config)
    P.check_near_miss_soundness(block, P.ALL)


@settings(max_examples=500, deadline=None)
@given(seeds, st.integers(1, 30))
def test_cdf_monotone(seed, top_n):
    block, _, _ = block_and_config(seed)
    P.check_cdf_shape(block, top_n)
