"""SplitMix64 and Fisher-Yates against independent oracles."""
import numpy as np
import pytest

from amor.permute import Rng, rng_next, shuffle


def numpy_splitmix(seed, count):
    """Independent oracle in numpy uint64 arithmetic (wraps natively)."""
    out = []
    state = np.uint64(seed)
    with np.errstate(over="ignore"):
        for _ in range(count):
            state = state + np.uint64(0x9E3779B97F4A7C15)
            z = state
            z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
            z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
            out.append(int(z ^ (z >> np.uint64(31))))
    return out


def oracle_shuffle(seed, items):
    values = iter(numpy_splitmix(seed, max(len(items) - 1, 0)))
    items = list(items)
    for i in range(len(items) - 1, 0, -1):
        j = next(values) % (i + 1)
        items[i], items[j] = items[j], items[i]
    return items


def test_seed_zero_first_output_is_reference_value():
    # reference SplitMix64 output for seed 0
    assert rng_next(Rng(0)) == 0xE220A8397B1DCDAF


def test_seed_zero_prefix_matches_numpy_oracle():
    rng = Rng(0)
    assert [rng_next(rng) for _ in range(10)] == numpy_splitmix(0, 10)
    assert numpy_splitmix(0, 3) == [0xE220A8397B1DCDAF, 0x6E789E6AA1B965F4, 0x06C45D188009454F]


def test_two_instances_same_prefix():
    a, b = Rng(12345), Rng(12345)
    assert [rng_next(a) for _ in range(10)] == [rng_next(b) for _ in range(10)]


def test_seeds_zero_and_one_differ():
    assert numpy_splitmix(1, 1)[0] == 0x910A2DEC89025CC1
    assert rng_next(Rng(0)) != rng_next(Rng(1))
    assert rng_next(Rng(1)) == 0x910A2DEC89025CC1


@pytest.mark.parametrize("seed", [0, 1, 2**63, 2**64 - 1])
def test_state_wraps_mod_2_64(seed):
    rng = Rng(seed)
    assert [rng_next(rng) for _ in range(5)] == numpy_splitmix(seed, 5)


def test_shuffle_empty_and_single():
    assert shuffle(Rng(7), []) == []
    assert shuffle(Rng(7), ["x"]) == ["x"]


def test_shuffle_seed_one_four_items():
    expected = oracle_shuffle(1, [0, 1, 2, 3])
    assert expected == [2, 0, 3, 1]
    assert shuffle(Rng(1), [0, 1, 2, 3]) == expected


def test_shuffle_consumes_len_minus_one_draws():
    rng = Rng(99)
    shuffle(rng, list(range(6)))
    ref = Rng(99)
    for _ in range(5):
        rng_next(ref)
    assert rng.state == ref.state


@pytest.mark.parametrize("seed", range(20))
def test_shuffle_matches_oracle(seed):
    items = list("abcdefg")
    assert shuffle(Rng(seed), items) == oracle_shuffle(seed, items)
