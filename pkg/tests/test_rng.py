import numpy as np
import pytest

from qchsh.rng import RngState, random_bits, splitmix64, stream_key, uniforms

MASK = (1 << 64) - 1


def splitmix_ref(x):
    z = (x + 0x9E3779B97F4A7C15) & MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
    return z ^ (z >> 31)


def uniform_ref(seed, stream, counter):
    key = splitmix_ref(splitmix_ref(seed) ^ ((stream * 0xD1B54A32D192ED03) & MASK))
    bits = splitmix_ref(key ^ splitmix_ref(counter))
    return (bits >> 11) * 2.0**-53


def test_splitmix_known_value():
    # first output of the reference generator seeded with 0
    assert int(splitmix64(0)[0]) == 0xE220A8397B1DCDAF


@pytest.mark.parametrize("x", [0, 1, 12345, 2**63, MASK])
def test_splitmix_matches_reference(x):
    assert int(splitmix64(np.uint64(x))[0]) == splitmix_ref(x)


@pytest.mark.parametrize("seed,stream", [(0, 0), (7, 1), (2**64 - 1, 2), (123456789, 5)])
def test_uniforms_match_reference(seed, stream):
    counters = [0, 1, 2, 1000, 2**40]
    got = uniforms(seed, stream, counters)
    assert got.tolist() == [uniform_ref(seed, stream, c) for c in counters]
    assert int(stream_key(seed, stream)) == splitmix_ref(splitmix_ref(seed) ^ ((stream * 0xD1B54A32D192ED03) & MASK))
    assert int(random_bits(seed, stream, [3])[0]) >> 11 == int(uniform_ref(seed, stream, 3) * 2**53)


def test_frozen_values():
    # fixed across versions; changing the construction changes every seeded result
    assert uniforms(7, 0, [0, 1, 2]).tolist() == [uniform_ref(7, 0, c) for c in range(3)]
    assert 0.0 <= uniforms(7, 0, [0])[0] < 1.0


def test_order_independent():
    c = np.arange(1000, dtype=np.uint64)
    perm = np.random.default_rng(0).permutation(1000)
    np.testing.assert_array_equal(uniforms(3, 1, c)[perm], uniforms(3, 1, c[perm]))


def test_streams_differ():
    c = np.arange(100)
    assert not np.array_equal(uniforms(3, 0, c), uniforms(3, 1, c))
    assert not np.array_equal(uniforms(3, 0, c), uniforms(4, 0, c))


def test_roughly_uniform():
    u = uniforms(1, 0, np.arange(200_000))
    assert np.all((u >= 0) & (u < 1))
    assert abs(u.mean() - 0.5) < 0.005
    hist, _ = np.histogram(u, bins=10, range=(0, 1))
    assert np.all(np.abs(hist - 20_000) < 800)


def test_state_is_immutable_and_advances():
    s = RngState(42, 2)
    u1, s1 = s.next_uniform()
    u2, _ = s.next_uniform()
    assert u1 == u2 and s.counter == 0 and s1.counter == 1
    assert u1 == uniform_ref(42, 2, 0)
