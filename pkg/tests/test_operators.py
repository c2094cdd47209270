import numpy as np
import pytest

from hamcube.operators import (
    DoubleCirculantOperator,
    GaussianDenseOperator,
    apply_gaussian,
    build_double_circulant,
    build_gaussian,
    load_operator,
)


def circulant(c):
    n = len(c)
    rows = [[c[(i - j) % n] for j in range(n)] for i in range(n)]
    return np.array(rows)


def dense_product_oracle(op):
    """Five-factor dense product, independent of the FFT pipeline."""
    full = (
        circulant(op.gauss)
        @ np.diag(op.sign_mid)
        @ circulant(op.conv_signs)
        @ np.diag(op.sign_in)
    ) / np.sqrt(op.n)
    return full[op.index_set.indices, :]


def test_constructor_validation():
    with pytest.raises(ValueError):
        build_double_circulant(0, 1)
    with pytest.raises(ValueError):
        build_double_circulant(8, 0)
    with pytest.raises(ValueError):
        build_double_circulant(8, 9)
    with pytest.raises(ValueError):
        build_double_circulant(8, 4, mode="bogus")
    with pytest.raises(ValueError):
        build_double_circulant(8, 4, seed=-1)


def test_seed_determinism():
    a = build_double_circulant(64, 16, seed=5)
    b = build_double_circulant(64, 16, seed=5)
    c = build_double_circulant(64, 16, seed=6)
    x = np.random.default_rng(0).standard_normal(64)
    assert np.array_equal(a.apply(x), b.apply(x))
    assert not np.array_equal(a.apply(x), c.apply(x))
    assert np.array_equal(a.gauss, b.gauss)
    assert not np.array_equal(a.gauss, c.gauss)


def test_component_streams_differ():
    op = build_double_circulant(256, 64, seed=11)
    assert not np.array_equal(op.sign_in, op.conv_signs)
    assert not np.array_equal(op.conv_signs, op.sign_mid)


def test_apply_matches_materialize():
    rng = np.random.default_rng(1)
    for seed in [0, 1]:
        for mode in ["fixed", "selectors"]:
            op = build_double_circulant(64, 16, mode=mode, seed=seed)
            mat = op.materialize()
            for _ in range(25):
                x = rng.standard_normal(64)
                assert np.allclose(op.apply(x), mat @ x, atol=1e-9)


def test_materialize_matches_dense_product():
    for seed in [0, 3]:
        op = build_double_circulant(16, 8, seed=seed)
        assert np.allclose(op.materialize(), dense_product_oracle(op), atol=1e-9)


def test_scaled_view_identity():
    # A x = sqrt(m) * B (s_in o x), exactly, in both index modes.
    rng = np.random.default_rng(2)
    for mode in ["fixed", "selectors"]:
        op = build_double_circulant(128, 32, mode=mode, seed=7)
        x = rng.standard_normal(128)
        lhs = op.apply(x)
        rhs = np.sqrt(op.rows) * op.apply_scaled(op.sign_in * x)
        assert np.allclose(lhs, rhs, atol=1e-10)


def test_l1_view_scaling():
    op = build_double_circulant(64, 16, seed=9)
    x = np.random.default_rng(3).standard_normal(64)
    assert np.allclose(
        op.apply_l1(x), np.sqrt(np.pi / 2) / op.rows * op.apply(x), atol=1e-12
    )


def test_apply_is_linear():
    op = build_double_circulant(64, 16, seed=4)
    rng = np.random.default_rng(4)
    x, y = rng.standard_normal((2, 64))
    lhs = op.apply(3.0 * x - 2.0 * y)
    rhs = 3.0 * op.apply(x) - 2.0 * op.apply(y)
    assert np.allclose(lhs, rhs, atol=1e-10)


def test_batch_apply_matches_rows():
    op = build_double_circulant(32, 8, seed=12)
    batch = np.random.default_rng(5).standard_normal((6, 32))
    stacked = op.apply(batch)
    assert stacked.shape == (6, 8)
    for i in range(6):
        assert np.allclose(stacked[i], op.apply(batch[i]), atol=1e-12)


def test_apply_dimension_mismatch():
    op = build_double_circulant(32, 8, seed=0)
    with pytest.raises(ValueError):
        op.apply(np.ones(16))


def test_fixed_mode_default_indices():
    op = build_double_circulant(32, 8, seed=0)
    assert np.array_equal(op.index_set.indices, np.arange(8))
    assert op.rows == 8


def test_custom_fixed_indices():
    op = build_double_circulant(32, 4, indices=[3, 1, 30, 7])
    assert np.array_equal(op.index_set.indices, [1, 3, 7, 30])
    with pytest.raises(ValueError):
        build_double_circulant(32, 4, indices=[1, 2])
    with pytest.raises(ValueError):
        build_double_circulant(32, 4, indices=[0, 1, 2, 32])
    with pytest.raises(ValueError):
        build_double_circulant(32, 4, mode="selectors", indices=[0, 1, 2, 3])


def test_selector_count_concentrates():
    # Realized |I| should sit within [m/2, 3m/2] at this size for every
    # seed tried; the failure probability decays exponentially in m.
    n, m = 1024, 256
    counts = []
    for seed in range(100):
        op = build_double_circulant(n, m, mode="selectors", seed=seed)
        counts.append(op.rows)
    counts = np.array(counts)
    assert counts.min() >= m / 2
    assert counts.max() <= 3 * m / 2
    assert counts.min() < counts.max()


def test_selector_empty_draw_raises():
    with pytest.raises(RuntimeError):
        build_double_circulant(4, 1, mode="selectors", seed=1)


def test_materialize_guard():
    op = build_double_circulant(8192, 16, seed=0)
    with pytest.raises(ValueError):
        op.materialize()


def test_state_is_linear_in_n():
    op = build_double_circulant(2048, 512, seed=0)
    arrays = [v for v in vars(op).values() if isinstance(v, np.ndarray)]
    assert arrays
    assert all(a.ndim == 1 for a in arrays)
    index_arrays = [
        v for v in vars(op.index_set).values() if isinstance(v, np.ndarray)
    ]
    assert all(a.ndim == 1 for a in index_arrays)


def test_save_load_roundtrip(tmp_path):
    for mode in ["fixed", "selectors"]:
        path = tmp_path / f"op_{mode}.hcop"
        op = build_double_circulant(64, 16, mode=mode, seed=21)
        op.save(path)
        back = load_operator(path)
        assert back.n == op.n and back.m == op.m and back.mode == op.mode
        assert np.array_equal(back.index_set.indices, op.index_set.indices)
        assert np.array_equal(back.gauss, op.gauss)
        assert np.array_equal(back.sign_in, op.sign_in)
        x = np.random.default_rng(6).standard_normal(64)
        assert np.array_equal(back.apply(x), op.apply(x))


def test_save_refuses_custom_indices(tmp_path):
    op = build_double_circulant(32, 4, indices=[0, 5, 9, 2])
    with pytest.raises(ValueError):
        op.save(tmp_path / "custom.hcop")


def test_load_rejects_bad_files(tmp_path):
    bad_magic = tmp_path / "bad.hcop"
    bad_magic.write_bytes(b"NOPE" + bytes(21))
    with pytest.raises(ValueError, match="magic"):
        load_operator(bad_magic)
    short = tmp_path / "short.hcop"
    short.write_bytes(b"HCOP\x01")
    with pytest.raises(ValueError, match="truncated"):
        load_operator(short)


def test_gaussian_operator_basic():
    op = build_gaussian(64, 16, seed=3)
    assert op.entries.shape == (16, 64)
    x = np.random.default_rng(7).standard_normal(64)
    assert np.allclose(apply_gaussian(op, x), op.entries @ x, atol=1e-12)
    again = build_gaussian(64, 16, seed=3)
    assert np.array_equal(op.entries, again.entries)
    other = build_gaussian(64, 16, seed=4)
    assert not np.array_equal(op.entries, other.entries)


def test_gaussian_l1_view_normalizes():
    # (1/m) sqrt(pi/2) E||A x||_1 = ||x||_2 for the dense Gaussian map.
    op = build_gaussian(32, 4096, seed=8)
    x = np.random.default_rng(8).standard_normal(32)
    x /= np.linalg.norm(x)
    assert abs(np.abs(op.apply_l1(x)).sum() - 1.0) < 0.05


def test_circulant_l1_view_normalizes_on_average():
    # Mean of (1/m) sqrt(pi/2) ||A x||_1 over independent operators is
    # close to ||x||_2; the tight version runs in the acceptance suite.
    n, m = 256, 64
    x = np.random.default_rng(9).standard_normal(n)
    x /= np.linalg.norm(x)
    vals = []
    for seed in range(50):
        op = build_double_circulant(n, m, seed=seed)
        vals.append(np.abs(op.apply_l1(x)).sum())
    assert abs(np.mean(vals) - 1.0) < 0.1


def test_classes_exposed():
    assert isinstance(build_double_circulant(8, 2), DoubleCirculantOperator)
    assert isinstance(build_gaussian(8, 2), GaussianDenseOperator)
