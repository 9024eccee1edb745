"""Smoke test for the `sixv` Python module.

Build and install first:
    pip install maturin
    maturin build --release -m crates/sixv-py/Cargo.toml -o dist
    pip install dist/sixv-*.whl
Then run `pytest python/smoke_test.py` or `python python/smoke_test.py`.
"""

import math

import sixv


def test_sample_is_valid_and_reproducible():
    rows = sixv.sample(0.5, 1.5, 0.6, 6, 4, seed=3, index=2)
    assert len(rows) == 6
    for k, row in enumerate(rows, start=1):
        assert len(row) == k
        assert all(a > b for a, b in zip(row, row[1:]))
        assert row[-1] >= 0
    for lower, upper in zip(rows, rows[1:]):
        assert all(upper[i] >= lower[i] >= upper[i + 1] for i in range(len(lower)))
    assert rows == sixv.sample(0.5, 1.5, 0.6, 6, 4, seed=3, index=2)


def test_holes_interlace():
    rows = sixv.sample(0.5, 1.5, 0.6, 8, 5, seed=9)
    cols = sixv.holes(rows, 3)
    assert [len(c) for c in cols] == [1, 2, 3]
    for j in range(2):
        for i in range(j + 1):
            y = cols[j][i]
            if math.isfinite(y):
                assert cols[j + 1][i] <= y <= cols[j + 1][i + 1] or math.isinf(cols[j + 1][i])


def test_single_row_edge_probability():
    # One row, no v-columns: the first path leaves row 1 at column 1 with probability 0.546918.
    assert abs(sixv.cdf_contour([1], 0.5, 2.0, 0.25, 1, 0) - 0.546918) < 1e-6


def test_edge_constants():
    c = sixv.limit_constants(0.5, 1.5, 0.6)
    assert set(c) == {"a", "a2", "b1", "c"}
    assert abs(c["c"] - math.sqrt(2 * c["a2"]) / c["b1"]) < 1e-12
    assert c["a"] > 0 and c["a2"] > 0 and c["b1"] > 0


def test_gue_edge_cdf():
    assert abs(sixv.gue_edge_cdf([0.0, 0.0]) - 0.090845) < 1e-6


def test_gt_counts():
    assert sixv.gt_count([0, 1, 2]) == 8
    assert sixv.gt_count([0, 2, 4], strict=True) == 1


def test_symmetric_functions_and_errors():
    f = sixv.f_sym([2, 0], [1.6, 2.0], 0.5)
    g = sixv.g_sym([2, 1], [0.2, 0.3], 0.5)
    assert math.isfinite(f) and math.isfinite(g)
    try:
        sixv.sample(1.5, 1.5, 0.6, 2, 2, seed=1)
    except ValueError:
        pass
    else:
        raise AssertionError("q outside (0,1) must be rejected")


if __name__ == "__main__":
    for name, fn in sorted(globals().items()):
        if name.startswith("test_"):
            fn()
            print(f"{name}: ok")
