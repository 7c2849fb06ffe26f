import pytest

from topoloss.bench import bench_csv, run_bench
from topoloss.grid import ValidationError


def test_rows_and_determinism():
    a = run_bench([5, 9], repeats=1, seed=3)
    b = run_bench([5, 9], repeats=1, seed=3)
    assert [(r.size, r.kind, r.dots) for r in a] == \
        [(r.size, r.kind, r.dots) for r in b]
    assert {r.kind for r in a} == {"random", "rings"}
    assert all(r.mean_seconds > 0 for r in a)


def test_csv_shape():
    rows = run_bench([5], repeats=1, seed=0)
    text = bench_csv(rows)
    lines = text.strip().splitlines()
    assert lines[0] == "size,kind,mean_seconds,dots"
    assert len(lines) == 3


def test_size_guard():
    with pytest.raises(ValidationError):
        run_bench([2], repeats=1, seed=0)
