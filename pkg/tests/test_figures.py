from hamcube.figures import render_bench_figure, render_report_figure
from hamcube.verify import BenchRow, CheckResult, VerificationReport


def test_report_figure_renders(tmp_path):
    report = VerificationReport([
        CheckResult("one", {}, [0], 1e-12, 1e-9, True, 0.1),
        CheckResult("two", {"comparison": ">="}, [0], 0.5, 0.9, False, 0.2),
    ])
    out = tmp_path / "report.png"
    render_report_figure(report, out)
    assert out.stat().st_size > 0


def test_empty_report_figure_renders(tmp_path):
    out = tmp_path / "empty.png"
    render_report_figure(VerificationReport(), out)
    assert out.exists()


def test_bench_figure_renders(tmp_path):
    rows = [
        BenchRow(256, 64, "double_circulant", 10.0, 12.0),
        BenchRow(512, 64, "double_circulant", 19.0, 22.0),
        BenchRow(256, 64, "gaussian", 5.0, 6.0),
        BenchRow(512, 64, "gaussian", 11.0, 13.0),
    ]
    out = tmp_path / "bench.png"
    render_bench_figure(rows, out)
    assert out.stat().st_size > 0
