"""Figure tool tests against hand-built benchmark directories.

Fixtures write CSVs matching the benchmark output contract directly; the
tool must work from the files alone.
"""

import math
import re
import subprocess
import sys
from pathlib import Path

import pytest

from bench_plots import FigureSpec, RenderError, collect_curves, render, render_svg
from bench_plots.cli import main as cli_main

TRACE_HEADER = "iter,elapsed_s,f_val,rel_subopt,grad_err,stationarity,eta,branch"
SUMMARY_HEADER = (
    "run,algorithm,dataset,loss,seed,outcome,f_best,iters_to_best,"
    "seconds_to_best,trace_file"
)


def write_bench_dir(root: Path, runs, dataset="synth"):
    """runs: list of (algorithm, rows) where rows are (iter, rel_subopt, grad_err)."""
    root.mkdir(parents=True, exist_ok=True)
    summary = [SUMMARY_HEADER]
    for idx, (algo, rows) in enumerate(runs):
        name = f"trace_{idx:03d}_{dataset}_{algo}.csv"
        lines = [TRACE_HEADER]
        best = math.inf
        for it, rel, gerr in rows:
            f_val = 0.5 + rel
            best = min(best, f_val)
            lines.append(
                f"{it},{float(it)},{f_val},{rel},{gerr},0.01,0.5,-"
            )
        (root / name).write_text("\n".join(lines) + "\n")
        outcome = "completed" if rows else "memory_refused"
        f_best = best if rows else "nan"
        summary.append(
            f"{idx},{algo},{dataset},logistic,0,{outcome},{f_best},1,1.0,{name}"
        )
    (root / "summary.csv").write_text("\n".join(summary) + "\n")
    return root


def simple_rows(n=20, scale=1.0):
    return [(k, scale / k, scale / (k * k)) for k in range(1, n + 1)]


def count_curves(svg: str):
    curves = re.findall(r'class="curve" data-algo="([^"]+)"', svg)
    labels = re.findall(r'class="legend-label"[^>]*>([^<]+)<', svg)
    return curves, labels


# ---------------------------------------------------------------------------

def test_single_run_single_curve(tmp_path):
    out = write_bench_dir(tmp_path / "out", [("psga", simple_rows())])
    fig = tmp_path / "fig.svg"
    path = render(FigureSpec(input_dir=out, save=fig))
    curves, labels = count_curves(path.read_text())
    assert curves == ["psga"]
    assert labels == ["psga"]


def test_six_runs_six_curves_and_legend(tmp_path):
    algos = ["psga", "pstorm", "spstorm", "proxsvrg", "saga", "rda"]
    out = write_bench_dir(
        tmp_path / "out", [(a, simple_rows(scale=1.0 + i)) for i, a in enumerate(algos)]
    )
    fig = tmp_path / "fig.svg"
    render(FigureSpec(input_dir=out, metric="grad_err", save=fig))
    text = fig.read_text()
    curves, labels = count_curves(text)
    assert sorted(curves) == sorted(algos)
    assert sorted(labels) == sorted(algos)
    assert 'data-yscale="log"' in text
    assert 'data-metric="grad_err"' in text


def test_log_plot_drops_nonpositive_with_note(tmp_path, capsys):
    rows = simple_rows(10) + [(11, 0.0, 1e-9), (12, -1e-3, 1e-9)]
    out = write_bench_dir(tmp_path / "out", [("psga", rows)])
    spec = FigureSpec(input_dir=out, save=tmp_path / "fig.svg")
    curves = collect_curves(spec)
    note = capsys.readouterr().err
    assert len(curves[0].xs) == 10
    assert "dropped 2" in note and "psga" in note


def test_linear_keeps_zeros(tmp_path, capsys):
    rows = simple_rows(10) + [(11, 0.0, 1e-9)]
    out = write_bench_dir(tmp_path / "out", [("psga", rows)])
    spec = FigureSpec(input_dir=out, save=tmp_path / "fig.svg", log_y=False)
    curves = collect_curves(spec)
    assert len(curves[0].xs) == 11
    assert capsys.readouterr().err == ""
    text = render_svg(spec, curves)
    assert 'data-yscale="linear"' in text


def test_nan_metric_dropped(tmp_path, capsys):
    out = tmp_path / "out"
    out.mkdir()
    trace = "trace_000_synth_psga.csv"
    (out / trace).write_text(
        TRACE_HEADER + "\n1,1.0,0.6,nan,0.1,0.01,0.5,-\n2,2.0,0.55,0.05,0.08,0.01,0.5,-\n"
    )
    (out / "summary.csv").write_text(
        SUMMARY_HEADER + f"\n0,psga,synth,logistic,0,completed,0.55,2,2.0,{trace}\n"
    )
    curves = collect_curves(FigureSpec(input_dir=out))
    assert len(curves[0].xs) == 1
    assert "dropped 1" in capsys.readouterr().err


def test_memory_refused_run_skipped_with_note(tmp_path, capsys):
    out = write_bench_dir(
        tmp_path / "out", [("psga", simple_rows()), ("saga", [])]
    )
    curves = collect_curves(FigureSpec(input_dir=out))
    assert [c.algorithm for c in curves] == ["psga"]
    assert "skipped" in capsys.readouterr().err


def test_missing_metric_column_names_file(tmp_path):
    out = tmp_path / "out"
    out.mkdir()
    trace = "trace_000_synth_psga.csv"
    (out / trace).write_text("iter,elapsed_s,f_val\n1,1.0,0.6\n")
    (out / "summary.csv").write_text(
        SUMMARY_HEADER + f"\n0,psga,synth,logistic,0,completed,0.6,1,1.0,{trace}\n"
    )
    with pytest.raises(RenderError, match=trace):
        collect_curves(FigureSpec(input_dir=out))


def test_empty_or_missing_directory_errors(tmp_path):
    with pytest.raises(RenderError, match="not found"):
        collect_curves(FigureSpec(input_dir=tmp_path / "nope"))
    empty = tmp_path / "empty"
    empty.mkdir()
    with pytest.raises(RenderError, match="summary.csv"):
        collect_curves(FigureSpec(input_dir=empty))
    (empty / "summary.csv").write_text(SUMMARY_HEADER + "\n")
    with pytest.raises(RenderError, match="no runs"):
        collect_curves(FigureSpec(input_dir=empty))


def test_dataset_filter(tmp_path):
    out = tmp_path / "out"
    write_bench_dir(out, [("psga", simple_rows())], dataset="alpha")
    # append a second dataset's run to the same summary
    trace = "trace_009_beta_rda.csv"
    lines = [TRACE_HEADER] + [f"{k},{float(k)},0.7,{1.0/k},0.1,0.01,0.5,-" for k in (1, 2, 3)]
    (out / trace).write_text("\n".join(lines) + "\n")
    with open(out / "summary.csv", "a") as fh:
        fh.write(f"9,rda,beta,logistic,0,completed,0.7,1,1.0,{trace}\n")
    both = collect_curves(FigureSpec(input_dir=out))
    assert [c.algorithm for c in both] == ["psga", "rda"]
    only = collect_curves(FigureSpec(input_dir=out, dataset="beta"))
    assert [c.algorithm for c in only] == ["rda"]


def test_invalid_metric_and_axis_rejected(tmp_path):
    with pytest.raises(RenderError, match="branch"):
        FigureSpec(input_dir=tmp_path, metric="branch")
    with pytest.raises(RenderError, match="x_axis"):
        FigureSpec(input_dir=tmp_path, x_axis="f_val")


def test_byte_identical_rerender(tmp_path):
    out = write_bench_dir(
        tmp_path / "out",
        [("psga", simple_rows()), ("rda", simple_rows(scale=2.0))],
    )
    a = render(FigureSpec(input_dir=out, save=tmp_path / "a.svg"))
    b = render(FigureSpec(input_dir=out, save=tmp_path / "b.svg"))
    assert a.read_bytes() == b.read_bytes()


def test_curve_geometry_monotone_x(tmp_path):
    out = write_bench_dir(tmp_path / "out", [("psga", simple_rows())])
    spec = FigureSpec(input_dir=out, save=tmp_path / "fig.svg")
    text = render_svg(spec, collect_curves(spec))
    pts = re.search(r'points="([^"]+)"', text).group(1).split()
    xs = [float(p.split(",")[0]) for p in pts]
    assert xs == sorted(xs)
    assert len(xs) == 20


def test_x_axis_iter_option(tmp_path):
    out = write_bench_dir(tmp_path / "out", [("psga", simple_rows())])
    spec = FigureSpec(input_dir=out, save=tmp_path / "fig.svg", x_axis="iter")
    text = render_svg(spec, collect_curves(spec))
    assert ">iter<" in text


# ---------------------------------------------------------------------------
# CLI

def test_cli_writes_figure(tmp_path, capsys):
    out = write_bench_dir(tmp_path / "out", [("psga", simple_rows())])
    fig = tmp_path / "fig.svg"
    rc = cli_main(["--dir", str(out), "--metric", "rel_subopt", "--save", str(fig)])
    assert rc == 0
    assert fig.exists()
    assert "wrote" in capsys.readouterr().out


def test_cli_error_exit_code(tmp_path, capsys):
    rc = cli_main(["--dir", str(tmp_path / "missing"), "--save",
                   str(tmp_path / "fig.svg")])
    assert rc == 1
    assert "plot error" in capsys.readouterr().err


def test_cli_entry_point_subprocess(tmp_path):
    out = write_bench_dir(tmp_path / "out", [("psga", simple_rows())])
    fig = tmp_path / "fig.svg"
    proc = subprocess.run(
        [sys.executable, "-m", "bench_plots.cli", "--dir", str(out),
         "--save", str(fig)],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0, proc.stderr
    assert fig.exists()


def test_png_output_via_matplotlib(tmp_path):
    pytest.importorskip("matplotlib")
    out = write_bench_dir(tmp_path / "out", [("psga", simple_rows())])
    fig = tmp_path / "fig.png"
    render(FigureSpec(input_dir=out, save=fig))
    assert fig.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"
