"""Command-line surface tying the library together.

Subcommands: gen, fit, sweep, select, transform, denoise, weights,
kernel-fit, verify, serve. Grids are given as lo:hi:count (log-spaced) or
as an explicit --alphas list. Computation errors exit 1 with a message on
stderr; usage errors exit 2.
"""

from __future__ import annotations

import math
import time

import click
import numpy as np

from . import alpha_select, cpca, geometry, kernel
from . import datasets as synth
from . import io as cio
from .errors import NumericError, ValidationError


def _parse_alpha(text: str) -> float:
    if text.strip().lower() in ("inf", "infinity"):
        return math.inf
    try:
        value = float(text)
    except ValueError:
        raise click.BadParameter(f"cannot parse alpha {text!r}")
    if value < 0:
        raise click.BadParameter(f"alpha must be >= 0, got {value}")
    return value


def _parse_grid(grid: str | None, alphas: str | None) -> np.ndarray:
    if (grid is None) == (alphas is None):
        raise click.UsageError("provide exactly one of --grid lo:hi:count or --alphas a,b,c")
    if grid is not None:
        parts = grid.split(":")
        if len(parts) != 3:
            raise click.BadParameter(f"grid must be lo:hi:count, got {grid!r}")
        try:
            lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
        except ValueError:
            raise click.BadParameter(f"grid must be numeric lo:hi:count, got {grid!r}")
        return alpha_select.log_grid(lo, hi, count)
    try:
        values = [float(v) for v in alphas.split(",") if v.strip()]
    except ValueError:
        raise click.BadParameter(f"cannot parse --alphas {alphas!r}")
    return alpha_select.validate_grid(values)


def _load_pair(target_path, background_path, label_column):
    target = cio.read_matrix_csv(target_path, label_column=label_column)
    background = cio.read_matrix_csv(background_path)
    return target, background.data


def _fit(target_data, background_data, alpha: float, k: int) -> cpca.CpcaModel:
    if math.isinf(alpha):
        return cpca.fit_infinite(target_data, background_data, k)
    return cpca.fit(target_data, background_data, alpha, k)


class _Stopwatch:
    def __init__(self):
        self.timings_ms: dict[str, float] = {}

    def measure(self, phase: str):
        timer = self

        class _Ctx:
            def __enter__(self):
                self.start = time.perf_counter()

            def __exit__(self, *exc):
                timer.timings_ms[phase] = (time.perf_counter() - self.start) * 1000.0

        return _Ctx()


@click.group()
def main():
    """Contrastive PCA toolkit."""


def _run_guarded(fn):
    try:
        fn()
    except (ValidationError, NumericError) as exc:
        raise click.ClickException(str(exc))


@main.command()
@click.option("--dataset", type=click.Choice(["toy-a", "kernel-toy"]), default="toy-a", show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out-target", required=True, type=click.Path(dir_okay=False))
@click.option("--out-background", required=True, type=click.Path(dir_okay=False))
@click.option("--with-labels/--no-labels", default=True, show_default=True,
              help="Append group labels as the target CSV's last column.")
@click.option("--out-labels", type=click.Path(dir_okay=False), default=None,
              help="Also write labels as a standalone one-column CSV (the "
                   "format POST /datasets expects).")
def gen(dataset, seed, out_target, out_background, with_labels, out_labels):
    """Generate a synthetic dataset pair as CSV files."""

    def run():
        maker = synth.gen_toy_appendix_a if dataset == "toy-a" else synth.gen_toy_kernel
        labeled, background = maker(seed)
        cio.write_matrix_csv(out_target, labeled.data, labels=labeled.labels if with_labels else None)
        cio.write_matrix_csv(out_background, background)
        if out_labels:
            cio.write_matrix_csv(out_labels, labeled.labels[:, None].astype(float))
        click.echo(f"wrote {out_target} ({labeled.data.shape[0]}x{labeled.data.shape[1]}"
                   f"{'+labels' if with_labels else ''}) and {out_background}"
                   + (f" and {out_labels}" if out_labels else ""))

    _run_guarded(run)


@main.command()
@click.option("--target", "target_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--background", "background_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--label-column", type=int, default=None, help="0-based label column in the target CSV.")
@click.option("--alpha", default="1.0", show_default=True, help="Contrast parameter; 'inf' for the null-space variant.")
@click.option("-k", "--components", type=int, default=cpca.DEFAULT_K, show_default=True)
@click.option("--out", required=True, type=click.Path(dir_okay=False), help="Embedding CSV (rows x k).")
@click.option("--report", "report_path", type=click.Path(dir_okay=False), default=None)
@click.option("--include-background", is_flag=True, help="Also embed the background (appended rows, label -1).")
def fit(target_path, background_path, label_column, alpha, components, out, report_path, include_background):
    """Fit contrastive PCA at one alpha and write the target embedding."""

    def run():
        alpha_value = _parse_alpha(alpha)
        watch = _Stopwatch()
        target, background = _load_pair(target_path, background_path, label_column)
        with watch.measure("fit"):
            model = _fit(target.data, background, alpha_value, components)
        with watch.measure("transform"):
            emb = cpca.transform(model, target.data)
        labels = target.labels
        if include_background:
            emb = np.vstack([emb, cpca.transform(model, background)])
            pad = np.full(background.shape[0], -1, dtype=np.int64)
            labels = np.concatenate([labels, pad]) if labels is not None else None
        cio.write_matrix_csv(out, emb, labels=labels)
        if report_path:
            cio.RunReport(
                command="fit",
                parameters={"target": target_path, "background": background_path,
                            "alpha": "inf" if math.isinf(alpha_value) else alpha_value,
                            "k": components},
                alphas=["inf" if math.isinf(alpha_value) else alpha_value],
                variance_pairs=[model.variance_pairs.tolist()],
                timings_ms=watch.timings_ms,
                extra={"eigenvalues": model.eigenvalues.tolist()},
            ).write(report_path)
        click.echo(f"wrote {out}")

    _run_guarded(run)


def _sweep_payload(models):
    return [m.variance_pairs.tolist() for m in models]


@main.command()
@click.option("--target", "target_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--background", "background_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--label-column", type=int, default=None)
@click.option("--grid", default=None, help="lo:hi:count, log-spaced.")
@click.option("--alphas", default=None, help="Explicit comma-separated alpha list.")
@click.option("-k", "--components", type=int, default=cpca.DEFAULT_K, show_default=True)
@click.option("--out-trace", required=True, type=click.Path(dir_okay=False),
              help="CSV of (alpha, component, target_var, background_var, eigenvalue).")
@click.option("--report", "report_path", type=click.Path(dir_okay=False), default=None)
def sweep(target_path, background_path, label_column, grid, alphas, components, out_trace, report_path):
    """Fit every grid alpha and write the variance-pair trace.

    The alpha=0 (PCA) baseline is computed as well and reported separately;
    it is never part of the grid itself.
    """

    def run():
        grid_values = _parse_grid(grid, alphas)
        watch = _Stopwatch()
        target, background = _load_pair(target_path, background_path, label_column)
        with watch.measure("sweep"):
            models = alpha_select.sweep(target.data, background, grid_values, components)
        with watch.measure("pca_baseline"):
            baseline = cpca.fit(target.data, background, 0.0, components)
        rows = []
        for m in models:
            for c in range(m.k):
                rows.append([m.alpha, float(c), m.variance_pairs[c, 0],
                             m.variance_pairs[c, 1], m.eigenvalues[c]])
        cio.write_matrix_csv(out_trace, np.array(rows),
                             header=["alpha", "component", "target_var", "background_var", "eigenvalue"])
        if report_path:
            cio.RunReport(
                command="sweep",
                parameters={"target": target_path, "background": background_path,
                            "k": components, "grid": grid or alphas},
                alphas=[m.alpha for m in models],
                variance_pairs=_sweep_payload(models),
                timings_ms=watch.timings_ms,
                extra={"pca_baseline": {
                    "variance_pairs": baseline.variance_pairs.tolist(),
                    "eigenvalues": baseline.eigenvalues.tolist(),
                }},
            ).write(report_path)
        click.echo(f"wrote {out_trace}")

    _run_guarded(run)


@main.command()
@click.option("--target", "target_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--background", "background_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--label-column", type=int, default=None)
@click.option("--grid", default=None, help="lo:hi:count, log-spaced.")
@click.option("--alphas", default=None, help="Explicit comma-separated alpha list.")
@click.option("-k", "--components", type=int, default=cpca.DEFAULT_K, show_default=True)
@click.option("-p", "--clusters", type=int, default=3, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out-prefix", default="select", show_default=True,
              help="Embedding CSVs: <prefix>_pca.csv and <prefix>_alpha_<value>.csv per medoid.")
@click.option("--report", "report_path", type=click.Path(dir_okay=False), default=None)
def select(target_path, background_path, label_column, grid, alphas, components,
           clusters, seed, out_prefix, report_path):
    """Run the full alpha-selection pipeline and write medoid embeddings."""

    def run():
        grid_values = _parse_grid(grid, alphas)
        watch = _Stopwatch()
        target, background = _load_pair(target_path, background_path, label_column)
        with watch.measure("select"):
            result = alpha_select.auto_select(
                target.data, background, grid_values, components, clusters, seed
            )
        with watch.measure("pca_baseline"):
            baseline = cpca.fit(target.data, background, 0.0, components)
        written = []
        pca_path = f"{out_prefix}_pca.csv"
        cio.write_matrix_csv(pca_path, cpca.transform(baseline, target.data), labels=target.labels)
        written.append(pca_path)
        by_alpha = {m.alpha: m for m in result.per_alpha_models}
        for medoid_alpha in result.medoid_alphas:
            model = by_alpha[float(medoid_alpha)]
            path = f"{out_prefix}_alpha_{medoid_alpha:.6g}.csv"
            cio.write_matrix_csv(path, cpca.transform(model, target.data), labels=target.labels)
            written.append(path)
        if report_path:
            cio.RunReport(
                command="select",
                parameters={"target": target_path, "background": background_path,
                            "k": components, "p": clusters, "grid": grid or alphas},
                alphas=[m.alpha for m in result.per_alpha_models],
                variance_pairs=_sweep_payload(result.per_alpha_models),
                medoid_alphas=result.medoid_alphas.tolist(),
                cluster_labels=result.cluster_labels.tolist(),
                timings_ms=watch.timings_ms,
                seed=seed,
                extra={
                    "embeddings": written,
                    "pca_baseline": {
                        "variance_pairs": baseline.variance_pairs.tolist(),
                        "eigenvalues": baseline.eigenvalues.tolist(),
                    },
                },
            ).write(report_path)
        click.echo("medoid alphas: " + ", ".join(f"{a:.6g}" for a in result.medoid_alphas))
        for path in written:
            click.echo(f"wrote {path}")

    _run_guarded(run)


@main.command()
@click.option("--target", "target_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--background", "background_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--data", "data_path", required=True, type=click.Path(exists=True, dir_okay=False),
              help="Rows to project with the fitted model.")
@click.option("--alpha", default="1.0", show_default=True)
@click.option("-k", "--components", type=int, default=cpca.DEFAULT_K, show_default=True)
@click.option("--use-background-mean", is_flag=True, help="Center the data by the background mean.")
@click.option("--out", required=True, type=click.Path(dir_okay=False))
def transform(target_path, background_path, data_path, alpha, components, use_background_mean, out):
    """Fit on the target/background pair, then project --data."""

    def run():
        alpha_value = _parse_alpha(alpha)
        target, background = _load_pair(target_path, background_path, None)
        data = cio.read_matrix_csv(data_path).data
        model = _fit(target.data, background, alpha_value, components)
        cio.write_matrix_csv(out, cpca.transform(model, data, use_background_mean))
        click.echo(f"wrote {out}")

    _run_guarded(run)


@main.command()
@click.option("--target", "target_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--background", "background_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--data", "data_path", default=None, type=click.Path(exists=True, dir_okay=False),
              help="Rows to reconstruct; defaults to the target data.")
@click.option("--alpha", default="1.0", show_default=True)
@click.option("-k", "--components", type=int, default=cpca.DEFAULT_K, show_default=True)
@click.option("--out", required=True, type=click.Path(dir_okay=False))
def denoise(target_path, background_path, data_path, alpha, components, out):
    """Rank-k reconstruction of data through the fitted components."""

    def run():
        alpha_value = _parse_alpha(alpha)
        target, background = _load_pair(target_path, background_path, None)
        data = cio.read_matrix_csv(data_path).data if data_path else target.data
        model = _fit(target.data, background, alpha_value, components)
        cio.write_matrix_csv(out, cpca.denoise(model, data))
        click.echo(f"wrote {out}")

    _run_guarded(run)


@main.command()
@click.option("--target", "target_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--background", "background_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--alpha", default="1.0", show_default=True)
@click.option("-k", "--components", type=int, default=cpca.DEFAULT_K, show_default=True)
@click.option("--component", type=int, default=0, show_default=True)
@click.option("--out", required=True, type=click.Path(dir_okay=False),
              help="Single-column CSV of per-feature weights in [0, 1].")
def weights(target_path, background_path, alpha, components, component, out):
    """Per-feature contribution weights of one fitted component."""

    def run():
        alpha_value = _parse_alpha(alpha)
        target, background = _load_pair(target_path, background_path, None)
        model = _fit(target.data, background, alpha_value, components)
        w = cpca.feature_weights(model, component)
        cio.write_matrix_csv(out, w[:, None])
        click.echo(f"wrote {out}")

    _run_guarded(run)


@main.command("kernel-fit")
@click.option("--target", "target_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--background", "background_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--label-column", type=int, default=None)
@click.option("--kernel", "kind", type=click.Choice(list(kernel.KINDS)), default="polynomial", show_default=True)
@click.option("--degree", type=int, default=2, show_default=True)
@click.option("--coef0", type=float, default=1.0, show_default=True)
@click.option("--gamma", type=float, default=1.0, show_default=True)
@click.option("--alpha", default="1.0", show_default=True)
@click.option("-k", "--components", type=int, default=2, show_default=True)
@click.option("--out", required=True, type=click.Path(dir_okay=False),
              help="Training-target embedding CSV.")
@click.option("--include-background", is_flag=True, help="Append background rows (label -1).")
@click.option("--report", "report_path", type=click.Path(dir_okay=False), default=None)
def kernel_fit(target_path, background_path, label_column, kind, degree, coef0, gamma,
               alpha, components, out, include_background, report_path):
    """Kernel contrastive PCA; writes the training embedding."""

    def run():
        alpha_value = _parse_alpha(alpha)
        if math.isinf(alpha_value):
            raise ValidationError("kernel-fit supports finite alpha only")
        spec = kernel.KernelSpec(kind=kind, degree=degree, coef0=coef0, gamma=gamma)
        watch = _Stopwatch()
        target, background = _load_pair(target_path, background_path, label_column)
        with watch.measure("fit"):
            model = kernel.fit_kernel(target.data, background, spec, alpha_value, components)
        with watch.measure("project"):
            proj = kernel.training_projection(model)
        emb = proj[: model.n]
        labels = target.labels
        if include_background:
            emb = np.vstack([emb, proj[model.n :]])
            pad = np.full(model.m, -1, dtype=np.int64)
            labels = np.concatenate([labels, pad]) if labels is not None else None
        cio.write_matrix_csv(out, emb, labels=labels)
        if report_path:
            cio.RunReport(
                command="kernel-fit",
                parameters={"target": target_path, "background": background_path,
                            "kernel": kind, "degree": degree, "coef0": coef0,
                            "gamma": gamma, "alpha": alpha_value, "k": components},
                alphas=[alpha_value],
                timings_ms=watch.timings_ms,
                extra={"eigenvalues": model.eigenvalues.tolist()},
            ).write(report_path)
        click.echo(f"wrote {out}")

    _run_guarded(run)


@main.command()
@click.option("--d", "dim", type=int, default=6, show_default=True)
@click.option("--samples", type=int, default=geometry.DEFAULT_SAMPLES, show_default=True)
@click.option("--grid", default="0.1:1000:40", show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--eps", type=float, default=geometry.DEFAULT_EPS, show_default=True)
@click.option("--simdiag", is_flag=True, help="Use a simultaneously diagonalizable pair.")
@click.option("--report", "report_path", default="verify_report.json", show_default=True,
              type=click.Path(dir_okay=False))
@click.option("--trace", "trace_path", default="verify_trace.csv", show_default=True,
              type=click.Path(dir_okay=False))
@click.option("--cloud", "cloud_path", default="verify_cloud.csv", show_default=True,
              type=click.Path(dir_okay=False))
def verify(dim, samples, grid, seed, eps, simdiag, report_path, trace_path, cloud_path):
    """Empirically certify the sweep's optimality on a random instance.

    Emits a JSON certificate plus CSVs of the swept (alpha, target_var,
    background_var) trace and the sampled variance-pair cloud. A failed
    certificate is recorded in the report, not the exit code.
    """

    def run():
        grid_values = _parse_grid(grid, None)
        watch = _Stopwatch()
        cx, cy = synth.gen_random_pair(dim, simdiag=simdiag, seed=seed)
        with watch.measure("certificate"):
            cert = geometry.certify_theorem1(cx, cy, grid_values, samples, seed, eps)
        with watch.measure("tangency"):
            tangency = geometry.tangency_check(cx, cy, grid_values)
        trace = np.column_stack([cert.alphas, cert.swept_pairs])
        cio.write_matrix_csv(trace_path, trace, header=["alpha", "target_var", "background_var"])
        cio.write_matrix_csv(cloud_path, cert.cloud_pairs, header=["target_var", "background_var"])
        cio.RunReport(
            command="verify",
            parameters={"d": dim, "samples": samples, "grid": grid,
                        "eps": eps, "simdiag": simdiag},
            alphas=list(map(float, cert.alphas)),
            timings_ms=watch.timings_ms,
            seed=seed,
            extra={"certificate": cert.to_dict(), "tangency": tangency.to_dict()},
        ).write(report_path)
        status = "PASS" if cert.passed and tangency.passed else "FAIL"
        click.echo(f"certificate: {status} (max dominance margin {cert.max_margin:.3e}, "
                   f"eps {eps:g}); wrote {report_path}, {trace_path}, {cloud_path}")
        if status == "FAIL":
            click.echo("warning: certificate failed; see the report for offending alphas",
                       err=True)

    _run_guarded(run)


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8787, show_default=True)
def serve(host, port):
    """Start the local HTTP exploration service."""
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=host, port=port, log_level="info")


if __name__ == "__main__":
    main()
