"""Command-line front end.

Subcommands
-----------
spectrum   eigenvalues, residuals, biorthogonal norms, mode classes
zero-mode  closed-form coalescing zero mode amplitudes
bethe      quantization roots (scattering, zero mode, imaginary pair)
census     (n_I, n_EP, n_S) mode census at one parameter point
sweep      census over an (N, mu) grid with derived edge-mode counts
plot       stacked stem plot of zero-mode amplitude profiles (SVG)
verify     run the verification suite; exit 3 on any failure

Exit codes: 0 success, 1 usage or parameter error, 2 classification failure
(off the coalescence locus), 3 verification failure.  Flags override values
from an optional ``--config`` file of ``key = value`` lines; the effective
configuration is echoed into every artifact.  All computations are
deterministic, so identical configurations give byte-identical artifacts.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import analysis, bethe, model, serialize, spectral, svgfig, verify

USAGE_ERROR, CLASSIFICATION_ERROR, VERIFY_FAILURE = 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit code 2
        self.print_usage(sys.stderr)
        raise SystemExit(self.exit_on_error_code) from None

    exit_on_error_code = USAGE_ERROR


def _read_config(path: str) -> dict[str, str]:
    config = {}
    with open(path) as handle:
        for lineno, raw in enumerate(handle, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected 'key = value'")
            key, value = (part.strip() for part in line.split("=", 1))
            config[key.replace("-", "_")] = value
    return config


def _merge(args, key: str, cast, default=None):
    """Flag value if given, else config-file value, else default."""
    value = getattr(args, key, None)
    if value is None:
        value = args._config.get(key)
        if value is not None:
            value = cast(value)
    if value is None:
        value = default
    return value


def _csv_ints(text: str) -> list[int]:
    return [int(part) for part in text.split(",") if part.strip()]


def _csv_floats(text: str) -> list[float]:
    return [float(part) for part in text.split(",") if part.strip()]


def _tolerances(args) -> spectral.Tolerances:
    return spectral.Tolerances(
        residual=_merge(args, "tol_residual", float, 1e-11),
        mode_class=_merge(args, "tol_class", float, 1e-8),
        ep=_merge(args, "tol_ep", float, 1e-6),
    )


def _resolve_gamma(args, n: int, mu: float) -> float:
    raw = _merge(args, "gamma", str, "auto")
    if str(raw).strip() == "auto":
        return model.gamma_ep(mu, n)
    return float(raw)


def _model_config(args, command: str):
    n = _merge(args, "N", int)
    mu = _merge(args, "mu", float)
    if n is None or mu is None:
        raise ValueError(f"{command} requires --N and --mu")
    gamma = _resolve_gamma(args, n, mu)
    tol = _tolerances(args)
    config = {
        "command": command,
        "N": n,
        "mu": mu,
        "gamma": gamma,
        "t": _merge(args, "t", float, 1.0),
        "delta": _merge(args, "delta", float, 1.0),
        "tol_residual": tol.residual,
        "tol_class": tol.mode_class,
        "tol_ep": tol.ep,
    }
    return n, mu, gamma, tol, config


def _config_lines(config: dict) -> list[str]:
    return [f"{key}={config[key]!r}" if isinstance(config[key], str)
            else f"{key}={config[key]}" for key in sorted(config)]


def _emit(args, content: str) -> None:
    out = _merge(args, "out", str)
    if out:
        serialize.atomic_write(out, content)
    else:
        sys.stdout.write(content)


def _cmd_spectrum(args) -> int:
    n, mu, gamma, tol, config = _model_config(args, "spectrum")
    fmt = _merge(args, "format", str, "json")
    h = model.build_ssh(n, mu, gamma)
    es = spectral.eig(h, tol.residual)
    records, census = spectral.classify_modes(es, tol)
    ok, unmatched = spectral.pseudo_hermiticity_check(es.eigenvalues, 1e-8 * es.scale)
    if fmt == "json":
        payload = serialize.eigensystem_to_json(es)
        payload["config"] = config
        payload["coalesced_eigenvalues"] = [
            serialize.complex_pair(z)
            for z in spectral.coalesced_eigenvalues(es, tol.ep)
        ]
        payload["mode_classes"] = [r.mode_class.value for r in records]
        payload["census"] = {
            "n_I": census.n_I, "n_EP": census.n_EP, "n_S": census.n_S, "N": census.n,
        }
        payload["pseudo_hermitian"] = ok
        payload["unmatched"] = [serialize.complex_pair(z) for z in unmatched]
        _emit(args, serialize.dump_json(payload))
    elif fmt == "csv":
        lines = _config_lines(config)
        rows = ["re,im,residual,biorth_re,biorth_im,mode_class"]
        for i, record in enumerate(records):
            z = complex(es.eigenvalues[i])
            b = complex(es.biorth_norms[i])
            rows.append(
                f"{z.real!r},{z.imag!r},{es.residuals[i]!r},{b.real!r},"
                f"{b.imag!r},{record.mode_class.value}"
            )
        _emit(args, "".join(f"# {l}\n" for l in lines) + "\n".join(rows) + "\n")
    elif fmt == "text":
        lines = [f"# {l}" for l in _config_lines(config)]
        lines.append(serialize.matrix_to_text(h).rstrip("\n"))
        lines.append("eigenvalues: " + " ".join(
            serialize.format_complex(z) for z in es.eigenvalues))
        _emit(args, "\n".join(lines) + "\n")
    else:
        raise ValueError(f"spectrum does not support format {fmt!r}")
    return 0


def _cmd_zero_mode(args) -> int:
    n, mu, gamma, tol, config = _model_config(args, "zero-mode")
    side = _merge(args, "side", str, "right")
    config["side"] = side
    fmt = _merge(args, "format", str, "csv")
    wavefunction = bethe.zero_mode(n, mu, side)
    if fmt == "csv":
        _emit(args, serialize.zero_mode_csv(wavefunction, _config_lines(config)))
    elif fmt == "json":
        payload = {
            "config": config,
            "omega": wavefunction.omega,
            "amplitudes": [serialize.complex_pair(z) for z in wavefunction.amplitudes],
        }
        _emit(args, serialize.dump_json(payload))
    else:
        raise ValueError(f"zero-mode does not support format {fmt!r}")
    return 0


def _cmd_bethe(args) -> int:
    n, mu, gamma, tol, config = _model_config(args, "bethe")
    fmt = _merge(args, "format", str, "json")
    roots = bethe.solve_real_k(mu, gamma, n)
    zero_k = bethe.zero_mode_root(mu)
    zero_res = abs(bethe.quantization_residual(zero_k, mu, gamma, n))
    zero_res /= bethe.quantization_scale(zero_k, mu, gamma, n)
    roots.append(bethe.BetheRoot(k=zero_k, branch=+1, epsilon=0.0,
                                 residual=zero_res, sector="imaginary"))
    if mu < 1:
        roots.extend(bethe.solve_evanescent_pair(mu, gamma, n))
    if fmt == "json":
        payload = {"config": config, "roots": serialize.roots_to_json(roots)}
        _emit(args, serialize.dump_json(payload))
    elif fmt == "csv":
        _emit(args, serialize.roots_csv(roots, _config_lines(config)))
    else:
        raise ValueError(f"bethe does not support format {fmt!r}")
    return 0


def _cmd_census(args) -> int:
    n, mu, gamma, tol, config = _model_config(args, "census")
    fmt = _merge(args, "format", str, "csv")
    es = spectral.eig(model.build_ssh(n, mu, gamma), tol.residual)
    _, census = spectral.classify_modes(es, tol)
    if fmt == "csv":
        _emit(args, serialize.census_csv([(n, mu, gamma, census)],
                                         _config_lines(config)))
    elif fmt == "json":
        payload = {
            "config": config,
            "census": {"n_I": census.n_I, "n_EP": census.n_EP,
                       "n_S": census.n_S, "N": census.n},
        }
        _emit(args, serialize.dump_json(payload))
    else:
        raise ValueError(f"census does not support format {fmt!r}")
    return 0


def _sweep_workers(grid_size: int) -> int:
    workers = min(os.cpu_count() or 1, grid_size)
    cap = os.environ.get("MAJORANA_PT_THREADS")
    if cap is not None:
        workers = max(1, min(workers, int(cap)))
    return workers


def _cmd_sweep(args) -> int:
    n_grid = _merge(args, "N_grid", _csv_ints)
    mu_grid = _merge(args, "mu_grid", _csv_floats)
    if not n_grid or not mu_grid:
        raise ValueError("sweep requires --N-grid and --mu-grid")
    tol = _tolerances(args)
    fmt = _merge(args, "format", str, "csv")
    config = {
        "command": "sweep",
        "N_grid": ",".join(str(n) for n in n_grid),
        "mu_grid": ",".join(repr(mu) for mu in mu_grid),
        "tol_residual": tol.residual,
        "tol_class": tol.mode_class,
        "tol_ep": tol.ep,
    }
    result = analysis.census_sweep(
        n_grid, mu_grid, tol, max_workers=_sweep_workers(len(n_grid) * len(mu_grid))
    )
    if fmt == "csv":
        _emit(args, serialize.sweep_csv(result, _config_lines(config)))
    elif fmt == "json":
        payload = {
            "config": config,
            "points": [
                {
                    "N": p.n, "mu": p.mu, "gamma": p.gamma,
                    "n_I": p.census.n_I, "n_EP": p.census.n_EP,
                    "n_S": p.census.n_S, "edge_modes": p.edge_modes,
                }
                for p in result.points
            ],
        }
        _emit(args, serialize.dump_json(payload))
    else:
        raise ValueError(f"sweep does not support format {fmt!r}")
    return 0


def _cmd_plot(args) -> int:
    n_grid = _merge(args, "N_grid", _csv_ints)
    mu = _merge(args, "mu", float)
    if not n_grid or mu is None:
        raise ValueError("plot requires --N-grid and --mu")
    config = {
        "command": "plot",
        "N_grid": ",".join(str(n) for n in n_grid),
        "mu": mu,
    }
    panels = []
    for n in sorted(n_grid, reverse=True):
        profile = analysis.dirac_distribution(bethe.zero_mode(n, mu))
        panels.append((f"N={n}, mu={mu}", list(profile.values)))
    svg = svgfig.stem_panels(
        panels,
        title=f"Coalescing zero-mode profile P(j), mu={mu}",
        comment="; ".join(_config_lines(config)),
    )
    _emit(args, svg)
    return 0


def _cmd_verify(args) -> int:
    only = _merge(args, "only", str)
    tol = _tolerances(args)
    results = verify.run_criteria(only=only, tolerances=tol)
    lines = []
    for result in results:
        status = "PASS" if result.passed else "FAIL"
        lines.append(f"{status} {result.criterion_id} ({result.elapsed:.3f} s): "
                     f"{result.detail}")
    report = "\n".join(lines) + "\n"
    sys.stdout.write(report)
    out = _merge(args, "out", str)
    if out:
        payload = {
            "criteria": [
                {
                    "id": r.criterion_id,
                    "passed": r.passed,
                    "detail": r.detail,
                    "elapsed": r.elapsed,
                }
                for r in results
            ],
            "all_passed": all(r.passed for r in results),
        }
        serialize.atomic_write(out, serialize.dump_json(payload))
    return 0 if all(r.passed for r in results) else VERIFY_FAILURE


def _add_model_flags(parser) -> None:
    parser.add_argument("--N", type=int, help="even site count >= 4")
    parser.add_argument("--mu", type=float, help="bulk coupling mu > 0")
    parser.add_argument("--t", type=float, help="hopping amplitude (default 1)")
    parser.add_argument("--delta", type=float, help="pairing amplitude (default t)")
    parser.add_argument("--gamma", help="end potential, a number or 'auto'")


def _add_common_flags(parser) -> None:
    parser.add_argument("--config", help="flat key = value config file")
    parser.add_argument("--out", help="output path (default: stdout)")
    parser.add_argument("--format", help="artifact format")
    parser.add_argument("--tol-residual", dest="tol_residual", type=float)
    parser.add_argument("--tol-class", dest="tol_class", type=float)
    parser.add_argument("--tol-ep", dest="tol_ep", type=float)


def build_parser() -> _Parser:
    parser = _Parser(prog="majorana-pt", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    for name, handler in [
        ("spectrum", _cmd_spectrum),
        ("zero-mode", _cmd_zero_mode),
        ("bethe", _cmd_bethe),
        ("census", _cmd_census),
    ]:
        p = sub.add_parser(name)
        _add_model_flags(p)
        _add_common_flags(p)
        if name == "zero-mode":
            p.add_argument("--side", choices=("right", "left"))
        p.set_defaults(handler=handler)

    p = sub.add_parser("sweep")
    p.add_argument("--N-grid", dest="N_grid", type=_csv_ints,
                   help="comma-separated even site counts")
    p.add_argument("--mu-grid", dest="mu_grid", type=_csv_floats,
                   help="comma-separated couplings")
    _add_common_flags(p)
    p.set_defaults(handler=_cmd_sweep)

    p = sub.add_parser("plot")
    p.add_argument("--N-grid", dest="N_grid", type=_csv_ints)
    p.add_argument("--mu", type=float)
    _add_common_flags(p)
    p.set_defaults(handler=_cmd_plot)

    p = sub.add_parser("verify")
    p.add_argument("--only", help="run only criteria whose id contains this")
    _add_common_flags(p)
    p.set_defaults(handler=_cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else USAGE_ERROR
    try:
        args._config = _read_config(args.config) if getattr(args, "config", None) else {}
        return args.handler(args)
    except spectral.ClassificationError as exc:
        print(f"classification error: {exc}", file=sys.stderr)
        return CLASSIFICATION_ERROR
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
