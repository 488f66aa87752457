"""Command-line front end.

Exit codes: 0 success, 1 validation failure, 2 I/O or schema error,
3 numerical failure.

Examples::

    hermitizer toy --r 0.3 --s 0.2 --t 0.1 --out toy.json
    hermitizer score toy.json
    hermitizer paths toy.json --list
    hermitizer evolve toy.json --k 1 --t-final 10 --state random --out trace.csv
    hermitizer bg --g 0.1 --j 1 --eta 1 --levels 5
"""
from __future__ import annotations

import argparse
import logging
import sys

import numpy as np

from . import __version__
from .bgosc import BGParams, GridSpec, compare_spectra
from .chains import consistency_residuals, validate
from .conjugation import quasi_hermiticity_residual
from .errors import HermitizerError, NumericalError, SchemaError, ValidationError
from .evolve import METHODS, EvolutionSpec, propagate
from .lattice import build_lattice, enumerate_paths, representation, terminal_path_counts
from .matkernel import Tolerance, eigenvalues, rel_distance
from .modelfile import (
    ModelFile,
    build_report,
    encode_matrix,
    encode_vector,
    load_model,
    save_model,
    write_csv,
    write_json,
)
from .scoring import DEFAULT_WEIGHTS
from .toymodel import DECLARED_N_PAR, ToyParams, build, verify_fixtures

log = logging.getLogger("hermitizer")

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_IO = 2
EXIT_NUMERICAL = 3

FIXTURE_TOL = 1e-12


def _fmt_complex(z: complex) -> str:
    z = complex(z)
    if abs(z.imag) < 1e-14 * max(1.0, abs(z.real)):
        return f"{z.real:.10g}"
    return f"{z.real:.10g}{z.imag:+.3g}j"


def _print_matrix(name, A, out):
    print(f"{name} =", file=out)
    for row in np.asarray(A):
        print("  [" + ", ".join(f"{_fmt_complex(z):>14}" for z in row) + "]", file=out)


def _parse_weights(text):
    try:
        weights = tuple(float(v) for v in text.split(","))
    except ValueError as exc:
        raise ValidationError(f"--weights expects three comma-separated numbers, got {text!r}") from exc
    return weights


def _parse_state(text, dim, seed):
    if text == "random":
        rng = np.random.default_rng(seed)
        return rng.normal(size=dim) + 1j * rng.normal(size=dim)
    try:
        values = np.array([complex(v.replace(" ", "")) for v in text.split(",")])
    except ValueError as exc:
        raise ValidationError("--state expects comma-separated complex numbers or 'random'") from exc
    if values.size != dim:
        raise ValidationError(f"--state has {values.size} components, model dimension is {dim}")
    return values


# --------------------------------------------------------------------------
# subcommands
# --------------------------------------------------------------------------

def cmd_verify(args, tol, out):
    model = load_model(args.model)
    ok = True
    metrics = model.metric_chain(tol)
    cert = validate(metrics, tol)
    print(f"metric chain: N={metrics.n_factors}, dim={metrics.dim}", file=out)
    for j, r, e in zip(cert.levels, cert.hermiticity_residuals, cert.min_eigenvalues):
        flag = "ok" if (r < tol.rel_eq and e > 0) else "FAIL"
        print(f"  Y_{j}: hermiticity residual {r:.3e}, min eigenvalue {e:.6g}  {flag}", file=out)
    for j, r in consistency_residuals(metrics).items():
        flag = "ok" if r < tol.rel_eq else "FAIL"
        print(f"  Z_{j}^dagger Y_{j + 1} = Y_{j + 1} Z_{j}: residual {r:.3e}  {flag}", file=out)
        ok &= r < tol.rel_eq
    ok &= cert.passed
    report = {"certificate": cert.to_dict(), "representations": []}
    if cert.passed:
        chain = model.dyson_chain(tol)
        H = model.working_hamiltonian(tol)
        for k in range(chain.n_factors + 1):
            rep = representation(H, chain, k, tol)
            res = quasi_hermiticity_residual(rep.physical_hamiltonian, rep.physical_metric)
            flag = "ok" if res < tol.rel_eq else "FAIL"
            print(f"  k={k} (d={rep.dyson_depth}): quasi-Hermiticity residual {res:.3e}  {flag}", file=out)
            report["representations"].append({"metric_depth": k, "residual": res, "passed": res < tol.rel_eq})
            ok &= res < tol.rel_eq
        lat = build_lattice(H, chain, tol)
        theta = metrics.theta()
        worst = max(rel_distance(n.W.conj().T @ n.P @ n.W, theta) for n in lat.terminals())
        print(f"  terminal identity W^dagger P W = Theta: worst residual {worst:.3e}", file=out)
        ok &= worst < tol.rel_eq
    report["passed"] = bool(ok)
    if args.json:
        write_json(report, args.json)
    print("PASS" if ok else "FAIL", file=out)
    return EXIT_OK if ok else EXIT_VALIDATION


def cmd_paths(args, tol, out):
    model = load_model(args.model)
    chain = model.dyson_chain(tol)
    lat = build_lattice(model.working_hamiltonian(tol), chain, tol)
    n = chain.n_factors
    counts = terminal_path_counts(n)
    print(
        f"{len(lat)} nodes, {sum(counts)} paths, terminals: {'/'.join(map(str, counts))}",
        file=out,
    )
    if args.list:
        for path in enumerate_paths(n):
            steps = "".join("D" if c.value == "dyson" else "A" for c in path.choices)
            sup = ",".join(map(str, path.superscripts))
            print(
                f"{steps}  superscripts {sup}  ends at R_0^({path.dyson_depth}) "
                f"(metric_depth {path.metric_depth})",
                file=out,
            )
    return EXIT_OK


def cmd_transform(args, tol, out):
    model = load_model(args.model)
    chain = model.dyson_chain(tol)
    rep = representation(model.working_hamiltonian(tol), chain, args.k, tol)
    res = quasi_hermiticity_residual(rep.physical_hamiltonian, rep.physical_metric)
    print(f"metric_depth k={rep.metric_depth}, dyson_depth d={rep.dyson_depth}", file=out)
    _print_matrix("physical Hamiltonian", rep.physical_hamiltonian, out)
    _print_matrix("physical metric", rep.physical_metric, out)
    print(f"quasi-Hermiticity residual {res:.3e}", file=out)
    spec = eigenvalues(rep.physical_hamiltonian)
    print("spectrum: " + ", ".join(_fmt_complex(z) for z in spec), file=out)
    if args.json:
        write_json(
            {
                "metric_depth": rep.metric_depth,
                "dyson_depth": rep.dyson_depth,
                "hamiltonian": encode_matrix(rep.physical_hamiltonian),
                "metric": encode_matrix(rep.physical_metric),
                "transform": encode_matrix(rep.transform),
                "quasi_hermiticity_residual": res,
                "spectrum": encode_vector(spec),
            },
            args.json,
        )
    return EXIT_OK if res < tol.rel_eq else EXIT_VALIDATION


def cmd_score(args, tol, out):
    model = load_model(args.model)
    weights = _parse_weights(args.weights) if args.weights else DEFAULT_WEIGHTS
    report = build_report(model, tol, weights)
    rows = report.score_rows()
    header = f"{'k':>2} {'d':>2} {'N_zero':>6} {'N_par':>5} {'nonherm':>9} {'cond(metric)':>13} {'band':>4} {'pref':>9} {'rank':>4}"
    print(header, file=out)
    for r in rows:
        print(
            f"{r['metric_depth']:>2} {r['dyson_depth']:>2} {r['n_zero']:>6} {str(r['n_par']):>5} "
            f"{r['nonhermiticity']:>9.3g} {r['metric_condition']:>13.4g} {r['bandwidth']:>4} "
            f"{r['preference']:>9.4g} {r['rank']:>4}",
            file=out,
        )
    print(f"lattice: {report.lattice.describe()}", file=out)
    if args.json:
        write_json(report.to_dict(), args.json)
    if args.csv:
        write_csv(rows, args.csv)
    return EXIT_OK


def _toy_model_file(inst) -> ModelFile:
    return ModelFile(
        dimension=3,
        target_hamiltonian=inst.target,
        dyson_factors=list(inst.chain.factors),
        declared_n_par=list(DECLARED_N_PAR),
        description=f"three-level toy model r={inst.params.r!r} s={inst.params.s!r} t={inst.params.t!r}",
    )


def cmd_toy(args, tol, out):
    if args.sweep:
        rng = np.random.default_rng(args.seed)
        worst = 0.0
        done = 0
        while done < args.sweep:
            p = ToyParams(*rng.uniform(-2.0, 2.0, size=3))
            if not p.is_generic():
                continue
            worst = max(worst, max(verify_fixtures(build(p, tol), tol).values()))
            done += 1
        ok = worst < FIXTURE_TOL
        print(f"sweep of {done} generic points (seed {args.seed}): worst fixture residual {worst:.3e}", file=out)
        print("PASS" if ok else "FAIL", file=out)
        return EXIT_OK if ok else EXIT_VALIDATION
    params = ToyParams(args.r, args.s, args.t)
    inst = build(params, tol)
    residuals = verify_fixtures(inst, tol)
    ok = True
    for name, res in residuals.items():
        flag = "ok" if res < FIXTURE_TOL else "FAIL"
        ok &= res < FIXTURE_TOL
        print(f"  {name:<22} residual {res:.3e}  {flag}", file=out)
    if not params.is_generic():
        print("  note: parameters are not generic; sparsity counts may differ", file=out)
    if args.out:
        save_model(_toy_model_file(inst), args.out)
        print(f"wrote {args.out}", file=out)
    return EXIT_OK if ok else EXIT_VALIDATION


def cmd_evolve(args, tol, out):
    model = load_model(args.model)
    chain = model.dyson_chain(tol)
    H = model.working_hamiltonian(tol)
    k = chain.n_factors if args.k is None else args.k
    rep = representation(H, chain, k, tol)
    psi = rep.transform @ _parse_state(args.state, model.dimension, args.seed)
    spec = EvolutionSpec(
        rep.physical_hamiltonian, rep.physical_metric, psi, args.t_final, args.samples, args.method, args.step
    )
    trace = propagate(spec, tol)
    energy = trace.expectation(rep.physical_hamiltonian)
    rows = [
        {"time": float(t), "norm": float(n), "expectation_re": float(e.real), "expectation_im": float(e.imag)}
        for t, n, e in zip(trace.times, trace.physical_norms, energy)
    ]
    if args.out:
        write_csv(rows, args.out)
        print(f"wrote {args.out}", file=out)
    else:
        print("time,norm,expectation_re,expectation_im", file=out)
        for r in rows:
            print(f"{r['time']!r},{r['norm']!r},{r['expectation_re']!r},{r['expectation_im']!r}", file=out)
    print(f"k={k} method={args.method} max_norm_drift={trace.max_norm_drift:.3e}", file=sys.stderr)
    return EXIT_OK


def cmd_bg(args, tol, out):
    params = BGParams(args.g, args.j, args.eta)
    grid = GridSpec(args.grid_l, args.grid_n)
    if not params.supported:
        log.warning("|g|=%g exceeds the supported range; results are unreliable", abs(params.g))
    report = compare_spectra(params, grid, args.levels, tol)
    print(f"{'n':>2} {'Re BG':>12} {'Im BG':>10} {'|Im/Re|':>9} {'Q':>12} {'rel gap':>9}", file=out)
    for r in report.rows():
        print(
            f"{r['level']:>2} {r['bg_re']:>12.8f} {r['bg_im']:>10.2e} {r['imag_ratio']:>9.1e} "
            f"{r['q']:>12.8f} {r['relative_gap']:>9.1e}",
            file=out,
        )
    if args.json:
        data = report.to_dict()
        data["supported"] = params.supported
        write_json(data, args.json)
    if args.csv:
        write_csv(report.rows(), args.csv)
    return EXIT_OK


# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hermitizer", description=__doc__.split("\n")[0])
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    ap.add_argument("--seed", type=int, default=0, help="seed for randomized sweeps and random states")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="validate the chains and every representation")
    p.add_argument("model")
    p.add_argument("--json", help="write the verification report here")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("paths", help="lattice summary and Hermitization paths")
    p.add_argument("model")
    p.add_argument("--list", action="store_true", help="print every path")
    p.set_defaults(func=cmd_paths)

    p = sub.add_parser("transform", help="physical representation with k metric factors")
    p.add_argument("model")
    p.add_argument("--k", type=int, required=True, help="metric depth 0..N")
    p.add_argument("--json")
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("score", help="complexity table of all physical representations")
    p.add_argument("model")
    p.add_argument("--weights", help="n_zero,nonhermiticity,log-condition weights (default 1,1,0.1)")
    p.add_argument("--json", help="write the full representation report here")
    p.add_argument("--csv", help="write the score table here")
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("toy", help="three-level model: fixture check and model file")
    p.add_argument("--r", type=float, default=0.3)
    p.add_argument("--s", type=float, default=0.2)
    p.add_argument("--t", type=float, default=0.1)
    p.add_argument("--out", help="write the model file here")
    p.add_argument("--sweep", type=int, default=0, help="check fixtures at this many random generic points")
    p.set_defaults(func=cmd_toy)

    p = sub.add_parser("evolve", help="time evolution trace as CSV")
    p.add_argument("model")
    p.add_argument("--k", type=int, help="metric depth (default N, the working representation)")
    p.add_argument("--t-final", type=float, default=10.0)
    p.add_argument("--state", default="random", help="comma-separated complex amplitudes, or 'random'")
    p.add_argument("--method", choices=METHODS, default="exact_diagonalization")
    p.add_argument("--step", type=float, default=1e-3)
    p.add_argument("--samples", type=int, default=201)
    p.add_argument("--out", help="CSV path (default stdout)")
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("bg", help="oscillator vs double-well finite-difference spectra")
    p.add_argument("--g", type=float, default=0.1)
    p.add_argument("--j", type=float, default=1.0)
    p.add_argument("--eta", type=float, default=1.0)
    p.add_argument("--grid-l", type=float, default=12.0)
    p.add_argument("--grid-n", type=int, default=2000)
    p.add_argument("--levels", type=int, default=5)
    p.add_argument("--json")
    p.add_argument("--csv")
    p.set_defaults(func=cmd_bg)
    return ap


def main(argv=None, out=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    out = out or sys.stdout
    try:
        tol = Tolerance.default()
        return args.func(args, tol, out)
    except SchemaError as exc:
        log.error("%s", exc)
        return EXIT_IO
    except NumericalError as exc:
        log.error("numerical failure: %s", exc)
        return EXIT_NUMERICAL
    except ValidationError as exc:
        log.error("validation failure: %s", exc)
        return EXIT_VALIDATION
    except HermitizerError as exc:  # pragma: no cover - every subclass is handled above
        log.error("%s", exc)
        return EXIT_VALIDATION


if __name__ == "__main__":
    raise SystemExit(main())
