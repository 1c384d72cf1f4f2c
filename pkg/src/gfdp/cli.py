"""Command-line entry point.

Subcommands: factorize (export factors), bounds (norm report), simulate
(one private stream run), verify (oracle identity battery), compare
(bound vs measured error sweep).  Exit codes: 0 ok, 1 usage, 2
numeric/capacity, 3 verification failure.

Every command that touches randomness takes --seed; when the flag is
absent an entropy-derived seed is drawn and logged to stderr so the run
can still be reproduced afterwards.  With a fixed seed and fixed flags,
output files are byte identical across runs.
"""

import argparse
import json
import math
import os
import secrets
import sys

import numpy as np

from . import evaluator, factorizer, mechanism, norms, oracle, polyeval, weights
from .errors import (
    CapacityError,
    NumericError,
    ParameterError,
    StateError,
    VerificationError,
)


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage; the contract here reserves 2
    # for numeric/capacity problems, so route usage errors to 1.
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _parse_p(text: str) -> float:
    if text.strip().lower() in ("inf", "infinity"):
        return math.inf
    try:
        return float(text)
    except ValueError as exc:
        raise ParameterError(f"bad p value {text!r}") from exc


def _spec_from_args(args) -> weights.WeightSpec:
    family = args.weight
    n = args.n
    if n is None:
        raise ParameterError("--n is required")
    if family == "counting":
        return weights.counting(n)
    if family == "sliding":
        if args.window is None:
            raise ParameterError("sliding weights need --window")
        return weights.sliding(args.window, n)
    if family == "striped":
        if args.stripe is None:
            raise ParameterError("striped weights need --stripe")
        return weights.striped(args.stripe, n)
    if family == "expdecay":
        if args.alpha is None:
            raise ParameterError("expdecay weights need --alpha")
        return weights.expdecay(args.alpha, n)
    if family == "polydecay":
        if args.alpha is None:
            raise ParameterError("polydecay weights need --alpha")
        return weights.polydecay(args.alpha, n)
    if family == "table":
        if args.table is None:
            raise ParameterError("table weights need --table <csv>")
        return weights.table(weights.load_table(args.table), n)
    raise ParameterError(f"unknown weight family {family!r}")


def _params_from_args(args) -> mechanism.PrivacyParams:
    return mechanism.PrivacyParams(
        epsilon=args.eps,
        delta=args.delta,
        clip=args.clip,
        sigma_variant=args.sigma_variant,
    )


def _resolve_seed(args) -> int:
    if args.seed is not None:
        return args.seed
    seed = secrets.randbits(63)
    print(f"seed={seed} (entropy-derived; pass --seed {seed} to replay)", file=sys.stderr)
    return seed


def _write_json(obj, path=None) -> None:
    text = json.dumps(obj, indent=2, sort_keys=True)
    if path is None:
        print(text)
    else:
        with open(path, "w") as fh:
            fh.write(text + "\n")


def _csv_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _flatten_report(d: dict) -> dict:
    flat = {}
    for key, val in d.items():
        if isinstance(val, dict):
            for sub, subval in sorted(val.items()):
                flat[f"{key}.{sub}"] = subval
        elif isinstance(val, list):
            flat[key] = ";".join(str(v) for v in val)
        else:
            flat[key] = val
    return flat


def command_factorize(args) -> int:
    spec = _spec_from_args(args)
    fact = factorizer.factorize(spec, mode=args.mode)
    os.makedirs(args.out, exist_ok=True)
    meta = {
        "spec": spec.label,
        "n": fact.n,
        "mode": args.mode,
        "sensitivity": fact.sensitivity(),
        "achieved_gamma2": fact.achieved(math.inf),
        "trace_inf": fact.trace_p(math.inf),
    }
    if args.mode == "pattern":
        path = os.path.join(args.out, "pattern_values.csv")
        with open(path, "w") as fh:
            fh.write(f"rows={2 * fact.n},cols=2\n")
            for v in fact.b_vals:
                fh.write(f"{_csv_cell(float(v.real))},{_csv_cell(float(v.imag))}\n")
        meta["files"] = ["pattern_values.csv"]
    else:
        if isinstance(fact, factorizer.RealFactorization):
            meta["variant"] = fact.variant
        if args.format == "binary":
            names = ("left.bin", "right.bin")
            factorizer.save_factor_binary(fact.left_matrix(), os.path.join(args.out, names[0]))
            factorizer.save_factor_binary(fact.right_matrix(), os.path.join(args.out, names[1]))
        else:
            names = ("left.csv", "right.csv")
            factorizer.save_factor_csv(fact.left_matrix(), os.path.join(args.out, names[0]))
            factorizer.save_factor_csv(fact.right_matrix(), os.path.join(args.out, names[1]))
        meta["files"] = list(names)
    _write_json(meta, os.path.join(args.out, "metadata.json"))
    print(f"wrote {', '.join(meta['files'])} and metadata.json to {args.out}")
    return 0


def command_bounds(args) -> int:
    spec = _spec_from_args(args)
    report = norms.build_report(spec, p=args.p, mode=args.mode)
    payload = report.to_json_dict()
    if args.format == "csv":
        flat = _flatten_report(payload)
        lines = [",".join(flat.keys()), ",".join(_csv_cell(v) for v in flat.values())]
        text = "\n".join(lines) + "\n"
        if args.out is None:
            sys.stdout.write(text)
        else:
            with open(args.out, "w") as fh:
                fh.write(text)
    else:
        _write_json(payload, args.out)
    return 0


def _load_stream(path) -> np.ndarray:
    vals = []
    with open(path) as fh:
        for i, line in enumerate(fh):
            s = line.strip()
            if not s:
                continue
            if i == 0 and s.lower() in ("x", "value"):
                continue
            vals.append(float(s))
    if not vals:
        raise ParameterError(f"no stream values in {path}")
    return np.asarray(vals)


def _synthetic_stream(kind: str, n: int, clip: float, seed_seq) -> np.ndarray:
    if kind == "constant":
        return np.full(n, clip)
    if kind == "spike":
        x = np.zeros(n)
        x[n // 2] = clip
        return x
    if kind == "uniform":
        rng = np.random.default_rng(seed_seq)
        return rng.uniform(-clip, clip, size=n)
    raise ParameterError(f"unknown synthetic stream {kind!r}")


def command_simulate(args) -> int:
    spec = _spec_from_args(args)
    params = _params_from_args(args)
    seed = _resolve_seed(args)
    root = np.random.SeedSequence(seed)
    mech_seq, stream_seq = root.spawn(2)

    if args.mode == "triangular":
        fact = factorizer.factorize(spec, mode="triangular")
    else:
        fact = factorizer.factorize(spec, mode="real")
    if args.input is not None:
        x = _load_stream(args.input)
        if x.size != fact.n:
            raise ParameterError(
                f"stream has {x.size} values but the factorization needs {fact.n}"
            )
    else:
        x = _synthetic_stream(args.synthetic, fact.n, params.clip, stream_seq)

    state = mechanism.init(fact, params, mech_seq, noise_scale=args.noise_scale)
    for v in x:
        state.step(v)

    os.makedirs(args.out, exist_ok=True)
    steps_path = os.path.join(args.out, "steps.csv")
    with open(steps_path, "w") as fh:
        fh.write("t,true,noised,error\n")
        for t, (true, noised) in enumerate(zip(state.true_sums, state.outputs)):
            fh.write(
                f"{t},{_csv_cell(true)},{_csv_cell(noised)},{_csv_cell(noised - true)}\n"
            )

    errs = np.asarray(state.outputs) - np.asarray(state.true_sums)
    sigma_val = mechanism.sigma(params) if args.noise_scale is None else args.noise_scale
    gamma2 = norms.gamma_upper_formula(
        polyeval.eval_m(weights.coefficients(weights.effective_spec(spec))),
        fact.n,
        math.inf,
    )
    bound = evaluator.theoretical_bound(gamma2, sigma_val, math.inf, fact.n)
    max_err = float(np.abs(errs).max())
    report = evaluator.ErrorReport(
        spec_label=spec.label,
        n=fact.n,
        p=math.inf,
        trials=1,
        seed=seed,
        empirical=max_err,
        bound=bound,
        ratio=max_err / bound if bound > 0 else math.inf,
        trial_max=max_err,
    )
    summary = report.to_json_dict()
    summary.update(
        {
            "eps": params.epsilon,
            "delta": params.delta,
            "clip": params.clip,
            "sigma_variant": params.sigma_variant,
            "sigma": sigma_val,
            "sensitivity": fact.sensitivity(),
            "noise_std": state.noise_std,
            "mode": args.mode,
            "adaptive_safe": state.adaptive_safe,
            "clipped": state.clipped,
            "l2_error": float(np.sqrt((errs * errs).sum())),
        }
    )
    _write_json(summary, os.path.join(args.out, "summary.json"))
    print(f"wrote steps.csv and summary.json to {args.out}")
    return 0


def command_verify(args) -> int:
    rows = oracle.verify_suite(n=args.n, seed=args.seed if args.seed is not None else 0)
    width = max(len(r["name"]) for r in rows)
    print(f"{'identity':<{width}}  {'deviation':>12}  {'tolerance':>12}  status")
    failed = 0
    for r in rows:
        status = "pass" if r["passed"] else "FAIL"
        failed += 0 if r["passed"] else 1
        print(
            f"{r['name']:<{width}}  {r['deviation']:>12.3e}  {r['tolerance']:>12.3e}  {status}"
        )
    print(f"{len(rows) - failed}/{len(rows)} identities hold")
    if failed:
        raise VerificationError(f"{failed} identities failed at n={args.n}")
    return 0


def _default_panel(n_max: int) -> list[weights.WeightSpec]:
    panel = [weights.counting(n_max)]
    for w in (4, 16):
        if w <= n_max:
            panel.append(weights.sliding(w, n_max))
    if 2 <= n_max:
        panel.append(weights.striped(2, n_max))
    panel.append(weights.expdecay(0.9, n_max))
    panel.append(weights.polydecay(1.0, n_max))
    return panel


def command_compare(args) -> int:
    n_grid = [int(v) for v in args.n_grid.split(",") if v.strip()]
    if not n_grid or any(n < 1 for n in n_grid):
        raise ParameterError(f"bad --n-grid {args.n_grid!r}")
    p_grid = [_parse_p(v) for v in args.p_grid.split(",") if v.strip()]
    if not p_grid:
        raise ParameterError(f"bad --p-grid {args.p_grid!r}")
    params = _params_from_args(args)
    seed = _resolve_seed(args)
    if args.weight is not None:
        if args.n is None:
            args.n = max(n_grid)  # template horizon; the grid overrides it
        specs = [_spec_from_args(args)]
    else:
        specs = _default_panel(max(n_grid))
    rows = evaluator.compare(
        specs,
        n_grid,
        params,
        p_grid=p_grid,
        trials=args.trials,
        seed=seed,
        threads=args.threads,
        mode=args.mode if args.mode != "pattern" else "real",
    )

    os.makedirs(args.out, exist_ok=True)
    header = [
        "spec",
        "n",
        "p",
        "formula_upper",
        "achieved",
        "closed_form",
        "best_lower",
        "empirical",
        "bound",
        "ratio",
    ]
    csv_lines = [",".join(header)]
    json_rows = []
    for report, err in rows:
        best_lower = max(report.lower_bounds.values()) if report.lower_bounds else None
        csv_lines.append(
            ",".join(
                _csv_cell(v)
                for v in (
                    report.spec_label,
                    report.n,
                    "inf" if report.p == math.inf else report.p,
                    report.formula_upper,
                    report.achieved,
                    report.closed_form,
                    best_lower,
                    err.empirical if err else None,
                    err.bound if err else None,
                    err.ratio if err else None,
                )
            )
        )
        json_rows.append(
            {
                "bound": report.to_json_dict(),
                "error": err.to_json_dict() if err else None,
            }
        )
    with open(os.path.join(args.out, "compare.csv"), "w") as fh:
        fh.write("\n".join(csv_lines) + "\n")
    if args.format == "json":
        _write_json(json_rows, os.path.join(args.out, "compare.json"))
    if args.plot_data:
        with open(os.path.join(args.out, "plot_data.csv"), "w") as fh:
            fh.write("spec,n,p,upper,empirical,lower\n")
            for report, err in rows:
                best_lower = (
                    max(report.lower_bounds.values()) if report.lower_bounds else None
                )
                p_text = "inf" if report.p == math.inf else report.p
                fh.write(
                    f"{report.spec_label},{report.n},{p_text},"
                    f"{_csv_cell(report.formula_upper)},"
                    f"{_csv_cell(err.empirical if err else None)},"
                    f"{_csv_cell(best_lower)}\n"
                )
    wrote = ["compare.csv"]
    if args.format == "json":
        wrote.append("compare.json")
    if args.plot_data:
        wrote.append("plot_data.csv")
    print(f"wrote {', '.join(wrote)} to {args.out}")
    return 0


def _add_weight_flags(sub) -> None:
    sub.add_argument("--weight", choices=weights.FAMILIES, default="counting")
    sub.add_argument("--n", type=int, default=None)
    sub.add_argument("--window", type=int, default=None)
    sub.add_argument("--stripe", type=int, default=None)
    sub.add_argument("--alpha", type=float, default=None)
    sub.add_argument("--table", default=None, help="CSV file, one weight per line")


def _add_privacy_flags(sub) -> None:
    sub.add_argument("--eps", type=float, default=1.0)
    sub.add_argument("--delta", type=float, default=1e-6)
    sub.add_argument("--clip", type=float, default=1.0)
    sub.add_argument(
        "--sigma-variant", choices=mechanism.SIGMA_VARIANTS, default="classic"
    )


def build_parser() -> _Parser:
    parser = _Parser(prog="gfdp", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command")

    fz = sub.add_parser("factorize", help="export factors for a weight spec")
    _add_weight_flags(fz)
    fz.add_argument("--mode", choices=("pattern", "triangular"), default="triangular")
    fz.add_argument("--format", choices=("csv", "binary"), default="csv")
    fz.add_argument("--out", default=".")
    fz.set_defaults(func=command_factorize)

    bd = sub.add_parser("bounds", help="norm bound report for a weight spec")
    _add_weight_flags(bd)
    bd.add_argument("--p", type=_parse_p, default=math.inf)
    bd.add_argument("--mode", choices=("pattern", "triangular"), default="triangular")
    bd.add_argument("--format", choices=("csv", "json"), default="json")
    bd.add_argument("--out", default=None, help="file path; default stdout")
    bd.set_defaults(func=command_bounds)

    sm = sub.add_parser("simulate", help="run the private mechanism on one stream")
    _add_weight_flags(sm)
    _add_privacy_flags(sm)
    sm.add_argument("--mode", choices=("pattern", "triangular"), default="triangular")
    sm.add_argument("--seed", type=int, default=None)
    sm.add_argument("--input", default=None, help="stream CSV, one value per line")
    sm.add_argument(
        "--synthetic", choices=("constant", "uniform", "spike"), default="constant"
    )
    sm.add_argument(
        "--noise-scale",
        type=float,
        default=None,
        help="override sigma (diagnostic; 0 disables noise)",
    )
    sm.add_argument("--out", default=".")
    sm.set_defaults(func=command_simulate)

    vf = sub.add_parser("verify", help="run the oracle identity battery")
    vf.add_argument("--n", type=int, default=32)
    vf.add_argument("--seed", type=int, default=None)
    vf.set_defaults(func=command_verify)

    cp = sub.add_parser("compare", help="sweep bounds against measured error")
    _add_weight_flags(cp)
    cp.set_defaults(weight=None)  # no --weight means the whole default panel
    _add_privacy_flags(cp)
    cp.add_argument("--n-grid", default="16,64,256")
    cp.add_argument("--p-grid", default="inf")
    cp.add_argument("--trials", type=int, default=200)
    cp.add_argument("--mode", choices=("pattern", "triangular"), default="triangular")
    cp.add_argument("--seed", type=int, default=None)
    cp.add_argument("--threads", type=int, default=1)
    cp.add_argument("--format", choices=("csv", "json"), default="json")
    cp.add_argument("--plot-data", action="store_true")
    cp.add_argument("--out", default=".")
    cp.set_defaults(func=command_compare)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if not hasattr(args, "func"):
        parser.print_usage(sys.stderr)
        return 1
    try:
        return args.func(args) or 0
    except ParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (CapacityError, NumericError, StateError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except VerificationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
