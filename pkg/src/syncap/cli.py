"""Command line interface: ``syncap <command> [options]``.

Exit codes: 0 success, 1 usage error, 2 numerical non-convergence (or a
replay that does not reproduce), 3 enumeration guard violation.
"""

from __future__ import annotations

import argparse
import os
import sys
import warnings
from typing import Callable, Dict, List, Optional, Tuple

from . import __version__
from .capacity import ConvergenceWarning, InputLaw, blahut_arimoto, mutual_information
from .law import GuardError, channel_law, output_distribution
from .montecarlo import (McConfig, estimate_ab_entropy_rate, estimate_boundary_ambiguity,
                         estimate_length_biased_log_run, estimate_output_length,
                         estimate_zv_stats)
from .records import RunRecord, append_record, dumps, format_csv, read_config, read_records
from .series import (a1, binary_entropy, capacity_expansion, e_log_l0, epsilon2_bound, g1,
                     hyx_asymptote)

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC, EXIT_GUARD = 0, 1, 2, 3

DEFAULTS = {
    "L": 1000,
    "tol": 1e-6,
    "max_iter": 10000,
    "seed": 0,
    "trials": 20,
    "mc_n": 100_000,
}

SWEEP_COLUMNS_HEAD = ["alpha", "expansion", "tail", "eps2", "C_min_upper"]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _alpha(text):
    value = float(text)
    if not (0.0 <= value < 1.0):
        raise argparse.ArgumentTypeError(f"alpha must lie in [0, 1), got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--json", action="store_true", help="print the run record as JSON")
    common.add_argument("--out", default=None, help="results directory (runs.jsonl)")
    common.add_argument("--config", default=None, help="key=value file; flags take precedence")

    parser = _Parser(prog="syncap", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("series", parents=[common], help="series constants and the expansion")
    p.add_argument("--L", type=_positive_int, default=None)
    p.add_argument("--alpha", type=_alpha, nargs="+", default=None)

    p = sub.add_parser("law", parents=[common], help="exact P(y|x) or the output law of x")
    p.add_argument("--x", required=True, help="input word, e.g. 0110")
    p.add_argument("--y", default=None, help="output word; omit to list the full law")
    p.add_argument("--alpha", type=_alpha, nargs=1, default=None)

    p = sub.add_parser("mi", parents=[common], help="exact mutual information decomposition")
    p.add_argument("--n", type=_positive_int, nargs=1, default=None)
    p.add_argument("--alpha", type=_alpha, nargs=1, default=None)
    group = p.add_mutually_exclusive_group()
    group.add_argument("--iid", type=float, default=None, metavar="P")
    group.add_argument("--markov", type=float, nargs=2, default=None, metavar=("P01", "P10"))

    p = sub.add_parser("ba", parents=[common], help="Blahut-Arimoto upper bound C_n")
    p.add_argument("--n", type=_positive_int, nargs=1, default=None)
    p.add_argument("--alpha", type=_alpha, nargs=1, default=None)
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--max-iter", dest="max_iter", type=_positive_int, default=None)

    p = sub.add_parser("mc", parents=[common], help="seeded Monte Carlo estimators")
    p.add_argument("estimator", choices=sorted(MC_ESTIMATORS))
    p.add_argument("--n", type=_positive_int, nargs=1, default=None)
    p.add_argument("--alpha", type=_alpha, nargs=1, default=None)
    p.add_argument("--trials", type=_positive_int, default=None)

    p = sub.add_parser("sweep", parents=[common], help="alpha-grid comparison table")
    p.add_argument("--alpha", type=_alpha, nargs="+", default=None)
    p.add_argument("--n", type=_positive_int, nargs="+", default=None)
    p.add_argument("--L", type=_positive_int, default=None)
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--max-iter", dest="max_iter", type=_positive_int, default=None)
    p.add_argument("--trials", type=_positive_int, default=None)
    p.add_argument("--mc-n", dest="mc_n", type=int, default=None,
                   help="Monte Carlo blocklength per alpha (0 skips the checks)")

    p = sub.add_parser("replay", parents=[common], help="re-run a persisted run record")
    p.add_argument("record", help="runs.jsonl file or the directory holding it")
    p.add_argument("--index", type=int, default=-1)
    return parser


def _apply_config(args, parser):
    if not args.config:
        return
    try:
        config = read_config(args.config)
    except (OSError, ValueError) as exc:
        raise UsageError(str(exc))
    for key, raw in config.items():
        if not hasattr(args, key) or getattr(args, key) not in (None, False):
            continue
        setattr(args, key, _convert(key, raw))


def _convert(key, raw):
    if key == "alpha":
        return [float(v) for v in raw.replace(",", " ").split()]
    if key == "n":
        return [int(v) for v in raw.replace(",", " ").split()]
    if key in ("L", "max_iter", "seed", "trials", "mc_n", "index"):
        return int(raw)
    if key == "tol":
        return float(raw)
    if key == "json":
        return raw.lower() in ("1", "true", "yes")
    if key == "markov":
        return [float(v) for v in raw.replace(",", " ").split()]
    if key == "iid":
        return float(raw)
    return raw


def _one(values, name):
    if values is None:
        raise UsageError(f"--{name} is required")
    if len(values) != 1:
        raise UsageError(f"--{name} takes a single value here")
    return values[0]


def _setting(args, name):
    value = getattr(args, name, None)
    return DEFAULTS[name] if value is None else value


# -- commands ----------------------------------------------------------------
# Each command maps a plain parameter dict to (results, exit status) so that
# persisted records can be replayed without re-parsing the command line.

def run_series(params: Dict) -> Tuple[Dict, int]:
    L = params["L"]
    g, a, e = g1(L), a1(L), e_log_l0(L)
    rows = []
    for alpha in params["alpha"]:
        point = capacity_expansion(alpha, L)
        eps2 = epsilon2_bound(alpha, L)
        rows.append({
            "alpha": alpha,
            "expansion": point.value,
            "tail": g.tail_bound,
            "hyx": hyx_asymptote(alpha, L),
            "eps2": eps2.value,
        })
    return {
        "L": L,
        "G1": g.value, "G1_tail": g.tail_bound,
        "A1": a.value, "A1_tail": a.tail_bound,
        "E_log_L0": e.value, "E_log_L0_tail": e.tail_bound,
        "rows": rows,
    }, EXIT_OK


def run_law(params: Dict) -> Tuple[Dict, int]:
    alpha = params["alpha"]
    if params.get("y") is not None:
        return {"x": params["x"], "y": params["y"],
                "probability": channel_law(params["x"], params["y"], alpha)}, EXIT_OK
    dist = output_distribution(params["x"], alpha)
    table = [["".join(map(str, y)), p] for y, p in dist.items()]
    return {"x": params["x"], "distribution": table, "total": dist.total,
            "entropy": dist.entropy()}, EXIT_OK


def _law(n, desc) -> InputLaw:
    if desc["kind"] == "markov":
        return InputLaw.markov(n, *desc["params"])
    return InputLaw.iid(n, *desc["params"])


def run_mi(params: Dict) -> Tuple[Dict, int]:
    res = mutual_information(_law(params["n"], params["law"]), params["alpha"])
    out = {k: getattr(res, k) for k in ("h_y", "h_y_given_x", "h_ab", "h_ab_given_xyk",
                                        "h_k_given_xy", "mutual_information")}
    out.update(rate=res.rate, residual_direct=res.residual_direct,
               residual_decomposition=res.residual_decomposition)
    return out, EXIT_OK


def run_ba(params: Dict, history: Optional[List[RunRecord]] = None) -> Tuple[Dict, int]:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ConvergenceWarning)
        trace = blahut_arimoto(params["n"], params["alpha"], params["tol"], params["max_iter"])
    previous = [r.results["upper"] for r in history or ()
                if r.command == "ba" and r.parameters.get("alpha") == params["alpha"]
                and "upper" in r.results]
    return {
        "C_n": trace.capacity,
        "upper": trace.upper,
        "gap": trace.gap,
        "iterations": trace.iterations,
        "converged": trace.converged,
        "trace": trace.values,
        "running_min_upper": min(previous + [trace.upper]),
        "status": "ok" if trace.converged else "warning: not converged",
    }, EXIT_OK if trace.converged else EXIT_NUMERIC


MC_ESTIMATORS: Dict[str, Callable] = {
    "ab": estimate_ab_entropy_rate,
    "length": estimate_output_length,
    "boundary": estimate_boundary_ambiguity,
    "logrun": estimate_length_biased_log_run,
}


def _estimate(e) -> Dict:
    return {"mean": e.mean, "std_error": e.std_error, "samples": e.samples}


def run_mc(params: Dict) -> Tuple[Dict, int]:
    cfg = McConfig(params["alpha"], params["n"], params["trials"], params["seed"])
    name = params["estimator"]
    if name == "zv":
        z10, z11 = estimate_zv_stats(cfg)
        return {"z1_v0": _estimate(z10), "z1_v1": _estimate(z11),
                "bound": 3.0 * cfg.alpha ** 2}, EXIT_OK
    out = _estimate(MC_ESTIMATORS[name](cfg))
    targets = {"ab": binary_entropy(cfg.alpha) + cfg.alpha, "length": cfg.alpha,
               "logrun": e_log_l0().value}
    if name in targets:
        out["target"] = targets[name]
    return out, EXIT_OK


MC_ESTIMATORS["zv"] = estimate_zv_stats


def _mc_status(alpha, n, trials, seed) -> str:
    if n <= 0:
        return "skipped"
    if alpha == 0.0:
        return "pass"
    cfg = McConfig(alpha, n, trials, seed)
    ab = estimate_ab_entropy_rate(cfg)
    length = estimate_output_length(cfg)
    ok = ab.within(binary_entropy(alpha) + alpha, 5) and length.within(alpha, 5)
    return "pass" if ok else "fail"


def sweep_columns(n_list) -> List[str]:
    return SWEEP_COLUMNS_HEAD + [f"rate_iid_n{n}" for n in n_list] + ["mc_status"]


def run_sweep(params: Dict) -> Tuple[Dict, int]:
    alphas, n_list = params["alpha"], params["n"]
    if not alphas:
        raise UsageError("alpha grid must not be empty")
    if any(b <= a for a, b in zip(alphas, alphas[1:])) or alphas[0] <= 0:
        raise UsageError("alpha grid must be strictly increasing inside (0, 1)")
    L = params["L"]
    g = g1(L)
    rows = []
    for alpha in alphas:
        row = {"alpha": alpha}
        cells = {
            "expansion": lambda: capacity_expansion(alpha, L).value,
            "tail": lambda: g.tail_bound,
            "eps2": lambda: epsilon2_bound(alpha, L).value,
            "C_min_upper": lambda: min(
                blahut_arimoto(n, alpha, params["tol"], params["max_iter"]).upper
                for n in range(1, max(n_list) + 1)),
            "mc_status": lambda: _mc_status(alpha, params["mc_n"], params["trials"],
                                            params["seed"]),
        }
        for n in n_list:
            cells[f"rate_iid_n{n}"] = (lambda n=n: mutual_information(InputLaw.iid(n), alpha).rate)
        for key, compute in cells.items():
            try:
                with warnings.catch_warnings():
                    warnings.simplefilter("ignore", ConvergenceWarning)
                    row[key] = compute()
            except Exception as exc:  # recorded per cell, the sweep goes on
                row[key] = f"error: {exc}"
        rows.append(row)
    columns = sweep_columns(n_list)
    return {"columns": columns, "rows": rows, "csv": format_csv(columns, rows)}, EXIT_OK


COMMANDS = {
    "series": run_series,
    "law": run_law,
    "mi": run_mi,
    "ba": run_ba,
    "mc": run_mc,
    "sweep": run_sweep,
}


def _parameters(args) -> Dict:
    cmd = args.command
    seed = _setting(args, "seed")
    if cmd == "series":
        return {"L": _setting(args, "L"), "alpha": list(args.alpha or [])}
    if cmd == "law":
        return {"x": args.x, "y": args.y, "alpha": _one(args.alpha, "alpha")}
    if cmd == "mi":
        if args.markov is not None:
            law = {"kind": "markov", "params": list(args.markov)}
        else:
            law = {"kind": "iid", "params": [0.5 if args.iid is None else args.iid]}
        return {"n": _one(args.n, "n"), "alpha": _one(args.alpha, "alpha"), "law": law}
    if cmd == "ba":
        return {"n": _one(args.n, "n"), "alpha": _one(args.alpha, "alpha"),
                "tol": _setting(args, "tol"), "max_iter": _setting(args, "max_iter")}
    if cmd == "mc":
        return {"estimator": args.estimator, "n": _one(args.n, "n"),
                "alpha": _one(args.alpha, "alpha"), "trials": _setting(args, "trials"),
                "seed": seed}
    if cmd == "sweep":
        if not args.alpha:
            raise UsageError("--alpha grid is required and must not be empty")
        return {"alpha": list(args.alpha), "n": list(args.n or range(1, 7)),
                "L": _setting(args, "L"), "tol": _setting(args, "tol"),
                "max_iter": _setting(args, "max_iter"), "trials": _setting(args, "trials"),
                "mc_n": _setting(args, "mc_n"), "seed": seed}
    raise UsageError(f"unknown command {cmd}")


def execute(command: str, params: Dict, out: Optional[str] = None) -> Tuple[Dict, int]:
    if command == "ba":
        return run_ba(params, read_records(out) if out else None)
    return COMMANDS[command](params)


def _print_text(command, results, stream):
    if command == "sweep":
        stream.write(results["csv"])
        return
    if command == "series":
        for key in ("G1", "A1", "E_log_L0"):
            print(f"{key:10s} {results[key]:.6f}   tail_bound {results[key + '_tail']:.6g}",
                  file=stream)
        if results["rows"]:
            print(f"{'alpha':>10s} {'expansion':>12s} {'tail':>12s} {'hyx':>12s} {'eps2':>12s}",
                  file=stream)
            for r in results["rows"]:
                print(f"{r['alpha']:10.6g} {r['expansion']:12.6f} {r['tail']:12.6g} "
                      f"{r['hyx']:12.6f} {r['eps2']:12.6g}", file=stream)
        return
    if command == "law" and "distribution" in results:
        for y, p in results["distribution"]:
            print(f"{y:>20s} {p:.12g}", file=stream)
        print(f"H(Y|X=x) = {results['entropy']:.6f}", file=stream)
        return
    for key, value in results.items():
        if key == "trace":
            value = f"[{len(value)} values, monotone non-decreasing]"
        elif isinstance(value, float):
            value = f"{value:.6f}" if abs(value) >= 1e-4 or value == 0 else f"{value:.3e}"
        print(f"{key:24s} {value}", file=stream)


def _replay(args, stream) -> int:
    records = read_records(args.record)
    if not records:
        raise UsageError(f"no run records found at {args.record}")
    try:
        record = records[args.index]
    except IndexError:
        raise UsageError(f"record index {args.index} out of range ({len(records)} records)")
    params = dict(record.parameters)
    results, _ = (run_ba(params, None) if record.command == "ba"
                  else COMMANDS[record.command](params))
    if record.command == "ba":
        # running minimum depends on history, compare the run itself
        results.pop("running_min_upper", None)
        expected = dict(record.results)
        expected.pop("running_min_upper", None)
    else:
        expected = record.results
    same = dumps(results) == dumps(expected)
    print(f"replay {record.command}: {'identical' if same else 'MISMATCH'}", file=stream)
    return EXIT_OK if same else EXIT_NUMERIC


def main(argv: Optional[List[str]] = None, stream=None) -> int:
    stream = stream or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _apply_config(args, parser)
        if args.command == "replay":
            return _replay(args, stream)
        params = _parameters(args)
        results, status = execute(args.command, params, args.out)
    except UsageError as exc:
        print(f"syncap {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except GuardError as exc:
        print(f"syncap {args.command}: guard violation: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except ValueError as exc:
        print(f"syncap {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    record = RunRecord.create(args.command, params, params.get("seed", _setting(args, "seed")),
                              __version__, results)
    if args.out:
        append_record(args.out, record)
        if args.command == "sweep":
            _write_sweep(args.out, record)
    if args.json:
        stream.write(record.to_json() + "\n")
    else:
        _print_text(args.command, results, stream)
    return status


def _write_sweep(directory, record: RunRecord):
    results = record.results
    with open(os.path.join(directory, "sweep.csv"), "w") as fh:
        fh.write(results["csv"])
    payload = {"schema": "syncap-csv v1", "columns": results["columns"],
               "rows": results["rows"], "parameters": record.parameters,
               "version": record.version, "meta": record.meta}
    with open(os.path.join(directory, "sweep.json"), "w") as fh:
        fh.write(dumps(payload) + "\n")


if __name__ == "__main__":
    sys.exit(main())
