"""Command-line reproduction harness.

Every command reads an optional INI-style config, takes a mandatory master
seed (except ``cost``), and writes CSV or JSON either to ``--out`` or to
stdout. Output is assembled in memory and written in one go, so a failed run
never leaves a partial file behind.

Exit codes: 0 success, 2 configuration or input error, 3 numerical failure.
"""
import argparse
import configparser
import csv
import io
import json
import math
import os
import sys
import tempfile
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import rng as _rng
from .analysis import cost_report, placement_measure
from .channels import ChannelConfig, generate
from .errors import DimensionError, NonConvergenceError, NumericalError, SingularError, ValidationError
from .inversion import METHODS, invert
from .matrix import (
    condition_number,
    evd_hermitian,
    general_condition_number,
    gram,
    read_matrix,
    write_matrix,
)
from .power import DEFAULT_TAU
from .precoding import PrecoderConfig, ser_experiment
from .preconditioners import PreconditionerKind, preconditioned_matrix
from .regularizers import (
    DEFAULT_CANDIDATES,
    apply_rank1,
    epia_invert,
    sr1r_params_exact,
    sr1r_params_pia,
)
from .schulz import SchulzConfig

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


class ConfigError(ValidationError):
    pass


# -- config ------------------------------------------------------------------

_CHANNEL_KEYS = {
    "model": str, "M": int, "N": int, "rician_k_factor": float, "users": int,
    "antennas_per_user": int, "los_probability_scale": float, "nlos_penalty_db": float,
    "shadowing_std_los_db": float, "shadowing_std_nlos_db": float, "bs_segments": int,
}
_SCHULZ_KEYS = {
    "tau": int, "candidates": int, "residual_tolerance": float, "max_iterations": int,
}
_SECTIONS = {
    "channel": _CHANNEL_KEYS,
    "cond_cdf": {"trials": int, "rzf_snr_db": float, **_SCHULZ_KEYS},
    "ser_sweep": {
        "precoders": str, "methods": str, "iteration_budgets": str, "snr_db": str,
        "symbols": int, "realizations": int, "qam_order": int, **_SCHULZ_KEYS,
    },
    "invert": {"method": str, "fixed_iterations": int, **_SCHULZ_KEYS},
    "cost": {"N": int, "M": int, "tau0": int, "tauN1": int, "iterations": int},
}


def _split_list(text):
    return [t.strip() for t in text.split(",") if t.strip()]


def load_config(path):
    """Parse a config file into ``{section: {key: typed value}}``.

    Unknown sections or keys are rejected rather than ignored, so a typo
    cannot silently fall back to a default.
    """
    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = str
    if path is not None:
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
        try:
            parser.read_string(text, source=str(path))
        except configparser.Error as exc:
            raise ConfigError(f"{path}: {exc}") from None
    out = {name: {} for name in _SECTIONS}
    for section in parser.sections():
        if section not in _SECTIONS:
            raise ConfigError(f"unknown config section [{section}]")
        schema = _SECTIONS[section]
        for key, raw in parser.items(section):
            if key not in schema:
                raise ConfigError(f"unknown key {key!r} in [{section}]")
            try:
                out[section][key] = schema[key](raw)
            except ValueError:
                raise ConfigError(
                    f"[{section}] {key} = {raw!r} is not a valid {schema[key].__name__}"
                ) from None
    return out


def _channel_config(cfg):
    ch = dict(cfg["channel"])
    model = ch.pop("model", "rayleigh")
    try:
        return ChannelConfig.preset(model, **ch)
    except ValueError as exc:
        raise ConfigError(f"[channel] {exc}") from None


def _schulz_config(section):
    try:
        return SchulzConfig(
            residual_tolerance=section.get("residual_tolerance", 1e-9),
            max_iterations=section.get("max_iterations", 200),
            fixed_iterations=section.get("fixed_iterations"),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _positive(name, value, allow_zero=False):
    if value < 0 or (value == 0 and not allow_zero):
        raise ConfigError(f"{name} must be {'>= 0' if allow_zero else '> 0'}, got {value}")
    return value


# -- output ------------------------------------------------------------------


def _fmt(x):
    if isinstance(x, float):
        return repr(x)
    return str(x)


def _db(k):
    return 10.0 * math.log10(k) if math.isfinite(k) else math.inf


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if math.isfinite(v) else None
    if isinstance(obj, np.integer):
        return int(obj)
    return obj


def to_json(obj):
    return json.dumps(_jsonable(obj), indent=2, sort_keys=True, allow_nan=False) + "\n"


def to_csv(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def emit(text, out):
    if out is None:
        sys.stdout.write(text)
        return
    out = Path(out)
    out.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=out.parent, prefix=f".{out.name}.")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, out)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise


def _parallel_map(fn, items, threads):
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


# -- cond-cdf ----------------------------------------------------------------

KAPPA_COLUMNS = ("a", "sr1r_exact", "pia", "epia", "jacobi", "gs", "ssor", "rzf", "bound")


def cond_cdf_header():
    header = ["trial"]
    for name in KAPPA_COLUMNS:
        header += [f"kappa_{name}", f"kappa_{name}_db"]
    header.append("measure")
    return header


def _kappa(fn, x):
    try:
        return fn(x)
    except SingularError:
        return math.inf


@dataclass(frozen=True)
class CondCdfJob:
    channel: ChannelConfig
    trials: int
    rzf_snr_db: float
    tau: int
    candidates: int
    schulz: SchulzConfig
    seed: int

    def trial(self, t):
        h = generate(self.channel, _rng.derive_seed(self.seed, _rng.CHANNEL, t)).H
        a = gram(h)
        spec = evd_hermitian(a)
        lam = spec.eigenvalues
        n = spec.n
        inv_seed = _rng.derive_seed(self.seed, _rng.TRIAL, t)

        k = {"a": _kappa(lambda s: s.condition_number(), spec)}
        exact = sr1r_params_exact(spec)
        theta = evd_hermitian(apply_rank1(a, exact)).eigenvalues
        k["sr1r_exact"] = float(np.max(np.abs(theta)) / np.min(np.abs(theta)))
        k["pia"] = _kappa(condition_number, apply_rank1(a, sr1r_params_pia(a, self.tau, inv_seed)))
        rep = epia_invert(a, self.candidates, self.tau, inv_seed, self.schulz)
        k["epia"] = _kappa(condition_number, apply_rank1(a, rep.details["update"]))
        for kind in PreconditionerKind:
            k[kind.value] = _kappa(
                general_condition_number, preconditioned_matrix(a, kind))
        delta = 10.0 ** (-self.rzf_snr_db / 10.0)
        k["rzf"] = float((lam[0] + delta) / (lam[-1] + delta))
        k["bound"] = float(lam[1] / lam[n - 2]) if n >= 3 else math.nan
        try:
            measure = placement_measure(theta) if n >= 3 else math.nan
        except NumericalError:
            measure = math.nan
        row = [t]
        for name in KAPPA_COLUMNS:
            row += [k[name], _db(k[name])]
        row.append(measure)
        return row


def cmd_cond_cdf(cfg, seed, threads):
    sec = cfg["cond_cdf"]
    job = CondCdfJob(
        channel=_channel_config(cfg),
        trials=_positive("trials", sec.get("trials", 1000), allow_zero=True),
        rzf_snr_db=sec.get("rzf_snr_db", 20.0),
        tau=_positive("tau", sec.get("tau", DEFAULT_TAU)),
        candidates=_positive("candidates", sec.get("candidates", DEFAULT_CANDIDATES)),
        schulz=_schulz_config(sec),
        seed=seed,
    )
    rows = _parallel_map(job.trial, range(job.trials), threads)
    return to_csv(cond_cdf_header(), rows)


# -- ser-sweep ---------------------------------------------------------------

SER_HEADER = ("model", "precoder", "inversion_method", "iteration_budget", "snr_db",
              "symbols", "errors", "ser", "seed")


def _parse_budget(text):
    if text.lower() in ("converged", "none"):
        return None
    try:
        b = int(text)
    except ValueError:
        raise ConfigError(f"iteration budget {text!r} is neither an integer nor 'converged'") from None
    return _positive("iteration budget", b, allow_zero=True)


def _parse_snrs(text):
    out = []
    for t in _split_list(text):
        try:
            out.append(float(t))
        except ValueError:
            raise ConfigError(f"snr_db entry {t!r} is not a number") from None
    if not out:
        raise ConfigError("snr_db grid is empty")
    return out


def cmd_ser_sweep(cfg, seed, threads):
    sec = cfg["ser_sweep"]
    channel = _channel_config(cfg)
    precoders = _split_list(sec.get("precoders", "zf,rzf"))
    methods = _split_list(sec.get("methods", "oracle"))
    budgets = [_parse_budget(b) for b in _split_list(sec.get("iteration_budgets", "converged"))]
    snrs = _parse_snrs(sec.get("snr_db", "0,10,20,30"))
    symbols = _positive("symbols", sec.get("symbols", 200000))
    for m in methods:
        if m not in METHODS:
            raise ConfigError(f"unknown inversion method {m!r}; choose from {METHODS}")
    jobs = []
    for p in precoders:
        for m in methods:
            # the oracle has no iteration budget
            for b in ([None] if m == "oracle" else budgets):
                try:
                    pc = PrecoderConfig(
                        precoder=p, method=m, fixed_iterations=b,
                        residual_tolerance=sec.get("residual_tolerance", 1e-9),
                        max_iterations=sec.get("max_iterations", 200),
                        tau=sec.get("tau", DEFAULT_TAU),
                        candidates=sec.get("candidates", DEFAULT_CANDIDATES),
                        qam_order=sec.get("qam_order", 16),
                        realizations=sec.get("realizations", 200),
                    )
                    pc.schulz  # validates the stopping rule
                except ValueError as exc:
                    raise ConfigError(str(exc)) from None
                jobs.append(pc)

    def run(pc):
        return pc, ser_experiment(channel, pc, snrs, symbols, seed)

    rows = []
    for pc, results in _parallel_map(run, jobs, threads):
        budget = "converged" if pc.fixed_iterations is None else pc.fixed_iterations
        for r in results:
            rows.append([channel.model.value, pc.precoder, pc.method, budget, r.snr_db,
                         r.symbols_sent, r.symbol_errors, r.ser, seed])
    return to_csv(SER_HEADER, rows)


# -- invert / cost / gen-channel ----------------------------------------------


def cmd_invert(cfg, seed, matrix_path, method=None, matrix_out=None):
    sec = dict(cfg["invert"])
    method = method or sec.get("method", "pia")
    if method not in METHODS:
        raise ConfigError(f"unknown inversion method {method!r}; choose from {METHODS}")
    schulz = _schulz_config(sec)
    a = read_matrix(matrix_path, hermitian=True)
    rep = invert(a, method, config=schulz, tau=_positive("tau", sec.get("tau", DEFAULT_TAU)),
                 candidates=_positive("candidates", sec.get("candidates", DEFAULT_CANDIDATES)),
                 seed=seed)
    last = rep.residual_trace[-1] if len(rep.residual_trace) else 0.0
    if schulz.fixed_iterations is None and not last <= schulz.residual_tolerance:
        raise NonConvergenceError(
            f"residual {last:.3e} above tolerance {schulz.residual_tolerance:g} "
            f"after {rep.iterations} iterations")
    report = rep.to_dict()
    report.update(n=int(a.shape[0]), seed=seed, requested_method=method)
    if "candidate_residuals" in rep.details:
        report["candidate_residuals"] = rep.details["candidate_residuals"]
    if matrix_out is not None:
        write_matrix(matrix_out, rep.inverse)
    return to_json(report)


def cmd_cost(cfg, overrides):
    sec = {**cfg["cost"], **{k: v for k, v in overrides.items() if v is not None}}
    try:
        n, m = sec["N"], sec["M"]
    except KeyError as exc:
        raise ConfigError(f"cost needs {exc.args[0]} (flag or [cost] key)") from None
    try:
        rep = cost_report(n, m, sec.get("tau0", 1), sec.get("tauN1", 1), sec.get("iterations", 0))
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    return to_json(rep.to_dict())


def cmd_gen_channel(cfg, seed, out):
    if out is None:
        raise ConfigError("gen-channel needs --out for the matrix file")
    real = generate(_channel_config(cfg), seed)
    write_matrix(out, real.H)


# -- entry point ---------------------------------------------------------------


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="INI-style config file")
    common.add_argument("--out", help="output path (default: stdout)")
    common.add_argument("--threads", type=int, default=1, help="worker threads for trials")
    seeded = argparse.ArgumentParser(add_help=False, parents=[common])
    seeded.add_argument("--seed", type=int, required=True, help="master seed")

    p = argparse.ArgumentParser(prog="sr1r", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("cond-cdf", parents=[seeded], help="condition-number CDF trials (CSV)")
    sub.add_parser("ser-sweep", parents=[seeded], help="SER over SNR and iteration budgets (CSV)")
    inv = sub.add_parser("invert", parents=[seeded], help="invert one matrix file (JSON)")
    inv.add_argument("matrix", help="matrix file")
    inv.add_argument("--method", choices=METHODS)
    inv.add_argument("--matrix-out", help="write the computed inverse here")
    cost = sub.add_parser("cost", parents=[common], help="depth and flop estimates (JSON)")
    for name in ("N", "M", "tau0", "tauN1", "iterations"):
        cost.add_argument(f"--{name}", type=int)
    sub.add_parser("gen-channel", parents=[seeded], help="write one channel realization")
    return p


def _run(args):
    if args.threads < 1:
        raise ConfigError("--threads must be >= 1")
    cfg = load_config(args.config)
    if args.command == "cond-cdf":
        emit(cmd_cond_cdf(cfg, args.seed, args.threads), args.out)
    elif args.command == "ser-sweep":
        emit(cmd_ser_sweep(cfg, args.seed, args.threads), args.out)
    elif args.command == "invert":
        emit(cmd_invert(cfg, args.seed, args.matrix, args.method, args.matrix_out), args.out)
    elif args.command == "cost":
        emit(cmd_cost(cfg, {k: getattr(args, k) for k in ("N", "M", "tau0", "tauN1", "iterations")}),
             args.out)
    elif args.command == "gen-channel":
        cmd_gen_channel(cfg, args.seed, args.out)


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        _run(args)
    except NumericalError as exc:
        print(f"sr1r: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ValidationError, DimensionError, ValueError, OSError) as exc:
        print(f"sr1r: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
