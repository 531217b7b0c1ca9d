"""Batch command line for the k + f(k) toolkit.

Every subcommand validates its flags up front (exit 2 on usage problems),
computes deterministically, and writes CSV or JSON to stdout or
--output-path (exit 1 on computation errors). A plain key=value config file
supplies defaults; explicit flags win. No environment variables are consulted
here, so a logged command line reproduces its run byte for byte.
"""

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import constants as constants_mod
from . import energy as energy_mod
from . import mod3 as mod3_mod
from . import representability as rep_mod
from . import sieve as sieve_mod
from . import totient_dist as dist_mod

_FORMATS = ("csv", "json")
_DEFAULT_FORMAT = {
    "tabulate": "csv",
    "density": "csv",
    "multiplicity": "json",
    "mod3": "csv",
    "cdf": "csv",
    "bound": "json",
    "energy": "json",
    "proofset": "csv",
    "constants": "json",
    "diagnose": "json",
}

_CONVERTERS = {
    "x": int,
    "lo": int,
    "hi": int,
    "grid": int,
    "modulus": int,
    "threads": int,
    "segment_length": int,
    "r": int,
    "K": float,
    "y": float,
    "f": str,
    "c": str,
    "points": str,
    "parity": str,
    "set": str,
    "method": str,
    "output": str,
    "output_path": str,
    "cache": str,
}


class UsageError(Exception):
    pass


def _fmt(v: float) -> str:
    return f"{v:.6f}"


def load_user_function(path) -> sieve_mod.FunctionTable:
    """Read a CSV of rows k,f with k = 1..x contiguous and f >= 0."""
    values: list[int] = []
    with open(path, newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) < 2:
                raise ValueError(f"{path}: line {lineno}: expected two columns k,f")
            a, b = row[0].strip(), row[1].strip()
            if lineno == 1 and not a.lstrip("-").isdigit():
                continue  # header row
            try:
                k, v = int(a), int(b)
            except ValueError:
                raise ValueError(
                    f"{path}: line {lineno}: non-integer entry {row[:2]!r}"
                ) from None
            if k != len(values) + 1:
                raise ValueError(
                    f"{path}: line {lineno}: expected k={len(values) + 1}, found k={k}"
                )
            if v < 0:
                raise ValueError(
                    f"{path}: line {lineno}: f({k}) = {v} is negative; f must be >= 0"
                )
            values.append(v)
    if not values:
        raise ValueError(f"{path}: no data rows")
    return sieve_mod.table_from_values(values, lo=1, kind="user")


def _load_config_file(path) -> dict[str, str]:
    out: dict[str, str] = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise UsageError(f"{path}: line {lineno}: expected key=value")
        key, value = stripped.split("=", 1)
        out[key.strip().replace("-", "_")] = value.strip()
    return out


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kfk",
        description="Image statistics of k -> k + f(k) for arithmetic f",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p):
        p.add_argument("--output", choices=_FORMATS, default=None)
        p.add_argument("--output-path", dest="output_path", default=None)
        p.add_argument("--threads", type=int, default=None)
        p.add_argument("--segment-length", dest="segment_length", type=int, default=None)
        p.add_argument("--config", default=None)

    p = sub.add_parser("tabulate", help="tabulate one arithmetic function")
    p.add_argument("--f", default=None)
    p.add_argument("--x", type=int, default=None)
    p.add_argument("--lo", type=int, default=None)
    p.add_argument("--hi", type=int, default=None)
    p.add_argument("--cache", default=None, help="write a binary table cache here")
    common(p)

    p = sub.add_parser("density", help="coverage density of k + f(k) along a grid")
    p.add_argument("--f", default=None)
    p.add_argument("--x", type=int, default=None)
    p.add_argument("--points", default=None, help="comma list of grid values")
    common(p)

    p = sub.add_parser("multiplicity", help="multiplicity histogram of the image")
    p.add_argument("--f", default=None)
    p.add_argument("--x", type=int, default=None)
    common(p)

    p = sub.add_parser("mod3", help="residue counts of k + f(k)")
    p.add_argument("--x", type=int, default=None)
    p.add_argument("--modulus", type=int, default=None)
    p.add_argument("--f", default=None)
    common(p)

    p = sub.add_parser("cdf", help="empirical CDF of phi(k)/k")
    p.add_argument("--x", type=int, default=None)
    p.add_argument("--grid", type=int, default=None)
    common(p)

    p = sub.add_parser("bound", help="coverage bounds (mean-value or CDF integral)")
    p.add_argument("--method", choices=("mean", "integral"), default=None)
    p.add_argument("--f", default=None)
    p.add_argument("--x", type=int, default=None)
    p.add_argument("--c", default=None, help="growth constant, rational like 1 or 1/2")
    p.add_argument("--grid", type=int, default=None)
    common(p)

    p = sub.add_parser("energy", help="collision energy of n + f(n) on a set")
    p.add_argument("--x", type=int, default=None)
    p.add_argument("--f", default=None)
    p.add_argument("--set", choices=("range", "proofset"), default=None)
    p.add_argument("--K", type=float, default=None, help="window width multiplier")
    p.add_argument("--parity", choices=energy_mod.PARITIES, default=None)
    common(p)

    p = sub.add_parser("proofset", help="emit the structured set as CSV n,l,p")
    p.add_argument("--x", type=int, default=None)
    p.add_argument("--K", type=float, default=None)
    p.add_argument("--parity", choices=energy_mod.PARITIES, default=None)
    common(p)

    p = sub.add_parser("constants", help="print the constant catalog as JSON")
    common(p)

    p = sub.add_parser("diagnose", help="smooth-part diagnostic failure fractions")
    p.add_argument("--x", type=int, default=None)
    p.add_argument("--y", type=float, default=None)
    common(p)

    return parser


def _merge_config(args: argparse.Namespace) -> None:
    if getattr(args, "config", None):
        for key, raw in _load_config_file(args.config).items():
            if hasattr(args, key) and getattr(args, key) is None:
                conv = _CONVERTERS.get(key, str)
                try:
                    setattr(args, key, conv(raw))
                except ValueError:
                    raise UsageError(f"config key {key}: bad value {raw!r}") from None


def _need_x(args) -> int:
    if args.x is None:
        raise UsageError("--x is required")
    if args.x < 1:
        raise UsageError("x must be >= 1")
    return args.x


def _sieve_config(args) -> sieve_mod.SieveConfig:
    threads = args.threads if args.threads is not None else 1
    seglen = (
        args.segment_length
        if args.segment_length is not None
        else sieve_mod.DEFAULT_SEGMENT
    )
    if threads < 1:
        raise UsageError("threads must be >= 1")
    if seglen < 64:
        raise UsageError("segment-length must be >= 64")
    return sieve_mod.SieveConfig(segment_length=seglen, worker_count=threads)


def _resolve_f(args, streaming_ok: bool = True):
    """Return a kind name or a loaded user table for the --f flag."""
    f = args.f if args.f is not None else "tau"
    if f in sieve_mod.KINDS:
        if streaming_ok and f not in ("omega", "tau", "phi"):
            raise UsageError("--f must be omega, tau, phi, or a CSV path")
        return f
    candidate = Path(f)
    if candidate.suffix == ".csv" or candidate.exists():
        return load_user_function(f)
    raise UsageError(f"--f {f!r} is neither a known kind nor a readable CSV path")


def _emit(args, default_format: str, csv_payload, json_payload) -> None:
    fmt = args.output if args.output is not None else default_format
    buffer = io.StringIO()
    if fmt == "csv":
        header, rows = csv_payload
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
    else:
        json.dump(json_payload, buffer, indent=2)
        buffer.write("\n")
    text = buffer.getvalue()
    if args.output_path:
        Path(args.output_path).write_text(text)
    else:
        sys.stdout.write(text)


def _table_for(args, x: int, cfg) -> sieve_mod.FunctionTable:
    f = _resolve_f(args)
    if isinstance(f, sieve_mod.FunctionTable):
        if f.interval.hi <= x:
            raise ValueError(f"user table covers k < {f.interval.hi}, need k <= {x}")
        return f
    return sieve_mod.tabulate(f, (1, x + 1), cfg)


def _run_tabulate(args) -> None:
    cfg = _sieve_config(args)
    if args.f is None or args.f not in sieve_mod.KINDS:
        raise UsageError(f"--f must be one of {sieve_mod.KINDS}")
    if args.lo is not None or args.hi is not None:
        if args.lo is None or args.hi is None:
            raise UsageError("--lo and --hi must be given together")
        interval = (args.lo, args.hi)
    else:
        interval = (1, _need_x(args) + 1)
    try:
        table = sieve_mod.tabulate(args.f, interval, cfg)
    except (ValueError, OverflowError) as exc:
        if "interval" in str(exc):
            raise UsageError(str(exc)) from None
        raise
    if args.cache:
        sieve_mod.write_table(table, args.cache)
        return
    rows = (
        (n, int(v))
        for n, v in zip(range(table.interval.lo, table.interval.hi), table.values)
    )
    _emit(
        args,
        "csv",
        (("n", "value"), rows),
        {
            "kind": table.kind,
            "lo": table.interval.lo,
            "hi": table.interval.hi,
            "values": [int(v) for v in table.values],
        },
    )


def _density_grid(args, x: int) -> list[int]:
    if args.points:
        try:
            grid = sorted({int(tok) for tok in args.points.split(",") if tok.strip()})
        except ValueError:
            raise UsageError("--points must be a comma list of integers") from None
        if not grid:
            raise UsageError("--points is empty")
        if grid[-1] > x:
            raise UsageError("--points may not exceed --x")
        return grid
    grid = []
    g = 10
    while g < x:
        grid.append(g)
        g *= 10
    grid.append(x)
    return grid


def _run_density(args) -> None:
    x = _need_x(args)
    cfg = _sieve_config(args)
    f = _resolve_f(args)
    points = rep_mod.density_sweep(f, _density_grid(args, x), cfg)
    rows = [
        (pt.x, pt.f_kind, pt.n_plus, _fmt(pt.n_plus / pt.x)) for pt in points
    ]
    _emit(
        args,
        "csv",
        (("x", "f", "n_plus", "density"), rows),
        [
            {"x": pt.x, "f": pt.f_kind, "n_plus": pt.n_plus, "density": pt.n_plus / pt.x}
            for pt in points
        ],
    )


def _run_multiplicity(args) -> None:
    x = _need_x(args)
    cfg = _sieve_config(args)
    report = rep_mod.count_image(_table_for(args, x, cfg), x)
    payload = {
        "x": report.x,
        "f": report.f_kind,
        "n_plus": report.n_plus,
        "in_range_preimages": report.in_range_preimages,
        "histogram": {str(s): c for s, c in sorted(report.histogram.items())},
    }
    rows = [(s, c) for s, c in sorted(report.histogram.items())]
    _emit(args, "json", (("s", "count"), rows), payload)


def _run_mod3(args) -> None:
    x = _need_x(args)
    cfg = _sieve_config(args)
    modulus = args.modulus if args.modulus is not None else 3
    if modulus < 2:
        raise UsageError("modulus must be >= 2")
    f = _resolve_f(args)
    report = mod3_mod.residue_counts(x, modulus, f, cfg)
    if report.t_split is not None:
        k_count = mod3_mod.tau_nonzero_mod3_count(x, cfg)
        header = ("x", "r0", "r1", "r2", "T0", "T1", "T2", "K", "density0")
        row = (
            x,
            *report.counts,
            *report.t_split,
            k_count,
            _fmt(report.counts[0] / x),
        )
        payload = {
            "x": x,
            "modulus": 3,
            "counts": list(report.counts),
            "t_split": list(report.t_split),
            "k_count": k_count,
            "density0": report.counts[0] / x,
        }
    else:
        header = ("x", *(f"r{i}" for i in range(modulus)))
        row = (x, *report.counts)
        payload = {"x": x, "modulus": modulus, "counts": list(report.counts)}
    _emit(args, "csv", (header, [row]), payload)


def _run_cdf(args) -> None:
    x = _need_x(args)
    cfg = _sieve_config(args)
    grid = args.grid if args.grid is not None else dist_mod.DEFAULT_GRID
    if grid < 1:
        raise UsageError("grid must be >= 1")
    cdf = dist_mod.empirical_cdf(x, grid, cfg)
    rows = [
        (_fmt(float(lam)), _fmt(c / x)) for lam, c in zip(cdf.grid, cdf.counts)
    ]
    payload = {
        "x": x,
        "grid": [float(l) for l in cdf.grid],
        "phi_x": [c / x for c in cdf.counts],
    }
    _emit(args, "csv", (("lambda", "phi_x"), rows), payload)


def _run_bound(args) -> None:
    x = _need_x(args)
    cfg = _sieve_config(args)
    method = args.method if args.method is not None else "mean"
    if method == "integral":
        grid = args.grid if args.grid is not None else dist_mod.DEFAULT_GRID
        if grid < 10:
            raise UsageError("grid must be >= 10 for the integral bound")
        ib = dist_mod.integral_bound(x, grid, cfg)
        payload = {
            "x": ib.x,
            "g": ib.grid_size,
            "lower": ib.lower,
            "upper": ib.upper,
            "bound": ib.bound,
        }
        rows = [(ib.x, ib.grid_size, _fmt(ib.lower), _fmt(ib.upper), _fmt(ib.bound))]
        _emit(args, "json", (("x", "g", "lower", "upper", "bound"), rows), payload)
        return
    try:
        c = Fraction(args.c) if args.c is not None else Fraction(1)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"--c {args.c!r} is not a rational number") from None
    check = rep_mod.nonrepresentable_lower_bound(_table_for(args, x, cfg), x, c)
    payload = {
        "x": check.x,
        "c": str(check.c),
        "sum_f": check.sum_f,
        "bound_exact": str(check.bound),
        "bound": float(check.bound),
        "actual": check.actual,
        "holds": check.holds,
    }
    rows = [
        (
            check.x,
            str(check.c),
            check.sum_f,
            _fmt(float(check.bound)),
            check.actual,
            check.holds,
        )
    ]
    _emit(
        args,
        "json",
        (("x", "c", "sum_f", "bound", "actual", "holds"), rows),
        payload,
    )


def _proof_spec(args, x: int) -> energy_mod.ProofSetSpec:
    width = args.K if args.K is not None else 2.0
    parity = args.parity if args.parity is not None else "any"
    try:
        return energy_mod.ProofSetSpec(x=x, width=width, parity=parity)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _run_energy(args) -> None:
    x = _need_x(args)
    cfg = _sieve_config(args)
    which = args.set if args.set is not None else "range"
    f = args.f if args.f is not None else "omega"
    if f not in ("omega", "tau", "phi"):
        raise UsageError("--f must be omega, tau, or phi")
    table = sieve_mod.tabulate(f, (1, x + 1), cfg)
    if which == "proofset":
        index_set = energy_mod.build_proof_set(_proof_spec(args, x), cfg).n
    else:
        index_set = np.arange(1, x + 1, dtype=np.int64)
    report = energy_mod.additive_energy(index_set, table)
    payload = {
        "x": x,
        "f": f,
        "set": which,
        "set_size": report.set_size,
        "energy": report.energy,
        "diagonal": report.diagonal,
        "off_diagonal": report.off_diagonal,
        "image_size": report.image_size,
        "cs_bound": report.cs_bound,
    }
    rows = [tuple(payload.values())]
    _emit(args, "json", (tuple(payload.keys()), rows), payload)


def _run_proofset(args) -> None:
    x = _need_x(args)
    cfg = _sieve_config(args)
    ps = energy_mod.build_proof_set(_proof_spec(args, x), cfg)
    rows = zip(ps.n.tolist(), ps.l.tolist(), ps.p.tolist())
    payload = {
        "x": x,
        "size": ps.size,
        "density": ps.density,
        "members": [
            {"n": int(n), "l": int(l), "p": int(p)}
            for n, l, p in zip(ps.n, ps.l, ps.p)
        ],
    }
    _emit(args, "csv", (("n", "l", "p"), rows), payload)


def _run_constants(args) -> None:
    cat = constants_mod.catalog().as_dict()
    payload = {name: float(f"{value:.15g}") for name, value in cat.items()}
    rows = [(name, f"{value:.15g}") for name, value in cat.items()]
    _emit(args, "json", (("name", "value"), rows), payload)


def _run_diagnose(args) -> None:
    x = _need_x(args)
    if x < 16:
        raise UsageError("x must be >= 16 for diagnostics")
    cfg = _sieve_config(args)
    diag = sieve_mod.smoothness_diagnostics(x, args.y, cfg)
    payload = {
        "x": diag.x,
        "y": diag.y,
        "smooth_part_large": diag.smooth_part_large,
        "phi_square_divisibility": diag.phi_square_divisibility,
        "gcd_not_smooth": diag.gcd_not_smooth,
        "large_prime_power": diag.large_prime_power,
        "smooth_shift_changed": diag.smooth_shift_changed,
        "reciprocal_sum_large": diag.reciprocal_sum_large,
    }
    rows = [tuple(payload.values())]
    _emit(args, "json", (tuple(payload.keys()), rows), payload)


_HANDLERS = {
    "tabulate": _run_tabulate,
    "density": _run_density,
    "multiplicity": _run_multiplicity,
    "mod3": _run_mod3,
    "cdf": _run_cdf,
    "bound": _run_bound,
    "energy": _run_energy,
    "proofset": _run_proofset,
    "constants": _run_constants,
    "diagnose": _run_diagnose,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        _merge_config(args)
        _HANDLERS[args.subcommand](args)
    except UsageError as exc:
        print(f"kfk: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OverflowError, OSError) as exc:
        print(f"kfk: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
