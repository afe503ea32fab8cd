"""``ajscc`` command-line entry point.

Every subcommand writes CSV (default), JSON, or for ``encode``/``decode``
a bare value.  Numbers in CSV use 9 significant digits.  Errors go to
stderr as ``ERROR:<code>: message``; exit status is 2 for usage errors
and 1 for domain/configuration errors.

``--config FILE`` reads flat ``key=value`` lines (keys are the long
option names, with or without dashes) as defaults; explicit flags win.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

import numpy as np

from . import adb, cost, link, mapping, vcvs
from .errors import AjsccError, ConfigError

DEFAULT_SEED = 0x5EEDA15C


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return str(int(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".9g")
    return str(x)


def _int_list(s):
    return [int(v) for v in str(s).split(",") if v.strip()]


def _float_list(s):
    return [float(v) for v in str(s).split(",") if v.strip()]


def _seed(s):
    v = int(str(s), 0)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return v


def _emit(args, header, rows, records=None):
    """Write a table as CSV or JSON to ``--out`` or stdout."""
    if args.format == "json":
        recs = records if records is not None else [dict(zip(header, r)) for r in rows]
        text = json.dumps(recs, indent=2) + "\n"
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([fmt(v) for v in r])
        text = buf.getvalue()
    _write(args, text)


def _write(args, text):
    if args.out and args.out != "-":
        with open(args.out, "w", newline="") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


# -- mapping helpers ---------------------------------------------------------


def _mapping_from_args(args):
    if args.model == "adb":
        cfg = adb.AdbConfig(args.k, args.vref, args.vdd, args.vin_max or args.vref, args.vt_max)
        return cfg, cfg.mapping_params(args.half_offset)
    if args.delta_h is None or args.vr is None or args.levels is None:
        raise ConfigError(f"--model {args.model} needs --delta-h, --vr and --levels")
    p = mapping.MappingParams(
        args.delta_h,
        args.vr,
        args.levels,
        args.vin_max if args.vin_max is not None else args.levels * args.delta_h,
        args.vt_max,
        args.half_offset,
    )
    return None, p


def cmd_encode(args):
    cfg, p = _mapping_from_args(args)
    s = mapping.SensorSample(args.vh, args.vt)
    if args.model == "adb":
        enc = adb.adb_encode(s, cfg)
    elif args.model == "vcvs":
        enc = vcvs.vcvs_encode(s, vcvs.VcvsStackConfig.from_mapping(p))
    else:
        enc = mapping.encode_ideal(s, p)
    if args.format == "text":
        _write(args, fmt(enc.v_d) + "\n")
    elif args.format == "json":
        _write(args, json.dumps({"v_d": enc.v_d, "level": enc.level}) + "\n")
    else:
        _emit(args, ["v_d", "level"], [(enc.v_d, enc.level)])


def cmd_decode(args):
    _, p = _mapping_from_args(args)
    s = mapping.decode(args.vd, p, clip=args.clip)
    if args.format == "text":
        _write(args, f"{fmt(s.v_h)},{fmt(s.v_t)}\n")
    elif args.format == "json":
        _write(args, json.dumps({"v_h": s.v_h, "v_t": s.v_t}) + "\n")
    else:
        _emit(args, ["v_h", "v_t"], [(s.v_h, s.v_t)])


def cmd_adb_sim(args):
    cfg = adb.AdbConfig(args.k, args.vref, args.vdd, args.vin_max or args.vref, args.vt_max)
    v_h = np.linspace(0.0, cfg.v_in_max, args.steps)
    v_d, bits = adb.adb_encode_array(v_h, np.full_like(v_h, args.vt), cfg)
    q = adb.bits_to_quotient(bits)
    rows = [
        (h, args.vt, "".join(map(str, b)), int(l), d) for h, b, l, d in zip(v_h, bits, q, v_d)
    ]
    _emit(args, ["v_h", "v_t", "bits", "level", "v_d"], rows)


def cmd_vcvs_sim(args):
    cfg = vcvs.VcvsStackConfig.from_base(args.levels, args.delta_h, args.vr, args.base, args.vt_max)
    vh_hi = args.vh_max if args.vh_max is not None else args.base + args.levels * args.delta_h
    v_h = np.linspace(0.0, vh_hi, args.vh_steps)
    v_t = np.linspace(0.0, args.vt_max, args.vt_steps)
    H, T = np.meshgrid(v_h, v_t, indexing="ij")
    if args.only_levels:
        D = vcvs.partial_sum(H, _int_list(args.only_levels), cfg, T)
    else:
        D = vcvs.vcvs_encode_array(H, T, cfg)
    rows = list(zip(H.ravel(), T.ravel(), np.asarray(D).ravel()))
    _emit(args, ["v_h", "v_t", "v_d"], rows)


CONFIG_HEADER = [
    "k",
    "Max n",
    "Min V_REF",
    "Min Delta_H",
    "Min n",
    "Max V_REF",
    "Max Delta_H",
    "V_R",
]


def cmd_config_table(args):
    ks = _int_list(args.k) if args.k else list(range(1, 9))
    rows, recs = [], []
    for k in ks:
        r = adb.config_table(k, args.vdd, args.vin_max)
        vals = (r.k, r.max_n, r.min_v_ref, r.min_delta_h, r.min_n, r.max_v_ref, r.max_delta_h, r.v_r)
        rows.append(vals)
        recs.append(dict(zip(CONFIG_HEADER, vals)))
    _emit(args, CONFIG_HEADER, rows, recs)


def cmd_sweep(args):
    rows = link.mse_sweep(
        _int_list(args.levels), args.snr_db, args.trials, args.seed, workers=args.workers
    )
    _emit(
        args,
        ["L", "trials", "mse_x1", "mse_x2", "mse_sum"],
        [(r.levels, r.trials, r.mse_x1, r.mse_x2, r.mse_sum) for r in rows],
    )


def cmd_sdr(args):
    out = []
    csnr = _float_list(args.csnr_db)
    for s in _int_list(args.sensors):
        for r in link.sdr_vs_csnr(
            s, csnr, args.trials, args.seed, levels=args.levels, workers=args.workers
        ):
            out.append((r.csnr_db, r.sensors, r.sdr_db))
    _emit(args, ["csnr_db", "sensors", "sdr_db"], out)


BOM_HEADER = ["design", "k", "Max Levels", "#O", "#C", "#M", "#R", "estimate"]


def _designs(d):
    return list(cost.DESIGNS) if d == "both" else [d]


def cmd_bom(args):
    rows = []
    for d in _designs(args.design):
        for k in _int_list(args.k):
            b = cost.bom(d, k, extrapolate=args.extrapolate)
            rows.append(
                (d, k, 2**k, b.opamps, b.comparators, b.multiplexers, b.resistors, b.estimate)
            )
    _emit(args, BOM_HEADER, rows)


def cmd_power(args):
    if args.n_levels is not None:
        rep = cost.power_for_levels(args.design, args.n_levels, args.lib)
    else:
        rep = cost.power(args.design, args.k, args.lib, extrapolate=args.extrapolate)
    if args.format == "json":
        rec = {
            "design": rep.design,
            "lib": rep.lib,
            "levels": rep.levels,
            "total_mw": rep.total_mw,
            "mw_per_level": rep.mw_per_level,
            "estimate": rep.estimate,
            "per_subcircuit": {
                name: {"mw": mw, "percent": pct} for name, (mw, pct) in rep.per_subcircuit.items()
            },
        }
        _write(args, json.dumps(rec, indent=2) + "\n")
        return
    rows = [(name, mw, pct) for name, (mw, pct) in rep.per_subcircuit.items()]
    rows.append(("Total Circuit", rep.total_mw, 100.0 * sum(p for _, p in rep.per_subcircuit.values())))
    _emit(args, ["Subcircuit", "Power [mW]", "% of Total"], rows)


def cmd_compare(args):
    rows = cost.compare(_int_list(args.k))
    header = ["design", "lib", "k", "levels", "#O", "#C", "#M", "#R", "total_mw", "mw_per_level"]
    data = [
        (
            r.design,
            r.lib,
            r.k,
            r.levels,
            r.bom.opamps,
            r.bom.comparators,
            r.bom.multiplexers,
            r.bom.resistors,
            r.total_mw,
            r.mw_per_level,
        )
        for r in rows
    ]
    _emit(args, header, data)


# -- parser ------------------------------------------------------------------


def _common(p, formats=("csv", "json"), default="csv"):
    p.add_argument("--format", choices=formats, default=default)
    p.add_argument("--out", help="output file (default: stdout)")
    p.add_argument("--seed", type=_seed, default=DEFAULT_SEED, help="master seed (default 0x5EEDA15C)")
    p.add_argument("--config", help="key=value defaults file; explicit flags win")


def _mapping_opts(p):
    p.add_argument("--model", choices=("adb", "ideal", "vcvs"), default="adb")
    p.add_argument("--k", type=int, default=4, help="divider stages (adb model)")
    p.add_argument("--vref", type=float, default=3.0)
    p.add_argument("--vdd", type=float, default=5.0)
    p.add_argument("--vin-max", type=float, default=None, help="largest v_h (V)")
    p.add_argument("--vt-max", type=float, default=5.0)
    p.add_argument("--delta-h", type=float, help="level spacing (ideal/vcvs models)")
    p.add_argument("--vr", type=float, help="per-level span (ideal/vcvs models)")
    p.add_argument("--levels", type=int, help="level count (ideal/vcvs models)")
    p.add_argument(
        "--half-offset", action=argparse.BooleanOptionalAction, default=True,
        help="decode v_h at level midpoints (Fig. 4 mapping)",
    )


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="ajscc", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("encode", help="encode one (v_h, v_t) pair (Figs. 1 and 4)", description="encode one (v_h, v_t) pair (Figs. 1 and 4)")
    _mapping_opts(p)
    p.add_argument("--vh", type=float, required=True)
    p.add_argument("--vt", type=float, required=True)
    _common(p, ("text", "csv", "json"), "text")
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("decode", help="invert an accumulated length (Figs. 1 and 4)", description="invert an accumulated length (Figs. 1 and 4)")
    _mapping_opts(p)
    p.add_argument("--vd", type=float, required=True)
    p.add_argument("--clip", action="store_true", help="clip out-of-range v_d instead of failing")
    _common(p, ("text", "csv", "json"), "text")
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("adb-sim", help="divider-chain staircase over v_h (Fig. 6a)", description="divider-chain staircase over v_h (Fig. 6a)")
    p.add_argument("--k", type=int, default=4)
    p.add_argument("--vref", type=float, default=3.0)
    p.add_argument("--vdd", type=float, default=5.0)
    p.add_argument("--vin-max", type=float, default=None)
    p.add_argument("--vt", type=float, default=2.5)
    p.add_argument("--vt-max", type=float, default=5.0)
    p.add_argument("--steps", type=int, default=301)
    _common(p)
    p.set_defaults(func=cmd_adb_sim)

    p = sub.add_parser("vcvs-sim", help="switch-stack output surface over (v_h, v_t) (Fig. 3a)", description="switch-stack output surface over (v_h, v_t) (Fig. 3a)")
    p.add_argument("--levels", type=int, default=11)
    p.add_argument("--delta-h", type=float, default=0.3)
    p.add_argument("--vr", type=float, default=0.5)
    p.add_argument("--base", type=float, default=0.0, help="activation threshold of level 0 (V)")
    p.add_argument("--vt-max", type=float, default=5.0)
    p.add_argument("--vh-max", type=float, default=None)
    p.add_argument("--vh-steps", type=int, default=101)
    p.add_argument("--vt-steps", type=int, default=11)
    p.add_argument("--only-levels", help="comma list of level indices to sum, e.g. 2,3")
    _common(p)
    p.set_defaults(func=cmd_vcvs_sim)

    p = sub.add_parser("config-table", help="divider tuning ranges per stage count (Table 1)", description="divider tuning ranges per stage count (Table 1)")
    p.add_argument("--k", help="stage count or comma list (default 1..8)")
    p.add_argument("--vdd", type=float, default=5.0)
    p.add_argument("--vin-max", type=float, default=3.0)
    _common(p)
    p.set_defaults(func=cmd_config_table)

    p = sub.add_parser("sweep", help="link MSE versus level count (Fig. 3c)", description="link MSE versus level count (Fig. 3c)")
    p.add_argument("--levels", default="11,20,40,64,73,90,110")
    p.add_argument("--snr-db", type=float, default=-20.0)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--workers", type=int, default=1)
    _common(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("sdr", help="SDR versus CSNR for 1..S FDM sensors (Fig. 3b)", description="SDR versus CSNR for 1..S FDM sensors (Fig. 3b)")
    p.add_argument("--sensors", default="1,2,3")
    p.add_argument("--csnr-db", default="-36,-34,-32")
    p.add_argument("--levels", type=int, default=11)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--workers", type=int, default=1)
    _common(p)
    p.set_defaults(func=cmd_sdr)

    p = sub.add_parser("bom", help="component counts per design and stage count (Table 3)", description="component counts per design and stage count (Table 3)")
    p.add_argument("--design", choices=("adb", "vcvs", "both"), default="both")
    p.add_argument("--k", default="1,2,3,4,5,6,7")
    p.add_argument("--extrapolate", action="store_true", help="allow switch-stack k > 7 (estimate)")
    _common(p)
    p.set_defaults(func=cmd_bom)

    p = sub.add_parser("power", help="power breakdown of one encoder (Table 2, Fig. 6c)", description="power breakdown of one encoder (Table 2, Fig. 6c)")
    p.add_argument("--design", choices=cost.DESIGNS, default="adb")
    p.add_argument("--k", type=int, default=4)
    p.add_argument("--n-levels", type=int, default=None, help="arbitrary level count instead of --k")
    p.add_argument("--lib", choices=sorted(cost.LIBRARIES), default="standard")
    p.add_argument("--extrapolate", action="store_true")
    _common(p)
    p.set_defaults(func=cmd_power)

    p = sub.add_parser("compare", help="power and power per level of both designs (Fig. 6c)", description="power and power per level of both designs (Fig. 6c)")
    p.add_argument("--k", default="1,2,3,4,5,6,7")
    _common(p)
    p.set_defaults(func=cmd_compare)
    return ap


def _load_config(path, subparser):
    """Parse a key=value file into typed defaults for ``subparser``."""
    actions = {a.dest: a for a in subparser._actions if a.dest not in ("help", "config")}
    out = {}
    with open(path) as f:
        for lineno, raw in enumerate(f, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected key=value")
            key, val = (s.strip() for s in line.split("=", 1))
            dest = key.lstrip("-").replace("-", "_")
            if dest not in actions:
                raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
            act = actions[dest]
            if act.nargs == 0 or isinstance(act, argparse.BooleanOptionalAction):
                out[dest] = val.lower() in ("1", "true", "yes", "on")
            else:
                try:
                    out[dest] = act.type(val) if act.type else val
                except (TypeError, ValueError, argparse.ArgumentTypeError) as e:
                    raise UsageError(f"{path}:{lineno}: bad value for {key!r}: {e}") from None
                if act.choices and out[dest] not in act.choices:
                    raise UsageError(f"{path}:{lineno}: {key!r} must be one of {list(act.choices)}")
    return out


def _apply_config(parser, argv):
    """Install ``--config`` values as subcommand defaults before parsing,
    so a file can also supply otherwise required options."""
    argv = sys.argv[1:] if argv is None else list(argv)
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, rest = pre.parse_known_args(argv)
    choices = parser._subparsers._group_actions[0].choices
    command = next((a for a in rest if a in choices), None)
    if not known.config or command is None:
        return
    subparser = choices[command]
    values = _load_config(known.config, subparser)
    for act in subparser._actions:
        if act.dest in values:
            act.required = False
    subparser.set_defaults(**values)


def run(argv=None) -> int:
    """Parse ``argv`` and dispatch; returns the exit status."""
    parser = build_parser()
    try:
        _apply_config(parser, argv)
        args = parser.parse_args(argv)
        args.func(args)
    except SystemExit as e:  # --help
        return e.code or 0
    except UsageError as e:
        print(f"ERROR:usage: {e}", file=sys.stderr)
        return 2
    except AjsccError as e:
        print(f"ERROR:{e.code}: {e}", file=sys.stderr)
        return 1
    except OSError as e:
        print(f"ERROR:io: {e}", file=sys.stderr)
        return 1
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
