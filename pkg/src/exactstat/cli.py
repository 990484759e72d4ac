"""Command-line front end.

Temperatures are in grid-energy units with k_B = 1, so q = exp(-1/T).
Exact quantities (weights, microcanonical occupancies) are printed as
integers or unreduced ``M/W`` fractions; only temperature-dependent
quantities are floats.

Exit status: 0 on success, 1 on domain errors, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

from . import __version__
from .canonical import CanonicalContext, ThermoReport, chargeless_thermo, series_thermo
from .compound import load_compound
from .duality import canonical_duality_suite, grand_duality_check, micro_duality_suite
from .errors import BudgetExceeded, ConsistencyError, ConvergenceError
from .even_spaced import (
    bose_band_weight,
    fermi_band_weight,
    gaussian_partition_function,
    occupancy_ladder_numeric,
    unbounded_cutoff,
    unbounded_limit,
)
from .grand_canonical import GrandContext, grand_report
from .microcanonical import ChargelessWeightTable, WeightTable
from .numeric import q_of_T
from .oracle import BOSE, enumerate_chargeless_counts, enumerate_counts
from .spectrum import evenly_spaced_band, load_spectrum

CSV_HEADER = ["T", "q", "U", "VarU", "c", "S"]


class OracleMismatch(Exception):
    pass


# -- formatting --------------------------------------------------------------


def ratio_text(M, W) -> str:
    """Unreduced M/W, or 0 when there are no microstates."""
    if not W:
        return "0"
    if isinstance(M, Fraction):
        return str(M / W)
    return f"{M}/{W}"


def _emit(args, inputs: dict, result, text: str, rows: list[list] | None = None, header=None):
    out = sys.stdout
    if args.format == "json":
        json.dump({"command": args.verb, "inputs": inputs, "result": result}, out)
        out.write("\n")
    elif args.format == "csv":
        writer = csv.writer(out, lineterminator="\n")
        if rows is None:
            if isinstance(result, dict):
                writer.writerow(list(result))
                writer.writerow([_csv_cell(v) for v in result.values()])
            else:
                writer.writerow(["result"])
                writer.writerow([_csv_cell(result)])
        else:
            writer.writerow(header)
            writer.writerows(rows)
    else:
        out.write(text)
        if not text.endswith("\n"):
            out.write("\n")


def _csv_cell(v):
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, (list, dict)):
        return json.dumps(v)
    return v


def _report_text(rep: ThermoReport) -> str:
    lines = []
    for key, val in rep.to_json().items():
        if key == "occupancy":
            continue
        lines.append(f"{key} = {val!r}")
    for e, n in sorted(rep.occupancy.items()):
        lines.append(f"occupancy[{e}] = {n!r}")
    return "\n".join(lines)


def _report_rows(reports: list[ThermoReport], energies) -> tuple[list[str], list[list]]:
    header = CSV_HEADER + [f"occ_{e}" for e in energies]
    rows = []
    for rep in reports:
        row = [repr(rep.T), repr(rep.q), repr(rep.U), repr(rep.VarU), repr(rep.c), repr(rep.S)]
        row += [repr(rep.occupancy.get(e, 0.0)) for e in energies]
        rows.append(row)
    return header, rows


def _emit_reports(args, inputs, reports: list[ThermoReport], energies):
    if len(reports) == 1 and not _is_sweep(args):
        rep = reports[0]
        header, rows = _report_rows(reports, energies)
        _emit(args, inputs, rep.to_json(), _report_text(rep), rows, header)
        return
    header, rows = _report_rows(reports, energies)
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows([header] + rows)
    _emit(args, inputs, [r.to_json() for r in reports], buf.getvalue(), rows, header)


# -- temperature handling ----------------------------------------------------


def _is_sweep(args) -> bool:
    return getattr(args, "T_from", None) is not None


def _q_grid(parser, args) -> list[float] | None:
    """q values requested by --q, --T or the --T-from/--T-to/--T-steps sweep."""
    sweep = [args.T_from, args.T_to, args.T_steps]
    given = sum(x is not None for x in (args.q, args.T)) + (any(v is not None for v in sweep))
    if given > 1:
        parser.error("give only one of --q, --T, or a --T-from/--T-to/--T-steps sweep")
    if any(v is not None for v in sweep):
        if any(v is None for v in sweep):
            parser.error("a sweep needs --T-from, --T-to and --T-steps")
        a, b, k = sweep
        if not (0 < a < b) or k < 1:
            parser.error("sweep needs 0 < T-from < T-to and T-steps >= 1")
        Ts = [a] if k == 1 else [a + (b - a) * i / (k - 1) for i in range(k)]
        return [q_of_T(T) for T in Ts]
    if args.q is not None:
        if not 0 < args.q < 1:
            parser.error("--q must lie in (0, 1)")
        return [args.q]
    if args.T is not None:
        if not args.T > 0:
            parser.error("--T must be positive")
        return [q_of_T(args.T)]
    return None


def _temp_inputs(args) -> dict:
    out = {}
    for name in ("q", "T", "T_from", "T_to", "T_steps"):
        v = getattr(args, name, None)
        if v is not None:
            out[name] = v
    return out


# -- verbs -------------------------------------------------------------------


def cmd_weight(parser, args):
    s = load_spectrum(args.spectrum)
    table = WeightTable(s, args.stats)
    if args.method == "energy":
        W = table.weight_energy_recursion(args.N, args.U)
    else:
        W = table.weight(args.N, args.U)
    if args.oracle:
        W_or, _ = enumerate_counts(s, args.stats, args.N, args.U)
        if W_or != W:
            raise OracleMismatch(f"weight {W} but enumeration gives {W_or}")
    inputs = {"spectrum": args.spectrum, "stats": args.stats, "N": args.N, "U": args.U}
    _emit(args, inputs, W, str(W))


def cmd_occupancy(parser, args):
    s = load_spectrum(args.spectrum)
    table = WeightTable(s, args.stats)
    W = table.weight(args.N, args.U)
    energies = [args.level] if args.level is not None else list(s.energies)
    for e in energies:
        if e not in s:
            raise ValueError(f"{e} is not a level of the spectrum")
    M = {e: table.occupation_sum(args.N, args.U, e) for e in energies}
    if args.oracle:
        W_or, M_or = enumerate_counts(s, args.stats, args.N, args.U)
        for e in energies:
            if W_or != W or (W and M_or[e] != M[e]):
                raise OracleMismatch(
                    f"occupancy of {e}: {ratio_text(M[e], W)} but enumeration gives {ratio_text(M_or[e], W_or)}"
                )
    inputs = {"spectrum": args.spectrum, "stats": args.stats, "N": args.N, "U": args.U}
    if args.level is not None:
        inputs["level"] = args.level
        value = ratio_text(M[args.level], W)
        _emit(args, inputs, value, value)
        return
    result = [{"energy": e, "n": ratio_text(M[e], W)} for e in energies]
    text = "\n".join(f"{r['energy']} {r['n']}" for r in result)
    rows = [[r["energy"], r["n"]] for r in result]
    _emit(args, inputs, result, text, rows, ["energy", "n"])


def cmd_canonical(parser, args):
    s = load_spectrum(args.spectrum)
    ctx = CanonicalContext(s, args.stats)
    inputs = {"spectrum": args.spectrum, "stats": args.stats, "N": args.N, **_temp_inputs(args)}
    qs = _q_grid(parser, args)
    if args.polynomial or qs is None:
        Z = ctx.partition_function(args.N)
        _emit(args, inputs, Z.to_json(), Z.to_text(), [[e, str(v)] for e, v in Z.items()], ["exponent", "coefficient"])
        return
    reports = [ctx.thermodynamics(args.N, q0) for q0 in qs]
    _emit_reports(args, inputs, reports, s.energies)


def cmd_grand(parser, args):
    s = load_spectrum(args.spectrum)
    qs = _q_grid(parser, args)
    if qs is None:
        parser.error("grand needs --q, --T or a sweep")
    inputs = {"spectrum": args.spectrum, "stats": args.stats, "z": args.z, **_temp_inputs(args)}
    reports = [grand_report(GrandContext(s, args.stats, args.z, q0, args.series_cap)) for q0 in qs]
    _emit_reports(args, inputs, reports, s.energies)


def cmd_chargeless(parser, args):
    s = load_spectrum(args.spectrum)
    qs = _q_grid(parser, args)
    inputs = {"spectrum": args.spectrum, "stats": args.stats, **_temp_inputs(args)}
    if args.U is not None:
        if qs is not None:
            parser.error("-U (fixed energy) and a temperature are mutually exclusive")
        table = ChargelessWeightTable(s, args.stats)
        W = table.weight(args.U)
        occ = {e: table.occupation_sum(args.U, e) for e in s.energies}
        if args.oracle:
            W_or, M_or = enumerate_chargeless_counts(s, args.stats, args.U)
            if W_or != W or any(W and Fraction(M_or[e]) != Fraction(occ[e]) for e in occ):
                raise OracleMismatch(f"chargeless weight {W} but enumeration gives {W_or}")
        inputs["U"] = args.U
        result = {"W": W, "occupancy": [{"energy": e, "n": ratio_text(m, W)} for e, m in occ.items()]}
        text = "\n".join([f"W = {W}"] + [f"occupancy[{e}] = {ratio_text(m, W)}" for e, m in occ.items()])
        _emit(args, inputs, result, text)
        return
    if args.series:
        if args.cutoff is None:
            parser.error("--series needs --cutoff")
        Z = CanonicalContext(s, args.stats, args.cutoff).chargeless_partition_function()
        inputs["cutoff"] = args.cutoff
        _emit(args, inputs, Z.to_json(), Z.to_text(), [[e, str(v)] for e, v in Z.items()], ["exponent", "coefficient"])
        return
    if qs is None:
        parser.error("chargeless needs -U, --series, --q, --T or a sweep")
    ctx = CanonicalContext(s, args.stats)
    reports = [chargeless_thermo(ctx, q0, args.series_cap) for q0 in qs]
    _emit_reports(args, inputs, reports, s.energies)


def cmd_even_spaced(parser, args):
    qs = _q_grid(parser, args)
    inputs = {"stats": args.stats, "N": args.N, **_temp_inputs(args)}
    if args.unbounded:
        inputs["unbounded"] = True
        shift = args.N * (args.N - 1) // 2 if args.stats != BOSE else 0
        if args.cutoff is not None:
            cutoff = args.cutoff
        elif qs is not None:
            cutoff = unbounded_cutoff(args.N, max(qs)) + shift
        else:
            parser.error("--unbounded without a temperature needs --cutoff")
        inputs["cutoff"] = cutoff
        Z = unbounded_limit(args.N, args.stats, cutoff)
        if args.polynomial or qs is None:
            _emit(args, inputs, Z.to_json(), Z.to_text(), [[e, str(v)] for e, v in Z.items()], ["exponent", "coefficient"])
            return
        reports = []
        for q0 in qs:
            rep = series_thermo(Z, q0)
            rep.N = args.N
            reports.append(rep)
        _emit_reports(args, inputs, reports, [])
        return
    if args.B is None:
        parser.error("even-spaced needs -B (or --unbounded)")
    inputs["B"] = args.B
    if args.U is not None:
        if qs is not None:
            parser.error("-U and a temperature are mutually exclusive")
        inputs["U"] = args.U
        W = bose_band_weight(args.B, args.N, args.U) if args.stats == BOSE else fermi_band_weight(args.B, args.N, args.U)
        if args.oracle:
            W_gen = WeightTable(evenly_spaced_band(args.B), args.stats).weight(args.N, args.U)
            if W_gen != W:
                raise OracleMismatch(f"band weight {W} but generic engine gives {W_gen}")
        _emit(args, inputs, W, str(W))
        return
    Z = gaussian_partition_function(args.B, args.N, args.stats)
    if args.polynomial or qs is None:
        _emit(args, inputs, Z.to_json(), Z.to_text(), [[e, str(v)] for e, v in Z.items()], ["exponent", "coefficient"])
        return
    reports = []
    for q0 in qs:
        rep = series_thermo(Z, q0)
        rep.N = args.N
        rep.occupancy = dict(enumerate(occupancy_ladder_numeric(args.B, args.N, args.stats, q0)))
        reports.append(rep)
    _emit_reports(args, inputs, reports, list(range(args.B + 1)))


def _pair(text: str) -> tuple[int, int]:
    try:
        a, b = text.split(",")
        return int(a), int(b)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected N,U but got {text!r}") from None


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def cmd_compound(parser, args):
    cs = load_compound(args.descriptor)
    inputs = {"descriptor": args.descriptor, "mode": cs.mode}
    if cs.mode == "none":
        if not args.alloc:
            parser.error("mode 'none' needs one --alloc N,U per sub-system")
        totals = {"allocation": args.alloc}
        inputs["allocation"] = [list(a) for a in args.alloc]
    elif cs.mode == "energy":
        if args.particles is None:
            parser.error("mode 'energy' needs --particles N1,N2,...")
        totals = {"particles": args.particles, "U": args.U}
        inputs["particles"] = args.particles
    else:
        if args.N is None:
            parser.error("mode 'energy-and-particles' needs -N")
        totals = {"N": args.N, "U": args.U}
        inputs["N"] = args.N
    qs = _q_grid(parser, args)
    if qs is not None:
        if cs.mode == "none":
            parser.error("mode 'none' has no partition function")
        inputs.update(_temp_inputs(args))
        kw = {"particles": args.particles} if cs.mode == "energy" else {"N": args.N}
        reports = [cs.thermodynamics(q0, **kw) for q0 in qs]
        _emit_reports(args, inputs, reports, [])
        return
    if cs.mode != "none":
        if args.U is None:
            parser.error("-U is required without a temperature")
        inputs["U"] = args.U
    W = cs.weight(**totals)
    if args.level is not None:
        inputs["level"] = args.level
        value = ratio_text(cs.occupation_sum(args.level, **totals), W)
        _emit(args, inputs, value, value)
        return
    _emit(args, inputs, W, str(W))


def cmd_check_identities(parser, args):
    s = load_spectrum(args.spectrum)
    reports = micro_duality_suite(s, args.N_max, args.U_max)
    reports += canonical_duality_suite(s, args.N_max)
    if args.z is not None or args.q is not None:
        if args.z is None or args.q is None:
            parser.error("grand identities need both --z and --q")
        reports += grand_duality_check(s, args.z, args.q)
    inputs = {"spectrum": args.spectrum, "N_max": args.N_max, "U_max": args.U_max}
    if args.z is not None:
        inputs.update(z=args.z, q=args.q)
    payload = [r.to_json() for r in reports]
    failed = [r for r in reports if not r.passed]
    text = f"{len(reports) - len(failed)}/{len(reports)} identities hold"
    for r in failed:
        text += f"\nFAIL {r.name} {r.params}"
    rows = [[r.name, json.dumps(r.params), r.passed] for r in reports]
    _emit(args, inputs, payload, text, rows, ["identity", "params", "pass"])
    return 1 if failed else 0


def cmd_oracle(parser, args):
    s = load_spectrum(args.spectrum)
    inputs = {"spectrum": args.spectrum, "stats": args.stats, "U": args.U}
    if args.chargeless:
        W, M = enumerate_chargeless_counts(s, args.stats, args.U, args.budget)
    else:
        if args.N is None:
            parser.error("oracle needs -N (or --chargeless)")
        inputs["N"] = args.N
        W, M = enumerate_counts(s, args.stats, args.N, args.U, args.budget)
    if args.level is not None:
        if args.level not in s:
            raise ValueError(f"{args.level} is not a level of the spectrum")
        inputs["level"] = args.level
        value = ratio_text(M[args.level], W)
        _emit(args, inputs, value, value)
        return
    result = {"W": W, "occupancy": [{"energy": e, "n": ratio_text(m, W)} for e, m in M.items()]}
    text = "\n".join([f"W = {W}"] + [f"occupancy[{e}] = {ratio_text(m, W)}" for e, m in M.items()])
    _emit(args, inputs, result, text)


# -- parser ------------------------------------------------------------------


def _nonneg(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be a non-negative integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="exactstat",
        description="Exact statistics of non-interacting bosons and fermions. "
        "Temperatures are in grid-energy units with k_B = 1 (q = exp(-1/T)).",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="verb", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["text", "json", "csv"], default="text")

    spectrum_arg = argparse.ArgumentParser(add_help=False)
    spectrum_arg.add_argument("--spectrum", required=True, help="spectrum JSON file")

    stats = argparse.ArgumentParser(add_help=False)
    stats.add_argument("--stats", choices=["bose", "fermi"], required=True)

    temp = argparse.ArgumentParser(add_help=False)
    temp.add_argument("--q", type=float, help="q = exp(-1/T), in (0, 1)")
    temp.add_argument("--T", type=float, help="temperature in grid-energy units (k_B = 1)")
    temp.add_argument("--T-from", dest="T_from", type=float)
    temp.add_argument("--T-to", dest="T_to", type=float)
    temp.add_argument("--T-steps", dest="T_steps", type=int)

    p = sub.add_parser("weight", parents=[common, spectrum_arg, stats], help="microcanonical weight W(N, U)")
    p.add_argument("-N", type=_nonneg, required=True)
    p.add_argument("-U", type=_nonneg, required=True)
    p.add_argument("--method", choices=["particle", "energy"], default="particle")
    p.add_argument("--oracle", action="store_true", help="cross-check by enumeration")
    p.set_defaults(func=cmd_weight)

    p = sub.add_parser("occupancy", parents=[common, spectrum_arg, stats], help="microcanonical occupancies")
    p.add_argument("-N", type=_nonneg, required=True)
    p.add_argument("-U", type=_nonneg, required=True)
    p.add_argument("--level", type=int)
    p.add_argument("--oracle", action="store_true")
    p.set_defaults(func=cmd_occupancy)

    p = sub.add_parser("canonical", parents=[common, spectrum_arg, stats, temp], help="canonical ensemble")
    p.add_argument("-N", type=_nonneg, required=True)
    p.add_argument("--polynomial", action="store_true", help="print Z(N, q) instead of thermodynamics")
    p.set_defaults(func=cmd_canonical)

    p = sub.add_parser("grand", parents=[common, spectrum_arg, stats, temp], help="grand-canonical ensemble")
    p.add_argument("--z", type=float, required=True, help="fugacity (> 0)")
    p.add_argument("--series-cap", type=int, default=10_000)
    p.set_defaults(func=cmd_grand)

    p = sub.add_parser("chargeless", parents=[common, spectrum_arg, stats, temp], help="photon/phonon-like particles")
    p.add_argument("-U", type=_nonneg)
    p.add_argument("--series", action="store_true", help="print the truncated Z(q) product")
    p.add_argument("--cutoff", type=int)
    p.add_argument("--series-cap", type=int, default=10_000)
    p.add_argument("--oracle", action="store_true")
    p.set_defaults(func=cmd_chargeless)

    p = sub.add_parser("even-spaced", parents=[common, stats, temp], help="band of levels 0..B")
    p.add_argument("-B", type=_nonneg)
    p.add_argument("-N", type=_nonneg, required=True)
    p.add_argument("-U", type=_nonneg)
    p.add_argument("--unbounded", action="store_true", help="infinitely many levels (truncated series)")
    p.add_argument("--cutoff", type=int)
    p.add_argument("--polynomial", action="store_true")
    p.add_argument("--oracle", action="store_true")
    p.set_defaults(func=cmd_even_spaced)

    p = sub.add_parser("compound", parents=[common, temp], help="compound systems")
    p.add_argument("--descriptor", required=True, help="compound descriptor JSON")
    p.add_argument("--alloc", type=_pair, action="append", help="N,U for one sub-system (mode none)")
    p.add_argument("--particles", type=_int_list, help="N1,N2,... (mode energy)")
    p.add_argument("-N", type=_nonneg)
    p.add_argument("-U", type=_nonneg)
    p.add_argument("--level", type=int)
    p.set_defaults(func=cmd_compound)

    p = sub.add_parser("check-identities", parents=[spectrum_arg], help="boson/fermion duality checks")
    p.add_argument("--format", choices=["text", "json", "csv"], default="json")
    p.add_argument("--N-max", dest="N_max", type=_nonneg, default=4)
    p.add_argument("--U-max", dest="U_max", type=_nonneg, default=10)
    p.add_argument("--z", type=float)
    p.add_argument("--q", type=float)
    p.set_defaults(func=cmd_check_identities)

    p = sub.add_parser("oracle", parents=[common, spectrum_arg, stats], help="brute-force enumeration")
    p.add_argument("-N", type=_nonneg)
    p.add_argument("-U", type=_nonneg, required=True)
    p.add_argument("--level", type=int)
    p.add_argument("--chargeless", action="store_true")
    p.add_argument("--budget", type=int, default=10**8)
    p.set_defaults(func=cmd_oracle)
    return parser


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        status = args.func(parser, args)
    except SystemExit as exc:  # parser.error inside a verb
        return int(exc.code or 0)
    except OracleMismatch as exc:
        print(f"oracle mismatch: {exc}", file=sys.stderr)
        return 1
    except (ValueError, ArithmeticError, OSError, BudgetExceeded, ConsistencyError, ConvergenceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return status or 0


def main() -> None:
    sys.exit(run())

