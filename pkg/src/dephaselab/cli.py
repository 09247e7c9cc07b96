"""Command-line sweeps emitting CSV rows plus a JSON run manifest.

Exit codes: 0 ok, 2 usage error, 3 internal invariant failure during a run,
4 violated robustness claim (chain or convergence check).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from concurrent.futures import ProcessPoolExecutor

from . import __version__, negativity, nonlocality, quantumness, states
from .channels import NoiseParams
from .metrology import qfi_bare_closed, qfi_transversal_closed

CSV_FIELDS = (
    "n",
    "p",
    "alpha_x",
    "alpha_y",
    "alpha_z",
    "epsilon",
    "visibility",
    "quantity",
    "method",
    "variant",
    "value",
)

DEFAULT_TOLERANCES = {
    "tol_oracle": 1e-8,  # closed form vs brute force
    "tol_chain": 1e-9,  # negativity chain slack
    "tol_qs_chain": 2e-3,  # quantumness chain slack (optimizer noise)
    "tol_monotone": 1e-12,  # float slack for monotone-in-n checks
}


class InternalCheckError(Exception):
    pass


class ClaimViolation(Exception):
    pass


def parse_grid(text: str) -> list[float]:
    """`start:end:step` inclusive of both ends within half a step, or a comma list."""
    if ":" in text:
        start, end, step = (float(part) for part in text.split(":"))
        if step <= 0:
            raise ValueError("grid step must be positive")
        values = []
        k = 0
        while True:
            value = start + k * step
            if not value < end + step / 2.0:
                break
            values.append(min(value, end))
            k += 1
        return values
    return [float(part) for part in text.split(",") if part.strip()]


def parse_int_list(text: str) -> list[int]:
    return [int(part) for part in text.split(",") if part.strip()]


def _fmt(value) -> str:
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def _row(n, p, params: NoiseParams, visibility, quantity, method, variant, value):
    return {
        "n": n,
        "p": p,
        "alpha_x": params.alpha_x,
        "alpha_y": params.alpha_y,
        "alpha_z": params.alpha_z,
        "epsilon": params.dephasing_deviation,
        "visibility": visibility,
        "quantity": quantity,
        "method": method,
        "variant": variant,
        "value": value,
    }


def _emit(rows, manifest, output):
    rows = sorted(
        rows,
        key=lambda r: (r["n"], r["p"], r["quantity"], r["variant"], r["method"]),
    )
    lines = [",".join(CSV_FIELDS)]
    for row in rows:
        lines.append(",".join(_fmt(row[field]) for field in CSV_FIELDS))
    text = "\n".join(lines) + "\n"
    if output:
        with open(output, "w") as fh:
            fh.write(text)
        with open(output + ".manifest.json", "w") as fh:
            json.dump(manifest, fh, indent=2, sort_keys=True)
            fh.write("\n")
    else:
        sys.stdout.write(text)
        sys.stderr.write(json.dumps(manifest, sort_keys=True) + "\n")


def _manifest(args, config, seconds):
    return {
        "tool": "dephaselab",
        "version": __version__,
        "command": args.command,
        "config": config,
        "tolerances": {
            key: getattr(args, key) for key in DEFAULT_TOLERANCES
        },
        "wall_clock_seconds": seconds,
    }


def _pmap(fn, items, workers: int):
    if workers <= 1:
        return [fn(item) for item in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _noise_from_args(args) -> "function":
    if args.epsilon is not None:
        return lambda p: NoiseParams.from_deviation(p, args.epsilon)
    total = args.alpha_x + args.alpha_y + args.alpha_z
    if abs(total - 1.0) > 1e-12:
        raise InternalCheckError(f"axis weights sum to {total}, not 1")
    return lambda p: NoiseParams(p, args.alpha_x, args.alpha_y, args.alpha_z)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def _neg_point(task):
    n, p, ax, ay, az = task
    params = NoiseParams(p, ax, ay, az)
    closed = negativity.negativity_closed_form(n, params)
    brute = None
    if n <= 8:
        brute = negativity.transversal_ghz_negativity_bruteforce(n, params)
    bare = None
    if az == 1.0:
        bare = (1.0 - p) ** n
    return n, p, closed, brute, bare


def cmd_negativity_sweep(args) -> int:
    make_params = _noise_from_args(args)
    tasks = []
    for n in parse_int_list(args.n):
        for p in parse_grid(args.p_grid):
            params = make_params(p)
            tasks.append((n, p, params.alpha_x, params.alpha_y, params.alpha_z))
    start = time.perf_counter()
    rows = []
    for n, p, closed, brute, bare in _pmap(_neg_point, tasks, args.workers):
        params = make_params(p)
        rows.append(_row(n, p, params, 1.0, "negativity", "closed_form", "transversal", closed))
        if brute is not None:
            if abs(closed - brute) > args.tol_oracle:
                raise InternalCheckError(
                    f"closed form {closed!r} vs brute force {brute!r} at n={n}, p={p}"
                )
            rows.append(_row(n, p, params, 1.0, "negativity", "brute_force", "transversal", brute))
        if bare is not None:
            rows.append(_row(n, p, params, 1.0, "negativity", "closed_form", "bare", bare))
    manifest = _manifest(args, {"n": args.n, "p_grid": args.p_grid}, time.perf_counter() - start)
    _emit(rows, manifest, args.output)
    return 0


def cmd_fisher_sweep(args) -> int:
    params = NoiseParams.dephasing(0.0)
    start = time.perf_counter()
    rows = []
    for n in parse_int_list(args.n):
        for p in parse_grid(args.p_grid):
            p_params = NoiseParams.dephasing(p)
            bare = math.sqrt(qfi_bare_closed(n, p).value / 4.0)
            trans = math.sqrt(qfi_transversal_closed(n, p).value / 4.0)
            rows.append(_row(n, p, p_params, 1.0, "qfi", "closed_form", "bare", bare))
            rows.append(_row(n, p, p_params, 1.0, "qfi", "closed_form", "transversal", trans))
            rows.append(
                _row(n, p, p_params, 1.0, "qfi", "closed_form", "separable_limit", math.sqrt(n))
            )
    manifest = _manifest(args, {"n": args.n, "p_grid": args.p_grid}, time.perf_counter() - start)
    _emit(rows, manifest, args.output)
    return 0


def _mk_point(task):
    from .channels import dephasing_channel

    n, p, variant = task
    if variant == "transversal":
        rho = dephasing_channel(states.ghz_transversal(n), p)
    else:
        rho = dephasing_channel(states.ghz(n), p)
    return n, p, variant, nonlocality.mk_quantum_value(rho)


def cmd_mk_sweep(args) -> int:
    params = NoiseParams.dephasing(0.0)
    tasks = []
    for n in parse_int_list(args.n):
        for p in parse_grid(args.p_grid):
            tasks.append((n, p, "transversal"))
            tasks.append((n, p, "bare"))
    start = time.perf_counter()
    rows = []
    for n, p, variant, beta in _pmap(_mk_point, tasks, args.workers):
        p_params = NoiseParams.dephasing(p)
        beta_nl = nonlocality.mk_algebraic_max(n)
        rows.append(_row(n, p, p_params, 1.0, "mk_beta", "optimized", variant, beta))
        rows.append(
            _row(
                n, p, p_params, 1.0, "p_success", "optimized", variant,
                nonlocality.success_probability(min(beta, beta_nl), beta_nl),
            )
        )
        if variant == "transversal":
            rows.append(
                _row(
                    n, p, p_params, 1.0, "p_success", "closed_form", "classical_ceiling",
                    nonlocality.classical_ceiling(beta_nl),
                )
            )
    manifest = _manifest(args, {"n": args.n, "p_grid": args.p_grid}, time.perf_counter() - start)
    _emit(rows, manifest, args.output)
    return 0


def cmd_quantumness_chain(args) -> int:
    params = NoiseParams.dephasing(0.0)
    start = time.perf_counter()
    rows = []
    for p in parse_grid(args.p_grid):
        chain = quantumness.qs_ordering_chain(args.n_max, p)
        p_params = NoiseParams.dephasing(p)
        for n, value in zip(range(2, args.n_max + 1), chain):
            rows.append(_row(n, p, p_params, 1.0, "qs", "optimized", "transversal", value))
        if not negativity.is_non_decreasing(chain, slack=args.tol_qs_chain):
            manifest = _manifest(args, {"n_max": args.n_max}, time.perf_counter() - start)
            _emit(rows, manifest, args.output)
            raise ClaimViolation(f"quantumness chain decreases at p={p}: {chain}")
    manifest = _manifest(args, {"n_max": args.n_max, "p_grid": args.p_grid},
                         time.perf_counter() - start)
    _emit(rows, manifest, args.output)
    return 0


def cmd_chain_checks(args) -> int:
    start = time.perf_counter()
    rows = []
    violations = []
    p_values = parse_grid(args.p_grid)
    graphs = {
        "linear_cluster": states.Graph.path(args.n_max),
        "star": states.Graph.star(args.n_max),
    }
    if args.graph:
        with open(args.graph) as fh:
            graphs["custom_graph"] = states.Graph.from_edge_list(fh.read())
    for p in p_values:
        p_params = NoiseParams.dephasing(p)
        chain = negativity.transversal_ghz_chain(args.n_max, p)
        for n, value in zip(range(2, args.n_max + 1), chain):
            rows.append(_row(n, p, p_params, 1.0, "negativity", "brute_force",
                             "ghz_transversal", value))
        if not negativity.is_non_decreasing(chain, slack=args.tol_chain):
            violations.append(f"ghz_transversal at p={p}")
        bare = negativity.bare_ghz_chain(args.n_max, p)
        for n, value in zip(range(2, args.n_max + 1), bare):
            rows.append(_row(n, p, p_params, 1.0, "negativity", "brute_force",
                             "ghz_bare_informational", value))
        for name, graph in graphs.items():
            for visibility in parse_grid(args.visibility):
                chain = negativity.graph_chain(graph, p, visibility)
                for n, value in zip(range(2, graph.n + 1), chain):
                    rows.append(_row(n, p, p_params, visibility, "negativity",
                                     "brute_force", name, value))
                if not negativity.is_non_decreasing(chain, slack=args.tol_chain):
                    violations.append(f"{name} at p={p}, v={visibility}")
    manifest = _manifest(
        args,
        {"n_max": args.n_max, "p_grid": args.p_grid, "visibility": args.visibility},
        time.perf_counter() - start,
    )
    _emit(rows, manifest, args.output)
    if violations:
        raise ClaimViolation("; ".join(violations))
    return 0


def cmd_asymptotic_check(args) -> int:
    sizes = []
    n = 2
    while n <= args.n_max:
        sizes.append(n)
        n *= 2
    start = time.perf_counter()
    rows = []
    for p in parse_grid(args.p_grid):
        p_params = NoiseParams.dephasing(p)
        values = [negativity.negativity_dephasing(n, p) for n in sizes]
        gaps = [negativity.asymptotic_gap(n, p, exact=True) for n in sizes]
        for n, value in zip(sizes, values):
            rows.append(_row(n, p, p_params, 1.0, "negativity", "closed_form",
                             "dephasing", value))
        if not negativity.is_non_decreasing(values, slack=args.tol_monotone):
            raise ClaimViolation(f"negativity not monotone in n at p={p}")
        if not all(b < a for a, b in zip(gaps, gaps[1:])):
            raise ClaimViolation(f"gap not strictly shrinking at p={p}")
    manifest = _manifest(args, {"n_max": args.n_max, "p_grid": args.p_grid},
                         time.perf_counter() - start)
    _emit(rows, manifest, args.output)
    return 0


def cmd_basis_scan(args) -> int:
    start = time.perf_counter()
    rows = []
    angles_found = {}
    for n in parse_int_list(args.n):
        for p in parse_grid(args.p_grid):
            p_params = NoiseParams.dephasing(p)
            (theta, phi), best = negativity.basis_scan(n, p)
            angles_found[f"n={n},p={p}"] = [theta, phi]
            rows.append(_row(n, p, p_params, 1.0, "negativity", "optimized",
                             "optimized_basis", best))
            rows.append(_row(n, p, p_params, 1.0, "negativity", "closed_form",
                             "transversal_reference", negativity.negativity_dephasing(n, p)))
    manifest = _manifest(args, {"n": args.n, "p_grid": args.p_grid},
                         time.perf_counter() - start)
    manifest["best_angles"] = angles_found
    _emit(rows, manifest, args.output)
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dephaselab",
        description="Parameter sweeps for noisy multipartite-correlation robustness.",
    )
    parser.add_argument("--version", action="version", version=f"dephaselab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--output", default=None, help="CSV path (stdout if omitted)")
        sp.add_argument("--format", default="csv", choices=["csv"])
        sp.add_argument("--workers", type=int, default=1)
        for key, default in DEFAULT_TOLERANCES.items():
            sp.add_argument(f"--{key.replace('_', '-')}", dest=key, type=float, default=default)

    sp = sub.add_parser("negativity-sweep", help="closed-form and brute-force negativities")
    sp.add_argument("--n", default="5,50")
    sp.add_argument("--p-grid", default="0:1:0.05")
    sp.add_argument("--alpha-x", type=float, default=0.0)
    sp.add_argument("--alpha-y", type=float, default=0.0)
    sp.add_argument("--alpha-z", type=float, default=1.0)
    sp.add_argument("--epsilon", type=float, default=None,
                    help="deviation from dephasing, split equally over X and Y")
    common(sp)
    sp.set_defaults(func=cmd_negativity_sweep)

    sp = sub.add_parser("fisher-sweep", help="sqrt(F/4) for bare and encoded probes")
    sp.add_argument("--n", default="5,10")
    sp.add_argument("--p-grid", default="0:1:0.05")
    common(sp)
    sp.set_defaults(func=cmd_fisher_sweep)

    sp = sub.add_parser("mk-sweep", help="Mermin-Klyshko values and CCP success")
    sp.add_argument("--n", default="5")
    sp.add_argument("--p-grid", default="0:1:0.05")
    common(sp)
    sp.set_defaults(func=cmd_mk_sweep)

    sp = sub.add_parser("quantumness-chain", help="relative entropy of quantumness chain")
    sp.add_argument("--n-max", type=int, default=3)
    sp.add_argument("--p-grid", default="0.2,0.5,0.8")
    common(sp)
    sp.set_defaults(func=cmd_quantumness_chain)

    sp = sub.add_parser("chain-checks", help="robustness ordering chains")
    sp.add_argument("--n-max", type=int, default=5)
    sp.add_argument("--p-grid", default="0.3,0.6")
    sp.add_argument("--visibility", default="1.0")
    sp.add_argument("--graph", default=None, help="edge-list file for a custom family")
    common(sp)
    sp.set_defaults(func=cmd_chain_checks)

    sp = sub.add_parser("asymptotic-check", help="large-n dephasing negativity limit")
    sp.add_argument("--n-max", type=int, default=1024)
    sp.add_argument("--p-grid", default="0.1:0.9:0.1")
    common(sp)
    sp.set_defaults(func=cmd_asymptotic_check)

    sp = sub.add_parser("basis-scan", help="optimality of the Hadamard encoding basis")
    sp.add_argument("--n", default="3")
    sp.add_argument("--p-grid", default="0.3,0.7")
    common(sp)
    sp.set_defaults(func=cmd_basis_scan)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 2
    try:
        return args.func(args)
    except ClaimViolation as exc:
        sys.stderr.write(f"claim violated: {exc}\n")
        return 4
    except InternalCheckError as exc:
        sys.stderr.write(f"internal check failed: {exc}\n")
        return 3
    except (ValueError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 3


if __name__ == "__main__":
    sys.exit(main())
