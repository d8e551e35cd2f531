"""Command-line frontend: states, measures, map checks and evolutions.

All randomness flows from --seed through per-restart substreams, so
repeated invocations with the same arguments produce byte-identical
output.  Exit codes: 0 success, 2 input error, 3 non-convergence under
--strict.
"""

import argparse
import json
import sys

import numpy as np

from . import dynamics, maps, measures, states


def _write_output(args, text):
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump_json(obj):
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _load_state(path):
    with open(path, encoding="utf-8") as fh:
        return states.state_from_json(json.load(fh))


def _load_choi(path):
    with open(path, encoding="utf-8") as fh:
        return maps.choi_from_json(json.load(fh))


def _fmt(value):
    if value is None:
        return "none"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _kv_line(pairs):
    return " ".join(f"{k}={_fmt(v)}" for k, v in pairs) + "\n"


# ---------------------------------------------------------------------------
# state subcommand
# ---------------------------------------------------------------------------


def _cmd_state(args):
    if args.action == "make":
        params = {}
        for key in ("p", "f"):
            val = getattr(args, key)
            if val is not None:
                params[key] = val
        for key in ("k", "d", "d1", "d2", "m", "rank"):
            val = getattr(args, key)
            if val is not None:
                params[key] = val
        params["seed"] = args.seed
        if args.family == "product":
            if not args.in1 or not args.in2:
                raise ValueError("product needs --in1 and --in2 state files")
            params = {"rho1": _load_state(args.in1), "rho2": _load_state(args.in2)}
        state = states.make_named(args.family, **params)
        _write_output(args, _dump_json(state.to_json()))
        return 0
    if args.action == "info":
        if not args.infile:
            raise ValueError("state info needs --in FILE")
        state = _load_state(args.infile)
        report = {
            "d1": state.d1,
            "d2": state.d2,
            "trace": float(np.trace(state.mat).real),
            "rank": state.rank(),
            "entropy_bits": states.von_neumann_entropy(state),
            "marginal_entropy_1": states.von_neumann_entropy(states.restrict(state, 1)),
            "marginal_entropy_2": states.von_neumann_entropy(states.restrict(state, 2)),
        }
        _write_output(args, _dump_json(report))
        return 0
    raise ValueError(f"unknown state action {args.action!r}")


# ---------------------------------------------------------------------------
# measure subcommand
# ---------------------------------------------------------------------------


def _cmd_measure(args):
    state = _load_state(args.infile)
    if args.which == "ppt":
        rep = measures.ppt_test(state, tol=args.tol)
        sys.stdout.write(
            _kv_line([("lambda_min", rep.lambda_min), ("verdict", rep.verdict)])
        )
        if args.out:
            _write_output(
                args,
                _dump_json(
                    {"lambda_min": rep.lambda_min, "verdict": rep.verdict}
                ),
            )
        return 0
    if args.which == "negativity":
        val = measures.negativity(state)
        sys.stdout.write(_kv_line([("negativity", val)]))
        if args.out:
            _write_output(args, _dump_json({"negativity": val}))
        return 0
    if args.which == "eof":
        rep = measures.eof_upper(
            state, K=args.K, restarts=args.restarts, iters=args.iters, seed=args.seed
        )
    elif args.which == "dcoef-sup":
        rep = measures.dcoef_sup(
            state, K=args.K, restarts=args.restarts, iters=args.iters, seed=args.seed
        )
    else:
        raise ValueError(f"unknown measure {args.which!r}")
    sys.stdout.write(_kv_line([("value", rep.value), ("converged", rep.converged)]))
    if args.out:
        _write_output(args, _dump_json(rep.to_json()))
    if args.strict and not rep.converged:
        sys.stderr.write("measure did not converge within budget (--strict)\n")
        return 3
    return 0


# ---------------------------------------------------------------------------
# map subcommand
# ---------------------------------------------------------------------------


def _get_choi(args):
    if args.catalog:
        params = {}
        if args.d is not None:
            params["d"] = args.d
        if args.lam is not None:
            params["lam"] = args.lam
        return maps.catalog(args.catalog, **params)
    if args.infile:
        return _load_choi(args.infile)
    raise ValueError("need --catalog NAME or --in CHOI_FILE")


def _cmd_map(args):
    choi = _get_choi(args)
    if args.action == "check":
        cp = maps.is_cp(choi, tol=args.tol)
        cocp = maps.is_co_cp(choi, tol=args.tol)
        block = maps.is_block_positive(
            choi, restarts=args.restarts, iters=args.iters, tol=args.tol,
            seed=args.seed,
        )
        dec = maps.is_decomposable(choi, max_iter=args.max_iter)
        verdict = "indeterminate" if dec.decomposable is None else dec.decomposable
        sys.stdout.write(
            _kv_line(
                [
                    ("block_positive", block.block_positive),
                    ("cp", cp.ok),
                    ("co_cp", cocp.ok),
                    ("decomposable", verdict),
                    ("cp_min_eig", cp.min_eig),
                    ("co_cp_min_eig", cocp.min_eig),
                    ("product_min", block.min_value),
                    ("residual", dec.residual),
                ]
            )
        )
        if args.out:
            _write_output(
                args,
                _dump_json(
                    {
                        "block_positive": block.block_positive,
                        "cp": cp.ok,
                        "co_cp": cocp.ok,
                        "decomposable": verdict if isinstance(verdict, bool) else None,
                        "cp_min_eig": cp.min_eig,
                        "co_cp_min_eig": cocp.min_eig,
                        "product_min": block.min_value,
                        "residual": dec.residual,
                        "iterations": dec.iterations,
                    }
                ),
            )
        return 0
    if args.action == "apply":
        if not args.state:
            raise ValueError("map apply needs --state FILE")
        state = _load_state(args.state)
        if state.dim != choi.d_in:
            raise ValueError(
                f"state dimension {state.dim} does not match map input {choi.d_in}"
            )
        out = maps.apply_map(choi, state.mat)
        payload = {
            "d1": choi.d_out,
            "d2": 1,
            "re": out.real.tolist(),
            "im": out.imag.tolist(),
        }
        _write_output(args, _dump_json(payload))
        return 0
    raise ValueError(f"unknown map action {args.action!r}")


# ---------------------------------------------------------------------------
# evolve subcommand
# ---------------------------------------------------------------------------


def _cmd_evolve(args):
    state = _load_state(args.infile)
    params = {"d": state.d1}
    if args.rate is not None:
        params["rate"] = args.rate
    if args.speed is not None:
        params["speed"] = args.speed
    if args.family == "glauber_flip":
        params["beta"] = args.beta if args.beta is not None else 1.0
        if args.rate is None:
            params["rate"] = 1.0
        if state.d1 != 2:
            raise ValueError("glauber_flip via the CLI assumes a qubit on leg 1")
        params["H"] = args.hz * np.diag([1.0, -1.0])
    family = dynamics.family_catalog(args.family, **params)
    if args.steps < 1:
        raise ValueError(f"steps must be >= 1, got {args.steps}")
    if args.t_max <= 0:
        raise ValueError(f"t-max must be > 0, got {args.t_max}")
    grid = np.linspace(0.0, args.t_max, args.steps + 1)
    wanted = {m.strip() for m in args.measures.split(",") if m.strip()}
    unknown = wanted - {"eof", "dcoef"}
    if unknown:
        raise ValueError(f"unknown evolve measures: {sorted(unknown)}")
    record = dynamics.evolve_track(
        state,
        family,
        grid,
        measure_eof="eof" in wanted,
        measure_dcoef="dcoef" in wanted,
        K=args.K,
        restarts=args.restarts,
        iters=args.iters,
        seed=args.seed,
    )
    sys.stdout.write(
        _kv_line([("first_negative_time", record.first_negative_time())])
    )
    if args.format == "csv":
        _write_output(args, record.to_csv())
    else:
        _write_output(args, _dump_json(record.to_json()))
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def _build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="global random seed")
    common.add_argument("--tol", type=float, default=1e-9, help="verdict tolerance")
    common.add_argument("--out", type=str, default=None, help="output file path")
    common.add_argument(
        "--format", choices=("json", "csv"), default="json", help="output format"
    )

    parser = argparse.ArgumentParser(
        prog="entkit",
        description="Bipartite entanglement and positive-map analysis toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_state = sub.add_parser("state", parents=[common], help="build or inspect states")
    p_state.add_argument("action", choices=("make", "info"))
    p_state.add_argument("--family", type=str, default=None)
    p_state.add_argument("--in", dest="infile", type=str, default=None)
    p_state.add_argument("--in1", type=str, default=None)
    p_state.add_argument("--in2", type=str, default=None)
    p_state.add_argument("--p", type=float, default=None)
    p_state.add_argument("--f", type=float, default=None)
    p_state.add_argument("--k", type=int, default=None)
    p_state.add_argument("--d", type=int, default=None)
    p_state.add_argument("--d1", type=int, default=None)
    p_state.add_argument("--d2", type=int, default=None)
    p_state.add_argument("--m", type=int, default=None)
    p_state.add_argument("--rank", type=int, default=None)
    p_state.set_defaults(func=_cmd_state)

    p_meas = sub.add_parser("measure", parents=[common], help="run a measure")
    p_meas.add_argument("which", choices=("ppt", "negativity", "eof", "dcoef-sup"))
    p_meas.add_argument("--in", dest="infile", type=str, required=True)
    p_meas.add_argument("--K", type=int, default=None)
    p_meas.add_argument("--restarts", type=int, default=32)
    p_meas.add_argument("--iters", type=int, default=60)
    p_meas.add_argument("--strict", action="store_true")
    p_meas.set_defaults(func=_cmd_measure)

    p_map = sub.add_parser("map", parents=[common], help="check or apply a map")
    p_map.add_argument("action", choices=("check", "apply"))
    p_map.add_argument("--catalog", type=str, default=None)
    p_map.add_argument("--in", dest="infile", type=str, default=None)
    p_map.add_argument("--state", type=str, default=None)
    p_map.add_argument("--d", type=int, default=None)
    p_map.add_argument("--lam", type=float, default=None)
    p_map.add_argument("--restarts", type=int, default=64)
    p_map.add_argument("--iters", type=int, default=200)
    p_map.add_argument("--max-iter", dest="max_iter", type=int, default=5000)
    p_map.set_defaults(func=_cmd_map)

    p_evo = sub.add_parser("evolve", parents=[common], help="track a map family")
    p_evo.add_argument("--in", dest="infile", type=str, required=True)
    p_evo.add_argument("--family", type=str, required=True)
    p_evo.add_argument("--rate", type=float, default=None)
    p_evo.add_argument("--speed", type=float, default=None)
    p_evo.add_argument("--beta", type=float, default=None)
    p_evo.add_argument("--hz", type=float, default=1.0)
    p_evo.add_argument("--t-max", dest="t_max", type=float, required=True)
    p_evo.add_argument("--steps", type=int, required=True)
    p_evo.add_argument("--measures", type=str, default="")
    p_evo.add_argument("--K", type=int, default=None)
    p_evo.add_argument("--restarts", type=int, default=8)
    p_evo.add_argument("--iters", type=int, default=40)
    p_evo.set_defaults(func=_cmd_evolve)
    return parser


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
