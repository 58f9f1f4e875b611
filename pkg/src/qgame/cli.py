"""Command line front end.

Exit status is 0 on success, 2 for invalid input and 1 when the
computation itself fails (for instance a constant game).
"""

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from . import eisert_sim, explorer, game_core, semidet, unitary_geom
from .errors import BoundaryGame, QGameError

DIGITS = 12


class InputError(ValueError):
    pass


def fmt(x):
    """Round to 12 significant digits, keeping the value a float."""
    x = float(x)
    if x == 0.0 or not math.isfinite(x):
        return 0.0 if x == 0.0 else x
    return float(f"{x:.{DIGITS}g}")


def _clean(obj):
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (float, np.floating)):
        return fmt(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    return obj


def dump_json(obj):
    return json.dumps(_clean(obj), indent=2) + "\n"


def dump_csv(rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    for row in rows:
        w.writerow([repr(fmt(v)) if isinstance(v, (float, np.floating)) else v for v in row])
    return buf.getvalue()


def _payoff(args):
    if getattr(args, "game", None):
        text = args.game
        try:
            with open(text) as fh:
                text = fh.read()
        except OSError:
            pass
        return game_core.PayoffMatrix.from_json(text)
    if args.payoff is None:
        raise InputError("a game is required: pass --payoff a,b,c,d or --game JSON")
    return game_core.PayoffMatrix.parse(args.payoff)


def _entanglement(args, required=True):
    if args.gamma is not None:
        return eisert_sim.Entanglement(args.gamma)
    if args.e is not None:
        return eisert_sim.Entanglement.from_e(args.e)
    if required:
        raise InputError("entanglement is required: pass --gamma or --e")
    return None


def _positions(ps):
    return [list(p) for p in sorted(ps)]


def cmd_classify(args, out):
    m = _payoff(args)
    cls = game_core.classify(m)
    g = game_core.to_gparams(m)
    cube = game_core.cube_projection(game_core.normalize(g))
    out.write(
        dump_json(
            {
                "payoff": [[m.a, m.b], [m.c, m.d]],
                "gparams": _gdict(g),
                "class": cls.to_dict(),
                "nash_equilibria": _positions(game_core.nash_equilibria(m)),
                "pareto_optima": _positions(game_core.pareto_optima(m)),
                "cube": {"face": cube.face, "u": cube.u, "v": cube.v, "edge": list(cube.edge)},
            }
        )
    )


def _gdict(g):
    return {"g0": g.g0, "gA": g.gA, "gB": g.gB, "gAB": g.gAB}


def cmd_gparams(args, out):
    if args.inverse:
        if args.g is not None:
            parts = [float(p) for p in args.g.split(",")]
            if len(parts) != 4:
                raise InputError("--g expects g0,gA,gB,gAB")
            g = game_core.GParams(*parts)
        else:
            obj = json.loads(sys.stdin.read() if args.stdin is None else args.stdin)
            obj = obj.get("gparams", obj)
            g = game_core.GParams(obj["g0"], obj["gA"], obj["gB"], obj["gAB"])
        m = g.to_payoff()
        out.write(dump_json({"payoff": [[m.a, m.b], [m.c, m.d]]}))
        return
    m = _payoff(args)
    g = game_core.to_gparams(m)
    res = {"gparams": _gdict(g)}
    if not m.degenerate:
        res["normalized"] = _gdict(game_core.normalize(g))
    out.write(dump_json(res))


def cmd_robinson(args, out):
    m = _payoff(args)
    out.write(game_core.robinson_graph(m).to_dot())


def cmd_extend(args, out):
    m = _payoff(args)
    ent = _entanglement(args)
    g = semidet.extended_payoff(m, ent.e)
    out.write(dump_csv(g.to_csv_rows()))


def cmd_transitions(args, out):
    m = _payoff(args)
    rep = semidet.transitions(m)
    res = rep.to_dict()
    res["closed_form_threshold"] = semidet.closed_form_threshold(m)
    out.write(dump_json(res))


def cmd_respond(args, out):
    m = _payoff(args)
    ent = _entanglement(args)
    vals = [float(v) for v in args.rb.split(",")]
    if len(vals) != 9:
        raise InputError("--rb expects 9 comma separated values")
    try:
        rB = unitary_geom.Rotation3(np.array(vals).reshape(3, 3)).matrix
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    branch = unitary_geom.CriticalBranch.parse(args.branch)
    t = unitary_geom.game_tensors(m, ent)
    aM = unitary_geom.a_matrix(rB, t, strict=False)
    rA = unitary_geom.critical_response(aM, branch)
    H, sig = unitary_geom.hessian(rA, aM)
    pa, pb = unitary_geom.so3_payoffs(rA, rB, t)
    out.write(
        dump_json(
            {
                "rotation": rA,
                "payoff": [pa, pb],
                "gradient_norm": float(np.linalg.norm(unitary_geom.gradient(rA, aM))),
                "hessian_signature": sig,
                "kind": unitary_geom.signature_kind(sig).value,
                "branch": str(branch),
            }
        )
    )


def cmd_cloud(args, out):
    m = _payoff(args)
    ent = _entanglement(args)
    branch = unitary_geom.CriticalBranch.parse(args.branch)
    pts = explorer.payoff_cloud(m, ent.gamma, args.samples, args.seed, branch)
    rows = [["payA", "payB", "theta1", "theta2", "theta3", "branch"]]
    for p in pts:
        rows.append([p.payA, p.payB, *p.theta, str(p.branch)])
    out.write(dump_csv(rows))


def cmd_atlas(args, out):
    if args.cube:
        rng = np.random.default_rng(args.seed)
        v = explorer.sample_sphere(rng, args.samples)
        ids = game_core.class_ids(*v.T)
        rows = [["face", "u", "v", "class_id"]]
        for vec, k in zip(v, ids):
            c = game_core.cube_projection(game_core.GParams(0.0, *vec))
            face = "|".join(c.edge) if c.edge else c.face
            rows.append([face, c.u, c.v, int(k)])
        out.write(dump_csv(rows))
        return
    rows = [["class_id", "label", "sample_count", "fraction"]]
    for r in explorer.atlas(args.samples, args.seed):
        rows.append([r.class_id, r.label, r.sample_count, float(r.fraction)])
    out.write(dump_csv(rows))


def cmd_equilibria(args, out):
    m = _payoff(args)
    ent = _entanglement(args)
    res = explorer.find_equilibria(m, ent.gamma, args.starts, args.seed)
    out.write(
        dump_json(
            {
                "gamma": ent.gamma,
                "e": ent.e,
                "fixed_points": [
                    {
                        "rA": p.rA,
                        "rB": p.rB,
                        "payA": p.payA,
                        "payB": p.payB,
                        "stable": p.stable,
                    }
                    for p in res.points
                ],
                "non_converged_starts": [k for k, _ in res.failures if isinstance(k, int)],
            }
        )
    )


def verify_suites(samples=200, seed=0):
    """Oracle equivalence of the three payoff paths on random inputs."""
    rng = np.random.default_rng(seed)
    worst = {"tensor": 0.0, "so3": 0.0, "semidet": 0.0}
    for _ in range(samples):
        m = game_core.PayoffMatrix(*rng.normal(size=4))
        ent = eisert_sim.Entanglement(float(rng.uniform(0, 1)))
        uA = eisert_sim.Su2Strategy.random(rng)
        uB = eisert_sim.Su2Strategy.random(rng)
        pa, _ = eisert_sim.simulate_payoff(ent, uA, uB, m)
        p = eisert_sim.build_payoff_tensor(ent, m)
        worst["tensor"] = max(worst["tensor"], abs(eisert_sim.chi_payoff(uA.chi(), uB.chi(), p) - pa))
        t = unitary_geom.game_tensors(m, ent)
        rA, rB = unitary_geom.su2_to_so3(uA), unitary_geom.su2_to_so3(uB)
        worst["so3"] = max(worst["so3"], abs(unitary_geom.so3_payoff_expanded(rA, rB, t) - pa))
        table = semidet.extended_payoff(m, ent.e).table
        for r in semidet.ORDER:
            for c in semidet.ORDER:
                q, _ = eisert_sim.simulate_payoff(ent, r.su2(), c.su2(), m)
                worst["semidet"] = max(worst["semidet"], abs(table[r, c] - q))
    limits = {"tensor": 1e-9, "so3": 1e-9, "semidet": 1e-10}
    return {k: (float(worst[k]), bool(worst[k] <= limits[k])) for k in worst}


def cmd_verify(args, out):
    res = verify_suites(args.samples, args.seed)
    ok = all(passed for _, passed in res.values())
    out.write(
        dump_json({k: {"max_error": err, "passed": passed} for k, (err, passed) in res.items()} | {"passed": ok})
    )
    return 0 if ok else 1


def _add_game(p):
    p.add_argument("--payoff", help="payoffs a,b,c,d")
    p.add_argument("--game", help='JSON {"payoff": [[a,b],[c,d]]} or a path to it')


def _add_ent(p):
    grp = p.add_mutually_exclusive_group()
    grp.add_argument("--gamma", type=float)
    grp.add_argument("--e", type=float)


def _add_out(p):
    p.add_argument("--out", default=None, help="output file (default stdout)")


def build_parser():
    parser = argparse.ArgumentParser(prog="qgame", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="class of a 2x2 symmetric game")
    _add_game(p)
    _add_out(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("gparams", help="G parameters, or payoffs with --inverse")
    _add_game(p)
    p.add_argument("--inverse", action="store_true")
    p.add_argument("--g", help="g0,gA,gB,gAB for --inverse (otherwise JSON on stdin)")
    p.set_defaults(func=cmd_gparams, stdin=None)
    _add_out(p)

    p = sub.add_parser("robinson", help="Robinson order graph as DOT")
    _add_game(p)
    _add_out(p)
    p.set_defaults(func=cmd_robinson)

    p = sub.add_parser("extend", help="extended 4x4 table as CSV")
    _add_game(p)
    _add_ent(p)
    _add_out(p)
    p.set_defaults(func=cmd_extend)

    p = sub.add_parser("transitions", help="entanglement thresholds as JSON")
    _add_game(p)
    _add_out(p)
    p.set_defaults(func=cmd_transitions)

    p = sub.add_parser("respond", help="critical response to B's rotation")
    _add_game(p)
    _add_ent(p)
    p.add_argument("--rb", required=True, help="B's rotation, 9 values row-major")
    p.add_argument("--branch", default="+,+")
    _add_out(p)
    p.set_defaults(func=cmd_respond)

    p = sub.add_parser("cloud", help="payoff cloud as CSV")
    _add_game(p)
    _add_ent(p)
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--branch", default="+,+")
    _add_out(p)
    p.set_defaults(func=cmd_cloud)

    p = sub.add_parser("atlas", help="class fractions over random games")
    p.add_argument("--samples", type=int, default=100000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cube", action="store_true", help="emit per-sample cube projections")
    _add_out(p)
    p.set_defaults(func=cmd_atlas)

    p = sub.add_parser("equilibria", help="fixed points of the response map")
    _add_game(p)
    _add_ent(p)
    p.add_argument("--starts", type=int, default=64)
    p.add_argument("--seed", type=int, default=0)
    _add_out(p)
    p.set_defaults(func=cmd_equilibria)

    p = sub.add_parser("verify", help="run the oracle equivalence checks")
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    _add_out(p)
    p.set_defaults(func=cmd_verify)
    return parser


def _check_ranges(args):
    for name in ("gamma", "e"):
        v = getattr(args, name, None)
        if v is not None and not 0.0 <= v <= 1.0:
            raise InputError(f"--{name} must lie in [0, 1]")
    for name in ("samples", "starts"):
        v = getattr(args, name, None)
        if v is not None and v < 1:
            raise InputError(f"--{name} must be at least 1")


def run(argv, stdout=None, stderr=None):
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    parser = build_parser()
    try:
        old_err, sys.stderr = sys.stderr, stderr
        try:
            args = parser.parse_args(argv)
        finally:
            sys.stderr = old_err
    except SystemExit as exc:
        return int(exc.code or 0)
    buf = io.StringIO()
    try:
        _check_ranges(args)
        code = args.func(args, buf) or 0
    except BoundaryGame as exc:
        stderr.write(dump_json({"error": "BoundaryGame", "message": str(exc), "adjacent": list(exc.adjacent)}))
        return 1
    except QGameError as exc:
        stderr.write(dump_json({"error": type(exc).__name__, "message": str(exc)}))
        return 1
    except (InputError, ValueError, KeyError, json.JSONDecodeError) as exc:
        stderr.write(f"error: {exc}\n")
        parser.print_usage(stderr)
        return 2
    text = buf.getvalue()
    if getattr(args, "out", None):
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    return code


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
