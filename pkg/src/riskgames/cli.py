"""Command-line frontend.

Subcommands: ``tensor`` (probability tensor as CSV), ``solve`` / ``nash``
(equilibria as JSON records), ``dominate`` (dominance scan / iterated
elimination), ``commit`` (M-round commit game equilibria) and ``simulate``
(Monte Carlo comparisons as CSV). Exit codes: 0 success, 1 invalid input,
2 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys

from . import rae2 as rae2mod
from .commit import commit_game, solve_commit
from .equilibrium import (
    Concept,
    EquilibriumResult,
    Kind,
    is_strictly_dominated,
    iesds,
    mixed_equilibria_2p,
    pure_equilibria,
)
from .errors import GameValidationError, NoInteriorRoot, NumericsError
from .game import MixedProfile, StochasticGame, expected_tensor
from .gamefile import load_game, save_game
from .simulate import (
    indifference_rows,
    param_seed,
    rae_nash_comparison_rows,
    sweep,
)
from .tensor import build_tensor

SIM_COLUMNS = ["param", "concept_a", "concept_b", "rounds", "wins", "ties", "proportion", "ci3"]


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise GameValidationError(message)


def _fmt(x, raw: bool):
    if isinstance(x, float):
        return repr(x) if raw else f"{x:.6g}"
    return x


def _num(x, raw: bool):
    return x if raw else float(f"{x:.6g}")


def _parse_params(pairs) -> dict[str, float]:
    out = {}
    for pair in pairs or []:
        name, sep, value = pair.partition("=")
        if not sep:
            raise GameValidationError(f"--param expects NAME=VALUE, got {pair!r}")
        try:
            out[name.strip()] = float(value)
        except ValueError:
            raise GameValidationError(f"--param value for {name!r} is not a number")
    return out


def _result_record(g: StochasticGame, r: EquilibriumResult, raw: bool) -> dict:
    if r.kind is Kind.PURE:
        profile = {g.names[i]: g.strategies[i].labels[a] for i, a in enumerate(r.profile)}
    else:
        profile = {
            g.names[i]: {
                label: _num(w, raw)
                for label, w in zip(g.strategies[i].labels, r.profile.weights[i])
            }
            for i in range(g.n_players)
        }
    record = {
        "concept": r.concept.value,
        "kind": r.kind.value,
        "profile": profile,
        "support": {
            g.names[i]: [g.strategies[i].labels[a] for a in sup]
            for i, sup in enumerate(r.support)
        },
        "values": {g.names[i]: _num(v, raw) for i, v in enumerate(r.values)},
    }
    if r.notes:
        record["notes"] = list(r.notes)
    return record


def _emit_records(g, results, raw, out):
    for r in results:
        out.write(json.dumps(_result_record(g, r, raw)) + "\n")


def _solve(g: StochasticGame, concept: str, kind: str, tuple_cap: int, err) -> list[EquilibriumResult]:
    if concept == "nash":
        vals = expected_tensor(g)
        label = Concept.NASH
    else:
        vals = build_tensor(g).values
        label = Concept.RAE2 if concept == "rae2" else Concept.RAE
    results: list[EquilibriumResult] = []
    if kind in ("pure", "all"):
        results.extend(pure_equilibria(vals, label))
    if kind in ("mixed", "all"):
        if concept == "rae2":
            if g.shape == (2, 2):
                try:
                    results.extend(rae2mod.rae2_mixed_2x2(g))
                except NoInteriorRoot as exc:
                    print(f"note: {exc}", file=err)
            else:
                print(
                    "note: mixed RAE2 solving is closed-form for 2x2 games only; skipped",
                    file=err,
                )
        elif g.n_players == 2:
            results.extend(mixed_equilibria_2p(vals[0], vals[1], label))
        else:
            print("note: mixed solving is limited to 2-player games; skipped", file=err)
    return results


def _cmd_tensor(args, out, err) -> int:
    g = load_game(args.game, _parse_params(args.param))
    t = build_tensor(g)
    writer = csv.writer(out)
    writer.writerow(["player", *g.names, "value"])
    for i in range(g.n_players):
        for s in g.pure_profiles():
            writer.writerow(
                [g.names[i], *g.profile_labels(s), _fmt(t.value(i, s), args.raw)]
            )
    return 0


def _cmd_solve(args, out, err) -> int:
    g = load_game(args.game, _parse_params(args.param))
    results = _solve(g, args.concept, args.kind, args.tuple_cap, err)
    _emit_records(g, results, args.raw, out)
    return 0


def _cmd_dominate(args, out, err) -> int:
    g = load_game(args.game, _parse_params(args.param))
    if args.eliminate:
        reduced, trace = iesds(g)
        doc = {
            "eliminations": [
                {"player": g.names[e.player], "strategy": e.strategy, "dominated_by": e.dominated_by}
                for e in trace
            ],
            "remaining": {
                reduced.names[i]: list(reduced.strategies[i].labels)
                for i in range(reduced.n_players)
            },
        }
    else:
        t = build_tensor(g)
        dominated = []
        for i in range(g.n_players):
            for s_i in range(g.shape[i]):
                hit, by = is_strictly_dominated(t, i, s_i)
                if hit:
                    dominated.append(
                        {
                            "player": g.names[i],
                            "strategy": g.strategies[i].labels[s_i],
                            "dominated_by": g.strategies[i].labels[by],
                        }
                    )
        doc = {"dominated": dominated}
    out.write(json.dumps(doc, indent=2) + "\n")
    return 0


def _cmd_commit(args, out, err) -> int:
    g = load_game(args.game, _parse_params(args.param))
    cg = commit_game(g, args.M, args.grid_step)
    results = solve_commit(cg, kind=args.kind)
    _emit_records(g, results, args.raw, out)
    return 0


def _cmd_roundtrip(args, out, err) -> int:
    g = load_game(args.game, _parse_params(args.param))
    out.write(json.dumps(save_game(g), indent=2) + "\n")
    return 0


def _parse_sweep(spec: str) -> tuple[str, list[float]]:
    name, sep, rng = spec.partition("=")
    if not sep:
        raise GameValidationError(f"--sweep expects NAME=LO:HI:STEP, got {spec!r}")
    try:
        lo, hi, step = (float(x) for x in rng.split(":"))
    except ValueError:
        raise GameValidationError(f"--sweep range must be LO:HI:STEP, got {rng!r}")
    if step <= 0 or hi < lo:
        raise GameValidationError("--sweep needs step > 0 and hi >= lo")
    values = []
    v = lo
    while v <= hi + 1e-12:
        values.append(round(v, 12))
        v += step
    return name.strip(), values


def _simulate_experiment(args, err):
    rounds = args.rounds

    def experiment(g: StochasticGame, value: float) -> list[dict]:
        seed = param_seed(args.seed, value)
        if args.experiment == "compare":
            return rae_nash_comparison_rows(
                g, rounds=rounds, seed=seed, player=args.player
            )
        if args.concept == "rae2":
            if g.shape != (2, 2):
                print("note: RAE2 indifference needs a 2x2 game; skipped", file=err)
                return []
            try:
                mixed = rae2mod.rae2_mixed_2x2(g)
            except NoInteriorRoot as exc:
                print(f"note: {exc}", file=err)
                return []
            if not mixed:
                return []
            return indifference_rows(
                g,
                rounds=rounds,
                seed=seed,
                responder=args.responder,
                profile=mixed[0].profile,
                label="RAE2-mixed",
            )
        return indifference_rows(
            g, rounds=rounds, seed=seed, responder=args.responder
        )

    return experiment


def _cmd_simulate(args, out, err) -> int:
    params = _parse_params(args.param)
    experiment = _simulate_experiment(args, err)
    if args.sweep:
        name, values = _parse_sweep(args.sweep)
        builder = lambda v: load_game(args.game, {**params, name: v})
        rows = sweep(builder, values, experiment)
    else:
        g = load_game(args.game, params)
        rows = [{"param": "", **row} for row in experiment(g, 0.0)]
    writer = csv.DictWriter(out, fieldnames=SIM_COLUMNS)
    writer.writeheader()
    for row in rows:
        row = {k: _fmt(v, args.raw) for k, v in row.items()}
        writer.writerow(row)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="riskgames", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("game", help="path to a .game file")
        p.add_argument(
            "--param",
            action="append",
            metavar="NAME=VALUE",
            help="bind a declared game parameter (repeatable)",
        )
        p.add_argument("--raw", action="store_true", help="full float precision")

    p = sub.add_parser("tensor", help="dump the best-payoff probability tensor as CSV")
    common(p)
    p.set_defaults(func=_cmd_tensor)

    for name, fixed_concept in (("solve", None), ("nash", "nash")):
        p = sub.add_parser(name, help="compute equilibria as JSON records")
        common(p)
        if fixed_concept is None:
            p.add_argument("--concept", choices=["nash", "rae", "rae2"], default="rae")
        else:
            p.set_defaults(concept=fixed_concept)
        p.add_argument("--kind", choices=["pure", "mixed", "all"], default="all")
        p.add_argument("--tuple-cap", type=int, default=rae2mod.DEFAULT_TUPLE_CAP)
        p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("dominate", help="scan for strictly dominated strategies")
    common(p)
    p.add_argument("--eliminate", action="store_true", help="run iterated elimination")
    p.set_defaults(func=_cmd_dominate)

    p = sub.add_parser("commit", help="solve the M-round commit game")
    common(p)
    p.add_argument("-M", type=int, required=True, help="number of committed rounds")
    p.add_argument("--grid-step", type=float, default=None)
    p.add_argument("--kind", choices=["pure", "mixed", "all"], default="all")
    p.set_defaults(func=_cmd_commit)

    p = sub.add_parser("export", help="serialize the loaded game back to JSON")
    common(p)
    p.set_defaults(func=_cmd_roundtrip)

    p = sub.add_parser("simulate", help="Monte Carlo comparisons as CSV")
    common(p)
    p.add_argument("--rounds", type=int, default=10**6)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument(
        "--experiment", choices=["compare", "indifference"], default="compare"
    )
    p.add_argument("--concept", choices=["rae", "rae2"], default="rae",
                   help="profile used by the indifference experiment")
    p.add_argument("--player", type=int, default=0, help="player compared in 'compare'")
    p.add_argument("--responder", type=int, default=1,
                   help="responding player in 'indifference'")
    p.add_argument("--sweep", metavar="NAME=LO:HI:STEP", default=None)
    p.set_defaults(func=_cmd_simulate)

    return parser


def run(argv=None, out=None, err=None) -> int:
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args, out, err)
    except GameValidationError as exc:
        print(f"error: {exc}", file=err)
        return 1
    except NumericsError as exc:
        print(f"numerical error: {exc}", file=err)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
