"""Game file ingestion and serialization.

A game file is a JSON document:

    {
      "players": [{"name": "P1", "strategies": ["U", "D"]}, ...],
      "parameters": {"a": null},          # optional; null means must be bound
      "distributions": {
        "f4": {"components": [{"weight": 3, "center": 2, "rate": 20,
                               "lo": 1.5, "hi": 2.5}, ...],
               "atoms": [{"value": 1, "prob": 0.8}, ...]},
        ...
      },
      "payoffs": [
        {"player": "P1" | "*", "profile": ["U", "L"], "dist": "f4" | {...}},
        ...
      ]
    }

``center``, ``lo`` and ``hi`` may be arithmetic expressions over declared
parameter names (e.g. "a + 0.5"). Strategy order is file order everywhere.
"""

from __future__ import annotations

import ast
import json
import operator
from pathlib import Path
from typing import Mapping

from .dist import Atom, GaussComponent, PayoffDistribution
from .errors import ParseError, UnboundParameter
from .game import StochasticGame, StrategySet

_BIN_OPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
}
_UNARY_OPS = {ast.UAdd: operator.pos, ast.USub: operator.neg}


def eval_expr(expr, bindings: Mapping[str, float]) -> float:
    """Evaluate a number or an arithmetic expression over bound parameters."""
    if isinstance(expr, (int, float)):
        return float(expr)
    if not isinstance(expr, str):
        raise ParseError(f"expected number or expression, got {expr!r}")
    try:
        tree = ast.parse(expr, mode="eval")
    except SyntaxError as exc:
        raise ParseError(f"bad expression {expr!r}: {exc.msg}") from exc

    def walk(node):
        if isinstance(node, ast.Expression):
            return walk(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return float(node.value)
        if isinstance(node, ast.Name):
            if node.id not in bindings:
                raise UnboundParameter(f"parameter {node.id!r} is not bound")
            return float(bindings[node.id])
        if isinstance(node, ast.BinOp) and type(node.op) in _BIN_OPS:
            return _BIN_OPS[type(node.op)](walk(node.left), walk(node.right))
        if isinstance(node, ast.UnaryOp) and type(node.op) in _UNARY_OPS:
            return _UNARY_OPS[type(node.op)](walk(node.operand))
        raise ParseError(f"unsupported syntax in expression {expr!r}")

    return walk(tree)


def _build_distribution(spec, bindings, where: str) -> PayoffDistribution:
    if not isinstance(spec, dict):
        raise ParseError(f"{where}: distribution spec must be an object")
    comps = []
    for c in spec.get("components", []):
        try:
            comps.append(
                GaussComponent(
                    weight=float(c["weight"]),
                    center=eval_expr(c["center"], bindings),
                    rate=float(c["rate"]),
                    lo=eval_expr(c["lo"], bindings),
                    hi=eval_expr(c["hi"], bindings),
                )
            )
        except KeyError as exc:
            raise ParseError(f"{where}: component missing field {exc}") from exc
        except ValueError as exc:
            raise ParseError(f"{where}: {exc}") from exc
    atoms = []
    for a in spec.get("atoms", []):
        try:
            atoms.append(Atom(value=float(a["value"]), prob=float(a["prob"])))
        except KeyError as exc:
            raise ParseError(f"{where}: atom missing field {exc}") from exc
        except ValueError as exc:
            raise ParseError(f"{where}: {exc}") from exc
    if not comps and not atoms:
        raise ParseError(f"{where}: distribution has no components and no atoms")
    return PayoffDistribution(tuple(comps), tuple(atoms)).normalize()


def load_game(source, params: Mapping[str, float] | None = None) -> StochasticGame:
    """Load, validate and normalize a game from a file path or parsed dict.

    ``params`` binds declared parameters; file-level defaults apply when a
    parameter is not bound explicitly.
    """
    if isinstance(source, (str, Path)):
        text = Path(source).read_text()
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(exc.msg, exc.lineno, exc.colno) from exc
    else:
        doc = source
    if not isinstance(doc, dict):
        raise ParseError("game file must contain a JSON object")

    declared = doc.get("parameters", {}) or {}
    bindings = {}
    for name, default in declared.items():
        if params and name in params:
            bindings[name] = float(params[name])
        elif default is not None:
            bindings[name] = float(default)
        else:
            raise UnboundParameter(f"parameter {name!r} declared but not bound")
    for name in params or {}:
        if name not in declared:
            raise UnboundParameter(f"parameter {name!r} is not declared by the file")

    player_specs = doc.get("players")
    if not player_specs:
        raise ParseError("game file declares no players")
    names = []
    strategies = []
    for i, spec in enumerate(player_specs):
        names.append(str(spec.get("name", f"P{i + 1}")))
        labels = spec.get("strategies")
        if not labels:
            raise ParseError(f"player {names[-1]} has no strategies")
        strategies.append(StrategySet(i, tuple(str(x) for x in labels)))
    if len(set(names)) != len(names):
        raise ParseError("player names must be distinct")

    named = {
        name: _build_distribution(spec, bindings, f"distribution {name!r}")
        for name, spec in (doc.get("distributions") or {}).items()
    }

    label_index = [
        {label: a for a, label in enumerate(s.labels)} for s in strategies
    ]
    payoffs = {}
    for entry in doc.get("payoffs", []):
        profile_labels = entry.get("profile")
        if not isinstance(profile_labels, list) or len(profile_labels) != len(strategies):
            raise ParseError(f"payoff entry needs one strategy per player: {entry}")
        profile = []
        for j, label in enumerate(profile_labels):
            if str(label) not in label_index[j]:
                raise ParseError(
                    f"unknown strategy {label!r} for player {names[j]}"
                )
            profile.append(label_index[j][str(label)])
        profile = tuple(profile)
        dist_ref = entry.get("dist")
        if isinstance(dist_ref, str):
            if dist_ref not in named:
                raise ParseError(f"unknown distribution name {dist_ref!r}")
            d = named[dist_ref]
        else:
            d = _build_distribution(dist_ref, bindings, f"payoff at {profile_labels}")
        who = entry.get("player", "*")
        targets = range(len(strategies)) if who == "*" else [_player_index(who, names)]
        for i in targets:
            payoffs[(i, profile)] = d

    return StochasticGame(tuple(strategies), payoffs, tuple(names))


def _player_index(who, names) -> int:
    if isinstance(who, str) and who in names:
        return names.index(who)
    raise ParseError(f"unknown player {who!r}; use a declared name or '*'")


def save_game(g: StochasticGame) -> dict:
    """Serialize a game to the file-format dict (parameters already resolved)."""
    dist_names: dict[int, str] = {}
    distributions = {}
    payoffs = []
    for i in range(g.n_players):
        for s in g.pure_profiles():
            d = g.payoff(i, s)
            if id(d) not in dist_names:
                name = f"d{len(dist_names) + 1}"
                dist_names[id(d)] = name
                distributions[name] = {
                    "components": [
                        {
                            "weight": k.weight,
                            "center": k.center,
                            "rate": k.rate,
                            "lo": k.lo,
                            "hi": k.hi,
                        }
                        for k in d.components
                    ],
                    "atoms": [{"value": a.value, "prob": a.prob} for a in d.atoms],
                }
            payoffs.append(
                {
                    "player": g.names[i],
                    "profile": list(g.profile_labels(s)),
                    "dist": dist_names[id(d)],
                }
            )
    return {
        "players": [
            {"name": g.names[i], "strategies": list(g.strategies[i].labels)}
            for i in range(g.n_players)
        ],
        "distributions": distributions,
        "payoffs": payoffs,
    }


def dump_game(g: StochasticGame, path) -> None:
    Path(path).write_text(json.dumps(save_game(g), indent=2) + "\n")
