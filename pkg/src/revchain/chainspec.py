"""Chain description files and lossless JSON serialisation.

A chain file is a JSON document::

    {"n": 2, "P": [[0, 1], [1, 0]], "pi": [0.5, 0.5],
     "functions": {"h": [1, -1]}}

``pi`` is optional (the stationary distribution is then solved for). Instead
of ``P`` a file may give ``target`` and ``proposal``, in which case the
Metropolis-Hastings kernel is built. Floats are written with 17 significant
digits so a dump/load round trip is exact.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ChainSpecError, DimensionError, NonUniqueStationaryError, NotReversibleError
from .kernel import DB_TOL, ReversiblePair, build_metropolis_hastings, find_stationary


def _fmt_float(x: float) -> str:
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    s = format(x, ".17g")
    if s == "-0":
        s = "0"
    return s


def dumps(obj, indent: int = 2) -> str:
    """JSON text with floats at 17 significant digits; non-finite floats become strings."""

    def enc(o, level):
        pad = " " * (indent * (level + 1))
        end = " " * (indent * level)
        if isinstance(o, (bool, np.bool_)):
            return "true" if o else "false"
        if o is None:
            return "null"
        if isinstance(o, (int, np.integer)):
            return str(int(o))
        if isinstance(o, (float, np.floating)):
            return _fmt_float(float(o))
        if isinstance(o, str):
            return json.dumps(o)
        if isinstance(o, np.ndarray):
            return enc(o.tolist(), level)
        if isinstance(o, dict):
            if not o:
                return "{}"
            items = [f"{pad}{json.dumps(str(k))}: {enc(v, level + 1)}" for k, v in o.items()]
            return "{\n" + ",\n".join(items) + "\n" + end + "}"
        if isinstance(o, (list, tuple)):
            if not o:
                return "[]"
            if all(not isinstance(v, (dict, list, tuple, np.ndarray)) for v in o):
                return "[" + ", ".join(enc(v, level + 1) for v in o) + "]"
            return "[\n" + ",\n".join(pad + enc(v, level + 1) for v in o) + "\n" + end + "]"
        raise TypeError(f"cannot serialise {type(o).__name__}")

    return enc(obj, 0) + "\n"


@dataclass(frozen=True)
class ChainSpec:
    n: int
    P: np.ndarray
    pi: np.ndarray
    functions: dict[str, np.ndarray] = field(default_factory=dict)
    proposal: np.ndarray | None = None
    pi_inferred: bool = False
    db_tolerance: float = DB_TOL

    @property
    def pair(self) -> ReversiblePair:
        return ReversiblePair(self.P, self.pi, db_tolerance=self.db_tolerance)

    def function(self, name: str) -> np.ndarray:
        try:
            return self.functions[name]
        except KeyError:
            known = ", ".join(sorted(self.functions)) or "none"
            raise ChainSpecError(f"unknown function {name!r} (available: {known})") from None

    def to_dict(self) -> dict:
        d = {"n": self.n, "P": self.P, "pi": self.pi, "functions": dict(self.functions)}
        if self.db_tolerance != DB_TOL:
            d["db_tolerance"] = self.db_tolerance
        return d


def _matrix(doc, key, n):
    try:
        M = np.asarray(doc[key], dtype=float)
    except (TypeError, ValueError) as exc:
        raise ChainSpecError(f"{key!r} is not a numeric matrix: {exc}") from None
    if M.shape != (n, n):
        raise ChainSpecError(f"{key!r} has shape {M.shape}, expected ({n}, {n})")
    return M


def _vector(values, what, n):
    try:
        v = np.asarray(values, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ChainSpecError(f"{what} is not a numeric vector: {exc}") from None
    if v.shape != (n,):
        raise ChainSpecError(f"{what} has shape {v.shape}, expected ({n},)")
    return v


def parse_chain_spec(doc: dict) -> ChainSpec:
    if not isinstance(doc, dict):
        raise ChainSpecError("chain file must contain a JSON object")
    has_p = "P" in doc
    has_q = "proposal" in doc
    if has_p == has_q:
        raise ChainSpecError("give exactly one of 'P' or 'proposal' (with 'target')")
    if "n" in doc:
        n = doc["n"]
        if not isinstance(n, int) or isinstance(n, bool) or n < 2:
            raise ChainSpecError(f"'n' must be an integer >= 2, got {n!r}")
    else:
        first = doc["P"] if has_p else doc["proposal"]
        n = len(first) if isinstance(first, list) else 0
    db_tol = float(doc.get("db_tolerance", DB_TOL))

    funcs_doc = doc.get("functions", {})
    if not isinstance(funcs_doc, dict):
        raise ChainSpecError("'functions' must map names to arrays")
    functions = {str(k): _vector(v, f"function {k!r}", n) for k, v in funcs_doc.items()}

    try:
        if has_q:
            target = doc.get("target", doc.get("pi"))
            if target is None:
                raise ChainSpecError("'proposal' needs a 'target' distribution")
            q = _matrix(doc, "proposal", n)
            pair = build_metropolis_hastings(_vector(target, "'target'", n), q)
            return ChainSpec(n, pair.P, pair.pi, functions, proposal=q, db_tolerance=db_tol)
        P = _matrix(doc, "P", n)
        inferred = "pi" not in doc
        pi = find_stationary(P) if inferred else _vector(doc["pi"], "'pi'", n)
        pair = ReversiblePair(P, pi, db_tolerance=db_tol)
        return ChainSpec(n, pair.P, pair.pi, functions, pi_inferred=inferred, db_tolerance=db_tol)
    except ChainSpecError:
        raise
    except (NonUniqueStationaryError, NotReversibleError, DimensionError) as exc:
        raise ChainSpecError(str(exc)) from exc
    except ValueError as exc:
        raise ChainSpecError(f"invalid chain: {exc}") from exc


def load_chain_spec(path) -> ChainSpec:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ChainSpecError(f"cannot read {path}: {exc.strerror}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ChainSpecError(f"{path}: not valid JSON ({exc})") from None
    return parse_chain_spec(doc)


def dump_chain_spec(spec: ChainSpec) -> str:
    return dumps(spec.to_dict())
