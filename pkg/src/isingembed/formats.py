"""JSON file formats for problems, embeddings, results and samples.

Floats are written with ``repr`` (what ``json`` does), which is the shortest
string that parses back to the same double, so every file round-trips exactly.
"""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Any, Mapping

import numpy as np

from .embedding import Embedding
from .errors import DomainError, ParseError
from .ising import Graph, IsingModel, c_max, edge_key
from .setter import EmbeddedIsingModel, VertexRecord
from .subproblem import Strategy, SubproblemInstance

RESULT_FORMAT = "isingembed-result/1"


def read_json(path: str | Path) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror}") from exc


def dumps(data: Any) -> str:
    return json.dumps(data, indent=2, sort_keys=True, allow_nan=False) + "\n"


def write_json(path: str | Path, data: Any):
    Path(path).write_text(dumps(data), encoding="utf-8")


def _field(d: Mapping, key: str, where: str):
    if not isinstance(d, Mapping):
        raise ParseError(f"{where}: expected a JSON object")
    if key not in d:
        raise ParseError(f"{where}: missing field {key!r}")
    return d[key]


def _number(x, where: str) -> float:
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise ParseError(f"{where}: expected a number, got {x!r}")
    return float(x)


def _pair(e, where: str) -> tuple[str, str]:
    if isinstance(e, Mapping):
        return str(_field(e, "u", where)), str(_field(e, "v", where))
    if isinstance(e, (list, tuple)) and len(e) == 2:
        return str(e[0]), str(e[1])
    raise ParseError(f"{where}: edge must be [u, v] or {{'u', 'v'}}")


# problems


def model_from_dict(d: Mapping, original: bool = True, where: str = "problem") -> IsingModel:
    """Parse a problem object; ``original`` requires every strength to be nonzero."""
    vertices = [str(v) for v in _field(d, "vertices", where)]
    raw_edges = _field(d, "edges", where)
    raw_weights = _field(d, "weights", where)
    if not isinstance(raw_weights, Mapping):
        raise ParseError(f"{where}.weights: expected an object")
    edges, strengths = [], {}
    for i, e in enumerate(raw_edges):
        at = f"{where}.edges[{i}]"
        u, v = _pair(e, at)
        key = edge_key(u, v)
        if key in strengths:
            raise DomainError(f"{at}: duplicate edge {key}")
        s = _number(_field(e, "strength", at), at + ".strength")
        if original and s == 0:
            raise DomainError(f"{at}: original strengths must be nonzero")
        edges.append(key)
        strengths[key] = s
    weights = {str(k): _number(x, f"{where}.weights.{k}") for k, x in raw_weights.items()}
    return IsingModel(Graph(vertices, edges), weights, strengths)


def model_to_dict(model: IsingModel) -> dict:
    return {
        "vertices": list(model.vertices),
        "edges": [{"u": u, "v": v, "strength": model.strengths[(u, v)]} for u, v in model.graph.sorted_edges()],
        "weights": {v: model.weights[v] for v in model.vertices},
    }


def load_problem(path: str | Path, original: bool = True) -> IsingModel:
    return model_from_dict(read_json(path), original, str(path))


def load_any_model(path: str | Path) -> IsingModel:
    """A problem file, or the embedded model inside a result file."""
    d = read_json(path)
    if isinstance(d, Mapping) and "model" in d:
        return model_from_dict(d["model"], False, f"{path}.model")
    return model_from_dict(d, False, str(path))


# embeddings


def embedding_from_dict(d: Mapping, where: str = "embedding") -> tuple[Graph, Embedding]:
    hw = _field(d, "hardware", where)
    vertices = [str(q) for q in _field(hw, "vertices", where + ".hardware")]
    edges = [_pair(e, f"{where}.hardware.edges[{i}]") for i, e in enumerate(_field(hw, "edges", where + ".hardware"))]
    chains = _field(d, "map", where)
    if not isinstance(chains, Mapping):
        raise ParseError(f"{where}.map: expected an object")
    return Graph(vertices, edges), Embedding({str(k): list(v) for k, v in chains.items()})


def embedding_to_dict(H: Graph, phi: Embedding) -> dict:
    return {
        "hardware": {"vertices": list(H.vertices), "edges": [list(e) for e in H.sorted_edges()]},
        "map": {v: sorted(chain) for v, chain in phi.chains.items()},
    }


def load_embedding(path: str | Path) -> tuple[Graph, Embedding]:
    return embedding_from_dict(read_json(path), str(path))


# weight distribution instances


def instance_to_dict(inst: SubproblemInstance) -> dict:
    return {
        "vertices": list(inst.graph.vertices),
        "edges": [list(e) for e in inst.graph.sorted_edges()],
        "sigma": inst.sigma_map(),
        "lam": inst.lam,
        "gamma": inst.gamma,
        "vertex": inst.vertex,
    }


def instance_from_dict(d: Mapping, where: str = "instance") -> SubproblemInstance:
    g = Graph(
        [str(v) for v in _field(d, "vertices", where)],
        [_pair(e, f"{where}.edges[{i}]") for i, e in enumerate(_field(d, "edges", where))],
    )
    sigma = {str(k): _number(x, f"{where}.sigma.{k}") for k, x in _field(d, "sigma", where).items()}
    if set(sigma) != set(g.vertices):
        raise DomainError(f"{where}.sigma: keys must be exactly the instance vertices")
    lam = _number(_field(d, "lam", where), where + ".lam")
    gamma = _number(_field(d, "gamma", where), where + ".gamma")
    return SubproblemInstance.build(g, sigma, lam, gamma, d.get("vertex"))


# results


def _record_to_dict(rec: VertexRecord) -> dict:
    return {
        "theta": rec.theta,
        "omega": dict(sorted(rec.omega.items())),
        "sign": rec.sign,
        "coupled_edges": [list(e) for e in rec.coupled_edges],
        "tight_cuts": [list(S) for S in rec.tight_cuts],
        "n_constraints": rec.n_constraints,
        "instance": None if rec.instance is None else instance_to_dict(rec.instance),
    }


def _record_from_dict(d: Mapping, where: str) -> VertexRecord:
    theta = d.get("theta")
    inst = d.get("instance")
    return VertexRecord(
        theta=None if theta is None else _number(theta, where + ".theta"),
        omega={str(q): _number(x, f"{where}.omega.{q}") for q, x in _field(d, "omega", where).items()},
        sign=_number(_field(d, "sign", where), where + ".sign"),
        coupled_edges=tuple(edge_key(*_pair(e, where + ".coupled_edges")) for e in d.get("coupled_edges", [])),
        tight_cuts=[tuple(str(v) for v in S) for S in d.get("tight_cuts", [])],
        n_constraints=int(d.get("n_constraints", 0)),
        instance=None if inst is None else instance_from_dict(inst, where + ".instance"),
    )


def result_to_dict(embedded: EmbeddedIsingModel) -> dict:
    return {
        "format": RESULT_FORMAT,
        "kind": embedded.kind,
        "factor": embedded.factor,
        "model": model_to_dict(embedded.model),
        "original": model_to_dict(embedded.original),
        "map": {v: sorted(chain) for v, chain in embedded.embedding.chains.items()},
        "offset_c": embedded.offset,
        "gamma": embedded.gamma,
        "strategy": embedded.strategy.value,
        "c_max": c_max(embedded.model),
        "per_vertex": {v: _record_to_dict(r) for v, r in sorted(embedded.records.items())},
    }


def result_from_dict(d: Mapping, where: str = "result") -> EmbeddedIsingModel:
    fmt = _field(d, "format", where)
    if fmt != RESULT_FORMAT:
        raise ParseError(f"{where}: unsupported format {fmt!r}")
    gamma = d.get("gamma")
    factor = d.get("factor")
    per_vertex = _field(d, "per_vertex", where)
    return EmbeddedIsingModel(
        model=model_from_dict(_field(d, "model", where), False, where + ".model"),
        offset=_number(_field(d, "offset_c", where), where + ".offset_c"),
        records={str(v): _record_from_dict(r, f"{where}.per_vertex.{v}") for v, r in per_vertex.items()},
        gamma=None if gamma is None else float(gamma),
        strategy=Strategy(_field(d, "strategy", where)),
        original=model_from_dict(_field(d, "original", where), False, where + ".original"),
        embedding=Embedding(_field(d, "map", where)),
        kind=str(d.get("kind", "optimal")),
        factor=None if factor is None else float(factor),
    )


def load_result(path: str | Path) -> EmbeddedIsingModel:
    return result_from_dict(read_json(path), str(path))


def save_result(path: str | Path, embedded: EmbeddedIsingModel):
    write_json(path, result_to_dict(embedded))


# samples


def samples_from_json(d: Any, where: str = "samples") -> list[dict[str, int]]:
    """A list of ``{qubit: +-1}`` objects, bare or under a ``"samples"`` key."""
    if isinstance(d, Mapping):
        d = _field(d, "samples", where)
    if not isinstance(d, list):
        raise ParseError(f"{where}: expected a list of samples")
    out = []
    for i, s in enumerate(d):
        if not isinstance(s, Mapping):
            raise ParseError(f"{where}[{i}]: expected an object")
        sample = {}
        for q, x in s.items():
            if x not in (-1, 1) or isinstance(x, bool):
                raise DomainError(f"{where}[{i}].{q}: spins must be -1 or +1")
            sample[str(q)] = int(x)
        out.append(sample)
    return out


def load_samples(path: str | Path) -> list[dict[str, int]]:
    return samples_from_json(read_json(path), str(path))


def jsonable(x: Any) -> Any:
    """Convert numpy scalars, tuples and infinities for ``json.dumps``."""
    if isinstance(x, Mapping):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if isinstance(x, np.generic):
        x = x.item()
    if isinstance(x, float) and not math.isfinite(x):
        return None
    return x
