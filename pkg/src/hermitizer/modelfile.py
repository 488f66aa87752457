"""JSON model files and representation reports.

Complex numbers are stored as ``[re, im]`` pairs and matrices row-major.
Floats are written with ``repr`` precision, so every value round-trips
bit-exactly.  Factor lists carry an explicit ``factor_order`` key;
``"descending"`` (the default) means ``[F_N, ..., F_1]``.
"""
from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .chains import DysonChain, MetricChain, dyson_from_metrics, metrics_from_dyson, total_dyson
from .conjugation import quasi_hermiticity_residual
from .errors import SchemaError
from .lattice import build_lattice, representations, terminal_path_counts
from .matkernel import Tolerance, as_matrix, eigenvalues, solve
from .scoring import DEFAULT_WEIGHTS, ComplexityScore, preference, rank, score

SCHEMA_VERSION = 1


def encode_complex(z) -> list:
    z = complex(z)
    return [z.real, z.imag]


def decode_complex(pair) -> complex:
    if not (isinstance(pair, (list, tuple)) and len(pair) == 2):
        raise SchemaError(f"complex numbers must be [re, im] pairs, got {pair!r}")
    try:
        return complex(float(pair[0]), float(pair[1]))
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"bad complex entry {pair!r}") from exc


def encode_matrix(A) -> list:
    return [[encode_complex(z) for z in row] for row in np.asarray(A)]


def decode_matrix(rows, name="matrix") -> np.ndarray:
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise SchemaError(f"{name} must be a list of rows")
    try:
        return as_matrix([[decode_complex(z) for z in row] for row in rows], name)
    except SchemaError:
        raise
    except Exception as exc:
        raise SchemaError(f"{name}: {exc}") from exc


def encode_vector(v) -> list:
    return [encode_complex(z) for z in np.ravel(v)]


def decode_vector(items) -> np.ndarray:
    if not isinstance(items, list):
        raise SchemaError("vector must be a list of [re, im] pairs")
    return np.array([decode_complex(z) for z in items], dtype=np.complex128)


# --------------------------------------------------------------------------
# model files
# --------------------------------------------------------------------------

@dataclass(eq=False)
class ModelFile:
    dimension: int
    hamiltonian: np.ndarray | None = None
    target_hamiltonian: np.ndarray | None = None
    dyson_factors: list | None = None
    metric_factors: list | None = None
    declared_n_par: int | list | None = None
    description: str = ""

    def __post_init__(self):
        if (self.dyson_factors is None) == (self.metric_factors is None):
            raise SchemaError("exactly one of dyson_factors / metric_factors is required")
        if (self.hamiltonian is None) == (self.target_hamiltonian is None):
            raise SchemaError("exactly one of hamiltonian / target_hamiltonian is required")
        mats = [m for m in (self.hamiltonian, self.target_hamiltonian) if m is not None]
        mats += list(self.dyson_factors or self.metric_factors)
        if not (self.dyson_factors or self.metric_factors):
            raise SchemaError("factor list is empty")
        for m in mats:
            if np.shape(m) != (self.dimension, self.dimension):
                raise SchemaError(
                    f"matrix of shape {np.shape(m)} in a model of dimension {self.dimension}"
                )
        if isinstance(self.declared_n_par, list) and len(self.declared_n_par) != self.n_factors + 1:
            raise SchemaError("declared_n_par list needs one entry per metric depth 0..N")

    @property
    def n_factors(self) -> int:
        return len(self.dyson_factors if self.dyson_factors is not None else self.metric_factors)

    def dyson_chain(self, tol: Tolerance | None = None) -> DysonChain:
        """The given Dyson factors, or canonical ones recovered from the metric factors."""
        if self.dyson_factors is not None:
            return DysonChain(self.dyson_factors, tol)
        return dyson_from_metrics(MetricChain(self.metric_factors), "canonical", tol)

    def metric_chain(self, tol: Tolerance | None = None) -> MetricChain:
        if self.metric_factors is not None:
            return MetricChain(self.metric_factors)
        return metrics_from_dyson(self.dyson_chain(tol))

    def working_hamiltonian(self, tol: Tolerance | None = None) -> np.ndarray:
        """``H`` itself, or ``Omega^{-1} h Omega`` when only the BGI target is given."""
        if self.hamiltonian is not None:
            return self.hamiltonian
        Om = total_dyson(self.dyson_chain(tol))
        return solve(Om, self.target_hamiltonian @ Om, tol)

    def n_par(self, metric_depth: int) -> int | None:
        if isinstance(self.declared_n_par, list):
            return self.declared_n_par[metric_depth]
        if metric_depth == self.n_factors:
            return self.declared_n_par
        return None

    def to_dict(self) -> dict:
        out = {"schema_version": SCHEMA_VERSION, "dimension": self.dimension}
        if self.description:
            out["description"] = self.description
        if self.hamiltonian is not None:
            out["hamiltonian"] = encode_matrix(self.hamiltonian)
        else:
            out["target_hamiltonian"] = encode_matrix(self.target_hamiltonian)
        out["factor_order"] = "descending"
        if self.dyson_factors is not None:
            out["dyson_factors"] = [encode_matrix(m) for m in self.dyson_factors]
        else:
            out["metric_factors"] = [encode_matrix(m) for m in self.metric_factors]
        if self.declared_n_par is not None:
            out["declared_n_par"] = self.declared_n_par
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "ModelFile":
        if not isinstance(data, dict):
            raise SchemaError("model file must hold a JSON object")
        if "dimension" not in data or not isinstance(data["dimension"], int) or data["dimension"] < 1:
            raise SchemaError("'dimension' must be a positive integer")
        order = data.get("factor_order", "descending")
        if order not in ("descending", "ascending"):
            raise SchemaError(f"factor_order must be 'descending' or 'ascending', got {order!r}")

        def factors(key):
            if key not in data:
                return None
            if not isinstance(data[key], list):
                raise SchemaError(f"{key} must be a list of matrices")
            mats = [decode_matrix(m, f"{key}[{i}]") for i, m in enumerate(data[key])]
            return mats[::-1] if order == "ascending" else mats

        def matrix(key):
            return decode_matrix(data[key], key) if key in data else None

        n_par = data.get("declared_n_par")
        if n_par is not None and not (
            isinstance(n_par, int) or (isinstance(n_par, list) and all(isinstance(v, int) for v in n_par))
        ):
            raise SchemaError("declared_n_par must be an integer or a list of integers")
        return cls(
            dimension=data["dimension"],
            hamiltonian=matrix("hamiltonian"),
            target_hamiltonian=matrix("target_hamiltonian"),
            dyson_factors=factors("dyson_factors"),
            metric_factors=factors("metric_factors"),
            declared_n_par=n_par,
            description=data.get("description", ""),
        )


def load_model(path) -> ModelFile:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path} is not valid JSON: {exc}") from exc
    return ModelFile.from_dict(data)


def save_model(model: ModelFile, path) -> None:
    write_json(model.to_dict(), path)


def write_json(data, path) -> None:
    try:
        Path(path).write_text(json.dumps(data, indent=2) + "\n", encoding="utf-8")
    except OSError as exc:
        raise SchemaError(f"cannot write {path}: {exc}") from exc


def write_csv(rows: list[dict], path) -> None:
    if not rows:
        raise SchemaError("no rows to write")
    try:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.DictWriter(fh, fieldnames=list(rows[0]))
            writer.writeheader()
            writer.writerows(rows)
    except OSError as exc:
        raise SchemaError(f"cannot write {path}: {exc}") from exc


# --------------------------------------------------------------------------
# representation reports
# --------------------------------------------------------------------------

def _freeze(A) -> tuple:
    return tuple(tuple(complex(z) for z in row) for row in np.asarray(A))


@dataclass(frozen=True)
class RepresentationEntry:
    metric_depth: int
    dyson_depth: int
    physical: bool
    hamiltonian: tuple
    metric: tuple
    quasi_hermiticity_residual: float
    spectrum: tuple
    score: ComplexityScore

    def to_dict(self) -> dict:
        return {
            "metric_depth": self.metric_depth,
            "dyson_depth": self.dyson_depth,
            "physical": self.physical,
            "hamiltonian": encode_matrix(self.hamiltonian),
            "metric": encode_matrix(self.metric),
            "quasi_hermiticity_residual": self.quasi_hermiticity_residual,
            "spectrum": encode_vector(self.spectrum),
            "score": self.score.to_dict(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "RepresentationEntry":
        return cls(
            metric_depth=d["metric_depth"],
            dyson_depth=d["dyson_depth"],
            physical=d["physical"],
            hamiltonian=_freeze(decode_matrix(d["hamiltonian"], "hamiltonian")),
            metric=_freeze(decode_matrix(d["metric"], "metric")),
            quasi_hermiticity_residual=d["quasi_hermiticity_residual"],
            spectrum=tuple(complex(z) for z in decode_vector(d["spectrum"])),
            score=ComplexityScore.from_dict(d["score"]),
        )


@dataclass(frozen=True)
class NodeSummary:
    k: int
    d: int
    metric_depth: int
    physical: bool


@dataclass(frozen=True)
class LatticeSummary:
    node_count: int
    path_count: int
    terminal_path_counts: tuple
    nodes: tuple = field(default=())

    def describe(self) -> str:
        counts = "/".join(str(c) for c in self.terminal_path_counts)
        return f"{self.node_count} nodes, {self.path_count} paths, terminals: {counts}"


@dataclass(frozen=True)
class RepresentationReport:
    dimension: int
    n_factors: int
    representations: tuple
    lattice: LatticeSummary
    weights: tuple = DEFAULT_WEIGHTS
    ranking: tuple = ()

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "dimension": self.dimension,
            "n_factors": self.n_factors,
            "weights": list(self.weights),
            "ranking": list(self.ranking),
            "representations": [r.to_dict() for r in self.representations],
            "lattice": {
                "node_count": self.lattice.node_count,
                "path_count": self.lattice.path_count,
                "terminal_path_counts": list(self.lattice.terminal_path_counts),
                "nodes": [
                    {"k": n.k, "d": n.d, "metric_depth": n.metric_depth, "physical": n.physical}
                    for n in self.lattice.nodes
                ],
            },
        }

    @classmethod
    def from_dict(cls, d: dict) -> "RepresentationReport":
        try:
            lat = d["lattice"]
            return cls(
                dimension=d["dimension"],
                n_factors=d["n_factors"],
                representations=tuple(RepresentationEntry.from_dict(r) for r in d["representations"]),
                lattice=LatticeSummary(
                    lat["node_count"],
                    lat["path_count"],
                    tuple(lat["terminal_path_counts"]),
                    tuple(NodeSummary(**n) for n in lat["nodes"]),
                ),
                weights=tuple(d["weights"]),
                ranking=tuple(d["ranking"]),
            )
        except (KeyError, TypeError) as exc:
            raise SchemaError(f"malformed report: {exc}") from exc

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_json(cls, text: str) -> "RepresentationReport":
        return cls.from_dict(json.loads(text))

    def score_rows(self) -> list[dict]:
        """One flat row per representation, in metric-depth order."""
        position = {idx: pos + 1 for pos, idx in enumerate(self.ranking)}
        rows = []
        for idx, e in enumerate(self.representations):
            s = e.score
            rows.append(
                {
                    "metric_depth": e.metric_depth,
                    "dyson_depth": e.dyson_depth,
                    "n_zero": s.n_zero,
                    "n_par": "" if s.n_par is None else s.n_par,
                    "nonhermiticity": s.nonhermiticity,
                    "metric_condition": s.metric_condition,
                    "bandwidth": s.bandwidth,
                    "preference": preference(s, self.weights),
                    "rank": position.get(idx, ""),
                    "qh_residual": e.quasi_hermiticity_residual,
                }
            )
        return rows


def build_report(model: ModelFile, tol: Tolerance | None = None, weights=DEFAULT_WEIGHTS) -> RepresentationReport:
    tol = tol or Tolerance.default()
    chain = model.dyson_chain(tol)
    H = model.working_hamiltonian(tol)
    lat = build_lattice(H, chain, tol)
    n = chain.n_factors
    entries = []
    for rep in representations(H, chain, tol):
        entries.append(
            RepresentationEntry(
                metric_depth=rep.metric_depth,
                dyson_depth=rep.dyson_depth,
                physical=True,
                hamiltonian=_freeze(rep.physical_hamiltonian),
                metric=_freeze(rep.physical_metric),
                quasi_hermiticity_residual=quasi_hermiticity_residual(
                    rep.physical_hamiltonian, rep.physical_metric
                ),
                spectrum=tuple(complex(z) for z in eigenvalues(rep.physical_hamiltonian)),
                score=score(rep, tol, model.n_par(rep.metric_depth)),
            )
        )
    counts = terminal_path_counts(n)
    nodes = tuple(
        NodeSummary(node.k, node.d, node.metric_depth, node.physical)
        for node in sorted(lat, key=lambda nd: (-nd.k, nd.d))
    )
    summary = LatticeSummary(len(lat), sum(counts), tuple(counts), nodes)
    order = rank([e.score for e in entries], weights)
    return RepresentationReport(model.dimension, n, tuple(entries), summary, tuple(weights), tuple(order))
