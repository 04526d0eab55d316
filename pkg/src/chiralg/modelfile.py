"""Model file schema: JSON descriptions of the objects the CLI drives.

Kinds: "gamma" (a free chiral model on R^{m|r}), "weil" (a semi-infinite
Weil complex, optionally restricted to W' = <c, gamma>), "algebroid"
(one polynomial chart with anchor and structure functions, plus the Lie
algebra acting through constant sections), "atlas" (charts with affine
transitions), and "tensor" (a weil left factor against a weil or
algebroid right factor).  Exact rationals are serialized as "p/q"
strings; polynomials as {"vars": m, "terms": [[[exponents], "p/q"],...]}.
All structure-constant and algebroid axioms are checked on load.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from .algebroid import AlgebroidData, AlgebroidError, ChiralAlgebroid
from .atlas import Atlas, AtlasError, Chart, Transition, invert_transition
from .lie import LieData, LieDataError
from .poly import Polynomial, format_scalar, parse_scalar
from .weil import WeilComplex

MODEL_SCHEMA = "chiralg-model/1"


class ModelError(ValueError):
    pass


def poly_to_json(p: Polynomial) -> dict[str, Any]:
    return {
        "vars": p.nvars,
        "terms": [
            [list(exp), format_scalar(coeff)]
            for exp, coeff in sorted(p.terms.items())
        ],
    }


def poly_from_json(obj: Any, expected_vars: int | None = None) -> Polynomial:
    try:
        nvars = int(obj["vars"])
        terms = {
            tuple(int(e) for e in exp): parse_scalar(coeff)
            for exp, coeff in obj["terms"]
        }
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelError(f"bad polynomial payload: {obj!r}") from exc
    if expected_vars is not None and nvars != expected_vars:
        raise ModelError(f"polynomial has {nvars} vars, expected {expected_vars}")
    return Polynomial(nvars, terms)


def lie_to_json(lie: LieData) -> dict[str, Any]:
    return {
        "dim": lie.dim,
        "structure_constants": [
            [list(key), format_scalar(val)] for key, val in sorted(lie.gamma.items())
        ],
    }


def lie_from_json(obj: Any) -> LieData:
    try:
        dim = int(obj["dim"])
        gamma = {
            tuple(int(t) for t in key): parse_scalar(val)
            for key, val in obj.get("structure_constants", [])
        }
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelError(f"bad Lie data payload: {obj!r}") from exc
    try:
        return LieData(dim, gamma)
    except LieDataError as exc:
        raise ModelError(str(exc)) from exc


def algebroid_to_json(data: AlgebroidData) -> dict[str, Any]:
    return {
        "m": data.m,
        "r": data.r,
        "anchor": [[poly_to_json(p) for p in row] for row in data.anchor],
        "structure_functions": [
            [list(key), poly_to_json(p)] for key, p in sorted(data.structure.items())
        ],
    }


def algebroid_from_json(obj: Any) -> AlgebroidData:
    try:
        m = int(obj["m"])
        r = int(obj["r"])
        anchor = [
            [poly_from_json(p, m) for p in row] for row in obj["anchor"]
        ]
        structure = {
            tuple(int(t) for t in key): poly_from_json(p, m)
            for key, p in obj.get("structure_functions", [])
        }
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelError(f"bad algebroid payload: {obj!r}") from exc
    try:
        return AlgebroidData(m, r, anchor, structure)
    except AlgebroidError as exc:
        raise ModelError(str(exc)) from exc


def transformation_lie(data: AlgebroidData) -> LieData:
    """The Lie algebra read off constant structure functions."""
    gamma: dict[tuple[int, int, int], Fraction] = {}
    for (j, k, l), poly in data.structure.items():
        if not poly.is_constant():
            raise ModelError(
                "algebroid structure functions must be constant to define "
                "the acting Lie algebra"
            )
        gamma[(j, k, l)] = poly.constant_value()
    try:
        return LieData(data.r, gamma)
    except LieDataError as exc:
        raise ModelError(str(exc)) from exc


@dataclass
class ModelSpec:
    kind: str
    payload: dict[str, Any]
    caps_hint: dict[str, int] | None
    path: str | None = None

    # lazily built domain objects ------------------------------------------

    def gamma_shape(self) -> tuple[int, int]:
        return int(self.payload["m"]), int(self.payload["r"])

    def weil_complex(self) -> WeilComplex:
        return WeilComplex(lie_from_json(self.payload["lie"]))

    def weil_restriction_name(self) -> str:
        return self.payload.get("restriction", "full")

    def algebroid_data(self) -> AlgebroidData:
        return algebroid_from_json(self.payload["algebroid"])

    def algebroid_lie(self) -> LieData:
        if "lie" in self.payload:
            return lie_from_json(self.payload["lie"])
        return transformation_lie(self.algebroid_data())

    def tensor_parts(self) -> tuple["ModelSpec", "ModelSpec"]:
        left = ModelSpec("weil", self.payload["left"], None, self.path)
        right_payload = self.payload["right"]
        right = ModelSpec(right_payload["kind"], right_payload, None, self.path)
        return left, right

    def atlas(self) -> Atlas:
        charts = []
        for entry in self.payload["charts"]:
            charts.append(Chart(str(entry["id"]), algebroid_from_json(entry["algebroid"])))
        if not charts:
            raise ModelError("atlas needs at least one chart")
        m = charts[0].algebroid.m
        transitions: dict[tuple[int, int], Transition] = {}
        for entry in self.payload.get("transitions", []):
            lam, mu = int(entry["from_chart"]), int(entry["to_chart"])
            matrix = [[parse_scalar(x) for x in row] for row in entry["base_matrix"]]
            shift = [parse_scalar(x) for x in entry["base_shift"]]
            bundle = [
                [poly_from_json(p, m) for p in row] for row in entry["bundle"]
            ]
            bundle_inv = [
                [poly_from_json(p, m) for p in row] for row in entry["bundle_inverse"]
            ]
            tr = Transition(matrix, shift, bundle, bundle_inv)
            transitions[(lam, mu)] = tr
            if (mu, lam) not in transitions:
                transitions[(mu, lam)] = invert_transition(tr, m)
        try:
            return Atlas(charts, transitions)
        except AtlasError as exc:
            raise ModelError(str(exc)) from exc


def load_model(path: str) -> ModelSpec:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            raw = json.load(handle)
    except (OSError, json.JSONDecodeError) as exc:
        raise ModelError(f"cannot read model file {path}: {exc}") from exc
    if not isinstance(raw, dict) or raw.get("schema") != MODEL_SCHEMA:
        raise ModelError(f"{path}: missing or unsupported schema (want {MODEL_SCHEMA})")
    kind = raw.get("kind")
    if kind not in ("gamma", "weil", "algebroid", "atlas", "tensor"):
        raise ModelError(f"{path}: unknown model kind {kind!r}")
    caps_hint = raw.get("caps")
    if caps_hint is not None:
        if not isinstance(caps_hint, dict) or not set(caps_hint) <= {
            "max_weight",
            "max_poly_degree",
        }:
            raise ModelError(f"{path}: bad caps block {caps_hint!r}")
        caps_hint = {k: int(v) for k, v in caps_hint.items()}
    spec = ModelSpec(kind, raw, caps_hint, path)
    _validate_spec(spec)
    return spec


def _validate_spec(spec: ModelSpec) -> None:
    """Run all load-time axiom checks for the spec's kind."""
    kind = spec.kind
    if kind == "gamma":
        m, r = spec.gamma_shape()
        if m < 0 or r < 0:
            raise ModelError("gamma model needs m, r >= 0")
    elif kind == "weil":
        spec.weil_complex()
        if spec.weil_restriction_name() not in ("full", "wprime"):
            raise ModelError(f"unknown weil restriction {spec.weil_restriction_name()!r}")
    elif kind == "algebroid":
        data = spec.algebroid_data()
        lie = spec.algebroid_lie()
        if lie.dim != data.r:
            raise ModelError("acting Lie algebra dimension must equal the rank")
    elif kind == "atlas":
        spec.atlas()
    elif kind == "tensor":
        left, right = spec.tensor_parts()
        if left.kind != "weil":
            raise ModelError("tensor left factor must be a weil model")
        _validate_spec(left)
        if right.kind not in ("weil", "algebroid"):
            raise ModelError("tensor right factor must be weil or algebroid")
        _validate_spec(right)


def model_info(spec: ModelSpec) -> dict[str, Any]:
    from .reports import file_digest

    info: dict[str, Any] = {"kind": spec.kind}
    if spec.path:
        info["path"] = spec.path.rsplit("/", 1)[-1]
        info["sha256"] = file_digest(spec.path)
    if spec.caps_hint:
        info["caps_hint"] = spec.caps_hint
    return info
