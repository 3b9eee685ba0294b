"""Declarative scenario files: load, save, and the value codecs they share.

The format is deliberately dumb text: every matrix is written out as rows
of [re, im] pairs, construction trees are plain nested arrays, and nothing
is ever evaluated, so a file can be audited line by line before its numbers
feed an exact certificate.  Parsing goes through the standard TOML reader;
writing emits the same restricted subset by hand.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Optional

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:                      # python < 3.11
    import tomli as tomllib

from .flow import FlowConfig
from .groups import AlgebraElement, GroupDescriptor, StructuralError, Weight
from .moments import Flat, FubiniStudy, LogProfile, PowerProfile, ProductSum, \
    RadialPotential
from .reps import build_representation, tuple_tree
from .scenarios import EmbedMap, PointDomain, UnipotentScenario

SCHEMA_VERSION = 1


# ---------------------------------------------------------------------------
# scalar codecs, shared with the result serializers

def complex_pair(z) -> list:
    """Complex number as a [re, im] pair of repr strings."""
    z = complex(z)
    return [repr(z.real), repr(z.imag)]


def parse_complex_pair(pair) -> complex:
    re, im = pair
    return complex(float(re), float(im))


def fraction_str(f: Fraction) -> str:
    f = Fraction(f)
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def matrix_literal(m) -> list:
    m = np.asarray(m, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def parse_matrix(lit) -> np.ndarray:
    rows = []
    for row in lit:
        rows.append([complex(float(re), float(im)) for re, im in row])
    m = np.asarray(rows, dtype=complex)
    if m.ndim != 2:
        raise StructuralError("matrix literal must be a list of rows")
    return m


def vector_literal(v) -> list:
    v = np.asarray(v, dtype=complex).reshape(-1)
    return [[float(z.real), float(z.imag)] for z in v]


def parse_vector(lit) -> np.ndarray:
    return np.asarray([complex(float(re), float(im)) for re, im in lit],
                      dtype=complex)


def _tree_literal(tree) -> list:
    return [(_tree_literal(t) if isinstance(t, (list, tuple)) else t)
            for t in tree]


# ---------------------------------------------------------------------------
# scenario -> dict

def _fs_trees(model) -> list:
    if isinstance(model, FubiniStudy):
        return [model.rep.tree]
    out = []
    for part in model.parts:
        out.extend(_fs_trees(part))
    return out


def scenario_to_dict(s: UnipotentScenario,
                     cfg: Optional[FlowConfig] = None) -> dict:
    doc = {
        "schema": SCHEMA_VERSION,
        "tag": s.tag,
        "group": {"factors": list(s.group.factors)},
        "unipotent": {
            "n_basis": [[matrix_literal(b) for b in xi.blocks]
                        for xi in s.n_basis],
            "domain_action": [matrix_literal(a) for a in s.domain_action],
        },
        "extension": {
            "trees": [_tree_literal(t) for t in _fs_trees(s.extension_model)],
            "transitive": s.extension_transitive,
        },
        "embedding": {
            "domain_dim": s.embed.domain_dim,
            "slots": [
                {"kind": kind,
                 ("matrix" if kind == "linear" else "vector"):
                     (matrix_literal(m) if kind == "linear"
                      else vector_literal(m))}
                for kind, m in s.embed.slots
            ],
        },
        "domain": {
            "kind": s.x_domain.kind,
            "include_pole": s.grid_includes_pole,
        },
    }
    if s.slice_c is not None:
        doc["slice_c"] = float(s.slice_c)
    if s.x_domain.data:
        doc["domain"]["vectors"] = [vector_literal(v) for v in s.x_domain.data]
    if not s.reductive_only:
        orbit = {"tree": _tree_literal(s.orbit_rep.tree),
                 "v_base": vector_literal(s.v_base)}
        if isinstance(s.gn_model, Flat):
            orbit["model"] = "flat"
        else:
            orbit["model"] = "radial"
            profile = s.gn_model.profile
            if isinstance(profile, LogProfile):
                orbit["family"] = "log"
                orbit["c"] = float(profile.c)
            elif isinstance(profile, PowerProfile):
                orbit["family"] = "power"
            else:
                raise StructuralError(
                    "only the log and power radial families serialize")
        doc["orbit"] = orbit
    if s.cone_metadata is not None:
        doc["cone"] = {
            "weights": [[list(c) for c in lam.coords]
                        for lam in s.cone_metadata],
        }
    if cfg is not None:
        doc["flow"] = {
            "max_iters": cfg.max_iters,
            "tol": cfg.tol,
            "initial_step": cfg.initial_step,
            "armijo_shrink": cfg.armijo_shrink,
            "armijo_decrease": cfg.armijo_decrease,
            "stall_window": cfg.stall_window,
            "stall_rtol": cfg.stall_rtol,
        }
    return doc


# ---------------------------------------------------------------------------
# dict -> scenario

def scenario_from_dict(doc: dict):
    """Build (scenario, flow config) from parsed file data."""
    if doc.get("schema") != SCHEMA_VERSION:
        raise StructuralError(
            f"unsupported scenario schema {doc.get('schema')!r}")
    try:
        group = GroupDescriptor(tuple(doc["group"]["factors"]))
        uni = doc["unipotent"]
        n_basis = tuple(
            AlgebraElement(group, tuple(parse_matrix(b) for b in blocks),
                           compact=False)
            for blocks in uni["n_basis"])
        domain_action = tuple(parse_matrix(a) for a in uni["domain_action"])

        ext = doc["extension"]
        leaves = [FubiniStudy(build_representation(group, tuple_tree(t)))
                  for t in ext["trees"]]
        extension = leaves[0] if len(leaves) == 1 else ProductSum(tuple(leaves))

        emb = doc["embedding"]
        slots = []
        for slot in emb["slots"]:
            if slot["kind"] == "linear":
                slots.append(("linear", parse_matrix(slot["matrix"])))
            else:
                slots.append(("constant", parse_vector(slot["vector"])))
        embed = EmbedMap(int(emb["domain_dim"]), tuple(slots))

        dom = doc.get("domain", {})
        x_domain = PointDomain(
            dom.get("kind", "full"),
            tuple(parse_vector(v) for v in dom.get("vectors", ())))

        orbit_rep = v_base = gn_model = None
        if "orbit" in doc:
            orbit = doc["orbit"]
            orbit_rep = build_representation(group, tuple_tree(orbit["tree"]))
            v_base = parse_vector(orbit["v_base"])
            if orbit["model"] == "flat":
                gn_model = Flat(orbit_rep)
            elif orbit["model"] == "radial":
                family = orbit.get("family", "log")
                if family == "log":
                    profile = LogProfile(float(orbit["c"]))
                elif family == "power":
                    profile = PowerProfile()
                else:
                    raise StructuralError(f"unknown radial family {family!r}")
                gn_model = RadialPotential(orbit_rep, profile)
            else:
                raise StructuralError(
                    f"unknown orbit model {orbit['model']!r}")

        cone_metadata = None
        if "cone" in doc:
            cone_metadata = tuple(
                Weight(group, tuple(tuple(int(x) for x in c) for c in w))
                for w in doc["cone"]["weights"])

        scenario = UnipotentScenario(
            tag=str(doc.get("tag", "scenario")),
            group=group,
            n_basis=n_basis,
            embed=embed,
            domain_action=domain_action,
            x_domain=x_domain,
            extension_model=extension,
            orbit_rep=orbit_rep,
            v_base=v_base,
            gn_model=gn_model,
            cone_metadata=cone_metadata,
            extension_transitive=bool(ext.get("transitive", False)),
            slice_c=(float(doc["slice_c"]) if "slice_c" in doc else None),
            grid_includes_pole=bool(dom.get("include_pole", True)),
        )
    except KeyError as exc:
        raise StructuralError(f"scenario file is missing {exc}") from exc

    flow = doc.get("flow", {})
    cfg = FlowConfig(
        max_iters=int(flow.get("max_iters", FlowConfig.max_iters)),
        tol=float(flow.get("tol", FlowConfig.tol)),
        initial_step=float(flow.get("initial_step", FlowConfig.initial_step)),
        armijo_shrink=float(flow.get("armijo_shrink", FlowConfig.armijo_shrink)),
        armijo_decrease=float(flow.get("armijo_decrease",
                                       FlowConfig.armijo_decrease)),
        stall_window=int(flow.get("stall_window", FlowConfig.stall_window)),
        stall_rtol=float(flow.get("stall_rtol", FlowConfig.stall_rtol)),
    )
    return scenario, cfg


# ---------------------------------------------------------------------------
# text round trip

def _toml_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int, float, str)):
        return json.dumps(v)
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_toml_value(x) for x in v) + "]"
    if isinstance(v, dict):
        return "{" + ", ".join(f"{k} = {_toml_value(x)}" for k, x in v.items()) \
            + "}"
    raise StructuralError(f"cannot serialize {type(v).__name__}")


def dumps_scenario(s: UnipotentScenario,
                   cfg: Optional[FlowConfig] = None) -> str:
    doc = scenario_to_dict(s, cfg)
    lines = []
    for k, v in doc.items():
        if not isinstance(v, dict):
            lines.append(f"{k} = {_toml_value(v)}")
    for k, v in doc.items():
        if isinstance(v, dict):
            lines.append("")
            lines.append(f"[{k}]")
            for kk, vv in v.items():
                lines.append(f"{kk} = {_toml_value(vv)}")
    return "\n".join(lines) + "\n"


def loads_scenario(text: str):
    try:
        doc = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise StructuralError(f"scenario file does not parse: {exc}") from exc
    return scenario_from_dict(doc)


def save_scenario(s: UnipotentScenario, path,
                  cfg: Optional[FlowConfig] = None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_scenario(s, cfg))


def load_scenario(path):
    with open(path, "rb") as fh:
        try:
            doc = tomllib.load(fh)
        except tomllib.TOMLDecodeError as exc:
            raise StructuralError(f"scenario file does not parse: {exc}") from exc
    return scenario_from_dict(doc)


__all__ = [
    "SCHEMA_VERSION",
    "complex_pair",
    "parse_complex_pair",
    "fraction_str",
    "matrix_literal",
    "parse_matrix",
    "vector_literal",
    "parse_vector",
    "scenario_to_dict",
    "scenario_from_dict",
    "dumps_scenario",
    "loads_scenario",
    "save_scenario",
    "load_scenario",
]
