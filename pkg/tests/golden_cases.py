"""Fixed spaces and checks whose reports are stored under tests/golden."""
from pathlib import Path

from lorentz_bounds.checkers import run_sense
from lorentz_bounds.cli import dumps
from lorentz_bounds.finite_space import (Diamond, geodesic_lattice, hub_preset, space_to_dict, sprinkle,
                                         validate_space)

GOLDEN_DIR = Path(__file__).parent / "golden"

# name -> (CLI generator arguments, in-process builder)
SPACES = {
    "flat_lattice": (["lattice", "--k", "0", "--hubs", "diamond", "--m", "2"],
                     lambda: geodesic_lattice(0.0, hub_preset(0.0, "diamond", 2.0), 2)),
    "ds_triangle": (["lattice", "--k", "1", "--hubs", "triangle", "--m", "3"],
                    lambda: geodesic_lattice(1.0, hub_preset(1.0, "triangle", 2.0), 3)),
    "flat_sprinkle": (["sprinkle", "--k", "0", "--n", "12", "--seed", "3", "--region", "diamond:2"],
                      lambda: sprinkle(0.0, Diamond(2.0), 12, 3)),
}

# (sense, bound, K) per space
CHECKS = {
    "flat_lattice": [("triangle", "lower", 0.0), ("triangle", "lower", -0.5),
                     ("four-point-causal", "upper", 0.5), ("hinge", "lower", 0.0)],
    "ds_triangle": [("monotonicity", "upper", 1.0), ("tau-convexity", "lower", 0.5),
                    ("strict-causal-triangle", "upper", 1.5)],
    "flat_sprinkle": [("four-point-timelike", "lower", 0.0), ("four-point-strict-causal", "lower", -0.5),
                      ("triangle", "lower", 0.0)],
}


def check_key(sense, bound, K) -> str:
    return f"{sense}/{bound}/{K!r}"


def validation_dict(S) -> dict:
    rep = validate_space(S)
    return {"ok": rep.ok, "violations": [{"kind": v.kind, "witness": list(v.witness)} for v in rep.violations],
            "not_applicable": list(rep.not_applicable)}


def golden_payload(name: str) -> dict:
    S = SPACES[name][1]()
    checks = {check_key(*c): run_sense(S, c[0], c[1], c[2]).to_dict() for c in CHECKS[name]}
    return {"space": space_to_dict(S), "validate": validation_dict(S), "checks": checks}


def golden_path(name: str) -> Path:
    return GOLDEN_DIR / f"{name}.json"


def golden_text(name: str) -> str:
    return dumps(golden_payload(name))
