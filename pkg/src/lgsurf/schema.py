"""JSON schema of CLI output: a top-level object {input, config, report}.

Numbers are IEEE doubles (non-finite values are written as null), signs are
integers in {-1, 0, 1}, and blocks that do not apply are null rather than absent.
"""
from __future__ import annotations

NUM = {"type": "number"}
NUM_OR_NULL = {"type": ["number", "null"]}
SIGN = {"type": "integer", "enum": [-1, 0, 1]}
SIGN_OR_NULL = {"type": ["integer", "null"], "enum": [-1, 0, 1, None]}
BOOL_OR_NULL = {"type": ["boolean", "null"]}


def _vec(n, item=NUM):
    return {"type": "array", "items": item, "minItems": n, "maxItems": n}


def _obj(props: dict, nullable: bool = False) -> dict:
    out = {"type": ["object", "null"] if nullable else "object", "properties": props,
           "required": sorted(props), "additionalProperties": False}
    return out


CLASS2 = {"type": "string", "enum": ["2-isotropic", "2-parabolic", "2-elliptic", "2-hyperbolic"]}

RULED = _obj({
    "Lambda11": NUM, "Lambda12": NUM, "Lambda111": NUM, "Lambda121": NUM, "Lambda121_alt": NUM,
    "delta1": SIGN, "delta2": SIGN, "zeta": NUM_OR_NULL, "zeta1": NUM_OR_NULL, "zeta2": NUM_OR_NULL,
    "swapped": {"type": "boolean"},
}, nullable=True)

GENERIC = _obj({
    "kappa1": NUM, "kappa2": NUM, "tau": NUM, "epsilon": {"type": "integer", "enum": [-1, 1]},
    "bbar12": NUM, "bbar21": NUM, "kappa_G": NUM, "kappa_H2": NUM,
    "frame_kappa1": NUM, "frame_kappa2": NUM, "frame_tau": NUM, "frame_tau_eps": NUM,
    "coframe_bbar12": NUM, "coframe_bbar21": NUM, "coframe_factors": _vec(2),
}, nullable=True)

INVARIANTS = _obj({
    "surface_type": {"type": "string"},
    "base_point": _vec(3),
    "iota": {"type": "integer", "enum": [-1, 1]},
    "gamma": NUM, "I1": NUM, "I2": NUM, "I3": NUM,
    "epsilon": SIGN_OR_NULL,
    "class2": CLASS2,
    "lambdas": {"type": "object", "additionalProperties": NUM_OR_NULL},
    "swapped": {"type": "boolean"},
    "ruled": RULED,
    "generic": GENERIC,
    "conjugate": _obj({"point": _vec(5), "dim": {"type": "integer", "enum": [0, 1, 2]},
                       "label": {"type": "string"}}, nullable=True),
    "contact_spheres": _obj({"plus": _vec(5), "minus": _vec(5)}, nullable=True),
    "dupin": BOOL_OR_NULL,
    "csi_candidate": BOOL_OR_NULL,
})

CHECKS = _obj({
    "syzygy": _vec(3, NUM_OR_NULL),
    "integrability": NUM_OR_NULL,
})

SURFACE_REPORT = _obj({"invariants": INVARIANTS, "checks": CHECKS})

SAMPLE = _obj({
    "point": _vec(3),
    "status": {"type": "string", "enum": ["ok", "not-hyperbolic", "failed"]},
    "detail": {"type": "string"},
    "report": {"oneOf": [{"type": "null"}, INVARIANTS]},
})

PDE_REPORT = _obj({
    "pde_class": {"type": "string", "enum": [
        "MA", "Goursat", "generic-2-elliptic", "generic-2-hyperbolic", "mixed",
        "non-hyperbolic-at-samples"]},
    "csi": BOOL_OR_NULL,
    "spreads": {"type": "object", "additionalProperties": NUM_OR_NULL},
    "fibers": {"type": "array", "items": _obj({
        "fiber": {"type": "object", "additionalProperties": NUM},
        "error": {"type": ["string", "null"]},
        "samples": {"type": "array", "items": SAMPLE},
    })},
})

TABLES_REPORT = _obj({
    "rows": {"type": "array", "items": _obj({
        "group": {"type": "string"}, "name": {"type": "string"}, "equation": {"type": "string"},
        "expected": {"type": "object"}, "computed": {"type": "object"},
        "verdicts": {"type": "object", "additionalProperties": {"type": "boolean"}},
        "error": {"type": ["string", "null"]}, "pass": {"type": "boolean"},
    })},
    "passed": {"type": "integer"},
    "total": {"type": "integer"},
})

CONFIG = _obj({
    "command": {"type": "string"},
    "order": {"type": "integer", "minimum": 1},
    "tol": NUM,
    "samples": {"type": ["integer", "null"]},
    "seed": {"type": ["integer", "null"]},
    "format": {"type": "string", "enum": ["json", "csv", "text"]},
})

SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "lgsurf report",
    "type": "object",
    "required": ["input", "config", "report"],
    "additionalProperties": False,
    "properties": {
        "input": {"type": "object"},
        "config": CONFIG,
        "report": {"oneOf": [SURFACE_REPORT, PDE_REPORT, TABLES_REPORT]},
    },
}
