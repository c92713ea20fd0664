"""Structured reports and their JSON text form (floats at 17 significant digits)."""

import json
import math

import numpy as np

from .enumerator import label
from .hosvd import three_qubit_identities
from .tensor_core import ComplexTensor

SCHEMA_VERSION = 1


def _idx(idx):
    return label(idx) if all(i < 10 for i in idx) else ",".join(str(i) for i in idx)


def _cplx(v):
    v = complex(v)
    return [v.real, v.imag]


def core_amplitudes(t, threshold):
    return {_idx(k): _cplx(v) for k, v in sorted(t.amplitudes(threshold).items())}


def hosvd_section(res, threshold=1e-9):
    sec = {
        "dims": list(res.core.dims),
        "sigma_sq": [[float(x) for x in s] for s in res.sigma_sq],
        "aoc_residual": float(res.aoc_residual),
        "degenerate_modes": sorted(res.degenerate_modes),
        "normalized_input": bool(res.normalized_input),
        "core": core_amplitudes(res.core, threshold),
        "factors": [[[_cplx(x) for x in row] for row in np.asarray(u)] for u in res.factors],
    }
    if res.core.dims == (2, 2, 2):
        sec["identities"] = three_qubit_identities(res.core)
    return sec


def family_entry(rec):
    return {
        "id": rec.family_id,
        "support": sorted(label(s) for s in rec.support),
        "constraints": [[[label(a), label(b)] for a, b in c] for c in rec.constraints],
        "signature": [list(g) for g in rec.signature],
        "generic": rec.generic,
    }


def classification_section(rec):
    return {
        "sigma1_sq": list(rec.sigma1_sq),
        "polytope_coordinates": list(rec.sigma1_sq),
        "signature": [list(g) for g in rec.equality_signature],
        "signature_margin": rec.signature_margin,
        "near_boundary": rec.near_boundary,
        "family": rec.family_id,
        "containing_families": list(rec.containing_families),
        "core_support": sorted(label(s) for s in rec.core_support),
        "flags": dict(rec.flags),
    }


def enumeration_section(result, include_nongeneric=False):
    recs = result.all_records() if include_nongeneric else result.families
    return {
        "n_qubits": result.n_qubits,
        "families": [family_entry(r) for r in recs],
        "generic_count": len(result.families),
        "nongeneric_count": len(result.nongeneric),
        "checks": {str(k): v for k, v in result.checks.items()},
        "total_checks": result.total_checks,
        "iterations": result.iterations,
    }


def document(**sections):
    doc = {"schema_version": SCHEMA_VERSION}
    doc.update(sections)
    return doc


def _num(x):
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if math.isnan(x) or math.isinf(x):
        # JSON has no inf/nan
        return "null"
    s = f"{x:.17g}"
    return s if "." in s or "e" in s else s + ".0"


def dumps(obj, indent=2, _level=0):
    """json.dumps lookalike that prints every float with 17 significant digits."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple)) for v in obj):
            return "[" + ", ".join(dumps(v, indent, _level + 1) for v in obj) + "]"
        items = [pad + dumps(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    if obj is None:
        return "null"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, (bool, int, float, np.bool_, np.integer, np.floating)):
        return _num(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return dumps(_cplx(obj), indent, _level)
    if isinstance(obj, ComplexTensor):
        return dumps(core_amplitudes(obj, 0.0), indent, _level)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def load_schema():
    from importlib.resources import files

    return json.loads(files("hosvdq").joinpath("report_schema.json").read_text())
