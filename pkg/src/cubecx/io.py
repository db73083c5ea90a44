"""Canonical JSON: sorted keys, fixed separators, numpy scalars unwrapped."""

from __future__ import annotations

import json
from fractions import Fraction

import numpy as np


def _plain(obj):
    if hasattr(obj, "to_dict"):
        return _plain(obj.to_dict())
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, (set, frozenset)):
        return sorted(_plain(v) for v in obj)
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, Fraction):
        return str(obj) if obj.denominator != 1 else obj.numerator
    return obj


def canonical_json(obj):
    """Byte-stable JSON text (ends with a newline)."""
    return json.dumps(_plain(obj), sort_keys=True, separators=(",", ":"), ensure_ascii=True) + "\n"


def load_json(path):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)
