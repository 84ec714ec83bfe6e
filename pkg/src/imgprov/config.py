"""Classifier and network-probe settings.

Settings live in one JSON document. `IMGPROV_CONFIG` names a file whose
keys override the defaults below; unknown keys are rejected so typos do
not silently fall back to defaults.
"""

from __future__ import annotations

import copy
import json
import os
from pathlib import Path

ENV_VAR = "IMGPROV_CONFIG"

DEFAULT_WEIGHTS = {
    "filename_match": 5.0,
    "exif_artist_copyright_only": 3.0,
    "exif_absent": 1.0,
    "xmp_absent": 1.0,
    "iptc_absent": 1.0,
    "max_dim_eq_2048": 2.0,
    "quant_matches_facebook": 2.0,
    "exif_intact": 1.0,
    "iptc_intact": 1.0,
    "iptc_modified": 1.0,
    "xmp_intact": 1.0,
    "name_unchanged": 1.0,
    "unknown_floor": 1.0,
}

DEFAULT_CONFIG = {
    "weights": DEFAULT_WEIGHTS,
    # table_id -> 64 coefficients in natural order; harvest from real
    # Facebook downloads before relying on the compression rule
    "facebook_quant_tables": {},
    "quant_threshold": 0.02,
    "resize_threshold": 2048,
    "politeness_delay_ms": 1000,
    "max_retries": 3,
    "user_agent": "imgprov/0.1 (+research; polite crawler)",
    "flickr_date_patterns": [
        {"regex": r"Uploaded on (?P<date>[A-Z][a-z]+ \d{1,2}, \d{4})", "format": "%B %d, %Y"},
        {"regex": r"\"datePosted\"\s*:\s*\"?(?P<date>\d{9,11})", "format": "epoch"},
    ],
    "not_found_signatures": ["Page not found"],
    "privacy_signatures": [
        "This photo is private",
        "You don't have permission to view this photo",
    ],
    "facebook_login_signatures": [
        "You must log in to continue",
        "This content isn't available right now",
    ],
}


class ConfigError(ValueError):
    pass


def default_config() -> dict:
    return copy.deepcopy(DEFAULT_CONFIG)


def merge_config(overrides: dict) -> dict:
    cfg = default_config()
    if not isinstance(overrides, dict):
        raise ConfigError("config must be a JSON object")
    for key, value in overrides.items():
        if key not in cfg:
            raise ConfigError(f"unknown config key {key!r}")
        if key == "weights":
            unknown = set(value) - set(DEFAULT_WEIGHTS)
            if unknown:
                raise ConfigError(f"unknown weight(s) {sorted(unknown)}")
            bad = [k for k, w in value.items()
                   if isinstance(w, bool) or not isinstance(w, (int, float)) or w < 0]
            if bad:
                raise ConfigError(f"weights must be non-negative numbers: {bad}")
            cfg["weights"].update({k: float(w) for k, w in value.items()})
        elif key == "facebook_quant_tables":
            cfg[key] = _check_tables(value)
        else:
            cfg[key] = value
    return cfg


def _check_tables(value) -> dict:
    if not isinstance(value, dict):
        raise ConfigError("facebook_quant_tables must map table ids to 64 integers")
    tables = {}
    for tid, coeffs in value.items():
        if str(tid) not in ("0", "1", "2", "3"):
            raise ConfigError(f"quantization table id must be 0-3, got {tid!r}")
        if not isinstance(coeffs, list) or len(coeffs) != 64 \
                or not all(isinstance(c, int) and 1 <= c <= 65535 for c in coeffs):
            raise ConfigError(f"table {tid} must be 64 integers in 1..65535")
        tables[str(tid)] = coeffs
    return tables


def load_config(path=None) -> dict:
    """Defaults merged with the file at `path` (or $IMGPROV_CONFIG)."""
    if path is None:
        path = os.environ.get(ENV_VAR) or None
    if path is None:
        return default_config()
    with open(Path(path), encoding="utf-8") as fh:
        try:
            overrides = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: {exc}") from None
    return merge_config(overrides)


def reference_tables(cfg: dict) -> dict[int, tuple[int, ...]]:
    return {int(k): tuple(v) for k, v in cfg.get("facebook_quant_tables", {}).items()}
