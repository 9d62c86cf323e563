"""Config-file and catalog loading.

Tower parameters come from flat key=value files ('#' starts a comment):

    p = 7
    l = 2
    m = 1
    f = 1
    K = 12

Jet-ring settings extend the same file with n, r and D.  Curve catalogs are
JSON arrays of {label, p, a4, a6}; the packaged default covers the primes
the verification suites run at.
"""

from __future__ import annotations

import json
from importlib import resources

from .formal import WeierstrassCurve
from .tower import TowerConfig


def parse_keyvalue(text: str) -> dict:
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected key = value")
        key, val = line.split("=", 1)
        out[key.strip()] = val.strip()
    return out


def tower_config_from_text(text: str) -> TowerConfig:
    kv = parse_keyvalue(text)
    try:
        return TowerConfig(p=int(kv["p"]), l=int(kv["l"]), m=int(kv["m"]),
                           f=int(kv["f"]), K=int(kv["K"]))
    except KeyError as missing:
        raise ValueError(f"config is missing {missing}") from None


def tower_config_from_file(path: str) -> TowerConfig:
    with open(path) as fh:
        return tower_config_from_text(fh.read())


def jet_params_from_text(text: str) -> dict:
    kv = parse_keyvalue(text)
    return {k: int(kv[k]) for k in ("n", "r", "D") if k in kv}


def load_curve_catalog(path: str | None = None) -> list:
    if path is None:
        raw = resources.files("frobjet.data").joinpath(
            "curves.json").read_text()
    else:
        with open(path) as fh:
            raw = fh.read()
    return [WeierstrassCurve(p=e["p"], a4=e["a4"], a6=e["a6"],
                             label=e.get("label", ""))
            for e in json.loads(raw)]


def find_curve(catalog: list, label: str) -> WeierstrassCurve:
    for c in catalog:
        if c.label == label:
            return c
    raise KeyError(f"no curve labeled {label!r} in the catalog")
