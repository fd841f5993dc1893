"""Plain-text study configuration: sectioned key = value files.

A run is declared in an INI-style file with sections for the model, the
observation, the sampler, and the study being run, e.g.::

    [model]
    name = logistic
    n = 20
    p = 3
    support = -6:6

    [observation]
    theta0 = -0.25, 0, 0.25
    seed = 11

    [sampler]
    R = 10000
    S = 2
    seed = 42

Values are overridden by ``--override section.key=value`` flags and then by
the dedicated CLI flags (``--R``, ``--S``, ``--seed``, ...), in that order
of precedence.  The fully resolved snapshot is what run manifests record.
"""

from __future__ import annotations

import configparser
from pathlib import Path

import numpy as np

from .models import MODEL_NAMES, Model, build_model

__all__ = [
    "ConfigError",
    "load_config",
    "apply_overrides",
    "parse_vector",
    "parse_support",
    "parse_list",
    "model_from_config",
    "config_snapshot",
]


class ConfigError(ValueError):
    """Malformed or inconsistent configuration; maps to exit code 2."""


def load_config(path) -> dict:
    """Parse a config file into a {section: {key: raw string}} dict."""
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"config file not found: {path}")
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    try:
        parser.read(path, encoding="utf-8")
    except configparser.Error as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    return {section: dict(parser[section]) for section in parser.sections()}


def apply_overrides(cfg: dict, overrides) -> dict:
    """Apply ``section.key=value`` strings on top of a parsed config."""
    out = {sec: dict(kv) for sec, kv in cfg.items()}
    for item in overrides or ():
        if "=" not in item or "." not in item.split("=", 1)[0]:
            raise ConfigError(
                f"override {item!r} must look like section.key=value")
        target, value = item.split("=", 1)
        section, key = target.split(".", 1)
        out.setdefault(section, {})[key.strip()] = value.strip()
    return out


def parse_vector(text: str, name: str = "value") -> np.ndarray:
    try:
        return np.array([float(tok) for tok in str(text).replace(";", ",").split(",")
                         if tok.strip() != ""])
    except ValueError as exc:
        raise ConfigError(f"cannot parse {name} from {text!r}") from exc


def parse_list(text: str, cast=float, name: str = "value") -> list:
    try:
        return [cast(tok) for tok in str(text).split(",") if tok.strip() != ""]
    except ValueError as exc:
        raise ConfigError(f"cannot parse {name} from {text!r}") from exc


def parse_support(text: str, param_dim: int | None = None) -> np.ndarray:
    """Per-coordinate ``lo:hi`` pairs, comma separated; one pair broadcasts."""
    pairs = []
    for tok in str(text).split(","):
        tok = tok.strip()
        if not tok:
            continue
        if ":" not in tok:
            raise ConfigError(f"support entry {tok!r} must look like lo:hi")
        lo, hi = tok.split(":", 1)
        try:
            pairs.append((float(lo), float(hi)))
        except ValueError as exc:
            raise ConfigError(f"cannot parse support entry {tok!r}") from exc
    if not pairs:
        raise ConfigError("support is empty")
    arr = np.array(pairs, dtype=float)
    if param_dim is not None:
        if arr.shape[0] == 1:
            arr = np.tile(arr, (param_dim, 1))
        if arr.shape[0] != param_dim:
            raise ConfigError(
                f"support has {arr.shape[0]} coordinate ranges, expected {param_dim}")
    return arr


_BOOL = {"true": True, "1": True, "yes": True, "false": False, "0": False, "no": False}

_MODEL_KEY_TYPES = {
    "n": int, "p": int, "design_seed": int, "nu": float,
    "series_length": int, "phi": float, "n0": float, "sigma2": float,
    "summary": str,
}


def model_from_config(cfg: dict) -> Model:
    """Build the model declared in the [model] section."""
    section = cfg.get("model")
    if not section:
        raise ConfigError("config is missing a [model] section")
    params = dict(section)
    name = params.pop("name", None)
    if name is None:
        raise ConfigError("[model] section must set 'name'")
    name = name.lower()
    if name not in MODEL_NAMES:
        raise ConfigError(f"unknown model {name!r}; expected one of {MODEL_NAMES}")
    kwargs = {}
    support_text = params.pop("support", None)
    sigma_text = params.pop("sigma", None)
    infer_noise = params.pop("infer_noise", None)
    for key, raw in params.items():
        if key not in _MODEL_KEY_TYPES:
            raise ConfigError(f"[model] has unknown key {key!r} for model {name!r}")
        try:
            kwargs[key] = _MODEL_KEY_TYPES[key](raw)
        except ValueError as exc:
            raise ConfigError(f"[model] {key} = {raw!r} is not a valid value") from exc
    if infer_noise is not None:
        flag = _BOOL.get(str(infer_noise).lower())
        if flag is None:
            raise ConfigError(f"[model] infer_noise = {infer_noise!r} is not a boolean")
        kwargs["infer_noise"] = flag
        if flag:
            kwargs.pop("sigma2", None)
    if sigma_text is not None:
        rows = [r for r in str(sigma_text).split(";") if r.strip()]
        kwargs["sigma"] = np.array([[float(v) for v in r.split(",")] for r in rows])
    if support_text is not None:
        probe = build_model(name, **dict(kwargs))
        kwargs["support"] = parse_support(support_text, probe.param_dim)
    try:
        return build_model(name, **kwargs)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid [model] configuration: {exc}") from exc


def config_snapshot(cfg: dict) -> dict:
    """Resolved configuration as a JSON-ready nested dict."""
    return {sec: {k: str(v) for k, v in kv.items()} for sec, kv in sorted(cfg.items())}
