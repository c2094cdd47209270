"""Runtime configuration.

Both the user config and the packaged acceptance constants use the same
minimal key=value format: one pair per line, '#' starts a comment,
blank lines ignored.  Values are coerced to int, then float, then kept
as strings.
"""

import importlib.resources
from dataclasses import dataclass, fields


def parse_kv(text):
    out = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected key=value, got {raw!r}")
        key, value = line.split("=", 1)
        out[key.strip()] = _coerce(value.strip())
    return out


def _coerce(s):
    for cast in (int, float):
        try:
            return cast(s)
        except ValueError:
            pass
    return s


@dataclass
class Config:
    c0: float = 1.0
    c1: float = 1.0
    c2: float = 1.0
    c3: float = 1.0
    kappa: float = 0.0  # 0 means "use the analytic Gaussian constant"
    trials: int = 4096
    seed: int = 0
    threads: int = 0  # 0 means "decide from HC_THREADS / core count"
    acceptance: str = ""

    def constants(self):
        return {"c0": self.c0, "c1": self.c1, "c2": self.c2, "c3": self.c3}


def load_config(path=None, overrides=None):
    """Config from defaults, then an optional file, then overrides."""
    values = {}
    if path is not None:
        with open(path, "r", encoding="utf-8") as fh:
            values.update(parse_kv(fh.read()))
    if overrides:
        values.update({k: v for k, v in overrides.items() if v is not None})
    known = {f.name for f in Config.__dataclass_fields__.values()}
    unknown = set(values) - known
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    cfg = Config(**values)
    for f in fields(Config):
        want = type(getattr(Config(), f.name))
        got = getattr(cfg, f.name)
        if want in (int, float) and isinstance(got, (int, float)):
            setattr(cfg, f.name, want(got))
        elif not isinstance(got, want):
            raise ValueError(f"config key {f.name} expects {want.__name__}")
    return cfg


def load_acceptance(path=None):
    """Calibrated acceptance-protocol constants.

    Defaults to the file shipped with the package; a path argument (or
    the Config.acceptance field) substitutes an alternative, e.g. for
    recalibration experiments.
    """
    if path:
        with open(path, "r", encoding="utf-8") as fh:
            return parse_kv(fh.read())
    text = (
        importlib.resources.files("hamcube")
        .joinpath("acceptance.cfg")
        .read_text(encoding="utf-8")
    )
    return parse_kv(text)
