"""Experiment configs: one assignment per line, flat dotted keys, strict parsing.

Example::

    scenario = simulate
    grid.a = 0
    grid.b = 1
    grid.n = 128
    coefficients.r = const(2)
    coefficients.A = const(1)
    coefficients.p = 1
    kernel = blind(const(1))
    dynamics.u0 = const(0.1)
    dynamics.dt = 1e-3
    dynamics.t_end = 20
    convergence.target = steady_blind
    convergence.tol = 1e-4

'#' starts a comment. Duplicate keys, malformed lines and keys a scenario
does not consume are reported with their line numbers.
"""

from __future__ import annotations

import hashlib
import re
from pathlib import Path

from .errors import ConfigError

_KEY_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_.]*$")


class ExperimentConfig:
    """Parsed config with typed access and unused-key accounting."""

    def __init__(self, entries: dict[str, str], lines: dict[str, int],
                 text: str, path: str = "<config>"):
        self._entries = entries
        self._lines = lines
        self._consumed: set[str] = set()
        self.path = path
        self.sha256 = hashlib.sha256(text.encode()).hexdigest()

    # -- parsing ------------------------------------------------------------
    @classmethod
    def from_text(cls, text: str, path: str = "<config>") -> "ExperimentConfig":
        entries: dict[str, str] = {}
        lines: dict[str, int] = {}
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"expected 'key = value', got {raw!r}", path, lineno)
            key, value = line.split("=", 1)
            key = key.strip()
            value = value.strip()
            if not _KEY_RE.match(key):
                raise ConfigError(f"bad key {key!r}", path, lineno)
            if key in entries:
                raise ConfigError(f"duplicate key {key!r} (first seen on line {lines[key]})",
                                  path, lineno)
            if not value:
                raise ConfigError(f"empty value for {key!r}", path, lineno)
            entries[key] = value
            lines[key] = lineno
        return cls(entries, lines, text, path)

    @classmethod
    def from_file(cls, path: str | Path) -> "ExperimentConfig":
        p = Path(path)
        return cls.from_text(p.read_text(), str(p))

    # -- typed access -------------------------------------------------------
    _MISSING = object()

    def _raw(self, key: str, default=_MISSING) -> str:
        if key in self._entries:
            self._consumed.add(key)
            return self._entries[key]
        if default is self._MISSING:
            raise ConfigError(f"missing required key {key!r}", self.path)
        return default

    def has(self, key: str) -> bool:
        return key in self._entries

    def get_str(self, key: str, default=_MISSING) -> str:
        return self._raw(key, default)

    def get_float(self, key: str, default=_MISSING) -> float:
        raw = self._raw(key, default)
        if isinstance(raw, (int, float)):
            return float(raw)
        try:
            return float(raw)
        except ValueError:
            raise ConfigError(f"key {key!r}: {raw!r} is not a number",
                              self.path, self._lines.get(key)) from None

    def get_int(self, key: str, default=_MISSING) -> int:
        raw = self._raw(key, default)
        if isinstance(raw, int):
            return raw
        try:
            return int(str(raw), 10)
        except ValueError:
            raise ConfigError(f"key {key!r}: {raw!r} is not an integer",
                              self.path, self._lines.get(key)) from None

    def get_bool(self, key: str, default=_MISSING) -> bool:
        raw = self._raw(key, default)
        if isinstance(raw, bool):
            return raw
        if raw in ("true", "yes", "1"):
            return True
        if raw in ("false", "no", "0"):
            return False
        raise ConfigError(f"key {key!r}: {raw!r} is not a boolean",
                          self.path, self._lines.get(key))

    def get_floats(self, key: str, default=_MISSING) -> list[float]:
        raw = self._raw(key, default)
        if isinstance(raw, (list, tuple)):
            return [float(v) for v in raw]
        try:
            return [float(v) for v in str(raw).split(",") if v.strip()]
        except ValueError:
            raise ConfigError(f"key {key!r}: {raw!r} is not a number list",
                              self.path, self._lines.get(key)) from None

    def get_ints(self, key: str, default=_MISSING) -> list[int]:
        raw = self._raw(key, default)
        if isinstance(raw, (list, tuple)):
            return [int(v) for v in raw]
        try:
            return [int(v, 10) for v in str(raw).split(",") if v.strip()]
        except ValueError:
            raise ConfigError(f"key {key!r}: {raw!r} is not an integer list",
                              self.path, self._lines.get(key)) from None

    # -- strictness ---------------------------------------------------------
    def require_all_consumed(self) -> None:
        unused = sorted(set(self._entries) - self._consumed)
        if unused:
            locs = ", ".join(f"{k} (line {self._lines[k]})" for k in unused)
            raise ConfigError(f"unknown keys for this scenario: {locs}", self.path)
