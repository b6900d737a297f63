"""Coefficient specs: the small grammar used to define r, A, k and initial data.

A spec is one or more primitive terms joined by '+':

    const(c)                       constant c
    poly(c0,c1,...)                c0 + c1 x + c2 x^2 + ...
    cos(k,phase[,amplitude])       amplitude * cos(k pi (x-a)/(b-a) + phase)
    gaussian(center,width,amp)     amp * exp(-(x-center)^2 / (2 width^2))
    tabulated(v1,...,vn)           explicit cell values, length must match n

Terms are evaluated exactly at cell centers and summed.
"""

from __future__ import annotations

import math
import re

import numpy as np

from .errors import LengthMismatch, UnknownSpec
from .grid import Field, Grid1D

_TERM_RE = re.compile(r"^\s*([A-Za-z_][A-Za-z_0-9]*)\s*\((.*)\)\s*$", re.S)

_ARITY = {
    "const": (1, 1),
    "poly": (1, None),
    "cos": (2, 3),
    "gaussian": (3, 3),
    "tabulated": (1, None),
}


def split_top_level(text: str, sep: str = ",") -> list[str]:
    """Split on sep at paren depth zero; used for nested spec arguments."""
    parts, depth, start = [], 0, 0
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == sep and depth == 0:
            parts.append(text[start:i])
            start = i + 1
    parts.append(text[start:])
    return parts


def _parse_term(term: str) -> tuple[str, list[float]]:
    m = _TERM_RE.match(term)
    if m is None:
        raise UnknownSpec(f"malformed coefficient term {term!r}")
    name, argtext = m.group(1), m.group(2).strip()
    if name not in _ARITY:
        raise UnknownSpec(f"unknown coefficient function {name!r}")
    if argtext:
        try:
            args = [float(a) for a in split_top_level(argtext)]
        except ValueError as exc:
            raise UnknownSpec(f"bad arguments in {term!r}: {exc}") from exc
    else:
        args = []
    lo, hi = _ARITY[name]
    if len(args) < lo or (hi is not None and len(args) > hi):
        raise UnknownSpec(f"{name} takes {lo}..{hi if hi else 'any'} arguments, got {len(args)}")
    return name, args


def _eval_term(name: str, args: list[float], grid: Grid1D) -> np.ndarray:
    x = grid.centers
    if name == "const":
        return np.full(grid.n, args[0])
    if name == "poly":
        return np.polynomial.polynomial.polyval(x, np.asarray(args))
    if name == "cos":
        k, phase = args[0], args[1]
        amp = args[2] if len(args) == 3 else 1.0
        xhat = (x - grid.a) / (grid.b - grid.a)
        return amp * np.cos(k * math.pi * xhat + phase)
    if name == "gaussian":
        center, width, amp = args
        return amp * np.exp(-((x - center) ** 2) / (2.0 * width**2))
    if name == "tabulated":
        if len(args) != grid.n:
            raise LengthMismatch(f"tabulated spec has {len(args)} values, grid has {grid.n} cells")
        return np.asarray(args)
    raise UnknownSpec(name)


def sample(spec: str, grid: Grid1D) -> Field:
    """Evaluate a coefficient spec at the cell centers of grid."""
    terms = split_top_level(spec, "+")
    total = np.zeros(grid.n)
    for term in terms:
        name, args = _parse_term(term)
        total = total + _eval_term(name, args, grid)
    return Field(grid, total)
