"""Coefficient schedules: rules producing alpha_{n,N} in the open unit disk."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

import numpy as np

from .errors import ConfigError, DomainError, OutOfRangeError, UnsupportedVariantError

# Sampled values on or outside the circle are pulled back to this modulus.
CLAMP_MODULUS = 1.0 - 1e-12


def _clamp(value: complex) -> complex:
    r = abs(value)
    if r >= 1.0:
        return complex(value) * (CLAMP_MODULUS / r)
    return complex(value)


# ---------------------------------------------------------------------------
# limit profiles s -> alpha(s)


@dataclass(frozen=True)
class Expression:
    """A named limit profile on [0, t].

    ``inverse`` maps a modulus level back to s when the profile is monotone,
    ``monotone`` is ``"increasing"``, ``"decreasing"`` or ``None``.
    """

    name: str
    func: Callable
    params: Mapping = field(default_factory=dict)
    inverse: Callable | None = None
    monotone: str | None = None

    def __call__(self, s):
        return self.func(s)


def power(omega: float) -> Expression:
    if omega <= 0:
        raise DomainError("power profile needs omega > 0")
    return Expression(
        "power",
        lambda s: np.power(s, omega),
        {"omega": omega},
        inverse=lambda x: np.power(x, 1.0 / omega),
        monotone="increasing",
    )


def exponential(zeta: float) -> Expression:
    if not 0 < zeta < 1:
        raise DomainError("exponential profile needs 0 < zeta < 1")
    lz = math.log(zeta)
    return Expression(
        "exp",
        lambda s: np.power(zeta, s),
        {"zeta": zeta},
        inverse=lambda x: np.log(x) / lz,
        monotone="decreasing",
    )


def sqrt_profile() -> Expression:
    """s -> sqrt(1 - s^2)."""
    return Expression(
        "sqrt",
        lambda s: np.sqrt(np.clip(1.0 - np.square(s), 0.0, None)),
        {},
        inverse=lambda x: np.sqrt(np.clip(1.0 - np.square(x), 0.0, None)),
        monotone="decreasing",
    )


def sine(t: float) -> Expression:
    """s -> sin(pi s / t); not monotone on [0, t]."""
    return Expression("sine", lambda s: np.sin(np.pi * np.asarray(s) / t), {"t": t})


def constant_profile(value: complex) -> Expression:
    value = complex(value)
    return Expression("constant", lambda s: np.full(np.shape(s), value) if np.ndim(s) else value,
                      {"value": value})


def piecewise_linear(knots: Sequence[float], values: Sequence[complex]) -> Expression:
    knots = np.asarray(knots, dtype=float)
    values = np.asarray(values, dtype=complex)
    if knots.shape != values.shape or knots.size < 2 or np.any(np.diff(knots) <= 0):
        raise DomainError("piecewise table needs >= 2 increasing knots with matching values")

    def f(s):
        s = np.asarray(s, dtype=float)
        out = np.interp(s, knots, values.real) + 1j * np.interp(s, knots, values.imag)
        return out if out.ndim else complex(out)

    return Expression("piecewise", f, {"knots": knots.tolist(), "values": values.tolist()})


# ---------------------------------------------------------------------------
# schedule variants


@dataclass(frozen=True)
class Constant:
    alpha: complex

    def __post_init__(self):
        if abs(self.alpha) >= 1:
            raise DomainError("constant coefficient must lie in the open disk")


@dataclass(frozen=True)
class Periodic:
    values: tuple

    def __post_init__(self):
        vals = tuple(complex(v) for v in self.values)
        if not vals:
            raise DomainError("periodic schedule needs at least one coefficient")
        if any(abs(v) >= 1 for v in vals):
            raise DomainError("periodic coefficients must lie in the open disk")
        object.__setattr__(self, "values", vals)

    @property
    def period(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class SampledFunction:
    """alpha_{n,N} = f((n + shift)/N) for n <= tN, and 0 beyond."""

    func: Callable
    t: float = 1.0
    shift: float = 0.0

    def __post_init__(self):
        if self.t <= 0:
            raise DomainError("t must be positive")


@dataclass(frozen=True)
class Table:
    """Explicit coefficient lists keyed by N (``None`` means any N)."""

    rows: Mapping

    def row(self, N):
        if N in self.rows:
            return self.rows[N]
        if None in self.rows:
            return self.rows[None]
        raise OutOfRangeError(f"no table row for N={N}")


Schedule = Constant | Periodic | SampledFunction | Table


def coefficient(schedule, n: int, N: int) -> complex:
    if n < 0:
        raise OutOfRangeError("coefficient index must be non-negative")
    if isinstance(schedule, Constant):
        return complex(schedule.alpha)
    if isinstance(schedule, Periodic):
        return schedule.values[n % schedule.period]
    if isinstance(schedule, SampledFunction):
        if N <= 0:
            raise DomainError("N must be positive")
        if n > schedule.t * N + 1e-9:
            return 0j
        return _clamp(complex(schedule.func((n + schedule.shift) / N)))
    if isinstance(schedule, Table):
        row = schedule.row(N)
        if n >= len(row):
            raise OutOfRangeError(f"table row for N={N} has only {len(row)} entries")
        value = complex(row[n])
        if abs(value) >= 1:
            raise DomainError("table entries must lie in the open disk")
        return value
    raise UnsupportedVariantError(f"unknown schedule type {type(schedule).__name__}")


def coefficients(schedule, count: int, N: int) -> np.ndarray:
    """alpha_{0,N}, ..., alpha_{count-1,N} as a complex array."""
    if isinstance(schedule, Constant):
        return np.full(count, complex(schedule.alpha))
    if isinstance(schedule, SampledFunction) and count:
        if N <= 0:
            raise DomainError("N must be positive")
        idx = np.arange(count)
        live = idx <= schedule.t * N + 1e-9
        out = np.zeros(count, dtype=complex)
        if live.any():
            vals = np.asarray(schedule.func((idx[live] + schedule.shift) / N), dtype=complex)
            vals = np.broadcast_to(vals, (int(live.sum()),)).copy()
            r = np.abs(vals)
            big = r >= 1.0
            vals[big] *= CLAMP_MODULUS / r[big]
            out[live] = vals
        return out
    return np.array([coefficient(schedule, k, N) for k in range(count)], dtype=complex)


def limit_function(schedule):
    """The limit profile s -> alpha(s); a tuple of profiles for periodic schedules."""
    if isinstance(schedule, Constant):
        return constant_profile(schedule.alpha)
    if isinstance(schedule, Periodic):
        return tuple(constant_profile(v) for v in schedule.values)
    if isinstance(schedule, SampledFunction):
        return schedule.func
    raise UnsupportedVariantError("tables carry no limit profile")


# ---------------------------------------------------------------------------
# construction from plain dictionaries (config files)


def _complex_from(value) -> complex:
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise ConfigError(f"complex value must be [re, im], got {value!r}")
        return complex(float(value[0]), float(value[1]))
    if isinstance(value, Mapping):
        if "angle" in value:
            return complex(np.exp(1j * float(value["angle"])) * float(value.get("modulus", 1.0)))
        return complex(float(value.get("re", 0.0)), float(value.get("im", 0.0)))
    return complex(value)


def schedule_from_dict(table: Mapping):
    """Build a schedule from a config table such as ``{"type": "power", "omega": 1}``."""
    if "type" not in table:
        raise ConfigError("schedule needs a 'type' key")
    kind = table["type"]
    t = float(table.get("t", 1.0))
    shift = float(table.get("shift", 0.0))
    try:
        if kind == "constant":
            return Constant(_complex_from(table["alpha"]))
        if kind == "periodic":
            return Periodic(tuple(_complex_from(v) for v in table["values"]))
        if kind == "table":
            rows = {int(k) if k not in (None, "any") else None: [_complex_from(v) for v in row]
                    for k, row in table["rows"].items()}
            return Table(rows)
        if kind == "power":
            expr = power(float(table.get("omega", 1.0)))
        elif kind == "exp":
            expr = exponential(float(table.get("zeta", 0.5)))
            shift = float(table.get("shift", 1.0))
        elif kind == "sqrt":
            expr = sqrt_profile()
        elif kind == "sine":
            expr = sine(t)
        elif kind == "piecewise":
            expr = piecewise_linear(table["knots"], [_complex_from(v) for v in table["values"]])
        else:
            raise ConfigError(f"unknown schedule type {kind!r}")
    except KeyError as exc:
        raise ConfigError(f"schedule of type {kind!r} is missing key {exc}") from None
    return SampledFunction(expr, t=t, shift=shift)
