"""Validated run configuration shared by the verification suite and the CLI."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .quadrature import QuadOrders

__all__ = ["ConfigError", "RunConfig", "MIN_ORDER"]

MIN_ORDER = 4


class ConfigError(ValueError):
    """Invalid configuration; ``field`` names the offending setting."""

    def __init__(self, field_name: str, message: str):
        super().__init__(f"{field_name}: {message}")
        self.field = field_name


@dataclass(frozen=True)
class RunConfig:
    n: int = 2
    gamma: tuple = (1.0, 1.0)
    orders: QuadOrders = field(default_factory=QuadOrders)
    tol: Optional[float] = None
    rtrunc: float = 12.0
    lam: float = 1.0
    delta: float = 0.2
    out: Optional[str] = None
    fmt: str = "json"
    allow_singular: bool = False

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ConfigError("n", f"must be a positive integer, got {self.n!r}")
        gamma = tuple(float(g) for g in self.gamma)
        if len(gamma) != self.n:
            raise ConfigError("gamma", f"expected {self.n} entries, got {len(gamma)}")
        for i, g in enumerate(gamma):
            if not (g > 0 and np.isfinite(g)):
                raise ConfigError("gamma", f"entry {i} must be positive, got {g}")
        object.__setattr__(self, "gamma", gamma)
        for name in ("sphere", "shift", "radial", "transform"):
            if getattr(self.orders, name) < MIN_ORDER:
                raise ConfigError(f"order-{name}", f"must be at least {MIN_ORDER}")
        # a zero tolerance is legal: every check then fails by design
        if self.tol is not None and not (self.tol >= 0 and np.isfinite(self.tol)):
            raise ConfigError("tol", f"must be a nonnegative number, got {self.tol!r}")
        if not (self.rtrunc > 0 and np.isfinite(self.rtrunc)):
            raise ConfigError("rtrunc", f"must be positive, got {self.rtrunc!r}")
        if not (self.lam > 0 and np.isfinite(self.lam)):
            raise ConfigError("lambda", f"must be positive, got {self.lam!r}")
        if not 0 < self.delta < 1:
            raise ConfigError("delta", f"must lie in (0, 1), got {self.delta!r}")
        if self.fmt not in ("json", "csv"):
            raise ConfigError("format", f"must be 'json' or 'csv', got {self.fmt!r}")

    def echo(self) -> dict:
        """Flat, deterministic description of the configuration."""
        return {
            "n": self.n,
            "gamma": " ".join(repr(g) for g in self.gamma),
            "order_sphere": self.orders.sphere,
            "order_shift": self.orders.shift,
            "order_radial": self.orders.radial,
            "order_transform": self.orders.transform,
            "tol": "default" if self.tol is None else repr(float(self.tol)),
            "rtrunc": repr(float(self.rtrunc)),
            "lambda": repr(float(self.lam)),
            "delta": repr(float(self.delta)),
            "allow_singular": self.allow_singular,
        }
