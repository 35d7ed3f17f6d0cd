"""System parameters for the driven qubit-cavity model.

All frequencies and rates are angular and expressed in units of the cavity
frequency omega_r unless the caller supplies dimensionful values consistently.
The recommended convention is omega_r = 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields, replace


@dataclass(frozen=True)
class SystemParams:
    """Model constants of the driven extended Rabi system.

    omega_r   cavity angular frequency (base unit, typically 1)
    omega_q   qubit angular frequency
    lambda_c  qubit-cavity coupling strength
    theta     mixing angle between longitudinal and transverse coupling, radians
    Omega_d   drive amplitude
    omega_L   drive angular frequency
    kappa     cavity decay rate
    gamma_q   qubit decay rate
    n_max     Fock-space truncation (highest retained photon number)
    """

    omega_r: float = 1.0
    omega_q: float = 5.0
    lambda_c: float = 0.2
    theta: float = math.pi / 2
    Omega_d: float = 0.06
    omega_L: float = 7.0
    kappa: float = 2e-3
    gamma_q: float = 1e-4
    n_max: int = 20

    def __post_init__(self) -> None:
        for name in ("omega_r", "omega_q", "lambda_c", "Omega_d", "omega_L",
                     "kappa", "gamma_q"):
            value = getattr(self, name)
            if not math.isfinite(value) or value < 0:
                raise ValueError(f"{name} must be finite and >= 0, got {value}")
        if not math.isfinite(self.theta):
            raise ValueError(f"theta must be finite, got {self.theta}")
        if int(self.n_max) != self.n_max or self.n_max < 1:
            raise ValueError(f"n_max must be an integer >= 1, got {self.n_max}")
        object.__setattr__(self, "n_max", int(self.n_max))

    @property
    def delta_q(self) -> float:
        """Drive detuning from the qubit, Delta_q = omega_L - omega_q."""
        return self.omega_L - self.omega_q

    @property
    def dim(self) -> int:
        """Total Hilbert-space dimension 2*(n_max+1)."""
        return 2 * (self.n_max + 1)

    @property
    def drive_period(self) -> float:
        """One period of the drive, 2*pi/omega_L."""
        return 2.0 * math.pi / self.omega_L

    def with_(self, **changes) -> "SystemParams":
        """Return a copy with the given fields replaced."""
        return replace(self, **changes)

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}
