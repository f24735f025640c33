"""Physical parameter model for the two-cavity optomechanical system.

The system is a cooling cavity (decay kappa_c) coupled to a mechanical
resonator (omega_m, gamma_m) by radiation pressure and to a pumped auxiliary
cavity (decay kappa_a) by photon tunneling J.  Both cavities are driven at
the same laser frequency omega_L = 2*pi*c/lambda.

Two detuning entry modes are supported:

* ``delta_c``      -- bare detuning of the cooling cavity; the effective
                      detuning Delta = delta_c - g0*<q>_ss is found
                      self-consistently from the classical cubic.
* ``delta_pinned`` -- the effective detuning Delta is specified directly
                      (the radiation-pressure shift is absorbed into the
                      bare detuning, which is backed out afterwards).

Exactly one of the two must be given.  Figure-style sweeps pin Delta, since
that is the quantity the cooling/entanglement results are parametrised by.

All downstream numerics work in units of omega_m (the ScaledParams view);
SI values only appear at this I/O boundary.
"""

from dataclasses import dataclass, replace

import numpy as np

from .errors import ParameterError

HBAR = 1.054571817e-34       # J s
C_LIGHT = 2.99792458e8       # m / s


@dataclass(frozen=True)
class SystemParams:
    """Laboratory (SI) parameters of a driving scenario.

    Rates and frequencies are angular (rad/s), powers in W, lengths in m,
    mass in kg.  ``nbar`` is the mean thermal occupancy of the mechanical
    bath and fixes the bath temperature through the Bose relation.
    """

    omega_m: float            # mechanical resonance
    kappa_c: float            # cooling-cavity amplitude decay
    kappa_a: float            # auxiliary-cavity amplitude decay
    gamma_m: float            # mechanical damping
    delta_a: float            # auxiliary detuning omega_a - omega_R
    tunneling_j: float        # photon tunneling J
    omega_c: float            # cooling-cavity resonance (enters g = omega_c/L)
    cavity_length: float      # L
    mass: float               # m
    power_left: float         # P_L, cooling-cavity drive
    power_right: float        # P_R, auxiliary-cavity drive
    wavelength: float         # drive wavelength (fixes omega_L = omega_R)
    nbar: float               # mechanical bath occupancy
    delta_c: float | None = None        # bare cooling-cavity detuning
    delta_pinned: float | None = None   # effective detuning, if pinned

    def __post_init__(self):
        self.validate()

    def validate(self):
        positive = ["omega_m", "kappa_c", "kappa_a", "mass", "cavity_length",
                    "omega_c", "wavelength"]
        nonnegative = ["gamma_m", "power_left", "power_right", "nbar",
                       "tunneling_j"]
        for name in positive:
            v = getattr(self, name)
            if not np.isfinite(v) or v <= 0:
                raise ParameterError(f"{name} must be finite and > 0, got {v!r}")
        for name in nonnegative:
            v = getattr(self, name)
            if not np.isfinite(v) or v < 0:
                raise ParameterError(f"{name} must be finite and >= 0, got {v!r}")
        if (self.delta_c is None) == (self.delta_pinned is None):
            raise ParameterError(
                "exactly one of delta_c / delta_pinned must be set")
        for name in ("delta_c", "delta_pinned", "delta_a"):
            v = getattr(self, name)
            if v is not None and not np.isfinite(v):
                raise ParameterError(f"{name} must be finite, got {v!r}")
        # derived quantities must come out finite
        for name in ("coupling_g0", "drive_left", "drive_right"):
            v = getattr(self, name)
            if not np.isfinite(v):
                raise ParameterError(f"derived {name} is not finite")

    @property
    def omega_l(self):
        """Drive laser angular frequency, shared by both cavities."""
        return 2.0 * np.pi * C_LIGHT / self.wavelength

    @property
    def coupling_g0(self):
        """Single-photon coupling g0 = (omega_c/L) * sqrt(hbar/(m*omega_m)).

        This is the radiation-pressure force per photon, g = omega_c/L,
        expressed against the dimensionless displacement q = x/x_scale with
        x_scale = sqrt(hbar/(m*omega_m)).
        """
        return (self.omega_c / self.cavity_length) * self.x_scale

    @property
    def x_scale(self):
        """Conversion from dimensionless q to metres: x = q * x_scale."""
        return np.sqrt(HBAR / (self.mass * self.omega_m))

    @property
    def drive_left(self):
        """Drive amplitude Omega_L = sqrt(2 P_L kappa_c / (hbar omega_L))."""
        return np.sqrt(2.0 * self.power_left * self.kappa_c
                       / (HBAR * self.omega_l))

    @property
    def drive_right(self):
        return np.sqrt(2.0 * self.power_right * self.kappa_a
                       / (HBAR * self.omega_l))

    def with_(self, **kwargs):
        """Return a copy with the given fields replaced (re-validated)."""
        return replace(self, **kwargs)

    def pin_delta(self, delta):
        """Copy with the effective detuning pinned to ``delta`` (rad/s)."""
        return replace(self, delta_pinned=delta, delta_c=None)


@dataclass(frozen=True)
class ScaledParams:
    """Dimensionless view of SystemParams: every rate divided by omega_m.

    ``omega_m`` (rad/s) is retained so the SI values can be reconstructed;
    powers and nbar are unit-free carriers of the drive amplitudes.
    """

    omega_m: float            # rad/s, the unit
    kappa_c: float
    kappa_a: float
    gamma_m: float
    delta_a: float
    j: float
    g0: float
    drive_left: float         # Omega_L / omega_m
    drive_right: float        # Omega_R / omega_m
    nbar: float
    delta_c: float | None = None
    delta_pinned: float | None = None

    @property
    def pinned(self):
        return self.delta_pinned is not None


def derive_dimensionless(params):
    """Scale all rates of ``params`` by omega_m.

    Round-tripping through the retained omega_m reproduces the SI rates to
    better than 1e-12 relative (pure division/multiplication).
    """
    params.validate()
    w = params.omega_m
    scaled = ScaledParams(
        omega_m=w,
        kappa_c=params.kappa_c / w,
        kappa_a=params.kappa_a / w,
        gamma_m=params.gamma_m / w,
        delta_a=params.delta_a / w,
        j=params.tunneling_j / w,
        g0=params.coupling_g0 / w,
        drive_left=params.drive_left / w,
        drive_right=params.drive_right / w,
        nbar=params.nbar,
        delta_c=None if params.delta_c is None else params.delta_c / w,
        delta_pinned=(None if params.delta_pinned is None
                      else params.delta_pinned / w),
    )
    for name in ("kappa_c", "kappa_a", "gamma_m", "j", "g0",
                 "drive_left", "drive_right"):
        if not np.isfinite(getattr(scaled, name)):
            raise ParameterError(f"derived {name}/omega_m is not finite")
    return scaled


def fig1_params(**overrides):
    """Baseline scenario of the reference experiment-style parameter set.

    omega_m/2pi = 10 MHz, kappa_c = kappa_a = 0.1 omega_m,
    gamma_m = 1e-5 omega_m, omega_c = 2.817e7 omega_m, P_L = 30 mW,
    m = 250 ng, nbar = 1e3, L = 0.5 mm, lambda = 1064 nm, effective
    detuning pinned at Delta = omega_m, Delta_a = 0, undriven auxiliary
    cavity (J = 0, P_R = 0) unless overridden.
    """
    omega_m = 2.0 * np.pi * 10e6
    base = dict(
        omega_m=omega_m,
        kappa_c=0.1 * omega_m,
        kappa_a=0.1 * omega_m,
        gamma_m=1e-5 * omega_m,
        delta_a=0.0,
        tunneling_j=0.0,
        omega_c=2.817e7 * omega_m,
        cavity_length=0.5e-3,
        mass=250e-12,
        power_left=30e-3,
        power_right=0.0,
        wavelength=1064e-9,
        nbar=1e3,
        delta_pinned=omega_m,
    )
    base.update(overrides)
    return SystemParams(**base)


def fig1_assisted_params(**overrides):
    """Auxiliary-cavity-assisted variant: J = 0.15 omega_m, P_R = 50 mW."""
    omega_m = 2.0 * np.pi * 10e6
    base = dict(tunneling_j=0.15 * omega_m, power_right=50e-3)
    base.update(overrides)
    return fig1_params(**base)


def fig10_params(**overrides):
    """Bistability-scan scenario: bare detuning delta_c = omega_m,
    delta_a = -omega_m, tunneling on but auxiliary drive off.

    The self-consistent (cubic) detuning mode is active here, so the
    radiation-pressure shift is resolved per drive power.
    """
    omega_m = 2.0 * np.pi * 10e6
    base = dict(
        delta_pinned=None,
        delta_c=omega_m,
        delta_a=-omega_m,
        tunneling_j=0.15 * omega_m,
        power_right=0.0,
    )
    base.update(overrides)
    return fig1_params(**base)


PRESETS = {
    "fig1": fig1_params,
    "fig1_assisted": fig1_assisted_params,
    "fig10": fig10_params,
}
