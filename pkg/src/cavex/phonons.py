"""Acoustic-phonon environment of the emitter.

Deformation-potential coupling to longitudinal acoustic phonons with
spherically symmetric carrier wavefunctions gives the super-Ohmic spectral
density

    J(w) = w^3 / (4 pi^2 rho_mass hbar c_s^5)
           * [D_e e^{-w^2 r_e^2 / (4 c_s^2)} - D_h e^{-w^2 r_h^2 / (4 c_s^2)}]^2

The one-sided Bloch-Redfield rate is gamma(w) = 2 pi J(w)(nbar+1) for
emission (w > 0) and 2 pi J(|w|) nbar for absorption (w < 0), times an
overall ``coupling_scale`` calibration factor (see PhononSpec).
"""

from dataclasses import dataclass

import numpy as np

HBAR = 1.054571817e-34  # J s
KB = 1.380649e-23  # J / K
EV = 1.602176634e-19  # J

# Global spectral-density calibration.  The 2*pi one-sided-rate convention
# together with the textbook GaAs constants below over-damps the
# cavity-filtered excitation figures by a uniform factor; 0.25 restores the
# measured blue-case and red-case inversion maxima simultaneously and is the
# shipped default.  Config-overridable (phonon.coupling_scale).
DEFAULT_COUPLING_SCALE = 0.25


@dataclass(frozen=True)
class PhononSpec:
    """Exciton-phonon environment parameters (SI units)."""

    r_e: float = 5.9e-9
    r_h: float = 3.6e-9
    d_e: float = 7.0 * EV
    d_h: float = -3.5 * EV
    rho_mass: float = 5370.0
    c_s: float = 5110.0
    temperature: float = 4.2
    enabled: bool = True
    coupling_scale: float = DEFAULT_COUPLING_SCALE

    def __post_init__(self):
        if self.r_e <= 0 or self.r_h <= 0:
            raise ValueError("wavefunction radii must be positive")
        if self.rho_mass <= 0 or self.c_s <= 0:
            raise ValueError("material density and sound speed must be positive")
        if self.temperature < 0:
            raise ValueError("temperature must be non-negative")
        if self.coupling_scale < 0:
            raise ValueError("coupling_scale must be non-negative")


def spectral_density(spec, omega):
    """J(omega) for omega >= 0, in rad/s."""
    w = np.asarray(omega, dtype=float)
    if np.any(w < 0):
        raise ValueError("spectral_density is defined for omega >= 0")
    ff = spec.d_e * np.exp(-(w**2) * spec.r_e**2 / (4.0 * spec.c_s**2)) - spec.d_h * np.exp(
        -(w**2) * spec.r_h**2 / (4.0 * spec.c_s**2)
    )
    out = w**3 / (4.0 * np.pi**2 * spec.rho_mass * HBAR * spec.c_s**5) * ff**2
    return out if out.ndim else float(out)


def thermal_occupation(omega, temperature):
    """Bose-Einstein occupation nbar(omega) at the given temperature."""
    if omega <= 0:
        raise ValueError("thermal_occupation requires omega > 0")
    if temperature == 0:
        return 0.0
    return 1.0 / np.expm1(HBAR * omega / (KB * temperature))


def bath_rate(spec, omega):
    """One-sided rate at system transition frequency omega (vectorized).

    Positive omega: phonon emission, 2 pi J(w)(nbar+1).  Negative omega:
    phonon absorption, 2 pi J(|w|) nbar.  Zero frequency: 0 (super-Ohmic
    J ~ w^3 vanishes faster than nbar diverges).
    """
    w = np.asarray(omega, dtype=float)
    out = np.zeros_like(w)
    if not spec.enabled or spec.coupling_scale == 0.0:
        return out if out.ndim else float(out)
    aw = np.abs(w)
    # treat frequencies with hbar*w/kT below the normal float range as zero:
    # gamma ~ w^2 there, and 1/expm1 would overflow to inf (inf * 0 -> nan)
    nz = aw * HBAR > 1e-300 * KB * max(spec.temperature, 1.0)
    j = np.zeros_like(w)
    j[nz] = spectral_density(spec, aw[nz])
    nbar = np.zeros_like(w)
    if spec.temperature > 0:
        nbar[nz] = 1.0 / np.expm1(HBAR * aw[nz] / (KB * spec.temperature))
    out[w > 0] = 2.0 * np.pi * j[w > 0] * (nbar[w > 0] + 1.0)
    out[w < 0] = 2.0 * np.pi * j[w < 0] * nbar[w < 0]
    out *= spec.coupling_scale
    return out if out.ndim else float(out)


def spectral_density_peak(spec, w_max=None, n=20000):
    """Locate (omega_peak, J_peak) by dense scan; utility for diagnostics."""
    if w_max is None:
        w_max = 8.0 * spec.c_s / min(spec.r_e, spec.r_h)
    w = np.linspace(0.0, w_max, n)
    j = spectral_density(spec, w)
    i = int(np.argmax(j))
    return w[i], j[i]
