"""Scalar figures of merit and Bloch-sphere reduction.

pi_e counts photons leaving through the collection mode; beta_c is the
branching probability that an exciton emits into that mode; eta_c is their
product, the photon-creation efficiency.
"""

from dataclasses import dataclass

import numpy as np

from .qcore import partial_trace_tls


class TruncatedTrajectoryError(ValueError):
    """Trajectory ends before the collection mode has rung down."""


@dataclass(frozen=True)
class FigureOfMerit:
    pi_e: float
    beta_c: float
    eta_c: float
    max_excited_pop: float


def population_inversion(traj, kappa, check_decay=True):
    """pi_e = integral of kappa <a^dag a> dt (trapezoidal).

    Equals the number of photons emitted through the collection mode; in the
    kappa >> Gamma regime it tracks the post-pulse excited population.
    """
    n = traj.photon_number
    peak = n.max()
    if check_decay and peak > 0 and n[-1] > 1e-6 * peak:
        raise TruncatedTrajectoryError(
            f"photon number at t_end is {n[-1] / peak:.2e} of peak; extend the grid"
        )
    return float(np.trapezoid(kappa * n, traj.grid.times))


def purcell_factor(g, kappa, gamma_bg, detuning):
    """F_p(detuning) = 4 g^2/(kappa gamma_bg) / (1 + (2 detuning/kappa)^2)."""
    if gamma_bg <= 0:
        raise ValueError("purcell_factor requires gamma_bg > 0; use beta_collection otherwise")
    return 4.0 * g**2 / (kappa * gamma_bg) / (1.0 + (2.0 * detuning / kappa) ** 2)


def _lorentzian(detuning, kappa):
    return 1.0 / (1.0 + (2.0 * detuning / kappa) ** 2)


def beta_collection(system):
    """Probability that an exciton emits into the collection mode.

    beta_c = F_p(dwc) / (F_p(dwc) + F_p(dwe) + 1); the Purcell factors of
    the two modes carry the same Lorentzian roll-off in their detuning from
    the emitter.  For gamma_bg = 0 the "+1" term drops and the expression
    reduces to the cavity-rate ratio R_c / (R_c + R_e).
    """
    r_c = 4.0 * system.g**2 / system.kappa * _lorentzian(system.delta_omega_c, system.kappa)
    r_e = 4.0 * system.g**2 / system.kappa * _lorentzian(system.delta_omega_e, system.kappa)
    return r_c / (r_c + r_e + system.gamma_bg)


def bloch_trajectory(traj, space):
    """Series of (s_x, s_y, s_z) from the reduced emitter state."""
    out = np.empty((len(traj.states), 3))
    for i, rho in enumerate(traj.states):
        r = partial_trace_tls(rho, space)
        out[i, 0] = 2.0 * r[1, 0].real
        out[i, 1] = 2.0 * r[1, 0].imag
        out[i, 2] = (r[1, 1] - r[0, 0]).real
    return out


def figure_of_merit(traj, system):
    """Bundle pi_e, beta_c, eta_c, and the peak excited population."""
    pi_e = population_inversion(traj, system.kappa)
    beta = beta_collection(system)
    return FigureOfMerit(
        pi_e=pi_e,
        beta_c=beta,
        eta_c=beta * pi_e,
        max_excited_pop=float(traj.excited_pop.max()),
    )
