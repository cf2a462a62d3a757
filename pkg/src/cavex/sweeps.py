"""Batch execution over parameter grids.

Every figure-class result is a rectangular sweep of independent single-cell
simulations.  Cells are deterministic functions of the immutable RunConfig,
so they may run in any order and on any number of workers; results are
gathered by cell index, making the output independent of scheduling.
"""

import time
from dataclasses import dataclass, field as _dfield
from multiprocessing import get_context

import numpy as np

from . import __version__
from .config import SweepSpec, apply_override
from .dynamics import propagate
from .observables import beta_collection, figure_of_merit
from .pulses import TimeGrid, intracavity_field_numeric, pulse_area


class SweepCellError(RuntimeError):
    """A cell simulation failed; the message carries its coordinates."""


@dataclass(frozen=True)
class SweepResult:
    axes: tuple  # ((path, values), ...) in row-major order
    values: np.ndarray = _dfield(repr=False)  # shape = axis lengths
    metadata: dict = _dfield(default_factory=dict)

    def __post_init__(self):
        shape = tuple(len(v) for _, v in self.axes)
        if self.values.shape != shape:
            raise ValueError(f"values shape {self.values.shape} != axes {shape}")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("sweep produced non-finite cells")


def run_cell(config):
    """One full simulation: filtered field, propagation, figures of merit."""
    pulse = config.pulse()
    mode = config.excitation_mode()
    system = config.system()
    phonon = config.phonon()
    field = intracavity_field_numeric(pulse, mode, config.field_grid())
    # ring-down tail: the Purcell rate carries the collection-mode
    # Lorentzian roll-off when the cavity is detuned from the emitter
    lorentz = 1.0 / (1.0 + (2.0 * system.delta_omega_c / system.kappa) ** 2)
    decay = 4.0 * system.g**2 / system.kappa * lorentz + system.gamma_bg
    tail = 16.0 / decay
    grid = TimeGrid(field.grid.t_start, field.grid.t_end + tail, config.n_traj_points)
    traj = propagate(system, field, phonon, grid=grid, tol=config.tol, secular=config.secular)
    fom = figure_of_merit(traj, system)
    return fom, pulse_area(field), traj


def _cell_value(config, reduce_kind, amplitude_grid):
    if reduce_kind == "MaxOverAmplitude":
        best = 0.0
        for amp in amplitude_grid:
            fom, _, _ = run_cell(apply_override(config, "pulse.amplitude_pi", amp))
            best = max(best, fom.eta_c)
        return best
    fom, _, _ = run_cell(config)
    return fom.pi_e if reduce_kind == "PiE" else fom.eta_c


def _worker(args):
    idx, config, reduce_kind, amplitude_grid = args
    try:
        return idx, _cell_value(config, reduce_kind, amplitude_grid)
    except Exception as exc:  # re-raised with coordinates by the gatherer
        return idx, exc


def run_sweep(config, spec, workers=1):
    """Execute a SweepSpec and return a SweepResult."""
    axis1 = np.asarray(spec.axis1_values, dtype=float)
    axis2 = np.asarray(spec.axis2_values, dtype=float) if spec.axis2_path else None

    cells = []
    if axis2 is None:
        for i, v1 in enumerate(axis1):
            cfg = apply_override(config, spec.axis1_path, v1)
            cells.append(((i,), cfg))
        shape = (len(axis1),)
    else:
        for i, v1 in enumerate(axis1):
            cfg1 = apply_override(config, spec.axis1_path, v1)
            for j, v2 in enumerate(axis2):
                cells.append(((i, j), apply_override(cfg1, spec.axis2_path, v2)))
        shape = (len(axis1), len(axis2))

    t0 = time.monotonic()
    values = np.full(shape, np.nan)
    jobs = [(idx, cfg, spec.reduce, spec.amplitude_grid) for idx, cfg in cells]
    if workers > 1:
        with get_context("spawn").Pool(workers) as pool:
            results = pool.map(_worker, jobs)
    else:
        results = map(_worker, jobs)
    for idx, val in results:
        if isinstance(val, Exception):
            raise SweepCellError(f"cell {idx} failed: {val}") from val
        values[idx] = val

    axes = [(spec.axis1_path, tuple(axis1))]
    if axis2 is not None:
        axes.append((spec.axis2_path, tuple(axis2)))
    meta = {
        "config_hash": config.hash(),
        "version": __version__,
        "wall_time_s": time.monotonic() - t0,
        "kind": spec.kind,
        "reduce": spec.reduce,
    }
    return SweepResult(tuple(axes), values, meta)


# convenience wrappers for the figure classes ---------------------------

def power_sweep(config, amplitudes_pi, workers=1):
    """pi_e (and eta_c via beta_c) versus input pulse area."""
    spec = SweepSpec(
        kind="power",
        axis1_path="pulse.amplitude_pi",
        axis1_values=tuple(amplitudes_pi),
        reduce="PiE",
    )
    res = run_sweep(config, spec, workers)
    beta = beta_collection(config.system())
    res.metadata["beta_c"] = beta
    res.metadata["eta_c"] = tuple(beta * res.values)
    res.metadata["intracavity_area_pi"] = tuple(
        _intracavity_areas(config, amplitudes_pi)
    )
    return res


def _intracavity_areas(config, amplitudes_pi):
    areas = []
    for amp in amplitudes_pi:
        cfg = apply_override(config, "pulse.amplitude_pi", amp)
        field = intracavity_field_numeric(cfg.pulse(), cfg.excitation_mode(), cfg.field_grid())
        areas.append(pulse_area(field))
    return areas


def detuning_amplitude_map(config, laser_detunings_GHz, amplitudes_pi, workers=1):
    """pi_e over (laser detuning x amplitude); metadata carries row maxima."""
    spec = SweepSpec(
        kind="detuning_map",
        axis1_path="pulse.delta_omega_L_GHz",
        axis1_values=tuple(laser_detunings_GHz),
        axis2_path="pulse.amplitude_pi",
        axis2_values=tuple(amplitudes_pi),
        reduce="PiE",
    )
    res = run_sweep(config, spec, workers)
    res.metadata["row_maxima"] = tuple(res.values.max(axis=1))
    return res


def modesplit_map(config, splittings_GHz, laser_detunings_GHz, amplitude_grid_pi, workers=1):
    """eta_c maximized over amplitude per (mode splitting x laser detuning)."""
    spec = SweepSpec(
        kind="modesplit_map",
        axis1_path="system.delta_omega_e_GHz",
        axis1_values=tuple(splittings_GHz),
        axis2_path="pulse.delta_omega_L_GHz",
        axis2_values=tuple(laser_detunings_GHz),
        reduce="MaxOverAmplitude",
        amplitude_grid=tuple(amplitude_grid_pi),
    )
    return run_sweep(config, spec, workers)


def cavity_detuning_map(config, cavity_detunings_GHz, amplitudes_pi, workers=1):
    """eta_c over (cavity detuning x amplitude) at fixed laser detuning.

    Detuning the cavity moves both polarization modes together: the
    excitation mode keeps its configured offset from the collection mode.
    """
    offset = config.delta_omega_e_GHz - config.delta_omega_c_GHz
    axis1 = np.asarray(cavity_detunings_GHz, dtype=float)
    axis2 = np.asarray(amplitudes_pi, dtype=float)
    values = np.full((len(axis1), len(axis2)), np.nan)
    jobs = []
    for i, dwc in enumerate(axis1):
        cfg = apply_override(config, "system.delta_omega_c_GHz", dwc)
        cfg = apply_override(cfg, "system.delta_omega_e_GHz", dwc + offset)
        for j, amp in enumerate(axis2):
            jobs.append(((i, j), apply_override(cfg, "pulse.amplitude_pi", amp), "EtaC", ()))
    t0 = time.monotonic()
    if workers > 1:
        with get_context("spawn").Pool(workers) as pool:
            results = pool.map(_worker, jobs)
    else:
        results = map(_worker, jobs)
    for idx, val in results:
        if isinstance(val, Exception):
            raise SweepCellError(f"cell {idx} failed: {val}") from val
        values[idx] = val
    axes = (
        ("system.delta_omega_c_GHz", tuple(axis1)),
        ("pulse.amplitude_pi", tuple(axis2)),
    )
    meta = {
        "config_hash": config.hash(),
        "version": __version__,
        "wall_time_s": time.monotonic() - t0,
        "kind": "cavity_map",
        "reduce": "EtaC",
    }
    return SweepResult(axes, values, meta)


def fock_convergence(config, delta_tol=1e-4):
    """Re-run one representative cell with n_max + 2; report the pi_e shift."""
    fom_a, _, _ = run_cell(config)
    cfg_b = apply_override(config, "solver.n_max", config.n_max + 2)
    fom_b, _, _ = run_cell(cfg_b)
    delta = abs(fom_b.pi_e - fom_a.pi_e)
    return {
        "n_max": config.n_max,
        "n_max_check": config.n_max + 2,
        "pi_e": fom_a.pi_e,
        "pi_e_check": fom_b.pi_e,
        "delta": delta,
        "converged": bool(delta < delta_tol),
    }
