"""Compact device models: the storage junction and its access transistor.

The junction is a two-terminal resistor whose value depends on the relative
magnetisation of its two layers. Everything here is quasi-static: a device
has a state (parallel or antiparallel), a resistance determined by that
state, and a switching clock that advances while the through-current exceeds
the critical threshold in the destabilising direction.

Sign convention, used consistently across the package: positive device
current flows from the bit-line terminal to the word-line terminal and
drives the parallel state toward antiparallel. Negative current drives the
reverse transition.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from enum import Enum

from .errors import ParameterError

__all__ = [
    "MtjDevice",
    "MtjParams",
    "MtjState",
    "ParameterError",
    "SwitchingParams",
    "TransistorModel",
    "brinkman_resistance",
    "critical_current",
    "mtj_resistance",
    "reference_params",
    "reference_surface",
    "switching_delay",
    "switching_step",
    "transistor_current",
]

BOHR_MAGNETON = 9.2740100783e-24  # J/T
ELEMENTARY_CHARGE = 1.602176634e-19  # C
EULER_GAMMA = 0.5772156649015329

# Barrier attenuation per nm of extra oxide, for a ~1 eV effective barrier.
# Only the relative thickness dependence matters; the absolute level is
# pinned to the measured resistance-area product at the nominal thickness.
_BARRIER_DECAY_PER_NM = 10.25


class MtjState(Enum):
    """Relative orientation of the free layer: parallel stores '0'."""

    P = "P"
    AP = "AP"


def _require(condition, name, message):
    if not condition:
        raise ParameterError(f"{name}: {message}")


@dataclass(frozen=True)
class MtjParams:
    """Geometry and electrical constants of one junction.

    surface_nm2 defaults to a 65 nm diameter circular pillar. The
    resistance-area product and the critical current density are the two
    calibration constants; everything else is derived from them.
    """

    tmr: float = 1.5
    surface_nm2: float = math.pi / 4.0 * 65.0**2
    tox_nm: float = 0.85
    ra_ohm_um2: float = 10.0
    jc0_a_cm2: float = 5.7e6
    barrier_ev: float = 1.0

    def __post_init__(self):
        _require(self.tmr >= 0.0, "tmr", "must be non-negative")
        _require(self.surface_nm2 > 0.0, "surface_nm2", "must be positive")
        _require(self.tox_nm > 0.0, "tox_nm", "must be positive")
        _require(self.ra_ohm_um2 > 0.0, "ra_ohm_um2", "must be positive")
        _require(self.jc0_a_cm2 > 0.0, "jc0_a_cm2", "must be positive")
        _require(self.barrier_ev > 0.0, "barrier_ev", "must be positive")


def brinkman_resistance(tox_nm, surface_nm2, params):
    """Tunnel resistance of the parallel state for a given barrier geometry.

    The thickness dependence follows the usual tunnelling form, linear in
    thickness times an exponential attenuation, normalised so that the
    nominal thickness reproduces the calibrated resistance-area product
    exactly. Resistance scales inversely with junction surface.
    """
    _require(tox_nm > 0.0, "tox_nm", "must be positive")
    _require(surface_nm2 > 0.0, "surface_nm2", "must be positive")
    decay = _BARRIER_DECAY_PER_NM * math.sqrt(params.barrier_ev)
    ra = (
        params.ra_ohm_um2
        * (tox_nm / params.tox_nm)
        * math.exp(decay * (tox_nm - params.tox_nm))
    )
    return ra * 1e6 / surface_nm2  # 1 um^2 = 1e6 nm^2


def mtj_resistance(state, params):
    """Two-terminal resistance in the given state."""
    r_p = brinkman_resistance(params.tox_nm, params.surface_nm2, params)
    if state is MtjState.P:
        return r_p
    return (1.0 + params.tmr) * r_p


def reference_surface(params):
    """Junction surface whose parallel resistance equals (R_P + R_AP) / 2.

    Reference cells are plain parallel-state junctions made larger or
    smaller instead of being biased differently, so the midpoint resistance
    comes out of the same process: s_ref = s / (1 + tmr/2).
    """
    return params.surface_nm2 / (1.0 + 0.5 * params.tmr)


def reference_params(params):
    """Parameters of a reference cell matched to ``params``.

    The reference junction never switches; modelling it with tmr = 0 keeps
    both nominal states at the midpoint resistance.
    """
    return dataclasses.replace(
        params, surface_nm2=reference_surface(params), tmr=0.0
    )


def critical_current(params):
    """Threshold current below which no switching occurs, in amperes."""
    return params.jc0_a_cm2 * params.surface_nm2 * 1e-14  # 1 nm^2 = 1e-14 cm^2


@dataclass(frozen=True)
class SwitchingParams:
    """Dynamic constants for the precessional switching-delay model.

    Two ways to get a usable rate:

    * physics route: the rate per ampere of overdrive is computed from the
      thermal stability factor ``xi``, the spin ``polarization`` and the
      free-layer ``moment_a_m2``;
    * lumped route: :meth:`lumped_fit` pins ``rate_per_amp`` so that a
      chosen operating point has a chosen delay, which is how the model is
      calibrated against measured write pulses.
    """

    xi: float = 40.0
    polarization: float = 0.62
    moment_a_m2: float = 456e3 * (math.pi / 4.0 * 65.0**2 * 1e-18) * 1.3e-9
    rate_per_amp: float | None = None

    def __post_init__(self):
        _require(self.xi > 0.0, "xi", "must be positive")
        _require(0.0 < self.polarization < 1.0, "polarization", "must be in (0, 1)")
        _require(self.moment_a_m2 > 0.0, "moment_a_m2", "must be positive")
        if self.rate_per_amp is not None:
            _require(self.rate_per_amp > 0.0, "rate_per_amp", "must be positive")

    @classmethod
    def lumped_fit(cls, params, tau_s=10e-9, overdrive=1.3):
        """Calibrate the rate so the delay at ``overdrive`` x threshold is ``tau_s``."""
        _require(overdrive > 1.0, "overdrive", "fit point must exceed threshold")
        _require(tau_s > 0.0, "tau_s", "must be positive")
        i_c = critical_current(params)
        rate = 1.0 / (tau_s * (overdrive - 1.0) * i_c)
        return cls(rate_per_amp=rate)

    def rate(self):
        """Switching rate per ampere of overdrive, 1/(A*s)."""
        if self.rate_per_amp is not None:
            return self.rate_per_amp
        bracket = EULER_GAMMA + math.log(math.pi**2 * self.xi / 4.0)
        _require(
            bracket > 0.0,
            "xi",
            "too small: the thermal-activation bracket is not positive",
        )
        return (
            (2.0 / bracket)
            * BOHR_MAGNETON
            * self.polarization
            / (
                ELEMENTARY_CHARGE
                * self.moment_a_m2
                * (1.0 + self.polarization**2)
            )
        )


def switching_delay(current_a, params, dyn):
    """Mean time to switch under a constant current, seconds.

    Returns ``math.inf`` at or below the critical current: in this
    quasi-static model, sub-threshold current never switches the device.
    """
    overdrive = abs(current_a) - critical_current(params)
    if overdrive <= 0.0:
        return math.inf
    return 1.0 / (dyn.rate() * overdrive)


@dataclass(frozen=True)
class MtjDevice:
    """One junction with its switching progress.

    ``progress`` is the accumulated fraction of a switching event, in units
    of the instantaneous delay. It reaches 1.0 when the device flips.
    """

    params: MtjParams
    state: MtjState
    progress: float = 0.0

    @property
    def resistance(self):
        return mtj_resistance(self.state, self.params)


def _destabilising_sign(state):
    # positive current drives P -> AP; negative drives AP -> P
    return 1.0 if state is MtjState.P else -1.0


def switching_step(device, current_a, dt_s, dyn):
    """Advance one device by ``dt_s`` under a constant current.

    Destabilising supra-threshold current accumulates progress linearly in
    time and flips the state once a full delay has elapsed. A
    supra-threshold current in the stabilising direction actively restores
    the magnetisation, discarding any partial progress. Sub-threshold
    current of either sign leaves the accumulated progress untouched.
    """
    i_c = critical_current(device.params)
    if abs(current_a) <= i_c:
        return device
    if math.copysign(1.0, current_a) != _destabilising_sign(device.state):
        if device.progress != 0.0:
            return dataclasses.replace(device, progress=0.0)
        return device
    tau = switching_delay(current_a, device.params, dyn)
    progress = device.progress + dt_s / tau
    if progress >= 1.0:
        flipped = MtjState.AP if device.state is MtjState.P else MtjState.P
        return dataclasses.replace(device, state=flipped, progress=0.0)
    return dataclasses.replace(device, progress=progress)


@dataclass(frozen=True)
class TransistorModel:
    """Piecewise-linear access transistor: ohmic up to a saturation current."""

    r_on: float
    r_off: float
    i_sat: float

    def __post_init__(self):
        _require(self.r_on > 0.0, "r_on", "must be positive")
        _require(self.r_off > self.r_on, "r_off", "must exceed r_on")
        _require(self.i_sat > 0.0, "i_sat", "must be positive")

    @classmethod
    def default_for(cls, params, v_dd=1.2, overdrive=1.3):
        """Size the switch so the nominal write path carries ``overdrive`` x threshold.

        The on-resistance absorbs whatever headroom the parallel-state
        junction leaves at ``v_dd``; saturation is set at twice the write
        current so normal operation stays in the ohmic region.
        """
        i_write = overdrive * critical_current(params)
        r_on = v_dd / i_write - mtj_resistance(MtjState.P, params)
        _require(
            r_on > 0.0,
            "r_on",
            f"no headroom: {overdrive:g}x threshold through the junction "
            f"already needs more than {v_dd:g} V",
        )
        return cls(r_on=r_on, r_off=1e9, i_sat=2.0 * i_write)


def transistor_current(v_ds, gate_on, model):
    """Drain current for a drain-source voltage, respecting saturation."""
    if not gate_on:
        return v_ds / model.r_off
    i = v_ds / model.r_on
    if i > model.i_sat:
        return model.i_sat
    if i < -model.i_sat:
        return -model.i_sat
    return i
