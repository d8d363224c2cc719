"""Closed-form area, speed and power models plus design-space sweeps.

The area model counts only the CMOS periphery: sense amplifiers and write
drivers (one each per bit column) and the word selection pair (one per
word, including the two reference words). Dividing by the bit count gives
the mean footprint per stored bit in units of F², the square of the CMOS
feature size. The memory devices themselves sit above the logic, so for
large arrays the per-bit figure is limited by the selection pair alone,
and ultimately by the junction pitch (four squares of the memory-layer
feature size).

Timing and energy figures here are the analytic ideals (no sneak, no
decode overhead): a serial word write costs one switching time per bit, a
parallel write two switching times (one per polarity), and a read one
sense cycle. The circuit-level numbers including sneak overhead come from
:mod:`xpointsim.ops` traces; :func:`dynamic_energy` integrates those.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .device import (
    MtjParams,
    MtjState,
    MtjDevice,
    SwitchingParams,
    TransistorModel,
    critical_current,
    reference_params,
    switching_delay,
)
from .errors import ParameterError
from .ops import DriveConfig

__all__ = [
    "ArchitectureConfig",
    "PerfRow",
    "PerfReport",
    "SWEEP_CSV_HEADER",
    "cell_area",
    "cell_area_asymptotic",
    "cell_area_physical_floor",
    "dynamic_energy",
    "dynamic_power",
    "sweep_area",
    "parse_sweep_csv",
]


@dataclass(frozen=True)
class ArchitectureConfig:
    """Peripheral-circuit footprint and throughput parameters.

    Areas are in F². The defaults describe the slow-write design point
    (10 ns switching); a selection pair sized for the fast 3x-threshold
    write grows to about 405 F².
    """

    n_bits: int = 4
    m_words: int = 1024
    a_sense_f2: float = 40.0
    a_write_f2: float = 112.0
    a_select_f2: float = 112.0
    f_feature_nm: float = 65.0
    f_memory_nm: float = 40.0
    v_dd: float = 1.2
    f_data_hz: float = 100e6

    def __post_init__(self):
        if self.n_bits < 1:
            raise ParameterError("n_bits: must be at least 1")
        if self.m_words < 1:
            raise ParameterError("m_words: must be at least 1")
        for name in (
            "a_sense_f2",
            "a_write_f2",
            "a_select_f2",
            "f_feature_nm",
            "f_memory_nm",
            "v_dd",
            "f_data_hz",
        ):
            if not getattr(self, name) > 0.0:
                raise ParameterError(f"{name}: must be positive")


def cell_area(cfg, include_reference_words=True):
    """Mean CMOS footprint per bit, in F².

    Sums one sense amplifier and one write driver per bit column plus one
    selection pair per word and divides by the stored bit count. The two
    reference words need selection pairs but store no data; passing
    ``include_reference_words=False`` drops them from the numerator,
    which reproduces the slightly smaller figure quoted in some area
    summaries.
    """
    words_with_selectors = cfg.m_words + (2 if include_reference_words else 0)
    periphery = (
        cfg.n_bits * cfg.a_sense_f2
        + cfg.n_bits * cfg.a_write_f2
        + words_with_selectors * cfg.a_select_f2
    )
    return periphery / (cfg.n_bits * cfg.m_words)


def cell_area_asymptotic(n_bits, a_select_f2=112.0):
    """Large-array limit of :func:`cell_area`: the selection pair alone.

    With many words per array the per-column circuits amortize to nothing
    and the per-bit area is the word selection pair shared by the word's
    bits.
    """
    if n_bits < 1:
        raise ParameterError("n_bits: must be at least 1")
    if not a_select_f2 > 0.0:
        raise ParameterError("a_select_f2: must be positive")
    return a_select_f2 / n_bits


def cell_area_physical_floor(f_feature_nm, f_memory_nm):
    """Junction-pitch bound on the per-bit area, in CMOS F².

    The device layer cannot pack tighter than 4 squares of its own
    feature size; expressed against the CMOS feature this is
    4*(f_memory/f_feature)^2.
    """
    if not (f_feature_nm > 0.0 and f_memory_nm > 0.0):
        raise ParameterError("f_feature_nm and f_memory_nm: must be positive")
    return 4.0 * (f_memory_nm / f_feature_nm) ** 2


def dynamic_energy(trace, v_dd):
    """Supply energy of one operation: integral of v_dd times the drawn
    current over the trace waveform, by the trapezoidal rule.

    The traces produced by :mod:`xpointsim.ops` are explicit staircases
    (every step carries samples on both edges), so the trapezoidal result
    equals the exact rectangle sum. An empty waveform integrates to zero.
    """
    if not trace.samples:
        return 0.0
    times = np.array([s.t for s in trace.samples])
    supply = np.array([s.supply_a for s in trace.samples])
    return float(v_dd * np.trapezoid(supply, times))


def dynamic_power(energy_j, f_data_hz):
    """Average power at a given operation throughput."""
    if not f_data_hz > 0.0:
        raise ParameterError("f_data_hz: must be positive")
    return energy_j * f_data_hz


# -- design-space sweeps -----------------------------------------------------


SWEEP_CSV_HEADER = (
    "n_bits,m_words,area_exact_f2,area_asymptotic_f2,write_time_ns_serial,"
    "write_time_ns_parallel,read_time_ns,write_energy_pj,read_energy_pj"
)


@dataclass(frozen=True)
class PerfRow:
    """One swept design point. Times in seconds, energies in joules."""

    n_bits: int
    m_words: int
    area_exact_f2: float
    area_asymptotic_f2: float
    write_time_serial_s: float
    write_time_parallel_s: float
    read_time_s: float
    write_energy_j: float
    read_energy_j: float

    def csv_values(self):
        return (
            str(self.n_bits),
            str(self.m_words),
            repr(self.area_exact_f2),
            repr(self.area_asymptotic_f2),
            repr(self.write_time_serial_s * 1e9),
            repr(self.write_time_parallel_s * 1e9),
            repr(self.read_time_s * 1e9),
            repr(self.write_energy_j * 1e12),
            repr(self.read_energy_j * 1e12),
        )


@dataclass(frozen=True)
class PerfReport:
    rows: tuple

    def to_csv(self):
        lines = [SWEEP_CSV_HEADER]
        lines.extend(",".join(row.csv_values()) for row in self.rows)
        return "\n".join(lines) + "\n"


def parse_sweep_csv(text):
    """Parse a sweep CSV back into per-row value dictionaries.

    Values come back in the CSV's own units (ns, pJ, F²); floats
    round-trip exactly because the writer uses shortest-repr formatting.
    """
    lines = text.strip("\n").split("\n")
    if not lines or lines[0] != SWEEP_CSV_HEADER:
        raise ParameterError("sweep csv: missing or unexpected header row")
    columns = SWEEP_CSV_HEADER.split(",")
    out = []
    for line in lines[1:]:
        cells = line.split(",")
        if len(cells) != len(columns):
            raise ParameterError(f"sweep csv: malformed row {line!r}")
        row = {"n_bits": int(cells[0]), "m_words": int(cells[1])}
        for key, cell in zip(columns[2:], cells[2:]):
            row[key] = float(cell)
        out.append(row)
    return out


def _sweep_point(cfg, n, m, params, dynamics, drive, overdrive):
    i_write = overdrive * critical_current(params)
    tau = switching_delay(i_write, params, dynamics)
    r_cell_on = TransistorModel.default_for(params, v_dd=cfg.v_dd, overdrive=overdrive).r_on
    r_ref_branch = (
        MtjDevice(params=reference_params(params), state=MtjState.P).resistance
        + r_cell_on / n
    )
    t_read = r_ref_branch * drive.c_load_f * math.log(2)
    point = replace(cfg, n_bits=n, m_words=m)
    return PerfRow(
        n_bits=n,
        m_words=m,
        area_exact_f2=cell_area(point),
        area_asymptotic_f2=cell_area_asymptotic(n, cfg.a_select_f2),
        write_time_serial_s=n * tau,
        write_time_parallel_s=2 * tau,
        read_time_s=t_read,
        # ideal full-word figures: every bit switched at the regulated
        # write current, both sense branches near the reference value
        write_energy_j=n * cfg.v_dd * i_write * tau,
        read_energy_j=n * cfg.v_dd * (2 * drive.v_read / r_ref_branch) * t_read,
    )


def sweep_area(cfg, n_range, m_range, params=None, dynamics=None, drive=None,
               overdrive=1.3):
    """Evaluate the closed-form models over a grid of word widths/counts.

    Points are independent pure evaluations; rows come back sorted by
    (n_bits, m_words) so the report is order-deterministic regardless of
    the ranges' own ordering.
    """
    n_list = sorted(set(int(n) for n in n_range))
    m_list = sorted(set(int(m) for m in m_range))
    if not n_list or not m_list:
        raise ParameterError("sweep ranges: must be non-empty")
    params = params if params is not None else MtjParams()
    dynamics = dynamics if dynamics is not None else SwitchingParams.lumped_fit(params)
    drive = drive or DriveConfig()
    rows = tuple(
        _sweep_point(cfg, n, m, params, dynamics, drive, overdrive)
        for n in n_list
        for m in m_list
    )
    return PerfReport(rows=rows)
