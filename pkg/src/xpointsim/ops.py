"""Write and read protocols, simulated against the nodal solver.

Writes
------
A write runs as one or two phases (parallel) or as one sub-operation per
bit (serial). Within a phase the addressed cells are driven by regulated
bit-line current sources: the source magnitude is iterated until the
addressed junction carries exactly the programmed write current, so the
source supplies the write current plus whatever the sneak paths steal.
The word selector sets the return rail: pull-up for the '0' phase (current
leaves the cell through the bit line), pull-down for the '1' phase.

Phases are self-timed: a phase lasts until the last of its pending
junctions has accumulated a full switching delay, so a phase whose targets
already hold their data costs only the setup interval. Device progress is
re-integrated between consecutive flip events, during which every branch
current is constant, so the integration is exact rather than sampled.

In parallel mode the non-participating bit lines are held at the word
rail potential, which blocks sneak paths; in serial mode they float, which
is what makes the serial source current exceed the write current.

Reads
-----
All bits of a word are sensed in one cycle. The selected word row and the
reference row of matching parity are grounded through their selectors and
every column segment is driven at the read voltage. Each bit's sense
amplifier races the discharge of its two segments; the balanced layout
guarantees both segments collect the same sneak current, so the comparison
reduces to data resistance versus reference resistance. The cycle time is
fixed by the slowest deciding branch, the reference branch.

Energy bookkeeping: the supply current of an interval is the summed
magnitude of the regulated source currents (writes) or of the driven
segment currents (reads); energy integrates V_dd times that current over
the trace, exactly, since currents are piecewise constant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .device import MtjState, critical_current, switching_delay, switching_step
from .errors import (
    ConvergenceError,
    IndeterminateReadError,
    ParameterError,
    ReadDisturbError,
    WriteFailureError,
)
from .network import LineBias, RowDriver, solve_network

__all__ = [
    "BiasCondition",
    "BitDecision",
    "DriveConfig",
    "OperationTrace",
    "PhaseSummary",
    "SenseResult",
    "SensingPowerReport",
    "TraceEvent",
    "TraceSample",
    "WriteMode",
    "WriteRequest",
    "compare_sensing_power",
    "read_cycle_time",
    "read_word",
    "select_word",
    "sense_bit",
    "serial_sneak_profile",
    "trace_to_csv",
    "write_word",
    "write_word_parallel",
    "write_word_serial",
    "write_self_enable",
]

_REG_TOL = 1e-10
_MAX_REG_ITERATIONS = 60
_TIE_REL = 1e-6
LN2 = math.log(2.0)


@dataclass(frozen=True)
class DriveConfig:
    """Operating-point knobs shared by all protocol simulations."""

    v_read: float = 0.3
    setup_time_s: float = 1e-10
    sample_dt_s: float = 5e-10
    c_load_f: float = 300e-15

    def __post_init__(self):
        if not 0.0 < self.v_read:
            raise ParameterError("v_read: must be positive")
        if self.setup_time_s < 0.0:
            raise ParameterError("setup_time_s: must be non-negative")
        if not self.sample_dt_s > 0.0:
            raise ParameterError("sample_dt_s: must be positive")
        if not self.c_load_f > 0.0:
            raise ParameterError("c_load_f: must be positive")


class WriteMode(Enum):
    PARALLEL = "parallel"
    SERIAL = "serial"
    SELF_ENABLE_SERIAL = "self_enable_serial"
    SELF_ENABLE_PARALLEL = "self_enable_parallel"


@dataclass(frozen=True)
class WriteRequest:
    word_addr: int
    data: str
    mode: WriteMode = WriteMode.PARALLEL

    def validate(self, array):
        array.word_row(self.word_addr)
        if len(self.data) != array.n_bits:
            raise ParameterError(
                f"data: expected {array.n_bits} bits, got {len(self.data)}"
            )
        for ch in self.data:
            if ch not in "01":
                raise ParameterError(f"data: invalid bit character {ch!r}")


@dataclass(frozen=True)
class BiasCondition:
    """Complete boundary condition of the array for one protocol step."""

    bias: dict
    drivers: dict


@dataclass(frozen=True)
class TraceEvent:
    t: float
    kind: str  # phase-start | switch | phase-end | disturb | disturb-switch
    device: str
    current: float


@dataclass(frozen=True)
class TraceSample:
    t: float
    source_currents: dict  # line -> A, constant until the next sample
    supply_a: float


@dataclass(frozen=True)
class PhaseSummary:
    label: str
    t_start: float
    t_end: float
    source_currents: dict  # final regulated values, line -> A
    supply_a: float
    sneak_overhead: float  # (supply - ideal drive) / ideal drive
    energy_j: float


@dataclass(frozen=True)
class OperationTrace:
    events: tuple
    samples: tuple
    phases: tuple
    total_time: float
    total_energy: float

    def switch_count(self):
        return sum(1 for e in self.events if e.kind == "switch")


@dataclass(frozen=True)
class SenseResult:
    bits: str
    per_bit_margin: tuple  # reference branch resistance minus data branch
    sense_delay: float
    branch_currents: tuple  # (data, reference) A per bit
    per_bit_delay: tuple


@dataclass(frozen=True)
class BitDecision:
    bit: str
    delay: float


@dataclass(frozen=True)
class SensingPowerReport:
    parallel_j: float
    serial_j: float
    saving_ratio: float
    per_bit_saving: tuple
    bits: str


# -- bias construction ----------------------------------------------------


def select_word(array, word_addr, phase):
    """Gate settings for one selected word; every other selector is off.

    Phase '0' pulls the word line to the positive rail (pull-up on), phase
    '1' and reads ground it (pull-down on). Reads additionally ground the
    reference row serving the word's parity.
    """
    if phase not in ("0", "1", "read"):
        raise ParameterError(f"phase: expected '0', '1' or 'read', got {phase!r}")
    row = array.word_row(word_addr)
    drivers = {}
    for r in array.word_rows + array.ref_rows:
        pmos_on = r == row and phase == "0"
        nmos_on = r == row and phase in ("1", "read")
        drivers[r] = RowDriver(array.row_driver_model, pmos_on=pmos_on, nmos_on=nmos_on)
    if phase == "read" and array.balanced:
        ref = array.serving_ref_row(word_addr)
        drivers[ref] = RowDriver(array.row_driver_model, pmos_on=False, nmos_on=True)
    return BiasCondition(bias={}, drivers=drivers)




# -- regulated solving -----------------------------------------------------


def _regulated_solve(array, bias, drivers, targets):
    """Adjust source magnitudes until each addressed cell carries its target.

    ``targets`` maps segment -> (cell tag, target current). ``bias`` holds
    everything else; the segments in ``targets`` get current sources.

    For a fixed set of clamped selectors the network is affine in the
    injected currents, so a probed-Jacobian Newton step lands on the
    solution exactly; extra iterations only happen when a step moves a
    selector across its saturation boundary.
    """
    segs = list(targets)
    i_t = np.array([targets[seg][1] for seg in segs])

    def solve_with(vec):
        full_bias = dict(bias)
        for seg, amps in zip(segs, vec):
            full_bias[seg] = LineBias.current(float(amps))
        sol = solve_network(array.to_network(full_bias, drivers))
        cells = np.array([sol.device_currents[targets[seg][0]] for seg in segs])
        return sol, cells

    probe_step = 1e-4 * float(np.max(np.abs(i_t)))
    s = i_t.copy()
    sol, cells = solve_with(s)
    for _ in range(_MAX_REG_ITERATIONS):
        if np.all(np.abs(cells - i_t) <= _REG_TOL * np.abs(i_t)):
            return sol, {seg: float(v) for seg, v in zip(segs, s)}
        jac = np.empty((len(segs), len(segs)))
        for k in range(len(segs)):
            nudged = s.copy()
            nudged[k] += probe_step
            _, probed = solve_with(nudged)
            jac[:, k] = (probed - cells) / probe_step
        try:
            s = s + np.linalg.solve(jac, i_t - cells)
        except np.linalg.LinAlgError:
            raise ConvergenceError(
                "write-drive regulation lost authority over an addressed cell"
            ) from None
        sol, cells = solve_with(s)
    raise ConvergenceError("write-drive regulation did not settle")


# -- trace assembly --------------------------------------------------------


class _TraceBuilder:
    def __init__(self, v_dd):
        self.v_dd = v_dd
        self.t = 0.0
        self.events = []
        self.samples = []
        self.phases = []

    def event(self, kind, device, current):
        self.events.append(TraceEvent(self.t, kind, device, current))

    def sample(self, currents, supply):
        # close the previous step with a sample at the new timestamp, so
        # the waveform is an explicit staircase: rectangle and trapezoid
        # integration then agree exactly
        if self.samples:
            last = self.samples[-1]
            if self.t > last.t and (
                last.supply_a != supply or last.source_currents != currents
            ):
                self.samples.append(
                    TraceSample(self.t, dict(last.source_currents), last.supply_a)
                )
        self.samples.append(TraceSample(self.t, dict(currents), supply))

    def densify(self, t_until, currents, supply, dt_max):
        t = self.samples[-1].t if self.samples else self.t
        while t + dt_max < t_until:
            t += dt_max
            self.samples.append(TraceSample(t, dict(currents), supply))

    def finish(self):
        self.sample({}, 0.0)
        energy = 0.0
        for here, there in zip(self.samples, self.samples[1:]):
            energy += self.v_dd * here.supply_a * (there.t - here.t)
        return OperationTrace(
            events=tuple(self.events),
            samples=tuple(self.samples),
            phases=tuple(self.phases),
            total_time=self.t,
            total_energy=energy,
        )


def _phase_energy(samples, t_start, t_end, v_dd):
    energy = 0.0
    for here, there in zip(samples, samples[1:]):
        lo = max(here.t, t_start)
        hi = min(there.t, t_end)
        if hi > lo:
            energy += v_dd * here.supply_a * (hi - lo)
    return energy


# -- the phase engine ------------------------------------------------------


def _run_phase(array, drive, trace, label, word_addr, phase, active, setup_s=None):
    """Drive ``active`` bits of one word until they hold their targets.

    ``active`` maps bit index -> target MtjState. ``phase`` is '0' or '1';
    callers are expected to put P targets in phase '0' and AP targets in
    phase '1'. ``setup_s`` is the select/decode time charged before the
    sources engage; the two phases of a parallel write share one decode,
    so its second phase passes 0.

    Only *pending* cells are driven: a bit whose junction already holds
    its target is never addressed, and each source releases the moment
    its own cell flips. Forcing the write current through an
    already-switched junction would need well over the supply across its
    high resistance, and that potential couples through the floating
    mesh hard enough to disturb the word's own idle cells. Segments
    without a source float; tying them to a rail would open two-junction
    leak paths from every driven segment into the rail.
    """
    t_start = trace.t
    trace.event("phase-start", label, 0.0)
    trace.sample({}, 0.0)
    trace.t += drive.setup_time_s if setup_s is None else setup_s

    selected = select_word(array, word_addr, phase)
    row = array.word_row(word_addr)

    def pending_bits():
        return {
            bit for bit, st in active.items() if array.state(word_addr, bit) is not st
        }

    def targets_for(bits):
        targets = {}
        for bit in sorted(bits):
            seg = array.host_segment(word_addr, bit)
            sign = 1.0 if active[bit] is MtjState.AP else -1.0
            targets[seg] = (array.tag(row, seg), sign * array.write_current)
        return targets

    active_segments = {array.host_segment(word_addr, bit) for bit in active}
    pending = pending_bits()
    ideal_drive = len(pending) * array.write_current
    phase_sources = {}
    phase_supply = 0.0
    first_solve = True
    reported_disturb = set()
    guard = 0
    while pending:
        guard += 1
        if guard > 4 * array.n_bits + 16:
            raise ConvergenceError(f"{label}: switching cascade did not terminate")
        sol, sources = _regulated_solve(
            array, {}, selected.drivers, targets_for(pending)
        )
        if first_solve:
            # reported phase numbers: captured with every pending source on
            phase_sources = dict(sources)
            phase_supply = sum(abs(v) for v in sources.values())
            first_solve = False
        trace.sample(sol.source_currents, sum(abs(v) for v in sources.values()))

        # schedule the next flip among destabilised junctions
        flips = []
        for cell_row, seg, dev in array.cells():
            tag = array.tag(cell_row, seg)
            i = sol.device_currents[tag]
            i_c = critical_current(dev.params)
            if abs(i) <= i_c:
                continue
            drives_flip = (i > 0.0) == (dev.state is MtjState.P)
            if not drives_flip:
                continue
            if array.is_reference_row(cell_row):
                if tag not in reported_disturb:
                    reported_disturb.add(tag)
                    trace.event("disturb", tag, i)
                continue
            tau = switching_delay(i, dev.params, array.dynamics)
            flips.append(((1.0 - dev.progress) * tau, cell_row, seg, i))
        if not flips:
            stuck = sorted(pending)[0]
            raise WriteFailureError(
                f"{label}: insufficient drive, "
                f"{array.tag(row, array.host_segment(word_addr, stuck))} "
                "never reaches its switching threshold"
            )

        dt = min(f[0] for f in flips) * (1.0 + 1e-12)
        supply_now = sum(abs(v) for v in sources.values())
        trace.densify(trace.t + dt, sol.source_currents, supply_now, drive.sample_dt_s)
        for cell_row, seg, dev in list(array.cells()):
            if array.is_reference_row(cell_row):
                continue
            i = sol.device_currents[array.tag(cell_row, seg)]
            stepped = switching_step(dev, i, dt, array.dynamics)
            if stepped is not dev:
                array.set_device(cell_row, seg, stepped)
        trace.t += dt
        for _remaining, cell_row, seg, i in flips:
            dev = array.device_at(cell_row, seg)
            if dev.progress == 0.0:  # completed the flip in this step
                targeted = cell_row == row and seg in active_segments
                kind = "switch" if targeted else "disturb-switch"
                trace.event(kind, array.tag(cell_row, seg), i)
        pending = pending_bits()

    trace.event("phase-end", label, 0.0)
    trace.sample({}, 0.0)
    trace.phases.append(
        PhaseSummary(
            label=label,
            t_start=t_start,
            t_end=trace.t,
            source_currents=phase_sources,
            supply_a=phase_supply,
            sneak_overhead=(
                (phase_supply - ideal_drive) / ideal_drive
                if phase_sources and ideal_drive
                else 0.0
            ),
            energy_j=_phase_energy(trace.samples, t_start, trace.t, array.v_dd),
        )
    )


def _verify_written(array, req):
    stored = array.get_word(req.word_addr)
    if stored != req.data:
        row = array.word_row(req.word_addr)
        bad = next(j for j in range(array.n_bits) if stored[j] != req.data[j])
        raise WriteFailureError(
            f"word {req.word_addr} reads back {stored!r}, wanted {req.data!r} "
            f"({array.tag(row, array.host_segment(req.word_addr, bad))})"
        )


def _phase_partition(data, bits):
    zeros = {j: MtjState.P for j in bits if data[j] == "0"}
    ones = {j: MtjState.AP for j in bits if data[j] == "1"}
    return zeros, ones


def write_word_parallel(array, req, drive=None):
    """Two-phase parallel write: all '0' targets first, then all '1' targets.

    Both phases reuse the same word selection, so decode setup is charged
    once and the whole write fits in one setup plus two switching times.
    """
    drive = drive or DriveConfig()
    req.validate(array)
    trace = _TraceBuilder(array.v_dd)
    zeros, ones = _phase_partition(req.data, range(array.n_bits))
    setup = drive.setup_time_s
    if zeros:
        _run_phase(array, drive, trace, "phase-0", req.word_addr, "0", zeros, setup)
        setup = 0.0
    if ones:
        _run_phase(array, drive, trace, "phase-1", req.word_addr, "1", ones, setup)
    _verify_written(array, req)
    return trace.finish()


def write_word_serial(array, req, drive=None):
    """Bit-at-a-time write; every other bit line floats during each sub-step."""
    drive = drive or DriveConfig()
    req.validate(array)
    trace = _TraceBuilder(array.v_dd)
    for j in range(array.n_bits):
        phase = req.data[j]
        target = {j: MtjState.AP if phase == "1" else MtjState.P}
        _run_phase(
            array, drive, trace, f"bit{j}-phase-{phase}", req.word_addr, phase, target
        )
    _verify_written(array, req)
    return trace.finish()


def write_self_enable(array, req, drive=None):
    """Read-modify-write: only the bits that differ are driven at all."""
    drive = drive or DriveConfig()
    req.validate(array)
    trace = _TraceBuilder(array.v_dd)

    t_start = trace.t
    trace.event("phase-start", "read-before-write", 0.0)
    sense = read_word(array, req.word_addr, drive)
    supply = sum(a + b for a, b in sense.branch_currents)
    trace.sample({}, 0.0)
    trace.t += drive.setup_time_s
    trace.sample(_read_currents_by_segment(array, req.word_addr, sense), supply)
    trace.t += sense.sense_delay
    trace.event("phase-end", "read-before-write", 0.0)
    trace.sample({}, 0.0)
    trace.phases.append(
        PhaseSummary(
            label="read-before-write",
            t_start=t_start,
            t_end=trace.t,
            source_currents=_read_currents_by_segment(array, req.word_addr, sense),
            supply_a=supply,
            sneak_overhead=0.0,
            energy_j=_phase_energy(trace.samples, t_start, trace.t, array.v_dd),
        )
    )

    differing = [j for j in range(array.n_bits) if sense.bits[j] != req.data[j]]
    if req.mode is WriteMode.SELF_ENABLE_SERIAL:
        for j in differing:
            phase = req.data[j]
            target = {j: MtjState.AP if phase == "1" else MtjState.P}
            _run_phase(
                array, drive, trace, f"bit{j}-phase-{phase}", req.word_addr, phase, target
            )
    else:
        zeros, ones = _phase_partition(req.data, differing)
        setup = drive.setup_time_s
        if zeros:
            _run_phase(array, drive, trace, "phase-0", req.word_addr, "0", zeros, setup)
            setup = 0.0
        if ones:
            _run_phase(array, drive, trace, "phase-1", req.word_addr, "1", ones, setup)
    _verify_written(array, req)
    return trace.finish()


def write_word(array, req, drive=None):
    if req.mode is WriteMode.PARALLEL:
        return write_word_parallel(array, req, drive)
    if req.mode is WriteMode.SERIAL:
        return write_word_serial(array, req, drive)
    return write_self_enable(array, req, drive)


# -- reading ---------------------------------------------------------------


def sense_bit(r_data_branch, r_ref_branch, c_load, v_dd):
    """Behavioural discharge race between the two precharged branches.

    The faster (lower-resistance) branch crosses the latch threshold first;
    the data bit is '1' when the data branch is the slower one. The delay
    is the winning branch's RC halving time.
    """
    if not (r_data_branch > 0.0 and r_ref_branch > 0.0):
        raise ParameterError("branch resistance: must be positive")
    if not (c_load > 0.0 and v_dd > 0.0):
        raise ParameterError("sense amplifier: c_load and v_dd must be positive")
    spread = abs(r_data_branch - r_ref_branch) / max(r_data_branch, r_ref_branch)
    if spread <= _TIE_REL:
        raise IndeterminateReadError(
            f"sense race too close to call: {r_data_branch:.6g} vs "
            f"{r_ref_branch:.6g} Ohm"
        )
    bit = "1" if r_data_branch > r_ref_branch else "0"
    return BitDecision(bit=bit, delay=min(r_data_branch, r_ref_branch) * c_load * LN2)


def read_cycle_time(array, drive=None):
    """Fixed sense clock: the halving time of the reference branch."""
    drive = drive or DriveConfig()
    return array.ideal_reference_resistance() * drive.c_load_f * LN2


def _read_solution(array, word_addr, drive, driven_bits=None):
    """Solve the read bias; optionally drive only some bits (serial sensing)."""
    selected = select_word(array, word_addr, "read")
    bias = {}
    for j in range(array.n_bits):
        driven = driven_bits is None or j in driven_bits
        for seg in array.segments_for_bit(j):
            bias[seg] = (
                LineBias.voltage(drive.v_read) if driven else LineBias.floating()
            )
    return solve_network(array.to_network(bias, selected.drivers))


def _assert_no_read_disturb(array, sol):
    for row, seg, dev in array.cells():
        i = sol.device_currents[array.tag(row, seg)]
        if abs(i) >= critical_current(dev.params):
            raise ReadDisturbError(
                f"read current {abs(i) * 1e6:.1f} uA reaches the switching "
                f"threshold of {array.tag(row, seg)}"
            )


def _read_currents_by_segment(array, word_addr, sense):
    currents = {}
    for j in range(array.n_bits):
        i_data, i_ref = sense.branch_currents[j]
        currents[array.host_segment(word_addr, j)] = i_data
        if array.balanced:
            currents[array.sibling_segment(word_addr, j)] = i_ref
    return currents


def read_word(array, word_addr, drive=None):
    """Sense all bits of one word in a single balanced cycle.

    The decision for each bit uses the effective branch resistances seen
    by the sense amplifier, v_read over the segment source currents, so
    whatever sneak current the mesh adds is included; the balanced layout
    adds it to both branches equally.
    """
    drive = drive or DriveConfig()
    if not array.balanced:
        return _read_word_plain(array, word_addr, drive)
    sol = _read_solution(array, word_addr, drive)
    _assert_no_read_disturb(array, sol)

    bits = []
    margins = []
    currents = []
    delays = []
    for j in range(array.n_bits):
        i_data = sol.source_currents[array.host_segment(word_addr, j)]
        i_ref = sol.source_currents[array.sibling_segment(word_addr, j)]
        r_data = drive.v_read / i_data
        r_ref = drive.v_read / i_ref
        decision = sense_bit(r_data, r_ref, drive.c_load_f, array.v_dd)
        bits.append(decision.bit)
        margins.append(r_ref - r_data)
        currents.append((i_data, i_ref))
        delays.append(decision.delay)
    return SenseResult(
        bits="".join(bits),
        per_bit_margin=tuple(margins),
        sense_delay=read_cycle_time(array, drive),
        branch_currents=tuple(currents),
        per_bit_delay=tuple(delays),
    )


def _read_word_plain(array, word_addr, drive):
    """Unbalanced layout: two behavioural cycles against an ideal midpoint.

    Without reference rows the comparison resistance cannot come from the
    mesh, so the sampled branch is compared against the ideal reference
    branch value. Costs a second cycle for the compare step.
    """
    sol = _read_solution(array, word_addr, drive)
    _assert_no_read_disturb(array, sol)
    r_ref = array.ideal_reference_resistance()
    i_ref = drive.v_read / r_ref
    bits = []
    margins = []
    currents = []
    delays = []
    for j in range(array.n_bits):
        i_data = sol.source_currents[array.host_segment(word_addr, j)]
        r_data = drive.v_read / i_data
        decision = sense_bit(r_data, r_ref, drive.c_load_f, array.v_dd)
        bits.append(decision.bit)
        margins.append(r_ref - r_data)
        currents.append((i_data, i_ref))
        delays.append(decision.delay)
    return SenseResult(
        bits="".join(bits),
        per_bit_margin=tuple(margins),
        sense_delay=2.0 * read_cycle_time(array, drive),
        branch_currents=tuple(currents),
        per_bit_delay=tuple(delays),
    )


# -- power studies ---------------------------------------------------------


def compare_sensing_power(array, word_addr, drive=None):
    """Energy of one whole-word read: all bits at once versus bit-serial.

    Serial sensing floats the idle columns, so each sub-cycle's source
    current picks up sneak current on top of the branch currents; parallel
    sensing drives every column and suppresses the sneak entirely. Both
    modes are charged the same fixed cycle time per sense.
    """
    drive = drive or DriveConfig()
    if not array.balanced:
        raise ParameterError("compare_sensing_power: needs the balanced layout")
    t_cycle = read_cycle_time(array, drive)
    v_dd = array.v_dd

    full = _read_solution(array, word_addr, drive)
    bits = read_word(array, word_addr, drive).bits
    e_parallel = []
    e_serial = []
    for j in range(array.n_bits):
        host = array.host_segment(word_addr, j)
        sibling = array.sibling_segment(word_addr, j)
        i_par = full.source_currents[host] + full.source_currents[sibling]
        solo = _read_solution(array, word_addr, drive, driven_bits={j})
        i_ser = solo.source_currents[host] + solo.source_currents[sibling]
        e_parallel.append(v_dd * i_par * t_cycle)
        e_serial.append(v_dd * i_ser * t_cycle)
    parallel_j = sum(e_parallel)
    serial_j = sum(e_serial)
    savings = tuple(
        1.0 - (p / s) if s > 0.0 else 0.0 for p, s in zip(e_parallel, e_serial)
    )
    return SensingPowerReport(
        parallel_j=parallel_j,
        serial_j=serial_j,
        saving_ratio=1.0 - parallel_j / serial_j if serial_j > 0.0 else 0.0,
        per_bit_saving=savings,
        bits=bits,
    )


def serial_sneak_profile(array, word_addr, bit, bit_value="1", drive=None):
    """Source current of a one-bit write versus the number of floating lines.

    Interpolates between a fully parallel write (every other bit column is
    co-driven with its own regulated source, writing the same value to its
    own cell of the word) and a fully serial sub-step (every other column
    floats). With 0, 1, ... companions converted to floating lines, the
    addressed cell always carries exactly the regulated write current, so
    any growth of the bit-line source current is pure sneak overhead fed
    through the floating columns. Returns (floating line count, source
    current magnitude) pairs. Solves only; no junction state is changed.

    The numbers depend on the stored data. On a word whose cells all have
    the same resistance the co-driven segments sit at matching potentials
    and the zero-floating entry collapses to the bare write current; on a
    mixed word the potential imbalance itself circulates current through
    the floating rows, which is physical but obscures the trend.
    """
    drive = drive or DriveConfig()
    if bit_value not in ("0", "1"):
        raise ParameterError(f"bit_value: expected '0' or '1', got {bit_value!r}")
    phase = bit_value
    row = array.word_row(word_addr)
    seg = array.host_segment(word_addr, bit)
    sign = 1.0 if bit_value == "1" else -1.0
    selected = select_word(array, word_addr, phase)
    others = [j for j in range(array.n_bits) if j != bit]

    profile = []
    for n_floating in range(len(others) + 1):
        targets = {seg: (array.tag(row, seg), sign * array.write_current)}
        for j in others[n_floating:]:
            s = array.host_segment(word_addr, j)
            targets[s] = (array.tag(row, s), sign * array.write_current)
        _sol, sources = _regulated_solve(array, {}, selected.drivers, targets)
        profile.append((n_floating, abs(sources[seg])))
    return profile


# -- trace serialization ----------------------------------------------------


def trace_to_csv(trace):
    """Waveform CSV: time, total supply current, then one column per line."""
    lines = sorted({line for s in trace.samples for line in s.source_currents})
    header = ["time_ns", "source_current_uA"] + [f"i_{line}_uA" for line in lines]
    rows = [",".join(header)]
    for s in trace.samples:
        cells = [f"{s.t * 1e9:.6f}", f"{s.supply_a * 1e6:.6f}"]
        for line in lines:
            cells.append(f"{s.source_currents.get(line, 0.0) * 1e6:.6f}")
        rows.append(",".join(cells))
    return "\n".join(rows) + "\n"
