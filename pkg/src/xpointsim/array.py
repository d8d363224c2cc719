"""Array construction: device placement, line naming, network extraction.

Balanced layout
---------------
Each logical bit column is physically split into two segments, named
``b{j}e`` and ``b{j}o``. A word stores its cell for bit j on the segment
matching the word's parity: even words on ``b{j}e``, odd words on
``b{j}o``. Two extra rows hold reference cells, one serving each parity:

* ``ref_e`` serves even words and keeps its reference cells on the odd
  segments;
* ``ref_o`` serves odd words and keeps its reference cells on the even
  segments.

Reading word w therefore grounds two rows, the word itself and the
reference row of matching parity, and every sense amplifier compares the
two segments of its own bit: the data cell discharges one segment, the
reference cell the other. Both segments carry exactly M/2 unselected
devices, so parasitic load and sneak pickup cancel between the branches.

Reference cells are larger junctions sized so their resistance sits at the
midpoint between the two data states; they are modelled as non-switching.

The plain (unbalanced) layout is a bare grid with one column per bit and
no reference rows; it exists for sneak-path studies and density estimates,
and its reads fall back to a two-cycle behavioural comparison against an
ideal midpoint resistor.

Word data convention: a word's content is a string like ``"1011"`` where
character j describes bit j, and '1' is the antiparallel state.
"""

from __future__ import annotations

import dataclasses

from .device import (
    MtjDevice,
    MtjParams,
    MtjState,
    SwitchingParams,
    TransistorModel,
    critical_current,
    reference_params,
)
from .errors import ParameterError
from .network import CrossbarNetwork, DeviceBranch

__all__ = ["CrossbarArray", "REF_ROWS"]

REF_ROWS = ("ref_e", "ref_o")


def _bits_to_state(ch):
    if ch == "0":
        return MtjState.P
    if ch == "1":
        return MtjState.AP
    raise ParameterError(f"data: invalid bit character {ch!r}")


def _state_to_bit(state):
    return "1" if state is MtjState.AP else "0"


class CrossbarArray:
    """One cross-point array holding live device states.

    The array owns the junction states; :mod:`xpointsim.ops` mutates them
    through :meth:`device_at` / :meth:`set_device` while running protocols.
    """

    def __init__(
        self,
        n_bits,
        m_words,
        params=None,
        dynamics=None,
        transistor=None,
        balanced=True,
        line_resistance=0.0,
        v_dd=1.2,
        write_overdrive=1.3,
    ):
        if n_bits < 1:
            raise ParameterError("n_bits: must be at least 1")
        if m_words < 1:
            raise ParameterError("m_words: must be at least 1")
        if balanced and m_words % 2 != 0:
            raise ParameterError(
                "m_words: the balanced layout pairs words by parity and "
                "needs an even word count"
            )
        self.n_bits = n_bits
        self.m_words = m_words
        self.balanced = balanced
        self.line_resistance = line_resistance
        self.v_dd = v_dd
        self.params = params if params is not None else MtjParams()
        self.dynamics = (
            dynamics if dynamics is not None else SwitchingParams.lumped_fit(self.params)
        )
        self.cell_transistor = (
            transistor
            if transistor is not None
            else TransistorModel.default_for(self.params, v_dd=v_dd, overdrive=write_overdrive)
        )
        self.write_current = write_overdrive * critical_current(self.params)
        # the word selector carries all n_bits cell currents at once,
        # so it is an n_bits-wide device
        self.row_driver_model = TransistorModel(
            r_on=self.cell_transistor.r_on / n_bits,
            r_off=self.cell_transistor.r_off,
            i_sat=n_bits * self.cell_transistor.i_sat,
        )
        self.ref_params = reference_params(self.params)

        self.word_rows = [f"w{i}" for i in range(m_words)]
        self.ref_rows = list(REF_ROWS) if balanced else []
        if balanced:
            self.segments = [
                f"b{j}{half}" for j in range(n_bits) for half in ("e", "o")
            ]
        else:
            self.segments = [f"b{j}" for j in range(n_bits)]

        self._cells = {}
        for w in range(m_words):
            for j in range(n_bits):
                key = (self.word_row(w), self.host_segment(w, j))
                self._cells[key] = MtjDevice(params=self.params, state=MtjState.P)
        if balanced:
            for j in range(n_bits):
                # each reference row covers the segments its words do not use
                self._cells[("ref_e", f"b{j}o")] = MtjDevice(
                    params=self.ref_params, state=MtjState.P
                )
                self._cells[("ref_o", f"b{j}e")] = MtjDevice(
                    params=self.ref_params, state=MtjState.P
                )

    # -- addressing ----------------------------------------------------

    def word_row(self, word):
        self._check_word(word)
        return f"w{word}"

    def parity(self, word):
        self._check_word(word)
        return word % 2

    def host_segment(self, word, bit):
        """Segment carrying the data cell of (word, bit)."""
        self._check_bit(bit)
        if not self.balanced:
            return f"b{bit}"
        return f"b{bit}{'e' if self.parity(word) == 0 else 'o'}"

    def sibling_segment(self, word, bit):
        """The other half of the bit column; carries the reference branch."""
        if not self.balanced:
            raise ParameterError("sibling_segment: plain layout has single columns")
        self._check_bit(bit)
        return f"b{bit}{'o' if self.parity(word) == 0 else 'e'}"

    def segments_for_bit(self, bit):
        self._check_bit(bit)
        if not self.balanced:
            return (f"b{bit}",)
        return (f"b{bit}e", f"b{bit}o")

    def serving_ref_row(self, word):
        if not self.balanced:
            raise ParameterError("serving_ref_row: plain layout has no reference rows")
        return "ref_e" if self.parity(word) == 0 else "ref_o"

    def is_reference_row(self, row):
        return row in self.ref_rows

    def _check_word(self, word):
        if not 0 <= word < self.m_words:
            raise ParameterError(
                f"word_addr: {word} outside 0..{self.m_words - 1}"
            )

    def _check_bit(self, bit):
        if not 0 <= bit < self.n_bits:
            raise ParameterError(f"bit: {bit} outside 0..{self.n_bits - 1}")

    # -- device state --------------------------------------------------

    @staticmethod
    def tag(row, segment):
        return f"{row}:{segment}"

    def device_at(self, row, segment):
        return self._cells[(row, segment)]

    def set_device(self, row, segment, device):
        if (row, segment) not in self._cells:
            raise ParameterError(f"no cell at ({row!r}, {segment!r})")
        self._cells[(row, segment)] = device

    def cells(self):
        """Iterate (row, segment, device) over every cell including references."""
        for (row, segment), dev in self._cells.items():
            yield row, segment, dev

    def state(self, word, bit):
        return self._cells[(self.word_row(word), self.host_segment(word, bit))].state

    def get_word(self, word):
        return "".join(
            _state_to_bit(self.state(word, j)) for j in range(self.n_bits)
        )

    def set_word(self, word, data):
        """Directly assign stored data, bypassing the write protocol."""
        if len(data) != self.n_bits:
            raise ParameterError(
                f"data: expected {self.n_bits} bits, got {len(data)}"
            )
        for j, ch in enumerate(data):
            key = (self.word_row(word), self.host_segment(word, j))
            self._cells[key] = dataclasses.replace(
                self._cells[key], state=_bits_to_state(ch), progress=0.0
            )

    def critical_current_of(self, row, segment):
        return critical_current(self._cells[(row, segment)].params)

    # -- network extraction ---------------------------------------------

    def to_network(self, bias, drivers):
        """Snapshot the present device states into a solvable network."""
        branches = [
            DeviceBranch(
                row=row,
                col=segment,
                resistance=dev.resistance,
                tag=self.tag(row, segment),
            )
            for (row, segment), dev in self._cells.items()
        ]
        return CrossbarNetwork(
            rows=self.word_rows + self.ref_rows,
            cols=list(self.segments),
            branches=branches,
            drivers=drivers,
            bias=bias,
            v_dd=self.v_dd,
            line_resistance=self.line_resistance,
        )

    def ideal_branch_resistance(self, state):
        """Series resistance of one isolated sense branch in a given state."""
        device = MtjDevice(params=self.params, state=state)
        return device.resistance + self.row_driver_model.r_on

    def ideal_reference_resistance(self):
        device = MtjDevice(params=self.ref_params, state=MtjState.P)
        return device.resistance + self.row_driver_model.r_on
