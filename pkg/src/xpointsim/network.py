"""Resistive network solver for one cross-point array.

The array is described as a bipartite mesh: word lines (rows) and bit lines
(columns) joined by two-terminal device branches at the crossings. Lines
can be driven by ideal voltage sources, ideal current sources, grounded,
left floating, or (rows only) tied to the rails through a pull-up/pull-down
transistor pair. Nodal analysis gives every line voltage and every branch
current at once, which is exactly what is needed to see where sneak
currents go: no path enumeration, the mesh is solved as a whole.

Transistor saturation makes the system piecewise linear. The solver
iterates on the set of saturated switches: solve, clamp any switch whose
ohmic current exceeds its saturation limit, replace it with a fixed
injection, and repeat until the saturated set is stable.

With ``line_resistance > 0`` every line is expanded into a chain of nodes,
one per crossing, joined by the per-segment wire resistance. Crossing
order along a line follows the order of branch declaration. Sources attach
at the first node of the chain.

Sign conventions: device current is positive from the bit-line side to the
word-line side; transistor current is positive from the rail into the row;
source current is positive out of the source into the line.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    ConvergenceError,
    InvariantError,
    ParameterError,
    SingularNetworkError,
)

__all__ = [
    "CrossbarNetwork",
    "DeviceBranch",
    "LineBias",
    "NetworkSolution",
    "RowDriver",
    "SingularNetworkError",
    "SneakReport",
    "build_network",
    "equivalent_resistance",
    "sneak_decomposition",
    "solve_network",
]

_CLAMP_SLACK = 1.0 + 1e-12
_MAX_CLAMP_ITERATIONS = 100
_KCL_LIMIT = 1e-9


@dataclass(frozen=True)
class LineBias:
    """How one line is driven externally."""

    kind: str  # "voltage" | "current" | "ground" | "float"
    value: float = 0.0

    _KINDS = ("voltage", "current", "ground", "float")

    def __post_init__(self):
        if self.kind not in self._KINDS:
            raise ParameterError(f"bias kind: unknown value {self.kind!r}")

    @classmethod
    def voltage(cls, volts):
        return cls(kind="voltage", value=float(volts))

    @classmethod
    def current(cls, amps):
        return cls(kind="current", value=float(amps))

    @classmethod
    def ground(cls):
        return cls(kind="ground", value=0.0)

    @classmethod
    def floating(cls):
        return cls(kind="float", value=0.0)


@dataclass(frozen=True)
class DeviceBranch:
    """One junction at a crossing, reduced to its present resistance."""

    row: str
    col: str
    resistance: float
    tag: str


@dataclass(frozen=True)
class RowDriver:
    """Pull-up/pull-down pair tying a word line to the rails."""

    model: object
    pmos_on: bool = False
    nmos_on: bool = False


@dataclass
class CrossbarNetwork:
    rows: list
    cols: list
    branches: list
    drivers: dict = field(default_factory=dict)
    bias: dict = field(default_factory=dict)
    v_dd: float = 1.2
    line_resistance: float = 0.0

    def __post_init__(self):
        lines = set(self.rows) | set(self.cols)
        if len(lines) != len(self.rows) + len(self.cols):
            raise ParameterError("line names: rows and cols must be distinct")
        tags = set()
        for b in self.branches:
            if b.row not in self.rows:
                raise ParameterError(f"branch {b.tag}: unknown row {b.row!r}")
            if b.col not in self.cols:
                raise ParameterError(f"branch {b.tag}: unknown col {b.col!r}")
            if not b.resistance > 0.0:
                raise ParameterError(f"branch {b.tag}: resistance must be positive")
            if b.tag in tags:
                raise ParameterError(f"branch tag {b.tag!r} appears twice")
            tags.add(b.tag)
        for line in self.bias:
            if line not in lines:
                raise ParameterError(f"bias: unknown line {line!r}")
        for row in self.drivers:
            if row not in self.rows:
                raise ParameterError(f"driver: {row!r} is not a row")
        if self.line_resistance < 0.0:
            raise ParameterError("line_resistance: must be non-negative")


@dataclass(frozen=True)
class _RailBranch:
    node: object
    rail_volts: float
    resistance: float
    key: tuple  # (row, "vdd" | "gnd")
    row: str


@dataclass
class AssembledNetwork:
    """Node-level view of a CrossbarNetwork, ready to solve."""

    net: CrossbarNetwork
    nodes: list
    terminals: dict  # line -> node
    fixed: dict  # node -> volts
    injections: dict  # node -> amps
    mesh_branches: list  # (node_a, node_b, resistance, tag-or-None)
    rail_branches: list

    @property
    def unknown_count(self):
        return len(self.nodes) - len(self.fixed)


def build_network(net):
    """Expand lines into nodes and collect every conducting element."""
    crossings = {line: [] for line in list(net.rows) + list(net.cols)}
    for b in net.branches:
        crossings[b.row].append(b.col)
        crossings[b.col].append(b.row)

    expand = net.line_resistance > 0.0
    nodes = []
    terminals = {}
    positions = {}
    for line, others in crossings.items():
        if not expand:
            terminals[line] = line
            nodes.append(line)
            continue
        count = max(1, len(others))
        chain = [(line, k) for k in range(count)]
        nodes.extend(chain)
        terminals[line] = chain[0]
        positions[line] = {}
        for k, other in enumerate(others):
            positions[line][other] = k

    mesh = []
    if expand:
        for line, others in crossings.items():
            for k in range(len(others) - 1):
                mesh.append(((line, k), (line, k + 1), net.line_resistance, None))

    def crossing_node(line, other):
        if not expand:
            return line
        return (line, positions[line][other])

    for b in net.branches:
        mesh.append(
            (crossing_node(b.col, b.row), crossing_node(b.row, b.col), b.resistance, b.tag)
        )

    fixed = {}
    injections = {}
    for line, lb in net.bias.items():
        t = terminals[line]
        if lb.kind == "voltage":
            fixed[t] = lb.value
        elif lb.kind == "ground":
            fixed[t] = 0.0
        elif lb.kind == "current":
            injections[t] = injections.get(t, 0.0) + lb.value

    rails = []
    for row, drv in net.drivers.items():
        t = terminals[row]
        m = drv.model
        rails.append(
            _RailBranch(t, net.v_dd, m.r_on if drv.pmos_on else m.r_off, (row, "vdd"), row)
        )
        rails.append(
            _RailBranch(t, 0.0, m.r_on if drv.nmos_on else m.r_off, (row, "gnd"), row)
        )

    return AssembledNetwork(
        net=net,
        nodes=nodes,
        terminals=terminals,
        fixed=fixed,
        injections=injections,
        mesh_branches=mesh,
        rail_branches=rails,
    )


def _check_anchored(asm):
    """Every unknown node must conduct to some fixed potential."""
    anchored = set(asm.fixed)
    for rb in asm.rail_branches:
        if math.isfinite(rb.resistance):
            anchored.add(rb.node)
    adjacency = {n: [] for n in asm.nodes}
    for a, b, r, _tag in asm.mesh_branches:
        if math.isfinite(r):
            adjacency[a].append(b)
            adjacency[b].append(a)
    seen = set()
    stack = [n for n in asm.nodes if n in anchored]
    while stack:
        n = stack.pop()
        if n in seen:
            continue
        seen.add(n)
        stack.extend(adjacency[n])
    stranded = [n for n in asm.nodes if n not in seen]
    if stranded:
        lines = sorted({n if isinstance(n, str) else n[0] for n in stranded})
        raise SingularNetworkError(
            "no conduction path to a fixed potential from: " + ", ".join(lines)
        )


def _solve_linear(asm, clamped):
    """One nodal solve with the given set of saturated switches."""
    unknowns = [n for n in asm.nodes if n not in asm.fixed]
    index = {n: k for k, n in enumerate(unknowns)}
    n_unknown = len(unknowns)
    g_matrix = np.zeros((n_unknown, n_unknown))
    rhs = np.zeros(n_unknown)

    def stamp(a, b_node, volts_b, g):
        # conductance between node a and either node b_node or potential volts_b
        if a in index:
            i = index[a]
            g_matrix[i, i] += g
            if b_node is not None and b_node in index:
                g_matrix[i, index[b_node]] -= g
            else:
                vb = asm.fixed[b_node] if b_node is not None else volts_b
                rhs[i] += g * vb

    for a, b, r, _tag in asm.mesh_branches:
        if not math.isfinite(r):
            continue
        g = 1.0 / r
        stamp(a, b, None, g)
        stamp(b, a, None, g)
    for rb in asm.rail_branches:
        if rb.key in clamped:
            continue
        if not math.isfinite(rb.resistance):
            continue
        stamp(rb.node, None, rb.rail_volts, 1.0 / rb.resistance)
    for node, amps in asm.injections.items():
        if node in index:
            rhs[index[node]] += amps
    for key, amps in clamped.items():
        node = next(rb.node for rb in asm.rail_branches if rb.key == key)
        if node in index:
            rhs[index[node]] += amps

    if n_unknown:
        try:
            solution = np.linalg.solve(g_matrix, rhs)
        except np.linalg.LinAlgError as exc:
            raise SingularNetworkError(f"nodal matrix is singular: {exc}") from exc
    else:
        solution = np.zeros(0)

    volts = dict(asm.fixed)
    for n, k in index.items():
        volts[n] = float(solution[k])
    return volts


def solve_network(net):
    """Solve a CrossbarNetwork, iterating transistor saturation to a fixed point."""
    asm = build_network(net)
    _check_anchored(asm)

    clamped = {}
    seen_sets = set()
    volts = {}
    for _ in range(_MAX_CLAMP_ITERATIONS):
        volts = _solve_linear(asm, clamped)
        proposal = {}
        for rb in asm.rail_branches:
            if not math.isfinite(rb.resistance):
                continue
            i_lin = (rb.rail_volts - volts[rb.node]) / rb.resistance
            i_sat = net.drivers[rb.row].model.i_sat
            if abs(i_lin) > i_sat * _CLAMP_SLACK:
                proposal[rb.key] = math.copysign(i_sat, i_lin)
        if proposal == clamped:
            break
        marker = frozenset(proposal.items())
        if marker in seen_sets:
            raise ConvergenceError(
                "saturation assignment oscillates; no consistent operating point"
            )
        seen_sets.add(marker)
        clamped = proposal
    else:
        raise ConvergenceError("saturation iteration exceeded the step limit")

    return _finish_solution(net, asm, volts, clamped)


def _finish_solution(net, asm, volts, clamped):
    device_currents = {}
    flow = {n: 0.0 for n in asm.nodes}  # net current into each node
    # the conservation check is normalised by the gross magnitude of the
    # stamped terms, not the (possibly cancelled) net branch currents
    gross = 0.0
    for a, b, r, tag in asm.mesh_branches:
        i = 0.0 if not math.isfinite(r) else (volts[a] - volts[b]) / r
        if tag is not None:
            device_currents[tag] = i
        flow[a] -= i
        flow[b] += i
        if math.isfinite(r):
            gross = max(gross, (abs(volts[a]) + abs(volts[b])) / r)

    transistor_currents = {row: 0.0 for row in net.drivers}
    for rb in asm.rail_branches:
        if rb.key in clamped:
            i = clamped[rb.key]
        elif math.isfinite(rb.resistance):
            i = (rb.rail_volts - volts[rb.node]) / rb.resistance
            gross = max(gross, (abs(rb.rail_volts) + abs(volts[rb.node])) / rb.resistance)
        else:
            i = 0.0
        transistor_currents[rb.row] += i
        flow[rb.node] += i
        gross = max(gross, abs(i))

    for node, amps in asm.injections.items():
        flow[node] += amps
        gross = max(gross, abs(amps))

    source_currents = {}
    for line, lb in net.bias.items():
        if lb.kind == "current":
            source_currents[line] = lb.value
        elif lb.kind in ("voltage", "ground"):
            # an ideal source supplies whatever the node fails to balance
            source_currents[line] = -flow[asm.terminals[line]]

    scale = max(gross, 1e-12)
    residual = max(
        (abs(flow[n]) for n in asm.nodes if n not in asm.fixed), default=0.0
    )
    kcl_residual = residual / scale
    if kcl_residual > _KCL_LIMIT:
        raise InvariantError(
            f"current conservation violated: relative residual {kcl_residual:.3e}"
        )

    line_voltages = {line: volts[t] for line, t in asm.terminals.items()}
    return NetworkSolution(
        line_voltages=line_voltages,
        node_voltages=volts,
        device_currents=device_currents,
        transistor_currents=transistor_currents,
        source_currents=source_currents,
        clamped=frozenset(row for row, _rail in clamped),
        kcl_residual=kcl_residual,
    )


@dataclass(frozen=True)
class NetworkSolution:
    line_voltages: dict
    node_voltages: dict
    device_currents: dict
    transistor_currents: dict
    source_currents: dict
    clamped: frozenset
    kcl_residual: float


@dataclass(frozen=True)
class SneakReport:
    """Current budget of one driven column: addressed branch vs the rest."""

    main: float
    sneak_sum: float
    per_path: dict  # unselected row -> current leaving the column there


def sneak_decomposition(net, solution, row, col):
    """Split a column's current into the addressed branch and sneak branches.

    Every parasitic path out of a driven column starts at one of the
    column's own unselected crossings, so grouping by first hop is a
    complete and disjoint decomposition of the sneak current.
    """
    main = None
    per_path = {}
    for b in net.branches:
        if b.col != col:
            continue
        i = solution.device_currents[b.tag]
        if b.row == row:
            main = i
        else:
            per_path[b.row] = per_path.get(b.row, 0.0) + i
    if main is None:
        raise ParameterError(f"no branch at crossing ({row!r}, {col!r})")
    return SneakReport(main=main, sneak_sum=sum(per_path.values()), per_path=per_path)


def equivalent_resistance(net, line_a, line_b):
    """Two-terminal resistance of the bare device mesh between two lines.

    Drivers and external bias are ignored: this measures the mesh itself,
    by injecting a unit current at ``line_a`` with ``line_b`` grounded.
    Returns ``math.inf`` when no conducting path exists.
    """
    if line_a == line_b:
        return 0.0
    asm = build_network(net)
    a = asm.terminals[line_a]
    b = asm.terminals[line_b]

    adjacency = {n: [] for n in asm.nodes}
    for u, v, r, _tag in asm.mesh_branches:
        if math.isfinite(r):
            adjacency[u].append(v)
            adjacency[v].append(u)
    seen = {a}
    stack = [a]
    while stack:
        n = stack.pop()
        for other in adjacency[n]:
            if other not in seen:
                seen.add(other)
                stack.append(other)
    if b not in seen:
        return math.inf

    component = [n for n in asm.nodes if n in seen]
    probe = AssembledNetwork(
        net=net,
        nodes=component,
        terminals=asm.terminals,
        fixed={b: 0.0},
        injections={a: 1.0},
        mesh_branches=[
            br for br in asm.mesh_branches if br[0] in seen and br[1] in seen
        ],
        rail_branches=[],
    )
    volts = _solve_linear(probe, {})
    return volts[a]
