"""Independent reference solver for resistive networks.

Deliberately primitive: a dense Gaussian elimination with partial pivoting
over plain Python lists, assembled straight from a component list. Shares no
code with the package solver; used only to cross-check branch currents.

Component vocabulary:
    resistors : list of (node_a, node_b, ohms)
    fixed     : dict node -> volts (Dirichlet)
    injected  : dict node -> amps flowing into the node
"""

from __future__ import annotations


def gaussian_solve(matrix, rhs):
    """Solve matrix @ x = rhs in place with partial pivoting."""
    n = len(rhs)
    a = [row[:] + [rhs[i]] for i, row in enumerate(matrix)]
    for col in range(n):
        pivot = max(range(col, n), key=lambda r: abs(a[r][col]))
        if abs(a[pivot][col]) < 1e-30:
            raise ZeroDivisionError("singular system")
        a[col], a[pivot] = a[pivot], a[col]
        inv = 1.0 / a[col][col]
        for r in range(col + 1, n):
            factor = a[r][col] * inv
            if factor == 0.0:
                continue
            for c in range(col, n + 1):
                a[r][c] -= factor * a[col][c]
    x = [0.0] * n
    for r in range(n - 1, -1, -1):
        s = a[r][n]
        for c in range(r + 1, n):
            s -= a[r][c] * x[c]
        x[r] = s / a[r][r]
    return x


def solve_nodes(resistors, fixed, injected=None):
    """Return node -> voltage for the given resistive network."""
    injected = injected or {}
    nodes = []
    for a, b, _ in resistors:
        for n in (a, b):
            if n not in nodes:
                nodes.append(n)
    for n in list(fixed) + list(injected):
        if n not in nodes:
            nodes.append(n)
    unknown = [n for n in nodes if n not in fixed]
    index = {n: i for i, n in enumerate(unknown)}
    size = len(unknown)
    g = [[0.0] * size for _ in range(size)]
    rhs = [injected.get(n, 0.0) for n in unknown]
    for a, b, ohms in resistors:
        cond = 1.0 / ohms
        if a in index and b in index:
            ia, ib = index[a], index[b]
            g[ia][ia] += cond
            g[ib][ib] += cond
            g[ia][ib] -= cond
            g[ib][ia] -= cond
        elif a in index:
            ia = index[a]
            g[ia][ia] += cond
            rhs[ia] += cond * fixed[b]
        elif b in index:
            ib = index[b]
            g[ib][ib] += cond
            rhs[ib] += cond * fixed[a]
    volts = gaussian_solve(g, rhs) if size else []
    out = dict(fixed)
    for n, i in index.items():
        out[n] = volts[i]
    return out


def branch_current(voltages, a, b, ohms):
    """Current flowing from node a to node b through the resistor."""
    return (voltages[a] - voltages[b]) / ohms
