"""
Benchmark circuit generators: qft, qpe, ising, surface, steane.

Qubit 0 is the least-significant bit everywhere (see simulator).
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from importlib import resources

from .circuit import Circuit, CircuitBuilder

QPE_DEFAULT_THETA = 0.15
SURFACE_PRESETS = {15: (5, 3), 25: (5, 5)}
STEANE_STABILIZERS = (
    "IIIXXXX", "IXXIIXX", "XIXIXIX",
    "IIIZZZZ", "IZZIIZZ", "ZIZIZIZ",
)
DEFAULT_SUITE = ("qft_12", "qft_16", "qft_30", "qft_32", "qpe_15",
                 "steane_25", "surface_15", "surface_25", "ising_6")


@dataclass(frozen=True)
class BenchmarkSpec:
    name: str
    generator: str
    num_qubits: int
    params: dict = field(default_factory=dict, compare=False)

    def build(self) -> Circuit:
        if self.generator == "file":
            circ = from_file(self.params["path"])
        else:
            circ = GENERATORS[self.generator](**self.params)
        if circ.num_qubits != self.num_qubits:
            raise ValueError(f"{self.name}: generated {circ.num_qubits} qubits, expected {self.num_qubits}")
        return Circuit(circ.num_qubits, circ.ops, circ.num_clbits, self.name)


def _qft_ops(b: CircuitBuilder, qubits, inverse=False, swaps=True):
    n = len(qubits)
    ops = []
    for j in reversed(range(n)):
        ops.append(("h", qubits[j]))
        for k in reversed(range(j)):
            ops.append(("cp", math.pi / 2 ** (j - k), qubits[j], qubits[k]))
    if swaps:
        ops += [("swap", qubits[i], qubits[n - 1 - i]) for i in range(n // 2)]
    if inverse:
        ops = [(o[0], -o[1], *o[2:]) if o[0] == "cp" else o for o in reversed(ops)]
    for o in ops:
        if o[0] == "h":
            b.h(o[1])
        elif o[0] == "cp":
            b.cp(o[1], o[2], o[3])
        else:
            b.swap(o[1], o[2])


def qft(n: int) -> Circuit:
    if n < 1:
        raise ValueError("qft needs at least one qubit")
    b = CircuitBuilder(n, name=f"qft_{n}")
    _qft_ops(b, list(range(n)))
    return b.build()


def qpe(n: int, theta: float = QPE_DEFAULT_THETA) -> Circuit:
    """n-1 counting qubits (0..n-2) estimating the phase of a P(2*pi*theta) on qubit n-1."""
    if n < 2:
        raise ValueError("qpe needs at least two qubits")
    if not 0 <= theta < 1:
        raise ValueError(f"theta must lie in [0, 1), got {theta}")
    t = n - 1
    b = CircuitBuilder(n, t, name=f"qpe_{n}")
    b.x(t)
    for j in range(t):
        b.h(j)
    for j in range(t):
        b.cp(2 * math.pi * theta * 2 ** j, j, t)
    _qft_ops(b, list(range(t)), inverse=True)
    for j in range(t):
        b.measure(j, j)
    return b.build()


def ising(n: int, J: float = 1.0, h: float = 1.0, t: float = 1.0, steps: int = 3) -> Circuit:
    """First-order Trotter evolution under -J sum Z_i Z_{i+1} - h sum X_i (open chain)."""
    if n < 2 or steps < 1:
        raise ValueError("ising needs n >= 2 and steps >= 1")
    dt = t / steps
    b = CircuitBuilder(n, name=f"ising_{n}")
    for _ in range(steps):
        for i in range(n - 1):
            b.cx(i, i + 1).rz(-2 * J * dt, i + 1).cx(i, i + 1)
        for i in range(n):
            b.rx(-2 * h * dt, i)
    return b.build()


def surface(rows: int, cols: int, rounds: int = 1) -> Circuit:
    """Checkerboard surface-code patch; measure qubits at odd (i+j), X-type on even rows."""
    if rows % 2 == 0 or cols % 2 == 0 or rows < 1 or cols < 1:
        raise ValueError("surface lattice dimensions must be odd")
    if rounds < 1:
        raise ValueError("rounds must be >= 1")
    idx = lambda i, j: i * cols + j  # noqa: E731
    ancillas = [(i, j) for i in range(rows) for j in range(cols) if (i + j) % 2]
    b = CircuitBuilder(rows * cols, len(ancillas) * rounds, name=f"surface_{rows * cols}")
    for r in range(rounds):
        x_type = [a for a in ancillas if a[0] % 2 == 0]
        for i, j in x_type:
            b.h(idx(i, j))
        for di, dj in ((-1, 0), (0, -1), (0, 1), (1, 0)):  # N, W, E, S
            for i, j in ancillas:
                ni, nj = i + di, j + dj
                if not (0 <= ni < rows and 0 <= nj < cols):
                    continue
                if i % 2 == 0:
                    b.cx(idx(i, j), idx(ni, nj))
                else:
                    b.cx(idx(ni, nj), idx(i, j))
        for i, j in x_type:
            b.h(idx(i, j))
        for k, (i, j) in enumerate(ancillas):
            b.measure(idx(i, j), r * len(ancillas) + k)
    return b.build()


def surface_from_qubits(n: int, rounds: int = 1) -> Circuit:
    if n in SURFACE_PRESETS:
        return surface(*SURFACE_PRESETS[n], rounds)
    for cols in range(int(math.isqrt(n)), 0, -1):
        if n % cols == 0 and cols % 2 and (n // cols) % 2:
            return surface(n // cols, cols, rounds)
    raise ValueError(f"no odd x odd lattice has {n} qubits")


def stabilizer_round(b: CircuitBuilder, data, stabilizers, first_ancilla: int, first_clbit: int) -> None:
    """One syndrome-extraction round, one fresh ancilla per Pauli string.

    String position k acts on data[k]. Z-only strings use data-controlled CX
    parity checks; anything else uses an H-conjugated ancilla with
    controlled-X/Y/Z onto the data.
    """
    for s, pauli in enumerate(stabilizers):
        if len(pauli) != len(data) or not set(pauli) <= set("IXYZ"):
            raise ValueError(f"malformed stabilizer {pauli!r} for {len(data)} data qubits")
        a = first_ancilla + s
        support = [(data[k], p) for k, p in enumerate(pauli) if p != "I"]
        if all(p == "Z" for _, p in support):
            for d, _ in support:
                b.cx(d, a)
        else:
            b.h(a)
            for d, p in support:
                if p == "X":
                    b.cx(a, d)
                elif p == "Z":
                    b.h(d).cx(a, d).h(d)
                else:
                    b.rz(math.pi / 2, d).cx(a, d).rz(-math.pi / 2, d)
            b.h(a)
        b.measure(a, first_clbit + s)


def stabilizer_code(num_data: int, stabilizers, rounds: int, encoder=None, name: str = "") -> Circuit:
    m = len(stabilizers)
    b = CircuitBuilder(num_data + m * rounds, m * rounds, name=name)
    data = list(range(num_data))
    if encoder is not None:
        encoder(b)
    for r in range(rounds):
        stabilizer_round(b, data, stabilizers, num_data + r * m, r * m)
    return b.build()


def _steane_encode_zero(b: CircuitBuilder) -> None:
    # |0>_L: pivot qubit of each X stabilizer fans out over the rest of its support
    for stab in STEANE_STABILIZERS[:3]:
        support = [k for k, p in enumerate(stab) if p == "X"]
        pivot = support[0]
        b.h(pivot)
        for k in support[1:]:
            b.cx(pivot, k)


def steane(rounds: int = 3) -> Circuit:
    if rounds < 1:
        raise ValueError("rounds must be >= 1")
    return stabilizer_code(7, STEANE_STABILIZERS, rounds, _steane_encode_zero, f"steane_{7 + 6 * rounds}")


def repetition_code(distance: int = 3, rounds: int = 2) -> Circuit:
    stabs = ["I" * k + "ZZ" + "I" * (distance - k - 2) for k in range(distance - 1)]
    return stabilizer_code(distance, stabs, rounds, name=f"repetition_{distance}")


def steane_from_qubits(n: int) -> Circuit:
    if n < 13 or (n - 7) % 6:
        raise ValueError(f"steane circuits have 7 + 6*rounds qubits; {n} is not of that form")
    return steane((n - 7) // 6)


def from_file(path) -> Circuit:
    from pathlib import Path

    from .qasm import parse
    return parse(Path(path).read_text(encoding="utf-8"))


GENERATORS = {
    "qft": qft,
    "qpe": qpe,
    "ising": ising,
    "surface": surface_from_qubits,
    "steane": steane_from_qubits,
}


_NAME = re.compile(r"^([a-z]+)_(\d+)$")


def spec_for(name: str) -> BenchmarkSpec:
    m = _NAME.match(name)
    if not m or m.group(1) not in GENERATORS:
        raise ValueError(f"unknown benchmark {name!r}; expected <family>_<qubits> with family in "
                         f"{', '.join(GENERATORS)}")
    family, n = m.group(1), int(m.group(2))
    return BenchmarkSpec(name, family, n, {"n": n})


def file_spec(path) -> BenchmarkSpec:
    """Benchmark read from an OpenQASM file; named after the file stem."""
    from pathlib import Path
    path = Path(path)
    return BenchmarkSpec(path.stem, "file", from_file(path).num_qubits, {"path": str(path)})


def generate(family: str, num_qubits: int) -> Circuit:
    return spec_for(f"{family}_{num_qubits}").build()


def default_suite() -> list[BenchmarkSpec]:
    return [spec_for(n) for n in DEFAULT_SUITE]


def bundled(name: str) -> Circuit:
    """Pre-generated benchmark file shipped with the package."""
    from .qasm import parse
    text = (resources.files("qarchbench") / "data" / "benchmarks" / f"{name}.qasm").read_text(encoding="utf-8")
    c = parse(text)
    return Circuit(c.num_qubits, c.ops, c.num_clbits, name)


def write_bundled(directory=None) -> None:
    from pathlib import Path

    from .qasm import serialize
    directory = Path(directory or resources.files("qarchbench") / "data" / "benchmarks")
    for spec in default_suite():
        (directory / f"{spec.name}.qasm").write_text(serialize(spec.build()), encoding="utf-8")
