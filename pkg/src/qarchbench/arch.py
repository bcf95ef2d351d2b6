"""
Coupling-map model, connectivity metric, built-in 32-qubit architectures and
all-pairs hop distances.

Built-ins live as JSON files under ``data/archs``; ``lattice_edges`` is the
generator they were produced from (see ``write_builtin_files``).
"""
from __future__ import annotations

import json
import warnings
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from importlib import resources
from pathlib import Path

import numpy as np

BUILTIN_NAMES = ("r1", "r2", "r3", "r4", "r5", "s1", "s2", "s3", "s4", "s5")
FAMILIES = ("rectangle", "square", "custom")
FAMILY_N_FULL = 188


class ArchitectureError(ValueError):
    pass


@dataclass(frozen=True)
class Architecture:
    name: str
    num_qubits: int
    edges: frozenset[tuple[int, int]]
    family: str = "custom"
    n_full: int = 0
    coords: tuple[tuple[int, int], ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        edges = frozenset((int(a), int(b)) for a, b in self.edges)
        object.__setattr__(self, "edges", edges)
        if self.family not in FAMILIES:
            raise ArchitectureError(f"unknown family {self.family!r}")
        if self.n_full == 0:
            object.__setattr__(self, "n_full", self.num_qubits * (self.num_qubits - 1))
        for a, b in edges:
            if a == b:
                raise ArchitectureError(f"self-loop on qubit {a}")
            if not (0 <= a < self.num_qubits and 0 <= b < self.num_qubits):
                raise ArchitectureError(f"edge {a}-{b} outside 0..{self.num_qubits - 1}")
            if (b, a) not in edges:
                raise ArchitectureError(f"edge ({a},{b}) has no reverse ({b},{a})")
        if not edges:
            raise ArchitectureError("architecture has no couplers")
        if len(edges) > self.n_full:
            raise ArchitectureError(f"n_con={len(edges)} exceeds n_full={self.n_full}")
        comps = _components(self.num_qubits, self.neighbors)
        if len(comps) > 1:
            stray = min(comps[1:], key=len)
            raise ArchitectureError(f"coupling graph is disconnected; component {sorted(stray)} "
                                    f"is unreachable from qubit {min(comps[0])}")

    @property
    def n_con(self) -> int:
        return len(self.edges)

    @cached_property
    def neighbors(self) -> tuple[tuple[int, ...], ...]:
        nb = [[] for _ in range(self.num_qubits)]
        for a, b in self.edges:
            nb[a].append(b)
        return tuple(tuple(sorted(x)) for x in nb)

    @cached_property
    def undirected_edges(self) -> list[tuple[int, int]]:
        return sorted((a, b) for a, b in self.edges if a < b)

    @cached_property
    def distance(self) -> np.ndarray:
        return distance_matrix(self)

    @cached_property
    def neighbor_csr(self) -> tuple[np.ndarray, np.ndarray]:
        ptr = np.zeros(self.num_qubits + 1, dtype=np.int32)
        ptr[1:] = np.cumsum([len(nb) for nb in self.neighbors])
        idx = np.fromiter((q for nb in self.neighbors for q in nb), dtype=np.int32, count=int(ptr[-1]))
        return ptr, idx

    def is_coupled(self, a: int, b: int) -> bool:
        return (a, b) in self.edges


def _components(n, neighbors):
    seen = [False] * n
    comps = []
    for start in range(n):
        if seen[start]:
            continue
        seen[start] = True
        comp, queue = [start], deque([start])
        while queue:
            u = queue.popleft()
            for v in neighbors[u]:
                if not seen[v]:
                    seen[v] = True
                    comp.append(v)
                    queue.append(v)
        comps.append(comp)
    return comps


def connectivity(arch: Architecture) -> float:
    if arch.n_full <= 0:
        raise ArchitectureError("n_full must be positive")
    return arch.n_con / arch.n_full


def distance_matrix(arch: Architecture) -> np.ndarray:
    """Unweighted all-pairs hop counts by BFS from every qubit."""
    n = arch.num_qubits
    dist = np.full((n, n), -1, dtype=np.int32)
    for src in range(n):
        row = dist[src]
        row[src] = 0
        queue = deque([src])
        while queue:
            u = queue.popleft()
            for v in arch.neighbors[u]:
                if row[v] < 0:
                    row[v] = row[u] + 1
                    queue.append(v)
    if (dist < 0).any():
        raise ArchitectureError("coupling graph is disconnected")
    dist.flags.writeable = False
    return dist


def complete(n: int, name: str = "") -> Architecture:
    edges = {(a, b) for a in range(n) for b in range(n) if a != b}
    return Architecture(name or f"complete{n}", n, frozenset(edges))


def from_undirected(name, n, pairs, family="custom", n_full=0, coords=None) -> Architecture:
    edges = set()
    for a, b in pairs:
        edges.add((a, b))
        edges.add((b, a))
    return Architecture(name, n, frozenset(edges), family, n_full, coords)


# --- built-in lattices -----------------------------------------------------

def _rect_sites():
    # 8 columns x 4 rows, index = row * 8 + col
    return [(r, c) for r in range(4) for c in range(8)]


def _square_sites():
    # 6x6 with the four corners removed
    corners = {(0, 0), (0, 5), (5, 0), (5, 5)}
    return [(r, c) for r in range(6) for c in range(6) if (r, c) not in corners]


def _grid_pairs(index):
    out = []
    for (r, c), i in index.items():
        for dr, dc in ((0, 1), (1, 0)):
            j = index.get((r + dr, c + dc))
            if j is not None:
                out.append((i, j))
    return out


def _cell_diagonals(index, cells):
    out = []
    for r, c in cells:
        a, b = index.get((r, c)), index.get((r + 1, c + 1))
        x, y = index.get((r, c + 1)), index.get((r + 1, c))
        if None in (a, b, x, y):
            continue
        out += [(a, b), (x, y)]
    return out


def _rungs(index, gaps):
    """Vertical couplers between row g and g+1 at the listed columns."""
    return [(index[(g, c)], index[(g + 1, c)]) for g, cols in enumerate(gaps) for c in cols]


def _row_chains(index):
    return [(i, index[(r, c + 1)]) for (r, c), i in index.items() if (r, c + 1) in index]


def lattice_edges(name: str):
    """(family, sites, undirected couplers) for a built-in name."""
    if name[0] == "r":
        sites, family, rows, cols = _rect_sites(), "rectangle", 4, 8
    elif name[0] == "s":
        sites, family, rows, cols = _square_sites(), "square", 6, 6
    else:
        raise ArchitectureError(f"unknown built-in {name!r}")
    index = {rc: i for i, rc in enumerate(sites)}
    cells = [(r, c) for r in range(rows - 1) for c in range(cols - 1)]
    kind = name[1:]
    if kind == "1":
        pairs = _grid_pairs(index) + _cell_diagonals(index, cells)
    elif kind == "2":
        # crossings on alternating cells; square parity picks the side that avoids the cut corners
        parity = 0 if family == "rectangle" else 1
        pairs = _grid_pairs(index) + _cell_diagonals(index, [rc for rc in cells if sum(rc) % 2 == parity])
    elif kind == "3":
        pairs = _grid_pairs(index)
    elif kind in ("4", "5"):
        gaps = {
            "r4": [(0, 2, 4, 6), (1, 3, 5, 7), (0, 2, 4, 6)],
            "r5": [(0, 2, 5, 7), (0, 2, 5, 7), (0, 2, 5, 7)],
            "s4": [(1, 3), (0, 2, 4), (1, 3, 5), (0, 2, 4), (2, 4)],
            "s5": [(1, 4), (0, 2, 5), (0, 3, 5), (0, 2, 5), (1, 4)],
        }[name]
        pairs = _row_chains(index) + _rungs(index, gaps)
    else:
        raise ArchitectureError(f"unknown built-in {name!r}")
    return family, sites, sorted(tuple(sorted(p)) for p in pairs)


def _data_dir():
    return resources.files("qarchbench") / "data" / "archs"


_BUILTIN_CACHE: dict[str, Architecture] = {}


def builtin(name: str) -> Architecture:
    if name not in BUILTIN_NAMES:
        raise ArchitectureError(f"unknown architecture {name!r}; choose from {', '.join(BUILTIN_NAMES)}")
    if name not in _BUILTIN_CACHE:
        text = (_data_dir() / f"{name}.json").read_text(encoding="utf-8")
        _BUILTIN_CACHE[name] = loads(text)
    return _BUILTIN_CACHE[name]


def write_builtin_files(directory: Path | None = None) -> None:
    directory = Path(directory or _data_dir())
    for name in BUILTIN_NAMES:
        family, sites, pairs = lattice_edges(name)
        arch = from_undirected(name, len(sites), pairs, family, FAMILY_N_FULL, tuple(sites))
        save(arch, directory / f"{name}.json")


# --- file format -----------------------------------------------------------

def dumps(arch: Architecture) -> str:
    doc = {
        "name": arch.name,
        "num_qubits": arch.num_qubits,
        "family": arch.family,
        "n_full": arch.n_full,
        "edges": [f"{a}-{b}" for a, b in arch.undirected_edges],
    }
    if arch.coords is not None:
        doc["coords"] = [list(rc) for rc in arch.coords]
    return json.dumps(doc, indent=1) + "\n"


def loads(text: str) -> Architecture:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ArchitectureError(f"not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ArchitectureError("architecture file must be a JSON object")
    missing = {"name", "num_qubits", "edges"} - doc.keys()
    if missing:
        raise ArchitectureError(f"missing field(s): {', '.join(sorted(missing))}")
    n = doc["num_qubits"]
    if not isinstance(n, int) or n < 2:
        raise ArchitectureError("num_qubits must be an integer >= 2")
    directed = set()
    for item in doc["edges"]:
        if isinstance(item, str):
            try:
                a, b = (int(x) for x in item.split("-"))
            except ValueError:
                raise ArchitectureError(f"bad edge {item!r}; expected 'a-b'") from None
            directed |= {(a, b), (b, a)}
        elif isinstance(item, list) and len(item) == 2 and all(isinstance(x, int) for x in item):
            directed.add(tuple(item))
        else:
            raise ArchitectureError(f"bad edge entry {item!r}")
    one_way = sorted((a, b) for a, b in directed if (b, a) not in directed)
    if one_way:
        warnings.warn(f"{doc['name']}: adding reverse of one-way couplers {one_way}", stacklevel=2)
        directed |= {(b, a) for a, b in one_way}
    coords = doc.get("coords")
    return Architecture(str(doc["name"]), n, frozenset(directed), doc.get("family", "custom"),
                        int(doc.get("n_full", 0)), tuple(map(tuple, coords)) if coords else None)


def save(arch: Architecture, path) -> None:
    Path(path).write_text(dumps(arch), encoding="utf-8")


def load(path) -> Architecture:
    return loads(Path(path).read_text(encoding="utf-8"))


def resolve(spec: str) -> Architecture:
    """Built-in name or path to an architecture file."""
    if spec in BUILTIN_NAMES:
        return builtin(spec)
    return load(spec)


def to_dot(arch: Architecture) -> str:
    lines = [f'graph "{arch.name}" {{', "  node [shape=circle];"]
    for q in range(arch.num_qubits):
        if arch.coords:
            r, c = arch.coords[q]
            lines.append(f'  {q} [pos="{c},{-r}!"];')
        else:
            lines.append(f"  {q};")
    for a, b in arch.undirected_edges:
        lines.append(f"  {a} -- {b};")
    lines.append("}")
    return "\n".join(lines) + "\n"
