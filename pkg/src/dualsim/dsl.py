"""
Parser, printer and lowering for ``.dc`` duality-circuit files.

A file describes exactly one divide / compute / combine round::

    # comments run to end of line
    qubits 1
    divide 0.5 0.5
    path 0: I
    path 1: H 0; Z 0
    combine
    measure scenario=renorm eps=1e-9 shots=100 seed=7 zeno=3

Within a path, gates apply left to right, so ``H 0; Z 0`` lowers to the
matrix ``Z @ H``. Qubit 0 is the most significant bit of a basis index.
Parameters precede targets in a statement (``RX 0.25 1``).
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .engine import MAX_BRANCHES, WEIGHT_SUM_TOL, BranchDistribution, DualityGate
from .errors import DualityError
from .linalg import MAX_DIM
from .measurement import MeasurementScenario, Mode, ZenoSchedule

MAX_QUBITS = int(math.log2(MAX_DIM))
DEFAULT_EPSILON = 1e-9

E_PROB_SUM = "E_PROB_SUM"
E_NEG_WEIGHT = "E_NEG_WEIGHT"
E_UNKNOWN_GATE = "E_UNKNOWN_GATE"
E_BAD_ARITY = "E_BAD_ARITY"
E_TARGET_RANGE = "E_TARGET_RANGE"
E_PATH_COUNT = "E_PATH_COUNT"
E_SYNTAX = "E_SYNTAX"


class DslError(DualityError):
    def __init__(self, code: str, line: int, message: str):
        super().__init__(f"{code} (line {line}): {message}")
        self.code = code
        self.line = line
        self.message = message


@dataclass(frozen=True)
class GateSpec:
    params: int
    # None: variable target count (at least one)
    targets: int | None


GATE_TABLE: dict[str, GateSpec] = {
    "I": GateSpec(0, 0),
    "X": GateSpec(0, 1),
    "Y": GateSpec(0, 1),
    "Z": GateSpec(0, 1),
    "H": GateSpec(0, 1),
    "S": GateSpec(0, 1),
    "T": GateSpec(0, 1),
    "CNOT": GateSpec(0, 2),
    "CZ": GateSpec(0, 2),
    "RX": GateSpec(1, 1),
    "RY": GateSpec(1, 1),
    "RZ": GateSpec(1, 1),
    "PHASE": GateSpec(1, 0),
    "NEG": GateSpec(0, 0),
    "ORACLE": GateSpec(0, None),
}


@dataclass(frozen=True)
class GateStatement:
    name: str
    params: tuple[float, ...] = ()
    targets: tuple[int, ...] = ()


@dataclass(frozen=True)
class MeasurementSpec:
    scenario: MeasurementScenario
    shots: int = 0
    seed: int = 0
    zeno: ZenoSchedule | None = None


@dataclass(frozen=True)
class CircuitAST:
    qubit_count: int
    dist: BranchDistribution
    paths: tuple[tuple[GateStatement, ...], ...]
    measure: MeasurementSpec

    @property
    def dim(self) -> int:
        return 2**self.qubit_count


_INT = re.compile(r"[+-]?\d+\Z")
_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
_PATH = re.compile(r"path\s+(\S+)\s*:(.*)\Z")


def _lines(text: str) -> Iterator[tuple[int, str]]:
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def _real(tok: str, lineno: int, what: str) -> float:
    try:
        x = float(tok)
    except ValueError:
        raise DslError(E_SYNTAX, lineno, f"expected a real number for {what}, got {tok!r}") from None
    if not math.isfinite(x):
        raise DslError(E_SYNTAX, lineno, f"{what} must be finite, got {tok!r}")
    return x


def _int(tok: str, lineno: int, what: str) -> int:
    if not _INT.match(tok):
        raise DslError(E_SYNTAX, lineno, f"expected an integer for {what}, got {tok!r}")
    return int(tok)


def _parse_stmt(text: str, lineno: int, qubits: int) -> GateStatement:
    toks = text.split()
    if not toks:
        raise DslError(E_SYNTAX, lineno, "empty gate statement")
    name, args = toks[0], toks[1:]
    if not _NAME.match(name):
        raise DslError(E_SYNTAX, lineno, f"bad gate name {name!r}")
    spec = GATE_TABLE.get(name)
    if spec is None:
        raise DslError(E_UNKNOWN_GATE, lineno, f"unknown gate {name!r}")
    if len(args) < spec.params:
        raise DslError(E_BAD_ARITY, lineno, f"{name} takes {spec.params} parameter(s)")
    params = tuple(_real(t, lineno, f"{name} parameter") for t in args[: spec.params])
    rest = args[spec.params :]
    # on a one-qubit register the lone target may be omitted
    if spec.targets == 1 and not rest and qubits == 1:
        rest = ["0"]
    if spec.targets is None:
        if not rest:
            raise DslError(E_BAD_ARITY, lineno, f"{name} needs at least one target")
    elif len(rest) != spec.targets:
        raise DslError(E_BAD_ARITY, lineno, f"{name} takes {spec.targets} target(s), got {len(rest)}")
    targets = tuple(_int(t, lineno, f"{name} target") for t in rest)
    bound = 2**qubits if name == "ORACLE" else qubits
    for t in targets:
        if not 0 <= t < bound:
            raise DslError(E_TARGET_RANGE, lineno, f"{name} target {t} outside [0, {bound})")
    if name in ("CNOT", "CZ") and targets[0] == targets[1]:
        raise DslError(E_BAD_ARITY, lineno, f"{name} needs two distinct qubits")
    return GateStatement(name, params, targets)


def _parse_measure(rest: list[str], lineno: int) -> MeasurementSpec:
    fields: dict[str, str] = {}
    for tok in rest:
        key, sep, value = tok.partition("=")
        if not sep or key not in ("scenario", "eps", "shots", "seed", "zeno"):
            raise DslError(E_SYNTAX, lineno, f"bad measure option {tok!r}")
        if key in fields:
            raise DslError(E_SYNTAX, lineno, f"duplicate measure option {key!r}")
        fields[key] = value
    if "scenario" not in fields:
        raise DslError(E_SYNTAX, lineno, "measure requires scenario=none|renorm|ideal")
    try:
        mode = Mode(fields["scenario"])
    except ValueError:
        raise DslError(E_SYNTAX, lineno, f"unknown scenario {fields['scenario']!r}") from None
    if "eps" in fields:
        if mode is not Mode.RENORM_THRESHOLD:
            raise DslError(E_SYNTAX, lineno, "eps is only valid with scenario=renorm")
        eps = _real(fields["eps"], lineno, "eps")
        if eps < 0:
            raise DslError(E_SYNTAX, lineno, "eps must be nonnegative")
    else:
        eps = DEFAULT_EPSILON if mode is Mode.RENORM_THRESHOLD else 0.0
    shots = _int(fields.get("shots", "0"), lineno, "shots")
    if shots < 0:
        raise DslError(E_SYNTAX, lineno, "shots must be nonnegative")
    seed = _int(fields.get("seed", "0"), lineno, "seed")
    if seed < 0:
        raise DslError(E_SYNTAX, lineno, "seed must be nonnegative")
    zeno = None
    if "zeno" in fields:
        r = _int(fields["zeno"], lineno, "zeno")
        if r < 1:
            raise DslError(E_SYNTAX, lineno, "zeno repeats must be >= 1")
        zeno = ZenoSchedule(r)
    return MeasurementSpec(MeasurementScenario(mode, eps), shots, seed, zeno)


def parse(text: str) -> CircuitAST:
    """Parse ``.dc`` source; raises :class:`DslError` carrying an ``E_*`` code and line number."""
    lines = list(_lines(text))
    pos = 0
    last_line = lines[-1][0] if lines else 1

    def expect(keyword: str) -> tuple[int, list[str]]:
        nonlocal pos
        if pos >= len(lines):
            raise DslError(E_SYNTAX, last_line, f"unexpected end of file, expected {keyword!r}")
        lineno, line = lines[pos]
        toks = line.split()
        if toks[0] != keyword:
            raise DslError(E_SYNTAX, lineno, f"expected {keyword!r}, got {toks[0]!r}")
        pos += 1
        return lineno, toks[1:]

    lineno, rest = expect("qubits")
    if len(rest) != 1:
        raise DslError(E_SYNTAX, lineno, "qubits takes exactly one integer")
    qubits = _int(rest[0], lineno, "qubits")
    if not 1 <= qubits <= MAX_QUBITS:
        raise DslError(E_SYNTAX, lineno, f"qubits must be in [1, {MAX_QUBITS}]")

    lineno, rest = expect("divide")
    if not rest:
        raise DslError(E_SYNTAX, lineno, "divide needs at least one weight")
    if len(rest) > MAX_BRANCHES:
        raise DslError(E_SYNTAX, lineno, f"at most {MAX_BRANCHES} branches are supported")
    weights = [_real(t, lineno, "divide weight") for t in rest]
    if any(w < 0 for w in weights):
        raise DslError(E_NEG_WEIGHT, lineno, "divide weights must be nonnegative")
    if abs(math.fsum(weights) - 1.0) > WEIGHT_SUM_TOL:
        raise DslError(E_PROB_SUM, lineno, f"divide weights sum to {math.fsum(weights)!r}, not 1")
    dist = BranchDistribution(tuple(weights))
    divide_line = lineno

    paths: dict[int, tuple[GateStatement, ...]] = {}
    while pos < len(lines) and lines[pos][1].split()[0] == "path":
        lineno, line = lines[pos]
        pos += 1
        m = _PATH.match(line)
        if not m:
            raise DslError(E_SYNTAX, lineno, "expected 'path INT: stmt (; stmt)*'")
        index = _int(m.group(1), lineno, "path index")
        if index in paths:
            raise DslError(E_PATH_COUNT, lineno, f"path {index} defined twice")
        if not 0 <= index < dist.n:
            raise DslError(E_PATH_COUNT, lineno, f"path index {index} outside [0, {dist.n})")
        paths[index] = tuple(_parse_stmt(s, lineno, qubits) for s in m.group(2).split(";"))

    combine_line, rest = expect("combine")
    if rest:
        raise DslError(E_SYNTAX, combine_line, "combine takes no arguments")
    if len(paths) != dist.n:
        missing = sorted(set(range(dist.n)) - set(paths))
        raise DslError(E_PATH_COUNT, divide_line, f"missing path(s) {missing}")

    lineno, rest = expect("measure")
    measure = _parse_measure(rest, lineno)
    if pos < len(lines):
        raise DslError(E_SYNTAX, lines[pos][0], "unexpected content after measure")
    return CircuitAST(qubits, dist, tuple(paths[i] for i in range(dist.n)), measure)


def _fmt(x: float) -> str:
    return repr(float(x))


def format_statement(stmt: GateStatement) -> str:
    return " ".join([stmt.name, *map(_fmt, stmt.params), *map(str, stmt.targets)])


def format_circuit(ast: CircuitAST) -> str:
    """Render ``ast`` back to ``.dc`` text that parses to an equal AST."""
    out = [f"qubits {ast.qubit_count}", "divide " + " ".join(map(_fmt, ast.dist.weights))]
    for i, path in enumerate(ast.paths):
        out.append(f"path {i}: " + "; ".join(map(format_statement, path)))
    out.append("combine")
    m = ast.measure
    opts = [f"scenario={m.scenario.mode.value}"]
    if m.scenario.mode is Mode.RENORM_THRESHOLD:
        opts.append(f"eps={_fmt(m.scenario.epsilon)}")
    opts += [f"shots={m.shots}", f"seed={m.seed}"]
    if m.zeno is not None:
        opts.append(f"zeno={m.zeno.repeats}")
    out.append("measure " + " ".join(opts))
    return "\n".join(out) + "\n"


_SQ2 = 1 / math.sqrt(2)
_FIXED_1Q = {
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
    "H": np.array([[_SQ2, _SQ2], [_SQ2, -_SQ2]], dtype=complex),
    "S": np.array([[1, 0], [0, 1j]], dtype=complex),
    "T": np.array([[1, 0], [0, np.exp(1j * math.pi / 4)]], dtype=complex),
}


def _rotation(name: str, theta: float) -> np.ndarray:
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    if name == "RX":
        return np.array([[c, -1j * s], [-1j * s, c]])
    if name == "RY":
        return np.array([[c, -s], [s, c]], dtype=complex)
    return np.array([[np.exp(-1j * theta / 2), 0], [0, np.exp(1j * theta / 2)]])


def _on_qubit(single: np.ndarray, target: int, qubits: int) -> np.ndarray:
    out = np.eye(1, dtype=complex)
    for q in range(qubits):
        out = np.kron(out, single if q == target else np.eye(2))
    return out


def _bit(index: int, qubit: int, qubits: int) -> int:
    return (index >> (qubits - 1 - qubit)) & 1


def gate_matrix(stmt: GateStatement, qubits: int) -> np.ndarray:
    """Full ``2^qubits``-dimensional matrix of one statement."""
    d = 2**qubits
    name = stmt.name
    if name == "I":
        return np.eye(d, dtype=complex)
    if name == "NEG":
        return -np.eye(d, dtype=complex)
    if name == "PHASE":
        return np.exp(1j * stmt.params[0]) * np.eye(d, dtype=complex)
    if name in _FIXED_1Q:
        return _on_qubit(_FIXED_1Q[name], stmt.targets[0], qubits)
    if name in ("RX", "RY", "RZ"):
        return _on_qubit(_rotation(name, stmt.params[0]), stmt.targets[0], qubits)
    if name == "CNOT":
        control, target = stmt.targets
        m = np.zeros((d, d), dtype=complex)
        for k in range(d):
            j = k ^ (1 << (qubits - 1 - target)) if _bit(k, control, qubits) else k
            m[j, k] = 1.0
        return m
    if name == "CZ":
        a, b = stmt.targets
        diag = [-1.0 if _bit(k, a, qubits) and _bit(k, b, qubits) else 1.0 for k in range(d)]
        return np.diag(np.array(diag, dtype=complex))
    if name == "ORACLE":
        diag = np.ones(d, dtype=complex)
        diag[list(stmt.targets)] = -1.0
        return np.diag(diag)
    raise DslError(E_UNKNOWN_GATE, 0, f"unknown gate {name!r}")


def path_unitary(path: tuple[GateStatement, ...], qubits: int) -> np.ndarray:
    u = np.eye(2**qubits, dtype=complex)
    for stmt in path:
        u = gate_matrix(stmt, qubits) @ u
    return u


def lower(ast: CircuitAST) -> tuple[BranchDistribution, DualityGate]:
    """Compile every path to one unitary."""
    gate = DualityGate(tuple(path_unitary(p, ast.qubit_count) for p in ast.paths))
    return ast.dist, gate
