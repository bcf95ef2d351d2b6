"""
OpenQASM 2.0 subset reader/writer.

Supported: one qreg, at most one creg, gates h x sx rz rx u cx cp (cu1)
swap, measure, barrier. Angles are decimal literals or rational multiples
of pi (``pi/8``, ``-3*pi/4``, ``0.5*pi``). ``include`` lines are skipped
with a warning.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass

from .circuit import Circuit, CircuitError, GateKind, Op


@dataclass(frozen=True)
class ParseDiagnostic:
    line: int
    column: int
    message: str
    severity: str = "error"

    def __str__(self):
        return f"{self.line}:{self.column}: {self.severity}: {self.message}"


class QasmError(ValueError):
    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        super().__init__("\n".join(str(d) for d in self.diagnostics))


_GATES = {
    "h": GateKind.H, "x": GateKind.X, "sx": GateKind.SX, "rz": GateKind.RZ,
    "rx": GateKind.RX, "u": GateKind.U, "u3": GateKind.U, "cx": GateKind.CX,
    "cp": GateKind.CP, "cu1": GateKind.CP, "swap": GateKind.SWAP,
}

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r\f\v]+)
  | (?P<nl>\n)
  | (?P<comment>//[^\n]*)
  | (?P<string>"[^"\n]*")
  | (?P<number>(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<arrow>->)
  | (?P<sym>[\[\](),;*/+\-{}])
""", re.VERBOSE)

_NUM = r"(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?"
_PI_EXPR = re.compile(rf"^([+-])?(?:({_NUM})\*)?pi(?:/({_NUM}))?$")
_DEC_EXPR = re.compile(rf"^([+-])?({_NUM})(?:/({_NUM}))?$")


@dataclass
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(text, diags):
    toks, line, line_start, pos = [], 1, 0, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            diags.append(ParseDiagnostic(line, pos - line_start + 1, f"unexpected character {text[pos]!r}"))
            pos += 1
            continue
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind not in ("ws", "comment"):
            toks.append(_Tok(kind, m.group(), line, pos - line_start + 1))
        pos = m.end()
    return toks


def parse_angle(expr: str) -> float:
    s = expr.replace(" ", "")
    m = _PI_EXPR.match(s)
    if m:
        sign, num, den = m.groups()
        val = (float(num) if num else 1.0) * math.pi
    else:
        m = _DEC_EXPR.match(s)
        if not m:
            raise ValueError(f"malformed angle expression {expr!r}")
        sign, num, den = m.groups()
        val = float(num)
    if den is not None:
        d = float(den)
        if d == 0:
            raise ValueError(f"division by zero in {expr!r}")
        val /= d
    if not math.isfinite(val):
        raise ValueError(f"non-finite angle {expr!r}")
    return -val if sign == "-" else val


def format_angle(theta: float) -> str:
    """Exact pi fraction when the angle is k*pi/2^j for small k, else repr."""
    if theta == 0:
        return "0"
    for j in range(0, 64):
        d = 2.0 ** j
        k = theta * d / math.pi
        rk = round(k)
        if abs(k - rk) < 1e-9 and 0 < abs(rk) <= 64 and rk * math.pi / d == theta:
            sign = "-" if rk < 0 else ""
            num = "" if abs(rk) == 1 else f"{abs(rk)}*"
            den = "" if j == 0 else f"/{int(d)}"
            return f"{sign}{num}pi{den}"
    return repr(float(theta))


class _Parser:
    def __init__(self, toks, diags):
        self.toks = toks
        self.i = 0
        self.diags = diags
        self.qreg = None  # (name, size)
        self.creg = None
        self.ops: list[Op] = []

    def error(self, tok, msg, severity="error"):
        self.diags.append(ParseDiagnostic(tok.line, tok.col, msg, severity))

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def statement(self):
        """Tokens up to (excluding) the next ';', consuming the ';'."""
        start = self.i
        while self.i < len(self.toks) and self.toks[self.i].text != ";":
            self.i += 1
        stmt = self.toks[start:self.i]
        terminated = self.i < len(self.toks)
        self.i += 1
        return stmt, terminated

    def run(self):
        first = self.peek()
        if first is None or first.text != "OPENQASM":
            tok = first or _Tok("eof", "", 1, 1)
            self.error(tok, "missing 'OPENQASM 2.0;' header")
            return
        stmt, term = self.statement()
        if len(stmt) != 2 or stmt[1].text not in ("2.0", "2"):
            self.error(first, "only OPENQASM 2.0 is supported")
        while self.peek() is not None:
            stmt, term = self.statement()
            if not stmt:
                continue
            if not term:
                self.error(stmt[-1], "missing ';'")
            try:
                self.dispatch(stmt)
            except _Abort:
                pass

    def dispatch(self, stmt):
        head = stmt[0]
        word = head.text
        if head.kind != "ident":
            self.error(head, f"unexpected {word!r}")
            return
        if word == "include":
            self.error(head, "include ignored; built-in gate set is used", "warning")
        elif word in ("qreg", "creg"):
            self.register(stmt)
        elif word in ("gate", "opaque", "if", "reset", "OPENQASM"):
            self.error(head, f"'{word}' is not supported")
        elif word == "measure":
            self.measure(stmt)
        elif word == "barrier":
            qs = self.qubit_list(stmt[1:], head)
            if qs:
                self.ops.append(Op(GateKind.BARRIER, tuple(qs)))
        elif word in _GATES:
            self.gate(_GATES[word], stmt)
        else:
            self.error(head, f"unknown gate '{word}'")

    def register(self, stmt):
        head = stmt[0]
        if len(stmt) != 5 or stmt[1].kind != "ident" or stmt[2].text != "[" \
                or stmt[3].kind != "number" or stmt[4].text != "]":
            self.error(head, f"malformed {head.text} declaration")
            return
        size = stmt[3].text
        if not size.isdigit():
            self.error(stmt[3], "register size must be an integer")
            return
        reg = (stmt[1].text, int(size))
        if head.text == "qreg":
            if self.qreg is not None:
                self.error(head, "only one quantum register is supported")
                return
            self.qreg = reg
        else:
            if self.creg is not None:
                self.error(head, "only one classical register is supported")
                return
            self.creg = reg

    def ref(self, toks, reg, what):
        """Parse `name` or `name[i]`; returns list of indices."""
        if not toks:
            raise self.abort(None, f"missing {what} argument")
        name = toks[0]
        if reg is None:
            raise self.abort(name, f"no {what} register declared")
        if name.kind != "ident" or name.text != reg[0]:
            raise self.abort(name, f"unknown {what} register '{name.text}'")
        if len(toks) == 1:
            return list(range(reg[1]))
        if len(toks) != 4 or toks[1].text != "[" or toks[3].text != "]" or not toks[2].text.isdigit():
            raise self.abort(name, f"malformed {what} reference")
        idx = int(toks[2].text)
        if idx >= reg[1]:
            raise self.abort(toks[2], f"index out of range: {name.text}[{idx}] with size {reg[1]}")
        return [idx]

    def abort(self, tok, msg):
        if tok is None:
            tok = self.toks[min(self.i, len(self.toks)) - 1] if self.toks else _Tok("eof", "", 1, 1)
        self.error(tok, msg)
        return _Abort()

    def split_args(self, toks):
        args, cur = [], []
        for t in toks:
            if t.text == ",":
                args.append(cur)
                cur = []
            else:
                cur.append(t)
        args.append(cur)
        return args

    def qubit_list(self, toks, head):
        out = []
        for arg in self.split_args(toks):
            out += self.ref(arg, self.qreg, "quantum")
        if len(set(out)) != len(out):
            raise self.abort(head, "repeated qubit")
        return out

    def measure(self, stmt):
        arrow = next((k for k, t in enumerate(stmt) if t.kind == "arrow"), None)
        if arrow is None:
            raise self.abort(stmt[0], "measure needs '->'")
        qs = self.ref(stmt[1:arrow], self.qreg, "quantum")
        cs = self.ref(stmt[arrow + 1:], self.creg, "classical")
        if len(qs) != len(cs):
            raise self.abort(stmt[0], "measure register sizes differ")
        for q, c in zip(qs, cs):
            self.ops.append(Op(GateKind.MEASURE, (q,), (), c))

    def gate(self, kind, stmt):
        head = stmt[0]
        rest = stmt[1:]
        params = []
        if rest and rest[0].text == "(":
            depth, close = 0, None
            for k, t in enumerate(rest):
                depth += t.text == "("
                depth -= t.text == ")"
                if depth == 0:
                    close = k
                    break
            if close is None:
                raise self.abort(head, "unbalanced parentheses")
            for arg in self.split_args(rest[1:close]):
                text = "".join(t.text for t in arg)
                try:
                    params.append(parse_angle(text))
                except ValueError as exc:
                    raise self.abort(arg[0] if arg else head, str(exc))
            rest = rest[close + 1:]
        if len(params) != kind.num_params:
            raise self.abort(head, f"'{head.text}' takes {kind.num_params} parameter(s), got {len(params)}")
        args = [self.ref(a, self.qreg, "quantum") for a in self.split_args(rest)]
        if len(args) != kind.arity:
            raise self.abort(head, f"'{head.text}' takes {kind.arity} qubit argument(s)")
        if kind.arity == 1:
            for q in args[0]:
                self.ops.append(Op(kind, (q,), tuple(params)))
            return
        if any(len(a) != 1 for a in args):
            raise self.abort(head, "register broadcast is only supported for single-qubit gates")
        qs = (args[0][0], args[1][0])
        if qs[0] == qs[1]:
            raise self.abort(head, "two-qubit gate on a single qubit")
        self.ops.append(Op(kind, qs, tuple(params)))


class _Abort(Exception):
    pass


def parse_with_diagnostics(text: str) -> tuple[Circuit | None, list[ParseDiagnostic]]:
    """Never raises on malformed input: returns (circuit or None, diagnostics)."""
    diags: list[ParseDiagnostic] = []
    toks = _tokenize(text, diags)
    p = _Parser(toks, diags)
    p.run()
    if p.qreg is None and not any(d.severity == "error" for d in diags):
        diags.append(ParseDiagnostic(1, 1, "missing quantum register declaration"))
    if any(d.severity == "error" for d in diags):
        return None, diags
    try:
        circ = Circuit(p.qreg[1], tuple(p.ops), p.creg[1] if p.creg else 0)
    except CircuitError as exc:
        return None, diags + [ParseDiagnostic(1, 1, str(exc))]
    return circ, diags


def parse(text: str) -> Circuit:
    circ, diags = parse_with_diagnostics(text)
    if circ is None:
        raise QasmError([d for d in diags if d.severity == "error"])
    return circ


def serialize(circuit: Circuit, qreg: str = "q", creg: str = "c") -> str:
    lines = ["OPENQASM 2.0;", f"qreg {qreg}[{circuit.num_qubits}];"]
    if circuit.num_clbits:
        lines.append(f"creg {creg}[{circuit.num_clbits}];")
    for op in circuit.ops:
        args = ",".join(f"{qreg}[{q}]" for q in op.qubits)
        if op.kind is GateKind.MEASURE:
            lines.append(f"measure {args} -> {creg}[{op.clbit}];")
        elif op.params:
            ps = ",".join(format_angle(p) for p in op.params)
            lines.append(f"{op.kind.value}({ps}) {args};")
        else:
            lines.append(f"{op.kind.value} {args};")
    return "\n".join(lines) + "\n"
