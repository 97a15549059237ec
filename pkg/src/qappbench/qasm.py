"""OpenQASM 2.0 subset parser and emitters for 2.0 and a minimal 3.0 dialect.

Supported statements: the ``OPENQASM 2.0;`` header, ``include`` (skipped),
one ``qreg``, at most one ``creg``, the built-in gates below, ``barrier``
(ignored) and terminal ``measure``. Angles are constant expressions over
numbers and ``pi`` with ``+ - * /``, parentheses and unary minus.

``ccz`` and ``mcx`` are accepted and emitted as extensions so that every gate
kind of the circuit model round-trips; ``mcx`` takes the controls first and
the target last.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass

from .circuit import Circuit, GateOp, Tag, validate
from .counts import CountsFile, read_counts, write_counts  # noqa: F401  (re-exported)

# name -> (tag, number of qubits or None for variadic, number of params)
GATES: dict[str, tuple[Tag, int | None, int]] = {
    "rx": (Tag.RX, 1, 1), "ry": (Tag.RY, 1, 1), "rz": (Tag.RZ, 1, 1),
    "cx": (Tag.CNOT, 2, 0), "CX": (Tag.CNOT, 2, 0),
    "h": (Tag.H, 1, 0), "x": (Tag.X, 1, 0), "y": (Tag.Y, 1, 0), "z": (Tag.Z, 1, 0),
    "s": (Tag.S, 1, 0), "t": (Tag.T, 1, 0),
    "cz": (Tag.CZ, 2, 0), "ccx": (Tag.CCX, 3, 0), "ccz": (Tag.CCZ, 3, 0),
    "swap": (Tag.SWAP, 2, 0), "crz": (Tag.CRZ, 2, 1), "cp": (Tag.CP, 2, 1), "cu1": (Tag.CP, 2, 1),
    "mcx": (Tag.MCX, None, 0),
}
EMIT_NAMES = {Tag.RX: "rx", Tag.RY: "ry", Tag.RZ: "rz", Tag.CNOT: "cx", Tag.H: "h", Tag.X: "x",
              Tag.Y: "y", Tag.Z: "z", Tag.S: "s", Tag.T: "t", Tag.CZ: "cz", Tag.CCX: "ccx",
              Tag.CCZ: "ccz", Tag.SWAP: "swap", Tag.CRZ: "crz", Tag.CP: "cp", Tag.MCX: "mcx"}


class QasmError(ValueError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line, self.column = line, column
        where = f"line {line}, column {column}: " if line is not None else ""
        super().__init__(where + message)


class QasmSyntaxError(QasmError):
    pass


class UnsupportedGateError(QasmError):
    def __init__(self, name: str, line: int | None = None, column: int | None = None):
        self.gate = name
        super().__init__(f"unsupported gate {name!r}", line, column)


class NonTerminalMeasureError(QasmError):
    pass


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int


_TOKEN_RE = re.compile(r"""
    (?P<comment>//[^\n]*)
  | (?P<newline>\n)
  | (?P<ws>[ \t\r\f\v]+)
  | (?P<number>(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?)
  | (?P<id>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<string>"[^"\n]*")
  | (?P<arrow>->)
  | (?P<sym>[;,()\[\]+\-*/])
""", re.VERBOSE)


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        col = pos - line_start + 1
        if m is None:
            raise QasmSyntaxError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        if kind == "newline":
            line += 1
            line_start = m.end()
        elif kind not in ("ws", "comment"):
            tokens.append(Token(kind, m.group(), line, col))
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.i = 0
        self.qreg: tuple[str, int] | None = None
        self.creg: tuple[str, int] | None = None
        self.ops: list[GateOp] = []
        self.measured: set[int] = set()

    # token helpers

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def error(self, message: str, tok: Token | None = None) -> QasmSyntaxError:
        tok = tok or self.tok
        return QasmSyntaxError(message, tok.line, tok.column)

    def advance(self) -> Token:
        tok = self.tok
        if tok.kind != "eof":
            self.i += 1
        return tok

    def accept(self, text: str) -> bool:
        if self.tok.text == text and self.tok.kind in ("sym", "arrow", "id"):
            self.advance()
            return True
        return False

    def expect(self, text: str) -> Token:
        tok = self.tok
        if not self.accept(text):
            found = tok.text or "end of input"
            raise self.error(f"expected {text!r}, found {found!r}", tok)
        return tok

    def expect_kind(self, kind: str, what: str) -> Token:
        tok = self.tok
        if tok.kind != kind:
            raise self.error(f"expected {what}, found {tok.text or 'end of input'!r}", tok)
        return self.advance()

    def integer(self) -> int:
        tok = self.expect_kind("number", "an integer")
        if not tok.text.isdigit() or len(tok.text) > 9:
            raise self.error(f"expected an integer below 10^9, found {tok.text!r}", tok)
        return int(tok.text)

    # expressions

    def expression(self) -> float:
        value = self.term()
        while self.tok.text in ("+", "-") and self.tok.kind == "sym":
            op = self.advance().text
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self) -> float:
        value = self.unary()
        while self.tok.text in ("*", "/") and self.tok.kind == "sym":
            op_tok = self.advance()
            rhs = self.unary()
            if op_tok.text == "*":
                value *= rhs
            elif rhs == 0:
                raise self.error("division by zero", op_tok)
            else:
                value /= rhs
        return value

    def unary(self) -> float:
        if self.tok.kind == "sym" and self.tok.text in ("-", "+"):
            sign = -1.0 if self.advance().text == "-" else 1.0
            return sign * self.unary()
        return self.atom()

    def atom(self) -> float:
        tok = self.tok
        if tok.kind == "number":
            self.advance()
            return float(tok.text)
        if tok.kind == "id" and tok.text == "pi":
            self.advance()
            return math.pi
        if self.accept("("):
            value = self.expression()
            self.expect(")")
            return value
        raise self.error(f"expected a number, 'pi' or '(', found {tok.text or 'end of input'!r}")

    # statements

    def parse(self, name: str) -> Circuit:
        self.header()
        while self.tok.kind != "eof":
            self.statement()
        if self.qreg is None:
            raise self.error("no qreg declared")
        n = self.qreg[1]
        circuit = Circuit(n, tuple(self.ops), name, measured=bool(self.measured))
        problems = validate(circuit)
        if problems:
            raise QasmSyntaxError("; ".join(problems))
        return circuit

    def header(self):
        tok = self.tok
        if tok.text != "OPENQASM":
            raise self.error("document must start with 'OPENQASM 2.0;'", tok)
        self.advance()
        version = self.expect_kind("number", "a version number")
        if version.text not in ("2", "2.0"):
            raise self.error(f"only OpenQASM 2.0 is parsed, found version {version.text}", version)
        self.expect(";")

    def statement(self):
        tok = self.tok
        if tok.kind != "id":
            raise self.error(f"expected a statement, found {tok.text!r}", tok)
        word = tok.text
        if word == "include":
            self.advance()
            self.expect_kind("string", "a quoted file name")
            self.expect(";")
        elif word in ("qreg", "creg"):
            self.register(word)
        elif word == "barrier":
            self.advance()
            self.arguments()
            self.expect(";")
        elif word == "measure":
            self.measure()
        elif word in ("gate", "opaque", "if", "reset", "U"):
            raise UnsupportedGateError(word, tok.line, tok.column)
        else:
            self.gate()

    def register(self, kind: str):
        tok = self.advance()
        reg = self.expect_kind("id", "a register name").text
        self.expect("[")
        size_tok = self.tok
        size = self.integer()
        self.expect("]")
        self.expect(";")
        if size < 1:
            raise self.error("register size must be positive", size_tok)
        if kind == "qreg":
            if self.qreg is not None:
                raise self.error("only one qreg is supported", tok)
            self.qreg = (reg, size)
        else:
            if self.creg is not None:
                raise self.error("only one creg is supported", tok)
            self.creg = (reg, size)

    def argument(self) -> tuple[str, int | None, Token]:
        tok = self.expect_kind("id", "a register")
        index = None
        if self.accept("["):
            index = self.integer()
            self.expect("]")
        return tok.text, index, tok

    def arguments(self) -> list[tuple[str, int | None, Token]]:
        args = [self.argument()]
        while self.accept(","):
            args.append(self.argument())
        return args

    def qubit_indices(self, arg) -> list[int]:
        reg, index, tok = arg
        if self.qreg is None or reg != self.qreg[0]:
            raise self.error(f"unknown quantum register {reg!r}", tok)
        if index is None:
            return list(range(self.qreg[1]))
        if index >= self.qreg[1]:
            raise self.error(f"qubit index {index} out of range for {reg}[{self.qreg[1]}]", tok)
        return [index]

    def gate(self):
        tok = self.advance()
        if tok.text not in GATES:
            raise UnsupportedGateError(tok.text, tok.line, tok.column)
        tag, nq, nparams = GATES[tok.text]
        params: list[float] = []
        if self.accept("("):
            if not self.accept(")"):
                params.append(self.expression())
                while self.accept(","):
                    params.append(self.expression())
                self.expect(")")
        if len(params) != nparams:
            raise self.error(f"{tok.text} takes {nparams} parameter(s), got {len(params)}", tok)
        if not all(math.isfinite(p) for p in params):
            raise self.error("angle is not a finite number", tok)
        args = self.arguments()
        self.expect(";")
        if self.measured:
            raise NonTerminalMeasureError(f"gate {tok.text!r} after measurement", tok.line, tok.column)
        expanded = [self.qubit_indices(a) for a in args]
        if nq is not None and len(args) != nq:
            raise self.error(f"{tok.text} acts on {nq} qubit(s), got {len(args)}", tok)
        if nq is None and len(args) < 2:
            raise self.error(f"{tok.text} needs at least one control and a target", tok)
        if all(len(e) == 1 for e in expanded):
            groups = [tuple(e[0] for e in expanded)]
        elif len(expanded) == 1:
            groups = [(q,) for q in expanded[0]]
        else:
            raise self.error("register broadcast is only supported for single-qubit gates", tok)
        for qubits in groups:
            if len(set(qubits)) != len(qubits):
                raise self.error("repeated qubit", tok)
            self.ops.append(GateOp(tag, qubits, tuple(params)))

    def measure(self):
        tok = self.advance()
        src = self.argument()
        self.expect("->")
        dst_reg, dst_index, dst_tok = self.argument()
        self.expect(";")
        qubits = self.qubit_indices(src)
        if self.creg is None or dst_reg != self.creg[0]:
            raise self.error(f"unknown classical register {dst_reg!r}", dst_tok)
        bits = list(range(self.creg[1])) if dst_index is None else [dst_index]
        if any(b >= self.creg[1] for b in bits) or len(bits) != len(qubits):
            raise self.error("measure source and destination do not match", tok)
        self.measured.update(qubits)


def parse_qasm2(text: str, name: str = "qasm") -> Circuit:
    """Parse an OpenQASM 2.0 document in the supported subset into a Circuit."""
    parser = _Parser(text)
    try:
        return parser.parse(name)
    except RecursionError:
        raise parser.error("expression nested too deeply") from None


def format_angle(theta: float) -> str:
    return format(float(theta), ".17g")


def _gate_lines(circuit: Circuit, reg: str = "q") -> list[str]:
    lines = []
    for op in circuit.ops:
        name = EMIT_NAMES[op.tag]
        params = f"({','.join(format_angle(p) for p in op.params)})" if op.params else ""
        args = ",".join(f"{reg}[{q}]" for q in op.qubits)
        lines.append(f"{name}{params} {args};")
    return lines


def emit_qasm2(circuit: Circuit) -> str:
    lines = ["OPENQASM 2.0;", 'include "qelib1.inc";', f"qreg q[{circuit.num_qubits}];"]
    if circuit.measured:
        lines.append(f"creg c[{circuit.num_qubits}];")
    lines += _gate_lines(circuit)
    if circuit.measured:
        lines.append("measure q -> c;")
    return "\n".join(lines) + "\n"


def emit_qasm3(circuit: Circuit) -> str:
    lines = ["OPENQASM 3.0;", 'include "stdgates.inc";', f"qubit[{circuit.num_qubits}] q;"]
    if circuit.measured:
        lines.append(f"bit[{circuit.num_qubits}] c;")
    lines += _gate_lines(circuit)
    if circuit.measured:
        lines.append("c = measure q;")
    return "\n".join(lines) + "\n"


_QASM3_REWRITES = [
    (re.compile(r"^\s*OPENQASM\s+3(\.0)?\s*;", re.M), "OPENQASM 2.0;"),
    (re.compile(r'^\s*include\s+"stdgates\.inc"\s*;', re.M), 'include "qelib1.inc";'),
    (re.compile(r"^\s*qubit\[(\d+)\]\s+(\w+)\s*;", re.M), r"qreg \2[\1];"),
    (re.compile(r"^\s*bit\[(\d+)\]\s+(\w+)\s*;", re.M), r"creg \2[\1];"),
    (re.compile(r"^\s*(\w+)\s*=\s*measure\s+(\w+)\s*;", re.M), r"measure \2 -> \1;"),
]


def qasm3_to_qasm2(text: str) -> str:
    """Mechanical header/declaration rewrite of emitter-produced 3.0 text into 2.0."""
    for pattern, repl in _QASM3_REWRITES:
        text = pattern.sub(repl, text)
    return text


def load_qasm(path, name: str | None = None) -> Circuit:
    import os
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    stem = os.path.splitext(os.path.basename(path))[0]
    if str(path).endswith(".qasm3"):
        text = qasm3_to_qasm2(text)
    return parse_qasm2(text, name or stem)
