"""Line-oriented text format for protocol programs (``.qproto``).

One statement per line, ``#`` starts a comment::

    param chi = 0.5
    param delta = -0.75
    cutoff 20
    prepare cavity A fock 2
    prepare atom superposition
    interact A 3.16
    rotate pi/2
    measure atom g            # post-select
    measure atom e sample 7   # Born-sampled with seed 7
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

from .fockspace import MIN_CUTOFF, AtomLevel, CavityLabel, Params
from .protocol import (
    AtomPreparation,
    Interact,
    MeasureAtom,
    PrepareAtom,
    PrepareCavity,
    Program,
    ProgramError,
    Rotate,
    Step,
    validate_program,
)

_TOKEN = re.compile(r"=|\*|[^\s=*#]+")
_NUMBER = re.compile(r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?\Z")
_INT = re.compile(r"\d+\Z")

_LEVELS = {"e": AtomLevel.EXCITED, "g": AtomLevel.GROUND}
_CAVITIES = {"A": CavityLabel.A, "B": CavityLabel.B}


class ParseError(ValueError):
    def __init__(self, line: int, column: int, message: str, token: str = ""):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column
        self.message = message
        self.token = token


@dataclass(frozen=True)
class _Tok:
    text: str
    col: int


class _Line:
    def __init__(self, lineno: int, text: str):
        self.lineno = lineno
        self.text = text
        body = text.split("#", 1)[0]
        self.toks = [_Tok(m.group(), m.start() + 1) for m in _TOKEN.finditer(body)]
        self.pos = 0

    def error(self, message: str, tok: _Tok | None = None) -> ParseError:
        if tok is None:
            # missing token: point just past the end of the statement
            last = self.toks[-1]
            return ParseError(self.lineno, last.col + len(last.text), message, "")
        return ParseError(self.lineno, tok.col, message, tok.text)

    def next(self, what: str) -> _Tok:
        if self.pos >= len(self.toks):
            raise self.error(f"expected {what}")
        tok = self.toks[self.pos]
        self.pos += 1
        return tok

    def keyword(self, *choices: str) -> _Tok:
        tok = self.next(" or ".join(repr(c) for c in choices))
        if tok.text not in choices:
            raise self.error(f"expected {' or '.join(repr(c) for c in choices)}, got {tok.text!r}", tok)
        return tok

    def number(self, what: str = "number") -> tuple[float, _Tok]:
        tok = self.next(what)
        if not _NUMBER.match(tok.text):
            raise self.error(f"expected {what}, got {tok.text!r}", tok)
        val = float(tok.text)
        if not math.isfinite(val):
            raise self.error(f"{what} out of range: {tok.text}", tok)
        return val, tok

    def integer(self, what: str) -> tuple[int, _Tok]:
        tok = self.next(what)
        if not _INT.match(tok.text):
            raise self.error(f"expected {what} (non-negative integer), got {tok.text!r}", tok)
        return int(tok.text), tok

    def done(self):
        if self.pos < len(self.toks):
            tok = self.toks[self.pos]
            raise self.error(f"unexpected token {tok.text!r}", tok)


def _angle(line: _Line) -> float:
    tok = line.next("angle")
    if tok.text == "pi":
        return math.pi
    if tok.text == "pi/2":
        return math.pi / 2
    if not _NUMBER.match(tok.text):
        raise line.error(f"expected angle, got {tok.text!r}", tok)
    val = float(tok.text)
    if line.pos < len(line.toks) and line.toks[line.pos].text == "*":
        line.pos += 1
        line.keyword("pi")
        val *= math.pi
    if not math.isfinite(val):
        raise line.error(f"angle out of range: {tok.text}", tok)
    return val


def parse(src: str) -> Program:
    """Parse program text; raises ParseError on the first bad statement."""
    params: dict[str, tuple[float, _Line, _Tok]] = {}
    steps: list[tuple[Step, _Line, _Tok]] = []

    for lineno, raw in enumerate(src.splitlines(), start=1):
        line = _Line(lineno, raw)
        if not line.toks:
            continue
        head = line.toks[0]
        line.pos = 1
        if head.text == "param":
            name = line.keyword("chi", "delta")
            line.keyword("=")
            val, tok = line.number()
            if name.text in params:
                raise line.error(f"duplicate param {name.text}", name)
            params[name.text] = (val, line, tok)
        elif head.text == "cutoff":
            val, tok = line.integer("cutoff")
            if val < MIN_CUTOFF:
                raise line.error(f"cutoff must be >= {MIN_CUTOFF}, got {val}", tok)
            if "cutoff" in params:
                raise line.error("duplicate cutoff", head)
            params["cutoff"] = (val, line, tok)
        elif head.text == "prepare":
            what = line.keyword("atom", "cavity")
            if what.text == "atom":
                tok = line.keyword("e", "g", "superposition")
                steps.append((PrepareAtom(AtomPreparation(tok.text)), line, head))
            else:
                cav = line.keyword("A", "B")
                line.keyword("fock")
                n, tok = line.integer("fock number")
                steps.append((PrepareCavity(_CAVITIES[cav.text], n), line, tok))
        elif head.text == "rotate":
            steps.append((Rotate(_angle(line)), line, head))
        elif head.text == "interact":
            cav = line.keyword("A", "B")
            tau, tok = line.number("interaction time")
            if tau < 0:
                raise line.error(f"interaction time must be >= 0, got {tok.text}", tok)
            steps.append((Interact(_CAVITIES[cav.text], tau), line, head))
        elif head.text == "measure":
            line.keyword("atom")
            lvl = line.keyword("e", "g")
            seed = None
            if line.pos < len(line.toks):
                line.keyword("sample")
                seed, _ = line.integer("seed")
            steps.append((MeasureAtom(_LEVELS[lvl.text], seed), line, head))
        else:
            raise line.error(f"unknown keyword {head.text!r}", head)
        line.done()

    cutoff = params["cutoff"][0] if "cutoff" in params else Params().cutoff
    for step, line, tok in steps:
        if isinstance(step, PrepareCavity) and step.n > cutoff:
            raise line.error(f"fock {step.n} exceeds cutoff {cutoff}", tok)

    prog = Program(
        Params(
            chi=params["chi"][0] if "chi" in params else 0.0,
            delta=params["delta"][0] if "delta" in params else 0.0,
            cutoff=int(cutoff),
        ),
        tuple(step for step, _, _ in steps),
    )
    try:
        validate_program(prog)
    except ProgramError as exc:
        _, line, _ = steps[exc.step_index]
        raise line.error(exc.message, line.toks[0]) from exc
    return prog


def _num(x: float) -> str:
    return repr(float(x))


def _fmt_angle(theta: float) -> str:
    if theta == math.pi:
        return "pi"
    if theta == math.pi / 2:
        return "pi/2"
    return _num(theta)


def _fmt_step(step: Step) -> str:
    if isinstance(step, PrepareAtom):
        return f"prepare atom {step.state.value}"
    if isinstance(step, PrepareCavity):
        return f"prepare cavity {step.cavity.value} fock {step.n}"
    if isinstance(step, Rotate):
        return f"rotate {_fmt_angle(step.theta)}"
    if isinstance(step, Interact):
        return f"interact {step.cavity.value} {_num(step.tau)}"
    if isinstance(step, MeasureAtom):
        tail = f" sample {step.seed}" if step.sampled else ""
        return f"measure atom {step.outcome.symbol}{tail}"
    raise TypeError(f"not a step: {step!r}")


def format_program(prog: Program) -> str:
    """Canonical text. Parameters, including defaults, always come first."""
    p = prog.params
    lines = [f"param chi = {_num(p.chi)}", f"param delta = {_num(p.delta)}", f"cutoff {p.cutoff}"]
    lines += [_fmt_step(s) for s in prog.steps]
    return "\n".join(lines) + "\n"


def load(path) -> Program:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())
