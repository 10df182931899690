"""Reader and writer for the line-oriented ``.mdp`` text format.

::

    mdp
    states 3
    label goal 1
    transitions
    0 a 1:1/2 2:1/2
    0 b 1:1/3 2:2/3
    1 - 1:1
    2 - 2:1

``#`` starts a comment.  Probabilities are ``p/q`` or decimal literals and
are read exactly.
"""

from __future__ import annotations

import re
from typing import NamedTuple

from .errors import ModelSyntaxError
from .mdp import Mdp, to_fraction, validate_mdp

__all__ = ["Model", "parse_model", "read_model", "format_model"]

_TOKEN = re.compile(r"\S+")
_NAME = re.compile(r"^[A-Za-z_][A-Za-z0-9_.\-]*$")


class Model(NamedTuple):
    mdp: Mdp
    labels: dict[str, frozenset[int]]


def _tokens(line):
    return [(m.group(), m.start() + 1) for m in _TOKEN.finditer(line)]


def _int(tok, col, lineno, what):
    if not tok.isdigit():
        raise ModelSyntaxError(f"expected {what}, found {tok!r}", lineno, col)
    return int(tok)


def parse_model(text: str) -> Model:
    lines = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        toks = _tokens(raw.split("#", 1)[0])
        if toks:
            lines.append((lineno, toks))
    if not lines or lines[0][1][0][0] != "mdp" or len(lines[0][1]) != 1:
        lineno, toks = lines[0] if lines else (1, [("", 1)])
        raise ModelSyntaxError("model must start with the header 'mdp'", lineno, toks[0][1])
    if len(lines) < 2 or lines[1][1][0][0] != "states" or len(lines[1][1]) != 2:
        lineno, toks = lines[1] if len(lines) > 1 else (lines[0][0], lines[0][1])
        raise ModelSyntaxError("expected 'states <count>'", lineno, toks[0][1])
    lineno, toks = lines[1]
    num_states = _int(toks[1][0], toks[1][1], lineno, "a state count")
    if num_states < 1:
        raise ModelSyntaxError("state count must be positive", lineno, toks[1][1])

    labels: dict[str, frozenset[int]] = {}
    k = 2
    while k < len(lines) and lines[k][1][0][0] == "label":
        lineno, toks = lines[k]
        if len(toks) < 2 or not _NAME.match(toks[1][0]):
            col = toks[1][1] if len(toks) > 1 else toks[0][1] + 5
            raise ModelSyntaxError("expected 'label <name> <id>...'", lineno, col)
        ids = set()
        for tok, col in toks[2:]:
            s = _int(tok, col, lineno, "a state id")
            if s >= num_states:
                raise ModelSyntaxError(f"label refers to unknown state {s}", lineno, col)
            ids.add(s)
        labels[toks[1][0]] = frozenset(labels.get(toks[1][0], frozenset()) | ids)
        k += 1
    if k >= len(lines) or [t for t, _ in lines[k][1]] != ["transitions"]:
        lineno, toks = lines[k] if k < len(lines) else lines[-1]
        raise ModelSyntaxError("expected 'transitions'", lineno, toks[0][1])
    k += 1

    raw, where = [], []
    for lineno, toks in lines[k:]:
        if len(toks) < 3:
            raise ModelSyntaxError(
                "expected '<source> <action> <dest>:<prob>...'", lineno, toks[-1][1]
            )
        source = _int(toks[0][0], toks[0][1], lineno, "a source state")
        action = toks[1][0]
        if ":" in action:
            raise ModelSyntaxError("missing action name (use '-')", lineno, toks[1][1])
        dist = []
        for tok, col in toks[2:]:
            dest, sep, prob = tok.partition(":")
            if not sep:
                raise ModelSyntaxError(f"expected <dest>:<prob>, found {tok!r}", lineno, col)
            d = _int(dest, col, lineno, "a destination state")
            try:
                p = to_fraction(prob)
            except ValueError as exc:
                raise ModelSyntaxError(str(exc), lineno, col + len(dest) + 1) from None
            dist.append((d, p))
        raw.append((source, action, dist))
        where.append(lineno)
    return Model(validate_mdp(num_states, raw, lines=where), labels)


def read_model(path) -> Model:
    with open(path, encoding="utf-8") as fh:
        return parse_model(fh.read())


def format_model(mdp: Mdp, labels=None) -> str:
    out = ["mdp", f"states {mdp.num_states}"]
    for name, ids in (labels or {}).items():
        out.append(" ".join(["label", name, *map(str, sorted(ids))]))
    out.append("transitions")
    for mu in mdp.transitions:
        dist = " ".join(f"{t}:{p}" for t, p in mu.distribution)
        out.append(f"{mu.source} {mu.action} {dist}")
    return "\n".join(out) + "\n"
