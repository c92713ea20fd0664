"""Text state files.

    # comment
    dims: 2 2 2
    amp 1 1 1  0.70710678118654757 0
    amp 2 2 2  0.70710678118654757 0

Indices are 1-based; omitted amplitudes are zero.
"""

import numpy as np

from .tensor_core import ComplexTensor


class ParseError(ValueError):
    def __init__(self, message, lineno=None):
        self.lineno = lineno
        prefix = f"line {lineno}: " if lineno is not None else ""
        super().__init__(prefix + message)


def _float(tok, lineno):
    try:
        return float(tok)
    except ValueError:
        raise ParseError(f"not a number: {tok!r}", lineno) from None


def _int(tok, lineno):
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"not an integer index: {tok!r}", lineno) from None


def parse_state(text):
    """Parse state-file text into a ComplexTensor."""
    dims = None
    amps = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.lower().startswith("dims:"):
            if dims is not None:
                raise ParseError("repeated dims header", lineno)
            toks = line[5:].split()
            dims = tuple(_int(t, lineno) for t in toks)
            if len(dims) < 2 or any(d < 1 for d in dims):
                raise ParseError(f"invalid dims {dims}", lineno)
            continue
        toks = line.split()
        if toks[0] != "amp":
            raise ParseError(f"unrecognized line {line!r}", lineno)
        if dims is None:
            raise ParseError("amplitude before dims header", lineno)
        if len(toks) != len(dims) + 3:
            raise ParseError(f"expected {len(dims)} indices and re im, got {len(toks) - 1} fields",
                             lineno)
        idx = tuple(_int(t, lineno) for t in toks[1:1 + len(dims)])
        for i, d in zip(idx, dims):
            if not 1 <= i <= d:
                raise ParseError(f"index {idx} out of range for dims {dims}", lineno)
        if idx in amps:
            raise ParseError(f"duplicate amplitude for index {idx}", lineno)
        amps[idx] = complex(_float(toks[-2], lineno), _float(toks[-1], lineno))
    if dims is None:
        raise ParseError("missing dims header")
    return ComplexTensor.from_amplitudes(dims, amps)


def read_state(path):
    with open(path) as fh:
        return parse_state(fh.read())


def format_state(t, threshold=0.0, comment=None):
    """State-file text with 17 significant digits; entries with |t| <= threshold are dropped."""
    lines = []
    if comment:
        lines += [f"# {c}" for c in comment.splitlines()]
    lines.append("dims: " + " ".join(str(d) for d in t.dims))
    for idx in np.ndindex(*t.dims):
        v = complex(t.data[idx])
        if abs(v) > threshold:
            ids = " ".join(str(i + 1) for i in idx)
            lines.append(f"amp {ids}  {v.real:.17g} {v.imag:.17g}")
    return "\n".join(lines) + "\n"


def write_state(t, path, threshold=0.0, comment=None):
    with open(path, "w") as fh:
        fh.write(format_state(t, threshold, comment))
