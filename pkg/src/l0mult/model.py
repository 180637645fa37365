"""Instance data model, exact parsing, and the feasibility predicate.

An instance is the tuple (A, B, y, b, epsilon) describing the convex set
{x : ||y - Ax||_2 <= epsilon, Bx <= b} whose sparsest points are analyzed.
Numeric tokens are parsed exactly: decimal strings by base-10 expansion
("-2.5" becomes -5/2), fractions as "p/q".  Nothing is ever routed through
a float.

Indices are 0-based internally; rendering to the 1-based convention happens
only in the report layer.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import DimensionError, InfeasiblePoint, ParseError
from .linalg import Mat, Vec, norm_sq, vec, vec_sub

_NUM_RE = re.compile(r"^[+-]?(?:\d+(?:\.\d+)?|\d+/\d+)$")


def parse_rational(token) -> Fraction:
    """Parse a numeric token exactly; accepts str per the grammar, or int."""
    if isinstance(token, bool):
        raise ParseError(f"not a numeric token: {token!r}")
    if isinstance(token, int):
        return Fraction(token)
    if isinstance(token, float):
        raise ParseError(
            f"float token {token!r} is not exact; quote it as a decimal string")
    if not isinstance(token, str) or not _NUM_RE.match(token.strip()):
        raise ParseError(f"malformed numeric token: {token!r}")
    token = token.strip()
    if "/" in token:
        num, den = token.split("/")
        if int(den) == 0:
            raise ParseError(f"zero denominator in {token!r}")
    return Fraction(token)


def format_rational(q: Fraction) -> str:
    return str(q)


@dataclass(frozen=True)
class ProblemInstance:
    m: int
    n: int
    l: int
    A: Mat
    B: Mat
    y: Vec
    b: Vec
    epsilon: Fraction

    def __post_init__(self):
        if self.m < 1 or self.n < 1 or self.l < 0:
            raise DimensionError("need m >= 1, n >= 1, l >= 0")
        if self.A.rows != self.m or self.A.cols != self.n:
            raise DimensionError("A must be m x n")
        if self.B.rows != self.l or self.B.cols != self.n:
            raise DimensionError("B must be l x n")
        if len(self.y) != self.m or len(self.b) != self.l:
            raise DimensionError("y must have length m and b length l")
        if self.epsilon < 0:
            raise ValueError("epsilon must be nonnegative")

    @property
    def eps_sq(self) -> Fraction:
        return self.epsilon * self.epsilon


@dataclass(frozen=True)
class SolutionRecord:
    """A feasible point with its derived exact quantities."""

    x: Vec
    support: tuple[int, ...]        # {i : x_i != 0}
    active_set: tuple[int, ...]     # {j : (Bx)_j = b_j}
    residual_sq: Fraction           # ||y - Ax||_2^2
    strict_interior: bool           # residual_sq < epsilon^2


def _parse_matrix(rows, n: int, name: str) -> Mat:
    if not isinstance(rows, list) or any(not isinstance(r, list) for r in rows):
        raise ParseError(f"{name} must be an array of rows")
    parsed = []
    for r in rows:
        if len(r) != n:
            raise DimensionError(f"row of {name} has {len(r)} entries, expected {n}")
        parsed.append([parse_rational(t) for t in r])
    return Mat.from_rows(parsed, cols=n)


def _parse_vector(entries, length: int, name: str) -> Vec:
    if not isinstance(entries, list):
        raise ParseError(f"{name} must be an array")
    if len(entries) != length:
        raise DimensionError(f"{name} has {len(entries)} entries, expected {length}")
    return vec(parse_rational(t) for t in entries)


def parse_instance(text: str) -> ProblemInstance:
    """Parse an instance from its JSON text form.

    Top-level keys: m, n, l (integers), A, B (arrays of rows of numeric
    strings), y, b (arrays of numeric strings), epsilon (numeric string).
    With l = 0 the keys B and b may be absent.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ParseError("instance must be a JSON object")
    try:
        m, n, l = doc["m"], doc["n"], doc["l"]
    except KeyError as exc:
        raise ParseError(f"missing key {exc}") from exc
    for label, val in (("m", m), ("n", n), ("l", l)):
        if not isinstance(val, int) or isinstance(val, bool):
            raise ParseError(f"{label} must be an integer")
    if "A" not in doc or "y" not in doc or "epsilon" not in doc:
        raise ParseError("missing one of A, y, epsilon")
    a = _parse_matrix(doc["A"], n, "A")
    if a.rows != m:
        raise DimensionError(f"A has {a.rows} rows, expected {m}")
    y = _parse_vector(doc["y"], m, "y")
    if l == 0:
        b_mat = Mat(0, n, ())
        b_vec: Vec = ()
        if "B" in doc:
            b_mat = _parse_matrix(doc["B"], n, "B")
        if "b" in doc:
            b_vec = _parse_vector(doc["b"], 0 if "B" not in doc else b_mat.rows, "b")
        if b_mat.rows != 0 or len(b_vec) != 0:
            raise DimensionError("l = 0 but B or b is nonempty")
    else:
        if "B" not in doc or "b" not in doc:
            raise ParseError("l > 0 requires B and b")
        b_mat = _parse_matrix(doc["B"], n, "B")
        if b_mat.rows != l:
            raise DimensionError(f"B has {b_mat.rows} rows, expected {l}")
        b_vec = _parse_vector(doc["b"], l, "b")
    epsilon = parse_rational(doc["epsilon"])
    if epsilon < 0:
        raise ValueError("epsilon must be nonnegative")
    return ProblemInstance(m=m, n=n, l=l, A=a, B=b_mat, y=y, b=b_vec, epsilon=epsilon)


def serialize_instance(inst: ProblemInstance) -> str:
    """Canonical JSON text that reparses to an identical instance."""
    doc = {
        "m": inst.m,
        "n": inst.n,
        "l": inst.l,
        "A": [[format_rational(q) for q in row] for row in inst.A.data],
        "y": [format_rational(q) for q in inst.y],
        "epsilon": format_rational(inst.epsilon),
    }
    if inst.l > 0:
        doc["B"] = [[format_rational(q) for q in row] for row in inst.B.data]
        doc["b"] = [format_rational(q) for q in inst.b]
    return json.dumps(doc, indent=2)


def residual_sq_at(inst: ProblemInstance, x: Vec) -> Fraction:
    return norm_sq(vec_sub(inst.y, inst.A.mat_vec(x)))


def is_feasible(inst: ProblemInstance, x: Vec) -> bool:
    """Exact membership test for the constraint set."""
    if len(x) != inst.n:
        raise DimensionError(f"point has {len(x)} entries, expected {inst.n}")
    if residual_sq_at(inst, x) > inst.eps_sq:
        return False
    bx = inst.B.mat_vec(x)
    return all(v <= bi for v, bi in zip(bx, inst.b))


def make_record(inst: ProblemInstance, x: Vec) -> SolutionRecord:
    """Build the SolutionRecord of a feasible point; exact throughout."""
    x = vec(x)
    if len(x) != inst.n:
        raise DimensionError(f"point has {len(x)} entries, expected {inst.n}")
    rsq = residual_sq_at(inst, x)
    bx = inst.B.mat_vec(x)
    if rsq > inst.eps_sq or any(v > bi for v, bi in zip(bx, inst.b)):
        raise InfeasiblePoint(f"point {x} is not feasible")
    support = tuple(i for i, xi in enumerate(x) if xi != 0)
    active = tuple(j for j, (v, bi) in enumerate(zip(bx, inst.b)) if v == bi)
    return SolutionRecord(x=x, support=support, active_set=active,
                          residual_sq=rsq, strict_interior=rsq < inst.eps_sq)


def parse_point(text: str, n: int) -> Vec:
    """Parse a comma-separated exact point, e.g. "0,0,2,1" or "0,1,-1/2,0"."""
    parts = [p for p in text.split(",")]
    if len(parts) != n:
        raise DimensionError(f"point has {len(parts)} entries, expected {n}")
    return vec(parse_rational(p) for p in parts)
