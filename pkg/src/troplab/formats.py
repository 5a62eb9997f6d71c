"""JSON formats for polynomials, graphs and families.

Rationals are written as strings (``"3"``, ``"-1/2"``) so files stay exact.

Polynomial::

    {"n": 2, "terms": [{"a": [0, 0], "c": "0", "coeff": [1.0, 0.0]}, ...]}

Graph::

    {"n": 2, "vertices": [["0", "0"]],
     "edges": [{"kind": "ray", "u": 0, "dir": [1, 0], "weight": 1}, ...]}

Family::

    {"n": 2, "terms": [{"a": [0, 0], "coeff": [1.0, 0.0], "gamma": "1"}, ...]}
"""

from __future__ import annotations

import json
import math
from fractions import Fraction
from pathlib import Path

from .amoeba import FamilyTerm, MonomialFamily
from .curve import BalancedGraph, Edge, graph_diagnostics
from .errors import ParseError
from .geom_core import to_fraction
from .hypersurface import TropicalPolynomial

__all__ = [
    "rat",
    "load_json",
    "detect_kind",
    "parse_polynomial",
    "polynomial_to_json",
    "parse_graph",
    "graph_to_json",
    "parse_family",
    "family_to_json",
    "diagnose",
]


def rat(x: Fraction) -> str:
    return str(Fraction(x))


def _parse_rat(x, where):
    try:
        return to_fraction(x)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"{where}: {x!r} is not a rational") from exc


def _int_list(x, where):
    if not isinstance(x, list) or not all(isinstance(v, int) and not isinstance(v, bool) for v in x):
        raise ParseError(f"{where}: expected a list of integers")
    return x


def _complex(x, where):
    if isinstance(x, (list, tuple)) and len(x) == 2 and all(isinstance(v, (int, float)) for v in x):
        return complex(x[0], x[1])
    if isinstance(x, (int, float)) and not isinstance(x, bool):
        return complex(x)
    raise ParseError(f"{where}: expected [re, im]")


def load_json(path) -> dict:
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON ({exc})") from exc
    if not isinstance(obj, dict):
        raise ParseError(f"{path}: top level must be an object")
    return obj


def detect_kind(obj: dict) -> str:
    if "vertices" in obj or "edges" in obj:
        return "graph"
    terms = obj.get("terms")
    if isinstance(terms, list) and terms and isinstance(terms[0], dict) and "gamma" in terms[0]:
        return "family"
    return "polynomial"


def _dimension(obj):
    n = obj.get("n")
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ParseError("'n' must be a positive integer")
    return n


def _terms(obj):
    terms = obj.get("terms")
    if not isinstance(terms, list) or not terms:
        raise ParseError("'terms' must be a nonempty list")
    for k, t in enumerate(terms):
        if not isinstance(t, dict) or "a" not in t:
            raise ParseError(f"term {k}: expected an object with key 'a'")
    return terms


def _polynomial_fields(obj, convention="min"):
    n = _dimension(obj)
    terms = {}
    coeffs = {}
    for k, t in enumerate(_terms(obj)):
        a = tuple(_int_list(t["a"], f"term {k}"))
        if "c" not in t:
            raise ParseError(f"term {k}: missing valuation 'c'")
        c = _parse_rat(t["c"], f"term {k}")
        terms.setdefault(a, []).append(-c if convention == "max" else c)
        if "coeff" in t:
            coeffs[a] = _complex(t["coeff"], f"term {k}")
    return n, terms, coeffs


def parse_polynomial(obj: dict, convention: str = "min") -> TropicalPolynomial:
    """Build a polynomial; ``convention="max"`` negates valuations on the way in."""
    n, terms, coeffs = _polynomial_fields(obj, convention)
    dup = [a for a, cs in terms.items() if len(cs) > 1]
    if dup:
        raise ParseError(f"duplicate support point {dup[0]}")
    bad = [a for a in terms if len(a) != n]
    if bad:
        raise ParseError(f"exponent {bad[0]} does not have length {n}")
    if coeffs and set(coeffs) != set(terms):
        raise ParseError("'coeff' must be given for all terms or none")
    return TropicalPolynomial({a: cs[0] for a, cs in terms.items()}, n, coeffs or None)


def polynomial_to_json(T: TropicalPolynomial, convention: str = "min") -> dict:
    terms = []
    for a, c in T.terms.items():
        entry = {"a": list(a), "c": rat(-c if convention == "max" else c)}
        if T.coefficients is not None:
            z = T.coefficients[a]
            entry["coeff"] = [z.real, z.imag]
        terms.append(entry)
    return {"n": T.n, "terms": terms}


def _graph_fields(obj):
    n = _dimension(obj)
    verts = obj.get("vertices")
    edges = obj.get("edges")
    if not isinstance(verts, list) or not isinstance(edges, list):
        raise ParseError("'vertices' and 'edges' must be lists")
    vertices = []
    for i, v in enumerate(verts):
        if not isinstance(v, list):
            raise ParseError(f"vertex {i}: expected a list of rationals")
        vertices.append(tuple(_parse_rat(x, f"vertex {i}") for x in v))
    parsed = []
    for k, e in enumerate(edges):
        if not isinstance(e, dict):
            raise ParseError(f"edge {k}: expected an object")
        for key in ("kind", "u", "dir"):
            if key not in e:
                raise ParseError(f"edge {k}: missing '{key}'")
        weight = e.get("weight", 1)
        if not isinstance(weight, int) or isinstance(weight, bool):
            raise ParseError(f"edge {k}: weight must be an integer")
        parsed.append(Edge(e["kind"], e["u"], e.get("v"), tuple(_int_list(e["dir"], f"edge {k}")), weight))
    return n, vertices, parsed


def parse_graph(obj: dict) -> BalancedGraph:
    n, vertices, edges = _graph_fields(obj)
    problems = graph_diagnostics(n, vertices, edges)
    if problems:
        raise ParseError("; ".join(problems))
    return BalancedGraph(n, vertices, edges)


def graph_to_json(G: BalancedGraph) -> dict:
    edges = []
    for e in G.edges:
        entry = {"kind": e.kind, "u": e.u}
        if not e.is_ray:
            entry["v"] = e.v
        entry["dir"] = list(e.direction)
        entry["weight"] = e.weight
        edges.append(entry)
    return {"n": G.n, "vertices": [[rat(x) for x in v] for v in G.vertices], "edges": edges}


def parse_family(obj: dict) -> MonomialFamily:
    n = _dimension(obj)
    terms = []
    for k, t in enumerate(_terms(obj)):
        a = tuple(_int_list(t["a"], f"term {k}"))
        if len(a) != n:
            raise ParseError(f"term {k}: exponent does not have length {n}")
        coeff = _complex(t.get("coeff", [1.0, 0.0]), f"term {k}")
        gamma = _parse_rat(t.get("gamma", "0"), f"term {k}")
        terms.append(FamilyTerm(a, coeff, gamma))
    if len({t.exponent for t in terms}) != len(terms):
        raise ParseError("duplicate support point")
    try:
        return MonomialFamily(terms, n)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def family_to_json(F: MonomialFamily) -> dict:
    return {
        "n": F.n,
        "terms": [
            {"a": list(t.exponent), "coeff": [t.coeff.real, t.coeff.imag], "gamma": rat(t.gamma)}
            for t in F.terms
        ],
    }


def diagnose(path) -> list:
    """Schema and semantic problems of a JSON input file; empty when valid.

    Raises :class:`ParseError` when the file is not readable JSON at all.
    """
    obj = load_json(path)
    kind = detect_kind(obj)
    try:
        if kind == "graph":
            n, vertices, edges = _graph_fields(obj)
            return graph_diagnostics(n, vertices, edges)
        if kind == "family":
            parse_family(obj)
            return []
        n, terms, coeffs = _polynomial_fields(obj)
        problems = [f"duplicate support point {list(a)}" for a, cs in terms.items() if len(cs) > 1]
        problems += [f"exponent {list(a)} does not have length {n}" for a in terms if len(a) != n]
        return problems
    except ParseError as exc:
        return [str(exc)]


def dump(obj, path: Path) -> None:
    path.write_text(json.dumps(obj, indent=2, sort_keys=False) + "\n")


def float_or_none(x: float):
    return None if math.isinf(x) or math.isnan(x) else x
