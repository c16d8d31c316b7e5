"""Plain-text instance format.

    # comment lines start with '#'
    n m
    1 2 3 w=5      one edge per line, optional per-edge weight
    3 4

Vertices are 1..n; edges are numbered from 0 in file order.
"""

from __future__ import annotations

import hashlib
import logging

from balanced.core import Hypergraph, build, relabel
from balanced.errors import HypergraphError, ParseError


def _content_lines(text: str):
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield number, line


def parse_instance(text: str, strict_cover: bool = True) -> tuple[Hypergraph, list[int] | None]:
    lines = list(_content_lines(text))
    if not lines:
        raise ParseError("instance is empty")

    number, header = lines[0]
    try:
        n, m = (int(tok) for tok in header.split())
    except ValueError:
        raise ParseError(f"line {number}: expected 'n m', got {header!r}")
    if n < 0 or m < 0:
        raise ParseError(f"line {number}: counts must be nonnegative")
    if len(lines) - 1 != m:
        raise ParseError(f"header announces {m} edges, found {len(lines) - 1}")

    edges, weights = [], []
    for number, line in lines[1:]:
        members, weight = [], None
        for tok in line.split():
            if tok.startswith("w="):
                try:
                    weight = int(tok[2:])
                except ValueError:
                    raise ParseError(f"line {number}: bad weight {tok!r}")
                if weight < 0:
                    raise ParseError(f"line {number}: weights must be nonnegative")
                continue
            try:
                v = int(tok)
            except ValueError:
                raise ParseError(f"line {number}: bad vertex id {tok!r}")
            if not 1 <= v <= n:
                raise ParseError(f"line {number}: vertex {v} outside 1..{n}")
            members.append(v)
        edges.append(members)
        weights.append(weight)

    given = [w is not None for w in weights]
    if any(given) and not all(given):
        raise ParseError("w= must be given on every edge or on none")

    try:
        H = build(range(1, n + 1), edges, strict_cover=strict_cover)
    except HypergraphError as e:
        raise ParseError(f"invalid instance: {e}") from e
    logging.info(f"Parsed instance with n={H.n}, m={H.m}")
    return H, (weights if all(given) and weights else None)


def read_instance(path: str, strict_cover: bool = True) -> tuple[Hypergraph, list[int] | None]:
    with open(path, "rb") as handle:
        raw = handle.read()
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as e:
        raise ParseError(f"{path}: byte {e.start} is not valid UTF-8") from e
    return parse_instance(text, strict_cover=strict_cover)


def format_instance(H: Hypergraph, weights=None) -> str:
    if H.vertices != tuple(range(1, H.n + 1)):
        H = relabel(H)
    out = [f"{H.n} {H.m}"]
    for i in range(H.m):
        line = " ".join(str(v) for v in H.sorted_edge(i))
        if weights is not None:
            line += f" w={weights[i]}"
        out.append(line)
    return "\n".join(out) + "\n"


def instance_digest(H: Hypergraph, weights=None) -> str:
    return hashlib.sha256(format_instance(H, weights).encode("utf-8")).hexdigest()
